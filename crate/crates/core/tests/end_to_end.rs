//! Cross-module flows through the public API: file-backed containers, the
//! bundled test scenes, engine equivalence, and report generation.

use frct_core::bench::synthetic_image;
use frct_core::container::EncryptedContainer;
use frct_core::metrics::MetricsReport;
use frct_core::pipeline::{
    decrypt_image, decrypt_image_with, derive_params, encrypt_image, encrypt_image_with,
    quantized_render, CipherMode, Engine,
};
use frct_core::raster::{load_image, save_image};

fn data_path(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn container_file_round_trip_recovers_the_image() {
    let dir = tempfile::tempdir().unwrap();
    let img = synthetic_image(21, 48, 3);
    let params = derive_params(b"file-flow", 16, CipherMode::Lossless).unwrap();

    let container = encrypt_image(&img, &params).unwrap();
    let path = dir.path().join("scene.frct");
    container.write_to(&path).unwrap();

    let loaded = EncryptedContainer::read_from(&path).unwrap();
    assert_eq!(loaded, container);
    assert_eq!(decrypt_image(&loaded, &params).unwrap(), img);
}

#[test]
fn bundled_scenes_round_trip_and_render() {
    for name in ["dunes_gray.pgm", "harbor_rgb.ppm", "orchard_rgb.ppm"] {
        let img = load_image(data_path(name)).unwrap();
        let params = derive_params(b"bundled", 32, CipherMode::Lossless).unwrap();
        let container = encrypt_image(&img, &params).unwrap();
        assert_eq!(decrypt_image(&container, &params).unwrap(), img, "{name}");

        // The scene dimensions are multiples of the block size, so the
        // rendering matches them exactly.
        let view = quantized_render(&container).unwrap();
        assert_eq!(view.width(), img.width(), "{name}");
        assert_eq!(view.height(), img.height(), "{name}");
        assert_eq!(view.channels(), img.channels(), "{name}");
    }
}

#[test]
fn all_engines_agree_end_to_end() {
    let img = synthetic_image(5, 40, 1);
    let params = derive_params(b"engines", 8, CipherMode::Lossless).unwrap();
    let fft = encrypt_image_with(&img, &params, Engine::Fft).unwrap();
    let par = encrypt_image_with(&img, &params, Engine::FftParallel).unwrap();
    assert_eq!(fft.encode(), par.encode(), "fft and parallel are bit-identical");

    // The naive engine differs in low-order float bits but must invert its
    // own output exactly after quantization.
    let naive = encrypt_image_with(&img, &params, Engine::NaiveDft).unwrap();
    let back = decrypt_image_with(&naive, &params, Engine::NaiveDft).unwrap();
    assert_eq!(back, img);
}

#[test]
fn quantized_flow_produces_a_saveable_view() {
    let dir = tempfile::tempdir().unwrap();
    let img = load_image(data_path("harbor_rgb.ppm")).unwrap();
    let params = derive_params(b"view", 32, CipherMode::Quantized).unwrap();
    let container = encrypt_image(&img, &params).unwrap();
    let view = quantized_render(&container).unwrap();

    let path = dir.path().join("view.ppm");
    save_image(&view, &path).unwrap();
    assert_eq!(load_image(&path).unwrap(), view);

    // The quantized container itself round-trips as bytes.
    assert_eq!(
        EncryptedContainer::decode(&container.encode()).unwrap(),
        container
    );
}

#[test]
fn metrics_report_of_a_real_round_trip() {
    let img = load_image(data_path("dunes_gray.pgm")).unwrap();
    let params = derive_params(b"report", 32, CipherMode::Lossless).unwrap();
    let container = encrypt_image(&img, &params).unwrap();
    let back = decrypt_image(&container, &params).unwrap();

    let report = MetricsReport::compare(&img, &back).unwrap();
    assert!(report.psnr_db.is_infinite());
    assert_eq!(report.ssim, 1.0);
    assert_eq!(report.histogram.len(), 1);
    assert_eq!(report.histogram[0].iter().sum::<u64>(), 128 * 128);
    assert!(report.to_csv().contains("psnr_db,all,inf"));
}
