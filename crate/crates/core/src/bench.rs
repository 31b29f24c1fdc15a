//! Benchmark harness: pipeline variants against an AES-CTR baseline.
//!
//! Each (scheme, size) cell runs on a deterministic synthetic image, takes
//! one warmup pass, then reports the median wall-clock over the configured
//! repetitions plus fidelity of the decrypted output. Cells execute one at
//! a time so timings do not interfere; only the parallel scheme uses
//! internal parallelism. Absolute seconds are machine-dependent — orderings
//! and scaling trends are the meaningful output.

use aes::cipher::{KeyIvInit, StreamCipher};

use crate::error::{Error, Result};
use crate::metrics::{format_value, psnr, ssim, timed};
use crate::permute::KeystreamState;
use crate::pipeline::{
    decrypt_image_with, derive_params, encrypt_image_with, CipherMode, Engine, DEFAULT_BLOCK_SIZE,
};
use crate::raster::ImageBuffer;

type Aes128Ctr = ctr::Ctr64LE<aes::Aes128>;

/// Schemes the harness can time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    FractalNaiveDft,
    FractalFft,
    FractalFftParallel,
    AesCtrBaseline,
}

impl Scheme {
    pub fn all() -> [Scheme; 4] {
        [
            Scheme::FractalNaiveDft,
            Scheme::FractalFft,
            Scheme::FractalFftParallel,
            Scheme::AesCtrBaseline,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::FractalNaiveDft => "fractal-naive-dft",
            Scheme::FractalFft => "fractal-fft",
            Scheme::FractalFftParallel => "fractal-fft-parallel",
            Scheme::AesCtrBaseline => "aes-ctr-baseline",
        }
    }

    pub fn parse(name: &str) -> Option<Scheme> {
        Self::all().into_iter().find(|s| s.name() == name)
    }

    fn engine(&self) -> Option<Engine> {
        match self {
            Scheme::FractalNaiveDft => Some(Engine::NaiveDft),
            Scheme::FractalFft => Some(Engine::Fft),
            Scheme::FractalFftParallel => Some(Engine::FftParallel),
            Scheme::AesCtrBaseline => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Square image side lengths.
    pub image_sizes: Vec<u32>,
    pub schemes: Vec<Scheme>,
    /// Timed repetitions per cell; the median is reported.
    pub repetitions: u32,
    /// Seed for synthetic test images and baseline key material.
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            image_sizes: vec![256, 512, 1024],
            schemes: Scheme::all().to_vec(),
            repetitions: 5,
            seed: 0xF7C7,
        }
    }
}

/// One benchmark result. A cell that cannot run (image smaller than the
/// block size) carries NaN in every numeric field and renders as `skipped`.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub scheme: String,
    pub image_size: u32,
    pub encrypt_seconds: f64,
    pub decrypt_seconds: f64,
    pub psnr_db: f64,
    pub ssim: f64,
}

impl BenchRow {
    pub fn is_skipped(&self) -> bool {
        self.encrypt_seconds.is_nan()
    }
}

/// Deterministic synthetic test image: smooth gradients plus a sinusoidal
/// texture plus seeded noise, so block spectra are nontrivial.
pub fn synthetic_image(seed: u64, size: u32, channels: u8) -> ImageBuffer {
    let mut ks = KeystreamState::new(seed);
    let n = size as f64;
    let mut samples = Vec::with_capacity((size * size * channels as u32) as usize);
    for y in 0..size {
        for x in 0..size {
            for c in 0..channels {
                let fx = x as f64 / n;
                let fy = y as f64 / n;
                let gradient = 64.0 + 96.0 * fx + 48.0 * fy;
                let texture = 28.0
                    * (std::f64::consts::TAU * fx * (3.0 + c as f64)).sin()
                    * (std::f64::consts::TAU * fy * 2.0).cos();
                let noise = (ks.next_u64() % 33) as f64 - 16.0;
                samples.push((gradient + texture + noise).round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    ImageBuffer::new(size, size, channels, samples).expect("valid synthetic image")
}

/// AES-128-CTR over the raw sample bytes: zero nonce, caller-recorded
/// counter base. Timing/fidelity baseline only, backed by the RustCrypto
/// implementation.
pub fn aes_ctr_baseline_encrypt(img: &ImageBuffer, key: &[u8; 16], counter_base: u64) -> Vec<u8> {
    aes_ctr_apply(img.samples().to_vec(), key, counter_base)
}

/// Exact inverse of [`aes_ctr_baseline_encrypt`]; CTR decryption re-applies
/// the same keystream.
pub fn aes_ctr_baseline_decrypt(
    ciphertext: &[u8],
    key: &[u8; 16],
    counter_base: u64,
) -> Vec<u8> {
    aes_ctr_apply(ciphertext.to_vec(), key, counter_base)
}

fn aes_ctr_apply(mut data: Vec<u8>, key: &[u8; 16], counter_base: u64) -> Vec<u8> {
    let mut iv = [0u8; 16];
    iv[8..16].copy_from_slice(&counter_base.to_le_bytes());
    let mut cipher = Aes128Ctr::new(key.into(), &iv.into());
    cipher.apply_keystream(&mut data);
    data
}

/// Run every (scheme, size) cell in the config, serially.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.repetitions == 0 {
        return Err(Error::precondition("repetitions must be at least 1"));
    }
    if cfg.schemes.is_empty() || cfg.image_sizes.is_empty() {
        return Err(Error::precondition("config needs at least one scheme and one size"));
    }
    let mut rows = Vec::with_capacity(cfg.schemes.len() * cfg.image_sizes.len());
    for &scheme in &cfg.schemes {
        for &size in &cfg.image_sizes {
            rows.push(run_cell(scheme, size, cfg)?);
        }
    }
    Ok(rows)
}

fn run_cell(scheme: Scheme, size: u32, cfg: &BenchConfig) -> Result<BenchRow> {
    if scheme.engine().is_some() && size < DEFAULT_BLOCK_SIZE as u32 {
        return Ok(BenchRow {
            scheme: scheme.name().to_string(),
            image_size: size,
            encrypt_seconds: f64::NAN,
            decrypt_seconds: f64::NAN,
            psnr_db: f64::NAN,
            ssim: f64::NAN,
        });
    }

    let img = synthetic_image(cfg.seed ^ u64::from(size), size, 1);
    let mut enc_times = Vec::with_capacity(cfg.repetitions as usize);
    let mut dec_times = Vec::with_capacity(cfg.repetitions as usize);
    let decrypted;

    match scheme.engine() {
        Some(engine) => {
            let passphrase = format!("bench-{:016x}", cfg.seed);
            let params =
                derive_params(passphrase.as_bytes(), DEFAULT_BLOCK_SIZE, CipherMode::Lossless)?;
            // Warmup pass, untimed.
            let container = encrypt_image_with(&img, &params, engine)?;
            let mut last = decrypt_image_with(&container, &params, engine)?;
            for _ in 0..cfg.repetitions {
                let (container, te) = timed(|| encrypt_image_with(&img, &params, engine));
                let container = container?;
                let (plain, td) = timed(|| decrypt_image_with(&container, &params, engine));
                last = plain?;
                enc_times.push(te);
                dec_times.push(td);
            }
            decrypted = last;
        }
        None => {
            let mut ks = KeystreamState::new(cfg.seed ^ u64::from(size));
            let mut key = [0u8; 16];
            key[..8].copy_from_slice(&ks.next_u64().to_le_bytes());
            key[8..].copy_from_slice(&ks.next_u64().to_le_bytes());
            let counter_base = ks.next_u64();

            let ciphertext = aes_ctr_baseline_encrypt(&img, &key, counter_base);
            let mut last = aes_ctr_baseline_decrypt(&ciphertext, &key, counter_base);
            for _ in 0..cfg.repetitions {
                let (ciphertext, te) = timed(|| aes_ctr_baseline_encrypt(&img, &key, counter_base));
                let (plain, td) =
                    timed(|| aes_ctr_baseline_decrypt(&ciphertext, &key, counter_base));
                last = plain;
                enc_times.push(te);
                dec_times.push(td);
            }
            decrypted = ImageBuffer::new(img.width(), img.height(), img.channels(), last)?;
        }
    }

    Ok(BenchRow {
        scheme: scheme.name().to_string(),
        image_size: size,
        encrypt_seconds: median(&mut enc_times),
        decrypt_seconds: median(&mut dec_times),
        psnr_db: psnr(&img, &decrypted)?,
        ssim: ssim(&img, &decrypted)?,
    })
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

/// Render rows with a stable column order matching [`BenchRow`].
pub fn emit_table(rows: &[BenchRow], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut out =
                String::from("scheme,image_size,encrypt_seconds,decrypt_seconds,psnr_db,ssim\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.scheme,
                    r.image_size,
                    cell(r.encrypt_seconds),
                    cell(r.decrypt_seconds),
                    cell(r.psnr_db),
                    cell(r.ssim),
                ));
            }
            out
        }
        TableFormat::Markdown => {
            let mut out = String::from(
                "| Scheme | Image Size | Encryption Time (s) | Decryption Time (s) | PSNR (dB) | SSIM |\n\
                 |---|---|---|---|---|---|\n",
            );
            for r in rows {
                out.push_str(&format!(
                    "| {} | {}x{} | {} | {} | {} | {} |\n",
                    r.scheme,
                    r.image_size,
                    r.image_size,
                    pretty(r.encrypt_seconds),
                    pretty(r.decrypt_seconds),
                    pretty(r.psnr_db),
                    pretty(r.ssim),
                ));
            }
            out
        }
    }
}

fn cell(v: f64) -> String {
    if v.is_nan() {
        "skipped".to_string()
    } else {
        format_value(v)
    }
}

fn pretty(v: f64) -> String {
    if v.is_nan() {
        "skipped".to_string()
    } else if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.6}")
    }
}
