//! Image-fidelity and statistical measurements.
//!
//! PSNR uses the 8-bit peak of 255 and reports +∞ (serialized as `inf`) for
//! identical inputs. SSIM is the standard windowed form with an 11×11
//! Gaussian window, σ = 1.5, C1 = (0.01·255)², C2 = (0.03·255)², computed
//! per channel and averaged; images smaller than the window fall back to a
//! single global window. Histogram statistics (Shannon entropy, chi-square
//! against the uniform distribution) operate on 256-bin counts per channel.

use std::time::Instant;

use serde_json::json;

use crate::error::{Error, Result};
use crate::raster::ImageBuffer;

pub type Histogram = [u64; 256];

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

/// Peak signal-to-noise ratio in dB over all samples; +∞ when identical.
pub fn psnr(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    check_shapes(a, b)?;
    let sse: u64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse as f64 / a.samples().len() as f64;
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

/// Mean structural similarity, per channel then averaged.
pub fn ssim(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    check_shapes(a, b)?;
    let (w, h) = (a.width() as usize, a.height() as usize);
    let planes_a = a.split_channels();
    let planes_b = b.split_channels();
    let total: f64 = planes_a
        .iter()
        .zip(&planes_b)
        .map(|(pa, pb)| plane_ssim(pa, pb, w, h))
        .sum();
    Ok(total / planes_a.len() as f64)
}

fn plane_ssim(a: &[u8], b: &[u8], w: usize, h: usize) -> f64 {
    let fa: Vec<f64> = a.iter().map(|&v| v as f64).collect();
    let fb: Vec<f64> = b.iter().map(|&v| v as f64).collect();
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return global_ssim(&fa, &fb);
    }

    let kernel = gaussian_kernel();
    let prod: Vec<f64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    let sq_a: Vec<f64> = fa.iter().map(|x| x * x).collect();
    let sq_b: Vec<f64> = fb.iter().map(|x| x * x).collect();

    let mu_a = filter_valid(&fa, w, h, &kernel);
    let mu_b = filter_valid(&fb, w, h, &kernel);
    let m_aa = filter_valid(&sq_a, w, h, &kernel);
    let m_bb = filter_valid(&sq_b, w, h, &kernel);
    let m_ab = filter_valid(&prod, w, h, &kernel);

    let mut sum = 0.0;
    for i in 0..mu_a.len() {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = m_aa[i] - ma * ma;
        let var_b = m_bb[i] - mb * mb;
        let cov = m_ab[i] - ma * mb;
        sum += local_ssim(ma, mb, var_a, var_b, cov);
    }
    sum / mu_a.len() as f64
}

/// Single uniformly weighted window over the whole plane, for inputs
/// smaller than the 11×11 window.
fn global_ssim(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let var_a = a.iter().map(|x| (x - ma) * (x - ma)).sum::<f64>() / n;
    let var_b = b.iter().map(|x| (x - mb) * (x - mb)).sum::<f64>() / n;
    let cov = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - ma) * (y - mb))
        .sum::<f64>()
        / n;
    local_ssim(ma, mb, var_a, var_b, cov)
}

fn local_ssim(mu_a: f64, mu_b: f64, var_a: f64, var_b: f64, cov: f64) -> f64 {
    ((2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2))
        / ((mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2))
}

fn gaussian_kernel() -> [f64; SSIM_WINDOW] {
    let mut k = [0.0; SSIM_WINDOW];
    let center = (SSIM_WINDOW / 2) as f64;
    let mut sum = 0.0;
    for (i, v) in k.iter_mut().enumerate() {
        let d = i as f64 - center;
        *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
        sum += *v;
    }
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Separable Gaussian filter, valid region only: output is
/// `(w - 10) × (h - 10)`.
fn filter_valid(src: &[f64], w: usize, h: usize, kernel: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let out_w = w - SSIM_WINDOW + 1;
    let out_h = h - SSIM_WINDOW + 1;
    // Rows first.
    let mut rows = vec![0.0; out_w * h];
    for y in 0..h {
        for x in 0..out_w {
            let mut acc = 0.0;
            for (t, &k) in kernel.iter().enumerate() {
                acc += src[y * w + x + t] * k;
            }
            rows[y * out_w + x] = acc;
        }
    }
    // Then columns.
    let mut out = vec![0.0; out_w * out_h];
    for y in 0..out_h {
        for x in 0..out_w {
            let mut acc = 0.0;
            for (t, &k) in kernel.iter().enumerate() {
                acc += rows[(y + t) * out_w + x] * k;
            }
            out[y * out_w + x] = acc;
        }
    }
    out
}

/// Exact 256-bin counts, one histogram per channel.
pub fn histogram(img: &ImageBuffer) -> Vec<Histogram> {
    let ch = img.channels() as usize;
    let mut hists = vec![[0u64; 256]; ch];
    for (i, &s) in img.samples().iter().enumerate() {
        hists[i % ch][s as usize] += 1;
    }
    hists
}

/// Chi-square statistic of a histogram against the uniform expectation
/// `n/256`. Requires at least 256 counted samples.
pub fn chi_square_uniform(hist: &Histogram) -> Result<f64> {
    let n: u64 = hist.iter().sum();
    if n < 256 {
        return Err(Error::precondition(format!(
            "chi-square needs at least 256 samples, got {n}"
        )));
    }
    let expected = n as f64 / 256.0;
    Ok(hist
        .iter()
        .map(|&obs| {
            let d = obs as f64 - expected;
            d * d / expected
        })
        .sum())
}

/// Shannon entropy of a histogram in bits, 0 to 8.
pub fn shannon_entropy(hist: &Histogram) -> f64 {
    let n: u64 = hist.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    hist.iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Run `op` under a monotonic wall clock; returns its result and elapsed
/// seconds.
pub fn timed<T>(op: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let value = op();
    (value, start.elapsed().as_secs_f64())
}

fn check_shapes(a: &ImageBuffer, b: &ImageBuffer) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels() {
        return Err(Error::precondition(format!(
            "shape mismatch: {}x{}x{} vs {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    Ok(())
}

/// All measurements for one run. Fidelity fields compare `test` against
/// `reference`; the statistical fields describe `test` itself.
#[derive(Debug, Clone)]
pub struct MetricsReport {
    pub psnr_db: f64,
    pub ssim: f64,
    pub entropy_bits: Vec<f64>,
    pub histogram: Vec<Histogram>,
    pub chi_square: Vec<f64>,
    pub encrypt_seconds: Option<f64>,
    pub decrypt_seconds: Option<f64>,
}

impl MetricsReport {
    pub fn compare(reference: &ImageBuffer, test: &ImageBuffer) -> Result<Self> {
        let hists = histogram(test);
        let entropy_bits = hists.iter().map(shannon_entropy).collect();
        let chi_square = hists
            .iter()
            .map(chi_square_uniform)
            .collect::<Result<Vec<f64>>>()
            .unwrap_or_default();
        Ok(Self {
            psnr_db: psnr(reference, test)?,
            ssim: ssim(reference, test)?,
            entropy_bits,
            histogram: hists,
            chi_square,
            encrypt_seconds: None,
            decrypt_seconds: None,
        })
    }

    /// `metric,channel,value` rows. The raw histogram is omitted here; it is
    /// exported separately (see the histogram CLI command).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,channel,value\n");
        out.push_str(&format!("psnr_db,all,{}\n", format_value(self.psnr_db)));
        out.push_str(&format!("ssim,all,{}\n", format_value(self.ssim)));
        for (c, e) in self.entropy_bits.iter().enumerate() {
            out.push_str(&format!("entropy_bits,{c},{}\n", format_value(*e)));
        }
        for (c, x) in self.chi_square.iter().enumerate() {
            out.push_str(&format!("chi_square,{c},{}\n", format_value(*x)));
        }
        if let Some(t) = self.encrypt_seconds {
            out.push_str(&format!("encrypt_seconds,all,{}\n", format_value(t)));
        }
        if let Some(t) = self.decrypt_seconds {
            out.push_str(&format!("decrypt_seconds,all,{}\n", format_value(t)));
        }
        out
    }

    /// JSON mirror of the CSV fields plus the raw histograms.
    pub fn to_json(&self) -> String {
        let psnr = if self.psnr_db.is_infinite() {
            json!("inf")
        } else {
            json!(self.psnr_db)
        };
        let hists: Vec<Vec<u64>> = self.histogram.iter().map(|h| h.to_vec()).collect();
        json!({
            "psnr_db": psnr,
            "ssim": self.ssim,
            "entropy_bits": self.entropy_bits,
            "chi_square": self.chi_square,
            "histogram": hists,
            "encrypt_seconds": self.encrypt_seconds,
            "decrypt_seconds": self.decrypt_seconds,
        })
        .to_string()
    }
}

/// +∞ serializes as the documented `inf` sentinel.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() && v > 0.0 {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}
