//! End-to-end encryption and decryption pipelines.
//!
//! Encryption runs per channel: the plane is split into non-overlapping
//! power-of-two blocks (zero-padded at the right/bottom edges), each block
//! goes through forward FFT → Arnold coefficient scrambling → inverse FFT,
//! the resulting complex blocks are flattened in row-major block order, and
//! a key-seeded global shuffle of the coefficient slots finishes the layer.
//! Decryption inverts the stages in reverse order and crops the padding.
//!
//! Ciphertext coefficients stay in double precision end to end, which is
//! what makes lossless mode an exact inverse: the reconstruction error is
//! far below the 0.5 quantization threshold. The quantized mode renders
//! coefficient magnitudes to bytes for viewing and histogram analysis and
//! is not invertible.

use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::arnold::{arnold_permute_grid, ArnoldParams, Direction};
use crate::container::{EncryptedContainer, Payload};
use crate::error::{Error, Result};
use crate::permute::Permutation;
use crate::raster::ImageBuffer;
use crate::spectral::{dft2_naive, fft2, idft2_naive, ifft2, ComplexGrid};

/// Block sizes the pipeline accepts; all are powers of two so the radix-2
/// FFT and square Arnold grids apply.
pub const PERMITTED_BLOCK_SIZES: [u16; 5] = [8, 16, 32, 64, 128];

/// Default block size when the caller has no preference.
pub const DEFAULT_BLOCK_SIZE: u16 = 32;

/// How ciphertext is stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CipherMode {
    /// Complex coefficients as 64-bit floats; decryption is exact.
    Lossless,
    /// Magnitude-normalized bytes for viewing; not invertible.
    Quantized,
}

impl CipherMode {
    pub fn to_byte(self) -> u8 {
        match self {
            CipherMode::Lossless => 0,
            CipherMode::Quantized => 1,
        }
    }

    pub fn from_byte(b: u8) -> Result<Self> {
        match b {
            0 => Ok(CipherMode::Lossless),
            1 => Ok(CipherMode::Quantized),
            other => Err(Error::format(format!("unknown cipher mode byte {other}"))),
        }
    }
}

/// Key-derived parameters for one encryption run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CipherParams {
    pub block_size: u16,
    pub arnold_iterations: u16,
    pub shuffle_seed: u64,
    pub key_fingerprint: [u8; 8],
    pub mode: CipherMode,
}

/// Derive [`CipherParams`] from a passphrase.
///
/// The SHA-256 digest of the passphrase supplies every derived field:
/// bytes 0–7 are the shuffle seed (little-endian u64), bytes 8–9 pick the
/// Arnold iteration count as `1 + (u16 mod 64)`, and bytes 10–17 become the
/// key fingerprint the container header records. The fingerprint lets
/// decryption refuse a wrong key without exposing the seed.
pub fn derive_params(passphrase: &[u8], block_size: u16, mode: CipherMode) -> Result<CipherParams> {
    if passphrase.is_empty() {
        return Err(Error::precondition("passphrase must not be empty"));
    }
    if !PERMITTED_BLOCK_SIZES.contains(&block_size) {
        return Err(Error::precondition(format!(
            "block size {block_size} not in {PERMITTED_BLOCK_SIZES:?}"
        )));
    }
    let digest = Sha256::digest(passphrase);
    let shuffle_seed = u64::from_le_bytes(digest[0..8].try_into().unwrap());
    let k_source = u16::from_le_bytes(digest[8..10].try_into().unwrap());
    let arnold_iterations = 1 + (k_source % 64);
    let mut key_fingerprint = [0u8; 8];
    key_fingerprint.copy_from_slice(&digest[10..18]);
    Ok(CipherParams {
        block_size,
        arnold_iterations,
        shuffle_seed,
        key_fingerprint,
        mode,
    })
}

/// Which transform backend drives the per-block stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Direct double-sum DFT; benchmark reference only.
    NaiveDft,
    /// Radix-2 FFT, blocks processed serially.
    Fft,
    /// Radix-2 FFT, blocks processed in parallel. Bit-identical to [`Engine::Fft`].
    FftParallel,
}

/// Split a plane into b×b blocks in row-major block order, zero-padding the
/// right and bottom edges. Pixel values land in the real parts.
pub fn split_blocks(plane: &[u8], width: u32, height: u32, block_size: u16) -> Vec<ComplexGrid> {
    let b = block_size as usize;
    let (w, h) = (width as usize, height as usize);
    debug_assert_eq!(plane.len(), w * h);
    let blocks_x = w.div_ceil(b);
    let blocks_y = h.div_ceil(b);
    let mut blocks = Vec::with_capacity(blocks_x * blocks_y);
    for by in 0..blocks_y {
        for bx in 0..blocks_x {
            let mut values = vec![Complex64::new(0.0, 0.0); b * b];
            for row in 0..b {
                let y = by * b + row;
                if y >= h {
                    break;
                }
                for col in 0..b {
                    let x = bx * b + col;
                    if x >= w {
                        break;
                    }
                    values[row * b + col] = Complex64::new(plane[y * w + x] as f64, 0.0);
                }
            }
            blocks.push(ComplexGrid::new(b, b, values).expect("b*b values"));
        }
    }
    blocks
}

/// Reassemble blocks produced by [`split_blocks`], cropping the padding.
/// Returns the real parts of the plane at the original `width` × `height`.
pub fn merge_blocks(
    blocks: &[ComplexGrid],
    width: u32,
    height: u32,
    block_size: u16,
) -> Result<Vec<f64>> {
    let b = block_size as usize;
    let (w, h) = (width as usize, height as usize);
    let blocks_x = w.div_ceil(b);
    let blocks_y = h.div_ceil(b);
    if blocks.len() != blocks_x * blocks_y {
        return Err(Error::precondition(format!(
            "expected {} blocks for {w}x{h} at block size {b}, got {}",
            blocks_x * blocks_y,
            blocks.len()
        )));
    }
    let mut plane = vec![0.0f64; w * h];
    for (i, block) in blocks.iter().enumerate() {
        if block.rows() != b || block.cols() != b {
            return Err(Error::precondition("block dimensions do not match block size"));
        }
        let by = i / blocks_x;
        let bx = i % blocks_x;
        for row in 0..b {
            let y = by * b + row;
            if y >= h {
                break;
            }
            for col in 0..b {
                let x = bx * b + col;
                if x >= w {
                    break;
                }
                plane[y * w + x] = block.get(row, col).re;
            }
        }
    }
    Ok(plane)
}

/// One block through the forward layer: FFT, Arnold scramble of the
/// spectrum positions, inverse FFT back to a (complex) spatial block.
pub fn encrypt_block(block: &ComplexGrid, params: &CipherParams) -> Result<ComplexGrid> {
    transform_block(block, params, Engine::Fft, Direction::Forward)
}

/// Exact inverse of [`encrypt_block`] under equal params.
pub fn decrypt_block(block: &ComplexGrid, params: &CipherParams) -> Result<ComplexGrid> {
    transform_block(block, params, Engine::Fft, Direction::Inverse)
}

fn transform_block(
    block: &ComplexGrid,
    params: &CipherParams,
    engine: Engine,
    direction: Direction,
) -> Result<ComplexGrid> {
    let b = params.block_size as usize;
    if block.rows() != b || block.cols() != b {
        return Err(Error::precondition(format!(
            "block is {}x{}, expected {b}x{b}",
            block.rows(),
            block.cols()
        )));
    }
    let arnold = ArnoldParams::new(b, params.arnold_iterations as u32)?;
    let spectrum = match engine {
        Engine::NaiveDft => dft2_naive(block),
        Engine::Fft | Engine::FftParallel => fft2(block)?,
    };
    let scrambled = arnold_permute_grid(&spectrum, arnold, direction)?;
    match engine {
        Engine::NaiveDft => Ok(idft2_naive(&scrambled)),
        Engine::Fft | Engine::FftParallel => ifft2(&scrambled),
    }
}

fn transform_blocks(
    blocks: Vec<ComplexGrid>,
    params: &CipherParams,
    engine: Engine,
    direction: Direction,
) -> Result<Vec<ComplexGrid>> {
    match engine {
        Engine::FftParallel => blocks
            .par_iter()
            .map(|blk| transform_block(blk, params, engine, direction))
            .collect(),
        _ => blocks
            .iter()
            .map(|blk| transform_block(blk, params, engine, direction))
            .collect(),
    }
}

fn channel_permutation(params: &CipherParams, channel: usize, slots: usize) -> Result<Permutation> {
    Permutation::from_seed(params.shuffle_seed ^ channel as u64, slots)
}

/// Encrypt with the default engine (parallel FFT; output is bit-identical
/// across engines [`Engine::Fft`] and [`Engine::FftParallel`]).
pub fn encrypt_image(img: &ImageBuffer, params: &CipherParams) -> Result<EncryptedContainer> {
    encrypt_image_with(img, params, Engine::FftParallel)
}

/// Encrypt with an explicit transform backend.
pub fn encrypt_image_with(
    img: &ImageBuffer,
    params: &CipherParams,
    engine: Engine,
) -> Result<EncryptedContainer> {
    let b = params.block_size;
    if !PERMITTED_BLOCK_SIZES.contains(&b) {
        return Err(Error::precondition(format!(
            "block size {b} not in {PERMITTED_BLOCK_SIZES:?}"
        )));
    }
    let mut channels = Vec::with_capacity(img.channels() as usize);
    for (ch_index, plane) in img.split_channels().into_iter().enumerate() {
        let blocks = split_blocks(&plane, img.width(), img.height(), b);
        let encrypted = transform_blocks(blocks, params, engine, Direction::Forward)?;
        // Flatten in row-major block order, then shuffle the coefficient
        // slots globally across the whole channel; the shuffle is the final
        // stage of the layer.
        let mut flat: Vec<Complex64> =
            Vec::with_capacity(encrypted.len() * b as usize * b as usize);
        for block in &encrypted {
            flat.extend_from_slice(block.values());
        }
        let perm = channel_permutation(params, ch_index, flat.len())?;
        channels.push(perm.apply(&flat)?);
    }

    let payload = match params.mode {
        CipherMode::Lossless => Payload::Lossless(channels),
        CipherMode::Quantized => {
            Payload::Quantized(channels.iter().map(|ch| quantize_channel(ch)).collect())
        }
    };
    Ok(EncryptedContainer {
        mode: params.mode,
        width: img.width(),
        height: img.height(),
        channels: img.channels(),
        block_size: b,
        arnold_iterations: params.arnold_iterations,
        key_fingerprint: params.key_fingerprint,
        payload,
    })
}

/// Decrypt with the default engine. Refuses a container whose fingerprint
/// does not match `params`, and refuses quantized containers outright
/// (their payload has already discarded the phase information).
pub fn decrypt_image(container: &EncryptedContainer, params: &CipherParams) -> Result<ImageBuffer> {
    decrypt_image_with(container, params, Engine::FftParallel)
}

/// Decrypt with an explicit transform backend.
///
/// Structural parameters (block size, iteration count, mode) come from the
/// container header; `params` contributes the shuffle seed and the
/// fingerprint that must match the header before any work happens.
pub fn decrypt_image_with(
    container: &EncryptedContainer,
    params: &CipherParams,
    engine: Engine,
) -> Result<ImageBuffer> {
    if params.key_fingerprint != container.key_fingerprint {
        return Err(Error::WrongKey);
    }
    let channels = match &container.payload {
        Payload::Lossless(channels) => channels,
        Payload::Quantized(_) => {
            return Err(Error::precondition(
                "quantized containers are a view-only rendering and cannot be decrypted",
            ));
        }
    };

    let b = container.block_size;
    let decrypt_params = CipherParams {
        block_size: b,
        arnold_iterations: container.arnold_iterations,
        ..*params
    };
    let bsz = b as usize;
    let slots = container.slots_per_channel();

    let mut planes = Vec::with_capacity(channels.len());
    for (ch_index, shuffled) in channels.iter().enumerate() {
        if shuffled.len() != slots {
            return Err(Error::format("payload length does not match header geometry"));
        }
        let perm = channel_permutation(&decrypt_params, ch_index, slots)?;
        let flat = perm.invert(shuffled.as_slice())?;
        let blocks: Vec<ComplexGrid> = flat
            .chunks_exact(bsz * bsz)
            .map(|chunk| ComplexGrid::new(bsz, bsz, chunk.to_vec()).expect("b*b chunk"))
            .collect();
        let decrypted = transform_blocks(blocks, &decrypt_params, engine, Direction::Inverse)?;
        let real_plane = merge_blocks(&decrypted, container.width, container.height, b)?;
        planes.push(
            real_plane
                .iter()
                .map(|&v| v.round().clamp(0.0, 255.0) as u8)
                .collect::<Vec<u8>>(),
        );
    }
    ImageBuffer::merge_channels(container.width, container.height, &planes)
}

/// Map one channel of complex ciphertext to bytes by min–max normalizing
/// the magnitudes into [0, 255].
pub fn quantize_channel(values: &[Complex64]) -> Vec<u8> {
    let mags: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let min = mags.iter().copied().fold(f64::INFINITY, f64::min);
    let max = mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= min {
        return vec![0u8; values.len()];
    }
    let scale = 255.0 / (max - min);
    mags.iter()
        .map(|&m| ((m - min) * scale).round().clamp(0.0, 255.0) as u8)
        .collect()
}

/// Render a container's ciphertext as a viewable image at the padded
/// dimensions: the quantized payload directly, or the magnitude-quantized
/// view of a lossless payload.
pub fn quantized_render(container: &EncryptedContainer) -> Result<ImageBuffer> {
    let planes: Vec<Vec<u8>> = match &container.payload {
        Payload::Quantized(channels) => channels.clone(),
        Payload::Lossless(channels) => channels.iter().map(|ch| quantize_channel(ch)).collect(),
    };
    ImageBuffer::merge_channels(
        container.padded_width(),
        container.padded_height(),
        &planes,
    )
}
