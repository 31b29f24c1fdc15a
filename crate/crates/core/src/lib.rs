//! Block-wise Fourier image encryption with Arnold cat map coefficient
//! scrambling and keyed pixel shuffling, plus the measurement and benchmark
//! machinery around it.
//!
//! The crate is organized along the stages of the cipher:
//!
//! * [`raster`] — 8-bit image buffers and lossless PGM/PPM I/O
//! * [`spectral`] — 2-D DFT/FFT pairs sharing one normalization convention
//! * [`arnold`] — iterated cat-map coordinate permutation with exact inverse
//! * [`permute`] — seeded global pixel shuffling (SplitMix64 + Fisher–Yates)
//! * [`pipeline`] — the end-to-end cipher and its key schedule
//! * [`container`] — the bit-exact on-disk ciphertext format
//! * [`metrics`] — PSNR/SSIM/entropy/histogram/chi-square measurements
//! * [`bench`] — the scheme-comparison benchmark harness

pub mod arnold;
pub mod bench;
pub mod container;
pub mod error;
pub mod metrics;
pub mod permute;
pub mod pipeline;
pub mod raster;
pub mod spectral;

pub use error::{Error, Result};
