//! Bit-exact on-disk ciphertext container.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic "FRCT" | version u16 | mode u8 | keystream_alg u8 | width u32 |
//! height u32 | channels u8 | block_size u16 | arnold_iterations u16 |
//! key_fingerprint [u8; 8] | reserved [u8; 8] (zero) | payload
//! ```
//!
//! A lossless payload stores, per channel, the shuffled coefficient slots as
//! interleaved (re, im) 64-bit floats; a quantized payload stores one byte
//! per slot. Encode→decode is the identity on every field and payload byte.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pipeline::{CipherMode, PERMITTED_BLOCK_SIZES};

pub const MAGIC: [u8; 4] = *b"FRCT";
pub const VERSION: u16 = 1;
/// Keystream algorithm identifier: 0 is the SplitMix64 generator. Reserved
/// so a stronger generator can be introduced without a format break.
pub const KEYSTREAM_SPLITMIX64: u8 = 0;
pub const HEADER_LEN: usize = 37;

/// Shuffled per-channel ciphertext.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Lossless(Vec<Vec<Complex64>>),
    Quantized(Vec<Vec<u8>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncryptedContainer {
    pub mode: CipherMode,
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    pub block_size: u16,
    pub arnold_iterations: u16,
    pub key_fingerprint: [u8; 8],
    pub payload: Payload,
}

impl EncryptedContainer {
    pub fn padded_width(&self) -> u32 {
        let b = self.block_size as u32;
        self.width.div_ceil(b) * b
    }

    pub fn padded_height(&self) -> u32 {
        let b = self.block_size as u32;
        self.height.div_ceil(b) * b
    }

    /// Coefficient slots per channel: block count × b².
    pub fn slots_per_channel(&self) -> usize {
        self.padded_width() as usize * self.padded_height() as usize
    }

    pub fn encode(&self) -> Vec<u8> {
        let payload_len = match &self.payload {
            Payload::Lossless(chs) => chs.iter().map(|c| c.len() * 16).sum::<usize>(),
            Payload::Quantized(chs) => chs.iter().map(|c| c.len()).sum::<usize>(),
        };
        let mut out = Vec::with_capacity(HEADER_LEN + payload_len);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(self.mode.to_byte());
        out.push(KEYSTREAM_SPLITMIX64);
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        out.push(self.channels);
        out.extend_from_slice(&self.block_size.to_le_bytes());
        out.extend_from_slice(&self.arnold_iterations.to_le_bytes());
        out.extend_from_slice(&self.key_fingerprint);
        out.extend_from_slice(&[0u8; 8]);
        match &self.payload {
            Payload::Lossless(channels) => {
                for channel in channels {
                    for v in channel {
                        out.extend_from_slice(&v.re.to_le_bytes());
                        out.extend_from_slice(&v.im.to_le_bytes());
                    }
                }
            }
            Payload::Quantized(channels) => {
                for channel in channels {
                    out.extend_from_slice(channel);
                }
            }
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::format("container shorter than header"));
        }
        if bytes[0..4] != MAGIC {
            return Err(Error::format("bad magic, not an encrypted container"));
        }
        let version = u16::from_le_bytes(bytes[4..6].try_into().unwrap());
        if version != VERSION {
            return Err(Error::format(format!("unsupported container version {version}")));
        }
        let mode = CipherMode::from_byte(bytes[6])?;
        if bytes[7] != KEYSTREAM_SPLITMIX64 {
            return Err(Error::format(format!(
                "unknown keystream algorithm {}",
                bytes[7]
            )));
        }
        let width = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        let height = u32::from_le_bytes(bytes[12..16].try_into().unwrap());
        let channels = bytes[16];
        let block_size = u16::from_le_bytes(bytes[17..19].try_into().unwrap());
        let arnold_iterations = u16::from_le_bytes(bytes[19..21].try_into().unwrap());
        let mut key_fingerprint = [0u8; 8];
        key_fingerprint.copy_from_slice(&bytes[21..29]);
        if bytes[29..37] != [0u8; 8] {
            return Err(Error::format("reserved header bytes must be zero"));
        }

        if width == 0 || height == 0 {
            return Err(Error::format("container dimensions must be at least 1x1"));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::format(format!("invalid channel count {channels}")));
        }
        if !PERMITTED_BLOCK_SIZES.contains(&block_size) {
            return Err(Error::format(format!("invalid block size {block_size}")));
        }
        if arnold_iterations == 0 || arnold_iterations > 1024 {
            return Err(Error::format(format!(
                "invalid arnold iteration count {arnold_iterations}"
            )));
        }

        let header = Self {
            mode,
            width,
            height,
            channels,
            block_size,
            arnold_iterations,
            key_fingerprint,
            payload: Payload::Quantized(Vec::new()),
        };
        let slots = header.slots_per_channel();
        let body = &bytes[HEADER_LEN..];
        let payload = match mode {
            CipherMode::Lossless => {
                let expected = channels as usize * slots * 16;
                if body.len() != expected {
                    return Err(Error::format(format!(
                        "payload is {} bytes, header geometry requires {expected}",
                        body.len()
                    )));
                }
                let mut chs = Vec::with_capacity(channels as usize);
                for ch in 0..channels as usize {
                    let base = ch * slots * 16;
                    let mut values = Vec::with_capacity(slots);
                    for i in 0..slots {
                        let off = base + i * 16;
                        let re = f64::from_le_bytes(body[off..off + 8].try_into().unwrap());
                        let im = f64::from_le_bytes(body[off + 8..off + 16].try_into().unwrap());
                        values.push(Complex64::new(re, im));
                    }
                    chs.push(values);
                }
                Payload::Lossless(chs)
            }
            CipherMode::Quantized => {
                let expected = channels as usize * slots;
                if body.len() != expected {
                    return Err(Error::format(format!(
                        "payload is {} bytes, header geometry requires {expected}",
                        body.len()
                    )));
                }
                Payload::Quantized(
                    (0..channels as usize)
                        .map(|ch| body[ch * slots..(ch + 1) * slots].to_vec())
                        .collect(),
                )
            }
        };
        Ok(Self { payload, ..header })
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.encode())?;
        Ok(())
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Self> {
        Self::decode(&fs::read(path)?)
    }
}
