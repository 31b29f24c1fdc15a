//! Raster data model and lossless binary PGM (P5) / PPM (P6) file I/O.
//!
//! Samples are 8-bit, row-major and channel-interleaved. Headers may contain
//! `#` comments on read; writes never emit them, so a save→load round trip
//! is the byte identity.

use std::fs;
use std::io;
use std::path::Path;

use crate::error::{Error, Result};

/// A decoded 8-bit raster image.
///
/// Invariant: `samples.len() == width * height * channels`, with
/// `channels` either 1 (grayscale) or 3 (RGB).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    channels: u8,
    samples: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32, channels: u8, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::precondition("image dimensions must be at least 1x1"));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::precondition(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        let expected = width as usize * height as usize * channels as usize;
        if samples.len() != expected {
            return Err(Error::precondition(format!(
                "sample buffer length {} does not match {}x{}x{} = {}",
                samples.len(),
                width,
                height,
                channels,
                expected
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Linear sample index of `(x, y, c)` in the row-major, channel-interleaved
    /// layout. Inverse of [`coords_of`](Self::coords_of).
    pub fn sample_index(&self, x: u32, y: u32, c: u8) -> usize {
        (y as usize * self.width as usize + x as usize) * self.channels as usize + c as usize
    }

    /// `(x, y, c)` of a linear sample index.
    pub fn coords_of(&self, index: usize) -> (u32, u32, u8) {
        let ch = self.channels as usize;
        let c = (index % ch) as u8;
        let pixel = index / ch;
        let x = (pixel % self.width as usize) as u32;
        let y = (pixel / self.width as usize) as u32;
        (x, y, c)
    }

    /// De-interleave into per-channel planes of `width * height` samples each.
    pub fn split_channels(&self) -> Vec<Vec<u8>> {
        let ch = self.channels as usize;
        let n = self.pixel_count();
        let mut planes = vec![Vec::with_capacity(n); ch];
        for (i, &s) in self.samples.iter().enumerate() {
            planes[i % ch].push(s);
        }
        planes
    }

    /// Re-interleave planes produced by [`split_channels`](Self::split_channels).
    pub fn merge_channels(width: u32, height: u32, planes: &[Vec<u8>]) -> Result<Self> {
        let ch = planes.len();
        if ch != 1 && ch != 3 {
            return Err(Error::precondition(format!(
                "expected 1 or 3 planes, got {ch}"
            )));
        }
        let n = width as usize * height as usize;
        if planes.iter().any(|p| p.len() != n) {
            return Err(Error::precondition("plane length does not match dimensions"));
        }
        let mut samples = Vec::with_capacity(n * ch);
        for i in 0..n {
            for plane in planes {
                samples.push(plane[i]);
            }
        }
        Self::new(width, height, ch as u8, samples)
    }
}

/// Load a binary PGM (P5) or PPM (P6) file with maxval 255.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let bytes = fs::read(path)?;
    decode_netpbm(&bytes)
}

/// Save as binary PGM (1 channel) or PPM (3 channels), maxval 255.
pub fn save_image(img: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_netpbm(img))?;
    Ok(())
}

pub fn encode_netpbm(img: &ImageBuffer) -> Vec<u8> {
    let magic = if img.channels == 1 { "P5" } else { "P6" };
    let mut out = format!("{}\n{} {}\n255\n", magic, img.width, img.height).into_bytes();
    out.extend_from_slice(&img.samples);
    out
}

pub fn decode_netpbm(bytes: &[u8]) -> Result<ImageBuffer> {
    let mut cur = HeaderCursor { bytes, pos: 0 };
    let channels = match (cur.next_byte(), cur.next_byte()) {
        (Some(b'P'), Some(b'5')) => 1u8,
        (Some(b'P'), Some(b'6')) => 3u8,
        _ => return Err(Error::format("not a binary PGM/PPM file (expected P5 or P6 magic)")),
    };
    let width = cur.next_decimal("width")?;
    let height = cur.next_decimal("height")?;
    let maxval = cur.next_decimal("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedDepth(maxval));
    }
    if width == 0 || height == 0 {
        return Err(Error::format("image dimensions must be at least 1x1"));
    }
    // Exactly one whitespace byte separates the header from the payload.
    match cur.next_byte() {
        Some(b) if is_netpbm_whitespace(b) => {}
        _ => return Err(Error::format("missing whitespace after maxval")),
    }
    let payload = &bytes[cur.pos..];
    let expected = width as usize * height as usize * channels as usize;
    if payload.len() < expected {
        return Err(Error::Io(io::Error::new(
            io::ErrorKind::UnexpectedEof,
            format!(
                "truncated payload: header declares {expected} bytes, found {}",
                payload.len()
            ),
        )));
    }
    if payload.len() > expected {
        return Err(Error::format(format!(
            "trailing data: header declares {expected} payload bytes, found {}",
            payload.len()
        )));
    }
    ImageBuffer::new(width, height, channels, payload.to_vec())
}

fn is_netpbm_whitespace(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn next_byte(&mut self) -> Option<u8> {
        let b = self.bytes.get(self.pos).copied();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Skip whitespace and `#` comments (comment runs to end of line).
    fn skip_separators(&mut self) {
        loop {
            match self.peek() {
                Some(b) if is_netpbm_whitespace(b) => {
                    self.pos += 1;
                }
                Some(b'#') => {
                    while let Some(b) = self.peek() {
                        self.pos += 1;
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn next_decimal(&mut self, field: &str) -> Result<u32> {
        self.skip_separators();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::format(format!("missing or malformed {field} in header")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::format(format!("{field} out of range")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn load_2x2_pgm() {
        let file = b"P5\n2 2\n255\n\x00\x55\xaa\xff";
        let img = decode_netpbm(file).unwrap();
        assert_eq!(img.width(), 2);
        assert_eq!(img.height(), 2);
        assert_eq!(img.channels(), 1);
        assert_eq!(img.samples(), &[0, 85, 170, 255]);
    }

    #[test]
    fn load_1x1_ppm() {
        let file = b"P6\n1 1\n255\n\xff\x00\x00";
        let img = decode_netpbm(file).unwrap();
        assert_eq!(img.channels(), 3);
        assert_eq!(img.samples(), &[255, 0, 0]);
    }

    #[test]
    fn truncated_payload_is_io_error() {
        let file = b"P5\n4 4\n255\n\x01\x02\x03\x04\x05\x06\x07\x08";
        match decode_netpbm(file) {
            Err(Error::Io(e)) => assert_eq!(e.kind(), io::ErrorKind::UnexpectedEof),
            other => panic!("expected Io error, got {other:?}"),
        }
    }

    #[test]
    fn trailing_payload_rejected() {
        let file = b"P5\n1 1\n255\n\x01\x02";
        assert!(matches!(decode_netpbm(file), Err(Error::Format(_))));
    }

    #[test]
    fn bad_magic_rejected() {
        assert!(matches!(
            decode_netpbm(b"P4\n1 1\n255\n\x00"),
            Err(Error::Format(_))
        ));
        assert!(matches!(decode_netpbm(b"FR"), Err(Error::Format(_))));
    }

    #[test]
    fn non_255_maxval_rejected() {
        let file = b"P5\n1 1\n65535\n\x00\x00";
        assert!(matches!(
            decode_netpbm(file),
            Err(Error::UnsupportedDepth(65535))
        ));
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            decode_netpbm(b"P5\n0 1\n255\n"),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn header_comments_accepted_on_read() {
        let file = b"P5\n# a comment\n2 # inline\n1\n255\n\x07\x09";
        let img = decode_netpbm(file).unwrap();
        assert_eq!((img.width(), img.height()), (2, 1));
        assert_eq!(img.samples(), &[7, 9]);
    }

    #[test]
    fn save_selects_format_by_channels() {
        let gray = ImageBuffer::new(1, 1, 1, vec![42]).unwrap();
        assert_eq!(encode_netpbm(&gray), b"P5\n1 1\n255\n\x2a");
        let rgb = ImageBuffer::new(1, 1, 3, vec![1, 2, 3]).unwrap();
        assert!(encode_netpbm(&rgb).starts_with(b"P6\n"));
    }

    #[test]
    fn writes_never_contain_comments() {
        let img = ImageBuffer::new(3, 2, 1, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let bytes = encode_netpbm(&img);
        let header_end = bytes.len() - img.samples().len();
        assert!(!bytes[..header_end].contains(&b'#'));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.ppm");
        let img = ImageBuffer::new(3, 2, 3, (0u8..18).collect()).unwrap();
        save_image(&img, &path).unwrap();
        assert_eq!(load_image(&path).unwrap(), img);
    }

    #[test]
    fn split_grayscale_is_identity() {
        let img = ImageBuffer::new(2, 2, 1, vec![9, 8, 7, 6]).unwrap();
        let planes = img.split_channels();
        assert_eq!(planes, vec![vec![9, 8, 7, 6]]);
    }

    #[test]
    fn split_rgb_deinterleaves() {
        let img = ImageBuffer::new(1, 1, 3, vec![10, 20, 30]).unwrap();
        assert_eq!(img.split_channels(), vec![vec![10], vec![20], vec![30]]);
    }

    #[test]
    fn sample_index_bijection() {
        let img = ImageBuffer::new(5, 3, 3, vec![0; 45]).unwrap();
        for i in 0..45 {
            let (x, y, c) = img.coords_of(i);
            assert_eq!(img.sample_index(x, y, c), i);
        }
    }

    #[test]
    fn invalid_buffer_rejected() {
        assert!(ImageBuffer::new(2, 2, 1, vec![0; 3]).is_err());
        assert!(ImageBuffer::new(2, 2, 2, vec![0; 8]).is_err());
        assert!(ImageBuffer::new(0, 2, 1, vec![]).is_err());
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(
            w in 1u32..24,
            h in 1u32..24,
            rgb in any::<bool>(),
            seed in any::<u64>(),
        ) {
            let ch = if rgb { 3 } else { 1 };
            let n = (w * h * ch as u32) as usize;
            let samples: Vec<u8> = (0..n)
                .map(|i| (seed.wrapping_mul(i as u64 + 1) >> 32) as u8)
                .collect();
            let img = ImageBuffer::new(w, h, ch, samples).unwrap();
            prop_assert_eq!(decode_netpbm(&encode_netpbm(&img)).unwrap(), img);
        }

        #[test]
        fn split_merge_round_trip(
            w in 1u32..16,
            h in 1u32..16,
            seed in any::<u64>(),
        ) {
            let n = (w * h * 3) as usize;
            let samples: Vec<u8> = (0..n)
                .map(|i| (seed.wrapping_add(i as u64).wrapping_mul(0x9E3779B97F4A7C15) >> 24) as u8)
                .collect();
            let img = ImageBuffer::new(w, h, 3, samples).unwrap();
            let planes = img.split_channels();
            prop_assert_eq!(ImageBuffer::merge_channels(w, h, &planes).unwrap(), img);
        }
    }
}
