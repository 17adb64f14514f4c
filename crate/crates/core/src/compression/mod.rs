//! Deterministic compressed-length computation under five selectable
//! compressors.
//!
//! Only lengths matter here: scoring never decompresses anything. Every
//! call builds fresh compressor state, so results are pure functions of
//! the input bytes and safe to compute from any number of threads.
//!
//! Container conventions are fixed so that lengths are reproducible:
//!
//! * `Ppm` — PPMd (variant H) stream, order 6, 16 MiB model memory, no
//!   end-of-stream marker.
//! * `Deflate` — deflate stream in a gzip container (header + trailer),
//!   best compression.
//! * `Bzip2` — bzip2 stream, best compression.
//! * `Zip` — a single-entry zip archive named `d` with a fixed timestamp,
//!   deflate at best compression; the entry and directory overhead is part
//!   of the measured length.
//! * `Lzw` — the from-scratch LZW coder in [`lzw`].

pub mod lzw;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// PPM context order.
pub const PPM_ORDER: u32 = 6;
/// PPM model memory in bytes.
pub const PPM_MEMORY_BYTES: u32 = 16 << 20;

/// The five selectable compression algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompressorKind {
    /// Order-bounded PPM with escape modeling (PPMd variant H).
    Ppm,
    /// Deflate measured in a gzip container.
    Deflate,
    /// Burrows-Wheeler bzip2.
    Bzip2,
    /// Deflate measured in a single-entry zip archive.
    Zip,
    /// Variable-width LZW, 9 to 16 bits, dictionary frozen when full.
    Lzw,
}

impl CompressorKind {
    pub const ALL: [CompressorKind; 5] = [
        CompressorKind::Ppm,
        CompressorKind::Deflate,
        CompressorKind::Bzip2,
        CompressorKind::Zip,
        CompressorKind::Lzw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CompressorKind::Ppm => "ppm",
            CompressorKind::Deflate => "deflate",
            CompressorKind::Bzip2 => "bzip2",
            CompressorKind::Zip => "zip",
            CompressorKind::Lzw => "lzw",
        }
    }
}

impl fmt::Display for CompressorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CompressorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ppm" | "ppmd" => Ok(CompressorKind::Ppm),
            "deflate" | "gzip" => Ok(CompressorKind::Deflate),
            "bzip2" => Ok(CompressorKind::Bzip2),
            "zip" => Ok(CompressorKind::Zip),
            "lzw" => Ok(CompressorKind::Lzw),
            other => Err(Error::InvalidArgument(format!(
                "unknown compressor {other:?} (expected ppm, deflate, bzip2, zip or lzw)"
            ))),
        }
    }
}

/// Length in bytes of a compressor's output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompressedLength(pub u64);

fn ppm_len(data: &[u8]) -> u64 {
    let mut encoder = ppmd_rust::Ppmd7Encoder::new(Vec::new(), PPM_ORDER, PPM_MEMORY_BYTES)
        .expect("fixed PPM parameters are in range");
    encoder
        .write_all(data)
        .expect("writing to an in-memory buffer cannot fail");
    let out = encoder
        .finish(false)
        .expect("flushing an in-memory buffer cannot fail");
    out.len() as u64
}

fn gzip_len(data: &[u8]) -> u64 {
    let mut encoder = flate2::write::GzEncoder::new(Vec::new(), flate2::Compression::best());
    encoder
        .write_all(data)
        .expect("writing to an in-memory buffer cannot fail");
    encoder.finish().expect("in-memory gzip flush").len() as u64
}

fn bzip2_len(data: &[u8]) -> u64 {
    let mut encoder = bzip2::write::BzEncoder::new(Vec::new(), bzip2::Compression::best());
    encoder
        .write_all(data)
        .expect("writing to an in-memory buffer cannot fail");
    encoder.finish().expect("in-memory bzip2 flush").len() as u64
}

fn zip_len(data: &[u8]) -> u64 {
    let buffer = std::io::Cursor::new(Vec::new());
    let mut writer = zip::ZipWriter::new(buffer);
    // fixed entry name and timestamp keep the archive bytes deterministic
    let options = zip::write::SimpleFileOptions::default()
        .compression_method(zip::CompressionMethod::Deflated)
        .compression_level(Some(9))
        .last_modified_time(zip::DateTime::default());
    writer
        .start_file("d", options)
        .expect("in-memory zip entry");
    writer
        .write_all(data)
        .expect("writing to an in-memory buffer cannot fail");
    writer
        .finish()
        .expect("in-memory zip flush")
        .into_inner()
        .len() as u64
}

/// Exact output length of `kind` applied to `data`.
pub fn compressed_length(kind: CompressorKind, data: &[u8]) -> Result<CompressedLength> {
    if data.is_empty() {
        return Err(Error::EmptyInput {
            context: "cannot compress a zero-length document".into(),
        });
    }
    let len = match kind {
        CompressorKind::Ppm => ppm_len(data),
        CompressorKind::Deflate => gzip_len(data),
        CompressorKind::Bzip2 => bzip2_len(data),
        CompressorKind::Zip => zip_len(data),
        CompressorKind::Lzw => lzw::compress(data).len() as u64,
    };
    Ok(CompressedLength(len))
}

/// The triple `(C(x), C(y), C(xy))` where `xy` is the raw byte
/// concatenation of `x` followed by `y`, with no separator inserted.
pub fn triple_lengths(
    kind: CompressorKind,
    x: &[u8],
    y: &[u8],
) -> Result<(CompressedLength, CompressedLength, CompressedLength)> {
    let cx = compressed_length(kind, x)?;
    let cy = compressed_length(kind, y)?;
    let mut xy = Vec::with_capacity(x.len() + y.len());
    xy.extend_from_slice(x);
    xy.extend_from_slice(y);
    let cxy = compressed_length(kind, &xy)?;
    Ok((cx, cy, cxy))
}
