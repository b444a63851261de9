//! Grayscale image I/O: PGM (P2 and P5, 8- or 16-bit), grayscale PNG, and
//! manifest-driven stack loading.
//!
//! Loaded intensities are rescaled to `[0, 1]` by dividing by the format's
//! maximum value. Saving quantizes with round-half-up, either after min-max
//! normalization or against a caller-supplied fixed range.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::grid::check_same_dims;
use crate::{Error, ImageGrid, ImageStack, Result};

/// Output encodings for [`save_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridEncoding {
    Pgm8,
    Pgm16,
    Png8,
}

/// How grid values map onto the quantized output range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SaveRange {
    /// Stretch the grid's own min-max span onto the full range. A constant
    /// grid maps to zero.
    MinMax,
    /// Clamp values against a fixed `(lo, hi)` span before quantizing.
    Fixed(f64, f64),
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    if source.kind() == std::io::ErrorKind::NotFound {
        Error::MissingFile {
            path: path.to_path_buf(),
        }
    } else {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

fn malformed(path: &Path, reason: impl Into<String>) -> Error {
    Error::MalformedImage {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn unsupported(path: &Path, reason: impl Into<String>) -> Error {
    Error::UnsupportedFormat {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Loads one grayscale image (PGM or PNG, sniffed from the magic bytes).
pub fn load_grid(path: impl AsRef<Path>) -> Result<ImageGrid> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
    match bytes.get(..2) {
        Some(b"P2") | Some(b"P5") => decode_pgm(path, &bytes),
        Some(&[0x89, b'P']) => decode_png(path, &bytes),
        _ => Err(unsupported(
            path,
            "expected a PGM (P2/P5) or grayscale PNG file",
        )),
    }
}

/// Saves a grid, normalizing per `range` and quantizing round-half-up.
pub fn save_grid(
    grid: &ImageGrid,
    path: impl AsRef<Path>,
    encoding: GridEncoding,
    range: SaveRange,
) -> Result<()> {
    let path = path.as_ref();
    let max_value = match encoding {
        GridEncoding::Pgm8 | GridEncoding::Png8 => 255.0,
        GridEncoding::Pgm16 => 65535.0,
    };
    let (lo, hi) = match range {
        SaveRange::MinMax => (grid.min_value(), grid.max_value()),
        SaveRange::Fixed(lo, hi) => (lo, hi),
    };
    let span = hi - lo;
    let quantize = |v: f64| -> u16 {
        let t = if span > 0.0 {
            ((v - lo) / span).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (t * max_value).round() as u16
    };

    let file = fs::File::create(path).map_err(|e| io_error(path, e))?;
    let mut out = BufWriter::new(file);
    let write_result = match encoding {
        GridEncoding::Pgm8 => write_pgm(&mut out, grid, 255, quantize),
        GridEncoding::Pgm16 => write_pgm(&mut out, grid, 65535, quantize),
        GridEncoding::Png8 => {
            return write_png(path, grid, quantize);
        }
    };
    write_result
        .and_then(|_| out.flush())
        .map_err(|e| io_error(path, e))
}

fn write_pgm(
    out: &mut impl Write,
    grid: &ImageGrid,
    maxval: u32,
    quantize: impl Fn(f64) -> u16,
) -> std::io::Result<()> {
    write!(out, "P5\n{} {}\n{}\n", grid.width(), grid.height(), maxval)?;
    if maxval > 255 {
        for &v in grid.values() {
            out.write_all(&quantize(v).to_be_bytes())?;
        }
    } else {
        for &v in grid.values() {
            out.write_all(&[quantize(v) as u8])?;
        }
    }
    Ok(())
}

fn write_png(path: &Path, grid: &ImageGrid, quantize: impl Fn(f64) -> u16) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_error(path, e))?;
    let mut encoder = png::Encoder::new(
        BufWriter::new(file),
        grid.width() as u32,
        grid.height() as u32,
    );
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(png::BitDepth::Eight);
    let data: Vec<u8> = grid.values().iter().map(|&v| quantize(v) as u8).collect();
    let mut writer = encoder
        .write_header()
        .map_err(|e| malformed(path, e.to_string()))?;
    writer
        .write_image_data(&data)
        .map_err(|e| malformed(path, e.to_string()))?;
    Ok(())
}

fn decode_png(path: &Path, bytes: &[u8]) -> Result<ImageGrid> {
    let decoder = png::Decoder::new(bytes);
    let mut reader = decoder
        .read_info()
        .map_err(|e| malformed(path, e.to_string()))?;
    let mut buf = vec![0u8; reader.output_buffer_size()];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| malformed(path, e.to_string()))?;
    if info.color_type != png::ColorType::Grayscale {
        return Err(unsupported(
            path,
            format!("PNG color type {:?}; only grayscale is supported", info.color_type),
        ));
    }
    let (width, height) = (info.width as usize, info.height as usize);
    let n = width * height;
    let values = match info.bit_depth {
        png::BitDepth::Eight => buf[..n].iter().map(|&b| b as f64 / 255.0).collect(),
        png::BitDepth::Sixteen => buf[..2 * n]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64 / 65535.0)
            .collect(),
        other => {
            return Err(unsupported(
                path,
                format!("PNG bit depth {other:?}; only 8 and 16 bit are supported"),
            ))
        }
    };
    ImageGrid::new(width, height, values)
}

/// Tokenizer over PGM headers (and P2 rasters): skips whitespace and
/// `#`-to-end-of-line comments.
struct PgmTokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PgmTokens<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn next_number(&mut self) -> Option<u32> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }
}

fn decode_pgm(path: &Path, bytes: &[u8]) -> Result<ImageGrid> {
    let binary = bytes[1] == b'5';
    let mut tokens = PgmTokens::new(&bytes[2..]);
    let mut header = |name: &str| {
        tokens
            .next_number()
            .ok_or_else(|| malformed(path, format!("missing {name} in header")))
    };
    let width = header("width")? as usize;
    let height = header("height")? as usize;
    let maxval = header("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(unsupported(
            path,
            format!("maxval {maxval}; only 8- and 16-bit PGM are supported"),
        ));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| malformed(path, "image dimensions overflow"))?;
    let scale = 1.0 / maxval as f64;

    let values = if binary {
        // One whitespace byte separates the maxval from the raster.
        let data_start = 2 + tokens.pos + 1;
        let wide = maxval > 255;
        let needed = if wide { 2 * n } else { n };
        let data = bytes
            .get(data_start..data_start + needed)
            .ok_or_else(|| malformed(path, "truncated raster data"))?;
        if wide {
            data.chunks_exact(2)
                .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64 * scale)
                .collect()
        } else {
            data.iter().map(|&b| b as f64 * scale).collect()
        }
    } else {
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let sample = tokens
                .next_number()
                .ok_or_else(|| malformed(path, "truncated ASCII raster"))?;
            values.push(sample as f64 * scale);
        }
        values
    };
    if values.iter().any(|&v| v > 1.0) {
        return Err(malformed(path, "sample exceeds the declared maxval"));
    }
    ImageGrid::new(width, height, values)
}

/// Loads an ordered multi-focus stack.
///
/// A directory loads every `.pgm`/`.png` file (plus the `.pgm8`/`.pgm16`
/// names this crate writes) in lexicographic order; any other path is read
/// as a manifest with one image path per line, `#` comments allowed,
/// resolved relative to the manifest's directory.
pub fn load_stack(path: impl AsRef<Path>) -> Result<ImageStack> {
    let path = path.as_ref();
    let files = if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| io_error(path, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| {
                matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("pgm") | Some("png") | Some("pgm8") | Some("pgm16")
                )
            })
            .collect();
        files.sort();
        files
    } else {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| base.join(l))
            .collect()
    };
    if files.len() < 2 {
        return Err(Error::StackTooSmall { got: files.len() });
    }

    let mut frames = Vec::with_capacity(files.len());
    for (index, file) in files.iter().enumerate() {
        let frame = load_grid(file)?;
        if let Some(first) = frames.first() {
            check_same_dims(
                first,
                &frame,
                &format!("frame {} ({})", index + 1, file.display()),
            )?;
        }
        frames.push(frame);
    }
    ImageStack::new(frames)
}
