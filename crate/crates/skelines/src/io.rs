//! Grayscale image loading (PNG, PGM, CSV grid) and PNG writing.

use std::cell::Cell;
use std::fs;
use std::io::{BufRead, Cursor, Read, Seek, SeekFrom};
use std::path::Path;
use std::rc::Rc;

use skelines_core::image::luma;
use skelines_core::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImageFormat {
    Png,
    Pgm,
    Csv,
}

impl ImageFormat {
    pub fn from_extension(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "png" => Some(Self::Png),
            "pgm" | "pnm" => Some(Self::Pgm),
            "csv" | "txt" => Some(Self::Csv),
            _ => None,
        }
    }

    /// Guesses the format from the leading bytes.
    pub fn sniff(bytes: &[u8]) -> Option<Self> {
        if bytes.starts_with(b"\x89PNG\r\n\x1a\n") {
            Some(Self::Png)
        } else if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
            Some(Self::Pgm)
        } else if bytes.first().is_some_and(|b| b.is_ascii_digit() || b.is_ascii_whitespace()) {
            Some(Self::Csv)
        } else {
            None
        }
    }
}

impl std::fmt::Display for ImageFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Png => "PNG",
            Self::Pgm => "PGM",
            Self::Csv => "CSV",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{format} decode error at byte {offset}: {message}")]
    Decode { format: ImageFormat, offset: u64, message: String },
    #[error("unsupported format: {0}")]
    Unsupported(String),
}

fn decode_err(format: ImageFormat, offset: usize, message: impl Into<String>) -> LoadError {
    LoadError::Decode { format, offset: offset as u64, message: message.into() }
}

/// Loads a file, taking the format from the extension or, failing that,
/// from the content.
pub fn load_gray_path(path: &Path) -> Result<GrayImage, LoadError> {
    let bytes = fs::read(path).map_err(|source| LoadError::Read { path: path.display().to_string(), source })?;
    let format = match ImageFormat::from_extension(path).or_else(|| ImageFormat::sniff(&bytes)) {
        Some(f) => f,
        None => return Err(LoadError::Unsupported(path.display().to_string())),
    };
    load_gray(&bytes, format)
}

pub fn load_gray(bytes: &[u8], format: ImageFormat) -> Result<GrayImage, LoadError> {
    match format {
        ImageFormat::Png => decode_png(bytes),
        ImageFormat::Pgm => decode_pgm(bytes),
        ImageFormat::Csv => decode_csv(bytes),
    }
}

/// Cursor that publishes its position so a failed decode can report it.
struct Tracked<'a> {
    inner: Cursor<&'a [u8]>,
    pos: Rc<Cell<u64>>,
}

impl Tracked<'_> {
    fn sync(&self) {
        self.pos.set(self.pos.get().max(self.inner.position()));
    }
}

impl Read for Tracked<'_> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.sync();
        Ok(n)
    }
}

impl BufRead for Tracked<'_> {
    fn fill_buf(&mut self) -> std::io::Result<&[u8]> {
        self.inner.fill_buf()
    }

    fn consume(&mut self, amt: usize) {
        self.inner.consume(amt);
        self.sync();
    }
}

impl Seek for Tracked<'_> {
    fn seek(&mut self, pos: SeekFrom) -> std::io::Result<u64> {
        let p = self.inner.seek(pos)?;
        self.sync();
        Ok(p)
    }
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage, LoadError> {
    let pos = Rc::new(Cell::new(0));
    let fail = |e: png::DecodingError| LoadError::Decode { format: ImageFormat::Png, offset: pos.get(), message: e.to_string() };

    let mut decoder = png::Decoder::new(Tracked { inner: Cursor::new(bytes), pos: Rc::clone(&pos) });
    decoder.set_transformations(png::Transformations::normalize_to_color8());
    let mut reader = decoder.read_info().map_err(fail)?;
    let size = reader.output_buffer_size().ok_or_else(|| LoadError::Unsupported("PNG too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(fail)?;

    let (w, h) = (info.width as usize, info.height as usize);
    let channels = info.color_type.samples();
    let mut data = Vec::with_capacity(w * h);
    for row in buf.chunks(info.line_size).take(h) {
        for px in row[..w * channels].chunks(channels) {
            data.push(match channels {
                1 | 2 => px[0],
                _ => luma(px[0], px[1], px[2]),
            });
        }
    }
    GrayImage::new(h, w, data).map_err(|e| decode_err(ImageFormat::Png, 0, e.to_string()))
}

/// Splits a PGM header into tokens, skipping whitespace and `#` comments.
struct HeaderLexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderLexer<'a> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, LoadError> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            let msg = match self.bytes.get(start) {
                None => format!("unexpected end of data, expected {what}"),
                Some(_) => format!("expected {what}"),
            };
            return Err(decode_err(ImageFormat::Pgm, start, msg));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| decode_err(ImageFormat::Pgm, start, format!("{what} out of range")))
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<GrayImage, LoadError> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(decode_err(ImageFormat::Pgm, 0, "missing P2/P5 magic")),
    };
    let mut lex = HeaderLexer { bytes, pos: 2 };
    let cols = lex.number("width")?;
    let rows = lex.number("height")?;
    let maxval_at = lex.pos;
    let maxval = lex.number("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(decode_err(ImageFormat::Pgm, maxval_at, "maxval must be in 1..=65535"));
    }
    if maxval > 255 {
        return Err(LoadError::Unsupported("16-bit PGM".into()));
    }
    if rows == 0 || cols == 0 {
        return Err(decode_err(ImageFormat::Pgm, 2, "zero image dimension"));
    }
    let n = rows.checked_mul(cols).ok_or_else(|| decode_err(ImageFormat::Pgm, 2, "image too large"))?;
    let scale = |v: usize| ((v * 255 + maxval / 2) / maxval) as u8;

    let mut data = Vec::with_capacity(n);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        let start = lex.pos + 1;
        let raster = bytes.get(start..).unwrap_or_default();
        if raster.len() < n {
            return Err(decode_err(ImageFormat::Pgm, bytes.len(), format!("truncated raster: {} of {n} bytes", raster.len())));
        }
        for (i, &v) in raster[..n].iter().enumerate() {
            if v as usize > maxval {
                return Err(decode_err(ImageFormat::Pgm, start + i, "sample exceeds maxval"));
            }
            data.push(scale(v as usize));
        }
    } else {
        for _ in 0..n {
            let at = lex.pos;
            let v = lex.number("sample")?;
            if v > maxval {
                return Err(decode_err(ImageFormat::Pgm, at, "sample exceeds maxval"));
            }
            data.push(scale(v));
        }
    }
    Ok(GrayImage::new(rows, cols, data).expect("length checked"))
}

fn decode_csv(bytes: &[u8]) -> Result<GrayImage, LoadError> {
    let err = |at: usize, msg: String| decode_err(ImageFormat::Csv, at, msg);
    let mut grid: Vec<Vec<u8>> = Vec::new();
    let mut line_start = 0;
    for line in bytes.split(|&b| b == b'\n') {
        let offset = line_start;
        line_start += line.len() + 1;
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let mut row = Vec::new();
        let mut field_start = offset;
        for field in line.split(|&b| b == b',') {
            let at = field_start;
            field_start += field.len() + 1;
            let text = std::str::from_utf8(field).map_err(|_| err(at, "non-UTF-8 field".into()))?.trim();
            let v: u8 = text.parse().map_err(|_| err(at, format!("expected an integer in 0..=255, found {text:?}")))?;
            row.push(v);
        }
        if let Some(first) = grid.first() {
            if row.len() != first.len() {
                return Err(err(offset, format!("row has {} values, expected {}", row.len(), first.len())));
            }
        }
        grid.push(row);
    }
    if grid.is_empty() {
        return Err(err(0, "no data".into()));
    }

    if grid.len() == 1 {
        let row = grid.pop().expect("one row");
        if let Some((n, values)) = square_reshape(&row) {
            return Ok(GrayImage::new(n, n, values.to_vec()).expect("n * n values"));
        }
        grid.push(row);
    }
    let (rows, cols) = (grid.len(), grid[0].len());
    Ok(GrayImage::new(rows, cols, grid.concat()).expect("rectangular"))
}

/// A lone row of `n * n` values, optionally led by a label, is a flattened
/// square image (the MNIST CSV layout).
fn square_reshape(row: &[u8]) -> Option<(usize, &[u8])> {
    let side = |len: usize| {
        let n = (len as f64).sqrt().round() as usize;
        (n > 1 && n * n == len).then_some(n)
    };
    if let Some(n) = side(row.len()) {
        return Some((n, row));
    }
    side(row.len().checked_sub(1)?).map(|n| (n, &row[1..]))
}

pub fn encode_png(img: &GrayImage) -> Vec<u8> {
    let mut out = Vec::new();
    let mut enc = png::Encoder::new(&mut out, img.cols() as u32, img.rows() as u32);
    enc.set_color(png::ColorType::Grayscale);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc.write_header().expect("writing to a Vec");
    writer.write_image_data(img.data()).expect("writing to a Vec");
    writer.finish().expect("writing to a Vec");
    out
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.cols(), img.rows()).into_bytes();
    out.extend_from_slice(img.data());
    out
}
