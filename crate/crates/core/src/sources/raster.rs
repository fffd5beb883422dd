//! Raster views with per-object masks, and binary PPM/PGM I/O.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Binary object mask; `true` marks pixels inside the object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    inside: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize, inside: Vec<bool>) -> Result<Self> {
        if inside.len() != width * height {
            return Err(Error::InvalidRaster(format!(
                "mask has {} pixels, expected {}",
                inside.len(),
                width * height
            )));
        }
        Ok(Self { width, height, inside })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self { width, height, inside: vec![false; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.inside[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.inside[y * self.width + x] = value;
    }

    pub fn pixel_count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    /// Indices (row-major) of the pixels inside the mask.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.inside.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

/// An RGB8 image plus disjoint per-object masks of the same size.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterView {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
    masks: Vec<Mask>,
}

impl RasterView {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>, masks: Vec<Mask>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyInput);
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidRaster(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        let mut owner = vec![false; width * height];
        for (k, m) in masks.iter().enumerate() {
            if m.width != width || m.height != height {
                return Err(Error::InvalidRaster(format!(
                    "mask {k} is {}x{}, image is {width}x{height}",
                    m.width, m.height
                )));
            }
            for i in m.indices() {
                if std::mem::replace(&mut owner[i], true) {
                    return Err(Error::InvalidRaster(format!("mask {k} overlaps an earlier mask")));
                }
            }
        }
        Ok(Self { width, height, pixels, masks })
    }

    /// Builds a view from a packed RGB8 buffer (`width * height * 3` bytes).
    pub fn from_rgb8(width: usize, height: usize, buf: &[u8], masks: Vec<Mask>) -> Result<Self> {
        if buf.len() != width * height * 3 {
            return Err(Error::InvalidRaster(format!("rgb buffer of {} bytes", buf.len())));
        }
        let pixels = buf.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Self::new(width, height, pixels, masks)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }

    /// Reads a binary PPM (P6) image and optional binary PGM (P5) masks,
    /// where any nonzero mask sample is inside.
    pub fn read_pnm(image: &Path, masks: &[&Path]) -> Result<Self> {
        let (w, h, maxval, data) = read_pnm_file(image, b"P6")?;
        if maxval != 255 {
            return Err(Error::InvalidRaster(format!("unsupported maxval {maxval}")));
        }
        let mut ms = Vec::with_capacity(masks.len());
        for path in masks {
            let (mw, mh, _, mdata) = read_pnm_file(path, b"P5")?;
            ms.push(Mask::new(mw, mh, mdata.iter().map(|&v| v != 0).collect())?);
        }
        Self::from_rgb8(w, h, &data, ms)
    }

    pub fn write_ppm<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self.pixels.iter().flatten().copied().collect();
        out.write_all(&bytes)?;
        Ok(())
    }

    pub fn write_mask_pgm<W: Write>(&self, index: usize, mut out: W) -> Result<()> {
        let m = self
            .masks
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("no mask {index}")))?;
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = m.inside.iter().map(|&b| if b { 255 } else { 0 }).collect();
        out.write_all(&bytes)?;
        Ok(())
    }
}

fn read_pnm_file(path: &Path, magic: &[u8; 2]) -> Result<(usize, usize, usize, Vec<u8>)> {
    let file = std::fs::File::open(path)?;
    read_pnm(BufReader::new(file), magic)
}

pub(crate) fn read_pnm<R: BufRead>(mut r: R, magic: &[u8; 2]) -> Result<(usize, usize, usize, Vec<u8>)> {
    let mut header = [0u8; 2];
    r.read_exact(&mut header)?;
    if &header != magic {
        return Err(Error::InvalidRaster(format!(
            "expected {} header",
            String::from_utf8_lossy(magic)
        )));
    }
    let mut fields = [0usize; 3];
    for f in fields.iter_mut() {
        *f = read_header_number(&mut r)?;
    }
    let [w, h, maxval] = fields;
    if w == 0 || h == 0 {
        return Err(Error::EmptyInput);
    }
    let channels = if magic == b"P6" { 3 } else { 1 };
    let mut data = vec![0u8; w * h * channels];
    r.read_exact(&mut data)?;
    Ok((w, h, maxval, data))
}

/// Reads one ASCII decimal header field, skipping whitespace and `#`
/// comments, and consumes the single whitespace byte that ends it.
fn read_header_number<R: BufRead>(r: &mut R) -> Result<usize> {
    let mut byte = [0u8; 1];
    let mut digits = String::new();
    loop {
        r.read_exact(&mut byte)?;
        match byte[0] {
            b'#' if digits.is_empty() => {
                let mut line = String::new();
                r.read_line(&mut line)?;
            }
            c if c.is_ascii_whitespace() => {
                if !digits.is_empty() {
                    break;
                }
            }
            c if c.is_ascii_digit() => digits.push(c as char),
            c => return Err(Error::InvalidRaster(format!("unexpected header byte {c:#x}"))),
        }
    }
    digits
        .parse()
        .map_err(|_| Error::InvalidRaster("bad header number".into()))
}
