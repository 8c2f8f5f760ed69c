//! 8-bit single-channel images with binary PGM (P5) I/O.

use std::io::{self, Read, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("image data length {got} does not match {width}x{height}")]
    DataLength {
        width: usize,
        height: usize,
        got: usize,
    },
    #[error("not a P5 PGM stream: {0}")]
    BadPgm(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    /// An image filled with `fill`.
    pub fn filled(width: usize, height: usize, fill: u8) -> Self {
        GrayImage {
            width,
            height,
            data: vec![fill; width * height],
        }
    }

    pub fn from_data(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImageError> {
        if data.len() != width * height {
            return Err(ImageError::DataLength {
                width,
                height,
                got: data.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// Copy out the rectangle starting at `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Option<GrayImage> {
        if x0 + w > self.width || y0 + h > self.height {
            return None;
        }
        let mut data = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            data.extend_from_slice(&self.data[y * self.width + x0..y * self.width + x0 + w]);
        }
        Some(GrayImage {
            width: w,
            height: h,
            data,
        })
    }

    /// Write as binary PGM (P5, maxval 255).
    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<(), ImageError> {
        write!(w, "P5\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.data)?;
        Ok(())
    }

    /// Read a binary PGM (P5, maxval 255). Round-trips bit-exactly with
    /// [`GrayImage::write_pgm`].
    pub fn read_pgm<R: Read>(mut r: R) -> Result<Self, ImageError> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let mut pos = 0usize;

        let mut token = |bytes: &[u8]| -> Result<String, ImageError> {
            // Skip whitespace and '#' comments between header tokens.
            loop {
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    break;
                }
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(ImageError::BadPgm("truncated header".into()));
            }
            Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
        };

        if token(&bytes)? != "P5" {
            return Err(ImageError::BadPgm("missing P5 magic".into()));
        }
        let width: usize = token(&bytes)?
            .parse()
            .map_err(|_| ImageError::BadPgm("bad width".into()))?;
        let height: usize = token(&bytes)?
            .parse()
            .map_err(|_| ImageError::BadPgm("bad height".into()))?;
        let maxval: usize = token(&bytes)?
            .parse()
            .map_err(|_| ImageError::BadPgm("bad maxval".into()))?;
        if maxval != 255 {
            return Err(ImageError::BadPgm(format!("unsupported maxval {maxval}")));
        }
        // Exactly one whitespace byte separates the header from the raster.
        pos += 1;
        if bytes.len() < pos + width * height {
            return Err(ImageError::BadPgm("truncated raster".into()));
        }
        GrayImage::from_data(width, height, bytes[pos..pos + width * height].to_vec())
    }
}
