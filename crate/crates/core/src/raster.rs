//! Binary ink rasters: the offline form of a handwriting sample.

use std::path::Path;

use image::{GrayImage, Luma};

use crate::error::{Error, Result};

/// Row-major binary image. Row 0 is the top of the page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: usize,
    height: usize,
    ink: Vec<bool>,
    /// Pixels per millimetre, stored in hundredths to keep `Eq`.
    res_centi: u32,
}

impl Raster {
    pub fn new(width: usize, height: usize, px_per_mm: f64) -> Self {
        Self {
            width,
            height,
            ink: vec![false; width * height],
            res_centi: (px_per_mm * 100.0).round().max(1.0) as u32,
        }
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        px_per_mm: f64,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let mut r = Self::new(width, height, px_per_mm);
        for y in 0..height {
            for x in 0..width {
                r.ink[y * width + x] = f(x, y);
            }
        }
        r
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn px_per_mm(&self) -> f64 {
        self.res_centi as f64 / 100.0
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.ink[y * self.width + x]
    }

    /// Ink at a signed position; outside the canvas is blank.
    #[inline]
    pub fn get_signed(&self, x: isize, y: isize) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.get(x as usize, y as usize)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.ink[y * self.width + x] = v;
    }

    pub fn ink_count(&self) -> usize {
        self.ink.iter().filter(|&&v| v).count()
    }

    pub fn is_blank(&self) -> bool {
        !self.ink.iter().any(|&v| v)
    }

    /// Inclusive bounding box `(x0, y0, x1, y1)` of the ink.
    pub fn ink_bounds(&self) -> Option<(usize, usize, usize, usize)> {
        let mut b: Option<(usize, usize, usize, usize)> = None;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    b = Some(match b {
                        None => (x, y, x, y),
                        Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
                    });
                }
            }
        }
        b
    }

    pub fn to_gray(&self) -> GrayImage {
        GrayImage::from_fn(self.width as u32, self.height as u32, |x, y| {
            Luma([if self.get(x as usize, y as usize) { 0 } else { 255 }])
        })
    }

    /// Thresholds a grayscale image: pixels darker than mid-grey are ink.
    pub fn from_gray(img: &GrayImage, px_per_mm: f64) -> Self {
        Self::from_fn(img.width() as usize, img.height() as usize, px_per_mm, |x, y| {
            img.get_pixel(x as u32, y as u32).0[0] < 128
        })
    }

    /// Loads any image format the `image` crate understands.
    pub fn load_png(path: impl AsRef<Path>, px_per_mm: f64) -> Result<Self> {
        let path = path.as_ref();
        let img = image::open(path).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::from_gray(&img.to_luma8(), px_per_mm))
    }

    /// PNG bytes of the raster, black ink on white.
    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let mut buf = std::io::Cursor::new(Vec::new());
        self.to_gray()
            .write_to(&mut buf, image::ImageFormat::Png)
            .map_err(|source| Error::Image {
                path: "<memory>".into(),
                source,
            })?;
        Ok(buf.into_inner())
    }
}
