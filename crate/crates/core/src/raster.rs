//! Georeferenced rasters: the multi-channel speed mask and binary planes.

use crate::error::{Error, Result};
use crate::geom::{BBox, Point};
use crate::speed::{channel_to_speed, NUM_CHANNELS, SPEED_CHANNELS};

/// North-up affine transform with square pixels. Column grows with x, row
/// grows with decreasing y; `(origin_x, origin_y)` is the outer corner of
/// pixel (0, 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoTransform {
    pub origin_x: f64,
    pub origin_y: f64,
    gsd_m: f64,
}

impl GeoTransform {
    pub fn new(origin_x: f64, origin_y: f64, gsd_m: f64) -> Result<Self> {
        if !(gsd_m > 0.0 && gsd_m.is_finite()) {
            return Err(Error::Validation(format!("gsd must be positive, got {gsd_m}")));
        }
        Ok(GeoTransform { origin_x, origin_y, gsd_m })
    }

    pub fn gsd_m(&self) -> f64 {
        self.gsd_m
    }

    /// Fractional (col, row) of a world point.
    pub fn world_to_pixel(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.origin_x) / self.gsd_m, (self.origin_y - y) / self.gsd_m)
    }

    pub fn pixel_to_world(&self, col: f64, row: f64) -> (f64, f64) {
        (self.origin_x + col * self.gsd_m, self.origin_y - row * self.gsd_m)
    }

    /// World coordinates of the center of pixel (col, row).
    pub fn pixel_center(&self, col: usize, row: usize) -> Point {
        let (x, y) = self.pixel_to_world(col as f64 + 0.5, row as f64 + 0.5);
        Point::new(x, y)
    }

    /// World extent of a `width` × `height` raster.
    pub fn extent(&self, width: usize, height: usize) -> BBox {
        let (x1, y1) = self.pixel_to_world(width as f64, height as f64);
        BBox { min: Point::new(self.origin_x, y1), max: Point::new(x1, self.origin_y) }
    }
}

/// Seven 8-bit planes: channels 1–6 are the speed bins, channel 7 the union
/// of all roads.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedMask {
    width: usize,
    height: usize,
    planes: Vec<Vec<u8>>,
    pub transform: GeoTransform,
}

impl SpeedMask {
    pub fn zeros(width: usize, height: usize, transform: GeoTransform) -> Self {
        SpeedMask {
            width,
            height,
            planes: vec![vec![0; width * height]; NUM_CHANNELS],
            transform,
        }
    }

    /// Builds a mask from seven row-major planes.
    pub fn from_planes(
        width: usize,
        height: usize,
        planes: Vec<Vec<u8>>,
        transform: GeoTransform,
    ) -> Result<Self> {
        if planes.len() != NUM_CHANNELS {
            return Err(Error::Validation(format!(
                "expected {NUM_CHANNELS} planes, got {}",
                planes.len()
            )));
        }
        if let Some(p) = planes.iter().position(|p| p.len() != width * height) {
            return Err(Error::Validation(format!(
                "plane {} has {} pixels, expected {}",
                p + 1,
                planes[p].len(),
                width * height
            )));
        }
        Ok(SpeedMask { width, height, planes, transform })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Plane for a 1-based channel index.
    pub fn channel(&self, channel: usize) -> &[u8] {
        &self.planes[channel - 1]
    }

    pub fn channel_mut(&mut self, channel: usize) -> &mut [u8] {
        &mut self.planes[channel - 1]
    }

    pub fn get(&self, channel: usize, col: usize, row: usize) -> u8 {
        self.planes[channel - 1][row * self.width + col]
    }

    /// Bin-center speed of each speed channel, indexed by channel.
    pub fn channel_speeds() -> [(usize, f64); SPEED_CHANNELS] {
        std::array::from_fn(|i| (i + 1, channel_to_speed(i + 1).expect("speed channel")))
    }

    pub fn extent(&self) -> BBox {
        self.transform.extent(self.width, self.height)
    }
}

/// Row-major boolean raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRaster {
    pub width: usize,
    pub height: usize,
    pub data: Vec<bool>,
}

impl BinaryRaster {
    pub fn new(width: usize, height: usize) -> Self {
        BinaryRaster { width, height, data: vec![false; width * height] }
    }

    /// Parses rows of `#` (set) and `.` (unset).
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), width, "ragged ascii raster");
                r.chars().map(|c| c == '#')
            })
            .collect();
        BinaryRaster { width, height, data }
    }

    pub fn to_ascii(&self) -> Vec<String> {
        self.data
            .chunks(self.width.max(1))
            .map(|row| row.iter().map(|&b| if b { '#' } else { '.' }).collect())
            .collect()
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        self.data[row * self.width + col]
    }

    /// Out-of-bounds reads return `false`.
    pub fn get_signed(&self, col: isize, row: isize) -> bool {
        col >= 0
            && row >= 0
            && (col as usize) < self.width
            && (row as usize) < self.height
            && self.data[row as usize * self.width + col as usize]
    }

    pub fn set(&mut self, col: usize, row: usize, value: bool) {
        self.data[row * self.width + col] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn is_subset_of(&self, other: &BinaryRaster) -> bool {
        self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }
}
