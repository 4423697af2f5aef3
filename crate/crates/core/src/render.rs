//! Rasterizes a road network into a multi-channel speed mask.

use crate::error::{Error, Result};
use crate::geom::{segment_distance, Point};
use crate::network::RoadNetwork;
use crate::raster::{GeoTransform, SpeedMask};
use crate::speed::{speed_to_channel, UNION_CHANNEL};

pub const DEFAULT_BUFFER_M: f64 = 2.0;

pub fn world_to_pixel(transform: &GeoTransform, x: f64, y: f64) -> (f64, f64) {
    transform.world_to_pixel(x, y)
}

pub fn pixel_to_world(transform: &GeoTransform, col: f64, row: f64) -> (f64, f64) {
    transform.pixel_to_world(col, row)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderParams {
    buffer_m: f64,
    pub transform: GeoTransform,
    pub width_px: usize,
    pub height_px: usize,
}

impl RenderParams {
    pub fn new(buffer_m: f64, transform: GeoTransform, width_px: usize, height_px: usize) -> Result<Self> {
        if !(buffer_m > 0.0 && buffer_m.is_finite()) {
            return Err(Error::Validation(format!("buffer must be positive, got {buffer_m}")));
        }
        Ok(RenderParams { buffer_m, transform, width_px, height_px })
    }

    pub fn buffer_m(&self) -> f64 {
        self.buffer_m
    }
}

/// Paints every pixel whose center lies within `buffer_m` of an edge into
/// that edge's speed channel and the union channel. Geometry outside the
/// window is clipped.
pub fn rasterize_network(network: &RoadNetwork, params: &RenderParams) -> Result<SpeedMask> {
    let mut mask = SpeedMask::zeros(params.width_px, params.height_px, params.transform);
    for edge in network.edges() {
        let speed = edge.speed_mph.ok_or_else(|| {
            Error::Precondition(format!("edge {} has no speed assigned", edge.id))
        })?;
        let channel = speed_to_channel(speed)?;
        for seg in edge.geometry.windows(2) {
            paint_segment(&mut mask, params, seg[0], seg[1], channel);
        }
    }
    Ok(mask)
}

fn paint_segment(mask: &mut SpeedMask, params: &RenderParams, a: Point, b: Point, channel: usize) {
    let t = &params.transform;
    let buf = params.buffer_m;
    let gsd = t.gsd_m();
    // Candidate pixel window: the segment's bounding box grown by the buffer.
    let (ca, ra) = t.world_to_pixel(a.x, a.y);
    let (cb, rb) = t.world_to_pixel(b.x, b.y);
    let pad = buf / gsd + 1.0;
    let clamp = |v: f64, hi: usize| v.max(0.0).min(hi as f64) as usize;
    let c0 = clamp((ca.min(cb) - pad).floor(), params.width_px);
    let c1 = clamp((ca.max(cb) + pad).ceil(), params.width_px);
    let r0 = clamp((ra.min(rb) - pad).floor(), params.height_px);
    let r1 = clamp((ra.max(rb) + pad).ceil(), params.height_px);
    let width = params.width_px;
    for row in r0..r1 {
        for col in c0..c1 {
            if segment_distance(t.pixel_center(col, row), a, b) <= buf {
                let idx = row * width + col;
                mask.channel_mut(channel)[idx] = 255;
                mask.channel_mut(UNION_CHANNEL)[idx] = 255;
            }
        }
    }
}
