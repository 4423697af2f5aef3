//! Per-edge speed inference from mask channel evidence.

use crate::error::{Error, Result};
use crate::network::RoadNetwork;
use crate::raster::SpeedMask;
use crate::speed::{channel_to_speed, speed_to_channel, FALLBACK_SPEED_MPH, SPEED_CHANNELS};

/// Sums speed-channel intensities in a `(2r+1)²` window around every
/// geometry vertex of an edge and assigns the speed of the strongest
/// channel. Ties go to the slower channel; an edge with no evidence at all
/// gets the fallback speed.
pub fn assign_speeds(network: &RoadNetwork, mask: &SpeedMask, patch_radius_px: usize) -> Result<RoadNetwork> {
    if let Some(bb) = network.bbox() {
        if !bb.intersects(&mask.extent()) {
            return Err(Error::FrameMismatch(format!(
                "network extent {bb:?} lies outside the mask extent {:?}",
                mask.extent()
            )));
        }
    }
    let mut out = network.clone();
    let r = patch_radius_px as isize;
    let (w, h) = (mask.width() as isize, mask.height() as isize);
    for edge in network.edges() {
        let mut sums = [0u64; SPEED_CHANNELS];
        for p in &edge.geometry {
            let (col, row) = mask.transform.world_to_pixel(p.x, p.y);
            let (col, row) = (col.floor() as isize, row.floor() as isize);
            let (c0, c1) = ((col - r).max(0), (col + r).min(w - 1));
            let (r0, r1) = ((row - r).max(0), (row + r).min(h - 1));
            for (k, sum) in sums.iter_mut().enumerate() {
                let plane = mask.channel(k + 1);
                for rr in r0..=r1 {
                    for cc in c0..=c1 {
                        *sum += u64::from(plane[(rr * w + cc) as usize]);
                    }
                }
            }
        }
        let best = sums
            .iter()
            .enumerate()
            .fold((0, 0u64), |best, (k, &s)| if s > best.1 { (k + 1, s) } else { best });
        let speed = if best.1 == 0 {
            FALLBACK_SPEED_MPH
        } else {
            channel_to_speed(best.0)?
        };
        debug_assert!(speed_to_channel(speed).is_ok());
        out.set_speed(edge.id, speed)?;
    }
    Ok(out)
}
