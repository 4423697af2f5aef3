//! Thresholding and morphological cleanup of predicted masks.

use crate::raster::{BinaryRaster, SpeedMask};
use crate::speed::UNION_CHANNEL;

/// Pixels whose union-channel intensity reaches `threshold × 255`.
pub fn binarize(mask: &SpeedMask, threshold: f64) -> BinaryRaster {
    let cut = threshold * 255.0;
    BinaryRaster {
        width: mask.width(),
        height: mask.height(),
        data: mask.channel(UNION_CHANNEL).iter().map(|&v| f64::from(v) >= cut).collect(),
    }
}

/// Offsets of a digital disc: all `(dx, dy)` with `dx² + dy² ≤ r²`.
fn disc(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r * r {
                out.push((dx, dy));
            }
        }
    }
    out
}

fn dilate(src: &BinaryRaster, se: &[(isize, isize)]) -> BinaryRaster {
    let mut out = BinaryRaster::new(src.width, src.height);
    for row in 0..src.height {
        for col in 0..src.width {
            if !src.get(col, row) {
                continue;
            }
            for &(dx, dy) in se {
                let (c, r) = (col as isize + dx, row as isize + dy);
                if c >= 0 && r >= 0 && (c as usize) < src.width && (r as usize) < src.height {
                    out.set(c as usize, r as usize, true);
                }
            }
        }
    }
    out
}

fn erode(src: &BinaryRaster, se: &[(isize, isize)]) -> BinaryRaster {
    let mut out = BinaryRaster::new(src.width, src.height);
    for row in 0..src.height {
        for col in 0..src.width {
            if src.get(col, row) {
                let keep = se
                    .iter()
                    .all(|&(dx, dy)| src.get_signed(col as isize + dx, row as isize + dy));
                out.set(col, row, keep);
            }
        }
    }
    out
}

/// Copy of `src` grown by `pad` pixels on every side, replicating the
/// nearest edge pixel.
fn pad_replicate(src: &BinaryRaster, pad: usize) -> BinaryRaster {
    let mut out = BinaryRaster::new(src.width + 2 * pad, src.height + 2 * pad);
    for row in 0..out.height {
        let r = row.saturating_sub(pad).min(src.height - 1);
        for col in 0..out.width {
            let c = col.saturating_sub(pad).min(src.width - 1);
            out.set(col, row, src.get(c, r));
        }
    }
    out
}

/// Morphological closing with a disc. The raster is extended by edge
/// replication first so roads running off the tile keep their width.
pub fn close(src: &BinaryRaster, radius: usize) -> BinaryRaster {
    if radius == 0 || src.data.is_empty() {
        return src.clone();
    }
    let se = disc(radius);
    let pad = 2 * radius;
    let closed = erode(&dilate(&pad_replicate(src, pad), &se), &se);
    let mut out = BinaryRaster::new(src.width, src.height);
    for row in 0..src.height {
        for col in 0..src.width {
            out.set(col, row, closed.get(col + pad, row + pad));
        }
    }
    out
}

pub const NEIGHBORS8: [(isize, isize); 8] =
    [(1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1)];

/// 8-connected component labels (0 = background) and the component count.
pub fn label_components(src: &BinaryRaster) -> (Vec<u32>, u32) {
    let mut labels = vec![0u32; src.data.len()];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..src.data.len() {
        if !src.data[start] || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (col, row) = ((i % src.width) as isize, (i / src.width) as isize);
            for (dx, dy) in NEIGHBORS8 {
                let (c, r) = (col + dx, row + dy);
                if src.get_signed(c, r) {
                    let j = r as usize * src.width + c as usize;
                    if labels[j] == 0 {
                        labels[j] = next;
                        stack.push(j);
                    }
                }
            }
        }
    }
    (labels, next)
}

/// Drops 8-connected components with fewer than `min_area` pixels.
pub fn remove_small_components(src: &BinaryRaster, min_area: usize) -> BinaryRaster {
    let (labels, n) = label_components(src);
    let mut area = vec![0usize; n as usize + 1];
    for &l in &labels {
        area[l as usize] += 1;
    }
    BinaryRaster {
        width: src.width,
        height: src.height,
        data: labels.iter().map(|&l| l != 0 && area[l as usize] >= min_area).collect(),
    }
}

/// Closing with a disc, then removal of components below `min_blob_area_px`.
pub fn refine(binary: &BinaryRaster, closing_radius_px: usize, min_blob_area_px: usize) -> BinaryRaster {
    remove_small_components(&close(binary, closing_radius_px), min_blob_area_px)
}
