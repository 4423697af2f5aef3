//! Topology-preserving thinning to a one-pixel-wide skeleton.
//!
//! Foreground is 8-connected and background 4-connected. A pixel is removed
//! only if it is simple (its Yokoi 8-connectivity number is 1) and not a line
//! end, so components, holes and branch tips survive. Removal is sequential
//! within each directional sub-pass, which keeps two-pixel-thick strokes from
//! vanishing.

use super::morph::NEIGHBORS8;
use crate::raster::BinaryRaster;

/// Neighborhood bits in `NEIGHBORS8` order (E, NE, N, NW, W, SW, S, SE).
pub(crate) fn neighborhood(img: &BinaryRaster, col: usize, row: usize) -> u8 {
    let mut bits = 0u8;
    for (k, (dx, dy)) in NEIGHBORS8.iter().enumerate() {
        if img.get_signed(col as isize + dx, row as isize + dy) {
            bits |= 1 << k;
        }
    }
    bits
}

/// Yokoi connectivity number for 8-connected foreground.
pub(crate) fn yokoi8(bits: u8) -> u32 {
    let n = |k: usize| u32::from(bits & (1 << (k % 8)) == 0);
    [0usize, 2, 4, 6]
        .iter()
        .map(|&k| n(k) - n(k) * n(k + 1) * n(k + 2))
        .sum()
}

fn is_simple(bits: u8) -> bool {
    yokoi8(bits) == 1
}

fn deletable(img: &BinaryRaster, col: usize, row: usize) -> bool {
    let bits = neighborhood(img, col, row);
    bits.count_ones() > 1 && is_simple(bits)
}

pub fn skeletonize(binary: &BinaryRaster) -> BinaryRaster {
    let mut img = binary.clone();
    let mut fg: Vec<(usize, usize)> = (0..img.height)
        .flat_map(|r| (0..img.width).map(move |c| (c, r)))
        .filter(|&(c, r)| img.get(c, r))
        .collect();
    // North, south, east, west border sub-passes.
    const BORDERS: [(isize, isize); 4] = [(0, -1), (0, 1), (1, 0), (-1, 0)];
    let mut candidates = Vec::new();
    loop {
        let mut changed = false;
        for (dx, dy) in BORDERS {
            candidates.clear();
            candidates.extend(fg.iter().copied().filter(|&(c, r)| {
                !img.get_signed(c as isize + dx, r as isize + dy) && deletable(&img, c, r)
            }));
            for &(c, r) in &candidates {
                if deletable(&img, c, r) {
                    img.set(c, r, false);
                    changed = true;
                }
            }
            fg.retain(|&(c, r)| img.get(c, r));
        }
        if !changed {
            break;
        }
    }
    remove_square_blocks(&mut img);
    img
}

/// Clears remaining 2×2 fully set blocks. A simple pixel of the block is
/// preferred; failing that, any block pixel whose removal keeps its former
/// neighbors connected through the rest of the image (this may open a loop
/// but never splits a component). Blocks where every pixel is the only link
/// of some branch, such as two one-pixel diagonal strokes crossing, stay.
fn remove_square_blocks(img: &mut BinaryRaster) {
    if img.width < 2 || img.height < 2 {
        return;
    }
    loop {
        let mut changed = false;
        for row in 0..img.height - 1 {
            for col in 0..img.width - 1 {
                let block = [(col, row), (col + 1, row), (col, row + 1), (col + 1, row + 1)];
                if !block.iter().all(|&(c, r)| img.get(c, r)) {
                    continue;
                }
                if let Some(&(c, r)) =
                    block.iter().find(|&&(c, r)| is_simple(neighborhood(img, c, r)))
                {
                    img.set(c, r, false);
                    changed = true;
                    continue;
                }
                for &(c, r) in &block {
                    img.set(c, r, false);
                    if neighbors_still_connected(img, c, r) {
                        changed = true;
                        break;
                    }
                    img.set(c, r, true);
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Whether the set 8-neighbors of the (now cleared) pixel at `(col, row)`
/// all lie in one 8-connected component.
fn neighbors_still_connected(img: &BinaryRaster, col: usize, row: usize) -> bool {
    let targets: Vec<usize> = NEIGHBORS8
        .iter()
        .map(|&(dx, dy)| (col as isize + dx, row as isize + dy))
        .filter(|&(c, r)| img.get_signed(c, r))
        .map(|(c, r)| r as usize * img.width + c as usize)
        .collect();
    let Some(&start) = targets.first() else {
        return false;
    };
    let mut remaining = targets.len() - 1;
    let mut seen = std::collections::HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(i) = stack.pop() {
        let (c, r) = ((i % img.width) as isize, (i / img.width) as isize);
        for (dx, dy) in NEIGHBORS8 {
            if !img.get_signed(c + dx, r + dy) {
                continue;
            }
            let j = (r + dy) as usize * img.width + (c + dx) as usize;
            if seen.insert(j) {
                if targets.contains(&j) {
                    remaining -= 1;
                    if remaining == 0 {
                        return true;
                    }
                }
                stack.push(j);
            }
        }
    }
    remaining == 0
}

/// True if some 2×2 block is fully set.
pub fn has_square_block(img: &BinaryRaster) -> bool {
    (1..img.height).any(|r| {
        (1..img.width).any(|c| img.get(c, r) && img.get(c - 1, r) && img.get(c, r - 1) && img.get(c - 1, r - 1))
    })
}
