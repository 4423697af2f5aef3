//! Converts a thin skeleton raster into a spatial road graph.

use std::collections::HashSet;

use super::morph::NEIGHBORS8;
use crate::geom::Point;
use crate::network::{NodeId, RoadNetwork};
use crate::raster::{BinaryRaster, GeoTransform};

/// Skeleton pixel adjacency. Diagonal steps are dropped when a shared
/// 4-neighbor is also set: the two-step route through that neighbor already
/// connects them, and keeping both would turn every staircase corner into a
/// spurious junction.
pub(crate) fn pixel_neighbors(img: &BinaryRaster, col: usize, row: usize) -> Vec<usize> {
    let (c, r) = (col as isize, row as isize);
    NEIGHBORS8
        .iter()
        .filter(|&&(dx, dy)| {
            img.get_signed(c + dx, r + dy)
                && (dx == 0 || dy == 0 || !(img.get_signed(c + dx, r) || img.get_signed(c, r + dy)))
        })
        .map(|&(dx, dy)| (r + dy) as usize * img.width + (c + dx) as usize)
        .collect()
}

/// Total skeleton length in meters: every retained pixel adjacency counted
/// once, 1 per axis step and √2 per diagonal step, times the GSD.
pub fn skeleton_arclength(img: &BinaryRaster, gsd_m: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..img.data.len() {
        if !img.data[i] {
            continue;
        }
        let (col, row) = (i % img.width, i / img.width);
        for j in pixel_neighbors(img, col, row) {
            if j > i {
                let diagonal = j % img.width != col && j / img.width != row;
                total += if diagonal { std::f64::consts::SQRT_2 } else { 1.0 };
            }
        }
    }
    total * gsd_m
}

/// Nodes sit on skeleton pixels whose neighbor count is not 2 (junctions
/// and line ends); edges follow the chains of two-neighbor pixels between
/// them. A closed ring without any such pixel gets one anchor node and a
/// self-loop.
pub fn graph_from_skeleton(skeleton: &BinaryRaster, transform: &GeoTransform) -> RoadNetwork {
    let width = skeleton.width;
    let set: Vec<usize> = (0..skeleton.data.len()).filter(|&i| skeleton.data[i]).collect();
    let adjacency: std::collections::HashMap<usize, Vec<usize>> = set
        .iter()
        .map(|&i| (i, pixel_neighbors(skeleton, i % width, i / width)))
        .collect();
    let center = |i: usize| transform.pixel_center(i % width, i / width);

    let mut net = RoadNetwork::new();
    let mut node_at = std::collections::HashMap::new();
    for &i in &set {
        if adjacency[&i].len() != 2 {
            node_at.insert(i, net.add_node(center(i)));
        }
    }

    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let step = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut visited = vec![false; skeleton.data.len()];

    let mut trace = |net: &mut RoadNetwork,
                     node_at: &std::collections::HashMap<usize, NodeId>,
                     visited: &mut Vec<bool>,
                     start: usize,
                     first: usize| {
        if !used.insert(step(start, first)) {
            return;
        }
        let mut path = vec![start, first];
        let (mut prev, mut cur) = (start, first);
        while !node_at.contains_key(&cur) {
            visited[cur] = true;
            let next = adjacency[&cur]
                .iter()
                .copied()
                .find(|&n| n != prev)
                .expect("chain pixels have two neighbors");
            used.insert(step(cur, next));
            path.push(next);
            prev = cur;
            cur = next;
        }
        let geometry: Vec<Point> = path.iter().map(|&i| center(i)).collect();
        net.add_edge(node_at[&start], node_at[&cur], geometry)
            .expect("skeleton chains form valid edges");
    };

    let mut starts: Vec<usize> = node_at.keys().copied().collect();
    starts.sort_unstable();
    for &n in &starts {
        visited[n] = true;
        for &q in &adjacency[&n] {
            trace(&mut net, &node_at, &mut visited, n, q);
        }
    }
    // Rings made only of two-neighbor pixels.
    for &i in &set {
        if visited[i] {
            continue;
        }
        node_at.insert(i, net.add_node(center(i)));
        visited[i] = true;
        let first = adjacency[&i][0];
        trace(&mut net, &node_at, &mut visited, i, first);
    }
    net
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::skeleton::skeletonize;

    fn t() -> GeoTransform {
        GeoTransform::new(0.0, 0.0, 0.5).unwrap()
    }

    #[test]
    fn empty_skeleton() {
        assert_eq!(graph_from_skeleton(&BinaryRaster::new(4, 4), &t()).node_count(), 0);
    }

    #[test]
    fn straight_line() {
        let mut img = BinaryRaster::new(25, 3);
        for c in 2..23 {
            img.set(c, 1, true);
        }
        let net = graph_from_skeleton(&img, &t());
        assert_eq!((net.node_count(), net.edge_count()), (2, 1));
        let e = net.edges().next().unwrap();
        assert!((e.length_m - 20.0 * 0.5).abs() < 1e-12);
        net.validate().unwrap();
    }

    #[test]
    fn plus_sign() {
        let mut img = BinaryRaster::new(21, 21);
        for k in 0..21 {
            img.set(k, 10, true);
            img.set(10, k, true);
        }
        let net = graph_from_skeleton(&img, &t());
        assert_eq!((net.node_count(), net.edge_count()), (5, 4));
        let mut degrees: Vec<usize> = net.nodes().map(|n| net.degree(n.id)).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 1, 1, 4]);
        for e in net.edges() {
            assert!((e.length_m - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_ring_is_a_self_loop() {
        let ring = BinaryRaster::from_ascii(&[
            "..........",
            "...####...",
            "..#....#..",
            ".#......#.",
            ".#......#.",
            "..#....#..",
            "...####...",
            "..........",
        ]);
        // 16 pixels: 3 axis steps along the top run, 3 along the bottom,
        // 1 on each side, plus 8 diagonal steps around the corners.
        let expected = (8.0 + 8.0 * std::f64::consts::SQRT_2) * 0.5;
        let net = graph_from_skeleton(&ring, &t());
        assert_eq!((net.node_count(), net.edge_count()), (1, 1));
        let e = net.edges().next().unwrap();
        assert!(e.is_self_loop());
        assert!((e.length_m - expected).abs() < 1e-12, "{}", e.length_m);
        assert!((skeleton_arclength(&ring, 0.5) - expected).abs() < 1e-12);
    }

    #[test]
    fn staircase_is_a_single_edge() {
        let img = BinaryRaster::from_ascii(&["##....", ".##...", "..##..", "...##."]);
        let net = graph_from_skeleton(&img, &t());
        assert_eq!((net.node_count(), net.edge_count()), (2, 1));
    }

    #[test]
    fn loop_through_a_junction() {
        // a lollipop: stick attached to a ring at one junction pixel
        let img = BinaryRaster::from_ascii(&[
            "........",
            "..###...",
            ".#...#..",
            ".#...#..",
            "..###...",
            "...#....",
            "...#....",
            "........",
        ]);
        let net = graph_from_skeleton(&img, &t());
        net.validate().unwrap();
        assert_eq!(net.edges().filter(|e| e.is_self_loop()).count(), 1);
        assert!((net.total_length() - skeleton_arclength(&img, 0.5)).abs() < 1e-9);
    }

    proptest::proptest! {
        #[test]
        fn edge_lengths_sum_to_skeleton_arclength(
            bits in proptest::collection::vec(proptest::bool::weighted(0.45), 24 * 24),
        ) {
            let img = skeletonize(&BinaryRaster { width: 24, height: 24, data: bits });
            let net = graph_from_skeleton(&img, &t());
            net.validate().unwrap();
            let want = skeleton_arclength(&img, 0.5);
            proptest::prop_assert!((net.total_length() - want).abs() <= 1e-6 * want.max(1.0));
        }
    }
}
