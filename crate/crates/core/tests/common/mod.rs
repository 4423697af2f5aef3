#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roadnet::apls::Weight;
use roadnet::geom::Point;
use roadnet::network::{NodeId, RoadNetwork};

pub const SPEEDS: [f64; 5] = [25.0, 35.0, 45.0, 55.0, 65.0];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn bend(rng: &mut ChaCha8Rng, a: Point, b: Point) -> Vec<Point> {
    if rng.gen_bool(0.7) {
        return vec![a, b];
    }
    let mid = a.lerp(b, rng.gen_range(0.3..0.7));
    let len = a.dist(b);
    let off = rng.gen_range(-0.2..0.2) * len;
    let (nx, ny) = (-(b.y - a.y) / len, (b.x - a.x) / len);
    vec![a, Point::new(mid.x + nx * off, mid.y + ny * off), b]
}

/// Random road graph with `n` nodes spread over a 400 m square. Mostly
/// connected (a random tree plus extra edges), occasionally with a second
/// component; every edge gets a speed from `SPEEDS`.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize) -> RoadNetwork {
    let mut net = RoadNetwork::new();
    let mut ids: Vec<NodeId> = Vec::new();
    while ids.len() < n {
        let p = Point::new(rng.gen_range(0.0..400.0), rng.gen_range(0.0..400.0));
        if net.nodes().all(|m| m.pos.dist(p) > 10.0) {
            ids.push(net.add_node(p));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        if rng.gen_bool(0.92) {
            pairs.push((rng.gen_range(0..i), i));
        }
    }
    for _ in 0..n / 3 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !pairs.contains(&(a.min(b), a.max(b))) {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    for (a, b) in pairs {
        let pa = net.node(ids[a]).unwrap().pos;
        let pb = net.node(ids[b]).unwrap().pos;
        let geom = bend(rng, pa, pb);
        let e = net.add_edge(ids[a], ids[b], geom).unwrap();
        net.set_speed(e, *SPEEDS.choose(rng).unwrap()).unwrap();
    }
    net
}

/// Ground truth with up to `max_nodes` nodes and a proposal derived from it
/// by jittering nodes, dropping and adding edges and changing speeds.
pub fn random_pair(rng: &mut ChaCha8Rng, max_nodes: usize) -> (RoadNetwork, RoadNetwork) {
    let n = rng.gen_range(3..=max_nodes);
    let gt = random_network(rng, n);
    let mut prop = RoadNetwork::new();
    for node in gt.nodes() {
        let j = Point::new(node.pos.x + rng.gen_range(-5.0..5.0), node.pos.y + rng.gen_range(-5.0..5.0));
        prop.insert_node(node.id, j).unwrap();
    }
    for e in gt.edges() {
        if rng.gen_bool(0.15) {
            continue;
        }
        let mut geom = e.geometry.clone();
        let last = geom.len() - 1;
        geom[0] = prop.node(e.u).unwrap().pos;
        geom[last] = prop.node(e.v).unwrap().pos;
        for p in &mut geom[1..last] {
            *p = Point::new(p.x + rng.gen_range(-3.0..3.0), p.y + rng.gen_range(-3.0..3.0));
        }
        let id = prop.add_edge(e.u, e.v, geom).unwrap();
        let speed = if rng.gen_bool(0.3) { *SPEEDS.choose(rng).unwrap() } else { e.speed_mph.unwrap() };
        prop.set_speed(id, speed).unwrap();
    }
    if rng.gen_bool(0.3) {
        let ids: Vec<NodeId> = prop.nodes().map(|n| n.id).collect();
        let (a, b) = (*ids.choose(rng).unwrap(), *ids.choose(rng).unwrap());
        if a != b {
            let geom = vec![prop.node(a).unwrap().pos, prop.node(b).unwrap().pos];
            let id = prop.add_edge(a, b, geom).unwrap();
            prop.set_speed(id, *SPEEDS.choose(rng).unwrap()).unwrap();
        }
    }
    (gt, prop)
}

/// `nx` × `ny` lattice of straight roads at `spacing` metres.
pub fn grid_network(nx: usize, ny: usize, spacing: f64, speed: f64) -> RoadNetwork {
    let mut net = RoadNetwork::new();
    let mut ids = vec![vec![NodeId(0); ny]; nx];
    for (i, col) in ids.iter_mut().enumerate() {
        for (j, id) in col.iter_mut().enumerate() {
            *id = net.add_node(Point::new(i as f64 * spacing, j as f64 * spacing));
        }
    }
    for i in 0..nx {
        for j in 0..ny {
            let here = net.node(ids[i][j]).unwrap().pos;
            let mut link = |other: NodeId| {
                let geom = vec![here, net.node(other).unwrap().pos];
                let e = net.add_edge(ids[i][j], other, geom).unwrap();
                net.set_speed(e, speed).unwrap();
            };
            if i + 1 < nx {
                link(ids[i + 1][j]);
            }
            if j + 1 < ny {
                link(ids[i][j + 1]);
            }
        }
    }
    net
}

/// Same network with every edge at `speed`.
pub fn with_uniform_speed(net: &RoadNetwork, speed: f64) -> RoadNetwork {
    let mut out = net.clone();
    let ids: Vec<_> = out.edges().map(|e| e.id).collect();
    for id in ids {
        out.set_speed(id, speed).unwrap();
    }
    out
}

fn seg_project(p: Point, a: Point, b: Point) -> (f64, f64) {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0) };
    let (qx, qy) = (a.x + t * dx, a.y + t * dy);
    (t, ((p.x - qx).powi(2) + (p.y - qy).powi(2)).sqrt())
}

struct OracleSnap {
    edge: usize,
    offset: f64,
}

fn weight_of(e: &roadnet::network::Edge, w: Weight) -> f64 {
    match w {
        Weight::Length => e.length_m,
        Weight::Time => e.travel_time_s.unwrap(),
    }
}

fn floyd_warshall(net: &RoadNetwork, w: Weight) -> (Vec<NodeId>, Vec<Vec<f64>>) {
    let ids: Vec<NodeId> = net.nodes().map(|n| n.id).collect();
    let pos = |id: NodeId| ids.iter().position(|&x| x == id).unwrap();
    let n = ids.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in net.edges() {
        let (a, b) = (pos(e.u), pos(e.v));
        let c = weight_of(e, w);
        if c < d[a][b] {
            d[a][b] = c;
            d[b][a] = c;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    (ids, d)
}

/// All-pairs brute-force directional APLS without control points.
/// `None` when the source has no connected pair.
pub fn oracle_directional(source: &RoadNetwork, target: &RoadNetwork, buffer: f64, w: Weight) -> Option<f64> {
    let (src_ids, src_d) = floyd_warshall(source, w);
    let (tgt_ids, tgt_d) = floyd_warshall(target, w);
    let tgt_edges: Vec<&roadnet::network::Edge> = target.edges().collect();
    let tpos = |id: NodeId| tgt_ids.iter().position(|&x| x == id).unwrap();

    let snaps: Vec<Option<OracleSnap>> = source
        .nodes()
        .map(|n| {
            let mut best: Option<(f64, OracleSnap)> = None;
            for (k, e) in tgt_edges.iter().enumerate() {
                let mut walked = 0.0;
                for s in e.geometry.windows(2) {
                    let (t, d) = seg_project(n.pos, s[0], s[1]);
                    let len = s[0].dist(s[1]);
                    if d <= buffer && best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                        best = Some((d, OracleSnap { edge: k, offset: (walked + t * len).min(e.length_m) }));
                    }
                    walked += len;
                }
            }
            best.map(|(_, s)| s)
        })
        .collect();

    let ends = |s: &OracleSnap| {
        let e = tgt_edges[s.edge];
        let c = weight_of(e, w);
        [(tpos(e.u), c * s.offset / e.length_m), (tpos(e.v), c * (e.length_m - s.offset) / e.length_m)]
    };
    let target_cost = |a: &OracleSnap, b: &OracleSnap| {
        let mut best = f64::INFINITY;
        if a.edge == b.edge {
            let e = tgt_edges[a.edge];
            best = weight_of(e, w) * (a.offset - b.offset).abs() / e.length_m;
        }
        for (ia, ca) in ends(a) {
            for (ib, cb) in ends(b) {
                best = best.min(ca + tgt_d[ia][ib] + cb);
            }
        }
        best
    };

    let (mut total, mut pairs) = (0.0, 0usize);
    for i in 0..src_ids.len() {
        for j in i + 1..src_ids.len() {
            let c = src_d[i][j];
            if !c.is_finite() {
                continue;
            }
            pairs += 1;
            let err = match (&snaps[i], &snaps[j]) {
                (Some(a), Some(b)) => {
                    let t = target_cost(a, b);
                    if t.is_finite() {
                        ((c - t).abs() / c).min(1.0)
                    } else {
                        1.0
                    }
                }
                _ => 1.0,
            };
            total += err;
        }
    }
    (pairs > 0).then(|| 1.0 - total / pairs as f64)
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Parameter along `a0→a1` where it crosses `b0→b1`, if the segments cross.
fn intersect(a0: Point, a1: Point, b0: Point, b1: Point) -> Option<(f64, Point)> {
    let d = cross(Point::new(0.0, 0.0), Point::new(a1.x - a0.x, a1.y - a0.y), Point::new(b1.x - b0.x, b1.y - b0.y));
    if d.abs() < 1e-12 {
        return None;
    }
    let t = ((b0.x - a0.x) * (b1.y - b0.y) - (b0.y - a0.y) * (b1.x - b0.x)) / d;
    let u = ((b0.x - a0.x) * (a1.y - a0.y) - (b0.y - a0.y) * (a1.x - a0.x)) / d;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then(|| (t, a0.lerp(a1, t)))
}

fn segment_gap(a0: Point, a1: Point, b0: Point, b1: Point) -> f64 {
    [seg_project(a0, b0, b1).1, seg_project(a1, b0, b1).1, seg_project(b0, a0, a1).1, seg_project(b1, a0, a1).1]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

fn acute_angle_deg(a0: Point, a1: Point, b0: Point, b1: Point) -> f64 {
    let (ax, ay) = (a1.x - a0.x, a1.y - a0.y);
    let (bx, by) = (b1.x - b0.x, b1.y - b0.y);
    let c = (ax * bx + ay * by).abs() / ((ax * ax + ay * ay).sqrt() * (bx * bx + by * by).sqrt());
    c.clamp(0.0, 1.0).acos().to_degrees()
}

/// Straight roads inside a `size`-metre square tile: crossings at 30° or
/// more, non-crossing roads at least 20 m apart, crossings at least 25 m
/// from each other and from road ends. Roads are split at crossings into
/// shared nodes.
pub fn synthetic_tile(rng: &mut ChaCha8Rng, size: f64, n_roads: usize) -> RoadNetwork {
    let margin = 20.0;
    let mut roads: Vec<(Point, Point, f64)> = Vec::new();
    let mut crossings: Vec<Point> = Vec::new();
    let mut attempts = 0;
    while roads.len() < n_roads {
        attempts += 1;
        assert!(attempts < 100_000, "could not place {n_roads} roads");
        let c = Point::new(rng.gen_range(margin..size - margin), rng.gen_range(margin..size - margin));
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let (dx, dy) = (theta.cos(), theta.sin());
        // extend to the margin box in both directions
        let reach = |sx: f64, sy: f64| {
            let mut t = f64::INFINITY;
            if sx.abs() > 1e-12 {
                t = t.min(if sx > 0.0 { (size - margin - c.x) / sx } else { (margin - c.x) / sx });
            }
            if sy.abs() > 1e-12 {
                t = t.min(if sy > 0.0 { (size - margin - c.y) / sy } else { (margin - c.y) / sy });
            }
            t
        };
        let (ta, tb) = (reach(dx, dy), reach(-dx, -dy));
        let a = Point::new(c.x + dx * ta, c.y + dy * ta);
        let b = Point::new(c.x - dx * tb, c.y - dy * tb);
        if a.dist(b) < 80.0 {
            continue;
        }
        let mut new_crossings = Vec::new();
        let mut ok = true;
        for &(p, q, _) in &roads {
            match intersect(a, b, p, q) {
                Some((_, x)) => {
                    let ends_ok = [a, b, p, q].iter().all(|e| e.dist(x) >= 25.0);
                    if acute_angle_deg(a, b, p, q) < 30.0 || !ends_ok {
                        ok = false;
                        break;
                    }
                    new_crossings.push(x);
                }
                None => {
                    if segment_gap(a, b, p, q) < 20.0 {
                        ok = false;
                        break;
                    }
                }
            }
        }
        let spaced = new_crossings
            .iter()
            .enumerate()
            .all(|(i, x)| crossings.iter().chain(&new_crossings[..i]).all(|y| x.dist(*y) >= 25.0));
        if !ok || !spaced {
            continue;
        }
        crossings.extend(new_crossings);
        roads.push((a, b, *SPEEDS.choose(rng).unwrap()));
    }

    let mut net = RoadNetwork::new();
    let node_at = |net: &mut RoadNetwork, p: Point| {
        let found = net.nodes().find(|n| n.pos.dist(p) < 1e-6).map(|n| n.id);
        found.unwrap_or_else(|| net.add_node(p))
    };
    for (i, &(a, b, speed)) in roads.iter().enumerate() {
        let mut cuts: Vec<(f64, Point)> = vec![(0.0, a), (1.0, b)];
        for (j, &(p, q, _)) in roads.iter().enumerate() {
            if i != j {
                if let Some((t, _)) = intersect(a, b, p, q) {
                    // the crossing point computed from the lower-index road,
                    // so both roads share the exact same coordinates
                    let x = if i < j { a.lerp(b, t) } else { intersect(p, q, a, b).unwrap().1 };
                    cuts.push((t, x));
                }
            }
        }
        cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in cuts.windows(2) {
            let (u, v) = (node_at(&mut net, w[0].1), node_at(&mut net, w[1].1));
            let e = net.add_edge(u, v, vec![w[0].1, w[1].1]).unwrap();
            net.set_speed(e, speed).unwrap();
        }
    }
    net
}
