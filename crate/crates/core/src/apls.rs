//! Average Path Length Similarity between a ground-truth and a proposal
//! road graph, with either edge length or travel time as the path weight.
//!
//! One direction of the metric injects control points into the source
//! graph, snaps each source node onto the target graph, and compares
//! shortest-path costs for every connected pair of source nodes. The final
//! score averages the two directions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};
use crate::geom::{polyline_length, project_on_segment, split_polyline, Point};
use crate::network::{Edge, EdgeId, NodeId, RoadNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    Length,
    Time,
}

impl Weight {
    pub const BOTH: [Weight; 2] = [Weight::Length, Weight::Time];

    fn of(self, edge: &Edge) -> Result<f64> {
        match self {
            Weight::Length => Ok(edge.length_m),
            Weight::Time => edge.travel_time_s.ok_or_else(|| {
                Error::Precondition(format!("edge {} has no travel time", edge.id))
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AplsParams {
    snap_buffer_m: f64,
    injection_spacing_m: f64,
}

impl Default for AplsParams {
    fn default() -> Self {
        AplsParams { snap_buffer_m: 4.0, injection_spacing_m: 50.0 }
    }
}

impl AplsParams {
    /// `injection_spacing_m` may be infinite to disable control points.
    pub fn new(snap_buffer_m: f64, injection_spacing_m: f64) -> Result<Self> {
        if !(snap_buffer_m > 0.0 && snap_buffer_m.is_finite()) {
            return Err(Error::Validation(format!("snap buffer must be positive, got {snap_buffer_m}")));
        }
        if !(injection_spacing_m > 0.0) {
            return Err(Error::Validation(format!(
                "injection spacing must be positive, got {injection_spacing_m}"
            )));
        }
        Ok(AplsParams { snap_buffer_m, injection_spacing_m })
    }

    pub fn snap_buffer_m(&self) -> f64 {
        self.snap_buffer_m
    }

    pub fn injection_spacing_m(&self) -> f64 {
        self.injection_spacing_m
    }
}

/// Pairs with a finite source path in each direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    pub gt_to_prop: usize,
    pub prop_to_gt: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AplsScores {
    pub apls_length: f64,
    pub apls_time: f64,
    pub pairs: PairCounts,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionalScore {
    /// `None` when the source graph has no connected node pair.
    pub score: Option<f64>,
    pub n_pairs: usize,
}

/// Splits each edge of length `L` into `ceil(L / spacing)` equal pieces,
/// adding the interior cut points as nodes. Travel time is divided in
/// proportion to length.
pub fn inject_control_points(network: &RoadNetwork, spacing_m: f64) -> RoadNetwork {
    let mut out = RoadNetwork::new();
    for n in network.nodes() {
        out.insert_node(n.id, n.pos).expect("source node ids are unique");
    }
    let mut next_edge = 0u64;
    let mut push = |out: &mut RoadNetwork, u: NodeId, v: NodeId, geometry: Vec<Point>, speed: Option<f64>, time: Option<f64>| {
        let length_m = polyline_length(&geometry);
        let edge = Edge { id: EdgeId(next_edge), u, v, geometry, length_m, speed_mph: speed, travel_time_s: time };
        next_edge += 1;
        out.insert_edge(edge).expect("pieces of a valid edge are valid");
    };
    for e in network.edges() {
        // Guard against lengths like 150.00000000000003 adding a piece.
        let pieces = (e.length_m / spacing_m * (1.0 - 1e-12)).ceil();
        if !(pieces > 1.0) {
            push(&mut out, e.u, e.v, e.geometry.clone(), e.speed_mph, e.travel_time_s);
            continue;
        }
        let n = pieces as usize;
        let offsets: Vec<f64> = (1..n).map(|k| e.length_m * k as f64 / n as f64).collect();
        let parts = split_polyline(&e.geometry, &offsets);
        let mut from = e.u;
        for (k, part) in parts.into_iter().enumerate() {
            let to = if k + 1 == n { e.v } else { out.add_node(*part.last().expect("non-empty piece")) };
            let share = polyline_length(&part) / e.length_m;
            push(&mut out, from, to, part, e.speed_mph, e.travel_time_s.map(|t| t * share));
            from = to;
        }
    }
    out
}

/// Where a point lands on a network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snap {
    pub edge_id: EdgeId,
    pub point: Point,
    pub distance: f64,
    /// Arclength from the edge's `u` end to the snapped point.
    pub offset_m: f64,
}

/// Nearest point on any edge within `buffer_m`. Equidistant candidates
/// resolve to the lowest edge id, then the earliest segment.
pub fn snap_point(network: &RoadNetwork, point: Point, buffer_m: f64) -> Option<Snap> {
    let mut best: Option<Snap> = None;
    for e in network.edges() {
        let mut walked = 0.0;
        for seg in e.geometry.windows(2) {
            let (t, d) = project_on_segment(point, seg[0], seg[1]);
            let seg_len = seg[0].dist(seg[1]);
            if d <= buffer_m && best.is_none_or(|b| d < b.distance) {
                best = Some(Snap {
                    edge_id: e.id,
                    point: seg[0].lerp(seg[1], t),
                    distance: d,
                    offset_m: (walked + t * seg_len).min(e.length_m),
                });
            }
            walked += seg_len;
        }
    }
    best
}

#[derive(Clone, Copy, PartialEq)]
struct Visit(f64, usize);

impl Eq for Visit {}

impl Ord for Visit {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Visit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Undirected weighted graph on dense indices.
#[derive(Debug, Default)]
struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    fn with_nodes(n: usize) -> Self {
        WeightedGraph { adj: vec![Vec::new(); n] }
    }

    fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn add_edge(&mut self, a: usize, b: usize, w: f64) {
        self.adj[a].push((b, w));
        if a != b {
            self.adj[b].push((a, w));
        }
    }

    /// Single-source costs; unreachable nodes are infinite.
    fn dijkstra(&self, source: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.adj.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Visit(0.0, source));
        while let Some(Visit(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Visit(nd, v));
                }
            }
        }
        dist
    }
}

/// Dense index of every node id, in id order.
fn index_nodes(network: &RoadNetwork) -> BTreeMap<NodeId, usize> {
    network.nodes().enumerate().map(|(i, n)| (n.id, i)).collect()
}

fn weighted_graph(network: &RoadNetwork, index: &BTreeMap<NodeId, usize>, weight: Weight) -> Result<WeightedGraph> {
    let mut g = WeightedGraph::with_nodes(index.len());
    for e in network.edges() {
        g.add_edge(index[&e.u], index[&e.v], weight.of(e)?);
    }
    Ok(g)
}

pub fn shortest_path_length(network: &RoadNetwork, u: NodeId, v: NodeId, weight: Weight) -> Result<Option<f64>> {
    let index = index_nodes(network);
    let (&iu, &iv) = (
        index.get(&u).ok_or(Error::UnknownNode(u.0))?,
        index.get(&v).ok_or(Error::UnknownNode(v.0))?,
    );
    let dist = weighted_graph(network, &index, weight)?.dijkstra(iu);
    Ok(Some(dist[iv]).filter(|d| d.is_finite()))
}

/// Target graph with every snapped location turned into a vertex; `at[i]`
/// is the vertex for source node `i`, if it snapped.
struct SnappedTarget {
    graphs: Vec<WeightedGraph>,
    at: Vec<Option<usize>>,
}

fn snap_into_target(
    target: &RoadNetwork,
    points: &[Point],
    buffer_m: f64,
    weights: &[Weight],
) -> Result<SnappedTarget> {
    let index = index_nodes(target);
    let mut on_edge: BTreeMap<EdgeId, Vec<(f64, usize)>> = BTreeMap::new();
    let mut at = vec![None; points.len()];
    for (i, &p) in points.iter().enumerate() {
        let Some(snap) = snap_point(target, p, buffer_m) else { continue };
        let e = target.edge(snap.edge_id).expect("snapped edge exists");
        if snap.offset_m <= 0.0 {
            at[i] = Some(index[&e.u]);
        } else if snap.offset_m >= e.length_m {
            at[i] = Some(index[&e.v]);
        } else {
            on_edge.entry(e.id).or_default().push((snap.offset_m, i));
        }
    }

    let mut graphs: Vec<WeightedGraph> = weights.iter().map(|_| WeightedGraph::with_nodes(index.len())).collect();
    let mut next_vertex = index.len();
    for e in target.edges() {
        let (iu, iv) = (index[&e.u], index[&e.v]);
        let mut cuts = on_edge.remove(&e.id).unwrap_or_default();
        cuts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let full: Vec<f64> = weights.iter().map(|w| w.of(e)).collect::<Result<_>>()?;
        // Walk u -> cut points -> v, one vertex per distinct offset.
        let (mut prev_vertex, mut prev_offset) = (iu, 0.0);
        for (offset, source) in cuts {
            if offset > prev_offset {
                let vertex = next_vertex;
                next_vertex += 1;
                for (g, w) in graphs.iter_mut().zip(&full) {
                    g.add_node();
                    g.add_edge(prev_vertex, vertex, w * (offset - prev_offset) / e.length_m);
                }
                prev_vertex = vertex;
                prev_offset = offset;
            }
            at[source] = Some(prev_vertex);
        }
        for (g, w) in graphs.iter_mut().zip(&full) {
            g.add_edge(prev_vertex, iv, w * (e.length_m - prev_offset) / e.length_m);
        }
    }
    Ok(SnappedTarget { graphs, at })
}

fn relative_error(source_cost: f64, target_cost: Option<f64>) -> f64 {
    match target_cost {
        None => 1.0,
        Some(t) if source_cost == 0.0 => {
            if t == 0.0 {
                0.0
            } else {
                1.0
            }
        }
        Some(t) => ((source_cost - t).abs() / source_cost).min(1.0),
    }
}

fn directional_scores(
    source: &RoadNetwork,
    target: &RoadNetwork,
    params: &AplsParams,
    weights: &[Weight],
) -> Result<Vec<DirectionalScore>> {
    let src = inject_control_points(source, params.injection_spacing_m);
    let index = index_nodes(&src);
    let points: Vec<Point> = src.nodes().map(|n| n.pos).collect();
    let snapped = snap_into_target(target, &points, params.snap_buffer_m, weights)?;
    let n = points.len();

    let mut out = Vec::with_capacity(weights.len());
    for (k, &weight) in weights.iter().enumerate() {
        let src_graph = weighted_graph(&src, &index, weight)?;
        let tgt_graph = &snapped.graphs[k];
        let mut target_dist: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        let (mut total, mut n_pairs) = (0.0, 0usize);
        for a in 0..n {
            let src_dist = src_graph.dijkstra(a);
            let from = snapped.at[a];
            if let Some(t) = from {
                target_dist.entry(t).or_insert_with(|| tgt_graph.dijkstra(t));
            }
            for b in a + 1..n {
                let cost = src_dist[b];
                if !cost.is_finite() {
                    continue;
                }
                n_pairs += 1;
                let target_cost = match (from, snapped.at[b]) {
                    (Some(ta), Some(tb)) => Some(target_dist[&ta][tb]).filter(|d| d.is_finite()),
                    _ => None,
                };
                total += relative_error(cost, target_cost);
            }
        }
        let score = (n_pairs > 0).then(|| 1.0 - total / n_pairs as f64);
        out.push(DirectionalScore { score, n_pairs });
    }
    Ok(out)
}

/// One direction of the metric, `source` → `target`.
pub fn directional_score(
    source: &RoadNetwork,
    target: &RoadNetwork,
    params: &AplsParams,
    weight: Weight,
) -> Result<DirectionalScore> {
    Ok(directional_scores(source, target, params, &[weight])?[0])
}

fn check_frames(gt: &RoadNetwork, prop: &RoadNetwork, params: &AplsParams) -> Result<()> {
    if let (Some(a), Some(b)) = (gt.bbox(), prop.bbox()) {
        if !a.expanded(params.snap_buffer_m).intersects(&b) {
            return Err(Error::FrameMismatch(format!(
                "ground truth extent {a:?} and proposal extent {b:?} do not overlap"
            )));
        }
    }
    Ok(())
}

/// Symmetric APLS for both length and travel-time weights.
///
/// Two empty graphs score 1; exactly one empty graph scores 0. A direction
/// without any connected source pair counts as 0.
pub fn apls(gt: &RoadNetwork, prop: &RoadNetwork, params: &AplsParams) -> Result<AplsScores> {
    let uniform = |s: f64| AplsScores { apls_length: s, apls_time: s, pairs: PairCounts::default() };
    match (gt.is_empty(), prop.is_empty()) {
        (true, true) => return Ok(uniform(1.0)),
        (true, false) | (false, true) => return Ok(uniform(0.0)),
        _ => {}
    }
    check_frames(gt, prop, params)?;
    let forward = directional_scores(gt, prop, params, &Weight::BOTH)?;
    let backward = directional_scores(prop, gt, params, &Weight::BOTH)?;
    let mean = |k: usize| (forward[k].score.unwrap_or(0.0) + backward[k].score.unwrap_or(0.0)) / 2.0;
    Ok(AplsScores {
        apls_length: mean(0),
        apls_time: mean(1),
        pairs: PairCounts { gt_to_prop: forward[0].n_pairs, prop_to_gt: backward[0].n_pairs },
    })
}
