//! Undirected spatial road graph with polyline edges carrying length, speed
//! and travel time weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{polyline_length, BBox, Point};
use crate::speed::{travel_time_seconds, MPS_PER_MPH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u64);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub pos: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    /// Polyline from `u` to `v` in world coordinates.
    pub geometry: Vec<Point>,
    pub length_m: f64,
    pub speed_mph: Option<f64>,
    pub travel_time_s: Option<f64>,
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `n` (for a self-loop, `n` itself).
    pub fn other(&self, n: NodeId) -> NodeId {
        if self.u == n {
            self.v
        } else {
            self.u
        }
    }

    /// Geometry oriented to start at `from`.
    pub fn geometry_from(&self, from: NodeId) -> Vec<Point> {
        let mut g = self.geometry.clone();
        if from != self.u {
            g.reverse();
        }
        g
    }
}

fn close(a: Point, b: Point) -> bool {
    let scale = 1.0_f64.max(a.x.abs()).max(a.y.abs());
    a.dist(b) <= 1e-6 * scale
}

/// Undirected road graph. Multi-edges and self-loops are allowed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoadNetwork {
    nodes: BTreeMap<NodeId, Node>,
    edges: BTreeMap<EdgeId, Edge>,
}

impl RoadNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// A network with no edges. Isolated nodes carry no paths and do not
    /// count.
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.values()
    }

    fn next_node_id(&self) -> NodeId {
        NodeId(self.nodes.keys().next_back().map_or(0, |n| n.0 + 1))
    }

    fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.keys().next_back().map_or(0, |e| e.0 + 1))
    }

    pub fn add_node(&mut self, pos: Point) -> NodeId {
        let id = self.next_node_id();
        self.nodes.insert(id, Node { id, pos });
        id
    }

    pub fn insert_node(&mut self, id: NodeId, pos: Point) -> Result<()> {
        if self.nodes.contains_key(&id) {
            return Err(Error::InvalidNetwork(format!("duplicate node id {id}")));
        }
        self.nodes.insert(id, Node { id, pos });
        Ok(())
    }

    /// Adds an edge whose geometry runs from `u` to `v`. The length is the
    /// arclength of the geometry; speed and travel time start unassigned.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, geometry: Vec<Point>) -> Result<EdgeId> {
        let id = self.next_edge_id();
        let length_m = polyline_length(&geometry);
        self.insert_edge(Edge {
            id,
            u,
            v,
            geometry,
            length_m,
            speed_mph: None,
            travel_time_s: None,
        })?;
        Ok(id)
    }

    /// Inserts a fully specified edge after checking it against the network
    /// invariants.
    pub fn insert_edge(&mut self, mut edge: Edge) -> Result<()> {
        if self.edges.contains_key(&edge.id) {
            return Err(Error::InvalidNetwork(format!("duplicate edge id {}", edge.id)));
        }
        self.check_edge(&edge)?;
        // Pin the geometry ends exactly onto the node coordinates.
        let last = edge.geometry.len() - 1;
        edge.geometry[0] = self.nodes[&edge.u].pos;
        edge.geometry[last] = self.nodes[&edge.v].pos;
        self.edges.insert(edge.id, edge);
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Option<Edge> {
        self.edges.remove(&id)
    }

    pub fn remove_node(&mut self, id: NodeId) -> Result<Option<Node>> {
        if self.edges.values().any(|e| e.u == id || e.v == id) {
            return Err(Error::InvalidNetwork(format!("node {id} still has incident edges")));
        }
        Ok(self.nodes.remove(&id))
    }

    /// Assigns a speed and derives the edge's travel time from it.
    pub fn set_speed(&mut self, id: EdgeId, speed_mph: f64) -> Result<()> {
        let edge = self
            .edges
            .get_mut(&id)
            .ok_or_else(|| Error::InvalidNetwork(format!("unknown edge id {id}")))?;
        edge.travel_time_s = Some(travel_time_seconds(edge.length_m, speed_mph)?);
        edge.speed_mph = Some(speed_mph);
        Ok(())
    }

    /// Incident edge ids per node, self-loops listed twice.
    pub fn incidence(&self) -> BTreeMap<NodeId, Vec<EdgeId>> {
        let mut inc: BTreeMap<NodeId, Vec<EdgeId>> =
            self.nodes.keys().map(|&n| (n, Vec::new())).collect();
        for e in self.edges.values() {
            inc.entry(e.u).or_default().push(e.id);
            inc.entry(e.v).or_default().push(e.id);
        }
        inc
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.edges
            .values()
            .map(|e| usize::from(e.u == id) + usize::from(e.v == id))
            .sum()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.values().map(|e| e.length_m).sum()
    }

    /// Sum of edge travel times, `None` if any edge has no travel time.
    pub fn total_travel_time(&self) -> Option<f64> {
        self.edges.values().map(|e| e.travel_time_s).sum()
    }

    pub fn bbox(&self) -> Option<BBox> {
        BBox::of(
            self.nodes
                .values()
                .map(|n| n.pos)
                .chain(self.edges.values().flat_map(|e| e.geometry.iter().copied())),
        )
    }

    /// Copy with every coordinate and length multiplied by `k`; speeds are
    /// kept, so travel times scale by `k` as well.
    pub fn scaled(&self, k: f64) -> RoadNetwork {
        let nodes = self
            .nodes
            .values()
            .map(|n| (n.id, Node { id: n.id, pos: n.pos.scaled(k) }))
            .collect();
        let edges = self
            .edges
            .values()
            .map(|e| {
                let mut e = e.clone();
                e.geometry.iter_mut().for_each(|p| *p = p.scaled(k));
                e.length_m *= k;
                e.travel_time_s = e.travel_time_s.map(|t| t * k);
                (e.id, e)
            })
            .collect();
        RoadNetwork { nodes, edges }
    }

    fn check_edge(&self, e: &Edge) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidNetwork(format!("edge {}: {msg}", e.id)));
        let (Some(u), Some(v)) = (self.nodes.get(&e.u), self.nodes.get(&e.v)) else {
            return bad(format!("endpoint {} or {} is not a node", e.u, e.v));
        };
        if e.geometry.len() < 2 {
            return bad("geometry needs at least two vertices".into());
        }
        if !close(e.geometry[0], u.pos) || !close(e.geometry[e.geometry.len() - 1], v.pos) {
            return bad("geometry does not start at u and end at v".into());
        }
        if !(e.length_m > 0.0) || !e.length_m.is_finite() {
            return bad(format!("length must be positive, got {}", e.length_m));
        }
        let arclength = polyline_length(&e.geometry);
        if (arclength - e.length_m).abs() > 1e-6 * arclength {
            return bad(format!("length {} differs from arclength {arclength}", e.length_m));
        }
        match (e.speed_mph, e.travel_time_s) {
            (Some(speed), Some(time)) => {
                if !(speed > 0.0) {
                    return bad(format!("speed must be positive, got {speed}"));
                }
                let expected = e.length_m / (speed * MPS_PER_MPH);
                if (time - expected).abs() > 1e-9 * expected {
                    return bad(format!("travel time {time} s, expected {expected} s"));
                }
            }
            (None, None) => {}
            _ => return bad("speed and travel time must be assigned together".into()),
        }
        Ok(())
    }

    /// Checks every network invariant: lengths match geometry, geometry ends
    /// sit on the endpoint nodes, travel times agree with speeds.
    pub fn validate(&self) -> Result<()> {
        for (id, n) in &self.nodes {
            if *id != n.id {
                return Err(Error::InvalidNetwork(format!("node keyed {id} has id {}", n.id)));
            }
        }
        self.edges.values().try_for_each(|e| self.check_edge(e))
    }
}
