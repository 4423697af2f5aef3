//! File formats: GeoJSON road labels, per-channel PNG masks with a JSON
//! sidecar, and JSON graph files.

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geom::{polyline_length, Point};
use crate::network::{Edge, EdgeId, NodeId, RoadNetwork};
use crate::raster::{GeoTransform, SpeedMask};
use crate::speed::{speed_for_attributes, RoadAttributes, RoadType, NUM_CHANNELS};

/// Endpoints closer than this are fused into one node.
pub const FUSE_TOLERANCE_M: f64 = 1e-6;

fn read_json(path: &Path) -> Result<Value> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::parse(path.display().to_string(), e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::io(path, e.into()))?;
    std::io::Write::flush(&mut w).map_err(|e| Error::io(path, e))
}

/// Finds or creates the node at `p`, fusing within `FUSE_TOLERANCE_M`.
struct NodeFuser {
    cells: HashMap<(i64, i64), Vec<NodeId>>,
}

impl NodeFuser {
    fn cell(p: Point) -> (i64, i64) {
        ((p.x / FUSE_TOLERANCE_M).floor() as i64, (p.y / FUSE_TOLERANCE_M).floor() as i64)
    }

    fn node_for(&mut self, net: &mut RoadNetwork, p: Point) -> NodeId {
        let (cx, cy) = Self::cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) {
                    if let Some(&id) = ids.iter().find(|&&id| net.node(id).expect("fused node").pos.dist(p) <= FUSE_TOLERANCE_M) {
                        return id;
                    }
                }
            }
        }
        let id = net.add_node(p);
        self.cells.entry((cx, cy)).or_default().push(id);
        id
    }
}

fn feature_attributes(props: Option<&Value>, context: &str) -> Result<RoadAttributes> {
    let get = |key: &str| props.and_then(|p| p.get(key)).filter(|v| !v.is_null());
    let road_type = match get("highway") {
        None => RoadType::Residential,
        Some(Value::String(s)) => s.parse().unwrap_or(RoadType::Residential),
        Some(other) => return Err(Error::parse(context, format!("highway must be a string, got {other}"))),
    };
    let lanes = match get("lanes") {
        None => 1,
        Some(Value::Number(n)) => n.as_u64().ok_or_else(|| Error::parse(context, format!("lanes must be a positive integer, got {n}")))?,
        Some(Value::String(s)) => s
            .trim()
            .parse()
            .map_err(|_| Error::parse(context, format!("lanes must be a positive integer, got {s:?}")))?,
        Some(other) => return Err(Error::parse(context, format!("lanes must be an integer, got {other}"))),
    };
    let paved = match get("paved") {
        None => true,
        Some(Value::Bool(b)) => *b,
        Some(other) => return Err(Error::parse(context, format!("paved must be a boolean, got {other}"))),
    };
    let lanes = u32::try_from(lanes).map_err(|_| Error::parse(context, "lanes out of range"))?;
    RoadAttributes::new(road_type, lanes, paved).map_err(|e| Error::parse(context, e))
}

fn parse_coords(coords: &Value, context: &str) -> Result<Vec<Point>> {
    let arr = coords
        .as_array()
        .ok_or_else(|| Error::parse(context, "coordinates must be an array"))?;
    let mut pts = Vec::with_capacity(arr.len());
    for c in arr {
        let xy = c.as_array().filter(|a| a.len() >= 2);
        let (x, y) = match xy.map(|a| (a[0].as_f64(), a[1].as_f64())) {
            Some((Some(x), Some(y))) => (x, y),
            _ => return Err(Error::parse(context, format!("bad coordinate {c}"))),
        };
        pts.push(Point::new(x, y));
    }
    pts.dedup();
    Ok(pts)
}

/// Loads a GeoJSON FeatureCollection of road LineStrings. Shared endpoints
/// become shared nodes; each edge gets the speed for its attributes.
pub fn load_network(path: impl AsRef<Path>) -> Result<RoadNetwork> {
    let path = path.as_ref();
    parse_network(&read_json(path)?, &path.display().to_string())
}

pub fn parse_network(doc: &Value, source: &str) -> Result<RoadNetwork> {
    if doc.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(Error::parse(source, "expected a GeoJSON FeatureCollection"));
    }
    let features = doc
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse(source, "FeatureCollection has no features array"))?;
    let mut net = RoadNetwork::new();
    let mut fuser = NodeFuser { cells: HashMap::new() };
    for (i, feature) in features.iter().enumerate() {
        let context = format!("{source}, feature {i}");
        let geometry = feature.get("geometry").ok_or_else(|| Error::parse(&context, "missing geometry"))?;
        let kind = geometry.get("type").and_then(Value::as_str);
        if kind != Some("LineString") {
            return Err(Error::parse(&context, format!("expected LineString geometry, got {kind:?}")));
        }
        let coords = geometry.get("coordinates").ok_or_else(|| Error::parse(&context, "missing coordinates"))?;
        let pts = parse_coords(coords, &context)?;
        if pts.len() < 2 || polyline_length(&pts) <= 0.0 {
            return Err(Error::parse(&context, "LineString needs at least two distinct vertices"));
        }
        let attrs = feature_attributes(feature.get("properties"), &context)?;
        let u = fuser.node_for(&mut net, pts[0]);
        let v = fuser.node_for(&mut net, pts[pts.len() - 1]);
        let e = net.add_edge(u, v, pts).map_err(|e| Error::parse(&context, e))?;
        net.set_speed(e, speed_for_attributes(&attrs))?;
    }
    Ok(net)
}

#[derive(Debug, Serialize, Deserialize)]
struct MaskSidecar {
    origin_x: f64,
    origin_y: f64,
    gsd_m: f64,
    width_px: usize,
    height_px: usize,
    channel_speeds: BTreeMap<String, f64>,
}

pub fn channel_path(dir: &Path, tile_id: &str, channel: usize) -> PathBuf {
    dir.join(format!("{tile_id}_ch{channel}.png"))
}

pub fn sidecar_path(dir: &Path, tile_id: &str) -> PathBuf {
    dir.join(format!("{tile_id}.mask.json"))
}

fn standard_channel_speeds() -> BTreeMap<String, f64> {
    SpeedMask::channel_speeds().iter().map(|&(k, s)| (k.to_string(), s)).collect()
}

/// Writes seven grayscale PNGs `{tile_id}_ch{1..7}.png` and the
/// `{tile_id}.mask.json` sidecar.
pub fn save_mask(mask: &SpeedMask, dir: impl AsRef<Path>, tile_id: &str) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for channel in 1..=NUM_CHANNELS {
        let path = channel_path(dir, tile_id, channel);
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut encoder = png::Encoder::new(BufWriter::new(file), mask.width() as u32, mask.height() as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let to_io = |e: png::EncodingError| Error::io(&path, std::io::Error::other(e));
        let mut writer = encoder.write_header().map_err(to_io)?;
        writer.write_image_data(mask.channel(channel)).map_err(to_io)?;
        writer.finish().map_err(to_io)?;
    }
    let sidecar = MaskSidecar {
        origin_x: mask.transform.origin_x,
        origin_y: mask.transform.origin_y,
        gsd_m: mask.transform.gsd_m(),
        width_px: mask.width(),
        height_px: mask.height(),
        channel_speeds: standard_channel_speeds(),
    };
    write_json(&sidecar_path(dir, tile_id), &sidecar)
}

fn read_png_plane(path: &Path, width: usize, height: usize) -> Result<Vec<u8>> {
    let file = File::open(path).map_err(|e| Error::format(path, format!("missing channel file: {e}")))?;
    let decoder = png::Decoder::new(BufReader::new(file));
    let mut reader = decoder.read_info().map_err(|e| Error::format(path, e.to_string()))?;
    let info = reader.info();
    if (info.width as usize, info.height as usize) != (width, height) {
        return Err(Error::format(
            path,
            format!("image is {}x{}, sidecar says {width}x{height}", info.width, info.height),
        ));
    }
    if info.color_type != png::ColorType::Grayscale || info.bit_depth != png::BitDepth::Eight {
        return Err(Error::format(path, "expected 8-bit grayscale"));
    }
    let mut buf = vec![0; reader.output_buffer_size().ok_or_else(|| Error::format(path, "image too large"))?];
    let frame = reader.next_frame(&mut buf).map_err(|e| Error::format(path, e.to_string()))?;
    buf.truncate(frame.buffer_size());
    Ok(buf)
}

pub fn load_mask(dir: impl AsRef<Path>, tile_id: &str) -> Result<SpeedMask> {
    let dir = dir.as_ref();
    let side_path = sidecar_path(dir, tile_id);
    let sidecar: MaskSidecar = serde_json::from_value(read_json(&side_path)?)
        .map_err(|e| Error::format(&side_path, e.to_string()))?;
    if sidecar.channel_speeds != standard_channel_speeds() {
        return Err(Error::format(&side_path, format!("unsupported channel speeds {:?}", sidecar.channel_speeds)));
    }
    let transform = GeoTransform::new(sidecar.origin_x, sidecar.origin_y, sidecar.gsd_m)
        .map_err(|e| Error::format(&side_path, e.to_string()))?;
    let planes = (1..=NUM_CHANNELS)
        .map(|c| read_png_plane(&channel_path(dir, tile_id, c), sidecar.width_px, sidecar.height_px))
        .collect::<Result<Vec<_>>>()?;
    SpeedMask::from_planes(sidecar.width_px, sidecar.height_px, planes, transform)
        .map_err(|e| Error::format(&side_path, e.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphFileNode {
    id: NodeId,
    x: f64,
    y: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphFileEdge {
    id: EdgeId,
    u: NodeId,
    v: NodeId,
    geometry: Vec<Point>,
    length_m: f64,
    speed_mph: Option<f64>,
    travel_time_s: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphFile {
    nodes: Vec<GraphFileNode>,
    edges: Vec<GraphFileEdge>,
}

pub fn graph_to_json(network: &RoadNetwork) -> Value {
    let file = GraphFile {
        nodes: network.nodes().map(|n| GraphFileNode { id: n.id, x: n.pos.x, y: n.pos.y }).collect(),
        edges: network
            .edges()
            .map(|e| GraphFileEdge {
                id: e.id,
                u: e.u,
                v: e.v,
                geometry: e.geometry.clone(),
                length_m: e.length_m,
                speed_mph: e.speed_mph,
                travel_time_s: e.travel_time_s,
            })
            .collect(),
    };
    serde_json::to_value(file).expect("graph files serialize")
}

pub fn graph_from_json(doc: Value, source: &str) -> Result<RoadNetwork> {
    let file: GraphFile = serde_json::from_value(doc).map_err(|e| Error::parse(source, e))?;
    let mut net = RoadNetwork::new();
    for n in file.nodes {
        net.insert_node(n.id, Point::new(n.x, n.y)).map_err(|e| Error::parse(source, e))?;
    }
    for e in file.edges {
        net.insert_edge(Edge {
            id: e.id,
            u: e.u,
            v: e.v,
            geometry: e.geometry,
            length_m: e.length_m,
            speed_mph: e.speed_mph,
            travel_time_s: e.travel_time_s,
        })
        .map_err(|err| Error::parse(source, err))?;
    }
    Ok(net)
}

/// Writes the graph JSON. Coordinates use the shortest exact decimal form,
/// so a load returns bit-identical values.
pub fn save_graph(network: &RoadNetwork, path: impl AsRef<Path>) -> Result<()> {
    write_json(path.as_ref(), &graph_to_json(network))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<RoadNetwork> {
    let path = path.as_ref();
    graph_from_json(read_json(path)?, &path.display().to_string())
}
