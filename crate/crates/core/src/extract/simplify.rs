//! Graph-stage cleanup: spur pruning and degree-2 chain merging.

use crate::network::{Edge, NodeId, RoadNetwork};
use crate::speed::MPS_PER_MPH;

/// Removes dangling edges shorter than `spur_len_m` and merges chains
/// through degree-2 nodes, repeating until neither rule applies. Spur
/// lengths are judged on merged chains, so a long road is never whittled
/// away one short piece at a time. Nodes left without edges are dropped.
pub fn simplify_graph(network: &RoadNetwork, spur_len_m: f64) -> RoadNetwork {
    let mut net = network.clone();
    loop {
        merge_chains(&mut net);
        if !remove_spurs(&mut net, spur_len_m) {
            break;
        }
    }
    let incidence = net.incidence();
    for (node, edges) in incidence {
        if edges.is_empty() {
            net.remove_node(node).expect("node has no edges");
        }
    }
    net
}

fn remove_spurs(net: &mut RoadNetwork, spur_len_m: f64) -> bool {
    let incidence = net.incidence();
    let spurs: Vec<_> = net
        .edges()
        .filter(|e| {
            e.length_m < spur_len_m
                && !e.is_self_loop()
                && (incidence[&e.u].len() == 1 || incidence[&e.v].len() == 1)
        })
        .map(|e| e.id)
        .collect();
    for id in &spurs {
        net.remove_edge(*id);
    }
    !spurs.is_empty()
}

fn merge_chains(net: &mut RoadNetwork) {
    loop {
        let incidence = net.incidence();
        let Some((node, pair)) = incidence
            .iter()
            .find(|(_, edges)| edges.len() == 2 && edges[0] != edges[1])
        else {
            return;
        };
        let node = *node;
        let first = net.remove_edge(pair[0]).expect("incident edge");
        let second = net.remove_edge(pair[1]).expect("incident edge");
        let merged = join(&first, &second, node);
        net.remove_node(node).expect("merged node is now free");
        net.insert_edge(merged).expect("merging valid edges yields a valid edge");
    }
}

/// Concatenates two edges meeting at `via` into one edge that keeps the
/// first edge's id.
fn join(first: &Edge, second: &Edge, via: NodeId) -> Edge {
    let u = first.other(via);
    let v = second.other(via);
    let mut geometry = first.geometry_from(u);
    geometry.extend(second.geometry_from(via).into_iter().skip(1));
    let length_m = first.length_m + second.length_m;
    let (speed_mph, travel_time_s) = match (first.speed_mph, second.speed_mph) {
        (Some(a), Some(b)) if a == b => (Some(a), first.travel_time_s.zip(second.travel_time_s).map(|(x, y)| x + y)),
        (Some(_), Some(_)) => {
            // Effective speed over the whole chain keeps the summed time exact.
            let time = first.travel_time_s.unwrap_or(0.0) + second.travel_time_s.unwrap_or(0.0);
            (Some(length_m / time / MPS_PER_MPH), Some(time))
        }
        _ => (None, None),
    };
    Edge { id: first.id, u, v, geometry, length_m, speed_mph, travel_time_s }
}
