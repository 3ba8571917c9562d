#![allow(dead_code)]

use iab_core::geometry::{GnbNode, Position, Region};
use iab_core::{Deployment, LinkTable};
use rand::Rng;

pub const THRESHOLD: f64 = 5.0;

pub fn node(id: usize, x: f64, y: f64, wired: bool) -> GnbNode<f64> {
    GnbNode {
        id,
        position: Position::new(x, y),
        is_wired: wired,
        sector_boresights: vec![0.0, 2.0 * std::f64::consts::PI / 3.0, -2.0 * std::f64::consts::PI / 3.0],
        attached_count: 1,
    }
}

pub fn deployment(nodes: Vec<GnbNode<f64>>, origin: usize) -> Deployment {
    Deployment {
        region: Region::square_km(),
        gnbs: nodes,
        ue_positions: Vec::new(),
        origin_id: origin,
    }
}

/// Random graph on `n` nodes: node 0 is the wireless origin, at least one
/// other node is wired, each pair is either in outage, below threshold, or
/// carries an SNR in [5, 40] dB (integers, so ties are common).
pub fn random_graph<R: Rng>(n: usize, rng: &mut R) -> (Deployment, LinkTable) {
    let mut wired: Vec<bool> = (0..n).map(|i| i > 0 && rng.random_bool(0.35)).collect();
    if !wired.iter().any(|&w| w) {
        let k = rng.random_range(1..n);
        wired[k] = true;
    }
    let nodes = (0..n)
        .map(|i| node(i, rng.random_range(0.0..1000.0), rng.random_range(0.0..1000.0), wired[i]))
        .collect();
    let mut links = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            match rng.random_range(0..10) {
                0..=2 => {}
                3 => links.push((i, j, rng.random_range(-10.0..THRESHOLD))),
                _ => links.push((i, j, rng.random_range(5..=40) as f64)),
            }
        }
    }
    (deployment(nodes, 0), LinkTable::from_snrs(n, &links))
}

/// Best bottleneck over every simple path from `origin` whose intermediate
/// nodes are wireless and whose last node is wired, using only links at or
/// above `threshold`. `None` when no such path exists.
pub fn brute_force_bottleneck(dep: &Deployment, links: &LinkTable, origin: usize, threshold: f64) -> Option<f64> {
    fn walk(
        dep: &Deployment,
        links: &LinkTable,
        at: usize,
        floor: f64,
        threshold: f64,
        seen: &mut Vec<bool>,
        best: &mut Option<f64>,
    ) {
        for next in 0..dep.len() {
            let s = links.snr(at, next);
            if seen[next] || s < threshold {
                continue;
            }
            let b = floor.min(s);
            if dep.node(next).is_wired {
                if best.is_none_or(|x| b > x) {
                    *best = Some(b);
                }
            } else {
                seen[next] = true;
                walk(dep, links, next, b, threshold, seen, best);
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; dep.len()];
    seen[origin] = true;
    let mut best = None;
    walk(dep, links, origin, f64::INFINITY, threshold, &mut seen, &mut best);
    best
}

/// Every maximal selection trace from `origin`: sequences of distinct nodes
/// over links at or above the threshold, stopping at a wired node or when no
/// unvisited neighbor is reachable.
pub fn all_traces(dep: &Deployment, links: &LinkTable, origin: usize, threshold: f64) -> Vec<Vec<usize>> {
    fn extend(dep: &Deployment, links: &LinkTable, trace: &mut Vec<usize>, threshold: f64, out: &mut Vec<Vec<usize>>) {
        let at = *trace.last().unwrap();
        if trace.len() > 1 && dep.node(at).is_wired {
            out.push(trace[1..].to_vec());
            return;
        }
        let nexts: Vec<usize> = (0..dep.len())
            .filter(|v| !trace.contains(v) && links.snr(at, *v) >= threshold)
            .collect();
        if nexts.is_empty() {
            out.push(trace[1..].to_vec());
            return;
        }
        for v in nexts {
            trace.push(v);
            extend(dep, links, trace, threshold, out);
            trace.pop();
        }
    }
    let mut out = Vec::new();
    extend(dep, links, &mut vec![origin], threshold, &mut out);
    out
}
