//! Centralized widest-path benchmark: the route from the origin to any wired
//! gNB that maximizes the weakest-link SNR.

use crate::channel::LinkTable;
use crate::geometry::Deployment;
use crate::num::Real;
use crate::policy::{Outcome, PathResult, Router, WbfConfig};

/// Max-min bottleneck path from `origin` to the first wired gNB over links at
/// or above the threshold. Among optimal paths the one with the fewest hops
/// wins, then the lexicographically smallest id sequence. Wired gNBs only
/// terminate paths, they never relay.
pub fn widest_path_oracle<T: Real>(
    deployment: &Deployment<T>,
    links: &LinkTable<T>,
    origin: usize,
    snr_threshold_db: T,
) -> PathResult<T> {
    let n = deployment.len();
    let wired = |v: usize| deployment.node(v).is_wired;
    let usable = |a: usize, b: usize, floor: T| a != b && links.snr(a, b) >= floor;
    let failed = || {
        PathResult::from_links(origin, vec![], vec![], Outcome::NoCandidate, Router::WidestPath, WbfConfig::none())
    };

    // Best-first search on bottleneck labels.
    let mut best = vec![T::neg_infinity(); n];
    let mut done = vec![false; n];
    best[origin] = T::infinity();
    loop {
        let next = (0..n)
            .filter(|&v| !done[v] && best[v] > T::neg_infinity())
            .max_by(|&a, &b| best[a].partial_cmp(&best[b]).expect("no NaN").then(b.cmp(&a)));
        let Some(u) = next else { break };
        done[u] = true;
        if u != origin && wired(u) {
            continue;
        }
        for v in 0..n {
            if !done[v] && usable(u, v, snr_threshold_db) {
                let width = best[u].min(links.snr(u, v));
                if width > best[v] {
                    best[v] = width;
                }
            }
        }
    }

    let Some(width) = (0..n)
        .filter(|&v| v != origin && wired(v) && best[v] > T::neg_infinity())
        .map(|v| best[v])
        .reduce(T::max)
    else {
        return failed();
    };

    // Hop distances to the wired set over links at least as wide as the
    // optimum, relaying only through wireless gNBs.
    let mut dist = vec![usize::MAX; n];
    let mut frontier: Vec<usize> = (0..n).filter(|&v| wired(v)).collect();
    for &w in &frontier {
        dist[w] = 0;
    }
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for v in 0..n {
                if dist[v] == usize::MAX && !wired(v) && usable(u, v, width) {
                    dist[v] = level;
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    debug_assert!(dist[origin] != usize::MAX);

    let mut hops = Vec::with_capacity(dist[origin]);
    let mut snrs = Vec::with_capacity(dist[origin]);
    let mut current = origin;
    while dist[current] > 0 {
        let step = (0..n)
            .find(|&v| dist[v] == dist[current] - 1 && usable(current, v, width))
            .expect("shortest-path predecessor exists");
        snrs.push(links.snr(current, step));
        hops.push(step);
        current = step;
    }
    PathResult::from_links(origin, hops, snrs, Outcome::Success, Router::WidestPath, WbfConfig::none())
}
