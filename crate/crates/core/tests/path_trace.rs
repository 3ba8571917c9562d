mod common;

use common::{all_traces, deployment, node, THRESHOLD};
use iab_core::policy::{build_path, PathRules};
use iab_core::{LinkTable, Outcome, PolicyKind, WbfConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Star around hub 1: origin 0, wired leaves 2, 3, 4.
fn star(links: &[(usize, usize, f64)]) -> (iab_core::Deployment, LinkTable) {
    let nodes = vec![
        node(0, 400.0, 500.0, false),
        node(1, 500.0, 500.0, false),
        node(2, 500.0, 600.0, true),
        node(3, 600.0, 500.0, true),
        node(4, 500.0, 400.0, true),
    ];
    (deployment(nodes, 0), LinkTable::from_snrs(5, links))
}

#[test]
fn star_by_hand() {
    let (dep, links) = star(&[(0, 1, 25.0), (0, 4, 8.0), (1, 2, 15.0), (1, 3, 30.0)]);
    let rules = PathRules::default();
    let hqf = build_path(0, PolicyKind::Hqf, &WbfConfig::none(), &dep, &links, &rules).unwrap();
    assert_eq!(hqf.hops, vec![1, 3]);
    assert_eq!(hqf.bottleneck_snr_db, Some(25.0));
    assert_eq!(hqf.outcome, Outcome::Success);
    let wf = build_path(0, PolicyKind::Wf, &WbfConfig::none(), &dep, &links, &rules).unwrap();
    assert_eq!(wf.hops, vec![4]);
    assert_eq!(wf.bottleneck_snr_db, Some(8.0));
}

/// Greedy choice at `at` given the visited prefix, written directly from the
/// selection rules: best SNR (WF: best wired SNR if any wired is feasible),
/// ties to wired, then lowest id.
fn reference_choice(policy: PolicyKind, dep: &iab_core::Deployment, links: &LinkTable, visited: &[usize], at: usize) -> Option<usize> {
    let cands: Vec<usize> = (0..dep.len())
        .filter(|v| !visited.contains(v) && links.snr(at, *v) >= THRESHOLD)
        .collect();
    let pool: Vec<usize> = match policy {
        PolicyKind::Wf if cands.iter().any(|&c| dep.node(c).is_wired) => {
            cands.into_iter().filter(|&c| dep.node(c).is_wired).collect()
        }
        _ => cands,
    };
    let mut best: Option<usize> = None;
    for c in pool {
        best = match best {
            None => Some(c),
            Some(b) => {
                let (sb, sc) = (links.snr(at, b), links.snr(at, c));
                let better = sc > sb || (sc == sb && dep.node(c).is_wired && !dep.node(b).is_wired);
                Some(if better { c } else { b })
            }
        };
    }
    best
}

#[test]
fn star_matches_exhaustive_greedy_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rules = PathRules::default();
    for _ in 0..500 {
        let mut links = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                // The hub reaches everyone; leaves reach each other sparsely.
                if i == 1 || j == 1 || rng.random_bool(0.3) {
                    links.push((i, j, rng.random_range(0..=30) as f64));
                }
            }
        }
        let (dep, table) = star(&links);
        let traces = all_traces(&dep, &table, 0, THRESHOLD);
        for policy in [PolicyKind::Hqf, PolicyKind::Wf] {
            let greedy: Vec<&Vec<usize>> = traces
                .iter()
                .filter(|t| {
                    let mut visited = vec![0];
                    t.iter().all(|&step| {
                        let ok = reference_choice(policy, &dep, &table, &visited, *visited.last().unwrap()) == Some(step);
                        visited.push(step);
                        ok
                    })
                })
                .collect();
            let got = build_path(0, policy, &WbfConfig::none(), &dep, &table, &rules).unwrap();
            assert_eq!(greedy.len(), 1, "greedy trace must be unique");
            assert_eq!(&got.hops, greedy[0], "{policy} on {links:?}");
        }
    }
}
