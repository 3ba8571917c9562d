mod common;

use common::{brute_force_bottleneck, random_graph, THRESHOLD};
use iab_core::oracle::widest_path_oracle;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn eight_node_graphs_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let (dep, links) = random_graph(8, &mut rng);
        let got = widest_path_oracle(&dep, &links, 0, THRESHOLD);
        let want = brute_force_bottleneck(&dep, &links, 0, THRESHOLD);
        assert_eq!(got.is_success(), want.is_some());
        if got.is_success() {
            assert_eq!(got.bottleneck_snr_db, want);
            assert!(dep.node(got.terminal().unwrap()).is_wired);
            let mut prev = 0;
            for (&h, &s) in got.hops.iter().zip(&got.link_snrs_db) {
                assert_eq!(links.snr(prev, h), s);
                prev = h;
            }
        }
    }
}
