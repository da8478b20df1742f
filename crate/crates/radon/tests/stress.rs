//! Heavy randomized sweeps, ignored by default. Run with
//! `cargo test -p radon --release --test stress -- --ignored`.

mod common;

use common::{cluster_dataset, lattice_pair};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use radon::dataset::Role;
use radon::geom;
use radon::linker::{brute_force_link, link, LinkConfig};
use radon::oracle::{self, OracleConfig};
use radon::relation::CORE_RELATIONS;

#[test]
#[ignore = "heavy: tens of seconds in release mode"]
fn kernel_differential_sweep_20k() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xdeed);
    let cfg = OracleConfig {
        grid_pitch: 1.0 / 16.0,
        carrier_steps: 64,
        offsets: vec![1e-3, 1e-6],
    };
    let mut mismatches = 0usize;
    for _ in 0..20_000 {
        let (g1, g2) = lattice_pair(&mut rng);
        let got = geom::de9im(&g1, &g2).unwrap();
        let want = oracle::de9im(&g1, &g2, &cfg);
        if got != want {
            mismatches += 1;
            eprintln!(
                "kernel {got} vs oracle {want}: {} | {}",
                g1.to_wkt(),
                g2.to_wkt()
            );
        }
    }
    assert_eq!(mismatches, 0);
}

#[test]
#[ignore = "heavy: tens of seconds in release mode"]
fn linking_differential_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xcafe);
    for round in 0..4 {
        let s = cluster_dataset(&mut rng, Role::Source, 200, 5);
        let t = cluster_dataset(&mut rng, Role::Target, 200, 5);
        for r in CORE_RELATIONS {
            let (reference, failures) = brute_force_link(&s, &t, r);
            assert_eq!(failures, 0);
            let (mapping, stats) = link(&s, &t, r, &LinkConfig::default()).unwrap();
            assert_eq!(stats.pair_failures, 0);
            let diff = mapping.symmetric_difference(&reference);
            assert!(
                diff.is_empty(),
                "round {round}, {r}: {} differing pairs, e.g. {:?}",
                diff.len(),
                &diff[..diff.len().min(5)]
            );
        }
    }
}
