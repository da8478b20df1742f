//! Differential validation of the DE-9IM kernel against the independent
//! sampling oracle, over randomized integer-coordinate geometry pairs.

mod common;

use common::{lattice_pair, lattice_polygon};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use radon::geom::{self, Geometry};
use radon::oracle::{self, OracleConfig};

#[test]
fn kernel_agrees_with_sampling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x31337);
    let cfg = OracleConfig {
        grid_pitch: 1.0 / 16.0,
        carrier_steps: 64,
        offsets: vec![1e-3, 1e-6],
    };
    let mut mismatches = Vec::new();
    for case in 0..500 {
        let (g1, g2) = lattice_pair(&mut rng);
        let got = geom::de9im(&g1, &g2).unwrap();
        let want = oracle::de9im(&g1, &g2, &cfg);
        if got != want {
            mismatches.push(format!(
                "case {case}: kernel {got} vs oracle {want}\n  g1 = {}\n  g2 = {}",
                g1.to_wkt(),
                g2.to_wkt()
            ));
        }
    }
    assert!(
        mismatches.is_empty(),
        "{} mismatching pairs:\n{}",
        mismatches.len(),
        mismatches.join("\n")
    );
}

#[test]
fn raster_presence_never_contradicts_kernel_emptiness() {
    // Pure 1/64-pitch rasterization: a classified grid sample proves the
    // corresponding entry non-empty, so the kernel must not report -1 there.
    let mut rng = ChaCha8Rng::seed_from_u64(0x51ec);
    for _ in 0..40 {
        let cx = rng.gen_range(4..28);
        let cy = rng.gen_range(4..28);
        let g1 = Geometry::Polygon(lattice_polygon(&mut rng, cx, cy));
        let (jx, jy) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let g2 = Geometry::Polygon(lattice_polygon(&mut rng, cx + jx, cy + jy));
        let m = geom::de9im(&g1, &g2).unwrap();
        let seen = oracle::raster_present(&g1, &g2, 1.0 / 64.0);
        for (r, row) in seen.iter().enumerate() {
            for (c, hit) in row.iter().enumerate() {
                if *hit {
                    let entry = m.entries()[r][c];
                    assert!(
                        entry >= 0,
                        "raster found class pair ({r},{c}) but kernel reports empty\n  g1 = {}\n  g2 = {}",
                        g1.to_wkt(),
                        g2.to_wkt()
                    );
                }
            }
        }
    }
}

#[test]
fn transpose_symmetry_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf00d);
    for _ in 0..400 {
        let (g1, g2) = lattice_pair(&mut rng);
        let m12 = geom::de9im(&g1, &g2).unwrap();
        let m21 = geom::de9im(&g2, &g1).unwrap();
        assert_eq!(
            m12.transpose(),
            m21,
            "g1 = {} / g2 = {}",
            g1.to_wkt(),
            g2.to_wkt()
        );
    }
}

#[test]
fn mbb_overlap_is_necessary_for_interior_intersection() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
    for _ in 0..400 {
        let (g1, g2) = lattice_pair(&mut rng);
        let m = geom::de9im(&g1, &g2).unwrap();
        if m.entries()[0][0] >= 0 {
            assert!(g1.mbb().intersects(&g2.mbb()));
        }
    }
}

#[test]
fn relate_mask_agrees_with_direct_inspection() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xace5);
    let masks = [
        "T*F**FFF*",
        "FF*FF****",
        "T*T******",
        "0********",
        "*1*******",
        "T*****FF*",
        "*********",
    ];
    for _ in 0..500 {
        let (g1, g2) = lattice_pair(&mut rng);
        let m = geom::de9im(&g1, &g2).unwrap();
        for mask in masks {
            let via_relate = geom::relate(&g1, &g2, mask).unwrap();
            // Unfold the mask against the matrix entries directly.
            let mut expect = true;
            for (k, sym) in mask.chars().enumerate() {
                let dim = m.entries()[k / 3][k % 3];
                expect &= match sym {
                    'T' => dim >= 0,
                    'F' => dim == -1,
                    '0' => dim == 0,
                    '1' => dim == 1,
                    '2' => dim == 2,
                    _ => true,
                };
            }
            assert_eq!(via_relate, expect, "mask {mask} on {}", g1.to_wkt());
        }
    }
    assert!(geom::relate(
        &geom::parse_wkt("POINT (1 1)").unwrap(),
        &geom::parse_wkt("POINT (1 1)").unwrap(),
        "bad"
    )
    .is_err());
}
