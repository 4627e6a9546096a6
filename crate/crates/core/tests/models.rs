use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use rotometry::models::{
    flow_mode_energies, pancake_hamiltonian, ring_hamiltonian, three_site_flow_basis,
    three_site_site_basis, PancakeParams, RingParams, ThreeSiteParams,
};
use rotometry::spectral::eigensolve;

fn spectrum(h: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = nalgebra::SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Bisection root of the rank-one secular equation `1 = b Σ_k 1/(E − ε_k)`
/// between consecutive distinct free levels.
fn secular_roots(levels: &[f64], b: f64) -> Vec<f64> {
    let f = |e: f64| 1.0 - b * levels.iter().map(|l| 1.0 / (e - l)).sum::<f64>();
    let mut distinct: Vec<f64> = levels.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut roots = Vec::new();
    let top = distinct.last().unwrap() + b * levels.len() as f64 + 1.0;
    let mut edges = distinct.clone();
    edges.push(top);
    for w in edges.windows(2) {
        let (mut lo, mut hi) = (w[0] + 1e-14, w[1] - 1e-14);
        if hi <= lo {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

#[test]
fn single_particle_three_site_levels_are_flow_energies() {
    for phi in [0.0, 0.7, PI, 4.0] {
        let p = ThreeSiteParams::new(1, 1.3, 0.4, phi);
        let got = spectrum(&three_site_site_basis(&p).unwrap().to_dense());
        let mut want: Vec<f64> = (0..3)
            .map(|k| -2.0 * 1.3 * ((phi - 2.0 * PI * k as f64) / 3.0).cos())
            .collect();
        want.sort_by(f64::total_cmp);
        let mut flow = flow_mode_energies(1.3, phi).to_vec();
        flow.sort_by(f64::total_cmp);
        for i in 0..3 {
            assert!((got[i] - want[i]).abs() < 1e-12);
            assert!((flow[i] - want[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn isolated_sites_have_pure_interaction_energies() {
    let p = ThreeSiteParams::new(4, 0.0, 0.7, 1.0);
    let h = three_site_site_basis(&p).unwrap();
    let basis = h.basis().clone();
    assert!(h.is_diagonal());
    for (i, occ) in basis.states().enumerate() {
        let want: f64 = occ.iter().map(|&n| 0.7 * (n as f64) * (n as f64 - 1.0)).sum();
        assert!((h.get(i, i).re - want).abs() < 1e-12);
    }
}

#[test]
fn free_ring_levels_are_shifted_parabolas() {
    let omega = 1.1;
    let p = RingParams::new(1, 0.0, 0.0, omega);
    let got = spectrum(&ring_hamiltonian(&p).unwrap().to_dense());
    let mut want: Vec<f64> = (p.k_min..=p.k_max)
        .map(|k| (k as f64 - omega / (2.0 * PI)).powi(2))
        .collect();
    want.sort_by(f64::total_cmp);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-12);
    }
}

#[test]
fn barrier_spectrum_solves_the_secular_equation() {
    for b in [0.01, 0.1] {
        let p = RingParams::new(1, b, 0.0, PI);
        let free: Vec<f64> = (p.k_min..=p.k_max).map(|k| (k as f64 - 0.5).powi(2)).collect();
        let roots = secular_roots(&free, b);
        let e = eigensolve(&ring_hamiltonian(&p).unwrap(), 2).unwrap();
        // Odd combinations of k and 1−k are untouched and the repulsive
        // barrier lifts the even one to the lowest secular root.
        assert!((e.values[0] - 0.25).abs() < 1e-10, "{b}");
        assert!((e.values[1] - roots[0]).abs() < 1e-10, "{b}");
    }
}

#[test]
fn weak_barrier_splits_the_crossing_by_twice_its_strength() {
    let b = 0.01;
    let e = eigensolve(&ring_hamiltonian(&RingParams::new(1, b, 0.0, PI)).unwrap(), 2).unwrap();
    let gap = e.values[1] - e.values[0];
    assert!((gap - 2.0 * b).abs() / (2.0 * b) < 0.05);
}

#[test]
fn ring_interaction_conserves_angular_momentum() {
    let p = RingParams::new(3, 0.0, 5.0, 0.3);
    let h = ring_hamiltonian(&p).unwrap();
    let basis = h.basis().clone();
    for (r, c, v) in h.triplets() {
        if v.norm() > 0.0 {
            assert_eq!(basis.label_weight(r), basis.label_weight(c));
        }
    }
}

#[test]
fn contact_interaction_shifts_a_condensate_by_g_n_n_minus_1_over_2() {
    // All N atoms in k=0 see ⟨H_int⟩ = (g/2) N(N−1).
    let p = RingParams::new(3, 0.0, 0.4, 0.0);
    let h = ring_hamiltonian(&p).unwrap();
    let mut occ = vec![0u8; p.num_modes()];
    occ[(0 - p.k_min) as usize] = 3;
    let i = h.basis().rank(&occ).unwrap();
    assert!((h.get(i, i).re - 0.2 * 3.0 * 2.0).abs() < 1e-12);
}

#[test]
fn symmetric_pancake_conserves_angular_momentum() {
    let p = PancakeParams::new(4, 0.5, 0.0, 0.9);
    let h = pancake_hamiltonian(&p).unwrap();
    let basis = h.basis().clone();
    for (r, c, v) in h.triplets() {
        if v.norm() > 0.0 {
            assert_eq!(basis.label_weight(r), basis.label_weight(c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn site_and_flow_forms_are_isospectral(
        n in 1usize..=4,
        j in 0.0f64..2.0,
        u in -2.0f64..2.0,
        phi in 0.0f64..(2.0 * PI),
    ) {
        let p = ThreeSiteParams::new(n, j, u, phi);
        let a = spectrum(&three_site_site_basis(&p).unwrap().to_dense());
        let b = spectrum(&three_site_flow_basis(&p).unwrap().to_dense());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn pancake_couples_only_equal_parity(n in 1usize..=5, a in 0.0f64..0.1, omega in 0.5f64..1.0) {
        let h = pancake_hamiltonian(&PancakeParams::new(n, 0.5, a, omega)).unwrap();
        let basis = h.basis().clone();
        for (r, c, v) in h.triplets() {
            let dl = (basis.label_weight(r) - basis.label_weight(c)).abs();
            if v.norm() > 1e-14 {
                prop_assert!(dl == 0 || dl == 2);
            }
        }
        prop_assert!(h.hermiticity_defect().0 < 1e-12);
    }

    #[test]
    fn ring_levels_are_periodic_in_the_flux(omega in 0.0f64..1.0) {
        // Ω → Ω + 2π relabels k → k+1; with a window wide enough the lowest
        // levels are unchanged.
        let p = RingParams::new(2, 0.05, 1.0, omega).with_window(-6, 7);
        let q = RingParams { rotation: omega + 2.0 * PI, k_min: -5, k_max: 8, ..p };
        let a = eigensolve(&ring_hamiltonian(&p).unwrap(), 3).unwrap().values;
        let b = eigensolve(&ring_hamiltonian(&q).unwrap(), 3).unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}
