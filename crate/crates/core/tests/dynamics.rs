use std::f64::consts::PI;

use rotometry::dynamics::{
    evolve, fringe_frequency, gyroscope_scan, ramp_evolve, ProtocolConfig, Propagator,
    RampSchedule,
};
use rotometry::fockspace::PureState;
use rotometry::models::{ring_hamiltonian, RingParams, RotatingModel, ThreeSiteParams};
use rotometry::spectral::{eigensolve, ground_state};
use proptest::prelude::*;

#[test]
fn eigenstates_only_acquire_a_phase() {
    let h = ring_hamiltonian(&RingParams::new(2, 0.1, 1.0, 2.0).with_window(-1, 2)).unwrap();
    let e = eigensolve(&h, 1).unwrap();
    let t = 3.7;
    let out = evolve(&h, &e.vectors[0], t).unwrap();
    let overlap = e.vectors[0].inner(&out).unwrap();
    let want = num_complex::Complex64::from_polar(1.0, -e.values[0] * t);
    assert!((overlap - want).norm() < 1e-10);
}

#[test]
fn two_level_rabi_oscillation() {
    // N=1 at Ω=π in a two-mode window: levels 1/4 ± b, so k=0 → k=1 flops
    // with P₁(t) = sin²(b t).
    let b = 0.05;
    let p = RingParams::new(1, b, 0.0, PI).with_window(0, 1);
    let h = ring_hamiltonian(&p).unwrap();
    let start = PureState::fock(h.basis().clone(), &[1, 0]).unwrap();
    for t in [0.0, 5.0, 13.0, 31.4] {
        let out = evolve(&h, &start, t).unwrap();
        let p1 = out.amplitude_of(&[0, 1]).norm_sqr();
        assert!((p1 - (b * t).sin().powi(2)).abs() < 1e-12, "t={t}");
    }
}

#[test]
fn slow_ramp_follows_the_ground_state() {
    let model = RingParams::new(1, 0.05, 0.0, 0.0).with_window(-1, 2);
    let start = ground_state(&model.hamiltonian().unwrap()).unwrap().state;
    let schedule = RampSchedule::new(0.0, vec![(0.8 * PI, 200.0)]);
    let (end, report) = ramp_evolve(&model, &schedule, &start, 0.99).unwrap();
    let target = ground_state(&model.with_rotation(0.8 * PI).hamiltonian().unwrap()).unwrap();
    assert!(!report.warning);
    assert!(end.fidelity(&target.state).unwrap() > 0.999);
}

#[test]
fn zero_shift_protocol_gives_flat_fringes() {
    // Starting in the ground state at the critical rotation, a zero shift
    // holds an eigenstate.
    let model = RingParams::new(2, 0.05, 1.0, 0.0).with_window(-1, 2);
    let mut config =
        ProtocolConfig::new(vec![], 0.0, vec![(0.9 * PI, 100.0), (0.5 * PI, 20.0)], (0, 1));
    config.initial_rotation = PI;
    let holds: Vec<f64> = (0..=10).map(|i| i as f64).collect();
    let scan = gyroscope_scan(&model, &config, &holds).unwrap();
    for r in &scan {
        assert!((r.p_first - scan[0].p_first).abs() < 1e-9);
        assert!((r.p_first + r.p_second + r.p_other - 1.0).abs() < 1e-9);
    }
}

#[test]
fn protocol_on_the_lattice_model_is_accepted() {
    let model = ThreeSiteParams::new(1, 1.0, 0.0, 0.0);
    let config = ProtocolConfig::new(vec![(PI, 50.0)], 0.1, vec![], (0, 1));
    assert!(gyroscope_scan(&model, &config, &[0.0, 1.0]).is_ok());
}

#[test]
fn fringe_frequency_rejects_short_series() {
    assert!(fringe_frequency(&[0.0, 1.0], &[0.0, 1.0], 0.1, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn propagation_is_unitary_and_composes(t1 in 0.0f64..20.0, t2 in 0.0f64..20.0, omega in 0.0f64..6.0) {
        let h = ring_hamiltonian(&RingParams::new(2, 0.2, 1.0, omega).with_window(-1, 2)).unwrap();
        let start = PureState::fock(h.basis().clone(), &[0, 2, 0, 0]).unwrap();
        let prop = Propagator::new(&h);
        let once = prop.apply(&start, t1 + t2).unwrap();
        let twice = prop.apply(&prop.apply(&start, t1).unwrap(), t2).unwrap();
        let norm: f64 = once.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        prop_assert!((once.inner(&twice).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fringe_frequency_recovers_a_cosine(w in 1.0f64..4.0, phase in 0.0f64..6.0) {
        let t: Vec<f64> = (0..=400).map(|i| 0.1 * i as f64).collect();
        let s: Vec<f64> = t.iter().map(|&x| 0.5 + 0.4 * (w * x + phase).cos()).collect();
        let got = fringe_frequency(&t, &s, 0.05, 5.0).unwrap();
        prop_assert!((got - w).abs() < 1e-3 * w, "got {got}");
    }
}
