//! End-to-end acceptance checks. Every criterion runs even when an earlier
//! one fails, and each prints exactly one PASS or FAIL line.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rotometry::dynamics::{fringe_frequency, gyroscope_scan, ProtocolConfig};
use rotometry::fockspace::{DensityMatrix, FockBasis, ModeSet, PureState};
use rotometry::metrology::{
    apply_loss, atom_photon_ratio, bat_state, mixed_qfi, noon_state, photon_angular_frequency,
    pure_qfi, qfi_vs_loss, unentangled_state, PhaseGenerator, RUBIDIUM_87_MASS,
};
use rotometry::models::{
    angular_momentum_sectors, critical_rotation_pancake, dominant_pair_distribution, flow_weights,
    pancake_hamiltonian, ring_hamiltonian, three_site_flow_basis, three_site_site_basis,
    PancakeParams, RingParams, ThreeSiteFlow, ThreeSiteParams,
};
use rotometry::spectral::{eigensolve, find_anticrossing, find_first_anticrossing, ground_state};

const SPECTRUM_TOL: f64 = 1e-9;
const ANTICROSSING_LOCATION_TOL: f64 = 1e-3;
const MIRROR_TOL: f64 = 1e-9;
const OVERLAP_SLACK: f64 = 1e-9;
const CROSSING_GAP_TOL: f64 = 1e-12;
const PERTURBATIVE_REL_TOL: f64 = 0.05;
const QFI_EXACT_TOL: f64 = 1e-9;
const MIXED_PURE_TOL: f64 = 1e-8;
const ORDERING_MARGIN: f64 = 1e-6;
const LOSS_ORACLE_REL_TOL: f64 = 1e-8;
const CRITICAL_ROTATION_REL_TOL: f64 = 0.05;
const PARITY_LEAK_TOL: f64 = 1e-14;
const EXTREME_WEIGHT_MIN: f64 = 1e-4;
const SECTOR_WEIGHT_MIN: f64 = 0.95;
const TG_QFI_REL_TOL: f64 = 0.05;
const RATIO_RANGE: (f64, f64) = (1e10, 1e12);
const SCALING_REL_TOL: f64 = 0.10;

/// Regression anchor for the NOON overlap at the three-site anti-crossing,
/// from the site-basis oracle below.
const NOON_OVERLAP_ANCHOR: f64 = 0.854_517_830_214;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn dense_spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = nalgebra::SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

fn ln_fact(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn basis_spectrum_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(1..=4);
        let j = rng.random_range(0.1..2.0);
        let u = rng.random_range(-2.0..2.0);
        let phi = rng.random_range(0.0..2.0 * PI);
        let p = ThreeSiteParams::new(n, j, u, phi);
        let site = dense_spectrum(&three_site_site_basis(&p).map_err(|e| e.to_string())?.to_dense());
        let flow = dense_spectrum(&three_site_flow_basis(&p).map_err(|e| e.to_string())?.to_dense());
        if site.len() != flow.len() {
            return Err(format!("dimension mismatch at N={n}"));
        }
        for (a, b) in site.iter().zip(&flow) {
            worst = worst.max((a - b).abs());
        }
    }
    check(worst <= SPECTRUM_TOL, format!("max |ΔE| = {worst:.2e} over 50 draws"))
}

/// Site-basis diagonalization with the NOON overlap taken against the two
/// lowest plane-wave orbitals, built from scratch.
fn site_noon_overlap_oracle(p: &ThreeSiteParams) -> f64 {
    let n = p.num_particles;
    let h = three_site_site_basis(p).unwrap();
    let basis = h.basis().clone();
    let eig = nalgebra::SymmetricEigen::new(h.to_dense());
    let g = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    let psi = eig.eigenvectors.column(g).into_owned();

    let single = three_site_site_basis(&ThreeSiteParams { num_particles: 1, ..*p }).unwrap();
    let h1 = single.to_dense();
    let site_of = |occ: &[u8]| occ.iter().position(|&x| x == 1).unwrap();
    let one_body: Vec<usize> = single.basis().states().map(site_of).collect();
    let omega = |k: usize, i: usize| Complex64::from_polar(1.0 / 3f64.sqrt(), 2.0 * PI * (k * i) as f64 / 3.0);
    let mut waves: Vec<(f64, [Complex64; 3])> = (0..3)
        .map(|k| {
            let v = [omega(k, 0), omega(k, 1), omega(k, 2)];
            let in_basis = DVector::from_iterator(3, one_body.iter().map(|&s| v[s]));
            let e = (in_basis.adjoint() * &h1 * &in_basis)[(0, 0)].re;
            (e, v)
        })
        .collect();
    waves.sort_by(|a, b| a.0.total_cmp(&b.0));

    let amplitude = |v: &[Complex64; 3]| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (occ, c) in basis.states().zip(psi.iter()) {
            let ln_norm = 0.5 * (ln_fact(n) - occ.iter().map(|&k| ln_fact(k as usize)).sum::<f64>());
            let mut w = c64(ln_norm.exp());
            for (i, &k) in occ.iter().enumerate() {
                w *= v[i].powu(k as u32);
            }
            acc += w.conj() * c;
        }
        acc.norm()
    };
    let (a, b) = (amplitude(&waves[0].1), amplitude(&waves[1].1));
    0.5 * (a + b).powi(2)
}

fn three_site_anticrossing() -> Outcome {
    let p = ThreeSiteParams::new(3, 1.0, 1.0, PI);
    let flow = ThreeSiteFlow(p);
    let ac = find_anticrossing(&flow, (0.5 * PI, 1.5 * PI), 1e-10).map_err(|e| e.to_string())?;
    let at = ThreeSiteParams { phase: ac.location, ..p };
    let gs = ground_state(&three_site_flow_basis(&at).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let w = flow_weights(&gs.state).map_err(|e| e.to_string())?;
    let oracle = site_noon_overlap_oracle(&at);
    let loc_err = (ac.location - PI).abs();
    let mirror = (w.alpha_extreme - w.beta_extreme).abs();
    let detail = format!(
        "phi* = {:.12} (|phi*-pi| = {loc_err:.1e}), |w_alpha - w_beta| = {mirror:.1e}, \
         NOON overlap = {:.12} (oracle {oracle:.12}, anchor {NOON_OVERLAP_ANCHOR})",
        ac.location, w.noon_overlap
    );
    check(
        loc_err <= ANTICROSSING_LOCATION_TOL
            && mirror <= MIRROR_TOL
            && w.noon_overlap >= oracle - OVERLAP_SLACK
            && (oracle - NOON_OVERLAP_ANCHOR).abs() <= OVERLAP_SLACK,
        detail,
    )
}

fn ring_lowest_gap(p: &RingParams) -> Result<f64, String> {
    let h = ring_hamiltonian(p).map_err(|e| e.to_string())?;
    let e = eigensolve(&h, 2).map_err(|e| e.to_string())?;
    Ok(e.values[1] - e.values[0])
}

fn continuous_loop_spectrum() -> Outcome {
    let free = ring_lowest_gap(&RingParams::new(1, 0.0, 0.0, PI))?;
    let b = 0.1;
    let barrier = ring_lowest_gap(&RingParams::new(1, b, 0.0, PI))?;
    let rel = (barrier - 2.0 * b).abs() / (2.0 * b);
    check(
        free < CROSSING_GAP_TOL && rel <= PERTURBATIVE_REL_TOL,
        format!("free gap = {free:.1e}, barrier gap = {barrier:.6} vs 2b/L = {:.3} (rel {rel:.3})", 2.0 * b),
    )
}

fn random_state(rng: &mut ChaCha8Rng) -> PureState {
    let n = rng.random_range(1..=6);
    let modes = rng.random_range(2..=3);
    let basis = std::sync::Arc::new(FockBasis::new(n, ModeSet::sequential(modes).unwrap()).unwrap());
    let v = DVector::from_iterator(
        basis.dim(),
        (0..basis.dim()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
    );
    PureState::normalized(basis, v).unwrap()
}

fn qfi_anchors() -> Outcome {
    let g = PhaseGenerator::second_mode();
    let mut worst_noon = 0.0f64;
    let mut worst_unent = 0.0f64;
    for n in 1..=20 {
        let noon = pure_qfi(&noon_state(n).map_err(|e| e.to_string())?, &g);
        let unent = pure_qfi(&unentangled_state(n).map_err(|e| e.to_string())?, &g);
        worst_noon = worst_noon.max((noon - (n * n) as f64).abs());
        worst_unent = worst_unent.max((unent - n as f64).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_mixed = 0.0f64;
    for _ in 0..100 {
        let s = random_state(&mut rng);
        let mixed = mixed_qfi(&DensityMatrix::from_pure(&s), &g);
        worst_mixed = worst_mixed.max((mixed - pure_qfi(&s, &g)).abs());
    }
    check(
        worst_noon <= QFI_EXACT_TOL && worst_unent <= QFI_EXACT_TOL && worst_mixed <= MIXED_PURE_TOL,
        format!("NOON err {worst_noon:.1e}, unentangled err {worst_unent:.1e}, mixed-pure err {worst_mixed:.1e}"),
    )
}

/// Two-mode loss followed by the spectral Fisher formula on the full
/// density matrix over all surviving particle numbers.
fn kraus_oracle_qfi(state: &PureState, loss: f64) -> f64 {
    let n = state.basis().num_particles();
    let eta = 1.0 - loss;
    let index = |a: usize, b: usize| -> usize {
        let total = a + b;
        total * (total + 1) / 2 + b
    };
    let dim = index(0, n) + 1;
    let amp = |keep: usize, lost: usize, from: usize| -> f64 {
        (ln_fact(from) - ln_fact(keep) - ln_fact(lost)).exp().sqrt()
            * eta.powf(0.5 * keep as f64)
            * loss.powf(0.5 * lost as f64)
    };
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for ja in 0..=n {
        for jb in 0..=n - ja {
            let mut out = DVector::<Complex64>::zeros(dim);
            for (occ, c) in state.basis().states().zip(state.amplitudes().iter()) {
                let (na, nb) = (occ[0] as usize, occ[1] as usize);
                if ja > na || jb > nb {
                    continue;
                }
                out[index(na - ja, nb - jb)] += c * amp(na - ja, ja, na) * amp(nb - jb, jb, nb);
            }
            rho += &out * out.adjoint();
        }
    }
    let mut gen = vec![0.0; dim];
    for a in 0..=n {
        for b in 0..=n - a {
            gen[index(a, b)] = b as f64;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(rho);
    let u = &eig.eigenvectors;
    let lam = &eig.eigenvalues;
    let mut f = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let s = lam[i] + lam[j];
            if s <= 1e-14 {
                continue;
            }
            let gij: Complex64 = (0..dim).map(|r| u[(r, i)].conj() * gen[r] * u[(r, j)]).sum();
            f += 2.0 * (lam[i] - lam[j]).powi(2) / s * gij.norm_sqr();
        }
    }
    f
}

fn loss_curves() -> Outcome {
    let g = PhaseGenerator::second_mode();
    let noon = noon_state(10).map_err(|e| e.to_string())?;
    let bat = bat_state(5).map_err(|e| e.to_string())?;
    let unent = unentangled_state(10).map_err(|e| e.to_string())?;
    let grid: Vec<f64> = (0..=50).map(|i| 0.01 * i as f64).collect();
    let curve = |s: &PureState, tag: &str| qfi_vs_loss(s, tag, &g, &grid).map(|c| c.qfi).map_err(|e| e.to_string());
    let (fn_, fb, fu) = (curve(&noon, "noon")?, curve(&bat, "bat")?, curve(&unent, "unentangled")?);
    let at = |l: f64| grid.iter().position(|&x| (x - l).abs() < 1e-12).unwrap();
    let (i0, i2) = (at(0.0), at(0.2));

    let mut failures = Vec::new();
    let m = ORDERING_MARGIN;
    if !((fn_[i0] - 100.0).abs() <= m && fn_[i0] > fb[i0] + m && fb[i0] > fu[i0] + m && (fu[i0] - 10.0).abs() <= m) {
        failures.push("ordering at l=0".to_string());
    }
    if !(fb[i2] > fu[i2] + m && fb[i2] > fn_[i2] + m) {
        failures.push("ordering at l=0.2".to_string());
    }
    let crossover = (1..grid.len()).find(|&i| fn_[i - 1] > fu[i - 1] + m && fn_[i] < fu[i] - m);
    if crossover.is_none() {
        failures.push("no NOON/unentangled crossover in (0, 0.5)".to_string());
    }

    let mut worst = 0.0f64;
    for &l in &[0.0, 0.1, 0.2, 0.35, 0.5] {
        let i = at(l);
        for (s, f) in [(&noon, &fn_), (&bat, &fb), (&unent, &fu)] {
            let oracle = kraus_oracle_qfi(s, l);
            worst = worst.max((f[i] - oracle).abs() / oracle.abs().max(1.0));
        }
        let eta: f64 = 1.0 - l;
        worst = worst.max((fn_[i] - 100.0 * eta.powi(10)).abs() / 100.0);
        worst = worst.max((fu[i] - 10.0 * eta).abs() / 10.0);
    }
    if worst > LOSS_ORACLE_REL_TOL {
        failures.push(format!("oracle mismatch {worst:.1e}"));
    }
    let detail = format!(
        "l=0: NOON {:.6} bat {:.6} unent {:.6}; l=0.2: NOON {:.6} bat {:.6} unent {:.6}; crossover near l={}; oracle rel err {worst:.1e}",
        fn_[i0], fb[i0], fu[i0], fn_[i2], fb[i2], fu[i2],
        crossover.map_or("none".to_string(), |i| format!("{:.2}", grid[i]))
    );
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; {detail}", failures.join(", ")))
    }
}

/// The rotation bracket holds a sequence of vortex entries; the critical
/// rotation is the first one met when spinning up from rest.
fn first_vortex_entry(p: &PancakeParams) -> Result<rotometry::spectral::AntiCrossing, String> {
    find_first_anticrossing(p, (0.6, 1.0), 1e-6).map_err(|e| e.to_string())
}

fn pancake_critical_rotation() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [2usize, 4, 6] {
        let p = PancakeParams::new(n, 0.5, 0.01, 0.9);
        let ac = first_vortex_entry(&p)?;
        let formula = critical_rotation_pancake(n, 0.5);
        let rel = (ac.location - formula).abs() / formula;
        let h = pancake_hamiltonian(&p).map_err(|e| e.to_string())?;
        let basis = h.basis().clone();
        let leak = h
            .triplets()
            .filter(|&(r, c, _)| (basis.label_weight(r) - basis.label_weight(c)).rem_euclid(2) == 1)
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max);
        ok &= rel <= CRITICAL_ROTATION_REL_TOL && leak < PARITY_LEAK_TOL;
        parts.push(format!("N={n}: Omega* {:.6} vs {formula:.6} (rel {rel:.3}), parity leak {leak:.1e}", ac.location));
    }
    check(ok, parts.join("; "))
}

fn pancake_ground_state() -> Outcome {
    let n = 6;
    let p = PancakeParams::new(n, 0.5, 0.03, 0.9);
    let ac = first_vortex_entry(&p)?;
    let at = PancakeParams { rotation: ac.location, ..p };
    let gs = ground_state(&pancake_hamiltonian(&at).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let d = dominant_pair_distribution(&gs.state).map_err(|e| e.to_string())?;
    let (_, var) = d.moments();
    let (lo, hi) = (d.probabilities[0], d.probabilities[n]);
    let binomial = n as f64 / 4.0;
    check(
        lo > EXTREME_WEIGHT_MIN && hi > EXTREME_WEIGHT_MIN && var > binomial,
        format!(
            "Omega* = {:.6}, P(0) = {lo:.3e}, P(N) = {hi:.3e}, variance {var:.4} vs N/4 = {binomial}",
            ac.location
        ),
    )
}

fn tonks_ring() -> Outcome {
    let n = 3;
    let g = 1085.0 / (2.0 * PI) * n as f64 / 5.0;
    let p = RingParams::new(n, 0.008, g, PI);
    let h = ring_hamiltonian(&p).map_err(|e| e.to_string())?;
    let window = p.k_max - p.k_min + 1;
    let gs = ground_state(&h).map_err(|e| e.to_string())?;
    let sectors = angular_momentum_sectors(h.basis());
    let weight: f64 = sectors
        .iter()
        .zip(gs.state.amplitudes().iter())
        .filter(|(l, _)| **l == 0 || **l == n as i64)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let l_gen = PhaseGenerator::AngularMomentum;
    let f0 = pure_qfi(&gs.state, &l_gen);
    let rel = (f0 - (n * n) as f64).abs() / (n * n) as f64;
    let eta = 0.8;
    let tg = mixed_qfi(&apply_loss(&gs.state, eta).map_err(|e| e.to_string())?, &l_gen);
    let two = PhaseGenerator::second_mode();
    let noon = mixed_qfi(&apply_loss(&noon_state(n).unwrap(), eta).map_err(|e| e.to_string())?, &two);
    let unent = mixed_qfi(&apply_loss(&unentangled_state(n).unwrap(), eta).map_err(|e| e.to_string())?, &two);
    check(
        window >= 12 && weight >= SECTOR_WEIGHT_MIN && rel <= TG_QFI_REL_TOL && tg > noon && tg > unent,
        format!(
            "{window} modes, weight(L in {{0,N}}) = {weight:.6}, F = {f0:.6} vs N^2 = {}, l=0.2: TG {tg:.4} NOON {noon:.4} unent {unent:.4}",
            n * n
        ),
    )
}

fn sagnac_ratio() -> Outcome {
    let r = atom_photon_ratio(RUBIDIUM_87_MASS, photon_angular_frequency(780e-9)).map_err(|e| e.to_string())?;
    check(r >= RATIO_RANGE.0 && r <= RATIO_RANGE.1, format!("Mc^2/(hbar omega) = {r:.4e}"))
}

fn fringe(n: usize) -> Result<f64, String> {
    let model = RingParams::new(n, 0.05, 1.0, 0.0).with_window(-1, 2);
    let config = ProtocolConfig::new(
        vec![(0.8 * PI, 20.0), (PI, 400.0)],
        0.5 * PI,
        vec![(0.9 * PI, 400.0), (0.5 * PI, 20.0)],
        (0, 1),
    );
    let holds: Vec<f64> = (0..=400).map(|i| 0.1 * i as f64).collect();
    let scan = gyroscope_scan(&model, &config, &holds).map_err(|e| e.to_string())?;
    let signal: Vec<f64> = scan.iter().map(|r| r.p_first).collect();
    fringe_frequency(&holds, &signal, 0.05, 5.0).map_err(|e| e.to_string())
}

fn protocol_scaling() -> Outcome {
    let (f1, f2) = (fringe(1)?, fringe(2)?);
    let ratio = f2 / f1;
    check(
        (ratio - 2.0).abs() / 2.0 <= SCALING_REL_TOL,
        format!("fringe frequency N=1 {f1:.6}, N=2 {f2:.6}, ratio {ratio:.4}"),
    )
}

fn run_cli(args: &[&str], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rotometry"))
        .args(args)
        .env("ROTOMETRY_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["anticrossing", "--model", "three-site-flow"],
        &["qfi", "--state", "noon,bat,unentangled", "--atoms", "10", "--loss", "0:0.5:51"],
        &["qfi", "--model", "ring", "--state", "ground,noon,unentangled", "--loss", "0:0.5:51"],
        &["groundstate", "--model", "ring"],
    ];
    for args in runs {
        let reference = run_cli(args, "1")?;
        for threads in ["1", "4", "4"] {
            if run_cli(args, threads)? != reference {
                return Err(format!("{args:?} differs with ROTOMETRY_THREADS={threads}"));
            }
        }
    }
    Ok("4 commands x 4 runs byte-identical across 1 and 4 threads".to_string())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("basis-change equivalence", basis_spectrum_equivalence),
        ("three-site anti-crossing", three_site_anticrossing),
        ("continuous-loop spectrum", continuous_loop_spectrum),
        ("QFI anchors", qfi_anchors),
        ("loss curves", loss_curves),
        ("pancake critical rotation", pancake_critical_rotation),
        ("pancake ground state", pancake_ground_state),
        ("Tonks-Girardeau ring", tonks_ring),
        ("Sagnac utilities", sagnac_ratio),
        ("protocol N-scaling", protocol_scaling),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
