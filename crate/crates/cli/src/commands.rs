use rotometry::dynamics::{fringe_frequency, gyroscope_scan};
use rotometry::fockspace::{natural_orbitals, PureState};
use rotometry::metrology::{
    bat_state, noon_state, pure_qfi, qfi_vs_loss, unentangled_state, PhaseGenerator, QfiCurve,
};
use rotometry::models::{
    dominant_pair_distribution, flow_weights, three_site_flow_basis, Model, RotatingModel,
};
use rotometry::spectral::{
    find_anticrossing, find_first_anticrossing, ground_state, sweep, GroundState,
};
use serde_json::{json, Value};

use crate::config::{Command, Format, RunConfig, Select, StateKind};
use crate::output::{csv_preamble, csv_row, json_document, num};
use crate::CliError;

pub fn execute(command: Command, config: &RunConfig) -> Result<String, CliError> {
    match command {
        Command::Spectrum => spectrum(config),
        Command::Groundstate => groundstate(config),
        Command::Qfi => qfi(config),
        Command::Protocol => protocol(config),
        Command::Anticrossing => anticrossing(config),
    }
}

fn format_of(config: &RunConfig) -> Format {
    config.format.expect("resolved")
}

fn spectrum(config: &RunConfig) -> Result<String, CliError> {
    let model = config.build_model()?;
    let (name, grid) = config.parameter()?;
    let dim = model.hamiltonian()?.dim();
    let k = config.k.expect("resolved").clamp(1, dim);
    if k < config.k.expect("resolved") {
        log::warn!("only {dim} levels exist; emitting {k}");
    }
    let points = grid.points();
    let sw = sweep(&model, &points, k, false)?;
    let unit = sw.unit.tag();
    Ok(match format_of(config) {
        Format::Csv => {
            let mut s = csv_preamble(Command::Spectrum, config, unit);
            s.push_str(&format!("# parameter {name}\n"));
            csv_row(
                &mut s,
                std::iter::once("param".to_string()).chain((0..k).map(|i| format!("E{i}"))),
            );
            for (x, levels) in sw.grid.iter().zip(&sw.levels) {
                csv_row(
                    &mut s,
                    std::iter::once(num(*x)).chain(levels.iter().map(|&e| num(e))),
                );
            }
            s
        }
        Format::Json => json_document(
            Command::Spectrum,
            config,
            unit,
            json!({
                "parameter": name,
                "grid": sw.grid,
                "levels": sw.levels,
                "min_gap_index": sw.min_gap_index(),
            }),
        ),
    })
}

/// Ground state of a model evaluated at its current control value, with
/// the diagnostics each geometry supports.
pub fn ground_summary(model: &Model) -> Result<(GroundState, Value), CliError> {
    let gs = ground_state(&model.hamiltonian()?)?;
    let state = &gs.state;
    let basis = state.basis();
    let amplitudes: Vec<Value> = (0..basis.dim())
        .map(|i| {
            let a = state.amplitudes()[i];
            json!({ "fock": basis.ket_label(i), "re": a.re, "im": a.im })
        })
        .collect();
    let (occupations, _) = natural_orbitals(state);
    let mut summary = json!({
        "energy": gs.energy,
        "gap": finite_or_null(gs.gap),
        "degenerate": gs.degenerate,
        "modes": basis.modes().labels(),
        "amplitudes": amplitudes,
        "natural_occupations": occupations,
    });
    let fields = summary.as_object_mut().expect("object");

    let sector_state;
    let sectors_of: &PureState = match model {
        Model::ThreeSite(p) => {
            sector_state = ground_state(&three_site_flow_basis(p)?)?.state;
            &sector_state
        }
        _ => state,
    };
    let sectors: Vec<Value> = sectors_of
        .label_weight_distribution()
        .into_iter()
        .map(|(l, w)| json!({ "L": l, "weight": w }))
        .collect();
    fields.insert("sector_weights".into(), Value::Array(sectors));

    match model {
        Model::ThreeSite(_) | Model::ThreeSiteFlow(_) => {
            let w = flow_weights(sectors_of)?;
            fields.insert("flow_weights".into(), serde_json::to_value(w).expect("plain"));
        }
        Model::Pancake(_) => {
            let d = dominant_pair_distribution(state)?;
            let (mean, variance) = d.moments();
            let n = model.num_particles() as f64;
            fields.insert(
                "pair_distribution".into(),
                json!({
                    "occupations": d.occupations,
                    "probabilities": d.probabilities,
                    "weight": d.weight,
                    "mean": mean,
                    "variance": variance,
                    "binomial_variance": n / 4.0,
                }),
            );
        }
        Model::Ring(_) => {
            let f = pure_qfi(state, &PhaseGenerator::AngularMomentum);
            fields.insert("qfi_L".into(), json!(f));
        }
    }
    Ok((gs, summary))
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn groundstate(config: &RunConfig) -> Result<String, CliError> {
    let (name, grid) = config.parameter()?;
    let value = grid.scalar(name)?;
    let model = config.build_model()?.with_rotation(value);
    let unit = model.energy_unit().tag();
    let (gs, summary) = ground_summary(&model)?;
    Ok(match format_of(config) {
        Format::Json => json_document(
            Command::Groundstate,
            config,
            unit,
            json!({ "parameter": name, "value": value, "ground_state": summary }),
        ),
        Format::Csv => {
            let mut s = csv_preamble(Command::Groundstate, config, unit);
            s.push_str(&format!("# {name} {}\n", num(value)));
            s.push_str(&format!("# energy {}\n", num(gs.energy)));
            s.push_str(&format!("# gap {}\n", num(gs.gap)));
            csv_row(&mut s, ["fock", "re", "im", "probability"].map(String::from));
            let basis = gs.state.basis();
            for (i, a) in gs.state.amplitudes().iter().enumerate() {
                csv_row(
                    &mut s,
                    [
                        format!("\"{}\"", basis.ket_label(i)),
                        num(a.re),
                        num(a.im),
                        num(a.norm_sqr()),
                    ],
                );
            }
            s
        }
    })
}

struct Probe {
    kind: StateKind,
    state: PureState,
    generator: PhaseGenerator,
}

fn probe(config: &RunConfig, kind: StateKind) -> Result<Probe, CliError> {
    let atoms = config.atoms.expect("resolved");
    let explicit = config
        .generator
        .as_ref()
        .map(|g| g.resolve().map_err(CliError::Config))
        .transpose()?;
    let (state, default_generator) = match kind {
        StateKind::Noon => (noon_state(atoms)?, PhaseGenerator::second_mode()),
        StateKind::Unentangled => (unentangled_state(atoms)?, PhaseGenerator::second_mode()),
        StateKind::Bat => {
            if atoms % 2 != 0 || atoms == 0 {
                return Err(CliError::config(format!(
                    "the bat state needs an even atom number, got {atoms}"
                )));
            }
            (bat_state(atoms / 2)?, PhaseGenerator::second_mode())
        }
        StateKind::Ground => {
            let (name, grid) = config.parameter()?;
            let model = config.build_model()?.with_rotation(grid.scalar(name)?);
            let h = match model {
                Model::ThreeSite(p) | Model::ThreeSiteFlow(p) => three_site_flow_basis(&p)?,
                _ => model.hamiltonian()?,
            };
            (ground_state(&h)?.state, PhaseGenerator::AngularMomentum)
        }
    };
    Ok(Probe {
        kind,
        state,
        generator: explicit.unwrap_or(default_generator),
    })
}

fn qfi(config: &RunConfig) -> Result<String, CliError> {
    let loss = config.loss.expect("resolved").points();
    let curves: Vec<(Probe, QfiCurve)> = config
        .state
        .clone()
        .expect("resolved")
        .into_iter()
        .map(|kind| {
            let p = probe(config, kind)?;
            let curve = qfi_vs_loss(&p.state, kind.tag(), &p.generator, &loss)?;
            Ok((p, curve))
        })
        .collect::<Result<_, CliError>>()?;
    let unit = "FQ=1,deltaphi_min=rad";
    Ok(match format_of(config) {
        Format::Csv => {
            let mut s = csv_preamble(Command::Qfi, config, unit);
            for (i, (p, c)) in curves.iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                }
                s.push_str(&format!(
                    "# state {} atoms={} generator={}\n",
                    p.kind.tag(),
                    p.state.basis().num_particles(),
                    c.generator
                ));
                csv_row(&mut s, ["loss", "FQ", "deltaphi_min"].map(String::from));
                for ((l, f), d) in c.loss.iter().zip(&c.qfi).zip(&c.delta_phi_min) {
                    csv_row(&mut s, [num(*l), num(*f), num(*d)]);
                }
            }
            s
        }
        Format::Json => {
            let items: Vec<Value> = curves
                .iter()
                .map(|(p, c)| {
                    json!({
                        "state": c.state,
                        "atoms": p.state.basis().num_particles(),
                        "generator": c.generator,
                        "loss": c.loss,
                        "qfi": c.qfi,
                        "delta_phi_min": c.delta_phi_min,
                    })
                })
                .collect();
            json_document(Command::Qfi, config, unit, json!({ "curves": items }))
        }
    })
}

fn protocol(config: &RunConfig) -> Result<String, CliError> {
    let model = config.build_model()?;
    let pc = config.protocol_config();
    let holds = config.hold.expect("resolved").points();
    let results = gyroscope_scan(&model, &pc, &holds)?;
    let report = results[0].adiabaticity;
    let signal: Vec<f64> = results.iter().map(|r| r.p_first).collect();
    let spread = signal.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - signal.iter().cloned().fold(f64::INFINITY, f64::min);
    let window = config.fringe_window.expect("resolved");
    let fringe = if holds.len() >= 3 && spread > 1e-9 {
        Some(fringe_frequency(&holds, &signal, window.0, window.1)?)
    } else {
        None
    };
    let warning = u8::from(report.warning);
    if report.warning {
        log::warn!(
            "ramp overlap fell to {:.4} (floor {})",
            report.min_overlap,
            pc.adiabaticity_floor
        );
    }
    let unit = format!("hold=hbar/{},P=1", model.energy_unit().tag());
    Ok(match format_of(config) {
        Format::Csv => {
            let mut s = csv_preamble(Command::Protocol, config, &unit);
            s.push_str(&format!(
                "# adiabaticity min_overlap={} final_overlap={} steps={} warning={warning}\n",
                num(report.min_overlap),
                num(report.final_overlap),
                report.steps
            ));
            s.push_str(&format!(
                "# fringe_frequency {}\n",
                fringe.map_or("none".to_string(), num)
            ));
            csv_row(
                &mut s,
                ["hold", "P_first", "P_second", "P_other"].map(String::from),
            );
            for r in &results {
                csv_row(
                    &mut s,
                    [num(r.hold), num(r.p_first), num(r.p_second), num(r.p_other)],
                );
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "hold": r.hold,
                        "p_first": r.p_first,
                        "p_second": r.p_second,
                        "p_other": r.p_other,
                    })
                })
                .collect();
            json_document(
                Command::Protocol,
                config,
                &unit,
                json!({
                    "adiabaticity": {
                        "min_overlap": report.min_overlap,
                        "final_overlap": report.final_overlap,
                        "steps": report.steps,
                        "warning": warning,
                    },
                    "fringe_frequency": fringe,
                    "rows": rows,
                }),
            )
        }
    })
}

fn anticrossing(config: &RunConfig) -> Result<String, CliError> {
    let model = config.build_model()?;
    let (name, _) = config.parameter()?;
    let bracket = config.bracket.expect("resolved");
    let (bracket, tol) = ((bracket.0, bracket.1), config.tol.expect("resolved"));
    let ac = match config.select.expect("resolved") {
        Select::Lowest => find_anticrossing(&model, bracket, tol)?,
        Select::First => find_first_anticrossing(&model, bracket, tol)?,
    };
    let at = model.with_rotation(ac.location);
    let unit = model.energy_unit().tag();
    Ok(match format_of(config) {
        Format::Json => {
            let (_, summary) = ground_summary(&at)?;
            json_document(
                Command::Anticrossing,
                config,
                unit,
                json!({
                    "parameter": name,
                    "anticrossing": ac,
                    "ground_state": summary,
                }),
            )
        }
        Format::Csv => {
            let mut s = csv_preamble(Command::Anticrossing, config, unit);
            s.push_str(&format!("# parameter {name}\n"));
            csv_row(
                &mut s,
                [
                    "location",
                    "gap",
                    "bracket_lo",
                    "bracket_hi",
                    "converged",
                    "avoided",
                ]
                .map(String::from),
            );
            csv_row(
                &mut s,
                [
                    num(ac.location),
                    num(ac.gap),
                    num(ac.bracket.0),
                    num(ac.bracket.1),
                    u8::from(ac.converged).to_string(),
                    u8::from(ac.avoided).to_string(),
                ],
            );
            s
        }
    })
}
