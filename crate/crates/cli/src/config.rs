//! Run configuration: JSON file and command-line flags merged into one
//! record, then completed with per-model defaults.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use rotometry::dynamics::{ProtocolConfig, DEFAULT_ADIABATICITY_FLOOR, DEFAULT_MAX_PHASE_STEP};
use rotometry::metrology::{PhaseGenerator, DEFAULT_LOSS_POINTS, DEFAULT_MAX_LOSS};
use rotometry::models::{
    critical_rotation_pancake, Model, PancakeParams, RingParams, ThreeSiteParams, DEFAULT_K_MAX,
    DEFAULT_K_MIN,
};
use rotometry::spectral::linspace;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Strong-coupling ring interaction g/L in E₀ for five atoms; other atom
/// numbers are scaled by N/5 to keep the coupling per atom fixed.
pub const TONKS_INTERACTION_FIVE_ATOMS: f64 = 1085.0 / (2.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Groundstate,
    Qfi,
    Protocol,
    Anticrossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    ThreeSite,
    ThreeSiteFlow,
    Pancake,
    Ring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Noon,
    Bat,
    Unentangled,
    Ground,
}

impl StateKind {
    pub fn tag(self) -> &'static str {
        match self {
            StateKind::Noon => "noon",
            StateKind::Bat => "bat",
            StateKind::Unentangled => "unentangled",
            StateKind::Ground => "ground",
        }
    }
}

/// Which gap minimum of the bracket the anti-crossing search refines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Select {
    Lowest,
    /// First local minimum from the low end of the bracket.
    First,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Real number, optionally written as a multiple of π (`pi`, `-0.5pi`, `2*pi`).
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Some(pre) = t.strip_suffix("pi") {
        let pre = pre.trim_end_matches('*');
        let c = match pre {
            "" | "+" => 1.0,
            "-" => -1.0,
            p => p.parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"))?,
        };
        return Ok(c * PI);
    }
    let x = t
        .parse::<f64>()
        .map_err(|e| format!("bad number {s:?}: {e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("number {s:?} is not finite"))
    }
}

/// Inclusive grid `start:stop:count`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridValue", into = "String")]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GridValue {
    Number(f64),
    Text(String),
}

impl TryFrom<GridValue> for GridSpec {
    type Error = String;
    fn try_from(v: GridValue) -> Result<Self, String> {
        match v {
            GridValue::Number(x) => Ok(GridSpec::point(x)),
            GridValue::Text(s) => s.parse(),
        }
    }
}

impl GridSpec {
    pub fn point(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            count: 1,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }

    /// The value of a one-point grid.
    pub fn scalar(&self, name: &str) -> Result<f64, CliError> {
        if self.count == 1 {
            Ok(self.start)
        } else {
            Err(CliError::config(format!(
                "--{name} must be a single value here, got a {}-point grid",
                self.count
            )))
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(GridSpec::point(parse_real(x)?)),
            [a, b, n] => {
                let count: usize = n
                    .trim()
                    .parse()
                    .map_err(|e| format!("bad grid count {n:?}: {e}"))?;
                if count < 1 {
                    return Err(format!("grid {s:?} needs count >= 1"));
                }
                Ok(GridSpec {
                    start: parse_real(a)?,
                    stop: parse_real(b)?,
                    count,
                })
            }
            _ => Err(format!("grid {s:?} is not start:stop:count")),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 1 {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}:{}", self.start, self.stop, self.count)
        }
    }
}

impl From<GridSpec> for String {
    fn from(g: GridSpec) -> String {
        g.to_string()
    }
}

/// Two reals written `lo:hi` or `lo,hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair(pub f64, pub f64);

impl FromStr for Pair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once([':', ','])
            .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
        Ok(Pair(parse_real(a)?, parse_real(b)?))
    }
}

/// Two mode labels written `first,second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Readout(pub i64, pub i64);

impl FromStr for Readout {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once([':', ','])
            .ok_or_else(|| format!("expected two mode labels, got {s:?}"))?;
        let p = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad mode label {x:?}: {e}"))
        };
        Ok(Readout(p(a)?, p(b)?))
    }
}

/// Ramp segments `target:duration,target:duration,...`; `none` is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ramp(pub Vec<(f64, f64)>);

impl FromStr for Ramp {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if t.is_empty() || t == "none" {
            return Ok(Ramp(Vec::new()));
        }
        t.split(',')
            .map(|seg| {
                let Pair(x, d) = seg.parse()?;
                Ok((x, d))
            })
            .collect::<Result<_, String>>()
            .map(Ramp)
    }
}

/// `L` for total angular momentum, `n:<label>` for one mode's number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorSpec(pub String);

impl FromStr for GeneratorSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let g = GeneratorSpec(s.trim().to_string());
        g.resolve()?;
        Ok(g)
    }
}

impl GeneratorSpec {
    pub fn resolve(&self) -> Result<PhaseGenerator, String> {
        self.0.parse().map_err(|e: rotometry::Error| e.to_string())
    }
}

/// Every run parameter. Flags and config-file keys share these names.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,

    /// Particle number.
    #[arg(long = "N")]
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Three-site tunneling.
    #[arg(long = "J", value_parser = parse_real)]
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    /// Three-site on-site interaction.
    #[arg(long = "U", value_parser = parse_real, allow_hyphen_values = true)]
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    /// Three-site loop phase: value or start:stop:count.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<GridSpec>,
    /// Pancake or ring rotation: value or start:stop:count.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<GridSpec>,
    /// Pancake g, or ring g/L in E0.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    /// Pancake trap asymmetry.
    #[arg(long = "A", value_parser = parse_real)]
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Ring barrier b/L in E0.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Pancake single-particle angular momentum cutoff.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    /// Pancake total angular momentum cutoff.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_max: Option<usize>,
    /// Ring momentum window, lower end.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_min: Option<i64>,
    /// Ring momentum window, upper end.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<i64>,
    /// Ring interaction multiplier.
    #[arg(long, value_parser = parse_real)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interaction_scale: Option<f64>,

    /// Number of levels in a spectrum.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Probe states, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<Vec<StateKind>>,
    /// Atom number of the two-mode probe states.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<usize>,
    /// Loss-fraction grid.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss: Option<GridSpec>,
    /// Phase generator: L or n:<label>.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,

    /// Rotation shift applied during the hold.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    /// Hold-time grid.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hold: Option<GridSpec>,
    /// Rotation at which the protocol starts in the ground state.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<f64>,
    /// Ramp to the critical point: target:duration,...
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ramp_up: Option<Ramp>,
    /// Ramp away from the critical point before readout, or `none`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ramp_down: Option<Ramp>,
    /// Mode labels read out as "all non-rotating" and "all rotating".
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub readout: Option<Readout>,
    /// Largest rotation change per piecewise-constant ramp step
    #[arg(long, value_parser = parse_real)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_phase_step: Option<f64>,
    /// Minimum ground-state overlap along the ramp before warning.
    #[arg(long, value_parser = parse_real)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adiabaticity_floor: Option<f64>,
    /// Angular-frequency window of the fringe fit, lo:hi.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fringe_window: Option<Pair>,

    /// Search bracket, lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<Pair>,
    /// Bracket tolerance of the anti-crossing search.
    #[arg(long, value_parser = parse_real)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Gap minimum to refine; `first` by default for the pancake, where the
    /// bracket holds successive vortex entries.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub select: Option<Select>,

    /// Output file; standard output when absent. Never embedded in the artifact.
    #[arg(long, short)]
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

macro_rules! overlay_fields {
    ($base:expr, $over:expr, $($f:ident),* $(,)?) => {
        RunConfig { $($f: $over.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("config file: {e}")))
    }

    /// Fields set in `over` win.
    pub fn overlay(self, over: RunConfig) -> RunConfig {
        overlay_fields!(
            self,
            over,
            model,
            n,
            j,
            u,
            phi,
            omega,
            g,
            a,
            b,
            m_max,
            l_max,
            k_min,
            k_max,
            interaction_scale,
            k,
            state,
            atoms,
            loss,
            generator,
            shift,
            hold,
            initial,
            ramp_up,
            ramp_down,
            readout,
            max_phase_step,
            adiabaticity_floor,
            fringe_window,
            bracket,
            tol,
            select,
            output,
            format,
        )
    }

    fn needs_model(&self, command: Command) -> bool {
        command != Command::Qfi
            || self.model.is_some()
            || self
                .state
                .as_ref()
                .is_some_and(|s| s.contains(&StateKind::Ground))
    }

    /// Rejects parameters foreign to the selected model.
    fn check_model_fields(&self, kind: ModelKind) -> Result<(), CliError> {
        let present = |set: bool, name: &str| set.then(|| name.to_string());
        let three = [
            present(self.j.is_some(), "J"),
            present(self.u.is_some(), "U"),
            present(self.phi.is_some(), "phi"),
        ];
        let pancake = [
            present(self.a.is_some(), "A"),
            present(self.m_max.is_some(), "m-max"),
            present(self.l_max.is_some(), "l-max"),
        ];
        let ring = [
            present(self.b.is_some(), "b"),
            present(self.k_min.is_some(), "k-min"),
            present(self.k_max.is_some(), "k-max"),
            present(self.interaction_scale.is_some(), "interaction-scale"),
        ];
        let continuous = [
            present(self.g.is_some(), "g"),
            present(self.omega.is_some(), "omega"),
        ];
        let foreign: Vec<String> = match kind {
            ModelKind::ThreeSite | ModelKind::ThreeSiteFlow => {
                pancake.into_iter().chain(ring).chain(continuous).flatten().collect()
            }
            ModelKind::Pancake => three.into_iter().chain(ring).flatten().collect(),
            ModelKind::Ring => three.into_iter().chain(pancake).flatten().collect(),
        };
        if foreign.is_empty() {
            Ok(())
        } else {
            Err(CliError::config(format!(
                "parameters {} do not apply to the {} model",
                foreign
                    .iter()
                    .map(|f| format!("--{f}"))
                    .collect::<Vec<_>>()
                    .join(", "),
                kind.to_possible_value().expect("named variant").get_name()
            )))
        }
    }

    /// Fills every parameter the command reads with its default.
    pub fn resolve(mut self, command: Command) -> Result<Self, CliError> {
        if self.needs_model(command) {
            let kind = *self.model.get_or_insert(if command == Command::Protocol {
                ModelKind::Ring
            } else {
                ModelKind::ThreeSite
            });
            self.check_model_fields(kind)?;
            self.model_defaults(kind, command)?;
        }
        match command {
            Command::Spectrum => {
                self.k.get_or_insert(4);
            }
            Command::Groundstate => {}
            Command::Qfi => {
                self.state.get_or_insert_with(|| vec![StateKind::Noon]);
                let atoms = if self.model.is_some() {
                    self.n.unwrap_or(10)
                } else {
                    10
                };
                self.atoms.get_or_insert(atoms);
                self.loss.get_or_insert(GridSpec {
                    start: 0.0,
                    stop: DEFAULT_MAX_LOSS,
                    count: DEFAULT_LOSS_POINTS,
                });
            }
            Command::Protocol => {
                self.hold.get_or_insert(GridSpec {
                    start: 0.0,
                    stop: 40.0,
                    count: 401,
                });
                self.initial.get_or_insert(0.0);
                self.max_phase_step.get_or_insert(DEFAULT_MAX_PHASE_STEP);
                self.adiabaticity_floor
                    .get_or_insert(DEFAULT_ADIABATICITY_FLOOR);
                self.fringe_window.get_or_insert(Pair(0.05, 5.0));
                if self.model == Some(ModelKind::Ring) {
                    self.shift.get_or_insert(0.5 * PI);
                    self.ramp_up
                        .get_or_insert_with(|| Ramp(vec![(0.8 * PI, 20.0), (PI, 400.0)]));
                    self.ramp_down
                        .get_or_insert_with(|| Ramp(vec![(0.9 * PI, 400.0), (0.5 * PI, 20.0)]));
                    self.readout.get_or_insert(Readout(0, 1));
                }
                if self.model == Some(ModelKind::ThreeSite) {
                    return Err(CliError::config(
                        "the protocol reads out flow modes; use --model three-site-flow",
                    ));
                }
                for (set, name) in [
                    (self.shift.is_some(), "shift"),
                    (self.ramp_up.is_some(), "ramp-up"),
                    (self.readout.is_some(), "readout"),
                ] {
                    if !set {
                        return Err(CliError::config(format!(
                            "--{name} has no default for this model"
                        )));
                    }
                }
                self.ramp_down.get_or_insert(Ramp(Vec::new()));
            }
            Command::Anticrossing => {
                self.tol.get_or_insert(1e-10);
                self.select.get_or_insert(Select::Lowest);
            }
        }
        self.format.get_or_insert(match command {
            Command::Groundstate | Command::Anticrossing => Format::Json,
            _ => Format::Csv,
        });
        Ok(self)
    }

    fn model_defaults(&mut self, kind: ModelKind, command: Command) -> Result<(), CliError> {
        let protocol = command == Command::Protocol;
        match kind {
            ModelKind::ThreeSite | ModelKind::ThreeSiteFlow => {
                self.n.get_or_insert(3);
                self.j.get_or_insert(1.0);
                self.u.get_or_insert(1.0);
                self.phi.get_or_insert(match command {
                    Command::Spectrum => GridSpec {
                        start: 0.0,
                        stop: 2.0 * PI,
                        count: 201,
                    },
                    _ => GridSpec::point(PI),
                });
                if command == Command::Anticrossing {
                    self.bracket.get_or_insert(Pair(0.5 * PI, 1.5 * PI));
                }
            }
            ModelKind::Pancake => {
                let n = *self.n.get_or_insert(6);
                let g = *self.g.get_or_insert(0.5);
                self.a.get_or_insert(0.03);
                self.m_max.get_or_insert(n);
                let critical = critical_rotation_pancake(n, g);
                self.omega.get_or_insert(match command {
                    Command::Spectrum => GridSpec {
                        start: 0.6,
                        stop: 1.0,
                        count: 161,
                    },
                    _ => GridSpec::point(critical),
                });
                if command == Command::Anticrossing {
                    self.bracket.get_or_insert(Pair(0.6, 1.0));
                    self.select.get_or_insert(Select::First);
                }
            }
            ModelKind::Ring => {
                let n = *self.n.get_or_insert(if protocol { 1 } else { 3 });
                if protocol {
                    self.b.get_or_insert(0.05);
                    self.g.get_or_insert(1.0);
                    self.k_min.get_or_insert(-1);
                    self.k_max.get_or_insert(2);
                } else {
                    self.b.get_or_insert(0.008);
                    self.g
                        .get_or_insert(TONKS_INTERACTION_FIVE_ATOMS * n as f64 / 5.0);
                    self.k_min.get_or_insert(DEFAULT_K_MIN);
                    self.k_max.get_or_insert(DEFAULT_K_MAX);
                }
                self.interaction_scale.get_or_insert(1.0);
                self.omega.get_or_insert(match command {
                    Command::Spectrum => GridSpec {
                        start: 0.0,
                        stop: 2.0 * PI,
                        count: 101,
                    },
                    _ => GridSpec::point(PI),
                });
                if command == Command::Anticrossing {
                    self.bracket.get_or_insert(Pair(0.5 * PI, 1.5 * PI));
                }
            }
        }
        Ok(())
    }

    /// Name and grid of the rotation control of the resolved model.
    pub fn parameter(&self) -> Result<(&'static str, GridSpec), CliError> {
        match self.kind()? {
            ModelKind::ThreeSite | ModelKind::ThreeSiteFlow => Ok(("phi", self.phi.expect("resolved"))),
            ModelKind::Pancake | ModelKind::Ring => Ok(("omega", self.omega.expect("resolved"))),
        }
    }

    pub fn kind(&self) -> Result<ModelKind, CliError> {
        self.model
            .ok_or_else(|| CliError::config("this run needs --model"))
    }

    /// The resolved model at the first value of its parameter grid.
    pub fn build_model(&self) -> Result<Model, CliError> {
        let kind = self.kind()?;
        let (_, grid) = self.parameter()?;
        let n = self.n.expect("resolved");
        let model = match kind {
            ModelKind::ThreeSite | ModelKind::ThreeSiteFlow => {
                let p = ThreeSiteParams::new(
                    n,
                    self.j.expect("resolved"),
                    self.u.expect("resolved"),
                    grid.start,
                );
                p.validate()?;
                if kind == ModelKind::ThreeSite {
                    Model::ThreeSite(p)
                } else {
                    Model::ThreeSiteFlow(p)
                }
            }
            ModelKind::Pancake => {
                let p = PancakeParams::new(
                    n,
                    self.g.expect("resolved"),
                    self.a.expect("resolved"),
                    grid.start,
                )
                .with_cutoff(self.m_max.expect("resolved"), self.l_max);
                p.validate()?;
                Model::Pancake(p)
            }
            ModelKind::Ring => {
                let p = RingParams::new(
                    n,
                    self.b.expect("resolved"),
                    self.g.expect("resolved"),
                    grid.start,
                )
                .with_window(self.k_min.expect("resolved"), self.k_max.expect("resolved"))
                .with_interaction_scale(self.interaction_scale.expect("resolved"));
                p.validate()?;
                Model::Ring(p)
            }
        };
        Ok(model)
    }

    pub fn protocol_config(&self) -> ProtocolConfig {
        let Readout(first, second) = self.readout.expect("resolved");
        let mut c = ProtocolConfig::new(
            self.ramp_up.clone().expect("resolved").0,
            self.shift.expect("resolved"),
            self.ramp_down.clone().expect("resolved").0,
            (first, second),
        );
        c.initial_rotation = self.initial.expect("resolved");
        c.max_phase_step = self.max_phase_step.expect("resolved");
        c.adiabaticity_floor = self.adiabaticity_floor.expect("resolved");
        c
    }
}
