//! Python bindings for the rotometry toolkit.
//!
//! Models are built through the `Model` static constructors; every
//! computation returns plain Python numbers, lists and dicts except for
//! states, which stay wrapped as `PureState`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rotometry::dynamics::{self, ProtocolConfig};
use rotometry::fockspace;
use rotometry::metrology::{self, PhaseGenerator, SagnacQuery};
use rotometry::models::{self, Model as CoreModel, PancakeParams, RingParams, RotatingModel, ThreeSiteParams};
use rotometry::spectral::{self, AntiCrossing};
use rotometry::Complex64;

fn py_err(e: rotometry::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn generator(text: &str) -> PyResult<PhaseGenerator> {
    text.parse().map_err(py_err)
}

/// A many-body state in a Fock basis.
#[pyclass(name = "PureState", module = "rotometry_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPureState {
    inner: fockspace::PureState,
}

#[pymethods]
impl PyPureState {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn num_particles(&self) -> usize {
        self.inner.basis().num_particles()
    }

    #[getter]
    fn mode_labels(&self) -> Vec<i64> {
        self.inner.basis().modes().labels().to_vec()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().iter().copied().collect()
    }

    /// Occupation numbers of every basis state, in amplitude order.
    #[getter]
    fn fock_states(&self) -> Vec<Vec<u8>> {
        self.inner.basis().states().map(|s| s.to_vec()).collect()
    }

    #[getter]
    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities()
    }

    fn amplitude_of(&self, occupation: Vec<u8>) -> Complex64 {
        self.inner.amplitude_of(&occupation)
    }

    fn fidelity(&self, other: &PyPureState) -> PyResult<f64> {
        self.inner.fidelity(&other.inner).map_err(py_err)
    }

    /// Pure-state quantum Fisher information for generator `"L"` or `"n:<label>"`.
    #[pyo3(signature = (generator = "L"))]
    fn qfi(&self, generator: &str) -> PyResult<f64> {
        Ok(metrology::pure_qfi(&self.inner, &self::generator(generator)?))
    }

    /// Weights over the three flow modes; needs a `three_site(..., flow=True)` state.
    fn flow_weights<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let w = models::flow_weights(&self.inner).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("alpha_majority", w.alpha_majority)?;
        d.set_item("beta_majority", w.beta_majority)?;
        d.set_item("alpha_extreme", w.alpha_extreme)?;
        d.set_item("beta_extreme", w.beta_extreme)?;
        d.set_item("noon_overlap", w.noon_overlap)?;
        Ok(d)
    }

    /// Number distribution over the two most occupied natural orbitals.
    fn pair_distribution<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let p = models::dominant_pair_distribution(&self.inner).map_err(py_err)?;
        let (mean, variance) = p.moments();
        let d = PyDict::new(py);
        d.set_item("occupations", p.occupations.to_vec())?;
        d.set_item("probabilities", p.probabilities)?;
        d.set_item("weight", p.weight)?;
        d.set_item("mean", mean)?;
        d.set_item("variance", variance)?;
        Ok(d)
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!(
            "PureState(N={}, modes={:?}, dim={})",
            self.inner.basis().num_particles(),
            self.inner.basis().modes().labels(),
            self.inner.dim()
        )
    }
}

/// One of the rotating-trap Hamiltonians at a fixed rotation.
#[pyclass(name = "Model", module = "rotometry_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyModel {
    inner: CoreModel,
}

fn anticrossing_dict<'py>(py: Python<'py>, a: &AntiCrossing) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("location", a.location)?;
    d.set_item("gap", a.gap)?;
    d.set_item("bracket", a.bracket)?;
    d.set_item("converged", a.converged)?;
    d.set_item("avoided", a.avoided)?;
    Ok(d)
}

#[pymethods]
impl PyModel {
    /// Three-site ring lattice threaded by flux `phi`; `flow=True` works in
    /// the quasi-momentum basis.
    #[staticmethod]
    #[pyo3(signature = (n, tunneling = 1.0, interaction = 1.0, phi = std::f64::consts::PI, flow = false))]
    fn three_site(n: usize, tunneling: f64, interaction: f64, phi: f64, flow: bool) -> PyResult<Self> {
        let p = ThreeSiteParams::new(n, tunneling, interaction, phi);
        p.validate().map_err(py_err)?;
        let inner = if flow {
            CoreModel::ThreeSiteFlow(p)
        } else {
            CoreModel::ThreeSite(p)
        };
        Ok(Self { inner })
    }

    /// Rotating pancake in the lowest Landau level.
    #[staticmethod]
    #[pyo3(signature = (n, interaction = 1.0, asymmetry = 0.0, omega = 0.9, m_max = None, l_max = None))]
    fn pancake(
        n: usize,
        interaction: f64,
        asymmetry: f64,
        omega: f64,
        m_max: Option<usize>,
        l_max: Option<usize>,
    ) -> PyResult<Self> {
        let mut p = PancakeParams::new(n, interaction, asymmetry, omega);
        if m_max.is_some() || l_max.is_some() {
            p = p.with_cutoff(m_max.unwrap_or(p.m_max), l_max);
        }
        p.validate().map_err(py_err)?;
        Ok(Self {
            inner: CoreModel::Pancake(p),
        })
    }

    /// One-dimensional ring with a delta barrier, in plane-wave modes `k_min..=k_max`.
    #[staticmethod]
    #[pyo3(signature = (n, barrier = 0.05, interaction = 1.0, omega = std::f64::consts::PI,
                        k_min = models::DEFAULT_K_MIN, k_max = models::DEFAULT_K_MAX,
                        interaction_scale = 1.0))]
    fn ring(
        n: usize,
        barrier: f64,
        interaction: f64,
        omega: f64,
        k_min: i64,
        k_max: i64,
        interaction_scale: f64,
    ) -> PyResult<Self> {
        let p = RingParams::new(n, barrier, interaction, omega)
            .with_window(k_min, k_max)
            .with_interaction_scale(interaction_scale);
        p.validate().map_err(py_err)?;
        Ok(Self {
            inner: CoreModel::Ring(p),
        })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    #[getter]
    fn parameter(&self) -> &'static str {
        self.inner.parameter_name()
    }

    #[getter]
    fn rotation(&self) -> f64 {
        self.inner.rotation()
    }

    #[getter]
    fn unit(&self) -> &'static str {
        self.inner.energy_unit().tag()
    }

    #[getter]
    fn dim(&self) -> PyResult<usize> {
        Ok(self.inner.hamiltonian().map_err(py_err)?.dim())
    }

    fn with_rotation(&self, value: f64) -> Self {
        Self {
            inner: self.inner.with_rotation(value),
        }
    }

    /// Lowest `k` energies, ascending.
    #[pyo3(signature = (k = 4))]
    fn spectrum(&self, py: Python<'_>, k: usize) -> PyResult<Vec<f64>> {
        let h = self.inner.hamiltonian().map_err(py_err)?;
        let k = k.min(h.dim());
        py.detach(|| spectral::eigensolve(&h, k))
            .map(|p| p.values)
            .map_err(py_err)
    }

    /// `(energy, state, gap)` of the ground state.
    fn ground_state(&self, py: Python<'_>) -> PyResult<(f64, PyPureState, f64)> {
        let h = self.inner.hamiltonian().map_err(py_err)?;
        let g = py.detach(|| spectral::ground_state(&h)).map_err(py_err)?;
        Ok((g.energy, PyPureState { inner: g.state }, g.gap))
    }

    /// Lowest `k` levels at every grid point: a list of rows.
    #[pyo3(signature = (grid, k = 4))]
    fn sweep(&self, py: Python<'_>, grid: Vec<f64>, k: usize) -> PyResult<Vec<Vec<f64>>> {
        let model = self.inner;
        py.detach(|| spectral::sweep(&model, &grid, k, false))
            .map(|s| s.levels)
            .map_err(py_err)
    }

    /// Minimum of `E1 - E0` in `bracket`. By default the lowest gap in the
    /// bracket; `first=True` takes the first local minimum from below.
    #[pyo3(signature = (bracket, tol = 1e-6, first = false))]
    fn find_anticrossing<'py>(
        &self,
        py: Python<'py>,
        bracket: (f64, f64),
        tol: f64,
        first: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let model = self.inner;
        let a = py
            .detach(|| {
                if first {
                    spectral::find_first_anticrossing(&model, bracket, tol)
                } else {
                    spectral::find_anticrossing(&model, bracket, tol)
                }
            })
            .map_err(py_err)?;
        anticrossing_dict(py, &a)
    }

    /// Gyroscope protocol over hold times. Ramps are lists of
    /// `(target_rotation, duration)` segments.
    #[pyo3(signature = (holds, ramp_up, shift, ramp_down, readout_modes = (0, 1), initial_rotation = 0.0))]
    fn gyroscope_scan<'py>(
        &self,
        py: Python<'py>,
        holds: Vec<f64>,
        ramp_up: Vec<(f64, f64)>,
        shift: f64,
        ramp_down: Vec<(f64, f64)>,
        readout_modes: (i64, i64),
        initial_rotation: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let mut config = ProtocolConfig::new(ramp_up, shift, ramp_down, readout_modes);
        config.initial_rotation = initial_rotation;
        let model = self.inner;
        let results = py
            .detach(|| dynamics::gyroscope_scan(&model, &config, &holds))
            .map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("hold", results.iter().map(|r| r.hold).collect::<Vec<_>>())?;
        d.set_item("p_first", results.iter().map(|r| r.p_first).collect::<Vec<_>>())?;
        d.set_item("p_second", results.iter().map(|r| r.p_second).collect::<Vec<_>>())?;
        d.set_item("p_other", results.iter().map(|r| r.p_other).collect::<Vec<_>>())?;
        if let Some(r) = results.first() {
            d.set_item("min_overlap", r.adiabaticity.min_overlap)?;
            d.set_item("adiabaticity_warning", r.adiabaticity.warning)?;
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Model({}, {}={})",
            self.inner.name(),
            self.inner.parameter_name(),
            self.inner.rotation()
        )
    }
}

#[pyfunction]
fn noon_state(n: usize) -> PyResult<PyPureState> {
    Ok(PyPureState {
        inner: metrology::noon_state(n).map_err(py_err)?,
    })
}

#[pyfunction]
fn bat_state(n: usize) -> PyResult<PyPureState> {
    Ok(PyPureState {
        inner: metrology::bat_state(n).map_err(py_err)?,
    })
}

#[pyfunction]
fn unentangled_state(n: usize) -> PyResult<PyPureState> {
    Ok(PyPureState {
        inner: metrology::unentangled_state(n).map_err(py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (state, generator = "n:1"))]
fn pure_qfi(state: &PyPureState, generator: &str) -> PyResult<f64> {
    Ok(metrology::pure_qfi(&state.inner, &self::generator(generator)?))
}

/// Quantum Fisher information after losing each atom with probability `l`.
#[pyfunction]
#[pyo3(signature = (state, loss, generator = "n:1"))]
fn qfi_vs_loss(py: Python<'_>, state: &PyPureState, loss: Vec<f64>, generator: &str) -> PyResult<Vec<f64>> {
    let g = self::generator(generator)?;
    let s = &state.inner;
    py.detach(|| metrology::qfi_vs_loss(s, "state", &g, &loss))
        .map(|c| c.qfi)
        .map_err(py_err)
}

#[pyfunction]
fn critical_rotation_pancake(n: usize, interaction: f64) -> f64 {
    models::critical_rotation_pancake(n, interaction)
}

/// `Mc^2 / (hbar omega)` for atom mass in kg and photon wavelength in m.
#[pyfunction]
fn atom_photon_ratio(mass: f64, wavelength: f64) -> PyResult<f64> {
    metrology::atom_photon_ratio(mass, metrology::photon_angular_frequency(wavelength)).map_err(py_err)
}

/// Sagnac phase `4 pi Omega A / (lambda v)` in SI units.
#[pyfunction]
fn sagnac_phase(wavelength: f64, speed: f64, angular_velocity: f64, area: f64) -> PyResult<f64> {
    metrology::sagnac_phase(&SagnacQuery {
        wavelength,
        speed,
        angular_velocity,
        area,
        mass: 1.0,
        photon_frequency: 1.0,
    })
    .map_err(py_err)
}

#[pyfunction]
fn fringe_frequency(times: Vec<f64>, signal: Vec<f64>, omega_min: f64, omega_max: f64) -> PyResult<f64> {
    dynamics::fringe_frequency(&times, &signal, omega_min, omega_max).map_err(py_err)
}

#[pyfunction]
fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    spectral::linspace(start, stop, count)
}

#[pymodule]
fn rotometry_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyPureState>()?;
    m.add_function(wrap_pyfunction!(noon_state, m)?)?;
    m.add_function(wrap_pyfunction!(bat_state, m)?)?;
    m.add_function(wrap_pyfunction!(unentangled_state, m)?)?;
    m.add_function(wrap_pyfunction!(pure_qfi, m)?)?;
    m.add_function(wrap_pyfunction!(qfi_vs_loss, m)?)?;
    m.add_function(wrap_pyfunction!(critical_rotation_pancake, m)?)?;
    m.add_function(wrap_pyfunction!(atom_photon_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(sagnac_phase, m)?)?;
    m.add_function(wrap_pyfunction!(fringe_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(linspace, m)?)?;
    Ok(())
}
