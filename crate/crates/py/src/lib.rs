//! Python bindings: probes, unitary groups, binary discrimination, Gaussian
//! states and the Monte Carlo checks.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use entprobe::discrim::{self, CopiesOutcome};
use entprobe::gauss::{self, StateKind};
use entprobe::mc::{self, Scheme};
use entprobe::{ComplexMatrix, C64};

fn py_err(e: entprobe::Error) -> PyErr {
    match e {
        entprobe::Error::Numerical(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for entprobe::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_matrix(rows: Vec<Vec<C64>>) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).py()
}

fn from_matrix(m: &ComplexMatrix) -> Vec<Vec<C64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Bipartite pure probe `|E>> = sum E_ij |i>|j>`.
#[pyclass(name = "ProbeState", frozen, from_py_object)]
#[derive(Clone)]
struct PyProbe(entprobe::ProbeState);

#[pymethods]
impl PyProbe {
    /// Probe from its `d x d` operator, rescaled to unit norm.
    #[new]
    fn new(operator: Vec<Vec<C64>>) -> PyResult<Self> {
        Ok(Self(entprobe::ProbeState::normalize(to_matrix(operator)?).py()?))
    }

    #[staticmethod]
    fn maximally_entangled(d: usize) -> Self {
        Self(entprobe::ProbeState::maximally_entangled(d))
    }

    #[staticmethod]
    fn product(d: usize) -> Self {
        Self(entprobe::ProbeState::product(d))
    }

    #[staticmethod]
    fn from_schmidt_weights(weights: Vec<f64>) -> PyResult<Self> {
        Ok(Self(entprobe::ProbeState::from_schmidt_weights(&weights).py()?))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn operator(&self) -> Vec<Vec<C64>> {
        from_matrix(self.0.operator())
    }

    fn vector(&self) -> Vec<C64> {
        self.0.vector()
    }

    fn schmidt_coefficients(&self) -> Vec<f64> {
        self.0.schmidt_coefficients()
    }

    fn schmidt_rank(&self) -> usize {
        self.0.schmidt_rank()
    }

    fn entanglement_bits(&self) -> f64 {
        self.0.entanglement_bits()
    }

    fn __repr__(&self) -> String {
        format!("ProbeState(dim={}, schmidt_rank={})", self.0.dim(), self.0.schmidt_rank())
    }
}

/// Finite group of unitaries, closed up to phases.
#[pyclass(name = "UnitaryGroup", frozen)]
struct PyGroup(discrim::UnitaryGroup);

#[pymethods]
impl PyGroup {
    #[new]
    #[pyo3(signature = (elements, labels=None))]
    fn new(elements: Vec<Vec<Vec<C64>>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let mats = elements.into_iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        let labels = labels.unwrap_or_else(|| (0..mats.len()).map(|k| k.to_string()).collect());
        Ok(Self(discrim::UnitaryGroup::new(mats, labels).py()?))
    }

    #[staticmethod]
    fn pauli() -> Self {
        Self(discrim::pauli_group())
    }

    #[staticmethod]
    fn weyl_heisenberg(d: usize) -> PyResult<Self> {
        Ok(Self(discrim::weyl_heisenberg_group(d).py()?))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn is_irreducible(&self) -> bool {
        self.0.is_irreducible()
    }

    /// Gram matrix of the outputs `(U_g (x) I)|E>>`.
    fn output_gram(&self, probe: &PyProbe) -> PyResult<Vec<Vec<C64>>> {
        let outs = discrim::output_states(&self.0, &probe.0).py()?;
        Ok(from_matrix(&discrim::gram_matrix(&outs)))
    }

    fn output_span_dimension(&self, probe: &PyProbe) -> PyResult<usize> {
        discrim::output_span_dimension(&self.0, &probe.0).py()
    }

    fn holevo_chi(&self, probe: &PyProbe) -> PyResult<f64> {
        discrim::holevo_chi(&self.0, &probe.0).py()
    }

    /// Element-wise covariant POVM generated by `seed`.
    fn covariant_povm(&self, seed: Vec<Vec<C64>>) -> PyResult<Vec<Vec<Vec<C64>>>> {
        let povm = discrim::covariant_povm(&self.0, &to_matrix(seed)?).py()?;
        Ok(povm.iter().map(from_matrix).collect())
    }
}

/// Two unitaries with prior probabilities.
#[pyclass(name = "DiscriminationProblem", frozen)]
struct PyProblem(discrim::DiscriminationProblem);

#[pymethods]
impl PyProblem {
    #[new]
    #[pyo3(signature = (u1, u2, p1=0.5))]
    fn new(u1: Vec<Vec<C64>>, u2: Vec<Vec<C64>>, p1: f64) -> PyResult<Self> {
        Ok(Self(discrim::DiscriminationProblem::new(to_matrix(u1)?, to_matrix(u2)?, p1, 1.0 - p1).py()?))
    }

    /// Smallest achievable `|<psi|U2^dagger U1|psi>|`.
    fn min_overlap(&self) -> PyResult<f64> {
        Ok(discrim::min_overlap_r(&self.0.relative_unitary()).py()?.r)
    }

    fn spread(&self) -> PyResult<f64> {
        Ok(discrim::min_overlap_r(&self.0.relative_unitary()).py()?.spread)
    }

    fn optimal_input(&self) -> PyResult<Vec<C64>> {
        discrim::optimal_pair_input(&self.0.relative_unitary()).py()
    }

    /// Minimum error probability for a local input, or for a bipartite
    /// probe when `probe` is given.
    #[pyo3(signature = (psi=None, probe=None))]
    fn helstrom_error(&self, psi: Option<Vec<C64>>, probe: Option<PyProbe>) -> PyResult<f64> {
        let input = match (psi, probe) {
            (Some(v), None) => discrim::InputState::local(&v).py()?,
            (None, Some(p)) => discrim::InputState::Entangled(p.0),
            (None, None) => discrim::InputState::local(&discrim::optimal_pair_input(&self.0.relative_unitary()).py()?).py()?,
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give psi or probe, not both")),
        };
        discrim::helstrom_error(&self.0, &input).py()
    }

    /// Copies needed for perfect discrimination; `None` when unreachable
    /// within `n_max` or when the unitaries coincide up to phase.
    fn copies_for_perfect(&self, n_max: usize) -> PyResult<Option<usize>> {
        Ok(match discrim::copies_for_perfect(&self.0, n_max).py()? {
            CopiesOutcome::Perfect(n) => Some(n),
            _ => None,
        })
    }
}

/// Gaussian state of one or two modes (quadratures `x = (a + a^dagger)/2`).
#[pyclass(name = "GaussianState", frozen)]
struct PyGaussian(gauss::GaussianState);

#[pymethods]
impl PyGaussian {
    #[staticmethod]
    #[pyo3(signature = (modes=1))]
    fn vacuum(modes: usize) -> Self {
        Self(gauss::GaussianState::vacuum(modes))
    }

    #[staticmethod]
    fn coherent(alpha: C64) -> PyResult<Self> {
        Ok(Self(gauss::make_state(StateKind::Coherent(alpha)).py()?))
    }

    #[staticmethod]
    #[pyo3(signature = (s, x0=0.0))]
    fn squeezed(s: f64, x0: f64) -> PyResult<Self> {
        Ok(Self(gauss::make_state(StateKind::Squeezed { s, x0 }).py()?))
    }

    #[staticmethod]
    fn tmsv(x: f64) -> PyResult<Self> {
        Ok(Self(gauss::make_state(StateKind::Tmsv(x)).py()?))
    }

    #[getter]
    fn modes(&self) -> usize {
        self.0.modes()
    }

    fn mean(&self) -> Vec<f64> {
        self.0.mean().to_vec()
    }

    fn cov(&self) -> Vec<Vec<f64>> {
        let c = self.0.cov();
        (0..c.nrows()).map(|i| (0..c.ncols()).map(|j| c[(i, j)]).collect()).collect()
    }

    fn is_physical(&self) -> bool {
        self.0.is_physical()
    }

    fn mean_photon_number(&self) -> f64 {
        self.0.mean_photon_number()
    }

    fn quadrature_variance(&self, mode: usize, phi: f64) -> PyResult<f64> {
        self.0.quadrature_variance(mode, phi).py()
    }

    fn displace(&self, mode: usize, alpha: C64) -> PyResult<Self> {
        Ok(Self(self.0.displace(mode, alpha).py()?))
    }

    /// Random-displacement noise adding `nbar` photons to `mode`.
    fn apply_noise(&self, mode: usize, nbar: f64) -> PyResult<Self> {
        Ok(Self(self.0.apply_displacement_noise(mode, nbar).py()?))
    }

    fn symplectic_eigenvalues(&self) -> PyResult<Vec<f64>> {
        self.0.symplectic_eigenvalues().py()
    }

    /// `(separable, min symplectic eigenvalue of the partial transpose)`.
    fn ppt(&self) -> PyResult<(bool, f64)> {
        let r = gauss::ppt_separability(&self.0).py()?;
        Ok((r.separable, r.min_pt_symplectic_eigenvalue))
    }
}

#[pyfunction]
fn eig_unitary(u: Vec<Vec<C64>>) -> PyResult<(Vec<f64>, Vec<Vec<C64>>)> {
    let e = entprobe::linops::eig_unitary(&to_matrix(u)?).py()?;
    Ok((e.phases, from_matrix(&e.vectors)))
}

#[pyfunction]
fn helstrom_from_overlap(p1: f64, overlap: f64) -> f64 {
    discrim::helstrom_from_overlap(p1, 1.0 - p1, overlap)
}

#[pyfunction]
fn epr_variance(x: f64) -> PyResult<f64> {
    gauss::epr_variance(x).py()
}

#[pyfunction]
fn noise_thresholds(x: f64) -> PyResult<BTreeMap<&'static str, f64>> {
    let t = gauss::noise_thresholds(x).py()?;
    Ok(BTreeMap::from([
        ("x", t.x),
        ("delta_sq", t.delta_sq),
        ("advantage", t.advantage),
        ("separability", t.separability),
        ("separability_closed_form", t.separability_closed_form),
    ]))
}

fn report(r: mc::TrialReport) -> BTreeMap<&'static str, f64> {
    BTreeMap::from([
        ("trials", r.trials as f64),
        ("seed", r.seed as f64),
        ("empirical", r.empirical),
        ("analytic", r.analytic),
        ("standard_error", r.standard_error),
        ("z_score", r.z_score),
    ])
}

/// Monte Carlo heterodyne run; `scheme` is `"entangled"` or `"unentangled"`.
#[pyfunction]
#[pyo3(signature = (x, nbar, scheme="entangled", trials=100_000, seed=0, alpha=C64::new(0.0, 0.0)))]
fn sample_heterodyne(
    x: f64,
    nbar: f64,
    scheme: &str,
    trials: u64,
    seed: u64,
    alpha: C64,
) -> PyResult<BTreeMap<&'static str, f64>> {
    let scheme = match scheme {
        "entangled" => Scheme::Entangled,
        "unentangled" => Scheme::Unentangled,
        other => return Err(PyValueError::new_err(format!("unknown scheme '{other}'"))),
    };
    Ok(report(mc::sample_heterodyne(x, alpha, nbar, scheme, trials, seed).py()?))
}

/// Monte Carlo run of the Helstrom measurement for a local input.
#[pyfunction]
#[pyo3(signature = (problem, psi, trials=100_000, seed=0))]
fn sample_helstrom(
    problem: &PyProblem,
    psi: Vec<C64>,
    trials: u64,
    seed: u64,
) -> PyResult<BTreeMap<&'static str, f64>> {
    let input = discrim::InputState::local(&psi).py()?;
    Ok(report(mc::sample_helstrom(&problem.0, &input, trials, seed).py()?))
}

#[pyfunction]
fn stability_scan(s: f64, x: f64, phis: Vec<f64>) -> PyResult<Vec<BTreeMap<&'static str, f64>>> {
    Ok(mc::stability_scan(s, x, &phis)
        .py()?
        .into_iter()
        .map(|r| {
            BTreeMap::from([
                ("phi", r.phi),
                ("squeezed_variance", r.squeezed_variance),
                ("entangled_variance", r.entangled_variance),
                ("squeezed_relative", r.squeezed_relative),
                ("entangled_relative", r.entangled_relative),
                ("squeezed_photons", r.squeezed_photons),
                ("entangled_photons", r.entangled_photons),
            ])
        })
        .collect())
}

#[pymodule]
#[pyo3(name = "entprobe")]
fn entprobe_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProbe>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyGaussian>()?;
    m.add_function(wrap_pyfunction!(eig_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(helstrom_from_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(epr_variance, m)?)?;
    m.add_function(wrap_pyfunction!(noise_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(sample_heterodyne, m)?)?;
    m.add_function(wrap_pyfunction!(sample_helstrom, m)?)?;
    m.add_function(wrap_pyfunction!(stability_scan, m)?)?;
    Ok(())
}
