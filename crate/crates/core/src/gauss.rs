//! Gaussian states of one or two bosonic modes in the covariance picture.
//!
//! Quadratures are `X = (a + a^dagger)/2` and `P = (a - a^dagger)/2i`, so
//! `[X, P] = i/2` and the vacuum has covariance `I/4`. Phase-space vectors
//! are ordered `(x1, p1, x2, p2)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linops::{ComplexMatrix, C64};

pub const VACUUM_VARIANCE: f64 = 0.25;
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const PHYSICALITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    mean: Vec<f64>,
    /// Covariance before displacement noise.
    base_cov: DMatrix<f64>,
    /// Accumulated displacement-noise photon number per mode.
    noise: Vec<f64>,
}

/// Preparation recipes for the probes used here.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateKind {
    Vacuum,
    Coherent(C64),
    /// Single mode squeezed along `X` by `s`, then carrying amplitude `x0`.
    Squeezed { s: f64, x0: f64 },
    /// Two-mode squeezed vacuum `sqrt(1-x^2) sum_n x^n |n>|n>`.
    Tmsv(f64),
}

/// Symplectic form with blocks `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        om[(2 * k, 2 * k + 1)] = 1.0;
        om[(2 * k + 1, 2 * k)] = -1.0;
    }
    om
}

/// `(1 - |x|) / (1 + |x|)`, the EPR-quadrature noise of `tmsv(x)`.
pub fn epr_variance(x: f64) -> Result<f64> {
    check_tmsv_param(x)?;
    Ok((1.0 - x.abs()) / (1.0 + x.abs()))
}

fn check_tmsv_param(x: f64) -> Result<()> {
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(Error::Domain(format!("two-mode squeezing parameter |x| = {} must be < 1", x.abs())));
    }
    Ok(())
}

pub fn make_state(kind: StateKind) -> Result<GaussianState> {
    match kind {
        StateKind::Vacuum => Ok(GaussianState::vacuum(1)),
        StateKind::Coherent(alpha) => GaussianState::vacuum(1).displace(0, alpha),
        StateKind::Squeezed { s, x0 } => {
            if !s.is_finite() || !x0.is_finite() {
                return Err(Error::Domain("squeezing parameters must be finite".into()));
            }
            let cov = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                VACUUM_VARIANCE * (-2.0 * s).exp(),
                VACUUM_VARIANCE * (2.0 * s).exp(),
            ]));
            GaussianState::new(vec![x0 * (-s).exp(), 0.0], cov)
        }
        StateKind::Tmsv(x) => {
            check_tmsv_param(x)?;
            let r = x.abs().atanh();
            let a = VACUUM_VARIANCE * (2.0 * r).cosh();
            let c = VACUUM_VARIANCE * (2.0 * r).sinh();
            #[rustfmt::skip]
            let cov = DMatrix::from_row_slice(4, 4, &[
                a, 0.0, c, 0.0,
                0.0, a, 0.0, -c,
                c, 0.0, a, 0.0,
                0.0, -c, 0.0, a,
            ]);
            GaussianState::new(vec![0.0; 4], cov)
        }
    }
}

impl GaussianState {
    /// Validates symmetry and the uncertainty principle.
    pub fn new(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let state = Self::unchecked(mean, cov)?;
        let min = state.physicality_margin()?;
        if min < -PHYSICALITY_TOL {
            return Err(Error::Domain(format!("unphysical covariance (min eigenvalue of V + i Omega/4 is {min:e})")));
        }
        Ok(state)
    }

    fn unchecked(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = mean.len();
        if n == 0 || !n.is_multiple_of(2) || n > 4 {
            return Err(Error::Shape(format!("{n} phase-space coordinates; expected 2 or 4")));
        }
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::Shape(format!("covariance is {}x{}, expected {n}x{n}", cov.nrows(), cov.ncols())));
        }
        if (&cov - cov.transpose()).amax() > SYMMETRY_TOL {
            return Err(Error::Domain("covariance is not symmetric".into()));
        }
        let noise = vec![0.0; n / 2];
        Ok(Self { mean, base_cov: cov, noise })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            mean: vec![0.0; 2 * modes],
            base_cov: DMatrix::identity(2 * modes, 2 * modes) * VACUUM_VARIANCE,
            noise: vec![0.0; modes],
        }
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> DMatrix<f64> {
        let mut cov = self.base_cov.clone();
        for (k, n) in self.noise.iter().enumerate() {
            cov[(2 * k, 2 * k)] += n / 2.0;
            cov[(2 * k + 1, 2 * k + 1)] += n / 2.0;
        }
        cov
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes() {
            return Err(Error::Shape(format!("mode {mode} out of range for {} modes", self.modes())));
        }
        Ok(())
    }

    /// Smallest eigenvalue of `V + (i/4) Omega`; nonnegative for physical states.
    pub fn physicality_margin(&self) -> Result<f64> {
        let n = self.mean.len();
        let om = symplectic_form(self.modes());
        let cov = self.cov();
        let m = ComplexMatrix::from_fn(n, n, |i, j| C64::new(cov[(i, j)], VACUUM_VARIANCE * om[(i, j)]));
        Ok(m.hermitian_eigenvalues()?[0])
    }

    pub fn is_physical(&self) -> bool {
        self.physicality_margin().map(|m| m >= -PHYSICALITY_TOL).unwrap_or(false)
    }

    /// Product state `self (x) other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.mean.len();
        let m = other.mean.len();
        let mut cov = DMatrix::zeros(n + m, n + m);
        cov.view_mut((0, 0), (n, n)).copy_from(&self.cov());
        cov.view_mut((n, n), (m, m)).copy_from(&other.cov());
        let mut mean = self.mean.clone();
        mean.extend_from_slice(&other.mean);
        Self::unchecked(mean, cov)
    }

    /// `D(alpha)` on one mode: the mean moves by `(Re alpha, Im alpha)`.
    pub fn displace(&self, mode: usize, alpha: C64) -> Result<Self> {
        self.check_mode(mode)?;
        let mut out = self.clone();
        out.mean[2 * mode] += alpha.re;
        out.mean[2 * mode + 1] += alpha.im;
        Ok(out)
    }

    /// Gaussian displacement noise of mean thermal photon number `nbar`:
    /// the mode's covariance gains `(nbar/2) I`. Noise is accumulated as a
    /// photon number, so successive applications compose exactly.
    pub fn apply_displacement_noise(&self, mode: usize, nbar: f64) -> Result<Self> {
        self.check_mode(mode)?;
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(Error::Domain(format!("noise photon number {nbar} must be finite and >= 0")));
        }
        let mut out = self.clone();
        out.noise[mode] += nbar;
        Ok(out)
    }

    pub fn apply_noise(&self, noise: &NoiseSpec) -> Result<Self> {
        if noise.nbar_per_mode.len() != self.modes() {
            return Err(Error::Shape(format!(
                "noise given for {} modes, state has {}",
                noise.nbar_per_mode.len(),
                self.modes()
            )));
        }
        noise
            .nbar_per_mode
            .iter()
            .enumerate()
            .try_fold(self.clone(), |st, (k, &n)| st.apply_displacement_noise(k, n))
    }

    /// Variance of `X_phi = X cos(phi) + P sin(phi)` on one mode.
    pub fn quadrature_variance(&self, mode: usize, phi: f64) -> Result<f64> {
        self.check_mode(mode)?;
        let (s, c) = phi.sin_cos();
        let (i, j) = (2 * mode, 2 * mode + 1);
        let cov = self.cov();
        Ok(c * c * cov[(i, i)] + s * s * cov[(j, j)] + 2.0 * s * c * cov[(i, j)])
    }

    /// `<a^dagger a>` summed over modes.
    pub fn mean_photon_number(&self) -> f64 {
        let cov = self.cov();
        (0..self.modes())
            .map(|k| {
                let (i, j) = (2 * k, 2 * k + 1);
                cov[(i, i)] + cov[(j, j)] + self.mean[i].powi(2) + self.mean[j].powi(2) - 0.5
            })
            .sum()
    }

    /// Covariance after transposing one mode (`p -> -p`). The result need
    /// not be a physical state, so only the matrix is returned.
    pub fn partial_transpose_cov(&self, mode: usize) -> Result<DMatrix<f64>> {
        self.check_mode(mode)?;
        let mut t = DMatrix::identity(self.mean.len(), self.mean.len());
        t[(2 * mode + 1, 2 * mode + 1)] = -1.0;
        Ok(&t * self.cov() * &t)
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.cov())
    }
}

/// Symplectic eigenvalues of a positive-definite covariance, ascending, as
/// the positive eigenvalues of the Hermitian `i V^{1/2} Omega V^{1/2}`.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = cov.nrows();
    if !n.is_multiple_of(2) || cov.ncols() != n {
        return Err(Error::Shape("covariance must be 2n x 2n".into()));
    }
    let eig = SymmetricEigen::new(cov.clone());
    if eig.eigenvalues.iter().any(|&v| v <= 0.0) {
        return Err(Error::Domain("covariance is not positive definite".into()));
    }
    let sqrt_d = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_d * eig.eigenvectors.transpose();
    let k = &root * symplectic_form(n / 2) * &root;
    let h = ComplexMatrix::from_fn(n, n, |i, j| C64::new(0.0, k[(i, j)]));
    let vals = h.hermitian_eigenvalues()?;
    Ok(vals[n / 2..].to_vec())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoiseSpec {
    pub nbar_per_mode: Vec<f64>,
}

impl NoiseSpec {
    pub fn new(nbar_per_mode: Vec<f64>) -> Result<Self> {
        if nbar_per_mode.iter().any(|&n| !n.is_finite() || n < 0.0) {
            return Err(Error::Domain("noise photon numbers must be finite and >= 0".into()));
        }
        Ok(Self { nbar_per_mode })
    }

    pub fn none(modes: usize) -> Self {
        Self { nbar_per_mode: vec![0.0; modes] }
    }

    pub fn uniform(modes: usize, nbar: f64) -> Result<Self> {
        Self::new(vec![nbar; modes])
    }
}

/// Gaussian law of the heterodyne outcome `z = Re Z + i Im Z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeterodyneLaw {
    pub center: C64Ser,
    /// Covariance of `(Re z, Im z)`.
    pub cov: [[f64; 2]; 2],
}

/// Serializable complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct C64Ser {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for C64Ser {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl HeterodyneLaw {
    /// `E|z - center|^2`, the complex-plane variance.
    pub fn delta_sq(&self) -> f64 {
        self.cov[0][0] + self.cov[1][1]
    }

    pub fn center(&self) -> C64 {
        C64::new(self.center.re, self.center.im)
    }

    /// Density of `z`; for isotropic laws `(pi d^2)^{-1} exp(-|z - c|^2 / d^2)`.
    pub fn density(&self, z: C64) -> f64 {
        let [[a, b], [_, d]] = self.cov;
        let det = a * d - b * b;
        let w = z - self.center();
        let q = (d * w.re * w.re - 2.0 * b * w.re * w.im + a * w.im * w.im) / det;
        (-0.5 * q).exp() / (2.0 * PI * det.sqrt())
    }
}

/// Joint measurement of `Re Z = X1 - X2` and `Im Z = P1 + P2` with
/// `Z = a (x) I - I (x) a^dagger`, after displacing mode 1 by `alpha` and
/// applying the noise.
pub fn epr_heterodyne(g: &GaussianState, alpha: C64, noise: &NoiseSpec) -> Result<HeterodyneLaw> {
    if g.modes() != 2 {
        return Err(Error::Shape(format!("EPR heterodyne needs two modes, got {}", g.modes())));
    }
    let st = g.displace(0, alpha)?.apply_noise(noise)?;
    // rows pick out X1 - X2 and P1 + P2
    let m = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
    let c = &m * st.cov() * m.transpose();
    let mu = &m * nalgebra::DVector::from_column_slice(st.mean());
    Ok(HeterodyneLaw {
        center: C64::new(mu[0], mu[1]).into(),
        cov: [[c[(0, 0)], c[(0, 1)]], [c[(1, 0)], c[(1, 1)]]],
    })
}

/// Heterodyne detection of a single-mode probe: the conjugate port is a
/// vacuum ancilla, and the noise acts on the probed mode only.
pub fn unentangled_heterodyne(g: &GaussianState, alpha: C64, nbar: f64) -> Result<HeterodyneLaw> {
    if g.modes() != 1 {
        return Err(Error::Shape(format!("single-mode probe expected, got {} modes", g.modes())));
    }
    let joint = g.tensor(&GaussianState::vacuum(1))?;
    epr_heterodyne(&joint, alpha, &NoiseSpec::new(vec![nbar, 0.0])?)
}

/// Variance of `Re(e^{-i phi} Z)` for a two-mode state, doubled so that it
/// reads as a complex-plane variance for isotropic laws.
pub fn epr_rotated_variance(g: &GaussianState, phi: f64) -> Result<f64> {
    if g.modes() != 2 {
        return Err(Error::Shape("EPR quadrature needs two modes".into()));
    }
    let (s, c) = phi.sin_cos();
    // Re(e^{-i phi} Z) = cos(phi) (X1 - X2) + sin(phi) (P1 + P2)
    let v = nalgebra::DVector::from_vec(vec![c, s, -c, s]);
    Ok(2.0 * (v.transpose() * g.cov() * &v)[(0, 0)])
}

/// Noise level at which the entangled and vacuum heterodyne schemes tie:
/// `Delta^2 + 2 n = 1 + n`, so `n = 1 - Delta^2`.
pub fn advantage_threshold(x: f64) -> Result<f64> {
    Ok(1.0 - epr_variance(x)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PptReport {
    pub separable: bool,
    pub min_pt_symplectic_eigenvalue: f64,
}

/// Peres-Horodecki-Simon test: transposing mode 2 must leave a physical
/// covariance (all symplectic eigenvalues at least 1/4).
pub fn ppt_separability(g: &GaussianState) -> Result<PptReport> {
    if g.modes() != 2 {
        return Err(Error::Shape("PPT test needs two modes".into()));
    }
    if !g.is_physical() {
        return Err(Error::Domain("PPT test needs a physical state".into()));
    }
    let pt = g.partial_transpose_cov(1)?;
    let nu = symplectic_eigenvalues(&pt)?[0];
    Ok(PptReport { separable: nu >= VACUUM_VARIANCE - PHYSICALITY_TOL, min_pt_symplectic_eigenvalue: nu })
}

/// `tmsv(x)` with noise `nbar` on each mode.
pub fn noisy_tmsv(x: f64, nbar: f64) -> Result<GaussianState> {
    make_state(StateKind::Tmsv(x))?.apply_noise(&NoiseSpec::uniform(2, nbar)?)
}

/// Per-mode noise at which `tmsv(x)` becomes separable, found by bisection
/// on the numerically computed PT symplectic eigenvalue.
pub fn separability_noise_boundary(x: f64) -> Result<f64> {
    check_tmsv_param(x)?;
    let gap = |n: f64| -> Result<f64> {
        Ok(ppt_separability(&noisy_tmsv(x, n)?)?.min_pt_symplectic_eigenvalue - VACUUM_VARIANCE)
    };
    if gap(0.0)? >= 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while gap(hi)? < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed form of the PT symplectic eigenvalue of noisy `tmsv(x)`:
/// `e^{-2r}/4 + nbar/2`.
pub fn tmsv_pt_symplectic_closed_form(x: f64, nbar: f64) -> Result<f64> {
    Ok(epr_variance(x)? * VACUUM_VARIANCE + nbar / 2.0)
}

/// The two noise boundaries of the entangled heterodyne scheme side by side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseThresholds {
    pub x: f64,
    pub delta_sq: f64,
    /// Total noise `nbar_T` above which the vacuum probe does better.
    pub advantage: f64,
    /// Per-mode noise at which the probe becomes separable (numerical).
    pub separability: f64,
    /// `(1 - Delta^2)/2`.
    pub separability_closed_form: f64,
}

pub fn noise_thresholds(x: f64) -> Result<NoiseThresholds> {
    let delta_sq = epr_variance(x)?;
    Ok(NoiseThresholds {
        x,
        delta_sq,
        advantage: advantage_threshold(x)?,
        separability: separability_noise_boundary(x)?,
        separability_closed_form: (1.0 - delta_sq) / 2.0,
    })
}

/// Mean photon number needed to prepare a probe.
pub fn photon_budget(kind: StateKind) -> Result<f64> {
    match kind {
        StateKind::Vacuum => Ok(0.0),
        StateKind::Coherent(alpha) => Ok(alpha.norm_sqr()),
        StateKind::Squeezed { s, .. } => Ok(s.sinh().powi(2)),
        StateKind::Tmsv(x) => {
            check_tmsv_param(x)?;
            Ok(2.0 * x * x / (1.0 - x * x))
        }
    }
}

/// `x` giving a two-mode probe the same photon budget `n`: `x^2 = n/(n+2)`.
pub fn tmsv_param_for_budget(n: f64) -> Result<f64> {
    if !n.is_finite() || n < 0.0 {
        return Err(Error::Domain(format!("photon budget {n} must be finite and >= 0")));
    }
    Ok((n / (n + 2.0)).sqrt())
}
