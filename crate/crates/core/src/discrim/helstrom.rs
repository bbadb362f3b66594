//! Binary discrimination of two unitaries with a pure (possibly entangled) input.

use crate::error::{Error, Result};
use crate::linops::{inner, kron, normalized, ComplexMatrix, ProbeState, C64, EXACT_TOL};

#[derive(Clone, Debug)]
pub struct DiscriminationProblem {
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
    pub p1: f64,
    pub p2: f64,
}

impl DiscriminationProblem {
    pub fn new(u1: ComplexMatrix, u2: ComplexMatrix, p1: f64, p2: f64) -> Result<Self> {
        if u1.rows() != u2.rows() || !u1.is_square() || !u2.is_square() {
            return Err(Error::Shape("unitaries must be square with equal dimension".into()));
        }
        if !u1.is_unitary(EXACT_TOL) || !u2.is_unitary(EXACT_TOL) {
            return Err(Error::Domain("hypotheses must be unitary".into()));
        }
        if !(p1 >= 0.0 && p2 >= 0.0 && (p1 + p2 - 1.0).abs() <= EXACT_TOL) {
            return Err(Error::Domain(format!("priors ({p1}, {p2}) are not a distribution")));
        }
        Ok(Self { u1, u2, p1, p2 })
    }

    pub fn equal_priors(u1: ComplexMatrix, u2: ComplexMatrix) -> Result<Self> {
        Self::new(u1, u2, 0.5, 0.5)
    }

    pub fn dim(&self) -> usize {
        self.u1.rows()
    }

    /// `W = U2^dagger U1`.
    pub fn relative_unitary(&self) -> ComplexMatrix {
        self.u2.adjoint().matmul(&self.u1)
    }
}

/// Probe fed to the unknown unitary: a local vector, or a bipartite state
/// with the unitary acting on its first factor.
#[derive(Clone, Debug)]
pub enum InputState {
    Local(Vec<C64>),
    Entangled(ProbeState),
}

impl InputState {
    pub fn local(psi: &[C64]) -> Result<Self> {
        Ok(Self::Local(normalized(psi)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Local(v) => v.len(),
            Self::Entangled(p) => p.dim(),
        }
    }

    /// State vector after applying `u` to the probed factor.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Vec<C64>> {
        match self {
            Self::Local(v) => u.mul_vec(v),
            Self::Entangled(p) => crate::discrim::outputs::apply_local(u, p).map(|q| q.vector()),
        }
    }

    /// The operator `u` extended to the full input space.
    pub fn extend(&self, u: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            Self::Local(_) => Ok(u.clone()),
            Self::Entangled(p) => kron(u, &ComplexMatrix::identity(p.dim())),
        }
    }
}

/// `<psi| U2^dagger U1 |psi>`.
pub fn output_overlap(p: &DiscriminationProblem, input: &InputState) -> Result<C64> {
    if input.dim() != p.dim() {
        return Err(Error::Shape(format!("input dimension {} vs {}", input.dim(), p.dim())));
    }
    let a = input.evolve(&p.u2)?;
    let b = input.evolve(&p.u1)?;
    Ok(inner(&a, &b))
}

/// `P_E = (1 - sqrt(1 - 4 p1 p2 |overlap|^2)) / 2`.
pub fn helstrom_from_overlap(p1: f64, p2: f64, overlap_modulus: f64) -> f64 {
    let arg = (1.0 - 4.0 * p1 * p2 * overlap_modulus * overlap_modulus).max(0.0);
    (0.5 * (1.0 - arg.sqrt())).clamp(0.0, 0.5)
}

pub fn helstrom_error(p: &DiscriminationProblem, input: &InputState) -> Result<f64> {
    let ov = output_overlap(p, input)?;
    Ok(helstrom_from_overlap(p.p1, p.p2, ov.norm()))
}

/// Optimal binary measurement for two pure states: the projector onto the
/// positive part of `p1 |a><a| - p2 |b><b|` announces hypothesis one.
#[derive(Clone, Debug)]
pub struct HelstromMeasurement {
    pub accept_first: ComplexMatrix,
    /// Probability of announcing hypothesis one given each true hypothesis.
    pub prob_first_given: [f64; 2],
}

impl HelstromMeasurement {
    pub fn error_probability(&self, p1: f64, p2: f64) -> f64 {
        p1 * (1.0 - self.prob_first_given[0]) + p2 * self.prob_first_given[1]
    }
}

pub fn helstrom_measurement(p: &DiscriminationProblem, input: &InputState) -> Result<HelstromMeasurement> {
    let a = input.evolve(&p.u1)?;
    let b = input.evolve(&p.u2)?;
    let gamma = &ComplexMatrix::outer(&a, &a).scale_re(p.p1) - &ComplexMatrix::outer(&b, &b).scale_re(p.p2);
    let (vals, vecs) = gamma.hermitian_eigen()?;
    let n = a.len();
    let mut proj = ComplexMatrix::zeros(n, n);
    for (k, &v) in vals.iter().enumerate() {
        if v > EXACT_TOL {
            let col = vecs.column(k);
            proj = &proj + &ComplexMatrix::outer(&col, &col);
        }
    }
    let q1 = proj.sandwich(&a, &a)?.re.clamp(0.0, 1.0);
    let q2 = proj.sandwich(&b, &b)?.re.clamp(0.0, 1.0);
    Ok(HelstromMeasurement { accept_first: proj, prob_first_given: [q1, q2] })
}
