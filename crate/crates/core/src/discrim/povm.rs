//! Covariant POVMs generated from a seed operator on `H (x) H`.

use crate::discrim::group::{UnitaryGroup, GROUP_TOL};
use crate::error::{Error, Result};
use crate::linops::{kron, partial_trace, ComplexMatrix, ProbeState, Side, C64, EXACT_TOL};

/// Checks `S >= 0` and `Tr_1[S] = I`.
pub fn validate_seed(seed: &ComplexMatrix, d: usize) -> Result<()> {
    if seed.rows() != d * d || !seed.is_square() {
        return Err(Error::Shape(format!("seed must be {0}x{0}", d * d)));
    }
    if !seed.is_hermitian(GROUP_TOL) {
        return Err(Error::Domain("seed is not Hermitian".into()));
    }
    let min = seed.hermitian_eigenvalues()?[0];
    if min < -EXACT_TOL {
        return Err(Error::Domain(format!("seed has negative eigenvalue {min}")));
    }
    let tr1 = partial_trace(seed, d, d, Side::First)?;
    let dev = tr1.max_abs_diff(&ComplexMatrix::identity(d));
    if dev > GROUP_TOL {
        return Err(Error::Domain(format!("Tr_1[S] deviates from I by {dev:e}")));
    }
    Ok(())
}

/// `Pi_g = (d/|G|) (U_g (x) I) S (U_g^dagger (x) I)`.
pub fn covariant_povm(g: &UnitaryGroup, seed: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
    let d = g.dim();
    validate_seed(seed, d)?;
    g.require_irreducible()?;
    let id = ComplexMatrix::identity(d);
    let weight = d as f64 / g.len() as f64;
    g.elements()
        .iter()
        .map(|u| {
            let big = kron(u, &id)?;
            Ok(big.matmul(seed).matmul(&big.adjoint()).scale_re(weight))
        })
        .collect()
}

/// `<<E|S|E>>`, the average likelihood of the covariant POVM built from `S`.
pub fn average_likelihood(seed: &ComplexMatrix, e: &ProbeState) -> Result<f64> {
    let v = e.vector();
    if seed.rows() != v.len() || !seed.is_square() {
        return Err(Error::Shape(format!("seed must be {0}x{0}", v.len())));
    }
    Ok(seed.sandwich(&v, &v)?.re)
}

/// `|U>><<U|`, a valid seed for any unitary `U`.
pub fn unitary_seed(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let v = crate::linops::vectorize(u)?;
    Ok(ComplexMatrix::outer(&v, &v))
}

/// Rescales a positive operator `T` to `(I (x) B) T (I (x) B^dagger)` with
/// `B = (Tr_1 T)^{-1/2}`, so that the result satisfies `Tr_1 = I`.
pub fn normalize_seed(t: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let m = partial_trace(t, d, d, Side::First)?;
    let (vals, vecs) = m.hermitian_eigen()?;
    if vals[0] <= EXACT_TOL {
        return Err(Error::Domain("Tr_1[T] is singular".into()));
    }
    let inv_sqrt: Vec<C64> = vals.iter().map(|v| C64::new(v.powf(-0.5), 0.0)).collect();
    let b = vecs.matmul(&ComplexMatrix::from_diag(&inv_sqrt)).matmul(&vecs.adjoint());
    let big = kron(&ComplexMatrix::identity(d), &b)?;
    Ok(big.matmul(t).matmul(&big.adjoint()).hermitian_part())
}

/// `Tr[Pi rho]` for each element.
pub fn outcome_probabilities(povm: &[ComplexMatrix], state: &[C64]) -> Result<Vec<f64>> {
    povm.iter().map(|p| Ok(p.sandwich(state, state)?.re)).collect()
}
