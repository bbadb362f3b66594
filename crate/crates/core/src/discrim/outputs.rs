//! Output ensembles `Psi_g = U_g E` of an entangled probe under a group.

use crate::discrim::group::UnitaryGroup;
use crate::error::{Error, Result};
use crate::linops::{
    count_above_relative, hs_inner, shannon_bits, validate_density, ComplexMatrix, ProbeState,
};

/// `(U (x) I)|E>>`, i.e. the probe with operator `U E`.
pub fn apply_local(u: &ComplexMatrix, e: &ProbeState) -> Result<ProbeState> {
    if u.cols() != e.dim() || !u.is_square() {
        return Err(Error::Shape(format!(
            "{}x{} unitary on a {}-dimensional probe",
            u.rows(),
            u.cols(),
            e.dim()
        )));
    }
    ProbeState::normalize(u.matmul(e.operator()))
}

fn check_dims(g: &UnitaryGroup, e: &ProbeState) -> Result<()> {
    if g.dim() != e.dim() {
        return Err(Error::Shape(format!(
            "group dimension {} vs probe dimension {}",
            g.dim(),
            e.dim()
        )));
    }
    Ok(())
}

pub fn output_states(g: &UnitaryGroup, e: &ProbeState) -> Result<Vec<ProbeState>> {
    check_dims(g, e)?;
    g.elements().iter().map(|u| apply_local(u, e)).collect()
}

/// Gram matrix `<<Psi_a|Psi_b>>` of a list of bipartite states.
pub fn gram_matrix(states: &[ProbeState]) -> ComplexMatrix {
    let n = states.len();
    ComplexMatrix::from_fn(n, n, |a, b| hs_inner(states[a].operator(), states[b].operator()))
}

/// Gram matrix of the local outputs `U_g |psi>`.
pub fn local_gram_matrix(g: &UnitaryGroup, psi: &[crate::linops::C64]) -> Result<ComplexMatrix> {
    let outs: Vec<Vec<_>> = g.elements().iter().map(|u| u.mul_vec(psi)).collect::<Result<_>>()?;
    let n = outs.len();
    Ok(ComplexMatrix::from_fn(n, n, |a, b| crate::linops::inner(&outs[a], &outs[b])))
}

/// Plain average `(1/|G|) sum_g |Psi_g>><<Psi_g|` on `H (x) H`.
pub fn average_output(g: &UnitaryGroup, e: &ProbeState) -> Result<ComplexMatrix> {
    let outs = output_states(g, e)?;
    let n = e.dim() * e.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for psi in &outs {
        let v = psi.vector();
        acc = &acc + &ComplexMatrix::outer(&v, &v);
    }
    Ok(acc.scale_re(1.0 / outs.len() as f64))
}

/// Dimension of the space spanned by the outputs, as the numerical rank of
/// the averaged output operator.
pub fn output_span_dimension(g: &UnitaryGroup, e: &ProbeState) -> Result<usize> {
    let o = average_output(g, e)?;
    let mut eigs = o.hermitian_eigenvalues()?;
    eigs.reverse();
    Ok(count_above_relative(&eigs))
}

/// Holevo quantity of the uniform ensemble `{Psi_g}` in bits, computed from
/// its definition `S(avg) - avg S(Psi_g)`.
pub fn holevo_chi(g: &UnitaryGroup, e: &ProbeState) -> Result<f64> {
    check_dims(g, e)?;
    g.require_irreducible()?;
    let avg = average_output(g, e)?;
    let s_avg = shannon_bits(&validate_density(&avg)?);
    let mut s_parts = 0.0;
    for psi in output_states(g, e)? {
        let v = psi.vector();
        s_parts += shannon_bits(&validate_density(&ComplexMatrix::outer(&v, &v))?);
    }
    Ok(s_avg - s_parts / g.len() as f64)
}

/// `log2 d + S(E^dagger E)`, the value `holevo_chi` reaches on irreducible groups.
pub fn holevo_chi_closed_form(e: &ProbeState) -> f64 {
    (e.dim() as f64).log2() + e.entanglement_bits()
}

/// `Omega(E) = Tr[(E^dagger E)^2]`, the purity of the reduced state.
pub fn schur_overlap_omega(e: &ProbeState) -> f64 {
    let r = e.reduced();
    r.matmul(&r).trace().re
}

/// Group-averaged squared overlap `(d/|G|) sum_g |<<Psi_g|E>>|^2`.
pub fn average_output_overlap(g: &UnitaryGroup, e: &ProbeState) -> Result<f64> {
    let outs = output_states(g, e)?;
    let sum: f64 = outs.iter().map(|p| hs_inner(p.operator(), e.operator()).norm_sqr()).sum();
    Ok(sum * e.dim() as f64 / g.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Majorization {
    /// `p` is majorized by `q`.
    Majorized,
    /// `p` majorizes `q`.
    Majorizes,
    Equal,
    Incomparable,
}

const MAJORIZATION_TOL: f64 = 1e-12;

/// Prefix-sum dominance of the descending rearrangements; shorter vectors
/// are padded with zeros.
pub fn majorization_compare(p: &[f64], q: &[f64]) -> Majorization {
    let sorted = |v: &[f64], n: usize| {
        let mut s = v.to_vec();
        s.resize(n, 0.0);
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    let n = p.len().max(q.len());
    let (p, q) = (sorted(p, n), sorted(q, n));
    let (mut sp, mut sq) = (0.0, 0.0);
    let (mut below, mut above) = (false, false);
    for k in 0..n {
        sp += p[k];
        sq += q[k];
        if sp < sq - MAJORIZATION_TOL {
            below = true;
        } else if sp > sq + MAJORIZATION_TOL {
            above = true;
        }
    }
    match (below, above) {
        (false, false) => Majorization::Equal,
        (true, false) => Majorization::Majorized,
        (false, true) => Majorization::Majorizes,
        (true, true) => Majorization::Incomparable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrim::group::{pauli_group, weyl_heisenberg_group};
    use crate::linops::paulis;
    use crate::sample::{random_local_state, random_probe, random_unitary, seeded};

    #[test]
    fn bell_outputs_are_orthonormal() {
        let outs = output_states(&pauli_group(), &ProbeState::maximally_entangled(2)).unwrap();
        assert!(gram_matrix(&outs).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        let x = apply_local(&paulis::x(), &ProbeState::maximally_entangled(2)).unwrap();
        assert!(x.operator().max_abs_diff(&paulis::x().scale_re(0.5f64.sqrt())) < 1e-15);
    }

    #[test]
    fn local_pauli_outputs_are_dependent() {
        let psi = random_local_state(2, &mut seeded(20));
        let gram = local_gram_matrix(&pauli_group(), &psi).unwrap();
        assert_eq!(gram.rank(), 2);
    }

    #[test]
    fn apply_local_identity_and_invariance() {
        let mut rng = seeded(21);
        let e = random_probe(3, 3, &mut rng);
        assert_eq!(apply_local(&ComplexMatrix::identity(3), &e).unwrap().operator().max_abs_diff(e.operator()), 0.0);
        let u = random_unitary(3, &mut rng);
        let s0 = e.schmidt_coefficients();
        let s1 = apply_local(&u, &e).unwrap().schmidt_coefficients();
        for (a, b) in s0.iter().zip(&s1) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(apply_local(&ComplexMatrix::identity(2), &e).is_err());
    }

    #[test]
    fn span_dimension_examples() {
        let g = pauli_group();
        assert_eq!(output_span_dimension(&g, &ProbeState::maximally_entangled(2)).unwrap(), 4);
        assert_eq!(output_span_dimension(&g, &ProbeState::product(2)).unwrap(), 2);
        let wh = weyl_heisenberg_group(3).unwrap();
        let e = random_probe(3, 2, &mut seeded(22));
        assert_eq!(output_span_dimension(&wh, &e).unwrap(), 6);
    }

    #[test]
    fn average_output_is_reduced_state_times_identity() {
        // O = I/d (x) (E^dagger E)^T with plain averaging
        let e = random_probe(3, 3, &mut seeded(23));
        let wh = weyl_heisenberg_group(3).unwrap();
        let o = average_output(&wh, &e).unwrap();
        let expected = crate::linops::kron(&ComplexMatrix::identity(3).scale_re(1.0 / 3.0), &e.reduced().transpose()).unwrap();
        assert!(o.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn holevo_examples() {
        let g = pauli_group();
        let chi = holevo_chi(&g, &ProbeState::maximally_entangled(2)).unwrap();
        assert!((chi - 2.0).abs() < 1e-10);
        let chi = holevo_chi(&g, &ProbeState::product(2)).unwrap();
        assert!((chi - 1.0).abs() < 1e-10);
        let e = ProbeState::from_schmidt_weights(&[0.9, 0.1]).unwrap();
        let h = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        assert!((holevo_chi(&g, &e).unwrap() - (1.0 + h)).abs() < 1e-8);
    }

    #[test]
    fn holevo_rejects_reducible_group() {
        let g = UnitaryGroup::new(vec![paulis::identity(), paulis::z()], vec!["I".into(), "Z".into()]).unwrap();
        let err = holevo_chi(&g, &ProbeState::maximally_entangled(2)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedRepresentation(_)));
    }

    #[test]
    fn omega_examples() {
        for d in 2..5 {
            let w = schur_overlap_omega(&ProbeState::maximally_entangled(d));
            assert!((w - 1.0 / d as f64).abs() < 1e-14);
            assert!((schur_overlap_omega(&ProbeState::product(d)) - 1.0).abs() < 1e-15);
        }
        let e = random_probe(3, 3, &mut seeded(24));
        let wh = weyl_heisenberg_group(3).unwrap();
        assert!((average_output_overlap(&wh, &e).unwrap() - schur_overlap_omega(&e)).abs() < 1e-12);
    }

    #[test]
    fn majorization_cases() {
        use Majorization::*;
        assert_eq!(majorization_compare(&[0.5, 0.5], &[1.0, 0.0]), Majorized);
        assert_eq!(majorization_compare(&[1.0], &[0.5, 0.5]), Majorizes);
        assert_eq!(majorization_compare(&[0.2, 0.8], &[0.8, 0.2]), Equal);
        assert_eq!(majorization_compare(&[0.6, 0.2, 0.2], &[0.5, 0.5, 0.0]), Incomparable);
    }
}
