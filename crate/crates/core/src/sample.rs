//! Seeded random states, unitaries and Gaussian deviates.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linops::{c, inner, ComplexMatrix, ProbeState, C64};

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream for one trial: the stream id is the trial index,
/// so the draws of trial `t` do not depend on how trials are scheduled.
pub fn substream(seed: u64, trial: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Two independent standard normals by Box-Muller.
pub fn box_muller<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let radius = (-2.0 * u1.ln()).sqrt();
    let (s, co) = (2.0 * PI * u2).sin_cos();
    (radius * co, radius * s)
}

/// Complex Ginibre entry with unit variance.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let (a, b) = box_muller(rng);
    c(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn random_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    (0..d).map(|_| complex_normal(rng)).collect()
}

/// Haar-random pure state.
pub fn random_local_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v = random_vector(d, rng);
    let n = crate::linops::norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Haar-random unitary from Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(d, d, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = g.column(j);
        // two passes keep the columns orthonormal to round-off
        for _ in 0..2 {
            for q in &cols {
                let proj = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let n = crate::linops::norm(&v);
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Random full-rank density matrix `G G^dagger / Tr`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(d, d, rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m.scale_re(1.0 / tr).hermitian_part()
}

/// Random probe with Schmidt rank exactly `rank` (generically).
pub fn random_probe<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> ProbeState {
    assert!(rank >= 1 && rank <= d);
    let a = random_matrix(d, rank, rng);
    let b = random_matrix(rank, d, rng);
    ProbeState::normalize(a.matmul(&b)).expect("nonzero random operator")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let a: Vec<u64> = (0..8).map(|_| seeded(9).random()).collect();
        let b: Vec<u64> = (0..8).map(|_| seeded(9).random()).collect();
        assert_eq!(a, b);
        let s0: u64 = substream(9, 0).random();
        let s1: u64 = substream(9, 1).random();
        assert_ne!(s0, s1);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = seeded(11);
        for d in 1..7 {
            assert!(random_unitary(d, &mut rng).is_unitary(1e-12));
        }
    }

    #[test]
    fn random_probe_has_requested_rank() {
        let mut rng = seeded(12);
        for d in 2..5 {
            for r in 1..=d {
                assert_eq!(random_probe(d, r, &mut rng).schmidt_rank(), r);
            }
        }
    }

    #[test]
    fn box_muller_moments() {
        let mut rng = seeded(13);
        let n = 200_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n / 2 {
            let (a, b) = box_muller(&mut rng);
            s += a + b;
            s2 += a * a + b * b;
        }
        let mean = s / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01 && (var - 1.0).abs() < 0.01);
    }
}
