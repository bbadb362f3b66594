use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linops::{c, hs_inner, paulis, ComplexMatrix, C64, EXACT_TOL};
use crate::sample::{random_matrix, seeded};

/// Tolerance for closure up to phase and the twirling certificate.
pub const GROUP_TOL: f64 = 1e-8;

const CERTIFICATE_SEED: u64 = 0x5eed_c3a7;
const CERTIFICATE_SAMPLES: usize = 5;

/// A finite projective unitary representation: `U_g U_h = w(g,h) U_k`.
#[derive(Clone, Debug)]
pub struct UnitaryGroup {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
    /// `table[g][h] = (k, w(g,h))`.
    table: Vec<Vec<(usize, C64)>>,
}

impl UnitaryGroup {
    pub fn new(elements: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::Domain("a group needs at least one element".into()))?;
        let dim = first.rows();
        if labels.len() != elements.len() {
            return Err(Error::Shape("one label per element required".into()));
        }
        for (u, l) in elements.iter().zip(&labels) {
            if u.rows() != dim || !u.is_square() {
                return Err(Error::Shape(format!("element {l} is not {dim}x{dim}")));
            }
            if !u.is_unitary(EXACT_TOL) {
                return Err(Error::Domain(format!("element {l} is not unitary")));
            }
        }
        let table = closure_table(&elements)?;
        Ok(Self { dim, elements, labels, table })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `(k, w)` with `U_g U_h = w U_k`.
    pub fn cocycle(&self, g: usize, h: usize) -> (usize, C64) {
        self.table[g][h]
    }

    /// Plain group average `(1/|G|) sum_g U_g M U_g^dagger`.
    pub fn twirl(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.dim || !m.is_square() {
            return Err(Error::Shape(format!("twirl needs a {0}x{0} operator", self.dim)));
        }
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for u in &self.elements {
            acc = &acc + &u.matmul(m).matmul(&u.adjoint());
        }
        Ok(acc.scale_re(1.0 / self.len() as f64))
    }

    /// Irreducibility certificate: the twirl of each of a few fixed random
    /// operators must equal `Tr[M] I / d`.
    pub fn is_irreducible(&self) -> bool {
        let mut rng = seeded(CERTIFICATE_SEED);
        (0..CERTIFICATE_SAMPLES).all(|_| {
            let m = random_matrix(self.dim, self.dim, &mut rng);
            let target = ComplexMatrix::identity(self.dim).scale(m.trace() / self.dim as f64);
            self.twirl(&m)
                .map(|t| t.max_abs_diff(&target) <= GROUP_TOL)
                .unwrap_or(false)
        })
    }

    pub(crate) fn require_irreducible(&self) -> Result<()> {
        if self.is_irreducible() {
            Ok(())
        } else {
            Err(Error::UnsupportedRepresentation(
                "group representation fails the irreducibility certificate".into(),
            ))
        }
    }
}

fn closure_table(elements: &[ComplexMatrix]) -> Result<Vec<Vec<(usize, C64)>>> {
    let d = elements[0].rows() as f64;
    let mut table = Vec::with_capacity(elements.len());
    for (g, ug) in elements.iter().enumerate() {
        let mut row = Vec::with_capacity(elements.len());
        for (h, uh) in elements.iter().enumerate() {
            let prod = ug.matmul(uh);
            // |Tr[U_k^dagger P]| = d exactly when P is a phase times U_k
            let hit = elements.iter().enumerate().find_map(|(k, uk)| {
                let omega = hs_inner(uk, &prod) / d;
                if (omega.norm() - 1.0).abs() > GROUP_TOL {
                    return None;
                }
                let omega = omega / omega.norm();
                (prod.max_abs_diff(&uk.scale(omega)) <= GROUP_TOL).then_some((k, omega))
            });
            match hit {
                Some(entry) => row.push(entry),
                None => {
                    return Err(Error::Domain(format!(
                        "set is not closed up to phase: product of elements {g} and {h}"
                    )))
                }
            }
        }
        table.push(row);
    }
    Ok(table)
}

/// `{I, X, Y, Z}` as a projective representation of `Z2 x Z2`.
pub fn pauli_group() -> UnitaryGroup {
    UnitaryGroup::new(
        vec![paulis::identity(), paulis::x(), paulis::y(), paulis::z()],
        ["I", "X", "Y", "Z"].iter().map(|s| s.to_string()).collect(),
    )
    .expect("Pauli matrices form a projective group")
}

/// `U(m,n) = sum_k e^{2 pi i k m / d} |k><k + n mod d|`.
pub fn weyl_heisenberg(d: usize, m: usize, n: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::Domain(format!("Weyl-Heisenberg dimension {d} < 2")));
    }
    Ok(ComplexMatrix::from_fn(d, d, |row, col| {
        if col == (row + n) % d {
            C64::from_polar(1.0, 2.0 * PI * ((row * m) % d) as f64 / d as f64)
        } else {
            c(0.0, 0.0)
        }
    }))
}

/// All `d^2` operators `U(m,n)`, ordered `m`-major.
pub fn weyl_heisenberg_group(d: usize) -> Result<UnitaryGroup> {
    let mut elements = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            elements.push(weyl_heisenberg(d, m, n)?);
            labels.push(format!("U({m},{n})"));
        }
    }
    UnitaryGroup::new(elements, labels)
}
