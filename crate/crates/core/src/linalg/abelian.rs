use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{bigint_json, IntMatrix};
use super::normal_form::{snf, snf_diagonal};
use super::solve::{coordinates_in_hnf_basis, kernel_basis};
use crate::error::{Error, Result};

/// A finitely generated abelian group `ℤ^free_rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with
/// `d₁ | d₂ | … | d_k` and every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(with = "bigint_json::vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_moduli(&[BigInt::from(n)])
    }

    /// Canonical form of `⊕ ℤ/mᵢ`, where a modulus of 0 contributes a free summand
    /// and a modulus of ±1 contributes nothing.
    pub fn from_moduli(moduli: &[BigInt]) -> Self {
        let n = moduli.len();
        let mut diag = IntMatrix::zeros(n, n);
        for (i, m) in moduli.iter().enumerate() {
            diag[(i, i)] = m.abs();
        }
        Self::from_snf_diagonal(&snf_diagonal(&snf(&diag).0), n)
    }

    /// Invariants of `ℤ^rows / (span of the given diagonal)`.
    fn from_snf_diagonal(diag: &[BigInt], rows: usize) -> Self {
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion = diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        AbelianInvariants { free_rank: rows - rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, for finite groups.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Number of cyclic generators in the presentation `ℤ^free ⊕ ⊕ ℤ/dᵢ`.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Per-generator moduli: 0 for free summands first, then the torsion orders.
    pub fn moduli(&self) -> Vec<BigInt> {
        let mut m = vec![BigInt::zero(); self.free_rank];
        m.extend(self.torsion.iter().cloned());
        m
    }

    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        let mut m = self.moduli();
        m.extend(other.moduli());
        Self::from_moduli(&m)
    }

    /// Parses `0`, `Z`, `Z^3`, `Z/2`, `Z/2 + Z/4`, `Z^2 + Z/3`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut moduli = Vec::new();
        for part in s.split(['+', '⊕']) {
            let part = part.trim();
            let bad = || Error::InvalidInput(format!("cannot parse abelian group summand {part:?}"));
            if let Some(rest) = part.strip_prefix("Z/") {
                let d: BigInt = rest.trim().parse().map_err(|_| bad())?;
                if d < BigInt::from(2) {
                    return Err(bad());
                }
                moduli.push(d);
            } else if let Some(rest) = part.strip_prefix("Z^") {
                let r: usize = rest.trim().parse().map_err(|_| bad())?;
                moduli.extend(std::iter::repeat_n(BigInt::zero(), r));
            } else if part == "Z" {
                moduli.push(BigInt::zero());
            } else {
                return Err(bad());
            }
        }
        Ok(Self::from_moduli(&moduli))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariants of `ℤ^rows / A·ℤ^cols`.
pub fn cokernel(a: &IntMatrix) -> AbelianInvariants {
    let (s, _, _) = snf(a);
    AbelianInvariants::from_snf_diagonal(&snf_diagonal(&s), a.rows())
}

/// A subquotient `Z / B` of lattices in `ℤⁿ` with `B ⊆ Z`, together with the
/// data needed to locate elements of `Z` in the quotient.
#[derive(Clone, Debug)]
pub struct Subquotient {
    /// HNF basis of `Z`, one vector per row.
    pub cycles: IntMatrix,
    pub invariants: AbelianInvariants,
    /// Row transform `U` from the Smith form of the relation matrix (relations as
    /// columns, in `cycles` coordinates): coordinates `c` map to `U·c`, whose
    /// trailing entries are the coordinates in the cyclic decomposition.
    transform: IntMatrix,
    diagonal: Vec<BigInt>,
}

impl Subquotient {
    /// Builds `Z / B` from an HNF basis of `Z` and generators of `B` (rows).
    pub fn new(cycles: IntMatrix, boundaries: &IntMatrix) -> Result<Self> {
        let k = cycles.rows();
        let mut cols = Vec::with_capacity(boundaries.rows());
        for i in 0..boundaries.rows() {
            let c = coordinates_in_hnf_basis(&cycles, boundaries.row(i)).ok_or_else(|| {
                Error::Internal("boundary generator does not lie in the cycle lattice".into())
            })?;
            cols.push(c);
        }
        let rel = IntMatrix::from_columns(&cols, k);
        let (s, u, _) = snf(&rel);
        let mut diagonal = snf_diagonal(&s);
        diagonal.resize(k, BigInt::zero());
        let invariants = AbelianInvariants::from_snf_diagonal(&diagonal, k);
        Ok(Subquotient { cycles, invariants, transform: u, diagonal })
    }

    /// Class of an element of `Z`: one coordinate per summand in the order of
    /// [`AbelianInvariants::moduli`] (free summands, then torsion reduced mod
    /// its order). `None` if `v ∉ Z`.
    pub fn class_of(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = coordinates_in_hnf_basis(&self.cycles, v)?;
        let w = self.transform.mul_vec(&c);
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (x, d) in w.iter().zip(&self.diagonal) {
            if d.is_zero() {
                free.push(x.clone());
            } else if !d.is_one() {
                torsion.push(((x % d) + d) % d);
            }
        }
        free.extend(torsion);
        Some(free)
    }

    /// Whether `v ∈ Z` represents the zero class.
    pub fn is_zero_class(&self, v: &[BigInt]) -> Option<bool> {
        self.class_of(v).map(|c| c.iter().all(Zero::is_zero))
    }
}

/// Integer solutions `x` of `A·x ≡ 0` where row `i` is taken modulo `moduli[i]`
/// (0 means exact equality). Returns an HNF basis of the solution lattice.
pub fn congruence_kernel(a: &IntMatrix, moduli: &[BigInt]) -> IntMatrix {
    assert_eq!(a.rows(), moduli.len());
    let n = a.cols();
    let torsion_rows: Vec<usize> = (0..moduli.len()).filter(|&i| !moduli[i].is_zero()).collect();
    let mut ext = IntMatrix::zeros(a.rows(), n + torsion_rows.len());
    for i in 0..a.rows() {
        ext.row_mut(i)[..n].clone_from_slice(a.row(i));
    }
    for (k, &i) in torsion_rows.iter().enumerate() {
        ext[(i, n + k)] = moduli[i].clone();
    }
    let ker = kernel_basis(&ext);
    let projected: Vec<Vec<BigInt>> = (0..ker.rows()).map(|i| ker.row(i)[..n].to_vec()).collect();
    if projected.is_empty() {
        return IntMatrix::zeros(0, n);
    }
    super::normal_form::row_lattice_basis(&IntMatrix::from_rows(projected, n))
}
