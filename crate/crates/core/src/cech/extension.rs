use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::group::GroupTable;
use crate::error::{Error, Result};
use crate::linalg::{bigint_json, AbelianInvariants};

/// A normalized 2-cochain `ψ: G × G → A` with `A` finite, acting trivially.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCochain2 {
    pub coefficients: AbelianInvariants,
    /// `values[g][h]` is `ψ(g, h)` in the generators of `coefficients`.
    #[serde(with = "bigint_json::vecvecvec")]
    pub values: Vec<Vec<Vec<BigInt>>>,
}

/// Invariants used to tell extensions apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionInvariants {
    pub order: usize,
    /// Element order ↦ number of elements of that order.
    pub order_histogram: BTreeMap<usize, usize>,
    pub center_size: usize,
    pub abelian: bool,
}

/// The group `A ×_ψ G` with `(a₁,g₁)(a₂,g₂) = (a₁+a₂+ψ(g₁,g₂), g₁g₂)`.
///
/// Element `(a, g)` has index `g·|A| + index(a)`, with `a` enumerated in
/// mixed radix over the torsion orders, first generator fastest.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CentralExtension {
    pub table: GroupTable,
    pub fiber_order: usize,
    pub invariants: ExtensionInvariants,
    #[serde(with = "bigint_json::vecvec")]
    pub fiber_elements: Vec<Vec<BigInt>>,
}

fn enumerate_fiber(moduli: &[BigInt]) -> Vec<Vec<BigInt>> {
    let radix: Vec<usize> = moduli.iter().map(|d| d.to_usize().expect("small modulus")).collect();
    let total: usize = radix.iter().product();
    (0..total)
        .map(|mut i| {
            radix
                .iter()
                .map(|&d| {
                    let x = i % d;
                    i /= d;
                    BigInt::from(x)
                })
                .collect()
        })
        .collect()
}

fn fiber_index(v: &[BigInt], moduli: &[BigInt]) -> usize {
    let mut idx = 0usize;
    for (x, d) in v.iter().zip(moduli).rev() {
        idx = idx * d.to_usize().expect("small modulus") + x.mod_floor(d).to_usize().expect("reduced");
    }
    idx
}

fn add_mod(a: &[BigInt], b: &[BigInt], moduli: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).zip(moduli).map(|((x, y), d)| (x + y).mod_floor(d)).collect()
}

fn sub_mod(a: &[BigInt], b: &[BigInt], moduli: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).zip(moduli).map(|((x, y), d)| (x - y).mod_floor(d)).collect()
}

impl GroupCochain2 {
    pub fn zero(group: &GroupTable, coefficients: AbelianInvariants) -> Self {
        let n = group.order();
        let m = coefficients.generator_count();
        GroupCochain2 { coefficients, values: vec![vec![vec![BigInt::zero(); m]; n]; n] }
    }

    fn check_shape(&self, group: &GroupTable) -> Result<()> {
        let n = group.order();
        let m = self.coefficients.generator_count();
        if self.values.len() != n || self.values.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != m)) {
            return Err(Error::DimensionMismatch(format!("ψ must be a {n}×{n} table of vectors of length {m}")));
        }
        Ok(())
    }

    /// `(δψ)(g₁,g₂,g₃) = ψ(g₂,g₃) − ψ(g₁g₂,g₃) + ψ(g₁,g₂g₃) − ψ(g₁,g₂)`.
    pub fn coboundary_at(&self, group: &GroupTable, g1: usize, g2: usize, g3: usize) -> Vec<BigInt> {
        let m = self.coefficients.moduli();
        let x = sub_mod(&self.values[g2][g3], &self.values[group.mul(g1, g2)][g3], &m);
        let y = sub_mod(&self.values[g1][group.mul(g2, g3)], &self.values[g1][g2], &m);
        add_mod(&x, &y, &m)
    }

    /// First triple where `δψ ≠ 0`, in lexicographic order.
    pub fn cocycle_violation(&self, group: &GroupTable) -> Option<(usize, usize, usize)> {
        let n = group.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.coboundary_at(group, a, b, c).iter().any(|x| !x.is_zero()) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// `ψ + δf` for a normalized 1-cochain `f` (with `f(1) = 0`).
    pub fn add_coboundary(&self, group: &GroupTable, f: &[Vec<BigInt>]) -> GroupCochain2 {
        let m = self.coefficients.moduli();
        let n = group.order();
        let mut out = self.clone();
        for g in 0..n {
            for h in 0..n {
                let df = sub_mod(&add_mod(&f[g], &f[h], &m), &f[group.mul(g, h)], &m);
                out.values[g][h] = add_mod(&self.values[g][h], &df, &m);
            }
        }
        out
    }
}

pub fn central_extension_from_cocycle(group: &GroupTable, psi: &GroupCochain2) -> Result<CentralExtension> {
    let a = &psi.coefficients;
    if !a.is_finite() {
        return Err(Error::Unsupported(format!("central extensions are built for finite coefficients, got {a}")));
    }
    psi.check_shape(group)?;
    let moduli = a.moduli();
    let n = group.order();
    for g in 0..n {
        for side in [&psi.values[0][g], &psi.values[g][0]] {
            if side.iter().zip(&moduli).any(|(x, d)| !x.mod_floor(d).is_zero()) {
                return Err(Error::InvalidInput(format!("ψ is not normalized at element {g}")));
            }
        }
    }
    if let Some((x, y, z)) = psi.cocycle_violation(group) {
        return Err(Error::NotCocycle(format!("δψ({x}, {y}, {z}) ≠ 0")));
    }
    let fiber = enumerate_fiber(&moduli);
    let k = fiber.len();
    let mut table = vec![vec![0usize; n * k]; n * k];
    for g1 in 0..n {
        for (i1, a1) in fiber.iter().enumerate() {
            for g2 in 0..n {
                let g = group.mul(g1, g2);
                let shifted = add_mod(a1, &psi.values[g1][g2], &moduli);
                for (i2, a2) in fiber.iter().enumerate() {
                    let s = add_mod(&shifted, a2, &moduli);
                    table[g1 * k + i1][g2 * k + i2] = g * k + fiber_index(&s, &moduli);
                }
            }
        }
    }
    let table = GroupTable::from_table(table).map_err(|e| Error::Internal(format!("extension is not a group: {e}")))?;
    let invariants = ExtensionInvariants {
        order: table.order(),
        order_histogram: table.order_histogram(),
        center_size: table.center().len(),
        abelian: table.is_abelian(),
    };
    Ok(CentralExtension { table, fiber_order: k, invariants, fiber_elements: fiber })
}
