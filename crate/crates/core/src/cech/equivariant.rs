use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cochain::{kron_identity, repeat_moduli, subquotient_at};
use super::group::GroupTable;
use super::nerve::Nerve;
use crate::error::{Error, Result};
use crate::linalg::{AbelianInvariants, IntMatrix, Subquotient};

pub const DEFAULT_COMPLEX_CAP: usize = 20_000;

/// A finite group acting on the vertices of a nerve and on a coefficient group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAction {
    pub group: GroupTable,
    /// `vertex_perm[g][v]` is the image of vertex `v` under `g`.
    pub vertex_perm: Vec<Vec<usize>>,
    pub coefficients: AbelianInvariants,
    /// Matrix of each `g` on the generators of `coefficients` (columns are images).
    pub coefficient_action: Vec<IntMatrix>,
}

impl FiniteAction {
    /// The group acting trivially on both the nerve and the coefficients.
    pub fn trivial_on(group: GroupTable, nerve: &Nerve, coefficients: AbelianInvariants) -> Self {
        let n = group.order();
        let m = coefficients.generator_count();
        FiniteAction {
            group,
            vertex_perm: vec![(0..nerve.vertex_count()).collect(); n],
            coefficients,
            coefficient_action: vec![IntMatrix::identity(m); n],
        }
    }

    /// Checks that vertex and coefficient actions are homomorphisms, that every
    /// permutation maps simplices to simplices, and that each coefficient matrix
    /// is well defined on the torsion quotient.
    pub fn validate(&self, nerve: &Nerve) -> Result<()> {
        let n = self.group.order();
        let m = self.coefficients.generator_count();
        let moduli = self.coefficients.moduli();
        if self.vertex_perm.len() != n || self.coefficient_action.len() != n {
            return Err(Error::InvalidInput(format!("action must list one permutation and one matrix per element of a group of order {n}")));
        }
        for (g, p) in self.vertex_perm.iter().enumerate() {
            let mut seen = p.clone();
            seen.sort_unstable();
            if seen != (0..nerve.vertex_count()).collect::<Vec<_>>() {
                return Err(Error::InvalidInput(format!("vertex map of element {g} is not a permutation")));
            }
            for d in 0..=nerve.dimension() {
                for s in nerve.simplices(d) {
                    let img: Vec<usize> = s.iter().map(|&v| p[v]).collect();
                    if nerve.locate(&img).is_none() {
                        return Err(Error::InvalidInput(format!("element {g} maps simplex {s:?} outside the nerve")));
                    }
                }
            }
        }
        for (g, a) in self.coefficient_action.iter().enumerate() {
            if a.rows() != m || a.cols() != m {
                return Err(Error::DimensionMismatch(format!("coefficient matrix of element {g} is {}x{}, expected {m}x{m}", a.rows(), a.cols())));
            }
            for (j, d) in moduli.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let col: Vec<BigInt> = a.column(j).iter().map(|x| x * d).collect();
                if !reduces_to_zero(&col, &moduli) {
                    return Err(Error::InvalidInput(format!("coefficient matrix of element {g} is not defined modulo the torsion of generator {j}")));
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for v in 0..nerve.vertex_count() {
                    if self.vertex_perm[gh][v] != self.vertex_perm[g][self.vertex_perm[h][v]] {
                        return Err(Error::InvalidInput(format!("vertex action is not a homomorphism at ({g}, {h})")));
                    }
                }
                let prod = self.coefficient_action[g].mul(&self.coefficient_action[h]);
                let diff = prod.sub(&self.coefficient_action[gh]);
                if (0..m).any(|j| !reduces_to_zero(&diff.column(j), &moduli)) {
                    return Err(Error::InvalidInput(format!("coefficient action is not a homomorphism at ({g}, {h})")));
                }
            }
        }
        Ok(())
    }
}

fn reduces_to_zero(v: &[BigInt], moduli: &[BigInt]) -> bool {
    v.iter().zip(moduli).all(|(x, d)| if d.is_zero() { x.is_zero() } else { x.mod_floor(d).is_zero() })
}

/// The normalized Borel double complex `K^{q,p}`: maps from `q`-tuples of
/// non-identity elements and `p`-simplices to `A`, with total differential
/// `D = δ_G + (−1)^q δ_Č` and `(g·c)(σ) = ρ(g)·c(g⁻¹σ)`.
pub struct EquivariantComplex<'a> {
    nerve: &'a Nerve,
    action: &'a FiniteAction,
}

impl<'a> EquivariantComplex<'a> {
    pub fn new(nerve: &'a Nerve, action: &'a FiniteAction) -> Result<Self> {
        action.validate(nerve)?;
        Ok(EquivariantComplex { nerve, action })
    }

    fn tuples(&self, q: usize) -> usize {
        (self.action.group.order() - 1).pow(q as u32)
    }

    fn block_dim(&self, q: usize, p: usize) -> usize {
        self.tuples(q) * self.nerve.count(p) * self.action.coefficients.generator_count()
    }

    /// Offsets of the blocks `K^{q, n−q}` inside total degree `n`.
    fn offsets(&self, n: usize) -> Vec<usize> {
        let mut off = vec![0];
        for q in 0..=n {
            off.push(off[q] + self.block_dim(q, n - q));
        }
        off
    }

    pub fn dimension(&self, n: usize) -> usize {
        *self.offsets(n).last().expect("nonempty")
    }

    /// Tuple index ↔ non-identity elements, first entry most significant.
    fn decode(&self, q: usize, mut t: usize) -> Vec<usize> {
        let b = self.action.group.order() - 1;
        let mut out = vec![0; q];
        for slot in out.iter_mut().rev() {
            *slot = t % b + 1;
            t /= b;
        }
        out
    }

    fn encode(&self, tuple: &[usize]) -> usize {
        let b = self.action.group.order() - 1;
        tuple.iter().fold(0, |acc, &g| acc * b + (g - 1))
    }

    /// Matrix of `D: K^n → K^{n+1}`.
    pub fn differential(&self, n: usize) -> IntMatrix {
        let m = self.action.coefficients.generator_count();
        let g = &self.action.group;
        let src = self.offsets(n);
        let dst = self.offsets(n + 1);
        let mut d = IntMatrix::zeros(*dst.last().expect("nonempty"), *src.last().expect("nonempty"));
        for q in 0..=n {
            let p = n - q;
            let cp = self.nerve.count(p);
            let col_of = |t: usize, s: usize, k: usize| src[q] + (t * cp + s) * m + k;
            // Čech part lands in K^{q, p+1}
            let sign = if q % 2 == 0 { 1 } else { -1 };
            let cech = kron_identity(&self.nerve.coboundary_matrix(p), m);
            let cp1 = self.nerve.count(p + 1);
            for t in 0..self.tuples(q) {
                for r in 0..cech.rows() {
                    for c in 0..cech.cols() {
                        let x = &cech[(r, c)];
                        if !x.is_zero() {
                            d[(dst[q] + t * cp1 * m + r, src[q] + t * cp * m + c)] += x * BigInt::from(sign);
                        }
                    }
                }
            }
            // group part lands in K^{q+1, p}
            let row_of = |t: usize, s: usize, k: usize| dst[q + 1] + (t * cp + s) * m + k;
            for t in 0..self.tuples(q) {
                let tuple = self.decode(q, t);
                for (s, simplex) in self.nerve.simplices(p).iter().enumerate() {
                    for k in 0..m {
                        let col = col_of(t, s, k);
                        // h·f(tuple) evaluated on h·σ
                        for h in 1..g.order() {
                            let img: Vec<usize> = simplex.iter().map(|&v| self.action.vertex_perm[h][v]).collect();
                            let (s2, sg) = self.nerve.locate(&img).expect("validated action");
                            let mut out = vec![h];
                            out.extend(&tuple);
                            let t2 = self.encode(&out);
                            let rho = &self.action.coefficient_action[h];
                            for k2 in 0..m {
                                let x = &rho[(k2, k)];
                                if !x.is_zero() {
                                    d[(row_of(t2, s2, k2), col)] += x * BigInt::from(sg);
                                }
                            }
                        }
                        // splitting entry i into a·(a⁻¹tᵢ)
                        for i in 0..q {
                            for a in 1..g.order() {
                                let b = g.mul(g.inverse(a), tuple[i]);
                                if b == 0 {
                                    continue;
                                }
                                let mut out = tuple[..i].to_vec();
                                out.push(a);
                                out.push(b);
                                out.extend(&tuple[i + 1..]);
                                let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                                d[(row_of(self.encode(&out), s, k), col)] += BigInt::from(sign);
                            }
                        }
                        // appending a last entry
                        let sign = if (q + 1) % 2 == 0 { 1 } else { -1 };
                        for h in 1..g.order() {
                            let mut out = tuple.clone();
                            out.push(h);
                            d[(row_of(self.encode(&out), s, k), col)] += BigInt::from(sign);
                        }
                    }
                }
            }
        }
        d
    }

    pub fn moduli(&self, n: usize) -> Vec<BigInt> {
        repeat_moduli(&self.action.coefficients.moduli(), self.dimension(n) / self.action.coefficients.generator_count().max(1))
    }

    /// `Hⁿ` of the total complex.
    pub fn cohomology_subquotient(&self, n: usize, cap: usize) -> Result<Subquotient> {
        if self.nerve.is_truncated() && n + 1 > self.nerve.max_dim() {
            return Err(Error::CapExceeded {
                what: format!("nerve dimension needed for degree {n}"),
                cap: self.nerve.max_dim() as u64,
                needed: n as u64 + 1,
            });
        }
        let lo = if n > 0 { self.dimension(n - 1) } else { 0 };
        let size = lo + self.dimension(n) + self.dimension(n + 1);
        if size > cap {
            return Err(Error::CapExceeded { what: "equivariant complex size".into(), cap: cap as u64, needed: size as u64 });
        }
        let d_out = self.differential(n);
        let d_in = (n > 0).then(|| self.differential(n - 1));
        subquotient_at(d_in.as_ref(), &d_out, &self.moduli(n), &self.moduli(n + 1))
    }
}

/// `Hⁿ_G(nerve, A)` from the normalized double complex.
pub fn equivariant_cohomology(nerve: &Nerve, action: &FiniteAction, n: usize, cap: usize) -> Result<AbelianInvariants> {
    Ok(EquivariantComplex::new(nerve, action)?.cohomology_subquotient(n, cap)?.invariants)
}
