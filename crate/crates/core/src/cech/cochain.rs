use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::nerve::Nerve;
use crate::error::{Error, Result};
use crate::linalg::{bigint_json, congruence_kernel, solve_z, AbelianInvariants, IntMatrix, Subquotient};

/// A `p`-cochain with values in `A = ℤ^f ⊕ ⊕ ℤ/dᵢ`, stored on sorted simplices.
///
/// Values on an unsorted vertex list are read through [`Cochain::value_on`],
/// which applies the permutation sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cochain {
    pub degree: usize,
    pub coefficients: AbelianInvariants,
    #[serde(with = "bigint_json::vecvec")]
    values: Vec<Vec<BigInt>>,
}

/// Reduces torsion components into `[0, d)`.
pub(crate) fn reduce(v: &mut [BigInt], moduli: &[BigInt]) {
    for (x, d) in v.iter_mut().zip(moduli) {
        if !d.is_zero() {
            *x = x.mod_floor(d);
        }
    }
}

impl Cochain {
    pub fn new(nerve: &Nerve, degree: usize, coefficients: AbelianInvariants, mut values: Vec<Vec<BigInt>>) -> Result<Self> {
        if values.len() != nerve.count(degree) {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} simplices of dimension {degree}",
                values.len(),
                nerve.count(degree)
            )));
        }
        let m = coefficients.moduli();
        for v in &mut values {
            if v.len() != m.len() {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient vector of length {}, {} has {} generators",
                    v.len(),
                    coefficients,
                    m.len()
                )));
            }
            reduce(v, &m);
        }
        Ok(Cochain { degree, coefficients, values })
    }

    pub fn zero(nerve: &Nerve, degree: usize, coefficients: AbelianInvariants) -> Self {
        let m = coefficients.generator_count();
        Cochain { degree, coefficients, values: vec![vec![BigInt::zero(); m]; nerve.count(degree)] }
    }

    pub fn values(&self) -> &[Vec<BigInt>] {
        &self.values
    }

    /// Value on an ordered vertex list, with the alternating sign.
    pub fn value_on(&self, nerve: &Nerve, vertices: &[usize]) -> Option<Vec<BigInt>> {
        if vertices.len() != self.degree + 1 {
            return None;
        }
        let (i, sign) = nerve.locate(vertices)?;
        let mut v: Vec<BigInt> = self.values[i].iter().map(|x| x * BigInt::from(sign)).collect();
        reduce(&mut v, &self.coefficients.moduli());
        Some(v)
    }

    /// Concatenated values, simplex-major.
    pub fn flatten(&self) -> Vec<BigInt> {
        self.values.iter().flatten().cloned().collect()
    }

    pub(crate) fn from_flat(degree: usize, coefficients: AbelianInvariants, count: usize, flat: &[BigInt]) -> Self {
        let m = coefficients.generator_count();
        let moduli = coefficients.moduli();
        let values = (0..count)
            .map(|i| {
                let mut v = flat[i * m..(i + 1) * m].to_vec();
                reduce(&mut v, &moduli);
                v
            })
            .collect();
        Cochain { degree, coefficients, values }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        if self.degree != other.degree || self.coefficients != other.coefficients || self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch("adding cochains of different shapes".into()));
        }
        let m = self.coefficients.moduli();
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let mut v: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                reduce(&mut v, &m);
                v
            })
            .collect();
        Ok(Cochain { degree: self.degree, coefficients: self.coefficients.clone(), values })
    }

    pub fn neg(&self) -> Cochain {
        let m = self.coefficients.moduli();
        let values = self
            .values
            .iter()
            .map(|a| {
                let mut v: Vec<BigInt> = a.iter().map(|x| -x).collect();
                reduce(&mut v, &m);
                v
            })
            .collect();
        Cochain { degree: self.degree, coefficients: self.coefficients.clone(), values }
    }

    /// Applies a homomorphism of free coefficient groups `ℤʳ → ℤˢ` pointwise.
    pub fn map_free(&self, m: &IntMatrix) -> Result<Cochain> {
        if !self.coefficients.torsion.is_empty() {
            return Err(Error::Unsupported("pointwise maps are only defined on free coefficients".into()));
        }
        if m.cols() != self.coefficients.free_rank {
            return Err(Error::DimensionMismatch(format!(
                "map with {} columns on coefficients of rank {}",
                m.cols(),
                self.coefficients.free_rank
            )));
        }
        let values = self.values.iter().map(|v| m.mul_vec(v)).collect();
        Ok(Cochain { degree: self.degree, coefficients: AbelianInvariants::free(m.rows()), values })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Zero::is_zero)
    }
}

/// `A ⊗ δ`: every entry of `d` scaled onto the identity of `ℤ^m`.
pub(crate) fn kron_identity(d: &IntMatrix, m: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(d.rows() * m, d.cols() * m);
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            for k in 0..m {
                out[(i * m + k, j * m + k)] = x.clone();
            }
        }
    }
    out
}

/// Cochain moduli: the coefficient moduli repeated once per simplex.
pub(crate) fn repeat_moduli(moduli: &[BigInt], count: usize) -> Vec<BigInt> {
    (0..count).flat_map(|_| moduli.iter().cloned()).collect()
}

/// `ker(d_out) / (im(d_in) + torsion relations)` for a complex of groups `ℤⁿ / (moduli)`.
///
/// `d_in` maps the previous degree to this one, `d_out` this degree to the next.
pub(crate) fn subquotient_at(
    d_in: Option<&IntMatrix>,
    d_out: &IntMatrix,
    moduli_here: &[BigInt],
    moduli_next: &[BigInt],
) -> Result<Subquotient> {
    let n = moduli_here.len();
    let cycles = if d_out.rows() == 0 { IntMatrix::identity(n) } else { congruence_kernel(d_out, moduli_next) };
    let mut rel: Vec<Vec<BigInt>> = Vec::new();
    if let Some(d) = d_in {
        for j in 0..d.cols() {
            let c = d.column(j);
            if c.iter().any(|x| !x.is_zero()) {
                rel.push(c);
            }
        }
    }
    for (i, m) in moduli_here.iter().enumerate() {
        if !m.is_zero() {
            let mut v = vec![BigInt::zero(); n];
            v[i] = m.clone();
            rel.push(v);
        }
    }
    Subquotient::new(cycles, &IntMatrix::from_rows(rel, n))
}

fn check_degree(nerve: &Nerve, p: usize) -> Result<()> {
    if nerve.is_truncated() && p + 1 > nerve.max_dim() {
        return Err(Error::CapExceeded {
            what: format!("nerve dimension needed for degree {p}"),
            cap: nerve.max_dim() as u64,
            needed: p as u64 + 1,
        });
    }
    Ok(())
}

pub fn coboundary(nerve: &Nerve, c: &Cochain) -> Cochain {
    let m = c.coefficients.generator_count();
    let d = kron_identity(&nerve.coboundary_matrix(c.degree), m);
    let flat = d.mul_vec(&c.flatten());
    Cochain::from_flat(c.degree + 1, c.coefficients.clone(), nerve.count(c.degree + 1), &flat)
}

pub fn is_cocycle(nerve: &Nerve, c: &Cochain) -> bool {
    coboundary(nerve, c).is_zero()
}

/// `Hᵖ` of the nerve together with the data to locate classes.
pub fn cohomology_subquotient(nerve: &Nerve, p: usize, a: &AbelianInvariants) -> Result<Subquotient> {
    check_degree(nerve, p)?;
    let m = a.generator_count();
    let moduli = a.moduli();
    let d_out = kron_identity(&nerve.coboundary_matrix(p), m);
    let d_in = (p > 0).then(|| kron_identity(&nerve.coboundary_matrix(p - 1), m));
    subquotient_at(
        d_in.as_ref(),
        &d_out,
        &repeat_moduli(&moduli, nerve.count(p)),
        &repeat_moduli(&moduli, nerve.count(p + 1)),
    )
}

pub fn cohomology(nerve: &Nerve, p: usize, a: &AbelianInvariants) -> Result<AbelianInvariants> {
    Ok(cohomology_subquotient(nerve, p, a)?.invariants)
}

/// The cohomology group of `c`'s degree and the coordinates of `[c]` in it.
pub fn class_of(nerve: &Nerve, c: &Cochain) -> Result<(AbelianInvariants, Vec<BigInt>)> {
    let q = cohomology_subquotient(nerve, c.degree, &c.coefficients)?;
    let coords = q.class_of(&c.flatten()).ok_or_else(|| Error::NotCocycle(format!("degree-{} cochain", c.degree)))?;
    Ok((q.invariants.clone(), coords))
}

/// A `(p−1)`-cochain `b` with `δb = c`, or `None` if `[c] ≠ 0`.
pub fn trivialize(nerve: &Nerve, c: &Cochain) -> Result<Option<Cochain>> {
    if !is_cocycle(nerve, c) {
        let bad = coboundary(nerve, c).values.iter().position(|v| v.iter().any(|x| !x.is_zero())).unwrap_or(0);
        return Err(Error::NotCocycle(format!(
            "coboundary is nonzero on simplex {:?}",
            nerve.simplices(c.degree + 1).get(bad)
        )));
    }
    if c.degree == 0 {
        return Err(Error::InvalidInput("a 0-cochain has no lower-degree trivialization".into()));
    }
    let m = c.coefficients.generator_count();
    let moduli = c.coefficients.moduli();
    let d = kron_identity(&nerve.coboundary_matrix(c.degree - 1), m);
    let here = repeat_moduli(&moduli, nerve.count(c.degree));
    let torsion: Vec<usize> = (0..here.len()).filter(|&i| !here[i].is_zero()).collect();
    let mut ext = IntMatrix::zeros(d.rows(), d.cols() + torsion.len());
    for i in 0..d.rows() {
        ext.row_mut(i)[..d.cols()].clone_from_slice(d.row(i));
    }
    for (k, &i) in torsion.iter().enumerate() {
        ext[(i, d.cols() + k)] = here[i].clone();
    }
    let sol = solve_z(&ext, &c.flatten())?;
    let Some(x) = sol.particular else { return Ok(None) };
    let b = Cochain::from_flat(c.degree - 1, c.coefficients.clone(), nerve.count(c.degree - 1), &x[..d.cols()]);
    if coboundary(nerve, &b).values != c.values {
        return Err(Error::Internal("trivialization does not reproduce the cocycle".into()));
    }
    Ok(Some(b))
}
