//! Root data and isogeny data for the classical series.
//!
//! All lattices live in a fixed ambient `ℚⁿ`. Characters are written against
//! the reference coordinates `t₁…tₙ`, cocharacters against the dual
//! coordinates `e₁…eₙ`, and the pairing is the ordinary dot product. A root
//! datum stores a basis of `X*(T)` as rational rows; the basis of `X_*(T)` is
//! the dual basis inside the same span, so integer coordinate vectors pair by
//! the plain dot product as well.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cokernel, rat_dot, AbelianInvariants, IntMatrix, RatMatrix, RatVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            other => Err(Error::InvalidInput(format!("unknown series {other:?}"))),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Isogeny form of a classical group. `SC` and `AD` are aliases resolved per series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Form {
    SC,
    AD,
    SL,
    GL,
    PGL,
    Spin,
    SO,
    PSO,
    Sp,
    PSp,
}

impl Form {
    pub fn resolve(self, series: Series) -> Form {
        match (self, series) {
            (Form::SC, Series::A) => Form::SL,
            (Form::SC, Series::B | Series::D) => Form::Spin,
            (Form::SC, Series::C) => Form::Sp,
            (Form::AD, Series::A) => Form::PGL,
            (Form::AD, Series::B) => Form::SO,
            (Form::AD, Series::C) => Form::PSp,
            (Form::AD, Series::D) => Form::PSO,
            (f, _) => f,
        }
    }
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let f = match s.trim().to_ascii_uppercase().as_str() {
            "SC" => Form::SC,
            "AD" => Form::AD,
            "SL" => Form::SL,
            "GL" => Form::GL,
            "PGL" => Form::PGL,
            "SPIN" => Form::Spin,
            "SO" => Form::SO,
            "PSO" => Form::PSO,
            "SP" => Form::Sp,
            "PSP" => Form::PSp,
            other => return Err(Error::InvalidInput(format!("unknown group form {other:?}"))),
        };
        Ok(f)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `(series, rank, form)` for data built by [`classical_datum`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalKey {
    pub series: Series,
    pub rank: usize,
    pub form: Form,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct RootDatumJson {
    name: String,
    ambient_dim: usize,
    char_basis: Vec<RatVector>,
    roots: Vec<RatVector>,
    coroots: Vec<RatVector>,
    simple: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classical: Option<ClassicalKey>,
}

/// Character and cocharacter lattices of a maximal torus together with roots and coroots.
///
/// Roots and coroots are kept as ambient vectors; their lattice coordinates are
/// cached at construction and may be missing if the datum is malformed
/// (see [`validate_datum`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RootDatumJson", into = "RootDatumJson")]
pub struct RootDatum {
    name: String,
    ambient_dim: usize,
    char_basis: Vec<RatVector>,
    cochar_basis: Vec<RatVector>,
    roots: Vec<RatVector>,
    coroots: Vec<RatVector>,
    simple: Vec<usize>,
    classical: Option<ClassicalKey>,
    root_coords: Vec<Option<Vec<BigInt>>>,
    coroot_coords: Vec<Option<Vec<BigInt>>>,
}

impl TryFrom<RootDatumJson> for RootDatum {
    type Error = Error;
    fn try_from(j: RootDatumJson) -> Result<Self> {
        let mut rd = RootDatum::from_parts(j.name, j.ambient_dim, j.char_basis, j.roots, j.coroots, j.simple)?;
        rd.classical = j.classical;
        Ok(rd)
    }
}

impl From<RootDatum> for RootDatumJson {
    fn from(rd: RootDatum) -> Self {
        RootDatumJson {
            name: rd.name,
            ambient_dim: rd.ambient_dim,
            char_basis: rd.char_basis,
            roots: rd.roots,
            coroots: rd.coroots,
            simple: rd.simple,
            classical: rd.classical,
        }
    }
}

impl RootDatum {
    /// Assembles a datum without checking the root-datum axioms; the only
    /// failures are shape errors and a rank-deficient character basis.
    pub fn from_parts(
        name: impl Into<String>,
        ambient_dim: usize,
        char_basis: Vec<RatVector>,
        roots: Vec<RatVector>,
        coroots: Vec<RatVector>,
        simple: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        let shape_ok = char_basis.iter().chain(&roots).chain(&coroots).all(|v| v.len() == ambient_dim);
        if !shape_ok {
            return Err(Error::InvalidInput(format!("{name}: vector length differs from ambient dimension {ambient_dim}")));
        }
        if roots.len() != coroots.len() {
            return Err(Error::InvalidInput(format!("{name}: {} roots but {} coroots", roots.len(), coroots.len())));
        }
        if let Some(&bad) = simple.iter().find(|&&i| i >= roots.len()) {
            return Err(Error::InvalidInput(format!("{name}: simple root index {bad} out of range")));
        }
        let c = RatMatrix::from_vectors(&char_basis, ambient_dim);
        let gram_inv = c
            .mul(&c.transpose())
            .inverse()
            .ok_or_else(|| Error::InvalidInput(format!("{name}: character basis is not linearly independent")))?;
        let d = gram_inv.mul(&c);
        let cochar_basis: Vec<RatVector> = (0..d.nrows()).map(|i| d.row_vector(i)).collect();

        let mut rd = RootDatum {
            name,
            ambient_dim,
            char_basis,
            cochar_basis,
            roots,
            coroots,
            simple,
            classical: None,
            root_coords: Vec::new(),
            coroot_coords: Vec::new(),
        };
        rd.root_coords = rd.roots.iter().map(|r| rd.char_coords(r)).collect();
        rd.coroot_coords = rd.coroots.iter().map(|r| rd.cochar_coords(r)).collect();
        Ok(rd)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn classical_key(&self) -> Option<ClassicalKey> {
        self.classical
    }

    /// Rank of the torus.
    pub fn rank(&self) -> usize {
        self.char_basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn char_basis(&self) -> &[RatVector] {
        &self.char_basis
    }

    pub fn cochar_basis(&self) -> &[RatVector] {
        &self.cochar_basis
    }

    pub fn roots(&self) -> &[RatVector] {
        &self.roots
    }

    pub fn coroots(&self) -> &[RatVector] {
        &self.coroots
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    /// Coordinates of root `i` in the `X*(T)` basis.
    pub fn root(&self, i: usize) -> &[BigInt] {
        self.root_coords[i].as_deref().expect("validated datum: root lies in X*(T)")
    }

    /// Coordinates of coroot `i` in the `X_*(T)` basis.
    pub fn coroot(&self, i: usize) -> &[BigInt] {
        self.coroot_coords[i].as_deref().expect("validated datum: coroot lies in X_*(T)")
    }

    /// Rational coordinates of an ambient vector against `basis`, using the dual basis
    /// to read them off; `None` if the vector is outside the span.
    fn coords_against(&self, v: &RatVector, basis: &[RatVector], dual: &[RatVector]) -> Option<RatVector> {
        let ve = v.entries();
        let coords: Vec<BigRational> = dual.iter().map(|d| rat_dot(&d.entries(), &ve)).collect();
        let mut back = vec![BigRational::zero(); self.ambient_dim];
        for (c, b) in coords.iter().zip(basis) {
            for (x, y) in back.iter_mut().zip(b.entries()) {
                *x += c * y;
            }
        }
        (back == ve).then(|| RatVector::from_rationals(&coords))
    }

    /// Integer coordinates in the `X*(T)` basis, if `v` is a character.
    pub fn char_coords(&self, v: &RatVector) -> Option<Vec<BigInt>> {
        let c = self.coords_against(v, &self.char_basis, &self.cochar_basis)?;
        c.as_integral().map(<[BigInt]>::to_vec)
    }

    /// Integer coordinates in the `X_*(T)` basis, if `v` is a cocharacter.
    pub fn cochar_coords(&self, v: &RatVector) -> Option<Vec<BigInt>> {
        let c = self.coords_against(v, &self.cochar_basis, &self.char_basis)?;
        c.as_integral().map(<[BigInt]>::to_vec)
    }

    /// Rational `X_*(T)` coordinates of a point of `X_*(T)⊗ℚ` given in `e`-coordinates.
    pub fn cochar_coords_rational(&self, v: &RatVector) -> Result<RatVector> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} ambient coordinates, got {}",
                self.ambient_dim,
                v.len()
            )));
        }
        self.coords_against(v, &self.cochar_basis, &self.char_basis)
            .ok_or_else(|| Error::InvalidInput(format!("{v} is not in the span of X_*(T) for {}", self.name)))
    }

    /// Rational `X*(T)` coordinates of an ambient vector in the span.
    pub fn char_coords_rational(&self, v: &RatVector) -> Result<RatVector> {
        self.coords_against(v, &self.char_basis, &self.cochar_basis)
            .ok_or_else(|| Error::InvalidInput(format!("{v} is not in the span of X*(T) for {}", self.name)))
    }

    fn combine(basis: &[RatVector], coords: &RatVector, dim: usize) -> RatVector {
        let mut out = vec![BigRational::zero(); dim];
        for (c, b) in coords.entries().iter().zip(basis) {
            for (x, y) in out.iter_mut().zip(b.entries()) {
                *x += c * y;
            }
        }
        RatVector::from_rationals(&out)
    }

    /// Ambient `t`-coordinates of a (rational) character given in basis coordinates.
    pub fn char_to_ambient(&self, coords: &RatVector) -> RatVector {
        Self::combine(&self.char_basis, coords, self.ambient_dim)
    }

    /// Ambient `e`-coordinates of a (rational) cocharacter given in basis coordinates.
    pub fn cochar_to_ambient(&self, coords: &RatVector) -> RatVector {
        Self::combine(&self.cochar_basis, coords, self.ambient_dim)
    }

    /// Pairing of ambient vectors, which must be integral for a character and a cocharacter.
    pub fn pairing_ambient(&self, chi: &RatVector, lambda: &RatVector) -> Result<BigInt> {
        let p = rat_dot(&chi.entries(), &lambda.entries());
        if !p.is_integer() {
            return Err(Error::Internal(format!(
                "{}: pairing of {chi} with {lambda} is {p}, not an integer",
                self.name
            )));
        }
        Ok(p.to_integer())
    }

    /// Squared ambient length of the shortest coroot.
    fn min_coroot_norm(&self) -> Option<BigRational> {
        self.coroots.iter().map(|c| rat_dot(&c.entries(), &c.entries())).min()
    }

    /// Scale `c` with `b₀ = c·Σ tᵢ²` normalized by `b₀(α̌, α̌) = 2` on the short coroots
    /// (the coroots of long roots). `None` without roots.
    pub fn basic_level_scale(&self) -> Option<BigRational> {
        let m = self.min_coroot_norm()?;
        Some(BigRational::from_integer(BigInt::from(2)) / m)
    }
}

/// Result of [`validate_datum`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumReport {
    pub name: String,
    pub passed: bool,
    pub violations: Vec<String>,
}

/// Checks every root-datum axiom and reports the violated ones.
pub fn validate_datum(rd: &RootDatum) -> DatumReport {
    let mut v = Vec::new();
    let n = rd.roots.len();

    // dual bases
    for (i, a) in rd.char_basis.iter().enumerate() {
        for (j, b) in rd.cochar_basis.iter().enumerate() {
            let p = rat_dot(&a.entries(), &b.entries());
            let expect = if i == j { BigRational::one() } else { BigRational::zero() };
            if p != expect {
                v.push(format!("X*(T) and X_*(T) bases are not dual at ({i}, {j})"));
            }
        }
    }
    for i in 0..n {
        if rd.root_coords[i].is_none() {
            v.push(format!("root {} is not in X*(T)", rd.roots[i]));
        }
        if rd.coroot_coords[i].is_none() {
            v.push(format!("coroot {} is not in X_*(T)", rd.coroots[i]));
        }
        let p = rat_dot(&rd.roots[i].entries(), &rd.coroots[i].entries());
        if p != BigRational::from_integer(BigInt::from(2)) {
            v.push(format!("<alpha, alpha^> = {p} (expected 2) for root {}", rd.roots[i]));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let p = rat_dot(&rd.roots[i].entries(), &rd.coroots[j].entries());
            if !p.is_integer() {
                v.push(format!("root {} pairs non-integrally with coroot {}", rd.roots[i], rd.coroots[j]));
            }
        }
    }
    // reflections permute roots and coroots
    let root_set: std::collections::HashSet<&RatVector> = rd.roots.iter().collect();
    let coroot_set: std::collections::HashSet<&RatVector> = rd.coroots.iter().collect();
    for i in 0..n {
        let a = rd.roots[i].entries();
        let ac = rd.coroots[i].entries();
        for j in 0..n {
            let b = rd.roots[j].entries();
            let k = rat_dot(&b, &ac);
            let img: Vec<BigRational> = b.iter().zip(&a).map(|(x, y)| x - &k * y).collect();
            if !root_set.contains(&RatVector::from_rationals(&img)) {
                v.push(format!("reflection in {} does not permute the roots", rd.roots[i]));
                break;
            }
        }
        for j in 0..n {
            let b = rd.coroots[j].entries();
            let k = rat_dot(&a, &b);
            let img: Vec<BigRational> = b.iter().zip(&ac).map(|(x, y)| x - &k * y).collect();
            if !coroot_set.contains(&RatVector::from_rationals(&img)) {
                v.push(format!("reflection in {} does not permute the coroots", rd.roots[i]));
                break;
            }
        }
    }
    v.dedup();
    DatumReport { name: rd.name.clone(), passed: v.is_empty(), violations: v }
}

fn unit(n: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    v
}

fn lin(n: usize, terms: &[(usize, i64)], den: i64) -> RatVector {
    let mut v = vec![BigInt::zero(); n];
    for &(i, c) in terms {
        v[i] += c;
    }
    RatVector::new(v, BigInt::from(den)).expect("nonzero denominator")
}

/// Positive roots with coroots, in a fixed order, plus the simple indices into that list.
fn classical_positive_roots(series: Series, n: usize) -> (Vec<(RatVector, RatVector)>, Vec<usize>) {
    let mut pos = Vec::new();
    let mut simple = Vec::new();
    // type A lives in n = rank + 1 coordinates; the others in n = rank
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 {
                simple.push(pos.len());
            }
            pos.push((lin(n, &[(i, 1), (j, -1)], 1), lin(n, &[(i, 1), (j, -1)], 1)));
        }
    }
    match series {
        Series::A => {}
        Series::B | Series::C | Series::D => {
            for i in 0..n {
                for j in i + 1..n {
                    if series == Series::D && i == n - 2 && j == n - 1 {
                        simple.push(pos.len());
                    }
                    pos.push((lin(n, &[(i, 1), (j, 1)], 1), lin(n, &[(i, 1), (j, 1)], 1)));
                }
            }
            if series != Series::D {
                for i in 0..n {
                    if i == n - 1 {
                        simple.push(pos.len());
                    }
                    match series {
                        Series::B => pos.push((lin(n, &[(i, 1)], 1), lin(n, &[(i, 2)], 1))),
                        _ => pos.push((lin(n, &[(i, 2)], 1), lin(n, &[(i, 1)], 1))),
                    }
                }
            }
        }
    }
    (pos, simple)
}

/// Builds the root datum of a classical group.
///
/// `rank` is the rank of the root system: `(A, r, SL)` is `SL(r+1)`,
/// `(B, r, Spin)` is `Spin(2r+1)`, `(C, r, Sp)` is `Sp(2r)`, `(D, r, SO)` is `SO(2r)`.
/// `GL` is available only in series A and gives the full diagonal torus of `GL(r+1)`.
pub fn classical_datum(series: Series, rank: usize, form: Form) -> Result<RootDatum> {
    let form = form.resolve(series);
    let min_rank = match series {
        Series::A => 1,
        Series::B | Series::C => 2,
        Series::D => 3,
    };
    if rank < min_rank {
        return Err(Error::Unsupported(format!("series {series} needs rank >= {min_rank}, got {rank}")));
    }
    let supported = matches!(
        (series, form),
        (Series::A, Form::SL | Form::GL | Form::PGL)
            | (Series::B, Form::Spin | Form::SO)
            | (Series::C, Form::Sp | Form::PSp)
            | (Series::D, Form::Spin | Form::SO | Form::PSO)
    );
    if !supported {
        return Err(Error::Unsupported(format!("form {form} does not exist in series {series}")));
    }
    let n = if series == Series::A { rank + 1 } else { rank };
    let int_basis = |n: usize| -> Vec<RatVector> { (0..n).map(|i| RatVector::from_rationals(&unit(n, i))).collect() };

    let char_basis: Vec<RatVector> = match (series, form) {
        (Series::A, Form::SL) => (1..n)
            .map(|k| {
                // fundamental weight: t₁+…+t_k projected to Σtᵢ = 0
                let mut v = vec![BigInt::from(-(k as i64)); n];
                for x in v.iter_mut().take(k) {
                    *x += n as i64;
                }
                RatVector::new(v, BigInt::from(n as i64)).expect("nonzero")
            })
            .collect(),
        (Series::A, Form::PGL) => (0..n - 1).map(|k| lin(n, &[(k, 1), (k + 1, -1)], 1)).collect(),
        (Series::A, Form::GL) | (Series::B | Series::D, Form::SO) | (Series::C, Form::Sp) => int_basis(n),
        (Series::B | Series::D, Form::Spin) => {
            let mut b: Vec<RatVector> = (0..n - 1).map(|i| lin(n, &[(i, 1)], 1)).collect();
            b.push(RatVector::new(vec![BigInt::one(); n], BigInt::from(2)).expect("nonzero"));
            b
        }
        (Series::C, Form::PSp) => {
            let mut b: Vec<RatVector> = (0..n - 1).map(|k| lin(n, &[(k, 1), (k + 1, -1)], 1)).collect();
            b.push(lin(n, &[(n - 1, 2)], 1));
            b
        }
        (Series::D, Form::PSO) => {
            let mut b: Vec<RatVector> = (0..n - 1).map(|k| lin(n, &[(k, 1), (k + 1, -1)], 1)).collect();
            b.push(lin(n, &[(n - 2, 1), (n - 1, 1)], 1));
            b
        }
        _ => unreachable!("checked above"),
    };

    let (pos, simple) = classical_positive_roots(series, n);
    let mut roots: Vec<RatVector> = pos.iter().map(|(r, _)| r.clone()).collect();
    let mut coroots: Vec<RatVector> = pos.iter().map(|(_, c)| c.clone()).collect();
    roots.extend(pos.iter().map(|(r, _)| r.neg()));
    coroots.extend(pos.iter().map(|(_, c)| c.neg()));

    let name = match (series, form) {
        (Series::A, f) => format!("{f}({n})"),
        (Series::B, f) => format!("{f}({})", 2 * n + 1),
        (Series::C, f) => format!("{f}({})", 2 * n),
        (Series::D, f) => format!("{f}({})", 2 * n),
    };
    let mut rd = RootDatum::from_parts(name, n, char_basis, roots, coroots, simple)?;
    rd.classical = Some(ClassicalKey { series, rank, form });
    Ok(rd)
}

/// Expected number of roots of a classical root system of the given rank.
pub fn expected_root_count(series: Series, rank: usize) -> usize {
    match series {
        Series::A => rank * (rank + 1),
        Series::B | Series::C => 2 * rank * rank,
        Series::D => 2 * rank * (rank - 1),
    }
}

/// A homomorphism `f: H → G` seen through its maximal tori `S → T`.
///
/// `source` is the datum of `H` (torus `S`), `target` that of `G` (torus `T`).
/// Both share the ambient space and the root system, so one Weyl group acts on both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyDatum {
    pub name: String,
    pub source: RootDatum,
    pub target: RootDatum,
    /// `X_*(S) → X_*(T)`: column `j` holds the `X_*(T)` coordinates of the `j`-th `X_*(S)` basis vector.
    pub cochar_map: IntMatrix,
    /// `X*(T) → X*(S)`: restriction of characters, the transpose of `cochar_map`.
    pub char_map: IntMatrix,
    /// Coroots of `G` in `X_*(S)` coordinates.
    #[serde(with = "crate::linalg::bigint_json::vecvec")]
    pub coroot_lift: Vec<Vec<BigInt>>,
}

impl IsogenyDatum {
    /// Builds the lattice maps between two data over the same ambient root system.
    pub fn new(source: RootDatum, target: RootDatum) -> Result<Self> {
        let name = format!("{} -> {}", source.name(), target.name());
        if source.ambient_dim != target.ambient_dim {
            return Err(Error::InvalidInput(format!("{name}: ambient dimensions differ")));
        }
        if source.roots != target.roots || source.coroots != target.coroots {
            return Err(Error::InvalidInput(format!("{name}: source and target root systems differ")));
        }
        let mut columns = Vec::with_capacity(source.rank());
        for (j, mu) in source.cochar_basis.iter().enumerate() {
            let c = target.cochar_coords(mu).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "{name}: X_*(S) basis vector {j} = {mu} is not in X_*(T), so X*(T) does not map into X*(S)"
                ))
            })?;
            columns.push(c);
        }
        let cochar_map = IntMatrix::from_columns(&columns, target.rank());
        let char_map = cochar_map.transpose();
        let coroot_lift = source
            .coroot_coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.clone().ok_or_else(|| {
                    Error::InvalidInput(format!("{name}: coroot {} is not in X_*(S)", source.coroots[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IsogenyDatum { name, source, target, cochar_map, char_map, coroot_lift })
    }

    /// Identity isogeny `G → G`.
    pub fn identity(rd: RootDatum) -> Result<Self> {
        Self::new(rd.clone(), rd)
    }

    /// `[X*(S) : X*(T)]` when the tori have equal rank.
    pub fn index(&self) -> Option<BigInt> {
        self.cochar_map.is_square().then(|| self.cochar_map.det().abs())
    }

    /// `X*(S) / image of X*(T)`.
    pub fn char_cokernel(&self) -> AbelianInvariants {
        cokernel(&self.char_map)
    }

    pub fn char_map_injective(&self) -> bool {
        crate::linalg::rank(&self.char_map) == self.target.rank()
    }

    /// Checks adjointness against the ambient pairing and the coroot lift.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        for (i, chi) in self.target.char_basis.iter().enumerate() {
            for (j, mu) in self.source.cochar_basis.iter().enumerate() {
                let p = rat_dot(&chi.entries(), &mu.entries());
                let want = BigRational::from_integer(self.cochar_map[(i, j)].clone());
                if p != want || self.char_map[(j, i)] != self.cochar_map[(i, j)] {
                    v.push(format!("lattice maps are not adjoint at ({i}, {j})"));
                }
            }
        }
        for (k, lift) in self.coroot_lift.iter().enumerate() {
            if self.cochar_map.mul_vec(lift) != self.target.coroot(k) {
                v.push(format!("lifted coroot {k} does not map to the coroot of G"));
            }
        }
        if self.cochar_map.is_square() && !self.char_map_injective() {
            v.push("X*(T) -> X*(S) is not injective".into());
        }
        v
    }
}

/// Isogeny between two classical forms of the same series and rank.
pub fn build_isogeny(series: Series, rank: usize, source: Form, target: Form) -> Result<IsogenyDatum> {
    let s = classical_datum(series, rank, source)?;
    let t = classical_datum(series, rank, target)?;
    IsogenyDatum::new(s, t)
}

/// Small positive integer helper for reports.
pub fn to_u64(x: &BigInt) -> u64 {
    x.to_u64().unwrap_or(u64::MAX)
}
