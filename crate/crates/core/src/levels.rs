//! Weyl-invariant tensors `b ∈ X*(S)⊗X*(T)`, the evenness condition on
//! coroots, rank-one restrictions, and comparison against a table of claimed
//! allowable lattices.
//!
//! A tensor is stored as the integer matrix `B` with `B[i][j] = b(μᵢ, λⱼ)` for
//! the bases `μ` of `X_*(S)` and `λ` of `X_*(T)`. The linear map
//! `X_*(T) → X*(S)` attached to `b` is then `λ ↦ B·λ`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bigint_json, format_rational, kernel_basis, rat_dot, row_lattice_basis, solve_z, IntMatrix, RatVector};
use crate::rootdata::{build_isogeny, Form, IsogenyDatum, Series};
use crate::weyl::SharedWeyl;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTensor {
    pub matrix: IntMatrix,
    /// Name of the isogeny the tensor lives over.
    pub isogeny: String,
}

impl LevelTensor {
    pub fn new(iso: &IsogenyDatum, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != iso.source.rank() || matrix.cols() != iso.target.rank() {
            return Err(Error::DimensionMismatch(format!(
                "level matrix is {}x{}, expected {}x{} for {}",
                matrix.rows(),
                matrix.cols(),
                iso.source.rank(),
                iso.target.rank(),
                iso.name
            )));
        }
        Ok(LevelTensor { matrix, isogeny: iso.name.clone() })
    }

    pub fn zero(iso: &IsogenyDatum) -> Self {
        LevelTensor { matrix: IntMatrix::zeros(iso.source.rank(), iso.target.rank()), isogeny: iso.name.clone() }
    }

    /// `b(μ, λ) = μᵀ·B·λ`.
    pub fn evaluate(&self, mu: &[BigInt], lambda: &[BigInt]) -> BigInt {
        crate::linalg::dot(mu, &self.matrix.mul_vec(lambda))
    }

    /// `λ ↦ B·λ ∈ X*(S)` for integral `λ`.
    pub fn apply(&self, lambda: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(lambda)
    }

    /// The same map on rational cocharacters.
    pub fn apply_rational(&self, lambda: &RatVector) -> RatVector {
        RatVector::apply(&self.matrix, lambda)
    }

    pub fn add(&self, other: &LevelTensor) -> LevelTensor {
        LevelTensor { matrix: self.matrix.add(&other.matrix), isogeny: self.isogeny.clone() }
    }

    pub fn scale(&self, k: &BigInt) -> LevelTensor {
        LevelTensor { matrix: self.matrix.scale(k), isogeny: self.isogeny.clone() }
    }

    /// `A_S(w)ᵀ·B·A_T(w) = B` for every element `w`.
    pub fn is_invariant(&self, sw: &SharedWeyl) -> bool {
        (0..sw.order()).all(|w| self.is_invariant_under(sw, w))
    }

    fn is_invariant_under(&self, sw: &SharedWeyl, w: usize) -> bool {
        let a_s = &sw.source.element(w).cochar_action;
        let a_t = &sw.target.element(w).cochar_action;
        a_s.transpose().mul(&self.matrix).mul(a_t) == self.matrix
    }

    /// Value `b(α̌, α̌)` on root `i`, with the first coroot lifted to `X_*(S)`.
    pub fn coroot_value(&self, iso: &IsogenyDatum, i: usize) -> BigInt {
        self.evaluate(&iso.coroot_lift[i], iso.target.coroot(i))
    }

    fn vectorize(&self) -> Vec<BigInt> {
        self.matrix.entries().to_vec()
    }

    /// The tensor as a bilinear form on the ambient space, `Σ B_ij χᵢ ⊗ ζⱼ`.
    pub fn ambient_form(&self, iso: &IsogenyDatum) -> Vec<Vec<BigRational>> {
        let d = iso.source.ambient_dim();
        let mut f = vec![vec![BigRational::zero(); d]; d];
        for (i, chi) in iso.source.char_basis().iter().enumerate() {
            for (j, zeta) in iso.target.char_basis().iter().enumerate() {
                let b = &self.matrix[(i, j)];
                if b.is_zero() {
                    continue;
                }
                let (ce, ze) = (chi.entries(), zeta.entries());
                for p in 0..d {
                    for q in 0..d {
                        f[p][q] += BigRational::from_integer(b.clone()) * &ce[p] * &ze[q];
                    }
                }
            }
        }
        f
    }
}

fn from_vector(iso: &IsogenyDatum, v: &[BigInt]) -> LevelTensor {
    let c = iso.target.rank();
    LevelTensor { matrix: IntMatrix::from_rows(v.chunks(c).map(<[BigInt]>::to_vec).collect(), c), isogeny: iso.name.clone() }
}

/// Canonical basis of the lattice spanned by the given tensors (HNF of the vectorized matrices).
pub fn canonical_basis(iso: &IsogenyDatum, tensors: &[LevelTensor]) -> Vec<LevelTensor> {
    if tensors.is_empty() {
        return Vec::new();
    }
    let n = iso.source.rank() * iso.target.rank();
    let rows = IntMatrix::from_rows(tensors.iter().map(LevelTensor::vectorize).collect(), n);
    let h = row_lattice_basis(&rows);
    (0..h.rows()).map(|i| from_vector(iso, h.row(i))).collect()
}

/// Integer basis of `{B : A_S(w)ᵀ·B·A_T(w) = B for all w}`.
pub fn invariant_level_lattice(iso: &IsogenyDatum, sw: &SharedWeyl) -> Result<Vec<LevelTensor>> {
    let (rs, rt) = (iso.source.rank(), iso.target.rank());
    let n = rs * rt;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &g in sw.source.generators() {
        let a_s = &sw.source.element(g).cochar_action;
        let a_t = &sw.target.element(g).cochar_action;
        for p in 0..rs {
            for q in 0..rt {
                let mut row = vec![BigInt::zero(); n];
                for i in 0..rs {
                    for j in 0..rt {
                        row[i * rt + j] = &a_s[(i, p)] * &a_t[(j, q)];
                    }
                }
                row[p * rt + q] -= 1;
                rows.push(row);
            }
        }
    }
    let basis: Vec<LevelTensor> = if rows.is_empty() {
        (0..n)
            .map(|k| {
                let mut v = vec![BigInt::zero(); n];
                v[k] = BigInt::one();
                from_vector(iso, &v)
            })
            .collect()
    } else {
        let k = kernel_basis(&IntMatrix::from_rows(rows, n));
        (0..k.rows()).map(|i| from_vector(iso, k.row(i))).collect()
    };
    for b in &basis {
        if !b.is_invariant(sw) {
            return Err(Error::Internal("invariant lattice basis element fails invariance".into()));
        }
    }
    Ok(basis)
}

/// W-orbits of roots, each listed by increasing root index.
pub fn root_orbits(iso: &IsogenyDatum, sw: &SharedWeyl) -> Vec<Vec<usize>> {
    let rd = &iso.target;
    let n = rd.roots().len();
    let by_coords: HashMap<&[BigInt], usize> = (0..n).map(|i| (rd.root(i), i)).collect();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![start];
        orbit_of[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &g in sw.target.generators() {
                let img = sw.target.element(g).char_action.mul_vec(rd.root(i));
                let j = by_coords[img.as_slice()];
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    orbits
}

/// Values `b(α̌, α̌)` of each basis tensor on one W-orbit of roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityRow {
    pub representative: RatVector,
    pub orbit_size: usize,
    #[serde(with = "bigint_json::vec")]
    pub values: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvFilter {
    pub basis: Vec<LevelTensor>,
    pub parity_table: Vec<ParityRow>,
    /// Index of the filtered lattice in the input lattice, a power of 2.
    #[serde(with = "bigint_json")]
    pub index: BigInt,
}

/// Kernel of a matrix over `𝔽₂` (entries already reduced mod 2), as 0/1 vectors.
fn f2_kernel(rows: &[Vec<u8>], k: usize) -> Vec<Vec<u8>> {
    let mut a: Vec<Vec<u8>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] == 1) else { continue };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && a[i][c] == 1 {
                let pr = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; k];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = a[row][f];
            }
            v
        })
        .collect()
}

/// Sublattice of tensors with `b(α̌, α̌)` even for every root.
pub fn ev_filter(basis: &[LevelTensor], iso: &IsogenyDatum, sw: &SharedWeyl) -> Result<EvFilter> {
    let k = basis.len();
    let orbits = root_orbits(iso, sw);
    let mut table = Vec::new();
    for orbit in &orbits {
        let values: Vec<BigInt> = basis.iter().map(|b| b.coroot_value(iso, orbit[0])).collect();
        for &other in &orbit[1..] {
            for (b, v) in basis.iter().zip(&values) {
                if b.is_invariant(sw) && b.coroot_value(iso, other) != *v {
                    return Err(Error::Internal("coroot value is not constant on a W-orbit".into()));
                }
            }
        }
        table.push(ParityRow { representative: iso.target.roots()[orbit[0]].clone(), orbit_size: orbit.len(), values });
    }
    let parity: Vec<Vec<u8>> = table
        .iter()
        .map(|row| row.values.iter().map(|v| u8::from(v.is_odd())).collect())
        .collect();
    let kernel = f2_kernel(&parity, k);
    let index = BigInt::from(2).pow((k - kernel.len()) as u32);

    let mut gens: Vec<Vec<BigInt>> = kernel.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    for i in 0..k {
        let mut v = vec![BigInt::zero(); k];
        v[i] = BigInt::from(2);
        gens.push(v);
    }
    let combos = if k == 0 { IntMatrix::zeros(0, 0) } else { row_lattice_basis(&IntMatrix::from_rows(gens, k)) };
    let mut out = Vec::new();
    for c in 0..combos.rows() {
        let mut t = LevelTensor::zero(iso);
        for (coef, b) in combos.row(c).iter().zip(basis) {
            t = t.add(&b.scale(coef));
        }
        out.push(t);
    }
    let out = canonical_basis(iso, &out);
    for t in &out {
        for i in 0..iso.target.roots().len() {
            if t.coroot_value(iso, i).is_odd() {
                return Err(Error::Internal("filtered tensor has an odd coroot value".into()));
            }
        }
    }
    Ok(EvFilter { basis: out, parity_table: table, index })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankOneType {
    SL2,
    PGL2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneRestriction {
    pub root: RatVector,
    pub subgroup_type: RankOneType,
    #[serde(with = "bigint_json")]
    pub value: BigInt,
    pub parity_obstruction: bool,
}

/// Restriction of `b` to the rank-one subgroup of `G` attached to root `i`.
pub fn restrict_to_rank_one(b: &LevelTensor, iso: &IsogenyDatum, i: usize) -> Result<RankOneRestriction> {
    if i >= iso.target.roots().len() {
        return Err(Error::InvalidInput(format!("root index {i} out of range")));
    }
    let coroot = iso.target.coroot(i);
    // the coroot kills -1 exactly when α̌/2 is a cocharacter
    let halves = coroot.iter().all(|x| x.is_even());
    let subgroup_type = if halves { RankOneType::PGL2 } else { RankOneType::SL2 };
    let value = b.coroot_value(iso, i);
    let parity_obstruction = subgroup_type == RankOneType::SL2 && value.is_odd();
    if parity_obstruction != value.is_odd() {
        return Err(Error::Internal("rank-one parity disagrees with b(α̌, α̌) mod 2".into()));
    }
    Ok(RankOneRestriction { root: iso.target.roots()[i].clone(), subgroup_type, value, parity_obstruction })
}

/// Index of a root given in ambient `t`-coordinates.
pub fn find_root(iso: &IsogenyDatum, root: &RatVector) -> Result<usize> {
    iso.target
        .roots()
        .iter()
        .position(|r| r == root)
        .ok_or_else(|| Error::InvalidInput(format!("{root} is not a root of {}", iso.target.name())))
}

/// Coefficients of a named ambient form `c₀·b₀ + c₁·(t₁+⋯+tₙ)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedForm {
    pub b0: BigRational,
    pub sum_sq: BigRational,
}

impl NamedForm {
    pub fn b0() -> Self {
        NamedForm { b0: BigRational::one(), sum_sq: BigRational::zero() }
    }

    pub fn sum_sq() -> Self {
        NamedForm { b0: BigRational::zero(), sum_sq: BigRational::one() }
    }
}

fn named_form_ambient(iso: &IsogenyDatum, f: &NamedForm) -> Result<Vec<Vec<BigRational>>> {
    let d = iso.source.ambient_dim();
    let scale = iso
        .target
        .basic_level_scale()
        .ok_or_else(|| Error::Unsupported(format!("{} has no roots, so b0 is undefined", iso.target.name())))?;
    let mut m = vec![vec![&f.sum_sq + BigRational::zero(); d]; d];
    for (p, row) in m.iter_mut().enumerate() {
        row[p] += &f.b0 * &scale;
    }
    Ok(m)
}

/// `b(μᵢ, λⱼ)` for an ambient bilinear form, as rationals.
fn form_coordinates(iso: &IsogenyDatum, form: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    iso.source
        .cochar_basis()
        .iter()
        .map(|mu| {
            let me = mu.entries();
            let row: Vec<BigRational> = (0..me.len()).map(|q| rat_dot(&me, &form.iter().map(|r| r[q].clone()).collect::<Vec<_>>())).collect();
            iso.target.cochar_basis().iter().map(|l| rat_dot(&row, &l.entries())).collect()
        })
        .collect()
}

fn integral_matrix(m: &[Vec<BigRational>], cols: usize) -> Option<IntMatrix> {
    if m.iter().flatten().all(|q| q.is_integer()) {
        Some(IntMatrix::from_rows(m.iter().map(|r| r.iter().map(|q| q.to_integer()).collect()).collect(), cols))
    } else {
        None
    }
}

/// Coordinate matrix of a named form over `iso`, if it is integral.
pub fn named_form_tensor(iso: &IsogenyDatum, f: &NamedForm) -> Result<(Vec<Vec<BigRational>>, Option<LevelTensor>)> {
    let coords = form_coordinates(iso, &named_form_ambient(iso, f)?);
    let t = integral_matrix(&coords, iso.target.rank()).map(|m| LevelTensor { matrix: m, isogeny: iso.name.clone() });
    Ok((coords, t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicLevel {
    /// `b₀` in coordinates, rational entries written as strings.
    pub coordinates: Vec<Vec<String>>,
    pub tensor: Option<LevelTensor>,
    pub invariant: bool,
    /// Smallest `k ≥ 1` with `k·b₀` in the invariant lattice.
    #[serde(with = "bigint_json")]
    pub minimal_multiple: BigInt,
}

/// `b₀` over an isogeny: normalized by `b₀(α̌, α̌) = 2` on short coroots.
pub fn basic_level_on(iso: &IsogenyDatum, sw: &SharedWeyl, invariant_basis: &[LevelTensor]) -> Result<BasicLevel> {
    let (coords, tensor) = named_form_tensor(iso, &NamedForm { b0: BigRational::one(), sum_sq: BigRational::zero() })?;
    let den = coords.iter().flatten().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let scaled: Vec<BigInt> = coords.iter().flatten().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let n = scaled.len();
    let invariant = tensor.as_ref().is_some_and(|t| t.is_invariant(sw));
    // smallest multiple of the integral rescaling lying in the lattice
    let basis_cols: Vec<Vec<BigInt>> = invariant_basis.iter().map(LevelTensor::vectorize).collect();
    let g = scaled.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let minimal_multiple = if basis_cols.is_empty() || g.is_zero() {
        BigInt::zero()
    } else {
        // b₀ = (g/den)·w with w primitive, and q·w ∈ L forces q ∈ ℤ
        let w: Vec<BigInt> = scaled.iter().map(|x| x / &g).collect();
        let a = IntMatrix::from_columns(&basis_cols, n);
        match solve_z(&a, &w)?.min_multiplier {
            Some(m) => {
                let md = &m * &den;
                &md / md.gcd(&g)
            }
            None => BigInt::zero(),
        }
    };
    let coordinates = coords.iter().map(|r| r.iter().map(format_rational).collect()).collect();
    Ok(BasicLevel { coordinates, tensor, invariant, minimal_multiple })
}

/// `b₀` for `H = G` of a classical form.
pub fn named_basic_level(series: Series, rank: usize, form: Form) -> Result<BasicLevel> {
    let iso = build_isogeny(series, rank, form, form)?;
    let sw = SharedWeyl::generate(&iso, crate::weyl::DEFAULT_WEYL_CAP)?;
    let basis = invariant_level_lattice(&iso, &sw)?;
    basic_level_on(&iso, &sw, &basis)
}

/// Expresses a tensor as `x·b₀ + y·(t₁+⋯+tₙ)²` when possible.
pub fn describe_level(t: &LevelTensor, iso: &IsogenyDatum) -> String {
    let target: Vec<BigRational> = t.matrix.entries().iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let mut named: Vec<(&str, Vec<BigRational>)> = Vec::new();
    for (label, f) in [
        ("b0", NamedForm { b0: BigRational::one(), sum_sq: BigRational::zero() }),
        ("(t1+...+tn)^2", NamedForm { b0: BigRational::zero(), sum_sq: BigRational::one() }),
    ] {
        if let Ok((c, _)) = named_form_tensor(iso, &f) {
            let v: Vec<BigRational> = c.into_iter().flatten().collect();
            if v.iter().any(|q| !q.is_zero()) {
                named.push((label, v));
            }
        }
    }
    if let Some(coefs) = rational_combination(&target, &named.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>()) {
        let terms: Vec<String> = coefs
            .iter()
            .zip(&named)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, (label, _))| {
                if c.is_one() {
                    label.to_string()
                } else if (-c).is_one() {
                    format!("-{label}")
                } else {
                    format!("{}*{label}", format_rational(c))
                }
            })
            .collect();
        if terms.is_empty() {
            return "0".into();
        }
        return terms.join(" + ").replace("+ -", "- ");
    }
    format!("{}", t.matrix)
}

/// Solves `target = Σ xᵢ·gensᵢ` over ℚ; `None` if there is no solution or it is not unique.
fn rational_combination(target: &[BigRational], gens: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let k = gens.len();
    let mut rows: Vec<Vec<BigRational>> = (0..target.len())
        .map(|p| {
            let mut r: Vec<BigRational> = gens.iter().map(|g| g[p].clone()).collect();
            r.push(target[p].clone());
            r
        })
        .collect();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { return None };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        piv.push(r);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(piv.iter().map(|&i| rows[i][k].clone()).collect())
}

/// Coefficient in a claim: an integer, `n`, or `<int>*n`, where `n` is the ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coefficient(pub String);

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient("0".into())
    }
}

impl Coefficient {
    pub fn evaluate(&self, n: usize) -> Result<BigInt> {
        let s = self.0.trim();
        let bad = || Error::InvalidInput(format!("cannot parse claim coefficient {s:?}"));
        if s == "n" {
            return Ok(BigInt::from(n));
        }
        if let Some(k) = s.strip_suffix("*n") {
            let k: BigInt = k.trim().parse().map_err(|_| bad())?;
            return Ok(k * n);
        }
        s.parse().map_err(|_| bad())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimGenerator {
    #[serde(default)]
    pub b0: Coefficient,
    #[serde(default)]
    pub sum_sq: Coefficient,
}

/// A claimed allowable lattice for a family of isogenies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub series: Series,
    pub source: Form,
    pub target: Form,
    pub min_rank: usize,
    #[serde(default)]
    pub max_rank: Option<usize>,
    pub generators: Vec<ClaimGenerator>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimTable {
    pub claims: Vec<Claim>,
}

const BUILTIN_CLAIMS: &str = include_str!("../fixtures/level_claims.json");

impl ClaimTable {
    pub fn builtin() -> ClaimTable {
        Self::from_json(BUILTIN_CLAIMS).expect("built-in claim table parses")
    }

    pub fn from_json(s: &str) -> Result<ClaimTable> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("claim table: {e}")))
    }

    pub fn lookup(&self, series: Series, rank: usize, source: Form, target: Form) -> Option<&Claim> {
        let (source, target) = (source.resolve(series), target.resolve(series));
        self.claims.iter().find(|c| {
            c.series == series
                && c.source.resolve(series) == source
                && c.target.resolve(series) == target
                && rank >= c.min_rank
                && c.max_rank.is_none_or(|m| rank <= m)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    NoClaim,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::NoClaim => "no-claim",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelGenerator {
    pub matrix: IntMatrix,
    pub description: String,
}

/// Number of roots on which a level takes a given coroot value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorootValueCount {
    #[serde(with = "bigint_json")]
    pub value: BigInt,
    pub roots: usize,
}

/// Invariant and allowable lattices of one isogeny, with the facts about `b₀`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub source: String,
    pub target: String,
    pub weyl_order: usize,
    pub invariant: Vec<LevelGenerator>,
    pub allowable: Vec<LevelGenerator>,
    /// Index of the allowable lattice in the invariant lattice.
    #[serde(with = "bigint_json")]
    pub ev_index: BigInt,
    pub parity_table: Vec<ParityRow>,
    pub basic_level: BasicLevel,
    /// Whether `b₀(α̌, α̌)` is even on every root, when `b₀` is integral.
    pub b0_ev: Option<bool>,
    pub b0_coroot_values: Vec<CorootValueCount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub series: Series,
    pub rank: usize,
    pub source_form: Form,
    pub target_form: Form,
    #[serde(flatten)]
    pub summary: LevelSummary,
    pub claim: Option<Claim>,
    pub claim_generators: Vec<LevelGenerator>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

fn generators(iso: &IsogenyDatum, ts: &[LevelTensor]) -> Vec<LevelGenerator> {
    ts.iter().map(|t| LevelGenerator { matrix: t.matrix.clone(), description: describe_level(t, iso) }).collect()
}

/// The summary together with the allowable basis as tensors.
fn summarize(iso: &IsogenyDatum, sw: &SharedWeyl) -> Result<(LevelSummary, Vec<LevelTensor>)> {
    let invariant = invariant_level_lattice(iso, sw)?;
    let ev = ev_filter(&invariant, iso, sw)?;
    let basic_level = basic_level_on(iso, sw, &invariant)?;
    let (b0_ev, b0_coroot_values) = match &basic_level.tensor {
        Some(t) => {
            let h = coroot_value_histogram(t, iso);
            let even = h.keys().all(|v| v.is_even());
            (Some(even), h.into_iter().map(|(value, roots)| CorootValueCount { value, roots }).collect())
        }
        None => (None, Vec::new()),
    };
    let summary = LevelSummary {
        source: iso.source.name().to_string(),
        target: iso.target.name().to_string(),
        weyl_order: sw.order(),
        invariant: generators(iso, &invariant),
        allowable: generators(iso, &ev.basis),
        ev_index: ev.index,
        parity_table: ev.parity_table,
        basic_level,
        b0_ev,
        b0_coroot_values,
    };
    Ok((summary, ev.basis))
}

/// Level lattices of an arbitrary isogeny.
pub fn summarize_levels(iso: &IsogenyDatum, sw: &SharedWeyl) -> Result<LevelSummary> {
    Ok(summarize(iso, sw)?.0)
}

/// Invariant lattice, allowable lattice, and the claimed lattice for `source → target`.
pub fn compare_with_claims(
    series: Series,
    rank: usize,
    source_form: Form,
    target_form: Form,
    claims: &ClaimTable,
    weyl_cap: u64,
) -> Result<ComparisonReport> {
    let iso = build_isogeny(series, rank, source_form, target_form)?;
    let sw = SharedWeyl::generate(&iso, weyl_cap)?;
    let (summary, allowable) = summarize(&iso, &sw)?;
    let mut notes = Vec::new();

    let claim = claims.lookup(series, rank, source_form, target_form).cloned();
    let mut claim_tensors = Vec::new();
    let verdict = match &claim {
        None => Verdict::NoClaim,
        Some(c) => {
            let n = iso.target.ambient_dim();
            let mut integral = true;
            for g in &c.generators {
                let f = NamedForm {
                    b0: BigRational::from_integer(g.b0.evaluate(n)?),
                    sum_sq: BigRational::from_integer(g.sum_sq.evaluate(n)?),
                };
                match named_form_tensor(&iso, &f)?.1 {
                    Some(t) => claim_tensors.push(t),
                    None => {
                        integral = false;
                        notes.push("a claimed generator is not integral on X_*(S) x X_*(T)".into());
                    }
                }
            }
            let canon = canonical_basis(&iso, &claim_tensors);
            claim_tensors = canon.clone();
            if integral && canon == allowable {
                Verdict::Match
            } else {
                Verdict::Mismatch
            }
        }
    };
    if summary.ev_index > BigInt::one() {
        notes.push(format!("evenness on coroots cuts the invariant lattice down by index {}", summary.ev_index));
    }
    if !summary.basic_level.minimal_multiple.is_one() {
        notes.push(format!("b0 enters the invariant lattice only at multiple {}", summary.basic_level.minimal_multiple));
    }
    Ok(ComparisonReport {
        series,
        rank,
        source_form: source_form.resolve(series),
        target_form: target_form.resolve(series),
        summary,
        claim,
        claim_generators: generators(&iso, &claim_tensors),
        verdict,
        notes,
    })
}

/// Number of W-orbits on the roots with each coroot value, keyed by value.
pub fn coroot_value_histogram(t: &LevelTensor, iso: &IsogenyDatum) -> BTreeMap<BigInt, usize> {
    let mut h = BTreeMap::new();
    for i in 0..iso.target.roots().len() {
        *h.entry(t.coroot_value(iso, i)).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::DEFAULT_WEYL_CAP;

    fn setting(s: Series, r: usize, a: Form, b: Form) -> (IsogenyDatum, SharedWeyl) {
        let iso = build_isogeny(s, r, a, b).unwrap();
        let sw = SharedWeyl::generate(&iso, DEFAULT_WEYL_CAP).unwrap();
        (iso, sw)
    }

    fn one(x: i64) -> IntMatrix {
        IntMatrix::from_i64_rows(&[vec![x]])
    }

    #[test]
    fn sl2_invariant_generator_and_filter() {
        let (iso, sw) = setting(Series::A, 1, Form::SL, Form::SL);
        let inv = invariant_level_lattice(&iso, &sw).unwrap();
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].matrix, one(1));
        let ev = ev_filter(&inv, &iso, &sw).unwrap();
        assert_eq!(ev.basis[0].matrix, one(2));
        assert_eq!(ev.index, BigInt::from(2));
        assert_eq!(ev.parity_table.len(), 1);
        assert_eq!(ev.parity_table[0].values, vec![BigInt::one()]);
        assert_eq!(describe_level(&ev.basis[0], &iso), "b0");
    }

    #[test]
    fn pgl2_generator_passes_unchanged() {
        let (iso, sw) = setting(Series::A, 1, Form::PGL, Form::PGL);
        let inv = invariant_level_lattice(&iso, &sw).unwrap();
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].matrix, one(1));
        let alpha = find_root(&iso, &RatVector::from_i64(&[1, -1], 1)).unwrap();
        assert_eq!(inv[0].coroot_value(&iso, alpha), BigInt::from(4));
        let ev = ev_filter(&inv, &iso, &sw).unwrap();
        assert_eq!(ev.basis, inv);
        assert_eq!(describe_level(&inv[0], &iso), "2*b0");
    }

    #[test]
    fn gl3_both_generators_pass() {
        let (iso, sw) = setting(Series::A, 2, Form::GL, Form::GL);
        let inv = invariant_level_lattice(&iso, &sw).unwrap();
        assert_eq!(inv.len(), 2);
        // direct evaluation on e_i - e_j: l·Σtᵢ² gives 2l, (Σtᵢ)² gives 0
        let i = find_root(&iso, &RatVector::from_i64(&[1, 0, -1], 1)).unwrap();
        let id = LevelTensor::new(&iso, IntMatrix::identity(3)).unwrap();
        let j = LevelTensor::new(&iso, IntMatrix::from_i64_rows(&[vec![1; 3], vec![1; 3], vec![1; 3]])).unwrap();
        assert_eq!(id.coroot_value(&iso, i), BigInt::from(2));
        assert_eq!(j.coroot_value(&iso, i), BigInt::zero());
        assert_eq!(canonical_basis(&iso, &[id, j]), inv);
        assert_eq!(ev_filter(&inv, &iso, &sw).unwrap().basis, inv);
    }

    #[test]
    fn spin7_basic_level_and_restrictions() {
        let (iso, sw) = setting(Series::B, 3, Form::Spin, Form::Spin);
        let inv = invariant_level_lattice(&iso, &sw).unwrap();
        let b0 = basic_level_on(&iso, &sw, &inv).unwrap();
        assert!(b0.invariant);
        assert_eq!(b0.minimal_multiple, BigInt::one());
        let b = b0.tensor.unwrap();
        // the ambient form is t₁² + t₂² + t₃²
        let f = b.ambient_form(&iso);
        for (p, row) in f.iter().enumerate() {
            for (q, x) in row.iter().enumerate() {
                assert_eq!(x.is_one(), p == q);
                assert!(p == q || x.is_zero());
            }
        }
        let long = find_root(&iso, &RatVector::from_i64(&[1, -1, 0], 1)).unwrap();
        let short = find_root(&iso, &RatVector::from_i64(&[0, 0, 1], 1)).unwrap();
        let r = restrict_to_rank_one(&b, &iso, long).unwrap();
        assert_eq!((r.value.clone(), r.parity_obstruction), (BigInt::from(2), false));
        let r = restrict_to_rank_one(&b, &iso, short).unwrap();
        assert_eq!((r.value.clone(), r.parity_obstruction), (BigInt::from(4), false));
        assert!(restrict_to_rank_one(&b, &iso, 999).is_err());
    }

    #[test]
    fn sl2_parity_decision() {
        let (iso, _) = setting(Series::A, 1, Form::SL, Form::SL);
        let alpha = find_root(&iso, &RatVector::from_i64(&[1, -1], 1)).unwrap();
        for m in 1..=4 {
            let b = LevelTensor::new(&iso, one(m)).unwrap();
            let r = restrict_to_rank_one(&b, &iso, alpha).unwrap();
            assert_eq!(r.subgroup_type, RankOneType::SL2);
            assert_eq!(r.value, BigInt::from(m));
            assert_eq!(r.parity_obstruction, m % 2 == 1);
        }
        let (iso, _) = setting(Series::A, 1, Form::PGL, Form::PGL);
        let r = restrict_to_rank_one(&LevelTensor::new(&iso, one(1)).unwrap(), &iso, alpha).unwrap();
        assert_eq!(r.subgroup_type, RankOneType::PGL2);
        assert!(!r.parity_obstruction);
    }

    #[test]
    fn pso8_needs_twice_b0() {
        let b = named_basic_level(Series::D, 4, Form::PSO).unwrap();
        assert!(b.tensor.is_none());
        assert_eq!(b.minimal_multiple, BigInt::from(2));
        let b = named_basic_level(Series::A, 2, Form::SL).unwrap();
        assert!(b.invariant);
        assert_eq!(b.coordinates, vec![vec!["2", "-1"], vec!["-1", "2"]]);
    }

    #[test]
    fn so7_mismatch_is_reported() {
        let rep = compare_with_claims(Series::B, 3, Form::SO, Form::SO, &ClaimTable::builtin(), DEFAULT_WEYL_CAP).unwrap();
        assert_eq!(rep.summary.invariant.len(), 1);
        assert_eq!(rep.summary.invariant[0].description, "b0");
        assert_eq!(rep.summary.allowable[0].description, "b0");
        assert_eq!(rep.claim_generators[0].description, "2*b0");
        assert_eq!(rep.verdict, Verdict::Mismatch);
    }

    #[test]
    fn unknown_entries_have_no_claim() {
        let rep = compare_with_claims(Series::C, 2, Form::PSp, Form::PSp, &ClaimTable::builtin(), DEFAULT_WEYL_CAP).unwrap();
        assert_eq!(rep.verdict, Verdict::NoClaim);
    }

    #[test]
    fn coefficients_parse() {
        assert_eq!(Coefficient("3*n".into()).evaluate(4).unwrap(), BigInt::from(12));
        assert_eq!(Coefficient("n".into()).evaluate(4).unwrap(), BigInt::from(4));
        assert_eq!(Coefficient("-2".into()).evaluate(4).unwrap(), BigInt::from(-2));
        assert!(Coefficient("x".into()).evaluate(4).is_err());
    }

    #[test]
    fn f2_kernel_small() {
        let k = f2_kernel(&[vec![1, 1, 0]], 3);
        assert_eq!(k, vec![vec![1, 1, 0], vec![0, 0, 1]]);
    }
}
