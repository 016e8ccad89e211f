//! The centralizer cocycle of a semisimple point and its class in
//! `H¹(W_L, X*(S))`.
//!
//! For `g = exp(2πiξ)` with `ξ ∈ X_*(T)⊗ℚ`, `W_L` is the set of `w` with
//! `d_w = wξ − ξ ∈ X_*(T)`, and the cocycle is `c_w = b̲(d_w)`. Everything is
//! additive: the multiplicative characters `Πχᵢ^{nᵢ}` of `S` are the vectors
//! `(nᵢ)` in `X*(S)` coordinates.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levels::LevelTensor;
use crate::linalg::{bigint_json, kernel_basis, solve_z, AbelianInvariants, IntMatrix, RatVector, Subquotient};
use crate::rootdata::IsogenyDatum;
use crate::weyl::{integral_reflection_subgroup, stabilizer, SharedWeyl, Subgroup, WeylGroup};

/// Largest `W_L` for which the cocycle identity is checked over all pairs.
pub const DEFAULT_SUBGROUP_CAP: usize = 4096;
/// Largest subgroup for the full `H¹` computation.
pub const DEFAULT_H1_CAP: usize = 384;
/// Largest number of candidate points a scan enumerates.
pub const DEFAULT_SCAN_CAP: u64 = 2_000_000;

/// A point `ξ` of `X_*(T)⊗ℚ` in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemisimplePoint {
    pub xi: RatVector,
}

impl SemisimplePoint {
    pub fn from_coords(iso: &IsogenyDatum, xi: RatVector) -> Result<Self> {
        if xi.len() != iso.target.rank() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, X_*(T) has rank {}",
                xi.len(),
                iso.target.rank()
            )));
        }
        Ok(SemisimplePoint { xi })
    }

    /// From ambient `e`-coordinates.
    pub fn from_ambient(iso: &IsogenyDatum, v: &RatVector) -> Result<Self> {
        Ok(SemisimplePoint { xi: iso.target.cochar_coords_rational(v)? })
    }

    pub fn ambient(&self, iso: &IsogenyDatum) -> RatVector {
        iso.target.cochar_to_ambient(&self.xi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleEntry {
    pub element: usize,
    /// `wξ − ξ` in `X_*(T)` coordinates.
    #[serde(with = "bigint_json::vec")]
    pub d: Vec<BigInt>,
    /// `b̲(d_w)` in `X*(S)` coordinates.
    #[serde(with = "bigint_json::vec")]
    pub c: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocycle {
    pub w_l: Subgroup,
    /// One entry per element of `w_l`, in the same order.
    pub entries: Vec<CocycleEntry>,
}

impl Cocycle {
    pub fn value(&self, w: usize) -> Option<&[BigInt]> {
        self.w_l.elements.binary_search(&w).ok().map(|k| &self.entries[k].c[..])
    }
}

/// Builds `w ↦ b̲(wξ − ξ)` on `W_L` and checks the cocycle identity on all pairs.
pub fn centralizer_cocycle(
    iso: &IsogenyDatum,
    sw: &SharedWeyl,
    b: &LevelTensor,
    pt: &SemisimplePoint,
    cap: usize,
) -> Result<Cocycle> {
    if !b.is_invariant(sw) {
        return Err(Error::NotInvariant(format!("{} on {}", b.matrix, iso.name)));
    }
    let w_l = stabilizer(&sw.target, &pt.xi);
    if w_l.order() > cap {
        return Err(Error::CapExceeded { what: "centralizer subgroup W_L".into(), cap: cap as u64, needed: w_l.order() as u64 });
    }
    let mut entries = Vec::with_capacity(w_l.order());
    for &w in &w_l.elements {
        let diff = sw.target.act_cochar(w, &pt.xi).sub(&pt.xi);
        let d = diff
            .as_integral()
            .ok_or_else(|| Error::Internal("stabilizer element with non-integral wξ − ξ".into()))?
            .to_vec();
        let c = b.apply(&d);
        entries.push(CocycleEntry { element: w, d, c });
    }
    let cocycle = Cocycle { w_l, entries };
    verify_cocycle(&sw.source, &cocycle)?;
    Ok(cocycle)
}

/// `c_{w₁w₂} = w₁·c_{w₂} + c_{w₁}` for all pairs.
pub fn verify_cocycle(w: &WeylGroup, c: &Cocycle) -> Result<()> {
    for (a, ea) in c.w_l.elements.iter().zip(&c.entries) {
        let act = &w.element(*a).char_action;
        for (bb, eb) in c.w_l.elements.iter().zip(&c.entries) {
            let lhs = c.value(w.mul(*a, *bb)).ok_or_else(|| Error::Internal("W_L not closed".into()))?;
            let rhs: Vec<BigInt> = act.mul_vec(&eb.c).iter().zip(&ea.c).map(|(x, y)| x + y).collect();
            if lhs != rhs.as_slice() {
                return Err(Error::NotCocycle(format!("identity fails for elements {a}, {bb}")));
            }
        }
    }
    Ok(())
}

fn coboundary_system(w: &WeylGroup, gens: &[usize], values: &[Vec<BigInt>]) -> (IntMatrix, Vec<BigInt>) {
    let r = w.rank();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (&g, c) in gens.iter().zip(values) {
        let m = w.element(g).char_action.sub(&IntMatrix::identity(r));
        for i in 0..r {
            rows.push(m.row(i).to_vec());
            rhs.push(c[i].clone());
        }
    }
    (IntMatrix::from_rows(rows, r), rhs)
}

fn is_coboundary_of(w: &WeylGroup, sub: &Subgroup, c: &Cocycle, u: &[BigInt], k: &BigInt) -> bool {
    sub.elements.iter().all(|&e| {
        let wu = w.element(e).char_action.mul_vec(u);
        let lhs: Vec<BigInt> = wu.iter().zip(u).map(|(x, y)| x - y).collect();
        let want: Vec<BigInt> = c.value(e).expect("subgroup of W_L").iter().map(|x| x * k).collect();
        lhs == want
    })
}

/// Witness `u` with `c_w = w·u − u` on `sub`, and the order of the class.
///
/// `sub` must be a subgroup of `c.w_l`. The system is solved on generators and
/// every solution is re-checked on the whole subgroup.
pub fn solve_class(w: &WeylGroup, sub: &Subgroup, c: &Cocycle) -> Result<(Option<Vec<BigInt>>, BigInt)> {
    let r = w.rank();
    let gens = sub.generators(w);
    if gens.is_empty() {
        return Ok((Some(vec![BigInt::zero(); r]), BigInt::one()));
    }
    let values: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|&g| c.value(g).map(<[BigInt]>::to_vec).ok_or_else(|| Error::Internal("generator outside W_L".into())))
        .collect::<Result<_>>()?;
    let (a, y) = coboundary_system(w, &gens, &values);
    let sol = solve_z(&a, &y)?;
    let k = sol
        .min_multiplier
        .clone()
        .ok_or_else(|| Error::Internal("cocycle is not a rational coboundary".into()))?;
    let witness = sol.particular.clone();
    if let Some(u) = &witness {
        if !is_coboundary_of(w, sub, c, u, &BigInt::one()) {
            return Err(Error::Internal("generator witness fails on the full subgroup".into()));
        }
    }
    // independent re-check that k·c is a coboundary
    let yk: Vec<BigInt> = y.iter().map(|x| x * &k).collect();
    let uk = solve_z(&a, &yk)?
        .particular
        .ok_or_else(|| Error::Internal("k·c is not a coboundary for the minimal multiplier k".into()))?;
    if !is_coboundary_of(w, sub, c, &uk, &k) {
        return Err(Error::Internal("k·c fails to be a coboundary on the full subgroup".into()));
    }
    let exponent = BigInt::from(sub.exponent(w));
    if !exponent.is_multiple_of(&k) {
        return Err(Error::Internal(format!("class order {k} does not divide the exponent {exponent}")));
    }
    Ok((witness, k))
}

/// `Some(u)` with `c = δu`, or `None` if the class is non-trivial.
pub fn is_trivial_class(sw: &SharedWeyl, c: &Cocycle) -> Result<Option<Vec<BigInt>>> {
    Ok(solve_class(&sw.source, &c.w_l, c)?.0)
}

/// Smallest `k ≥ 1` with `k·[c] = 0`.
pub fn class_order(sw: &SharedWeyl, c: &Cocycle) -> Result<BigInt> {
    Ok(solve_class(&sw.source, &c.w_l, c)?.1)
}

/// `H¹` of a subgroup of `W` acting on `X*` through `char_action`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Report {
    pub invariants: AbelianInvariants,
    /// Coordinates of the given class in the decomposition of `invariants`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub class: Option<Vec<BigInt>>,
}

mod opt_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(x) => {
                let vals: Vec<serde_json::Value> = x.iter().map(bigint_json::to_value).collect();
                vals.serialize(s)
            }
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<BigInt>>, D::Error> {
        let v: Option<Vec<serde_json::Value>> = Option::deserialize(d)?;
        v.map(|xs| xs.iter().map(|x| bigint_json::from_value(x).map_err(serde::de::Error::custom)).collect())
            .transpose()
    }
}

/// Computes `H¹(sub, X*)` with `Z¹` presented through values on generators.
///
/// A spanning tree of the Cayley graph expresses every `c_g` through the
/// generator values; each non-tree edge gives one linear relation, and together
/// they cut out `Z¹` exactly.
pub fn h1_group_lattice(w: &WeylGroup, sub: &Subgroup, class: Option<&Cocycle>, cap: usize) -> Result<H1Report> {
    if sub.order() > cap {
        return Err(Error::CapExceeded { what: "subgroup for H^1".into(), cap: cap as u64, needed: sub.order() as u64 });
    }
    let r = w.rank();
    let gens = sub.generators(w);
    let m = gens.len();
    let n = r * m;
    if m == 0 {
        return Ok(H1Report { invariants: AbelianInvariants::trivial(), class: class.map(|_| Vec::new()) });
    }
    let selector = |s: usize| {
        let mut e = IntMatrix::zeros(r, n);
        for i in 0..r {
            e[(i, s * r + i)] = BigInt::one();
        }
        e
    };
    let sel: Vec<IntMatrix> = (0..m).map(selector).collect();
    let mut tree: Vec<Option<IntMatrix>> = vec![None; w.order()];
    tree[w.identity()] = Some(IntMatrix::zeros(r, n));
    let mut queue = VecDeque::from([w.identity()]);
    let mut constraints: Vec<Vec<BigInt>> = Vec::new();
    while let Some(g) = queue.pop_front() {
        let lg = tree[g].clone().expect("visited");
        for (s, &gen) in gens.iter().enumerate() {
            let h = w.mul(g, gen);
            // c_{gs} = g·c_s + c_g
            let via = w.element(g).char_action.mul(&sel[s]).add(&lg);
            match &tree[h] {
                None => {
                    tree[h] = Some(via);
                    queue.push_back(h);
                }
                Some(lh) => {
                    let diff = lh.sub(&via);
                    constraints.extend(diff.to_rows().into_iter().filter(|row| row.iter().any(|x| !x.is_zero())));
                }
            }
        }
    }
    let cycles = if constraints.is_empty() {
        IntMatrix::identity(n)
    } else {
        kernel_basis(&IntMatrix::from_rows(constraints, n))
    };
    let mut boundaries = Vec::new();
    for j in 0..r {
        let mut row = vec![BigInt::zero(); n];
        for (s, &gen) in gens.iter().enumerate() {
            let col = w.element(gen).char_action.column(j);
            for i in 0..r {
                row[s * r + i] = &col[i] - if i == j { BigInt::one() } else { BigInt::zero() };
            }
        }
        boundaries.push(row);
    }
    let q = Subquotient::new(cycles, &IntMatrix::from_rows(boundaries, n))?;
    let class = match class {
        None => None,
        Some(c) => {
            let mut v = Vec::with_capacity(n);
            for &g in &gens {
                v.extend(c.value(g).ok_or_else(|| Error::Internal("generator outside W_L".into()))?.iter().cloned());
            }
            Some(q.class_of(&v).ok_or_else(|| Error::Internal("cocycle violates a group relation".into()))?)
        }
    };
    Ok(H1Report { invariants: q.invariants.clone(), class })
}

/// Obstruction data for the reflection subgroup when it differs from `W_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionObstruction {
    pub subgroup: Subgroup,
    pub trivial: bool,
    #[serde(with = "bigint_json")]
    pub class_order: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionResult {
    pub isogeny: String,
    pub xi: RatVector,
    pub xi_ambient: RatVector,
    pub w_l: Subgroup,
    pub w_l_exponent: u64,
    pub w_l_abelian: bool,
    pub cocycle: Vec<CocycleEntry>,
    pub trivial: bool,
    #[serde(with = "opt_vec")]
    pub witness_u: Option<Vec<BigInt>>,
    #[serde(with = "bigint_json")]
    pub class_order: BigInt,
    /// `b̲(ξ)` in `X*(S)` coordinates, a rational solution of `c = δu`.
    pub rational_witness: RatVector,
    pub rational_witness_ambient: RatVector,
    pub rational_witness_integral: bool,
    pub h1: Option<H1Report>,
    pub reflection_subgroup: Subgroup,
    pub reflection_equals_stabilizer: bool,
    pub reflection_obstruction: Option<ReflectionObstruction>,
}

#[derive(Clone, Copy, Debug)]
pub struct ObstructionOptions {
    pub subgroup_cap: usize,
    pub h1_cap: usize,
    pub compute_h1: bool,
}

impl Default for ObstructionOptions {
    fn default() -> Self {
        ObstructionOptions { subgroup_cap: DEFAULT_SUBGROUP_CAP, h1_cap: DEFAULT_H1_CAP, compute_h1: true }
    }
}

/// Full analysis of one point.
pub fn analyze(
    iso: &IsogenyDatum,
    sw: &SharedWeyl,
    b: &LevelTensor,
    pt: &SemisimplePoint,
    opts: ObstructionOptions,
) -> Result<ObstructionResult> {
    let c = centralizer_cocycle(iso, sw, b, pt, opts.subgroup_cap)?;
    let ws = &sw.source;
    let (witness, order) = solve_class(ws, &c.w_l, &c)?;
    let n = BigInt::from(c.w_l.order());
    let (_, order_times_n) = {
        // |W_L|·c must be a coboundary
        let scaled = Cocycle {
            w_l: c.w_l.clone(),
            entries: c
                .entries
                .iter()
                .map(|e| CocycleEntry { element: e.element, d: e.d.clone(), c: e.c.iter().map(|x| x * &n).collect() })
                .collect(),
        };
        solve_class(ws, &c.w_l, &scaled)?
    };
    if !order_times_n.is_one() {
        return Err(Error::Internal("|W_L|·c is not a coboundary".into()));
    }
    let rational = b.apply_rational(&pt.xi);
    let h1 = if opts.compute_h1 && c.w_l.order() <= opts.h1_cap {
        Some(h1_group_lattice(ws, &c.w_l, Some(&c), opts.h1_cap)?)
    } else {
        None
    };
    if let Some(h) = &h1 {
        let zero = h.class.as_ref().is_some_and(|v| v.iter().all(Zero::is_zero));
        if zero != witness.is_some() {
            return Err(Error::Internal("H^1 class and direct solve disagree on triviality".into()));
        }
    }
    let refl = integral_reflection_subgroup(&sw.target, &pt.xi, &iso.target)?;
    let reflection_obstruction = if refl.equals_stabilizer {
        None
    } else {
        let (u, k) = solve_class(ws, &refl.subgroup, &c)?;
        Some(ReflectionObstruction { subgroup: refl.subgroup.clone(), trivial: u.is_some(), class_order: k })
    };
    Ok(ObstructionResult {
        isogeny: iso.name.clone(),
        xi: pt.xi.clone(),
        xi_ambient: pt.ambient(iso),
        w_l_exponent: c.w_l.exponent(ws),
        w_l_abelian: c.w_l.is_abelian(ws),
        w_l: c.w_l.clone(),
        cocycle: c.entries,
        trivial: witness.is_some(),
        witness_u: witness,
        class_order: order,
        rational_witness_ambient: iso.source.char_to_ambient(&rational),
        rational_witness_integral: rational.is_integral(),
        rational_witness: rational,
        h1,
        reflection_subgroup: refl.subgroup,
        reflection_equals_stabilizer: refl.equals_stabilizer,
        reflection_obstruction,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub xi: RatVector,
    pub xi_ambient: RatVector,
    pub orbit_size: usize,
    pub w_l_order: usize,
    pub w_l_exponent: u64,
    pub reflection_order: usize,
    pub trivial: bool,
    #[serde(with = "bigint_json")]
    pub class_order: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub isogeny: String,
    pub max_denominator: u64,
    pub points_enumerated: u64,
    pub rows: Vec<ScanRow>,
    pub trivial_count: usize,
    pub nontrivial_count: usize,
}

/// Number of candidate points `Σ_{d ≤ D} d^r` a scan would enumerate.
pub fn scan_size(rank: usize, max_denominator: u64) -> Option<u64> {
    (1..=max_denominator).try_fold(0u64, |acc, d| d.checked_pow(rank as u32).and_then(|p| acc.checked_add(p)))
}

fn value_key(v: &RatVector) -> Vec<BigRational> {
    v.entries()
}

/// Points of `X_*(T)⊗ℚ / X_*(T)` with denominator at most `D`, one per W-orbit.
/// Returns `(representative, orbit size)` sorted by representative.
pub fn orbit_representatives(w: &WeylGroup, max_denominator: u64, cap: u64) -> Result<(Vec<(RatVector, usize)>, u64)> {
    let r = w.rank();
    let size = scan_size(r, max_denominator).unwrap_or(u64::MAX);
    if size > cap {
        return Err(Error::CapExceeded { what: "scan point set".into(), cap, needed: size });
    }
    let mut points = Vec::new();
    for d in 1..=max_denominator {
        let dd = BigInt::from(d);
        let mut k = vec![0u64; r];
        loop {
            let g = k.iter().fold(d, |g, &x| g.gcd(&x));
            if g == 1 {
                let num = k.iter().map(|&x| BigInt::from(x)).collect();
                points.push(RatVector::new(num, dd.clone())?);
            }
            let mut i = 0;
            while i < r {
                k[i] += 1;
                if k[i] < d {
                    break;
                }
                k[i] = 0;
                i += 1;
            }
            if i == r {
                break;
            }
        }
    }
    points.sort_by_cached_key(value_key);
    let mut seen: HashSet<RatVector> = HashSet::new();
    let mut reps = Vec::new();
    for p in points {
        if seen.contains(&p) {
            continue;
        }
        let mut orbit = HashSet::new();
        for e in 0..w.order() {
            orbit.insert(w.act_cochar(e, &p).fractional_part());
        }
        let size = orbit.len();
        seen.extend(orbit);
        reps.push((p, size));
    }
    Ok((reps, size))
}

/// Exhaustive scan over W-orbit representatives with denominators at most `D`.
pub fn scan_points(
    iso: &IsogenyDatum,
    sw: &SharedWeyl,
    b: &LevelTensor,
    max_denominator: u64,
    point_cap: u64,
    opts: ObstructionOptions,
) -> Result<ScanReport> {
    if !b.is_invariant(sw) {
        return Err(Error::NotInvariant(format!("{} on {}", b.matrix, iso.name)));
    }
    let (reps, enumerated) = orbit_representatives(&sw.target, max_denominator, point_cap)?;
    let opts = ObstructionOptions { compute_h1: false, ..opts };
    let rows: Vec<ScanRow> = reps
        .par_iter()
        .map(|(xi, orbit_size)| {
            let pt = SemisimplePoint { xi: xi.clone() };
            let res = analyze(iso, sw, b, &pt, opts)?;
            Ok(ScanRow {
                xi: xi.clone(),
                xi_ambient: res.xi_ambient,
                orbit_size: *orbit_size,
                w_l_order: res.w_l.order(),
                w_l_exponent: res.w_l_exponent,
                reflection_order: res.reflection_subgroup.order(),
                trivial: res.trivial,
                class_order: res.class_order,
            })
        })
        .collect::<Result<_>>()?;
    let trivial_count = rows.iter().filter(|r| r.trivial).count();
    Ok(ScanReport {
        isogeny: iso.name.clone(),
        max_denominator,
        points_enumerated: enumerated,
        nontrivial_count: rows.len() - trivial_count,
        trivial_count,
        rows,
    })
}
