use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cochain::{coboundary, is_cocycle, trivialize, Cochain};
use super::nerve::{nerve_of_cover, Nerve};
use crate::error::{Error, Result};
use crate::levels::LevelTensor;
use crate::linalg::{AbelianInvariants, IntMatrix};
use crate::rootdata::IsogenyDatum;
use crate::weyl::SharedWeyl;

/// Cover of one circle factor by arcs, with the jump of the logarithm branch
/// across each overlap of consecutive arcs.
///
/// Closed circles need at least three arcs so that no three arcs meet.
/// `jumps[j]` is `log_{j+1} − log_j` divided by `2πi`, read cyclically on a
/// closed circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleCover {
    pub arcs: usize,
    pub closed: bool,
    pub jumps: Vec<i64>,
}

impl CircleCover {
    /// `k` arcs, all branches continuous except across the last overlap.
    pub fn winding(arcs: usize, winding: i64) -> Self {
        let mut jumps = vec![0; arcs];
        if let Some(last) = jumps.last_mut() {
            *last = winding;
        }
        CircleCover { arcs, closed: true, jumps }
    }

    /// A chain of arcs that does not close up.
    pub fn open(arcs: usize) -> Self {
        CircleCover { arcs, closed: false, jumps: vec![0; arcs.saturating_sub(1)] }
    }

    fn points(&self) -> usize {
        if self.closed {
            2 * self.arcs
        } else {
            2 * self.arcs + 1
        }
    }

    fn arc(&self, j: usize) -> [usize; 3] {
        let n = self.points();
        [2 * j, (2 * j + 1) % n, (2 * j + 2) % n]
    }

    /// Branch offset from arc `a` to arc `b`, if they overlap.
    fn jump(&self, a: usize, b: usize) -> Option<i64> {
        if a == b {
            return Some(0);
        }
        let next = |j: usize| if self.closed { (j + 1) % self.arcs } else { j + 1 };
        if next(a) == b {
            Some(self.jumps[a])
        } else if next(b) == a {
            Some(-self.jumps[b])
        } else {
            None
        }
    }

    pub fn total_winding(&self) -> i64 {
        if self.closed {
            self.jumps.iter().sum()
        } else {
            0
        }
    }
}

/// Product cover of `(S¹)^r`; circle `i` is the loop of the `i`-th basis cocharacter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusCoverModel {
    pub circles: Vec<CircleCover>,
}

impl TorusCoverModel {
    /// Every circle closed with `arcs` arcs and the given winding numbers.
    pub fn standard(windings: &[i64], arcs: usize) -> Self {
        TorusCoverModel { circles: windings.iter().map(|&w| CircleCover::winding(arcs, w)).collect() }
    }

    pub fn lattice_rank(&self) -> usize {
        self.circles.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.circles.is_empty() {
            return Err(Error::InvalidInput("a torus model needs at least one circle".into()));
        }
        for (i, c) in self.circles.iter().enumerate() {
            let min = if c.closed { 3 } else { 1 };
            if c.arcs < min {
                return Err(Error::InvalidInput(format!("circle {i} has {} arcs, needs at least {min}", c.arcs)));
            }
            let want = if c.closed { c.arcs } else { c.arcs - 1 };
            if c.jumps.len() != want {
                return Err(Error::InvalidInput(format!(
                    "inconsistent branch offsets on circle {i}: {} jumps for {want} overlaps",
                    c.jumps.len()
                )));
            }
        }
        Ok(())
    }

    /// Opens in mixed-radix order over arc indices (circle 0 fastest), as
    /// subsets of the product grid of circle points.
    pub fn cover(&self) -> Vec<Vec<usize>> {
        let opens: usize = self.circles.iter().map(|c| c.arcs).product();
        (0..opens)
            .map(|v| {
                let mut pts = vec![0usize];
                let mut stride = 1;
                for (c, a) in self.circles.iter().zip(self.arcs_of(v)) {
                    pts = pts.iter().flat_map(|&q| c.arc(a).map(|p| q + stride * p)).collect();
                    stride *= c.points();
                }
                pts.sort_unstable();
                pts.dedup();
                pts
            })
            .collect()
    }

    /// Arc index of open `v` on each circle.
    pub fn arcs_of(&self, mut v: usize) -> Vec<usize> {
        self.circles
            .iter()
            .map(|c| {
                let a = v % c.arcs;
                v /= c.arcs;
                a
            })
            .collect()
    }

    /// Nerve of the product cover, with simplices up to `max_dim`.
    pub fn nerve(&self, max_dim: usize) -> Result<Nerve> {
        self.validate()?;
        nerve_of_cover(&self.cover(), max_dim)
    }

    /// Index of the open with the given arc on each circle.
    pub fn open_index(&self, arcs: &[usize]) -> usize {
        let mut v = 0;
        for (c, &a) in self.circles.iter().zip(arcs).rev() {
            v = v * c.arcs + a;
        }
        v
    }
}

/// The branch-difference cocycle `λ_{αβ} ∈ X_*(T)` on the nerve of the model.
pub fn torus_log_cocycle(model: &TorusCoverModel, nerve: &Nerve) -> Result<Cochain> {
    model.validate()?;
    let r = model.lattice_rank();
    let mut values = Vec::with_capacity(nerve.count(1));
    for e in nerve.simplices(1) {
        let (a, b) = (model.arcs_of(e[0]), model.arcs_of(e[1]));
        let mut v = vec![BigInt::zero(); r];
        for (i, c) in model.circles.iter().enumerate() {
            let j = c
                .jump(a[i], b[i])
                .ok_or_else(|| Error::InvalidInput(format!("opens {} and {} meet across non-adjacent arcs", e[0], e[1])))?;
            v[i] = BigInt::from(j);
        }
        values.push(v);
    }
    let lambda = Cochain::new(nerve, 1, AbelianInvariants::free(r), values)?;
    if !is_cocycle(nerve, &lambda) {
        return Err(Error::InvalidInput("inconsistent branch offsets: δλ ≠ 0 on a triple overlap".into()));
    }
    Ok(lambda)
}

/// Sum of a 1-cochain along the loop around circle `i`, with every other
/// coordinate held on arc 0.
pub fn winding_along(model: &TorusCoverModel, nerve: &Nerve, c: &Cochain, i: usize) -> Result<Vec<BigInt>> {
    let circle = &model.circles[i];
    let mut total = vec![BigInt::zero(); c.coefficients.generator_count()];
    if !circle.closed {
        return Ok(total);
    }
    let mut arcs = vec![0; model.lattice_rank()];
    for j in 0..circle.arcs {
        arcs[i] = j;
        let u = model.open_index(&arcs);
        arcs[i] = (j + 1) % circle.arcs;
        let v = model.open_index(&arcs);
        let x = c
            .value_on(nerve, &[u, v])
            .ok_or_else(|| Error::Internal(format!("loop edge {u}–{v} missing from the nerve")))?;
        for (t, y) in total.iter_mut().zip(x) {
            *t += y;
        }
    }
    Ok(total)
}

/// Winding matrix: row `i` is the winding vector of `c` around circle `i`.
pub fn windings(model: &TorusCoverModel, nerve: &Nerve, c: &Cochain) -> Result<Vec<Vec<BigInt>>> {
    (0..model.lattice_rank()).map(|i| winding_along(model, nerve, c, i)).collect()
}

/// The 1-cocycle with winding vector `rows[i] ∈ A` around circle `i`,
/// concentrated on the wrap-around overlap of each closed circle.
pub fn winding_cocycle(model: &TorusCoverModel, nerve: &Nerve, coefficients: &AbelianInvariants, rows: &[Vec<BigInt>]) -> Result<Cochain> {
    let m = coefficients.generator_count();
    let mut values = Vec::with_capacity(nerve.count(1));
    for e in nerve.simplices(1) {
        let (a, b) = (model.arcs_of(e[0]), model.arcs_of(e[1]));
        let mut v = vec![BigInt::zero(); m];
        for (i, c) in model.circles.iter().enumerate() {
            let last = c.arcs - 1;
            let s = match (a[i], b[i]) {
                (x, 0) if c.closed && x == last => 1,
                (0, y) if c.closed && y == last => -1,
                _ => 0,
            };
            if s != 0 {
                for (t, y) in v.iter_mut().zip(&rows[i]) {
                    *t += y * BigInt::from(s);
                }
            }
        }
        values.push(v);
    }
    Cochain::new(nerve, 1, coefficients.clone(), values)
}

/// Whether `[c]` is the class determined by its winding numbers, i.e. whether
/// `c` minus the matching [`winding_cocycle`] is a coboundary.
pub fn class_matches_windings(model: &TorusCoverModel, nerve: &Nerve, c: &Cochain) -> Result<bool> {
    let w = windings(model, nerve, c)?;
    let reference = winding_cocycle(model, nerve, &c.coefficients, &w)?;
    Ok(trivialize(nerve, &c.add(&reference.neg())?)?.is_some())
}

/// `Λ_{αβ} = b̲(λ_{αβ}) ∈ X*(S)` pointwise.
pub fn gerbe_cocycle_from_level(nerve: &Nerve, lambda: &Cochain, b: &LevelTensor, iso: &IsogenyDatum) -> Result<Cochain> {
    if b.isogeny != iso.name {
        return Err(Error::InvalidInput(format!("level lives over {}, not {}", b.isogeny, iso.name)));
    }
    if lambda.coefficients != AbelianInvariants::free(iso.target.rank()) {
        return Err(Error::DimensionMismatch(format!(
            "λ takes values in {}, expected X_*(T) of rank {}",
            lambda.coefficients,
            iso.target.rank()
        )));
    }
    if !is_cocycle(nerve, lambda) {
        return Err(Error::NotCocycle("λ".into()));
    }
    let out = lambda.map_free(&b.matrix)?;
    debug_assert!(coboundary(nerve, &out).is_zero());
    Ok(out)
}

/// `Λ(w·λ) = w·Λ(λ)` for every element of the shared Weyl group.
pub fn is_weyl_equivariant(nerve: &Nerve, lambda: &Cochain, b: &LevelTensor, iso: &IsogenyDatum, sw: &SharedWeyl) -> Result<bool> {
    let big_lambda = gerbe_cocycle_from_level(nerve, lambda, b, iso)?;
    for w in 0..sw.order() {
        let a_t: &IntMatrix = &sw.target.element(w).cochar_action;
        let c_s: &IntMatrix = &sw.source.element(w).char_action;
        let lhs = gerbe_cocycle_from_level(nerve, &lambda.map_free(a_t)?, b, iso)?;
        if lhs != big_lambda.map_free(c_s)? {
            return Ok(false);
        }
    }
    Ok(true)
}
