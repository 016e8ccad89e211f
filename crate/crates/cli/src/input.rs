//! File schemas and small parsers for command arguments.

use std::fs;
use std::path::Path;

use gerbe_core::cech::{nerve_of_cover, FiniteAction, GroupCochain2, GroupTable, Nerve};
use gerbe_core::levels::{named_form_tensor, LevelTensor, NamedForm};
use gerbe_core::linalg::{parse_rational, AbelianInvariants, IntMatrix};
use gerbe_core::rootdata::{IsogenyDatum, Series};
use gerbe_core::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// Level expressions: `b0`, `2*b0`, `b0 + sum_sq`, `-b0 + 3*sum_sq`, or a JSON
/// matrix such as `[[2,1],[1,2]]`.
pub fn parse_level(expr: &str, iso: &IsogenyDatum) -> Result<LevelTensor> {
    let expr = expr.trim();
    if expr.starts_with('[') {
        let m: IntMatrix = serde_json::from_str(expr).map_err(|e| Error::InvalidInput(format!("level matrix: {e}")))?;
        return LevelTensor::new(iso, m);
    }
    let mut form = NamedForm { b0: BigRational::from_integer(0.into()), sum_sq: BigRational::from_integer(0.into()) };
    let normalized = expr.replace(' ', "").replace('-', "+-");
    for term in normalized.split('+').filter(|t| !t.is_empty()) {
        let (coef, name) = match term.rsplit_once('*') {
            Some((c, n)) => (parse_rational(c)?, n),
            None => match term.strip_prefix('-') {
                Some(n) => (BigRational::from_integer((-1).into()), n),
                None => (BigRational::from_integer(1.into()), term),
            },
        };
        match name {
            "b0" => form.b0 += coef,
            "sum_sq" => form.sum_sq += coef,
            other => return Err(Error::InvalidInput(format!("unknown level term {other:?}; use b0, sum_sq or a matrix"))),
        }
    }
    named_form_tensor(iso, &form)?
        .1
        .ok_or_else(|| Error::InvalidInput(format!("level {expr:?} is not integral on {}", iso.name)))
}

/// `A:1-4,B:2-3` style range; an empty string is the empty range.
pub fn parse_range(range: &str) -> Result<Vec<(Series, usize)>> {
    let mut out = Vec::new();
    for part in range.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (s, r) = part
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("range entry {part:?} should look like A:1-4")))?;
        let series: Series = s.parse()?;
        let bad = || Error::InvalidInput(format!("bad rank range {r:?}"));
        let (lo, hi) = match r.split_once('-') {
            Some((a, b)) => (a.trim().parse::<usize>().map_err(|_| bad())?, b.trim().parse::<usize>().map_err(|_| bad())?),
            None => {
                let x = r.trim().parse::<usize>().map_err(|_| bad())?;
                (x, x)
            }
        };
        for rank in lo..=hi {
            out.push((series, rank));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub group: GroupTable,
    pub vertex_perm: Vec<Vec<usize>>,
    #[serde(default)]
    pub coefficient_action: Option<Vec<IntMatrix>>,
}

/// A complex given by a cover of a finite ground set or by explicit simplices.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub cover: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub nerve: Option<Nerve>,
    /// Upper bound on the simplex dimension built from a cover.
    #[serde(default)]
    pub max_dim: Option<usize>,
    #[serde(default)]
    pub action: Option<ActionFile>,
}

impl ComplexFile {
    /// The nerve with simplices up to `needed` (or the file's cap, if lower).
    pub fn nerve(&self, needed: usize) -> Result<Nerve> {
        match (&self.cover, &self.nerve) {
            (Some(c), None) => nerve_of_cover(c, self.max_dim.map_or(needed, |m| m.min(needed))),
            (None, Some(n)) => Ok(n.clone()),
            _ => Err(Error::InvalidInput("complex file needs exactly one of \"cover\" and \"nerve\"".into())),
        }
    }

    pub fn action(&self, nerve: &Nerve, coefficients: &AbelianInvariants) -> Result<FiniteAction> {
        let given = self.action.as_ref().ok_or_else(|| Error::InvalidInput("complex file has no \"action\"".into()))?;
        let n = given.group.order();
        let m = coefficients.generator_count();
        let coefficient_action = match &given.coefficient_action {
            Some(a) => a.iter().map(|x| if m == 0 { IntMatrix::zeros(0, 0) } else { x.clone() }).collect(),
            None => vec![IntMatrix::identity(m); n],
        };
        let act = FiniteAction {
            group: given.group.clone(),
            vertex_perm: given.vertex_perm.clone(),
            coefficients: coefficients.clone(),
            coefficient_action,
        };
        act.validate(nerve)?;
        Ok(act)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub values: Vec<Vec<i64>>,
}

impl CochainFile {
    pub fn values(&self) -> Vec<Vec<BigInt>> {
        self.values.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionFile {
    #[serde(default)]
    pub description: Option<String>,
    pub group: GroupTable,
    pub coefficients: String,
    /// `psi[g][h]` in the generators of the coefficient group.
    pub psi: Vec<Vec<Vec<i64>>>,
}

impl ExtensionFile {
    pub fn cochain(&self) -> Result<GroupCochain2> {
        let coefficients = AbelianInvariants::parse(&self.coefficients)?;
        let values = self.psi.iter().map(|r| r.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect()).collect();
        Ok(GroupCochain2 { coefficients, values })
    }
}
