use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// A finite simplicial complex on vertices `0..vertex_count`, stored by dimension.
///
/// Simplices are sorted vertex lists; each dimension is sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NerveJson", into = "NerveJson")]
pub struct Nerve {
    vertex_count: usize,
    max_dim: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    truncated: bool,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

#[derive(Serialize, Deserialize)]
struct NerveJson {
    vertex_count: usize,
    max_dim: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    truncated: bool,
}

impl TryFrom<NerveJson> for Nerve {
    type Error = Error;
    fn try_from(j: NerveJson) -> Result<Self> {
        let faces: Vec<Vec<usize>> = j.simplices.into_iter().flatten().collect();
        let mut n = Nerve::from_simplices(j.vertex_count, &faces, j.max_dim)?;
        n.truncated |= j.truncated;
        Ok(n)
    }
}

impl From<Nerve> for NerveJson {
    fn from(n: Nerve) -> Self {
        NerveJson { vertex_count: n.vertex_count, max_dim: n.max_dim, simplices: n.simplices, truncated: n.truncated }
    }
}

impl Nerve {
    fn build(vertex_count: usize, max_dim: usize, sets: BTreeSet<Vec<usize>>, truncated: bool) -> Nerve {
        let mut simplices = vec![Vec::new(); max_dim + 1];
        for s in sets {
            simplices[s.len() - 1].push(s);
        }
        while simplices.len() > 1 && simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        let index = simplices
            .iter()
            .map(|dim| dim.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Nerve { vertex_count, max_dim, simplices, truncated, index }
    }

    /// Downward closure of the given faces, truncated at `max_dim`.
    pub fn from_simplices(vertex_count: usize, faces: &[Vec<usize>], max_dim: usize) -> Result<Nerve> {
        let mut sets = BTreeSet::new();
        let mut truncated = false;
        for f in faces {
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::InvalidInput("empty simplex".into()));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::InvalidInput(format!("vertex {v} out of range 0..{vertex_count}")));
            }
            if s.len() > max_dim + 1 {
                truncated = true;
            }
            let k = s.len();
            if k > 20 {
                return Err(Error::InvalidInput("simplex with more than 20 vertices".into()));
            }
            // every nonempty subset of size at most max_dim + 1
            for mask in 1u64..(1u64 << k) {
                if (mask.count_ones() as usize) <= max_dim + 1 {
                    sets.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect::<Vec<_>>());
                }
            }
        }
        Ok(Self::build(vertex_count, max_dim, sets, truncated))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Whether simplices above `max_dim` were dropped.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Highest dimension with a simplex.
    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices.get(p).map_or(0, Vec::len)
    }

    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        self.simplices.get(p).map_or(&[], |v| &v[..])
    }

    /// Index of a simplex given by possibly unsorted vertices, with the permutation sign.
    pub fn locate(&self, vertices: &[usize]) -> Option<(usize, i8)> {
        let mut v = vertices.to_vec();
        let mut sign = 1i8;
        // insertion sort tracking transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let p = v.len().checked_sub(1)?;
        self.index.get(p)?.get(&v).map(|&i| (i, sign))
    }

    /// Matrix of `δ: Cᵖ → Cᵖ⁺¹` with integer coefficients (rows: `(p+1)`-simplices).
    pub fn coboundary_matrix(&self, p: usize) -> IntMatrix {
        let rows = self.count(p + 1);
        let cols = self.count(p);
        let mut m = IntMatrix::zeros(rows, cols);
        for (r, s) in self.simplices(p + 1).iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let (c, _) = self.locate(&face).expect("downward closed");
                m[(r, c)] += BigInt::from(if i % 2 == 0 { 1 } else { -1 });
            }
        }
        m
    }

    /// Checks that every face of every simplex is present.
    pub fn is_downward_closed(&self) -> bool {
        (1..self.simplices.len()).all(|p| {
            self.simplices[p].iter().all(|s| {
                (0..s.len()).all(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    self.locate(&f).is_some()
                })
            })
        })
    }
}

/// Nerve of a cover of a finite ground set, including simplices up to `max_dim`.
pub fn nerve_of_cover(cover: &[Vec<usize>], max_dim: usize) -> Result<Nerve> {
    if cover.is_empty() {
        return Err(Error::InvalidInput("empty cover".into()));
    }
    let sets: Vec<BTreeSet<usize>> = cover.iter().map(|c| c.iter().copied().collect()).collect();
    let mut found = BTreeSet::new();
    let mut truncated = false;
    // grow simplices one vertex at a time, carrying the running intersection
    let mut frontier: Vec<(Vec<usize>, BTreeSet<usize>)> = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        if !s.is_empty() {
            found.insert(vec![i]);
            frontier.push((vec![i], s.clone()));
        }
    }
    let mut dim = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (simplex, inter) in &frontier {
            let last = *simplex.last().expect("nonempty");
            for (j, s) in sets.iter().enumerate().skip(last + 1) {
                let meet: BTreeSet<usize> = inter.intersection(s).copied().collect();
                if meet.is_empty() {
                    continue;
                }
                if dim + 1 > max_dim {
                    truncated = true;
                    continue;
                }
                let mut t = simplex.clone();
                t.push(j);
                found.insert(t.clone());
                next.push((t, meet));
            }
        }
        dim += 1;
        frontier = next;
    }
    Ok(Nerve::build(cover.len(), max_dim, found, truncated))
}
