//! Weyl groups as explicit matrix groups on `X*(T)` and `X_*(T)`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RatVector};
use crate::rootdata::{IsogenyDatum, RootDatum};

pub const DEFAULT_WEYL_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylElement {
    pub char_action: IntMatrix,
    pub cochar_action: IntMatrix,
    /// Word in the simple reflections (positions in `RootDatum::simple_indices`),
    /// read as a product from left to right.
    pub word: Vec<usize>,
}

/// Reflection `s_α` for root index `i`, as `(char_action, cochar_action)`.
pub fn reflection(rd: &RootDatum, i: usize) -> (IntMatrix, IntMatrix) {
    let r = rd.rank();
    let a = rd.root(i);
    let ac = rd.coroot(i);
    let mut c = IntMatrix::identity(r);
    let mut k = IntMatrix::identity(r);
    for p in 0..r {
        for q in 0..r {
            // s(χ) = χ - <χ, α̌> α and s(λ) = λ - <α, λ> α̌
            c[(p, q)] -= &a[p] * &ac[q];
            k[(p, q)] -= &ac[p] * &a[q];
        }
    }
    (c, k)
}

/// A finite Weyl group with its elements in canonical order.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    index: HashMap<Vec<BigInt>, usize>,
    generators: Vec<usize>,
    identity: usize,
    rank: usize,
}

impl WeylGroup {
    /// Breadth-first closure over the simple reflections.
    ///
    /// Elements are sorted lexicographically by the entries of `char_action`.
    pub fn generate(rd: &RootDatum, cap: u64) -> Result<WeylGroup> {
        let r = rd.rank();
        let gens: Vec<(IntMatrix, IntMatrix)> = rd.simple_indices().iter().map(|&i| reflection(rd, i)).collect();
        let id = WeylElement { char_action: IntMatrix::identity(r), cochar_action: IntMatrix::identity(r), word: vec![] };
        let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
        seen.insert(id.char_action.entries().to_vec(), 0);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (g, (c, k)) in gens.iter().enumerate() {
                let ch = c.mul(&elements[e].char_action);
                let key = ch.entries().to_vec();
                if seen.contains_key(&key) {
                    continue;
                }
                if elements.len() as u64 >= cap {
                    return Err(Error::CapExceeded {
                        what: format!("Weyl group of {}", rd.name()),
                        cap,
                        needed: elements.len() as u64 + 1,
                    });
                }
                let mut word = vec![g];
                word.extend_from_slice(&elements[e].word);
                let el = WeylElement { char_action: ch, cochar_action: k.mul(&elements[e].cochar_action), word };
                seen.insert(key, elements.len());
                queue.push_back(elements.len());
                elements.push(el);
            }
        }
        elements.sort_by(|a, b| a.char_action.entries().cmp(b.char_action.entries()));
        Ok(Self::assemble(elements, rd.simple_indices().len(), r))
    }

    fn assemble(elements: Vec<WeylElement>, n_gens: usize, rank: usize) -> WeylGroup {
        let index: HashMap<Vec<BigInt>, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.char_action.entries().to_vec(), i)).collect();
        let identity = index[IntMatrix::identity(rank).entries()];
        let generators = (0..n_gens)
            .map(|g| elements.iter().position(|e| e.word == [g]).expect("every simple reflection is an element"))
            .collect();
        WeylGroup { elements, index, generators, identity, rank }
    }

    /// The same abstract group acting on another datum with the same root system,
    /// keeping element indices. Used to act on both tori of an isogeny.
    pub fn realize_on(&self, other: &RootDatum) -> Result<WeylGroup> {
        let r = other.rank();
        let gens: Vec<(IntMatrix, IntMatrix)> = other.simple_indices().iter().map(|&i| reflection(other, i)).collect();
        if gens.len() != self.generators.len() {
            return Err(Error::InvalidInput("root systems have different numbers of simple roots".into()));
        }
        let mut elements = Vec::with_capacity(self.elements.len());
        for e in &self.elements {
            let mut c = IntMatrix::identity(r);
            let mut k = IntMatrix::identity(r);
            for &g in &e.word {
                c = c.mul(&gens[g].0);
                k = k.mul(&gens[g].1);
            }
            elements.push(WeylElement { char_action: c, cochar_action: k, word: e.word.clone() });
        }
        let index: HashMap<Vec<BigInt>, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.char_action.entries().to_vec(), i)).collect();
        if index.len() != elements.len() {
            return Err(Error::InvalidInput(format!("Weyl group does not act faithfully on X*(T) of {}", other.name())));
        }
        Ok(WeylGroup { elements, index, generators: self.generators.clone(), identity: self.identity, rank: r })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    /// Element indices of the simple reflections.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Index of `char_action`, if it is an element.
    pub fn lookup(&self, char_action: &IntMatrix) -> Option<usize> {
        self.index.get(char_action.entries()).copied()
    }

    /// Index of the product `wᵢ·wⱼ` (apply `wⱼ` first).
    pub fn mul(&self, i: usize, j: usize) -> usize {
        let m = self.elements[i].char_action.mul(&self.elements[j].char_action);
        self.lookup(&m).expect("group closed under multiplication")
    }

    pub fn inverse(&self, i: usize) -> usize {
        // contragredience: the inverse of C is the transpose of the cochar action
        self.lookup(&self.elements[i].cochar_action.transpose()).expect("group closed under inverse")
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    pub fn act_cochar(&self, i: usize, v: &RatVector) -> RatVector {
        RatVector::apply(&self.elements[i].cochar_action, v)
    }

    pub fn act_char(&self, i: usize, v: &RatVector) -> RatVector {
        RatVector::apply(&self.elements[i].char_action, v)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order()).collect() }
    }

    /// Subgroup generated by the given element indices.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut members = vec![false; self.order()];
        members[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if !members[y] {
                    members[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup { elements: (0..self.order()).filter(|&i| members[i]).collect() }
    }
}

/// The group `W` acting on both tori of an isogeny with matching element indices.
#[derive(Clone, Debug)]
pub struct SharedWeyl {
    /// Action on `X*(S)`, `X_*(S)`.
    pub source: WeylGroup,
    /// Action on `X*(T)`, `X_*(T)`.
    pub target: WeylGroup,
}

impl SharedWeyl {
    pub fn generate(iso: &IsogenyDatum, cap: u64) -> Result<SharedWeyl> {
        let source = WeylGroup::generate(&iso.source, cap)?;
        let target = source.realize_on(&iso.target)?;
        // the lattice maps must intertwine the two actions
        for &g in source.generators() {
            let a = iso.cochar_map.mul(&source.element(g).cochar_action);
            let b = target.element(g).cochar_action.mul(&iso.cochar_map);
            if a != b {
                return Err(Error::Internal(format!("{}: Weyl actions do not commute with X_*(S) -> X_*(T)", iso.name)));
            }
        }
        Ok(SharedWeyl { source, target })
    }

    pub fn order(&self) -> usize {
        self.source.order()
    }
}

/// A subgroup as a sorted list of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub elements: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&i| other.contains(i))
    }

    /// Closure under products and inverses, checked over all pairs.
    pub fn is_closed(&self, w: &WeylGroup) -> bool {
        self.contains(w.identity())
            && self.elements.iter().all(|&i| {
                self.contains(w.inverse(i)) && self.elements.iter().all(|&j| self.contains(w.mul(i, j)))
            })
    }

    /// A generating set chosen greedily in canonical order.
    pub fn generators(&self, w: &WeylGroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = w.closure(&[]);
        for &x in &self.elements {
            if !span.contains(x) {
                gens.push(x);
                span = w.closure(&gens);
            }
            if span.order() == self.order() {
                break;
            }
        }
        gens
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self, w: &WeylGroup) -> u64 {
        self.elements.iter().fold(1u64, |l, &i| l.lcm(&(w.element_order(i) as u64)))
    }

    pub fn is_abelian(&self, w: &WeylGroup) -> bool {
        self.elements.iter().all(|&i| self.elements.iter().all(|&j| w.mul(i, j) == w.mul(j, i)))
    }

    /// Whether every non-identity element has order 2 (which forces the group to be abelian).
    pub fn is_elementary_abelian_2(&self, w: &WeylGroup) -> bool {
        self.elements.iter().all(|&i| i == w.identity() || w.element_order(i) == 2)
    }
}

/// `{w : wξ − ξ ∈ X_*(T)}` for `ξ` in `X_*(T)⊗ℚ` coordinates.
pub fn stabilizer(w: &WeylGroup, xi: &RatVector) -> Subgroup {
    let elements = (0..w.order()).filter(|&i| w.act_cochar(i, xi).sub(xi).is_integral()).collect();
    Subgroup { elements }
}

/// The subgroup generated by reflections in roots with `<α, ξ> ∈ ℤ`, compared with the stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionSubgroup {
    pub subgroup: Subgroup,
    /// Root indices with integral pairing against `ξ`.
    pub integral_roots: Vec<usize>,
    pub equals_stabilizer: bool,
}

pub fn integral_reflection_subgroup(w: &WeylGroup, xi: &RatVector, rd: &RootDatum) -> Result<ReflectionSubgroup> {
    let mut integral_roots = Vec::new();
    let mut gens = Vec::new();
    for i in 0..rd.roots().len() {
        let a = RatVector::integral(rd.root(i).to_vec());
        let p = xi.dot_int(a.numerators());
        if p.is_integer() {
            integral_roots.push(i);
            let (c, _) = reflection(rd, i);
            let idx = w
                .lookup(&c)
                .ok_or_else(|| Error::Internal(format!("reflection in root {i} is not a Weyl element")))?;
            if !gens.contains(&idx) {
                gens.push(idx);
            }
        }
    }
    let subgroup = w.closure(&gens);
    let stab = stabilizer(w, xi);
    if !subgroup.is_subset_of(&stab) {
        return Err(Error::Internal("integral reflection subgroup is not contained in the stabilizer".into()));
    }
    let equals_stabilizer = subgroup == stab;
    Ok(ReflectionSubgroup { subgroup, integral_roots, equals_stabilizer })
}

/// Order of the Weyl group of a classical series.
pub fn series_order(series: crate::rootdata::Series, rank: usize) -> u64 {
    use crate::rootdata::Series;
    let fact = |n: usize| (1..=n as u64).product::<u64>();
    match series {
        Series::A => fact(rank + 1),
        Series::B | Series::C => (1u64 << rank) * fact(rank),
        Series::D => (1u64 << (rank - 1)) * fact(rank),
    }
}

/// Checks contragredience `Cᵀ·A = I` for every element.
pub fn contragredient(w: &WeylGroup) -> bool {
    let id = IntMatrix::identity(w.rank());
    w.elements().iter().all(|e| e.char_action.transpose().mul(&e.cochar_action) == id)
}
