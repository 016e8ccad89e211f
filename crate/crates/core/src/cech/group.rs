use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group as a multiplication table with identity `0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupTableJson", into = "GroupTableJson")]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupTableJson {
    table: Vec<Vec<usize>>,
}

impl TryFrom<GroupTableJson> for GroupTable {
    type Error = Error;
    fn try_from(j: GroupTableJson) -> Result<Self> {
        GroupTable::from_table(j.table)
    }
}

impl From<GroupTable> for GroupTableJson {
    fn from(g: GroupTable) -> Self {
        GroupTableJson { table: g.table }
    }
}

impl GroupTable {
    /// Checks closure, identity at `0`, inverses and associativity exhaustively.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty group table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!("row {i} of the group table has length {}, expected {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidInput(format!("entry {x} in row {i} is out of range")));
            }
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::InvalidInput(format!("element 0 is not an identity for {g}")));
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == 0 && table[h][g] == 0)
                .ok_or_else(|| Error::InvalidInput(format!("element {g} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidInput(format!("associativity fails on ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(GroupTable { table, inverses })
    }

    pub fn trivial() -> Self {
        GroupTable { table: vec![vec![0]], inverses: vec![0] }
    }

    /// `ℤ/n` with element `k` the residue `k`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("cyclic group of order 0".into()));
        }
        Ok(GroupTable {
            table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
            inverses: (0..n).map(|a| (n - a) % n).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Number of elements of each order.
    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for a in 0..self.order() {
            *h.entry(self.element_order(a)).or_insert(0) += 1;
        }
        h
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order()).filter(|&a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.center().len() == self.order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables() {
        let g = GroupTable::cyclic(6).unwrap();
        assert_eq!(GroupTable::from_table(g.table().to_vec()).unwrap(), g);
        assert_eq!(g.order_histogram(), BTreeMap::from([(1, 1), (2, 1), (3, 2), (6, 2)]));
        assert!(g.is_abelian());
    }

    #[test]
    fn s3_is_not_abelian() {
        // permutations of {0,1,2} in the order id, (01), (02), (12), (012), (021)
        let perms = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms.iter().map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect()).collect();
        let g = GroupTable::from_table(table).unwrap();
        assert_eq!(g.center(), vec![0]);
        assert_eq!(g.order_histogram(), BTreeMap::from([(1, 1), (2, 3), (3, 2)]));
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(GroupTable::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupTable::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        // a non-associative loop of order 5 with identity
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(GroupTable::from_table(t).is_err());
    }
}
