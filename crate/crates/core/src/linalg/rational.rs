use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{bigint_json, IntMatrix};
use crate::error::{Error, Result};

/// A vector of rationals with one shared, positive, reduced denominator.
///
/// Equality is structural; the constructor keeps `gcd(numerators, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVector {
    num: Vec<BigInt>,
    den: BigInt,
}

impl RatVector {
    pub fn new(num: Vec<BigInt>, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("rational vector with zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for x in &mut num {
                *x = -&*x;
            }
        }
        let g = num.iter().fold(den.clone(), |g, x| g.gcd(x));
        if !g.is_one() {
            for x in &mut num {
                *x /= &g;
            }
            den /= &g;
        }
        RatVector { num, den }
    }

    pub fn integral(num: Vec<BigInt>) -> Self {
        RatVector { num, den: BigInt::one() }
    }

    pub fn zero(n: usize) -> Self {
        Self::integral(vec![BigInt::zero(); n])
    }

    pub fn from_i64(num: &[i64], den: i64) -> Self {
        Self::new(num.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(den))
            .expect("nonzero denominator")
    }

    pub fn from_rationals(entries: &[BigRational]) -> Self {
        let den = entries.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let num = entries.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        Self::normalized(num, den)
    }

    /// Parses comma-separated rationals such as `1/2,-1/2,0`.
    pub fn parse(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rationals(&entries))
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The integer vector, if the denominator is 1.
    pub fn as_integral(&self) -> Option<&[BigInt]> {
        self.is_integral().then_some(&self.num[..])
    }

    pub fn entry(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn entries(&self) -> Vec<BigRational> {
        (0..self.len()).map(|i| self.entry(i)).collect()
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len());
        let den = self.den.lcm(&other.den);
        let a = &den / &self.den;
        let b = &den / &other.den;
        let num = self.num.iter().zip(&other.num).map(|(x, y)| x * &a + y * &b).collect();
        Self::normalized(num, den)
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatVector {
        RatVector { num: self.num.iter().map(|x| -x).collect(), den: self.den.clone() }
    }

    pub fn scale(&self, k: &BigInt) -> RatVector {
        Self::normalized(self.num.iter().map(|x| x * k).collect(), self.den.clone())
    }

    /// `M·v` for an integer matrix `M`.
    pub fn apply(m: &IntMatrix, v: &RatVector) -> RatVector {
        Self::normalized(m.mul_vec(&v.num), v.den.clone())
    }

    /// Dot product with an integer vector.
    pub fn dot_int(&self, w: &[BigInt]) -> BigRational {
        let s: BigInt = self.num.iter().zip(w).map(|(x, y)| x * y).sum();
        BigRational::new(s, self.den.clone())
    }

    /// Reduces every coordinate into `[0, 1)`.
    pub fn fractional_part(&self) -> RatVector {
        let num = self.num.iter().map(|x| x.mod_floor(&self.den)).collect();
        Self::normalized(num, self.den.clone())
    }

    /// `self - fractional_part(self)`.
    pub fn floor(&self) -> Vec<BigInt> {
        self.num.iter().map(|x| x.div_floor(&self.den)).collect()
    }
}

pub fn parse_rational(t: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("cannot parse rational {t:?}"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct RatVectorJson {
    #[serde(with = "bigint_json::vec")]
    num: Vec<BigInt>,
    #[serde(with = "bigint_json")]
    den: BigInt,
}

impl Serialize for RatVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatVectorJson { num: self.num.clone(), den: self.den.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RatVectorJson::deserialize(d)?;
        RatVector::new(j.num, j.den).map_err(de::Error::custom)
    }
}

/// Small dense rational matrix used for basis changes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: Vec<Vec<BigRational>>,
    pub cols: usize,
}

impl RatMatrix {
    pub fn from_vectors(rows: &[RatVector], cols: usize) -> Self {
        RatMatrix { rows: rows.iter().map(RatVector::entries).collect(), cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> RatMatrix {
        let rows = (0..self.cols).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect();
        RatMatrix { rows, cols: self.nrows() }
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.cols)
                    .map(|j| r.iter().zip(&other.rows).map(|(a, b)| a * &b[j]).sum())
                    .collect()
            })
            .collect();
        RatMatrix { rows, cols: other.cols }
    }

    /// Inverse of a square matrix by Gauss-Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.nrows();
        assert_eq!(n, self.cols);
        let mut a: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for x in &mut a[c] {
                *x *= &inv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    let pivot = a[c].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Some(RatMatrix { rows: a.into_iter().map(|r| r[n..].to_vec()).collect(), cols: n })
    }

    pub fn row_vector(&self, i: usize) -> RatVector {
        RatVector::from_rationals(&self.rows[i])
    }

    /// Row rank over ℚ.
    pub fn rank(&self) -> usize {
        let mut a = self.rows.clone();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[r][c];
                    let pivot = a[r].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
            r += 1;
        }
        r
    }
}

pub fn rat_dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_at_construction() {
        let v = RatVector::from_i64(&[2, -4, 0], 4);
        assert_eq!(v.numerators(), &[BigInt::from(1), BigInt::from(-2), BigInt::from(0)]);
        assert_eq!(v.denominator(), &BigInt::from(2));
        assert_eq!(RatVector::from_i64(&[1, 1], -2), RatVector::from_i64(&[-1, -1], 2));
        assert!(RatVector::new(vec![BigInt::one()], BigInt::zero()).is_err());
    }

    #[test]
    fn parse_and_json() {
        let v = RatVector::parse("1/2, -1/2, 0").unwrap();
        assert_eq!(v, RatVector::from_i64(&[1, -1, 0], 2));
        assert_eq!(v.to_string(), "(1/2, -1/2, 0)");
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"num":[1,-1,0],"den":2}"#);
        let back: RatVector = serde_json::from_str(r#"{"num":[2,-2,0],"den":4}"#).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn inverse_round_trip() {
        let m = RatMatrix::from_vectors(
            &[RatVector::from_i64(&[1, 0], 1), RatVector::from_i64(&[1, 1], 2)],
            2,
        );
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        for (i, r) in id.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
                assert!(i == j || x.is_zero());
            }
        }
    }
}
