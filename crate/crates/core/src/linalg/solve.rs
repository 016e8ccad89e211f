use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::normal_form::{row_lattice_basis, snf};
use crate::error::{Error, Result};

/// Outcome of solving `A·x = y` over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    /// A particular solution, when one exists.
    pub particular: Option<Vec<BigInt>>,
    /// Basis of `{x : A·x = 0}`, as rows.
    pub kernel: Vec<Vec<BigInt>>,
    /// Smallest `k ≥ 1` with `A·x = k·y` solvable; `None` when `y` is not in
    /// the rational span of the columns. Equals 1 exactly when `particular` is set.
    pub min_multiplier: Option<BigInt>,
}

impl IntegerSolution {
    pub fn is_solvable(&self) -> bool {
        self.particular.is_some()
    }
}

/// Solves `A·x = y` over ℤ through the Smith form `U·A·V = S`.
pub fn solve_z(a: &IntMatrix, y: &[BigInt]) -> Result<IntegerSolution> {
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {} but the matrix has {} rows",
            y.len(),
            a.rows()
        )));
    }
    let (s, u, v) = snf(a);
    let yp = u.mul_vec(y);
    let r = (0..a.rows().min(a.cols())).take_while(|&i| !s[(i, i)].is_zero()).count();

    let kernel: Vec<Vec<BigInt>> = (r..a.cols()).map(|j| v.column(j)).collect();

    let in_span = yp[r..].iter().all(Zero::is_zero);
    let mut particular = None;
    let mut min_multiplier = None;
    if in_span {
        let mut k = BigInt::one();
        for i in 0..r {
            let d = &s[(i, i)];
            let g = yp[i].gcd(d);
            k = k.lcm(&(d / g));
        }
        if k.is_one() {
            let mut z = vec![BigInt::zero(); a.cols()];
            for i in 0..r {
                z[i] = &yp[i] / &s[(i, i)];
            }
            let x = v.mul_vec(&z);
            debug_assert_eq!(a.mul_vec(&x), y);
            particular = Some(x);
        }
        min_multiplier = Some(k);
    }
    Ok(IntegerSolution { particular, kernel, min_multiplier })
}

/// Saturated integer kernel `{x : A·x = 0}` in canonical (HNF) form, one basis vector per row.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let (s, _, v) = snf(a);
    let r = (0..a.rows().min(a.cols())).take_while(|&i| !s[(i, i)].is_zero()).count();
    let gens: Vec<Vec<BigInt>> = (r..a.cols()).map(|j| v.column(j)).collect();
    if gens.is_empty() {
        return IntMatrix::zeros(0, a.cols());
    }
    row_lattice_basis(&IntMatrix::from_rows(gens, a.cols()))
}

/// Coordinates of `v` against the rows of an HNF basis, or `None` if `v` is
/// not an integral combination of them.
pub fn coordinates_in_hnf_basis(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(basis.cols(), v.len());
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(basis.rows());
    for i in 0..basis.rows() {
        let row = basis.row(i);
        let p = row.iter().position(|x| !x.is_zero())?;
        let (q, rem) = rest[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return None;
        }
        for (x, b) in rest.iter_mut().zip(row) {
            *x -= &q * b;
        }
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::to_big;

    #[test]
    fn one_by_one_systems() {
        let a = IntMatrix::from_i64_rows(&[vec![2]]);
        let s = solve_z(&a, &to_big(&[4])).unwrap();
        assert_eq!(s.particular, Some(to_big(&[2])));
        assert!(s.kernel.is_empty());
        assert_eq!(s.min_multiplier, Some(BigInt::one()));

        let s = solve_z(&a, &to_big(&[3])).unwrap();
        assert_eq!(s.particular, None);
        assert_eq!(s.min_multiplier, Some(BigInt::from(2)));
    }

    #[test]
    fn kernel_of_row_sum() {
        let a = IntMatrix::from_i64_rows(&[vec![1, 1]]);
        let s = solve_z(&a, &to_big(&[0])).unwrap();
        assert_eq!(s.kernel.len(), 1);
        let k = &s.kernel[0];
        let basis = kernel_basis(&a);
        // enumeration over a small box: exactly the vectors with x + y = 0 lie in the kernel lattice
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let hit = coordinates_in_hnf_basis(&basis, &to_big(&[x, y])).is_some();
                assert_eq!(hit, x + y == 0, "({x}, {y})");
            }
        }
        assert_eq!(&k[0] + &k[1], BigInt::zero());
        assert_eq!(kernel_basis(&a), IntMatrix::from_i64_rows(&[vec![1, -1]]));
    }

    #[test]
    fn outside_rational_span() {
        let a = IntMatrix::from_i64_rows(&[vec![1], vec![1]]);
        let s = solve_z(&a, &to_big(&[1, 2])).unwrap();
        assert_eq!(s.min_multiplier, None);
        assert!(!s.is_solvable());
    }

    #[test]
    fn dimension_mismatch() {
        let a = IntMatrix::from_i64_rows(&[vec![1, 2]]);
        assert!(matches!(solve_z(&a, &to_big(&[1, 2])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn hnf_coordinates() {
        let b = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(coordinates_in_hnf_basis(&b, &to_big(&[4, -3])), Some(to_big(&[2, -1])));
        assert_eq!(coordinates_in_hnf_basis(&b, &to_big(&[1, 0])), None);
    }
}
