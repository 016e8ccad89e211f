//! Hermite and Smith normal forms over the integers.
//!
//! Pivot convention for [`hnf`]: row style. Nonzero rows come first and each
//! row's leading entry (its pivot) lies strictly to the right of the pivot in
//! the row above, so the pivots step down and to the right in a staircase.
//! Pivots are positive; entries above a pivot are reduced into `[0, pivot)`.
//! Zero rows are collected at the bottom.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row Hermite normal form `(H, U)` with `U` unimodular and `U·A = H`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pr = 0;
    for col in 0..n {
        if pr == m {
            break;
        }
        loop {
            let piv = (pr..m)
                .filter(|&r| !h[(r, col)].is_zero())
                .min_by(|&x, &y| h[(x, col)].abs().cmp(&h[(y, col)].abs()));
            let Some(piv) = piv else { break };
            h.swap_rows(pr, piv);
            u.swap_rows(pr, piv);
            let mut clean = true;
            for r in pr + 1..m {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = -h[(r, col)].div_floor(&h[(pr, col)]);
                h.add_row_multiple(r, pr, &q);
                u.add_row_multiple(r, pr, &q);
                if !h[(r, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(pr, col)].is_zero() {
            continue;
        }
        if h[(pr, col)].is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        for r in 0..pr {
            let q = -h[(r, col)].div_floor(&h[(pr, col)]);
            h.add_row_multiple(r, pr, &q);
            u.add_row_multiple(r, pr, &q);
        }
        pr += 1;
    }
    (h, u)
}

/// Pivot columns of a matrix already in row Hermite normal form.
pub fn pivot_columns(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows()).filter_map(|i| h.row(i).iter().position(|x| !x.is_zero())).collect()
}

/// Nonzero rows of the Hermite normal form: the canonical basis of the row lattice.
pub fn row_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(a);
    let rank = pivot_columns(&h).len();
    IntMatrix::from_rows(h.to_rows().into_iter().take(rank).collect(), a.cols())
}

/// Smith normal form `(S, U, V)` with `U·A·V = S` diagonal, `U`, `V` unimodular,
/// nonnegative diagonal entries and `S[i][i] | S[i+1][i+1]`.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let m = a.rows();
    let n = a.cols();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block goes to (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if s[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);

        loop {
            let mut clean = true;
            for r in t + 1..m {
                if s[(r, t)].is_zero() {
                    continue;
                }
                let q = -s[(r, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                clean &= s[(r, t)].is_zero();
            }
            for c in t + 1..n {
                if s[(t, c)].is_zero() {
                    continue;
                }
                let q = -s[(t, c)].div_floor(&s[(t, t)]);
                s.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                clean &= s[(t, c)].is_zero();
            }
            if !clean {
                // a nonzero remainder is smaller than the pivot; promote it
                let mut best = (t, t);
                for r in t + 1..m {
                    if !s[(r, t)].is_zero() && s[(r, t)].abs() < s[best].abs() {
                        best = (r, t);
                    }
                }
                for c in t + 1..n {
                    if !s[(t, c)].is_zero() && s[(t, c)].abs() < s[best].abs() {
                        best = (t, c);
                    }
                }
                if best.0 != t {
                    s.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                }
                if best.1 != t {
                    s.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..m).find(|&r| (t + 1..n).any(|c| !s[(r, c)].is_multiple_of(&s[(t, t)])));
            match offender {
                Some(r) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

/// Diagonal of a Smith form, up to `min(rows, cols)` entries.
pub fn snf_diagonal(s: &IntMatrix) -> Vec<BigInt> {
    (0..s.rows().min(s.cols())).map(|i| s[(i, i)].clone()).collect()
}

pub fn rank(a: &IntMatrix) -> usize {
    let (h, _) = hnf(a);
    pivot_columns(&h).len()
}
