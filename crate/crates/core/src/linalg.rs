//! Exact Gauss-Jordan elimination for small dense systems.

use num_traits::Zero;

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// Consistent but with free variables.
    Singular,
    Inconsistent,
}

/// Solves `A x = b` for `A` with `n` columns and any number of rows.
pub fn solve(a: Vec<Vec<Rational>>, b: Vec<Rational>, n: usize) -> Solution {
    solve_leading(a, b, n, n)
}

/// Like [`solve`], but only the first `wanted` unknowns need to be
/// determined; the remaining ones may stay free. Returns the values of the
/// first `wanted` unknowns.
pub fn solve_leading(
    mut a: Vec<Vec<Rational>>,
    mut b: Vec<Rational>,
    n: usize,
    wanted: usize,
) -> Solution {
    let rows = a.len();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, p);
        b.swap(pivot_row, p);
        let inv = a[pivot_row][col].recip();
        for c in col..n {
            a[pivot_row][c] *= &inv;
        }
        b[pivot_row] *= &inv;
        for r in 0..rows {
            if r == pivot_row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n {
                let delta = &factor * &a[pivot_row][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[pivot_row];
            b[r] -= delta;
        }
        pivots.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    if (pivot_row..rows).any(|r| !b[r].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut x = vec![Rational::zero(); wanted];
    for col in 0..wanted {
        let Some(r) = pivots.iter().position(|&c| c == col) else {
            return Solution::Singular;
        };
        if (0..n).any(|c| !is_pivot[c] && !a[r][c].is_zero()) {
            return Solution::Singular;
        }
        x[col] = b[r].clone();
    }
    Solution::Unique(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn unique() {
        let x = solve(m(&[&[2, 1], &[1, 3]]), vec![int(3), int(5)], 2);
        assert_eq!(x, Solution::Unique(vec![rat(4, 5), rat(7, 5)]));
    }

    #[test]
    fn overdetermined_consistent() {
        let x = solve(m(&[&[1, 0], &[0, 1], &[1, 1]]), vec![int(1), int(2), int(3)], 2);
        assert_eq!(x, Solution::Unique(vec![int(1), int(2)]));
    }

    #[test]
    fn degenerate() {
        assert_eq!(solve(m(&[&[1, 1], &[2, 2]]), vec![int(1), int(2)], 2), Solution::Singular);
        assert_eq!(solve(m(&[&[1, 1], &[2, 2]]), vec![int(1), int(3)], 2), Solution::Inconsistent);
        assert_eq!(solve(m(&[&[0, 0]]), vec![int(1)], 2), Solution::Inconsistent);
    }

    #[test]
    fn leading_unknowns_only() {
        // x0 = 1, x1 + x2 = 2: x0 determined, x1 not
        let a = m(&[&[1, 0, 0], &[0, 1, 1]]);
        let b = vec![int(1), int(2)];
        assert_eq!(solve_leading(a.clone(), b.clone(), 3, 1), Solution::Unique(vec![int(1)]));
        assert_eq!(solve_leading(a, b, 3, 2), Solution::Singular);
    }
}
