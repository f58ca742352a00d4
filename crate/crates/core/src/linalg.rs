//! Small exact linear algebra over the rationals.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
fn row_reduce(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..m[r].len() {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m = rows.to_vec();
    row_reduce(&mut m, cols).len()
}

/// Solves `a x = b` (with `a` possibly non-square) when a solution exists and
/// is unique.
pub(crate) fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m, cols);
    if pivots.len() < cols {
        return None;
    }
    // any remaining row must read 0 = 0
    if m[pivots.len()..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|i| m[i][cols].clone()).collect())
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Whether `target` lies in the convex hull of `points`, decided exactly by
/// searching for an affinely independent subset that contains it with
/// nonnegative barycentric coordinates (Carathéodory).
pub(crate) fn in_convex_hull(target: &[Rational], points: &[Vec<Rational>]) -> bool {
    let dim = target.len();
    let max_size = points.len().min(dim + 1);
    for size in 1..=max_size {
        for subset in crate::subsets::combinations(points.len(), size) {
            let base = &points[subset[0]];
            if size == 1 {
                if base.as_slice() == target {
                    return true;
                }
                continue;
            }
            // columns: p_i - p_0, unknowns μ_i
            let diffs: Vec<Vec<Rational>> = subset[1..].iter().map(|&i| sub(&points[i], base)).collect();
            let a: Vec<Vec<Rational>> =
                (0..dim).map(|r| diffs.iter().map(|d| d[r].clone()).collect()).collect();
            let rhs = sub(target, base);
            let Some(mu) = solve_unique(&a, &rhs) else { continue };
            let total: Rational = mu.iter().sum();
            if mu.iter().all(|v| !v.is_negative()) && total <= Rational::from_integer(1.into()) {
                return true;
            }
        }
    }
    false
}
