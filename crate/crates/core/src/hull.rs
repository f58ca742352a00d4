//! Lower convex hull of the lifted point set `{(e, c_e)}` of a polynomial and
//! the regular subdivision of the Newton polytope it induces.
//!
//! Works in any ambient dimension and for Newton polytopes that are not
//! full-dimensional. Facets are found by brute force: every affinely
//! independent `(k+1)`-subset (with `k` the affine dimension of the exponents)
//! spans a candidate affine height function, which is a lower facet when no
//! lifted point lies strictly below it. All predicates are exact.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::linalg::{dot, in_convex_hull, rank, solve_unique, sub};
use crate::poly::{Monomial, TropPolynomial};
use crate::rational::Rational;
use crate::subsets::combinations;

/// A maximal cell of the regular subdivision: the projection of one lower
/// facet. On the cell the hull height is `offset + gradient · e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullCell {
    /// Indices of every lifted point lying on the facet.
    pub points: Vec<usize>,
    /// Indices of the facet's vertices (a subset of `points`).
    pub vertices: Vec<usize>,
    /// Gradient of the height function, in the linear span of the exponent
    /// differences.
    pub gradient: Vec<Rational>,
    pub offset: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedHull {
    /// `(exponent, coefficient)` in the polynomial's term order.
    pub points: Vec<(Monomial, Rational)>,
    /// Indices of points that are vertices of the lower hull.
    pub vertices: Vec<usize>,
    pub cells: Vec<HullCell>,
    /// Affine dimension of the Newton polytope.
    pub affine_dim: usize,
}

fn to_rationals(m: &Monomial) -> Vec<Rational> {
    m.exponents().iter().map(|&e| Rational::from_integer(e.into())).collect()
}

impl LiftedHull {
    pub fn is_vertex(&self, index: usize) -> bool {
        self.vertices.binary_search(&index).is_ok()
    }

    /// Height of the lower hull above `e`, or `None` outside the Newton
    /// polytope.
    pub fn hull_value(&self, e: &[Rational]) -> Option<Rational> {
        let exps: Vec<Vec<Rational>> = self.points.iter().map(|(m, _)| to_rationals(m)).collect();
        self.cells.iter().find_map(|cell| {
            let corners: Vec<Vec<Rational>> = cell.vertices.iter().map(|&i| exps[i].clone()).collect();
            in_convex_hull(e, &corners).then(|| &cell.offset + dot(&cell.gradient, e))
        })
    }

    /// Whether the lifted point `index` lies on the lower hull (as a vertex or
    /// in the relative interior of a face).
    pub fn is_tight(&self, index: usize) -> bool {
        self.cells.iter().any(|c| c.points.contains(&index))
    }
}

pub fn lifted_hull(p: &TropPolynomial) -> LiftedHull {
    let points: Vec<(Monomial, Rational)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    let exps: Vec<Vec<Rational>> = points.iter().map(|(m, _)| to_rationals(m)).collect();
    let heights: Vec<&Rational> = points.iter().map(|(_, c)| c).collect();
    let m = points.len();

    let diffs: Vec<Vec<Rational>> = exps[1..].iter().map(|e| sub(e, &exps[0])).collect();
    let affine_dim = rank(&diffs);

    if m == 1 {
        let cell = HullCell {
            points: vec![0],
            vertices: vec![0],
            gradient: vec![Rational::zero(); p.dim()],
            offset: heights[0].clone(),
        };
        return LiftedHull { points, vertices: vec![0], cells: vec![cell], affine_dim: 0 };
    }

    let mut cells: Vec<HullCell> = Vec::new();
    for subset in combinations(m, affine_dim + 1) {
        if cells.iter().any(|c| subset.iter().all(|i| c.points.contains(i))) {
            continue;
        }
        let base = &exps[subset[0]];
        let basis: Vec<Vec<Rational>> = subset[1..].iter().map(|&i| sub(&exps[i], base)).collect();
        if rank(&basis) < affine_dim {
            continue;
        }
        // gradient = Σ μ_i b_i with  b_j · gradient = c_{s_j} - c_{s_0}
        let gram: Vec<Vec<Rational>> =
            basis.iter().map(|bi| basis.iter().map(|bj| dot(bi, bj)).collect()).collect();
        let rise: Vec<Rational> = subset[1..].iter().map(|&i| heights[i] - heights[subset[0]]).collect();
        let mu = solve_unique(&gram, &rise).expect("independent basis has invertible Gram matrix");
        let mut gradient = vec![Rational::zero(); p.dim()];
        for (coef, b) in mu.iter().zip(&basis) {
            for (g, bk) in gradient.iter_mut().zip(b) {
                *g += coef * bk;
            }
        }
        let offset = heights[subset[0]] - dot(&gradient, base);

        let mut on_facet = Vec::new();
        let mut supporting = true;
        for j in 0..m {
            let gap = heights[j] - (&offset + dot(&gradient, &exps[j]));
            if gap.is_negative() {
                supporting = false;
                break;
            }
            if gap.is_zero() {
                on_facet.push(j);
            }
        }
        if !supporting {
            continue;
        }
        let vertices = on_facet
            .iter()
            .copied()
            .filter(|&i| {
                let others: Vec<Vec<Rational>> =
                    on_facet.iter().filter(|&&j| j != i).map(|&j| exps[j].clone()).collect();
                !in_convex_hull(&exps[i], &others)
            })
            .collect();
        cells.push(HullCell { points: on_facet, vertices, gradient, offset });
    }
    cells.sort_by(|a, b| a.points.cmp(&b.points));

    let vertices: BTreeSet<usize> = cells.iter().flat_map(|c| c.vertices.iter().copied()).collect();
    LiftedHull { points, vertices: vertices.into_iter().collect(), cells, affine_dim }
}
