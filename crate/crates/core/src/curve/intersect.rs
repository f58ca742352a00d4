//! Stable intersection of two plane curves.
//!
//! The second curve is translated by `v·ε` for an infinitesimal `ε > 0` and a
//! fixed direction `v`. Edge parameters then live in [`EpsScalar`], so every
//! crossing is decided exactly and its limit as `ε → 0` is the standard part.
//! A crossing of edges `e`, `f` counts `w(e)·w(f)·|det(dir e, dir f)|`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{dual_curve, CurveError, Lattice2, PlanarTropicalCurve, Point2};
use crate::poly::TropPolynomial;
use crate::rational::{frac, int, Rational};
use crate::scalar::{EpsScalar, TropScalar};

/// Perturbation directions `(1, 617/1000)` and the fallback `(617/1000, 1)`,
/// as `(numerator, denominator)` pairs.
pub const PERTURBATIONS: [[(i64, i64); 2]; 2] = [[(1, 1), (617, 1000)], [(617, 1000), (1, 1)]];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntersectionPoint {
    pub point: Point2,
    pub multiplicity: u64,
}

/// One edge or ray as `start + t·dir`, `0 ≤ t ≤ limit` (no limit for rays).
struct Piece {
    start: Point2,
    dir: Point2,
    limit: Option<Rational>,
    primitive: Lattice2,
    weight: u64,
}

fn pieces(c: &PlanarTropicalCurve) -> Vec<Piece> {
    let lattice = |d: Lattice2| [int(d[0]), int(d[1])];
    let bounded = c.bounded_edges.iter().map(|e| {
        let (a, b) = e.ends;
        Piece {
            start: c.vertices[a].clone(),
            dir: [&c.vertices[b][0] - &c.vertices[a][0], &c.vertices[b][1] - &c.vertices[a][1]],
            limit: Some(int(1)),
            primitive: e.direction,
            weight: e.weight,
        }
    });
    let rays = c.rays.iter().map(|r| Piece {
        start: c.vertices[r.base].clone(),
        dir: lattice(r.direction),
        limit: None,
        primitive: r.direction,
        weight: r.weight,
    });
    bounded.chain(rays).collect()
}

fn cross(a: &Point2, b: &Point2) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Strictly inside `(0, limit)`; `None` when the parameter sits exactly on
/// an endpoint for every `ε`, which means the perturbation is not generic.
fn strictly_inside(t: &EpsScalar, limit: &Option<Rational>) -> Option<bool> {
    let zero = EpsScalar::from(TropScalar::unit());
    if *t == zero {
        return None;
    }
    let below_limit = match limit {
        None => true,
        Some(l) => {
            let l = EpsScalar::from(TropScalar::Finite(l.clone()));
            if *t == l {
                return None;
            }
            *t < l
        }
    };
    Some(*t > zero && below_limit)
}

/// Crossings of `p` with `q + v·ε`, or `None` if `v` is not generic for this
/// pair.
fn crossings(p: &[Piece], q: &[Piece], v: &Point2) -> Option<BTreeMap<Point2, u64>> {
    let mut found: BTreeMap<Point2, u64> = BTreeMap::new();
    for e in p {
        for f in q {
            let det = cross(&e.dir, &f.dir);
            let r0 = [&f.start[0] - &e.start[0], &f.start[1] - &e.start[1]];
            if det.is_zero() {
                // parallel: only a problem if the shifted lines coincide
                if cross(&r0, &e.dir).is_zero() && cross(v, &e.dir).is_zero() {
                    return None;
                }
                continue;
            }
            let t = EpsScalar::new(
                TropScalar::Finite(cross(&r0, &f.dir) / &det),
                cross(v, &f.dir) / &det,
            );
            let s = EpsScalar::new(
                TropScalar::Finite(cross(&r0, &e.dir) / &det),
                cross(v, &e.dir) / &det,
            );
            if !strictly_inside(&t, &e.limit)? || !strictly_inside(&s, &f.limit)? {
                continue;
            }
            let t0 = t.standard().as_finite().expect("finite parameter");
            let point = [&e.start[0] + t0 * &e.dir[0], &e.start[1] + t0 * &e.dir[1]];
            let det_prim = e.primitive[0] * f.primitive[1] - e.primitive[1] * f.primitive[0];
            *found.entry(point).or_insert(0) += e.weight * f.weight * det_prim.unsigned_abs();
        }
    }
    Some(found)
}

pub fn stable_intersect_curves(
    cp: &PlanarTropicalCurve,
    cq: &PlanarTropicalCurve,
) -> Result<Vec<IntersectionPoint>, CurveError> {
    if cp.is_empty() || cq.is_empty() {
        return Err(CurveError::EmptyCurve);
    }
    let (p, q) = (pieces(cp), pieces(cq));
    for [vx, vy] in PERTURBATIONS {
        let v = [frac(vx.0, vx.1), frac(vy.0, vy.1)];
        if let Some(found) = crossings(&p, &q, &v) {
            return Ok(found
                .into_iter()
                .map(|(point, multiplicity)| IntersectionPoint { point, multiplicity })
                .collect());
        }
    }
    Err(CurveError::DegeneratePerturbation)
}

/// Stable intersection of the curves of `p` and `q`, as limit points with
/// multiplicities, sorted by point.
pub fn stable_intersect(p: &TropPolynomial, q: &TropPolynomial) -> Result<Vec<IntersectionPoint>, CurveError> {
    stable_intersect_curves(&dual_curve(p)?, &dual_curve(q)?)
}
