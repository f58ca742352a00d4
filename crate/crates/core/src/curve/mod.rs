//! Planar tropical curves.
//!
//! A bivariate polynomial's curve is read off the regular subdivision of its
//! Newton polygon: every 2-cell gives a vertex (the point where all of the
//! cell's terms tie), every interior edge a bounded edge, and every boundary
//! edge a ray. Edge weights are lattice lengths of the dual subdivision
//! edges, so the curve is balanced at every vertex.
//!
//! When the Newton polygon is a segment the curve is a family of parallel
//! lines; each line is stored as one base vertex carrying two opposite rays.

mod intersect;
mod interpolate;
mod render;

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::hull::lifted_hull;
use crate::poly::{PolyError, TropPolynomial};
use crate::rational::Rational;

pub use intersect::{stable_intersect, stable_intersect_curves, IntersectionPoint, PERTURBATIONS};
pub use interpolate::{interpolate_conic, interpolate_line};
pub use render::{curve_bounding_render, RenderSegment, SegmentKind, Viewport};

pub type Point2 = [Rational; 2];
pub type Lattice2 = [i64; 2];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("plane curves need a polynomial in 2 variables, got {0}")]
    NotPlanar(usize),
    #[error("the curve of a monomial is empty")]
    EmptyCurve,
    #[error("stable intersection is degenerate for every built-in perturbation direction")]
    DegeneratePerturbation,
    #[error("degenerate point configuration: the `{minor}` minor is tropically singular")]
    DegenerateConfiguration { minor: String },
    #[error("viewport must have positive width and height")]
    EmptyViewport,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Edge between two curve vertices. `direction` is the primitive lattice
/// vector pointing from `ends.0` towards `ends.1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedEdge {
    pub ends: (usize, usize),
    pub direction: Lattice2,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub base: usize,
    pub direction: Lattice2,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionCell {
    /// Corners of the cell, counter-clockwise.
    pub vertices: Vec<Lattice2>,
    /// Indices into the hull's point list of every term lying on the cell.
    pub terms: Vec<usize>,
}

/// Regular subdivision of a Newton polygon. `cells[i]` is dual to curve
/// vertex `i`, `interior_edges[i]` to bounded edge `i` and
/// `boundary_edges[i]` to ray `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSubdivision {
    /// Corners of the Newton polygon, counter-clockwise.
    pub polygon: Vec<Lattice2>,
    pub cells: Vec<SubdivisionCell>,
    pub interior_edges: Vec<[Lattice2; 2]>,
    pub boundary_edges: Vec<[Lattice2; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlanarTropicalCurve {
    pub vertices: Vec<Point2>,
    pub bounded_edges: Vec<BoundedEdge>,
    pub rays: Vec<Ray>,
    /// The subdivision this curve was built from; absent for hand-built or
    /// deserialised curves.
    pub dual: Option<RegularSubdivision>,
}

/// A vertex whose weighted edge directions do not sum to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensionViolation {
    pub vertex: usize,
    pub sum: Lattice2,
}

impl PlanarTropicalCurve {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.rays.is_empty()
    }

    /// Weighted sum of outgoing primitive directions at each vertex.
    pub fn tension(&self) -> Vec<Lattice2> {
        let mut sums = vec![[0i64; 2]; self.vertices.len()];
        for e in &self.bounded_edges {
            let w = e.weight as i64;
            let (a, b) = e.ends;
            for k in 0..2 {
                sums[a][k] += w * e.direction[k];
                sums[b][k] -= w * e.direction[k];
            }
        }
        for r in &self.rays {
            for k in 0..2 {
                sums[r.base][k] += r.weight as i64 * r.direction[k];
            }
        }
        sums
    }

    /// Whether every vertex is balanced. Reports the first vertex that is not.
    pub fn check_zero_tension(&self) -> Result<(), TensionViolation> {
        match self.tension().into_iter().enumerate().find(|(_, s)| *s != [0, 0]) {
            Some((vertex, sum)) => Err(TensionViolation { vertex, sum }),
            None => Ok(()),
        }
    }
}

pub fn check_zero_tension(c: &PlanarTropicalCurve) -> Result<(), TensionViolation> {
    c.check_zero_tension()
}

fn gcd(a: i64, b: i64) -> i64 {
    a.abs().gcd(&b.abs())
}

fn lattice_length(d: Lattice2) -> u64 {
    gcd(d[0], d[1]) as u64
}

fn primitive(d: Lattice2) -> Lattice2 {
    let g = gcd(d[0], d[1]);
    [d[0] / g, d[1] / g]
}

/// Primitive integer vector with the same direction as a nonzero rational one.
fn primitive_of(d: &Point2) -> Lattice2 {
    let lcm = d[0].denom().lcm(d[1].denom());
    let scale = Rational::from_integer(lcm);
    let ints: Vec<i64> = d
        .iter()
        .map(|v| {
            let n = (v * &scale).to_integer();
            i64::try_from(n).expect("edge direction fits in i64")
        })
        .collect();
    primitive([ints[0], ints[1]])
}

fn sub2(a: Lattice2, b: Lattice2) -> Lattice2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Lattice2, b: Lattice2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Sorts lattice points counter-clockwise around their centroid.
fn sort_ccw(points: &mut [Lattice2]) {
    let k = points.len() as i64;
    let sum = points.iter().fold([0i64; 2], |acc, p| [acc[0] + p[0], acc[1] + p[1]]);
    // scaled by k to stay integral
    let rel = |p: &Lattice2| [k * p[0] - sum[0], k * p[1] - sum[1]];
    let half = |v: Lattice2| if v[1] > 0 || (v[1] == 0 && v[0] > 0) { 0 } else { 1 };
    points.sort_by(|a, b| {
        let (va, vb) = (rel(a), rel(b));
        half(va).cmp(&half(vb)).then_with(|| 0.cmp(&cross(va, vb)))
    });
}

/// The tropical curve of a bivariate polynomial. A monomial yields the empty
/// curve.
pub fn dual_curve(p: &TropPolynomial) -> Result<PlanarTropicalCurve, CurveError> {
    if p.dim() != 2 {
        return Err(CurveError::NotPlanar(p.dim()));
    }
    let hull = lifted_hull(p);
    let lattice: Vec<Lattice2> = hull.points.iter().map(|(m, _)| [m.0[0], m.0[1]]).collect();
    let vertex_of = |gradient: &[Rational]| -> Point2 { [-gradient[0].clone(), -gradient[1].clone()] };

    match hull.affine_dim {
        0 => Ok(PlanarTropicalCurve {
            dual: Some(RegularSubdivision {
                polygon: vec![lattice[0]],
                cells: vec![SubdivisionCell { vertices: vec![lattice[0]], terms: vec![0] }],
                interior_edges: vec![],
                boundary_edges: vec![],
            }),
            ..Default::default()
        }),
        1 => {
            // parallel lines, one per segment of the subdivided Newton segment
            let mut segments: Vec<(Lattice2, Lattice2, usize)> = hull
                .cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let mut ends = [lattice[c.vertices[0]], lattice[c.vertices[1]]];
                    ends.sort();
                    (ends[0], ends[1], i)
                })
                .collect();
            segments.sort();
            let mut curve = PlanarTropicalCurve::default();
            let mut cells = Vec::new();
            for (a, b, i) in &segments {
                let d = sub2(*b, *a);
                let u = primitive(d);
                let weight = lattice_length(d);
                let base = curve.vertices.len();
                curve.vertices.push(vertex_of(&hull.cells[*i].gradient));
                curve.rays.push(Ray { base, direction: [-u[1], u[0]], weight });
                curve.rays.push(Ray { base, direction: [u[1], -u[0]], weight });
                cells.push(SubdivisionCell { vertices: vec![*a, *b], terms: hull.cells[*i].points.clone() });
            }
            let polygon = vec![segments[0].0, segments[segments.len() - 1].1];
            curve.dual = Some(RegularSubdivision {
                polygon,
                cells,
                interior_edges: vec![],
                boundary_edges: vec![],
            });
            Ok(curve)
        }
        2 => Ok(planar_dual(&hull, &lattice, vertex_of)),
        _ => unreachable!("exponents live in the plane"),
    }
}

fn planar_dual(
    hull: &crate::hull::LiftedHull,
    lattice: &[Lattice2],
    vertex_of: impl Fn(&[Rational]) -> Point2,
) -> PlanarTropicalCurve {
    let mut cells = Vec::with_capacity(hull.cells.len());
    let mut vertices = Vec::with_capacity(hull.cells.len());
    // edge (sorted endpoints) -> [(cell, from, to)] with from->to counter-clockwise in the cell
    let mut edges: BTreeMap<[Lattice2; 2], Vec<(usize, Lattice2, Lattice2)>> = BTreeMap::new();
    for (ci, cell) in hull.cells.iter().enumerate() {
        let mut corners: Vec<Lattice2> = cell.vertices.iter().map(|&i| lattice[i]).collect();
        sort_ccw(&mut corners);
        for k in 0..corners.len() {
            let (from, to) = (corners[k], corners[(k + 1) % corners.len()]);
            let mut key = [from, to];
            key.sort();
            edges.entry(key).or_default().push((ci, from, to));
        }
        vertices.push(vertex_of(&cell.gradient));
        cells.push(SubdivisionCell { vertices: corners, terms: cell.points.clone() });
    }

    let mut bounded_edges = Vec::new();
    let mut rays = Vec::new();
    let mut interior_edges = Vec::new();
    let mut boundary_edges = Vec::new();
    let mut successor: BTreeMap<Lattice2, Lattice2> = BTreeMap::new();
    for (key, sides) in &edges {
        let weight = lattice_length(sub2(key[1], key[0]));
        match sides.as_slice() {
            [(c1, _, _), (c2, _, _)] => {
                let d = [&vertices[*c2][0] - &vertices[*c1][0], &vertices[*c2][1] - &vertices[*c1][1]];
                bounded_edges.push(BoundedEdge { ends: (*c1, *c2), direction: primitive_of(&d), weight });
                interior_edges.push(*key);
            }
            [(c, from, to)] => {
                let d = primitive(sub2(*to, *from));
                rays.push(Ray { base: *c, direction: [-d[1], d[0]], weight });
                boundary_edges.push(*key);
                successor.insert(*from, *to);
            }
            _ => unreachable!("an edge borders at most two cells"),
        }
    }

    // walk the boundary and keep only the corners
    let start = *successor.keys().next().expect("polygon has a boundary");
    let mut ring = vec![start];
    let mut at = successor[&start];
    while at != start {
        ring.push(at);
        at = successor[&at];
    }
    let n = ring.len();
    let polygon = (0..n)
        .filter(|&i| cross(sub2(ring[i], ring[(i + n - 1) % n]), sub2(ring[(i + 1) % n], ring[i])) != 0)
        .map(|i| ring[i])
        .collect();

    PlanarTropicalCurve {
        vertices,
        bounded_edges,
        rays,
        dual: Some(RegularSubdivision { polygon, cells, interior_edges, boundary_edges }),
    }
}

/// Whether `x` lies on the curve of `p`, i.e. the minimum is attained at
/// least twice.
pub fn on_curve(p: &TropPolynomial, x: &Point2) -> Result<bool, CurveError> {
    Ok(p.evaluate(x)?.on_hypersurface())
}

fn is_positive_multiple(d: &Point2, dir: Lattice2) -> bool {
    let cross = &d[0] * Rational::from_integer(dir[1].into()) - &d[1] * Rational::from_integer(dir[0].into());
    let dot = &d[0] * Rational::from_integer(dir[0].into()) + &d[1] * Rational::from_integer(dir[1].into());
    cross.is_zero() && dot.is_positive()
}

impl BoundedEdge {
    /// Whether `direction` actually points from the first end to the second.
    pub fn is_consistent(&self, vertices: &[Point2]) -> bool {
        let (a, b) = self.ends;
        let d = [&vertices[b][0] - &vertices[a][0], &vertices[b][1] - &vertices[a][1]];
        is_positive_multiple(&d, self.direction)
    }
}
