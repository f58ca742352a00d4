//! Clipping a curve to a rectangular viewport for drawing. The curve itself
//! is never modified.

use num_traits::Zero;

use super::{CurveError, PlanarTropicalCurve, Point2};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Viewport {
    pub min: Point2,
    pub max: Point2,
}

impl Viewport {
    pub fn new(min: Point2, max: Point2) -> Result<Self, CurveError> {
        if min[0] >= max[0] || min[1] >= max[1] {
            return Err(CurveError::EmptyViewport);
        }
        Ok(Viewport { min, max })
    }

    /// The square `[-r, r]²`.
    pub fn centered(r: i64) -> Self {
        Viewport::new([int(-r), int(-r)], [int(r), int(r)]).expect("positive radius")
    }

    pub fn contains(&self, p: &Point2) -> bool {
        (0..2).all(|k| self.min[k] <= p[k] && p[k] <= self.max[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SegmentKind {
    Bounded(usize),
    Ray(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSegment {
    pub from: Point2,
    pub to: Point2,
    pub weight: u64,
    pub kind: SegmentKind,
}

/// Liang–Barsky clipping of `start + t·dir` for `t ∈ [0, limit]`.
fn clip(start: &Point2, dir: &Point2, limit: Option<Rational>, view: &Viewport) -> Option<(Point2, Point2)> {
    let mut lo = Rational::zero();
    let mut hi = limit;
    for k in 0..2 {
        if dir[k].is_zero() {
            if start[k] < view.min[k] || start[k] > view.max[k] {
                return None;
            }
            continue;
        }
        let a = (&view.min[k] - &start[k]) / &dir[k];
        let b = (&view.max[k] - &start[k]) / &dir[k];
        let (enter, exit) = if a <= b { (a, b) } else { (b, a) };
        if enter > lo {
            lo = enter;
        }
        hi = Some(match hi {
            Some(h) if h <= exit => h,
            _ => exit,
        });
    }
    let hi = hi.expect("a nonzero direction bounds the parameter");
    if lo >= hi {
        return None;
    }
    let at = |t: &Rational| [&start[0] + t * &dir[0], &start[1] + t * &dir[1]];
    Some((at(&lo), at(&hi)))
}

/// Visible pieces of the curve: bounded edges first, then rays, each in
/// stored order. Pieces that miss the viewport (or touch it in a single
/// point) are dropped.
pub fn curve_bounding_render(c: &PlanarTropicalCurve, viewport: &Viewport) -> Vec<RenderSegment> {
    let mut out = Vec::new();
    for (i, e) in c.bounded_edges.iter().enumerate() {
        let (a, b) = e.ends;
        let dir = [&c.vertices[b][0] - &c.vertices[a][0], &c.vertices[b][1] - &c.vertices[a][1]];
        if let Some((from, to)) = clip(&c.vertices[a], &dir, Some(int(1)), viewport) {
            out.push(RenderSegment { from, to, weight: e.weight, kind: SegmentKind::Bounded(i) });
        }
    }
    for (i, r) in c.rays.iter().enumerate() {
        let dir = [int(r.direction[0]), int(r.direction[1])];
        if let Some((from, to)) = clip(&c.vertices[r.base], &dir, None, viewport) {
            out.push(RenderSegment { from, to, weight: r.weight, kind: SegmentKind::Ray(i) });
        }
    }
    out
}
