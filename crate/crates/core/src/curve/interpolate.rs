//! Curves through prescribed points by tropical Cramer's rule: the
//! coefficient of each monomial is the tropical determinant of the point
//! matrix with that monomial's column removed.

use super::{CurveError, Point2};
use crate::matrix::TropMatrix;
use crate::poly::TropPolynomial;
use crate::rational::Rational;
use crate::scalar::TropScalar;

const LINE_MONOMIALS: [([i64; 2], &str); 3] = [([1, 0], "x"), ([0, 1], "y"), ([0, 0], "1")];

const CONIC_MONOMIALS: [([i64; 2], &str); 6] = [
    ([2, 0], "x^2"),
    ([1, 1], "xy"),
    ([0, 2], "y^2"),
    ([1, 0], "x"),
    ([0, 1], "y"),
    ([0, 0], "1"),
];

fn through_points(points: &[Point2], monomials: &[([i64; 2], &str)]) -> Result<TropPolynomial, CurveError> {
    let matrix = TropMatrix::from_fn(points.len(), monomials.len(), |i, j| {
        let [a, b] = monomials[j].0;
        let x = &points[i];
        TropScalar::Finite(&x[0] * Rational::from_integer(a.into()) + &x[1] * Rational::from_integer(b.into()))
    });
    let minors = matrix.cramer_minors().expect("one more column than rows");
    let mut terms = Vec::with_capacity(monomials.len());
    for (det, (exp, name)) in minors.into_iter().zip(monomials) {
        if det.singular {
            return Err(CurveError::DegenerateConfiguration { minor: name.to_string() });
        }
        let value = det.value.as_finite().expect("finite points give finite minors").clone();
        terms.push((exp.to_vec(), value));
    }
    let curve = TropPolynomial::new(2, terms)?;
    debug_assert!(points.iter().all(|x| curve.evaluate(x).is_ok_and(|e| e.on_hypersurface())));
    Ok(curve)
}

/// The tropical line `a⊙x ⊕ b⊙y ⊕ c` through two points.
pub fn interpolate_line(p1: &Point2, p2: &Point2) -> Result<TropPolynomial, CurveError> {
    through_points(&[p1.clone(), p2.clone()], &LINE_MONOMIALS)
}

/// The tropical conic through five points, with monomials
/// `x², xy, y², x, y, 1`.
pub fn interpolate_conic(points: &[Point2; 5]) -> Result<TropPolynomial, CurveError> {
    through_points(points, &CONIC_MONOMIALS)
}
