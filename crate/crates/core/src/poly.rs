//! Tropical polynomials in `n` variables with integer (possibly negative)
//! exponents and exact rational coefficients.
//!
//! As a function `p(x) = min_e (c_e + e·x)`, which is piecewise linear and
//! concave. Two polynomials define the same function exactly when their
//! lifted lower hulls agree, so [`TropPolynomial::canonicalize`] (keep only
//! hull vertices) is a normal form for functions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::hull::{lifted_hull, LiftedHull};
use crate::rational::{format_rational, Rational};
use crate::scalar::TropScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("a polynomial needs at least one finite term")]
    NoTerms,
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("expected {expected} variables, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation needs a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),
}

/// Exponent vector of a tropical monomial; as a function it is the linear
/// form `x ↦ e·x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn apply(&self, x: &[Rational]) -> Rational {
        self.0.iter().zip(x).map(|(&e, xi)| xi * Rational::from_integer(e.into())).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropPolynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

/// The value of a polynomial at a point and the terms attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rational,
    pub minimizers: Vec<Monomial>,
}

impl Evaluation {
    pub fn count(&self) -> usize {
        self.minimizers.len()
    }

    /// Whether the point lies on the tropical hypersurface.
    pub fn on_hypersurface(&self) -> bool {
        self.minimizers.len() >= 2
    }
}

/// `(x ⊕ root)^multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub value: Rational,
    pub multiplicity: u64,
}

/// `lead ⊙ x^shift ⊙ Π (x ⊕ r)^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub lead: Rational,
    pub shift: i64,
    pub factors: Vec<Root>,
}

impl TropPolynomial {
    /// Builds a polynomial; repeated exponent vectors are combined with `⊕`.
    pub fn new(
        dim: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, Rational)>,
    ) -> Result<Self, PolyError> {
        if dim == 0 {
            return Err(PolyError::ZeroDimension);
        }
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.len() != dim {
                return Err(PolyError::DimensionMismatch { expected: dim, found: exp.len() });
            }
            map.entry(Monomial(exp))
                .and_modify(|c| {
                    if coef < *c {
                        *c = coef.clone();
                    }
                })
                .or_insert(coef);
        }
        if map.is_empty() {
            return Err(PolyError::NoTerms);
        }
        Ok(TropPolynomial { dim, terms: map })
    }

    /// Like [`TropPolynomial::new`] but with tropical coefficients; `∞` terms
    /// are dropped.
    pub fn from_scalars(
        dim: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, TropScalar)>,
    ) -> Result<Self, PolyError> {
        TropPolynomial::new(
            dim,
            terms.into_iter().filter_map(|(e, c)| match c {
                TropScalar::Finite(v) => Some((e, v)),
                TropScalar::Infinity => None,
            }),
        )
    }

    /// The constant polynomial `0`, the unit for [`TropPolynomial::expand_product`].
    pub fn unit(dim: usize) -> Self {
        TropPolynomial::new(dim, [(vec![0; dim], Rational::zero())]).expect("unit polynomial is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[i64]) -> TropScalar {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .map_or(TropScalar::Infinity, |c| TropScalar::Finite(c.clone()))
    }

    fn check_dim(&self, found: usize) -> Result<(), PolyError> {
        if found == self.dim {
            Ok(())
        } else {
            Err(PolyError::DimensionMismatch { expected: self.dim, found })
        }
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Evaluation, PolyError> {
        self.check_dim(x.len())?;
        let mut value: Option<Rational> = None;
        let mut minimizers = Vec::new();
        for (m, c) in &self.terms {
            let v = c + m.apply(x);
            match &value {
                Some(best) if v > *best => {}
                Some(best) if v == *best => minimizers.push(m.clone()),
                _ => {
                    value = Some(v);
                    minimizers.clear();
                    minimizers.push(m.clone());
                }
            }
        }
        Ok(Evaluation { value: value.expect("polynomial has terms"), minimizers })
    }

    /// Tropical product: min-plus convolution of the coefficient maps.
    pub fn expand_product(&self, other: &TropPolynomial) -> Result<TropPolynomial, PolyError> {
        self.check_dim(other.dim)?;
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 + c2;
                terms
                    .entry(m1.times(m2))
                    .and_modify(|old| {
                        if c < *old {
                            *old = c.clone();
                        }
                    })
                    .or_insert(c);
            }
        }
        Ok(TropPolynomial { dim: self.dim, terms })
    }

    /// `k`-fold tropical product with itself; `pow(0)` is the unit.
    pub fn pow(&self, k: u32) -> TropPolynomial {
        (0..k).fold(TropPolynomial::unit(self.dim), |acc, _| {
            acc.expand_product(self).expect("same dimension")
        })
    }

    /// Tropical sum: the union of terms, taking minima on shared exponents.
    pub fn oplus(&self, other: &TropPolynomial) -> Result<TropPolynomial, PolyError> {
        self.check_dim(other.dim)?;
        TropPolynomial::new(
            self.dim,
            self.terms.iter().chain(&other.terms).map(|(m, c)| (m.0.clone(), c.clone())),
        )
    }

    /// Multiplies every coefficient tropically by `c`.
    pub fn scale(&self, c: &Rational) -> TropPolynomial {
        TropPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v + c)).collect(),
        }
    }

    pub fn lifted_hull(&self) -> LiftedHull {
        lifted_hull(self)
    }

    /// The polynomial made of the lower-hull vertices only. Function-equal to
    /// `self`, idempotent, and equal for any two function-equal inputs.
    pub fn canonicalize(&self) -> TropPolynomial {
        let hull = lifted_hull(self);
        let terms = hull
            .vertices
            .iter()
            .map(|&i| (hull.points[i].0.clone(), hull.points[i].1.clone()))
            .collect();
        TropPolynomial { dim: self.dim, terms }
    }

    /// Whether both polynomials define the same function on `Q^n`.
    ///
    /// Decided exactly: two concave piecewise-linear functions coincide iff
    /// their lifted lower hulls coincide, and a lower hull is determined by
    /// its vertex set. Equal canonical forms therefore mean equal Newton
    /// polytopes and equal hull heights everywhere.
    pub fn function_equals(&self, other: &TropPolynomial) -> Result<bool, PolyError> {
        self.check_dim(other.dim)?;
        Ok(self.canonicalize() == other.canonicalize())
    }

    /// Hull vertices of a univariate polynomial, highest exponent first.
    fn univariate_hull(&self) -> Result<Vec<(i64, Rational)>, PolyError> {
        if self.dim != 1 {
            return Err(PolyError::NotUnivariate(self.dim));
        }
        let canon = self.canonicalize();
        Ok(canon.terms.into_iter().rev().map(|(m, c)| (m.0[0], c)).collect())
    }

    /// Roots with multiplicity, in increasing order. Between consecutive hull
    /// vertices `(e_i, c_i)`, `(e_{i+1}, c_{i+1})` the root is
    /// `(c_{i+1} - c_i) / (e_i - e_{i+1})` with multiplicity `e_i - e_{i+1}`.
    pub fn univariate_roots(&self) -> Result<Vec<Root>, PolyError> {
        let hull = self.univariate_hull()?;
        Ok(hull
            .windows(2)
            .map(|w| {
                let (e0, c0) = &w[0];
                let (e1, c1) = &w[1];
                let gap = e0 - e1;
                Root {
                    value: (c1 - c0) / Rational::from_integer(gap.into()),
                    multiplicity: gap as u64,
                }
            })
            .collect())
    }

    /// Factors the function into linear factors. The result expands to a
    /// polynomial function-equal to `self`.
    pub fn univariate_factor(&self) -> Result<Factorization, PolyError> {
        let hull = self.univariate_hull()?;
        let lead = hull[0].1.clone();
        let shift = hull.last().expect("nonempty hull").0;
        let factors = self.univariate_roots()?;
        let factorization = Factorization { lead, shift, factors };
        assert!(
            factorization.expand().function_equals(self)?,
            "factorization does not reproduce the input"
        );
        Ok(factorization)
    }
}

impl Factorization {
    /// Multiplies the factors back out.
    pub fn expand(&self) -> TropPolynomial {
        let mut product = TropPolynomial::new(1, [(vec![self.shift], self.lead.clone())])
            .expect("monomial is valid");
        for root in &self.factors {
            let linear = TropPolynomial::new(1, [(vec![1], Rational::zero()), (vec![0], root.value.clone())])
                .expect("linear factor is valid");
            let power = linear.pow(root.multiplicity as u32);
            product = product.expand_product(&power).expect("univariate");
        }
        product
    }
}

pub fn evaluate(p: &TropPolynomial, x: &[Rational]) -> Result<Evaluation, PolyError> {
    p.evaluate(x)
}

pub fn expand_product(p: &TropPolynomial, q: &TropPolynomial) -> Result<TropPolynomial, PolyError> {
    p.expand_product(q)
}

pub fn canonicalize(p: &TropPolynomial) -> TropPolynomial {
    p.canonicalize()
}

pub fn function_equals(p: &TropPolynomial, q: &TropPolynomial) -> Result<bool, PolyError> {
    p.function_equals(q)
}

pub fn univariate_roots(p: &TropPolynomial) -> Result<Vec<Root>, PolyError> {
    p.univariate_roots()
}

pub fn univariate_factor(p: &TropPolynomial) -> Result<Factorization, PolyError> {
    p.univariate_factor()
}

/// Renders with default variable names `x`, `y`, `z`, then `x1, x2, ..`.
impl fmt::Display for TropPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_variable_names(self.dim);
        f.write_str(&self.render(&names))
    }
}

pub fn default_variable_names(dim: usize) -> Vec<String> {
    if dim <= 3 {
        ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

impl TropPolynomial {
    /// Text form `c*x^i*y^j + ...`, highest total degree first. A zero
    /// coefficient in front of a non-constant monomial is omitted.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.dim, "one name per variable");
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then_with(|| b.cmp(a)));
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .zip(names)
                    .filter(|(e, _)| **e != 0)
                    .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                    .collect();
                match (vars.is_empty(), c.is_zero()) {
                    (true, _) => format_rational(c),
                    (false, true) => vars.join("*"),
                    (false, false) => format!("{}*{}", format_rational(c), vars.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn uni(terms: &[(i64, i64)]) -> TropPolynomial {
        TropPolynomial::new(1, terms.iter().map(|&(e, c)| (vec![e], int(c)))).unwrap()
    }

    fn bi(terms: &[(i64, i64, i64)]) -> TropPolynomial {
        TropPolynomial::new(2, terms.iter().map(|&(i, j, c)| (vec![i, j], int(c)))).unwrap()
    }

    fn cubic(a: i64, b: i64, c: i64, d: i64) -> TropPolynomial {
        uni(&[(3, a), (2, b), (1, c), (0, d)])
    }

    #[test]
    fn evaluates_cubic_with_tie() {
        let ev = cubic(0, 1, 3, 6).evaluate(&[int(2)]).unwrap();
        assert_eq!(ev.value, int(5));
        assert_eq!(ev.count(), 2);
        assert!(ev.on_hypersurface());
    }

    #[test]
    fn evaluates_simple_forms() {
        let p = bi(&[(1, 0, 0), (0, 1, 0)]);
        assert_eq!(p.evaluate(&[int(4), int(9)]).unwrap().value, int(4));
        let q = bi(&[(1, 1, 2)]);
        let ev = q.evaluate(&[int(3), int(5)]).unwrap();
        assert_eq!(ev.value, int(10));
        assert_eq!(ev.count(), 1);
        assert!(p.evaluate(&[int(1)]).is_err());
    }

    #[test]
    fn duplicate_terms_take_minimum() {
        let p = TropPolynomial::new(1, [(vec![1], int(3)), (vec![1], int(-2))]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&[1]), TropScalar::from_int(-2));
        assert_eq!(p.coefficient(&[5]), TropScalar::Infinity);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(TropPolynomial::new(1, []), Err(PolyError::NoTerms));
        assert_eq!(TropPolynomial::new(0, [(vec![], int(0))]), Err(PolyError::ZeroDimension));
        assert!(matches!(
            TropPolynomial::new(2, [(vec![1], int(0))]),
            Err(PolyError::DimensionMismatch { .. })
        ));
        let only_inf = TropPolynomial::from_scalars(1, [(vec![1], TropScalar::Infinity)]);
        assert_eq!(only_inf, Err(PolyError::NoTerms));
    }

    #[test]
    fn square_of_binomial() {
        let x_plus_y = bi(&[(1, 0, 0), (0, 1, 0)]);
        let sq = x_plus_y.pow(2);
        assert_eq!(sq, bi(&[(2, 0, 0), (1, 1, 0), (0, 2, 0)]));
        assert_eq!(x_plus_y.expand_product(&TropPolynomial::unit(2)).unwrap(), x_plus_y);
    }

    #[test]
    fn canonical_form_drops_dominated_terms() {
        let p = uni(&[(2, 0), (1, 17), (0, 2)]);
        assert_eq!(p.canonicalize(), uni(&[(2, 0), (0, 2)]));
        let cube = bi(&[(3, 0, 0), (2, 1, 0), (1, 2, 0), (0, 3, 0)]);
        assert_eq!(cube.canonicalize(), bi(&[(3, 0, 0), (0, 3, 0)]));
        let canon = p.canonicalize();
        assert_eq!(canon.canonicalize(), canon);
    }

    #[test]
    fn function_equality() {
        let p = uni(&[(2, 0), (1, 17), (0, 2)]);
        let sq = uni(&[(1, 0), (0, 1)]).pow(2);
        assert!(p.function_equals(&sq).unwrap());
        assert!(!uni(&[(1, 0), (0, 0)]).function_equals(&uni(&[(1, 0), (0, 1)])).unwrap());
        assert!(p.function_equals(&bi(&[(0, 0, 0)])).is_err());
    }

    #[test]
    fn roots_of_examples() {
        let roots = uni(&[(2, 0), (1, 17), (0, 2)]).univariate_roots().unwrap();
        assert_eq!(roots, vec![Root { value: int(1), multiplicity: 2 }]);
        let roots = cubic(0, 1, 3, 6).univariate_roots().unwrap();
        let values: Vec<Rational> = roots.iter().map(|r| r.value.clone()).collect();
        assert_eq!(values, vec![int(1), int(2), int(3)]);
        assert!(uni(&[(4, 9)]).univariate_roots().unwrap().is_empty());
        assert_eq!(bi(&[(1, 0, 0)]).univariate_roots(), Err(PolyError::NotUnivariate(2)));
    }

    #[test]
    fn factor_examples() {
        let f = uni(&[(2, 0), (1, 17), (0, 2)]).univariate_factor().unwrap();
        assert_eq!(f, Factorization { lead: int(0), shift: 0, factors: vec![Root { value: int(1), multiplicity: 2 }] });
        let f = uni(&[(-2, 5)]).univariate_factor().unwrap();
        assert_eq!(f, Factorization { lead: int(5), shift: -2, factors: vec![] });
        let f = cubic(2, 4, 7, 11).univariate_factor().unwrap();
        assert_eq!(f.lead, int(2));
        assert_eq!(f.factors.iter().map(|r| r.value.clone()).collect::<Vec<_>>(), vec![int(2), int(3), int(4)]);
    }

    #[test]
    fn negative_exponents_factor_with_shift() {
        let p = uni(&[(1, 0), (-1, 4), (-3, 4)]);
        let f = p.univariate_factor().unwrap();
        assert_eq!(f.shift, -3);
        assert!(f.expand().function_equals(&p).unwrap());
        let total: u64 = f.factors.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn renders_terms() {
        assert_eq!(cubic(0, 1, 3, 6).to_string(), "x^3 + 1*x^2 + 3*x + 6");
        assert_eq!(bi(&[(1, 1, -2), (0, 0, 0)]).to_string(), "-2*x*y + 0");
        assert_eq!(uni(&[(-2, 5)]).to_string(), "5*x^-2");
    }
}
