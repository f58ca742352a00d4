//! Tropical Plücker vectors and the linear spaces they define.
//!
//! Subsets are sorted 0-based index vectors internally; the text format and
//! error messages use 1-based indices. Coordinates are stored in colex order
//! of their subsets.

use std::fmt;
use std::str::FromStr;

use crate::matrix::{content_lines, TropMatrix};
use crate::rational::Rational;
use crate::scalar::TropScalar;
use crate::subsets::{binomial, colex_rank, colex_unrank, combinations};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinearError {
    #[error("rank {d} is not in 1..={n}")]
    InvalidShape { n: usize, d: usize },
    #[error("expected {expected} coordinates, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("every coordinate is infinite")]
    AllInfinite,
    #[error("bad subset {}", one_based(.0))]
    BadSubset(Vec<usize>),
    #[error("missing coordinate for subset {}", one_based(.0))]
    MissingSubset(Vec<usize>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("a linear form needs at least two finite coefficients")]
    TooFewFinite,
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not in the tropical Grassmannian: {0}")]
    NotInGrassmannian(PlueckerViolation),
    #[error("singular minor on columns {}", one_based(.columns))]
    DegenerateConfiguration { columns: Vec<usize> },
}

fn one_based(subset: &[usize]) -> String {
    let parts: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// A map from the `d`-subsets of `{0..n}` to tropical scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlueckerVector {
    n: usize,
    d: usize,
    coords: Vec<TropScalar>,
}

impl PlueckerVector {
    /// `coords` in colex order of the subsets.
    pub fn new(n: usize, d: usize, coords: Vec<TropScalar>) -> Result<Self, LinearError> {
        if d == 0 || d > n {
            return Err(LinearError::InvalidShape { n, d });
        }
        let expected = binomial(n, d);
        if coords.len() != expected {
            return Err(LinearError::WrongLength { expected, found: coords.len() });
        }
        if coords.iter().all(|c| !c.is_finite()) {
            return Err(LinearError::AllInfinite);
        }
        Ok(PlueckerVector { n, d, coords })
    }

    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(&[usize]) -> TropScalar) -> Result<Self, LinearError> {
        if d == 0 || d > n {
            return Err(LinearError::InvalidShape { n, d });
        }
        let coords = (0..binomial(n, d)).map(|r| f(&colex_unrank(r, d))).collect();
        PlueckerVector::new(n, d, coords)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Coordinate of a sorted `d`-subset.
    pub fn get(&self, subset: &[usize]) -> &TropScalar {
        debug_assert!(subset.len() == self.d && subset.windows(2).all(|w| w[0] < w[1]));
        &self.coords[colex_rank(subset)]
    }

    /// `(subset, coordinate)` pairs in colex order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &TropScalar)> + '_ {
        self.coords.iter().enumerate().map(move |(r, c)| (colex_unrank(r, self.d), c))
    }

    /// Tropical multiplication of every coordinate by `c`.
    pub fn scaled(&self, c: &Rational) -> PlueckerVector {
        let shift = TropScalar::Finite(c.clone());
        let coords = self.coords.iter().map(|x| x.otimes(&shift)).collect();
        PlueckerVector { n: self.n, d: self.d, coords }
    }
}

/// Text form: header `n d`, then one line per subset in colex order.
impl fmt::Display for PlueckerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.d)?;
        for (subset, value) in self.iter() {
            for i in subset {
                write!(f, "{} ", i + 1)?;
            }
            writeln!(f, "{value}")?;
        }
        Ok(())
    }
}

impl FromStr for PlueckerVector {
    type Err = LinearError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = content_lines(s);
        let (header_line, header) = lines
            .next()
            .ok_or(LinearError::Parse { line: 1, message: "missing `n d` header".into() })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| LinearError::Parse { line: header_line, message: "expected `n d`".into() })?;
        let [n, d] = dims[..] else {
            return Err(LinearError::Parse { line: header_line, message: "expected `n d`".into() });
        };
        if d == 0 || d > n {
            return Err(LinearError::InvalidShape { n, d });
        }
        let mut coords: Vec<Option<TropScalar>> = vec![None; binomial(n, d)];
        for (line, text) in lines {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            if tokens.len() != d + 1 {
                return Err(LinearError::Parse { line, message: format!("expected {d} indices and a value") });
            }
            let mut subset = Vec::with_capacity(d);
            for t in &tokens[..d] {
                match t.parse::<usize>() {
                    Ok(i) if (1..=n).contains(&i) => subset.push(i - 1),
                    _ => return Err(LinearError::Parse { line, message: format!("bad index `{t}`") }),
                }
            }
            subset.sort_unstable();
            if subset.windows(2).any(|w| w[0] == w[1]) {
                return Err(LinearError::Parse { line, message: "repeated index".into() });
            }
            let value = tokens[d]
                .parse::<TropScalar>()
                .map_err(|e| LinearError::Parse { line, message: e.to_string() })?;
            let slot = &mut coords[colex_rank(&subset)];
            if slot.is_some() {
                return Err(LinearError::Parse { line, message: format!("duplicate subset {}", one_based(&subset)) });
            }
            *slot = Some(value);
        }
        let coords = coords
            .into_iter()
            .enumerate()
            .map(|(r, c)| c.ok_or_else(|| LinearError::MissingSubset(colex_unrank(r, d))))
            .collect::<Result<Vec<_>, _>>()?;
        PlueckerVector::new(n, d, coords)
    }
}

/// A failed three-term relation: for the common subset `rest` and the four
/// indices `quad`, the minimum of the three pairings is attained once.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlueckerViolation {
    pub rest: Vec<usize>,
    pub quad: [usize; 4],
}

impl fmt::Display for PlueckerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "relation S={} ijkl={}", one_based(&self.rest), one_based(&self.quad))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrassmannianReport {
    pub member: bool,
    pub violations: Vec<PlueckerViolation>,
}

/// Whether the minimum of the finite values is attained at least twice.
/// Fewer than two finite values impose no condition.
fn min_attained_twice<'a>(values: impl IntoIterator<Item = &'a TropScalar>) -> bool {
    let finite: Vec<&Rational> = values.into_iter().filter_map(TropScalar::as_finite).collect();
    if finite.len() < 2 {
        return true;
    }
    let min = finite.iter().min().expect("nonempty");
    finite.iter().filter(|v| *v == min).count() >= 2
}

fn with(rest: &[usize], extra: [usize; 2]) -> Vec<usize> {
    let mut s: Vec<usize> = rest.iter().copied().chain(extra).collect();
    s.sort_unstable();
    s
}

/// Checks every three-term Plücker relation. Vacuous when `d < 2` or
/// `n < d + 2`.
pub fn grassmannian_member(x: &PlueckerVector) -> GrassmannianReport {
    let (n, d) = (x.n, x.d);
    let mut violations = Vec::new();
    if d >= 2 && n >= d + 2 {
        for rest in combinations(n, d - 2) {
            let outside: Vec<usize> = (0..n).filter(|i| !rest.contains(i)).collect();
            for q in combinations(outside.len(), 4) {
                let [i, j, k, l] = [outside[q[0]], outside[q[1]], outside[q[2]], outside[q[3]]];
                let term = |a: [usize; 2], b: [usize; 2]| x.get(&with(&rest, a)).otimes(x.get(&with(&rest, b)));
                let terms = [term([i, j], [k, l]), term([i, k], [j, l]), term([i, l], [j, k])];
                if !min_attained_twice(&terms) {
                    violations.push(PlueckerViolation { rest: rest.clone(), quad: [i, j, k, l] });
                }
            }
        }
    }
    GrassmannianReport { member: violations.is_empty(), violations }
}

/// `a_1 ⊙ x_1 ⊕ ... ⊕ a_n ⊙ x_n` with at least two finite coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropLinearForm {
    coefficients: Vec<TropScalar>,
}

impl TropLinearForm {
    pub fn new(coefficients: Vec<TropScalar>) -> Result<Self, LinearError> {
        if coefficients.iter().filter(|c| c.is_finite()).count() < 2 {
            return Err(LinearError::TooFewFinite);
        }
        Ok(TropLinearForm { coefficients })
    }

    pub fn coefficients(&self) -> &[TropScalar] {
        &self.coefficients
    }

    /// Minimum value and the indices attaining it.
    pub fn evaluate(&self, x: &[Rational]) -> Result<(Rational, Vec<usize>), LinearError> {
        if x.len() != self.coefficients.len() {
            return Err(LinearError::DimensionMismatch { expected: self.coefficients.len(), found: x.len() });
        }
        let values: Vec<Option<Rational>> =
            self.coefficients.iter().zip(x).map(|(a, xi)| a.as_finite().map(|a| a + xi)).collect();
        let min = values.iter().flatten().min().expect("at least two finite terms").clone();
        let argmin = (0..values.len()).filter(|&i| values[i].as_ref() == Some(&min)).collect();
        Ok((min, argmin))
    }

    /// Whether `x` lies on the tropical hyperplane of the form.
    pub fn contains(&self, x: &[Rational]) -> Result<bool, LinearError> {
        Ok(self.evaluate(x)?.1.len() >= 2)
    }
}

impl fmt::Display for TropLinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coefficients.iter().enumerate() {
            if let TropScalar::Finite(a) = a {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                write!(f, "{}*x{}", crate::rational::format_rational(a), i + 1)?;
            }
        }
        Ok(())
    }
}

fn form_coefficients(x: &PlueckerVector, subset: &[usize]) -> Vec<TropScalar> {
    let mut coefficients = vec![TropScalar::Infinity; x.n];
    for (r, &j) in subset.iter().enumerate() {
        let mut without = subset.to_vec();
        without.remove(r);
        coefficients[j] = x.get(&without).clone();
    }
    coefficients
}

/// The form whose coefficient on `x_j` is the coordinate of `subset \ {j}`,
/// for a sorted `(d+1)`-subset.
pub fn linear_form(x: &PlueckerVector, subset: &[usize]) -> Result<TropLinearForm, LinearError> {
    let valid = subset.len() == x.d + 1
        && subset.windows(2).all(|w| w[0] < w[1])
        && subset.last().is_some_and(|&j| j < x.n);
    if !valid {
        return Err(LinearError::BadSubset(subset.to_vec()));
    }
    TropLinearForm::new(form_coefficients(x, subset))
}

/// The first `(d+1)`-subset whose form does not vanish tropically at `point`,
/// or `None` if `point` lies in the linear space of `x`.
pub fn linear_space_violation(point: &[Rational], x: &PlueckerVector) -> Result<Option<Vec<usize>>, LinearError> {
    if point.len() != x.n {
        return Err(LinearError::DimensionMismatch { expected: x.n, found: point.len() });
    }
    if let Some(v) = grassmannian_member(x).violations.into_iter().next() {
        return Err(LinearError::NotInGrassmannian(v));
    }
    for subset in combinations(x.n, x.d + 1) {
        let values: Vec<TropScalar> = form_coefficients(x, &subset)
            .iter()
            .zip(point)
            .map(|(a, p)| a.otimes(&TropScalar::Finite(p.clone())))
            .collect();
        if !min_attained_twice(&values) {
            return Ok(Some(subset));
        }
    }
    Ok(None)
}

pub fn linear_space_member(point: &[Rational], x: &PlueckerVector) -> Result<bool, LinearError> {
    Ok(linear_space_violation(point, x)?.is_none())
}

/// The hyperplane through `n - 1` points of `Q^n` by tropical Cramer's rule.
pub fn hyperplane_through_points(points: &[Vec<Rational>]) -> Result<TropLinearForm, LinearError> {
    let n = points.len() + 1;
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(LinearError::DimensionMismatch { expected: n, found: p.len() });
    }
    if points.is_empty() {
        return Err(LinearError::DimensionMismatch { expected: 2, found: 0 });
    }
    let matrix = TropMatrix::from_fn(n - 1, n, |i, j| TropScalar::Finite(points[i][j].clone()));
    let minors = matrix.cramer_minors().expect("one more column than rows");
    let mut coefficients = Vec::with_capacity(n);
    for (skip, det) in minors.into_iter().enumerate() {
        if det.singular {
            let columns = (0..n).filter(|&j| j != skip).collect();
            return Err(LinearError::DegenerateConfiguration { columns });
        }
        coefficients.push(det.value);
    }
    let form = TropLinearForm::new(coefficients)?;
    debug_assert!(points.iter().all(|p| form.contains(p).unwrap_or(false)));
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn s(v: i64) -> TropScalar {
        TropScalar::from_int(v)
    }

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn zero(n: usize, d: usize) -> PlueckerVector {
        PlueckerVector::from_fn(n, d, |_| s(0)).unwrap()
    }

    #[test]
    fn all_zero_is_a_member() {
        for (n, d) in [(4, 2), (5, 2), (5, 3), (6, 3), (3, 2)] {
            assert!(grassmannian_member(&zero(n, d)).member);
        }
    }

    #[test]
    fn single_relation_failure() {
        let x = PlueckerVector::from_fn(4, 2, |sub| match sub {
            [0, 1] | [2, 3] => s(0),
            _ => s(1),
        })
        .unwrap();
        let report = grassmannian_member(&x);
        assert!(!report.member);
        assert_eq!(report.violations, vec![PlueckerViolation { rest: vec![], quad: [0, 1, 2, 3] }]);
        assert_eq!(report.violations[0].to_string(), "relation S={} ijkl={1,2,3,4}");
    }

    #[test]
    fn negated_hmrc_is_a_member() {
        // H M R C
        let d = [[0, 11, 10, 14], [11, 0, 3, 13], [10, 3, 0, 12], [14, 13, 12, 0]];
        let x = PlueckerVector::from_fn(4, 2, |s| TropScalar::Finite(-frac(d[s[0]][s[1]], 10))).unwrap();
        assert!(grassmannian_member(&x).member);
        let form = linear_form(&x, &[0, 1, 2]).unwrap();
        let expect: Vec<TropScalar> = [(1, 2), (0, 2), (0, 1)]
            .iter()
            .map(|&(a, b)| TropScalar::Finite(-frac(d[a][b], 10)))
            .chain([TropScalar::Infinity])
            .collect();
        assert_eq!(form.coefficients(), &expect[..]);
    }

    #[test]
    fn rank_three_form_uses_the_omitted_index() {
        let x = PlueckerVector::from_fn(4, 3, s_of).unwrap();
        fn s_of(s: &[usize]) -> TropScalar {
            TropScalar::from_int((s[0] * 100 + s[1] * 10 + s[2]) as i64)
        }
        let form = linear_form(&x, &[0, 1, 2, 3]).unwrap();
        assert_eq!(form.coefficients(), &[s_of(&[1, 2, 3]), s_of(&[0, 2, 3]), s_of(&[0, 1, 3]), s_of(&[0, 1, 2])]);
        assert!(matches!(linear_form(&x, &[0, 1, 2]), Err(LinearError::BadSubset(_))));
    }

    #[test]
    fn zero_vector_linear_space() {
        let x = zero(4, 2);
        assert!(linear_space_member(&pt(&[0, 0, 0, 7]), &x).unwrap());
        assert_eq!(linear_space_violation(&pt(&[0, 0, 5, 7]), &x).unwrap(), Some(vec![0, 2, 3]));
        let c = frac(-7, 3);
        let shifted: Vec<Rational> = pt(&[0, 0, 0, 7]).iter().map(|v| v + &c).collect();
        assert!(linear_space_member(&shifted, &x.scaled(&c)).unwrap());
    }

    #[test]
    fn refuses_outside_the_grassmannian() {
        let x = PlueckerVector::from_fn(4, 2, |sub| if sub == [0, 1] || sub == [2, 3] { s(0) } else { s(1) }).unwrap();
        assert!(matches!(linear_space_member(&pt(&[0, 0, 0, 0]), &x), Err(LinearError::NotInGrassmannian(_))));
    }

    #[test]
    fn hyperplane_in_three_space() {
        let pts = vec![pt(&[0, 3, 1, 7]), pt(&[2, -1, 4, 0]), pt(&[5, 6, -3, 1])];
        let h = hyperplane_through_points(&pts).unwrap();
        for p in &pts {
            assert!(h.contains(p).unwrap());
        }
        let repeated = vec![pt(&[0, 3, 1, 7]), pt(&[0, 3, 1, 7]), pt(&[5, 5, -2, 1])];
        assert!(matches!(
            hyperplane_through_points(&repeated),
            Err(LinearError::DegenerateConfiguration { .. })
        ));
    }

    #[test]
    fn file_format_round_trip() {
        let text = "4 2\n1 2 0\n1 3 1\n2 3 inf\n1 4 -1/2\n2 4 3\n3 4 0.25\n";
        let x: PlueckerVector = text.parse().unwrap();
        assert_eq!(x.get(&[1, 2]), &TropScalar::Infinity);
        assert_eq!(x.to_string().parse::<PlueckerVector>().unwrap(), x);
        let missing = "4 2\n1 2 0\n";
        assert_eq!(missing.parse::<PlueckerVector>(), Err(LinearError::MissingSubset(vec![0, 2])));
    }

    #[test]
    fn forms_need_two_finite_terms() {
        assert_eq!(
            TropLinearForm::new(vec![s(0), TropScalar::Infinity]),
            Err(LinearError::TooFewFinite)
        );
        assert!(min_attained_twice(&[s(3), TropScalar::Infinity, TropScalar::Infinity]));
    }
}
