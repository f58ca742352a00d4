//! Distance matrices, tree metrics and their reconstruction.

mod newick;
mod nj;
mod tree;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

pub use nj::reconstruct_tree;
pub use tree::PhyloTree;

use crate::linear::{grassmannian_member, PlueckerVector};
use crate::matrix::{content_lines, MatrixError, TropMatrix};
use crate::rational::Rational;
use crate::scalar::TropScalar;
use crate::subsets::combinations;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PhyloError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("{labels} taxa labels for a {size}x{size} matrix")]
    TaxaCount { labels: usize, size: usize },
    #[error("duplicate taxon `{0}`")]
    DuplicateTaxon(String),
    #[error("entry ({i}, {j}) is infinite")]
    Infinite { i: usize, j: usize },
    #[error("diagonal entry {0} is not zero")]
    NonzeroDiagonal(usize),
    #[error("entries ({i}, {j}) and ({j}, {i}) differ")]
    NotSymmetric { i: usize, j: usize },
    #[error("off-diagonal entry ({i}, {j}) is not positive")]
    NonPositive { i: usize, j: usize },
    #[error("not a tree metric: {0}")]
    NotTreeMetric(Certificate),
    #[error("taxon `{0}` would need a pendant edge of length zero")]
    ZeroPendant(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("newick, byte {position}: {message}")]
    Newick { position: usize, message: String },
}

/// Why a matrix is not a tree metric, using taxon indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `d(i,k) > d(i,j) + d(j,k)`.
    Triangle([usize; 3]),
    /// The maximum of the three pairings of `{i,j,k,l}` is attained once.
    Quadruple([usize; 4]),
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Triangle([i, j, k]) => {
                write!(f, "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})")
            }
            Certificate::Quadruple([i, j, k, l]) => {
                write!(f, "four-point condition fails on {{{i},{j},{k},{l}}}")
            }
        }
    }
}

/// A labelled symmetric matrix with zero diagonal and positive off-diagonal
/// entries. The triangle inequality is not required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    taxa: Vec<String>,
    entries: Vec<Rational>,
}

impl DistanceMatrix {
    pub fn new(taxa: Vec<String>, rows: Vec<Vec<Rational>>) -> Result<Self, PhyloError> {
        let n = taxa.len();
        if rows.len() != n {
            return Err(PhyloError::TaxaCount { labels: n, size: rows.len() });
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Ragged { row: i, expected: n, found: row.len() }.into());
            }
            entries.extend(row);
        }
        DistanceMatrix::validated(taxa, entries)
    }

    /// Builds a matrix from a symmetric function on index pairs `i < j`.
    pub fn from_fn(taxa: Vec<String>, mut f: impl FnMut(usize, usize) -> Rational) -> Result<Self, PhyloError> {
        let n = taxa.len();
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                entries[j * n + i] = v.clone();
                entries[i * n + j] = v;
            }
        }
        DistanceMatrix::validated(taxa, entries)
    }

    pub fn from_trop_matrix(taxa: Vec<String>, m: &TropMatrix) -> Result<Self, PhyloError> {
        if !m.is_square() || m.rows() != taxa.len() {
            return Err(PhyloError::TaxaCount { labels: taxa.len(), size: m.rows() });
        }
        let n = m.rows();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(m.get(i, j).as_finite().ok_or(PhyloError::Infinite { i, j })?.clone());
            }
        }
        DistanceMatrix::validated(taxa, entries)
    }

    fn validated(taxa: Vec<String>, entries: Vec<Rational>) -> Result<Self, PhyloError> {
        let n = taxa.len();
        for (i, t) in taxa.iter().enumerate() {
            if taxa[..i].contains(t) {
                return Err(PhyloError::DuplicateTaxon(t.clone()));
            }
        }
        for i in 0..n {
            if !entries[i * n + i].is_zero() {
                return Err(PhyloError::NonzeroDiagonal(i));
            }
            for j in i + 1..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(PhyloError::NotSymmetric { i, j });
                }
                if !entries[i * n + j].is_positive() {
                    return Err(PhyloError::NonPositive { i, j });
                }
            }
        }
        Ok(DistanceMatrix { taxa, entries })
    }

    /// Default labels `t1, t2, ...`.
    pub fn default_taxa(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("t{i}")).collect()
    }

    pub fn n(&self) -> usize {
        self.taxa.len()
    }

    pub fn taxa(&self) -> &[String] {
        &self.taxa
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n() + j]
    }

    pub fn to_trop_matrix(&self) -> TropMatrix {
        TropMatrix::from_fn(self.n(), self.n(), |i, j| TropScalar::Finite(self.get(i, j).clone()))
    }

    /// The rank-2 Plücker vector with coordinate `-d(i,j)` on `{i,j}`.
    pub fn negated_pluecker(&self) -> Option<PlueckerVector> {
        PlueckerVector::from_fn(self.n(), 2, |s| TropScalar::Finite(-self.get(s[0], s[1]))).ok()
    }
}

/// Text form: a line of taxon labels followed by the matrix format.
impl fmt::Display for DistanceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.taxa.join(" "))?;
        write!(f, "{}", self.to_trop_matrix())
    }
}

impl FromStr for DistanceMatrix {
    type Err = PhyloError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = content_lines(s);
        let (_, labels) = lines
            .next()
            .ok_or(MatrixError::Parse { line: 1, message: "missing taxa line".into() })?;
        let taxa: Vec<String> = labels.split_whitespace().map(str::to_string).collect();
        let m = TropMatrix::parse_lines(&mut lines)?;
        if let Some((line, _)) = lines.next() {
            return Err(MatrixError::Parse { line, message: "trailing content after matrix".into() }.into());
        }
        DistanceMatrix::from_trop_matrix(taxa, &m)
    }
}

/// A violated triangle inequality, if any.
pub fn triangle_violation(d: &DistanceMatrix) -> Option<[usize; 3]> {
    let n = d.n();
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                if j != i && j != k && *d.get(i, k) > d.get(i, j) + d.get(j, k) {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

/// Whether `D ⊙ D = D`, i.e. `d` satisfies the triangle inequality.
pub fn is_metric(d: &DistanceMatrix) -> bool {
    d.to_trop_matrix().is_metric().expect("distance matrices are square")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourPointReport {
    pub holds: bool,
    pub violations: Vec<[usize; 4]>,
}

fn four_point_holds(d: &DistanceMatrix, [i, j, k, l]: [usize; 4]) -> bool {
    let mut sums = [
        d.get(i, j) + d.get(k, l),
        d.get(i, k) + d.get(j, l),
        d.get(i, l) + d.get(j, k),
    ];
    sums.sort();
    sums[1] == sums[2]
}

/// Checks that in every quadruple the maximum of the three pairing sums is
/// attained at least twice.
pub fn four_point_check(d: &DistanceMatrix) -> FourPointReport {
    let violations: Vec<[usize; 4]> = combinations(d.n(), 4)
        .map(|q| [q[0], q[1], q[2], q[3]])
        .filter(|&q| !four_point_holds(d, q))
        .collect();
    FourPointReport { holds: violations.is_empty(), violations }
}

/// `None` for a tree metric, otherwise the first obstruction found.
pub fn tree_metric_certificate(d: &DistanceMatrix) -> Option<Certificate> {
    if !is_metric(d) {
        let t = triangle_violation(d).expect("a non-metric has a violated triangle");
        return Some(Certificate::Triangle(t));
    }
    let report = four_point_check(d);
    debug_assert_eq!(
        report.holds,
        d.negated_pluecker().is_none_or(|x| grassmannian_member(&x).member)
    );
    report.violations.first().map(|&q| Certificate::Quadruple(q))
}

pub fn is_tree_metric(d: &DistanceMatrix) -> bool {
    tree_metric_certificate(d).is_none()
}

/// Perimeters `d(i,j) + d(i,k) + d(j,k)` of all triples `i < j < k`.
pub type TripleWeights = BTreeMap<[usize; 3], Rational>;

pub fn triple_weights(d: &DistanceMatrix) -> TripleWeights {
    combinations(d.n(), 3)
        .map(|t| {
            let [i, j, k] = [t[0], t[1], t[2]];
            ([i, j, k], d.get(i, j) + d.get(i, k) + d.get(j, k))
        })
        .collect()
}
