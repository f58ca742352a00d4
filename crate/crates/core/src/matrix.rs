//! Dense min-plus matrices.
//!
//! Text format: a header line `rows cols`, then one line per row of
//! whitespace-separated entries. Entries are rationals (`3`, `1.1`, `3/2`)
//! or `inf`. Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use crate::rational::Rational;
use crate::scalar::TropScalar;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("cannot multiply {left:?} by {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TropScalar>,
}

/// Value of a tropical determinant together with whether the optimum is
/// attained by more than one permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Determinant {
    pub value: TropScalar,
    pub singular: bool,
}

impl TropMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<TropScalar>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::Ragged {
                row: entries.len() / cols,
                expected: cols,
                found: entries.len() % cols,
            });
        }
        Ok(TropMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<TropScalar>>) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged { row: i, expected: cols, found: row.len() });
            }
        }
        let n = rows.len();
        TropMatrix::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TropScalar) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        TropMatrix { rows, cols, entries }
    }

    /// `0` on the diagonal and `∞` elsewhere.
    pub fn identity(n: usize) -> Self {
        TropMatrix::from_fn(n, n, |i, j| if i == j { TropScalar::unit() } else { TropScalar::Infinity })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TropScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[TropScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// `C[i][k] = min_j (A[i][j] + B[j][k])`.
    pub fn mat_mul(&self, other: &TropMatrix) -> Result<TropMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(TropMatrix::from_fn(self.rows, other.cols, |i, k| {
            (0..self.cols)
                .map(|j| self.get(i, j).otimes(other.get(j, k)))
                .min()
                .expect("inner dimension is positive")
        }))
    }

    /// Whether the matrix is a metric: symmetric, zero diagonal, finite
    /// nonnegative entries and `D ⊙ D = D`.
    pub fn is_metric(&self) -> Result<bool, MatrixError> {
        self.require_square()?;
        let n = self.rows;
        for i in 0..n {
            match self.get(i, i).as_finite() {
                Some(v) if v.is_zero() => {}
                _ => return Ok(false),
            }
            for j in 0..n {
                match self.get(i, j).as_finite() {
                    Some(v) if !v.is_negative() => {}
                    _ => return Ok(false),
                }
                if self.get(i, j) != self.get(j, i) {
                    return Ok(false);
                }
            }
        }
        Ok(self.mat_mul(self)? == *self)
    }

    /// Tropical determinant by enumerating all permutations.
    ///
    /// This is the reference algorithm; cost is `n!`.
    pub fn tropdet(&self) -> Result<Determinant, MatrixError> {
        self.require_square()?;
        let n = self.rows;
        let mut best: Option<(Rational, u8)> = None;
        let mut used = vec![false; n];
        self.enumerate_permutations(0, &mut used, Rational::zero(), &mut best);
        Ok(match best {
            Some((value, count)) => Determinant { value: TropScalar::Finite(value), singular: count > 1 },
            None => Determinant { value: TropScalar::Infinity, singular: false },
        })
    }

    fn enumerate_permutations(
        &self,
        row: usize,
        used: &mut [bool],
        partial: Rational,
        best: &mut Option<(Rational, u8)>,
    ) {
        if row == self.rows {
            match best {
                None => *best = Some((partial, 1)),
                Some((value, count)) => {
                    if partial < *value {
                        *best = Some((partial, 1));
                    } else if partial == *value {
                        *count = (*count + 1).min(2);
                    }
                }
            }
            return;
        }
        for col in 0..self.cols {
            if used[col] {
                continue;
            }
            if let TropScalar::Finite(entry) = self.get(row, col) {
                used[col] = true;
                self.enumerate_permutations(row + 1, used, &partial + entry, best);
                used[col] = false;
            }
        }
    }

    /// Tropical determinant by dynamic programming over column subsets,
    /// `O(2^n · n)`. Counts optimal permutations (capped at two), so the
    /// singularity flag agrees with [`TropMatrix::tropdet`].
    pub fn tropdet_fast(&self) -> Result<Determinant, MatrixError> {
        self.require_square()?;
        let n = self.rows;
        assert!(n < usize::BITS as usize - 1, "matrix too large for subset dynamic programming");
        // best[mask]: optimal value of assigning the first popcount(mask) rows
        // to the columns in `mask`, with the number of optimal assignments.
        let mut best: Vec<Option<(Rational, u8)>> = vec![None; 1 << n];
        best[0] = Some((Rational::zero(), 1));
        for mask in 0..(1usize << n) {
            let Some((value, count)) = best[mask].clone() else { continue };
            let row = mask.count_ones() as usize;
            if row == n {
                continue;
            }
            for col in 0..n {
                if mask & (1 << col) != 0 {
                    continue;
                }
                let TropScalar::Finite(entry) = self.get(row, col) else { continue };
                let candidate = &value + entry;
                let slot = &mut best[mask | (1 << col)];
                match slot {
                    None => *slot = Some((candidate, count)),
                    Some((v, c)) => {
                        if candidate < *v {
                            *slot = Some((candidate, count));
                        } else if candidate == *v {
                            *c = (*c + count).min(2);
                        }
                    }
                }
            }
        }
        Ok(match best[(1 << n) - 1].take() {
            Some((value, count)) => Determinant { value: TropScalar::Finite(value), singular: count > 1 },
            None => Determinant { value: TropScalar::Infinity, singular: false },
        })
    }

    /// Copy with column `skip` removed.
    pub fn without_column(&self, skip: usize) -> TropMatrix {
        assert!(self.cols > 1 && skip < self.cols);
        TropMatrix::from_fn(self.rows, self.cols - 1, |i, j| {
            self.get(i, if j < skip { j } else { j + 1 }).clone()
        })
    }

    /// For an `r × (r+1)` matrix, the determinants of the `r + 1` maximal
    /// minors; entry `i` drops column `i`. These are the coefficients of the
    /// tropical hyperplane through the rows.
    pub fn cramer_minors(&self) -> Result<Vec<Determinant>, MatrixError> {
        if self.cols != self.rows + 1 {
            return Err(MatrixError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (self.rows, self.rows + 1),
            });
        }
        (0..self.cols).map(|i| self.without_column(i).tropdet_fast()).collect()
    }

    fn require_square(&self) -> Result<(), MatrixError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Parses a matrix from `lines`, which must start at the `rows cols` header.
    pub(crate) fn parse_lines<'a>(
        lines: &mut impl Iterator<Item = (usize, &'a str)>,
    ) -> Result<TropMatrix, MatrixError> {
        let (header_line, header) =
            lines.next().ok_or(MatrixError::Parse { line: 1, message: "missing `rows cols` header".into() })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |s: &str| {
            s.parse::<usize>().map_err(|_| MatrixError::Parse {
                line: header_line,
                message: format!("bad dimension `{s}`"),
            })
        };
        let [rows, cols] = dims[..] else {
            return Err(MatrixError::Parse { line: header_line, message: "expected `rows cols`".into() });
        };
        let (rows, cols) = (parse_dim(rows)?, parse_dim(cols)?);
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (line_no, line) = lines.next().ok_or(MatrixError::Parse {
                line: header_line + r + 1,
                message: format!("expected {rows} rows, found {r}"),
            })?;
            let row: Vec<&str> = line.split_whitespace().collect();
            if row.len() != cols {
                return Err(MatrixError::Parse {
                    line: line_no,
                    message: format!("expected {cols} entries, found {}", row.len()),
                });
            }
            for token in row {
                let value = token
                    .parse::<TropScalar>()
                    .map_err(|e| MatrixError::Parse { line: line_no, message: e.to_string() })?;
                entries.push(value);
            }
        }
        TropMatrix::new(rows, cols, entries)
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

impl FromStr for TropMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = content_lines(s);
        let matrix = TropMatrix::parse_lines(&mut lines)?;
        if let Some((line, _)) = lines.next() {
            return Err(MatrixError::Parse { line, message: "trailing content after matrix".into() });
        }
        Ok(matrix)
    }
}

impl fmt::Display for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for TropMatrix {
    type Output = TropScalar;

    fn index(&self, (i, j): (usize, usize)) -> &TropScalar {
        self.get(i, j)
    }
}

pub fn mat_mul(a: &TropMatrix, b: &TropMatrix) -> Result<TropMatrix, MatrixError> {
    a.mat_mul(b)
}

pub fn is_metric(d: &TropMatrix) -> Result<bool, MatrixError> {
    d.is_metric()
}

pub fn tropdet(m: &TropMatrix) -> Result<Determinant, MatrixError> {
    m.tropdet()
}
