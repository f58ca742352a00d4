//! Arguments name a file or carry the data inline. Inline matrices and
//! Plücker vectors may use `;` as a line separator.

use std::path::Path;

use trop_core::curve::{Point2, Viewport};
use trop_core::matrix::TropMatrix;
use trop_core::phylo::DistanceMatrix;
use trop_core::rational::{parse_rational, Rational};

use crate::Failure;

/// Contents of the file `arg` if one exists, otherwise `arg` itself.
pub fn text(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if !arg.contains('\n') && path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")));
    }
    Ok(arg.to_string())
}

/// Like [`text`], reading `;` in inline data as a line break.
pub fn lines(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if !arg.contains('\n') && path.is_file() {
        return text(arg);
    }
    Ok(arg.replace(';', "\n"))
}

/// Comma or whitespace separated rationals.
pub fn coordinates(parts: &[String]) -> Result<Vec<Rational>, Failure> {
    parts
        .iter()
        .flat_map(|p| p.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).map_err(|e| Failure::Usage(format!("bad coordinate `{s}`: {}", e.0))))
        .collect()
}

pub fn point2(arg: &str) -> Result<Point2, Failure> {
    match coordinates(&[arg.to_string()])?.as_slice() {
        [x, y] => Ok([x.clone(), y.clone()]),
        _ => Err(Failure::Usage(format!("expected a point `x,y`, got `{arg}`"))),
    }
}

/// A matrix with an optional leading line of labels.
pub fn labelled_matrix(arg: &str) -> Result<(Option<Vec<String>>, TropMatrix), Failure> {
    let text = lines(arg)?;
    let first_error = match text.parse::<TropMatrix>() {
        Ok(m) => return Ok((None, m)),
        Err(e) => e,
    };
    let mut lines = text.lines().skip_while(|l| l.trim().is_empty() || l.trim().starts_with('#'));
    let labels: Vec<String> = lines.next().unwrap_or("").split_whitespace().map(str::to_string).collect();
    let rest: Vec<&str> = lines.collect();
    match rest.join("\n").parse::<TropMatrix>() {
        Ok(m) if !labels.is_empty() => Ok((Some(labels), m)),
        _ => Err(Failure::Usage(format!("matrix: {first_error}"))),
    }
}

pub fn distances(arg: &str) -> Result<DistanceMatrix, Failure> {
    let (labels, m) = labelled_matrix(arg)?;
    let taxa = labels.unwrap_or_else(|| DistanceMatrix::default_taxa(m.rows()));
    DistanceMatrix::from_trop_matrix(taxa, &m).map_err(|e| Failure::Usage(format!("distance matrix: {e}")))
}

/// `R` for the square `[-R, R]²`, or `xmin,ymin,xmax,ymax`.
pub fn viewport(arg: &str) -> Result<Viewport, Failure> {
    let values = coordinates(&[arg.to_string()])?;
    let bad = || Failure::Usage(format!("bad viewport `{arg}`"));
    match values.as_slice() {
        [r] => Viewport::new([-r, -r], [r.clone(), r.clone()]).map_err(|_| bad()),
        [x0, y0, x1, y1] => Viewport::new([x0.clone(), y0.clone()], [x1.clone(), y1.clone()]).map_err(|_| bad()),
        _ => Err(bad()),
    }
}

/// Smallest box around `points`, padded by a quarter of its larger side
/// and at least 1; `[-5, 5]²` when there are no points.
pub fn fit_viewport(points: &[&Point2]) -> Viewport {
    if points.is_empty() {
        return Viewport::centered(5);
    }
    let lo = |k: usize| points.iter().map(|p| &p[k]).min().unwrap().clone();
    let hi = |k: usize| points.iter().map(|p| &p[k]).max().unwrap().clone();
    let (min, max) = ([lo(0), lo(1)], [hi(0), hi(1)]);
    let side = (&max[0] - &min[0]).max(&max[1] - &min[1]);
    let one = Rational::from_integer(1.into());
    let pad = (side / Rational::from_integer(4.into())).max(one);
    Viewport::new([&min[0] - &pad, &min[1] - &pad], [&max[0] + &pad, &max[1] + &pad]).expect("padding is positive")
}
