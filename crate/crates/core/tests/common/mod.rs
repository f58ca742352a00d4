#![allow(clippy::needless_range_loop)]

//! Seeded generators and brute-force oracles shared by the integration
//! tests and the acceptance harness. Oracles here deliberately avoid the
//! library's own algorithms.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use trop_core::curve::{PlanarTropicalCurve, Point2};
use trop_core::matrix::TropMatrix;
use trop_core::phylo::{DistanceMatrix, PhyloTree};
use trop_core::poly::TropPolynomial;
use trop_core::rational::{frac, int, Rational};
use trop_core::scalar::TropScalar;

pub use rand::SeedableRng;

/// Property-test configuration with a fixed seed, so runs are reproducible.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed_2005),
        failure_persistence: None,
        ..Default::default()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p / q` with `p` in `[-span, span]` and a small denominator.
pub fn rational(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    let q = *[1, 2, 3, 4, 5, 10].choose(rng).unwrap();
    frac(rng.gen_range(-span * q..=span * q), q)
}

pub fn positive(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    let q = *[1, 2, 4, 5, 10].choose(rng).unwrap();
    frac(rng.gen_range(1..=span * q), q)
}

pub fn scalar(rng: &mut ChaCha8Rng, span: i64, infinity_odds: f64) -> TropScalar {
    if rng.gen_bool(infinity_odds) {
        TropScalar::Infinity
    } else {
        TropScalar::Finite(rational(rng, span))
    }
}

pub fn point(rng: &mut ChaCha8Rng, span: i64) -> Point2 {
    [rational(rng, span), rational(rng, span)]
}

pub fn matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, span: i64, infinity_odds: f64) -> TropMatrix {
    TropMatrix::from_fn(rows, cols, |_, _| scalar(rng, span, infinity_odds))
}

/// Dense bivariate polynomial with every monomial of degree at most `d`.
pub fn dense_bivariate(rng: &mut ChaCha8Rng, d: i64) -> TropPolynomial {
    let mut terms = Vec::new();
    for i in 0..=d {
        for j in 0..=d - i {
            terms.push((vec![i, j], rational(rng, 10)));
        }
    }
    TropPolynomial::new(2, terms).unwrap()
}

/// Univariate polynomial with up to `max_terms` terms and exponents in
/// `[-5, 5]`.
pub fn univariate(rng: &mut ChaCha8Rng, max_terms: usize) -> TropPolynomial {
    let count = rng.gen_range(1..=max_terms);
    let terms: Vec<(Vec<i64>, Rational)> =
        (0..count).map(|_| (vec![rng.gen_range(-5..=5)], rational(rng, 10))).collect();
    TropPolynomial::new(1, terms).unwrap()
}

/// Sparse polynomial in `dim` variables with exponents in `[0, max_exp]`.
pub fn sparse(rng: &mut ChaCha8Rng, dim: usize, max_terms: usize, max_exp: i64) -> TropPolynomial {
    let count = rng.gen_range(1..=max_terms);
    let terms: Vec<(Vec<i64>, Rational)> = (0..count)
        .map(|_| ((0..dim).map(|_| rng.gen_range(0..=max_exp)).collect(), rational(rng, 6)))
        .collect();
    TropPolynomial::new(dim, terms).unwrap()
}

/// Random tree on `n` leaves. Leaves are inserted one at a time, either
/// subdividing a random edge or (sometimes) joining an existing internal
/// node, so multifurcations occur.
pub fn tree(rng: &mut ChaCha8Rng, n: usize) -> PhyloTree {
    assert!(n >= 2);
    let taxa: Vec<String> = (0..n).map(|i| format!("L{i}")).collect();
    // nodes: leaves 0..n, internal nodes from n upwards
    let mut edges: Vec<(usize, usize, Rational)> = vec![(0, 1, positive(rng, 5))];
    let mut internal: Vec<usize> = Vec::new();
    let mut next = n;
    for leaf in 2..n {
        if !internal.is_empty() && rng.gen_bool(0.25) {
            let at = *internal.choose(rng).unwrap();
            edges.push((at, leaf, positive(rng, 5)));
            continue;
        }
        let e = rng.gen_range(0..edges.len());
        let (a, b, _) = edges.swap_remove(e);
        let u = next;
        next += 1;
        internal.push(u);
        edges.push((a, u, positive(rng, 5)));
        edges.push((u, b, positive(rng, 5)));
        edges.push((u, leaf, positive(rng, 5)));
    }
    PhyloTree::new(taxa, next, edges).unwrap()
}

/// Symmetric matrix drawn from a mix of tree metrics, general metrics,
/// and arbitrary positive symmetric matrices.
pub fn symmetric(rng: &mut ChaCha8Rng, n: usize) -> DistanceMatrix {
    match rng.gen_range(0..3) {
        0 => tree(rng, n).tree_to_metric(),
        1 => {
            // shortest paths of a random complete graph form a metric
            let mut d = vec![vec![int(0); n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = positive(rng, 6);
                    d[i][j] = v.clone();
                    d[j][i] = v;
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let via = &d[i][k] + &d[k][j];
                        if via < d[i][j] {
                            d[i][j] = via;
                        }
                    }
                }
            }
            DistanceMatrix::new(DistanceMatrix::default_taxa(n), d).unwrap()
        }
        _ => DistanceMatrix::from_fn(DistanceMatrix::default_taxa(n), |_, _| positive(rng, 6)).unwrap(),
    }
}

/// All permutations of `0..n` by recursive insertion.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Minimum diagonal sum over permutations and how many attain it.
pub fn brute_determinant(m: &TropMatrix) -> (TropScalar, usize) {
    let n = m.rows();
    let values: Vec<TropScalar> = permutations(n)
        .iter()
        .map(|p| (0..n).fold(TropScalar::unit(), |acc, i| acc.otimes(m.get(i, p[i]))))
        .collect();
    let best = values.iter().min().unwrap().clone();
    let count = values.iter().filter(|v| **v == best).count();
    (best, count)
}

/// Every triangle inequality `d(i,k) <= d(i,j) + d(j,k)`.
pub fn triangle_inequalities_hold(m: &TropMatrix) -> bool {
    let n = m.rows();
    (0..n).all(|i| {
        (0..n).all(|j| (0..n).all(|k| *m.get(i, k) <= m.get(i, j).otimes(m.get(j, k))))
    })
}

/// Direct evaluation: the minimum of the affine forms and how often it is hit.
pub fn evaluate_directly(p: &TropPolynomial, x: &[Rational]) -> (Rational, usize) {
    let values: Vec<Rational> = p
        .terms()
        .map(|(m, c)| c + m.exponents().iter().zip(x).map(|(&e, xi)| xi * int(e)).sum::<Rational>())
        .collect();
    let min = values.iter().min().unwrap().clone();
    let count = values.iter().filter(|v| **v == min).count();
    (min, count)
}

/// Whether `x` lies on one of the curve's edges or rays, by plane geometry.
pub fn on_curve_geometrically(c: &PlanarTropicalCurve, x: &Point2) -> bool {
    let along = |start: &Point2, dir: [Rational; 2], bounded: bool| {
        let r = [&x[0] - &start[0], &x[1] - &start[1]];
        if &r[0] * &dir[1] != &r[1] * &dir[0] {
            return false;
        }
        let t = if dir[0] != int(0) { &r[0] / &dir[0] } else { &r[1] / &dir[1] };
        t >= int(0) && (!bounded || t <= int(1))
    };
    c.bounded_edges.iter().any(|e| {
        let (a, b) = e.ends;
        let dir = [&c.vertices[b][0] - &c.vertices[a][0], &c.vertices[b][1] - &c.vertices[a][1]];
        along(&c.vertices[a], dir, true)
    }) || c.rays.iter().any(|r| along(&c.vertices[r.base], [int(r.direction[0]), int(r.direction[1])], false))
}

/// Points strictly inside each edge and ray of a curve.
pub fn points_on_curve(rng: &mut ChaCha8Rng, c: &PlanarTropicalCurve) -> Vec<Point2> {
    let mut out = Vec::new();
    for e in &c.bounded_edges {
        let t = frac(rng.gen_range(1..100), 100);
        let (a, b) = (&c.vertices[e.ends.0], &c.vertices[e.ends.1]);
        out.push([&a[0] + &t * (&b[0] - &a[0]), &a[1] + &t * (&b[1] - &a[1])]);
    }
    for r in &c.rays {
        let t = positive(rng, 10);
        let base = &c.vertices[r.base];
        out.push([&base[0] + &t * int(r.direction[0]), &base[1] + &t * int(r.direction[1])]);
    }
    out
}
