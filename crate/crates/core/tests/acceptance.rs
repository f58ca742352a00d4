//! Acceptance harness. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Sample counts, seeds and runtime limits
//! are pinned here; do not relax them.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use trop_core::curve::{
    check_zero_tension, dual_curve, interpolate_conic, interpolate_line, stable_intersect, CurveError, Point2,
};
use trop_core::linear::{grassmannian_member, linear_space_member, PlueckerVector};
use trop_core::phylo::{four_point_check, reconstruct_tree, triple_weights, DistanceMatrix};
use trop_core::poly::{canonicalize, expand_product, function_equals, univariate_factor, univariate_roots, TropPolynomial};
use trop_core::rational::{frac, int, Rational};
use trop_core::scalar::{trop_add, trop_mul, TropScalar};
use trop_core::subsets::combinations;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Harness {
    failed: usize,
}

impl Harness {
    fn run(&mut self, id: u32, name: &str, limit: Option<Duration>, check: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let timing = match limit {
            Some(l) => format!("{:.3}s, limit {}s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.3}s", elapsed.as_secs_f64()),
        };
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err("runtime limit exceeded".to_string()),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({timing})"),
            Err(why) => {
                self.failed += 1;
                println!("FAIL {id:>2} {name}: {why} ({timing})");
            }
        }
    }
}

fn poly(dim: usize, terms: &[(&[i64], Rational)]) -> TropPolynomial {
    TropPolynomial::new(dim, terms.iter().map(|(e, c)| (e.to_vec(), c.clone()))).unwrap()
}

fn ipoly(dim: usize, terms: &[(&[i64], i64)]) -> TropPolynomial {
    TropPolynomial::new(dim, terms.iter().map(|(e, c)| (e.to_vec(), int(*c)))).unwrap()
}

fn semiring_laws() -> Outcome {
    let mut rng = common::rng(1);
    let zero = TropScalar::Infinity;
    let one = TropScalar::unit();
    for _ in 0..1000 {
        let [a, b, c] = [(); 3].map(|_| common::scalar(&mut rng, 1000, 0.1));
        ensure!(trop_add(&a, &b) == trop_add(&b, &a), "oplus not commutative at {a}, {b}");
        ensure!(trop_mul(&a, &b) == trop_mul(&b, &a), "otimes not commutative at {a}, {b}");
        ensure!(
            trop_add(&trop_add(&a, &b), &c) == trop_add(&a, &trop_add(&b, &c)),
            "oplus not associative at {a}, {b}, {c}"
        );
        ensure!(
            trop_mul(&trop_mul(&a, &b), &c) == trop_mul(&a, &trop_mul(&b, &c)),
            "otimes not associative at {a}, {b}, {c}"
        );
        ensure!(
            trop_mul(&a, &trop_add(&b, &c)) == trop_add(&trop_mul(&a, &b), &trop_mul(&a, &c)),
            "distributivity fails at {a}, {b}, {c}"
        );
        ensure!(trop_add(&a, &zero) == a && trop_mul(&a, &one) == a, "identity fails at {a}");
        ensure!(trop_mul(&a, &zero) == zero, "infinity does not absorb {a}");
        ensure!(trop_add(&a, &a) == a, "oplus not idempotent at {a}");
    }
    let [three, seven, eleven] = [3, 7, 11].map(TropScalar::from_int);
    let value = trop_mul(&three, &trop_add(&seven, &eleven));
    ensure!(value == TropScalar::from_int(10), "3 * (7 + 11) gave {value}");
    Ok("1000 triples, 3 * (7 + 11) = 10".into())
}

fn freshmans_dream() -> Outcome {
    let x_plus_y = ipoly(2, &[(&[1, 0], 0), (&[0, 1], 0)]);
    for k in 1..=8i64 {
        let power = x_plus_y.pow(k as u32);
        let dream = ipoly(2, &[(&[k, 0], 0), (&[0, k], 0)]);
        ensure!(function_equals(&power, &dream).unwrap(), "(x + y)^{k} differs from x^{k} + y^{k}");
        // every binomial coefficient collapses to the unit
        ensure!(power.len() == k as usize + 1, "(x + y)^{k} has {} terms", power.len());
        ensure!(power.terms().all(|(_, c)| *c == int(0)), "(x + y)^{k} has a nonzero coefficient");
    }
    Ok("k = 1..8".into())
}

fn strict_cubics() -> Outcome {
    let mut rng = common::rng(3);
    for _ in 0..200 {
        let a = common::rational(&mut rng, 20);
        let g1 = common::rational(&mut rng, 10);
        let g2 = &g1 + common::positive(&mut rng, 10);
        let g3 = &g2 + common::positive(&mut rng, 10);
        let b = &a + &g1;
        let c = &b + &g2;
        let d = &c + &g3;
        let p = poly(1, &[(&[3], a.clone()), (&[2], b), (&[1], c), (&[0], d)]);
        let roots = univariate_roots(&p).unwrap();
        let got: Vec<(Rational, u64)> = roots.into_iter().map(|r| (r.value, r.multiplicity)).collect();
        let want = vec![(g1.clone(), 1), (g2.clone(), 1), (g3.clone(), 1)];
        ensure!(got == want, "roots of {p} are {got:?}, expected {want:?}");
        let f = univariate_factor(&p).unwrap();
        ensure!(f.lead == a && f.shift == 0, "factorization of {p} has lead {} shift {}", f.lead, f.shift);
        // independent product a * (x + g1)(x + g2)(x + g3)
        let mut product = poly(1, &[(&[0], a.clone())]);
        for g in [&g1, &g2, &g3] {
            product = expand_product(&product, &poly(1, &[(&[1], int(0)), (&[0], g.clone())])).unwrap();
        }
        ensure!(function_equals(&p, &product).unwrap(), "{p} is not the product of its linear factors");
        ensure!(function_equals(&p, &f.expand()).unwrap(), "factorization of {p} does not expand back");
    }
    Ok("200 cubics".into())
}

fn quadratic_identities() -> Outcome {
    let p = ipoly(1, &[(&[2], 0), (&[1], 17), (&[0], 2)]);
    let square = ipoly(1, &[(&[1], 0), (&[0], 1)]).pow(2);
    ensure!(function_equals(&p, &square).unwrap(), "x^2 + 17x + 2 differs from (x + 1)^2");
    ensure!(canonicalize(&p) == ipoly(1, &[(&[2], 0), (&[0], 2)]), "middle term survives canonicalization");
    let f = |e: &[(&[i64], i64)]| ipoly(2, e);
    let left = expand_product(
        &expand_product(&f(&[(&[1, 0], 0), (&[0, 0], 0)]), &f(&[(&[0, 1], 0), (&[0, 0], 0)])).unwrap(),
        &f(&[(&[1, 1], 0), (&[0, 0], 0)]),
    )
    .unwrap();
    let right = expand_product(
        &f(&[(&[1, 1], 0), (&[1, 0], 0), (&[0, 0], 0)]),
        &f(&[(&[1, 1], 0), (&[0, 1], 0), (&[0, 0], 0)]),
    )
    .unwrap();
    ensure!(function_equals(&left, &right).unwrap(), "the two factorizations disagree");
    // the factors themselves differ as functions
    ensure!(
        !function_equals(&f(&[(&[1, 0], 0), (&[0, 0], 0)]), &f(&[(&[1, 1], 0), (&[1, 0], 0), (&[0, 0], 0)])).unwrap(),
        "factor sets coincide"
    );
    Ok("(x + 1)^2 identity and non-unique factorization".into())
}

fn sorted_directions(c: &trop_core::curve::PlanarTropicalCurve) -> Vec<[i64; 2]> {
    let mut dirs: Vec<[i64; 2]> =
        c.rays.iter().flat_map(|r| std::iter::repeat_n(r.direction, r.weight as usize)).collect();
    dirs.sort();
    dirs
}

fn line_and_quadric() -> Outcome {
    let quadric = ipoly(2, &[(&[2, 0], 0), (&[1, 1], -1), (&[0, 2], 0), (&[1, 0], -1), (&[0, 1], -1), (&[0, 0], 0)]);
    let curve = dual_curve(&quadric).unwrap();
    ensure!(
        (curve.vertices.len(), curve.bounded_edges.len(), curve.rays.len()) == (4, 3, 6),
        "quadric has {} vertices, {} bounded edges, {} rays",
        curve.vertices.len(),
        curve.bounded_edges.len(),
        curve.rays.len()
    );
    let dirs = sorted_directions(&curve);
    ensure!(dirs == vec![[-1, -1], [-1, -1], [0, 1], [0, 1], [1, 0], [1, 0]], "quadric rays {dirs:?}");
    let dual = curve.dual.as_ref().unwrap();
    ensure!(
        (dual.cells.len(), dual.interior_edges.len(), dual.boundary_edges.len()) == (4, 3, 6),
        "quadric subdivision has the wrong shape"
    );

    let mut rng = common::rng(5);
    for _ in 0..50 {
        let [a, b, c] = [(); 3].map(|_| common::rational(&mut rng, 20));
        let line = poly(2, &[(&[1, 0], a.clone()), (&[0, 1], b.clone()), (&[0, 0], c.clone())]);
        let curve = dual_curve(&line).unwrap();
        let vertex: Point2 = [&c - &a, &c - &b];
        ensure!(curve.vertices == vec![vertex.clone()], "line {line} has vertices {:?}", curve.vertices);
        ensure!(curve.bounded_edges.is_empty(), "line {line} has a bounded edge");
        ensure!(curve.rays.iter().all(|r| r.base == 0 && r.weight == 1), "line {line} has a bad ray");
        let dirs = sorted_directions(&curve);
        ensure!(dirs == vec![[-1, -1], [0, 1], [1, 0]], "line {line} rays {dirs:?}");
    }
    Ok("quadric 4/3/6, 50 lines with rays N, E, SW".into())
}

fn random_curve_poly(rng: &mut ChaCha8Rng) -> TropPolynomial {
    let d = rng.gen_range(1..=5);
    if rng.gen_bool(0.5) {
        common::dense_bivariate(rng, d)
    } else {
        common::sparse(rng, 2, 12, d)
    }
}

fn zero_tension() -> Outcome {
    let mut rng = common::rng(6);
    let mut vertices = 0;
    for _ in 0..100 {
        let p = random_curve_poly(&mut rng);
        let curve = dual_curve(&p).unwrap();
        vertices += curve.vertices.len();
        if let Err(v) = check_zero_tension(&curve) {
            return Err(format!("curve of {p} has tension {:?} at vertex {}", v.sum, v.vertex));
        }
    }
    Ok(format!("100 curves, {vertices} vertices balanced"))
}

fn bezout() -> Outcome {
    let mut rng = common::rng(7);
    for _ in 0..25 {
        let (d1, d2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let p = common::dense_bivariate(&mut rng, d1);
        let q = common::dense_bivariate(&mut rng, d2);
        let points = stable_intersect(&p, &q).map_err(|e| format!("degrees {d1}, {d2}: {e}"))?;
        let total: u64 = points.iter().map(|x| x.multiplicity).sum();
        ensure!(total == (d1 * d2) as u64, "degrees {d1}, {d2} meet with total multiplicity {total}");
        let swapped = stable_intersect(&q, &p).map_err(|e| e.to_string())?;
        ensure!(swapped == points, "intersection depends on argument order");
    }
    Ok("25 pairs of degree at most 4".into())
}

fn interpolation() -> Outcome {
    let mut rng = common::rng(8);
    let (mut lines, mut conics) = (0, 0);
    while lines < 100 {
        let (a, b) = (common::point(&mut rng, 10), common::point(&mut rng, 10));
        let dx = &b[0] - &a[0];
        let dy = &b[1] - &a[1];
        if dx == int(0) || dy == int(0) || dx == dy {
            continue;
        }
        let line = interpolate_line(&a, &b).map_err(|e| format!("generic points {a:?}, {b:?}: {e}"))?;
        for x in [&a, &b] {
            ensure!(common::evaluate_directly(&line, x).1 >= 2, "line {line} misses {x:?}");
        }
        lines += 1;
    }
    let mut attempts = 0;
    while conics < 50 {
        attempts += 1;
        ensure!(attempts < 1000, "no generic 5-point configurations found");
        let pts: [Point2; 5] = std::array::from_fn(|_| common::point(&mut rng, 20));
        match interpolate_conic(&pts) {
            Ok(conic) => {
                for x in &pts {
                    ensure!(common::evaluate_directly(&conic, x).1 >= 2, "conic {conic} misses {x:?}");
                }
                conics += 1;
            }
            Err(CurveError::DegenerateConfiguration { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    let diagonal = interpolate_line(&[int(1), int(1)], &[int(4), int(4)]);
    ensure!(
        matches!(&diagonal, Err(CurveError::DegenerateConfiguration { minor }) if minor == "1"),
        "diagonal pair gave {diagonal:?}"
    );
    let repeated = interpolate_line(&[int(2), int(3)], &[int(2), int(3)]);
    ensure!(matches!(repeated, Err(CurveError::DegenerateConfiguration { .. })), "repeated point accepted");
    let p = |x: i64, y: i64| [int(x), int(y)];
    let collapsed = interpolate_conic(&[p(0, 0), p(0, 0), p(3, 1), p(-2, 5), p(7, -4)]);
    ensure!(matches!(collapsed, Err(CurveError::DegenerateConfiguration { .. })), "conic with a repeated point accepted");
    Ok(format!("100 lines, 50 conics ({} configurations tried), degenerate inputs rejected", attempts))
}

const HMRC: &str = "H M R C\n4 4\n0 1.1 1.0 1.4\n1.1 0 0.3 1.3\n1.0 0.3 0 1.2\n1.4 1.3 1.2 0\n";

fn hmrc() -> Outcome {
    let d: DistanceMatrix = HMRC.parse().map_err(|e| format!("{e:?}"))?;
    ensure!(four_point_check(&d).holds, "HMRC fails the four-point condition");
    let tree = reconstruct_tree(&d).map_err(|e| e.to_string())?;
    let pendants: Vec<Rational> = (0..4).map(|i| tree.pendant_length(i).clone()).collect();
    let want = vec![frac(6, 10), frac(2, 10), frac(1, 10), frac(8, 10)];
    ensure!(pendants == want, "pendants {pendants:?}");
    let internal: Vec<_> = tree.splits().into_iter().filter(|(side, _)| side.len() == 2).collect();
    let mr: BTreeSet<String> = ["M", "R"].map(String::from).into();
    ensure!(internal == vec![(mr, frac(3, 10))], "internal splits {internal:?}");
    let back = tree.tree_to_metric();
    ensure!(*back.get(0, 1) == frac(11, 10), "d(H, M) = {}", back.get(0, 1));
    ensure!(back == d, "tree metric differs from the input");
    Ok("pendants 0.6/0.2/0.1/0.8, split HC|MR of length 0.3".into())
}

fn tree_round_trip() -> Outcome {
    let mut rng = common::rng(10);
    for _ in 0..100 {
        let n = rng.gen_range(2..=12);
        let t = common::tree(&mut rng, n);
        let back = reconstruct_tree(&t.tree_to_metric()).map_err(|e| format!("n = {n}: {e}"))?;
        ensure!(back.same_as(&t), "reconstruction of {} gave {}", t.to_newick(), back.to_newick());
    }
    Ok("100 trees with n <= 12".into())
}

fn four_point_is_grassmannian() -> Outcome {
    let mut rng = common::rng(11);
    let (mut trees, mut others) = (0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(4..=7);
        let d = common::symmetric(&mut rng, n);
        let fp = four_point_check(&d).holds;
        let gr = grassmannian_member(&d.negated_pluecker().unwrap()).member;
        ensure!(fp == gr, "four-point says {fp}, Grassmannian says {gr} for\n{d}");
        if fp {
            trees += 1;
        } else {
            others += 1;
        }
    }
    ensure!(trees > 0 && others > 0, "sample is one-sided ({trees} tree metrics, {others} others)");
    Ok(format!("200 matrices, {trees} tree metrics, {others} others"))
}

fn determinants() -> Outcome {
    let mut rng = common::rng(12);
    let mut singular = 0;
    for k in 0..500 {
        let n = 2 + k % 6;
        // small integer entries make ties, and so singular matrices, common
        let m = if k % 2 == 0 {
            common::matrix(&mut rng, n, n, 20, 0.1)
        } else {
            trop_core::matrix::TropMatrix::from_fn(n, n, |_, _| TropScalar::from_int(rng.gen_range(0..=3)))
        };
        let (value, count) = common::brute_determinant(&m);
        let fast = m.tropdet_fast().unwrap();
        let reference = m.tropdet().unwrap();
        let expect_singular = value.is_finite() && count >= 2;
        ensure!(fast.value == value && reference.value == value, "determinant mismatch on {n}x{n}");
        ensure!(
            fast.singular == expect_singular && reference.singular == expect_singular,
            "singular flag mismatch on {n}x{n} (optimal permutations: {count})"
        );
        singular += expect_singular as usize;
    }
    Ok(format!("500 matrices of size 2..7, {singular} singular"))
}

fn small_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(-2..=2))).collect()
}

fn linear_spaces() -> Outcome {
    let mut rng = common::rng(13);
    let mut members = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(4..=6);
        let d = common::tree(&mut rng, n).tree_to_metric();
        let x = d.negated_pluecker().unwrap();
        let p = if rng.gen_bool(0.5) {
            small_point(&mut rng, n)
        } else {
            // tropical combination of two rows of X, a member by closure
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (s, t) = (common::rational(&mut rng, 5), common::rational(&mut rng, 5));
            (0..n).map(|k| (&s - d.get(i, k)).min(&t - d.get(j, k))).collect()
        };
        let c = common::rational(&mut rng, 10);
        let shifted: Vec<Rational> = p.iter().map(|v| v + &c).collect();
        let member = linear_space_member(&p, &x).map_err(|e| e.to_string())?;
        ensure!(member == linear_space_member(&shifted, &x).unwrap(), "shifting the point changes membership");
        ensure!(member == linear_space_member(&p, &x.scaled(&c)).unwrap(), "rescaling X changes membership");
        members += member as usize;
    }
    ensure!(members > 0 && members < 1000, "projective sample is one-sided ({members} members)");
    let mut zero_members = 0;
    for _ in 0..500 {
        let n = rng.gen_range(3..=6);
        let zero = PlueckerVector::from_fn(n, 2, |_| TropScalar::unit()).unwrap();
        let p = small_point(&mut rng, n);
        let triples = combinations(n, 3).all(|t| {
            let mut v = [&p[t[0]], &p[t[1]], &p[t[2]]];
            v.sort();
            v[0] == v[1]
        });
        let member = linear_space_member(&p, &zero).unwrap();
        ensure!(member == triples, "zero vector membership of {p:?} is {member}, triples say {triples}");
        zero_members += member as usize;
    }
    ensure!(zero_members > 0, "no member of the zero-vector space sampled");
    Ok(format!("1000 invariance pairs ({members} members), 500 zero-vector points ({zero_members} members)"))
}

fn triple_injectivity() -> Outcome {
    let mut rng = common::rng(14);
    let mut pairs = 0;
    while pairs < 100 {
        let n = rng.gen_range(5..=8);
        let a = common::tree(&mut rng, n).tree_to_metric();
        let b = common::tree(&mut rng, n).tree_to_metric();
        if a == b {
            continue;
        }
        ensure!(triple_weights(&a) != triple_weights(&b), "distinct metrics share triple weights:\n{a}\n{b}");
        pairs += 1;
    }
    Ok("100 pairs with n = 5..8".into())
}

fn main() {
    let secs = Duration::from_secs;
    let mut h = Harness { failed: 0 };
    h.run(1, "semiring laws", Some(secs(1)), semiring_laws);
    h.run(2, "freshman's dream", None, freshmans_dream);
    h.run(3, "cubic roots and factorization", None, strict_cubics);
    h.run(4, "quadratic identities", None, quadratic_identities);
    h.run(5, "line and quadric curves", None, line_and_quadric);
    h.run(6, "zero tension", Some(secs(10)), zero_tension);
    h.run(7, "stable intersection count", Some(secs(60)), bezout);
    h.run(8, "interpolation", None, interpolation);
    h.run(9, "HMRC tree metric", None, hmrc);
    h.run(10, "tree reconstruction", Some(secs(30)), tree_round_trip);
    h.run(11, "four-point condition", None, four_point_is_grassmannian);
    h.run(12, "tropical determinant", None, determinants);
    h.run(13, "linear space membership", None, linear_spaces);
    h.run(14, "triple weights injective", None, triple_injectivity);
    if h.failed > 0 {
        println!("{} criteria failed", h.failed);
        std::process::exit(1);
    }
    println!("all 14 criteria passed");
}
