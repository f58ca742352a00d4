use std::io::Write;

use serde_json::{json, Value};

use trop_core::curve::{
    dual_curve, interpolate_conic, interpolate_line, stable_intersect, CurveError, PlanarTropicalCurve, Point2,
};
use trop_core::linear::{grassmannian_member, hyperplane_through_points, linear_form, linear_space_violation, LinearError, PlueckerVector};
use trop_core::matrix::TropMatrix;
use trop_core::phylo::{reconstruct_tree, tree_metric_certificate, triple_weights, Certificate, DistanceMatrix, PhyloError, PhyloTree};
use trop_core::poly::{canonicalize, function_equals, TropPolynomial};
use trop_core::rational::{format_rational, Rational};
use trop_core::scalar::TropScalar;

use crate::expr::TropExpr;
use crate::{input, json as js, svg, Cli, Command, Failure};

type Outcome = Result<(), Failure>;

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    /// A closed pipe ends output quietly.
    fn line(&mut self, text: impl std::fmt::Display) -> Outcome {
        match writeln!(self.out, "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::usage(e)),
            _ => Ok(()),
        }
    }

    fn emit_json(&mut self, v: &Value) -> Outcome {
        let text = serde_json::to_string_pretty(v).map_err(Failure::usage)?;
        self.line(text)
    }

    /// Prints `text`, or `value` under `--json`.
    fn emit(&mut self, text: impl std::fmt::Display, value: Value) -> Outcome {
        if self.cli.json {
            self.emit_json(&value)
        } else {
            self.line(text)
        }
    }

    /// Like [`Ctx::emit`], then reports a negative answer.
    fn negative(&mut self, text: impl std::fmt::Display, value: Value) -> Outcome {
        self.emit(text, value)?;
        Err(Failure::Negative)
    }

    fn write_svg(&self, contents: impl FnOnce() -> String) -> Outcome {
        match &self.cli.svg {
            Some(path) => std::fs::write(path, contents())
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
            None => Ok(()),
        }
    }

    fn viewport(&self, points: &[&Point2]) -> Result<trop_core::curve::Viewport, Failure> {
        match &self.cli.viewport {
            Some(v) => input::viewport(v),
            None => Ok(input::fit_viewport(points)),
        }
    }

    /// Explicit `--vars`, else `default`, else the variables of `exprs`
    /// sorted by name (`x` alone when there are none).
    fn vars(&self, exprs: &[&TropExpr], default: Option<&[&str]>) -> Result<Vec<String>, Failure> {
        if let Some(list) = &self.cli.vars {
            let names: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
            let valid = |s: &String| {
                s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    && s != "inf"
            };
            if let Some(bad) = names.iter().find(|s| !valid(s)) {
                return Err(Failure::Usage(format!("bad variable name `{bad}`")));
            }
            if (1..names.len()).any(|i| names[..i].contains(&names[i])) {
                return Err(Failure::Usage(format!("repeated variable in `{list}`")));
            }
            return Ok(names);
        }
        if let Some(d) = default {
            return Ok(d.iter().map(|s| s.to_string()).collect());
        }
        let mut names: Vec<String> = exprs.iter().flat_map(|e| e.variables()).collect();
        names.sort();
        names.dedup();
        if names.is_empty() {
            names.push("x".into());
        }
        Ok(names)
    }
}

fn parse_expr(text: &str) -> Result<TropExpr, Failure> {
    TropExpr::parse(text).map_err(|e| Failure::Usage(format!("`{text}`: {e}")))
}

fn to_poly(e: &TropExpr, vars: &[String]) -> Result<TropPolynomial, Failure> {
    e.to_polynomial(vars).map_err(|err| Failure::Usage(format!("`{e}`: {err}")))
}

fn polys(ctx: &Ctx, texts: &[&str], default: Option<&[&str]>) -> Result<(Vec<TropPolynomial>, Vec<String>), Failure> {
    let exprs = texts.iter().map(|t| parse_expr(t)).collect::<Result<Vec<_>, _>>()?;
    let vars = ctx.vars(&exprs.iter().collect::<Vec<_>>(), default)?;
    let ps = exprs.iter().map(|e| to_poly(e, &vars)).collect::<Result<_, _>>()?;
    Ok((ps, vars))
}

const PLANE: &[&str] = &["x", "y"];

fn pair(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn monomial(p: &TropPolynomial, exponents: &[i64], vars: &[String]) -> String {
    let c = p.coefficient(exponents).as_finite().cloned().expect("a term of p");
    TropPolynomial::new(p.dim(), [(exponents.to_vec(), c)]).expect("one term").render(vars)
}

pub(crate) fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let mut ctx = Ctx { cli, out };
    match &cli.command {
        Command::Eval { expr, point } => eval(&mut ctx, expr, point),
        Command::Roots { expr } => roots(&mut ctx, expr),
        Command::Factor { expr } => factor(&mut ctx, expr),
        Command::Equal { left, right } => equal(&mut ctx, left, right),
        Command::Curve { expr } => curve(&mut ctx, expr),
        Command::Intersect { left, right } => intersect(&mut ctx, left, right),
        Command::Interpolate { points } => interpolate(&mut ctx, points),
        Command::MetricCheck { matrix } => metric_check(&mut ctx, matrix),
        Command::TreeMetricCheck { distances } => tree_metric_check(&mut ctx, distances),
        Command::TreeBuild { distances } => tree_build(&mut ctx, distances),
        Command::TreeDist { newick } => tree_dist(&mut ctx, newick),
        Command::Triples { distances } => triples(&mut ctx, distances),
        Command::GrassCheck { pluecker } => grass_check(&mut ctx, pluecker),
        Command::LinspaceMember { pluecker, point } => linspace_member(&mut ctx, pluecker, point),
        Command::Hyperplane { points } => hyperplane(&mut ctx, points),
        Command::Det { matrix } => det(&mut ctx, matrix),
    }
}

fn eval(ctx: &mut Ctx, expr: &str, point: &[String]) -> Outcome {
    let (ps, vars) = polys(ctx, &[expr], None)?;
    let p = &ps[0];
    let x = input::coordinates(point)?;
    let e = p.evaluate(&x).map_err(|_| {
        Failure::Usage(format!("expected {} coordinates for variables {}, got {}", vars.len(), vars.join(","), x.len()))
    })?;
    let terms: Vec<String> = e.minimizers.iter().map(|m| monomial(p, m.exponents(), &vars)).collect();
    let text = format!("{}\nattained by {} term{}: {}", format_rational(&e.value), terms.len(), if terms.len() == 1 { "" } else { "s" }, terms.join(", "));
    let value = json!({
        "variables": vars,
        "value": js::rational(&e.value),
        "minimizers": terms,
        "on_hypersurface": e.on_hypersurface(),
    });
    ctx.emit(text, value)
}

fn univariate(ctx: &Ctx, expr: &str) -> Result<(TropPolynomial, String), Failure> {
    let (ps, vars) = polys(ctx, &[expr], None)?;
    match vars.as_slice() {
        [v] => Ok((ps.into_iter().next().unwrap(), v.clone())),
        _ => Err(Failure::Usage(format!("expected one variable, got {}", vars.join(",")))),
    }
}

fn roots(ctx: &mut Ctx, expr: &str) -> Outcome {
    let (p, _) = univariate(ctx, expr)?;
    let roots = p.univariate_roots().map_err(Failure::usage)?;
    let lines: Vec<String> =
        roots.iter().map(|r| format!("{} (multiplicity {})", format_rational(&r.value), r.multiplicity)).collect();
    let text = if lines.is_empty() { "no roots".to_string() } else { lines.join("\n") };
    let value = json!({
        "roots": roots.iter().map(|r| json!({"value": js::rational(&r.value), "multiplicity": r.multiplicity})).collect::<Vec<_>>(),
    });
    ctx.emit(text, value)
}

fn factor(ctx: &mut Ctx, expr: &str) -> Outcome {
    let (p, var) = univariate(ctx, expr)?;
    let f = p.univariate_factor().map_err(Failure::usage)?;
    let mut parts = Vec::new();
    if f.lead != Rational::default() || (f.shift == 0 && f.factors.is_empty()) {
        parts.push(format_rational(&f.lead));
    }
    if f.shift != 0 {
        parts.push(if f.shift == 1 { var.clone() } else { format!("{var}^{}", f.shift) });
    }
    for r in &f.factors {
        let base = format!("({var} + {})", format_rational(&r.value));
        parts.push(if r.multiplicity == 1 { base } else { format!("{base}^{}", r.multiplicity) });
    }
    let value = json!({
        "lead": js::rational(&f.lead),
        "shift": f.shift,
        "factors": f.factors.iter().map(|r| json!({"root": js::rational(&r.value), "multiplicity": r.multiplicity})).collect::<Vec<_>>(),
    });
    ctx.emit(parts.join(" * "), value)
}

fn equal(ctx: &mut Ctx, left: &str, right: &str) -> Outcome {
    let (ps, vars) = polys(ctx, &[left, right], None)?;
    let same = function_equals(&ps[0], &ps[1]).map_err(Failure::usage)?;
    let (a, b) = (canonicalize(&ps[0]).render(&vars), canonicalize(&ps[1]).render(&vars));
    let value = json!({"equal": same, "canonical": [a, b]});
    if same {
        ctx.emit(format!("equal\ncanonical form: {a}"), value)
    } else {
        ctx.negative(format!("not equal\ncanonical forms:\n  {a}\n  {b}"), value)
    }
}

fn plane_poly(ctx: &Ctx, texts: &[&str]) -> Result<Vec<TropPolynomial>, Failure> {
    let (ps, vars) = polys(ctx, texts, Some(PLANE))?;
    if vars.len() != 2 {
        return Err(Failure::Usage(format!("plane curves need two variables, got {}", vars.join(","))));
    }
    Ok(ps)
}

fn curve_of(p: &TropPolynomial) -> Result<PlanarTropicalCurve, Failure> {
    match dual_curve(p) {
        Ok(c) => Ok(c),
        // a monomial never attains its minimum twice
        Err(CurveError::EmptyCurve) => Ok(PlanarTropicalCurve::default()),
        Err(e) => Err(Failure::usage(e)),
    }
}

fn describe_curve(c: &PlanarTropicalCurve) -> String {
    let dir = |d: [i64; 2]| format!("({}, {})", d[0], d[1]);
    let mut text = format!("vertices: {}", c.vertices.len());
    for (i, v) in c.vertices.iter().enumerate() {
        text.push_str(&format!("\n  v{i} {}", pair(v)));
    }
    text.push_str(&format!("\nbounded edges: {}", c.bounded_edges.len()));
    for e in &c.bounded_edges {
        text.push_str(&format!("\n  v{} -- v{} direction {} weight {}", e.ends.0, e.ends.1, dir(e.direction), e.weight));
    }
    text.push_str(&format!("\nrays: {}", c.rays.len()));
    for r in &c.rays {
        text.push_str(&format!("\n  v{} direction {} weight {}", r.base, dir(r.direction), r.weight));
    }
    text
}

fn curve(ctx: &mut Ctx, expr: &str) -> Outcome {
    let p = &plane_poly(ctx, &[expr])?[0];
    let c = curve_of(p)?;
    let view = ctx.viewport(&c.vertices.iter().collect::<Vec<_>>())?;
    ctx.write_svg(|| svg::curves(&[&c], &[], &view))?;
    ctx.emit(describe_curve(&c), js::curve(&c))
}

fn intersect(ctx: &mut Ctx, left: &str, right: &str) -> Outcome {
    let ps = plane_poly(ctx, &[left, right])?;
    let points = match stable_intersect(&ps[0], &ps[1]) {
        Ok(points) => points,
        Err(CurveError::EmptyCurve) => Vec::new(),
        Err(CurveError::DegeneratePerturbation) => {
            let message = CurveError::DegeneratePerturbation.to_string();
            return ctx.negative(format!("degenerate: {message}"), json!({"degenerate": message}));
        }
        Err(e) => return Err(Failure::usage(e)),
    };
    let total: u64 = points.iter().map(|p| p.multiplicity).sum();
    let (a, b) = (curve_of(&ps[0])?, curve_of(&ps[1])?);
    let marks: Vec<Point2> = points.iter().map(|p| p.point.clone()).collect();
    let all: Vec<&Point2> = a.vertices.iter().chain(&b.vertices).chain(&marks).collect();
    let view = ctx.viewport(&all)?;
    ctx.write_svg(|| svg::curves(&[&a, &b], &marks, &view))?;
    let mut text: Vec<String> = points.iter().map(|p| format!("{} multiplicity {}", pair(&p.point), p.multiplicity)).collect();
    text.push(format!("total multiplicity {total}"));
    let value = json!({
        "points": points.iter().map(|p| json!({"point": js::point(&p.point), "multiplicity": p.multiplicity})).collect::<Vec<_>>(),
        "total": total,
    });
    ctx.emit(text.join("\n"), value)
}

fn interpolate(ctx: &mut Ctx, args: &[String]) -> Outcome {
    let pts = args.iter().map(|a| input::point2(a)).collect::<Result<Vec<_>, _>>()?;
    let result = match pts.as_slice() {
        [a, b] => interpolate_line(a, b),
        [a, b, c, d, e] => interpolate_conic(&[a.clone(), b.clone(), c.clone(), d.clone(), e.clone()]),
        _ => return Err(Failure::Usage(format!("give 2 points for a line or 5 for a conic, got {}", pts.len()))),
    };
    let vars = ctx.vars(&[], Some(PLANE))?;
    if vars.len() != 2 {
        return Err(Failure::Usage("interpolation needs two variables".into()));
    }
    let p = match result {
        Ok(p) => p,
        Err(e @ CurveError::DegenerateConfiguration { .. }) => {
            let CurveError::DegenerateConfiguration { minor } = &e else { unreachable!() };
            return ctx.negative(e.to_string(), json!({"degenerate": {"minor": minor}}));
        }
        Err(e) => return Err(Failure::usage(e)),
    };
    let c = curve_of(&p)?;
    let all: Vec<&Point2> = c.vertices.iter().chain(&pts).collect();
    let view = ctx.viewport(&all)?;
    ctx.write_svg(|| svg::curves(&[&c], &pts, &view))?;
    let text = p.render(&vars);
    ctx.emit(&text, json!({"polynomial": text, "curve": js::curve(&c)}))
}

fn label(names: &[String], i: usize) -> &str {
    &names[i]
}

/// First failed metric axiom: diagonal, sign, symmetry, then triangle.
fn metric_certificate(m: &TropMatrix, names: &[String]) -> Option<(String, Value)> {
    let n = m.rows();
    let d = |i: usize, j: usize| m.get(i, j);
    let cert = |kind: &str, idx: &[usize], text: String| {
        let taxa: Vec<&str> = idx.iter().map(|&i| label(names, i)).collect();
        Some((text.clone(), json!({"kind": kind, "taxa": taxa, "message": text})))
    };
    for i in 0..n {
        if *d(i, i) != TropScalar::unit() {
            return cert("diagonal", &[i], format!("d({0},{0}) = {1} is not 0", label(names, i), d(i, i)));
        }
    }
    for i in 0..n {
        for j in 0..n {
            match d(i, j).as_finite() {
                None => return cert("infinite", &[i, j], format!("d({},{}) is infinite", label(names, i), label(names, j))),
                Some(v) if *v < Rational::default() => {
                    return cert("negative", &[i, j], format!("d({},{}) = {} is negative", label(names, i), label(names, j), d(i, j)))
                }
                _ => {}
            }
            if d(i, j) != d(j, i) {
                let (a, b) = (label(names, i), label(names, j));
                return cert("asymmetric", &[i, j], format!("d({a},{b}) = {} differs from d({b},{a}) = {}", d(i, j), d(j, i)));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let via = d(i, j).otimes(d(j, k));
                if *d(i, k) > via {
                    let (a, b, c) = (label(names, i), label(names, j), label(names, k));
                    return cert("triangle", &[i, j, k], format!("d({a},{c}) = {} > d({a},{b}) + d({b},{c}) = {via}", d(i, k)));
                }
            }
        }
    }
    None
}

fn metric_check(ctx: &mut Ctx, arg: &str) -> Outcome {
    let (labels, m) = input::labelled_matrix(arg)?;
    if !m.is_square() {
        return Err(Failure::Usage(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let names = labels.unwrap_or_else(|| DistanceMatrix::default_taxa(m.rows()));
    if names.len() != m.rows() {
        return Err(Failure::Usage(format!("{} labels for a {}x{} matrix", names.len(), m.rows(), m.rows())));
    }
    debug_assert_eq!(m.is_metric().unwrap(), metric_certificate(&m, &names).is_none());
    match metric_certificate(&m, &names) {
        None => ctx.emit("metric", json!({"metric": true})),
        Some((text, cert)) => ctx.negative(format!("not a metric: {text}"), json!({"metric": false, "certificate": cert})),
    }
}

fn tree_certificate(d: &DistanceMatrix, c: &Certificate) -> (String, Value) {
    let t = d.taxa();
    match *c {
        Certificate::Triangle([i, j, k]) => {
            let text = format!(
                "triangle inequality fails: d({a},{c}) = {} > d({a},{b}) + d({b},{c}) = {}",
                format_rational(d.get(i, k)),
                format_rational(&(d.get(i, j) + d.get(j, k))),
                a = t[i],
                b = t[j],
                c = t[k]
            );
            (text.clone(), json!({"kind": "triangle", "taxa": [&t[i], &t[j], &t[k]], "message": text}))
        }
        Certificate::Quadruple([i, j, k, l]) => {
            let sum = |a: usize, b: usize, c: usize, e: usize| {
                format!("d({},{}) + d({},{}) = {}", t[a], t[b], t[c], t[e], format_rational(&(d.get(a, b) + d.get(c, e))))
            };
            let text = format!(
                "four-point condition fails on {{{},{},{},{}}}: the largest of {}, {}, {} is attained once",
                t[i],
                t[j],
                t[k],
                t[l],
                sum(i, j, k, l),
                sum(i, k, j, l),
                sum(i, l, j, k)
            );
            (text.clone(), json!({"kind": "four-point", "taxa": [&t[i], &t[j], &t[k], &t[l]], "message": text}))
        }
    }
}

fn tree_metric_check(ctx: &mut Ctx, arg: &str) -> Outcome {
    let d = input::distances(arg)?;
    match tree_metric_certificate(&d) {
        None => ctx.emit("tree metric", json!({"tree_metric": true})),
        Some(c) => {
            let (text, cert) = tree_certificate(&d, &c);
            ctx.negative(format!("not a tree metric: {text}"), json!({"tree_metric": false, "certificate": cert}))
        }
    }
}

fn tree_build(ctx: &mut Ctx, arg: &str) -> Outcome {
    let d = input::distances(arg)?;
    let tree = match reconstruct_tree(&d) {
        Ok(t) => t,
        Err(PhyloError::NotTreeMetric(c)) => {
            let (text, cert) = tree_certificate(&d, &c);
            return ctx.negative(format!("not a tree metric: {text}"), json!({"certificate": cert}));
        }
        Err(e @ PhyloError::ZeroPendant(_)) => {
            let text = e.to_string();
            return ctx.negative(&text, json!({"certificate": {"kind": "zero-pendant", "message": text}}));
        }
        Err(e) => return Err(Failure::usage(e)),
    };
    ctx.write_svg(|| svg::tree(&tree))?;
    let newick = tree.to_newick();
    let mut value = js::tree(&tree);
    value["newick"] = Value::String(newick.clone());
    ctx.emit(newick, value)
}

fn tree_dist(ctx: &mut Ctx, arg: &str) -> Outcome {
    let text = input::text(arg)?;
    let tree = PhyloTree::from_newick(text.trim()).map_err(Failure::usage)?;
    ctx.write_svg(|| svg::tree(&tree))?;
    let d = tree.tree_to_metric();
    let rows: Vec<Vec<Value>> = (0..d.n()).map(|i| (0..d.n()).map(|j| js::rational(d.get(i, j))).collect()).collect();
    let shown = d.to_string();
    ctx.emit(shown.trim_end(), json!({"taxa": d.taxa(), "matrix": rows}))
}

fn triples(ctx: &mut Ctx, arg: &str) -> Outcome {
    let d = input::distances(arg)?;
    let t = d.taxa();
    let weights = triple_weights(&d);
    let text: Vec<String> =
        weights.iter().map(|([i, j, k], w)| format!("{} {} {} {}", t[*i], t[*j], t[*k], format_rational(w))).collect();
    let value = json!({
        "triples": weights.iter().map(|([i, j, k], w)| json!({"taxa": [&t[*i], &t[*j], &t[*k]], "weight": js::rational(w)})).collect::<Vec<_>>(),
    });
    ctx.emit(text.join("\n"), value)
}

fn pluecker(arg: &str) -> Result<PlueckerVector, Failure> {
    input::lines(arg)?.parse::<PlueckerVector>().map_err(|e| Failure::Usage(format!("Plücker vector: {e}")))
}

fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

fn grass_check(ctx: &mut Ctx, arg: &str) -> Outcome {
    let x = pluecker(arg)?;
    let report = grassmannian_member(&x);
    let violations: Vec<Value> =
        report.violations.iter().map(|v| json!({"rest": one_based(&v.rest), "quad": one_based(&v.quad)})).collect();
    let value = json!({"member": report.member, "violations": violations});
    match report.violations.first() {
        None => ctx.emit("in the tropical Grassmannian", value),
        Some(v) => ctx.negative(
            format!("not in the tropical Grassmannian: {v} fails ({} violated relations)", report.violations.len()),
            value,
        ),
    }
}

fn linspace_member(ctx: &mut Ctx, arg: &str, point: &[String]) -> Outcome {
    let x = pluecker(arg)?;
    let p = input::coordinates(point)?;
    match linear_space_violation(&p, &x) {
        Ok(None) => ctx.emit("in the linear space", json!({"member": true})),
        Ok(Some(subset)) => {
            let form = linear_form(&x, &subset).map_err(Failure::usage)?;
            let text = format!(
                "not in the linear space: the form {form} of subset {{{}}} attains its minimum once",
                one_based(&subset).iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            );
            ctx.negative(text.clone(), json!({"member": false, "subset": one_based(&subset), "message": text}))
        }
        Err(e @ LinearError::NotInGrassmannian(_)) => {
            let text = e.to_string();
            ctx.negative(&text, json!({"degenerate": text}))
        }
        Err(e) => Err(Failure::usage(e)),
    }
}

fn hyperplane(ctx: &mut Ctx, args: &[String]) -> Outcome {
    let pts = args.iter().map(|a| input::coordinates(std::slice::from_ref(a))).collect::<Result<Vec<_>, _>>()?;
    match hyperplane_through_points(&pts) {
        Ok(form) => {
            let coefficients: Vec<Value> = form.coefficients().iter().map(js::scalar).collect();
            ctx.emit(&form, json!({"coefficients": coefficients, "form": form.to_string()}))
        }
        Err(e @ LinearError::DegenerateConfiguration { .. }) => {
            let LinearError::DegenerateConfiguration { columns } = &e else { unreachable!() };
            ctx.negative(e.to_string(), json!({"degenerate": {"columns": one_based(columns)}}))
        }
        Err(e) => Err(Failure::usage(e)),
    }
}

fn det(ctx: &mut Ctx, arg: &str) -> Outcome {
    let (_, m) = input::labelled_matrix(arg)?;
    let d = m.tropdet_fast().map_err(Failure::usage)?;
    let text = if d.singular { format!("{} (singular)", d.value) } else { d.value.to_string() };
    ctx.emit(text, json!({"value": js::scalar(&d.value), "singular": d.singular}))
}
