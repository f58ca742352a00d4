//! SVG 1.1 output: plane curves in world coordinates (y up) and trees as
//! rectangular dendrograms.

use std::fmt::Write as _;

use trop_core::curve::{curve_bounding_render, PlanarTropicalCurve, Point2, Viewport};
use trop_core::phylo::PhyloTree;
use trop_core::rational::{to_f64, Rational};

const COLORS: [&str; 3] = ["#1f5fa8", "#c0392b", "#2e8b57"];
const CANVAS: f64 = 600.0;

/// Fixed-precision number without trailing zeros, so output is stable.
fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".into(),
        s => s.into(),
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(view_box: [f64; 4], width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">\n",
        num(width),
        num(height),
        num(view_box[0]),
        num(view_box[1]),
        num(view_box[2]),
        num(view_box[3])
    )
}

/// Draws each curve clipped to the viewport, one path per visible piece with
/// stroke width proportional to its weight, plus `marks` as hollow circles.
/// The y axis is flipped by negating coordinates.
pub fn curves(layers: &[&PlanarTropicalCurve], marks: &[Point2], viewport: &Viewport) -> String {
    let [x0, y0] = viewport.min.clone().map(|v| to_f64(&v));
    let [x1, y1] = viewport.max.clone().map(|v| to_f64(&v));
    let (w, h) = (x1 - x0, y1 - y0);
    let unit = w.max(h) / 300.0;
    let scale = CANVAS / w.max(h);
    let mut out = header([x0, -y1, w, h], w * scale, h * scale);
    let at = |p: &Point2| (num(to_f64(&p[0])), num(-to_f64(&p[1])));
    for (layer, curve) in layers.iter().enumerate() {
        let color = COLORS[layer % COLORS.len()];
        writeln!(out, "<g fill=\"none\" stroke=\"{color}\" stroke-linecap=\"round\">").unwrap();
        for seg in curve_bounding_render(curve, viewport) {
            let ((ax, ay), (bx, by)) = (at(&seg.from), at(&seg.to));
            writeln!(
                out,
                "<path d=\"M {ax} {ay} L {bx} {by}\" stroke-width=\"{}\" data-weight=\"{}\"/>",
                num(unit * 1.5 * seg.weight as f64),
                seg.weight
            )
            .unwrap();
        }
        writeln!(out, "</g>\n<g fill=\"{color}\">").unwrap();
        for v in curve.vertices.iter().filter(|v| viewport.contains(v)) {
            let (cx, cy) = at(v);
            writeln!(out, "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{}\"/>", num(unit * 3.0)).unwrap();
        }
        out.push_str("</g>\n");
    }
    if !marks.is_empty() {
        writeln!(out, "<g fill=\"none\" stroke=\"black\" stroke-width=\"{}\">", num(unit)).unwrap();
        for m in marks.iter().filter(|m| viewport.contains(m)) {
            let (cx, cy) = at(m);
            writeln!(out, "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{}\"/>", num(unit * 6.0)).unwrap();
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

struct Layout {
    x: Vec<f64>,
    y: Vec<f64>,
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

/// Roots the tree at taxon 0; children are ordered by their smallest leaf,
/// the other leaves get consecutive rows and every inner node, the root
/// included, sits midway between its outermost children.
fn layout(t: &PhyloTree) -> Layout {
    let adj = t.adjacency();
    let count = t.node_count();
    let n = t.taxa().len();
    let mut parent = vec![None; count];
    let mut depth = vec![Rational::default(); count];
    let mut order = vec![0usize];
    let mut seen = vec![false; count];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &(u, e) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(v);
                depth[u] = &depth[v] + &t.edges()[e].2;
                order.push(u);
            }
        }
        i += 1;
    }
    let mut min_leaf: Vec<usize> = (0..count).map(|v| if v < n { v } else { usize::MAX }).collect();
    let mut children = vec![Vec::new(); count];
    for &v in order.iter().rev() {
        if let Some(p) = parent[v] {
            min_leaf[p] = min_leaf[p].min(min_leaf[v]);
            children[p].push(v);
        }
    }
    for c in &mut children {
        c.sort_by_key(|&v| min_leaf[v]);
    }
    let mut y = vec![0.0; count];
    let mut row = 0.0;
    place(0, &children, &mut y, &mut row);
    Layout { x: depth.iter().map(to_f64).collect(), y, children, parent }
}

fn place(v: usize, children: &[Vec<usize>], y: &mut [f64], row: &mut f64) {
    for &c in &children[v] {
        place(c, children, y, row);
    }
    match (children[v].first(), children[v].last()) {
        (Some(&first), Some(&last)) => y[v] = (y[first] + y[last]) / 2.0,
        _ => {
            y[v] = *row;
            *row += 1.0;
        }
    }
}

/// Rectangular phylogram rooted at the first taxon, with branch lengths to
/// scale and taxon labels at the leaves.
pub fn tree(t: &PhyloTree) -> String {
    let l = layout(t);
    let n = t.taxa().len();
    let span = l.x.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let (left, right, top, row) = (20.0, 120.0, 20.0, 28.0);
    let width = CANVAS;
    let height = top * 2.0 + row * n.saturating_sub(2) as f64;
    let px = |v: usize| left + l.x[v] / span * (width - left - right);
    let py = |v: usize| top + l.y[v] * row;
    let mut out = header([0.0, 0.0, width, height], width, height);
    out.push_str("<g fill=\"none\" stroke=\"black\" stroke-width=\"2\" stroke-linecap=\"square\">\n");
    for v in 0..t.node_count() {
        if let Some(p) = l.parent[v] {
            writeln!(out, "<path d=\"M {} {} L {} {}\"/>", num(px(p)), num(py(v)), num(px(v)), num(py(v))).unwrap();
        }
        if let (Some(first), Some(last)) = (l.children[v].first(), l.children[v].last()) {
            let lo = py(*first).min(py(v));
            let hi = py(*last).max(py(v));
            if hi > lo {
                writeln!(out, "<path d=\"M {} {} L {} {}\"/>", num(px(v)), num(lo), num(px(v)), num(hi)).unwrap();
            }
        }
    }
    out.push_str("</g>\n<g font-family=\"sans-serif\" font-size=\"14\" dominant-baseline=\"middle\">\n");
    for (i, name) in t.taxa().iter().enumerate() {
        let (anchor, dx) = if i == 0 && n > 1 { ("end", -6.0) } else { ("start", 6.0) };
        writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\">{}</text>",
            num(px(i) + dx),
            num(py(i)),
            escape(name)
        )
        .unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use trop_core::curve::dual_curve;
    use trop_core::poly::TropPolynomial;
    use trop_core::rational::int;

    #[test]
    fn numbers_are_trimmed() {
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(-0.00001), "0");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(1.0 / 3.0), "0.3333");
    }

    #[test]
    fn line_draws_three_paths_and_one_vertex() {
        let line = TropPolynomial::new(2, [(vec![1, 0], int(0)), (vec![0, 1], int(0)), (vec![0, 0], int(1))]).unwrap();
        let c = dual_curve(&line).unwrap();
        let svg = curves(&[&c], &[], &Viewport::centered(5));
        assert_eq!(svg.matches("<path").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("viewBox=\"-5 -5 10 10\""));
        // the vertex (1, 1) is drawn at y = -1
        assert!(svg.contains("cx=\"1\" cy=\"-1\""));
    }

    #[test]
    fn weights_scale_stroke_width() {
        let double = TropPolynomial::new(2, [(vec![2, 0], int(0)), (vec![0, 0], int(0)), (vec![0, 2], int(0))]).unwrap();
        let c = dual_curve(&double).unwrap();
        let svg = curves(&[&c], &[], &Viewport::centered(5));
        assert!(svg.contains("data-weight=\"2\""));
        assert!(svg.contains("stroke-width=\"0.1\" data-weight=\"2\""));
    }

    #[test]
    fn dendrogram_has_one_label_per_taxon() {
        let t = PhyloTree::from_newick("(((M:0.2,R:0.1):0.3,C:0.8):0.6)H;").unwrap();
        let svg = tree(&t);
        assert_eq!(svg.matches("<text").count(), 4);
        // one horizontal path per edge plus one connector per internal node
        assert_eq!(svg.matches("<path").count(), t.edges().len() + 2);
        assert!(svg.contains(">H</text>"));
    }
}
