//! JSON encodings. Every rational is a string, `"p/q"` or `"p"`; decimal
//! strings are accepted on input.

use serde_json::{json, Map, Value};

use trop_core::curve::{BoundedEdge, PlanarTropicalCurve, Point2, Ray};
use trop_core::phylo::PhyloTree;
use trop_core::rational::{parse_rational, Rational};
use trop_core::scalar::TropScalar;

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// Finite values as rational strings, infinity as `"inf"`.
pub fn scalar(s: &TropScalar) -> Value {
    match s {
        TropScalar::Finite(r) => rational(r),
        TropScalar::Infinity => Value::String("inf".into()),
    }
}

pub fn point(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(rational).collect())
}

pub fn curve(c: &PlanarTropicalCurve) -> Value {
    let edges: Vec<Value> = c
        .bounded_edges
        .iter()
        .map(|e| json!({"from": e.ends.0, "to": e.ends.1, "direction": e.direction, "weight": e.weight}))
        .collect();
    let rays: Vec<Value> =
        c.rays.iter().map(|r| json!({"from": r.base, "direction": r.direction, "weight": r.weight})).collect();
    json!({
        "vertices": c.vertices.iter().map(|v| point(v)).collect::<Vec<_>>(),
        "edges": edges,
        "rays": rays,
    })
}

pub fn tree(t: &PhyloTree) -> Value {
    let edges: Vec<Value> =
        t.edges().iter().map(|(a, b, len)| json!({"from": a, "to": b, "length": rational(len)})).collect();
    json!({"taxa": t.taxa(), "nodes": t.node_count(), "edges": edges})
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, String> {
    obj.get(key).ok_or_else(|| format!("missing field `{key}`"))
}

fn object(v: &Value) -> Result<&Map<String, Value>, String> {
    v.as_object().ok_or_else(|| format!("expected an object, found {v}"))
}

fn array(v: &Value) -> Result<&Vec<Value>, String> {
    v.as_array().ok_or_else(|| format!("expected an array, found {v}"))
}

fn index(v: &Value) -> Result<usize, String> {
    v.as_u64().map(|u| u as usize).ok_or_else(|| format!("expected an index, found {v}"))
}

fn weight(v: &Value) -> Result<u64, String> {
    v.as_u64().filter(|w| *w > 0).ok_or_else(|| format!("expected a positive weight, found {v}"))
}

fn lattice(v: &Value) -> Result<[i64; 2], String> {
    match array(v)?.as_slice() {
        [a, b] => match (a.as_i64(), b.as_i64()) {
            (Some(a), Some(b)) => Ok([a, b]),
            _ => Err(format!("expected an integer direction, found {v}")),
        },
        _ => Err(format!("expected a direction pair, found {v}")),
    }
}

pub fn parse_rational_value(v: &Value) -> Result<Rational, String> {
    let s = v.as_str().ok_or_else(|| format!("expected a rational string, found {v}"))?;
    parse_rational(s).map_err(|e| e.0)
}

fn parse_point(v: &Value) -> Result<Point2, String> {
    match array(v)?.as_slice() {
        [x, y] => Ok([parse_rational_value(x)?, parse_rational_value(y)?]),
        _ => Err(format!("expected a coordinate pair, found {v}")),
    }
}

/// Inverse of [`curve`]. The result has no attached subdivision.
pub fn parse_curve(v: &Value) -> Result<PlanarTropicalCurve, String> {
    let obj = object(v)?;
    let vertices = array(field(obj, "vertices")?)?.iter().map(parse_point).collect::<Result<Vec<_>, _>>()?;
    let in_range = |i: usize| if i < vertices.len() { Ok(i) } else { Err(format!("vertex index {i} out of range")) };
    let mut bounded_edges = Vec::new();
    for e in array(field(obj, "edges")?)? {
        let e = object(e)?;
        bounded_edges.push(BoundedEdge {
            ends: (in_range(index(field(e, "from")?)?)?, in_range(index(field(e, "to")?)?)?),
            direction: lattice(field(e, "direction")?)?,
            weight: weight(field(e, "weight")?)?,
        });
    }
    let mut rays = Vec::new();
    for r in array(field(obj, "rays")?)? {
        let r = object(r)?;
        rays.push(Ray {
            base: in_range(index(field(r, "from")?)?)?,
            direction: lattice(field(r, "direction")?)?,
            weight: weight(field(r, "weight")?)?,
        });
    }
    Ok(PlanarTropicalCurve { vertices, bounded_edges, rays, dual: None })
}

/// Inverse of [`tree`]; validates the tree.
pub fn parse_tree(v: &Value) -> Result<PhyloTree, String> {
    let obj = object(v)?;
    let taxa = array(field(obj, "taxa")?)?
        .iter()
        .map(|t| t.as_str().map(str::to_string).ok_or_else(|| format!("expected a taxon name, found {t}")))
        .collect::<Result<Vec<_>, _>>()?;
    let nodes = index(field(obj, "nodes")?)?;
    let mut edges = Vec::new();
    for e in array(field(obj, "edges")?)? {
        let e = object(e)?;
        edges.push((index(field(e, "from")?)?, index(field(e, "to")?)?, parse_rational_value(field(e, "length")?)?));
    }
    PhyloTree::new(taxa, nodes, edges).map_err(|e| e.to_string())
}
