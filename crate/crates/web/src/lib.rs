//! Browser bindings for a small tropical geometry playground.
//!
//! Every operation takes and returns JSON strings. The plain functions are
//! usable from native code; the `wasm_bindgen` wrappers turn errors into
//! JavaScript exceptions.

use serde_json::{json, Value};
use tropcong::congruence::variety_of_pair;
use tropcong::curves::{default_epsilon, ray_bump, segment_tent, vertex_star, PLFunctionOnComplex};
use tropcong::json::{self, Codec};
use tropcong::polyhedra::{HalfSpace, Polyhedron};
use tropcong::scalar::{q, q_frac, q_to_f64, ExtendedRational, Q};
use tropcong::{CongruencePair, CurveComplex};
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn approx(v: &ExtendedRational) -> Value {
    match v {
        ExtendedRational::NegInf => Value::Null,
        ExtendedRational::Finite(x) => json!(q_to_f64(x)),
    }
}

fn grid_coord(radius: i32, steps: u32, i: u32) -> Q {
    let steps = steps.max(1);
    q(-i64::from(radius)) + q_frac(2 * i64::from(radius) * i64::from(i), i64::from(steps))
}

/// Values of a two-variable function on a `(steps+1)²` grid over
/// `[-radius, radius]²`, row by row from the bottom; `null` marks `-inf`.
pub fn evaluate_grid(function: &str, radius: i32, steps: u32) -> Result<String, String> {
    let f = json::function_from_str(function).map_err(err)?;
    if f.nvars() != 2 {
        return Err(format!("expected a function of 2 variables, found {}", f.nvars()));
    }
    let mut rows = Vec::new();
    for j in 0..=steps {
        let y = grid_coord(radius, steps, j);
        let row: Vec<Value> = (0..=steps)
            .map(|i| f.eval(&[grid_coord(radius, steps, i), y.clone()]).map(|v| approx(&v)))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        rows.push(Value::Array(row));
    }
    Ok(json!({ "radius": radius, "steps": steps, "values": rows }).to_string())
}

fn bounding_box(radius: i32) -> Polyhedron {
    let r = q(-i64::from(radius));
    let hs = [[1, 0], [-1, 0], [0, 1], [0, -1]]
        .into_iter()
        .map(|n| HalfSpace::new(n.to_vec(), r.clone()).expect("nonzero normal"))
        .collect();
    Polyhedron::new(2, hs).expect("planar box")
}

/// Vertices of a bounded planar polygon in counter-clockwise order.
fn ordered_polygon(p: &Polyhedron) -> Vec<[f64; 2]> {
    let pts: Vec<[f64; 2]> = p.vertices().iter().map(|v| [q_to_f64(&v[0]), q_to_f64(&v[1])]).collect();
    if pts.is_empty() {
        return pts;
    }
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / pts.len() as f64;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / pts.len() as f64;
    let mut sorted = pts;
    sorted.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.total_cmp(&tb)
    });
    sorted
}

/// The variety of a pair of two-variable functions, each piece clipped to
/// `[-radius, radius]²` and returned as an ordered polygon (possibly a
/// segment or a point).
pub fn variety_polygons(pair: &str, radius: i32) -> Result<String, String> {
    let pair: CongruencePair = json::from_str(pair).map_err(err)?;
    if pair.nvars() != 2 {
        return Err(format!("expected functions of 2 variables, found {}", pair.nvars()));
    }
    let v = variety_of_pair(&pair).map_err(err)?;
    let clip = bounding_box(radius);
    let mut polygons = Vec::new();
    for piece in v.pieces() {
        let clipped = piece.intersect(&clip).map_err(err)?;
        if clipped.is_empty() {
            continue;
        }
        polygons.push(ordered_polygon(&clipped));
    }
    Ok(json!({ "radius": radius, "pieces": v.pieces().len(), "polygons": polygons }).to_string())
}

/// Builds a chart function on a planar complex and reports its values
/// along every edge as polylines of `[x, y, value]`. Rays are drawn to
/// lattice length `ray_length` past their last breakpoint.
pub fn chart_on_complex(complex: &str, kind: &str, index: usize, ray_length: u32) -> Result<String, String> {
    let c: CurveComplex = json::from_str(complex).map_err(err)?;
    let chart = match kind {
        "ray" => ray_bump(&c, index),
        "segment" => segment_tent(&c, index),
        "vertex" => vertex_star(&c, index, &default_epsilon(&c, index)),
        other => return Err(format!("unknown chart kind {other:?}")),
    }
    .map_err(err)?;
    let restricted = PLFunctionOnComplex::restrict(&chart.f, &c).map_err(err)?;
    let mut edges = Vec::new();
    for (r, geom) in restricted.edges.iter().zip(c.edges()) {
        let mut taus = r.breakpoints.clone();
        if geom.len.is_none() {
            let last = taus.last().cloned().unwrap_or_else(|| q(0));
            taus.push(last + q(i64::from(ray_length.max(1))));
        }
        let line: Vec<Vec<f64>> = taus
            .iter()
            .map(|t| {
                let mut p: Vec<f64> = geom.point(t).iter().map(q_to_f64).collect();
                p.push(q_to_f64(&r.eval(t)));
                p
            })
            .collect();
        edges.push(json!({ "slopes": r.slopes, "points": line }));
    }
    let chart_json = chart.to_dto();
    Ok(json!({ "chart": chart_json, "edges": edges }).to_string())
}

#[wasm_bindgen(js_name = evaluateGrid)]
pub fn evaluate_grid_js(function: &str, radius: i32, steps: u32) -> Result<String, JsError> {
    evaluate_grid(function, radius, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = varietyPolygons)]
pub fn variety_polygons_js(pair: &str, radius: i32) -> Result<String, JsError> {
    variety_polygons(pair, radius).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = chartOnComplex)]
pub fn chart_on_complex_js(complex: &str, kind: &str, index: usize, ray_length: u32) -> Result<String, JsError> {
    chart_on_complex(complex, kind, index, ray_length).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MAX_XY: &str = r#"{"lhs": {"nvars": 2, "terms": [{"coeff": "0", "exp": [1, 0]}, {"coeff": "0", "exp": [0, 1]}]},
                             "rhs": {"nvars": 2, "terms": [{"coeff": "0", "exp": [0, 0]}]}}"#;

    #[test]
    fn grid_of_max() {
        let f = r#"{"nvars": 2, "terms": [{"coeff": "0", "exp": [1, 0]}, {"coeff": "0", "exp": [0, 1]}]}"#;
        let out: Value = serde_json::from_str(&evaluate_grid(f, 2, 4).unwrap()).unwrap();
        assert_eq!(out["values"][0][0], json!(-2.0));
        assert_eq!(out["values"][4][0], json!(2.0));
        assert_eq!(out["values"][2][3], json!(1.0));
    }

    #[test]
    fn variety_of_max_is_two_rays() {
        let out: Value = serde_json::from_str(&variety_polygons(MAX_XY, 3).unwrap()).unwrap();
        let polys = out["polygons"].as_array().unwrap();
        assert_eq!(polys.len(), 2);
        for p in polys {
            assert_eq!(p.as_array().unwrap().len(), 2);
        }
    }

    #[test]
    fn tent_along_edges() {
        let complex = r#"{"nvars": 2, "vertices": [["0","0"],["2","2"]], "segments": [[0,1]],
            "rays": [{"base":0,"dir":[-1,0]},{"base":0,"dir":[0,-1]},{"base":1,"dir":[1,0]},{"base":1,"dir":[0,1]}]}"#;
        let out: Value = serde_json::from_str(&chart_on_complex(complex, "segment", 0, 2).unwrap()).unwrap();
        assert_eq!(out["edges"][0]["slopes"], json!([1, -1]));
        assert_eq!(out["chart"]["construction"], json!("segment-tent"));
        assert!(chart_on_complex(complex, "bogus", 0, 2).is_err());
    }
}
