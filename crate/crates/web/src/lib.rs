//! Browser bindings. Each export takes plain numbers and returns a JSON
//! string; errors come back as a thrown string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use skly3::algebra::{build_algebra, RelationTensor, SklyParams};
use skly3::elliptic::{CurvePoint, EllipticData};
use skly3::linalg::FieldSpec;
use skly3::moduli::{
    classify_rank_one, construct_ideal_rep, det_curve, line_object_cross_check, projective_points, required_max_deg,
    ConstructChoice,
};
use skly3::quiver::res;

/// Largest prime the page accepts; point enumeration runs on the main thread.
pub const MAX_DEMO_PRIME: u64 = 401;
pub const MAX_GRID_PRIME: u64 = 31;
pub const MAX_DEMO_N: usize = 4;

type DemoResult<T> = Result<T, String>;

fn setup(a: i64, b: i64, c: i64, p: u64, max_prime: u64) -> DemoResult<(SklyParams, EllipticData)> {
    if p > max_prime {
        return Err(format!("p = {p} is above the demo limit {max_prime}"));
    }
    let f = FieldSpec::prime(p).map_err(|e| e.to_string())?;
    let params = SklyParams::from_i64(f, a, b, c).map_err(|e| e.to_string())?;
    let ell = EllipticData::new(&RelationTensor::sklyanin(&params)).map_err(|e| e.to_string())?;
    Ok((params, ell))
}

fn residues(p: &CurvePoint) -> [u64; 3] {
    p.coords().clone().map(|x| x.residue().unwrap())
}

#[derive(Serialize)]
struct CurveView {
    p: u64,
    count: usize,
    hasse: [i64; 2],
    points: Vec<[u64; 3]>,
    /// Index of σ(points[i]) in `points`.
    sigma: Vec<usize>,
}

pub fn curve_view(a: i64, b: i64, c: i64, p: u64) -> DemoResult<String> {
    let (_, ell) = setup(a, b, c, p, MAX_DEMO_PRIME)?;
    let pts = ell.enumerate_points().map_err(|e| e.to_string())?;
    let sigma = pts
        .iter()
        .map(|q| {
            let s = ell.sigma(q).map_err(|e| e.to_string())?;
            pts.iter()
                .position(|x| *x == s)
                .ok_or_else(|| format!("σ{q} is not an enumerated point"))
        })
        .collect::<DemoResult<Vec<_>>>()?;
    let root = 2.0 * (p as f64).sqrt();
    let view = CurveView {
        p,
        count: pts.len(),
        hasse: [(p as f64 + 1.0 - root).ceil() as i64, (p as f64 + 1.0 + root).floor() as i64],
        points: pts.iter().map(residues).collect(),
        sigma,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct WitnessView {
    n: usize,
    dims: [usize; 3],
    rank_m: usize,
    ext: (usize, usize, usize),
    verdict: String,
    checked_points: usize,
    cohomology: Vec<(i64, usize)>,
    det_curve: std::collections::BTreeMap<String, String>,
    det_points: Vec<[u64; 3]>,
    curve_points: Vec<[u64; 3]>,
    /// Line objects `u` with `Hom(F, L_u) ≠ 0`, next to whether `u` is on the determinant curve.
    line_checks: Vec<([String; 3], bool, usize)>,
}

pub fn witness_view(a: i64, b: i64, c: i64, p: u64, n: usize, seed: u64) -> DemoResult<String> {
    if n == 0 || n > MAX_DEMO_N {
        return Err(format!("n must be between 1 and {MAX_DEMO_N}"));
    }
    let (params, ell) = setup(a, b, c, p, MAX_DEMO_PRIME)?;
    let t = build_algebra(&params, required_max_deg(n)).map_err(|e| e.to_string())?;
    let w = construct_ideal_rep(&t, &ell, n, &ConstructChoice::default(), seed, 0).map_err(|e| e.to_string())?;
    let f0 = res(&w.rep);
    let form = det_curve(&f0).map_err(|e| e.to_string())?;
    let det_points = projective_points(ell.field())
        .map_err(|e| e.to_string())?
        .iter()
        .filter(|q| form.evaluate(q.coords()).is_zero())
        .map(residues)
        .collect();
    let small = build_algebra(&params, 3).map_err(|e| e.to_string())?;
    let line_checks = line_object_cross_check(&small, &f0, &form, 4)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|l| (l.point, l.on_det_curve, l.hom_dim))
        .collect();
    let view = WitnessView {
        n,
        dims: w.rep.dims(),
        rank_m: w.rank_m,
        ext: w.ext.as_tuple(),
        verdict: w.certificate.verdict.clone(),
        checked_points: w.certificate.hom_vanishing.checked_points,
        cohomology: w.cohomology.iter().map(|r| (r.l, r.h1)).collect(),
        det_curve: w.det_curve.clone(),
        det_points,
        curve_points: ell.enumerate_points().map_err(|e| e.to_string())?.iter().map(residues).collect(),
        line_checks,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct GridCell {
    point: [u64; 3],
    on_curve: bool,
    member: bool,
}

pub fn rank_one_grid(a: i64, b: i64, c: i64, p: u64) -> DemoResult<String> {
    let (_, ell) = setup(a, b, c, p, MAX_GRID_PRIME)?;
    let cells: Vec<GridCell> = classify_rank_one(&ell)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|r| GridCell {
            point: r.point.map(|s| s.parse().unwrap()),
            on_curve: r.on_curve,
            member: r.member,
        })
        .collect();
    serde_json::to_string(&cells).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = curveView)]
pub fn curve_view_js(a: i32, b: i32, c: i32, p: u32) -> Result<String, JsValue> {
    curve_view(a.into(), b.into(), c.into(), p.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = witnessView)]
pub fn witness_view_js(a: i32, b: i32, c: i32, p: u32, n: u32, seed: u32) -> Result<String, JsValue> {
    witness_view(a.into(), b.into(), c.into(), p.into(), n as usize, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = rankOneGrid)]
pub fn rank_one_grid_js(a: i32, b: i32, c: i32, p: u32) -> Result<String, JsValue> {
    rank_one_grid(a.into(), b.into(), c.into(), p.into()).map_err(|e| JsValue::from_str(&e))
}
