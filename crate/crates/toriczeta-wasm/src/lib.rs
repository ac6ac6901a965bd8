//! Browser demo bindings: run the zeta pipeline, the polytope report, and
//! the mirror-family sweep from a static page. Every function takes plain
//! strings and returns a JSON string so the page needs no framework.

use serde_json::json;
use toriczeta::counting::Budget;
use toriczeta::cy::{lambda_sweep, CyError};
use toriczeta::geometry::{newton_polytope, NewtonPolytope};
use toriczeta::laurent::parse_laurent;
use toriczeta::zeta::{analyze, AnalyzeConfig, PipelineError};
use toriczeta::FieldTower;
use wasm_bindgen::prelude::*;

fn parse_field(spec: &str) -> Result<(u64, usize), String> {
    let r = match spec.split_once('^') {
        Some((p, a)) => (
            p.trim().parse().map_err(|_| "bad p")?,
            a.trim().parse().map_err(|_| "bad a")?,
        ),
        None => (spec.trim().parse().map_err(|_| "bad p")?, 1),
    };
    Ok(r)
}

fn err_json(code: &str, detail: impl std::fmt::Display) -> String {
    json!({"error": code, "detail": detail.to_string()}).to_string()
}

fn config(budget: f64) -> AnalyzeConfig {
    AnalyzeConfig {
        budget: Budget {
            max_points: budget.max(1.0) as u64,
        },
        ..AnalyzeConfig::default()
    }
}

fn pipeline_err(e: PipelineError) -> String {
    err_json(e.code(), e)
}

/// Full pipeline on one Laurent polynomial; returns the zeta report as JSON.
#[wasm_bindgen]
pub fn analyze_poly(field: &str, poly: &str, budget: f64) -> String {
    let (p, a) = match parse_field(field) {
        Ok(v) => v,
        Err(e) => return err_json("field", e),
    };
    match analyze(p, a, poly, &config(budget)) {
        Ok(an) => serde_json::to_string(&an.report).unwrap_or_else(|e| err_json("encode", e)),
        Err(e) => pipeline_err(e),
    }
}

/// Newton polytope report: vertices, simplex flag, hyperplane matrix, det,
/// normalized volumes and the degree formula.
#[wasm_bindgen]
pub fn polytope_info(field: &str, poly: &str) -> String {
    let (p, a) = match parse_field(field) {
        Ok(v) => v,
        Err(e) => return err_json("field", e),
    };
    let tower = match FieldTower::new(p, a, 1) {
        Ok(t) => t,
        Err(e) => return err_json("field", e),
    };
    let f = match parse_laurent(poly, &tower) {
        Ok(f) => f,
        Err(e) => return err_json("parse", e),
    };
    match newton_polytope(&f) {
        NewtonPolytope::Simplex(geo) => {
            let volumes: Vec<_> = (0..=geo.full_mask())
                .map(|m| geo.normalized_volume(m).unwrap_or(0).to_string())
                .collect();
            json!({
                "is_simplex": true,
                "n": geo.n,
                "vertices": geo.vertices,
                "origin_interior": geo.origin_interior,
                "matrix": geo.hyperplane_matrix.iter()
                    .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "det": geo.det.to_string(),
                "volumes": volumes,
                "degree": geo.zeta_degree().map(|d| d.to_string()).unwrap_or_default(),
            })
            .to_string()
        }
        NewtonPolytope::General(g) => json!({
            "is_simplex": false,
            "n": g.n,
            "vertices": g.vertices,
        })
        .to_string(),
        NewtonPolytope::Degenerate(d) => json!({
            "is_simplex": false,
            "degenerate": true,
            "n": d.n,
            "dim": d.dim,
            "vertices": d.vertices,
        })
        .to_string(),
    }
}

/// Mirror-family sweep over every lambda in F_q; optionally recovers the
/// numerator for regular members (subject to the budget).
#[wasm_bindgen]
pub fn dwork_sweep(n: u32, field: &str, with_zeta: bool, budget: f64) -> String {
    let (p, a) = match parse_field(field) {
        Ok(v) => v,
        Err(e) => return err_json("field", e),
    };
    let q = p.pow(a as u32);
    if q > 64 {
        return err_json("field", "keep q <= 64 for the in-browser sweep");
    }
    let lambdas: Vec<u64> = (0..q).collect();
    match lambda_sweep(n as usize, p, a, &lambdas, with_zeta, &config(budget)) {
        Ok(rows) => serde_json::to_string(&rows).unwrap_or_else(|e| err_json("encode", e)),
        Err(CyError::Pipeline(e)) => pipeline_err(e),
        Err(e) => err_json("cy", e),
    }
}
