//! Graded linear algebra in the polytope ring over F_q: dimension patterns
//! of the degree-one quotient (the regularity decision) and the graded
//! dimensions of the interior subquotient (the Hodge numbers).
//!
//! The generators of degree one are F_i = x_i d/dx_i (x0 f), i = 0..n, whose
//! coefficient on the monomial x0 x^j is a_j (1,j)_i, and their hyperplane
//! combinations F_{H_i} = sum_j a_ij F_j, whose coefficient is a_j l_i(1,j).
//! F_{H_i} has no monomial on H_i, which is what confines the interior
//! subquotient computation to interior lattice points.

use crate::ff::{FFElem, FfError, FieldTower};
use crate::geometry::{eval_form, face_problem, GeomError, SimplexGeometry};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::linalg::fq_rank;
use crate::polygon::Polygon;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

/// Cap on estimated Gaussian-elimination steps per dimension test; large
/// polytopes and dimensions are refused rather than left to run for hours.
pub const ELIMINATION_BUDGET: u64 = 4_000_000_000;

#[derive(Debug, Error)]
pub enum KoszulError {
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("the polynomial is not regular for its polytope")]
    NotRegular,
    #[error("p = {p} divides det(a_ij) = {det}; hyperplane generators degenerate")]
    BadCharacteristic { p: u64, det: i128 },
    #[error("the dimension test needs about {needed} elimination steps, over the cap of {cap}")]
    EliminationBudget { needed: u64, cap: u64 },
}

/// Which degree-one generating set to quotient by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// F_i = x_i d/dx_i (x0 f)
    Standard,
    /// F_{H_i} = sum_j a_ij F_j
    Hyperplane,
}

/// One degree-one generator as (exponent j at height one, coefficient).
type Generator = Vec<(Vec<i64>, FFElem)>;

fn generators(
    tower: &FieldTower,
    f: &LaurentPoly,
    geo: &SimplexGeometry,
    kind: GeneratorKind,
) -> Vec<Generator> {
    let n = geo.n;
    (0..=n)
        .map(|i| {
            let mut g = Vec::new();
            for (j, coeff) in &f.terms {
                let scalar = match kind {
                    GeneratorKind::Standard => {
                        let lifted_i = if i == 0 { 1 } else { j[i - 1] };
                        (lifted_i as i128).rem_euclid(tower.p as i128) as u64
                    }
                    GeneratorKind::Hyperplane => {
                        let l = eval_form(&geo.hyperplane_matrix[i], 1, j);
                        l.rem_euclid(tower.p as i128) as u64
                    }
                };
                if scalar == 0 {
                    continue;
                }
                let c = tower.mul(*coeff, tower.scalar(scalar)).expect("base field");
                if c.idx != 0 {
                    g.push((j.clone(), c));
                }
            }
            g
        })
        .collect()
}

/// Graded dimensions d_r of S / (G_0, .., G_n) S for r = 0..=r_max:
/// d_r = dim S^r - rank of multiplication from degree r-1.
pub fn h0_dims(
    tower: &FieldTower,
    f: &LaurentPoly,
    geo: &SimplexGeometry,
    kind: GeneratorKind,
    r_max: usize,
) -> Result<Vec<usize>, KoszulError> {
    if kind == GeneratorKind::Hyperplane && !geo.check_p_det(tower.p) {
        return Err(KoszulError::BadCharacteristic {
            p: tower.p,
            det: geo.det.abs(),
        });
    }
    let gens = generators(tower, f, geo, kind);
    let level = tower.level(1);
    // all graded bases up front, so the elimination work can be estimated
    // and refused before any matrix is built
    let bases: Vec<Vec<Vec<i64>>> = (0..=r_max)
        .map(|r| geo.lattice_points(r as i64, 0))
        .collect::<Result<_, _>>()?;
    let mut work = 0u64;
    for r in 1..=r_max {
        let rows = (bases[r - 1].len() * (geo.n + 1)) as u64;
        let cols = bases[r].len() as u64;
        work = work.saturating_add(rows.saturating_mul(cols).saturating_mul(rows.min(cols)));
    }
    if work > ELIMINATION_BUDGET {
        return Err(KoszulError::EliminationBudget {
            needed: work,
            cap: ELIMINATION_BUDGET,
        });
    }
    let mut dims = Vec::with_capacity(r_max + 1);
    let mut prev_basis: Vec<Vec<i64>> = Vec::new();
    for r in 0..=r_max {
        let basis = bases[r].clone();
        let index: HashMap<&[i64], usize> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.as_slice(), i))
            .collect();
        if r == 0 {
            dims.push(basis.len()); // no generators act into degree 0
            prev_basis = basis;
            continue;
        }
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(prev_basis.len() * gens.len());
        for gen in &gens {
            if gen.is_empty() {
                continue;
            }
            for u in &prev_basis {
                let mut row = vec![0u32; basis.len()];
                for (j, coeff) in gen {
                    let target: Vec<i64> = u.iter().zip(j.iter()).map(|(a, b)| a + b).collect();
                    let col = *index
                        .get(target.as_slice())
                        .expect("product of cone points stays in the cone");
                    row[col] = level.add(row[col], coeff.idx);
                }
                rows.push(row);
            }
        }
        let rank = fq_rank(level, rows);
        dims.push(basis.len() - rank);
        prev_basis = basis;
    }
    Ok(dims)
}

/// Verdict of the regularity decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Regularity {
    Regular,
    NotRegular,
    Inconclusive,
}

/// Per-face dimension pattern: the quotient must have total dimension equal
/// to the face volume, with nothing in the margin window above.
#[derive(Debug, Clone, Serialize)]
pub struct FaceCheck {
    pub subset: u32,
    pub dim: usize,
    pub expected_total: i128,
    pub dims: Vec<usize>,
    pub pattern_ok: bool,
}

/// A common torus zero of a face polynomial and its logarithmic derivatives,
/// in the face's own coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub subset: u32,
    pub extension: usize,
    pub point: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub verdict: Regularity,
    pub face_checks: Vec<FaceCheck>,
    pub witness: Option<Witness>,
}

/// Decide regularity by running the dimension test on every face of
/// dimension >= 1 (vertex faces are monomials and cannot fail), then
/// corroborating any failure with a brute-force witness search.
pub fn regularity_check(
    tower: &FieldTower,
    f: &LaurentPoly,
    geo: &SimplexGeometry,
    degree_margin: Option<usize>,
    witness_budget: u64,
) -> Result<RegularityReport, KoszulError> {
    let n = geo.n;
    let margin = degree_margin.unwrap_or(n + 2).max(1);
    let mut face_checks = Vec::new();
    let mut failing: Vec<(u32, LaurentPoly)> = Vec::new();
    let mut saw_total_mismatch = false;
    for face in geo.faces() {
        if face.dim == 0 {
            continue;
        }
        let mask = face.subset.unwrap();
        let Some((small, face_geo)) = face_problem(f, geo, mask)? else {
            continue;
        };
        let na = face.dim;
        let expected = face_geo.normalized_volume(0)?;
        let r_max = na + 1 + margin;
        let dims = h0_dims(tower, &small, &face_geo, GeneratorKind::Standard, r_max)?;
        let total: i128 = dims[..=na + 1].iter().map(|&d| d as i128).sum();
        let window_clear = dims[na + 2..].iter().all(|&d| d == 0);
        let pattern_ok = total == expected && window_clear;
        if !pattern_ok {
            if total != expected {
                saw_total_mismatch = true;
            }
            failing.push((mask, small.clone()));
        }
        face_checks.push(FaceCheck {
            subset: mask,
            dim: na,
            expected_total: expected,
            dims,
            pattern_ok,
        });
    }
    if failing.is_empty() {
        return Ok(RegularityReport {
            verdict: Regularity::Regular,
            face_checks,
            witness: None,
        });
    }
    // witness search over the failing faces, smallest dimension first
    failing.sort_by_key(|(mask, _)| mask.count_ones());
    for (mask, small) in failing.iter().rev() {
        if let Some(w) = witness_search(tower, small, *mask, witness_budget)? {
            return Ok(RegularityReport {
                verdict: Regularity::NotRegular,
                face_checks,
                witness: Some(w),
            });
        }
    }
    let verdict = if saw_total_mismatch {
        Regularity::NotRegular
    } else {
        Regularity::Inconclusive
    };
    Ok(RegularityReport {
        verdict,
        face_checks,
        witness: None,
    })
}

/// Brute-force search for a common zero of f and its logarithmic
/// derivatives over F_{q^k}, k <= 3, within the point budget.
fn witness_search(
    tower: &FieldTower,
    f: &LaurentPoly,
    mask: u32,
    budget: u64,
) -> Result<Option<Witness>, KoszulError> {
    let dim = f.n;
    if dim == 0 {
        return Ok(None);
    }
    let mut system = vec![f.clone()];
    for i in 0..dim {
        if let Some(d) = f.log_derivative(tower, i) {
            system.push(d);
        }
    }
    for k in 1..=3.min(tower.k_max) {
        let nn = tower.level(k).n_units as u64;
        if nn.pow(dim as u32) > budget {
            break;
        }
        let units: Vec<FFElem> = tower.units(k).collect();
        let mut idxs = vec![0usize; dim];
        'points: loop {
            let pt: Vec<FFElem> = idxs.iter().map(|&i| units[i]).collect();
            let mut all_zero = true;
            for g in &system {
                if g.evaluate(tower, k, &pt)?.idx != 0 {
                    all_zero = false;
                    break;
                }
            }
            if all_zero {
                return Ok(Some(Witness {
                    subset: mask,
                    extension: k,
                    point: pt.iter().map(|x| x.idx).collect(),
                }));
            }
            let mut i = dim;
            loop {
                if i == 0 {
                    break 'points;
                }
                i -= 1;
                idxs[i] += 1;
                if idxs[i] < units.len() {
                    break;
                }
                idxs[i] = 0;
            }
        }
    }
    Ok(None)
}

/// Graded dimensions of the interior subquotient and their sum.
#[derive(Debug, Clone, Serialize)]
pub struct HodgeData {
    /// h(0..n+1)
    pub h: Vec<usize>,
    pub v: i128,
}

/// Hodge numbers h(k) for k = 0..n+1: interior lattice points at each degree
/// modulo the products F_{H_i} u over points u off every other hyperplane.
/// Requires a Regular verdict and p not dividing det(a_ij).
pub fn hodge_numbers(
    tower: &FieldTower,
    f: &LaurentPoly,
    geo: &SimplexGeometry,
    regularity: &RegularityReport,
) -> Result<HodgeData, KoszulError> {
    if regularity.verdict != Regularity::Regular {
        return Err(KoszulError::NotRegular);
    }
    if !geo.check_p_det(tower.p) {
        return Err(KoszulError::BadCharacteristic {
            p: tower.p,
            det: geo.det.abs(),
        });
    }
    let n = geo.n;
    let margin = 2usize;
    let gens = generators(tower, f, geo, GeneratorKind::Hyperplane);
    // F_{H_i} must avoid H_i entirely
    for (i, gen) in gens.iter().enumerate() {
        for (j, _) in gen {
            debug_assert_ne!(eval_form(&geo.hyperplane_matrix[i], 1, j), 0);
        }
    }
    let level = tower.level(1);
    let full = geo.full_mask();
    let mut h = Vec::with_capacity(n + 2 + margin);
    for r in 0..=(n + 1 + margin) {
        let interior = geo.lattice_points(r as i64, full)?;
        let index: HashMap<&[i64], usize> = interior
            .iter()
            .enumerate()
            .map(|(i, m)| (m.as_slice(), i))
            .collect();
        if r == 0 {
            h.push(interior.len());
            continue;
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (i, gen) in gens.iter().enumerate() {
            // u ranges over points off H_j for every j != i
            let off_mask = full & !(1u32 << i);
            let us = geo.lattice_points((r - 1) as i64, off_mask)?;
            for u in &us {
                let mut row = vec![0u32; interior.len()];
                for (j, coeff) in gen {
                    let target: Vec<i64> = u.iter().zip(j.iter()).map(|(a, b)| a + b).collect();
                    let col = *index
                        .get(target.as_slice())
                        .expect("products land in the interior");
                    row[col] = level.add(row[col], coeff.idx);
                }
                rows.push(row);
            }
        }
        let rank = fq_rank(level, rows);
        h.push(interior.len() - rank);
    }
    // nothing may survive above degree n+1
    for (r, &hr) in h.iter().enumerate().skip(n + 2) {
        assert_eq!(hr, 0, "interior quotient must vanish at degree {r}");
    }
    h.truncate(n + 2);
    let v = h.iter().map(|&x| x as i128).sum();
    Ok(HodgeData { h, v })
}

/// The polygon with vertices at the partial sums of the dimension vector.
pub fn hodge_polygon(data: &HodgeData) -> Polygon {
    Polygon::from_dimension_vector(&data.h)
}
