//! The one-parameter family of degree-(n+1) hypersurfaces
//! x_1^{n+1} + .. + x_{n+1}^{n+1} + lambda x_1 .. x_{n+1} in P^n and its
//! toric mirror: the projective closure of
//! x_1 + .. + x_n + 1/(x_1 .. x_n) + lambda inside the simplex toric
//! variety. Point counts on both sides, the closed-form boundary strata,
//! the boundary-corrected count, and the mod-q comparison of the pair.
//!
//! The finite symmetry group of the pencil and the quotient map are never
//! materialized; the torus model is counted directly.

use crate::counting::{count_closure, count_torus, Budget, CountError};
use crate::ff::{FFElem, FieldTower};
use crate::geometry::{newton_polytope, NewtonPolytope};
use crate::koszul::{regularity_check, Regularity};
use crate::laurent::LaurentPoly;
use crate::zeta::{analyze, AnalyzeConfig, PipelineError};
use num_bigint::BigInt;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CyError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("the family needs n >= 2")]
    DimensionTooSmall,
}

/// One member of the family over F_q.
pub struct DworkInstance {
    pub n: usize,
    pub lambda: u64,
    pub tower: FieldTower,
    /// torus-side polynomial x_1 + .. + x_n + (x_1 .. x_n)^{-1} + lambda
    pub torus_poly: LaurentPoly,
    pub polytope: NewtonPolytope,
}

impl DworkInstance {
    pub fn new(n: usize, lambda: u64, tower: FieldTower) -> Result<Self, CyError> {
        if n < 2 {
            return Err(CyError::DimensionTooSmall);
        }
        let torus_poly = dwork_torus_poly(&tower, n, lambda);
        let polytope = newton_polytope(&torus_poly);
        debug_assert!(polytope.is_simplex());
        Ok(DworkInstance {
            n,
            lambda,
            tower,
            torus_poly,
            polytope,
        })
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }
}

/// Build the torus-side member; lambda enters as a constant term (dropped
/// when it is 0 mod p).
pub fn dwork_torus_poly(tower: &FieldTower, n: usize, lambda: u64) -> LaurentPoly {
    let mut terms: Vec<(Vec<i64>, FFElem)> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        terms.push((e, tower.scalar(1)));
    }
    terms.push((vec![-1; n], tower.scalar(1)));
    let lam = tower.scalar(lambda);
    if lam.idx != 0 {
        terms.push((vec![0; n], lam));
    }
    LaurentPoly::from_terms(tower, n, terms).expect("the family polynomial is never zero")
}

/// Closed form for a boundary stratum of dimension d:
/// ((q-1)^d + (-1)^{d+1}) / q, asserted to divide exactly.
pub fn stratum_count(d: usize, q: u64) -> i128 {
    let num = (q as i128 - 1).pow(d as u32) + if d % 2 == 0 { -1 } else { 1 };
    assert_eq!(num % q as i128, 0, "the stratum formula divides exactly");
    num / q as i128
}

/// Face-sum identity for the n-simplex, kept integral by clearing the 1/q:
/// sum over nonempty faces of ((q-1)^dim + (-1)^{dim+1}) = q (q^n - 1)/(q-1).
pub fn face_sum_identity(n: usize, q: u64) -> bool {
    let qi = q as i128;
    let mut lhs = 0i128;
    for d in 0..=n {
        let count = num_integer::binomial((n + 1) as i128, (d + 1) as i128);
        lhs += count * ((qi - 1).pow(d as u32) + if d % 2 == 0 { -1 } else { 1 });
    }
    let rhs = qi * (qi.pow(n as u32) - 1) / (qi - 1);
    lhs == rhs
}

/// Number of points of the mirror member over F_q through the
/// boundary-corrected formula: the affine torus count plus the closed-form
/// boundary, with the big-face closed form swapped out for the real count.
pub fn dwork_y_count(inst: &DworkInstance, budget: &Budget) -> Result<i128, CyError> {
    let affine = count_torus(&inst.tower, &inst.torus_poly, 1, budget)? as i128;
    let q = inst.q();
    let n = inst.n;
    Ok(affine - stratum_count(n, q) + ((q as i128).pow(n as u32) - 1) / (q as i128 - 1))
}

/// The same count through the generic toric decomposition.
pub fn dwork_y_count_via_closure(inst: &DworkInstance, budget: &Budget) -> Result<i128, CyError> {
    let table = count_closure(&inst.tower, &inst.torus_poly, &inst.polytope, 1, budget)?;
    Ok(table.closure as i128)
}

/// Brute-force count of the projective hypersurface member over F_q,
/// one representative per class (first nonzero coordinate normalized to 1).
pub fn dwork_x_count(inst: &DworkInstance, budget: &Budget) -> Result<i128, CyError> {
    let n = inst.n;
    let q = inst.q();
    let tower = &inst.tower;
    let level = tower.level(1);
    let proj_points = ((q as u128).pow(n as u32 + 1) - 1) / (q as u128 - 1);
    if proj_points > budget.max_points as u128 {
        return Err(CountError::BudgetExceeded {
            needed: proj_points as u64,
            budget: budget.max_points,
        }
        .into());
    }
    let lam = tower.scalar(inst.lambda);
    let deg = (n + 1) as i64;
    let mut count = 0i128;
    // first nonzero coordinate at position i, later coordinates free
    for i in 0..=n {
        let free = n - i;
        let mut idxs = vec![0u32; free];
        loop {
            let mut coords: Vec<FFElem> = Vec::with_capacity(n + 1);
            for _ in 0..i {
                coords.push(tower.zero(1));
            }
            coords.push(tower.one(1));
            for &ix in &idxs {
                coords.push(tower.elem(1, ix));
            }
            // sum of (n+1)-th powers plus lambda times the product
            let mut acc = tower.zero(1);
            let mut prod = tower.one(1);
            for &c in &coords {
                acc = tower.add(acc, tower.powi(c, deg).unwrap()).unwrap();
                prod = tower.mul(prod, c).unwrap();
            }
            acc = tower.add(acc, tower.mul(lam, prod).unwrap()).unwrap();
            if acc.idx == 0 {
                count += 1;
            }
            // odometer over the free block
            let mut j = free;
            let done = loop {
                if j == 0 {
                    break true;
                }
                j -= 1;
                idxs[j] += 1;
                if (idxs[j] as u64) < level.size {
                    break false;
                }
                idxs[j] = 0;
            };
            if done {
                break;
            }
        }
    }
    Ok(count)
}

/// #X = #Y mod q for the mirror pair.
pub fn mirror_congruence(inst: &DworkInstance, budget: &Budget) -> Result<bool, CyError> {
    let x = dwork_x_count(inst, budget)?;
    let y = dwork_y_count(inst, budget)?;
    Ok((x - y).rem_euclid(inst.q() as i128) == 0)
}

/// Order-1 shadow of the zeta formula: q N_1(closure) must equal
/// (-1)^n A_1 + q + q^2 + .. + q^n, with A_1 read from the recovered
/// numerator. Exercises the full pipeline, so the member must be regular.
pub fn dwork_trace_formula_check(
    inst: &DworkInstance,
    cfg: &AnalyzeConfig,
) -> Result<bool, CyError> {
    let text = inst.torus_poly.display(&inst.tower).to_string();
    let analysis = analyze(inst.tower.p, inst.tower.a, &text, cfg)?;
    let coeffs = analysis.numerator.as_ref().ok_or(PipelineError::Koszul(
        crate::koszul::KoszulError::NotRegular,
    ))?;
    let q = BigInt::from(inst.q());
    let n = inst.n;
    let n1 = BigInt::from(analysis.count_tables[0].closure);
    let a1 = if coeffs.len() > 1 {
        coeffs[1].clone()
    } else {
        BigInt::from(0)
    };
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let geom: BigInt = (1..=n).map(|i| q.pow(i as u32)).sum();
    Ok(&n1 * &q == BigInt::from(sign) * a1 + geom)
}

/// One row of the lambda sweep.
#[derive(Debug, Serialize)]
pub struct CyRow {
    pub lambda: u64,
    pub x_count: String,
    pub y_count: String,
    pub congruent: bool,
    pub regular: String,
    #[serde(rename = "P")]
    pub numerator: Option<Vec<String>>,
}

/// Sweep the family over the chosen lambda values; the numerator column is
/// filled only for regular members within budget.
pub fn lambda_sweep(
    n: usize,
    p: u64,
    a: usize,
    lambdas: &[u64],
    with_zeta: bool,
    cfg: &AnalyzeConfig,
) -> Result<Vec<CyRow>, CyError> {
    // rows are independent; order is preserved by the indexed collect
    #[cfg(feature = "parallel")]
    let iter = lambdas.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = lambdas.iter();
    iter.map(|&lambda| sweep_row(n, p, a, lambda, with_zeta, cfg))
        .collect()
}

fn sweep_row(
    n: usize,
    p: u64,
    a: usize,
    lambda: u64,
    with_zeta: bool,
    cfg: &AnalyzeConfig,
) -> Result<CyRow, CyError> {
    {
        let tower = FieldTower::with_options(p, a, 3, cfg.base_modulus.clone(), cfg.field_cap)
            .or_else(|_| FieldTower::with_options(p, a, 1, cfg.base_modulus.clone(), cfg.field_cap))
            .map_err(PipelineError::Field)?;
        let inst = DworkInstance::new(n, lambda, tower)?;
        let x = dwork_x_count(&inst, &cfg.budget)?;
        let y = dwork_y_count(&inst, &cfg.budget)?;
        let congruent = (x - y).rem_euclid(inst.q() as i128) == 0;
        let geo = inst
            .polytope
            .as_simplex()
            .map_err(PipelineError::Geometry)?;
        let reg = match regularity_check(
            &inst.tower,
            &inst.torus_poly,
            geo,
            cfg.degree_margin,
            cfg.witness_budget,
        ) {
            Ok(r) => r,
            Err(crate::koszul::KoszulError::EliminationBudget { needed, cap }) => {
                return Err(CountError::BudgetExceeded {
                    needed,
                    budget: cap,
                }
                .into())
            }
            Err(e) => return Err(PipelineError::Koszul(e).into()),
        };
        let numerator = if with_zeta && reg.verdict == Regularity::Regular {
            let text = inst.torus_poly.display(&inst.tower).to_string();
            match analyze(p, a, &text, cfg) {
                Ok(an) => an
                    .numerator
                    .map(|cs| cs.iter().map(|c| c.to_string()).collect()),
                Err(PipelineError::Count(CountError::BudgetExceeded { .. })) => None,
                Err(e) => return Err(e.into()),
            }
        } else {
            None
        };
        Ok(CyRow {
            lambda,
            x_count: x.to_string(),
            y_count: y.to_string(),
            congruent,
            regular: format!("{:?}", reg.verdict),
            numerator,
        })
    }
}

/// Exactness of the division in the stratum formula over the stated ranges.
pub fn division_exactness(d_max: usize, q_max: u64) -> bool {
    for q in 2..=q_max {
        for d in 0..=d_max {
            let num = (q as i128 - 1).pow(d as u32) + if d % 2 == 0 { -1 } else { 1 };
            if num % q as i128 != 0 {
                return false;
            }
        }
    }
    true
}
