//! Exhaustive point counts on torus hypersurfaces and their toric closures,
//! exponential sums in Z[zeta_p], and truncated L-function series.
//!
//! Counting walks the torus (F_{q^k}^*)^n with every coordinate written as a
//! power of a fixed generator, so each term of the polynomial is a single
//! table lookup per point; field additions use lane-packed representations
//! chosen per field size. An honest double-loop reference path for the
//! exponential sums is kept for oracle testing.

use crate::ff::{FFElem, FfError, FieldTower};
use crate::geometry::{face_coords, to_face_coords, GeomError, NewtonPolytope};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::series;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluation-step budget for exhaustive enumeration.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_points: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_points: 1_000_000_000,
        }
    }
}

#[derive(Debug, Error)]
pub enum CountError {
    #[error("enumeration needs {needed} points, over the budget of {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("L-series coefficient is not an integer (internal inconsistency)")]
    NonIntegralSeries,
}

// ---------------------------------------------------------------------------
// cyclotomic integers
// ---------------------------------------------------------------------------

/// An element of Z[zeta_p] in the canonical basis 1, zeta, .., zeta^{p-2}
/// (zeta^{p-1} eliminated through 1 + zeta + .. + zeta^{p-1} = 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloInt {
    pub p: u64,
    coeffs: Vec<i64>,
}

impl CycloInt {
    pub fn zero(p: u64) -> Self {
        CycloInt {
            p,
            coeffs: vec![0; (p - 1) as usize],
        }
    }

    pub fn from_integer(p: u64, n: i64) -> Self {
        let mut c = Self::zero(p);
        c.coeffs[0] = n;
        c
    }

    /// sum counts[t] * zeta^t for t = 0..p-1, canonicalized.
    pub fn from_power_counts(p: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let top = counts[(p - 1) as usize];
        let coeffs = (0..(p - 1) as usize)
            .map(|i| counts[i].checked_sub(top).expect("cyclotomic overflow"))
            .collect();
        CycloInt { p, coeffs }
    }

    pub fn add(&self, other: &CycloInt) -> CycloInt {
        assert_eq!(self.p, other.p);
        CycloInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.checked_add(*b).expect("cyclotomic overflow"))
                .collect(),
        }
    }

    pub fn mul(&self, other: &CycloInt) -> CycloInt {
        assert_eq!(self.p, other.p);
        let p = self.p as usize;
        let mut counts = vec![0i64; p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if *b == 0 {
                    continue;
                }
                counts[(i + j) % p] = counts[(i + j) % p]
                    .checked_add(a.checked_mul(*b).expect("cyclotomic overflow"))
                    .expect("cyclotomic overflow");
            }
        }
        CycloInt::from_power_counts(self.p, &counts)
    }

    /// Some(n) when the element is the rational integer n.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

// ---------------------------------------------------------------------------
// counting kernels
// ---------------------------------------------------------------------------

/// Field addition strategy for the hot counting loops. Every kernel exposes
/// the unit group order, a generator-power table, and an addition.
trait Kern: Sync {
    type E: Copy + PartialEq + Send;
    fn n(&self) -> u32;
    fn zero(&self) -> Self::E;
    fn pow(&self, e: u32) -> Self::E;
    fn add(&self, a: Self::E, b: Self::E) -> Self::E;
}

/// p = 2: packed indices add with xor, any degree.
struct XorKern {
    n: u32,
    pow: Vec<u32>,
}

impl Kern for XorKern {
    type E = u32;
    #[inline(always)]
    fn n(&self) -> u32 {
        self.n
    }
    #[inline(always)]
    fn zero(&self) -> u32 {
        0
    }
    #[inline(always)]
    fn pow(&self, e: u32) -> u32 {
        self.pow[e as usize]
    }
    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }
}

/// Odd p, degree <= 4: one base-p digit per 16-bit lane of a u64.
struct Lane64Kern {
    n: u32,
    pow: Vec<u64>,
    thr: u64,
    p: u64,
}

impl Kern for Lane64Kern {
    type E = u64;
    #[inline(always)]
    fn n(&self) -> u32 {
        self.n
    }
    #[inline(always)]
    fn zero(&self) -> u64 {
        0
    }
    #[inline(always)]
    fn pow(&self, e: u32) -> u64 {
        self.pow[e as usize]
    }
    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        let ge = (s.wrapping_add(self.thr) & 0x8000_8000_8000_8000) >> 15;
        s - ge * self.p
    }
}

/// Odd p, degree <= 8: 16-bit lanes of a u128.
struct Lane128Kern {
    n: u32,
    pow: Vec<u128>,
    thr: u128,
    p: u128,
}

impl Kern for Lane128Kern {
    type E = u128;
    #[inline(always)]
    fn n(&self) -> u32 {
        self.n
    }
    #[inline(always)]
    fn zero(&self) -> u128 {
        0
    }
    #[inline(always)]
    fn pow(&self, e: u32) -> u128 {
        self.pow[e as usize]
    }
    #[inline(always)]
    fn add(&self, a: u128, b: u128) -> u128 {
        const MASK: u128 = 0x8000_8000_8000_8000_8000_8000_8000_8000;
        let s = a + b;
        let ge = (s.wrapping_add(self.thr) & MASK) >> 15;
        s - ge * self.p
    }
}

/// p < 128, degree <= 16: 8-bit lanes of a u128.
struct Byte128Kern {
    n: u32,
    pow: Vec<u128>,
    thr: u128,
    p: u128,
}

impl Kern for Byte128Kern {
    type E = u128;
    #[inline(always)]
    fn n(&self) -> u32 {
        self.n
    }
    #[inline(always)]
    fn zero(&self) -> u128 {
        0
    }
    #[inline(always)]
    fn pow(&self, e: u32) -> u128 {
        self.pow[e as usize]
    }
    #[inline(always)]
    fn add(&self, a: u128, b: u128) -> u128 {
        const MASK: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;
        let s = a + b;
        let ge = (s.wrapping_add(self.thr) & MASK) >> 7;
        s - ge * self.p
    }
}

/// Fallback: packed indices with a digit loop (correct for every p, d).
struct GenericKern {
    n: u32,
    pow: Vec<u32>,
    p: u32,
    d: usize,
}

impl Kern for GenericKern {
    type E = u32;
    #[inline(always)]
    fn n(&self) -> u32 {
        self.n
    }
    #[inline(always)]
    fn zero(&self) -> u32 {
        0
    }
    #[inline(always)]
    fn pow(&self, e: u32) -> u32 {
        self.pow[e as usize]
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut mul = 1u32;
        for _ in 0..self.d {
            let mut s = a % p + b % p;
            if s >= p {
                s -= p;
            }
            out += s * mul;
            mul = mul.wrapping_mul(p);
            a /= p;
            b /= p;
        }
        out
    }
}

fn spread16(idx: u32, p: u64, d: usize) -> u64 {
    let mut out = 0u64;
    let mut x = idx as u64;
    for lane in 0..d {
        out |= (x % p) << (16 * lane);
        x /= p;
    }
    out
}

fn spread16_128(idx: u32, p: u64, d: usize) -> u128 {
    let mut out = 0u128;
    let mut x = idx as u64;
    for lane in 0..d {
        out |= ((x % p) as u128) << (16 * lane);
        x /= p;
    }
    out
}

fn spread8_128(idx: u32, p: u64, d: usize) -> u128 {
    let mut out = 0u128;
    let mut x = idx as u64;
    for lane in 0..d {
        out |= ((x % p) as u128) << (8 * lane);
        x /= p;
    }
    out
}

fn broadcast16(v: u64, lanes: usize) -> u64 {
    let mut out = 0u64;
    for lane in 0..lanes {
        out |= v << (16 * lane);
    }
    out
}

fn broadcast16_128(v: u64, lanes: usize) -> u128 {
    let mut out = 0u128;
    for lane in 0..lanes {
        out |= (v as u128) << (16 * lane);
    }
    out
}

fn broadcast8_128(v: u64, lanes: usize) -> u128 {
    let mut out = 0u128;
    for lane in 0..lanes {
        out |= (v as u128) << (8 * lane);
    }
    out
}

/// One term prepared for the walk: starting exponent (coefficient log folded
/// in) plus the per-coordinate exponent steps, all mod q^k - 1.
struct PreparedTerms {
    start: Vec<u32>,
    steps: Vec<Vec<u32>>,
}

fn check_level(tower: &FieldTower, k: usize) -> Result<(), CountError> {
    if k == 0 || k > tower.k_max {
        return Err(CountError::Field(FfError::WrongField {
            have: k * tower.a,
            want: tower.a,
        }));
    }
    Ok(())
}

fn prepare_terms(
    tower: &FieldTower,
    f: &LaurentPoly,
    k: usize,
) -> Result<PreparedTerms, CountError> {
    check_level(tower, k)?;
    let lv = tower.level(k);
    let nn = lv.n_units as i128;
    let mut start = Vec::with_capacity(f.terms.len());
    let mut steps = Vec::with_capacity(f.terms.len());
    for (exp, coeff) in &f.terms {
        let c = tower.embed_base(*coeff, k)?;
        let cl = lv.log_of(c.idx).expect("nonzero coefficient");
        start.push(cl);
        steps.push(
            exp.iter()
                .map(|&j| (j as i128).rem_euclid(nn) as u32)
                .collect(),
        );
    }
    Ok(PreparedTerms { start, steps })
}

/// Count zeros over the torus (F_{q^k}^*)^dim by an incremental exponent
/// walk; coordinates advance lexicographically and each term's exponent is
/// updated in place.
fn count_zeros<K: Kern>(kern: &K, pt: &PreparedTerms, dim: usize, parallel: bool) -> u64 {
    let nterms = pt.start.len();
    if dim == 0 {
        let mut v = kern.zero();
        for j in 0..nterms {
            v = kern.add(v, kern.pow(pt.start[j]));
        }
        return (v == kern.zero()) as u64;
    }
    #[cfg(feature = "parallel")]
    {
        let nn = kern.n();
        if parallel && dim >= 2 && (nn as u64).pow(dim as u32) >= 1 << 22 {
            return (0..nn)
                .into_par_iter()
                .map(|t0| {
                    let mut e: Vec<u32> = (0..nterms)
                        .map(|j| {
                            ((pt.start[j] as u64 + pt.steps[j][0] as u64 * t0 as u64) % nn as u64)
                                as u32
                        })
                        .collect();
                    walk(kern, pt, &mut e, 1, dim)
                })
                .sum();
        }
    }
    let _ = parallel;
    let mut e = pt.start.clone();
    walk(kern, pt, &mut e, 0, dim)
}

fn walk<K: Kern>(kern: &K, pt: &PreparedTerms, e: &mut [u32], level: usize, dim: usize) -> u64 {
    let nn = kern.n();
    let nterms = e.len();
    if level + 1 == dim {
        // split terms into those constant along the innermost coordinate and
        // those that vary with it
        let varying: Vec<usize> = (0..nterms).filter(|&j| pt.steps[j][level] != 0).collect();
        let mut base = kern.zero();
        for j in 0..nterms {
            if pt.steps[j][level] == 0 {
                base = kern.add(base, kern.pow(e[j]));
            }
        }
        let zero = kern.zero();
        let mut zeros = 0u64;
        match varying.len() {
            0 => {
                if base == zero {
                    zeros = nn as u64;
                }
            }
            1 => {
                let j = varying[0];
                let st = pt.steps[j][level];
                let mut ej = e[j];
                for _ in 0..nn {
                    let v = kern.add(base, kern.pow(ej));
                    zeros += (v == zero) as u64;
                    ej += st;
                    if ej >= nn {
                        ej -= nn;
                    }
                }
                e[j] = ej;
            }
            2 => {
                let (j0, j1) = (varying[0], varying[1]);
                let (s0, s1) = (pt.steps[j0][level], pt.steps[j1][level]);
                let (mut e0, mut e1) = (e[j0], e[j1]);
                for _ in 0..nn {
                    let v = kern.add(base, kern.add(kern.pow(e0), kern.pow(e1)));
                    zeros += (v == zero) as u64;
                    e0 += s0;
                    if e0 >= nn {
                        e0 -= nn;
                    }
                    e1 += s1;
                    if e1 >= nn {
                        e1 -= nn;
                    }
                }
                e[j0] = e0;
                e[j1] = e1;
            }
            _ => {
                for _ in 0..nn {
                    let mut v = base;
                    for &j in &varying {
                        v = kern.add(v, kern.pow(e[j]));
                    }
                    zeros += (v == zero) as u64;
                    for &j in &varying {
                        e[j] += pt.steps[j][level];
                        if e[j] >= nn {
                            e[j] -= nn;
                        }
                    }
                }
            }
        }
        zeros
    } else {
        let mut total = 0u64;
        for _ in 0..nn {
            total += walk(kern, pt, e, level + 1, dim);
            for j in 0..nterms {
                e[j] += pt.steps[j][level];
                if e[j] >= nn {
                    e[j] -= nn;
                }
            }
        }
        total
    }
}

fn dispatch_count(
    tower: &FieldTower,
    f: &LaurentPoly,
    k: usize,
    parallel: bool,
) -> Result<u64, CountError> {
    let lv = tower.level(k);
    let pt = prepare_terms(tower, f, k)?;
    let dim = f.n;
    let p = lv.p;
    let d = lv.d;
    let nn = lv.n_units;
    let count = if p == 2 {
        let pow: Vec<u32> = (0..nn).map(|e| lv.pow_of_generator(e)).collect();
        count_zeros(&XorKern { n: nn, pow }, &pt, dim, parallel)
    } else if d <= 4 {
        let pow: Vec<u64> = (0..nn)
            .map(|e| spread16(lv.pow_of_generator(e), p, d))
            .collect();
        let kern = Lane64Kern {
            n: nn,
            pow,
            thr: broadcast16(0x8000 - p, d),
            p,
        };
        count_zeros(&kern, &pt, dim, parallel)
    } else if d <= 8 {
        let pow: Vec<u128> = (0..nn)
            .map(|e| spread16_128(lv.pow_of_generator(e), p, d))
            .collect();
        let kern = Lane128Kern {
            n: nn,
            pow,
            thr: broadcast16_128(0x8000 - p, d),
            p: p as u128,
        };
        count_zeros(&kern, &pt, dim, parallel)
    } else if p < 128 && d <= 16 {
        let pow: Vec<u128> = (0..nn)
            .map(|e| spread8_128(lv.pow_of_generator(e), p, d))
            .collect();
        let kern = Byte128Kern {
            n: nn,
            pow,
            thr: broadcast8_128(0x80 - p, d),
            p: p as u128,
        };
        count_zeros(&kern, &pt, dim, parallel)
    } else {
        let pow: Vec<u32> = (0..nn).map(|e| lv.pow_of_generator(e)).collect();
        let kern = GenericKern {
            n: nn,
            pow,
            p: p as u32,
            d,
        };
        count_zeros(&kern, &pt, dim, parallel)
    };
    Ok(count)
}

fn torus_size(tower: &FieldTower, k: usize, dim: usize) -> u64 {
    (tower.level(k).n_units as u64).pow(dim as u32)
}

fn check_budget(needed: u64, budget: &Budget) -> Result<(), CountError> {
    if needed > budget.max_points {
        return Err(CountError::BudgetExceeded {
            needed,
            budget: budget.max_points,
        });
    }
    Ok(())
}

/// Exact number of torus points of F_{q^k} where f vanishes.
pub fn count_torus(
    tower: &FieldTower,
    f: &LaurentPoly,
    k: usize,
    budget: &Budget,
) -> Result<u64, CountError> {
    check_level(tower, k)?;
    check_budget(torus_size(tower, k, f.n), budget)?;
    dispatch_count(tower, f, k, true)
}

// ---------------------------------------------------------------------------
// closure counts over the toric decomposition
// ---------------------------------------------------------------------------

/// Count of one stratum of the projective closure.
#[derive(Debug, Clone)]
pub struct FaceCount {
    pub dim: usize,
    pub subset: Option<u32>,
    pub vertex_ids: Vec<usize>,
    pub count: u64,
    /// the face misses the support entirely; the zero polynomial vanishes on
    /// the whole stratum
    pub empty_restriction: bool,
}

/// Per-extension counts assembled from the toric decomposition.
#[derive(Debug, Clone)]
pub struct CountTable {
    pub k: usize,
    pub torus_size: u64,
    /// count on the big open torus
    pub torus_count: u64,
    pub faces: Vec<FaceCount>,
    /// sum over all nonempty faces
    pub closure: u64,
}

/// Count the projective closure of {f = 0} by summing the counts of its
/// intersections with every torus stratum; each stratum is counted in the
/// saturated coordinates of its face.
pub fn count_closure(
    tower: &FieldTower,
    f: &LaurentPoly,
    polytope: &NewtonPolytope,
    k: usize,
    budget: &Budget,
) -> Result<CountTable, CountError> {
    check_level(tower, k)?;
    let faces = polytope.faces()?;
    let vertices = polytope.vertices();
    let nn = tower.level(k).n_units as u64;
    let mut needed = 0u64;
    for face in faces {
        needed = needed.saturating_add(nn.pow(face.dim as u32));
    }
    check_budget(needed, budget)?;
    let mut out_faces = Vec::with_capacity(faces.len());
    let mut closure = 0u64;
    let mut torus_count = 0u64;
    for face in faces {
        let (count, empty) = match f.restrict_to_face(face) {
            Ok(res) => {
                let verts: Vec<Vec<i64>> = face
                    .vertex_ids
                    .iter()
                    .map(|&i| vertices[i].clone())
                    .collect();
                let fc = face_coords(&verts);
                debug_assert_eq!(fc.dim, face.dim);
                let small = to_face_coords(&res, &fc);
                (dispatch_count(tower, &small, k, true)?, false)
            }
            Err(LaurentError::EmptyRestriction) => (nn.pow(face.dim as u32), true),
            Err(e) => return Err(e.into()),
        };
        closure += count;
        if face.eqs.is_empty() {
            torus_count = count;
        }
        out_faces.push(FaceCount {
            dim: face.dim,
            subset: face.subset,
            vertex_ids: face.vertex_ids.clone(),
            count,
            empty_restriction: empty,
        });
    }
    // sanity: strata are disjoint, so the total cannot exceed the ambient sum
    debug_assert!(closure <= needed);
    Ok(CountTable {
        k,
        torus_size: nn.pow(f.n as u32),
        torus_count,
        faces: out_faces,
        closure,
    })
}

// ---------------------------------------------------------------------------
// exponential sums and L-series
// ---------------------------------------------------------------------------

/// S_k of x0 f over G_m^{dim+1}, computed through the collapsed x0 sum:
/// q^k N_k - (q^k - 1)^dim as an exact integer. `f` = None means the zero
/// polynomial (empty face restriction), which vanishes everywhere.
pub fn exp_sum(
    tower: &FieldTower,
    f: Option<&LaurentPoly>,
    dim: usize,
    k: usize,
    budget: &Budget,
) -> Result<i128, CountError> {
    check_level(tower, k)?;
    let qk = tower.q().pow(k as u32) as i128;
    let nn = (tower.level(k).n_units as u64) as i128;
    let torus = nn.pow(dim as u32);
    let nstar = match f {
        Some(f) => {
            debug_assert_eq!(f.n, dim);
            count_torus(tower, f, k, budget)? as i128
        }
        None => torus,
    };
    Ok(qk * nstar - torus)
}

/// The same sum evaluated the slow way: literally iterate (x0, x) over
/// (F_{q^k}^*)^{dim+1} and accumulate zeta_p^{Tr(x0 f(x))} in Z[zeta_p].
pub fn exp_sum_reference(
    tower: &FieldTower,
    f: &LaurentPoly,
    k: usize,
    budget: &Budget,
) -> Result<CycloInt, CountError> {
    let lv = tower.level(k);
    let nn = lv.n_units as u64;
    let needed = nn.pow(f.n as u32).saturating_mul(nn);
    check_budget(needed, budget)?;
    let p = tower.p;
    // trace of generator^s, tabulated once
    let trace_of_pow: Vec<u32> = (0..nn)
        .map(|s| lv.abs_trace(lv.pow_of_generator(s as u32)) as u32)
        .collect();
    let mut counts = vec![0i64; p as usize];
    let units: Vec<FFElem> = tower.units(k).collect();
    let dim = f.n;
    let mut idxs = vec![0usize; dim];
    loop {
        let pt: Vec<FFElem> = idxs.iter().map(|&i| units[i]).collect();
        let c = f.evaluate(tower, k, &pt)?;
        match lv.log_of(c.idx) {
            None => {
                // f(x) = 0: every x0 contributes zeta^0
                for _ in 0..nn {
                    counts[0] += 1;
                }
            }
            Some(lc) => {
                for s in 0..nn {
                    let t = trace_of_pow[((s + lc as u64) % nn) as usize];
                    counts[t as usize] += 1;
                }
            }
        }
        // odometer
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(CycloInt::from_power_counts(p, &counts));
            }
            i -= 1;
            idxs[i] += 1;
            if idxs[i] < units.len() {
                break;
            }
            idxs[i] = 0;
        }
        if dim == 0 {
            return Ok(CycloInt::from_power_counts(p, &counts));
        }
    }
}

/// Coefficients of L(x0 f, t) = exp(sum_k S_k t^k / k) to order k_max,
/// asserted integral. `f` = None is the zero polynomial as in [`exp_sum`].
pub fn lfunction_series(
    tower: &FieldTower,
    f: Option<&LaurentPoly>,
    dim: usize,
    k_max: usize,
    budget: &Budget,
) -> Result<Vec<BigInt>, CountError> {
    let mut s: Vec<BigRational> = vec![series::from_int(0)];
    for k in 1..=k_max {
        s.push(series::from_int(exp_sum(tower, f, dim, k, budget)?));
    }
    let z = series::exp_power_sums(&s);
    series::to_integers(&z).ok_or(CountError::NonIntegralSeries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::newton_polytope;
    use crate::laurent::parse_laurent;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn monomials_never_vanish() {
        let t = FieldTower::new(5, 1, 2).unwrap();
        let f = parse_laurent("x1", &t).unwrap();
        for k in 1..=2 {
            assert_eq!(count_torus(&t, &f, k, &budget()).unwrap(), 0);
        }
    }

    #[test]
    fn affine_line_counts() {
        let t = FieldTower::new(5, 1, 2).unwrap();
        let f = parse_laurent("1 + x1", &t).unwrap();
        assert_eq!(count_torus(&t, &f, 1, &budget()).unwrap(), 1);
        assert_eq!(count_torus(&t, &f, 2, &budget()).unwrap(), 1);
        let g = parse_laurent("1 + x1 + x2", &t).unwrap();
        // q - 2 points for the 2-dimensional stratum polynomial
        assert_eq!(count_torus(&t, &g, 1, &budget()).unwrap(), 3);
    }

    /// Independent naive counter: evaluate at every materialized point.
    fn naive_count(t: &FieldTower, f: &LaurentPoly, k: usize) -> u64 {
        let units: Vec<FFElem> = t.units(k).collect();
        let mut idxs = vec![0usize; f.n];
        let mut count = 0u64;
        loop {
            let pt: Vec<FFElem> = idxs.iter().map(|&i| units[i]).collect();
            if f.evaluate(t, k, &pt).unwrap().idx == 0 {
                count += 1;
            }
            let mut i = f.n;
            loop {
                if i == 0 {
                    return count;
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

    #[test]
    fn kernel_vs_naive_random() {
        // lane64 (p = 7, 13), xor (p = 2), lane128 (p = 3, d = 5)
        let mut rng = StdRng::seed_from_u64(99);
        let cases: Vec<(u64, usize, usize)> = vec![(7, 1, 2), (13, 1, 1), (2, 2, 2), (3, 1, 5)];
        for (p, a, kmax) in cases {
            let t = FieldTower::new(p, a, kmax).unwrap();
            for _ in 0..4 {
                let n = rng.gen_range(1..=2usize);
                let nterms = rng.gen_range(1..=4usize);
                let raw: Vec<(Vec<i64>, FFElem)> = (0..nterms)
                    .map(|_| {
                        let exp: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2i64)).collect();
                        let q = t.q();
                        let c = t.elem(1, rng.gen_range(1..q) as u32);
                        (exp, c)
                    })
                    .collect();
                let Ok(f) = LaurentPoly::from_terms(&t, n, raw) else {
                    continue;
                };
                for k in 1..=kmax.min(2) {
                    if (t.level(k).n_units as u64).pow(n as u32) > 1 << 16 {
                        continue;
                    }
                    assert_eq!(
                        count_torus(&t, &f, k, &budget()).unwrap(),
                        naive_count(&t, &f, k),
                        "p={p} a={a} k={k} f={:?}",
                        f.support()
                    );
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for (p, a, k) in [(2u64, 1usize, 2usize), (3, 1, 2), (5, 1, 1), (3, 2, 1)] {
            let t = FieldTower::new(p, a, k).unwrap();
            let lv = t.level(k);
            let mut counts = vec![0i64; p as usize];
            for x in t.elements(k) {
                counts[lv.abs_trace(x.idx) as usize] += 1;
            }
            let s = CycloInt::from_power_counts(p, &counts);
            assert!(s.is_zero(), "sum over F_{{q^k}} of zeta^Tr(t) vanishes");
        }
    }

    #[test]
    fn exp_sum_fast_equals_reference() {
        let mut rng = StdRng::seed_from_u64(4242);
        for (p, a) in [(3u64, 1usize), (5, 1), (2, 2), (3, 2)] {
            let t = FieldTower::new(p, a, 2).unwrap();
            let q = t.q();
            for _ in 0..5 {
                let n = rng.gen_range(1..=2usize);
                let nterms = rng.gen_range(1..=4usize);
                let raw: Vec<(Vec<i64>, FFElem)> = (0..nterms)
                    .map(|_| {
                        let exp: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2i64)).collect();
                        let c = t.elem(1, rng.gen_range(1..q) as u32);
                        (exp, c)
                    })
                    .collect();
                let Ok(f) = LaurentPoly::from_terms(&t, n, raw) else {
                    continue;
                };
                for k in 1..=2usize {
                    let fast = exp_sum(&t, Some(&f), n, k, &budget()).unwrap();
                    let slow = exp_sum_reference(&t, &f, k, &budget()).unwrap();
                    assert_eq!(
                        slow.as_integer(),
                        Some(fast as i64),
                        "the collapsed x0 sum must match the honest double loop"
                    );
                }
            }
        }
    }

    #[test]
    fn exp_sum_of_monomial() {
        // f = x1: S_k = -(q^k - 1)
        let t = FieldTower::new(5, 1, 2).unwrap();
        let f = parse_laurent("x1", &t).unwrap();
        for k in 1..=2 {
            let qk1 = t.level(k).n_units as i128;
            assert_eq!(exp_sum(&t, Some(&f), 1, k, &budget()).unwrap(), -qk1);
        }
        // f = 1 + x1, q = 5, k = 1: one torus zero, so S = 5*1 - 4 = 1
        let g = parse_laurent("1 + x1", &t).unwrap();
        assert_eq!(exp_sum(&t, Some(&g), 1, 1, &budget()).unwrap(), 1);
        let slow = exp_sum_reference(&t, &g, 1, &budget()).unwrap();
        assert_eq!(slow.as_integer(), Some(1));
    }

    #[test]
    fn lseries_of_monomial_is_rational_quotient() {
        // L(x0 x1, t) = (1 - q t)/(1 - t): coefficients 1, 1-q, 1-q, ...
        let t = FieldTower::new(5, 1, 4).unwrap();
        let f = parse_laurent("x1", &t).unwrap();
        let l = lfunction_series(&t, Some(&f), 1, 4, &budget()).unwrap();
        assert_eq!(l[0], BigInt::from(1));
        for c in &l[1..] {
            assert_eq!(c, &BigInt::from(1 - 5));
        }
    }

    #[test]
    fn affine_zeta_splits_as_torus_times_lseries() {
        // Z(U_f, qt) = Z(G_m^n, t) L(x0 f, t) coefficientwise, to order 3
        use crate::series;
        use num_rational::BigRational;
        let mut rng = StdRng::seed_from_u64(314);
        let order = 3usize;
        for p in [3u64, 5] {
            let t = FieldTower::new(p, 1, order).unwrap();
            for _ in 0..4 {
                let n = rng.gen_range(1..=2usize);
                let raw: Vec<(Vec<i64>, FFElem)> = (0..rng.gen_range(1..=4usize))
                    .map(|_| {
                        let exp: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2i64)).collect();
                        (exp, t.elem(1, rng.gen_range(1..p) as u32))
                    })
                    .collect();
                let Ok(f) = LaurentPoly::from_terms(&t, n, raw) else {
                    continue;
                };
                let q = p as i128;
                // LHS: exp(sum N_k (qt)^k / k)
                let mut s_left = vec![series::from_int(0)];
                for k in 1..=order {
                    let nk = count_torus(&t, &f, k, &budget()).unwrap() as i128;
                    s_left.push(series::from_int(nk * q.pow(k as u32)));
                }
                let lhs = series::exp_power_sums(&s_left);
                // RHS: exp(sum (q^k-1)^n t^k / k) times the L-series
                let mut s_torus = vec![series::from_int(0)];
                for k in 1..=order {
                    s_torus.push(series::from_int((q.pow(k as u32) - 1).pow(n as u32)));
                }
                let torus = series::exp_power_sums(&s_torus);
                let l: Vec<BigRational> = lfunction_series(&t, Some(&f), n, order, &budget())
                    .unwrap()
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect();
                assert_eq!(lhs, series::mul(&torus, &l), "f = {:?}", f.support());
            }
        }
    }

    #[test]
    fn closure_counts_line_and_point() {
        let t = FieldTower::new(5, 1, 2).unwrap();
        // f = 1 + x1: the closure is a single point for every k
        let f = parse_laurent("1 + x1", &t).unwrap();
        let np = newton_polytope(&f);
        for k in 1..=2 {
            let table = count_closure(&t, &f, &np, k, &budget()).unwrap();
            assert_eq!(table.closure, 1);
        }
        // f = x1 + x2: the closure is a projective line with q^k + 1 points
        let g = parse_laurent("x1 + x2", &t).unwrap();
        let np = newton_polytope(&g);
        for k in 1..=2u32 {
            let table = count_closure(&t, &g, &np, k as usize, &budget()).unwrap();
            assert_eq!(table.closure, 5u64.pow(k) + 1);
            assert!(table.closure >= table.torus_count);
        }
    }

    #[test]
    fn budget_refusal() {
        let t = FieldTower::new(13, 1, 4).unwrap();
        let f = parse_laurent("x1 + x2 + 1", &t).unwrap();
        let tight = Budget { max_points: 1000 };
        assert!(matches!(
            count_torus(&t, &f, 4, &tight),
            Err(CountError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn cyclo_ring_axioms() {
        let p = 5;
        let a = CycloInt::from_power_counts(p, &[1, 2, 0, 0, 3]);
        let b = CycloInt::from_power_counts(p, &[0, 1, 1, 4, 0]);
        let c = CycloInt::from_power_counts(p, &[2, 0, 1, 0, 1]);
        // commutativity and distributivity
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        // sum of all p-th roots of unity is zero
        let all = CycloInt::from_power_counts(p, &[1, 1, 1, 1, 1]);
        assert!(all.is_zero());
        // zeta * zeta^{p-1} = 1
        let z = CycloInt::from_power_counts(p, &[0, 1, 0, 0, 0]);
        let zt = CycloInt::from_power_counts(p, &[0, 0, 0, 0, 1]);
        assert_eq!(z.mul(&zt).as_integer(), Some(1));
    }
}
