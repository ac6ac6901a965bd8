//! The Newton polytope of a Laurent polynomial, its face lattice, the
//! simplex hyperplane matrix, normalized volumes, the alternating-sum degree
//! formula, and lattice-point enumeration in the cone over 1 x polytope.
//!
//! All arithmetic is exact integer/rational; no floating point.

use crate::laurent::LaurentPoly;
use crate::linalg::{
    det_i128, integer_kernel, primitive, rank_i128, rational_from_i128, solve_rational,
};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

/// Hard cap on box enumeration in [`lattice_points`].
const BOX_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("the Newton polytope is not an n-dimensional simplex")]
    NotSimplex,
    #[error("the Newton polytope has dimension {dim} < n = {n}")]
    DegeneratePolytope { dim: usize, n: usize },
    #[error("subset does not describe a face")]
    NotAFace,
    #[error("lattice enumeration box exceeds the internal budget")]
    BoxBudget,
}

/// A face described by the linear forms (on the lifted exponent (1, j)) that
/// vanish on it. For a simplex face this is the subset A of hyperplane
/// indices; the big face has no equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceData {
    pub dim: usize,
    /// A as a bitmask over hyperplane indices 0..=n (simplex case only)
    pub subset: Option<u32>,
    /// ids into the polytope's vertex list, ascending
    pub vertex_ids: Vec<usize>,
    /// forms w with w . (1, j) = 0 on the face and >= 0 on the polytope
    pub eqs: Vec<Vec<i128>>,
}

impl FaceData {
    pub fn contains_exponent(&self, j: &[i64]) -> bool {
        self.eqs.iter().all(|w| eval_form(w, 1, j) == 0)
    }
}

#[inline]
pub fn eval_form(w: &[i128], r: i64, m: &[i64]) -> i128 {
    let mut s = w[0] * r as i128;
    for (wi, &mi) in w[1..].iter().zip(m.iter()) {
        s += wi * mi as i128;
    }
    s
}

/// Geometry of an n-dimensional simplex Newton polytope.
#[derive(Debug)]
pub struct SimplexGeometry {
    pub n: usize,
    /// n+1 vertices, lexicographically sorted
    pub vertices: Vec<Vec<i64>>,
    pub origin_is_vertex: bool,
    /// true when the origin lies strictly inside the polytope
    pub origin_interior: bool,
    /// rows a_i: primitive integer normal of H_i, positive on (1, v_i)
    pub hyperplane_matrix: Vec<Vec<i128>>,
    pub det: i128,
    faces: Vec<FaceData>,
}

/// A full-dimensional Newton polytope that is not a simplex.
#[derive(Debug)]
pub struct GeneralPolytope {
    pub n: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub faces: Vec<FaceData>,
}

/// Report for polytopes of dimension < n.
#[derive(Debug, Serialize)]
pub struct DegenerateReport {
    pub n: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

#[derive(Debug)]
pub enum NewtonPolytope {
    Simplex(SimplexGeometry),
    General(GeneralPolytope),
    Degenerate(DegenerateReport),
}

impl NewtonPolytope {
    pub fn is_simplex(&self) -> bool {
        matches!(self, NewtonPolytope::Simplex(_))
    }

    pub fn as_simplex(&self) -> Result<&SimplexGeometry, GeomError> {
        match self {
            NewtonPolytope::Simplex(s) => Ok(s),
            NewtonPolytope::General(_) => Err(GeomError::NotSimplex),
            NewtonPolytope::Degenerate(d) => {
                Err(GeomError::DegeneratePolytope { dim: d.dim, n: d.n })
            }
        }
    }

    /// Nonempty faces (the whole polytope included), every dimension.
    pub fn faces(&self) -> Result<&[FaceData], GeomError> {
        match self {
            NewtonPolytope::Simplex(s) => Ok(&s.faces),
            NewtonPolytope::General(g) => Ok(&g.faces),
            NewtonPolytope::Degenerate(d) => {
                Err(GeomError::DegeneratePolytope { dim: d.dim, n: d.n })
            }
        }
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        match self {
            NewtonPolytope::Simplex(s) => &s.vertices,
            NewtonPolytope::General(g) => &g.vertices,
            NewtonPolytope::Degenerate(d) => &d.vertices,
        }
    }
}

/// Convex hull of the support of f together with the origin.
pub fn newton_polytope(f: &LaurentPoly) -> NewtonPolytope {
    let n = f.n;
    let mut points: Vec<Vec<i64>> = f.support();
    if !points.iter().any(|p| p.iter().all(|&c| c == 0)) {
        points.push(vec![0; n]);
    }
    let dim = {
        let rows: Vec<Vec<i128>> = points
            .iter()
            .map(|p| p.iter().map(|&c| c as i128).collect())
            .collect();
        rank_i128(&rows)
    };
    if dim < n {
        // hull vertices are still reported for diagnostics
        let mut verts = hull_vertices_low_dim(&points);
        verts.sort();
        return NewtonPolytope::Degenerate(DegenerateReport {
            n,
            dim,
            vertices: verts,
        });
    }
    let (facets, faces, vertices) = enumerate_faces(&points, n);
    let _ = facets;
    if vertices.len() == n + 1 {
        let simplex = simplex_from_vertices(n, vertices);
        NewtonPolytope::Simplex(simplex)
    } else {
        NewtonPolytope::General(GeneralPolytope {
            n,
            dim,
            vertices,
            faces,
        })
    }
}

/// For dim < n we only need the vertex set: a point is a vertex iff it is
/// not a rational convex combination of the others.
fn hull_vertices_low_dim(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut verts = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let others: Vec<&Vec<i64>> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q)
            .collect();
        if !in_convex_hull(p, &others) {
            verts.push(p.clone());
        }
    }
    verts
}

/// Exact membership of p in conv(others) by solving for barycentric weights
/// with a simplex-free feasibility search (small point sets only).
fn in_convex_hull(p: &[i64], others: &[&Vec<i64>]) -> bool {
    // Work over every affinely independent subset: p is in the hull iff it
    // is a convex combination of some (dim+1)-subset (Caratheodory).
    let n = p.len();
    let m = others.len();
    if m == 0 {
        return false;
    }
    let max_size = (n + 1).min(m);
    let mut subset = Vec::new();
    fn rec(
        others: &[&Vec<i64>],
        p: &[i64],
        start: usize,
        subset: &mut Vec<usize>,
        max_size: usize,
    ) -> bool {
        if !subset.is_empty() && convex_comb_of(p, others, subset) {
            return true;
        }
        if subset.len() == max_size {
            return false;
        }
        for i in start..others.len() {
            subset.push(i);
            if rec(others, p, i + 1, subset, max_size) {
                return true;
            }
            subset.pop();
        }
        false
    }
    rec(others, p, 0, &mut subset, max_size)
}

fn convex_comb_of(p: &[i64], others: &[&Vec<i64>], subset: &[usize]) -> bool {
    let n = p.len();
    let k = subset.len();
    // rows: affine condition then coordinates
    let mut a = vec![vec![BigRational::zero(); k]; n + 1];
    let mut b = vec![BigRational::zero(); n + 1];
    for (col, &si) in subset.iter().enumerate() {
        a[0][col] = rational_from_i128(1);
        for r in 0..n {
            a[r + 1][col] = rational_from_i128(others[si][r] as i128);
        }
    }
    b[0] = rational_from_i128(1);
    for r in 0..n {
        b[r + 1] = rational_from_i128(p[r] as i128);
    }
    match solve_rational(&a, &b) {
        Some(lam) => lam.iter().all(|l| !l.is_negative()),
        None => false,
    }
}

/// Facet + face enumeration for a full-dimensional polytope given by points.
/// Returns (facet forms, all nonempty faces sorted by descending dimension,
/// hull vertices lex-sorted).
#[allow(clippy::type_complexity)]
fn enumerate_faces(
    points: &[Vec<i64>],
    n: usize,
) -> (Vec<Vec<i128>>, Vec<FaceData>, Vec<Vec<i64>>) {
    let m = points.len();
    let mut facet_forms: Vec<Vec<i128>> = Vec::new();
    let mut subset = vec![0usize; n];
    // scan all n-subsets of points for supporting hyperplanes
    fn scan(
        points: &[Vec<i64>],
        n: usize,
        start: usize,
        depth: usize,
        subset: &mut Vec<usize>,
        out: &mut Vec<Vec<i128>>,
    ) {
        if depth == n {
            let rows: Vec<Vec<i128>> = subset
                .iter()
                .map(|&i| {
                    let mut r = vec![1i128];
                    r.extend(points[i].iter().map(|&c| c as i128));
                    r
                })
                .collect();
            let ker = integer_kernel(&rows, n + 1);
            if ker.len() != 1 {
                return; // not affinely independent
            }
            let mut w = primitive(&ker[0]);
            let mut pos = false;
            let mut neg = false;
            for p in points.iter() {
                let s = eval_form(&w, 1, p);
                if s > 0 {
                    pos = true;
                } else if s < 0 {
                    neg = true;
                }
            }
            if pos && neg {
                return; // not supporting
            }
            if neg {
                for c in w.iter_mut() {
                    *c = -*c;
                }
            }
            if !out.contains(&w) {
                out.push(w);
            }
            return;
        }
        for i in start..points.len() {
            subset[depth] = i;
            scan(points, n, i + 1, depth + 1, subset, out);
        }
    }
    scan(points, n, 0, 0, &mut subset, &mut facet_forms);
    facet_forms.sort();

    // on-sets of the facets
    let on_set = |w: &[i128]| -> Vec<usize> {
        (0..m)
            .filter(|&i| eval_form(w, 1, &points[i]) == 0)
            .collect()
    };
    let facet_onsets: Vec<Vec<usize>> = facet_forms.iter().map(|w| on_set(w)).collect();

    // close under intersection to get the full face lattice
    let all: Vec<usize> = (0..m).collect();
    let mut onsets: Vec<Vec<usize>> = vec![all];
    let mut queue = 0;
    while queue < onsets.len() {
        let cur = onsets[queue].clone();
        queue += 1;
        for fo in &facet_onsets {
            let inter: Vec<usize> = cur.iter().copied().filter(|i| fo.contains(i)).collect();
            if !inter.is_empty() && !onsets.contains(&inter) {
                onsets.push(inter);
            }
        }
    }

    let affine_dim = |ids: &[usize]| -> usize {
        let rows: Vec<Vec<i128>> = ids
            .iter()
            .map(|&i| {
                let mut r = vec![1i128];
                r.extend(points[i].iter().map(|&c| c as i128));
                r
            })
            .collect();
        rank_i128(&rows) - 1
    };

    // vertices: 0-dimensional faces
    let mut vertex_points: Vec<Vec<i64>> = onsets
        .iter()
        .filter(|ids| affine_dim(ids) == 0)
        .map(|ids| points[ids[0]].clone())
        .collect();
    vertex_points.sort();
    vertex_points.dedup();

    let vid_of = |pt: &Vec<i64>| vertex_points.iter().position(|v| v == pt);

    let mut faces: Vec<FaceData> = onsets
        .iter()
        .map(|ids| {
            let dim = affine_dim(ids);
            let eqs: Vec<Vec<i128>> = facet_forms
                .iter()
                .zip(&facet_onsets)
                .filter(|(_, fo)| ids.iter().all(|i| fo.contains(i)))
                .map(|(w, _)| w.clone())
                .collect();
            let mut vertex_ids: Vec<usize> =
                ids.iter().filter_map(|&i| vid_of(&points[i])).collect();
            vertex_ids.sort_unstable();
            vertex_ids.dedup();
            FaceData {
                dim,
                subset: None,
                vertex_ids,
                eqs,
            }
        })
        .collect();
    faces.sort_by(|a, b| b.dim.cmp(&a.dim).then(a.vertex_ids.cmp(&b.vertex_ids)));
    (facet_forms, faces, vertex_points)
}

/// Build the geometry of an n-simplex from its vertex list (sorted here);
/// used both for Newton polytopes and for face polytopes in their own
/// coordinates.
pub fn simplex_from_vertices(n: usize, mut vertices: Vec<Vec<i64>>) -> SimplexGeometry {
    assert_eq!(vertices.len(), n + 1);
    vertices.sort();
    let origin = vec![0i64; n];
    let origin_is_vertex = vertices.contains(&origin);
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let others: Vec<Vec<i128>> = (0..=n)
            .filter(|&j| j != i)
            .map(|j| {
                let mut r = vec![1i128];
                r.extend(vertices[j].iter().map(|&c| c as i128));
                r
            })
            .collect();
        let ker = integer_kernel(&others, n + 1);
        assert_eq!(ker.len(), 1, "simplex hyperplane must be unique");
        let mut w = primitive(&ker[0]);
        let s = eval_form(&w, 1, &vertices[i]);
        assert!(s != 0, "normal cannot vanish on the opposite vertex");
        if s < 0 {
            for c in w.iter_mut() {
                *c = -*c;
            }
        }
        rows.push(w);
    }
    let det = det_i128(&rows);
    assert!(det != 0, "hyperplane normals must form a basis");
    // origin interior iff every form is positive at (1, 0)
    let origin_interior = rows.iter().all(|w| w[0] > 0);
    let full = (1u32 << (n + 1)) - 1;
    let mut faces = Vec::new();
    for a in 0..full {
        // subset A corresponds to the face spanned by vertices not in A
        let dim = n - (a.count_ones() as usize);
        let vertex_ids: Vec<usize> = (0..=n).filter(|&j| a & (1 << j) == 0).collect();
        let eqs: Vec<Vec<i128>> = (0..=n)
            .filter(|&i| a & (1 << i) != 0)
            .map(|i| rows[i].clone())
            .collect();
        faces.push(FaceData {
            dim,
            subset: Some(a),
            vertex_ids,
            eqs,
        });
    }
    faces.sort_by(|x, y| {
        y.dim
            .cmp(&x.dim)
            .then(x.subset.unwrap().cmp(&y.subset.unwrap()))
    });
    SimplexGeometry {
        n,
        vertices,
        origin_is_vertex,
        origin_interior,
        hyperplane_matrix: rows,
        det,
        faces,
    }
}

impl SimplexGeometry {
    /// All nonempty faces, big face (A = empty set) first.
    pub fn faces(&self) -> &[FaceData] {
        &self.faces
    }

    pub fn face_by_subset(&self, mask: u32) -> Result<&FaceData, GeomError> {
        self.faces
            .iter()
            .find(|f| f.subset == Some(mask))
            .ok_or(GeomError::NotAFace)
    }

    /// The full subset S = {0..n} as a mask (the apex, not a face of the
    /// polytope; by convention its normalized volume is 1).
    pub fn full_mask(&self) -> u32 {
        (1u32 << (self.n + 1)) - 1
    }

    pub fn check_p_det(&self, p: u64) -> bool {
        (self.det.unsigned_abs() % p as u128) != 0
    }

    /// Normalized lattice volume (n+1-|A|)! Vol of the cone slice over the
    /// face of A, computed in the saturated lattice of the face span.
    pub fn normalized_volume(&self, mask: u32) -> Result<i128, GeomError> {
        if mask > self.full_mask() {
            return Err(GeomError::NotAFace);
        }
        if mask == self.full_mask() {
            return Ok(1);
        }
        let vids: Vec<usize> = (0..=self.n).filter(|&j| mask & (1 << j) == 0).collect();
        let verts: Vec<Vec<i64>> = vids.iter().map(|&j| self.vertices[j].clone()).collect();
        let fc = face_coords(&verts);
        let d = fc.dim;
        let mut mat = Vec::with_capacity(d + 1);
        for v in &verts {
            let w = fc.express(v).expect("vertex lies on its own face");
            let mut row = vec![1i128];
            row.extend(w);
            mat.push(row);
        }
        debug_assert_eq!(mat.len(), d + 1);
        Ok(det_i128(&mat).abs())
    }

    /// Alternating-sum degree formula over all subsets of S.
    pub fn zeta_degree(&self) -> Result<i128, GeomError> {
        let mut total = 0i128;
        for mask in 0..=self.full_mask() {
            let sign = if (mask.count_ones() & 1) == 0 { 1 } else { -1 };
            total += sign * self.normalized_volume(mask)?;
        }
        Ok(total)
    }

    /// Lattice points m with (r, m) in the cone, optionally off the
    /// hyperplanes in `off_mask`; lexicographic order.
    pub fn lattice_points(&self, r: i64, off_mask: u32) -> Result<Vec<Vec<i64>>, GeomError> {
        assert!(r >= 0);
        let n = self.n;
        let mut lo = vec![0i64; n];
        let mut hi = vec![0i64; n];
        for i in 0..n {
            let mn = self.vertices.iter().map(|v| v[i]).min().unwrap().min(0);
            let mx = self.vertices.iter().map(|v| v[i]).max().unwrap().max(0);
            lo[i] = mn * r;
            hi[i] = mx * r;
        }
        let mut cells = 1u64;
        for i in 0..n {
            cells = cells.saturating_mul((hi[i] - lo[i] + 1) as u64);
            if cells > BOX_BUDGET {
                return Err(GeomError::BoxBudget);
            }
        }
        let mut out = Vec::new();
        let mut m = lo.clone();
        'outer: loop {
            let inside = self.hyperplane_matrix.iter().enumerate().all(|(i, w)| {
                let s = eval_form(w, r, &m);
                if off_mask & (1 << i) != 0 {
                    s > 0
                } else {
                    s >= 0
                }
            });
            if inside {
                out.push(m.clone());
            }
            // lexicographic odometer
            for i in (0..n).rev() {
                if m[i] < hi[i] {
                    m[i] += 1;
                    for (ii, mm) in m.iter_mut().enumerate().skip(i + 1) {
                        *mm = lo[ii];
                    }
                    continue 'outer;
                }
                if i == 0 {
                    break 'outer;
                }
            }
            if n == 0 {
                break;
            }
        }
        Ok(out)
    }
}

/// The face polynomial in its own simplex coordinates, with the face's
/// geometry; None when the face misses the support (possible only for the
/// vertex at the origin, which the regularity condition does not constrain).
pub fn face_problem(
    f: &LaurentPoly,
    geo: &SimplexGeometry,
    mask: u32,
) -> Result<Option<(LaurentPoly, SimplexGeometry)>, GeomError> {
    let face = geo.face_by_subset(mask)?;
    let restricted = match f.restrict_to_face(face) {
        Ok(r) => r,
        Err(crate::laurent::LaurentError::EmptyRestriction) => return Ok(None),
        Err(e) => unreachable!("restriction only fails on empty faces: {e}"),
    };
    let verts: Vec<Vec<i64>> = face
        .vertex_ids
        .iter()
        .map(|&i| geo.vertices[i].clone())
        .collect();
    let fc = face_coords(&verts);
    let small = to_face_coords(&restricted, &fc);
    let face_verts: Vec<Vec<i64>> = verts
        .iter()
        .map(|v| {
            fc.express(v)
                .expect("vertex lies on its own face")
                .iter()
                .map(|&x| x as i64)
                .collect()
        })
        .collect();
    let face_geo = simplex_from_vertices(fc.dim, face_verts);
    Ok(Some((small, face_geo)))
}

/// Affine coordinates on a face: a base vertex plus a basis of the saturated
/// direction lattice Z^n meet span(face - base).
#[derive(Debug, Clone)]
pub struct FaceCoords {
    pub base: Vec<i64>,
    pub basis: Vec<Vec<i128>>,
    pub dim: usize,
}

impl FaceCoords {
    /// Coordinates of a lattice point of the face, if integral.
    pub fn express(&self, j: &[i64]) -> Option<Vec<i128>> {
        let n = self.base.len();
        let d = self.dim;
        if d == 0 {
            return if j == self.base.as_slice() {
                Some(vec![])
            } else {
                None
            };
        }
        let a: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                (0..d)
                    .map(|c| rational_from_i128(self.basis[c][r]))
                    .collect()
            })
            .collect();
        let b: Vec<BigRational> = (0..n)
            .map(|r| rational_from_i128(j[r] as i128 - self.base[r] as i128))
            .collect();
        let x = solve_rational(&a, &b)?;
        // verify consistency and integrality
        let mut out = Vec::with_capacity(d);
        for xi in &x {
            if !xi.is_integer() {
                return None;
            }
            let v: i128 = xi.to_integer().try_into().ok()?;
            out.push(v);
        }
        for r in 0..n {
            let mut s = self.base[r] as i128;
            for c in 0..d {
                s += out[c] * self.basis[c][r];
            }
            if s != j[r] as i128 {
                return None;
            }
        }
        Some(out)
    }
}

/// Build face coordinates from the face's vertex list: base = lex-smallest
/// vertex; basis = saturated lattice of the directions.
pub fn face_coords(face_vertices: &[Vec<i64>]) -> FaceCoords {
    let base = face_vertices.iter().min().unwrap().clone();
    let n = base.len();
    let dirs: Vec<Vec<i128>> = face_vertices
        .iter()
        .filter(|v| *v != &base)
        .map(|v| (0..n).map(|i| v[i] as i128 - base[i] as i128).collect())
        .collect();
    if dirs.is_empty() {
        return FaceCoords {
            base,
            basis: vec![],
            dim: 0,
        };
    }
    // orthogonal complement of the direction span, then its complement:
    // the result is the saturation of the direction lattice
    let w = integer_kernel(&dirs, n);
    let basis = if w.is_empty() {
        // directions span the whole space
        (0..n)
            .map(|i| {
                let mut e = vec![0i128; n];
                e[i] = 1;
                e
            })
            .collect()
    } else {
        integer_kernel(&w, n)
    };
    let dim = basis.len();
    debug_assert_eq!(dim, rank_i128(&dirs));
    FaceCoords { base, basis, dim }
}

/// Rewrite a face-restricted polynomial in the face's own torus coordinates
/// (dim-many variables). The dropped monomial factor x^base is a unit on the
/// torus, so zero sets and exponential sums are unchanged.
pub fn to_face_coords(f: &LaurentPoly, fc: &FaceCoords) -> LaurentPoly {
    let mut terms = std::collections::BTreeMap::new();
    for (exp, coeff) in &f.terms {
        let w = fc
            .express(exp)
            .expect("restricted exponent must lie on the face lattice");
        let key: Vec<i64> = w.iter().map(|&x| x as i64).collect();
        terms.insert(key, *coeff);
    }
    LaurentPoly { n: fc.dim, terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldTower;
    use crate::laurent::parse_laurent;

    fn f7() -> FieldTower {
        FieldTower::new(7, 1, 1).unwrap()
    }

    fn dwork2(t: &FieldTower) -> LaurentPoly {
        parse_laurent("x1 + x2 + x1^-1*x2^-1 + 1", t).unwrap()
    }

    #[test]
    fn segment_is_a_simplex() {
        let t = FieldTower::new(5, 1, 1).unwrap();
        let f = parse_laurent("1 + x1", &t).unwrap();
        let np = newton_polytope(&f);
        let s = np.as_simplex().unwrap();
        assert_eq!(s.n, 1);
        assert_eq!(s.vertices, vec![vec![0], vec![1]]);
        assert!(s.origin_is_vertex);
        assert_eq!(s.det.abs(), 1);
    }

    #[test]
    fn dwork_triangle_oracle() {
        // independent hull oracle: every support point checked against the
        // convex hull of the other three
        let t = f7();
        let g = dwork2(&t);
        let np = newton_polytope(&g);
        let s = np.as_simplex().unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(
            s.vertices,
            vec![vec![-1, -1], vec![0, 1], vec![1, 0]],
            "constant term is interior, three vertices remain"
        );
        assert!(!s.origin_is_vertex);
        assert!(s.origin_interior);
        assert_eq!(s.det.abs(), 9);
        // defining property: row i annihilates (1, v_j) for j != i and is
        // positive on (1, v_i)
        for i in 0..=2 {
            for j in 0..=2 {
                let v = eval_form(&s.hyperplane_matrix[i], 1, &s.vertices[j]);
                if i == j {
                    assert!(v > 0);
                } else {
                    assert_eq!(v, 0);
                }
            }
        }
        // the primitive normal opposite the vertex (1,0) is (1,2,-1)
        let row = &s.hyperplane_matrix[2];
        assert_eq!(row, &vec![1i128, 2, -1]);
    }

    #[test]
    fn square_is_not_a_simplex() {
        let t = f7();
        let f = parse_laurent("x1 + x2 + x1^-1 + x2^-1", &t).unwrap();
        let np = newton_polytope(&f);
        assert!(!np.is_simplex());
        match np {
            NewtonPolytope::General(g) => {
                assert_eq!(g.vertices.len(), 4);
                // 4 vertices + 4 edges + 1 big face
                assert_eq!(g.faces.len(), 9);
            }
            _ => panic!("expected a general polytope"),
        }
    }

    #[test]
    fn degenerate_polytope_reported() {
        let t = f7();
        let f = parse_laurent("x1 + x1^2", &t).unwrap();
        let np = newton_polytope(&f);
        assert!(np.is_simplex(), "segment [0, 2] in one variable");
        let g = parse_laurent("x2 + x2^2", &t).unwrap();
        assert_eq!(g.n, 2);
        match newton_polytope(&g) {
            NewtonPolytope::Degenerate(d) => {
                assert_eq!(d.dim, 1);
                assert_eq!(d.n, 2);
            }
            _ => panic!("expected degenerate"),
        }
    }

    #[test]
    fn simplex_face_counts_match_binomials() {
        let t = f7();
        let g = dwork2(&t);
        let s = newton_polytope(&g);
        let s = s.as_simplex().unwrap();
        // an n-simplex has C(n+1, d+1) faces of dimension d
        for d in 0..=2usize {
            let count = s.faces().iter().filter(|f| f.dim == d).count();
            let expected = num_integer::binomial(3u64, (d + 1) as u64);
            assert_eq!(count as u64, expected);
        }
        // Euler relation: alternating sum of face counts is (-1)^n + ... = 1
        // for the solid simplex including itself: sum_d (-1)^d #faces_d
        let euler: i64 = s
            .faces()
            .iter()
            .map(|f| if f.dim % 2 == 0 { 1i64 } else { -1 })
            .sum();
        assert_eq!(euler, 1);
    }

    #[test]
    fn volumes_dwork2() {
        let t = f7();
        let g = dwork2(&t);
        let np = newton_polytope(&g);
        let s = np.as_simplex().unwrap();
        assert_eq!(s.normalized_volume(0).unwrap(), 3, "full volume 2! * 3/2");
        for a in [0b001u32, 0b010, 0b100] {
            assert_eq!(s.normalized_volume(a).unwrap(), 1, "edges");
        }
        for a in [0b011u32, 0b101, 0b110] {
            assert_eq!(s.normalized_volume(a).unwrap(), 1, "vertex rays");
        }
        assert_eq!(s.normalized_volume(0b111).unwrap(), 1, "apex convention");
        assert_eq!(s.zeta_degree().unwrap(), 2, "3 - 3 + 3 - 1");
        assert!(s.check_p_det(7));
        assert!(!s.check_p_det(3));
    }

    #[test]
    fn volumes_dwork3_and_segment() {
        let t = FieldTower::new(5, 1, 1).unwrap();
        let g3 = parse_laurent("x1 + x2 + x3 + x1^-1*x2^-1*x3^-1 + 1", &t).unwrap();
        let np = newton_polytope(&g3);
        let s = np.as_simplex().unwrap();
        assert_eq!(s.normalized_volume(0).unwrap(), 4, "3! * 4/6");
        assert_eq!(s.zeta_degree().unwrap(), 3, "4 - 4 + 6 - 4 + 1");
        assert_eq!(s.det.abs(), 64);

        let f = parse_laurent("1 + x1", &t).unwrap();
        let seg = newton_polytope(&f);
        let seg = seg.as_simplex().unwrap();
        assert_eq!(seg.zeta_degree().unwrap(), 0, "1 - 2 + 1");
    }

    #[test]
    fn lattice_points_basics() {
        let t = f7();
        let g = dwork2(&t);
        let np = newton_polytope(&g);
        let s = np.as_simplex().unwrap();
        // r = 0: only the apex
        assert_eq!(s.lattice_points(0, 0).unwrap(), vec![vec![0, 0]]);
        // r = 0 off all hyperplanes: empty (the apex lies on every H_j)
        assert!(s.lattice_points(0, s.full_mask()).unwrap().is_empty());
        // r = 1: the four support points of the Dwork polynomial
        assert_eq!(s.lattice_points(1, 0).unwrap().len(), 4);
        // r = 1 interior: exactly the origin of the polytope at height 1
        assert_eq!(
            s.lattice_points(1, s.full_mask()).unwrap(),
            vec![vec![0, 0]]
        );
    }

    /// Independent Ehrhart oracle: membership via barycentric coordinates.
    fn barycentric_count(s: &SimplexGeometry, r: i64, interior: bool) -> u64 {
        let n = s.n;
        let mut lo = vec![0i64; n];
        let mut hi = vec![0i64; n];
        for i in 0..n {
            lo[i] = s.vertices.iter().map(|v| v[i]).min().unwrap().min(0) * r;
            hi[i] = s.vertices.iter().map(|v| v[i]).max().unwrap().max(0) * r;
        }
        let mut count = 0u64;
        let mut m = lo.clone();
        loop {
            // solve sum lambda_j (1, v_j) = (r, m)
            let mut a = vec![vec![BigRational::zero(); n + 1]; n + 1];
            let mut b = vec![BigRational::zero(); n + 1];
            for (col, v) in s.vertices.iter().enumerate() {
                a[0][col] = rational_from_i128(1);
                for row in 0..n {
                    a[row + 1][col] = rational_from_i128(v[row] as i128);
                }
            }
            b[0] = rational_from_i128(r as i128);
            for row in 0..n {
                b[row + 1] = rational_from_i128(m[row] as i128);
            }
            if let Some(lam) = solve_rational(&a, &b) {
                let ok = if interior {
                    lam.iter().all(|l| l.is_positive())
                } else {
                    lam.iter().all(|l| !l.is_negative())
                };
                if ok {
                    count += 1;
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return count;
                }
                i -= 1;
                if m[i] < hi[i] {
                    m[i] += 1;
                    for j in i + 1..n {
                        m[j] = lo[j];
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn ehrhart_reciprocity_on_dwork_triangle() {
        let t = f7();
        let g = dwork2(&t);
        let np = newton_polytope(&g);
        let s = np.as_simplex().unwrap();
        // counts for r = 0..5 from the hyperplane-form enumerator vs the
        // barycentric oracle, plus reciprocity via polynomial interpolation
        let mut totals = Vec::new();
        for r in 0..=5i64 {
            let total = s.lattice_points(r, 0).unwrap().len() as u64;
            let interior = s.lattice_points(r, s.full_mask()).unwrap().len() as u64;
            assert_eq!(total, barycentric_count(s, r, false), "r = {r}");
            assert_eq!(interior, barycentric_count(s, r, true), "r = {r}");
            totals.push((r, total, interior));
        }
        // interpolate L(r) from r = 0,1,2 (degree-2 Ehrhart polynomial)
        // L(r) = (3/2) r^2 + (3/2) r + 1 for this triangle
        for &(r, total, interior) in &totals {
            let rr = r;
            assert_eq!(2 * total as i64, 3 * rr * rr + 3 * rr + 2);
            if rr >= 1 {
                // reciprocity: I(r) = (-1)^n L(-r)
                assert_eq!(2 * interior as i64, 3 * rr * rr - 3 * rr + 2);
            } else {
                assert_eq!(interior, 0, "the apex lies on every hyperplane");
            }
        }
    }

    #[test]
    fn face_coords_saturated_basis() {
        // edge from (1,0) to (-1,-2): direction (-2,-2) = 2*(1,1); the
        // saturated lattice contains (1,1) and the midpoint (0,-1) is a
        // lattice point of the face
        let fc = face_coords(&[vec![1, 0], vec![-1, -2]]);
        assert_eq!(fc.dim, 1);
        let step: Vec<i128> = fc.basis[0].clone();
        assert_eq!(step.iter().map(|x| x.abs()).max(), Some(1));
        assert!(fc.express(&[0, -1]).is_some(), "midpoint is integral");
        assert!(fc.express(&[1, 0]).is_some());
        assert!(fc.express(&[2, 0]).is_none(), "off the face line");
    }

    #[test]
    fn restriction_and_face_coordinates() {
        let t = f7();
        let g = dwork2(&t);
        let np = newton_polytope(&g);
        let s = np.as_simplex().unwrap();
        // vertex face {v_2 = (1,0)}: A = {0,1}
        let face = s.face_by_subset(0b011).unwrap();
        let restricted = g.restrict_to_face(face).unwrap();
        assert_eq!(restricted.support(), vec![vec![1, 0]]);
        // edge between (0,1) and (1,0): A = {0}
        let edge = s.face_by_subset(0b001).unwrap();
        let restricted = g.restrict_to_face(edge).unwrap();
        assert_eq!(restricted.terms.len(), 2);
        let fc = face_coords(&[vec![0, 1], vec![1, 0]]);
        let small = to_face_coords(&restricted, &fc);
        assert_eq!(small.n, 1);
        assert_eq!(small.terms.len(), 2, "1 + u in face coordinates");
        // big face: restriction is the identity
        let big = s.face_by_subset(0).unwrap();
        assert_eq!(g.restrict_to_face(big).unwrap(), g);
        // restriction composition: restricting to the edge then to a vertex
        // equals restricting to the vertex
        let vertex = s.face_by_subset(0b011).unwrap();
        let via_edge = g
            .restrict_to_face(edge)
            .unwrap()
            .restrict_to_face(vertex)
            .unwrap();
        assert_eq!(via_edge, g.restrict_to_face(vertex).unwrap());
    }

    #[test]
    fn cone_membership_iff_all_forms_nonnegative() {
        let t = f7();
        let g = dwork2(&t);
        let np = newton_polytope(&g);
        let s = np.as_simplex().unwrap();
        for r in 0..=3i64 {
            for m1 in -4..=4i64 {
                for m2 in -4..=4i64 {
                    let m = vec![m1, m2];
                    let forms_ok = s.hyperplane_matrix.iter().all(|w| eval_form(w, r, &m) >= 0);
                    let bary = {
                        let mut a = vec![vec![BigRational::zero(); 3]; 3];
                        let mut b = vec![BigRational::zero(); 3];
                        for (col, v) in s.vertices.iter().enumerate() {
                            a[0][col] = rational_from_i128(1);
                            a[1][col] = rational_from_i128(v[0] as i128);
                            a[2][col] = rational_from_i128(v[1] as i128);
                        }
                        b[0] = rational_from_i128(r as i128);
                        b[1] = rational_from_i128(m1 as i128);
                        b[2] = rational_from_i128(m2 as i128);
                        solve_rational(&a, &b)
                            .map(|lam| lam.iter().all(|l| !l.is_negative()))
                            .unwrap_or(false)
                    };
                    assert_eq!(forms_ok, bary, "(r,m) = ({r},{m1},{m2})");
                }
            }
        }
    }
}
