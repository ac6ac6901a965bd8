//! Convex polygons in the plane with exact rational vertices: Newton
//! polygons of integer polynomials and Hodge polygons of graded dimension
//! vectors. Serialized as "num/den" strings so reports stay exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A lower-convex chain starting at (0,0): vertices have strictly increasing
/// x and nondecreasing slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub vertices: Vec<(BigRational, BigRational)>,
}

fn rat(n: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polygon {
    /// Lower convex hull of the given points (x strictly increasing input is
    /// not required; points are sorted). Points at the same x keep the
    /// lowest y.
    pub fn lower_hull(points: &[(BigRational, BigRational)]) -> Polygon {
        let mut pts: Vec<(BigRational, BigRational)> = points.to_vec();
        pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        pts.dedup_by(|a, b| a.0 == b.0); // keeps the first = lowest y per x
        let mut hull: Vec<(BigRational, BigRational)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let a = &hull[hull.len() - 2];
                let b = &hull[hull.len() - 1];
                // remove b when it lies on or above segment a-p
                let cross = (&b.0 - &a.0) * (&p.1 - &a.1) - (&p.0 - &a.0) * (&b.1 - &a.1);
                if cross.is_positive() {
                    break;
                }
                hull.pop();
            }
            hull.push(p);
        }
        Polygon { vertices: hull }
    }

    /// Polygon of a dimension vector h(0..len-1): vertices are the partial
    /// sums (sum h(k), sum k h(k)), consecutive duplicates removed.
    pub fn from_dimension_vector(h: &[usize]) -> Polygon {
        let mut verts = vec![(rat(0), rat(0))];
        let mut x = 0i128;
        let mut y = 0i128;
        for (k, &hk) in h.iter().enumerate() {
            x += hk as i128;
            y += (k as i128) * hk as i128;
            let v = (rat(x), rat(y));
            if verts.last() != Some(&v) {
                verts.push(v);
            }
        }
        let poly = Polygon { vertices: verts };
        debug_assert!(poly.is_lower_convex(), "slopes must be nondecreasing");
        poly
    }

    pub fn is_lower_convex(&self) -> bool {
        let v = &self.vertices;
        for w in v.windows(2) {
            if w[0].0 >= w[1].0 {
                return false;
            }
        }
        for w in v.windows(3) {
            let s1 = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
            let s2 = (&w[2].1 - &w[1].1) / (&w[2].0 - &w[1].0);
            if s1 > s2 {
                return false;
            }
        }
        true
    }

    pub fn start(&self) -> &(BigRational, BigRational) {
        &self.vertices[0]
    }

    pub fn end(&self) -> &(BigRational, BigRational) {
        self.vertices.last().unwrap()
    }

    /// Height of the chain at abscissa x (linear interpolation); None
    /// outside the span.
    pub fn height_at(&self, x: &BigRational) -> Option<BigRational> {
        let v = &self.vertices;
        if v.is_empty() || x < &v[0].0 || x > &v[v.len() - 1].0 {
            return None;
        }
        for w in v.windows(2) {
            if x >= &w[0].0 && x <= &w[1].0 {
                if w[0].0 == w[1].0 {
                    return Some(w[0].1.clone());
                }
                let t = (x - &w[0].0) / (&w[1].0 - &w[0].0);
                return Some(&w[0].1 + t * (&w[1].1 - &w[0].1));
            }
        }
        Some(v[v.len() - 1].1.clone())
    }

    /// Single-point polygon (0,0) for width-zero data.
    pub fn trivial() -> Polygon {
        Polygon {
            vertices: vec![(rat(0), rat(0))],
        }
    }
}

fn rational_to_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_from_string(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => Some(BigRational::new(n.parse().ok()?, d.parse().ok()?)),
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl Serialize for Polygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[String; 2]> = self
            .vertices
            .iter()
            .map(|(x, y)| [rational_to_string(x), rational_to_string(y)])
            .collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<[String; 2]> = Vec::deserialize(deserializer)?;
        let vertices = raw
            .iter()
            .map(|[x, y]| Some((rational_from_string(x)?, rational_from_string(y)?)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| D::Error::custom("bad rational"))?;
        Ok(Polygon { vertices })
    }
}

/// Newton polygon of an integer polynomial with A_0 = 1: lower hull of the
/// points (m, ord_p(A_m)/a); zero coefficients are skipped.
pub fn newton_polygon(coeffs: &[BigInt], p: u64, a: usize) -> Polygon {
    let mut pts = Vec::new();
    for (m, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut v = 0i128;
        let mut x = c.clone();
        let pb = BigInt::from(p);
        while (&x % &pb).is_zero() {
            x /= &pb;
            v += 1;
        }
        pts.push((
            rat(m as i128),
            BigRational::new(BigInt::from(v), BigInt::from(a as i128)),
        ));
    }
    Polygon::lower_hull(&pts)
}
