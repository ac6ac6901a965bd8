//! Laurent polynomials over F_q: parsing, printing, evaluation on torus
//! points, and restriction to faces of the Newton polytope.
//!
//! Grammar accepted by [`parse_laurent`] (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := [coeff '*'] factor ('*' factor)*
//! factor := 'x' index ['^' signed-int] | coeff
//! coeff  := unsigned-int        (reduced mod p)
//! ```

use crate::ff::{FFElem, FieldTower};
use crate::geometry::FaceData;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Largest exponent magnitude accepted by the parser and builders.
pub const DEFAULT_EXPONENT_BOUND: i64 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("syntax error at position {pos}: {what}")]
    SyntaxError { pos: usize, what: &'static str },
    #[error("all terms cancel: the zero polynomial is not representable")]
    ZeroPolynomial,
    #[error("bad variable index {0} (indices start at 1)")]
    BadVariable(usize),
    #[error("exponent {0} exceeds the configured bound {1}")]
    ExponentOverflow(i64, i64),
    #[error("evaluation point has a zero coordinate (position {0})")]
    ZeroCoordinate(usize),
    #[error("point dimension {got} does not match the polynomial's {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("restriction to this face keeps no term")]
    EmptyRestriction,
}

/// A finitely supported exponent-vector -> nonzero-coefficient map.
/// Coefficients live in the base field F_q of the tower that created them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<i64>, FFElem>,
}

impl LaurentPoly {
    /// Combine raw terms, drop zero coefficients, reject the zero polynomial.
    pub fn from_terms(
        tower: &FieldTower,
        n: usize,
        raw: impl IntoIterator<Item = (Vec<i64>, FFElem)>,
    ) -> Result<Self, LaurentError> {
        let mut terms: BTreeMap<Vec<i64>, FFElem> = BTreeMap::new();
        for (exp, coeff) in raw {
            assert_eq!(exp.len(), n, "exponent arity mismatch");
            for &e in &exp {
                if e.abs() > DEFAULT_EXPONENT_BOUND {
                    return Err(LaurentError::ExponentOverflow(e, DEFAULT_EXPONENT_BOUND));
                }
            }
            match terms.entry(exp) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    if coeff.idx != 0 {
                        v.insert(coeff);
                    }
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = tower.add(*o.get(), coeff).expect("same field");
                    if s.idx == 0 {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
        if terms.is_empty() {
            return Err(LaurentError::ZeroPolynomial);
        }
        Ok(LaurentPoly { n, terms })
    }

    /// Exponent support.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    /// Evaluate at a torus point of F_{q^k}; all coordinates must be nonzero.
    pub fn evaluate(
        &self,
        tower: &FieldTower,
        k: usize,
        pt: &[FFElem],
    ) -> Result<FFElem, LaurentError> {
        if pt.len() != self.n {
            return Err(LaurentError::DimensionMismatch {
                got: pt.len(),
                want: self.n,
            });
        }
        let lv = tower.level(k);
        let mut logs = Vec::with_capacity(self.n);
        for (i, x) in pt.iter().enumerate() {
            let l = lv
                .log_of(x.idx)
                .ok_or(LaurentError::ZeroCoordinate(i + 1))?;
            logs.push(l as i128);
        }
        let nn = lv.n_units as i128;
        let mut acc = 0u32;
        for (exp, coeff) in &self.terms {
            let c = tower.embed_base(*coeff, k).expect("base coefficient");
            let cl = lv.log_of(c.idx).expect("nonzero coefficient") as i128;
            let mut e = cl;
            for (j, &l) in exp.iter().zip(logs.iter()) {
                e += *j as i128 * l;
            }
            acc = lv.add(acc, lv.pow_of_generator(e.rem_euclid(nn) as u32));
        }
        Ok(FFElem {
            degree: lv.d,
            idx: acc,
        })
    }

    /// Keep exactly the terms whose lifted exponent (1, j) lies on the face.
    pub fn restrict_to_face(&self, face: &FaceData) -> Result<LaurentPoly, LaurentError> {
        let terms: BTreeMap<Vec<i64>, FFElem> = self
            .terms
            .iter()
            .filter(|(exp, _)| face.contains_exponent(exp))
            .map(|(e, c)| (e.clone(), *c))
            .collect();
        if terms.is_empty() {
            return Err(LaurentError::EmptyRestriction);
        }
        Ok(LaurentPoly { n: self.n, terms })
    }

    /// x_i d/dx_i applied to the polynomial; None when every coefficient
    /// j_i * a_j vanishes.
    pub fn log_derivative(&self, tower: &FieldTower, i: usize) -> Option<LaurentPoly> {
        let mut terms = BTreeMap::new();
        for (exp, coeff) in &self.terms {
            let ji = exp[i].rem_euclid(tower.p as i64) as u64;
            if ji == 0 {
                continue;
            }
            let c = tower.mul(*coeff, tower.scalar(ji)).expect("base field");
            if c.idx != 0 {
                terms.insert(exp.clone(), c);
            }
        }
        if terms.is_empty() {
            None
        } else {
            Some(LaurentPoly { n: self.n, terms })
        }
    }

    /// Render with coefficients shown as residues when they lie in the prime
    /// subfield and as generator powers g^l otherwise.
    pub fn display<'a>(&'a self, tower: &'a FieldTower) -> LaurentDisplay<'a> {
        LaurentDisplay { poly: self, tower }
    }
}

pub struct LaurentDisplay<'a> {
    poly: &'a LaurentPoly,
    tower: &'a FieldTower,
}

impl fmt::Display for LaurentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.tower.p as u32;
        let mut first = true;
        for (exp, coeff) in &self.poly.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_const = exp.iter().all(|&e| e == 0);
            let coeff_str = if coeff.idx < p {
                format!("{}", coeff.idx)
            } else {
                let l = self.tower.level(1).log_of(coeff.idx).unwrap();
                format!("g^{}", l)
            };
            let unit_coeff = coeff.idx == 1;
            if is_const {
                write!(f, "{}", coeff_str)?;
                continue;
            }
            let mut wrote = false;
            if !unit_coeff {
                write!(f, "{}", coeff_str)?;
                wrote = true;
            }
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                if e == 1 {
                    write!(f, "x{}", i + 1)?;
                } else {
                    write!(f, "x{}^{}", i + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, what: &'static str) -> LaurentError {
        LaurentError::SyntaxError {
            pos: self.pos,
            what,
        }
    }

    fn unsigned_int(&mut self) -> Result<u64, LaurentError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer too large"))
    }

    fn signed_int(&mut self) -> Result<i64, LaurentError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = self.unsigned_int()? as i64;
        Ok(if neg { -v } else { v })
    }

    /// factor := 'x' index ['^' signed-int] | coeff
    /// Returns either a (variable, exponent) pair or a constant.
    fn factor(&mut self) -> Result<Factor, LaurentError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let idx_pos = self.pos;
                let idx = self.unsigned_int().map_err(|_| LaurentError::SyntaxError {
                    pos: idx_pos,
                    what: "expected a variable index after 'x'",
                })? as usize;
                if idx == 0 {
                    return Err(LaurentError::BadVariable(0));
                }
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.signed_int()?
                } else {
                    1
                };
                if exp.abs() > DEFAULT_EXPONENT_BOUND {
                    return Err(LaurentError::ExponentOverflow(exp, DEFAULT_EXPONENT_BOUND));
                }
                Ok(Factor::Var(idx, exp))
            }
            Some(c) if c.is_ascii_digit() => Ok(Factor::Const(self.unsigned_int()?)),
            _ => Err(self.err("expected a factor")),
        }
    }

    /// term := factor ('*' factor)*
    fn term(&mut self) -> Result<(u64, BTreeMap<usize, i64>), LaurentError> {
        let mut coeff = 1u64;
        let mut vars: BTreeMap<usize, i64> = BTreeMap::new();
        loop {
            match self.factor()? {
                Factor::Const(c) => coeff = coeff.wrapping_mul(c),
                Factor::Var(i, e) => *vars.entry(i).or_insert(0) += e,
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coeff, vars))
    }
}

enum Factor {
    Var(usize, i64),
    Const(u64),
}

/// Parse the grammar above; the number of variables is the largest index
/// used. A leading sign is tolerated as a convenience.
pub fn parse_laurent(text: &str, tower: &FieldTower) -> Result<LaurentPoly, LaurentError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut raw: Vec<(u64, BTreeMap<usize, i64>, bool)> = Vec::new();
    let mut negate = match p.peek() {
        Some(b'-') => {
            p.pos += 1;
            true
        }
        Some(b'+') => {
            p.pos += 1;
            false
        }
        _ => false,
    };
    loop {
        let (coeff, vars) = p.term()?;
        raw.push((coeff, vars, negate));
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                negate = false;
            }
            Some(b'-') => {
                p.pos += 1;
                negate = true;
            }
            Some(_) => return Err(p.err("expected '+', '-' or end of input")),
        }
    }
    let n = raw
        .iter()
        .flat_map(|(_, vars, _)| vars.keys().copied())
        .max()
        .unwrap_or(0);
    let mut terms = Vec::with_capacity(raw.len());
    for (coeff, vars, neg) in raw {
        let mut exp = vec![0i64; n];
        for (i, e) in vars {
            exp[i - 1] = e;
        }
        let mut c = tower.scalar(coeff);
        if neg {
            c = tower.sub(tower.scalar(0), c).unwrap();
        }
        terms.push((exp, c));
    }
    // n = 0 happens for pure constants; keep a single empty exponent vector
    LaurentPoly::from_terms(tower, n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> FieldTower {
        FieldTower::new(7, 1, 2).unwrap()
    }

    #[test]
    fn parse_dwork_like_support() {
        let t = f7();
        let f = parse_laurent("x1 + x2 + x1^-1*x2^-1 + 3", &t).unwrap();
        assert_eq!(f.n, 2);
        let sup = f.support();
        assert_eq!(sup.len(), 4);
        assert!(sup.contains(&vec![1, 0]));
        assert!(sup.contains(&vec![0, 1]));
        assert!(sup.contains(&vec![-1, -1]));
        assert!(sup.contains(&vec![0, 0]));
    }

    #[test]
    fn parse_cancellation() {
        let t = f7();
        let f = parse_laurent("x1 + 6*x1 + 1", &t).unwrap();
        assert_eq!(f.support(), vec![vec![0]]);
        assert_eq!(f.terms[&vec![0]].idx, 1);
    }

    #[test]
    fn parse_zero_polynomial() {
        let t = FieldTower::new(5, 1, 1).unwrap();
        assert_eq!(
            parse_laurent("x1^3 - x1^3", &t).unwrap_err(),
            LaurentError::ZeroPolynomial
        );
    }

    #[test]
    fn parse_rejects_x0_and_garbage() {
        let t = f7();
        assert_eq!(
            parse_laurent("x0 + 1", &t).unwrap_err(),
            LaurentError::BadVariable(0)
        );
        assert!(matches!(
            parse_laurent("x1 + * 3", &t).unwrap_err(),
            LaurentError::SyntaxError { .. }
        ));
        assert!(matches!(
            parse_laurent("x1 ^ 99", &t).unwrap_err(),
            LaurentError::ExponentOverflow(99, _)
        ));
    }

    #[test]
    fn evaluate_basics() {
        let t5 = FieldTower::new(5, 1, 1).unwrap();
        let f = parse_laurent("1 + x1", &t5).unwrap();
        let at4 = f.evaluate(&t5, 1, &[t5.elem(1, 4)]).unwrap();
        assert_eq!(at4.idx, 0, "1 + 4 = 0 in F_5");
        let at1 = f.evaluate(&t5, 1, &[t5.elem(1, 1)]).unwrap();
        assert_eq!(at1.idx, 2);
        assert_eq!(
            f.evaluate(&t5, 1, &[t5.zero(1)]).unwrap_err(),
            LaurentError::ZeroCoordinate(1)
        );
    }

    #[test]
    fn evaluate_dwork_at_ones() {
        let t = f7();
        let g = parse_laurent("x1 + x2 + x1^-1*x2^-1 + 1", &t).unwrap();
        let one = t.one(1);
        let v = g.evaluate(&t, 1, &[one, one]).unwrap();
        assert_eq!(v.idx, 4, "1+1+1+1 = 4");
    }

    #[test]
    fn evaluate_is_additive() {
        let t = f7();
        let f = parse_laurent("x1 + 2*x2", &t).unwrap();
        let g = parse_laurent("3*x1^-1 + x2 + 5", &t).unwrap();
        let sum = parse_laurent("x1 + 3*x2 + 3*x1^-1 + 5", &t).unwrap();
        for xi in 1..7u32 {
            for yi in 1..7u32 {
                let pt = [t.elem(1, xi), t.elem(1, yi)];
                let lhs = t
                    .add(
                        f.evaluate(&t, 1, &pt).unwrap(),
                        g.evaluate(&t, 1, &pt).unwrap(),
                    )
                    .unwrap();
                assert_eq!(lhs, sum.evaluate(&t, 1, &pt).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(raw in proptest::collection::vec(
            (proptest::collection::vec(-3i64..=3, 2), 1u64..7), 1..6)) {
            let t = f7();
            let terms: Vec<(Vec<i64>, crate::ff::FFElem)> = raw
                .into_iter()
                .map(|(e, c)| (e, t.scalar(c)))
                .collect();
            if let Ok(f) = LaurentPoly::from_terms(&t, 2, terms) {
                let text = f.display(&t).to_string();
                let back = parse_laurent(&text, &t).unwrap();
                // parsing infers n from the largest used index; pad back up
                prop_assert_eq!(&f.terms.len(), &back.terms.len());
                for (exp, coeff) in &back.terms {
                    let mut padded = exp.clone();
                    padded.resize(2, 0);
                    prop_assert_eq!(f.terms.get(&padded).map(|c| c.idx), Some(coeff.idx));
                }
            }
        }
    }
}
