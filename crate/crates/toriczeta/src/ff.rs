//! Exact arithmetic in F_q = F_{p^a} and its extensions F_{q^k}.
//!
//! A [`FieldTower`] realizes every F_{p^{a*k}} for k up to a configured bound
//! as F_p[X]/(m_d) with a deterministically chosen monic irreducible m_d, and
//! carries an explicit embedding F_{p^a} -> F_{p^{a*k}} per level. Elements
//! are stored as packed base-p coefficient vectors; multiplication goes
//! through discrete-log tables built once per level, so the tower is cheap to
//! use but bounded in size (`p^{a*k} <= cap`).

use thiserror::Error;

/// Default bound on the largest realized field, p^{a*k_max}.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field F_{{{p}^{d}}} exceeds the enumeration cap {cap}")]
    DegreeOverflow { p: u64, d: usize, cap: u64 },
    #[error("element of F_{{p^{have}}} where a field of degree {want} over F_p was expected")]
    WrongField { have: usize, want: usize },
    #[error("division by zero in a finite field")]
    ZeroDivision,
    #[error("modulus override is not a monic irreducible of the requested degree")]
    BadModulus,
    #[error("invalid tower parameters: {0}")]
    BadParameters(&'static str),
}

/// An element of one field in the tower. `degree` is the degree over F_p;
/// `idx` packs the coefficient vector c_0..c_{degree-1} as sum c_i * p^i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FFElem {
    pub degree: usize,
    pub idx: u32,
}

/// One realized field F_{p^d} with its discrete-log tables.
#[derive(Debug)]
pub struct FieldLevel {
    pub p: u64,
    pub d: usize,
    /// p^d
    pub size: u64,
    /// p^d - 1, the unit group order
    pub n_units: u32,
    /// monic modulus, coefficients low-degree-first, length d+1
    pub modulus: Vec<u64>,
    /// pow[i] = generator^i as packed index, length n_units (pow[0] = 1)
    pow: Vec<u32>,
    /// log[idx] for idx != 0; log[0] = u32::MAX
    log: Vec<u32>,
    /// packed index of the chosen multiplicative generator
    pub generator: u32,
    /// powers z^0..z^{a-1} of the image z of the base-field variable under
    /// F_{p^a} -> F_{p^d}; identity level stores none
    embed_pows: Vec<u32>,
}

/// A prime power q = p^a together with the extensions F_{q^k}, k <= k_max.
#[derive(Debug)]
pub struct FieldTower {
    pub p: u64,
    pub a: usize,
    pub k_max: usize,
    pub cap: u64,
    levels: Vec<FieldLevel>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---- dense polynomial helpers over F_p (construction-time only) ----

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&mut prod, m, p);
    prod
}

/// Reduce `a` modulo the monic polynomial `m` in place.
fn poly_rem(a: &mut Vec<u64>, m: &[u64], p: u64) {
    poly_trim(a);
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap() % p;
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let t = (lead * mi) % p;
                let pos = shift + i;
                a[pos] = (a[pos] + p - t) % p;
            }
        }
        a.pop();
        poly_trim(a);
        if a.is_empty() {
            break;
        }
    }
    poly_trim(a);
}

fn poly_pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = base.to_vec();
    poly_rem(&mut b, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(&result, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let lead = *y.last().unwrap();
        let inv = mod_inv(lead, p);
        let monic: Vec<u64> = y.iter().map(|&c| c * inv % p).collect();
        poly_rem(&mut x, &monic, p);
        std::mem::swap(&mut x, &mut y);
    }
    x
}

fn mod_inv(x: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut b = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    result
}

/// Frobenius gcd criterion: X^{p^d} = X mod m, and X^{p^{d/l}} - X coprime to
/// m for every prime l dividing d.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let d = m.len() - 1;
    if d == 0 {
        return false;
    }
    let x_red = {
        let mut v = vec![0u64, 1];
        poly_rem(&mut v, m, p);
        v
    };
    let mut frob = x_red.clone();
    let mut frob_at = vec![frob.clone()];
    for _ in 0..d {
        frob = poly_pow_mod(&frob, p, m, p);
        frob_at.push(frob.clone());
    }
    if frob_at[d] != x_red {
        return false;
    }
    let mut rem = d;
    let mut primes = Vec::new();
    let mut t = 2;
    while t * t <= rem {
        if rem % t == 0 {
            primes.push(t);
            while rem % t == 0 {
                rem /= t;
            }
        }
        t += 1;
    }
    if rem > 1 {
        primes.push(rem);
    }
    for l in primes {
        let mut diff = frob_at[d / l].clone();
        let need = x_red.len().max(diff.len());
        diff.resize(need, 0);
        for (c, &xr) in diff.iter_mut().zip(x_red.iter()) {
            *c = (*c + p - xr) % p;
        }
        poly_trim(&mut diff);
        if diff.is_empty() {
            return false; // X^{p^{d/l}} == X: a proper subfield splits m
        }
        let g = poly_gcd(m, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn idx_to_digits(mut idx: u64, p: u64, d: usize) -> Vec<u64> {
    let mut out = vec![0u64; d];
    for slot in out.iter_mut() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

fn digits_to_idx(digits: &[u64], p: u64) -> u64 {
    let mut idx = 0u64;
    for &c in digits.iter().rev() {
        idx = idx * p + c;
    }
    idx
}

impl FieldLevel {
    fn build(p: u64, d: usize, modulus: Vec<u64>) -> Self {
        let size = p.pow(d as u32);
        let n_units = (size - 1) as u32;
        let mut rem = size - 1;
        let mut prime_factors = Vec::new();
        let mut t = 2u64;
        while t * t <= rem {
            if rem % t == 0 {
                prime_factors.push(t);
                while rem % t == 0 {
                    rem /= t;
                }
            }
            t += 1;
        }
        if rem > 1 {
            prime_factors.push(rem);
        }
        // smallest generator of the unit group, scanning packed indices
        let mut generator = 1u32;
        'search: for cand in 1..size {
            let mut poly = idx_to_digits(cand, p, d);
            poly_trim(&mut poly);
            if poly.is_empty() {
                continue;
            }
            for &l in &prime_factors {
                let e = (size - 1) / l;
                let r = poly_pow_mod(&poly, e, &modulus, p);
                if r == vec![1] {
                    continue 'search;
                }
            }
            generator = cand as u32;
            break;
        }
        let gen_poly = {
            let mut v = idx_to_digits(generator as u64, p, d);
            poly_trim(&mut v);
            v
        };
        let mut pow = Vec::with_capacity(n_units as usize);
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = vec![1u64];
        for i in 0..n_units {
            let mut padded = cur.clone();
            padded.resize(d, 0);
            let idx = digits_to_idx(&padded, p) as u32;
            pow.push(idx);
            log[idx as usize] = i;
            cur = poly_mul_mod(&cur, &gen_poly, &modulus, p);
        }
        debug_assert_eq!(
            {
                let mut padded = cur.clone();
                padded.resize(d, 0);
                digits_to_idx(&padded, p)
            },
            1,
            "generator order must be exactly p^d - 1"
        );
        FieldLevel {
            p,
            d,
            size,
            n_units,
            modulus,
            pow,
            log,
            generator,
            embed_pows: Vec::new(),
        }
    }

    #[inline]
    pub fn zero(&self) -> u32 {
        0
    }

    #[inline]
    pub fn one(&self) -> u32 {
        1
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u32;
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

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u32;
        let mut a = a;
        let mut out = 0u32;
        let mut mul = 1u32;
        for _ in 0..self.d {
            let c = a % p;
            if c != 0 {
                out += (p - c) * mul;
            }
            mul = mul.wrapping_mul(p);
            a /= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        let n = self.n_units as u64;
        self.pow[if l >= n { l - n } else { l } as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, FfError> {
        if a == 0 {
            return Err(FfError::ZeroDivision);
        }
        let l = self.log[a as usize];
        Ok(self.pow[((self.n_units - l) % self.n_units) as usize])
    }

    /// a^e for signed e; a must be nonzero when e < 0.
    pub fn powi(&self, a: u32, e: i64) -> Result<u32, FfError> {
        if a == 0 {
            if e < 0 {
                return Err(FfError::ZeroDivision);
            }
            return Ok(if e == 0 { self.one() } else { 0 });
        }
        let n = self.n_units as i128;
        let l = self.log[a as usize] as i128 * e as i128;
        Ok(self.pow[l.rem_euclid(n) as usize])
    }

    #[inline]
    pub fn log_of(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    #[inline]
    pub fn pow_of_generator(&self, e: u32) -> u32 {
        self.pow[e as usize]
    }

    /// Absolute trace to F_p, returned as a residue.
    pub fn abs_trace(&self, a: u32) -> u64 {
        if a == 0 {
            return 0;
        }
        let n = self.n_units as u64;
        let l = self.log[a as usize] as u64;
        let mut acc = 0u32;
        let mut le = l;
        for _ in 0..self.d {
            acc = self.add(acc, self.pow[le as usize]);
            le = (le * self.p) % n;
        }
        debug_assert!(
            (acc as u64) < self.p,
            "trace must land in the prime subfield"
        );
        acc as u64
    }

    pub fn coeffs(&self, a: u32) -> Vec<u64> {
        idx_to_digits(a as u64, self.p, self.d)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> u32 {
        let mut padded: Vec<u64> = coeffs.iter().map(|&c| c % self.p).collect();
        assert!(padded.len() <= self.d);
        padded.resize(self.d, 0);
        digits_to_idx(&padded, self.p) as u32
    }

    /// The residue c as a constant of this field.
    #[inline]
    pub fn scalar(&self, c: u64) -> u32 {
        (c % self.p) as u32
    }
}

impl FieldTower {
    /// Build the tower for q = p^a with extensions F_{q^k}, k <= k_max.
    pub fn new(p: u64, a: usize, k_max: usize) -> Result<Self, FfError> {
        Self::with_options(p, a, k_max, None, DEFAULT_FIELD_CAP)
    }

    /// As [`FieldTower::new`] with an explicit base modulus (degree a,
    /// coefficients low-degree-first including the leading 1) and cap.
    pub fn with_options(
        p: u64,
        a: usize,
        k_max: usize,
        base_modulus: Option<Vec<u64>>,
        cap: u64,
    ) -> Result<Self, FfError> {
        if !is_prime(p) {
            return Err(FfError::NotPrime(p));
        }
        if a == 0 || k_max == 0 {
            return Err(FfError::BadParameters("a and k_max must be >= 1"));
        }
        let top_degree = a
            .checked_mul(k_max)
            .ok_or(FfError::BadParameters("degree overflow"))?;
        let mut size = 1u64;
        for _ in 0..top_degree {
            size = size
                .checked_mul(p)
                .filter(|&s| s <= cap)
                .ok_or(FfError::DegreeOverflow {
                    p,
                    d: top_degree,
                    cap,
                })?;
        }
        let mut levels: Vec<FieldLevel> = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let d = a * k;
            let modulus = match (&base_modulus, k) {
                (Some(m), 1) => {
                    let mut m = m.clone();
                    for c in m.iter_mut() {
                        *c %= p;
                    }
                    if m.len() != d + 1 || m[d] != 1 || !is_irreducible(&m, p) {
                        return Err(FfError::BadModulus);
                    }
                    m
                }
                _ => Self::smallest_irreducible(p, d),
            };
            let mut level = FieldLevel::build(p, d, modulus);
            if k > 1 {
                level.embed_pows = Self::compute_embedding(&levels[0], &level);
            }
            levels.push(level);
        }
        Ok(FieldTower {
            p,
            a,
            k_max,
            cap,
            levels,
        })
    }

    /// First irreducible monic polynomial of degree d in packed-index order
    /// (constant coefficient varying fastest); deterministic across runs.
    fn smallest_irreducible(p: u64, d: usize) -> Vec<u64> {
        let bound = p.pow(d as u32);
        for low in 0..bound {
            let mut m = idx_to_digits(low, p, d);
            m.push(1);
            if is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("an irreducible of every degree exists");
    }

    /// Powers z^0..z^{a-1} of the smallest root z of the base modulus inside
    /// the bigger field.
    fn compute_embedding(base: &FieldLevel, big: &FieldLevel) -> Vec<u32> {
        let a = base.d;
        if a == 1 {
            // prime base field: the embedding sends residues to constants
            return vec![big.one()];
        }
        // The subfield's units form the unique cyclic subgroup of order
        // p^a - 1, so only p^a candidates need testing.
        let stride = big.n_units / base.n_units;
        let mut candidates: Vec<u32> = (0..base.n_units)
            .map(|i| big.pow[(i * stride) as usize])
            .collect();
        candidates.sort_unstable();
        let mut root = None;
        for cand in candidates {
            let mut acc = 0u32;
            let mut pw = big.one();
            for &c in base.modulus.iter() {
                if c != 0 {
                    acc = big.add(acc, big.mul(big.scalar(c), pw));
                }
                pw = big.mul(pw, cand);
            }
            if acc == 0 {
                root = Some(cand);
                break;
            }
        }
        let z = root.expect("base modulus must split in every extension of degree a*k");
        let mut pows = Vec::with_capacity(a);
        let mut cur = big.one();
        for _ in 0..a {
            pows.push(cur);
            cur = big.mul(cur, z);
        }
        pows
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.p.pow(self.a as u32)
    }

    /// The field F_{q^k}.
    pub fn level(&self, k: usize) -> &FieldLevel {
        &self.levels[k - 1]
    }

    fn level_of(&self, x: FFElem) -> Result<&FieldLevel, FfError> {
        if x.degree == 0 || x.degree % self.a != 0 || x.degree / self.a > self.k_max {
            return Err(FfError::WrongField {
                have: x.degree,
                want: self.a,
            });
        }
        Ok(&self.levels[x.degree / self.a - 1])
    }

    pub fn zero(&self, k: usize) -> FFElem {
        FFElem {
            degree: self.a * k,
            idx: 0,
        }
    }

    pub fn one(&self, k: usize) -> FFElem {
        FFElem {
            degree: self.a * k,
            idx: self.level(k).one(),
        }
    }

    pub fn elem(&self, k: usize, idx: u32) -> FFElem {
        debug_assert!((idx as u64) < self.level(k).size);
        FFElem {
            degree: self.a * k,
            idx,
        }
    }

    /// The residue c as a base-field constant.
    pub fn scalar(&self, c: u64) -> FFElem {
        FFElem {
            degree: self.a,
            idx: self.level(1).scalar(c),
        }
    }

    fn lift2(&self, x: FFElem, y: FFElem) -> Result<&FieldLevel, FfError> {
        if x.degree != y.degree {
            return Err(FfError::WrongField {
                have: y.degree,
                want: x.degree,
            });
        }
        self.level_of(x)
    }

    pub fn add(&self, x: FFElem, y: FFElem) -> Result<FFElem, FfError> {
        let lv = self.lift2(x, y)?;
        Ok(FFElem {
            degree: x.degree,
            idx: lv.add(x.idx, y.idx),
        })
    }

    pub fn sub(&self, x: FFElem, y: FFElem) -> Result<FFElem, FfError> {
        let lv = self.lift2(x, y)?;
        Ok(FFElem {
            degree: x.degree,
            idx: lv.sub(x.idx, y.idx),
        })
    }

    pub fn mul(&self, x: FFElem, y: FFElem) -> Result<FFElem, FfError> {
        let lv = self.lift2(x, y)?;
        Ok(FFElem {
            degree: x.degree,
            idx: lv.mul(x.idx, y.idx),
        })
    }

    pub fn inv(&self, x: FFElem) -> Result<FFElem, FfError> {
        let lv = self.level_of(x)?;
        Ok(FFElem {
            degree: x.degree,
            idx: lv.inv(x.idx)?,
        })
    }

    pub fn powi(&self, x: FFElem, e: i64) -> Result<FFElem, FfError> {
        let lv = self.level_of(x)?;
        Ok(FFElem {
            degree: x.degree,
            idx: lv.powi(x.idx, e)?,
        })
    }

    /// Embed a base-field element into F_{q^k}.
    pub fn embed_base(&self, c: FFElem, k: usize) -> Result<FFElem, FfError> {
        if c.degree != self.a {
            return Err(FfError::WrongField {
                have: c.degree,
                want: self.a,
            });
        }
        if k == 1 {
            return Ok(c);
        }
        let base = self.level(1);
        let big = self.level(k);
        let digits = base.coeffs(c.idx);
        let mut acc = 0u32;
        for (i, &ci) in digits.iter().enumerate() {
            if ci != 0 {
                acc = big.add(acc, big.mul(big.scalar(ci), big.embed_pows[i]));
            }
        }
        Ok(FFElem {
            degree: big.d,
            idx: acc,
        })
    }

    /// Relative trace Tr_{F_{q^k}/F_q}: sum of x^{q^i}, mapped back into the
    /// base field representation.
    pub fn rel_trace(&self, x: FFElem) -> Result<FFElem, FfError> {
        let lv = self.level_of(x)?;
        let k = x.degree / self.a;
        if k == 1 {
            return Ok(x);
        }
        let q = self.q();
        let n = lv.n_units as u64;
        let mut acc = 0u32;
        if x.idx != 0 {
            let l = lv.log[x.idx as usize] as u64;
            let mut le = l;
            for _ in 0..k {
                acc = lv.add(acc, lv.pow[le as usize]);
                le = ((le as u128 * q as u128) % n as u128) as u64;
            }
        }
        let c = self.solve_down(lv, acc)?;
        Ok(FFElem {
            degree: self.a,
            idx: c,
        })
    }

    /// Absolute trace Tr_{F_{q^k}/F_p} as a residue mod p.
    pub fn abs_trace(&self, x: FFElem) -> Result<u64, FfError> {
        let lv = self.level_of(x)?;
        Ok(lv.abs_trace(x.idx))
    }

    /// Find c in F_{p^a} with embed(c) = y, by Gaussian elimination over F_p
    /// on the d x a embedding matrix.
    fn solve_down(&self, big: &FieldLevel, y: u32) -> Result<u32, FfError> {
        let a = self.a;
        let d = big.d;
        let p = self.p;
        let mut mat = vec![vec![0u64; a + 1]; d];
        for (i, &zp) in big.embed_pows.iter().enumerate() {
            for (r, &dig) in big.coeffs(zp).iter().enumerate() {
                mat[r][i] = dig;
            }
        }
        for (r, &dig) in big.coeffs(y).iter().enumerate() {
            mat[r][a] = dig;
        }
        let mut row = 0;
        let mut pivots = vec![usize::MAX; a];
        for col in 0..a {
            let Some(pr) = (row..d).find(|&r| mat[r][col] != 0) else {
                continue;
            };
            mat.swap(row, pr);
            let inv = mod_inv(mat[row][col], p);
            for c in col..=a {
                mat[row][c] = mat[row][c] * inv % p;
            }
            for r in 0..d {
                if r != row && mat[r][col] != 0 {
                    let f = mat[r][col];
                    for c in col..=a {
                        let sub = f * mat[row][c] % p;
                        mat[r][c] = (mat[r][c] + p - sub) % p;
                    }
                }
            }
            pivots[col] = row;
            row += 1;
        }
        for r in row..d {
            if mat[r][a] != 0 {
                return Err(FfError::WrongField {
                    have: big.d,
                    want: a,
                });
            }
        }
        let mut digits = vec![0u64; a];
        for col in 0..a {
            if pivots[col] != usize::MAX {
                digits[col] = mat[pivots[col]][a];
            }
        }
        Ok(self.level(1).from_coeffs(&digits))
    }

    /// All elements of F_{q^k} in packed-index order (constant coefficient
    /// varying fastest); fixed so enumeration-based counts are deterministic.
    pub fn elements(&self, k: usize) -> impl Iterator<Item = FFElem> + '_ {
        let d = self.a * k;
        let size = self.level(k).size;
        (0..size).map(move |i| FFElem {
            degree: d,
            idx: i as u32,
        })
    }

    /// The unit group of F_{q^k}: all elements with 0 skipped.
    pub fn units(&self, k: usize) -> impl Iterator<Item = FFElem> + '_ {
        self.elements(k).skip(1)
    }
}
