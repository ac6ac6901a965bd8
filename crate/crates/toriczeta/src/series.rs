//! Truncated formal power series over exact rationals. A series of order N
//! is its coefficient vector c_0..c_N; every operation truncates at the
//! smaller order of its inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Coeffs = Vec<BigRational>;

pub fn from_int(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// The series 1.
pub fn one(order: usize) -> Coeffs {
    let mut c = vec![BigRational::zero(); order + 1];
    c[0] = BigRational::one();
    c
}

pub fn mul(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let order = (a.len() - 1).min(b.len() - 1);
    let mut out = vec![BigRational::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            let v = &out[i + j] + ai * bj;
            out[i + j] = v;
        }
    }
    out
}

/// Multiplicative inverse; requires a nonzero constant term.
pub fn inverse(a: &Coeffs) -> Coeffs {
    let order = a.len() - 1;
    assert!(!a[0].is_zero(), "series with zero constant term");
    let inv0 = a[0].recip();
    let mut out = vec![BigRational::zero(); order + 1];
    out[0] = inv0.clone();
    for m in 1..=order {
        let mut s = BigRational::zero();
        for j in 1..=m {
            if !a[j].is_zero() {
                s += &a[j] * &out[m - j];
            }
        }
        out[m] = -&inv0 * s;
    }
    out
}

/// exp(sum_{k>=1} s_k t^k / k) to the order of `s` (s[0] is ignored and `s`
/// is indexed so that s[k] multiplies t^k/k). The derivative recurrence
/// m z_m = sum_{j=1..m} s_j z_{m-j} keeps everything rational.
pub fn exp_power_sums(s: &[BigRational]) -> Coeffs {
    let order = s.len() - 1;
    let mut z = vec![BigRational::zero(); order + 1];
    z[0] = BigRational::one();
    for m in 1..=order {
        let mut acc = BigRational::zero();
        for j in 1..=m {
            if !s[j].is_zero() {
                acc += &s[j] * &z[m - j];
            }
        }
        z[m] = acc / from_int(m as i128);
    }
    z
}

/// The polynomial 1 - c t as a series of the given order.
pub fn one_minus_ct(c: i128, order: usize) -> Coeffs {
    let mut out = vec![BigRational::zero(); order + 1];
    out[0] = BigRational::one();
    if order >= 1 {
        out[1] = -from_int(c);
    }
    out
}

/// Extract integer coefficients if every entry is integral.
pub fn to_integers(a: &Coeffs) -> Option<Vec<BigInt>> {
    a.iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_geometric_power_sums_is_geometric_series() {
        // s_k = q^k gives exp(sum q^k t^k / k) = 1/(1 - q t)
        let q = 7i128;
        let order = 6;
        let s: Coeffs = (0..=order).map(|k| from_int(q.pow(k as u32))).collect();
        let z = exp_power_sums(&s);
        for (k, c) in z.iter().enumerate() {
            assert_eq!(c, &from_int(q.pow(k as u32)));
        }
        // and multiplying by (1 - q t) gives 1
        let prod = mul(&z, &one_minus_ct(q, order as usize));
        assert_eq!(prod, one(order as usize));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![from_int(1), from_int(-3), from_int(2), from_int(5)];
        let inv = inverse(&a);
        assert_eq!(mul(&a, &inv), one(3));
    }

    #[test]
    fn torus_zeta_identity() {
        // Z(G_m, t) = (1-t)/(1-qt): power sums s_k = (q^k - 1)
        let q = 5i128;
        let order = 5usize;
        let s: Coeffs = (0..=order).map(|k| from_int(q.pow(k as u32) - 1)).collect();
        let z = exp_power_sums(&s);
        let expected = mul(&one_minus_ct(1, order), &inverse(&one_minus_ct(q, order)));
        assert_eq!(z, expected);
    }
}
