//! Small exact linear algebra: saturated integer kernels, fraction-free
//! determinants, rational solves, and row reduction over F_q. Everything here
//! operates on desk-scale matrices (dimensions in the tens to hundreds).

use crate::ff::FieldLevel;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Basis of the full integer kernel {x in Z^n : M x = 0}, saturated by
/// construction. Columns are reduced by unimodular operations (plain
/// Euclidean steps), so the returned vectors generate the kernel lattice.
pub fn integer_kernel(m: &[Vec<i128>], ncols: usize) -> Vec<Vec<i128>> {
    let nrows = m.len();
    // work columns: (image column, transformation column)
    let mut img: Vec<Vec<i128>> = (0..ncols)
        .map(|j| (0..nrows).map(|i| m[i][j]).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..ncols)
        .map(|j| {
            let mut e = vec![0i128; ncols];
            e[j] = 1;
            e
        })
        .collect();
    let mut active: Vec<usize> = (0..ncols).collect();
    for row in 0..nrows {
        loop {
            let nz: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&j| img[j][row] != 0)
                .collect();
            if nz.len() <= 1 {
                if let Some(&piv) = nz.first() {
                    active.retain(|&j| j != piv);
                }
                break;
            }
            // reduce the column with the larger entry by the smaller
            let (mut a, mut b) = (nz[0], nz[1]);
            if img[a][row].abs() < img[b][row].abs() {
                std::mem::swap(&mut a, &mut b);
            }
            let q = img[a][row] / img[b][row];
            for i in 0..nrows {
                img[a][i] -= q * img[b][i];
            }
            for i in 0..ncols {
                u[a][i] -= q * u[b][i];
            }
        }
    }
    active
        .into_iter()
        .filter(|&j| img[j].iter().all(|&x| x == 0))
        .map(|j| u[j].clone())
        .collect()
}

/// Divide an integer vector by the gcd of its entries (no-op on zero).
pub fn primitive(v: &[i128]) -> Vec<i128> {
    let mut g = 0i128;
    for &x in v {
        g = gcd_i128(g, x.abs());
    }
    if g <= 1 {
        return v.to_vec();
    }
    v.iter().map(|&x| x / g).collect()
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det_i128(mat: &[Vec<i128>]) -> i128 {
    let n = mat.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = mat.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(sw) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, sw);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank of an integer matrix (via Bareiss-style elimination).
pub fn rank_i128(mat: &[Vec<i128>]) -> usize {
    let nrows = mat.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = mat[0].len();
    let mut a = mat.to_vec();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                a[i][j] = (a[i][j] * a[rank][col] - a[i][col] * a[rank][j]) / prev;
            }
            a[i][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Solve A x = b exactly over Q; returns None when inconsistent. A may be
/// rectangular; free variables are set to zero.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, piv);
        let inv = m[row][col].clone();
        for j in col..=ncols {
            let v = &m[row][j] / &inv;
            m[row][j] = v;
        }
        for i in 0..nrows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=ncols {
                    let v = &m[i][j] - &f * &m[row][j];
                    m[i][j] = v;
                }
            }
        }
        pivot_of_col[col] = row;
        row += 1;
        if row == nrows {
            break;
        }
    }
    for i in row..nrows {
        if !m[i][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); ncols];
    for col in 0..ncols {
        if pivot_of_col[col] != usize::MAX {
            x[col] = m[pivot_of_col[col]][ncols].clone();
        }
    }
    Some(x)
}

pub fn rational_from_i128(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Rank over F_q of a matrix given as rows of packed field elements.
pub fn fq_rank(level: &FieldLevel, mut rows: Vec<Vec<u32>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = level.inv(rows[rank][col]).expect("pivot nonzero");
        for j in col..ncols {
            rows[rank][j] = level.mul(rows[rank][j], inv);
        }
        let (pivot_row, rest) = {
            let (head, tail) = rows.split_at_mut(rank + 1);
            (&head[rank], tail)
        };
        for r in rest.iter_mut() {
            let f = r[col];
            if f != 0 {
                for j in col..ncols {
                    let t = level.mul(f, pivot_row[j]);
                    r[j] = level.sub(r[j], t);
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// One, for building rational identity blocks without importing traits
/// everywhere.
pub fn rational_one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldTower;

    #[test]
    fn kernel_of_dwork_vertex_rows() {
        // rows (1, v_j) for v_1 = (0,1), v_2 = (1,0); kernel generated by
        // the primitive normal (1,-1,-1) up to sign
        let m = vec![vec![1i128, 0, 1], vec![1, 1, 0]];
        let ker = integer_kernel(&m, 3);
        assert_eq!(ker.len(), 1);
        let v = primitive(&ker[0]);
        let want: Vec<i128> = vec![1, -1, -1];
        assert!(v == want || v.iter().zip(&want).all(|(a, b)| *a == -b));
    }

    #[test]
    fn kernel_is_saturated() {
        // rows annihilate (2,[-2]...): naive scaling could return (2,-2);
        // the saturated kernel must contain (1,-1)
        let m = vec![vec![3i128, 3]];
        let ker = integer_kernel(&m, 2);
        assert_eq!(ker.len(), 1);
        assert_eq!(primitive(&ker[0]).iter().map(|x| x.abs()).sum::<i128>(), 2);
        assert_eq!(ker[0][0].abs(), 1);
    }

    #[test]
    fn bareiss_det() {
        let m = vec![vec![1i128, -1, -1], vec![1, -1, 2], vec![1, 2, -1]];
        assert_eq!(det_i128(&m).abs(), 9);
        let m2 = vec![vec![1i128, 0], vec![1, 1]];
        assert_eq!(det_i128(&m2), 1);
        let sing = vec![vec![1i128, 2], vec![2, 4]];
        assert_eq!(det_i128(&sing), 0);
    }

    #[test]
    fn rational_solve_consistent_and_not() {
        let one = rational_one;
        let a = vec![
            vec![one(), rational_from_i128(2)],
            vec![rational_from_i128(3), rational_from_i128(4)],
        ];
        let b = vec![rational_from_i128(5), rational_from_i128(11)];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x[0], rational_from_i128(1));
        assert_eq!(x[1], rational_from_i128(2));
        // inconsistent
        let a2 = vec![vec![one()], vec![one()]];
        let b2 = vec![rational_from_i128(0), rational_from_i128(1)];
        assert!(solve_rational(&a2, &b2).is_none());
    }

    #[test]
    fn fq_rank_small() {
        let t = FieldTower::new(7, 1, 1).unwrap();
        let lv = t.level(1);
        // rows over F_7: rank 2
        let rows = vec![vec![1u32, 2, 3], vec![2, 4, 6], vec![0, 1, 5]];
        assert_eq!(fq_rank(lv, rows), 2);
        assert_eq!(fq_rank(lv, vec![vec![0u32, 0]]), 0);
    }
}
