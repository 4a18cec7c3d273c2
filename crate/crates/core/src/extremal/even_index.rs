use serde::Serialize;

use super::{eigen_decompose, eta, quadratic_nonzero, ExtremalError};
use crate::arith::{PrimeField, Ring};
use crate::lie::{matrix_to_vector, sl_n_algebra, vector_to_matrix, LieAlgebra, Matrix};

/// The elements `Z_1(i)`, `U_1(i)` and `η(U_1(i), U_1(n+1-i))` of the order-2
/// twisted form of sl_n for even `n`, checked in the matrix model over F_p.
#[derive(Debug, Clone, Serialize)]
pub struct EvenIndexReport {
    pub n: usize,
    pub p: u64,
    pub i: usize,
    /// `Z_1(i)` lies in `L_1` and is fixed by the twist.
    pub z_in_l1: bool,
    /// `exp(ad Z_1(i)) x` equals the closed form of `U_1(i)`.
    pub u_matches: bool,
    /// `q_{y,b}(x) = 0` and `q_{y,b}([b, y]) = 0` for `b = η(U_1(i), U_1(n+1-i))`.
    pub shortcut_fails: bool,
    /// `q_{y,b}` vanishes on every basis vector and pairwise sum.
    pub q_vanishes: bool,
}

fn unit(f: &PrimeField, n: usize, terms: &[(usize, usize, i64)]) -> Matrix<u64> {
    let mut m = vec![vec![0u64; n]; n];
    for &(i, j, c) in terms {
        m[i - 1][j - 1] = f.add(&m[i - 1][j - 1], &f.from_i64(c));
    }
    m
}

fn sign(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `X ↦ -J X^T J^{-1}` with `J` antidiagonal, `J_{k, n+1-k} = (-1)^k`.
fn twist(f: &PrimeField, n: usize, m: &Matrix<u64>) -> Matrix<u64> {
    let mut out = vec![vec![0u64; n]; n];
    for a in 1..=n {
        for b in 1..=n {
            let c = m[b - 1][a - 1];
            if c == 0 {
                continue;
            }
            // J E_ab J^{-1} = (ε_{n+1-a} / ε_{n+1-b}) E_{n+1-a, n+1-b}
            let s = -sign(n + 1 - a) * sign(n + 1 - b);
            out[n - a][n - b] = f.mul(&c, &f.from_i64(s));
        }
    }
    out
}

pub fn sl_n_even_index_case(n: usize, p: u64, i: usize) -> Result<EvenIndexReport, ExtremalError> {
    assert!(n % 2 == 0 && (2..n).contains(&i));
    let f = PrimeField::new(p).map_err(|_| ExtremalError::PrimeTooSmall(p))?;
    let g: LieAlgebra<PrimeField> = sl_n_algebra(f, n);
    let vec = |m: &Matrix<u64>| matrix_to_vector(&f, n, m);
    let x = vec(&unit(&f, n, &[(1, n, 1)]));
    let y = vec(&unit(&f, n, &[(n, 1, 1)]));
    let h = g.bracket(&x, &y);
    let z = |i: usize| vec(&unit(&f, n, &[(i, 1, 1), (n, n + 1 - i, sign(i))]));
    let u_closed = |i: usize| {
        let s = -sign(i);
        vec(&unit(&f, n, &[(1, n, 1), (1, n + 1 - i, s), (i, n, 1), (i, n + 1 - i, s)]))
    };
    let u = |i: usize| g.exp_ad_apply(&z(i), &x).map(|r| r.0);

    let dec = eigen_decompose(&g, &h)?;
    let mut l1 = crate::arith::Echelon::new(f, g.dim());
    for v in dec.space(1) {
        l1.insert(v);
    }
    let zi = z(i);
    let fixed = |v: &[u64]| vec(&twist(&f, n, &vector_to_matrix(&f, n, v))) == v;
    let z_in_l1 = l1.contains(&zi) && fixed(&zi) && fixed(&x) && fixed(&y);
    let u_matches = u(i)? == u_closed(i) && u(n + 1 - i)? == u_closed(n + 1 - i);
    let (b, _) = eta(&g, &u(i)?, &u(n + 1 - i)?)?;
    let q = |z: &[u64]| g.bracket(&g.bracket(&y, z), &g.bracket(&b, z));
    let shortcut_fails = g.is_zero(&q(&x)) && g.is_zero(&q(&g.bracket(&b, &y)));
    let q_vanishes = quadratic_nonzero(&g, &y, &b).is_none();
    Ok(EvenIndexReport { n, p, i, z_in_l1, u_matches, shortcut_fails, q_vanishes })
}
