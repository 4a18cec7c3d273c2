use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns the nonzero rows, each with a positive pivot strictly to the right
/// of the previous one, and entries above a pivot reduced into `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(n) = rows.first().map(|r| r.len()) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if r == m.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let best = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(best) = best else { break };
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let (top, rest) = m.split_at_mut(r + 1);
                let pivot_row = &top[r];
                for (x, y) in rest[i - r - 1].iter_mut().zip(pivot_row) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        pivots.push(c);
        r += 1;
        m.retain(|row| row.iter().any(|x| !x.is_zero()));
    }
    m.truncate(r);
    // reduce above pivots
    for k in 0..m.len() {
        let c = pivots[k];
        let (top, rest) = m.split_at_mut(k);
        let piv_row = &rest[0];
        for row in top.iter_mut() {
            let q = row[c].div_floor(&piv_row[c]);
            if q.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(piv_row) {
                if !y.is_zero() {
                    *x -= &q * y;
                }
            }
        }
    }
    m
}

/// Integer coordinates of `v` in an HNF basis, if `v` lies in the lattice.
pub fn hnf_solve(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut w = v.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for row in basis {
        let c = row.iter().position(|x| !x.is_zero())?;
        let (q, rem) = w[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (x, y) in w.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        coords.push(q);
    }
    if w.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}
