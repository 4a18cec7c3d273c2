use std::collections::HashMap;

use serde::Serialize;

use super::{Ball, FiniteAmbient, GrowthError};
use crate::arith::{mod_inv, PrimeField};
use crate::lie::LieAlgebra;

/// The largest number of points of a set on one line through the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineStatRecord {
    pub k: usize,
    pub ell: u64,
    /// Normalized direction (first nonzero coordinate 1) attaining `ell`.
    pub direction: Vec<u64>,
    /// Scalars `α` with `α·direction` in the set, sorted.
    pub scalars: Vec<u64>,
}

impl LineStatRecord {
    pub fn is_full_line(&self, p: u64) -> bool {
        self.ell == p
    }
}

/// Line statistic of a set of element codes. Directions that meet the set
/// only in `0` all share the same count, so counting the directions actually
/// hit gives the exact maximum.
pub fn line_stat_codes(amb: &FiniteAmbient, codes: &[u64]) -> LineStatRecord {
    let p = amb.p();
    let d = amb.dim();
    let inv: Vec<u64> = (0..p).map(|a| mod_inv(a, p).unwrap_or(0)).collect();
    let mut has_zero = false;
    let mut counts: HashMap<u64, u64> = HashMap::new();
    let mut v = vec![0u64; d];
    let normalize = |code: u64, v: &mut [u64]| -> Option<(u64, u64)> {
        amb.decode_into(code, v);
        let lead = *v.iter().find(|&&c| c != 0)?;
        let s = inv[lead as usize];
        let dir = v.iter().rev().fold(0u64, |acc, &c| acc * p + c * s % p);
        Some((dir, lead))
    };
    for &c in codes {
        match normalize(c, &mut v) {
            None => has_zero = true,
            Some((dir, _)) => *counts.entry(dir).or_insert(0) += 1,
        }
    }
    let (dir, count) = counts
        .iter()
        .map(|(&dir, &n)| (dir, n))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .unwrap_or((1, 0));
    let mut scalars: Vec<u64> = codes
        .iter()
        .filter_map(|&c| normalize(c, &mut v))
        .filter(|&(d, _)| d == dir)
        .map(|(_, lead)| lead)
        .collect();
    if has_zero {
        scalars.push(0);
    }
    scalars.sort_unstable();
    scalars.dedup();
    LineStatRecord { k: 0, ell: count + u64::from(has_zero), direction: amb.decode(dir), scalars }
}

/// Line statistic of an explicit set of vectors.
pub fn line_stat(amb: &FiniteAmbient, xs: &[Vec<u64>]) -> LineStatRecord {
    let mut codes: Vec<u64> = xs.iter().map(|x| amb.encode(x)).collect();
    codes.sort_unstable();
    codes.dedup();
    line_stat_codes(amb, &codes)
}

impl Ball {
    /// `ℓ(A^k)`; layers past a full ball count as the whole algebra.
    pub fn line_stat(&self, k: usize) -> LineStatRecord {
        let codes: Vec<u64> = self.layer_codes(k).collect();
        let mut rec = line_stat_codes(self.ambient(), &codes);
        rec.k = k;
        rec
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineGrowthRow {
    pub k: usize,
    pub ball_size: usize,
    pub ell: u64,
    pub direction: Vec<u64>,
    /// `ℓ(A^{2k + dim})`.
    pub ell_ahead: u64,
    /// `log ℓ(A^{2k+dim}) / log ℓ(A^k)`, absent while `ℓ(A^k) <= 1`.
    pub exponent: Option<f64>,
    /// Whether the ratio reaches `5/4 - ε`.
    pub meets_bound: Option<bool>,
}

/// Rows `k = 1, 2, …` up to the first `k` with `ℓ(A^k) = p`.
pub fn line_growth_experiment(g: &LieAlgebra<PrimeField>, a: &[Vec<u64>], eps: f64) -> Result<Vec<LineGrowthRow>, GrowthError> {
    if !g.generates(a) {
        return Err(GrowthError::NotGenerating);
    }
    let amb = FiniteAmbient::new(g)?;
    let p = amb.p();
    let d = amb.dim();
    let mut ball = Ball::new(amb, a, None, false);
    let mut stats: Vec<LineStatRecord> = Vec::new();
    let mut stat = |ball: &mut Ball, k: usize| -> Result<LineStatRecord, GrowthError> {
        ball.grow_to(k)?;
        let idx = k.min(ball.depth());
        while stats.len() < idx {
            let next = stats.len() + 1;
            stats.push(ball.line_stat(next));
        }
        let mut rec = stats[idx - 1].clone();
        rec.k = k;
        Ok(rec)
    };
    let mut rows = Vec::new();
    for k in 1.. {
        let here = stat(&mut ball, k)?;
        let ahead = stat(&mut ball, 2 * k + d)?;
        let exponent = (here.ell > 1).then(|| (ahead.ell as f64).ln() / (here.ell as f64).ln());
        rows.push(LineGrowthRow {
            k,
            ball_size: ball.layer_size(k),
            ell: here.ell,
            direction: here.direction,
            ell_ahead: ahead.ell,
            exponent,
            meets_bound: exponent.map(|e| e >= 1.25 - eps),
        });
        if here.ell == p {
            break;
        }
    }
    Ok(rows)
}

/// Sizes of `X + X`, `XX` and `XX + XX + XX` for `X ⊆ F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScalarSetStats {
    pub size: usize,
    pub sum: usize,
    pub product: usize,
    pub triple: usize,
}

pub fn scalar_set_stats(p: u64, xs: &[u64]) -> ScalarSetStats {
    let n = p as usize;
    let mut set = vec![false; n];
    for &x in xs {
        set[(x % p) as usize] = true;
    }
    let elems: Vec<usize> = (0..n).filter(|&i| set[i]).collect();
    let combine = |a: &[usize], b: &[usize], op: &dyn Fn(usize, usize) -> usize| -> Vec<usize> {
        let mut out = vec![false; n];
        for &x in a {
            for &y in b {
                out[op(x, y)] = true;
            }
        }
        (0..n).filter(|&i| out[i]).collect()
    };
    let add = |x: usize, y: usize| (x + y) % n;
    let mul = |x: usize, y: usize| x * y % n;
    let sum = combine(&elems, &elems, &add);
    let prod = combine(&elems, &elems, &mul);
    let two = combine(&prod, &prod, &add);
    let three = combine(&two, &prod, &add);
    ScalarSetStats { size: elems.len(), sum: sum.len(), product: prod.len(), triple: three.len() }
}
