use std::collections::HashSet;

use num_traits::ToPrimitive;

use super::GrowthError;
use crate::arith::Integers;
use crate::lie::LieAlgebra;

/// Sum-bracket balls in a Lie ring over Z with `i64` coordinates.
#[derive(Debug, Clone)]
pub struct LatticeBall {
    d: usize,
    table: Vec<Vec<(usize, i64)>>,
    seen: HashSet<Vec<i64>>,
    /// `fresh[k-1]` holds the elements first reached in layer `k`.
    fresh: Vec<Vec<Vec<i64>>>,
    size_cutoff: usize,
    norm_cutoff: Option<i64>,
}

fn max_abs(v: &[i64]) -> i64 {
    v.iter().map(|c| c.abs()).max().unwrap_or(0)
}

impl LatticeBall {
    pub fn new(
        g: &LieAlgebra<Integers>,
        generators: &[Vec<i64>],
        size_cutoff: usize,
        norm_cutoff: Option<i64>,
    ) -> Result<Self, GrowthError> {
        let d = g.dim();
        let mut table = Vec::with_capacity(d * d);
        for ij in 0..d * d {
            let row: Option<Vec<(usize, i64)>> =
                g.bracket_basis(ij / d, ij % d).iter().map(|(k, c)| c.to_i64().map(|c| (*k, c))).collect();
            table.push(row.ok_or(GrowthError::Overflow)?);
        }
        let mut ball = Self { d, table, seen: HashSet::new(), fresh: Vec::new(), size_cutoff, norm_cutoff };
        let mut first = Vec::new();
        for v in std::iter::once(vec![0; d]).chain(generators.iter().cloned()) {
            if ball.seen.insert(v.clone()) {
                first.push(v);
            }
        }
        ball.fresh.push(first);
        ball.check(1)?;
        Ok(ball)
    }

    pub fn depth(&self) -> usize {
        self.fresh.len()
    }

    pub fn layer_size(&self, k: usize) -> usize {
        self.fresh[..k.min(self.depth())].iter().map(Vec::len).sum()
    }

    pub fn layer(&self, k: usize) -> impl Iterator<Item = &Vec<i64>> {
        self.fresh[..k.min(self.depth())].iter().flatten()
    }

    /// `‖A^k‖`, the largest absolute coordinate.
    pub fn norm(&self, k: usize) -> i64 {
        self.layer(k).map(|v| max_abs(v)).max().unwrap_or(0)
    }

    fn bracket(&self, x: &[i64], y: &[i64]) -> Result<Vec<i64>, GrowthError> {
        let mut out = vec![0i64; self.d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let xy = xi.checked_mul(yj).ok_or(GrowthError::Overflow)?;
                for &(k, c) in &self.table[i * self.d + j] {
                    let t = xy.checked_mul(c).ok_or(GrowthError::Overflow)?;
                    out[k] = out[k].checked_add(t).ok_or(GrowthError::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    fn check(&self, k: usize) -> Result<(), GrowthError> {
        let size = self.seen.len();
        if size > self.size_cutoff {
            return Err(GrowthError::CutoffExceeded { layer: k, size: size as u128 });
        }
        if let Some(n) = self.norm_cutoff {
            if self.fresh[k - 1].iter().any(|v| max_abs(v) > n) {
                return Err(GrowthError::NormCutoff(k));
            }
        }
        Ok(())
    }

    pub fn grow(&mut self) -> Result<(), GrowthError> {
        let k = self.depth() + 1;
        let mut new = Vec::new();
        let mut added = HashSet::new();
        for j in 1..=k / 2 {
            let m = k - j;
            let pairs = self.fresh[j - 1]
                .iter()
                .flat_map(|x| self.layer(m).map(move |y| (x, y)))
                .chain(self.layer(j - 1).flat_map(|x| self.fresh[m - 1].iter().map(move |y| (x, y))));
            for (x, y) in pairs {
                let s: Option<Vec<i64>> = x.iter().zip(y).map(|(a, b)| a.checked_add(*b)).collect();
                let b = self.bracket(x, y)?;
                let nb: Vec<i64> = b.iter().map(|c| -c).collect();
                for v in [s.ok_or(GrowthError::Overflow)?, b, nb] {
                    if !self.seen.contains(&v) && added.insert(v.clone()) {
                        new.push(v);
                    }
                }
                let size = self.seen.len() + added.len();
                if size > self.size_cutoff {
                    return Err(GrowthError::CutoffExceeded { layer: k, size: size as u128 });
                }
            }
        }
        self.seen.extend(added);
        self.fresh.push(new);
        self.check(k)
    }

    pub fn grow_to(&mut self, k: usize) -> Result<(), GrowthError> {
        while self.depth() < k {
            self.grow()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::chevalley_algebra;
    use crate::roots::RootSystem;

    fn sl2z() -> LieAlgebra<Integers> {
        let rs: RootSystem = "A1".parse().unwrap();
        chevalley_algebra(&rs)
    }

    #[test]
    fn sl2_small_layers() {
        let g = sl2z();
        let gens: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| i64::from(i == j)).collect()).collect();
        let mut ball = LatticeBall::new(&g, &gens, 1 << 22, None).unwrap();
        assert_eq!(ball.layer_size(1), 4);
        ball.grow_to(4).unwrap();
        let sizes: Vec<usize> = (1..=4).map(|k| ball.layer_size(k)).collect();
        assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
        assert!(ball.norm(4) >= 2);
    }

    #[test]
    fn cutoffs_reported() {
        let g = sl2z();
        let gens = vec![vec![1, 0, 0], vec![0, 1, 0]];
        let mut ball = LatticeBall::new(&g, &gens, 20, None).unwrap();
        assert!(matches!(ball.grow_to(6), Err(GrowthError::CutoffExceeded { .. })));
        let mut ball = LatticeBall::new(&g, &gens, 1 << 20, Some(1)).unwrap();
        assert_eq!(ball.grow_to(6), Err(GrowthError::NormCutoff(2)));
    }
}
