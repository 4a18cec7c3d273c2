//! Sum-bracket growth: balls, diameters, line statistics and towers.

mod ball;
mod expr;
mod lattice;
mod line;
mod tower;
mod witt;

pub use ball::{Ball, FiniteAmbient, Origin, DENSE_LIMIT};
pub use expr::Expression;
pub use lattice::LatticeBall;
pub use line::{line_growth_experiment, line_stat, line_stat_codes, scalar_set_stats, LineGrowthRow, LineStatRecord, ScalarSetStats};
pub use tower::{towering_check, towers, TowerContainment, TowerSet};
pub use witt::{witt_identity_holds, WittProcedure};

use crate::arith::PrimeField;
use crate::lie::{LieAlgebra, LieError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrowthError {
    #[error("algebra too large for integer element codes")]
    TooLarge,
    #[error("more than 255 layers requested")]
    TooDeep,
    #[error("ball exceeded the size cutoff at layer {layer} ({size} elements)")]
    CutoffExceeded { layer: usize, size: u128 },
    #[error("the given set does not generate the algebra")]
    NotGenerating,
    #[error("no full line in the given layer")]
    LineNotFull,
    #[error("coefficient norm exceeded the cutoff at layer {0}")]
    NormCutoff(usize),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("ball was built without origin tracking")]
    Untracked,
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// The layers `A^1, …, A^k` of `a` in a finite algebra.
pub fn ball(g: &LieAlgebra<PrimeField>, a: &[Vec<u64>], k: usize, cutoff: Option<u128>) -> Result<Ball, GrowthError> {
    let mut b = Ball::new(FiniteAmbient::new(g)?, a, cutoff, false);
    b.grow_to(k)?;
    Ok(b)
}

/// Least `k` with `A^k = g`.
pub fn diameter(g: &LieAlgebra<PrimeField>, a: &[Vec<u64>]) -> Result<usize, GrowthError> {
    if !g.generates(a) {
        return Err(GrowthError::NotGenerating);
    }
    let amb = FiniteAmbient::new(g)?;
    if amb.size() > DENSE_LIMIT {
        return Err(GrowthError::TooLarge);
    }
    let mut b = Ball::new(amb, a, None, false);
    while b.grow()? {}
    Ok(b.depth())
}


#[cfg(test)]
mod tests {
    use super::test_util::sl2;
    use super::*;
    use crate::lie::witt_algebra;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    /// Values of all expressions with at most `k` leaves from `{0} ∪ a`.
    fn brute_force(g: &LieAlgebra<PrimeField>, a: &[Vec<u64>], k: usize) -> Vec<BTreeSet<Vec<u64>>> {
        let mut exact: Vec<BTreeSet<Vec<u64>>> = vec![BTreeSet::new()];
        exact.push(std::iter::once(g.zero()).chain(a.iter().cloned()).collect());
        for w in 2..=k {
            let mut s = BTreeSet::new();
            for i in 1..w {
                for x in &exact[i] {
                    for y in &exact[w - i] {
                        s.insert(g.add(x, y));
                        s.insert(g.bracket(x, y));
                    }
                }
            }
            exact.push(s);
        }
        let mut acc = BTreeSet::new();
        exact
            .into_iter()
            .map(|s| {
                acc.extend(s);
                acc.clone()
            })
            .collect()
    }

    #[test]
    fn sl2_f3_second_layer() {
        let g = sl2(3);
        let (e, f, h) = (g.basis(0), g.basis(1), g.basis(2));
        let b = ball(&g, &[e.clone(), f.clone()], 2, None).unwrap();
        assert_eq!(b.layer_size(1), 3);
        let got: BTreeSet<Vec<u64>> = b.layer(2).into_iter().collect();
        let expect: BTreeSet<Vec<u64>> =
            [g.zero(), e.clone(), f.clone(), g.scale(&2, &e), g.scale(&2, &f), g.add(&e, &f), h.clone(), g.scale(&2, &h)]
                .into_iter()
                .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn zero_generator_stays_zero() {
        let g = sl2(5);
        let b = ball(&g, &[g.zero()], 4, None).unwrap();
        assert_eq!(b.layer_size(4), 1);
    }

    #[test]
    fn matches_brute_force_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for g in [sl2(3), witt_algebra(5).unwrap()] {
            for _ in 0..3 {
                let a = vec![g.random_vector(&mut rng), g.random_vector(&mut rng)];
                let exact = brute_force(&g, &a, 5);
                let b = ball(&g, &a, 5, None).unwrap();
                for k in 1..=5 {
                    let got: BTreeSet<Vec<u64>> = b.layer(k).into_iter().collect();
                    assert_eq!(got, exact[k], "k={k}");
                }
            }
        }
    }

    #[test]
    fn small_sl2_diameters() {
        let mut got = Vec::new();
        for p in [3u64, 5, 7, 11, 13] {
            let g = sl2(p);
            got.push(diameter(&g, &[g.basis(0), g.basis(1)]).unwrap());
        }
        assert_eq!(got, vec![6, 7, 8, 10, 11]);
        for (i, p) in [3u64, 5].into_iter().enumerate() {
            let g = sl2(p);
            let size = p.pow(3) as usize;
            let exact = brute_force(&g, &[g.basis(0), g.basis(1)], got[i]);
            assert_eq!(exact[got[i]].len(), size);
            assert!(exact[got[i] - 1].len() < size);
        }
    }

    #[test]
    fn diameter_edge_cases() {
        let g = sl2(3);
        assert_eq!(diameter(&g, &[g.basis(0)]), Err(GrowthError::NotGenerating));
        let all: Vec<Vec<u64>> = (1..27u64).map(|c| FiniteAmbient::new(&g).unwrap().decode(c)).collect();
        assert_eq!(diameter(&g, &all).unwrap(), 1);
    }

    #[test]
    fn full_line_bounds_diameter() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for p in [5u64, 7, 11] {
            let g = sl2(p);
            let d = g.dim();
            for _ in 0..3 {
                let a = vec![g.random_vector(&mut rng), g.random_vector(&mut rng)];
                let Ok(diam) = diameter(&g, &a) else { continue };
                let b = ball(&g, &a, diam, None).unwrap();
                let k = (1..=diam).find(|&k| b.line_stat(k).ell == p).unwrap();
                assert!(diam <= k * d + d * d);
            }
        }
    }
}
