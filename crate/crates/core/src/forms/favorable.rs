use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CoveringLattice, FormError};
use crate::arith::{Echelon, PrimeField, RationalMatrix, Ring};
use crate::lie::LieAlgebra;

/// Candidate pairs tried before giving up.
pub const DEFAULT_CANDIDATE_BUDGET: usize = 200_000;

/// Screening prime for the fast generation test.
const SCREEN_PRIME: u64 = 2_147_483_647;

/// Trial division bound when factoring the certificate determinant.
const FACTOR_BOUND: u64 = 1_000_000;

/// A bracket word in the two generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LieWord {
    X,
    Y,
    /// Bracket of two earlier words, by index.
    Bracket(usize, usize),
}

/// Lattice elements `x, y` whose brackets span the lattice over Q, with the
/// primes where the certificate may fail.
#[derive(Debug, Clone)]
pub struct FavorablePair {
    pub x: Vec<BigInt>,
    pub y: Vec<BigInt>,
    /// Words in evaluation order; `spanning` picks the ones forming the certificate.
    pub words: Vec<LieWord>,
    pub spanning: Vec<usize>,
    /// Absolute value of the determinant of the spanning words.
    pub determinant: BigInt,
    pub bad_primes: Vec<u64>,
    /// Cofactor of the determinant left after trial division, if any.
    pub unfactored: Option<BigInt>,
    pub candidates_tried: usize,
}

impl FavorablePair {
    /// True when the certificate guarantees generation modulo `p`.
    pub fn is_good_prime(&self, p: u64) -> bool {
        !(&self.determinant % BigInt::from(p)).is_zero()
    }
}

/// Sign vectors with exactly `s` nonzero entries, first nonzero entry positive.
fn sign_vectors(n: usize, s: usize) -> Vec<Vec<(usize, i8)>> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..s).collect();
    if s == 0 || s > n {
        return out;
    }
    loop {
        for mask in 0..(1u32 << (s - 1)) {
            let v = combo
                .iter()
                .enumerate()
                .map(|(k, &i)| (i, if k > 0 && mask >> (k - 1) & 1 == 1 { -1 } else { 1 }))
                .collect();
            out.push(v);
        }
        let mut k = s;
        while k > 0 && combo[k - 1] == n - s + k - 1 {
            k -= 1;
        }
        if k == 0 {
            return out;
        }
        combo[k - 1] += 1;
        for m in k..s {
            combo[m] = combo[m - 1] + 1;
        }
    }
}

fn dense<E: Clone>(n: usize, v: &[(usize, i8)], conv: impl Fn(i64) -> E, zero: E) -> Vec<E> {
    let mut out = vec![zero; n];
    for &(i, c) in v {
        out[i] = conv(c as i64);
    }
    out
}

/// Closure of `⟨x, y⟩` modulo the screening prime, recording which words were
/// kept. Returns `None` as soon as it is clear the span stays proper.
fn screen(g: &LieAlgebra<PrimeField>, x: Vec<u64>, y: Vec<u64>) -> Option<(Vec<LieWord>, Vec<usize>)> {
    let n = g.dim();
    let mut ech = Echelon::new(*g.ring(), n);
    let mut words = Vec::new();
    let mut vecs = Vec::new();
    for (w, v) in [(LieWord::X, x), (LieWord::Y, y)] {
        if !ech.insert(&v) {
            return None;
        }
        words.push(w);
        vecs.push(v);
    }
    let mut i = 1;
    while i < vecs.len() && vecs.len() < n {
        for j in 0..i {
            let b = g.bracket(&vecs[j], &vecs[i]);
            if ech.insert(&b) {
                words.push(LieWord::Bracket(j, i));
                vecs.push(b);
                if vecs.len() == n {
                    break;
                }
            }
        }
        i += 1;
    }
    (vecs.len() == n).then(|| {
        let spanning = (0..n).collect();
        (words, spanning)
    })
}

fn factor(mut n: BigInt) -> (Vec<u64>, Option<BigInt>) {
    let mut primes = Vec::new();
    if n.is_zero() {
        return (primes, None);
    }
    let mut d = 2u64;
    while d <= FACTOR_BOUND && !n.is_one() {
        let db = BigInt::from(d);
        if (&n % &db).is_zero() {
            primes.push(d);
            while (&n % &db).is_zero() {
                n /= &db;
            }
        }
        if BigInt::from(d) * BigInt::from(d) > n {
            if let Some(q) = n.to_u64().filter(|&q| q > 1) {
                primes.push(q);
                n = BigInt::one();
            }
            break;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let rest = (!n.is_one()).then_some(n);
    (primes, rest)
}

impl CoveringLattice {
    /// Searches `±1/0` coordinate vectors by increasing total support for a
    /// pair generating the lattice over Q.
    pub fn favorable_pair(&self, budget: usize) -> Result<FavorablePair, FormError> {
        let n = self.rank();
        let fq = PrimeField::new(SCREEN_PRIME)?;
        let gq = self.reduce_algebra(fq);
        let mut cache: Vec<Vec<Vec<(usize, i8)>>> = vec![Vec::new()];
        let mut tried = 0;
        for total in 2..=2 * n {
            for sx in 1..=total / 2 {
                let sy = total - sx;
                if sy > n {
                    continue;
                }
                while cache.len() <= sy {
                    let s = cache.len();
                    cache.push(sign_vectors(n, s));
                }
                for (ix, xv) in cache[sx].iter().enumerate() {
                    for (iy, yv) in cache[sy].iter().enumerate() {
                        if sx == sy && iy <= ix {
                            continue;
                        }
                        tried += 1;
                        if tried > budget {
                            return Err(FormError::SearchExhausted(budget));
                        }
                        let conv = |c: i64| fq.from_i64(c);
                        let x = dense(n, xv, conv, 0);
                        let y = dense(n, yv, conv, 0);
                        if let Some((words, spanning)) = screen(&gq, x, y) {
                            let zx = dense(n, xv, BigInt::from, BigInt::zero());
                            let zy = dense(n, yv, BigInt::from, BigInt::zero());
                            return Ok(self.certify(zx, zy, words, spanning, tried));
                        }
                    }
                }
            }
        }
        Err(FormError::SearchExhausted(tried))
    }

    /// Evaluates the words exactly and factors the determinant of the
    /// spanning ones.
    pub fn certify(
        &self,
        x: Vec<BigInt>,
        y: Vec<BigInt>,
        words: Vec<LieWord>,
        spanning: Vec<usize>,
        tried: usize,
    ) -> FavorablePair {
        let g = &self.algebra;
        let mut vals: Vec<Vec<BigInt>> = Vec::with_capacity(words.len());
        for w in &words {
            let v = match *w {
                LieWord::X => x.clone(),
                LieWord::Y => y.clone(),
                LieWord::Bracket(a, b) => g.bracket(&vals[a], &vals[b]),
            };
            vals.push(v);
        }
        let rows: Vec<Vec<BigInt>> = spanning.iter().map(|&i| vals[i].clone()).collect();
        let rk = RationalMatrix::from_bigints(&rows).rank_kernel();
        let determinant = if rk.rank == self.rank() {
            rk.pivots.last().cloned().unwrap_or_else(BigInt::one).abs()
        } else {
            BigInt::zero()
        };
        let (bad_primes, unfactored) = factor(determinant.clone());
        FavorablePair { x, y, words, spanning, determinant, bad_primes, unfactored, candidates_tried: tried }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{Covering, FormDescriptor};

    fn lattice(label: &str) -> CoveringLattice {
        let form: FormDescriptor = label.parse().unwrap();
        Covering::new(&form, Covering::default_field(form.order())).unwrap().covering_lattice().unwrap()
    }

    #[test]
    fn sign_vector_counts() {
        assert_eq!(sign_vectors(4, 1).len(), 4);
        assert_eq!(sign_vectors(4, 2).len(), 12);
        assert_eq!(sign_vectors(5, 3).len(), 40);
        assert!(sign_vectors(3, 4).is_empty());
    }

    #[test]
    fn factor_small() {
        assert_eq!(factor(BigInt::from(360)), (vec![2, 3, 5], None));
        assert_eq!(factor(BigInt::from(1)), (vec![], None));
        assert_eq!(factor(BigInt::from(2 * 1_000_003u64)), (vec![2, 1_000_003], None));
    }

    #[test]
    fn split_a1_pair() {
        let l = lattice("A1");
        let fp = l.favorable_pair(DEFAULT_CANDIDATE_BUDGET).unwrap();
        let b = |i: usize| l.algebra.basis(i);
        assert_eq!((fp.x.clone(), fp.y.clone()), (b(0), b(1)));
        assert!(fp.bad_primes.iter().all(|p| [2, 3].contains(p)));
        assert!(fp.unfactored.is_none());
    }

    #[test]
    fn a2_and_twisted_a2_pairs() {
        for label in ["A2", "2A2"] {
            let l = lattice(label);
            let fp = l.favorable_pair(DEFAULT_CANDIDATE_BUDGET).unwrap();
            assert!(!fp.determinant.is_zero(), "{label}");
            assert_eq!(fp.spanning.len(), l.rank());
        }
    }
}
