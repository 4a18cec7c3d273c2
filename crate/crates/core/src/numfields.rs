//! Cyclic subfields of cyclotomic fields, inert primes and their densities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{bigint_serde, is_prime, mod_pow, primes_up_to, ArithError, NumberField};

/// Largest source prime tried by [`independent_family`].
pub const SOURCE_PRIME_BOUND: u64 = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberFieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree {d} does not divide {q} - 1")]
    DegreeNotDividing { q: u64, d: usize },
    #[error("degree {0} is not supported, expected 2 or 3")]
    UnsupportedDegree(usize),
    #[error("only {found} source primes for degree {d} below {bound}, wanted {wanted}")]
    InsufficientPrimes { d: usize, wanted: usize, found: usize, bound: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The degree-`d` subfield of Q(ζ_q), given by the minimal polynomial of a
/// Gaussian period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclotomicSubfield {
    pub q: u64,
    pub d: usize,
    /// Monic, low to high.
    #[serde(serialize_with = "bigint_serde::vec")]
    pub poly: Vec<BigInt>,
    /// Discriminant of `poly`: the field discriminant times the square of the index of `Z[η]`.
    #[serde(serialize_with = "bigint_serde::serialize")]
    pub discriminant: BigInt,
    /// `±q^{d-1}`.
    #[serde(serialize_with = "bigint_serde::serialize")]
    pub field_discriminant: BigInt,
    /// Primitive root `g` mod `q`; `ζ ↦ ζ^g` cycles the periods.
    pub generator: u64,
}

impl CyclotomicSubfield {
    /// Fails with `NotGalois` when the cubic Galois image has large coefficients.
    pub fn field(&self) -> Result<NumberField, ArithError> {
        NumberField::from_bigints(self.poly.clone())
    }
}

fn primitive_root(q: u64) -> u64 {
    let n = q - 1;
    let factors: Vec<u64> = (2..=n).filter(|&r| n % r == 0 && is_prime(r)).collect();
    (2..q)
        .find(|&g| factors.iter().all(|&r| mod_pow(g, (n / r) as u128, q) != 1))
        .unwrap_or(1)
}

/// Product in Z[x]/(x^q - 1).
fn cyclic_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let q = a.len();
    let mut out = vec![0i64; q];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[(i + j) % q] += x * y;
        }
    }
    out
}

/// The rational integer represented by `v`, using `1 + ζ + … + ζ^{q-1} = 0`.
fn rational_value(v: &[i64]) -> i64 {
    let top = v[v.len() - 1];
    assert!(v[1..].iter().all(|&c| c == top), "period polynomial coefficient is not rational");
    v[0] - top
}

/// Exact minimal polynomial of the Gaussian periods of degree `d` for the prime `q`.
pub fn gaussian_period_polynomial(q: u64, d: usize) -> Result<CyclotomicSubfield, NumberFieldError> {
    if !is_prime(q) {
        return Err(NumberFieldError::NotPrime(q));
    }
    if !(2..=3).contains(&d) {
        return Err(NumberFieldError::UnsupportedDegree(d));
    }
    if (q - 1) % d as u64 != 0 {
        return Err(NumberFieldError::DegreeNotDividing { q, d });
    }
    let g = primitive_root(q);
    let n = q as usize;
    let periods: Vec<Vec<i64>> = (0..d)
        .map(|j| {
            let mut v = vec![0i64; n];
            for k in (j..n - 1).step_by(d) {
                v[mod_pow(g, k as u128, q) as usize] += 1;
            }
            v
        })
        .collect();
    // coefficients of ∏ (x - η_j), low to high, each in Z[ζ]
    let mut one = vec![0i64; n];
    one[0] = 1;
    let mut poly = vec![one];
    for eta in &periods {
        let mut next = vec![vec![0i64; n]; poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            for (t, x) in next[k + 1].iter_mut().zip(c) {
                *t += x;
            }
            for (t, x) in next[k].iter_mut().zip(cyclic_mul(c, eta)) {
                *t -= x;
            }
        }
        poly = next;
    }
    let poly: Vec<BigInt> = poly.iter().map(|c| BigInt::from(rational_value(c))).collect();
    let discriminant = crate::arith::discriminant(&poly);
    let mut field_discriminant = BigInt::from(q).pow(d as u32 - 1);
    if d == 2 && q % 4 == 3 {
        field_discriminant = -field_discriminant;
    }
    Ok(CyclotomicSubfield { q, d, poly, discriminant, field_discriminant, generator: g })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeStatus {
    Inert,
    Split,
    Ramified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeClassification {
    pub p: u64,
    pub status: PrimeStatus,
}

fn has_root_mod(f: &[BigInt], p: u64) -> bool {
    let pb = BigInt::from(p);
    let c: Vec<u64> = f.iter().map(|x| x.mod_floor(&pb).to_u64().expect("reduced")).collect();
    (0..p).any(|x| c.iter().rev().fold(0u128, |acc, &a| (acc * x as u128 + a as u128) % p as u128) == 0)
}

/// Status of `p` for a monic `f` of degree at most 3.
///
/// # Panics
/// If `f` has degree 0 or more than 3.
pub fn classify_prime(f: &[BigInt], p: u64) -> PrimeClassification {
    let d = f.len().saturating_sub(1);
    assert!((1..=3).contains(&d), "degree {d} outside 1..=3");
    let disc = crate::arith::discriminant(f);
    let status = if (disc % BigInt::from(p)).is_zero() {
        PrimeStatus::Ramified
    } else if d > 1 && !has_root_mod(f, p) {
        PrimeStatus::Inert
    } else {
        PrimeStatus::Split
    };
    PrimeClassification { p, status }
}

pub fn classify_range(f: &[BigInt], bound: u64) -> Vec<PrimeClassification> {
    primes_up_to(bound).into_iter().map(|p| classify_prime(f, p)).collect()
}

/// Chebotarev density of primes at which `f` stays irreducible: the share of
/// `d`-cycles in its Galois group.
pub fn predicted_inert_density(f: &[BigInt]) -> f64 {
    match f.len().saturating_sub(1) {
        2 => 0.5,
        3 => {
            let disc = crate::arith::discriminant(f);
            let square = !disc.is_negative() && {
                let r = disc.sqrt();
                &r * &r == disc
            };
            if square {
                2.0 / 3.0
            } else {
                1.0 / 3.0
            }
        }
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    #[serde(serialize_with = "bigint_serde::vec_vec")]
    pub polys: Vec<Vec<BigInt>>,
    pub bound: u64,
    pub prime_count: usize,
    pub inert_counts: Vec<usize>,
    pub densities: Vec<f64>,
    pub predicted: Vec<f64>,
    pub union_count: usize,
    pub union_density: f64,
    /// `1 - ∏ (1 - δ_i)`, present when the discriminants are pairwise coprime.
    pub predicted_union: Option<f64>,
}

fn pairwise_coprime(xs: &[BigInt]) -> bool {
    xs.iter().enumerate().all(|(i, a)| xs[i + 1..].iter().all(|b| a.gcd(b).is_one()))
}

pub fn density_scan(polys: &[Vec<BigInt>], bound: u64) -> DensityReport {
    let primes = primes_up_to(bound);
    let m = polys.len();
    let (inert_counts, union_count) = primes
        .par_iter()
        .fold(
            || (vec![0usize; m], 0usize),
            |(mut counts, mut union), &p| {
                let mut any = false;
                for (c, f) in counts.iter_mut().zip(polys) {
                    if classify_prime(f, p).status == PrimeStatus::Inert {
                        *c += 1;
                        any = true;
                    }
                }
                union += usize::from(any);
                (counts, union)
            },
        )
        .reduce(
            || (vec![0usize; m], 0usize),
            |(a, x), (b, y)| (a.iter().zip(&b).map(|(s, t)| s + t).collect(), x + y),
        );
    let total = primes.len().max(1) as f64;
    let predicted: Vec<f64> = polys.iter().map(|f| predicted_inert_density(f)).collect();
    let discs: Vec<BigInt> = polys.iter().map(|f| crate::arith::discriminant(f)).collect();
    let predicted_union =
        pairwise_coprime(&discs).then(|| 1.0 - predicted.iter().map(|d| 1.0 - d).product::<f64>());
    DensityReport {
        polys: polys.to_vec(),
        bound,
        prime_count: primes.len(),
        densities: inert_counts.iter().map(|&c| c as f64 / total).collect(),
        inert_counts,
        predicted,
        union_count,
        union_density: union_count as f64 / total,
        predicted_union,
    }
}

/// `count` subfields of degree `d` from the smallest admissible source
/// primes; quadratic ones are taken real (`q ≡ 1 mod 4`).
pub fn independent_family(d: usize, count: usize) -> Result<Vec<CyclotomicSubfield>, NumberFieldError> {
    let modulus = match d {
        2 => 4,
        3 => 3,
        _ => return Err(NumberFieldError::UnsupportedDegree(d)),
    };
    let out: Vec<CyclotomicSubfield> = primes_up_to(SOURCE_PRIME_BOUND)
        .into_iter()
        .filter(|q| q % modulus == 1)
        .take(count)
        .map(|q| gaussian_period_polynomial(q, d))
        .collect::<Result<_, _>>()?;
    if out.len() < count {
        return Err(NumberFieldError::InsufficientPrimes { d, wanted: count, found: out.len(), bound: SOURCE_PRIME_BOUND });
    }
    Ok(out)
}

/// `|disc| = q^e` for some `e >= 1`.
pub fn is_power_of(n: &BigInt, q: u64) -> bool {
    let q = BigInt::from(q);
    let mut n = n.abs();
    if n.is_one() || n.is_zero() {
        return false;
    }
    while (&n % &q).is_zero() {
        n /= &q;
    }
    n.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Periods as complex numbers, polynomial expanded in floating point.
    fn float_oracle(q: u64, d: usize) -> Vec<i64> {
        let g = primitive_root(q);
        let etas: Vec<f64> = (0..d)
            .map(|j| {
                (j..(q as usize - 1))
                    .step_by(d)
                    .map(|k| (2.0 * std::f64::consts::PI * mod_pow(g, k as u128, q) as f64 / q as f64).cos())
                    .sum()
            })
            .collect();
        let mut poly = vec![1.0];
        for e in etas {
            let mut next = vec![0.0; poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * e;
            }
            poly = next;
        }
        poly.iter().map(|c| c.round() as i64).collect()
    }

    #[test]
    fn small_period_polynomials() {
        assert_eq!(gaussian_period_polynomial(5, 2).unwrap().poly, big(&[-1, 1, 1]));
        assert_eq!(gaussian_period_polynomial(7, 3).unwrap().poly, big(&[-1, -2, 1, 1]));
        let f = gaussian_period_polynomial(7, 2).unwrap();
        assert_eq!(f.poly, big(&[2, 1, 1]));
        assert_eq!(f.discriminant, BigInt::from(-7));
        let f = gaussian_period_polynomial(31, 3).unwrap();
        assert_eq!(f.poly, big(&[-8, -10, 1, 1]));
        assert_eq!(f.discriminant, BigInt::from(4 * 31 * 31));
        assert_eq!(gaussian_period_polynomial(7, 4), Err(NumberFieldError::UnsupportedDegree(4)));
        assert_eq!(gaussian_period_polynomial(11, 3), Err(NumberFieldError::DegreeNotDividing { q: 11, d: 3 }));
        assert_eq!(gaussian_period_polynomial(9, 2), Err(NumberFieldError::NotPrime(9)));
    }

    #[test]
    fn real_periods_match_float_oracle() {
        for (q, d) in [(5, 2), (13, 2), (17, 2), (29, 2), (7, 3), (13, 3), (19, 3), (31, 3), (37, 3)] {
            let f = gaussian_period_polynomial(q, d).unwrap();
            assert!(is_power_of(&f.field_discriminant, q), "q={q} d={d}");
            let (index, rem) = f.discriminant.div_rem(&f.field_discriminant);
            assert!(rem.is_zero() && !index.is_negative() && index.sqrt().pow(2) == index, "q={q} d={d}");
            assert_eq!(f.poly, big(&float_oracle(q, d)), "q={q} d={d}");
            if q < 20 {
                assert!(f.field().is_ok(), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn classification_examples() {
        let f = big(&[-1, 1, 1]);
        assert_eq!(classify_prime(&f, 2).status, PrimeStatus::Inert);
        assert_eq!(classify_prime(&f, 5).status, PrimeStatus::Ramified);
        assert_eq!(classify_prime(&f, 11).status, PrimeStatus::Split);
        for c in classify_range(&f, 10_000) {
            assert_eq!(c.status == PrimeStatus::Ramified, c.p == 5);
            if c.p != 5 {
                let inert = matches!(c.p % 5, 2 | 3);
                assert_eq!(c.status == PrimeStatus::Inert, inert, "p={}", c.p);
            }
        }
    }

    #[test]
    fn cubic_inert_primes_agree_with_number_field() {
        let s = gaussian_period_polynomial(7, 3).unwrap();
        let k = s.field().unwrap();
        for c in classify_range(&s.poly, 500) {
            assert_eq!(c.status == PrimeStatus::Inert, k.is_inert(c.p), "p={}", c.p);
        }
    }

    #[test]
    fn families() {
        let qs: Vec<u64> = independent_family(2, 3).unwrap().iter().map(|s| s.q).collect();
        assert_eq!(qs, vec![5, 13, 17]);
        let qs: Vec<u64> = independent_family(3, 2).unwrap().iter().map(|s| s.q).collect();
        assert_eq!(qs, vec![7, 13]);
        assert!(matches!(independent_family(2, 1000), Err(NumberFieldError::InsufficientPrimes { .. })));
    }

    #[test]
    fn union_prediction_requires_coprime_discriminants() {
        let f = big(&[-1, 1, 1]);
        let r = density_scan(&[f.clone(), f], 1000);
        assert_eq!(r.predicted_union, None);
        let r = density_scan(&[big(&[-1, 1, 1]), big(&[-3, 1, 1])], 1000);
        assert_eq!(r.predicted_union, Some(0.75));
        assert!(r.union_density >= r.densities[0]);
    }
}
