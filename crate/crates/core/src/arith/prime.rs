use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng as RandRng;

use super::{ArithError, FiniteField, Field, Ring};

/// Deterministic trial division; moduli in this crate stay below 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn mod_pow(mut base: u64, mut exp: u128, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime, `None` for zero.
pub fn mod_inv(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    Some(mod_pow(a, (p - 2) as u128, p))
}

/// The prime field F_p, p < 2^32.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p >= 1 << 32 {
            return Err(ArithError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn centered(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced value fits")
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        mod_inv(*a, self.p)
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u128 {
        self.p as u128
    }
    fn random<G: RandRng + ?Sized>(&self, rng: &mut G) -> u64 {
        rng.gen_range(0..self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality_and_sieve_agree() {
        let sieve = primes_up_to(1000);
        let trial: Vec<u64> = (0..=1000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, trial);
        assert_eq!(sieve.len(), 168);
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(PrimeField::new(91), Err(ArithError::NotPrime(91)));
        assert_eq!(PrimeField::new(1), Err(ArithError::NotPrime(1)));
    }

    #[test]
    fn field_axioms_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5, 101, 65521] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..1000 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                assert_eq!(
                    f.mul(&a, &f.add(&b, &c)),
                    f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                );
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
            }
        }
    }

    #[test]
    fn negative_integers_reduce() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.from_int(&BigInt::from(-15)), 6);
        assert_eq!(f.centered(6), -1);
    }
}
