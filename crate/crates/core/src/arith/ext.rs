use num_bigint::BigInt;
use rand::Rng as RandRng;

use super::prime::{is_prime, mod_inv};
use super::{ArithError, Field, FiniteField, PrimeField, Ring};

/// Coordinates in the power basis `1, x, x^2`; unused slots are zero.
pub type ExtElem = [u64; 3];

/// F_{p^d} = F_p[x]/(f) for monic irreducible f of degree d <= 3.
///
/// A degree-1 modulus is accepted and yields the trivial extension, which is
/// F_p itself with `x` identified with the root of f.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtField {
    base: PrimeField,
    d: usize,
    /// Monic modulus, coefficients low to high (length d + 1).
    modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(p: u64, modulus: &[i64]) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        let base = PrimeField::new(p)?;
        let d = modulus.len().saturating_sub(1);
        if !(1..=3).contains(&d) {
            return Err(ArithError::InvalidDegree(d));
        }
        let modulus: Vec<u64> = modulus.iter().map(|&c| base.reduce_i64(c)).collect();
        if modulus[d] != 1 {
            return Err(ArithError::NotMonic);
        }
        // degree <= 3: irreducible iff no root
        if d > 1 {
            if let Some(root) = find_root(&base, &modulus) {
                return Err(ArithError::NotIrreducible { p, root });
            }
        }
        Ok(Self { base, d, modulus })
    }

    /// Some irreducible monic polynomial of degree `d`, smallest in lexicographic
    /// order of its low coefficients.
    pub fn with_degree(p: u64, d: usize) -> Result<Self, ArithError> {
        let base = PrimeField::new(p)?;
        if d == 1 {
            return Self::new(p, &[0, 1]);
        }
        if !(2..=3).contains(&d) {
            return Err(ArithError::InvalidDegree(d));
        }
        let total = p.pow(d as u32);
        for code in 0..total {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                coeffs.push(c % p);
                c /= p;
            }
            coeffs.push(1);
            if find_root(&base, &coeffs).is_none() {
                let signed: Vec<i64> = coeffs.iter().map(|&v| v as i64).collect();
                return Self::new(p, &signed);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.d == 1
    }

    /// The class of `x`.
    pub fn generator(&self) -> ExtElem {
        let mut e = [0; 3];
        if self.d == 1 {
            e[0] = self.base.neg(&self.modulus[0]);
        } else {
            e[1] = 1;
        }
        e
    }

    pub fn from_base(&self, c: u64) -> ExtElem {
        [c % self.p(), 0, 0]
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> ExtElem {
        let mut e = [0; 3];
        for (i, &c) in coeffs.iter().enumerate() {
            assert!(i < self.d || c % self.p() == 0, "coefficient beyond degree");
            if i < self.d {
                e[i] = c % self.p();
            }
        }
        e
    }

    pub fn coeffs<'a>(&self, e: &'a ExtElem) -> &'a [u64] {
        &e[..self.d]
    }

    /// `Some(c)` when the element lies in the prime subfield.
    pub fn as_base(&self, e: &ExtElem) -> Option<u64> {
        if e[1..].iter().all(|&c| c == 0) {
            Some(e[0])
        } else {
            None
        }
    }

    pub fn pow(&self, a: &ExtElem, mut exp: u128) -> ExtElem {
        let mut acc = self.one();
        let mut base = *a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// The p-power map.
    pub fn frobenius(&self, a: &ExtElem) -> ExtElem {
        self.pow(a, self.p() as u128)
    }

    pub fn frobenius_pow(&self, a: &ExtElem, k: usize) -> ExtElem {
        (0..k % self.d.max(1)).fold(*a, |acc, _| self.frobenius(&acc))
    }

    /// Matrix of the Frobenius on the power basis: column j holds frob(x^j).
    pub fn frobenius_matrix(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0; self.d]; self.d];
        for j in 0..self.d {
            let mut basis = [0; 3];
            basis[j] = 1;
            let img = self.frobenius(&basis);
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = img[i];
            }
        }
        m
    }
}

fn find_root(base: &PrimeField, coeffs: &[u64]) -> Option<u64> {
    (0..base.p()).find(|&x| {
        let mut acc = 0;
        for c in coeffs.iter().rev() {
            acc = base.add(&base.mul(&acc, &x), c);
        }
        acc == 0
    })
}

impl Ring for ExtField {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        [0; 3]
    }
    fn one(&self) -> ExtElem {
        [1 % self.p(), 0, 0]
    }
    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let f = &self.base;
        [f.add(&a[0], &b[0]), f.add(&a[1], &b[1]), f.add(&a[2], &b[2])]
    }
    fn neg(&self, a: &ExtElem) -> ExtElem {
        let f = &self.base;
        [f.neg(&a[0]), f.neg(&a[1]), f.neg(&a[2])]
    }
    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let f = &self.base;
        let d = self.d;
        let mut prod = [0u64; 5];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = f.add(&prod[i + j], &f.mul(&a[i], &b[j]));
            }
        }
        // x^d = -(m_0 + ... + m_{d-1} x^{d-1})
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..d {
                let t = f.mul(&c, &self.modulus[i]);
                prod[k - d + i] = f.sub(&prod[k - d + i], &t);
            }
        }
        let mut out = [0; 3];
        out[..d].copy_from_slice(&prod[..d]);
        out
    }
    fn from_int(&self, n: &BigInt) -> ExtElem {
        [self.base.from_int(n), 0, 0]
    }
    fn from_i64(&self, n: i64) -> ExtElem {
        [self.base.reduce_i64(n), 0, 0]
    }
    fn characteristic(&self) -> u64 {
        self.p()
    }
}

impl Field for ExtField {
    fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        if *a == [0; 3] {
            return None;
        }
        if self.d == 1 {
            return mod_inv(a[0], self.p()).map(|v| [v, 0, 0]);
        }
        Some(self.pow(a, self.order() - 2))
    }
}

impl FiniteField for ExtField {
    fn order(&self) -> u128 {
        (self.p() as u128).pow(self.d as u32)
    }
    fn random<G: RandRng + ?Sized>(&self, rng: &mut G) -> ExtElem {
        let mut e = [0; 3];
        for c in e.iter_mut().take(self.d) {
            *c = rng.gen_range(0..self.p());
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn f4_is_valid_and_frobenius_squares() {
        let f4 = ExtField::new(2, &[1, 1, 1]).unwrap();
        assert_eq!(f4.order(), 4);
        let x = f4.generator();
        // x^2 = x + 1 in F_2[x]/(x^2+x+1)
        assert_eq!(f4.frobenius(&x), [1, 1, 0]);
    }

    #[test]
    fn reducible_quadratic_rejected() {
        // x^2 + x - 1 = (x - 2)^2 mod 5
        assert_eq!(
            ExtField::new(5, &[-1, 1, 1]),
            Err(ArithError::NotIrreducible { p: 5, root: 2 })
        );
    }

    #[test]
    fn composite_characteristic_rejected() {
        assert_eq!(ExtField::new(9, &[1, 0, 1]), Err(ArithError::NotPrime(9)));
    }

    #[test]
    fn degree_one_is_the_prime_field() {
        let f = ExtField::new(7, &[0, 1]).unwrap();
        assert!(f.is_trivial());
        assert_eq!(f.order(), 7);
        assert_eq!(f.generator(), [0, 0, 0]);
        let a = [3, 0, 0];
        assert_eq!(f.frobenius(&a), a);
    }

    #[test]
    fn field_axioms_and_frobenius_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let fields = [
            ExtField::new(7, &[-1, 1, 1]).unwrap(),
            ExtField::new(5, &[-1, -2, 1, 1]).unwrap(),
            ExtField::with_degree(13, 3).unwrap(),
            ExtField::with_degree(101, 2).unwrap(),
        ];
        for f in &fields {
            for _ in 0..1000 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert_eq!(
                    f.mul(&a, &f.add(&b, &c)),
                    f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                );
                if a != f.zero() {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
                }
            }
            for _ in 0..100 {
                let (a, b) = (f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.frobenius(&f.add(&a, &b)), f.add(&f.frobenius(&a), &f.frobenius(&b)));
                assert_eq!(f.frobenius(&f.mul(&a, &b)), f.mul(&f.frobenius(&a), &f.frobenius(&b)));
                assert_eq!(f.frobenius_pow(&a, f.degree()), a);
                let repeated = (0..f.degree()).fold(a, |acc, _| f.frobenius(&acc));
                assert_eq!(repeated, a);
                if f.frobenius(&a) == a {
                    assert!(f.as_base(&a).is_some());
                }
                let c = f.from_base(rng.gen_range(0..f.p()));
                assert_eq!(f.frobenius(&c), c);
            }
        }
    }

    #[test]
    fn frobenius_matrix_matches_map() {
        let f = ExtField::new(5, &[-1, -2, 1, 1]).unwrap();
        let m = f.frobenius_matrix();
        let a = [2, 3, 4];
        let img = f.frobenius(&a);
        for i in 0..3 {
            let s = (0..3).fold(0, |acc, j| (acc + m[i][j] * a[j]) % 5);
            assert_eq!(s, img[i]);
        }
    }
}
