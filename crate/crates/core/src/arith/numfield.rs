use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ArithError, ExtElem, ExtField, Ring};

/// Coordinates in the power basis `1, ω, …, ω^{d-1}`.
pub type NumberFieldInteger = Vec<BigInt>;

/// A field automorphism σ of order `order`, as a matrix on the power basis
/// (column j holds the coordinates of σ(ω^j)).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaloisAction {
    pub matrix: Vec<Vec<BigRational>>,
    pub order: usize,
}

/// The order Z[ω] = Z[x]/(f) for monic irreducible f of degree d <= 3, with
/// a generator of its (cyclic) Galois group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    f: Vec<BigInt>,
    d: usize,
    galois: GaloisAction,
    disc: BigInt,
}

/// Largest coefficient tried when searching for σ(ω) in degree 3.
const GALOIS_SEARCH_BOUND: i64 = 16;

impl NumberField {
    /// `f` is given low to high and must be monic.
    pub fn new(f: &[i64]) -> Result<Self, ArithError> {
        let f: Vec<BigInt> = f.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_bigints(f)
    }

    pub fn from_bigints(f: Vec<BigInt>) -> Result<Self, ArithError> {
        let d = f.len().saturating_sub(1);
        if !(1..=3).contains(&d) {
            return Err(ArithError::InvalidDegree(d));
        }
        if !f[d].is_one() {
            return Err(ArithError::NotMonic);
        }
        if d > 1 && has_integer_root(&f) {
            return Err(ArithError::BadGaloisAction("defining polynomial has a rational root".into()));
        }
        let disc = discriminant(&f);
        let mut field = Self {
            f,
            d,
            galois: GaloisAction { matrix: vec![vec![BigRational::one()]], order: 1 },
            disc,
        };
        field.galois = field.find_galois()?;
        Ok(field)
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.f
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn galois(&self) -> &GaloisAction {
        &self.galois
    }

    pub fn omega(&self) -> NumberFieldInteger {
        let mut v = vec![BigInt::zero(); self.d];
        if self.d == 1 {
            v[0] = -&self.f[0];
        } else {
            v[1] = BigInt::one();
        }
        v
    }

    fn eval_f(&self, x: &NumberFieldInteger) -> NumberFieldInteger {
        let mut acc = self.zero();
        for c in self.f.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.from_int(c));
        }
        acc
    }

    fn matrix_from_image(&self, img: &NumberFieldInteger) -> Vec<Vec<BigRational>> {
        let mut cols = Vec::with_capacity(self.d);
        let mut pw = self.one();
        for _ in 0..self.d {
            cols.push(pw.clone());
            pw = self.mul(&pw, img);
        }
        (0..self.d)
            .map(|i| (0..self.d).map(|j| BigRational::from_integer(cols[j][i].clone())).collect())
            .collect()
    }

    fn find_galois(&self) -> Result<GaloisAction, ArithError> {
        let d = self.d;
        if d == 1 {
            return Ok(GaloisAction { matrix: vec![vec![BigRational::one()]], order: 1 });
        }
        let image = if d == 2 {
            // roots sum to -a1
            vec![-&self.f[1], -BigInt::one()]
        } else {
            let b = GALOIS_SEARCH_BOUND;
            let omega = self.omega();
            let mut found = None;
            'search: for c2 in -b..=b {
                if c2 == 0 {
                    continue;
                }
                for c1 in -b..=b {
                    for c0 in -b..=b {
                        let cand = vec![BigInt::from(c0), BigInt::from(c1), BigInt::from(c2)];
                        if cand == omega {
                            continue;
                        }
                        if self.eval_f(&cand).iter().all(|x| x.is_zero()) {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            found.ok_or(ArithError::NotGalois(d))?
        };
        if !self.eval_f(&image).iter().all(|x| x.is_zero()) {
            return Err(ArithError::BadGaloisAction("σ(ω) is not a root of f".into()));
        }
        let action = GaloisAction { matrix: self.matrix_from_image(&image), order: d };
        // σ^d = id and no smaller power
        let mut x = self.omega();
        for k in 1..=d {
            x = apply_matrix(&action.matrix, &x);
            if (x == self.omega()) != (k == d) {
                return Err(ArithError::BadGaloisAction(format!("σ has wrong order (fixed ω at step {k})")));
            }
        }
        Ok(action)
    }

    pub fn sigma(&self, x: &NumberFieldInteger) -> NumberFieldInteger {
        apply_matrix(&self.galois.matrix, x)
    }

    pub fn sigma_pow(&self, x: &NumberFieldInteger, k: usize) -> NumberFieldInteger {
        (0..k % self.d).fold(x.clone(), |acc, _| self.sigma(&acc))
    }

    pub fn trace(&self, x: &NumberFieldInteger) -> BigInt {
        let mut acc = self.zero();
        let mut y = x.clone();
        for _ in 0..self.d {
            acc = self.add(&acc, &y);
            y = self.sigma(&y);
        }
        debug_assert!(acc[1..].iter().all(|c| c.is_zero()));
        acc[0].clone()
    }

    /// The residue field Z[ω]/(p) ≅ F_{p^d} for an inert prime p.
    pub fn residue_field(&self, p: u64) -> Result<ExtField, ArithError> {
        let pb = BigInt::from(p);
        if (&self.disc % &pb).is_zero() {
            return Err(ArithError::Ramified(p));
        }
        let red: Vec<i64> = self.f.iter().map(|c| c.mod_floor(&pb).to_i64().expect("reduced")).collect();
        match ExtField::new(p, &red) {
            Err(ArithError::NotIrreducible { root, .. }) => Err(ArithError::NotInert { p, root }),
            other => other,
        }
    }

    pub fn is_inert(&self, p: u64) -> bool {
        self.residue_field(p).is_ok()
    }

    /// Coefficient-wise reduction into `residue`.
    pub fn reduce(&self, residue: &ExtField, x: &NumberFieldInteger) -> ExtElem {
        let pb = BigInt::from(residue.p());
        if self.d == 1 {
            return [x[0].mod_floor(&pb).to_u64().expect("reduced"), 0, 0];
        }
        let c: Vec<u64> = x.iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced")).collect();
        residue.from_coeffs(&c)
    }

    pub fn reduce_mod_p(&self, x: &NumberFieldInteger, p: u64) -> Result<ExtElem, ArithError> {
        let k = self.residue_field(p)?;
        Ok(self.reduce(&k, x))
    }

    /// The exponent j with reduce(σ x) = Frob^j(reduce x).
    pub fn frobenius_alignment(&self, residue: &ExtField) -> usize {
        if self.d == 1 {
            return 0;
        }
        let target = self.reduce(residue, &self.sigma(&self.omega()));
        let w = self.reduce(residue, &self.omega());
        (1..self.d)
            .find(|&j| residue.frobenius_pow(&w, j) == target)
            .expect("σ reduces to a power of Frobenius at an inert prime")
    }

    pub fn from_coeffs(&self, c: &[i64]) -> NumberFieldInteger {
        assert!(c.len() <= self.d);
        let mut v = vec![BigInt::zero(); self.d];
        for (x, &y) in v.iter_mut().zip(c) {
            *x = BigInt::from(y);
        }
        v
    }
}

fn apply_matrix(m: &[Vec<BigRational>], x: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| {
            let s = row
                .iter()
                .zip(x)
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * BigRational::from_integer(b.clone()));
            assert!(s.is_integer(), "Galois image left the order");
            s.to_integer()
        })
        .collect()
}

fn has_integer_root(f: &[BigInt]) -> bool {
    let c0 = f[0].abs();
    if c0.is_zero() {
        return true;
    }
    let c0 = c0.to_u64().expect("small constant term");
    (1..=c0).filter(|k| c0 % k == 0).any(|k| {
        [BigInt::from(k), -BigInt::from(k)].iter().any(|r| {
            let v = f.iter().rev().fold(BigInt::zero(), |acc, c| acc * r + c);
            v.is_zero()
        })
    })
}

/// Discriminant of a monic polynomial of degree at most 3 (low-to-high coefficients).
pub fn discriminant(f: &[BigInt]) -> BigInt {
    match f.len() - 1 {
        1 => BigInt::one(),
        2 => &f[1] * &f[1] - BigInt::from(4) * &f[0],
        3 => {
            let (b, c, d) = (&f[2], &f[1], &f[0]);
            b * b * c * c - BigInt::from(4) * c * c * c - BigInt::from(4) * b * b * b * d
                - BigInt::from(27) * d * d
                + BigInt::from(18) * b * c * d
        }
        n => panic!("discriminant for degree {n} not supported"),
    }
}

impl Ring for NumberField {
    type Elem = NumberFieldInteger;

    fn zero(&self) -> NumberFieldInteger {
        vec![BigInt::zero(); self.d]
    }
    fn one(&self) -> NumberFieldInteger {
        let mut v = self.zero();
        v[0] = BigInt::one();
        v
    }
    fn add(&self, a: &NumberFieldInteger, b: &NumberFieldInteger) -> NumberFieldInteger {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn neg(&self, a: &NumberFieldInteger) -> NumberFieldInteger {
        a.iter().map(|x| -x).collect()
    }
    fn mul(&self, a: &NumberFieldInteger, b: &NumberFieldInteger) -> NumberFieldInteger {
        let d = self.d;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] -= &c * &self.f[i];
            }
        }
        prod.truncate(d);
        prod
    }
    fn from_int(&self, n: &BigInt) -> NumberFieldInteger {
        let mut v = self.zero();
        v[0] = n.clone();
        v
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &NumberFieldInteger) -> bool {
        a.iter().all(|x| x.is_zero())
    }
}
