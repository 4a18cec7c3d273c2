//! Lie algebras given by structure constants over any [`Ring`].

mod chevalley;
mod json;
mod matrix;
mod witt;

use rand::{Rng as RandRng, SeedableRng};

use crate::arith::{Echelon, Field, FiniteField, Ring};

pub use chevalley::{chevalley_algebra, chevalley_algebra_over, chevalley_labels};
pub use json::{algebra_from_json, algebra_to_json, JsonRing};
pub use matrix::{matrix_to_vector, sl_n_algebra, vector_to_matrix};
pub use witt::witt_algebra;

pub type Vector<E> = Vec<E>;
/// Dense matrix acting on column vectors; `m[k][j]` is the `e_k` coordinate of the image of `e_j`.
pub type Matrix<E> = Vec<Vec<E>>;

/// Jacobi identity is checked on every triple up to this dimension and sampled above it.
pub const FULL_JACOBI_DIM: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("structure constants not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("basis index out of range in structure constants")]
    IndexOutOfRange,
    #[error("ad_z is not nilpotent")]
    NotNilpotent,
    #[error("characteristic {p} too small for nilpotency order {order}")]
    CharTooSmall { p: u64, order: usize },
    #[error("Witt algebra needs a prime p >= 5, got {0}")]
    InvalidWittPrime(u64),
    #[error("unknown basis label {0}")]
    UnknownLabel(String),
    #[error("malformed algebra description: {0}")]
    Format(String),
}

/// A Lie algebra with basis `e_0, …, e_{d-1}` and sparse structure constants
/// `[e_i, e_j] = Σ_k c_{ij}^k e_k`.
#[derive(Debug, Clone)]
pub struct LieAlgebra<R: Ring> {
    ring: R,
    labels: Vec<String>,
    table: Vec<Vec<(usize, R::Elem)>>,
}

impl<R: Ring> LieAlgebra<R> {
    /// Builds the algebra from triples `(i, j, k, c)`; entries for `(j, i)` are
    /// implied by antisymmetry when absent and checked when present. Repeated
    /// triples accumulate.
    pub fn new(ring: R, labels: Vec<String>, constants: Vec<(usize, usize, usize, R::Elem)>) -> Result<Self, LieError> {
        let g = Self::from_constants(ring, labels, constants)?;
        g.check_antisymmetry()?;
        if g.dim() <= FULL_JACOBI_DIM {
            g.check_jacobi()?;
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            g.check_jacobi_sampled(&mut rng, 10_000)?;
        }
        Ok(g)
    }

    /// Like [`LieAlgebra::new`] but without the Jacobi check.
    pub fn from_constants(
        ring: R,
        labels: Vec<String>,
        constants: Vec<(usize, usize, usize, R::Elem)>,
    ) -> Result<Self, LieError> {
        let d = labels.len();
        let mut dense: Vec<Vec<R::Elem>> = vec![Vec::new(); d * d];
        let mut explicit = vec![false; d * d];
        for (i, j, k, c) in constants {
            if i >= d || j >= d || k >= d {
                return Err(LieError::IndexOutOfRange);
            }
            let cell = &mut dense[i * d + j];
            if cell.is_empty() {
                *cell = vec![ring.zero(); d];
            }
            cell[k] = ring.add(&cell[k], &c);
            explicit[i * d + j] = true;
        }
        for i in 0..d {
            for j in 0..d {
                if explicit[i * d + j] && !explicit[j * d + i] {
                    let neg: Vec<R::Elem> = dense[i * d + j].iter().map(|c| ring.neg(c)).collect();
                    dense[j * d + i] = neg;
                    explicit[j * d + i] = true;
                }
            }
        }
        let table = dense
            .into_iter()
            .map(|cell| {
                cell.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !ring.is_zero(c))
                    .collect()
            })
            .collect();
        Ok(Self { ring, labels, table })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `[e_i, e_j]` as sparse `(k, c)` pairs.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, R::Elem)] {
        &self.table[i * self.dim() + j]
    }

    pub fn zero(&self) -> Vector<R::Elem> {
        vec![self.ring.zero(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Vector<R::Elem> {
        let mut v = self.zero();
        v[i] = self.ring.one();
        v
    }

    pub fn is_zero(&self, v: &[R::Elem]) -> bool {
        v.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn add(&self, x: &[R::Elem], y: &[R::Elem]) -> Vector<R::Elem> {
        x.iter().zip(y).map(|(a, b)| self.ring.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[R::Elem], y: &[R::Elem]) -> Vector<R::Elem> {
        x.iter().zip(y).map(|(a, b)| self.ring.sub(a, b)).collect()
    }

    pub fn neg(&self, x: &[R::Elem]) -> Vector<R::Elem> {
        x.iter().map(|a| self.ring.neg(a)).collect()
    }

    pub fn scale(&self, c: &R::Elem, x: &[R::Elem]) -> Vector<R::Elem> {
        x.iter().map(|a| self.ring.mul(c, a)).collect()
    }

    /// Linear combination `Σ c_i v_i`.
    pub fn combine(&self, terms: &[(R::Elem, &[R::Elem])]) -> Vector<R::Elem> {
        let mut out = self.zero();
        for (c, v) in terms {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                if !self.ring.is_zero(x) {
                    *o = self.ring.add(o, &self.ring.mul(c, x));
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &[R::Elem], y: &[R::Elem]) -> Vector<R::Elem> {
        let r = &self.ring;
        let d = self.dim();
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if r.is_zero(b) {
                    continue;
                }
                let cell = &self.table[i * d + j];
                if cell.is_empty() {
                    continue;
                }
                let ab = r.mul(a, b);
                for (k, c) in cell {
                    out[*k] = r.add(&out[*k], &r.mul(&ab, c));
                }
            }
        }
        out
    }

    /// Matrix of `ad_x`.
    pub fn ad(&self, x: &[R::Elem]) -> Matrix<R::Elem> {
        let d = self.dim();
        let mut m = vec![vec![self.ring.zero(); d]; d];
        for j in 0..d {
            let col = self.bracket(x, &self.basis(j));
            for (k, c) in col.into_iter().enumerate() {
                m[k][j] = c;
            }
        }
        m
    }

    pub fn apply(&self, m: &Matrix<R::Elem>, v: &[R::Elem]) -> Vector<R::Elem> {
        apply_matrix(&self.ring, m, v)
    }

    pub fn check_antisymmetry(&self) -> Result<(), LieError> {
        let d = self.dim();
        for i in 0..d {
            for j in i..d {
                let a = self.bracket(&self.basis(i), &self.basis(j));
                let b = self.bracket(&self.basis(j), &self.basis(i));
                if self.add(&a, &b) != self.zero() {
                    return Err(LieError::NotAntisymmetric(i, j));
                }
                if i == j && !self.is_zero(&a) {
                    return Err(LieError::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    fn jacobi_at(&self, i: usize, j: usize, k: usize) -> bool {
        let (a, b, c) = (self.basis(i), self.basis(j), self.basis(k));
        let t1 = self.bracket(&a, &self.bracket(&b, &c));
        let t2 = self.bracket(&b, &self.bracket(&c, &a));
        let t3 = self.bracket(&c, &self.bracket(&a, &b));
        self.is_zero(&self.add(&self.add(&t1, &t2), &t3))
    }

    /// Jacobi identity on all basis triples `i < j < k` (the others follow
    /// from antisymmetry).
    pub fn check_jacobi(&self) -> Result<(), LieError> {
        let d = self.dim();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    if !self.jacobi_at(i, j, k) {
                        return Err(LieError::Jacobi(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_jacobi_sampled<G: RandRng + ?Sized>(&self, rng: &mut G, samples: usize) -> Result<(), LieError> {
        let d = self.dim();
        for _ in 0..samples {
            let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
            if !self.jacobi_at(i, j, k) {
                return Err(LieError::Jacobi(i, j, k));
            }
        }
        Ok(())
    }

    /// Base change along a ring map.
    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> LieAlgebra<S> {
        let table = self
            .table
            .iter()
            .map(|cell| {
                cell.iter()
                    .map(|(k, c)| (*k, f(c)))
                    .filter(|(_, c)| !target.is_zero(c))
                    .collect()
            })
            .collect();
        LieAlgebra { ring: target, labels: self.labels.clone(), table }
    }

    /// All nonzero structure constants as `(i, j, k, c)`.
    pub fn constants(&self) -> Vec<(usize, usize, usize, R::Elem)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, c) in &self.table[i * d + j] {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    /// Parses `label`, `c*label` and sums of those, e.g. `e10+2*f01`. The
    /// aliases `e`, `f`, `h` stand for the sum of all basis vectors whose
    /// label starts with that letter and has a single nonzero digit.
    pub fn parse_element(&self, s: &str) -> Result<Vector<R::Elem>, LieError> {
        let mut out = self.zero();
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        // a '-' between a letter and a digit belongs to a label such as `e-1`
        let chars: Vec<char> = s.chars().collect();
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, &ch) in chars.iter().enumerate() {
            let in_label = i > 0
                && chars[i - 1].is_ascii_alphabetic()
                && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit());
            let split = ch == '+' || (ch == '-' && !in_label);
            if split && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            if ch != '+' {
                cur.push(ch);
            }
        }
        terms.push(cur);
        for term in terms.iter().filter(|t| !t.is_empty()) {
            let (coef, name) = match term.split_once('*') {
                Some((c, n)) => (
                    c.parse::<i64>().map_err(|_| LieError::UnknownLabel(term.to_string()))?,
                    n.to_string(),
                ),
                None => match term.strip_prefix('-') {
                    Some(rest) => (-1, rest.to_string()),
                    None => (1, term.to_string()),
                },
            };
            let v = self.named_vector(&name)?;
            out = self.combine(&[(self.ring.one(), &out), (self.ring.from_i64(coef), &v)]);
        }
        Ok(out)
    }

    fn named_vector(&self, name: &str) -> Result<Vector<R::Elem>, LieError> {
        if let Some(i) = self.label_index(name) {
            return Ok(self.basis(i));
        }
        if let Some(c) = name.strip_prefix('-').and_then(|n| self.label_index(n)) {
            return Ok(self.neg(&self.basis(c)));
        }
        if matches!(name, "e" | "f" | "h") {
            let mut v = self.zero();
            let mut any = false;
            for (i, l) in self.labels.iter().enumerate() {
                let Some(rest) = l.strip_prefix(name) else { continue };
                let simple = if name == "h" {
                    rest.chars().all(|c| c.is_ascii_digit())
                } else {
                    rest.chars().all(|c| c == '0' || c == '1') && rest.chars().filter(|&c| c == '1').count() == 1
                };
                if simple {
                    v[i] = self.ring.one();
                    any = true;
                }
            }
            if any {
                return Ok(v);
            }
        }
        Err(LieError::UnknownLabel(name.to_string()))
    }

    pub fn format_vector(&self, v: &[R::Elem]) -> String
    where
        R::Elem: std::fmt::Display,
    {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(i, c)| format!("{}*{}", c, self.labels[i]))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

pub fn apply_matrix<R: Ring>(ring: &R, m: &Matrix<R::Elem>, v: &[R::Elem]) -> Vector<R::Elem> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(ring.zero(), |acc, (a, b)| {
                if ring.is_zero(a) || ring.is_zero(b) {
                    acc
                } else {
                    ring.add(&acc, &ring.mul(a, b))
                }
            })
        })
        .collect()
}

pub fn matmul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![ring.zero(); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if ring.is_zero(aik) {
                continue;
            }
            for j in 0..m {
                if !ring.is_zero(&b[k][j]) {
                    out[i][j] = ring.add(&out[i][j], &ring.mul(aik, &b[k][j]));
                }
            }
        }
    }
    out
}

/// Elements `e, h, f` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Triple<E> {
    pub e: Vector<E>,
    pub h: Vector<E>,
    pub f: Vector<E>,
}

impl<E: Clone + PartialEq> Sl2Triple<E> {
    pub fn verify<R: Ring<Elem = E>>(&self, g: &LieAlgebra<R>) -> bool {
        let two = g.ring().from_i64(2);
        let he = g.bracket(&self.h, &self.e);
        let hf = g.bracket(&self.h, &self.f);
        let ef = g.bracket(&self.e, &self.f);
        he == g.scale(&two, &self.e) && hf == g.scale(&g.ring().neg(&two), &self.f) && ef == self.h
    }
}

/// Smallest `m >= 1` with `M^m = 0`, if any.
pub fn nilpotency_order<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Option<usize> {
    let d = m.len();
    let mut pw = m.clone();
    for k in 1..=d + 1 {
        if pw.iter().all(|row| row.iter().all(|c| ring.is_zero(c))) {
            return Some(k);
        }
        pw = matmul(ring, &pw, m);
    }
    None
}

fn inverse_factorial<F: Field>(field: &F, i: usize) -> F::Elem {
    let fact = (1..=i as i64).fold(field.one(), |acc, k| field.mul(&acc, &field.from_i64(k)));
    field.inv(&fact).expect("factorial invertible below the characteristic")
}

fn check_char(p: u64, order: usize) -> Result<(), LieError> {
    if p != 0 && p as usize <= order {
        return Err(LieError::CharTooSmall { p, order });
    }
    Ok(())
}

impl<F: Field> LieAlgebra<F> {
    /// `exp(ad_z) = Σ_{i<m} ad_z^i / i!` where `m` is the nilpotency order of `ad_z`.
    pub fn exp_ad(&self, z: &[F::Elem]) -> Result<Matrix<F::Elem>, LieError> {
        let f = &self.ring;
        let ad = self.ad(z);
        let m = nilpotency_order(f, &ad).ok_or(LieError::NotNilpotent)?;
        check_char(f.characteristic(), m)?;
        let d = self.dim();
        let mut out: Matrix<F::Elem> = (0..d).map(|i| self.basis(i)).collect();
        let mut pw = ad.clone();
        for i in 1..m {
            let c = inverse_factorial(f, i);
            for (orow, prow) in out.iter_mut().zip(&pw) {
                for (o, x) in orow.iter_mut().zip(prow) {
                    if !f.is_zero(x) {
                        *o = f.add(o, &f.mul(&c, x));
                    }
                }
            }
            pw = matmul(f, &pw, &ad);
        }
        Ok(out)
    }

    /// `exp(ad_z)(v)` using only the local nilpotency of `ad_z` on `v`.
    /// Returns the image and the local order (number of nonzero terms).
    pub fn exp_ad_apply(&self, z: &[F::Elem], v: &[F::Elem]) -> Result<(Vector<F::Elem>, usize), LieError> {
        let f = &self.ring;
        let mut out = v.to_vec();
        let mut term = v.to_vec();
        let mut order = 1;
        if self.is_zero(v) {
            return Ok((out, 0));
        }
        loop {
            term = self.bracket(z, &term);
            if self.is_zero(&term) {
                break;
            }
            order += 1;
            if order > self.dim() + 1 {
                return Err(LieError::NotNilpotent);
            }
            check_char(f.characteristic(), order)?;
            let c = inverse_factorial(f, order - 1);
            out = self.add(&out, &self.scale(&c, &term));
        }
        Ok((out, order))
    }

    /// Smallest subalgebra containing `gens`, as an echelon basis.
    pub fn subalgebra_closure(&self, gens: &[Vector<F::Elem>]) -> Echelon<F> {
        let mut ech = Echelon::new(self.ring.clone(), self.dim());
        for g in gens {
            ech.insert(g);
        }
        let mut i = 0;
        while i < ech.rank() && !ech.is_full() {
            for j in 0..i {
                let b = self.bracket(&ech.generators()[i], &ech.generators()[j]);
                ech.insert(&b);
            }
            i += 1;
        }
        ech
    }

    pub fn generates(&self, gens: &[Vector<F::Elem>]) -> bool {
        self.subalgebra_closure(gens).is_full()
    }

    /// Ideal generated by `v`.
    pub fn ideal_closure(&self, v: &[F::Elem]) -> Echelon<F> {
        let mut ech = Echelon::new(self.ring.clone(), self.dim());
        ech.insert(v);
        let mut i = 0;
        while i < ech.rank() && !ech.is_full() {
            let w = ech.generators()[i].clone();
            for k in 0..self.dim() {
                let b = self.bracket(&self.basis(k), &w);
                ech.insert(&b);
            }
            i += 1;
        }
        ech
    }
}

/// Outcome of the Monte Carlo simplicity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicityVerdict<E> {
    /// Every sampled nonzero vector generated the whole algebra as an ideal.
    ProbablySimple { trials: usize },
    /// A certified proper nonzero ideal (or an abelian algebra).
    ProperIdeal { generator: Vector<E>, basis: Vec<Vector<E>> },
}

impl<E> SimplicityVerdict<E> {
    pub fn is_probably_simple(&self) -> bool {
        matches!(self, SimplicityVerdict::ProbablySimple { .. })
    }
}

impl<F: FiniteField> LieAlgebra<F> {
    pub fn random_vector<G: RandRng + ?Sized>(&self, rng: &mut G) -> Vector<F::Elem> {
        (0..self.dim()).map(|_| self.ring.random(rng)).collect()
    }

    /// Samples `trials` random nonzero vectors; a vector whose ideal is proper
    /// is a certified counterexample to simplicity.
    pub fn simplicity_check<G: RandRng + ?Sized>(&self, trials: usize, rng: &mut G) -> SimplicityVerdict<F::Elem> {
        if self.table.iter().all(|c| c.is_empty()) && self.dim() > 0 {
            let generator = self.basis(0);
            return SimplicityVerdict::ProperIdeal { basis: vec![generator.clone()], generator };
        }
        // basis vectors first: they catch centres and graded ideals cheaply
        let mut candidates: Vec<Vector<F::Elem>> = (0..self.dim()).map(|i| self.basis(i)).collect();
        while candidates.len() < self.dim() + trials {
            let v = self.random_vector(rng);
            if !self.is_zero(&v) {
                candidates.push(v);
            }
        }
        for v in candidates {
            let ideal = self.ideal_closure(&v);
            if !ideal.is_full() {
                return SimplicityVerdict::ProperIdeal { generator: v, basis: ideal.basis() };
            }
        }
        SimplicityVerdict::ProbablySimple { trials }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PrimeField, Rationals};
    use crate::roots::{RootSystem, RootType};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sl2_q() -> LieAlgebra<Rationals> {
        chevalley_algebra_over(&RootSystem::new(RootType::A, 1).unwrap(), Rationals)
    }

    #[test]
    fn sl2_relations() {
        let g = sl2_q();
        let e = g.parse_element("e").unwrap();
        let f = g.parse_element("f").unwrap();
        let h = g.parse_element("h").unwrap();
        assert_eq!(g.bracket(&e, &f), h);
        assert!(g.is_zero(&g.bracket(&e, &e)));
        let t = Sl2Triple { e, h, f };
        assert!(t.verify(&g));
    }

    #[test]
    fn exp_ad_of_e_on_f() {
        let g = sl2_q();
        let e = g.parse_element("e").unwrap();
        let f = g.parse_element("f").unwrap();
        let m = g.exp_ad(&e).unwrap();
        let expected = g.parse_element("f+h-e").unwrap();
        assert_eq!(g.apply(&m, &f), expected);
        let (local, order) = g.exp_ad_apply(&e, &f).unwrap();
        assert_eq!(local, expected);
        assert_eq!(order, 3);
        let zero = g.zero();
        let id = g.exp_ad(&zero).unwrap();
        for i in 0..3 {
            assert_eq!(g.apply(&id, &g.basis(i)), g.basis(i));
        }
        assert_eq!(g.ring().one(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn exp_ad_rejects_small_characteristic() {
        let rs = RootSystem::new(RootType::A, 1).unwrap();
        let g = chevalley_algebra_over(&rs, PrimeField::new(3).unwrap());
        let e = g.parse_element("e").unwrap();
        assert_eq!(g.exp_ad(&e), Err(LieError::CharTooSmall { p: 3, order: 3 }));
        let h = g.parse_element("h").unwrap();
        let g5 = chevalley_algebra_over(&rs, PrimeField::new(5).unwrap());
        assert_eq!(g5.exp_ad(&g5.parse_element("h").unwrap()), Err(LieError::NotNilpotent));
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn exp_ad_preserves_brackets() {
        let rs = RootSystem::new(RootType::A, 2).unwrap();
        let f = PrimeField::new(11).unwrap();
        let g = chevalley_algebra_over(&rs, f);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z = g.combine(&[(3, &g.parse_element("e10").unwrap()), (5, &g.parse_element("e11").unwrap())]);
        let m = g.exp_ad(&z).unwrap();
        for _ in 0..100 {
            let (x, y) = (g.random_vector(&mut rng), g.random_vector(&mut rng));
            let lhs = g.apply(&m, &g.bracket(&x, &y));
            let rhs = g.bracket(&g.apply(&m, &x), &g.apply(&m, &y));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn closures() {
        let rs = RootSystem::new(RootType::A, 1).unwrap();
        let g = chevalley_algebra_over(&rs, PrimeField::new(5).unwrap());
        let e = g.parse_element("e").unwrap();
        let f = g.parse_element("f").unwrap();
        assert_eq!(g.subalgebra_closure(&[g.zero()]).rank(), 0);
        assert_eq!(g.subalgebra_closure(&[e.clone(), f]).rank(), 3);
        assert_eq!(g.subalgebra_closure(&[e]).rank(), 1);
    }

    #[test]
    fn simplicity_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rs = RootSystem::new(RootType::A, 1).unwrap();
        let g5 = chevalley_algebra_over(&rs, PrimeField::new(5).unwrap());
        assert!(g5.simplicity_check(20, &mut rng).is_probably_simple());
        let g2 = chevalley_algebra_over(&rs, PrimeField::new(2).unwrap());
        assert!(!g2.simplicity_check(20, &mut rng).is_probably_simple());
        let ab = LieAlgebra::new(PrimeField::new(5).unwrap(), vec!["a".into(), "b".into()], vec![]).unwrap();
        assert!(!ab.simplicity_check(5, &mut rng).is_probably_simple());
    }

    #[test]
    fn bad_constants_rejected() {
        let f = PrimeField::new(7).unwrap();
        let labels: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        // [x,y] = z, [x,z] = x fails Jacobi
        let res = LieAlgebra::new(f, labels, vec![(0, 1, 2, 1), (0, 2, 0, 1)]);
        assert!(matches!(res, Err(LieError::Jacobi(..))));
        let res = LieAlgebra::new(f, vec!["x".into()], vec![(0, 0, 0, 1)]);
        assert!(matches!(res, Err(LieError::NotAntisymmetric(0, 0))));
    }
}
