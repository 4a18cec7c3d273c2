use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FiniteForm, FormDescriptor, FormError};
use crate::arith::{hnf, hnf_solve, Echelon, ExtElem, ExtField, Integers, NumberField, PrimeField, Rationals, Ring};
use crate::lie::{chevalley_algebra, chevalley_labels, LieAlgebra, Sl2Triple, Vector};

/// g(Z[ω]) viewed as a Lie ring over Z through the basis `ω^t b`, with the
/// semilinear automorphism `Θ = ϑ ⊗ σ`.
#[derive(Debug, Clone)]
pub struct Covering {
    pub form: FormDescriptor,
    pub field: NumberField,
    flat: LieAlgebra<Integers>,
    /// Column `i` holds the sparse image of flattened basis vector `i`.
    theta: Vec<Vec<(usize, BigInt)>>,
}

/// A Z-basis of g(Z[ω])^Θ with integral structure constants.
#[derive(Debug, Clone)]
pub struct CoveringLattice {
    /// Basis vectors in flattened coordinates, in Hermite normal form.
    pub basis: Vec<Vec<BigInt>>,
    pub algebra: LieAlgebra<Integers>,
    /// Largest coordinate of a bracket of two basis vectors.
    pub norm_constant: BigInt,
    /// Index of the lattice spanned by the Steinberg averages.
    pub steinberg_index: BigInt,
}

/// The reduction map from the covering lattice onto the finite form at `p`.
#[derive(Debug, Clone)]
pub struct CoveringReduction {
    pub form: FiniteForm,
    /// Column `i` holds the coordinates of the image of lattice vector `i`.
    pub matrix: Vec<Vec<u64>>,
    pub rank: usize,
}

/// An sl2-triple over Q in lattice coordinates around the highest root.
#[derive(Debug, Clone)]
pub struct CoveringTriple {
    pub triple: Sl2Triple<BigRational>,
    /// True when the highest root vector picks up a sign under ϑ.
    pub twisted: bool,
    /// `(ω - σω)^2` in the twisted case, otherwise 1.
    pub delta: BigInt,
}

impl Covering {
    /// Z itself for split forms, `Z[(1+√5)/2]` for order 2 and the real
    /// subring of the 7th cyclotomic integers for order 3.
    pub fn default_field(order: usize) -> NumberField {
        let f: &[i64] = match order {
            1 => &[0, 1],
            2 => &[-1, 1, 1],
            3 => &[-1, -2, 1, 1],
            _ => panic!("no default field of degree {order}"),
        };
        NumberField::new(f).expect("default fields are valid")
    }

    pub fn new(form: &FormDescriptor, field: NumberField) -> Result<Self, FormError> {
        let d = field.degree();
        if d != form.order() {
            return Err(FormError::OrderMismatch { theta: form.order(), field: d });
        }
        let g = chevalley_algebra(&form.rs);
        let n = g.dim();
        let powers: Vec<Vec<BigInt>> = {
            let w = field.omega();
            let mut out = vec![field.one()];
            for _ in 1..2 * d - 1 {
                let next = field.mul(out.last().unwrap(), &w);
                out.push(next);
            }
            out
        };
        let mut consts = Vec::new();
        for (i, j, k, c) in g.constants() {
            for s in 0..d {
                for t in 0..d {
                    for (u, r) in powers[s + t].iter().enumerate() {
                        if !r.is_zero() {
                            consts.push((i * d + s, j * d + t, k * d + u, &c * r));
                        }
                    }
                }
            }
        }
        let labels = chevalley_labels(&form.rs);
        let flat_labels = (0..n * d)
            .map(|i| match (d, i % d) {
                (1, _) => labels[i].clone(),
                (_, 0) => labels[i / d].clone(),
                (_, 1) => format!("w.{}", labels[i / d]),
                (_, t) => format!("w{t}.{}", labels[i / d]),
            })
            .collect();
        let flat = LieAlgebra::from_constants(Integers, flat_labels, consts)?;

        let perm = form.theta.signed_permutation();
        let mut theta = Vec::with_capacity(n * d);
        for b in 0..n {
            for t in 0..d {
                let mut unit = field.zero();
                unit[t] = BigInt::one();
                let img = field.sigma(&unit);
                let target = perm.perm[b];
                let col = img
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(s, c)| (target * d + s, if perm.signs[b] == 1 { c } else { -c }))
                    .collect();
                theta.push(col);
            }
        }
        Ok(Self { form: form.clone(), field, flat, theta })
    }

    pub fn flat(&self) -> &LieAlgebra<Integers> {
        &self.flat
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn apply_theta(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); v.len()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, m) in &self.theta[i] {
                out[*k] += c * m;
            }
        }
        out
    }

    /// The averages `Σ_k Θ^k(ω^t b)` that are nonzero, labelled by `t` and `b`.
    pub fn steinberg_spanning_set(&self) -> Vec<(String, Vec<BigInt>)> {
        let d = self.degree();
        let mut out = Vec::new();
        for i in 0..self.flat.dim() {
            let mut cur = vec![BigInt::zero(); self.flat.dim()];
            cur[i] = BigInt::one();
            let mut acc = cur.clone();
            for _ in 1..d {
                cur = self.apply_theta(&cur);
                for (a, c) in acc.iter_mut().zip(&cur) {
                    *a += c;
                }
            }
            if acc.iter().any(|c| !c.is_zero()) {
                out.push((format!("s.{}", self.flat.labels()[i]), acc));
            }
        }
        out
    }

    /// The full lattice g(Z[ω])^Θ, computed as the saturated kernel of
    /// `Θ - 1`, together with integral structure constants in its HNF basis.
    pub fn covering_lattice(&self) -> Result<CoveringLattice, FormError> {
        let m = self.flat.dim();
        let expected = self.form.dim();
        // rows [ (Θ - 1) e_i | e_i ]; the HNF rows vanishing on the first block
        // form a basis of the integer kernel
        let rows: Vec<Vec<BigInt>> = (0..m)
            .map(|i| {
                let mut row = vec![BigInt::zero(); 2 * m];
                for (k, c) in &self.theta[i] {
                    row[*k] += c;
                }
                row[i] -= 1;
                row[m + i] = BigInt::one();
                row
            })
            .collect();
        let basis: Vec<Vec<BigInt>> = hnf(&rows)
            .into_iter()
            .filter(|r| r[..m].iter().all(|c| c.is_zero()))
            .map(|r| r[m..].to_vec())
            .collect();
        let basis = hnf(&basis);
        if basis.len() != expected {
            return Err(FormError::NotFullRank { rank: basis.len(), expected });
        }

        let mut consts = Vec::new();
        let mut norm = BigInt::zero();
        for i in 0..expected {
            for j in i + 1..expected {
                let br = self.flat.bracket(&basis[i], &basis[j]);
                let c = hnf_solve(&basis, &br).expect("fixed lattice closed under bracket");
                for (k, v) in c.into_iter().enumerate() {
                    if !v.is_zero() {
                        if v.abs() > norm {
                            norm = v.abs();
                        }
                        consts.push((i, j, k, v));
                    }
                }
            }
        }
        let labels = if self.form.is_split() {
            chevalley_labels(&self.form.rs)
        } else {
            (1..=expected).map(|i| format!("b{i}")).collect()
        };
        let algebra = LieAlgebra::from_constants(Integers, labels, consts)?;

        let span = self.steinberg_spanning_set();
        let in_lattice: Vec<Vec<BigInt>> = span
            .iter()
            .map(|(_, v)| hnf_solve(&basis, v).expect("averages are fixed"))
            .collect();
        let sub = hnf(&in_lattice);
        if sub.len() != expected {
            return Err(FormError::NotFullRank { rank: sub.len(), expected });
        }
        let steinberg_index = sub
            .iter()
            .map(|r| r.iter().find(|c| !c.is_zero()).cloned().unwrap())
            .fold(BigInt::one(), |acc, c| acc * c);
        Ok(CoveringLattice { basis, algebra, norm_constant: norm, steinberg_index })
    }

    /// Rank of the Steinberg averages over Q.
    pub fn steinberg_rank(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = self.steinberg_spanning_set().into_iter().map(|(_, v)| v).collect();
        hnf(&rows).len()
    }

    /// Reduces the lattice modulo an inert prime `p > d` and checks that the
    /// image is the whole finite form.
    pub fn reduce(&self, lattice: &CoveringLattice, p: u64) -> Result<CoveringReduction, FormError> {
        let d = self.degree();
        if p as usize <= d {
            return Err(FormError::PrimeTooSmall { p, d });
        }
        let residue = self.field.residue_field(p)?;
        // σ reduces to Frob^j; ⟨ϑ Frob^j⟩ = ⟨ϑ^k Frob⟩ for jk ≡ 1 mod d
        let j = self.field.frobenius_alignment(&residue);
        let k = (1..=d).find(|k| (j * k) % d == 1 % d).unwrap_or(1);
        let finite_desc = self.form.theta_power(k)?;
        let form = FiniteForm::with_field(&finite_desc, residue.clone())?;
        let n = lattice.basis.len();
        let mut matrix = vec![vec![0u64; n]; n];
        let mut echelon = Echelon::new(form.field.base(), n);
        for (i, b) in lattice.basis.iter().enumerate() {
            let img = self.reduce_vector(&residue, b);
            let coords = form
                .from_ambient(&img)
                .ok_or(FormError::NotSurjective { rank: i, expected: n })?;
            echelon.insert(&coords);
            for (r, c) in coords.into_iter().enumerate() {
                matrix[r][i] = c;
            }
        }
        let rank = echelon.rank();
        if rank != n {
            return Err(FormError::NotSurjective { rank, expected: n });
        }
        Ok(CoveringReduction { form, matrix, rank })
    }

    /// Image in g(F_{p^d}) of a flattened integral vector.
    pub fn reduce_vector(&self, residue: &ExtField, v: &[BigInt]) -> Vec<ExtElem> {
        let d = self.degree();
        v.chunks(d).map(|c| self.field.reduce(residue, &c.to_vec())).collect()
    }

    /// `(e_λ, h_λ, e_{-λ})` for the highest root λ, or, when ϑ flips the sign
    /// of `e_λ`, the triple `((ω - σω)e_λ, h_λ, (ω - σω)e_{-λ}/Δ)`.
    pub fn sl2_triple(&self, lattice: &CoveringLattice) -> Result<CoveringTriple, FormError> {
        let rs = &self.form.rs;
        let d = self.degree();
        let lam = rs.highest_root();
        let neg = rs.negative(lam);
        let sign = self.form.theta.sign(lam);
        let m = self.flat.dim();
        let unit = |b: usize| {
            let mut v = vec![BigInt::zero(); m];
            v[b * d] = BigInt::one();
            v
        };
        let (e_flat, f_flat) = (unit(lam), unit(neg));
        let h_flat = self.flat.bracket(&e_flat, &f_flat);
        let to_q = |v: &[BigInt]| -> Vec<BigRational> { v.iter().map(|c| BigRational::from_integer(c.clone())).collect() };
        let (e, f, twisted, delta) = if sign == 1 {
            (to_q(&e_flat), to_q(&f_flat), false, BigInt::one())
        } else if d == 2 {
            let w = self.field.omega();
            let diff = self.field.sub(&w, &self.field.sigma(&w));
            let sq = self.field.mul(&diff, &diff);
            debug_assert!(sq[1..].iter().all(|c| c.is_zero()));
            let delta = sq[0].clone();
            let times = |v: &[BigInt]| -> Vec<BigInt> {
                let mut out = vec![BigInt::zero(); m];
                for (b, chunk) in v.chunks(d).enumerate() {
                    let prod = self.field.mul(&chunk.to_vec(), &diff);
                    for (t, c) in prod.into_iter().enumerate() {
                        out[b * d + t] = c;
                    }
                }
                out
            };
            let inv = BigRational::new(BigInt::one(), delta.clone());
            let f: Vec<BigRational> = to_q(&times(&f_flat)).into_iter().map(|c| c * &inv).collect();
            (to_q(&times(&e_flat)), f, true, delta)
        } else {
            return Err(FormError::UnexpectedSign { sign, order: d });
        };
        let triple = Sl2Triple {
            e: lattice.rational_coords(&e),
            h: lattice.rational_coords(&to_q(&h_flat)),
            f: lattice.rational_coords(&f),
        };
        Ok(CoveringTriple { triple, twisted, delta })
    }
}

impl CoveringLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `max |c_i|` over the coordinates in the lattice basis.
    pub fn norm(coords: &[BigInt]) -> BigInt {
        coords.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Lattice coordinates of a flattened integral vector, if it lies in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        hnf_solve(&self.basis, v)
    }

    /// Rational coordinates of a flattened vector in the Q-span of the lattice.
    pub fn rational_coords(&self, v: &[BigRational]) -> Vec<BigRational> {
        let den = v.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let scaled: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let c = self.coords(&scaled).expect("vector lies in the rational span of the lattice");
        c.into_iter().map(|x| BigRational::new(x, den.clone())).collect()
    }

    pub fn rational_algebra(&self) -> LieAlgebra<Rationals> {
        self.algebra.map_ring(Rationals, |c| BigRational::from_integer(c.clone()))
    }

    /// The lattice algebra reduced modulo `p`.
    pub fn reduce_algebra(&self, field: PrimeField) -> LieAlgebra<PrimeField> {
        self.algebra.map_ring(field, |c| field.from_int(c))
    }
}

impl CoveringReduction {
    pub fn apply(&self, coords: &[BigInt]) -> Vector<u64> {
        let f = self.form.field.base();
        let mut out = vec![0u64; self.matrix.len()];
        for (i, c) in coords.iter().enumerate() {
            let c = f.from_int(c);
            if c == 0 {
                continue;
            }
            for (o, row) in out.iter_mut().zip(&self.matrix) {
                *o = f.add(o, &f.mul(&c, &row[i]));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn covering(label: &str) -> Covering {
        let form: FormDescriptor = label.parse().unwrap();
        Covering::new(&form, Covering::default_field(form.order())).unwrap()
    }

    #[test]
    fn split_a1_lattice() {
        let c = covering("A1");
        let l = c.covering_lattice().unwrap();
        assert_eq!(l.rank(), 3);
        assert_eq!(l.norm_constant, BigInt::from(2));
        assert_eq!(l.algebra.labels(), &["e1", "f1", "h1"]);
        assert_eq!(l.steinberg_index, BigInt::one());
    }

    #[test]
    fn theta_respects_flat_bracket() {
        for label in ["2A2", "3D4"] {
            let c = covering(label);
            let m = c.flat().dim();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..20 {
                let x: Vec<BigInt> = (0..m).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
                let y: Vec<BigInt> = (0..m).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
                let lhs = c.apply_theta(&c.flat().bracket(&x, &y));
                let rhs = c.flat().bracket(&c.apply_theta(&x), &c.apply_theta(&y));
                assert_eq!(lhs, rhs, "{label}");
            }
        }
    }

    #[test]
    fn twisted_lattices_have_full_rank() {
        for (label, dim) in [("2A2", 8), ("2A3", 15), ("3D4", 28)] {
            let c = covering(label);
            assert_eq!(c.steinberg_rank(), dim);
            let l = c.covering_lattice().unwrap();
            assert_eq!(l.rank(), dim);
            for b in &l.basis {
                assert_eq!(&c.apply_theta(b), b);
            }
        }
    }

    #[test]
    fn reduction_is_a_surjective_homomorphism() {
        let c = covering("2A2");
        let l = c.covering_lattice().unwrap();
        let red = c.reduce(&l, 7).unwrap();
        assert_eq!(red.rank, 8);
        let g = red.form.algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let x: Vec<BigInt> = (0..8).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
            let y: Vec<BigInt> = (0..8).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
            let lhs = red.apply(&l.algebra.bracket(&x, &y));
            let rhs = g.bracket(&red.apply(&x), &red.apply(&y));
            assert_eq!(lhs, rhs);
        }
        assert!(matches!(c.reduce(&l, 11), Err(FormError::Arith(_))));
        assert!(matches!(c.reduce(&l, 5), Err(FormError::Arith(_))));
    }

    #[test]
    fn cubic_reduction_aligns_frobenius() {
        let c = covering("3D4");
        let l = c.covering_lattice().unwrap();
        for p in [5, 11, 17] {
            assert_eq!(c.reduce(&l, p).unwrap().rank, 28);
        }
    }

    #[test]
    fn triples_verify() {
        for label in ["A1", "A2", "2A2", "2A3", "2D4"] {
            let c = covering(label);
            let l = c.covering_lattice().unwrap();
            let t = c.sl2_triple(&l).unwrap();
            assert!(t.triple.verify(&l.rational_algebra()), "{label}");
        }
        let c = covering("2A2");
        let t = c.sl2_triple(&c.covering_lattice().unwrap()).unwrap();
        assert!(t.twisted);
        assert_eq!(t.delta, BigInt::from(5));
    }
}
