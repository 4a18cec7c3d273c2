//! Split and twisted forms: fixed points of `Θ = ϑσ` over finite fields, and
//! their integral coverings in characteristic 0.

mod covering;
mod favorable;

use std::fmt;
use std::str::FromStr;

use crate::arith::{kernel, ArithError, Echelon, ExtElem, ExtField, FiniteField, PrimeField, Ring};
use crate::lie::{chevalley_algebra_over, chevalley_labels, LieAlgebra, LieError, Vector};
use crate::roots::{DiagramAutomorphism, RootError, RootSystem, SignedPermutation};

pub use covering::{Covering, CoveringLattice, CoveringReduction, CoveringTriple};
pub use favorable::{FavorablePair, LieWord, DEFAULT_CANDIDATE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("diagram symmetry has order {theta} but the field twist has order {field}")]
    OrderMismatch { theta: usize, field: usize },
    #[error("prime {p} must exceed the twist order {d}")]
    PrimeTooSmall { p: u64, d: usize },
    #[error("fixed-point space has dimension {got}, expected {expected}")]
    WrongDimension { got: usize, expected: usize },
    #[error("spanning set has rank {rank}, expected {expected}")]
    NotFullRank { rank: usize, expected: usize },
    #[error("reduction of the covering lattice has rank {rank}, expected {expected}")]
    NotSurjective { rank: usize, expected: usize },
    #[error("Θ is not compatible with the bracket at basis pair ({0}, {1})")]
    NotAnAutomorphism(usize, usize),
    #[error("no generating pair among the first {0} candidates")]
    SearchExhausted(usize),
    #[error("unexpected sign {sign} on the highest root for a symmetry of order {order}")]
    UnexpectedSign { sign: i64, order: usize },
    #[error("malformed form label {0}")]
    BadLabel(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Root system plus diagram symmetry; the order of the symmetry is the degree
/// of the field extension used to twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormDescriptor {
    pub rs: RootSystem,
    pub theta: DiagramAutomorphism,
}

impl FormDescriptor {
    pub fn split(rs: RootSystem) -> Self {
        let theta = DiagramAutomorphism::identity(&rs);
        Self { rs, theta }
    }

    pub fn twisted(rs: RootSystem, order: usize) -> Result<Self, FormError> {
        let theta = DiagramAutomorphism::standard(&rs, order)?;
        Ok(Self { rs, theta })
    }

    pub fn order(&self) -> usize {
        self.theta.order()
    }

    pub fn is_split(&self) -> bool {
        self.order() == 1
    }

    /// Dimension of the Lie algebra.
    pub fn dim(&self) -> usize {
        self.rs.num_roots() + self.rs.rank()
    }

    pub fn label(&self) -> String {
        if self.is_split() {
            self.rs.label()
        } else {
            format!("{}{}", self.order(), self.rs.label())
        }
    }

    /// The same form with symmetry `ϑ^k`.
    pub fn theta_power(&self, k: usize) -> Result<Self, FormError> {
        let nodes = self.theta.nodes();
        let mut cur: Vec<usize> = (0..nodes.len()).collect();
        for _ in 0..k {
            cur = cur.iter().map(|&j| nodes[j]).collect();
        }
        let theta = DiagramAutomorphism::new(&self.rs, &cur)?;
        Ok(Self { rs: self.rs.clone(), theta })
    }
}

impl FromStr for FormDescriptor {
    type Err = FormError;

    /// `A1`, `B3` (split) or `2A2`, `2D4`, `3D4`, `2E6` (twisted).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (order, rest) = match s.chars().next() {
            Some(c @ ('2' | '3')) => (c.to_digit(10).unwrap() as usize, &s[1..]),
            _ => (1, s),
        };
        let rs: RootSystem = rest.parse()?;
        if order == 1 {
            Ok(Self::split(rs))
        } else {
            Self::twisted(rs, order)
        }
    }
}

impl fmt::Display for FormDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `Θ = ϑ ∘ Frob` acting on g(F_{p^d}) with the signed permutation `ϑ`.
#[derive(Debug, Clone)]
pub struct FiniteTheta {
    perm: SignedPermutation,
    field: ExtField,
}

impl FiniteTheta {
    pub fn apply(&self, v: &[ExtElem]) -> Vec<ExtElem> {
        let f = &self.field;
        let mut out = vec![f.zero(); v.len()];
        for (b, x) in v.iter().enumerate() {
            let y = f.frobenius(x);
            out[self.perm.perm[b]] = if self.perm.signs[b] == 1 { y } else { f.neg(&y) };
        }
        out
    }

    pub fn order(&self) -> usize {
        self.field.degree()
    }

    /// Checks `Θ[x,y] = [Θx, Θy]` on all pairs of F_p-basis vectors and `Θ^d = id`.
    pub fn verify(&self, ambient: &LieAlgebra<ExtField>) -> Result<(), FormError> {
        let basis = fp_basis(ambient);
        let images: Vec<Vec<ExtElem>> = basis.iter().map(|x| self.apply(x)).collect();
        for (i, x) in basis.iter().enumerate() {
            let mut y = x.clone();
            for _ in 0..self.order() {
                y = self.apply(&y);
            }
            if &y != x {
                return Err(FormError::NotAnAutomorphism(i, i));
            }
        }
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let lhs = self.apply(&ambient.bracket(&basis[i], &basis[j]));
                let rhs = ambient.bracket(&images[i], &images[j]);
                if lhs != rhs {
                    return Err(FormError::NotAnAutomorphism(i, j));
                }
            }
        }
        Ok(())
    }
}

/// The vectors `ω^t b` (b a basis vector, t < d) spanning g(F_{p^d}) over F_p.
fn fp_basis(ambient: &LieAlgebra<ExtField>) -> Vec<Vec<ExtElem>> {
    let f = ambient.ring();
    let mut out = Vec::new();
    for b in 0..ambient.dim() {
        for t in 0..f.degree() {
            let mut c = [0u64; 3];
            c[t] = 1;
            let mut v = ambient.zero();
            v[b] = f.from_coeffs(&c[..f.degree()]);
            out.push(v);
        }
    }
    out
}

pub fn build_theta(form: &FormDescriptor, field: &ExtField) -> Result<FiniteTheta, FormError> {
    if field.degree() != form.order() {
        return Err(FormError::OrderMismatch { theta: form.order(), field: field.degree() });
    }
    Ok(FiniteTheta { perm: form.theta.signed_permutation(), field: field.clone() })
}

/// Flattens a vector over F_{p^d} into F_p coordinates `(b, t) ↦ b·d + t`.
pub fn flatten(field: &ExtField, v: &[ExtElem]) -> Vec<u64> {
    let d = field.degree();
    let mut out = Vec::with_capacity(v.len() * d);
    for x in v {
        out.extend_from_slice(&x[..d]);
    }
    out
}

pub fn unflatten(field: &ExtField, v: &[u64]) -> Vec<ExtElem> {
    let d = field.degree();
    v.chunks(d).map(|c| field.from_coeffs(c)).collect()
}

/// The F_p-algebra g(F_{p^d})^Θ with an explicit basis inside g(F_{p^d}).
#[derive(Debug, Clone)]
pub struct FiniteForm {
    pub form: FormDescriptor,
    pub field: ExtField,
    theta: FiniteTheta,
    ambient: LieAlgebra<ExtField>,
    algebra: LieAlgebra<PrimeField>,
    embedding: Vec<Vec<ExtElem>>,
    coords: Echelon<PrimeField>,
    kernel_dim: usize,
}

impl FiniteForm {
    /// Uses some irreducible polynomial of the right degree.
    pub fn new(form: &FormDescriptor, p: u64) -> Result<Self, FormError> {
        let field = ExtField::with_degree(p, form.order())?;
        Self::with_field(form, field)
    }

    pub fn with_field(form: &FormDescriptor, field: ExtField) -> Result<Self, FormError> {
        let d = form.order();
        let p = field.p();
        let theta = build_theta(form, &field)?;
        if d > 1 && p as usize <= d {
            return Err(FormError::PrimeTooSmall { p, d });
        }
        let fp = field.base();
        let ambient = chevalley_algebra_over(&form.rs, field.clone());
        let n = ambient.dim();
        let labels = chevalley_labels(&form.rs);

        // kernel of Θ - I over F_p
        let basis = fp_basis(&ambient);
        let mut rows = vec![vec![0u64; n * d]; n * d];
        for (col, x) in basis.iter().enumerate() {
            let img = flatten(&field, &theta.apply(x));
            for (r, v) in img.into_iter().enumerate() {
                rows[r][col] = v;
            }
            rows[col][col] = fp.sub(&rows[col][col], &1);
        }
        let kernel_dim = kernel(&fp, &rows, n * d).len();
        if kernel_dim != n {
            return Err(FormError::WrongDimension { got: kernel_dim, expected: n });
        }

        // basis by averaging ω^t b over ⟨Θ⟩, orbit by orbit
        let mut coords = Echelon::new(fp, n * d);
        let mut embedding = Vec::new();
        let mut form_labels = Vec::new();
        for b in 0..n {
            for t in 0..d {
                let x = &basis[b * d + t];
                let mut acc = x.clone();
                let mut cur = x.clone();
                for _ in 1..d {
                    cur = theta.apply(&cur);
                    acc = ambient.add(&acc, &cur);
                }
                if coords.insert(&flatten(&field, &acc)) {
                    embedding.push(acc);
                    form_labels.push(match (d, t) {
                        (1, _) => labels[b].clone(),
                        (_, 0) => format!("s.{}", labels[b]),
                        (_, 1) => format!("s.w.{}", labels[b]),
                        _ => format!("s.w{t}.{}", labels[b]),
                    });
                }
            }
        }
        if embedding.len() != n {
            return Err(FormError::NotFullRank { rank: embedding.len(), expected: n });
        }
        let mut consts = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let br = ambient.bracket(&embedding[i], &embedding[j]);
                let c = coords.express(&flatten(&field, &br)).expect("fixed points closed under bracket");
                for (k, v) in c.into_iter().enumerate() {
                    if v != 0 {
                        consts.push((i, j, k, v));
                    }
                }
            }
        }
        let algebra = LieAlgebra::from_constants(fp, form_labels, consts)?;
        Ok(Self { form: form.clone(), field, theta, ambient, algebra, embedding, coords, kernel_dim })
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn algebra(&self) -> &LieAlgebra<PrimeField> {
        &self.algebra
    }

    pub fn ambient(&self) -> &LieAlgebra<ExtField> {
        &self.ambient
    }

    pub fn theta(&self) -> &FiniteTheta {
        &self.theta
    }

    /// Dimension over F_p of the solution space of `Θv = v`.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn embedding(&self) -> &[Vec<ExtElem>] {
        &self.embedding
    }

    /// Image in g(F_{p^d}) of a vector in the form's F_p-basis.
    pub fn to_ambient(&self, v: &[u64]) -> Vec<ExtElem> {
        let f = &self.field;
        let mut out = self.ambient.zero();
        for (c, e) in v.iter().zip(&self.embedding) {
            if *c == 0 {
                continue;
            }
            let s = f.from_base(*c);
            for (o, x) in out.iter_mut().zip(e) {
                *o = f.add(o, &f.mul(&s, x));
            }
        }
        out
    }

    /// Coordinates of a Θ-fixed vector in the form's basis.
    pub fn from_ambient(&self, v: &[ExtElem]) -> Option<Vector<u64>> {
        self.coords.express(&flatten(&self.field, v))
    }

    pub fn is_fixed(&self, v: &[ExtElem]) -> bool {
        self.theta.apply(v) == v
    }

    pub fn random_element<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Vector<u64> {
        let f = self.field.base();
        (0..self.algebra.dim()).map(|_| f.random(rng)).collect()
    }
}
