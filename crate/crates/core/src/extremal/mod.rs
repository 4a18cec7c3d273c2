//! Extremal elements, the η-closure, and bases satisfying the quadratic
//! condition.

mod even_index;

pub use even_index::{sl_n_even_index_case, EvenIndexReport};

use serde::Serialize;

use crate::arith::{kernel, Echelon, Field, PrimeField, Ring};
use crate::forms::{FiniteForm, FormDescriptor, FormError};
use crate::lie::{LieAlgebra, LieError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtremalError {
    #[error("eigenspaces of ad h span {got} of {dim} dimensions")]
    NotDecomposable { got: usize, dim: usize },
    #[error("characteristic {0} is too small, need p > 5")]
    PrimeTooSmall(u64),
    #[error("the zero vector has no class")]
    ZeroElement,
    #[error("η-closure stalled at span {span} of {dim} after stage {stage}")]
    PipelineStall { span: usize, dim: usize, stage: usize },
    #[error("no Θ-fixed vector on the highest or lowest root line")]
    NoWeightVector,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Eigenspaces `L_i` of `-ad_h` for `i = -2..=2`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub h: Vec<u64>,
    spaces: Vec<Vec<Vec<u64>>>,
}

impl EigenDecomposition {
    pub fn space(&self, i: i64) -> &[Vec<u64>] {
        &self.spaces[(i + 2) as usize]
    }

    /// Dimensions of `L_{-2}, …, L_2`.
    pub fn dims(&self) -> [usize; 5] {
        std::array::from_fn(|i| self.spaces[i].len())
    }
}

pub fn eigen_decompose(g: &LieAlgebra<PrimeField>, h: &[u64]) -> Result<EigenDecomposition, ExtremalError> {
    let f = *g.ring();
    if f.p() <= 5 {
        return Err(ExtremalError::PrimeTooSmall(f.p()));
    }
    let n = g.dim();
    if g.is_zero(h) {
        return Err(ExtremalError::NotDecomposable { got: 0, dim: n });
    }
    let ad = g.ad(h);
    let spaces: Vec<Vec<Vec<u64>>> = (-2..=2i64)
        .map(|i| {
            let mut rows = ad.clone();
            for (k, row) in rows.iter_mut().enumerate() {
                row[k] = f.add(&row[k], &f.from_i64(i));
            }
            kernel(&f, &rows, n)
        })
        .collect();
    let got = spaces.iter().map(Vec::len).sum();
    if got != n {
        return Err(ExtremalError::NotDecomposable { got, dim: n });
    }
    Ok(EigenDecomposition { h: h.to_vec(), spaces })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ElementClass {
    Extremal,
    Sandwich,
    Neither,
}

/// Compares the image of `(ad_x)^2` with the line through `x`.
pub fn classify_element(g: &LieAlgebra<PrimeField>, x: &[u64]) -> Result<ElementClass, ExtremalError> {
    if g.is_zero(x) {
        return Err(ExtremalError::ZeroElement);
    }
    let mut line = Echelon::new(*g.ring(), g.dim());
    line.insert(x);
    let mut zero = true;
    for j in 0..g.dim() {
        let v = g.bracket(x, &g.bracket(x, &g.basis(j)));
        if g.is_zero(&v) {
            continue;
        }
        zero = false;
        if !line.contains(&v) {
            return Ok(ElementClass::Neither);
        }
    }
    Ok(if zero { ElementClass::Sandwich } else { ElementClass::Extremal })
}

/// `η(a, b) = exp(ad_a) b`, with the number of nonzero series terms.
pub fn eta(g: &LieAlgebra<PrimeField>, a: &[u64], b: &[u64]) -> Result<(Vec<u64>, usize), ExtremalError> {
    Ok(g.exp_ad_apply(a, b)?)
}

/// Whether `[a, b]` lies in the span of `a`, `b` and `η(a, b)`.
pub fn eta_span_holds(g: &LieAlgebra<PrimeField>, a: &[u64], b: &[u64]) -> Result<bool, ExtremalError> {
    let (e, _) = eta(g, a, b)?;
    let mut ech = Echelon::new(*g.ring(), g.dim());
    for v in [a, b, &e[..]] {
        ech.insert(v);
    }
    Ok(ech.contains(&g.bracket(a, b)))
}

/// A `z` with `[ad_a z, ad_b z] ≠ 0`, searched over basis vectors and sums of
/// two basis vectors, which decides a quadratic map in odd characteristic.
pub fn quadratic_nonzero(g: &LieAlgebra<PrimeField>, a: &[u64], b: &[u64]) -> Option<Vec<u64>> {
    let n = g.dim();
    let q = |z: &[u64]| g.bracket(&g.bracket(a, z), &g.bracket(b, z));
    let hit = |z: Vec<u64>| (!g.is_zero(&q(&z))).then_some(z);
    (0..n)
        .find_map(|i| hit(g.basis(i)))
        .or_else(|| (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find_map(|(i, j)| hit(g.add(&g.basis(i), &g.basis(j)))))
}

/// How an element of the η-closure was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Provenance {
    X,
    Y,
    /// `exp(ad_z) x` for the `i`-th basis vector `z` of `L_1`.
    U(usize),
    Eta(Box<Provenance>, Box<Provenance>),
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureElement {
    pub vector: Vec<u64>,
    pub provenance: Provenance,
    pub stage: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisEntry {
    pub element: ClosureElement,
    pub class: ElementClass,
    /// `z` with `q_{y,b}(z) ≠ 0`; absent only for `y` itself.
    pub q_witness: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalCertificate {
    pub form: String,
    pub p: u64,
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    pub h: Vec<u64>,
    pub eigen_dims: [usize; 5],
    /// Sizes of `E, E', E'', …` after removing repeats.
    pub stage_sizes: Vec<usize>,
    /// Largest number of terms in any `exp(ad_z) x`.
    pub max_u_terms: usize,
    pub basis: Vec<BasisEntry>,
    /// Rank-increasing candidates dropped because `q_{y,b} ≡ 0`.
    pub excluded: Vec<Provenance>,
}

/// Coordinates of a nonzero Θ-fixed vector on the root line `root`.
fn root_line_vector(ff: &FiniteForm, root: usize) -> Result<Vec<u64>, ExtremalError> {
    let fp = ff.field.base();
    let d = ff.field.degree();
    let n = ff.algebra().dim();
    let flat: Vec<Vec<u64>> = ff.embedding().iter().map(|e| crate::forms::flatten(&ff.field, e)).collect();
    let rows: Vec<Vec<u64>> = (0..ff.ambient().dim() * d)
        .filter(|r| r / d != root)
        .map(|r| flat.iter().map(|col| col[r]).collect())
        .collect();
    kernel(&fp, &rows, n).into_iter().next().ok_or(ExtremalError::NoWeightVector)
}

pub fn extremal_basis_pipeline(form: &FormDescriptor, p: u64) -> Result<ExtremalCertificate, ExtremalError> {
    if p <= 5 {
        return Err(ExtremalError::PrimeTooSmall(p));
    }
    let ff = FiniteForm::new(form, p)?;
    let rs = &form.rs;
    let x = root_line_vector(&ff, rs.highest_root())?;
    let y = root_line_vector(&ff, rs.lowest_root())?;
    let mut cert = pipeline(ff.algebra(), &x, &y)?;
    cert.form = form.label();
    Ok(cert)
}

/// The closure and basis selection for a given highest and lowest weight
/// vector pair; `y` is rescaled so that `[[x, y], x] = 2x`.
pub fn pipeline(g: &LieAlgebra<PrimeField>, x: &[u64], y: &[u64]) -> Result<ExtremalCertificate, ExtremalError> {
    let f = *g.ring();
    let n = g.dim();
    let h0 = g.bracket(x, y);
    let hx = g.bracket(&h0, x);
    let lead = x.iter().position(|&c| c != 0).ok_or(ExtremalError::ZeroElement)?;
    let lambda = f.div(&hx[lead], &x[lead]).ok_or(ExtremalError::NoWeightVector)?;
    if lambda == 0 || g.scale(&lambda, x) != hx {
        return Err(ExtremalError::NoWeightVector);
    }
    let s = f.div(&2, &lambda).expect("nonzero");
    let y = g.scale(&s, y);
    let h = g.bracket(x, &y);
    let eig = eigen_decompose(g, &h)?;

    let mut seen: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
    let mut span = Echelon::new(f, n);
    let mut all: Vec<ClosureElement> = Vec::new();
    let mut add = |span: &mut Echelon<PrimeField>, v: Vec<u64>, prov: Provenance, stage: usize, out: &mut Vec<ClosureElement>| {
        if !g.is_zero(&v) && seen.insert(v.clone()) {
            span.insert(&v);
            out.push(ClosureElement { vector: v, provenance: prov, stage });
        }
    };
    let mut base = Vec::new();
    add(&mut span, x.to_vec(), Provenance::X, 0, &mut base);
    add(&mut span, y.clone(), Provenance::Y, 0, &mut base);
    let mut max_u_terms = 0;
    for (i, z) in eig.space(1).iter().enumerate() {
        let (u, terms) = g.exp_ad_apply(z, x)?;
        max_u_terms = max_u_terms.max(terms);
        add(&mut span, u, Provenance::U(i), 0, &mut base);
    }
    let mut stage_sizes = vec![base.len()];
    all.extend(base.iter().cloned());
    let mut last = base.clone();
    let mut stage = 0;
    while !span.is_full() {
        stage += 1;
        let before = span.rank();
        let mut next = Vec::new();
        for a in &base {
            for b in &last {
                if a.vector == b.vector {
                    continue;
                }
                let (v, _) = eta(g, &a.vector, &b.vector)?;
                let prov = Provenance::Eta(Box::new(a.provenance.clone()), Box::new(b.provenance.clone()));
                add(&mut span, v, prov, stage, &mut next);
            }
        }
        if span.rank() == before {
            return Err(ExtremalError::PipelineStall { span: before, dim: n, stage });
        }
        stage_sizes.push(next.len());
        all.extend(next.iter().cloned());
        last = next;
    }

    // y first, then x, then everything else in closure order
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by_key(|&i| match all[i].provenance {
        Provenance::Y => 0,
        Provenance::X => 1,
        _ => 2,
    });
    let mut chosen = Echelon::new(f, n);
    let mut basis = Vec::new();
    let mut excluded = Vec::new();
    for i in order {
        let el = &all[i];
        if chosen.contains(&el.vector) {
            continue;
        }
        let class = classify_element(g, &el.vector)?;
        if class != ElementClass::Extremal {
            continue;
        }
        let q_witness = if el.vector == y {
            None
        } else {
            match quadratic_nonzero(g, &y, &el.vector) {
                Some(z) => Some(z),
                None => {
                    excluded.push(el.provenance.clone());
                    continue;
                }
            }
        };
        chosen.insert(&el.vector);
        basis.push(BasisEntry { element: el.clone(), class, q_witness });
        if chosen.is_full() {
            break;
        }
    }
    if !chosen.is_full() {
        return Err(ExtremalError::PipelineStall { span: chosen.rank(), dim: n, stage });
    }
    Ok(ExtremalCertificate {
        form: String::new(),
        p: f.p(),
        x: x.to_vec(),
        y,
        h,
        eigen_dims: eig.dims(),
        stage_sizes,
        max_u_terms,
        basis,
        excluded,
    })
}

impl ExtremalCertificate {
    /// Rechecks every claim of the certificate in `g`.
    pub fn verify(&self, g: &LieAlgebra<PrimeField>) -> bool {
        let mut ech = Echelon::new(*g.ring(), g.dim());
        let q_ok = |b: &BasisEntry| match &b.q_witness {
            None => b.element.vector == self.y,
            Some(z) => {
                let q = g.bracket(&g.bracket(&self.y, z), &g.bracket(&b.element.vector, z));
                !g.is_zero(&q)
            }
        };
        for b in &self.basis {
            if classify_element(g, &b.element.vector) != Ok(ElementClass::Extremal) || !q_ok(b) {
                return false;
            }
            ech.insert(&b.element.vector);
        }
        ech.is_full() && self.basis.len() == g.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::chevalley_algebra_over;
    use crate::roots::RootSystem;

    fn sl2(p: u64) -> LieAlgebra<PrimeField> {
        let rs: RootSystem = "A1".parse().unwrap();
        chevalley_algebra_over(&rs, PrimeField::new(p).unwrap())
    }

    #[test]
    fn sl2_eigenspaces() {
        let g = sl2(7);
        let dec = eigen_decompose(&g, &g.basis(2)).unwrap();
        assert_eq!(dec.dims(), [1, 0, 1, 0, 1]);
        assert_eq!(dec.space(2), &[g.basis(1)]);
        assert_eq!(dec.space(-2), &[g.basis(0)]);
        assert!(matches!(eigen_decompose(&g, &g.zero()), Err(ExtremalError::NotDecomposable { .. })));
        assert_eq!(eigen_decompose(&sl2(5), &g.basis(2)).unwrap_err(), ExtremalError::PrimeTooSmall(5));
    }

    #[test]
    fn sl2_classes_and_eta() {
        let g = sl2(7);
        let (e, f, h) = (g.basis(0), g.basis(1), g.basis(2));
        assert_eq!(classify_element(&g, &e).unwrap(), ElementClass::Extremal);
        assert_eq!(classify_element(&g, &h).unwrap(), ElementClass::Neither);
        assert_eq!(classify_element(&g, &g.zero()), Err(ExtremalError::ZeroElement));
        assert_eq!(g.bracket(&e, &g.bracket(&e, &f)), g.scale(&5, &e));
        assert_eq!(eta(&g, &e, &e).unwrap().0, e);
        let expect = g.sub(&g.add(&f, &h), &e);
        assert_eq!(eta(&g, &e, &f).unwrap().0, expect);
        assert!(eta_span_holds(&g, &e, &f).unwrap());
    }

    #[test]
    fn quadratic_map_witnesses() {
        let g = sl2(7);
        let (e, f, h) = (g.basis(0), g.basis(1), g.basis(2));
        assert!(quadratic_nonzero(&g, &e, &e).is_none());
        let q = g.bracket(&g.bracket(&e, &h), &g.bracket(&f, &h));
        assert_eq!(q, g.scale(&3, &h));
        assert!(quadratic_nonzero(&g, &e, &f).is_some());
    }

    #[test]
    fn split_a1_pipeline() {
        let form: FormDescriptor = "A1".parse().unwrap();
        let cert = extremal_basis_pipeline(&form, 7).unwrap();
        let g = sl2(7);
        assert!(cert.verify(&g));
        assert_eq!(cert.basis.len(), 3);
        assert_eq!(cert.x, g.basis(0));
        let provs: Vec<&Provenance> = cert.basis.iter().map(|b| &b.element.provenance).collect();
        assert_eq!(provs[..2], [&Provenance::Y, &Provenance::X]);
        assert_eq!(provs[2], &Provenance::Eta(Box::new(Provenance::X), Box::new(Provenance::Y)));
    }

    #[test]
    fn twisted_a2_pipeline() {
        let form: FormDescriptor = "2A2".parse().unwrap();
        for p in [7, 13, 17] {
            let cert = extremal_basis_pipeline(&form, p).unwrap();
            let ff = FiniteForm::new(&form, p).unwrap();
            assert!(cert.verify(ff.algebra()), "p={p}");
            assert_eq!(cert.eigen_dims.iter().sum::<usize>(), 8);
            assert!((2..=5).contains(&cert.max_u_terms));
        }
    }

    #[test]
    fn eta_preserves_extremality() {
        let form: FormDescriptor = "2A2".parse().unwrap();
        let cert = extremal_basis_pipeline(&form, 7).unwrap();
        let g = FiniteForm::new(&form, 7).unwrap().algebra().clone();
        for a in &cert.basis {
            for b in &cert.basis {
                let (v, _) = eta(&g, &a.element.vector, &b.element.vector).unwrap();
                assert_eq!(classify_element(&g, &v).unwrap(), ElementClass::Extremal);
                assert!(eta_span_holds(&g, &a.element.vector, &b.element.vector).unwrap());
            }
        }
    }
}
