use num_bigint::BigInt;

use super::LieAlgebra;
use crate::arith::{Integers, Ring};
use crate::roots::RootSystem;

/// Labels `e<coeffs>` for positive roots, `f<coeffs>` for negative roots and
/// `h1, …, hn` for the Cartan part, in basis order.
pub fn chevalley_labels(rs: &RootSystem) -> Vec<String> {
    let mut out = Vec::with_capacity(rs.num_roots() + rs.rank());
    for (i, r) in rs.roots().iter().enumerate() {
        let digits: String = r.iter().map(|c| c.abs().to_string()).collect();
        out.push(format!("{}{}", if rs.is_positive(i) { 'e' } else { 'f' }, digits));
    }
    out.extend((1..=rs.rank()).map(|i| format!("h{i}")));
    out
}

/// The Chevalley lattice g(Z) with basis `e_α (α ∈ Φ), h_1, …, h_n`.
///
/// `[h_i, e_α] = <α, α_i^∨> e_α`, `[e_α, e_{-α}] = h_α` (the coroot written in
/// simple coroots) and `[e_α, e_β] = N_{α,β} e_{α+β}`.
pub fn chevalley_algebra(rs: &RootSystem) -> LieAlgebra<Integers> {
    let r = rs.num_roots();
    let n = rs.rank();
    let c = rs.chevalley_constants();
    let mut consts: Vec<(usize, usize, usize, BigInt)> = Vec::new();
    for a in 0..r {
        for b in 0..r {
            if let Some(s) = rs.sum(a, b) {
                consts.push((a, b, s, BigInt::from(c.n(a, b))));
            }
        }
        let neg = rs.negative(a);
        for (i, k) in rs.coroot(a).into_iter().enumerate() {
            if k != 0 {
                consts.push((a, neg, r + i, BigInt::from(k)));
            }
        }
        for i in 0..n {
            let v: i64 = (0..n).map(|j| rs.root(a)[j] * rs.cartan()[i][j]).sum();
            if v != 0 {
                consts.push((r + i, a, a, BigInt::from(v)));
            }
        }
    }
    LieAlgebra::from_constants(Integers, chevalley_labels(rs), consts).expect("indices in range")
}

/// g(Z) ⊗ R.
pub fn chevalley_algebra_over<R: Ring>(rs: &RootSystem, ring: R) -> LieAlgebra<R> {
    let z = chevalley_algebra(rs);
    let target = ring.clone();
    z.map_ring(ring, move |c| target.from_int(c))
}
