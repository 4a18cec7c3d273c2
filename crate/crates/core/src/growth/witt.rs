use super::{Expression, GrowthError};
use crate::arith::{Field, PrimeField, Ring};
use crate::lie::{witt_algebra, LieAlgebra};

/// Explicit short expressions in W(p) over the generators `e_{-1}, e_2`.
///
/// Lines `⟨e_i⟩` for `i <= 2` are filled by Horner's rule in base `6i`, the
/// eigenvalue of `h = [e_{-1}, [e_{-1}, e_2]] = 6 e_0`; higher terms come from
/// repeated bracketing with `[e_{-1}, e_2] = 3 e_1`.
#[derive(Debug, Clone)]
pub struct WittProcedure {
    g: LieAlgebra<PrimeField>,
    em1: Expression,
    e2: Expression,
    e1x3: Expression,
    h: Expression,
}

impl WittProcedure {
    pub fn new(p: u64) -> Result<Self, GrowthError> {
        let g = witt_algebra(p)?;
        let em1 = Expression::atom(g.basis(0));
        let e2 = Expression::atom(g.basis(3));
        let e1x3 = Expression::bracket(em1.clone(), e2.clone());
        let h = Expression::bracket(em1.clone(), e1x3.clone());
        Ok(Self { g, em1, e2, e1x3, h })
    }

    pub fn algebra(&self) -> &LieAlgebra<PrimeField> {
        &self.g
    }

    pub fn generators(&self) -> Vec<Vec<u64>> {
        vec![self.g.basis(0), self.g.basis(3)]
    }

    fn field(&self) -> PrimeField {
        *self.g.ring()
    }

    /// `c · value(base)`, where `[h, base] = base_mult · base`.
    fn fill(&self, base: &Expression, base_mult: i64, c: u64) -> Option<Expression> {
        let mut n = c as i64;
        let mut digits = Vec::new();
        while n != 0 {
            let r = n.rem_euclid(base_mult.abs());
            digits.push(r as usize);
            n = (n - r) / base_mult;
        }
        let repeat = |d: usize| Expression::sum_all(std::iter::repeat(base.clone()).take(d));
        let mut acc: Option<Expression> = None;
        for &d in digits.iter().rev() {
            let scaled = acc.map(|x| Expression::bracket(self.h.clone(), x));
            acc = match (scaled, repeat(d)) {
                (Some(x), Some(y)) => Some(Expression::sum(x, y)),
                (x, y) => x.or(y),
            };
        }
        acc
    }

    /// `α e_i` for `i ∈ {-1, 0, 1, 2}`.
    pub fn line(&self, i: i64, alpha: u64) -> Option<Expression> {
        let f = self.field();
        let third = |x: u64, k: i64| f.div(&x, &f.from_i64(k)).expect("p > 3");
        match i {
            -1 => self.fill(&self.em1, -6, alpha),
            0 => self.fill(&self.e1x3, 6, third(alpha, 6)).map(|x| Expression::bracket(self.em1.clone(), x)),
            1 => self.fill(&self.e1x3, 6, third(alpha, 3)),
            2 => self.fill(&self.e2, 12, alpha),
            _ => None,
        }
    }

    /// `Σ_{j>=2} α_j e_j` from the coefficients `α_2, α_3, …`.
    fn tail(&self, alphas: &[u64]) -> Option<Expression> {
        let f = self.field();
        let n = alphas.iter().rposition(|&a| a != 0)? + 1;
        let head = self.line(2, alphas[0]);
        let betas: Vec<u64> = (1..n)
            .map(|i| f.div(&alphas[i], &f.from_i64(3 * i as i64)).expect("index below p"))
            .collect();
        let rest = self.tail(&betas).map(|x| Expression::bracket(self.e1x3.clone(), x));
        match (head, rest) {
            (Some(x), Some(y)) => Some(Expression::sum(x, y)),
            (x, y) => x.or(y),
        }
    }

    /// An expression for an arbitrary element of W(p).
    pub fn express(&self, target: &[u64]) -> Expression {
        let terms = [self.line(-1, target[0]), self.line(0, target[1]), self.line(1, target[2]), self.tail(&target[3..])];
        Expression::sum_all(terms.into_iter().flatten()).unwrap_or_else(|| Expression::atom(self.g.zero()))
    }
}

/// Checks `Σ_{j=2}^{k+1} α_j e_j = α_2 e_2 + [e_1, Σ_{j=2}^{k} (j-1)^{-1} α_{j+1} e_j]`
/// for the coefficients `α_2, …, α_{k+1}`.
pub fn witt_identity_holds(g: &LieAlgebra<PrimeField>, alphas: &[u64]) -> bool {
    let f = *g.ring();
    let e = |j: usize| g.basis(j + 1);
    let mut lhs = g.zero();
    for (i, a) in alphas.iter().enumerate() {
        lhs = g.add(&lhs, &g.scale(a, &e(i + 2)));
    }
    let mut inner = g.zero();
    for j in 2..=alphas.len() {
        let c = f.div(&alphas[j - 1], &f.from_i64(j as i64 - 1)).expect("j - 1 below p");
        inner = g.add(&inner, &g.scale(&c, &e(j)));
    }
    let rhs = g.add(&g.scale(&alphas[0], &e(2)), &g.bracket(&e(1), &inner));
    lhs == rhs
}
