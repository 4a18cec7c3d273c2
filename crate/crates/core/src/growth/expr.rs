use std::fmt;

use super::{Ball, GrowthError, Origin};
use crate::arith::PrimeField;
use crate::lie::LieAlgebra;

/// A sum-bracket expression whose leaves are `0` or generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expression {
    Atom(Vec<u64>),
    Sum(Box<Expression>, Box<Expression>),
    Bracket(Box<Expression>, Box<Expression>),
}

impl Expression {
    pub fn atom(v: Vec<u64>) -> Self {
        Expression::Atom(v)
    }

    pub fn sum(a: Expression, b: Expression) -> Self {
        Expression::Sum(Box::new(a), Box::new(b))
    }

    pub fn bracket(a: Expression, b: Expression) -> Self {
        Expression::Bracket(Box::new(a), Box::new(b))
    }

    /// Sum of several expressions; `None` for an empty list.
    pub fn sum_all(terms: impl IntoIterator<Item = Expression>) -> Option<Self> {
        terms.into_iter().reduce(Expression::sum)
    }

    /// Number of leaves.
    pub fn weight(&self) -> usize {
        match self {
            Expression::Atom(_) => 1,
            Expression::Sum(a, b) | Expression::Bracket(a, b) => a.weight() + b.weight(),
        }
    }

    pub fn evaluate(&self, g: &LieAlgebra<PrimeField>) -> Vec<u64> {
        match self {
            Expression::Atom(v) => v.clone(),
            Expression::Sum(a, b) => g.add(&a.evaluate(g), &b.evaluate(g)),
            Expression::Bracket(a, b) => g.bracket(&a.evaluate(g), &b.evaluate(g)),
        }
    }

    /// True when every leaf is zero or one of `gens`.
    pub fn leaves_in(&self, gens: &[Vec<u64>]) -> bool {
        match self {
            Expression::Atom(v) => v.iter().all(|&c| c == 0) || gens.contains(v),
            Expression::Sum(a, b) | Expression::Bracket(a, b) => a.leaves_in(gens) && b.leaves_in(gens),
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Atom(v) => {
                let s: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "({})", s.join(","))
            }
            Expression::Sum(a, b) => write!(f, "{a} + {b}"),
            Expression::Bracket(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

impl Ball {
    /// Expression for `v` of weight at most its first layer, rebuilt from the
    /// recorded origins.
    pub fn expression(&self, v: &[u64]) -> Result<Option<Expression>, GrowthError> {
        if !self.is_tracked() {
            return Err(GrowthError::Untracked);
        }
        Ok(self.first_layer(v).map(|_| self.expression_of(self.ambient().encode(v))))
    }

    fn expression_of(&self, code: u64) -> Expression {
        let amb = self.ambient();
        match self.origin_code(code).expect("origin recorded for every member") {
            Origin::Leaf => Expression::Atom(amb.decode(code)),
            Origin::Sum(a, b) => Expression::sum(self.expression_of(a), self.expression_of(b)),
            Origin::Bracket(a, b) => Expression::bracket(self.expression_of(a), self.expression_of(b)),
        }
    }
}
