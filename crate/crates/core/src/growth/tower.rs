use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use serde::Serialize;

use super::{Ball, Expression, GrowthError};
use crate::arith::{Echelon, Field, PrimeField};
use crate::lie::LieAlgebra;

/// Iterated brackets `T_j(X)` and, with a pivot set `Y`, `T_j(X, Y)`.
#[derive(Debug, Clone)]
pub struct TowerSet {
    field: PrimeField,
    pub base: Vec<Vec<u64>>,
    pub pivot: Option<Vec<Vec<u64>>>,
    /// `levels[j] = T_j(X)` for `j = 0..=k`.
    pub levels: Vec<Vec<Vec<u64>>>,
    /// `relative[j] = T_j(X, Y)`; empty without a pivot.
    pub relative: Vec<Vec<Vec<u64>>>,
    /// `spans[j] = dim span T_{≤j}(X)`.
    pub spans: Vec<usize>,
    pub relative_spans: Vec<usize>,
}

impl TowerSet {
    /// Echelon basis of `span T_{≤j}`.
    pub fn span(&self, j: usize, relative: bool) -> Echelon<PrimeField> {
        let levels = if relative { &self.relative } else { &self.levels };
        let n = self.base.first().map_or(0, Vec::len);
        let mut ech = Echelon::new(self.field, n);
        for level in &levels[..=j] {
            for v in level {
                ech.insert(v);
            }
        }
        ech
    }
}

type Level = BTreeSet<Vec<u64>>;

fn bracket_both(g: &LieAlgebra<PrimeField>, xs: &[Vec<u64>], ts: &Level, out: &mut Level) {
    for x in xs {
        for t in ts {
            let b = g.bracket(x, t);
            out.insert(g.neg(&b));
            out.insert(b);
        }
    }
}

fn check_budget(level: &Level, j: usize, budget: usize) -> Result<(), GrowthError> {
    if level.len() > budget {
        return Err(GrowthError::CutoffExceeded { layer: j, size: level.len() as u128 });
    }
    Ok(())
}

fn span_dims(field: PrimeField, n: usize, levels: &[Vec<Vec<u64>>]) -> Vec<usize> {
    let mut ech = Echelon::new(field, n);
    levels
        .iter()
        .map(|level| {
            for v in level {
                ech.insert(v);
            }
            ech.rank()
        })
        .collect()
}

/// Levels `0..=k` of the towers of `x` (and relative to `pivot`). A level
/// larger than `budget` is reported as a cutoff.
pub fn towers(
    g: &LieAlgebra<PrimeField>,
    x: &[Vec<u64>],
    k: usize,
    pivot: Option<&[Vec<u64>]>,
    budget: usize,
) -> Result<TowerSet, GrowthError> {
    let zero: Level = std::iter::once(g.zero()).collect();
    let mut abs: Vec<Level> = vec![zero.clone()];
    let mut rel: Vec<Level> = Vec::new();
    if k >= 1 {
        abs.push(x.iter().cloned().collect());
    }
    if let Some(y) = pivot {
        rel.push(zero);
        if k >= 1 {
            rel.push(y.iter().cloned().collect());
        }
    }
    for j in 2..=k {
        let mut next = Level::new();
        bracket_both(g, x, &abs[j - 1], &mut next);
        check_budget(&next, j, budget)?;
        if let Some(y) = pivot {
            let mut r = Level::new();
            bracket_both(g, y, &abs[j - 1], &mut r);
            bracket_both(g, x, &rel[j - 1], &mut r);
            check_budget(&r, j, budget)?;
            rel.push(r);
        }
        abs.push(next);
    }
    let levels: Vec<Vec<Vec<u64>>> = abs.into_iter().map(|l| l.into_iter().collect()).collect();
    let relative: Vec<Vec<Vec<u64>>> = rel.into_iter().map(|l| l.into_iter().collect()).collect();
    let field = *g.ring();
    let n = g.dim();
    Ok(TowerSet {
        field,
        base: x.to_vec(),
        pivot: pivot.map(<[_]>::to_vec),
        spans: span_dims(field, n, &levels),
        relative_spans: span_dims(field, n, &relative),
        levels,
        relative,
    })
}

/// Outcome of the containment `[T_m(A, b), T_n(A)] ⊆ span [A, T_{≤r}(A, b)]`
/// for `r = m + n - 1` and `r = m + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TowerContainment {
    pub m: usize,
    pub n: usize,
    pub with_shift: bool,
    pub without_shift: bool,
}

pub fn towering_check(
    g: &LieAlgebra<PrimeField>,
    a: &[Vec<u64>],
    b: &[u64],
    max_total: usize,
    budget: usize,
) -> Result<Vec<TowerContainment>, GrowthError> {
    let t = towers(g, a, max_total, Some(&[b.to_vec()]), budget)?;
    let f = *g.ring();
    // spans of [A, T_{≤r}(A, b)] for every r
    let mut spans = Vec::new();
    let mut ech = Echelon::new(f, g.dim());
    for level in &t.relative {
        for v in level {
            for x in a {
                ech.insert(&g.bracket(x, v));
            }
        }
        spans.push(ech.clone());
    }
    let mut out = Vec::new();
    for m in 1..max_total {
        for n in 1..=max_total - m {
            let holds = |r: usize| {
                t.relative[m].iter().all(|u| t.levels[n].iter().all(|w| spans[r.min(max_total)].contains(&g.bracket(u, w))))
            };
            out.push(TowerContainment { m, n, with_shift: holds(m + n - 1), without_shift: holds(m + n) });
        }
    }
    Ok(out)
}

/// A bracket word in the generators and one pivot slot.
#[derive(Debug)]
enum Word {
    Gen(usize),
    Pivot,
    Bracket(Rc<Word>, Rc<Word>),
}

impl Word {
    fn instantiate(&self, gens: &[Vec<u64>], pivot: &Expression) -> Expression {
        match self {
            Word::Gen(i) => Expression::atom(gens[*i].clone()),
            Word::Pivot => pivot.clone(),
            Word::Bracket(a, b) => Expression::bracket(a.instantiate(gens, pivot), b.instantiate(gens, pivot)),
        }
    }
}

/// Basis `v_1, …, v_d` with `v_j ∈ T_{≤j}(A, v)`, each with a word linear in `v`.
fn tower_basis(
    g: &LieAlgebra<PrimeField>,
    gens: &[Vec<u64>],
    v: &[u64],
) -> Result<(Echelon<PrimeField>, Vec<Rc<Word>>), GrowthError> {
    let d = g.dim();
    let mut ech = Echelon::new(*g.ring(), d);
    let mut words = Vec::new();
    let nonzero = |x: &Vec<u64>| x.iter().any(|&c| c != 0);
    let mut abs: BTreeMap<Vec<u64>, Rc<Word>> =
        gens.iter().enumerate().filter(|(_, x)| nonzero(x)).map(|(i, x)| (x.clone(), Rc::new(Word::Gen(i)))).collect();
    let mut rel: BTreeMap<Vec<u64>, Rc<Word>> = BTreeMap::new();
    rel.insert(v.to_vec(), Rc::new(Word::Pivot));
    for level in 1..=d {
        for (val, w) in &rel {
            if ech.insert(val) {
                words.push(w.clone());
            }
        }
        if ech.is_full() {
            return Ok((ech, words));
        }
        if level == d {
            break;
        }
        let mut next_rel = BTreeMap::new();
        let gen_words: Vec<Rc<Word>> = (0..gens.len()).map(|i| Rc::new(Word::Gen(i))).collect();
        let push = |m: &mut BTreeMap<Vec<u64>, Rc<Word>>, val: Vec<u64>, w: Word| {
            if nonzero(&val) {
                m.entry(val).or_insert_with(|| Rc::new(w));
            }
        };
        let pivot = Rc::new(Word::Pivot);
        for (t, tw) in &abs {
            push(&mut next_rel, g.bracket(v, t), Word::Bracket(pivot.clone(), tw.clone()));
            push(&mut next_rel, g.bracket(t, v), Word::Bracket(tw.clone(), pivot.clone()));
        }
        for (t, tw) in &rel {
            for (i, x) in gens.iter().enumerate() {
                push(&mut next_rel, g.bracket(x, t), Word::Bracket(gen_words[i].clone(), tw.clone()));
                push(&mut next_rel, g.bracket(t, x), Word::Bracket(tw.clone(), gen_words[i].clone()));
            }
        }
        let mut next_abs = BTreeMap::new();
        for (t, tw) in &abs {
            for (i, x) in gens.iter().enumerate() {
                push(&mut next_abs, g.bracket(x, t), Word::Bracket(gen_words[i].clone(), tw.clone()));
                push(&mut next_abs, g.bracket(t, x), Word::Bracket(tw.clone(), gen_words[i].clone()));
            }
        }
        rel = next_rel;
        abs = next_abs;
    }
    Err(GrowthError::NotGenerating)
}

impl Ball {
    /// Writes `u` as a sum of tower words in `A` with the slot filled by
    /// multiples of `v`, using that the whole line through `v` lies in `A^k`.
    pub fn cover_from_line(&self, g: &LieAlgebra<PrimeField>, k: usize, v: &[u64], u: &[u64]) -> Result<Expression, GrowthError> {
        if !self.is_tracked() {
            return Err(GrowthError::Untracked);
        }
        let f = *g.ring();
        let p = f.p();
        if g.is_zero(v) || !(1..p).all(|a| self.contains(&g.scale(&a, v), k)) {
            return Err(GrowthError::LineNotFull);
        }
        if g.is_zero(u) {
            return Ok(Expression::atom(g.zero()));
        }
        let lead = v.iter().position(|&c| c != 0).expect("nonzero");
        let alpha = f.div(&u[lead], &v[lead]).expect("nonzero lead");
        let on_line = g.scale(&alpha, v);
        if on_line == u {
            return Ok(self.expression(u)?.expect("line inside the ball"));
        }
        let gens = self.generators().to_vec();
        let (ech, words) = tower_basis(g, &gens, v)?;
        let coeffs = ech.express(u).expect("basis spans");
        let terms = coeffs.iter().zip(&words).filter(|(c, _)| **c != 0).map(|(c, w)| {
            let pivot = self.expression(&g.scale(c, v)).expect("tracked").expect("line inside the ball");
            w.instantiate(&gens, &pivot)
        });
        Ok(Expression::sum_all(terms).expect("u is nonzero"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FiniteField;
    use crate::growth::test_util::{sl2, sl3};
    use crate::growth::FiniteAmbient;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn second_level_of_e_f() {
        let g = sl2(7);
        let t = towers(&g, &[g.basis(0), g.basis(1)], 2, None, 1000).unwrap();
        let h = g.basis(2);
        let mut expect = vec![g.zero(), g.neg(&h), h];
        expect.sort();
        assert_eq!(t.levels[2], expect);
        assert_eq!(t.levels[0], vec![g.zero()]);
        assert_eq!(t.spans, vec![0, 2, 3]);
    }

    #[test]
    fn tower_spans_grow_in_sl3() {
        let g = sl3(5);
        let f = *g.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = g.dim();
        let mut checked = 0;
        while checked < 10 {
            let a = vec![g.random_vector(&mut rng), g.random_vector(&mut rng)];
            if !g.generates(&a) {
                continue;
            }
            let b: Vec<u64> = (0..d).map(|_| f.random(&mut rng)).collect();
            if g.is_zero(&b) {
                continue;
            }
            let t = towers(&g, &a, d, Some(&[b]), 1 << 20).unwrap();
            for (k, &s) in t.spans.iter().enumerate() {
                assert!(s >= k.min(d), "k={k} span={s}");
            }
            assert_eq!(t.relative_spans[d], d);
            checked += 1;
        }
    }

    #[test]
    fn towering_containments_sl2_7() {
        let g = sl2(7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let a = vec![g.random_vector(&mut rng), g.random_vector(&mut rng)];
            let b = g.random_vector(&mut rng);
            for c in towering_check(&g, &a, &b, 6, 1 << 20).unwrap() {
                assert!(c.with_shift && c.without_shift, "{c:?}");
            }
        }
    }

    #[test]
    fn cover_from_full_line_sl2_5() {
        let g = sl2(5);
        let gens = vec![g.basis(0), g.basis(1)];
        let mut ball = Ball::new(FiniteAmbient::new(&g).unwrap(), &gens, None, true);
        let mut k = 1;
        let rec = loop {
            ball.grow_to(k).unwrap();
            let rec = ball.line_stat(k);
            if rec.ell == 5 {
                break rec;
            }
            k += 1;
        };
        let v = rec.direction.clone();
        let zero = ball.cover_from_line(&g, k, &v, &g.zero()).unwrap();
        assert_eq!(zero.weight(), 1);
        let on_line = ball.cover_from_line(&g, k, &v, &g.scale(&3, &v)).unwrap();
        assert!(on_line.weight() <= k);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let u = g.random_vector(&mut rng);
            let e = ball.cover_from_line(&g, k, &v, &u).unwrap();
            assert_eq!(e.evaluate(&g), u);
            assert!(e.leaves_in(&gens));
            assert!(e.weight() <= 3 * k + 9, "weight {} at k={k}", e.weight());
        }
        assert_eq!(ball.cover_from_line(&g, 1, &v, &g.basis(2)), Err(GrowthError::LineNotFull));
    }
}
