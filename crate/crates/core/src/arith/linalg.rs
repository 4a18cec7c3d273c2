use super::Field;

/// Incremental reduced row echelon basis of a subspace of `F^n`.
///
/// Each stored row also carries its expression in terms of the independent
/// vectors passed to [`Echelon::insert`], so membership queries can return
/// coordinates with respect to those generators.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    field: F,
    n: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<F::Elem>>,
    generators: Vec<Vec<F::Elem>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, n: usize) -> Self {
        Self { field, n, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new(), generators: Vec::new() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    /// Independent vectors in insertion order.
    pub fn generators(&self) -> &[Vec<F::Elem>] {
        &self.generators
    }

    /// Reduced rows with their pivot columns.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &Vec<F::Elem>)> {
        self.pivots.iter().copied().zip(self.rows.iter())
    }

    fn eliminate(&self, v: &mut [F::Elem], coeffs: &mut [F::Elem]) {
        let f = &self.field;
        for (i, &piv) in self.pivots.iter().enumerate() {
            if f.is_zero(&v[piv]) {
                continue;
            }
            let c = v[piv].clone();
            for (x, r) in v.iter_mut().zip(&self.rows[i]) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
            coeffs[i] = c;
        }
    }

    /// Remainder of `v` modulo the span.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.n);
        let mut w = v.to_vec();
        let mut coeffs = vec![self.field.zero(); self.rows.len()];
        self.eliminate(&mut w, &mut coeffs);
        w
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Coordinates of `v` in terms of the generators, if `v` lies in the span.
    pub fn express(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(v.len(), self.n);
        let f = &self.field;
        let mut w = v.to_vec();
        let mut coeffs = vec![f.zero(); self.rows.len()];
        self.eliminate(&mut w, &mut coeffs);
        if !w.iter().all(|x| f.is_zero(x)) {
            return None;
        }
        let mut out = vec![f.zero(); self.generators.len()];
        for (c, combo) in coeffs.iter().zip(&self.combos) {
            if f.is_zero(c) {
                continue;
            }
            for (o, k) in out.iter_mut().zip(combo) {
                *o = f.add(o, &f.mul(c, k));
            }
        }
        Some(out)
    }

    /// Adds `v` to the span. Returns `true` when it was independent.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.n);
        if self.is_full() {
            return false;
        }
        let f = self.field.clone();
        let mut w = v.to_vec();
        let mut coeffs = vec![f.zero(); self.rows.len()];
        self.eliminate(&mut w, &mut coeffs);
        let Some(piv) = w.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let g = self.generators.len();
        // combo of the new row: (e_g - sum coeffs_i combo_i) / lead
        let mut combo = vec![f.zero(); g + 1];
        combo[g] = f.one();
        for (c, old) in coeffs.iter().zip(&self.combos) {
            if f.is_zero(c) {
                continue;
            }
            for (o, k) in combo.iter_mut().zip(old) {
                *o = f.sub(o, &f.mul(c, k));
            }
        }
        let inv = f.inv(&w[piv]).expect("nonzero pivot");
        for x in w.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for x in combo.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for c in self.combos.iter_mut() {
            c.push(f.zero());
        }
        // clear the new pivot column from the existing rows
        for i in 0..self.rows.len() {
            let c = self.rows[i][piv].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, r) in self.rows[i].iter_mut().zip(&w) {
                *x = f.sub(x, &f.mul(&c, r));
            }
            for (x, r) in self.combos[i].iter_mut().zip(&combo) {
                *x = f.sub(x, &f.mul(&c, r));
            }
        }
        self.rows.push(w);
        self.pivots.push(piv);
        self.combos.push(combo);
        self.generators.push(v.to_vec());
        true
    }

    /// Basis of the span in reduced form, sorted by pivot.
    pub fn basis(&self) -> Vec<Vec<F::Elem>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| self.rows[i].clone()).collect()
    }
}

/// Basis of `{x : M x = 0}` for `M` given by rows of length `n`.
pub fn kernel<F: Field>(field: &F, rows: &[Vec<F::Elem>], n: usize) -> Vec<Vec<F::Elem>> {
    let mut ech = Echelon::new(field.clone(), n);
    for r in rows {
        ech.insert(r);
    }
    let mut pivot_of = vec![None; n];
    for (k, (piv, _)) in ech.rows().enumerate() {
        pivot_of[piv] = Some(k);
    }
    let rows: Vec<&Vec<F::Elem>> = ech.rows.iter().collect();
    let mut out = Vec::new();
    for free in 0..n {
        if pivot_of[free].is_some() {
            continue;
        }
        let mut x = vec![field.zero(); n];
        x[free] = field.one();
        for (k, &piv) in ech.pivots.iter().enumerate() {
            x[piv] = field.neg(&rows[k][free]);
        }
        out.push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FiniteField, PrimeField, Ring};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn insert_and_express() {
        let f = PrimeField::new(7).unwrap();
        let mut e = Echelon::new(f, 3);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 3, 1]));
        assert_eq!(e.rank(), 2);
        let c = e.express(&[2, 5, 1]).unwrap();
        assert_eq!(c, vec![2, 1]);
        assert!(e.express(&[0, 0, 1]).is_none());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let rows: Vec<Vec<u64>> = (0..4).map(|_| (0..7).map(|_| f.random(&mut rng)).collect()).collect();
            let k = kernel(&f, &rows, 7);
            let mut e = Echelon::new(f, 7);
            for r in &rows {
                e.insert(r);
            }
            assert_eq!(k.len() + e.rank(), 7);
            for v in &k {
                for r in &rows {
                    let s = r.iter().zip(v).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                    assert_eq!(s, 0);
                }
            }
        }
    }

    #[test]
    fn express_reconstructs_random_combinations() {
        let f = PrimeField::new(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut e = Echelon::new(f, 6);
        while e.rank() < 4 {
            let v: Vec<u64> = (0..6).map(|_| f.random(&mut rng)).collect();
            e.insert(&v);
        }
        let gens = e.generators().to_vec();
        let coeffs: Vec<u64> = (0..4).map(|_| f.random(&mut rng)).collect();
        let mut target = vec![0; 6];
        for (c, g) in coeffs.iter().zip(&gens) {
            for (t, x) in target.iter_mut().zip(g) {
                *t = f.add(t, &f.mul(c, x));
            }
        }
        assert_eq!(e.express(&target).unwrap(), coeffs);
    }
}
