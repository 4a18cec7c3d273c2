use std::collections::HashMap;

use super::GrowthError;
use crate::arith::{Field, PrimeField, Ring};
use crate::lie::LieAlgebra;

/// Largest algebra whose layers are indexed by a dense array.
pub const DENSE_LIMIT: u128 = 1 << 24;

/// A finite Lie algebra over F_p with elements encoded as mixed-radix
/// integers `Σ c_i p^i`.
#[derive(Debug, Clone)]
pub struct FiniteAmbient {
    field: PrimeField,
    p: u64,
    d: usize,
    size: u128,
    table: Vec<Vec<(usize, u64)>>,
}

impl FiniteAmbient {
    pub fn new(g: &LieAlgebra<PrimeField>) -> Result<Self, GrowthError> {
        let field = *g.ring();
        let p = field.p();
        let d = g.dim();
        let size = (0..d).try_fold(1u128, |acc, _| acc.checked_mul(p as u128).filter(|&s| s <= u64::MAX as u128));
        let size = size.ok_or(GrowthError::TooLarge)?;
        if p > u16::MAX as u64 || (d * d) as u128 * (p as u128).pow(3) >= 1 << 63 {
            return Err(GrowthError::TooLarge);
        }
        let table = (0..d * d).map(|ij| g.bracket_basis(ij / d, ij % d).to_vec()).collect();
        Ok(Self { field, p, d, size, table })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of elements `p^d`.
    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn encode(&self, v: &[u64]) -> u64 {
        v.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn decode_into(&self, mut code: u64, out: &mut [u64]) {
        for o in out.iter_mut() {
            *o = code % self.p;
            code /= self.p;
        }
    }

    pub fn decode(&self, code: u64) -> Vec<u64> {
        let mut v = vec![0; self.d];
        self.decode_into(code, &mut v);
        v
    }

    pub fn add_codes(&self, x: &[u64], y: &[u64]) -> u64 {
        let mut code = 0u64;
        for i in (0..self.d).rev() {
            let s = x[i] + y[i];
            code = code * self.p + if s >= self.p { s - self.p } else { s };
        }
        code
    }

    /// Codes of `[x, y]` and `[y, x]`.
    pub fn bracket_codes(&self, x: &[u64], y: &[u64], acc: &mut [u64]) -> (u64, u64) {
        acc.iter_mut().for_each(|a| *a = 0);
        let d = self.d;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let xy = xi * yj;
                for &(k, c) in &self.table[i * d + j] {
                    acc[k] += xy * c;
                }
            }
        }
        let (mut pos, mut neg) = (0u64, 0u64);
        for k in (0..d).rev() {
            let r = acc[k] % self.p;
            pos = pos * self.p + r;
            neg = neg * self.p + if r == 0 { 0 } else { self.p - r };
        }
        (pos, neg)
    }

    pub fn bracket(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut acc = vec![0; self.d];
        let (c, _) = self.bracket_codes(x, y, &mut acc);
        self.decode(c)
    }
}

/// How an element first entered the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Leaf,
    Sum(u64, u64),
    Bracket(u64, u64),
}

#[derive(Debug, Clone)]
enum LevelIndex {
    /// Presence bits beside the layer numbers keep the hot test in cache.
    Dense { bits: Vec<u64>, levels: Vec<u8> },
    Sparse(HashMap<u64, u8>),
}

impl LevelIndex {
    fn new(size: u128) -> Self {
        if size <= DENSE_LIMIT {
            let n = size as usize;
            LevelIndex::Dense { bits: vec![0; n.div_ceil(64)], levels: vec![0; n] }
        } else {
            LevelIndex::Sparse(HashMap::new())
        }
    }

    #[inline]
    fn get(&self, code: u64) -> u8 {
        match self {
            LevelIndex::Dense { bits, levels } => {
                if bits[(code >> 6) as usize] >> (code & 63) & 1 == 0 {
                    0
                } else {
                    levels[code as usize]
                }
            }
            LevelIndex::Sparse(m) => m.get(&code).copied().unwrap_or(0),
        }
    }

    /// Records `code` at `level` if absent; returns whether it was new.
    #[inline]
    fn insert(&mut self, code: u64, level: u8) -> bool {
        match self {
            LevelIndex::Dense { bits, levels } => {
                let w = &mut bits[(code >> 6) as usize];
                let mask = 1u64 << (code & 63);
                if *w & mask != 0 {
                    return false;
                }
                *w |= mask;
                levels[code as usize] = level;
                true
            }
            LevelIndex::Sparse(m) => {
                let mut new = false;
                m.entry(code).or_insert_with(|| {
                    new = true;
                    level
                });
                new
            }
        }
    }
}

/// The layers `A^1 ⊆ A^2 ⊆ …` of sums and brackets of at most `k` atoms.
#[derive(Debug, Clone)]
pub struct Ball {
    ambient: FiniteAmbient,
    generators: Vec<Vec<u64>>,
    level: LevelIndex,
    /// `fresh[k-1]` holds the codes first reached in layer `k`.
    fresh: Vec<Vec<u64>>,
    /// Coordinates of the fresh codes, `dim` entries each.
    coords: Vec<Vec<u16>>,
    total: u128,
    cutoff: u128,
    origins: Option<HashMap<u64, Origin>>,
}

impl Ball {
    pub fn new(ambient: FiniteAmbient, generators: &[Vec<u64>], cutoff: Option<u128>, track: bool) -> Self {
        let mut ball = Self {
            level: LevelIndex::new(ambient.size()),
            cutoff: cutoff.unwrap_or(ambient.size()),
            generators: generators.to_vec(),
            fresh: Vec::new(),
            coords: Vec::new(),
            total: 0,
            origins: track.then(HashMap::new),
            ambient,
        };
        let mut first = Vec::new();
        let zero = vec![0u64; ball.ambient.dim()];
        for v in std::iter::once(&zero).chain(generators) {
            let c = ball.ambient.encode(v);
            if ball.level.insert(c, 1) {
                first.push(c);
                if let Some(o) = ball.origins.as_mut() {
                    o.insert(c, Origin::Leaf);
                }
            }
        }
        ball.total = first.len() as u128;
        ball.push_layer(first);
        ball
    }

    pub fn ambient(&self) -> &FiniteAmbient {
        &self.ambient
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    /// Index of the last computed layer.
    pub fn depth(&self) -> usize {
        self.fresh.len()
    }

    pub fn is_full(&self) -> bool {
        self.total == self.ambient.size()
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    /// `|A^k|` for a computed layer.
    pub fn layer_size(&self, k: usize) -> usize {
        self.fresh[..k.min(self.depth())].iter().map(Vec::len).sum()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut acc = 0;
        self.fresh
            .iter()
            .map(|f| {
                acc += f.len();
                acc
            })
            .collect()
    }

    /// Smallest `k` with `v ∈ A^k` among computed layers.
    pub fn first_layer(&self, v: &[u64]) -> Option<usize> {
        match self.level.get(self.ambient.encode(v)) {
            0 => None,
            k => Some(k as usize),
        }
    }

    pub fn contains(&self, v: &[u64], k: usize) -> bool {
        self.first_layer(v).is_some_and(|l| l <= k)
    }

    pub fn layer_codes(&self, k: usize) -> impl Iterator<Item = u64> + '_ {
        self.fresh[..k.min(self.depth())].iter().flatten().copied()
    }

    pub fn layer(&self, k: usize) -> Vec<Vec<u64>> {
        self.layer_codes(k).map(|c| self.ambient.decode(c)).collect()
    }

    pub fn origin(&self, v: &[u64]) -> Option<Origin> {
        self.origin_code(self.ambient.encode(v))
    }

    pub(crate) fn origin_code(&self, code: u64) -> Option<Origin> {
        self.origins.as_ref()?.get(&code).copied()
    }

    pub fn is_tracked(&self) -> bool {
        self.origins.is_some()
    }

    /// Computes the next layer; returns false once the ball is full.
    ///
    /// Each pair of layers `(j, k - j)` is combined either by enumerating the
    /// pairs with at least one freshly reached element, or, when fewer
    /// elements are missing than pairs remain, by testing every missing
    /// element directly. Both give the same layer.
    pub fn grow(&mut self) -> Result<bool, GrowthError> {
        if self.is_full() {
            return Ok(false);
        }
        let k = self.depth() + 1;
        if k > u8::MAX as usize {
            return Err(GrowthError::TooDeep);
        }
        let mut new = Vec::new();
        let mut missing: Option<Vec<u64>> = None;
        let full = self.ambient.size();
        let sizes = self.layer_sizes();
        let dense = matches!(self.level, LevelIndex::Dense { .. });
        for j in 1..=k / 2 {
            let m = k - j;
            let fresh = |i: usize| self.fresh[i - 1].len() as u128;
            let forward = fresh(j) * sizes[m - 1] as u128 + sizes[j - 1].saturating_sub(self.fresh[j - 1].len()) as u128 * fresh(m);
            let remaining = full - self.total - new.len() as u128;
            // expected probes per missing element when the partner layer is dense
            let inv_density = (full / sizes[m - 1].max(1) as u128).max(1);
            let probes = 2 + 2 * inv_density.min(self.ambient.p() as u128);
            let targeted = remaining * probes * (sizes[j - 1] as u128).min(inv_density);
            if dense && targeted < forward {
                let miss = missing.get_or_insert_with(|| self.missing_codes());
                self.targeted(j, m, k as u8, miss, &mut new);
            } else {
                self.forward(j, m, k as u8, &mut new);
            }
            if self.total + new.len() as u128 == full {
                break;
            }
        }
        self.total += new.len() as u128;
        self.push_layer(new);
        if self.total > self.cutoff {
            return Err(GrowthError::CutoffExceeded { layer: k, size: self.total });
        }
        Ok(true)
    }

    fn push_layer(&mut self, codes: Vec<u64>) {
        let d = self.ambient.dim();
        let mut buf = vec![0u64; d];
        let mut coords = Vec::with_capacity(codes.len() * d);
        for &c in &codes {
            self.ambient.decode_into(c, &mut buf);
            coords.extend(buf.iter().map(|&v| v as u16));
        }
        self.fresh.push(codes);
        self.coords.push(coords);
    }

    fn record(&mut self, code: u64, level: u8, origin: Origin, new: &mut Vec<u64>) -> bool {
        if self.level.insert(code, level) {
            new.push(code);
            if let Some(o) = self.origins.as_mut() {
                o.insert(code, origin);
            }
            true
        } else {
            false
        }
    }

    fn missing_codes(&self) -> Vec<u64> {
        match &self.level {
            LevelIndex::Dense { levels, .. } => {
                levels.iter().enumerate().filter(|(_, &l)| l == 0).map(|(c, _)| c as u64).collect()
            }
            LevelIndex::Sparse(_) => unreachable!("targeted search needs a dense index"),
        }
    }

    fn forward(&mut self, j: usize, m: usize, level: u8, new: &mut Vec<u64>) {
        let fresh = std::mem::take(&mut self.fresh);
        let coords = std::mem::take(&mut self.coords);
        self.forward_in(&fresh, &coords, j, m, level, new);
        self.fresh = fresh;
        self.coords = coords;
    }

    fn forward_in(&mut self, fresh: &[Vec<u64>], coords: &[Vec<u16>], j: usize, m: usize, level: u8, new: &mut Vec<u64>) {
        let d = self.ambient.dim();
        let p = self.ambient.p();
        let full = self.ambient.size();
        let radix: Vec<u64> = (0..d).map(|i| p.pow(i as u32)).collect();
        let mut x = vec![0u64; d];
        let mut shift = vec![0u64; d * p as usize];
        let mut ad = vec![0u64; d * d];
        let mut acc = vec![0u64; d];
        // fresh_j × L_m, then L_{j-1} × fresh_m
        for (xs, xe, ys, ye) in [(j - 1, j, 0, m), (0, j - 1, m - 1, m)] {
            for xi in xs..xe {
                for xidx in 0..fresh[xi].len() {
                    let xc = fresh[xi][xidx];
                    for (a, &b) in x.iter_mut().zip(&coords[xi][xidx * d..]) {
                        *a = b as u64;
                    }
                    // digit tables for y ↦ x + y and the matrix of ad_x
                    for i in 0..d {
                        for v in 0..p {
                            let s = x[i] + v;
                            shift[i * p as usize + v as usize] = if s >= p { s - p } else { s } * radix[i];
                        }
                    }
                    ad.iter_mut().for_each(|a| *a = 0);
                    for (i, &xv) in x.iter().enumerate() {
                        if xv == 0 {
                            continue;
                        }
                        for jj in 0..d {
                            for &(k, c) in &self.ambient.table[i * d + jj] {
                                ad[k * d + jj] = (ad[k * d + jj] + xv * c) % p;
                            }
                        }
                    }
                    for yi in ys..ye {
                        let ycoords = &coords[yi];
                        for yidx in 0..fresh[yi].len() {
                            let y = &ycoords[yidx * d..(yidx + 1) * d];
                            let mut sum = 0u64;
                            for (i, &v) in y.iter().enumerate() {
                                sum += shift[i * p as usize + v as usize];
                            }
                            acc.iter_mut().for_each(|a| *a = 0);
                            for (jj, &v) in y.iter().enumerate() {
                                if v != 0 {
                                    for k in 0..d {
                                        acc[k] += ad[k * d + jj] * v as u64;
                                    }
                                }
                            }
                            let (mut b, mut nb) = (0u64, 0u64);
                            for k in (0..d).rev() {
                                let r = acc[k] % p;
                                b = b * p + r;
                                nb = nb * p + if r == 0 { 0 } else { p - r };
                            }
                            let yc = fresh[yi][yidx];
                            self.record(sum, level, Origin::Sum(xc, yc), new);
                            self.record(b, level, Origin::Bracket(xc, yc), new);
                            self.record(nb, level, Origin::Bracket(yc, xc), new);
                            if self.total + new.len() as u128 == full {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }

    fn in_layer(&self, code: u64, m: usize) -> bool {
        let l = self.level.get(code);
        l != 0 && (l as usize) <= m
    }

    fn targeted(&mut self, j: usize, m: usize, level: u8, miss: &mut Vec<u64>, new: &mut Vec<u64>) {
        let amb = self.ambient.clone();
        let (d, p, f) = (amb.dim(), amb.p(), amb.field());
        let xs: Vec<u64> = self.layer_codes(j).collect();
        let mut z = vec![0u64; d];
        let mut y = vec![0u64; d];
        for xc in xs {
            miss.retain(|&c| self.level.get(c) == 0);
            if miss.is_empty() {
                return;
            }
            let x = amb.decode(xc);
            let solver = AdSolver::new(&amb, &x);
            for idx in 0..miss.len() {
                let zc = miss[idx];
                amb.decode_into(zc, &mut z);
                for i in 0..d {
                    y[i] = f.sub(&z[i], &x[i]);
                }
                let yc = amb.encode(&y);
                if self.in_layer(yc, m) {
                    self.record(zc, level, Origin::Sum(xc, yc), new);
                    continue;
                }
                for sign in [1u64, p - 1] {
                    let target: Vec<u64> = z.iter().map(|c| f.mul(c, &sign)).collect();
                    if let Some(yc) = solver.find(&amb, &target, |c| self.in_layer(c, m)) {
                        let origin = if sign == 1 { Origin::Bracket(xc, yc) } else { Origin::Bracket(yc, xc) };
                        self.record(zc, level, origin, new);
                        break;
                    }
                }
            }
        }
    }

    pub fn grow_to(&mut self, k: usize) -> Result<(), GrowthError> {
        while self.depth() < k && self.grow()? {}
        Ok(())
    }
}

/// Solves `[x, y] = z` for `y` through a reduced echelon form of `ad_x`.
struct AdSolver {
    field: PrimeField,
    /// Row operations taking `ad_x` to its echelon form.
    transform: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    kernel: Vec<Vec<u64>>,
}

impl AdSolver {
    fn new(amb: &FiniteAmbient, x: &[u64]) -> Self {
        let f = amb.field();
        let d = amb.dim();
        // column j of ad_x is [x, e_j]
        let mut a = vec![vec![0u64; d]; d];
        let mut e = vec![0u64; d];
        for j in 0..d {
            e[j] = 1;
            let col = amb.bracket(x, &e);
            e[j] = 0;
            for k in 0..d {
                a[k][j] = col[k];
            }
        }
        let mut t: Vec<Vec<u64>> = (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..d {
            let Some(piv) = (r..d).find(|&i| a[i][c] != 0) else { continue };
            a.swap(r, piv);
            t.swap(r, piv);
            let inv = f.inv(&a[r][c]).expect("nonzero pivot");
            for v in a[r].iter_mut().chain(t[r].iter_mut()) {
                *v = f.mul(v, &inv);
            }
            for i in 0..d {
                if i != r && a[i][c] != 0 {
                    let s = a[i][c];
                    for k in 0..d {
                        a[i][k] = f.sub(&a[i][k], &f.mul(&s, &a[r][k]));
                        t[i][k] = f.sub(&t[i][k], &f.mul(&s, &t[r][k]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let kernel = (0..d)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0u64; d];
                v[free] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(&a[row][free]);
                }
                v
            })
            .collect();
        Self { field: f, transform: t, pivots, kernel }
    }

    /// Some `y` with `[x, y] = z` accepted by `accept`, if any.
    fn find(&self, amb: &FiniteAmbient, z: &[u64], accept: impl Fn(u64) -> bool) -> Option<u64> {
        let f = self.field;
        let d = z.len();
        let w: Vec<u64> = self
            .transform
            .iter()
            .map(|row| row.iter().zip(z).fold(0u64, |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect();
        if w[self.pivots.len()..].iter().any(|&c| c != 0) {
            return None;
        }
        let mut y0 = vec![0u64; d];
        for (row, &pc) in self.pivots.iter().enumerate() {
            y0[pc] = w[row];
        }
        let p = amb.p();
        let count = p.checked_pow(self.kernel.len() as u32)?;
        let mut y = y0.clone();
        for idx in 0..count {
            let mut t = idx;
            y.copy_from_slice(&y0);
            for kv in &self.kernel {
                let c = t % p;
                t /= p;
                if c != 0 {
                    for (yi, ki) in y.iter_mut().zip(kv) {
                        *yi = f.add(yi, &f.mul(&c, ki));
                    }
                }
            }
            let code = amb.encode(&y);
            if accept(code) {
                return Some(code);
            }
        }
        None
    }
}
