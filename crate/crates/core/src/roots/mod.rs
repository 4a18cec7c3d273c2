//! Root systems in the simple-root basis, Chevalley structure constants and
//! signed Dynkin diagram automorphisms.
//!
//! Nodes follow the Bourbaki numbering (1-based in names, 0-based in code).

mod automorphism;
mod chevalley;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use automorphism::{DiagramAutomorphism, SignedPermutation};
pub use chevalley::ChevalleyConstants;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("invalid root system type {0}")]
    InvalidType(String),
    #[error("node permutation does not preserve the Cartan matrix")]
    NotASymmetry,
    #[error("inconsistent sign propagation at root {0:?}")]
    SignConflict(Vec<i64>),
    #[error("{0} has no diagram symmetry of order {1}")]
    NoSuchSymmetry(String, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A reduced irreducible root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    kind: RootType,
    rank: usize,
    /// Kac convention: `A[i][j] = 2 (α_i, α_j) / (α_i, α_i)`.
    cartan: Vec<Vec<i64>>,
    /// Integer Gram matrix of the simple roots, short roots of squared length 2.
    gram: Vec<Vec<i64>>,
    /// Positive roots by height, ties broken by decreasing lexicographic order
    /// (so α_1, …, α_n come first), followed by their negatives.
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl FromStr for RootSystem {
    type Err = RootError;

    /// Parses labels such as `A2`, `D4`, `G2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => RootType::A,
            Some('B') => RootType::B,
            Some('C') => RootType::C,
            Some('D') => RootType::D,
            Some('E') => RootType::E,
            Some('F') => RootType::F,
            Some('G') => RootType::G,
            _ => return Err(RootError::InvalidType(s.to_string())),
        };
        let rank = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| RootError::InvalidType(s.to_string()))?;
        RootSystem::new(kind, rank)
    }
}

impl RootSystem {
    pub fn new(kind: RootType, rank: usize) -> Result<Self, RootError> {
        let valid = match kind {
            RootType::A => rank >= 1,
            RootType::B | RootType::C => rank >= 2,
            RootType::D => rank >= 4,
            RootType::E => (6..=8).contains(&rank),
            RootType::F => rank == 4,
            RootType::G => rank == 2,
        };
        if !valid {
            return Err(RootError::InvalidType(format!("{kind}{rank}")));
        }
        let n = rank;
        let mut lengths = vec![2i64; n];
        let mut edges: Vec<(usize, usize)> = Vec::new();
        match kind {
            RootType::A => edges.extend((1..n).map(|i| (i - 1, i))),
            RootType::B => {
                edges.extend((1..n).map(|i| (i - 1, i)));
                lengths[..n - 1].iter_mut().for_each(|l| *l = 4);
            }
            RootType::C => {
                edges.extend((1..n).map(|i| (i - 1, i)));
                lengths[n - 1] = 4;
            }
            RootType::D => {
                edges.extend((1..n - 1).map(|i| (i - 1, i)));
                edges.push((n - 3, n - 1));
            }
            RootType::E => {
                edges.push((0, 2));
                edges.push((1, 3));
                edges.extend((3..n).map(|i| (i - 1, i)));
            }
            RootType::F => {
                edges.extend([(0, 1), (1, 2), (2, 3)]);
                lengths[0] = 4;
                lengths[1] = 4;
            }
            RootType::G => {
                edges.push((0, 1));
                lengths[1] = 6;
            }
        }
        let mut gram = vec![vec![0i64; n]; n];
        for i in 0..n {
            gram[i][i] = lengths[i];
        }
        for &(i, j) in &edges {
            let v = -lengths[i].max(lengths[j]) / 2;
            gram[i][j] = v;
            gram[j][i] = v;
        }
        let cartan = (0..n).map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[i][i]).collect()).collect();
        let mut rs = RootSystem { kind, rank, cartan, gram, roots: Vec::new(), index: HashMap::new() };
        rs.generate_roots();
        Ok(rs)
    }

    fn generate_roots(&mut self) {
        let n = self.rank;
        let mut positive: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: std::collections::HashSet<Vec<i64>> = positive.iter().cloned().collect();
        let mut frontier = positive.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..n {
                    // α_i-string through β: p - q = <β, α_i^∨>
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if known.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - self.pairing_simple(beta, i);
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            positive.extend(next.iter().cloned());
            frontier = next;
        }
        positive.sort_by(|a, b| {
            let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let negatives: Vec<Vec<i64>> = positive.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        self.roots = positive;
        self.roots.extend(negatives);
        self.rebuild_index();
    }

    fn rebuild_index(&mut self) {
        self.index = self.roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    }

    /// `<β, α_i^∨> = 2 (β, α_i) / (α_i, α_i)`.
    fn pairing_simple(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|j| beta[j] * self.cartan[i][j]).sum()
    }

    pub fn kind(&self) -> RootType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn index_of(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive()
    }

    pub fn negative(&self, i: usize) -> usize {
        let p = self.num_positive();
        if i < p {
            i + p
        } else {
            i - p
        }
    }

    /// Index of the simple root α_i.
    pub fn simple(&self, i: usize) -> usize {
        self.index_of(&unit(self.rank, i)).expect("simple root present")
    }

    pub fn height(&self, i: usize) -> i64 {
        self.roots[i].iter().sum()
    }

    pub fn highest_root(&self) -> usize {
        self.num_positive() - 1
    }

    pub fn lowest_root(&self) -> usize {
        self.negative(self.highest_root())
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    pub fn norm2(&self, i: usize) -> i64 {
        self.inner(&self.roots[i], &self.roots[i])
    }

    /// `<β, α^∨> = 2 (β, α) / (α, α)` for root indices.
    pub fn pairing(&self, beta: usize, alpha: usize) -> i64 {
        2 * self.inner(&self.roots[beta], &self.roots[alpha]) / self.norm2(alpha)
    }

    /// Index of `α + β` when it is a root.
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.index_of(&s)
    }

    pub fn difference(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x - y).collect();
        self.index_of(&s)
    }

    /// Largest p with `β - p α ∈ Φ`.
    pub fn string_down(&self, alpha: usize, beta: usize) -> i64 {
        let mut p = 0;
        let mut cur = self.roots[beta].clone();
        loop {
            for (c, a) in cur.iter_mut().zip(&self.roots[alpha]) {
                *c -= a;
            }
            if self.index.contains_key(&cur) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    /// Coefficients of the coroot `α^∨` in the simple coroots.
    pub fn coroot(&self, i: usize) -> Vec<i64> {
        let n2 = self.norm2(i);
        (0..self.rank).map(|j| self.roots[i][j] * self.gram[j][j] / n2).collect()
    }

    /// The Weyl reflection `s_i` applied to a root vector.
    pub fn reflect(&self, v: &[i64], i: usize) -> Vec<i64> {
        let c = (0..self.rank).map(|j| v[j] * self.cartan[i][j]).sum::<i64>();
        let mut out = v.to_vec();
        out[i] -= c;
        out
    }

    /// Number of roots for the type by the classical formula.
    pub fn expected_count(kind: RootType, n: usize) -> usize {
        match kind {
            RootType::A => n * (n + 1),
            RootType::B | RootType::C => 2 * n * n,
            RootType::D => 2 * n * (n - 1),
            RootType::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            RootType::F => 48,
            RootType::G => 12,
        }
    }

    pub fn chevalley_constants(&self) -> ChevalleyConstants {
        ChevalleyConstants::new(self)
    }

    /// Serializes the root data, constants and an optional automorphism.
    pub fn to_json(&self, theta: Option<&DiagramAutomorphism>) -> serde_json::Value {
        let c = self.chevalley_constants();
        let mut constants = Vec::new();
        for a in 0..self.num_roots() {
            for b in 0..self.num_roots() {
                if let Some(s) = self.sum(a, b) {
                    constants.push(serde_json::json!([a, b, s, c.n(a, b)]));
                }
            }
        }
        serde_json::json!({
            "type": self.kind,
            "rank": self.rank,
            "cartan": self.cartan,
            "roots": self.roots,
            "constants": constants,
            "theta": theta.map(|t| t.nodes().to_vec()),
            "epsilon": theta.map(|t| t.signs().to_vec()),
        })
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}
