use serde::{Deserialize, Serialize};

use super::{RootError, RootSystem, RootType};
use crate::arith::Ring;

/// A permutation of basis vectors with signs: `b ↦ sign[b] · basis[perm[b]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i64>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect(), signs: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let signs = other.signs.iter().zip(&other.perm).map(|(&s, &j)| s * self.signs[j]).collect();
        SignedPermutation { perm, signs }
    }

    pub fn pow(&self, k: usize) -> SignedPermutation {
        (0..k).fold(Self::identity(self.len()), |acc, _| self.compose(&acc))
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut perm = vec![0; self.len()];
        let mut signs = vec![1; self.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
            signs[p] = self.signs[i];
        }
        SignedPermutation { perm, signs }
    }

    /// Smallest k >= 1 with `self^k = id`.
    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = self.compose(&cur);
            k += 1;
        }
        k
    }

    pub fn apply<R: Ring>(&self, ring: &R, v: &[R::Elem]) -> Vec<R::Elem> {
        let mut out = vec![ring.zero(); v.len()];
        for (b, x) in v.iter().enumerate() {
            out[self.perm[b]] = if self.signs[b] == 1 { x.clone() } else { ring.neg(x) };
        }
        out
    }
}

/// A Dynkin diagram symmetry together with the sign function making the
/// induced map on the Chevalley basis a Lie ring automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramAutomorphism {
    nodes: Vec<usize>,
    root_perm: Vec<usize>,
    signs: Vec<i64>,
    order: usize,
}

impl DiagramAutomorphism {
    /// `nodes[i]` is the image of simple root `i` (0-based).
    pub fn new(rs: &RootSystem, nodes: &[usize]) -> Result<Self, RootError> {
        let n = rs.rank();
        let mut seen = vec![false; n];
        if nodes.len() != n || nodes.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true)) {
            return Err(RootError::NotASymmetry);
        }
        for i in 0..n {
            for j in 0..n {
                if rs.cartan()[nodes[i]][nodes[j]] != rs.cartan()[i][j] {
                    return Err(RootError::NotASymmetry);
                }
            }
        }
        let root_perm: Vec<usize> = rs
            .roots()
            .iter()
            .map(|r| {
                let mut img = vec![0; n];
                for (i, &k) in r.iter().enumerate() {
                    img[nodes[i]] += k;
                }
                rs.index_of(&img).expect("diagram symmetry permutes roots")
            })
            .collect();
        let c = rs.chevalley_constants();
        let np = rs.num_positive();
        let mut signs = vec![0i64; rs.num_roots()];
        for xi in 0..np {
            if rs.height(xi) == 1 {
                signs[xi] = 1;
                continue;
            }
            for a in 0..xi {
                let Some(b) = rs.difference(xi, a) else { continue };
                if !rs.is_positive(b) {
                    continue;
                }
                // ε(α+β) N_{α,β} = ε(α) ε(β) N_{ϑα,ϑβ}
                let num = signs[a] * signs[b] * c.n(root_perm[a], root_perm[b]);
                let den = c.n(a, b);
                if num % den != 0 || (num / den).abs() != 1 {
                    return Err(RootError::SignConflict(rs.root(xi).to_vec()));
                }
                let e = num / den;
                if signs[xi] == 0 {
                    signs[xi] = e;
                } else if signs[xi] != e {
                    return Err(RootError::SignConflict(rs.root(xi).to_vec()));
                }
            }
        }
        for i in 0..np {
            signs[rs.negative(i)] = signs[i];
        }
        let mut order = 1;
        let mut cur: Vec<usize> = nodes.to_vec();
        while cur.iter().enumerate().any(|(i, &j)| i != j) {
            cur = cur.iter().map(|&j| nodes[j]).collect();
            order += 1;
        }
        Ok(Self { nodes: nodes.to_vec(), root_perm, signs, order })
    }

    pub fn identity(rs: &RootSystem) -> Self {
        let nodes: Vec<usize> = (0..rs.rank()).collect();
        Self::new(rs, &nodes).expect("identity is a symmetry")
    }

    /// The standard symmetry of the given order: the flip of A_n and E_6, the
    /// leg swap of D_n, and triality of D_4 (nodes 1 → 3 → 4 → 1).
    pub fn standard(rs: &RootSystem, order: usize) -> Result<Self, RootError> {
        let n = rs.rank();
        let none = || RootError::NoSuchSymmetry(rs.label(), order);
        let nodes: Vec<usize> = match (rs.kind(), order) {
            (_, 1) => (0..n).collect(),
            (RootType::A, 2) if n >= 2 => (0..n).map(|i| n - 1 - i).collect(),
            (RootType::D, 2) => {
                let mut v: Vec<usize> = (0..n).collect();
                v.swap(n - 2, n - 1);
                v
            }
            (RootType::D, 3) if n == 4 => vec![2, 1, 3, 0],
            (RootType::E, 2) if n == 6 => vec![5, 1, 4, 3, 2, 0],
            _ => return Err(none()),
        };
        Self::new(rs, &nodes)
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn root_image(&self, i: usize) -> usize {
        self.root_perm[i]
    }

    pub fn sign(&self, i: usize) -> i64 {
        self.signs[i]
    }

    pub fn signs(&self) -> &[i64] {
        &self.signs
    }

    /// The induced map on the basis `e_α (α ∈ Φ), h_1, …, h_n`.
    pub fn signed_permutation(&self) -> SignedPermutation {
        let r = self.root_perm.len();
        let mut perm = self.root_perm.clone();
        perm.extend(self.nodes.iter().map(|&j| r + j));
        let mut signs = self.signs.clone();
        signs.extend(std::iter::repeat(1).take(self.nodes.len()));
        SignedPermutation { perm, signs }
    }
}
