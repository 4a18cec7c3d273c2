use super::{LieAlgebra, Matrix, Vector};
use crate::arith::Ring;

/// Basis positions of `E_ij` (i ≠ j) in the sl_n model, 0-based.
fn offdiag_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j);
    i * (n - 1) + if j > i { j - 1 } else { j }
}

/// Coordinates of a traceless `n x n` matrix in the basis `E_ij` (i ≠ j, row
/// major), then `H_i = E_ii - E_{i+1,i+1}`.
pub fn matrix_to_vector<R: Ring>(ring: &R, n: usize, m: &Matrix<R::Elem>) -> Vector<R::Elem> {
    let mut v = vec![ring.zero(); n * n - 1];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                v[offdiag_index(n, i, j)] = m[i][j].clone();
            }
        }
    }
    let mut acc = ring.zero();
    for i in 0..n - 1 {
        acc = ring.add(&acc, &m[i][i]);
        v[n * (n - 1) + i] = acc.clone();
    }
    v
}

pub fn vector_to_matrix<R: Ring>(ring: &R, n: usize, v: &[R::Elem]) -> Matrix<R::Elem> {
    let mut m = vec![vec![ring.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[i][j] = v[offdiag_index(n, i, j)].clone();
            }
        }
    }
    for i in 0..n - 1 {
        let c = &v[n * (n - 1) + i];
        m[i][i] = ring.add(&m[i][i], c);
        m[i + 1][i + 1] = ring.sub(&m[i + 1][i + 1], c);
    }
    m
}

/// sl_n as a matrix Lie algebra with labels `E12, …, H1, …`.
pub fn sl_n_algebra<R: Ring>(ring: R, n: usize) -> LieAlgebra<R> {
    assert!(n >= 2);
    let d = n * n - 1;
    let mut labels = vec![String::new(); d];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                labels[offdiag_index(n, i, j)] = format!("E{}{}", i + 1, j + 1);
            }
        }
    }
    for i in 0..n - 1 {
        labels[n * (n - 1) + i] = format!("H{}", i + 1);
    }
    let basis: Vec<Matrix<R::Elem>> = (0..d)
        .map(|k| {
            let mut v = vec![ring.zero(); d];
            v[k] = ring.one();
            vector_to_matrix(&ring, n, &v)
        })
        .collect();
    let mut consts = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let ab = super::matmul(&ring, &basis[a], &basis[b]);
            let ba = super::matmul(&ring, &basis[b], &basis[a]);
            let comm: Matrix<R::Elem> = ab
                .iter()
                .zip(&ba)
                .map(|(x, y)| x.iter().zip(y).map(|(p, q)| ring.sub(p, q)).collect())
                .collect();
            for (k, c) in matrix_to_vector(&ring, n, &comm).into_iter().enumerate() {
                if !ring.is_zero(&c) {
                    consts.push((a, b, k, c));
                }
            }
        }
    }
    LieAlgebra::from_constants(ring, labels, consts).expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;
    use crate::lie::chevalley_algebra_over;
    use crate::roots::RootSystem;

    #[test]
    fn sl3_matrix_model_matches_chevalley_a2() {
        let q = Rationals;
        let m = sl_n_algebra(q, 3);
        m.check_jacobi().unwrap();
        let rs: RootSystem = "A2".parse().unwrap();
        let c = chevalley_algebra_over(&rs, q);
        assert_eq!(m.dim(), c.dim());
        // e_{α1} ↦ E12, e_{α2} ↦ E23 and their negatives; extend through brackets
        let mut image = vec![None; c.dim()];
        let pe = |s: &str| m.parse_element(s).unwrap();
        image[c.label_index("e10").unwrap()] = Some(pe("E12"));
        image[c.label_index("e01").unwrap()] = Some(pe("E23"));
        image[c.label_index("f10").unwrap()] = Some(pe("E21"));
        image[c.label_index("f01").unwrap()] = Some(pe("E32"));
        image[c.label_index("h1").unwrap()] = Some(pe("H1"));
        image[c.label_index("h2").unwrap()] = Some(pe("H2"));
        let e11 = c.label_index("e11").unwrap();
        let f11 = c.label_index("f11").unwrap();
        image[e11] = Some(m.bracket(&pe("E12"), &pe("E23")));
        image[f11] = Some(m.bracket(&pe("E32"), &pe("E21")));
        // [e10, e01] = N e11 with N = 1, [f01, f10] = -N_{f10,f01} f11 = N f11
        let img: Vec<_> = image.into_iter().map(|x| x.unwrap()).collect();
        let lift = |v: &[num_rational::BigRational]| {
            let mut out = m.zero();
            for (k, x) in v.iter().enumerate() {
                out = m.combine(&[(q.one(), &out), (x.clone(), &img[k])]);
            }
            out
        };
        for a in 0..8 {
            for b in 0..8 {
                let lhs = lift(&c.bracket(&c.basis(a), &c.basis(b)));
                let rhs = m.bracket(&img[a], &img[b]);
                assert_eq!(lhs, rhs, "{} {}", c.labels()[a], c.labels()[b]);
            }
        }
    }

    #[test]
    fn vector_matrix_round_trip() {
        let q = Rationals;
        let v: Vec<_> = (0..15).map(|i| q.from_i64(i * 3 - 7)).collect();
        let m = vector_to_matrix(&q, 4, &v);
        assert_eq!(matrix_to_vector(&q, 4, &m), v);
    }
}
