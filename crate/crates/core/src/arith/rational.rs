use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense matrix over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigRational>>,
}

/// Output of [`RationalMatrix::rank_kernel`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel: Vec<Vec<BigRational>>,
    pub pivot_cols: Vec<usize>,
    /// Leading entries of the fraction-free echelon form. The last one is a
    /// nonzero `rank x rank` minor, so the rank is preserved modulo any prime
    /// not dividing it.
    pub pivots: Vec<BigInt>,
}

impl RationalMatrix {
    pub fn new(data: Vec<Vec<BigRational>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![vec![BigRational::zero(); cols]; rows] }
    }

    pub fn from_ints(data: &[Vec<i64>]) -> Self {
        Self::new(
            data.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn from_bigints(data: &[Vec<BigInt>]) -> Self {
        Self::new(
            data.iter()
                .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i][j] = v;
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| r.iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += t;
                }
            }
        }
        out
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigRational::one();
        }
        m
    }

    pub fn pow(&self, k: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        (0..k).fold(Self::identity(self.rows), |acc, _| acc.mul(self))
    }

    pub fn rank(&self) -> usize {
        self.rank_kernel().rank
    }

    /// Rank, kernel basis and pivots by fraction-free (Bareiss) elimination.
    pub fn rank_kernel(&self) -> RankKernel {
        let mut m: Vec<Vec<BigInt>> = self.data.iter().map(|r| clear_denominators(r)).collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        let mut pivot_cols = Vec::new();
        let mut pivots = Vec::new();
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(i) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, i);
            for i in r + 1..rows {
                for j in c + 1..cols {
                    let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                    m[i][j] = v / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            // entries left of c in rows below are already zero
            prev = m[r][c].clone();
            pivot_cols.push(c);
            pivots.push(prev.clone());
            r += 1;
        }
        let rank = r;
        let mut is_pivot = vec![false; cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let mut kernel = Vec::new();
        for free in (0..cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![BigRational::zero(); cols];
            x[free] = BigRational::one();
            for k in (0..rank).rev() {
                let pc = pivot_cols[k];
                let mut s = BigRational::zero();
                for j in pc + 1..cols {
                    if !m[k][j].is_zero() && !x[j].is_zero() {
                        s += BigRational::from_integer(m[k][j].clone()) * &x[j];
                    }
                }
                x[pc] = -s / BigRational::from_integer(m[k][pc].clone());
            }
            kernel.push(x);
        }
        RankKernel { rank, kernel, pivot_cols, pivots }
    }
}

/// Multiplies a rational row by the lcm of its denominators.
pub(crate) fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Scales a rational vector to a primitive integer vector with positive leading entry.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let mut ints = clear_denominators(v);
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in ints.iter_mut() {
        *x = &*x / &g;
        if sign_neg {
            *x = -&*x;
        }
    }
    ints
}
