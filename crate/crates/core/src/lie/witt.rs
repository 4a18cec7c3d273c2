use super::{LieAlgebra, LieError};
use crate::arith::{is_prime, PrimeField, Ring};

/// The Witt algebra W(p) over F_p with basis `e_{-1}, …, e_{p-2}` and
/// `[e_i, e_j] = (j - i) e_{i+j}` when `-1 <= i + j <= p - 2`.
pub fn witt_algebra(p: u64) -> Result<LieAlgebra<PrimeField>, LieError> {
    if p < 5 || !is_prime(p) {
        return Err(LieError::InvalidWittPrime(p));
    }
    let f = PrimeField::new(p).map_err(|_| LieError::InvalidWittPrime(p))?;
    let top = p as i64 - 2;
    let labels: Vec<String> = (-1..=top).map(|i| format!("e{i}")).collect();
    let mut consts = Vec::new();
    for i in -1..=top {
        for j in -1..=top {
            let s = i + j;
            if i == j || !(-1..=top).contains(&s) {
                continue;
            }
            let c = f.from_i64(j - i);
            if c != 0 {
                consts.push(((i + 1) as usize, (j + 1) as usize, (s + 1) as usize, c));
            }
        }
    }
    LieAlgebra::new(f, labels, consts)
}
