use num_rational::Ratio;
use num_traits::Zero;

use super::RootSystem;

/// Structure constants `N_{α,β}` of a Chevalley basis.
///
/// Signs are fixed by `N = +(p+1)` on extraspecial pairs, where positive roots
/// are ordered by height and then lexicographically; all other constants follow
/// from the Chevalley relations, with `N_{-α,-β} = -N_{α,β}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChevalleyConstants {
    nroots: usize,
    table: Vec<i64>,
}

impl ChevalleyConstants {
    pub fn new(rs: &RootSystem) -> Self {
        let r = rs.num_roots();
        let np = rs.num_positive();
        let mut c = ChevalleyConstants { nroots: r, table: vec![0; r * r] };
        for xi in 0..np {
            let mut special: Vec<(usize, usize)> = Vec::new();
            for a in 0..xi {
                if let Some(b) = rs.difference(xi, a) {
                    if rs.is_positive(b) && a < b {
                        special.push((a, b));
                    }
                }
            }
            let Some(&(a0, b0)) = special.first() else { continue };
            let n0 = rs.string_down(a0, b0) + 1;
            c.set(a0, b0, n0);
            let xi2 = rs.norm2(xi);
            for &(a, b) in &special[1..] {
                let mut s = Ratio::<i64>::zero();
                // β - α' and α - β' are roots together
                if let Some(d) = rs.difference(b, a0) {
                    let t = c.get(rs, b, rs.negative(a0)) * c.get(rs, a, rs.negative(b0));
                    s += Ratio::new(t, rs.norm2(d));
                }
                if let Some(d) = rs.difference(a, a0) {
                    let t = c.get(rs, rs.negative(a0), a) * c.get(rs, b, rs.negative(b0));
                    s += Ratio::new(t, rs.norm2(d));
                }
                let v = s * Ratio::from_integer(xi2) / Ratio::from_integer(n0);
                assert!(v.is_integer(), "non-integral structure constant");
                let v = v.to_integer();
                assert_eq!(v.abs(), rs.string_down(a, b) + 1, "magnitude rule violated");
                c.set(a, b, v);
            }
        }
        // fill every remaining pair from the positive table
        for a in 0..r {
            for b in 0..r {
                if rs.sum(a, b).is_some() && c.table[a * r + b] == 0 {
                    let v = c.get(rs, a, b);
                    c.table[a * r + b] = v;
                }
            }
        }
        c
    }

    fn set(&mut self, a: usize, b: usize, v: i64) {
        self.table[a * self.nroots + b] = v;
        self.table[b * self.nroots + a] = -v;
    }

    fn get(&self, rs: &RootSystem, a: usize, b: usize) -> i64 {
        let stored = self.table[a * self.nroots + b];
        if stored != 0 {
            return stored;
        }
        let c = rs.sum(a, b).expect("sum must be a root");
        let (pa, pb) = (rs.is_positive(a), rs.is_positive(b));
        if pa && pb {
            panic!("positive pair requested before it was computed");
        }
        if !pa && !pb {
            return -self.get(rs, rs.negative(a), rs.negative(b));
        }
        // a + b + γ = 0: N_{a,b}/(γ,γ) = N_{b,γ}/(a,a) = N_{γ,a}/(b,b)
        let g = rs.negative(c);
        let g2 = rs.norm2(g);
        let (num, den) = if rs.is_positive(c) {
            if !pb {
                (-self.get(rs, rs.negative(b), c), rs.norm2(a))
            } else {
                (-self.get(rs, c, rs.negative(a)), rs.norm2(b))
            }
        } else if pa {
            (self.get(rs, g, a), rs.norm2(b))
        } else {
            (self.get(rs, b, g), rs.norm2(a))
        };
        assert_eq!((num * g2) % den, 0, "non-integral structure constant");
        num * g2 / den
    }

    /// `N_{α,β}`, zero when `α + β` is not a root.
    pub fn n(&self, a: usize, b: usize) -> i64 {
        self.table[a * self.nroots + b]
    }
}
