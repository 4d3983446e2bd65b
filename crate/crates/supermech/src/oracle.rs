//! Dense numeric exterior algebra, used as an independent oracle for the
//! symbolic Grassmann layer.
//!
//! An element over k generators is a vector of 2^k coefficients indexed by
//! bitmask; index `m` stands for the product of the generators in `m` in
//! increasing order.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    k: usize,
    c: Vec<f64>,
}

/// Sign of e_a · e_b when both are sorted products with disjoint supports.
fn reorder_sign(a: u64, b: u64) -> f64 {
    let mut swaps = 0;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        swaps += (b & ((1u64 << i) - 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Dense {
    pub fn zero(k: usize) -> Self {
        Dense { k, c: vec![0.0; 1 << k] }
    }

    pub fn from_map(k: usize, m: &BTreeMap<u64, f64>) -> Self {
        let mut d = Dense::zero(k);
        for (&mask, &v) in m {
            d.c[mask as usize] += v;
        }
        d
    }

    pub fn coefficient(&self, mask: u64) -> f64 {
        self.c[mask as usize]
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        let mut out = Dense::zero(self.k);
        for (a, &x) in self.c.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (b, &y) in other.c.iter().enumerate() {
                if y == 0.0 || a & b != 0 {
                    continue;
                }
                out.c[a | b] += reorder_sign(a as u64, b as u64) * x * y;
            }
        }
        out
    }

    /// Left derivative by generator `g`.
    pub fn derivative(&self, g: u32) -> Dense {
        let mut out = Dense::zero(self.k);
        let bit = 1usize << g;
        for (m, &x) in self.c.iter().enumerate() {
            if m & bit != 0 {
                let before = (m & (bit - 1)).count_ones();
                out.c[m ^ bit] += if before % 2 == 0 { x } else { -x };
            }
        }
        out
    }

    /// Largest coefficient difference, relative to max(1, |coefficient|).
    pub fn distance(&self, other: &Dense) -> f64 {
        self.c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(k: usize, masks: &[(u64, f64)]) -> Dense {
        Dense::from_map(k, &masks.iter().copied().collect())
    }

    #[test]
    fn anticommuting_generators() {
        let (t1, t2) = (gen(2, &[(1, 1.0)]), gen(2, &[(2, 1.0)]));
        assert_eq!(t1.mul(&t2).coefficient(3), 1.0);
        assert_eq!(t2.mul(&t1).coefficient(3), -1.0);
        assert_eq!(t1.mul(&t1), Dense::zero(2));
        let one_plus = gen(2, &[(0, 1.0), (3, 1.0)]);
        let one_minus = gen(2, &[(0, 1.0), (3, -1.0)]);
        assert_eq!(one_plus.mul(&one_minus), gen(2, &[(0, 1.0)]));
    }

    #[test]
    fn left_derivative_signs() {
        let t12 = gen(2, &[(3, 1.0)]);
        assert_eq!(t12.derivative(0), gen(2, &[(2, 1.0)]));
        assert_eq!(t12.derivative(1), gen(2, &[(1, -1.0)]));
    }
}
