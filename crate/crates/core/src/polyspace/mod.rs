//! Bihomogeneous polynomial spaces `S_{m,n}` in two blocks of `N+1`
//! variables `Y` and `X`.
//!
//! A piece `S_{m,n}` consists of polynomials homogeneous of degree `m` in
//! `Y` and `n` in `X`; it is the zero space whenever `m < 0` or `n < 0`, and
//! downstream code treats such pieces as dimension 0, never as errors.
//!
//! One global monomial convention is used everywhere so that matrices are
//! bit-reproducible across runs: graded-reverse-lexicographic order within
//! the `Y` block and within the `X` block, `Y` block major.

mod order;
mod parse;
mod poly;

pub use order::{binomial, MonomialBasis};
pub use parse::parse_poly;
pub use poly::{IntPoly, IntegerRing, Monomial, Ring, SparseBiPoly};

use alloc::string::String;
use core::fmt;

/// A pair `(m, n)` of Y-degree and X-degree indexing graded pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiDegree {
    pub m: i64,
    pub n: i64,
}

impl BiDegree {
    pub fn new(m: i64, n: i64) -> Self {
        BiDegree { m, n }
    }

    /// True when the piece `S_{m,n}` is the zero space.
    pub fn is_empty(&self) -> bool {
        self.m < 0 || self.n < 0
    }

    pub fn shifted(&self, dm: i64, dn: i64) -> Self {
        BiDegree { m: self.m + dm, n: self.n + dn }
    }

    pub fn plus(&self, other: BiDegree) -> Self {
        self.shifted(other.m, other.n)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// `dim S_{m,n} = C(m+N, N) * C(n+N, N)`, or 0 for a negative component.
pub fn piece_dimension(ambient: usize, b: BiDegree) -> u64 {
    if b.is_empty() {
        return 0;
    }
    let n = ambient as u64;
    binomial(b.m as u64 + n, n) * binomial(b.n as u64 + n, n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    AmbientMismatch { left: usize, right: usize },
    BidegreeMismatch { expected: BiDegree, got: BiDegree },
    DegreeMismatch(String),
    Parse { pos: usize, msg: String },
    NotBihomogeneous { pos: usize },
    VarIndexOutOfRange { pos: usize, index: usize, ambient: usize },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::AmbientMismatch { left, right } => {
                write!(f, "ambient dimensions differ: N={left} vs N={right}")
            }
            PolyError::BidegreeMismatch { expected, got } => {
                write!(f, "bidegree mismatch: expected {expected}, got {got}")
            }
            PolyError::DegreeMismatch(msg) => write!(f, "degree mismatch: {msg}"),
            PolyError::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            PolyError::NotBihomogeneous { pos } => {
                write!(f, "polynomial is not bihomogeneous (term ending at byte {pos})")
            }
            PolyError::VarIndexOutOfRange { pos, index, ambient } => write!(
                f,
                "variable index {index} at byte {pos} exceeds ambient N={ambient}"
            ),
        }
    }
}

impl core::error::Error for PolyError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piece_dimension_examples() {
        // N=3, (6,14) -> 84 * 680
        assert_eq!(piece_dimension(3, BiDegree::new(6, 14)), 84 * 680);
        // N=4, (2,7) -> 15 * 330
        assert_eq!(piece_dimension(4, BiDegree::new(2, 7)), 15 * 330);
        // empty pieces
        assert_eq!(piece_dimension(3, BiDegree::new(4, -1)), 0);
        assert_eq!(piece_dimension(3, BiDegree::new(-2, 5)), 0);
        assert_eq!(piece_dimension(2, BiDegree::new(0, 0)), 1);
    }

    #[test]
    fn piece_dimension_matches_enumeration() {
        // exhaustive stars-and-bars check for all N <= 4, m, n <= 6
        for ambient in 1..=4usize {
            for m in 0..=6i64 {
                for n in 0..=6i64 {
                    let k = ambient + 1;
                    let count = |d: i64| -> u64 {
                        // enumerate exponent vectors of length k summing to d
                        fn go(parts: usize, rem: i64) -> u64 {
                            if parts == 1 {
                                return 1;
                            }
                            (0..=rem).map(|v| go(parts - 1, rem - v)).sum()
                        }
                        go(k, d)
                    };
                    assert_eq!(
                        piece_dimension(ambient, BiDegree::new(m, n)),
                        count(m) * count(n),
                        "N={ambient} m={m} n={n}"
                    );
                }
            }
        }
    }
}
