use alloc::vec::Vec;

use super::{piece_dimension, BiDegree, Monomial, PolyError};

/// Binomial coefficient as `u64`; panics on overflow (far beyond the sizes
/// this tool is meant for).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// Number of exponent vectors with `parts` entries summing to `total`.
#[inline]
fn compositions(total: i64, parts: usize) -> u64 {
    if total < 0 {
        return 0;
    }
    if parts == 0 {
        return (total == 0) as u64;
    }
    binomial(total as u64 + parts as u64 - 1, parts as u64 - 1)
}

/// The monomial basis of one piece `S_{m,n}`, with mutually inverse
/// `rank`/`unrank` bijections onto `0..size`.
///
/// Rank 0 is the largest monomial in descending graded-reverse-lex order
/// within each block (so for `(m,n) = (1,0)` the monomials `Y0, Y1, Y2, ...`
/// receive ranks `0, 1, 2, ...`), and the combined rank is Y-block major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    ambient: usize,
    bidegree: BiDegree,
    ysize: u64,
    xsize: u64,
}

impl MonomialBasis {
    pub fn new(ambient: usize, bidegree: BiDegree) -> Self {
        let k = ambient as u64;
        let (ysize, xsize) = if bidegree.is_empty() {
            (0, 0)
        } else {
            (
                binomial(bidegree.m as u64 + k, k),
                binomial(bidegree.n as u64 + k, k),
            )
        };
        MonomialBasis { ambient, bidegree, ysize, xsize }
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn bidegree(&self) -> BiDegree {
        self.bidegree
    }

    #[inline]
    pub fn size(&self) -> u64 {
        debug_assert_eq!(self.ysize * self.xsize, piece_dimension(self.ambient, self.bidegree));
        self.ysize * self.xsize
    }

    pub fn rank(&self, mono: &Monomial) -> Result<u64, PolyError> {
        let want = BiDegree::new(mono.ydeg() as i64, mono.xdeg() as i64);
        if want != self.bidegree || mono.nvars() != self.ambient + 1 {
            return Err(PolyError::BidegreeMismatch { expected: self.bidegree, got: want });
        }
        Ok(block_rank(&mono.y) * self.xsize + block_rank(&mono.x))
    }

    pub fn unrank(&self, index: u64) -> Monomial {
        assert!(index < self.size(), "index {index} out of range");
        let y = block_unrank(self.ambient + 1, self.bidegree.m as u32, index / self.xsize);
        let x = block_unrank(self.ambient + 1, self.bidegree.n as u32, index % self.xsize);
        Monomial { y, x }
    }
}

/// Rank of a fixed-degree exponent vector in descending grevlex order:
/// the lexicographic rank of the reversed vector.
pub(crate) fn block_rank(exps: &[u32]) -> u64 {
    let k = exps.len();
    let mut rank = 0u64;
    let mut rem: i64 = exps.iter().map(|&e| e as i64).sum();
    for i in 0..k {
        let e = exps[k - 1 - i] as i64;
        for v in 0..e {
            rank += compositions(rem - v, k - i - 1);
        }
        rem -= e;
    }
    rank
}

pub(crate) fn block_unrank(k: usize, degree: u32, mut index: u64) -> Vec<u32> {
    let mut rev = Vec::with_capacity(k);
    let mut rem = degree as i64;
    for i in 0..k {
        let mut chosen = None;
        for v in 0..=rem {
            let cnt = compositions(rem - v, k - i - 1);
            if index < cnt {
                chosen = Some(v);
                break;
            }
            index -= cnt;
        }
        let v = chosen.expect("index within basis size");
        rev.push(v as u32);
        rem -= v;
    }
    rev.reverse();
    rev
}
