//! Closed-form cohomology of the line bundles `L_{m,n}` on the variety of
//! flags (line inside plane) in `C^{N+1}`, which equals the cohomology of
//! `S^m Omega_{P^N}(m+n)`. This module is the independent oracle for
//! everything the linear-algebra pipelines compute.
//!
//! The normalization works with `rho = (len-1, ..., 1, 0)`: a weight `alpha`
//! either has a repeated entry in `alpha + rho` (everything vanishes), or
//! sorting `alpha + rho` strictly decreasing by a unique permutation `sigma`
//! puts the cohomology in the single degree `l(sigma)` (inversion count),
//! with dimension given by the Weyl dimension formula on the sorted weight
//! shifted back by `rho`. The overall determinant twist is dropped: over a
//! point it rescales nothing, and the dimension formula only sees entry
//! differences.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// An integer weight for `GL` of the appropriate rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<i64>);

/// Result of the dominance normalization of a weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottOutcome {
    /// True iff `alpha + rho` has a repeated entry; all cohomology vanishes.
    pub vanishes_all: bool,
    /// Inversion count of the sorting permutation of `alpha + rho`.
    pub degree: usize,
    /// `sort_desc(alpha + rho) - rho`, a non-increasing weight.
    pub dominant: Weight,
    /// `dim S^dominant`; zero in the vanishing case.
    pub dimension: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotDominant(pub String);

impl fmt::Display for NotDominant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weight is not non-increasing: {}", self.0)
    }
}

impl core::error::Error for NotDominant {}

/// Normalize a weight through the shifted sorting action.
pub fn dominance_normalize(alpha: &Weight) -> BottOutcome {
    let len = alpha.0.len();
    let shifted: Vec<i64> = alpha
        .0
        .iter()
        .enumerate()
        .map(|(i, &a)| a + (len - 1 - i) as i64)
        .collect();

    // inversion count of the descending sort = Coxeter length of sigma
    let mut degree = 0usize;
    for i in 0..len {
        for j in i + 1..len {
            if shifted[i] < shifted[j] {
                degree += 1;
            }
        }
    }
    let mut sorted = shifted.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let vanishes_all = sorted.windows(2).any(|w| w[0] == w[1]);
    let dominant = Weight(
        sorted
            .iter()
            .enumerate()
            .map(|(i, &s)| s - (len - 1 - i) as i64)
            .collect(),
    );
    let dimension = if vanishes_all {
        BigUint::zero()
    } else {
        schur_dim(&dominant, len).expect("sorted weight is non-increasing")
    };
    BottOutcome { vanishes_all, degree, dominant, dimension }
}

/// Weyl dimension formula `prod_{i<j} (l_i - l_j + j - i) / (j - i)` for a
/// non-increasing weight with `n` entries (shorter weights are padded with
/// zeros; longer ones must end in zeros).
pub fn schur_dim(lambda: &Weight, n: usize) -> Result<BigUint, NotDominant> {
    let mut ext: Vec<i64> = lambda.0.clone();
    if ext.len() > n {
        if ext[n..].iter().any(|&v| v != 0) {
            return Ok(BigUint::zero());
        }
        ext.truncate(n);
    }
    ext.resize(n, 0);
    if ext.windows(2).any(|w| w[0] < w[1]) {
        return Err(NotDominant(alloc::format!("{:?}", lambda.0)));
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..n {
        for j in i + 1..n {
            let d = ext[i] - ext[j] + (j - i) as i64;
            debug_assert!(d > 0);
            num *= BigUint::from(d as u64);
            den *= BigUint::from((j - i) as u64);
        }
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// Cohomology of `S^m Omega_{P^N}(m+n)` as a map degree -> dimension,
/// omitting zero entries. Exactly one degree is nonzero (or none). Computed
/// by normalizing the weight `(n, m, 0, ..., 0)` of length `N+1`.
pub fn proj_cotangent_cohomology(ambient: usize, m: i64, n: i64) -> BTreeMap<usize, BigUint> {
    assert!(m >= 0, "symmetric power must be nonnegative");
    let mut alpha = vec![0i64; ambient + 1];
    alpha[0] = n;
    alpha[1] = m;
    let out = dominance_normalize(&Weight(alpha));
    let mut h = BTreeMap::new();
    if !out.vanishes_all && !out.dimension.is_zero() {
        h.insert(out.degree, out.dimension);
    }
    h
}

/// Cohomology of the same line bundle computed from the three-regime table:
/// `n >= m` puts everything in degree 0 with the Schur dimension of
/// `(n, m)`; `-(N+1) < n < m` puts everything in degree 1 with the Schur
/// dimension of `(m-1, n+1)` (empty unless `-1 <= n <= m-2`); and
/// `n <= -(N+1)` puts everything in degree `N` with the dimension of the
/// hook-shaped weight. Must agree with [`proj_cotangent_cohomology`] for
/// every `m >= 0`; keeping the two code paths separate is what makes the
/// agreement a real check.
pub fn flag12_cohomology(ambient: usize, m: i64, n: i64) -> BTreeMap<usize, BigUint> {
    assert!(m >= 0, "symmetric power must be nonnegative");
    let len = ambient + 1;
    let mut h = BTreeMap::new();
    if n >= m {
        let mut lambda = vec![0i64; len];
        lambda[0] = n;
        lambda[1] = m;
        h.insert(0, schur_dim(&Weight(lambda), len).unwrap());
    } else if n > -(len as i64) {
        if (-1..=m - 2).contains(&n) {
            let mut lambda = vec![0i64; len];
            lambda[0] = m - 1;
            lambda[1] = n + 1;
            h.insert(1, schur_dim(&Weight(lambda), len).unwrap());
        }
    } else {
        let hook = -(n + len as i64);
        let mut lambda = vec![hook; len];
        lambda[0] = m + hook;
        lambda[len - 1] = 0;
        h.insert(ambient, schur_dim(&Weight(lambda), len).unwrap());
    }
    h.retain(|_, v| !v.is_zero());
    h
}
