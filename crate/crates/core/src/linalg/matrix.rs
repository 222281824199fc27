use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::echelon::RowEchelon;
use super::{LinalgError, PrimeField, SparseVec};

/// A sparse matrix over a prime field, stored column-major.
///
/// Entries are reduced mod the field; row indices within a column are
/// strictly increasing and no zero is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n as u32).map(|i| vec![(i, 1)]).collect();
        SparseMatrix { nrows: n, ncols: n, cols }
    }

    /// Build from columns; each column is sorted and zero-stripped.
    pub fn from_columns(nrows: usize, mut cols: Vec<SparseVec>) -> Self {
        for col in &mut cols {
            col.retain(|&(_, v)| v != 0);
            col.sort_unstable_by_key(|&(r, _)| r);
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(col.last().is_none_or(|&(r, _)| (r as usize) < nrows));
        }
        let ncols = cols.len();
        SparseMatrix { nrows, ncols, cols }
    }

    /// Build from rows (transposed input).
    pub fn from_rows(ncols: usize, rows: &[SparseVec]) -> Self {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                if v != 0 {
                    cols[c as usize].push((i as u32, v));
                }
            }
        }
        SparseMatrix { nrows: rows.len(), ncols, cols }
    }

    /// Build from dense rows of signed integers, reducing into the field.
    pub fn from_dense_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let sparse: Vec<SparseVec> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter_map(|(j, &v)| {
                        let v = field.reduce_i64(v);
                        (v != 0).then_some((j as u32, v))
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(ncols, &sparse)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[(u32, u64)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Rows of the matrix (transposed view), sorted by column.
    pub fn to_rows(&self) -> Vec<SparseVec> {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                rows[r as usize].push((j as u32, v));
            }
        }
        rows
    }

    /// Matrix-vector product with a dense vector.
    pub fn apply_dense(&self, field: PrimeField, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.ncols);
        let mut out = vec![0u64; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            let x = v[j];
            if x == 0 {
                continue;
            }
            for &(r, c) in col {
                out[r as usize] = field.add(out[r as usize], field.mul(c, x));
            }
        }
        out
    }

    /// `self * other`, for composing differentials.
    pub fn compose(&self, field: PrimeField, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.ncols != other.nrows {
            return Err(LinalgError::Shape(format!(
                "compose: {}x{} with {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut acc = vec![0u64; self.nrows];
        let mut touched: Vec<u32> = Vec::new();
        let cols = other
            .cols
            .iter()
            .map(|col| {
                for &(k, v) in col {
                    for &(r, w) in &self.cols[k as usize] {
                        if acc[r as usize] == 0 {
                            touched.push(r);
                        }
                        acc[r as usize] = field.add(acc[r as usize], field.mul(v, w));
                    }
                }
                touched.sort_unstable();
                let out: SparseVec = touched
                    .iter()
                    .filter_map(|&r| {
                        let v = acc[r as usize];
                        acc[r as usize] = 0;
                        (v != 0).then_some((r, v))
                    })
                    .collect();
                touched.clear();
                out
            })
            .collect();
        Ok(SparseMatrix { nrows: self.nrows, ncols: other.ncols, cols })
    }
}

/// A reduced row basis: leading coefficient 1 at each pivot column, pivot
/// columns zero in every other row, pivots strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonForm {
    pub ncols: usize,
    pub pivots: Vec<u32>,
    pub rows: Vec<SparseVec>,
}

impl EchelonForm {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Rank of the matrix over the field. Deterministic for fixed input.
pub fn rank(m: &SparseMatrix, field: PrimeField) -> usize {
    let mut ech = RowEchelon::new(field, m.ncols());
    for row in m.to_rows() {
        ech.push_row(&row);
    }
    ech.rank()
}

/// Reduced row echelon form of the row space, pivots smallest-column-first.
pub fn echelonize(m: &SparseMatrix, field: PrimeField) -> EchelonForm {
    let mut ech = RowEchelon::new(field, m.ncols());
    for row in m.to_rows() {
        ech.push_row(&row);
    }
    let ncols = m.ncols();
    let (pivots, rows) = ech.into_reduced_rows();
    EchelonForm { ncols, pivots, rows }
}

/// A basis of the right kernel `{v : M v = 0}`, as dense coordinate vectors.
/// Its size is `ncols - rank(M)`.
pub fn nullspace(m: &SparseMatrix, field: PrimeField) -> Vec<Vec<u64>> {
    let ech = echelonize(m, field);
    let mut is_pivot = vec![false; m.ncols()];
    for &c in &ech.pivots {
        is_pivot[c as usize] = true;
    }
    let mut basis = Vec::new();
    for free in 0..m.ncols() {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![0u64; m.ncols()];
        v[free] = 1;
        for (row, &c) in ech.rows.iter().zip(&ech.pivots) {
            if let Ok(k) = row.binary_search_by_key(&(free as u32), |&(cc, _)| cc) {
                v[c as usize] = field.neg(row[k].1);
            }
        }
        basis.push(v);
    }
    basis
}

/// Per-prime ranks with a consensus verdict.
///
/// The rank over any prime field is at most the characteristic-zero rank, so
/// the maximum attained is the best lower bound; agreement across all primes
/// is the acceptance signal and disagreement is flagged, never averaged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPrimeRank {
    pub per_prime: Vec<(u64, usize)>,
    pub consensus: usize,
    pub agree: bool,
}

pub fn multi_prime_rank<F>(build: F, primes: &[u64]) -> Result<MultiPrimeRank, LinalgError>
where
    F: Fn(PrimeField) -> SparseMatrix,
{
    let mut per_prime = Vec::with_capacity(primes.len());
    for (i, &p) in primes.iter().enumerate() {
        if primes[..i].contains(&p) {
            return Err(LinalgError::Shape(format!("duplicate prime {p}")));
        }
        let field = PrimeField::new(p)?;
        per_prime.push((p, rank(&build(field), field)));
    }
    let consensus = per_prime.iter().map(|&(_, r)| r).max().unwrap_or(0);
    let agree = per_prime.iter().all(|&(_, r)| r == consensus);
    Ok(MultiPrimeRank { per_prime, consensus, agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeField {
        PrimeField::new(1000003).unwrap()
    }

    #[test]
    fn rank_identity() {
        for n in [1usize, 2, 7] {
            assert_eq!(rank(&SparseMatrix::identity(n), fp()), n);
        }
        assert_eq!(rank(&SparseMatrix::zero(0, 0), fp()), 0);
    }

    #[test]
    fn rank_proportional_rows() {
        // rows (1,2) and (2,4) over F_1000003
        let m = SparseMatrix::from_dense_rows(fp(), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(rank(&m, fp()), 1);
    }

    #[test]
    fn echelonize_zero_and_identity() {
        let e = echelonize(&SparseMatrix::zero(3, 4), fp());
        assert!(e.pivots.is_empty());
        let e = echelonize(&SparseMatrix::identity(3), fp());
        assert_eq!(e.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn echelonize_hand_example() {
        // rows (1,1,0),(0,1,1) -> pivots {0,1}, reduced rows (1,0,-1),(0,1,1)
        let f = fp();
        let m = SparseMatrix::from_dense_rows(f, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let e = echelonize(&m, f);
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.rows[0], vec![(0, 1), (2, f.neg(1))]);
        assert_eq!(e.rows[1], vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn nullspace_identity_is_empty() {
        assert!(nullspace(&SparseMatrix::identity(4), fp()).is_empty());
    }

    #[test]
    fn nullspace_of_1x2_ones() {
        let f = fp();
        let m = SparseMatrix::from_dense_rows(f, &[vec![1, 1]]);
        let ns = nullspace(&m, f);
        assert_eq!(ns.len(), 1);
        // (1, -1) up to scalar
        let v = &ns[0];
        assert_eq!(f.add(v[0], v[1]), 0);
        assert!(v[0] != 0);
    }

    #[test]
    fn multi_prime_flags_bad_prime() {
        let p = 1000003u64;
        let q = 2000003u64;
        // diag(1, p): rank 1 mod p, rank 2 mod q
        let out = multi_prime_rank(
            |f| {
                SparseMatrix::from_dense_rows(
                    f,
                    &[vec![1, 0], vec![0, (p % f.modulus()) as i64]],
                )
            },
            &[p, q],
        )
        .unwrap();
        assert_eq!(out.consensus, 2);
        assert!(!out.agree);
        assert_eq!(out.per_prime, vec![(p, 1), (q, 2)]);
    }

    #[test]
    fn multi_prime_agreement_on_identity() {
        let out =
            multi_prime_rank(|_| SparseMatrix::identity(5), &[1000003, 2000003]).unwrap();
        assert_eq!(out.consensus, 5);
        assert!(out.agree);
    }

    #[test]
    fn compose_matches_hand_product() {
        let f = fp();
        let a = SparseMatrix::from_dense_rows(f, &[vec![1, 2], vec![3, 4]]);
        let b = SparseMatrix::from_dense_rows(f, &[vec![0, 1], vec![1, 0]]);
        let c = a.compose(f, &b).unwrap();
        let expect = SparseMatrix::from_dense_rows(f, &[vec![2, 1], vec![4, 3]]);
        assert_eq!(c, expect);
    }
}
