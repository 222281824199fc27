use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::LinalgError;

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
///
/// This is the certification path: no modular reduction, answers are the
/// true rational rank. Dense and single-threaded, so it is gated behind a
/// size bound; callers pass the configured limit (default 2000).
pub fn bareiss_rank(rows: &[Vec<BigInt>], bound: usize) -> Result<usize, LinalgError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows.min(ncols) > bound {
        return Err(LinalgError::ExactBoundExceeded { rows: nrows, cols: ncols, bound });
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut prev = BigInt::from(1);
    let mut rank = 0usize;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        // Smallest-column-first pivoting: scan this column for any nonzero.
        let Some(pivot_row) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(bareiss_rank(&big(&[&[1, 2], &[2, 4]]), 100).unwrap(), 1);
        assert_eq!(bareiss_rank(&big(&[&[1, 0], &[0, 1]]), 100).unwrap(), 2);
        assert_eq!(bareiss_rank(&big(&[&[0, 0], &[0, 0]]), 100).unwrap(), 0);
        // A 3x3 with one dependency.
        assert_eq!(
            bareiss_rank(&big(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]), 100).unwrap(),
            2
        );
    }

    #[test]
    fn refuses_oversized_input() {
        let m = big(&[&[1, 2], &[3, 4]]);
        assert!(matches!(
            bareiss_rank(&m, 1),
            Err(LinalgError::ExactBoundExceeded { .. })
        ));
    }
}
