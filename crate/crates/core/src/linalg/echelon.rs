use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use super::PrimeField;

const NO_PIVOT: u32 = u32::MAX;

/// Outcome of feeding a row into a [`RowEchelon`].
pub enum PushOutcome {
    /// The row was independent; it was inserted with this pivot column.
    Inserted(u32),
    /// The row reduced to zero. Carries the residual augmentation, i.e. the
    /// coefficients expressing the zero combination (empty when the echelon
    /// has no augmentation).
    Vanished(Vec<(u32, u64)>),
}

/// Scratch space for row reduction against an echelon. One per thread.
pub struct Workspace {
    val: Vec<u64>,
    mark: Vec<u32>,
    aug_val: Vec<u64>,
    aug_mark: Vec<u32>,
    aug_touched: Vec<u32>,
    heap: BinaryHeap<Reverse<u32>>,
    epoch: u32,
}

impl Workspace {
    pub fn new(ncols: usize, aug_width: usize) -> Self {
        Workspace {
            val: vec![0; ncols],
            mark: vec![0; ncols],
            aug_val: vec![0; aug_width],
            aug_mark: vec![0; aug_width],
            aug_touched: Vec::new(),
            heap: BinaryHeap::new(),
            epoch: 0,
        }
    }
}

/// An incrementally built row-echelon basis over a prime field.
///
/// Rows are stored sparse, sorted by column, with leading coefficient 1 at
/// the pivot column; pivot rows are never modified after insertion. Feeding
/// the rows of a matrix in any order yields the same rank and the same pivot
/// column set (the greedy smallest-column pivot set of the row space).
///
/// An optional augmentation of fixed width travels with every row through
/// the same eliminations; rows that vanish hand back their residual
/// augmentation, which is how kernels are extracted at scale.
pub struct RowEchelon {
    field: PrimeField,
    ncols: usize,
    aug_width: usize,
    pivot_of_col: Vec<u32>,
    rows: Vec<Vec<(u32, u32)>>,
    augs: Vec<Vec<(u32, u32)>>,
    ws: Workspace,
}

impl RowEchelon {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        Self::with_augmentation(field, ncols, 0)
    }

    pub fn with_augmentation(field: PrimeField, ncols: usize, aug_width: usize) -> Self {
        RowEchelon {
            field,
            ncols,
            aug_width,
            pivot_of_col: vec![NO_PIVOT; ncols],
            rows: Vec::new(),
            augs: Vec::new(),
            ws: Workspace::new(ncols, aug_width),
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_of_col[col as usize] != NO_PIVOT
    }

    /// Pivot columns in increasing order.
    pub fn pivot_cols(&self) -> Vec<u32> {
        (0..self.ncols as u32).filter(|&c| self.is_pivot(c)).collect()
    }

    /// Non-pivot columns in increasing order.
    pub fn nonpivot_cols(&self) -> Vec<u32> {
        (0..self.ncols as u32).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// The stored row with the given pivot column, if any.
    pub fn row_for_pivot(&self, col: u32) -> Option<&[(u32, u32)]> {
        let idx = self.pivot_of_col[col as usize];
        if idx == NO_PIVOT {
            None
        } else {
            Some(&self.rows[idx as usize])
        }
    }

    /// Total number of stored nonzero entries, for telemetry.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// The stored rows, in insertion order.
    pub fn iter_rows(&self) -> impl Iterator<Item = super::SparseVec> + '_ {
        self.rows.iter().map(|r| r.iter().map(|&(c, v)| (c, v as u64)).collect())
    }

    pub fn push_row(&mut self, row: &[(u32, u64)]) -> PushOutcome {
        self.push_row_aug(row, &[])
    }

    /// Feed one row (with augmentation) through the eliminations.
    pub fn push_row_aug(&mut self, row: &[(u32, u64)], aug: &[(u32, u64)]) -> PushOutcome {
        let f = self.field;
        let ws = &mut self.ws;
        scatter(ws, f, row, aug);

        let mut last = u32::MAX;
        while let Some(Reverse(c)) = ws.heap.pop() {
            if c == last {
                continue;
            }
            last = c;
            let v = ws.val[c as usize] % f.modulus();
            if v == 0 {
                continue;
            }
            let idx = self.pivot_of_col[c as usize];
            if idx != NO_PIVOT {
                axpy(ws, f, v, &self.rows[idx as usize], &self.augs[idx as usize]);
                continue;
            }
            // New pivot: gather the surviving tail and insert.
            let mut main = Vec::with_capacity(ws.heap.len() + 1);
            main.push((c, v));
            let mut seen = c;
            while let Some(Reverse(cc)) = ws.heap.pop() {
                if cc == seen {
                    continue;
                }
                seen = cc;
                let vv = ws.val[cc as usize] % f.modulus();
                if vv != 0 {
                    main.push((cc, vv));
                }
            }
            let lead_inv = f.inv(v).expect("nonzero pivot");
            let main: Vec<(u32, u32)> = main
                .into_iter()
                .map(|(cc, vv)| (cc, f.mul(vv, lead_inv) as u32))
                .collect();
            let aug_row = gather_aug(ws, f, Some(lead_inv));
            self.pivot_of_col[c as usize] = self.rows.len() as u32;
            self.rows.push(main);
            self.augs.push(aug_row);
            return PushOutcome::Inserted(c);
        }
        PushOutcome::Vanished(
            gather_aug(ws, f, None)
                .into_iter()
                .map(|(c, v)| (c, v as u64))
                .collect(),
        )
    }

    /// Fully reduce a vector against the echelon without inserting it:
    /// every entry at a pivot column is eliminated, entries at non-pivot
    /// columns survive. Members of the row space reduce to the empty vector.
    pub fn reduce_vector(&self, ws: &mut Workspace, row: &[(u32, u64)]) -> Vec<(u32, u64)> {
        let f = self.field;
        scatter(ws, f, row, &[]);
        let mut kept = Vec::new();
        let mut last = u32::MAX;
        while let Some(Reverse(c)) = ws.heap.pop() {
            if c == last {
                continue;
            }
            last = c;
            let v = ws.val[c as usize] % f.modulus();
            if v == 0 {
                continue;
            }
            let idx = self.pivot_of_col[c as usize];
            if idx != NO_PIVOT {
                axpy(ws, f, v, &self.rows[idx as usize], &self.augs[idx as usize]);
            } else {
                kept.push((c, v));
            }
        }
        kept
    }

    /// A fresh workspace sized for this echelon.
    pub fn workspace(&self) -> Workspace {
        Workspace::new(self.ncols, self.aug_width)
    }

    /// Reduce using the internal workspace (single-threaded convenience).
    pub fn reduce_vector_mut(&mut self, row: &[(u32, u64)]) -> Vec<(u32, u64)> {
        let mut ws = core::mem::replace(&mut self.ws, Workspace::new(0, 0));
        let out = self.reduce_vector(&mut ws, row);
        self.ws = ws;
        out
    }

    /// Back-substitute into reduced rows: pivot columns are zero in every
    /// other row. Returns `(pivots, rows)` sorted by pivot column.
    pub fn into_reduced_rows(self) -> (Vec<u32>, Vec<Vec<(u32, u64)>>) {
        let f = self.field;
        let mut order: Vec<u32> = self.pivot_cols();
        order.reverse();
        // Processed in decreasing pivot order every elimination only needs
        // rows that are already reduced.
        let mut reduced: Vec<Vec<(u32, u64)>> = Vec::with_capacity(order.len());
        let mut slot_of_col = vec![NO_PIVOT; self.ncols];
        for &c in &order {
            let src = &self.rows[self.pivot_of_col[c as usize] as usize];
            let mut acc: Vec<(u32, u64)> = src.iter().map(|&(cc, vv)| (cc, vv as u64)).collect();
            // Eliminate tail entries sitting at pivot columns.
            loop {
                let target = acc
                    .iter()
                    .find(|&&(cc, _)| cc != c && slot_of_col[cc as usize] != NO_PIVOT)
                    .copied();
                let Some((cc, vv)) = target else { break };
                let other = &reduced[slot_of_col[cc as usize] as usize];
                acc = sub_scaled(f, &acc, vv, other);
            }
            slot_of_col[c as usize] = reduced.len() as u32;
            reduced.push(acc);
        }
        order.reverse();
        let rows = order
            .iter()
            .map(|&c| core::mem::take(&mut reduced[slot_of_col[c as usize] as usize]))
            .collect();
        (order, rows)
    }
}

fn scatter(ws: &mut Workspace, f: PrimeField, row: &[(u32, u64)], aug: &[(u32, u64)]) {
    ws.epoch = ws.epoch.wrapping_add(1);
    if ws.epoch == 0 {
        ws.mark.iter_mut().for_each(|m| *m = 0);
        ws.aug_mark.iter_mut().for_each(|m| *m = 0);
        ws.epoch = 1;
    }
    ws.heap.clear();
    ws.aug_touched.clear();
    for &(c, v) in row {
        let v = v % f.modulus();
        if v == 0 {
            continue;
        }
        debug_assert!(ws.mark[c as usize] != ws.epoch, "duplicate column in row");
        ws.val[c as usize] = v;
        ws.mark[c as usize] = ws.epoch;
        ws.heap.push(Reverse(c));
    }
    for &(c, v) in aug {
        let v = v % f.modulus();
        if v == 0 {
            continue;
        }
        ws.aug_val[c as usize] = v;
        ws.aug_mark[c as usize] = ws.epoch;
        ws.aug_touched.push(c);
    }
}

/// `workspace -= factor * pivot_row` (main and augmentation parts).
fn axpy(ws: &mut Workspace, f: PrimeField, factor: u64, row: &[(u32, u32)], aug: &[(u32, u32)]) {
    for &(cc, vv) in row {
        let i = cc as usize;
        if ws.mark[i] != ws.epoch {
            ws.mark[i] = ws.epoch;
            ws.val[i] = 0;
            ws.heap.push(Reverse(cc));
        }
        ws.val[i] = f.mul_sub(ws.val[i], factor, vv as u64);
    }
    for &(cc, vv) in aug {
        let i = cc as usize;
        if ws.aug_mark[i] != ws.epoch {
            ws.aug_mark[i] = ws.epoch;
            ws.aug_val[i] = 0;
            ws.aug_touched.push(cc);
        }
        ws.aug_val[i] = f.mul_sub(ws.aug_val[i], factor, vv as u64);
    }
}

fn gather_aug(ws: &mut Workspace, f: PrimeField, scale: Option<u64>) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = ws
        .aug_touched
        .iter()
        .filter_map(|&c| {
            let v = ws.aug_val[c as usize] % f.modulus();
            if v == 0 {
                return None;
            }
            let v = match scale {
                Some(s) => f.mul(v, s),
                None => v,
            };
            Some((c, v as u32))
        })
        .collect();
    out.sort_unstable_by_key(|&(c, _)| c);
    out
}

fn sub_scaled(
    f: PrimeField,
    a: &[(u32, u64)],
    factor: u64,
    b: &[(u32, u64)],
) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                let v = f.mul_sub(va, factor, vb);
                if v != 0 {
                    out.push((ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                out.push((ca, va));
                i += 1;
            }
            (Some(_), Some(&(cb, vb))) => {
                let v = f.neg(f.mul(factor, vb));
                if v != 0 {
                    out.push((cb, v));
                }
                j += 1;
            }
            (Some(&(ca, va)), None) => {
                out.push((ca, va));
                i += 1;
            }
            (None, Some(&(cb, vb))) => {
                let v = f.neg(f.mul(factor, vb));
                if v != 0 {
                    out.push((cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeField {
        PrimeField::new(1000003).unwrap()
    }

    #[test]
    fn builds_rank_and_pivots() {
        let f = fp();
        let mut e = RowEchelon::new(f, 3);
        assert!(matches!(e.push_row(&[(0, 1), (1, 1)]), PushOutcome::Inserted(0)));
        assert!(matches!(e.push_row(&[(1, 1), (2, 1)]), PushOutcome::Inserted(1)));
        // (1,0,-1) = row0 - row1 is dependent.
        assert!(matches!(
            e.push_row(&[(0, 1), (2, f.neg(1))]),
            PushOutcome::Vanished(_)
        ));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivot_cols(), vec![0, 1]);
        assert_eq!(e.nonpivot_cols(), vec![2]);
    }

    #[test]
    fn reduce_kills_row_space_members() {
        let f = fp();
        let mut e = RowEchelon::new(f, 4);
        e.push_row(&[(0, 2), (2, 4)]);
        e.push_row(&[(1, 3), (3, 5)]);
        // row0/2 + row1/3 = (1, 1, 2, 5/3)
        let member = [(0, 1), (1, 1), (2, 2), (3, f.mul(5, f.inv(3).unwrap()))];
        let red = e.reduce_vector_mut(&member);
        assert!(red.is_empty(), "got {red:?}");
        let outside = [(0, 1), (1, 1)];
        let red = e.reduce_vector_mut(&outside);
        assert!(!red.is_empty());
        assert!(red.iter().all(|&(c, _)| c == 2 || c == 3));
    }

    #[test]
    fn augmentation_tracks_kernel_combination() {
        let f = fp();
        // Rows of the 2x3 matrix [[1,2,3],[2,4,6]] (transposed insertion):
        // feeding both rows with identity augmentation, the second vanishes
        // and its residual expresses row1 = 2*row0.
        let mut e = RowEchelon::with_augmentation(f, 3, 2);
        match e.push_row_aug(&[(0, 1), (1, 2), (2, 3)], &[(0, 1)]) {
            PushOutcome::Inserted(0) => {}
            _ => panic!("expected insertion at column 0"),
        }
        match e.push_row_aug(&[(0, 2), (1, 4), (2, 6)], &[(1, 1)]) {
            PushOutcome::Vanished(aug) => {
                // residual: -2 * e0 + 1 * e1 (up to the eliminations applied)
                assert_eq!(aug.len(), 2);
                let m: alloc::collections::BTreeMap<u32, u64> = aug.into_iter().collect();
                assert_eq!(m[&1], 1);
                assert_eq!(m[&0], f.neg(2));
            }
            _ => panic!("expected vanish"),
        }
    }

    #[test]
    fn reduced_rows_have_clean_pivot_columns() {
        let f = fp();
        let mut e = RowEchelon::new(f, 3);
        e.push_row(&[(0, 1), (1, 1)]);
        e.push_row(&[(1, 1), (2, 1)]);
        let (pivots, rows) = e.into_reduced_rows();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rows[0], vec![(0, 1), (2, f.neg(1))]);
        assert_eq!(rows[1], vec![(1, 1), (2, 1)]);
    }
}
