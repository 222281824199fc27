//! The cohomology-computing complexes: chains of quotient pieces with block
//! differentials, rank bookkeeping, and the structural assertions (`D^2 = 0`,
//! well-definedness, expected exactness positions).
//!
//! Three builders are provided. The first is a Koszul complex on
//! `S/(P_1, ..., P_c, q)` whose arrows are the `alpha_star(P_i)`; positions
//! `k = 0..c` carry cohomological degree `i = N - c - k`. The other two work
//! with quotients by powers of the pairing polynomial only: a three-term
//! complex for hypersurfaces and a five-position complex for codimension 2,
//! with degree `i = N - pos`.
//!
//! Every complex exists in two computational forms with identical answers:
//! an explicit instance whose differentials are block matrices in quotient
//! coordinates (supports `D^2 = 0`, well-definedness checks, and kernel
//! extraction), and a streamed rank pass that never materializes quotient
//! coordinates (the image of a quotient map is spanned by the images of the
//! ambient monomials together with the target ideal, so each differential
//! rank is one echelon extended past the target-ideal rows). The streamed
//! form is what makes the large problems fit in time and memory.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{LinalgError, PrimeField, PushOutcome, RowEchelon, SparseMatrix, SparseVec};
use crate::operators::{OperatorError, OperatorSpec, Scalar};
use crate::polyspace::{
    piece_dimension, BiDegree, IntPoly, MonomialBasis, PolyError, SparseBiPoly,
};
use crate::quotient::{poly_to_vec, quotient_piece, IdealSpec, QuotientError, QuotientPiece};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    /// The query violates a validity precondition of the chosen method.
    InvalidQuery(String),
    /// The modulus divides a defining degree or a needed factorial.
    PrimeTooSmall(String),
    /// A differential block admits no bidegree-compatible target.
    WiringBug(String),
    /// `D_{k+1} . D_k != 0`.
    D2NotZero { differential: usize },
    /// A cohomology dimension came out negative.
    NegativeDimension { position: usize },
    /// Alternating sums of term dimensions and cohomology disagree.
    EulerMismatch,
    Operator(OperatorError),
    Quotient(QuotientError),
    Poly(PolyError),
    Linalg(LinalgError),
}

impl From<OperatorError> for ComplexError {
    fn from(e: OperatorError) -> Self {
        ComplexError::Operator(e)
    }
}
impl From<QuotientError> for ComplexError {
    fn from(e: QuotientError) -> Self {
        ComplexError::Quotient(e)
    }
}
impl From<PolyError> for ComplexError {
    fn from(e: PolyError) -> Self {
        ComplexError::Poly(e)
    }
}
impl From<LinalgError> for ComplexError {
    fn from(e: LinalgError) -> Self {
        ComplexError::Linalg(e)
    }
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexError::InvalidQuery(msg) => write!(f, "invalid query: {msg}"),
            ComplexError::PrimeTooSmall(msg) => write!(f, "prime incompatible with problem: {msg}"),
            ComplexError::WiringBug(msg) => write!(f, "complex wiring bug: {msg}"),
            ComplexError::D2NotZero { differential } => {
                write!(f, "D^2 != 0 at differential {differential}")
            }
            ComplexError::NegativeDimension { position } => {
                write!(f, "negative cohomology dimension at position {position}")
            }
            ComplexError::EulerMismatch => write!(f, "Euler characteristic mismatch"),
            ComplexError::Operator(e) => write!(f, "{e}"),
            ComplexError::Quotient(e) => write!(f, "{e}"),
            ComplexError::Poly(e) => write!(f, "{e}"),
            ComplexError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ComplexError {}

/// A smooth complete intersection `{P_1 = ... = P_c = 0}` in `P^N`.
/// Smoothness is a documented precondition of the callers, not verified.
#[derive(Debug, Clone)]
pub struct Problem {
    ambient: usize,
    polys: Vec<IntPoly>,
    degrees: Vec<i64>,
}

impl Problem {
    pub fn new(ambient: usize, polys: Vec<IntPoly>) -> Result<Self, ComplexError> {
        if polys.is_empty() {
            return Err(ComplexError::InvalidQuery("at least one defining polynomial".into()));
        }
        let mut degrees = Vec::with_capacity(polys.len());
        for p in &polys {
            if p.is_zero() {
                return Err(ComplexError::InvalidQuery("defining polynomial is zero".into()));
            }
            if p.ambient() != ambient {
                return Err(ComplexError::InvalidQuery(format!(
                    "polynomial lives in P^{}, problem in P^{}",
                    p.ambient(),
                    ambient
                )));
            }
            let b = p.bidegree();
            if b.m != 0 || b.n < 1 {
                return Err(ComplexError::InvalidQuery(format!(
                    "defining polynomials must be X-homogeneous of degree >= 1, got {b}"
                )));
            }
            degrees.push(b.n);
        }
        Ok(Problem { ambient, polys, degrees })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn codim(&self) -> usize {
        self.polys.len()
    }

    /// Dimension of the complete intersection, `N - c`.
    pub fn dim(&self) -> i64 {
        self.ambient as i64 - self.codim() as i64
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.polys
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn total_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// The complexes divide by the defining degrees, by 2, and by the
    /// factorials of Y-exponents up to the symmetric power in play.
    pub fn check_prime(&self, field: PrimeField, max_power: i64) -> Result<(), ComplexError> {
        let p = field.modulus();
        for &d in &self.degrees {
            if (d as u64).is_multiple_of(p) {
                return Err(ComplexError::PrimeTooSmall(format!("{p} divides degree {d}")));
            }
        }
        if max_power >= 0 && (max_power as u64) >= p {
            return Err(ComplexError::PrimeTooSmall(format!(
                "{p} <= symmetric power {max_power}, factorials degenerate"
            )));
        }
        Ok(())
    }
}

/// One direct summand of a complex term: a quotient piece described by its
/// ideal and bidegree.
#[derive(Clone)]
pub struct SummandSpec {
    pub ideal: Arc<IdealSpec>,
    pub bidegree: BiDegree,
    /// Short label for reports, e.g. "S/(q^2)".
    pub label: String,
}

/// One block of a differential: apply `scalar * op` from source summand
/// `src` into target summand `dst`.
#[derive(Clone)]
pub struct BlockSpec {
    pub src: usize,
    pub dst: usize,
    pub scalar: Scalar,
    pub op: OperatorSpec,
}

/// The field-free blueprint of a complex at one graded part.
pub struct ComplexSpec {
    pub ambient: usize,
    pub query: (i64, i64),
    pub method: &'static str,
    pub positions: Vec<Vec<SummandSpec>>,
    /// `blocks[k]` describes `D_k : C_k -> C_{k+1}`.
    pub blocks: Vec<Vec<BlockSpec>>,
    /// Cohomological degree carried by each position.
    pub degree_of_pos: Vec<i64>,
    pub flags: Vec<String>,
}

impl ComplexSpec {
    /// Structural bidegree check: every block must connect summands whose
    /// bidegrees differ exactly by the operator shift.
    fn validate(self) -> Result<Self, ComplexError> {
        for (k, blocks) in self.blocks.iter().enumerate() {
            for b in blocks {
                let src = &self.positions[k][b.src];
                let dst = &self.positions[k + 1][b.dst];
                let shift = b.op.shift()?;
                if src.bidegree.plus(shift) != dst.bidegree {
                    return Err(ComplexError::WiringBug(format!(
                        "D_{k} block {} -> {}: {} + {} != {}",
                        b.src, b.dst, src.bidegree, shift, dst.bidegree
                    )));
                }
            }
        }
        Ok(self)
    }

    pub fn ambient_dims(&self) -> Vec<u64> {
        self.positions
            .iter()
            .map(|pos| pos.iter().map(|s| piece_dimension(self.ambient, s.bidegree)).sum())
            .collect()
    }
}

/// The Koszul complex on `S/(P_1, ..., P_c, q)` with arrows
/// `alpha_star(P_i)` and the sign rule `(-1)^{#{i in T : i < j}}` on the
/// block `T -> T + {j}`. Position `k` holds one summand per size-`k` subset
/// `T` at bidegree `(m - k, n - (N+1) + |d| + sum_{i in T}(d_i - 1))`, and
/// carries cohomological degree `i = N - c - k`.
pub fn spec_complex1(prob: &Problem, m: i64, n: i64) -> Result<ComplexSpec, ComplexError> {
    let c = prob.codim();
    if m < c as i64 {
        return Err(ComplexError::InvalidQuery(format!("complex1 needs m >= c, got m={m}, c={c}")));
    }
    if n < 2 {
        return Err(ComplexError::InvalidQuery(format!("complex1 needs n >= 2, got n={n}")));
    }
    let mut flags = Vec::new();
    if m == c as i64 && prob.degrees().contains(&1) {
        flags.push("boundary case m = c with a linear defining polynomial".to_string());
    }
    let ambient = prob.ambient();
    let base = n - (ambient as i64 + 1) + prob.total_degree();
    let ideal = Arc::new(IdealSpec::with_pairing(ambient, prob.polys())?);
    let label = String::from("S/(P,q)");

    let mut subsets_by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new(); c + 1];
    for mask in 0u32..(1 << c) {
        let subset: Vec<usize> = (0..c).filter(|i| mask >> i & 1 == 1).collect();
        subsets_by_size[subset.len()].push(subset);
    }
    for subsets in &mut subsets_by_size {
        subsets.sort();
    }

    let mut positions: Vec<Vec<SummandSpec>> = Vec::with_capacity(c + 1);
    for (k, subsets) in subsets_by_size.iter().enumerate() {
        let mut summands = Vec::with_capacity(subsets.len());
        for subset in subsets {
            let extra: i64 = subset.iter().map(|&i| prob.degrees()[i] - 1).sum();
            summands.push(SummandSpec {
                ideal: Arc::clone(&ideal),
                bidegree: BiDegree::new(m - k as i64, base + extra),
                label: label.clone(),
            });
        }
        positions.push(summands);
    }

    let mut blocks: Vec<Vec<BlockSpec>> = Vec::with_capacity(c);
    for k in 0..c {
        let mut layer = Vec::new();
        for (src_idx, subset) in subsets_by_size[k].iter().enumerate() {
            for j in 0..c {
                if subset.contains(&j) {
                    continue;
                }
                let mut bigger = subset.clone();
                bigger.push(j);
                bigger.sort();
                let dst_idx = subsets_by_size[k + 1]
                    .iter()
                    .position(|s| *s == bigger)
                    .expect("subset enumeration is complete");
                let sign = if subset.iter().filter(|&&i| i < j).count() % 2 == 0 { 1 } else { -1 };
                layer.push(BlockSpec {
                    src: src_idx,
                    dst: dst_idx,
                    scalar: Scalar::new(sign, 1),
                    op: OperatorSpec::AlphaStar(prob.polys()[j].clone()),
                });
            }
        }
        blocks.push(layer);
    }

    let degree_of_pos = (0..=c).map(|k| prob.dim() - k as i64).collect();
    ComplexSpec {
        ambient,
        query: (m, n),
        method: "complex1",
        positions,
        blocks,
        degree_of_pos,
        flags,
    }
    .validate()
}

/// The hypersurface three-term complex through `S/(q)` and `S/(q^2)`:
/// `beta_star(P)` then `alpha_star(P)`, degree `i = N - pos`.
pub fn spec_complex2_hyp(prob: &Problem, m: i64, n: i64) -> Result<ComplexSpec, ComplexError> {
    if prob.codim() != 1 {
        return Err(ComplexError::InvalidQuery(format!(
            "complex2 (hypersurface form) needs c = 1, got c = {}",
            prob.codim()
        )));
    }
    if m < 1 {
        return Err(ComplexError::InvalidQuery(format!("complex2 needs m >= 1, got m={m}")));
    }
    if n < 2 {
        return Err(ComplexError::InvalidQuery(format!("complex2 needs n >= 2, got n={n}")));
    }
    let ambient = prob.ambient();
    let d = prob.degrees()[0];
    let base = n - (ambient as i64 + 1);
    let p = prob.polys()[0].clone();
    let positions = vec![
        vec![q_summand(ambient, 1, BiDegree::new(m, base))],
        vec![q_summand(ambient, 2, BiDegree::new(m, base + d))],
        vec![q_summand(ambient, 1, BiDegree::new(m - 1, base + 2 * d - 1))],
    ];
    let blocks = vec![
        vec![BlockSpec { src: 0, dst: 0, scalar: Scalar::ONE, op: OperatorSpec::BetaStar(p.clone()) }],
        vec![BlockSpec { src: 0, dst: 0, scalar: Scalar::ONE, op: OperatorSpec::AlphaStar(p) }],
    ];
    let degree_of_pos = (0..3).map(|k| ambient as i64 - k).collect();
    ComplexSpec {
        ambient,
        query: (m, n),
        method: "complex2",
        positions,
        blocks,
        degree_of_pos,
        flags: Vec::new(),
    }
    .validate()
}

fn q_summand(ambient: usize, k: u32, b: BiDegree) -> SummandSpec {
    SummandSpec {
        ideal: Arc::new(IdealSpec::pairing_power(ambient, k)),
        bidegree: b,
        label: if k == 1 { "S/(q)".to_string() } else { format!("S/(q^{k})") },
    }
}

/// The codimension-2 five-position complex. Summand bidegrees follow the
/// shift table with X-shifts `+|d|` on the `S/(q^3)` summand and
/// `2|d| - d_1 - 1` on the second position-3 summand; every operator
/// component lands in the unique bidegree-compatible target summand, which
/// also fixes the argument pairing of the last arrow. The sign of the
/// fourth-summand component of the map into the first position-3 summand
/// is `+`; `D^2 = 0` forces it.
pub fn spec_complex2_ci2(prob: &Problem, m: i64, n: i64) -> Result<ComplexSpec, ComplexError> {
    if prob.codim() != 2 {
        return Err(ComplexError::InvalidQuery(format!(
            "complex2 (codimension-2 form) needs c = 2, got c = {}",
            prob.codim()
        )));
    }
    if m < 2 {
        return Err(ComplexError::InvalidQuery(format!("complex2/ci2 needs m >= 2, got m={m}")));
    }
    if n < 2 {
        return Err(ComplexError::InvalidQuery(format!("complex2 needs n >= 2, got n={n}")));
    }
    let ambient = prob.ambient();
    let (d1, d2) = (prob.degrees()[0], prob.degrees()[1]);
    let dd = d1 + d2;
    let base = n - (ambient as i64 + 1);
    let p1 = prob.polys()[0].clone();
    let p2 = prob.polys()[1].clone();

    let positions = vec![
        vec![q_summand(ambient, 1, BiDegree::new(m, base))],
        vec![
            q_summand(ambient, 2, BiDegree::new(m, base + d1)),
            q_summand(ambient, 2, BiDegree::new(m, base + d2)),
        ],
        vec![
            q_summand(ambient, 1, BiDegree::new(m - 1, base + 2 * d1 - 1)),
            q_summand(ambient, 1, BiDegree::new(m - 1, base + 2 * d2 - 1)),
            q_summand(ambient, 3, BiDegree::new(m, base + dd)),
            q_summand(ambient, 1, BiDegree::new(m - 1, base + dd - 1)),
        ],
        vec![
            q_summand(ambient, 2, BiDegree::new(m - 1, base + 2 * dd - d2 - 1)),
            q_summand(ambient, 2, BiDegree::new(m - 1, base + 2 * dd - d1 - 1)),
        ],
        vec![q_summand(ambient, 1, BiDegree::new(m - 2, base + 2 * dd - 2))],
    ];

    let half = Scalar::new(1, 2);
    let neg_half = Scalar::new(-1, 2);
    let one = Scalar::ONE;
    let neg = Scalar::new(-1, 1);
    let blocks = vec![
        // (beta_star(P1), beta_star(P2))
        vec![
            BlockSpec { src: 0, dst: 0, scalar: one, op: OperatorSpec::BetaStar(p1.clone()) },
            BlockSpec { src: 0, dst: 1, scalar: one, op: OperatorSpec::BetaStar(p2.clone()) },
        ],
        // (A, B) -> (alpha_star(P1)(A),
        //            alpha_star(P2)(B),
        //            1/2 (beta_star(P2)(A) + P2 A - beta_star(P1)(B) - P1 B),
        //            -1/2 (alpha_star(P2)(A) + alpha_star(P1)(B)))
        vec![
            BlockSpec { src: 0, dst: 0, scalar: one, op: OperatorSpec::AlphaStar(p1.clone()) },
            BlockSpec { src: 1, dst: 1, scalar: one, op: OperatorSpec::AlphaStar(p2.clone()) },
            BlockSpec {
                src: 0,
                dst: 2,
                scalar: one,
                op: OperatorSpec::ScaledSum(vec![
                    (half, OperatorSpec::BetaStar(p2.clone())),
                    (half, OperatorSpec::Mul(p2.clone())),
                ]),
            },
            BlockSpec {
                src: 1,
                dst: 2,
                scalar: one,
                op: OperatorSpec::ScaledSum(vec![
                    (neg_half, OperatorSpec::BetaStar(p1.clone())),
                    (neg_half, OperatorSpec::Mul(p1.clone())),
                ]),
            },
            BlockSpec { src: 0, dst: 3, scalar: neg_half, op: OperatorSpec::AlphaStar(p2.clone()) },
            BlockSpec { src: 1, dst: 3, scalar: neg_half, op: OperatorSpec::AlphaStar(p1.clone()) },
        ],
        // (A, B, C, D) -> (beta_star(P2)(A) - alpha_star(P1)(C) + beta_star(P1)(D),
        //                  beta_star(P1)(B) + alpha_star(P2)(C) + beta_star(P2)(D))
        vec![
            BlockSpec { src: 0, dst: 0, scalar: one, op: OperatorSpec::BetaStar(p2.clone()) },
            BlockSpec { src: 2, dst: 0, scalar: neg, op: OperatorSpec::AlphaStar(p1.clone()) },
            BlockSpec { src: 3, dst: 0, scalar: one, op: OperatorSpec::BetaStar(p1.clone()) },
            BlockSpec { src: 1, dst: 1, scalar: one, op: OperatorSpec::BetaStar(p1.clone()) },
            BlockSpec { src: 2, dst: 1, scalar: one, op: OperatorSpec::AlphaStar(p2.clone()) },
            BlockSpec { src: 3, dst: 1, scalar: one, op: OperatorSpec::BetaStar(p2.clone()) },
        ],
        // (E1, E2) -> alpha_star(P2)(E1) + alpha_star(P1)(E2)
        vec![
            BlockSpec { src: 0, dst: 0, scalar: one, op: OperatorSpec::AlphaStar(p2.clone()) },
            BlockSpec { src: 1, dst: 0, scalar: one, op: OperatorSpec::AlphaStar(p1.clone()) },
        ],
    ];
    let degree_of_pos = (0..5).map(|k| ambient as i64 - k).collect();
    ComplexSpec {
        ambient,
        query: (m, n),
        method: "complex2",
        positions,
        blocks,
        degree_of_pos,
        flags: Vec::new(),
    }
    .validate()
}

/// One instantiated position: quotient pieces with running offsets.
pub struct PositionData {
    pub summands: Vec<QuotientPiece>,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

impl PositionData {
    fn new(summands: Vec<QuotientPiece>) -> Self {
        let mut offsets = Vec::with_capacity(summands.len());
        let mut dim = 0;
        for s in &summands {
            offsets.push(dim);
            dim += s.dimension();
        }
        PositionData { summands, offsets, dim }
    }
}

/// A complex instantiated over a field, with explicit quotient-coordinate
/// block differentials.
pub struct ComplexInstance {
    pub field: PrimeField,
    pub query: (i64, i64),
    pub method: &'static str,
    pub positions: Vec<PositionData>,
    pub differentials: Vec<SparseMatrix>,
    pub degree_of_pos: Vec<i64>,
    pub flags: Vec<String>,
    blocks: Vec<Vec<BlockSpec>>,
}

/// Build explicit quotient pieces and block differential matrices.
pub fn instantiate(spec: &ComplexSpec, field: PrimeField) -> Result<ComplexInstance, ComplexError> {
    let positions: Vec<PositionData> = spec
        .positions
        .iter()
        .map(|summands| {
            PositionData::new(
                summands
                    .iter()
                    .map(|s| quotient_piece(&s.ideal, spec.ambient, s.bidegree, field))
                    .collect(),
            )
        })
        .collect();

    let mut differentials = Vec::with_capacity(spec.blocks.len());
    for (k, blocks) in spec.blocks.iter().enumerate() {
        let src_pos = &positions[k];
        let dst_pos = &positions[k + 1];
        let mut cols: Vec<SparseVec> = vec![Vec::new(); src_pos.dim];
        let mut workspaces: Vec<_> = dst_pos.summands.iter().map(|s| s.workspace()).collect();
        for block in blocks {
            let src = &src_pos.summands[block.src];
            let dst = &dst_pos.summands[block.dst];
            let scale = field.reduce_ratio(block.scalar.num, block.scalar.den).map_err(|_| {
                ComplexError::PrimeTooSmall(format!(
                    "scalar {}/{} degenerates",
                    block.scalar.num, block.scalar.den
                ))
            })?;
            if scale == 0 {
                continue;
            }
            let dst_basis = MonomialBasis::new(spec.ambient, dst.bidegree());
            let ws = &mut workspaces[block.dst];
            for j in 0..src.dimension() {
                let mono = SparseBiPoly::monomial(field, spec.ambient, src.basis_monomial(j), 1);
                let image = block.op.apply(&mono)?.scale(&scale);
                let ambient_vec = poly_to_vec(&image, &dst_basis)?;
                let reduced = dst.reduce_vector(ws, &ambient_vec);
                let col = &mut cols[src_pos.offsets[block.src] + j];
                let offset = dst_pos.offsets[block.dst] as u32;
                for (r, v) in reduced {
                    col.push((offset + r, v));
                }
            }
        }
        // merge rows contributed by different blocks into one sorted column
        for col in &mut cols {
            col.sort_unstable_by_key(|&(r, _)| r);
            let mut merged: SparseVec = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 = field.add(last.1, v),
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|&(_, v)| v != 0);
            *col = merged;
        }
        differentials.push(SparseMatrix::from_columns(dst_pos.dim, cols));
    }

    Ok(ComplexInstance {
        field,
        query: spec.query,
        method: spec.method,
        positions,
        differentials,
        degree_of_pos: spec.degree_of_pos.clone(),
        flags: spec.flags.clone(),
        blocks: spec.blocks.clone(),
    })
}

impl ComplexInstance {
    /// Assert `D_{k+1} . D_k = 0` by exact matrix products.
    pub fn verify_d_squared(&self) -> Result<(), ComplexError> {
        for k in 0..self.differentials.len().saturating_sub(1) {
            let prod = self.differentials[k + 1].compose(self.field, &self.differentials[k])?;
            if !prod.is_zero() {
                return Err(ComplexError::D2NotZero { differential: k });
            }
        }
        Ok(())
    }

    /// Assert that every block operator maps the source ideal piece into
    /// the target ideal piece.
    pub fn verify_well_definedness(&self) -> Result<(), ComplexError> {
        for (k, blocks) in self.blocks.iter().enumerate() {
            for b in blocks {
                crate::operators::well_definedness_check(
                    &b.op,
                    &self.positions[k].summands[b.src],
                    &self.positions[k + 1].summands[b.dst],
                )?;
            }
        }
        Ok(())
    }

    /// Cohomology dimensions from the explicit matrices.
    pub fn cohomology(&self) -> Result<PerPrimeReport, ComplexError> {
        let term_dims: Vec<u64> = self.positions.iter().map(|p| p.dim as u64).collect();
        let ranks: Vec<u64> = self
            .differentials
            .iter()
            .map(|d| crate::linalg::rank(d, self.field) as u64)
            .collect();
        assemble_report(&self.degree_of_pos, &term_dims, &ranks, &self.flags)
    }
}

/// Per-degree dimensions with the rank bookkeeping that produced them,
/// for one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerPrimeReport {
    pub h: BTreeMap<i64, u64>,
    pub term_dims: Vec<u64>,
    pub ranks: Vec<u64>,
    pub flags: Vec<String>,
}

fn assemble_report(
    degree_of_pos: &[i64],
    term_dims: &[u64],
    ranks: &[u64],
    flags: &[String],
) -> Result<PerPrimeReport, ComplexError> {
    let npos = term_dims.len();
    let mut h = BTreeMap::new();
    let mut euler_terms: i64 = 0;
    let mut euler_h: i64 = 0;
    for pos in 0..npos {
        let out = if pos < ranks.len() { ranks[pos] } else { 0 };
        let inc = if pos > 0 { ranks[pos - 1] } else { 0 };
        let dim = term_dims[pos];
        if out + inc > dim {
            return Err(ComplexError::NegativeDimension { position: pos });
        }
        let hv = dim - out - inc;
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        euler_terms += sign * dim as i64;
        euler_h += sign * hv as i64;
        h.insert(degree_of_pos[pos], hv);
    }
    if euler_terms != euler_h {
        return Err(ComplexError::EulerMismatch);
    }
    Ok(PerPrimeReport {
        h,
        term_dims: term_dims.to_vec(),
        ranks: ranks.to_vec(),
        flags: flags.to_vec(),
    })
}

/// Cohomology dimensions by streamed union ranks.
pub fn streamed_cohomology(
    spec: &ComplexSpec,
    field: PrimeField,
) -> Result<PerPrimeReport, ComplexError> {
    streamed_cohomology_observed(spec, field, &mut |_, _| {})
}

/// Streamed pass with a progress observer `(stage, detail)`.
pub fn streamed_cohomology_observed(
    spec: &ComplexSpec,
    field: PrimeField,
    observe: &mut dyn FnMut(&str, &str),
) -> Result<PerPrimeReport, ComplexError> {
    let npos = spec.positions.len();
    let ambient_dims: Vec<Vec<u64>> = spec
        .positions
        .iter()
        .map(|pos| pos.iter().map(|s| piece_dimension(spec.ambient, s.bidegree)).collect())
        .collect();
    let total_dims: Vec<u64> = ambient_dims.iter().map(|v| v.iter().sum()).collect();

    let mut ideal_ranks: Vec<u64> = vec![0; npos];
    let mut diff_ranks: Vec<u64> = Vec::with_capacity(npos.saturating_sub(1));

    // position 0 has no incoming differential; its ideal rank is standalone
    {
        let ech = position_ideal_echelon(spec, 0, &ambient_dims[0], field);
        ideal_ranks[0] = ech.rank() as u64;
        observe("ideal", &format!("pos 0 rank {}", ech.rank()));
    }

    for k in 0..npos.saturating_sub(1) {
        let mut ech = position_ideal_echelon(spec, k + 1, &ambient_dims[k + 1], field);
        let ideal_rank = ech.rank() as u64;
        ideal_ranks[k + 1] = ideal_rank;
        observe("ideal", &format!("pos {} rank {ideal_rank}", k + 1));

        push_image_rows(spec, k, &ambient_dims[k + 1], field, &mut ech, &mut |_, _| {})?;
        let union_rank = ech.rank() as u64;
        diff_ranks.push(union_rank - ideal_rank);
        observe(
            "differential",
            &format!("D_{k} rank {} (echelon nnz {})", union_rank - ideal_rank, ech.nnz()),
        );
    }

    let term_dims: Vec<u64> = (0..npos).map(|k| total_dims[k] - ideal_ranks[k]).collect();
    assemble_report(&spec.degree_of_pos, &term_dims, &diff_ranks, &spec.flags)
}

/// `scale * op(p)` over the integers, where `scale` clears every
/// denominator the operator divides by. Scaling whole columns leaves ranks
/// unchanged, which is all the exact path needs.
fn apply_int_cleared(op: &OperatorSpec, p: &IntPoly) -> Result<(IntPoly, i64), ComplexError> {
    use crate::polyspace::IntegerRing;
    use num_bigint::BigInt;
    let ambient = p.ambient();
    let target = p.bidegree().plus(op.shift()?);
    let zero = |b| IntPoly::zero(IntegerRing, ambient, b);
    Ok(match op {
        OperatorSpec::Mul(a) => (a.multiply(p)?, 1),
        OperatorSpec::AlphaStar(q) => {
            let d = q.bidegree().n;
            let mut out = zero(target);
            if !target.is_empty() {
                for i in 0..=ambient {
                    let partial = q.x_partial(i);
                    if partial.is_zero() {
                        continue;
                    }
                    out = out.add(&partial.multiply(&p.y_partial(i))?)?;
                }
            }
            (out, d)
        }
        OperatorSpec::BetaStar(q) => {
            let d = q.bidegree().n;
            let (astar, da) = apply_int_cleared(&OperatorSpec::AlphaStar(q.clone()), p)?;
            debug_assert_eq!(d, da);
            let pairing = IntPoly::pairing(IntegerRing, ambient);
            let first = q.multiply(p)?.scale(&BigInt::from(d));
            (first.sub(&pairing.multiply(&astar)?)?, d)
        }
        OperatorSpec::ScaledSum(parts) => {
            let mut cleared = Vec::with_capacity(parts.len());
            let mut denom = 1i64;
            for (s, inner) in parts {
                let (poly, mult) = apply_int_cleared(inner, p)?;
                let full_den = s.den * mult;
                denom = lcm(denom, full_den);
                cleared.push((s.num, full_den, poly));
            }
            let mut out = zero(target);
            for (num, full_den, poly) in cleared {
                let factor = BigInt::from(num) * BigInt::from(denom / full_den);
                out = out.add(&poly.scale(&factor))?;
            }
            (out, denom)
        }
        other => {
            return Err(ComplexError::InvalidQuery(format!(
                "operator {:?} has no denominator-cleared integer form",
                core::mem::discriminant(other)
            )))
        }
    })
}

fn lcm(a: i64, b: i64) -> i64 {
    let gcd = {
        let (mut x, mut y) = (a.abs(), b.abs());
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x.max(1)
    };
    a.abs() / gcd * b.abs()
}

/// Cohomology dimensions certified by fraction-free integer elimination:
/// the same union matrices as the streamed pass, eliminated exactly over
/// the rationals. Refused above the size bound.
pub fn exact_cohomology(spec: &ComplexSpec, bound: usize) -> Result<PerPrimeReport, ComplexError> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let npos = spec.positions.len();
    let ambient_dims: Vec<Vec<u64>> = spec
        .positions
        .iter()
        .map(|pos| pos.iter().map(|s| piece_dimension(spec.ambient, s.bidegree)).collect())
        .collect();
    let total_dims: Vec<u64> = ambient_dims.iter().map(|v| v.iter().sum()).collect();

    // integer ideal rows of one position
    let ideal_rows = |pos: usize| -> Vec<Vec<BigInt>> {
        let total = total_dims[pos] as usize;
        let mut rows = Vec::new();
        let mut offset = 0usize;
        for (s, summand) in spec.positions[pos].iter().enumerate() {
            let b = summand.bidegree;
            if !b.is_empty() {
                let target = MonomialBasis::new(spec.ambient, b);
                for g in summand.ideal.generators() {
                    let shift = g.bidegree();
                    let src = MonomialBasis::new(
                        spec.ambient,
                        BiDegree::new(b.m - shift.m, b.n - shift.n),
                    );
                    for i in 0..src.size() {
                        let h = src.unrank(i);
                        let mut row = vec![BigInt::zero(); total];
                        for (mono, coeff) in g.terms() {
                            let rank = target.rank(&mono.mul(&h)).expect("ideal row bidegree");
                            row[offset + rank as usize] += coeff;
                        }
                        rows.push(row);
                    }
                }
            }
            offset += ambient_dims[pos][s] as usize;
        }
        rows
    };

    let mut ideal_ranks: Vec<u64> = vec![0; npos];
    ideal_ranks[0] = crate::linalg::bareiss_rank(&ideal_rows(0), bound)? as u64;
    let mut diff_ranks = Vec::new();
    for k in 0..npos.saturating_sub(1) {
        let mut rows = ideal_rows(k + 1);
        ideal_ranks[k + 1] = crate::linalg::bareiss_rank(&rows, bound)? as u64;

        let total = total_dims[k + 1] as usize;
        let mut dst_offsets = Vec::new();
        let mut acc = 0usize;
        for &d in &ambient_dims[k + 1] {
            dst_offsets.push(acc);
            acc += d as usize;
        }
        for (s, summand) in spec.positions[k].iter().enumerate() {
            let src = MonomialBasis::new(spec.ambient, summand.bidegree);
            let blocks: Vec<&BlockSpec> =
                spec.blocks[k].iter().filter(|b| b.src == s).collect();
            for j in 0..src.size() {
                let mono = IntPoly::monomial(
                    crate::polyspace::IntegerRing,
                    spec.ambient,
                    src.unrank(j),
                    BigInt::from(1),
                );
                // one common multiplier per column keeps the rank intact
                let mut parts = Vec::new();
                let mut denom = 1i64;
                for b in &blocks {
                    let (poly, mult) = apply_int_cleared(&b.op, &mono)?;
                    let full_den = b.scalar.den * mult;
                    denom = lcm(denom, full_den);
                    parts.push((b.scalar.num, full_den, b.dst, poly));
                }
                let mut row = vec![BigInt::zero(); total];
                for (num, full_den, dst, poly) in parts {
                    let factor = BigInt::from(num) * BigInt::from(denom / full_den);
                    let basis = MonomialBasis::new(spec.ambient, spec.positions[k + 1][dst].bidegree);
                    for (mono, coeff) in poly.terms() {
                        let rank = basis.rank(mono)?;
                        row[dst_offsets[dst] + rank as usize] += coeff * &factor;
                    }
                }
                rows.push(row);
            }
        }
        let union = crate::linalg::bareiss_rank(&rows, bound)? as u64;
        diff_ranks.push(union - ideal_ranks[k + 1]);
    }
    let term_dims: Vec<u64> = (0..npos).map(|k| total_dims[k] - ideal_ranks[k]).collect();
    assemble_report(&spec.degree_of_pos, &term_dims, &diff_ranks, &spec.flags)
}

/// Echelonize the block-diagonal ideal rows of one position.
pub(crate) fn position_ideal_echelon(
    spec: &ComplexSpec,
    pos: usize,
    dims: &[u64],
    field: PrimeField,
) -> RowEchelon {
    let total: u64 = dims.iter().sum();
    let mut ech = RowEchelon::new(field, total as usize);
    let mut offset = 0u64;
    for (s, summand) in spec.positions[pos].iter().enumerate() {
        let b = summand.bidegree;
        if !b.is_empty() {
            let target = MonomialBasis::new(spec.ambient, b);
            let mut row: SparseVec = Vec::new();
            for g in summand.ideal.generators() {
                let gf = g.reduce_mod(field);
                if gf.is_zero() {
                    continue;
                }
                let shift = g.bidegree();
                let src =
                    MonomialBasis::new(spec.ambient, BiDegree::new(b.m - shift.m, b.n - shift.n));
                for i in 0..src.size() {
                    let h = src.unrank(i);
                    row.clear();
                    for (mono, &coeff) in gf.terms() {
                        let rank = target.rank(&mono.mul(&h)).expect("ideal row bidegree");
                        row.push((offset as u32 + rank as u32, coeff));
                    }
                    row.sort_unstable_by_key(|&(c, _)| c);
                    ech.push_row(&row);
                }
            }
        }
        offset += dims[s];
    }
    ech
}

/// Push the rows `D_k(monomial)` for every ambient source monomial of
/// position `k`, expressed in target-ambient coordinates. Reports each
/// vanished row as `(summand, local monomial rank)`.
pub(crate) fn push_image_rows(
    spec: &ComplexSpec,
    k: usize,
    dst_dims: &[u64],
    field: PrimeField,
    ech: &mut RowEchelon,
    on_vanish: &mut dyn FnMut(usize, u64),
) -> Result<(), ComplexError> {
    let mut dst_offsets = Vec::with_capacity(dst_dims.len());
    let mut acc = 0u64;
    for &d in dst_dims {
        dst_offsets.push(acc);
        acc += d;
    }
    let dst_bases: Vec<MonomialBasis> = spec.positions[k + 1]
        .iter()
        .map(|s| MonomialBasis::new(spec.ambient, s.bidegree))
        .collect();

    for (s, summand) in spec.positions[k].iter().enumerate() {
        let src_basis = MonomialBasis::new(spec.ambient, summand.bidegree);
        let blocks: Vec<(&BlockSpec, u64)> = spec.blocks[k]
            .iter()
            .filter(|b| b.src == s)
            .map(|b| {
                let scale = field.reduce_ratio(b.scalar.num, b.scalar.den).map_err(|_| {
                    ComplexError::PrimeTooSmall(format!(
                        "scalar {}/{} degenerates",
                        b.scalar.num, b.scalar.den
                    ))
                })?;
                Ok((b, scale))
            })
            .collect::<Result<_, ComplexError>>()?;
        let mut row: SparseVec = Vec::new();
        for j in 0..src_basis.size() {
            let mono = SparseBiPoly::monomial(field, spec.ambient, src_basis.unrank(j), 1);
            row.clear();
            for (block, scale) in &blocks {
                if *scale == 0 {
                    continue;
                }
                let image = block.op.apply(&mono)?.scale(scale);
                let vec = poly_to_vec(&image, &dst_bases[block.dst])?;
                let offset = dst_offsets[block.dst];
                row.extend(vec.into_iter().map(|(c, v)| (offset as u32 + c, v)));
            }
            row.sort_unstable_by_key(|&(c, _)| c);
            if let PushOutcome::Vanished(_) = ech.push_row(&row) {
                on_vanish(s, j);
            }
        }
    }
    Ok(())
}
