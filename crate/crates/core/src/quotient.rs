//! Graded pieces of quotients `S/(g_1, ..., g_t)` for bihomogeneous
//! generators, realized as echelon data: the ideal-image subspace at one
//! bidegree, the quotient basis of non-pivot monomials, and exact
//! reduction/lifting between the two.
//!
//! No Groebner bases anywhere: queries are per-bidegree, so the ideal piece
//! `sum_j g_j * S_{b - deg(g_j)}` is plain linear algebra.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{EchelonForm, PrimeField, RowEchelon, SparseVec, Workspace};
use crate::polyspace::{BiDegree, IntPoly, Monomial, MonomialBasis, PolyError, SparseBiPoly};

/// A list of bihomogeneous, nonzero generators.
#[derive(Debug, Clone)]
pub struct IdealSpec {
    generators: Vec<IntPoly>,
}

impl IdealSpec {
    pub fn new(generators: Vec<IntPoly>) -> Result<Self, QuotientError> {
        for g in &generators {
            if g.is_zero() {
                return Err(QuotientError::ZeroGenerator);
            }
        }
        Ok(IdealSpec { generators })
    }

    /// The ideal `(q^k)` generated by a power of the pairing polynomial.
    pub fn pairing_power(ambient: usize, k: u32) -> Self {
        let q = IntPoly::pairing(crate::polyspace::IntegerRing, ambient);
        let mut acc = q.clone();
        for _ in 1..k {
            acc = acc.multiply(&q).expect("same ambient");
        }
        IdealSpec { generators: vec![acc] }
    }

    /// The ideal `(P_1, ..., P_c, q)`.
    pub fn with_pairing(ambient: usize, polys: &[IntPoly]) -> Result<Self, QuotientError> {
        let mut generators = polys.to_vec();
        generators.push(IntPoly::pairing(crate::polyspace::IntegerRing, ambient));
        Self::new(generators)
    }

    pub fn generators(&self) -> &[IntPoly] {
        &self.generators
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientError {
    ZeroGenerator,
    Poly(PolyError),
    BidegreeMismatch { expected: BiDegree, got: BiDegree },
    CoordinateLength { expected: usize, got: usize },
    Internal(String),
}

impl From<PolyError> for QuotientError {
    fn from(e: PolyError) -> Self {
        QuotientError::Poly(e)
    }
}

impl fmt::Display for QuotientError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientError::ZeroGenerator => write!(f, "ideal generators must be nonzero"),
            QuotientError::Poly(e) => write!(f, "{e}"),
            QuotientError::BidegreeMismatch { expected, got } => {
                write!(f, "bidegree mismatch: piece is {expected}, polynomial is {got}")
            }
            QuotientError::CoordinateLength { expected, got } => {
                write!(f, "coordinate vector has length {got}, expected {expected}")
            }
            QuotientError::Internal(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for QuotientError {}

/// Feed the rows `g_j * (monomials of S_{b - deg g_j})` into an echelon.
/// Row order is fixed (generators in order, multipliers by rank), so the
/// result is reproducible.
pub fn ideal_image_echelon(
    ideal: &IdealSpec,
    ambient: usize,
    b: BiDegree,
    field: PrimeField,
) -> RowEchelon {
    let target = MonomialBasis::new(ambient, b);
    let mut ech = RowEchelon::new(field, target.size() as usize);
    if b.is_empty() {
        return ech;
    }
    let mut row: SparseVec = Vec::new();
    for g in ideal.generators() {
        let gf = g.reduce_mod(field);
        if gf.is_zero() {
            continue;
        }
        let shift = g.bidegree();
        let src = MonomialBasis::new(ambient, BiDegree::new(b.m - shift.m, b.n - shift.n));
        for i in 0..src.size() {
            let h = src.unrank(i);
            row.clear();
            for (mono, &coeff) in gf.terms() {
                let rank = target.rank(&mono.mul(&h)).expect("product has piece bidegree");
                row.push((rank as u32, coeff));
            }
            row.sort_unstable_by_key(|&(c, _)| c);
            ech.push_row(&row);
        }
    }
    ech
}

/// The ideal-image subspace at one bidegree as a reduced echelon form.
/// Its row space is `sum_j g_j * S_{b - deg(g_j)}` (an empty sum gives the
/// zero space).
pub fn ideal_image_piece(
    ideal: &IdealSpec,
    ambient: usize,
    b: BiDegree,
    field: PrimeField,
) -> EchelonForm {
    let ech = ideal_image_echelon(ideal, ambient, b, field);
    let ncols = ech.ncols();
    let (pivots, rows) = ech.into_reduced_rows();
    EchelonForm { ncols, pivots, rows }
}

/// One graded piece of `S/I`: the ambient monomial basis, the echelonized
/// ideal subspace, and the canonical quotient basis of non-pivot monomials.
pub struct QuotientPiece {
    ambient_basis: MonomialBasis,
    ideal: RowEchelon,
    quotient_basis: Vec<u64>,
    coord_of_rank: Vec<u32>,
}

const NOT_IN_QUOTIENT: u32 = u32::MAX;

impl QuotientPiece {
    pub fn dimension(&self) -> usize {
        self.quotient_basis.len()
    }

    pub fn ambient_basis(&self) -> &MonomialBasis {
        &self.ambient_basis
    }

    pub fn bidegree(&self) -> BiDegree {
        self.ambient_basis.bidegree()
    }

    pub fn field(&self) -> PrimeField {
        self.ideal.field()
    }

    pub fn ideal_rank(&self) -> usize {
        self.ideal.rank()
    }

    /// Ambient ranks of the quotient basis monomials, increasing.
    pub fn quotient_basis(&self) -> &[u64] {
        &self.quotient_basis
    }

    /// The canonical monomial representative behind quotient coordinate `i`.
    pub fn basis_monomial(&self, i: usize) -> Monomial {
        self.ambient_basis.unrank(self.quotient_basis[i])
    }

    pub fn workspace(&self) -> Workspace {
        self.ideal.workspace()
    }

    /// The echelon rows spanning the ideal subspace, in insertion order.
    pub fn ideal_rows_iter(&self) -> impl Iterator<Item = SparseVec> + '_ {
        self.ideal.iter_rows()
    }

    /// Reduce an ambient coordinate vector into quotient coordinates,
    /// killing the ideal subspace exactly.
    pub fn reduce_vector(&self, ws: &mut Workspace, ambient: &SparseVec) -> SparseVec {
        let reduced = self.ideal.reduce_vector(ws, ambient);
        reduced
            .into_iter()
            .map(|(c, v)| {
                let q = self.coord_of_rank[c as usize];
                debug_assert_ne!(q, NOT_IN_QUOTIENT);
                (q, v)
            })
            .collect()
    }

    /// Reduce a polynomial of the piece's bidegree to dense quotient
    /// coordinates.
    pub fn reduce_poly(&self, p: &SparseBiPoly<PrimeField>) -> Result<Vec<u64>, QuotientError> {
        if !p.is_zero() && p.bidegree() != self.bidegree() {
            return Err(QuotientError::BidegreeMismatch {
                expected: self.bidegree(),
                got: p.bidegree(),
            });
        }
        let ambient = poly_to_vec(p, &self.ambient_basis)?;
        let mut ws = self.workspace();
        let sparse = self.reduce_vector(&mut ws, &ambient);
        let mut out = vec![0u64; self.dimension()];
        for (c, v) in sparse {
            out[c as usize] = v;
        }
        Ok(out)
    }

    /// Map quotient coordinates to the canonical representative supported
    /// on non-pivot monomials.
    pub fn lift(&self, coords: &[u64]) -> Result<SparseBiPoly<PrimeField>, QuotientError> {
        if coords.len() != self.dimension() {
            return Err(QuotientError::CoordinateLength {
                expected: self.dimension(),
                got: coords.len(),
            });
        }
        let field = self.field();
        let mut p = SparseBiPoly::zero(field, self.ambient_basis.ambient(), self.bidegree());
        for (i, &v) in coords.iter().enumerate() {
            if v % field.modulus() != 0 {
                p.add_term(self.basis_monomial(i), v % field.modulus())?;
            }
        }
        Ok(p)
    }
}

/// Assemble the quotient piece of `S/I` at one bidegree.
pub fn quotient_piece(
    ideal: &IdealSpec,
    ambient: usize,
    b: BiDegree,
    field: PrimeField,
) -> QuotientPiece {
    let ambient_basis = MonomialBasis::new(ambient, b);
    let ech = ideal_image_echelon(ideal, ambient, b, field);
    let size = ambient_basis.size();
    let mut quotient_basis = Vec::with_capacity(size as usize - ech.rank());
    let mut coord_of_rank = vec![NOT_IN_QUOTIENT; size as usize];
    for c in 0..size {
        if !ech.is_pivot(c as u32) {
            coord_of_rank[c as usize] = quotient_basis.len() as u32;
            quotient_basis.push(c);
        }
    }
    QuotientPiece { ambient_basis, ideal: ech, quotient_basis, coord_of_rank }
}

/// Coordinates of a polynomial in an ambient monomial basis.
pub fn poly_to_vec(
    p: &SparseBiPoly<PrimeField>,
    basis: &MonomialBasis,
) -> Result<SparseVec, QuotientError> {
    let mut out: SparseVec = Vec::with_capacity(p.num_terms());
    for (mono, &coeff) in p.terms() {
        let rank = basis.rank(mono)?;
        out.push((rank as u32, coeff));
    }
    out.sort_unstable_by_key(|&(c, _)| c);
    Ok(out)
}

/// Inverse of [`poly_to_vec`].
pub fn vec_to_poly(
    v: &SparseVec,
    basis: &MonomialBasis,
    field: PrimeField,
) -> SparseBiPoly<PrimeField> {
    let mut p = SparseBiPoly::zero(field, basis.ambient(), basis.bidegree());
    for &(c, val) in v {
        p.add_term(basis.unrank(c as u64), val).expect("basis monomial bidegree");
    }
    p
}
