//! The differential and multiplication operators on `S = C[Y, X]` and the
//! assembly of their matrices between graded or quotient pieces.
//!
//! Every operator has a fixed bidegree shift; applying it to a polynomial
//! of bidegree `b` yields bidegree `b + shift` (or zero). Division by the
//! defining degrees and by factorials happens in the field, so callers must
//! load problems with compatible primes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{PrimeField, SparseMatrix, SparseVec};
use crate::polyspace::{
    BiDegree, IntPoly, IntegerRing, Monomial, MonomialBasis, PolyError, SparseBiPoly,
};
use crate::quotient::{poly_to_vec, QuotientError, QuotientPiece};

/// A rational scalar attached to a summand of a compound operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scalar {
    pub num: i64,
    pub den: i64,
}

impl Scalar {
    pub const ONE: Scalar = Scalar { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        Scalar { num, den }
    }
}

/// The operators of the theory.
///
/// Shifts: `delta^k: (-k, +k)`; `delta_rev: (+1, -1)`; `delta_f: (-1, +d)`;
/// `mul(A): +bideg(A)`; `alpha(P): (+1, d-1)`; `beta(P): (0, d)`;
/// `alpha_star(P): (-1, d-1)`; `beta_star(P): (0, d)`;
/// `renormalize: (0, 0)`. A scaled sum must have components of one common
/// shift.
#[derive(Debug, Clone)]
pub enum OperatorSpec {
    /// `delta^k` with `delta = sum_i X_i d/dY_i`.
    DeltaPower(u32),
    /// `sum_i Y_i d/dX_i`.
    DeltaRev,
    /// `sum_i P_i d/dY_i` for `N+1` X-polynomials of one common degree.
    DeltaF(Vec<IntPoly>),
    /// Multiplication by a bihomogeneous polynomial.
    Mul(IntPoly),
    /// Multiplication by `(1/d) (dP)_X(Y)`.
    Alpha(IntPoly),
    /// `beta(P) = mul(P) - alpha(P) . delta`.
    Beta(IntPoly),
    /// `(1/d) sum_i (dP/dX_i) d/dY_i`.
    AlphaStar(IntPoly),
    /// `beta_star(P) = mul(P) - mul(q) . alpha_star(P)`.
    BetaStar(IntPoly),
    /// `Y^a -> Y^a / a!`.
    Renormalize,
    /// A linear combination with rational scalars, kept compositional.
    ScaledSum(Vec<(Scalar, OperatorSpec)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorError {
    Poly(PolyError),
    Quotient(QuotientError),
    /// A polynomial operand fails its side conditions.
    InvalidOperand(String),
    /// The modulus divides a degree or factorial the operator divides by.
    ModulusDividesDenominator(String),
    /// `bidegree(target) != bidegree(source) + shift(op)`.
    BidegreeMismatch { source: BiDegree, shift: BiDegree, target: BiDegree },
    /// Components of a scaled sum disagree on their shift.
    MixedShifts,
    /// The operator does not map the source ideal into the target ideal.
    NotWellDefined { row: usize },
}

impl From<PolyError> for OperatorError {
    fn from(e: PolyError) -> Self {
        OperatorError::Poly(e)
    }
}

impl From<QuotientError> for OperatorError {
    fn from(e: QuotientError) -> Self {
        OperatorError::Quotient(e)
    }
}

impl fmt::Display for OperatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorError::Poly(e) => write!(f, "{e}"),
            OperatorError::Quotient(e) => write!(f, "{e}"),
            OperatorError::InvalidOperand(msg) => write!(f, "invalid operand: {msg}"),
            OperatorError::ModulusDividesDenominator(msg) => {
                write!(f, "modulus divides a required denominator: {msg}")
            }
            OperatorError::BidegreeMismatch { source, shift, target } => write!(
                f,
                "bidegree mismatch: source {source} + shift {shift} != target {target}"
            ),
            OperatorError::MixedShifts => write!(f, "scaled-sum components have unequal shifts"),
            OperatorError::NotWellDefined { row } => {
                write!(f, "operator does not descend: ideal row {row} escapes the target ideal")
            }
        }
    }
}

impl core::error::Error for OperatorError {}

/// `(dP)_X(Y) = sum_i (dP/dX_i)(X) Y_i`, of bidegree `(1, d-1)`.
pub fn gauss_poly(p: &IntPoly) -> Result<IntPoly, OperatorError> {
    check_x_form(p)?;
    let ambient = p.ambient();
    let shift = p.bidegree().shifted(1, -1);
    let mut out = IntPoly::zero(IntegerRing, ambient, shift);
    for i in 0..=ambient {
        let partial = p.x_partial(i);
        for (mono, coeff) in partial.terms() {
            let mut m = mono.clone();
            m.y[i] += 1;
            out.add_term(m, coeff.clone())?;
        }
    }
    Ok(out)
}

fn check_x_form(p: &IntPoly) -> Result<(), OperatorError> {
    if p.is_zero() {
        return Err(OperatorError::InvalidOperand("polynomial must be nonzero".into()));
    }
    if !p.is_x_only() {
        return Err(OperatorError::InvalidOperand(format!(
            "polynomial must be homogeneous in X only, got bidegree {}",
            p.bidegree()
        )));
    }
    if p.bidegree().n < 1 {
        return Err(OperatorError::InvalidOperand("X-degree must be >= 1".into()));
    }
    Ok(())
}

impl OperatorSpec {
    /// The fixed bidegree shift of this operator.
    pub fn shift(&self) -> Result<BiDegree, OperatorError> {
        Ok(match self {
            OperatorSpec::DeltaPower(k) => BiDegree::new(-(*k as i64), *k as i64),
            OperatorSpec::DeltaRev => BiDegree::new(1, -1),
            OperatorSpec::DeltaF(ps) => {
                let d = common_x_degree(ps)?;
                BiDegree::new(-1, d)
            }
            OperatorSpec::Mul(a) => a.bidegree(),
            OperatorSpec::Alpha(p) => {
                check_x_form(p)?;
                BiDegree::new(1, p.bidegree().n - 1)
            }
            OperatorSpec::Beta(p) => {
                check_x_form(p)?;
                BiDegree::new(0, p.bidegree().n)
            }
            OperatorSpec::AlphaStar(p) => {
                check_x_form(p)?;
                BiDegree::new(-1, p.bidegree().n - 1)
            }
            OperatorSpec::BetaStar(p) => {
                check_x_form(p)?;
                BiDegree::new(0, p.bidegree().n)
            }
            OperatorSpec::Renormalize => BiDegree::new(0, 0),
            OperatorSpec::ScaledSum(parts) => {
                let mut shift = None;
                for (_, op) in parts {
                    let s = op.shift()?;
                    match shift {
                        None => shift = Some(s),
                        Some(prev) if prev == s => {}
                        Some(_) => return Err(OperatorError::MixedShifts),
                    }
                }
                shift.ok_or(OperatorError::MixedShifts)?
            }
        })
    }

    /// Apply to a polynomial over a prime field. Exact, linear, and shifts
    /// the bidegree by [`OperatorSpec::shift`].
    pub fn apply(
        &self,
        p: &SparseBiPoly<PrimeField>,
    ) -> Result<SparseBiPoly<PrimeField>, OperatorError> {
        let field = *p.ring();
        let target = p.bidegree().plus(self.shift()?);
        let ambient = p.ambient();
        let mut out = SparseBiPoly::zero(field, ambient, target);
        if target.is_empty() {
            return Ok(out);
        }
        match self {
            OperatorSpec::DeltaPower(k) => {
                let mut acc = p.clone();
                for _ in 0..*k {
                    acc = delta(&acc)?;
                }
                out = acc;
            }
            OperatorSpec::DeltaRev => {
                for (mono, &coeff) in p.terms() {
                    for i in 0..=ambient {
                        if mono.x[i] == 0 {
                            continue;
                        }
                        let mut m = mono.clone();
                        m.x[i] -= 1;
                        m.y[i] += 1;
                        out.add_term(m, field.mul(coeff, mono.x[i] as u64))?;
                    }
                }
            }
            OperatorSpec::DeltaF(ps) => {
                common_x_degree(ps)?;
                if ps.len() != ambient + 1 {
                    return Err(OperatorError::InvalidOperand(format!(
                        "delta_f needs {} polynomials, got {}",
                        ambient + 1,
                        ps.len()
                    )));
                }
                for (i, pi) in ps.iter().enumerate() {
                    let pif = pi.reduce_mod(field);
                    let dp = y_partial_field(p, i)?;
                    out = out.add(&pif.multiply(&dp)?)?;
                }
            }
            OperatorSpec::Mul(a) => {
                out = a.reduce_mod(field).multiply(p)?;
            }
            OperatorSpec::Alpha(q) => {
                let scale = inv_degree(field, q)?;
                let gauss = gauss_poly(q)?.reduce_mod(field);
                out = gauss.multiply(p)?.scale(&scale);
            }
            OperatorSpec::Beta(q) => {
                // mul(P) - alpha(P) . delta
                let mul = q.reduce_mod(field).multiply(p)?;
                let scale = inv_degree(field, q)?;
                let gauss = gauss_poly(q)?.reduce_mod(field);
                let second = gauss.multiply(&delta(p)?)?.scale(&scale);
                out = mul.sub(&second)?;
            }
            OperatorSpec::AlphaStar(q) => {
                out = alpha_star(q, p)?;
            }
            OperatorSpec::BetaStar(q) => {
                // mul(P) - mul(pairing) . alpha_star(P)
                let mul = q.reduce_mod(field).multiply(p)?;
                let pairing = SparseBiPoly::pairing(field, ambient);
                let second = pairing.multiply(&alpha_star(q, p)?)?;
                out = mul.sub(&second)?;
            }
            OperatorSpec::Renormalize => {
                for (mono, &coeff) in p.terms() {
                    let mut fact = 1u64;
                    for &e in &mono.y {
                        if e as u64 >= field.modulus() {
                            return Err(OperatorError::ModulusDividesDenominator(format!(
                                "factorial of {e} vanishes mod {}",
                                field.modulus()
                            )));
                        }
                        for v in 2..=e as u64 {
                            fact = field.mul(fact, v);
                        }
                    }
                    let inv = field
                        .inv(fact)
                        .map_err(|_| OperatorError::ModulusDividesDenominator("factorial".into()))?;
                    out.add_term(mono.clone(), field.mul(coeff, inv))?;
                }
            }
            OperatorSpec::ScaledSum(parts) => {
                for (c, op) in parts {
                    let coeff = field.reduce_ratio(c.num, c.den).map_err(|_| {
                        OperatorError::ModulusDividesDenominator(format!("scalar {}/{}", c.num, c.den))
                    })?;
                    out = out.add(&op.apply(p)?.scale(&coeff))?;
                }
            }
        }
        debug_assert!(out.is_zero() || out.bidegree() == target);
        Ok(out)
    }
}

fn common_x_degree(ps: &[IntPoly]) -> Result<i64, OperatorError> {
    let mut degree = None;
    for p in ps {
        check_x_form(p)?;
        let d = p.bidegree().n;
        match degree {
            None => degree = Some(d),
            Some(prev) if prev == d => {}
            Some(prev) => {
                return Err(OperatorError::InvalidOperand(format!(
                    "delta_f degrees differ: {prev} vs {d}"
                )))
            }
        }
    }
    degree.ok_or_else(|| OperatorError::InvalidOperand("empty polynomial list".into()))
}

fn inv_degree(field: PrimeField, p: &IntPoly) -> Result<u64, OperatorError> {
    let d = p.bidegree().n as u64;
    field.inv(d % field.modulus()).map_err(|_| {
        OperatorError::ModulusDividesDenominator(format!("degree {d} mod {}", field.modulus()))
    })
}

fn delta(
    p: &SparseBiPoly<PrimeField>,
) -> Result<SparseBiPoly<PrimeField>, OperatorError> {
    let field = *p.ring();
    let ambient = p.ambient();
    let mut out = SparseBiPoly::zero(field, ambient, p.bidegree().shifted(-1, 1));
    if out.bidegree().is_empty() {
        return Ok(out);
    }
    for (mono, &coeff) in p.terms() {
        for i in 0..=ambient {
            if mono.y[i] == 0 {
                continue;
            }
            let mut m = mono.clone();
            m.y[i] -= 1;
            m.x[i] += 1;
            out.add_term(m, field.mul(coeff, mono.y[i] as u64))?;
        }
    }
    Ok(out)
}

fn y_partial_field(
    p: &SparseBiPoly<PrimeField>,
    i: usize,
) -> Result<SparseBiPoly<PrimeField>, OperatorError> {
    let field = *p.ring();
    let mut out = SparseBiPoly::zero(field, p.ambient(), p.bidegree().shifted(-1, 0));
    if out.bidegree().is_empty() {
        return Ok(out);
    }
    for (mono, &coeff) in p.terms() {
        if mono.y[i] == 0 {
            continue;
        }
        let mut m = mono.clone();
        m.y[i] -= 1;
        out.add_term(m, field.mul(coeff, mono.y[i] as u64))?;
    }
    Ok(out)
}

fn alpha_star(
    q: &IntPoly,
    p: &SparseBiPoly<PrimeField>,
) -> Result<SparseBiPoly<PrimeField>, OperatorError> {
    check_x_form(q)?;
    let field = *p.ring();
    let scale = inv_degree(field, q)?;
    let ambient = p.ambient();
    let mut out = SparseBiPoly::zero(field, ambient, p.bidegree().plus(BiDegree::new(-1, q.bidegree().n - 1)));
    if out.bidegree().is_empty() {
        return Ok(out);
    }
    for i in 0..=ambient {
        let partial = q.x_partial(i).reduce_mod(field);
        if partial.is_zero() {
            continue;
        }
        let dp = y_partial_field(p, i)?;
        out = out.add(&partial.multiply(&dp)?)?;
    }
    Ok(out.scale(&scale))
}

/// A source or target of an operator matrix: a full graded piece or a
/// quotient piece.
#[derive(Clone, Copy)]
pub enum Space<'a> {
    Full(&'a MonomialBasis),
    Quotient(&'a QuotientPiece),
}

impl<'a> Space<'a> {
    pub fn bidegree(&self) -> BiDegree {
        match self {
            Space::Full(b) => b.bidegree(),
            Space::Quotient(q) => q.bidegree(),
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            Space::Full(b) => b.ambient(),
            Space::Quotient(q) => q.ambient_basis().ambient(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Space::Full(b) => b.size() as usize,
            Space::Quotient(q) => q.dimension(),
        }
    }

    /// The canonical monomial behind coordinate `j`.
    pub fn monomial(&self, j: usize) -> Monomial {
        match self {
            Space::Full(b) => b.unrank(j as u64),
            Space::Quotient(q) => q.basis_monomial(j),
        }
    }
}

/// The matrix of an operator between two spaces: column `j` holds the
/// coordinates of the operator applied to the `j`-th basis element,
/// reduced into the target (quotient) basis.
pub fn operator_matrix(
    op: &OperatorSpec,
    source: &Space<'_>,
    target: &Space<'_>,
    field: PrimeField,
) -> Result<SparseMatrix, OperatorError> {
    let shift = op.shift()?;
    if source.bidegree().plus(shift) != target.bidegree() {
        return Err(OperatorError::BidegreeMismatch {
            source: source.bidegree(),
            shift,
            target: target.bidegree(),
        });
    }
    let ambient = source.ambient();
    let target_basis = MonomialBasis::new(ambient, target.bidegree());
    let mut ws = match target {
        Space::Quotient(q) => Some(q.workspace()),
        Space::Full(_) => None,
    };
    let mut cols: Vec<SparseVec> = Vec::with_capacity(source.dim());
    for j in 0..source.dim() {
        let mono = SparseBiPoly::monomial(field, ambient, source.monomial(j), 1);
        let image = op.apply(&mono)?;
        let ambient_vec = poly_to_vec(&image, &target_basis)?;
        let col = match target {
            Space::Full(_) => ambient_vec,
            Space::Quotient(q) => q.reduce_vector(ws.as_mut().unwrap(), &ambient_vec),
        };
        cols.push(col);
    }
    Ok(SparseMatrix::from_columns(target.dim(), cols))
}

/// Check that the operator maps the source ideal piece into the target
/// ideal piece: each echelon row of the source ideal must reduce to zero in
/// the target quotient.
pub fn well_definedness_check(
    op: &OperatorSpec,
    source: &QuotientPiece,
    target: &QuotientPiece,
) -> Result<(), OperatorError> {
    let field = source.field();
    let src_basis = source.ambient_basis();
    let mut ws = target.workspace();
    let tgt_basis = MonomialBasis::new(src_basis.ambient(), target.bidegree());
    for (i, row) in source.ideal_rows_iter().enumerate() {
        let poly = crate::quotient::vec_to_poly(&row, src_basis, field);
        let image = op.apply(&poly)?;
        let vec = poly_to_vec(&image, &tgt_basis)?;
        if !target.reduce_vector(&mut ws, &vec).is_empty() {
            return Err(OperatorError::NotWellDefined { row: i });
        }
    }
    Ok(())
}

/// True iff `sum_i P_i d/dY_i` is injective on `S_{m,n}`.
pub fn delta_f_injectivity(
    ps: &[IntPoly],
    m: i64,
    n: i64,
    field: PrimeField,
) -> Result<bool, OperatorError> {
    let d = common_x_degree(ps)?;
    let ambient = ps[0].ambient();
    let op = OperatorSpec::DeltaF(ps.to_vec());
    let src = MonomialBasis::new(ambient, BiDegree::new(m, n));
    let dst = MonomialBasis::new(ambient, BiDegree::new(m - 1, n + d));
    let matrix = operator_matrix(&op, &Space::Full(&src), &Space::Full(&dst), field)?;
    Ok(crate::linalg::rank(&matrix, field) == src.size() as usize)
}

#[cfg(test)]
mod tests;
