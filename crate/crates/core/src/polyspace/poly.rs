use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::PrimeField;

use super::{BiDegree, PolyError};

/// Coefficient ring abstraction: arbitrary-precision integers for
/// field-agnostic storage, or a prime field for computation. Elements are
/// produced through the ring object, hence the `&self` constructors.
#[allow(clippy::wrong_self_convention)]
pub trait Ring: Clone {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;
}

/// The ring of integers with `BigInt` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_u64(&self, v: u64) -> BigInt {
        BigInt::from(v)
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::add(self, *a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        PrimeField::neg(self, *a)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::mul(self, *a, *b)
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.modulus()
    }
}

/// A bihomogeneous monomial: one exponent vector per block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub y: Vec<u32>,
    pub x: Vec<u32>,
}

impl Monomial {
    pub fn one(ambient: usize) -> Self {
        Monomial { y: vec![0; ambient + 1], x: vec![0; ambient + 1] }
    }

    pub fn ydeg(&self) -> u32 {
        self.y.iter().sum()
    }

    pub fn xdeg(&self) -> u32 {
        self.x.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        debug_assert_eq!(self.y.len(), self.x.len());
        self.y.len()
    }

    pub fn bidegree(&self) -> BiDegree {
        BiDegree::new(self.ydeg() as i64, self.xdeg() as i64)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Descending grevlex within each block, `Y` block major; total degree
/// breaks ties across pieces. This ordering agrees with `MonomialBasis`
/// ranks, so iterating a `BTreeMap<Monomial, _>` walks ranks in order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |m: &Monomial| (m.ydeg(), m.xdeg());
        key(self)
            .cmp(&key(other))
            .then_with(|| revlex(&self.y, &other.y))
            .then_with(|| revlex(&self.x, &other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// First difference scanning from the last variable; a smaller exponent
/// there means a larger monomial, i.e. a smaller rank.
fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    for (ea, eb) in a.iter().rev().zip(b.iter().rev()) {
        match ea.cmp(eb) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// A bihomogeneous polynomial: a map from monomials to nonzero coefficients.
///
/// Every stored monomial has the declared bidegree and no zero coefficient
/// is kept. Values are immutable after construction and freely shareable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBiPoly<R: Ring> {
    ring: R,
    ambient: usize,
    bidegree: BiDegree,
    terms: BTreeMap<Monomial, R::Elem>,
}

pub type IntPoly = SparseBiPoly<IntegerRing>;

impl<R: Ring> SparseBiPoly<R> {
    pub fn zero(ring: R, ambient: usize, bidegree: BiDegree) -> Self {
        SparseBiPoly { ring, ambient, bidegree, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(ring: R, ambient: usize, bidegree: BiDegree, iter: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, R::Elem)>,
    {
        let mut poly = Self::zero(ring, ambient, bidegree);
        for (mono, coeff) in iter {
            poly.add_term(mono, coeff)?;
        }
        Ok(poly)
    }

    pub fn monomial(ring: R, ambient: usize, mono: Monomial, coeff: R::Elem) -> Self {
        let bidegree = mono.bidegree();
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&coeff) {
            terms.insert(mono, coeff);
        }
        SparseBiPoly { ring, ambient, bidegree, terms }
    }

    /// The pairing polynomial `q = sum_i X_i Y_i` of bidegree `(1, 1)`.
    pub fn pairing(ring: R, ambient: usize) -> Self {
        let mut poly = Self::zero(ring.clone(), ambient, BiDegree::new(1, 1));
        for i in 0..=ambient {
            let mut mono = Monomial::one(ambient);
            mono.y[i] = 1;
            mono.x[i] = 1;
            poly.add_term(mono, ring.one()).expect("bidegree (1,1)");
        }
        poly
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn bidegree(&self) -> BiDegree {
        self.bidegree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, R::Elem> {
        self.terms
    }

    /// Accumulate one term, dropping it if the coefficient cancels.
    pub fn add_term(&mut self, mono: Monomial, coeff: R::Elem) -> Result<(), PolyError> {
        if self.ring.is_zero(&coeff) {
            return Ok(());
        }
        if mono.bidegree() != self.bidegree || mono.nvars() != self.ambient + 1 {
            return Err(PolyError::BidegreeMismatch {
                expected: self.bidegree,
                got: mono.bidegree(),
            });
        }
        match self.terms.entry(mono) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = self.ring.add(e.get(), &coeff);
                if self.ring.is_zero(&sum) {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ambient(other)?;
        if other.bidegree != self.bidegree && !other.is_zero() && !self.is_zero() {
            return Err(PolyError::BidegreeMismatch {
                expected: self.bidegree,
                got: other.bidegree,
            });
        }
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.add_term(mono.clone(), coeff.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.scale(&self.ring.neg(&self.ring.one())))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        if self.ring.is_zero(c) {
            return Self::zero(self.ring.clone(), self.ambient, self.bidegree);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), self.ring.mul(v, c)))
            .filter(|(_, v)| !self.ring.is_zero(v))
            .collect();
        SparseBiPoly { ring: self.ring.clone(), ambient: self.ambient, bidegree: self.bidegree, terms }
    }

    /// Exact product; the result bidegree is the componentwise sum.
    pub fn multiply(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ambient(other)?;
        let bidegree = self.bidegree.plus(other.bidegree);
        let mut out = Self::zero(self.ring.clone(), self.ambient, bidegree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.ring.mul(ca, cb))?;
            }
        }
        Ok(out)
    }

    /// `d/dY_i`, one bidegree lower in `Y`.
    pub fn y_partial(&self, i: usize) -> Self {
        let bidegree = self.bidegree.shifted(-1, 0);
        let mut out = Self::zero(self.ring.clone(), self.ambient, bidegree);
        if bidegree.is_empty() {
            return out;
        }
        for (mono, coeff) in &self.terms {
            if mono.y[i] == 0 {
                continue;
            }
            let mut m = mono.clone();
            m.y[i] -= 1;
            let c = self.ring.mul(coeff, &self.ring.from_u64(mono.y[i] as u64));
            out.add_term(m, c).expect("derivative bidegree");
        }
        out
    }

    /// `d/dX_i`, one bidegree lower in `X`.
    pub fn x_partial(&self, i: usize) -> Self {
        let bidegree = self.bidegree.shifted(0, -1);
        let mut out = Self::zero(self.ring.clone(), self.ambient, bidegree);
        if bidegree.is_empty() {
            return out;
        }
        for (mono, coeff) in &self.terms {
            if mono.x[i] == 0 {
                continue;
            }
            let mut m = mono.clone();
            m.x[i] -= 1;
            let c = self.ring.mul(coeff, &self.ring.from_u64(mono.x[i] as u64));
            out.add_term(m, c).expect("derivative bidegree");
        }
        out
    }

    /// Expansion of `p(Y + tX, X)` as a raw term map (the result is not
    /// bihomogeneous). Kernel elements of the Euler operator satisfy
    /// `p(Y + tX, X) = p(Y, X)` for every `t`.
    pub fn shear_terms(&self, t: &R::Elem) -> BTreeMap<Monomial, R::Elem> {
        let mut acc: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            // expand prod_i (Y_i + t X_i)^{y_i}
            let mut partial: Vec<(Monomial, R::Elem)> = vec![(
                Monomial { y: vec![0; mono.nvars()], x: mono.x.clone() },
                coeff.clone(),
            )];
            for (i, &e) in mono.y.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut next = Vec::with_capacity(partial.len() * (e as usize + 1));
                for (m, c) in &partial {
                    let mut tpow = self.ring.one();
                    for j in (0..=e).rev() {
                        // term C(e, j) * t^{e-j} Y_i^j X_i^{e-j}; iterate
                        // e-j = 0.. so tpow tracks t^{e-j}
                        let binom = super::order::binomial(e as u64, j as u64);
                        let mut mm = m.clone();
                        mm.y[i] += j;
                        mm.x[i] += e - j;
                        let cc = self
                            .ring
                            .mul(&self.ring.mul(c, &self.ring.from_u64(binom)), &tpow);
                        next.push((mm, cc));
                        tpow = self.ring.mul(&tpow, t);
                    }
                }
                partial = next;
            }
            for (m, c) in partial {
                let entry = acc.entry(m).or_insert_with(|| self.ring.zero());
                *entry = self.ring.add(entry, &c);
            }
        }
        acc.retain(|_, v| !self.ring.is_zero(v));
        acc
    }

    fn check_ambient(&self, other: &Self) -> Result<(), PolyError> {
        if self.ambient != other.ambient {
            return Err(PolyError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }
}

impl IntPoly {
    /// Reduce every coefficient into the field.
    pub fn reduce_mod(&self, field: PrimeField) -> SparseBiPoly<PrimeField> {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let v = field.reduce_bigint(c);
                (v != 0).then(|| (m.clone(), v))
            })
            .collect();
        SparseBiPoly { ring: field, ambient: self.ambient, bidegree: self.bidegree, terms }
    }

    /// True when the polynomial involves no `Y` variable.
    pub fn is_x_only(&self) -> bool {
        self.bidegree.m == 0
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in &self.terms {
            let neg = coeff.is_negative();
            let abs = coeff.magnitude();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = String::new();
            for (name, exps) in [("Y", &mono.y), ("X", &mono.x)] {
                for (i, &e) in exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !factors.is_empty() {
                        factors.push('*');
                    }
                    write!(factors, "{name}{i}").unwrap();
                    if e > 1 {
                        write!(factors, "^{e}").unwrap();
                    }
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{factors}")?;
            } else {
                write!(f, "{abs}*{factors}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::parse_poly;

    #[test]
    fn q_times_one_is_q() {
        let q = IntPoly::pairing(IntegerRing, 2);
        let one = IntPoly::monomial(IntegerRing, 2, Monomial::one(2), BigInt::one());
        assert_eq!(q.multiply(&one).unwrap(), q);
    }

    #[test]
    fn square_of_x0y0() {
        let n = 3;
        let mut m = Monomial::one(n);
        m.y[0] = 1;
        m.x[0] = 1;
        let p = IntPoly::monomial(IntegerRing, n, m, BigInt::one());
        let sq = p.multiply(&p).unwrap();
        assert_eq!(sq.bidegree(), BiDegree::new(2, 2));
        let (mono, coeff) = sq.terms().next().unwrap();
        assert_eq!(mono.y[0], 2);
        assert_eq!(mono.x[0], 2);
        assert_eq!(coeff, &BigInt::one());
    }

    #[test]
    fn difference_of_squares_matches_dense_convolution() {
        let n = 1;
        let a = parse_poly("X0+X1", n).unwrap();
        let b = parse_poly("X0-X1", n).unwrap();
        let prod = a.multiply(&b).unwrap();
        assert_eq!(prod, parse_poly("X0^2-X1^2", n).unwrap());

        // dense convolution oracle on the coefficient vectors in X0^i X1^(d-i)
        let dense = |p: &IntPoly, d: u32| -> Vec<BigInt> {
            (0..=d)
                .map(|i| {
                    let mono = Monomial { y: vec![0, 0], x: vec![i, d - i] };
                    p.terms()
                        .find(|(m, _)| **m == mono)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(BigInt::zero)
                })
                .collect()
        };
        let da = dense(&a, 1);
        let db = dense(&b, 1);
        let mut conv = vec![BigInt::zero(); 3];
        for i in 0..2 {
            for j in 0..2 {
                conv[i + j] += &da[i] * &db[j];
            }
        }
        assert_eq!(conv, dense(&prod, 2));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = IntPoly::pairing(IntegerRing, 2);
        let b = IntPoly::pairing(IntegerRing, 3);
        assert!(matches!(a.multiply(&b), Err(PolyError::AmbientMismatch { .. })));
    }

    #[test]
    fn shear_is_identity_on_x_only_polys() {
        let p = parse_poly("X0^2+3X1*X2", 2).unwrap();
        let sheared = p.shear_terms(&BigInt::from(7));
        assert_eq!(sheared, p.terms.clone());
    }
}
