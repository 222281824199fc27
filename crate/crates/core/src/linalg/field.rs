use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::LinalgError;

/// A prime field `F_p` with an odd modulus below `2^31`.
///
/// The bound keeps every product of two reduced elements inside a `u64`, so
/// all arithmetic is single-word. The complexes divide by the defining
/// degrees, by 2, and by factorials of the symmetric power, so problem
/// loaders must additionally check the modulus against those divisors
/// (see `complexes::Problem::check_prime`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    /// Largest supported modulus (exclusive).
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(modulus: u64) -> Result<Self, LinalgError> {
        if !(3..Self::MAX_MODULUS).contains(&modulus) || modulus.is_multiple_of(2) || !is_prime(modulus) {
            return Err(LinalgError::BadModulus(modulus));
        }
        Ok(PrimeField { modulus })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn zero(&self) -> u64 {
        0
    }

    #[inline]
    pub fn one(&self) -> u64 {
        1
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.modulus
    }

    /// Fused multiply-subtract `a - b*c`, the inner loop of elimination.
    #[inline]
    pub fn mul_sub(&self, a: u64, b: u64, c: u64) -> u64 {
        self.sub(a, b * c % self.modulus)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64, LinalgError> {
        if a.is_multiple_of(self.modulus) {
            return Err(LinalgError::DivisionByZero);
        }
        Ok(self.pow(a, self.modulus - 2))
    }

    /// Reduce a signed machine integer.
    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u64 {
        let m = self.modulus as i64;
        let r = v % m;
        if r < 0 {
            (r + m) as u64
        } else {
            r as u64
        }
    }

    /// Reduce an arbitrary-precision integer.
    pub fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        let r = v % &m;
        let r = if r.is_negative() { r + &m } else { r };
        r.to_u64().expect("reduced value fits u64")
    }

    /// Reduce a rational scalar `num/den`.
    pub fn reduce_ratio(&self, num: i64, den: i64) -> Result<u64, LinalgError> {
        let d = self.reduce_i64(den);
        Ok(self.mul(self.reduce_i64(num), self.inv(d)?))
    }
}

/// Deterministic Miller-Rabin; the bases {2, 3, 5, 7, 11, 13, 17} are exact
/// for every modulus below 3.4e14, far beyond the supported range.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_default_primes() {
        for p in [1000003u64, 2000003] {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(f.modulus(), p);
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0u64, 1, 2, 4, 9, 1000000, 1 << 31, (1 << 31) + 11] {
            assert!(PrimeField::new(p).is_err(), "{p} should be rejected");
        }
    }

    #[test]
    fn field_axioms_spot_checks() {
        let f = PrimeField::new(1000003).unwrap();
        for a in [1u64, 2, 17, 999999, 1000002] {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1);
        }
        assert_eq!(f.add(1000002, 1), 0);
        assert_eq!(f.sub(0, 1), 1000002);
        assert_eq!(f.reduce_i64(-1), 1000002);
        assert_eq!(f.reduce_bigint(&BigInt::from(-1000004)), 1000002);
        assert_eq!(f.reduce_ratio(1, 2).unwrap(), f.inv(2).unwrap());
        assert!(f.inv(0).is_err());
    }
}
