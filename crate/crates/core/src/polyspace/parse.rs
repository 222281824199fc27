use alloc::format;
use alloc::string::ToString;
use alloc::vec;

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{IntPoly, IntegerRing, Monomial};
use super::{BiDegree, PolyError};

/// Parse a bihomogeneous polynomial in the input grammar:
///
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := coef? ('*'? factor)*
/// factor := ('X'|'Y') index ('^' power)?
/// coef   := optional sign + decimal integer
/// ```
///
/// Whitespace is ignored; `index` and `power` are decimal; variables are
/// `X0..XN` and `Y0..YN`. Coefficients are exact integers; the bidegree is
/// inferred and verified to be homogeneous in `Y` and in `X` separately.
pub fn parse_poly(text: &str, ambient: usize) -> Result<IntPoly, PolyError> {
    Parser { bytes: text.as_bytes(), pos: 0, ambient }.parse()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ambient: usize,
}

impl<'a> Parser<'a> {
    fn parse(&mut self) -> Result<IntPoly, PolyError> {
        let mut terms: vec::Vec<(usize, Monomial, BigInt)> = vec::Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty input"));
        }
        let mut negate = false;
        loop {
            let (mono, coeff) = self.term()?;
            let coeff = if negate { -coeff } else { coeff };
            terms.push((self.pos, mono, coeff));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(c) => {
                    return Err(self.err(&format!("expected '+' or '-', found {:?}", c as char)))
                }
            }
        }
        let bidegree = terms
            .first()
            .map(|(_, m, _)| m.bidegree())
            .unwrap_or(BiDegree::new(0, 0));
        for (pos, mono, _) in &terms {
            if mono.bidegree() != bidegree {
                return Err(PolyError::NotBihomogeneous { pos: *pos });
            }
        }
        IntPoly::from_terms(
            IntegerRing,
            self.ambient,
            bidegree,
            terms.into_iter().map(|(_, m, c)| (m, c)),
        )
    }

    fn term(&mut self) -> Result<(Monomial, BigInt), PolyError> {
        self.skip_ws();
        let mut coeff = BigInt::one();
        let mut saw_anything = false;

        // optional signed coefficient; a bare sign before a factor is read
        // as coefficient +-1
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            let neg = self.peek() == Some(b'-');
            self.pos += 1;
            self.skip_ws();
            if neg {
                coeff = -coeff;
            }
            saw_anything = true;
        }
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff *= self.integer()?;
            saw_anything = true;
        }

        let mut mono = Monomial::one(self.ambient);
        loop {
            self.skip_ws();
            let mark = self.pos;
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
            }
            match self.peek() {
                Some(b'X') | Some(b'Y') => {
                    let is_x = self.peek() == Some(b'X');
                    self.pos += 1;
                    let at = self.pos;
                    let index = self.index()?;
                    if index > self.ambient {
                        return Err(PolyError::VarIndexOutOfRange {
                            pos: at,
                            index,
                            ambient: self.ambient,
                        });
                    }
                    let power = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.index()? as u32
                    } else {
                        1
                    };
                    if is_x {
                        mono.x[index] += power;
                    } else {
                        mono.y[index] += power;
                    }
                    saw_anything = true;
                }
                _ => {
                    self.pos = mark;
                    break;
                }
            }
        }
        if !saw_anything {
            return Err(self.err("expected a term"));
        }
        Ok((mono, coeff))
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let text = core::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<BigInt>().map_err(|e| PolyError::Parse {
            pos: start,
            msg: e.to_string(),
        })
    }

    fn index(&mut self) -> Result<usize, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a decimal index"));
        }
        core::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<usize>()
            .map_err(|e| PolyError::Parse { pos: start, msg: e.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn fermat_quartic() {
        let p = parse_poly("X0^4+X1^4+X2^4+X3^4", 3).unwrap();
        assert_eq!(p.bidegree(), BiDegree::new(0, 4));
        assert_eq!(p.num_terms(), 4);
    }

    #[test]
    fn pairing_polynomial() {
        let p = parse_poly("X0*Y0+X1*Y1+X2*Y2", 2).unwrap();
        assert_eq!(p.bidegree(), BiDegree::new(1, 1));
        assert_eq!(p, IntPoly::pairing(IntegerRing, 2));
    }

    #[test]
    fn rejects_inhomogeneous_input() {
        assert!(matches!(
            parse_poly("X0^2+Y0", 2),
            Err(PolyError::NotBihomogeneous { .. })
        ));
    }

    #[test]
    fn rejects_bad_variable_index() {
        assert!(matches!(
            parse_poly("X5^2", 3),
            Err(PolyError::VarIndexOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn reports_syntax_error_position() {
        match parse_poly("X0^4 + ?", 3) {
            Err(PolyError::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn signed_coefficients_and_implicit_products() {
        let p = parse_poly("-2X0^4 - X1^4 + X3^4 + 2X4^4", 4).unwrap();
        assert_eq!(p.bidegree(), BiDegree::new(0, 4));
        assert_eq!(p.num_terms(), 4);
        let q = parse_poly("- 2*X0^2*X4^2", 4).unwrap();
        assert_eq!(q.num_terms(), 1);
    }

    #[test]
    fn print_then_reparse_is_identity() {
        for (text, n) in [
            ("X0^4+X1^4+X2^4+X3^4", 3),
            ("-2X0^4-X1^4+X3^4+2X4^4", 4),
            ("7Y0^2*X1 - 3Y1*Y2*X0 + Y2^2*X2", 2),
            ("X0*Y0+X1*Y1+X2*Y2", 2),
            ("0", 2),
        ] {
            let p = parse_poly(text, n).unwrap();
            let reparsed = parse_poly(&p.to_string(), n).unwrap();
            assert_eq!(p, reparsed, "round-trip failed for {text}");
        }
    }

    #[test]
    fn repeated_variables_accumulate() {
        let p = parse_poly("X0*X0", 1).unwrap();
        assert_eq!(p, parse_poly("X0^2", 1).unwrap());
    }
}
