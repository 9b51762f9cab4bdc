//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' digits)?
//! atom  := 'x' | 'y' | 'X' | 'Y' | 'i' | digits ('/' digits)? | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::NCPolynomial;
use crate::error::{Error, Result};
use crate::scalar::GQ;

const MAX_EXPONENT: usize = 64;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn is_minus(c: char) -> bool {
        c == '-' || c == '\u{2212}'
    }

    fn expr(&mut self) -> Result<NCPolynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(c) if Self::is_minus(c) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NCPolynomial> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.bump();
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<NCPolynomial> {
        match self.peek() {
            Some(c) if Self::is_minus(c) => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<NCPolynomial> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.bump();
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(Error::parse(start, "expected a nonnegative integer exponent"));
        }
        let k: usize = digits
            .parse()
            .ok()
            .filter(|&k| k <= MAX_EXPONENT)
            .ok_or_else(|| Error::parse(start, format!("exponent must be at most {MAX_EXPONENT}")))?;
        Ok(base.pow(k))
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<NCPolynomial> {
        self.skip_ws();
        let start = self.pos;
        match self.peek_raw() {
            Some('x' | 'X') => {
                self.pos += 1;
                Ok(NCPolynomial::x())
            }
            Some('y' | 'Y') => {
                self.pos += 1;
                Ok(NCPolynomial::y())
            }
            Some('i') => {
                self.pos += 1;
                Ok(NCPolynomial::constant(GQ::i()))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("ascii digits");
                let mut den = BigInt::from(1);
                if self.peek_raw() == Some('/') {
                    self.pos += 1;
                    let dstart = self.pos;
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(Error::parse(dstart, "expected a denominator"));
                    }
                    den = d.parse().expect("ascii digits");
                    if den == BigInt::from(0) {
                        return Err(Error::parse(dstart, "zero denominator"));
                    }
                }
                Ok(NCPolynomial::constant(GQ::from_rational(BigRational::new(num, den))))
            }
            Some(c) => Err(Error::parse(start, format!("unexpected character '{c}'"))),
            None => Err(Error::parse(start, "unexpected end of input")),
        }
    }
}

/// Parses an expression such as `i*(x*y - y*x)` into canonical form.
pub fn parse_poly(text: &str) -> Result<NCPolynomial> {
    let mut p = Parser { src: text, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(out)
}

impl std::str::FromStr for NCPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::Word;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn commutator() {
        let p = parse_poly("i*(x*y - y*x)").unwrap();
        let expected = NCPolynomial::from_terms([(w("XY"), GQ::i()), (w("YX"), -GQ::i())]);
        assert_eq!(p, expected);
    }

    #[test]
    fn monomial_with_powers() {
        assert_eq!(parse_poly("x^3*y^2*x").unwrap(), NCPolynomial::word(w("XXXYYX")));
    }

    #[test]
    fn binomial_square_is_noncommutative() {
        let p = parse_poly("(x+y)^2").unwrap();
        let expected = NCPolynomial::from_terms(["XX", "XY", "YX", "YY"].map(|s| (w(s), GQ::one())));
        assert_eq!(p, expected);
    }

    #[test]
    fn scalars_and_unary_minus() {
        let p = parse_poly("-1/2*x + 3 - -y").unwrap();
        let expected =
            NCPolynomial::from_terms([(w("X"), GQ::frac(-1, 2)), (w(""), GQ::from_int(3)), (w("Y"), GQ::one())]);
        assert_eq!(p, expected);
        assert_eq!(parse_poly("x^0").unwrap(), NCPolynomial::one());
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse_poly("x + * y"), Err(Error::parse(4, "unexpected character '*'")));
        assert!(matches!(parse_poly("(x+y"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(parse_poly("x y"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_poly("x^"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_poly("1/0"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_poly("z"), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_poly(""), Err(Error::Parse { offset: 0, .. })));
    }

    #[test]
    fn printer_output_parses_back() {
        for s in ["i*(x*y - y*x)", "(1+i)*x*y^2 - 1/3", "(x - 2*y)^3 + i", "0", "-x"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p, "{s}");
        }
    }
}
