//! Exact arithmetic in the Gaussian rationals ℚ(i).
//!
//! Both parts are stored as reduced [`BigRational`]s, so every value has a
//! single canonical representation and equality is structural.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

pub type GQ = GaussianRational;

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den` as a real value. Panics when `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|² = re² + im².
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        let n = self.norm_sqr();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.checked_inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical literal form: `a`, `b*i`, `a+b*i`, `i`, `-i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                let im = im_part(&self.im);
                if im.starts_with('-') {
                    write!(f, "{}{}", fmt_rational(&self.re), im)
                } else {
                    write!(f, "{}+{}", fmt_rational(&self.re), im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses an unsigned `digits[/digits]` literal starting at `pos`.
fn parse_unsigned_rational(s: &[u8], pos: &mut usize) -> Result<BigRational> {
    let start = *pos;
    while *pos < s.len() && s[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::parse(start, "expected digits"));
    }
    let num: BigInt = std::str::from_utf8(&s[start..*pos]).unwrap().parse().unwrap();
    if *pos < s.len() && s[*pos] == b'/' {
        *pos += 1;
        let dstart = *pos;
        while *pos < s.len() && s[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == dstart {
            return Err(Error::parse(dstart, "expected denominator digits"));
        }
        let den: BigInt = std::str::from_utf8(&s[dstart..*pos]).unwrap().parse().unwrap();
        if den.is_zero() {
            return Err(Error::parse(dstart, "zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    Ok(BigRational::from_integer(num))
}

/// Parses one signed term: a real rational, `i`, or `q*i`.
/// Returns (value, is_imaginary).
fn parse_term(s: &[u8], pos: &mut usize, negative: bool) -> Result<(BigRational, bool)> {
    let mut value = if *pos < s.len() && s[*pos] == b'i' {
        *pos += 1;
        return Ok((if negative { -BigRational::one() } else { BigRational::one() }, true));
    } else {
        parse_unsigned_rational(s, pos)?
    };
    if negative {
        value = -value;
    }
    if *pos < s.len() && s[*pos] == b'*' {
        *pos += 1;
        if *pos < s.len() && s[*pos] == b'i' {
            *pos += 1;
            return Ok((value, true));
        }
        return Err(Error::parse(*pos, "expected 'i' after '*'"));
    }
    Ok((value, false))
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts `a`, `a+b*i`, `a-b*i`, `b*i`, `i`, `-i`, ignoring whitespace.
    /// Offsets in errors refer to the whitespace-stripped input.
    fn from_str(text: &str) -> Result<Self> {
        let s: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::parse(0, "empty literal"));
        }
        let mut pos = 0;
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        let mut seen_re = false;
        let mut seen_im = false;
        let mut first = true;
        while pos < s.len() {
            let negative = match s[pos] {
                b'-' => {
                    pos += 1;
                    true
                }
                b'+' if !first => {
                    pos += 1;
                    false
                }
                _ if first => false,
                _ => return Err(Error::parse(pos, "expected '+' or '-'")),
            };
            let at = pos;
            let (v, imaginary) = parse_term(&s, &mut pos, negative)?;
            if imaginary {
                if seen_im {
                    return Err(Error::parse(at, "duplicate imaginary part"));
                }
                seen_im = true;
                im = v;
            } else {
                if seen_re || seen_im {
                    return Err(Error::parse(at, "real part must come first"));
                }
                seen_re = true;
                re = v;
            }
            first = false;
        }
        Ok(GaussianRational::new(re, im))
    }
}

impl serde::Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        // Literals are strings; plain JSON integers are accepted as well.
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(GaussianRational::from_int(n)),
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::from_rational(&self.re * &o.re);
        }
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

/// Panics on division by zero; use [`GaussianRational::checked_div`] for a `Result`.
impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self.checked_div(o).expect("division by zero")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                <&GaussianRational as $tr>::$m(&self, &o)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &GaussianRational) -> GaussianRational {
                <&GaussianRational as $tr>::$m(&self, o)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for GaussianRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(GaussianRational::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for GaussianRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(GaussianRational::one(), |a, b| a * b)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

impl Ring for GaussianRational {
    fn zero_like(&self) -> Self {
        GaussianRational::zero()
    }
    fn one_like(&self) -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        c * self
    }
    fn try_inverse(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GQ {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let a = q("1/2+i");
        let b = q("1/2-i");
        assert_eq!(&a * &b, q("5/4"));
        assert_eq!(&GQ::i() * &GQ::i(), q("-1"));
        assert_eq!(q("3/4").checked_div(&q("1/4")).unwrap(), q("3"));
    }

    #[test]
    fn division_by_zero_is_domain_error() {
        assert!(matches!(q("1").checked_div(&GQ::zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn canonical_zero() {
        let z = &q("1/3") - &q("2/6");
        assert!(z.is_zero());
        assert_eq!(z, GQ::zero());
        assert_eq!(z.re().denom(), &BigInt::from(1));
    }

    #[test]
    fn literal_grammar() {
        assert_eq!(q(" - i "), -GQ::i());
        assert_eq!(q("i"), GQ::i());
        assert_eq!(q("2*i"), GQ::i() * GQ::from_int(2));
        assert_eq!(q("-3/4 + 5/6*i").to_string(), "-3/4+5/6*i");
        assert_eq!(q("4/8").to_string(), "1/2");
        assert_eq!(q("1-i").to_string(), "1-i");
        assert!("1/0".parse::<GQ>().is_err());
        assert!("i+1".parse::<GQ>().is_err());
        assert!("".parse::<GQ>().is_err());
        assert!("1+*i".parse::<GQ>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "7", "-7/3", "i", "-i", "2/5*i", "1+i", "-1/2-3*i"] {
            assert_eq!(q(s).to_string(), s);
            assert_eq!(q(&q(s).to_string()), q(s));
        }
    }
}
