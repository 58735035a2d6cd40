//! Ket-expression parser and serializer.
//!
//! Grammar (whitespace allowed between tokens):
//!
//! ```text
//! state   := ['+'|'-'] term (('+'|'-') term)*
//! term    := [coeff] '|' bit+ '>'
//! coeff   := number | number '/' number | number '/sqrt(' integer ')'
//!          | '(' number ',' number ')'                # (re, im)
//! number  := optionally signed decimal or integer
//! ```
//!
//! As an extension, the components of a complex pair may themselves be
//! ratios, e.g. `(1/3,-2/5)|01>`; this keeps serialization of exact states
//! inside the accepted language. Decimals and ratios are read exactly, so
//! the result is exact unless a coefficient uses a non-square `sqrt`
//! radicand. Parsing is scale-free: normalization is never enforced.

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::state::{AnyState, PureState, MAX_QUBITS};
use num::{BigInt, BigRational, Complex, One, Signed, Zero};

#[derive(Clone, Debug)]
enum RawCoeff {
    One,
    Rational(BigRational),
    Pair(BigRational, BigRational),
    /// num / sqrt(rad); exact only when rad is a perfect square.
    OverSqrt(BigRational, u64),
}

impl RawCoeff {
    fn exact_value(&self) -> Option<Complex<BigRational>> {
        match self {
            RawCoeff::One => Some(Complex::one()),
            RawCoeff::Rational(r) => Some(Complex::new(r.clone(), BigRational::zero())),
            RawCoeff::Pair(re, im) => Some(Complex::new(re.clone(), im.clone())),
            RawCoeff::OverSqrt(num, rad) => {
                let root = integer_sqrt(*rad)?;
                let den = BigRational::from_integer(BigInt::from(root));
                Some(Complex::new(num.clone() / den, BigRational::zero()))
            }
        }
    }

    fn float_value(&self) -> Complex<f64> {
        match self {
            RawCoeff::One => Complex::new(1.0, 0.0),
            RawCoeff::Rational(r) => Complex::new(r.to_f64(), 0.0),
            RawCoeff::Pair(re, im) => Complex::new(re.to_f64(), im.to_f64()),
            RawCoeff::OverSqrt(num, rad) => {
                Complex::new(num.to_f64() / (*rad as f64).sqrt(), 0.0)
            }
        }
    }
}

fn integer_sqrt(v: u64) -> Option<u64> {
    let guess = (v as f64).sqrt().round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|r| r.checked_mul(*r) == Some(v))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8, what: &str) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    /// `number := optionally signed decimal or integer`, read exactly.
    fn number(&mut self) -> Result<BigRational> {
        self.skip_ws();
        let start = self.pos;
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut digits = String::new();
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            digits.push(self.src[self.pos] as char);
            self.pos += 1;
        }
        let mut frac = String::new();
        if self.eat(b'.') {
            while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                frac.push(self.src[self.pos] as char);
                self.pos += 1;
            }
        }
        if digits.is_empty() && frac.is_empty() {
            self.pos = start;
            return self.err("expected a number");
        }
        let mut exp: i64 = 0;
        if self.peek() == Some(b'e') || self.peek() == Some(b'E') {
            let save = self.pos;
            self.pos += 1;
            let exp_neg = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            let mut exp_digits = String::new();
            while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                exp_digits.push(self.src[self.pos] as char);
                self.pos += 1;
            }
            if exp_digits.is_empty() {
                // Not an exponent after all (e.g. stray 'e'); back off.
                self.pos = save;
            } else {
                exp = exp_digits
                    .parse::<i64>()
                    .ok()
                    .filter(|e| *e <= 340)
                    .map(|e| if exp_neg { -e } else { e })
                    .ok_or(Error::Parse {
                        pos: save,
                        msg: "exponent out of range".into(),
                    })?;
            }
        }
        let mantissa: BigInt = format!("{digits}{frac}").parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "invalid number".into(),
        })?;
        let scale = frac.len() as i64 - exp;
        let mut value = BigRational::from_integer(mantissa);
        if scale > 0 {
            value /= BigRational::from_integer(BigInt::from(10).pow(scale as u32));
        } else if scale < 0 {
            value *= BigRational::from_integer(BigInt::from(10).pow((-scale) as u32));
        }
        if negative {
            value = -value;
        }
        Ok(value)
    }

    fn unsigned_integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let mut digits = String::new();
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            digits.push(self.src[self.pos] as char);
            self.pos += 1;
        }
        if digits.is_empty() {
            return self.err("expected an integer");
        }
        digits.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "integer out of range".into(),
        })
    }

    /// A ratio is `number ['/' number]`, where '/' must not begin `sqrt(`.
    fn ratio(&mut self) -> Result<BigRational> {
        let num = self.number()?;
        if self.peek() == Some(b'/') && !self.src[self.pos..].starts_with(b"/sqrt(") {
            self.pos += 1;
            let den_pos = self.pos;
            let den = self.number()?;
            if den.is_zero() {
                return Err(Error::Parse {
                    pos: den_pos,
                    msg: "division by zero".into(),
                });
            }
            return Ok(num / den);
        }
        Ok(num)
    }

    fn coeff(&mut self) -> Result<RawCoeff> {
        self.skip_ws();
        if self.eat(b'(') {
            let re = self.ratio()?;
            self.skip_ws();
            self.expect(b',', "',' in complex pair")?;
            let im = self.ratio()?;
            self.skip_ws();
            self.expect(b')', "')' closing complex pair")?;
            return Ok(RawCoeff::Pair(re, im));
        }
        let num = self.number()?;
        if self.src[self.pos..].starts_with(b"/sqrt(") {
            self.pos += b"/sqrt(".len();
            let rad_pos = self.pos;
            let rad = self.unsigned_integer()?;
            if rad == 0 {
                return Err(Error::Parse {
                    pos: rad_pos,
                    msg: "sqrt radicand must be positive".into(),
                });
            }
            self.skip_ws();
            self.expect(b')', "')' closing sqrt")?;
            return Ok(RawCoeff::OverSqrt(num, rad));
        }
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den_pos = self.pos;
            let den = self.number()?;
            if den.is_zero() {
                return Err(Error::Parse {
                    pos: den_pos,
                    msg: "division by zero".into(),
                });
            }
            return Ok(RawCoeff::Rational(num / den));
        }
        Ok(RawCoeff::Rational(num))
    }

    fn ket(&mut self) -> Result<(u64, usize)> {
        self.expect(b'|', "'|' opening a ket")?;
        let mut bits = 0u64;
        let mut width = 0usize;
        loop {
            match self.peek() {
                Some(b'0') => bits <<= 1,
                Some(b'1') => bits = (bits << 1) | 1,
                Some(b'>') => break,
                Some(other) => {
                    return self.err(format!(
                        "expected '0', '1', or '>' in ket, found {:?}",
                        other as char
                    ));
                }
                None => return self.err("unterminated ket"),
            }
            self.pos += 1;
            width += 1;
            if width > MAX_QUBITS {
                return Err(Error::TooManyQubits {
                    n: width,
                    max: MAX_QUBITS,
                });
            }
        }
        self.expect(b'>', "'>' closing a ket")?;
        if width == 0 {
            return self.err("ket must contain at least one bit");
        }
        Ok((bits, width))
    }

    fn term(&mut self) -> Result<(RawCoeff, u64, usize)> {
        self.skip_ws();
        let coeff = if self.peek() == Some(b'|') {
            RawCoeff::One
        } else {
            self.coeff()?
        };
        self.skip_ws();
        let (bits, width) = self.ket()?;
        Ok((coeff, bits, width))
    }
}

/// Parse a ket expression. The result is exact iff every coefficient is
/// Gaussian-rational; otherwise it is a float state.
pub fn parse_state(text: &str) -> Result<AnyState> {
    let mut p = Parser::new(text);
    let mut terms: Vec<(i8, RawCoeff, u64)> = Vec::new();
    let mut n: Option<usize> = None;

    p.skip_ws();
    if p.peek().is_none() {
        return p.err("empty input");
    }
    let mut sign: i8 = 1;
    if p.eat(b'-') {
        sign = -1;
    } else {
        p.eat(b'+');
    }
    loop {
        let term_pos = p.pos;
        let (coeff, bits, width) = p.term()?;
        match n {
            None => n = Some(width),
            Some(prev) if prev != width => {
                return Err(Error::Parse {
                    pos: term_pos,
                    msg: format!("inconsistent ket lengths: {prev} then {width}"),
                });
            }
            _ => {}
        }
        terms.push((sign, coeff, bits));
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => {
                sign = 1;
                p.pos += 1;
            }
            Some(b'-') => {
                sign = -1;
                p.pos += 1;
            }
            Some(other) => {
                return p.err(format!(
                    "expected '+', '-', or end of input, found {:?}",
                    other as char
                ));
            }
        }
    }

    let n = n.expect("at least one term parsed");
    let exact = terms.iter().all(|(_, c, _)| c.exact_value().is_some());
    if exact {
        let amps = terms.iter().map(|(sign, c, bits)| {
            let mut z = c.exact_value().expect("checked exact");
            if *sign < 0 {
                z = -z;
            }
            (*bits, z)
        });
        Ok(AnyState::Exact(PureState::from_amplitudes(n, amps)?))
    } else {
        let amps = terms.iter().map(|(sign, c, bits)| {
            let z = c.float_value();
            (*bits, if *sign < 0 { -z } else { z })
        });
        Ok(AnyState::Float(PureState::from_amplitudes(n, amps)?))
    }
}

/// Parse a standalone rational such as "3", "-2/5", or "0.25".
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let mut p = Parser::new(text);
    let value = p.ratio()?;
    p.skip_ws();
    if p.peek().is_some() {
        return p.err("trailing characters after number");
    }
    Ok(value)
}

fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn bitstring(bits: u64, n: usize) -> String {
    (1..=n)
        .map(|j| if super::bit_of(bits, j, n) == 1 { '1' } else { '0' })
        .collect()
}

/// Render an exact state in the ket grammar; reparsing reproduces the
/// amplitude table exactly.
pub fn ket_string_exact(state: &PureState<BigRational>) -> String {
    let n = state.n();
    let mut out = String::new();
    for (idx, z) in state.iter() {
        let ket = format!("|{}>", bitstring(idx, n));
        let (piece, negative) = if z.im.is_zero() {
            let mag = z.re.abs();
            let coeff = if mag.is_one() {
                String::new()
            } else {
                rational_str(&mag)
            };
            (format!("{coeff}{ket}"), z.re.is_negative())
        } else {
            (
                format!("({},{}){ket}", rational_str(&z.re), rational_str(&z.im)),
                false,
            )
        };
        if out.is_empty() {
            if negative {
                // The grammar needs a signed number here, not a bare '-'.
                if piece.starts_with('|') {
                    out.push_str("-1");
                } else {
                    out.push('-');
                }
            }
            out.push_str(&piece);
        } else {
            out.push_str(if negative { " - " } else { " + " });
            out.push_str(&piece);
        }
    }
    out
}

/// Render a float state in the ket grammar with shortest round-tripping
/// decimal coefficients.
pub fn ket_string_float(state: &PureState<f64>) -> String {
    let n = state.n();
    let mut out = String::new();
    for (idx, z) in state.iter() {
        let ket = format!("|{}>", bitstring(idx, n));
        let (piece, negative) = if z.im == 0.0 {
            let mag = z.re.abs();
            let coeff = if mag == 1.0 {
                String::new()
            } else {
                format!("{mag}")
            };
            (format!("{coeff}{ket}"), z.re < 0.0)
        } else {
            (format!("({},{}){ket}", z.re, z.im), false)
        };
        if out.is_empty() {
            if negative {
                if piece.starts_with('|') {
                    out.push_str("-1");
                } else {
                    out.push('-');
                }
            }
            out.push_str(&piece);
        } else {
            out.push_str(if negative { " - " } else { " + " });
            out.push_str(&piece);
        }
    }
    out
}

/// Render either mode.
pub fn ket_string(state: &AnyState) -> String {
    match state {
        AnyState::Exact(s) => ket_string_exact(s),
        AnyState::Float(s) => ket_string_float(s),
    }
}
