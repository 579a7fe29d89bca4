//! Expression trees for the left-hand-side constants, plus their text
//! grammar (prefix notation with named heads; rationals as `num/den`,
//! angles as `q*pi`).

use crate::exact::{big, Integer, Rational};
use num_integer::Integer as _;
use num_traits::{Signed, Zero};
use std::fmt::Write as _;
use thiserror::Error;

/// A rational multiple of pi. The multiplier is kept reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Angle(Rational);

impl Angle {
    pub fn new(multiplier: Rational) -> Angle {
        Angle(multiplier)
    }

    pub fn of(num: i64, den: i64) -> Angle {
        Angle(crate::exact::rat(num, den))
    }

    pub fn zero() -> Angle {
        Angle(Rational::zero())
    }

    pub fn multiplier(&self) -> &Rational {
        &self.0
    }

    /// Index on the 24-point lattice (multiples of pi/12), if the
    /// denominator divides 12.
    pub fn lattice_index(&self) -> Option<i64> {
        let num = self.0.numer();
        let den = self.0.denom();
        let twelve = big(12);
        if !(&twelve % den).is_zero() {
            return None;
        }
        let step = &twelve / den;
        let idx = (num * step).mod_floor(&big(24));
        i64::try_from(idx).ok()
    }

    pub fn double(&self) -> Angle {
        Angle(&self.0 * crate::exact::rat(2, 1))
    }
}

/// Evaluable expression for a mathematical constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstantExpr {
    IntLit(Integer),
    RatLit(Rational),
    Pi,
    /// sqrt of a positive integer
    Sqrt(u64),
    /// 2^(num/den) with den in {1, 2}
    Pow2 {
        num: i64,
        den: u8,
    },
    Add(Box<ConstantExpr>, Box<ConstantExpr>),
    Neg(Box<ConstantExpr>),
    Mul(Box<ConstantExpr>, Box<ConstantExpr>),
    Div(Box<ConstantExpr>, Box<ConstantExpr>),
    Log(Box<ConstantExpr>),
    Atan(Box<ConstantExpr>),
    /// Re Li_s[2^(-p/2) e^(i x)]
    ReLi {
        s: u32,
        p: u32,
        x: Angle,
    },
    /// Im Li_s[2^(-p/2) e^(i x)]
    ImLi {
        s: u32,
        p: u32,
        x: Angle,
    },
    /// Cl_2 at a lattice angle
    Cl2(Angle),
    /// Cl_2 of an arbitrary subexpression (needed for the omega-based
    /// degree-2 identities, whose arguments are not lattice angles)
    Cl2Of(Box<ConstantExpr>),
    Catalan,
}

// constructor names deliberately mirror the node names, not std::ops
#[allow(clippy::should_implement_trait)]
impl ConstantExpr {
    pub fn int(n: i64) -> ConstantExpr {
        ConstantExpr::IntLit(big(n))
    }

    pub fn ratio(num: i64, den: i64) -> ConstantExpr {
        ConstantExpr::RatLit(crate::exact::rat(num, den))
    }

    pub fn add(a: ConstantExpr, b: ConstantExpr) -> ConstantExpr {
        ConstantExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sum(terms: Vec<ConstantExpr>) -> ConstantExpr {
        let mut it = terms.into_iter();
        let first = it.next().expect("sum of no terms");
        it.fold(first, ConstantExpr::add)
    }

    pub fn neg(e: ConstantExpr) -> ConstantExpr {
        ConstantExpr::Neg(Box::new(e))
    }

    pub fn sub(a: ConstantExpr, b: ConstantExpr) -> ConstantExpr {
        ConstantExpr::add(a, ConstantExpr::neg(b))
    }

    pub fn mul(a: ConstantExpr, b: ConstantExpr) -> ConstantExpr {
        ConstantExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: ConstantExpr, b: ConstantExpr) -> ConstantExpr {
        ConstantExpr::Div(Box::new(a), Box::new(b))
    }

    pub fn log(e: ConstantExpr) -> ConstantExpr {
        ConstantExpr::Log(Box::new(e))
    }

    pub fn atan(e: ConstantExpr) -> ConstantExpr {
        ConstantExpr::Atan(Box::new(e))
    }

    pub fn cl2x(e: ConstantExpr) -> ConstantExpr {
        ConstantExpr::Cl2Of(Box::new(e))
    }

    pub fn pow2(num: i64) -> ConstantExpr {
        ConstantExpr::Pow2 { num, den: 1 }
    }

    pub fn pow2_half(num: i64) -> ConstantExpr {
        if num % 2 == 0 {
            ConstantExpr::Pow2 {
                num: num / 2,
                den: 1,
            }
        } else {
            ConstantExpr::Pow2 { num, den: 2 }
        }
    }

    /// Canonical text form.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            ConstantExpr::IntLit(n) => {
                let _ = write!(out, "int({n})");
            }
            ConstantExpr::RatLit(q) => {
                let _ = write!(out, "rat({}/{})", q.numer(), q.denom());
            }
            ConstantExpr::Pi => out.push_str("pi"),
            ConstantExpr::Sqrt(n) => {
                let _ = write!(out, "sqrt({n})");
            }
            ConstantExpr::Pow2 { num, den } => {
                if *den == 1 {
                    let _ = write!(out, "pow2({num})");
                } else {
                    let _ = write!(out, "pow2({num}/2)");
                }
            }
            ConstantExpr::Add(a, b) => {
                out.push_str("add(");
                a.write(out);
                out.push(',');
                b.write(out);
                out.push(')');
            }
            ConstantExpr::Neg(e) => {
                out.push_str("neg(");
                e.write(out);
                out.push(')');
            }
            ConstantExpr::Mul(a, b) => {
                out.push_str("mul(");
                a.write(out);
                out.push(',');
                b.write(out);
                out.push(')');
            }
            ConstantExpr::Div(a, b) => {
                out.push_str("div(");
                a.write(out);
                out.push(',');
                b.write(out);
                out.push(')');
            }
            ConstantExpr::Log(e) => {
                out.push_str("log(");
                e.write(out);
                out.push(')');
            }
            ConstantExpr::Atan(e) => {
                out.push_str("atan(");
                e.write(out);
                out.push(')');
            }
            ConstantExpr::ReLi { s, p, x } => {
                let _ = write!(out, "reli({s},{p},{})", angle_text(x));
            }
            ConstantExpr::ImLi { s, p, x } => {
                let _ = write!(out, "imli({s},{p},{})", angle_text(x));
            }
            ConstantExpr::Cl2(x) => {
                let _ = write!(out, "cl2({})", angle_text(x));
            }
            ConstantExpr::Cl2Of(e) => {
                out.push_str("cl2x(");
                e.write(out);
                out.push(')');
            }
            ConstantExpr::Catalan => out.push_str("catalan"),
        }
    }
}

fn angle_text(x: &Angle) -> String {
    let q = x.multiplier();
    if q.is_zero() {
        "0".to_string()
    } else if q.denom() == &big(1) {
        format!("{}*pi", q.numer())
    } else {
        format!("{}/{}*pi", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expression parse error at byte {pos}: {msg}")]
pub struct ExprParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprParseError> {
        Err(ExprParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprParseError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn integer(&mut self) -> Result<Integer, ExprParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && self.src[start] == b'-') {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<Integer>().map_err(|e| ExprParseError {
            pos: start,
            msg: e.to_string(),
        })
    }

    fn small_uint(&mut self) -> Result<u64, ExprParseError> {
        let n = self.integer()?;
        u64::try_from(n).or_else(|_| self.err("expected small nonnegative integer"))
    }

    fn rational(&mut self) -> Result<Rational, ExprParseError> {
        let num = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if !den.is_positive() {
                return self.err("denominator must be positive");
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from(num))
        }
    }

    fn angle(&mut self) -> Result<Angle, ExprParseError> {
        self.skip_ws();
        // "0" | "q*pi"
        let save = self.pos;
        let q = self.rational()?;
        if q.is_zero() && self.peek() != Some(b'*') {
            return Ok(Angle::zero());
        }
        if self.expect(b'*').is_err() {
            self.pos = save;
            return self.err("expected '*pi' in angle");
        }
        let head = self.ident();
        if head != "pi" {
            return self.err("expected 'pi' in angle");
        }
        Ok(Angle::new(q))
    }

    fn expr(&mut self) -> Result<ConstantExpr, ExprParseError> {
        self.skip_ws();
        let head_pos = self.pos;
        let head = self.ident();
        match head.as_str() {
            "pi" => Ok(ConstantExpr::Pi),
            "catalan" => Ok(ConstantExpr::Catalan),
            "int" => {
                self.expect(b'(')?;
                let n = self.integer()?;
                self.expect(b')')?;
                Ok(ConstantExpr::IntLit(n))
            }
            "rat" => {
                self.expect(b'(')?;
                let q = self.rational()?;
                self.expect(b')')?;
                Ok(ConstantExpr::RatLit(q))
            }
            "sqrt" => {
                self.expect(b'(')?;
                let n = self.small_uint()?;
                self.expect(b')')?;
                if n == 0 {
                    return self.err("sqrt argument must be positive");
                }
                Ok(ConstantExpr::Sqrt(n))
            }
            "pow2" => {
                self.expect(b'(')?;
                let num = self.integer()?;
                let num = i64::try_from(num).or_else(|_| self.err("pow2 exponent too large"))?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.small_uint()?;
                    if d != 2 {
                        return self.err("pow2 denominator must be 2");
                    }
                    2u8
                } else {
                    1u8
                };
                self.expect(b')')?;
                Ok(ConstantExpr::Pow2 { num, den })
            }
            "add" | "mul" | "div" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                Ok(match head.as_str() {
                    "add" => ConstantExpr::add(a, b),
                    "mul" => ConstantExpr::mul(a, b),
                    _ => ConstantExpr::div(a, b),
                })
            }
            "neg" | "log" | "atan" | "cl2x" => {
                self.expect(b'(')?;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(match head.as_str() {
                    "neg" => ConstantExpr::neg(e),
                    "log" => ConstantExpr::log(e),
                    "atan" => ConstantExpr::atan(e),
                    _ => ConstantExpr::cl2x(e),
                })
            }
            "reli" | "imli" => {
                self.expect(b'(')?;
                let s = self.small_uint()? as u32;
                self.expect(b',')?;
                let p = self.small_uint()? as u32;
                self.expect(b',')?;
                let x = self.angle()?;
                self.expect(b')')?;
                if s == 0 || p == 0 {
                    return self.err("li orders must be positive");
                }
                Ok(if head == "reli" {
                    ConstantExpr::ReLi { s, p, x }
                } else {
                    ConstantExpr::ImLi { s, p, x }
                })
            }
            "cl2" => {
                self.expect(b'(')?;
                let x = self.angle()?;
                self.expect(b')')?;
                Ok(ConstantExpr::Cl2(x))
            }
            _ => Err(ExprParseError {
                pos: head_pos,
                msg: format!("unknown head '{head}'"),
            }),
        }
    }
}

/// Parse the canonical text form back into a tree.
pub fn parse_expr(text: &str) -> Result<ConstantExpr, ExprParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_simple() {
        let exprs = [
            ConstantExpr::Pi,
            ConstantExpr::Catalan,
            ConstantExpr::int(-17),
            ConstantExpr::ratio(9, 4096),
            ConstantExpr::Sqrt(3),
            ConstantExpr::pow2_half(-3),
            ConstantExpr::mul(ConstantExpr::Pi, ConstantExpr::Sqrt(3)),
            ConstantExpr::atan(ConstantExpr::ratio(1, 6)),
            ConstantExpr::ImLi {
                s: 2,
                p: 2,
                x: Angle::of(1, 3),
            },
            ConstantExpr::Cl2(Angle::of(1, 3)),
            ConstantExpr::cl2x(ConstantExpr::mul(
                ConstantExpr::int(2),
                ConstantExpr::atan(ConstantExpr::ratio(1, 5)),
            )),
        ];
        for e in exprs {
            let text = e.serialize();
            let back = parse_expr(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
            assert_eq!(back, e, "{text}");
        }
    }

    #[test]
    fn parse_reports_position() {
        let err = parse_expr("mul(pi,bogus(3))").unwrap_err();
        assert_eq!(err.pos, 7);
        let err2 = parse_expr("add(pi pi)").unwrap_err();
        assert!(err2.pos >= 6);
    }

    #[test]
    fn whitespace_tolerated() {
        let e = parse_expr(" mul( pi , sqrt( 3 ) ) ").unwrap();
        assert_eq!(
            e,
            ConstantExpr::mul(ConstantExpr::Pi, ConstantExpr::Sqrt(3))
        );
    }

    #[test]
    fn lattice_index() {
        assert_eq!(Angle::of(1, 12).lattice_index(), Some(1));
        assert_eq!(Angle::of(7, 12).lattice_index(), Some(7));
        assert_eq!(Angle::of(1, 3).lattice_index(), Some(4));
        assert_eq!(Angle::of(-1, 12).lattice_index(), Some(23));
        assert_eq!(Angle::of(1, 8).lattice_index(), None);
    }
}
