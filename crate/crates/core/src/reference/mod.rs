//! Independent high-precision oracles for the left-hand-side constants:
//! elementary constants, polylogarithm partial series, Clausen values,
//! Bernoulli polynomials, and the Gl closed forms. Everything here is the
//! "other computation path" P-formulas are verified against.

pub mod bernoulli;
pub mod clausen;
pub mod consts;
pub mod expr;
pub mod polylog;
pub mod trig;

pub use bernoulli::{bernoulli_number, bernoulli_poly};
pub use clausen::{cl2, cl2_real, cl3, cl_duplication_check, gl_closed, gl_closed_variant};
pub use consts::{atan, catalan, ln, ln2, pi, sqrt_u64, zeta3};
pub use expr::{parse_expr, Angle, ConstantExpr, ExprParseError};
pub use polylog::{im_li2_closed, li1_closed, polylog_series, Part};

use crate::exact::{ExactError, Real};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Parse(#[from] ExprParseError),
}

/// Evaluate an expression tree to `prec_bits` target bits.
pub fn eval_expr(e: &ConstantExpr, prec_bits: u32) -> Result<Real, RefError> {
    let w = consts::working_bits(prec_bits);
    Ok(match e {
        ConstantExpr::IntLit(n) => Real::from_integer(n, w),
        ConstantExpr::RatLit(q) => Real::from_rational(q, w),
        ConstantExpr::Pi => pi(prec_bits),
        ConstantExpr::Sqrt(n) => sqrt_u64(*n, prec_bits),
        ConstantExpr::Pow2 { num, den } => consts::pow2_half_integer(*num, *den as i64, prec_bits),
        ConstantExpr::Add(a, b) => eval_expr(a, prec_bits)?.add(&eval_expr(b, prec_bits)?),
        ConstantExpr::Neg(a) => eval_expr(a, prec_bits)?.neg(),
        ConstantExpr::Mul(a, b) => eval_expr(a, prec_bits)?.mul(&eval_expr(b, prec_bits)?),
        ConstantExpr::Div(a, b) => eval_expr(a, prec_bits)?
            .div(&eval_expr(b, prec_bits)?)
            .map_err(RefError::from)?,
        ConstantExpr::Log(a) => ln(&eval_expr(a, prec_bits)?, prec_bits)?,
        ConstantExpr::Atan(a) => atan(&eval_expr(a, prec_bits)?, prec_bits)?,
        ConstantExpr::ReLi { s, p, x } => polylog_series(Part::Re, *s, *p, x, prec_bits)?,
        ConstantExpr::ImLi { s, p, x } => polylog_series(Part::Im, *s, *p, x, prec_bits)?,
        ConstantExpr::Cl2(x) => cl2(x, prec_bits)?,
        ConstantExpr::Cl2Of(a) => cl2_real(&eval_expr(a, prec_bits)?, prec_bits)?,
        ConstantExpr::Catalan => catalan(prec_bits),
    })
}
