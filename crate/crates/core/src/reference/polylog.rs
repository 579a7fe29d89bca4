//! Polylogarithm partial series on the pi/12 angle lattice with modulus
//! q = 2^(-p/2), plus the degree-1 and degree-2 closed forms.
//!
//! Series terms are accumulated as four exact integer sums (the rational
//! part and the sqrt2/sqrt3/sqrt6 components), so each term costs integer
//! shifts and divisions only; the square roots multiply in once at the end.

use super::consts::working_bits;
use super::expr::{Angle, ConstantExpr};
use super::trig::{cos_surd, sin_surd, RootSet, SurdQ4};
use super::RefError;
use crate::exact::{big, Real};
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::Zero;

/// Which part of Li_s to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// sum_{k>=1} q^k cos(kx)/k^s (Re) or with sin (Im), for q = 2^(-p/2) and
/// x a lattice angle. Tail bound q^(K+1) / ((K+1)^s (1-q)) folded into the
/// radius.
pub fn polylog_series(
    part: Part,
    s: u32,
    p: u32,
    x: &Angle,
    prec_bits: u32,
) -> Result<Real, RefError> {
    if s == 0 || p == 0 {
        return Err(RefError::Domain("polylog orders must be positive".into()));
    }
    let idx = x
        .lattice_index()
        .ok_or_else(|| RefError::Domain("angle denominator must divide 12".into()))?;
    let w = working_bits(prec_bits);

    let mut sums = [
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
    ];
    let mut floors: u64 = 0;
    let mut k: u64 = 1;
    loop {
        // exponent of the dyadic part of q^k; odd p*k leaves a sqrt2 factor
        let e_num = (p as u64) * k;
        let dyadic = e_num.div_ceil(2);
        if dyadic > (w + 3) as u64 {
            break;
        }
        let surd = match part {
            Part::Re => cos_surd(idx * k as i64),
            Part::Im => sin_surd(idx * k as i64),
        };
        let surd = if e_num % 2 == 1 {
            surd.mul_sqrt2()
        } else {
            surd
        };
        if !surd.is_zero() {
            // each component: comp * 2^(w - dyadic - 2) / k^s  (the -2 is /4)
            let shift = w as i64 - dyadic as i64 - 2;
            let den = BigInt::from(k).pow(s);
            for (i, comp) in [surd.a, surd.b, surd.c, surd.d].iter().enumerate() {
                if *comp == 0 {
                    continue;
                }
                let num = if shift >= 0 {
                    big(*comp as i64) << shift as u64
                } else {
                    // negative shift folds into the denominator
                    big(*comp as i64)
                };
                let den = if shift >= 0 {
                    den.clone()
                } else {
                    &den << (-shift) as u64
                };
                sums[i] += num.div_floor(&den);
                floors += 1;
            }
        }
        k += 1;
    }
    // value tail: sum_{j>k} q^j / j^s <= q^(k+1) / ((k+1)^s (1-q)) < 4 ulps
    // by the stopping rule (dyadic > w+3 ⇒ q^(k+1) <= 2^-(w+3), 1/(1-q) <= 3.5)
    let per_component_err = big(floors as i64 + 4);
    let roots = RootSet::at(prec_bits);
    let scale = -(w as i64);
    let as_real = |m: &BigInt| Real::new(m.clone(), scale, per_component_err.clone());
    let mut acc = as_real(&sums[0]);
    acc = acc.add(&as_real(&sums[1]).mul(&roots.sqrt2));
    acc = acc.add(&as_real(&sums[2]).mul(&roots.sqrt3));
    acc = acc.add(&as_real(&sums[3]).mul(&roots.sqrt6));
    Ok(acc)
}

/// Expression for `(a + b sqrt2 + c sqrt3 + d sqrt6)/4`.
fn surd_expr(s: &SurdQ4) -> ConstantExpr {
    let mut terms = Vec::new();
    if s.a != 0 {
        terms.push(ConstantExpr::int(s.a as i64));
    }
    for (comp, root) in [(s.b, 2u64), (s.c, 3), (s.d, 6)] {
        if comp != 0 {
            terms.push(ConstantExpr::mul(
                ConstantExpr::int(comp as i64),
                ConstantExpr::Sqrt(root),
            ));
        }
    }
    if terms.is_empty() {
        return ConstantExpr::int(0);
    }
    ConstantExpr::mul(ConstantExpr::ratio(1, 4), ConstantExpr::sum(terms))
}

/// Elementary closed form of Li_1:
/// Im -> arctan(q sin x / (1 - q cos x)), Re -> -1/2 log(1 - 2 q cos x + q^2).
pub fn li1_closed(part: Part, p: u32, x: &Angle) -> Result<ConstantExpr, RefError> {
    if p == 0 {
        return Err(RefError::Domain("modulus exponent p must be positive".into()));
    }
    let idx = x
        .lattice_index()
        .ok_or_else(|| RefError::Domain("angle denominator must divide 12".into()))?;
    let q = ConstantExpr::pow2_half(-(p as i64));
    let cos = surd_expr(&cos_surd(idx));
    let sin = surd_expr(&sin_surd(idx));
    Ok(match part {
        Part::Im => ConstantExpr::atan(ConstantExpr::div(
            ConstantExpr::mul(q.clone(), sin),
            ConstantExpr::sub(ConstantExpr::int(1), ConstantExpr::mul(q, cos)),
        )),
        Part::Re => ConstantExpr::mul(
            ConstantExpr::ratio(-1, 2),
            ConstantExpr::log(ConstantExpr::sum(vec![
                ConstantExpr::int(1),
                ConstantExpr::neg(ConstantExpr::mul(
                    ConstantExpr::int(2),
                    ConstantExpr::mul(q, cos),
                )),
                ConstantExpr::pow2(-(p as i64)),
            ])),
        ),
    })
}

/// The four-term closed form of Im Li_2[q e^(ix)]:
/// omega*log q + Cl2(2 omega)/2 - Cl2(2 omega + 2x)/2 + Cl2(2x)/2,
/// with omega = arctan(q sin x / (1 - q cos x)).
pub fn im_li2_closed(p: u32, x: &Angle) -> Result<ConstantExpr, RefError> {
    if p == 0 {
        // q = 1 would put omega's denominator through zero at x = 0
        return Err(RefError::Domain("modulus exponent p must be positive".into()));
    }
    let idx = x
        .lattice_index()
        .ok_or_else(|| RefError::Domain("angle denominator must divide 12".into()))?;
    let q = ConstantExpr::pow2_half(-(p as i64));
    let cos = surd_expr(&cos_surd(idx));
    let sin = surd_expr(&sin_surd(idx));
    let omega = ConstantExpr::atan(ConstantExpr::div(
        ConstantExpr::mul(q.clone(), sin),
        ConstantExpr::sub(ConstantExpr::int(1), ConstantExpr::mul(q.clone(), cos)),
    ));
    let two_omega = ConstantExpr::mul(ConstantExpr::int(2), omega.clone());
    let half = ConstantExpr::ratio(1, 2);
    let two_x = x.double();
    let two_x_expr = ConstantExpr::mul(
        ConstantExpr::RatLit(two_x.multiplier().clone()),
        ConstantExpr::Pi,
    );
    Ok(ConstantExpr::sum(vec![
        ConstantExpr::mul(omega, ConstantExpr::log(q)),
        ConstantExpr::mul(half.clone(), ConstantExpr::cl2x(two_omega.clone())),
        ConstantExpr::neg(ConstantExpr::mul(
            half.clone(),
            ConstantExpr::cl2x(ConstantExpr::add(two_omega, two_x_expr)),
        )),
        ConstantExpr::mul(half, ConstantExpr::Cl2(two_x)),
    ]))
}
