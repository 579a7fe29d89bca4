//! Clausen sums Cl_2/Cl_3, the Gl closed forms, and the duplication check.
//!
//! Cl_2 on the pi/12 lattice goes through the identity chain where one
//! exists (pi/3 from the geometric Im Li_2 series, pi/2 from Catalan,
//! pi/6 and 5pi/6 from the two Lewin relations); the remaining lattice
//! points and all non-lattice arguments use the Bernoulli-coefficient
//! expansion of Cl_2 around zero, which converges geometrically once the
//! argument is reduced below 2.5.

use super::bernoulli::{bernoulli_number, bernoulli_poly};
use super::consts::{catalan, ln, pi, working_bits, zeta3};
use super::expr::Angle;
use super::polylog::{polylog_series, Part};
use super::RefError;
use crate::exact::{big, rat, Rational, Real};
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};

fn angle_to_real(x: &Angle, prec_bits: u32) -> Real {
    pi(prec_bits).mul_rational(x.multiplier())
}

/// Cl_2(pi/3) = (6 Im Li_2[(1/2) e^(i pi/3)] + pi log 2) / 5.
fn cl2_pi3(prec_bits: u32) -> Result<Real, RefError> {
    let s = polylog_series(Part::Im, 2, 2, &Angle::of(1, 3), prec_bits)?;
    let pl2 = pi(prec_bits).mul(&super::consts::ln2(prec_bits));
    Ok(s.mul_rational(&rat(6, 1))
        .add(&pl2)
        .mul_rational(&rat(1, 5)))
}

/// Cl_2 at a lattice angle (denominator dividing 12).
pub fn cl2(x: &Angle, prec_bits: u32) -> Result<Real, RefError> {
    let idx = x.lattice_index().ok_or_else(|| {
        RefError::Domain("cl2 lattice angle must have denominator dividing 12".into())
    })?;
    cl2_lattice_index(idx, prec_bits)
}

fn cl2_lattice_index(idx: i64, prec_bits: u32) -> Result<Real, RefError> {
    let w = working_bits(prec_bits);
    let idx = idx.rem_euclid(24);
    if idx == 0 || idx == 12 {
        return Ok(Real::zero(w));
    }
    if idx > 12 {
        return Ok(cl2_lattice_index(24 - idx, prec_bits)?.neg());
    }
    match idx {
        4 => cl2_pi3(prec_bits),
        8 => Ok(cl2_pi3(prec_bits)?.mul_rational(&rat(2, 3))),
        6 => Ok(catalan(prec_bits)),
        // Cl2(pi/6) + Cl2(5pi/6) = 4G/3 and Cl2(pi/6) - Cl2(5pi/6) = Cl2(pi/3)/2
        2 => Ok(catalan(prec_bits)
            .mul_rational(&rat(2, 3))
            .add(&cl2_pi3(prec_bits)?.mul_rational(&rat(1, 4)))),
        10 => Ok(catalan(prec_bits)
            .mul_rational(&rat(2, 3))
            .sub(&cl2_pi3(prec_bits)?.mul_rational(&rat(1, 4)))),
        _ => {
            let theta = angle_to_real(&Angle::of(idx, 12), prec_bits);
            cl2_real(&theta, prec_bits)
        }
    }
}

/// Reduce theta mod 2pi into [0, 2pi).
fn reduce_mod_2pi(theta: &Real, prec_bits: u32) -> Real {
    let two_pi = pi(prec_bits).pow2_scale(1);
    let q = theta.to_rational() / two_pi.to_rational();
    let k = q.floor().to_integer();
    if k.is_zero() {
        theta.clone()
    } else {
        theta.sub(&two_pi.mul_rational(&Rational::from(k)))
    }
}

/// Cl_2 at an arbitrary real argument.
pub fn cl2_real(theta: &Real, prec_bits: u32) -> Result<Real, RefError> {
    let t = reduce_mod_2pi(theta, prec_bits);
    let pi_v = pi(prec_bits);
    // odd symmetry: theta in (pi, 2pi) -> -Cl2(2pi - theta)
    if t.to_rational() > pi_v.to_rational() {
        let refl = pi_v.pow2_scale(1).sub(&t);
        return Ok(cl2_real_reduced(&refl, prec_bits)?.neg());
    }
    cl2_real_reduced(&t, prec_bits)
}

/// theta assumed in [0, pi] up to its radius.
fn cl2_real_reduced(theta: &Real, prec_bits: u32) -> Result<Real, RefError> {
    // 2.5 keeps the series ratio (theta/2pi)^2 <= 0.16 and lets one Lewin
    // step handle (2.5, pi] without recursion.
    if theta.to_rational() > rat(5, 2) {
        let pi_v = pi(prec_bits);
        // Cl2(t) = Cl2(pi - t) - Cl2(2pi - 2t)/2, both arguments below 2.5
        let a = pi_v.sub(theta);
        let b = pi_v.pow2_scale(1).sub(&theta.pow2_scale(1));
        let ca = cl2_series(&a, prec_bits)?;
        let cb = cl2_series(&b, prec_bits)?;
        return Ok(ca.sub(&cb.pow2_scale(-1)));
    }
    cl2_series(theta, prec_bits)
}

/// Cl2(t) = t - t log t + sum_{m>=1} (-1)^(m+1) B_2m t^(2m+1) / (2m (2m+1)!)
/// for 0 <= t <= 2.5.
fn cl2_series(theta: &Real, prec_bits: u32) -> Result<Real, RefError> {
    let w = working_bits(prec_bits);
    if !theta.is_provably_positive() {
        // near zero: |Cl2(t)| <= t (1 + |log t|) <= t * (w + 2) for t >= 2^-w
        let hi = theta.abs_upper_ulps();
        if hi.is_zero() {
            return Ok(Real::zero(w));
        }
        let bound = hi * big(w as i64 + 2);
        return Ok(Real::new(BigInt::zero(), theta.scale_exponent(), bound));
    }
    let log_t = ln(theta, prec_bits)?;
    let mut acc = theta.sub(&theta.mul(&log_t));
    let theta_sq = theta.mul(theta);
    let mut power = theta.mul(&theta_sq); // t^3
                                          // running exact coefficient pieces: (2m+1)! and B_2m
    let mut factorial: BigInt = big(6); // 3!
    let mut m: u64 = 1;
    // crude upper bound sequence: |term_m| <= 10 * 0.16^m (for t <= 2.5),
    // tracked as an exact rational to decide termination
    let mut bound = rat(10, 1);
    loop {
        bound *= rat(4, 25);
        let coeff = bernoulli_number(2 * m)
            / (Rational::from(big(2 * m as i64)) * Rational::from(factorial.clone()));
        let sign = if m % 2 == 1 { 1 } else { -1 };
        let term = power.mul_rational(&(coeff * rat(sign, 1)));
        acc = acc.add(&term);
        // stop once the uniform bound dips below one ulp; the dropped tail
        // is then below bound/(1-0.16) < 2 ulps
        let ulp_bound = &bound * Rational::from(BigInt::one() << w);
        if ulp_bound < rat(1, 1) {
            break;
        }
        power = power.mul(&theta_sq);
        factorial *= big((2 * m as i64 + 2) * (2 * m as i64 + 3));
        m += 1;
        if m > 4 * w as u64 {
            return Err(RefError::Domain("cl2 series failed to converge".into()));
        }
    }
    Ok(acc.add(&Real::new(BigInt::zero(), -(w as i64), big(2))))
}

/// Cl_3 at an arbitrary real argument:
/// Cl3(t) = zeta(3) - (3/4) t^2 + (t^2/2) log t
///          - sum_{m>=1} (-1)^(m+1) B_2m t^(2m+2) / (2m (2m+1)! (2m+2)).
pub fn cl3_real(theta: &Real, prec_bits: u32) -> Result<Real, RefError> {
    let t = reduce_mod_2pi(theta, prec_bits);
    let pi_v = pi(prec_bits);
    // even symmetry
    let t = if t.to_rational() > pi_v.to_rational() {
        pi_v.pow2_scale(1).sub(&t)
    } else {
        t
    };
    let w = working_bits(prec_bits);
    let z3 = zeta3(prec_bits);
    if !t.is_provably_positive() {
        let hi = t.abs_upper_ulps();
        if hi.is_zero() {
            return Ok(z3);
        }
        // |Cl3(t) - zeta3| <= t^2 (1 + |log t|) roughly; t <= 1 here
        let bound = &hi * &hi * big(w as i64 + 2);
        let err = Real::new(BigInt::zero(), 2 * t.scale_exponent(), bound);
        return Ok(z3.add(&err));
    }
    let t_sq = t.mul(&t);
    let log_t = ln(&t, prec_bits)?;
    let mut acc = z3
        .sub(&t_sq.mul_rational(&rat(3, 4)))
        .add(&t_sq.mul(&log_t).pow2_scale(-1));
    let mut power = t_sq.mul(&t_sq); // t^4
    let mut factorial: BigInt = big(6); // 3!
    let mut m: u64 = 1;
    // |term_m| <= 4 pi^2 (t/2pi)^(2m) / (2m (2m+1)(2m+2)) <= 40 * 0.26^m
    let mut bound = rat(40, 1);
    loop {
        bound *= rat(26, 100);
        let coeff = bernoulli_number(2 * m)
            / (Rational::from(big(2 * m as i64))
                * Rational::from(factorial.clone())
                * Rational::from(big(2 * m as i64 + 2)));
        let sign = if m % 2 == 1 { -1 } else { 1 };
        let term = power.mul_rational(&(coeff * rat(sign, 1)));
        acc = acc.add(&term);
        let ulp_bound = &bound * Rational::from(BigInt::one() << w);
        if ulp_bound < rat(1, 1) {
            break;
        }
        power = power.mul(&t_sq);
        factorial *= big((2 * m as i64 + 2) * (2 * m as i64 + 3));
        m += 1;
        if m > 4 * w as u64 {
            return Err(RefError::Domain("cl3 series failed to converge".into()));
        }
    }
    Ok(acc.add(&Real::new(BigInt::zero(), -(w as i64), big(2))))
}

/// Cl_3 on the lattice.
pub fn cl3(x: &Angle, prec_bits: u32) -> Result<Real, RefError> {
    if x.lattice_index().is_none() {
        return Err(RefError::Domain(
            "cl3 lattice angle must have denominator dividing 12".into(),
        ));
    }
    cl3_real(&angle_to_real(x, prec_bits), prec_bits)
}

/// Standard closed form Gl_2n(x) = (-1)^(n+1) (2 pi)^(2n) B_2n(x/2pi) / (2 (2n)!).
pub fn gl_closed(n: u32, x: &Angle, prec_bits: u32) -> Real {
    let half_mult = x.multiplier() / rat(2, 1);
    let b = bernoulli_poly(2 * n as u64, &half_mult);
    let mut fact = Rational::one();
    for i in 1..=(2 * n as i64) {
        fact *= rat(i, 1);
    }
    let sign = if n % 2 == 1 { rat(1, 1) } else { rat(-1, 1) };
    let coeff = sign * Rational::from(BigInt::one() << (2 * n as u64)) * b / (fact * rat(2, 1));
    pi_power(2 * n, prec_bits).mul_rational(&coeff)
}

/// An alternative normalization of the closed form that circulates for
/// Gl_2n: (-1)^(1 + floor(n/2)) 2^(n-1) pi^n B_n(x/2pi) / n!. Kept as a
/// diagnostic; it does not reduce to zeta(2n) at x = 0 (see tests).
pub fn gl_closed_variant(n: u32, x: &Angle, prec_bits: u32) -> Real {
    let half_mult = x.multiplier() / rat(2, 1);
    let b = bernoulli_poly(n as u64, &half_mult);
    let mut fact = Rational::one();
    for i in 1..=(n as i64) {
        fact *= rat(i, 1);
    }
    let sign = if (1 + n / 2).is_multiple_of(2) {
        rat(1, 1)
    } else {
        rat(-1, 1)
    };
    let two_pow = if n >= 1 {
        Rational::from(BigInt::one() << (n as u64 - 1))
    } else {
        rat(1, 2)
    };
    let coeff = sign * two_pow * b / fact;
    pi_power(n, prec_bits).mul_rational(&coeff)
}

fn pi_power(e: u32, prec_bits: u32) -> Real {
    let p = pi(prec_bits);
    let mut acc = Real::one(working_bits(prec_bits));
    for _ in 0..e {
        acc = acc.mul(&p);
    }
    acc
}

/// Direct series sum_{k=1..K} trig(kx)/k^m with K sized for `w` target
/// bits via the integral tail bound K^(1-m)/(m-1). Terms accumulate with
/// enough slack below the target scale that per-term rounding stays an
/// order below the truncation bound. `m >= 2`.
pub fn clausen_series_direct(kind: Part, m: u32, x: &Angle, w: u32) -> Result<Real, RefError> {
    let idx = x
        .lattice_index()
        .ok_or_else(|| RefError::Domain("series angle must be on the lattice".into()))?;
    assert!(m >= 2);
    // K with K^(m-1) >= 2^(w+2)
    let kk: u64 = 1 << ((w + 2).div_ceil(m - 1) as u64).min(26);
    let wi = w + 32 + kk.ilog2();
    let roots = super::trig::RootSet::at(wi);
    let scale = roots.sqrt2.scale_exponent();
    let mut sums = [
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
    ];
    for k in 1..=kk {
        let surd = match kind {
            Part::Re => super::trig::cos_surd(idx * k as i64),
            Part::Im => super::trig::sin_surd(idx * k as i64),
        };
        if surd.is_zero() {
            continue;
        }
        let den = BigInt::from(k).pow(m);
        for (i, comp) in [surd.a, surd.b, surd.c, surd.d].iter().enumerate() {
            if *comp == 0 {
                continue;
            }
            let num = big(*comp as i64) << ((-scale) as u64 - 2);
            sums[i] += num.div_floor(&den);
        }
    }
    // truncation: sum_{k>K} 1/k^m <= K^(1-m)/(m-1); rounding: <= K ulps
    let tail = {
        let kpow = BigInt::from(kk).pow(m - 1) * big(m as i64 - 1);
        (BigInt::one() << (-scale) as u64) / kpow + 1
    };
    let radius: BigInt = big(kk as i64) + tail;
    let as_real = |mm: &BigInt| Real::new(mm.clone(), scale, radius.clone());
    let mut acc = as_real(&sums[0]);
    acc = acc.add(&as_real(&sums[1]).mul(&roots.sqrt2));
    acc = acc.add(&as_real(&sums[2]).mul(&roots.sqrt3));
    acc = acc.add(&as_real(&sums[3]).mul(&roots.sqrt6));
    Ok(acc)
}

/// Check (1/m^(n-1)) Cl_n(m x) = sum_{r=0..m-1} Cl_n(x + 2 pi r / m)
/// within combined radii plus 2^-prec_bits.
pub fn cl_duplication_check(n: u32, m: u32, x: &Angle, prec_bits: u32) -> Result<bool, RefError> {
    if !(n == 2 || n == 3) {
        return Err(RefError::Domain(
            "duplication check supports n in {2,3}".into(),
        ));
    }
    let eval = |a: &Angle| -> Result<Real, RefError> {
        match n {
            2 => cl2(a, prec_bits),
            _ => cl3(a, prec_bits),
        }
    };
    let mx = Angle::new(x.multiplier() * Rational::from(big(m as i64)));
    let mut lhs = eval(&mx)?;
    let m_pow = big(m as i64).pow(n - 1);
    lhs = lhs.mul_rational(&Rational::new(BigInt::one(), m_pow));
    let mut rhs: Option<Real> = None;
    for r in 0..m {
        let shifted = Angle::new(x.multiplier() + rat(2 * r as i64, m as i64));
        let v = eval(&shifted)?;
        rhs = Some(match rhs {
            None => v,
            Some(acc) => acc.add(&v),
        });
    }
    let diff = lhs.sub(&rhs.unwrap());
    Ok(diff.abs_bounded_by_pow2(-(prec_bits as i64)))
}
