//! Scalar building blocks: pi, log, arctan, Catalan's constant, zeta(3).
//!
//! Each evaluator is a forward summation with an explicit tail bound folded
//! into the result's error radius, so values are usable as verification
//! oracles. pi deliberately comes from a Machin-style arctan decomposition
//! (integer series only) so it is independent of every formula under test.

use crate::exact::{big, ceil_shr, isqrt, rat, ExactError, Real};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

pub(crate) const GUARD: u32 = 64;

/// Working precision for a requested target precision.
pub(crate) fn working_bits(prec_bits: u32) -> u32 {
    prec_bits + GUARD
}

/// arctan(1/n) via the Taylor series with pure integer arithmetic.
/// Error <= (terms + 1) ulps at scale -w.
fn atan_inv_integer(n: u64, w: u32) -> Real {
    debug_assert!(n >= 2);
    let mut acc = BigInt::zero();
    let mut err_terms: u64 = 0;
    // power = 2^w / n^(2k+1), alternating / (2k+1)
    let nsq = BigUint::from(n) * BigUint::from(n);
    let mut pow = BigUint::from(n);
    let mut k = 0u64;
    loop {
        let den = &pow * BigUint::from(2 * k + 1);
        if den.bits() > w as u64 + 2 {
            break;
        }
        let term = (BigUint::one() << w).div_floor(&den);
        if k.is_multiple_of(2) {
            acc += BigInt::from_biguint(Sign::Plus, term);
        } else {
            acc -= BigInt::from_biguint(Sign::Plus, term);
        }
        err_terms += 1;
        pow *= &nsq;
        k += 1;
    }
    // tail below one ulp by the stopping rule; floors give <= 1 ulp each
    Real::new(acc, -(w as i64), big(err_terms as i64 + 2))
}

/// pi = 16 atan(1/5) - 4 atan(1/239).
pub fn pi(prec_bits: u32) -> Real {
    let w = working_bits(prec_bits);
    let a = atan_inv_integer(5, w).pow2_scale(4);
    let b = atan_inv_integer(239, w).pow2_scale(2);
    a.sub(&b)
}

/// log 2 = 2 atanh(1/3) = 2 sum 1/((2k+1) 9^k 3).
pub fn ln2(prec_bits: u32) -> Real {
    let w = working_bits(prec_bits);
    let mut acc = BigInt::zero();
    let mut err_terms: i64 = 0;
    let mut pow = BigUint::from(3u32);
    let mut k = 0u64;
    loop {
        let den = &pow * BigUint::from(2 * k + 1);
        if den.bits() > w as u64 + 2 {
            break;
        }
        acc += BigInt::from_biguint(Sign::Plus, (BigUint::one() << w).div_floor(&den));
        err_terms += 1;
        pow *= 9u32;
        k += 1;
    }
    Real::new(acc << 1, -(w as i64), big(2 * err_terms + 4))
}

/// Natural log of a provably positive real.
///
/// Range-reduces by powers of two into [sqrt(2)/2, sqrt(2)), then sums
/// 2*atanh((u-1)/(u+1)).
pub fn ln(x: &Real, prec_bits: u32) -> Result<Real, ExactError> {
    if !x.is_provably_positive() {
        return Err(ExactError::NotPositive);
    }
    let w = working_bits(prec_bits);
    // value bits ~ mantissa bits + scale
    let e: i64 = x.mantissa().bits() as i64 + x.scale_exponent();
    // u = x * 2^-e in [1/2, 1); nudge into [sqrt2/2, sqrt2) by one more bit
    let mut u = x.pow2_scale(-e);
    let mut e_adj = e;
    // if u < sqrt(2)/2 (i.e. u^2 < 1/2), shift one up
    let usq = u.mul(&u);
    if usq.to_rational() < rat(1, 2) {
        u = u.pow2_scale(1);
        e_adj -= 1;
    }
    // z = (u-1)/(u+1), |z| < 0.2
    let one = Real::one(w);
    let z = u.sub(&one).div(&u.add(&one))?;
    let zsq = z.mul(&z);
    let mut term = z.clone();
    let mut acc = Real::zero(w);
    let mut k = 0u32;
    loop {
        let contrib = term.div(&Real::from_integer(&big(2 * k as i64 + 1), w))?;
        acc = acc.add(&contrib);
        // |z| < 1/4 after reduction: tail of sum z^(2k+1)/(2k+1) below
        // |term|*z^2/(1-z^2) <= |term|/3
        if contrib.abs_upper_ulps() < big(2) {
            break;
        }
        term = term.mul(&zsq);
        k += 1;
        if k > w {
            break;
        }
    }
    let mut res = acc.pow2_scale(1);
    // tail bound: 2 ulps covers the truncated remainder at the break point
    res = res.add(&Real::new(BigInt::zero(), -(w as i64), big(4)));
    if e_adj != 0 {
        let l2 = ln2(prec_bits).mul_rational(&rat(e_adj, 1));
        res = res.add(&l2);
    }
    Ok(res)
}

/// arctan of an arbitrary real, by reciprocal and half-angle reduction.
pub fn atan(x: &Real, prec_bits: u32) -> Result<Real, ExactError> {
    let w = working_bits(prec_bits);
    let x = x.clone();
    // sign
    if x.mantissa().is_negative() {
        return Ok(atan(&x.neg(), prec_bits)?.neg());
    }
    if x.abs_upper_ulps().is_zero() {
        return Ok(Real::zero(w));
    }
    // |x| > 1: atan(x) = pi/2 - atan(1/x)
    if x.to_rational() > rat(1, 1) {
        let inv = Real::one(w).div(&x)?;
        let half_pi = pi(prec_bits).pow2_scale(-1);
        return Ok(half_pi.sub(&atan(&inv, prec_bits)?));
    }
    // halve until small: atan(z) = 2 atan(z / (1 + sqrt(1+z^2)))
    let mut z = x.aligned_to(-(w as i64));
    let mut halvings = 0u32;
    let one = Real::one(w);
    while z.to_rational() > rat(1, 16) {
        let root = one.add(&z.mul(&z)).sqrt()?;
        z = z.div(&one.add(&root))?;
        halvings += 1;
    }
    // Taylor: sum (-1)^k z^(2k+1)/(2k+1); ratio z^2 <= 2^-8
    let zsq = z.mul(&z);
    let mut term = z.clone();
    let mut acc = Real::zero(w);
    let mut k = 0u32;
    loop {
        let contrib = term.div(&Real::from_integer(&big(2 * k as i64 + 1), w))?;
        if k.is_multiple_of(2) {
            acc = acc.add(&contrib);
        } else {
            acc = acc.sub(&contrib);
        }
        if contrib.abs_upper_ulps() < big(2) {
            break;
        }
        term = term.mul(&zsq);
        k += 1;
        if k > w {
            break;
        }
    }
    // alternating series: remainder below first dropped term (< 2 ulps)
    acc = acc.add(&Real::new(BigInt::zero(), -(w as i64), big(4)));
    Ok(acc.pow2_scale(halvings as i64))
}

/// Catalan's constant by the Euler transform of sum (-1)^n/(2n+1)^2.
///
/// The difference triangle is taken over exact fixed-point mantissas, so the
/// growth of the level-n error is exactly cancelled by the 2^-(n+1) weight.
pub fn catalan(prec_bits: u32) -> Real {
    let w = working_bits(prec_bits);
    // terms needed: tail after N is <= 2^-N
    let n_terms = (w + 4) as usize;
    // a_k = floor(2^w / (2k+1)^2), one-sided error in [0,1) ulp
    let mut row: Vec<BigInt> = (0..n_terms)
        .map(|k| {
            let d = BigUint::from(2 * k as u64 + 1);
            let den = &d * &d;
            BigInt::from_biguint(Sign::Plus, (BigUint::one() << w).div_floor(&den))
        })
        .collect();
    // G = sum_n (Delta^n a)_0 / 2^(n+1), Delta a_k = a_k - a_(k+1)
    let mut acc = BigInt::zero();
    for n in 0..n_terms {
        // current row[0] is (Delta^n a)_0 with error < 2^n ulps (one-sided)
        acc += ceil_shr(&row[0], (n + 1) as u32).0;
        let len = n_terms - n - 1;
        for i in 0..len {
            row[i] = &row[i] - &row[i + 1];
        }
        row.truncate(len.max(1));
    }
    // Error: each summand floor < 1 ulp, level errors contribute <= 1/2 ulp
    // each, tail <= 2^-(n_terms) * G < 1 ulp.
    let radius = big(2 * n_terms as i64 + 2);
    Real::new(acc, -(w as i64), radius)
}

/// zeta(3) = (5/2) sum_{k>=1} (-1)^(k-1) / (k^3 C(2k,k)).
pub fn zeta3(prec_bits: u32) -> Real {
    let w = working_bits(prec_bits);
    let mut acc = BigInt::zero();
    let mut err_terms: i64 = 0;
    let mut central = BigUint::from(2u32); // C(2k,k) at k=1
    let mut k: u64 = 1;
    loop {
        let den = &central * BigUint::from(k * k * k);
        if den.bits() > w as u64 + 3 {
            break;
        }
        let term = (BigUint::one() << w).div_floor(&den);
        if k % 2 == 1 {
            acc += BigInt::from_biguint(Sign::Plus, term);
        } else {
            acc -= BigInt::from_biguint(Sign::Plus, term);
        }
        err_terms += 1;
        // C(2k+2, k+1) = C(2k,k) * 2(2k+1)/(k+1)
        central = (central * BigUint::from(2 * (2 * k + 1))).div_floor(&BigUint::from(k + 1));
        k += 1;
    }
    let val = Real::new(acc, -(w as i64), big(err_terms + 4));
    val.mul_rational(&rat(5, 2))
}

/// sqrt(n) as a Real at the working precision for `prec_bits`.
pub fn sqrt_u64(n: u64, prec_bits: u32) -> Real {
    let w = working_bits(prec_bits);
    let scaled = BigUint::from(n) << (2 * w);
    let root = isqrt(&scaled);
    let exact = &root * &root == scaled;
    Real::new(
        BigInt::from_biguint(Sign::Plus, root),
        -(w as i64),
        if exact { BigInt::zero() } else { BigInt::one() },
    )
}

/// 2^(e_num / e_den) for e_den in {1, 2}; exact for integer exponents.
pub fn pow2_half_integer(e_num: i64, e_den: i64, prec_bits: u32) -> Real {
    debug_assert!(e_den == 1 || e_den == 2);
    let w = working_bits(prec_bits);
    if e_den == 1 || e_num % 2 == 0 {
        let e = if e_den == 1 { e_num } else { e_num / 2 };
        return Real::one(w).pow2_scale(e);
    }
    // 2^(odd/2) = 2^((odd-1)/2) * sqrt(2)
    let whole = (e_num - 1).div_euclid(2);
    sqrt_u64(2, prec_bits).pow2_scale(whole)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn assert_close_to_decimal(x: &Real, s: &str) {
        let got = x.to_decimal_string((s.len() - 2) as u32);
        assert!(
            got.starts_with(&s[..s.len() - 1]),
            "expected prefix {s}, got {got}"
        );
    }

    #[test]
    fn pi_value() {
        let p = pi(128);
        assert_close_to_decimal(&p, "3.14159265358979323846264338327950288");
    }

    #[test]
    fn ln2_value() {
        let l = ln2(128);
        assert_close_to_decimal(&l, "0.69314718055994530941723212145817656");
    }

    #[test]
    fn ln_of_one_is_zero() {
        let one = Real::one(working_bits(96));
        let l = ln(&one, 96).unwrap();
        assert!(l.abs_bounded_by_pow2(-90));
    }

    #[test]
    fn ln_matches_ln2() {
        let two = Real::from_integer(&big(2), working_bits(128));
        let l = ln(&two, 128).unwrap();
        let diff = l.sub(&ln2(128));
        assert!(
            diff.abs_bounded_by_pow2(-120),
            "diff {:?}",
            diff.abs_log2_upper()
        );
    }

    #[test]
    fn atan_one_is_quarter_pi() {
        let one = Real::one(working_bits(128));
        let a = atan(&one, 128).unwrap();
        let q = pi(128).pow2_scale(-2);
        assert!(a.sub(&q).abs_bounded_by_pow2(-120));
    }

    #[test]
    fn atan_small_rational() {
        // atan(1/6) against the integer series evaluator
        let x = Real::from_rational(&rat(1, 6), working_bits(128));
        let a = atan(&x, 128).unwrap();
        let b = atan_inv_integer(6, working_bits(128));
        assert!(a.sub(&b).abs_bounded_by_pow2(-120));
    }

    #[test]
    fn catalan_value() {
        let g = catalan(128);
        assert_close_to_decimal(&g, "0.91596559417721901505460351493238411");
    }

    #[test]
    fn catalan_contains_shadow_partial_sum() {
        // crude two-sided bracket from the alternating defining series
        let g = catalan(64).to_rational();
        let mut lo = Rational::from(big(0));
        for n in 0..2000i64 {
            let t = rat(if n % 2 == 0 { 1 } else { -1 }, (2 * n + 1) * (2 * n + 1));
            lo += t;
        }
        // |G - partial| < 1/(2*2001)^2
        assert!((g - lo).abs() < rat(1, 1_000_000));
    }

    #[test]
    fn zeta3_value() {
        let z = zeta3(128);
        assert_close_to_decimal(&z, "1.20205690315959428539973816151144999");
    }

    #[test]
    fn pow2_half() {
        let r = pow2_half_integer(-1, 2, 96); // 2^(-1/2)
        let sq = r.mul(&r);
        assert!(sq
            .sub(&Real::from_rational(&rat(1, 2), working_bits(96)))
            .abs_bounded_by_pow2(-90));
        let exact = pow2_half_integer(6, 2, 96);
        assert_eq!(exact.to_rational(), rat(8, 1));
    }
}
