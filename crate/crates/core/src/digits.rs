//! BBP digit extraction: hex digits of `scale * sqrt3^t * P` starting at an
//! arbitrary bit offset, without computing earlier digits, via modular
//! exponentiation of 2.
//!
//! Head terms (nonnegative exponent of 2) are reduced per-term modulo
//! `den * (kl+j)^s`; everything accumulates in one signed fixed-point
//! register that is reduced to [0, 1) only at the end. Rational scales fold
//! their odd denominator into the modulus; a sqrt(3) prefactor has no local
//! structure to exploit, so that path evaluates the leading segment at full
//! precision and multiplies the scale in (see `extract_constant`).

use crate::exact::{big, Integer, Real};
use crate::pformula::{eval_p, PFormula, ScaledFormula};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigitsError {
    #[error("carry ambiguity: accumulated error could flip a reported digit (margin {margin} bits); retry with more guard bits")]
    CarryAmbiguity { margin: i64 },
    #[error("invalid digit request: {0}")]
    Invalid(String),
}

/// Result of a digit extraction run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitRun {
    pub bit_offset: u64,
    pub hex_digits: String,
    /// Bits of slack between the accumulated error bound and the nearest
    /// carry boundary. Runs below 8 are rejected and retried.
    pub guard_margin_bits: i64,
    pub formula_name: String,
}

impl DigitRun {
    /// Display form: uppercase hex, most significant first, "0x." prefix.
    pub fn display(&self) -> String {
        format!("0x.{} @ bit {}", self.hex_digits, self.bit_offset)
    }
}

/// `2^e mod modulus` by left-to-right binary exponentiation.
pub fn modpow2(e: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1);
    if modulus == 1 {
        return 0;
    }
    if e == 0 {
        return 1;
    }
    let m = modulus as u128;
    let mut result: u128 = 1;
    let nbits = 64 - e.leading_zeros();
    for i in (0..nbits).rev() {
        result = result * result % m;
        if (e >> i) & 1 == 1 {
            result = result * 2 % m;
        }
    }
    result as u64
}

/// Arbitrary-modulus variant for `(kl+j)^s` beyond 63 bits.
fn modpow2_big(e: u64, modulus: &BigUint) -> BigUint {
    if modulus.is_one() {
        return BigUint::zero();
    }
    if e == 0 {
        return BigUint::one();
    }
    let mut result = BigUint::one();
    let nbits = 64 - e.leading_zeros();
    for i in (0..nbits).rev() {
        result = &result * &result % modulus;
        if (e >> i) & 1 == 1 {
            result <<= 1;
            if result >= *modulus {
                result -= modulus;
            }
        }
    }
    result
}

/// Fixed-point fraction register for `2^t * (num/den) * P` with `fbits`
/// fractional bits: returns (register, floor_count, tail_ulps). `den` must
/// be odd and positive. The true value (mod 1, times 2^fbits) lies in
/// `[register - tail, register + floors + tail]` modulo 2^fbits.
fn frac_register(
    f: &PFormula,
    num: &Integer,
    den: &Integer,
    t: i64,
    fbits: u32,
) -> (BigInt, u64, BigInt) {
    let l = f.length() as u64;
    let m = f.base_log2() as u64;
    let s = f.degree();
    let den_mag = den.magnitude().clone();

    // k range: tail decays by 2^-m per block; stop once the remaining sum
    // is below half an ulp
    let max_num_a = (f.max_abs_coeff() * num.abs()).max(BigInt::one());
    let slack = (big(l as i64) * &max_num_a).bits() + 3;
    let k_max = if t >= 0 {
        (t as u64 + fbits as u64 + slack) / m + 1
    } else {
        ((fbits as u64 + slack).saturating_sub((-t) as u64)) / m + 1
    };

    let blocks: Vec<u64> = (0..=k_max).collect();
    let partials: Vec<(BigInt, u64)> = blocks
        .par_iter()
        .map(|&k| {
            let mut acc = BigInt::zero();
            let mut floors = 0u64;
            for (j0, a) in f.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let j = j0 as u64 + 1;
                let d = BigUint::from(k * l + j).pow(s) * &den_mag;
                let e = t - (m * k) as i64;
                if e >= 0 {
                    // ((num a_j mod d) * (2^e mod d) mod d) / d
                    let a_mod = (num * a)
                        .mod_floor(&BigInt::from_biguint(Sign::Plus, d.clone()))
                        .magnitude()
                        .clone();
                    let r = if d.bits() <= 63 {
                        BigUint::from(modpow2(e as u64, d.to_u64().expect("fits")))
                    } else {
                        modpow2_big(e as u64, &d)
                    };
                    let v = a_mod * r % &d;
                    acc += BigInt::from_biguint(Sign::Plus, (v << fbits).div_floor(&d));
                } else {
                    // direct small term: num a_j 2^(fbits + e) / d
                    let shift = fbits as i64 + e;
                    let numerator = num * a;
                    let q = if shift >= 0 {
                        (numerator << shift as u64)
                            .div_floor(&BigInt::from_biguint(Sign::Plus, d.clone()))
                    } else {
                        numerator.div_floor(&BigInt::from_biguint(Sign::Plus, d << (-shift) as u64))
                    };
                    acc += q;
                }
                floors += 1;
            }
            (acc, floors)
        })
        .collect();

    let mut register = BigInt::zero();
    let mut floors = 0u64;
    for (acc, fl) in partials {
        register += acc;
        floors += fl;
    }
    (register, floors, BigInt::one())
}

/// Turn a fraction register with interval `[reg - e_lo, reg + e_hi]` into
/// hex digits plus a carry margin.
fn digits_from_interval(
    register: &BigInt,
    e_lo: &BigInt,
    e_hi: &BigInt,
    fbits: u32,
    n_hex: u32,
) -> Result<(String, i64), DigitsError> {
    let full = BigInt::one() << fbits as u64;
    let cell_bits = fbits - 4 * n_hex;
    let cell = BigInt::one() << cell_bits as u64;
    let err_total = e_lo + e_hi;
    if err_total >= cell {
        return Err(DigitsError::CarryAmbiguity { margin: i64::MIN });
    }
    let rem = register.mod_floor(&full);
    let lo = &rem - e_lo;
    let hi = &rem + e_hi;
    // interval hugging an integer: report the all-zero side, never the
    // complement; margin is measured against half a digit cell
    if hi >= full || lo.is_negative() {
        let margin = margin_bits(&(&cell >> 1u8), &err_total.max(BigInt::one()));
        if margin < 8 {
            return Err(DigitsError::CarryAmbiguity { margin });
        }
        return Ok(("0".repeat(n_hex as usize), margin));
    }
    let c_lo: BigInt = &lo >> cell_bits as u64;
    let c_hi: BigInt = &hi >> cell_bits as u64;
    if c_lo != c_hi {
        // distance from the interval to the boundary it straddles
        let margin = margin_bits(
            &(&hi - (&c_hi << cell_bits as u64)),
            &err_total.max(BigInt::one()),
        );
        return Err(DigitsError::CarryAmbiguity {
            margin: -margin.max(0),
        });
    }
    let dist_lo = &lo - (&c_lo << cell_bits as u64);
    let dist_hi = ((&c_lo + 1) << cell_bits as u64) - &hi;
    let min_dist = dist_lo.min(dist_hi);
    let margin = margin_bits(&min_dist, &err_total.max(BigInt::one()));
    if margin < 8 {
        return Err(DigitsError::CarryAmbiguity { margin });
    }
    let digit_value = c_lo.mod_floor(&(BigInt::one() << (4 * n_hex) as u64));
    let hex = format!("{:X}", digit_value.magnitude());
    Ok((format!("{:0>width$}", hex, width = n_hex as usize), margin))
}

/// floor(log2(dist / err)), clamped at zero from below.
fn margin_bits(dist: &BigInt, err: &BigInt) -> i64 {
    if dist <= err {
        return 0;
    }
    let q = dist / err;
    q.bits() as i64 - 1
}

pub const DEFAULT_GUARD_BITS: u32 = 96;

/// Extract `n_hex` hex digits of frac(2^t * P) directly.
pub fn extract_bits(
    f: &PFormula,
    t: u64,
    n_hex: u32,
    guard_bits: u32,
    name: &str,
) -> Result<DigitRun, DigitsError> {
    if n_hex == 0 || n_hex > 64 {
        return Err(DigitsError::Invalid(
            "hex digit count must be 1..=64".into(),
        ));
    }
    let fbits = 4 * n_hex + guard_bits;
    let one = BigInt::one();
    let (register, floors, tail) = frac_register(f, &one, &one, t as i64, fbits);
    let e_hi = big(floors as i64) + &tail;
    let (hex_digits, margin) = digits_from_interval(&register, &tail, &e_hi, fbits, n_hex)?;
    Ok(DigitRun {
        bit_offset: t,
        hex_digits,
        guard_margin_bits: margin,
        formula_name: name.to_string(),
    })
}

/// [`extract_bits`] with the standard retry loop: guard doubles on carry
/// ambiguity, a few times, before giving up.
pub fn extract_bits_auto(
    f: &PFormula,
    t: u64,
    n_hex: u32,
    name: &str,
) -> Result<DigitRun, DigitsError> {
    let mut guard = DEFAULT_GUARD_BITS;
    let mut last = DigitsError::CarryAmbiguity { margin: 0 };
    for _ in 0..4 {
        match extract_bits(f, t, n_hex, guard, name) {
            Ok(run) => return Ok(run),
            Err(e @ DigitsError::CarryAmbiguity { .. }) => {
                last = e;
                guard *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Digits of the named constant `scale * sqrt3^t * P` at offset `t`.
///
/// Rational scales run through the modular path with the odd part of the
/// denominator folded into the per-term modulus. A sqrt(3) prefactor makes
/// every leading bit of P matter, so that path evaluates the leading
/// segment directly and multiplies the scale in at window precision.
pub fn extract_constant(
    sf: &ScaledFormula,
    t: u64,
    n_hex: u32,
    guard_bits: u32,
) -> Result<DigitRun, DigitsError> {
    if n_hex == 0 || n_hex > 64 {
        return Err(DigitsError::Invalid(
            "hex digit count must be 1..=64".into(),
        ));
    }
    let fbits = 4 * n_hex + guard_bits;
    if sf.sqrt3_power == 0 {
        let num = sf.scale.numer().clone();
        let den = sf.scale.denom();
        let v2 = den.trailing_zeros().unwrap_or(0);
        let den_odd: BigInt = den >> v2;
        let t_shifted = t as i64 - v2 as i64;
        let (register, floors, tail) = frac_register(&sf.formula, &num, &den_odd, t_shifted, fbits);
        let e_hi = big(floors as i64) + &tail;
        let (hex_digits, margin) = digits_from_interval(&register, &tail, &e_hi, fbits, n_hex)?;
        return Ok(DigitRun {
            bit_offset: t,
            hex_digits,
            guard_margin_bits: margin,
            formula_name: sf.name.clone(),
        });
    }
    // sqrt(3) path: window = everything down to t + 4 n_hex + guard bits
    let window = t
        .checked_add(fbits as u64 + 64)
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| DigitsError::Invalid("offset too large for scaled extraction".into()))?;
    let p_val = eval_p(&sf.formula, window);
    let scaled = p_val
        .mul_rational(&sf.scale)
        .mul(&crate::reference::sqrt_u64(3, window));
    digits_of_real(&scaled, t, n_hex, &sf.name)
}

/// Retrying variant of [`extract_constant`]; widens the window on underrun.
pub fn extract_constant_auto(
    sf: &ScaledFormula,
    t: u64,
    n_hex: u32,
) -> Result<DigitRun, DigitsError> {
    let mut guard = DEFAULT_GUARD_BITS;
    let mut last = DigitsError::CarryAmbiguity { margin: 0 };
    for _ in 0..4 {
        match extract_constant(sf, t, n_hex, guard) {
            Ok(run) => return Ok(run),
            Err(e @ DigitsError::CarryAmbiguity { .. }) => {
                last = e;
                guard *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Hex digits of frac(2^t * value) read out of a high-precision evaluation.
pub fn digits_of_real(
    value: &Real,
    t: u64,
    n_hex: u32,
    name: &str,
) -> Result<DigitRun, DigitsError> {
    let w = -value.scale_exponent();
    let fbits_avail = w - t as i64 - 4 * n_hex as i64;
    if fbits_avail < 16 {
        return Err(DigitsError::Invalid(
            "evaluation precision too low for requested offset".into(),
        ));
    }
    let fbits = (w - t as i64) as u32;
    let register = value.mantissa().clone();
    let err = value.radius().clone() + 1;
    let (hex_digits, margin) = digits_from_interval(&register, &err, &err, fbits, n_hex)?;
    Ok(DigitRun {
        bit_offset: t,
        hex_digits,
        guard_margin_bits: margin,
        formula_name: name.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::generators::catalog;
    use num_traits::Num;
    use proptest::prelude::*;

    #[test]
    fn modpow2_examples() {
        assert_eq!(modpow2(0, 7), 1);
        assert_eq!(modpow2(5, 1), 0);
        assert_eq!(modpow2(10, 1000), 24);
    }

    #[test]
    fn modpow2_matches_shadow() {
        // against num-bigint's independent modpow
        let mut state: u64 = 0x9E3779B97F4A7C15;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..10_000 {
            let e = next() % (1 << 20);
            let m = (next() % u64::MAX).max(1);
            let shadow = BigUint::from(2u32).modpow(&BigUint::from(e), &BigUint::from(m));
            assert_eq!(BigUint::from(modpow2(e, m)), shadow, "e={e} m={m}");
        }
    }

    #[test]
    fn modpow2_big_matches_small() {
        for (e, m) in [(0u64, 7u64), (10, 1000), (100, 65537), (4096, 999999937)] {
            assert_eq!(
                modpow2_big(e, &BigUint::from(m)),
                BigUint::from(modpow2(e, m))
            );
        }
        // and a modulus beyond 64 bits
        let m = BigUint::from_str_radix("123456789012345678901234567890123", 10).unwrap();
        let r = modpow2_big(1000, &m);
        let shadow = BigUint::from(2u32).modpow(&BigUint::from(1000u32), &m);
        assert_eq!(r, shadow);
    }

    #[test]
    fn ln2_digits_at_zero() {
        // frac(ln 2) starts 0xB17217F7D1CF...
        let cat = catalog();
        let log2 = cat.find_scaled("log2").unwrap();
        let run = extract_constant(log2, 0, 12, 96).unwrap();
        // oracle: direct series evaluation
        let w = 256;
        let mut acc = BigInt::zero();
        for k in 1..=(w as u64) {
            acc += (BigInt::one() << (w as u64 - k)).div_floor(&big(k as i64));
        }
        let oracle = Real::new(acc, -(w as i64), big(w as i64 + 2));
        let oracle_run = digits_of_real(&oracle, 0, 12, "ln2-oracle").unwrap();
        assert_eq!(run.hex_digits, oracle_run.hex_digits);
        assert_eq!(run.hex_digits, "B17217F7D1CF");
    }

    #[test]
    fn zero_relation_digits_are_zero() {
        let cat = catalog();
        let z1 = cat.find_zero("Z1").unwrap();
        let run = extract_bits(&z1.formula, 1000, 8, 96, "Z1").unwrap();
        assert_eq!(run.hex_digits, "00000000");
        assert!(run.guard_margin_bits >= 8);
    }

    #[test]
    fn thin_guard_is_rejected_and_retry_recovers() {
        // at guard 16 the accumulated rounding error (thousands of ulps)
        // cannot clear the 8-bit margin; the run must be rejected
        let cat = catalog();
        let log2 = cat.find_scaled("log2").unwrap();
        let err = extract_bits(&log2.formula, 300, 8, 16, "log2").unwrap_err();
        assert!(matches!(err, DigitsError::CarryAmbiguity { .. }));
        // the retry wrapper starts at the default guard and succeeds
        let run = extract_bits_auto(&log2.formula, 300, 8, "log2").unwrap();
        assert!(run.guard_margin_bits >= 8);
        // same contract on the zero-snap path
        let z1 = cat.find_zero("Z1").unwrap();
        let err = extract_bits(&z1.formula, 1000, 8, 16, "Z1").unwrap_err();
        assert!(matches!(err, DigitsError::CarryAmbiguity { .. }));
        assert_eq!(
            extract_bits_auto(&z1.formula, 1000, 8, "Z1").unwrap().hex_digits,
            "00000000"
        );
    }

    #[test]
    fn pi_sqrt3_fraction_digits() {
        // frac(pi sqrt3) = 0.4413980927...; hex window vs direct evaluation
        let cat = catalog();
        let sf = cat.find_scaled("pi_sqrt3").unwrap();
        let run = extract_constant(sf, 0, 16, 96).unwrap();
        let direct = sf.eval_rhs(600);
        let oracle = digits_of_real(&direct, 0, 16, "direct").unwrap();
        assert_eq!(run.hex_digits, oracle.hex_digits);
    }

    #[test]
    fn sqrt3_scaled_entry_matches_direct() {
        // the sqrt3_power = 1 path (im_li2_half_pi3)
        let cat = catalog();
        let sf = cat.find_scaled("im_li2_half_pi3").unwrap();
        for t in [0u64, 37, 250] {
            let run = extract_constant(sf, t, 8, 96).unwrap();
            let direct = sf.eval_rhs(1600);
            let oracle = digits_of_real(&direct, t, 8, "direct").unwrap();
            assert_eq!(run.hex_digits, oracle.hex_digits, "t={t}");
        }
    }

    #[test]
    fn catalan_digits_at_offset_100() {
        // hex digits 26..33 of a 256-bit direct evaluation
        let cat = catalog();
        let sf = cat.find_scaled("catalan_g").unwrap();
        let run = extract_constant(sf, 100, 8, 96).unwrap();
        let direct = sf.eval_rhs(256);
        let oracle = digits_of_real(&direct, 100, 8, "direct").unwrap();
        assert_eq!(run.hex_digits, oracle.hex_digits);
    }

    #[test]
    fn rational_denominator_scale_matches_direct() {
        // sqrt3_cl2_pi3 has scale 9/(5 * 2^10): odd factor folds into moduli
        let cat = catalog();
        let sf = cat.find_scaled("sqrt3_cl2_pi3").unwrap();
        for t in [0u64, 100] {
            let run = extract_constant(sf, t, 10, 96).unwrap();
            let direct = sf.eval_rhs(1600);
            let oracle = digits_of_real(&direct, t, 10, "direct").unwrap();
            assert_eq!(run.hex_digits, oracle.hex_digits, "t={t}");
        }
    }

    #[test]
    fn offset_below_scale_shift() {
        // t smaller than the dyadic shift of the scale still works (t' < 0)
        let cat = catalog();
        let sf = cat.find_scaled("log2").unwrap(); // scale 1/2^12
        let run = extract_constant(sf, 3, 8, 96).unwrap();
        let direct = sf.eval_rhs(600);
        let oracle = digits_of_real(&direct, 3, 8, "direct").unwrap();
        assert_eq!(run.hex_digits, oracle.hex_digits);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        // digits at offset t and t+4 overlap by all but one hex digit
        #[test]
        fn offset_overlap(t in 0u64..2000) {
            let cat = catalog();
            let sf = cat.find_scaled("catalan_g").unwrap();
            let a = extract_constant(sf, t, 8, 96).unwrap();
            let b = extract_constant(sf, t + 4, 8, 96).unwrap();
            prop_assert_eq!(&a.hex_digits[1..], &b.hex_digits[..7]);
        }
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let cat = catalog();
        let sf = cat.find_scaled("pi_sqrt3_log2").unwrap();
        let mut outputs = Vec::new();
        for workers in [1usize, 2, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap();
            let run = pool.install(|| extract_constant(sf, 400, 12, 96).unwrap());
            outputs.push(run);
        }
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[1], outputs[2]);
    }

    #[test]
    fn carry_margin_reported() {
        let cat = catalog();
        let sf = cat.find_scaled("log2").unwrap();
        let run = extract_constant(sf, 0, 8, 96).unwrap();
        assert!(run.guard_margin_bits >= 8);
        let _ = rat(1, 2); // keep helper import exercised
    }
}
