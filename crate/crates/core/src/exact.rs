//! Arbitrary-precision integers, rationals, and error-tracked fixed-point
//! reals. Everything else in the crate computes on top of these.
//!
//! `Real` is a dyadic fixed-point number `mantissa * 2^scale` together with
//! an error radius counted in ulps (units of `2^scale`). The contract is
//! containment: the true value of the quantity a `Real` stands for always
//! lies in `[value - radius, value + radius]`, and every operation here
//! preserves that.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Unbounded signed integer. Canonical zero is guaranteed by the backing type.
pub type Integer = BigInt;
/// Always-reduced rational with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    /// Division where the divisor interval contains zero.
    #[error("indeterminate division: divisor interval contains zero")]
    IndeterminateDivision,
    /// Logarithm (or similar) of an interval not provably positive.
    #[error("argument interval is not provably positive")]
    NotPositive,
}

/// Fixed-point real with directed error tracking.
///
/// `value = mantissa * 2^scale`, `radius` in ulps of `2^scale`. The scale
/// exponent is normally `-(working precision in bits)`; operations on mixed
/// scales align (exactly) to the finer one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Real {
    mantissa: BigInt,
    scale: i64,
    radius: BigInt,
}

fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    // den > 0 expected
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

impl Real {
    pub fn new(mantissa: BigInt, scale: i64, radius: BigInt) -> Self {
        debug_assert!(!radius.is_negative());
        Real {
            mantissa,
            scale,
            radius,
        }
    }

    /// Exact value `n` represented at scale `-prec_bits`.
    pub fn from_integer(n: &BigInt, prec_bits: u32) -> Self {
        Real {
            mantissa: n << prec_bits,
            scale: -(prec_bits as i64),
            radius: BigInt::zero(),
        }
    }

    pub fn zero(prec_bits: u32) -> Self {
        Real::from_integer(&BigInt::zero(), prec_bits)
    }

    pub fn one(prec_bits: u32) -> Self {
        Real::from_integer(&BigInt::one(), prec_bits)
    }

    /// Round `r` to scale `-prec_bits`; exact when the denominator divides.
    pub fn from_rational(r: &Rational, prec_bits: u32) -> Self {
        let num = r.numer() << prec_bits;
        let (q, rem) = num.div_mod_floor(r.denom());
        let radius = if rem.is_zero() {
            BigInt::zero()
        } else {
            BigInt::one()
        };
        Real {
            mantissa: q,
            scale: -(prec_bits as i64),
            radius,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale_exponent(&self) -> i64 {
        self.scale
    }

    pub fn radius(&self) -> &BigInt {
        &self.radius
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    /// Rescale to a finer (more negative) exponent. Exact.
    fn aligned(&self, scale: i64) -> Real {
        debug_assert!(scale <= self.scale);
        let shift = (self.scale - scale) as u32;
        Real {
            mantissa: &self.mantissa << shift,
            scale,
            radius: &self.radius << shift,
        }
    }

    /// Rescale to `scale` when it is finer than the current exponent
    /// (exact); a no-op if `scale` would coarsen.
    pub fn aligned_to(&self, scale: i64) -> Real {
        if scale >= self.scale {
            self.clone()
        } else {
            self.aligned(scale)
        }
    }

    // mul/div shift by -scale, so the working exponent is kept nonpositive
    fn align_pair(x: &Real, y: &Real) -> (Real, Real, i64) {
        let s = x.scale.min(y.scale).min(0);
        (x.aligned(s), y.aligned(s), s)
    }

    pub fn add(&self, other: &Real) -> Real {
        let (a, b, s) = Real::align_pair(self, other);
        Real {
            mantissa: a.mantissa + b.mantissa,
            scale: s,
            radius: a.radius + b.radius,
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        let (a, b, s) = Real::align_pair(self, other);
        Real {
            mantissa: a.mantissa - b.mantissa,
            scale: s,
            radius: a.radius + b.radius,
        }
    }

    pub fn neg(&self) -> Real {
        Real {
            mantissa: -&self.mantissa,
            scale: self.scale,
            radius: self.radius.clone(),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        let (a, b, s) = Real::align_pair(self, other);
        let shift = (-s) as u32;
        let prod = &a.mantissa * &b.mantissa;
        let (q, rem) = prod.div_mod_floor(&(BigInt::one() << shift));
        // |X*Y - q*2^s| <= (|mx| ry + |my| rx + rx ry) ulp + rounding
        let mut radius = (a.mantissa.magnitude() * b.radius.magnitude()
            + b.mantissa.magnitude() * a.radius.magnitude()
            + a.radius.magnitude() * b.radius.magnitude())
        .div_ceil(&(BigUint::one() << shift));
        if !rem.is_zero() {
            radius += BigUint::one();
        }
        Real {
            mantissa: q,
            scale: s,
            radius: BigInt::from_biguint(Sign::Plus, radius),
        }
    }

    /// Multiply by an exact rational. Error radius scales with the factor.
    pub fn mul_rational(&self, r: &Rational) -> Real {
        let num = &self.mantissa * r.numer();
        let (q, rem) = num.div_mod_floor(r.denom());
        let mut radius = ceil_div(&(&self.radius * r.numer().abs()), r.denom());
        if !rem.is_zero() {
            radius += 1;
        }
        Real {
            mantissa: q,
            scale: self.scale,
            radius,
        }
    }

    pub fn div(&self, other: &Real) -> Result<Real, ExactError> {
        let (a, b, s) = Real::align_pair(self, other);
        if b.mantissa.abs() <= b.radius {
            return Err(ExactError::IndeterminateDivision);
        }
        let shift = (-s) as u32;
        let num = &a.mantissa << shift;
        let (q, rem) = num.div_mod_floor(&b.mantissa);
        // |X/Y - mx/my| <= (rx |my| + |mx| ry) / (|my| (|my| - ry)) in value,
        // which is (rx |my| + |mx| ry) * 2^shift / (|my| (|my| - ry)) ulps.
        let my_abs = b.mantissa.abs();
        let err_num = (&a.radius * &my_abs + a.mantissa.abs() * &b.radius) << shift;
        let err_den = &my_abs * (&my_abs - &b.radius);
        let mut radius = ceil_div(&err_num, &err_den);
        if !rem.is_zero() {
            radius += 1;
        }
        Ok(Real {
            mantissa: q,
            scale: s,
            radius,
        })
    }

    /// Exact multiplication by `2^e`.
    pub fn pow2_scale(&self, e: i64) -> Real {
        Real {
            mantissa: self.mantissa.clone(),
            scale: self.scale + e,
            radius: self.radius.clone(),
        }
    }

    /// Square root of a nonnegative `Real`.
    pub fn sqrt(&self) -> Result<Real, ExactError> {
        if self.mantissa.is_negative() && self.mantissa.abs() > self.radius {
            return Err(ExactError::NotPositive);
        }
        let s = self.scale.min(0);
        let this = self.aligned(s);
        // sqrt(m * 2^s) = isqrt(m << -s) * 2^s
        let shift = (-s) as u32;
        let m = this.mantissa.max(BigInt::zero());
        let scaled = m.magnitude() << shift;
        let root = isqrt(&scaled);
        let exact_root = &root * &root == scaled;
        // input radius contributes rx / (sqrt(X) + sqrt(x)) <= rx*2^-s / root ulps
        let denom = BigInt::from_biguint(Sign::Plus, root.clone()).max(BigInt::one());
        let mut radius = ceil_div(&(&this.radius << shift), &denom);
        if !(exact_root && this.radius.is_zero()) {
            radius += 1;
        }
        Ok(Real {
            mantissa: BigInt::from_biguint(Sign::Plus, root),
            scale: s,
            radius,
        })
    }

    /// Strictly positive over the whole interval?
    pub fn is_provably_positive(&self) -> bool {
        self.mantissa.is_positive() && self.mantissa > self.radius
    }

    /// Upper bound on |value|, in ulps at this Real's scale.
    pub fn abs_upper_ulps(&self) -> BigInt {
        self.mantissa.abs() + &self.radius
    }

    /// `|value| <= 2^log2_bound` guaranteed?
    pub fn abs_bounded_by_pow2(&self, log2_bound: i64) -> bool {
        let e = log2_bound - self.scale;
        if e < 0 {
            return self.abs_upper_ulps().is_zero();
        }
        self.abs_upper_ulps() <= (BigInt::one() << e as u64)
    }

    /// Smallest `k` with |value| + radius <= 2^k (a log2 upper bound), or
    /// None for an exact zero.
    pub fn abs_log2_upper(&self) -> Option<i64> {
        let hi = self.abs_upper_ulps();
        if hi.is_zero() {
            return None;
        }
        Some(self.scale + hi.bits() as i64)
    }

    /// log2 upper bound of the error radius, None when exact.
    pub fn radius_log2(&self) -> Option<i64> {
        if self.radius.is_zero() {
            None
        } else {
            Some(self.scale + self.radius.bits() as i64)
        }
    }

    fn scale_factor(&self) -> Rational {
        if self.scale <= 0 {
            Rational::new(BigInt::one(), BigInt::one() << (-self.scale) as u64)
        } else {
            Rational::from(BigInt::one() << self.scale as u64)
        }
    }

    /// True rational value of the midpoint.
    pub fn to_rational(&self) -> Rational {
        Rational::from(self.mantissa.clone()) * self.scale_factor()
    }

    /// Does the interval contain the exact rational `q`?
    pub fn contains_rational(&self, q: &Rational) -> bool {
        let diff = (q - self.to_rational()).abs();
        diff <= Rational::from(self.radius.clone()) * self.scale_factor()
    }

    /// Decimal rendering of the midpoint, `digits` places after the point.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let this = self.aligned(self.scale.min(-1));
        let neg = this.mantissa.is_negative();
        let mag = this.mantissa.magnitude().clone();
        let shift = (-this.scale) as u32;
        let scaled = mag * BigUint::from(10u32).pow(digits);
        let int_part = &scaled >> shift;
        let s = int_part.to_string();
        let (ip, fp) = if s.len() > digits as usize {
            let split = s.len() - digits as usize;
            (s[..split].to_string(), s[split..].to_string())
        } else {
            (
                "0".to_string(),
                format!("{:0>width$}", s, width = digits as usize),
            )
        };
        format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
    }

    /// Uppercase hex rendering of the midpoint: "-0xA.BCD...".
    pub fn to_hex_string(&self, hex_digits: u32) -> String {
        let this = self.aligned(self.scale.min(-1));
        let neg = this.mantissa.is_negative();
        let mag = this.mantissa.magnitude().clone();
        let shift = (-this.scale) as u32;
        let int_part: BigUint = &mag >> shift;
        let frac = mag - (&int_part << shift);
        // top 4*hex_digits bits of the fraction
        let take = 4 * hex_digits;
        let frac_bits: BigUint = if shift >= take {
            &frac >> (shift - take)
        } else {
            &frac << (take - shift)
        };
        let mut fs = format!("{:X}", frac_bits);
        if fs.len() < hex_digits as usize {
            fs = format!("{:0>width$}", fs, width = hex_digits as usize);
        }
        format!(
            "{}0x{:X}.{}",
            if neg { "-" } else { "" },
            int_part,
            &fs[..hex_digits as usize]
        )
    }
}

/// `2^e` as a BigInt for `e >= 0`, else None.
pub fn pow2_bigint(e: i64) -> Option<BigInt> {
    if e < 0 {
        None
    } else {
        Some(BigInt::one() << (e as u64))
    }
}

/// Shift right rounding toward +infinity; returns (quotient, was_exact).
pub fn ceil_shr(x: &BigInt, k: u32) -> (BigInt, bool) {
    let den = BigInt::one() << k;
    let (q, r) = x.div_mod_floor(&den);
    if r.is_zero() {
        (q, true)
    } else {
        (q + 1, false)
    }
}

/// Integer square root by Newton iteration, initial guess from bit length.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let bits = n.bits();
    let mut x = BigUint::one() << bits.div_ceil(2);
    loop {
        let next = (&x + n / &x) >> 1u8;
        if next >= x {
            break;
        }
        x = next;
    }
    x
}

/// `sqrt(n)` to `prec_bits` fractional bits. Perfect squares come out exact.
pub fn sqrt_nat(n: u64, prec_bits: u32) -> Real {
    let scaled = BigUint::from(n) << (2 * prec_bits);
    let root = isqrt(&scaled);
    let exact = &root * &root == scaled;
    Real::new(
        BigInt::from_biguint(Sign::Plus, root),
        -(prec_bits as i64),
        if exact { BigInt::zero() } else { BigInt::one() },
    )
}

/// Arithmetic operation selector for [`real_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// Uniform entry point over the five basic operations. `Neg` ignores `y`.
pub fn real_arith(op: ArithOp, x: &Real, y: &Real) -> Result<Real, ExactError> {
    Ok(match op {
        ArithOp::Add => x.add(y),
        ArithOp::Sub => x.sub(y),
        ArithOp::Mul => x.mul(y),
        ArithOp::Div => x.div(y)?,
        ArithOp::Neg => x.neg(),
    })
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl std::fmt::Display for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let digits = ((-self.scale).max(8) as u64 * 30103 / 100000) as u32;
        write!(f, "{}", self.to_decimal_string(digits.min(80)))?;
        if let Some(b) = self.radius.to_u64() {
            if b > 0 {
                let log = 64 - b.leading_zeros() as i64;
                write!(f, " (±2^{})", self.scale + log)?;
            }
        } else {
            write!(f, " (±2^{})", self.scale + self.radius.bits() as i64)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn add_exact_integers() {
        let a = Real::from_integer(&big(1), 64);
        let b = Real::from_integer(&big(2), 64);
        let c = a.add(&b);
        assert_eq!(c.mantissa(), &(big(3) << 64));
        assert!(c.is_exact());
    }

    #[test]
    fn mul_annihilator() {
        let x = Real::from_rational(&rat(355, 113), 96);
        let z = Real::zero(96);
        let p = x.mul(&z);
        assert!(p.mantissa().is_zero());
        assert!(p.is_exact());
    }

    #[test]
    fn div_one_third() {
        let one = Real::one(64);
        let three = Real::from_integer(&big(3), 64);
        let q = one.div(&three).unwrap();
        // within 2^-63 of 1/3
        let third = rat(1, 3);
        let err = (q.to_rational() - third).abs();
        assert!(err < rat(1, 1) / Rational::from(big(1) << 63));
        assert!(q.contains_rational(&rat(1, 3)));
    }

    #[test]
    fn div_through_zero_interval() {
        let one = Real::one(64);
        let tiny = Real::new(big(1), -64, big(5));
        assert_eq!(one.div(&tiny), Err(ExactError::IndeterminateDivision));
    }

    #[test]
    fn real_arith_dispatch() {
        let x = Real::from_rational(&rat(7, 2), 96);
        let y = Real::from_rational(&rat(-3, 4), 96);
        for (op, expect) in [
            (ArithOp::Add, rat(11, 4)),
            (ArithOp::Sub, rat(17, 4)),
            (ArithOp::Mul, rat(-21, 8)),
            (ArithOp::Div, rat(-14, 3)),
            (ArithOp::Neg, rat(-7, 2)),
        ] {
            let r = real_arith(op, &x, &y).unwrap();
            assert!(r.contains_rational(&expect), "{op:?}");
        }
        let zero = Real::zero(96);
        assert_eq!(
            real_arith(ArithOp::Div, &x, &zero),
            Err(ExactError::IndeterminateDivision)
        );
    }

    #[test]
    fn sqrt_perfect_square() {
        let r = sqrt_nat(4, 128);
        assert!(r.is_exact());
        assert_eq!(r.mantissa(), &(big(2) << 128));
        let one = sqrt_nat(1, 16);
        assert!(one.is_exact());
        assert_eq!(one.mantissa(), &(big(1) << 16));
    }

    #[test]
    fn sqrt_three_squares_back() {
        let p = 128u32;
        let r = sqrt_nat(3, p);
        let sq = r.mul(&r);
        // sqrt(n, P)^2 within n +- 2^(-P+2+ceil(log2 n))
        let n = Rational::from(big(3));
        let bound = Rational::new(big(4 * 2), big(1) << p); // 2^(-P+3) >= 2^(-P+2+2)? log2(3)~1.58 -> ceil 2
        let err = (sq.to_rational() - n).abs();
        assert!(err < bound * rat(2, 1));
        // known decimal prefix
        assert!(r.to_decimal_string(19).starts_with("1.732050807568877293"));
    }

    #[test]
    fn pow2_scale_exact() {
        let x = Real::from_integer(&big(1), 8);
        let y = x.pow2_scale(3);
        assert_eq!(y.to_rational(), rat(8, 1));
        assert_eq!(x.pow2_scale(0), x);
        // value 3 held at scale -8, shifted down twice: exactly 3/4
        let three = Real::from_integer(&big(3), 8);
        let q = three.pow2_scale(-2);
        assert_eq!(q.to_rational(), rat(3, 4));
        assert!(q.is_exact());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..60).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Containment: an arithmetic DAG tracked in Real always brackets the
        // exact rational shadow value.
        #[test]
        fn containment(qs in proptest::collection::vec(arb_rational(), 2..8), ops in proptest::collection::vec(0u8..4, 1..7)) {
            let prec = 128u32;
            let mut shadow = qs[0].clone();
            let mut val = Real::from_rational(&qs[0], prec);
            for (i, op) in ops.into_iter().enumerate() {
                let q = &qs[(i + 1) % qs.len()];
                let r = Real::from_rational(q, prec);
                match op {
                    0 => { shadow += q; val = val.add(&r); }
                    1 => { shadow -= q; val = val.sub(&r); }
                    2 => { shadow *= q; val = val.mul(&r); }
                    _ => {
                        if !q.is_zero() {
                            if let Ok(d) = val.div(&r) {
                                shadow /= q;
                                val = d;
                            }
                        }
                    }
                }
            }
            prop_assert!(val.contains_rational(&shadow));
        }

        // Re-running at prec+64 lands inside the prec-bit interval.
        #[test]
        fn monotone_precision(a in arb_rational(), b in arb_rational()) {
            let lo = Real::from_rational(&a, 96).mul(&Real::from_rational(&b, 96));
            let hi = Real::from_rational(&a, 160).mul(&Real::from_rational(&b, 160));
            let exact = &a * &b;
            prop_assert!(lo.contains_rational(&exact));
            prop_assert!(hi.contains_rational(&exact));
            // hi interval is no wider than lo's
            let lo_r = Rational::from(lo.radius().clone()) / Rational::from(big(1) << 96);
            let hi_r = Rational::from(hi.radius().clone()) / Rational::from(big(1) << 160);
            prop_assert!(hi_r <= lo_r);
        }

        #[test]
        fn sqrt_nat_squares_into_bound(n in 1u64..500, p in 32u32..160) {
            let r = sqrt_nat(n, p);
            let sq = r.mul(&r).to_rational();
            let log2n = 64 - n.leading_zeros() as i64;
            let bound = Rational::new(big(1) << (2 + log2n) as u32, big(1) << p);
            prop_assert!((sq - Rational::from(big(n as i64))).abs() <= bound);
        }

        #[test]
        fn isqrt_matches_shadow(n in 0u128..u128::MAX / 2) {
            let b = BigUint::from(n);
            let r = isqrt(&b);
            // shadow: num-bigint's own sqrt
            prop_assert_eq!(r, num_integer::Roots::sqrt(&b));
        }
    }
}
