//! The P-notation data model: series `P(s, b, l, A) = sum_k b^-k sum_j
//! a_j/(kl+j)^s` with `b = 2^m`, plus direct evaluation with rigorous tail
//! bounds, exact linear combination, and the document format.

mod doc;

pub use doc::{parse_document, serialize_pformula, serialize_scaled, serialize_zero, Document};

use crate::exact::{big, Integer, Rational, Real};
use crate::reference::{ConstantExpr, RefError};
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

/// Guard bits added on top of the requested precision in [`eval_p`].
pub const EVAL_GUARD: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("incompatible shapes: all formulas must share (degree, base, length)")]
    IncompatibleShapes,
    #[error("empty combination")]
    EmptyCombination,
    #[error("invalid formula: {0}")]
    Invalid(String),
    #[error("document parse error: {0}")]
    Doc(String),
    #[error(transparent)]
    Reference(#[from] RefError),
}

/// `P(s, 2^m, l, A)` with arbitrary-precision integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PFormula {
    degree: u32,
    base_log2: u32,
    coeffs: Vec<Integer>,
}

impl PFormula {
    pub fn new(
        degree: u32,
        base_log2: u32,
        coeffs: Vec<Integer>,
    ) -> Result<PFormula, FormulaError> {
        if degree == 0 || base_log2 == 0 || coeffs.is_empty() {
            return Err(FormulaError::Invalid(
                "degree, base_log2 and length must be positive".into(),
            ));
        }
        Ok(PFormula {
            degree,
            base_log2,
            coeffs,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn base_log2(&self) -> u32 {
        self.base_log2
    }

    pub fn length(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn max_abs_coeff(&self) -> Integer {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn is_all_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Smallest K such that the tail after the k=K block is below
/// `2^-(bits)`: (l * maxA) / (b^(K+1) ((K+1) l + 1)^s (1 - 1/b)) < 2^-bits.
fn tail_cutoff(f: &PFormula, bits: u32) -> u64 {
    let l = big(f.length() as i64);
    let max_a = f.max_abs_coeff().max(BigInt::one());
    let m = f.base_log2 as u64;
    let mut k: u64 = 0;
    loop {
        // bound * 2^bits < 1  <=>  l*maxA * 2^bits * b < b^(K+1) ((K+1)l+1)^s (b-1)
        let lhs = ((&l * &max_a) << bits as u64) << m;
        let block: BigInt = big(f.length() as i64) * big(k as i64 + 1) + 1;
        let rhs =
            (BigInt::one() << (m * (k + 1))) * block.pow(f.degree) * ((BigInt::one() << m) - 1);
        if lhs < rhs {
            return k;
        }
        k += 1;
    }
}

/// Tail bound after block K in ulps at scale `-w`, rounded up.
fn tail_ulps(f: &PFormula, cutoff: u64, w: u32) -> BigInt {
    let l = big(f.length() as i64);
    let max_a = f.max_abs_coeff().max(BigInt::one());
    let m = f.base_log2 as u64;
    let num = ((&l * &max_a) << w as u64) << m;
    let block: BigInt = big(f.length() as i64) * big(cutoff as i64 + 1) + 1;
    let den =
        (BigInt::one() << (m * (cutoff + 1))) * block.pow(f.degree) * ((BigInt::one() << m) - 1);
    num.div_ceil(&den) + 1
}

/// Evaluate `P` to `prec_bits` with a rigorous tail bound. The error radius
/// covers truncation and per-term rounding.
///
/// The k-blocks are summed as exact integer partial sums, so chunked
/// parallel reduction is bit-identical for any worker count.
pub fn eval_p(f: &PFormula, prec_bits: u32) -> Real {
    let w = prec_bits + EVAL_GUARD;
    if f.is_all_zero() {
        return Real::new(BigInt::zero(), -(w as i64), BigInt::zero());
    }
    let cutoff = tail_cutoff(f, w.saturating_sub(2).max(1));
    let l = f.length() as u64;
    let m = f.base_log2 as u64;
    let s = f.degree;

    let blocks: Vec<u64> = (0..=cutoff).collect();
    let partials: Vec<(BigInt, u64)> = blocks
        .par_iter()
        .map(|&k| {
            let mut acc = BigInt::zero();
            let mut floors = 0u64;
            let shift = k as i64 * m as i64;
            for (j0, a) in f.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let j = j0 as u64 + 1;
                let den = big((k * l + j) as i64).pow(s);
                // a * 2^(w - k m) / (k l + j)^s with floor rounding
                let e = w as i64 - shift;
                let (num, den) = if e >= 0 {
                    (a << e as u64, den)
                } else {
                    (a.clone(), den << (-e) as u64)
                };
                acc += num.div_floor(&den);
                floors += 1;
            }
            (acc, floors)
        })
        .collect();

    let mut total = BigInt::zero();
    let mut floors = 0u64;
    for (acc, fl) in partials {
        total += acc;
        floors += fl;
    }
    let radius = big(floors as i64) + tail_ulps(f, cutoff, w);
    Real::new(total, -(w as i64), radius)
}

/// A named identity `lhs = scale * sqrt3^sqrt3_power * P(formula)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledFormula {
    pub name: String,
    /// The family parameter this instance was generated at, when meaningful.
    pub p_param: Option<u32>,
    pub scale: Rational,
    pub sqrt3_power: u8,
    pub formula: PFormula,
    pub lhs: ConstantExpr,
}

impl ScaledFormula {
    /// Evaluate the right-hand side `scale * sqrt3^t * P`.
    pub fn eval_rhs(&self, prec_bits: u32) -> Real {
        let p = eval_p(&self.formula, prec_bits);
        let scaled = p.mul_rational(&self.scale);
        if self.sqrt3_power == 1 {
            scaled.mul(&crate::reference::sqrt_u64(3, prec_bits))
        } else {
            scaled
        }
    }

    /// Evaluate the left-hand side via the reference oracles.
    pub fn eval_lhs(&self, prec_bits: u32) -> Result<Real, RefError> {
        crate::reference::eval_expr(&self.lhs, prec_bits)
    }

    /// Bits of agreement between both sides at the given precision:
    /// largest `n` with |lhs - rhs| (+ both radii) <= 2^-n.
    pub fn verify(&self, prec_bits: u32) -> Result<i64, RefError> {
        let lhs = self.eval_lhs(prec_bits)?;
        let rhs = self.eval_rhs(prec_bits);
        Ok(agreement_bits(&lhs, &rhs))
    }
}

/// Largest `n` such that |a - b| <= 2^-n including both radii
/// (i.e. -log2 of the guaranteed bound). Caps at the working scale.
pub fn agreement_bits(a: &Real, b: &Real) -> i64 {
    let diff = a.sub(b);
    match diff.abs_log2_upper() {
        None => -diff.scale_exponent(),
        Some(k) => -k,
    }
}

/// A formula asserting `P(formula) = 0` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroRelation {
    pub name: String,
    pub formula: PFormula,
}

/// Margin report from [`is_zero_relation`].
#[derive(Debug, Clone)]
pub struct ZeroReport {
    /// Upper bound exponent: |P| <= 2^value_bound_log2 (None: exactly 0).
    pub value_bound_log2: Option<i64>,
    /// Error radius exponent of the evaluation.
    pub radius_log2: Option<i64>,
    pub is_zero: bool,
}

/// True iff |eval_p(f)| <= 2 * radius at the requested precision.
pub fn is_zero_relation(f: &PFormula, prec_bits: u32) -> (bool, ZeroReport) {
    let v = eval_p(f, prec_bits);
    let is_zero = v.mantissa().abs() <= v.radius() * big(2);
    let scale = v.scale_exponent();
    let report = ZeroReport {
        value_bound_log2: if v.abs_upper_ulps().is_zero() {
            None
        } else {
            Some(scale + v.abs_upper_ulps().bits() as i64)
        },
        radius_log2: if v.radius().is_zero() {
            None
        } else {
            Some(scale + v.radius().bits() as i64)
        },
        is_zero,
    };
    (is_zero, report)
}

/// Integer-coefficient linear combination: given rational coefficients
/// `c_i`, returns the formula with coefficient vector `d * sum c_i A_i`
/// where `d` is the least common denominator, so `P' = d * sum c_i P_i`.
pub fn combine(terms: &[(Rational, &PFormula)]) -> Result<PFormula, FormulaError> {
    let (_, first) = terms.first().ok_or(FormulaError::EmptyCombination)?;
    let shape = (first.degree, first.base_log2, first.length());
    for (_, f) in terms {
        if (f.degree, f.base_log2, f.length()) != shape {
            return Err(FormulaError::IncompatibleShapes);
        }
    }
    let l = shape.2 as usize;
    let mut sums = vec![Rational::zero(); l];
    for (c, f) in terms {
        for (j, a) in f.coeffs().iter().enumerate() {
            sums[j] += c * Rational::from(a.clone());
        }
    }
    let mut lcd = BigInt::one();
    for q in &sums {
        lcd = lcd.lcm(q.denom());
    }
    let coeffs = sums
        .into_iter()
        .map(|q| {
            let scaled = q * Rational::from(lcd.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    PFormula::new(shape.0, shape.1, coeffs)
}

/// The least common denominator [`combine`] cleared; useful for relating
/// the combined value back to `sum c_i P_i`.
pub fn combine_multiplier(terms: &[(Rational, &PFormula)]) -> Result<Integer, FormulaError> {
    let (_, first) = terms.first().ok_or(FormulaError::EmptyCombination)?;
    let shape = (first.degree, first.base_log2, first.length());
    for (_, f) in terms {
        if (f.degree, f.base_log2, f.length()) != shape {
            return Err(FormulaError::IncompatibleShapes);
        }
    }
    let l = shape.2 as usize;
    let mut lcd = BigInt::one();
    for j in 0..l {
        let mut q = Rational::zero();
        for (c, f) in terms {
            q += c * Rational::from(f.coeffs()[j].clone());
        }
        lcd = lcd.lcm(q.denom());
    }
    Ok(lcd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn simple(coeffs: Vec<i64>) -> PFormula {
        PFormula::new(1, 12, coeffs.into_iter().map(big).collect()).unwrap()
    }

    /// Independent ln 2 oracle: sum_{k>=1} 1/(k 2^k) by integer arithmetic.
    fn ln2_oracle(w: u32) -> Real {
        let mut acc = BigInt::zero();
        for k in 1..=(w as u64) {
            acc += (BigInt::one() << (w as u64 - k)).div_floor(&big(k as i64));
        }
        // w floors below 1 ulp each, tail past k=w under 2 ulps
        Real::new(acc, -(w as i64), big(w as i64 + 2))
    }

    #[test]
    fn eval_all_zero_is_exact_zero() {
        let f = PFormula::new(2, 12, vec![BigInt::zero(); 24]).unwrap();
        let v = eval_p(&f, 128);
        assert!(v.mantissa().is_zero());
    }

    #[test]
    fn eval_simple_is_2ln2() {
        // P(1, 2, 1, (1)) = sum 1/(2^k (k+1)) = 2 ln 2
        let f = PFormula::new(1, 1, vec![big(1)]).unwrap();
        let v = eval_p(&f, 128);
        let expect = ln2_oracle(128 + EVAL_GUARD).pow2_scale(1);
        assert!(
            v.sub(&expect).abs_bounded_by_pow2(-120),
            "{} vs {}",
            v.to_decimal_string(20),
            expect.to_decimal_string(20)
        );
    }

    #[test]
    fn tail_bound_sound() {
        // difference between the K-cutoff eval and a much longer one stays
        // below the claimed radius
        let f = simple(vec![7, -3, 0, 5, 1, -1, 2, 0, 0, 4, -6, 9]);
        let coarse = eval_p(&f, 64);
        let fine = eval_p(&f, 256);
        let diff = coarse.sub(&fine);
        assert!(diff.abs_bounded_by_pow2(-60));
        // zero lies inside the difference interval (radii already summed)
        assert!(&diff.mantissa().abs() <= diff.radius());
    }

    #[test]
    fn eval_is_deterministic_across_worker_counts() {
        let f = simple(vec![2048, 0, -512, 7, 0, 0, 3, -1]);
        let mut values = Vec::new();
        for workers in [1usize, 2, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap();
            values.push(pool.install(|| eval_p(&f, 192)));
        }
        assert_eq!(values[0], values[1]);
        assert_eq!(values[1], values[2]);
    }

    #[test]
    fn combine_identity() {
        let f = simple(vec![3, 0, -5, 1]);
        let c = combine(&[(rat(1, 1), &f)]).unwrap();
        assert_eq!(c, f);
    }

    #[test]
    fn combine_cancellation() {
        let f = simple(vec![3, 0, -5, 1]);
        let c = combine(&[(rat(1, 1), &f), (rat(-1, 1), &f)]).unwrap();
        assert!(c.is_all_zero());
    }

    #[test]
    fn combine_rejects_mismatched_shapes() {
        let f = simple(vec![1, 2]);
        let g = PFormula::new(2, 12, vec![big(1), big(2)]).unwrap();
        assert_eq!(
            combine(&[(rat(1, 1), &f), (rat(1, 1), &g)]),
            Err(FormulaError::IncompatibleShapes)
        );
    }

    #[test]
    fn zero_relation_trivial() {
        let f = PFormula::new(1, 12, vec![BigInt::zero(); 24]).unwrap();
        let (ok, report) = is_zero_relation(&f, 128);
        assert!(ok);
        assert!(report.value_bound_log2.is_none()); // exactly zero
        assert!(report.radius_log2.is_none());
    }

    #[test]
    fn nonzero_formula_not_zero_relation() {
        let f = simple(vec![1, 0, 0, 0]);
        let (ok, _) = is_zero_relation(&f, 128);
        assert!(!ok);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        // eval_p is linear under combine, up to the cleared denominator.
        #[test]
        fn combine_linearity(
            a in proptest::collection::vec(-50i64..50, 6),
            b in proptest::collection::vec(-50i64..50, 6),
            c1n in -9i64..9, c1d in 1i64..9,
            c2n in -9i64..9, c2d in 1i64..9,
        ) {
            let fa = PFormula::new(1, 4, a.into_iter().map(big).collect()).unwrap();
            let fb = PFormula::new(1, 4, b.into_iter().map(big).collect()).unwrap();
            let c1 = rat(c1n, c1d);
            let c2 = rat(c2n, c2d);
            let terms = [(c1.clone(), &fa), (c2.clone(), &fb)];
            let combined = combine(&terms).unwrap();
            let d = combine_multiplier(&terms).unwrap();
            let lhs = eval_p(&combined, 96);
            let va = eval_p(&fa, 96).mul_rational(&c1);
            let vb = eval_p(&fb, 96).mul_rational(&c2);
            let rhs = va.add(&vb).mul_rational(&Rational::from(d));
            prop_assert!(lhs.sub(&rhs).abs_bounded_by_pow2(-90));
        }

        // K-term vs (K + extra)-term evaluation stays within the tail bound.
        #[test]
        fn tail_bound_holds_for_random_formulas(
            coeffs in proptest::collection::vec(-100i64..100, 1..8),
            m in 1u32..14,
            s in 1u32..3,
        ) {
            let f = PFormula::new(s, m, coeffs.into_iter().map(big).collect()).unwrap();
            let lo = eval_p(&f, 48);
            let hi = eval_p(&f, 160);
            let diff = lo.sub(&hi);
            prop_assert!(&diff.mantissa().abs() <= diff.radius());
        }
    }
}
