//! Exact values of cos/sin at multiples of pi/12, as elements of Q[sqrt2, sqrt3].

use crate::exact::{big, Real};

/// `(a + b*sqrt2 + c*sqrt3 + d*sqrt6) / 4` with small integer parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurdQ4 {
    pub a: i8,
    pub b: i8,
    pub c: i8,
    pub d: i8,
}

impl SurdQ4 {
    pub const ZERO: SurdQ4 = SurdQ4 {
        a: 0,
        b: 0,
        c: 0,
        d: 0,
    };

    pub fn is_zero(&self) -> bool {
        *self == SurdQ4::ZERO
    }

    pub fn neg(&self) -> SurdQ4 {
        SurdQ4 {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    pub fn add(&self, o: &SurdQ4) -> SurdQ4 {
        SurdQ4 {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
            d: self.d + o.d,
        }
    }

    pub fn sub(&self, o: &SurdQ4) -> SurdQ4 {
        self.add(&o.neg())
    }

    /// Multiply by sqrt(2): permutes the basis.
    pub fn mul_sqrt2(&self) -> SurdQ4 {
        SurdQ4 {
            a: 2 * self.b,
            b: self.a,
            c: 2 * self.d,
            d: self.c,
        }
    }

    /// Square in `Q[sqrt2, sqrt3]`, components scaled by 16 (i.e. of
    /// `(4*self)^2`). Coefficients of `(1, sqrt2, sqrt3, sqrt6)`.
    pub fn square16(&self) -> (i32, i32, i32, i32) {
        let (a, b, c, d) = (self.a as i32, self.b as i32, self.c as i32, self.d as i32);
        (
            a * a + 2 * b * b + 3 * c * c + 6 * d * d,
            2 * a * b + 6 * c * d,
            2 * a * c + 4 * b * d,
            2 * a * d + 2 * b * c,
        )
    }

    /// Fixed-point value using precomputed roots at a common scale.
    pub fn eval(&self, sqrt2: &Real, sqrt3: &Real, sqrt6: &Real) -> Real {
        let w = -sqrt2.scale_exponent() as u32;
        let mut acc = Real::from_integer(&big(self.a as i64), w);
        acc = acc.add(&sqrt2.mul_rational(&crate::exact::rat(self.b as i64, 1)));
        acc = acc.add(&sqrt3.mul_rational(&crate::exact::rat(self.c as i64, 1)));
        acc = acc.add(&sqrt6.mul_rational(&crate::exact::rat(self.d as i64, 1)));
        acc.pow2_scale(-2)
    }
}

const fn s(a: i8, b: i8, c: i8, d: i8) -> SurdQ4 {
    SurdQ4 { a, b, c, d }
}

/// cos(k*pi/12) for k = 0..23.
pub const COS_TABLE: [SurdQ4; 24] = [
    s(4, 0, 0, 0),   // 0
    s(0, 1, 0, 1),   // pi/12
    s(0, 0, 2, 0),   // pi/6
    s(0, 2, 0, 0),   // pi/4
    s(2, 0, 0, 0),   // pi/3
    s(0, -1, 0, 1),  // 5pi/12
    s(0, 0, 0, 0),   // pi/2
    s(0, 1, 0, -1),  // 7pi/12
    s(-2, 0, 0, 0),  // 2pi/3
    s(0, -2, 0, 0),  // 3pi/4
    s(0, 0, -2, 0),  // 5pi/6
    s(0, -1, 0, -1), // 11pi/12
    s(-4, 0, 0, 0),  // pi
    s(0, -1, 0, -1),
    s(0, 0, -2, 0),
    s(0, -2, 0, 0),
    s(-2, 0, 0, 0),
    s(0, 1, 0, -1),
    s(0, 0, 0, 0),
    s(0, -1, 0, 1),
    s(2, 0, 0, 0),
    s(0, 2, 0, 0),
    s(0, 0, 2, 0),
    s(0, 1, 0, 1),
];

pub fn cos_surd(k24: i64) -> SurdQ4 {
    COS_TABLE[k24.rem_euclid(24) as usize]
}

/// sin(k*pi/12) = cos((6-k)*pi/12).
pub fn sin_surd(k24: i64) -> SurdQ4 {
    cos_surd(6 - k24)
}

/// Cached sqrt(2), sqrt(3), sqrt(6) at a common working scale.
pub struct RootSet {
    pub sqrt2: Real,
    pub sqrt3: Real,
    pub sqrt6: Real,
}

impl RootSet {
    pub fn at(prec_bits: u32) -> RootSet {
        RootSet {
            sqrt2: super::consts::sqrt_u64(2, prec_bits),
            sqrt3: super::consts::sqrt_u64(3, prec_bits),
            sqrt6: super::consts::sqrt_u64(6, prec_bits),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagorean_rows_exact() {
        // cos^2 + sin^2 = 1 exactly in Q[sqrt2, sqrt3] for all 24 rows
        for k in 0..24i64 {
            let c = cos_surd(k).square16();
            let s = sin_surd(k).square16();
            assert_eq!(
                (c.0 + s.0, c.1 + s.1, c.2 + s.2, c.3 + s.3),
                (16, 0, 0, 0),
                "row {k}"
            );
        }
    }

    #[test]
    fn sin_is_shifted_cos() {
        for k in 0..24i64 {
            assert_eq!(sin_surd(k), cos_surd(6 - k));
        }
    }

    #[test]
    fn quarter_circle_symmetry() {
        for k in 0..24i64 {
            assert_eq!(cos_surd(k), cos_surd(-k));
            assert_eq!(sin_surd(k).neg(), sin_surd(-k));
            assert_eq!(cos_surd(k + 12).neg(), cos_surd(k));
        }
    }

    #[test]
    fn numeric_spot_values() {
        let roots = RootSet::at(96);
        // cos(pi/12) = (sqrt6 + sqrt2)/4 ~ 0.9659258
        let c1 = cos_surd(1).eval(&roots.sqrt2, &roots.sqrt3, &roots.sqrt6);
        assert!(c1.to_decimal_string(7).starts_with("0.965925"));
        let s1 = sin_surd(1).eval(&roots.sqrt2, &roots.sqrt3, &roots.sqrt6);
        assert!(s1.to_decimal_string(7).starts_with("0.258819"));
    }

    #[test]
    fn mul_sqrt2_consistent() {
        let roots = RootSet::at(96);
        for k in 0..24i64 {
            let x = cos_surd(k);
            let lhs = x.mul_sqrt2().eval(&roots.sqrt2, &roots.sqrt3, &roots.sqrt6);
            let rhs = x
                .eval(&roots.sqrt2, &roots.sqrt3, &roots.sqrt6)
                .mul(&roots.sqrt2);
            assert!(lhs.sub(&rhs).abs_bounded_by_pow2(-90));
        }
    }
}
