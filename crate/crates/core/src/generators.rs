//! The eight parameterized binary formula families, their degree-1 and
//! degree-2 closed-form instantiations, and the named catalog with the
//! zero relations.
//!
//! Coefficient vectors come from one data-driven template table: each of
//! the 24 positions maps to a sign and an affine exponent in p (or is
//! structurally zero), so every family can be audited line by line.

use crate::exact::{big, Rational};
use crate::pformula::{PFormula, ScaledFormula, ZeroRelation};
use crate::reference::{Angle, ConstantExpr};
use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("non-integer exponent: formula is not BBP-type for even p")]
    EvenP,
    #[error("p must be a positive integer")]
    InvalidP,
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("degree-2 identity index must be 1..=4")]
    BadDegree2Index,
}

/// Which part of Li is taken on the left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiPart {
    Re,
    Im,
}

/// Which angle pair the family sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnglePair {
    /// {pi/12, 7pi/12}
    A,
    /// {5pi/12, 11pi/12}
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combination {
    Sum,
    Diff,
}

/// The eight families, in one-to-one order with their defining equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyId {
    ReSumA,
    ReDiffA,
    ImSumA,
    ImDiffA,
    ReSumB,
    ReDiffB,
    ImSumB,
    ImDiffB,
}

impl FamilyId {
    pub const ALL: [FamilyId; 8] = [
        FamilyId::ReSumA,
        FamilyId::ReDiffA,
        FamilyId::ImSumA,
        FamilyId::ImDiffA,
        FamilyId::ReSumB,
        FamilyId::ReDiffB,
        FamilyId::ImSumB,
        FamilyId::ImDiffB,
    ];

    pub fn slug(&self) -> &'static str {
        match self {
            FamilyId::ReSumA => "re-sum-a",
            FamilyId::ReDiffA => "re-diff-a",
            FamilyId::ImSumA => "im-sum-a",
            FamilyId::ImDiffA => "im-diff-a",
            FamilyId::ReSumB => "re-sum-b",
            FamilyId::ReDiffB => "re-diff-b",
            FamilyId::ImSumB => "im-sum-b",
            FamilyId::ImDiffB => "im-diff-b",
        }
    }

    pub fn from_slug(slug: &str) -> Result<FamilyId, GenError> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.slug() == slug)
            .ok_or_else(|| GenError::UnknownFamily(slug.to_string()))
    }

    pub fn part(&self) -> LiPart {
        match self {
            FamilyId::ReSumA | FamilyId::ReDiffA | FamilyId::ReSumB | FamilyId::ReDiffB => {
                LiPart::Re
            }
            _ => LiPart::Im,
        }
    }

    pub fn pair(&self) -> AnglePair {
        match self {
            FamilyId::ReSumA | FamilyId::ReDiffA | FamilyId::ImSumA | FamilyId::ImDiffA => {
                AnglePair::A
            }
            _ => AnglePair::B,
        }
    }

    pub fn combination(&self) -> Combination {
        match self {
            FamilyId::ReSumA | FamilyId::ImSumA | FamilyId::ReSumB | FamilyId::ImSumB => {
                Combination::Sum
            }
            _ => Combination::Diff,
        }
    }

    /// The two lattice angles the family evaluates Li at.
    pub fn angles(&self) -> (Angle, Angle) {
        match self.pair() {
            AnglePair::A => (Angle::of(1, 12), Angle::of(7, 12)),
            AnglePair::B => (Angle::of(5, 12), Angle::of(11, 12)),
        }
    }

    /// Whether the right-hand side carries a sqrt(3) prefactor.
    pub fn has_sqrt3_prefactor(&self) -> bool {
        matches!(
            self,
            FamilyId::ReDiffA | FamilyId::ImSumA | FamilyId::ReDiffB | FamilyId::ImSumB
        )
    }

    fn template(&self) -> &'static [Option<(i8, ExpKind, u8)>; 24] {
        match self {
            FamilyId::ReSumA => &RE_SUM_A,
            FamilyId::ReDiffA => &RE_DIFF_A,
            FamilyId::ImSumA => &IM_SUM_A,
            FamilyId::ImDiffA => &IM_DIFF_A,
            FamilyId::ReSumB => &RE_SUM_B,
            FamilyId::ReDiffB => &RE_DIFF_B,
            FamilyId::ImSumB => &IM_SUM_B,
            FamilyId::ImDiffB => &IM_DIFF_B,
        }
    }
}

/// Exponent shapes appearing in the family coefficient tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpKind {
    /// -1/2 + p/2 + c p
    HalfMinus,
    /// 1/2 - p/2 + c p
    HalfPlus,
    /// c p
    Plain,
    /// 1 + c p
    PlainPlus1,
}

impl ExpKind {
    /// The exponent value for odd `p`.
    fn exponent(&self, c: u8, p: u32) -> i64 {
        let p = p as i64;
        let c = c as i64;
        match self {
            ExpKind::HalfMinus => (p - 1) / 2 + c * p,
            ExpKind::HalfPlus => (1 - p) / 2 + c * p,
            ExpKind::Plain => c * p,
            ExpKind::PlainPlus1 => 1 + c * p,
        }
    }
}

use ExpKind::{HalfMinus as A, HalfPlus as B, Plain as C, PlainPlus1 as D};

type Template = [Option<(i8, ExpKind, u8)>; 24];

const RE_SUM_A: Template = [
    Some((1, A, 11)),
    None,
    Some((1, B, 11)),
    Some((1, C, 10)),
    Some((-1, A, 9)),
    None,
    Some((1, A, 8)),
    Some((-1, C, 8)),
    Some((-1, B, 8)),
    None,
    Some((-1, A, 6)),
    Some((-1, D, 6)),
    Some((-1, A, 5)),
    None,
    Some((-1, B, 5)),
    Some((-1, C, 4)),
    Some((1, A, 3)),
    None,
    Some((-1, A, 2)),
    Some((1, C, 2)),
    Some((1, B, 2)),
    None,
    Some((1, A, 0)),
    Some((1, D, 0)),
];

const RE_DIFF_A: Template = [
    Some((1, A, 11)),
    Some((1, C, 11)),
    None,
    None,
    Some((1, A, 9)),
    None,
    Some((-1, A, 8)),
    None,
    None,
    Some((-1, C, 7)),
    Some((-1, A, 6)),
    None,
    Some((-1, A, 5)),
    Some((-1, C, 5)),
    None,
    None,
    Some((-1, A, 3)),
    None,
    Some((1, A, 2)),
    None,
    None,
    Some((1, C, 1)),
    Some((1, A, 0)),
    None,
];

const IM_SUM_A: Template = [
    Some((1, A, 11)),
    None,
    None,
    Some((1, C, 10)),
    Some((1, A, 9)),
    None,
    Some((1, A, 8)),
    Some((1, C, 8)),
    None,
    None,
    Some((1, A, 6)),
    None,
    Some((-1, A, 5)),
    None,
    None,
    Some((-1, C, 4)),
    Some((-1, A, 3)),
    None,
    Some((-1, A, 2)),
    Some((-1, C, 2)),
    None,
    None,
    Some((-1, A, 0)),
    None,
];

const IM_DIFF_A: Template = [
    Some((-1, A, 11)),
    Some((1, C, 11)),
    Some((1, B, 11)),
    None,
    Some((1, A, 9)),
    Some((1, D, 9)),
    Some((1, A, 8)),
    None,
    Some((1, B, 8)),
    Some((1, C, 7)),
    Some((-1, A, 6)),
    None,
    Some((1, A, 5)),
    Some((-1, C, 5)),
    Some((-1, B, 5)),
    None,
    Some((-1, A, 3)),
    Some((-1, D, 3)),
    Some((-1, A, 2)),
    None,
    Some((-1, B, 2)),
    Some((-1, C, 1)),
    Some((1, A, 0)),
    None,
];

const RE_SUM_B: Template = [
    Some((-1, A, 11)),
    None,
    Some((-1, B, 11)),
    Some((1, C, 10)),
    Some((1, A, 9)),
    None,
    Some((-1, A, 8)),
    Some((-1, C, 8)),
    Some((1, B, 8)),
    None,
    Some((1, A, 6)),
    Some((-1, D, 6)),
    Some((1, A, 5)),
    None,
    Some((1, B, 5)),
    Some((-1, C, 4)),
    Some((-1, A, 3)),
    None,
    Some((1, A, 2)),
    Some((1, C, 2)),
    Some((-1, B, 2)),
    None,
    Some((-1, A, 0)),
    Some((1, D, 0)),
];

const RE_DIFF_B: Template = [
    Some((1, A, 11)),
    Some((-1, C, 11)),
    None,
    None,
    Some((1, A, 9)),
    None,
    Some((-1, A, 8)),
    None,
    None,
    Some((1, C, 7)),
    Some((-1, A, 6)),
    None,
    Some((-1, A, 5)),
    Some((1, C, 5)),
    None,
    None,
    Some((-1, A, 3)),
    None,
    Some((1, A, 2)),
    None,
    None,
    Some((-1, C, 1)),
    Some((1, A, 0)),
    None,
];

const IM_SUM_B: Template = [
    Some((1, A, 11)),
    None,
    None,
    Some((-1, C, 10)),
    Some((1, A, 9)),
    None,
    Some((1, A, 8)),
    Some((-1, C, 8)),
    None,
    None,
    Some((1, A, 6)),
    None,
    Some((-1, A, 5)),
    None,
    None,
    Some((1, C, 4)),
    Some((-1, A, 3)),
    None,
    Some((-1, A, 2)),
    Some((1, C, 2)),
    None,
    None,
    Some((-1, A, 0)),
    None,
];

const IM_DIFF_B: Template = [
    Some((1, A, 11)),
    Some((1, C, 11)),
    Some((-1, B, 11)),
    None,
    Some((-1, A, 9)),
    Some((1, D, 9)),
    Some((-1, A, 8)),
    None,
    Some((-1, B, 8)),
    Some((1, C, 7)),
    Some((1, A, 6)),
    None,
    Some((-1, A, 5)),
    Some((-1, C, 5)),
    Some((1, B, 5)),
    None,
    Some((1, A, 3)),
    Some((-1, D, 3)),
    Some((1, A, 2)),
    None,
    Some((1, B, 2)),
    Some((-1, C, 1)),
    Some((-1, A, 0)),
    None,
];

fn check_p(p: u32) -> Result<(), GenError> {
    if p == 0 {
        return Err(GenError::InvalidP);
    }
    if p.is_multiple_of(2) {
        return Err(GenError::EvenP);
    }
    Ok(())
}

/// The raw coefficient vector of a family at odd `p`.
pub fn family_coefficients(id: FamilyId, p: u32) -> Result<Vec<BigInt>, GenError> {
    check_p(p)?;
    Ok(id
        .template()
        .iter()
        .map(|slot| match slot {
            None => BigInt::ZERO,
            Some((sign, kind, c)) => {
                let e = kind.exponent(*c, p);
                debug_assert!(e >= 0);
                let mag = BigInt::one() << e as u64;
                if *sign < 0 {
                    -mag
                } else {
                    mag
                }
            }
        })
        .collect())
}

fn li_expr(part: LiPart, s: u32, p: u32, x: Angle) -> ConstantExpr {
    match part {
        LiPart::Re => ConstantExpr::ReLi { s, p, x },
        LiPart::Im => ConstantExpr::ImLi { s, p, x },
    }
}

fn pow2_expr(num_halves: i64) -> ConstantExpr {
    ConstantExpr::pow2_half(num_halves)
}

fn angle_expr(num: i64, den: i64) -> ConstantExpr {
    ConstantExpr::mul(ConstantExpr::ratio(num, den), ConstantExpr::Pi)
}

fn scale_inv_pow2(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits as u64)
}

/// The general-degree family identity: the polylog sum or difference on the
/// left, `prefactor / 2^(12p) * P(s, 2^(12p), 24, A)` on the right.
pub fn gen_family(id: FamilyId, s: u32, p: u32) -> Result<ScaledFormula, GenError> {
    check_p(p)?;
    if s == 0 {
        return Err(GenError::InvalidP);
    }
    let coeffs = family_coefficients(id, p)?;
    let formula = PFormula::new(s, 12 * p, coeffs).expect("valid family shape");
    let (x1, x2) = id.angles();
    let part = id.part();
    let first = li_expr(part, s, p, x1);
    let second = li_expr(part, s, p, x2);
    let lhs = match id.combination() {
        Combination::Sum => ConstantExpr::add(first, second),
        Combination::Diff => ConstantExpr::sub(first, second),
    };
    Ok(ScaledFormula {
        name: format!("{}-s{}-p{}", id.slug(), s, p),
        p_param: Some(p),
        scale: scale_inv_pow2(12 * p),
        sqrt3_power: if id.has_sqrt3_prefactor() { 1 } else { 0 },
        formula,
        lhs,
    })
}

/// Degree-1 closed forms: same coefficient payload as `gen_family(id, 1, p)`
/// with the left-hand side replaced by its elementary closed form
/// (log or arctan of explicit surds).
pub fn gen_degree1(id: FamilyId, p: u32) -> Result<ScaledFormula, GenError> {
    check_p(p)?;
    let base = gen_family(id, 1, p)?;
    let pi64 = p as i64;
    let one = ConstantExpr::int(1);
    let sqrt3 = ConstantExpr::Sqrt(3);
    // q-power shorthands, exponents in halves of a bit
    let (lhs, scale) = match id {
        FamilyId::ReSumA => {
            // -1/2 log(1 - 2^((1-p)/2) + 2^-p - 2^((1-3p)/2) + 2^-2p)
            let arg = ConstantExpr::sum(vec![
                one,
                ConstantExpr::neg(pow2_expr(1 - pi64)),
                pow2_expr(-2 * pi64),
                ConstantExpr::neg(pow2_expr(1 - 3 * pi64)),
                pow2_expr(-4 * pi64),
            ]);
            (
                ConstantExpr::mul(ConstantExpr::ratio(-1, 2), ConstantExpr::log(arg)),
                scale_inv_pow2(12 * p),
            )
        }
        FamilyId::ReDiffA => {
            // sqrt3/2 log( (1 + 2^(-(1+p)/2) sqrt3 - 2^(-(1+p)/2) + 2^-p)^2
            //              / (1 - 2^((1-p)/2) - 2^((1-3p)/2) + 2^-2p + 2^-p) )
            let q = pow2_expr(-(1 + pi64));
            let num = ConstantExpr::sum(vec![
                one.clone(),
                ConstantExpr::mul(q.clone(), sqrt3.clone()),
                ConstantExpr::neg(q),
                pow2_expr(-2 * pi64),
            ]);
            let den = ConstantExpr::sum(vec![
                one,
                ConstantExpr::neg(pow2_expr(1 - pi64)),
                ConstantExpr::neg(pow2_expr(1 - 3 * pi64)),
                pow2_expr(-4 * pi64),
                pow2_expr(-2 * pi64),
            ]);
            let ratio = ConstantExpr::div(ConstantExpr::mul(num.clone(), num), den);
            (
                ConstantExpr::mul(
                    ConstantExpr::mul(sqrt3, ConstantExpr::ratio(1, 2)),
                    ConstantExpr::log(ratio),
                ),
                Rational::new(big(3), BigInt::one() << (12 * p) as u64),
            )
        }
        FamilyId::ImSumA => {
            // sqrt3 atan( (1 - 2^((p+1)/2)) / (1 + 2^((p+1)/2) - 2^(p+1)) * sqrt3 )
            let g = pow2_expr(pi64 + 1);
            let num = ConstantExpr::sub(one.clone(), g.clone());
            let den = ConstantExpr::sum(vec![one, g, ConstantExpr::neg(pow2_expr(2 * (pi64 + 1)))]);
            (
                ConstantExpr::mul(
                    sqrt3.clone(),
                    ConstantExpr::atan(ConstantExpr::mul(ConstantExpr::div(num, den), sqrt3)),
                ),
                Rational::new(big(3), BigInt::one() << (12 * p) as u64),
            )
        }
        FamilyId::ImDiffA => {
            // -atan( (2^((1-p)/2) - 1) / (-2^((1+p)/2) + 1) )
            let num = ConstantExpr::sub(pow2_expr(1 - pi64), one.clone());
            let den = ConstantExpr::add(ConstantExpr::neg(pow2_expr(1 + pi64)), one);
            (
                ConstantExpr::neg(ConstantExpr::atan(ConstantExpr::div(num, den))),
                scale_inv_pow2(12 * p),
            )
        }
        FamilyId::ReSumB => {
            // -1/2 log(1 + 2^((1-p)/2) + 2^-p + 2^((1-3p)/2) + 2^-2p)
            let arg = ConstantExpr::sum(vec![
                one,
                pow2_expr(1 - pi64),
                pow2_expr(-2 * pi64),
                pow2_expr(1 - 3 * pi64),
                pow2_expr(-4 * pi64),
            ]);
            (
                ConstantExpr::mul(ConstantExpr::ratio(-1, 2), ConstantExpr::log(arg)),
                scale_inv_pow2(12 * p),
            )
        }
        FamilyId::ReDiffB => {
            // sqrt3/2 log( (1 + 2^(-(1+p)/2)(1 + sqrt3) + 2^-p)
            //              / (1 + 2^(-(1+p)/2)(1 - sqrt3) + 2^-p) )
            let q = pow2_expr(-(1 + pi64));
            let num = ConstantExpr::sum(vec![
                one.clone(),
                ConstantExpr::mul(q.clone(), ConstantExpr::add(one.clone(), sqrt3.clone())),
                pow2_expr(-2 * pi64),
            ]);
            let den = ConstantExpr::sum(vec![
                one.clone(),
                ConstantExpr::mul(q, ConstantExpr::sub(one, sqrt3.clone())),
                pow2_expr(-2 * pi64),
            ]);
            (
                ConstantExpr::mul(
                    ConstantExpr::mul(sqrt3, ConstantExpr::ratio(1, 2)),
                    ConstantExpr::log(ConstantExpr::div(num, den)),
                ),
                Rational::new(big(3), BigInt::one() << (12 * p) as u64),
            )
        }
        FamilyId::ImSumB => {
            // sqrt3 atan( (1 + 2^((p+1)/2)) / (-1 + 2^((p+1)/2) + 2^(p+1)) * sqrt3 )
            let g = pow2_expr(pi64 + 1);
            let num = ConstantExpr::add(one.clone(), g.clone());
            let den = ConstantExpr::sum(vec![ConstantExpr::neg(one), g, pow2_expr(2 * (pi64 + 1))]);
            (
                ConstantExpr::mul(
                    sqrt3.clone(),
                    ConstantExpr::atan(ConstantExpr::mul(ConstantExpr::div(num, den), sqrt3)),
                ),
                Rational::new(big(3), BigInt::one() << (12 * p) as u64),
            )
        }
        FamilyId::ImDiffB => {
            // atan( (2^((1-p)/2) + 1) / (2^((1+p)/2) + 1) )
            let num = ConstantExpr::add(pow2_expr(1 - pi64), one.clone());
            let den = ConstantExpr::add(pow2_expr(1 + pi64), one);
            (
                ConstantExpr::atan(ConstantExpr::div(num, den)),
                scale_inv_pow2(12 * p),
            )
        }
    };
    Ok(ScaledFormula {
        name: format!("{}-deg1-p{}", id.slug(), p),
        p_param: Some(p),
        scale,
        sqrt3_power: 0,
        formula: base.formula,
        lhs,
    })
}

/// Exact tangent of omega_1..omega_4 as a surd expression in p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaSpec {
    pub index: u8,
}

impl OmegaSpec {
    pub fn new(index: u8) -> Result<OmegaSpec, GenError> {
        if (1..=4).contains(&index) {
            Ok(OmegaSpec { index })
        } else {
            Err(GenError::BadDegree2Index)
        }
    }

    /// tan(omega_i) = (sqrt3 -+ 1) / (sqrt2^(p+3) -+ sqrt3 -+ 1).
    pub fn tangent_expr(&self, p: u32) -> ConstantExpr {
        let sqrt3 = ConstantExpr::Sqrt(3);
        let one = ConstantExpr::int(1);
        let root = ConstantExpr::pow2_half(p as i64 + 3);
        let (num, den) = match self.index {
            1 => (
                ConstantExpr::sub(sqrt3.clone(), one.clone()),
                ConstantExpr::sub(root, ConstantExpr::add(sqrt3, one)),
            ),
            2 => (
                ConstantExpr::add(sqrt3.clone(), one.clone()),
                ConstantExpr::sum(vec![root, sqrt3, ConstantExpr::neg(one)]),
            ),
            3 => (
                ConstantExpr::add(sqrt3.clone(), one.clone()),
                ConstantExpr::sum(vec![root, ConstantExpr::neg(sqrt3), one]),
            ),
            _ => (
                ConstantExpr::sub(sqrt3.clone(), one.clone()),
                ConstantExpr::sum(vec![root, sqrt3, one]),
            ),
        };
        ConstantExpr::div(num, den)
    }

    /// omega_i itself as an Atan node.
    pub fn angle_expr(&self, p: u32) -> ConstantExpr {
        ConstantExpr::atan(self.tangent_expr(p))
    }
}

/// The four degree-2 identities: same coefficient payload as the matching
/// Im family at s = 2, scale doubled to `1/2^(12p-1)`, and a
/// combination of Cl_2 values, p log 2 terms, and the 4G/3 or Cl2(pi/3)/2
/// constants on the left.
pub fn gen_degree2(index: u8, p: u32) -> Result<ScaledFormula, GenError> {
    check_p(p)?;
    let (family, om_lo, om_hi, lattice_shift_num) = match index {
        1 => (FamilyId::ImSumA, 1u8, 2u8, 1i64),
        2 => (FamilyId::ImDiffA, 1, 2, 1),
        3 => (FamilyId::ImSumB, 3, 4, 5),
        4 => (FamilyId::ImDiffB, 3, 4, 5),
        _ => return Err(GenError::BadDegree2Index),
    };
    let base = gen_family(family, 2, p)?;
    let lo = OmegaSpec::new(om_lo)?.angle_expr(p);
    let hi = OmegaSpec::new(om_hi)?.angle_expr(p);
    let p_log2 = ConstantExpr::mul(
        ConstantExpr::int(p as i64),
        ConstantExpr::log(ConstantExpr::int(2)),
    );
    let two = ConstantExpr::int(2);
    let two_lo = ConstantExpr::mul(two.clone(), lo.clone());
    let two_hi = ConstantExpr::mul(two, hi.clone());
    // the lattice angles paired with each omega: 2x1 and pi - 2x2 offsets
    let shift_lo = angle_expr(lattice_shift_num, 6);
    let shift_hi = angle_expr(6 - lattice_shift_num, 6);
    let is_sum = matches!(index, 1 | 3);
    let mut terms = Vec::new();
    if is_sum {
        // -(lo + hi) p log2 + Cl2(2lo) + Cl2(2hi)
        //   - Cl2(2lo + shift_lo) + Cl2(-2hi + shift_hi) ± Cl2(pi/3)/2
        terms.push(ConstantExpr::neg(ConstantExpr::mul(
            ConstantExpr::add(lo, hi),
            p_log2,
        )));
        terms.push(ConstantExpr::cl2x(two_lo.clone()));
        terms.push(ConstantExpr::cl2x(two_hi.clone()));
        terms.push(ConstantExpr::neg(ConstantExpr::cl2x(ConstantExpr::add(
            two_lo, shift_lo,
        ))));
        terms.push(ConstantExpr::cl2x(ConstantExpr::add(
            ConstantExpr::neg(two_hi),
            shift_hi,
        )));
        let half_cl2 = ConstantExpr::mul(
            ConstantExpr::ratio(1, 2),
            ConstantExpr::Cl2(Angle::of(1, 3)),
        );
        terms.push(if index == 1 {
            half_cl2
        } else {
            ConstantExpr::neg(half_cl2)
        });
    } else {
        // (hi - lo) p log2 + Cl2(2lo) - Cl2(2hi)
        //   - Cl2(2lo + shift_lo) - Cl2(-2hi + shift_hi) + 4G/3
        terms.push(ConstantExpr::mul(ConstantExpr::sub(hi, lo), p_log2));
        terms.push(ConstantExpr::cl2x(two_lo.clone()));
        terms.push(ConstantExpr::neg(ConstantExpr::cl2x(two_hi.clone())));
        terms.push(ConstantExpr::neg(ConstantExpr::cl2x(ConstantExpr::add(
            two_lo, shift_lo,
        ))));
        terms.push(ConstantExpr::neg(ConstantExpr::cl2x(ConstantExpr::add(
            ConstantExpr::neg(two_hi),
            shift_hi,
        ))));
        terms.push(ConstantExpr::mul(
            ConstantExpr::ratio(4, 3),
            ConstantExpr::Catalan,
        ));
    }
    Ok(ScaledFormula {
        name: format!("deg2-{}-p{}", index, p),
        p_param: Some(p),
        scale: Rational::new(BigInt::one(), BigInt::one() << (12 * p - 1) as u64),
        sqrt3_power: base.sqrt3_power,
        formula: base.formula,
        lhs: ConstantExpr::sum(terms),
    })
}

fn vec_i64(values: [i64; 24]) -> Vec<BigInt> {
    values.into_iter().map(big).collect()
}

fn pf(degree: u32, base_log2: u32, coeffs: [i64; 24]) -> PFormula {
    PFormula::new(degree, base_log2, vec_i64(coeffs)).expect("catalog formula shape")
}

/// Everything the catalog knows about one named formula.
fn entry(
    name: &str,
    p_param: Option<u32>,
    scale: Rational,
    sqrt3_power: u8,
    formula: PFormula,
    lhs: ConstantExpr,
) -> ScaledFormula {
    ScaledFormula {
        name: name.to_string(),
        p_param,
        scale,
        sqrt3_power,
        formula,
        lhs,
    }
}

/// The named particular formulas and zero relations.
pub struct Catalog {
    pub scaled: Vec<ScaledFormula>,
    pub zeros: Vec<ZeroRelation>,
}

impl Catalog {
    pub fn find_scaled(&self, name: &str) -> Option<&ScaledFormula> {
        self.scaled.iter().find(|s| s.name == name)
    }

    pub fn find_zero(&self, name: &str) -> Option<&ZeroRelation> {
        self.zeros.iter().find(|z| z.name == name)
    }
}

/// The fixed catalog of named formulas and zero relations.
pub fn catalog() -> Catalog {
    let scaled = vec![
        entry(
            "log2",
            Some(1),
            Rational::new(big(1), big(1) << 12),
            0,
            pf(
                1,
                12,
                [
                    2048, 0, 2048, 1024, -512, 0, 256, -256, -256, 0, -64, -128, -32, 0, -32, -16,
                    8, 0, -4, 4, 4, 0, 1, 2,
                ],
            ),
            ConstantExpr::log(ConstantExpr::int(2)),
        ),
        entry(
            "pi_sqrt3",
            Some(1),
            Rational::new(big(9), big(1) << 12),
            0,
            pf(
                1,
                12,
                [
                    2048, 0, 0, 1024, 512, 0, 256, 256, 0, 0, 64, 0, -32, 0, 0, -16, -8, 0, -4, -4,
                    0, 0, -1, 0,
                ],
            ),
            ConstantExpr::mul(ConstantExpr::Pi, ConstantExpr::Sqrt(3)),
        ),
        entry(
            "sqrt3_log_2_plus_sqrt3",
            Some(1),
            Rational::new(big(3), big(1) << 12),
            0,
            pf(
                1,
                12,
                [
                    2048, 2048, 0, 0, 512, 0, -256, 0, 0, -128, -64, 0, -32, -32, 0, 0, -8, 0, 4,
                    0, 0, 2, 1, 0,
                ],
            ),
            ConstantExpr::mul(
                ConstantExpr::Sqrt(3),
                ConstantExpr::log(ConstantExpr::add(
                    ConstantExpr::int(2),
                    ConstantExpr::Sqrt(3),
                )),
            ),
        ),
        entry(
            "arctan_1_6",
            Some(3),
            Rational::new(big(1), big(1) << 35),
            0,
            pf(
                1,
                36,
                [
                    8589934592,
                    -4294967296,
                    -2147483648,
                    0,
                    -134217728,
                    -134217728,
                    -16777216,
                    0,
                    -4194304,
                    -1048576,
                    262144,
                    0,
                    -32768,
                    16384,
                    8192,
                    0,
                    512,
                    512,
                    64,
                    0,
                    16,
                    4,
                    -1,
                    0,
                ],
            ),
            ConstantExpr::atan(ConstantExpr::ratio(1, 6)),
        ),
        entry(
            "im_li2_half_pi3",
            None,
            Rational::new(big(1), big(1) << 10),
            1,
            pf(
                2,
                12,
                [
                    0, 1024, 0, 512, 0, 0, 0, -128, 0, -64, 0, 0, 0, 16, 0, 8, 0, 0, 0, -2, 0, -1,
                    0, 0,
                ],
            ),
            ConstantExpr::ImLi {
                s: 2,
                p: 2,
                x: Angle::of(1, 3),
            },
        ),
        entry(
            "sqrt3_cl2_pi3",
            None,
            Rational::new(big(9), big(5) << 10),
            0,
            pf(
                2,
                12,
                [
                    2048, -4096, 0, -1024, 512, 0, 256, 768, 0, 256, 64, 0, -32, -64, 0, -48, -8,
                    0, -4, 4, 0, 4, -1, 0,
                ],
            ),
            ConstantExpr::mul(ConstantExpr::Sqrt(3), ConstantExpr::Cl2(Angle::of(1, 3))),
        ),
        entry(
            "pi_sqrt3_log2",
            None,
            Rational::new(big(9), big(1) << 10),
            0,
            pf(
                2,
                12,
                [
                    2048, -6144, 0, -2048, 512, 0, 256, 1024, 0, 384, 64, 0, -32, -96, 0, -64, -8,
                    0, -4, 8, 0, 6, -1, 0,
                ],
            ),
            ConstantExpr::mul(
                ConstantExpr::mul(ConstantExpr::Pi, ConstantExpr::Sqrt(3)),
                ConstantExpr::log(ConstantExpr::int(2)),
            ),
        ),
        entry(
            "catalan_g",
            Some(1),
            Rational::new(big(3), big(1) << 12),
            0,
            // final nonzero coefficient is -1; the +1 this formula is
            // sometimes quoted with contradicts its defining identities
            // (see tests)
            pf(
                2,
                12,
                [
                    2048, -2048, -2048, 0, -512, -1024, -256, 0, -256, -128, 64, 0, -32, 32, 32, 0,
                    8, 16, 4, 0, 4, 2, -1, 0,
                ],
            ),
            ConstantExpr::Catalan,
        ),
        entry(
            "cl2_pi3_log2",
            Some(1),
            Rational::new(big(1), big(1) << 11),
            1,
            pf(
                2,
                12,
                [
                    2048, 0, 0, 1024, 512, 0, 256, 256, 0, 0, 64, 0, -32, 0, 0, -16, -8, 0, -4, -4,
                    0, 0, -1, 0,
                ],
            ),
            // -(pi/3) log 2 + (5/2) Cl2(pi/3)
            ConstantExpr::add(
                ConstantExpr::neg(ConstantExpr::mul(
                    ConstantExpr::div(ConstantExpr::Pi, ConstantExpr::int(3)),
                    ConstantExpr::log(ConstantExpr::int(2)),
                )),
                ConstantExpr::mul(
                    ConstantExpr::ratio(5, 2),
                    ConstantExpr::Cl2(Angle::of(1, 3)),
                ),
            ),
        ),
        entry(
            "pi_sqrt3_alt",
            None,
            Rational::new(big(9), big(1) << 10),
            0,
            pf(
                1,
                12,
                [
                    0, 1024, 0, 512, 0, 0, 0, -128, 0, -64, 0, 0, 0, 16, 0, 8, 0, 0, 0, -2, 0, -1,
                    0, 0,
                ],
            ),
            ConstantExpr::mul(ConstantExpr::Pi, ConstantExpr::Sqrt(3)),
        ),
    ];
    let zeros = vec![
        ZeroRelation {
            name: "Z1".into(),
            formula: pf(
                1,
                12,
                [
                    2048, -4096, 0, -1024, 512, 0, 256, 768, 0, 256, 64, 0, -32, -64, 0, -48, -8,
                    0, -4, 4, 0, 4, -1, 0,
                ],
            ),
        },
        ZeroRelation {
            name: "Z2".into(),
            formula: pf(
                1,
                12,
                [
                    2048, -4096, 2048, -1024, -512, -1024, 256, -768, -256, -256, -64, -256, -32,
                    -64, -32, -48, 8, -16, -4, -4, 4, -4, 1, 0,
                ],
            ),
        },
        ZeroRelation {
            name: "Z3".into(),
            formula: pf(
                1,
                12,
                [
                    -2048, 2048, 2048, 0, 512, 1024, 256, 0, 256, 128, -64, 0, 32, -32, -32, 0, -8,
                    -16, -4, 0, -4, -2, 1, 0,
                ],
            ),
        },
        ZeroRelation {
            name: "Z4".into(),
            formula: pf(
                1,
                12,
                [
                    2048, 0, -4096, -3072, -512, 0, 256, 768, 512, 0, -64, 0, -32, 0, 64, 48, 8, 0,
                    -4, -12, -8, 0, 1, 0,
                ],
            ),
        },
        ZeroRelation {
            name: "Z5".into(),
            formula: pf(
                1,
                12,
                [
                    2048, -8192, 2048, 5120, -512, 1024, 256, 768, -256, -512, -64, -256, -32,
                    -128, -32, 48, 8, 16, -4, 20, 4, -8, 1, 0,
                ],
            ),
        },
    ];
    Catalog { scaled, zeros }
}

/// How a catalog entry's vector relates to a generator family's payload:
/// `catalog_A = factor * family_A(p)` coefficient-by-coefficient.
pub fn family_provenance(name: &str) -> Option<(FamilyId, u32, Rational)> {
    match name {
        "log2" => Some((FamilyId::ReSumA, 1, Rational::one())),
        "pi_sqrt3" => Some((FamilyId::ImSumA, 1, Rational::one())),
        "sqrt3_log_2_plus_sqrt3" => Some((FamilyId::ReDiffA, 1, Rational::one())),
        "arctan_1_6" => Some((FamilyId::ImDiffA, 3, crate::exact::rat(-1, 2))),
        "catalan_g" => Some((FamilyId::ImDiffA, 1, crate::exact::rat(-1, 1))),
        "cl2_pi3_log2" => Some((FamilyId::ImSumA, 1, Rational::one())),
        _ => None,
    }
}
