//! Bernoulli numbers and polynomials, exact over the rationals.
//!
//! Convention: B_1 = -1/2, matching the generating function t e^(xt)/(e^t - 1).

use crate::exact::{big, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Mutex;
use std::sync::OnceLock;

fn cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= big((n - i) as i64);
        den *= big((i + 1) as i64);
    }
    num / den
}

/// B_n via the recurrence sum_{j<=n} C(n+1, j) B_j = 0 (n >= 1).
pub fn bernoulli_number(n: u64) -> Rational {
    let mut c = cache().lock().unwrap();
    while (c.len() as u64) <= n {
        let m = c.len() as u64;
        let mut acc = Rational::zero();
        for (j, bj) in c.iter().enumerate() {
            acc += Rational::from(binomial(m + 1, j as u64)) * bj;
        }
        let bm = -acc / Rational::from(big(m as i64 + 1));
        c.push(bm);
    }
    c[n as usize].clone()
}

/// Exact B_n(x) = sum_k C(n,k) B_k x^(n-k).
pub fn bernoulli_poly(n: u64, x: &Rational) -> Rational {
    // evaluate with a running power of x from the top coefficient down
    let mut acc = Rational::zero();
    let mut xpow = Rational::one();
    // k = n down to 0 pairs with x^(n-k): iterate k descending
    for k in (0..=n).rev() {
        acc += Rational::from(binomial(n, k)) * bernoulli_number(k) * &xpow;
        xpow *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn first_numbers() {
        // B_0..B_12 against the standard table
        let expect = [
            rat(1, 1),
            rat(-1, 2),
            rat(1, 6),
            rat(0, 1),
            rat(-1, 30),
            rat(0, 1),
            rat(1, 42),
            rat(0, 1),
            rat(-1, 30),
            rat(0, 1),
            rat(5, 66),
            rat(0, 1),
            rat(-691, 2730),
        ];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(&bernoulli_number(n as u64), e, "B_{n}");
        }
    }

    #[test]
    fn poly_basics() {
        assert_eq!(bernoulli_poly(0, &rat(7, 3)), rat(1, 1));
        // B_1(x) = x - 1/2
        assert_eq!(bernoulli_poly(1, &rat(1, 2)), rat(0, 1));
        // B_2(x) = x^2 - x + 1/6
        assert_eq!(bernoulli_poly(2, &rat(1, 2)), rat(-1, 12));
        assert_eq!(bernoulli_poly(2, &rat(0, 1)), rat(1, 6));
    }

    #[test]
    fn poly_symmetry() {
        // B_n(1-x) = (-1)^n B_n(x)
        for n in 0..10u64 {
            let x = rat(3, 7);
            let lhs = bernoulli_poly(n, &(rat(1, 1) - &x));
            let rhs = if n % 2 == 0 {
                bernoulli_poly(n, &x)
            } else {
                -bernoulli_poly(n, &x)
            };
            assert_eq!(lhs, rhs, "n={n}");
        }
    }
}
