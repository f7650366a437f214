//! Closed-form rank and dimension predictions, in exact integer arithmetic.
//!
//! For `q = 2^t` the predictions involve the power sums
//! `a_n = r^n + s^n` of the roots `r, s = (1 ± sqrt 17) / 2` of
//! `x^2 - x - 4`, which satisfy `a_0 = 2`, `a_1 = 1`,
//! `a_n = a_(n-1) + 4 a_(n-2)`. The surd form is only ever evaluated in
//! floating point by tests, as a cross-check.

use thiserror::Error;

use crate::field::prime_power;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is even; use the characteristic-two formulas")]
    EvenQ(u64),
    #[error("t must be at least 1")]
    ZeroT,
    #[error("integer overflow evaluating the formula")]
    Overflow,
}

/// Predicted 2-ranks and code dimension for one field order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankPrediction {
    pub q: u64,
    /// Exponent with `q = p^t`.
    pub t: u32,
    pub rank_pl: u128,
    pub rank_p1l1: u128,
    pub dim_lu: u128,
    pub even: bool,
}

impl RankPrediction {
    /// `rank_pl - rank_p1l1`, which is `2q` in every case.
    pub fn gap(&self) -> u128 {
        self.rank_pl - self.rank_p1l1
    }
}

/// `a_n` of the recurrence `a_n = a_(n-1) + 4 a_(n-2)`, `a_0 = 2`, `a_1 = 1`.
pub fn lucas17(n: u32) -> Result<u128, FormulaError> {
    let (mut prev, mut cur) = (2u128, 1u128);
    if n == 0 {
        return Ok(prev);
    }
    for _ in 1..n {
        let next = cur
            .checked_add(prev.checked_mul(4).ok_or(FormulaError::Overflow)?)
            .ok_or(FormulaError::Overflow)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Predictions for `q = 2^t`.
pub fn predict_even(t: u32) -> Result<RankPrediction, FormulaError> {
    if t == 0 {
        return Err(FormulaError::ZeroT);
    }
    if t > 40 {
        return Err(FormulaError::Overflow);
    }
    let a = lucas17(2 * t)?;
    let q = 1u128 << t;
    let rank_pl = 1 + a;
    let rank_p1l1 = rank_pl.checked_sub(2 * q).ok_or(FormulaError::Overflow)?;
    let dim_lu = (q * q * q + 2 * q).checked_sub(1 + a).ok_or(FormulaError::Overflow)?;
    Ok(RankPrediction { q: q as u64, t, rank_pl, rank_p1l1, dim_lu, even: true })
}

/// Predictions for an odd prime power `q`.
pub fn predict_odd(q: u64) -> Result<RankPrediction, FormulaError> {
    let (p, t) = prime_power(q).ok_or(FormulaError::NotPrimePower(q))?;
    if p == 2 {
        return Err(FormulaError::EvenQ(q));
    }
    let qq = q as u128;
    let q2 = qq.checked_mul(qq).ok_or(FormulaError::Overflow)?;
    let q3 = q2.checked_mul(qq).ok_or(FormulaError::Overflow)?;
    let rank_pl = (q3 + 2 * q2 + qq + 2) / 2;
    let rank_p1l1 = (q3 + 2 * q2 + 2 - 3 * qq) / 2;
    let dim_lu = (q3 + 3 * qq - 2 * q2 - 2) / 2;
    Ok(RankPrediction { q, t, rank_pl, rank_p1l1, dim_lu, even: false })
}

/// Dispatches on the characteristic of `q`.
pub fn predict(q: u64) -> Result<RankPrediction, FormulaError> {
    let (p, t) = prime_power(q).ok_or(FormulaError::NotPrimePower(q))?;
    if p == 2 {
        predict_even(t)
    } else {
        predict_odd(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The surd expression evaluated in floating point.
    fn surd(n: u32) -> f64 {
        let s = 17f64.sqrt();
        ((1.0 + s) / 2.0).powi(n as i32) + ((1.0 - s) / 2.0).powi(n as i32)
    }

    #[test]
    fn recurrence_values() {
        assert_eq!(lucas17(0).unwrap(), 2);
        assert_eq!(lucas17(1).unwrap(), 1);
        assert_eq!(lucas17(2).unwrap(), 9);
        assert_eq!(lucas17(4).unwrap(), 49);
        assert_eq!(lucas17(6).unwrap(), 297);
        assert_eq!(lucas17(8).unwrap(), 1889);
    }

    #[test]
    fn recurrence_matches_surd() {
        for n in 0..=20 {
            let exact = lucas17(n).unwrap() as f64;
            assert!((exact - surd(n)).abs() < 0.5, "n = {n}");
        }
    }

    #[test]
    fn even_table() {
        let expect = [(1, 6, 10, 2), (2, 42, 50, 22), (3, 282, 298, 230), (4, 1858, 1890, 2238)];
        for (t, p1l1, pl, dim) in expect {
            let r = predict_even(t).unwrap();
            assert_eq!((r.rank_p1l1, r.rank_pl, r.dim_lu), (p1l1, pl, dim), "t = {t}");
        }
    }

    #[test]
    fn odd_table() {
        let r = predict_odd(3).unwrap();
        assert_eq!((r.rank_pl, r.rank_p1l1, r.dim_lu), (25, 19, 8));
        let r = predict_odd(5).unwrap();
        assert_eq!((r.rank_pl, r.rank_p1l1, r.dim_lu), (91, 81, 44));
        assert_eq!(predict_odd(8), Err(FormulaError::EvenQ(8)));
        assert_eq!(predict_odd(15), Err(FormulaError::NotPrimePower(15)));
    }

    #[test]
    fn identities() {
        for t in 1..=10 {
            let r = predict_even(t).unwrap();
            let q = r.q as u128;
            assert_eq!(r.dim_lu, q * q * q - r.rank_p1l1);
            assert_eq!(r.gap(), 2 * q);
        }
        for q in [3u64, 5, 7, 9] {
            let r = predict_odd(q).unwrap();
            let qq = q as u128;
            assert_eq!(r.dim_lu, qq * qq * qq - r.rank_p1l1);
            assert_eq!(r.gap(), 2 * qq);
        }
    }
}
