//! Oracle parameters: derived from `(ε, d, h)`, or supplied directly.
//!
//! Derived mode takes the smallest integer `k` with
//! `k >= 2886000 d⁵ (h+1)⁵ (2h+3)! (1 + ⌈log₂ k⌉ + ⌈log₂ (2h+3)!⌉) / ε³`
//! and then the largest `δ = ε / (100 (2h+3)! (1 + ⌈log₂ k⌉ + ⌈log₂ (2h+3)!⌉))`,
//! which together give `k >= 28860 d⁵ (h+1)⁵ / (δ ε²)`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::neighborhood::SearchBudget;
use crate::rational::Rational;

/// Constant `C` in the per-call oracle query bound `C · d · k^(4h+7)`.
pub const ORACLE_QUERY_BOUND_CONSTANT: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParameterMode {
    Theoretical,
    Practical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleParams {
    pub epsilon: Rational,
    pub d: usize,
    pub h: usize,
    pub k: u64,
    pub delta: Rational,
    /// Always `2(h+1)`.
    pub c: usize,
    pub seed: u64,
    pub mode: ParameterMode,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("epsilon must lie strictly between 0 and 1/2")]
    Epsilon,
    #[error("delta must lie strictly between 0 and 1")]
    Delta,
    #[error("degree bound must be at least {min}, got {got}")]
    Degree { min: usize, got: usize },
    #[error("treewidth bound must be at least 1")]
    Height,
    #[error("k must be at least 1")]
    K,
    #[error("derived parameters do not fit in 64-bit arithmetic")]
    Overflow,
}

fn check_epsilon(epsilon: &Rational) -> Result<(), ParamError> {
    if epsilon.numer().is_zero() || *epsilon >= Ratio::new(1, 2) {
        return Err(ParamError::Epsilon);
    }
    Ok(())
}

impl OracleParams {
    /// Explicit `k` and `δ`; `c = 2(h+1)`.
    pub fn practical(
        epsilon: Rational,
        d: usize,
        h: usize,
        k: u64,
        delta: Rational,
        seed: u64,
    ) -> Result<Self, ParamError> {
        check_epsilon(&epsilon)?;
        if delta.numer().is_zero() || delta >= Ratio::from_integer(1) {
            return Err(ParamError::Delta);
        }
        if d == 0 {
            return Err(ParamError::Degree { min: 1, got: d });
        }
        if k == 0 {
            return Err(ParamError::K);
        }
        Ok(OracleParams {
            epsilon,
            d,
            h,
            k,
            delta,
            c: 2 * (h + 1),
            seed,
            mode: ParameterMode::Practical,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `C · max(d, 1) · k^(4h+7)` with `C = ORACLE_QUERY_BOUND_CONSTANT`, saturating.
    pub fn call_query_bound(&self) -> u64 {
        let pow = self.k.saturating_pow(u32::try_from(4 * self.h + 7).unwrap_or(u32::MAX));
        ORACLE_QUERY_BOUND_CONSTANT
            .saturating_mul(self.d.max(1) as u64)
            .saturating_mul(pow)
    }

    pub fn budget(&self) -> SearchBudget {
        let k = usize::try_from(self.k).expect("k fits in usize");
        SearchBudget::new(k, self.delta, self.c).expect("params are validated")
    }
}

/// `⌈log₂ x⌉` for `x >= 1`.
pub fn ceil_log2(x: &BigUint) -> u64 {
    if x.is_zero() || x.is_one() {
        return 0;
    }
    (x - 1u32).bits()
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Parameters satisfying the conductance and size inequalities, seed 0.
pub fn derive_parameters(epsilon: Rational, d: usize, h: usize) -> Result<OracleParams, ParamError> {
    check_epsilon(&epsilon)?;
    if d < 2 {
        return Err(ParamError::Degree { min: 2, got: d });
    }
    if h < 1 {
        return Err(ParamError::Height);
    }
    let (p, q) = (BigUint::from(*epsilon.numer()), BigUint::from(*epsilon.denom()));
    let fact = factorial(2 * h as u64 + 3);
    let lf = ceil_log2(&fact);
    let hp = BigUint::from(h as u64 + 1);
    let dd = BigUint::from(d as u64);
    // RHS(k) = base · (1 + ⌈log₂ k⌉ + lf) · q³ / p³
    let base = BigUint::from(2_886_000u64) * dd.pow(5) * hp.pow(5) * &fact * q.pow(3);
    let denom = p.pow(3);
    let rhs_ceil = |k: &BigUint| -> BigUint {
        let num = &base * (1 + ceil_log2(k) + lf);
        let (quot, rem) = num.div_rem(&denom);
        if rem.is_zero() { quot } else { quot + 1u32 }
    };
    let mut k = BigUint::one();
    loop {
        let next = rhs_ceil(&k);
        if next == k {
            break;
        }
        k = next;
    }
    let logs = 1 + ceil_log2(&k) + lf;
    let k = k.to_u64().ok_or(ParamError::Overflow)?;
    let delta_denom = (q * 100u32 * &fact * logs).to_u64().ok_or(ParamError::Overflow)?;
    let delta = Ratio::new(*epsilon.numer(), delta_denom);
    Ok(OracleParams {
        epsilon,
        d,
        h,
        k,
        delta,
        c: 2 * (h + 1),
        seed: 0,
        mode: ParameterMode::Theoretical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        let l = |x: u64| ceil_log2(&BigUint::from(x));
        assert_eq!((l(1), l(2), l(3), l(4), l(5), l(8), l(9)), (0, 1, 2, 2, 3, 3, 4));
        assert_eq!(l(120), 7);
    }

    #[test]
    fn cut_bound_follows_height() {
        for h in 1..3 {
            let p = derive_parameters(Ratio::new(2, 5), 3, h).unwrap();
            assert_eq!(p.c, 2 * (h + 1));
        }
        // k passes 2^64 at h = 3
        assert_eq!(derive_parameters(Ratio::new(2, 5), 3, 3), Err(ParamError::Overflow));
    }

    #[test]
    fn derived_k_satisfies_size_inequality() {
        let p = derive_parameters(Ratio::new(2, 5), 3, 1).unwrap();
        // k δ ε² >= 28860 d⁵ (h+1)⁵, in exact big arithmetic
        let lhs = BigUint::from(p.k) * BigUint::from(*p.delta.numer()) * 4u32;
        let rhs = BigUint::from(28860u64 * 243 * 32) * BigUint::from(*p.delta.denom()) * 25u32;
        assert!(lhs >= rhs);
    }

    #[test]
    fn smaller_epsilon_needs_larger_k() {
        let a = derive_parameters(Ratio::new(2, 5), 3, 1).unwrap();
        let b = derive_parameters(Ratio::new(1, 5), 3, 1).unwrap();
        assert!(b.k >= a.k);
        assert!(b.delta <= a.delta);
    }

    #[test]
    fn range_checks() {
        assert_eq!(derive_parameters(Ratio::new(1, 2), 3, 1), Err(ParamError::Epsilon));
        assert_eq!(derive_parameters(Ratio::new(1, 5), 1, 1), Err(ParamError::Degree { min: 2, got: 1 }));
        assert_eq!(derive_parameters(Ratio::new(1, 5), 3, 0), Err(ParamError::Height));
        assert_eq!(
            OracleParams::practical(Ratio::new(1, 5), 3, 1, 20, Ratio::new(1, 1), 0),
            Err(ParamError::Delta)
        );
        assert_eq!(
            OracleParams::practical(Ratio::new(1, 5), 3, 1, 0, Ratio::new(1, 5), 0),
            Err(ParamError::K)
        );
    }
}
