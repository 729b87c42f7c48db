//! Exact Perrin numbers and numerical checks of the Binet estimates.

use std::cmp::Ordering;

use rug::Integer;

use crate::error::{Error, Result};
use crate::highprec::{HpReal, PerrinRoots, RealContext};

/// `P_n` together with its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerrinValue {
    pub index: u64,
    pub value: Integer,
}

/// Iterator over `P_0, P_1, P_2, ...` driven by `P_{n+3} = P_{n+1} + P_n`.
#[derive(Debug, Clone)]
pub struct PerrinIter {
    index: u64,
    window: [Integer; 3],
}

impl Default for PerrinIter {
    fn default() -> Self {
        Self {
            index: 0,
            window: [Integer::from(3), Integer::from(0), Integer::from(2)],
        }
    }
}

impl Iterator for PerrinIter {
    type Item = PerrinValue;

    fn next(&mut self) -> Option<PerrinValue> {
        // window = [P_n, P_{n+1}, P_{n+2}]
        let next = Integer::from(&self.window[0] + &self.window[1]);
        let current = std::mem::replace(&mut self.window[0], next);
        self.window.rotate_left(1);
        let value = PerrinValue {
            index: self.index,
            value: current,
        };
        self.index += 1;
        Some(value)
    }
}

pub fn perrin(n: u64) -> Integer {
    PerrinIter::default().nth(n as usize).expect("infinite iterator").value
}

/// `P_0 ..= P_limit`.
pub fn perrin_stream(limit: u64) -> Vec<PerrinValue> {
    PerrinIter::default().take(limit as usize + 1).collect()
}

/// `e(n) = P_n - alpha^n`. Defined for corrected-mode roots only.
pub fn binet_error(n: u64, roots: &PerrinRoots, ctx: RealContext) -> Result<HpReal> {
    roots.require_corrected()?;
    let power = roots.alpha().powi(n as i64);
    let err = &ctx.int(perrin(n)) - &power;
    match err.certified_digits() {
        Some(d) if d < crate::highprec::GUARD_DIGITS => Err(Error::Unresolved(format!(
            "e({n}) at {} digits: alpha^n cancels with P_n",
            ctx.digits()
        ))),
        _ => Ok(err),
    }
}

/// Whether `|e(n)| < 3 alpha^(-n/2)`.
pub fn binet_bound_holds(n: u64, roots: &PerrinRoots, ctx: RealContext) -> Result<bool> {
    let err = binet_error(n, roots, ctx)?.abs();
    // 3 alpha^(-n/2) = 3 * beta_modulus^n
    let bound = &ctx.int(3) * &roots.beta_modulus().powi(n as i64);
    Ok(err.certified_cmp(&bound)? == Ordering::Less)
}

/// Whether `alpha^(n-2) <= P_n <= alpha^(n+1)` holds at working precision.
pub fn growth_bounds_check(n: u64, roots: &PerrinRoots, ctx: RealContext) -> Result<bool> {
    roots.require_corrected()?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("growth bounds need n >= 2, got {n}")));
    }
    let value = ctx.int(perrin(n));
    let lower = roots.alpha().powi(n as i64 - 2);
    let upper = roots.alpha().powi(n as i64 + 1);
    let low_ok = lower.certified_cmp(&value)? != Ordering::Greater;
    let high_ok = value.certified_cmp(&upper)? != Ordering::Greater;
    Ok(low_ok && high_ok)
}
