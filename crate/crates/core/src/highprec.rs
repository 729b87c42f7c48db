//! High-precision reals with a certified-digits tag, and the roots of the
//! Perrin characteristic polynomial `x^3 - x - 1`.
//!
//! Every [`HpReal`] carries the number of significant decimal digits that are
//! guaranteed correct. Arithmetic propagates that count: multiplication and
//! division lose at most a fraction of a digit, subtraction loses the digits
//! that cancel. Values are stored in MPFR floats with 64 guard bits beyond the
//! context precision, so rounding inside a single operation never eats into
//! the certified digits.
//!
//! Decisions that steer control flow (signs, floors, nearest integers) go
//! through [`HpReal::certified_sign`], [`HpReal::floor_certified`] and
//! [`nearest_int_dist`], which refuse to answer when the error bound is too
//! close to the decision boundary.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Assign, Float, Integer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Smallest precision accepted by [`RealContext::new`].
pub const MIN_PRECISION_DIGITS: u32 = 50;
/// Precision used by the pipeline unless overridden.
pub const DEFAULT_PRECISION_DIGITS: u32 = 1000;
/// Safety margin, in decimal digits, required before a sign or floor is trusted.
pub const GUARD_DIGITS: u32 = 10;

const GUARD_BITS: u32 = 64;
const LOG2_10: f64 = std::f64::consts::LOG2_10;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// Working precision for high-precision computations.
///
/// A context is a plain value; there is no global precision state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RealContext {
    digits: u32,
}

impl RealContext {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_PRECISION_DIGITS {
            return Err(Error::PrecisionTooLow {
                requested: digits,
                minimum: MIN_PRECISION_DIGITS,
            });
        }
        Ok(Self { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Binary precision of the underlying floats, guard bits included.
    pub fn bits(self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// The context used when a decision is unresolved: twice the digits.
    pub fn escalated(self) -> Self {
        Self {
            digits: self.digits.saturating_mul(2),
        }
    }

    /// An integer, exact whenever it fits in the working precision.
    pub fn int(self, n: impl Into<Integer>) -> HpReal {
        let n: Integer = n.into();
        let (value, ord) = Float::with_val_round(self.bits(), &n, Round::Nearest);
        HpReal::from_rounded(value, ord, self.digits)
    }

    /// `num / den`, rounded to the working precision.
    pub fn ratio(self, num: impl Into<Integer>, den: impl Into<Integer>) -> HpReal {
        self.int(num) / self.int(den)
    }

    /// Parse a decimal literal such as `"2.8e48"`.
    pub fn parse(self, literal: &str) -> Result<HpReal> {
        let parsed =
            Float::parse(literal).map_err(|e| Error::InvalidArgument(format!("not a number {literal:?}: {e}")))?;
        let (value, ord) = Float::with_val_round(self.bits(), parsed, Round::Nearest);
        Ok(HpReal::from_rounded(value, ord, self.digits))
    }
}

impl Default for RealContext {
    fn default() -> Self {
        Self {
            digits: DEFAULT_PRECISION_DIGITS,
        }
    }
}

/// A real number together with the count of decimal significant digits that
/// are certified correct.
#[derive(Debug, Clone)]
pub struct HpReal {
    value: Float,
    /// Certified relative digits; `f64::INFINITY` marks an exact value.
    digits: f64,
    /// Digits of the context the value was produced under.
    cap: u32,
}

fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mantissa, exp) = x.to_f64_exp();
    (mantissa.abs().log2() + f64::from(exp)) * LOG10_2
}

/// `-log10(10^-a + 10^-b)`: digits of a sum of two relative errors.
fn combine_digits(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if hi.is_infinite() {
        return lo;
    }
    lo - (1.0 + 10f64.powf(lo - hi)).log10()
}

/// `log10(10^a + 10^b)` for absolute error magnitudes.
fn log10_sum(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + 10f64.powf(lo - hi)).log10()
}

fn rounding_digits(prec: u32) -> f64 {
    f64::from(prec - 1) * LOG10_2
}

impl HpReal {
    fn from_rounded(value: Float, ord: Ordering, cap: u32) -> Self {
        let digits = if ord == Ordering::Equal {
            f64::INFINITY
        } else {
            rounding_digits(value.prec()).min(f64::from(cap))
        };
        Self { value, digits, cap }
    }

    fn with_digits(value: Float, ord: Ordering, propagated: f64, cap: u32) -> Self {
        let mut digits = propagated;
        if ord != Ordering::Equal {
            digits = combine_digits(digits, rounding_digits(value.prec()));
        }
        if digits.is_finite() {
            digits = digits.clamp(0.0, f64::from(cap));
        }
        Self { value, digits, cap }
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn is_exact(&self) -> bool {
        self.digits.is_infinite()
    }

    /// Certified significant digits, or `None` when the value is exact.
    pub fn certified_digits(&self) -> Option<u32> {
        if self.is_exact() {
            None
        } else {
            Some(self.digits.floor() as u32)
        }
    }

    /// Precision (in digits) of the context this value belongs to.
    pub fn context_digits(&self) -> u32 {
        self.cap
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// log10 of the absolute error bound; `-inf` for exact values.
    pub fn abs_error_log10(&self) -> f64 {
        if self.is_exact() {
            f64::NEG_INFINITY
        } else if self.value.is_zero() {
            // zero with no certified digits: error bound unknown
            f64::INFINITY
        } else {
            log10_abs(&self.value) - self.digits
        }
    }

    fn prec_with(&self, other: &Self) -> u32 {
        self.value.prec().max(other.value.prec())
    }

    fn additive(&self, other: &Self, value: Float, ord: Ordering) -> Self {
        let cap = self.cap.min(other.cap);
        let mut err = log10_sum(self.abs_error_log10(), other.abs_error_log10());
        if ord != Ordering::Equal {
            err = log10_sum(err, log10_abs(&value) - rounding_digits(value.prec()));
        }
        let digits = if err == f64::NEG_INFINITY {
            f64::INFINITY
        } else if value.is_zero() {
            0.0
        } else {
            (log10_abs(&value) - err).clamp(0.0, f64::from(cap))
        };
        Self { value, digits, cap }
    }

    pub fn abs(&self) -> Self {
        Self {
            value: self.value.clone().abs(),
            ..self.clone()
        }
    }

    /// Natural logarithm. The argument must be positive.
    pub fn ln(&self) -> Result<Self> {
        if self.certified_sign()? != Ordering::Greater {
            return Err(Error::InvalidArgument("logarithm of a non-positive value".into()));
        }
        let (value, ord) = Float::with_val_round(self.value.prec(), self.value.ln_ref(), Round::Nearest);
        if ord == Ordering::Equal && self.is_exact() {
            return Ok(Self {
                value,
                digits: f64::INFINITY,
                cap: self.cap,
            });
        }
        // |ln(x(1+r)) - ln x| <= |r| / (1 - |r|)
        let input_err = if self.is_exact() {
            f64::NEG_INFINITY
        } else {
            -self.digits - (1.0 - 10f64.powf(-self.digits)).log10()
        };
        let mut err = input_err;
        if ord != Ordering::Equal {
            err = log10_sum(err, log10_abs(&value) - rounding_digits(value.prec()));
        }
        let digits = if value.is_zero() {
            0.0
        } else {
            (log10_abs(&value) - err).clamp(0.0, f64::from(self.cap))
        };
        Ok(Self {
            value,
            digits,
            cap: self.cap,
        })
    }

    /// Integer power.
    pub fn powi(&self, exp: i64) -> Self {
        if exp == 0 {
            return Self {
                value: Float::with_val(self.value.prec(), 1),
                digits: f64::INFINITY,
                cap: self.cap,
            };
        }
        let (value, ord) = Float::with_val_round(self.value.prec(), (&self.value).pow(exp), Round::Nearest);
        let propagated = self.digits - (exp.unsigned_abs() as f64).log10();
        Self::with_digits(value, ord, propagated, self.cap)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.certified_sign()? == Ordering::Less {
            return Err(Error::InvalidArgument("square root of a negative value".into()));
        }
        let (value, ord) = Float::with_val_round(self.value.prec(), self.value.sqrt_ref(), Round::Nearest);
        Ok(Self::with_digits(value, ord, self.digits + 2f64.log10(), self.cap))
    }

    pub fn cbrt(&self) -> Self {
        let (value, ord) = Float::with_val_round(self.value.prec(), self.value.cbrt_ref(), Round::Nearest);
        Self::with_digits(value, ord, self.digits + 3f64.log10(), self.cap)
    }

    /// The sign, provided the value is exact or carries at least
    /// [`GUARD_DIGITS`] certified digits.
    pub fn certified_sign(&self) -> Result<Ordering> {
        if self.is_exact() {
            return Ok(self.value.cmp0().unwrap_or(Ordering::Equal));
        }
        if self.value.is_zero() || self.digits < f64::from(GUARD_DIGITS) {
            return Err(Error::Unresolved(format!(
                "sign of {} with {:.1} certified digits",
                self.to_decimal_string(12),
                self.digits
            )));
        }
        Ok(self.value.cmp0().unwrap_or(Ordering::Equal))
    }

    /// Certified comparison `self` vs `other`.
    pub fn certified_cmp(&self, other: &Self) -> Result<Ordering> {
        (self - other).certified_sign()
    }

    /// Floor, provided the fractional part is resolved with guard digits.
    pub fn floor_certified(&self) -> Result<Integer> {
        let floor = self.value.clone().floor();
        let mut frac = Float::with_val(self.value.prec(), &self.value - &floor);
        if !self.is_exact() {
            let margin = self.abs_error_log10() + f64::from(GUARD_DIGITS);
            let below = log10_abs(&frac);
            frac = Float::with_val(self.value.prec(), 1 - frac);
            let above = log10_abs(&frac);
            if below <= margin || above <= margin {
                return Err(Error::Unresolved(format!("floor of {}", self.to_decimal_string(20))));
            }
        }
        Ok(floor.to_integer().expect("finite floor"))
    }

    /// Decimal rendering with at most `max_sig` significant digits, and never
    /// more than are certified.
    pub fn to_decimal_string(&self, max_sig: usize) -> String {
        if self.value.is_zero() {
            return "0".into();
        }
        let certified = if self.is_exact() {
            max_sig
        } else {
            (self.digits.floor() as usize).max(1)
        };
        let sig = max_sig.min(certified).max(1);
        format_decimal(&self.value, sig)
    }
}

/// Plain decimal for moderate exponents, scientific otherwise.
fn format_decimal(x: &Float, sig: usize) -> String {
    let (neg, digits, exp) = x.to_sign_string_exp(10, Some(sig));
    let exp = exp.unwrap_or(0);
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if neg { "-" } else { "" };
    // value = 0.DIGITS * 10^exp
    let body = if (-20..=60).contains(&exp) {
        if exp <= 0 {
            format!("0.{}{}", "0".repeat(exp.unsigned_abs() as usize), digits)
        } else {
            let exp = exp as usize;
            if digits.len() <= exp {
                format!("{}{}", digits, "0".repeat(exp - digits.len()))
            } else {
                format!("{}.{}", &digits[..exp], &digits[exp..])
            }
        }
    } else {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{head}e{}", exp - 1)
        } else {
            format!("{head}.{tail}e{}", exp - 1)
        }
    };
    format!("{sign}{body}")
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(f.precision().unwrap_or(30)))
    }
}

impl Serialize for HpReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Tagged {
            value: String,
            certified_digits: Option<u32>,
        }
        Tagged {
            value: self.to_decimal_string(50),
            certified_digits: self.certified_digits(),
        }
        .serialize(serializer)
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $kind:ident) => {
        impl std::ops::$trait<&HpReal> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                let prec = self.prec_with(rhs);
                let (value, ord) = Float::with_val_round(
                    prec,
                    std::ops::$trait::$method(&self.value, &rhs.value),
                    Round::Nearest,
                );
                binary_op!(@finish $kind, self, rhs, value, ord)
            }
        }
        impl std::ops::$trait<HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
        impl std::ops::$trait<&HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                std::ops::$trait::$method(&self, rhs)
            }
        }
    };
    (@finish additive, $a:expr, $b:expr, $value:expr, $ord:expr) => {
        $a.additive($b, $value, $ord)
    };
    (@finish multiplicative, $a:expr, $b:expr, $value:expr, $ord:expr) => {
        HpReal::with_digits(
            $value,
            $ord,
            combine_digits($a.digits, $b.digits),
            $a.cap.min($b.cap),
        )
    };
}

binary_op!(Add, add, additive);
binary_op!(Sub, sub, additive);
binary_op!(Mul, mul, multiplicative);
binary_op!(Div, div, multiplicative);

impl std::ops::Mul<&Integer> for &HpReal {
    type Output = HpReal;
    fn mul(self, rhs: &Integer) -> HpReal {
        let (value, ord) = Float::with_val_round(self.value.prec(), &self.value * rhs, Round::Nearest);
        HpReal::with_digits(value, ord, self.digits, self.cap)
    }
}

impl std::ops::Neg for &HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal {
            value: -self.value.clone(),
            ..self.clone()
        }
    }
}

impl std::ops::Neg for HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        -&self
    }
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
///
/// Fails with [`Error::Unresolved`] unless the distance, and its gap to
/// `1/2`, each exceed the error bound of `x` by a factor of at least 10.
pub fn nearest_int_dist(x: &HpReal) -> Result<HpReal> {
    let nearest = x.value.clone().round();
    // x - round(x) is exact: both share the exponent range of x.
    let mut diff = Float::new(x.value.prec());
    diff.assign(&x.value - &nearest);
    let dist = diff.abs();
    if !x.is_exact() {
        let err = x.abs_error_log10() + 1.0;
        let half_gap = Float::with_val(x.value.prec(), 0.5 - &dist);
        if log10_abs(&dist) <= err || log10_abs(&half_gap) <= err {
            return Err(Error::Unresolved(format!(
                "nearest-integer distance of {}",
                x.to_decimal_string(20)
            )));
        }
    }
    let digits = if x.is_exact() {
        f64::INFINITY
    } else {
        (log10_abs(&dist) - x.abs_error_log10()).clamp(0.0, f64::from(x.cap))
    };
    Ok(HpReal {
        value: dist,
        digits,
        cap: x.cap,
    })
}

/// Which constant plays the role of the dominant Perrin root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMode {
    /// The real root of `x^3 - x - 1`.
    Corrected,
    /// The literal `(r1 + r2) / 6 = 31/24` used by the published scripts.
    PaperReplication,
}

impl RootMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RootMode::Corrected => "corrected",
            RootMode::PaperReplication => "paper-replication",
        }
    }
}

impl fmt::Display for RootMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RootMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(RootMode::Corrected),
            "paper-replication" | "paper_replication" => Ok(RootMode::PaperReplication),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

/// The dominant root `alpha` and the modulus `|beta| = |gamma| = alpha^(-1/2)`
/// of the complex pair.
#[derive(Debug, Clone)]
pub struct PerrinRoots {
    alpha: HpReal,
    beta_modulus: HpReal,
    mode: RootMode,
}

impl PerrinRoots {
    pub fn alpha(&self) -> &HpReal {
        &self.alpha
    }

    pub fn beta_modulus(&self) -> &HpReal {
        &self.beta_modulus
    }

    pub fn mode(&self) -> RootMode {
        self.mode
    }

    pub fn require_corrected(&self) -> Result<()> {
        match self.mode {
            RootMode::Corrected => Ok(()),
            RootMode::PaperReplication => Err(Error::RequiresCorrectedMode),
        }
    }
}

fn characteristic(x: &Float) -> Float {
    let prec = x.prec();
    let cube = Float::with_val(prec, x.pow(3u32));
    Float::with_val(prec, cube - x) - 1u32
}

fn characteristic_slope(x: &Float) -> Float {
    let prec = x.prec();
    Float::with_val(prec, x.square_ref()) * 3u32 - 1u32
}

/// Compute `alpha` for the requested mode.
///
/// Corrected mode brackets the root of `x^3 - x - 1` in `[1.32, 1.33]`,
/// bisects to ten digits, then switches to Newton's method. The result is
/// certified by a sign change of the cubic at `alpha * (1 -+ 10^-digits)`.
pub fn plastic_root(ctx: RealContext, mode: RootMode) -> Result<PerrinRoots> {
    let alpha = match mode {
        RootMode::Corrected => refine_plastic(ctx)?,
        RootMode::PaperReplication => ctx.ratio(31, 24),
    };
    let beta_modulus = ctx.int(1) / alpha.sqrt()?;
    Ok(PerrinRoots {
        alpha,
        beta_modulus,
        mode,
    })
}

fn refine_plastic(ctx: RealContext) -> Result<HpReal> {
    let bits = ctx.bits();
    let budget = 10 * ctx.digits();
    let mut iterations = 0u32;

    let mut lo = Float::with_val(bits, 132) / 100u32;
    let mut hi = Float::with_val(bits, 133) / 100u32;
    if characteristic(&lo).is_sign_positive() || characteristic(&hi).is_sign_negative() {
        return Err(Error::RootNotConverged { iterations });
    }
    let coarse = Float::with_val(bits, 1e-10);
    while Float::with_val(bits, &hi - &lo) > coarse {
        iterations += 1;
        if iterations > budget {
            return Err(Error::RootNotConverged { iterations });
        }
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        if characteristic(&mid).is_sign_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut x = Float::with_val(bits, &lo + &hi) / 2u32;
    loop {
        iterations += 1;
        if iterations > budget {
            return Err(Error::RootNotConverged { iterations });
        }
        let step = characteristic(&x) / characteristic_slope(&x);
        x -= &step;
        let tiny = step.is_zero() || step.get_exp().unwrap_or(i32::MIN) < x.get_exp().unwrap_or(0) - bits as i32 + 4;
        if tiny {
            break;
        }
    }

    let delta = Float::with_val(bits, Float::with_val(bits, 10u32).pow(-(ctx.digits() as i32))) * &x;
    let below = characteristic(&Float::with_val(bits, &x - &delta));
    let above = characteristic(&Float::with_val(bits, &x + &delta));
    if !(below.is_sign_negative() && above.is_sign_positive()) {
        return Err(Error::RootNotConverged { iterations });
    }
    Ok(HpReal {
        value: x,
        digits: f64::from(ctx.digits()),
        cap: ctx.digits(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RealContext {
        RealContext::new(200).unwrap()
    }

    #[test]
    fn context_precondition() {
        assert_eq!(RealContext::new(1000).unwrap().digits(), 1000);
        assert_eq!(RealContext::new(50).unwrap().digits(), 50);
        assert!(matches!(
            RealContext::new(10),
            Err(Error::PrecisionTooLow { requested: 10, .. })
        ));
        assert_eq!(RealContext::new(50).unwrap().escalated().digits(), 100);
    }

    /// Bisection alone, in f64: an oracle independent of the Newton path.
    fn bisect_plastic_f64() -> f64 {
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * mid - mid - 1.0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn corrected_alpha() {
        let roots = plastic_root(ctx(), RootMode::Corrected).unwrap();
        let alpha = roots.alpha();
        assert!((alpha.to_f64() - bisect_plastic_f64()).abs() < 1e-15);
        assert!(alpha.to_decimal_string(11).starts_with("1.3247179572"));
        assert!(alpha.to_f64() > 1.32 && alpha.to_f64() < 1.33);

        let residual = &(&alpha.powi(3) - alpha) - &ctx().int(1);
        assert!(residual.value().clone().abs() < Float::with_val(700, Float::i_exp(1, -(190.0 * LOG2_10) as i32)));

        let b = roots.beta_modulus().to_f64();
        assert!(b > 0.86 && b < 0.87);
        let one = &(roots.beta_modulus() * roots.beta_modulus()) * alpha;
        let gap = (&one - &ctx().int(1)).value().clone().abs();
        assert!(gap < Float::with_val(700, Float::i_exp(1, -(190.0 * LOG2_10) as i32)));
    }

    #[test]
    fn doubling_precision_agrees() {
        let lo = plastic_root(ctx(), RootMode::Corrected).unwrap();
        let hi = plastic_root(ctx().escalated(), RootMode::Corrected).unwrap();
        let a = lo.alpha().to_decimal_string(190);
        let b = hi.alpha().to_decimal_string(190);
        assert_eq!(a, b);
    }

    #[test]
    fn replication_alpha_is_31_over_24() {
        let roots = plastic_root(ctx(), RootMode::PaperReplication).unwrap();
        let expected = ctx().ratio(31, 24);
        assert_eq!(roots.alpha().value(), expected.value());
        assert!(roots.alpha().to_decimal_string(8).starts_with("1.291666"));
        // (r1 + r2) / 6 with r_{1,2} = (31 +- sqrt 69) / 8
        let s = ctx().int(69).sqrt().unwrap();
        let r1 = &(&ctx().int(31) + &s) / &ctx().int(8);
        let r2 = &(&ctx().int(31) - &s) / &ctx().int(8);
        let a = &(&r1 + &r2) / &ctx().int(6);
        assert_eq!(a.to_decimal_string(150), expected.to_decimal_string(150));
    }

    #[test]
    fn nearest_int_examples() {
        let c = ctx();
        assert_eq!(nearest_int_dist(&c.ratio(13, 4)).unwrap().to_f64(), 0.25);
        assert_eq!(nearest_int_dist(&c.ratio(-1, 2)).unwrap().to_f64(), 0.5);
        assert_eq!(nearest_int_dist(&c.int(7)).unwrap().to_f64(), 0.0);
        assert_eq!(nearest_int_dist(&c.ratio(-13, 4)).unwrap().to_f64(), 0.25);
    }

    #[test]
    fn nearest_int_unresolved_near_integer() {
        let c = RealContext::new(50).unwrap();
        // 10^60 + 1/3 has no resolvable fractional part at 50 digits.
        let x = &c.int(Integer::from(10).pow(60)) + &c.ratio(1, 3);
        assert!(matches!(nearest_int_dist(&x), Err(Error::Unresolved(_))));
    }

    #[test]
    fn cancellation_reduces_digits() {
        let c = ctx();
        let third = c.ratio(1, 3);
        let big = &c.int(Integer::from(10).pow(80)) + &third;
        let back = &big - &c.int(Integer::from(10).pow(80));
        let d = back.certified_digits().unwrap();
        assert!((110..=125).contains(&d), "{d}");
        assert!(back.to_decimal_string(20).starts_with("0.33333"));
    }

    #[test]
    fn certified_sign_and_floor() {
        let c = ctx();
        assert_eq!(c.ratio(-1, 3).certified_sign().unwrap(), Ordering::Less);
        assert_eq!(c.ratio(7, 2).floor_certified().unwrap(), 3);
        assert_eq!(c.ratio(-7, 2).floor_certified().unwrap(), -4);
        assert_eq!(c.int(5).floor_certified().unwrap(), 5);
        let tiny = &c.ratio(1, 3) - &c.ratio(1, 3);
        assert!(tiny.certified_sign().is_err());
    }

    #[test]
    fn ln_tracks_digits() {
        let c = ctx();
        let ln10 = c.int(10).ln().unwrap();
        assert!(ln10.to_decimal_string(12).starts_with("2.30258509299"));
        assert!(ln10.certified_digits().unwrap() >= 199);
        assert!(c.int(1).ln().unwrap().is_exact());
        assert!(c.int(-1).ln().is_err());
    }

    #[test]
    fn decimal_formatting() {
        let c = ctx();
        assert_eq!(c.ratio(1, 4).to_decimal_string(10), "0.25");
        assert_eq!(c.int(22).to_decimal_string(10), "22");
        assert_eq!(c.int(Integer::from(10).pow(70)).to_decimal_string(5), "1e70");
        assert_eq!(c.ratio(-3, 2000).to_decimal_string(4), "-0.0015");
    }

    #[test]
    fn mode_round_trip() {
        for mode in [RootMode::Corrected, RootMode::PaperReplication] {
            assert_eq!(mode.as_str().parse::<RootMode>().unwrap(), mode);
        }
        assert!("bogus".parse::<RootMode>().is_err());
    }
}
