//! The Dujella-Pethő reduction and the three stages that shrink the bounds on
//! `l`, `m` and `n`.
//!
//! Every stage reduces an inequality `|k' tau - n + mu| < A B^(-k)` with
//! `tau = log 10 / log alpha` and a combo-dependent `mu`. Since `tau` is the
//! same for every combo, its convergents and the products `M ||tau q||` are
//! computed once per stage in a [`TauTable`]; each combo then costs one
//! logarithm and a few multiplications.
//!
//! When the argument of the logarithm in `mu` is an exact power `10^j`, `mu`
//! equals `j tau` and `||mu q|| <= j ||tau q||`, so `epsilon` can never be
//! positive. Such combos are bounded instead through the best-approximation
//! property of convergents: `|s tau - n| > 1 / ((a + 2) s)` for `0 < s < M'`
//! where `a` is the largest partial quotient up to the first denominator
//! exceeding `M'`.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Integer;
use serde::Serialize;

use crate::bounds::ChainCheck;
use crate::contfrac::{convergents, Convergent};
use crate::error::{Error, Result};
use crate::highprec::{nearest_int_dist, plastic_root, HpReal, PerrinRoots, RealContext};
use crate::report::serialize_integer;

/// Convergents with `q > 6M` tried before giving up on a combo.
pub const MAX_ATTEMPTS: usize = 50;

/// Upper bound on `n` used by the published reduction, `2.8e48`.
pub fn published_big_m() -> Integer {
    Integer::from(28) * Integer::from(10).pow(47)
}

/// Parse a literal such as `2.8e48` into the exact integer it denotes.
pub fn parse_big_m(literal: &str) -> Result<Integer> {
    let bad = || Error::InvalidArgument(format!("M must be an integer literal > 1, got {literal:?}"));
    let literal = literal.trim();
    let (mantissa, exp) = match literal.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (literal, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let exp = exp - frac_part.len() as i64;
    let mut value: Integer = digits.parse().map_err(|_| bad())?;
    if exp >= 0 {
        value *= Integer::from(10).pow(u32::try_from(exp).map_err(|_| bad())?);
    } else {
        let divisor = Integer::from(10).pow(u32::try_from(-exp).map_err(|_| bad())?);
        let (q, r) = value.div_rem(divisor);
        if r != 0 {
            return Err(bad());
        }
        value = q;
    }
    if value <= 1 {
        return Err(bad());
    }
    Ok(value)
}

fn context_of(x: &HpReal) -> Result<RealContext> {
    RealContext::new(x.context_digits())
}

/// Inputs to one application of the reduction lemma.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub tau: HpReal,
    pub mu: HpReal,
    pub a: HpReal,
    pub b: HpReal,
    pub big_m: Integer,
    pub label: String,
}

impl ReductionInstance {
    pub fn new(
        tau: HpReal,
        mu: HpReal,
        a: HpReal,
        b: HpReal,
        big_m: Integer,
        label: impl Into<String>,
    ) -> Result<Self> {
        if tau.certified_sign()? == Ordering::Equal {
            return Err(Error::InvalidArgument("tau must be nonzero".into()));
        }
        if a.certified_sign()? != Ordering::Greater {
            return Err(Error::InvalidArgument("A must be positive".into()));
        }
        let one = context_of(&b)?.int(1);
        if b.certified_cmp(&one)? != Ordering::Greater {
            return Err(Error::InvalidArgument("B must exceed 1".into()));
        }
        if big_m <= 1 {
            return Err(Error::InvalidArgument("M must exceed 1".into()));
        }
        Ok(Self {
            tau,
            mu,
            a,
            b,
            big_m,
            label: label.into(),
        })
    }
}

/// A convergent with `epsilon > 0` and the resulting bound on `k`.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionOutcome {
    pub convergent: Convergent,
    pub epsilon: HpReal,
    pub k_bound: u64,
    /// `log(A q / epsilon) / log B` before flooring, for reporting.
    pub k_real: f64,
}

/// `||mu q|| - M ||tau q||`.
pub fn epsilon(tau: &HpReal, mu: &HpReal, q: &Integer, big_m: &Integer) -> Result<HpReal> {
    let big_m = context_of(tau)?.int(big_m.clone());
    let tau_part = &big_m * &nearest_int_dist(&(tau * q))?;
    Ok(&nearest_int_dist(&(mu * q))? - &tau_part)
}

/// `log(A q / epsilon) / log B`.
pub fn k_value(a: &HpReal, q: &Integer, eps: &HpReal, log_b: &HpReal) -> Result<HpReal> {
    Ok(&(&(a * q) / eps).ln()? / log_b)
}

/// `floor(log(A q / epsilon) / log B)`, clamped at zero.
pub fn k_bound(a: &HpReal, q: &Integer, eps: &HpReal, log_b: &HpReal) -> Result<u64> {
    floor_to_u64(&k_value(a, q, eps, log_b)?)
}

fn floor_to_u64(x: &HpReal) -> Result<u64> {
    Ok(x.floor_certified()?.max(Integer::new()).to_u64().unwrap_or(u64::MAX))
}

/// Bound for a combo whose `mu` is `shift * tau`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomogeneousBound {
    pub shift: u32,
    /// `M + shift`, a strict bound on the coefficient of `tau`.
    #[serde(serialize_with = "serialize_integer")]
    pub big_m_prime: Integer,
    /// Largest partial quotient up to the first denominator above `M'`.
    #[serde(serialize_with = "serialize_integer")]
    pub max_quotient: Integer,
    pub k_bound: u64,
}

#[derive(Debug, Clone)]
struct Candidate {
    convergent: Convergent,
    /// `M ||tau q||`
    scaled_dist: HpReal,
}

/// Convergents of `tau` needed by a reduction stage, computed once.
#[derive(Debug, Clone)]
pub struct TauTable {
    big_m: Integer,
    /// Every emitted `(a_k, p_k / q_k)` up to the last candidate.
    expansion: Vec<(Integer, Convergent)>,
    candidates: Vec<Candidate>,
    /// The expansion ran out before [`MAX_ATTEMPTS`] candidates were found.
    exhausted: bool,
}

impl TauTable {
    pub fn new(tau: &HpReal, big_m: &Integer) -> Result<Self> {
        if *big_m <= 1 {
            return Err(Error::InvalidArgument("M must exceed 1".into()));
        }
        let ctx = context_of(tau)?;
        let big_m_hp = ctx.int(big_m.clone());
        let six_m = Integer::from(big_m * 6u32);
        let mut stream = convergents(tau)?;
        let mut expansion = Vec::new();
        let mut candidates = Vec::new();
        while candidates.len() < MAX_ATTEMPTS {
            let Some((a, conv)) = stream.next_with_quotient() else {
                break;
            };
            if conv.q > six_m {
                match nearest_int_dist(&(tau * &conv.q)) {
                    Ok(dist) => candidates.push(Candidate {
                        convergent: conv.clone(),
                        scaled_dist: &big_m_hp * &dist,
                    }),
                    Err(Error::Unresolved(_)) => break,
                    Err(e) => return Err(e),
                }
            }
            expansion.push((a, conv));
        }
        if candidates.is_empty() {
            return Err(Error::PrecisionExhausted {
                certified: expansion.len(),
            });
        }
        let exhausted = candidates.len() < MAX_ATTEMPTS;
        Ok(Self {
            big_m: big_m.clone(),
            expansion,
            candidates,
            exhausted,
        })
    }

    pub fn big_m(&self) -> &Integer {
        &self.big_m
    }

    /// The first convergent with `q > 6M`.
    pub fn first_convergent(&self) -> &Convergent {
        &self.candidates[0].convergent
    }

    /// Convergents with `q > 6M`, in order.
    pub fn candidates(&self) -> impl Iterator<Item = &Convergent> {
        self.candidates.iter().map(|c| &c.convergent)
    }

    /// Partial quotients `a_0, a_1, ...` known to the table.
    pub fn quotients(&self) -> impl Iterator<Item = &Integer> {
        self.expansion.iter().map(|(a, _)| a)
    }

    /// The first candidate convergent with certified `epsilon > 0`.
    ///
    /// A candidate whose `epsilon` cannot be told apart from zero counts as
    /// not positive; any later convergent is equally valid.
    pub fn reduce(&self, mu: &HpReal, a: &HpReal, log_b: &HpReal) -> Result<ReductionOutcome> {
        for c in &self.candidates {
            let mu_dist = nearest_int_dist(&(mu * &c.convergent.q))?;
            let eps = &mu_dist - &c.scaled_dist;
            if eps.certified_sign().ok() == Some(Ordering::Greater) {
                let k = k_value(a, &c.convergent.q, &eps, log_b)?;
                return Ok(ReductionOutcome {
                    convergent: c.convergent.clone(),
                    epsilon: eps,
                    k_bound: floor_to_u64(&k)?,
                    k_real: k.to_f64(),
                });
            }
        }
        if self.exhausted {
            Err(Error::PrecisionExhausted {
                certified: self.expansion.len(),
            })
        } else {
            Err(Error::NoPositiveEpsilon {
                attempts: self.candidates.len(),
            })
        }
    }

    /// Bound `k` in `0 < |s tau - n| < A B^(-k)` for `0 < s < M + shift`.
    pub fn homogeneous(&self, shift: u32, a: &HpReal, log_b: &HpReal) -> Result<HomogeneousBound> {
        let big_m_prime = Integer::from(&self.big_m + shift);
        let last = self
            .expansion
            .iter()
            .position(|(_, c)| c.q > big_m_prime)
            .ok_or(Error::PrecisionExhausted {
                certified: self.expansion.len(),
            })?;
        let max_quotient = self.expansion[1..=last]
            .iter()
            .map(|(q, _)| q)
            .max()
            .expect("q_0 = 1 never exceeds M")
            .clone();
        let factor = Integer::from(&max_quotient + 2u32) * &big_m_prime;
        let k_bound = floor_to_u64(&(&(a * &factor).ln()? / log_b))?;
        Ok(HomogeneousBound {
            shift,
            big_m_prime,
            max_quotient,
            k_bound,
        })
    }
}

/// Apply the reduction lemma to a single instance.
pub fn bd_reduce(inst: &ReductionInstance) -> Result<ReductionOutcome> {
    let table = TauTable::new(&inst.tau, &inst.big_m)?;
    table.reduce(&inst.mu, &inst.a, &inst.b.ln()?)
}

/// Which exponent a reduction stage bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    L,
    M,
    N,
}

impl Stage {
    pub fn variable(self) -> &'static str {
        match self {
            Stage::L => "l",
            Stage::M => "m",
            Stage::N => "n",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.variable())
    }
}

/// Digit data fixed within one reduction: `d1` for the `l` stage, plus `d2`
/// and `l` for the `m` stage, plus `m` for the `n` stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Combo {
    pub d1: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d2: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
}

impl Combo {
    pub fn l_stage(d1: u8) -> Self {
        Self {
            d1,
            d2: None,
            ell: None,
            m: None,
        }
    }

    pub fn m_stage(d1: u8, d2: u8, ell: u32) -> Self {
        Self {
            d1,
            d2: Some(d2),
            ell: Some(ell),
            m: None,
        }
    }

    pub fn n_stage(d1: u8, d2: u8, ell: u32, m: u32) -> Self {
        Self {
            d1,
            d2: Some(d2),
            ell: Some(ell),
            m: Some(m),
        }
    }

    /// Nine times the argument of the logarithm in `mu`:
    /// `d1`, `d1 10^l - (d1 - d2)` or `d1 10^(l+m) - (d1 - d2) 10^m + (d1 - d2)`.
    pub fn numerator(&self) -> Integer {
        let d1 = Integer::from(self.d1);
        let diff = i32::from(self.d1) - i32::from(self.d2.unwrap_or(self.d1));
        match (self.ell, self.m) {
            (None, _) => d1,
            (Some(l), None) => d1 * Integer::from(Integer::u_pow_u(10, l)) - diff,
            (Some(l), Some(m)) => {
                d1 * Integer::from(Integer::u_pow_u(10, l + m)) - Integer::from(Integer::u_pow_u(10, m)) * diff + diff
            }
        }
    }

    /// `Some(j)` when the logarithm's argument is exactly `10^j`.
    pub fn shift(&self) -> Option<u32> {
        let (q, r) = self.numerator().div_rem(Integer::from(9));
        if r != 0 || q <= 0 {
            return None;
        }
        let s = q.to_string_radix(10);
        let (head, zeros) = s.split_at(1);
        (head == "1" && zeros.bytes().all(|b| b == b'0')).then_some(zeros.len() as u32)
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d1={}", self.d1)?;
        if let Some(d2) = self.d2 {
            write!(f, " d2={d2}")?;
        }
        if let Some(l) = self.ell {
            write!(f, " l={l}")?;
        }
        if let Some(m) = self.m {
            write!(f, " m={m}")?;
        }
        Ok(())
    }
}

/// The combos a stage iterates over, in canonical order.
pub fn stage_combos(stage: Stage, l_max: u32, m_max: u32) -> Vec<Combo> {
    let mut out = Vec::new();
    for d1 in 1..=9u8 {
        if stage == Stage::L {
            out.push(Combo::l_stage(d1));
            continue;
        }
        for d2 in 0..=9u8 {
            for l in 1..=l_max {
                match stage {
                    Stage::M => out.push(Combo::m_stage(d1, d2, l)),
                    _ => out.extend((1..=m_max).map(|m| Combo::n_stage(d1, d2, l, m))),
                }
            }
        }
    }
    out
}

/// A per-combo result tagged with its combo.
#[derive(Debug, Clone, Serialize)]
pub struct Keyed<T> {
    pub combo: Combo,
    #[serde(flatten)]
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComboFailure {
    pub error: String,
}

/// Numerical nonvanishing check of the linear form on sampled combos.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NonvanishingCheck {
    pub sampled: usize,
    pub nonzero: usize,
}

/// Outcome of one reduction stage.
///
/// `per_combo` is kept in memory only; serialized results carry the
/// aggregates, the homogeneous cases and any failures.
#[derive(Debug, Clone, Serialize)]
pub struct StageResult {
    pub stage: Stage,
    pub precision_digits: u32,
    /// Precision used to retry combos that failed at `precision_digits`.
    pub escalated_precision_digits: Option<u32>,
    pub escalated_combos: usize,
    #[serde(serialize_with = "serialize_integer")]
    pub big_m: Integer,
    /// First convergent of `tau` with `q > 6M`.
    pub convergent: Convergent,
    /// Indices of the convergents that produced the outcomes.
    pub convergent_indices: Vec<usize>,
    pub combos: usize,
    #[serde(skip)]
    pub per_combo: Vec<Keyed<ReductionOutcome>>,
    pub homogeneous: Vec<Keyed<HomogeneousBound>>,
    pub failures: Vec<Keyed<ComboFailure>>,
    /// Max `k_bound` over the reduced combos.
    pub aggregate_bound: Option<u64>,
    /// Max `k_bound` over the homogeneous combos.
    pub homogeneous_bound: Option<u64>,
    /// Cases excluded by the linearization assumption (`l < 2`, `m < 2`).
    pub small_case_bound: Option<u64>,
    /// Bound on the stage variable; `None` unless every combo succeeded.
    pub effective_bound: Option<u64>,
    pub min_epsilon: Option<HpReal>,
    pub max_epsilon: Option<HpReal>,
    pub max_epsilon_combo: Option<Combo>,
    pub max_epsilon_k_bound: Option<u64>,
    pub max_epsilon_k_real: Option<f64>,
    /// Max of `log(A q / epsilon) / log B` over the reduced combos.
    pub max_k_real: Option<f64>,
    pub linearization: Vec<ChainCheck>,
    pub nonvanishing: Option<NonvanishingCheck>,
}

impl StageResult {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-precision data shared by all combos of a stage.
struct StageContext {
    ctx: RealContext,
    log_alpha: HpReal,
    table: TauTable,
    a: HpReal,
    log_b: HpReal,
}

impl StageContext {
    fn new(stage: Stage, ctx: RealContext, roots: &PerrinRoots, big_m: &Integer) -> Result<Self> {
        let log_alpha = roots.alpha().ln()?;
        let log_10 = ctx.int(10).ln()?;
        let tau = &log_10 / &log_alpha;
        let table = TauTable::new(&tau, big_m)?;
        let (a, log_b) = match stage {
            Stage::L => (&ctx.int(42) / &log_alpha, log_10),
            Stage::M => (&ctx.int(30) / &log_alpha, log_10),
            Stage::N => (&ctx.int(20) / &(&ctx.int(9) * &log_alpha), log_alpha.clone()),
        };
        Ok(Self {
            ctx,
            log_alpha,
            table,
            a,
            log_b,
        })
    }

    fn evaluate(&self, combo: &Combo) -> Result<Bound> {
        if let Some(shift) = combo.shift() {
            return self
                .table
                .homogeneous(shift, &self.a, &self.log_b)
                .map(Bound::Homogeneous);
        }
        let mu = &self.ctx.ratio(combo.numerator(), 9).ln()? / &self.log_alpha;
        self.table.reduce(&mu, &self.a, &self.log_b).map(Bound::Reduced)
    }
}

enum Bound {
    Reduced(ReductionOutcome),
    Homogeneous(HomogeneousBound),
}

fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::Unresolved(_) | Error::NoPositiveEpsilon { .. } | Error::PrecisionExhausted { .. }
    )
}

fn linearization_checks(stage: Stage, roots: &PerrinRoots) -> Vec<ChainCheck> {
    // |log(1 + x)| < 1.5 |x| for |x| < 1/2; the worst case is x = -1/2
    let mut checks = vec![ChainCheck::less("|log(1/2)| < 1.5 / 2", 2f64.ln(), 0.75)];
    match stage {
        Stage::L => {
            checks.push(ChainCheck::less("28 * 10^-2 < 1/2", 0.28, 0.5));
            checks.push(ChainCheck::at_most("1.5 * 28 <= 42", 1.5 * 28.0, 42.0));
        }
        Stage::M => {
            checks.push(ChainCheck::less("19 * 10^-2 < 1/2", 0.19, 0.5));
            checks.push(ChainCheck::at_most("1.5 * 19 <= 30", 1.5 * 19.0, 30.0));
        }
        Stage::N => {
            let tail = 10.0 / 9.0 * roots.alpha().to_f64().powf(-701.0);
            checks.push(ChainCheck::less("(10/9) alpha^-701 < 1/2", tail, 0.5));
            checks.push(ChainCheck::at_most("1.5 * 10/9 <= 20/9", 1.5 * 10.0 / 9.0, 20.0 / 9.0));
        }
    }
    checks
}

/// Spot-check `Gamma_2 != 0` on every 997th combo at some `n > 700`.
fn nonvanishing(ctx: RealContext, roots: &PerrinRoots, combos: &[Combo]) -> NonvanishingCheck {
    let sampled: Vec<(usize, &Combo)> = combos.iter().enumerate().step_by(997).collect();
    let nonzero = sampled
        .par_iter()
        .filter(|(i, combo)| {
            let n = 701 + (*i % 1000) as i64;
            let shift = Integer::from(10).pow(combo.ell.unwrap_or(0));
            let lhs = &(&ctx.ratio(combo.numerator(), 9) * &roots.alpha().powi(-n)) * &shift;
            let gamma = &lhs - &ctx.int(1);
            matches!(gamma.certified_sign(), Ok(Ordering::Less | Ordering::Greater))
        })
        .count();
    NonvanishingCheck {
        sampled: sampled.len(),
        nonzero,
    }
}

fn by_value(a: &HpReal, b: &HpReal) -> Ordering {
    a.value().partial_cmp(b.value()).unwrap_or(Ordering::Equal)
}

/// Run a stage over an explicit list of combos.
///
/// Combos that fail at `ctx` are retried once at twice the precision with
/// every constant recomputed.
pub fn run_stage(
    stage: Stage,
    ctx: RealContext,
    roots: &PerrinRoots,
    big_m: &Integer,
    combos: &[Combo],
) -> Result<StageResult> {
    let base = StageContext::new(stage, ctx, roots, big_m)?;
    let mut results: Vec<Result<Bound>> = combos.par_iter().map(|c| base.evaluate(c)).collect();

    let retry: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| matches!(r, Err(e) if retryable(e)))
        .map(|(i, _)| i)
        .collect();
    let mut escalated_precision_digits = None;
    if !retry.is_empty() {
        let hi_ctx = ctx.escalated();
        escalated_precision_digits = Some(hi_ctx.digits());
        let hi =
            plastic_root(hi_ctx, roots.mode()).and_then(|hi_roots| StageContext::new(stage, hi_ctx, &hi_roots, big_m));
        match hi {
            Ok(hi) => {
                let redone: Vec<(usize, Result<Bound>)> =
                    retry.par_iter().map(|&i| (i, hi.evaluate(&combos[i]))).collect();
                for (i, r) in redone {
                    results[i] = r;
                }
            }
            Err(e) => {
                for &i in &retry {
                    results[i] = Err(e.clone());
                }
            }
        }
    }

    let mut per_combo = Vec::new();
    let mut homogeneous = Vec::new();
    let mut failures = Vec::new();
    for (combo, r) in combos.iter().zip(results) {
        match r {
            Ok(Bound::Reduced(value)) => per_combo.push(Keyed { combo: *combo, value }),
            Ok(Bound::Homogeneous(value)) => homogeneous.push(Keyed { combo: *combo, value }),
            Err(e) => failures.push(Keyed {
                combo: *combo,
                value: ComboFailure { error: e.to_string() },
            }),
        }
    }

    let mut convergent_indices: Vec<usize> = per_combo.iter().map(|r| r.value.convergent.index).collect();
    convergent_indices.sort_unstable();
    convergent_indices.dedup();

    let aggregate_bound = per_combo.iter().map(|r| r.value.k_bound).max();
    let homogeneous_bound = homogeneous.iter().map(|r| r.value.k_bound).max();
    let small_case_bound = match stage {
        Stage::L | Stage::M => Some(1),
        Stage::N => None,
    };
    let effective_bound = failures
        .is_empty()
        .then(|| {
            [aggregate_bound, homogeneous_bound, small_case_bound]
                .into_iter()
                .flatten()
                .max()
        })
        .flatten();

    let min_epsilon = per_combo
        .iter()
        .map(|r| &r.value.epsilon)
        .min_by(|a, b| by_value(a, b))
        .cloned();
    // first maximum in combo order
    let argmax = per_combo.iter().reduce(|best, r| {
        if by_value(&r.value.epsilon, &best.value.epsilon) == Ordering::Greater {
            r
        } else {
            best
        }
    });

    let nonvanishing = (stage == Stage::N).then(|| nonvanishing(ctx, roots, combos));

    Ok(StageResult {
        stage,
        precision_digits: ctx.digits(),
        escalated_precision_digits,
        escalated_combos: retry.len(),
        big_m: big_m.clone(),
        convergent: base.table.first_convergent().clone(),
        convergent_indices,
        combos: combos.len(),
        homogeneous,
        failures,
        aggregate_bound,
        homogeneous_bound,
        small_case_bound,
        effective_bound,
        min_epsilon,
        max_epsilon: argmax.map(|r| r.value.epsilon.clone()),
        max_epsilon_combo: argmax.map(|r| r.combo),
        max_epsilon_k_bound: argmax.map(|r| r.value.k_bound),
        max_epsilon_k_real: argmax.map(|r| r.value.k_real),
        max_k_real: per_combo.iter().map(|r| r.value.k_real).reduce(f64::max),
        linearization: linearization_checks(stage, roots),
        nonvanishing,
        per_combo,
    })
}

/// Bound `l` with `mu = log(d1/9) / log alpha`, `A = 42 / log alpha`, `B = 10`.
pub fn stage_l(ctx: RealContext, roots: &PerrinRoots, big_m: &Integer) -> Result<StageResult> {
    run_stage(Stage::L, ctx, roots, big_m, &stage_combos(Stage::L, 0, 0))
}

/// Bound `m` for `1 <= l <= l_max` with `A = 30 / log alpha`, `B = 10`.
pub fn stage_m(ctx: RealContext, roots: &PerrinRoots, big_m: &Integer, l_max: u32) -> Result<StageResult> {
    if l_max == 0 {
        return Err(Error::InvalidArgument("l_max must be at least 1".into()));
    }
    run_stage(Stage::M, ctx, roots, big_m, &stage_combos(Stage::M, l_max, 0))
}

/// Bound `n` for `1 <= l <= l_max`, `1 <= m <= m_max` with
/// `A = 20 / (9 log alpha)`, `B = alpha`.
pub fn stage_n(ctx: RealContext, roots: &PerrinRoots, big_m: &Integer, l_max: u32, m_max: u32) -> Result<StageResult> {
    if l_max == 0 || m_max == 0 {
        return Err(Error::InvalidArgument("l_max and m_max must be at least 1".into()));
    }
    run_stage(Stage::N, ctx, roots, big_m, &stage_combos(Stage::N, l_max, m_max))
}
