//! The full proof pipeline and its certificate.

use std::fmt::Write as _;
use std::time::Instant;

use rug::ops::Pow;
use rug::Integer;
use serde::{Serialize, Serializer};

use crate::bounds::{absolute_bounds, AbsoluteBounds, BoundChain};
use crate::contfrac::Convergent;
use crate::error::{Error, Result};
use crate::highprec::{plastic_root, PerrinRoots, RealContext, RootMode, DEFAULT_PRECISION_DIGITS};
use crate::reduction::{published_big_m, stage_l, stage_m, stage_n, Stage, StageResult};
use crate::repdigit::{search_low_range, SearchHit};

pub const REPORT_VERSION: u32 = 1;
/// Largest index covered by the exhaustive search.
pub const LOW_RANGE_THRESHOLD: u64 = 700;
/// Denominator of the published convergent `p_87 / q_87` of `tau`.
pub const PUBLISHED_Q: &str = "362926510191645833704423315164618426146198842188725";

/// Published `(epsilon, bound)` per stage. The `l` bound is the strict
/// `l < 54`; the others are `m <= 57` and `n <= 517`.
///
/// Each published bound is the ceiling of a printed `log(A q / epsilon) / log B`:
/// for `l` the value at the largest-epsilon combo, for `m` and `n` the maximum
/// over the search loops, which run `l` over `1..=53` and `m` over `1..=56`.
pub const PUBLISHED_STAGES: [(Stage, &str, u64); 3] = [
    (Stage::L, "0.4883316119", 54),
    (Stage::M, "0.4994348950", 57),
    (Stage::N, "0.4995600863", 517),
];

pub fn serialize_integer<S: Serializer>(n: &Integer, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&n.to_string())
}

fn serialize_opt_integer<S: Serializer>(n: &Option<Integer>, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    match n {
        Some(n) => serialize_integer(n, serializer),
        None => serializer.serialize_none(),
    }
}

#[derive(Debug, Clone)]
pub struct ProveConfig {
    pub mode: RootMode,
    pub precision_digits: u32,
    pub low_range: u64,
    /// `None` picks the mode's default, see [`default_big_m`].
    pub big_m: Option<Integer>,
}

impl Default for ProveConfig {
    fn default() -> Self {
        Self {
            mode: RootMode::Corrected,
            precision_digits: DEFAULT_PRECISION_DIGITS,
            low_range: LOW_RANGE_THRESHOLD,
            big_m: None,
        }
    }
}

/// `x` rounded up to two significant figures, as an integer.
fn round_up_two_figures(x: f64) -> Integer {
    let exp = x.log10().floor() as u32 - 1;
    let mantissa = (x / 10f64.powi(exp as i32)).ceil() as u32;
    Integer::from(mantissa) * Integer::from(10).pow(exp)
}

/// `2.8e48` in paper-replication mode. In corrected mode the larger of
/// `2.8e48` and the recomputed absolute bound on `n`, rounded up.
pub fn default_big_m(mode: RootMode, recomputed: &AbsoluteBounds) -> Integer {
    let published = published_big_m();
    match mode {
        RootMode::PaperReplication => published,
        RootMode::Corrected => published.max(round_up_two_figures(recomputed.n_max)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LowRange {
    pub threshold: u64,
    pub hits: Vec<SearchHit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReplication {
    pub stage: Stage,
    /// Ranges of the published search loops (`None`: not used by this stage).
    pub script_l_max: Option<u32>,
    pub script_m_max: Option<u32>,
    pub published_epsilon: &'static str,
    pub max_epsilon: Option<String>,
    pub epsilon_matches: bool,
    pub published_bound: u64,
    /// The unrounded quantity behind the published bound.
    pub script_k: Option<f64>,
    pub script_bound: Option<u64>,
    pub bound_matches: bool,
    /// Effective bound of the pipeline stage, over the full ranges.
    pub pipeline_bound: Option<u64>,
}

/// Loop ranges of the published `m` and `n` searches.
pub const SCRIPT_L_MAX: u32 = 53;
pub const SCRIPT_M_MAX: u32 = 56;

#[derive(Debug, Clone, Serialize)]
pub struct Replication {
    pub published_q: &'static str,
    pub convergent_matches: bool,
    pub stages: Vec<StageReplication>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every stage closed with corrected constants: the theorem holds.
    TheoremVerified,
    /// Paper-replication mode ran to closure. `31/24` is not a root of
    /// `x^3 - x - 1`, so this reproduces the published numbers only.
    ReplicationClosed,
    /// The pipeline ran but the final bound exceeds the searched range, the
    /// search found something other than 22, or `M` is below the bound on `n`.
    NotClosed,
    /// A stage failed; the report is partial.
    Incomplete,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::TheoremVerified | Verdict::ReplicationClosed => 0,
            Verdict::NotClosed => 2,
            Verdict::Incomplete => 1,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Verdict::TheoremVerified => {
                "verified: 22 is the only Perrin number that is a palindromic concatenation of two repdigits"
            }
            Verdict::ReplicationClosed => {
                "replication closed: published constants reproduced with alpha = 31/24; this is not a proof"
            }
            Verdict::NotClosed => "not verified: the reduced bounds do not close the argument",
            Verdict::Incomplete => "not verified: the pipeline stopped early",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub step: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FinalBounds {
    pub l: Option<u64>,
    pub m: Option<u64>,
    pub n: Option<u64>,
}

/// Certificate of one pipeline run. Field order is stable; `timings` is last
/// and is the only part that varies between identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct ProofReport {
    pub report_version: u32,
    pub mode: RootMode,
    pub precision_digits: u32,
    #[serde(serialize_with = "serialize_opt_integer")]
    pub big_m: Option<Integer>,
    /// `M` exceeds the recomputed absolute bound on `n`.
    pub big_m_covers_n_max: Option<bool>,
    pub low_range: Option<LowRange>,
    pub initial_bounds: Option<AbsoluteBounds>,
    pub recomputed_bounds: Option<AbsoluteBounds>,
    pub convergent: Option<Convergent>,
    pub convergent_matches_published: Option<bool>,
    pub stages: Vec<StageResult>,
    pub final_bounds: FinalBounds,
    pub closure: bool,
    pub verdict: Verdict,
    pub verdict_text: &'static str,
    pub replication: Option<Replication>,
    pub error: Option<String>,
    pub timings: Vec<Timing>,
}

impl ProofReport {
    fn empty(config: &ProveConfig) -> Self {
        Self {
            report_version: REPORT_VERSION,
            mode: config.mode,
            precision_digits: config.precision_digits,
            big_m: None,
            big_m_covers_n_max: None,
            low_range: None,
            initial_bounds: None,
            recomputed_bounds: None,
            convergent: None,
            convergent_matches_published: None,
            stages: Vec::new(),
            final_bounds: FinalBounds {
                l: None,
                m: None,
                n: None,
            },
            closure: false,
            verdict: Verdict::Incomplete,
            verdict_text: Verdict::Incomplete.describe(),
            replication: None,
            error: None,
            timings: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn stage(&self, stage: Stage) -> Option<&StageResult> {
        self.stages.iter().find(|s| s.stage == stage)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the timings block removed, for determinism checks.
    pub fn to_json_without_timings(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("timings");
        }
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}

fn timed<T>(timings: &mut Vec<Timing>, step: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push(Timing {
        step: step.into(),
        seconds: start.elapsed().as_secs_f64(),
    });
    out
}

/// Does `epsilon` agree with the published value to 8 decimals, as a lower
/// bound? The published values are truncated or rounded at the 10th decimal.
fn epsilon_matches(published: &str, reproduced: &str) -> bool {
    let digits = |s: &str| s.strip_prefix("0.").map(|d| d.chars().take(8).collect::<String>());
    match (digits(published), digits(reproduced)) {
        (Some(a), Some(b)) => a.len() == 8 && a == b,
        _ => false,
    }
}

fn stage_replication(
    stage: Stage,
    script: &StageResult,
    ranges: (Option<u32>, Option<u32>),
    pipeline_bound: Option<u64>,
) -> StageReplication {
    let (_, published_epsilon, published_bound) = PUBLISHED_STAGES
        .into_iter()
        .find(|p| p.0 == stage)
        .expect("every stage is published");
    let max_epsilon = script.max_epsilon.as_ref().map(|e| e.to_decimal_string(12));
    let script_k = match stage {
        Stage::L => script.max_epsilon_k_real,
        Stage::M | Stage::N => script.max_k_real,
    };
    let script_bound = script_k.filter(|k| k.is_finite() && *k >= 0.0).map(|k| k.ceil() as u64);
    StageReplication {
        stage,
        script_l_max: ranges.0,
        script_m_max: ranges.1,
        published_epsilon,
        epsilon_matches: max_epsilon
            .as_deref()
            .is_some_and(|e| epsilon_matches(published_epsilon, e)),
        max_epsilon,
        published_bound,
        script_k,
        script_bound,
        bound_matches: script_bound == Some(published_bound),
        pipeline_bound,
    }
}

/// Rerun the `m` and `n` reductions over the published loop ranges and
/// compare with the published constants.
fn replication(report: &ProofReport, ctx: RealContext, roots: &PerrinRoots, big_m: &Integer) -> Result<Replication> {
    let pipeline = |stage| report.stage(stage).and_then(|r| r.effective_bound);
    let mut stages = Vec::with_capacity(3);
    if let Some(l) = report.stage(Stage::L) {
        stages.push(stage_replication(Stage::L, l, (None, None), pipeline(Stage::L)));
    }
    let m = stage_m(ctx, roots, big_m, SCRIPT_L_MAX)?;
    stages.push(stage_replication(
        Stage::M,
        &m,
        (Some(SCRIPT_L_MAX), None),
        pipeline(Stage::M),
    ));
    let n = stage_n(ctx, roots, big_m, SCRIPT_L_MAX, SCRIPT_M_MAX)?;
    stages.push(stage_replication(
        Stage::N,
        &n,
        (Some(SCRIPT_L_MAX), Some(SCRIPT_M_MAX)),
        pipeline(Stage::N),
    ));
    Ok(Replication {
        published_q: PUBLISHED_Q,
        convergent_matches: report.convergent_matches_published == Some(true),
        stages,
    })
}

/// Run the search, the bound chain and the three reductions.
///
/// Failures after the configuration is validated do not abort: the report
/// records the error and everything computed before it.
pub fn prove(config: &ProveConfig) -> Result<ProofReport> {
    let ctx = RealContext::new(config.precision_digits)?;
    if config.low_range < 2 {
        return Err(Error::InvalidArgument(format!(
            "low range must be at least 2, got {}",
            config.low_range
        )));
    }
    let mut report = ProofReport::empty(config);
    if let Err(e) = run(config, ctx, &mut report) {
        report.error = Some(e.to_string());
    }
    report.verdict = verdict(&report);
    report.verdict_text = report.verdict.describe();
    Ok(report)
}

fn run(config: &ProveConfig, ctx: RealContext, report: &mut ProofReport) -> Result<()> {
    let mut timings = std::mem::take(&mut report.timings);
    let result = run_steps(config, ctx, report, &mut timings);
    report.timings = timings;
    result
}

fn run_steps(
    config: &ProveConfig,
    ctx: RealContext,
    report: &mut ProofReport,
    timings: &mut Vec<Timing>,
) -> Result<()> {
    let roots = timed(timings, "roots", || plastic_root(ctx, config.mode))?;

    let hits = timed(timings, "low_range", || search_low_range(config.low_range, false))?;
    report.low_range = Some(LowRange {
        threshold: config.low_range,
        hits,
    });

    let published = absolute_bounds(BoundChain::Published)?;
    let recomputed = absolute_bounds(BoundChain::Recomputed)?;
    let big_m = config
        .big_m
        .clone()
        .unwrap_or_else(|| default_big_m(config.mode, &recomputed));
    report.big_m_covers_n_max = Some(big_m.to_f64() >= recomputed.n_max);
    report.big_m = Some(big_m.clone());
    report.initial_bounds = Some(published);
    report.recomputed_bounds = Some(recomputed);

    let l = timed(timings, "stage_l", || stage_l(ctx, &roots, &big_m))?;
    report.convergent = Some(l.convergent.clone());
    report.convergent_matches_published = Some(l.convergent.q.to_string() == PUBLISHED_Q);
    let l_max = l.effective_bound;
    report.final_bounds.l = l_max;
    report.stages.push(l);
    let l_max = incomplete(l_max, Stage::L)?;

    let m = timed(timings, "stage_m", || stage_m(ctx, &roots, &big_m, l_max))?;
    let m_max = m.effective_bound;
    report.final_bounds.m = m_max;
    report.stages.push(m);
    let m_max = incomplete(m_max, Stage::M)?;

    let n = timed(timings, "stage_n", || stage_n(ctx, &roots, &big_m, l_max, m_max))?;
    report.final_bounds.n = n.effective_bound;
    report.closure = n.effective_bound.is_some_and(|b| b <= config.low_range);
    report.stages.push(n);
    incomplete(report.final_bounds.n, Stage::N)?;

    if config.mode == RootMode::PaperReplication {
        let r = timed(timings, "replication", || replication(report, ctx, &roots, &big_m))?;
        report.replication = Some(r);
    }
    Ok(())
}

fn incomplete(bound: Option<u64>, stage: Stage) -> Result<u32> {
    let bound = bound.ok_or_else(|| Error::Unresolved(format!("stage {stage} left combos unresolved")))?;
    u32::try_from(bound).map_err(|_| Error::InvalidArgument(format!("stage {stage} bound {bound} is too large")))
}

fn verdict(report: &ProofReport) -> Verdict {
    if report.error.is_some() {
        return Verdict::Incomplete;
    }
    let only_22 = report
        .low_range
        .as_ref()
        .is_some_and(|lr| lr.hits.len() == 1 && lr.hits[0].value == 22);
    let chain_ok = report.recomputed_bounds.as_ref().is_some_and(|b| b.all_hold());
    let stage_checks = report
        .stages
        .iter()
        .all(|s| s.linearization.iter().all(|c| c.holds) && s.nonvanishing.is_none_or(|n| n.nonzero == n.sampled));
    if !(report.closure && only_22 && chain_ok && stage_checks) {
        return Verdict::NotClosed;
    }
    match report.mode {
        RootMode::Corrected if report.big_m_covers_n_max == Some(true) => Verdict::TheoremVerified,
        RootMode::Corrected => Verdict::NotClosed,
        RootMode::PaperReplication => Verdict::ReplicationClosed,
    }
}

fn opt<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "-".into(), |x| x.to_string())
}

/// Human-readable summary of a report.
pub fn render_text(report: &ProofReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "mode: {}  precision: {} digits",
        report.mode, report.precision_digits
    );
    if let Some(m) = &report.big_m {
        let covers = report
            .big_m_covers_n_max
            .map_or("", |c| if c { "" } else { " (below recomputed n bound)" });
        let _ = writeln!(s, "M: {m}{covers}");
    }
    if let Some(lr) = &report.low_range {
        let _ = writeln!(s, "low range n <= {}: {} hit(s)", lr.threshold, lr.hits.len());
        for h in &lr.hits {
            let _ = writeln!(s, "  P_{} = {}  [{}]", h.index, h.value, h.pattern);
        }
    }
    for (name, b) in [
        ("published", &report.initial_bounds),
        ("recomputed", &report.recomputed_bounds),
    ] {
        if let Some(b) = b {
            let failed = b.checks.iter().filter(|c| !c.holds).count();
            let _ = writeln!(
                s,
                "{name} bounds: l < {:.3e}, m < {:.3e}, n < {:.3e} ({failed} failed check(s))",
                b.l_max, b.m_max, b.n_max
            );
        }
    }
    if let Some(c) = &report.convergent {
        let tag = report
            .convergent_matches_published
            .map_or("", |m| if m { " (matches published)" } else { "" });
        let _ = writeln!(s, "first convergent with q > 6M: index {}, q = {}{tag}", c.index, c.q);
    }
    for st in &report.stages {
        let _ = writeln!(
            s,
            "stage {}: {} combos, eps in [{}, {}], bound {} <= {} (reduced {}, homogeneous {}), {} failure(s)",
            st.stage,
            st.combos,
            opt(st.min_epsilon.as_ref().map(|e| e.to_decimal_string(10))),
            opt(st.max_epsilon.as_ref().map(|e| e.to_decimal_string(10))),
            st.stage,
            opt(st.effective_bound),
            opt(st.aggregate_bound),
            opt(st.homogeneous_bound),
            st.failures.len()
        );
    }
    if let Some(r) = &report.replication {
        for st in &r.stages {
            let _ = writeln!(
                s,
                "replication {}: eps {} vs {} [{}], k {} rounds up to {} vs {} [{}], pipeline bound {}",
                st.stage,
                opt(st.max_epsilon.as_deref()),
                st.published_epsilon,
                if st.epsilon_matches { "match" } else { "differ" },
                opt(st.script_k.map(|k| format!("{k:.4}"))),
                opt(st.script_bound),
                st.published_bound,
                if st.bound_matches { "match" } else { "differ" },
                opt(st.pipeline_bound),
            );
        }
    }
    let _ = writeln!(s, "closure: {}", report.closure);
    if let Some(e) = &report.error {
        let _ = writeln!(s, "error: {e}");
    }
    let _ = writeln!(s, "verdict: {}", report.verdict_text);
    s
}
