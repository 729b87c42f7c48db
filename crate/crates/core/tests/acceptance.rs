//! Acceptance gate: criteria 1 to 8, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always print; the process
//! exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use perrin_core::bounds::{
    guzman_luca_bound, lemma_l_bound, lemma_m_bound, log_alpha, matveev_lower_bound, MatveevParams, L_HEIGHT_A1,
    L_MATVEEV_COEFF, PUBLISHED_L_MAX, PUBLISHED_M_MAX, PUBLISHED_N_MAX,
};
use perrin_core::contfrac::convergents;
use perrin_core::highprec::{nearest_int_dist, plastic_root, RealContext, RootMode};
use perrin_core::perrin::{binet_bound_holds, growth_bounds_check, perrin_stream};
use perrin_core::reduction::{epsilon, published_big_m, Stage, TauTable};
use perrin_core::repdigit::{concat3, search_low_range, PalindromicPattern};
use perrin_core::report::{ProofReport, PUBLISHED_Q};
use perrin_core::{prove, HpReal, ProveConfig, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Integer;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn tau(ctx: RealContext, mode: RootMode) -> HpReal {
    let roots = plastic_root(ctx, mode).unwrap();
    &ctx.int(10).ln().unwrap() / &roots.alpha().ln().unwrap()
}

fn criterion_1() -> Outcome {
    let got: Vec<u64> = perrin_stream(14).iter().map(|p| p.value.to_u64().unwrap()).collect();
    let want = [3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17, 22, 29, 39, 51];
    outcome(got == want, format!("P_0..P_14 = {got:?}"))
}

fn criterion_2() -> Outcome {
    let hits = search_low_range(700, false).unwrap();
    let values: Vec<String> = hits.iter().map(|h| h.value.to_string()).collect();
    outcome(values == ["22"], format!("hits for n <= 700: {values:?}"))
}

fn criterion_3() -> Outcome {
    let ctx = RealContext::new(1000).unwrap();
    let matches: Vec<(RootMode, usize, bool)> = [RootMode::PaperReplication, RootMode::Corrected]
        .into_iter()
        .map(|mode| {
            let table = TauTable::new(&tau(ctx, mode), &published_big_m()).unwrap();
            let c = table.first_convergent();
            (mode, c.index, c.q.to_string() == PUBLISHED_Q)
        })
        .collect();
    let matched: Vec<String> = matches
        .iter()
        .filter(|m| m.2)
        .map(|m| format!("{} (index {})", m.0, m.1))
        .collect();
    outcome(
        matched.len() == 1 && matches[0].2,
        format!("printed q reproduced by: {}", matched.join(", ")),
    )
}

fn criterion_4(report: &ProofReport) -> Outcome {
    let Some(rep) = &report.replication else {
        return outcome(false, format!("no replication block; error: {:?}", report.error));
    };
    let mut pass = rep.convergent_matches && rep.stages.len() == 3;
    let mut parts = Vec::new();
    for st in &rep.stages {
        pass &= st.epsilon_matches && st.bound_matches;
        parts.push(format!(
            "{}: eps {} vs {}, k {:.4} -> {} vs {} (full-range bound {})",
            st.stage,
            st.max_epsilon.as_deref().unwrap_or("-"),
            st.published_epsilon,
            st.script_k.unwrap_or(f64::NAN),
            st.script_bound.map_or("-".into(), |b| b.to_string()),
            st.published_bound,
            st.pipeline_bound.map_or("-".into(), |b| b.to_string()),
        ));
    }
    let stage_n = report
        .timings
        .iter()
        .find(|t| t.step == "stage_n")
        .map_or(f64::NAN, |t| t.seconds);
    pass &= stage_n < 1800.0;
    parts.push(format!("stage n {stage_n:.1}s"));
    outcome(pass, parts.join("; "))
}

/// Corrected-mode baselines from the first verified run: `(stage, bound,
/// leading digits of the largest epsilon)`.
const CORRECTED_BASELINE: [(Stage, u64, &str); 3] = [
    (Stage::L, 53, "0.4023015897"),
    (Stage::M, 55, "0.4645902048"),
    (Stage::N, 463, "0.4663694103"),
];

fn criterion_5(report: &ProofReport, elapsed: Duration) -> Outcome {
    let mut pass = report.closure && report.verdict == Verdict::TheoremVerified && report.exit_code() == 0;
    let mut parts = vec![format!("closure {}, verdict {:?}", report.closure, report.verdict)];
    for (stage, bound, eps) in CORRECTED_BASELINE {
        let st = report.stage(stage);
        let got_bound = st.and_then(|s| s.effective_bound);
        let got_eps = st.and_then(|s| s.max_epsilon.as_ref()).map(|e| e.to_decimal_string(12));
        let same = got_bound == Some(bound) && got_eps.as_deref().is_some_and(|e| e.starts_with(eps));
        pass &= same;
        parts.push(format!(
            "{stage} <= {} (baseline {bound}), eps {}",
            got_bound.map_or("-".into(), |b| b.to_string()),
            got_eps.as_deref().unwrap_or("-")
        ));
    }
    pass &= elapsed < Duration::from_secs(3600);
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let n = guzman_luca_bound(3.9e41, 3).unwrap();
    let l = lemma_l_bound(PUBLISHED_N_MAX).unwrap();
    let m = lemma_m_bound(PUBLISHED_N_MAX).unwrap();
    let pass = n <= PUBLISHED_N_MAX && l.value < PUBLISHED_L_MAX && m.value < PUBLISHED_M_MAX;
    outcome(
        pass,
        format!(
            "Guzman-Luca {n:.4e} <= 2.8e48, l bound {:.4e} < 4.6e15, m bound {:.4e} < 2.0e31",
            l.value, m.value
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [701.0, 1e4, 1e9, 2.8e48] {
        let params = MatveevParams::new(3, 3, n, vec![L_HEIGHT_A1, log_alpha(), 3.0 * 10f64.ln()]).unwrap();
        let bound = matveev_lower_bound(&params);
        let floor = -L_MATVEEV_COEFF * f64::ln(n);
        pass &= bound >= floor;
        parts.push(format!("n={n:e}: {bound:.4e} >= {floor:.4e}"));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();

    let ctx = RealContext::new(400).unwrap();
    let roots = plastic_root(ctx, RootMode::Corrected).unwrap();
    for n in 2..=1000u64 {
        if !binet_bound_holds(n, &roots, ctx).unwrap_or(false) || !growth_bounds_check(n, &roots, ctx).unwrap_or(false)
        {
            failures.push(format!("(a) n={n}"));
        }
    }

    for d1 in 1..=9u8 {
        for d2 in 0..=9u8 {
            for ell in 1..=4u32 {
                for m in 1..=4u32 {
                    let p = PalindromicPattern::new(d1, Some(d2), ell, m).unwrap();
                    let outer = d1.to_string().repeat(ell as usize);
                    let s = format!("{outer}{}{outer}", d2.to_string().repeat(m as usize));
                    if concat3(&p) != s.parse::<Integer>().unwrap() {
                        failures.push(format!("(b) {p}"));
                    }
                }
            }
        }
    }

    let ctx = RealContext::new(1000).unwrap();
    for mode in [RootMode::PaperReplication, RootMode::Corrected] {
        let convs: Vec<_> = convergents(&tau(ctx, mode)).unwrap().take(100).collect();
        if convs.len() != 100 {
            failures.push(format!("(c) {mode}: only {} convergents", convs.len()));
        }
        for w in convs.windows(2) {
            let det = Integer::from(&w[1].p * &w[0].q) - Integer::from(&w[0].p * &w[1].q);
            let sign = if w[1].index % 2 == 1 { 1 } else { -1 };
            if det != sign {
                failures.push(format!("(c) {mode} index {}", w[1].index));
            }
        }
    }

    let ctx = RealContext::new(200).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let tau = ctx
            .ratio(rng.gen_range(2..1_000_000i64), rng.gen_range(1..1000i64))
            .ln()
            .unwrap();
        let mu = ctx
            .ratio(rng.gen_range(1..1_000_000i64), rng.gen_range(1..1000i64))
            .ln()
            .unwrap();
        let shift = ctx.int(rng.gen_range(-1000..1000i64));
        let q = Integer::from(rng.gen_range(1..u64::MAX));
        let big_m = Integer::from(rng.gen_range(2..1_000_000u64));
        let eps = |mu: &HpReal| epsilon(&tau, mu, &q, &big_m).ok();
        let base = eps(&mu);
        let same = |other: Option<HpReal>| match (&base, other) {
            (Some(a), Some(b)) => (a - &b).abs().to_f64() < 1e-150,
            (None, None) => true,
            _ => false,
        };
        let negated = same(eps(&-&mu));
        let shifted = same(eps(&(&mu + &shift)));
        let dist_ok = nearest_int_dist(&(&mu * &q)).is_ok() == base.is_some();
        if !(negated && shifted && dist_ok) {
            failures.push(format!("(d) instance {i}"));
        }
    }

    let detail = if failures.is_empty() {
        "(a) n in 2..=1000, (b) 360 patterns, (c) 100 convergents x 2 modes, (d) 100 instances".to_string()
    } else {
        format!("failures: {}", failures.join(", "))
    };
    outcome(failures.is_empty(), detail)
}

fn report(n: u32, name: &str, start: Instant, o: &Outcome) -> bool {
    println!(
        "criterion {n} [{}] {name} ({:.1}s): {}",
        if o.pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        o.detail
    );
    o.pass
}

fn main() {
    let mut all = true;

    let t = Instant::now();
    all &= report(1, "sequence parity", t, &criterion_1());
    let t = Instant::now();
    all &= report(2, "low-range search", t, &criterion_2());
    let t = Instant::now();
    all &= report(3, "published convergent", t, &criterion_3());

    let t = Instant::now();
    let replicated = prove(&ProveConfig {
        mode: RootMode::PaperReplication,
        ..ProveConfig::default()
    })
    .unwrap();
    all &= report(4, "reduction constants", t, &criterion_4(&replicated));

    let t = Instant::now();
    let corrected = prove(&ProveConfig::default()).unwrap();
    all &= report(5, "corrected-mode closure", t, &criterion_5(&corrected, t.elapsed()));

    let t = Instant::now();
    all &= report(6, "bound chain", t, &criterion_6());
    let t = Instant::now();
    all &= report(7, "Matveev constant", t, &criterion_7());
    let t = Instant::now();
    all &= report(8, "property suites", t, &criterion_8());

    if !all {
        std::process::exit(1);
    }
}
