//! Cross-checks against oracles that share no code with the library: plain
//! MPFR floats with naive floor/reciprocal continued fractions, a matrix-power
//! Perrin evaluator, and values frozen from an independent mpmath run.

use perrin_core::highprec::{plastic_root, RealContext, RootMode};
use perrin_core::perrin::{perrin, perrin_stream};
use perrin_core::reduction::{published_big_m, run_stage, stage_combos, Combo, Stage, TauTable};
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer};

const BITS: u32 = 4000;

fn float(x: impl Into<Integer>) -> Float {
    Float::with_val(BITS, x.into())
}

fn oracle_alpha(mode: RootMode) -> Float {
    match mode {
        RootMode::PaperReplication => Float::with_val(BITS, 31) / 24,
        RootMode::Corrected => {
            let mut x = Float::with_val(BITS, 1.3247);
            for _ in 0..20 {
                let f = Float::with_val(BITS, x.clone().pow(3u32) - &x - 1u32);
                let df = Float::with_val(BITS, 3 * x.clone().pow(2u32) - 1u32);
                x -= f / df;
            }
            x
        }
    }
}

fn oracle_tau(mode: RootMode) -> Float {
    float(10).ln() / oracle_alpha(mode).ln()
}

/// `(index, q)` of the first convergent with `q > bound`, by the textbook
/// recurrence on floats.
fn oracle_first_convergent(x: &Float, bound: &Integer) -> (usize, Integer) {
    let (mut q_prev, mut q) = (Integer::from(0), Integer::from(1));
    let mut x = x.clone();
    for i in 0.. {
        let a = x.clone().floor().to_integer().unwrap();
        if i > 0 {
            let next = Integer::from(&a * &q) + &q_prev;
            q_prev = std::mem::replace(&mut q, next);
        }
        if q > *bound {
            return (i, q);
        }
        x = (x - &a).recip();
    }
    unreachable!()
}

fn dist(x: &Float) -> Float {
    let r = x.clone().round();
    Float::with_val(BITS, x - r).abs()
}

fn mat_mul(a: &[[Integer; 3]; 3], b: &[[Integer; 3]; 3]) -> [[Integer; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| Integer::from(&a[i][k] * &b[k][j])).sum()))
}

/// `P_n` from the companion matrix: `(P_n, P_{n+1}, P_{n+2})^T = C^n (3, 0, 2)^T`.
fn perrin_by_matrix(mut n: u64) -> Integer {
    let z = || Integer::new();
    let one = || Integer::from(1);
    let mut c = [[z(), one(), z()], [z(), z(), one()], [one(), one(), z()]];
    let mut acc = [[one(), z(), z()], [z(), one(), z()], [z(), z(), one()]];
    while n > 0 {
        if n & 1 == 1 {
            acc = mat_mul(&acc, &c);
        }
        c = mat_mul(&c, &c);
        n >>= 1;
    }
    Integer::from(&acc[0][0] * 3) + Integer::from(&acc[0][2] * 2)
}

#[test]
fn perrin_matches_matrix_powers() {
    for n in [0, 1, 2, 7, 50, 100, 333, 700, 1000] {
        assert_eq!(perrin(n), perrin_by_matrix(n), "P_{n}");
    }
    assert_eq!(perrin(100).to_string(), "1630580875002");
}

#[test]
fn perrin_700_digit_count() {
    let stream = perrin_stream(700);
    let digits = stream[700].value.to_string().len();
    assert!((85..=90).contains(&digits), "{digits}");
}

#[test]
fn plastic_root_matches_newton() {
    let ctx = RealContext::new(1000).unwrap();
    let alpha = plastic_root(ctx, RootMode::Corrected).unwrap();
    let diff = Float::with_val(BITS, alpha.alpha().value() - &oracle_alpha(RootMode::Corrected)).abs();
    assert!(diff < Float::with_val(BITS, 10).pow(-990i32), "{diff}");
}

#[test]
fn first_convergent_matches_naive_expansion() {
    let ctx = RealContext::new(1000).unwrap();
    let six_m = published_big_m() * 6;
    for (mode, index, q) in [
        (
            RootMode::PaperReplication,
            87,
            "362926510191645833704423315164618426146198842188725",
        ),
        (
            RootMode::Corrected,
            105,
            "21695574963444524513646677911090250505443859600601",
        ),
    ] {
        let (oi, oq) = oracle_first_convergent(&oracle_tau(mode), &six_m);
        assert_eq!((oi, oq.to_string().as_str()), (index, q), "{mode}");
        let roots = plastic_root(ctx, mode).unwrap();
        let tau = &ctx.int(10).ln().unwrap() / &roots.alpha().ln().unwrap();
        let table = TauTable::new(&tau, &published_big_m()).unwrap();
        assert_eq!(table.first_convergent().q, oq, "{mode}");
        assert_eq!(table.first_convergent().index, oi, "{mode}");
    }
}

/// Per-`d1` epsilon of the `l` stage with `M = 2.8e48`, from mpmath at 1000
/// digits; `d1 = 9` has no positive epsilon.
const MPMATH_L_STAGE: [(RootMode, [&str; 8]); 2] = [
    (
        RootMode::PaperReplication,
        [
            "0.0533735131935",
            "0.488331611875",
            "0.0264668095662",
            "0.075830501322",
            "0.380704797366",
            "0.461424908247",
            "0.22684705569",
            "0.358247809237",
        ],
    ),
    (
        RootMode::Corrected,
        [
            "0.161298750519",
            "0.121758796026",
            "0.369835258961",
            "0.0822188415339",
            "0.200838705011",
            "0.409375213453",
            "0.150985044813",
            "0.0426788870415",
        ],
    ),
];

#[test]
fn l_stage_matches_frozen_mpmath() {
    let ctx = RealContext::new(1000).unwrap();
    for (mode, expected) in MPMATH_L_STAGE {
        let roots = plastic_root(ctx, mode).unwrap();
        let r = run_stage(Stage::L, ctx, &roots, &published_big_m(), &stage_combos(Stage::L, 0, 0)).unwrap();
        assert_eq!(r.per_combo.len(), 8);
        for (row, want) in r.per_combo.iter().zip(expected) {
            let got = row.value.epsilon.to_decimal_string(12);
            assert!(
                got.starts_with(&want[..want.len() - 1]),
                "{mode} {}: {got} vs {want}",
                row.combo
            );
        }
        assert_eq!(r.homogeneous.len(), 1);
        assert_eq!(r.homogeneous[0].combo, Combo::l_stage(9));
    }
}

#[test]
fn epsilon_matches_naive_floats() {
    let ctx = RealContext::new(1000).unwrap();
    let big_m = published_big_m();
    for mode in [RootMode::PaperReplication, RootMode::Corrected] {
        let tau = oracle_tau(mode);
        let log_alpha = oracle_alpha(mode).ln();
        let (_, q) = oracle_first_convergent(&tau, &Integer::from(&big_m * 6));
        let roots = plastic_root(ctx, mode).unwrap();
        let combos: Vec<Combo> = [(3, 7, 5), (4, 1, 31), (2, 0, 12), (8, 8, 40)]
            .into_iter()
            .map(|(d1, d2, l)| Combo::m_stage(d1, d2, l))
            .collect();
        let r = run_stage(Stage::M, ctx, &roots, &big_m, &combos).unwrap();
        let mut compared = 0;
        for row in &r.per_combo {
            if row.value.convergent.q != q {
                continue;
            }
            compared += 1;
            let mu = Float::with_val(BITS, Float::with_val(BITS, row.combo.numerator()) / 9u32).ln() / &log_alpha;
            let mut eps = dist(&Float::with_val(BITS, &mu * &q));
            eps -= Float::with_val(BITS, &big_m * dist(&Float::with_val(BITS, &tau * &q)));
            let lib = row.value.epsilon.value();
            let diff = Float::with_val(BITS, lib - &eps).abs();
            assert!(
                diff < Float::with_val(BITS, 10).pow(-800i32),
                "{mode} {}: {}",
                row.combo,
                eps.to_string_radix_round(10, Some(30), Round::Nearest)
            );
        }
        assert!(
            compared >= 2,
            "{mode}: only {compared} combos used the first convergent"
        );
    }
}

#[test]
fn m_stage_extremes_match_frozen_mpmath() {
    let ctx = RealContext::new(1000).unwrap();
    // (mode, l_max, min eps, max eps, max log(Aq/eps)/log B)
    let cases = [
        (
            RootMode::PaperReplication,
            53,
            "0.000323113732272",
            "0.499434894973",
            56.11945761,
        ),
        (
            RootMode::PaperReplication,
            54,
            "0.0000327895184944",
            "0.499434894973",
            57.11307799,
        ),
        (
            RootMode::Corrected,
            54,
            "0.0000892822693513",
            "0.470496060751",
            56.78382648,
        ),
    ];
    for (mode, l_max, min_eps, max_eps, max_k) in cases {
        let roots = plastic_root(ctx, mode).unwrap();
        let r = run_stage(
            Stage::M,
            ctx,
            &roots,
            &published_big_m(),
            &stage_combos(Stage::M, l_max, 0),
        )
        .unwrap();
        let prefix = |s: &str| s[..s.len() - 1].to_string();
        let min = r.min_epsilon.unwrap().to_decimal_string(12);
        let max = r.max_epsilon.unwrap().to_decimal_string(12);
        assert!(min.starts_with(&prefix(min_eps)), "{mode} {l_max}: {min}");
        assert!(max.starts_with(&prefix(max_eps)), "{mode} {l_max}: {max}");
        assert!(
            (r.max_k_real.unwrap() - max_k).abs() < 1e-7,
            "{mode} {l_max}: {:?}",
            r.max_k_real
        );
    }
}
