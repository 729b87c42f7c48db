//! Baselines frozen from the first verified corrected-mode run, and
//! stability of stage results under doubled precision.

use perrin_core::bounds::{absolute_bounds, BoundChain};
use perrin_core::highprec::{plastic_root, RealContext, RootMode};
use perrin_core::reduction::{published_big_m, stage_l, stage_m, StageResult};
use perrin_core::report::default_big_m;

fn corrected_m() -> rug::Integer {
    default_big_m(RootMode::Corrected, &absolute_bounds(BoundChain::Recomputed).unwrap())
}

fn eps(r: &StageResult) -> (String, String) {
    (
        r.min_epsilon.as_ref().unwrap().to_decimal_string(12),
        r.max_epsilon.as_ref().unwrap().to_decimal_string(12),
    )
}

#[test]
fn corrected_big_m_is_rounded_n_bound() {
    assert_eq!(corrected_m().to_string(), format!("34{}", "0".repeat(47)));
}

#[test]
fn corrected_l_and_m_stages() {
    let ctx = RealContext::new(1000).unwrap();
    let roots = plastic_root(ctx, RootMode::Corrected).unwrap();
    let big_m = corrected_m();

    let l = stage_l(ctx, &roots, &big_m).unwrap();
    assert_eq!(l.convergent.index, 105);
    assert_eq!(
        (l.aggregate_bound, l.homogeneous_bound, l.effective_bound),
        (Some(52), Some(53), Some(53))
    );
    assert_eq!(eps(&l), ("0.0356052633587".into(), "0.40230158977".into()));

    let m = stage_m(ctx, &roots, &big_m, 53).unwrap();
    assert_eq!(m.combos, 4770);
    assert_eq!(
        (m.aggregate_bound, m.homogeneous_bound, m.effective_bound),
        (Some(55), Some(53), Some(55))
    );
    assert_eq!(eps(&m), ("0.0000259517470016".into(), "0.464590204804".into()));
    assert_eq!(m.convergent_indices, [105, 106, 107, 108]);
}

#[test]
fn doubled_precision_reproduces_stages() {
    for mode in [RootMode::PaperReplication, RootMode::Corrected] {
        let run = |digits| {
            let ctx = RealContext::new(digits).unwrap();
            let roots = plastic_root(ctx, mode).unwrap();
            let l = stage_l(ctx, &roots, &published_big_m()).unwrap();
            let m = stage_m(ctx, &roots, &published_big_m(), 10).unwrap();
            (l, m)
        };
        let (l1, m1) = run(500);
        let (l2, m2) = run(1000);
        for (a, b) in [(&l1, &l2), (&m1, &m2)] {
            assert_eq!(a.effective_bound, b.effective_bound, "{mode}");
            assert_eq!(a.aggregate_bound, b.aggregate_bound, "{mode}");
            assert_eq!(a.per_combo.len(), b.per_combo.len());
            for (x, y) in a.per_combo.iter().zip(&b.per_combo) {
                assert_eq!(x.combo, y.combo);
                assert_eq!(x.value.k_bound, y.value.k_bound);
                assert_eq!(x.value.convergent, y.value.convergent);
                let digits = x.value.epsilon.certified_digits().unwrap().min(300) as usize;
                let (sx, sy) = (
                    x.value.epsilon.to_decimal_string(digits),
                    y.value.epsilon.to_decimal_string(digits),
                );
                assert_eq!(sx, sy, "{mode} {}", x.combo);
            }
        }
    }
}
