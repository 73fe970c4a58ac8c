use bohrlab_core::sim::*;
use bohrlab_core::Error;

fn base_cfg(l0: f64) -> SimConfig {
    SimConfig {
        c: 1.0,
        big_c: 1.0,
        c0: SimConfig::default_c0(),
        k_policy: KPolicy::WorstCase,
        alpha0: (-l0).exp2(),
        log2_n: 1e6,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Straight-line recomputation of one transition, written out from the
/// update rules with no shared helpers, consuming the branch and k recorded
/// in the trace.
fn audit_transition(prev: &IterState, next: &IterState, cfg: &SimConfig) {
    let l = prev.log2_alpha_inv;
    match next.branch.unwrap() {
        Branch::Old => {
            let d2 = prev.d + cfg.big_c * (1.0 + l) * (1.0 + l) * (1.0 + l) * (1.0 + l);
            let r2 = cfg.c.log2() + prev.log2_rho - 1.5 * l - 5.0 * prev.d.log2() - d2.log2();
            let l2 = l - (1.25f64).log2();
            assert!(rel(next.d, d2) <= 1e-12);
            assert!(rel(next.log2_rho, r2) <= 1e-12);
            assert!(rel(next.log2_alpha_inv, l2) <= 1e-12);
        }
        Branch::Main => {
            let h = (l.log2().sqrt()).exp();
            let k = next.k.unwrap() as f64;
            assert!(rel(next.h.unwrap(), h) <= 1e-12);
            let hk1 = h.powf(k - 1.0);
            let hk = h.powf(k);
            let cube = l.log2() + l / hk1;
            let d2 = prev.d + cfg.big_c * cube * cube * cube * (1.0 + l).powf(1.0 + 2.0 / h.log2());
            let r2 = cfg.c.log2() + prev.log2_rho
                - l / (2.0 * hk1)
                - 5.0 * prev.d.log2()
                - d2.log2()
                - l.log2() / h.log2();
            let l2 = (1.0 - 1.0 / hk) * l;
            assert!(rel(next.d, d2) <= 1e-12);
            assert!(rel(next.log2_rho, r2) <= 1e-12);
            assert!(rel(next.log2_alpha_inv, l2) <= 1e-12);
        }
    }
}

#[test]
fn traces_survive_independent_recomputation() {
    for cfg in [
        base_cfg(24.0),
        SimConfig {
            k_policy: KPolicy::Sampled { seed: 5 },
            ..base_cfg(30.0)
        },
        SimConfig {
            k_policy: KPolicy::AdversarialMaxD,
            ..base_cfg(16.0)
        },
        SimConfig {
            c: 0.7,
            big_c: 1.9,
            ..base_cfg(20.0)
        },
    ] {
        let cfg = SimConfig {
            log2_n: 1e13,
            ..cfg
        };
        let out = run(&cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Saturated);
        assert!(out.states.len() >= 2);
        for pair in out.states.windows(2) {
            audit_transition(&pair[0], &pair[1], &cfg);
        }
    }
}

#[test]
fn frozen_thresholds() {
    let r8 = threshold(&base_cfg(8.0)).unwrap();
    assert!(rel(r8.log2_n_threshold, 8.780015e8) <= 1e-5);
    assert_eq!(r8.steps, 114);
    let r20 = threshold(&base_cfg(20.0)).unwrap();
    assert!(rel(r20.log2_n_threshold, 1.213327e11) <= 1e-5);
    assert_eq!(r20.steps, 410);
}

#[test]
fn trace_invariants() {
    let out = run(&SimConfig {
        log2_n: 1e13,
        ..base_cfg(32.0)
    })
    .unwrap();
    for (j, pair) in out.states.windows(2).enumerate() {
        assert_eq!(pair[1].i, pair[0].i + 1);
        assert!(pair[1].d > pair[0].d, "rank must grow at step {j}");
        assert!(
            pair[1].log2_alpha_inv < pair[0].log2_alpha_inv,
            "density must grow at step {j}"
        );
        if let (Some(k), Some(h)) = (pair[1].k, pair[1].h) {
            let l = pair[0].log2_alpha_inv;
            let kmax = ((9.0 * l).log2() / h.log2()).ceil() as u64;
            assert!(k >= 1 && k <= kmax);
        }
    }
    assert_eq!(out.steps() as usize, out.states.len() - 1);
    assert!(out.aggregates.satisfied());
}

#[test]
fn aggregates_hold_across_grid_and_policies() {
    for l0 in [8.0, 16.0, 32.0, 64.0] {
        for policy in [
            KPolicy::WorstCase,
            KPolicy::AdversarialMaxD,
            KPolicy::Sampled { seed: 3 },
        ] {
            let cfg = SimConfig {
                k_policy: policy,
                log2_n: 1e15,
                ..base_cfg(l0)
            };
            let out = run(&cfg).unwrap();
            assert_eq!(out.verdict, Verdict::Saturated);
            let agg = out.aggregates;
            assert!(
                agg.satisfied(),
                "aggregates failed for L0 = {l0}, {policy:?}: {agg:?}"
            );
            let bound = 3.0 * l0 * l0.log2().sqrt().exp();
            assert!((out.steps() as f64) <= bound);
        }
    }
}

#[test]
fn thresholds_monotone_in_the_constants() {
    let base = base_cfg(12.0);
    let t0 = threshold(&base).unwrap().log2_n_threshold;
    let t_big = threshold(&SimConfig { big_c: 2.0, ..base })
        .unwrap()
        .log2_n_threshold;
    let t_lossy = threshold(&SimConfig { c: 0.5, ..base })
        .unwrap()
        .log2_n_threshold;
    assert!(
        t_big >= t0,
        "larger rank constant cannot lower the requirement"
    );
    assert!(
        t_lossy >= t0,
        "faster radius loss cannot lower the requirement"
    );
}

#[test]
fn sweep_fit_is_frozen_and_deterministic() {
    let grid = default_alpha_grid();
    let a = sweep(&grid, &base_cfg(8.0)).unwrap();
    let b = sweep(&grid, &base_cfg(8.0)).unwrap();
    assert_eq!(a.fit.slope.to_bits(), b.fit.slope.to_bits());
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        assert_eq!(ra.log2_n_threshold.to_bits(), rb.log2_n_threshold.to_bits());
    }
    assert!(rel(a.fit.slope, 4.810595) <= 1e-3);
    assert!(a.fit.r_squared > 0.99);
}

#[test]
fn scheme_comparison_is_frozen() {
    let report = compare_schemes(&default_alpha_grid(), &base_cfg(8.0)).unwrap();
    assert!(rel(report.main_fit.slope, 4.810595) <= 1e-3);
    assert!(rel(report.old_fit.slope, 6.156631) <= 1e-3);
    assert!(report.main_exceeds_old);
    for row in &report.rows {
        assert!(row.old_log2_n_threshold > 0.0 && row.main_log2_n_threshold > 0.0);
    }
}

#[test]
fn degenerate_and_guard_paths() {
    assert!(matches!(
        threshold(&SimConfig {
            alpha0: 1.0,
            ..base_cfg(8.0)
        }),
        Err(Error::DegenerateDensity(_))
    ));
    let out = run(&SimConfig {
        alpha0: 1.0,
        ..base_cfg(8.0)
    })
    .unwrap();
    assert_eq!(out.verdict, Verdict::Degenerate);
    assert!(out.states.is_empty());
    assert!(sweep(&[0.7], &base_cfg(8.0)).is_err());
    assert!(sweep(&[], &base_cfg(8.0)).is_err());
}
