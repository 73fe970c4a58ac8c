//! Symbolic iteration of the density-increment recursion.
//!
//! All quantities that shrink or grow geometrically are tracked in base-2
//! logarithms: `log2_rho` instead of the radius, `log2_alpha_inv` (written
//! `L` below) instead of the density, and `log2_n` instead of the ambient
//! modulus.  This keeps states representable long after the raw values
//! would leave f64 range.

use std::f64::consts::{E, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fit::{linear_fit, LinearFit};

/// Hard cap on iteration count; hitting it is reported as an error rather
/// than looping forever on a malformed configuration.
pub const MAX_STEPS: u64 = 1_000_000;

/// Which update rule produced a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Main,
    Old,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Main => "main",
            Branch::Old => "old",
        }
    }
}

/// Choice of the tower height `k` on main-branch steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KPolicy {
    /// Always take the largest admissible `k` (slowest density gain).
    WorstCase,
    /// Always take `k = 1` (fastest rank growth and radius loss).
    AdversarialMaxD,
    /// Uniform in `[1, k_max]`, drawn from a stream keyed by the step index.
    Sampled { seed: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    /// Radius-loss constant, in (0, 1].
    pub c: f64,
    /// Rank-growth constant, at least 1.
    pub big_c: f64,
    /// Densities above `c0` are routed to the old branch; must lie in (0, 1/e).
    pub c0: f64,
    pub k_policy: KPolicy,
    /// Starting density.
    pub alpha0: f64,
    /// Base-2 logarithm of the ambient modulus.
    pub log2_n: f64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c <= 1.0) || !self.c.is_finite() {
            return Err(Error::Domain(format!(
                "radius constant c = {} must lie in (0, 1]",
                self.c
            )));
        }
        if !(self.big_c >= 1.0) || !self.big_c.is_finite() {
            return Err(Error::Domain(format!(
                "rank constant C = {} must be at least 1",
                self.big_c
            )));
        }
        if !(self.c0 > 0.0 && self.c0 < 1.0 / E) {
            return Err(Error::Domain(format!(
                "branch cutoff c0 = {} must lie in (0, 1/e)",
                self.c0
            )));
        }
        if !(self.alpha0 > 0.0) || !self.alpha0.is_finite() {
            return Err(Error::Domain(format!(
                "starting density {} must be positive and finite",
                self.alpha0
            )));
        }
        if !self.log2_n.is_finite() {
            return Err(Error::Domain(format!(
                "log2 modulus {} must be finite",
                self.log2_n
            )));
        }
        Ok(())
    }

    /// Default cutoff used throughout: 1/(2e).
    pub fn default_c0() -> f64 {
        1.0 / (2.0 * E)
    }
}

/// One state of the recursion.  `branch`, `k`, and `h` describe the step
/// that produced the state and are `None` on the initial state (and `k`,
/// `h` on every old-branch state).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterState {
    pub i: u64,
    /// Bohr rank, tracked as a float since the updates are real-valued.
    pub d: f64,
    pub log2_rho: f64,
    /// `L = log2(1/alpha)`.
    pub log2_alpha_inv: f64,
    pub branch: Option<Branch>,
    pub k: Option<u64>,
    pub h: Option<f64>,
}

impl IterState {
    pub fn initial(alpha0: f64) -> IterState {
        IterState {
            i: 0,
            d: 1.0,
            log2_rho: 1.0,
            log2_alpha_inv: -alpha0.log2(),
            branch: None,
            k: None,
            h: None,
        }
    }

    pub fn alpha(&self) -> f64 {
        (-self.log2_alpha_inv).exp2()
    }

    pub fn rho(&self) -> f64 {
        self.log2_rho.exp2()
    }
}

fn height(l: f64) -> f64 {
    l.log2().sqrt().exp()
}

fn k_max(l: f64, log2_h: f64) -> u64 {
    let k = ((9.0 * l).log2() / log2_h).ceil();
    if k >= 1.0 {
        k as u64
    } else {
        1
    }
}

fn choose_k(policy: KPolicy, kmax: u64, step: u64) -> u64 {
    match policy {
        KPolicy::WorstCase => kmax,
        KPolicy::AdversarialMaxD => 1,
        KPolicy::Sampled { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(step);
            rng.random_range(1..=kmax)
        }
    }
}

/// Main-branch update.  Requires `alpha <= c0` so that the iterated
/// logarithm in the height is positive.
pub fn step_main(s: &IterState, cfg: &SimConfig) -> Result<IterState> {
    let l = s.log2_alpha_inv;
    if l < -cfg.c0.log2() {
        return Err(Error::DegenerateDensity(s.alpha()));
    }
    let h = height(l);
    let log2_h = h.log2();
    let kmax = k_max(l, log2_h);
    let k = choose_k(cfg.k_policy, kmax, s.i);
    let h_k1 = h.powi((k - 1) as i32);
    let h_k = h.powi(k as i32);
    let d_next =
        s.d + cfg.big_c * (l.log2() + l / h_k1).powi(3) * (1.0 + l).powf(1.0 + 2.0 / log2_h);
    let log2_rho_next = cfg.c.log2() + s.log2_rho
        - l / (2.0 * h_k1)
        - 5.0 * s.d.log2()
        - d_next.log2()
        - l.log2() / log2_h;
    let l_next = (1.0 - 1.0 / h_k) * l;
    Ok(IterState {
        i: s.i + 1,
        d: d_next,
        log2_rho: log2_rho_next,
        log2_alpha_inv: l_next,
        branch: Some(Branch::Main),
        k: Some(k),
        h: Some(h),
    })
}

/// Old-branch update.  Valid for any density in (0, 1).
pub fn step_old(s: &IterState, cfg: &SimConfig) -> Result<IterState> {
    let l = s.log2_alpha_inv;
    if l <= 0.0 {
        return Err(Error::DegenerateDensity(s.alpha()));
    }
    let d_next = s.d + cfg.big_c * (1.0 + l).powi(4);
    let log2_rho_next = cfg.c.log2() + s.log2_rho - 1.5 * l - 5.0 * s.d.log2() - d_next.log2();
    let l_next = l - (5.0f64 / 4.0).log2();
    Ok(IterState {
        i: s.i + 1,
        d: d_next,
        log2_rho: log2_rho_next,
        log2_alpha_inv: l_next,
        branch: Some(Branch::Old),
        k: None,
        h: None,
    })
}

/// Smallest `log2(N)` under which the recursion may continue from `s`:
/// the continuation condition `(rho/2pi)^d N >= (C d / alpha)^(5d)`
/// rearranged for `log2(N)`.
pub fn continuation_requirement(s: &IterState, cfg: &SimConfig) -> f64 {
    5.0 * s.d * (cfg.big_c.log2() + s.d.log2() + s.log2_alpha_inv) - s.d * (s.log2_rho - TAU.log2())
}

/// Upper bound on `log2(N)` implied by a continuation failure at `s`.
pub fn implied_upper_bound(s: &IterState, cfg: &SimConfig) -> f64 {
    5.0 * s.d * (cfg.big_c.log2() + s.d.log2() - s.log2_rho + s.log2_alpha_inv)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    /// The modulus was too small to keep iterating; carries the bound on
    /// `log2(N)` implied by the failing state.
    ContinuationFailed { implied_log2_n: f64 },
    /// The density was driven to 1.
    Saturated,
    /// The starting density was already at least 1.
    Degenerate,
}

/// Per-trace sums that the analysis bounds in closed form.
#[derive(Clone, Copy, Debug)]
pub struct AggregateReport {
    pub main_steps: u64,
    pub old_steps: u64,
    /// Sum of `1/h^k` over main steps; bounded by `log2(L0)`.
    pub sum_inv_h_k: f64,
    pub sum_inv_h_k_bound: f64,
    /// Sum of `1/h^(k-1)` over main steps; bounded by `exp(2 sqrt(log2(L0)))`.
    pub sum_inv_h_k1: f64,
    pub sum_inv_h_k1_bound: f64,
    /// Minimum over main steps of `(L/h^k) * 9h`; at least 1 whenever
    /// `k <= k_max`, so the density gain per step never collapses.
    pub min_gain_ratio: f64,
}

impl AggregateReport {
    pub fn satisfied(&self) -> bool {
        self.sum_inv_h_k <= self.sum_inv_h_k_bound + 1e-9
            && self.sum_inv_h_k1 <= self.sum_inv_h_k1_bound + 1e-9
            && self.min_gain_ratio >= 1.0 - 1e-9
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    /// Visited states, starting with the initial one.  Empty when the
    /// starting density is degenerate.
    pub states: Vec<IterState>,
    /// `continuation_requirement` at each state from which a step was
    /// applied; always one shorter than `states` on non-degenerate runs.
    pub step_requirements: Vec<f64>,
    pub verdict: Verdict,
    pub aggregates: AggregateReport,
}

impl RunResult {
    pub fn final_state(&self) -> Option<&IterState> {
        self.states.last()
    }

    pub fn steps(&self) -> u64 {
        self.step_requirements.len() as u64
    }
}

fn aggregate(states: &[IterState], alpha0: f64) -> AggregateReport {
    let l0 = -alpha0.log2();
    let log2_l0 = if l0 > 1.0 { l0.log2() } else { 0.0 };
    let mut main_steps = 0;
    let mut old_steps = 0;
    let mut sum_k = 0.0;
    let mut sum_k1 = 0.0;
    let mut min_gain = f64::INFINITY;
    for pair in states.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        match next.branch {
            Some(Branch::Main) => {
                main_steps += 1;
                let h = next.h.expect("main state carries h");
                let k = next.k.expect("main state carries k") as i32;
                sum_k += h.powi(-k);
                sum_k1 += h.powi(-(k - 1));
                let gain = prev.log2_alpha_inv * h.powi(-k) * 9.0 * h;
                if gain < min_gain {
                    min_gain = gain;
                }
            }
            Some(Branch::Old) => old_steps += 1,
            None => {}
        }
    }
    AggregateReport {
        main_steps,
        old_steps,
        sum_inv_h_k: sum_k,
        sum_inv_h_k_bound: log2_l0,
        sum_inv_h_k1: sum_k1,
        sum_inv_h_k1_bound: (2.0 * log2_l0.sqrt()).exp(),
        min_gain_ratio: min_gain,
    }
}

/// Which update rules a run is allowed to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Route by density: old branch above `c0`, main branch otherwise.
    Full,
    /// Only the old-branch update, as a comparison baseline.
    OldOnly,
}

fn next_state(s: &IterState, cfg: &SimConfig, scheme: Scheme) -> Result<IterState> {
    match scheme {
        Scheme::OldOnly => step_old(s, cfg),
        Scheme::Full => {
            if s.log2_alpha_inv < -cfg.c0.log2() {
                step_old(s, cfg)
            } else {
                step_main(s, cfg)
            }
        }
    }
}

fn run_scheme(cfg: &SimConfig, scheme: Scheme) -> Result<RunResult> {
    cfg.validate()?;
    if cfg.alpha0 >= 1.0 {
        return Ok(RunResult {
            states: Vec::new(),
            step_requirements: Vec::new(),
            verdict: Verdict::Degenerate,
            aggregates: aggregate(&[], cfg.alpha0.min(0.5)),
        });
    }
    let mut states = vec![IterState::initial(cfg.alpha0)];
    let mut reqs = Vec::new();
    let verdict = loop {
        let s = *states.last().expect("nonempty");
        if s.log2_alpha_inv <= 0.0 {
            break Verdict::Saturated;
        }
        let req = continuation_requirement(&s, cfg);
        if cfg.log2_n < req {
            break Verdict::ContinuationFailed {
                implied_log2_n: implied_upper_bound(&s, cfg),
            };
        }
        reqs.push(req);
        states.push(next_state(&s, cfg, scheme)?);
        if states.len() as u64 > MAX_STEPS {
            return Err(Error::NonTermination(MAX_STEPS));
        }
    };
    let aggregates = aggregate(&states, cfg.alpha0);
    Ok(RunResult {
        states,
        step_requirements: reqs,
        verdict,
        aggregates,
    })
}

/// Run the recursion under the branch rule until the density saturates,
/// the modulus runs out, or the step cap trips.
pub fn run(cfg: &SimConfig) -> Result<RunResult> {
    run_scheme(cfg, Scheme::Full)
}

#[derive(Clone, Copy, Debug)]
pub struct ThresholdRecord {
    /// Smallest `log2(N)` for which the run saturates instead of failing
    /// the continuation condition.
    pub log2_n_threshold: f64,
    pub steps: u64,
    pub d_final: f64,
    pub log2_rho_final: f64,
}

/// Iterate to saturation regardless of the modulus and report the largest
/// continuation requirement seen.  Independent of `cfg.log2_n`.
pub fn threshold_for(cfg: &SimConfig, scheme: Scheme) -> Result<ThresholdRecord> {
    cfg.validate()?;
    if cfg.alpha0 >= 1.0 {
        return Err(Error::DegenerateDensity(cfg.alpha0));
    }
    let mut s = IterState::initial(cfg.alpha0);
    let mut max_req = f64::NEG_INFINITY;
    let mut steps = 0;
    while s.log2_alpha_inv > 0.0 {
        let req = continuation_requirement(&s, cfg);
        if req > max_req {
            max_req = req;
        }
        s = next_state(&s, cfg, scheme)?;
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::NonTermination(MAX_STEPS));
        }
    }
    Ok(ThresholdRecord {
        log2_n_threshold: max_req,
        steps,
        d_final: s.d,
        log2_rho_final: s.log2_rho,
    })
}

pub fn threshold(cfg: &SimConfig) -> Result<ThresholdRecord> {
    threshold_for(cfg, Scheme::Full)
}

#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub alpha0: f64,
    pub log2_alpha0_inv: f64,
    pub log2_n_threshold: f64,
    pub steps: u64,
    pub d_final: f64,
    pub log2_rho_final: f64,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Fit of `log2(threshold)` against `log2(L0)`; the slope is the
    /// effective exponent of `log2(N)` in `L0`.
    pub fit: LinearFit,
}

fn sweep_rows(alphas: &[f64], base: &SimConfig, scheme: Scheme) -> Result<Vec<SweepRow>> {
    if alphas.is_empty() {
        return Err(Error::Domain("sweep needs at least one density".into()));
    }
    for &a in alphas {
        if !(a > 0.0 && a < 0.5) {
            return Err(Error::Domain(format!(
                "sweep density {a} must lie in (0, 1/2) so that log2(L0) is positive"
            )));
        }
    }
    alphas
        .iter()
        .map(|&alpha0| {
            let cfg = SimConfig { alpha0, ..*base };
            let rec = threshold_for(&cfg, scheme)?;
            Ok(SweepRow {
                alpha0,
                log2_alpha0_inv: -alpha0.log2(),
                log2_n_threshold: rec.log2_n_threshold,
                steps: rec.steps,
                d_final: rec.d_final,
                log2_rho_final: rec.log2_rho_final,
            })
        })
        .collect()
}

fn fit_rows(rows: &[SweepRow]) -> Result<LinearFit> {
    let xs: Vec<f64> = rows.iter().map(|r| r.log2_alpha0_inv.log2()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.log2_n_threshold.log2()).collect();
    linear_fit(&xs, &ys)
}

/// Threshold exponents across a density grid, with the power-law fit.
pub fn sweep(alphas: &[f64], base: &SimConfig) -> Result<SweepReport> {
    let rows = sweep_rows(alphas, base, Scheme::Full)?;
    let fit = fit_rows(&rows)?;
    Ok(SweepReport { rows, fit })
}

#[derive(Clone, Copy, Debug)]
pub struct CompareRow {
    pub alpha0: f64,
    pub main_log2_n_threshold: f64,
    pub old_log2_n_threshold: f64,
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub main_fit: LinearFit,
    pub old_fit: LinearFit,
    /// True when the headline density exponent `1/e` of the full scheme
    /// beats the old-only baseline, i.e. the old fit has the larger slope.
    pub main_exceeds_old: bool,
}

/// Run both schemes over the same density grid and fit both exponents.
pub fn compare_schemes(alphas: &[f64], base: &SimConfig) -> Result<CompareReport> {
    let main_rows = sweep_rows(alphas, base, Scheme::Full)?;
    let old_rows = sweep_rows(alphas, base, Scheme::OldOnly)?;
    let main_fit = fit_rows(&main_rows)?;
    let old_fit = fit_rows(&old_rows)?;
    let rows = main_rows
        .iter()
        .zip(&old_rows)
        .map(|(m, o)| CompareRow {
            alpha0: m.alpha0,
            main_log2_n_threshold: m.log2_n_threshold,
            old_log2_n_threshold: o.log2_n_threshold,
        })
        .collect();
    Ok(CompareReport {
        rows,
        main_fit,
        old_fit,
        main_exceeds_old: old_fit.slope > main_fit.slope,
    })
}

/// Densities `2^-8, 2^-12, ..., 2^-64`: the standard sweep grid.
pub fn default_alpha_grid() -> Vec<f64> {
    (8..=64).step_by(4).map(|e| (-(e as f64)).exp2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_cfg(alpha0: f64) -> SimConfig {
        SimConfig {
            c: 1.0,
            big_c: 1.0,
            c0: SimConfig::default_c0(),
            k_policy: KPolicy::WorstCase,
            alpha0,
            log2_n: 1.0e6,
        }
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn old_step_from_half() {
        let cfg = base_cfg(0.5);
        let s = IterState::initial(0.5);
        let next = step_old(&s, &cfg).unwrap();
        assert!(rel_close(next.alpha(), 0.625, 1e-12));
        assert!(rel_close(next.d, 17.0, 1e-12));
        let expected_rho = 2.0 * 0.5f64.powf(1.5) / 17.0;
        assert!(rel_close(next.rho(), expected_rho, 1e-12));
        assert_eq!(next.branch, Some(Branch::Old));
        assert_eq!(next.k, None);
    }

    #[test]
    fn main_step_rejects_large_density() {
        let cfg = base_cfg(0.5);
        let s = IterState::initial(0.5);
        let err = step_main(&s, &cfg).unwrap_err();
        assert_eq!(err.name(), "DegenerateDensity");
    }

    #[test]
    fn main_step_shapes() {
        let cfg = base_cfg((-10.0f64).exp2());
        let s = IterState::initial(cfg.alpha0);
        let next = step_main(&s, &cfg).unwrap();
        assert!(next.d > s.d);
        assert!(next.log2_rho < s.log2_rho);
        assert!(next.log2_alpha_inv < s.log2_alpha_inv);
        assert!(next.log2_alpha_inv > 0.0);
        let h = next.h.unwrap();
        let k = next.k.unwrap();
        assert!(h > 1.0);
        assert_eq!(k, k_max(s.log2_alpha_inv, h.log2()));
    }

    #[test]
    fn sampled_k_inside_range_and_deterministic() {
        let l = 20.0;
        let h = height(l);
        let kmax = k_max(l, h.log2());
        assert!(kmax >= 2);
        for step in 0..50 {
            let k = choose_k(KPolicy::Sampled { seed: 9 }, kmax, step);
            let again = choose_k(KPolicy::Sampled { seed: 9 }, kmax, step);
            assert_eq!(k, again);
            assert!((1..=kmax).contains(&k));
        }
    }

    #[test]
    fn degenerate_density_gives_empty_trace() {
        let cfg = base_cfg(1.5);
        let out = run(&cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Degenerate);
        assert!(out.states.is_empty());
        assert_eq!(out.steps(), 0);
    }

    #[test]
    fn small_modulus_fails_continuation() {
        let mut cfg = base_cfg((-8.0f64).exp2());
        cfg.log2_n = 50.0;
        let out = run(&cfg).unwrap();
        match out.verdict {
            Verdict::ContinuationFailed { implied_log2_n } => {
                assert!(implied_log2_n.is_finite());
                assert!(implied_log2_n > 0.0);
            }
            other => panic!("expected continuation failure, got {other:?}"),
        }
    }

    #[test]
    fn large_modulus_saturates() {
        let mut cfg = base_cfg((-8.0f64).exp2());
        cfg.log2_n = 1.0e12;
        let out = run(&cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Saturated);
        let last = out.final_state().unwrap();
        assert!(last.log2_alpha_inv <= 0.0);
        assert!(out.aggregates.satisfied());
        let l0 = 8.0f64;
        let step_bound = 3.0 * l0 * l0.log2().sqrt().exp();
        assert!((out.steps() as f64) <= step_bound);
    }

    #[test]
    fn threshold_matches_run_behaviour() {
        let mut cfg = base_cfg((-8.0f64).exp2());
        let rec = threshold(&cfg).unwrap();
        assert!(rec.log2_n_threshold.is_finite());
        cfg.log2_n = rec.log2_n_threshold;
        assert_eq!(run(&cfg).unwrap().verdict, Verdict::Saturated);
        cfg.log2_n = rec.log2_n_threshold * 0.999;
        assert!(matches!(
            run(&cfg).unwrap().verdict,
            Verdict::ContinuationFailed { .. }
        ));
    }

    #[test]
    fn threshold_is_deterministic() {
        let cfg = base_cfg((-12.0f64).exp2());
        let a = threshold(&cfg).unwrap();
        let b = threshold(&cfg).unwrap();
        assert_eq!(a.log2_n_threshold.to_bits(), b.log2_n_threshold.to_bits());
        assert_eq!(a.steps, b.steps);
    }

    #[test]
    fn config_validation() {
        let mut cfg = base_cfg(0.25);
        cfg.c = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = base_cfg(0.25);
        cfg.big_c = 0.5;
        assert!(cfg.validate().is_err());
        let mut cfg = base_cfg(0.25);
        cfg.c0 = 0.5;
        assert!(cfg.validate().is_err());
        let mut cfg = base_cfg(0.25);
        cfg.alpha0 = 0.0;
        assert!(cfg.validate().is_err());
        assert!(base_cfg(0.25).validate().is_ok());
    }

    #[test]
    fn old_only_threshold_is_smaller_in_exponent() {
        let grid: Vec<f64> = [8.0f64, 16.0, 32.0, 64.0]
            .iter()
            .map(|&e| (-e).exp2())
            .collect();
        let report = compare_schemes(&grid, &base_cfg(0.5)).unwrap();
        assert!(report.main_exceeds_old);
        assert!(report.old_fit.slope > report.main_fit.slope);
    }
}
