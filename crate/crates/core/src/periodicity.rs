//! Random periodization sampling, Bernstein tail bounds, almost-periodicity
//! verification, and the density dichotomy decision procedure.
//!
//! Sampling draws R with P(x in R) = gamma^{-1} (1_M * mu_T)(x) and checks
//! concentration of |R| and of the triple convolution against their
//! expectations. The dichotomy decides, in exact integer arithmetic, between
//! a two-sided density witness and a 1.1-factor density increment.

use crate::bohr::{BohrSet, BohrSpec};
use crate::conv::{convolve, convolve_counts, linf_dist, sumset, DensityFn};
use crate::error::{Error, Result};
use crate::zn::{Modulus, ZnSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Tolerance above 1.0 before an inclusion probability counts as overflow.
pub const PROBABILITY_GUARD: f64 = 1e-12;

/// Parameter bundle for the almost-periodicity statements: primary tolerance
/// eps, secondary tolerance eps1, ratio eta = |M|/|L|, doubling constant k
/// (|A+S| <= k|A|), density sigma of S in its ambient Bohr set, and the
/// pointwise sampling bound gamma >= max 1_M * mu_T.
#[derive(Clone, Copy, Debug)]
pub struct PeriodicityParams {
    pub eps: f64,
    pub eps1: f64,
    pub eta: f64,
    pub k: f64,
    pub sigma: f64,
    pub gamma: f64,
}

impl PeriodicityParams {
    pub fn new(eps: f64, eps1: f64, eta: f64, k: f64, sigma: f64, gamma: f64) -> Result<Self> {
        let check_unit = |name: &str, v: f64, closed: bool| -> Result<()> {
            let ok = v.is_finite() && v > 0.0 && if closed { v <= 1.0 } else { v < 1.0 };
            if ok {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "{name} = {v} outside (0, 1{}",
                    if closed { "]" } else { ")" }
                )))
            }
        };
        check_unit("eps", eps, false)?;
        check_unit("eps1", eps1, false)?;
        check_unit("eta", eta, true)?;
        check_unit("sigma", sigma, true)?;
        check_unit("gamma", gamma, true)?;
        if !k.is_finite() || k < 1.0 {
            return Err(Error::Domain(format!(
                "doubling constant k = {k} must be >= 1"
            )));
        }
        Ok(PeriodicityParams {
            eps,
            eps1,
            eta,
            k,
            sigma,
            gamma,
        })
    }

    /// Right side of the assembled almost-periodicity estimate:
    /// (2 eps + eps1) |A||M| + 18 |A| sqrt(gamma |M| log2 |W|).
    pub fn composite_linf_bound(&self, a_card: u64, m_card: u64, w_card: u64) -> f64 {
        let a = a_card as f64;
        let m = m_card as f64;
        (2.0 * self.eps + self.eps1) * a * m
            + 18.0 * a * (self.gamma * m * (w_card as f64).log2()).sqrt()
    }
}

/// Inputs to the tail bound: deviation t, total variance, and the uniform
/// bound max_dev on |X_k - E X_k|.
#[derive(Clone, Copy, Debug)]
pub struct BernsteinBound {
    pub t: f64,
    pub variance_sum: f64,
    pub max_dev: f64,
}

impl BernsteinBound {
    pub fn new(t: f64, variance_sum: f64, max_dev: f64) -> Result<Self> {
        for (name, v) in [
            ("t", t),
            ("variance_sum", variance_sum),
            ("max_dev", max_dev),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "{name} = {v} must be finite and nonnegative"
                )));
            }
        }
        Ok(BernsteinBound {
            t,
            variance_sum,
            max_dev,
        })
    }
}

/// 2 exp(-(t^2/2) / (variance_sum + t max_dev / 3)), the tail bound on
/// P(|sum of centered independent variables| >= t). A zero denominator means
/// the sum never deviates: the bound is the vacuous 2 at t = 0 and 0 past it.
pub fn bernstein_bound(b: BernsteinBound) -> f64 {
    let denom = b.variance_sum + b.t * b.max_dev / 3.0;
    if denom == 0.0 {
        return if b.t == 0.0 { 2.0 } else { 0.0 };
    }
    2.0 * (-0.5 * b.t * b.t / denom).exp()
}

/// Inclusion probabilities gamma^{-1} (1_M * mu_T)(x) for every x, clamped
/// to 1 within [`PROBABILITY_GUARD`].
pub fn inclusion_probabilities(m: &ZnSet, t: &ZnSet, gamma: f64) -> Result<Vec<f64>> {
    if t.is_empty() {
        return Err(Error::EmptyT);
    }
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::Domain(format!("gamma = {gamma} must be positive")));
    }
    let counts = convolve_counts(m, t)?;
    let scale = gamma * t.card() as f64;
    counts
        .iter()
        .map(|&c| {
            let p = c as f64 / scale;
            if p > 1.0 + PROBABILITY_GUARD {
                Err(Error::ProbabilityOverflow(p))
            } else {
                Ok(p.min(1.0))
            }
        })
        .collect()
}

/// Smallest admissible sampling bound for the pair (M, T):
/// max_x (1_M * mu_T)(x).
pub fn max_sampling_gamma(m: &ZnSet, t: &ZnSet) -> Result<f64> {
    if t.is_empty() {
        return Err(Error::EmptyT);
    }
    let counts = convolve_counts(m, t)?;
    let max = counts.iter().copied().max().unwrap_or(0);
    Ok(max as f64 / t.card() as f64)
}

/// One sample of the random periodization R: each x enters independently
/// with probability gamma^{-1} (1_M * mu_T)(x). The stream index keeps
/// parallel trials from one seed on disjoint generator streams; a uniform
/// draw is consumed for every x so the stream position never depends on the
/// probabilities.
pub fn sample_r_stream(m: &ZnSet, t: &ZnSet, gamma: f64, seed: u64, stream: u64) -> Result<ZnSet> {
    let probs = inclusion_probabilities(m, t, gamma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut r = ZnSet::empty(m.modulus());
    for (x, &p) in probs.iter().enumerate() {
        let u: f64 = rng.random();
        if u < p {
            r.insert(x as u64);
        }
    }
    Ok(r)
}

/// [`sample_r_stream`] on the default stream.
pub fn sample_r(m: &ZnSet, t: &ZnSet, gamma: f64, seed: u64) -> Result<ZnSet> {
    sample_r_stream(m, t, gamma, seed, 0)
}

/// Convolution with mu_T. A singleton T is applied as an exact translation,
/// so smoothing by the identity carries no float noise.
fn smooth(f: &DensityFn, t: &ZnSet) -> Result<DensityFn> {
    if t.is_empty() {
        return Err(Error::EmptyT);
    }
    if t.card() == 1 {
        let shift = t.iter().next().unwrap();
        let n = f.modulus().n();
        let mut values = vec![0.0; n as usize];
        for x in 0..n {
            values[((x + shift) % n) as usize] = f.value_at(x);
        }
        return DensityFn::from_values(f.modulus(), values);
    }
    convolve(f, &DensityFn::mu(t)?)
}

/// Checks the almost-periodicity predicate
/// ||1_A*1_M*1_L*mu_T - 1_A*1_M*1_L||_inf <= eps |A||M| of a candidate T;
/// returns the verdict and the achieved ratio (left side over |A||M|).
pub fn check_almost_period(
    a: &ZnSet,
    m: &ZnSet,
    l: &ZnSet,
    t: &ZnSet,
    eps: f64,
) -> Result<(bool, f64)> {
    let f = convolve(
        &convolve(&DensityFn::indicator(a), &DensityFn::indicator(m))?,
        &DensityFn::indicator(l),
    )?;
    let dev = linf_dist(&smooth(&f, t)?, &f)?;
    let scale = (a.card() * m.card()) as f64;
    let achieved = if dev == 0.0 { 0.0 } else { dev / scale };
    Ok((dev <= eps * scale, achieved))
}

/// One trial of the concentration experiment.
#[derive(Clone, Copy, Debug)]
pub struct TrialRecord {
    pub trial: u64,
    pub r_size: u64,
    /// | |R| - gamma^{-1}|M| |.
    pub size_dev: f64,
    /// ||1_A*1_R*1_L - gamma^{-1} 1_A*1_M*1_L*mu_T||_inf.
    pub linf_dev: f64,
    pub size_hit: bool,
    pub linf_hit: bool,
}

impl TrialRecord {
    pub fn hit(&self) -> bool {
        self.size_hit && self.linf_hit
    }
}

/// Aggregate over independent periodization samples: how often |R| lands
/// within 6 sqrt(gamma^{-1}|M|) of its mean and the sampled triple
/// convolution within 6|A| sqrt(gamma^{-1}|M| log2 |W|) of its target,
/// where W = A+M+L+T.
#[derive(Clone, Debug)]
pub struct SampleReport {
    pub trials: u64,
    /// Fraction of trials passing the size concentration check.
    pub size_hits: f64,
    /// Fraction of trials passing the convolution concentration check.
    pub linf_hits: f64,
    pub w_size: u64,
    pub expected_r_size: f64,
    pub size_bound: f64,
    pub linf_bound: f64,
    pub records: Vec<TrialRecord>,
}

pub fn verify_r_concentration(
    a: &ZnSet,
    m: &ZnSet,
    l: &ZnSet,
    t: &ZnSet,
    gamma: f64,
    trials: u64,
    seed: u64,
) -> Result<SampleReport> {
    if m.card() < 2 {
        return Err(Error::Domain(format!("need |M| >= 2, got {}", m.card())));
    }
    if a.is_empty() || l.is_empty() {
        return Err(Error::Domain("need nonempty A and L".into()));
    }
    // Surfaces EmptyT, bad gamma, and probability overflow before any trial.
    inclusion_probabilities(m, t, gamma)?;

    let w = sumset(&sumset(&sumset(a, m)?, l)?, t)?;
    let w_size = w.card();
    let expected = m.card() as f64 / gamma;
    let size_bound = 6.0 * expected.sqrt();
    let linf_bound = 6.0 * a.card() as f64 * (expected * (w_size as f64).log2()).sqrt();

    let ind_a = DensityFn::indicator(a);
    let ind_l = DensityFn::indicator(l);
    let target = smooth(
        &convolve(&convolve(&ind_a, &DensityFn::indicator(m))?, &ind_l)?,
        t,
    )?
    .scale(1.0 / gamma);

    let records = (0..trials)
        .into_par_iter()
        .map(|i| {
            let r = sample_r_stream(m, t, gamma, seed, i + 1)?;
            let size_dev = (r.card() as f64 - expected).abs();
            let g = convolve(&convolve(&ind_a, &DensityFn::indicator(&r))?, &ind_l)?;
            let linf_dev = linf_dist(&g, &target)?;
            Ok(TrialRecord {
                trial: i,
                r_size: r.card(),
                size_dev,
                linf_dev,
                size_hit: size_dev <= size_bound,
                linf_hit: linf_dev <= linf_bound,
            })
        })
        .collect::<Result<Vec<TrialRecord>>>()?;

    let denom = trials.max(1) as f64;
    let size_hits = records.iter().filter(|r| r.size_hit).count() as f64 / denom;
    let linf_hits = records.iter().filter(|r| r.linf_hit).count() as f64 / denom;
    Ok(SampleReport {
        trials,
        size_hits,
        linf_hits,
        w_size,
        expected_r_size: expected,
        size_bound,
        linf_bound,
        records,
    })
}

/// Uniform random subset of the given cardinality, deterministic in
/// (seed, stream).
pub fn random_subset(modulus: Modulus, card: u64, seed: u64, stream: u64) -> Result<ZnSet> {
    if card > modulus.n() {
        return Err(Error::Domain(format!(
            "cannot draw {card} distinct elements mod {}",
            modulus.n()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut set = ZnSet::empty(modulus);
    while set.card() < card {
        set.insert(rng.random_range(0..modulus.n()));
    }
    Ok(set)
}

/// A fully specified concentration experiment.
#[derive(Clone, Debug)]
pub struct ConcentrationInstance {
    pub a: ZnSet,
    pub m: ZnSet,
    pub l: ZnSet,
    pub t: BohrSet,
    pub gamma: f64,
}

/// Reference experiment: n = 4001, |A| = |L| = 200, |M| = 50, T a rank-2
/// Bohr set, gamma the smallest admissible bound for (M, T).
pub fn desk_instance(seed: u64) -> Result<ConcentrationInstance> {
    let modulus = Modulus::new(4001)?;
    let a = random_subset(modulus, 200, seed, 10)?;
    let m = random_subset(modulus, 50, seed, 11)?;
    let l = random_subset(modulus, 200, seed, 12)?;
    let t = BohrSet::build(BohrSpec::new(modulus, &[1, 13], 0.7)?);
    let gamma = max_sampling_gamma(&m, t.elements())?;
    Ok(ConcentrationInstance { a, m, l, t, gamma })
}

/// Which of the two sub-Bohr sets carries a density increment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncrementSide {
    Prime,
    DoublePrime,
}

/// Outcome of the density dichotomy: a point where A is >= 0.8 alpha dense
/// on translates of both B' and B'', or a translate where one of them beats
/// 1.1 alpha.
#[derive(Clone, Copy, Debug)]
pub enum DichotomyOutcome {
    Witness {
        x: u64,
        density_p: f64,
        density_pp: f64,
    },
    Increment {
        side: IncrementSide,
        x: u64,
        value: f64,
    },
}

/// Decides the dichotomy for A inside the regular Bohr set B with candidate
/// sub-level sets B', B'' of the dilate B_delta. All comparisons against the
/// thresholds 1.1 alpha and 0.8 alpha are cross-multiplied integer
/// comparisons with alpha read as the exact ratio |A|/|B|, so the decision
/// is exact and one of the two outcomes is always reached; the float alpha
/// argument is only checked for consistency. Every hypothesis is verified
/// up front and a failure names the condition that broke.
pub fn density_dichotomy(
    a: &ZnSet,
    b: &BohrSet,
    b_prime: &BohrSet,
    b_dprime: &BohrSet,
    alpha: f64,
    delta: f64,
) -> Result<DichotomyOutcome> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidRadius(delta));
    }
    let b_delta = b.dilate(delta)?;
    let b_up = b.dilate(1.0 + delta)?;

    if !a.is_subset_of(b.elements())? {
        return Err(Error::HypothesisViolated("A is a subset of B"));
    }
    let alpha_exact = a.card() as f64 / b.size() as f64;
    if (alpha - alpha_exact).abs() > 1e-9 {
        return Err(Error::HypothesisViolated("alpha equals |A|/|B|"));
    }
    if b_prime.size() == 0 || b_dprime.size() == 0 {
        return Err(Error::HypothesisViolated("B' and B'' are nonempty"));
    }
    if !b_prime.elements().is_subset_of(b_delta.elements())? {
        return Err(Error::HypothesisViolated("B' is contained in B_delta"));
    }
    if !b_dprime.elements().is_subset_of(b_delta.elements())? {
        return Err(Error::HypothesisViolated("B'' is contained in B_delta"));
    }
    if 20 * b.size() < 19 * b_up.size() {
        return Err(Error::HypothesisViolated("20|B| >= 19|B_(1+delta)|"));
    }
    let cnt_p = convolve_counts(a, b_prime.elements())?;
    let cnt_pp = convolve_counts(a, b_dprime.elements())?;
    for (cnt, name) in [
        (&cnt_p, "A + B' is contained in B_(1+delta)"),
        (&cnt_pp, "A + B'' is contained in B_(1+delta)"),
    ] {
        for (x, &c) in cnt.iter().enumerate() {
            if c > 0 && !b_up.elements().contains(x as u64) {
                return Err(Error::HypothesisViolated(name));
            }
        }
    }

    let card_a = a.card() as u128;
    let size_b = b.size() as u128;
    let size_p = b_prime.size() as u128;
    let size_pp = b_dprime.size() as u128;

    // Increment branch: some translate has 1_A * mu (x) >= 1.1 |A|/|B|.
    for (side, cnt, size_side) in [
        (IncrementSide::Prime, &cnt_p, size_p),
        (IncrementSide::DoublePrime, &cnt_pp, size_pp),
    ] {
        let (x, &c) = cnt.iter().enumerate().max_by_key(|&(_, &c)| c).unwrap();
        if 10 * c as u128 * size_b >= 11 * card_a * size_side {
            return Ok(DichotomyOutcome::Increment {
                side,
                x: x as u64,
                value: c as f64 / size_side as f64,
            });
        }
    }

    // Witness branch: the combined density over B_(1+delta) averages to at
    // least (2 - 1/10) alpha, and with both increments failed strictly, its
    // maximizer has both sides above 0.8 alpha.
    let mut best: Option<(u64, u128)> = None;
    for x in b_up.elements().iter() {
        let s = cnt_p[x as usize] as u128 * size_pp + cnt_pp[x as usize] as u128 * size_p;
        if best.map_or(true, |(_, bs)| s > bs) {
            best = Some((x, s));
        }
    }
    let (x_star, s_star) = best.expect("0 lies in every dilate");
    if s_star * b_up.size() as u128 >= 2 * card_a * size_p * size_pp
        && 5 * cnt_p[x_star as usize] as u128 * size_b >= 4 * card_a * size_p
        && 5 * cnt_pp[x_star as usize] as u128 * size_b >= 4 * card_a * size_pp
    {
        return Ok(DichotomyOutcome::Witness {
            x: x_star,
            density_p: cnt_p[x_star as usize] as f64 / size_p as f64,
            density_pp: cnt_pp[x_star as usize] as f64 / size_pp as f64,
        });
    }
    Err(Error::HypothesisViolated(
        "averaging over B_(1+delta) yields a witness when no increment exists",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn bernstein_frozen_values() {
        let v = bernstein_bound(BernsteinBound::new(3.0, 1.0, 1.0).unwrap());
        assert!((v - 0.21079844912372866).abs() < 1e-12);
        assert_eq!(
            bernstein_bound(BernsteinBound::new(0.0, 1.0, 1.0).unwrap()),
            2.0
        );
        assert_eq!(
            bernstein_bound(BernsteinBound::new(0.0, 0.0, 0.0).unwrap()),
            2.0
        );
        assert_eq!(
            bernstein_bound(BernsteinBound::new(3.0, 0.0, 0.0).unwrap()),
            0.0
        );
    }

    #[test]
    fn bernstein_six_sigma_shape() {
        let v_big = 1e6f64;
        let v = bernstein_bound(BernsteinBound::new(6.0 * v_big.sqrt(), v_big, 1.0).unwrap());
        assert!(v <= 2.0 * (-17.9f64).exp());
        assert!(v >= 2.0 * (-18.0f64).exp());
    }

    #[test]
    fn bernstein_rejects_negative() {
        assert!(BernsteinBound::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn sampling_with_identity_t_returns_m() {
        let m = ZnSet::from_elems(modulus(101), &[1, 5, 9, 44]);
        let t = ZnSet::singleton(modulus(101), 0);
        let r = sample_r(&m, &t, 1.0, 7).unwrap();
        assert_eq!(r, m);
    }

    #[test]
    fn sampling_empty_m_returns_empty() {
        let m = ZnSet::empty(modulus(101));
        let t = ZnSet::singleton(modulus(101), 0);
        assert!(sample_r(&m, &t, 1.0, 7).unwrap().is_empty());
    }

    #[test]
    fn sampling_is_deterministic_per_stream() {
        let n = modulus(211);
        let m = random_subset(n, 40, 3, 0).unwrap();
        let t = ZnSet::from_elems(n, &[0, 1, 2, 209, 210]);
        let gamma = max_sampling_gamma(&m, &t).unwrap();
        let r1 = sample_r_stream(&m, &t, gamma, 5, 1).unwrap();
        let r2 = sample_r_stream(&m, &t, gamma, 5, 1).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn sampling_rejects_small_gamma() {
        let m = ZnSet::from_elems(modulus(101), &[1, 2, 3]);
        let t = ZnSet::singleton(modulus(101), 0);
        let err = sample_r(&m, &t, 0.5, 7).unwrap_err();
        assert_eq!(err.name(), "ProbabilityOverflow");
    }

    #[test]
    fn sampling_requires_nonempty_t() {
        let m = ZnSet::from_elems(modulus(101), &[1]);
        let t = ZnSet::empty(modulus(101));
        assert_eq!(sample_r(&m, &t, 1.0, 7).unwrap_err().name(), "EmptyT");
    }

    #[test]
    fn almost_period_identity_t_is_exact_zero() {
        let n = modulus(1009);
        let a = random_subset(n, 60, 1, 1).unwrap();
        let m = random_subset(n, 30, 1, 2).unwrap();
        let l = random_subset(n, 60, 1, 3).unwrap();
        let t = ZnSet::singleton(n, 0);
        let (ok, achieved) = check_almost_period(&a, &m, &l, &t, 0.1).unwrap();
        assert!(ok);
        assert_eq!(achieved, 0.0);
    }

    #[test]
    fn almost_period_constant_functions() {
        let n = modulus(101);
        let full = ZnSet::full(n);
        let t = ZnSet::from_elems(n, &[0, 3, 9]);
        let (ok, achieved) = check_almost_period(&full, &full, &full, &t, 0.5).unwrap();
        assert!(ok);
        assert!(achieved < 1e-9);
    }

    #[test]
    fn concentration_identity_t_always_hits() {
        let n = modulus(601);
        let a = random_subset(n, 50, 2, 1).unwrap();
        let m = random_subset(n, 20, 2, 2).unwrap();
        let l = random_subset(n, 50, 2, 3).unwrap();
        let t = ZnSet::singleton(n, 0);
        let report = verify_r_concentration(&a, &m, &l, &t, 1.0, 10, 9).unwrap();
        assert_eq!(report.size_hits, 1.0);
        assert_eq!(report.linf_hits, 1.0);
        assert!(report.records.iter().all(|r| r.size_dev == 0.0));
    }

    #[test]
    fn desk_instance_concentrates() {
        let inst = desk_instance(7).unwrap();
        let report = verify_r_concentration(
            &inst.a,
            &inst.m,
            &inst.l,
            inst.t.elements(),
            inst.gamma,
            8,
            7,
        )
        .unwrap();
        assert!(report.size_hits >= 0.75, "size hits {}", report.size_hits);
        assert!(report.linf_hits >= 0.75, "linf hits {}", report.linf_hits);
    }

    fn full_bohr(n: u64) -> BohrSet {
        BohrSet::build(BohrSpec::new(modulus(n), &[], 2.0).unwrap())
    }

    fn kernel_bohr(n: u64) -> BohrSet {
        BohrSet::build(BohrSpec::new(modulus(n), &[1], 0.0).unwrap())
    }

    #[test]
    fn dichotomy_full_group_witness() {
        let b = full_bohr(101);
        let a = ZnSet::full(modulus(101));
        let point = kernel_bohr(101);
        let out = density_dichotomy(&a, &b, &point, &point, 1.0, 0.5).unwrap();
        match out {
            DichotomyOutcome::Witness {
                density_p,
                density_pp,
                ..
            } => {
                assert_eq!(density_p, 1.0);
                assert_eq!(density_pp, 1.0);
            }
            DichotomyOutcome::Increment { .. } => panic!("expected witness"),
        }
    }

    #[test]
    fn dichotomy_concentrated_set_increments() {
        let b = full_bohr(101);
        let b_prime = BohrSet::build(BohrSpec::new(modulus(101), &[1], 0.13).unwrap());
        assert!(b_prime.size() >= 3);
        let a = b_prime.elements().clone();
        let alpha = a.card() as f64 / 101.0;
        let out = density_dichotomy(&a, &b, &b_prime, &b_prime, alpha, 0.5).unwrap();
        match out {
            DichotomyOutcome::Increment { value, .. } => assert!(value >= 1.1 * alpha),
            DichotomyOutcome::Witness { .. } => panic!("expected increment"),
        }
    }

    #[test]
    fn dichotomy_names_broken_hypothesis() {
        let b = kernel_bohr(101);
        let a = ZnSet::from_elems(modulus(101), &[50]);
        let point = kernel_bohr(101);
        let err = density_dichotomy(&a, &b, &point, &point, 1.0, 0.5).unwrap_err();
        match err {
            Error::HypothesisViolated(name) => assert_eq!(name, "A is a subset of B"),
            other => panic!("unexpected error {other:?}"),
        }

        let b = full_bohr(101);
        let a = ZnSet::from_elems(modulus(101), &[1, 2, 3]);
        let err = density_dichotomy(&a, &b, &point, &point, 0.9, 0.5).unwrap_err();
        match err {
            Error::HypothesisViolated(name) => assert_eq!(name, "alpha equals |A|/|B|"),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
