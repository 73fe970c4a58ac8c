//! Bohr sets B(Gamma, rho) = {x : |1 - gamma(x)| <= rho for all gamma}, their
//! dilates, size bounds, and regularity certification.
//!
//! Membership comparisons carry a 1e-12 guard band resolved toward inclusion,
//! so borderline points are kept consistently across builds and dilates.

use crate::error::{Error, Result};
use crate::zn::{char_distance, Modulus, ZnSet};

/// Guard band on membership comparisons; borderline points are included.
pub const MEMBERSHIP_GUARD: f64 = 1e-12;

/// Exact breakpoint certification is the default up to this modulus; past it
/// the perturbation check falls back to a sampled grid.
pub const EXACT_CERTIFICATION_LIMIT: u64 = 100_000;

/// Number of sampled perturbations per side in grid certification mode.
pub const GRID_CERTIFICATION_POINTS: usize = 64;

/// Frequency set plus radius. Frequencies are canonicalized at construction:
/// reduced mod n, zero dropped, duplicates removed, sorted; the rank is the
/// count that survives. Radii are clamped into [0, 2] since |1 - gamma(x)|
/// never exceeds 2.
#[derive(Clone, Debug, PartialEq)]
pub struct BohrSpec {
    modulus: Modulus,
    freqs: Vec<u64>,
    radius: f64,
}

impl BohrSpec {
    pub fn new(modulus: Modulus, freqs: &[u64], radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidRadius(radius));
        }
        let mut canon: Vec<u64> = freqs
            .iter()
            .map(|&t| t % modulus.n())
            .filter(|&t| t != 0)
            .collect();
        canon.sort_unstable();
        canon.dedup();
        Ok(BohrSpec {
            modulus,
            freqs: canon,
            radius: radius.min(2.0),
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn freqs(&self) -> &[u64] {
        &self.freqs
    }

    pub fn rank(&self) -> usize {
        self.freqs.len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn with_radius(&self, radius: f64) -> Result<BohrSpec> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(BohrSpec {
            modulus: self.modulus,
            freqs: self.freqs.clone(),
            radius: radius.min(2.0),
        })
    }

    /// max over frequencies of |1 - gamma(x)|; 0 for rank 0.
    pub fn eval(&self, x: u64) -> f64 {
        let n = self.modulus.n();
        self.freqs
            .iter()
            .map(|&t| char_distance(t, x, n))
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.eval(x) <= self.radius + MEMBERSHIP_GUARD
    }
}

/// A built Bohr set: spec plus materialized elements.
#[derive(Clone, Debug)]
pub struct BohrSet {
    spec: BohrSpec,
    elements: ZnSet,
}

impl BohrSet {
    /// Enumerates membership over all of Z_n; O(n * rank).
    pub fn build(spec: BohrSpec) -> BohrSet {
        let mut elements = ZnSet::empty(spec.modulus());
        for x in 0..spec.modulus().n() {
            if spec.contains(x) {
                elements.insert(x);
            }
        }
        BohrSet { spec, elements }
    }

    pub fn spec(&self) -> &BohrSpec {
        &self.spec
    }

    pub fn elements(&self) -> &ZnSet {
        &self.elements
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn size(&self) -> u64 {
        self.elements.card()
    }

    /// The dilate B_delta = B(Gamma, delta * rho); delta may exceed 1.
    pub fn dilate(&self, delta: f64) -> Result<BohrSet> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::InvalidRadius(delta));
        }
        Ok(BohrSet::build(
            self.spec.with_radius(delta * self.spec.radius())?,
        ))
    }
}

/// Precomputed profile of a frequency set: the sorted values
/// max_gamma |1 - gamma(x)| over x in Z_n. |B(Gamma, r)| is then a binary
/// search, which makes radius scans and breakpoint enumeration cheap.
pub struct BohrProfile {
    spec: BohrSpec,
    sorted: Vec<f64>,
}

impl BohrProfile {
    pub fn new(spec: BohrSpec) -> BohrProfile {
        let n = spec.modulus().n();
        let mut sorted: Vec<f64> = (0..n).map(|x| spec.eval(x)).collect();
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        BohrProfile { spec, sorted }
    }

    pub fn spec(&self) -> &BohrSpec {
        &self.spec
    }

    /// |B(Gamma, r)| under the guard-band membership rule.
    pub fn size_at(&self, r: f64) -> u64 {
        self.sorted.partition_point(|&v| v <= r + MEMBERSHIP_GUARD) as u64
    }

    /// Left limit lim_{s -> r^-} |B(Gamma, s)|.
    fn size_below(&self, r: f64) -> u64 {
        self.sorted.partition_point(|&v| v < r + MEMBERSHIP_GUARD) as u64
    }

    /// Distinct radii in (lo, hi] at which |B(Gamma, r)| jumps.
    fn breakpoints_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let a = self.sorted.partition_point(|&v| v - MEMBERSHIP_GUARD <= lo);
        let b = self.sorted.partition_point(|&v| v - MEMBERSHIP_GUARD <= hi);
        let mut out: Vec<f64> = self.sorted[a..b]
            .iter()
            .map(|&v| v - MEMBERSHIP_GUARD)
            .collect();
        out.dedup();
        out
    }
}

/// One tested perturbation of a regularity check.
#[derive(Clone, Copy, Debug)]
pub struct RegularityPoint {
    /// Signed relative radius perturbation delta'.
    pub perturbation: f64,
    /// |B_{1+delta'}| / |B|.
    pub ratio: f64,
    pub pass: bool,
}

/// Outcome of certifying one candidate dilate.
#[derive(Clone, Debug)]
pub struct RegularityReport {
    /// Dilate factor applied to the base radius.
    pub delta: f64,
    pub rank: usize,
    pub base_size: u64,
    pub is_regular: bool,
    pub grid: Vec<RegularityPoint>,
    /// A failing perturbation, when one exists.
    pub witness_violation: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificationMode {
    /// Enumerate the exact breakpoints of r -> |B(Gamma, r)| inside the
    /// perturbation window; both one-sided conditions are piecewise constant
    /// against a linear bound, so checking at breakpoints decides the whole
    /// window.
    ExactBreakpoints,
    /// Sample this many perturbations per side.
    Grid(usize),
}

// Multiplicative forgiveness on the pass side of regularity comparisons,
// covering only the rounding of the count * (1 +- 100 d |delta'|) products.
const REG_SLOP: f64 = 1e-9;

/// Checks whether B_delta is regular: for every |delta'| <= 1/(100 d),
/// (1 - 100 d |delta'|) |B_delta| <= |B_{delta(1+delta')}|
///                                <= (1 + 100 d |delta'|) |B_delta|.
/// Rank 0 is vacuously regular (every dilate is the full group).
pub fn certify_regular(
    profile: &BohrProfile,
    delta: f64,
    mode: CertificationMode,
) -> RegularityReport {
    let d = profile.spec.rank();
    let r0 = delta * profile.spec.radius();
    if d == 0 || r0 <= 0.0 {
        // All dilates coincide (full group, or the kernel at radius 0).
        return RegularityReport {
            delta,
            rank: d,
            base_size: profile.size_at(r0),
            is_regular: true,
            grid: vec![RegularityPoint {
                perturbation: 0.0,
                ratio: 1.0,
                pass: true,
            }],
            witness_violation: None,
        };
    }
    let w = 1.0 / (100.0 * d as f64);
    let base = profile.size_at(r0);
    let base_f = base as f64;
    let mut grid = Vec::new();
    let mut witness = None;

    fn record(
        grid: &mut Vec<RegularityPoint>,
        witness: &mut Option<f64>,
        pert: f64,
        ratio: f64,
        pass: bool,
    ) {
        grid.push(RegularityPoint {
            perturbation: pert,
            ratio,
            pass,
        });
        if !pass && witness.is_none() {
            *witness = Some(pert);
        }
    }

    let upper_pass = |pert: f64, size: u64| {
        let bound = 1.0 + 100.0 * d as f64 * pert;
        size as f64 <= bound * base_f * (1.0 + REG_SLOP)
    };
    let lower_pass = |pert: f64, size: u64| {
        let bound = 1.0 - 100.0 * d as f64 * pert;
        size as f64 >= bound * base_f * (1.0 - REG_SLOP)
    };

    let mut ok = true;
    match mode {
        CertificationMode::ExactBreakpoints => {
            // Upper side: |B(r)| is right-continuous and jumps only at
            // breakpoints, so the binding comparisons happen exactly there.
            for bp in profile.breakpoints_in(r0, r0 * (1.0 + w)) {
                let pert = bp / r0 - 1.0;
                let size = profile.size_at(bp);
                let pass = upper_pass(pert, size);
                record(&mut grid, &mut witness, pert, size as f64 / base_f, pass);
                ok &= pass;
            }
            // Lower side: just past a breakpoint the count drops to the left
            // limit while the linear bound is still at the breakpoint value.
            for bp in profile.breakpoints_in(r0 * (1.0 - w), r0) {
                let pert = bp / r0 - 1.0; // negative
                let size = profile.size_below(bp);
                let pass = lower_pass(-pert, size);
                record(&mut grid, &mut witness, pert, size as f64 / base_f, pass);
                ok &= pass;
            }
            if grid.is_empty() {
                // No breakpoint in the window: the count is constant there.
                grid.push(RegularityPoint {
                    perturbation: 0.0,
                    ratio: 1.0,
                    pass: true,
                });
            }
        }
        CertificationMode::Grid(points) => {
            let points = points.max(1);
            for i in 1..=points {
                let pert = w * i as f64 / points as f64;
                let size_up = profile.size_at(r0 * (1.0 + pert));
                let pass_up = upper_pass(pert, size_up);
                record(
                    &mut grid,
                    &mut witness,
                    pert,
                    size_up as f64 / base_f,
                    pass_up,
                );
                ok &= pass_up;
                let size_down = profile.size_at(r0 * (1.0 - pert));
                let pass_down = lower_pass(pert, size_down);
                record(
                    &mut grid,
                    &mut witness,
                    -pert,
                    size_down as f64 / base_f,
                    pass_down,
                );
                ok &= pass_down;
            }
        }
    }

    grid.sort_by(|a, b| a.perturbation.partial_cmp(&b.perturbation).unwrap());
    RegularityReport {
        delta,
        rank: d,
        base_size: base,
        is_regular: ok,
        grid,
        witness_violation: witness,
    }
}

/// Scans delta in [1/2, 1] (step defaulting to 1/(800 d)) for the first
/// dilate B_delta certified regular, guaranteed to exist for a dense-enough
/// scan by the regular-dilate existence lemma. Certification is
/// breakpoint-exact up to [`EXACT_CERTIFICATION_LIMIT`], sampled past it.
pub fn find_regular_radius(b: &BohrSet, grid_step: Option<f64>) -> Result<(f64, RegularityReport)> {
    let d = b.rank();
    if d == 0 {
        let profile = BohrProfile::new(b.spec().clone());
        return Ok((
            0.5,
            certify_regular(&profile, 0.5, CertificationMode::ExactBreakpoints),
        ));
    }
    let step = match grid_step {
        Some(s) if s.is_finite() && s > 0.0 => s,
        Some(s) => return Err(Error::Domain(format!("grid step {s} must be positive"))),
        None => 1.0 / (800.0 * d as f64),
    };
    let mode = if b.elements().n() <= EXACT_CERTIFICATION_LIMIT {
        CertificationMode::ExactBreakpoints
    } else {
        CertificationMode::Grid(GRID_CERTIFICATION_POINTS)
    };
    let profile = BohrProfile::new(b.spec().clone());
    let mut worst: Option<(f64, f64, f64)> = None; // (delta, perturbation, ratio)
    let mut k = 0u64;
    loop {
        let delta = 0.5 + step * k as f64;
        if delta > 1.0 + 1e-12 {
            break;
        }
        let report = certify_regular(&profile, delta.min(1.0), mode);
        if report.is_regular {
            return Ok((report.delta, report));
        }
        if let Some(p) = report.witness_violation {
            let ratio = report
                .grid
                .iter()
                .find(|pt| pt.perturbation == p)
                .map(|pt| pt.ratio)
                .unwrap_or(f64::NAN);
            worst = Some((report.delta, p, ratio));
        }
        k += 1;
    }
    let (delta, perturbation, ratio) = worst.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    Err(Error::NoRegularRadius {
        step,
        delta,
        perturbation,
        ratio,
    })
}

/// Report from checking the three size bounds of a built Bohr set:
/// |B| >= (rho/2pi)^d n, the doubling bound |B_2| <= 6^d |B|, and the dilate
/// lower bound |B_delta| >= (delta/2)^{3d} |B| on a grid of delta in [0, 1].
#[derive(Clone, Debug)]
pub struct SizeBoundReport {
    pub lower_ok: bool,
    /// |B| / ((rho/2pi)^d n); infinite when the bound degenerates to 0.
    pub lower_slack: f64,
    pub doubling_ok: bool,
    /// 6^d |B| / |B_2|.
    pub doubling_slack: f64,
    pub dilate_ok: bool,
    pub dilate_min_slack: f64,
    /// (delta, |B_delta|, slack) for each grid point.
    pub dilate_grid: Vec<(f64, u64, f64)>,
}

impl SizeBoundReport {
    pub fn all_ok(&self) -> bool {
        self.lower_ok && self.doubling_ok && self.dilate_ok
    }
}

pub fn default_delta_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

pub fn check_size_bounds(b: &BohrSet, grid: &[f64]) -> Result<SizeBoundReport> {
    for &delta in grid {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::Domain(format!(
                "dilate grid point {delta} outside [0, 1]"
            )));
        }
    }
    let d = b.rank() as i32;
    let n = b.elements().n() as f64;
    let size = b.size() as f64;
    let rho = b.spec().radius();
    // One evaluation pass answers every dilate size by binary search, with
    // the same membership guard as a fresh build.
    let profile = BohrProfile::new(b.spec().clone());

    let lower_bound = (rho / std::f64::consts::TAU).powi(d) * n;
    let lower_slack = if lower_bound > 0.0 {
        size / lower_bound
    } else {
        f64::INFINITY
    };
    let lower_ok = size >= lower_bound * (1.0 - 1e-12);

    let doubled = profile.size_at(2.0 * rho);
    let doubling_bound = 6f64.powi(d) * size;
    let doubling_slack = doubling_bound / doubled as f64;
    let doubling_ok = doubled as f64 <= doubling_bound * (1.0 + 1e-12);

    let mut dilate_grid = Vec::with_capacity(grid.len());
    let mut dilate_ok = true;
    let mut dilate_min_slack = f64::INFINITY;
    for &delta in grid {
        let sub = profile.size_at(delta * rho);
        let bound = (delta / 2.0).powi(3 * d) * size;
        let slack = if bound > 0.0 {
            sub as f64 / bound
        } else {
            f64::INFINITY
        };
        let ok = sub as f64 >= bound * (1.0 - 1e-12);
        dilate_ok &= ok;
        dilate_min_slack = dilate_min_slack.min(slack);
        dilate_grid.push((delta, sub, slack));
    }

    Ok(SizeBoundReport {
        lower_ok,
        lower_slack,
        doubling_ok,
        doubling_slack,
        dilate_ok,
        dilate_min_slack,
        dilate_grid,
    })
}
