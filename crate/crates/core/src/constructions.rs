//! Digits-on-a-sphere constructions: large subsets of {1..M} with no
//! nontrivial solutions to x + y + z = 3w.
//!
//! Numbers are written as sum a_i base^i with digits capped below base/3, so
//! adding three of them never carries; restricting the digit vectors to a
//! sphere sum a_i^2 = r^2 then forces any solution to have x = y = z = w by
//! strict convexity. The most popular shell is kept, and the parameter grid
//! (dimension, base) is scanned for the largest output.

use crate::conv::count_solutions_interval;
use crate::error::{Error, Result};
use crate::fit::{linear_fit, LinearFit};
use rayon::prelude::*;

/// Largest supported target M; verification convolves over a zero-padded
/// window of length about 3M.
pub const MAX_TARGET: u64 = 2_000_000;

/// Shell-count tables above this many cells are skipped during the scan;
/// the affected candidates (dimension 1 with a huge base) never win anyway.
const MAX_TABLE_CELLS: u64 = 5_000_000;

/// Digit scheme parameters: dim digits in the given base, each between 0 and
/// digit_cap, with 3 digit_cap < base so sums of three numbers never carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BehrendParams {
    pub base: u64,
    pub dim: u32,
    pub digit_cap: u64,
}

impl BehrendParams {
    /// Largest representable number, digit_cap * (base^dim - 1) / (base - 1),
    /// saturating far past any valid target.
    pub fn max_value(&self) -> u128 {
        let mut geom: u128 = 0;
        let mut power: u128 = 1;
        for _ in 0..self.dim {
            geom = geom.saturating_add(power);
            power = power.saturating_mul(self.base as u128);
        }
        (self.digit_cap as u128).saturating_mul(geom)
    }

    pub fn validate(&self, m: u64) -> Result<()> {
        if self.base < 4 {
            return Err(Error::Domain(format!(
                "base {} must be at least 4",
                self.base
            )));
        }
        if self.dim < 1 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        if 3 * self.digit_cap >= self.base {
            return Err(Error::Domain(format!(
                "no-carry condition violated: 3 * {} >= {}",
                self.digit_cap, self.base
            )));
        }
        if self.max_value() + 1 > m as u128 {
            return Err(Error::Domain(format!(
                "largest representable number exceeds M = {m}"
            )));
        }
        Ok(())
    }
}

/// A constructed solution-free set with the parameters that produced it.
#[derive(Clone, Debug)]
pub struct BehrendResult {
    pub m: u64,
    /// Sorted elements of {1..M}.
    pub elems: Vec<u64>,
    pub params: BehrendParams,
    /// Squared radius r^2 of the selected shell.
    pub shell: u64,
}

impl BehrendResult {
    pub fn size(&self) -> u64 {
        self.elems.len() as u64
    }

    pub fn density(&self) -> f64 {
        self.elems.len() as f64 / self.m as f64
    }
}

fn digit_cap(base: u64) -> u64 {
    (base - 1) / 3
}

/// Number of digit vectors on each shell: counts[s] = #{a : sum a_i^2 = s}.
fn shell_counts(dim: u32, cap: u64) -> Vec<u64> {
    let cells = (dim as u64 * cap * cap) as usize + 1;
    let mut counts = vec![0u64; cells];
    counts[0] = 1;
    for _ in 0..dim {
        let mut next = vec![0u64; cells];
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a in 0..=cap {
                let idx = s + (a * a) as usize;
                if idx < cells {
                    next[idx] += c;
                }
            }
        }
        counts = next;
    }
    counts
}

/// Index of the strictly most popular shell (first maximum).
fn best_shell(counts: &[u64]) -> u64 {
    let mut best = 0usize;
    for (s, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = s;
        }
    }
    best as u64
}

fn enumerate_shell(params: BehrendParams, shell: u64) -> Vec<u64> {
    fn rec(
        out: &mut Vec<u64>,
        cap: u64,
        base: u64,
        dims_left: u32,
        rem: u64,
        val: u64,
        place: u64,
    ) {
        if dims_left == 0 {
            if rem == 0 {
                out.push(val + 1);
            }
            return;
        }
        for a in 0..=cap {
            let sq = a * a;
            if sq > rem {
                break;
            }
            rec(
                out,
                cap,
                base,
                dims_left - 1,
                rem - sq,
                val + a * place,
                place * base,
            );
        }
    }
    let mut out = Vec::new();
    rec(
        &mut out,
        params.digit_cap,
        params.base,
        params.dim,
        shell,
        0,
        1,
    );
    out.sort_unstable();
    out
}

#[derive(Clone, Copy)]
struct Candidate {
    params: BehrendParams,
    shell: u64,
    size: u64,
}

fn evaluate(params: BehrendParams) -> Option<Candidate> {
    if params.dim as u64 * params.digit_cap * params.digit_cap >= MAX_TABLE_CELLS {
        return None;
    }
    let counts = shell_counts(params.dim, params.digit_cap);
    let shell = best_shell(&counts);
    Some(Candidate {
        params,
        shell,
        size: counts[shell as usize],
    })
}

/// Builds the largest solution-free subset of {1..M} the parameter scan
/// finds: dimensions up to about 2 sqrt(log2 M), per dimension the largest
/// feasible base and its predecessor. The output is verified solution-free
/// before it is returned.
pub fn behrend_construct(m: u64) -> Result<BehrendResult> {
    if m == 0 {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    if m > MAX_TARGET {
        return Err(Error::CapacityExceeded(m));
    }
    if m < 4 {
        // Too small for any base >= 4 digit scheme; {1} is solution-free.
        return Ok(BehrendResult {
            m,
            elems: vec![1],
            params: BehrendParams {
                base: 4,
                dim: 1,
                digit_cap: 0,
            },
            shell: 0,
        });
    }

    let max_dim = ((2.0 * (m as f64).log2().sqrt()) as u32 + 4).max(2);
    let mut candidates = Vec::new();
    for dim in 1..=max_dim {
        let mut base = (m as f64).powf(1.0 / dim as f64).round() as u64 + 2;
        while base >= 4 {
            let params = BehrendParams {
                base,
                dim,
                digit_cap: digit_cap(base),
            };
            if params.max_value() + 1 <= m as u128 {
                break;
            }
            base -= 1;
        }
        if base < 4 {
            continue;
        }
        candidates.push(BehrendParams {
            base,
            dim,
            digit_cap: digit_cap(base),
        });
        if base - 1 >= 4 {
            candidates.push(BehrendParams {
                base: base - 1,
                dim,
                digit_cap: digit_cap(base - 1),
            });
        }
    }

    let evaluated: Vec<Option<Candidate>> = candidates.into_par_iter().map(evaluate).collect();
    let mut winner: Option<Candidate> = None;
    for cand in evaluated.into_iter().flatten() {
        if winner.map_or(true, |w| cand.size > w.size) {
            winner = Some(cand);
        }
    }
    let winner = winner.expect("dimension 1 always yields a feasible candidate");
    finish(m, winner)
}

/// Same construction with the base fixed; only the dimension is scanned.
pub fn behrend_construct_with_base(m: u64, base: u64) -> Result<BehrendResult> {
    if m == 0 {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    if m > MAX_TARGET {
        return Err(Error::CapacityExceeded(m));
    }
    if base < 4 {
        return Err(Error::Domain(format!("base {base} must be at least 4")));
    }
    let cap = digit_cap(base);
    let mut winner: Option<Candidate> = None;
    for dim in 1.. {
        let params = BehrendParams {
            base,
            dim,
            digit_cap: cap,
        };
        if params.max_value() + 1 > m as u128 {
            break;
        }
        if let Some(cand) = evaluate(params) {
            if winner.map_or(true, |w| cand.size > w.size) {
                winner = Some(cand);
            }
        }
    }
    let winner = winner
        .ok_or_else(|| Error::Domain(format!("no digit scheme in base {base} fits M = {m}")))?;
    finish(m, winner)
}

fn finish(m: u64, winner: Candidate) -> Result<BehrendResult> {
    winner.params.validate(m)?;
    let elems = enumerate_shell(winner.params, winner.shell);
    debug_assert_eq!(elems.len() as u64, winner.size);
    let count = count_solutions_interval(&elems, m)?;
    if count.nontrivial != 0 {
        return Err(Error::Domain(format!(
            "internal: construction for M = {m} is not solution-free"
        )));
    }
    Ok(BehrendResult {
        m,
        elems,
        params: winner.params,
        shell: winner.shell,
    })
}

/// One row of the density table.
#[derive(Clone, Copy, Debug)]
pub struct DensityPoint {
    pub m: u64,
    pub size: u64,
    pub density: f64,
}

pub fn behrend_density_curve(ms: &[u64]) -> Result<Vec<DensityPoint>> {
    if ms.is_empty() {
        return Err(Error::Domain("need at least one target M".into()));
    }
    ms.iter()
        .map(|&m| {
            let r = behrend_construct(m)?;
            Ok(DensityPoint {
                m,
                size: r.size(),
                density: r.density(),
            })
        })
        .collect()
}

/// Fits -log2(density) against sqrt(log2 M); an approximately linear fit is
/// the signature of exp(-C sqrt(log M)) density decay.
pub fn density_decay_fit(points: &[DensityPoint]) -> Result<LinearFit> {
    let xs: Vec<f64> = points.iter().map(|p| (p.m as f64).log2().sqrt()).collect();
    let ys: Vec<f64> = points.iter().map(|p| -p.density.log2()).collect();
    linear_fit(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_targets_return_singleton() {
        for m in 1..4 {
            let r = behrend_construct(m).unwrap();
            assert_eq!(r.elems, vec![1]);
        }
    }

    #[test]
    fn frozen_small_outputs() {
        let r = behrend_construct(10).unwrap();
        assert_eq!(r.elems, vec![2, 6]);
        assert_eq!((r.params.base, r.params.dim, r.shell), (5, 2, 1));

        let r = behrend_construct(50).unwrap();
        assert_eq!(r.elems, vec![2, 7, 37]);

        let r = behrend_construct(100).unwrap();
        assert_eq!(r.elems, vec![6, 18, 21, 66, 69, 81]);
        assert_eq!((r.params.base, r.params.dim, r.shell), (4, 4, 2));
    }

    #[test]
    fn thousand_target_size() {
        let r = behrend_construct(1000).unwrap();
        assert_eq!(r.size(), 12);
        assert!(r.elems.iter().all(|&x| (1..=1000).contains(&x)));
    }

    #[test]
    fn outputs_stay_in_range_and_distinct() {
        for m in [4, 17, 64, 200, 999] {
            let r = behrend_construct(m).unwrap();
            assert!(r.elems.windows(2).all(|w| w[0] < w[1]));
            assert!(r.elems.iter().all(|&x| (1..=m).contains(&x)));
            let count = count_solutions_interval(&r.elems, m).unwrap();
            assert_eq!(count.nontrivial, 0, "M = {m}");
        }
    }

    #[test]
    fn params_validation() {
        assert!(BehrendParams {
            base: 3,
            dim: 1,
            digit_cap: 0
        }
        .validate(10)
        .is_err());
        assert!(BehrendParams {
            base: 9,
            dim: 1,
            digit_cap: 3
        }
        .validate(10)
        .is_err());
        assert!(BehrendParams {
            base: 10,
            dim: 2,
            digit_cap: 3
        }
        .validate(10)
        .is_err());
        assert!(BehrendParams {
            base: 10,
            dim: 1,
            digit_cap: 3
        }
        .validate(10)
        .is_ok());
    }

    #[test]
    fn curve_is_ordered_and_fits() {
        let points = behrend_density_curve(&[100, 1000, 10_000]).unwrap();
        assert_eq!(points[0].size, 6);
        assert_eq!(points[1].size, 12);
        assert_eq!(points[2].size, 35);
        let fit = density_decay_fit(&points).unwrap();
        assert!(fit.slope > 0.0);
    }

    #[test]
    fn rejects_degenerate_targets() {
        assert!(behrend_construct(0).is_err());
        assert!(behrend_construct(MAX_TARGET + 1).is_err());
    }

    #[test]
    fn fixed_base_matches_the_scan_on_its_winning_base() {
        let auto = behrend_construct(10_000).unwrap();
        let forced = behrend_construct_with_base(10_000, auto.params.base).unwrap();
        assert_eq!(forced.size(), auto.size());
        assert_eq!(forced.params.base, auto.params.base);
    }

    #[test]
    fn fixed_base_rejects_oversized_bases() {
        assert!(behrend_construct_with_base(5, 17).is_err());
        assert!(behrend_construct_with_base(100, 3).is_err());
    }
}
