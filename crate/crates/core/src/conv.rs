//! Densities on Z_n, cyclic convolution with a dual fast/direct route, and
//! counting of solutions to x + y + z = 3w.

use crate::error::{Error, Result};
use crate::fft;
use crate::zn::{Modulus, ZnSet};

/// Above this length convolutions go through the transform backend; at or
/// below it a direct double loop is used.
pub const FFT_THRESHOLD: u64 = 512;

/// Indicator convolutions must land within this distance of an integer or the
/// operation aborts; in exact arithmetic they are integers, so a larger drift
/// means the transform route lost precision.
pub const ROUNDING_TOLERANCE: f64 = 0.25;

/// Real-valued function on Z_n (density, indicator, or convolution output).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityFn {
    modulus: Modulus,
    values: Vec<f64>,
}

impl DensityFn {
    pub fn from_values(modulus: Modulus, values: Vec<f64>) -> Result<Self> {
        if values.len() as u64 != modulus.n() {
            return Err(Error::Domain(format!(
                "expected {} values, got {}",
                modulus.n(),
                values.len()
            )));
        }
        Ok(DensityFn { modulus, values })
    }

    pub fn indicator(set: &ZnSet) -> Self {
        DensityFn {
            modulus: set.modulus(),
            values: set.indicator_values(),
        }
    }

    /// Normalized measure mu_T = 1_T / |T|.
    pub fn mu(set: &ZnSet) -> Result<Self> {
        let card = set.card();
        if card == 0 {
            return Err(Error::EmptyBase);
        }
        let w = 1.0 / card as f64;
        Ok(DensityFn {
            modulus: set.modulus(),
            values: set.indicator_values().into_iter().map(|v| v * w).collect(),
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, x: u64) -> f64 {
        self.values[(x % self.modulus.n()) as usize]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// sup-norm max |f(x)|.
    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, c: f64) -> DensityFn {
        DensityFn {
            modulus: self.modulus,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    fn is_indicator(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }
}

fn check_same(f: &DensityFn, g: &DensityFn) -> Result<()> {
    if f.modulus != g.modulus {
        return Err(Error::ModulusMismatch(f.modulus.n(), g.modulus.n()));
    }
    Ok(())
}

fn direct_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    for (x, &av) in a.iter().enumerate() {
        if av == 0.0 {
            continue;
        }
        for (y, &bv) in b.iter().enumerate() {
            let k = x + y;
            let k = if k >= n { k - n } else { k };
            out[k] += av * bv;
        }
    }
    out
}

fn round_to_integers(values: Vec<f64>) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        let r = v.round();
        if (v - r).abs() > ROUNDING_TOLERANCE {
            return Err(Error::RoundingDrift(v));
        }
        out.push(r);
    }
    Ok(out)
}

/// Cyclic convolution f * g (x) = sum_y f(y) g(x - y). Takes the transform
/// route for n > [`FFT_THRESHOLD`] and a direct double loop otherwise; when
/// both inputs are 0/1-valued the output is snapped to integers (every entry
/// must land within [`ROUNDING_TOLERANCE`] of one).
pub fn convolve(f: &DensityFn, g: &DensityFn) -> Result<DensityFn> {
    check_same(f, g)?;
    let n = f.modulus.n();
    let raw = if n > FFT_THRESHOLD {
        fft::cyclic_convolve(&f.values, &g.values)
    } else {
        direct_convolve(&f.values, &g.values)
    };
    let values = if f.is_indicator() && g.is_indicator() {
        round_to_integers(raw)?
    } else {
        raw
    };
    Ok(DensityFn {
        modulus: f.modulus,
        values,
    })
}

/// Convolution of two indicators as exact integer counts.
pub fn convolve_counts(a: &ZnSet, b: &ZnSet) -> Result<Vec<u64>> {
    let c = convolve(&DensityFn::indicator(a), &DensityFn::indicator(b))?;
    Ok(c.values.iter().map(|&v| v as u64).collect())
}

/// sup-norm distance max |f - g|.
pub fn linf_dist(f: &DensityFn, g: &DensityFn) -> Result<f64> {
    check_same(f, g)?;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}

/// Sumset A + B as the support of the indicator convolution.
pub fn sumset(a: &ZnSet, b: &ZnSet) -> Result<ZnSet> {
    let counts = convolve_counts(a, b)?;
    let mut out = ZnSet::empty(a.modulus());
    for (x, &c) in counts.iter().enumerate() {
        if c > 0 {
            out.insert(x as u64);
        }
    }
    Ok(out)
}

/// Counts of quadruples (x, y, z, w) in A^4 with x + y + z = 3w.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolutionCount {
    pub total: u64,
    /// The x = y = z = w quadruples; exactly |A| whenever 3 is invertible.
    pub trivial: u64,
    pub nontrivial: u64,
}

/// Counts solutions of x + y + z = 3w inside A over Z_n. Requires 3 to not
/// divide n so that w -> 3w is a bijection. The triple convolution is taken
/// as ((1_A * 1_A) * 1_A) with one rounding at the end.
pub fn count_solutions(a: &ZnSet) -> Result<SolutionCount> {
    let n = a.n();
    if n % 3 == 0 {
        return Err(Error::NonPrimeModulus(n));
    }
    let ind = DensityFn::indicator(a);
    let pair = convolve(&ind, &ind)?;
    let triple = convolve(&pair, &ind)?;
    let mut total_f = 0.0;
    for w in a.iter() {
        total_f += triple.value_at((3 * w) % n);
    }
    let total_r = total_f.round();
    if (total_f - total_r).abs() > ROUNDING_TOLERANCE {
        return Err(Error::RoundingDrift(total_f));
    }
    let total = total_r as u64;
    let trivial = a.card();
    if total < trivial {
        return Err(Error::RoundingDrift(total_f));
    }
    Ok(SolutionCount {
        total,
        trivial,
        nontrivial: total - trivial,
    })
}

/// Counts integer quadruples (no modulus) of x + y + z = 3w inside
/// A as a subset of {1..M}, via a zero-padded linear convolution: sums live in
/// [0, 3M] and the transform length is the next power of two past 3M, so no
/// wraparound can occur.
pub fn count_solutions_interval(elems: &[u64], m: u64) -> Result<SolutionCount> {
    if m == 0 {
        return Err(Error::Domain("interval bound M must be at least 1".into()));
    }
    for &x in elems {
        if x == 0 || x > m {
            return Err(Error::ElementOutOfRange {
                x,
                context: format!("interval {{1..{m}}}"),
            });
        }
    }
    let len = (3 * m + 1).next_power_of_two();
    let modulus = Modulus::new(len)?;
    let a = ZnSet::from_elems(modulus, elems);
    let ind = DensityFn::indicator(&a);
    let pair = convolve(&ind, &ind)?;
    let triple = convolve(&pair, &ind)?;
    let mut total_f = 0.0;
    for w in a.iter() {
        total_f += triple.value_at(3 * w);
    }
    let total_r = total_f.round();
    if (total_f - total_r).abs() > ROUNDING_TOLERANCE {
        return Err(Error::RoundingDrift(total_f));
    }
    let total = total_r as u64;
    let trivial = a.card();
    if total < trivial {
        return Err(Error::RoundingDrift(total_f));
    }
    Ok(SolutionCount {
        total,
        trivial,
        nontrivial: total - trivial,
    })
}

/// |A intersect T| / |T|, integer counts first, one division at the end.
pub fn relative_density(a: &ZnSet, t: &ZnSet) -> Result<f64> {
    if t.is_empty() {
        return Err(Error::EmptyBase);
    }
    let hit = a.intersect(t)?.card();
    Ok(hit as f64 / t.card() as f64)
}
