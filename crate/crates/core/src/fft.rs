//! Transform-based convolution backend with a process-wide plan cache.
//!
//! Plans are immutable once built, so the registry takes a write lock only on
//! first use of a length; steady-state lookups share a read lock.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

#[derive(Clone)]
struct PlanPair {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

fn registry() -> &'static RwLock<HashMap<usize, PlanPair>> {
    static REGISTRY: OnceLock<RwLock<HashMap<usize, PlanPair>>> = OnceLock::new();
    REGISTRY.get_or_init(|| RwLock::new(HashMap::new()))
}

fn plans(n: usize) -> PlanPair {
    if let Some(p) = registry().read().unwrap().get(&n) {
        return p.clone();
    }
    let mut planner = FftPlanner::new();
    let pair = PlanPair {
        fwd: planner.plan_fft_forward(n),
        inv: planner.plan_fft_inverse(n),
    };
    registry().write().unwrap().entry(n).or_insert(pair).clone()
}

/// Cyclic convolution (a * b)[k] = sum_x a[x] b[(k - x) mod n] via FFT.
/// Handles any length, including primes.
pub(crate) fn cyclic_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    let pair = plans(n);
    let mut fa: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut fb: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    pair.fwd.process(&mut fa);
    pair.fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    pair.inv.process(&mut fa);
    let scale = 1.0 / n as f64;
    fa.into_iter().map(|v| v.re * scale).collect()
}
