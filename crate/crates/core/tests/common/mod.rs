#![allow(dead_code)]

use bohrlab_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PRIMES_SMALL: &[u64] = &[
    101, 151, 211, 307, 401, 503, 601, 701, 809, 907, 1009, 1201, 1301, 1409, 1511, 1601, 1709,
    1801, 1901, 2003,
];

pub const PRIMES_MEDIUM: &[u64] = &[
    2003, 3001, 4001, 5003, 6007, 7001, 8009, 9001, 10007, 12007, 14009, 16001, 18013, 20011,
    25013, 30011, 35023, 40009, 50021, 60013, 70001, 80021, 90001, 99991,
];

pub struct DichotomyInstance {
    pub a: ZnSet,
    pub b: BohrSet,
    pub b_prime: BohrSet,
    pub b_dprime: BohrSet,
    pub alpha: f64,
    pub delta: f64,
}

/// Randomized instance satisfying the dichotomy hypotheses: B a Bohr set
/// whose (1 + delta)-dilate is at most 20/19 of it, B' and B'' sub-Bohr
/// sets of the delta-dilate (smaller dilates or refinements by an extra
/// frequency), A a random subset of B. Returns None when the drawn shape
/// cannot satisfy the hypotheses (caller skips that seed).
pub fn gen_dichotomy_instance(seed: u64) -> Option<DichotomyInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = PRIMES_SMALL[rng.random_range(0..PRIMES_SMALL.len())];
    let modulus = Modulus::new(n).unwrap();
    let rank = rng.random_range(1..=2u32);
    let freqs: Vec<u64> = (0..rank).map(|_| rng.random_range(1..n)).collect();
    let rho = rng.random_range(0.3..1.5);
    let spec = BohrSpec::new(modulus, &freqs, rho).ok()?;
    let b = BohrSet::build(spec);
    if b.size() < 8 {
        return None;
    }
    let rho = b.spec().radius();
    let profile = BohrProfile::new(b.spec().clone());
    let mut delta = 0.25;
    let mut found = false;
    for _ in 0..16 {
        if 20 * b.size() >= 19 * profile.size_at(rho * (1.0 + delta)) {
            found = true;
            break;
        }
        delta *= 0.5;
    }
    if !found {
        return None;
    }
    let b_delta = b.dilate(delta).ok()?;

    let sub = |rng: &mut ChaCha8Rng| -> Option<BohrSet> {
        match rng.random_range(0..3u32) {
            0 => b.dilate(delta * rng.random_range(0.3..1.0)).ok(),
            1 => b.dilate(delta).ok(),
            _ => {
                let mut refined = b.spec().freqs().to_vec();
                refined.push(rng.random_range(1..n));
                let r = delta * rho * rng.random_range(0.5..1.0);
                BohrSpec::new(modulus, &refined, r).ok().map(BohrSet::build)
            }
        }
    };
    let b_prime = sub(&mut rng)?;
    let b_dprime = sub(&mut rng)?;
    if b_prime.size() == 0 || b_dprime.size() == 0 {
        return None;
    }
    if !b_prime.elements().is_subset_of(b_delta.elements()).ok()?
        || !b_dprime.elements().is_subset_of(b_delta.elements()).ok()?
    {
        return None;
    }

    let q = rng.random_range(0.05..0.95f64);
    let mut a = ZnSet::empty(modulus);
    for x in b.elements().iter() {
        if rng.random::<f64>() < q {
            a.insert(x);
        }
    }
    if a.is_empty() {
        a.insert(b.elements().iter().next().unwrap());
    }
    let alpha = a.card() as f64 / b.size() as f64;
    Some(DichotomyInstance {
        a,
        b,
        b_prime,
        b_dprime,
        alpha,
        delta,
    })
}

/// Exhaustive pairwise sum counts: out[x] = #{(u, v) in A x B : u + v = x mod n}.
pub fn brute_pair_counts(a: &ZnSet, b: &ZnSet) -> Vec<u64> {
    let n = a.n();
    let mut out = vec![0u64; n as usize];
    for x in a.iter() {
        for y in b.iter() {
            out[((x + y) % n) as usize] += 1;
        }
    }
    out
}

/// Recomputes every count behind the returned outcome by brute force and
/// checks the exact integer form of the claimed inequality.
pub fn certify_dichotomy(inst: &DichotomyInstance, outcome: &DichotomyOutcome) {
    let cnt_p = brute_pair_counts(&inst.a, inst.b_prime.elements());
    let cnt_pp = brute_pair_counts(&inst.a, inst.b_dprime.elements());
    let card_a = inst.a.card() as u128;
    let size_b = inst.b.size() as u128;
    let size_p = inst.b_prime.size() as u128;
    let size_pp = inst.b_dprime.size() as u128;
    match *outcome {
        DichotomyOutcome::Witness {
            x,
            density_p,
            density_pp,
        } => {
            let cp = cnt_p[x as usize] as u128;
            let cpp = cnt_pp[x as usize] as u128;
            assert!(
                5 * cp * size_b >= 4 * card_a * size_p,
                "witness below 0.8 alpha on B'"
            );
            assert!(
                5 * cpp * size_b >= 4 * card_a * size_pp,
                "witness below 0.8 alpha on B''"
            );
            assert_eq!(density_p, cnt_p[x as usize] as f64 / size_p as f64);
            assert_eq!(density_pp, cnt_pp[x as usize] as f64 / size_pp as f64);
        }
        DichotomyOutcome::Increment { side, x, value } => {
            let (cnt, size_side) = match side {
                IncrementSide::Prime => (&cnt_p, size_p),
                IncrementSide::DoublePrime => (&cnt_pp, size_pp),
            };
            let c = cnt[x as usize];
            assert_eq!(
                c,
                *cnt.iter().max().unwrap(),
                "increment point is not a maximizer"
            );
            assert!(
                10 * c as u128 * size_b >= 11 * card_a * size_side,
                "increment below 1.1 alpha"
            );
            assert_eq!(value, c as f64 / size_side as f64);
        }
    }
}

/// Independent check on a bitmask subset of {1..n}: true when no quadruple
/// x + y + z = 3w with x, y, z, w in the set exists besides x = y = z = w.
pub fn mask_solution_free(mask: u64, n: u64) -> bool {
    let elems: Vec<u64> = (1..=n).filter(|&v| mask >> (v - 1) & 1 == 1).collect();
    for (i, &x) in elems.iter().enumerate() {
        for (j, &y) in elems.iter().enumerate().skip(i) {
            for &z in elems.iter().skip(j) {
                let s = x + y + z;
                if s % 3 != 0 || (x == y && y == z) {
                    continue;
                }
                let w = s / 3;
                if w >= 1 && w <= n && mask >> (w - 1) & 1 == 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Full-enumeration optimum over all 2^n subsets: (max size, lex-smallest
/// witness among the maximum-size solution-free sets).
pub fn brute_optimum(n: u64) -> (u64, Vec<u64>) {
    let mut best = 0u32;
    let mut witnesses: Vec<Vec<u64>> = Vec::new();
    for mask in 1u64..1 << n {
        let size = mask.count_ones();
        if size < best || !mask_solution_free(mask, n) {
            continue;
        }
        let elems: Vec<u64> = (1..=n).filter(|&v| mask >> (v - 1) & 1 == 1).collect();
        if size > best {
            best = size;
            witnesses.clear();
        }
        witnesses.push(elems);
    }
    (best as u64, witnesses.into_iter().min().unwrap())
}

pub fn modpow(base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % n as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % n as u128;
        }
        b = b * b % n as u128;
        exp >>= 1;
    }
    acc as u64
}
