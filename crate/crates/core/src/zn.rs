//! Arithmetic over Z_n: moduli, dense subsets, additive characters, dilation,
//! and the interval embedding used to move {1..M} problems into a prime cyclic
//! group without creating or destroying solutions of x + y + z = 3w.

use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;

/// Hard cap on the modulus of a materialized [`ZnSet`] (bitset of n bits).
pub const MAX_MODULUS: u64 = 1 << 24;

/// A cyclic-group modulus together with its primality, computed once at
/// construction so downstream code can branch on it without re-testing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Modulus {
    n: u64,
    prime: bool,
}

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if n > MAX_MODULUS {
            return Err(Error::CapacityExceeded(n));
        }
        Ok(Modulus {
            n,
            prime: is_prime(n),
        })
    }

    pub fn n(self) -> u64 {
        self.n
    }

    pub fn is_prime(self) -> bool {
        self.prime
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// Deterministic primality by trial division; fine for n <= 2^24.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distance |1 - e^{2 pi i t x / n}| evaluated through the closed form
/// 2 |sin(pi t x / n)|, which avoids the cancellation of computing the
/// complex exponential and subtracting.
pub fn char_distance(t: u64, x: u64, n: u64) -> f64 {
    debug_assert!(n >= 1);
    let r = ((t as u128 * x as u128) % n as u128) as u64;
    // r/n in [0, 1), so the sine is already nonnegative.
    2.0 * (PI * r as f64 / n as f64).sin()
}

/// An additive character x -> e^{2 pi i t x / n} of Z_n.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Character {
    modulus: Modulus,
    frequency: u64,
}

impl Character {
    pub fn new(modulus: Modulus, frequency: u64) -> Self {
        Character {
            modulus,
            frequency: frequency % modulus.n(),
        }
    }

    pub fn frequency(self) -> u64 {
        self.frequency
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    /// Value e^{2 pi i t x / n} on the unit circle.
    pub fn eval(self, x: u64) -> Complex64 {
        let n = self.modulus.n();
        let r = ((self.frequency as u128 * x as u128) % n as u128) as u64;
        let theta = 2.0 * PI * r as f64 / n as f64;
        Complex64::new(theta.cos(), theta.sin())
    }

    /// |1 - gamma(x)| via the closed form.
    pub fn distance_from_one(self, x: u64) -> f64 {
        char_distance(self.frequency, x, self.modulus.n())
    }
}

/// Dense subset of Z_n stored as a fixed-length bitset (little-endian u64
/// words, bit x of word x/64 holds residue x).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZnSet {
    modulus: Modulus,
    words: Vec<u64>,
}

fn word_len(n: u64) -> usize {
    ((n + 63) / 64) as usize
}

impl ZnSet {
    pub fn empty(modulus: Modulus) -> Self {
        ZnSet {
            modulus,
            words: vec![0; word_len(modulus.n())],
        }
    }

    pub fn full(modulus: Modulus) -> Self {
        let mut s = ZnSet {
            modulus,
            words: vec![!0u64; word_len(modulus.n())],
        };
        s.mask_tail();
        s
    }

    /// Builds from residues; values are reduced mod n.
    pub fn from_elems(modulus: Modulus, elems: &[u64]) -> Self {
        let mut s = ZnSet::empty(modulus);
        for &e in elems {
            s.insert(e % modulus.n());
        }
        s
    }

    pub fn singleton(modulus: Modulus, x: u64) -> Self {
        ZnSet::from_elems(modulus, &[x])
    }

    fn mask_tail(&mut self) {
        let n = self.modulus.n();
        let rem = (n % 64) as u32;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn n(&self) -> u64 {
        self.modulus.n()
    }

    pub fn insert(&mut self, x: u64) {
        let x = x % self.modulus.n();
        self.words[(x / 64) as usize] |= 1u64 << (x % 64);
    }

    pub fn remove(&mut self, x: u64) {
        let x = x % self.modulus.n();
        self.words[(x / 64) as usize] &= !(1u64 << (x % 64));
    }

    pub fn contains(&self, x: u64) -> bool {
        let x = x % self.modulus.n();
        self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn card(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Ascending iterator over elements.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = i as u64 * 64;
            BitIter { word: w }.map(move |b| base + b)
        })
    }

    pub fn elems(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn complement(&self) -> ZnSet {
        let mut s = ZnSet {
            modulus: self.modulus,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.mask_tail();
        s
    }

    fn check_same(&self, other: &ZnSet) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &ZnSet) -> Result<ZnSet> {
        self.check_same(other)?;
        Ok(ZnSet {
            modulus: self.modulus,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        })
    }

    pub fn union(&self, other: &ZnSet) -> Result<ZnSet> {
        self.check_same(other)?;
        Ok(ZnSet {
            modulus: self.modulus,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        })
    }

    pub fn is_subset_of(&self, other: &ZnSet) -> Result<bool> {
        self.check_same(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    /// Translate by t (reduced mod n; negative values allowed).
    pub fn translate(&self, t: i64) -> ZnSet {
        let n = self.modulus.n();
        let t = t.rem_euclid(n as i64) as u64;
        let mut out = ZnSet::empty(self.modulus);
        for x in self.iter() {
            out.insert((x + t) % n);
        }
        out
    }

    /// Dilate by c: {c a mod n : a in A}. Negative c is reduced immediately.
    /// When gcd(c, n) > 1 the map collapses residues and |result| may shrink;
    /// use [`ZnSet::dilate_checked`] to observe that.
    pub fn dilate(&self, c: i64) -> ZnSet {
        self.dilate_checked(c).0
    }

    /// Dilation plus an injectivity flag (true iff gcd(c, n) = 1).
    pub fn dilate_checked(&self, c: i64) -> (ZnSet, bool) {
        let n = self.modulus.n();
        let c = c.rem_euclid(n as i64) as u64;
        let mut out = ZnSet::empty(self.modulus);
        for x in self.iter() {
            out.insert(((c as u128 * x as u128) % n as u128) as u64);
        }
        (out, gcd(c, n) == 1)
    }

    pub fn neg(&self) -> ZnSet {
        self.dilate(-1)
    }

    /// Indicator values as f64 (length n).
    pub fn indicator_values(&self) -> Vec<f64> {
        let n = self.modulus.n() as usize;
        let mut v = vec![0.0; n];
        for x in self.iter() {
            v[x as usize] = 1.0;
        }
        v
    }

    /// Text form `n:<N>;elems:<comma-separated ascending residues>`.
    pub fn to_text(&self) -> String {
        let elems: Vec<String> = self.iter().map(|x| x.to_string()).collect();
        format!("n:{};elems:{}", self.modulus.n(), elems.join(","))
    }

    pub fn from_text(s: &str) -> Result<ZnSet> {
        let s = s.trim();
        let (n_part, e_part) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
        let n_str = n_part
            .strip_prefix("n:")
            .ok_or_else(|| Error::Parse(format!("expected 'n:<N>', got {n_part:?}")))?;
        let n: u64 = n_str
            .parse()
            .map_err(|e| Error::Parse(format!("bad modulus {n_str:?}: {e}")))?;
        let modulus = Modulus::new(n)?;
        let elems_str = e_part
            .strip_prefix("elems:")
            .ok_or_else(|| Error::Parse(format!("expected 'elems:...', got {e_part:?}")))?;
        let mut set = ZnSet::empty(modulus);
        if !elems_str.is_empty() {
            for tok in elems_str.split(',') {
                let x: u64 = tok
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad element {tok:?}: {e}")))?;
                if x >= n {
                    return Err(Error::ElementOutOfRange {
                        x,
                        context: format!("modulus {n}"),
                    });
                }
                set.insert(x);
            }
        }
        Ok(set)
    }

    /// Binary form: u64 modulus (little endian) followed by ceil(n/64)
    /// little-endian bitset words.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 8 * self.words.len());
        out.extend_from_slice(&self.modulus.n().to_le_bytes());
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<ZnSet> {
        if bytes.len() < 8 {
            return Err(Error::Parse("binary set shorter than header".into()));
        }
        let n = u64::from_le_bytes(bytes[..8].try_into().unwrap());
        let modulus = Modulus::new(n)?;
        let wl = word_len(n);
        if bytes.len() != 8 + 8 * wl {
            return Err(Error::Parse(format!(
                "binary set for n={n} must be {} bytes, got {}",
                8 + 8 * wl,
                bytes.len()
            )));
        }
        let words: Vec<u64> = bytes[8..]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let set = ZnSet { modulus, words };
        let mut masked = set.clone();
        masked.mask_tail();
        if masked.words != set.words {
            return Err(Error::Parse(
                "binary set has bits beyond the modulus".into(),
            ));
        }
        Ok(set)
    }
}

impl fmt::Debug for ZnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZnSet({})", self.to_text())
    }
}

struct BitIter {
    word: u64,
}

impl Iterator for BitIter {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if self.word == 0 {
            return None;
        }
        let b = self.word.trailing_zeros() as u64;
        self.word &= self.word - 1;
        Some(b)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Embeds A as a subset of {1..M} into Z_N for the smallest prime
/// N in [3M, 6M]. Sums x+y+z and targets 3w both lie in [3, 3M], and any two
/// such values differ by less than N, so solution quadruples of x + y + z = 3w
/// are preserved exactly in both directions.
pub fn embed_interval(elems: &[u64], m: u64) -> Result<(Modulus, ZnSet)> {
    if m == 0 {
        return Err(Error::Domain("interval bound M must be at least 1".into()));
    }
    if 6 * m > MAX_MODULUS {
        return Err(Error::CapacityExceeded(6 * m));
    }
    for &x in elems {
        if x == 0 || x > m {
            return Err(Error::ElementOutOfRange {
                x,
                context: format!("interval {{1..{m}}}"),
            });
        }
    }
    let (lo, hi) = (3 * m, 6 * m);
    let n = (lo..=hi)
        .find(|&c| is_prime(c))
        .ok_or(Error::NoPrimeInRange { lo, hi })?;
    let modulus = Modulus::new(n)?;
    Ok((modulus, ZnSet::from_elems(modulus, elems)))
}
