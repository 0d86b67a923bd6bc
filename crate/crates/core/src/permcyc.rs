//! Random permutations whose cycle lengths all lie in
//! D_m = {d <= n : q^d - 1 divides m}.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genprob::trial_rng;
use crate::numth::{self, BigNat, BigRational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AllowedDegrees {
    pub q: u64,
    #[serde(serialize_with = "numth::serialize_big")]
    pub m: BigNat,
    pub n: usize,
    pub degrees: Vec<usize>,
}

impl AllowedDegrees {
    /// An arbitrary degree set, for experiments not tied to (q, m).
    pub fn from_degrees(n: usize, mut degrees: Vec<usize>) -> AllowedDegrees {
        degrees.retain(|&d| d >= 1 && d <= n);
        degrees.sort_unstable();
        degrees.dedup();
        AllowedDegrees { q: 0, m: BigNat::zero(), n, degrees }
    }

    pub fn contains(&self, d: usize) -> bool {
        self.degrees.binary_search(&d).is_ok()
    }
}

pub fn allowed_degrees(q: u64, m: &BigNat, n: usize) -> Result<AllowedDegrees> {
    if m.is_zero() {
        return Err(Error::NonPositive("m"));
    }
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} must be at least 2")));
    }
    let mut degrees = Vec::new();
    let mut qd = BigNat::one();
    for d in 1..=n {
        qd *= q;
        let v = &qd - 1u32;
        if &v > m {
            break;
        }
        if (m % &v).is_zero() {
            degrees.push(d);
        }
    }
    Ok(AllowedDegrees { q, m: m.clone(), n, degrees })
}

/// Largest d with q^d - 1 <= m.
pub fn scan_bound(q: u64, m: &BigNat) -> usize {
    let mut d = 0;
    let mut qd = BigNat::from(q);
    while &(&qd - 1u32) <= m {
        d += 1;
        qd *= q;
    }
    d
}

/// Probability that a uniform permutation of S_n has all cycle lengths in D:
/// a_0 = 1, n a_n = sum_{d in D, d <= n} a_{n-d}.
pub fn cycle_prob_exact(degrees: &AllowedDegrees, n: usize) -> BigRational {
    cycle_prob_table(&degrees.degrees, n).pop().unwrap()
}

/// a_0, ..., a_n for the degree set D.
pub fn cycle_prob_table(degrees: &[usize], n: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    a.push(BigRational::one());
    for k in 1..=n {
        let mut s = BigRational::zero();
        for &d in degrees.iter().filter(|&&d| d <= k) {
            s += &a[k - d];
        }
        a.push(s / BigInt::from(k));
    }
    a
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl MonteCarloEstimate {
    /// |estimate - p| in units of sqrt(p(1-p)/trials).
    pub fn deviation(&self, p: f64) -> f64 {
        let sigma = (p * (1.0 - p) / self.trials as f64).sqrt();
        if sigma == 0.0 {
            return if self.estimate == p { 0.0 } else { f64::INFINITY };
        }
        (self.estimate - p).abs() / sigma
    }
}

fn cycles_allowed<R: Rng + ?Sized>(perm: &mut [usize], allowed: &[bool], rng: &mut R) -> bool {
    perm.iter_mut().enumerate().for_each(|(i, v)| *v = i);
    perm.shuffle(rng);
    let n = perm.len();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if !allowed[len] {
            return false;
        }
    }
    true
}

const CHUNK: u64 = 4096;

/// Fraction of uniform random permutations with all cycle lengths in D.
/// Trials are split into fixed chunks with independent streams, so the result
/// does not depend on the thread count.
pub fn cycle_prob_montecarlo(degrees: &AllowedDegrees, n: usize, trials: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if trials == 0 {
        return Err(Error::NonPositive("trials"));
    }
    let mut allowed = vec![false; n + 1];
    for &d in degrees.degrees.iter().filter(|&&d| d <= n) {
        allowed[d] = true;
    }
    let chunks = trials.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(seed, c);
            let mut perm = vec![0usize; n];
            let count = CHUNK.min(trials - c * CHUNK);
            (0..count).filter(|_| cycles_allowed(&mut perm, &allowed, &mut rng)).count() as u64
        })
        .sum();
    let estimate = hits as f64 / trials as f64;
    Ok(MonteCarloEstimate {
        trials,
        hits,
        estimate,
        stderr: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct D123 {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    /// D_m was empty; all three are 0.
    pub empty: bool,
}

/// d1 = max D; d2 = largest element not dividing 6 d1; d3 = largest element
/// dividing neither 6 d1 nor 6 d2. Missing values are 0.
pub fn d123_of(degrees: &[usize]) -> D123 {
    let largest = |pred: &dyn Fn(usize) -> bool| degrees.iter().rev().copied().find(|&d| pred(d)).unwrap_or(0);
    let d1 = degrees.iter().max().copied().unwrap_or(0);
    let d2 = largest(&|d| (6 * d1) % d != 0);
    let d3 = largest(&|d| (6 * d1) % d != 0 && (6 * d2) % d != 0);
    D123 { d1, d2, d3, empty: degrees.is_empty() }
}

pub fn d123(q: u64, m: &BigNat) -> Result<D123> {
    let bound = scan_bound(q, m).max(1);
    Ok(d123_of(&allowed_degrees(q, m, bound)?.degrees))
}

/// Every d in D divides 6 d1, divides 6 d2, or is at most d3.
pub fn trichotomy_holds(degrees: &[usize], d: &D123) -> bool {
    degrees
        .iter()
        .all(|&e| (6 * d.d1) % e == 0 || (6 * d.d2) % e == 0 || e <= d.d3)
}

/// The d3 inequality d3 <= (4/9) log_q m, required only when d2, d3 > 0.
pub fn d3_bound_holds(q: u64, m: &BigNat, d: &D123) -> bool {
    if d.d2 == 0 || d.d3 == 0 {
        return true;
    }
    // 9 d3 <= 4 log_q m  <=>  q^(9 d3) <= m^4
    numth::pow_u64(q, 9 * d.d3 as u32) <= m.pow(4)
}

/// r^-n exp(sum_{d in D} r^d / d).
pub fn saddle_bound(degrees: &AllowedDegrees, n: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositive("r"));
    }
    let s: f64 = degrees.degrees.iter().map(|&d| r.powi(d as i32) / d as f64).sum();
    Ok((s - n as f64 * r.ln()).exp())
}

/// r = n^(1 / log_q(m + 1)).
pub fn paper_r(q: u64, m: &BigNat, n: usize) -> f64 {
    let m1 = (m + 1u32).to_f64().unwrap_or(f64::INFINITY);
    let log_q = m1.ln() / (q as f64).ln();
    (n as f64).powf(1.0 / log_q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermcycRow {
    pub n: usize,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub p_exact: BigRational,
    pub p_mc: Option<f64>,
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub bound_at_paper_r: f64,
}

impl PermcycRow {
    pub fn csv_header() -> &'static str {
        "n,p_exact_num,p_exact_den,p_mc,d1,d2,d3,bound_at_paper_r"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.p_exact.numer(),
            self.p_exact.denom(),
            self.p_mc.map(|p| p.to_string()).unwrap_or_default(),
            self.d1,
            self.d2,
            self.d3,
            self.bound_at_paper_r
        )
    }
}

/// Rows for 1..=n with D_m taken over 1..=n.
pub fn permcyc_rows(q: u64, m: &BigNat, n: usize, trials: u64, seed: u64) -> Result<Vec<PermcycRow>> {
    let full = allowed_degrees(q, m, n)?;
    let d = d123(q, m)?;
    let table = cycle_prob_table(&full.degrees, n);
    (1..=n)
        .map(|k| {
            let dk = AllowedDegrees { n: k, degrees: full.degrees.iter().copied().filter(|&e| e <= k).collect(), ..full.clone() };
            let p_mc = if trials > 0 {
                Some(cycle_prob_montecarlo(&dk, k, trials, seed.wrapping_add(k as u64))?.estimate)
            } else {
                None
            };
            Ok(PermcycRow {
                n: k,
                p_exact: table[k].clone(),
                p_mc,
                d1: d.d1,
                d2: d.d2,
                d3: d.d3,
                bound_at_paper_r: saddle_bound(&dk, k, paper_r(q, m, k))?,
            })
        })
        .collect()
}

/// lcm(q^{d_i} - 1) over the parts of a partition.
pub fn partition_modulus(q: u64, parts: &[u32]) -> BigNat {
    parts
        .iter()
        .fold(BigNat::one(), |acc, &d| acc.lcm(&(numth::pow_u64(q, d) - 1u32)))
}
