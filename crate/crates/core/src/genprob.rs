//! Probability that two uniformly random elements generate SL(n,q).

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::Field;
use crate::gensets::{generates_sl, in_c1, in_c2};
use crate::limits;
use crate::matgrp::{collect_elements, group_order, random_element, GroupKind, Matrix, OrderContext};
use crate::numth::{self, BigNat, BigRational};

/// Independent generator for trial `t` of a seeded run.
pub fn trial_rng(seed: u64, t: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng
}

fn check_points(n: usize, q: u64) -> Result<()> {
    let cap = limits::current().max_points;
    let points = (q as f64).powi(n as i32) - 1.0;
    if points > cap as f64 {
        return Err(Error::limit("permutation degree q^n - 1", format!("{q}^{n} - 1"), cap));
    }
    Ok(())
}

/// Conjugacy classes of SL(n,q) under SL conjugation: (representative, size).
pub fn sl_classes(n: usize, field: &Field) -> Result<Vec<(Matrix, u64)>> {
    let elements = collect_elements(GroupKind::SL, n, field)?;
    let inverses: Vec<Matrix> = elements.iter().map(|g| g.inverse(field).unwrap()).collect();
    let mut assigned: HashMap<Matrix, usize> = HashMap::new();
    let mut classes = Vec::new();
    for x in &elements {
        if assigned.contains_key(x) {
            continue;
        }
        let id = classes.len();
        let mut size = 0;
        for (g, g_inv) in elements.iter().zip(&inverses) {
            let y = x.conjugate_by(g, g_inv, field);
            if let std::collections::hash_map::Entry::Vacant(slot) = assigned.entry(y) {
                slot.insert(id);
                size += 1;
            }
        }
        classes.push((x.clone(), size));
    }
    Ok(classes)
}

/// Exact probability that a uniform pair generates SL(n,q). The verdict for
/// (p, s) only depends on the pair up to simultaneous conjugation, so p runs
/// over class representatives weighted by class size.
pub fn generation_probability_exact(n: usize, field: &Field) -> Result<BigRational> {
    let q = field.size() as u64;
    let order = group_order(GroupKind::SL, n, q)?;
    if n == 1 {
        return Ok(BigRational::from_integer(1.into()));
    }
    let cap = limits::current().max_pair_group;
    if order > BigNat::from(cap) {
        return Err(Error::limit("group order for exact generation probability", order, cap));
    }
    check_points(n, q)?;
    let elements = collect_elements(GroupKind::SL, n, field)?;
    let classes = sl_classes(n, field)?;
    let generating: u64 = classes
        .par_iter()
        .map(|(p, size)| -> Result<u64> {
            let mut hits = 0u64;
            for s in &elements {
                if generates_sl(&[p.clone(), s.clone()], field)? {
                    hits += 1;
                }
            }
            Ok(hits * size)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(numth::ratio(&BigNat::from(generating), &(&order * &order)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationTrialReport {
    pub n: usize,
    pub q: u64,
    pub seed: u64,
    pub trials: u64,
    /// Pairs that generate SL(n,q).
    pub successes: u64,
    pub estimate: f64,
    pub stderr: f64,
    /// 1 - estimate
    pub failure_estimate: f64,
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub exact: Option<BigRational>,
    /// 2 q^-n, reference for the failure probability
    pub kantor_benchmark: f64,
}

fn serialize_opt_ratio<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

impl GenerationTrialReport {
    /// |estimate - exact| in standard errors, when the exact value is known.
    pub fn deviation_in_stderr(&self) -> Option<f64> {
        let exact = self.exact.as_ref()?.to_f64()?;
        let se = if self.stderr > 0.0 {
            self.stderr
        } else {
            // all trials agreed; use the exact variance instead
            (exact * (1.0 - exact) / self.trials as f64).sqrt()
        };
        if se == 0.0 {
            return Some(if self.estimate == exact { 0.0 } else { f64::INFINITY });
        }
        Some((self.estimate - exact).abs() / se)
    }
}

pub fn generation_probability_mc(
    n: usize,
    field: &Field,
    trials: u64,
    seed: u64,
    with_exact: bool,
) -> Result<GenerationTrialReport> {
    if trials == 0 {
        return Err(Error::NonPositive("trials"));
    }
    let q = field.size() as u64;
    check_points(n, q)?;
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<u64> {
            let mut rng = trial_rng(seed, t);
            let p = random_element(GroupKind::SL, n, field, &mut rng)?;
            let s = random_element(GroupKind::SL, n, field, &mut rng)?;
            Ok(u64::from(generates_sl(&[p, s], field)?))
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    let estimate = successes as f64 / trials as f64;
    let exact = if with_exact {
        Some(generation_probability_exact(n, field)?)
    } else {
        None
    };
    Ok(GenerationTrialReport {
        n,
        q,
        seed,
        trials,
        successes,
        estimate,
        stderr: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
        failure_estimate: 1.0 - estimate,
        exact,
        kantor_benchmark: 2.0 * (q as f64).powi(-(n as i32)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub n: usize,
    pub q: u64,
    pub seed: u64,
    pub trials: u64,
    /// Pairs with some p s^i in C1.
    pub c1_hits: u64,
    pub c2_hits: u64,
    pub both_hits: u64,
    /// Pairs with both hits that generate SL(n,q).
    pub both_and_generate: u64,
    pub conditional_generation_rate: Option<f64>,
}

/// For random pairs (p, s), scans p s^i for i below the order of s, looking
/// for members of C1 and C2, and records whether pairs hitting both generate.
pub fn witness_strategy_check(n: usize, field: &Field, trials: u64, seed: u64) -> Result<WitnessReport> {
    if trials == 0 {
        return Err(Error::NonPositive("trials"));
    }
    let q = field.size() as u64;
    check_points(n, q)?;
    let ctx = OrderContext::new(n, field)?;
    let rows: Vec<(bool, bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, bool, bool)> {
            let mut rng = trial_rng(seed, t);
            let p = random_element(GroupKind::SL, n, field, &mut rng)?;
            let s = random_element(GroupKind::SL, n, field, &mut rng)?;
            let ord = ctx.order(&s)?.to_u64().ok_or_else(|| {
                Error::limit("order of s", "more than 2^64", u64::MAX)
            })?;
            let (mut hit1, mut hit2) = (false, false);
            let mut x = p.clone();
            for _ in 0..ord {
                hit1 = hit1 || in_c1(&x, field)?;
                hit2 = hit2 || in_c2(&x, field)?;
                if hit1 && hit2 {
                    break;
                }
                x = x.mul(&s, field);
            }
            let generates = hit1 && hit2 && generates_sl(&[p, s], field)?;
            Ok((hit1, hit2, generates))
        })
        .collect::<Result<_>>()?;
    let both_hits = rows.iter().filter(|r| r.0 && r.1).count() as u64;
    let both_and_generate = rows.iter().filter(|r| r.2).count() as u64;
    Ok(WitnessReport {
        n,
        q,
        seed,
        trials,
        c1_hits: rows.iter().filter(|r| r.0).count() as u64,
        c2_hits: rows.iter().filter(|r| r.1).count() as u64,
        both_hits,
        both_and_generate,
        conditional_generation_rate: (both_hits > 0).then(|| both_and_generate as f64 / both_hits as f64),
    })
}

/// Exact non-generation probability: 1 - P(generate).
pub fn non_generation_exact(n: usize, field: &Field) -> Result<BigRational> {
    let p = generation_probability_exact(n, field)?;
    Ok(BigRational::from_integer(1.into()) - p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::pisigma::{PairCensus, SmallGroup};

    #[test]
    fn trivial_group() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(generation_probability_exact(1, &f).unwrap(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn exact_matches_pair_closure() {
        for (n, p) in [(2usize, 2u64), (2, 3), (3, 2), (2, 5)] {
            let f = make_field(p, 1).unwrap();
            let sl = SmallGroup::from_matrices(
                "SL",
                &crate::matgrp::standard_generators(GroupKind::SL, n, &f).unwrap(),
                &f,
            )
            .unwrap();
            let census = PairCensus::new(&sl).unwrap();
            assert_eq!(
                generation_probability_exact(n, &f).unwrap(),
                census.generation_probability(),
                "SL({n},{p})"
            );
        }
    }

    #[test]
    fn mc_is_deterministic() {
        let f = make_field(2, 1).unwrap();
        let a = generation_probability_mc(3, &f, 300, 42, false).unwrap();
        let b = generation_probability_mc(3, &f, 300, 42, false).unwrap();
        assert_eq!(a, b);
        assert!((a.kantor_benchmark - 0.25).abs() < 1e-15);
    }

    #[test]
    fn limit_guard() {
        let f = make_field(2, 1).unwrap();
        assert!(matches!(
            generation_probability_mc(99, &f, 10, 1, false),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn witness_with_identity_sigma() {
        let f = make_field(2, 1).unwrap();
        let ctx = OrderContext::new(3, &f).unwrap();
        // the scan length is the order of s, so s = 1 gives only i = 0
        assert_eq!(ctx.order(&Matrix::identity(3)).unwrap(), BigNat::from(1u32));
        let report = witness_strategy_check(3, &f, 200, 3).unwrap();
        assert!(report.both_hits >= report.both_and_generate);
        assert!(report.c1_hits >= report.both_hits && report.c2_hits >= report.both_hits);
    }
}
