//! The acceptance suite: thirteen end-to-end checks, each reported as a
//! single pass/fail outcome with a short summary.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{centralizer_order, eta2_exact, for_each_class_label, lower_bound_contribution, IrreducibleTable};
use crate::error::Result;
use crate::ff::{field_of_order, make_field, Field};
use crate::genprob::{generation_probability_exact, generation_probability_mc};
use crate::gensets::{density_c1, density_c2, membership_counts, verify_all_pairs, verify_sampled_pairs};
use crate::harmonic::{bound_curve, eta_bruteforce, eta_classbased, eta_cyclic, lemma_checks};
use crate::matgrp::{
    element_order_direct, element_order_formula, for_each_element, group_order, invariant_factors, random_element,
    GroupKind,
};
use crate::normmap::{
    count_by_norm, count_by_norm_characters, enumerate_hyperplanes, gauss_rows, random_subspace, surjectivity,
    NormField, Subspace,
};
use crate::numth::{self, BigNat, BigRational};
use crate::permcyc::{
    allowed_degrees, cycle_prob_exact, cycle_prob_montecarlo, cycle_prob_table, d123, d123_of, d3_bound_holds,
    partition_modulus, saddle_bound, trichotomy_holds, AllowedDegrees,
};
use crate::pisigma::{second_moment_limit, union_mask, PairCensus, SmallGroup};

pub const SEED: u64 = 0x00c0_ffee;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    /// Individual violations, capped at a handful.
    pub failures: Vec<String>,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.summary
        )?;
        for line in &self.failures {
            write!(f, "\n    {line}")?;
        }
        Ok(())
    }
}

struct Tally {
    id: u8,
    name: &'static str,
    checks: u64,
    failures: Vec<String>,
    failed: u64,
    notes: Vec<String>,
}

impl Tally {
    fn new(id: u8, name: &'static str) -> Tally {
        Tally { id, name, checks: 0, failures: Vec::new(), failed: 0, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 8 {
                self.failures.push(what());
            }
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self) -> CriterionOutcome {
        let mut summary = format!("{} checks, {} failed", self.checks, self.failed);
        for n in &self.notes {
            summary.push_str("; ");
            summary.push_str(n);
        }
        CriterionOutcome {
            id: self.id,
            name: self.name,
            passed: self.failed == 0 && self.checks > 0,
            summary,
            failures: self.failures,
        }
    }
}

fn outcome(id: u8, name: &'static str, body: impl FnOnce(&mut Tally) -> Result<()>) -> CriterionOutcome {
    let mut t = Tally::new(id, name);
    if let Err(e) = body(&mut t) {
        t.check(false, || format!("error: {e}"));
    }
    t.finish()
}

fn field(q: u64) -> Result<Field> {
    field_of_order(q)
}

const ETA_INSTANCES: [(usize, u64); 7] = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2)];

pub fn criterion_1() -> CriterionOutcome {
    outcome(1, "eta agreement", |t| {
        for (n, q) in ETA_INSTANCES {
            let f = field(q)?;
            let classes = eta_classbased(n, &f)?.eta;
            let brute = eta_bruteforce(GroupKind::GL, n, &f)?.eta;
            t.check(classes == brute, || format!("GL({n},{q}): class-based {classes} vs brute {brute}"));
            if (n, q) == (2, 2) {
                let expected = BigRational::new(19.into(), 36.into());
                t.check(classes == expected, || format!("GL(2,2) gave {classes}"));
                t.note(format!("GL(2,2) = {classes}"));
            }
        }
        Ok(())
    })
}

pub fn criterion_2() -> CriterionOutcome {
    outcome(2, "partition identity", |t| {
        for (n, q) in ETA_INSTANCES {
            let f = field(q)?;
            let table = IrreducibleTable::new(n, &f)?;
            let gl = group_order(GroupKind::GL, n, q)?;
            let mut total = BigNat::zero();
            let mut bad = false;
            for_each_class_label(n, &table, |label| {
                let c = centralizer_order(label, q);
                if (&gl % &c).is_zero() {
                    total += &gl / &c;
                } else {
                    bad = true;
                }
            })?;
            t.check(!bad, || format!("GL({n},{q}): a centralizer order does not divide |GL|"));
            t.check(total == gl, || format!("GL({n},{q}): sum {total} vs |GL| {gl}"));
        }
        Ok(())
    })
}

pub fn criterion_3() -> CriterionOutcome {
    outcome(3, "element order formula", |t| {
        let compare = |g: &crate::matgrp::Matrix, f: &Field| -> Result<bool> {
            let formula = element_order_formula(&invariant_factors(g, f), f)?;
            Ok(formula == element_order_direct(g, f)?)
        };
        let mut exhaustive = 0u64;
        for (n, q) in [(2usize, 2u64), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)] {
            let f = field(q)?;
            let mut mismatches = 0u64;
            let mut err = None;
            for_each_element(GroupKind::GL, n, &f, |g| match compare(g, &f) {
                Ok(true) => {}
                Ok(false) => mismatches += 1,
                Err(e) => err = Some(e),
            })?;
            if let Some(e) = err {
                return Err(e);
            }
            exhaustive += group_order(GroupKind::GL, n, q)?.to_u64().unwrap();
            t.check(mismatches == 0, || format!("GL({n},{q}): {mismatches} mismatches"));
        }
        let samples = 10_000u64;
        for (n, q) in [(4usize, 3u64), (5, 2), (6, 3)] {
            let f = field(q)?;
            let mismatches: u64 = (0..samples)
                .into_par_iter()
                .map(|i| -> Result<u64> {
                    let mut rng = crate::genprob::trial_rng(SEED ^ (n as u64) << 8 ^ q, i);
                    let g = random_element(GroupKind::GL, n, &f, &mut rng)?;
                    Ok(u64::from(!compare(&g, &f)?))
                })
                .collect::<Result<Vec<u64>>>()?
                .into_iter()
                .sum();
            t.check(mismatches == 0, || format!("GL({n},{q}): {mismatches} of {samples} sampled mismatches"));
        }
        t.note(format!("{exhaustive} elements exhaustively, 3 x {samples} sampled"));
        Ok(())
    })
}

/// (1/n^2) sum_{k < n} gcd(n, k): the direct average of 1/ord over Z/n.
pub fn eta_cyclic_direct(n: u64) -> BigRational {
    let s: u64 = (0..n).map(|k| numth::gcd_u64(n, k)).sum();
    numth::ratio(&BigNat::from(s), &BigNat::from(n * n))
}

pub fn criterion_4() -> CriterionOutcome {
    outcome(4, "lemma suite", |t| {
        let mismatch: Vec<u64> = (1..=2000u64)
            .into_par_iter()
            .filter(|&n| eta_cyclic(n).map(|e| e != eta_cyclic_direct(n)).unwrap_or(true))
            .collect();
        t.check(mismatch.is_empty(), || format!("cyclic formula differs at n = {:?}", &mismatch[..mismatch.len().min(5)]));
        let over: Vec<u64> = (1..=100_000u64)
            .into_par_iter()
            .filter(|&n| {
                let big = BigNat::from(n);
                match (eta_cyclic(n), numth::sigma0(&big)) {
                    (Ok(e), Ok(s)) => e > numth::ratio(&s, &big),
                    _ => true,
                }
            })
            .collect();
        t.check(over.is_empty(), || format!("eta_cyclic > sigma0/n at n = {:?}", &over[..over.len().min(5)]));
        let instances = [(2usize, 2u64), (2, 3), (2, 4), (2, 5), (2, 7), (2, 8), (2, 9), (3, 2), (3, 3), (3, 4), (4, 2)];
        for (n, q) in instances {
            let c = lemma_checks(n, &field(q)?)?;
            t.check(c.subgroup, || format!("({n},{q}): eta_SL > (q-1) eta_GL"));
            t.check(c.quotient, || format!("({n},{q}): quotient inequality fails"));
            t.check(c.psl_vs_sl, || format!("({n},{q}): eta_PSL > 2 eta_SL"));
        }
        t.note(format!("group inequalities on {} instances", instances.len()));
        Ok(())
    })
}

pub fn criterion_5() -> CriterionOutcome {
    outcome(5, "eta2 bound", |t| {
        for q in [2u64, 3] {
            for n in 1..=16usize {
                let e2 = eta2_exact(n, q)?;
                let pn = numth::partition_count(n as i64)?;
                // eta2 <= p(n) q^(n/2), squared
                t.check(&e2 * &e2 <= &pn * &pn * numth::pow_u64(q, n as u32), || {
                    format!("(n,q) = ({n},{q}): eta2 = {e2}, p(n) = {pn}")
                });
            }
        }
        Ok(())
    })
}

pub fn criterion_6() -> CriterionOutcome {
    outcome(6, "lower-bound sub-sum", |t| {
        for (n, q, d) in [(2usize, 2u64, 2usize), (4, 2, 2), (4, 2, 4), (4, 3, 2), (6, 2, 3)] {
            let lb = lower_bound_contribution(n, q, d)?;
            let eta = eta_classbased(n, &field(q)?)?.eta;
            t.check(lb.exact <= eta, || format!("({n},{q},{d}): sub-sum {} > eta {eta}", lb.exact));
            t.check(lb.exact >= lb.closed_form, || {
                format!("({n},{q},{d}): sub-sum {} < closed form {}", lb.exact, lb.closed_form)
            });
        }
        Ok(())
    })
}

fn all_class_unions(group: &SmallGroup) -> Vec<Vec<bool>> {
    let classes = group.conjugacy_classes();
    let k = classes.len();
    (1u64..1 << k)
        .map(|bits| {
            let chosen: Vec<&[u32]> = (0..k).filter(|i| bits >> i & 1 == 1).map(|i| classes[i].as_slice()).collect();
            union_mask(group, &chosen)
        })
        .collect()
}

pub fn criterion_7() -> CriterionOutcome {
    outcome(7, "second-moment bound", |t| {
        let mut subsets = 0u64;
        let compare = |t: &mut Tally, group: &SmallGroup, census: &PairCensus, mask: &[bool]| -> Result<()> {
            let miss = census.miss_probability(mask);
            let limit = second_moment_limit(group, mask)?;
            t.check(group.is_conjugation_invariant(mask), || format!("{}: subset not invariant", group.name));
            t.check(miss <= limit, || format!("{}: miss {miss} > second moment {limit}", group.name));
            Ok(())
        };
        for name in ["C2", "C6", "S3", "D4", "SL(2,3)"] {
            let group = SmallGroup::named(name)?;
            let census = PairCensus::new(&group)?;
            for mask in all_class_unions(&group) {
                compare(t, &group, &census, &mask)?;
                subsets += 1;
            }
            if name == "C2" {
                let mask = vec![false, true];
                let pair = (census.miss_probability(&mask), second_moment_limit(&group, &mask)?);
                let expected = (BigRational::new(1.into(), 4.into()), BigRational::new(1.into(), 2.into()));
                t.check(pair == expected, || format!("C2 worked instance gave ({}, {})", pair.0, pair.1));
            }
        }
        let group = SmallGroup::named("SL(2,5)")?;
        let census = PairCensus::new(&group)?;
        let classes = group.conjugacy_classes();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for _ in 0..40 {
            let chosen: Vec<&[u32]> = loop {
                let c: Vec<&[u32]> = classes.iter().filter(|_| rng.random_bool(0.5)).map(|c| c.as_slice()).collect();
                if !c.is_empty() {
                    break c;
                }
            };
            compare(t, &group, &census, &union_mask(&group, &chosen))?;
            subsets += 1;
        }
        t.note(format!("{subsets} class unions"));
        Ok(())
    })
}

pub fn criterion_8() -> CriterionOutcome {
    outcome(8, "C1 and C2 densities", |t| {
        for (n, q) in [(3usize, 2u64), (3, 3), (4, 2)] {
            let counts = membership_counts(n, &field(q)?)?;
            let sl = BigRational::from_integer(counts.sl_order.into());
            let c1 = BigRational::from_integer(counts.c1.into()) / &sl;
            let c2 = BigRational::from_integer(counts.c2.into()) / &sl;
            let f1 = density_c1(n, q)?;
            let f2 = density_c2(n, q)?;
            t.check(c1 == f1, || format!("({n},{q}): |C1|/|SL| = {c1}, formula {f1}"));
            t.check(c2 == f2, || format!("({n},{q}): |C2|/|SL| = {c2}, formula {f2}"));
            t.note(format!("({n},{q}) C1 {} C2 {}", c1, c2));
        }
        Ok(())
    })
}

pub fn criterion_9() -> CriterionOutcome {
    outcome(9, "generation lemma", |t| {
        let all = verify_all_pairs(3, &field(2)?)?;
        t.check(all.failures == 0, || {
            let w = all
                .witness
                .as_ref()
                .map(|(a, b, o)| format!("; e.g. {a} and {b} generate a group of order {o}"))
                .unwrap_or_default();
            format!("SL(3,2): {} of {} C1 x C2 pairs do not generate{w}", all.failures, all.pairs)
        });
        for (n, q) in [(3usize, 3u64), (4, 2)] {
            let r = verify_sampled_pairs(n, &field(q)?, 1000, SEED)?;
            t.check(r.failures == 0, || format!("SL({n},{q}): {} of {} sampled pairs do not generate", r.failures, r.trials));
            t.note(format!("SL({n},{q}) sampled failures {}", r.failures));
        }
        Ok(())
    })
}

pub fn criterion_10() -> CriterionOutcome {
    outcome(10, "generation probability", |t| {
        for q in [2u64, 3] {
            let f = field(q)?;
            let group = SmallGroup::named(&format!("SL(2,{q})"))?;
            let by_pairs = PairCensus::new(&group)?.generation_probability();
            let by_classes = generation_probability_exact(2, &f)?;
            t.check(by_pairs == by_classes, || format!("SL(2,{q}): {by_pairs} vs {by_classes}"));
            t.note(format!("SL(2,{q}) exact {by_pairs}"));
        }
        let f = field(2)?;
        let mc = generation_probability_mc(3, &f, 5000, SEED, true)?;
        let dev = mc.deviation_in_stderr().unwrap_or(f64::INFINITY);
        t.check(dev <= 3.0, || format!("SL(3,2): estimate {} is {dev:.2} sigma from {:?}", mc.estimate, mc.exact));
        t.note(format!("SL(3,2) mc {:.4} exact {} ({dev:.2} sigma)", mc.estimate, mc.exact.clone().unwrap_or_default()));
        for (n, q) in [(4usize, 2u64), (2, 7)] {
            let r = generation_probability_mc(n, &field(q)?, 2000, SEED, false)?;
            t.check(r.trials == 2000, || format!("({n},{q}) report incomplete"));
            t.note(format!(
                "SL({n},{q}) failure rate {:.4} vs 2q^-n {:.4}",
                r.failure_estimate, r.kantor_benchmark
            ));
        }
        Ok(())
    })
}

pub fn criterion_11() -> CriterionOutcome {
    outcome(11, "norm map", |t| {
        let mut hyperplanes = 0u64;
        for n in 3..=6u32 {
            for q in [2u64, 3, 4, 5] {
                if q.pow(n) > 4096 {
                    continue;
                }
                let f = NormField::new(q, n)?;
                for h in enumerate_hyperplanes(&f) {
                    let row = surjectivity(&h?)?;
                    hyperplanes += 1;
                    t.check(row.surjective, || format!("({n},{q}): hyperplane {:?} misses {:?}", row.basis, row.missing_values));
                }
            }
        }
        t.note(format!("{hyperplanes} hyperplanes"));
        for (n, q) in [(2u32, 3u64), (2, 5), (4, 3)] {
            let f = NormField::new(q, n)?;
            let row = surjectivity(&Subspace::subfield(&f, n / 2)?)?;
            t.check(!row.surjective, || format!("({n},{q}): GF(q^(n/2)) is surjective"));
        }
        let mut gauss = 0u64;
        for q in [3u64, 5] {
            for n in [2u32, 3] {
                let f = NormField::new(q, n)?;
                for row in gauss_rows(&f, usize::MAX)? {
                    gauss += 1;
                    let rel = (row.magnitude - row.expected).abs() / row.expected;
                    t.check(rel <= 1e-9 && row.exact_norm_holds, || {
                        format!("({n},{q}) chi {} theta {}: |G| = {}", row.chi_index, row.theta, row.magnitude)
                    });
                }
            }
        }
        t.note(format!("{gauss} Gauss sums"));
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for (n, q) in [(2u32, 3u64), (2, 5), (3, 3), (3, 4), (4, 3), (3, 5), (2, 7)] {
            let f = NormField::new(q, n)?;
            for dim in 0..=n as usize {
                let w = random_subspace(&f, dim, &mut rng)?;
                for a in 1..q as u32 {
                    let exact = count_by_norm(&w, a)?;
                    let c = count_by_norm_characters(&w, a)?;
                    t.check((c.value - exact as f64).abs() <= 1e-6, || {
                        format!("({n},{q}) dim {dim} a {a}: count {exact} vs characters {}", c.value)
                    });
                }
            }
        }
        Ok(())
    })
}

/// Twenty (q, m, n) instances with m built from a few factors q^d - 1.
pub fn permcyc_instances(seed: u64) -> Vec<(u64, BigNat, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..20)
        .map(|_| {
            let q = *[2u64, 3, 4, 5].choose(&mut rng).unwrap();
            let parts: Vec<u32> = (1..=6).filter(|_| rng.random_bool(0.5)).collect();
            let m = partition_modulus(q, &parts) * BigNat::from(rng.random_range(1u32..=5));
            let n = rng.random_range(3usize..=12);
            (q, m, n)
        })
        .collect()
}

pub fn criterion_12() -> CriterionOutcome {
    outcome(12, "permutation lemma", |t| {
        let instances = permcyc_instances(SEED);
        let results: Vec<Result<(BigRational, f64)>> = instances
            .par_iter()
            .enumerate()
            .map(|(i, (q, m, n))| {
                let d = allowed_degrees(*q, m, *n)?;
                let exact = cycle_prob_exact(&d, *n);
                let mc = cycle_prob_montecarlo(&d, *n, 100_000, SEED.wrapping_add(i as u64))?;
                Ok((exact.clone(), mc.deviation(exact.to_f64().unwrap())))
            })
            .collect();
        for ((q, m, n), r) in instances.iter().zip(results) {
            let (exact, dev) = r?;
            t.check(dev <= 3.0, || format!("(q,m,n) = ({q},{m},{n}): exact {exact}, Monte Carlo {dev:.2} sigma off"));
        }

        // saddle inequality on the r grid, for the instances and every small m
        let grid: Vec<f64> = (0..=28).map(|k| 1.0 + 0.25 * k as f64).collect();
        let mut sets: Vec<(u64, BigNat, usize)> = instances.clone();
        for q in [2u64, 3, 4, 5] {
            for m in 1..=200u64 {
                sets.push((q, BigNat::from(m), 12));
            }
        }
        let mut saddle = 0u64;
        for (q, m, n) in &sets {
            let d = allowed_degrees(*q, m, *n)?;
            let table = cycle_prob_table(&d.degrees, *n);
            for (k, p) in table.iter().enumerate().skip(1) {
                let dk = AllowedDegrees::from_degrees(k, d.degrees.clone());
                let p = p.to_f64().unwrap();
                for &r in &grid {
                    let b = saddle_bound(&dk, k, r)?;
                    saddle += 1;
                    t.check(p <= b * (1.0 + 1e-12), || format!("(q,m,n,r) = ({q},{m},{k},{r}): p {p} > bound {b}"));
                }
            }
        }
        t.note(format!("{saddle} saddle comparisons"));

        // d3 bound and trichotomy, m <= 1e5
        let scanned: Vec<(bool, Option<String>)> = [2u64, 3, 4, 5]
            .par_iter()
            .flat_map_iter(|&q| {
                (1..=100_000u64).map(move |m| {
                    let m = BigNat::from(m);
                    let bound = crate::permcyc::scan_bound(q, &m).max(1);
                    let checked = d123(q, &m).and_then(|d| Ok((d, allowed_degrees(q, &m, bound)?)));
                    match checked {
                        Ok((d, full)) => {
                            let ok = d3_bound_holds(q, &m, &d) && trichotomy_holds(&full.degrees, &d);
                            (d.d2 > 0 && d.d3 > 0, (!ok).then(|| format!("q {q} m {m}: {d:?}")))
                        }
                        Err(e) => (false, Some(format!("q {q} m {m}: {e}"))),
                    }
                })
            })
            .collect();
        let violations: Vec<&String> = scanned.iter().filter_map(|(_, v)| v.as_ref()).collect();
        t.note(format!(
            "{} of 400000 moduli m <= 1e5 with d2, d3 > 0",
            scanned.iter().filter(|(a, _)| *a).count()
        ));
        let mut active = 0u64;
        for q in [2u64, 3, 4, 5] {
            for n in 1..=12u32 {
                for parts in crate::classes::partitions(n) {
                    let m = partition_modulus(q, &parts);
                    let full = allowed_degrees(q, &m, crate::permcyc::scan_bound(q, &m).max(1))?;
                    let d = d123_of(&full.degrees);
                    if d.d2 > 0 && d.d3 > 0 {
                        active += 1;
                    }
                    t.check(d3_bound_holds(q, &m, &d) && trichotomy_holds(&full.degrees, &d), || {
                        format!("q {q} partition {parts:?}: {d:?}")
                    });
                }
            }
        }
        t.check(violations.is_empty(), || format!("d3 bound or trichotomy fails: {:?}", &violations[..violations.len().min(4)]));
        t.note(format!("{active} partition moduli with d2, d3 > 0"));

        let d = AllowedDegrees::from_degrees(4, vec![1, 2, 3]);
        let p = cycle_prob_exact(&d, 4);
        t.check(p == BigRational::new(3.into(), 4.into()), || format!("D = {{1,2,3}}, n = 4 gave {p}"));
        Ok(())
    })
}

pub fn criterion_13() -> CriterionOutcome {
    outcome(13, "bound curve", |t| {
        let rows = bound_curve(1..=12, &make_field(2, 1)?)?;
        for row in &rows {
            let finite = row.neg_log_eta.is_finite() && row.ratio.is_finite() && row.reference.is_finite();
            let in_range = row.eta > BigRational::zero() && row.eta <= BigRational::one();
            t.check(finite && in_range, || format!("n = {}: row {:?}", row.n, row));
        }
        if let Some(last) = rows.last() {
            t.note(format!("n = 12: -ln eta {:.3}, reference {:.3}", last.neg_log_eta, last.reference));
        }
        Ok(())
    })
}

pub fn criteria() -> Vec<fn() -> CriterionOutcome> {
    vec![
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
        criterion_13,
    ]
}

pub fn run_all() -> Vec<CriterionOutcome> {
    criteria().into_iter().map(|c| c()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_cyclic_eta() {
        assert_eq!(eta_cyclic_direct(1), BigRational::one());
        assert_eq!(eta_cyclic_direct(2), BigRational::new(3.into(), 4.into()));
        assert_eq!(eta_cyclic_direct(6), eta_cyclic(6).unwrap());
    }

    #[test]
    fn instances_are_reproducible() {
        assert_eq!(permcyc_instances(1), permcyc_instances(1));
        assert_eq!(permcyc_instances(1).len(), 20);
    }

    #[test]
    fn outcome_formatting() {
        let o = outcome(99, "demo", |t| {
            t.check(true, String::new);
            t.check(false, || "bad".into());
            Ok(())
        });
        assert!(!o.passed);
        assert!(o.to_string().starts_with("criterion 99 [FAIL] demo: 2 checks, 1 failed"));
    }
}
