//! The conjugation-invariant sets C1 (irreducible elements of order
//! (q^n-1)/(q-1)) and C2 (elements of order q^(n-1)-1 fixing a line and a
//! complementary hyperplane) in SL(n,q).

use std::collections::HashSet;

use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::label_of;
use crate::error::{Error, Result};
use crate::ff::{Fe, Field, Poly};
use crate::matgrp::{
    collect_elements, generated_group_order, group_order, invariant_factors, random_element, GroupKind, Matrix,
    OrderContext,
};
use crate::numth::{self, BigNat, BigRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenSet {
    C1,
    C2,
}

impl std::str::FromStr for GenSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<GenSet> {
        match s.to_ascii_lowercase().as_str() {
            "c1" => Ok(GenSet::C1),
            "c2" => Ok(GenSet::C2),
            _ => Err(Error::InvalidParameter(format!("unknown set {s:?}"))),
        }
    }
}

impl GenSet {
    pub fn contains(self, g: &Matrix, field: &Field) -> Result<bool> {
        match self {
            GenSet::C1 => in_c1(g, field),
            GenSet::C2 => in_c2(g, field),
        }
    }

    pub fn density(self, n: usize, q: u64) -> Result<BigRational> {
        match self {
            GenSet::C1 => density_c1(n, q),
            GenSet::C2 => density_c2(n, q),
        }
    }
}

fn require_sl(g: &Matrix, field: &Field) -> Result<()> {
    match g.det(field) {
        0 => Err(Error::SingularMatrix),
        1 => Ok(()),
        _ => Err(Error::NotSpecialLinear),
    }
}

fn qpow_minus_one(q: u64, e: usize) -> BigNat {
    numth::pow_u64(q, e as u32) - 1u32
}

pub fn in_c1(g: &Matrix, field: &Field) -> Result<bool> {
    require_sl(g, field)?;
    let n = g.n();
    let q = field.size() as u64;
    let cp = g.char_poly(field);
    if !cp.is_irreducible(field)? {
        return Ok(false);
    }
    // the order of an element with irreducible characteristic polynomial is
    // the order of that polynomial
    let target = qpow_minus_one(q, n) / BigNat::from(q - 1);
    Ok(cp.order(field)? == target)
}

pub fn in_c2(g: &Matrix, field: &Field) -> Result<bool> {
    require_sl(g, field)?;
    let n = g.n();
    if n < 2 {
        return Ok(false);
    }
    let q = field.size() as u64;
    let data = invariant_factors(g, field);
    let divisors = &data.elementary_divisors;
    if divisors.len() != 2 || divisors.iter().any(|(_, m)| *m != 1) {
        return Ok(false);
    }
    let target = qpow_minus_one(q, n - 1);
    let line = divisors.iter().position(|(f, _)| f.degree() == Some(1));
    let Some(line) = line else {
        return Ok(false);
    };
    // for n = 2 either factor may play the hyperplane
    let candidates: Vec<usize> = if n == 2 { vec![0, 1] } else { vec![1 - line] };
    for w in candidates {
        let (f, _) = &divisors[w];
        if f.degree() != Some(n - 1) || f.order(field)? != target {
            continue;
        }
        let ctx = OrderContext::new(n, field)?;
        if ctx.order(g)? == target {
            return Ok(true);
        }
    }
    Ok(false)
}

/// (q-1) phi((q^n-1)/(q-1)) / (n (q^n-1)).
pub fn density_c1(n: usize, q: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let qn1 = qpow_minus_one(q, n);
    let m = &qn1 / BigNat::from(q - 1);
    let phi = numth::euler_phi(&m)?;
    Ok(numth::ratio(&(phi * BigNat::from(q - 1)), &(qn1 * BigNat::from(n))))
}

/// phi(q^(n-1)-1) / ((n-1)(q^(n-1)-1)), valid for n >= 3.
pub fn density_c2(n: usize, q: u64) -> Result<BigRational> {
    if n < 3 {
        return Err(Error::ExcludedCase {
            n,
            q,
            reason: "the line and hyperplane are not distinguished when n = 2",
        });
    }
    let m = qpow_minus_one(q, n - 1);
    let phi = numth::euler_phi(&m)?;
    Ok(numth::ratio(&phi, &(m * BigNat::from(n - 1))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMethod {
    /// Random suitable polynomial, then a uniformly random GL conjugator.
    Conjugation,
    /// Uniform SL elements until one lands in the set.
    Rejection,
}

fn random_monic<R: Rng + ?Sized>(d: usize, field: &Field, rng: &mut R) -> Poly {
    let mut coeffs: Vec<Fe> = (0..d).map(|_| rng.random_range(0..field.size())).collect();
    coeffs.push(1);
    Poly::from_coeffs(coeffs)
}

/// Uniform monic irreducible of degree d whose roots have order `order`.
fn random_poly_of_order<R: Rng + ?Sized>(d: usize, order: &BigNat, field: &Field, rng: &mut R) -> Result<Poly> {
    loop {
        let f = random_monic(d, field, rng);
        if f.coeffs[0] == 0 || !f.is_irreducible(field)? {
            continue;
        }
        if &f.order(field)? == order {
            return Ok(f);
        }
    }
}

/// Uniformly random member of C1 or C2. Every class in either set has the
/// same centralizer order, so a uniform polynomial and a uniform conjugator
/// give a uniform member.
pub fn sample_member<R: Rng + ?Sized>(
    set: GenSet,
    n: usize,
    field: &Field,
    method: SampleMethod,
    rng: &mut R,
) -> Result<Matrix> {
    let q = field.size() as u64;
    if n == 0 || (set == GenSet::C2 && n < 2) {
        return Err(Error::EmptySet);
    }
    if method == SampleMethod::Rejection {
        loop {
            let g = random_element(GroupKind::SL, n, field, rng)?;
            if set.contains(&g, field)? {
                return Ok(g);
            }
        }
    }
    let core = match set {
        GenSet::C1 => {
            let order = qpow_minus_one(q, n) / BigNat::from(q - 1);
            Matrix::companion(&random_poly_of_order(n, &order, field, rng)?, field)
        }
        GenSet::C2 => {
            let order = qpow_minus_one(q, n - 1);
            let f = random_poly_of_order(n - 1, &order, field, rng)?;
            let w = Matrix::companion(&f, field);
            let lambda = field.inv(w.det(field));
            let m = Matrix::block_diagonal(&[Matrix::scalar(1, lambda), w]);
            if !in_c2(&m, field)? {
                return Err(Error::EmptySet);
            }
            m
        }
    };
    let h = random_element(GroupKind::GL, n, field, rng)?;
    let h_inv = h.inverse(field).expect("GL element");
    Ok(core.conjugate_by(&h, &h_inv, field))
}

/// Whether the matrices generate all of SL(n,q).
pub fn generates_sl(gens: &[Matrix], field: &Field) -> Result<bool> {
    let Some(first) = gens.first() else {
        return Ok(false);
    };
    let n = first.n();
    for g in gens {
        require_sl(g, field)?;
    }
    Ok(generated_group_order(gens, field)? == group_order(GroupKind::SL, n, field.size() as u64)?)
}

/// Checks the pair against the set memberships and then whether it generates
/// SL(n,q).
pub fn generation_verify(g1: &Matrix, g2: &Matrix, field: &Field) -> Result<bool> {
    let n = g1.n();
    let q = field.size() as u64;
    if g2.n() != n {
        return Err(Error::DimensionMismatch("g1 and g2 differ in size".into()));
    }
    if n < 3 {
        return Err(Error::ExcludedCase {
            n,
            q,
            reason: "generation needs n >= 3",
        });
    }
    if (n, q) == (3, 4) {
        return Err(Error::ExcludedCase {
            n,
            q,
            reason: "(3,4) is excluded",
        });
    }
    if !in_c1(g1, field)? {
        return Err(Error::NotInC1);
    }
    if !in_c2(g2, field)? {
        return Err(Error::NotInC2);
    }
    generates_sl(&[g1.clone(), g2.clone()], field)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipCount {
    pub n: usize,
    pub q: u64,
    pub sl_order: u64,
    pub c1: u64,
    pub c2: u64,
    pub both: u64,
}

/// Exhaustive membership counts over SL(n,q).
pub fn membership_counts(n: usize, field: &Field) -> Result<MembershipCount> {
    let elements = collect_elements(GroupKind::SL, n, field)?;
    let flags: Vec<(bool, bool)> = elements
        .par_iter()
        .map(|g| Ok((in_c1(g, field)?, in_c2(g, field)?)))
        .collect::<Result<_>>()?;
    Ok(MembershipCount {
        n,
        q: field.size() as u64,
        sl_order: elements.len() as u64,
        c1: flags.iter().filter(|f| f.0).count() as u64,
        c2: flags.iter().filter(|f| f.1).count() as u64,
        both: flags.iter().filter(|f| f.0 && f.1).count() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AllPairsReport {
    pub n: usize,
    pub q: u64,
    /// |C1| * |C2|
    pub pairs: u64,
    /// Pairs actually handed to Schreier-Sims after the conjugacy reduction.
    pub checked: u64,
    /// Pairs (weighted back to the full product) that do not generate SL.
    pub failures: u64,
    /// One non-generating pair, when any exists, with the order it generates.
    pub witness: Option<(Matrix, Matrix, String)>,
}

/// Runs generation over every pair in C1 x C2. Pairs are reduced to one g1
/// per GL-class of C1 and one g2 per orbit of the centralizer of g1, and the
/// verdicts are weighted back by class and orbit sizes.
pub fn verify_all_pairs(n: usize, field: &Field) -> Result<AllPairsReport> {
    let q = field.size() as u64;
    let sl = collect_elements(GroupKind::SL, n, field)?;
    let gl = collect_elements(GroupKind::GL, n, field)?;
    let c1: Vec<&Matrix> = sl.iter().filter(|g| in_c1(g, field).unwrap_or(false)).collect();
    let c2: Vec<Matrix> = sl.iter().filter(|g| in_c2(g, field).unwrap_or(false)).cloned().collect();
    let c2_set: HashSet<&Matrix> = c2.iter().collect();
    let sl_order = group_order(GroupKind::SL, n, q)?;

    // class representatives of C1 under GL conjugation, with class sizes
    let mut reps: Vec<(Matrix, u64)> = Vec::new();
    let mut seen_labels = HashSet::new();
    for g in &c1 {
        let label = label_of(g, field)?;
        if seen_labels.insert(label.clone()) {
            let size = crate::classes::class_size(&label, q)?.to_u64().unwrap_or(u64::MAX);
            reps.push(((*g).clone(), size));
        }
    }

    let mut checked = 0u64;
    let mut failures = 0u64;
    let mut witness = None;
    for (g1, class_size) in &reps {
        let centralizer: Vec<(&Matrix, Matrix)> = gl
            .iter()
            .filter(|h| h.mul(g1, field) == g1.mul(h, field))
            .map(|h| (h, h.inverse(field).unwrap()))
            .collect();
        let mut assigned: HashSet<&Matrix> = HashSet::new();
        let mut orbits: Vec<(Matrix, u64)> = Vec::new();
        for g2 in &c2 {
            if assigned.contains(g2) {
                continue;
            }
            let mut size = 0;
            for (h, h_inv) in &centralizer {
                let image = g2.conjugate_by(h, h_inv, field);
                let key = *c2_set.get(&image).expect("C2 is conjugation invariant");
                if assigned.insert(key) {
                    size += 1;
                }
            }
            orbits.push((g2.clone(), size));
        }
        let verdicts: Vec<Result<BigNat>> = orbits
            .par_iter()
            .map(|(g2, _)| generated_group_order(&[g1.clone(), g2.clone()], field))
            .collect();
        for ((g2, size), order) in orbits.iter().zip(verdicts) {
            checked += 1;
            let order = order?;
            if order != sl_order {
                failures += class_size * size;
                if witness.is_none() {
                    witness = Some((g1.clone(), g2.clone(), order.to_string()));
                }
            }
        }
    }
    Ok(AllPairsReport {
        n,
        q,
        pairs: (c1.len() * c2.len()) as u64,
        checked,
        failures,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampledPairsReport {
    pub n: usize,
    pub q: u64,
    pub trials: u64,
    pub failures: u64,
}

/// Random C1 x C2 pairs (conjugation sampling) checked for generation.
pub fn verify_sampled_pairs(n: usize, field: &Field, trials: u64, seed: u64) -> Result<SampledPairsReport> {
    let failures: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = crate::genprob::trial_rng(seed, t);
            let g1 = sample_member(GenSet::C1, n, field, SampleMethod::Conjugation, &mut rng)?;
            let g2 = sample_member(GenSet::C2, n, field, SampleMethod::Conjugation, &mut rng)?;
            Ok(u64::from(!generation_verify(&g1, &g2, field)?))
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(SampledPairsReport {
        n,
        q: field.size() as u64,
        trials,
        failures,
    })
}

/// density * n * ln ln(q^n), which stays bounded below across instances.
pub fn density_scale(set: GenSet, n: usize, q: u64) -> Result<f64> {
    let d = set.density(n, q)?;
    let lnln = ((n as f64) * (q as f64).ln()).ln();
    Ok(d.to_f64().unwrap_or(0.0) * n as f64 * lnln)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use rand::SeedableRng;

    fn p(c: &[u32]) -> Poly {
        Poly::from_coeffs(c.to_vec())
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn membership_examples() {
        let f2 = make_field(2, 1).unwrap();
        let c = Matrix::companion(&p(&[1, 1, 0, 1]), &f2);
        assert!(in_c1(&c, &f2).unwrap());
        assert!(!in_c2(&c, &f2).unwrap());
        assert!(!in_c1(&Matrix::identity(3), &f2).unwrap());
        assert!(!in_c2(&Matrix::identity(3), &f2).unwrap());
        let c5 = Matrix::companion(&p(&[1, 1, 1, 1, 1]), &f2);
        assert!(!in_c1(&c5, &f2).unwrap());
        let b = Matrix::block_diagonal(&[Matrix::identity(1), Matrix::companion(&p(&[1, 1, 1]), &f2)]);
        assert!(in_c2(&b, &f2).unwrap());
        let f3 = make_field(3, 1).unwrap();
        assert!(matches!(in_c1(&Matrix::diagonal(&[2, 1]), &f3), Err(Error::NotSpecialLinear)));
    }

    #[test]
    fn density_examples() {
        assert_eq!(density_c1(3, 2).unwrap(), r(2, 7));
        assert_eq!(density_c1(2, 2).unwrap(), r(1, 3));
        assert_eq!(density_c1(4, 2).unwrap(), r(2, 15));
        assert_eq!(density_c2(3, 2).unwrap(), r(1, 3));
        assert_eq!(density_c2(4, 2).unwrap(), r(2, 7));
        assert_eq!(density_c2(3, 3).unwrap(), r(1, 4));
        assert!(matches!(density_c2(2, 3), Err(Error::ExcludedCase { .. })));
    }

    #[test]
    fn exhaustive_counts_match_densities() {
        for (n, pr) in [(2usize, 2u64), (3, 2), (3, 3), (4, 2), (2, 3), (2, 5)] {
            let f = make_field(pr, 1).unwrap();
            let counts = membership_counts(n, &f).unwrap();
            let total = counts.sl_order as i64;
            assert_eq!(r(counts.c1 as i64, total), density_c1(n, pr).unwrap(), "C1 ({n},{pr})");
            if n >= 3 {
                assert_eq!(r(counts.c2 as i64, total), density_c2(n, pr).unwrap(), "C2 ({n},{pr})");
                assert_eq!(counts.both, 0);
            }
        }
    }

    #[test]
    fn n2_c2_counts_disagree_with_closed_form() {
        // n = 2: identity is the only member at q = 2
        let f2 = make_field(2, 1).unwrap();
        let counts = membership_counts(2, &f2).unwrap();
        assert_eq!(counts.c2, 1);
    }

    #[test]
    fn sampling_lands_in_set() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (n, pr) in [(3usize, 2u64), (3, 3), (4, 2), (2, 2), (5, 2), (4, 3)] {
            let f = make_field(pr, 1).unwrap();
            for method in [SampleMethod::Conjugation, SampleMethod::Rejection] {
                for _ in 0..5 {
                    let g = sample_member(GenSet::C1, n, &f, method, &mut rng).unwrap();
                    assert!(in_c1(&g, &f).unwrap());
                    if n >= 3 {
                        let g = sample_member(GenSet::C2, n, &f, method, &mut rng).unwrap();
                        assert!(in_c2(&g, &f).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn c1_at_2_2_hits_both_order_three_elements() {
        let f2 = make_field(2, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let seen: HashSet<Matrix> = (0..200)
            .map(|_| sample_member(GenSet::C1, 2, &f2, SampleMethod::Conjugation, &mut rng).unwrap())
            .collect();
        assert_eq!(seen.len(), 2);
    }

    #[test]
    fn verification_errors() {
        let f2 = make_field(2, 1).unwrap();
        let c1 = Matrix::companion(&p(&[1, 1, 0, 1]), &f2);
        let id = Matrix::identity(3);
        assert!(matches!(generation_verify(&c1, &id, &f2), Err(Error::NotInC2)));
        assert!(matches!(generation_verify(&id, &c1, &f2), Err(Error::NotInC1)));
        assert!(!generates_sl(&[c1.clone(), id], &f2).unwrap());
        let f4 = make_field(2, 2).unwrap();
        let i3 = Matrix::identity(3);
        assert!(matches!(generation_verify(&i3, &i3, &f4), Err(Error::ExcludedCase { .. })));
        let f3 = make_field(3, 1).unwrap();
        let i2 = Matrix::identity(2);
        assert!(matches!(generation_verify(&i2, &i2, &f3), Err(Error::ExcludedCase { .. })));
    }

    #[test]
    fn sampled_pairs_at_4_2_generate() {
        let f2 = make_field(2, 1).unwrap();
        let report = verify_sampled_pairs(4, &f2, 50, 1).unwrap();
        assert_eq!(report.failures, 0);
    }
}
