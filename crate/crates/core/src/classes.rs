//! Conjugacy classes of GL(n,q) labelled by maps from irreducible
//! polynomials (other than X) to partitions.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{enumerate_irreducibles, necklace_count, Field, Poly};
use crate::limits;
use crate::matgrp::{group_order, invariant_factors, p_power_at_least, GroupKind, Matrix};
use crate::numth::{self, BigNat, BigRational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel {
    /// Partitions with parts in descending order.
    pub nu: BTreeMap<Poly, Vec<u32>>,
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Entry<'a>(&'a Poly, &'a [u32]);
        impl Serialize for Entry<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut st = s.serialize_struct("Entry", 2)?;
                st.serialize_field("poly", &self.0.coeffs)?;
                st.serialize_field("partition", self.1)?;
                st.end()
            }
        }
        let mut seq = s.serialize_seq(Some(self.nu.len()))?;
        for (f, parts) in &self.nu {
            seq.serialize_element(&Entry(f, parts))?;
        }
        seq.end()
    }
}

impl ClassLabel {
    pub fn dimension(&self) -> usize {
        self.nu
            .iter()
            .map(|(f, parts)| f.degree().unwrap_or(0) * parts.iter().sum::<u32>() as usize)
            .sum()
    }

    pub fn max_part(&self) -> u32 {
        self.nu.values().flat_map(|p| p.iter().copied()).max().unwrap_or(0)
    }

    /// Block diagonal matrix of companion matrices of f^m, one per part m.
    pub fn representative(&self, field: &Field) -> Matrix {
        let blocks: Vec<Matrix> = self
            .nu
            .iter()
            .flat_map(|(f, parts)| parts.iter().map(move |&m| (f, m)))
            .map(|(f, m)| Matrix::companion(&f.pow(m, field), field))
            .collect();
        Matrix::block_diagonal(&blocks)
    }
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .nu
            .iter()
            .map(|(f, p)| format!("{:?}:{:?}", f.coeffs, p))
            .collect();
        write!(out, "{{{}}}", parts.join(", "))
    }
}

pub fn label_of(g: &Matrix, field: &Field) -> Result<ClassLabel> {
    if !g.is_invertible(field) {
        return Err(Error::SingularMatrix);
    }
    Ok(ClassLabel {
        nu: invariant_factors(g, field).partitions(),
    })
}

/// Conjugate partition: entry i counts the parts exceeding i.
fn conjugate(parts: &[u32]) -> Vec<u32> {
    let largest = parts.first().copied().unwrap_or(0);
    (1..=largest)
        .map(|i| parts.iter().filter(|&&p| p >= i).count() as u32)
        .collect()
}

/// For each f of degree d with Q = q^d and partition with m_i parts equal to i,
/// contributes Q^(sum conj_i^2 - sum m_i(m_i+1)/2) * prod_i prod_{j<=m_i} (Q^j - 1).
pub fn centralizer_order(label: &ClassLabel, q: u64) -> BigNat {
    let mut total = BigNat::one();
    for (f, parts) in &label.nu {
        let qf = numth::pow_u64(q, f.degree().unwrap() as u32);
        let conj_sq: u64 = conjugate(parts).iter().map(|&c| (c as u64).pow(2)).sum();
        let mut mult: BTreeMap<u32, u64> = BTreeMap::new();
        for &p in parts {
            *mult.entry(p).or_default() += 1;
        }
        let tri: u64 = mult.values().map(|&m| m * (m + 1) / 2).sum();
        total *= num_traits::pow(qf.clone(), (conj_sq - tri) as usize);
        for &m in mult.values() {
            for j in 1..=m {
                total *= num_traits::pow(qf.clone(), j as usize) - 1u32;
            }
        }
    }
    total
}

pub fn class_size(label: &ClassLabel, q: u64) -> Result<BigNat> {
    let gl = group_order(GroupKind::GL, label.dimension(), q)?;
    Ok(gl / centralizer_order(label, q))
}

pub fn class_order(label: &ClassLabel, field: &Field) -> Result<BigNat> {
    let mut order = BigNat::one();
    for f in label.nu.keys() {
        order = numth::lcm(&order, &f.order(field)?);
    }
    Ok(order * p_power_at_least(field.p() as u64, label.max_part()))
}

/// Monic irreducibles other than X of every degree up to n, with orders.
#[derive(Debug, Clone)]
pub struct IrreducibleTable {
    field: Field,
    polys: Vec<(Poly, BigNat)>,
    index: HashMap<Poly, usize>,
}

impl IrreducibleTable {
    pub fn new(n: usize, field: &Field) -> Result<IrreducibleTable> {
        let mut polys = Vec::new();
        for d in 1..=n {
            for f in enumerate_irreducibles(field, d, true)? {
                let ord = f.order(field)?;
                polys.push((f, ord));
            }
        }
        let index = polys.iter().enumerate().map(|(i, (f, _))| (f.clone(), i)).collect();
        Ok(IrreducibleTable {
            field: field.clone(),
            polys,
            index,
        })
    }

    pub fn polys(&self) -> &[(Poly, BigNat)] {
        &self.polys
    }

    pub fn order_of(&self, f: &Poly) -> Option<&BigNat> {
        self.index.get(f).map(|&i| &self.polys[i].1)
    }

    pub fn class_order(&self, label: &ClassLabel) -> Result<BigNat> {
        let mut order = BigNat::one();
        for f in label.nu.keys() {
            let o = match self.order_of(f) {
                Some(o) => o.clone(),
                None => f.order(&self.field)?,
            };
            order = numth::lcm(&order, &o);
        }
        Ok(order * p_power_at_least(self.field.p() as u64, label.max_part()))
    }
}

/// Partitions of k, parts descending, in reverse lexicographic order.
pub fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(remaining)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// Streams every class label of GL(n,q) to `visit`, polynomials taken in
/// table order and partitions in reverse lexicographic order. Returns the
/// number of labels visited.
pub fn for_each_class_label<F: FnMut(&ClassLabel)>(
    n: usize,
    table: &IrreducibleTable,
    mut visit: F,
) -> Result<u64> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let parts_by_size: Vec<Vec<Vec<u32>>> = (0..=n as u32).map(partitions).collect();
    let cap = limits::current().max_labels;
    let mut count = 0u64;
    let mut label = ClassLabel { nu: BTreeMap::new() };

    struct Walk<'a, F> {
        polys: &'a [(Poly, BigNat)],
        parts_by_size: &'a [Vec<Vec<u32>>],
        visit: &'a mut F,
        count: &'a mut u64,
        cap: u64,
    }

    fn rec<F: FnMut(&ClassLabel)>(w: &mut Walk<'_, F>, i: usize, remaining: usize, label: &mut ClassLabel) -> Result<()> {
        if remaining == 0 {
            *w.count += 1;
            if *w.count > w.cap {
                return Err(Error::limit("class labels", *w.count, w.cap));
            }
            (w.visit)(label);
            return Ok(());
        }
        let Some((f, _)) = w.polys.get(i) else {
            return Ok(());
        };
        let d = f.degree().unwrap();
        if d > remaining {
            return Ok(());
        }
        for size in 1..=remaining / d {
            for parts in &w.parts_by_size[size] {
                label.nu.insert(f.clone(), parts.clone());
                rec(w, i + 1, remaining - size * d, label)?;
            }
        }
        label.nu.remove(f);
        rec(w, i + 1, remaining, label)
    }

    let mut walk = Walk {
        polys: table.polys(),
        parts_by_size: &parts_by_size,
        visit: &mut visit,
        count: &mut count,
        cap,
    };
    rec(&mut walk, 0, n, &mut label)?;
    Ok(count)
}

pub fn enumerate_class_labels(n: usize, field: &Field) -> Result<Vec<ClassLabel>> {
    let table = IrreducibleTable::new(n, field)?;
    let mut out = Vec::new();
    for_each_class_label(n, &table, |l| out.push(l.clone()))?;
    Ok(out)
}

/// (order, count) for the monic irreducibles of degree d other than X: the
/// roots of such a polynomial have order e with e | q^d - 1 and q of order d
/// modulo e, and there are phi(e)/d polynomials for each such e.
pub fn irreducible_order_counts(d: u32, q: u64) -> Result<Vec<(BigNat, BigNat)>> {
    if d == 0 {
        return Err(Error::NonPositive("d"));
    }
    let qd1 = numth::pow_u64(q, d) - 1u32;
    let fac = numth::factorize(&qd1)?;
    let d_primes: Vec<u32> = (2..=d).filter(|&r| d % r == 0 && numth::is_prime_u64(r as u64)).collect();
    let qb = BigNat::from(q);
    let mut out = Vec::new();
    for e in fac.divisors() {
        // e = 1 belongs to X - 1 only
        let primitive = (d == 1 || !e.is_one())
            && d_primes.iter().all(|&r| !qb.modpow(&BigNat::from(d / r), &e).is_one());
        if primitive {
            let count = numth::euler_phi(&e)? / BigNat::from(d);
            out.push((e, count));
        }
    }
    Ok(out)
}

fn binomial(n: &BigNat, k: u64) -> BigNat {
    if BigNat::from(k) > *n {
        return BigNat::zero();
    }
    let mut acc = BigNat::one();
    for i in 0..k {
        acc = acc * (n - BigNat::from(i)) / BigNat::from(i + 1);
    }
    acc
}

fn check_states(states: usize) -> Result<()> {
    let cap = limits::current().max_labels;
    if states as u64 > cap {
        return Err(Error::limit("dynamic programming states", states, cap));
    }
    Ok(())
}

/// Sum over multisets of irreducibles f != X with total degree n of
/// 1 / lcm(ord f_i).
pub fn eta1_exact(n: usize, q: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    // states[deg] maps lcm -> number of multisets
    let mut states: Vec<HashMap<BigNat, BigNat>> = vec![HashMap::new(); n + 1];
    states[0].insert(BigNat::one(), BigNat::one());
    for d in 1..=n {
        for (e, c) in irreducible_order_counts(d as u32, q)? {
            let snapshot = states.clone();
            for (deg, map) in snapshot.iter().enumerate() {
                for (l, cnt) in map {
                    let new_l = numth::lcm(l, &e);
                    for k in 1..=((n - deg) / d) {
                        let ways = binomial(&(&c + BigNat::from(k as u64) - 1u32), k as u64);
                        if ways.is_zero() {
                            break;
                        }
                        *states[deg + k * d].entry(new_l.clone()).or_insert_with(BigNat::zero) += cnt * ways;
                    }
                }
            }
            check_states(states.iter().map(|m| m.len()).sum())?;
        }
    }
    Ok(states[n]
        .iter()
        .fold(BigRational::zero(), |acc, (l, cnt)| acc + numth::ratio(cnt, l)))
}

/// Number of multisets of pairs (f, m), f != X irreducible, m >= 2, with
/// sum m deg f = n.
pub fn eta2_exact(n: usize, q: u64) -> Result<BigNat> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let mut coeffs = vec![BigNat::zero(); n + 1];
    coeffs[0] = BigNat::one();
    for d in 1..=n {
        let mut count = necklace_count(q, d as u32);
        if d == 1 {
            count -= 1u32;
        }
        for m in 2..=n / d {
            let w = m * d;
            // multiply by (1 - x^w)^(-count)
            let mut next = vec![BigNat::zero(); n + 1];
            for (i, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for k in 0..=((n - i) / w) {
                    let ways = binomial(&(&count + BigNat::from(k as u64) - 1u32), k as u64);
                    if k > 0 && ways.is_zero() {
                        break;
                    }
                    let ways = if k == 0 { BigNat::one() } else { ways };
                    next[i + k * w] += a * ways;
                }
            }
            coeffs = next;
        }
    }
    Ok(coeffs.pop().unwrap())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundContribution {
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub exact: BigRational,
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub closed_form: BigRational,
}

/// Classes whose characteristic polynomial is a product of n/d distinct
/// irreducibles of degree d: exact contribution to eta of GL(n,q) and the
/// binomial closed-form lower bound.
pub fn lower_bound_contribution(n: usize, q: u64, d: usize) -> Result<LowerBoundContribution> {
    if n == 0 || d == 0 {
        return Err(Error::NonPositive("n and d"));
    }
    if n % d != 0 {
        return Err(Error::InvalidParameter(format!("d = {d} does not divide n = {n}")));
    }
    let k = n / d;
    let groups = irreducible_order_counts(d as u32, q)?;
    let total: BigNat = groups.iter().map(|(_, c)| c.clone()).sum();
    // states[j] maps lcm -> number of j-subsets
    let mut states: Vec<HashMap<BigNat, BigNat>> = vec![HashMap::new(); k + 1];
    states[0].insert(BigNat::one(), BigNat::one());
    for (e, c) in &groups {
        let snapshot = states.clone();
        for (j, map) in snapshot.iter().enumerate() {
            for (l, cnt) in map {
                let new_l = numth::lcm(l, e);
                for take in 1..=(k - j) {
                    let ways = binomial(c, take as u64);
                    if ways.is_zero() {
                        break;
                    }
                    *states[j + take].entry(new_l.clone()).or_insert_with(BigNat::zero) += cnt * ways;
                }
            }
        }
        check_states(states.iter().map(|m| m.len()).sum())?;
    }
    let qd1 = numth::pow_u64(q, d as u32) - 1u32;
    let centralizer = num_traits::pow(qd1.clone(), k);
    let exact = states[k].iter().fold(BigRational::zero(), |acc, (l, cnt)| {
        acc + numth::ratio(cnt, &(l * &centralizer))
    });
    let closed_form = numth::ratio(&binomial(&total, k as u64), &(&centralizer * &qd1));
    Ok(LowerBoundContribution { exact, closed_form })
}

/// min over classes of |C(g)| n^2 / q^n.
pub fn min_centralizer_ratio(n: usize, field: &Field) -> Result<BigRational> {
    let table = IrreducibleTable::new(n, field)?;
    let q = field.size() as u64;
    let mut best: Option<BigNat> = None;
    for_each_class_label(n, &table, |l| {
        let c = centralizer_order(l, q);
        if best.as_ref().is_none_or(|b| &c < b) {
            best = Some(c);
        }
    })?;
    let best = best.ok_or(Error::EmptySet)?;
    Ok(numth::ratio(&(best * BigNat::from(n * n)), &numth::pow_u64(q, n as u32)))
}

/// Brute-force count of elements of GL(n,q) commuting with g.
pub fn centralizer_order_bruteforce(g: &Matrix, field: &Field) -> Result<BigNat> {
    let mut count = 0u64;
    crate::matgrp::for_each_element(GroupKind::GL, g.n(), field, |h| {
        if g.mul(h, field) == h.mul(g, field) {
            count += 1;
        }
    })?;
    Ok(BigNat::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use num_traits::ToPrimitive;

    fn p(c: &[u32]) -> Poly {
        Poly::from_coeffs(c.to_vec())
    }

    fn label(entries: &[(&[u32], &[u32])]) -> ClassLabel {
        ClassLabel {
            nu: entries.iter().map(|(f, parts)| (p(f), parts.to_vec())).collect(),
        }
    }

    #[test]
    fn enumeration_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(enumerate_class_labels(1, &f2).unwrap(), vec![label(&[(&[1, 1], &[1])])]);
        assert_eq!(
            enumerate_class_labels(2, &f2).unwrap(),
            vec![
                label(&[(&[1, 1], &[2])]),
                label(&[(&[1, 1], &[1, 1])]),
                label(&[(&[1, 1, 1], &[1])]),
            ]
        );
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(enumerate_class_labels(2, &f3).unwrap().len(), 8);
    }

    #[test]
    fn label_of_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(label_of(&Matrix::identity(2), &f2).unwrap(), label(&[(&[1, 1], &[1, 1])]));
        let j2 = Matrix::from_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(label_of(&j2, &f2).unwrap(), label(&[(&[1, 1], &[2])]));
        let c = Matrix::companion(&p(&[1, 1, 1]), &f2);
        assert_eq!(label_of(&c, &f2).unwrap(), label(&[(&[1, 1, 1], &[1])]));
        assert!(label_of(&Matrix::scalar(2, 0), &f2).is_err());
    }

    #[test]
    fn centralizer_and_order_examples() {
        let f2 = make_field(2, 1).unwrap();
        let central = label(&[(&[1, 1], &[1, 1])]);
        let jordan = label(&[(&[1, 1], &[2])]);
        let quad = label(&[(&[1, 1, 1], &[1])]);
        assert_eq!(centralizer_order(&central, 2), BigNat::from(6u32));
        assert_eq!(centralizer_order(&quad, 2), BigNat::from(3u32));
        assert_eq!(centralizer_order(&jordan, 2), BigNat::from(2u32));
        assert_eq!(class_order(&central, &f2).unwrap(), BigNat::from(1u32));
        assert_eq!(class_order(&jordan, &f2).unwrap(), BigNat::from(2u32));
        let cubic = label(&[(&[1, 1, 0, 1], &[1])]);
        assert_eq!(class_order(&cubic, &f2).unwrap(), BigNat::from(7u32));
    }

    #[test]
    fn centralizer_formula_matches_bruteforce() {
        for (n, pr, e) in [(2, 2, 1), (2, 3, 1), (2, 2, 2), (2, 5, 1), (3, 2, 1), (3, 3, 1)] {
            let f = make_field(pr, e).unwrap();
            let q = f.size() as u64;
            for l in enumerate_class_labels(n, &f).unwrap() {
                let g = l.representative(&f);
                assert_eq!(label_of(&g, &f).unwrap(), l);
                assert_eq!(
                    centralizer_order(&l, q),
                    centralizer_order_bruteforce(&g, &f).unwrap(),
                    "{l} over GF({q})"
                );
            }
        }
    }

    #[test]
    fn eta1_examples() {
        assert_eq!(eta1_exact(1, 2).unwrap(), BigRational::from_integer(1.into()));
        assert_eq!(eta1_exact(2, 2).unwrap(), numth::ratio(&4u32.into(), &3u32.into()));
        assert_eq!(eta1_exact(1, 3).unwrap(), numth::ratio(&3u32.into(), &2u32.into()));
    }

    /// Multisets of actual polynomials, enumerated.
    fn eta1_oracle(n: usize, f: &Field) -> BigRational {
        let table = IrreducibleTable::new(n, f).unwrap();
        let polys = table.polys().to_vec();
        fn rec(polys: &[(Poly, BigNat)], i: usize, rem: usize, l: BigNat, acc: &mut BigRational) {
            if rem == 0 {
                *acc += numth::ratio(&BigNat::one(), &l);
                return;
            }
            if i == polys.len() {
                return;
            }
            let d = polys[i].0.degree().unwrap();
            if d > rem {
                return;
            }
            // take f_i at least once (stay at i) or move on
            rec(polys, i, rem - d, numth::lcm(&l, &polys[i].1), acc);
            rec(polys, i + 1, rem, l, acc);
        }
        let mut acc = BigRational::zero();
        rec(&polys, 0, n, BigNat::one(), &mut acc);
        acc
    }

    fn eta2_oracle(n: usize, f: &Field) -> BigNat {
        let table = IrreducibleTable::new(n, f).unwrap();
        let items: Vec<usize> = table
            .polys()
            .iter()
            .flat_map(|(g, _)| {
                let d = g.degree().unwrap();
                (2..=n / d).map(move |m| m * d)
            })
            .collect();
        fn rec(items: &[usize], i: usize, rem: usize) -> u64 {
            if rem == 0 {
                return 1;
            }
            if i == items.len() {
                return 0;
            }
            let mut total = rec(items, i + 1, rem);
            if items[i] <= rem {
                total += rec(items, i, rem - items[i]);
            }
            total
        }
        BigNat::from(rec(&items, 0, n))
    }

    #[test]
    fn eta1_and_eta2_match_enumeration() {
        for (pr, e, max_n) in [(2, 1, 8), (3, 1, 5), (2, 2, 4), (5, 1, 3)] {
            let f = make_field(pr, e).unwrap();
            let q = f.size() as u64;
            for n in 1..=max_n {
                assert_eq!(eta1_exact(n, q).unwrap(), eta1_oracle(n, &f), "eta1 ({n},{q})");
                assert_eq!(eta2_exact(n, q).unwrap(), eta2_oracle(n, &f), "eta2 ({n},{q})");
            }
        }
    }

    #[test]
    fn eta2_examples() {
        assert_eq!(eta2_exact(1, 5).unwrap(), BigNat::zero());
        assert_eq!(eta2_exact(2, 2).unwrap(), BigNat::one());
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(eta2_exact(4, 2).unwrap(), eta2_oracle(4, &f2));
        assert_eq!(eta2_exact(4, 2).unwrap(), BigNat::from(3u32));
    }

    #[test]
    fn eta2_bound() {
        for q in [2u64, 3] {
            for n in 1..=16usize {
                let e2 = eta2_exact(n, q).unwrap();
                let pn = numth::partition_count(n as i64).unwrap();
                assert!(&e2 * &e2 <= &pn * &pn * numth::pow_u64(q, n as u32), "({n},{q})");
            }
        }
    }

    #[test]
    fn irreducible_order_counts_match_enumeration() {
        for (pr, e, max_d) in [(2, 1, 8), (3, 1, 5), (2, 2, 3), (7, 1, 2)] {
            let f = make_field(pr, e).unwrap();
            let q = f.size() as u64;
            for d in 1..=max_d {
                let mut seen: BTreeMap<BigNat, BigNat> = BTreeMap::new();
                for g in enumerate_irreducibles(&f, d, true).unwrap() {
                    *seen.entry(g.order(&f).unwrap()).or_insert_with(BigNat::zero) += 1u32;
                }
                let formula: BTreeMap<BigNat, BigNat> =
                    irreducible_order_counts(d as u32, q).unwrap().into_iter().collect();
                assert_eq!(seen, formula, "degree {d} over GF({q})");
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        let lb = lower_bound_contribution(2, 2, 2).unwrap();
        assert_eq!(lb.exact, numth::ratio(&1u32.into(), &9u32.into()));
        let lb = lower_bound_contribution(4, 2, 4).unwrap();
        assert_eq!(lb.exact, numth::ratio(&1u32.into(), &45u32.into()));
        let lb = lower_bound_contribution(4, 2, 2).unwrap();
        assert!(lb.exact.is_zero() && lb.closed_form.is_zero());
        assert!(lower_bound_contribution(4, 2, 3).is_err());
    }

    #[test]
    fn lower_bound_matches_label_subsum() {
        for (n, pr) in [(2usize, 3u64), (3, 2), (4, 2), (2, 5), (4, 3)] {
            let f = make_field(pr, 1).unwrap();
            let table = IrreducibleTable::new(n, &f).unwrap();
            for d in (1..=n).filter(|d| n % d == 0) {
                let mut sub = BigRational::zero();
                for_each_class_label(n, &table, |l| {
                    let distinct = l
                        .nu
                        .iter()
                        .all(|(g, parts)| g.degree() == Some(d) && parts == &[1]);
                    if distinct {
                        let w = centralizer_order(l, pr) * table.class_order(l).unwrap();
                        sub += numth::ratio(&BigNat::one(), &w);
                    }
                })
                .unwrap();
                let lb = lower_bound_contribution(n, pr, d).unwrap();
                assert_eq!(lb.exact, sub, "({n},{pr},{d})");
                assert!(lb.exact >= lb.closed_form);
            }
        }
    }

    #[test]
    fn partition_of_group() {
        for (n, pr, e) in [(2, 2, 1), (2, 3, 1), (2, 2, 2), (2, 5, 1), (3, 2, 1), (3, 3, 1), (4, 2, 1)] {
            let f = make_field(pr, e).unwrap();
            let q = f.size() as u64;
            let gl = group_order(GroupKind::GL, n, q).unwrap();
            let total: BigNat = enumerate_class_labels(n, &f)
                .unwrap()
                .iter()
                .map(|l| class_size(l, q).unwrap())
                .sum();
            assert_eq!(total, gl);
        }
    }

    #[test]
    fn centralizer_ratio_positive() {
        let f2 = make_field(2, 1).unwrap();
        for n in 1..=6 {
            assert!(min_centralizer_ratio(n, &f2).unwrap().to_f64().unwrap() > 0.0);
        }
    }

    #[test]
    fn serializes_label() {
        let l = label(&[(&[1, 1], &[2, 1])]);
        assert_eq!(
            serde_json::to_string(&l).unwrap(),
            r#"[{"poly":[1,1],"partition":[2,1]}]"#
        );
    }

    #[test]
    fn partitions_reverse_lex() {
        assert_eq!(
            partitions(4),
            vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
    }
}
