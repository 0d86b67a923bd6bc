//! Exact checks of the second-moment argument on small groups given by
//! multiplication tables.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::Field;
use crate::limits;
use crate::matgrp::{standard_generators, GroupKind, Matrix};
use crate::numth::{self, BigNat, BigRational};

/// A finite group on the indices 0..order with identity 0.
#[derive(Debug, Clone)]
pub struct SmallGroup {
    pub name: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    orders: Vec<u64>,
}

impl SmallGroup {
    /// Closes `gens` under multiplication; element 0 is the identity.
    pub fn from_generators<T, M>(name: &str, identity: T, gens: &[T], mul: M) -> Result<(SmallGroup, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        M: Fn(&T, &T) -> T,
    {
        let cap = limits::current().max_group_elements.min(20_000) as usize;
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<T, u32> = HashMap::from([(identity, 0)]);
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let y = mul(&elements[i], g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::limit("small group elements", elements.len() + 1, cap as u64));
                    }
                    index.insert(y.clone(), elements.len() as u32);
                    elements.push(y);
                }
            }
            i += 1;
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for (a, x) in elements.iter().enumerate() {
            for (b, y) in elements.iter().enumerate() {
                table[a * n + b] = index[&mul(x, y)];
            }
        }
        Ok((SmallGroup::from_table(name, table)?, elements))
    }

    pub fn from_table(name: &str, table: Vec<u32>) -> Result<SmallGroup> {
        let n = (table.len() as f64).sqrt() as usize;
        if n * n != table.len() || n == 0 {
            return Err(Error::InvalidParameter("multiplication table is not square".into()));
        }
        if (0..n).any(|a| table[a * n] != a as u32 || table[a] != a as u32) {
            return Err(Error::InvalidParameter("element 0 must be the identity".into()));
        }
        let mut inverses = vec![u32::MAX; n];
        for a in 0..n {
            let b = (0..n).find(|&b| table[a * n + b] == 0).ok_or_else(|| {
                Error::InvalidParameter(format!("element {a} has no inverse"))
            })?;
            inverses[a] = b as u32;
        }
        let orders = (0..n)
            .map(|a| {
                let mut x = a as u32;
                let mut k = 1;
                while x != 0 {
                    x = table[x as usize * n + a];
                    k += 1;
                }
                k
            })
            .collect();
        Ok(SmallGroup {
            name: name.to_string(),
            order: n,
            table,
            inverses,
            orders,
        })
    }

    pub fn cyclic(n: usize) -> Result<SmallGroup> {
        if n == 0 {
            return Err(Error::NonPositive("n"));
        }
        let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        SmallGroup::from_table(&format!("C{n}"), table)
    }

    pub fn from_matrices(name: &str, gens: &[Matrix], field: &Field) -> Result<SmallGroup> {
        let n = gens
            .first()
            .map(Matrix::n)
            .ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
        for g in gens {
            if g.n() != n {
                return Err(Error::DimensionMismatch("generators differ in size".into()));
            }
            if !g.is_invertible(field) {
                return Err(Error::SingularMatrix);
            }
        }
        Ok(SmallGroup::from_generators(name, Matrix::identity(n), gens, |a, b| a.mul(b, field))?.0)
    }

    pub fn from_permutations(name: &str, gens: &[Vec<u32>]) -> Result<SmallGroup> {
        let degree = gens.first().map(Vec::len).unwrap_or(0);
        let identity: Vec<u32> = (0..degree as u32).collect();
        let compose = |a: &Vec<u32>, b: &Vec<u32>| a.iter().map(|&x| b[x as usize]).collect::<Vec<u32>>();
        Ok(SmallGroup::from_generators(name, identity, gens, compose)?.0)
    }

    /// C<n>, S3 (as GL(2,2)), D4 (symmetries of a square), SL(2,q) and
    /// GL(2,q) for small q.
    pub fn named(name: &str) -> Result<SmallGroup> {
        let upper = name.to_ascii_uppercase().replace([' ', '(', ')', ','], "");
        if let Some(k) = upper.strip_prefix('C') {
            let n: usize = k
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("unknown group {name:?}")))?;
            return SmallGroup::cyclic(n);
        }
        let linear = |kind: GroupKind, n: usize, q: u64| -> Result<SmallGroup> {
            let field = crate::ff::field_of_order(q)?;
            let gens = standard_generators(kind, n, &field)?;
            if gens.is_empty() {
                return SmallGroup::cyclic(1);
            }
            SmallGroup::from_matrices(&format!("{}({n},{q})", kind.name()), &gens, &field)
        };
        match upper.as_str() {
            "S3" => linear(GroupKind::GL, 2, 2).map(|g| g.renamed("S3")),
            "D4" => SmallGroup::from_permutations("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]),
            _ => {
                let (kind, rest) = if let Some(r) = upper.strip_prefix("SL") {
                    (GroupKind::SL, r)
                } else if let Some(r) = upper.strip_prefix("GL") {
                    (GroupKind::GL, r)
                } else {
                    return Err(Error::InvalidParameter(format!("unknown group {name:?}")));
                };
                // SL23 means SL(2,3); the dimension is a single digit
                let (n, q) = rest.split_at(1.min(rest.len()));
                let n: usize = n.parse().map_err(|_| Error::InvalidParameter(format!("unknown group {name:?}")))?;
                let q: u64 = q.parse().map_err(|_| Error::InvalidParameter(format!("unknown group {name:?}")))?;
                linear(kind, n, q)
            }
        }
    }

    fn renamed(mut self, name: &str) -> SmallGroup {
        self.name = name.to_string();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        0
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn element_order(&self, a: u32) -> u64 {
        self.orders[a as usize]
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| acc / numth::gcd_u64(acc, o) * o)
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let k = k % self.element_order(a);
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let n = self.order;
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n as u32 {
            if seen[x as usize] {
                continue;
            }
            let mut class: Vec<u32> = (0..n as u32)
                .map(|g| self.mul(self.mul(g, x), self.inverse(g)))
                .collect::<HashSet<u32>>()
                .into_iter()
                .collect();
            class.sort_unstable();
            for &y in &class {
                seen[y as usize] = true;
            }
            classes.push(class);
        }
        classes
    }

    pub fn is_conjugation_invariant(&self, set: &[bool]) -> bool {
        (0..self.order as u32).all(|x| {
            !set[x as usize]
                || (0..self.order as u32).all(|g| set[self.mul(self.mul(g, x), self.inverse(g)) as usize])
        })
    }

    /// Subgroup generated by `gens` as a membership mask.
    pub fn closure(&self, gens: &[u32]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut queue = vec![0u32];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    queue.push(y);
                }
            }
            i += 1;
        }
        mask
    }
}

/// eta(g) = sum of 1/ord(s) over the s whose cyclic subgroup contains g,
/// stored over the common denominator exponent(G).
#[derive(Debug, Clone)]
pub struct ClassFunctionEta {
    numerators: Vec<u64>,
    denominator: u64,
}

impl ClassFunctionEta {
    pub fn value(&self, g: u32) -> BigRational {
        numth::ratio(&BigNat::from(self.numerators[g as usize]), &BigNat::from(self.denominator))
    }

    pub fn values(&self) -> Vec<BigRational> {
        (0..self.numerators.len() as u32).map(|g| self.value(g)).collect()
    }
}

pub fn eta_class_function(group: &SmallGroup) -> Result<ClassFunctionEta> {
    let cap = 10_000u64;
    if group.order() as u64 > cap {
        return Err(Error::limit("group order for the eta class function", group.order(), cap));
    }
    let exponent = group.exponent();
    let mut numerators = vec![0u64; group.order()];
    for s in 0..group.order() as u32 {
        let ord = group.element_order(s);
        let weight = exponent / ord;
        let mut x = 0;
        for _ in 0..ord {
            numerators[x as usize] += weight;
            x = group.mul(x, s);
        }
    }
    Ok(ClassFunctionEta {
        numerators,
        denominator: exponent,
    })
}

/// Number of s with s^i = x.
pub fn power_count(group: &SmallGroup, i: u64, x: u32) -> Result<u64> {
    if i == 0 {
        return Err(Error::NonPositive("i"));
    }
    Ok((0..group.order() as u32).filter(|&s| group.pow(s, i) == x).count() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedPowerSum {
    /// sum_{i=1}^{N} 2 (N - i) r_i(x)
    #[serde(serialize_with = "crate::numth::serialize_big")]
    pub sum: BigNat,
    /// N^2 eta(x)
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub target: BigRational,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub gap: BigRational,
    /// 2 |G| N
    pub envelope: u64,
}

impl WeightedPowerSum {
    pub fn within_envelope(&self) -> bool {
        self.gap <= BigRational::from_integer(self.envelope.into())
    }
}

pub fn weighted_power_sum_check(group: &SmallGroup, x: u32, n: u64) -> Result<WeightedPowerSum> {
    if n == 0 {
        return Err(Error::NonPositive("N"));
    }
    let eta = eta_class_function(group)?;
    let mut sum = BigNat::zero();
    for s in 0..group.order() as u32 {
        let ord = group.element_order(s);
        let powers: Vec<u32> = (0..ord).scan(0u32, |acc, _| {
            let cur = *acc;
            *acc = group.mul(*acc, s);
            Some(cur)
        }).collect();
        for i in 1..n {
            if powers[(i % ord) as usize] == x {
                sum += 2 * (n - i);
            }
        }
    }
    let target = eta.value(x) * BigRational::from_integer((n * n).into());
    let gap = (BigRational::from_integer(BigInt::from(sum.clone())) - &target).abs();
    Ok(WeightedPowerSum {
        sum,
        target,
        gap,
        envelope: 2 * group.order() as u64 * n,
    })
}

fn check_subset(group: &SmallGroup, subset: &[bool]) -> Result<()> {
    if subset.len() != group.order() {
        return Err(Error::DimensionMismatch("subset mask has the wrong length".into()));
    }
    if !subset.iter().any(|&b| b) {
        return Err(Error::EmptySet);
    }
    if !group.is_conjugation_invariant(subset) {
        return Err(Error::NotConjugationInvariant);
    }
    Ok(())
}

/// (1/|C|^2) sum_{p, g in C} eta(p^-1 g) - 1.
pub fn second_moment_limit(group: &SmallGroup, subset: &[bool]) -> Result<BigRational> {
    check_subset(group, subset)?;
    let eta = eta_class_function(group)?;
    let members: Vec<u32> = (0..group.order() as u32).filter(|&g| subset[g as usize]).collect();
    let mut total = BigNat::zero();
    for &p in &members {
        let pinv = group.inverse(p);
        let row: u64 = members.iter().map(|&g| eta.numerators[group.mul(pinv, g) as usize]).sum();
        total += row;
    }
    let c = members.len() as u64;
    Ok(numth::ratio(&total, &BigNat::from(c * c * eta.denominator)) - BigRational::one())
}

/// Every subgroup generated by a pair of elements, with the number of
/// ordered pairs generating it.
#[derive(Debug, Clone)]
pub struct PairCensus {
    order: usize,
    subgroups: Vec<(Vec<bool>, u64)>,
}

impl PairCensus {
    pub fn new(group: &SmallGroup) -> Result<PairCensus> {
        let cap = limits::current().max_pair_group;
        if group.order() as u64 > cap {
            return Err(Error::limit("group order for all-pairs closure", group.order(), cap));
        }
        let n = group.order() as u32;
        let memo: Mutex<HashMap<(u32, u32), usize>> = Mutex::new(HashMap::new());
        let found: Mutex<(HashMap<Vec<bool>, usize>, Vec<(Vec<bool>, u64)>)> =
            Mutex::new((HashMap::new(), Vec::new()));
        (0..n).into_par_iter().for_each(|a| {
            let mut local: HashMap<usize, u64> = HashMap::new();
            for b in 0..n {
                let key = (a.min(b), a.max(b));
                let cached = memo.lock().unwrap().get(&key).copied();
                let id = match cached {
                    Some(id) => id,
                    None => {
                        let mask = group.closure(&[a, b]);
                        let mut guard = found.lock().unwrap();
                        let (index, list) = &mut *guard;
                        let id = *index.entry(mask.clone()).or_insert_with(|| {
                            list.push((mask, 0));
                            list.len() - 1
                        });
                        drop(guard);
                        memo.lock().unwrap().insert(key, id);
                        id
                    }
                };
                *local.entry(id).or_default() += 1;
            }
            let mut guard = found.lock().unwrap();
            for (id, c) in local {
                guard.1[id].1 += c;
            }
        });
        let mut subgroups = found.into_inner().unwrap().1;
        subgroups.sort();
        Ok(PairCensus {
            order: group.order(),
            subgroups,
        })
    }

    pub fn subgroups(&self) -> &[(Vec<bool>, u64)] {
        &self.subgroups
    }

    /// Probability that a uniform pair generates a subgroup disjoint from the set.
    pub fn miss_probability(&self, subset: &[bool]) -> BigRational {
        let missing: u64 = self
            .subgroups
            .iter()
            .filter(|(mask, _)| !mask.iter().zip(subset).any(|(&a, &b)| a && b))
            .map(|(_, c)| c)
            .sum();
        let total = (self.order * self.order) as u64;
        numth::ratio(&BigNat::from(missing), &BigNat::from(total))
    }

    /// Probability that a uniform pair generates the whole group.
    pub fn generation_probability(&self) -> BigRational {
        let full: u64 = self
            .subgroups
            .iter()
            .filter(|(mask, _)| mask.iter().all(|&b| b))
            .map(|(_, c)| c)
            .sum();
        let total = (self.order * self.order) as u64;
        numth::ratio(&BigNat::from(full), &BigNat::from(total))
    }
}

pub fn miss_probability(group: &SmallGroup, subset: &[bool]) -> Result<BigRational> {
    check_subset(group, subset)?;
    Ok(PairCensus::new(group)?.miss_probability(subset))
}

/// Mask of the union of the given conjugacy classes.
pub fn union_mask(group: &SmallGroup, classes: &[&[u32]]) -> Vec<bool> {
    let mut mask = vec![false; group.order()];
    for class in classes {
        for &x in *class {
            mask[x as usize] = true;
        }
    }
    mask
}

/// Mask of all elements of the given order.
pub fn order_mask(group: &SmallGroup, order: u64) -> Vec<bool> {
    (0..group.order() as u32).map(|g| group.element_order(g) == order).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiSigmaReport {
    pub group: String,
    pub group_order: usize,
    pub subset_size: usize,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub miss_probability: BigRational,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub second_moment_limit: BigRational,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub eta_at_identity: BigRational,
}

pub fn pisigma_report(group: &SmallGroup, subset: &[bool]) -> Result<PiSigmaReport> {
    Ok(PiSigmaReport {
        group: group.name.clone(),
        group_order: group.order(),
        subset_size: subset.iter().filter(|&&b| b).count(),
        miss_probability: miss_probability(group, subset)?,
        second_moment_limit: second_moment_limit(group, subset)?,
        eta_at_identity: eta_class_function(group)?.value(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn named_groups() {
        for (name, order, classes) in [
            ("C1", 1, 1),
            ("C2", 2, 2),
            ("C6", 6, 6),
            ("S3", 6, 3),
            ("D4", 8, 5),
            ("SL(2,3)", 24, 7),
            ("SL(2,5)", 120, 9),
        ] {
            let g = SmallGroup::named(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert_eq!(g.conjugacy_classes().len(), classes, "{name}");
            // associativity spot check
            for a in 0..order.min(12) as u32 {
                for b in 0..order.min(12) as u32 {
                    for c in 0..order.min(12) as u32 {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
        assert!(SmallGroup::named("Q8").is_err());
    }

    #[test]
    fn eta_examples() {
        let c2 = SmallGroup::cyclic(2).unwrap();
        let eta = eta_class_function(&c2).unwrap();
        assert_eq!(eta.value(0), r(3, 2));
        assert_eq!(eta.value(1), r(1, 2));
        let trivial = SmallGroup::cyclic(1).unwrap();
        assert_eq!(eta_class_function(&trivial).unwrap().value(0), r(1, 1));
        let s3 = SmallGroup::named("S3").unwrap();
        assert_eq!(eta_class_function(&s3).unwrap().value(0), r(19, 6));
    }

    #[test]
    fn eta_constant_on_classes() {
        for name in ["S3", "D4", "SL(2,3)", "SL(2,5)"] {
            let g = SmallGroup::named(name).unwrap();
            let eta = eta_class_function(&g).unwrap();
            for class in g.conjugacy_classes() {
                let v = eta.value(class[0]);
                assert!(class.iter().all(|&x| eta.value(x) == v));
            }
        }
    }

    #[test]
    fn power_count_examples() {
        let c2 = SmallGroup::cyclic(2).unwrap();
        assert_eq!(power_count(&c2, 2, 0).unwrap(), 2);
        let g = SmallGroup::named("SL(2,3)").unwrap();
        for x in 0..24 {
            assert_eq!(power_count(&g, 1, x).unwrap(), 1);
        }
        let c4 = SmallGroup::cyclic(4).unwrap();
        assert_eq!(power_count(&c4, 2, c4.mul(1, 1)).unwrap(), 2);
        assert!(power_count(&c4, 0, 0).is_err());
    }

    #[test]
    fn weighted_power_sum_examples() {
        let c2 = SmallGroup::cyclic(2).unwrap();
        let w = weighted_power_sum_check(&c2, 0, 2).unwrap();
        assert_eq!(w.sum, BigNat::from(2u32));
        assert_eq!(w.target, r(6, 1));
        assert_eq!(w.gap, r(4, 1));
        assert!(w.within_envelope());
        let trivial = SmallGroup::cyclic(1).unwrap();
        for n in [1u64, 5, 40] {
            let w = weighted_power_sum_check(&trivial, 0, n).unwrap();
            assert_eq!(w.sum, BigNat::from(n * n - n));
            assert_eq!(w.gap, r(n as i64, 1));
        }
        let w = weighted_power_sum_check(&c2, 1, 100).unwrap();
        assert!(w.gap <= r(200, 1));
    }

    #[test]
    fn weighted_power_sum_linear_gap() {
        for name in ["C6", "S3", "D4", "SL(2,3)"] {
            let g = SmallGroup::named(name).unwrap();
            let e = g.exponent();
            for x in 0..g.order() as u32 {
                for k in [1u64, 3, 10] {
                    assert!(weighted_power_sum_check(&g, x, k * e).unwrap().within_envelope());
                }
            }
        }
    }

    #[test]
    fn c2_worked_instance() {
        let c2 = SmallGroup::cyclic(2).unwrap();
        let c = vec![false, true];
        assert_eq!(miss_probability(&c2, &c).unwrap(), r(1, 4));
        assert_eq!(second_moment_limit(&c2, &c).unwrap(), r(1, 2));
    }

    #[test]
    fn subset_errors() {
        let s3 = SmallGroup::named("S3").unwrap();
        assert!(matches!(second_moment_limit(&s3, &[false; 6]), Err(Error::EmptySet)));
        let mut one = vec![false; 6];
        let involution = (0..6).find(|&g| s3.element_order(g) == 2).unwrap();
        one[involution as usize] = true;
        assert!(matches!(
            second_moment_limit(&s3, &one),
            Err(Error::NotConjugationInvariant)
        ));
    }

    #[test]
    fn identity_in_subset_never_missed() {
        let g = SmallGroup::named("D4").unwrap();
        let mut mask = vec![false; 8];
        mask[0] = true;
        assert!(miss_probability(&g, &mask).unwrap().is_zero());
        let all = vec![true; 8];
        assert!(second_moment_limit(&g, &all).unwrap() >= BigRational::zero());
    }

    #[test]
    fn orthogonality_surrogate() {
        let g = SmallGroup::named("SL(2,3)").unwrap();
        for class in g.conjugacy_classes() {
            let mask = union_mask(&g, &[&class]);
            let mut total = BigRational::zero();
            for &p in &class {
                let hits = (0..g.order() as u32).filter(|&x| mask[g.mul(p, x) as usize]).count();
                total += r(hits as i64, g.order() as i64);
            }
            assert_eq!(total / r(class.len() as i64, 1), r(class.len() as i64, g.order() as i64));
        }
    }

    #[test]
    fn census_counts_every_pair() {
        for name in ["S3", "D4", "SL(2,3)"] {
            let g = SmallGroup::named(name).unwrap();
            let census = PairCensus::new(&g).unwrap();
            let total: u64 = census.subgroups().iter().map(|(_, c)| c).sum();
            assert_eq!(total as usize, g.order() * g.order());
        }
        // S3 is generated by pairs containing a transposition and a
        // different non-identity element: 18 of 36 ordered pairs.
        let s3 = SmallGroup::named("S3").unwrap();
        assert_eq!(PairCensus::new(&s3).unwrap().generation_probability(), r(1, 2));
    }

    #[test]
    fn sl23_order_six_class() {
        let g = SmallGroup::named("SL(2,3)").unwrap();
        let class = g
            .conjugacy_classes()
            .into_iter()
            .find(|c| g.element_order(c[0]) == 6)
            .unwrap();
        let mask = union_mask(&g, &[&class]);
        let miss = miss_probability(&g, &mask).unwrap();
        let limit = second_moment_limit(&g, &mask).unwrap();
        assert!(miss <= limit);
        assert!(miss > BigRational::zero());
    }
}
