use std::cmp::Ordering;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::field::{Fe, Field};
use crate::error::{Error, Result};
use crate::numth::{self, BigNat};

const FACTOR_SEED: u64 = 0x5eed_f00d;

/// Polynomial over a finite field, coefficients lowest degree first with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Poly {
    pub coeffs: Vec<Fe>,
}

/// Degree first, then coefficients compared from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![1] }
    }

    pub fn x() -> Poly {
        Poly { coeffs: vec![0, 1] }
    }

    /// X - c.
    pub fn linear(c: Fe, f: &Field) -> Poly {
        Poly::from_coeffs(vec![f.neg(c), 1])
    }

    /// The monic polynomial of degree `d` whose lower coefficients are the
    /// base-q digits of `index`; increasing index is lexicographic order.
    pub fn monic_from_index(mut index: u64, d: usize, q: u64) -> Poly {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push((index % q) as Fe);
            index /= q;
        }
        coeffs.push(1);
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn is_x(&self) -> bool {
        self.coeffs == [0, 1]
    }

    pub fn add(&self, o: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    o.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Poly::from_coeffs(c)
    }

    pub fn sub(&self, o: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                f.sub(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    o.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, c: Fe, f: &Field) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, o: &Poly, f: &Field) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn pow(&self, mut k: u32, f: &Field) -> Poly {
        let mut result = Poly::one();
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&b, f);
            }
            b = b.mul(&b, f);
            k >>= 1;
        }
        result
    }

    /// Quotient and remainder; panics when dividing by zero.
    pub fn divrem(&self, d: &Poly, f: &Field) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lead = f.inv(d.lead());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![0; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], inv_lead);
            if c == 0 {
                continue;
            }
            q[k - dd] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                r[k - dd + i] = f.sub(r[k - dd + i], f.mul(c, di));
            }
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn rem(&self, d: &Poly, f: &Field) -> Poly {
        self.divrem(d, f).1
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.lead()), f)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly, f: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        let p = f.p() as usize;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| {
                let mut acc = 0;
                for _ in 0..(i % p) {
                    acc = f.add(acc, a);
                }
                acc
            })
            .collect();
        Poly::from_coeffs(c)
    }

    pub fn eval(&self, x: Fe, f: &Field) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn mulmod(&self, o: &Poly, m: &Poly, f: &Field) -> Poly {
        self.mul(o, f).rem(m, f)
    }

    pub fn powmod(&self, k: &BigNat, m: &Poly, f: &Field) -> Poly {
        let mut result = Poly::one().rem(m, f);
        let base = self.rem(m, f);
        for i in (0..k.bits()).rev() {
            result = result.mulmod(&result, m, f);
            if k.bit(i) {
                result = result.mulmod(&base, m, f);
            }
        }
        result
    }

    pub fn powmod_u64(&self, k: u64, m: &Poly, f: &Field) -> Poly {
        self.powmod(&BigNat::from(k), m, f)
    }

    /// Irreducibility of a monic polynomial of positive degree, via
    /// gcd(X^(q^k) - X, f) = 1 for k <= deg/2.
    pub fn is_irreducible(&self, f: &Field) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let d = self.degree().unwrap();
        if d == 0 {
            return Err(Error::InvalidParameter("constant polynomial".into()));
        }
        if d == 1 {
            return Ok(true);
        }
        if self.coeffs[0] == 0 {
            return Ok(false);
        }
        let q = f.size() as u64;
        let x = Poly::x();
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = h.powmod_u64(q, self, f);
            let g = h.sub(&x, f).gcd(self, f);
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Multiplicative order of a root: the order of X in GF(q)[X]/(f).
    pub fn order(&self, f: &Field) -> Result<BigNat> {
        if self.is_x() {
            return Err(Error::PolynomialIsX);
        }
        if !self.is_irreducible(f)? {
            return Err(Error::Reducible);
        }
        let d = self.degree().unwrap() as u32;
        let group = numth::pow_u64(f.size() as u64, d) - 1u32;
        let fac = numth::factorize(&group)?;
        let x = Poly::x();
        numth::order_by_reduction(&fac, |k| x.powmod(k, self, f).coeffs == [1])
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by polynomial order. The leading unit is dropped.
    pub fn factor(&self, f: &Field) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let monic = self.monic(f);
        let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for (sf, mult) in squarefree_decomposition(&monic, f) {
            for (deg, part) in distinct_degree(&sf, f) {
                let mut pieces = Vec::new();
                equal_degree(&part, deg, f, &mut rng, &mut pieces);
                out.extend(pieces.into_iter().map(|g| (g, mult)));
            }
        }
        out.sort();
        // Merge duplicates that can appear across square-free layers.
        let mut merged: Vec<(Poly, u32)> = Vec::with_capacity(out.len());
        for (g, m) in out {
            match merged.last_mut() {
                Some((h, k)) if *h == g => *k += m,
                _ => merged.push((g, m)),
            }
        }
        Ok(merged)
    }
}

/// Pairs (g, m): g square-free, each irreducible factor of g occurs with
/// multiplicity exactly m in the input.
fn squarefree_decomposition(a: &Poly, f: &Field) -> Vec<(Poly, u32)> {
    if a.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let p = f.p();
    let d = a.derivative(f);
    if d.is_zero() {
        // a = b(X^p): take the p-th root coefficient-wise.
        let root = pth_root(a, f);
        return squarefree_decomposition(&root, f)
            .into_iter()
            .map(|(g, m)| (g, m * p))
            .collect();
    }
    let mut out = Vec::new();
    let mut c = a.gcd(&d, f);
    let mut w = a.divrem(&c, f).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c, f);
        let z = w.divrem(&y, f).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(f), i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w, f).0;
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = pth_root(&c, f);
        out.extend(
            squarefree_decomposition(&root, f)
                .into_iter()
                .map(|(g, m)| (g, m * p)),
        );
    }
    out
}

fn pth_root(a: &Poly, f: &Field) -> Poly {
    let p = f.p() as usize;
    // x -> x^(q/p) inverts the Frobenius x -> x^p on GF(q).
    let k = f.size() as u64 / p as u64;
    let c = a
        .coeffs
        .iter()
        .step_by(p)
        .map(|&c| f.pow(c, k))
        .collect();
    Poly::from_coeffs(c)
}

fn distinct_degree(a: &Poly, f: &Field) -> Vec<(usize, Poly)> {
    let q = f.size() as u64;
    let x = Poly::x();
    let mut out = Vec::new();
    let mut rest = a.clone();
    let mut h = x.clone();
    let mut d = 1;
    while let Some(deg) = rest.degree() {
        if deg < 2 * d {
            if deg > 0 {
                out.push((deg, rest.clone()));
            }
            break;
        }
        h = h.powmod_u64(q, &rest, f);
        let g = h.sub(&x, f).gcd(&rest, f);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.divrem(&g, f).0;
            h = h.rem(&rest, f);
            out.push((d, g));
        }
        d += 1;
    }
    out
}

fn equal_degree(a: &Poly, d: usize, f: &Field, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = a.degree().unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(a.monic(f));
        return;
    }
    let q = f.size() as u64;
    loop {
        let r = Poly::from_coeffs((0..n).map(|_| rng.random_range(0..f.size())).collect());
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if q % 2 == 1 {
            // r^((q^d - 1)/2) - 1
            let e = (numth::pow_u64(q, d as u32) - 1u32) / 2u32;
            r.powmod(&e, a, f).sub(&Poly::one(), f)
        } else {
            // Trace map r + r^2 + ... + r^(2^(kd - 1)) for q = 2^k.
            let k = f.size().trailing_zeros() as usize;
            let mut t = r.rem(a, f);
            let mut acc = t.clone();
            for _ in 1..k * d {
                t = t.mulmod(&t, a, f);
                acc = acc.add(&t, f);
            }
            acc
        };
        let g = candidate.gcd(a, f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = a.divrem(&g, f).0;
            equal_degree(&g, d, f, rng, out);
            equal_degree(&h, d, f, rng, out);
            return;
        }
    }
}

/// All monic irreducible polynomials of degree `d`, optionally without X,
/// in lexicographic order.
pub fn enumerate_irreducibles(f: &Field, d: usize, exclude_x: bool) -> Result<Vec<Poly>> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be >= 1".into()));
    }
    let q = f.size() as u64;
    let total = numth::pow_u64(q, d as u32);
    let limit = crate::limits::current().max_poly_scan;
    if total > BigNat::from(limit) {
        return Err(Error::limit("monic polynomials to scan", total, limit));
    }
    let count = q.pow(d as u32);
    let mut out: Vec<Poly> = (0..count)
        .map(|t| Poly::monic_from_index(t, d, q))
        .filter(|g| g.is_irreducible(f).unwrap())
        .collect();
    if exclude_x && d == 1 {
        out.retain(|g| !g.is_x());
    }
    Ok(out)
}

/// Number of monic irreducibles of degree d: (1/d) sum_{e | d} mu(e) q^(d/e).
pub fn necklace_count(q: u64, d: u32) -> BigNat {
    let mut pos = BigNat::zero();
    let mut neg = BigNat::zero();
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let term = numth::pow_u64(q, d / e);
        match numth::mobius(e as u64) {
            1 => pos += term,
            -1 => neg += term,
            _ => {}
        }
    }
    (pos - neg) / BigNat::from(d)
}

pub fn product_of_factors(factors: &[(Poly, u32)], f: &Field) -> Poly {
    factors
        .iter()
        .fold(Poly::one(), |acc, (g, m)| acc.mul(&g.pow(*m, f), f))
}

impl Poly {
    /// Companion matrix entries (row-major) for a monic polynomial of degree n:
    /// subdiagonal ones and last column -c_0, ..., -c_{n-1}.
    pub fn companion_entries(&self, f: &Field) -> Vec<Fe> {
        let n = self.degree().expect("nonzero");
        let mut m = vec![0; n * n];
        for i in 1..n {
            m[i * n + (i - 1)] = 1;
        }
        for i in 0..n {
            m[i * n + (n - 1)] = f.neg(self.coeffs[i]);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;

    fn p(c: &[Fe]) -> Poly {
        Poly::from_coeffs(c.to_vec())
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert!(p(&[1, 1, 1]).is_irreducible(&f2).unwrap());
        assert!(!p(&[1, 0, 1]).is_irreducible(&f2).unwrap());
        assert!(p(&[1, 1, 0, 1]).is_irreducible(&f2).unwrap());
        assert_eq!(p(&[1, 1, 2]).is_irreducible(&make_field(3, 1).unwrap()), Err(Error::NotMonic));
    }

    #[test]
    fn enumeration_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(enumerate_irreducibles(&f2, 2, true).unwrap(), vec![p(&[1, 1, 1])]);
        assert_eq!(enumerate_irreducibles(&f2, 4, true).unwrap().len(), 3);
        assert_eq!(enumerate_irreducibles(&f2, 1, true).unwrap(), vec![p(&[1, 1])]);
        assert_eq!(enumerate_irreducibles(&f2, 1, false).unwrap().len(), 2);
    }

    #[test]
    fn enumeration_matches_necklace_count() {
        for (pp, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)] {
            let f = make_field(pp, e).unwrap();
            let q = f.size() as u64;
            for d in 1..=6u32 {
                if q.pow(d) > 20_000 {
                    break;
                }
                let list = enumerate_irreducibles(&f, d as usize, false).unwrap();
                assert_eq!(BigNat::from(list.len()), necklace_count(q, d), "q={q} d={d}");
                assert!(list.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn order_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(p(&[1, 1]).order(&f2).unwrap(), BigNat::from(1u32));
        assert_eq!(p(&[1, 1, 1]).order(&f2).unwrap(), BigNat::from(3u32));
        assert_eq!(p(&[1, 1, 1, 1, 1]).order(&f2).unwrap(), BigNat::from(5u32));
        assert_eq!(p(&[1, 0, 1]).order(&f2), Err(Error::Reducible));
        assert_eq!(Poly::x().order(&f2), Err(Error::PolynomialIsX));
    }

    #[test]
    fn primitive_counts() {
        // Exactly phi(q^d - 1)/d irreducibles of degree d have order q^d - 1,
        // and every order divides q^d - 1.
        for (pp, e, d) in [(2u64, 1u32, 4u32), (2, 1, 6), (3, 1, 4), (2, 2, 3), (5, 1, 3), (2, 1, 8)] {
            let f = make_field(pp, e).unwrap();
            let q = f.size() as u64;
            let group = numth::pow_u64(q, d) - 1u32;
            let list = enumerate_irreducibles(&f, d as usize, true).unwrap();
            let mut primitive = 0u64;
            for g in &list {
                let o = g.order(&f).unwrap();
                assert!((&group % &o).is_zero());
                if o == group {
                    primitive += 1;
                }
            }
            let phi = numth::euler_phi(&group).unwrap();
            assert_eq!(BigNat::from(primitive) * BigNat::from(d), phi);
        }
    }

    #[test]
    fn factor_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(p(&[1, 0, 1]).factor(&f2).unwrap(), vec![(p(&[1, 1]), 2)]);
        let prod = p(&[1, 1, 1]).mul(&p(&[1, 1]), &f2);
        assert_eq!(
            prod.factor(&f2).unwrap(),
            vec![(p(&[1, 1]), 1), (p(&[1, 1, 1]), 1)]
        );
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(Poly::x().factor(&f3).unwrap(), vec![(Poly::x(), 1)]);
        assert_eq!(Poly::zero().factor(&f3), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn factor_random_polynomials_multiplies_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (pp, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let f = make_field(pp, e).unwrap();
            for _ in 0..10_000 {
                let deg = rng.random_range(1..=9usize);
                let mut c: Vec<Fe> = (0..deg).map(|_| rng.random_range(0..f.size())).collect();
                c.push(rng.random_range(1..f.size()));
                let a = Poly::from_coeffs(c);
                let fac = a.factor(&f).unwrap();
                for (g, _) in &fac {
                    assert!(g.is_irreducible(&f).unwrap());
                }
                assert_eq!(product_of_factors(&fac, &f), a.monic(&f));
            }
        }
    }

    #[test]
    fn high_multiplicity_in_characteristic_p() {
        let f3 = make_field(3, 1).unwrap();
        let a = p(&[1, 1]).pow(9, &f3).mul(&p(&[1, 0, 1]).pow(4, &f3), &f3);
        assert_eq!(
            a.factor(&f3).unwrap(),
            vec![(p(&[1, 1]), 9), (p(&[1, 0, 1]), 4)]
        );
    }
}
