use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::limits;
use crate::numth::{self, BigNat};

/// Field element: the canonical integer encoding of its coefficient vector.
///
/// For GF(p) this is the residue. For an extension of degree d over a base of
/// size b, the element sum c_i X^i is encoded as sum c_i b^i with each c_i the
/// base encoding. Unfolding the tower, the encoding is the list of base-p
/// digits, so addition is digit-wise mod p at every level.
pub type Fe = u32;

/// A finite field GF(p^e) or an extension GF(q^d) layered over a smaller field.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u32,
    size: u32,
    /// Number of base-p digits in an encoding.
    digits: u32,
    base: Option<Field>,
    degree: u32,
    modulus: Poly,
    primitive: Fe,
    exp: Vec<Fe>,
    log: Vec<u32>,
    add_table: Option<Vec<Fe>>,
}

/// Serializable description of a field, recorded in output metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u32,
    pub size: u32,
    pub degree_over_base: u32,
    pub base_size: u32,
    /// Modulus over the base field, lowest degree first.
    pub modulus: Vec<u32>,
    pub primitive_element: u32,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.size == other.0.size
                && self.0.modulus == other.0.modulus
                && self.0.base == other.0.base)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.size)?;
        if let Some(b) = &self.0.base {
            write!(f, "/GF({}) mod {:?}", b.size(), self.0.modulus.coeffs)?;
        }
        Ok(())
    }
}

/// Builds GF(p^e) with the lexicographically smallest monic irreducible
/// modulus of degree e over GF(p).
pub fn make_field(p: u64, e: u32) -> Result<Field> {
    if e < 1 {
        return Err(Error::InvalidParameter("field degree e must be >= 1".into()));
    }
    if p < 2 || !numth::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let size = numth::pow_u64(p, e);
    let limit = limits::current().max_field_size;
    if size > BigNat::from(limit) {
        return Err(Error::limit("field size", size, limit));
    }
    let prime = Field::prime(p as u32);
    prime.extension(e)
}

/// GF(q) for a prime power q.
pub fn field_of_order(q: u64) -> Result<Field> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} is not a prime power")));
    }
    let f = numth::factorize(&BigNat::from(q))?;
    if f.prime_powers.len() != 1 {
        return Err(Error::InvalidParameter(format!("q = {q} is not a prime power")));
    }
    let (p, e) = &f.prime_powers[0];
    make_field(p.to_u64().unwrap(), *e)
}

impl Field {
    fn prime(p: u32) -> Field {
        let size = p;
        let exp_len = (p - 1) as usize;
        let phi_fac = numth::factorize(&BigNat::from(p - 1)).unwrap();
        let primitive = (1..p)
            .find(|&g| {
                p == 2
                    || phi_fac.primes().all(|r| {
                        let k = (p - 1) / r.to_u32().unwrap();
                        modpow(g as u64, k as u64, p as u64) != 1
                    })
            })
            .unwrap();
        let mut exp = Vec::with_capacity(exp_len);
        let mut log = vec![0u32; size as usize];
        let mut x = 1u64;
        for i in 0..exp_len {
            exp.push(x as u32);
            log[x as usize] = i as u32;
            x = x * primitive as u64 % p as u64;
        }
        Field(Arc::new(Inner {
            p,
            size,
            digits: 1,
            base: None,
            degree: 1,
            modulus: Poly::from_coeffs(vec![0, 1]),
            primitive,
            exp,
            log,
            add_table: None,
        }))
    }

    /// GF(size^d) over this field, using the lexicographically smallest monic
    /// irreducible polynomial of degree d as modulus. Degree 1 returns `self`.
    pub fn extension(&self, d: u32) -> Result<Field> {
        if d < 1 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        if d == 1 {
            return Ok(self.clone());
        }
        let big_size = numth::pow_u64(self.size() as u64, d);
        let limit = limits::current().max_field_size;
        if big_size > BigNat::from(limit) {
            return Err(Error::limit("field size", big_size, limit));
        }
        let size = big_size.to_u32().unwrap();
        let modulus = self.smallest_irreducible(d);
        Ok(Field::build_extension(self.clone(), d, modulus, size))
    }

    /// Extension with an explicitly supplied monic irreducible modulus.
    pub fn extension_with_modulus(&self, modulus: Poly) -> Result<Field> {
        if !modulus.is_monic() {
            return Err(Error::NotMonic);
        }
        let d = modulus.degree().ok_or(Error::ZeroPolynomial)? as u32;
        if d == 0 || !modulus.is_irreducible(self)? {
            return Err(Error::Reducible);
        }
        let big_size = numth::pow_u64(self.size() as u64, d);
        let limit = limits::current().max_field_size;
        if big_size > BigNat::from(limit) {
            return Err(Error::limit("field size", big_size, limit));
        }
        Ok(Field::build_extension(
            self.clone(),
            d,
            modulus,
            big_size.to_u32().unwrap(),
        ))
    }

    fn smallest_irreducible(&self, d: u32) -> Poly {
        let q = self.size() as u64;
        let count = q.pow(d);
        (0..count)
            .map(|t| Poly::monic_from_index(t, d as usize, q))
            .find(|f| f.is_irreducible(self).unwrap())
            .expect("irreducible polynomials exist in every degree")
    }

    fn build_extension(base: Field, d: u32, modulus: Poly, size: u32) -> Field {
        let p = base.p();
        let digits = base.0.digits * d;
        let add_table = build_add_table(p, size, digits);
        let mut inner = Inner {
            p,
            size,
            digits,
            base: Some(base),
            degree: d,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
            add_table,
        };
        let order = BigNat::from(size - 1);
        let fac = numth::factorize(&order).unwrap();
        let primitive = (2..size)
            .find(|&g| {
                fac.primes().all(|r| {
                    let k = (size - 1) / r.to_u32().unwrap();
                    inner.slow_pow(g, k) != 1
                })
            })
            .unwrap_or(1);
        let mut exp = Vec::with_capacity((size - 1) as usize);
        let mut log = vec![0u32; size as usize];
        let mut x: Fe = 1;
        for i in 0..size - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = inner.slow_mul(x, primitive);
        }
        inner.primitive = primitive;
        inner.exp = exp;
        inner.log = log;
        Field(Arc::new(inner))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn base(&self) -> Option<&Field> {
        self.0.base.as_ref()
    }

    pub fn degree_over_base(&self) -> u32 {
        self.0.degree
    }

    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }

    /// Generator of the multiplicative group used for the log tables.
    pub fn primitive_element(&self) -> Fe {
        self.0.primitive
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p(),
            size: self.size(),
            degree_over_base: self.0.degree,
            base_size: self.0.base.as_ref().map_or(self.p(), |b| b.size()),
            modulus: self.0.modulus.coeffs.clone(),
            primitive_element: self.0.primitive,
        }
    }

    pub fn zero(&self) -> Fe {
        0
    }

    pub fn one(&self) -> Fe {
        1
    }

    pub fn elements(&self) -> std::ops::Range<Fe> {
        0..self.size()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.0.add(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.0.neg(a)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.0.add(a, self.0.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.0;
        if inner.base.is_none() {
            return ((a as u64 * b as u64) % inner.p as u64) as Fe;
        }
        let n = inner.exp.len() as u32;
        let s = inner.log[a as usize] + inner.log[b as usize];
        inner.exp[(if s >= n { s - n } else { s }) as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero");
        let inner = &*self.0;
        let n = inner.exp.len() as u32;
        let l = inner.log[a as usize];
        inner.exp[(if l == 0 { 0 } else { n - l }) as usize]
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let n = self.0.exp.len() as u64;
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (k % n)) % n) as usize]
    }

    pub fn pow_big(&self, a: Fe, k: &BigNat) -> Fe {
        let n = self.0.exp.len() as u64;
        let r = (k % BigNat::from(n)).to_u64().unwrap();
        if a == 0 {
            return if k == &BigNat::from(0u32) { 1 } else { 0 };
        }
        self.pow(a, r)
    }

    /// Discrete logarithm to the base of [`Field::primitive_element`].
    pub fn log(&self, a: Fe) -> Option<u32> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    pub fn exp(&self, k: u64) -> Fe {
        let n = self.0.exp.len() as u64;
        self.0.exp[(k % n) as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        assert!(a != 0);
        let n = self.0.exp.len() as u64;
        let l = self.0.log[a as usize] as u64;
        n / numth::gcd_u64(n, l)
    }

    /// Coefficients over the immediate base field, lowest first.
    pub fn to_coeffs(&self, a: Fe) -> Vec<Fe> {
        let b = self.base_size() as u32;
        let mut out = Vec::with_capacity(self.0.degree as usize);
        let mut a = a;
        for _ in 0..self.0.degree {
            out.push(a % b);
            a /= b;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[Fe]) -> Fe {
        let b = self.base_size() as u32;
        coeffs.iter().rev().fold(0, |acc, &c| acc * b + c)
    }

    fn base_size(&self) -> u64 {
        self.0.base.as_ref().map_or(self.p() as u64, |b| b.size() as u64)
    }

    /// Relative trace to the immediate base field (encoded as a base element).
    pub fn trace_to_base(&self, x: Fe) -> Fe {
        let q = self.base_size();
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.0.degree {
            acc = self.add(acc, y);
            y = self.pow(y, q);
        }
        acc
    }

    /// Relative norm x^((Q-1)/(q-1)) to the immediate base field.
    pub fn norm_to_base(&self, x: Fe) -> Fe {
        let q = self.base_size();
        let big_q = self.size() as u64;
        self.pow(x, (big_q - 1) / (q - 1))
    }

    /// Absolute trace to GF(p), as a residue.
    pub fn absolute_trace(&self, x: Fe) -> u32 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.0.digits {
            acc = self.add(acc, y);
            y = self.pow(y, self.p() as u64);
        }
        acc
    }

    /// Minimal polynomial of `x` over the immediate base field.
    pub fn minimal_polynomial(&self, x: Fe) -> Poly {
        let base = match &self.0.base {
            Some(b) => b,
            None => return Poly::from_coeffs(vec![self.neg(x), 1]),
        };
        let q = base.size() as u64;
        let mut conj = vec![x];
        let mut y = self.pow(x, q);
        while y != x {
            conj.push(y);
            y = self.pow(y, q);
        }
        // Product of (X - c) over the conjugates, computed in this field.
        let mut prod: Vec<Fe> = vec![1];
        for c in conj {
            let mut next = vec![0; prod.len() + 1];
            for (i, &a) in prod.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], a);
                next[i] = self.sub(next[i], self.mul(a, c));
            }
            prod = next;
        }
        Poly::from_coeffs(prod)
    }

    /// Degree of `x` over the immediate base field.
    pub fn degree_of(&self, x: Fe) -> u32 {
        let q = self.base_size();
        let mut y = self.pow(x, q);
        let mut d = 1;
        while y != x {
            y = self.pow(y, q);
            d += 1;
        }
        d
    }
}

impl Inner {
    #[inline]
    fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.base.is_none() {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if self.p == 2 {
            return a ^ b;
        }
        if let Some(t) = &self.add_table {
            return t[(a * self.size + b) as usize];
        }
        digit_add(self.p, a, b)
    }

    #[inline]
    fn neg(&self, a: Fe) -> Fe {
        if self.base.is_none() {
            return if a == 0 { 0 } else { self.p - a };
        }
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let (mut a, mut out, mut w) = (a, 0, 1);
        while a > 0 {
            let d = a % p;
            out += if d == 0 { 0 } else { (p - d) * w };
            a /= p;
            w *= p;
        }
        out
    }

    /// Multiplication by polynomial arithmetic over the base (used to build tables).
    fn slow_mul(&self, a: Fe, b: Fe) -> Fe {
        let base = self.base.as_ref().unwrap();
        let bs = base.size();
        let d = self.degree as usize;
        let dec = |mut v: Fe| {
            let mut c = Vec::with_capacity(d);
            for _ in 0..d {
                c.push(v % bs);
                v /= bs;
            }
            c
        };
        let (ca, cb) = (dec(a), dec(b));
        let mut prod = vec![0; 2 * d - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = base.add(prod[i + j], base.mul(x, y));
            }
        }
        let m = &self.modulus.coeffs;
        for k in (d..prod.len()).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] = base.sub(prod[k - d + i], base.mul(lead, m[i]));
            }
            prod[k] = 0;
        }
        prod[..d].iter().rev().fold(0, |acc, &c| acc * bs + c)
    }

    fn slow_pow(&self, a: Fe, mut k: u32) -> Fe {
        let mut result = 1;
        let mut b = a;
        while k > 0 {
            if k & 1 == 1 {
                result = self.slow_mul(result, b);
            }
            b = self.slow_mul(b, b);
            k >>= 1;
        }
        result
    }
}

fn digit_add(p: u32, mut a: Fe, mut b: Fe) -> Fe {
    let (mut out, mut w) = (0, 1);
    while a > 0 || b > 0 {
        let s = (a % p + b % p) % p;
        out += s * w;
        a /= p;
        b /= p;
        w *= p;
    }
    out
}

fn build_add_table(p: u32, size: u32, _digits: u32) -> Option<Vec<Fe>> {
    if p == 2 || size > 1024 {
        return None;
    }
    let mut t = Vec::with_capacity((size * size) as usize);
    for a in 0..size {
        for b in 0..size {
            t.push(digit_add(p, a, b));
        }
    }
    Some(t)
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_moduli() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.modulus().coeffs, vec![0, 1]);
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus().coeffs, vec![1, 1, 1]);
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus().coeffs, vec![1, 0, 1]);
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(make_field(3, 0).is_err());
    }

    fn check_axioms(f: &Field) {
        let n = f.size();
        let step = if n > 64 { n / 37 + 1 } else { 1 };
        let sample: Vec<Fe> = (0..n).step_by(step as usize).collect();
        for &a in &sample {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.pow(a, (n - 1) as u64), 1);
            }
            for &b in &sample {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in sample.iter().take(7) {
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c)),
                        "{f:?} distributivity"
                    );
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
    }

    #[test]
    fn field_axioms() {
        for (p, e) in [(2, 1), (2, 3), (3, 1), (3, 2), (5, 2), (7, 1), (2, 8), (3, 5)] {
            check_axioms(&make_field(p, e).unwrap());
        }
        let f4 = make_field(2, 2).unwrap();
        check_axioms(&f4.extension(3).unwrap());
        let f9 = make_field(3, 2).unwrap();
        check_axioms(&f9.extension(2).unwrap());
    }

    #[test]
    fn tower_embeds_base() {
        let f4 = make_field(2, 2).unwrap();
        let f64_ = f4.extension(3).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(f64_.mul(a, b), f4.mul(a, b));
                assert_eq!(f64_.add(a, b), f4.add(a, b));
            }
        }
        for x in 1..64 {
            let n = f64_.norm_to_base(x);
            assert!(n < 4 && n != 0);
            assert!(f64_.trace_to_base(x) < 4);
        }
    }

    #[test]
    fn minimal_polynomials_are_d_to_one() {
        for (p, e, d) in [(2u64, 1u32, 4u32), (2, 1, 6), (3, 1, 3), (2, 2, 3), (5, 1, 2)] {
            let base = make_field(p, e).unwrap();
            let ext = base.extension(d).unwrap();
            let mut counts = std::collections::HashMap::new();
            for x in 1..ext.size() {
                if ext.degree_of(x) == d {
                    let m = ext.minimal_polynomial(x);
                    assert!(m.coeffs.iter().all(|&c| c < base.size()));
                    assert!(m.is_irreducible(&base).unwrap());
                    *counts.entry(m).or_insert(0u32) += 1;
                }
            }
            let irr = super::super::enumerate_irreducibles(&base, d as usize, true).unwrap();
            assert_eq!(counts.len(), irr.len());
            assert!(counts.values().all(|&c| c == d));
        }
    }
}
