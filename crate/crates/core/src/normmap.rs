//! The norm map GF(q^n) -> GF(q) restricted to GF(q)-subspaces, with the
//! multiplicative and additive characters used to count its fibres.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{field_of_order, Fe, Field};
use crate::limits;
use crate::numth;

/// GF(q^n) over GF(q) with a tabulated norm.
#[derive(Clone)]
pub struct NormField {
    q: u32,
    n: u32,
    base: Field,
    ext: Field,
    norms: Vec<Fe>,
}

impl NormField {
    pub fn new(q: u64, n: u32) -> Result<NormField> {
        if n < 1 {
            return Err(Error::NonPositive("n"));
        }
        let base = field_of_order(q)?;
        let ext = base.extension(n)?;
        let norms = ext.elements().map(|x| ext.norm_to_base(x)).collect();
        Ok(NormField { q: q as u32, n, base, ext, norms })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    /// x^((q^n - 1)/(q - 1)), as an element of GF(q).
    pub fn norm(&self, x: Fe) -> Fe {
        self.norms[x as usize]
    }

    /// Coordinates over GF(q), lowest first.
    pub fn coords(&self, x: Fe) -> Vec<Fe> {
        if self.n == 1 {
            vec![x]
        } else {
            self.ext.to_coeffs(x)
        }
    }

    pub fn from_coords(&self, c: &[Fe]) -> Fe {
        if self.n == 1 {
            c[0]
        } else {
            self.ext.from_coeffs(c)
        }
    }

    /// lambda * x for lambda in GF(q).
    fn scale(&self, lambda: Fe, x: Fe) -> Fe {
        // base encodings are the constant polynomials of the extension
        self.ext.mul(lambda, x)
    }

    /// Relative trace GF(q^n) -> GF(q).
    pub fn trace(&self, x: Fe) -> Fe {
        if self.n == 1 {
            x
        } else {
            self.ext.trace_to_base(x)
        }
    }

    /// Rank over GF(q) of a list of elements.
    pub fn rank(&self, elems: &[Fe]) -> usize {
        let f = &self.base;
        let mut rows: Vec<Vec<Fe>> = elems.iter().map(|&x| self.coords(x)).collect();
        let cols = self.n as usize;
        let mut rank = 0;
        for c in 0..cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = f.inv(rows[rank][c]);
            for v in rows[rank].iter_mut() {
                *v = f.mul(*v, inv);
            }
            for r in 0..rows.len() {
                if r != rank && rows[r][c] != 0 {
                    let factor = rows[r][c];
                    for k in 0..cols {
                        let sub = f.mul(factor, rows[rank][k]);
                        rows[r][k] = f.sub(rows[r][k], sub);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// A GF(q)-linear subspace of GF(q^n).
#[derive(Clone)]
pub struct Subspace {
    field: NormField,
    basis: Vec<Fe>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(q={}, n={}, basis={:?})", self.field.q, self.field.n, self.basis)
    }
}

impl Subspace {
    pub fn new(field: &NormField, basis: Vec<Fe>) -> Result<Subspace> {
        if basis.iter().any(|&b| b >= field.ext.size()) {
            return Err(Error::InvalidParameter("basis element outside GF(q^n)".into()));
        }
        if field.rank(&basis) != basis.len() {
            return Err(Error::LinearlyDependent);
        }
        Ok(Subspace { field: field.clone(), basis })
    }

    pub fn full(field: &NormField) -> Subspace {
        let basis = (0..field.n as usize)
            .map(|i| {
                let mut c = vec![0; field.n as usize];
                c[i] = 1;
                field.from_coords(&c)
            })
            .collect();
        Subspace { field: field.clone(), basis }
    }

    /// The subfield GF(q^k), for k dividing n.
    pub fn subfield(field: &NormField, k: u32) -> Result<Subspace> {
        if k == 0 || field.n % k != 0 {
            return Err(Error::InvalidParameter(format!("{k} does not divide n = {}", field.n)));
        }
        let big = field.ext.size() as u64 - 1;
        let small = (field.q as u64).pow(k) - 1;
        let gamma = field.ext.exp(big / small);
        let mut basis = Vec::with_capacity(k as usize);
        let mut x = field.ext.one();
        for _ in 0..k {
            basis.push(x);
            x = field.ext.mul(x, gamma);
        }
        Subspace::new(field, basis)
    }

    pub fn field(&self) -> &NormField {
        &self.field
    }

    pub fn basis(&self) -> &[Fe] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// All q^dim elements.
    pub fn elements(&self) -> Result<Vec<Fe>> {
        let q = self.field.q as u64;
        let size = q.checked_pow(self.dim() as u32).unwrap_or(u64::MAX);
        let cap = limits::current().max_field_size;
        if size > cap {
            return Err(Error::limit("subspace size", size, cap));
        }
        let ext = &self.field.ext;
        let mut out = vec![0];
        for &b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * q as usize);
            for lambda in 0..q as Fe {
                let lb = self.field.scale(lambda, b);
                next.extend(out.iter().map(|&w| ext.add(w, lb)));
            }
            out = next;
        }
        Ok(out)
    }

    pub fn contains(&self, x: Fe) -> bool {
        let mut v = self.basis.clone();
        v.push(x);
        self.field.rank(&v) == self.basis.len()
    }
}

pub fn norm_image_on(w: &Subspace) -> Result<BTreeSet<Fe>> {
    Ok(w.elements()?.into_iter().map(|x| w.field.norm(x)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityRow {
    pub dim: usize,
    pub surjective: bool,
    /// Nonzero elements of GF(q) outside the image.
    pub missing_values: Vec<Fe>,
    pub basis: Vec<Fe>,
}

pub fn surjectivity(w: &Subspace) -> Result<SurjectivityRow> {
    let image = norm_image_on(w)?;
    let missing: Vec<Fe> = (1..w.field.q).filter(|a| !image.contains(a)).collect();
    Ok(SurjectivityRow {
        dim: w.dim(),
        surjective: missing.is_empty(),
        missing_values: missing,
        basis: w.basis.clone(),
    })
}

/// Kernel of x -> Tr(a x).
pub fn trace_kernel(field: &NormField, a: Fe) -> Result<Subspace> {
    if a == 0 {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    let n = field.n as usize;
    let f = &field.base;
    let unit = |i: usize| {
        let mut c = vec![0; n];
        c[i] = 1;
        field.from_coords(&c)
    };
    let t: Vec<Fe> = (0..n).map(|j| field.trace(field.ext.mul(a, unit(j)))).collect();
    let pivot = t.iter().position(|&v| v != 0).expect("the trace form is nondegenerate");
    let basis = (0..n)
        .filter(|&j| j != pivot)
        .map(|j| {
            let mut c = vec![0; n];
            c[j] = 1;
            c[pivot] = f.neg(f.div(t[j], t[pivot]));
            field.from_coords(&c)
        })
        .collect();
    Subspace::new(field, basis)
}

/// All (q^n - 1)/(q - 1) hyperplanes, as kernels of x -> Tr(w^i x) with w
/// primitive and 0 <= i < (q^n - 1)/(q - 1).
pub fn enumerate_hyperplanes(field: &NormField) -> impl Iterator<Item = Result<Subspace>> + '_ {
    let count = (field.ext.size() as u64 - 1) / (field.q as u64 - 1);
    (0..count).map(move |i| trace_kernel(field, field.ext.exp(i)))
}

pub fn hyperplane_count(n: u32, q: u64) -> u64 {
    (q.pow(n) - 1) / (q - 1)
}

/// A uniformly random subspace of the given dimension.
pub fn random_subspace<R: Rng + ?Sized>(field: &NormField, dim: usize, rng: &mut R) -> Result<Subspace> {
    if dim > field.n as usize {
        return Err(Error::InvalidParameter(format!("dimension {dim} exceeds n = {}", field.n)));
    }
    loop {
        let basis: Vec<Fe> = (0..dim).map(|_| rng.random_range(0..field.ext.size())).collect();
        if field.rank(&basis) == dim {
            return Subspace::new(field, basis);
        }
    }
}

/// chi_j(w^k) = exp(2 pi i j k / (q - 1)) for the primitive element w of GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MultiplicativeCharacter {
    pub q: u32,
    pub index: u32,
    /// Value at 0; only the trivial character may take 1 here.
    pub value_at_zero_is_one: bool,
}

impl MultiplicativeCharacter {
    pub fn new(q: u32, index: u32) -> MultiplicativeCharacter {
        MultiplicativeCharacter { q, index: index % (q - 1), value_at_zero_is_one: false }
    }

    /// The trivial character with chi(0) = 1.
    pub fn trivial_including_zero(q: u32) -> MultiplicativeCharacter {
        MultiplicativeCharacter { q, index: 0, value_at_zero_is_one: true }
    }

    pub fn all(q: u32) -> impl Iterator<Item = MultiplicativeCharacter> {
        (0..q - 1).map(move |j| MultiplicativeCharacter::new(q, j))
    }

    /// Characters of exact order `d`, for d dividing q - 1.
    pub fn of_order(q: u32, d: u32) -> Vec<MultiplicativeCharacter> {
        MultiplicativeCharacter::all(q).filter(|c| c.order() == d).collect()
    }

    pub fn order(&self) -> u32 {
        let m = self.q - 1;
        m / numth::gcd_u64(m as u64, self.index as u64) as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// Exponent e with chi(y) = zeta_{q-1}^e, or None when chi(y) = 0.
    fn exponent(&self, base: &Field, y: Fe) -> Option<u64> {
        if y == 0 {
            return (self.is_trivial() && self.value_at_zero_is_one).then_some(0);
        }
        let k = base.log(y).expect("nonzero") as u64;
        Some(k * self.index as u64 % (self.q as u64 - 1))
    }

    pub fn eval(&self, base: &Field, y: Fe) -> Complex64 {
        match self.exponent(base, y) {
            None => Complex64::new(0.0, 0.0),
            Some(e) => root_of_unity(e, self.q as u64 - 1),
        }
    }
}

/// theta_b(x) = exp(2 pi i AbsTr(b x) / p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdditiveCharacter {
    pub b: Fe,
}

impl AdditiveCharacter {
    pub fn is_trivial(&self) -> bool {
        self.b == 0
    }

    fn exponent(&self, ext: &Field, x: Fe) -> u64 {
        ext.absolute_trace(ext.mul(self.b, x)) as u64
    }

    pub fn eval(&self, ext: &Field, x: Fe) -> Complex64 {
        root_of_unity(self.exponent(ext, x), ext.p() as u64)
    }
}

fn root_of_unity(k: u64, m: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % m) as f64 / m as f64)
}

/// An element sum_k c_k zeta_M^k of Z[zeta_M], kept as its exponent histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicSum {
    pub modulus: u64,
    pub coeffs: Vec<i128>,
}

impl CyclotomicSum {
    pub fn zero(modulus: u64) -> CyclotomicSum {
        CyclotomicSum { modulus, coeffs: vec![0; modulus as usize] }
    }

    pub fn add_power(&mut self, k: u64, c: i128) {
        self.coeffs[(k % self.modulus) as usize] += c;
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| root_of_unity(k as u64, self.modulus) * c as f64)
            .sum()
    }

    pub fn conj(&self) -> CyclotomicSum {
        let m = self.modulus as usize;
        let mut out = CyclotomicSum::zero(self.modulus);
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[(m - k) % m] += c;
        }
        out
    }

    pub fn mul(&self, other: &CyclotomicSum) -> CyclotomicSum {
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus as usize;
        let mut out = CyclotomicSum::zero(self.modulus);
        for (a, &x) in self.coeffs.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (b, &y) in other.coeffs.iter().enumerate().filter(|(_, &y)| y != 0) {
                out.coeffs[(a + b) % m] += x * y;
            }
        }
        out
    }

    /// Exact test for the value 0, by reduction modulo the M-th cyclotomic
    /// polynomial.
    pub fn is_zero(&self) -> bool {
        let phi = cyclotomic_polynomial(self.modulus);
        let mut r = self.coeffs.clone();
        let d = phi.len() - 1;
        for top in (d..r.len()).rev() {
            let c = r[top];
            if c != 0 {
                for (i, &pc) in phi.iter().enumerate() {
                    r[top - d + i] -= c * pc;
                }
            }
        }
        r.iter().all(|&c| c == 0)
    }

    /// Exact test for the rational integer value `v`.
    pub fn equals_integer(&self, v: i128) -> bool {
        let mut t = self.clone();
        t.coeffs[0] -= v;
        t.is_zero()
    }
}

/// Integer coefficients of Phi_m, lowest first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i128> {
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i128; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = exact_divide(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_divide(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i128; num.len() - dd];
    for top in (dd..r.len()).rev() {
        let c = r[top];
        quot[top - dd] = c;
        if c != 0 {
            for (i, &pc) in den.iter().enumerate() {
                r[top - dd + i] -= c * pc;
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    quot
}

/// sum_{x in W} chi(N(x)), exactly in Z[zeta_{q-1}].
pub fn character_sum_exact(w: &Subspace, chi: &MultiplicativeCharacter) -> Result<CyclotomicSum> {
    let f = &w.field;
    let mut sum = CyclotomicSum::zero(f.q as u64 - 1);
    for x in w.elements()? {
        if let Some(e) = chi.exponent(&f.base, f.norm(x)) {
            sum.add_power(e, 1);
        }
    }
    Ok(sum)
}

pub fn character_sum_on_subspace(w: &Subspace, chi: &MultiplicativeCharacter) -> Result<Complex64> {
    Ok(character_sum_exact(w, chi)?.to_complex())
}

/// The same sum through the additive dual:
/// (1/|W^perp|) sum_{theta in W^perp} sum_{x} theta(x) chi(N(x)).
pub fn character_sum_via_dual(w: &Subspace, chi: &MultiplicativeCharacter) -> Result<Complex64> {
    let f = &w.field;
    let ext = &f.ext;
    let elems = w.elements()?;
    let dual: Vec<AdditiveCharacter> = ext
        .elements()
        .map(|b| AdditiveCharacter { b })
        .filter(|theta| elems.iter().all(|&x| theta.exponent(ext, x) == 0))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for theta in &dual {
        total += gauss_sum_exact(f, chi, theta).to_complex();
    }
    Ok(total / dual.len() as f64)
}

/// sum_{x in GF(q^n)} theta(x) chi(N(x)), exactly in Z[zeta_{p(q-1)}].
pub fn gauss_sum_exact(f: &NormField, chi: &MultiplicativeCharacter, theta: &AdditiveCharacter) -> CyclotomicSum {
    let p = f.ext.p() as u64;
    let m1 = f.q as u64 - 1;
    let mut sum = CyclotomicSum::zero(p * m1);
    for x in f.ext.elements() {
        if let Some(e) = chi.exponent(&f.base, f.norm(x)) {
            sum.add_power(theta.exponent(&f.ext, x) * m1 + e * p, 1);
        }
    }
    sum
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussSumRow {
    pub chi_index: u32,
    pub chi_order: u32,
    pub theta: Fe,
    pub magnitude: f64,
    pub expected: f64,
    /// |G|^2 = q^n holds exactly in the cyclotomic ring.
    pub exact_norm_holds: bool,
}

/// |sum_x theta(x) chi(N(x))| for nontrivial chi and theta.
pub fn gauss_sum_magnitude(
    q: u64,
    n: u32,
    chi: &MultiplicativeCharacter,
    theta: &AdditiveCharacter,
) -> Result<f64> {
    let f = NormField::new(q, n)?;
    Ok(gauss_sum_row(&f, chi, theta)?.magnitude)
}

pub fn gauss_sum_row(f: &NormField, chi: &MultiplicativeCharacter, theta: &AdditiveCharacter) -> Result<GaussSumRow> {
    if chi.q != f.q {
        return Err(Error::InvalidParameter("character of a different field".into()));
    }
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    if theta.is_trivial() || theta.b >= f.ext.size() {
        return Err(Error::InvalidParameter("additive character must be nontrivial".into()));
    }
    let g = gauss_sum_exact(f, chi, theta);
    let qn = (f.q as i128).pow(f.n);
    Ok(GaussSumRow {
        chi_index: chi.index,
        chi_order: chi.order(),
        theta: theta.b,
        magnitude: g.to_complex().norm(),
        expected: (qn as f64).sqrt(),
        exact_norm_holds: g.mul(&g.conj()).equals_integer(qn),
    })
}

/// Gauss sums for every nontrivial chi and a sample of nontrivial theta.
pub fn gauss_rows(f: &NormField, thetas: usize) -> Result<Vec<GaussSumRow>> {
    let mut rows = Vec::new();
    for chi in MultiplicativeCharacter::all(f.q).filter(|c| !c.is_trivial()) {
        for b in (1..f.ext.size()).take(thetas) {
            rows.push(gauss_sum_row(f, &chi, &AdditiveCharacter { b })?);
        }
    }
    Ok(rows)
}

/// #{x in W : N(x) = a}, by enumeration.
pub fn count_by_norm(w: &Subspace, a: Fe) -> Result<u64> {
    check_norm_value(w, a)?;
    Ok(w.elements()?.into_iter().filter(|&x| w.field.norm(x) == a).count() as u64)
}

fn check_norm_value(w: &Subspace, a: Fe) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidParameter("norm value a must be nonzero".into()));
    }
    if a >= w.field.q {
        return Err(Error::InvalidParameter(format!("{a} is not an element of GF({})", w.field.q)));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterCount {
    pub value: f64,
    pub rounded: u64,
    /// Distance from `value` to the nearest integer.
    pub gap: f64,
}

/// (1/(q-1)) sum_chi sum_{x in W} chi(N(x)) conj(chi(a)), with chi(0) = 0.
pub fn count_by_norm_characters(w: &Subspace, a: Fe) -> Result<CharacterCount> {
    check_norm_value(w, a)?;
    let f = &w.field;
    let mut total = Complex64::new(0.0, 0.0);
    for chi in MultiplicativeCharacter::all(f.q) {
        let s = character_sum_on_subspace(w, &chi)?;
        total += s * chi.eval(&f.base, a).conj();
    }
    let value = total.re / (f.q - 1) as f64;
    let rounded = value.round().max(0.0);
    Ok(CharacterCount { value, rounded: rounded as u64, gap: (value - rounded).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn norm_examples() {
        let f = NormField::new(3, 2).unwrap();
        assert_eq!(f.norm(1), 1);
        assert_eq!(f.norm(0), 0);
        let g = f.ext().primitive_element();
        assert_eq!(f.norm(g), f.ext().pow(g, 4));
        assert_eq!(f.norm(g), 2);
        for n in 1..=5 {
            let f = NormField::new(2, n).unwrap();
            assert!(f.ext().elements().skip(1).all(|x| f.norm(x) == 1));
        }
    }

    #[test]
    fn norm_is_multiplicative_and_lands_in_base() {
        let f = NormField::new(4, 3).unwrap();
        let ext = f.ext();
        for x in ext.elements().step_by(7) {
            assert!(f.norm(x) < 4);
            for y in ext.elements().step_by(11) {
                assert_eq!(f.norm(ext.mul(x, y)), f.base().mul(f.norm(x), f.norm(y)));
            }
        }
    }

    #[test]
    fn image_examples() {
        let f = NormField::new(3, 2).unwrap();
        let full = Subspace::full(&f);
        assert_eq!(norm_image_on(&full).unwrap(), BTreeSet::from([0, 1, 2]));
        let sub = Subspace::subfield(&f, 1).unwrap();
        assert_eq!(norm_image_on(&sub).unwrap(), BTreeSet::from([0, 1]));
        let f4 = NormField::new(3, 4).unwrap();
        let h = trace_kernel(&f4, 1).unwrap();
        assert_eq!(h.dim(), 3);
        assert_eq!(norm_image_on(&h).unwrap(), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn hyperplane_counts_and_traces() {
        for (q, n, count) in [(3u64, 2u32, 4u64), (2, 3, 7), (4, 3, 21)] {
            let f = NormField::new(q, n).unwrap();
            let hs: Vec<Subspace> = enumerate_hyperplanes(&f).map(|h| h.unwrap()).collect();
            assert_eq!(hs.len() as u64, count);
            assert_eq!(hyperplane_count(n, q), count);
            let mut distinct = BTreeSet::new();
            for h in &hs {
                assert_eq!(h.dim(), n as usize - 1);
                let mut elems = h.elements().unwrap();
                elems.sort();
                distinct.insert(elems);
            }
            assert_eq!(distinct.len() as u64, count);
        }
    }

    #[test]
    fn character_sum_examples() {
        let f = NormField::new(3, 2).unwrap();
        let triv = MultiplicativeCharacter::new(3, 0);
        let s = character_sum_on_subspace(&Subspace::full(&f), &triv).unwrap();
        assert!((s - Complex64::new(8.0, 0.0)).norm() < 1e-9);
        let with_zero = MultiplicativeCharacter::trivial_including_zero(3);
        let s = character_sum_on_subspace(&Subspace::full(&f), &with_zero).unwrap();
        assert!((s.re - 9.0).abs() < 1e-9);

        let f = NormField::new(5, 3).unwrap();
        let quad = MultiplicativeCharacter::of_order(5, 2)[0];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in 0..=3 {
            let w = random_subspace(&f, dim, &mut rng).unwrap();
            assert!(character_sum_exact(&w, &quad).unwrap().is_zero());
            assert!(character_sum_on_subspace(&w, &quad).unwrap().norm() < 1e-9);
        }
        let zero = Subspace::new(&f, vec![]).unwrap();
        assert_eq!(character_sum_on_subspace(&zero, &quad).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dual_expansion_agrees() {
        let f = NormField::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for chi in MultiplicativeCharacter::all(5) {
            for dim in 0..=2 {
                let w = random_subspace(&f, dim, &mut rng).unwrap();
                let a = character_sum_on_subspace(&w, &chi).unwrap();
                let b = character_sum_via_dual(&w, &chi).unwrap();
                assert!((a - b).norm() < 1e-9, "{chi:?} dim {dim}");
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let quad = MultiplicativeCharacter::of_order(3, 2)[0];
        let m = gauss_sum_magnitude(3, 2, &quad, &AdditiveCharacter { b: 1 }).unwrap();
        assert!((m - 3.0).abs() < 1e-9);
        for chi in MultiplicativeCharacter::of_order(5, 4) {
            let m = gauss_sum_magnitude(5, 2, &chi, &AdditiveCharacter { b: 7 }).unwrap();
            assert!((m - 5.0).abs() < 1e-9);
        }
        assert!(matches!(
            gauss_sum_magnitude(3, 3, &MultiplicativeCharacter::new(3, 0), &AdditiveCharacter { b: 1 }),
            Err(Error::TrivialCharacter)
        ));
        let f = NormField::new(3, 3).unwrap();
        for row in gauss_rows(&f, 26).unwrap() {
            assert!(row.exact_norm_holds);
            assert!((row.magnitude - row.expected).abs() < 1e-9 * row.expected);
        }
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // 1 + z + ... + z^{p-1} = 0
        let mut s = CyclotomicSum::zero(7);
        for k in 0..7 {
            s.add_power(k, 1);
        }
        assert!(s.is_zero());
        s.add_power(0, 1);
        assert!(!s.is_zero());
    }

    #[test]
    fn count_examples() {
        let f = NormField::new(3, 2).unwrap();
        let full = Subspace::full(&f);
        for a in 1..3 {
            assert_eq!(count_by_norm(&full, a).unwrap(), 4);
        }
        let sub = Subspace::subfield(&f, 1).unwrap();
        assert_eq!(count_by_norm(&sub, 2).unwrap(), 0);
        assert_eq!(count_by_norm(&sub, 1).unwrap(), 2);
        assert!(count_by_norm(&sub, 0).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (q, n) in [(3u64, 2u32), (5, 2), (4, 3), (7, 2), (5, 3)] {
            let f = NormField::new(q, n).unwrap();
            for dim in 0..=n as usize {
                let w = random_subspace(&f, dim, &mut rng).unwrap();
                for a in 1..q as Fe {
                    let exact = count_by_norm(&w, a).unwrap();
                    let c = count_by_norm_characters(&w, a).unwrap();
                    assert!((c.value - exact as f64).abs() < 1e-6);
                    assert_eq!(c.rounded, exact);
                }
            }
        }
    }

    #[test]
    fn subfield_counterexamples_miss_nonsquares() {
        for (n, q) in [(2u32, 3u64), (2, 5), (4, 3)] {
            let f = NormField::new(q, n).unwrap();
            let w = Subspace::subfield(&f, n / 2).unwrap();
            let row = surjectivity(&w).unwrap();
            assert!(!row.surjective);
            let nonsquares: Vec<Fe> = (1..q as Fe)
                .filter(|&a| f.base().log(a).unwrap() % 2 == 1)
                .collect();
            assert_eq!(row.missing_values, nonsquares);
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let f = NormField::new(3, 3).unwrap();
        let x = f.ext().primitive_element();
        let two_x = f.ext().mul(2, x);
        assert!(matches!(Subspace::new(&f, vec![x, two_x]), Err(Error::LinearlyDependent)));
        let w = Subspace::new(&f, vec![1, x]).unwrap();
        assert!(w.contains(f.ext().add(1, two_x)));
        assert!(!w.contains(f.ext().mul(x, x)));
    }
}
