use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use super::Matrix;
use crate::error::{Error, Result};
use crate::ff::{Field, Poly};
use crate::numth::{self, BigNat, Factorization};

/// Elementary divisors (f, m) of a matrix: V is the direct sum of the
/// modules F_q[X]/(f^m). Sorted by polynomial, then multiplicity descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantFactorData {
    pub elementary_divisors: Vec<(Poly, u32)>,
}

impl InvariantFactorData {
    /// Partition of block sizes for each distinct polynomial, parts descending.
    pub fn partitions(&self) -> BTreeMap<Poly, Vec<u32>> {
        let mut out: BTreeMap<Poly, Vec<u32>> = BTreeMap::new();
        for (f, m) in &self.elementary_divisors {
            out.entry(f.clone()).or_default().push(*m);
        }
        for parts in out.values_mut() {
            parts.sort_unstable_by(|a, b| b.cmp(a));
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.elementary_divisors
            .iter()
            .map(|(f, m)| f.degree().unwrap_or(0) * *m as usize)
            .sum()
    }
}

/// Elementary divisors from the ranks of powers of f(g) for each irreducible
/// factor f of the characteristic polynomial.
pub fn invariant_factors(g: &Matrix, field: &Field) -> InvariantFactorData {
    let n = g.n();
    let cp = g.char_poly(field);
    let factors = cp.factor(field).expect("characteristic polynomial is nonzero");
    let mut divisors = Vec::new();
    for (f, mult) in factors {
        let d = f.degree().unwrap();
        let fg = g.eval_poly(&f, field);
        let target = n - mult as usize * d;
        // ranks[k] = rank f(g)^k
        let mut ranks = vec![n];
        let mut power = Matrix::identity(n);
        while *ranks.last().unwrap() > target {
            power = power.mul(&fg, field);
            ranks.push(power.rank(field));
        }
        // at_least[k] = number of blocks of size >= k
        let at_least: Vec<usize> = (1..ranks.len())
            .map(|k| (ranks[k - 1] - ranks[k]) / d)
            .collect();
        for k in (1..=at_least.len()).rev() {
            let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
            for _ in 0..exactly {
                divisors.push((f.clone(), k as u32));
            }
        }
    }
    InvariantFactorData {
        elementary_divisors: divisors,
    }
}

/// Least power of p that is at least m.
pub fn p_power_at_least(p: u64, m: u32) -> BigNat {
    let mut t = BigNat::one();
    while t < BigNat::from(m) {
        t *= p;
    }
    t
}

/// lcm of the orders of the f_i times the least power of p covering every m_i.
pub fn element_order_formula(data: &InvariantFactorData, field: &Field) -> Result<BigNat> {
    let mut order = BigNat::one();
    let mut max_m = 0;
    for (f, m) in &data.elementary_divisors {
        if f.is_x() {
            return Err(Error::SingularMatrix);
        }
        order = numth::lcm(&order, &f.order(field)?);
        max_m = max_m.max(*m);
    }
    Ok(order * p_power_at_least(field.p() as u64, max_m))
}

/// Factorization of the exponent of GL(n, q): lcm of q^d - 1 for d <= n,
/// times the least power of p that is at least n.
pub fn gl_exponent(n: usize, field: &Field) -> Result<Factorization> {
    let q = field.size() as u64;
    let mut acc = Factorization::default();
    for d in 1..=n as u32 {
        let f = numth::factorize(&(numth::pow_u64(q, d) - 1u32))?;
        acc = lcm_factorizations(&acc, &f);
    }
    let pt = p_power_at_least(field.p() as u64, n as u32);
    if !pt.is_one() {
        acc = lcm_factorizations(&acc, &numth::factorize(&pt)?);
    }
    Ok(acc)
}

fn lcm_factorizations(a: &Factorization, b: &Factorization) -> Factorization {
    let mut map: BTreeMap<BigNat, u32> = BTreeMap::new();
    for (p, e) in a.prime_powers.iter().chain(&b.prime_powers) {
        let slot = map.entry(p.clone()).or_insert(0);
        *slot = (*slot).max(*e);
    }
    Factorization {
        prime_powers: map.into_iter().collect(),
    }
}

/// Caches the exponent of GL(n, q) for repeated order computations.
#[derive(Debug, Clone)]
pub struct OrderContext {
    field: Field,
    n: usize,
    exponent: Factorization,
}

impl OrderContext {
    pub fn new(n: usize, field: &Field) -> Result<OrderContext> {
        Ok(OrderContext {
            field: field.clone(),
            n,
            exponent: gl_exponent(n, field)?,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self, g: &Matrix) -> Result<BigNat> {
        self.check(g)?;
        numth::order_by_reduction(&self.exponent, |k| g.pow(k, &self.field).is_identity())
    }

    pub fn projective_order(&self, g: &Matrix) -> Result<BigNat> {
        self.check(g)?;
        let f = &self.field;
        let ord = self.order(g)?;
        let fac = numth::factorize(&ord)?;
        numth::order_by_reduction(&fac, |k| g.pow(k, f).is_scalar().is_some())
    }

    fn check(&self, g: &Matrix) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{} matrix, got {}x{}",
                self.n,
                self.n,
                g.n(),
                g.n()
            )));
        }
        if !g.is_invertible(&self.field) {
            return Err(Error::SingularMatrix);
        }
        Ok(())
    }
}

pub fn element_order_direct(g: &Matrix, field: &Field) -> Result<BigNat> {
    OrderContext::new(g.n(), field)?.order(g)
}

/// Least k >= 1 with g^k scalar.
pub fn projective_order(g: &Matrix, field: &Field) -> Result<BigNat> {
    OrderContext::new(g.n(), field)?.projective_order(g)
}

/// Codimension of the largest eigenspace over the algebraic closure.
pub fn support(g: &Matrix, field: &Field) -> usize {
    support_from(&invariant_factors(g, field), g.n())
}

pub fn support_from(data: &InvariantFactorData, n: usize) -> usize {
    let largest = data
        .partitions()
        .values()
        .map(|parts| parts.len())
        .max()
        .unwrap_or(0);
    n - largest
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn poly(c: &[u32]) -> Poly {
        Poly::from_coeffs(c.to_vec())
    }

    #[test]
    fn invariant_factor_examples() {
        let f3 = make_field(3, 1).unwrap();
        let id = Matrix::identity(2);
        let xm1 = poly(&[2, 1]);
        assert_eq!(
            invariant_factors(&id, &f3).elementary_divisors,
            vec![(xm1.clone(), 1), (xm1, 1)]
        );
        let f2 = make_field(2, 1).unwrap();
        let j2 = Matrix::from_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(
            invariant_factors(&j2, &f2).elementary_divisors,
            vec![(poly(&[1, 1]), 2)]
        );
        let c = Matrix::companion(&poly(&[1, 1, 0, 1]), &f2);
        assert_eq!(
            invariant_factors(&c, &f2).elementary_divisors,
            vec![(poly(&[1, 1, 0, 1]), 1)]
        );
    }

    #[test]
    fn order_formula_examples() {
        let f2 = make_field(2, 1).unwrap();
        let data = |v: Vec<(Poly, u32)>| InvariantFactorData {
            elementary_divisors: v,
        };
        let ord = |v| element_order_formula(&data(v), &f2).unwrap();
        assert_eq!(ord(vec![(poly(&[1, 1]), 2)]), BigNat::from(2u32));
        assert_eq!(ord(vec![(poly(&[1, 1, 1]), 1)]), BigNat::from(3u32));
        assert_eq!(ord(vec![(poly(&[1, 1]), 3)]), BigNat::from(4u32));
        assert!(matches!(
            element_order_formula(&data(vec![(Poly::x(), 1)]), &f2),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn direct_order_examples() {
        let f2 = make_field(2, 1).unwrap();
        let one = BigNat::from(1u32);
        assert_eq!(element_order_direct(&Matrix::identity(3), &f2).unwrap(), one);
        let c = Matrix::companion(&poly(&[1, 1, 1]), &f2);
        assert_eq!(element_order_direct(&c, &f2).unwrap(), BigNat::from(3u32));
        let j2 = Matrix::from_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(element_order_direct(&j2, &f2).unwrap(), BigNat::from(2u32));
        let singular = Matrix::from_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            element_order_direct(&singular, &f2),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn support_and_projective_examples() {
        let f2 = make_field(2, 1).unwrap();
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(support(&Matrix::identity(4), &f2), 0);
        assert_eq!(support(&Matrix::diagonal(&[1, 1, 2]), &f3), 1);
        let c = Matrix::companion(&poly(&[1, 1, 1]), &f2);
        assert_eq!(support(&c, &f2), 1);

        assert_eq!(
            projective_order(&Matrix::scalar(3, 2), &f3).unwrap(),
            BigNat::from(1u32)
        );
        let j2 = Matrix::from_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(projective_order(&j2, &f2).unwrap(), BigNat::from(2u32));
        assert_eq!(projective_order(&c, &f2).unwrap(), BigNat::from(3u32));
        assert!(projective_order(&Matrix::new(2, vec![0; 4]), &f2).is_err());
    }
}
