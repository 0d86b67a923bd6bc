//! Exact arithmetic functions: factorization, divisor and totient functions,
//! the partition function and multiplicative orders.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type BigNat = BigUint;
pub type BigRational = num_rational::BigRational;

const TRIAL_BOUND: u64 = 1_000_000;

/// Prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub prime_powers: Vec<(BigNat, u32)>,
}

impl Factorization {
    pub fn value(&self) -> BigNat {
        self.prime_powers
            .iter()
            .fold(BigNat::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigNat> {
        self.prime_powers.iter().map(|(p, _)| p)
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<BigNat> {
        let mut divs = vec![BigNat::one()];
        for (p, e) in &self.prime_powers {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut pk = d.clone();
                next.push(pk.clone());
                for _ in 0..*e {
                    pk *= p;
                    next.push(pk.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    /// Factorization of the product of two factored numbers.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut out: Vec<(BigNat, u32)> = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.prime_powers, &other.prime_powers);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        Factorization { prime_powers: out }
    }
}

/// Factors `n` by trial division up to 10^6 followed by Pollard rho.
pub fn factorize(n: &BigNat) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::NonPositive("n"));
    }
    let mut primes: Vec<BigNat> = Vec::new();
    let mut rest = n.clone();
    let small = |d: u64, rest: &mut BigNat, primes: &mut Vec<BigNat>| {
        let dd = BigNat::from(d);
        while (&*rest % &dd).is_zero() {
            *rest /= &dd;
            primes.push(dd.clone());
        }
    };
    small(2, &mut rest, &mut primes);
    small(3, &mut rest, &mut primes);
    let mut d = 5u64;
    while d <= TRIAL_BOUND {
        if BigNat::from(d * d) > rest {
            break;
        }
        small(d, &mut rest, &mut primes);
        small(d + 2, &mut rest, &mut primes);
        d += 6;
    }
    if !rest.is_one() {
        let bound = BigNat::from(TRIAL_BOUND);
        if rest <= &bound * &bound {
            primes.push(rest);
        } else {
            split_large(rest, &mut primes);
        }
    }
    primes.sort();
    let mut prime_powers: Vec<(BigNat, u32)> = Vec::new();
    for p in primes {
        match prime_powers.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => prime_powers.push((p, 1)),
        }
    }
    Ok(Factorization { prime_powers })
}

fn split_large(n: BigNat, out: &mut Vec<BigNat>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let mut c = 1u64;
    let d = loop {
        if let Some(d) = pollard_brent(&n, c) {
            break d;
        }
        c += 1;
    };
    let other = &n / &d;
    split_large(d, out);
    split_large(other, out);
}

/// Brent's variant of Pollard rho with x -> x^2 + c; returns a proper factor or None.
fn pollard_brent(n: &BigNat, c: u64) -> Option<BigNat> {
    let c = BigNat::from(c);
    let f = |x: &BigNat| (x * x + &c) % n;
    let mut y = BigNat::from(2u32);
    let mut r = 1u64;
    let mut q = BigNat::one();
    let m = 128u64;
    let mut g = BigNat::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n || g.is_one() {
        None
    } else {
        Some(g)
    }
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller-Rabin with fixed prime bases. The first 13 bases make the test
/// exact below 3.3 * 10^24; beyond that the remaining bases only reduce the
/// (unobserved) chance of a strong pseudoprime.
pub fn is_prime(n: &BigNat) -> bool {
    let two = BigNat::from(2u32);
    if n < &two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigNat::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigNat::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigNat::from(n))
}

/// Number of positive divisors.
pub fn sigma0(n: &BigNat) -> Result<BigNat> {
    let f = factorize(n)?;
    Ok(f.prime_powers
        .iter()
        .fold(BigNat::one(), |acc, (_, e)| acc * (e + 1)))
}

/// Euler's totient.
pub fn euler_phi(n: &BigNat) -> Result<BigNat> {
    let f = factorize(n)?;
    Ok(phi_from(&f))
}

pub fn phi_from(f: &Factorization) -> BigNat {
    f.prime_powers.iter().fold(BigNat::one(), |acc, (p, e)| {
        acc * p.pow(e - 1) * (p - 1u32)
    })
}

/// Möbius function of a small integer.
pub fn mobius(n: u64) -> i64 {
    let f = factorize(&BigNat::from(n)).expect("n >= 1");
    if f.prime_powers.iter().any(|(_, e)| *e > 1) {
        0
    } else if f.prime_powers.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of integer partitions of `n`, by the pentagonal-number recurrence.
pub fn partition_count(n: i64) -> Result<BigNat> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!(
            "partition_count of negative n = {n}"
        )));
    }
    Ok(partition_table(n as usize).pop().unwrap())
}

/// p(0), ..., p(n).
pub fn partition_table(n: usize) -> Vec<BigNat> {
    let mut p: Vec<BigNat> = Vec::with_capacity(n + 1);
    p.push(BigNat::one());
    for m in 1..=n {
        // Signs + + - - + + ... over generalized pentagonal numbers k(3k-1)/2, k = 1,-1,2,-2,...
        let mut plus = BigNat::zero();
        let mut minus = BigNat::zero();
        let mut k = 1usize;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let target = if k % 2 == 1 { &mut plus } else { &mut minus };
            *target += &p[m - g1];
            if g2 <= m {
                *target += &p[m - g2];
            }
            k += 1;
        }
        p.push(plus - minus);
    }
    p
}

/// Least k >= 1 with x^k = 1 mod `modulus`, given a factorization of a
/// multiple of the order (usually the order of the unit group).
pub fn multiplicative_order(
    x: &BigNat,
    modulus: &BigNat,
    group_order: &Factorization,
) -> Result<BigNat> {
    if modulus.is_zero() {
        return Err(Error::NonPositive("modulus"));
    }
    if modulus.is_one() {
        return Ok(BigNat::one());
    }
    if !x.gcd(modulus).is_one() {
        return Err(Error::NotCoprime {
            x: x.to_string(),
            modulus: modulus.to_string(),
        });
    }
    let x = x % modulus;
    order_by_reduction(group_order, |k| x.modpow(k, modulus).is_one())
}

/// Shared prime-by-prime reduction: starting from the factored multiple,
/// strips each prime while `is_identity(k / p)` holds.
pub fn order_by_reduction<F>(multiple: &Factorization, mut is_identity: F) -> Result<BigNat>
where
    F: FnMut(&BigNat) -> bool,
{
    let mut order = multiple.value();
    if !is_identity(&order) {
        return Err(Error::InconsistentFactorization);
    }
    for (p, e) in &multiple.prime_powers {
        for _ in 0..*e {
            let candidate = &order / p;
            if is_identity(&candidate) {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

pub fn lcm(a: &BigNat, b: &BigNat) -> BigNat {
    a.lcm(b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn pow_u64(base: u64, exp: u32) -> BigNat {
    BigNat::from(base).pow(exp)
}

/// `value` as u64 when it fits.
pub fn to_u64(value: &BigNat) -> Option<u64> {
    value.to_u64()
}

pub fn big(v: u64) -> BigNat {
    BigNat::from(v)
}

/// Exact rational a/b from naturals.
pub fn ratio(num: &BigNat, den: &BigNat) -> BigRational {
    BigRational::new(num.clone().into(), den.clone().into())
}

/// Serializes a rational as the string "num/den" (or "num" when integral).
pub fn serialize_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Serializes a big integer as a decimal string.
pub fn serialize_big<S: serde::Serializer>(n: &BigNat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_phi(n: u64) -> u64 {
        (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
    }

    fn brute_sigma0(n: u64) -> u64 {
        (1..=n).filter(|d| n % d == 0).count() as u64
    }

    fn brute_partitions(n: usize, max: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| brute_partitions(n - k, k)).sum()
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(&big(1)).unwrap().prime_powers.is_empty());
        let f = factorize(&big(63)).unwrap();
        assert_eq!(f.prime_powers, vec![(big(3), 2), (big(7), 1)]);
        let f = factorize(&big(u64::MAX)).unwrap();
        let expected: Vec<(BigNat, u32)> = [3u64, 5, 17, 257, 641, 65537, 6700417]
            .iter()
            .map(|&p| (big(p), 1))
            .collect();
        assert_eq!(f.prime_powers, expected);
        assert_eq!(factorize(&big(0)), Err(Error::NonPositive("n")));
    }

    #[test]
    fn factorize_needs_rho() {
        // 1000003 * 1000033 and a 2^89-1 factor pair: both beyond trial division.
        let n = big(1_000_003) * big(1_000_033);
        let f = factorize(&n).unwrap();
        assert_eq!(f.prime_powers, vec![(big(1_000_003), 1), (big(1_000_033), 1)]);
        let m = BigNat::from(2u32).pow(67) - 1u32;
        let f = factorize(&m).unwrap();
        assert_eq!(
            f.prime_powers,
            vec![(big(193_707_721), 1), (big(761_838_257_287), 1)]
        );
        assert_eq!(f.value(), m);
    }

    #[test]
    fn arithmetic_function_examples() {
        assert_eq!(sigma0(&big(1)).unwrap(), big(1));
        assert_eq!(sigma0(&big(12)).unwrap(), big(6));
        assert_eq!(sigma0(&big(63)).unwrap(), big(6));
        assert_eq!(euler_phi(&big(1)).unwrap(), big(1));
        assert_eq!(euler_phi(&big(7)).unwrap(), big(6));
        assert_eq!(euler_phi(&big(63)).unwrap(), big(36));
        assert!(sigma0(&big(0)).is_err());
        assert!(euler_phi(&big(0)).is_err());
    }

    #[test]
    fn arithmetic_functions_match_brute_force() {
        for n in 1..=2000u64 {
            assert_eq!(euler_phi(&big(n)).unwrap(), big(brute_phi(n)), "phi({n})");
            assert_eq!(sigma0(&big(n)).unwrap(), big(brute_sigma0(n)), "sigma0({n})");
        }
    }

    #[test]
    fn partition_examples_and_oracle() {
        assert_eq!(partition_count(0).unwrap(), big(1));
        assert_eq!(partition_count(5).unwrap(), big(7));
        assert_eq!(partition_count(20).unwrap(), big(627));
        assert!(partition_count(-1).is_err());
        let table = partition_table(20);
        for (n, p) in table.iter().enumerate() {
            assert_eq!(*p, big(brute_partitions(n, n)), "p({n})");
        }
        assert_eq!(
            partition_count(100).unwrap(),
            "190569292".parse::<BigNat>().unwrap()
        );
    }

    #[test]
    fn multiplicative_order_examples() {
        let f6 = factorize(&big(6)).unwrap();
        assert_eq!(multiplicative_order(&big(1), &big(7), &f6).unwrap(), big(1));
        assert_eq!(multiplicative_order(&big(2), &big(7), &f6).unwrap(), big(3));
        assert_eq!(multiplicative_order(&big(3), &big(7), &f6).unwrap(), big(6));
        assert!(matches!(
            multiplicative_order(&big(7), &big(14), &f6),
            Err(Error::NotCoprime { .. })
        ));
        // 3 has order 6 mod 7; claiming the group order is 2 is inconsistent.
        let f2 = factorize(&big(2)).unwrap();
        assert_eq!(
            multiplicative_order(&big(3), &big(7), &f2),
            Err(Error::InconsistentFactorization)
        );
    }

    #[test]
    fn gcd_of_q_powers() {
        for q in 2..=16u64 {
            for a in 1..=24u32 {
                for b in 1..=24u32 {
                    let lhs = (pow_u64(q, a) - 1u32).gcd(&(pow_u64(q, b) - 1u32));
                    let rhs = pow_u64(q, a.gcd(&b)) - 1u32;
                    assert_eq!(lhs, rhs, "q={q} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn mobius_small() {
        let v: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(v, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn factorization_reconstructs(n in 1u64..u64::MAX) {
                let f = factorize(&big(n)).unwrap();
                prop_assert_eq!(f.value(), big(n));
                for w in f.prime_powers.windows(2) {
                    prop_assert!(w[0].0 < w[1].0);
                }
                for (p, e) in &f.prime_powers {
                    prop_assert!(is_prime(p));
                    prop_assert!(*e >= 1);
                }
            }

            #[test]
            fn bounded_by_n(n in 1u64..1_000_000) {
                prop_assert!(sigma0(&big(n)).unwrap() <= big(n));
                prop_assert!(euler_phi(&big(n)).unwrap() <= big(n));
            }

            #[test]
            fn phi_multiplicative(a in 1u64..100_000, b in 1u64..100_000) {
                prop_assume!(a.gcd(&b) == 1);
                let lhs = euler_phi(&big(a * b)).unwrap();
                let rhs = euler_phi(&big(a)).unwrap() * euler_phi(&big(b)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn order_is_minimal(m in 2u64..5000, x in 1u64..5000) {
                prop_assume!(x.gcd(&m) == 1);
                let phi = euler_phi(&big(m)).unwrap();
                let fac = factorize(&phi).unwrap();
                let ord = multiplicative_order(&big(x), &big(m), &fac).unwrap();
                prop_assert!((&phi % &ord).is_zero());
                prop_assert!(big(x).modpow(&ord, &big(m)).is_one());
                let of = factorize(&ord).unwrap();
                for p in of.primes() {
                    prop_assert!(!big(x).modpow(&(&ord / p), &big(m)).is_one());
                }
            }
        }
    }
}
