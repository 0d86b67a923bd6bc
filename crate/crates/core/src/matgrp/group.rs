use std::sync::OnceLock;

use num_traits::One;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::schreier::StabChain;
use super::Matrix;
use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::limits;
use crate::numth::{self, BigNat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    GL,
    SL,
    PGL,
    PSL,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::GL => "GL",
            GroupKind::SL => "SL",
            GroupKind::PGL => "PGL",
            GroupKind::PSL => "PSL",
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<GroupKind> {
        match s.to_ascii_uppercase().as_str() {
            "GL" => Ok(GroupKind::GL),
            "SL" => Ok(GroupKind::SL),
            "PGL" => Ok(GroupKind::PGL),
            "PSL" => Ok(GroupKind::PSL),
            _ => Err(Error::InvalidParameter(format!("unknown group kind {s:?}"))),
        }
    }
}

pub fn group_order(kind: GroupKind, n: usize, q: u64) -> Result<BigNat> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    if q < 2 {
        return Err(Error::InvalidParameter(format!("field size {q} < 2")));
    }
    let qn = numth::pow_u64(q, n as u32);
    let gl = (0..n as u32).fold(BigNat::one(), |acc, i| acc * (&qn - numth::pow_u64(q, i)));
    let qm1 = BigNat::from(q - 1);
    Ok(match kind {
        GroupKind::GL => gl,
        GroupKind::SL | GroupKind::PGL => gl / qm1,
        GroupKind::PSL => gl / qm1 / numth::gcd_u64(n as u64, q - 1),
    })
}

/// Uniform element of GL(n,q) (rejection) or SL(n,q) (first row divided by
/// the determinant).
pub fn random_element<R: Rng + ?Sized>(kind: GroupKind, n: usize, field: &Field, rng: &mut R) -> Result<Matrix> {
    let size = field.size();
    let g = loop {
        let data: Vec<Fe> = (0..n * n).map(|_| rng.random_range(0..size)).collect();
        let m = Matrix::new(n, data);
        let det = m.det(field);
        if det != 0 {
            break (m, det);
        }
    };
    match kind {
        GroupKind::GL => Ok(g.0),
        GroupKind::SL => {
            let (mut m, det) = g;
            let inv = field.inv(det);
            for j in 0..n {
                m.set(0, j, field.mul(m.get(0, j), inv));
            }
            Ok(m)
        }
        _ => Err(Error::InvalidParameter(
            "random elements are drawn from GL or SL only".into(),
        )),
    }
}

/// Generators of SL(n,q): transvections I + w^k E_12 for k below the degree of
/// F_q over F_p, and a signed cyclic permutation matrix. For GL, the diagonal
/// matrix diag(w, 1, ..., 1) is added, w primitive.
pub fn standard_generators(kind: GroupKind, n: usize, field: &Field) -> Result<Vec<Matrix>> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let w = field.primitive_element();
    let mut gens = Vec::new();
    if n == 1 {
        if kind == GroupKind::GL {
            gens.push(Matrix::scalar(1, w));
        }
        return Ok(gens);
    }
    let e = field.size().ilog(field.p());
    for k in 0..e {
        let mut t = Matrix::identity(n);
        t.set(0, 1, field.pow(w, k as u64));
        gens.push(t);
    }
    // e_j -> e_{j+1}, e_n -> ±e_1 with the sign making the determinant 1.
    let mut c = Matrix::scalar(n, 0);
    for j in 0..n - 1 {
        c.set(j + 1, j, 1);
    }
    let sign = if n % 2 == 0 { field.neg(1) } else { 1 };
    c.set(0, n - 1, sign);
    debug_assert_eq!(c.det(field), 1);
    gens.push(c);
    match kind {
        GroupKind::SL => {}
        GroupKind::GL => {
            let mut d = Matrix::identity(n);
            d.set(0, 0, w);
            gens.push(d);
        }
        _ => {
            return Err(Error::InvalidParameter(
                "standard generators are for GL or SL".into(),
            ))
        }
    }
    Ok(gens)
}

/// A subgroup of GL(n,q): the full GL or SL, optionally cut down to the
/// subgroup generated by an explicit list.
#[derive(Debug)]
pub struct GroupHandle {
    pub kind: GroupKind,
    pub n: usize,
    pub field: Field,
    pub generators: Option<Vec<Matrix>>,
    chain: OnceLock<std::result::Result<StabChain, Error>>,
}

impl GroupHandle {
    pub fn full(kind: GroupKind, n: usize, field: &Field) -> Result<GroupHandle> {
        if !matches!(kind, GroupKind::GL | GroupKind::SL) {
            return Err(Error::InvalidParameter("group handle must be GL or SL".into()));
        }
        if n == 0 {
            return Err(Error::NonPositive("n"));
        }
        Ok(GroupHandle {
            kind,
            n,
            field: field.clone(),
            generators: None,
            chain: OnceLock::new(),
        })
    }

    pub fn generated(kind: GroupKind, n: usize, field: &Field, generators: Vec<Matrix>) -> Result<GroupHandle> {
        let mut h = GroupHandle::full(kind, n, field)?;
        for g in &generators {
            if g.n() != n {
                return Err(Error::DimensionMismatch(format!("generator is {}x{}, expected {n}x{n}", g.n(), g.n())));
            }
        }
        h.generators = Some(generators);
        Ok(h)
    }

    pub fn q(&self) -> u64 {
        self.field.size() as u64
    }

    pub fn generator_list(&self) -> Result<Vec<Matrix>> {
        match &self.generators {
            Some(g) => Ok(g.clone()),
            None => standard_generators(self.kind, self.n, &self.field),
        }
    }

    /// Strong generating data, built once; concurrent callers block on the
    /// first construction.
    pub fn chain(&self) -> Result<&StabChain> {
        self.chain
            .get_or_init(|| StabChain::build(&self.generator_list()?, self.n, &self.field))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn order(&self) -> Result<BigNat> {
        match &self.generators {
            None => group_order(self.kind, self.n, self.q()),
            Some(_) => Ok(self.chain()?.order()),
        }
    }

    pub fn contains(&self, g: &Matrix) -> Result<bool> {
        match &self.generators {
            None => Ok(g.n() == self.n
                && match self.kind {
                    GroupKind::GL => g.is_invertible(&self.field),
                    _ => g.det(&self.field) == 1,
                }),
            Some(_) => self.chain()?.contains(g),
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Matrix> {
        if self.generators.is_some() {
            return Err(Error::InvalidParameter(
                "uniform sampling is only available for the full group".into(),
            ));
        }
        random_element(self.kind, self.n, &self.field, rng)
    }
}

/// Exact order of the subgroup generated by `generators`.
pub fn generated_group_order(generators: &[Matrix], field: &Field) -> Result<BigNat> {
    let Some(first) = generators.first() else {
        return Ok(BigNat::one());
    };
    Ok(StabChain::build(generators, first.n(), field)?.order())
}

/// Encodes a vector as the base-q integer sum v_i q^i.
pub fn encode_vector(v: &[Fe], q: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * q + c)
}

pub fn decode_vector(mut x: u32, n: usize, q: u32) -> Vec<Fe> {
    (0..n)
        .map(|_| {
            let c = x % q;
            x /= q;
            c
        })
        .collect()
}

fn check_enumeration(kind: GroupKind, n: usize, field: &Field) -> Result<()> {
    let order = group_order(kind, n, field.size() as u64)?;
    let cap = limits::current().max_group_elements;
    if order > BigNat::from(cap) {
        return Err(Error::limit("group elements", order, cap));
    }
    if !matches!(kind, GroupKind::GL | GroupKind::SL) {
        return Err(Error::InvalidParameter("enumeration covers GL and SL".into()));
    }
    Ok(())
}

/// Visits every element of GL(n,q) or SL(n,q), building matrices row by row
/// with each row outside the span of the previous ones. Work is split across
/// threads by first row; each part folds into its own accumulator.
pub fn par_fold_group<T, I, F>(kind: GroupKind, n: usize, field: &Field, init: I, visit: F) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &Matrix) + Sync + Send,
{
    check_enumeration(kind, n, field)?;
    let q = field.size();
    let total = q.pow(n as u32);
    let parts = (1..total)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut walker = RowWalker::new(n, field);
            walker.push(first);
            walker.descend(&mut |m: &Matrix| {
                if kind == GroupKind::GL || m.det(field) == 1 {
                    visit(&mut acc, m);
                }
            });
            acc
        })
        .collect();
    Ok(parts)
}

/// Sequential visit of all elements in a deterministic order.
pub fn for_each_element<F: FnMut(&Matrix)>(kind: GroupKind, n: usize, field: &Field, mut visit: F) -> Result<()> {
    check_enumeration(kind, n, field)?;
    let mut walker = RowWalker::new(n, field);
    walker.descend(&mut |m: &Matrix| {
        if kind == GroupKind::GL || m.det(field) == 1 {
            visit(m);
        }
    });
    Ok(())
}

pub fn collect_elements(kind: GroupKind, n: usize, field: &Field) -> Result<Vec<Matrix>> {
    let mut out = Vec::new();
    for_each_element(kind, n, field, |m| out.push(m.clone()))?;
    Ok(out)
}

struct RowWalker<'a> {
    n: usize,
    q: u32,
    field: &'a Field,
    rows: Vec<u32>,
    // spans[k] lists the span of the first k rows
    spans: Vec<Vec<u32>>,
    in_span: Vec<Vec<bool>>,
    matrix: Matrix,
}

impl<'a> RowWalker<'a> {
    fn new(n: usize, field: &'a Field) -> RowWalker<'a> {
        let q = field.size();
        let total = q.pow(n as u32) as usize;
        let mut zero_span = vec![false; total];
        zero_span[0] = true;
        RowWalker {
            n,
            q,
            field,
            rows: Vec::new(),
            spans: vec![vec![0]],
            in_span: vec![zero_span],
            matrix: Matrix::scalar(n, 0),
        }
    }

    fn push(&mut self, row: u32) {
        let k = self.rows.len();
        let v = decode_vector(row, self.n, self.q);
        for (j, &c) in v.iter().enumerate() {
            self.matrix.set(k, j, c);
        }
        self.rows.push(row);
        if k + 1 < self.n {
            let mut span = self.spans[k].clone();
            let mut mark = self.in_span[k].clone();
            for c in 1..self.q {
                let cv: Vec<Fe> = v.iter().map(|&x| self.field.mul(c, x)).collect();
                for &s in &self.spans[k] {
                    let sv = decode_vector(s, self.n, self.q);
                    let sum: Vec<Fe> = sv.iter().zip(&cv).map(|(&a, &b)| self.field.add(a, b)).collect();
                    let code = encode_vector(&sum, self.q);
                    span.push(code);
                    mark[code as usize] = true;
                }
            }
            self.spans.push(span);
            self.in_span.push(mark);
        }
    }

    fn pop(&mut self) {
        let k = self.rows.len();
        self.rows.pop();
        if k < self.n {
            self.spans.pop();
            self.in_span.pop();
        }
    }

    fn descend(&mut self, visit: &mut dyn FnMut(&Matrix)) {
        let k = self.rows.len();
        if k == self.n {
            visit(&self.matrix);
            return;
        }
        let total = self.q.pow(self.n as u32);
        for row in 1..total {
            if self.in_span[k][row as usize] {
                continue;
            }
            self.push(row);
            self.descend(visit);
            self.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use rand::SeedableRng;
    use std::collections::HashMap;

    #[test]
    fn order_examples() {
        assert_eq!(group_order(GroupKind::GL, 2, 2).unwrap(), BigNat::from(6u32));
        assert_eq!(group_order(GroupKind::SL, 2, 3).unwrap(), BigNat::from(24u32));
        assert_eq!(group_order(GroupKind::SL, 3, 2).unwrap(), BigNat::from(168u32));
        assert_eq!(group_order(GroupKind::PSL, 2, 5).unwrap(), BigNat::from(60u32));
        assert_eq!(group_order(GroupKind::PGL, 2, 3).unwrap(), BigNat::from(24u32));
    }

    #[test]
    fn enumeration_counts_match_orders() {
        for (n, p, e) in [(1, 2, 1), (2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 2, 1), (2, 5, 1), (3, 3, 1)] {
            let f = make_field(p, e).unwrap();
            let q = f.size() as u64;
            for kind in [GroupKind::GL, GroupKind::SL] {
                let elems = collect_elements(kind, n, &f).unwrap();
                assert_eq!(BigNat::from(elems.len()), group_order(kind, n, q).unwrap());
                let distinct: std::collections::HashSet<_> = elems.iter().collect();
                assert_eq!(distinct.len(), elems.len());
                let parts = par_fold_group(kind, n, &f, || 0usize, |c, _| *c += 1).unwrap();
                assert_eq!(parts.iter().sum::<usize>(), elems.len());
            }
        }
    }

    #[test]
    fn random_gl_1_2_is_identity() {
        let f = make_field(2, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(random_element(GroupKind::GL, 1, &f, &mut rng).unwrap().is_identity());
        }
    }

    #[test]
    fn random_sl_2_2_uniform() {
        let f = make_field(2, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let draws = 60_000;
        let mut counts: HashMap<Matrix, u64> = HashMap::new();
        for _ in 0..draws {
            let g = random_element(GroupKind::SL, 2, &f, &mut rng).unwrap();
            *counts.entry(g).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 5 degrees of freedom: mean 5, sd sqrt(10)
        assert!(chi2 < 5.0 + 3.0 * 10f64.sqrt(), "chi2 = {chi2}");
    }

    #[test]
    fn random_gl_2_3_hits_everything() {
        let f = make_field(3, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..10_000 {
            let g = random_element(GroupKind::GL, 2, &f, &mut rng).unwrap();
            assert!(g.is_invertible(&f));
            seen.insert(g);
        }
        assert_eq!(seen.len(), 48);
    }

    #[test]
    fn random_sl_has_det_one() {
        let f = make_field(5, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            assert_eq!(random_element(GroupKind::SL, 3, &f, &mut rng).unwrap().det(&f), 1);
        }
    }

    #[test]
    fn standard_generators_lie_in_group() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let f = make_field(p, e).unwrap();
            for n in 1..=4 {
                for g in standard_generators(GroupKind::SL, n, &f).unwrap() {
                    assert_eq!(g.det(&f), 1);
                }
            }
        }
    }
}
