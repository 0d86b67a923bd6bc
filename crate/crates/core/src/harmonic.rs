//! Averages of 1/ord(g) over cyclic, linear and projective linear groups.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::classes::{centralizer_order, for_each_class_label, IrreducibleTable};
use crate::error::{Error, Result};
use crate::ff::Field;
use crate::matgrp::{par_fold_group, GroupKind, OrderContext};
use crate::numth::{self, BigNat, BigRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaMethod {
    Cyclic,
    Brute,
    ClassBased,
    ProjectiveBrute,
}

impl EtaMethod {
    pub fn name(self) -> &'static str {
        match self {
            EtaMethod::Cyclic => "cyclic",
            EtaMethod::Brute => "brute",
            EtaMethod::ClassBased => "class-based",
            EtaMethod::ProjectiveBrute => "projective-brute",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaReport {
    pub group: String,
    pub kind: GroupKind,
    pub n: usize,
    pub q: u64,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub eta: BigRational,
    pub method: EtaMethod,
    /// Elements (or classes, for the class-based method) visited.
    pub visited: u64,
}

impl EtaReport {
    fn new(kind: GroupKind, n: usize, q: u64, eta: BigRational, method: EtaMethod, visited: u64) -> EtaReport {
        EtaReport {
            group: format!("{}({n},{q})", kind.name()),
            kind,
            n,
            q,
            eta,
            method,
            visited,
        }
    }

    pub fn csv_header() -> &'static str {
        "group,kind,n,q,eta_num,eta_den,method"
    }

    pub fn csv_row(&self) -> String {
        // the group name contains commas
        format!(
            "\"{}\",{},{},{},{},{},{}",
            self.group,
            self.kind.name(),
            self.n,
            self.q,
            self.eta.numer(),
            self.eta.denom(),
            self.method.name()
        )
    }
}

/// (1/n) sum over d | n of phi(d)/d.
pub fn eta_cyclic(n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let fac = numth::factorize(&BigNat::from(n))?;
    let mut sum = BigRational::zero();
    for d in fac.divisors() {
        sum += numth::ratio(&numth::euler_phi(&d)?, &d);
    }
    Ok(sum / BigRational::from_integer(n.into()))
}

/// Sum of count/order over a histogram of element orders.
fn histogram_sum(hist: &HashMap<BigNat, u64>) -> BigRational {
    hist.iter()
        .fold(BigRational::zero(), |acc, (ord, &c)| acc + numth::ratio(&BigNat::from(c), ord))
}

fn merge(parts: Vec<HashMap<BigNat, u64>>) -> HashMap<BigNat, u64> {
    let mut total: HashMap<BigNat, u64> = HashMap::new();
    for part in parts {
        for (k, v) in part {
            *total.entry(k).or_default() += v;
        }
    }
    total
}

/// Histogram of element orders (or projective orders) over GL or SL.
pub fn order_histogram(kind: GroupKind, n: usize, field: &Field, projective: bool) -> Result<HashMap<BigNat, u64>> {
    let ctx = OrderContext::new(n, field)?;
    let parts = par_fold_group(kind, n, field, HashMap::new, |hist: &mut HashMap<BigNat, u64>, g| {
        let ord = if projective {
            ctx.projective_order(g)
        } else {
            ctx.order(g)
        }
        .expect("enumerated elements are invertible");
        *hist.entry(ord).or_default() += 1;
    })?;
    Ok(merge(parts))
}

pub fn eta_bruteforce(kind: GroupKind, n: usize, field: &Field) -> Result<EtaReport> {
    if !matches!(kind, GroupKind::GL | GroupKind::SL) {
        return Err(Error::InvalidParameter(
            "use eta_projective_bruteforce for PGL and PSL".into(),
        ));
    }
    let hist = order_histogram(kind, n, field, false)?;
    let count: u64 = hist.values().sum();
    let eta = histogram_sum(&hist) / BigRational::from_integer(count.into());
    Ok(EtaReport::new(kind, n, field.size() as u64, eta, EtaMethod::Brute, count))
}

/// Average of 1/(projective order) over GL (for PGL) or SL (for PSL). Every
/// fibre of the quotient map has the same size, so this is eta of the quotient.
pub fn eta_projective_bruteforce(kind: GroupKind, n: usize, field: &Field) -> Result<EtaReport> {
    let cover = match kind {
        GroupKind::PGL => GroupKind::GL,
        GroupKind::PSL => GroupKind::SL,
        _ => return Err(Error::InvalidParameter("projective kind must be PGL or PSL".into())),
    };
    let hist = order_histogram(cover, n, field, true)?;
    let count: u64 = hist.values().sum();
    let eta = histogram_sum(&hist) / BigRational::from_integer(count.into());
    Ok(EtaReport::new(kind, n, field.size() as u64, eta, EtaMethod::ProjectiveBrute, count))
}

/// Sum over class labels of 1/(centralizer order * element order).
pub fn eta_classbased(n: usize, field: &Field) -> Result<EtaReport> {
    let table = IrreducibleTable::new(n, field)?;
    let q = field.size() as u64;
    let mut eta = BigRational::zero();
    let mut failure = None;
    let visited = for_each_class_label(n, &table, |label| match table.class_order(label) {
        Ok(ord) => eta += numth::ratio(&BigNat::one(), &(centralizer_order(label, q) * ord)),
        Err(e) => failure = Some(e),
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(EtaReport::new(GroupKind::GL, n, q, eta, EtaMethod::ClassBased, visited))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub q: u64,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub eta: BigRational,
    pub neg_log_eta: f64,
    /// 2 sqrt(n ln n ln q)
    pub reference: f64,
    /// eta * exp(reference)
    pub ratio: f64,
    /// -ln(eta) / reference, absent when the reference is 0
    pub exponent_ratio: Option<f64>,
}

impl BoundRow {
    pub fn csv_header() -> &'static str {
        "n,q,eta_num,eta_den,neg_log_eta,reference,ratio,exponent_ratio"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.q,
            self.eta.numer(),
            self.eta.denom(),
            self.neg_log_eta,
            self.reference,
            self.ratio,
            self.exponent_ratio.map(|r| r.to_string()).unwrap_or_default()
        )
    }
}

/// ln of a positive rational, accurate even when numerator and denominator
/// overflow f64.
pub fn ln_ratio(r: &BigRational) -> f64 {
    fn ln_big(x: &num_bigint::BigInt) -> f64 {
        let bits = x.bits();
        if bits < 1000 {
            return x.to_f64().unwrap().ln();
        }
        let shift = bits - 64;
        (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_big(r.numer()) - ln_big(r.denom())
}

pub fn bound_curve(ns: impl IntoIterator<Item = usize>, field: &Field) -> Result<Vec<BoundRow>> {
    let q = field.size() as u64;
    ns.into_iter()
        .map(|n| {
            let eta = eta_classbased(n, field)?.eta;
            let neg_log_eta = -ln_ratio(&eta);
            let nf = n as f64;
            let reference = 2.0 * (nf * nf.ln() * (q as f64).ln()).sqrt();
            let ratio = (-neg_log_eta + reference).exp();
            let exponent_ratio = (reference > 0.0).then(|| neg_log_eta / reference);
            Ok(BoundRow {
                n,
                q,
                eta,
                neg_log_eta,
                reference,
                ratio,
                exponent_ratio,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaChecks {
    pub n: usize,
    pub q: u64,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub eta_gl: BigRational,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub eta_sl: BigRational,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub eta_pgl: BigRational,
    #[serde(serialize_with = "numth::serialize_ratio")]
    pub eta_psl: BigRational,
    /// eta_SL <= (q-1) eta_GL
    pub subgroup: bool,
    /// eta_GL <= eta_PGL <= (q-1) eta_GL
    pub quotient: bool,
    /// eta_PSL <= 2 eta_SL
    pub psl_vs_sl: bool,
}

impl LemmaChecks {
    pub fn all_hold(&self) -> bool {
        self.subgroup && self.quotient && self.psl_vs_sl
    }
}

pub fn lemma_checks(n: usize, field: &Field) -> Result<LemmaChecks> {
    let q = field.size() as u64;
    let eta_gl = eta_bruteforce(GroupKind::GL, n, field)?.eta;
    let eta_sl = eta_bruteforce(GroupKind::SL, n, field)?.eta;
    let eta_pgl = eta_projective_bruteforce(GroupKind::PGL, n, field)?.eta;
    let eta_psl = eta_projective_bruteforce(GroupKind::PSL, n, field)?.eta;
    let qm1 = BigRational::from_integer((q - 1).into());
    let two = BigRational::from_integer(2.into());
    Ok(LemmaChecks {
        n,
        q,
        subgroup: eta_sl <= &qm1 * &eta_gl,
        quotient: eta_gl <= eta_pgl && eta_pgl <= &qm1 * &eta_gl,
        psl_vs_sl: eta_psl <= &two * &eta_sl,
        eta_gl,
        eta_sl,
        eta_pgl,
        eta_psl,
    })
}
