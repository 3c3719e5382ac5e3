//! Group-family corollaries: wreath products, PSL(2,q), the two GL transfer
//! branches and direct powers `G^n`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use super::combinatorics::{binomial_tail, factorial, ln_big, symmetric_degrees};
use super::psl_table::character_table_psl2;
use super::{
    bound_params, bound_params_with, entanglement_lower_bound, Boundary, gallagher_check, rational_pow, BoundParams, Epsilon,
};
use crate::error::{Error, Result};
use crate::format::json_f64;
use crate::group::field::prime_power;
use crate::group::{make_psl2, Element, FiniteGroup, PSL_SUPPORTED};
use crate::repr::young::partition_label;
use crate::repr::{irreps_for, CharacterTable, IRREP_ORDER_CAP};

#[derive(Clone, Copy, Debug)]
pub struct BoundOptions {
    /// distinguishability threshold on the total variation distance
    pub threshold: f64,
    /// total number of coset states consumed
    pub t: u64,
    pub k_max: u64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { threshold: 1.0 / 3.0, t: 1, k_max: 10 }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub family: String,
    pub params: Map<String, Value>,
    pub group_order: BigUint,
    pub bound: Option<BoundParams>,
    pub options: BoundOptions,
    pub k_lower_bound: u64,
    /// false when a corollary hypothesis fails; `failing` names it
    pub applicable: bool,
    pub failing: Option<String>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    pub extra: Map<String, Value>,
}

pub fn json_big(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

impl FamilyReport {
    fn new(family: &str, params: Map<String, Value>, group_order: BigUint, options: BoundOptions) -> Self {
        FamilyReport {
            family: family.into(),
            params,
            group_order,
            bound: None,
            options,
            k_lower_bound: 0,
            applicable: true,
            failing: None,
            notes: Vec::new(),
            warnings: Vec::new(),
            extra: Map::new(),
        }
    }

    fn attach(&mut self, params: BoundParams) -> Result<()> {
        self.k_lower_bound = entanglement_lower_bound(&params, self.options.threshold, self.options.t)?;
        self.bound = Some(params);
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("family".into(), json!(self.family));
        out.insert("params".into(), Value::Object(self.params.clone()));
        out.insert("group_order".into(), json_big(&self.group_order));
        out.insert("applicable".into(), json!(self.applicable));
        if let Some(f) = &self.failing {
            out.insert("failing_inequality".into(), json!(f));
        }
        if let Some(b) = &self.bound {
            out.insert("epsilon".into(), json!(b.epsilon.describe()));
            out.insert("epsilon_value".into(), json_f64(b.eps()));
            out.insert("s_epsilon_labels".into(), json!(b.s_epsilon));
            out.insert("d_epsilon".into(), json_big(&b.d_epsilon));
            out.insert("sum_dchi".into(), json_big(&b.sum_dchi));
            out.insert("sum_d".into(), json_big(&b.sum_d));
            out.insert("irrep_count".into(), json_big(&b.irrep_count));
            out.insert("delta1".into(), json_f64(b.delta1()));
            if let Some(exact) = b.delta1_exact() {
                out.insert("delta1_exact".into(), json!(exact.to_string()));
            }
            out.insert("delta1_cauchy_schwarz".into(), json_f64(b.cauchy_schwarz_form()));
            let rows: Vec<Value> = (1..=self.options.k_max)
                .map(|k| json!({"k": k, "value": json_f64(b.delta2(k)), "hypothesis_ok": b.hypothesis_ok(k)}))
                .collect();
            out.insert("delta2_by_k".into(), Value::Array(rows));
        }
        out.insert("k_lower_bound".into(), json!(self.k_lower_bound));
        out.insert("threshold".into(), json_f64(self.options.threshold));
        out.insert("t".into(), json!(self.options.t));
        out.insert("interpretation_notes".into(), json!(self.notes));
        out.insert("warnings".into(), json!(self.warnings));
        for (k, v) in &self.extra {
            out.insert(k.clone(), v.clone());
        }
        Value::Object(out)
    }
}

fn k_note(threshold: f64, t: u64) -> String {
    format!(
        "k_lower_bound is the largest k with sqrt({t}*delta2(k)) < {} and 2k*eps < 1; \
         distinguishing at this threshold needs measurements entangled across more registers",
        crate::format::fmt_f64(threshold)
    )
}

/// `S_n wr S_2` with `ε = n^{-αn}`, from hook-length degrees only.
pub fn wreath_bound(n: usize, alpha: (u64, u64), options: BoundOptions) -> Result<FamilyReport> {
    if !(2..=40).contains(&n) {
        return Err(Error::OutOfRange(format!("wreath bound needs 2 <= n <= 40, got {n}")));
    }
    let (num, den) = alpha;
    if num == 0 || den == 0 {
        return Err(Error::OutOfRange("alpha must be a positive fraction".into()));
    }
    let epsilon = Epsilon::NegPower { n: n as u64, num, den };
    let degrees = symmetric_degrees(n);
    let p = BigUint::from(degrees.len());
    let nfact = factorial(n as u64);
    let order = &nfact * &nfact * 2u32;
    let mut s_epsilon = Vec::new();
    let mut sum_dchi = BigUint::zero();
    let mut d_epsilon = BigUint::zero();
    let mut sum_lin = BigUint::zero();
    for (shape, d) in &degrees {
        sum_lin += d;
        let d2 = d * d;
        // θ_λ and θ'_λ have degree d², value ±d at h
        if epsilon.admits(d, &d2) {
            let label = partition_label(shape);
            s_epsilon.push(format!("theta{label}"));
            s_epsilon.push(format!("theta'{label}"));
            sum_dchi += &d2 * d * 2u32;
            d_epsilon += &d2 * &d2 * 2u32;
        }
    }
    // Σ_ν d_ν = Σ_λ 2d_λ² + Σ_{i<j} 2 d_i d_j = (Σ d)² + n!
    let sum_d = &sum_lin * &sum_lin + &nfact;
    let irrep_count = &p * (&p - 1u32) / 2u32 + &p * 2u32;
    let params = BoundParams {
        epsilon,
        s_epsilon,
        d_epsilon,
        sum_dchi,
        sum_d,
        group_order: order.clone(),
        irrep_count,
    };
    let mut params_json = Map::new();
    params_json.insert("n".into(), json!(n));
    params_json.insert("alpha".into(), json!(format!("{num}/{den}")));
    let mut report = FamilyReport::new("wreath", params_json, order, options);
    // n^{-αn} + n^{3αn} e^{2ν√n} / (√2 n!)
    let a = num as f64 / den as f64;
    let nf = n as f64;
    let nu = std::f64::consts::PI * (2.0f64 / 3.0).sqrt();
    let asym = (-a * nf * nf.ln()).exp()
        + (3.0 * a * nf * nf.ln() + 2.0 * nu * nf.sqrt() - 0.5 * 2f64.ln() - ln_big(&nfact)).exp();
    report.extra.insert("asymptotic_delta1".into(), json_f64(asym));
    report.extra.insert("partition_count".into(), json_big(&p));
    report.notes.push(
        "asymptotic_delta1 uses the n^{-alpha n} + n^{3 alpha n} e^{2 nu sqrt n}/(sqrt2 n!) estimate and is informational only".into(),
    );
    report.notes.push(k_note(options.threshold, options.t));
    let delta1 = params.delta1();
    report.attach(params)?;
    if delta1 >= 1.0 {
        report.notes.push(format!(
            "exact delta1 = {} >= 1 at n = {n}, alpha = {num}/{den}: the decay sets in only for larger n or smaller alpha",
            crate::format::fmt_f64(delta1)
        ));
    }
    Ok(report)
}

/// PSL(2,q) with `ε = 2/(q-1)` (odd q) or `1/(q-1)` (even q).
pub fn psl_bound(q: u64, options: BoundOptions) -> Result<FamilyReport> {
    let table = character_table_psl2(q)?;
    let epsilon = if q % 2 == 1 { Epsilon::ratio(2, q as i64 - 1) } else { Epsilon::ratio(1, q as i64 - 1) };
    let data = table.character_data();
    let inclusive = bound_params(&data, epsilon.clone())?;
    let params = bound_params_with(&data, epsilon, Boundary::Exclude)?;
    let mut params_json = Map::new();
    params_json.insert("q".into(), json!(q));
    let mut report = FamilyReport::new("psl2", params_json, BigUint::from(table.order), options);

    let (class_size, source) = if q <= 13 && PSL_SUPPORTED.contains(&(q as u32)) {
        let g = make_psl2(q as u32)?;
        let h = g.distinguished_involution().expect("PSL(2,q) has involutions");
        (g.conjugacy_class(h).len() as u64, "enumeration")
    } else {
        (table.class_size(), "centralizer order")
    };
    report.extra.insert(
        "involution_class".into(),
        json!({"size": class_size, "source": source, "centralizer_order": table.centralizer_order, "quoted_size": table.quoted_class_size}),
    );
    if class_size != table.quoted_class_size {
        report.warnings.push(format!(
            "involution class size: {source} gives {class_size}, the classical table text quotes {}",
            table.quoted_class_size
        ));
    }
    if inclusive.s_epsilon.len() > params.s_epsilon.len() {
        let boundary: Vec<&str> = inclusive
            .s_epsilon
            .iter()
            .filter(|l| !params.s_epsilon.contains(l))
            .map(String::as_str)
            .collect();
        report.notes.push(format!(
            "{} sit exactly at |chi(h)|/d = eps and are bounded by the eps term instead of entering S_eps; \
             keeping them would give delta1 = {}",
            boundary.join(", "),
            crate::format::fmt_f64(inclusive.delta1())
        ));
    }
    report.notes.push(
        "k grows like log q at a fixed threshold, which is Theta(log|G|) and not linear in q".into(),
    );
    report.notes.push(k_note(options.threshold, options.t));
    report.extra.insert("asymptotic_delta1".into(), json_f64(params.cauchy_schwarz_form()));
    report.extra.insert("table".into(), serde_json::to_value(&table.rows)?);
    report.attach(params)?;
    Ok(report)
}

/// GL(n, p^m): the better of the `S_⌊n/2⌋ wr S_2 ≤ S_n ≤ GL(n)` branch and the
/// `GL(2, p^{⌊n/2⌋m}) ≤ GL(n)` branch through PSL.
pub fn gl_bound(n: usize, p: u64, m: u32, options: BoundOptions) -> Result<FamilyReport> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("GL bound needs n >= 2, got {n}")));
    }
    if prime_power(p) != Some((p, 1)) {
        return Err(Error::OutOfRange(format!("p = {p} is not prime")));
    }
    if m == 0 {
        return Err(Error::OutOfRange("m must be >= 1".into()));
    }
    let half = n / 2;
    let mut branches: Vec<(String, FamilyReport)> = Vec::new();
    let mut skipped = Vec::new();
    if (2..=40).contains(&half) {
        branches.push((format!("wreath:{half}"), wreath_bound(half, (1, 4), options)?));
    } else {
        skipped.push(format!("wreath branch needs 2 <= floor(n/2) <= 40 (got {half})"));
    }
    let exp = half as u32 * m;
    match p.checked_pow(exp).filter(|&q| (4..=1 << 20).contains(&q)) {
        Some(q) => branches.push((format!("psl2:{q}"), psl_bound(q, options)?)),
        None => skipped.push(format!("psl branch needs 4 <= p^(floor(n/2) m) <= 2^20 (p={p}, exponent {exp})")),
    }
    if branches.is_empty() {
        return Err(Error::OutOfRange(format!("no transfer branch available: {}", skipped.join("; "))));
    }
    let winner = branches
        .iter()
        .enumerate()
        .max_by_key(|(i, (_, r))| (r.k_lower_bound, std::cmp::Reverse(*i)))
        .map(|(i, _)| i)
        .unwrap();
    let summary: Vec<Value> = branches
        .iter()
        .map(|(name, r)| {
            json!({
                "branch": name,
                "k_lower_bound": r.k_lower_bound,
                "delta1": r.bound.as_ref().map(|b| json_f64(b.delta1())),
            })
        })
        .collect();
    let (name, chosen) = branches.swap_remove(winner);
    let mut params_json = Map::new();
    params_json.insert("n".into(), json!(n));
    params_json.insert("p".into(), json!(p));
    params_json.insert("m".into(), json!(m));
    let mut report = FamilyReport::new("gl", params_json, chosen.group_order.clone(), options);
    report.k_lower_bound = chosen.k_lower_bound;
    report.bound = chosen.bound;
    report.warnings = chosen.warnings;
    report.notes.push(format!(
        "bound transferred from the subgroup {name}; group_order refers to that subgroup"
    ));
    report.notes.extend(skipped);
    report.extra.insert("winning_branch".into(), json!(name));
    report.extra.insert("branches".into(), Value::Array(summary));
    Ok(report)
}

/// `G^n` hidden `⟨(h,…,h)⟩`, with `ε = (1 - 2|C(h)|/|G|)^{⌊n/c⌋}` and the
/// `S_ε` sums bounded by the binomial tail over Λ-positions.
pub fn direct_power_bound(
    group: &FiniteGroup,
    h: Element,
    n: u64,
    c: Option<f64>,
    kappa: f64,
    options: BoundOptions,
) -> Result<FamilyReport> {
    if group.order() > IRREP_ORDER_CAP {
        return Err(Error::ResourceCap(format!(
            "character computation limited to |G| <= {IRREP_ORDER_CAP}"
        )));
    }
    if n == 0 {
        return Err(Error::OutOfRange("n must be >= 1".into()));
    }
    let table = CharacterTable::from_irreps(group, &irreps_for(group)?);
    let gal = gallagher_check(group, &table, h)?;
    let order = BigUint::from(group.order());
    let lambda: BigUint = gal.entries.iter().filter(|e| e.in_lambda).map(|e| BigUint::from(e.degree * e.degree)).sum();
    let mu = &order - &lambda;
    let sum_d_base: BigUint = table.degrees.iter().map(|&d| BigUint::from(d)).sum();
    let rhat = BigUint::from(table.degrees.len());

    let mut params_json = Map::new();
    params_json.insert("group".into(), json!(group.kind().to_string()));
    params_json.insert("h".into(), json!(group.format_element(h)));
    params_json.insert("n".into(), json!(n));
    params_json.insert("kappa".into(), json_f64(kappa));
    let mut report = FamilyReport::new("power", params_json, order.pow(n as u32), options);

    let gate1 = order > &lambda * &sum_d_base;
    let gate2 = order > &rhat * &lambda * &lambda;
    report.extra.insert("lambda_labels".into(), json!(gal.lambda()));
    report.extra.insert("lambda".into(), json_big(&lambda));
    report.extra.insert("mu".into(), json_big(&mu));
    report.extra.insert("gallagher".into(), serde_json::to_value(&gal)?);
    report.extra.insert(
        "direct1".into(),
        json!({"text": format!("{} > {}*{}", order, lambda, sum_d_base), "pass": gate1}),
    );
    report.extra.insert(
        "direct2".into(),
        json!({"text": format!("sqrt({}) > {}*sqrt({})", order, lambda, rhat), "pass": gate2}),
    );

    let slack = group.order() as i64 - 2 * gal.centralizer_order as i64;
    let fail = if !gate1 && !gate2 {
        Some(format!(
            "neither |G| > lambda*sum d ({order} <= {lambda}*{sum_d_base}) nor sqrt|G| > sqrt|Ghat|*lambda holds"
        ))
    } else if slack <= 0 {
        Some(format!("1 - 2|C(h)|/|G| = {slack}/{} is not positive, so eps vanishes", group.order()))
    } else if mu.is_zero() {
        Some("every irrep is in Lambda (mu = 0)".into())
    } else {
        None
    };
    if let Some(f) = fail {
        report.applicable = false;
        report.failing = Some(f);
        return Ok(report);
    }

    let base_ratio = BigRational::new(BigInt::from(slack), BigInt::from(group.order()));
    let alpha = BigRational::from_integer(BigInt::from(lambda.clone()));
    let beta = BigRational::from_integer(BigInt::from(mu.clone()));
    let min_c = order.to_f64().unwrap() / mu.to_f64().unwrap();
    let candidates: Vec<f64> = match c {
        Some(c) => vec![c],
        None => (2..=16).map(f64::from).filter(|&c| c >= min_c).collect(),
    };
    if candidates.is_empty() {
        report.applicable = false;
        report.failing = Some(format!("no c in 2..=16 reaches (lambda+mu)/mu = {min_c}"));
        return Ok(report);
    }
    let mut best: Option<(f64, BoundParams, u64, super::combinatorics::BinomialTail)> = None;
    for &cv in &candidates {
        let tail = binomial_tail(&alpha, &beta, n, cv)?;
        let exact = tail.exact.to_integer().to_biguint().expect("tail is a positive integer");
        let params = BoundParams {
            epsilon: Epsilon::Rational(rational_pow(&base_ratio, tail.t)),
            s_epsilon: vec![format!(
                "tuples with at least {} of {n} factors in Lambda {{{}}}",
                n - tail.t,
                gal.lambda().join(", ")
            )],
            d_epsilon: exact.clone(),
            sum_dchi: exact,
            sum_d: sum_d_base.pow(n as u32),
            group_order: order.pow(n as u32),
            irrep_count: rhat.pow(n as u32),
        };
        let k = entanglement_lower_bound(&params, options.threshold, options.t)?;
        let better = match &best {
            None => true,
            Some((_, bp, bk, _)) => k > *bk || (k == *bk && params.delta2(1) < bp.delta2(1)),
        };
        if better {
            best = Some((cv, params, k, tail));
        }
    }
    let (cv, params, _, tail) = best.unwrap();
    let kappa_ok = (cv * std::f64::consts::E * group.order() as f64 / lambda.to_f64().unwrap()).ln() / cv
        <= (1.0 + kappa).ln();
    report.extra.insert("c".into(), json_f64(cv));
    report.extra.insert("t_positions".into(), json!(tail.t));
    report.extra.insert("tail_exact".into(), json!(tail.exact.to_string()));
    report.extra.insert("tail_bound".into(), json_f64(tail.bound()));
    report.extra.insert("kappa_satisfied".into(), json!(kappa_ok));
    report.extra.insert("omega_n_conclusion".into(), json!(true));
    report.notes.push(
        "S_eps sums are replaced by the exact binomial tail over Lambda positions, an upper bound, so delta1 and delta2 are upper bounds".into(),
    );
    if c.is_none() {
        report.notes.push("c chosen from 2..=16 to maximize k_lower_bound".into());
    }
    report.notes.push(k_note(options.threshold, options.t));
    report.k_lower_bound = entanglement_lower_bound(&params, options.threshold, options.t)?;
    report.bound = Some(params);
    Ok(report)
}
