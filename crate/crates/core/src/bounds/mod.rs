//! The δ₁/δ₂ bound machinery, evaluated exactly from character data.

pub mod combinatorics;
pub mod families;
pub mod psl_table;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::repr::{CharacterTable, Irrep};
use combinatorics::{ln_big, pow_rational};

pub use families::{direct_power_bound, gl_bound, psl_bound, wreath_bound, BoundOptions, FamilyReport};
pub use psl_table::{character_table_psl2, PslTable};

/// The cutoff ε. Either an exact rational or `n^(-(num/den) n)`, whose
/// comparisons are decided in integers.
#[derive(Clone, Debug, PartialEq)]
pub enum Epsilon {
    Rational(BigRational),
    NegPower { n: u64, num: u64, den: u64 },
}

impl Epsilon {
    pub fn ratio(num: i64, den: i64) -> Self {
        Epsilon::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn value(&self) -> f64 {
        match self {
            Epsilon::Rational(r) => r.to_f64().unwrap_or(0.0),
            Epsilon::NegPower { n, num, den } => {
                (-(*num as f64 / *den as f64) * *n as f64 * (*n as f64).ln()).exp()
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Epsilon::Rational(r) => r.is_positive(),
            Epsilon::NegPower { n, den, .. } => *n >= 1 && *den >= 1,
        }
    }

    /// `|χ|/d ≥ ε`
    pub fn admits(&self, chi_abs: &BigUint, degree: &BigUint) -> bool {
        match self {
            Epsilon::Rational(r) => {
                let lhs = BigInt::from(chi_abs.clone()) * r.denom();
                let rhs = r.numer() * BigInt::from(degree.clone());
                lhs >= rhs
            }
            Epsilon::NegPower { n, num, den } => {
                if chi_abs.is_zero() {
                    return false;
                }
                // d/|χ| ≤ n^{(num/den) n}  ⇔  d^den ≤ n^{num n} |χ|^den
                let lhs = degree.pow(*den as u32);
                let rhs = BigUint::from(*n).pow((*num * *n) as u32) * chi_abs.pow(*den as u32);
                lhs <= rhs
            }
        }
    }

    /// `|χ|/d > ε`
    pub fn exceeded_by(&self, chi_abs: &BigUint, degree: &BigUint) -> bool {
        match self {
            Epsilon::Rational(r) => {
                BigInt::from(chi_abs.clone()) * r.denom() > r.numer() * BigInt::from(degree.clone())
            }
            Epsilon::NegPower { n, num, den } => {
                !chi_abs.is_zero()
                    && degree.pow(*den as u32)
                        < BigUint::from(*n).pow((*num * *n) as u32) * chi_abs.pow(*den as u32)
            }
        }
    }

    /// The hypothesis `2kε < 1`.
    pub fn hypothesis_ok(&self, k: u64) -> bool {
        match self {
            Epsilon::Rational(r) => {
                BigInt::from(2 * k) * r.numer() < r.denom().clone()
            }
            Epsilon::NegPower { n, num, den } => {
                BigUint::from(2 * k).pow(*den as u32) < BigUint::from(*n).pow((*num * *n) as u32)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Epsilon::Rational(r) => r.to_string(),
            Epsilon::NegPower { n, num, den } => format!("{n}^(-{num}/{den}*{n})"),
        }
    }
}

/// One row of character data at `h`; `count` irreps share degree and value.
#[derive(Clone, Debug, PartialEq)]
pub struct CharEntry {
    pub label: String,
    pub degree: BigUint,
    pub chi_h: BigInt,
    pub count: BigUint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterData {
    pub group_order: BigUint,
    pub entries: Vec<CharEntry>,
}

/// Character values of an involution are integers.
fn integral(z: Complex64, context: &str) -> Result<BigInt> {
    let r = z.re.round();
    if (z.re - r).abs() > 1e-6 || z.im.abs() > 1e-6 {
        return Err(Error::NonIntegral { value: z.re, context: context.into() });
    }
    Ok(BigInt::from(r as i64))
}

impl CharacterData {
    pub fn from_table(table: &CharacterTable, h: Element) -> Result<Self> {
        let entries = table
            .labels
            .iter()
            .enumerate()
            .map(|(i, label)| {
                Ok(CharEntry {
                    label: label.clone(),
                    degree: BigUint::from(table.degrees[i]),
                    chi_h: integral(table.value(i, h), label)?,
                    count: BigUint::one(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(CharacterData { group_order: BigUint::from(table.group_order), entries })
    }

    pub fn from_irreps(group: &FiniteGroup, irreps: &[Irrep], h: Element) -> Result<Self> {
        let entries = irreps
            .iter()
            .map(|r| {
                Ok(CharEntry {
                    label: r.label().to_string(),
                    degree: BigUint::from(r.degree()),
                    chi_h: integral(r.character(h), r.label())?,
                    count: BigUint::one(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(CharacterData { group_order: BigUint::from(group.order()), entries })
    }

    pub fn irrep_count(&self) -> BigUint {
        self.entries.iter().map(|e| &e.count).sum()
    }

    pub fn sum_degrees(&self) -> BigUint {
        self.entries.iter().map(|e| &e.count * &e.degree).sum()
    }

    pub fn sum_degree_squares(&self) -> BigUint {
        self.entries.iter().map(|e| &e.count * &e.degree * &e.degree).sum()
    }

    /// `Σ_τ d_τ |χ_τ(h)|` over every irrep.
    pub fn sum_dchi(&self) -> BigUint {
        self.entries
            .iter()
            .map(|e| &e.count * &e.degree * e.chi_h.magnitude())
            .sum()
    }

    pub fn check_complete(&self) -> Result<()> {
        let sum = self.sum_degree_squares();
        if sum != self.group_order {
            return Err(Error::IncompleteIrreps {
                sum: sum.to_usize().unwrap_or(usize::MAX),
                order: self.group_order.to_usize().unwrap_or(usize::MAX),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundParams {
    pub epsilon: Epsilon,
    pub s_epsilon: Vec<String>,
    /// `Σ_{τ∈S_ε} d_τ²`
    pub d_epsilon: BigUint,
    /// `Σ_{τ∈S_ε} d_τ|χ_τ(h)|`
    pub sum_dchi: BigUint,
    /// `Σ_ν d_ν`
    pub sum_d: BigUint,
    pub group_order: BigUint,
    pub irrep_count: BigUint,
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    let r = BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()));
    match r.to_f64() {
        Some(x) if x.is_finite() && (x != 0.0 || num.is_zero()) => x,
        _ => (ln_big(num) - ln_big(den)).exp(),
    }
}

/// How irreps with `|χ(h)|/d` exactly equal to ε are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// `S_ε = {τ : |χ_τ(h)|/d_τ ≥ ε}`
    Include,
    /// Boundary irreps left out. Still sound: outside `S_ε` the argument only
    /// needs `|χ|/d ≤ ε`.
    Exclude,
}

/// Collects `S_ε` and the sums entering δ₁ and δ₂.
pub fn bound_params(data: &CharacterData, epsilon: Epsilon) -> Result<BoundParams> {
    bound_params_with(data, epsilon, Boundary::Include)
}

pub fn bound_params_with(data: &CharacterData, epsilon: Epsilon, boundary: Boundary) -> Result<BoundParams> {
    if !epsilon.is_positive() {
        return Err(Error::Hypothesis("epsilon must be positive".into()));
    }
    data.check_complete()?;
    let mut s_epsilon = Vec::new();
    let mut d_epsilon = BigUint::zero();
    let mut sum_dchi = BigUint::zero();
    for e in &data.entries {
        let inside = match boundary {
            Boundary::Include => epsilon.admits(e.chi_h.magnitude(), &e.degree),
            Boundary::Exclude => epsilon.exceeded_by(e.chi_h.magnitude(), &e.degree),
        };
        if inside {
            s_epsilon.push(e.label.clone());
            d_epsilon += &e.count * &e.degree * &e.degree;
            sum_dchi += &e.count * &e.degree * e.chi_h.magnitude();
        }
    }
    Ok(BoundParams {
        epsilon,
        s_epsilon,
        d_epsilon,
        sum_dchi,
        sum_d: data.sum_degrees(),
        group_order: data.group_order.clone(),
        irrep_count: data.irrep_count(),
    })
}

impl BoundParams {
    pub fn eps(&self) -> f64 {
        self.epsilon.value()
    }

    /// `(1/|G|)(Σ_{S_ε} d|χ(h)|)(Σ_ν d_ν)`, exactly.
    pub fn delta1_excess(&self) -> BigRational {
        BigRational::new(
            BigInt::from(&self.sum_dchi * &self.sum_d),
            BigInt::from(self.group_order.clone()),
        )
    }

    /// δ₁ exactly, when ε is rational.
    pub fn delta1_exact(&self) -> Option<BigRational> {
        match &self.epsilon {
            Epsilon::Rational(r) => Some(r + self.delta1_excess()),
            Epsilon::NegPower { .. } => None,
        }
    }

    pub fn delta1(&self) -> f64 {
        if let Some(d) = self.delta1_exact() {
            if let Some(x) = d.to_f64() {
                return x;
            }
        }
        self.eps() + ratio_f64(&(&self.sum_dchi * &self.sum_d), &self.group_order)
    }

    /// `ε + Σ_{S_ε} d|χ(h)| · (|Ĝ|/|G|)^{1/2}`, never below δ₁.
    pub fn cauchy_schwarz_form(&self) -> f64 {
        self.eps() + ratio_f64(&self.sum_dchi, &BigUint::one()) * ratio_f64(&self.irrep_count, &self.group_order).sqrt()
    }

    /// `2^k (1 + 2kε) δ₁^{1/2} + 3kε + 3k D_ε/|G|`
    pub fn delta2(&self, k: u64) -> f64 {
        let eps = self.eps();
        let kf = k as f64;
        2f64.powi(k as i32) * (1.0 + 2.0 * kf * eps) * self.delta1().sqrt()
            + 3.0 * kf * eps
            + 3.0 * kf * ratio_f64(&self.d_epsilon, &self.group_order)
    }

    pub fn hypothesis_ok(&self, k: u64) -> bool {
        self.epsilon.hypothesis_ok(k)
    }
}

/// Largest `k ≥ 1` with `√(t δ₂(k)) < θ` and the hypothesis at `k`; 0 if none.
/// `δ₂` is increasing, so the scan stops at the first failure.
pub fn largest_k(
    delta2: impl Fn(u64) -> f64,
    hypothesis: impl Fn(u64) -> bool,
    threshold: f64,
    t: u64,
) -> Result<u64> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Hypothesis(format!("threshold {threshold} must lie in (0, 1)")));
    }
    if t == 0 {
        return Err(Error::Hypothesis("total number of states t must be >= 1".into()));
    }
    let mut best = 0;
    for k in 1..=4096 {
        let ok = hypothesis(k) && (t as f64 * delta2(k)).sqrt() < threshold;
        if !ok {
            break;
        }
        best = k;
    }
    Ok(best)
}

pub fn entanglement_lower_bound(params: &BoundParams, threshold: f64, t: u64) -> Result<u64> {
    largest_k(|k| params.delta2(k), |k| params.hypothesis_ok(k), threshold, t)
}

/// `η = (1/|G|) Σ_τ d_τ|χ_τ(h)|`, so the trace-norm bound reads `2^t η`.
pub fn trace_norm_eta(data: &CharacterData) -> BigRational {
    BigRational::new(BigInt::from(data.sum_dchi()), BigInt::from(data.group_order.clone()))
}

pub fn trace_norm_bound_exact(data: &CharacterData, t: u32) -> BigRational {
    trace_norm_eta(data) * BigRational::from_integer(BigInt::from(2u32).pow(t))
}

pub fn trace_norm_bound(data: &CharacterData, t: u32) -> f64 {
    trace_norm_bound_exact(data, t).to_f64().unwrap_or(f64::INFINITY)
}

/// Smallest `t` whose bound reaches `θ`: fewer states cannot distinguish.
pub fn trace_norm_t_min(data: &CharacterData, threshold: f64) -> u32 {
    let theta = BigRational::from_float(threshold).unwrap_or_else(BigRational::one);
    (1..=4096).find(|&t| trace_norm_bound_exact(data, t) >= theta).unwrap_or(4096)
}

#[derive(Clone, Debug, Serialize)]
pub struct GallagherEntry {
    pub label: String,
    pub degree: usize,
    pub chi_abs: u64,
    pub in_lambda: bool,
    pub ratio: f64,
    /// strictly below the threshold (the boundary case is reported, not rejected)
    pub strict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Gallagher {
    pub centralizer_order: usize,
    pub threshold: f64,
    pub entries: Vec<GallagherEntry>,
}

impl Gallagher {
    pub fn lambda(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| e.in_lambda).map(|e| e.label.as_str()).collect()
    }
}

/// Either `|χ(h)| = d` or `|χ(h)|/d ≤ 1 - 2|C(h)|/|G|`; anything else means
/// the table is wrong.
pub fn gallagher_check(group: &FiniteGroup, table: &CharacterTable, h: Element) -> Result<Gallagher> {
    if group.element_order(h) != 2 {
        return Err(Error::InvalidElement(format!("{} is not an involution", group.format_element(h))));
    }
    let order = table.group_order as i64;
    let cent = table.centralizer_order(table.class_index(h));
    let slack = order - 2 * cent as i64; // threshold = slack / |G|
    let mut entries = Vec::new();
    for (i, label) in table.labels.iter().enumerate() {
        let d = table.degrees[i];
        let chi = integral(table.value(i, h), label)?.magnitude().to_u64().unwrap();
        let in_lambda = chi == d as u64;
        let lhs = chi as i64 * order;
        let rhs = d as i64 * slack;
        if !in_lambda && lhs > rhs {
            return Err(Error::BrokenTable(format!(
                "{label}: |chi(h)|/d = {chi}/{d} exceeds 1 - 2|C(h)|/|G| = {slack}/{order}"
            )));
        }
        entries.push(GallagherEntry {
            label: label.clone(),
            degree: d,
            chi_abs: chi,
            in_lambda,
            ratio: chi as f64 / d as f64,
            strict: !in_lambda && lhs < rhs,
        });
    }
    Ok(Gallagher {
        centralizer_order: cent,
        threshold: slack as f64 / order as f64,
        entries,
    })
}

pub(crate) fn rational_pow(x: &BigRational, e: u64) -> BigRational {
    pow_rational(x, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use crate::repr::{irreps_for, irreps_wreath};

    fn wreath3() -> (FiniteGroup, CharacterData) {
        let g = make_wreath_s2(3).unwrap();
        let h = g.distinguished_involution().unwrap();
        let data = CharacterData::from_irreps(&g, &irreps_wreath(3).unwrap(), h).unwrap();
        (g, data)
    }

    #[test]
    fn wreath3_at_one_fifth() {
        let (_, data) = wreath3();
        let p = bound_params(&data, Epsilon::ratio(1, 5)).unwrap();
        assert_eq!(p.s_epsilon.len(), 6);
        assert_eq!(p.sum_dchi, BigUint::from(20u32));
        assert_eq!(p.d_epsilon, BigUint::from(36u32));
        assert_eq!(p.sum_d, BigUint::from(22u32));
        let expected = BigRational::new(1.into(), 5.into()) + BigRational::new(440.into(), 72.into());
        assert_eq!(p.delta1_exact().unwrap(), expected);
        assert!(p.delta1() <= p.cauchy_schwarz_form());
        assert!(p.hypothesis_ok(2));
        assert!(!p.hypothesis_ok(3));
        let d2 = p.delta1().sqrt() * 2.0 * 1.4 + 0.6 + 3.0 * 36.0 / 72.0;
        assert!((p.delta2(1) - d2).abs() < 1e-12);
    }

    #[test]
    fn large_epsilon_keeps_only_trivial() {
        let g = make_psl2(7).unwrap();
        let h = g.distinguished_involution().unwrap();
        let data = CharacterData::from_irreps(&g, &irreps_for(&g).unwrap(), h).unwrap();
        let p = bound_params(&data, Epsilon::ratio(9, 10)).unwrap();
        assert_eq!(p.s_epsilon.len(), 1);
        assert_eq!(p.sum_dchi, BigUint::one());
        assert_eq!(p.d_epsilon, BigUint::one());
    }

    #[test]
    fn incomplete_data_rejected() {
        let (_, mut data) = wreath3();
        data.entries.pop();
        assert!(matches!(bound_params(&data, Epsilon::ratio(1, 5)), Err(Error::IncompleteIrreps { .. })));
        let (_, data) = wreath3();
        assert!(bound_params(&data, Epsilon::ratio(0, 1)).is_err());
    }

    #[test]
    fn negative_power_epsilon_is_exact() {
        // 4^{-4/4} = 1/4 sits exactly on ratio 1/4
        let eps = Epsilon::NegPower { n: 4, num: 1, den: 4 };
        assert!(eps.admits(&BigUint::from(1u32), &BigUint::from(4u32)));
        assert!(!eps.admits(&BigUint::from(1u32), &BigUint::from(5u32)));
        assert!(!eps.admits(&BigUint::zero(), &BigUint::from(1u32)));
        assert!(!eps.exceeded_by(&BigUint::from(1u32), &BigUint::from(4u32)));
        assert!(eps.exceeded_by(&BigUint::from(1u32), &BigUint::from(3u32)));
        assert!((eps.value() - 0.25).abs() < 1e-15);
        assert!(eps.hypothesis_ok(1));
        assert!(!eps.hypothesis_ok(2));
    }

    #[test]
    fn largest_k_on_a_geometric_sequence() {
        let k = largest_k(|k| 2f64.powi(k as i32) * 1e-6, |_| true, 1.0 / 3.0, 1).unwrap();
        assert_eq!(k, 16);
        let k2 = largest_k(|k| 2f64.powi(k as i32) * 1e-6, |_| true, 1.0 / 3.0, 2).unwrap();
        assert_eq!(k2, 15);
        let capped = largest_k(|k| 2f64.powi(k as i32) * 1e-6, |k| k < 5, 1.0 / 3.0, 1).unwrap();
        assert_eq!(capped, 4);
        assert_eq!(largest_k(|_| 1.0, |_| true, 0.5, 1).unwrap(), 0);
        assert!(largest_k(|_| 0.0, |_| true, 1.5, 1).is_err());
    }

    #[test]
    fn trace_norm_bound_values() {
        let (_, data) = wreath3();
        assert_eq!(
            trace_norm_bound_exact(&data, 2),
            BigRational::new(80.into(), 72.into())
        );
        let g = make_dihedral(4).unwrap();
        let h = g.distinguished_involution().unwrap();
        let d4 = CharacterData::from_irreps(&g, &irreps_for(&g).unwrap(), h).unwrap();
        // reflection: four linear characters with |χ| = 1, the 2-dim one vanishes
        assert_eq!(d4.sum_dchi(), BigUint::from(4u32));
        assert_eq!(trace_norm_bound(&d4, 1), 1.0);
        assert_eq!(trace_norm_t_min(&d4, 0.9), 1);
        assert_eq!(trace_norm_t_min(&data, 0.99), 2);
    }

    #[test]
    fn gallagher_on_s4() {
        let g = make_symmetric(4).unwrap();
        let h = g.distinguished_involution().unwrap();
        let table = CharacterTable::from_irreps(&g, &irreps_for(&g).unwrap());
        let gal = gallagher_check(&g, &table, h).unwrap();
        assert_eq!(gal.centralizer_order, 4);
        assert!((gal.threshold - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(gal.lambda(), vec!["[4]", "[1,1,1,1]"]);
        let mut ratios: Vec<f64> = gal.entries.iter().filter(|e| !e.in_lambda).map(|e| e.ratio).collect();
        ratios.sort_by(f64::total_cmp);
        assert_eq!(ratios, vec![0.0, 1.0 / 3.0, 1.0 / 3.0]);
        assert!(gal.entries.iter().filter(|e| !e.in_lambda).all(|e| e.strict));
        assert!(gallagher_check(&g, &table, g.identity()).is_err());
    }
}
