//! Named verification suites shared by the command line and the test harness.

use serde_json::{json, Value};

use crate::bounds::{
    bound_params, character_table_psl2, gallagher_check, trace_norm_bound, CharacterData, Epsilon,
};
use crate::error::{Error, Result};
use crate::group::{make_sl2, make_symmetric, wreath_embedding, Element, FiniteGroup, GroupKind, Subgroup};
use crate::linalg::unitarity_defect;
use crate::repr::{irreps_generic, qft, CharacterTable, FrameKind, Irrep};
use crate::sim::lemmas::{facts_suite, lemma_suite, LemmaEntry, Status};
use crate::sim::transfer::{sl2_to_psl2, verify_quotient, verify_subgroup};
use crate::sim::{mixed_conjugate_trace_distance, Instance};

pub const REPR_TOL: f64 = 1e-9;
pub const TABLE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub checks: Vec<LemmaEntry>,
    pub warnings: Vec<String>,
    pub extra: serde_json::Map<String, Value>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
        self.warnings.extend(other.warnings);
        self.extra.extend(other.extra);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checks": self.checks.iter().map(LemmaEntry::to_json).collect::<Vec<_>>(),
            "warnings": self.warnings,
            "failures": self.failures(),
            "pass": self.failures() == 0,
            "details": Value::Object(self.extra.clone()),
        })
    }
}

fn upper(name: &str, value: f64, tol: f64, detail: String) -> LemmaEntry {
    LemmaEntry::equality(name, value, 0.0, tol, detail)
}

/// Homomorphism and unitarity of every irrep, `Σ d² = |G|` and QFT unitarity.
pub fn repr_suite(group: &FiniteGroup, irreps: &[Irrep]) -> Result<SuiteReport> {
    let mut r = SuiteReport::default();
    let (mut hom, mut hom_at) = (0.0f64, String::new());
    let (mut uni, mut uni_at) = (0.0f64, String::new());
    for rho in irreps {
        let h = rho.homomorphism_defect(group);
        if h >= hom {
            hom = h;
            hom_at = rho.label().to_string();
        }
        let u = rho.unitarity_defect();
        if u >= uni {
            uni = u;
            uni_at = rho.label().to_string();
        }
    }
    r.checks.push(upper("homomorphism", hom, REPR_TOL, format!("worst irrep {hom_at}")));
    r.checks.push(upper("unitarity", uni, REPR_TOL, format!("worst irrep {uni_at}")));
    let sum: usize = irreps.iter().map(|x| x.degree() * x.degree()).sum();
    r.checks.push(LemmaEntry::equality(
        "sum-degree-squares",
        sum as f64,
        group.order() as f64,
        0.0,
        format!("{} irreps", irreps.len()),
    ));
    let f = qft(group, irreps)?;
    r.checks.push(upper("qft-unitarity", unitarity_defect(&f), REPR_TOL, format!("|G| = {}", group.order())));
    Ok(r)
}

pub fn facts(inst: &Instance, vectors: usize, seed: u64) -> Result<SuiteReport> {
    Ok(SuiteReport { checks: facts_suite(inst, vectors, seed)?, ..Default::default() })
}

pub fn lemmas(inst: &Instance, k: usize, seeds: &[u64], kind: FrameKind, epsilon: Epsilon) -> Result<SuiteReport> {
    let data = CharacterData::from_irreps(inst.group, inst.irreps, inst.h)?;
    let params = bound_params(&data, epsilon)?;
    Ok(SuiteReport { checks: lemma_suite(inst, k, seeds, kind, &params)?, ..Default::default() })
}

/// Strict `‖E_g σ_{H^g}^{⊗t} − σ_1^{⊗t}‖_tr < (2^t/|G|) Σ d|χ(h)|` for `t = 1..=t_max`.
pub fn trace_norm(inst: &Instance, t_max: usize) -> Result<SuiteReport> {
    let data = CharacterData::from_irreps(inst.group, inst.irreps, inst.h)?;
    let mut r = SuiteReport::default();
    for t in 1..=t_max {
        let lhs = mixed_conjugate_trace_distance(inst, t)?;
        let rhs = trace_norm_bound(&data, t as u32);
        let mut e = LemmaEntry::inequality("trace-norm", lhs, rhs, format!("t={t}"));
        if lhs >= rhs {
            e.status = Status::Fail;
        }
        r.checks.push(e);
    }
    Ok(r)
}

/// Gallagher's dichotomy at `h`: every irrep either has `|χ(h)| = d` or ratio
/// at most `1 − 2|C(h)|/|G|`.
pub fn gallagher(group: &FiniteGroup, irreps: &[Irrep], h: Element) -> Result<SuiteReport> {
    let table = CharacterTable::from_irreps(group, irreps);
    let mut r = SuiteReport::default();
    match gallagher_check(group, &table, h) {
        Ok(g) => {
            let worst = g.entries.iter().filter(|e| !e.in_lambda).map(|e| e.ratio).fold(0.0, f64::max);
            r.checks.push(LemmaEntry::inequality(
                "gallagher",
                worst,
                g.threshold,
                format!("Lambda = {:?}", g.lambda()),
            ));
            r.extra.insert("gallagher".into(), serde_json::to_value(&g)?);
        }
        Err(Error::BrokenTable(msg)) => {
            r.checks.push(LemmaEntry { status: Status::Fail, ..LemmaEntry::inequality("gallagher", 1.0, 0.0, msg) });
        }
        Err(e) => return Err(e),
    }
    Ok(r)
}

/// Class-algebra table against the constructed irreps, and for PSL(2,q) the
/// closed-form degrees and involution values against enumeration.
pub fn tables(group: &FiniteGroup, irreps: &[Irrep], h: Element, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::default();
    let burnside = CharacterTable::from_class_algebra(group, seed)?;
    let from_irreps = CharacterTable::from_irreps(group, irreps);
    let sum: usize = burnside.degrees.iter().map(|d| d * d).sum();
    r.checks.push(LemmaEntry::equality("sum-degree-squares", sum as f64, group.order() as f64, 0.0, "class algebra".into()));
    r.checks.push(upper("row-orthogonality", burnside.row_orthogonality_defect(), TABLE_TOL, "class algebra".into()));
    r.checks.push(upper("column-orthogonality", burnside.column_orthogonality_defect(), TABLE_TOL, "class algebra".into()));
    let same = burnside.matches_up_to_row_permutation(&from_irreps, 1e-6);
    r.checks.push(LemmaEntry::equality(
        "table-matches-irreps",
        if same { 0.0 } else { 1.0 },
        0.0,
        0.0,
        "class algebra vs constructed irreps, up to row order".into(),
    ));
    if let GroupKind::Psl2(q) = group.kind() {
        r.merge(psl_closed_form(group, &burnside, *q, h)?);
    }
    Ok(r)
}

fn psl_closed_form(group: &FiniteGroup, table: &CharacterTable, q: u32, h: Element) -> Result<SuiteReport> {
    let mut r = SuiteReport::default();
    let closed = character_table_psl2(q as u64)?;
    let cent = group.centralizer(h).order();
    let class = group.conjugacy_class(h).len();
    let exact = |name: &str, lhs: f64, rhs: f64, detail: String| LemmaEntry::equality(name, lhs, rhs, 0.0, detail);
    r.checks.push(exact(
        "closed-form-sum-degree-squares",
        closed.sum_degree_squares() as f64,
        group.order() as f64,
        format!("q={q}"),
    ));
    r.checks.push(exact(
        "closed-form-column-norm",
        closed.h_column_norm() as f64,
        cent as f64,
        "sum |chi(h)|^2 against the enumerated centralizer".into(),
    ));
    r.checks.push(exact("closed-form-identity-orthogonality", closed.identity_h_product() as f64, 0.0, String::new()));
    let hi = table.class_index(h);
    let mut numeric: Vec<(u64, i64)> = table
        .values
        .iter()
        .zip(&table.degrees)
        .map(|(row, &d)| (d as u64, row[hi].re.round() as i64))
        .collect();
    numeric.sort();
    let pairs = closed.pairs();
    r.checks.push(exact(
        "closed-form-degrees-and-values",
        if numeric == pairs { 0.0 } else { 1.0 },
        0.0,
        format!("closed form {pairs:?} vs class algebra {numeric:?}"),
    ));
    if closed.quoted_class_size as usize != class {
        r.warnings.push(format!(
            "WARN involution class size: enumerated {class}, quoted {}",
            closed.quoted_class_size
        ));
    }
    r.extra.insert("psl_table".into(), serde_json::to_value(&closed)?);
    Ok(r)
}

/// Wreath products sit inside `S_2n`; PSL(2,q) is a quotient of SL(2,q).
pub fn transfer(group: &FiniteGroup, h: Element) -> Result<SuiteReport> {
    let mut r = SuiteReport::default();
    let report = match group.kind() {
        GroupKind::Wreath(n) if *n <= 3 => {
            let big = make_symmetric(2 * n)?;
            let embed = wreath_embedding(group, &big)?;
            let hs = Subgroup::new(group, vec![group.identity(), h])?;
            verify_subgroup(&big, group, &embed, &hs)?
        }
        GroupKind::Psl2(q) if q % 2 == 1 && *q <= 11 => {
            let sl = make_sl2(*q)?;
            let (proj, center) = sl2_to_psl2(&sl, group)?;
            let hs = Subgroup::new(group, vec![group.identity(), h])?;
            verify_quotient(&sl, group, &proj, &center, &hs)?
        }
        other => {
            return Err(Error::OutOfRange(format!(
                "transfer checks cover wreath:n (n <= 3) and psl2:q (odd q <= 11), not {other}"
            )))
        }
    };
    r.checks.push(upper("transfer-spectrum", report.spectrum_deviation, 1e-9, format!("ratio {}", report.ratio)));
    r.checks.push(upper("transfer-blocks", report.block_deviation, 1e-9, String::new()));
    r.extra.insert("transfer".into(), report.to_json());
    Ok(r)
}

/// Independent generic decomposition, for cross-checking structured irreps.
pub fn generic_table(group: &FiniteGroup) -> Result<CharacterTable> {
    Ok(CharacterTable::from_irreps(group, &irreps_generic(group, 1e-6)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use crate::repr::{default_h, irreps_for};

    #[test]
    fn psl5_tables_warn_but_pass() {
        let g = make_psl2(5).unwrap();
        let irreps = irreps_for(&g).unwrap();
        let h = default_h(&g).unwrap();
        let r = tables(&g, &irreps, h, 1).unwrap();
        assert_eq!(r.failures(), 0, "{:?}", r.checks);
        assert_eq!(r.warnings, vec!["WARN involution class size: enumerated 15, quoted 10".to_string()]);
    }

    #[test]
    fn transfer_suites() {
        let g = make_wreath_s2(2).unwrap();
        let r = transfer(&g, default_h(&g).unwrap()).unwrap();
        assert_eq!(r.failures(), 0, "{:?}", r.checks);
        assert!(transfer(&make_symmetric(3).unwrap(), Element::new(1)).is_err());
    }

    #[test]
    fn s4_gallagher() {
        let g = make_symmetric(4).unwrap();
        let irreps = irreps_for(&g).unwrap();
        let r = gallagher(&g, &irreps, default_h(&g).unwrap()).unwrap();
        assert_eq!(r.failures(), 0);
        assert!((r.checks[0].lhs - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.checks[0].rhs - 2.0 / 3.0).abs() < 1e-15);
    }
}
