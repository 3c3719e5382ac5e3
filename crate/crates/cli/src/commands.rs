//! The four subcommands. Each returns a [`Report`]; rendering and exit codes
//! are handled by the caller.

use serde_json::{json, Map, Value};

use hspsim_core::bounds::{
    bound_params, direct_power_bound, gl_bound, psl_bound, wreath_bound, BoundOptions, CharacterData, Epsilon,
    FamilyReport,
};
use hspsim_core::format::json_f64;
use hspsim_core::linalg::pairwise_sum;
use hspsim_core::repr::{default_h, irreps_for, CharacterTable, FrameKind};
use hspsim_core::sim::{avg_tv_over_conjugates, full_distribution, Hidden, Instance, KMeasurement};
use hspsim_core::verify::{self, SuiteReport};
use hspsim_core::{Element, Error, FiniteGroup, Result};

use crate::fraction::Fraction;
use crate::output::Report;
use crate::spec::parse_group;

pub struct BoundInput {
    pub family: String,
    pub n: Option<u64>,
    pub q: Option<u64>,
    pub p: Option<u64>,
    pub m: u32,
    pub alpha: Fraction,
    pub group: Option<String>,
    pub h: Option<String>,
    pub c: Option<f64>,
    pub kappa: f64,
    pub options: BoundOptions,
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parse(format!("--family {family} needs {flag}")))
}

fn element(group: &FiniteGroup, h: Option<&str>) -> Result<Element> {
    match h {
        Some(s) => group.parse_element(s),
        None => default_h(group),
    }
}

fn delta2_csv(report: &FamilyReport) -> Result<Option<String>> {
    let Some(b) = &report.bound else { return Ok(None) };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "delta2", "hypothesis_ok"])?;
    for k in 1..=report.options.k_max {
        w.write_record([k.to_string(), hspsim_core::format::fmt_f64(b.delta2(k)), b.hypothesis_ok(k).to_string()])?;
    }
    Ok(Some(csv_string(w)?))
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Returns the report and the spec string it describes.
pub fn bound(input: &BoundInput) -> Result<(Report, String)> {
    let fam = input.family.as_str();
    let (report, spec) = match fam {
        "wreath" => {
            let n = need(input.n, "--n", fam)?;
            if input.alpha.num <= 0 {
                return Err(Error::OutOfRange("alpha must be positive".into()));
            }
            let alpha = (input.alpha.num as u64, input.alpha.den as u64);
            (wreath_bound(n as usize, alpha, input.options)?, format!("wreath:{n}"))
        }
        "psl2" | "psl" => {
            let q = need(input.q, "--q", fam)?;
            (psl_bound(q, input.options)?, format!("psl2:{q}"))
        }
        "gl" => {
            let n = need(input.n, "--n", fam)?;
            let p = need(input.p, "--p", fam)?;
            (gl_bound(n as usize, p, input.m, input.options)?, format!("gl:{n},{p},{}", input.m))
        }
        "power" => {
            let spec = need(input.group.as_deref(), "--group", fam)?;
            let n = need(input.n, "--n", fam)?;
            let group = parse_group(spec)?;
            let h = element(&group, input.h.as_deref())?;
            (
                direct_power_bound(&group, h, n, input.c, input.kappa, input.options)?,
                format!("power:{spec}^{n}"),
            )
        }
        other => return Err(Error::Parse(format!("unknown family {other:?} (wreath, psl2, gl, power)"))),
    };
    let Value::Object(body) = report.to_json() else { unreachable!() };
    let mut out = Report::new(body);
    out.csv = delta2_csv(&report)?;
    if !report.applicable {
        out.exit = 2;
    }
    Ok((out, spec))
}

pub struct SimulateInput {
    pub group: String,
    pub h: Option<String>,
    pub k: usize,
    pub frames: usize,
    pub frame_kind: FrameKind,
    pub seed: u64,
    pub epsilon: Fraction,
    pub distribution: Option<String>,
}

pub fn simulate(input: &SimulateInput) -> Result<Report> {
    if input.k == 0 || input.frames == 0 {
        return Err(Error::OutOfRange("--k and --frames must be at least 1".into()));
    }
    let group = parse_group(&input.group)?;
    let irreps = irreps_for(&group)?;
    let h = element(&group, input.h.as_deref())?;
    let inst = Instance::new(&group, &irreps, h)?;
    inst.check_work(input.k)?;
    let data = CharacterData::from_irreps(&group, &irreps, h)?;
    let params = bound_params(&data, Epsilon::ratio(input.epsilon.num, input.epsilon.den))?;
    let delta2 = params.delta2(input.k as u64);
    let hypothesis_ok = params.hypothesis_ok(input.k as u64);
    let corollary = delta2.sqrt();

    let mut runs = Vec::with_capacity(input.frames);
    let mut averages = Vec::with_capacity(input.frames);
    let mut worst: f64 = 0.0;
    let mut defect: f64 = 0.0;
    let mut first = None;
    let mut csv_rows = csv::Writer::from_writer(Vec::new());
    csv_rows.write_record(["seed", "average_tv", "max_tv"])?;
    for i in 0..input.frames {
        let seed = input.seed.wrapping_add(i as u64);
        let meas = KMeasurement::random(&inst, input.k, seed, input.frame_kind)?;
        let tv = avg_tv_over_conjugates(&inst, input.k, &meas)?;
        defect = defect.max(meas.max_completeness_defect());
        worst = worst.max(tv.max);
        averages.push(tv.average);
        csv_rows.write_record([
            seed.to_string(),
            hspsim_core::format::fmt_f64(tv.average),
            hspsim_core::format::fmt_f64(tv.max),
        ])?;
        runs.push(json!({
            "seed": seed,
            "average_tv": json_f64(tv.average),
            "max_tv": json_f64(tv.max),
            "per_conjugate": tv.per_conjugate.iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
        }));
        if first.is_none() {
            first = Some(meas);
        }
    }
    let mean = pairwise_sum(&averages) / averages.len() as f64;
    let max_avg = averages.iter().copied().fold(0.0, f64::max);

    let mut body = Map::new();
    body.insert("group".into(), json!(group.kind().to_string()));
    body.insert("group_order".into(), json!(group.order()));
    body.insert("h".into(), json!(group.format_element(h)));
    body.insert("conjugates".into(), json!(inst.class_size()));
    body.insert("k".into(), json!(input.k));
    body.insert("frame_kind".into(), json!(input.frame_kind));
    body.insert("frames".into(), json!(input.frames));
    body.insert("epsilon".into(), json!(format!("{}/{}", input.epsilon.num, input.epsilon.den)));
    body.insert("max_completeness_defect".into(), json_f64(defect));
    body.insert("runs".into(), Value::Array(runs));
    body.insert("mean_average_tv".into(), json_f64(mean));
    body.insert("max_average_tv".into(), json_f64(max_avg));
    body.insert("max_tv".into(), json_f64(worst));
    body.insert("delta2".into(), json_f64(delta2));
    body.insert("hypothesis_ok".into(), json!(hypothesis_ok));
    body.insert(
        "delta2_comparison".into(),
        json!({
            "line": format!(
                "max over seeds of E_g[TV] = {} {} delta2({}) = {}",
                hspsim_core::format::fmt_f64(max_avg),
                if max_avg <= delta2 { "<=" } else { ">" },
                input.k,
                hspsim_core::format::fmt_f64(delta2)
            ),
            "within": max_avg <= delta2,
        }),
    );
    body.insert(
        "corollary_t1".into(),
        json!({"bound": json_f64(corollary), "max_tv": json_f64(worst), "within": worst <= corollary}),
    );
    let mut report = Report::new(body);
    report.csv = Some(csv_string(csv_rows)?);

    if let Some(which) = &input.distribution {
        let hidden = match which.as_str() {
            "trivial" => Hidden::Trivial,
            idx => {
                let i: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("--distribution expects 'trivial' or a conjugate index, got {idx:?}")))?;
                if i >= inst.class_size() {
                    return Err(Error::OutOfRange(format!("conjugate index {i} >= {}", inst.class_size())));
                }
                Hidden::Conjugate(i)
            }
        };
        let dist = full_distribution(&inst, input.k, first.as_ref().expect("at least one frame"), hidden)?;
        report.body.insert("distribution_total".into(), json_f64(dist.total()));
        report.csv = Some(dist.to_csv()?);
    }
    Ok(report)
}

pub struct VerifyInput {
    pub suite: String,
    pub group: String,
    pub h: Option<String>,
    pub k: usize,
    pub t: usize,
    pub frames: usize,
    pub vectors: usize,
    pub frame_kind: FrameKind,
    pub seed: u64,
    pub epsilon: Fraction,
}

pub const SUITES: [&str; 7] = ["repr", "facts", "lemmas", "tables", "transfer", "gallagher", "trace-norm"];

fn run_suite(name: &str, input: &VerifyInput, group: &FiniteGroup, inst: &Instance, all: bool) -> Result<SuiteReport> {
    let seeds: Vec<u64> = (0..input.frames.max(1)).map(|i| input.seed.wrapping_add(i as u64)).collect();
    match name {
        "repr" => verify::repr_suite(group, inst.irreps),
        "facts" => verify::facts(inst, input.vectors, input.seed),
        "lemmas" => verify::lemmas(
            inst,
            input.k,
            &seeds,
            input.frame_kind,
            Epsilon::ratio(input.epsilon.num, input.epsilon.den),
        ),
        "tables" => verify::tables(group, inst.irreps, inst.h, input.seed),
        "transfer" => verify::transfer(group, inst.h),
        "gallagher" => verify::gallagher(group, inst.irreps, inst.h),
        "trace-norm" if all => {
            // largest t within the trace-distance caps
            let mut t = input.t;
            loop {
                match verify::trace_norm(inst, t) {
                    Err(Error::ResourceCap(_)) if t > 1 => t -= 1,
                    other => return other,
                }
            }
        }
        "trace-norm" => verify::trace_norm(inst, input.t),
        other => Err(Error::Parse(format!("unknown suite {other:?} (expected one of {}, all)", SUITES.join(", ")))),
    }
}

pub fn verify(input: &VerifyInput) -> Result<Report> {
    let group = parse_group(&input.group)?;
    let irreps = irreps_for(&group)?;
    let h = element(&group, input.h.as_deref())?;
    let inst = Instance::new(&group, &irreps, h)?;
    let mut total = SuiteReport::default();
    let mut suites = Map::new();
    let names: Vec<&str> = if input.suite == "all" { SUITES.to_vec() } else { vec![input.suite.as_str()] };
    for name in names {
        match run_suite(name, input, &group, &inst, input.suite == "all") {
            Ok(r) => {
                suites.insert(name.into(), r.to_json());
                total.merge(r);
            }
            Err(e @ (Error::OutOfRange(_) | Error::ResourceCap(_))) if input.suite == "all" => {
                total.warnings.push(format!("{name} skipped: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    let mut body = Map::new();
    body.insert("group".into(), json!(group.kind().to_string()));
    body.insert("h".into(), json!(group.format_element(h)));
    body.insert("suite".into(), json!(input.suite));
    body.insert("suites".into(), Value::Object(suites));
    body.insert("warnings".into(), json!(total.warnings));
    body.insert("failures".into(), json!(total.failures()));
    body.insert("pass".into(), json!(total.failures() == 0));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "lhs", "rhs", "slack", "status"])?;
    for c in &total.checks {
        w.write_record([
            c.lemma.clone(),
            hspsim_core::format::fmt_f64(c.lhs),
            hspsim_core::format::fmt_f64(c.rhs),
            hspsim_core::format::fmt_f64(c.slack),
            c.status.as_str().to_string(),
        ])?;
    }
    for warning in &total.warnings {
        eprintln!("{warning}");
    }
    let mut report = Report::new(body);
    report.csv = Some(csv_string(w)?);
    if total.failures() > 0 {
        report.exit = 1;
    }
    Ok(report)
}

pub fn chartable(spec: &str) -> Result<Report> {
    let group = parse_group(spec)?;
    let irreps = irreps_for(&group)?;
    let table = CharacterTable::from_irreps(&group, &irreps);
    let mut body = Map::new();
    body.insert("group".into(), json!(group.kind().to_string()));
    body.insert("group_order".into(), json!(group.order()));
    body.insert("degrees".into(), json!(table.degrees));
    body.insert("table".into(), table.to_json()?);
    let mut report = Report::new(body);
    report.csv = Some(table.to_csv()?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chartable_cyclic() {
        let r = chartable("cyclic:4").unwrap();
        let csv = r.csv.unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("class_rep,class_size,"));
    }

    #[test]
    fn power_bound_gate() {
        let input = BoundInput {
            family: "power".into(),
            n: Some(10),
            q: None,
            p: None,
            m: 1,
            alpha: Fraction { num: 1, den: 4 },
            group: Some("s4".into()),
            h: Some("(1 2)".into()),
            c: None,
            kappa: 1.0,
            options: BoundOptions::default(),
        };
        let (r, spec) = bound(&input).unwrap();
        assert_eq!(spec, "power:s4^10");
        assert_eq!(r.exit, 0);
        assert_eq!(r.body["direct2"]["text"], "sqrt(24) > 2*sqrt(5)");
        assert_eq!(r.body["direct2"]["pass"], true);
    }
}
