//! Command implementations and machine-readable output for the
//! `quivertex` binary. Every command produces either formatted text or
//! deterministic JSON (struct field order, graded-lex series terms, exact
//! rationals as "p/q" strings).

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use quivertex_core::chambers::{
    capped_limit, classify, enumerate_chambers, m_value, tautological_character, Chamber,
};
use quivertex_core::monodromy::{
    monodromy_formula, monodromy_ratio, qde_residual, qde_residual_negative, stab_normalized_core,
    NumericContext,
};
use quivertex_core::partitions::{format_cell_address, Partition};
use quivertex_core::qseries::{
    format_rational, parse_rational, LaurentPoly, Rational, SpecializationContext,
    TruncatedSeries,
};
use quivertex_core::selftest::{run_suite, suite_names, CheckResult, SelftestConfig};
use quivertex_core::vertex::{
    beta, capped_eval, capped_expand, capped_expression, vertex_localization, vertex_product,
    CappedVertexExpression,
};
use quivertex_core::Error as CoreError;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exit codes: 0 success, 1 usage error, 2 verification failure,
/// 3 numeric non-convergence.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: msg.into(),
        }
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: msg.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::NonConvergence(_) => 3,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Json,
    Text,
}

// ---------------------------------------------------------------------------
// JSON shapes
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Serialize)]
pub struct SeriesJson {
    pub lo: i32,
    pub hi: i32,
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

pub fn series_json(s: &TruncatedSeries) -> SeriesJson {
    SeriesJson {
        lo: s.range().lo,
        hi: s.range().hi,
        degree: s.cap(),
        terms: s
            .iter()
            .map(|(m, c)| TermJson {
                exp: m.0.clone(),
                coeff: format_rational(c),
            })
            .collect(),
    }
}

fn series_text(s: &TruncatedSeries) -> String {
    let mut out = String::new();
    for (m, c) in s.iter() {
        let mut mono = String::new();
        for (i, e) in m.0.iter().enumerate() {
            if *e > 0 {
                mono.push_str(&format!(" z[{}]^{}", s.range().content(i), e));
            }
        }
        out.push_str(&format!("  {}{}\n", format_rational(c), mono));
    }
    if out.is_empty() {
        out.push_str("  0\n");
    }
    out
}

fn laurent_json(p: &LaurentPoly) -> Vec<(i64, String)> {
    p.iter().map(|(k, c)| (*k, format_rational(c))).collect()
}

// ---------------------------------------------------------------------------
// Shared argument plumbing
// ---------------------------------------------------------------------------

pub fn parse_partition(s: &str) -> CliResult<Partition> {
    s.parse::<Partition>()
        .map_err(|e| CliError::usage(e.to_string()))
}

pub fn parse_context(q: &str, hbar: &str) -> CliResult<SpecializationContext> {
    let qv = parse_rational(q).map_err(|e| CliError::usage(e.to_string()))?;
    let hv = parse_rational(hbar).map_err(|e| CliError::usage(e.to_string()))?;
    SpecializationContext::new(qv, hv).map_err(|e| CliError::usage(e.to_string()))
}

pub fn parse_theta(partition: &Partition, s: &str) -> CliResult<Vec<Rational>> {
    let parts: Result<Vec<Rational>, _> = s.split(',').map(parse_rational).collect();
    let theta = parts.map_err(|e| CliError::usage(e.to_string()))?;
    if theta.len() != partition.var_range().len() {
        return Err(CliError::usage(format!(
            "direction needs {} components for this diagram",
            partition.var_range().len()
        )));
    }
    Ok(theta)
}

/// Parses "a+bi" / "a-bi" / "a" / "bi" into a complex number.
pub fn parse_complex(s: &str) -> CliResult<Complex64> {
    let t = s.trim().replace(' ', "");
    let bad = || CliError::usage(format!("cannot parse complex number \"{s}\""));
    if let Some(body) = t.strip_suffix('i') {
        let bytes = body.as_bytes();
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && bytes[k - 1] as char != 'e' && bytes[k - 1] as char != 'E'
            {
                let re: f64 = body[..k].parse().map_err(|_| bad())?;
                let im_str = &body[k..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| bad())?
                };
                return Ok(Complex64::new(re, im));
            }
        }
        let im: f64 = if body.is_empty() {
            1.0
        } else {
            body.parse().map_err(|_| bad())?
        };
        return Ok(Complex64::new(0.0, im));
    }
    let re: f64 = t.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, 0.0))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

// ---------------------------------------------------------------------------
// vertex
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct VertexReport {
    pub partition: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<SeriesJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub localization: Option<SeriesJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<Vec<TermJson>>,
}

pub fn cmd_vertex(
    partition: &Partition,
    degree: u32,
    ctx: &SpecializationContext,
    method: &str,
    mode: OutputMode,
) -> CliResult<String> {
    let (prod, loc) = match method {
        "product" => (Some(vertex_product(partition, degree, ctx)?), None),
        "localization" => (None, Some(vertex_localization(partition, degree, ctx)?)),
        "both" => (
            Some(vertex_product(partition, degree, ctx)?),
            Some(vertex_localization(partition, degree, ctx)?),
        ),
        other => return Err(CliError::usage(format!("unknown method \"{other}\""))),
    };
    let diff = match (&prod, &loc) {
        (Some(a), Some(b)) => {
            let d = a.sub(b)?;
            Some(
                d.iter()
                    .map(|(m, c)| TermJson {
                        exp: m.0.clone(),
                        coeff: format_rational(c),
                    })
                    .collect::<Vec<_>>(),
            )
        }
        _ => None,
    };
    let failed = diff.as_ref().map(|d| !d.is_empty()).unwrap_or(false);
    let report = VertexReport {
        partition: partition.to_string(),
        method: method.to_string(),
        product: prod.as_ref().map(series_json),
        localization: loc.as_ref().map(series_json),
        diff,
    };
    let rendered = match mode {
        OutputMode::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        OutputMode::Text => {
            let mut out = format!("vertex function of ({})\n", report.partition);
            if let Some(p) = &prod {
                out.push_str("product form:\n");
                out.push_str(&series_text(p));
            }
            if let Some(l) = &loc {
                out.push_str("localization form:\n");
                out.push_str(&series_text(l));
            }
            if let Some(d) = &report.diff {
                out.push_str(&format!("difference: {} terms\n", d.len()));
            }
            out
        }
    };
    if failed {
        return Err(CliError {
            code: 2,
            message: format!("oracle mismatch:\n{rendered}"),
        });
    }
    Ok(rendered)
}

// ---------------------------------------------------------------------------
// capped
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct CappedTermJson {
    pub subset: Vec<String>,
    pub pair_factors: Vec<String>,
    pub slice_factors: Vec<(String, i64)>,
}

#[derive(Serialize)]
pub struct CappedReport {
    pub partition: String,
    pub node: i32,
    pub rank: u32,
    pub prefactor_hbar_exp: i64,
    pub term_count: usize,
    pub terms: Vec<CappedTermJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

fn capped_json(expr: &CappedVertexExpression) -> Vec<CappedTermJson> {
    expr.terms()
        .iter()
        .map(|t| CappedTermJson {
            subset: t.subset.iter().map(|c| format_cell_address(*c)).collect(),
            pair_factors: t
                .pairs
                .iter()
                .map(|(a, b)| format!("{}|{}", format_cell_address(*a), format_cell_address(*b)))
                .collect(),
            slice_factors: t
                .transforms
                .iter()
                .map(|(c, k)| (format_cell_address(*c), *k))
                .collect(),
        })
        .collect()
}

pub fn cmd_capped(
    partition: &Partition,
    node: i32,
    rank: u32,
    series_degree: Option<u32>,
    eval_point: Option<&str>,
    ctx: &SpecializationContext,
    mode: OutputMode,
) -> CliResult<String> {
    let expr = capped_expression(partition, node, rank)?;
    let series = match series_degree {
        Some(d) => Some(capped_expand(&expr, d, ctx)?),
        None => None,
    };
    let value = match eval_point {
        Some(s) => {
            let point = parse_point(partition, s)?;
            Some(capped_eval(&expr, &point, ctx).map_err(|e| CliError {
                code: 2,
                message: e.to_string(),
            })?)
        }
        None => None,
    };
    let report = CappedReport {
        partition: partition.to_string(),
        node,
        rank,
        prefactor_hbar_exp: expr.prefactor_exp(),
        term_count: expr.terms().len(),
        terms: capped_json(&expr),
        series: series.as_ref().map(series_json),
        value: value.as_ref().map(format_rational),
    };
    Ok(match mode {
        OutputMode::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        OutputMode::Text => {
            let mut out = format!(
                "capped vertex of ({}) at node {} rank {}: prefactor h^{}, {} subset terms\n",
                report.partition, node, rank, report.prefactor_hbar_exp, report.term_count
            );
            if let Some(s) = &series {
                out.push_str("series:\n");
                out.push_str(&series_text(s));
            }
            if let Some(v) = &report.value {
                out.push_str(&format!("value: {v}\n"));
            }
            out
        }
    })
}

/// Parses "content=p/q,content=p/q,…" into a full rational point.
fn parse_point(partition: &Partition, s: &str) -> CliResult<Vec<Rational>> {
    let range = partition.var_range();
    let mut map = BTreeMap::new();
    for piece in s.split(',') {
        let (k, v) = piece
            .split_once('=')
            .ok_or_else(|| CliError::usage("point entries look like content=p/q"))?;
        let content: i32 = k
            .trim()
            .parse()
            .map_err(|_| CliError::usage("bad content in point"))?;
        if range.index(content).is_none() {
            return Err(CliError::usage(format!(
                "content {content} outside the variable range"
            )));
        }
        map.insert(
            content,
            parse_rational(v).map_err(|e| CliError::usage(e.to_string()))?,
        );
    }
    let mut out = Vec::with_capacity(range.len());
    for content in range.lo..=range.hi {
        match map.get(&content) {
            Some(v) => out.push(v.clone()),
            None => {
                return Err(CliError::usage(format!(
                    "point is missing content {content}"
                )))
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// chamber / character
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct ChamberJson {
    pub theta: Vec<String>,
    pub p: usize,
    pub signs_box: BTreeMap<String, String>,
    pub signs_pair: BTreeMap<String, String>,
    pub m_values: BTreeMap<String, i64>,
}

fn chamber_json(partition: &Partition, chamber: &Chamber) -> CliResult<ChamberJson> {
    let cells = partition.cells();
    let mut signs_box = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        signs_box.insert(
            format_cell_address(*c),
            if chamber.box_sign(i) > 0 { "+" } else { "-" }.to_string(),
        );
    }
    let mut signs_pair = BTreeMap::new();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if cells[i].content() == cells[j].content() {
                signs_pair.insert(
                    format!(
                        "{}|{}",
                        format_cell_address(cells[i]),
                        format_cell_address(cells[j])
                    ),
                    if chamber.pair_sign(i, j) > 0 { "+" } else { "-" }.to_string(),
                );
            }
        }
    }
    let mut m_values = BTreeMap::new();
    for c in &cells {
        m_values.insert(format_cell_address(*c), m_value(partition, *c, chamber)?);
    }
    Ok(ChamberJson {
        theta: chamber.theta().iter().map(format_rational).collect(),
        p: chamber.p_value(),
        signs_box,
        signs_pair,
        m_values,
    })
}

#[derive(Serialize)]
pub struct ChamberReport {
    pub partition: String,
    pub chambers: Vec<ChamberJson>,
}

pub fn cmd_chamber(
    partition: &Partition,
    theta: Option<&str>,
    enumerate: bool,
    mode: OutputMode,
) -> CliResult<String> {
    let chambers: Vec<Chamber> = if enumerate {
        enumerate_chambers(partition)?
    } else {
        let t = theta.ok_or_else(|| CliError::usage("pass --theta or --enumerate"))?;
        vec![classify(partition, &parse_theta(partition, t)?)?]
    };
    let rendered: CliResult<Vec<ChamberJson>> = chambers
        .iter()
        .map(|c| chamber_json(partition, c))
        .collect();
    let report = ChamberReport {
        partition: partition.to_string(),
        chambers: rendered?,
    };
    Ok(match mode {
        OutputMode::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        OutputMode::Text => {
            let mut out = format!(
                "{} chamber(s) of ({})\n",
                report.chambers.len(),
                report.partition
            );
            for ch in &report.chambers {
                out.push_str(&format!(
                    "theta = ({}), p = {}\n",
                    ch.theta.join(", "),
                    ch.p
                ));
                for (cell, sign) in &ch.signs_box {
                    out.push_str(&format!(
                        "  box {cell}: {sign}, m = {}\n",
                        ch.m_values[cell]
                    ));
                }
            }
            out
        }
    })
}

#[derive(Serialize)]
pub struct CharacterReport {
    pub partition: String,
    pub node: i32,
    pub rank: u32,
    pub theta: Vec<String>,
    /// e_r of the ħ^{m} monomials, no prefactor.
    pub character: Vec<(i64, String)>,
    /// The limit of the capped vertex, which carries ħ^{β(n)}.
    pub capped_limit: Vec<(i64, String)>,
    pub beta: i64,
    pub rank_one_identity: Option<bool>,
}

pub fn cmd_character(
    partition: &Partition,
    node: i32,
    rank: u32,
    theta: &str,
    mode: OutputMode,
) -> CliResult<String> {
    let chamber = classify(partition, &parse_theta(partition, theta)?)?;
    let tchar = tautological_character(partition, node, rank, &chamber)?;
    let lim = capped_limit(partition, node, rank, &chamber)?;
    let identity = if rank == 1 {
        Some(lim == tchar.shift(beta(node)))
    } else {
        None
    };
    let report = CharacterReport {
        partition: partition.to_string(),
        node,
        rank,
        theta: chamber.theta().iter().map(format_rational).collect(),
        character: laurent_json(&tchar),
        capped_limit: laurent_json(&lim),
        beta: beta(node),
        rank_one_identity: identity,
    };
    if identity == Some(false) {
        return Err(CliError::verification(
            "rank-1 capped limit disagrees with the character sum",
        ));
    }
    Ok(match mode {
        OutputMode::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        OutputMode::Text => format!(
            "character at node {} rank {} of ({}):\n  e_r({{h^m}}) = {}\n  capped limit = {}   (carries h^beta, beta = {})\n",
            node, rank, report.partition, tchar, lim, report.beta
        ),
    })
}

// ---------------------------------------------------------------------------
// monodromy
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct MonodromySample {
    pub point: Vec<String>,
    pub ratio_vs_formula: f64,
    pub q_periodicity: f64,
    pub stab_consistency: f64,
}

#[derive(Serialize)]
pub struct MonodromyReport {
    pub partition: String,
    pub q: String,
    pub hbar: String,
    pub tolerance: f64,
    pub truncation: u32,
    pub p1: usize,
    pub p2: usize,
    pub samples: Vec<MonodromySample>,
    pub max_error: f64,
    pub qde_residual_max: f64,
    pub passed: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_monodromy(
    partition: &Partition,
    theta1: &str,
    theta2: &str,
    q: Complex64,
    hbar: Complex64,
    tol: f64,
    samples: u32,
    seed: u64,
    mode: OutputMode,
) -> CliResult<String> {
    let c1 = classify(partition, &parse_theta(partition, theta1)?)?;
    let c2 = classify(partition, &parse_theta(partition, theta2)?)?;
    let nctx = NumericContext::new(q, hbar, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = partition.var_range().len();
    let mut out_samples = Vec::new();
    let mut max_error: f64 = 0.0;
    let mut qde_max: f64 = 0.0;
    for _ in 0..samples {
        let point: Vec<Complex64> = (0..n)
            .map(|_| {
                let r = 0.35 + 0.8 * rng.gen::<f64>();
                let phi = 0.25 * (rng.gen::<f64>() - 0.5);
                Complex64::from_polar(r, phi)
            })
            .collect();
        let ratio = monodromy_ratio(partition, &c1, &c2, &point, &nctx)?;
        let formula = monodromy_formula(partition, &c1, &c2, &point, &nctx)?;
        let rf = (ratio - formula).norm() / (formula.norm() + 1.0);
        let mut shifted = point.clone();
        shifted[0] *= q;
        let ratio_shifted = monodromy_ratio(partition, &c1, &c2, &shifted, &nctx)?;
        let qp = (ratio_shifted / ratio - Complex64::new(1.0, 0.0)).norm();
        let (rescaled, stab) = stab_normalized_core(partition, &c1, &c2, &point, &nctx)?;
        let st = (rescaled - stab).norm() / (stab.norm() + 1.0);
        max_error = max_error.max(rf).max(qp).max(st);
        let t = Complex64::from_polar(
            0.3 + 0.3 * rng.gen::<f64>(),
            0.2 * (rng.gen::<f64>() - 0.5),
        );
        qde_max = qde_max
            .max(qde_residual(t, &nctx)?)
            .max(qde_residual_negative(t, &nctx)?);
        out_samples.push(MonodromySample {
            point: point.iter().map(|z| format_complex(*z)).collect(),
            ratio_vs_formula: rf,
            q_periodicity: qp,
            stab_consistency: st,
        });
    }
    let passed = max_error < tol && qde_max < tol;
    let report = MonodromyReport {
        partition: partition.to_string(),
        q: format_complex(q),
        hbar: format_complex(hbar),
        tolerance: tol,
        truncation: nctx.factors(),
        p1: c1.p_value(),
        p2: c2.p_value(),
        samples: out_samples,
        max_error,
        qde_residual_max: qde_max,
        passed,
    };
    let rendered = match mode {
        OutputMode::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        OutputMode::Text => format!(
            "monodromy of ({}) between p={} and p={} chambers\n  samples: {}\n  max error: {:.3e}\n  max qde residual: {:.3e}\n  truncation: {} factors\n  {}\n",
            report.partition,
            report.p1,
            report.p2,
            report.samples.len(),
            report.max_error,
            report.qde_residual_max,
            report.truncation,
            if passed { "PASS" } else { "FAIL" }
        ),
    };
    if !passed {
        return Err(CliError {
            code: 2,
            message: rendered,
        });
    }
    Ok(rendered)
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub quick: bool,
    pub contexts: u32,
    pub suites: Vec<SuiteJson>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct SuiteJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Runs the suites, optionally across threads (capped by
/// QUIVER_VERTEX_THREADS); results are reassembled in suite order so the
/// output does not depend on scheduling.
pub fn cmd_selftest(cfg: &SelftestConfig, threads: usize, mode: OutputMode) -> CliResult<String> {
    let names = suite_names();
    let results: Vec<CheckResult> = if threads > 1 {
        let chunk = names.len().div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = names
                .chunks(chunk)
                .map(|batch| {
                    scope.spawn(move || {
                        batch
                            .iter()
                            .map(|n| run_suite(n, cfg))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("suite thread"))
                .collect()
        })
    } else {
        names.iter().map(|n| run_suite(n, cfg)).collect()
    };
    let passed = results.iter().all(|r| r.passed);
    let report = SelftestReport {
        seed: cfg.seed,
        quick: cfg.quick,
        contexts: cfg.contexts,
        suites: results
            .iter()
            .map(|r| SuiteJson {
                name: r.name.clone(),
                passed: r.passed,
                detail: r.detail.clone(),
            })
            .collect(),
        passed,
    };
    let rendered = match mode {
        OutputMode::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        OutputMode::Text => {
            let mut out = String::new();
            for s in &report.suites {
                out.push_str(&format!(
                    "{} {} — {}\n",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.name,
                    s.detail
                ));
            }
            out.push_str(&format!(
                "selftest: {}\n",
                if passed { "all suites passed" } else { "FAILURES" }
            ));
            out
        }
    };
    if !passed {
        return Err(CliError {
            code: 2,
            message: rendered,
        });
    }
    Ok(rendered)
}

/// Reads the thread cap from the environment (defaults to 1).
pub fn thread_cap() -> usize {
    std::env::var("QUIVER_VERTEX_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|n| *n >= 1)
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_io() {
        assert_eq!(parse_complex("0.3").unwrap(), Complex64::new(0.3, 0.0));
        assert_eq!(parse_complex("0.7+0.1i").unwrap(), Complex64::new(0.7, 0.1));
        assert_eq!(
            parse_complex("-0.2-0.3i").unwrap(),
            Complex64::new(-0.2, -0.3)
        );
        assert_eq!(parse_complex("0.5i").unwrap(), Complex64::new(0.0, 0.5));
        assert!(parse_complex("nonsense").is_err());
        assert_eq!(format_complex(Complex64::new(0.4, 0.2)), "0.4+0.2i");
        assert_eq!(format_complex(Complex64::new(0.4, -0.2)), "0.4-0.2i");
    }

    #[test]
    fn point_parser_requires_full_support() {
        let la: Partition = "2,1".parse().unwrap();
        assert!(parse_point(&la, "-1=1/3,0=2/5,1=1/7").is_ok());
        assert!(parse_point(&la, "0=2/5").is_err());
        assert!(parse_point(&la, "9=1").is_err());
    }

    #[test]
    fn vertex_both_methods_agree() {
        let la: Partition = "2,1".parse().unwrap();
        let ctx = SpecializationContext::default_context();
        let out = cmd_vertex(&la, 2, &ctx, "both", OutputMode::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["diff"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn degree_zero_vertex_json() {
        let la: Partition = "1".parse().unwrap();
        let ctx = SpecializationContext::default_context();
        let out = cmd_vertex(&la, 0, &ctx, "product", OutputMode::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let terms = v["product"]["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0]["coeff"], "1");
    }

    #[test]
    fn character_command_reports_both_conventions() {
        let la: Partition = "2,2".parse().unwrap();
        let out = cmd_character(&la, 0, 1, "1,1,1", OutputMode::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rank_one_identity"], true);
        assert!(v["character"].as_array().unwrap().len() == 2);
    }
}
