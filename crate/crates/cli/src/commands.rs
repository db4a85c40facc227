//! Subcommand bodies. Each returns a [`Report`]; `main` handles emission and exit codes.

use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Serialize;

use polyprog::cyclic::{
    compare_poly_vs_linear_with, gowers_norm, gowers_u2_fourier, popular_differences, Signal, Subset,
};
use polyprog::progression::{complexity_report_with, relation_space, Progression};
use polyprog::weyl::{closure_subspaces, equidistribution_test, AffineClosure, EquidistReport};

use crate::config::Config;
use crate::parse::parse_progression;
use crate::report::{num, Report, Table};
use crate::scenario::Scenario;

pub fn analyze(text: &str, cfg: &Config) -> Result<Report> {
    let expr = parse_progression(text)?;
    let prog = &expr.progression;
    let report = complexity_report_with(prog, cfg.cap_for(prog), cfg.r_max)?;
    let mut table = Table::new("complexity", &["index", "term", "complexity", "stabilized"]);
    for (i, c) in report.complexity_detail.iter().enumerate() {
        let term = if i == 0 { "x".to_string() } else { format!("x + {}", prog.polys()[i - 1].render("y")) };
        table.push(vec![i.to_string(), term, c.value.to_string(), c.stabilized.to_string()]);
    }
    Ok(Report::new("analyze", &report)?.with_table(table))
}

#[derive(Serialize)]
struct RelationListing {
    progression: String,
    cap: usize,
    stabilized: bool,
    dim: usize,
    relations: Vec<RelationEntry>,
}

#[derive(Serialize)]
struct RelationEntry {
    relation: String,
    degrees: Vec<Option<usize>>,
    max_degree: Option<usize>,
}

pub fn relations(text: &str, cfg: &Config) -> Result<Report> {
    let expr = parse_progression(text)?;
    let prog = &expr.progression;
    let space = relation_space(prog, cfg.cap_for(prog))?;
    let mut table = Table::new("relations", &["index", "relation", "max_degree"]);
    let relations: Vec<RelationEntry> = space
        .basis
        .iter()
        .map(|r| RelationEntry { relation: r.render(), degrees: r.degree_profile().to_vec(), max_degree: r.max_degree() })
        .collect();
    for (i, r) in relations.iter().enumerate() {
        table.push(vec![i.to_string(), r.relation.clone(), r.max_degree.map_or(String::new(), |d| d.to_string())]);
    }
    let listing = RelationListing {
        progression: prog.render(),
        cap: space.degree_cap,
        stabilized: space.stabilized,
        dim: space.dim(),
        relations,
    };
    Ok(Report::new("relations", listing)?.with_table(table))
}

/// The subset file when given, otherwise a seeded Bernoulli set of density `alpha`.
fn subset_for(n: usize, cfg: &Config, file: Option<&Path>) -> Result<Subset> {
    match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading subset {}", path.display()))?;
            Ok(Subset::parse_text(n, &text)?)
        }
        None => Ok(Subset::bernoulli(n, cfg.alpha, cfg.seed)),
    }
}

#[derive(Serialize)]
struct CountRow {
    n: usize,
    density: f64,
    poly_count: Complex64,
    linear_count: Complex64,
    difference: f64,
}

pub fn count(text: &str, cfg: &Config, subset: Option<&Path>) -> Result<Report> {
    let expr = parse_progression(text)?;
    let prog = &expr.progression;
    let mut rows = Vec::new();
    let mut table = Table::new("counts", &["N", "density", "poly_re", "poly_im", "linear_re", "linear_im", "difference"]);
    for &n in &cfg.n {
        let a = subset_for(n, cfg, subset)?;
        let r = compare_poly_vs_linear_with(&a, prog, cfg.cap_for(prog), cfg.budget as u128)?;
        table.push(vec![
            n.to_string(),
            num(a.density()),
            num(r.poly_count.re),
            num(r.poly_count.im),
            num(r.linear_count.re),
            num(r.linear_count.im),
            num(r.difference),
        ]);
        rows.push(CountRow { n, density: a.density(), poly_count: r.poly_count, linear_count: r.linear_count, difference: r.difference });
    }
    let result = serde_json::json!({ "progression": prog.render(), "seed": cfg.seed, "rows": rows });
    Ok(Report::new("count", result)?.with_table(table))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SignalKind {
    /// Values uniform in the unit disk.
    Random,
    /// `x ↦ e(x²/N)`.
    Quadratic,
    /// Indicator of the subset file or a seeded random set.
    Indicator,
}

#[derive(Serialize)]
struct NormRow {
    n: usize,
    trial: usize,
    order: usize,
    norm: f64,
}

pub fn gowers(cfg: &Config, kind: SignalKind, subset: Option<&Path>) -> Result<Report> {
    let mut table = Table::new("norms", &["N", "trial", "order", "norm"]);
    let mut rows = Vec::new();
    let mut u2_gap = 0.0f64;
    for &n in &cfg.n {
        let trials = if kind == SignalKind::Random { cfg.trials } else { 1 };
        for trial in 0..trials {
            let f = match kind {
                SignalKind::Random => Signal::random_disk(n, cfg.seed.wrapping_add(trial as u64)),
                SignalKind::Quadratic => Signal::phase(n, |x| (x as u64 * x as u64) % n as u64),
                SignalKind::Indicator => subset_for(n, cfg, subset)?.indicator(),
            };
            for &s in &cfg.orders {
                let norm = gowers_norm(&f, s)?;
                if s == 2 {
                    u2_gap = u2_gap.max((norm - gowers_u2_fourier(&f)).abs());
                }
                table.push(vec![n.to_string(), trial.to_string(), s.to_string(), num(norm)]);
                rows.push(NormRow { n, trial, order: s, norm });
            }
        }
    }
    let result = serde_json::json!({
        "signal": format!("{:?}", kind).to_lowercase(),
        "seed": cfg.seed,
        "u2_fourier_gap": u2_gap,
        "rows": rows,
    });
    Ok(Report::new("gowers", result)?.with_table(table))
}

pub fn popdiff(text: &str, cfg: &Config, subset: Option<&Path>) -> Result<Report> {
    let expr = parse_progression(text)?;
    let prog = &expr.progression;
    let mut reports = Vec::new();
    let mut table = Table::new("intersections", &["N", "difference", "intersection", "qualifies"]);
    for &n in &cfg.n {
        let a = subset_for(n, cfg, subset)?;
        let r = popular_differences(&a, prog, cfg.epsilon)?;
        for (d, &c) in r.intersections.iter().enumerate() {
            table.push(vec![n.to_string(), d.to_string(), c.to_string(), (c as f64 > r.threshold).to_string()]);
        }
        reports.push(r);
    }
    let result = serde_json::json!({ "progression": prog.render(), "seed": cfg.seed, "reports": reports });
    Ok(Report::new("popdiff", result)?.with_table(table))
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioOutcome {
    pub name: String,
    pub progression: String,
    pub n: usize,
    pub radius: i64,
    pub dim: usize,
    pub gp_dim: usize,
    pub k_dim: usize,
    pub contains_k: bool,
    pub subspace_basis: Vec<Vec<String>>,
    pub cosets: usize,
    pub coset_shifts: Vec<Vec<String>>,
    pub attained: Vec<(usize, f64)>,
    pub declared_dependencies: Vec<String>,
    pub max_distance: f64,
    pub equidistribution: EquidistReport,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

fn render_rows(rows: &[Vec<num_rational::BigRational>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect()
}

/// Closure, distance sweep and character table for one scenario.
pub fn run_scenario(sc: &Scenario, n_override: Option<usize>) -> Result<ScenarioOutcome> {
    let n = n_override.unwrap_or(sc.file.n);
    if n == 0 {
        bail!("N must be positive");
    }
    let prog: &Progression = &sc.progression.progression;
    let closure: AffineClosure = closure_subspaces(prog, &sc.sequence, &sc.dependencies)?;
    let max_distance = closure.max_distance(n);
    let eq = equidistribution_test(&closure, n, sc.file.radius)?;
    let c = &sc.file.checks;
    let mut checks = Vec::new();
    let mut exact = |name: &str, want: Option<usize>, got: usize| {
        if let Some(w) = want {
            checks.push(CheckResult { check: name.into(), value: got as f64, bound: w as f64, passed: got == w });
        }
    };
    exact("dim", c.dim, closure.dim());
    exact("gp_dim", c.gp_dim, closure.gp_dim());
    exact("cosets", c.cosets, closure.coset_shifts.len());
    if let Some(want) = c.equals_gp {
        let equal = closure.dim() == closure.gp_dim();
        checks.push(CheckResult { check: "equals_gp".into(), value: equal as u8 as f64, bound: want as u8 as f64, passed: equal == want });
    }
    let mut upper = |name: &str, bound: Option<f64>, value: f64| {
        if let Some(b) = bound {
            checks.push(CheckResult { check: name.into(), value, bound: b, passed: value <= b });
        }
    };
    upper("max_distance", c.max_distance, max_distance);
    upper("max_nonannihilating", c.max_nonannihilating, eq.max_nonannihilating);
    upper("annihilating_tolerance", c.annihilating_tolerance, eq.max_prediction_error);
    checks.push(CheckResult {
        check: "contains_k".into(),
        value: closure.contains_k as u8 as f64,
        bound: 1.0,
        passed: closure.contains_k,
    });
    let passed = checks.iter().all(|c| c.passed);
    Ok(ScenarioOutcome {
        name: sc.file.name.clone(),
        progression: prog.render(),
        n,
        radius: sc.file.radius,
        dim: closure.dim(),
        gp_dim: closure.gp_dim(),
        k_dim: closure.k_dim(),
        contains_k: closure.contains_k,
        subspace_basis: render_rows(&closure.subspace_basis),
        cosets: closure.coset_shifts.len(),
        coset_shifts: render_rows(&closure.coset_shifts),
        attained: closure.attained.clone(),
        declared_dependencies: closure.declared_dependencies.clone(),
        max_distance,
        equidistribution: eq,
        checks,
        passed,
    })
}

pub fn weyl(path: &Path, n_override: Option<usize>) -> Result<Report> {
    let sc = Scenario::load(path)?;
    let out = run_scenario(&sc, n_override)?;
    let mut chars = Table::new("characters", &["kind", "m", "predicted", "observed"]);
    for (kind, rows) in [("annihilating", &out.equidistribution.annihilating), ("worst", &out.equidistribution.worst)] {
        for r in rows {
            let m = r.m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            chars.push(vec![kind.into(), m, num(r.predicted), num(r.observed)]);
        }
    }
    let mut checks = Table::new("checks", &["check", "value", "bound", "passed"]);
    for c in &out.checks {
        checks.push(vec![c.check.clone(), num(c.value), num(c.bound), c.passed.to_string()]);
    }
    let passed = out.passed;
    Ok(Report::new("weyl", out)?.with_table(checks).with_table(chars).with_verdict(passed))
}
