//! One function per CLI subcommand. Each returns a [`Report`]: the JSON
//! document (with the resolved config embedded), an optional flat table for
//! CSV output, and any theorem-level invariant that failed to hold.

use std::time::Instant;

use fqeuclid::embed::{self, ColoredPattern};
use fqeuclid::pseudorandom::{self, MIXING_SLACK};
use fqeuclid::sample::mixing_pairs;
use fqeuclid::spectrum::{self, SpectrumReport};
use fqeuclid::{ColoredCayleyGraph, FDistanceSpec, Field, QuadraticSpace, VertexSet};
use serde_json::{json, Value};

use crate::config::{CommandSpec, LambdaMode, OutputFormat, RunConfig};
use crate::dense::dense_spectrum_oracle;
use crate::error::{CliError, Result};
use crate::format::{element_json, field_json, parse_element, read_json, vector_json, TableFile};

/// Largest elementwise gap tolerated between the character-sum and dense spectra.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    /// Theorem-level invariants that did not hold; any entry maps to exit code 3.
    pub failures: Vec<String>,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or_else(|| CliError::Config("csv output is not available for this command".into()))?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.header).map_err(csv_err)?;
                for row in &table.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?)
                    .expect("csv is utf-8"))
            }
        }
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

pub fn run(config: &RunConfig) -> Result<Report> {
    let (results, table, failures) = match &config.command {
        CommandSpec::Sphere { points } => cmd_sphere(config, *points)?,
        CommandSpec::Spectrum { fast, dense_check } => cmd_spectrum(config, *fast, *dense_check)?,
        CommandSpec::Certify => cmd_certify(config)?,
        CommandSpec::Mixing {
            samples,
            lambda_mode,
            lambda_scale,
        } => cmd_mixing(config, *samples, *lambda_mode, *lambda_scale)?,
        CommandSpec::Kaleido { k, n_edges, patterns } => cmd_kaleido(config, *k, *n_edges, patterns)?,
        CommandSpec::Count { .. } => cmd_count(config)?,
        CommandSpec::Fdist { .. } => cmd_fdist(config)?,
    };
    let json = json!({
        "command": config.command.name(),
        "config": serde_json::to_value(config).expect("config serializes"),
        "results": results,
        "failures": failures,
    });
    Ok(Report { json, table, failures })
}

type Output = (Value, Option<Table>, Vec<String>);

fn graph_for(config: &RunConfig, f: &Field) -> Result<ColoredCayleyGraph> {
    let form = config.quadratic_form(f)?;
    let space = QuadraticSpace::new(f.clone(), form).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(ColoredCayleyGraph::new(space))
}

fn single_field(config: &RunConfig) -> Result<Field> {
    let mut fields = config.fields()?;
    if fields.len() != 1 {
        return Err(CliError::Config(format!("{} runs on a single field", config.command.name())));
    }
    Ok(fields.remove(0))
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Counts are emitted as JSON integers when they fit in `u64`, else as strings.
fn count_json(c: u128) -> Value {
    u64::try_from(c).map(Value::from).unwrap_or_else(|_| Value::String(c.to_string()))
}

fn header(config: &RunConfig, g: &ColoredCayleyGraph) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("q".into(), json!(g.field().order()));
    m.insert("d".into(), json!(g.space().dim()));
    m.insert("field".into(), field_json(g.field()));
    m.insert("form".into(), config.form_label());
    m
}

fn cmd_sphere(config: &RunConfig, points: bool) -> Result<Output> {
    let mut table = Table::new(&["q", "d", "t", "sphere_size", "pair_count", "normalized", "normalized_double"]);
    let mut results = Vec::new();
    for f in config.fields()? {
        let g = graph_for(config, &f)?;
        let s = g.space();
        let mut spheres = Vec::new();
        for t in f.elements() {
            let pc = s.pair_count(t);
            let mut entry = json!({
                "t": element_json(&f, t),
                "sphere_size": pc.sphere_size,
                "pair_count": count_json(pc.count),
                "normalized": pc.normalized,
                "normalized_double": pc.normalized_double,
            });
            if points {
                entry["points"] = Value::Array(s.sphere(t).points.iter().map(|&v| vector_json(s, v)).collect());
            }
            table.push(vec![
                f.order().to_string(),
                s.dim().to_string(),
                cell(&element_json(&f, t)),
                pc.sphere_size.to_string(),
                pc.count.to_string(),
                pc.normalized.to_string(),
                pc.normalized_double.map(|x| x.to_string()).unwrap_or_default(),
            ]);
            spheres.push(entry);
        }
        let mut h = header(config, &g);
        h.insert("vertex_count".into(), json!(s.size()));
        h.insert("spheres".into(), Value::Array(spheres));
        results.push(Value::Object(h));
    }
    Ok((Value::Array(results), Some(table), Vec::new()))
}

pub fn spectrum_json(config: &RunConfig, g: &ColoredCayleyGraph, rep: &SpectrumReport) -> Value {
    let mut h = header(config, g);
    h.insert("color".into(), element_json(g.field(), rep.color));
    h.insert("valency".into(), json!(rep.valency));
    h.insert("eigenvalues".into(), json!(rep.eigenvalues));
    h.insert("max_nontrivial".into(), json!(rep.max_nontrivial));
    h.insert("bound".into(), json!(rep.bound));
    h.insert("ramanujan_ok".into(), json!(rep.ramanujan_ok));
    h.insert("max_imag_residual".into(), json!(rep.max_imag_residual));
    Value::Object(h)
}

fn cmd_spectrum(config: &RunConfig, fast: bool, dense_check: bool) -> Result<Output> {
    let mut table = Table::new(&["q", "d", "color", "valency", "max_nontrivial", "bound", "ramanujan_ok"]);
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for f in config.fields()? {
        let g = graph_for(config, &f)?;
        for a in config.color_list(&f)? {
            let rep = if fast {
                spectrum::full_spectrum_fast(&g, a)?
            } else {
                spectrum::full_spectrum(&g, a)?
            };
            let mut entry = spectrum_json(config, &g, &rep);
            let label = format!("q={} d={} color={}", f.order(), g.space().dim(), element_json(&f, a));
            if !rep.ramanujan_ok {
                failures.push(format!("{}: max nontrivial {} exceeds {}", label, rep.max_nontrivial, rep.bound));
            }
            if dense_check {
                let diff = if g.size() <= config.oracle_cap {
                    let dense = dense_spectrum_oracle(&g, a, config.oracle_cap)?;
                    let diff = dense
                        .iter()
                        .zip(&rep.eigenvalues)
                        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                    if diff > ORACLE_TOLERANCE {
                        failures.push(format!("{}: dense eigensolver differs by {}", label, diff));
                    }
                    Some(diff)
                } else {
                    None
                };
                entry["dense_max_diff"] = json!(diff);
            }
            table.push(vec![
                f.order().to_string(),
                g.space().dim().to_string(),
                cell(&element_json(&f, a)),
                rep.valency.to_string(),
                rep.max_nontrivial.to_string(),
                rep.bound.to_string(),
                rep.ramanujan_ok.to_string(),
            ]);
            results.push(entry);
        }
    }
    Ok((Value::Array(results), Some(table), failures))
}

fn cmd_certify(config: &RunConfig) -> Result<Output> {
    let mut table = Table::new(&["q", "d", "color", "valency", "max_nontrivial", "d_min", "lambda_max", "rc_ok"]);
    let mut results = Vec::new();
    for f in config.fields()? {
        let g = graph_for(config, &f)?;
        config.color_list(&f)?;
        let cert = pseudorandom::certify_rc(&g)?;
        let colors: Vec<Value> = cert
            .colors
            .iter()
            .map(|c| {
                table.push(vec![
                    f.order().to_string(),
                    g.space().dim().to_string(),
                    cell(&element_json(&f, c.color)),
                    c.valency.to_string(),
                    c.max_nontrivial.to_string(),
                    cert.d_min.to_string(),
                    cert.lambda_max.to_string(),
                    cert.rc_ok.to_string(),
                ]);
                json!({
                    "color": element_json(&f, c.color),
                    "valency": c.valency,
                    "max_nontrivial": c.max_nontrivial,
                    "regular": c.regular,
                })
            })
            .collect();
        let mut h = header(config, &g);
        h.insert("n".into(), json!(cert.n));
        h.insert("colors".into(), Value::Array(colors));
        h.insert("d_min".into(), json!(cert.d_min));
        h.insert("d_max".into(), json!(cert.d_max));
        h.insert("lambda_max".into(), json!(cert.lambda_max));
        h.insert("rc_ok".into(), json!(cert.rc_ok));
        results.push(Value::Object(h));
    }
    Ok((Value::Array(results), Some(table), Vec::new()))
}

fn cmd_mixing(config: &RunConfig, samples: usize, mode: LambdaMode, scale: f64) -> Result<Output> {
    let mut table = Table::new(&["q", "d", "color", "lambda", "samples", "violations", "worst_normalized_defect"]);
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for f in config.fields()? {
        let g = graph_for(config, &f)?;
        let cert = pseudorandom::certify_rc(&g)?;
        let n = g.size();
        let pairs: Vec<(VertexSet, VertexSet)> = mixing_pairs(n, samples, config.seed)
            .into_iter()
            .map(|(b, c)| Ok((VertexSet::new(n, b)?, VertexSet::new(n, c)?)))
            .collect::<fqeuclid::Result<_>>()?;
        for a in config.color_list(&f)? {
            let base = match mode {
                LambdaMode::Spectral => cert.mixing_lambda(a).expect("every color is certified"),
                LambdaMode::Theoretical => spectrum::ramanujan_bound(f.order(), g.space().dim()) + MIXING_SLACK,
            };
            let lambda = base * scale;
            let mut violations = 0usize;
            let mut worst = 0.0f64;
            let mut first = Value::Null;
            for (b, c) in &pairs {
                let chk = pseudorandom::mixing_check(&g, a, b, c, lambda)?;
                worst = worst.max(chk.normalized_defect());
                if !chk.ok {
                    if violations == 0 {
                        first = json!({
                            "b_size": chk.b_size,
                            "c_size": chk.c_size,
                            "e_bc": chk.e_bc,
                            "predicted": chk.predicted,
                            "bound": chk.bound,
                        });
                    }
                    violations += 1;
                }
            }
            if violations > 0 && scale >= 1.0 {
                failures.push(format!(
                    "q={} d={} color={}: {} mixing violations",
                    f.order(),
                    g.space().dim(),
                    element_json(&f, a),
                    violations
                ));
            }
            table.push(vec![
                f.order().to_string(),
                g.space().dim().to_string(),
                cell(&element_json(&f, a)),
                lambda.to_string(),
                samples.to_string(),
                violations.to_string(),
                worst.to_string(),
            ]);
            let mut h = header(config, &g);
            h.insert("color".into(), element_json(&f, a));
            h.insert("lambda".into(), json!(lambda));
            h.insert("samples".into(), json!(samples));
            h.insert("violations".into(), json!(violations));
            h.insert("worst_normalized_defect".into(), json!(worst));
            h.insert("first_violation".into(), first);
            results.push(Value::Object(h));
        }
    }
    Ok((Value::Array(results), Some(table), failures))
}

fn cmd_kaleido(config: &RunConfig, k: usize, n_edges: usize, patterns: &[crate::format::PatternFile]) -> Result<Output> {
    let mut table = Table::new(&[
        "q",
        "d",
        "vertex_count",
        "ratio_max",
        "completeness_defect",
        "threshold_size",
        "patterns_contained",
    ]);
    let mut results = Vec::new();
    let mut counts = Vec::new();
    for f in config.fields()? {
        let g = graph_for(config, &f)?;
        let rep = pseudorandom::kaleido_conditions(&g, k, n_edges, config.constant_c)?;
        counts.push(rep.vertex_count);
        let mut found = Vec::new();
        for (idx, pf) in patterns.iter().enumerate() {
            let h = pf.to_pattern(&f)?;
            let threshold = pseudorandom::threshold_size(g.size(), f.order() as usize - 1, h.k(), h.n(), config.constant_c);
            let size = (threshold.ceil() as usize).min(g.size());
            let subset = VertexSet::new(g.size(), fqeuclid::sample::sample_subset(g.size(), size, config.seed)?)?;
            let contained = embed::contains_pattern(&g, &subset, &h)?;
            found.push(json!({
                "pattern": idx,
                "k": h.k(),
                "n": h.n(),
                "threshold_size": threshold,
                "subset_size": size,
                "contained": contained,
            }));
        }
        let all_found = found.iter().all(|v| v["contained"] == json!(true));
        table.push(vec![
            f.order().to_string(),
            g.space().dim().to_string(),
            rep.vertex_count.to_string(),
            rep.ratio_max.map(|x| x.to_string()).unwrap_or_default(),
            rep.completeness_defect.to_string(),
            rep.threshold_size.to_string(),
            if patterns.is_empty() { String::new() } else { all_found.to_string() },
        ]);
        let mut h = header(config, &g);
        h.insert("vertex_count".into(), json!(rep.vertex_count));
        h.insert(
            "edge_counts".into(),
            Value::Array(
                rep.edge_counts
                    .iter()
                    .map(|&(c, e)| json!({"color": element_json(&f, c), "edges": e}))
                    .collect(),
            ),
        );
        h.insert("ratio_max".into(), json!(rep.ratio_max));
        h.insert("zero_distance_pairs".into(), json!(rep.zero_distance_pairs));
        h.insert("total_pairs".into(), json!(rep.total_pairs));
        h.insert("completeness_defect".into(), json!(rep.completeness_defect));
        h.insert("k".into(), json!(rep.k));
        h.insert("n_edges".into(), json!(rep.n_edges));
        h.insert("constant".into(), json!(rep.constant));
        h.insert("threshold_size".into(), json!(rep.threshold_size));
        h.insert("patterns".into(), Value::Array(found));
        results.push(Value::Object(h));
    }
    let out = json!({
        "vertex_counts_increase": pseudorandom::grows(&counts),
        "grid": results,
    });
    Ok((out, Some(table), Vec::new()))
}

fn cmd_count(config: &RunConfig) -> Result<Output> {
    let CommandSpec::Count { pattern, subset } = &config.command else {
        unreachable!()
    };
    let f = single_field(config)?;
    let g = graph_for(config, &f)?;
    let h: ColoredPattern = pattern.to_pattern(&f)?;
    let e = match subset {
        Some(spec) => spec.resolve(g.size())?,
        None => VertexSet::full(g.size()),
    };
    let start = Instant::now();
    let count = embed::count_embeddings(&g, &e, &h, config.constant_c)?;
    let elapsed = start.elapsed();
    let cert = pseudorandom::certify_rc(&g)?;
    let pred = embed::prediction_report(&count, &h, &cert);

    let mut failures = Vec::new();
    if count.ordered_count % count.aut as u128 != 0 {
        failures.push(format!(
            "ordered count {} not divisible by |Aut_c(H)| = {}",
            count.ordered_count, count.aut
        ));
    }
    let mut out = header(config, &g);
    let fields = [
        ("subset_size", json!(count.subset_size)),
        ("k", json!(count.k)),
        ("n", json!(count.n)),
        ("max_degree", json!(h.max_degree())),
        ("ordered_count", count_json(count.ordered_count)),
        ("aut", json!(count.aut)),
        ("unordered_count", count_json(count.unordered_count)),
        ("predicted_main", json!(count.predicted_main)),
        ("predicted_tool3", json!(count.predicted_tool3)),
        ("predicted_tool3_unordered", json!(count.predicted_tool3 / count.aut as f64)),
        ("threshold", json!(count.threshold)),
        ("threshold_met", json!(count.threshold_met)),
        ("in_theorem_range", json!(count.in_theorem_range)),
        ("ratio_main", json!(pred.ratio_main)),
        ("ratio_tool3", json!(pred.ratio_tool3)),
        ("tool3_required_size", json!(pred.tool3_required_size)),
        ("tool3_size_met", json!(pred.tool3_size_met)),
        ("lambda_max", json!(cert.lambda_max)),
        ("d_min", json!(cert.d_min)),
    ];
    for (k, v) in fields {
        out.insert(k.into(), v);
    }
    if config.timing {
        out.insert("timing_ms".into(), json!(elapsed.as_secs_f64() * 1e3));
    }
    Ok((Value::Object(out), None, failures))
}

fn cmd_fdist(config: &RunConfig) -> Result<Output> {
    let CommandSpec::Fdist { table, expr, j } = &config.command else {
        unreachable!()
    };
    let f = single_field(config)?;
    let g = graph_for(config, &f)?;
    let s = g.space();
    let target = parse_element(&f, j).map_err(CliError::Config)?;
    let spec = match (table, expr.as_deref()) {
        (Some(path), None) => {
            let file: TableFile = read_json(path.as_ref())?;
            FDistanceSpec::new(s, file.values(&f)?, target).map_err(|e| CliError::FileFormat(e.to_string()))?
        }
        (None, Some("quadratic")) => FDistanceSpec::from_fn(s, |x| s.evaluate(x).expect("dimension matches"), target)?,
        (None, Some("cubic-sum")) => FDistanceSpec::from_fn(
            s,
            |x| {
                x.iter()
                    .fold(f.zero(), |acc, &c| f.add(acc, f.mul(c, f.mul(c, c))))
            },
            target,
        )?,
        (None, Some(other)) => return Err(CliError::Config(format!("unknown expression {:?}", other))),
        _ => return Err(CliError::Config("give exactly one of --table or --expr".into())),
    };
    let rep = spectrum::f_distance_spectrum(s, &spec);
    let mut out = header(config, &g);
    let fields = [
        ("j", element_json(&f, rep.target)),
        ("connection_size", json!(rep.connection_size)),
        ("includes_origin", json!(rep.includes_origin)),
        ("symmetric", json!(rep.symmetric)),
        ("eigenvalues", json!(rep.eigenvalues)),
        ("lambda_zero", json!(rep.lambda_zero)),
        ("max_nontrivial", json!(rep.max_nontrivial)),
        ("max_imag_residual", json!(rep.max_imag_residual)),
        ("c1", json!(rep.c1)),
        ("c2", json!(rep.c2)),
        ("bound", json!(rep.bound)),
        ("within_bound", json!(rep.within_bound)),
    ];
    for (k, v) in fields {
        out.insert(k.into(), v);
    }
    Ok((Value::Object(out), None, Vec::new()))
}
