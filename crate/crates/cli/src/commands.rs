//! Subcommand implementations. Each returns the process exit code.

use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use closedcurve::minkowski::{causal_character, pseudo_norm};
use closedcurve::oracle::{reconstruct_curve, OracleOptions};
use closedcurve::peano_baker::{closure_criterion, tabulate_m, ClosureReport};
use closedcurve::{MetricSignature, Verdict};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::config::{EpsSpec, JobConfig, ProblemConfig, ProblemKind};
use crate::output::{fmt_f64, num, to_json_pretty, trace_table, write_file, Table};
use crate::{Cli, Command, DarbouxArgs};

const CLOSED: u8 = 0;
const NOT_CLOSED: u8 = 1;

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let mut cfg = match &cli.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::default(),
    };
    cfg.apply(&cli.overrides())?;
    match &cli.command {
        Command::Classify { sig, vector } => classify(sig, vector),
        Command::Closure { report } => closure(&cfg, report.as_deref()),
        Command::Reconstruct { trace, frames } => reconstruct(&cfg, trace.as_deref(), *frames),
        Command::Darboux(args) => darboux(&cfg, args),
        Command::Sweep { out } => sweep(&cfg, out.as_deref()),
    }
}

fn verdict_code(v: Verdict) -> ExitCode {
    ExitCode::from(if v == Verdict::Closed { CLOSED } else { NOT_CLOSED })
}

fn parse_list<T: std::str::FromStr>(text: &str, field: &str) -> Result<Vec<T>> {
    text.split(',')
        .enumerate()
        .map(|(i, part)| {
            let part = part.trim();
            part.parse()
                .map_err(|_| anyhow!("{field}: entry {} ('{part}') is not a valid number", i + 1))
        })
        .collect()
}

fn classify(sig: &str, vector: &str) -> Result<ExitCode> {
    let nv: Vec<usize> = parse_list(sig, "sig")?;
    let [n, v] = nv[..] else {
        bail!("sig: expected 'n,v', got {} entries", nv.len());
    };
    let sig = MetricSignature::new(n, v)?;
    let u: Vec<f64> = parse_list(vector, "vec")?;
    let character = causal_character(&u, &sig)?;
    let norm = pseudo_norm(&u, &sig)?;
    println!("{character}, pseudo-norm {norm}");
    Ok(ExitCode::SUCCESS)
}

/// The effective job, embedded in every report.
fn echo(cfg: &JobConfig, problem: &ProblemConfig) -> JobConfig {
    JobConfig {
        problem: Some(problem.clone()),
        numerics: cfg.numerics,
        ..JobConfig::default()
    }
}

#[derive(Serialize)]
struct ReportJson {
    verdict: Verdict,
    cond_i_residual: f64,
    cond_ii_residuals: Vec<f64>,
    max_cond_ii: f64,
    det_m_omega: f64,
    oracle_frame_gap: f64,
    oracle_curve_gap: f64,
    oracle_tangent_integral: Vec<f64>,
    order_used: usize,
    tail_bound: f64,
    grid_points: usize,
    warning: Option<String>,
    m_omega: Vec<Vec<f64>>,
    config: JobConfig,
}

impl ReportJson {
    fn new(r: &ClosureReport, config: JobConfig) -> Self {
        let m = &r.series.m_omega;
        Self {
            verdict: r.verdict,
            cond_i_residual: r.cond_i_residual,
            cond_ii_residuals: r.cond_ii_residuals.clone(),
            max_cond_ii: r.max_cond_ii(),
            det_m_omega: r.det_m_omega,
            oracle_frame_gap: r.oracle_frame_gap,
            oracle_curve_gap: r.oracle_curve_gap,
            oracle_tangent_integral: r.oracle.tangent_integral.clone(),
            order_used: r.series.order_used,
            tail_bound: r.series.tail_bound,
            grid_points: r.series.grid_points,
            warning: r.series.warning.clone(),
            m_omega: m.row_iter().map(|row| row.iter().copied().collect()).collect(),
            config,
        }
    }
}

fn print_vec(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(", ")
}

fn closure(cfg: &JobConfig, report_path: Option<&Path>) -> Result<ExitCode> {
    let problem = cfg.problem()?;
    let sys = problem.build()?;
    let r = closure_criterion(&sys, &cfg.numerics)?;
    println!("verdict: {:?}", r.verdict);
    println!("cond_i_residual: {}", fmt_f64(r.cond_i_residual));
    println!("cond_ii_residuals: [{}]", print_vec(&r.cond_ii_residuals));
    println!("det_m_omega: {}", fmt_f64(r.det_m_omega));
    println!("order_used: {}", r.series.order_used);
    println!("tail_bound: {}", fmt_f64(r.series.tail_bound));
    println!("oracle_frame_gap: {}", fmt_f64(r.oracle_frame_gap));
    println!("oracle_curve_gap: {}", fmt_f64(r.oracle_curve_gap));
    if let Some(w) = &r.series.warning {
        eprintln!("warning: {w}");
    }
    if let Some(path) = report_path.or(cfg.outputs.report_path.as_deref()) {
        write_file(path, &to_json_pretty(&ReportJson::new(&r, echo(cfg, problem)))?)?;
    }
    Ok(verdict_code(r.verdict))
}

fn reconstruct(cfg: &JobConfig, trace_path: Option<&Path>, frames: bool) -> Result<ExitCode> {
    let path = trace_path
        .or(cfg.outputs.trace_path.as_deref())
        .context("trace_path: required for reconstruct (set outputs.trace_path or --trace)")?;
    let sys = cfg.problem()?.build()?;
    let opts = OracleOptions {
        steps: cfg.numerics.steps,
        reorthonormalize: cfg.numerics.reorthonormalize,
        ..OracleOptions::default()
    };
    let trace = reconstruct_curve(&sys, &opts, None)?;
    trace_table(&trace, frames || cfg.outputs.frames).write(Some(path), cfg.outputs.format)?;
    let res = trace.closure_residuals()?;
    println!("rows: {}", trace.len());
    println!("gap: {}", fmt_f64(res.gap));
    println!("frame_gap: {}", fmt_f64(res.frame_gap));
    println!("tangent_integral: [{}]", print_vec(&res.tangent_integral));
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DarbouxJson {
    discriminant: f64,
    row1_closed_form: [f64; 3],
    row1_series: Vec<f64>,
    row1_integrals_closed_form: [f64; 3],
    row1_integrals_series: Vec<f64>,
    closed: bool,
    k: Option<u32>,
    criterion_verdict: Verdict,
    config: JobConfig,
}

fn darboux(cfg: &JobConfig, args: &DarbouxArgs) -> Result<ExitCode> {
    let mut problem = match &cfg.problem {
        Some(p) if p.kind == ProblemKind::DarbouxTimelike => p.clone(),
        Some(_) => bail!("kind: the darboux command needs a darboux-timelike problem"),
        None => ProblemConfig { kind: ProblemKind::DarbouxTimelike, ..ProblemConfig::default() },
    };
    problem.kg = args.kg.or(problem.kg);
    problem.kn = args.kn.or(problem.kn);
    problem.tg = args.tg.or(problem.tg);
    problem.omega = args.omega.or(problem.omega);
    if let Some(e) = args.eps {
        problem.eps = Some(EpsSpec::One(e));
    }
    let p = problem.darboux_params()?;
    let cond = p.closure_condition(cfg.numerics.tol_zero);
    let sys = p.into();
    let table = tabulate_m(&sys, &cfg.numerics)?;
    let report = closure_criterion(&sys, &cfg.numerics)?;
    let json = DarbouxJson {
        discriminant: p.discriminant(),
        row1_closed_form: p.closed_form_row1(),
        row1_series: table.result.m_omega.row(0).iter().copied().collect(),
        row1_integrals_closed_form: p.closed_form_row1_integrals(),
        row1_integrals_series: table.row1_integrals()?,
        closed: cond.closed,
        k: cond.k,
        criterion_verdict: report.verdict,
        config: echo(cfg, &problem),
    };
    println!("discriminant: {}", fmt_f64(json.discriminant));
    println!("row1 closed form: [{}]", print_vec(&json.row1_closed_form));
    println!("row1 series: [{}]", print_vec(&json.row1_series));
    println!("condition (ii) closed form: [{}]", print_vec(&json.row1_integrals_closed_form));
    println!("condition (ii) series: [{}]", print_vec(&json.row1_integrals_series));
    match cond.k {
        Some(k) => println!("closed, k = {k}"),
        None => println!("not closed"),
    }
    println!("criterion verdict: {:?}", report.verdict);
    if let Some(path) = args.report.as_deref().or(cfg.outputs.report_path.as_deref()) {
        write_file(path, &to_json_pretty(&json)?)?;
    }
    Ok(ExitCode::from(if cond.closed { CLOSED } else { NOT_CLOSED }))
}

/// Summary cells shared by `sweep` rows.
fn summary_cells(r: &ClosureReport) -> Vec<Value> {
    vec![
        num(r.cond_i_residual),
        num(r.max_cond_ii()),
        num(r.det_m_omega),
        num(r.oracle_curve_gap),
        Value::from(format!("{:?}", r.verdict)),
        Value::Null,
    ]
}

fn sweep(cfg: &JobConfig, out: Option<&Path>) -> Result<ExitCode> {
    let base = cfg.problem()?;
    let axes = &cfg.sweep.as_ref().context("sweep: section missing from config")?.axes;
    if axes.is_empty() {
        bail!("sweep.axes: at least one axis required");
    }
    // Row-major: the first axis varies slowest.
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        let values = axis.values();
        points = points
            .into_iter()
            .flat_map(|p| values.iter().map(move |v| [p.clone(), vec![*v]].concat()))
            .collect();
    }
    let rows: Vec<Vec<Value>> = points
        .par_iter()
        .map(|point| {
            let result = (|| -> Result<ClosureReport> {
                let mut problem = base.clone();
                for (axis, value) in axes.iter().zip(point) {
                    problem.set(&axis.param, *value)?;
                }
                Ok(closure_criterion(&problem.build()?, &cfg.numerics)?)
            })();
            let mut row: Vec<Value> = point.iter().map(|v| num(*v)).collect();
            match result {
                Ok(r) => row.extend(summary_cells(&r)),
                Err(e) => {
                    row.extend(std::iter::repeat_n(Value::Null, 4));
                    row.push(Value::from("Error"));
                    row.push(Value::from(format!("{e:#}")));
                }
            }
            row
        })
        .collect();
    let mut columns: Vec<String> = axes.iter().map(|a| a.param.clone()).collect();
    columns.extend(
        ["cond_i_residual", "max_cond_ii", "det_m_omega", "oracle_curve_gap", "verdict", "error"]
            .map(String::from),
    );
    let table = Table { columns, rows };
    table.write(out.or(cfg.outputs.table_path.as_deref()), cfg.outputs.format)?;
    Ok(ExitCode::SUCCESS)
}
