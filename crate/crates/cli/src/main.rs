//! `magflow` command-line front end. Reports are pretty JSON on stdout (or
//! `--out`), one-line summaries go to stderr.
//!
//! Exit status: 0 pass, 1 check failed (Jacobi, cocycle, claim, audit,
//! chart exit), 2 usage, parse or lookup error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use magflow::catalog::charts::g7_algebra;
use magflow::catalog::expr::Bindings;
use magflow::catalog::verify::CatalogReport;
use magflow::catalog::{
    g7_casimirs, list_entries, verify_all, Catalog, ClaimStatus, G7Chart, SamplingPlan, TorusChart,
};
use magflow::cohomology::{
    cocycle_basis, cohomology_index, cohomology_index_symbolic, cohomology_report, is_cocycle,
    kernel, verdict_from_index, CocycleJson, KernelReport,
};
use magflow::dynamics::{
    closed_form_torus, hamiltonian_jet, integrals_of_motion, integrate, magnetic_flow_rhs, Audit,
    CoadjointState, GroupChart, IntegrateOptions, Method, Metric, PhaseState, ReducedSystem,
    Trajectory,
};
use magflow::extension::central_extension;
use magflow::lie::{algebra_index, AlgebraJson};
use magflow::linalg::RatMatrix;
use magflow::rational;
use magflow::{Error, LieAlgebra, RankOptions, Rational, TwoCochain};

#[derive(Parser)]
#[command(
    name = "magflow",
    version,
    about = "Integrability of magnetic geodesic flows via Lie algebra 2-cocycles"
)]
struct Cli {
    /// Seed for randomized rank sampling and catalog sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Randomized rank trials.
    #[arg(long, global = true, default_value_t = magflow::rank::DEFAULT_TRIALS)]
    trials: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Algebra operations.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Cocycle operations.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// dim Z², B², H² with bases.
    Cohomology(AlgebraArg),
    /// ind g.
    Index(AlgebraArg),
    /// ind_[F] g.
    CohomologyIndex(PairArgs),
    /// Integrability verdict (dim g − ind_[F] g) / 2 < 2.
    Integrable(PairArgs),
    /// Central extension g̃ defined by a cocycle.
    Extend(PairArgs),
    /// Integrate a flow with conservation audits.
    #[command(subcommand)]
    Simulate(SimCmd),
    /// The four-dimensional catalog.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Check the Jacobi identity.
    Validate(AlgebraArg),
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// Canonical basis of Z²(g).
    Basis(AlgebraArg),
    /// Closure check with the violating triples.
    Check(PairArgs),
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Verify {
        /// Entry ids; all entries when absent.
        #[arg(long)]
        entry: Vec<String>,
    },
}

#[derive(Args)]
struct AlgebraArg {
    /// Algebra JSON file or catalog id (g0..g15).
    #[arg(long)]
    algebra: String,
    /// Catalog parameter binding `name=value`.
    #[arg(long = "param")]
    params: Vec<String>,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    alg: AlgebraArg,
    /// Cocycle JSON file or inline `a-b=v,...` with 1-based labels.
    #[arg(long)]
    cocycle: String,
    /// Exact symbolic rank instead of randomized sampling.
    #[arg(long)]
    symbolic: bool,
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long)]
    charge: Option<f64>,
    /// Metric JSON file or inline CSV (n diagonal or n² row-major entries).
    #[arg(long)]
    metric: Option<String>,
    /// Initial state: JSON file with a number array, or CSV.
    #[arg(long)]
    init: String,
    #[arg(long = "t", default_value_t = 1.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Rk4)]
    method: MethodArg,
    /// Record every n-th step.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Comma-separated audit names; defaults depend on the mode.
    #[arg(long)]
    audit: Option<String>,
    /// Drift threshold for a passing audit.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Threshold on the deviation from a closed-form solution.
    #[arg(long, default_value_t = 1e-6)]
    closed_tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Rk4,
    Rk45,
}

#[derive(Subcommand)]
enum SimCmd {
    /// Lie–Poisson flow on the dual of the extension. Initial data: the n
    /// base components, or all n + 1 with the central one first.
    Reduced {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        flow: FlowArgs,
    },
    /// Magnetic flow in group coordinates. Initial data: g then p.
    Chart {
        /// `torus` or `g7-chart`.
        #[arg(long)]
        chart: String,
        /// Chart parameters: `c` for the torus, `alpha`, `beta`, `gamma` for g7.
        #[arg(long = "param")]
        params: Vec<String>,
        #[command(flatten)]
        flow: FlowArgs,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::JacobiViolation { .. }
            | Error::NotACocycle { .. }
            | Error::OutOfChart { .. }
            | Error::StepRejection { .. }
            | Error::DomainViolation { .. },
        ) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let opts = RankOptions {
        trials: cli.trials,
        seed: cli.seed,
        ..RankOptions::default()
    };
    match &cli.cmd {
        Cmd::Algebra(AlgebraCmd::Validate(a)) => cmd_validate(cli, a),
        Cmd::Cocycle(CocycleCmd::Basis(a)) => {
            let alg = load_algebra(a)?;
            let basis: Vec<CocycleJson> = cocycle_basis(&alg)
                .iter()
                .map(TwoCochain::to_json)
                .collect();
            eprintln!("dim Z2 = {}", basis.len());
            emit_json(cli, &basis)
        }
        Cmd::Cocycle(CocycleCmd::Check(p)) => {
            let alg = load_algebra(&p.alg)?;
            let f = load_cocycle(&p.cocycle, alg.dim())?;
            let check = is_cocycle(&alg, &f)?;
            eprintln!("cocycle: {}", check.is_cocycle);
            emit_json(cli, &check)?;
            Ok(if check.is_cocycle {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Cmd::Cohomology(a) => {
            let r = cohomology_report(&load_algebra(a)?);
            eprintln!(
                "dim Z2 = {}, dim B2 = {}, dim H2 = {}",
                r.dim_z2, r.dim_b2, r.dim_h2
            );
            emit_json(cli, &r)
        }
        Cmd::Index(a) => {
            let alg = load_algebra(a)?;
            let index = algebra_index(&alg, &opts);
            eprintln!("ind g = {index}");
            emit_json(cli, &IndexReport::new(&alg, index, &opts))
        }
        Cmd::CohomologyIndex(p) => {
            let (alg, f) = load_pair(p)?;
            let index = pair_index(&alg, &f, p.symbolic, &opts)?;
            eprintln!("ind_[F] g = {index}");
            emit_json(
                cli,
                &CohomologyIndexReport {
                    index: IndexReport::new(&alg, index, &opts),
                    kernel: KernelReport::from(&kernel(&alg, &f)?),
                },
            )
        }
        Cmd::Integrable(p) => {
            let (alg, f) = load_pair(p)?;
            let v = verdict_from_index(alg.dim(), pair_index(&alg, &f, p.symbolic, &opts)?);
            eprintln!("integrable: {}, lhs: {}", v.integrable, v.lhs);
            emit_json(cli, &v)
        }
        Cmd::Extend(p) => {
            let (alg, f) = load_pair(p)?;
            let ext = central_extension(&alg, &f)?;
            eprintln!("extension of dimension {}", ext.dim());
            emit_json(cli, &ext.extended.to_json())
        }
        Cmd::Simulate(SimCmd::Reduced { pair, flow }) => cmd_reduced(cli, pair, flow),
        Cmd::Simulate(SimCmd::Chart {
            chart,
            params,
            flow,
        }) => cmd_chart(cli, chart, params, flow),
        Cmd::Catalog(CatalogCmd::List) => {
            let entries = list_entries();
            if cli.format == Format::Csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["id", "kind", "printed"])?;
                for e in &entries {
                    w.write_record([e.id.as_str(), e.kind, e.printed.as_str()])?;
                }
                return emit_bytes(cli, &w.into_inner()?).map(|_| Outcome::Pass);
            }
            emit_json(cli, &entries)
        }
        Cmd::Catalog(CatalogCmd::Verify { entry }) => cmd_catalog_verify(cli, entry),
    }
}

fn cmd_validate(cli: &Cli, a: &AlgebraArg) -> anyhow::Result<Outcome> {
    #[derive(Serialize)]
    struct Report {
        name: String,
        dim: usize,
        jacobi: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        violation: Option<String>,
    }
    let (name, dim, result) = match Catalog::embedded().entry(&a.algebra) {
        Ok(entry) => (entry.id.clone(), 4, load_algebra(a).map(|_| ())),
        Err(_) => {
            let json = read_algebra_json(&a.algebra)?;
            (
                json.name.clone(),
                json.dim,
                LieAlgebra::from_json(&json).map(|_| ()).map_err(Into::into),
            )
        }
    };
    let report = match result {
        Ok(()) => Report {
            name,
            dim,
            jacobi: true,
            violation: None,
        },
        Err(e) => match e.downcast_ref::<Error>() {
            Some(v @ Error::JacobiViolation { .. }) => Report {
                name,
                dim,
                jacobi: false,
                violation: Some(v.to_string()),
            },
            _ => return Err(e),
        },
    };
    match &report.violation {
        None => eprintln!("{}: Jacobi identity holds", report.name),
        Some(v) => eprintln!("{}: {v}", report.name),
    }
    emit_json(cli, &report)?;
    Ok(if report.jacobi {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

#[derive(Serialize)]
struct IndexReport {
    algebra: String,
    dim: usize,
    index: usize,
    seed: u64,
    trials: usize,
    failure_bound: f64,
}

impl IndexReport {
    fn new(alg: &LieAlgebra, index: usize, opts: &RankOptions) -> Self {
        Self {
            algebra: alg.name().to_string(),
            dim: alg.dim(),
            index,
            seed: opts.seed,
            trials: opts.trials,
            failure_bound: opts.failure_bound(alg.dim()),
        }
    }
}

#[derive(Serialize)]
struct CohomologyIndexReport {
    #[serde(flatten)]
    index: IndexReport,
    kernel: KernelReport,
}

fn pair_index(
    alg: &LieAlgebra,
    f: &TwoCochain,
    symbolic: bool,
    opts: &RankOptions,
) -> magflow::Result<usize> {
    if symbolic {
        cohomology_index_symbolic(alg, f)
    } else {
        cohomology_index(alg, f, opts)
    }
}

fn bindings(params: &[String]) -> anyhow::Result<Bindings> {
    params
        .iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("--param expects name=value, got {p}"))
            })?;
            Ok((k.trim().to_string(), rational::parse(v.trim())?))
        })
        .collect()
}

fn read_algebra_json(src: &str) -> anyhow::Result<AlgebraJson> {
    let path = Path::new(src);
    if !path.exists() {
        return Err(Error::EntryNotFound(src.to_string()).into());
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {src}"))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{src}: {e}")).into())
}

fn load_algebra(a: &AlgebraArg) -> anyhow::Result<LieAlgebra> {
    if let Ok(entry) = Catalog::embedded().entry(&a.algebra) {
        let env = bindings(&a.params)?;
        for p in &entry.params {
            if !env.contains_key(&p.name) {
                return Err(Error::InvalidArgument(format!(
                    "{} needs --param {}=value",
                    entry.id, p.name
                ))
                .into());
            }
        }
        return Ok(entry.algebra(&env)?);
    }
    if a.algebra == "g7-chart" {
        return Ok(g7_algebra());
    }
    Ok(LieAlgebra::from_json(&read_algebra_json(&a.algebra)?)?)
}

fn load_cocycle(src: &str, n: usize) -> anyhow::Result<TwoCochain> {
    let path = Path::new(src);
    let f =
        if path.exists() {
            let text = fs::read_to_string(path).with_context(|| format!("reading {src}"))?;
            let json: CocycleJson =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{src}: {e}")))?;
            TwoCochain::from_json(&json)?
        } else {
            let mut entries = Vec::new();
            for item in src
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty() && *s != "0")
            {
                let parse = || -> Option<(usize, usize, Rational)> {
                    let (ab, v) = item.split_once('=')?;
                    let (a, b) = ab.split_once('-')?;
                    Some((
                        a.trim().parse().ok()?,
                        b.trim().parse().ok()?,
                        rational::parse(v.trim()).ok()?,
                    ))
                };
                entries.push(parse().ok_or_else(|| {
                    Error::Parse(format!("cocycle entry {item:?}; expected a-b=v"))
                })?);
            }
            TwoCochain::from_labeled(n, &entries)?
        };
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.dim(),
        }
        .into());
    }
    Ok(f)
}

fn load_pair(p: &PairArgs) -> anyhow::Result<(LieAlgebra, TwoCochain)> {
    let alg = load_algebra(&p.alg)?;
    let f = load_cocycle(&p.cocycle, alg.dim())?;
    Ok((alg, f))
}

fn load_numbers(src: &str) -> anyhow::Result<Vec<f64>> {
    let path = Path::new(src);
    if path.exists() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {src}"))?;
        return serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{src}: {e}")).into());
    }
    src.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("number {s:?} in {src:?}")).into())
        })
        .collect()
}

fn load_metric(src: Option<&str>, n: usize) -> anyhow::Result<Metric> {
    let Some(src) = src else {
        return Ok(Metric::identity(n));
    };
    let metric = if Path::new(src).exists() {
        let text = fs::read_to_string(src).with_context(|| format!("reading {src}"))?;
        Metric::from_json(
            &serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{src}: {e}")))?,
        )?
    } else {
        let v = src
            .split(',')
            .map(|s| rational::parse(s.trim()))
            .collect::<magflow::Result<Vec<_>>>()?;
        let rows: Vec<Vec<Rational>> = if v.len() == n {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                v[i].clone()
                            } else {
                                rational::int(0)
                            }
                        })
                        .collect()
                })
                .collect()
        } else if v.len() == n * n {
            v.chunks(n).map(<[Rational]>::to_vec).collect()
        } else {
            bail!(Error::InvalidArgument(format!(
                "metric needs {n} or {} entries, got {}",
                n * n,
                v.len()
            )));
        };
        Metric::new(RatMatrix::from_rows(&rows))?
    };
    if metric.dim() != n {
        bail!(Error::DimensionMismatch {
            expected: n,
            found: metric.dim(),
        });
    }
    Ok(metric)
}

fn options(flow: &FlowArgs) -> anyhow::Result<IntegrateOptions> {
    if !(flow.dt > 0.0 && flow.t_end >= 0.0 && flow.stride > 0) {
        bail!(Error::InvalidArgument(
            "need dt > 0, t ≥ 0, stride ≥ 1".into()
        ));
    }
    Ok(IntegrateOptions {
        t_end: flow.t_end,
        dt: flow.dt,
        method: match flow.method {
            MethodArg::Rk4 => Method::Rk4,
            MethodArg::Rk45 => Method::rk45(),
        },
        stride: flow.stride,
    })
}

fn audit_names(flow: &FlowArgs, default: &[&str]) -> Vec<String> {
    match &flow.audit {
        Some(s) => s
            .split(',')
            .map(|x| x.trim().to_string())
            .filter(|x| !x.is_empty())
            .collect(),
        None => default.iter().map(|s| s.to_string()).collect(),
    }
}

#[derive(Serialize)]
struct SimulationReport<'a> {
    mode: &'static str,
    target: String,
    method: &'static str,
    t_end: f64,
    dt: f64,
    max_drift: BTreeMap<String, f64>,
    passed: bool,
    #[serde(flatten)]
    trajectory: &'a Trajectory,
}

fn finish_simulation(
    cli: &Cli,
    mode: &'static str,
    target: String,
    flow: &FlowArgs,
    tr: &Trajectory,
    closed: Option<&str>,
) -> anyhow::Result<Outcome> {
    let mut passed = true;
    let mut max_drift = BTreeMap::new();
    for name in tr.audits.keys() {
        let d = tr.max_drift(name).unwrap_or(0.0);
        let tol = if Some(name.as_str()) == closed {
            flow.closed_tol
        } else {
            flow.tol
        };
        let ok = d <= tol;
        passed &= ok;
        eprintln!(
            "audit {name}: max {d:.3e} (threshold {tol:.0e}) {}",
            if ok { "ok" } else { "EXCEEDED" }
        );
        max_drift.insert(name.clone(), d);
    }
    if cli.format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let dim = tr.states.first().map_or(0, Vec::len);
        let mut header = vec!["t".to_string()];
        header.extend((0..dim).map(|i| format!("x{i}")));
        header.extend(tr.audits.keys().cloned());
        w.write_record(&header)?;
        for (k, (t, x)) in tr.times.iter().zip(&tr.states).enumerate() {
            let mut row = vec![t.to_string()];
            row.extend(x.iter().map(f64::to_string));
            row.extend(tr.audits.values().map(|v| v[k].to_string()));
            w.write_record(&row)?;
        }
        emit_bytes(cli, &w.into_inner()?)?;
    } else {
        emit_json(
            cli,
            &SimulationReport {
                mode,
                target,
                method: match flow.method {
                    MethodArg::Rk4 => "rk4",
                    MethodArg::Rk45 => "rk45",
                },
                t_end: flow.t_end,
                dt: flow.dt,
                max_drift,
                passed,
                trajectory: tr,
            },
        )?;
    }
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

/// `(α, β)` when the algebra is g7 and the cocycle is `α e12 + β (e13 + e23)`,
/// the family with known Casimirs.
fn g7_family(alg: &LieAlgebra, f: &TwoCochain) -> Option<(f64, f64)> {
    let g7 = g7_algebra();
    let same = alg.dim() == 4
        && (0..4).all(|a| (0..4).all(|b| (0..4).all(|c| alg.c(a, b, c) == g7.c(a, b, c))));
    let zero = rational::int(0);
    if !same
        || f.get(0, 2) != f.get(1, 2)
        || f.get(0, 3) != &zero
        || f.get(1, 3) != &zero
        || f.get(2, 3) != &zero
    {
        return None;
    }
    Some((rational::to_f64(f.get(0, 1)), rational::to_f64(f.get(0, 2))))
}

fn cmd_reduced(cli: &Cli, pair: &PairArgs, flow: &FlowArgs) -> anyhow::Result<Outcome> {
    let (alg, f) = load_pair(pair)?;
    let n = alg.dim();
    let ext = central_extension(&alg, &f)?;
    let metric = load_metric(flow.metric.as_deref(), n)?;
    let sys = ReducedSystem::new(&ext, &metric)?;
    let init = load_numbers(&flow.init)?;
    let x0 = if init.len() == n {
        let e = flow.charge.ok_or_else(|| {
            Error::InvalidArgument("--charge is required with n initial components".into())
        })?;
        CoadjointState::new(e, &init).f
    } else if init.len() == n + 1 {
        if let Some(e) = flow.charge {
            if init[0] != -e {
                bail!(Error::InvalidArgument(format!(
                    "central component {} differs from −charge {}",
                    init[0], -e
                )));
            }
        }
        init
    } else {
        bail!(Error::DimensionMismatch {
            expected: n,
            found: init.len(),
        });
    };
    let casimirs = g7_family(&alg, &f).map(|(a, b)| g7_casimirs(a, b));
    let mut audits = Vec::new();
    for name in audit_names(flow, &["H", "K0"]) {
        let audit = match name.as_str() {
            "H" => Audit::new("H", |x: &[f64]| sys.hamiltonian(x)),
            "K0" => Audit::new("K0", |x: &[f64]| x[0]),
            other => {
                let ks = casimirs.as_ref().ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "audit {other} needs the g7 algebra with a cocycle α e12 + β (e13 + e23)"
                    ))
                })?;
                let k = ks
                    .iter()
                    .find(|k| k.name == other)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown audit {other}")))?;
                k.value(&x0)?;
                Audit::new(other, move |x: &[f64]| k.value(x).unwrap_or(f64::NAN))
            }
        };
        audits.push(audit);
    }
    let tr = integrate(|_, x| sys.rhs(x), &x0, &options(flow)?, &audits)?;
    finish_simulation(cli, "reduced", alg.name().to_string(), flow, &tr, None)
}

fn chart_param(env: &Bindings, name: &str) -> Rational {
    env.get(name).cloned().unwrap_or_else(|| rational::int(1))
}

fn cmd_chart(
    cli: &Cli,
    chart_name: &str,
    params: &[String],
    flow: &FlowArgs,
) -> anyhow::Result<Outcome> {
    let env = bindings(params)?;
    let chart: Box<dyn GroupChart> = match chart_name {
        "torus" => Box::new(TorusChart::new(chart_param(&env, "c"))),
        "g7" | "g7-chart" => Box::new(G7Chart::new(
            chart_param(&env, "alpha"),
            chart_param(&env, "beta"),
            chart_param(&env, "gamma"),
        )?),
        other => bail!(Error::EntryNotFound(other.to_string())),
    };
    let chart = chart.as_ref();
    let n = chart.dim();
    let e = flow.charge.unwrap_or(1.0);
    let metric = load_metric(flow.metric.as_deref(), n)?;
    let x0 = load_numbers(&flow.init)?;
    if x0.len() != 2 * n {
        bail!(Error::DimensionMismatch {
            expected: 2 * n,
            found: x0.len(),
        });
    }
    chart.check_in_chart(&x0[..n])?;
    let f = chart.cocycle();
    let ints = integrals_of_motion(chart, f, e)?;
    let mut default: Vec<String> = vec!["H".into()];
    default.extend((1..=n).map(|a| format!("xi{a}")));
    let torus_identity =
        chart.name() == "torus" && flow.metric.is_none() && f == TorusChart::unit().cocycle();
    if torus_identity {
        default.push("closed".into());
    }
    let names = match &flow.audit {
        Some(_) => audit_names(flow, &[]),
        None => default,
    };
    let mut audits = Vec::new();
    let mut want_closed = false;
    for name in names {
        if name == "closed" {
            if !torus_identity {
                bail!(Error::InvalidArgument(
                    "closed-form audit is available for the unit torus with the identity metric"
                        .into()
                ));
            }
            want_closed = true;
            continue;
        }
        let audit = if name == "H" {
            Audit::new("H", |x: &[f64]| {
                hamiltonian_jet(chart, &metric, &PhaseState::from_slice(x)).value
            })
        } else if let Some(a) = name
            .strip_prefix("xi")
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|a| (1..=n).contains(a))
        {
            let ints = &ints;
            Audit::new(name.clone(), move |x: &[f64]| {
                ints.values(&PhaseState::from_slice(x))[a - 1]
            })
        } else {
            bail!(Error::InvalidArgument(format!("unknown audit {name}")));
        };
        audits.push(audit);
    }
    let rhs = |_: f64, x: &[f64]| {
        let (gd, pd) = magnetic_flow_rhs(chart, &metric, f, e, &PhaseState::from_slice(x))?;
        Ok([gd, pd].concat())
    };
    let mut tr = integrate(rhs, &x0, &options(flow)?, &audits)?;
    if want_closed {
        let init = PhaseState::from_slice(&x0);
        let dev = tr
            .times
            .iter()
            .zip(&tr.states)
            .map(|(t, x)| {
                let exact = closed_form_torus(e, &init, *t).to_vec();
                x.iter()
                    .zip(&exact)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        tr.audits.insert("closed".into(), dev);
    }
    finish_simulation(
        cli,
        "chart",
        chart.name().to_string(),
        flow,
        &tr,
        Some("closed"),
    )
}

fn cmd_catalog_verify(cli: &Cli, ids: &[String]) -> anyhow::Result<Outcome> {
    let plan = SamplingPlan {
        trials: cli.trials,
        ..SamplingPlan::with_seed(cli.seed)
    };
    let report = verify_all(ids, &plan)?;
    for e in &report.entries {
        eprintln!("{}: {} checks, {}", e.id, e.checks, status_word(e.status));
    }
    let s = &report.summary;
    eprintln!(
        "{} entries, {} claims ({} checks): {} pass, {} flagged, {} fail",
        s.entries, s.claims, s.checks, s.passed, s.flagged, s.failed
    );
    if cli.format == Format::Csv {
        emit_bytes(cli, &catalog_csv(&report)?)?;
    } else {
        emit_json(cli, &report)?;
    }
    Ok(if s.ok { Outcome::Pass } else { Outcome::Fail })
}

fn status_word(s: ClaimStatus) -> &'static str {
    match s {
        ClaimStatus::Pass => "pass",
        ClaimStatus::Flagged => "flagged",
        ClaimStatus::Fail => "FAIL",
    }
}

fn catalog_csv(report: &CatalogReport) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "entry",
        "family",
        "printed",
        "claimed_ind",
        "status",
        "condition",
        "holds",
        "corrected_condition",
        "corrected_holds",
    ])?;
    for e in &report.entries {
        for f in &e.families {
            for c in &f.claims {
                let (cc, ch) = match &c.corrected {
                    Some(r) => (
                        r.check.condition.clone().unwrap_or_default(),
                        r.check.holds.to_string(),
                    ),
                    None => (String::new(), String::new()),
                };
                w.write_record([
                    e.id.clone(),
                    f.name.clone(),
                    c.printed.clone(),
                    c.claimed_ind.to_string(),
                    status_word(c.status).to_string(),
                    c.as_printed.condition.clone().unwrap_or_default(),
                    c.as_printed.holds.to_string(),
                    cc,
                    ch,
                ])?;
            }
        }
    }
    Ok(w.into_inner()?)
}

fn emit_bytes(cli: &Cli, bytes: &[u8]) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|e| anyhow!(e))
        }
    }
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> anyhow::Result<Outcome> {
    if cli.format == Format::Csv {
        bail!(Error::InvalidArgument(
            "csv output is available for simulate and catalog only".into()
        ));
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_bytes(cli, text.as_bytes())?;
    Ok(Outcome::Pass)
}
