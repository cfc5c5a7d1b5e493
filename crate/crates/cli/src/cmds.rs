//! Implementations of the subcommands.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde_json::json;

use flagvar_core::conjugacy::{
    witness_curve, conjugate_witness, find_perturbation_pairs, first_conjugate_estimate,
    mn_decomposition, optimal_k, xi_interval, Condition5Mode,
};
use flagvar_core::geodesic::{
    curve_energy, is_equigeodesic_vector, is_geodesic_vector, max_geodesic_residual, GEODESIC_TOL,
};
use flagvar_core::ricci::{
    classify, flow_field, integrate, flow_witness_pipeline, FlowState, IntegratorConfig,
};
use flagvar_core::variation::{index_form, variation_energy};
use flagvar_core::{Error, FlagSpace, QuadratureConfig};

use crate::parse::{
    parse_metric, parse_root, parse_vector, resolve_f64, resolve_usize, ConfigMap, SpaceArgs,
};
use crate::report::{csv_num, Report};
use crate::svg;

/// Command-layer error: core failures plus file-system failures.
#[derive(Debug)]
pub enum CliError {
    /// An error surfaced from the library.
    Core(Error),
    /// A file could not be written or read.
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

/// Process exit code for an error, per the documented contract.
pub fn exit_code(err: &CliError) -> i32 {
    match err {
        CliError::Io(_) => 3,
        CliError::Core(e) => match e {
            Error::Usage(_) | Error::Config(_) | Error::Domain(_) => 2,
            Error::Search(_) | Error::Infeasible(_) => 2,
            Error::WitnessFailure { .. } | Error::Internal(_) | Error::Accuracy(_) => 1,
        },
    }
}

type CmdResult = Result<Report, CliError>;

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn record_space(report: &mut Report, flag: &FlagSpace) {
    let desc = flag.descriptor();
    report.param("space", serde_json::to_value(&desc).expect("descriptor"));
}

pub fn describe(space: &SpaceArgs, config: &ConfigMap) -> CmdResult {
    let flag = space.resolve(config)?;
    let rs = flag.algebra().root_system();
    let mut report = Report::new("describe");
    record_space(&mut report, &flag);
    report.result(
        "simple_roots",
        rs.simple().iter().map(|r| rs.label(r)).collect::<Vec<_>>(),
    );
    report.result(
        "positive_roots",
        rs.positive().iter().map(|r| rs.label(r)).collect::<Vec<_>>(),
    );
    report.result(
        "theta",
        flag.theta().iter().map(|r| rs.label(r)).collect::<Vec<_>>(),
    );
    report.result(
        "theta_span_positive",
        flag.span_positive().iter().map(|r| rs.label(r)).collect::<Vec<_>>(),
    );
    report.result(
        "complement",
        flag.complement().iter().map(|r| rs.label(r)).collect::<Vec<_>>(),
    );
    let comps: Vec<_> = flag
        .components()
        .iter()
        .map(|c| {
            json!({
                "index": c.index + 1,
                "roots": c.roots.iter().map(|r| rs.label(r)).collect::<Vec<_>>(),
                "dimension": c.dimension(),
            })
        })
        .collect();
    report.result("components", comps);
    report.result(
        "component_dimensions",
        flag.components().iter().map(|c| c.dimension()).collect::<Vec<_>>(),
    );
    report.result("tangent_dimension", flag.m_dim());
    report.result("algebra_dimension", flag.algebra().dim());
    Ok(report)
}

pub struct CheckVectorArgs {
    pub vector: String,
    pub lambda: Option<String>,
    pub tol: Option<f64>,
}

pub fn check_vector(space: &SpaceArgs, args: &CheckVectorArgs, config: &ConfigMap) -> CmdResult {
    let flag = space.resolve(config)?;
    let metric = parse_metric(&flag, args.lambda.as_deref())?;
    let tol = resolve_f64(args.tol, config, "tol", GEODESIC_TOL);
    let x = parse_vector(&flag, &args.vector)?;
    let x_full = flag.embed(&x);
    let mut report = Report::new("check-vector");
    record_space(&mut report, &flag);
    report.param("vector", args.vector.clone());
    report.param("lambda", metric.lambdas().to_vec());
    report.param("tol", tol);
    let residual = max_geodesic_residual(&flag, &metric, &x_full)?;
    report.result("geodesic", is_geodesic_vector(&flag, &metric, &x_full, tol)?);
    report.result("geodesic_residual", residual);
    report.result(
        "equigeodesic",
        is_equigeodesic_vector(&flag, &x, tol)?,
    );
    report.result("energy_unit_interval", curve_energy(&flag, &metric, &x, 1.0));
    Ok(report)
}

pub struct IndexFormArgs {
    pub alpha: String,
    pub b: Option<f64>,
    pub k: Option<f64>,
    pub lambda: Option<String>,
    pub fd_check: bool,
}

pub fn index_form_cmd(space: &SpaceArgs, args: &IndexFormArgs, config: &ConfigMap) -> CmdResult {
    let flag = space.resolve(config)?;
    let metric = parse_metric(&flag, args.lambda.as_deref())?;
    let alpha = parse_root(&flag, &args.alpha)?;
    let b = resolve_f64(args.b, config, "b", 1.0);
    let k = resolve_f64(args.k, config, "k", 1.0);
    let quad = QuadratureConfig::default();
    let pair = find_perturbation_pairs(&flag, &alpha, Condition5Mode::Symmetric)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Usage(format!("no perturbation pair for {}", args.alpha)))?;
    let q0 = witness_curve(&flag, &pair, b, k)?;
    let x = flag.a_vector(&alpha)?;

    let mut report = Report::new("index-form");
    record_space(&mut report, &flag);
    report.param("alpha", args.alpha.clone());
    report.param("b", b);
    report.param("k", k);
    report.param("lambda", metric.lambdas().to_vec());

    let (m_val, n_val) = mn_decomposition(&flag, &pair, b, k, &quad)?;
    let index = index_form(&flag, &metric, &x, &q0, b, &quad)?;
    report.result("m_normal", m_val);
    report.result("n_integral", n_val);
    report.result("index", index);
    report.result("energy", curve_energy(&flag, &metric, &x, b));
    if args.fd_check {
        let h = 1e-3;
        let ep = variation_energy(&flag, &metric, &x, &q0, b, h, &quad)?;
        let e0 = variation_energy(&flag, &metric, &x, &q0, b, 0.0, &quad)?;
        let em = variation_energy(&flag, &metric, &x, &q0, b, -h, &quad)?;
        let fd = (ep - 2.0 * e0 + em) / (h * h);
        report.result("finite_difference", fd);
        report.assert_close("fd_matches_index", fd, index, 1e-4 * index.abs().max(1.0));
    }
    Ok(report)
}

pub struct PairsArgs {
    pub alpha: String,
    pub literal5: bool,
}

pub fn pairs(space: &SpaceArgs, args: &PairsArgs, config: &ConfigMap) -> CmdResult {
    let flag = space.resolve(config)?;
    let rs = flag.algebra().root_system();
    let alpha = parse_root(&flag, &args.alpha)?;
    let mode = if args.literal5 {
        Condition5Mode::Literal
    } else {
        Condition5Mode::Symmetric
    };
    let found = find_perturbation_pairs(&flag, &alpha, mode)?;
    let mut report = Report::new("pairs");
    record_space(&mut report, &flag);
    report.param("alpha", args.alpha.clone());
    report.param("condition5", if args.literal5 { "literal" } else { "symmetric" });
    report.result("count", found.len());
    report.result(
        "pairs",
        found
            .iter()
            .map(|p| {
                json!({
                    "beta": rs.label(&p.beta),
                    "delta": rs.label(&p.delta),
                    "rate": p.rate,
                    "component": p.component + 1,
                })
            })
            .collect::<Vec<_>>(),
    );
    Ok(report)
}

pub struct WitnessArgs {
    pub alpha: String,
    pub b: Option<f64>,
    pub k: Option<f64>,
    pub xi: Option<f64>,
    pub beta: Option<String>,
}

pub fn witness(space: &SpaceArgs, args: &WitnessArgs, config: &ConfigMap) -> CmdResult {
    let flag = space.resolve(config)?;
    let rs = flag.algebra().root_system();
    let alpha = parse_root(&flag, &args.alpha)?;
    let b = resolve_f64(args.b, config, "b", 1.0);
    let k = resolve_f64(args.k, config, "k", 1.0);
    let xi = args.xi.or_else(|| config.get_f64("xi"));
    let quad = QuadratureConfig::default();
    let mut candidates = find_perturbation_pairs(&flag, &alpha, Condition5Mode::Symmetric)?;
    if let Some(beta) = &args.beta {
        let beta = parse_root(&flag, beta)?;
        candidates.retain(|p| p.beta == beta || p.delta == beta);
    }
    let pair = candidates
        .into_iter()
        .next()
        .ok_or_else(|| Error::Usage(format!("no perturbation pair for {}", args.alpha)))?;

    let mut report = Report::new("witness");
    record_space(&mut report, &flag);
    report.param("alpha", args.alpha.clone());
    report.param("b", b);
    report.param("k", k);
    report.result("beta", rs.label(&pair.beta));
    report.result("delta", rs.label(&pair.delta));
    report.result("rate", pair.rate);
    match conjugate_witness(&flag, &pair, b, k, xi, &quad) {
        Ok(w) => {
            report.param("xi", w.xi);
            report.result_json("witness", &w);
            report.result("m_value", w.m_value);
            report.result("n_value", w.n_value);
            report.result("xi_interval", vec![w.xi_interval.0, w.xi_interval.1]);
            report.result("index", w.index_value);
            report.assert_true("index_negative", w.index_value < 0.0, w.index_value, 0.0);
            report.assert_close(
                "index_matches_comparison_formula",
                w.index_value,
                w.m_value + 4.0 * w.xi * w.n_value,
                1e-8 * w.index_value.abs().max(1.0),
            );
        }
        Err(Error::WitnessFailure { value }) => {
            report.param("xi", xi.map(|x| x.to_string()).unwrap_or_default());
            report.result("index", value);
            report.assert_true("index_negative", false, value, 0.0);
        }
        Err(other) => return Err(other.into()),
    }
    Ok(report)
}

pub struct ConjtimeArgs {
    pub x: String,
    pub lambda: Option<String>,
    pub b_lo: Option<f64>,
    pub b_hi: Option<f64>,
    pub mesh: Option<usize>,
    pub expect: Option<f64>,
    pub tol_rel: Option<f64>,
}

pub fn conjtime(space: &SpaceArgs, args: &ConjtimeArgs, config: &ConfigMap) -> CmdResult {
    let flag = space.resolve(config)?;
    let metric = parse_metric(&flag, args.lambda.as_deref())?;
    let x = parse_vector(&flag, &args.x)?;
    let b_lo = resolve_f64(args.b_lo, config, "b-lo", 3.2);
    let b_hi = resolve_f64(args.b_hi, config, "b-hi", 4.4);
    let mesh = resolve_usize(args.mesh, config, "mesh", 24);
    let mut report = Report::new("conjtime");
    record_space(&mut report, &flag);
    report.param("x", args.x.clone());
    report.param("lambda", metric.lambdas().to_vec());
    report.param("bracket", vec![b_lo, b_hi]);
    report.param("mesh", mesh);
    let estimate = first_conjugate_estimate(&flag, &metric, &x, (b_lo, b_hi), mesh, None)?;
    report.result("estimate", estimate);
    if let Some(expect) = args.expect {
        let tol_rel = args.tol_rel.unwrap_or(0.02);
        report.param("expect", expect);
        report.assert_close("estimate_matches_expected", estimate, expect, tol_rel * expect);
    }
    Ok(report)
}

pub struct RicciFlowArgs {
    pub n: Option<usize>,
    pub x0: Option<f64>,
    pub y0: Option<f64>,
    pub t_end: Option<f64>,
    pub csv: Option<PathBuf>,
}

pub fn ricci_flow(args: &RicciFlowArgs, config: &ConfigMap) -> CmdResult {
    let n = resolve_usize(args.n, config, "n", 1);
    let x0 = resolve_f64(args.x0, config, "x0", 1.0);
    let y0 = resolve_f64(args.y0, config, "y0", 1.0);
    let t_end = resolve_f64(args.t_end, config, "t-end", 10.0);
    let start = FlowState::new(x0, y0)?;
    let cfg = IntegratorConfig::default();
    let traj = integrate(n, start, t_end, &cfg)?;
    let mut report = Report::new("ricci-flow");
    report.param("n", n);
    report.param("start", vec![x0, y0]);
    report.param("t_end", t_end);
    report.result("samples", traj.samples.len());
    report.result("halt", format!("{:?}", traj.halt));
    let (t_last, last) = *traj.samples.last().expect("at least the initial sample");
    report.result("final_t", t_last);
    report.result("final_state", vec![last.x, last.y]);
    report.result("final_ratio", last.ratio());
    report.result("final_region", classify(n, &last)?.to_string());
    if let Some(path) = &args.csv {
        let mut body = String::from("t,x,y,region\n");
        for (t, s) in &traj.samples {
            body.push_str(&format!(
                "{},{},{},{}\n",
                csv_num(*t),
                csv_num(s.x),
                csv_num(s.y),
                classify(n, s)?
            ));
        }
        write_file(path, &body)?;
        report.result("csv", path.display().to_string());
    }
    Ok(report)
}

pub struct PhasePortraitArgs {
    pub n: Option<usize>,
    pub grid: Option<String>,
    pub xmax: Option<f64>,
    pub ymax: Option<f64>,
    pub traj: Option<String>,
    pub t_span: Option<f64>,
    pub csv: PathBuf,
    pub traj_csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub fn phase_portrait(args: &PhasePortraitArgs, config: &ConfigMap) -> CmdResult {
    let n = resolve_usize(args.n, config, "n", 1);
    let grid_spec = args
        .grid
        .clone()
        .or_else(|| config.get_str("grid").map(str::to_string))
        .unwrap_or_else(|| "20x20".to_string());
    let (nx, ny) = parse_grid(&grid_spec)?;
    let xmax = resolve_f64(args.xmax, config, "xmax", 2.0);
    let ymax = resolve_f64(args.ymax, config, "ymax", 2.0);
    // Written so NaN bounds are rejected as well.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(xmax > 0.0) || !(ymax > 0.0) {
        return Err(Error::Usage("grid bounds must be positive".into()).into());
    }

    let mut field_rows = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let x = xmax * (i as f64 + 0.5) / nx as f64;
            let y = ymax * (j as f64 + 0.5) / ny as f64;
            let (dx, dy) = flow_field(n, x, y)?;
            field_rows.push((x, y, dx, dy));
        }
    }
    let mut body = String::from("x,y,dx,dy,region\n");
    for &(x, y, dx, dy) in &field_rows {
        body.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_num(x),
            csv_num(y),
            csv_num(dx),
            csv_num(dy),
            classify(n, &FlowState { x, y })?
        ));
    }
    write_file(&args.csv, &body)?;

    let mut report = Report::new("phase-portrait");
    report.param("n", n);
    report.param("grid", grid_spec);
    report.param("bounds", vec![xmax, ymax]);
    report.result("field_rows", field_rows.len());
    report.result("csv", args.csv.display().to_string());

    let mut trajectories = Vec::new();
    if let Some(spec) = &args.traj {
        let t_span = resolve_f64(args.t_span, config, "t-span", 10.0);
        let cfg = IntegratorConfig::default();
        for start_spec in spec.split(';') {
            let parts: Vec<&str> = start_spec.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Usage(format!("bad trajectory start `{start_spec}`")).into());
            }
            let x0: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("bad trajectory start `{start_spec}`")))?;
            let y0: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("bad trajectory start `{start_spec}`")))?;
            let traj = integrate(n, FlowState::new(x0, y0)?, t_span, &cfg)?;
            trajectories.push(traj.samples);
        }
        if let Some(path) = &args.traj_csv {
            let mut body = String::from("traj,t,x,y,region\n");
            for (idx, samples) in trajectories.iter().enumerate() {
                for (t, s) in samples {
                    body.push_str(&format!(
                        "{},{},{},{},{}\n",
                        idx,
                        csv_num(*t),
                        csv_num(s.x),
                        csv_num(s.y),
                        classify(n, s)?
                    ));
                }
            }
            write_file(path, &body)?;
            report.result("trajectory_csv", path.display().to_string());
        }
        report.result("trajectories", trajectories.len());
    }

    if let Some(path) = &args.svg {
        let rendered = svg::phase_portrait(
            n,
            svg::Bounds { xmax, ymax },
            &field_rows,
            &trajectories,
        );
        write_file(path, &rendered)?;
        report.result("svg", path.display().to_string());
    }
    let (steep, shallow) = flagvar_core::ricci::invariant_lines(n);
    report.result("invariant_slopes", vec![steep, shallow]);
    Ok(report)
}

fn parse_grid(spec: &str) -> Result<(usize, usize), Error> {
    let (a, b) = spec
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Usage(format!("bad grid `{spec}`, expected ROWSxCOLS")))?;
    let nx = a
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("bad grid `{spec}`")))?;
    let ny = b
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("bad grid `{spec}`")))?;
    if nx == 0 || ny == 0 {
        return Err(Error::Usage("grid must be nonempty".into()));
    }
    Ok((nx, ny))
}

pub struct ReproduceArgs {
    pub name: String,
    pub n: Option<usize>,
    pub b: Option<f64>,
    pub k: Option<f64>,
    pub xi: Option<f64>,
    pub mesh: Option<usize>,
}

pub fn reproduce(args: &ReproduceArgs, config: &ConfigMap) -> CmdResult {
    let quad = QuadratureConfig::default();
    match args.name.as_str() {
        "thm4.4" => {
            let n = resolve_usize(args.n, config, "n", 1);
            let m_rate = 1.0 / ((2 * n + 4) as f64).sqrt();
            let conj = PI / (2.0 * m_rate);
            let b = resolve_f64(args.b, config, "b", 0.9 * conj);
            let k = resolve_f64(args.k, config, "k", 1.0);
            let flag = FlagSpace::projective_space(n)?;
            let alpha = flag.algebra().root_system().parse_label("a11")?;
            let pair = find_perturbation_pairs(&flag, &alpha, Condition5Mode::Symmetric)?
                .into_iter()
                .next()
                .ok_or_else(|| Error::Internal("missing projective pair".into()))?;
            let mut report = Report::new("reproduce");
            report.param("name", "thm4.4");
            report.param("n", n);
            report.param("b", b);
            report.param("k", k);
            report.result("m_rate", m_rate);
            report.result("first_conjugate_time_normal", conj);
            report.assert_true("b_below_first_conjugate_time", b < conj, b, conj);
            match conjugate_witness(&flag, &pair, b, k, args.xi, &quad) {
                Ok(w) => {
                    report.param("xi", w.xi);
                    report.result_json("witness", &w);
                    report.result("m_value", w.m_value);
                    report.result("n_value", w.n_value);
                    report.result("xi_interval", vec![w.xi_interval.0, w.xi_interval.1]);
                    report.result("index", w.index_value);
                    let n_closed =
                        (b.powi(4) + 6.0 * PI * PI * k.powi(4)) / (3.0 * k * k * b);
                    report.assert_close(
                        "n_matches_closed_form",
                        w.n_value,
                        n_closed,
                        1e-8 * n_closed,
                    );
                    let gap = -8.0 * m_rate * b * b / PI;
                    report.assert_close(
                        "m_minus_4n_matches_closed_form",
                        w.m_value - 4.0 * w.n_value,
                        gap,
                        1e-8 * gap.abs(),
                    );
                    report.assert_true(
                        "index_negative",
                        w.index_value < 0.0,
                        w.index_value,
                        0.0,
                    );
                }
                Err(Error::WitnessFailure { value }) => {
                    report.result("index", value);
                    report.assert_true("index_negative", false, value, 0.0);
                }
                Err(other) => return Err(other.into()),
            }
            Ok(report)
        }
        "lemma4.7" => {
            let n = resolve_usize(args.n, config, "n", 10);
            let nf = n as f64;
            let m_rate = 1.0 / (2.0 * nf + 4.0).sqrt();
            let b_lo = 8.0 * 6.0_f64.sqrt() * PI * PI / (3.0 * m_rate * (4.0 * nf + 3.0));
            let b_hi = PI / (2.0 * m_rate);
            let b = resolve_f64(args.b, config, "b", 7.5);
            let (k_star, max_ratio) = optimal_k(b, m_rate)?;
            let threshold = 8.0 / (4.0 * nf + 3.0);
            let mut report = Report::new("reproduce");
            report.param("name", "lemma4.7");
            report.param("n", n);
            report.param("b", b);
            report.result("m_rate", m_rate);
            report.result("k_star", k_star);
            report.result("max_deficiency_ratio", max_ratio);
            report.result("admissible_b_interval", vec![b_lo, b_hi]);
            report.result("flow_threshold", threshold);
            report.assert_true(
                "b_inside_admissible_interval",
                b > b_lo && b < b_hi,
                b,
                0.0,
            );
            report.assert_true(
                "deficiency_exceeds_flow_threshold",
                max_ratio > threshold,
                max_ratio,
                threshold,
            );
            Ok(report)
        }
        "thm4.10" => {
            let n = resolve_usize(args.n, config, "n", 10);
            let b = resolve_f64(args.b, config, "b", 7.5);
            let mut report = Report::new("reproduce");
            report.param("name", "thm4.10");
            report.param("n", n);
            report.param("b", b);
            match flow_witness_pipeline(n, b, &quad) {
                Ok(p) => {
                    report.result_json("pipeline", &p);
                    report.result("t0", p.t0);
                    report.result("r0", p.r0);
                    report.result("zeta", p.zeta);
                    report.result("index_scaled", p.index_scaled);
                    report.result("index_direct", p.index_direct);
                    report.assert_true(
                        "zeta_interval_nonempty",
                        p.zeta_interval.0 < p.zeta_interval.1,
                        p.zeta_interval.1 - p.zeta_interval.0,
                        0.0,
                    );
                    report.assert_true("crossing_scale_positive", p.r0 > 0.0, p.r0, 0.0);
                    report.assert_close(
                        "scaled_matches_direct",
                        p.index_scaled,
                        p.index_direct,
                        1e-8 * p.index_direct.abs().max(1.0),
                    );
                    report.assert_true(
                        "index_negative",
                        p.index_direct < 0.0,
                        p.index_direct,
                        0.0,
                    );
                }
                Err(Error::WitnessFailure { value }) => {
                    report.result("index_direct", value);
                    report.assert_true("index_negative", false, value, 0.0);
                }
                Err(other) => return Err(other.into()),
            }
            Ok(report)
        }
        "example5.4" => {
            let b = resolve_f64(args.b, config, "b", 1.0);
            let k = resolve_f64(args.k, config, "k", 1.0);
            let flag = FlagSpace::su3_maximal()?;
            let alpha = flag.algebra().root_system().parse_label("a13")?;
            let pair = find_perturbation_pairs(&flag, &alpha, Condition5Mode::Symmetric)?
                .into_iter()
                .next()
                .ok_or_else(|| Error::Internal("missing maximal-flag pair".into()))?;
            let (m_val, n_val) = mn_decomposition(&flag, &pair, b, k, &quad)?;
            let interval = xi_interval(m_val, n_val)?;
            let s6 = 6.0_f64.sqrt();
            let closed = (s6 * b.powi(3) * k * k - PI * b.powi(4) - 6.0 * k.powi(4) * PI.powi(3))
                / (PI * (b.powi(4) + 6.0 * k.powi(4) * PI * PI));
            let mut report = Report::new("reproduce");
            report.param("name", "example5.4");
            report.param("b", b);
            report.param("k", k);
            report.result("m_value", m_val);
            report.result("n_value", n_val);
            report.result("xi_upper_bound", interval.1);
            report.result("xi_upper_bound_closed_form", closed);
            report.assert_close("xi_bound_matches_closed_form", interval.1, closed, 1e-10);
            match conjugate_witness(&flag, &pair, b, k, args.xi, &quad) {
                Ok(w) => {
                    report.param("xi", w.xi);
                    report.result("index", w.index_value);
                    report.result_json("witness", &w);
                    report.assert_true(
                        "index_negative",
                        w.index_value < 0.0,
                        w.index_value,
                        0.0,
                    );
                }
                Err(Error::WitnessFailure { value }) => {
                    report.result("index", value);
                    report.assert_true("index_negative", false, value, 0.0);
                }
                Err(other) => return Err(other.into()),
            }
            Ok(report)
        }
        "conjtime-cp3" | "conjtime-su3" => {
            let mesh = resolve_usize(args.mesh, config, "mesh", 24);
            let (flag, label) = if args.name == "conjtime-cp3" {
                (FlagSpace::projective_space(1)?, "a11")
            } else {
                (FlagSpace::su3_maximal()?, "a13")
            };
            let root = flag.algebra().root_system().parse_label(label)?;
            let x = flag.a_vector(&root)?;
            let target = PI * 6.0_f64.sqrt() / 2.0;
            let estimate = first_conjugate_estimate(
                &flag,
                &flag.normal_metric(),
                &x,
                (3.2, 4.4),
                mesh,
                None,
            )?;
            let mut report = Report::new("reproduce");
            report.param("name", args.name.clone());
            report.param("mesh", mesh);
            report.param("vector", label);
            report.result("estimate", estimate);
            report.result("target", target);
            report.assert_close("estimate_within_2pct", estimate, target, 0.02 * target);
            Ok(report)
        }
        other => Err(Error::Usage(format!(
            "unknown reproduction `{other}` (expected thm4.4, lemma4.7, thm4.10, example5.4, \
             conjtime-cp3, conjtime-su3)"
        ))
        .into()),
    }
}
