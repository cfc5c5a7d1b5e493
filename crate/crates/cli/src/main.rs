//! `flagvar` — flag-manifold variational analysis from the command line.
//!
//! Every run prints one JSON report (see `report.rs` for the schema). Exit
//! codes: 0 success, 1 assertion failure, 2 usage error, 3 i/o error.

mod cmds;
mod parse;
mod report;
mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};


use parse::{ConfigMap, SpaceArgs};

#[derive(Parser)]
#[command(
    name = "flagvar",
    version,
    about = "Variational analysis of homogeneous geodesics on generalized flag manifolds"
)]
struct Cli {
    /// Plain `key = value` file supplying parameter defaults; explicit flags
    /// take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print roots, Θ, and the isotropy components of a space.
    Describe {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Run the geodesic and equigeodesic criteria on a tangent vector.
    CheckVector {
        #[command(flatten)]
        space: SpaceArgs,
        /// Vector expression, e.g. "A11" or "A12 0.5*S12".
        #[arg(long)]
        vector: String,
        /// Comma-separated metric weights per component (default: all ones).
        #[arg(long)]
        lambda: Option<String>,
        /// Residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Index form of the canonical witness attached to a root.
    IndexForm {
        #[command(flatten)]
        space: SpaceArgs,
        /// Root whose witness to evaluate, e.g. "a11".
        #[arg(long)]
        alpha: String,
        /// Interval endpoint.
        #[arg(long)]
        b: Option<f64>,
        /// Witness amplitude.
        #[arg(long)]
        k: Option<f64>,
        /// Metric weights (default: normal metric).
        #[arg(long)]
        lambda: Option<String>,
        /// Cross-check against the second difference of the variation energy.
        #[arg(long)]
        fd_check: bool,
    },
    /// List perturbation pairs of a root.
    Pairs {
        #[command(flatten)]
        space: SpaceArgs,
        /// Target root, e.g. "a13".
        #[arg(long)]
        alpha: String,
        /// Evaluate the difference condition literally on β − δ ∈ Π⁺∖⟨Θ⟩
        /// (enumeration-ordered) instead of symmetrically.
        #[arg(long)]
        literal5: bool,
    },
    /// Build a conjugate-point witness for a root.
    Witness {
        #[command(flatten)]
        space: SpaceArgs,
        /// Target root, e.g. "a13".
        #[arg(long)]
        alpha: String,
        /// Interval endpoint.
        #[arg(long)]
        b: Option<f64>,
        /// Witness amplitude.
        #[arg(long)]
        k: Option<f64>,
        /// Perturbation size (default: interval midpoint).
        #[arg(long, allow_negative_numbers = true)]
        xi: Option<f64>,
        /// Select the pair containing this root.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Estimate the first conjugate time by Gram-eigenvalue bisection.
    Conjtime {
        #[command(flatten)]
        space: SpaceArgs,
        /// Geodesic vector expression, e.g. "A11".
        #[arg(long)]
        x: String,
        /// Metric weights (default: normal metric).
        #[arg(long)]
        lambda: Option<String>,
        /// Lower bracket endpoint.
        #[arg(long)]
        b_lo: Option<f64>,
        /// Upper bracket endpoint.
        #[arg(long)]
        b_hi: Option<f64>,
        /// Interior mesh size of the hat discretization.
        #[arg(long)]
        mesh: Option<usize>,
        /// Expected value to assert against.
        #[arg(long)]
        expect: Option<f64>,
        /// Relative tolerance for --expect (default 0.02).
        #[arg(long)]
        tol_rel: Option<f64>,
    },
    /// Integrate the two-summand flow and export the trajectory.
    RicciFlow {
        /// Summand label n of ℂP^{2n+1}.
        #[arg(long)]
        n: Option<usize>,
        /// Initial λ₁.
        #[arg(long)]
        x0: Option<f64>,
        /// Initial λ₂.
        #[arg(long)]
        y0: Option<f64>,
        /// Signed integration span (negative runs backwards).
        #[arg(long, allow_negative_numbers = true)]
        t_end: Option<f64>,
        /// Write the trajectory as CSV (t, x, y, region).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sample the flow field on a grid; optional trajectories and SVG.
    PhasePortrait {
        /// Summand label n of ℂP^{2n+1}.
        #[arg(long)]
        n: Option<usize>,
        /// Grid size as ROWSxCOLS (default 20x20).
        #[arg(long)]
        grid: Option<String>,
        /// Largest λ₁ of the sampling window.
        #[arg(long)]
        xmax: Option<f64>,
        /// Largest λ₂ of the sampling window.
        #[arg(long)]
        ymax: Option<f64>,
        /// Trajectory starts "x,y;x,y;...".
        #[arg(long)]
        traj: Option<String>,
        /// Trajectory span (signed).
        #[arg(long, allow_negative_numbers = true)]
        t_span: Option<f64>,
        /// Field CSV output path (required).
        #[arg(long)]
        csv: PathBuf,
        /// Trajectory CSV output path.
        #[arg(long)]
        traj_csv: Option<PathBuf>,
        /// SVG output path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Re-run a named construction with its reference parameters.
    ///
    /// Names: thm4.4, lemma4.7, thm4.10, example5.4, conjtime-cp3,
    /// conjtime-su3.
    Reproduce {
        /// Which construction to reproduce.
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xi: Option<f64>,
        #[arg(long)]
        mesh: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let config = match &cli.config {
        Some(path) => match ConfigMap::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        None => ConfigMap::default(),
    };
    let outcome = match &cli.command {
        Command::Describe { space } => cmds::describe(space, &config),
        Command::CheckVector {
            space,
            vector,
            lambda,
            tol,
        } => cmds::check_vector(
            space,
            &cmds::CheckVectorArgs {
                vector: vector.clone(),
                lambda: lambda.clone(),
                tol: *tol,
            },
            &config,
        ),
        Command::IndexForm {
            space,
            alpha,
            b,
            k,
            lambda,
            fd_check,
        } => cmds::index_form_cmd(
            space,
            &cmds::IndexFormArgs {
                alpha: alpha.clone(),
                b: *b,
                k: *k,
                lambda: lambda.clone(),
                fd_check: *fd_check,
            },
            &config,
        ),
        Command::Pairs {
            space,
            alpha,
            literal5,
        } => cmds::pairs(
            space,
            &cmds::PairsArgs {
                alpha: alpha.clone(),
                literal5: *literal5,
            },
            &config,
        ),
        Command::Witness {
            space,
            alpha,
            b,
            k,
            xi,
            beta,
        } => cmds::witness(
            space,
            &cmds::WitnessArgs {
                alpha: alpha.clone(),
                b: *b,
                k: *k,
                xi: *xi,
                beta: beta.clone(),
            },
            &config,
        ),
        Command::Conjtime {
            space,
            x,
            lambda,
            b_lo,
            b_hi,
            mesh,
            expect,
            tol_rel,
        } => cmds::conjtime(
            space,
            &cmds::ConjtimeArgs {
                x: x.clone(),
                lambda: lambda.clone(),
                b_lo: *b_lo,
                b_hi: *b_hi,
                mesh: *mesh,
                expect: *expect,
                tol_rel: *tol_rel,
            },
            &config,
        ),
        Command::RicciFlow {
            n,
            x0,
            y0,
            t_end,
            csv,
        } => cmds::ricci_flow(
            &cmds::RicciFlowArgs {
                n: *n,
                x0: *x0,
                y0: *y0,
                t_end: *t_end,
                csv: csv.clone(),
            },
            &config,
        ),
        Command::PhasePortrait {
            n,
            grid,
            xmax,
            ymax,
            traj,
            t_span,
            csv,
            traj_csv,
            svg,
        } => cmds::phase_portrait(
            &cmds::PhasePortraitArgs {
                n: *n,
                grid: grid.clone(),
                xmax: *xmax,
                ymax: *ymax,
                traj: traj.clone(),
                t_span: *t_span,
                csv: csv.clone(),
                traj_csv: traj_csv.clone(),
                svg: svg.clone(),
            },
            &config,
        ),
        Command::Reproduce {
            name,
            n,
            b,
            k,
            xi,
            mesh,
        } => cmds::reproduce(
            &cmds::ReproduceArgs {
                name: name.clone(),
                n: *n,
                b: *b,
                k: *k,
                xi: *xi,
                mesh: *mesh,
            },
            &config,
        ),
    };
    match outcome {
        Ok(report) => {
            if let Err(e) = report.emit(cli.out.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return 3;
            }
            if report.all_pass() {
                0
            } else {
                1
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            cmds::exit_code(&err)
        }
    }
}
