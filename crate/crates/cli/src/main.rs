//! `thermops`: command-line front end to the thermal-operations toolbox.
//!
//! Results are printed to standard output as JSON. Curves and boundaries can
//! additionally be written as `x,y` CSV with `--out`. Exit status is 0 on
//! success, 1 when the library answers a well-posed question negatively and
//! 2 on malformed input.

mod io;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use thermops::coherence::{self, Direction};
use thermops::*;

use io::{num, nums, points_csv, points_json, Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "thermops", version, about = "Thermal-operations toolbox")]
struct Cli {
    /// Inverse temperature; overrides the value in the context file.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Comparison tolerance for order tests.
    #[arg(long, global = true, value_parser = positive)]
    tol: Option<f64>,
    /// Comma-separated Rényi orders (`inf` and `-inf` allowed).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    alpha_grid: Option<Vec<f64>>,
    /// Output format for curve-like results on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for commands that draw random instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

#[derive(Args, Debug)]
struct Ctx {
    /// Context file `{ "energies": [...], "beta": r }`.
    #[arg(long)]
    ctx: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Thermo-majorisation and second-laws verdict for `x → y`.
    Check {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Also decide with the linear-programming oracle.
        #[arg(long)]
        lp: bool,
    },
    /// Thermo-majorisation (or Lorenz) curve of a state.
    Curve {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        x: PathBuf,
        /// Plain majorisation curve instead of the thermal one.
        #[arg(long)]
        lorenz: bool,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gibbs-stochastic matrix mapping `x` to `y`.
    Construct {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Largest common denominator for the rational Gibbs approximation.
        #[arg(long, default_value_t = 1 << 16)]
        d_max: u64,
    },
    /// α-free energies on the grid, Burg free energy and, with `--y`, the verdict.
    FreeEnergies {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: Option<PathBuf>,
    },
    /// Deterministic work extraction (`det`) or work of formation (`for`).
    Work {
        #[arg(value_enum)]
        kind: WorkKind,
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        x: PathBuf,
        /// Cross-check with the geometric bisection oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Coherence modes of a state.
    Modes {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        rho: PathBuf,
    },
    /// Asymmetry monotones of a state.
    Asymmetry {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        rho: PathBuf,
        /// Time step of the fidelity finite difference.
        #[arg(long, default_value_t = 1e-2, value_parser = positive)]
        qfi_step: f64,
    },
    /// Free energy split into classical and coherent parts.
    Split {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        rho: PathBuf,
    },
    /// Boundary of the qubit states reachable from `(p, c)`.
    QubitRegion {
        #[command(flatten)]
        ctx: Ctx,
        /// Ground-state population.
        #[arg(long)]
        p: f64,
        /// Modulus of the coherence.
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherence bound for a covariant channel with classical action `P`.
    CpBound {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        rho: PathBuf,
        /// Matrix file `{ "matrix": [[P_{i|j}]] }`.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Integer bath model realising a Gibbs-stochastic matrix.
    SimulateBath {
        #[command(flatten)]
        ctx: Ctx,
        /// Target matrix; a random Gibbs-stochastic one (from `--seed`) if omitted.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Degeneracy of the most excited level's bath block.
        #[arg(long, default_value_t = 1000)]
        g_e: u64,
    },
    /// Coherence transport on a three-level ladder through a bosonic bath.
    Ladder {
        /// Context with an equispaced three-level spectrum.
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, value_enum)]
        direction: Dir,
        #[arg(long, default_value_t = 40)]
        n_trunc: usize,
        /// Input state; only the transport factor is reported if omitted.
        #[arg(long)]
        rho: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum WorkKind {
    Det,
    For,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Dir {
    Up,
    Down,
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(doc) => emit(&doc),
        Err(failure) => {
            emit(&failure.to_json());
            eprintln!("thermops: {failure}");
            std::process::exit(failure.exit_code());
        }
    }
}

/// Prints a document; a closed pipe on the reading side is not an error.
fn emit(doc: &Value) {
    let text = serde_json::to_string_pretty(doc).expect("documents serialise");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn grid(cli: &Cli) -> Vec<f64> {
    cli.alpha_grid.clone().unwrap_or_else(default_alpha_grid)
}

fn eps(cli: &Cli) -> f64 {
    cli.tol.unwrap_or(tol::ORDER_EPS)
}

fn verdict_json(v: &SecondLawsVerdict) -> Value {
    let violations: Vec<Value> = v
        .violations
        .iter()
        .map(|viol| match viol.law {
            Law::Alpha(a) => doc! { "law" => "alpha", "alpha" => num(a), "delta" => num(viol.delta) },
            Law::Burg => doc! { "law" => "burg", "delta" => num(viol.delta) },
        })
        .collect();
    doc! {
        "passed" => v.passed,
        "strictly_passed" => v.strictly_passed(),
        "strict" => v.strict,
        "ties" => v.ties,
        "alpha_grid" => nums(&v.alpha_grid),
        "violations" => violations,
    }
}

fn emit_curve(cli: &Cli, points: &[(f64, f64)], out: &Option<PathBuf>, mut doc: Value) -> Outcome<Value> {
    if let Some(path) = out {
        io::write_file(path, &points_csv(points))?;
        doc["csv"] = Value::String(path.display().to_string());
    }
    if cli.format == Format::Csv {
        let _ = write!(std::io::stdout().lock(), "{}", points_csv(points));
        std::process::exit(0);
    }
    Ok(doc)
}

fn run(cli: &Cli) -> Outcome<Value> {
    let beta = cli.beta;
    if cli.format == Format::Csv && !matches!(cli.command, Command::Curve { .. } | Command::QubitRegion { .. }) {
        return Err(Failure::Input("--format csv applies to `curve` and `qubit-region` only".into()));
    }
    match &cli.command {
        Command::Check { ctx, x, y, lp } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let (x, y) = (io::load_populations(x)?, io::load_populations(y)?);
            let e = eps(cli);
            let forward = thermo_majorizes_with(&x, &y, &ctx, e)?;
            let reverse = thermo_majorizes_with(&y, &x, &ctx, e)?;
            let curve_x = thermo_curve(&x, &ctx)?;
            let curve_y = thermo_curve(&y, &ctx)?;
            let mut doc = doc! {
                "thermo_majorizes" => forward,
                "reverse" => reverse,
                "min_gap" => num(curve_x.min_gap(&curve_y)),
                "alpha_laws" => if ctx.beta() > 0.0 {
                    verdict_json(&second_laws_check_with(&x, &y, &ctx, &grid(cli), e)?)
                } else {
                    Value::Null
                },
            };
            if *lp {
                doc["lp_feasible"] = Value::Bool(feasibility_lp_oracle(&x, &y, ctx.gibbs()));
            }
            Ok(doc)
        }
        Command::Curve { ctx, x, lorenz, out } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let x = io::load_populations(x)?;
            let curve = if *lorenz { lorenz_curve(&x) } else { thermo_curve(&x, &ctx)? }.elbows(1e-12);
            let order = beta_order(&x, &ctx)?.perm;
            let doc = doc! {
                "kind" => if *lorenz { "lorenz" } else { "thermo" },
                "beta_order" => order,
                "points" => points_json(curve.points()),
            };
            emit_curve(cli, curve.points(), out, doc)
        }
        Command::Construct { ctx, x, y, d_max } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let (x, y) = (io::load_populations(x)?, io::load_populations(y)?);
            let g = construct_gibbs_stochastic(&x, &y, &ctx, *d_max)?;
            let image = g.apply(&x)?;
            Ok(doc! {
                "matrix" => io::stochastic_json(&g),
                "image" => nums(image.as_slice()),
                "map_error" => num(image.max_abs_diff(&y)),
                "fixed_point_residual" => num(g.fixed_point_residual(ctx.gibbs().as_slice())?),
            })
        }
        Command::FreeEnergies { ctx, x, y } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let xs = io::load_populations(x)?;
            let alphas = grid(cli);
            let table = |p: &ProbVec| -> Outcome<Value> {
                let rows: Outcome<Vec<Value>> = alphas
                    .iter()
                    .map(|&a| Ok(doc! { "alpha" => num(a), "f" => num(free_energy_alpha(p, &ctx, a)?) }))
                    .collect();
                Ok(doc! {
                    "alpha" => rows?,
                    "burg" => num(burg_free_energy(p, &ctx)?),
                })
            };
            let mut doc = doc! {
                "equilibrium" => num(equilibrium_free_energy(&ctx)?),
                "x" => table(&xs)?,
            };
            if let Some(y) = y {
                let ys = io::load_populations(y)?;
                doc["y"] = table(&ys)?;
                doc["verdict"] = verdict_json(&second_laws_check_with(&xs, &ys, &ctx, &alphas, eps(cli))?);
            }
            Ok(doc)
        }
        Command::Work { kind, ctx, x, oracle } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let x = io::load_populations(x)?;
            let (name, value) = match kind {
                WorkKind::Det => ("w_det", w_det(&x, &ctx)?),
                WorkKind::For => ("w_for", w_for(&x, &ctx)?),
            };
            let mut doc = doc! {
                name => num(value),
                "average_work_reference" => num(average_work_reference(&x, &ctx)?),
            };
            if *oracle {
                let check = match kind {
                    WorkKind::Det => w_det_geometric_oracle(&x, &ctx)?,
                    WorkKind::For => w_for_geometric_oracle(&x, &ctx)?,
                };
                doc["oracle"] = num(check);
                doc["oracle_gap"] = num((check - value).abs());
            }
            Ok(doc)
        }
        Command::Modes { ctx, rho } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let rho = io::load_density(rho)?;
            let modes = coherence::mode_decompose(&rho, ctx.spectrum())?;
            let entries: Vec<Value> = modes
                .iter()
                .map(|(w, m)| {
                    let n = m.nrows();
                    doc! {
                        "omega" => num(w),
                        "norm" => num(m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()),
                        "re" => io::matrix_rows(n, n, |a, b| m[(a, b)].re),
                        "im" => io::matrix_rows(n, n, |a, b| m[(a, b)].im),
                    }
                })
                .collect();
            Ok(doc! {
                "frequencies" => nums(&modes.frequencies),
                "nonzero" => nums(&modes.nonzero(1e-12)),
                "modes" => entries,
            })
        }
        Command::Asymmetry { ctx, rho, qfi_step } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let rho = io::load_density(rho)?;
            let spec = ctx.spectrum();
            let renyi: Outcome<Vec<Value>> = grid(cli)
                .into_iter()
                .filter(|a| *a > 0.0 && a.is_finite())
                .map(|a| Ok(doc! { "alpha" => num(a), "value" => num(coherence::asymmetry_alpha(&rho, spec, a)?) }))
                .collect();
            Ok(doc! {
                "asymmetry" => num(coherence::asymmetry(&rho, spec)?),
                "renyi" => renyi?,
                "qfi" => num(coherence::qfi(&rho, spec, *qfi_step)?),
            })
        }
        Command::Split { ctx, rho } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let rho = io::load_density(rho)?;
            let s = coherence::free_energy_split(&rho, &ctx)?;
            Ok(doc! {
                "total" => num(s.total),
                "classical" => num(s.classical),
                "coherent" => num(s.coherent),
            })
        }
        Command::QubitRegion { ctx, p, c, samples, out } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let pts = coherence::qubit_reachable_boundary(*p, *c, &ctx, *samples)?;
            // Bloch coordinates: z = 2q - 1, x = 2d
            let bloch: Vec<(f64, f64)> = pts.iter().map(|&(q, d)| (2.0 * d, 2.0 * q - 1.0)).collect();
            let doc = doc! {
                "gibbs_ground" => num(ctx.gibbs()[0]),
                "points" => points_json(&pts),
                "bloch_xz" => points_json(&bloch),
            };
            emit_curve(cli, &pts, out, doc)
        }
        Command::CpBound { ctx, rho, matrix } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let rho = io::load_density(rho)?;
            let action = coherence::ClassicalAction::from(io::load_matrix(matrix)?);
            let n = ctx.dim();
            let mut bound = vec![vec![0.0; n]; n];
            for (xp, row) in bound.iter_mut().enumerate() {
                for (yp, v) in row.iter_mut().enumerate() {
                    *v = coherence::cp_bound(&action, &rho, ctx.spectrum(), xp, yp)?;
                }
            }
            Ok(doc! { "bound" => io::matrix_rows(n, n, |a, b| bound[a][b]) })
        }
        Command::SimulateBath { ctx, matrix, g_e } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let target = match matrix {
                Some(path) => io::load_matrix(path)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    random::random_gibbs_stochastic(&ctx, 3 * ctx.dim(), &mut rng)?
                }
            };
            let model = bath_model_simulate_with(&target, &ctx, *g_e, cli.tol.unwrap_or(tol::VALIDATION))?;
            let n = ctx.dim();
            Ok(doc! {
                "target" => io::stochastic_json(&target),
                "degeneracies" => model.degeneracies.clone(),
                "counts" => Value::Array((0..n).map(|i| Value::from((0..n).map(|j| model.counts[(i, j)]).collect::<Vec<u64>>())).collect()),
                "induced" => io::stochastic_json(&model.induced),
                "residual" => num(model.residual),
            })
        }
        Command::Ladder { ctx, direction, n_trunc, rho } => {
            let ctx = io::load_context(&ctx.ctx, beta)?;
            let e = ctx.energies();
            if e.len() != 3 {
                return Err(Failure::Input(format!("ladder needs a three-level spectrum, got {} levels", e.len())));
            }
            let de = e[1] - e[0];
            coherence::mode_shift_bound(&ctx, de)?;
            let dir = match direction {
                Dir::Up => Direction::Up,
                Dir::Down => Direction::Down,
            };
            let factor = coherence::ladder_transport_factor(de, ctx.beta(), *n_trunc, dir)?;
            let ideal = match dir {
                Direction::Down => 1.0,
                Direction::Up => (-ctx.beta() * de).exp(),
            };
            let mut doc = doc! {
                "transport_factor" => num(factor),
                "ideal" => num(ideal),
                "tail_bound" => num(coherence::ladder_tail_bound(ctx.beta(), de, *n_trunc)),
                "bath_levels" => coherence::bath_levels(*n_trunc),
            };
            if let Some(path) = rho {
                let rho = io::load_density(path)?;
                doc["output"] = io::density_json(&coherence::ladder_simulate(&rho, de, ctx.beta(), *n_trunc, dir)?);
            }
            Ok(doc)
        }
    }
}
