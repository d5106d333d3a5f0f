//! Command-line front end: identity suites, graph-section sweeps, form
//! decomposition, and the counterexample search. Exit codes: 0 all
//! checks passed, 1 a verification failed, 2 usage or input error.

use clap::{Parser, Subcommand, ValueEnum};
use g2spin7::fm::section::{infer_mode, load_section, GraphSection, Mode};
use g2spin7::fm::{counterexample_search, equivalence_sweep, verify_witness, Sweep};
use g2spin7::g2::G2Data;
use g2spin7::io::{infer_form_mode, load_form};
use g2spin7::report::{Entry, Report, Status};
use g2spin7::scalar::{Exact, Scalar};
use g2spin7::spin7::Spin7Data;
use g2spin7::suite::{run_identities, Mutation, SuiteConfig};
use g2spin7::{Error, Form};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "g2spin7",
    version,
    about = "Flat G2/Spin(7) toolkit: identity suites, graph-section sweeps, form decomposition"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Scalar mode. File-driven commands infer the mode from the file and
    /// reject a conflicting request.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Seed for every randomized draw.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Random samples per identity check.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,

    /// Grid override for section sweeps (points per base axis).
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Fault-injection hook (`phi:flip-sign:e246`); with it the identity
    /// suite must fail.
    #[arg(long, global = true)]
    mutate: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl ModeArg {
    fn to_mode(self) -> Mode {
        match self {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StructureArg {
    G2,
    Spin7,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every registered identity at the configured mode and samples.
    VerifyIdentities,
    /// Sweep a graph-section config and verify residual agreement.
    FmCheck { file: PathBuf },
    /// Split a form file into its irreducible components.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum)]
        structure: StructureArg,
    },
    /// Budgeted float search for curvature killing only the first
    /// residual at unit determinant.
    CounterexampleSearch {
        #[arg(long, default_value_t = 40)]
        restarts: usize,
        #[arg(long, default_value_t = 400)]
        iters: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            for e in &report.entries {
                let tag = match e.pass {
                    Some(true) => "pass",
                    Some(false) => "FAIL",
                    None => "info",
                };
                println!("{tag}  {:32}  {}", e.id, e.value);
            }
            println!("{}", if report.pass { "PASS" } else { "FAIL" });
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("error: cannot write report: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let mutation = cli
        .mutate
        .as_deref()
        .map(str::parse::<Mutation>)
        .transpose()?;
    if mutation.is_some() && !matches!(cli.cmd, Cmd::VerifyIdentities) {
        return Err(Error::Invalid("--mutate only applies to verify-identities".into()));
    }

    match &cli.cmd {
        Cmd::VerifyIdentities => {
            let mode = cli.mode.unwrap_or(ModeArg::Exact).to_mode();
            let cfg = SuiteConfig { seed: cli.seed, samples: cli.samples, mutation };
            let entries = match mode {
                Mode::Exact => run_identities::<Exact>(&cfg),
                Mode::Float => run_identities::<f64>(&cfg),
            };
            let mut report = Report::new("verify-identities", mode.name());
            report.seed = Some(cli.seed);
            report.samples = Some(cli.samples);
            for e in entries {
                report.push(e);
            }
            Ok(report)
        }
        Cmd::FmCheck { file } => {
            let json = read_to_string(file)?;
            let mode = resolve_mode(infer_mode(&json)?, cli.mode)?;
            let sweep = match mode {
                Mode::Exact => fm_sweep::<Exact>(&json, cli.grid)?,
                Mode::Float => fm_sweep::<f64>(&json, cli.grid)?,
            };
            let mut report = Report::new("fm-check", mode.name());
            for e in sweep_entries(&sweep) {
                report.push(e);
            }
            Ok(report)
        }
        Cmd::Decompose { file, structure } => {
            let json = read_to_string(file)?;
            let mode = resolve_mode(infer_form_mode(&json)?, cli.mode)?;
            let entries = match mode {
                Mode::Exact => decompose_entries::<Exact>(&json, *structure)?,
                Mode::Float => decompose_entries::<f64>(&json, *structure)?,
            };
            let mut report = Report::new("decompose", mode.name());
            for e in entries {
                report.push(e);
            }
            Ok(report)
        }
        Cmd::CounterexampleSearch { restarts, iters } => {
            if cli.mode == Some(ModeArg::Exact) {
                return Err(Error::Invalid("the counterexample search is float-only".into()));
            }
            let sp = Spin7Data::<f64>::standard();
            let out = counterexample_search(&sp, cli.seed, *restarts, *iters);
            let mut report = Report::new("counterexample-search", "float");
            report.seed = Some(cli.seed);
            report.push(Entry::info(
                "search.best-objective",
                "smallest penalized objective over all restarts",
                format!("{:.6e}", out.best_objective),
                Status::Indeterminate,
            ));
            match &out.witness {
                Some(w) => {
                    let ok = verify_witness(&sp, w);
                    report.push(Entry::gating(
                        "search.witness",
                        "unit-determinant linear section with vanishing first residual and surviving second",
                        format!(
                            "r1 {:.3e}, r2 {:.3e}, det defect {:.3e} after {} restarts",
                            w.r1_norm,
                            w.r2_norm,
                            (w.det - 1.0).abs(),
                            out.restarts
                        ),
                        Status::Zero,
                        ok,
                    ));
                    println!("{}", serde_json::to_string_pretty(w)?);
                }
                None => report.push(Entry::info(
                    "search.witness",
                    "no residual gap found within the budget",
                    format!("{} restarts exhausted", out.restarts),
                    Status::Indeterminate,
                )),
            }
            Ok(report)
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn resolve_mode(inferred: Mode, requested: Option<ModeArg>) -> Result<Mode, Error> {
    match requested {
        Some(arg) if arg.to_mode() != inferred => Err(Error::Invalid(format!(
            "file coefficients are {} but --mode {} was requested",
            inferred.name(),
            arg.to_mode().name()
        ))),
        _ => Ok(inferred),
    }
}

fn fm_sweep<S: Scalar>(json: &str, grid: Option<usize>) -> Result<Sweep, Error> {
    let mut section: GraphSection<S> = load_section(json)?;
    if let Some(g) = grid {
        if g == 0 {
            return Err(Error::Invalid("grid must be positive".into()));
        }
        section = section.with_grid(g);
    }
    let sp = Spin7Data::standard();
    Ok(equivalence_sweep(&sp, &section))
}

fn sweep_entries(sweep: &Sweep) -> Vec<Entry> {
    let mut out = Vec::new();
    for r in &sweep.residuals {
        out.push(Entry::info(
            r.id,
            r.statement,
            g2spin7::report::fmt_value(r.exact_zero, r.sup),
            r.status,
        ));
    }
    for a in &sweep.agreements {
        let value = if a.indeterminate_points == 0 {
            format!("{} points decided", a.decided_points)
        } else {
            format!(
                "{} points decided, {} indeterminate",
                a.decided_points, a.indeterminate_points
            )
        };
        let status = if a.holds { Status::Zero } else { Status::Nonzero };
        out.push(Entry::gating(a.id, a.statement, value, status, a.holds));
    }
    out.push(Entry::gating(
        "transform.closed",
        "the symbolic exterior derivative of the curvature cancels",
        sweep.closedness_defects.to_string(),
        if sweep.closedness_defects == 0 { Status::Zero } else { Status::Nonzero },
        sweep.closedness_defects == 0,
    ));
    for n in &sweep.notes {
        out.push(Entry::info("sweep.note", "per-point anomaly", n.clone(), Status::Indeterminate));
    }
    out
}

fn norm_value<S: Scalar>(n_sq: &S) -> String {
    if S::IS_EXACT {
        n_sq.to_string()
    } else {
        format!("{:.6e}", n_sq.to_f64())
    }
}

fn decompose_entries<S: Scalar>(
    json: &str,
    structure: StructureArg,
) -> Result<Vec<Entry>, Error> {
    let f: Form<S> = load_form(json)?;
    let mut out = Vec::new();
    let (p7_sq, rest_sq, rest_id, rest_statement) = match structure {
        StructureArg::G2 => {
            if f.dim() != 7 || f.grade() != 2 {
                return Err(Error::Invalid(format!(
                    "g2 decomposition expects a 2-form on R^7, got grade {} in dim {}",
                    f.grade(),
                    f.dim()
                )));
            }
            let g2 = G2Data::<S>::standard();
            let (p7, p14) = g2.project2(&f);
            (p7.norm_sq(), p14.norm_sq(), "component.14", "squared norm of the 14-summand part")
        }
        StructureArg::Spin7 => {
            if f.dim() != 8 {
                return Err(Error::Invalid(format!(
                    "spin7 decomposition expects a form on R^8, got dim {}",
                    f.dim()
                )));
            }
            let sp = Spin7Data::<S>::standard();
            let p7 = sp.project7(f.grade(), &f)?;
            let rest = &f - &p7;
            (p7.norm_sq(), rest.norm_sq(), "component.rest", "squared norm of the complement")
        }
    };
    out.push(Entry::info(
        "component.7",
        "squared norm of the 7-summand part",
        norm_value(&p7_sq),
        Status::Zero,
    ));
    out.push(Entry::info(rest_id, rest_statement, norm_value(&rest_sq), Status::Zero));
    let defect = f.norm_sq() - (p7_sq + rest_sq);
    let exact_zero = S::IS_EXACT && defect.is_zero();
    let ok = if S::IS_EXACT {
        defect.is_zero()
    } else {
        g2spin7::report::approx_zero(defect.to_f64().abs(), f.norm_sq().to_f64())
    };
    out.push(Entry::gating(
        "norm-additivity",
        "the squared norms of the components sum to the squared input norm",
        g2spin7::report::fmt_value(exact_zero, defect.to_f64().abs()),
        if ok { Status::Zero } else { Status::Nonzero },
        ok,
    ));
    Ok(out)
}
