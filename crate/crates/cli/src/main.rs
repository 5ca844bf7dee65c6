use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ncsing::constructions::{
    beilinson_presentation, corner_presentation, mckay_quiver, remove_trivial_vertex, skew_group_presentation,
    skew_layered_presentation, stable_cm_pipeline, LiftSign, PipelineOptions,
};
use ncsing::gradedalg::{
    algebra_json, dual_action, hdet_diagonal, hilbert_function, invariant_hilbert_function, koszul_numeric_check, parse_algebra,
    quadratic_dual, DiagonalAction, HdetConvention, QuadraticAlgebra,
};
use ncsing::quiver::{
    dot_export, finite_dimensionality, json_export, parse_presentation, text_export, QuiverPresentation, VertexLabel,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ncsing", version, about = "Quiver presentations for quotient singularities of quadratic algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Largest tensor degree any computation may reach.
    #[arg(long, env = "NCSING_MAX_DEGREE", default_value_t = 8, global = true)]
    max_degree: usize,

    /// Largest grade scanned when deciding finite dimensionality.
    #[arg(long, default_value_t = 32, global = true)]
    findim_bound: usize,

    #[arg(long, value_enum, default_value_t = Convention::Direct, global = true)]
    hdet_convention: Convention,

    /// Direction in which arrows of the skew Beilinson quiver move the character.
    #[arg(long, value_enum, default_value_t = Sign::Plus, global = true)]
    lift_sign: Sign,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Direct,
    Inverse,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// McKay quiver of a diagonal cyclic action.
    Mckay {
        #[arg(long)]
        r: u32,
        /// Comma-separated weights, one per generator. Defaults to the trivial character.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
        /// Number of generators; needed when no weights are given.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Skew group algebra A*G.
    Skew { input: PathBuf },
    /// Quotient (A*G)/(e) by the trivial-character vertex.
    QuotientE { input: PathBuf },
    /// Koszul dual A^! with the dual action.
    Dual { input: PathBuf },
    /// Beilinson algebra of the Koszul dual, with ℓ layers.
    Beilinson {
        input: PathBuf,
        /// Number of layers; defaults to the global dimension of the input.
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Skew group algebra of the Beilinson algebra of the Koszul dual.
    SkewBeilinson {
        input: PathBuf,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Corner algebra at a set of vertices of a finite-dimensional presentation.
    Corner {
        input: PathBuf,
        /// Kept vertex indices. Defaults to every vertex (i, c) with c ≠ 0.
        #[arg(long, value_delimiter = ',')]
        kept: Option<Vec<usize>>,
    },
    /// Homological determinant of every group element.
    Hdet {
        input: PathBuf,
        /// Global dimension; defaults to the one in the file.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Finite-dimensionality check of a presentation.
    Findim { input: PathBuf },
    /// Hilbert function up to a degree.
    Hilbert {
        input: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Hilbert function of the invariant subalgebra.
    Invariants {
        input: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Numerical Koszulness proxies.
    KoszulCheck {
        input: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// All constructions and checks from the algebra to the corner algebra.
    Pipeline {
        input: PathBuf,
        /// Degree for the Koszul proxies and Hilbert data.
        #[arg(long)]
        degree: Option<usize>,
        /// Report the corner algebra even when a check fails.
        #[arg(long)]
        force: bool,
    },
}

/// What a command produced: the text to emit and whether its checks passed.
struct Output {
    body: String,
    passed: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, passed: true }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_algebra(path: &Path) -> Result<(QuadraticAlgebra, Option<DiagonalAction>)> {
    parse_algebra(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_with_action(path: &Path) -> Result<(QuadraticAlgebra, DiagonalAction)> {
    let (a, act) = load_algebra(path)?;
    let act = act.ok_or_else(|| anyhow!("{} has no action", path.display()))?;
    Ok((a, act))
}

fn load_presentation(path: &Path) -> Result<QuiverPresentation> {
    parse_presentation(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn global_dim(a: &QuadraticAlgebra, given: Option<usize>) -> Result<usize> {
    given.or(a.claimed_global_dim()).ok_or_else(|| anyhow!("no dimension given and none in the input file"))
}

fn pretty(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn presentation(p: &QuiverPresentation, format: Format) -> String {
    match format {
        Format::Json => json_export(p) + "\n",
        Format::Dot => dot_export(p),
        Format::Text => text_export(p),
    }
}

fn no_dot(format: Format, what: &str) -> Result<()> {
    if format == Format::Dot {
        bail!("{what} has no DOT form; use --format json or text");
    }
    Ok(())
}

fn sequence(xs: &[usize]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<Output> {
    let c = &cli.common;
    if c.max_degree < 2 {
        bail!("--max-degree must be at least 2");
    }
    let cap = c.max_degree;
    let convention = match c.hdet_convention {
        Convention::Direct => HdetConvention::Direct,
        Convention::Inverse => HdetConvention::Inverse,
    };
    let sign = match c.lift_sign {
        Sign::Plus => LiftSign::Plus,
        Sign::Minus => LiftSign::Minus,
    };
    let f = c.format;
    Ok(match cli.command {
        Command::Mckay { r, weights, n } => {
            let weights = match (weights, n) {
                (Some(w), Some(n)) if w.len() != n => bail!("{} weights given for {n} generators", w.len()),
                (Some(w), _) => w,
                (None, Some(n)) => vec![r as i64; n],
                (None, None) => bail!("give --weights or --n"),
            };
            let act = DiagonalAction::from_residues(r, &weights)?;
            let p = QuiverPresentation::free(mckay_quiver(&act, weights.len()), 1);
            Output::ok(presentation(&p, f))
        }
        Command::Skew { input } => {
            let (a, act) = load_with_action(&input)?;
            Output::ok(presentation(&skew_group_presentation(&a, &act)?, f))
        }
        Command::QuotientE { input } => {
            let (a, act) = load_with_action(&input)?;
            Output::ok(presentation(&remove_trivial_vertex(&skew_group_presentation(&a, &act)?)?, f))
        }
        Command::Dual { input } => {
            no_dot(f, "an algebra")?;
            let (a, act) = load_algebra(&input)?;
            let dual = quadratic_dual(&a);
            let dual_act = act.as_ref().map(dual_action);
            match f {
                Format::Text => {
                    let names = dual.generator_names();
                    let mut body = format!("generators: {}\nrelations ({}):\n", names.join(", "), dual.relations().dim());
                    for rel in dual.relation_polynomials() {
                        body += &format!("  {}\n", rel.render(names));
                    }
                    Output::ok(body)
                }
                _ => Output::ok(pretty(&algebra_json(&dual, dual_act.as_ref()))?),
            }
        }
        Command::Beilinson { input, ell } => {
            let (a, _) = load_algebra(&input)?;
            let ell = global_dim(&a, ell)?;
            Output::ok(presentation(&beilinson_presentation(&quadratic_dual(&a), ell)?, f))
        }
        Command::SkewBeilinson { input, ell } => {
            let (a, act) = load_with_action(&input)?;
            let ell = global_dim(&a, ell)?;
            let dual = quadratic_dual(&a);
            let b = beilinson_presentation(&dual, ell)?;
            Output::ok(presentation(&skew_layered_presentation(&b, dual.generator_names(), &dual_action(&act), sign)?, f))
        }
        Command::Corner { input, kept } => {
            let p = load_presentation(&input)?;
            let kept = kept.unwrap_or_else(|| {
                (0..p.quiver.vertex_count())
                    .filter(|&v| matches!(p.quiver.vertices[v], VertexLabel::Pair(_, c) if c != 0))
                    .collect()
            });
            Output::ok(presentation(&corner_presentation(&p, &kept, c.findim_bound)?, f))
        }
        Command::Hdet { input, degree } => {
            no_dot(f, "a determinant")?;
            let (a, act) = load_with_action(&input)?;
            let d = global_dim(&a, degree)?;
            let mut values = Vec::new();
            for p in 0..act.r() {
                values.push(hdet_diagonal(&a, &act.power(p as i64), d, convention, cap)?);
            }
            let hsl = values.iter().all(|v| v.is_one());
            match f {
                Format::Text => {
                    let mut body: String = values.iter().enumerate().map(|(p, v)| format!("g^{p}: {v}\n")).collect();
                    body += &format!("in HSL: {}\n", if hsl { "yes" } else { "no" });
                    Output::ok(body)
                }
                _ => Output::ok(pretty(&json!({ "values": values, "hsl": hsl }))?),
            }
        }
        Command::Findim { input } => {
            no_dot(f, "a dimension report")?;
            let rep = finite_dimensionality(&load_presentation(&input)?, c.findim_bound);
            match f {
                Format::Text => Output::ok(match rep.total_dim {
                    Some(t) => format!("Finite, total dim {t}\ndims: {}\n", sequence(&rep.per_degree_dims)),
                    None => format!("Unknown at bound {}\ndims: {}\n", rep.bound_used, sequence(&rep.per_degree_dims)),
                }),
                _ => Output::ok(pretty(&rep)?),
            }
        }
        Command::Hilbert { input, degree } => {
            no_dot(f, "a Hilbert function")?;
            let (a, _) = load_algebra(&input)?;
            let h = hilbert_function(&a, degree.unwrap_or(cap), cap)?;
            Output::ok(if f == Format::Text { sequence(&h) + "\n" } else { pretty(&h)? })
        }
        Command::Invariants { input, degree } => {
            no_dot(f, "a Hilbert function")?;
            let (a, act) = load_with_action(&input)?;
            let h = invariant_hilbert_function(&a, &act, degree.unwrap_or(cap), cap)?;
            Output::ok(if f == Format::Text { sequence(&h) + "\n" } else { pretty(&h)? })
        }
        Command::KoszulCheck { input, degree } => {
            no_dot(f, "a Koszul report")?;
            let (a, _) = load_algebra(&input)?;
            let n = degree.unwrap_or_else(|| a.claimed_global_dim().map_or(cap, |d| (d + 2).min(cap)));
            let rep = koszul_numeric_check(&a, n, cap)?;
            let body = match f {
                Format::Text => {
                    let mut s = format!("hilbert: {}\n", sequence(&rep.hilbert));
                    for d in &rep.degrees {
                        s += &format!(
                            "degree {}: dim K = {}, dim A^! = {}  {}\n",
                            d.degree,
                            d.syzygy_dim,
                            d.dual_dim,
                            if d.passed { "ok" } else { "FAIL" }
                        );
                    }
                    s
                }
                _ => pretty(&rep)?,
            };
            Output { body, passed: rep.passed }
        }
        Command::Pipeline { input, degree, force } => {
            let (a, act) = load_with_action(&input)?;
            let opts = PipelineOptions {
                max_degree: cap,
                koszul_degree: degree,
                findim_bound: c.findim_bound,
                hdet_convention: convention,
                lift_sign: sign,
                force,
            };
            let rep = stable_cm_pipeline(&a, &act, &opts)?;
            let body = match f {
                Format::Json => pretty(&rep)?,
                Format::Dot => match rep.gamma() {
                    Some(g) => dot_export(&g),
                    None => String::new(),
                },
                Format::Text => pipeline_text(&rep),
            };
            Output { body, passed: rep.passed() }
        }
    })
}

fn pipeline_text(rep: &ncsing::constructions::PipelineReport) -> String {
    let g = &rep.gates;
    let verdict = |passed: bool, error: &Option<String>| match (passed, error) {
        (true, _) => "pass".to_string(),
        (false, Some(e)) => format!("FAIL ({e})"),
        (false, None) => "FAIL".to_string(),
    };
    let mut s = String::new();
    s += &format!("action_check           {}\n", verdict(g.action_check.passed, &g.action_check.error));
    s += &format!("koszul                 {}\n", verdict(g.koszul.passed, &g.koszul.error));
    s += &format!("hdet                   {}\n", verdict(g.hdet.passed, &g.hdet.error));
    s += &format!("finite_dimensionality  {}\n", verdict(g.finite_dimensionality.passed, &g.finite_dimensionality.error));
    s += &format!("frobenius              {}\n", verdict(g.frobenius.passed, &g.frobenius.error));
    if let Some(h) = &rep.hilbert.algebra {
        s += &format!("hilbert                {}\n", sequence(h));
    }
    if let Some(h) = &rep.hilbert.invariants {
        s += &format!("invariants             {}\n", sequence(h));
    }
    match (rep.gamma(), &g.gamma_withheld) {
        (Some(gamma), _) => s += &format!("\ncorner algebra\n{}", text_export(&gamma)),
        (None, Some(why)) => s += &format!("\ncorner algebra withheld: {why}\n"),
        (None, None) => {}
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.common.out.clone();
    match run(cli) {
        Ok(output) => {
            let written = match &out {
                Some(path) => fs::write(path, &output.body).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{}", output.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if output.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
