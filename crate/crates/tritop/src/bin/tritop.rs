//! Command-line interface: generate symbols, invert them, analyze decay,
//! verify the theorem suite, and reproduce the decay-figure data files.
//!
//! Exit codes: 0 success, 2 validation, 3 singular input, 4 convergence,
//! 5 i/o. Errors go to stderr as one-line JSON.

use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tritop::io::{sample_indices, FileFormat, SampleMode, SeriesFile, SeriesMeta, SeriesRow};
use tritop::{
    check_cor_b_decay, check_stmt2, check_thm1, check_thm4, check_thm_decay_rate,
    check_thm_final, classify, default_class_tol, default_newton_tol, estimate_decay_rate,
    exhaustive_residual_au, fundamental, generate, invert_naive, invert_newton, residual_ab,
    residual_au, verify_uu, Error, GeneratorKind, GeneratorSpec, InverseResult, RealSeq, Result,
};

#[derive(Parser)]
#[command(name = "tritop", version, about = "Triangular Toeplitz sequence toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GenArgs {
    /// Power-law exponent: a_k = (1+k)^(-alpha)
    #[arg(long)]
    alpha: Option<f64>,
    /// Constant symbol a_k = c
    #[arg(long)]
    constant: Option<f64>,
    /// The fast-decay counterexample symbol [1, 1, 0, 0, ...]
    #[arg(long)]
    jaffard: bool,
    /// Sequence length
    #[arg(long)]
    n: usize,
}

impl GenArgs {
    fn spec(&self) -> Result<GeneratorSpec> {
        let kind = match (self.alpha, self.constant, self.jaffard) {
            (Some(a), None, false) => GeneratorKind::PowerLaw(a),
            (None, Some(c), false) => GeneratorKind::Constant(c),
            (None, None, true) => GeneratorKind::JaffardExample,
            (None, None, false) => {
                return Err(Error::validation(
                    "one of --alpha, --constant, --jaffard is required",
                ))
            }
            _ => {
                return Err(Error::validation(
                    "--alpha, --constant and --jaffard are mutually exclusive",
                ))
            }
        };
        Ok(GeneratorSpec { kind, n: self.n })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a symbol sequence and write it out
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Invert a symbol and write the series (a, b, u) with residuals
    Invert {
        #[command(flatten)]
        gen: GenArgs,
        /// naive | newton | auto
        #[arg(long, default_value = "auto")]
        method: String,
        /// all | log:<count>
        #[arg(long)]
        sample: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Newton residual tolerance (default 1e-9 * sqrt(n))
        #[arg(long)]
        tol: Option<f64>,
        /// Check the a*u = 1 identity at every k (n <= 16384 only)
        #[arg(long)]
        exhaustive_residual: bool,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Classify a symbol and fit decay rates of u and |b|
    Analyze {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run theorem validators and emit TheoremReport JSON
    Verify {
        #[command(flatten)]
        gen: GenArgs,
        /// stmt2 | thm1 | cor | decay-rate | thm4 | final | all
        #[arg(long, default_value = "all")]
        theorem: String,
        #[arg(long, default_value = "auto")]
        method: String,
        /// Bound tolerance for stmt2/thm4 checks
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit log-sampled decay data files and a fit summary per alpha
    ReproduceFigure {
        /// Power-law exponent; repeat for several curves (each in (0,1))
        #[arg(long, required = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_timestamp: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        let msg = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
        eprintln!("{msg}");
        std::process::exit(e.exit_code());
    }
}

fn parse_format(s: &str) -> Result<FileFormat> {
    s.parse()
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn invert_with(
    method: &str,
    a: &RealSeq,
    n: usize,
    tol: Option<f64>,
) -> Result<InverseResult> {
    match method {
        "naive" => invert_naive(a, n),
        "newton" => invert_newton(a, n, tol.unwrap_or_else(|| default_newton_tol(n))),
        "auto" => {
            if n <= 4096 {
                invert_naive(a, n)
            } else {
                invert_newton(a, n, tol.unwrap_or_else(|| default_newton_tol(n)))
            }
        }
        other => Err(Error::validation(format!(
            "method must be naive, newton or auto, got {other:?}"
        ))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            gen,
            out,
            format,
            no_timestamp,
        } => {
            let spec = gen.spec()?;
            let a = generate(&spec)?;
            let format = parse_format(&format)?;
            let mut meta = SeriesMeta::new(spec.n);
            meta.generator = Some(spec);
            if !no_timestamp {
                meta = meta.with_timestamp();
            }
            match format {
                FileFormat::Raw => {
                    let path = out.ok_or_else(|| {
                        Error::validation("--out is required for raw output")
                    })?;
                    tritop::io::write_raw(&path, a.values(), &serde_json::to_value(&meta)?)?;
                }
                FileFormat::Csv => {
                    let mut buf = Vec::new();
                    let meta_json = serde_json::to_value(&meta)?;
                    if let serde_json::Value::Object(map) = &meta_json {
                        for (k, v) in map {
                            writeln!(buf, "# {k} = {v}")?;
                        }
                    }
                    writeln!(buf, "k,a")?;
                    for (k, v) in a.values().iter().enumerate() {
                        writeln!(buf, "{k},{v:.16e}")?;
                    }
                    write_out(out.as_deref(), &buf)?;
                }
                FileFormat::Json => {
                    let doc = json!({"meta": meta, "a": a.values()});
                    write_out(out.as_deref(), serde_json::to_string_pretty(&doc)?.as_bytes())?;
                }
            }
            Ok(())
        }

        Command::Invert {
            gen,
            method,
            sample,
            out,
            format,
            tol,
            exhaustive_residual,
            no_timestamp,
        } => {
            let spec = gen.spec()?;
            let a = generate(&spec)?;
            let n = spec.n;
            let inv = invert_with(&method, &a, n, tol)?;
            let f = fundamental(&a, &inv.b)?;

            let au = if exhaustive_residual {
                if n > 1 << 14 {
                    return Err(Error::validation(
                        "--exhaustive-residual is limited to n <= 16384",
                    ));
                }
                exhaustive_residual_au(&a, &f.u)?
            } else {
                residual_au(&a, &f.u, 64)?
            };
            let ab = residual_ab(&a, &inv.b, 64)?;

            let sample_mode: SampleMode = match sample {
                Some(s) => s.parse()?,
                None if n > 8192 => SampleMode::Log(512),
                None => SampleMode::All,
            };
            let mut meta = SeriesMeta::new(n);
            meta.generator = Some(spec);
            meta.method = Some(inv.method);
            meta.au_residual = Some(au);
            meta.ab_residual = Some(ab);
            if !no_timestamp {
                meta = meta.with_timestamp();
            }
            let rows: Vec<SeriesRow> = sample_indices(n, sample_mode)
                .into_iter()
                .map(|k| SeriesRow {
                    k,
                    a: a[k],
                    b: inv.b[k],
                    u: f.u[k],
                })
                .collect();
            let file = SeriesFile { meta, rows };
            let format = parse_format(&format)?;
            match out {
                Some(p) => file.write(&p, format)?,
                None => match format {
                    FileFormat::Csv => {
                        let mut buf = Vec::new();
                        file.write_csv(&mut buf)?;
                        write_out(None, &buf)?;
                    }
                    FileFormat::Json => {
                        write_out(None, serde_json::to_string_pretty(&file)?.as_bytes())?
                    }
                    FileFormat::Raw => {
                        return Err(Error::validation("--out is required for raw output"))
                    }
                },
            }
            Ok(())
        }

        Command::Analyze { gen, method, out } => {
            let spec = gen.spec()?;
            let a = generate(&spec)?;
            let n = spec.n;
            let class = classify(&a, Some(&spec), default_class_tol(&a));
            let inv = invert_with(&method, &a, n, None)?;
            let f = fundamental(&a, &inv.b)?;
            let u_fit = estimate_decay_rate(&f.u, None)?;
            let b_fit = estimate_decay_rate(&inv.b, None)?;
            let doc = json!({
                "class": class,
                "u_fit": u_fit,
                "b_fit": b_fit,
                "au_residual": inv.au_residual,
            });
            write_out(out.as_deref(), serde_json::to_string_pretty(&doc)?.as_bytes())?;
            Ok(())
        }

        Command::Verify {
            gen,
            theorem,
            method,
            tol,
            out,
        } => {
            let spec = gen.spec()?;
            let a = generate(&spec)?;
            let n = spec.n;
            let class = classify(&a, Some(&spec), default_class_tol(&a));
            let inv = invert_with(&method, &a, n, None)?;
            let f = fundamental(&a, &inv.b)?;

            let alpha = match spec.kind {
                GeneratorKind::PowerLaw(alpha) => Some(alpha),
                _ => None,
            };
            let mut reports = Vec::new();
            let want = |name: &str| theorem == "all" || theorem == name;
            if want("stmt2") {
                reports.push(check_stmt2(&f.u, tol.unwrap_or(1e-10)));
            }
            if want("thm1") {
                reports.push(check_thm1(&f.u, &class)?);
            }
            if want("cor") {
                reports.push(check_cor_b_decay(&inv.b, &class)?);
            }
            if want("decay-rate") {
                let alpha = alpha.ok_or_else(|| {
                    Error::validation("--theorem decay-rate requires a power-law symbol")
                })?;
                let u_fit = estimate_decay_rate(&f.u, None)?;
                reports.push(check_thm_decay_rate(&u_fit, alpha)?);
            }
            if want("thm4") {
                reports.push(check_thm4(&inv.b, &class, tol.unwrap_or(1e-12)));
            }
            if want("final") {
                reports.push(check_thm_final(&inv.b, &f.u, &class, 1e-10, 0.01));
            }
            if reports.is_empty() {
                return Err(Error::validation(format!(
                    "unknown theorem {theorem:?} (stmt2, thm1, cor, decay-rate, thm4, final, all)"
                )));
            }
            let doc = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])?
            } else {
                serde_json::to_string_pretty(&reports)?
            };
            write_out(out.as_deref(), doc.as_bytes())?;
            // residual sanity lines for scripts; uu closes the identity chain
            let uu = verify_uu(&f.u, &f.d, 64)?;
            eprintln!("# au_residual = {:e}, uu_residual = {:e}", inv.au_residual, uu);
            Ok(())
        }

        Command::ReproduceFigure {
            alpha,
            n,
            out,
            no_timestamp,
        } => reproduce_figure(&alpha, n, &out, no_timestamp),
    }
}

/// Per-alpha decay data files plus a fit summary, fanned out over threads
/// (capped by TRITOP_THREADS).
fn reproduce_figure(alphas: &[f64], n: usize, out_dir: &Path, no_timestamp: bool) -> Result<()> {
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::validation(format!(
                "reproduce-figure requires alpha in (0, 1), got {alpha}"
            )));
        }
    }
    if n < 10_000 {
        return Err(Error::validation("reproduce-figure requires n >= 10000"));
    }
    std::fs::create_dir_all(out_dir)?;

    let max_threads = std::env::var("TRITOP_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(NonZeroUsize::get)
                .unwrap_or(1)
        });

    let mut summaries: Vec<Option<serde_json::Value>> = vec![None; alphas.len()];
    let mut first_err: Option<Error> = None;
    for chunk in alphas
        .iter()
        .copied()
        .enumerate()
        .collect::<Vec<_>>()
        .chunks(max_threads.max(1))
    {
        let results: Vec<(usize, Result<serde_json::Value>)> = std::thread::scope(|s| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|&(i, alpha)| {
                    s.spawn(move || (i, figure_for_alpha(alpha, n, out_dir, no_timestamp)))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (i, r) in results {
            match r {
                Ok(v) => summaries[i] = Some(v),
                Err(e) => {
                    if first_err.is_none() {
                        first_err = Some(e);
                    }
                }
            }
        }
    }
    if let Some(e) = first_err {
        return Err(e);
    }

    let summary = json!({
        "n": n,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "curves": summaries.into_iter().map(Option::unwrap).collect::<Vec<_>>(),
    });
    std::fs::write(
        out_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;
    Ok(())
}

fn figure_for_alpha(
    alpha: f64,
    n: usize,
    out_dir: &Path,
    no_timestamp: bool,
) -> Result<serde_json::Value> {
    let spec = GeneratorSpec::power_law(alpha, n);
    let a = generate(&spec)?;
    let inv = invert_newton(&a, n, default_newton_tol(n))?;
    let f = fundamental(&a, &inv.b)?;

    let u_fit = estimate_decay_rate(&f.u, None)?;
    let b_fit = estimate_decay_rate(&inv.b, None)?;
    // pre-asymptotic head excluded by the default window; short windows
    // cannot pin the asymptotic slope
    let low_confidence = (u_fit.window.1 as f64) / (u_fit.window.0 as f64) < 1e3;

    let mut meta = SeriesMeta::new(n);
    meta.generator = Some(spec);
    meta.method = Some(inv.method);
    meta.au_residual = Some(inv.au_residual);
    if !no_timestamp {
        meta = meta.with_timestamp();
    }
    let rows: Vec<SeriesRow> = sample_indices(n, SampleMode::Log(512))
        .into_iter()
        .map(|k| SeriesRow {
            k,
            a: a[k],
            b: inv.b[k].abs(),
            u: f.u[k],
        })
        .collect();
    let file = SeriesFile { meta, rows };
    let path = out_dir.join(format!("decay_alpha_{alpha}.csv"));
    file.write(&path, FileFormat::Csv)?;

    Ok(json!({
        "alpha": alpha,
        "file": path.file_name().unwrap().to_string_lossy(),
        "upsilon_fit": u_fit.rate,
        "upsilon_predicted": 1.0 - alpha,
        "beta_fit": b_fit.rate,
        "beta_predicted": 2.0 - alpha,
        "u_fit": u_fit,
        "b_fit": b_fit,
        "au_residual": inv.au_residual,
        "low_confidence": low_confidence,
    }))
}
