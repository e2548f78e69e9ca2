//! The `kh` command line.
//!
//! Every command writes to the supplied writer and returns the process exit
//! code: 0 when everything requested passed, 1 when a check or comparison
//! failed. Errors are returned to the caller, which reports them and exits
//! with 2.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bracket::{bracket_enhanced_sum, bracket_state_sum, skein_check};
use crate::complex::{build_complex, first_dd_failure, parse_triplets};
use crate::diagram::{parse_orientation, parse_pd, torus_diagram, LinkDiagram};
use crate::error::{Error, Result};
use crate::homology::{classical_table, compute_homology, HomologyTable};
use crate::les::{
    bottom_connecting_grading, check_beta, probe_connecting, split_at_crossing, BetaPrediction,
    LongExactSequence,
};
use crate::torus::torus_kh;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "kh",
    version,
    about = "Framed Khovanov homology over the integers"
)]
pub struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "KH_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    pub parallel: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology table of a PD diagram.
    Compute {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
        /// Report classical (i, j) gradings; needs --orient.
        #[arg(long, requires = "orient")]
        classical: bool,
        /// Orientation overlay (`O arc +|-` lines).
        #[arg(long)]
        orient: Option<PathBuf>,
        /// Write the differentials as sparse triplets to this file.
        #[arg(long)]
        dump_complex: Option<PathBuf>,
    },
    /// Homology of the torus link T(2, n).
    Torus {
        #[arg(value_parser = clap::value_parser!(i64).range(1..))]
        n: i64,
        /// Print the closed form (the default).
        #[arg(long, conflicts_with_all = ["direct", "check"])]
        oracle: bool,
        /// Compute from the standard diagram.
        #[arg(long, conflicts_with = "check")]
        direct: bool,
        /// Compare closed form and direct computation.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Kauffman bracket of a PD diagram.
    Bracket {
        input: PathBuf,
        /// Also evaluate the enhanced-state sum and compare.
        #[arg(long)]
        enhanced: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Long exact sequence at one crossing.
    Les {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        crossing: usize,
        /// Report the connecting map out of one quotient grading.
        #[arg(long)]
        probe_connecting: bool,
        /// Parent grading `a,b` for the probe; defaults to (2−n, 4−3n).
        #[arg(long, value_parser = parse_grading, allow_hyphen_values = true)]
        grading: Option<(i64, i64)>,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Self-checks on a PD diagram, or d² = 0 on a triplet file.
    Check {
        input: PathBuf,
        /// Treat the input as a triplet dump of differentials.
        #[arg(long)]
        complex: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
}

fn parse_grading(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, found `{s}`"))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((p(a)?, p(b)?))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_pd(path: &Path) -> Result<LinkDiagram> {
    parse_pd(&read(path)?)
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn render(t: &HomologyTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => t.render_table(),
        OutputFormat::Json => t.render_json() + "\n",
        OutputFormat::Csv => t.render_csv(),
    }
}

/// Parses `args` and runs the command inside a pool of the requested size.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli, out),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            out.write_all(e.to_string().as_bytes()).map_err(io)?;
            Ok(0)
        }
        Err(e) => Err(Error::Usage(e.to_string())),
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.parallel {
        builder = builder.num_threads(n as usize);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    // commands render into a buffer so the writer need not cross threads
    let mut buf = Vec::new();
    let code = pool.install(|| dispatch(cli.command, &mut buf));
    out.write_all(&buf).map_err(io)?;
    code
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Compute {
            input,
            format,
            classical,
            orient,
            dump_complex,
        } => cmd_compute(
            &input,
            format,
            classical,
            orient.as_deref(),
            dump_complex.as_deref(),
            out,
        ),
        Command::Torus {
            n,
            direct,
            check,
            format,
            ..
        } => cmd_torus(n, direct, check, format, out),
        Command::Bracket {
            input,
            enhanced,
            format,
        } => cmd_bracket(&input, enhanced, format, out),
        Command::Les {
            input,
            crossing,
            probe_connecting,
            grading,
            format,
        } => cmd_les(&input, crossing, probe_connecting, grading, format, out),
        Command::Check {
            input,
            complex,
            format,
        } => cmd_check(&input, complex, format, out),
    }
}

pub fn cmd_compute(
    input: &Path,
    format: OutputFormat,
    classical: bool,
    orient: Option<&Path>,
    dump: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let d = read_pd(input)?;
    let writhe = match orient {
        Some(p) => Some(parse_orientation(d.clone(), &read(p)?)?.writhe()?),
        None => None,
    };
    let c = build_complex(&d);
    if let Some(p) = dump {
        fs::write(p, c.to_triplets()).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    }
    let mut table = compute_homology(&c)?;
    if classical {
        let w = writhe.ok_or_else(|| Error::Usage("--classical needs --orient".into()))?;
        table = classical_table(&table, w)?;
    }
    out.write_all(render(&table, format).as_bytes())
        .map_err(io)?;
    Ok(0)
}

pub fn cmd_torus(
    n: i64,
    direct: bool,
    check: bool,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let oracle = torus_kh(n)?;
    if !direct && !check {
        out.write_all(render(&oracle, format).as_bytes())
            .map_err(io)?;
        return Ok(0);
    }
    let computed = compute_homology(&build_complex(&torus_diagram(n)?))?;
    if direct {
        out.write_all(render(&computed, format).as_bytes())
            .map_err(io)?;
        return Ok(0);
    }
    let pass = computed == oracle;
    let line = if format == OutputFormat::Json {
        json!({ "n": n, "pass": pass, "groups": oracle.len() }).to_string()
    } else {
        format!(
            "T(2,{n}): closed form vs direct ({} groups) {}",
            oracle.len(),
            if pass { "PASS" } else { "FAIL" }
        )
    };
    writeln!(out, "{line}").map_err(io)?;
    Ok(if pass { 0 } else { 1 })
}

pub fn cmd_bracket(
    input: &Path,
    enhanced: bool,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let d = read_pd(input)?;
    let states = bracket_state_sum(&d);
    let enhanced_sum = enhanced.then(|| bracket_enhanced_sum(&d));
    let agree = enhanced_sum.as_ref().is_none_or(|e| *e == states);
    if format == OutputFormat::Json {
        let mut v = json!({ "bracket": states.to_json() });
        if let Some(e) = &enhanced_sum {
            v["enhanced"] = e.to_json();
            v["agree"] = json!(agree);
        }
        writeln!(out, "{v}").map_err(io)?;
    } else {
        writeln!(out, "{states}").map_err(io)?;
        if let Some(e) = &enhanced_sum {
            writeln!(out, "enhanced: {e}").map_err(io)?;
            writeln!(out, "{}", if agree { "agree" } else { "DISAGREE" }).map_err(io)?;
        }
    }
    Ok(if agree { 0 } else { 1 })
}

pub fn cmd_les(
    input: &Path,
    crossing: usize,
    probe: bool,
    grading: Option<(i64, i64)>,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let d = read_pd(input)?;
    let split = split_at_crossing(&d, crossing)?;
    if probe {
        let g = grading.unwrap_or_else(|| bottom_connecting_grading(d.crossing_count()));
        let p = probe_connecting(&split, g)?;
        let (src, tgt) = (p.map.source(), p.map.target());
        if format == OutputFormat::Json {
            let v = json!({
                "crossing": crossing,
                "parent_a": g.0,
                "parent_b": g.1,
                "source": { "a": src.1.0, "b": src.1.1, "group": p.source.to_string() },
                "target": { "a": src.1.0 - 2, "b": tgt.1.1, "group": p.target.to_string() },
                "degree": p.degree(),
            });
            writeln!(out, "{v}").map_err(io)?;
        } else {
            let degree = p
                .degree()
                .map_or_else(|| "n/a (not Z -> Z)".to_string(), |k| k.to_string());
            writeln!(
                out,
                "conn: H_A({},{})[{}] --> H_B({},{})[{}]  |degree| = {degree}",
                src.1 .0, src.1 .1, p.source, tgt.1 .0, tgt.1 .1, p.target
            )
            .map_err(io)?;
        }
        return Ok(0);
    }
    let report = LongExactSequence::compute(&split).exactness();
    let mut predictions = Vec::new();
    for g in split.parent().gradings() {
        let s = check_beta(&split, g.0, g.1)?;
        if s.prediction != BetaPrediction::Unknown {
            predictions.push(s);
        }
    }
    let predictions_ok = predictions.iter().all(|s| s.confirmed());
    if format == OutputFormat::Json {
        let mut v = report.to_json();
        v["beta_predictions"] = predictions
            .iter()
            .map(|s| {
                json!({
                    "a": s.at.0,
                    "b": s.at.1,
                    "prediction": format!("{:?}", s.prediction).to_lowercase(),
                    "mono": s.observed_mono,
                    "epi": s.observed_epi,
                    "confirmed": s.confirmed(),
                })
            })
            .collect();
        writeln!(out, "{v}").map_err(io)?;
    } else {
        out.write_all(report.render_text().as_bytes()).map_err(io)?;
        for s in &predictions {
            writeln!(
                out,
                "b* at H({},{}): predicted {}, observed mono={} epi={} {}",
                s.at.0,
                s.at.1,
                format!("{:?}", s.prediction).to_lowercase(),
                s.observed_mono,
                s.observed_epi,
                if s.confirmed() { "ok" } else { "MISMATCH" }
            )
            .map_err(io)?;
        }
    }
    Ok(if report.is_exact() && predictions_ok {
        0
    } else {
        1
    })
}

/// One named self-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// The four identities for a diagram: d² = 0, equality of the two bracket
/// sums, the skein relation at every crossing, and the Euler
/// characteristic of the homology equal to the bracket.
pub fn diagram_checks(d: &LinkDiagram) -> Result<Vec<CheckResult>> {
    let c = build_complex(d);
    let dd = first_dd_failure(c.differentials());
    let states = bracket_state_sum(d);
    let enhanced = bracket_enhanced_sum(d);
    let mut skein_fail = None;
    for v in 0..d.crossing_count() {
        if !skein_check(d, v)? {
            skein_fail = Some(v);
            break;
        }
    }
    let euler = if dd.is_none() {
        Some(compute_homology(&c)?.euler_characteristic())
    } else {
        None
    };
    Ok(vec![
        CheckResult {
            name: "d^2 = 0",
            pass: dd.is_none(),
            detail: dd.map_or(count(c.differentials().len(), "differential"), |g| {
                format!("fails from ({},{}) into ({},{})", g.0, g.1, g.0 - 4, g.1)
            }),
        },
        CheckResult {
            name: "state sum = enhanced sum",
            pass: states == enhanced,
            detail: format!("bracket {states}"),
        },
        CheckResult {
            name: "skein relation",
            pass: skein_fail.is_none(),
            detail: skein_fail.map_or_else(
                || count(d.crossing_count(), "crossing"),
                |v| format!("fails at crossing {v}"),
            ),
        },
        CheckResult {
            name: "euler characteristic = bracket",
            pass: euler.as_ref() == Some(&states),
            detail: euler.map_or("homology unavailable".into(), |e| format!("chi {e}")),
        },
    ])
}

pub fn cmd_check(
    input: &Path,
    complex: bool,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let text = read(input)?;
    let checks = if complex {
        triplet_checks(&text)?
    } else {
        match parse_pd(&text) {
            Ok(d) => diagram_checks(&d)?,
            Err(pd_err) => triplet_checks(&text).map_err(|_| pd_err)?,
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    if format == OutputFormat::Json {
        let v: Vec<_> = checks
            .iter()
            .map(|c| json!({ "check": c.name, "pass": c.pass, "detail": c.detail }))
            .collect();
        writeln!(out, "{}", json!({ "pass": pass, "checks": v })).map_err(io)?;
    } else {
        for c in &checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict} {}: {}", c.name, c.detail).map_err(io)?;
        }
    }
    Ok(if pass { 0 } else { 1 })
}

fn count(n: usize, noun: &str) -> String {
    format!("{n} {noun}{}", if n == 1 { "" } else { "s" })
}

fn triplet_checks(text: &str) -> Result<Vec<CheckResult>> {
    let ds = parse_triplets(text)?;
    let dd = first_dd_failure(&ds);
    Ok(vec![CheckResult {
        name: "d^2 = 0",
        pass: dd.is_none(),
        detail: dd.map_or(count(ds.len(), "differential"), |g| {
            format!("fails from ({},{}) into ({},{})", g.0, g.1, g.0 - 4, g.1)
        }),
    }])
}
