//! Command-line front end.
//!
//! Results go to standard output (or `--out FILE`), progress and errors to
//! standard error. Exit codes: 0 on success, 1 when a verification finds
//! violations or counterexamples, 2 on usage or computation errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::antichain::{
    construct_extremal, sperner_max_check, theorem25_bound, verify_sperner_operations, verify_thm25_brute,
    verify_thm26_structure, CaseTag,
};
use crate::binomial::{binom, verify_d_identities, ExactInt};
use crate::error::{Error, Result};
use crate::kappa::{
    check_conjecture51, check_conjecture51_exact_k, conjecture51_exact_k_report, conjecture51_report, kappa,
    kappa_star, middle_level, negativity_threshold, verify_lemma38, verify_prop22, verify_prop24, verify_thm23,
    KappaTable,
};
use crate::report::{int_value, VerificationReport};
use crate::shadow::{
    cascade_json, cascade_rep, kk_shadow_min, verify_clements_minimality, verify_kkt_lower_bound,
    verify_kkt_tightness, verify_lieby_duality,
};
use crate::squashed::{rank, unrank, Subset, MAX_GROUND};
use crate::suite::{run_all_with_progress, DEFAULT_N_MAX, DEFAULT_R_MAX, KKT_SAMPLES, KKT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Tsv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyCheck {
    DIdentities,
    Kkt,
    Lieby,
    Clements,
    Prop22,
    Thm23,
    Prop24,
    Lemma38,
    Thm25Brute,
    Thm26,
    Sperner,
    Conjecture51,
    All,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// κ_r(m); with `--format tsv`, the table for 0..=m
    Kappa,
    /// κ*_r(m), the minimum of κ_r over 0..=m; with `--format tsv`, the table
    KappaStar,
    /// Cascade representation of m at level r
    Cascade,
    /// Kruskal-Katona minimum shadow of m sets of size r
    ShadowMin,
    /// Position of a subset in squashed order, e.g. `rank 245`
    Rank {
        /// Digits (`245`) or a braced list (`{2,4,10}`)
        set: String,
    },
    /// The m-th k-subset in squashed order (0-based), within N_n
    Unrank,
    /// Largest |A|+|B| for antichains of N_n with at most k disjoint pairs
    Bound,
    /// A pair of antichains attaining `bound`
    Extremal,
    /// Run a verification sweep
    Verify {
        #[arg(value_enum)]
        check: VerifyCheck,
    },
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "kkf", version, about = "Kruskal-Katona function and cross-intersecting antichain checks")]
pub struct SweepConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Ground set size (sweeps: largest n; `verify all` default 8)
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Set size / κ level (`verify all` default 6)
    #[arg(long, global = true)]
    pub r: Option<u32>,
    /// Number of sets, or the upper end of a κ sweep
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m: Option<i128>,
    /// Number of allowed disjoint pairs, or set size for `unrank`
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k: Option<i128>,
    /// First family size in the pair inequality
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<i128>,
    /// Exactly k disjoint pairs instead of at most k
    #[arg(long, global = true)]
    pub exact: bool,
    #[arg(long, global = true, value_enum, default_value = "pretty")]
    pub format: OutputFormat,
    /// Worker threads for sweeps (default: available parallelism)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write results to FILE instead of standard output
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<std::path::PathBuf>,
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to standard output or `--out`.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match SweepConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut stderr = io::stderr();
    match &config.out {
        Some(path) => match File::create(path) {
            Ok(mut f) => run(&config, &mut f, &mut stderr),
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", path.display());
                EXIT_USAGE
            }
        },
        None => run(&config, &mut io::stdout().lock(), &mut stderr),
    }
}

/// Runs one parsed command. Results are written to `out`, progress and error
/// messages to `err`; the return value is the process exit code.
pub fn run(config: &SweepConfig, out: &mut dyn Write, err: &mut (dyn Write + Send)) -> i32 {
    let outcome = match config.jobs {
        Some(0) => Err(Error::precondition("--jobs must be positive")),
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| dispatch(config, err)),
            Err(e) => Err(Error::precondition(format!("cannot start {jobs} workers: {e}"))),
        },
        None => dispatch(config, err),
    };
    match outcome {
        Ok((text, code)) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn need<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::precondition(format!("missing required flag --{flag}")))
}

fn nonneg(value: i128, flag: &str) -> Result<ExactInt> {
    if value < 0 {
        Err(Error::out_of_range("flag value", value, format!("--{flag} >= 0")))
    } else {
        Ok(value)
    }
}

fn small(value: i128, flag: &str) -> Result<u32> {
    u32::try_from(value).map_err(|_| Error::out_of_range("flag value", value, format!("--{flag} in 0..=2^32-1")))
}

/// Renders a scalar result in the chosen format.
fn scalar(config: &SweepConfig, name: &str, value: ExactInt, fields: Value) -> String {
    match config.format {
        OutputFormat::Pretty => format!("{value}\n"),
        OutputFormat::Tsv => format!("{name}\n{value}\n"),
        OutputFormat::Json => {
            let mut obj = fields;
            obj[name] = int_value(value);
            format!("{}\n", serde_json::to_string_pretty(&obj).expect("serializable"))
        }
    }
}

fn dispatch(config: &SweepConfig, err: &mut (dyn Write + Send)) -> Result<(String, i32)> {
    let ok = |text: String| Ok((text, EXIT_OK));
    match &config.command {
        Command::Kappa | Command::KappaStar => {
            let star = matches!(config.command, Command::KappaStar);
            let r = need(config.r, "r")?;
            let m = nonneg(need(config.m, "m")?, "m")?;
            if config.format == OutputFormat::Tsv {
                return ok(KappaTable::build(r, m)?.to_tsv());
            }
            let (name, value) = if star { ("kappa_star", kappa_star(r, m)?) } else { ("kappa", kappa(r, m)?) };
            ok(scalar(config, name, value, json!({ "r": r, "m": int_value(m) })))
        }
        Command::Cascade => {
            let r = need(config.r, "r")?;
            let m = nonneg(need(config.m, "m")?, "m")?;
            let c = cascade_rep(m, r)?;
            let text = match config.format {
                OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&cascade_json(&c)).unwrap()),
                OutputFormat::Tsv => {
                    let rows: String = c.terms().iter().map(|(a, i)| format!("{a}\t{i}\n")).collect();
                    format!("a\ti\n{rows}")
                }
                OutputFormat::Pretty => {
                    let terms: Vec<String> = c.terms().iter().map(|(a, i)| format!("C({a},{i})")).collect();
                    let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                    format!("{m} = {rhs}\n")
                }
            };
            ok(text)
        }
        Command::ShadowMin => {
            let r = need(config.r, "r")?;
            let m = nonneg(need(config.m, "m")?, "m")?;
            ok(scalar(config, "shadow_min", kk_shadow_min(m, r)?, json!({ "r": r, "m": int_value(m) })))
        }
        Command::Rank { set } => {
            let s = Subset::parse(set, config.n.unwrap_or(MAX_GROUND))?;
            ok(scalar(config, "rank", rank(&s), json!({ "set": s.to_string() })))
        }
        Command::Unrank => {
            let n = need(config.n, "n")?;
            let k = small(need(config.k, "k")?, "k")?;
            let m = need(config.m, "m")?;
            let s = unrank(m, n, k)?;
            let text = match config.format {
                OutputFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(
                        &json!({ "n": n, "k": k, "m": int_value(m), "set": s.to_string() })
                    )
                    .unwrap()
                ),
                OutputFormat::Tsv => format!("set\n{s}\n"),
                OutputFormat::Pretty => format!("{s}\n"),
            };
            ok(text)
        }
        Command::Bound => {
            let n = need(config.n, "n")?;
            let k = need(config.k, "k")?;
            ok(scalar(config, "bound", theorem25_bound(n, k)?, json!({ "n": n, "k": int_value(k) })))
        }
        Command::Extremal => {
            let n = need(config.n, "n")?;
            let k = need(config.k, "k")?;
            let c = construct_extremal(n, k)?;
            let text = match config.format {
                OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&c.to_json()).unwrap()),
                OutputFormat::Tsv => {
                    let mut rows = String::from("family\tset\n");
                    for s in c.family_a.iter() {
                        rows.push_str(&format!("A\t{s}\n"));
                    }
                    for s in c.family_b.iter() {
                        rows.push_str(&format!("B\t{s}\n"));
                    }
                    rows
                }
                OutputFormat::Pretty => {
                    let case = match c.case_tag {
                        CaseTag::CaseI => "two middle levels".to_string(),
                        CaseTag::CaseII => format!("last segment of size {}", c.chosen_m.unwrap_or(0)),
                    };
                    format!(
                        "case: {case}\nA ({}): {}\nB ({}): {}\ntotal: {}\n",
                        c.family_a.len(),
                        c.family_a,
                        c.family_b.len(),
                        c.family_b,
                        c.total()
                    )
                }
            };
            ok(text)
        }
        Command::Verify { check } => verify(config, *check, err),
    }
}

fn verify(config: &SweepConfig, check: VerifyCheck, err: &mut (dyn Write + Send)) -> Result<(String, i32)> {
    let mut progress = |line: &str| {
        let _ = writeln!(err, "{line}");
    };
    let reports: Vec<VerificationReport> = match check {
        VerifyCheck::DIdentities => vec![verify_d_identities(config.n.unwrap_or(24), config.r.unwrap_or(12))?],
        VerifyCheck::Kkt => {
            let n = config.n.unwrap_or(10);
            let samples = config.m.map(|m| nonneg(m, "m")).transpose()?.unwrap_or(KKT_SAMPLES as i128);
            vec![
                verify_kkt_tightness(n)?,
                verify_kkt_lower_bound(samples as usize, n.min(9), KKT_SEED)?,
            ]
        }
        VerifyCheck::Lieby => vec![verify_lieby_duality(need(config.n, "n")?)?],
        VerifyCheck::Clements => {
            let n = need(config.n, "n")?;
            match config.k {
                Some(k) => vec![verify_clements_minimality(n, small(k, "k")?)?],
                None => (1..n).map(|k| verify_clements_minimality(n, k)).collect::<Result<_>>()?,
            }
        }
        VerifyCheck::Prop22 | VerifyCheck::Thm23 => {
            let r = need(config.r, "r")?;
            let m_max = match config.m {
                Some(m) => nonneg(m, "m")?,
                None => binom(2 * r, r as i64)?.max(negativity_threshold(r)?),
            };
            if check == VerifyCheck::Prop22 {
                vec![verify_prop22(r, m_max)?]
            } else {
                vec![verify_thm23(r, m_max)?]
            }
        }
        VerifyCheck::Prop24 => vec![verify_prop24(need(config.n, "n")?)?],
        VerifyCheck::Lemma38 => vec![verify_lemma38(need(config.n, "n")?)?],
        VerifyCheck::Thm25Brute => vec![verify_thm25_brute(config.n.unwrap_or(4))?],
        VerifyCheck::Thm26 => {
            let n = config.n.unwrap_or(4);
            match config.k {
                Some(k) => vec![verify_thm26_structure(n, k)?],
                None => {
                    let (_, big_m) = middle_level(n)?;
                    (0..=big_m).map(|k| verify_thm26_structure(n, k)).collect::<Result<_>>()?
                }
            }
        }
        VerifyCheck::Sperner => {
            let n = config.n.unwrap_or(4);
            vec![sperner_max_check(n)?, verify_sperner_operations(n, 500, KKT_SEED)?]
        }
        VerifyCheck::Conjecture51 => return conjecture(config, &mut progress),
        VerifyCheck::All => {
            let suite = run_all_with_progress(
                config.n.unwrap_or(DEFAULT_N_MAX),
                config.r.unwrap_or(DEFAULT_R_MAX),
                &mut progress,
            )?;
            let report = suite.to_report();
            let code = if suite.passed() { EXIT_OK } else { EXIT_FAILED };
            let text = match config.format {
                OutputFormat::Pretty => {
                    let mut text = String::new();
                    for e in &suite.entries {
                        let kind = match e.kind {
                            crate::suite::CheckKind::Theorem => "",
                            crate::suite::CheckKind::Conjecture => " [conjecture, not gating]",
                        };
                        text.push_str(&format!("{}{kind}\n", e.report.summary_line()));
                    }
                    text.push_str(&format!("{}\n", report.summary_line()));
                    text
                }
                _ => render_reports(config.format, std::slice::from_ref(&report)),
            };
            return Ok((text, code));
        }
    };
    for r in &reports {
        progress(&r.summary_line());
    }
    let code = if reports.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_FAILED };
    Ok((render_reports(config.format, &reports), code))
}

fn conjecture(config: &SweepConfig, progress: &mut dyn FnMut(&str)) -> Result<(String, i32)> {
    let n = need(config.n, "n")?;
    let (_, big_m) = middle_level(n)?;
    if let (Some(a), Some(k)) = (config.a, config.k) {
        return conjecture_instance(config, n, a, k);
    }
    let (found, report) = if config.exact {
        (check_conjecture51_exact_k(n)?, conjecture51_exact_k_report(n)?)
    } else {
        (check_conjecture51(n)?, conjecture51_report(n)?)
    };
    progress(&report.summary_line());
    let code = if found.is_empty() { EXIT_OK } else { EXIT_FAILED };
    let text = match config.format {
        OutputFormat::Pretty if found.is_empty() => format!("no counterexample in [0,{big_m}]²\n"),
        OutputFormat::Pretty => {
            let mut text = format!("{} counterexamples in [0,{big_m}]² (a, k):\n", found.len());
            for (a, k) in &found {
                text.push_str(&format!("  ({a}, {k})\n"));
            }
            text
        }
        OutputFormat::Tsv => {
            let rows: String = found.iter().map(|(a, k)| format!("{a}\t{k}\n")).collect();
            format!("a\tk\n{rows}")
        }
        OutputFormat::Json => render_reports(config.format, std::slice::from_ref(&report)),
    };
    Ok((text, code))
}

/// One `(a, k)` instance of the pair inequality, printed as both sides.
fn conjecture_instance(config: &SweepConfig, n: u32, a: ExactInt, k: ExactInt) -> Result<(String, i32)> {
    let (r, big_m) = middle_level(n)?;
    for (value, flag) in [(a, "a"), (k, "k")] {
        if !(0..=big_m).contains(&value) {
            return Err(Error::out_of_range("flag value", value, format!("--{flag} in 0..={big_m}")));
        }
    }
    let table = KappaTable::build(r, big_m)?;
    let lhs = table.kappa(big_m)? + table.kappa(k)?;
    let rhs = if config.exact {
        if a < k {
            return Err(Error::precondition("exactly k pairs needs --a >= --k"));
        }
        (k..=(k + big_m - a).min(big_m))
            .map(|j| table.kappa(j))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .expect("nonempty range")
            + table.kappa(a)?
    } else {
        table.kappa(a)? + table.kappa_star_capped(k + big_m - a, big_m)?
    };
    let holds = lhs <= rhs;
    let text = match config.format {
        OutputFormat::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "n": n, "a": int_value(a), "k": int_value(k),
                "lhs": int_value(lhs), "rhs": int_value(rhs), "holds": holds,
            }))
            .unwrap()
        ),
        OutputFormat::Tsv => format!("lhs\trhs\tholds\n{lhs}\t{rhs}\t{holds}\n"),
        OutputFormat::Pretty => format!("{lhs} <= {rhs}: {holds}\n"),
    };
    Ok((text, if holds { EXIT_OK } else { EXIT_FAILED }))
}

fn render_reports(format: OutputFormat, reports: &[VerificationReport]) -> String {
    match format {
        OutputFormat::Json => {
            let body = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(reports)
            };
            format!("{}\n", body.expect("reports are serializable"))
        }
        OutputFormat::Tsv => {
            let mut text = String::from("check\tpassed\tinstances\tviolations\n");
            for r in reports {
                let instances = r.params.get("instances").cloned().unwrap_or(Value::Null);
                text.push_str(&format!("{}\t{}\t{}\t{}\n", r.check, r.passed, instances, r.violations.len()));
            }
            text
        }
        OutputFormat::Pretty => {
            let mut text = String::new();
            for r in reports {
                text.push_str(&r.summary_line());
                text.push('\n');
                for v in r.violations.iter().take(20) {
                    text.push_str(&format!("  {}: {}\n", v.case, v.detail));
                }
                if r.violations.len() > 20 {
                    text.push_str(&format!("  ... {} more\n", r.violations.len() - 20));
                }
            }
            text
        }
    }
}
