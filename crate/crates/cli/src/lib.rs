//! Command-line front end: parse a run configuration, dispatch to the
//! verification battery or to one of the smaller inspection commands, and
//! render the results as text, JSON, or CSV with deterministic bytes.
//!
//! Exit codes are part of the contract: 0 when every requested check
//! passes, 1 when some mathematical check comes back false, 2 on usage
//! errors (bad primes, bad ranges, malformed flags), and 3 on internal
//! errors such as an oracle disagreement or an unstable valuation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use moonshine_core::arith::is_prime;
use moonshine_core::deligne::{
    a_n_lower_bound, alpha_class, congruence_mod_p2, congruence_mod_p3, fit_is_stable,
    fit_partial_fractions,
};
use moonshine_core::error::Error as CoreError;
use moonshine_core::etaforms::{
    hauptmodul_jn, j1_cached, j1_series, jn_plus_series, sn_series, tn_series,
};
use moonshine_core::monster::{
    faber_discrepancy_probe, verify_primes, FaberProbe, PrimeReport, VerifyConfig,
};
use moonshine_core::qseries::QSeries;
use moonshine_core::supersingular::{
    minimal_aut_order, ss_j1_row, ss_j1_table, ss_j_set, ss_j_set_fast, Table2Row,
};

/// Version stamp of the JSON payload layout.
const SCHEMA_VERSION: u32 = 1;

/// Largest prime accepted without `--allow-large`. Beyond this the
/// supersingular point counts and the series precision get expensive
/// enough that the caller should opt in explicitly.
const COST_GUARD_LIMIT: u64 = 271;

#[derive(Parser)]
#[command(
    name = "moonshine",
    version,
    about = "Exact-arithmetic checks tying genus-zero hauptmoduln and supersingular loci to the monster order"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the per-prime verification battery and render the reports.
    Verify(VerifyArgs),
    /// Print the q-expansion of one of the built-in series.
    Series(SeriesArgs),
    /// Compute the supersingular locus for one prime.
    Ss(SsArgs),
    /// Fit the partial-fraction expansion for one prime and check it.
    Deligne(DeligneArgs),
    /// Report the candidate readings of the Faber-polynomial discrepancy.
    ProbeFaber(ProbeFaberArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn format_name(format: Format) -> &'static str {
    match format {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Primes to verify: a single prime, a comma list, or an inclusive
    /// range `a..b` meaning every prime in the interval.
    #[arg(long, default_value = "2..71")]
    primes: String,
    /// Positive coefficients inspected per valuation; every valuation is
    /// re-taken on the doubled window before it is trusted.
    #[arg(long, default_value_t = 60)]
    window: i64,
    /// p-adic precision of the partial-fraction fit.
    #[arg(long = "k", default_value_t = 4)]
    k: u32,
    /// Pole-order budget of the fit.
    #[arg(long, default_value_t = 6)]
    nmax: u32,
    /// Floor for the shared series precision, when larger than the
    /// demand derived from the primes and the window.
    #[arg(long)]
    prec: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lift the cost guard on primes above 271.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesName {
    /// The level-one function normalised to constant term zero.
    J1,
    /// The eta-quotient hauptmodul t_N.
    T,
    /// The correction series s_N.
    S,
    /// The normalised hauptmodul J_N = t_N + d.
    Jn,
    /// The Fricke-symmetrised combination J_N + s_N.
    Jplus,
}

#[derive(Args)]
struct SeriesArgs {
    /// Which series to print.
    #[arg(value_enum)]
    name: SeriesName,
    /// Level N; required for every series except j1.
    #[arg(long)]
    level: Option<u64>,
    /// Exclusive truncation order of the printed expansion.
    #[arg(long, default_value_t = 12)]
    prec: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the expansion here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SsArgs {
    /// The characteristic.
    #[arg(long)]
    prime: u64,
    /// Skip the point-counting cross-check and trust the Hasse roots.
    #[arg(long)]
    fast: bool,
    /// Lift the cost guard on primes above 271.
    #[arg(long)]
    allow_large: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the locus here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DeligneArgs {
    /// The prime whose fit to compute; needs genus zero at level p.
    #[arg(long)]
    prime: u64,
    /// p-adic precision of the fit.
    #[arg(long = "k", default_value_t = 4)]
    k: u32,
    /// Pole-order budget of the fit.
    #[arg(long, default_value_t = 6)]
    nmax: u32,
    /// Positive coefficients inspected by the congruence checks.
    #[arg(long, default_value_t = 60)]
    window: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the fit here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeFaberArgs {
    /// The prime to probe; supported up to 31.
    #[arg(long)]
    prime: u64,
    /// Positive coefficients inspected per valuation.
    #[arg(long, default_value_t = 60)]
    window: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the readings here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure that terminates the command: the exit code plus the message
/// printed to standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn from_core(err: CoreError) -> Failure {
    let code = match err {
        CoreError::InvalidArgument(_) => 2,
        _ => 3,
    };
    Failure {
        code,
        message: err.to_string(),
    }
}

/// Parses an argument vector (including the program name) and runs the
/// selected command, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(command: &Command) -> Result<i32, Failure> {
    match command {
        Command::Verify(args) => {
            let (rendered, all_pass) = build_verify(args)?;
            emit(&rendered, args.out.as_deref())?;
            Ok(i32::from(!all_pass))
        }
        Command::Series(args) => {
            let rendered = build_series(args)?;
            emit(&rendered, args.out.as_deref())?;
            Ok(0)
        }
        Command::Ss(args) => {
            let rendered = build_ss(args)?;
            emit(&rendered, args.out.as_deref())?;
            Ok(0)
        }
        Command::Deligne(args) => {
            let (rendered, ok) = build_deligne(args)?;
            emit(&rendered, args.out.as_deref())?;
            Ok(i32::from(!ok))
        }
        Command::ProbeFaber(args) => {
            let rendered = build_probe(args)?;
            emit(&rendered, args.out.as_deref())?;
            Ok(0)
        }
    }
}

fn emit(rendered: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, rendered)
            .map_err(|err| usage(format!("cannot write {}: {err}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

/// Parses the `--primes` argument. Explicitly listed values must each be
/// prime; a range quietly selects the primes inside it, so `24..28` is an
/// empty (but valid) request.
fn parse_primes(spec: &str) -> Result<Vec<u64>, Failure> {
    let spec = spec.trim();
    if let Some((lo_text, hi_text)) = spec.split_once("..") {
        let hi_text = hi_text.trim();
        let hi_text = hi_text.strip_prefix('=').unwrap_or(hi_text).trim();
        let lo: u64 = lo_text
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad range start {lo_text:?} in --primes")))?;
        let hi: u64 = hi_text
            .parse()
            .map_err(|_| usage(format!("bad range end {hi_text:?} in --primes")))?;
        if lo > hi {
            return Err(usage(format!("backwards prime range {lo}..{hi}")));
        }
        Ok((lo..=hi).filter(|&n| is_prime(n)).collect())
    } else {
        let mut primes = Vec::new();
        for part in spec.split(',') {
            let part = part.trim();
            let p: u64 = part
                .parse()
                .map_err(|_| usage(format!("bad prime {part:?} in --primes")))?;
            if !is_prime(p) {
                return Err(usage(format!("{p} is not prime")));
            }
            primes.push(p);
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(primes)
    }
}

fn check_cost_guard(primes: &[u64], allow_large: bool) -> Result<(), Failure> {
    if allow_large {
        return Ok(());
    }
    if let Some(&p) = primes.iter().find(|&&p| p > COST_GUARD_LIMIT) {
        return Err(usage(format!(
            "p = {p} is beyond the cost guard at {COST_GUARD_LIMIT}; pass --allow-large to proceed"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ConfigEcho {
    primes: Vec<u64>,
    window: i64,
    #[serde(rename = "K")]
    k: u32,
    nmax: u32,
    format: &'static str,
}

#[derive(Serialize)]
struct Payload<'a> {
    schema_version: u32,
    config_echo: &'a ConfigEcho,
    results: &'a [PrimeReport],
}

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|err| Failure {
        code: 3,
        message: format!("serialisation failed: {err}"),
    })?;
    text.push('\n');
    Ok(text)
}

fn build_verify(args: &VerifyArgs) -> Result<(String, bool), Failure> {
    let primes = parse_primes(&args.primes)?;
    check_cost_guard(&primes, args.allow_large)?;
    let config = VerifyConfig {
        window: args.window,
        k: args.k,
        nmax: args.nmax,
    };
    config.validate().map_err(from_core)?;
    if let Some(prec) = args.prec {
        j1_cached(prec).map_err(from_core)?;
    }
    let reports = verify_primes(&primes, &config).map_err(from_core)?;
    let all_pass = reports.iter().all(|r| r.pass);
    let echo = ConfigEcho {
        primes,
        window: config.window,
        k: config.k,
        nmax: config.nmax,
        format: format_name(args.format),
    };
    let rendered = match args.format {
        Format::Json => to_pretty_json(&Payload {
            schema_version: SCHEMA_VERSION,
            config_echo: &echo,
            results: &reports,
        })?,
        Format::Csv => render_csv(&reports),
        Format::Text => render_text(&reports, &echo),
    };
    Ok((rendered, all_pass))
}

const CSV_HEADER: &str = "p,vp_monster,term_plus,term_p,term_p2,rhs11,rhs12,m_p,s1,s2_pairs,\
                          table2_row,deligne_K,deligne_a1_valuations,deligne_residual_valuation,\
                          r11,r13a,r13b,r13c,faber_probe,expected_discrepancy,pass";

fn csv_cell(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn join_u64(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn table2_cell(row: &Table2Row) -> String {
    let col = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    format!(
        "{}|{}|{}",
        col(row.col_744),
        col(row.col_984),
        join_u64(&row.others)
    )
}

/// The flat projection of the reports: one row per prime, columns in the
/// same order as the JSON fields, lists joined with `;` inside a cell.
fn render_csv(reports: &[PrimeReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let s2 = r
            .s2_pairs
            .iter()
            .map(|((a, b), (c, d))| format!("{a}:{b}~{c}:{d}"))
            .collect::<Vec<_>>()
            .join(";");
        let (fit_k, fit_a1, fit_residual) = match &r.deligne {
            Some(d) => (
                d.k.to_string(),
                d.a1_valuations
                    .iter()
                    .map(|(alpha, got, expected)| format!("{alpha}:{got}:{expected}"))
                    .collect::<Vec<_>>()
                    .join(";"),
                d.residual_valuation.to_string(),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        let cells = [
            r.p.to_string(),
            r.vp_monster.to_string(),
            r.term_plus.to_string(),
            r.term_p.to_string(),
            r.term_p2.to_string(),
            r.rhs11.to_string(),
            r.rhs12.to_string(),
            r.m_p.to_string(),
            join_u64(&r.s1),
            s2,
            r.table2_row.as_ref().map(table2_cell).unwrap_or_default(),
            fit_k,
            fit_a1,
            fit_residual,
            r.remarks.r11.clone(),
            r.remarks.r13a.clone(),
            r.remarks.r13b.clone(),
            r.remarks.r13c.clone(),
            r.remarks.faber_probe.clone(),
            r.expected_discrepancy.to_string(),
            r.pass.to_string(),
        ];
        let row = cells
            .iter()
            .map(|cell| csv_cell(cell))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn render_text(reports: &[PrimeReport], echo: &ConfigEcho) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "verification of {} prime(s): window {}, K {}, nmax {}",
        reports.len(),
        echo.window,
        echo.k,
        echo.nmax
    );
    for r in reports {
        let verdict = if r.pass { "pass" } else { "FAIL" };
        let _ = writeln!(out);
        let _ = writeln!(out, "p = {} [{verdict}]", r.p);
        let _ = writeln!(
            out,
            "  exponent {} | summands {} + {} + {} = {} | locus side {}",
            r.vp_monster, r.term_plus, r.term_p, r.term_p2, r.rhs11, r.rhs12
        );
        let _ = writeln!(
            out,
            "  m_p = {} | s1 = {:?} | conjugate pairs: {}",
            r.m_p,
            r.s1,
            r.s2_count()
        );
        if let Some(row) = &r.table2_row {
            let col = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
            let _ = writeln!(
                out,
                "  J_1-values: -744 -> {}, 984 -> {}, others {:?}",
                col(row.col_744),
                col(row.col_984),
                row.others
            );
        }
        if let Some(d) = &r.deligne {
            let _ = writeln!(
                out,
                "  fit: K = {}, residual valuation {}, A_1 valuations {:?}",
                d.k, d.residual_valuation, d.a1_valuations
            );
        }
        let _ = writeln!(out, "  r11: {}", r.remarks.r11);
        let _ = writeln!(out, "  r13a: {}", r.remarks.r13a);
        let _ = writeln!(out, "  r13b: {}", r.remarks.r13b);
        let _ = writeln!(out, "  r13c: {}", r.remarks.r13c);
        let _ = writeln!(out, "  faber probe: {}", r.remarks.faber_probe);
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    let _ = writeln!(out);
    let _ = writeln!(out, "{passed} of {} passed", reports.len());
    out
}

#[derive(Serialize)]
struct SeriesView {
    name: String,
    lo: i64,
    prec: i64,
    /// `[exponent, coefficient]` pairs; coefficients as decimal strings.
    coeffs: Vec<(i64, String)>,
}

fn series_view(label: &str, series: &QSeries) -> SeriesView {
    let coeffs = (series.lo()..series.prec())
        .map(|n| {
            let c = series
                .coeff(n)
                .expect("coefficient below the truncation order");
            (n, c.to_string())
        })
        .collect();
    SeriesView {
        name: label.to_string(),
        lo: series.lo(),
        prec: series.prec(),
        coeffs,
    }
}

fn build_series(args: &SeriesArgs) -> Result<String, Failure> {
    if args.format == Format::Csv {
        return Err(usage("csv output is only defined for verify reports"));
    }
    let (label, series) = if args.name == SeriesName::J1 {
        if args.level.is_some() {
            return Err(usage("j1 is the level-one function; drop --level"));
        }
        ("J_1".to_string(), j1_series(args.prec).map_err(from_core)?)
    } else {
        let level = args
            .level
            .ok_or_else(|| usage("this series needs --level"))?;
        let series = match args.name {
            SeriesName::T => tn_series(level, args.prec),
            SeriesName::S => sn_series(level, args.prec),
            SeriesName::Jn => hauptmodul_jn(level, args.prec),
            SeriesName::Jplus => jn_plus_series(level, args.prec),
            SeriesName::J1 => unreachable!("handled above"),
        }
        .map_err(from_core)?;
        let prefix = match args.name {
            SeriesName::T => "t",
            SeriesName::S => "s",
            SeriesName::Jn => "J",
            SeriesName::Jplus => "J+",
            SeriesName::J1 => unreachable!("handled above"),
        };
        (format!("{prefix}_{level}"), series)
    };
    match args.format {
        Format::Json => to_pretty_json(&series_view(&label, &series)),
        _ => Ok(render_series_text(&label, &series)),
    }
}

fn render_series_text(label: &str, series: &QSeries) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{label} up to q^{} (exclusive)", series.prec());
    for n in series.lo()..series.prec() {
        let c = series
            .coeff(n)
            .expect("coefficient below the truncation order");
        let _ = writeln!(out, "q^{n:<6} {c}");
    }
    out
}

#[derive(Serialize)]
struct LocusView {
    p: u64,
    m_p: u64,
    s1: Vec<u64>,
    s2_pairs: Vec<((u64, u64), (u64, u64))>,
    table2_row: Option<Table2Row>,
    /// Whether the locus went through the point-counting cross-check.
    checked: bool,
}

fn build_ss(args: &SsArgs) -> Result<String, Failure> {
    if args.format == Format::Csv {
        return Err(usage("csv output is only defined for verify reports"));
    }
    let p = args.prime;
    if !is_prime(p) {
        return Err(usage(format!("{p} is not prime")));
    }
    check_cost_guard(&[p], args.allow_large)?;
    let view = if p <= 3 {
        LocusView {
            p,
            m_p: minimal_aut_order(p).map_err(from_core)?,
            s1: vec![0],
            s2_pairs: Vec::new(),
            table2_row: Some(ss_j1_table(p).map_err(from_core)?),
            checked: false,
        }
    } else {
        let data = if args.fast {
            ss_j_set_fast(p)
        } else {
            ss_j_set(p)
        }
        .map_err(from_core)?;
        let s2_pairs = data
            .s2
            .iter()
            .map(|(x, y)| ((x.a, x.b), (y.a, y.b)))
            .collect();
        let table2_row = if data.s2.is_empty() {
            Some(ss_j1_row(&data).map_err(from_core)?)
        } else {
            None
        };
        LocusView {
            p,
            m_p: data.m_p,
            s1: data.s1.clone(),
            s2_pairs,
            table2_row,
            checked: !args.fast,
        }
    };
    match args.format {
        Format::Json => to_pretty_json(&view),
        _ => Ok(render_ss_text(&view)),
    }
}

fn render_ss_text(view: &LocusView) -> String {
    let mut out = String::new();
    let method = if view.checked {
        "point counts cross-checked"
    } else {
        "Hasse roots only"
    };
    let _ = writeln!(out, "supersingular locus for p = {} ({method})", view.p);
    let _ = writeln!(out, "  m_p = {}", view.m_p);
    let _ = writeln!(out, "  rational j-invariants: {:?}", view.s1);
    if view.s2_pairs.is_empty() {
        let _ = writeln!(out, "  conjugate pairs: none");
    } else {
        let pairs = view
            .s2_pairs
            .iter()
            .map(|((a, b), (c, d))| format!("({a}, {b}) ~ ({c}, {d})"))
            .collect::<Vec<_>>()
            .join("; ");
        let _ = writeln!(
            out,
            "  conjugate pairs (coordinates in the 1, t basis): {pairs}"
        );
    }
    match &view.table2_row {
        Some(row) => {
            let col = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
            let _ = writeln!(
                out,
                "  J_1-values: -744 -> {}, 984 -> {}, others {:?}",
                col(row.col_744),
                col(row.col_984),
                row.others
            );
        }
        None => {
            let _ = writeln!(out, "  J_1-values: none (locus not rational over GF(p))");
        }
    }
    out
}

#[derive(Serialize)]
struct FitView {
    p: u64,
    #[serde(rename = "K")]
    k: u32,
    nmax: u32,
    alpha_hats: Vec<u64>,
    /// `(alpha_hat, n, v_p(A_n))`; the valuation is null when the residue
    /// vanishes mod p^K, i.e. when all that is known is `v_p >= K`.
    valuations: Vec<(u64, u32, Option<u64>)>,
    residual_valuation: u64,
    bounds_ok: bool,
    /// v_p of the first congruence residual; null when it vanishes on the
    /// whole window.
    congruence_p2: Option<u64>,
    congruence_p3: Option<u64>,
    stable: bool,
    ok: bool,
}

fn build_deligne(args: &DeligneArgs) -> Result<(String, bool), Failure> {
    if args.format == Format::Csv {
        return Err(usage("csv output is only defined for verify reports"));
    }
    let p = args.prime;
    if !is_prime(p) {
        return Err(usage(format!("{p} is not prime")));
    }
    if args.window < 20 {
        return Err(usage(format!(
            "window must be at least 20, got {}",
            args.window
        )));
    }
    let fit = fit_partial_fractions(p, args.k, args.nmax).map_err(from_core)?;
    let mut valuations = Vec::new();
    let mut sharp = true;
    for &alpha in &fit.alpha_hats {
        for n in 1..=fit.nmax {
            valuations.push((alpha, n, fit.a_valuation(alpha, n)));
        }
        let expected = a_n_lower_bound(alpha_class(alpha, p), 1, p);
        sharp &= fit.a_valuation(alpha, 1) == Some(expected);
    }
    let c2 = congruence_mod_p2(p, &fit, args.window).map_err(from_core)?;
    let c3 = congruence_mod_p3(p, &fit, args.window).map_err(from_core)?;
    let stable = fit_is_stable(p, fit.k, args.nmax).map_err(from_core)?;
    let ok = sharp
        && fit.bounds_ok
        && fit.residual_valuation >= u64::from(fit.k)
        && c2.value().map_or(true, |v| v >= 2)
        && c3.value().map_or(true, |v| v >= 3)
        && stable;
    let view = FitView {
        p,
        k: fit.k,
        nmax: fit.nmax,
        alpha_hats: fit.alpha_hats.clone(),
        valuations,
        residual_valuation: fit.residual_valuation,
        bounds_ok: fit.bounds_ok,
        congruence_p2: c2.value(),
        congruence_p3: c3.value(),
        stable,
        ok,
    };
    let rendered = match args.format {
        Format::Json => to_pretty_json(&view)?,
        _ => render_fit_text(&view),
    };
    Ok((rendered, ok))
}

fn render_fit_text(view: &FitView) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "partial-fraction fit for p = {}: K = {}, nmax = {}",
        view.p, view.k, view.nmax
    );
    for &alpha in &view.alpha_hats {
        let cells = view
            .valuations
            .iter()
            .filter(|(a, _, _)| *a == alpha)
            .map(|(_, n, v)| match v {
                Some(v) => format!("n={n}: {v}"),
                None => format!("n={n}: >={}", view.k),
            })
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(out, "  alpha {alpha}: {cells}");
    }
    let _ = writeln!(
        out,
        "  residual valuation {} | class bounds {}",
        view.residual_valuation,
        if view.bounds_ok {
            "respected"
        } else {
            "VIOLATED"
        }
    );
    let congruence = |v: Option<u64>| match v {
        Some(v) => v.to_string(),
        None => "vanished on the window".to_string(),
    };
    let _ = writeln!(
        out,
        "  congruence residual mod p^2: v_p {} | mod p^3: v_p {}",
        congruence(view.congruence_p2),
        congruence(view.congruence_p3)
    );
    let _ = writeln!(
        out,
        "  refit with a larger pole budget {}",
        if view.stable { "agrees" } else { "DISAGREES" }
    );
    let _ = writeln!(
        out,
        "  verdict: {}",
        if view.ok { "ok" } else { "MISMATCH" }
    );
    out
}

fn build_probe(args: &ProbeFaberArgs) -> Result<String, Failure> {
    if args.format == Format::Csv {
        return Err(usage("csv output is only defined for verify reports"));
    }
    let probe = faber_discrepancy_probe(args.prime, args.window).map_err(from_core)?;
    match args.format {
        Format::Json => to_pretty_json(&probe),
        _ => Ok(render_probe_text(&probe, args.window)),
    }
}

fn render_probe_text(probe: &FaberProbe, window: i64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Faber discrepancy readings for p = {} (window {window})",
        probe.p
    );
    let _ = writeln!(
        out,
        "  normalized (constant dropped): v_p = {}",
        probe.normalized
    );
    let _ = writeln!(
        out,
        "  with the constant kept:        v_p = {}",
        probe.with_constant
    );
    let _ = writeln!(
        out,
        "  j|V_p - j^p:                   v_p = {}",
        probe.kronecker
    );
    let _ = writeln!(out, "  m_p = {}, m_p / 2 = {}", probe.m_p, probe.m_p / 2);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_specs_parse() {
        assert_eq!(parse_primes("5").unwrap(), vec![5]);
        assert_eq!(parse_primes("2,3,31,3").unwrap(), vec![2, 3, 31]);
        assert_eq!(parse_primes("2..13").unwrap(), vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(parse_primes("2..=13").unwrap(), vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(parse_primes("24..28").unwrap(), Vec::<u64>::new());
        assert!(parse_primes("4").is_err());
        assert!(parse_primes("x..7").is_err());
        assert!(parse_primes("7..2").is_err());
        assert!(parse_primes("").is_err());
    }

    #[test]
    fn the_cost_guard_blocks_large_primes() {
        assert!(check_cost_guard(&[2, 271], false).is_ok());
        assert!(check_cost_guard(&[277], false).is_err());
        assert!(check_cost_guard(&[277], true).is_ok());
    }

    #[test]
    fn csv_cells_are_quoted_only_when_needed() {
        assert_eq!(csv_cell("plain"), "plain");
        assert_eq!(csv_cell("a,b"), "\"a,b\"");
        assert_eq!(csv_cell("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_cell("0|0|"), "0|0|");
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run(["moonshine", "verify", "--primes", "4"]), 2);
        assert_eq!(
            run(["moonshine", "verify", "--primes", "5", "--window", "10"]),
            2
        );
        assert_eq!(run(["moonshine", "verify", "--primes", "277"]), 2);
        assert_eq!(run(["moonshine", "nonsense"]), 2);
        assert_eq!(run(["moonshine", "series", "j1", "--level", "3"]), 2);
        assert_eq!(run(["moonshine", "series", "t", "--prec", "5"]), 2);
        assert_eq!(run(["moonshine", "ss", "--prime", "6"]), 2);
        assert_eq!(run(["moonshine", "probe-faber", "--prime", "37"]), 2);
        assert_eq!(
            run(["moonshine", "verify", "--primes", "5", "--format", "yaml"]),
            2
        );
    }

    #[test]
    fn help_exits_cleanly() {
        assert_eq!(run(["moonshine", "--help"]), 0);
        assert_eq!(run(["moonshine", "verify", "--help"]), 0);
    }

    #[test]
    fn series_renders_to_a_file() {
        let path =
            std::env::temp_dir().join(format!("moonshine-series-{}.txt", std::process::id()));
        let code = run([
            "moonshine",
            "series",
            "t",
            "--level",
            "2",
            "--prec",
            "4",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let text = fs::read_to_string(&path).unwrap();
        fs::remove_file(&path).ok();
        assert!(text.starts_with("t_2 up to q^4"));
        assert!(text.contains("q^-1"));
        assert!(text.contains("276"));
    }

    #[test]
    fn series_json_has_string_coefficients() {
        let path =
            std::env::temp_dir().join(format!("moonshine-series-{}.json", std::process::id()));
        let code = run([
            "moonshine",
            "series",
            "j1",
            "--prec",
            "3",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let text = fs::read_to_string(&path).unwrap();
        fs::remove_file(&path).ok();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["name"], "J_1");
        assert_eq!(value["lo"], -1);
        assert_eq!(value["coeffs"][0][0], -1);
        assert_eq!(value["coeffs"][0][1], "1");
        assert_eq!(value["coeffs"][1][1], "0");
        assert_eq!(value["coeffs"][2][1], "196884");
    }
}
