use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use kreeb::catalog::{brieskorn_pham_catalog, build_xk, XkSpec};
use kreeb::exact::{RatVec, Rational, Scalar};
use kreeb::io::{divisor_to_json, parse_input};
use kreeb::pdivisor::{IsolatedReport, PolyhedralDivisor};
use kreeb::stability::{
    kstability_test, reeb_minimize, slice_line, vol_counting_oracle, FanoCone, StabilityReport, Verdict, REPORT_DIGITS,
};
use kreeb::topology::{
    abelianization, class_group, class_group_toric, link_report, link_report_toric, pi1_presentation, LinkReport,
};
use kreeb::Error;

/// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "kreeb", version, about = "Exact K-stability, Reeb fields and link topology of Fano cone singularities")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// Input JSON file; reads standard input when omitted or `-`.
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the schema, properness and the Fano conditions.
    Validate(InputArg),
    /// Canonical data, log-terminality, isolatedness and admissible points.
    Analyze(InputArg),
    /// The volume-minimizing Reeb field and its regularity.
    Reeb(InputArg),
    /// Full K-stability report; exits 0 (K-stable), 1 (not K-stable) or 3 (undecided).
    Kstab {
        #[command(flatten)]
        input: InputArg,
        /// Test this Reeb field instead of the minimizer, e.g. `--xi 1/2,1`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Option<Vec<Rational>>,
    },
    /// Class group, fundamental group and link identification.
    Topology(InputArg),
    /// Emit worked examples and reference data.
    Catalog {
        #[command(subcommand)]
        which: CatalogCommand,
    },
    /// Sample the volume along the normalized slice of a rank-2 cone.
    Volcurve {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Output format: `csv` or `json`.
        #[arg(long, default_value = "csv")]
        out: String,
    },
    /// Lattice-point counting estimate of the volume.
    Oracle {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        xi: Vec<Rational>,
        #[arg(long = "T")]
        t: Rational,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// The divisor `X_k` as JSON.
    Xk {
        #[arg(long)]
        k: i64,
        /// Positions of `y_1, ..., y_k`, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Option<Vec<Rational>>,
    },
    /// The classification of isolated factorial cone singularities.
    Bp,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = match e.downcast_ref::<Error>() {
                Some(Error::OracleBudget { .. }) => EXIT_BUDGET,
                _ => EXIT_INVALID,
            };
            if cli.json {
                out!("{}", json!({ "error": format!("{e:#}") }));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}

fn read_input(arg: &InputArg) -> anyhow::Result<FanoCone> {
    let text = match &arg.file {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("cannot read standard input")?;
            s
        }
    };
    Ok(parse_input(&text)?)
}

fn emit(json: bool, value: &Value, text: impl FnOnce() -> String) {
    if json {
        out!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
    } else {
        let _ = std::io::Write::write_all(&mut std::io::stdout().lock(), text().as_bytes());
    }
}

fn point(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn scalars(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Validate(input) => validate(cli.json, &read_input(input)?),
        Command::Analyze(input) => analyze(cli.json, &read_input(input)?),
        Command::Reeb(input) => reeb(cli.json, &read_input(input)?),
        Command::Kstab { input, xi } => kstab(cli.json, &read_input(input)?, xi.as_deref()),
        Command::Topology(input) => topology(cli.json, &read_input(input)?),
        Command::Catalog { which } => catalog(cli.json, which),
        Command::Volcurve { input, samples, out } => volcurve(cli.json, &read_input(input)?, *samples, out),
        Command::Oracle { input, xi, t } => oracle(cli.json, &read_input(input)?, xi, t),
    }
}

fn describe(f: &FanoCone) -> String {
    match f {
        FanoCone::Toric(c) => format!("toric cone {c}"),
        FanoCone::Divisor(d) => format!("polyhedral divisor with tail {} and {} support points", d.tail(), d.support().len()),
    }
}

fn validate(json: bool, f: &FanoCone) -> anyhow::Result<u8> {
    let proper = match f {
        FanoCone::Toric(_) => None,
        FanoCone::Divisor(d) => Some(d.is_proper()),
    };
    match f.canonical_weight() {
        Ok(u) => {
            let value = json!({ "valid": true, "proper": proper, "canonical_weight": u });
            emit(json, &value, || {
                let mut s = format!("{}\n", describe(f));
                if proper.is_some() {
                    s += "proper: true\n";
                }
                s + &format!("canonical weight: {}\nlog-terminal: true\nvalid\n", point(&u))
            });
            Ok(0)
        }
        Err(e) => {
            let value = json!({ "valid": false, "proper": proper, "error": e.to_string() });
            emit(json, &value, || format!("{}\ninvalid: {e}\n", describe(f)));
            Ok(EXIT_INVALID)
        }
    }
}

fn isolated_text(r: &IsolatedReport) -> String {
    let mut s = format!("isolated: {}\n", r.isolated);
    if let Some(c) = r.failed_condition {
        s += &format!("  fails condition ({c})\n");
    }
    for w in &r.witnesses {
        s += &format!(
            "  condition ({}) at {}: vectors {:?}, gcd of maximal minors {}\n",
            w.condition,
            w.points.join(", "),
            w.vectors,
            w.gcd_minors
        );
    }
    if let Some(n) = &r.note {
        s += &format!("  {n}\n");
    }
    s
}

fn analyze_divisor(json: bool, d: &PolyhedralDivisor) -> anyhow::Result<u8> {
    let degree = d.degree();
    let proper = d.is_proper();
    let canonical = d.canonical_data();
    let lt_sum = d.log_terminal_sum();
    let isolated = if proper { Some(d.is_isolated()?) } else { None };
    let qfactorial = d.qfactorial_isolated_form();
    let admissible = d.admissible_points();
    let value = json!({
        "degree": degree,
        "proper": proper,
        "canonical": canonical,
        "log_terminal_sum": lt_sum,
        "log_terminal": d.is_log_terminal(),
        "isolated": isolated,
        "qfactorial_shape": qfactorial,
        "admissible_points": admissible,
    });
    emit(json, &value, || {
        let mut s = format!("degree: {degree}\nproper: {proper}\n");
        match &canonical {
            Some(cd) => {
                s += &format!("canonical weight: {}\n", point(&cd.u));
                for (y, a) in &cd.a {
                    s += &format!("  a_{y} = {a}\n");
                }
            }
            None => s += "canonical weight: none (not Q-Gorenstein)\n",
        }
        s += &format!("log-terminal: {} (sum {lt_sum} < 2)\n", d.is_log_terminal());
        match &isolated {
            Some(r) => s += &isolated_text(r),
            None => s += "isolated: not tested (improper)\n",
        }
        s += &format!("q-factorial isolated shape: {qfactorial}\n");
        let mut pts = admissible.points.clone();
        if admissible.generic {
            pts.push("generic".into());
        }
        s + &format!("admissible points: {}\n", pts.join(", "))
    });
    Ok(0)
}

fn analyze(json: bool, f: &FanoCone) -> anyhow::Result<u8> {
    match f {
        FanoCone::Divisor(d) => analyze_divisor(json, d),
        FanoCone::Toric(c) => {
            let u = f.canonical_weight().ok();
            let smooth_faces = c.rank() == 3
                && c.facet_ray_sets().iter().all(|r| r.len() == 2 && kreeb::exact::extends_to_basis(r, 3));
            let value = json!({
                "rays": c.rays(),
                "simplicial": c.is_simplicial(),
                "canonical_weight": u,
                "isolated": c.rank() <= 2 || smooth_faces,
            });
            emit(json, &value, || {
                let mut s = format!("{}\nsimplicial: {}\n", describe(f), c.is_simplicial());
                match &u {
                    Some(u) => s += &format!("canonical weight: {}\n", point(u)),
                    None => s += "canonical weight: none\n",
                }
                s + &format!("isolated: {}\n", value["isolated"])
            });
            Ok(0)
        }
    }
}

fn reeb(json: bool, f: &FanoCone) -> anyhow::Result<u8> {
    let m = reeb_minimize(f)?;
    let coords = m.field.coordinates()?;
    let slice = m.slice.as_ref().map(|s| {
        json!({
            "base": s.base, "dir": s.dir, "lo": s.lo, "hi": s.hi,
            "volume": s.volume.to_string(),
            "derivative_numerator": s.derivative_numerator().to_string(),
        })
    });
    let mut value = serde_json::to_value(&m)?;
    value["slice"] = slice.clone().unwrap_or(Value::Null);
    emit(json, &value, || {
        let mut s = format!("minimizer: {}\n", scalars(&coords));
        let dec: Vec<String> = coords.iter().map(|c| c.to_decimal(REPORT_DIGITS)).collect();
        s += &format!("decimal: ({})\n", dec.join(", "));
        s += &format!("regularity: {}\n", m.regularity.as_str());
        if let Some(sl) = &m.slice {
            s += &format!(
                "slice: {} + s·{}, s in ({}, {})\ncritical equation: {} = 0\n",
                point(&sl.base),
                point(&sl.dir),
                sl.lo,
                sl.hi,
                sl.derivative_numerator()
            );
        }
        s
    });
    Ok(0)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::KStable => 0,
        Verdict::NotKStable => 1,
        Verdict::UndecidedNumeric => 3,
    }
}

fn report_text(r: &StabilityReport) -> anyhow::Result<String> {
    let mut s = format!("canonical weight: {}\n", point(&r.canonical_weight));
    s += &format!("Reeb field: {}\n", scalars(&r.minimizer.coordinates()?));
    s += &format!("regularity: {}\n", r.regularity.as_str());
    match &r.volume {
        Scalar::Rational(v) => s += &format!("volume: {v} ~ {}\n", r.volume_decimal),
        other => s += &format!("volume: {other}\n"),
    }
    for w in &r.criticality_witnesses {
        s += &format!("derivative along {:?}: {}\n", w.direction, w.value);
    }
    for c in &r.degeneration_checks {
        if c.trivial {
            s += &format!("degeneration at {}: product, no condition\n", c.point);
        } else {
            s += &format!(
                "degeneration at {}: Futaki {} (sign {:+})\n",
                c.point,
                c.decimal.as_deref().unwrap_or("?"),
                c.sign
            );
        }
    }
    for n in &r.notes {
        s += &format!("note: {n}\n");
    }
    Ok(s + &format!("verdict: {}\n", r.verdict.as_str()))
}

fn kstab(json: bool, f: &FanoCone, xi: Option<&[Rational]>) -> anyhow::Result<u8> {
    let report = kstability_test(f, xi)?;
    let text = report_text(&report)?;
    emit(json, &serde_json::to_value(&report)?, || text);
    Ok(verdict_code(report.verdict))
}

fn link_text(r: &LinkReport) -> String {
    let mut s = format!("H2 = Cl: {}\n", r.h2);
    s += &format!("pi1 abelianization: {}\n", r.pi1_abelianization);
    s += &format!("pi1: {}\n", r.pi1.as_str());
    match &r.manifold {
        Some(m) => s += &format!("link: {m}\n"),
        None => s += "link: not identified\n",
    }
    s += &format!("Sasaki-Einstein: {}\n", r.sasaki_einstein);
    for n in &r.notes {
        s += &format!("note: {n}\n");
    }
    s
}

fn kstable_flag(f: &FanoCone) -> Option<bool> {
    kstability_test(f, None).ok().map(|r| r.verdict == Verdict::KStable)
}

fn topology(json: bool, f: &FanoCone) -> anyhow::Result<u8> {
    let link = match f {
        FanoCone::Divisor(d) => {
            let iso = d.is_isolated()?;
            if !iso.isolated {
                let h2 = class_group(d)?;
                let p = pi1_presentation(d)?;
                let ab = abelianization(&p);
                let value = json!({
                    "isolated": false,
                    "h2": h2,
                    "pi1_abelianization": ab,
                    "pi1_relators": p.relator_strings(),
                    "manifold": null,
                });
                emit(json, &value, || {
                    format!("H2 = Cl: {h2}\npi1 abelianization: {ab}\nlink: not identified (singularity is not isolated)\n")
                });
                return Ok(0);
            }
            let report = link_report(d, kstable_flag(f))?;
            let p = pi1_presentation(d)?;
            (report, Some(p.relator_strings()))
        }
        FanoCone::Toric(c) if c.rank() == 3 => (link_report_toric(c, kstable_flag(f))?, None),
        FanoCone::Toric(c) => {
            let h2 = class_group_toric(c)?;
            let value = json!({ "h2": h2, "manifold": null });
            emit(json, &value, || format!("H2 = Cl: {h2}\nlink: identification needs rank 3\n"));
            return Ok(0);
        }
    };
    let (report, relators) = link;
    let mut value = serde_json::to_value(&report)?;
    value["isolated"] = json!(true);
    if let Some(r) = &relators {
        value["pi1_relators"] = json!(r);
    }
    emit(json, &value, || {
        let mut s = link_text(&report);
        if let Some(r) = &relators {
            s += &format!("pi1 relators: {}\n", r.join(", "));
        }
        s
    });
    Ok(0)
}

fn catalog(json: bool, which: &CatalogCommand) -> anyhow::Result<u8> {
    match which {
        CatalogCommand::Xk { k, points } => {
            let d = build_xk(&XkSpec { k: *k, points: points.clone() })?;
            out!("{}", serde_json::to_string_pretty(&divisor_to_json(&d))?);
        }
        CatalogCommand::Bp => {
            let entries = brieskorn_pham_catalog();
            emit(json, &serde_json::to_value(&entries)?, || {
                let mut s = String::new();
                for (i, e) in entries.iter().enumerate() {
                    s += &format!(
                        "{}. {}: {} [{}] {}\n",
                        i + 1,
                        e.name,
                        e.ambient.as_deref().unwrap_or("C^n"),
                        e.constraint,
                        e.notes
                    );
                }
                s
            });
        }
    }
    Ok(0)
}

fn volcurve(json: bool, f: &FanoCone, samples: usize, out: &str) -> anyhow::Result<u8> {
    if samples == 0 {
        anyhow::bail!("--samples must be positive");
    }
    let line = slice_line(f)?;
    let width = &line.hi - &line.lo;
    let rows: Vec<(Rational, Rational)> = (1..=samples)
        .map(|i| {
            let x = &line.lo + &width * Rational::new(i as i64, samples as i64 + 1);
            let v = line.volume.eval(&x)?;
            Ok((x, v))
        })
        .collect::<kreeb::Result<_>>()?;
    match (json, out) {
        (true, _) | (false, "json") => {
            let points: Vec<Value> = rows
                .iter()
                .map(|(x, v)| {
                    json!({ "x": x, "vol": v,
                        "x_decimal": x.to_decimal(REPORT_DIGITS), "vol_decimal": v.to_decimal(REPORT_DIGITS) })
                })
                .collect();
            let value = json!({ "base": line.base, "dir": line.dir, "lo": line.lo, "hi": line.hi, "samples": points });
            out!("{}", serde_json::to_string_pretty(&value)?);
        }
        (false, "csv") => {
            out!("x,vol");
            for (x, v) in &rows {
                out!("{},{}", x.to_decimal(REPORT_DIGITS), v.to_decimal(REPORT_DIGITS));
            }
        }
        (false, other) => anyhow::bail!("unknown output format {other:?}; use csv or json"),
    }
    Ok(0)
}

fn oracle(json: bool, f: &FanoCone, xi: &RatVec, t: &Rational) -> anyhow::Result<u8> {
    let estimate = vol_counting_oracle(f, xi, t)?;
    let exact = f.volume(xi)?;
    let rel = ((&estimate - &exact) / &exact).abs();
    let value = json!({
        "xi": xi, "T": t,
        "estimate": estimate, "estimate_decimal": estimate.to_decimal(REPORT_DIGITS),
        "exact": exact, "exact_decimal": exact.to_decimal(REPORT_DIGITS),
        "relative_error": rel.to_decimal(6),
    });
    emit(json, &value, || {
        format!(
            "estimate: {} ~ {}\nexact volume: {} ~ {}\nrelative error: {}\n",
            estimate,
            estimate.to_decimal(REPORT_DIGITS),
            exact,
            exact.to_decimal(REPORT_DIGITS),
            rel.to_decimal(6)
        )
    });
    Ok(0)
}
