//! `bhset`: enumerate, compute eps, construct and verify B_h-sets.

mod input;

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use bhset_core::construct::{
    construct_certified, enumerate_certified_sets, ConstructOptions, LatticeSet,
};
use bhset_core::epsilon::{compute_epsilon_with, min_modulus, modulus_threshold, EpsilonOptions};
use bhset_core::gadic::{gadic_bh_set, GadicParams, GadicSet};
use bhset_core::interval::rational_to_decimal;
use bhset_core::json;
use bhset_core::multiindex::{
    count_multiindices, enumerate_difference_vectors, enumerate_multiindices, DEFAULT_CAP,
};
use bhset_core::realnum::{PrecisionLadder, ThetaSystem, MIN_PRECISION_BITS};
use bhset_core::verify::{is_bh_set_with, verify_set_with, Point};
use bhset_core::{Error, Result};
use clap::{ArgAction, Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

const SCHEMA_VERSION: &str = "1";

#[derive(Parser, Debug)]
#[command(
    name = "bhset",
    version,
    about = "Construct and verify finite B_h-sets",
    disable_help_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,

    /// Print help
    #[arg(long, action = ArgAction::Help, global = true)]
    help: Option<bool>,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Maximum working precision in bits
    #[arg(long, global = true, default_value_t = 16384)]
    precision_max: u32,

    /// Enumeration limit for multi-indices and multisets
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,

    /// Seed for sampling large families
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Human-readable output instead of JSON
    #[arg(long, global = true)]
    text: bool,

    /// Significant digits for decimal renderings
    #[arg(long, global = true, default_value_t = 15)]
    digits: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count or list X_{h,n} and its difference vectors
    Xhn {
        /// Order h of the B_h property
        #[arg(short = 'h')]
        h: u32,
        /// Number of coordinates
        #[arg(short = 'n')]
        n: u32,
        /// List every multi-index
        #[arg(long)]
        list: bool,
        /// List the canonical difference vectors
        #[arg(long)]
        diffs: bool,
    },
    /// Enclose eps_{h,n} and the least admissible modulus
    Epsilon {
        /// Order h of the B_h property
        #[arg(short = 'h')]
        h: u32,
        /// Digit radius m
        #[arg(short = 'm', default_value_t = 1)]
        m: u32,
        /// Theta vectors, coordinates separated by commas
        #[arg(required = true)]
        theta: Vec<String>,
    },
    /// Build certified sets from digit candidates
    Generate {
        /// Order h of the B_h property
        #[arg(short = 'h')]
        h: u32,
        /// Digit radius m
        #[arg(short = 'm', default_value_t = 1)]
        m: u32,
        /// Modulus; defaults to the least certified one
        #[arg(short = 'q')]
        q: Option<BigInt>,
        /// Emit the whole family (sampled with --seed beyond --limit)
        #[arg(long)]
        all: bool,
        /// Largest family emitted in full
        #[arg(long, default_value_t = 1024)]
        limit: u64,
        /// Accept an uncertified q; the certificate is marked invalid
        #[arg(long)]
        force: bool,
        /// Keep only sets with positive coordinates
        #[arg(long)]
        positive: bool,
        /// Theta vectors, coordinates separated by commas
        #[arg(required = true)]
        theta: Vec<String>,
    },
    /// Sets of base-g truncations floor(g^l theta)
    Gadic {
        /// Base g >= 2
        #[arg(short = 'g')]
        g: u32,
        /// Truncation level
        #[arg(
            short = 'l',
            required_unless_present = "auto_level",
            conflicts_with = "auto_level"
        )]
        level: Option<u32>,
        /// Use the least certified level
        #[arg(long)]
        auto_level: bool,
        /// Order h of the B_h property
        #[arg(short = 'h', default_value_t = 2)]
        h: u32,
        /// Positive reals
        #[arg(required = true)]
        theta: Vec<String>,
    },
    /// Brute-force B_h check of explicit point sets
    Verify {
        /// Order h of the B_h property
        #[arg(short = 'h')]
        h: u32,
        /// Points separated by spaces or ';', coordinates by ','
        #[arg(long, required_unless_present = "file", conflicts_with = "file")]
        points: Option<String>,
        /// JSON or plain-text point-set file, '-' for stdin
        #[arg(long)]
        file: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Xhn { .. } => "xhn",
            Command::Epsilon { .. } => "epsilon",
            Command::Generate { .. } => "generate",
            Command::Gadic { .. } => "gadic",
            Command::Verify { .. } => "verify",
        }
    }

    fn inputs(&self, g: &Global) -> Value {
        let mut v = match self {
            Command::Xhn { h, n, list, diffs } => {
                json!({"h": h, "n": n, "list": list, "diffs": diffs})
            }
            Command::Epsilon { h, m, theta } => json!({"h": h, "m": m, "theta": theta}),
            Command::Generate {
                h,
                m,
                q,
                all,
                limit,
                force,
                positive,
                theta,
            } => json!({
                "h": h, "m": m, "q": q.as_ref().map(json::int), "all": all, "limit": limit,
                "force": force, "positive": positive, "theta": theta,
            }),
            Command::Gadic {
                g,
                level,
                auto_level,
                h,
                theta,
            } => json!({
                "g": g, "level": level, "auto_level": auto_level, "h": h, "theta": theta,
            }),
            Command::Verify { h, points, file } => json!({"h": h, "points": points, "file": file}),
        };
        v["precision_max"] = json!(g.precision_max);
        v["cap"] = json!(g.cap);
        v["seed"] = json!(g.seed);
        v["digits"] = json!(g.digits);
        v
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } | Error::LimitExceeded { .. } => 3,
        Error::IndependenceUnresolved { .. }
        | Error::RationalDependence { .. }
        | Error::PrecisionExhausted { .. } => 4,
        Error::UncertifiedModulus { .. } => 5,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidArgument(_) => "invalid_argument",
        Error::CapExceeded { .. } => "cap_exceeded",
        Error::Parse { .. } => "parse",
        Error::NegativeSqrt(_) => "negative_sqrt",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::IndependenceUnresolved { .. } => "independence_unresolved",
        Error::RationalDependence { .. } => "rational_dependence",
        Error::PrecisionExhausted { .. } => "precision_exhausted",
        Error::UncertifiedModulus { .. } => "uncertified_modulus",
        Error::DuplicatePoint(_) => "duplicate_point",
        Error::NonPositiveTheta(_) => "non_positive_theta",
        Error::LimitExceeded { .. } => "limit_exceeded",
    }
}

fn ladder(g: &Global) -> Result<PrecisionLadder> {
    if g.precision_max < MIN_PRECISION_BITS {
        return Err(Error::InvalidArgument(format!(
            "--precision-max must be >= {MIN_PRECISION_BITS}"
        )));
    }
    let start = PrecisionLadder::default().start_bits.min(g.precision_max);
    Ok(PrecisionLadder {
        start_bits: start,
        max_bits: g.precision_max,
    })
}

fn eps_options(g: &Global) -> Result<EpsilonOptions> {
    Ok(EpsilonOptions {
        ladder: ladder(g)?,
        cap: g.cap,
    })
}

fn fmt_point(p: &[BigInt]) -> String {
    if p.len() == 1 {
        return p[0].to_string();
    }
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn fmt_set(ps: &[Point]) -> String {
    let parts: Vec<String> = ps.iter().map(|p| fmt_point(p)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn fmt_vec<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// A command's JSON result and its text rendering.
struct Output {
    result: Value,
    text: String,
}

fn cmd_xhn(h: u32, n: u32, list: bool, diffs: bool, g: &Global) -> Result<Output> {
    if h == 0 || n == 0 {
        return Err(Error::InvalidArgument("xhn needs h >= 1 and n >= 1".into()));
    }
    let count = count_multiindices(h, n);
    let mut text = format!("|X_{{{h},{n}}}| = {count}\n");
    let mut result = json!({"h": h, "n": n, "count": json::int(&count.clone().into())});
    if list {
        let xs = enumerate_multiindices(h, n, g.cap)?;
        for x in &xs {
            let _ = writeln!(text, "{}", fmt_vec(x.coords()));
        }
        result["list"] = json!(xs.iter().map(|x| x.coords()).collect::<Vec<_>>());
    }
    if diffs {
        let ds = enumerate_difference_vectors(h, n, g.cap)?;
        let _ = writeln!(text, "{} canonical difference vectors", ds.len());
        for z in &ds {
            let _ = writeln!(text, "{}", fmt_vec(z.coords()));
        }
        result["diff_count"] = json!(ds.len());
        result["diffs"] = json!(ds.iter().map(|z| z.coords()).collect::<Vec<_>>());
    }
    Ok(Output { result, text })
}

fn cmd_epsilon(h: u32, m: u32, theta: &[String], g: &Global) -> Result<Output> {
    if h == 0 || m == 0 {
        return Err(Error::InvalidArgument(
            "epsilon needs h >= 1 and m >= 1".into(),
        ));
    }
    let system = input::theta_system(theta)?;
    let e = compute_epsilon_with(&system, h, eps_options(g)?)?;
    let q_min = min_modulus(&e, h, m);
    let threshold = rational_to_decimal(&modulus_threshold(&e, h, m), g.digits, true);
    let lo = e.lo.to_decimal(g.digits, false);
    let hi = e.hi.to_decimal(g.digits, true);
    let warnings = system.warnings();
    let mut text = format!(
        "eps_{{{h},{}}} in [{lo}, {hi}]\nargmin {}{}\nprecision {} bits\nq > 2hm/eps.lo = {threshold}, q_min (m = {m}) = {q_min}\n",
        system.n(),
        fmt_vec(e.argmin.coords()),
        if e.tied { " (tied)" } else { "" },
        e.precision_bits_used,
    );
    for w in &warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let result = json!({
        "h": h,
        "n": system.n(),
        "d": system.d(),
        "m": m,
        "eps": {
            "lo": json::bound(&e.lo, g.digits, false),
            "hi": json::bound(&e.hi, g.digits, true),
            "argmin": e.argmin.coords(),
            "tied": e.tied,
            "precision_bits_used": e.precision_bits_used,
        },
        "threshold_upper": threshold,
        "q_min": json::int(&q_min),
        "warnings": warnings,
    });
    Ok(Output { result, text })
}

fn set_entry(set: &LatticeSet) -> Value {
    json!({"set": json::points(set.points()), "choice_code": set.choice_code().digits()})
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    h: u32,
    m: u32,
    q: Option<BigInt>,
    all: bool,
    limit: u64,
    force: bool,
    positive: bool,
    theta: &[String],
    g: &Global,
) -> Result<Output> {
    let system = input::theta_system(theta)?;
    let opts = ConstructOptions {
        epsilon: eps_options(g)?,
        force,
        positivity_mode: positive,
    };
    let warnings = system.warnings();
    let mut text = String::new();
    let result = if all {
        let fam = enumerate_certified_sets(&system, h, m, q, limit, g.seed, opts)?;
        let cert = &fam.certificate;
        let mut v = json::certificate_summary(cert, system.d(), system.n(), g.digits);
        v["q_min"] = json::int(&min_modulus(&cert.eps_bound, h, m));
        v["total"] = json!(fam.total.to_string());
        v["sampled"] = json!(fam.seed.is_some());
        v["seed"] = json!(fam.seed);
        v["count"] = json!(fam.sets.len());
        v["sets"] = Value::Array(fam.sets.iter().map(set_entry).collect());
        v["warnings"] = json!(warnings);
        let _ = writeln!(
            text,
            "q = {}, {} ({} of {} sets{})",
            cert.params.q,
            if cert.certified {
                "certified"
            } else {
                "NOT certified"
            },
            fam.sets.len(),
            fam.total,
            if fam.seed.is_some() { ", sampled" } else { "" },
        );
        for s in &fam.sets {
            let _ = writeln!(text, "{}", fmt_set(s.points()));
        }
        v
    } else {
        let (set, cert) = construct_certified(&system, h, m, q, opts)?;
        let mut v = json::certificate(&set, &cert, g.digits);
        v["q_min"] = json::int(&min_modulus(&cert.eps_bound, h, m));
        v["warnings"] = json!(warnings);
        let _ = writeln!(
            text,
            "q = {}, {}\nseparation q*eps - 2hm >= {}\n{}",
            cert.params.q,
            if cert.certified {
                "certified"
            } else {
                "NOT certified"
            },
            cert.separation_lower_bound.to_decimal(g.digits, false),
            fmt_set(set.points()),
        );
        v
    };
    for w in &warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    Ok(Output { result, text })
}

fn gadic_json(r: &GadicSet, digits: usize) -> Value {
    let mut v = json::certificate(&r.set, &r.certificate, digits);
    v["g"] = json!(r.params.g);
    v["level"] = json!(r.params.level);
    v["min_level"] = json!(r.min_level);
    v["matches_construction"] = json!(r.matches_construction);
    v["extension"] = json!(r.extension);
    v
}

fn cmd_gadic(
    base: u32,
    level: Option<u32>,
    auto: bool,
    h: u32,
    theta: &[String],
    g: &Global,
) -> Result<Output> {
    let system: ThetaSystem = input::theta_system(theta)?;
    let opts = eps_options(g)?;
    let mut r = gadic_bh_set(
        &system,
        h,
        GadicParams::new(base, level.unwrap_or(1))?,
        opts,
    )?;
    if auto && r.min_level != r.params.level {
        r = gadic_bh_set(&system, h, GadicParams::new(base, r.min_level)?, opts)?;
    }
    let text = format!(
        "g = {base}, level {} (q = {}), {}; least certified level {}{}\n{}\n",
        r.params.level,
        r.certificate.params.q,
        if r.certified() {
            "certified"
        } else {
            "NOT certified"
        },
        r.min_level,
        if r.extension {
            " [h != 2 extension]"
        } else {
            ""
        },
        fmt_set(r.set.points()),
    );
    Ok(Output {
        result: gadic_json(&r, g.digits),
        text,
    })
}

fn cmd_verify(h: u32, points: Option<&str>, file: Option<&str>, g: &Global) -> Result<Output> {
    let sets = match (points, file) {
        (Some(p), _) => vec![input::inline_points(p)?],
        (None, Some(f)) => input::point_sets_from_text(&input::read_source(f)?)?,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "--points or --file is required".into(),
            ))
        }
    };
    if sets.is_empty() {
        return Err(Error::InvalidArgument("no point sets given".into()));
    }
    let mut reports = Vec::with_capacity(sets.len());
    let mut text = String::new();
    let mut all_bh = true;
    for (i, set) in sets.iter().enumerate() {
        let report = verify_set_with(set, h, g.cap)?;
        let (_, witness) = is_bh_set_with(set, h, g.cap)?;
        all_bh &= report.is_bh;
        let mut v = report.to_json();
        v["set"] = json::points(set);
        v["witness"] = witness.as_ref().map_or(Value::Null, |w| w.to_json());
        let _ = writeln!(
            text,
            "set {}: {} B_{h}: {}, |{h}A| = {} of {}",
            i + 1,
            fmt_set(set),
            if report.is_bh { "yes" } else { "no" },
            report.sumset_size,
            report.expected_max,
        );
        if let Some(w) = &witness {
            let _ = writeln!(
                text,
                "  {} = {} = {}",
                fmt_point(&w.sum),
                w.first_summands
                    .iter()
                    .map(|p| fmt_point(p))
                    .collect::<Vec<_>>()
                    .join(" + "),
                w.second_summands
                    .iter()
                    .map(|p| fmt_point(p))
                    .collect::<Vec<_>>()
                    .join(" + "),
            );
        }
        reports.push(v);
    }
    let result = json!({"h": h, "count": sets.len(), "all_bh": all_bh, "reports": reports});
    Ok(Output { result, text })
}

fn run(cmd: &Command, g: &Global) -> Result<Output> {
    match cmd {
        Command::Xhn { h, n, list, diffs } => cmd_xhn(*h, *n, *list, *diffs, g),
        Command::Epsilon { h, m, theta } => cmd_epsilon(*h, *m, theta, g),
        Command::Generate {
            h,
            m,
            q,
            all,
            limit,
            force,
            positive,
            theta,
        } => cmd_generate(*h, *m, q.clone(), *all, *limit, *force, *positive, theta, g),
        Command::Gadic {
            g: base,
            level,
            auto_level,
            h,
            theta,
        } => cmd_gadic(*base, *level, *auto_level, *h, theta, g),
        Command::Verify { h, points, file } => {
            cmd_verify(*h, points.as_deref(), file.as_deref(), g)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli.command, &cli.global);
    let timing_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": cli.command.name(),
        "inputs": cli.command.inputs(&cli.global),
        "timing_ms": timing_ms,
    });
    match outcome {
        Ok(out) => {
            if cli.global.text {
                print!("{}", out.text);
            } else {
                doc["result"] = out.result;
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("serializable")
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e}");
            if !cli.global.text {
                doc["error"] =
                    json!({"kind": error_kind(&e), "message": e.to_string(), "exit_code": code});
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("serializable")
                );
            }
            ExitCode::from(code)
        }
    }
}
