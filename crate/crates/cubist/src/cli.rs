//! Command-line dispatcher: one subcommand per library operation, CSV or
//! JSON output, deterministic for a fixed (command, flags, input) triple.
//!
//! Serialization conventions: exact rationals render as "num/den" strings
//! (never floating point); integer counts that may exceed the double range
//! render as decimal strings in JSON; CSV uses `,` separators and `.`
//! decimal points with no locale dependence. High-precision reals honor
//! `--digits`. All sampling randomness flows from the single `--seed` flag.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exponents;
use crate::expsums;
use crate::forms::{self, CubicForm};
use crate::hp;
use crate::search;

/// Parse an exact rational from "a", "a/b", or a finite decimal "a.b"
/// (optional leading sign on the numerator).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = |msg: &str| Error::Invalid(format!("rational '{}': {}", t, msg));
    if t.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num
            .parse()
            .map_err(|_| bad("numerator is not an integer"))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| bad("denominator is not an integer"))?;
        if d.is_zero() {
            return Err(bad("denominator is zero"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("fractional part is not digits"));
        }
        // "-1.25" → -125 / 10².
        let joined: String = format!("{}{}", whole, frac);
        let n: BigInt = joined.parse().map_err(|_| bad("not a decimal number"))?;
        if whole.is_empty() || whole == "-" || whole == "+" {
            return Err(bad("missing integer part"));
        }
        let d = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = t.parse().map_err(|_| bad("not an integer"))?;
    Ok(BigRational::from_integer(n))
}

/// Canonical exact-rational serialization: "num/den", reduced.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Finite decimal when the reduced denominator is 2^a·5^b (exact), else
/// "num/den". Used for CSV cells holding published 3-decimal constants.
pub fn decimal_or_fraction(r: &BigRational) -> String {
    let mut den = r.denom().clone();
    let mut pow2 = 0u32;
    let mut pow5 = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        pow2 += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        pow5 += 1;
    }
    if !den.is_one() {
        return rational_string(r);
    }
    let shift = pow2.max(pow5);
    let scaled = (r * BigRational::from_integer(BigInt::from(10u32).pow(shift)))
        .to_integer();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let s = if digits.len() as u32 <= shift {
        format!("0.{}{}", "0".repeat(shift as usize - digits.len()), digits)
    } else if shift == 0 {
        digits
    } else {
        let cut = digits.len() - shift as usize;
        format!("{}.{}", &digits[..cut], &digits[cut..])
    };
    if neg {
        format!("-{}", s)
    } else {
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputKind {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    Brute,
    Mitm,
}

impl From<StrategyArg> for search::Strategy {
    fn from(s: StrategyArg) -> search::Strategy {
        match s {
            StrategyArg::Auto => search::Strategy::Auto,
            StrategyArg::Brute => search::Strategy::Brute,
            StrategyArg::Mitm => search::Strategy::Mitm,
        }
    }
}

#[derive(Args, Debug)]
struct RunOpts {
    /// Read the form from this file (text grammar, or JSON when it starts
    /// with '{')
    #[arg(long, global = true, value_name = "FILE")]
    form: Option<PathBuf>,
    /// Inline form expression (alternative to --form)
    #[arg(long, global = true, value_name = "EXPR")]
    expr: Option<String>,
    /// Significant digits for high-precision output
    #[arg(long, global = true, default_value_t = 50,
          value_parser = clap::value_parser!(u32).range(15..))]
    digits: u32,
    /// Enumeration budget (residue/lattice/search points)
    #[arg(long, global = true, default_value_t = 10_000_000,
          value_parser = clap::value_parser!(u64).range(1000..))]
    budget: u64,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "csv")]
    output: OutputKind,
    /// Seed for sampled audits
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a form; echo its canonical text and monomials
    Parse {
        /// Divide out the coefficient gcd and report it
        #[arg(long)]
        normalize: bool,
    },
    /// Height (max |coefficient|) and symmetric-tensor maximum
    Height,
    /// Rank distribution of the differential matrix over the box |x|∞ ≤ h
    RankCensus {
        #[arg(long, default_value_t = 2)]
        h: u32,
    },
    /// Degeneracy invariant (gcd of maximal minors of the derivative matrix)
    Delta,
    /// Complete exponential sum S(a,q)
    Expsum {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        q: u64,
    },
    /// Truncated singular series Σ_{q ≤ R} A(q), exact
    Series {
        #[arg(long, default_value_t = 100)]
        r: u64,
    },
    /// Local zero count mod p^k and the exact density identity
    Local {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Exponent table for a range of n, plus the constant audit section
    Exponents {
        /// Inclusive range "lo..hi" (or a single n)
        #[arg(long, default_value = "14..18")]
        range: String,
        /// Replace ϑ(n) in the final ceiling: repeatable "n=value"
        #[arg(long = "theta-override", value_name = "N=V")]
        theta_override: Vec<String>,
    },
    /// Without a form: published-constant audit. With a form: sampled
    /// growth audit of |S(a,q)| against (M^n·q^(5n))^(1/6)
    Audit {
        /// Moduli for the growth audit, comma separated
        #[arg(long, default_value = "9,27,81")]
        q: String,
        /// Units sampled per modulus
        #[arg(long, default_value_t = 8,
              value_parser = clap::value_parser!(u64).range(1..))]
        sample: u64,
    },
    /// Least nonzero integer zero with |x|∞ ≤ amax
    Search {
        #[arg(long)]
        amax: u32,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        /// Append wall-clock timings (breaks byte determinism)
        #[arg(long)]
        timings: bool,
        /// Treat the form file as a corpus, one form per line
        #[arg(long)]
        corpus: bool,
    },
    /// Zeros (and optionally S(α)) over the scaled box P·B(z, ρ)
    CountBox {
        /// Box center, comma-separated rationals
        #[arg(long)]
        center: String,
        /// Box half-width ρ > 0 (rational)
        #[arg(long)]
        rho: String,
        /// Scale P ≥ 1 (rational)
        #[arg(long, default_value = "1")]
        scale: String,
        /// Evaluate the generating sum at this rational α
        #[arg(long)]
        alpha: Option<String>,
    },
}

#[derive(Parser, Debug)]
#[command(
    name = "cubist",
    version,
    about = "Exact invariants, exponential sums, and least-zero search for integer cubic forms"
)]
struct Cli {
    #[command(flatten)]
    run: RunOpts,
    #[command(subcommand)]
    cmd: Cmd,
}

pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Full CLI entry point with captured streams; the binary is a thin shell
/// over this so tests exercise exactly what users see.
pub fn run_capture<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            // Real usage errors go to stderr with exit 2; --help/--version
            // render to stdout with exit 0.
            return if e.use_stderr() {
                RunOutput { code: 2, stdout: String::new(), stderr: rendered }
            } else {
                RunOutput { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let mut out = Vec::new();
    match execute(cli, &mut out) {
        Ok(()) => RunOutput {
            code: 0,
            stdout: String::from_utf8(out).expect("output is utf-8"),
            stderr: String::new(),
        },
        Err(e) => RunOutput {
            code: 1,
            stdout: String::from_utf8(out).expect("output is utf-8"),
            stderr: format!("error: {}\n", e),
        },
    }
}

fn load_form(opts: &RunOpts) -> Result<CubicForm> {
    match (&opts.form, &opts.expr) {
        (Some(_), Some(_)) => Err(Error::Invalid(
            "--form and --expr are mutually exclusive".into(),
        )),
        (Some(path), None) => {
            let src = std::fs::read_to_string(path)?;
            forms::parse_form(&src)
        }
        (None, Some(src)) => forms::parse_form(src),
        (None, None) => Err(Error::Invalid(
            "no form given: pass --form FILE or --expr EXPR".into(),
        )),
    }
}

fn load_corpus(opts: &RunOpts) -> Result<Vec<CubicForm>> {
    let Some(path) = &opts.form else {
        return Err(Error::Invalid(
            "corpus mode reads --form FILE with one form per line".into(),
        ));
    };
    let src = std::fs::read_to_string(path)?;
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(forms::parse_form)
        .collect()
}

/// Write one CSV table; sections within a command are separated by a blank
/// line (each section carries its own header).
fn csv_section(out: &mut Vec<u8>, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invalid(format!("csv write failed: {}", e))
}

fn emit_json(out: &mut Vec<u8>, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)
        .map_err(|e| Error::Invalid(format!("json write failed: {}", e)))?;
    out.push(b'\n');
    Ok(())
}

fn budget_of(opts: &RunOpts) -> Option<u128> {
    Some(opts.budget as u128)
}

fn execute(cli: Cli, out: &mut Vec<u8>) -> Result<()> {
    let opts = cli.run;
    let budget = budget_of(&opts);
    let mut ctx = hp::Ctx::new(opts.digits as usize);
    match cli.cmd {
        Cmd::Parse { normalize } => {
            let parsed = load_form(&opts)?;
            let (form, content) = if normalize {
                let (prim, content) = parsed.normalize()?;
                (prim, Some(content))
            } else {
                (parsed, None)
            };
            let doc = form.to_document();
            match opts.output {
                OutputKind::Csv => {
                    let mut header = vec!["n", "text"];
                    let mut row = vec![form.n().to_string(), form.to_text()];
                    if let Some(c) = content {
                        header.push("content");
                        row.push(c.to_string());
                    }
                    csv_section(out, &header, &[row])?;
                    out.push(b'\n');
                    let rows: Vec<Vec<String>> = doc
                        .monomials
                        .iter()
                        .map(|m| {
                            let exps: Vec<String> =
                                m.exps.iter().map(|e| e.to_string()).collect();
                            vec![exps.join(" "), m.coef.to_string()]
                        })
                        .collect();
                    csv_section(out, &["exps", "coef"], &rows)?;
                }
                OutputKind::Json => {
                    let mut v = json!({
                        "n": form.n(),
                        "text": form.to_text(),
                        "monomials": serde_json::to_value(&doc.monomials)
                            .expect("document serializes"),
                    });
                    if let Some(c) = content {
                        v["content"] = json!(c.to_string());
                    }
                    emit_json(out, &v)?;
                }
            }
        }
        Cmd::Height => {
            let form = load_form(&opts)?;
            let h = form.height()?;
            let t = form.tensor_max()?;
            match opts.output {
                OutputKind::Csv => csv_section(
                    out,
                    &["height", "tensor_max"],
                    &[vec![h.to_string(), t.to_string()]],
                )?,
                OutputKind::Json => emit_json(
                    out,
                    &json!({ "height": h.to_string(), "tensor_max": t.to_string() }),
                )?,
            }
        }
        Cmd::RankCensus { h } => {
            let form = load_form(&opts)?;
            let census = forms::rank_census(&form, h, budget)?;
            let ratios = census.exponent_ratios(&mut ctx);
            let rendered: Vec<Option<String>> = ratios
                .iter()
                .map(|r| r.as_ref().map(|x| ctx.render(x)))
                .collect();
            match opts.output {
                OutputKind::Csv => {
                    let rows: Vec<Vec<String>> = census
                        .counts
                        .iter()
                        .enumerate()
                        .map(|(r, c)| {
                            vec![
                                r.to_string(),
                                c.to_string(),
                                rendered[r].clone().unwrap_or_default(),
                            ]
                        })
                        .collect();
                    csv_section(out, &["rank", "count", "log_ratio"], &rows)?;
                }
                OutputKind::Json => {
                    let counts: Vec<String> =
                        census.counts.iter().map(|c| c.to_string()).collect();
                    emit_json(
                        out,
                        &json!({ "h": h, "counts": counts, "log_ratios": rendered }),
                    )?;
                }
            }
        }
        Cmd::Delta => {
            let form = load_form(&opts)?;
            let d = forms::delta_invariant(&form)?;
            match opts.output {
                OutputKind::Csv => csv_section(
                    out,
                    &["delta", "degenerate", "scale"],
                    &[vec![
                        d.value.to_string(),
                        d.degenerate.to_string(),
                        d.scale.to_string(),
                    ]],
                )?,
                OutputKind::Json => emit_json(
                    out,
                    &json!({
                        "delta": d.value.to_string(),
                        "degenerate": d.degenerate,
                        "scale": d.scale,
                    }),
                )?,
            }
        }
        Cmd::Expsum { a, q } => {
            let form = load_form(&opts)?;
            let rec = expsums::complete_sum(&form, a, q, budget, &mut ctx)?;
            let rho = rec.exact_counts.rho().to_string();
            let re = ctx.render(&rec.re);
            let im = ctx.render(&rec.im);
            let abs = ctx.render(&rec.abs);
            match opts.output {
                OutputKind::Csv => csv_section(
                    out,
                    &["a", "q", "rho", "re", "im", "abs"],
                    &[vec![a.to_string(), q.to_string(), rho, re, im, abs]],
                )?,
                OutputKind::Json => {
                    let counts: Vec<String> = rec
                        .exact_counts
                        .counts
                        .iter()
                        .map(|c| c.to_string())
                        .collect();
                    emit_json(
                        out,
                        &json!({
                            "a": a, "q": q, "rho": rho,
                            "re": re, "im": im, "abs": abs,
                            "counts": counts,
                        }),
                    )?;
                }
            }
        }
        Cmd::Series { r } => {
            let form = load_form(&opts)?;
            let report = expsums::singular_series(&form, r, budget)?;
            match opts.output {
                OutputKind::Csv => {
                    let rows: Vec<Vec<String>> = report
                        .rows
                        .iter()
                        .map(|row| {
                            vec![
                                row.q.to_string(),
                                row.a_q.numer().to_string(),
                                row.a_q.denom().to_string(),
                                row.cumulative.numer().to_string(),
                                row.cumulative.denom().to_string(),
                            ]
                        })
                        .collect();
                    csv_section(
                        out,
                        &["q", "A_num", "A_den", "cumulative_num", "cumulative_den"],
                        &rows,
                    )?;
                    out.push(b'\n');
                    csv_section(
                        out,
                        &[
                            "requested_R",
                            "R",
                            "partial_sum_num",
                            "partial_sum_den",
                            "positive",
                            "multiplicative_ok",
                        ],
                        &[vec![
                            report.requested_r.to_string(),
                            report.r.to_string(),
                            report.partial_sum.numer().to_string(),
                            report.partial_sum.denom().to_string(),
                            report.positive.to_string(),
                            report.multiplicative_ok.to_string(),
                        ]],
                    )?;
                    out.push(b'\n');
                    let rows: Vec<Vec<String>> = report
                        .local_densities
                        .iter()
                        .map(|d| {
                            vec![
                                d.p.to_string(),
                                d.k_max.to_string(),
                                d.density.numer().to_string(),
                                d.density.denom().to_string(),
                            ]
                        })
                        .collect();
                    csv_section(out, &["p", "k_max", "density_num", "density_den"], &rows)?;
                }
                OutputKind::Json => {
                    let rows: Vec<Value> = report
                        .rows
                        .iter()
                        .map(|row| {
                            json!({
                                "q": row.q,
                                "A": rational_string(&row.a_q),
                                "cumulative": rational_string(&row.cumulative),
                            })
                        })
                        .collect();
                    let densities: Vec<Value> = report
                        .local_densities
                        .iter()
                        .map(|d| {
                            json!({
                                "p": d.p,
                                "k_max": d.k_max,
                                "density": rational_string(&d.density),
                            })
                        })
                        .collect();
                    emit_json(
                        out,
                        &json!({
                            "requested_R": report.requested_r,
                            "R": report.r,
                            "rows": rows,
                            "partial_sum": rational_string(&report.partial_sum),
                            "positive": report.positive,
                            "local_densities": densities,
                            "multiplicative_ok": report.multiplicative_ok,
                        }),
                    )?;
                }
            }
        }
        Cmd::Local { p, k } => {
            let form = load_form(&opts)?;
            let rho = expsums::local_count(&form, p, k, budget)?;
            let (lhs, rhs, equal) = expsums::local_density_identity(&form, p, k, budget)?;
            match opts.output {
                OutputKind::Csv => csv_section(
                    out,
                    &["p", "k", "rho", "lhs_num", "lhs_den", "rhs_num", "rhs_den", "equal"],
                    &[vec![
                        p.to_string(),
                        k.to_string(),
                        rho.to_string(),
                        lhs.numer().to_string(),
                        lhs.denom().to_string(),
                        rhs.numer().to_string(),
                        rhs.denom().to_string(),
                        equal.to_string(),
                    ]],
                )?,
                OutputKind::Json => emit_json(
                    out,
                    &json!({
                        "p": p, "k": k,
                        "rho": rho.to_string(),
                        "lhs": rational_string(&lhs),
                        "rhs": rational_string(&rhs),
                        "equal": equal,
                    }),
                )?,
            }
        }
        Cmd::Exponents { range, theta_override } => {
            let (lo, hi) = parse_range(&range)?;
            let mut overrides = BTreeMap::new();
            for spec in &theta_override {
                let (n, v) = spec.split_once('=').ok_or_else(|| {
                    Error::Invalid(format!("theta override '{}' is not N=V", spec))
                })?;
                let n: u32 = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::Invalid(format!("override n '{}' invalid", n)))?;
                overrides.insert(n, parse_rational(v)?);
            }
            let report = exponents::table_report(lo, hi, &overrides)?;
            let digits = opts.digits as usize;
            match opts.output {
                OutputKind::Csv => {
                    let rows: Vec<Vec<String>> = report
                        .rows
                        .iter()
                        .map(|row| {
                            vec![
                                row.n.to_string(),
                                row.eop0.to_decimal(digits),
                                row.delta0.to_decimal(digits),
                                row.e_n.to_decimal(digits),
                                row.binding_e.to_string(),
                                row.theta_n.to_decimal(digits),
                                row.binding_theta.to_string(),
                                row.e2_n.to_string(),
                            ]
                        })
                        .collect();
                    csv_section(
                        out,
                        &[
                            "n", "eoP0", "delta0", "e_n", "binding_e", "theta_n",
                            "binding_theta", "e2_n",
                        ],
                        &rows,
                    )?;
                    out.push(b'\n');
                    audit_csv(out, &report.audit, digits)?;
                }
                OutputKind::Json => {
                    let rows: Vec<Value> = report
                        .rows
                        .iter()
                        .map(|row| {
                            json!({
                                "n": row.n,
                                "eoP0": row.eop0.to_decimal(digits),
                                "delta0": row.delta0.to_decimal(digits),
                                "e_n": row.e_n.to_decimal(digits),
                                "binding_e": row.binding_e,
                                "theta_n": row.theta_n.to_decimal(digits),
                                "binding_theta": row.binding_theta,
                                "theta_used": row.theta_used.to_decimal(digits),
                                "e2_n": row.e2_n.to_string(),
                                "clamped": row.clamped,
                            })
                        })
                        .collect();
                    emit_json(
                        out,
                        &json!({ "rows": rows, "audit": audit_json(&report.audit, digits) }),
                    )?;
                }
            }
        }
        Cmd::Audit { q, sample } => {
            if opts.form.is_none() && opts.expr.is_none() {
                // Published-constant audit of the exponent pipeline.
                let flags = exponents::full_audit()?;
                let digits = opts.digits as usize;
                match opts.output {
                    OutputKind::Csv => audit_csv(out, &flags, digits)?,
                    OutputKind::Json => {
                        emit_json(out, &json!({ "audit": audit_json(&flags, digits) }))?
                    }
                }
            } else {
                let form = load_form(&opts)?;
                let q_list = parse_u64_list(&q)?;
                let rows = expsums::bound_audit(
                    &form,
                    &q_list,
                    sample as usize,
                    opts.seed,
                    budget,
                    &mut ctx,
                )?;
                match opts.output {
                    OutputKind::Csv => {
                        let table: Vec<Vec<String>> = rows
                            .iter()
                            .map(|r| {
                                let sampled: Vec<String> =
                                    r.sampled_a.iter().map(|a| a.to_string()).collect();
                                vec![
                                    r.q.to_string(),
                                    r.argmax_a.to_string(),
                                    ctx.render(&r.max_abs),
                                    ctx.render(&r.max_ratio),
                                    r.cap_ok.to_string(),
                                    sampled.join(" "),
                                ]
                            })
                            .collect();
                        csv_section(
                            out,
                            &["q", "argmax_a", "max_abs", "max_ratio", "cap_ok", "sampled_a"],
                            &table,
                        )?;
                    }
                    OutputKind::Json => {
                        let table: Vec<Value> = rows
                            .iter()
                            .map(|r| {
                                json!({
                                    "q": r.q,
                                    "argmax_a": r.argmax_a,
                                    "max_abs": ctx.render(&r.max_abs),
                                    "max_ratio": ctx.render(&r.max_ratio),
                                    "cap_ok": r.cap_ok,
                                    "sampled_a": r.sampled_a,
                                })
                            })
                            .collect();
                        emit_json(out, &json!({ "rows": table, "seed": opts.seed }))?;
                    }
                }
            }
        }
        Cmd::Search { amax, strategy, timings, corpus } => {
            if corpus {
                let forms = load_corpus(&opts)?;
                let rows = search::lambda_upper_profile(&forms, amax, budget, &mut ctx);
                match opts.output {
                    OutputKind::Csv => {
                        let table: Vec<Vec<String>> = rows
                            .iter()
                            .map(|r| {
                                let (status, lambda, frontier, points) = match &r.outcome {
                                    Some(o) => (
                                        o.status.as_str().to_string(),
                                        o.lambda.map(|l| l.to_string()).unwrap_or_default(),
                                        o.frontier.to_string(),
                                        o.points_examined.to_string(),
                                    ),
                                    None => Default::default(),
                                };
                                vec![
                                    r.index.to_string(),
                                    r.form_text.clone(),
                                    r.height.map(|h| h.to_string()).unwrap_or_default(),
                                    status,
                                    lambda,
                                    frontier,
                                    points,
                                    r.log_ratio
                                        .as_ref()
                                        .map(|x| ctx.render(x))
                                        .unwrap_or_default(),
                                    r.error.clone().unwrap_or_default(),
                                ]
                            })
                            .collect();
                        csv_section(
                            out,
                            &[
                                "index", "form", "M", "status", "lambda", "frontier",
                                "points_examined", "log_ratio", "error",
                            ],
                            &table,
                        )?;
                    }
                    OutputKind::Json => {
                        let table: Vec<Value> = rows
                            .iter()
                            .map(|r| {
                                json!({
                                    "index": r.index,
                                    "form": r.form_text,
                                    "M": r.height.map(|h| h.to_string()),
                                    "outcome": r.outcome.as_ref().map(outcome_json),
                                    "log_ratio": r.log_ratio.as_ref().map(|x| ctx.render(x)),
                                    "error": r.error,
                                })
                            })
                            .collect();
                        emit_json(out, &json!({ "rows": table }))?;
                    }
                }
            } else {
                let form = load_form(&opts)?;
                let started = Instant::now();
                let outcome = search::find_least_zero(&form, amax, strategy.into(), budget)?;
                let wall_ms = started.elapsed().as_millis();
                match opts.output {
                    OutputKind::Csv => {
                        let witness = outcome
                            .witness
                            .as_ref()
                            .map(|w| {
                                let v: Vec<String> =
                                    w.x.iter().map(|c| c.to_string()).collect();
                                v.join(" ")
                            })
                            .unwrap_or_default();
                        let verified = outcome
                            .witness
                            .as_ref()
                            .map(|w| w.verified.to_string())
                            .unwrap_or_default();
                        let mut header = vec![
                            "status",
                            "lambda",
                            "witness",
                            "verified",
                            "frontier",
                            "points_examined",
                        ];
                        let mut row = vec![
                            outcome.status.as_str().to_string(),
                            outcome.lambda.map(|l| l.to_string()).unwrap_or_default(),
                            witness,
                            verified,
                            outcome.frontier.to_string(),
                            outcome.points_examined.to_string(),
                        ];
                        if timings {
                            header.push("wall_time_ms");
                            row.push(wall_ms.to_string());
                        }
                        csv_section(out, &header, &[row])?;
                    }
                    OutputKind::Json => {
                        let mut v = outcome_json(&outcome);
                        if timings {
                            v["wall_time_ms"] = json!(wall_ms.to_string());
                        }
                        emit_json(out, &v)?;
                    }
                }
            }
        }
        Cmd::CountBox { center, rho, scale, alpha } => {
            let form = load_form(&opts)?;
            let z: Vec<BigRational> = center
                .split(',')
                .map(parse_rational)
                .collect::<Result<_>>()?;
            let bx = expsums::BoxSpec::new(z, parse_rational(&rho)?, parse_rational(&scale)?)?;
            let zeros = expsums::zero_count_in_box(&form, &bx, budget)?;
            let alpha = alpha.as_deref().map(parse_rational).transpose()?;
            let gen = alpha
                .as_ref()
                .map(|al| expsums::generating_sum(&form, &bx, al, budget, &mut ctx))
                .transpose()?;
            match opts.output {
                OutputKind::Csv => {
                    let mut header = vec!["dim", "lattice_points", "zeros"];
                    let mut row = vec![
                        bx.dim().to_string(),
                        bx.lattice_size().to_string(),
                        zeros.to_string(),
                    ];
                    if let (Some(al), Some(g)) = (&alpha, &gen) {
                        header.extend(["alpha", "re", "im", "abs"]);
                        let abs = ctx.abs_complex(&g.re, &g.im);
                        row.push(rational_string(al));
                        row.push(ctx.render(&g.re));
                        row.push(ctx.render(&g.im));
                        row.push(ctx.render(&abs));
                    }
                    csv_section(out, &header, &[row])?;
                }
                OutputKind::Json => {
                    let mut v = json!({
                        "dim": bx.dim(),
                        "lattice_points": bx.lattice_size().to_string(),
                        "zeros": zeros.to_string(),
                    });
                    if let (Some(al), Some(g)) = (&alpha, &gen) {
                        let abs = ctx.abs_complex(&g.re, &g.im);
                        v["alpha"] = json!(rational_string(al));
                        v["re"] = json!(ctx.render(&g.re));
                        v["im"] = json!(ctx.render(&g.im));
                        v["abs"] = json!(ctx.render(&abs));
                        v["zero_class"] = json!(g.zero_class().to_string());
                    }
                    emit_json(out, &v)?;
                }
            }
        }
    }
    Ok(())
}

fn outcome_json(o: &search::SearchOutcome) -> Value {
    json!({
        "status": o.status.as_str(),
        "lambda": o.lambda,
        "witness": o.witness.as_ref().map(|w| {
            json!({ "x": w.x, "norm": w.norm, "verified": w.verified })
        }),
        "frontier": o.frontier,
        "points_examined": o.points_examined.to_string(),
    })
}

fn audit_csv(out: &mut Vec<u8>, flags: &[exponents::AuditFlag], digits: usize) -> Result<()> {
    let rows: Vec<Vec<String>> = flags
        .iter()
        .map(|f| {
            vec![
                f.constant.clone(),
                decimal_or_fraction(&f.paper_value),
                f.recomputed.to_decimal(digits),
                f.abs_diff().to_decimal(digits),
            ]
        })
        .collect();
    csv_section(out, &["constant", "paper_value", "recomputed", "abs_diff"], &rows)
}

fn audit_json(flags: &[exponents::AuditFlag], digits: usize) -> Value {
    let rows: Vec<Value> = flags
        .iter()
        .map(|f| {
            json!({
                "constant": f.constant,
                "paper_value": rational_string(&f.paper_value),
                "recomputed": f.recomputed.to_decimal(digits),
                "abs_diff": f.abs_diff().to_decimal(digits),
            })
        })
        .collect();
    Value::Array(rows)
}

fn parse_range(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Invalid(format!("range '{}' is not lo..hi", s));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        Ok((lo, hi))
    } else {
        let n: u32 = s.trim().parse().map_err(|_| bad())?;
        Ok((n, n))
    }
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("modulus '{}' is not an integer", t)))
        })
        .collect()
}
