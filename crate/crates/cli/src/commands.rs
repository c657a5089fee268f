// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use ncfree::bounds::{self, BoundCertificate};
use ncfree::convolution::{boxplus_k, Convolver, DIRECT_CEILING};
use ncfree::enumeration::{iter_k_divisible, iter_k_equal, iter_nc, iter_nc21, FAMILY_CEILING};
use ncfree::io::{parse_spec, ConvolutionReport};
use ncfree::measures::{self, LimitPoint};
use ncfree::rational::{int, parse_rational, to_decimal};
use ncfree::selftest;
use ncfree::{BigRational, CountTable, Family, MeasureSpec, NoncrossingPartition, Strategy, TypeVector};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    BoundsArgs, Cli, Command, ConvolveArgs, CountArgs, EnumerateArgs, Format, KrewerasArgs, LawSource, LimitsArgs, Op,
    PositivityArgs,
};

/// Largest ground set streamed by `enumerate` without `--unsafe-ceiling`.
pub const STREAM_CEILING: usize = 14;
/// Environment variable holding the number of decimals in reports.
pub const PRECISION_VAR: &str = "NCFREE_PRECISION";
const DEFAULT_PRECISION: usize = 12;
const NONNEG_CHECK_ORDER: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] ncfree::Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    CheckFailed(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
            CliError::CheckFailed(_) => "check-failed",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let format = cli.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Count(a) => count(a, format, out),
        Command::Enumerate(a) => enumerate(a, format, cli.unsafe_ceiling, out),
        Command::Kreweras(a) => kreweras(a, format, out),
        Command::Convolve(a) => convolve(a, format, cli.unsafe_ceiling, out),
        Command::Bounds(a) => bounds_cmd(a, format, out),
        Command::Limits(a) => limits(a, a.out.or(cli.format).unwrap_or(Format::Json), out),
        Command::Positivity(a) => positivity(a, format, out),
        Command::Selftest => selftest_cmd(cli.format, out),
    }
}

fn precision() -> Result<usize> {
    match std::env::var(PRECISION_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{PRECISION_VAR} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string(value).expect("reports always serialize");
    writeln!(out, "{text}")?;
    Ok(())
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn csv_row(out: &mut dyn Write, fields: &[String]) -> Result<()> {
    let row: Vec<String> = fields.iter().map(|f| csv_quote(f)).collect();
    writeln!(out, "{}", row.join(","))?;
    Ok(())
}

fn require<T: Copy>(value: Option<T>, flag: &str, why: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required {why}")))
}

fn type_vector(counts: &[usize], n: Option<usize>) -> Result<TypeVector> {
    let implied: usize = counts.iter().enumerate().map(|(i, r)| (i + 1) * r).sum();
    let n = n.unwrap_or(implied);
    let mut padded = counts.to_vec();
    padded.resize(n.max(counts.len()), 0);
    Ok(TypeVector::new(n, &padded)?)
}

fn count(a: &CountArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let table = match a.family {
        Family::Nc => CountTable::family(Family::Nc, 1, require(a.n, "n", "for nc")?)?,
        Family::KEqual | Family::KDivisible | Family::Nc21 => {
            let why = format!("for {}", a.family);
            CountTable::family(a.family, require(a.k, "k", &why)?, require(a.n, "n", &why)?)?
        }
        Family::Type => {
            let t = a.block_type.as_deref().ok_or_else(|| CliError::Usage("--type is required for type".into()))?;
            CountTable::of_type(&type_vector(t, a.n)?)
        }
        Family::PairType => {
            let missing = || CliError::Usage("--type and --kr-type are required for pair-type".into());
            let t = type_vector(a.block_type.as_deref().ok_or_else(missing)?, a.n)?;
            let b = type_vector(a.kr_type.as_deref().ok_or_else(missing)?, Some(t.n()))?;
            CountTable::of_pair_type(&t, &b)
        }
    };
    let value = table.count.to_string();
    match format {
        Format::Json => json_line(out, &json!({ "count": value })),
        Format::Csv => {
            writeln!(out, "count")?;
            writeln!(out, "{value}")?;
            Ok(())
        }
    }
}

fn enumerate(a: &EnumerateArgs, format: Format, unsafe_ceiling: bool, out: &mut dyn Write) -> Result<()> {
    let (k, ground) = match a.family {
        Family::Nc => (1, a.n),
        Family::KEqual | Family::KDivisible | Family::Nc21 => {
            let k = require(a.k, "k", &format!("for {}", a.family))?;
            (k, k.saturating_mul(a.n))
        }
        Family::Type | Family::PairType => {
            return Err(CliError::Usage(format!("family {} cannot be enumerated; use count", a.family)))
        }
    };
    if ground > STREAM_CEILING && !unsafe_ceiling {
        return Err(ncfree::Error::ResourceLimit(format!(
            "enumeration over [{ground}] exceeds the ceiling {STREAM_CEILING}; pass --unsafe-ceiling to override"
        ))
        .into());
    }
    let stream: Box<dyn Iterator<Item = NoncrossingPartition>> = match a.family {
        Family::Nc => Box::new(iter_nc(a.n)?),
        Family::KEqual => Box::new(iter_k_equal(k, a.n)?),
        Family::KDivisible => Box::new(iter_k_divisible(k, a.n)?),
        _ => Box::new(iter_nc21(k, a.n)?),
    };
    if format == Format::Csv {
        writeln!(out, "index,partition")?;
    }
    for (i, p) in stream.enumerate() {
        match format {
            Format::Json => json_line(out, &p)?,
            Format::Csv => csv_row(out, &[i.to_string(), p.to_string()])?,
        }
    }
    Ok(())
}

fn kreweras(a: &KrewerasArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let p: NoncrossingPartition = a.input.parse()?;
    let kr = p.kreweras();
    let components = a.k.map(|k| p.decompose_kreweras(k)).transpose()?;
    match format {
        Format::Json => {
            let mut doc = json!({ "input": p.to_string(), "kreweras": kr.to_string(), "blocks": kr });
            if let Some(cs) = &components {
                doc["components"] = json!(cs.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            }
            json_line(out, &doc)
        }
        Format::Csv => {
            let mut header = vec!["input".to_owned(), "kreweras".to_owned()];
            let mut row = vec![p.to_string(), kr.to_string()];
            for (j, c) in components.iter().flatten().enumerate() {
                header.push(format!("component_{}", j + 1));
                row.push(c.to_string());
            }
            csv_row(out, &header)?;
            csv_row(out, &row)
        }
    }
}

fn read_source(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn load_specs(paths: &[std::path::PathBuf]) -> Result<Vec<MeasureSpec>> {
    if paths.iter().filter(|p| p.as_path() == Path::new("-")).count() > 1 {
        return Err(CliError::Usage("stdin ('-') may be given only once".into()));
    }
    paths.iter().map(|p| Ok(parse_spec(&read_source(p)?)?)).collect()
}

fn load_law(source: &LawSource, order: usize) -> Result<MeasureSpec> {
    match (&source.law, &source.spec) {
        (Some(law), None) => Ok(law.spec(order)?),
        (None, Some(path)) => Ok(parse_spec(&read_source(path)?)?),
        _ => Err(CliError::Usage("exactly one of --law or --spec is required".into())),
    }
}

fn convolve(a: &ConvolveArgs, format: Format, unsafe_ceiling: bool, out: &mut dyn Write) -> Result<()> {
    let specs = load_specs(&a.specs)?;
    let engine = if unsafe_ceiling { Convolver::with_direct_ceiling(FAMILY_CEILING) } else { Convolver::default() };
    let ceiling = if unsafe_ceiling { FAMILY_CEILING } else { DIRECT_CEILING };
    let resolved = match a.strategy {
        Strategy::Auto if specs.len() * a.order <= ceiling => Strategy::Direct,
        Strategy::Auto => Strategy::Iterated,
        s => s,
    };
    let (op, strategy, spec) = match a.op {
        Op::Boxtimes => ("boxtimes", resolved.to_string(), engine.boxtimes_k(&specs, a.order, resolved)?),
        Op::Boxplus => ("boxplus", "additive".to_owned(), boxplus_k(&specs, a.order)?),
        Op::BooleanBoxtimes => {
            let spec = match resolved {
                Strategy::Direct => MeasureSpec::from_cumulants(engine.boxtimes_k_boolean(&specs, a.order)?),
                _ => engine.boxtimes_k(&specs, a.order, Strategy::Iterated)?,
            };
            ("boolean-boxtimes", resolved.to_string(), spec)
        }
    };
    let report = ConvolutionReport::new(op, &strategy, specs.len(), &spec);
    match format {
        Format::Json => json_line(out, &report),
        Format::Csv => {
            csv_row(out, &["n", "free_cumulant", "moment", "boolean_cumulant"].map(String::from))?;
            for n in 0..report.order {
                csv_row(
                    out,
                    &[
                        (n + 1).to_string(),
                        report.free_cumulants[n].to_string(),
                        report.moments[n].to_string(),
                        report.boolean_cumulants[n].to_string(),
                    ],
                )?;
            }
            Ok(())
        }
    }
}

fn rational_flag(text: &Option<String>) -> Result<Option<BigRational>> {
    Ok(text.as_deref().map(parse_rational).transpose()?)
}

#[derive(Serialize)]
struct EdgeEstimate {
    n: usize,
    root: String,
    decimal: String,
}

fn bounds_cmd(a: &BoundsArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let digits = precision()?;
    let has_source = a.source.law.is_some() || a.source.spec.is_some();
    // Named laws are materialized far enough to make the --nonneg check meaningful.
    let order = a.edge_order.unwrap_or(0).max(NONNEG_CHECK_ORDER);
    let spec = if has_source { Some(load_law(&a.source, order)?) } else { None };
    let l = match (rational_flag(&a.support_bound)?, &spec) {
        (Some(l), _) => l,
        (None, Some(s)) => s.support_bound().cloned().ok_or_else(|| {
            ncfree::Error::Precondition("the spec declares no support bound; pass --L explicitly".into())
        })?,
        (None, None) => return Err(CliError::Usage("--L (or --law/--spec) is required".into())),
    };
    let sigma2 = match (rational_flag(&a.sigma2)?, &spec) {
        (Some(v), _) => v,
        (None, Some(s)) => s.variance().ok_or(ncfree::Error::Truncation { needed: 2, available: s.order() })?,
        (None, None) => return Err(CliError::Usage("--sigma2 (or --law/--spec) is required".into())),
    };
    if let Some(s) = &spec {
        if s.mean() != int(1) {
            return Err(ncfree::Error::Precondition(format!("bounds need mean 1, got {}", s.mean())).into());
        }
        if a.nonneg && s.free_cumulants().values().iter().any(|c| c < &int(0)) {
            return Err(
                ncfree::Error::Precondition("--nonneg given but the spec has a negative free cumulant".into()).into()
            );
        }
    }
    let cert: BoundCertificate = bounds::certify(a.k, &l, &sigma2, a.nonneg)?;
    let estimates = match a.edge_order {
        None => Vec::new(),
        Some(order) => {
            let s = spec.as_ref().ok_or_else(|| CliError::Usage("--edge-order needs --law or --spec".into()))?;
            let power = Convolver::default().boxtimes_powers(s, a.k, order)?.pop().expect("k >= 1");
            let power = MeasureSpec::from_cumulants(power);
            bounds::estimate_support_edge(&power, order, digits)?
                .into_iter()
                .enumerate()
                .map(|(i, r)| EdgeEstimate { n: i + 1, decimal: to_decimal(&r, digits), root: r.to_string() })
                .collect()
        }
    };
    match format {
        Format::Json => json_line(out, &json!({ "certificate": cert, "edge_estimates": estimates })),
        Format::Csv => {
            if estimates.is_empty() {
                csv_row(out, &["k", "L", "sigma2", "lower", "upper", "constant"].map(String::from))?;
                csv_row(
                    out,
                    &[
                        cert.k.to_string(),
                        cert.support_bound.to_string(),
                        cert.sigma2.to_string(),
                        to_decimal(&cert.lower, digits),
                        to_decimal(&cert.upper, digits),
                        serde_json::to_value(cert.constant)
                            .expect("serializes")
                            .as_str()
                            .unwrap_or_default()
                            .to_owned(),
                    ],
                )
            } else {
                csv_row(out, &["n", "root"].map(String::from))?;
                for e in &estimates {
                    csv_row(out, &[e.n.to_string(), e.decimal.clone()])?;
                }
                Ok(())
            }
        }
    }
}

fn limits(a: &LimitsArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let digits = precision()?;
    let spec = load_law(&a.source, a.n.max(2))?;
    let points: Vec<LimitPoint> = if a.boolean {
        measures::sakuma_boolean_limit_series(&spec, a.n, &a.kgrid)?
    } else {
        measures::sakuma_limit_series(&spec, a.n, &a.kgrid)?
    };
    let flavor = if a.boolean { "boolean" } else { "free" };
    match format {
        Format::Json => {
            let rows: Vec<_> = points
                .iter()
                .map(|p| {
                    json!({
                        "k": p.k,
                        "n": p.n,
                        "computed": p.computed.to_string(),
                        "target": p.target.to_string(),
                        "computed_decimal": to_decimal(&p.computed, digits),
                        "relative_error": to_decimal(&p.relative_error(), digits),
                    })
                })
                .collect();
            json_line(out, &json!({ "flavor": flavor, "points": rows }))
        }
        Format::Csv => {
            csv_row(out, &["k", "n", "computed", "target", "relative_error"].map(String::from))?;
            for p in &points {
                csv_row(
                    out,
                    &[
                        p.k.to_string(),
                        p.n.to_string(),
                        to_decimal(&p.computed, digits),
                        to_decimal(&p.target, digits),
                        to_decimal(&p.relative_error(), digits),
                    ],
                )?;
            }
            Ok(())
        }
    }
}

fn positivity(a: &PositivityArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let spec = load_law(&a.source, a.n)?;
    let scan = measures::eventual_positivity_scan(&spec, a.n, a.k_max)?;
    match format {
        Format::Json => json_line(out, &scan),
        Format::Csv => {
            let mut header = vec!["k".to_owned()];
            header.extend((1..=a.n).map(|n| format!("kappa_{n}")));
            csv_row(out, &header)?;
            for (i, row) in scan.cumulants.iter().enumerate() {
                let mut fields = vec![(i + 1).to_string()];
                fields.extend(row.iter().map(|x| x.to_string()));
                csv_row(out, &fields)?;
            }
            Ok(())
        }
    }
}

fn selftest_cmd(format: Option<Format>, out: &mut dyn Write) -> Result<()> {
    let report = selftest::run();
    match format {
        None => {
            for c in &report.checks {
                if c.passed {
                    writeln!(out, "PASS {}", c.name)?;
                } else {
                    writeln!(out, "FAIL {}: {}", c.name, c.detail)?;
                }
            }
        }
        Some(Format::Json) => json_line(out, &json!({ "passed": report.passed(), "checks": report.checks }))?,
        Some(Format::Csv) => {
            csv_row(out, &["check", "status", "detail"].map(String::from))?;
            for c in &report.checks {
                csv_row(
                    out,
                    &[c.name.to_owned(), if c.passed { "pass" } else { "fail" }.to_owned(), c.detail.clone()],
                )?;
            }
        }
    }
    eprintln!("selftest finished in {} ms", report.elapsed_ms);
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<_> = report.failures().map(|c| c.name).collect();
        Err(CliError::CheckFailed(format!("failed checks: {}", names.join(", "))))
    }
}
