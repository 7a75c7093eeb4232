use std::collections::BTreeSet;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use metacomm::classes::PrimeClasses;
use metacomm::cycles::{cycle_structure, predict, FixedPrediction};
use metacomm::fixed::{common_left_right_divisors, fixed_classes, FixedMethod};
use metacomm::metacommute::{permutation_conic, permutation_direct, Permutation};
use metacomm::search::{construct_p_cycle_xi, distinct_p_cycle_pair, search_xi_with_length, SearchReport};
use metacomm::verify::{run_verify, Check, Status, VerifyConfig};
use metacomm::{Error, HurwitzInt};

#[derive(Parser)]
#[command(name = "metacomm", version, about = "Metacommutation of Hurwitz primes")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Largest p for which the classes above p are enumerated.
    #[arg(long, global = true, default_value_t = 20_000)]
    max_p: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Direct,
    Conic,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Congruence,
    Trace,
}

#[derive(Subcommand)]
enum Command {
    /// List the p + 1 classes of primes of norm p with their conic points.
    Primes {
        #[arg(long)]
        p: u64,
    },
    /// The permutation τ induced by ξ on the classes above p.
    Permute {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        xi: HurwitzInt,
        #[arg(long, value_enum, default_value_t = EngineArg::Direct)]
        engine: EngineArg,
    },
    /// Cycle structure of τ, empirical or predicted.
    Cycles {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        xi: HurwitzInt,
        /// Skip building the permutation.
        #[arg(long)]
        predict_only: bool,
    },
    /// First ξ in a coordinate box whose cycle length is T.
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        length: u64,
        /// Box half-width for the coordinates.
        #[arg(long, default_value_t = 3)]
        bounds: u64,
    },
    /// ξ with a single p-cycle; with --pair, two such ξ with different fixed points.
    Construct {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        pair: bool,
    },
    /// Classes fixed by τ.
    Fixed {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        xi: HurwitzInt,
        #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
        method: MethodArg,
    },
    /// Elements of norm M dividing α on both sides.
    CommonDivisors {
        #[arg(long, allow_hyphen_values = true)]
        alpha: HurwitzInt,
        #[arg(long)]
        m: u64,
    },
    /// Re-check every law on seeded random samples.
    Verify {
        #[arg(long, default_value_t = 3)]
        p_min: u64,
        #[arg(long, default_value_t = 100)]
        p_max: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1 << 40)]
        q_bound: u64,
        /// Comma-separated check names; all checks when omitted.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        checks: Option<Vec<String>>,
    },
}

/// Rendered result: a structured document plus the same data as rows.
struct Output {
    doc: serde_json::Value,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    /// A check failed or nothing was found.
    failed: bool,
}

impl Output {
    fn new(doc: impl Serialize, columns: Vec<&'static str>, rows: Vec<Vec<String>>) -> Result<Self, Error> {
        let doc = serde_json::to_value(doc).map_err(|e| Error::Invariant(e.to_string()))?;
        Ok(Self { doc, columns, rows, failed: false })
    }

    fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.doc)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            Format::Table => {
                let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| {
                    let padded: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(self.columns.clone()))?;
                for row in &self.rows {
                    writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
                }
                Ok(())
            }
        }
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn classes_for(p: u64, max_p: u64) -> Result<PrimeClasses, Error> {
    if p > max_p {
        return Err(Error::Domain(format!("p = {p} exceeds --max-p {max_p}")));
    }
    PrimeClasses::enumerate(p)
}

fn permutation(xi: &HurwitzInt, classes: &PrimeClasses, engine: EngineArg) -> Result<Permutation, Error> {
    match engine {
        EngineArg::Direct => permutation_direct(xi, classes),
        EngineArg::Conic => permutation_conic(xi, classes.conic()),
    }
}

fn cycles_text(perm: &Permutation) -> String {
    perm.cycles()
        .iter()
        .map(|c| format!("({})", c.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")))
        .collect()
}

fn search_rows(reports: &[&SearchReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            let cert = r.certificate.as_ref();
            vec![
                r.p.to_string(),
                opt(r.xi),
                opt(cert.map(|c| c.q)),
                opt(cert.and_then(|c| c.k)),
                opt(cert.and_then(|c| c.decomposition).map(|[b, c, d]| format!("{b},{c},{d}"))),
                opt(r.structure.and_then(|s| s.cycle_length)),
                format!("{:?}", r.fixed_classes),
                r.verified.to_string(),
                r.exhausted.to_string(),
            ]
        })
        .collect()
}

const SEARCH_COLUMNS: [&str; 9] = ["p", "xi", "q", "k", "decomposition", "length", "fixed", "verified", "exhausted"];

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Primes { p } => {
            let classes = classes_for(*p, cli.max_p)?;
            let rows = classes
                .classes()
                .iter()
                .map(|c| vec![c.index.to_string(), c.rep.to_string(), c.point.to_string()])
                .collect();
            Output::new(classes.classes(), vec!["index", "rep", "point"], rows)
        }
        Command::Permute { p, xi, engine } => {
            let classes = classes_for(*p, cli.max_p)?;
            let perm = permutation(xi, &classes, *engine)?;
            let rows = perm.image.iter().enumerate().map(|(k, i)| vec![k.to_string(), i.to_string()]).collect();
            let doc = json!({
                "p": p,
                "xi": xi,
                "engine": perm.engine,
                "image": perm.image,
                "cycles": cycles_text(&perm),
            });
            Output::new(doc, vec!["class", "image"], rows)
        }
        Command::Cycles { p, xi, predict_only } => {
            let pred = predict(xi, *p)?;
            let mut doc = json!({
                "p": p,
                "xi": xi,
                "q": pred.q,
                "fixed_count": pred.fixed_count,
                "length": pred.length,
                "cycle_count": pred.cycle_count,
                "sign": pred.sign,
                "f_poly": pred.f_poly,
                "matched_cyclotomic_t": pred.matched_cyclotomic_t,
            });
            let mut failed = false;
            if !predict_only {
                let perm = permutation_direct(xi, &classes_for(*p, cli.max_p)?)?;
                let st = cycle_structure(&perm)?;
                let fixed_ok = match pred.fixed_count {
                    FixedPrediction::Identity => perm.is_identity(),
                    FixedPrediction::Count(n) => st.fixed_count == n as usize,
                };
                failed = !fixed_ok || pred.length != st.cycle_length || pred.sign != st.sign;
                doc["fixed_count"] = json!(st.fixed_count);
                doc["length"] = json!(st.cycle_length);
                doc["cycle_count"] = json!(st.cycle_count);
                doc["sign"] = json!(st.sign);
                doc["predicted"] = json!(pred);
                doc["cycles"] = json!(cycles_text(&perm));
                doc["agrees"] = json!(!failed);
            }
            let columns = vec!["p", "xi", "q", "fixed_count", "length", "cycle_count", "sign", "f_poly", "matched_cyclotomic_t"];
            let cell = |k: &str| match &doc[k] {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => String::new(),
                v => v.to_string(),
            };
            let rows = vec![columns.iter().map(|c| cell(c)).collect()];
            let mut out = Output::new(&doc, columns, rows)?;
            out.failed = failed;
            Ok(out)
        }
        Command::Search { p, length, bounds } => {
            let r = search_xi_with_length(*p, *length, *bounds)?;
            let mut out = Output::new(&r, SEARCH_COLUMNS.to_vec(), search_rows(&[&r]))?;
            out.failed = !r.verified;
            Ok(out)
        }
        Command::Construct { p, pair } => {
            if *pair {
                let (a, b) = distinct_p_cycle_pair(*p)?;
                let mut out = Output::new([&a, &b], SEARCH_COLUMNS.to_vec(), search_rows(&[&a, &b]))?;
                out.failed = !(a.verified && b.verified && a.fixed_classes != b.fixed_classes);
                Ok(out)
            } else {
                let r = construct_p_cycle_xi(*p)?;
                let mut out = Output::new(&r, SEARCH_COLUMNS.to_vec(), search_rows(&[&r]))?;
                out.failed = !r.verified;
                Ok(out)
            }
        }
        Command::Fixed { p, xi, method } => {
            let classes = classes_for(*p, cli.max_p)?;
            let method = match method {
                MethodArg::Direct => FixedMethod::Direct,
                MethodArg::Congruence => FixedMethod::Congruence,
                MethodArg::Trace => FixedMethod::Trace,
            };
            let fixed = fixed_classes(xi, &classes, method)?;
            let listed: Vec<_> = fixed.iter().map(|&k| &classes.classes()[k]).collect();
            let rows = listed
                .iter()
                .map(|c| vec![c.index.to_string(), c.rep.to_string(), c.point.to_string()])
                .collect();
            let doc = json!({ "p": p, "xi": xi, "method": method, "fixed": listed });
            Output::new(doc, vec!["index", "rep", "point"], rows)
        }
        Command::CommonDivisors { alpha, m } => {
            let found = common_left_right_divisors(alpha, *m)?;
            let rows = found.iter().map(|b| vec![b.to_string(), b.canonical_left_associate().to_string()]).collect();
            let doc = json!({ "alpha": alpha, "m": m, "divisors": found });
            Output::new(doc, vec!["beta", "left_class"], rows)
        }
        Command::Verify { p_min, p_max, samples, q_bound, checks } => {
            let checks: BTreeSet<Check> = match checks {
                None => Check::ALL.into_iter().collect(),
                Some(names) => names
                    .iter()
                    .filter(|n| !n.is_empty())
                    .map(|n| n.parse())
                    .collect::<Result<_, _>>()?,
            };
            let cfg = VerifyConfig {
                p_min: *p_min,
                p_max: *p_max,
                q_bound: *q_bound,
                samples_per_p: *samples,
                seed: cli.seed,
                checks,
                fault: None,
            };
            let report = run_verify(&cfg)?;
            let rows = report
                .records
                .iter()
                .map(|r| {
                    let status = match r.status {
                        Status::Pass => "pass",
                        Status::Fail => "fail",
                        Status::Skip => "skip",
                    };
                    vec![
                        r.check.to_string(),
                        r.p.to_string(),
                        opt(r.xi),
                        opt(r.q),
                        status.to_string(),
                        r.detail.clone(),
                    ]
                })
                .collect();
            let mut out = Output::new(&report.records, vec!["check", "p", "xi", "q", "status", "detail"], rows)?;
            out.failed = !report.passed();
            if !report.passed() || matches!(cli.format, Format::Table) {
                for (check, pass, fail, skip) in report.summary() {
                    eprintln!("{check}: {pass} pass, {fail} fail, {skip} skip");
                }
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if let Err(e) = out.write(cli.format, &mut stdout) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(out.failed as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Theorem(_) | Error::Invariant(_) | Error::SearchFailure(_) => ExitCode::from(1),
                Error::Domain(_) | Error::Parse(_) | Error::Overflow(_) => ExitCode::from(2),
            }
        }
    }
}
