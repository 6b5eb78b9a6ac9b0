mod config;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use tauzeta::identities::verify::parse_identity;
use tauzeta::identities::{evaluate, verify, Method, Suite, VerifyParams};
use tauzeta::qexpansion::TauTable;
use tauzeta::{Error, Status, VerificationReport};

use config::{Cli, Command, RunConfig};

const EXIT_RESOURCE: u8 = 2;
const EXIT_UNCONVERGED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;
const EXIT_FAIL_BASE: u8 = 100;

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Domain(_) => EXIT_USAGE,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Unconverged(_) | Error::SlowConvergence(_) => EXIT_UNCONVERGED,
        _ => EXIT_FAIL_BASE + 1,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        fail(exit_code_for(&e), e.to_string())
    }
}

#[derive(Serialize)]
struct TauRow {
    n: usize,
    tau: String,
}

#[derive(Serialize)]
struct LValueRecord {
    k: i64,
    method: String,
    value: String,
    err_est: String,
    precision_bits: u32,
    nodes: u64,
    terms: u64,
    converged: bool,
    elapsed_ms: u64,
}

fn write(cfg: &RunConfig, body: &str) -> Result<(), Failure> {
    output::emit(cfg, body).map_err(|e| fail(EXIT_IO, format!("cannot write output: {e}")))
}

fn cmd_tau(limit: usize, cfg: &RunConfig) -> Result<u8, Failure> {
    if limit == 0 {
        return Err(fail(EXIT_USAGE, "--limit must be at least 1"));
    }
    let table = TauTable::compute_with_budget(limit, cfg.qseries_order)?;
    let rows: Vec<TauRow> = table.iter().map(|(n, t)| TauRow { n, tau: t.to_string() }).collect();
    let body = output::render(&rows, cfg.format, |r| format!("{} {}", r.n, r.tau)).map_err(|e| fail(EXIT_IO, e))?;
    write(cfg, &body)?;
    Ok(0)
}

fn cmd_lvalue(k: i64, method: &str, cfg: &RunConfig) -> Result<u8, Failure> {
    let method: Method = method.parse()?;
    let start = Instant::now();
    let l = evaluate(method, k, &cfg.ctx, &cfg.opts)?;
    let record = LValueRecord {
        k,
        method: method.to_string(),
        value: l.value.to_decimal_string(),
        err_est: l.err_est.to_decimal_string(),
        precision_bits: l.value.bits(),
        nodes: l.nodes,
        terms: l.terms,
        converged: l.converged,
        elapsed_ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
    };
    let body = output::render(std::slice::from_ref(&record), cfg.format, |r| {
        format!(
            "L(Δ,{}) = {} ± {} [{}; {} bits; {} nodes; {} terms; {} ms]",
            r.k, r.value, r.err_est, r.method, r.precision_bits, r.nodes, r.terms, r.elapsed_ms
        )
    })
    .map_err(|e| fail(EXIT_IO, e))?;
    write(cfg, &body)?;
    if !l.converged {
        if let Some(d) = &l.detail {
            eprintln!("warning: {d}");
        }
        return Ok(EXIT_UNCONVERGED);
    }
    Ok(0)
}

fn report_line(r: &VerificationReport) -> String {
    let k = r.k.map(|k| format!(" k={k}")).unwrap_or_default();
    format!(
        "{} {}{}: rel_err {} (tolerance {}), {} ms",
        r.status.as_str().to_uppercase(),
        r.identity,
        k,
        r.rel_err,
        r.tolerance,
        r.elapsed_ms
    )
}

fn cmd_verify(
    suite: Option<&str>,
    id: Option<&str>,
    k: Option<i64>,
    n: Option<usize>,
    cfg: &RunConfig,
) -> Result<u8, Failure> {
    let base = VerifyParams {
        k: None,
        n,
        tolerance: cfg.tolerance,
        opts: cfg.opts,
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(fail(EXIT_USAGE, "--n must be at least 1"));
        }
        if n > cfg.qseries_order {
            return Err(fail(
                EXIT_RESOURCE,
                format!("--n {n} exceeds the q-series budget {}", cfg.qseries_order),
            ));
        }
    }
    let jobs: Vec<(tauzeta::identities::IdentityId, Option<i64>)> = match (suite, id) {
        (Some(s), _) => {
            if k.is_some() {
                return Err(fail(EXIT_USAGE, "--k applies to --id only"));
            }
            s.parse::<Suite>()?.jobs()
        }
        (None, Some(name)) => {
            let (id, embedded) = parse_identity(name)?;
            if embedded.is_some() && k.is_some() && embedded != k {
                return Err(fail(EXIT_USAGE, format!("{name} conflicts with --k {}", k.unwrap())));
            }
            vec![(id, embedded.or(k))]
        }
        (None, None) => return Err(fail(EXIT_USAGE, "give --suite or --id")),
    };

    let results: Vec<Result<VerificationReport, Error>> = jobs
        .par_iter()
        .map(|&(id, k)| {
            let label = k.map(|k| format!("{id} k={k}")).unwrap_or_else(|| id.to_string());
            if !cfg.quiet {
                eprintln!("running {label}");
            }
            let r = verify(id, &VerifyParams { k, ..base }, &cfg.ctx);
            if !cfg.quiet {
                match &r {
                    Ok(rep) => eprintln!("finished {label}: {}", rep.status.as_str()),
                    Err(e) => eprintln!("finished {label}: error: {e}"),
                }
            }
            r
        })
        .collect();

    let mut reports = Vec::new();
    let mut failures = 0usize;
    let mut unconverged = 0usize;
    for r in results {
        match r {
            Ok(mut rep) => {
                if !cfg.timing {
                    rep.elapsed_ms = 0;
                }
                match rep.status {
                    Status::Pass => {}
                    Status::Fail => failures += 1,
                    Status::Unconverged => unconverged += 1,
                }
                reports.push(rep);
            }
            Err(e) => {
                let code = exit_code_for(&e);
                if code == EXIT_USAGE || code == EXIT_RESOURCE {
                    return Err(e.into());
                }
                eprintln!("error: {e}");
                if code == EXIT_UNCONVERGED {
                    unconverged += 1;
                } else {
                    failures += 1;
                }
            }
        }
    }
    let body = output::render(&reports, cfg.format, report_line).map_err(|e| fail(EXIT_IO, e))?;
    write(cfg, &body)?;
    Ok(if failures > 0 {
        EXIT_FAIL_BASE + failures.min(99) as u8
    } else if unconverged > 0 {
        EXIT_UNCONVERGED
    } else {
        0
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cfg = RunConfig::from_args(&cli.global).map_err(|m| fail(EXIT_USAGE, m))?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| fail(EXIT_RESOURCE, format!("cannot start {t} threads: {e}")))?;
    }
    match &cli.command {
        Command::Tau { limit } => cmd_tau(*limit, &cfg),
        Command::Lvalue { k, method } => cmd_lvalue(*k, method, &cfg),
        Command::Verify { suite, id, k, n } => cmd_verify(suite.as_deref(), id.as_deref(), *k, *n, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
