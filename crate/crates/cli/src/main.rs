//! `memplan`: memory, frontier, plan, estimate and serve subcommands.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error. Every failure
//! prints one `error[CODE]: message` line to stderr.

mod args;
mod render;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::Parser;
use memplan_api::docs::{EstimateRequest, Filters, FrontierRequest, MemoryRequest, PlanRequest};
use memplan_api::{handlers, ApiError, AppState, Envelope};
use memplan_core::measurements::{load_pools, EstimateOptions, Method, TiePolicy};
use memplan_core::memory::units::parse_byte_budget;
use memplan_core::{write_frontier_table, CostAxis, Objective, SearchSpace, TaskType};
use serde::Serialize;

use args::*;

/// Codes that mean the invocation itself was wrong.
const USAGE_CODES: [&str; 3] = ["USAGE", "INVALID_REQUEST", "INVALID_GROUP"];

fn exit_code(code: &str) -> u8 {
    if USAGE_CODES.contains(&code) {
        2
    } else {
        1
    }
}

/// Rendered output of a successful command in both formats.
struct Output {
    text: String,
    machine: String,
}

fn output<T: Serialize>(value: &T, text: String) -> Output {
    Output {
        machine: Envelope::from_result(Ok(value)).to_json(),
        text,
    }
}

fn filters(f: &FilterArgs) -> Filters {
    fn opt<T: Clone>(v: &[T]) -> Option<Vec<T>> {
        (!v.is_empty()).then(|| v.to_vec())
    }
    Filters {
        models: opt(&f.models),
        precisions: opt(&f.precisions),
        kv_strategies: opt(&f.kv_strategies),
        token_budgets: opt(&f.token_budgets),
        group_sizes: opt(&f.group_sizes),
    }
}

fn load_state(cli: &Cli, dataset: Option<&Path>) -> Result<AppState, ApiError> {
    AppState::load(cli.spec.as_deref(), dataset, &[])
}

fn memory(cli: &Cli, a: &MemoryArgs) -> Result<Output, ApiError> {
    let state = load_state(cli, None)?;
    let req = MemoryRequest {
        model: a.model.clone(),
        precision_bits: a.wbits,
        kv: a.kv,
        token_budget: a.tokens,
        group_size: a.group,
        amortization_batch: a.batch,
    };
    let report = handlers::memory(&state, &req)?;
    Ok(output(&report, render::memory(&report)))
}

fn frontier(cli: &Cli, a: &FrontierArgs) -> Result<Output, ApiError> {
    let state = load_state(cli, Some(&a.dataset))?;
    let axis = match a.axis {
        AxisArg::Memory => CostAxis::Memory {
            amortization_batch: a.batch,
        },
        AxisArg::Latency => CostAxis::Latency,
        AxisArg::Throughput => CostAxis::Throughput,
    };
    let req = FrontierRequest {
        axis,
        filters: filters(&a.filters),
    };
    let report = handlers::frontier(&state, &req)?;
    let mut csv = Vec::new();
    write_frontier_table(&report.points, &mut csv)?;
    Ok(output(&report, String::from_utf8(csv).expect("csv is utf-8")))
}

fn parse_budget(text: &str, objective: Objective) -> Result<Option<f64>, ApiError> {
    match objective {
        Objective::Memory => parse_byte_budget(text).map_err(ApiError::invalid),
        Objective::Latency => {
            let t = text.trim().trim_end_matches('s');
            if t.eq_ignore_ascii_case("inf") {
                return Ok(None);
            }
            match t.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Ok(Some(v)),
                _ => Err(ApiError::invalid(format!("invalid latency budget {text:?}"))),
            }
        }
    }
}

fn plan(cli: &Cli, a: &PlanArgs) -> Result<Output, ApiError> {
    let state = load_state(cli, Some(&a.dataset))?;
    let objective = match a.objective {
        ObjectiveArg::Memory => Objective::Memory,
        ObjectiveArg::Latency => Objective::Latency,
    };
    let space: Option<SearchSpace> = match &a.space {
        Some(p) => {
            let f = File::open(p).map_err(|e| ApiError::new("IO_ERROR", format!("{}: {e}", p.display())))?;
            Some(
                serde_json::from_reader(BufReader::new(f))
                    .map_err(|e| ApiError::invalid(format!("{}: {e}", p.display())))?,
            )
        }
        None => None,
    };
    let req = PlanRequest {
        budget: parse_budget(&a.budget, objective)?,
        objective,
        amortization_batch: a.batch,
        annotate: !a.no_annotate,
        task_type: match a.task {
            TaskArg::Math => TaskType::Math,
            TaskArg::Knowledge => TaskType::KnowledgeIntensive,
            TaskArg::Unspecified => TaskType::Unspecified,
        },
        neighborhood_radius: 2,
        filters: filters(&a.filters),
        space,
    };
    let rec = handlers::plan(&state, &req)?;
    Ok(output(&rec, render::recommendation(&rec)))
}

fn estimate(_cli: &Cli, a: &EstimateArgs) -> Result<Output, ApiError> {
    let f = File::open(&a.pools)
        .map_err(|e| ApiError::new("IO_ERROR", format!("{}: {e}", a.pools.display())))?;
    let pools = load_pools(BufReader::new(f))?;
    let method = match a.method {
        MethodArg::Exact => Method::Exact,
        MethodArg::MonteCarlo => Method::MonteCarlo {
            resamples: a.resamples,
            seed: a.seed,
        },
    };
    let ties = match a.ties {
        TiesArg::Uniform => TiePolicy::Uniform,
        TiesArg::FirstSampled => TiePolicy::FirstSampled,
        TiesArg::CountAsWrong => TiePolicy::CountAsWrong,
    };
    let req = EstimateRequest {
        pools: Some(pools),
        pool_set: None,
        group_size: a.group,
        options: EstimateOptions { method, ties },
    };
    let report = handlers::estimate(&AppState::default(), &req)?;
    Ok(output(&report, render::estimate(&report)))
}

fn serve(cli: &Cli, a: &ServeArgs) -> Result<Output, ApiError> {
    let mut sets = Vec::new();
    for s in &a.pool_sets {
        let (name, path) = s
            .split_once('=')
            .ok_or_else(|| ApiError::new("USAGE", format!("--pool-set expects name=path, got {s:?}")))?;
        sets.push((name.to_string(), path.into()));
    }
    let state = AppState::load(cli.spec.as_deref(), a.dataset.as_deref(), &sets)?;
    let listener = std::net::TcpListener::bind(&a.bind)
        .map_err(|e| ApiError::new("BIND_ERROR", format!("cannot bind {}: {e}", a.bind)))?;
    let addr = listener.local_addr().map_err(|e| ApiError::new("BIND_ERROR", e.to_string()))?;
    listener
        .set_nonblocking(true)
        .map_err(|e| ApiError::new("BIND_ERROR", e.to_string()))?;
    eprintln!("listening on http://{addr}");
    let runtime = tokio::runtime::Runtime::new().map_err(|e| ApiError::new("IO_ERROR", e.to_string()))?;
    runtime
        .block_on(async {
            let listener = tokio::net::TcpListener::from_std(listener)?;
            memplan_api::serve(listener, memplan_api::router(Arc::new(state), a.cors)).await
        })
        .map_err(|e| ApiError::new("IO_ERROR", e.to_string()))?;
    Ok(Output {
        text: String::new(),
        machine: String::new(),
    })
}

fn run(cli: &Cli) -> Result<Output, ApiError> {
    match &cli.command {
        Command::Memory(a) => memory(cli, a),
        Command::Frontier(a) => frontier(cli, a),
        Command::Plan(a) => plan(cli, a),
        Command::Estimate(a) => estimate(cli, a),
        Command::Serve(a) => serve(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let mut lines = rendered.lines();
            let first = lines.next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[USAGE]: {first}");
            for l in lines {
                eprintln!("{l}");
            }
            return ExitCode::from(2);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Machine => out.machine + "\n",
            };
            let _ = stdout.write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.code, e.message.replace('\n', " "));
            if cli.format == Format::Machine {
                let _ = writeln!(stdout, "{}", Envelope::<()>::from_result(Err(e.clone())).to_json());
            }
            ExitCode::from(exit_code(e.code))
        }
    }
}
