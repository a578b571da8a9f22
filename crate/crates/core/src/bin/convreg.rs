//! `convreg`: regularity of probability measures under convolution.
//!
//! Exit codes: 0 regular or success, 2 not regular, 1 error.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use convreg::engine::{
    decide_regular, determining_system, normalize, probe_theorem, EngineOptions, ProbeReport,
    Status, Verdict, DEFAULT_ORDER_CAP,
};
use convreg::group::{builtin, Group, GroupElement};
use convreg::linalg::approximate_stochastic_solution;
use convreg::measure::{closure_witness, Measure};
use convreg::oracle::{brute_force_ginverse, generated_universe, OracleBudget};
use convreg::{rational, Error};

const FLOAT_ITERATIONS: usize = 20_000;
const WATERMARK: &str = "NON-AUTHORITATIVE floating-point estimate";

#[derive(Parser)]
#[command(
    name = "convreg",
    version,
    about = "Exact regularity of finitely supported probability measures under convolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Largest element order accepted in the torsion check.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    order_cap: u64,
    /// Element cap for subgroup enumeration.
    #[arg(long, global = true, default_value_t = 4096)]
    max: usize,
}

#[derive(Args, Clone)]
struct DecideFlags {
    /// Cross-check with the brute-force oracle over fractions of denominator at most D.
    #[arg(long)]
    max_denominator: Option<u32>,
    /// Also run the approximate floating-point explorer.
    #[arg(long)]
    float: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide regularity of a measure.
    Check {
        group: String,
        measure: String,
        #[command(flatten)]
        flags: DecideFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Print a generalized inverse and the Moore-Penrose inverse.
    Ginverse {
        group: String,
        measure: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decide the uniform measure on e and the given elements.
    Uniform {
        group: String,
        elements: Vec<String>,
        #[command(flatten)]
        flags: DecideFlags,
        #[command(flatten)]
        common: Common,
    },
    /// List the subgroup generated by the given elements.
    Closure {
        group: String,
        #[arg(required = true)]
        elements: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Order of an element.
    Order {
        group: String,
        element: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decide every uniform measure on e plus at most k other elements.
    Probe {
        group: String,
        #[arg(long)]
        max_set_size: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Check {
            group,
            measure,
            flags,
            common,
        } => {
            let group = load_group(&group)?;
            let mu = load_measure(&group, &measure)?;
            decide_and_report(&group, &mu, &flags, &common)
        }
        Command::Uniform {
            group,
            elements,
            flags,
            common,
        } => {
            let group = load_group(&group)?;
            let chosen = parse_elements(&group, &elements)?;
            let mu = Measure::uniform_on(&group, &chosen).map_err(|e| e.to_string())?;
            decide_and_report(&group, &mu, &flags, &common)
        }
        Command::Ginverse {
            group,
            measure,
            common,
        } => {
            let group = load_group(&group)?;
            let mu = load_measure(&group, &measure)?;
            let verdict = decide(&group, &mu, &common)?;
            let cert = verdict.certificate.as_ref();
            if common.json {
                print_json(&json!({
                    "status": verdict.status,
                    "reason": verdict.reason,
                    "ginverse": cert.map(|c| c.ginverse.to_records()),
                    "moore_penrose": cert.map(|c| c.moore_penrose.to_records()),
                    "detail": verdict.detail,
                }));
            } else if let Some(c) = cert {
                println!("# generalized inverse");
                print!("{}", c.ginverse.to_text());
                println!("# Moore-Penrose inverse");
                print!("{}", c.moore_penrose.to_text());
            } else {
                println!(
                    "not regular ({}): {}",
                    reason_text(&verdict),
                    verdict.detail
                );
            }
            Ok(exit_code(&verdict))
        }
        Command::Closure {
            group,
            elements,
            common,
        } => {
            let group = load_group(&group)?;
            let generators = parse_elements(&group, &elements)?;
            let members = group
                .closure(&generators, common.max)
                .map_err(|e| e.to_string())?;
            let names: Vec<String> = members.iter().map(|g| g.to_string()).collect();
            if common.json {
                print_json(&json!({ "order": names.len(), "elements": names }));
            } else {
                for name in &names {
                    println!("{name}");
                }
                println!("{} elements", names.len());
            }
            Ok(0)
        }
        Command::Order {
            group,
            element,
            common,
        } => {
            let group = load_group(&group)?;
            let g = group.parse_element(&element).map_err(|e| e.to_string())?;
            let order = group
                .order(&g, common.order_cap)
                .map_err(|e| e.to_string())?;
            if common.json {
                print_json(&json!({ "element": g.to_string(), "order": order }));
            } else {
                println!("{order}");
            }
            Ok(0)
        }
        Command::Probe {
            group,
            max_set_size,
            common,
        } => {
            let group = load_group(&group)?;
            let options = EngineOptions {
                order_cap: common.order_cap,
            };
            let report = probe_theorem(&group, max_set_size, common.max, &options)
                .map_err(|e| e.to_string())?;
            if common.json {
                print_json(&serde_json::to_value(&report).expect("serializable"));
            } else {
                print_probe(&report);
            }
            Ok(0)
        }
    }
}

fn load_group(spec: &str) -> Result<Group, String> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some(group) = builtin::by_name(spec) {
            return Ok(group);
        }
    }
    let text = fs::read_to_string(path).map_err(|e| format!("{spec}: {e}"))?;
    Group::parse(&text).map_err(|e| format!("{spec}: {e}"))
}

fn load_measure(group: &Group, path: &str) -> Result<Measure, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let trimmed = text.trim_start();
    let parsed = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed)
            .map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })
            .and_then(|records: Vec<_>| Measure::from_records(group, &records))
    } else {
        Measure::parse(group, &text)
    };
    parsed.map_err(|e| format!("{path}: {e}"))
}

fn parse_elements(group: &Group, texts: &[String]) -> Result<Vec<GroupElement>, String> {
    texts
        .iter()
        .map(|t| group.parse_element(t).map_err(|e| format!("{t}: {e}")))
        .collect()
}

fn decide(group: &Group, mu: &Measure, common: &Common) -> Result<Verdict, String> {
    let options = EngineOptions {
        order_cap: common.order_cap,
    };
    decide_regular(group, mu, &options).map_err(|e| e.to_string())
}

fn exit_code(verdict: &Verdict) -> u8 {
    match verdict.status {
        Status::Regular => 0,
        Status::NotRegular => 2,
        Status::NotApplicable => 1,
    }
}

fn reason_text(verdict: &Verdict) -> String {
    serde_json::to_value(verdict.reason)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn status_text(status: Status) -> String {
    serde_json::to_value(status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn decide_and_report(
    group: &Group,
    mu: &Measure,
    flags: &DecideFlags,
    common: &Common,
) -> Result<u8, String> {
    let verdict = decide(group, mu, common)?;
    let oracle = match flags.max_denominator {
        Some(d) => Some(run_oracle(group, mu, d, common.max)?),
        None => None,
    };
    let approximate = if flags.float {
        approximate(group, mu)?
    } else {
        None
    };

    if common.json {
        let mut value = serde_json::to_value(&verdict).expect("serializable");
        if let Some((d, found)) = &oracle {
            value["oracle"] = json!({
                "max_denominator": d,
                "ginverse": found.as_ref().map(|m| m.to_records()),
                "agrees": found.is_some() == verdict.is_regular(),
            });
        }
        if let Some((beta, residual)) = &approximate {
            value["approximate"] = json!({
                "authoritative": false,
                "watermark": WATERMARK,
                "beta": beta,
                "residual_norm": residual,
            });
        }
        print_json(&value);
    } else {
        print_verdict(&verdict);
        if let Some((d, found)) = &oracle {
            match found {
                Some(nu) => println!("oracle (D = {d}): generalized inverse {}", nu.to_human()),
                None => println!("oracle (D = {d}): no generalized inverse on the grid"),
            }
            let agrees = found.is_some() == verdict.is_regular();
            println!("oracle agrees: {}", if agrees { "yes" } else { "no" });
        }
        if let Some((beta, residual)) = &approximate {
            println!("[{WATERMARK}]");
            let shown: Vec<String> = beta.iter().map(|b| format!("{b:.6}")).collect();
            println!("  beta ~ ({})", shown.join(", "));
            println!("  residual ~ {residual:.3e}");
        }
    }
    Ok(exit_code(&verdict))
}

fn run_oracle(
    group: &Group,
    mu: &Measure,
    max_denominator: u32,
    cap: usize,
) -> Result<(u32, Option<Measure>), String> {
    let universe = generated_universe(group, mu, cap).map_err(|e| e.to_string())?;
    let found = brute_force_ginverse(
        group,
        mu,
        max_denominator,
        &universe,
        &OracleBudget::default(),
    )
    .map_err(|e| e.to_string())?;
    Ok((max_denominator, found))
}

fn approximate(group: &Group, mu: &Measure) -> Result<Option<(Vec<f64>, f64)>, String> {
    let (normalized, _) = normalize(group, mu).map_err(|e| e.to_string())?;
    if closure_witness(group, &normalized)
        .map_err(|e| e.to_string())?
        .is_some()
    {
        return Ok(None);
    }
    let system = determining_system(group, &normalized).map_err(|e| e.to_string())?;
    let estimate = approximate_stochastic_solution(&system.matrix, &system.alpha, FLOAT_ITERATIONS)
        .map_err(|e| e.to_string())?;
    Ok(Some((estimate.beta, estimate.residual_norm)))
}

fn print_verdict(verdict: &Verdict) {
    println!(
        "status: {} ({})",
        status_text(verdict.status),
        reason_text(verdict)
    );
    println!("subject: {}", verdict.subject.to_human());
    if let Some(t) = &verdict.normalization {
        println!("normalized by: δ[{}] ⋆ μ ⋆ δ[{}]", t.left, t.right);
    }
    if let Some(c) = &verdict.certificate {
        println!("generalized inverse: {}", c.ginverse.to_human());
        println!("Moore-Penrose inverse: {}", c.moore_penrose.to_human());
        println!("check μ⋆ν⋆μ = μ: {}", yes_no(c.checks.ginverse));
        println!(
            "check μ⋆μ†⋆μ = μ: {}",
            yes_no(c.checks.mp_reproduces_subject)
        );
        println!(
            "check μ†⋆μ⋆μ† = μ†: {}",
            yes_no(c.checks.mp_reproduces_inverse)
        );
        if let Some(same) = c.checks.support_preserved {
            println!("check S(μ†) = S(μ): {}", yes_no(same));
        }
    }
    if let Some(convreg::linalg::InfeasibilityReason::UniqueSolutionOutsideSimplex { solution }) =
        &verdict.infeasibility
    {
        let shown: Vec<String> = solution.iter().map(rational::to_human).collect();
        println!("unique linear solution: ({})", shown.join(", "));
    }
    println!("detail: {}", verdict.detail);
}

fn print_probe(report: &ProbeReport) {
    println!("group: {} (order {})", report.group, report.group_order);
    println!("subsets of size <= {}", report.max_subset_size);
    for case in &report.cases {
        println!(
            "  {{{}}} closed={} {} ({})",
            case.support.join(", "),
            case.support_closed,
            status_text(case.status),
            serde_json::to_value(case.reason)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default()
        );
    }
    let s = &report.summary;
    println!(
        "cases {}: regular {}, not-regular {}, not-applicable {}, closed {}",
        s.cases, s.regular, s.not_regular, s.not_applicable, s.closed
    );
    println!("regular iff support closed: {}", s.regular_iff_closed);
    println!("every uniform measure regular: {}", s.all_regular);
}

fn yes_no(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}
