//! Command-line front end: JSON in, JSON out, deterministic bytes.

use charwit::job::{run, Command, JobConfig, Mode};
use std::io::Read;
use std::process::ExitCode;

const USAGE: &str = "\
charwit — exponential-sum witnesses for central-character differences

USAGE:
    charwit <COMMAND> [OPTIONS]

COMMANDS:
    decide          Decide whether chi - psi is a signed integer exponential
                    sum with at most --max-nodes distinct nodes and print the
                    witness. Input: {\"chi\": {\"moments\": [..]}, \"psi\":
                    {\"moments\": [..]}} or {\"difference\": [..]}.
    family          Build weight pairs realizing a witness at every rank in
                    --n-range and verify them. Input: {\"witness\": {\"B\":
                    [..], \"C\": [..]}, \"psi\": {\"moments\": [..]}}.
    lemma9          Closed-form moment difference and witness for the shift
                    of a weight. Input: {\"mu\": [..], \"r\": int, \"s\": int}.
    oracle-omega    Split-Casimir spectrum check on M ⊗ V or M ⊗ V*.
                    Input: {\"lambda\": [..], \"depth\": int, \"factor\":
                    \"V\"|\"V*\"}.
    oracle-casimir  Quadratic Casimir centrality and scalar-action check.
                    Input: {\"lambda\": [..], \"depth\": int}.
    roundtrip       Random witness round-trip summary. Optional input:
                    {\"trials\": int, \"seed\": int, \"max_b\": int,
                    \"max_c\": int}.

OPTIONS:
    --order K       Truncation order where the input does not fix one
                    (default 14; inputs shorter than K are used as-is)
    --max-nodes L   Node budget for decide/roundtrip (default 6)
    --mode M        exact | float (default exact)
    --tol EPS       Tolerance for float mode (default 1e-9)
    --n-range A..B  Inclusive rank range for family (default: the eight
                    ranks above the witness size)
    --input PATH    Input JSON file, or - for standard input (default -)
    -h, --help      Print this help

EXIT STATUS:
    0  definitive answer        2  inconclusive (order below 2L+1)
    1  input or internal error
";

fn parse_args() -> Result<JobConfig, String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "-h" || a == "--help") || args.is_empty() {
        print!("{USAGE}");
        std::process::exit(if args.is_empty() { 1 } else { 0 });
    }
    let command = Command::parse(&args[0]).ok_or_else(|| format!("unknown command {:?}", args[0]))?;
    let mut config = JobConfig::new(command);
    let mut input_path: Option<String> = None;
    let mut i = 1;
    while i < args.len() {
        let flag = args[i].clone();
        let mut value = |name: &str| -> Result<String, String> {
            i += 1;
            args.get(i).cloned().ok_or_else(|| format!("{name} needs a value"))
        };
        match flag.as_str() {
            "--order" => {
                config.order = value("--order")?.parse().map_err(|_| "--order must be a positive integer".to_string())?;
                if config.order == 0 {
                    return Err("--order must be at least 1".into());
                }
            }
            "--max-nodes" => {
                config.max_nodes = value("--max-nodes")?
                    .parse()
                    .map_err(|_| "--max-nodes must be a nonnegative integer".to_string())?;
            }
            "--mode" => {
                let v = value("--mode")?;
                config.mode = Mode::parse(&v).ok_or_else(|| format!("unknown mode {v:?}"))?;
            }
            "--tol" => {
                let v: f64 = value("--tol")?.parse().map_err(|_| "--tol must be a number".to_string())?;
                if !(v > 0.0) {
                    return Err("--tol must be positive".into());
                }
                config.tolerance = v;
            }
            "--n-range" => {
                let v = value("--n-range")?;
                let (a, b) = v
                    .split_once("..")
                    .ok_or_else(|| "--n-range expects A..B".to_string())?;
                let lo: usize = a.parse().map_err(|_| "--n-range bounds must be integers".to_string())?;
                let hi: usize = b.parse().map_err(|_| "--n-range bounds must be integers".to_string())?;
                if lo > hi {
                    return Err("--n-range is empty".into());
                }
                config.n_range = Some((lo, hi));
            }
            "--input" => {
                input_path = Some(value("--input")?);
            }
            other => return Err(format!("unknown option {other:?}")),
        }
        i += 1;
    }
    let wants_input = command.needs_input() || input_path.is_some();
    if wants_input {
        let text = match input_path.as_deref() {
            None | Some("-") => {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| format!("cannot read standard input: {e}"))?;
                buf
            }
            Some(path) => std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?,
        };
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| format!("malformed input JSON: {e}"))?;
        config.input = Some(value);
    }
    Ok(config)
}

fn main() -> ExitCode {
    let config = match parse_args() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("charwit: {msg}");
            return ExitCode::from(1);
        }
    };
    match run(&config) {
        Ok(output) => {
            println!("{}", serde_json::to_string_pretty(&output.json).expect("serializable output"));
            match output.exit {
                charwit::job::ExitKind::Definitive => ExitCode::SUCCESS,
                charwit::job::ExitKind::Inconclusive => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("charwit: {e}");
            ExitCode::from(1)
        }
    }
}
