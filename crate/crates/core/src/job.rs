//! Batch job runner behind the command-line tool and the C bindings.
//!
//! A job is a command plus mode, truncation order, node budget, tolerance,
//! rank range, and an input JSON document. Output is a deterministic JSON
//! document: identical configuration and input produce identical bytes.

use crate::approx::{decide_from_difference_approx, moments_to_c};
use crate::charcenter::{character_difference, lemma9_difference};
use crate::enveloping::{casimir_scalar_check, omega_spectrum_check, TensorFactor};
use crate::expsum::{decide_from_difference, DecisionStatus};
use crate::interpolate::{build_weight_family, build_weight_family_approx, verify_weight_family};
use crate::jsonio::{self, JsonError};
use crate::sampling;
use crate::scalar::{q_to_f64, Tol};
use crate::series::{moments_from_witness, MomentKind, MomentSequence};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Map, Value};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Decide,
    Family,
    Lemma9,
    OracleOmega,
    OracleCasimir,
    Roundtrip,
}

impl Command {
    pub fn parse(s: &str) -> Option<Command> {
        match s {
            "decide" => Some(Command::Decide),
            "family" => Some(Command::Family),
            "lemma9" => Some(Command::Lemma9),
            "oracle-omega" => Some(Command::OracleOmega),
            "oracle-casimir" => Some(Command::OracleCasimir),
            "roundtrip" => Some(Command::Roundtrip),
            _ => None,
        }
    }

    pub fn needs_input(&self) -> bool {
        !matches!(self, Command::Roundtrip)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "exact" => Some(Mode::Exact),
            "float" => Some(Mode::Float),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: Command,
    pub mode: Mode,
    /// Truncation order `K` used where the input does not fix one.
    pub order: usize,
    /// Node budget `L` for the decision procedure.
    pub max_nodes: usize,
    pub tolerance: f64,
    /// Inclusive rank range for family construction; defaults to the eight
    /// ranks above the witness size.
    pub n_range: Option<(usize, usize)>,
    pub input: Option<Value>,
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        JobConfig {
            command,
            mode: Mode::Exact,
            order: 14,
            max_nodes: 6,
            tolerance: 1e-9,
            n_range: None,
            input: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    /// A definitive answer, including negative ones.
    Definitive,
    /// The supplied order is below the certification threshold.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobOutput {
    pub json: Value,
    pub exit: ExitKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobError(pub String);

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for JobError {}

impl From<JsonError> for JobError {
    fn from(e: JsonError) -> Self {
        JobError(e.0)
    }
}

fn fail(msg: impl Into<String>) -> JobError {
    JobError(msg.into())
}

pub fn run(config: &JobConfig) -> Result<JobOutput, JobError> {
    match config.command {
        Command::Decide => run_decide(config),
        Command::Family => run_family(config),
        Command::Lemma9 => run_lemma9(config),
        Command::OracleOmega => run_oracle_omega(config),
        Command::OracleCasimir => run_oracle_casimir(config),
        Command::Roundtrip => run_roundtrip(config),
    }
}

fn input_object(config: &JobConfig) -> Result<&Map<String, Value>, JobError> {
    config
        .input
        .as_ref()
        .and_then(Value::as_object)
        .ok_or_else(|| fail("this command needs a JSON object as input"))
}

/// Difference vector from either `{"difference": [...]}` or
/// `{"chi": {...}, "psi": {...}}`, truncated to the requested order.
fn exact_difference(config: &JobConfig) -> Result<MomentSequence<crate::scalar::Q>, JobError> {
    let obj = input_object(config)?;
    let d = if let Some(diff) = obj.get("difference") {
        MomentSequence::new(MomentKind::Difference, jsonio::q_vec_from_json(diff)?)
    } else {
        let chi = jsonio::character_from_json(obj.get("chi").ok_or_else(|| fail("input needs \"chi\"/\"psi\" or \"difference\""))?)?;
        let psi = jsonio::character_from_json(obj.get("psi").ok_or_else(|| fail("input needs \"psi\""))?)?;
        character_difference(&chi, &psi).map_err(|e| fail(e.to_string()))?
    };
    let order = config.order.min(d.order());
    Ok(d.truncate(order))
}

fn float_difference(config: &JobConfig) -> Result<MomentSequence<Complex64>, JobError> {
    let obj = input_object(config)?;
    let entries = if let Some(diff) = obj.get("difference") {
        jsonio::c_vec_from_json(diff)?
    } else {
        let chi = obj
            .get("chi")
            .and_then(|c| c.get("moments"))
            .ok_or_else(|| fail("input needs \"chi\"/\"psi\" or \"difference\""))?;
        let psi = obj
            .get("psi")
            .and_then(|c| c.get("moments"))
            .ok_or_else(|| fail("input needs \"psi\""))?;
        let chi = jsonio::c_vec_from_json(chi)?;
        let psi = jsonio::c_vec_from_json(psi)?;
        if chi.len() != psi.len() {
            return Err(fail(format!(
                "characters truncated at different orders ({} vs {})",
                chi.len(),
                psi.len()
            )));
        }
        chi.iter().zip(&psi).map(|(a, b)| a - b).collect()
    };
    if entries.is_empty() {
        return Err(fail("difference needs at least one moment"));
    }
    let d = MomentSequence::new(MomentKind::Difference, entries);
    let order = config.order.min(d.order());
    Ok(d.truncate(order))
}

fn run_decide(config: &JobConfig) -> Result<JobOutput, JobError> {
    match config.mode {
        Mode::Exact => {
            let d = exact_difference(config)?;
            let decision = decide_from_difference(&d, config.max_nodes);
            let exit = if decision.status == DecisionStatus::Inconclusive {
                ExitKind::Inconclusive
            } else {
                ExitKind::Definitive
            };
            Ok(JobOutput {
                json: jsonio::decision_to_json(&decision),
                exit,
            })
        }
        Mode::Float => {
            let d = float_difference(config)?;
            let decision = decide_from_difference_approx(&d, config.max_nodes, Tol::new(config.tolerance));
            let exit = if decision.status == DecisionStatus::Inconclusive {
                ExitKind::Inconclusive
            } else {
                ExitKind::Definitive
            };
            Ok(JobOutput {
                json: jsonio::decision_approx_to_json(&decision),
                exit,
            })
        }
    }
}

fn run_family(config: &JobConfig) -> Result<JobOutput, JobError> {
    let obj = input_object(config)?;
    let witness_json = obj.get("witness").ok_or_else(|| fail("family input needs \"witness\""))?;
    let psi_json = obj.get("psi").ok_or_else(|| fail("family input needs \"psi\""))?;
    match config.mode {
        Mode::Exact => {
            let witness = jsonio::witness_from_json(witness_json)?;
            let psi = jsonio::character_from_json(psi_json)?;
            let (lo, hi) = config
                .n_range
                .unwrap_or((witness.r() + witness.s() + 1, witness.r() + witness.s() + 8));
            let family = build_weight_family(&witness, &psi, lo, hi).map_err(|e| fail(e.to_string()))?;
            // chi is psi shifted by the witness difference.
            let d = moments_from_witness(witness.b_nodes(), witness.c_nodes(), psi.order());
            let chi_moments: Vec<crate::scalar::Q> = (1..=psi.order())
                .map(|k| psi.moment(k) + d.entry(k))
                .collect();
            let chi = crate::charcenter::CentralCharacter::from_moments(chi_moments);
            let report = verify_weight_family(&family, &chi, &psi);
            Ok(JobOutput {
                json: json!({
                    "family": jsonio::family_to_json(&family),
                    "verification": jsonio::family_report_to_json(&report),
                }),
                exit: ExitKind::Definitive,
            })
        }
        Mode::Float => {
            let witness = jsonio::witness_approx_from_json(witness_json)?;
            let psi = jsonio::c_vec_from_json(
                psi_json
                    .get("moments")
                    .ok_or_else(|| fail("family input needs \"psi\" with \"moments\""))?,
            )?;
            let (lo, hi) = config
                .n_range
                .unwrap_or((witness.r() + witness.s() + 1, witness.r() + witness.s() + 8));
            let entries = build_weight_family_approx(&witness, &psi, lo, hi).map_err(|e| fail(e.to_string()))?;
            // Verify power sums within tolerance.
            let tol = Tol::new(config.tolerance);
            let mut violations = 0usize;
            let mut comparisons = 0usize;
            for entry in &entries {
                for k in 1..=entry.valid_order {
                    comparisons += 1;
                    let got: Complex64 = entry.mu.iter().map(|x| x.powu(k as u32)).sum();
                    if !tol.eq_scaled(got, psi[k - 1]) {
                        violations += 1;
                    }
                }
            }
            Ok(JobOutput {
                json: json!({
                    "family": jsonio::family_approx_to_json(witness.r(), witness.s(), &entries),
                    "verification": {
                        "status": if violations == 0 { "pass" } else { "fail" },
                        "comparisons": comparisons,
                        "violations": violations,
                    },
                }),
                exit: ExitKind::Definitive,
            })
        }
    }
}

fn run_lemma9(config: &JobConfig) -> Result<JobOutput, JobError> {
    let obj = input_object(config)?;
    let mu_json = obj.get("mu").ok_or_else(|| fail("lemma9 input needs \"mu\""))?;
    let r = jsonio::usize_field(obj, "r")?.ok_or_else(|| fail("lemma9 input needs \"r\""))?;
    let s = jsonio::usize_field(obj, "s")?.ok_or_else(|| fail("lemma9 input needs \"s\""))?;
    match config.mode {
        Mode::Exact => {
            let mu = jsonio::weight_from_json(mu_json)?;
            let (moments, witness) = lemma9_difference(&mu, r, s, config.order).map_err(|e| fail(e.to_string()))?;
            Ok(JobOutput {
                json: json!({
                    "moments": jsonio::q_vec_to_json(moments.entries()),
                    "witness": jsonio::witness_to_json(&witness.normalized()),
                }),
                exit: ExitKind::Definitive,
            })
        }
        Mode::Float => {
            let entries = jsonio::c_vec_from_json(mu_json)?;
            if entries.is_empty() {
                return Err(fail("weight needs rank >= 1"));
            }
            let mu = crate::charcenter::Weight::new(entries);
            let (moments, witness) = lemma9_difference(&mu, r, s, config.order).map_err(|e| fail(e.to_string()))?;
            Ok(JobOutput {
                json: json!({
                    "moments": jsonio::c_vec_to_json(moments.entries()),
                    "witness": jsonio::witness_approx_to_json(&witness),
                }),
                exit: ExitKind::Definitive,
            })
        }
    }
}

fn run_oracle_omega(config: &JobConfig) -> Result<JobOutput, JobError> {
    let obj = input_object(config)?;
    let lambda = jsonio::weight_from_json(obj.get("lambda").ok_or_else(|| fail("oracle input needs \"lambda\""))?)?;
    let depth = jsonio::usize_field(obj, "depth")?.unwrap_or(2);
    let factor = match obj.get("factor").and_then(Value::as_str).unwrap_or("V") {
        "V" => TensorFactor::V,
        "V*" | "Vdual" | "V_dual" => TensorFactor::VDual,
        other => return Err(fail(format!("unknown tensor factor {other:?}"))),
    };
    let report = omega_spectrum_check(&lambda, depth, factor).map_err(|e| fail(e.to_string()))?;
    Ok(JobOutput {
        json: jsonio::omega_report_to_json(&report),
        exit: ExitKind::Definitive,
    })
}

fn run_oracle_casimir(config: &JobConfig) -> Result<JobOutput, JobError> {
    let obj = input_object(config)?;
    let lambda = jsonio::weight_from_json(obj.get("lambda").ok_or_else(|| fail("oracle input needs \"lambda\""))?)?;
    let depth = jsonio::usize_field(obj, "depth")?.unwrap_or(2);
    let report = casimir_scalar_check(&lambda, depth);
    Ok(JobOutput {
        json: jsonio::casimir_report_to_json(&report),
        exit: ExitKind::Definitive,
    })
}

fn run_roundtrip(config: &JobConfig) -> Result<JobOutput, JobError> {
    let defaults = Map::new();
    let obj = config
        .input
        .as_ref()
        .map(|v| v.as_object().ok_or_else(|| fail("roundtrip input must be an object")))
        .transpose()?
        .unwrap_or(&defaults);
    let trials = jsonio::usize_field(obj, "trials")?.unwrap_or(50);
    let seed = obj.get("seed").and_then(Value::as_u64).unwrap_or(0x5eed);
    let max_b = jsonio::usize_field(obj, "max_b")?.unwrap_or(4);
    let max_c = jsonio::usize_field(obj, "max_c")?.unwrap_or(4);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut passed = 0usize;
    let mut failures: Vec<Value> = Vec::new();
    for trial in 0..trials {
        let witness = sampling::random_reduced_witness(&mut rng, max_b, max_c, 5, 5);
        let nodes = witness.r() + witness.s();
        let order = 2 * nodes + 2;
        let d = moments_from_witness(witness.b_nodes(), witness.c_nodes(), order);
        let ok = match config.mode {
            Mode::Exact => {
                let decision = decide_from_difference(&d, nodes);
                decision.status == DecisionStatus::NonzeroWitness
                    && decision.witness.as_ref() == Some(&witness)
            }
            Mode::Float => {
                let decision = decide_from_difference_approx(&moments_to_c(&d), nodes, Tol::new(config.tolerance));
                decision.status == DecisionStatus::NonzeroWitness
                    && decision.witness.map_or(false, |w| {
                        let expect_b: Vec<f64> = witness.b_nodes().iter().map(q_to_f64).collect();
                        let expect_c: Vec<f64> = witness.c_nodes().iter().map(q_to_f64).collect();
                        w.b_nodes().len() == expect_b.len()
                            && w.c_nodes().len() == expect_c.len()
                            && w.b_nodes()
                                .iter()
                                .zip(&expect_b)
                                .all(|(g, e)| (g - Complex64::new(*e, 0.0)).norm() <= config.tolerance)
                            && w.c_nodes()
                                .iter()
                                .zip(&expect_c)
                                .all(|(g, e)| (g - Complex64::new(*e, 0.0)).norm() <= config.tolerance)
                    })
            }
        };
        if ok {
            passed += 1;
        } else if failures.len() < 5 {
            failures.push(json!({
                "trial": trial,
                "witness": jsonio::witness_to_json(&witness),
            }));
        }
    }
    Ok(JobOutput {
        json: json!({
            "check": "witness-round-trip",
            "mode": match config.mode { Mode::Exact => "exact", Mode::Float => "float" },
            "trials": trials,
            "passed": passed,
            "failed": trials - passed,
            "failures": failures,
            "status": if passed == trials { "pass" } else { "fail" },
        }),
        exit: ExitKind::Definitive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decide_config(input: Value) -> JobConfig {
        let mut c = JobConfig::new(Command::Decide);
        c.input = Some(input);
        c
    }

    #[test]
    fn decide_from_difference_json() {
        let mut config = decide_config(json!({"difference": ["0", "10", "60", "370", "2100"]}));
        config.max_nodes = 2;
        let out = run(&config).unwrap();
        assert_eq!(out.exit, ExitKind::Definitive);
        assert_eq!(out.json["status"], "NONZERO_WITNESS");
        assert_eq!(out.json["witness"]["B"], json!(["4"]));
        assert_eq!(out.json["witness"]["C"], json!(["-1"]));
        assert_eq!(out.json["rank"], json!(2));
        assert_eq!(out.json["verified_order"], json!(5));
    }

    #[test]
    fn decide_equal_characters_json() {
        let config = decide_config(json!({
            "chi": {"moments": ["5", "17", "65", "257", "1025", "4097", "16385", "65537", "262145"]},
            "psi": {"moments": ["5", "17", "65", "257", "1025", "4097", "16385", "65537", "262145"]},
        }));
        let mut config = config;
        config.max_nodes = 4;
        let out = run(&config).unwrap();
        assert_eq!(out.json["status"], "NONZERO_WITNESS");
        assert_eq!(out.json["witness"]["r"], json!(0));
    }

    #[test]
    fn decide_short_order_is_inconclusive() {
        let mut config = decide_config(json!({"difference": ["1", "2", "3"]}));
        config.max_nodes = 2;
        let out = run(&config).unwrap();
        assert_eq!(out.exit, ExitKind::Inconclusive);
        assert_eq!(out.json["status"], "INCONCLUSIVE");
    }

    #[test]
    fn decide_order_mismatch_is_an_error() {
        let config = decide_config(json!({
            "chi": {"moments": ["1", "2"]},
            "psi": {"moments": ["1"]},
        }));
        assert!(run(&config).is_err());
    }

    #[test]
    fn lemma9_json_round_trip() {
        let mut config = JobConfig::new(Command::Lemma9);
        config.order = 3;
        config.input = Some(json!({"mu": ["4", "1", "0"], "r": 1, "s": 1}));
        let out = run(&config).unwrap();
        assert_eq!(out.json["moments"], json!(["0", "10", "60"]));
        assert_eq!(out.json["witness"]["B"], json!(["4"]));
        assert_eq!(out.json["witness"]["C"], json!(["-1"]));
        // Rank too small surfaces as an input error.
        config.input = Some(json!({"mu": ["4", "1"], "r": 2, "s": 1}));
        assert!(run(&config).is_err());
    }

    #[test]
    fn lemma9_float_mode() {
        let mut config = JobConfig::new(Command::Lemma9);
        config.mode = Mode::Float;
        config.order = 2;
        config.input = Some(json!({"mu": [[4.5, 0.0], [1.0, 0.0], [0.0, 0.0]], "r": 1, "s": 1}));
        let out = run(&config).unwrap();
        // d_2 = P_2(4.5) + Pbar_2(0) = 10 + 1.
        assert_eq!(out.json["moments"], json!([[0.0, 0.0], [11.0, 0.0]]));
        assert_eq!(out.json["witness"]["B"], json!([[4.5, 0.0]]));
        assert_eq!(out.json["witness"]["C"], json!([[-1.0, 0.0]]));
    }

    #[test]
    fn family_command_builds_and_verifies() {
        let mut config = JobConfig::new(Command::Family);
        config.input = Some(json!({
            "witness": {"B": ["4"], "C": ["-1"]},
            "psi": {"moments": ["5", "17", "65", "257", "1025", "4097", "16385", "65537"]},
        }));
        config.n_range = Some((3, 6));
        let out = run(&config).unwrap();
        assert_eq!(out.json["verification"]["status"], "pass");
        assert_eq!(out.json["family"]["entries"][0]["mu"], json!(["4", "1", "0"]));
        assert_eq!(out.json["family"]["entries"][0]["lambda"], json!(["5", "1", "-1"]));
    }

    #[test]
    fn oracle_commands_pass_on_small_cases() {
        let mut config = JobConfig::new(Command::OracleOmega);
        config.input = Some(json!({"lambda": ["3", "1"], "depth": 2, "factor": "V"}));
        let out = run(&config).unwrap();
        assert_eq!(out.json["status"], "pass");
        let mut config = JobConfig::new(Command::OracleCasimir);
        config.input = Some(json!({"lambda": ["3", "1"], "depth": 2}));
        let out = run(&config).unwrap();
        assert_eq!(out.json["status"], "pass");
        assert_eq!(out.json["detail"]["expected"], json!("10"));
    }

    #[test]
    fn roundtrip_summary_exact() {
        let mut config = JobConfig::new(Command::Roundtrip);
        config.input = Some(json!({"trials": 10, "seed": 42}));
        let out = run(&config).unwrap();
        assert_eq!(out.json["status"], "pass");
        assert_eq!(out.json["passed"], json!(10));
    }

    #[test]
    fn output_is_deterministic() {
        let mut config = JobConfig::new(Command::Decide);
        config.max_nodes = 2;
        config.input = Some(json!({"difference": ["0", "10", "60", "370", "2100"]}));
        let a = serde_json::to_string_pretty(&run(&config).unwrap().json).unwrap();
        let b = serde_json::to_string_pretty(&run(&config).unwrap().json).unwrap();
        assert_eq!(a, b);
    }
}
