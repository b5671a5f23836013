//! JSON encodings shared by the command-line front end and the C bindings.
//!
//! Rational scalars travel as strings `"p/q"` (just `"p"` for integers);
//! plain JSON integers are accepted on input. Complex scalars travel as
//! `[re, im]` number pairs; bare numbers are accepted on input. Collections
//! are emitted in a deterministic order everywhere.

use crate::approx::ApproxDecision;
use crate::charcenter::{CentralCharacter, Weight};
use crate::expsum::{Decision, Witness};
use crate::interpolate::{ApproxFamilyEntry, FamilyReport, FamilySide, WeightFamily};
use crate::poly::Poly;
use crate::scalar::{format_rational, parse_rational, q_to_f64, Q};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonError(pub String);

impl std::fmt::Display for JsonError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for JsonError {}

fn err(msg: impl Into<String>) -> JsonError {
    JsonError(msg.into())
}

pub fn q_to_json(x: &Q) -> Value {
    Value::String(format_rational(x))
}

pub fn q_from_json(v: &Value) -> Result<Q, JsonError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| err(e.to_string())),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(crate::scalar::qi(i))
            } else {
                Err(err(format!("exact mode accepts integers and \"p/q\" strings, got {n}")))
            }
        }
        other => Err(err(format!("expected a rational scalar, got {other}"))),
    }
}

pub fn c_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn c_from_json(v: &Value) -> Result<Complex64, JsonError> {
    match v {
        Value::Number(n) => Ok(Complex64::new(
            n.as_f64().ok_or_else(|| err("bad number"))?,
            0.0,
        )),
        Value::String(s) => {
            let q = parse_rational(s).map_err(|e| err(e.to_string()))?;
            Ok(Complex64::new(q_to_f64(&q), 0.0))
        }
        Value::Array(parts) if parts.len() == 2 => {
            let re = parts[0].as_f64().ok_or_else(|| err("bad real part"))?;
            let im = parts[1].as_f64().ok_or_else(|| err("bad imaginary part"))?;
            Ok(Complex64::new(re, im))
        }
        other => Err(err(format!("expected a number, \"p/q\", or [re, im], got {other}"))),
    }
}

pub fn q_vec_from_json(v: &Value) -> Result<Vec<Q>, JsonError> {
    v.as_array()
        .ok_or_else(|| err("expected an array of scalars"))?
        .iter()
        .map(q_from_json)
        .collect()
}

pub fn c_vec_from_json(v: &Value) -> Result<Vec<Complex64>, JsonError> {
    v.as_array()
        .ok_or_else(|| err("expected an array of scalars"))?
        .iter()
        .map(c_from_json)
        .collect()
}

pub fn q_vec_to_json(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(q_to_json).collect())
}

pub fn c_vec_to_json(xs: &[Complex64]) -> Value {
    Value::Array(xs.iter().copied().map(c_to_json).collect())
}

// ---------------------------------------------------------------------------
// Characters

pub fn character_to_json(chi: &CentralCharacter<Q>) -> Value {
    let mut map = Map::new();
    map.insert("moments".into(), q_vec_to_json(chi.moments().entries()));
    if let Some(origin) = chi.origin() {
        map.insert("origin".into(), q_vec_to_json(origin.entries()));
    }
    if let Some(n) = chi.rank_tag() {
        map.insert("n".into(), json!(n));
    }
    if let Some(t) = chi.t_tag() {
        map.insert("t".into(), q_to_json(t));
    }
    Value::Object(map)
}

pub fn character_from_json(v: &Value) -> Result<CentralCharacter<Q>, JsonError> {
    let obj = v.as_object().ok_or_else(|| err("character must be an object"))?;
    let moments = q_vec_from_json(obj.get("moments").ok_or_else(|| err("character needs \"moments\""))?)?;
    if moments.is_empty() {
        return Err(err("character needs at least one moment"));
    }
    let mut chi = CentralCharacter::from_moments(moments);
    if let Some(n) = obj.get("n").and_then(Value::as_u64) {
        chi = chi.with_rank_tag(n as usize);
    }
    if let Some(t) = obj.get("t") {
        chi = chi.with_t_tag(q_from_json(t)?);
    }
    Ok(chi)
}

pub fn weight_from_json(v: &Value) -> Result<Weight<Q>, JsonError> {
    let entries = q_vec_from_json(v)?;
    if entries.is_empty() {
        return Err(err("weight needs rank >= 1"));
    }
    Ok(Weight::new(entries))
}

// ---------------------------------------------------------------------------
// Witnesses and decisions

fn poly_coeffs_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(q_to_json).collect())
}

pub fn witness_to_json(w: &Witness<Q>) -> Value {
    json!({
        "B": q_vec_to_json(w.b_nodes()),
        "C": q_vec_to_json(w.c_nodes()),
        "algebraic": w.algebraic().iter().map(|p| json!({
            "poly": poly_coeffs_json(&p.min_poly),
            "weight": p.weight,
        })).collect::<Vec<_>>(),
        "r": w.r(),
        "s": w.s(),
    })
}

pub fn witness_from_json(v: &Value) -> Result<Witness<Q>, JsonError> {
    let obj = v.as_object().ok_or_else(|| err("witness must be an object"))?;
    let b = obj.get("B").map(q_vec_from_json).transpose()?.unwrap_or_default();
    let c = obj.get("C").map(q_vec_from_json).transpose()?.unwrap_or_default();
    if obj.get("algebraic").map_or(false, |a| a.as_array().map_or(true, |arr| !arr.is_empty())) {
        return Err(err("witnesses with algebraic node packs are not accepted as input"));
    }
    Ok(Witness::reduced(b, c).normalized())
}

pub fn witness_approx_to_json(w: &Witness<Complex64>) -> Value {
    json!({
        "B": c_vec_to_json(w.b_nodes()),
        "C": c_vec_to_json(w.c_nodes()),
        "algebraic": Vec::<Value>::new(),
        "r": w.r(),
        "s": w.s(),
    })
}

pub fn witness_approx_from_json(v: &Value) -> Result<Witness<Complex64>, JsonError> {
    let obj = v.as_object().ok_or_else(|| err("witness must be an object"))?;
    let b = obj.get("B").map(c_vec_from_json).transpose()?.unwrap_or_default();
    let c = obj.get("C").map(c_vec_from_json).transpose()?.unwrap_or_default();
    Ok(Witness::reduced(b, c))
}

pub fn decision_to_json(d: &Decision) -> Value {
    json!({
        "status": d.status.as_str(),
        "witness": d.witness.as_ref().map(witness_to_json).unwrap_or(Value::Null),
        "verified_order": d.verified_order,
        "rank": d.rank.map(|r| json!(r)).unwrap_or(Value::Null),
    })
}

pub fn decision_approx_to_json(d: &ApproxDecision) -> Value {
    json!({
        "status": d.status.as_str(),
        "witness": d.witness.as_ref().map(witness_approx_to_json).unwrap_or(Value::Null),
        "verified_order": d.verified_order,
        "rank": d.rank.map(|r| json!(r)).unwrap_or(Value::Null),
    })
}

// ---------------------------------------------------------------------------
// Weight families

pub fn family_to_json(f: &WeightFamily) -> Value {
    let entries: Vec<Value> = f
        .entries()
        .iter()
        .map(|e| {
            let mut entry = Map::new();
            entry.insert("n".into(), json!(e.n()));
            entry.insert(
                "lambda".into(),
                e.lambda_weight().map(|w| q_vec_to_json(w.entries())).unwrap_or(Value::Null),
            );
            entry.insert(
                "mu".into(),
                e.mu_weight().map(|w| q_vec_to_json(w.entries())).unwrap_or(Value::Null),
            );
            entry.insert("completion".into(), poly_coeffs_json(e.completion().poly()));
            if e.completion().rational_roots().is_none() {
                // Symbolic middle block: report numerical root estimates.
                entry.insert("completion_roots".into(), c_vec_to_json(&e.completion().approx_roots()));
            }
            entry.insert("valid_order".into(), json!(e.valid_order()));
            Value::Object(entry)
        })
        .collect();
    json!({"r": f.r(), "s": f.s(), "entries": entries})
}

pub fn family_approx_to_json(r: usize, s: usize, entries: &[ApproxFamilyEntry]) -> Value {
    let list: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "n": e.n,
                "lambda": c_vec_to_json(&e.lambda),
                "mu": c_vec_to_json(&e.mu),
                "valid_order": e.valid_order,
            })
        })
        .collect();
    json!({"r": r, "s": s, "entries": list})
}

pub fn family_report_to_json(report: &FamilyReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "n": v.n,
                "order": v.order,
                "side": match v.side { FamilySide::Lambda => "lambda", FamilySide::Mu => "mu" },
                "expected": q_to_json(&v.expected),
                "got": q_to_json(&v.got),
            })
        })
        .collect();
    json!({
        "status": if report.pass() { "pass" } else { "fail" },
        "comparisons": report.comparisons,
        "violations": violations,
    })
}

// ---------------------------------------------------------------------------
// Oracle reports

pub fn omega_report_to_json(r: &crate::enveloping::OmegaReport) -> Value {
    json!({
        "check": "omega-spectrum",
        "n": r.n,
        "lambda": q_vec_to_json(&r.lambda),
        "depth": r.depth,
        "factor": r.factor.as_str(),
        "status": if r.pass() { "pass" } else { "fail" },
        "detail": {
            "eigenvalues": q_vec_to_json(&r.eigenvalues),
            "blocks": r.blocks.iter().map(|b| json!({
                "key": b.key,
                "dim": b.dim,
                "annihilator_zero": b.annihilator_zero,
                "trace_matches": b.trace_matches,
            })).collect::<Vec<_>>(),
            "skipped_blocks": r.skipped_blocks,
        },
    })
}

pub fn casimir_report_to_json(r: &crate::enveloping::CasimirReport) -> Value {
    json!({
        "check": "casimir-scalar",
        "n": r.n,
        "lambda": q_vec_to_json(&r.lambda),
        "depth": r.depth,
        "status": if r.pass() { "pass" } else { "fail" },
        "detail": {
            "expected": q_to_json(&r.expected),
            "scalar_ok": r.scalar_ok,
            "central_ok": r.central_ok,
            "dim": r.dim,
        },
    })
}

// ---------------------------------------------------------------------------
// Misc input helpers

pub fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<Option<usize>, JsonError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .and_then(|x| x.to_usize())
            .map(Some)
            .ok_or_else(|| err(format!("field \"{key}\" must be a nonnegative integer"))),
    }
}
