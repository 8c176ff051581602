//! JSON report builders. Field names are frozen under `schema_version` 1.

use serde_json::{json, Map, Value};
use specnorm::extremal::{EntropyAnalysis, KneserAudit, TauTable};
use specnorm::graph::{CenteredReport, GraphSpectralProfile, SubsetWitness};
use specnorm::linalg::{NormProfile, SingularPair};
use specnorm::oracle::OracleResult;
use specnorm::witness::{BinaryVector, DeltaWitness, RhoWitness};
use specnorm::Error;

pub const SCHEMA_VERSION: u64 = 1;
pub const LOG_CONVENTION: &str = "ln";

fn envelope(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("log_convention".into(), json!(LOG_CONVENTION));
    map.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

fn bits(v: &BinaryVector) -> Value {
    json!(v.to_hex())
}

fn profile(p: &NormProfile) -> Value {
    serde_json::to_value(p).expect("plain struct")
}

pub fn norms(p: &NormProfile, second: Option<&SingularPair>) -> Value {
    envelope(
        "norms",
        json!({
            "norm_profile": profile(p),
            "sigma2": second.map(|s| s.value),
            "sigma2_residual": second.map(|s| s.residual),
        }),
    )
}

pub fn delta_witness(w: &DeltaWitness) -> Value {
    envelope(
        "witness delta",
        json!({
            "norm_profile": profile(&w.profile),
            "xi_bits_hex": bits(&w.xi),
            "xi_dim": w.xi.dim(),
            "xi_popcount": w.xi.popcount(),
            "ratio": w.ratio,
            "floor_thm": w.floor_thm,
            "floor_sharp": w.floor_sharp,
            "provenance": w.provenance,
            "family_size": w.family_size,
            "slice": {
                "base": w.slice.base,
                "level": w.slice.level,
                "achieved_ratio": w.slice.achieved_ratio,
                "log_diam": w.slice.log_diam,
                "levels": w.slice.levels,
            },
        }),
    )
}

pub fn rho_witness(w: &RhoWitness) -> Value {
    envelope(
        "witness rho",
        json!({
            "norm_profile": profile(&w.profile),
            "xi_bits_hex": bits(&w.xi),
            "xi_dim": w.xi.dim(),
            "eta_bits_hex": bits(&w.eta),
            "eta_dim": w.eta.dim(),
            "ratio": w.value,
            "floor_thm": w.floor_thm,
            "provenance": w.provenance,
            "pairs_evaluated": w.pairs_evaluated,
        }),
    )
}

pub fn oracle(command: &str, p: Option<&NormProfile>, r: &OracleResult) -> Value {
    envelope(
        command,
        json!({
            "norm_profile": p.map(profile),
            "xi_bits_hex": bits(&r.argmax_xi),
            "xi_dim": r.argmax_xi.dim(),
            "eta_bits_hex": r.argmax_eta.as_ref().map(bits),
            "eta_dim": r.argmax_eta.as_ref().map(BinaryVector::dim),
            "ratio": r.value,
            "provenance": "oracle",
            "method": r.method,
            "enumerated": r.enumerated,
            "drift": r.drift,
        }),
    )
}

pub struct AuditSummary {
    pub samples: usize,
    pub max_energy_ratio: f64,
    pub max_edge_ratio: f64,
}

fn graph_profile(p: &GraphSpectralProfile) -> Value {
    json!({
        "n": p.n,
        "edges": p.edges,
        "max_degree": p.max_degree,
        "avg_degree": p.avg_degree,
        "rho": p.rho,
        "sigma": p.sigma,
    })
}

pub fn graph_audit(p: &GraphSpectralProfile, s: &AuditSummary) -> Value {
    let mut body = graph_profile(p);
    body["forward"] = json!({
        "samples": s.samples,
        "max_energy_ratio": s.max_energy_ratio,
        "max_edge_ratio": s.max_edge_ratio,
    });
    envelope("graph audit", body)
}

pub fn graph_witness(p: &GraphSpectralProfile, subset: &SubsetWitness, centered: Result<&CenteredReport, &Error>) -> Value {
    let mut body = graph_profile(p);
    body["energy_witness"] = json!({
        "x_bits_hex": bits(&subset.x),
        "x_size": subset.x.popcount(),
        "energy": subset.energy,
        "energy_per_vertex": subset.energy_per_vertex,
        "floor": subset.floor,
        "provenance": subset.witness.provenance,
    });
    body["centered"] = match centered {
        Ok(c) => json!({
            "k_bound": c.k_bound,
            "x_bits_hex": bits(&c.x),
            "x_size": c.x.popcount(),
            "lhs": c.lhs,
            "floor": c.floor,
            "matrix_floor_delta": c.matrix_floor_delta,
            "matrix_floor_rho": c.matrix_floor_rho,
            "mixing": {
                "x_bits_hex": bits(&c.mixing.x),
                "y_bits_hex": bits(&c.mixing.y),
                "x_size": c.mixing.x.popcount(),
                "y_size": c.mixing.y.popcount(),
                "edges_xy": c.mixing.edges_xy,
                "discrepancy": c.mixing.discrepancy,
                "floor": c.mixing.floor,
                "upper": c.mixing.upper,
            },
        }),
        Err(e) => json!({ "skipped": e.kind(), "reason": e.to_string() }),
    };
    envelope("graph witness", body)
}

pub fn kneser(a: &KneserAudit) -> Value {
    envelope("kneser-audit", serde_json::to_value(a).expect("plain struct"))
}

pub fn entropy(e: &EntropyAnalysis) -> Value {
    envelope("entropy", serde_json::to_value(e).expect("plain struct"))
}

pub fn tau(t: &TauTable) -> Value {
    let mut body = serde_json::to_value(t).expect("plain struct");
    body["tau_max_scaled"] = json!(t.max_scaled);
    envelope("tau", body)
}

pub fn error(e: &Error) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "error": { "kind": e.kind(), "message": e.to_string() },
    })
}

pub fn usage_error(message: &str) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "error": { "kind": "UsageError", "message": message },
    })
}

/// Flattens a report into `dotted.key: value` lines.
pub fn to_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, child, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
            other => out.push_str(&format!("{prefix}: {other}\n")),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}
