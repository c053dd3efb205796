//! Output records and the JSON encodings of exact values.

use serde::Serialize;
use serde_json::{json, Value};
use su3cg::irrep::{CanonicalState, IrrepLabel};
use su3cg::isoscalar::{CouplingPoint, IsoscalarRow};
use su3cg::scalar::{Rational, SurdValue};

/// Version of the record layout; bumped on any incompatible change.
pub const SCHEMA_VERSION: u32 = 1;

/// One line of `jsonl` output.  Field order is fixed by the declaration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    /// Layout version.
    pub schema_version: u32,
    /// Subcommand name.
    pub command: String,
    /// Parsed inputs.
    pub inputs: Value,
    /// Computed results.
    pub results: Value,
    /// Computation path: `closed-form`, `recurrence` or `oracle`.
    pub provenance: String,
    /// Whether the results were read from the table cache.
    pub cache_hit: bool,
}

impl Record {
    /// A record that did not touch the cache.
    pub fn new(command: &str, inputs: Value, results: Value, provenance: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            results,
            provenance: provenance.to_string(),
            cache_hit: false,
        }
    }
}

/// A big integer as a JSON number when it fits in 64 bits, else a decimal
/// string.
fn big(n: &impl ToString) -> Value {
    let s = n.to_string();
    match (s.parse::<u64>(), s.parse::<i64>()) {
        (Ok(u), _) => json!(u),
        (_, Ok(i)) => json!(i),
        _ => Value::String(s),
    }
}

/// `sign · √(num/den)` as `{sign, num, den, float}`.
pub fn surd(v: &SurdValue) -> Value {
    let r = v.radicand();
    json!({
        "sign": v.sign(),
        "num": big(r.numer()),
        "den": big(r.denom()),
        "float": v.to_f64(),
    })
}

/// A float with an optional exact counterpart.
pub fn value(float: f64, exact: Option<&SurdValue>) -> Value {
    match exact {
        Some(e) => surd(e),
        None => json!({ "float": float }),
    }
}

/// A rational as `{num, den, float}`.
pub fn rational(r: &Rational) -> Value {
    json!({
        "num": big(r.numer()),
        "den": big(r.denom()),
        "float": su3cg::scalar::rational_to_f64(r),
    })
}

/// An irrep label as `[P, Q]`.
pub fn label(s: IrrepLabel) -> Value {
    json!([s.p, s.q])
}

/// A canonical state as `{i, i3, y}` with fractional strings.
pub fn state(st: &CanonicalState) -> Value {
    json!({ "i": st.i.to_string(), "i3": st.i3.to_string(), "y": st.y.to_string() })
}

/// A coupling point as `{mu, j, k}`.
pub fn point(p: &CouplingPoint) -> Value {
    json!({ "mu": p.mu.to_string(), "j": p.j.to_string(), "k": p.k.to_string() })
}

/// One isoscalar row.
pub fn row(r: &IsoscalarRow) -> Value {
    let factors: Vec<Value> = r
        .points
        .iter()
        .enumerate()
        .map(|(n, p)| {
            json!({
                "point": point(p),
                "value": value(r.values[n], r.exact.as_ref().map(|e| &e[n])),
            })
        })
        .collect();
    json!({ "i": r.i.to_string(), "y": r.y.to_string(), "factors": factors })
}

/// Human-readable form of a value: the exact surd when known, and the float.
pub fn pretty_value(float: f64, exact: Option<&SurdValue>) -> String {
    match exact {
        Some(e) => format!("{} ({float:.12})", e.pretty()),
        None => format!("{float:.15}"),
    }
}
