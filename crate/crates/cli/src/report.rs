//! Canonical analysis reports.
//!
//! A report is a JSON envelope `{ body, body_sha256 [, generated_at] }`.
//! The body is serialized canonically — sorted keys (serde_json's default
//! map is ordered) and floats rounded to 12 significant digits — so
//! identical inputs and flags produce byte-identical reports. `generated_at`
//! is only added on request and sits outside the hashed body.

use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};
use std::path::Path;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rounds to 12 significant decimal digits; the canonical float precision
/// for report bodies and plot-data cells.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float reparses")
}

/// Canonical JSON value for a float. Non-finite values have no JSON number
/// representation and are encoded as the strings "inf" / "-inf" / "nan".
pub fn float_value(x: f64) -> Value {
    if x.is_nan() {
        Value::String("nan".to_owned())
    } else if x.is_infinite() {
        Value::String(if x > 0.0 { "inf" } else { "-inf" }.to_owned())
    } else {
        Number::from_f64(round_sig(x))
            .map(Value::Number)
            .unwrap_or_else(|| Value::String("nan".to_owned()))
    }
}

/// Canonical float rendering for CSV plot-data cells.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_owned()
    } else if x.is_infinite() {
        (if x > 0.0 { "inf" } else { "-inf" }).to_owned()
    } else {
        format!("{}", round_sig(x))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Canonical serialization of a JSON value: pretty-printed with sorted keys
/// and a trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report JSON serializes");
    text.push('\n');
    text
}

#[derive(Debug, Clone)]
pub struct ReportBuilder {
    invocation: String,
    input_digests: Vec<(String, String)>,
    rng_algorithm: Option<String>,
    seed: Option<u64>,
    results: Map<String, Value>,
}

impl ReportBuilder {
    pub fn new(invocation: impl Into<String>) -> Self {
        Self {
            invocation: invocation.into(),
            input_digests: Vec::new(),
            rng_algorithm: None,
            seed: None,
            results: Map::new(),
        }
    }

    /// Hashes a file the command read and records it in `input_digests`.
    pub fn add_input(&mut self, path: &Path) -> std::io::Result<()> {
        let bytes = std::fs::read(path)?;
        self.input_digests
            .push((path.display().to_string(), sha256_hex(&bytes)));
        Ok(())
    }

    pub fn set_rng(&mut self, algorithm: &str, seed: u64) {
        self.rng_algorithm = Some(algorithm.to_owned());
        self.seed = Some(seed);
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_owned(), value);
    }

    fn body(&self) -> Value {
        let mut body = Map::new();
        body.insert("tool_version".to_owned(), Value::String(TOOL_VERSION.to_owned()));
        body.insert("invocation".to_owned(), Value::String(self.invocation.clone()));
        body.insert(
            "input_digests".to_owned(),
            Value::Array(
                self.input_digests
                    .iter()
                    .map(|(path, sha256)| {
                        let mut m = Map::new();
                        m.insert("path".to_owned(), Value::String(path.clone()));
                        m.insert("sha256".to_owned(), Value::String(sha256.clone()));
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        if let Some(algorithm) = &self.rng_algorithm {
            body.insert("rng_algorithm".to_owned(), Value::String(algorithm.clone()));
        }
        if let Some(seed) = self.seed {
            body.insert("seed".to_owned(), Value::Number(seed.into()));
        }
        body.insert("results".to_owned(), Value::Object(self.results.clone()));
        Value::Object(body)
    }

    /// Serializes the full envelope. The digest covers the canonical bytes
    /// of the body alone.
    pub fn finish(&self, generated_at: Option<String>) -> String {
        let body = self.body();
        let digest = sha256_hex(canonical_json(&body).as_bytes());
        let mut envelope = Map::new();
        envelope.insert("body".to_owned(), body);
        envelope.insert("body_sha256".to_owned(), Value::String(digest));
        if let Some(ts) = generated_at {
            envelope.insert("generated_at".to_owned(), Value::String(ts));
        }
        canonical_json(&Value::Object(envelope))
    }
}

/// Outcome of verifying a saved report envelope.
#[derive(Debug)]
pub struct VerifySummary {
    pub digest_ok: bool,
    /// `(path, status)` per recorded input: "ok", "changed", or "missing".
    pub inputs: Vec<(String, &'static str)>,
    pub results_keys: Vec<String>,
    pub invocation: String,
}

pub fn verify_report(text: &str) -> Result<VerifySummary, String> {
    let envelope: Value = serde_json::from_str(text).map_err(|e| format!("not JSON: {e}"))?;
    let body = envelope.get("body").ok_or("missing `body`")?;
    let recorded = envelope
        .get("body_sha256")
        .and_then(Value::as_str)
        .ok_or("missing `body_sha256`")?;
    let digest_ok = sha256_hex(canonical_json(body).as_bytes()) == recorded;
    let mut inputs = Vec::new();
    if let Some(list) = body.get("input_digests").and_then(Value::as_array) {
        for item in list {
            let path = item.get("path").and_then(Value::as_str).unwrap_or("");
            let recorded = item.get("sha256").and_then(Value::as_str).unwrap_or("");
            let status = match std::fs::read(path) {
                Ok(bytes) if sha256_hex(&bytes) == recorded => "ok",
                Ok(_) => "changed",
                Err(_) => "missing",
            };
            inputs.push((path.to_owned(), status));
        }
    }
    let results_keys = body
        .get("results")
        .and_then(Value::as_object)
        .map(|m| m.keys().cloned().collect())
        .unwrap_or_default();
    let invocation = body
        .get("invocation")
        .and_then(Value::as_str)
        .unwrap_or("")
        .to_owned();
    Ok(VerifySummary {
        digest_ok,
        inputs,
        results_keys,
        invocation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_to_twelve_significant_digits() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(12345.0), 12345.0);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(format_float(34.5), "34.5");
        assert_eq!(format_float(f64::INFINITY), "inf");
    }

    #[test]
    fn float_value_handles_non_finite() {
        assert_eq!(float_value(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(float_value(f64::NEG_INFINITY), Value::String("-inf".into()));
        assert_eq!(float_value(f64::NAN), Value::String("nan".into()));
        assert_eq!(float_value(2.0), Value::Number(Number::from_f64(2.0).unwrap()));
    }

    #[test]
    fn reports_are_byte_stable_and_verify() {
        let build = || {
            let mut b = ReportBuilder::new("fit x.csv --min-count 5");
            b.insert("alpha", float_value(0.25));
            b.insert("n", Value::Number(7.into()));
            b.finish(None)
        };
        let a = build();
        let b = build();
        assert_eq!(a, b);
        let summary = verify_report(&a).unwrap();
        assert!(summary.digest_ok);
        assert_eq!(summary.results_keys, vec!["alpha", "n"]);
    }

    #[test]
    fn tampered_body_fails_verification() {
        let mut b = ReportBuilder::new("entropy x.csv");
        b.insert("h", float_value(3.0));
        let text = b.finish(None).replace("3.0", "4.0");
        let summary = verify_report(&text).unwrap();
        assert!(!summary.digest_ok);
    }

    #[test]
    fn keys_serialize_sorted() {
        let mut b = ReportBuilder::new("x");
        b.insert("zebra", Value::Null);
        b.insert("apple", Value::Null);
        let text = b.finish(None);
        let apple = text.find("\"apple\"").unwrap();
        let zebra = text.find("\"zebra\"").unwrap();
        assert!(apple < zebra);
    }
}
