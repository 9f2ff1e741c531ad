//! JSON run reports with stable key order and rounded floats.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

/// Significant digits kept for every float in a report.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Name of the only report field allowed to differ between identical runs.
pub const TIMINGS_KEY: &str = "timings_ms";

#[derive(Debug, Serialize)]
pub struct RunReport<T> {
    pub command: Vec<String>,
    pub version: &'static str,
    pub input_digest: Option<String>,
    pub seed: Option<u64>,
    pub results: T,
    pub timings_ms: BTreeMap<&'static str, f64>,
}

/// Wall-clock time per named stage.
#[derive(Debug, Default)]
pub struct Stopwatch {
    stages: BTreeMap<&'static str, f64>,
}

impl Stopwatch {
    pub fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.stages.entry(stage).or_default() += start.elapsed().as_secs_f64() * 1e3;
        out
    }

    pub fn into_map(self) -> BTreeMap<&'static str, f64> {
        self.stages
    }
}

pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(num) if !(num.is_i64() || num.is_u64()) => {
            if let Some(x) = num.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_significant(x)) {
                    *num = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with a trailing newline. Non-finite floats become `null`.
pub fn render<T: Serialize>(report: &RunReport<T>) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    round_floats(&mut value);
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

/// Removes the timing field so that reports of identical runs compare equal.
pub fn without_timings(json: &str) -> Option<Value> {
    let mut value: Value = serde_json::from_str(json).ok()?;
    value.as_object_mut()?.remove(TIMINGS_KEY);
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_significant(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_significant(2.0), 2.0);
        assert_eq!(round_significant(123_456_789.123_456_79), 123_456_789.123);
        assert_eq!(round_significant(0.0), 0.0);
        assert!(round_significant(f64::INFINITY).is_infinite());
    }

    #[test]
    fn keys_follow_field_order() {
        #[derive(Serialize)]
        struct R {
            zeta: f64,
            alpha: u32,
        }
        let report = RunReport {
            command: vec!["x".into()],
            version: "0",
            input_digest: None,
            seed: Some(3),
            results: R { zeta: 0.1 + 0.2, alpha: 1 },
            timings_ms: BTreeMap::new(),
        };
        let text = render(&report);
        assert!(text.find("\"zeta\"").unwrap() < text.find("\"alpha\"").unwrap());
        assert!(text.contains("0.3,") || text.contains("0.3\n"));
        assert!(text.find("\"command\"").unwrap() < text.find("\"results\"").unwrap());
        assert_eq!(without_timings(&text).unwrap().get(TIMINGS_KEY), None);
    }
}
