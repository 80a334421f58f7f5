//! Record tables in CSV (`x_or_s,value,err,method,flags`) or JSON.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (csv or json)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub x_or_s: f64,
    pub value: f64,
    pub err: f64,
    pub method: String,
    pub flags: Vec<String>,
    /// Large-n limit `(2x/n) e^{-x²/n}`, with `density --rayleigh`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rayleigh: Option<f64>,
}

impl OutputRecord {
    pub fn new(x_or_s: f64, value: f64, err: f64, method: impl Into<String>) -> Self {
        OutputRecord { x_or_s, value, err, method: method.into(), flags: Vec::new(), rayleigh: None }
    }

    pub fn flag(mut self, f: impl Into<String>) -> Self {
        self.flags.push(f.into());
        self
    }
}

/// Plain decimal for moderate magnitudes, scientific notation otherwise.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// Quotes a CSV field when it holds a separator, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn records_csv(records: &[OutputRecord]) -> String {
    let limit = records.iter().any(|r| r.rayleigh.is_some());
    let mut out = String::from("x_or_s,value,err,method,flags");
    if limit {
        out += ",rayleigh";
    }
    out.push('\n');
    for r in records {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            fmt_num(r.x_or_s),
            fmt_num(r.value),
            fmt_num(r.err),
            csv_field(&r.method),
            csv_field(&r.flags.join(";"))
        );
        if limit {
            let _ = write!(out, ",{}", r.rayleigh.map(fmt_num).unwrap_or_default());
        }
        out.push('\n');
    }
    out
}

/// Non-finite numbers become JSON strings ("inf", "-inf", "NaN") so that no
/// information is lost.
pub fn records_json(records: &[OutputRecord]) -> String {
    let v: Vec<serde_json::Value> = records
        .iter()
        .map(|r| {
            let mut o = serde_json::to_value(r).expect("record serializes");
            let m = o.as_object_mut().expect("object");
            for (k, x) in [("x_or_s", r.x_or_s), ("value", r.value), ("err", r.err)] {
                m.insert(k.to_string(), number(x));
            }
            if let Some(x) = r.rayleigh {
                m.insert("rayleigh".into(), number(x));
            }
            o
        })
        .collect();
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

pub fn number(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::Value::String(x.to_string())
    }
}

pub fn render(records: &[OutputRecord], format: Format) -> String {
    match format {
        Format::Csv => records_csv(records),
        Format::Json => records_json(records),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let recs = vec![
            OutputRecord::new(0.5, 1.25, 1e-12, "series0").flag("a").flag("b"),
            OutputRecord::new(1.0, f64::INFINITY, 0.0, "asym_edge"),
        ];
        let s = records_csv(&recs);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "x_or_s,value,err,method,flags");
        assert_eq!(lines[1], "0.5,1.25,1e-12,series0,a;b");
        assert_eq!(lines[2], "1,inf,0,asym_edge,");
    }

    #[test]
    fn json_keeps_non_finite() {
        let recs = vec![OutputRecord::new(-2.0, f64::INFINITY, f64::NAN, "functional_eq").flag("pole")];
        let v: serde_json::Value = serde_json::from_str(&records_json(&recs)).unwrap();
        assert_eq!(v[0]["value"], "inf");
        assert_eq!(v[0]["err"], "NaN");
        assert_eq!(v[0]["flags"][0], "pole");
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
