//! Machine-readable reports with deterministic float formatting: every
//! float is printed in scientific notation with 17 significant digits, so
//! identical runs produce byte-identical JSON and CSV.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;

use crate::identities::IdentityResidual;
use crate::levelset::MonotoneSeries;

/// JSON formatter printing floats as `{:.16e}` (17 significant digits,
/// locale-independent, round-trippable).
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize any value to deterministic JSON (17-significant-digit floats).
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json produces UTF-8"))
}

/// Format one float the same way the JSON path does.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV export of a monotone series: columns t, M, dM_dt.
pub fn series_to_csv(s: &MonotoneSeries) -> String {
    let mut out = String::from("t,M,dM_dt\n");
    for i in 0..s.ts.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            format_float(s.ts[i]),
            format_float(s.values[i]),
            format_float(s.derivative_estimates[i])
        ));
    }
    out
}

/// Top-level report schema shared by the CLI commands.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub metric: String,
    pub params: BTreeMap<String, f64>,
    pub suite: Vec<IdentityResidual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<MonotoneSeries>,
    pub verdict: String,
}

impl Report {
    pub fn new(metric: &str, params: BTreeMap<String, f64>) -> Self {
        Report {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            metric: metric.to_string(),
            params,
            suite: Vec::new(),
            series: None,
            verdict: String::new(),
        }
    }

    /// All suite entries pass and, if a series is attached, its verdict too.
    pub fn finalize(&mut self, series_pass: Option<bool>) -> bool {
        let pass = self.suite.iter().all(|r| r.pass) && series_pass.unwrap_or(true);
        self.verdict = if pass { "pass" } else { "fail" }.to_string();
        pass
    }
}
