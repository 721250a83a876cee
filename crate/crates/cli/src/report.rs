//! Run reports: text by default, JSON on request; both carry the inputs hash.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use hfl_core::{HilbertTable, ModuleDecomp};

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_hash: String,
    pub results: Value,
    /// Human-readable result lines.
    #[serde(skip)]
    pub lines: Vec<String>,
    pub timing_ms: f64,
    pub version: &'static str,
}

pub fn hash_inputs<'a>(parts: impl IntoIterator<Item = &'a str>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    let digest = h.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

impl RunReport {
    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = format!("$ hfl {}\n", self.command.join(" "));
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(&format!("inputs: {}\n", self.inputs_hash));
        out.push_str(&format!("version: {}\n", self.version));
        out.push_str(&format!("time: {:.3} ms\n", self.timing_ms));
        out
    }
}

pub fn table_json(t: &HilbertTable) -> Value {
    Value::Array(
        t.entries()
            .into_iter()
            .map(|[w, z, d]| serde_json::json!({ "w": w, "z": z, "dim": d }))
            .collect(),
    )
}

pub fn table_lines(t: &HilbertTable) -> Vec<String> {
    if t.is_empty() {
        return vec!["  (zero)".into()];
    }
    t.iter().map(|(g, d)| format!("  {g}: {d}")).collect()
}

pub fn decomp_json(d: &ModuleDecomp) -> Value {
    serde_json::json!({
        "summands": serde_json::to_value(&d.summands).expect("summands serialize"),
        "text": d.to_string(),
    })
}
