//! The `rtk-report/1` document and its plain-text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "rtk-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub input: Input,
    pub verdicts: Map<String, Value>,
    pub multiset: Option<Vec<MultisetEntry>>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Input {
    pub command: String,
    #[serde(rename = "type")]
    pub ty: Option<String>,
    pub lambda: Option<Vec<i64>>,
    pub p: Option<u64>,
    pub flags: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultisetEntry {
    pub weight: Vec<i64>,
    pub multiplicity: Value,
    pub orbit_size: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub tables: String,
    pub tables_checksum: String,
    pub embeddings: Option<String>,
    pub embeddings_checksum: Option<String>,
    /// Table rows consulted, as `T3#4`.
    pub rows: Vec<String>,
    pub methods: Vec<String>,
    pub notes: Vec<String>,
}

/// Integers as JSON numbers when they fit, as decimal strings otherwise.
pub fn big(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(n.to_string()),
    }
}

impl Report {
    pub fn new(input: Input, provenance: Provenance) -> Self {
        Report { schema_version: SCHEMA_VERSION.into(), input, verdicts: Map::new(), multiset: None, provenance }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.verdicts.insert(key.to_string(), v.into());
    }

    pub fn row(&mut self, id: impl ToString) {
        let s = id.to_string();
        if !self.provenance.rows.contains(&s) {
            self.provenance.rows.push(s);
        }
    }

    pub fn method(&mut self, m: &str) {
        if !self.provenance.methods.iter().any(|x| x == m) {
            self.provenance.methods.push(m.to_string());
        }
    }

    pub fn note(&mut self, n: impl ToString) {
        self.provenance.notes.push(n.to_string());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let i = &self.input;
        let mut head = vec![i.command.clone()];
        head.extend(i.ty.clone());
        if let Some(l) = &i.lambda {
            head.push(format!("({})", l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
        }
        if let Some(p) = i.p {
            head.push(format!("p={p}"));
        }
        let _ = writeln!(s, "{}", head.join(" "));
        for (k, v) in &self.verdicts {
            render(&mut s, k, v);
        }
        if let Some(ms) = &self.multiset {
            let _ = writeln!(s, "multiset:");
            for e in ms {
                let w: Vec<String> = e.weight.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "  ({}) mult {} orbit {}", w.join(","), scalar(&e.multiplicity), scalar(&e.orbit_size));
            }
        }
        for n in &self.provenance.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

pub fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(true) => "yes".into(),
        Value::Bool(false) => "no".into(),
        Value::String(x) => x.clone(),
        Value::Number(n) => n.to_string(),
        Value::Array(a) if a.is_empty() => "none".into(),
        Value::Array(a) if a.iter().all(Value::is_number) => {
            format!("({})", a.iter().map(scalar).collect::<Vec<_>>().join(","))
        }
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(", "),
        Value::Object(o) => o.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" "),
    }
}

fn render(s: &mut String, key: &str, v: &Value) {
    match v {
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) || a.len() > 8 => {
            let _ = writeln!(s, "{key}: {} entries", a.len());
            for x in a {
                let _ = writeln!(s, "  {}", scalar(x));
            }
        }
        _ => {
            let _ = writeln!(s, "{key}: {}", scalar(v));
        }
    }
}
