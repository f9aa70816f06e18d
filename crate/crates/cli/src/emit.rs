//! CSV and JSON serialisation of result tables.
//!
//! CSV layout: `# key=value` metadata lines, one header row, data rows.
//! Floats use the shortest representation that parses back to the same bits;
//! NaN marks a singular drag sample and is always paired with a `singular=1`
//! flag. JSON carries the same content, with NaN as `null`.

use serde_json::{json, Map, Value};

use optodrag_core::SystemParams;

use crate::args::num;

pub const CONVENTION: &str = "re_n_r is labelled absorption and im_n_r dispersion, \
following the source convention; n_r = 1 + 2 pi chi_r + i 2 pi chi_i";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
}

impl Cell {
    fn csv(self) -> String {
        match self {
            Cell::Num(v) => num(v),
            Cell::Flag(b) => u8::from(b).to_string(),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) => Value::Null,
            Cell::Flag(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Series {
    /// Varied parameter name and value, for multi-series documents.
    pub label: Option<(String, f64)>,
    pub params: SystemParams,
    /// Per-series scalars beyond the system parameters (probe frequency, drag).
    pub extra: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone)]
pub struct Document {
    pub argv: Vec<String>,
    pub meta: Vec<(String, String)>,
    pub series: Vec<Series>,
}

fn params_pairs(p: &SystemParams) -> Vec<(&'static str, String)> {
    vec![
        ("kappa", num(p.kappa())),
        ("omega_m", num(p.omega_m())),
        ("gamma_m", num(p.gamma_m())),
        ("beta", num(p.beta())),
        ("units", p.units().as_str().to_string()),
    ]
}

impl Document {
    fn header(&self) -> Vec<(String, String)> {
        let mut h = vec![
            (
                "tool".to_string(),
                format!("optodrag {}", env!("CARGO_PKG_VERSION")),
            ),
            ("argv".to_string(), self.argv.join(" ")),
        ];
        h.extend(self.meta.iter().cloned());
        h.push(("convention".to_string(), CONVENTION.to_string()));
        h
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.header() {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let multi = self.series.len() > 1 || self.series.iter().any(|s| s.label.is_some());
        for (i, s) in self.series.iter().enumerate() {
            let prefix = if multi {
                format!("series.{i}.")
            } else {
                String::new()
            };
            if let Some((name, value)) = &s.label {
                out.push_str(&format!("# {prefix}varied={name}\n"));
                out.push_str(&format!("# {prefix}value={}\n", num(*value)));
            }
            // units are document-wide and already in the header
            for (k, v) in params_pairs(&s.params)
                .into_iter()
                .filter(|(k, _)| *k != "units")
            {
                out.push_str(&format!("# {prefix}{k}={v}\n"));
            }
            for (k, v) in &s.extra {
                out.push_str(&format!("# {prefix}{k}={v}\n"));
            }
        }
        let Some(first) = self.series.first() else {
            return out;
        };
        let mut header: Vec<String> = Vec::new();
        if let (true, Some((name, _))) = (multi, &first.label) {
            header.push(name.clone());
        }
        header.extend(first.columns.iter().cloned());
        out.push_str(&header.join(","));
        out.push('\n');
        for s in &self.series {
            for row in &s.rows {
                let mut cells: Vec<String> = Vec::with_capacity(row.len() + 1);
                if let (true, Some((_, value))) = (multi, &s.label) {
                    cells.push(num(*value));
                }
                cells.extend(row.iter().map(|c| c.csv()));
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in self.header() {
            if k != "argv" && k != "convention" {
                meta.insert(k, json!(v));
            }
        }
        let series: Vec<Value> = self
            .series
            .iter()
            .map(|s| {
                let mut params = Map::new();
                for (k, v) in params_pairs(&s.params) {
                    let value = v.parse::<f64>().map(|f| json!(f)).unwrap_or(json!(v));
                    params.insert(k.to_string(), value);
                }
                for (k, v) in &s.extra {
                    let value = v.parse::<f64>().map(|f| json!(f)).unwrap_or(json!(v));
                    params.insert(k.clone(), value);
                }
                let rows: Vec<Value> = s
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|c| c.json()).collect()))
                    .collect();
                let mut obj = Map::new();
                if let Some((name, value)) = &s.label {
                    obj.insert("varied".into(), json!(name));
                    obj.insert("value".into(), json!(value));
                }
                obj.insert("params".into(), Value::Object(params));
                obj.insert("columns".into(), json!(s.columns));
                obj.insert("rows".into(), Value::Array(rows));
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "argv": self.argv,
            "meta": meta,
            "convention": CONVENTION,
            "series": series,
        });
        let mut s = doc.to_string();
        s.push('\n');
        s
    }
}
