//! Result tables: a named set of equal-length columns plus the metadata
//! needed to reproduce the run bit-exactly (full parameter echo, tool
//! version, RNG addressing for stochastic commands).

use std::collections::BTreeMap;
use std::io::{self, Write};

pub struct CurveTable {
    /// Sorted key/value metadata; no clocks or host data, so equal runs
    /// serialize identically.
    pub meta: BTreeMap<String, serde_json::Value>,
    /// Column order is presentation order for CSV.
    pub columns: Vec<(String, Vec<f64>)>,
}

impl CurveTable {
    pub fn new() -> Self {
        let mut meta = BTreeMap::new();
        meta.insert("tool".into(), serde_json::Value::String("fbfade".into()));
        meta.insert(
            "version".into(),
            serde_json::Value::String(env!("CARGO_PKG_VERSION").into()),
        );
        CurveTable { meta, columns: Vec::new() }
    }

    pub fn meta_str(&mut self, key: &str, value: impl Into<String>) {
        self.meta.insert(key.into(), serde_json::Value::String(value.into()));
    }

    pub fn meta_num(&mut self, key: &str, value: f64) {
        // non-finite values (ρ = inf) are not JSON numbers
        match serde_json::Number::from_f64(value) {
            Some(n) => self.meta.insert(key.into(), serde_json::Value::Number(n)),
            None => self.meta.insert(key.into(), serde_json::Value::String(value.to_string())),
        };
    }

    pub fn meta_int(&mut self, key: &str, value: u64) {
        self.meta.insert(key.into(), serde_json::Value::Number(value.into()));
    }

    pub fn push_column(&mut self, name: &str, values: Vec<f64>) {
        if let Some((_, first)) = self.columns.first() {
            assert_eq!(first.len(), values.len(), "column length mismatch for {name}");
        }
        self.columns.push((name.into(), values));
    }

    /// CSV form: header row of column names, `.` decimal separator,
    /// LF endings, shortest round-trip float formatting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let header: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        w.write_all(header.join(",").as_bytes())?;
        w.write_all(b"\n")?;
        let rows = self.columns.first().map_or(0, |(_, v)| v.len());
        let mut line = String::new();
        for i in 0..rows {
            line.clear();
            for (j, (_, col)) in self.columns.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&col[i].to_string());
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// JSON form: `{"meta": {...}, "columns": {"name": [...]}}` with
    /// sorted keys.
    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut columns = serde_json::Map::new();
        for (name, values) in &self.columns {
            let arr: Vec<serde_json::Value> = values
                .iter()
                .map(|&v| match serde_json::Number::from_f64(v) {
                    Some(n) => serde_json::Value::Number(n),
                    None => serde_json::Value::String(v.to_string()),
                })
                .collect();
            columns.insert(name.clone(), serde_json::Value::Array(arr));
        }
        let doc = serde_json::json!({
            "meta": self.meta,
            "columns": columns,
        });
        serde_json::to_writer_pretty(&mut w, &doc)?;
        w.write_all(b"\n")
    }
}
