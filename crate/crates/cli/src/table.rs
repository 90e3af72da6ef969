//! CSV output with a commented header.

use std::fmt::Display;

/// Scientific notation with 9 significant digits; empty for NaN.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.8e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(command: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            command: command.into(),
            params: Vec::new(),
            notes: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# indist {} {}\n", env!("CARGO_PKG_VERSION"), self.command));
        out.push_str("# units: tau in ps; widths and frequencies in rad/ps; R, eta, K, C dimensionless\n");
        for (k, v) in &self.params {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| fmt_num(x)))
                .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output"));
        out
    }
}
