//! Artifact writers. Every float leaves the program with 9 significant digits.

use serde_json::Value;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// `x` rounded to 9 significant digits.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Shortest text for `sig9(x)`, in scientific notation.
pub fn fmt9(x: f64) -> String {
    format!("{:e}", sig9(x))
}

/// Rounds every number in a JSON tree to 9 significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => serde_json::Number::from_f64(sig9(n.as_f64().expect("f64"))).map_or(Value::Null, Value::Number),
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Output directory plus the list of files written into it, in write order.
pub struct ArtifactDir {
    root: PathBuf,
    written: Vec<String>,
}

impl ArtifactDir {
    pub fn create(root: &Path) -> io::Result<Self> {
        fs::create_dir_all(root)?;
        Ok(ArtifactDir { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// CSV with the header `N,error`.
    pub fn csv(&mut self, name: &str, rows: &[(usize, f64)]) -> io::Result<()> {
        let mut text = String::from("N,error\n");
        for (n, e) in rows {
            text.push_str(&format!("{n},{}\n", fmt9(*e)));
        }
        self.write(name, &text)
    }

    pub fn json(&mut self, name: &str, value: Value) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(&round_json(value)).expect("serializable");
        text.push('\n');
        self.write(name, &text)
    }

    fn write(&mut self, name: &str, text: &str) -> io::Result<()> {
        fs::write(self.root.join(name), text)?;
        self.written.push(name.to_string());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.1234567891234), 0.123456789);
        assert_eq!(fmt9(1.0 / 3.0), "3.33333333e-1");
        assert_eq!(fmt9(0.125), "1.25e-1");
        assert_eq!(fmt9(0.0), "0e0");
        assert_eq!(sig9(-98765.43210987), -98765.4321);
    }

    #[test]
    fn json_rounding_keeps_structure() {
        let v = round_json(json!({"a": [1.0 / 7.0, 3], "b": {"c": "x", "d": 3.0f64.sqrt()}}));
        assert_eq!(v, json!({"a": [0.142857143, 3], "b": {"c": "x", "d": 1.73205081}}));
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = ArtifactDir::create(&dir.path().join("nested")).unwrap();
        out.csv("c.csv", &[(1, 0.5), (10, 1.0 / 3.0)]).unwrap();
        let text = fs::read_to_string(out.root().join("c.csv")).unwrap();
        assert_eq!(text, "N,error\n1,5e-1\n10,3.33333333e-1\n");
        assert_eq!(out.written(), ["c.csv"]);
    }
}
