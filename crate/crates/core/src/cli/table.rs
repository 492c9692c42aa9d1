//! Column tables and their CSV and JSON renderings.

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Self::Num(x as f64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Self::Text(if b { "pass" } else { "fail" }.into())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Values of a numeric column; text cells become NaN.
    pub fn numeric_column(&self, j: usize) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match &r[j] {
                Cell::Num(x) => *x,
                Cell::Text(_) => f64::NAN,
            })
            .collect()
    }

    pub fn is_numeric(&self, j: usize) -> bool {
        self.rows.iter().all(|r| matches!(r[j], Cell::Num(_)))
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format_sig(*x, 12),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{column: [values...]}` in column order; non-finite numbers become null.
    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        for (j, name) in self.columns.iter().enumerate() {
            let values = self
                .rows
                .iter()
                .map(|r| match &r[j] {
                    Cell::Num(x) => serde_json::Number::from_f64(round_sig(*x, 12))
                        .map_or(Value::Null, Value::Number),
                    Cell::Text(s) => Value::String(s.clone()),
                })
                .collect();
            map.insert(name.clone(), Value::Array(values));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(map))
            .expect("JSON values are serialisable");
        s.push('\n');
        s
    }
}

/// `x` rounded to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal text of `x` rounded to `digits` significant digits, in
/// positional notation for moderate exponents.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, round_sig(x, digits)))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(
            format_sig(1.0 / (2.0 * std::f64::consts::PI), 12),
            "0.159154943092"
        );
        assert_eq!(format_sig(-2.5e-7, 12), "-2.5e-7");
        assert_eq!(format_sig(1.234e-5, 12), "0.00001234");
        assert_eq!(format_sig(6.02214076e23, 12), "6.02214076e23");
        assert_eq!(format_sig(123456789012.4, 12), "123456789012");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(f64::NAN, 12), "NaN");
    }

    #[test]
    fn csv_and_json_share_columns() {
        let mut t = Table::new(&["r", "E"]);
        t.push(vec![1.0.into(), 0.5.into()]);
        t.push(vec![2.0.into(), f64::NAN.into()]);
        assert_eq!(t.to_csv(), "r,E\n1,0.5\n2,NaN\n");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["r"], serde_json::json!([1.0, 2.0]));
        assert_eq!(v["E"], serde_json::json!([0.5, null]));
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["r", "E"]);
    }
}
