//! Result records and their CSV / JSON encodings.

use std::io::{self, Write};

use crate::dims::SystemDims;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathTag {
    ClosedForm,
    NumericDerivative,
    MonteCarlo,
    Quadrature,
}

impl PathTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            PathTag::ClosedForm => "closed-form",
            PathTag::NumericDerivative => "numeric-derivative",
            PathTag::MonteCarlo => "monte-carlo",
            PathTag::Quadrature => "quadrature",
        }
    }
}

/// Named values from one computation path at one `dims`, with optional error
/// estimates and agreement flags keyed by the same names.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub dims: SystemDims,
    pub path: PathTag,
    pub values: Vec<(String, f64)>,
    pub error_estimates: Vec<(String, f64)>,
    pub agreement_flags: Vec<(String, bool)>,
}

impl ResultRecord {
    pub fn new(dims: SystemDims, path: PathTag) -> Self {
        ResultRecord {
            dims,
            path,
            values: Vec::new(),
            error_estimates: Vec::new(),
            agreement_flags: Vec::new(),
        }
    }

    pub fn value(mut self, name: &str, v: f64) -> Self {
        self.values.push((name.to_owned(), v));
        self
    }

    pub fn error(mut self, name: &str, e: f64) -> Self {
        self.error_estimates.push((name.to_owned(), e));
        self
    }

    pub fn flag(mut self, name: &str, ok: bool) -> Self {
        self.agreement_flags.push((name.to_owned(), ok));
        self
    }

    pub fn all_agree(&self) -> bool {
        self.agreement_flags.iter().all(|(_, ok)| *ok)
    }

    fn lookup<T: Copy>(list: &[(String, T)], name: &str) -> Option<T> {
        list.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    /// One flat row per named value.
    pub fn rows(&self) -> Vec<Row> {
        self.values
            .iter()
            .map(|(name, v)| Row {
                m: self.dims.m(),
                n: self.dims.n(),
                path: self.path.as_str(),
                quantity: name.clone(),
                value: *v,
                error: Self::lookup(&self.error_estimates, name),
                agrees: Self::lookup(&self.agreement_flags, name),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub m: usize,
    pub n: usize,
    pub path: &'static str,
    pub quantity: String,
    pub value: f64,
    pub error: Option<f64>,
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub const CSV_HEADER: &str = "m,n,path,quantity,value,error,agrees";

/// 17 significant digits, enough to round-trip any f64.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_number(v: Option<f64>) -> String {
    match v {
        Some(v) if v.is_finite() => format_number(v),
        _ => "null".to_owned(),
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Records sorted by (m, n, path); row order within a record is kept.
pub fn sorted(mut records: Vec<ResultRecord>) -> Vec<ResultRecord> {
    records.sort_by_key(|r| (r.dims, r.path));
    records
}

pub fn emit<W: Write>(records: &[ResultRecord], format: Format, out: &mut W) -> io::Result<()> {
    let rows: Vec<Row> = records.iter().flat_map(|r| r.rows()).collect();
    match format {
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.m,
                    r.n,
                    r.path,
                    r.quantity,
                    format_number(r.value),
                    r.error.map(format_number).unwrap_or_default(),
                    r.agrees.map(|b| b.to_string()).unwrap_or_default(),
                )?;
            }
        }
        Format::Json => {
            writeln!(out, "[")?;
            for (i, r) in rows.iter().enumerate() {
                let sep = if i + 1 < rows.len() { "," } else { "" };
                writeln!(
                    out,
                    "  {{\"m\": {}, \"n\": {}, \"path\": {}, \"quantity\": {}, \"value\": {}, \"error\": {}, \"agrees\": {}}}{sep}",
                    r.m,
                    r.n,
                    json_string(r.path),
                    json_string(&r.quantity),
                    json_number(Some(r.value)),
                    json_number(r.error),
                    r.agrees.map(|b| b.to_string()).unwrap_or_else(|| "null".to_owned()),
                )?;
            }
            writeln!(out, "]")?;
        }
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> ResultRecord {
        ResultRecord::new(SystemDims::new(2, 3).unwrap(), PathTag::MonteCarlo)
            .value("mean", 0.1 + 0.2)
            .error("mean", 1e-3)
            .flag("mean", true)
            .value("mean_z", -0.5)
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        emit(&[record()], Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "2,3,monte-carlo,mean,3.0000000000000004e-1,1.0000000000000000e-3,true");
        assert_eq!(lines[2], "2,3,monte-carlo,mean_z,-5.0000000000000000e-1,,");
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1 + 0.2, std::f64::consts::PI, 1e-300, -2.5e17, 0.032_124_297_741_465_82] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn sorting_is_by_dims_then_path() {
        let d = |m, n| SystemDims::new(m, n).unwrap();
        let recs = sorted(vec![
            ResultRecord::new(d(2, 3), PathTag::Quadrature),
            ResultRecord::new(d(2, 3), PathTag::ClosedForm),
            ResultRecord::new(d(1, 3), PathTag::MonteCarlo),
        ]);
        let keys: Vec<_> = recs.iter().map(|r| (r.dims.m(), r.dims.n(), r.path)).collect();
        assert_eq!(
            keys,
            vec![
                (1, 3, PathTag::MonteCarlo),
                (2, 3, PathTag::ClosedForm),
                (2, 3, PathTag::Quadrature)
            ]
        );
    }
}
