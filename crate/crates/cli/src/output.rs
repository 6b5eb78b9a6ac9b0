use std::fs::File;
use std::io::{self, Write};

use serde::Serialize;

use crate::config::{Format, RunConfig};

/// Renders records in the configured format.
pub fn render<T: Serialize>(records: &[T], format: Format, text: impl Fn(&T) -> String) -> Result<String, String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
        Format::Text => Ok(records.iter().map(|r| text(r) + "\n").collect()),
    }
}

pub fn emit(cfg: &RunConfig, body: &str) -> io::Result<()> {
    match &cfg.output {
        Some(path) => File::create(path)?.write_all(body.as_bytes()),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        n: u32,
        v: String,
    }

    fn rows() -> Vec<Row> {
        vec![Row { n: 1, v: "1".into() }, Row { n: 2, v: "-24".into() }]
    }

    #[test]
    fn csv_has_header() {
        let s = render(&rows(), Format::Csv, |_| String::new()).unwrap();
        assert_eq!(s, "n,v\n1,1\n2,-24\n");
    }

    #[test]
    fn json_is_an_array_of_strings() {
        let s = render(&rows(), Format::Json, |_| String::new()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[1]["v"], "-24");
    }

    #[test]
    fn text_uses_the_formatter() {
        let s = render(&rows(), Format::Text, |r| format!("{} {}", r.n, r.v)).unwrap();
        assert_eq!(s, "1 1\n2 -24\n");
    }
}
