//! `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Every key is checked
//! when the file is loaded; unknown keys and malformed values are errors.

use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "json" => Some(Self::Json),
            "csv" => Some(Self::Csv),
            "text" => Some(Self::Text),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    pub threads: Option<usize>,
    pub vertex_cap: Option<usize>,
    pub packing_budget: Option<u64>,
    pub search_budget: Option<u64>,
    pub format: Option<OutputFormat>,
    pub emit_witnesses: Option<bool>,
}

pub const KEYS: [&str; 6] = [
    "threads",
    "vertex_cap",
    "packing_budget",
    "search_budget",
    "format",
    "emit_witnesses",
];

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut c = Config::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |msg: String| format!("line {}: {msg}", no + 1);
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| at(format!("expected key = value, got {line:?}")))?;
            let number = |v: &str| v.parse::<u64>().map_err(|_| at(format!("{key}: not a non-negative integer: {v:?}")));
            match key {
                "threads" => c.threads = Some(number(value)? as usize),
                "vertex_cap" => {
                    let cap = number(value)? as usize;
                    if cap == 0 {
                        return Err(at("vertex_cap must be positive".into()));
                    }
                    c.vertex_cap = Some(cap);
                }
                "packing_budget" => c.packing_budget = Some(number(value)?),
                "search_budget" => c.search_budget = Some(number(value)?),
                "format" => {
                    c.format = Some(
                        OutputFormat::parse(value).ok_or_else(|| at(format!("format must be json, csv or text: {value:?}")))?,
                    )
                }
                "emit_witnesses" => {
                    c.emit_witnesses = Some(match value {
                        "true" | "1" | "yes" => true,
                        "false" | "0" | "no" => false,
                        _ => return Err(at(format!("emit_witnesses must be true or false: {value:?}"))),
                    })
                }
                _ => return Err(at(format!("unknown key {key:?} (known: {})", KEYS.join(", ")))),
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let c = Config::parse("# defaults\nthreads = 4\n\nformat=csv\nemit_witnesses = yes\nvertex_cap=100\n").unwrap();
        assert_eq!(c.threads, Some(4));
        assert_eq!(c.format, Some(OutputFormat::Csv));
        assert_eq!(c.emit_witnesses, Some(true));
        assert_eq!(c.vertex_cap, Some(100));
        assert_eq!(c.search_budget, None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Config::parse("colour = red").unwrap_err().contains("unknown key"));
        assert!(Config::parse("threads = -1").unwrap_err().contains("line 1"));
        assert!(Config::parse("threads").is_err());
        assert!(Config::parse("format = xml").is_err());
        assert!(Config::parse("vertex_cap = 0").is_err());
        assert!(Config::parse("emit_witnesses = maybe").is_err());
    }
}
