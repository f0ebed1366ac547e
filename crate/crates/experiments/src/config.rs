//! Plain-text experiment configuration: `[section]` headers and
//! `key = value` lines, `#` comments. Keys may repeat (each occurrence is
//! kept in order), values are whitespace-separated token lists. The resolved
//! configuration is echoed into every output directory in a canonical form,
//! so rerunning from that directory reproduces the experiment exactly.

use consensus_core::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Parsed config: section -> key -> values in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    sections: BTreeMap<String, BTreeMap<String, Vec<String>>>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<ConfigMap> {
        let mut map = ConfigMap::default();
        let mut section = String::from("experiment");
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') || line.len() < 3 {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: "malformed section header".into(),
                    });
                }
                section = line[1..line.len() - 1].trim().to_string();
                map.sections.entry(section.clone()).or_default();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "expected 'key = value'".into(),
                });
            };
            map.sections
                .entry(section.clone())
                .or_default()
                .entry(key.trim().to_string())
                .or_default()
                .push(value.trim().to_string());
        }
        Ok(map)
    }

    pub fn read(path: &Path) -> Result<ConfigMap> {
        ConfigMap::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl Into<String>) {
        self.sections
            .entry(section.to_string())
            .or_default()
            .insert(key.to_string(), vec![value.into()]);
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .get(section)?
            .get(key)?
            .last()
            .map(String::as_str)
    }

    pub fn get_all(&self, section: &str, key: &str) -> &[String] {
        self.sections
            .get(section)
            .and_then(|s| s.get(key))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn parse_value<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidInput(format!("config [{section}] {key} = {raw:?} is invalid"))
            }),
        }
    }

    /// Whitespace-separated list value.
    pub fn parse_list<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<Vec<T>>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(raw) => raw
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<T>().map_err(|_| {
                        Error::InvalidInput(format!(
                            "config [{section}] {key}: token {tok:?} is invalid"
                        ))
                    })
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    /// Canonical serialization: sections and keys sorted, repeated keys in
    /// original order. Byte-stable across runs.
    pub fn to_string_canonical(&self) -> String {
        let mut out = String::new();
        for (section, keys) in &self.sections {
            let _ = writeln!(out, "[{section}]");
            for (key, values) in keys {
                for v in values {
                    let _ = writeln!(out, "{key} = {v}");
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_string_canonical())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_keys_and_lists() {
        let text = "# top comment\nname = demo\n[family]\nkind = ring\n[sim]\nsizes = 4 8 16\nevent = impulse 1 2\nevent = ground 3 1\n";
        let cfg = ConfigMap::parse(text).unwrap();
        assert_eq!(cfg.get("experiment", "name"), Some("demo"));
        assert_eq!(cfg.get("family", "kind"), Some("ring"));
        let sizes: Vec<usize> = cfg.parse_list("sim", "sizes").unwrap().unwrap();
        assert_eq!(sizes, vec![4, 8, 16]);
        assert_eq!(cfg.get_all("sim", "event").len(), 2);
    }

    #[test]
    fn canonical_form_is_stable() {
        let text = "[b]\nz = 1\na = 2\n[a]\nk = v\n";
        let cfg = ConfigMap::parse(text).unwrap();
        let s1 = cfg.to_string_canonical();
        let cfg2 = ConfigMap::parse(&s1).unwrap();
        assert_eq!(s1, cfg2.to_string_canonical());
        // Sections and keys are sorted.
        assert!(s1.find("[a]").unwrap() < s1.find("[b]").unwrap());
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(ConfigMap::parse("[unclosed\n").is_err());
        assert!(ConfigMap::parse("no equals sign\n").is_err());
    }

    #[test]
    fn parse_errors_carry_context() {
        let cfg = ConfigMap::parse("[sim]\ndt = fast\n").unwrap();
        let err = cfg.parse_value::<f64>("sim", "dt").unwrap_err();
        assert!(err.to_string().contains("dt"));
    }
}
