//! Optional `key = value` settings file. Command-line flags win over it.

use std::collections::BTreeMap;
use std::path::Path;

pub const KEYS: [&str; 9] = [
    "seed",
    "workers",
    "retries",
    "order_cap",
    "general_cap",
    "xyq_cap",
    "b_max",
    "e_max",
    "max_recorded",
];

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct FileConfig {
    values: BTreeMap<String, u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", no + 1))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(format!("line {}: unknown key {k:?} (known: {})", no + 1, KEYS.join(", ")));
            }
            let v: u64 = v
                .replace('_', "")
                .parse()
                .map_err(|_| format!("line {}: {k} needs a non-negative integer, got {v:?}", no + 1))?;
            values.insert(k.to_string(), v);
        }
        Ok(FileConfig { values })
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.values.get(key).copied()
    }

    /// Flag value if given, else the file value, else `default`.
    pub fn pick(&self, flag: Option<u64>, key: &str, default: u64) -> u64 {
        flag.or_else(|| self.get(key)).unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_values_and_comments() {
        let c = FileConfig::parse("# caps\nxyq_cap = 500\n\nb_max=10 # inline\norder_cap = 1_000\n").unwrap();
        assert_eq!(c.get("xyq_cap"), Some(500));
        assert_eq!(c.get("b_max"), Some(10));
        assert_eq!(c.get("order_cap"), Some(1000));
        assert_eq!(c.get("e_max"), None);
        assert_eq!(c.pick(Some(3), "b_max", 7), 3);
        assert_eq!(c.pick(None, "b_max", 7), 10);
        assert_eq!(c.pick(None, "e_max", 7), 7);
    }

    #[test]
    fn parse_errors() {
        assert!(FileConfig::parse("nonsense").is_err());
        assert!(FileConfig::parse("colour = 3").is_err());
        assert!(FileConfig::parse("seed = -1").is_err());
    }
}
