use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

/// Keys accepted in a config file. Same spelling as the long flags.
pub const KEYS: [&str; 18] = [
    "R", "omega", "delta1", "delta2", "deltaL", "J", "r1", "theta", "phi", "solver", "scenario", "tmax", "tpoints",
    "tau", "dt", "modes", "cutoff", "threads",
];

/// Flat `key = value` file. Blank lines and `#` comments are skipped.
#[derive(Debug, Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(format!("line {}: unknown key `{key}`", n + 1));
            }
            if values.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(format!("line {}: duplicate key `{key}`", n + 1));
            }
        }
        Ok(Config { values })
    }

    /// `flag` if given, otherwise the parsed config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|v| v.parse().map_err(|e| format!("config key `{key}`: {e}")))
            .transpose()
    }
}
