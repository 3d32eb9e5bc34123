//! `key = value` settings file. Blank lines and `#` comments are ignored.
//! Command-line flags and environment variables take precedence.

use std::path::PathBuf;

use crate::CliError;

pub const DEFAULT_MAX_N: usize = 4;
pub const DEFAULT_MAX_N_GROTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub cache: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub max_n: usize,
    pub max_n_groth: usize,
    pub zdeg_max: Option<u32>,
    pub bdeg_max: Option<u32>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            cache: None,
            jobs: None,
            max_n: DEFAULT_MAX_N,
            max_n_groth: DEFAULT_MAX_N_GROTH,
            zdeg_max: None,
            bdeg_max: None,
        }
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::usage(format!("config line {line}: {key} expects a number, got '{value}'")))
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {line}: expected key = value")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "cache" => s.cache = Some(PathBuf::from(value)),
                "jobs" => s.jobs = Some(number(key, value, line)?),
                "max-n" => s.max_n = number(key, value, line)?,
                "max-n-groth" => s.max_n_groth = number(key, value, line)?,
                "zdeg-max" => s.zdeg_max = Some(number(key, value, line)?),
                "bdeg-max" => s.bdeg_max = Some(number(key, value, line)?),
                other => return Err(CliError::usage(format!("config line {line}: unknown key '{other}'"))),
            }
        }
        Ok(s)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let s = Settings::parse("# settings\njobs = 3\nmax-n=5\n\ncache = /tmp/c  # here\nzdeg-max = 7\n").unwrap();
        assert_eq!(s.jobs, Some(3));
        assert_eq!(s.max_n, 5);
        assert_eq!(s.cache, Some(PathBuf::from("/tmp/c")));
        assert_eq!(s.zdeg_max, Some(7));
        assert_eq!(s.max_n_groth, DEFAULT_MAX_N_GROTH);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Settings::parse("jobs").is_err());
        assert!(Settings::parse("jobs = many").is_err());
        assert!(Settings::parse("colour = red").is_err());
    }
}
