//! Run configuration: defaults, a `key = value` file, then flags.

use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    JsonLines,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Count(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub seed: u64,
    /// `None` lets each suite pick its own default.
    pub samples: Option<usize>,
    pub output_format: OutputFormat,
    pub threads: Threads,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-12,
            seed: 7,
            samples: None,
            output_format: OutputFormat::JsonLines,
            threads: Threads::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError(format!("invalid value {value:?} for {key}"))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key.trim() {
            "tol" => self.tol = v.parse().map_err(|_| bad(key, v))?,
            "seed" => self.seed = v.parse().map_err(|_| bad(key, v))?,
            "samples" => self.samples = Some(v.parse().map_err(|_| bad(key, v))?),
            "output_format" | "format" => self.output_format = parse_format(v)?,
            "threads" => self.threads = parse_threads(v)?,
            k => return Err(ConfigError(format!("unknown config key {k:?}"))),
        }
        Ok(())
    }

    /// Lines of `key = value`; `#` starts a comment.
    pub fn apply_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v).map_err(|e| ConfigError(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        self.apply_str(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tol > 0.0 && self.tol <= 1e-2) {
            return Err(ConfigError(format!("tol must lie in (0, 1e-2], got {}", self.tol)));
        }
        if self.samples == Some(0) {
            return Err(ConfigError("samples must be at least 1".into()));
        }
        if self.threads == Threads::Count(0) {
            return Err(ConfigError("threads must be at least 1 or auto".into()));
        }
        Ok(())
    }
}

pub fn parse_format(v: &str) -> Result<OutputFormat, ConfigError> {
    match v {
        "json-lines" | "jsonl" | "json" => Ok(OutputFormat::JsonLines),
        "csv" => Ok(OutputFormat::Csv),
        _ => Err(bad("output_format", v)),
    }
}

pub fn parse_threads(v: &str) -> Result<Threads, ConfigError> {
    if v == "auto" {
        return Ok(Threads::Auto);
    }
    v.parse().map(Threads::Count).map_err(|_| bad("threads", v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let mut c = RunConfig::default();
        c.apply_str("# sweep\nseed = 11\nsamples=40\n\noutput_format = csv  # plots\nthreads = 2\ntol = 1e-9\n").unwrap();
        assert_eq!(c.seed, 11);
        assert_eq!(c.samples, Some(40));
        assert_eq!(c.output_format, OutputFormat::Csv);
        assert_eq!(c.threads, Threads::Count(2));
        assert_eq!(c.tol, 1e-9);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert!(c.apply_str("colour = red").is_err());
        assert!(c.apply_str("seed").is_err());
        assert!(c.apply_str("seed = -1").is_err());
        c.tol = 0.1;
        assert!(c.validate().is_err());
        c.tol = 1e-8;
        c.samples = Some(0);
        assert!(c.validate().is_err());
    }
}
