//! Knob resolution: command-line flags, optional key=value config file,
//! environment overrides, and the resolved-config echo embedded in reports.
//!
//! Precedence is flag > config file > default. The environment is consulted
//! only for the output directory (`RI_OUT_DIR`) and the rayon thread count
//! (`RI_THREADS`).

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use ri_core::grammar;
use ri_core::report::SuiteRun;
use ri_core::{Error, Result};

pub const ENV_OUT_DIR: &str = "RI_OUT_DIR";
pub const ENV_THREADS: &str = "RI_THREADS";

/// One resolved knob value and where it came from; config-file values keep
/// their line for diagnostics, flag values use line 0.
#[derive(Debug, Clone)]
pub struct Sourced {
    pub value: String,
    pub line: usize,
}

/// Key=value file entries plus the flag overlay.
#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, Sourced>,
    /// resolved (key, value) pairs in resolution order, echoed into reports
    trace: std::cell::RefCell<Vec<(String, String)>>,
}

impl Resolver {
    /// Loads `path` if given. Lines are `key = value`, blank lines and
    /// `#` comments allowed; duplicate keys are rejected.
    pub fn new(path: Option<&PathBuf>) -> Result<Self> {
        let mut file = BTreeMap::new();
        if let Some(path) = path {
            let text = fs::read_to_string(path)?;
            for (i, raw) in text.lines().enumerate() {
                let line_no = i + 1;
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(Error::config(line_no, 1, "expected 'key = value'"));
                };
                let key = key.trim().to_string();
                let value = value.trim().trim_matches('"').to_string();
                if file
                    .insert(key.clone(), Sourced { value, line: line_no })
                    .is_some()
                {
                    return Err(Error::config(line_no, 1, format!("duplicate key '{key}'")));
                }
            }
        }
        Ok(Resolver { file, trace: Default::default() })
    }

    fn record(&self, key: &str, value: &str) {
        self.trace.borrow_mut().push((format!("cli.{key}"), value.to_string()));
    }

    /// Raw lookup: flag wins, then the config file.
    pub fn get(&self, flag: Option<&String>, key: &str) -> Option<Sourced> {
        if let Some(v) = flag {
            return Some(Sourced { value: v.clone(), line: 0 });
        }
        self.file.get(key).cloned()
    }

    pub fn string(&self, flag: Option<&String>, key: &str, default: &str) -> String {
        let v = self
            .get(flag, key)
            .map(|s| s.value)
            .unwrap_or_else(|| default.to_string());
        self.record(key, &v);
        v
    }

    pub fn opt_string(&self, flag: Option<&String>, key: &str) -> Option<String> {
        let v = self.get(flag, key).map(|s| s.value);
        if let Some(v) = &v {
            self.record(key, v);
        }
        v
    }

    /// Required knob; names the key in the error when absent.
    pub fn required(&self, flag: Option<&String>, key: &str) -> Result<String> {
        self.get(flag, key)
            .map(|s| {
                self.record(key, &s.value);
                s.value
            })
            .ok_or_else(|| Error::config(1, 1, format!("missing required option '{key}'")))
    }

    pub fn number(&self, flag: Option<&String>, key: &str, default: f64) -> Result<f64> {
        match self.get(flag, key) {
            None => {
                self.record(key, &format!("{default}"));
                Ok(default)
            }
            Some(s) => {
                let v = at_line(grammar::parse_number(&s.value), key, s.line)?;
                self.record(key, &s.value);
                Ok(v)
            }
        }
    }

    pub fn opt_number(&self, flag: Option<&String>, key: &str) -> Result<Option<f64>> {
        match self.get(flag, key) {
            None => Ok(None),
            Some(s) => {
                let v = at_line(grammar::parse_number(&s.value), key, s.line)?;
                self.record(key, &s.value);
                Ok(Some(v))
            }
        }
    }

    pub fn integer(&self, flag: Option<&String>, key: &str, default: usize) -> Result<usize> {
        match self.get(flag, key) {
            None => {
                self.record(key, &format!("{default}"));
                Ok(default)
            }
            Some(s) => {
                let v = s.value.parse::<usize>().map_err(|_| {
                    Error::config(s.line.max(1), 1, format!("'{key}' expects an integer, got '{}'", s.value))
                })?;
                self.record(key, &s.value);
                Ok(v)
            }
        }
    }

    pub fn seed(&self, flag: Option<&String>, key: &str, default: u64) -> Result<u64> {
        match self.get(flag, key) {
            None => {
                self.record(key, &format!("{default}"));
                Ok(default)
            }
            Some(s) => {
                let v = s.value.parse::<u64>().map_err(|_| {
                    Error::config(s.line.max(1), 1, format!("'{key}' expects an integer seed, got '{}'", s.value))
                })?;
                self.record(key, &s.value);
                Ok(v)
            }
        }
    }

    pub fn flag(&self, set: bool, key: &str) -> bool {
        let v = set
            || self
                .file
                .get(key)
                .map(|s| s.value == "true" || s.value == "1")
                .unwrap_or(false);
        if v {
            self.record(key, "true");
        }
        v
    }

    /// Grammar-valued knob: parses with `parse`, reanchoring errors to the
    /// config-file line when the value came from a file.
    pub fn parsed<T>(
        &self,
        flag: Option<&String>,
        key: &str,
        default: &str,
        parse: impl Fn(&str) -> Result<T>,
    ) -> Result<T> {
        let s = self
            .get(flag, key)
            .unwrap_or_else(|| Sourced { value: default.to_string(), line: 0 });
        let v = at_line(parse(&s.value), key, s.line)?;
        self.record(key, &s.value);
        Ok(v)
    }

    /// Appends every knob this resolver handed out to the report config, so
    /// the written JSON carries the full resolved run configuration.
    pub fn echo_into(&self, run: &mut SuiteRun) {
        for (k, v) in self.trace.borrow().iter() {
            run.report.config.push((k.clone(), v.clone()));
        }
    }
}

/// Reanchors a grammar error to a config-file line; flag values (line 0)
/// keep their own positions but gain the knob name.
fn at_line<T>(r: Result<T>, key: &str, line: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config { line: l, col, msg } => {
            let msg = format!("in '{key}': {msg}");
            if line > 0 {
                Error::Config { line, col, msg }
            } else {
                Error::Config { line: l, col, msg }
            }
        }
        other => other,
    })
}

/// Output directory: `RI_OUT_DIR` or the current directory.
pub fn out_dir() -> PathBuf {
    std::env::var_os(ENV_OUT_DIR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

/// Applies `RI_THREADS` to the global rayon pool; suites stay deterministic
/// at any level, so this only affects speed.
pub fn init_threads() -> Result<()> {
    if let Ok(text) = std::env::var(ENV_THREADS) {
        let n: usize = text
            .parse()
            .map_err(|_| Error::config(1, 1, format!("{ENV_THREADS} expects an integer, got '{text}'")))?;
        if n == 0 {
            return Err(Error::config(1, 1, format!("{ENV_THREADS} must be at least 1")));
        }
        // a second build_global in the same process is a no-op, which is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}
