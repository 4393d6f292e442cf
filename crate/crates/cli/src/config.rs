//! Plain `key = value` run configuration.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use apev_initdata::families::Family;
use apev_solver::PressureLaw;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}` (first set on line {first})")]
    DuplicateKey { line: usize, key: String, first: usize },
    #[error("line {line}: bad value for `{key}`: {message}")]
    Value { line: usize, key: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Which diagnostics `run` evaluates in-line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Toggles {
    pub gresidual: bool,
    pub vorticity: bool,
    pub divcurl: bool,
    pub ledgers: bool,
}

impl Toggles {
    pub fn any(&self) -> bool {
        self.gresidual || self.vorticity || self.divcurl || self.ledgers
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    /// Final time `T`.
    pub t_final: f64,
    /// CFL safety factor.
    pub safety: f64,
    pub gamma: f64,
    pub m0: f64,
    pub big_m0: f64,
    pub rbar: f64,
    pub family: Family,
    pub amplitude: f64,
    /// Largest admissible `|b₃ᵢvᵢ − w_t|` on Γ₁ after a step.
    pub enforcement_tol: f64,
    /// Steps between outputs.
    pub output_every: usize,
    /// Length of the time-derivative window.
    pub window: usize,
    pub toggles: Toggles,
    pub ledger_order: usize,
    /// Random boundary samples for the elliptic ratio probe.
    pub probe_samples: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            n1: 32,
            n2: 32,
            n3: 33,
            t_final: 1.0,
            safety: 0.5,
            gamma: 1.4,
            m0: 0.5,
            big_m0: 2.0,
            rbar: 1.0,
            family: Family::Bump,
            amplitude: 1e-3,
            enforcement_tol: 1e-10,
            output_every: 8,
            window: 9,
            toggles: Toggles { gresidual: true, vorticity: true, divcurl: true, ledgers: true },
            ledger_order: 0,
            probe_samples: 8,
            seed: 0,
        }
    }
}

const KEYS: [&str; 21] = [
    "N1",
    "N2",
    "N3",
    "T",
    "safety",
    "gamma",
    "m0",
    "M0",
    "Rbar",
    "family",
    "amplitude",
    "enforcement_tol",
    "output_every",
    "window",
    "gresidual",
    "vorticity",
    "divcurl",
    "ledgers",
    "ledger_order",
    "probe_samples",
    "seed",
];

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Steady => "steady",
        Family::Bump => "bump",
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>().map_err(|e| ConfigError::Value { line, key: key.to_string(), message: e.to_string() })
}

impl Config {
    pub fn law(&self) -> PressureLaw {
        PressureLaw { gamma: self.gamma, m0: self.m0, big_m0: self.big_m0, rbar: self.rbar }
    }

    /// Parses the text of a configuration file; absent keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = Config::default();
        let mut seen: Vec<(String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .filter(|(k, v)| !k.is_empty() && !v.is_empty())
                .ok_or_else(|| ConfigError::Syntax { line, text: content.to_string() })?;
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey { line, key: key.to_string() });
            }
            if let Some((_, first)) = seen.iter().find(|(k, _)| k == key) {
                return Err(ConfigError::DuplicateKey { line, key: key.to_string(), first: *first });
            }
            seen.push((key.to_string(), line));
            match key {
                "N1" => c.n1 = parse_value(line, key, value)?,
                "N2" => c.n2 = parse_value(line, key, value)?,
                "N3" => c.n3 = parse_value(line, key, value)?,
                "T" => c.t_final = parse_value(line, key, value)?,
                "safety" => c.safety = parse_value(line, key, value)?,
                "gamma" => c.gamma = parse_value(line, key, value)?,
                "m0" => c.m0 = parse_value(line, key, value)?,
                "M0" => c.big_m0 = parse_value(line, key, value)?,
                "Rbar" => c.rbar = parse_value(line, key, value)?,
                "family" => c.family = parse_value(line, key, value)?,
                "amplitude" => c.amplitude = parse_value(line, key, value)?,
                "enforcement_tol" => c.enforcement_tol = parse_value(line, key, value)?,
                "output_every" => c.output_every = parse_value(line, key, value)?,
                "window" => c.window = parse_value(line, key, value)?,
                "gresidual" => c.toggles.gresidual = parse_value(line, key, value)?,
                "vorticity" => c.toggles.vorticity = parse_value(line, key, value)?,
                "divcurl" => c.toggles.divcurl = parse_value(line, key, value)?,
                "ledgers" => c.toggles.ledgers = parse_value(line, key, value)?,
                "ledger_order" => c.ledger_order = parse_value(line, key, value)?,
                "probe_samples" => c.probe_samples = parse_value(line, key, value)?,
                "seed" => c.seed = parse_value(line, key, value)?,
                _ => unreachable!("key list and match arms disagree"),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if !(self.m0 > 0.0) {
            return bad(format!("m0 = {} must be positive: q' must stay bounded below on the density range", self.m0));
        }
        if !(self.big_m0 > self.m0) {
            return bad(format!("M0 = {} must exceed m0 = {}", self.big_m0, self.m0));
        }
        if !(self.gamma > 1.0) {
            return bad(format!("gamma = {} must exceed 1", self.gamma));
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return bad(format!("T = {} must be positive", self.t_final));
        }
        if !(self.rbar >= self.m0 && self.rbar <= self.big_m0) {
            return bad(format!("Rbar = {} must lie in [m0, M0] = [{}, {}]", self.rbar, self.m0, self.big_m0));
        }
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return bad(format!("safety = {} must lie in (0, 1]", self.safety));
        }
        if !(self.amplitude >= 0.0) || !self.amplitude.is_finite() {
            return bad(format!("amplitude = {} must be finite and non-negative", self.amplitude));
        }
        if !(self.enforcement_tol > 0.0) {
            return bad(format!("enforcement_tol = {} must be positive", self.enforcement_tol));
        }
        if self.output_every == 0 {
            return bad("output_every must be at least 1".into());
        }
        if self.window < 3 || self.window % 2 == 0 {
            return bad(format!("window = {} must be odd and at least 3", self.window));
        }
        if self.ledger_order > 3 || self.ledger_order + 1 >= self.window {
            return bad(format!("ledger_order = {} needs 0 ≤ m ≤ 3 and m + 2 ≤ window", self.ledger_order));
        }
        if self.n1 % 2 != 0 || self.n2 % 2 != 0 || self.n1 < 4 || self.n2 < 4 || self.n3 < 9 {
            return bad(format!("grid {}×{}×{} needs even N1, N2 ≥ 4 and N3 ≥ 9", self.n1, self.n2, self.n3));
        }
        Ok(())
    }

    /// Canonical text listing every key.
    pub fn render(&self) -> String {
        let t = &self.toggles;
        let mut s = String::new();
        let _ = writeln!(s, "N1 = {}\nN2 = {}\nN3 = {}", self.n1, self.n2, self.n3);
        let _ = writeln!(s, "T = {:?}\nsafety = {:?}", self.t_final, self.safety);
        let _ = writeln!(s, "gamma = {:?}\nm0 = {:?}\nM0 = {:?}\nRbar = {:?}", self.gamma, self.m0, self.big_m0, self.rbar);
        let _ = writeln!(s, "family = {}\namplitude = {:?}", family_name(self.family), self.amplitude);
        let _ = writeln!(s, "enforcement_tol = {:?}\noutput_every = {}\nwindow = {}", self.enforcement_tol, self.output_every, self.window);
        let _ = writeln!(s, "gresidual = {}\nvorticity = {}\ndivcurl = {}\nledgers = {}", t.gresidual, t.vorticity, t.divcurl, t.ledgers);
        let _ = writeln!(s, "ledger_order = {}\nprobe_samples = {}\nseed = {}", self.ledger_order, self.probe_samples, self.seed);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gives_documented_defaults() {
        let c = Config::parse("# only a comment\n\nT = 1.0\n").unwrap();
        assert_eq!((c.n1, c.n2, c.n3), (32, 32, 33));
        assert_eq!((c.gamma, c.m0, c.big_m0, c.rbar, c.safety), (1.4, 0.5, 2.0, 1.0, 0.5));
        assert_eq!(c, Config::default());
    }

    #[test]
    fn zero_m0_is_rejected_with_positivity_message() {
        let e = Config::parse("m0 = 0\n").unwrap_err();
        assert!(matches!(&e, ConfigError::Invalid(m) if m.contains("must be positive")), "{e}");
    }

    #[test]
    fn duplicates_and_unknown_keys_report_lines() {
        assert_eq!(
            Config::parse("T = 1\n\ngamma = 1.4\nT = 2\n").unwrap_err(),
            ConfigError::DuplicateKey { line: 4, key: "T".into(), first: 1 }
        );
        assert_eq!(Config::parse("T = 1\ncfl = 3\n").unwrap_err(), ConfigError::UnknownKey { line: 2, key: "cfl".into() });
        assert!(matches!(Config::parse("just words\n"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(Config::parse("N3 = many\n"), Err(ConfigError::Value { line: 1, .. })));
        assert!(matches!(Config::parse("family = plane\n"), Err(ConfigError::Value { line: 1, .. })));
    }

    #[test]
    fn physical_ranges_are_enforced() {
        for text in ["gamma = 1.0", "M0 = 0.4", "T = 0", "T = -1", "window = 4", "output_every = 0", "N1 = 7", "safety = 2"] {
            assert!(matches!(Config::parse(text), Err(ConfigError::Invalid(_))), "{text}");
        }
    }

    #[test]
    fn render_round_trips() {
        let c = Config::parse("N1 = 16\nN2 = 8\nN3 = 17\nfamily = steady\nledgers = false\nseed = 9\nT = 0.25\n").unwrap();
        assert_eq!(Config::parse(&c.render()).unwrap(), c);
    }
}
