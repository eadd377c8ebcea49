//! Experiment configuration: a flat `key = value` text format with `#`
//! comments, plus the built-in presets.
//!
//! Real-valued keys accept plain numbers or π-fractions such as `-pi/36`,
//! `3pi/4` or `3*pi/4`. States are written `mixed`, `pure(a, b)` or
//! `matrix(a, b; c, d)` with complex literals like `0.5`, `-i`, `0.3+0.4i`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::dynamics::{time_grid, StateSpec, MAX_GRID_POINTS};
use crate::entropy::Alpha;
use crate::error::{Error, Result};
use crate::hamiltonian::{spectral_info, AnyonParams};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputSet {
    pub csv: bool,
    pub svg: bool,
    pub report: bool,
}

impl Default for OutputSet {
    fn default() -> Self {
        OutputSet { csv: true, svg: true, report: true }
    }
}

/// Where a configuration value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Stated explicitly alongside the published figure.
    Caption,
    /// Filled in by us where the published setup is silent.
    Chosen,
}

impl Provenance {
    fn as_str(&self) -> &'static str {
        match self {
            Provenance::Caption => "caption",
            Provenance::Chosen => "chosen",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub params: AnyonParams,
    pub initial: StateSpec,
    pub t_max: f64,
    pub dt: f64,
    pub alphas: Vec<Alpha>,
    pub dist_pair: Option<(StateSpec, StateSpec)>,
    pub outputs: OutputSet,
    pub provenance: BTreeMap<String, Provenance>,
}

impl ExperimentConfig {
    pub fn new(name: impl Into<String>, params: AnyonParams, t_max: f64, dt: f64) -> Self {
        ExperimentConfig {
            name: name.into(),
            params,
            initial: StateSpec::MaximallyMixed,
            t_max,
            dt,
            alphas: default_alphas(),
            dist_pair: None,
            outputs: OutputSet::default(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn with_phi(&self, phi: f64) -> Self {
        ExperimentConfig { params: self.params.with_phi(phi), ..self.clone() }
    }

    /// Checks hard constraints and returns soft warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        self.params.validate()?;
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::invalid("t_max must be positive"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt must be positive"));
        }
        if self.t_max / self.dt > MAX_GRID_POINTS as f64 {
            return Err(Error::invalid(format!(
                "t_max/dt = {:.3e} exceeds the grid-size guard of {MAX_GRID_POINTS}",
                self.t_max / self.dt
            )));
        }
        time_grid(self.dt, self.t_max)?;
        self.initial.density(2)?;
        if let Some((a, b)) = &self.dist_pair {
            a.density(2)?;
            b.density(2)?;
        }
        let mut warnings = Vec::new();
        let omega = spectral_info(&self.params).oscillation_frequency();
        if omega > 0.0 {
            let limit = 2.0 * PI / omega / 20.0;
            if self.dt > limit {
                warnings.push(format!(
                    "dt = {} under-resolves the predicted oscillation (period/20 = {limit:.4e})",
                    self.dt
                ));
            }
        }
        Ok(warnings)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut fields: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!("line {}: expected 'key = value'", idx + 1))
            })?;
            let key = key.trim().to_string();
            if fields.insert(key.clone(), (idx + 1, value.trim().to_string())).is_some() {
                return Err(Error::invalid(format!("line {}: duplicate key '{key}'", idx + 1)));
            }
        }

        let mut take = |key: &str| fields.remove(key);
        let real = |entry: Option<(usize, String)>, key: &str| -> Result<Option<f64>> {
            entry
                .map(|(line, v)| {
                    parse_real(&v).map_err(|e| Error::invalid(format!("line {line}: {key}: {e}")))
                })
                .transpose()
        };
        let required = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::invalid(format!("missing required key '{key}'")))
        };

        let name = take("name").map(|(_, v)| v).unwrap_or_else(|| "experiment".into());
        let phi = required(real(take("phi"), "phi")?, "phi")?;
        let r = required(real(take("r"), "r")?, "r")?;
        let theta = required(real(take("theta"), "theta")?, "theta")?;
        let r1 = required(real(take("r1"), "r1")?, "r1")?;
        let theta1 = real(take("theta1"), "theta1")?.unwrap_or(0.0);
        let t_max = required(real(take("t_max"), "t_max")?, "t_max")?;
        let dt = required(real(take("dt"), "dt")?, "dt")?;
        let params = AnyonParams::new(phi, r, theta, r1, theta1)?;

        let initial = match take("initial") {
            Some((line, v)) => parse_state(&v).map_err(|e| prefix(line, e))?,
            None => StateSpec::MaximallyMixed,
        };
        let alphas = match take("alphas") {
            Some((line, v)) => v
                .split(',')
                .map(|s| s.parse::<Alpha>())
                .collect::<Result<Vec<_>>>()
                .map_err(|e| prefix(line, e))?,
            None => default_alphas(),
        };
        let dist_pair = match (take("dist.first"), take("dist.second")) {
            (None, None) => None,
            (Some((l1, a)), Some((l2, b))) => Some((
                parse_state(&a).map_err(|e| prefix(l1, e))?,
                parse_state(&b).map_err(|e| prefix(l2, e))?,
            )),
            _ => return Err(Error::invalid("dist.first and dist.second must be given together")),
        };
        let outputs = match take("outputs") {
            Some((line, v)) => parse_outputs(&v).map_err(|e| prefix(line, e))?,
            None => OutputSet::default(),
        };

        let mut provenance = BTreeMap::new();
        let keys: Vec<String> = fields.keys().cloned().collect();
        for key in keys {
            let (line, value) = fields.remove(&key).expect("key listed above");
            let Some(field) = key.strip_prefix("provenance.") else {
                return Err(Error::invalid(format!("line {line}: unknown key '{key}'")));
            };
            let p = match value.as_str() {
                "caption" => Provenance::Caption,
                "chosen" => Provenance::Chosen,
                other => {
                    return Err(Error::invalid(format!(
                        "line {line}: provenance must be 'caption' or 'chosen', got '{other}'"
                    )))
                }
            };
            provenance.insert(field.to_string(), p);
        }

        Ok(ExperimentConfig {
            name,
            params,
            initial,
            t_max,
            dt,
            alphas,
            dist_pair,
            outputs,
            provenance,
        })
    }

    /// Serializes to the text format. Reals are written in shortest
    /// round-trip form, so `parse(to_config_string())` reproduces `self`.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let p = &self.params;
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "phi = {:?}", p.phi);
        let _ = writeln!(s, "r = {:?}", p.r);
        let _ = writeln!(s, "theta = {:?}", p.theta);
        let _ = writeln!(s, "r1 = {:?}", p.r1);
        let _ = writeln!(s, "theta1 = {:?}", p.theta1);
        let _ = writeln!(s, "initial = {}", format_state(&self.initial));
        let _ = writeln!(s, "t_max = {:?}", self.t_max);
        let _ = writeln!(s, "dt = {:?}", self.dt);
        let alphas: Vec<String> = self.alphas.iter().map(Alpha::label).collect();
        let _ = writeln!(s, "alphas = {}", alphas.join(", "));
        let mut outs = Vec::new();
        if self.outputs.csv {
            outs.push("csv");
        }
        if self.outputs.svg {
            outs.push("svg");
        }
        if self.outputs.report {
            outs.push("report");
        }
        let _ = writeln!(s, "outputs = {}", outs.join(", "));
        if let Some((a, b)) = &self.dist_pair {
            let _ = writeln!(s, "dist.first = {}", format_state(a));
            let _ = writeln!(s, "dist.second = {}", format_state(b));
        }
        for (k, v) in &self.provenance {
            let _ = writeln!(s, "provenance.{k} = {}", v.as_str());
        }
        s
    }
}

fn prefix(line: usize, e: Error) -> Error {
    match e {
        Error::InvalidInput(msg) => Error::InvalidInput(format!("line {line}: {msg}")),
        other => other,
    }
}

pub fn default_alphas() -> Vec<Alpha> {
    vec![Alpha::Value(0.5), Alpha::One, Alpha::Value(2.0), Alpha::Inf]
}

/// Parses a real number or a π-fraction (`pi`, `-pi/36`, `3pi/4`, `3*pi/4`).
pub fn parse_real(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let bad = || Error::invalid(format!("cannot parse number '{text}'"));
    let value = if let Some(pos) = s.find("pi") {
        let (num, rest) = s.split_at(pos);
        let rest = &rest[2..];
        let den = match rest.strip_prefix('/') {
            Some(d) => d.parse::<f64>().map_err(|_| bad())?,
            None if rest.is_empty() => 1.0,
            None => return Err(bad()),
        };
        let num = num.strip_suffix('*').unwrap_or(num);
        let coef = match num {
            "" | "+" => 1.0,
            "-" => -1.0,
            n => n.parse::<f64>().map_err(|_| bad())?,
        };
        coef * PI / den
    } else {
        s.parse::<f64>().map_err(|_| bad())?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::invalid(format!("cannot parse complex number '{text}'"));
    let Some(body) = s.strip_suffix('i') else {
        return Ok(C64::new(parse_real(&s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

fn format_complex(z: C64) -> String {
    format!("{:?}{:+?}i", z.re, z.im)
}

pub fn parse_state(text: &str) -> Result<StateSpec> {
    let t = text.trim();
    let inner = |prefix: &str| -> Option<&str> {
        t.strip_prefix(prefix)
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
    };
    if t == "mixed" {
        return Ok(StateSpec::MaximallyMixed);
    }
    if let Some(body) = inner("pure") {
        let v = body.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
        return Ok(StateSpec::Pure(v));
    }
    if let Some(body) = inner("matrix") {
        let rows: Vec<Vec<C64>> = body
            .split(';')
            .map(|row| row.split(',').map(parse_complex).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix state must be square"));
        }
        return Ok(StateSpec::Matrix(ComplexMatrix::new(n, rows.concat())?));
    }
    Err(Error::invalid(format!("unrecognized state '{t}'")))
}

pub fn format_state(state: &StateSpec) -> String {
    match state {
        StateSpec::MaximallyMixed => "mixed".into(),
        StateSpec::Pure(v) => {
            let parts: Vec<String> = v.iter().map(|&z| format_complex(z)).collect();
            format!("pure({})", parts.join(", "))
        }
        StateSpec::Matrix(m) => {
            let n = m.dim();
            let rows: Vec<String> = (0..n)
                .map(|i| {
                    let row: Vec<String> = (0..n).map(|j| format_complex(m[(i, j)])).collect();
                    row.join(", ")
                })
                .collect();
            format!("matrix({})", rows.join("; "))
        }
    }
}

fn parse_outputs(text: &str) -> Result<OutputSet> {
    let mut out = OutputSet { csv: false, svg: false, report: false };
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "csv" => out.csv = true,
            "svg" => out.svg = true,
            "report" => out.report = true,
            other => return Err(Error::invalid(format!("unknown output '{other}'"))),
        }
    }
    Ok(out)
}

/// Built-in experiment presets.
pub mod presets {
    use super::ExperimentConfig;
    use crate::error::{Error, Result};

    const SOURCES: &[(&str, &str)] = &[
        ("fig_alpha", include_str!("../presets/fig_alpha.conf")),
        ("fig_fvarphi_a", include_str!("../presets/fig_fvarphi_a.conf")),
        ("fig_fvarphi_b", include_str!("../presets/fig_fvarphi_b.conf")),
        ("fig_fvarphi_c", include_str!("../presets/fig_fvarphi_c.conf")),
        ("fig_fvarphi_d", include_str!("../presets/fig_fvarphi_d.conf")),
        ("fig_phe_a", include_str!("../presets/fig_phe_a.conf")),
        ("fig_phe_b", include_str!("../presets/fig_phe_b.conf")),
        ("fig_phe_c", include_str!("../presets/fig_phe_c.conf")),
        ("fig_continuous", include_str!("../presets/fig_continuous.conf")),
        ("fig_compare_a", include_str!("../presets/fig_compare_a.conf")),
        ("fig_compare_b", include_str!("../presets/fig_compare_b.conf")),
        ("fig_compare_c", include_str!("../presets/fig_compare_c.conf")),
    ];

    pub fn names() -> impl Iterator<Item = &'static str> {
        SOURCES.iter().map(|(n, _)| *n)
    }

    pub fn source(name: &str) -> Option<&'static str> {
        SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
    }

    pub fn get(name: &str) -> Result<ExperimentConfig> {
        let src = source(name).ok_or_else(|| Error::invalid(format!("unknown preset '{name}'")))?;
        ExperimentConfig::parse(src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::PtPhase;

    #[test]
    fn pi_fractions() {
        assert_eq!(parse_real("-pi/36").unwrap(), -PI / 36.0);
        assert_eq!(parse_real("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_real("3 * pi / 4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("0.8").unwrap(), 0.8);
        assert!(parse_real("pix").is_err());
        assert!(parse_real("nan").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5").unwrap(), C64::new(0.5, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("0.3+0.4i").unwrap(), C64::new(0.3, 0.4));
        assert_eq!(parse_complex("1e-3-2e-1i").unwrap(), C64::new(1e-3, -0.2));
        assert_eq!(parse_complex("-2.5i").unwrap(), C64::new(0.0, -2.5));
        assert!(parse_complex("1+2j").is_err());
    }

    #[test]
    fn state_syntax() {
        assert_eq!(parse_state("mixed").unwrap(), StateSpec::MaximallyMixed);
        let s = parse_state("pure(1, 0)").unwrap();
        assert_eq!(s, StateSpec::basis(2, 0));
        let m = parse_state("matrix(0.5, 0; 0, 0.5)").unwrap();
        assert!(matches!(m, StateSpec::Matrix(_)));
        assert!(parse_state("matrix(1, 0; 0)").is_err());
        assert!(parse_state("thermal").is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = ExperimentConfig::parse("phi = 0\nr = oops\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(ExperimentConfig::parse("phi = 0\nbogus = 1\n").is_err());
        let missing = ExperimentConfig::parse("phi = 0\n").unwrap_err();
        assert!(missing.to_string().contains("missing"));
        assert!(ExperimentConfig::parse("phi = 0\nphi = 1\n").is_err());
    }

    #[test]
    fn all_presets_parse_and_validate() {
        for name in presets::names() {
            let cfg = presets::get(name).unwrap();
            assert_eq!(cfg.name, name);
            let warnings = cfg.validate().unwrap();
            assert!(warnings.is_empty(), "{name}: {warnings:?}");
        }
        assert!(presets::get("nope").is_err());
    }

    #[test]
    fn sourced_fields_match() {
        let alpha = presets::get("fig_alpha").unwrap();
        assert_eq!(alpha.params.phi, -PI / 18.0);
        let info = spectral_info(&alpha.params);
        assert!(info.delta > 0.0 && info.lambda.unwrap().abs() < 1e-12);

        for (suffix, phi) in [("a", -PI / 36.0), ("b", -PI / 12.0), ("c", -PI / 6.0), ("d", -3.0 * PI / 4.0)]
        {
            let cfg = presets::get(&format!("fig_fvarphi_{suffix}")).unwrap();
            assert_eq!(cfg.params.phi, phi);
            let rc = cfg.params.r * cfg.params.theta.cos();
            assert!((rc + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
            assert!(spectral_info(&cfg.params).lambda.unwrap().abs() < 1e-12);
        }

        for (suffix, r) in [("a", 0.8), ("b", 1.0), ("c", 1.2)] {
            let cfg = presets::get(&format!("fig_phe_{suffix}")).unwrap();
            assert_eq!(cfg.params.phi, -PI / 36.0);
            assert_eq!(cfg.params.r, r);
            assert_eq!(spectral_info(&cfg.params).phase, PtPhase::Unbroken);
        }

        let cont = presets::get("fig_continuous").unwrap();
        let p = cont.params;
        assert_eq!((p.r, p.r1, p.theta), (40.0, 32.0, 33.0 * PI / 64.0));
        let delta = p.delta();
        let want = -2.0 * (-delta / (p.r * p.theta.cos()).powi(2)).sqrt().atan();
        assert!((p.phi - want).abs() < 1e-15);
        assert_eq!(spectral_info(&p).phase, PtPhase::Broken);
    }

    #[test]
    fn compare_presets_share_phe_parameters() {
        for (cmp, phe) in [("a", "a"), ("b", "c"), ("c", "b")] {
            let c = presets::get(&format!("fig_compare_{cmp}")).unwrap();
            let p = presets::get(&format!("fig_phe_{phe}")).unwrap();
            assert_eq!(c.params, p.params);
            assert!(c.dist_pair.is_some());
        }
    }

    #[test]
    fn validation_guards() {
        let mut cfg = presets::get("fig_phe_a").unwrap();
        cfg.dt = 1e-6;
        cfg.t_max = 100.0;
        assert!(cfg.validate().is_err());
        let mut cfg = presets::get("fig_phe_a").unwrap();
        cfg.dt = 1.0;
        assert_eq!(cfg.validate().unwrap().len(), 1);
        cfg.t_max = -1.0;
        assert!(cfg.validate().is_err());
    }
}
