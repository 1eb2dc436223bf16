use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog::{ControlFunction, FunctionSpec, PexiderTriple};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyKind, FuzzyNorm, TGrid};
use crate::hyers::{HyersOptions, IterationKind};
use crate::space::{ClassicalNorm, NormKind};
use crate::verify::{
    classical_constant, decomposition_constant, even_pexider_constants, odd_pexider_constants,
};

/// Checks a scenario can request. Some produce several reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    Axioms,
    QAlmost,
    ControlBounded,
    QuadraticBound,
    Classical,
    OddPexider,
    EvenPexider,
    Decomposition,
    HyersTrace,
    Alpha,
}

impl CheckId {
    pub fn id(self) -> &'static str {
        match self {
            CheckId::Axioms => "axioms",
            CheckId::QAlmost => "q-almost",
            CheckId::ControlBounded => "control-bounded",
            CheckId::QuadraticBound => "quadratic-bound",
            CheckId::Classical => "classical",
            CheckId::OddPexider => "odd-pexider",
            CheckId::EvenPexider => "even-pexider",
            CheckId::Decomposition => "decomposition",
            CheckId::HyersTrace => "hyers-trace",
            CheckId::Alpha => "alpha",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzyKindId {
    Nk,
    Crisp,
}

/// `{ kind = "nk", k = 1.0 }` or `{ kind = "crisp" }`, optionally with the
/// underlying classical `norm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyNormConfig {
    pub kind: FuzzyKindId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormKind>,
}

impl FuzzyNormConfig {
    fn build(&self, role: &str, dim: usize, default_norm: &NormKind) -> Result<FuzzyNorm> {
        let norm = self.norm.clone().unwrap_or_else(|| default_norm.clone());
        let base = ClassicalNorm::new(dim, norm).map_err(|e| config_err(format!("fuzzy_norm_{role}: {e}")))?;
        let kind = match (self.kind, self.k) {
            (FuzzyKindId::Nk, Some(k)) => FuzzyKind::Nk { k },
            (FuzzyKindId::Nk, None) => return Err(config_err(format!("fuzzy_norm_{role}: kind nk needs k"))),
            (FuzzyKindId::Crisp, None) => FuzzyKind::Crisp,
            (FuzzyKindId::Crisp, Some(_)) => {
                return Err(config_err(format!("fuzzy_norm_{role}: kind crisp takes no k")))
            }
        };
        FuzzyNorm::new(kind, base).map_err(|e| config_err(format!("fuzzy_norm_{role}: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalConfig {
    pub p: f64,
    /// Omitted: use the preset `4 / (2^{2-p} - 1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

fn default_l2() -> NormKind {
    NormKind::L2
}

fn default_tol() -> f64 {
    HyersOptions::default().tol
}

fn default_eps() -> f64 {
    HyersOptions::default().eps
}

fn default_max_n() -> u32 {
    HyersOptions::default().max_n
}

/// Declarative scenario description, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub seed: u64,
    /// Dimension of the domain X.
    pub dim: usize,
    /// Norm on X; also the default for Y when Y has the same dimension.
    #[serde(default = "default_l2")]
    pub classical_norm: NormKind,
    pub sample_count: usize,
    pub sample_radius: f64,
    #[serde(default)]
    pub t_grid: TGrid,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_max_n")]
    pub max_n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default)]
    pub checks: Vec<CheckId>,
    /// Iteration used by `hyers-trace`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iteration: Option<IterationKind>,
    pub fuzzy_norm_x: FuzzyNormConfig,
    pub fuzzy_norm_y: FuzzyNormConfig,
    /// Fuzzy norm on the real line for control-function values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzzy_norm_z: Option<FuzzyNormConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<PexiderTriple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<ControlFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalConfig>,
}

pub(crate) fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| config_err(e.message().to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err(e.to_string()))
    }
}

/// A validated configuration with its norms and functions built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub fn_x: FuzzyNorm,
    pub fn_y: FuzzyNorm,
    pub fn_z: Option<FuzzyNorm>,
    pub function: Option<FunctionSpec>,
    pub triple: Option<PexiderTriple>,
    pub options: HyersOptions,
}

impl Scenario {
    pub fn from_config(config: ScenarioConfig) -> Result<Self> {
        let c = &config;
        if c.name.is_empty() || !c.name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '-' || ch == '_') {
            return Err(config_err("name must be nonempty and use only [A-Za-z0-9_-]"));
        }
        if c.dim == 0 {
            return Err(config_err("dim must be at least 1"));
        }
        if c.sample_count == 0 || c.sample_count > 1_000_000 {
            return Err(config_err(format!("sample_count must lie in 1..=1000000, got {}", c.sample_count)));
        }
        if !(c.sample_radius.is_finite() && c.sample_radius > 0.0) {
            return Err(config_err(format!("sample_radius must be positive, got {}", c.sample_radius)));
        }
        if c.max_n > 1000 {
            return Err(config_err(format!("max_n must be at most 1000, got {}", c.max_n)));
        }
        let options = HyersOptions {
            tol: c.tol,
            eps: c.eps,
            max_n: c.max_n,
            offset: 0,
        };
        options.validate().map_err(|e| config_err(e.to_string()))?;
        ClassicalNorm::new(c.dim, c.classical_norm.clone()).map_err(|e| config_err(format!("classical_norm: {e}")))?;

        let (function, triple) = match (&c.function, &c.triple) {
            (Some(_), Some(_)) => return Err(config_err("give either function or triple, not both")),
            (Some(f), None) => (Some(f.clone()), None),
            (None, Some(t)) => (Some(t.f.clone()), Some(t.clone())),
            (None, None) => (None, None),
        };
        let codomain = match &function {
            Some(f) => {
                let (dom, cod) = f.validate().map_err(|e| config_err(format!("function: {e}")))?;
                if dom != c.dim {
                    return Err(config_err(format!("function domain has dimension {dom}, expected dim = {}", c.dim)));
                }
                cod
            }
            None => c.dim,
        };
        let y_default = if codomain == c.dim {
            c.classical_norm.clone()
        } else {
            NormKind::L2
        };
        let fn_x = c.fuzzy_norm_x.build("x", c.dim, &c.classical_norm)?;
        let fn_y = c.fuzzy_norm_y.build("y", codomain, &y_default)?;
        let fn_z = c.fuzzy_norm_z.as_ref().map(|z| z.build("z", 1, &NormKind::L2)).transpose()?;
        if let Some(phi) = &c.control {
            phi.validate().map_err(|e| config_err(format!("control: {e}")))?;
        }

        let mut seen = std::collections::BTreeSet::new();
        for &check in &c.checks {
            if !seen.insert(check) {
                return Err(config_err(format!("check {check} listed twice")));
            }
            validate_check(c, check, function.is_some(), fn_z.is_some())?;
        }

        Ok(Scenario {
            fn_x,
            fn_y,
            fn_z,
            function,
            triple,
            options,
            config,
        })
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        Self::from_config(ScenarioConfig::from_toml_str(s)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_config(ScenarioConfig::from_path(path)?)
    }

    /// The same scenario with another seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.config.seed = seed;
        self
    }

    pub fn name(&self) -> &str {
        &self.config.name
    }

    /// The Pexider triple, or `(f, f, f)` for a single function.
    pub fn triple_or_diagonal(&self) -> Option<PexiderTriple> {
        match (&self.triple, &self.function) {
            (Some(t), _) => Some(t.clone()),
            (None, Some(f)) => PexiderTriple::diagonal(f.clone()).ok(),
            (None, None) => None,
        }
    }
}

fn validate_check(c: &ScenarioConfig, check: CheckId, has_function: bool, has_z: bool) -> Result<()> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(config_err(format!("check {check} needs {what}")))
        }
    };
    let alpha = || c.control.as_ref().map(ControlFunction::alpha);
    let domain = |r: Result<()>| r.map_err(|e| config_err(format!("check {check}: {e}")));
    match check {
        CheckId::Axioms => Ok(()),
        CheckId::QAlmost => {
            need(has_function, "function")?;
            let q = c.q.ok_or_else(|| config_err(format!("check {check} needs q")))?;
            if q == 0.5 {
                return Err(config_err("q must differ from 1/2 (q = 1/2 is excluded)"));
            }
            if !(q.is_finite() && q > 0.0) {
                return Err(config_err(format!("q must be positive, got {q}")));
            }
            Ok(())
        }
        CheckId::QuadraticBound => {
            need(has_function, "function")?;
            let q = c.q.ok_or_else(|| config_err(format!("check {check} needs q")))?;
            if !(q.is_finite() && q > 0.5) {
                return Err(config_err(format!(
                    "q must exceed 1/2 for the quadratic stability bound, got {q}"
                )));
            }
            Ok(())
        }
        CheckId::ControlBounded => {
            need(has_function, "function or triple")?;
            need(c.control.is_some(), "control")?;
            need(has_z, "fuzzy_norm_z")
        }
        CheckId::OddPexider | CheckId::EvenPexider | CheckId::Decomposition => {
            need(has_function, "function or triple")?;
            need(has_z, "fuzzy_norm_z")?;
            let a = alpha().ok_or_else(|| config_err(format!("check {check} needs control")))?;
            domain(match check {
                CheckId::OddPexider => odd_pexider_constants(a).map(|_| ()),
                CheckId::EvenPexider => even_pexider_constants(a).map(|_| ()),
                _ => decomposition_constant(a).map(|_| ()),
            })
        }
        CheckId::Classical => {
            need(has_function, "function")?;
            let cl = c.classical.ok_or_else(|| config_err(format!("check {check} needs classical")))?;
            if !(cl.p.is_finite() && cl.p >= 0.0) || cl.p == 2.0 {
                return Err(config_err(format!("classical.p must be finite, >= 0 and differ from 2, got {}", cl.p)));
            }
            match cl.c {
                Some(v) if !(v.is_finite() && v > 0.0) => Err(config_err(format!("constant nonpositive: classical.c = {v}"))),
                Some(_) => Ok(()),
                None => domain(classical_constant(cl.p).map(|_| ())),
            }
        }
        CheckId::HyersTrace => need(has_function, "function"),
        CheckId::Alpha => need(c.control.is_some(), "control"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
name = "t"
seed = 7
dim = 1
sample_count = 4
sample_radius = 2.0
q = 1.0
checks = ["quadratic-bound"]
fuzzy_norm_x = { kind = "nk", k = 1.0 }
fuzzy_norm_y = { kind = "nk", k = 2.0 }
function = { kind = "normed-algebra", x0 = [1.0] }
"#;

    #[test]
    fn parses_and_round_trips() {
        let s = Scenario::from_toml_str(BASE).unwrap();
        assert_eq!(s.config.t_grid, TGrid::default());
        assert_eq!(s.options.max_n, 60);
        let text = s.config.to_toml_string().unwrap();
        assert_eq!(ScenarioConfig::from_toml_str(&text).unwrap(), s.config);
    }

    #[test]
    fn q_half_names_the_hypothesis() {
        let e = Scenario::from_toml_str(&BASE.replace("q = 1.0", "q = 0.5")).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
        assert!(e.to_string().contains("q must exceed 1/2"), "{e}");
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            BASE.replace("seed = 7\n", ""),
            BASE.replace("quadratic-bound", "no-such-check"),
            BASE.replace("sample_radius = 2.0", "sample_radius = -1.0"),
            BASE.replace("k = 2.0 ", ""),
            BASE.replace("x0 = [1.0]", "x0 = [1.0, 2.0]"),
            BASE.replace("[\"quadratic-bound\"]", "[\"odd-pexider\"]"),
            BASE.replace("dim = 1", "dim = 1\nbogus = 3"),
        ];
        for text in cases {
            assert!(matches!(Scenario::from_toml_str(&text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn classical_preset_domain() {
        let text = BASE.replace("[\"quadratic-bound\"]", "[\"classical\"]") + "classical = { p = 3.0 }\n";
        let e = Scenario::from_toml_str(&text).unwrap_err();
        assert!(e.to_string().contains("constant nonpositive"), "{e}");
        let text = text.replace("p = 3.0", "p = 3.0, c = 1.0");
        assert!(Scenario::from_toml_str(&text).is_ok());
    }
}
