use super::config::{config_err, Scenario, ScenarioConfig};
use crate::error::Result;

const BUILTINS: &[(&str, &str)] = &[
    ("axiom-suite", include_str!("../../scenarios/axiom-suite.toml")),
    ("theorem1-algebra", include_str!("../../scenarios/theorem1-algebra.toml")),
    ("remark22-variant", include_str!("../../scenarios/remark22-variant.toml")),
    ("classical-corollary", include_str!("../../scenarios/classical-corollary.toml")),
    ("dual-remark25", include_str!("../../scenarios/dual-remark25.toml")),
    ("prop1-odd", include_str!("../../scenarios/prop1-odd.toml")),
    ("prop2-even", include_str!("../../scenarios/prop2-even.toml")),
    ("theorem3-combined", include_str!("../../scenarios/theorem3-combined.toml")),
    ("decomposition-polynomial", include_str!("../../scenarios/decomposition-polynomial.toml")),
    ("example34-innerproduct", include_str!("../../scenarios/example34-innerproduct.toml")),
];

/// `(name, description)` of every builtin scenario, in a fixed order.
pub fn list_builtins() -> Vec<(&'static str, String)> {
    BUILTINS
        .iter()
        .map(|(name, src)| {
            let description = ScenarioConfig::from_toml_str(src)
                .map(|c| c.description)
                .unwrap_or_default();
            (*name, description)
        })
        .collect()
}

/// The TOML source of a builtin.
pub fn describe(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, src)| *src)
}

pub fn load_builtin(name: &str) -> Result<Scenario> {
    let src = describe(name).ok_or_else(|| config_err(format!("unknown builtin scenario {name:?}")))?;
    Scenario::from_toml_str(src)
}
