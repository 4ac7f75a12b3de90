use std::collections::BTreeMap;

use super::{Creutz, Haldane, LatticeKind, Ssh, TwoBandModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub doc: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Band(LatticeKind),
    /// Interacting chain solved by exact diagonalization.
    Interacting,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub kind: ModelKind,
    /// Name of the driving parameter; the compared point is `<driving>_tilde`.
    pub driving: &'static str,
    pub params: &'static [ParamSpec],
    pub supports_alpha_prime: bool,
    /// Twist fluxes that may be swept, and those held fixed.
    pub flux_axes: &'static str,
}

impl ModelEntry {
    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }
}

static REGISTRY: [ModelEntry; 4] = [
    ModelEntry {
        name: "ssh",
        description: "Su-Schrieffer-Heeger chain, intracell hopping 1",
        kind: ModelKind::Band(LatticeKind::Chain),
        driving: "gamma",
        params: &[ParamSpec {
            name: "gamma",
            default: 0.5,
            doc: "intercell/intracell hopping ratio",
        }],
        supports_alpha_prime: true,
        flux_axes: "phi (swept)",
    },
    ModelEntry {
        name: "creutz",
        description: "Creutz ladder, J_h = J_d = 1",
        kind: ModelKind::Band(LatticeKind::Chain),
        driving: "theta",
        params: &[
            ParamSpec {
                name: "theta",
                default: 0.3,
                doc: "flux per plaquette",
            },
            ParamSpec {
                name: "jv_over_2j",
                default: 0.6,
                doc: "rung coupling ratio J_v/2J, |.| < 1",
            },
        ],
        supports_alpha_prime: true,
        flux_axes: "phi (swept)",
    },
    ModelEntry {
        name: "haldane",
        description: "Haldane model on the honeycomb lattice",
        kind: ModelKind::Band(LatticeKind::Honeycomb),
        driving: "theta",
        params: &[
            ParamSpec {
                name: "theta",
                default: 0.0,
                doc: "next-nearest-neighbour hopping phase",
            },
            ParamSpec {
                name: "t1",
                default: 1.0,
                doc: "nearest-neighbour hopping",
            },
            ParamSpec {
                name: "t2",
                default: 1.0,
                doc: "next-nearest-neighbour hopping",
            },
            ParamSpec {
                name: "m",
                default: 4.5,
                doc: "sublattice potential",
            },
        ],
        supports_alpha_prime: true,
        flux_axes: "phi_x (swept), phi_y (fixed)",
    },
    ModelEntry {
        name: "ssh-interacting",
        description:
            "SSH chain with nearest-neighbour interaction U at half filling (exact diagonalization)",
        kind: ModelKind::Interacting,
        driving: "gamma",
        params: &[
            ParamSpec {
                name: "gamma",
                default: 0.2,
                doc: "intercell/intracell hopping ratio",
            },
            ParamSpec {
                name: "u",
                default: 0.1,
                doc: "nearest-neighbour interaction",
            },
        ],
        supports_alpha_prime: false,
        flux_axes: "phi (swept)",
    },
];

pub fn registry() -> &'static [ModelEntry] {
    &REGISTRY
}

pub fn lookup(name: &str) -> Option<&'static ModelEntry> {
    REGISTRY.iter().find(|e| e.name == name)
}

/// Parameter map with defaults filled in; unknown names are rejected.
pub(crate) fn resolve_params(
    entry: &ModelEntry,
    given: &BTreeMap<String, f64>,
) -> Result<BTreeMap<&'static str, f64>> {
    if let Some(unknown) = given.keys().find(|k| entry.param(k).is_none()) {
        return Err(Error::InvalidArgument(format!(
            "model `{}` has no parameter `{unknown}`",
            entry.name
        )));
    }
    Ok(entry
        .params
        .iter()
        .map(|p| (p.name, given.get(p.name).copied().unwrap_or(p.default)))
        .collect())
}

/// Instantiate a band model; the driving parameter in `params` is ignored here
/// since it is supplied per evaluation.
pub fn build_band_model(
    name: &str,
    params: &BTreeMap<String, f64>,
) -> Result<Box<dyn TwoBandModel>> {
    let entry =
        lookup(name).ok_or_else(|| Error::InvalidArgument(format!("unknown model `{name}`")))?;
    let p = resolve_params(entry, params)?;
    match entry.name {
        "ssh" => Ok(Box::new(Ssh)),
        "creutz" => Ok(Box::new(Creutz {
            jv_over_2j: p["jv_over_2j"],
        })),
        "haldane" => {
            if p["t2"] == 0.0 || p["t1"] == 0.0 {
                return Err(Error::InvalidArgument(
                    "haldane requires nonzero t1 and t2".into(),
                ));
            }
            Ok(Box::new(Haldane {
                t1: p["t1"],
                t2: p["t2"],
                m: p["m"],
            }))
        }
        _ => Err(Error::UnsupportedModel {
            model: name.to_string(),
            operation: "band model".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names() {
        let names: Vec<_> = registry().iter().map(|e| e.name).collect();
        assert_eq!(names, ["ssh", "creutz", "haldane", "ssh-interacting"]);
        assert!(!lookup("ssh-interacting").unwrap().supports_alpha_prime);
        assert!(lookup("haldane").unwrap().flux_axes.contains("phi_y"));
    }

    #[test]
    fn build_rejects_unknown() {
        assert!(build_band_model("kitaev", &BTreeMap::new()).is_err());
        let mut p = BTreeMap::new();
        p.insert("bogus".to_string(), 1.0);
        assert!(build_band_model("ssh", &p).is_err());
        assert!(matches!(
            build_band_model("ssh-interacting", &BTreeMap::new()),
            Err(Error::UnsupportedModel { .. })
        ));
    }

    #[test]
    fn build_uses_defaults_and_overrides() {
        let mut p = BTreeMap::new();
        p.insert("jv_over_2j".to_string(), 0.25);
        let m = build_band_model("creutz", &p).unwrap();
        let z = m.zero_condition(0.3, -0.3).unwrap();
        let kc = z.kc_list[0].scalar().unwrap();
        assert!((kc - (-0.25f64).acos()).abs() < 1e-15);
    }
}
