use serde::{Deserialize, Serialize};

use super::EnumSpec;
use crate::preorders::SimConfig;
use crate::prover::SearchBudget;
use crate::semantics::ExploreBudget;
use crate::syntax::Atom;

/// Budgets for one differential run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub search: SearchBudget,
    pub sim: SimConfig,
}

/// A named enumeration with its budgets and the Unknown rate it must stay
/// under.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Preset {
    pub name: String,
    pub spec: EnumSpec,
    pub budgets: Budgets,
    /// Budgets for the lemma suite.
    pub lemma_budgets: Budgets,
    pub max_unknown_rate: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetFile {
    atoms: Vec<String>,
    max_formula_size: usize,
    max_gamma: usize,
    max_delta: usize,
    max_state_size: Option<usize>,
    max_unknown_rate: f64,
    search: SearchBudget,
    explore: ExploreBudget,
    sim: SimPart,
    lemmas: LemmaPart,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimPart {
    max_pairs: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LemmaPart {
    #[serde(flatten)]
    explore: ExploreBudget,
    max_pairs: usize,
}

const FILES: [(&str, &str); 3] = [
    ("tiny", include_str!("../../presets/tiny.toml")),
    ("small", include_str!("../../presets/small.toml")),
    ("medium", include_str!("../../presets/medium.toml")),
];

impl Preset {
    pub fn names() -> impl Iterator<Item = &'static str> {
        FILES.iter().map(|(n, _)| *n)
    }

    pub fn named(name: &str) -> Option<Preset> {
        let (_, text) = FILES.iter().find(|(n, _)| *n == name)?;
        Some(Preset::parse(name, text).expect("bundled preset parses"))
    }

    /// Parses a preset in the bundled TOML format.
    pub fn parse(name: &str, text: &str) -> Result<Preset, String> {
        let f: PresetFile = toml::from_str(text).map_err(|e| e.to_string())?;
        let atoms = f
            .atoms
            .iter()
            .map(|a| Atom::new(a).ok_or_else(|| format!("invalid atom {a:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let spec = EnumSpec {
            atoms,
            max_formula_size: f.max_formula_size,
            max_gamma: f.max_gamma,
            max_delta: f.max_delta,
            max_state_size: f.max_state_size,
            seed: 0,
        };
        let budgets = Budgets { search: f.search, sim: SimConfig { explore: f.explore, max_pairs: f.sim.max_pairs, absorb: true } };
        let lemma_budgets = Budgets {
            search: f.search,
            sim: SimConfig { explore: f.lemmas.explore, max_pairs: f.lemmas.max_pairs, absorb: true },
        };
        Ok(Preset { name: name.to_string(), spec, budgets, lemma_budgets, max_unknown_rate: f.max_unknown_rate })
    }
}
