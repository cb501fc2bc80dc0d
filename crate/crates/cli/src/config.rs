//! The context document: a versioned JSON file describing the grading,
//! the generators, cutoffs and budgets.

use serde::{Deserialize, Serialize};

use tdl_core::arith::{Prime, Sign};
use tdl_core::dlalgebra::DEFAULT_REWRITE_BUDGET;
use tdl_core::freealg::{AlgebraContext, Generator, DEFAULT_ENUMERATION_BUDGET};
use tdl_core::grading::{Bidegree, GradingContext, GradingGroup, TwistCharacter};

use crate::error::CliError;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingConfig {
    #[serde(default)]
    pub free_rank: usize,
    #[serde(default)]
    pub torsion_orders: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub name: String,
    pub g: Vec<i64>,
    pub n: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cutoffs {
    pub max_degree: i64,
    pub max_charge: u64,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs { max_degree: 12, max_charge: 9 }
    }
}

fn default_rewrite_budget() -> u64 {
    DEFAULT_REWRITE_BUDGET
}

fn default_enumeration_budget() -> u64 {
    DEFAULT_ENUMERATION_BUDGET
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextConfig {
    pub version: u32,
    pub p: u32,
    pub grading: GradingConfig,
    /// `chi` of each generator of the grading group, as `1` or `-1`.
    #[serde(default)]
    pub chi: Vec<i8>,
    #[serde(default)]
    pub generators: Vec<GeneratorConfig>,
    #[serde(default)]
    pub cutoffs: Cutoffs,
    #[serde(default = "default_rewrite_budget")]
    pub rewrite_budget: u64,
    #[serde(default = "default_enumeration_budget")]
    pub enumeration_budget: u64,
}

/// Built-in one-point contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `Γ = Z`, `chi(1) = -1`, `x` at `(1, 0)`.
    Sign,
    /// `Γ = Z`, `chi(1) = 1`, `x` at `(1, 0)`.
    Untwisted,
}

impl ContextConfig {
    pub fn preset(preset: Preset, p: u32) -> Self {
        let chi = match preset {
            Preset::Sign => -1,
            Preset::Untwisted => 1,
        };
        ContextConfig {
            version: CONFIG_VERSION,
            p,
            grading: GradingConfig { free_rank: 1, torsion_orders: Vec::new() },
            chi: vec![chi],
            generators: vec![GeneratorConfig { name: "x".into(), g: vec![1], n: 0 }],
            cutoffs: Cutoffs::default(),
            rewrite_budget: DEFAULT_REWRITE_BUDGET,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ContextConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.version != CONFIG_VERSION {
            return Err(CliError::Config(format!("unsupported version {} (expected {CONFIG_VERSION})", cfg.version)));
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build(&self) -> Result<Settings, CliError> {
        let prime = Prime::new(self.p)?;
        let group = GradingGroup::new(self.grading.free_rank, self.grading.torsion_orders.clone())?;
        let signs = self
            .chi
            .iter()
            .map(|&c| match c {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                other => Err(CliError::Config(format!("chi entries must be 1 or -1, got {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let grading = GradingContext::new(prime, group, TwistCharacter::new(signs))?;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let grade = grading.group().element(g.g.clone())?;
                Ok(Generator::new(g.name.clone(), Bidegree::new(grade, g.n)))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let ctx = AlgebraContext::new(grading, generators)?.with_budget(self.enumeration_budget);
        if self.cutoffs.max_charge == 0 && !self.generators.is_empty() {
            return Err(CliError::Config("max_charge must be positive".into()));
        }
        Ok(Settings { ctx, cutoffs: self.cutoffs, rewrite_budget: self.rewrite_budget })
    }
}

/// A validated context with its cutoffs.
#[derive(Debug, Clone)]
pub struct Settings {
    pub ctx: AlgebraContext,
    pub cutoffs: Cutoffs,
    pub rewrite_budget: u64,
}
