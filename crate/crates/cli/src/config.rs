//! Run configuration, read from TOML. Every field has a default and the
//! defaults give GF(8) with `x^3 + x + 1`, weights (2, 3) and the Klein
//! quartic.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use klein_core::klein::{Setup, KLEIN_CURVE};
use klein_core::poly::text::parse;
use klein_core::{FieldSpec, MonomialOrder};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldConfig {
    /// Modulus as a bitmask, bit `i` the coefficient of `x^i`.
    pub modulus: u32,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { modulus: 0b1011 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrderConfig {
    pub weights: Vec<u32>,
    /// Variable whose larger exponent wins a weight tie.
    pub tiebreak: usize,
}

impl Default for OrderConfig {
    fn default() -> Self {
        OrderConfig {
            weights: vec![2, 3],
            tiebreak: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdealConfig {
    /// Curve generators; the field equations are added automatically.
    pub generators: Vec<String>,
}

impl Default for IdealConfig {
    fn default() -> Self {
        IdealConfig {
            generators: vec![KLEIN_CURVE.to_string()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Most coefficients the plain exhaustive oracle accepts.
    pub exhaustive_k: usize,
    /// Most coefficients the Gray-code oracle accepts.
    pub gray_coefficients: usize,
    /// Classes with at most this many coefficients get an exact coset scan
    /// in `verify-all`.
    pub oracle_coefficients: usize,
    /// Random coefficient tuples per class for sampled checks.
    pub samples: u64,
    /// Instantiations per live leaf.
    pub leaf_samples: usize,
    /// Random polynomials for the weight identity.
    pub weight_checks: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            exhaustive_k: 8,
            gray_coefficients: 10,
            oracle_coefficients: 9,
            samples: 100_000,
            leaf_samples: 50,
            weight_checks: 1000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub field: FieldConfig,
    pub order: OrderConfig,
    pub ideal: IdealConfig,
    pub seed: u64,
    pub limits: Limits,
    pub format: Format,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("--config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("--config {}: {e}", path.display()))
    }

    /// Whether field, order and ideal are the built-in ones, so the shipped
    /// traces and reference tables apply.
    pub fn is_klein(&self) -> bool {
        let d = RunConfig::default();
        self.field == d.field && self.order == d.order && self.ideal == d.ideal
    }

    pub fn arity(&self) -> usize {
        self.order.weights.len()
    }

    pub fn setup(&self) -> Result<Setup, String> {
        let bits = self.field.modulus;
        let m = 31u32.saturating_sub(bits.leading_zeros());
        let field = FieldSpec::new(m, bits).map_err(|e| format!("field.modulus: {e}"))?;
        let order =
            MonomialOrder::weighted(self.order.weights.clone(), self.order.tiebreak).map_err(|e| format!("order: {e}"))?;
        if self.ideal.generators.is_empty() {
            return Err("ideal.generators: at least one generator is needed".into());
        }
        let gens = self
            .ideal
            .generators
            .iter()
            .map(|g| parse(&field, g, self.arity()).map_err(|e| format!("ideal.generators `{g}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Setup::new(field, order, &gens).map_err(|e| format!("ideal: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_klein_setup() {
        let c = RunConfig::default();
        assert!(c.is_klein());
        let s = c.setup().unwrap();
        assert_eq!(s.n(), 22);
        assert_eq!(s.footprint.len(), 22);
    }

    #[test]
    fn partial_files_fill_in_defaults() {
        let c: RunConfig = toml::from_str("seed = 7\n[limits]\nsamples = 10\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.limits.samples, 10);
        assert_eq!(c.limits.leaf_samples, 50);
        assert!(c.is_klein());
        assert!(toml::from_str::<RunConfig>("sede = 7").is_err());
    }

    #[test]
    fn other_curves() {
        // The Hermitian curve over GF(4): 8 points.
        let c: RunConfig =
            toml::from_str("[field]\nmodulus = 7\n[ideal]\ngenerators = [\"X^3 + Y^2 + Y\"]\n").unwrap();
        assert!(!c.is_klein());
        assert_eq!(c.setup().unwrap().n(), 8);
        let bad: RunConfig = toml::from_str("[field]\nmodulus = 15\n").unwrap();
        assert!(bad.setup().is_err());
    }
}
