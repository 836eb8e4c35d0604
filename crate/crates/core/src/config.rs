//! Tool-level configuration: seed, output format, and named tolerance
//! overrides for the verification suite.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Named tolerances with their per-check defaults. Each can be overridden
/// from the command line as `--tolerance NAME=VALUE`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Permitted negative slack on the regret bounds.
    pub bound_slack: f64,
    /// |regret - bound| on the tightness construction.
    pub tightness: f64,
    /// Decomposition identity residue.
    pub identity: f64,
    /// Closed-form vs brute-force cosine utility gap.
    pub closed_form: f64,
    /// Mode-vs-similarity-argmax gap when the agreement condition holds.
    pub agreement: f64,
    /// Max relative error in central-difference gradient checks.
    pub grad_check: f64,
    /// Cross-loss consistency identities.
    pub loss_consistency: f64,
    /// Worst-case HR@1 bitwise regret vs its closed form.
    pub worstcase_hr1: f64,
    /// Row-wise bound violations.
    pub row_bounds: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            bound_slack: 1e-9,
            tightness: 1e-12,
            identity: 1e-12,
            closed_form: 1e-10,
            agreement: 1e-12,
            grad_check: 1e-4,
            loss_consistency: 1e-12,
            worstcase_hr1: 1e-10,
            row_bounds: 1e-12,
        }
    }
}

impl Tolerances {
    /// Apply a `NAME=VALUE` override. Every tolerance must stay positive.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if value <= 0.0 || !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tolerance {name} must be a positive number, got {value}"
            )));
        }
        let slot = match name {
            "bound-slack" => &mut self.bound_slack,
            "tightness" => &mut self.tightness,
            "identity" => &mut self.identity,
            "closed-form" => &mut self.closed_form,
            "agreement" => &mut self.agreement,
            "grad-check" => &mut self.grad_check,
            "loss-consistency" => &mut self.loss_consistency,
            "worstcase-hr1" => &mut self.worstcase_hr1,
            "row-bounds" => &mut self.row_bounds,
            other => {
                return Err(Error::InvalidParameter(format!("unknown tolerance name {other:?}")))
            }
        };
        *slot = value;
        Ok(())
    }

    /// Parse and apply an override of the form `NAME=VALUE`.
    pub fn set_from_arg(&mut self, arg: &str) -> Result<()> {
        let (name, value) = arg.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("expected NAME=VALUE tolerance override, got {arg:?}"))
        })?;
        let value: f64 = value.parse().map_err(|_| {
            Error::InvalidParameter(format!("cannot parse tolerance value from {value:?}"))
        })?;
        self.set(name, value)
    }
}

/// Seed, tolerances, and output format shared by all commands.
#[derive(Debug, Clone)]
pub struct ToolConfig {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub output: OutputFormat,
}

impl Default for ToolConfig {
    fn default() -> Self {
        ToolConfig {
            seed: 42,
            tolerances: Tolerances::default(),
            output: OutputFormat::Text,
        }
    }
}
