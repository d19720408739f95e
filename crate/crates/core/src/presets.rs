//! Parameter sets reproducing the published figure panels.
//!
//! All panels use `alpha = 1`. Entropy and quadrature panels run to
//! `omega t = 3`, dipole panels to `omega t = 50`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::SystemParams;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig5a,
    Fig5b,
    Fig5c,
    Fig6a,
    Fig6b,
}

const BOTH: (f64, f64) = (0.05, 0.05);
const MOL_ONLY: (f64, f64) = (0.0, 0.05);
const FIELD_ONLY: (f64, f64) = (0.05, 0.0);

impl Preset {
    pub const ALL: [Preset; 18] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig1c,
        Preset::Fig1d,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig2c,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig3c,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig4c,
        Preset::Fig5a,
        Preset::Fig5b,
        Preset::Fig5c,
        Preset::Fig6a,
        Preset::Fig6b,
    ];

    pub fn name(self) -> &'static str {
        use Preset::*;
        match self {
            Fig1a => "fig1a",
            Fig1b => "fig1b",
            Fig1c => "fig1c",
            Fig1d => "fig1d",
            Fig2a => "fig2a",
            Fig2b => "fig2b",
            Fig2c => "fig2c",
            Fig3a => "fig3a",
            Fig3b => "fig3b",
            Fig3c => "fig3c",
            Fig4a => "fig4a",
            Fig4b => "fig4b",
            Fig4c => "fig4c",
            Fig5a => "fig5a",
            Fig5b => "fig5b",
            Fig5c => "fig5c",
            Fig6a => "fig6a",
            Fig6b => "fig6b",
        }
    }

    /// `(N, n, k, k')` of the panel.
    pub fn table(self) -> (u32, u32, f64, f64) {
        use Preset::*;
        let ((n_total, n_excited), (k, kp)) = match self {
            Fig1a | Fig2a | Fig3a => ((10, 5), BOTH),
            Fig1b | Fig2b | Fig3b => ((10, 5), MOL_ONLY),
            Fig1c | Fig2c | Fig3c => ((10, 5), FIELD_ONLY),
            Fig1d => ((1, 1), FIELD_ONLY),
            Fig4a => ((20, 10), BOTH),
            Fig4b => ((50, 25), BOTH),
            Fig4c => ((100, 50), BOTH),
            // B = 1 requires n (m + 1) = N, which n = 1 satisfies for every N.
            Fig5a => ((1, 1), BOTH),
            Fig5b => ((10, 1), BOTH),
            Fig5c => ((100, 1), BOTH),
            Fig6a => ((30, 15), FIELD_ONLY),
            Fig6b => ((100, 50), FIELD_ONLY),
        };
        (n_total, n_excited, k, kp)
    }

    pub fn params(self) -> SystemParams {
        let (n_total, n_excited, k, kp) = self.table();
        SystemParams::new(n_total, n_excited).with_damping(k, kp)
    }

    /// True for the dipole-squeezing panels.
    pub fn is_dipole(self) -> bool {
        use Preset::*;
        !matches!(
            self,
            Fig1a | Fig1b | Fig1c | Fig1d | Fig2a | Fig2b | Fig2c
        )
    }

    pub fn t_max(self) -> f64 {
        if self.is_dipole() {
            50.0
        } else {
            3.0
        }
    }

    /// Default grid: `omega dt = 1e-3`.
    pub fn steps(self) -> usize {
        (self.t_max() * 1000.0) as usize
    }

    pub fn note(self) -> Option<&'static str> {
        use Preset::*;
        match self {
            Fig5a | Fig5b | Fig5c => Some(
                "B = 1 realised with n = 1, m = N - 1; damping k = k' = 0.05 omega (not stated in the caption)",
            ),
            _ => None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown preset '{s}'")))
    }
}
