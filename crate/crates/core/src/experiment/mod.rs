//! The full swapping setup: a two-pair source, polarization analyzers for the
//! outer photons, the two-output Bell-state analyzer for the inner photons,
//! eight threshold detectors and the four-fold coincidence logic.

mod detectors;
mod sampling;
mod setup;

pub use detectors::{classify, BellClass, ClickPattern, DetectorId, FourfoldClass, Sign};
pub use sampling::{sample_counts, sample_from_probabilities};
pub use setup::{
    assemble_circuit, bell_pair_state, bsa_circuit, bsa_identification, build_source_state,
    click_distribution, detection_probabilities, double_pair_audit, exact_counts, source_term,
    BellState, ClickDistribution, DoublePairReport, DoublePairRow, SourceTerm,
};

use crate::error::{Error, Result};

/// One pair of analyzer angles, degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setting {
    pub phi_a: f64,
    pub phi_d: f64,
}

impl Setting {
    pub const fn new(phi_a: f64, phi_d: f64) -> Self {
        Self { phi_a, phi_d }
    }

    /// Every combination of the given a-side and d-side angles, a-major.
    pub fn grid(a_angles: &[f64], d_angles: &[f64]) -> Vec<Setting> {
        a_angles
            .iter()
            .flat_map(|&a| d_angles.iter().map(move |&d| Setting::new(a, d)))
            .collect()
    }
}

/// The CHSH settings used in the experiment: a ∈ {0°, 45°}, d ∈ {22.5°, 67.5°}.
pub const CHSH_A_ANGLES: [f64; 2] = [0.0, 45.0];
pub const CHSH_D_ANGLES: [f64; 2] = [22.5, 67.5];

/// Physical and sampling parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub phi_a: f64,
    pub phi_d: f64,
    /// Temporal overlap v of photons b and c at the beam splitter.
    pub overlap: f64,
    /// Pair-emission amplitude; only relative weights of emission orders
    /// depend on it, and at second order those are fixed.
    pub pair_amplitude: f64,
    /// Uniform detector efficiency η.
    pub efficiency: f64,
    /// Residual polarization rotation at both beam-splitter inputs, degrees.
    pub misalignment_deg: f64,
    pub seed: u64,
    /// Emission attempts per setting when sampling.
    pub events: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            phi_a: 0.0,
            phi_d: 22.5,
            overlap: 1.0,
            pair_amplitude: 1.0,
            efficiency: 1.0,
            misalignment_deg: 0.0,
            seed: 0,
            events: 10_000,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.phi_a.is_finite() {
            return Err(Error::param("phi_a", "not finite"));
        }
        if !self.phi_d.is_finite() {
            return Err(Error::param("phi_d", "not finite"));
        }
        if !(0.0..=1.0).contains(&self.overlap) {
            return Err(Error::param(
                "overlap",
                format!("{} outside [0, 1]", self.overlap),
            ));
        }
        if !self.pair_amplitude.is_finite() || self.pair_amplitude <= 0.0 {
            return Err(Error::param("pair_amplitude", "must be positive"));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::param(
                "efficiency",
                format!("{} outside (0, 1]", self.efficiency),
            ));
        }
        if !self.misalignment_deg.is_finite() {
            return Err(Error::param("misalignment_deg", "not finite"));
        }
        if self.events == 0 {
            return Err(Error::param("events", "must be at least 1"));
        }
        Ok(())
    }

    pub fn setting(&self) -> Setting {
        Setting::new(self.phi_a, self.phi_d)
    }

    pub fn with_setting(&self, setting: Setting) -> Self {
        Self {
            phi_a: setting.phi_a,
            phi_d: setting.phi_d,
            ..self.clone()
        }
    }
}

/// Value stored in a [`CountsTable`]: an exact probability or a sampled count.
pub trait CountValue: Copy + Default + std::ops::AddAssign + std::fmt::Debug {
    const IS_PROBABILITY: bool;
    fn as_f64(self) -> f64;
}

impl CountValue for f64 {
    const IS_PROBABILITY: bool = true;
    fn as_f64(self) -> f64 {
        self
    }
}

impl CountValue for u64 {
    const IS_PROBABILITY: bool = false;
    fn as_f64(self) -> f64 {
        self as f64
    }
}

/// Four-fold class tallies for one analyzer setting.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingCounts<T> {
    pub setting: Setting,
    /// Indexed by [`FourfoldClass::index`].
    pub classes: [T; 8],
    /// Everything the coincidence logic rejects.
    pub reject: T,
}

impl<T: CountValue> SettingCounts<T> {
    pub fn get(&self, class: FourfoldClass) -> T {
        self.classes[class.index()]
    }

    pub fn total(&self) -> f64 {
        self.classes.iter().map(|c| c.as_f64()).sum::<f64>() + self.reject.as_f64()
    }
}

/// Per-setting class tallies plus the number of emission attempts behind
/// them. Exact tables (`T = f64`) hold probabilities per attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsTable<T> {
    pub trials: u64,
    pub rows: Vec<SettingCounts<T>>,
}

/// `(N++, N+-, N-+, N--)` for one setting and Bell class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadCounts {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl QuadCounts {
    pub fn new(pp: f64, pm: f64, mp: f64, mm: f64) -> Self {
        Self { pp, pm, mp, mm }
    }

    pub fn total(&self) -> f64 {
        self.pp + self.pm + self.mp + self.mm
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.pp * k, self.pm * k, self.mp * k, self.mm * k)
    }
}

impl<T: CountValue> CountsTable<T> {
    /// Raw tallies for one row and Bell class, in table units.
    pub fn quad_raw(&self, row: usize, bell: BellClass) -> QuadCounts {
        let r = &self.rows[row];
        let get = |a, d| r.get(FourfoldClass::new(bell, a, d)).as_f64();
        QuadCounts::new(
            get(Sign::Plus, Sign::Plus),
            get(Sign::Plus, Sign::Minus),
            get(Sign::Minus, Sign::Plus),
            get(Sign::Minus, Sign::Minus),
        )
    }

    /// Tallies in counts: exact probabilities are scaled to expected counts
    /// over `trials` attempts.
    pub fn quad_counts(&self, row: usize, bell: BellClass) -> QuadCounts {
        let q = self.quad_raw(row, bell);
        if T::IS_PROBABILITY {
            q.scaled(self.trials as f64)
        } else {
            q
        }
    }

    pub fn find(&self, setting: Setting) -> Option<usize> {
        self.rows.iter().position(|r| r.setting == setting)
    }
}
