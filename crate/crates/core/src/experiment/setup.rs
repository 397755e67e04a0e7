use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::detectors::{classify, BellClass, ClickPattern, DetectorId};
use super::{CountsTable, ExperimentConfig, Setting, SettingCounts};
use crate::error::{Error, Result};
use crate::fock::{FockVector, ModeLabel, ModeMap, Path, Polarization, Truncation};
use crate::optics;

/// The four polarization Bell states of a photon pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellState {
    PsiMinus,
    PsiPlus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiMinus,
        BellState::PsiPlus,
        BellState::PhiPlus,
        BellState::PhiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BellState::PsiMinus => "psi_minus",
            BellState::PsiPlus => "psi_plus",
            BellState::PhiPlus => "phi_plus",
            BellState::PhiMinus => "phi_minus",
        }
    }

    /// `(pol of first, pol of second, coefficient)` terms before 1/sqrt(2).
    fn terms(self) -> [(Polarization, Polarization, f64); 2] {
        use Polarization::{H, V};
        match self {
            BellState::PsiMinus => [(H, V, 1.0), (V, H, -1.0)],
            BellState::PsiPlus => [(H, V, 1.0), (V, H, 1.0)],
            BellState::PhiPlus => [(H, H, 1.0), (V, V, 1.0)],
            BellState::PhiMinus => [(H, H, 1.0), (V, V, -1.0)],
        }
    }
}

/// Applies the pair-creation operator of `kind` on paths `p1`, `p2`
/// (early temporal bin).
fn create_pair(state: &FockVector, p1: Path, p2: Path, kind: BellState) -> Result<FockVector> {
    let mut out = FockVector::zero(state.truncation());
    for (pol1, pol2, sign) in kind.terms() {
        let term = state
            .apply_creation(ModeLabel::early(p1, pol1))?
            .apply_creation(ModeLabel::early(p2, pol2))?;
        out = out.add_scaled(&term, Complex64::new(sign * FRAC_1_SQRT_2, 0.0));
    }
    Ok(out)
}

/// Normalized two-photon Bell state on paths `p1`, `p2`.
pub fn bell_pair_state(p1: Path, p2: Path, kind: BellState) -> Result<FockVector> {
    create_pair(&FockVector::vacuum(), p1, p2, kind)?.normalize()
}

/// Components of the second-order emission `(A† + C†)²|0⟩`, where A† and
/// C† create Ψ⁻ pairs on (a, b) and (c, d).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceTerm {
    /// `A†²|0⟩`: two pairs from the a-b source.
    DoubleA,
    /// `A†C†|0⟩`: one pair from each source.
    Cross,
    /// `C†²|0⟩`: two pairs from the c-d source.
    DoubleC,
}

impl SourceTerm {
    pub fn name(self) -> &'static str {
        match self {
            SourceTerm::DoubleA => "double_ab",
            SourceTerm::Cross => "one_each",
            SourceTerm::DoubleC => "double_cd",
        }
    }
}

/// Unnormalized operator image of one emission component.
pub fn source_term(term: SourceTerm) -> Result<FockVector> {
    let vac = FockVector::vacuum_with(Truncation::default());
    let singlet = BellState::PsiMinus;
    match term {
        SourceTerm::DoubleA => create_pair(
            &create_pair(&vac, Path::A, Path::B, singlet)?,
            Path::A,
            Path::B,
            singlet,
        ),
        SourceTerm::Cross => create_pair(
            &create_pair(&vac, Path::A, Path::B, singlet)?,
            Path::C,
            Path::D,
            singlet,
        ),
        SourceTerm::DoubleC => create_pair(
            &create_pair(&vac, Path::C, Path::D, singlet)?,
            Path::C,
            Path::D,
            singlet,
        ),
    }
}

/// Normalized four-photon emission `∝ (A†² + 2A†C† + C†²)|0⟩`.
pub fn build_source_state(pair_amplitude: f64) -> Result<FockVector> {
    if !pair_amplitude.is_finite() || pair_amplitude <= 0.0 {
        return Err(Error::param("pair_amplitude", "must be positive"));
    }
    let one = Complex64::new(1.0, 0.0);
    source_term(SourceTerm::DoubleA)?
        .add_scaled(&source_term(SourceTerm::Cross)?, one * 2.0)
        .add_scaled(&source_term(SourceTerm::DoubleC)?, one)
        .normalize()
}

fn detector_losses(detectors: &[DetectorId], efficiency: f64) -> Result<Vec<ModeMap>> {
    detectors
        .iter()
        .map(|d| optics::loss(d.path(), d.loss_path(), efficiency))
        .collect()
}

/// Misalignment, delay, beam splitter and PBSs for photons b and c, with
/// losses in front of the four analyzer detectors.
pub fn bsa_circuit(config: &ExperimentConfig) -> Result<ModeMap> {
    let mut elements = vec![
        optics::polarization_rotator(Path::B, config.misalignment_deg)?,
        optics::polarization_rotator(Path::C, config.misalignment_deg)?,
        optics::delay_decompose(Path::C, config.overlap)?,
        optics::beam_splitter(Path::B, Path::C, Path::Bsa1, Path::Bsa2)?,
        optics::pbs(Path::Bsa1, Path::D1H, Path::D1V)?,
        optics::pbs(Path::Bsa2, Path::D2H, Path::D2V)?,
    ];
    elements.extend(detector_losses(&DetectorId::BSA, config.efficiency)?);
    ModeMap::chain(&elements)
}

/// Same front end without the PBSs: one threshold detector per output arm.
fn bare_bs_circuit(config: &ExperimentConfig) -> Result<ModeMap> {
    ModeMap::chain(&[
        optics::polarization_rotator(Path::B, config.misalignment_deg)?,
        optics::polarization_rotator(Path::C, config.misalignment_deg)?,
        optics::delay_decompose(Path::C, config.overlap)?,
        optics::beam_splitter(Path::B, Path::C, Path::Bsa1, Path::Bsa2)?,
        optics::loss(Path::Bsa1, Path::Loss(8), config.efficiency)?,
        optics::loss(Path::Bsa2, Path::Loss(9), config.efficiency)?,
    ])
}

/// The whole setup as one composed map.
pub fn assemble_circuit(config: &ExperimentConfig) -> Result<ModeMap> {
    config.validate()?;
    let bsa = bsa_circuit(config)?;
    let mut outer = vec![
        optics::polarization_rotator(Path::A, config.phi_a)?,
        optics::pbs(Path::A, Path::APlus, Path::AMinus)?,
        optics::polarization_rotator(Path::D, config.phi_d)?,
        optics::pbs(Path::D, Path::DPlus, Path::DMinus)?,
    ];
    outer.extend(detector_losses(
        &[
            DetectorId::APlus,
            DetectorId::AMinus,
            DetectorId::DPlus,
            DetectorId::DMinus,
        ],
        config.efficiency,
    )?);
    bsa.then(&ModeMap::chain(&outer)?)
}

/// Probability of each click pattern for one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClickDistribution(BTreeMap<ClickPattern, f64>);

impl ClickDistribution {
    pub fn get(&self, pattern: ClickPattern) -> f64 {
        self.0.get(&pattern).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClickPattern, f64)> + '_ {
        self.0.iter().map(|(&p, &q)| (p, q))
    }

    /// Total probability of patterns satisfying `pred`.
    pub fn probability_where(&self, mut pred: impl FnMut(ClickPattern) -> bool) -> f64 {
        self.iter()
            .filter(|&(p, _)| pred(p))
            .fold(0.0, |acc, (_, q)| acc + q)
    }
}

/// Evolves `state` through `circuit` and reads out the eight threshold
/// detectors. Photons in any other mode produce no click.
pub fn click_distribution(state: &FockVector, circuit: &ModeMap) -> ClickDistribution {
    let out = state.apply_mode_map(circuit);
    let mut dist = BTreeMap::new();
    for (occ, amp) in out.iter() {
        let pattern = occ
            .iter()
            .filter_map(|(m, _)| DetectorId::from_path(m.path))
            .fold(ClickPattern::empty(), ClickPattern::with);
        *dist.entry(pattern).or_insert(0.0) += amp.norm_sqr();
    }
    ClickDistribution(dist)
}

pub fn detection_probabilities(config: &ExperimentConfig) -> Result<ClickDistribution> {
    let source = build_source_state(config.pair_amplitude)?;
    let circuit = assemble_circuit(config)?;
    Ok(click_distribution(&source, &circuit))
}

/// Exact four-fold class probabilities per emission attempt.
pub fn exact_counts(config: &ExperimentConfig, settings: &[Setting]) -> Result<CountsTable<f64>> {
    config.validate()?;
    if settings.is_empty() {
        return Err(Error::InvalidSettings("no settings given".into()));
    }
    let source = build_source_state(config.pair_amplitude)?;
    let rows = settings
        .iter()
        .map(|&setting| {
            let circuit = assemble_circuit(&config.with_setting(setting))?;
            let dist = click_distribution(&source, &circuit);
            let mut classes = [0.0; 8];
            let mut reject = 0.0;
            for (pattern, p) in dist.iter() {
                match classify(pattern) {
                    Some(class) => classes[class.index()] += p,
                    None => reject += p,
                }
            }
            Ok(SettingCounts {
                setting,
                classes,
                reject,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CountsTable {
        trials: config.events,
        rows,
    })
}

/// Probability that each Bell state injected on b, c is reported as Ψ⁻ or
/// Ψ⁺ by the analyzer. Rows follow [`BellState::ALL`]; columns are
/// `[psi_minus, psi_plus]`.
pub fn bsa_identification(config: &ExperimentConfig) -> Result<[[f64; 2]; 4]> {
    config.validate()?;
    let circuit = bsa_circuit(config)?;
    let mut matrix = [[0.0; 2]; 4];
    for (row, kind) in BellState::ALL.into_iter().enumerate() {
        let dist = click_distribution(&bell_pair_state(Path::B, Path::C, kind)?, &circuit);
        for (col, bell) in BellClass::BOTH.into_iter().enumerate() {
            matrix[row][col] = dist.probability_where(|p| BellClass::from_bsa(p) == Some(bell));
        }
    }
    Ok(matrix)
}

/// Acceptance of one double-pair component by the PBS analyzer versus a bare
/// beam-splitter analyzer that accepts one click in each output arm.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublePairRow {
    pub term: SourceTerm,
    /// `psi_minus`, `psi_plus` or `either`.
    pub signature: &'static str,
    pub pbs_acceptance: f64,
    pub bare_acceptance: f64,
    pub ratio: f64,
}

impl DoublePairRow {
    pub fn within_factor_two(&self) -> bool {
        self.ratio <= 0.5
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublePairReport {
    pub rows: Vec<DoublePairRow>,
    /// Accepted four-fold probability from each double-pair component alone.
    pub fourfold_leak: Vec<(SourceTerm, f64)>,
}

impl DoublePairReport {
    /// Signature-by-signature comparison: each Bell signature of the PBS
    /// analyzer against the bare analyzer's single signature.
    pub fn per_signature_within_factor_two(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.signature != "either")
            .all(DoublePairRow::within_factor_two)
    }

    /// Rows whose ratio exceeds one half.
    pub fn flagged(&self) -> impl Iterator<Item = &DoublePairRow> {
        self.rows.iter().filter(|r| !r.within_factor_two())
    }
}

pub fn double_pair_audit(config: &ExperimentConfig) -> Result<DoublePairReport> {
    config.validate()?;
    let pbs_circuit = bsa_circuit(config)?;
    let bare_circuit = bare_bs_circuit(config)?;
    let full = assemble_circuit(config)?;
    let mut rows = Vec::new();
    let mut fourfold_leak = Vec::new();
    for term in [SourceTerm::DoubleA, SourceTerm::DoubleC] {
        let state = source_term(term)?.normalize()?;
        let dist = click_distribution(&state, &pbs_circuit);
        let bare_out = state.apply_mode_map(&bare_circuit);
        let bare: f64 = bare_out
            .iter()
            .filter(|(occ, _)| occ.photons_on(Path::Bsa1) > 0 && occ.photons_on(Path::Bsa2) > 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let minus = dist.probability_where(|p| BellClass::from_bsa(p) == Some(BellClass::PsiMinus));
        let plus = dist.probability_where(|p| BellClass::from_bsa(p) == Some(BellClass::PsiPlus));
        for (signature, pbs) in [
            ("psi_minus", minus),
            ("psi_plus", plus),
            ("either", minus + plus),
        ] {
            let ratio = if bare > 0.0 {
                pbs / bare
            } else {
                f64::INFINITY
            };
            rows.push(DoublePairRow {
                term,
                signature,
                pbs_acceptance: pbs,
                bare_acceptance: bare,
                ratio,
            });
        }
        let leak = click_distribution(&state, &full).probability_where(|p| classify(p).is_some());
        fourfold_leak.push((term, leak));
    }
    Ok(DoublePairReport {
        rows,
        fourfold_leak,
    })
}
