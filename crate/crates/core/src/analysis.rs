//! Correlation coefficients, CHSH parameters, delay scans and overlap
//! calibration.
//!
//! Error propagation follows photon-counting statistics: with
//! `P = N++ + N--`, `M = N+- + N-+` and `N = P + M`,
//! `sigma_E = max(2 sqrt(P M / N³), 1/N)`. The `1/N` floor covers fully
//! (anti)correlated data where the binomial estimate collapses to zero.

use crate::error::{Error, Result};
use crate::experiment::{
    exact_counts, BellClass, CountValue, CountsTable, ExperimentConfig, QuadCounts, Setting,
};
use crate::optics;

pub fn correlation(counts: &QuadCounts) -> Result<f64> {
    let n = counts.total();
    if n.is_nan() || n <= 0.0 {
        return Err(Error::EmptyData);
    }
    Ok((counts.pp - counts.pm - counts.mp + counts.mm) / n)
}

pub fn correlation_error(counts: &QuadCounts) -> Result<f64> {
    let n = counts.total();
    if n.is_nan() || n <= 0.0 {
        return Err(Error::EmptyData);
    }
    let p = counts.pp + counts.mm;
    let m = counts.pm + counts.mp;
    Ok((2.0 * (p * m / (n * n * n)).sqrt()).max(1.0 / n))
}

/// `E(phi_a, phi_d)` for one Bell class, with its counting error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub e: f64,
    pub sigma_e: f64,
    pub setting: Setting,
    pub bell: BellClass,
}

impl CorrelationResult {
    pub fn from_counts(counts: &QuadCounts, setting: Setting, bell: BellClass) -> Result<Self> {
        Ok(Self {
            e: correlation(counts)?,
            sigma_e: correlation_error(counts)?,
            setting,
            bell,
        })
    }
}

/// Correlations for every row and both classes, row-major.
///
/// Exact tables use expected counts over `table.trials` attempts for the
/// error column.
pub fn correlations<T: CountValue>(table: &CountsTable<T>) -> Result<Vec<CorrelationResult>> {
    let mut out = Vec::with_capacity(table.rows.len() * 2);
    for (i, row) in table.rows.iter().enumerate() {
        for bell in BellClass::BOTH {
            let q = table.quad_counts(i, bell);
            out.push(CorrelationResult::from_counts(&q, row.setting, bell)?);
        }
    }
    Ok(out)
}

/// Conditional correlation of one class from an exact table row, without
/// the counting error (which needs a trial count).
pub fn exact_correlation(table: &CountsTable<f64>, row: usize, bell: BellClass) -> Result<f64> {
    correlation(&table.quad_raw(row, bell))
}

/// Which CHSH sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combination {
    /// Negate the term at this grid position: 0 = (a', d'), 1 = (a', d''),
    /// 2 = (a'', d'), 3 = (a'', d'').
    MinusAt(usize),
    /// Largest S over the four placements.
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChshResult {
    pub s: f64,
    pub sigma_s: f64,
    /// Grid order: (a', d'), (a', d''), (a'', d'), (a'', d'').
    pub settings: [Setting; 4],
    /// Grid position of the negated term.
    pub placement: usize,
    pub bell: BellClass,
}

impl ChshResult {
    /// The negated term as `E(phi_a;phi_d)`.
    pub fn placement_label(&self) -> String {
        let s = self.settings[self.placement];
        format!("E({};{})", s.phi_a, s.phi_d)
    }
}

/// `S = |sum_j E_j - 2 E_k|` for the negated position `k`, and
/// `sigma_S = sqrt(sum_j sigma_j²)`.
///
/// The four results must span a 2x2 grid of two a-angles and two d-angles.
/// The first entry fixes `a'` and `d'`.
pub fn chsh(table: &[CorrelationResult; 4], combination: Combination) -> Result<ChshResult> {
    let bell = table[0].bell;
    if table.iter().any(|r| r.bell != bell) {
        return Err(Error::InvalidSettings("mixed Bell classes".into()));
    }
    let a1 = table[0].setting.phi_a;
    let d1 = table[0].setting.phi_d;
    let a2 = table
        .iter()
        .map(|r| r.setting.phi_a)
        .find(|&a| a != a1)
        .ok_or_else(|| Error::InvalidSettings("only one a-angle".into()))?;
    let d2 = table
        .iter()
        .map(|r| r.setting.phi_d)
        .find(|&d| d != d1)
        .ok_or_else(|| Error::InvalidSettings("only one d-angle".into()))?;
    let grid = [
        Setting::new(a1, d1),
        Setting::new(a1, d2),
        Setting::new(a2, d1),
        Setting::new(a2, d2),
    ];
    let mut ordered = [None; 4];
    for r in table {
        let pos = grid
            .iter()
            .position(|g| *g == r.setting)
            .ok_or_else(|| Error::InvalidSettings(format!("{:?} is off the grid", r.setting)))?;
        if ordered[pos].replace(*r).is_some() {
            return Err(Error::InvalidSettings(format!(
                "{:?} appears twice",
                r.setting
            )));
        }
    }
    let ordered: Vec<CorrelationResult> = ordered.into_iter().map(Option::unwrap).collect();
    let total: f64 = ordered.iter().map(|r| r.e).sum();
    let s_at = |k: usize| (total - 2.0 * ordered[k].e).abs();
    let placement = match combination {
        Combination::MinusAt(k) if k < 4 => k,
        Combination::MinusAt(k) => {
            return Err(Error::InvalidSettings(format!(
                "placement {k} out of range"
            )))
        }
        Combination::Max => (0..4)
            .max_by(|&i, &j| s_at(i).total_cmp(&s_at(j)))
            .unwrap_or(0),
    };
    let sigma_s = ordered
        .iter()
        .map(|r| r.sigma_e.powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(ChshResult {
        s: s_at(placement),
        sigma_s,
        settings: grid,
        placement,
        bell,
    })
}

/// CHSH for one class from a table holding the four grid settings.
pub fn chsh_from_table<T: CountValue>(
    table: &CountsTable<T>,
    bell: BellClass,
    combination: Combination,
) -> Result<ChshResult> {
    if table.rows.len() != 4 {
        return Err(Error::InvalidSettings(format!(
            "CHSH needs 4 settings, table has {}",
            table.rows.len()
        )));
    }
    let results: Vec<CorrelationResult> = correlations(table)?
        .into_iter()
        .filter(|r| r.bell == bell)
        .collect();
    let arr: [CorrelationResult; 4] = results
        .try_into()
        .map_err(|_| Error::InvalidSettings("expected four correlations".into()))?;
    chsh(&arr, combination)
}

/// Ideal conditional correlation of the outer photons:
/// Ψ⁻ gives `-cos 2(phi_a - phi_d)`, Ψ⁺ gives `-cos 2(phi_a + phi_d)`.
pub fn qm_prediction(phi_a: f64, phi_d: f64, bell: BellClass) -> f64 {
    let arg = match bell {
        BellClass::PsiMinus => phi_a - phi_d,
        BellClass::PsiPlus => phi_a + phi_d,
    };
    -(2.0 * arg).to_radians().cos()
}

/// Conditional correlation of one class at `phi_a = phi_d = 45°`.
pub fn correlation_at_45(config: &ExperimentConfig, bell: BellClass) -> Result<f64> {
    let table = exact_counts(config, &[Setting::new(45.0, 45.0)])?;
    exact_correlation(&table, 0, bell)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayPoint {
    pub delay: f64,
    pub overlap: f64,
    pub e_psi_minus: f64,
    pub e_psi_plus: f64,
    /// Sum over all click patterns; 1 up to rounding.
    pub total_probability: f64,
}

/// Both class correlations at 45°/45° as a function of the b-c delay. Each
/// point evaluates one probability table and sorts it by class.
pub fn delay_scan(
    config: &ExperimentConfig,
    delays: &[f64],
    sigma: f64,
) -> Result<Vec<DelayPoint>> {
    if delays.is_empty() {
        return Err(Error::param("delays", "empty delay list"));
    }
    delays
        .iter()
        .map(|&delay| {
            let overlap = optics::delay_overlap(delay, sigma)?;
            let cfg = ExperimentConfig {
                overlap,
                ..config.clone()
            };
            let table = exact_counts(&cfg, &[Setting::new(45.0, 45.0)])?;
            Ok(DelayPoint {
                delay,
                overlap,
                e_psi_minus: exact_correlation(&table, 0, BellClass::PsiMinus)?,
                e_psi_plus: exact_correlation(&table, 0, BellClass::PsiPlus)?,
                total_probability: table.rows[0].total(),
            })
        })
        .collect()
}

/// Bisection for `f(x) = target` on `[lo, hi]` with `f` increasing.
fn bisect(
    mut lo: f64,
    mut hi: f64,
    target: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if target < f_lo - 1e-12 || target > f_hi + 1e-12 {
        return Err(Error::NoSolution(format!(
            "target {target} outside achievable range [{f_lo}, {f_hi}]"
        )));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Overlap v at which `|E(45°, 45°)|` of `bell` equals `target`.
pub fn calibrate_overlap(config: &ExperimentConfig, target: f64, bell: BellClass) -> Result<f64> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::param("target", format!("{target} outside (0, 1]")));
    }
    bisect(0.0, 1.0, target, |v| {
        let cfg = ExperimentConfig {
            overlap: v,
            ..config.clone()
        };
        Ok(correlation_at_45(&cfg, bell)?.abs())
    })
}

/// Misalignment angle in `[0°, 22.5°]` at which the 45°/45° correlation of
/// `bell`, taken with its zero-misalignment sign, drops to `target`.
pub fn calibrate_misalignment(
    config: &ExperimentConfig,
    target: f64,
    bell: BellClass,
) -> Result<f64> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::param("target", format!("{target} outside (0, 1]")));
    }
    let at = |m: f64| {
        correlation_at_45(
            &ExperimentConfig {
                misalignment_deg: m,
                ..config.clone()
            },
            bell,
        )
    };
    let sign = at(0.0)?.signum();
    // Decreasing in m; bisect on the negated angle to keep `bisect` increasing.
    let neg = bisect(-22.5, 0.0, target, |x| Ok(sign * at(-x)?))?;
    Ok(-neg)
}

/// Overlap and misalignment that reproduce given |E(45°, 45°)| values for
/// the Ψ⁻ and Ψ⁺ classes simultaneously.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub overlap: f64,
    pub misalignment_deg: f64,
    pub e_psi_minus: f64,
    pub e_psi_plus: f64,
    pub iterations: usize,
}

/// Alternates the two one-dimensional solves: v from the Ψ⁻ target at the
/// current misalignment, then the misalignment from the Ψ⁺ target at that v.
/// Misalignment barely moves Ψ⁻, so this converges in a few rounds.
pub fn calibrate_visibilities(
    config: &ExperimentConfig,
    target_minus: f64,
    target_plus: f64,
) -> Result<Calibration> {
    let mut cfg = config.clone();
    cfg.misalignment_deg = 0.0;
    for iteration in 1..=50 {
        let v = calibrate_overlap(&cfg, target_minus, BellClass::PsiMinus)?;
        cfg.overlap = v;
        let m = calibrate_misalignment(&cfg, target_plus, BellClass::PsiPlus)?;
        let moved = (m - cfg.misalignment_deg).abs();
        cfg.misalignment_deg = m;
        if moved < 1e-9 {
            return Ok(Calibration {
                overlap: cfg.overlap,
                misalignment_deg: m,
                e_psi_minus: correlation_at_45(&cfg, BellClass::PsiMinus)?,
                e_psi_plus: correlation_at_45(&cfg, BellClass::PsiPlus)?,
                iterations: iteration,
            });
        }
    }
    Err(Error::NoSolution("calibration did not converge".into()))
}
