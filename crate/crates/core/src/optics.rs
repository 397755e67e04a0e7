//! Optical elements as [`ModeMap`]s, plus the two-bin temporal overlap model
//! used for the delay line.
//!
//! Every element acts per (polarization, temporal bin) sublabel unless it is
//! polarization- or time-selective by nature. Angles are in degrees.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ModeLabel, ModeMap, Path, Polarization, TimeBin};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Description of one element; [`ElementSpec::build`] turns it into a map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementSpec {
    BeamSplitter {
        in1: Path,
        in2: Path,
        out1: Path,
        out2: Path,
    },
    Pbs {
        path: Path,
        out_h: Path,
        out_v: Path,
    },
    Rotator {
        path: Path,
        angle_deg: f64,
    },
    HalfWaveplate {
        path: Path,
        angle_deg: f64,
    },
    QuarterWaveplate {
        path: Path,
        angle_deg: f64,
    },
    Delay {
        path: Path,
        overlap: f64,
    },
    Loss {
        path: Path,
        loss_path: Path,
        efficiency: f64,
    },
}

impl ElementSpec {
    pub fn build(&self) -> Result<ModeMap> {
        match *self {
            ElementSpec::BeamSplitter {
                in1,
                in2,
                out1,
                out2,
            } => beam_splitter(in1, in2, out1, out2),
            ElementSpec::Pbs { path, out_h, out_v } => pbs(path, out_h, out_v),
            ElementSpec::Rotator { path, angle_deg } => polarization_rotator(path, angle_deg),
            ElementSpec::HalfWaveplate { path, angle_deg } => half_waveplate(path, angle_deg),
            ElementSpec::QuarterWaveplate { path, angle_deg } => quarter_waveplate(path, angle_deg),
            ElementSpec::Delay { path, overlap } => delay_decompose(path, overlap),
            ElementSpec::Loss {
                path,
                loss_path,
                efficiency,
            } => loss(path, loss_path, efficiency),
        }
    }
}

fn check_angle(angle_deg: f64) -> Result<()> {
    if angle_deg.is_finite() {
        Ok(())
    } else {
        Err(Error::param("angle", format!("{angle_deg} is not finite")))
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::param(name, format!("{x} outside [0, 1]")))
    }
}

/// Applies the same 2x2 polarization matrix on every temporal bin of `path`.
/// `jones[r][c]` is the coefficient of polarization `r` in the image of `c`.
fn polarization_element(path: Path, jones: [[Complex64; 2]; 2]) -> Result<ModeMap> {
    let mut images = Vec::with_capacity(4);
    for bin in TimeBin::BOTH {
        for (c, pol) in Polarization::BOTH.into_iter().enumerate() {
            let image = Polarization::BOTH
                .into_iter()
                .enumerate()
                .map(|(r, out)| (ModeLabel::new(path, out, bin), jones[r][c]))
                .collect();
            images.push((ModeLabel::new(path, pol, bin), image));
        }
    }
    ModeMap::from_images(images)
}

/// Symmetric 50:50 beam splitter, identical on every polarization and bin.
pub fn beam_splitter(in1: Path, in2: Path, out1: Path, out2: Path) -> Result<ModeMap> {
    let mut paths = [in1, in2, out1, out2];
    paths.sort();
    // Inputs may reuse the output path names only as a pair (in-place BS).
    let in_place = (in1 == out1 && in2 == out2) || (in1 == out2 && in2 == out1);
    let distinct = paths.windows(2).all(|w| w[0] != w[1]);
    if in1 == in2 || out1 == out2 || !(distinct || in_place) {
        return Err(Error::InvalidElement(format!(
            "beam splitter needs distinct paths, got {in1:?},{in2:?} -> {out1:?},{out2:?}"
        )));
    }
    let t = re(FRAC_1_SQRT_2);
    let r = Complex64::new(0.0, FRAC_1_SQRT_2);
    let mut images = Vec::with_capacity(8);
    for pol in Polarization::BOTH {
        for bin in TimeBin::BOTH {
            let o1 = ModeLabel::new(out1, pol, bin);
            let o2 = ModeLabel::new(out2, pol, bin);
            images.push((ModeLabel::new(in1, pol, bin), vec![(o1, t), (o2, r)]));
            images.push((ModeLabel::new(in2, pol, bin), vec![(o1, r), (o2, t)]));
        }
    }
    ModeMap::from_images(images)
}

/// Routes H to `out_h` and V to `out_v`.
pub fn pbs(path: Path, out_h: Path, out_v: Path) -> Result<ModeMap> {
    if out_h == out_v {
        return Err(Error::InvalidElement(format!(
            "PBS outputs must differ, got {out_h:?} twice"
        )));
    }
    let mut images = Vec::with_capacity(4);
    for bin in TimeBin::BOTH {
        images.push((
            ModeLabel::new(path, Polarization::H, bin),
            vec![(ModeLabel::new(out_h, Polarization::H, bin), re(1.0))],
        ));
        images.push((
            ModeLabel::new(path, Polarization::V, bin),
            vec![(ModeLabel::new(out_v, Polarization::V, bin), re(1.0))],
        ));
    }
    ModeMap::from_images(images)
}

/// `H† -> cos θ H† + sin θ V†`, `V† -> -sin θ H† + cos θ V†`.
pub fn polarization_rotator(path: Path, angle_deg: f64) -> Result<ModeMap> {
    check_angle(angle_deg)?;
    let (s, c) = angle_deg.to_radians().sin_cos();
    polarization_element(path, [[re(c), re(-s)], [re(s), re(c)]])
}

/// Half-wave plate with fast axis at `angle_deg` from H.
pub fn half_waveplate(path: Path, angle_deg: f64) -> Result<ModeMap> {
    check_angle(angle_deg)?;
    let (s, c) = (2.0 * angle_deg.to_radians()).sin_cos();
    polarization_element(path, [[re(c), re(s)], [re(s), re(-c)]])
}

/// Quarter-wave plate with fast axis at `angle_deg` from H.
pub fn quarter_waveplate(path: Path, angle_deg: f64) -> Result<ModeMap> {
    check_angle(angle_deg)?;
    let (s, c) = angle_deg.to_radians().sin_cos();
    let i = Complex64::i();
    let off = (re(1.0) - i) * (s * c);
    polarization_element(
        path,
        [
            [re(c * c) + i * (s * s), off],
            [off, re(s * s) + i * (c * c)],
        ],
    )
}

/// Temporal overlap of two Gaussian wave packets offset by `delay`.
pub fn delay_overlap(delay: f64, sigma: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::param("sigma", format!("{sigma} must be positive")));
    }
    if !delay.is_finite() {
        return Err(Error::param("delay", format!("{delay} is not finite")));
    }
    Ok((-delay * delay / (2.0 * sigma * sigma)).exp())
}

/// Partial distinguishability on `path`: bin 0 goes to
/// `v·bin0 + sqrt(1-v²)·bin1`, bin 1 completes the orthonormal pair.
pub fn delay_decompose(path: Path, overlap: f64) -> Result<ModeMap> {
    check_unit("overlap", overlap)?;
    let v = overlap;
    let w = (1.0 - v * v).max(0.0).sqrt();
    let mut images = Vec::with_capacity(4);
    for pol in Polarization::BOTH {
        let early = ModeLabel::new(path, pol, TimeBin::Early);
        let late = ModeLabel::new(path, pol, TimeBin::Late);
        images.push((early, vec![(early, re(v)), (late, re(w))]));
        images.push((late, vec![(early, re(-w)), (late, re(v))]));
    }
    ModeMap::from_images(images)
}

/// Detector inefficiency as a beam splitter into `loss_path` with amplitude
/// transmission `sqrt(efficiency)`.
pub fn loss(path: Path, loss_path: Path, efficiency: f64) -> Result<ModeMap> {
    check_unit("efficiency", efficiency)?;
    if path == loss_path {
        return Err(Error::InvalidElement(format!(
            "loss path must differ from {path:?}"
        )));
    }
    let t = efficiency.sqrt();
    let r = (1.0 - efficiency).max(0.0).sqrt();
    let mut images = Vec::with_capacity(8);
    for pol in Polarization::BOTH {
        for bin in TimeBin::BOTH {
            let m = ModeLabel::new(path, pol, bin);
            let l = ModeLabel::new(loss_path, pol, bin);
            images.push((m, vec![(m, re(t)), (l, re(r))]));
            images.push((l, vec![(m, re(-r)), (l, re(t))]));
        }
    }
    ModeMap::from_images(images)
}
