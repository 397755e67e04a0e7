//! Proptest strategies for random states and random linear-optics maps.

#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use swapsim::fock::{FockVector, ModeLabel, ModeMap, Path, Polarization, TimeBin};
use swapsim::optics;

/// Modes the random states live on.
pub const MODES: [ModeLabel; 4] = [
    ModeLabel::new(Path::B, Polarization::H, TimeBin::Early),
    ModeLabel::new(Path::B, Polarization::V, TimeBin::Early),
    ModeLabel::new(Path::C, Polarization::H, TimeBin::Early),
    ModeLabel::new(Path::C, Polarization::V, TimeBin::Early),
];

/// Up to three terms of up to four photons each, normalized.
pub fn state() -> impl Strategy<Value = FockVector> {
    let term = (
        prop::collection::vec(0usize..MODES.len(), 1..=4),
        -1.0f64..1.0,
        -1.0f64..1.0,
    );
    prop::collection::vec(term, 1..=3).prop_filter_map("zero state", |terms| {
        let mut acc = FockVector::zero(Default::default());
        for (modes, re, im) in terms {
            let mut s = FockVector::vacuum();
            for m in modes {
                s = s.apply_creation(MODES[m]).ok()?;
            }
            acc = acc.add_scaled(&s, Complex64::new(re, im));
        }
        acc.normalize().ok()
    })
}

/// General 2x2 unitary on two modes, `e^{i alpha} [[a, -b*], [b, a*]]`.
pub fn su2(m1: ModeLabel, m2: ModeLabel, theta: f64, phi: f64, chi: f64, alpha: f64) -> ModeMap {
    let g = Complex64::from_polar(1.0, alpha);
    let a = Complex64::from_polar(theta.cos(), phi);
    let b = Complex64::from_polar(theta.sin(), chi);
    ModeMap::from_images(vec![
        (m1, vec![(m1, g * a), (m2, g * b)]),
        (m2, vec![(m1, -g * b.conj()), (m2, g * a.conj())]),
    ])
    .expect("unitary by construction")
}

/// One random unitary element acting in place on paths b and c.
pub fn element() -> impl Strategy<Value = ModeMap> {
    let angle = -180.0f64..180.0;
    let tau = std::f64::consts::TAU;
    prop_oneof![
        Just(optics::beam_splitter(Path::B, Path::C, Path::B, Path::C).unwrap()),
        angle
            .clone()
            .prop_map(|a| optics::polarization_rotator(Path::B, a).unwrap()),
        angle
            .clone()
            .prop_map(|a| optics::half_waveplate(Path::C, a).unwrap()),
        angle.prop_map(|a| optics::quarter_waveplate(Path::B, a).unwrap()),
        (0.0f64..=1.0).prop_map(|v| optics::delay_decompose(Path::C, v).unwrap()),
        (0usize..4, 0usize..4, 0.0..tau, 0.0..tau, 0.0..tau, 0.0..tau)
            .prop_filter_map("same mode", |(i, j, t, p, c, a)| (i != j)
                .then(|| su2(MODES[i], MODES[j], t, p, c, a)),),
    ]
}

/// Short random circuit, composed in order.
pub fn circuit() -> impl Strategy<Value = Vec<ModeMap>> {
    prop::collection::vec(element(), 1..=4)
}

pub fn distance(a: &FockVector, b: &FockVector) -> f64 {
    a.add_scaled(b, Complex64::new(-1.0, 0.0)).norm_sqr().sqrt()
}
