//! Brute-force amplitude oracle for the four-photon experiment.
//!
//! Independent of the library engine: every source photon is pushed through
//! a hand-written single-photon transfer function, the product of the four
//! images is expanded term by term, and bosonic factors are applied at the
//! end. Only plain complex arithmetic from `num-complex` is shared.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum In {
    A,
    B,
    C,
    D,
}

/// Output detectors, in this order: A+, A-, D+, D-, D1H, D1V, D2H, D2V.
/// The bare analyzer uses 4 for arm 1 and 6 for arm 2.
pub const DETECTOR_NAMES: [&str; 8] = ["A+", "A-", "D+", "D-", "D1H", "D1V", "D2H", "D2V"];

/// Output mode: (detector, late bin, lost, polarization tag). The tag is only
/// used by the bare analyzer, where an arm keeps both polarizations.
type Mode = (u8, bool, bool, u8);

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub phi_a: f64,
    pub phi_d: f64,
    pub overlap: f64,
    pub efficiency: f64,
    pub misalignment_deg: f64,
    /// Replace the polarizing analyzer by one detector per BS output arm.
    pub bare: bool,
}

impl Params {
    pub fn ideal(phi_a: f64, phi_d: f64) -> Self {
        Self {
            phi_a,
            phi_d,
            overlap: 1.0,
            efficiency: 1.0,
            misalignment_deg: 0.0,
            bare: false,
        }
    }
}

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rotate(deg: f64, h: Complex64, v: Complex64) -> (Complex64, Complex64) {
    let (s, c) = deg.to_radians().sin_cos();
    // H -> cH + sV, V -> -sH + cV
    (c * h - s * v, s * h + c * v)
}

/// Photon on `path` with polarization amplitude `(h, v)` -> output modes.
fn transfer(p: &Params, path: In, pol_h: bool) -> Vec<(Mode, Complex64)> {
    let (h0, v0) = if pol_h {
        (cx(1.0), cx(0.0))
    } else {
        (cx(0.0), cx(1.0))
    };
    let t = p.efficiency.sqrt();
    let r = (1.0 - p.efficiency).max(0.0).sqrt();
    let mut out = Vec::new();
    let mut push = |det: u8, late: bool, tag: u8, amp: Complex64| {
        if amp.norm_sqr() > 0.0 {
            out.push(((det, late, false, tag), amp * t));
            if r > 0.0 {
                out.push(((det, late, true, tag), amp * r));
            }
        }
    };
    match path {
        In::A | In::D => {
            let phi = if path == In::A { p.phi_a } else { p.phi_d };
            let base = if path == In::A { 0 } else { 2 };
            let (h, v) = rotate(phi, h0, v0);
            push(base, false, 0, h);
            push(base + 1, false, 0, v);
        }
        In::B | In::C => {
            let (h, v) = rotate(p.misalignment_deg, h0, v0);
            let bins: Vec<(bool, f64)> = if path == In::C {
                let w = (1.0 - p.overlap * p.overlap).max(0.0).sqrt();
                vec![(false, p.overlap), (true, w)]
            } else {
                vec![(false, 1.0)]
            };
            let i = Complex64::i();
            let s = std::f64::consts::FRAC_1_SQRT_2;
            // b -> (o1 + i o2)/sqrt2, c -> (i o1 + o2)/sqrt2
            let (to1, to2) = if path == In::B {
                (cx(s), i * s)
            } else {
                (i * s, cx(s))
            };
            for (late, bin_amp) in bins {
                for (arm_amp, det_h, det_v) in [(to1, 4u8, 5u8), (to2, 6, 7)] {
                    if p.bare {
                        push(det_h, late, 0, h * arm_amp * bin_amp);
                        push(det_h, late, 1, v * arm_amp * bin_amp);
                    } else {
                        push(det_h, late, 0, h * arm_amp * bin_amp);
                        push(det_v, late, 0, v * arm_amp * bin_amp);
                    }
                }
            }
        }
    }
    out
}

/// One source term: coefficient times a product of creation operators.
type Monomial = (Complex64, Vec<(In, bool)>);

/// Pair operator `(H_x V_y - V_x H_y)/sqrt2` as monomials.
fn singlet(x: In, y: In) -> Vec<Monomial> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        (cx(s), vec![(x, true), (y, false)]),
        (cx(-s), vec![(x, false), (y, true)]),
    ]
}

fn multiply(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::new();
    for (ca, ma) in a {
        for (cb, mb) in b {
            let mut m = ma.clone();
            m.extend_from_slice(mb);
            out.push((ca * cb, m));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terms {
    /// `(A + C)^2`
    Full,
    /// `A^2` only
    DoubleAb,
    /// `A C` only
    Cross,
    /// `C^2` only
    DoubleCd,
}

/// Unnormalized polynomial for the chosen source terms.
pub fn source(terms: Terms) -> Vec<Monomial> {
    let a = singlet(In::A, In::B);
    let c = singlet(In::C, In::D);
    let aa = multiply(&a, &a);
    let ac = multiply(&a, &c);
    let cc = multiply(&c, &c);
    let scale = |v: Vec<Monomial>, k: f64| -> Vec<Monomial> {
        v.into_iter().map(|(z, m)| (z * k, m)).collect()
    };
    match terms {
        Terms::Full => {
            let mut all = aa;
            all.extend(scale(ac, 2.0));
            all.extend(cc);
            all
        }
        Terms::DoubleAb => aa,
        Terms::Cross => ac,
        Terms::DoubleCd => cc,
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Expands `prod_k (sum_j u_kj m_j^dag) |0>` into Fock amplitudes keyed by
/// the sorted multiset of output modes.
fn expand<K: Ord + Clone>(
    poly: &[Monomial],
    image: impl Fn(In, bool) -> Vec<(K, Complex64)>,
) -> BTreeMap<Vec<K>, Complex64> {
    let mut raw: BTreeMap<Vec<K>, Complex64> = BTreeMap::new();
    for (coef, ops) in poly {
        let images: Vec<_> = ops.iter().map(|&(p, h)| image(p, h)).collect();
        let mut partial: Vec<(Vec<K>, Complex64)> = vec![(Vec::new(), *coef)];
        for img in &images {
            let mut next = Vec::with_capacity(partial.len() * img.len());
            for (modes, z) in &partial {
                for (m, u) in img {
                    let mut ms = modes.clone();
                    ms.push(m.clone());
                    next.push((ms, z * u));
                }
            }
            partial = next;
        }
        for (mut modes, z) in partial {
            modes.sort();
            *raw.entry(modes).or_default() += z;
        }
    }
    // a^dag^n |0> = sqrt(n!) |n>
    raw.into_iter()
        .map(|(modes, z)| {
            let mut bos = 1.0;
            let mut i = 0;
            while i < modes.len() {
                let mut j = i;
                while j < modes.len() && modes[j] == modes[i] {
                    j += 1;
                }
                bos *= factorial(j - i);
                i = j;
            }
            (modes, z * bos.sqrt())
        })
        .collect()
}

/// Squared norm of the (unnormalized) source polynomial.
pub fn source_norm_sqr(poly: &[Monomial]) -> f64 {
    expand(poly, |p, h| vec![((p, h), cx(1.0))])
        .values()
        .map(|z| z.norm_sqr())
        .sum()
}

/// Probability of each click set (bitmask over `DETECTOR_NAMES`).
pub fn click_probabilities(p: &Params, terms: Terms) -> BTreeMap<u8, f64> {
    let poly = source(terms);
    let norm = source_norm_sqr(&poly);
    let out = expand(&poly, |path, h| transfer(p, path, h));
    let mut clicks = BTreeMap::new();
    for (modes, z) in out {
        let mask = modes
            .iter()
            .filter(|m| !m.2)
            .fold(0u8, |acc, m| acc | (1 << m.0));
        *clicks.entry(mask).or_insert(0.0) += z.norm_sqr() / norm;
    }
    clicks
}

/// `(bell, a_plus, d_plus)` for an accepted four-fold, with bell 0 = Psi-
/// and 1 = Psi+.
pub fn classify(mask: u8) -> Option<(usize, bool, bool)> {
    let bit = |i: u8| mask & (1 << i) != 0;
    if mask.count_ones() != 4 || bit(0) == bit(1) || bit(2) == bit(3) {
        return None;
    }
    let bsa = mask & 0b1111_0000;
    let bell = match bsa {
        x if x == (1 << 4) | (1 << 7) || x == (1 << 5) | (1 << 6) => 0,
        x if x == (1 << 4) | (1 << 5) || x == (1 << 6) | (1 << 7) => 1,
        _ => return None,
    };
    Some((bell, bit(0), bit(2)))
}

/// Class probabilities indexed `[bell][a_minus][d_minus]`.
pub fn class_probabilities(p: &Params) -> [[[f64; 2]; 2]; 2] {
    let mut out = [[[0.0; 2]; 2]; 2];
    for (mask, q) in click_probabilities(p, Terms::Full) {
        if let Some((bell, a_plus, d_plus)) = classify(mask) {
            out[bell][usize::from(!a_plus)][usize::from(!d_plus)] += q;
        }
    }
    out
}

/// Conditional correlation for one Bell class.
pub fn correlation(p: &Params, bell: usize) -> f64 {
    let c = class_probabilities(p)[bell];
    let n = c[0][0] + c[0][1] + c[1][0] + c[1][1];
    (c[0][0] + c[1][1] - c[0][1] - c[1][0]) / n
}

/// Acceptance of a same-source double pair by the analyzer alone: the
/// probability that the two BSA photons give the requested signature.
/// `signature`: 0 = Psi- pair, 1 = Psi+ pair, 2 = either. With `bare`, the
/// only signature is one click in each arm.
pub fn bsa_acceptance(p: &Params, terms: Terms, signature: usize) -> f64 {
    let mut total = 0.0;
    for (mask, q) in click_probabilities(p, terms) {
        let bsa = mask & 0b1111_0000;
        let accepted = if p.bare {
            bsa == (1 << 4) | (1 << 6)
        } else {
            let minus = bsa == (1 << 4) | (1 << 7) || bsa == (1 << 5) | (1 << 6);
            let plus = bsa == (1 << 4) | (1 << 5) || bsa == (1 << 6) | (1 << 7);
            match signature {
                0 => minus,
                1 => plus,
                _ => minus || plus,
            }
        };
        if accepted {
            total += q;
        }
    }
    total
}
