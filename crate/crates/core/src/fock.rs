//! Sparse bosonic Fock-state algebra over labeled optical modes.
//!
//! A [`FockVector`] is a sparse map from canonical occupation records to
//! complex amplitudes. Optical elements are [`ModeMap`]s: linear substitutions
//! on creation operators, `m† -> sum_m' U[m', m] m'†`, applied to every term of
//! the state and re-expanded with the bosonic `sqrt(n!)` factors.
//!
//! Beam-splitter phase convention used throughout the crate (symmetric):
//!
//! ```text
//! in1† -> (out1† + i out2†) / sqrt(2)
//! in2† -> (i out1† + out2†) / sqrt(2)
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Amplitudes with smaller magnitude are dropped from a state.
pub const DEFAULT_PRUNE: f64 = 1e-12;
/// Default cap on the total photon number of a state.
pub const DEFAULT_MAX_PHOTONS: u32 = 4;
/// Column-orthonormality tolerance accepted by [`ModeMap::new`].
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Spatial path of an optical mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    A,
    B,
    C,
    D,
    Bsa1,
    Bsa2,
    APlus,
    AMinus,
    DPlus,
    DMinus,
    D1H,
    D1V,
    D2H,
    D2V,
    /// Loss channel; one per detector, indexed by detector.
    Loss(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];
}

/// Temporal bin 0 (`Early`) or 1 (`Late`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TimeBin {
    Early,
    Late,
}

impl TimeBin {
    pub const BOTH: [TimeBin; 2] = [TimeBin::Early, TimeBin::Late];
}

/// One optical mode. Ordered by path, then polarization, then temporal bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub path: Path,
    pub pol: Polarization,
    pub bin: TimeBin,
}

impl ModeLabel {
    pub const fn new(path: Path, pol: Polarization, bin: TimeBin) -> Self {
        Self { path, pol, bin }
    }

    /// Mode in the first temporal bin.
    pub const fn early(path: Path, pol: Polarization) -> Self {
        Self::new(path, pol, TimeBin::Early)
    }

    /// All four (polarization, bin) modes of a path.
    pub fn all_on(path: Path) -> impl Iterator<Item = ModeLabel> {
        Polarization::BOTH.into_iter().flat_map(move |pol| {
            TimeBin::BOTH
                .into_iter()
                .map(move |bin| ModeLabel::new(path, pol, bin))
        })
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = match self.bin {
            TimeBin::Early => 0,
            TimeBin::Late => 1,
        };
        write!(f, "{:?}.{:?}.{}", self.path, self.pol, bin)
    }
}

/// Photon counts per mode in canonical (sorted, zero-free) form.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupation(SmallVec<[(ModeLabel, u8); 4]>);

impl Occupation {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an occupation from arbitrary `(mode, count)` pairs; repeated
    /// modes accumulate and zero counts are dropped.
    pub fn from_counts(counts: impl IntoIterator<Item = (ModeLabel, u8)>) -> Self {
        let mut acc: BTreeMap<ModeLabel, u8> = BTreeMap::new();
        for (mode, n) in counts {
            *acc.entry(mode).or_default() += n;
        }
        Occupation(acc.into_iter().filter(|&(_, n)| n > 0).collect())
    }

    /// Occupation of a multiset of modes given as a sorted slice.
    fn from_sorted_modes(modes: &[ModeLabel]) -> Self {
        let mut out: SmallVec<[(ModeLabel, u8); 4]> = SmallVec::new();
        for &m in modes {
            match out.last_mut() {
                Some((last, n)) if *last == m => *n += 1,
                _ => out.push((m, 1)),
            }
        }
        Occupation(out)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&(_, n)| u32::from(n)).sum()
    }

    pub fn count(&self, mode: ModeLabel) -> u8 {
        self.0
            .binary_search_by(|(m, _)| m.cmp(&mode))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeLabel, u8)> + '_ {
        self.0.iter().copied()
    }

    /// Total photons on a spatial path, summed over polarization and bin.
    pub fn photons_on(&self, path: Path) -> u32 {
        self.0
            .iter()
            .filter(|(m, _)| m.path == path)
            .map(|&(_, n)| u32::from(n))
            .sum()
    }

    fn incremented(&self, mode: ModeLabel) -> (Occupation, u8) {
        let mut v = self.0.clone();
        match v.binary_search_by(|(m, _)| m.cmp(&mode)) {
            Ok(i) => {
                let before = v[i].1;
                v[i].1 += 1;
                (Occupation(v), before)
            }
            Err(i) => {
                v.insert(i, (mode, 1));
                (Occupation(v), 0)
            }
        }
    }

    /// `prod_m sqrt(n_m!)`
    fn sqrt_factorial_product(&self) -> f64 {
        self.0.iter().map(|&(_, n)| sqrt_factorial(n)).product()
    }
}

fn sqrt_factorial(n: u8) -> f64 {
    (1..=u32::from(n)).map(f64::from).product::<f64>().sqrt()
}

/// Limits applied to every state: prune threshold and photon-number cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub prune: f64,
    pub max_photons: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            prune: DEFAULT_PRUNE,
            max_photons: DEFAULT_MAX_PHOTONS,
        }
    }
}

/// Sparse pure state of the optical field.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    terms: BTreeMap<Occupation, Complex64>,
    trunc: Truncation,
}

impl FockVector {
    /// The empty state (no terms, zero norm).
    pub fn zero(trunc: Truncation) -> Self {
        Self {
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn vacuum() -> Self {
        Self::vacuum_with(Truncation::default())
    }

    pub fn vacuum_with(trunc: Truncation) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Occupation::empty(), Complex64::new(1.0, 0.0));
        Self { terms, trunc }
    }

    /// Builds a state from explicit terms; repeated occupations add up.
    pub fn from_terms(
        trunc: Truncation,
        terms: impl IntoIterator<Item = (Occupation, Complex64)>,
    ) -> Result<Self> {
        let mut out = Self::zero(trunc);
        for (occ, amp) in terms {
            let total = occ.total();
            if total > trunc.max_photons {
                return Err(Error::Capacity {
                    requested: total,
                    cap: trunc.max_photons,
                });
            }
            *out.terms.entry(occ).or_default() += amp;
        }
        out.prune();
        Ok(out)
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.terms.get(occ).copied().unwrap_or_default()
    }

    /// Largest total photon number among stored terms.
    pub fn max_photon_number(&self) -> u32 {
        self.terms.keys().map(Occupation::total).max().unwrap_or(0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(Complex64::norm_sqr).sum()
    }

    /// `a_m†` applied to every term.
    pub fn apply_creation(&self, mode: ModeLabel) -> Result<Self> {
        let mut out = Self::zero(self.trunc);
        for (occ, &amp) in &self.terms {
            let total = occ.total() + 1;
            if total > self.trunc.max_photons {
                return Err(Error::Capacity {
                    requested: total,
                    cap: self.trunc.max_photons,
                });
            }
            let (next, before) = occ.incremented(mode);
            *out.terms.entry(next).or_default() += amp * f64::from(before + 1).sqrt();
        }
        out.prune();
        Ok(out)
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner_product(&self, other: &FockVector) -> Complex64 {
        let (small, large, flip) = if self.terms.len() <= other.terms.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::default();
        for (occ, a) in &small.terms {
            if let Some(b) = large.terms.get(occ) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        acc
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::DegenerateState);
        }
        Ok(self.scale(Complex64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for amp in out.terms.values_mut() {
            *amp *= factor;
        }
        out.prune();
        out
    }

    /// `self + factor * other`
    pub fn add_scaled(&self, other: &FockVector, factor: Complex64) -> Self {
        let mut out = self.clone();
        for (occ, &amp) in &other.terms {
            *out.terms.entry(occ.clone()).or_default() += factor * amp;
        }
        out.prune();
        out
    }

    /// Substitutes every creation operator through `map` and re-expands.
    pub fn apply_mode_map(&self, map: &ModeMap) -> Self {
        let mut out: HashMap<Occupation, Complex64> = HashMap::new();
        // Multisets of output modes (kept sorted) with their coefficients.
        let mut partial: Vec<(SmallVec<[ModeLabel; 4]>, Complex64)> = Vec::new();
        let mut next: Vec<(SmallVec<[ModeLabel; 4]>, Complex64)> = Vec::new();

        for (occ, &amp) in &self.terms {
            partial.clear();
            partial.push((SmallVec::new(), amp / occ.sqrt_factorial_product()));
            for (mode, n) in occ.iter() {
                let image = map.image(mode);
                for _ in 0..n {
                    next.clear();
                    for (modes, coeff) in &partial {
                        for &(target, u) in image.iter() {
                            let mut grown = modes.clone();
                            let at = grown.partition_point(|m| *m <= target);
                            grown.insert(at, target);
                            next.push((grown, coeff * u));
                        }
                    }
                    std::mem::swap(&mut partial, &mut next);
                }
            }
            for (modes, coeff) in partial.drain(..) {
                let occ = Occupation::from_sorted_modes(&modes);
                let factor = occ.sqrt_factorial_product();
                *out.entry(occ).or_default() += coeff * factor;
            }
        }

        let mut state = Self {
            terms: out.into_iter().collect(),
            trunc: self.trunc,
        };
        state.prune();
        state
    }

    /// Keeps only terms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&Occupation) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(occ, _)| keep(occ))
                .map(|(o, a)| (o.clone(), *a))
                .collect(),
            trunc: self.trunc,
        }
    }

    fn prune(&mut self) {
        let threshold = self.trunc.prune;
        self.terms.retain(|_, amp| amp.norm() >= threshold);
    }
}

type Column = SmallVec<[(ModeLabel, Complex64); 4]>;

/// Linear substitution on creation operators. Modes not listed as inputs map
/// to themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMap {
    inputs: Vec<ModeLabel>,
    outputs: Vec<ModeLabel>,
    /// Row-major, `outputs.len() x inputs.len()`.
    matrix: Vec<Complex64>,
    columns: BTreeMap<ModeLabel, Column>,
}

impl ModeMap {
    /// `matrix[row * inputs.len() + col]` is the coefficient of output
    /// `outputs[row]` in the image of input `inputs[col]`.
    pub fn new(
        inputs: Vec<ModeLabel>,
        outputs: Vec<ModeLabel>,
        matrix: Vec<Complex64>,
    ) -> Result<Self> {
        if matrix.len() != inputs.len() * outputs.len() {
            return Err(Error::InvalidElement(format!(
                "matrix has {} entries, expected {}x{}",
                matrix.len(),
                outputs.len(),
                inputs.len()
            )));
        }
        if has_duplicates(&inputs) || has_duplicates(&outputs) {
            return Err(Error::InvalidElement("duplicate mode label".into()));
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidElement("non-finite coefficient".into()));
        }
        let ncols = inputs.len();
        let columns = inputs
            .iter()
            .enumerate()
            .map(|(c, &m)| {
                let col: Column = outputs
                    .iter()
                    .enumerate()
                    .map(|(r, &o)| (o, matrix[r * ncols + c]))
                    .filter(|(_, u)| *u != Complex64::default())
                    .collect();
                (m, col)
            })
            .collect();
        let map = Self {
            inputs,
            outputs,
            matrix,
            columns,
        };
        let defect = map.isometry_defect();
        if defect > ISOMETRY_TOL {
            return Err(Error::InvalidElement(format!(
                "columns not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(map)
    }

    /// Builds a map from per-input images.
    pub fn from_images(images: Vec<(ModeLabel, Vec<(ModeLabel, Complex64)>)>) -> Result<Self> {
        let inputs: Vec<ModeLabel> = images.iter().map(|(m, _)| *m).collect();
        let mut outputs: Vec<ModeLabel> = images
            .iter()
            .flat_map(|(_, img)| img.iter().map(|(o, _)| *o))
            .collect();
        outputs.sort();
        outputs.dedup();
        let row_of: HashMap<ModeLabel, usize> =
            outputs.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let ncols = inputs.len();
        let mut matrix = vec![Complex64::default(); outputs.len() * ncols];
        for (c, (_, img)) in images.iter().enumerate() {
            for &(o, u) in img {
                matrix[row_of[&o] * ncols + c] += u;
            }
        }
        Self::new(inputs, outputs, matrix)
    }

    pub fn identity() -> Self {
        Self {
            inputs: Vec::new(),
            outputs: Vec::new(),
            matrix: Vec::new(),
            columns: BTreeMap::new(),
        }
    }

    pub fn inputs(&self) -> &[ModeLabel] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[ModeLabel] {
        &self.outputs
    }

    pub fn coefficient(&self, output: ModeLabel, input: ModeLabel) -> Complex64 {
        match self.columns.get(&input) {
            Some(col) => col
                .iter()
                .find(|(o, _)| *o == output)
                .map(|&(_, u)| u)
                .unwrap_or_default(),
            None if input == output => Complex64::new(1.0, 0.0),
            None => Complex64::default(),
        }
    }

    /// Image of `m†` as a sparse list of `(m'†, coefficient)`.
    pub fn image(&self, mode: ModeLabel) -> Column {
        match self.columns.get(&mode) {
            Some(col) => col.clone(),
            None => smallvec::smallvec![(mode, Complex64::new(1.0, 0.0))],
        }
    }

    /// Largest entry of `|U†U - I|`.
    pub fn isometry_defect(&self) -> f64 {
        let n = self.inputs.len();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in j..n {
                let mut dot = Complex64::default();
                for r in 0..self.outputs.len() {
                    dot += self.matrix[r * n + j].conj() * self.matrix[r * n + k];
                }
                let expected = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).norm());
            }
        }
        worst
    }

    /// True when the map is square over one mode set and unitary within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let mut a = self.inputs.clone();
        let mut b = self.outputs.clone();
        a.sort();
        b.sort();
        a == b && self.isometry_defect() <= tol
    }

    /// Conjugate transpose; the inverse of a unitary map.
    pub fn adjoint(&self) -> Result<ModeMap> {
        let (rows, cols) = (self.outputs.len(), self.inputs.len());
        let mut matrix = vec![Complex64::default(); rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                matrix[c * rows + r] = self.matrix[r * cols + c].conj();
            }
        }
        ModeMap::new(self.outputs.clone(), self.inputs.clone(), matrix)
    }

    /// Composition: `self` first, then `next`. Outputs of `self` that are
    /// not also its inputs are taken to start empty, so they do not become
    /// inputs of the composite.
    pub fn then(&self, next: &ModeMap) -> Result<ModeMap> {
        let mut inputs: Vec<ModeLabel> = self.inputs.clone();
        for m in &next.inputs {
            if !self.columns.contains_key(m) && !self.outputs.contains(m) {
                inputs.push(*m);
            }
        }
        let images = inputs
            .iter()
            .map(|&m| {
                let mut acc: BTreeMap<ModeLabel, Complex64> = BTreeMap::new();
                for (mid, u) in self.image(m) {
                    for (out, w) in next.image(mid) {
                        *acc.entry(out).or_default() += w * u;
                    }
                }
                (m, acc.into_iter().collect())
            })
            .collect();
        ModeMap::from_images(images)
    }

    /// Composes a sequence of maps, first element applied first.
    pub fn chain<'a>(maps: impl IntoIterator<Item = &'a ModeMap>) -> Result<ModeMap> {
        maps.into_iter()
            .try_fold(ModeMap::identity(), |acc, m| acc.then(m))
    }
}

fn has_duplicates(modes: &[ModeLabel]) -> bool {
    let mut v = modes.to_vec();
    v.sort();
    v.windows(2).any(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mode(path: Path) -> ModeLabel {
        ModeLabel::early(path, Polarization::H)
    }

    fn symmetric_bs() -> ModeMap {
        let s = FRAC_1_SQRT_2;
        ModeMap::new(
            vec![mode(Path::B), mode(Path::C)],
            vec![mode(Path::Bsa1), mode(Path::Bsa2)],
            vec![c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn vacuum_is_single_unit_term() {
        let v = FockVector::vacuum();
        assert_eq!(v.len(), 1);
        assert_eq!(v.amplitude(&Occupation::empty()), c(1.0, 0.0));
        assert_eq!(v.norm_sqr(), 1.0);
        assert_eq!(v.max_photon_number(), 0);
    }

    #[test]
    fn creation_operators() {
        let m = mode(Path::A);
        let m2 = mode(Path::B);
        let one = FockVector::vacuum().apply_creation(m).unwrap();
        assert_eq!(
            one.amplitude(&Occupation::from_counts([(m, 1)])),
            c(1.0, 0.0)
        );

        let two = one.apply_creation(m).unwrap();
        assert_abs_diff_eq!(
            two.amplitude(&Occupation::from_counts([(m, 2)])).re,
            2f64.sqrt(),
            epsilon = 1e-15
        );

        let pair = one.apply_creation(m2).unwrap();
        assert_eq!(
            pair.amplitude(&Occupation::from_counts([(m, 1), (m2, 1)])),
            c(1.0, 0.0)
        );
    }

    #[test]
    fn creation_respects_cap() {
        let trunc = Truncation {
            max_photons: 1,
            ..Truncation::default()
        };
        let one = FockVector::vacuum_with(trunc)
            .apply_creation(mode(Path::A))
            .unwrap();
        assert!(matches!(
            one.apply_creation(mode(Path::A)),
            Err(Error::Capacity {
                requested: 2,
                cap: 1
            })
        ));
    }

    #[test]
    fn inner_products() {
        let a = FockVector::vacuum().apply_creation(mode(Path::A)).unwrap();
        let b = FockVector::vacuum().apply_creation(mode(Path::B)).unwrap();
        assert_eq!(a.inner_product(&b), c(0.0, 0.0));
        assert_eq!(a.inner_product(&a), c(1.0, 0.0));
        assert_eq!(FockVector::vacuum().inner_product(&a), c(0.0, 0.0));

        let mixed = a.add_scaled(&b, c(0.0, 2.0));
        assert_eq!(mixed.inner_product(&b), c(0.0, -2.0));
        assert_eq!(b.inner_product(&mixed), c(0.0, 2.0));
        assert_eq!(mixed.inner_product(&a), a.inner_product(&mixed).conj());
    }

    #[test]
    fn normalization() {
        let doubled = FockVector::vacuum().scale(c(2.0, 0.0));
        let n = doubled.normalize().unwrap();
        assert_abs_diff_eq!(n.amplitude(&Occupation::empty()).re, 1.0, epsilon = 1e-12);

        let a = FockVector::vacuum().apply_creation(mode(Path::A)).unwrap();
        let b = FockVector::vacuum().apply_creation(mode(Path::B)).unwrap();
        let sum = a.add_scaled(&b, c(1.0, 0.0)).normalize().unwrap();
        for (_, amp) in sum.iter() {
            assert_abs_diff_eq!(amp.re, FRAC_1_SQRT_2, epsilon = 1e-12);
        }
        let again = sum.normalize().unwrap();
        assert_abs_diff_eq!(again.inner_product(&sum).re, 1.0, epsilon = 1e-12);

        assert!(matches!(
            FockVector::zero(Truncation::default()).normalize(),
            Err(Error::DegenerateState)
        ));
    }

    #[test]
    fn canonical_form_is_order_independent() {
        let (x, y, z) = (mode(Path::A), mode(Path::B), mode(Path::D));
        let s1 = FockVector::vacuum()
            .apply_creation(x)
            .and_then(|s| s.apply_creation(y))
            .and_then(|s| s.apply_creation(z))
            .unwrap();
        let s2 = FockVector::vacuum()
            .apply_creation(z)
            .and_then(|s| s.apply_creation(x))
            .and_then(|s| s.apply_creation(y))
            .unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn single_photon_splits_evenly() {
        let s = FockVector::vacuum().apply_creation(mode(Path::B)).unwrap();
        let out = s.apply_mode_map(&symmetric_bs());
        let t1 = out.amplitude(&Occupation::from_counts([(mode(Path::Bsa1), 1)]));
        let t2 = out.amplitude(&Occupation::from_counts([(mode(Path::Bsa2), 1)]));
        assert_abs_diff_eq!(t1.re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(t2.im, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(t1.norm_sqr(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn hong_ou_mandel_cancellation() {
        let s = FockVector::vacuum()
            .apply_creation(mode(Path::B))
            .and_then(|s| s.apply_creation(mode(Path::C)))
            .unwrap();
        let out = s.apply_mode_map(&symmetric_bs());
        let coincidence = Occupation::from_counts([(mode(Path::Bsa1), 1), (mode(Path::Bsa2), 1)]);
        assert_eq!(out.amplitude(&coincidence), c(0.0, 0.0));
        assert_eq!(out.len(), 2);
        assert_abs_diff_eq!(out.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_photons_same_input() {
        // (b†)^2/sqrt(2) -> components |2,0>, |1,1>, |0,2> with 1/4, 1/2, 1/4
        let s = FockVector::vacuum()
            .apply_creation(mode(Path::B))
            .and_then(|s| s.apply_creation(mode(Path::B)))
            .and_then(|s| s.normalize())
            .unwrap();
        let out = s.apply_mode_map(&symmetric_bs());
        let (o1, o2) = (mode(Path::Bsa1), mode(Path::Bsa2));
        let p = |occ: Occupation| out.amplitude(&occ).norm_sqr();
        assert_abs_diff_eq!(p(Occupation::from_counts([(o1, 2)])), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(p(Occupation::from_counts([(o2, 2)])), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(
            p(Occupation::from_counts([(o1, 1), (o2, 1)])),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rejects_non_isometric_matrix() {
        let err = ModeMap::new(
            vec![mode(Path::B), mode(Path::C)],
            vec![mode(Path::Bsa1), mode(Path::Bsa2)],
            vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        );
        assert!(matches!(err, Err(Error::InvalidElement(_))));
    }

    #[test]
    fn unlisted_modes_pass_through() {
        let s = FockVector::vacuum().apply_creation(mode(Path::D)).unwrap();
        assert_eq!(s.apply_mode_map(&symmetric_bs()), s);
        assert_eq!(
            symmetric_bs().coefficient(mode(Path::D), mode(Path::D)),
            c(1.0, 0.0)
        );
    }

    #[test]
    fn composition_matches_sequential_application() {
        let bs = symmetric_bs();
        let back = ModeMap::from_images(vec![
            (mode(Path::Bsa1), vec![(mode(Path::B), c(1.0, 0.0))]),
            (mode(Path::Bsa2), vec![(mode(Path::C), c(0.0, 1.0))]),
        ])
        .unwrap();
        let s = FockVector::vacuum()
            .apply_creation(mode(Path::B))
            .and_then(|s| s.apply_creation(mode(Path::B)))
            .and_then(|s| s.apply_creation(mode(Path::C)))
            .unwrap();
        let seq = s.apply_mode_map(&bs).apply_mode_map(&back);
        let composed = s.apply_mode_map(&bs.then(&back).unwrap());
        assert_eq!(seq.len(), composed.len());
        for (occ, amp) in seq.iter() {
            assert_abs_diff_eq!((composed.amplitude(occ) - amp).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
