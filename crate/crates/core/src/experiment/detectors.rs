use std::fmt;

use crate::fock::Path;

/// The eight threshold detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DetectorId {
    APlus,
    AMinus,
    DPlus,
    DMinus,
    D1H,
    D1V,
    D2H,
    D2V,
}

impl DetectorId {
    pub const ALL: [DetectorId; 8] = [
        DetectorId::APlus,
        DetectorId::AMinus,
        DetectorId::DPlus,
        DetectorId::DMinus,
        DetectorId::D1H,
        DetectorId::D1V,
        DetectorId::D2H,
        DetectorId::D2V,
    ];

    pub const BSA: [DetectorId; 4] = [
        DetectorId::D1H,
        DetectorId::D1V,
        DetectorId::D2H,
        DetectorId::D2V,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn path(self) -> Path {
        match self {
            DetectorId::APlus => Path::APlus,
            DetectorId::AMinus => Path::AMinus,
            DetectorId::DPlus => Path::DPlus,
            DetectorId::DMinus => Path::DMinus,
            DetectorId::D1H => Path::D1H,
            DetectorId::D1V => Path::D1V,
            DetectorId::D2H => Path::D2H,
            DetectorId::D2V => Path::D2V,
        }
    }

    /// Loss channel in front of this detector.
    pub fn loss_path(self) -> Path {
        Path::Loss(self as u8)
    }

    pub fn name(self) -> &'static str {
        match self {
            DetectorId::APlus => "A+",
            DetectorId::AMinus => "A-",
            DetectorId::DPlus => "D+",
            DetectorId::DMinus => "D-",
            DetectorId::D1H => "D1H",
            DetectorId::D1V => "D1V",
            DetectorId::D2H => "D2H",
            DetectorId::D2V => "D2V",
        }
    }

    pub fn from_path(path: Path) -> Option<DetectorId> {
        DetectorId::ALL.into_iter().find(|d| d.path() == path)
    }
}

/// Set of detectors that fired in one event window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClickPattern(u8);

impl ClickPattern {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn of(detectors: &[DetectorId]) -> Self {
        detectors.iter().fold(Self(0), |p, &d| p.with(d))
    }

    pub fn with(self, d: DetectorId) -> Self {
        Self(self.0 | (1 << d.index()))
    }

    pub fn contains(self, d: DetectorId) -> bool {
        self.0 & (1 << d.index()) != 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = DetectorId> {
        DetectorId::ALL
            .into_iter()
            .filter(move |&d| self.contains(d))
    }

    /// Only the Bell-state-analyzer detectors of this pattern.
    pub fn bsa_part(self) -> Self {
        Self(self.0 & 0b1111_0000)
    }

    pub fn bits(self) -> u8 {
        self.0
    }
}

impl fmt::Display for ClickPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(DetectorId::name).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellClass {
    PsiMinus,
    PsiPlus,
}

impl BellClass {
    pub const BOTH: [BellClass; 2] = [BellClass::PsiMinus, BellClass::PsiPlus];

    pub fn name(self) -> &'static str {
        match self {
            BellClass::PsiMinus => "psi_minus",
            BellClass::PsiPlus => "psi_plus",
        }
    }

    /// Reads the Bell-state analyzer pair of a pattern. Ψ⁻ is one click in
    /// each beam-splitter arm with opposite polarizations; Ψ⁺ is two clicks in
    /// one arm with opposite polarizations. Anything else is `None`.
    pub fn from_bsa(pattern: ClickPattern) -> Option<BellClass> {
        use DetectorId::*;
        let bsa = pattern.bsa_part();
        if bsa == ClickPattern::of(&[D1H, D2V]) || bsa == ClickPattern::of(&[D1V, D2H]) {
            Some(BellClass::PsiMinus)
        } else if bsa == ClickPattern::of(&[D1H, D1V]) || bsa == ClickPattern::of(&[D2H, D2V]) {
            Some(BellClass::PsiPlus)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Bell outcome of the inner photons plus the analyzer outputs of a and d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FourfoldClass {
    pub bell: BellClass,
    pub a_out: Sign,
    pub d_out: Sign,
}

impl FourfoldClass {
    pub const fn new(bell: BellClass, a_out: Sign, d_out: Sign) -> Self {
        Self { bell, a_out, d_out }
    }

    pub const ALL: [FourfoldClass; 8] = {
        use BellClass::*;
        use Sign::*;
        [
            FourfoldClass::new(PsiMinus, Plus, Plus),
            FourfoldClass::new(PsiMinus, Plus, Minus),
            FourfoldClass::new(PsiMinus, Minus, Plus),
            FourfoldClass::new(PsiMinus, Minus, Minus),
            FourfoldClass::new(PsiPlus, Plus, Plus),
            FourfoldClass::new(PsiPlus, Plus, Minus),
            FourfoldClass::new(PsiPlus, Minus, Plus),
            FourfoldClass::new(PsiPlus, Minus, Minus),
        ]
    };

    pub fn index(self) -> usize {
        let bell = match self.bell {
            BellClass::PsiMinus => 0,
            BellClass::PsiPlus => 4,
        };
        let a = if self.a_out == Sign::Plus { 0 } else { 2 };
        let d = if self.d_out == Sign::Plus { 0 } else { 1 };
        bell + a + d
    }
}

/// Four-fold coincidence logic. Accepts exactly four clicks: one a-side, one
/// d-side and a Bell-state-analyzer pair. `None` means reject.
pub fn classify(pattern: ClickPattern) -> Option<FourfoldClass> {
    use DetectorId::*;
    if pattern.len() != 4 {
        return None;
    }
    let a_out = match (pattern.contains(APlus), pattern.contains(AMinus)) {
        (true, false) => Sign::Plus,
        (false, true) => Sign::Minus,
        _ => return None,
    };
    let d_out = match (pattern.contains(DPlus), pattern.contains(DMinus)) {
        (true, false) => Sign::Plus,
        (false, true) => Sign::Minus,
        _ => return None,
    };
    let bell = BellClass::from_bsa(pattern)?;
    Some(FourfoldClass::new(bell, a_out, d_out))
}
