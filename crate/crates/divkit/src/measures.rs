//! Measure identifiers, canonical chain coefficients, and the stable name
//! registry used by the CLI and report formats.

use std::fmt;
use thiserror::Error;

/// The eight measures of the base inequality chain, in chain order:
/// `(1/4)Delta <= I <= h <= (1/8)J <= T <= (1/8)K0 <= (1/16)Psi <= (1/16)F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseId {
    Delta,
    I,
    Hellinger,
    J,
    T,
    K0,
    Psi,
    F,
}

pub const BASE_CHAIN: [BaseId; 8] = [
    BaseId::Delta,
    BaseId::I,
    BaseId::Hellinger,
    BaseId::J,
    BaseId::T,
    BaseId::K0,
    BaseId::Psi,
    BaseId::F,
];

/// Exact positive rational, used for chain coefficients so reports can print
/// them losslessly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub num: u32,
    pub den: u32,
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub const fn new(num: u32, den: u32) -> Self {
        Ratio { num, den }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl BaseId {
    /// Position in the base chain (0 = leftmost / smallest).
    pub fn chain_pos(self) -> usize {
        BASE_CHAIN.iter().position(|&b| b == self).unwrap()
    }

    /// The coefficient the measure carries inside the base chain.
    pub fn chain_coeff(self) -> Ratio {
        match self {
            BaseId::Delta => Ratio::new(1, 4),
            BaseId::I => Ratio::ONE,
            BaseId::Hellinger => Ratio::ONE,
            BaseId::J => Ratio::new(1, 8),
            BaseId::T => Ratio::ONE,
            BaseId::K0 => Ratio::new(1, 8),
            BaseId::Psi => Ratio::new(1, 16),
            BaseId::F => Ratio::new(1, 16),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseId::Delta => "delta",
            BaseId::I => "i",
            BaseId::Hellinger => "hellinger",
            BaseId::J => "j",
            BaseId::T => "t",
            BaseId::K0 => "k0",
            BaseId::Psi => "psi",
            BaseId::F => "f",
        }
    }

    /// Short token used inside difference names ("d:k0-h").
    fn short(self) -> &'static str {
        match self {
            BaseId::Hellinger => "h",
            other => other.name(),
        }
    }
}

/// A base chain member together with its canonical chain coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightedId {
    pub id: BaseId,
    pub coeff: Ratio,
}

impl WeightedId {
    /// The canonical chain weighting of a base measure.
    pub fn canonical(id: BaseId) -> Self {
        WeightedId {
            id,
            coeff: id.chain_coeff(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeasureError {
    #[error("unknown measure id `{0}`")]
    UnknownId(String),
    #[error("`{0}`/`{1}` is not an ordered pair of the base chain")]
    InvalidPair(&'static str, &'static str),
    #[error("gap index {0} out of range (1..=15)")]
    IndexOutOfRange(u8),
}

/// Identifier of a catalog measure.
///
/// `Diff(a, b)` is the nonnegative difference `c_a*M_a - c_b*M_b` of two
/// canonically weighted base-chain members with `a` to the right of `b`.
/// `L(k)` enumerates the fifteen pairwise gaps of the six-member difference
/// chain; `Lv(k)` is the variant of `L(k)` built from the unit-coefficient
/// nodes `D_{psi,k0}` and `D_{f,k0}` (the form the sharp `L`-gap constants
/// are stated for).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureId {
    Base(BaseId),
    /// `K_t`: `sum (p-q)^{2(t+1)} / (pq)^{(2t+1)/2}`.
    Kt(u32),
    /// `B_1`..`B_6`.
    B(u8),
    /// Exponential divergence, the closed form of `sum_t K_t / t!`.
    ExpK,
    Diff(BaseId, BaseId),
    L(u8),
    Lv(u8),
}

pub const LV_INDICES: [u8; 7] = [7, 8, 9, 12, 13, 14, 15];

impl MeasureId {
    /// Validated constructor for a chain-ordered difference.
    pub fn diff(right: BaseId, left: BaseId) -> Result<Self, MeasureError> {
        if right.chain_pos() > left.chain_pos() {
            Ok(MeasureId::Diff(right, left))
        } else {
            Err(MeasureError::InvalidPair(right.name(), left.name()))
        }
    }

    pub fn l(k: u8) -> Result<Self, MeasureError> {
        if (1..=15).contains(&k) {
            Ok(MeasureId::L(k))
        } else {
            Err(MeasureError::IndexOutOfRange(k))
        }
    }

    pub fn lv(k: u8) -> Result<Self, MeasureError> {
        if LV_INDICES.contains(&k) {
            Ok(MeasureId::Lv(k))
        } else {
            Err(MeasureError::IndexOutOfRange(k))
        }
    }

    /// Stable registry name ("delta", "k_t:2", "d:k0-h", "l:7", ...).
    pub fn name(&self) -> String {
        match self {
            MeasureId::Base(b) => b.name().to_string(),
            MeasureId::Kt(t) => format!("k_t:{t}"),
            MeasureId::B(i) => format!("b{i}"),
            MeasureId::ExpK => "exp_k".to_string(),
            MeasureId::Diff(a, b) => format!("d:{}-{}", a.short(), b.short()),
            MeasureId::L(k) => format!("l:{k}"),
            MeasureId::Lv(k) => format!("lv:{k}"),
        }
    }

    /// Parse a registry name.
    pub fn parse(name: &str) -> Result<Self, MeasureError> {
        let unknown = || MeasureError::UnknownId(name.to_string());
        let base = |s: &str| -> Option<BaseId> {
            BASE_CHAIN.iter().copied().find(|b| b.short() == s || b.name() == s)
        };
        if let Some(b) = base(name) {
            return Ok(MeasureId::Base(b));
        }
        if let Some(t) = name.strip_prefix("k_t:") {
            return t.parse::<u32>().map(MeasureId::Kt).map_err(|_| unknown());
        }
        if let Some(i) = name.strip_prefix('b') {
            if let Ok(i) = i.parse::<u8>() {
                if (1..=6).contains(&i) {
                    return Ok(MeasureId::B(i));
                }
            }
        }
        if name == "exp_k" {
            return Ok(MeasureId::ExpK);
        }
        if let Some(pair) = name.strip_prefix("d:") {
            let (a, b) = pair.split_once('-').ok_or_else(unknown)?;
            let (a, b) = (base(a).ok_or_else(unknown)?, base(b).ok_or_else(unknown)?);
            return MeasureId::diff(a, b);
        }
        if let Some(k) = name.strip_prefix("l:") {
            let k = k.parse::<u8>().map_err(|_| unknown())?;
            return MeasureId::l(k);
        }
        if let Some(k) = name.strip_prefix("lv:") {
            let k = k.parse::<u8>().map_err(|_| unknown())?;
            return MeasureId::lv(k);
        }
        Err(unknown())
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// All chain-ordered difference pairs, left-to-right by the position of the
/// larger member (28 in total).
pub fn all_diff_pairs() -> Vec<(BaseId, BaseId)> {
    let mut out = Vec::with_capacity(28);
    for (i, &a) in BASE_CHAIN.iter().enumerate() {
        for &b in &BASE_CHAIN[..i] {
            out.push((a, b));
        }
    }
    out
}

/// The full catalog in fixed registry order: bases, `K_t` for `t <= 5`, `B`s,
/// the exponential divergence, all 28 differences, the 15 gaps, and the 7
/// gap variants.
pub fn catalog() -> Vec<MeasureId> {
    let mut out: Vec<MeasureId> = BASE_CHAIN.iter().map(|&b| MeasureId::Base(b)).collect();
    out.extend((0..=5).map(MeasureId::Kt));
    out.extend((1..=6).map(MeasureId::B));
    out.push(MeasureId::ExpK);
    out.extend(all_diff_pairs().into_iter().map(|(a, b)| MeasureId::Diff(a, b)));
    out.extend((1..=15).map(MeasureId::L));
    out.extend(LV_INDICES.iter().map(|&k| MeasureId::Lv(k)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in catalog() {
            assert_eq!(MeasureId::parse(&id.name()).unwrap(), id, "{}", id.name());
        }
    }

    #[test]
    fn diff_requires_chain_order() {
        assert!(MeasureId::diff(BaseId::K0, BaseId::Hellinger).is_ok());
        assert_eq!(
            MeasureId::diff(BaseId::Hellinger, BaseId::K0),
            Err(MeasureError::InvalidPair("hellinger", "k0"))
        );
    }

    #[test]
    fn catalog_size() {
        assert_eq!(catalog().len(), 8 + 6 + 6 + 1 + 28 + 15 + 7);
    }

    #[test]
    fn rejects_unknown_names() {
        for bad in ["", "kl", "d:h-k0", "l:0", "l:16", "lv:10", "b7", "k_t:x"] {
            assert!(MeasureId::parse(bad).is_err(), "{bad}");
        }
    }
}
