use crate::error::{Error, Result};
use crate::greens::{SegmentParams, SphereParams};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The six model variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Chain, segments attached at antipodal points (I).
    LooseStraight,
    /// Chain, segments attached at points a quarter circle apart (II).
    LooseZigzag,
    /// Chain, spheres touching at antipodal points (III).
    TightStraight,
    /// Chain, spheres touching at points a quarter circle apart (IV).
    TightZigzag,
    /// Square lattice, segments at four equatorial points (V).
    LooseCarpet,
    /// Square lattice, spheres touching at four equatorial points (VI).
    TightCarpet,
}

/// Which off-diagonal sphere entry couples the two junctions of a chain cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Junction {
    /// Junctions a quarter circle apart (entry index j = 2).
    Quarter,
    /// Antipodal junctions (entry index j = 3).
    Antipodal,
}

/// Asymptotic regime of the band-localization thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Threshold k^{−ε}.
    Loose,
    /// Threshold (ln k)^{−ε}.
    Tight,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::LooseStraight,
        ModelKind::LooseZigzag,
        ModelKind::TightStraight,
        ModelKind::TightZigzag,
        ModelKind::LooseCarpet,
        ModelKind::TightCarpet,
    ];

    pub fn roman(self) -> &'static str {
        match self {
            ModelKind::LooseStraight => "I",
            ModelKind::LooseZigzag => "II",
            ModelKind::TightStraight => "III",
            ModelKind::TightZigzag => "IV",
            ModelKind::LooseCarpet => "V",
            ModelKind::TightCarpet => "VI",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::LooseStraight => "loose-straight",
            ModelKind::LooseZigzag => "loose-zigzag",
            ModelKind::TightStraight => "tight-straight",
            ModelKind::TightZigzag => "tight-zigzag",
            ModelKind::LooseCarpet => "loose-carpet",
            ModelKind::TightCarpet => "tight-carpet",
        }
    }

    pub fn has_segments(self) -> bool {
        matches!(
            self,
            ModelKind::LooseStraight | ModelKind::LooseZigzag | ModelKind::LooseCarpet
        )
    }

    pub fn is_carpet(self) -> bool {
        matches!(self, ModelKind::LooseCarpet | ModelKind::TightCarpet)
    }

    pub fn regime(self) -> Regime {
        if self.has_segments() {
            Regime::Loose
        } else {
            Regime::Tight
        }
    }

    /// Coupling entry of a chain cell; `None` for carpets.
    pub fn junction(self) -> Option<Junction> {
        match self {
            ModelKind::LooseStraight | ModelKind::TightStraight => Some(Junction::Antipodal),
            ModelKind::LooseZigzag | ModelKind::TightZigzag => Some(Junction::Quarter),
            _ => None,
        }
    }

    pub fn default_epsilon(self) -> f64 {
        match self {
            ModelKind::LooseCarpet => 0.2,
            ModelKind::LooseStraight | ModelKind::LooseZigzag => 0.3,
            _ => 0.5,
        }
    }

    /// Open interval of admissible ε.
    pub fn epsilon_bounds(self) -> (f64, f64) {
        match self {
            ModelKind::LooseCarpet => (0.0, 0.25),
            ModelKind::LooseStraight | ModelKind::LooseZigzag => (0.0, 0.5),
            _ => (0.0, 1.0),
        }
    }

    pub fn check_epsilon(self, epsilon: f64) -> Result<()> {
        let (lo, hi) = self.epsilon_bounds();
        if epsilon > lo && epsilon < hi {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "epsilon = {epsilon} outside ({lo}, {hi}) for model {}",
                self.name()
            )))
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == lower || m.roman().eq_ignore_ascii_case(&lower))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown model `{s}`")))
    }
}

/// Physical parameters of one periodic system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub kind: ModelKind,
    /// Sphere radius.
    pub a: f64,
    /// Segment length; unused by the tight variants.
    pub d: f64,
    /// Junction coupling strength.
    pub alpha: f64,
}

impl ModelParams {
    /// Validated constructor; `d` is ignored for tight variants.
    pub fn new(kind: ModelKind, a: f64, d: f64, alpha: f64) -> Result<Self> {
        SphereParams::new(a)?;
        if kind.has_segments() {
            SegmentParams::new(d)?;
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} must be non-negative"
            )));
        }
        Ok(Self { kind, a, d, alpha })
    }

    pub fn sphere(&self) -> SphereParams {
        SphereParams { a: self.a }
    }

    pub fn segment(&self) -> SegmentParams {
        SegmentParams { d: self.d }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names_and_numerals() {
        for m in ModelKind::ALL {
            assert_eq!(m.name().parse::<ModelKind>().unwrap(), m);
            assert_eq!(m.roman().parse::<ModelKind>().unwrap(), m);
        }
        assert_eq!("iv".parse::<ModelKind>().unwrap(), ModelKind::TightZigzag);
        assert!("VII".parse::<ModelKind>().is_err());
    }

    #[test]
    fn epsilon_bounds_per_regime() {
        assert!(ModelKind::LooseCarpet.check_epsilon(0.2).is_ok());
        assert!(ModelKind::LooseCarpet.check_epsilon(0.3).is_err());
        assert!(ModelKind::LooseStraight.check_epsilon(0.49).is_ok());
        assert!(ModelKind::TightStraight.check_epsilon(0.9).is_ok());
        assert!(ModelKind::TightStraight.check_epsilon(0.0).is_err());
    }

    #[test]
    fn parameters_validated() {
        assert!(ModelParams::new(ModelKind::LooseStraight, 1.0, 0.0, 1.0).is_err());
        assert!(ModelParams::new(ModelKind::TightStraight, 1.0, 0.0, 1.0).is_ok());
        assert!(ModelParams::new(ModelKind::TightStraight, -1.0, 0.0, 1.0).is_err());
        assert!(ModelParams::new(ModelKind::TightStraight, 1.0, 0.0, -1.0).is_err());
    }
}
