use serde::{Deserialize, Serialize};

use crate::color::Rgb;

use super::OpticsError;

/// Crown glass index used for the orb.
pub const GLASS_IOR: f64 = 1.51714;

/// How the tint attenuates light that crosses the glass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TintMode {
    /// `tint` is multiplied in at every boundary crossing.
    #[default]
    PerCrossing,
    /// `exp(-absorption_per_cm * length)` along paths inside glass.
    PerLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DielectricSpec {
    pub ior: f64,
    pub tint: Rgb,
    pub tint_mode: TintMode,
    pub absorption_per_cm: Rgb,
}

impl Default for DielectricSpec {
    fn default() -> Self {
        DielectricSpec::clear(GLASS_IOR)
    }
}

impl DielectricSpec {
    pub fn clear(ior: f64) -> Self {
        DielectricSpec {
            ior,
            tint: Rgb::WHITE,
            tint_mode: TintMode::PerCrossing,
            absorption_per_cm: Rgb::BLACK,
        }
    }

    pub fn validate(&self) -> Result<(), OpticsError> {
        if !(self.ior > 1.0 && self.ior <= 3.0) {
            return Err(OpticsError::InvalidIor(self.ior));
        }
        for c in self.tint.channels() {
            if !(0.0..=1.0).contains(&c) {
                return Err(OpticsError::InvalidTint(c));
            }
        }
        for c in self.absorption_per_cm.channels() {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(OpticsError::InvalidAbsorption(c));
            }
        }
        Ok(())
    }

    /// Attenuation for one boundary crossing.
    pub fn crossing_tint(&self) -> Rgb {
        match self.tint_mode {
            TintMode::PerCrossing => self.tint,
            TintMode::PerLength => Rgb::WHITE,
        }
    }

    /// Attenuation for a segment of `length_cm` inside the glass.
    pub fn path_tint(&self, length_cm: f64) -> Rgb {
        match self.tint_mode {
            TintMode::PerCrossing => Rgb::WHITE,
            TintMode::PerLength => self.absorption_per_cm.map(|a| (-a * length_cm).exp()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalciteSpec {
    pub ior_ordinary: f64,
    pub ior_extraordinary: f64,
}

impl Default for CalciteSpec {
    fn default() -> Self {
        CalciteSpec {
            ior_ordinary: 1.658,
            ior_extraordinary: 1.486,
        }
    }
}

impl CalciteSpec {
    pub fn validate(&self) -> Result<(), OpticsError> {
        let (o, e) = (self.ior_ordinary, self.ior_extraordinary);
        if !(o >= e && e > 1.0 && o <= 3.0) {
            return Err(OpticsError::InvalidCalcite {
                ordinary: o,
                extraordinary: e,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        DielectricSpec::default().validate().unwrap();
        CalciteSpec::default().validate().unwrap();
    }

    #[test]
    fn out_of_range_values_rejected() {
        assert!(DielectricSpec::clear(1.0).validate().is_err());
        assert!(DielectricSpec::clear(3.5).validate().is_err());
        let d = DielectricSpec {
            tint: Rgb::new(1.2, 1.0, 1.0),
            ..DielectricSpec::default()
        };
        assert!(d.validate().is_err());
        let c = CalciteSpec {
            ior_ordinary: 1.4,
            ior_extraordinary: 1.5,
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn per_length_tint_decays() {
        let d = DielectricSpec {
            tint_mode: TintMode::PerLength,
            absorption_per_cm: Rgb::gray(0.5),
            ..DielectricSpec::default()
        };
        assert!((d.path_tint(2.0).r - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(d.crossing_tint(), Rgb::WHITE);
    }
}
