//! Unit-suffixed quantities at the file/CLI boundary.
//!
//! Everything inside the crate is SI (m, Pa, N, rad). Input files and flags may
//! give a bare number (taken as SI) or a string such as `"6.89 kPa"`,
//! `"33.5mm"` or `"90 deg"`; those are converted here and nowhere else.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Pressure,
    Angle,
    Force,
    Moment,
    /// Moment per unit rotation (N*m/rad).
    RotationalStiffness,
    Dimensionless,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Length => "length",
            Dimension::Pressure => "pressure",
            Dimension::Angle => "angle",
            Dimension::Force => "force",
            Dimension::Moment => "moment",
            Dimension::RotationalStiffness => "rotational stiffness",
            Dimension::Dimensionless => "dimensionless",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UnitError {
    #[error("cannot parse quantity {0:?}")]
    Malformed(String),
    #[error("unknown unit {unit:?} for {dimension}")]
    UnknownUnit { unit: String, dimension: Dimension },
    #[error("quantity {0:?} is not finite")]
    NotFinite(String),
}

fn scale(unit: &str, dimension: Dimension) -> Option<f64> {
    let s = match dimension {
        Dimension::Length => match unit {
            "m" => 1.0,
            "cm" => 1e-2,
            "mm" => 1e-3,
            "um" | "µm" => 1e-6,
            "in" => 0.0254,
            _ => return None,
        },
        Dimension::Pressure => match unit {
            "Pa" => 1.0,
            "kPa" => 1e3,
            "MPa" => 1e6,
            "psi" => 6_894.757_293_168,
            _ => return None,
        },
        Dimension::Angle => match unit {
            "rad" => 1.0,
            "deg" | "°" => PI / 180.0,
            _ => return None,
        },
        Dimension::Force => match unit {
            "N" => 1.0,
            "kN" => 1e3,
            "mN" => 1e-3,
            _ => return None,
        },
        Dimension::Moment => match unit {
            "N*m" | "N·m" | "Nm" | "N.m" => 1.0,
            "N*mm" | "N·mm" | "Nmm" => 1e-3,
            _ => return None,
        },
        Dimension::RotationalStiffness => match unit {
            "N*m/rad" | "N·m/rad" | "Nm/rad" => 1.0,
            "N*m/deg" | "N·m/deg" | "Nm/deg" => 180.0 / PI,
            _ => return None,
        },
        Dimension::Dimensionless => match unit {
            "%" => 1e-2,
            _ => return None,
        },
    };
    Some(s)
}

/// Parses `"<number>[ ]<unit>"` into SI. A bare number is already SI.
pub fn parse_quantity(text: &str, dimension: Dimension) -> Result<f64, UnitError> {
    let trimmed = text.trim();
    let split = trimmed
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E')
                    && trimmed[i + 1..]
                        .chars()
                        .next()
                        .is_some_and(|n| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map_or(trimmed.len(), |(i, _)| i);
    let (num, unit) = trimmed.split_at(split);
    let value: f64 = num.trim().parse().map_err(|_| UnitError::Malformed(text.to_owned()))?;
    let unit = unit.trim();
    let factor = if unit.is_empty() {
        1.0
    } else {
        scale(unit, dimension).ok_or_else(|| UnitError::UnknownUnit {
            unit: unit.to_owned(),
            dimension,
        })?
    };
    let si = value * factor;
    if !si.is_finite() {
        return Err(UnitError::NotFinite(text.to_owned()));
    }
    Ok(si)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawQuantity {
    Number(f64),
    Text(String),
}

fn deserialize_dim<'de, D>(deserializer: D, dimension: Dimension) -> Result<f64, D::Error>
where
    D: Deserializer<'de>,
{
    match RawQuantity::deserialize(deserializer)? {
        RawQuantity::Number(v) => Ok(v),
        RawQuantity::Text(s) => parse_quantity(&s, dimension).map_err(serde::de::Error::custom),
    }
}

/// `deserialize_with` helpers, one per dimension.
pub mod de {
    use super::{deserialize_dim, Dimension};
    use serde::{Deserialize, Deserializer};

    macro_rules! dim_fn {
        ($name:ident, $opt:ident, $dim:expr) => {
            pub fn $name<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
                deserialize_dim(d, $dim)
            }

            #[allow(dead_code)]
            pub fn $opt<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
                struct Wrap(f64);
                impl<'de> Deserialize<'de> for Wrap {
                    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                        $name(d).map(Wrap)
                    }
                }
                Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
            }
        };
    }

    dim_fn!(length, opt_length, Dimension::Length);
    dim_fn!(pressure, opt_pressure, Dimension::Pressure);
    dim_fn!(angle, opt_angle, Dimension::Angle);
    dim_fn!(force, opt_force, Dimension::Force);
    dim_fn!(moment, opt_moment, Dimension::Moment);
    dim_fn!(
        rotational_stiffness,
        opt_rotational_stiffness,
        Dimension::RotationalStiffness
    );
    dim_fn!(dimensionless, opt_dimensionless, Dimension::Dimensionless);

    pub fn angles<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(deserialize_with = "self::angle")] f64);
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }

    pub fn points<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<[f64; 2]>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(deserialize_with = "self::point")] [f64; 2]);
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }

    pub fn point<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 2], D::Error> {
        #[derive(Deserialize)]
        struct Wrap(
            #[serde(deserialize_with = "self::length")] f64,
            #[serde(deserialize_with = "self::length")] f64,
        );
        let w = Wrap::deserialize(d)?;
        Ok([w.0, w.1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn suffixes_convert_to_si() {
        assert_relative_eq!(parse_quantity("6.89 kPa", Dimension::Pressure).unwrap(), 6890.0);
        assert_relative_eq!(parse_quantity("33.5mm", Dimension::Length).unwrap(), 0.0335);
        assert_relative_eq!(parse_quantity("90 deg", Dimension::Angle).unwrap(), PI / 2.0);
        assert_relative_eq!(parse_quantity("33.3%", Dimension::Dimensionless).unwrap(), 0.333);
        assert_relative_eq!(parse_quantity("1e-3 m", Dimension::Length).unwrap(), 1e-3);
        assert_relative_eq!(parse_quantity("2.5e3Pa", Dimension::Pressure).unwrap(), 2500.0);
        assert_relative_eq!(parse_quantity("-0.5", Dimension::Angle).unwrap(), -0.5);
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let err = parse_quantity("10 mm", Dimension::Pressure).unwrap_err();
        assert!(matches!(err, UnitError::UnknownUnit { .. }));
        assert!(parse_quantity("abc", Dimension::Length).is_err());
        assert!(parse_quantity("1e400", Dimension::Length).is_err());
    }

    #[test]
    fn serde_accepts_numbers_and_strings() {
        #[derive(serde::Deserialize)]
        struct S {
            #[serde(deserialize_with = "de::pressure")]
            p: f64,
            #[serde(deserialize_with = "de::angles")]
            a: Vec<f64>,
        }
        let s: S = serde_json::from_str(r#"{"p": "1 kPa", "a": [0.5, "180 deg"]}"#).unwrap();
        assert_eq!(s.p, 1000.0);
        assert_relative_eq!(s.a[1], PI);
    }
}
