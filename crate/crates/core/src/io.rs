//! Spec documents and CSV tables.
//!
//! A spec document is a JSON object with a `schema_version` and named
//! collections of sections, joints, routes, chains, design problems and
//! measurements. See `docs/schema.md` for the field reference.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainSpec, Frame};
use crate::joint::JointSpec;
use crate::reduce::MeasuredCurve;
use crate::search::DesignProblem;
use crate::section::SectionSpec;
use crate::tendon::{BuckleThreshold, SweepEntry, TendonRoute};
use crate::units::de;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sections: BTreeMap<String, SectionSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub joints: BTreeMap<String, JointSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub routes: BTreeMap<String, TendonRoute>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub chains: BTreeMap<String, ChainSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub problems: BTreeMap<String, DesignProblem>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub measurements: BTreeMap<String, Vec<Measurement>>,
}

impl Default for SpecDocument {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            sections: BTreeMap::new(),
            joints: BTreeMap::new(),
            routes: BTreeMap::new(),
            chains: BTreeMap::new(),
            problems: BTreeMap::new(),
            measurements: BTreeMap::new(),
        }
    }
}

/// One measured curve, optionally tagged with its inflation pressure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Measurement {
    #[serde(
        default,
        deserialize_with = "de::opt_pressure",
        skip_serializing_if = "Option::is_none"
    )]
    pub pressure: Option<f64>,
    pub curve: MeasuredCurve,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version {found}, expected {SCHEMA_VERSION}")]
    Version { found: u32 },
    #[error("no {kind} named {name:?}; available: {available}")]
    Missing {
        kind: &'static str,
        name: String,
        available: String,
    },
    #[error("{kind}: {count} entries, pick one by name")]
    Ambiguous { kind: &'static str, count: usize },
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        #[derive(Deserialize)]
        struct Version {
            schema_version: u32,
        }
        let v: Version = serde_json::from_str(text)?;
        if v.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Version {
                found: v.schema_version,
            });
        }
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec documents serialize")
    }
}

/// Entry `name` of `map`, or its only entry when `name` is `None`.
pub fn select<'a, T>(
    map: &'a BTreeMap<String, T>,
    kind: &'static str,
    name: Option<&str>,
) -> Result<(&'a str, &'a T), DocumentError> {
    match name {
        Some(n) => map
            .get_key_value(n)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| DocumentError::Missing {
                kind,
                name: n.to_owned(),
                available: map.keys().cloned().collect::<Vec<_>>().join(", "),
            }),
        None if map.len() == 1 => {
            let (k, v) = map.iter().next().expect("one entry");
            Ok((k.as_str(), v))
        }
        None if map.is_empty() => Err(DocumentError::Missing {
            kind,
            name: String::new(),
            available: String::new(),
        }),
        None => Err(DocumentError::Ambiguous { kind, count: map.len() }),
    }
}

pub fn write_curve_csv<W: Write>(out: W, points: &[(f64, f64)]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["angle_rad", "moment_nm"])?;
    for &(a, m) in points {
        w.serialize((a, m))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(out: W, entries: &[SweepEntry]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "top_angle_rad",
        "bottom_angle_rad",
        "lever_soft_m",
        "lever_stiff_m",
        "reachable",
        "tension_n",
        "direction_rad",
    ])?;
    for e in entries {
        let (reachable, tension, direction) = match e.threshold {
            BuckleThreshold::Reachable { tension, direction } => (true, Some(tension), Some(direction.psi())),
            BuckleThreshold::Unreachable => (false, None, None),
        };
        w.serialize((
            e.top_angle,
            e.bottom_angle,
            e.lever.soft,
            e.lever.stiff,
            reachable,
            tension,
            direction,
        ))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_frames_csv<W: Write>(out: W, frames: &[Frame]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "x", "y", "z", "qw", "qx", "qy", "qz"])?;
    for (i, f) in frames.iter().enumerate() {
        let [x, y, z] = f.position;
        let [qw, qx, qy, qz] = f.quaternion;
        w.serialize((i, x, y, z, qw, qx, qy, qz))?;
    }
    w.flush()?;
    Ok(())
}
