//! A complete joint: section, length, rotation limit, directional strength and
//! moment-rotation law.
//!
//! Joint-local section coordinates: `y` points toward the enforced-wrinkle
//! side (the soft bending plane), `x` completes a right-handed frame with the
//! joint axis `z`. A [`BendingDirection`] `psi` is the direction the joint tip
//! deflects, measured counter-clockwise from `+y`; its unit vector is
//! `(-sin psi, cos psi)`. `psi = 0` bends in the soft plane, `psi = pi/2` in the
//! stiff plane.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Module, Result};
use crate::section::SectionSpec;
use crate::units::de;

/// Tip deflection direction in joint-local section coordinates, normalised to
/// `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BendingDirection(f64);

impl BendingDirection {
    pub const SOFT: Self = Self(0.0);
    pub const STIFF: Self = Self(0.5 * PI);

    pub fn new(psi: f64) -> Self {
        // + 0.0 folds -0.0 into 0.0
        let mut p = psi.rem_euclid(TAU) + 0.0;
        if p >= TAU {
            p = 0.0;
        }
        Self(p)
    }

    pub fn psi(self) -> f64 {
        self.0
    }

    /// Unit deflection vector `(x, y)`.
    pub fn unit_vector(self) -> [f64; 2] {
        let (s, c) = self.0.sin_cos();
        [-s, c]
    }

    /// Direction of an in-plane vector, `None` for the zero vector.
    pub fn from_vector(v: [f64; 2]) -> Option<Self> {
        if v[0] == 0.0 && v[1] == 0.0 {
            return None;
        }
        Some(Self::new((-v[0]).atan2(v[1])))
    }

    /// Smallest angle between the two directions, in `[0, pi]`.
    pub fn angle_to(self, other: Self) -> f64 {
        let d = (self.0 - other.0).rem_euclid(TAU);
        d.min(TAU - d)
    }

    /// Angle between this direction's bending plane and the soft plane, in
    /// `[0, pi/2]`.
    pub fn offset_from_soft_plane(self) -> f64 {
        let d = self.0.rem_euclid(PI);
        d.min(PI - d)
    }

    /// Same direction seen from a frame rotated by `angle` about the joint axis.
    pub fn rotated(self, angle: f64) -> Self {
        Self::new(self.0 + angle)
    }
}

impl Serialize for BendingDirection {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for BendingDirection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        de::angle(d).map(Self::new)
    }
}

/// Normalised strength of the tensioned set against bending toward `psi`: the
/// largest distance, in units of `R`, of tensioned film from the neutral axis
/// on the tension side.
///
/// Film at section angle `theta` on half `s = ±1` sits at
/// `(s sin theta, cos theta)`; its tension-side distance for deflection `psi`
/// is `-cos(theta + s psi)`.
pub fn section_reach(theta1: f64, theta2: f64, psi: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for s in [1.0, -1.0] {
        let a = theta1 + s * psi;
        let b = theta2 + s * psi;
        // -cos peaks at pi + 2k pi
        let k = ((a - PI) / TAU).ceil();
        if PI + k * TAU <= b {
            return 1.0;
        }
        best = best.max(-a.cos()).max(-b.cos());
    }
    best
}

/// Full description of one inflated rotational joint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint")]
pub struct JointSpec {
    pub section: SectionSpec,
    /// Length between the rigid end plates (m).
    pub length: f64,
    /// Surface strain of the enforced wrinkles (fraction of length).
    pub wrinkle_strain: f64,
    /// Initial slope of the moment-rotation law (N*m/rad).
    pub elastic_slope: f64,
    /// Rotation at which the directional maximum moment is reached (rad).
    pub plateau_onset_angle: f64,
    /// Rotation of the soft plane about the chain axis relative to the
    /// mounting plate (rad).
    pub mount_rotation: f64,
    /// Explicit rotation limit, replacing `wrinkle_strain * length / radius`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation_limit: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    section: SectionSpec,
    #[serde(deserialize_with = "de::length")]
    length: f64,
    #[serde(deserialize_with = "de::dimensionless")]
    wrinkle_strain: f64,
    #[serde(default, deserialize_with = "de::opt_rotational_stiffness")]
    elastic_slope: Option<f64>,
    #[serde(default, deserialize_with = "de::opt_angle")]
    plateau_onset_angle: Option<f64>,
    #[serde(default, deserialize_with = "de::opt_angle")]
    mount_rotation: Option<f64>,
    #[serde(default, deserialize_with = "de::opt_angle")]
    rotation_limit: Option<f64>,
}

impl TryFrom<RawJoint> for JointSpec {
    type Error = Error;

    fn try_from(raw: RawJoint) -> Result<Self> {
        let mut joint = Self::with_default_law(raw.section, raw.length, raw.wrinkle_strain, raw.rotation_limit)?;
        if let Some(a) = raw.plateau_onset_angle {
            joint.plateau_onset_angle = a;
            if raw.elastic_slope.is_none() {
                joint.elastic_slope = joint.default_slope();
            }
        }
        if let Some(k) = raw.elastic_slope {
            joint.elastic_slope = k;
        }
        joint.mount_rotation = raw.mount_rotation.unwrap_or(0.0);
        joint.validate()?;
        Ok(joint)
    }
}

impl JointSpec {
    pub fn new(
        section: SectionSpec,
        length: f64,
        wrinkle_strain: f64,
        elastic_slope: f64,
        plateau_onset_angle: f64,
    ) -> Result<Self> {
        let joint = Self {
            section,
            length,
            wrinkle_strain,
            elastic_slope,
            plateau_onset_angle,
            mount_rotation: 0.0,
            rotation_limit: None,
        };
        joint.validate()?;
        Ok(joint)
    }

    /// Joint with the default moment-rotation parameters: plateau reached at
    /// half the rotation limit, and an elastic slope that would reach the
    /// soft-plane maximum at half the plateau angle.
    pub fn with_default_law(
        section: SectionSpec,
        length: f64,
        wrinkle_strain: f64,
        rotation_limit: Option<f64>,
    ) -> Result<Self> {
        let mut joint = Self {
            section,
            length,
            wrinkle_strain,
            elastic_slope: 1.0,
            plateau_onset_angle: 0.0,
            mount_rotation: 0.0,
            rotation_limit,
        };
        joint.plateau_onset_angle = 0.5 * joint.rotation_limit();
        joint.elastic_slope = joint.default_slope();
        joint.validate()?;
        Ok(joint)
    }

    fn default_slope(&self) -> f64 {
        2.0 * self.section.max_restoring_moment() / self.plateau_onset_angle
    }

    pub fn with_mount_rotation(mut self, mount_rotation: f64) -> Result<Self> {
        self.mount_rotation = mount_rotation;
        self.validate()?;
        Ok(self)
    }

    pub fn with_rotation_limit(mut self, limit: f64) -> Result<Self> {
        self.rotation_limit = Some(limit);
        self.validate()?;
        Ok(self)
    }

    /// Same joint at another pressure. The elastic slope is scaled with the
    /// pressure so the whole moment-rotation law scales linearly.
    pub fn with_pressure(&self, pressure: f64) -> Result<Self> {
        let section = self.section.with_pressure(pressure)?;
        let mut joint = *self;
        joint.elastic_slope *= pressure / self.section.pressure;
        joint.section = section;
        joint.validate()?;
        Ok(joint)
    }

    pub fn validate(&self) -> Result<()> {
        let m = Module::Joint;
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::domain(m, "length", self.length, "(0, inf)"));
        }
        if !(self.wrinkle_strain.is_finite() && (0.0..1.0).contains(&self.wrinkle_strain)) {
            return Err(Error::domain(m, "wrinkle_strain", self.wrinkle_strain, "[0, 1)"));
        }
        if !(self.elastic_slope.is_finite() && self.elastic_slope > 0.0) {
            return Err(Error::domain(m, "elastic_slope", self.elastic_slope, "(0, inf)"));
        }
        if !self.mount_rotation.is_finite() {
            return Err(Error::domain(m, "mount_rotation", self.mount_rotation, "finite"));
        }
        if let Some(l) = self.rotation_limit {
            if !(l.is_finite() && l > 0.0 && l <= PI) {
                return Err(Error::domain(m, "rotation_limit", l, "(0, pi]"));
            }
        }
        let limit = self.rotation_limit();
        if !(self.plateau_onset_angle > 0.0 && self.plateau_onset_angle < limit) {
            return Err(Error::domain(
                m,
                "plateau_onset_angle",
                self.plateau_onset_angle,
                &format!("(0, rotation_limit = {limit})"),
            ));
        }
        // The band must straddle the section side, otherwise some bending
        // direction has no restoring capacity at all.
        let s = &self.section;
        if !(s.theta1 < 0.5 * PI && s.theta2 > 0.5 * PI) {
            return Err(Error::invalid(
                m,
                format!("tensioned band [{}, {}] must contain pi/2", s.theta1, s.theta2),
            ));
        }
        Ok(())
    }

    /// Rotation at which the enforced-wrinkle side's excess material runs out:
    /// `wrinkle_strain * length / radius`, unless set explicitly.
    pub fn rotation_limit(&self) -> f64 {
        self.rotation_limit
            .unwrap_or(self.wrinkle_strain * self.length / self.section.radius)
    }

    /// Maximum restoring moment against deflection toward `dir` (N*m).
    pub fn directional_max_moment(&self, dir: BendingDirection) -> f64 {
        self.section.moment_unit() * section_reach(self.section.theta1, self.section.theta2, dir.psi())
    }

    /// Moment at which wrinkling starts beyond the enforced band for
    /// deflection toward `dir`: the directional maximum scaled by the
    /// section's soft-plane onset-to-maximum ratio.
    pub fn directional_onset_moment(&self, dir: BendingDirection) -> f64 {
        let ratio = self.section.wrinkle_onset_moment() / self.section.max_restoring_moment();
        ratio.clamp(0.0, 1.0) * self.directional_max_moment(dir)
    }

    /// Restoring moment at joint rotation `angle` toward `dir`.
    ///
    /// Linear with slope `elastic_slope` up to the onset moment, a cubic
    /// Hermite rise with zero end slope to the directional maximum at
    /// `plateau_onset_angle`, then flat. The Hermite start slope is limited to
    /// three times the secant so the rise stays monotone; when the linear part
    /// alone would pass the onset after the plateau angle the law is
    /// `min(K * angle, max)`.
    pub fn restoring_moment_curve(&self, dir: BendingDirection, angle: f64) -> Result<f64> {
        let limit = self.rotation_limit();
        if !(angle.is_finite() && angle >= 0.0 && angle <= limit * (1.0 + 1e-12)) {
            return Err(Error::domain(
                Module::Joint,
                "angle",
                angle,
                &format!("[0, rotation_limit = {limit}]"),
            ));
        }
        let m_max = self.directional_max_moment(dir);
        let m_on = self.directional_onset_moment(dir);
        let k = self.elastic_slope;
        let a_p = self.plateau_onset_angle;
        let a_on = m_on / k;
        if a_on >= a_p {
            return Ok((k * angle).min(m_max));
        }
        if angle >= a_p {
            return Ok(m_max);
        }
        if angle <= a_on {
            return Ok(k * angle);
        }
        let h = a_p - a_on;
        let slope = k.min(3.0 * (m_max - m_on) / h);
        let t = (angle - a_on) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        Ok(h00 * m_on + h10 * h * slope + h01 * m_max)
    }
}
