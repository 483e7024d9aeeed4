//! Serial chains of joints driven by one tendon: quasi-static tension ramp,
//! forward kinematics and tendon work.
//!
//! Plates are numbered from the base: unit `i` sits between plate `i` and
//! plate `i + 1`. Each unit's tendon segment runs from its route's bottom
//! anchor on plate `i` to its top anchor on plate `i + 1`, and only that
//! segment loads the unit.
//!
//! Buckling is rigid-plastic: a unit stays straight until the tension reaches
//! its threshold, then snaps to its rotation limit in the predicted direction.

use nalgebra::{Isometry3, Point3, Quaternion, Translation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Module, Result};
use crate::joint::{BendingDirection, JointSpec};
use crate::tendon::{self, BuckleThreshold, TendonRoute};
use crate::units::de;

/// Relative gap below which two thresholds count as tied.
pub const TIE_REL_TOL: f64 = 1e-9;

/// Rigid pose: position (m) and unit quaternion `[w, x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFrame")]
pub struct Frame {
    pub position: [f64; 3],
    pub quaternion: [f64; 4],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrame {
    position: [f64; 3],
    quaternion: [f64; 4],
}

impl TryFrom<RawFrame> for Frame {
    type Error = Error;

    fn try_from(raw: RawFrame) -> Result<Self> {
        let norm = raw.quaternion.iter().map(|q| q * q).sum::<f64>().sqrt();
        if !(raw.position.iter().all(|p| p.is_finite()) && (norm - 1.0).abs() < 1e-9) {
            return Err(Error::invalid(
                Module::Chain,
                "frame needs a finite position and a unit quaternion",
            ));
        }
        Ok(Self {
            position: raw.position,
            quaternion: raw.quaternion,
        })
    }
}

impl Default for Frame {
    fn default() -> Self {
        Self {
            position: [0.0; 3],
            quaternion: [1.0, 0.0, 0.0, 0.0],
        }
    }
}

impl Frame {
    pub fn to_isometry(&self) -> Isometry3<f64> {
        let [w, x, y, z] = self.quaternion;
        let q = UnitQuaternion::from_quaternion(Quaternion::new(w, x, y, z));
        let [px, py, pz] = self.position;
        Isometry3::from_parts(Translation3::new(px, py, pz), q)
    }

    pub fn from_isometry(iso: &Isometry3<f64>) -> Self {
        let t = iso.translation.vector;
        let q = iso.rotation.quaternion();
        Self {
            position: [t.x, t.y, t.z],
            quaternion: [q.w, q.i, q.j, q.k],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChain")]
pub struct ChainSpec {
    pub units: Vec<JointSpec>,
    /// One route per unit, anchors in plate coordinates.
    pub routes: Vec<TendonRoute>,
    pub base_frame: Frame,
    /// Orifice positions available on every plate; when present each route
    /// anchor must be one of them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orifices: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChain {
    units: Vec<JointSpec>,
    routes: Vec<TendonRoute>,
    #[serde(default)]
    base_frame: Frame,
    #[serde(default, deserialize_with = "opt_points")]
    orifices: Option<Vec<[f64; 2]>>,
}

fn opt_points<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<[f64; 2]>>, D::Error> {
    #[derive(Deserialize)]
    struct Wrap(#[serde(deserialize_with = "de::points")] Vec<[f64; 2]>);
    Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
}

impl TryFrom<RawChain> for ChainSpec {
    type Error = Error;

    fn try_from(raw: RawChain) -> Result<Self> {
        let chain = ChainSpec {
            units: raw.units,
            routes: raw.routes,
            base_frame: raw.base_frame,
            orifices: raw.orifices,
        };
        chain.validate()?;
        Ok(chain)
    }
}

impl ChainSpec {
    pub fn new(units: Vec<JointSpec>, routes: Vec<TendonRoute>) -> Result<Self> {
        let chain = Self {
            units,
            routes,
            base_frame: Frame::default(),
            orifices: None,
        };
        chain.validate()?;
        Ok(chain)
    }

    pub fn with_orifices(mut self, orifices: Vec<[f64; 2]>) -> Result<Self> {
        self.orifices = Some(orifices);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.units.is_empty() {
            return Err(Error::invalid(Module::Chain, "chain needs at least one unit"));
        }
        if self.routes.len() != self.units.len() {
            return Err(Error::invalid(
                Module::Chain,
                format!("{} routes given for {} units", self.routes.len(), self.units.len()),
            ));
        }
        for (i, (unit, route)) in self.units.iter().zip(&self.routes).enumerate() {
            unit.validate()?;
            route
                .validate(unit.section.radius)
                .map_err(|e| Error::invalid(Module::Chain, format!("unit {i}: {e}")))?;
            if let Some(orifices) = &self.orifices {
                for anchor in [route.top_anchor, route.bottom_anchor] {
                    let on_orifice = orifices
                        .iter()
                        .any(|o| (o[0] - anchor[0]).hypot(o[1] - anchor[1]) <= 1e-9);
                    if !on_orifice {
                        return Err(Error::invalid(
                            Module::Chain,
                            format!("unit {i}: anchor {anchor:?} is not a declared orifice"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn straight(&self) -> Vec<JointAngle> {
        vec![JointAngle::default(); self.units.len()]
    }
}

/// Rotation of one unit and its direction in joint-local coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointAngle {
    #[serde(deserialize_with = "de::angle")]
    pub angle: f64,
    pub direction: BendingDirection,
}

impl Default for JointAngle {
    fn default() -> Self {
        Self {
            angle: 0.0,
            direction: BendingDirection::SOFT,
        }
    }
}

/// Transform from a unit's bottom plate to its top plate: half the length up
/// the axis, a lumped rotation about the bending axis, the other half.
fn unit_transform(unit: &JointSpec, q: &JointAngle) -> Isometry3<f64> {
    let half = Isometry3::translation(0.0, 0.0, 0.5 * unit.length);
    if q.angle == 0.0 {
        return half * half;
    }
    let [dx, dy] = q.direction.rotated(unit.mount_rotation).unit_vector();
    // z x d tilts the axis toward d
    let axis = Vector3::new(-dy, dx, 0.0);
    let rot = Isometry3::new(Vector3::zeros(), axis * q.angle);
    half * rot * half
}

fn plate_poses(chain: &ChainSpec, angles: &[JointAngle]) -> Vec<Isometry3<f64>> {
    let mut poses = Vec::with_capacity(chain.len() + 1);
    let mut current = chain.base_frame.to_isometry();
    poses.push(current);
    for (unit, q) in chain.units.iter().zip(angles) {
        current *= unit_transform(unit, q);
        poses.push(current);
    }
    poses
}

fn check_angles(chain: &ChainSpec, angles: &[JointAngle]) -> Result<()> {
    if angles.len() != chain.len() {
        return Err(Error::invalid(
            Module::Chain,
            format!("{} joint angles given for {} units", angles.len(), chain.len()),
        ));
    }
    for (unit, (joint, q)) in chain.units.iter().zip(angles).enumerate() {
        let limit = joint.rotation_limit();
        if !(q.angle.is_finite() && q.angle >= 0.0 && q.angle <= limit * (1.0 + 1e-12)) {
            return Err(Error::LimitViolation {
                unit,
                angle: q.angle,
                limit,
            });
        }
    }
    Ok(())
}

/// Plate origins interleaved with hinge points: base plate, hinge of unit 0,
/// plate 1, hinge of unit 1, ... Consecutive points are half a unit apart.
pub fn link_points(chain: &ChainSpec, angles: &[JointAngle]) -> Result<Vec<[f64; 3]>> {
    check_angles(chain, angles)?;
    let poses = plate_poses(chain, angles);
    let mut points = Vec::with_capacity(2 * chain.len() + 1);
    for (i, unit) in chain.units.iter().enumerate() {
        let p = poses[i].translation.vector;
        points.push([p.x, p.y, p.z]);
        let h = poses[i] * Point3::new(0.0, 0.0, 0.5 * unit.length);
        points.push([h.x, h.y, h.z]);
    }
    let tip = poses[chain.len()].translation.vector;
    points.push([tip.x, tip.y, tip.z]);
    Ok(points)
}

/// Plate frames from the base plate to the tip plate (`units + 1` frames).
pub fn forward_kinematics(chain: &ChainSpec, angles: &[JointAngle]) -> Result<Vec<Frame>> {
    check_angles(chain, angles)?;
    Ok(plate_poses(chain, angles).iter().map(Frame::from_isometry).collect())
}

/// How thresholds are evaluated during a ramp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulationMode {
    /// Recompute each unit's lever arm from the current chain geometry.
    #[default]
    Coupled,
    /// Thresholds from the undeformed chain, computed once.
    Independent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuckleEvent {
    pub unit: usize,
    /// Tendon tension at which the unit buckled (N).
    pub tension: f64,
    pub direction: BendingDirection,
    /// Another unbuckled unit had the same threshold; the lower index went
    /// first.
    pub tied: bool,
    /// Joint angles after the event.
    pub configuration: Vec<JointAngle>,
}

/// A unit that did not buckle during the ramp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnreachedUnit {
    pub unit: usize,
    pub threshold: BuckleThreshold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub mode: SimulationMode,
    pub max_tension: f64,
    pub events: Vec<BuckleEvent>,
    pub unreached: Vec<UnreachedUnit>,
    pub final_shape: Vec<Frame>,
}

impl SequenceReport {
    /// Unit indices in buckling order.
    pub fn order(&self) -> Vec<usize> {
        self.events.iter().map(|e| e.unit).collect()
    }

    pub fn tensions(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.tension).collect()
    }
}

pub(crate) struct NextBuckle {
    pub unit: usize,
    pub threshold: f64,
    pub direction: BendingDirection,
    pub tied: bool,
}

/// Lowest threshold among `(unit, tension, direction)` candidates, if within
/// `max_tension`. Thresholds within [`TIE_REL_TOL`] of the minimum are tied
/// and the lowest unit index wins. Candidates must be in ascending unit order.
pub(crate) fn pick_next(candidates: &[(usize, f64, BendingDirection)], max_tension: f64) -> Option<NextBuckle> {
    let min = candidates.iter().map(|c| c.1).min_by(f64::total_cmp)?;
    if min > max_tension {
        return None;
    }
    let mut tied = candidates.iter().filter(|c| c.1 - min <= TIE_REL_TOL * min.abs());
    let &(unit, threshold, direction) = tied.next().expect("minimum is a candidate");
    Some(NextBuckle {
        unit,
        threshold,
        direction,
        tied: tied.next().is_some(),
    })
}

fn coupled_threshold(chain: &ChainSpec, poses: &[Isometry3<f64>], i: usize) -> Result<BuckleThreshold> {
    let unit = &chain.units[i];
    let route = &chain.routes[i];
    let base = poses[i];
    let top = poses[i + 1];
    let a = top * Point3::new(route.top_anchor[0], route.top_anchor[1], 0.0);
    let b = base * Point3::new(route.bottom_anchor[0], route.bottom_anchor[1], 0.0);
    let o = base.translation.vector;
    let m = tendon::line_moment([o.x, o.y, o.z], [a.x, a.y, a.z], [b.x, b.y, b.z])?;
    let local = base.rotation.inverse() * Vector3::new(m[0], m[1], m[2]);
    let lever = tendon::lever_from_moment([local.x, local.y, local.z], unit.mount_rotation);
    Ok(tendon::threshold_for_lever(unit, &lever))
}

/// Ramps the tendon tension from zero to `max_tension` and records which
/// units buckle, in order.
pub fn simulate_ramp(chain: &ChainSpec, max_tension: f64, mode: SimulationMode) -> Result<SequenceReport> {
    chain.validate()?;
    if !(max_tension.is_finite() && max_tension > 0.0) {
        return Err(Error::domain(Module::Chain, "max_tension", max_tension, "(0, inf)"));
    }
    let n = chain.len();
    let independent: Vec<BuckleThreshold> = match mode {
        SimulationMode::Independent => chain
            .units
            .iter()
            .zip(&chain.routes)
            .map(|(u, r)| tendon::buckle_threshold(u, r))
            .collect::<Result<_>>()?,
        SimulationMode::Coupled => Vec::new(),
    };

    let mut angles = chain.straight();
    let mut buckled = vec![false; n];
    let mut events = Vec::new();
    let mut tension = 0.0f64;
    let mut last: Vec<BuckleThreshold> = vec![BuckleThreshold::Unreachable; n];

    loop {
        let poses = plate_poses(chain, &angles);
        let mut candidates = Vec::new();
        for i in (0..n).filter(|&i| !buckled[i]) {
            let t = match mode {
                SimulationMode::Independent => independent[i],
                SimulationMode::Coupled => coupled_threshold(chain, &poses, i)?,
            };
            last[i] = t;
            if let BuckleThreshold::Reachable { tension, direction } = t {
                candidates.push((i, tension, direction));
            }
        }
        let Some(next) = pick_next(&candidates, max_tension) else {
            break;
        };
        let NextBuckle {
            unit,
            threshold,
            direction,
            tied,
        } = next;
        tension = tension.max(threshold);
        buckled[unit] = true;
        angles[unit] = JointAngle {
            angle: chain.units[unit].rotation_limit(),
            direction,
        };
        events.push(BuckleEvent {
            unit,
            tension,
            direction,
            tied,
            configuration: angles.clone(),
        });
    }

    let unreached = (0..n)
        .filter(|&i| !buckled[i])
        .map(|unit| UnreachedUnit {
            unit,
            threshold: last[unit],
        })
        .collect();
    Ok(SequenceReport {
        mode,
        max_tension,
        events,
        unreached,
        final_shape: forward_kinematics(chain, &angles)?,
    })
}

/// Total tendon length between the first and last anchors for a configuration.
pub fn tendon_length(chain: &ChainSpec, angles: &[JointAngle]) -> Result<f64> {
    check_angles(chain, angles)?;
    Ok(chain
        .units
        .iter()
        .zip(&chain.routes)
        .zip(angles)
        .map(|((unit, route), q)| {
            let a = unit_transform(unit, q) * Point3::new(route.top_anchor[0], route.top_anchor[1], 0.0);
            let b = Point3::new(route.bottom_anchor[0], route.bottom_anchor[1], 0.0);
            (a - b).norm()
        })
        .sum())
}

/// Tendon work over a ramp: the area under tension versus pulled-in tendon
/// length, accumulated with the trapezoidal rule. Tension is held at each
/// event's threshold while that unit snaps to its limit.
pub fn grasp_energy(chain: &ChainSpec, report: &SequenceReport) -> Result<f64> {
    let mut displacement = 0.0;
    let mut length = tendon_length(chain, &chain.straight())?;
    // (displacement, tension) polyline
    let mut path = vec![(0.0, 0.0)];
    for event in &report.events {
        let next = tendon_length(chain, &event.configuration)?;
        path.push((displacement, event.tension));
        displacement += length - next;
        length = next;
        path.push((displacement, event.tension));
    }
    Ok(path
        .windows(2)
        .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
        .sum())
}
