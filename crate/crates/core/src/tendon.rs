//! Tendon routing, lever arms and buckle thresholds for a single joint.
//!
//! The tendon is a straight line from an anchor on the top plate to an anchor
//! on the bottom plate. Anchors are given in plate coordinates (the chain
//! frame, before the joint's `mount_rotation`), in metres from the plate
//! centre. The moment that matters is the one about the base-section centre.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Module, Result};
use crate::joint::{BendingDirection, JointSpec};
use crate::units::de;

/// Golden-section refinement stops once the bracket is this narrow (rad).
const REFINE_TOL: f64 = 1e-12;
const GRID_STEPS: usize = 360;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TendonRoute {
    #[serde(deserialize_with = "de::point")]
    pub top_anchor: [f64; 2],
    #[serde(deserialize_with = "de::point")]
    pub bottom_anchor: [f64; 2],
}

impl TendonRoute {
    pub fn new(top_anchor: [f64; 2], bottom_anchor: [f64; 2]) -> Self {
        Self {
            top_anchor,
            bottom_anchor,
        }
    }

    /// Tendon parallel to the joint axis through the same point on both plates.
    pub fn parallel(anchor: [f64; 2]) -> Self {
        Self::new(anchor, anchor)
    }

    /// Checks the anchors lie inside (or on) a membrane of radius `radius`.
    pub fn validate(&self, radius: f64) -> Result<()> {
        for (name, p) in [("top_anchor", self.top_anchor), ("bottom_anchor", self.bottom_anchor)] {
            if !(p[0].is_finite() && p[1].is_finite()) {
                return Err(Error::invalid(Module::Tendon, format!("{name} is not finite")));
            }
            let r = p[0].hypot(p[1]);
            if r > radius * (1.0 + 1e-9) {
                return Err(Error::invalid(
                    Module::Tendon,
                    format!("{name} at radius {r} m lies outside the membrane radius {radius} m"),
                ));
            }
        }
        Ok(())
    }
}

/// Base-section moment per unit tendon tension (m), split into the parts that
/// drive soft-plane (`psi = 0`) and stiff-plane (`psi = pi/2`) deflection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeverArm {
    pub soft: f64,
    pub stiff: f64,
}

impl LeverArm {
    pub fn magnitude(&self) -> f64 {
        self.soft.hypot(self.stiff)
    }

    /// Moment per unit tension driving deflection toward `dir`.
    pub fn along(&self, dir: BendingDirection) -> f64 {
        let (s, c) = dir.psi().sin_cos();
        self.soft * c + self.stiff * s
    }

    /// Deflection direction the moment pushes toward, if any.
    pub fn direction(&self) -> Option<BendingDirection> {
        BendingDirection::from_vector([-self.stiff, self.soft])
    }

    /// In-plane lever vector `(x, y)` in joint coordinates.
    pub(crate) fn from_joint_vector(v: [f64; 2]) -> Self {
        Self {
            soft: v[1],
            stiff: -v[0],
        }
    }
}

/// Lever arm from a 3D moment about the base centre, expressed in the unit's
/// base frame (plate coordinates), rotated into joint coordinates.
pub(crate) fn lever_from_moment(moment: [f64; 3], mount_rotation: f64) -> LeverArm {
    // M = (-m_y, m_x, 0) for a lever vector m pulled along -z
    let (mx, my) = (moment[1], -moment[0]);
    let (s, c) = mount_rotation.sin_cos();
    let x = c * mx + s * my;
    let y = -s * mx + c * my;
    LeverArm::from_joint_vector([x, y])
}

/// Moment about `origin` of unit tension pulling the point `top` toward
/// `bottom`.
pub(crate) fn line_moment(origin: [f64; 3], top: [f64; 3], bottom: [f64; 3]) -> Result<[f64; 3]> {
    let dir = [bottom[0] - top[0], bottom[1] - top[1], bottom[2] - top[2]];
    let len = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    if !(len.is_finite() && len > 0.0) {
        return Err(Error::DegenerateRoute(format!(
            "anchors coincide or are not finite (length {len})"
        )));
    }
    let u = [dir[0] / len, dir[1] / len, dir[2] / len];
    let r = [top[0] - origin[0], top[1] - origin[1], top[2] - origin[2]];
    Ok([
        r[1] * u[2] - r[2] * u[1],
        r[2] * u[0] - r[0] * u[2],
        r[0] * u[1] - r[1] * u[0],
    ])
}

/// Moment about the joint's base-section centre per unit tendon tension.
pub fn unit_tension_moment(joint: &JointSpec, route: &TendonRoute) -> Result<LeverArm> {
    route.validate(joint.section.radius)?;
    let [tx, ty] = route.top_anchor;
    let [bx, by] = route.bottom_anchor;
    let m = line_moment([0.0; 3], [tx, ty, joint.length], [bx, by, 0.0])?;
    Ok(lever_from_moment(m, joint.mount_rotation))
}

/// Tension at which a joint buckles, and the direction it bends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BuckleThreshold {
    Reachable {
        /// Tendon tension (N).
        tension: f64,
        direction: BendingDirection,
    },
    /// The tendon produces no bending moment on this joint.
    Unreachable,
}

impl BuckleThreshold {
    pub fn tension(&self) -> Option<f64> {
        match *self {
            BuckleThreshold::Reachable { tension, .. } => Some(tension),
            BuckleThreshold::Unreachable => None,
        }
    }

    pub fn direction(&self) -> Option<BendingDirection> {
        match *self {
            BuckleThreshold::Reachable { direction, .. } => Some(direction),
            BuckleThreshold::Unreachable => None,
        }
    }

    pub fn is_reachable(&self) -> bool {
        matches!(self, BuckleThreshold::Reachable { .. })
    }
}

/// Minimum over bending directions of `directional_max_moment / lever`, with
/// the minimising direction.
pub fn buckle_threshold(joint: &JointSpec, route: &TendonRoute) -> Result<BuckleThreshold> {
    let lever = unit_tension_moment(joint, route)?;
    Ok(threshold_for_lever(joint, &lever))
}

pub(crate) fn threshold_for_lever(joint: &JointSpec, lever: &LeverArm) -> BuckleThreshold {
    let mag = lever.magnitude();
    if mag.is_nan() || mag <= 1e-12 * joint.section.radius {
        return BuckleThreshold::Unreachable;
    }
    let tension_at = |psi: f64| {
        let dir = BendingDirection::new(psi);
        let arm = lever.along(dir);
        if arm <= 1e-12 * mag {
            f64::INFINITY
        } else {
            joint.directional_max_moment(dir) / arm
        }
    };

    let step = TAU / GRID_STEPS as f64;
    let (mut best_psi, mut best_t) = (0.0, f64::INFINITY);
    for k in 0..GRID_STEPS {
        let psi = k as f64 * step;
        let t = tension_at(psi);
        if t < best_t {
            best_psi = psi;
            best_t = t;
        }
    }

    let (psi_r, t_r) = golden_min(&tension_at, best_psi - step, best_psi + step);
    if t_r < best_t {
        best_psi = psi_r;
        best_t = t_r;
    }
    // A smooth minimum is only resolved to about sqrt(eps); where the
    // directional maximum is flat the lever direction itself is exact.
    if let Some(dir) = lever.direction() {
        let t = tension_at(dir.psi());
        if t <= best_t * (1.0 + 4.0 * f64::EPSILON) {
            best_psi = dir.psi();
            best_t = t.min(best_t);
        }
    }
    BuckleThreshold::Reachable {
        tension: best_t,
        direction: BendingDirection::new(best_psi),
    }
}

fn golden_min(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if b - a <= REFINE_TOL {
            break;
        }
        if gc <= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, g(x))
}

/// Anchor on a circle of radius `radius` at servo angle `angle`, measured
/// counter-clockwise from the plate's `+y` axis.
pub fn servo_anchor(radius: f64, angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [-radius * s, radius * c]
}

/// One cell of a routing sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepEntry {
    pub top_angle: f64,
    pub bottom_angle: f64,
    pub route: TendonRoute,
    pub lever: LeverArm,
    pub threshold: BuckleThreshold,
}

/// Buckle thresholds over every (top, bottom) servo angle pair, with anchors on
/// circles of radius `anchor_radius`. Rows are ordered top-angle major.
pub fn routing_sweep(
    joint: &JointSpec,
    top_angles: &[f64],
    bottom_angles: &[f64],
    anchor_radius: f64,
) -> Result<Vec<SweepEntry>> {
    if top_angles.is_empty() || bottom_angles.is_empty() {
        return Err(Error::invalid(
            Module::Tendon,
            "routing sweep needs nonempty angle grids",
        ));
    }
    if !(anchor_radius.is_finite() && anchor_radius >= 0.0) {
        return Err(Error::domain(Module::Tendon, "anchor_radius", anchor_radius, "[0, R]"));
    }
    let cells: Vec<(f64, f64)> = top_angles
        .iter()
        .flat_map(|&t| bottom_angles.iter().map(move |&b| (t, b)))
        .collect();
    cells
        .par_iter()
        .map(|&(top_angle, bottom_angle)| {
            let route = TendonRoute::new(
                servo_anchor(anchor_radius, top_angle),
                servo_anchor(anchor_radius, bottom_angle),
            );
            let lever = unit_tension_moment(joint, &route)?;
            Ok(SweepEntry {
                top_angle,
                bottom_angle,
                route,
                lever,
                threshold: threshold_for_lever(joint, &lever),
            })
        })
        .collect()
}

/// Servo angles from `-90` to `+90` degrees in `step_deg` increments.
pub fn servo_grid(step_deg: f64) -> Vec<f64> {
    let n = (180.0 / step_deg).round() as usize;
    (0..=n).map(|k| (-90.0 + k as f64 * step_deg) * PI / 180.0).collect()
}
