//! Exhaustive search over unit order, mount rotation and orifice routing for
//! chains that buckle in a requested sequence.
//!
//! A candidate design assigns each chain position a unit role (an index into
//! the available units), one of the allowed mount rotations and one orifice;
//! the tendon runs parallel to the axis through that orifice on both plates of
//! the unit. Candidates are pruned with thresholds from the undeformed chain,
//! and survivors are re-simulated in coupled mode before being returned.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{self, ChainSpec, SequenceReport, SimulationMode};
use crate::error::{Error, Module, Result};
use crate::joint::{BendingDirection, JointSpec};
use crate::tendon::{self, BuckleThreshold, TendonRoute};
use crate::units::de;

pub const DEFAULT_SIZE_CAP: u128 = 50_000_000;

fn default_direction_tolerance() -> f64 {
    15f64.to_radians()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignProblem {
    pub available_units: Vec<JointSpec>,
    /// Orifice positions on every connector plate (m).
    #[serde(deserialize_with = "de::points")]
    pub orifice_layout: Vec<[f64; 2]>,
    /// Unit roles (indices into `available_units`) in the order they should
    /// buckle.
    pub target_sequence: Vec<usize>,
    /// Optional chain-frame deflection direction per role.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_directions: Option<Vec<Option<BendingDirection>>>,
    #[serde(default = "default_direction_tolerance", deserialize_with = "de::angle")]
    pub direction_tolerance: f64,
    #[serde(deserialize_with = "de::angles")]
    pub allowed_rotations: Vec<f64>,
    /// Highest tendon tension available (N).
    #[serde(deserialize_with = "de::force")]
    pub max_tension: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_cap: Option<u128>,
}

impl DesignProblem {
    pub fn validate(&self) -> Result<()> {
        let n = self.available_units.len();
        let bad = |msg: String| Err(Error::invalid(Module::Search, msg));
        if n == 0 {
            return bad("no available units".into());
        }
        if self.target_sequence.len() != n {
            return bad(format!(
                "target sequence has {} entries for {n} units",
                self.target_sequence.len()
            ));
        }
        let mut seen = vec![false; n];
        for &r in &self.target_sequence {
            if r >= n || seen[r] {
                return bad(format!(
                    "target sequence {:?} is not a permutation of 0..{n}",
                    self.target_sequence
                ));
            }
            seen[r] = true;
        }
        if let Some(dirs) = &self.target_directions {
            if dirs.len() != n {
                return bad(format!("{} target directions for {n} units", dirs.len()));
            }
        }
        if self.orifice_layout.is_empty() || self.allowed_rotations.is_empty() {
            return bad("orifice layout and allowed rotations must be nonempty".into());
        }
        if !(self.max_tension.is_finite() && self.max_tension > 0.0) {
            return Err(Error::domain(
                Module::Search,
                "max_tension",
                self.max_tension,
                "(0, inf)",
            ));
        }
        for u in &self.available_units {
            u.validate()?;
            for o in &self.orifice_layout {
                TendonRoute::parallel(*o).validate(u.section.radius)?;
            }
        }
        Ok(())
    }

    /// Number of candidates: `n! * rotations^n * orifices^n`, saturating.
    pub fn space_size(&self) -> u128 {
        let n = self.available_units.len() as u32;
        let fact = (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k));
        let rot = (self.allowed_rotations.len() as u128).checked_pow(n);
        let orf = (self.orifice_layout.len() as u128).checked_pow(n);
        match (fact, rot, orf) {
            (Some(f), Some(r), Some(o)) => f.checked_mul(r).and_then(|x| x.checked_mul(o)).unwrap_or(u128::MAX),
            _ => u128::MAX,
        }
    }

    /// Chain realising `design`.
    pub fn build_chain(&self, design: &Design) -> Result<ChainSpec> {
        let units = design
            .order
            .iter()
            .zip(&design.rotations)
            .map(|(&role, &rot)| self.available_units[role].with_mount_rotation(self.allowed_rotations[rot]))
            .collect::<Result<Vec<_>>>()?;
        let routes = design
            .orifices
            .iter()
            .map(|&o| TendonRoute::parallel(self.orifice_layout[o]))
            .collect();
        ChainSpec::new(units, routes)?.with_orifices(self.orifice_layout.clone())
    }

    /// Whether a simulated report realises the target (all units buckle, in
    /// target role order, within direction tolerance).
    pub fn accepts(&self, design: &Design, chain: &ChainSpec, report: &SequenceReport) -> bool {
        let events = &report.events;
        if events.len() != self.target_sequence.len() {
            return false;
        }
        events.iter().zip(&self.target_sequence).all(|(e, &role)| {
            design.order[e.unit] == role
                && self.direction_ok(role, e.direction.rotated(chain.units[e.unit].mount_rotation))
        })
    }

    fn direction_ok(&self, role: usize, chain_dir: BendingDirection) -> bool {
        match self.target_directions.as_ref().and_then(|d| d[role]) {
            Some(want) => chain_dir.angle_to(want) <= self.direction_tolerance,
            None => true,
        }
    }
}

/// Discrete design: per chain position, the unit role, rotation index and
/// orifice index. Ordered lexicographically for deterministic ranking.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Design {
    pub order: Vec<usize>,
    pub rotations: Vec<usize>,
    pub orifices: Vec<usize>,
}

impl Design {
    /// Decodes a flat candidate index (mixed radix: permutation rank, then
    /// rotations, then orifices).
    fn decode(mut index: u128, n: usize, n_rot: usize, n_orf: usize) -> Self {
        let mut orifices = vec![0; n];
        for slot in orifices.iter_mut().rev() {
            *slot = (index % n_orf as u128) as usize;
            index /= n_orf as u128;
        }
        let mut rotations = vec![0; n];
        for slot in rotations.iter_mut().rev() {
            *slot = (index % n_rot as u128) as usize;
            index /= n_rot as u128;
        }
        // Lehmer code
        let mut digits = vec![0usize; n];
        for (i, d) in digits.iter_mut().enumerate().rev() {
            let base = (n - i) as u128;
            *d = (index % base) as usize;
            index /= base;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let order = digits.into_iter().map(|d| pool.remove(d)).collect();
        Self {
            order,
            rotations,
            orifices,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSolution {
    pub design: Design,
    pub chain: ChainSpec,
    /// Minimum relative gap between consecutive thresholds; infinite for a
    /// single unit.
    #[serde(serialize_with = "ser_margin", deserialize_with = "de_margin")]
    pub margin: f64,
    /// Unit roles in buckling order.
    pub sequence: Vec<usize>,
    /// Buckling tensions in order (N).
    pub tensions: Vec<f64>,
}

fn ser_margin<S: Serializer>(m: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if m.is_infinite() && *m > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*m)
    }
}

fn de_margin<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(v) => Ok(v),
        Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Raw::Text(t) => Err(serde::de::Error::custom(format!("bad margin {t:?}"))),
    }
}

/// Robustness of a sequence: the smallest relative gap `(T[k+1] - T[k]) / T[k+1]`
/// between consecutive events. Tied events count as zero; a single event gives
/// `f64::INFINITY`.
pub fn margin(report: &SequenceReport) -> Result<f64> {
    match report.events.len() {
        0 => Err(Error::EmptyReport),
        1 => Ok(f64::INFINITY),
        _ => Ok(report
            .events
            .windows(2)
            .map(|w| {
                if w[0].tied {
                    0.0
                } else {
                    (w[1].tension - w[0].tension) / w[1].tension
                }
            })
            .fold(f64::INFINITY, f64::min)),
    }
}

/// Sorts by descending margin, then by design encoding.
fn rank(a: &(Design, f64), b: &(Design, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

/// Every feasible design in the problem's space, best margin first.
pub fn enumerate_designs(problem: &DesignProblem) -> Result<Vec<DesignSolution>> {
    problem.validate()?;
    let size = problem.space_size();
    let cap = problem.size_cap.unwrap_or(DEFAULT_SIZE_CAP);
    if size > cap {
        return Err(Error::SpaceTooLarge { size, cap });
    }
    let n = problem.available_units.len();
    let n_rot = problem.allowed_rotations.len();
    let n_orf = problem.orifice_layout.len();

    // thresholds in the undeformed chain depend only on (role, rotation, orifice)
    let mut table = Vec::with_capacity(n * n_rot * n_orf);
    for unit in &problem.available_units {
        for &rot in &problem.allowed_rotations {
            let joint = unit.with_mount_rotation(rot)?;
            for &o in &problem.orifice_layout {
                table.push(tendon::buckle_threshold(&joint, &TendonRoute::parallel(o))?);
            }
        }
    }
    let lookup = |role: usize, rot: usize, orf: usize| table[(role * n_rot + rot) * n_orf + orf];

    let survivors: Vec<Design> = (0..size as u64)
        .into_par_iter()
        .filter_map(|idx| {
            let design = Design::decode(idx as u128, n, n_rot, n_orf);
            let thresholds: Vec<BuckleThreshold> = (0..n)
                .map(|p| lookup(design.order[p], design.rotations[p], design.orifices[p]))
                .collect();
            independent_matches(problem, &design, &thresholds).then_some(design)
        })
        .collect();

    let mut finalists: Vec<(Design, f64)> = survivors
        .into_par_iter()
        .map(|design| -> Result<Option<(Design, f64)>> {
            let chain = problem.build_chain(&design)?;
            let report = chain::simulate_ramp(&chain, problem.max_tension, SimulationMode::Coupled)?;
            if !problem.accepts(&design, &chain, &report) {
                return Ok(None);
            }
            Ok(Some((design, margin(&report)?)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    finalists.sort_by(rank);

    finalists
        .into_iter()
        .map(|(design, margin)| {
            let chain = problem.build_chain(&design)?;
            let report = chain::simulate_ramp(&chain, problem.max_tension, SimulationMode::Coupled)?;
            Ok(DesignSolution {
                sequence: report.events.iter().map(|e| design.order[e.unit]).collect(),
                tensions: report.tensions(),
                design,
                chain,
                margin,
            })
        })
        .collect()
}

/// Independent-mode replay of the ramp from precomputed thresholds.
fn independent_matches(problem: &DesignProblem, design: &Design, thresholds: &[BuckleThreshold]) -> bool {
    let n = thresholds.len();
    let mut remaining: Vec<(usize, f64, BendingDirection)> = thresholds
        .iter()
        .enumerate()
        .filter_map(|(i, t)| match *t {
            BuckleThreshold::Reachable { tension, direction } => Some((i, tension, direction)),
            BuckleThreshold::Unreachable => None,
        })
        .collect();
    if remaining.len() != n {
        return false;
    }
    for &role in &problem.target_sequence {
        let Some(next) = chain::pick_next(&remaining, problem.max_tension) else {
            return false;
        };
        if design.order[next.unit] != role {
            return false;
        }
        let mount = problem.allowed_rotations[design.rotations[next.unit]];
        if !problem.direction_ok(role, next.direction.rotated(mount)) {
            return false;
        }
        remaining.retain(|c| c.0 != next.unit);
    }
    true
}
