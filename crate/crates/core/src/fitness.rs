//! Event-driven per-agent fitness accumulation and weighted piecewise-linear
//! scoring with a tree-size band penalty.
//!
//! The simulator records keyed deltas per agent; at episode end each agent's
//! accumulated values run through the spec's per-key piecewise-linear maps,
//! the results sum, and trees outside the size band lose a fixed amount per
//! node of excess.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::AgentId;

/// Names of the measures the arena emits for every zombie.
pub mod measures {
    pub const DISTANCE_PATROLLED: &str = "distance_patrolled";
    pub const DAMAGE_DEALT: &str = "damage_dealt";
    pub const CHASE_TICKS: &str = "chase_ticks";
    pub const NEAR_LAST_KNOWN_TICKS: &str = "near_last_known_ticks";
    pub const IDLE_TICKS: &str = "idle_ticks";
    pub const EXCESS_CHASE_RESTARTS: &str = "excess_chase_restarts";

    pub const ALL: [&str; 6] = [
        DISTANCE_PATROLLED,
        DAMAGE_DEALT,
        CHASE_TICKS,
        NEAR_LAST_KNOWN_TICKS,
        IDLE_TICKS,
        EXCESS_CHASE_RESTARTS,
    ];
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("fitness key `{0}` was not declared")]
pub struct UndeclaredKey(pub String);

/// Per-agent keyed accumulators. Keys must be declared before any event is
/// recorded; absent values read as zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FitnessLedger {
    declared: Vec<String>,
    values: BTreeMap<AgentId, BTreeMap<String, f64>>,
}

impl FitnessLedger {
    pub fn new(declared: impl IntoIterator<Item = impl Into<String>>) -> Self {
        FitnessLedger {
            declared: declared.into_iter().map(Into::into).collect(),
            values: BTreeMap::new(),
        }
    }

    pub fn declared_keys(&self) -> &[String] {
        &self.declared
    }

    pub fn record_event(
        &mut self,
        agent: AgentId,
        key: &str,
        delta: f64,
    ) -> Result<(), UndeclaredKey> {
        if !self.declared.iter().any(|k| k == key) {
            return Err(UndeclaredKey(key.to_string()));
        }
        *self
            .values
            .entry(agent)
            .or_default()
            .entry(key.to_string())
            .or_insert(0.0) += delta;
        Ok(())
    }

    pub fn value(&self, agent: AgentId, key: &str) -> f64 {
        self.values
            .get(&agent)
            .and_then(|m| m.get(key))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.values.keys().copied()
    }
}

/// A continuous piecewise-linear map defined by breakpoints with strictly
/// increasing input values, extended linearly beyond the end breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PiecewiseLinear {
    pub breakpoints: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Self {
        PiecewiseLinear { breakpoints }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.breakpoints.is_empty() {
            return Err("piecewise map needs at least one breakpoint".into());
        }
        for pair in self.breakpoints.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(format!(
                    "breakpoint values must strictly increase ({} then {})",
                    pair[0].0, pair[1].0
                ));
            }
        }
        for &(x, y) in &self.breakpoints {
            if !x.is_finite() || !y.is_finite() {
                return Err("breakpoints must be finite".into());
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.breakpoints;
        match pts.len() {
            0 => 0.0,
            1 => pts[0].1,
            _ => {
                // Segment selection: clamp to the first/last segment so the
                // map extends linearly beyond both ends.
                let seg = if x <= pts[0].0 {
                    0
                } else if x >= pts[pts.len() - 1].0 {
                    pts.len() - 2
                } else {
                    pts.windows(2)
                        .position(|w| x >= w[0].0 && x <= w[1].0)
                        .expect("x inside hull")
                };
                let (x0, y0) = pts[seg];
                let (x1, y1) = pts[seg + 1];
                y0 + (x - x0) * (y1 - y0) / (x1 - x0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessTerm {
    pub key: String,
    pub breakpoints: PiecewiseLinear,
}

/// Acceptable tree-size range and the per-node cost of leaving it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeBand {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub per_node_penalty: f64,
}

impl SizeBand {
    pub fn penalty(&self, size: usize) -> f64 {
        let outside = if size < self.min_nodes {
            self.min_nodes - size
        } else if size > self.max_nodes {
            size - self.max_nodes
        } else {
            0
        };
        -(self.per_node_penalty * outside as f64)
    }
}

/// Scoring configuration: one piecewise-linear term per measured key plus
/// the size band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessSpec {
    pub terms: Vec<FitnessTerm>,
    pub size_band: SizeBand,
}

impl FitnessSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.terms.is_empty() {
            return Err("fitness spec needs at least one term".into());
        }
        for term in &self.terms {
            term.breakpoints
                .validate()
                .map_err(|e| format!("term `{}`: {e}", term.key))?;
        }
        if self.size_band.min_nodes > self.size_band.max_nodes {
            return Err("size band minimum exceeds maximum".into());
        }
        if self.size_band.per_node_penalty < 0.0 {
            return Err("per-node penalty must be non-negative".into());
        }
        Ok(())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|t| t.key.as_str())
    }
}

/// Scores one agent: sum of each term's map applied to the agent's
/// accumulated value, plus the size-band penalty.
pub fn score(ledger: &FitnessLedger, agent: AgentId, tree_size: usize, spec: &FitnessSpec) -> f64 {
    let mut total = spec.size_band.penalty(tree_size);
    for term in &spec.terms {
        total += term.breakpoints.eval(ledger.value(agent, &term.key));
    }
    total
}

/// The bundled default scoring configuration. Rewards patrolling distance,
/// chasing, damage, and searching near the last known target location;
/// penalizes idling and excess chase restarts. All numbers are tunable
/// defaults carried in the experiment config.
pub fn bundled_spec() -> FitnessSpec {
    let term = |key: &str, pts: &[(f64, f64)]| FitnessTerm {
        key: key.into(),
        breakpoints: PiecewiseLinear::new(pts.to_vec()),
    };
    FitnessSpec {
        terms: vec![
            term(
                measures::DISTANCE_PATROLLED,
                &[(0.0, 0.0), (50.0, 100.0), (150.0, 200.0)],
            ),
            term(
                measures::DAMAGE_DEALT,
                &[(0.0, 0.0), (50.0, 150.0), (200.0, 450.0)],
            ),
            term(
                measures::CHASE_TICKS,
                &[(0.0, 0.0), (100.0, 100.0), (300.0, 200.0)],
            ),
            term(measures::NEAR_LAST_KNOWN_TICKS, &[(0.0, 0.0), (100.0, 80.0)]),
            term(measures::IDLE_TICKS, &[(0.0, 0.0), (600.0, -400.0)]),
            term(
                measures::EXCESS_CHASE_RESTARTS,
                &[(0.0, 0.0), (5.0, -150.0)],
            ),
        ],
        size_band: SizeBand {
            min_nodes: 5,
            max_nodes: 40,
            per_node_penalty: 25.0,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn record_event_accumulates() {
        let mut ledger = FitnessLedger::new(["damage_dealt"]);
        let a = AgentId(0);
        ledger.record_event(a, "damage_dealt", 3.0).unwrap();
        assert_eq!(ledger.value(a, "damage_dealt"), 3.0);
        ledger.record_event(a, "damage_dealt", 2.0).unwrap();
        ledger.record_event(a, "damage_dealt", -5.0).unwrap();
        assert_eq!(ledger.value(a, "damage_dealt"), 0.0);
    }

    #[test]
    fn undeclared_key_rejected() {
        let mut ledger = FitnessLedger::new(["damage_dealt"]);
        let err = ledger.record_event(AgentId(0), "mystery", 1.0).unwrap_err();
        assert_eq!(err, UndeclaredKey("mystery".into()));
    }

    #[test]
    fn random_deltas_match_running_sum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut ledger = FitnessLedger::new(["k"]);
        let a = AgentId(7);
        let mut oracle = 0.0f64;
        for _ in 0..10_000 {
            let delta: f64 = rng.gen_range(-10.0..10.0);
            oracle += delta;
            ledger.record_event(a, "k", delta).unwrap();
        }
        assert_eq!(ledger.value(a, "k"), oracle);
    }

    #[test]
    fn linear_interpolation_midpoint() {
        let spec = FitnessSpec {
            terms: vec![FitnessTerm {
                key: "k".into(),
                breakpoints: PiecewiseLinear::new(vec![(0.0, 0.0), (10.0, 100.0)]),
            }],
            size_band: SizeBand {
                min_nodes: 1,
                max_nodes: 100,
                per_node_penalty: 25.0,
            },
        };
        let mut ledger = FitnessLedger::new(["k"]);
        ledger.record_event(AgentId(0), "k", 5.0).unwrap();
        assert_eq!(score(&ledger, AgentId(0), 10, &spec), 50.0);
    }

    #[test]
    fn size_penalty_below_band() {
        let spec = FitnessSpec {
            terms: vec![FitnessTerm {
                key: "k".into(),
                breakpoints: PiecewiseLinear::new(vec![(0.0, 0.0), (1.0, 1.0)]),
            }],
            size_band: SizeBand {
                min_nodes: 5,
                max_nodes: 40,
                per_node_penalty: 25.0,
            },
        };
        let ledger = FitnessLedger::new(["k"]);
        assert_eq!(score(&ledger, AgentId(0), 3, &spec), -50.0);
        assert_eq!(score(&ledger, AgentId(0), 5, &spec), 0.0);
        assert_eq!(score(&ledger, AgentId(0), 40, &spec), 0.0);
        assert_eq!(score(&ledger, AgentId(0), 43, &spec), -75.0);
    }

    #[test]
    fn piecewise_continuous_at_breakpoints() {
        let map = PiecewiseLinear::new(vec![(0.0, 0.0), (2.0, 8.0), (5.0, -1.0)]);
        for &(x, y) in &map.breakpoints {
            assert_eq!(map.eval(x), y);
            let eps = 1e-9;
            assert!((map.eval(x - eps) - y).abs() < 1e-6);
            assert!((map.eval(x + eps) - y).abs() < 1e-6);
        }
    }

    #[test]
    fn extends_linearly_beyond_ends() {
        let map = PiecewiseLinear::new(vec![(0.0, 0.0), (10.0, 100.0)]);
        assert_eq!(map.eval(20.0), 200.0);
        assert_eq!(map.eval(-10.0), -100.0);
    }

    #[test]
    fn bundled_zero_ledger_scores_intercepts() {
        let spec = bundled_spec();
        let ledger = FitnessLedger::new(measures::ALL);
        // Every bundled term has a zero intercept, so an in-band tree scores 0.
        assert_eq!(score(&ledger, AgentId(0), 10, &spec), 0.0);
    }

    #[test]
    fn chaser_outscores_idler() {
        let spec = bundled_spec();
        let mut ledger = FitnessLedger::new(measures::ALL);
        let chaser = AgentId(0);
        let idler = AgentId(1);
        ledger.record_event(chaser, measures::DAMAGE_DEALT, 100.0).unwrap();
        ledger.record_event(chaser, measures::CHASE_TICKS, 200.0).unwrap();
        ledger
            .record_event(chaser, measures::DISTANCE_PATROLLED, 80.0)
            .unwrap();
        ledger.record_event(chaser, measures::IDLE_TICKS, 50.0).unwrap();
        ledger.record_event(idler, measures::IDLE_TICKS, 600.0).unwrap();
        assert!(score(&ledger, chaser, 10, &spec) > score(&ledger, idler, 10, &spec));
    }

    #[test]
    fn damage_is_monotone() {
        let spec = bundled_spec();
        let mut previous = f64::NEG_INFINITY;
        for step in 0..200 {
            let mut ledger = FitnessLedger::new(measures::ALL);
            ledger
                .record_event(AgentId(0), measures::DAMAGE_DEALT, step as f64 * 2.5)
                .unwrap();
            let s = score(&ledger, AgentId(0), 10, &spec);
            assert!(s >= previous, "damage step {step} decreased score");
            previous = s;
        }
    }
}
