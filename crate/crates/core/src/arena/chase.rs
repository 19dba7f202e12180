//! Chase detection: a zombie is chasing when it keeps moving at an angle
//! toward, and within a short distance of, some human. The detector debounces
//! both chase starts and chase breaks by consecutive-tick thresholds.

use serde::{Deserialize, Serialize};

use crate::types::{angle_between, Vec2};

fn default_angle_threshold() -> f64 {
    45.0
}
fn default_distance_threshold() -> f64 {
    10.0
}
fn default_min_ticks() -> u32 {
    10
}
fn default_break_ticks() -> u32 {
    10
}
fn default_restart_allowance() -> u32 {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaseConfig {
    /// Velocity-to-bearing tolerance, degrees.
    #[serde(default = "default_angle_threshold")]
    pub angle_threshold_degrees: f64,
    /// Maximum distance to the human being chased, cells.
    #[serde(default = "default_distance_threshold")]
    pub distance_threshold: f64,
    /// Consecutive qualifying ticks before a chase starts.
    #[serde(default = "default_min_ticks")]
    pub min_ticks: u32,
    /// Consecutive violating ticks before an active chase breaks.
    #[serde(default = "default_break_ticks")]
    pub break_ticks: u32,
    /// Chases per episode before restarts start counting as excess.
    #[serde(default = "default_restart_allowance")]
    pub restart_allowance: u32,
}

impl Default for ChaseConfig {
    fn default() -> Self {
        ChaseConfig {
            angle_threshold_degrees: default_angle_threshold(),
            distance_threshold: default_distance_threshold(),
            min_ticks: default_min_ticks(),
            break_ticks: default_break_ticks(),
            restart_allowance: default_restart_allowance(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaseEvent {
    Started,
    Broken,
}

#[derive(Debug, Clone, Default)]
pub struct ChaseDetector {
    qualifying: u32,
    violating: u32,
    active: bool,
    /// Chases started this episode.
    pub chase_count: u32,
}

impl ChaseDetector {
    pub fn is_active(&self) -> bool {
        self.active
    }

    /// Feeds one tick of zombie kinematics. `velocity` is the displacement
    /// over the tick divided by dt. `humans` are the live human positions.
    pub fn step(
        &mut self,
        zombie_pos: Vec2,
        velocity: Vec2,
        humans: &[Vec2],
        cfg: &ChaseConfig,
    ) -> Option<ChaseEvent> {
        let moving = velocity.length() > 1e-6;
        let qualifies = moving
            && humans.iter().any(|&h| {
                zombie_pos.distance(h) <= cfg.distance_threshold
                    && angle_between(velocity.angle(), (h - zombie_pos).angle())
                        <= cfg.angle_threshold_degrees.to_radians()
            });
        if qualifies {
            self.qualifying += 1;
            self.violating = 0;
        } else {
            self.violating += 1;
            self.qualifying = 0;
        }
        if !self.active && self.qualifying >= cfg.min_ticks {
            self.active = true;
            self.chase_count += 1;
            return Some(ChaseEvent::Started);
        }
        if self.active && self.violating >= cfg.break_ticks {
            self.active = false;
            return Some(ChaseEvent::Broken);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_zombie_never_fires() {
        let cfg = ChaseConfig::default();
        let mut det = ChaseDetector::default();
        let humans = vec![Vec2::new(3.0, 0.0)];
        for _ in 0..200 {
            assert_eq!(det.step(Vec2::ZERO, Vec2::ZERO, &humans, &cfg), None);
        }
        assert_eq!(det.chase_count, 0);
    }

    #[test]
    fn straight_pursuit_starts_exactly_once() {
        let cfg = ChaseConfig::default();
        let mut det = ChaseDetector::default();
        let human = Vec2::new(8.0, 0.0);
        let mut pos = Vec2::new(0.0, 0.0);
        let mut events = Vec::new();
        for _ in 0..60 {
            let v = Vec2::new(1.0, 0.0); // straight at the human
            if let Some(e) = det.step(pos, v, &[human], &cfg) {
                events.push(e);
            }
            pos = pos + v.scaled(0.1);
        }
        assert_eq!(events, vec![ChaseEvent::Started]);
        assert!(det.is_active());
    }

    #[test]
    fn approach_retreat_cycles_pair_up() {
        let cfg = ChaseConfig {
            min_ticks: 10,
            break_ticks: 10,
            ..ChaseConfig::default()
        };
        let mut det = ChaseDetector::default();
        let human = Vec2::new(5.0, 0.0);
        let pos = Vec2::new(1.0, 0.0);
        let mut started = 0;
        let mut broken = 0;
        for cycle in 0..4 {
            for _ in 0..20 {
                match det.step(pos, Vec2::new(1.0, 0.0), &[human], &cfg) {
                    Some(ChaseEvent::Started) => started += 1,
                    Some(ChaseEvent::Broken) => broken += 1,
                    None => {}
                }
            }
            for _ in 0..20 {
                match det.step(pos, Vec2::new(-1.0, 0.0), &[human], &cfg) {
                    Some(ChaseEvent::Started) => started += 1,
                    Some(ChaseEvent::Broken) => broken += 1,
                    None => {}
                }
            }
            assert_eq!(started, cycle + 1, "cycle {cycle}");
            assert_eq!(broken, cycle + 1, "cycle {cycle}");
        }
        assert_eq!(det.chase_count, 4);
    }

    #[test]
    fn distant_human_does_not_qualify() {
        let cfg = ChaseConfig::default();
        let mut det = ChaseDetector::default();
        let humans = vec![Vec2::new(50.0, 0.0)];
        for _ in 0..100 {
            assert_eq!(
                det.step(Vec2::ZERO, Vec2::new(1.0, 0.0), &humans, &cfg),
                None
            );
        }
    }
}
