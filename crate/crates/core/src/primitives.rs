//! The arena primitive set node definitions bind to.
//!
//! A library entry names one of these primitives; compilation resolves the
//! name and the arena supplies the behavior at tick time. The `always_*`
//! primitives are trivial fixtures useful in engines tests and as
//! intentionally weak roster filler.

use serde::{Deserialize, Serialize};

/// Blackboard keys the arena maintains for every zombie.
pub mod keys {
    pub const SENSED_PLAYER: &str = "sensed_player";
    pub const TARGET_ENEMY: &str = "target_enemy";
    pub const LAST_KNOWN_ENEMY_LOCATION: &str = "last_known_enemy_location";
    pub const CURRENT_WAYPOINT: &str = "current_waypoint";

    pub const ALL: [&str; 4] = [
        SENSED_PLAYER,
        TARGET_ENEMY,
        LAST_KNOWN_ENEMY_LOCATION,
        CURRENT_WAYPOINT,
    ];
}

/// Expected value shape of a primitive parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Integer,
    Real,
    Boolean,
    BlackboardKey,
}

macro_rules! primitive_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self {
                    $(Self::$variant => $text),+
                }
            }

            pub fn parse(s: &str) -> Option<Self> {
                match s {
                    $($text => Some(Self::$variant),)+
                    _ => None,
                }
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

primitive_enum!(TaskPrimitive {
    FindBotWaypoint => "find_bot_waypoint",
    FindPatrolLocation => "find_patrol_location",
    MoveToCurrentWaypoint => "move_to_current_waypoint",
    MoveToSensedPlayer => "move_to_sensed_player",
    MoveTowardTargetEnemy => "move_toward_target_enemy",
    MoveToLastKnownEnemyLocation => "move_to_last_known_enemy_location",
    FindLocationNearLastKnownEnemy => "find_location_near_last_known_enemy",
    ForgetLastKnownEnemy => "forget_last_known_enemy",
    StopMoving => "stop_moving",
    FaceTarget => "face_target",
    PickRandomHeading => "pick_random_heading",
    StepForward => "step_forward",
    Idle => "idle",
    Wait => "wait",
    RotateBy => "rotate_by",
    MoveDistance => "move_distance",
    SetSpeed => "set_speed",
    RememberPointOffset => "remember_point_offset",
    AlwaysSucceed => "always_succeed",
    AlwaysFail => "always_fail",
});

primitive_enum!(DecoratorPrimitive {
    HasSensedEnemy => "has_sensed_enemy",
    HasNoTargetEnemy => "has_no_target_enemy",
    HasWaypoint => "has_waypoint",
    HasLastKnownLocation => "has_last_known_location",
    IsTargetClose => "is_target_close",
    IsTargetFar => "is_target_far",
    IsMoving => "is_moving",
    IsWaypointInConeToEnemy => "is_waypoint_in_cone_to_enemy",
    DistanceLt => "distance_lt",
    Cooldown => "cooldown",
    ChanceGate => "chance_gate",
    BlackboardKeySet => "blackboard_key_set",
});

impl TaskPrimitive {
    /// Parameters a binding must supply (via fixed params or generated
    /// properties).
    pub fn required_params(self) -> &'static [(&'static str, ParamKind)] {
        match self {
            TaskPrimitive::FindPatrolLocation => &[("radius", ParamKind::Real)],
            TaskPrimitive::FindLocationNearLastKnownEnemy => &[("radius", ParamKind::Real)],
            TaskPrimitive::StepForward => &[("distance", ParamKind::Real)],
            TaskPrimitive::Wait => &[("duration", ParamKind::Real)],
            TaskPrimitive::RotateBy => &[("angle", ParamKind::Real)],
            TaskPrimitive::MoveDistance => &[("distance", ParamKind::Real)],
            TaskPrimitive::SetSpeed => &[("multiplier", ParamKind::Real)],
            TaskPrimitive::RememberPointOffset => {
                &[("dx", ParamKind::Real), ("dy", ParamKind::Real)]
            }
            _ => &[],
        }
    }
}

impl DecoratorPrimitive {
    pub fn required_params(self) -> &'static [(&'static str, ParamKind)] {
        match self {
            DecoratorPrimitive::IsTargetClose => &[("distance", ParamKind::Real)],
            DecoratorPrimitive::IsTargetFar => &[("distance", ParamKind::Real)],
            DecoratorPrimitive::IsWaypointInConeToEnemy => {
                &[("half_angle_degrees", ParamKind::Real)]
            }
            DecoratorPrimitive::DistanceLt => &[("threshold", ParamKind::Real)],
            DecoratorPrimitive::Cooldown => &[("seconds", ParamKind::Real)],
            DecoratorPrimitive::ChanceGate => {
                &[("p", ParamKind::Real), ("invert", ParamKind::Boolean)]
            }
            DecoratorPrimitive::BlackboardKeySet => &[("key", ParamKind::BlackboardKey)],
            _ => &[],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_names() {
        assert_eq!(
            TaskPrimitive::parse("move_to_current_waypoint"),
            Some(TaskPrimitive::MoveToCurrentWaypoint)
        );
        assert_eq!(TaskPrimitive::MoveDistance.as_str(), "move_distance");
        assert_eq!(
            DecoratorPrimitive::parse("chance_gate"),
            Some(DecoratorPrimitive::ChanceGate)
        );
        assert_eq!(TaskPrimitive::parse("no_such_primitive"), None);
    }
}
