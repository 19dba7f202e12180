//! Registry of designer-provided building blocks: mapped node definitions
//! and generated-node templates with property ranges. Evolution draws all of
//! its genetic material from here.
//!
//! The bundled default roster reconstructs a survival-game node set (13
//! mapped + 5 generated tasks, 8 mapped + 4 generated decorators, plus the
//! two standard composites), deliberately including weak filler nodes such
//! as `idle`. It is an illustrative default; redefine it in the experiment
//! config to suit a different game.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blackboard::{KeyDecl, KeyType};
use crate::chromosome::PropertyValue;
use crate::primitives::{keys, DecoratorPrimitive, ParamKind, TaskPrimitive};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Task,
    Decorator,
}

/// A fixed, designer-defined node referenced by unique id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedNodeDef {
    pub id: String,
    pub kind: NodeKind,
    pub primitive: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, PropertyValue>,
}

/// Allowed values of one template property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PropertyRange {
    Integer { min: i64, max: i64 },
    Real { min: f64, max: f64 },
    Boolean,
    BlackboardKey { options: Vec<String> },
}

impl PropertyRange {
    pub fn param_kind(&self) -> ParamKind {
        match self {
            PropertyRange::Integer { .. } => ParamKind::Integer,
            PropertyRange::Real { .. } => ParamKind::Real,
            PropertyRange::Boolean => ParamKind::Boolean,
            PropertyRange::BlackboardKey { .. } => ParamKind::BlackboardKey,
        }
    }

    pub fn contains(&self, value: &PropertyValue) -> bool {
        match (self, value) {
            (PropertyRange::Integer { min, max }, PropertyValue::Integer(v)) => {
                min <= v && v <= max
            }
            (PropertyRange::Real { min, max }, PropertyValue::Real(v)) => {
                v.is_finite() && *min <= *v && *v <= *max
            }
            (PropertyRange::Boolean, PropertyValue::Boolean(_)) => true,
            (PropertyRange::BlackboardKey { options }, PropertyValue::Key(k)) => {
                options.iter().any(|o| o == k)
            }
            _ => false,
        }
    }

    /// Uniform sample from the range.
    pub fn sample(&self, rng: &mut impl Rng) -> PropertyValue {
        match self {
            PropertyRange::Integer { min, max } => {
                PropertyValue::Integer(rng.gen_range(*min..=*max))
            }
            PropertyRange::Real { min, max } => {
                let u: f64 = rng.gen();
                PropertyValue::Real(min + u * (max - min))
            }
            PropertyRange::Boolean => PropertyValue::Boolean(rng.gen::<bool>()),
            PropertyRange::BlackboardKey { options } => {
                PropertyValue::Key(options[rng.gen_range(0..options.len())].clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertySpec {
    pub name: String,
    #[serde(flatten)]
    pub range: PropertyRange,
}

/// Template for generating a node type with sampled property values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedNodeTemplate {
    pub id: String,
    pub kind: NodeKind,
    pub primitive: String,
    #[serde(default)]
    pub properties: Vec<PropertySpec>,
}

impl GeneratedNodeTemplate {
    pub fn property(&self, name: &str) -> Option<&PropertySpec> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// Checks that an instance's property map matches this template exactly:
    /// same names, each value inside its range. Returns the offending
    /// property name on failure.
    pub fn check_properties(
        &self,
        values: &BTreeMap<String, PropertyValue>,
    ) -> Result<(), String> {
        for spec in &self.properties {
            match values.get(&spec.name) {
                Some(v) if spec.range.contains(v) => {}
                _ => return Err(spec.name.clone()),
            }
        }
        for name in values.keys() {
            if self.property(name).is_none() {
                return Err(name.clone());
            }
        }
        Ok(())
    }
}

/// One library entry as seen by the genetic operators.
#[derive(Debug, Clone, Copy)]
pub enum LibEntry<'a> {
    Mapped(&'a MappedNodeDef),
    Template(&'a GeneratedNodeTemplate),
}

/// What went wrong in a library; [`NodeLibrary::validate`] reports every
/// violation rather than stopping at the first.
#[derive(Debug, Clone, PartialEq)]
pub enum LibraryIssue {
    DuplicateId(String),
    InvertedRange { id: String, property: String },
    NonFiniteRange { id: String, property: String },
    EmptyOptions { id: String, property: String },
    UnknownBlackboardKey { id: String, property: String, key: String },
    WrongKeyType { id: String, property: String, key: String },
    UnknownPrimitive { id: String, primitive: String },
    PrimitiveKindMismatch { id: String, primitive: String },
    MissingParam { id: String, param: String },
    WrongParamType { id: String, param: String },
}

impl std::fmt::Display for LibraryIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LibraryIssue::DuplicateId(id) => write!(f, "duplicate id `{id}`"),
            LibraryIssue::InvertedRange { id, property } => {
                write!(f, "`{id}`.{property}: range minimum exceeds maximum")
            }
            LibraryIssue::NonFiniteRange { id, property } => {
                write!(f, "`{id}`.{property}: range bound is not finite")
            }
            LibraryIssue::EmptyOptions { id, property } => {
                write!(f, "`{id}`.{property}: empty option list")
            }
            LibraryIssue::UnknownBlackboardKey { id, property, key } => {
                write!(f, "`{id}`.{property}: key `{key}` not in blackboard schema")
            }
            LibraryIssue::WrongKeyType { id, property, key } => {
                write!(f, "`{id}`.{property}: key `{key}` has an unusable type")
            }
            LibraryIssue::UnknownPrimitive { id, primitive } => {
                write!(f, "`{id}`: unknown primitive `{primitive}`")
            }
            LibraryIssue::PrimitiveKindMismatch { id, primitive } => {
                write!(f, "`{id}`: primitive `{primitive}` does not match the declared kind")
            }
            LibraryIssue::MissingParam { id, param } => {
                write!(f, "`{id}`: primitive requires parameter `{param}`")
            }
            LibraryIssue::WrongParamType { id, param } => {
                write!(f, "`{id}`: parameter `{param}` has the wrong type")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LibraryReport {
    pub issues: Vec<LibraryIssue>,
}

impl LibraryReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Registry of mapped node definitions and generated-node templates, plus
/// the blackboard schema they may reference. Composites are the standard
/// selector/sequence pair and need no registration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeLibrary {
    pub blackboard: Vec<KeyDecl>,
    pub mapped: Vec<MappedNodeDef>,
    pub templates: Vec<GeneratedNodeTemplate>,
}

impl NodeLibrary {
    pub fn mapped(&self, id: &str) -> Option<&MappedNodeDef> {
        self.mapped.iter().find(|d| d.id == id)
    }

    pub fn template(&self, id: &str) -> Option<&GeneratedNodeTemplate> {
        self.templates.iter().find(|t| t.id == id)
    }

    pub fn entries_of_kind(&self, kind: NodeKind) -> Vec<LibEntry<'_>> {
        let mut out: Vec<LibEntry<'_>> = self
            .mapped
            .iter()
            .filter(|d| d.kind == kind)
            .map(LibEntry::Mapped)
            .collect();
        out.extend(
            self.templates
                .iter()
                .filter(|t| t.kind == kind)
                .map(LibEntry::Template),
        );
        out
    }

    /// Instantiates a template: every property sampled uniformly from its
    /// range, recorded by name.
    pub fn instantiate(
        template: &GeneratedNodeTemplate,
        rng: &mut impl Rng,
    ) -> BTreeMap<String, PropertyValue> {
        template
            .properties
            .iter()
            .map(|p| (p.name.clone(), p.range.sample(rng)))
            .collect()
    }

    /// Full consistency report; empty iff the library is well-formed.
    pub fn validate(&self) -> LibraryReport {
        let mut issues = Vec::new();
        let mut seen = BTreeSet::new();
        let schema: BTreeMap<&str, KeyType> = self
            .blackboard
            .iter()
            .map(|d| (d.key.as_str(), d.kind))
            .collect();

        for id in self
            .mapped
            .iter()
            .map(|d| &d.id)
            .chain(self.templates.iter().map(|t| &t.id))
        {
            if !seen.insert(id.clone()) {
                issues.push(LibraryIssue::DuplicateId(id.clone()));
            }
        }

        for def in &self.mapped {
            let required = match parse_primitive(&def.primitive, def.kind) {
                Ok(req) => req,
                Err(issue) => {
                    issues.push(issue(def.id.clone(), def.primitive.clone()));
                    continue;
                }
            };
            for &(name, kind) in required {
                match def.params.get(name) {
                    None => issues.push(LibraryIssue::MissingParam {
                        id: def.id.clone(),
                        param: name.to_string(),
                    }),
                    Some(v) if param_matches(v, kind) => {}
                    Some(_) => issues.push(LibraryIssue::WrongParamType {
                        id: def.id.clone(),
                        param: name.to_string(),
                    }),
                }
            }
        }

        for tpl in &self.templates {
            for prop in &tpl.properties {
                match &prop.range {
                    PropertyRange::Integer { min, max } => {
                        if min > max {
                            issues.push(LibraryIssue::InvertedRange {
                                id: tpl.id.clone(),
                                property: prop.name.clone(),
                            });
                        }
                    }
                    PropertyRange::Real { min, max } => {
                        if !min.is_finite() || !max.is_finite() {
                            issues.push(LibraryIssue::NonFiniteRange {
                                id: tpl.id.clone(),
                                property: prop.name.clone(),
                            });
                        } else if min > max {
                            issues.push(LibraryIssue::InvertedRange {
                                id: tpl.id.clone(),
                                property: prop.name.clone(),
                            });
                        }
                    }
                    PropertyRange::Boolean => {}
                    PropertyRange::BlackboardKey { options } => {
                        if options.is_empty() {
                            issues.push(LibraryIssue::EmptyOptions {
                                id: tpl.id.clone(),
                                property: prop.name.clone(),
                            });
                        }
                        for key in options {
                            if !schema.contains_key(key.as_str()) {
                                issues.push(LibraryIssue::UnknownBlackboardKey {
                                    id: tpl.id.clone(),
                                    property: prop.name.clone(),
                                    key: key.clone(),
                                });
                            }
                        }
                    }
                }
            }
            match parse_primitive(&tpl.primitive, tpl.kind) {
                Ok(required) => {
                    for &(name, kind) in required {
                        match tpl.property(name) {
                            None => issues.push(LibraryIssue::MissingParam {
                                id: tpl.id.clone(),
                                param: name.to_string(),
                            }),
                            Some(spec) if spec.range.param_kind() == kind => {}
                            Some(_) => issues.push(LibraryIssue::WrongParamType {
                                id: tpl.id.clone(),
                                param: name.to_string(),
                            }),
                        }
                    }
                }
                Err(issue) => issues.push(issue(tpl.id.clone(), tpl.primitive.clone())),
            }
        }

        LibraryReport { issues }
    }
}

type PrimitiveIssue = fn(String, String) -> LibraryIssue;

fn parse_primitive(
    primitive: &str,
    kind: NodeKind,
) -> Result<&'static [(&'static str, ParamKind)], PrimitiveIssue> {
    match kind {
        NodeKind::Task => match TaskPrimitive::parse(primitive) {
            Some(p) => Ok(p.required_params()),
            None => {
                if DecoratorPrimitive::parse(primitive).is_some() {
                    Err(|id, primitive| LibraryIssue::PrimitiveKindMismatch { id, primitive })
                } else {
                    Err(|id, primitive| LibraryIssue::UnknownPrimitive { id, primitive })
                }
            }
        },
        NodeKind::Decorator => match DecoratorPrimitive::parse(primitive) {
            Some(p) => Ok(p.required_params()),
            None => {
                if TaskPrimitive::parse(primitive).is_some() {
                    Err(|id, primitive| LibraryIssue::PrimitiveKindMismatch { id, primitive })
                } else {
                    Err(|id, primitive| LibraryIssue::UnknownPrimitive { id, primitive })
                }
            }
        },
    }
}

fn param_matches(value: &PropertyValue, kind: ParamKind) -> bool {
    matches!(
        (value, kind),
        (PropertyValue::Integer(_), ParamKind::Integer)
            | (PropertyValue::Real(_), ParamKind::Real)
            | (PropertyValue::Boolean(_), ParamKind::Boolean)
            | (PropertyValue::Key(_), ParamKind::BlackboardKey)
    )
}

fn real(v: f64) -> PropertyValue {
    PropertyValue::Real(v)
}

/// The standard zombie blackboard schema.
pub fn standard_blackboard() -> Vec<KeyDecl> {
    vec![
        KeyDecl {
            key: keys::SENSED_PLAYER.into(),
            kind: KeyType::Entity,
        },
        KeyDecl {
            key: keys::TARGET_ENEMY.into(),
            kind: KeyType::Entity,
        },
        KeyDecl {
            key: keys::LAST_KNOWN_ENEMY_LOCATION.into(),
            kind: KeyType::Position,
        },
        KeyDecl {
            key: keys::CURRENT_WAYPOINT.into(),
            kind: KeyType::Position,
        },
    ]
}

/// The bundled default roster: 13 mapped + 5 generated tasks and 8 mapped +
/// 4 generated decorators over the standard blackboard schema.
pub fn default_roster() -> NodeLibrary {
    let mapped_task = |id: &str, params: Vec<(&str, PropertyValue)>| MappedNodeDef {
        id: id.into(),
        kind: NodeKind::Task,
        primitive: id.into(),
        params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    };
    let mapped_decorator = |id: &str, params: Vec<(&str, PropertyValue)>| MappedNodeDef {
        id: id.into(),
        kind: NodeKind::Decorator,
        primitive: id.into(),
        params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    };

    let mapped = vec![
        mapped_task("find_bot_waypoint", vec![]),
        mapped_task("find_patrol_location", vec![("radius", real(3.0))]),
        mapped_task("move_to_current_waypoint", vec![]),
        mapped_task("move_to_sensed_player", vec![]),
        mapped_task("move_toward_target_enemy", vec![]),
        mapped_task("move_to_last_known_enemy_location", vec![]),
        mapped_task(
            "find_location_near_last_known_enemy",
            vec![("radius", real(4.0))],
        ),
        mapped_task("forget_last_known_enemy", vec![]),
        mapped_task("stop_moving", vec![]),
        mapped_task("face_target", vec![]),
        mapped_task("pick_random_heading", vec![]),
        mapped_task("step_forward", vec![("distance", real(1.0))]),
        mapped_task("idle", vec![]),
        mapped_decorator("has_sensed_enemy", vec![]),
        mapped_decorator("has_no_target_enemy", vec![]),
        mapped_decorator("has_waypoint", vec![]),
        mapped_decorator("has_last_known_location", vec![]),
        mapped_decorator("is_target_close", vec![("distance", real(5.0))]),
        mapped_decorator("is_target_far", vec![("distance", real(9.0))]),
        mapped_decorator("is_moving", vec![]),
        mapped_decorator(
            "is_waypoint_in_cone_to_enemy",
            vec![("half_angle_degrees", real(30.0))],
        ),
    ];

    let prop = |name: &str, range: PropertyRange| PropertySpec {
        name: name.into(),
        range,
    };
    let templates = vec![
        GeneratedNodeTemplate {
            id: "wait".into(),
            kind: NodeKind::Task,
            primitive: "wait".into(),
            properties: vec![prop("duration", PropertyRange::Real { min: 0.25, max: 4.0 })],
        },
        GeneratedNodeTemplate {
            id: "rotate_by".into(),
            kind: NodeKind::Task,
            primitive: "rotate_by".into(),
            properties: vec![prop(
                "angle",
                PropertyRange::Real {
                    min: -std::f64::consts::PI,
                    max: std::f64::consts::PI,
                },
            )],
        },
        GeneratedNodeTemplate {
            id: "move_distance".into(),
            kind: NodeKind::Task,
            primitive: "move_distance".into(),
            properties: vec![prop("distance", PropertyRange::Real { min: 1.0, max: 8.0 })],
        },
        GeneratedNodeTemplate {
            id: "set_speed".into(),
            kind: NodeKind::Task,
            primitive: "set_speed".into(),
            properties: vec![prop("multiplier", PropertyRange::Real { min: 0.3, max: 1.5 })],
        },
        GeneratedNodeTemplate {
            id: "remember_point_offset".into(),
            kind: NodeKind::Task,
            primitive: "remember_point_offset".into(),
            properties: vec![
                prop("dx", PropertyRange::Real { min: -5.0, max: 5.0 }),
                prop("dy", PropertyRange::Real { min: -5.0, max: 5.0 }),
            ],
        },
        GeneratedNodeTemplate {
            id: "distance_lt".into(),
            kind: NodeKind::Decorator,
            primitive: "distance_lt".into(),
            properties: vec![prop("threshold", PropertyRange::Real { min: 1.0, max: 9.0 })],
        },
        GeneratedNodeTemplate {
            id: "cooldown".into(),
            kind: NodeKind::Decorator,
            primitive: "cooldown".into(),
            properties: vec![prop("seconds", PropertyRange::Real { min: 0.5, max: 10.0 })],
        },
        GeneratedNodeTemplate {
            id: "chance_gate".into(),
            kind: NodeKind::Decorator,
            primitive: "chance_gate".into(),
            properties: vec![
                prop("p", PropertyRange::Real { min: 0.0, max: 1.0 }),
                prop("invert", PropertyRange::Boolean),
            ],
        },
        GeneratedNodeTemplate {
            id: "blackboard_key_set".into(),
            kind: NodeKind::Decorator,
            primitive: "blackboard_key_set".into(),
            properties: vec![prop(
                "key",
                PropertyRange::BlackboardKey {
                    options: keys::ALL.iter().map(|k| k.to_string()).collect(),
                },
            )],
        },
    ];

    NodeLibrary {
        blackboard: standard_blackboard(),
        mapped,
        templates,
    }
}
