//! Per-agent typed key-value store read and written by tree nodes and the
//! surrounding agent code.
//!
//! The key set is declared once at construction; a write can never change a
//! key's declared type, and reading an unset (or unknown) key yields
//! [`Value::None`] rather than an error.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{AgentId, Vec2};

/// Declared type of a blackboard key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyType {
    Integer,
    Real,
    Boolean,
    Position,
    Entity,
}

/// One entry of a blackboard schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyDecl {
    pub key: String,
    #[serde(rename = "type")]
    pub kind: KeyType,
}

/// A blackboard value. `None` is the unset state of any key.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Integer(i64),
    Real(f64),
    Boolean(bool),
    Position(Vec2),
    Entity(AgentId),
    None,
}

impl Value {
    fn matches(&self, kind: KeyType) -> bool {
        matches!(
            (self, kind),
            (Value::Integer(_), KeyType::Integer)
                | (Value::Real(_), KeyType::Real)
                | (Value::Boolean(_), KeyType::Boolean)
                | (Value::Position(_), KeyType::Position)
                | (Value::Entity(_), KeyType::Entity)
                | (Value::None, _)
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlackboardError {
    #[error("blackboard key `{0}` is not declared")]
    UnknownKey(String),
    #[error("blackboard key `{key}` holds {declared:?}, refusing write of another type")]
    TypeMismatch { key: String, declared: KeyType },
}

/// Typed key-value store with a schema fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Blackboard {
    schema: BTreeMap<String, KeyType>,
    values: BTreeMap<String, Value>,
}

static NONE_VALUE: Value = Value::None;

impl Blackboard {
    pub fn new(schema: &[KeyDecl]) -> Self {
        Blackboard {
            schema: schema
                .iter()
                .map(|d| (d.key.clone(), d.kind))
                .collect(),
            values: BTreeMap::new(),
        }
    }

    pub fn declares(&self, key: &str) -> bool {
        self.schema.contains_key(key)
    }

    pub fn key_type(&self, key: &str) -> Option<KeyType> {
        self.schema.get(key).copied()
    }

    /// Current value of a key; `Value::None` when unset or undeclared.
    pub fn get(&self, key: &str) -> &Value {
        self.values.get(key).unwrap_or(&NONE_VALUE)
    }

    pub fn is_set(&self, key: &str) -> bool {
        !matches!(self.get(key), Value::None)
    }

    /// Writes a key. Writing `Value::None` clears it.
    pub fn set(&mut self, key: &str, value: Value) -> Result<(), BlackboardError> {
        let declared = *self
            .schema
            .get(key)
            .ok_or_else(|| BlackboardError::UnknownKey(key.to_string()))?;
        if !value.matches(declared) {
            return Err(BlackboardError::TypeMismatch {
                key: key.to_string(),
                declared,
            });
        }
        if matches!(value, Value::None) {
            self.values.remove(key);
        } else {
            self.values.insert(key.to_string(), value);
        }
        Ok(())
    }

    pub fn clear(&mut self, key: &str) -> Result<(), BlackboardError> {
        self.set(key, Value::None)
    }

    pub fn get_position(&self, key: &str) -> Option<Vec2> {
        match self.get(key) {
            Value::Position(p) => Some(*p),
            _ => None,
        }
    }

    pub fn get_entity(&self, key: &str) -> Option<AgentId> {
        match self.get(key) {
            Value::Entity(id) => Some(*id),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> Vec<KeyDecl> {
        vec![
            KeyDecl {
                key: "target".into(),
                kind: KeyType::Entity,
            },
            KeyDecl {
                key: "spot".into(),
                kind: KeyType::Position,
            },
        ]
    }

    #[test]
    fn unset_reads_none() {
        let bb = Blackboard::new(&schema());
        assert_eq!(*bb.get("spot"), Value::None);
        assert_eq!(*bb.get("not_declared"), Value::None);
        assert!(!bb.is_set("spot"));
    }

    #[test]
    fn writes_respect_declared_types() {
        let mut bb = Blackboard::new(&schema());
        bb.set("spot", Value::Position(Vec2::new(1.0, 2.0))).unwrap();
        assert_eq!(bb.get_position("spot"), Some(Vec2::new(1.0, 2.0)));
        let err = bb.set("spot", Value::Boolean(true)).unwrap_err();
        assert!(matches!(err, BlackboardError::TypeMismatch { .. }));
        let err = bb.set("ghost", Value::Boolean(true)).unwrap_err();
        assert_eq!(err, BlackboardError::UnknownKey("ghost".into()));
    }

    #[test]
    fn clear_unsets() {
        let mut bb = Blackboard::new(&schema());
        bb.set("target", Value::Entity(AgentId(3))).unwrap();
        assert!(bb.is_set("target"));
        bb.clear("target").unwrap();
        assert!(!bb.is_set("target"));
    }
}
