//! Reliability block diagrams: series/parallel composition of component
//! availabilities. Series blocks multiply; parallel blocks survive if any
//! child does. Used to contrast plain availability with sovereignty: a
//! single-vendor network can look highly available and still lose every
//! flow to one manufacturer failure.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RbdError {
    #[error("leaf `{id}` availability {value} outside [0, 1]")]
    AvailabilityOutOfRange { id: String, value: f64 },
    #[error("{0} block has no children")]
    EmptyBlock(&'static str),
    #[error("invalid RBD document: {0}")]
    BadDocument(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RbdExpr {
    Leaf { id: String, availability: f64 },
    Series { children: Vec<RbdExpr> },
    Parallel { children: Vec<RbdExpr> },
}

impl RbdExpr {
    pub fn leaf(id: &str, availability: f64) -> Self {
        RbdExpr::Leaf {
            id: id.to_string(),
            availability,
        }
    }

    pub fn series(children: Vec<RbdExpr>) -> Self {
        RbdExpr::Series { children }
    }

    pub fn parallel(children: Vec<RbdExpr>) -> Self {
        RbdExpr::Parallel { children }
    }

    pub fn validate(&self) -> Result<(), RbdError> {
        match self {
            RbdExpr::Leaf { id, availability } => {
                if !(0.0..=1.0).contains(availability) {
                    return Err(RbdError::AvailabilityOutOfRange {
                        id: id.clone(),
                        value: *availability,
                    });
                }
                Ok(())
            }
            RbdExpr::Series { children } => {
                if children.is_empty() {
                    return Err(RbdError::EmptyBlock("series"));
                }
                children.iter().try_for_each(|c| c.validate())
            }
            RbdExpr::Parallel { children } => {
                if children.is_empty() {
                    return Err(RbdError::EmptyBlock("parallel"));
                }
                children.iter().try_for_each(|c| c.validate())
            }
        }
    }

    /// Replace every leaf availability via `f(id)`, keeping the structure.
    pub fn with_availabilities(&self, f: &impl Fn(&str) -> f64) -> RbdExpr {
        match self {
            RbdExpr::Leaf { id, .. } => RbdExpr::Leaf {
                id: id.clone(),
                availability: f(id),
            },
            RbdExpr::Series { children } => RbdExpr::Series {
                children: children.iter().map(|c| c.with_availabilities(f)).collect(),
            },
            RbdExpr::Parallel { children } => RbdExpr::Parallel {
                children: children.iter().map(|c| c.with_availabilities(f)).collect(),
            },
        }
    }

    pub fn from_json(text: &str) -> Result<RbdExpr, RbdError> {
        let expr: RbdExpr =
            serde_json::from_str(text).map_err(|e| RbdError::BadDocument(e.to_string()))?;
        expr.validate()?;
        Ok(expr)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("RBD serializes")
    }
}

/// Availability of the whole diagram. Expects a validated expression.
pub fn eval_rbd(e: &RbdExpr) -> f64 {
    match e {
        RbdExpr::Leaf { availability, .. } => *availability,
        RbdExpr::Series { children } => children.iter().map(eval_rbd).product(),
        RbdExpr::Parallel { children } => {
            1.0 - children.iter().map(|c| 1.0 - eval_rbd(c)).product::<f64>()
        }
    }
}
