//! The three latent space models and a tagged wrapper for runtime dispatch.

pub mod class;
pub mod distance;
pub mod eigen;
pub mod procrustes;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use class::{ClassHyper, ClassModel, ClassState};
pub use distance::{DistanceHyper, DistanceModel, DistanceState};
pub use eigen::{EigenHyper, EigenModel, EigenState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Distance,
    Class,
    Eigen,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Distance, ModelKind::Class, ModelKind::Eigen];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Distance => "distance",
            ModelKind::Class => "class",
            ModelKind::Eigen => "eigen",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "distance" | "dist" => Ok(ModelKind::Distance),
            "class" | "sbm" => Ok(ModelKind::Class),
            "eigen" => Ok(ModelKind::Eigen),
            other => Err(Error::invalid(format!("unknown model `{other}`"))),
        }
    }
}

/// A model with its hyperparameters; `hyper` is deserialized per kind.
#[derive(Debug, Clone)]
pub enum AnyModel {
    Distance(DistanceModel),
    Class(ClassModel),
    Eigen(EigenModel),
}

impl AnyModel {
    /// Default hyperparameters for `kind` with dimension `k` on `n_actors`.
    pub fn standard(kind: ModelKind, k: usize, n_actors: usize) -> Result<Self> {
        Ok(match kind {
            ModelKind::Distance => {
                AnyModel::Distance(DistanceModel::new(DistanceHyper::elicited(n_actors, k))?)
            }
            ModelKind::Class => AnyModel::Class(ClassModel::new(ClassHyper::standard(k))?),
            ModelKind::Eigen => AnyModel::Eigen(EigenModel::new(EigenHyper::standard(k))?),
        })
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            AnyModel::Distance(_) => ModelKind::Distance,
            AnyModel::Class(_) => ModelKind::Class,
            AnyModel::Eigen(_) => ModelKind::Eigen,
        }
    }

    pub fn hyper_json(&self) -> serde_json::Value {
        match self {
            AnyModel::Distance(m) => serde_json::to_value(&m.hyper),
            AnyModel::Class(m) => serde_json::to_value(&m.hyper),
            AnyModel::Eigen(m) => serde_json::to_value(&m.hyper),
        }
        .expect("hyperparameters serialize")
    }
}

/// Runs `$body` with `$m` bound to the concrete model inside an [`AnyModel`].
#[macro_export]
macro_rules! with_model {
    ($any:expr, $m:ident => $body:expr) => {
        match $any {
            $crate::models::AnyModel::Distance($m) => $body,
            $crate::models::AnyModel::Class($m) => $body,
            $crate::models::AnyModel::Eigen($m) => $body,
        }
    };
}
