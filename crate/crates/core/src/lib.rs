//! Desk-scale dataset distillation by trajectory matching with parameter
//! pruning.
//!
//! The pipeline has three stages: pretrain a pool of teacher networks on the
//! original dataset and snapshot their parameters every epoch
//! ([`teacher`]), then synthesize a tiny learnable dataset plus a learnable
//! inner learning rate by matching short student trajectories against the
//! teacher snapshots ([`distill`]), and finally train fresh networks from
//! scratch on the distilled data to measure how much of the original
//! dataset survived ([`eval`]).
//!
//! Parameter slots whose student/teacher ratio similarity falls below a
//! threshold are treated as difficult to match and dropped from the
//! matching loss ([`pruning`]). Meta-gradients flow through all student
//! updates via exact Hessian-vector products ([`engine`]), never finite
//! differences.
//!
//! All numerics are generic over the scalar type ([`scalar::Scalar`]):
//! `f32` is the run mode, `f64` exists for gradient-check oracles.

pub mod augment;
pub mod data;
pub mod distill;
pub mod engine;
pub mod error;
pub mod eval;
pub mod models;
pub mod params;
pub mod pruning;
pub mod rng;
pub mod scalar;
pub mod teacher;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::{Dual, Scalar, Value};

/// Run-mode tensor (`f32` is the production dtype).
pub type Tensor32 = tensor::Tensor<f32>;
/// Oracle-mode tensor, used by gradient-check tests.
pub type Tensor64 = tensor::Tensor<f64>;

pub type ParamVector32 = params::ParamVector<f32>;
pub type ParamVector64 = params::ParamVector<f64>;

pub type LabeledDataset32 = data::LabeledDataset<f32>;
pub type DistilledDataset32 = data::DistilledDataset<f32>;
pub type TrajectoryBuffer32 = teacher::TrajectoryBuffer<f32>;
