//! Cooperating hierarchical agents that learn temporal-logic tasks in a
//! crafting gridworld.
//!
//! Tasks are co-safe temporal-logic formulas over events like `got_wood` or
//! `used_factory`. Rewards come from formula progression (+1 when the
//! obligation resolves, -1 otherwise) plus a value-spread shaping term that
//! pushes the agents toward coordinated behaviour. Each agent is a two-level
//! learner: a meta-controller picks event subgoals, a controller executes
//! grid moves.

pub mod ltl;
pub mod shaping;
pub mod world;

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, NumAssignOps};

/// Floating-point scalar the numeric substrate is generic over.
pub trait Scalar: Float + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static {}

/// Scalar used by the training pipeline. The numeric code is generic over
/// [`Scalar`]; everything downstream instantiates it at `f64`.
pub type Real = f64;
