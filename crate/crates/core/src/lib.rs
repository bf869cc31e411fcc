//! Evolutionary search over parametrized quantum circuit architectures for
//! reinforcement-learning policies.
//!
//! The pipeline: integer [`genome::Genome`]s decode to circuit
//! [`genome::Architecture`]s, each architecture becomes a
//! [`policy::SoftmaxPqcPolicy`] trained with REINFORCE on a classic-control
//! [`env`], and NSGA-II ([`search`]) evolves the genomes using the mean
//! training reward as fitness.

pub mod analysis;
pub mod env;
pub mod error;
pub mod genome;
pub mod io;
pub mod optim;
pub mod policy;
pub mod quantum;
pub mod reinforce;
pub mod search;
pub mod seed;

pub use analysis::OpFrequencyMatrix;
pub use env::{EnvKind, EnvSpec, Environment, StepResult};
pub use error::{Error, Result};
pub use genome::{Architecture, Block, Genome, OpCode, ParamShape};
pub use io::Checkpoint;
pub use policy::{LogProbGrads, PolicyParams, Preprocess, SoftmaxPqcPolicy};
pub use quantum::{AngleSource, Axis, Circuit, GateOp, StateVector, ZObservable};
pub use reinforce::{LearningCurve, TrainConfig, TrainOutcome};
pub use search::{Evaluator, Individual, RlEvaluator, SearchConfig, SearchReport};
