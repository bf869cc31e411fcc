//! Classic-control environments with the standard Gym dynamics.

mod cartpole;
mod mountain_car;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use cartpole::CartPole;
pub use mountain_car::{height, MountainCar, MountainCarReward};

use crate::error::{Error, Result};
use crate::quantum::ZObservable;

#[derive(Debug, Clone, PartialEq)]
pub struct EnvSpec {
    pub name: &'static str,
    pub state_dim: usize,
    pub n_actions: usize,
    pub max_steps: usize,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub next_state: Vec<f64>,
    pub reward: f64,
    pub terminated: bool,
    pub truncated: bool,
}

impl StepResult {
    pub fn done(&self) -> bool {
        self.terminated || self.truncated
    }
}

pub trait Environment: Send {
    fn spec(&self) -> EnvSpec;

    /// Draw a fresh initial state from `seed`.
    fn reset(&mut self, seed: u64) -> Vec<f64>;

    /// Start from a given state (for replaying reference traces).
    fn reset_to(&mut self, state: &[f64]) -> Result<()>;

    fn state(&self) -> Vec<f64>;

    fn step(&mut self, action: usize) -> Result<StepResult>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvKind {
    CartPole,
    MountainCar,
}

impl EnvKind {
    pub fn spec(self) -> EnvSpec {
        match self {
            EnvKind::CartPole => EnvSpec {
                name: "CartPole-v1",
                state_dim: 4,
                n_actions: 2,
                max_steps: 500,
                gamma: 1.0,
            },
            EnvKind::MountainCar => EnvSpec {
                name: "MountainCar-v0",
                state_dim: 2,
                n_actions: 3,
                max_steps: 200,
                gamma: 1.0,
            },
        }
    }

    pub fn make(self) -> Box<dyn Environment> {
        self.make_with(MountainCarReward::default())
    }

    /// `reward` only affects MountainCar.
    pub fn make_with(self, reward: MountainCarReward) -> Box<dyn Environment> {
        match self {
            EnvKind::CartPole => Box::new(CartPole::new()),
            EnvKind::MountainCar => Box::new(MountainCar::new(reward)),
        }
    }

    /// Readout observable per action: CartPole shares `Z0Z1Z2Z3` between
    /// both actions, MountainCar maps `Z0, Z0Z1, Z1` onto its three.
    pub fn observables(self) -> Vec<ZObservable> {
        let z = |q: &[usize]| ZObservable::new(q.to_vec()).expect("distinct qubits");
        match self {
            EnvKind::CartPole => vec![z(&[0, 1, 2, 3]), z(&[0, 1, 2, 3])],
            EnvKind::MountainCar => vec![z(&[0]), z(&[0, 1]), z(&[1])],
        }
    }

    /// Default learning rates for (theta, lambda, weights).
    pub fn learning_rates(self) -> (f64, f64, f64) {
        match self {
            EnvKind::CartPole => (0.01, 0.1, 0.1),
            EnvKind::MountainCar => (0.01, 0.1, 0.01),
        }
    }

    pub fn uses_baseline(self) -> bool {
        matches!(self, EnvKind::MountainCar)
    }

    /// Default full-length training budget in episodes.
    pub fn default_episodes(self) -> usize {
        match self {
            EnvKind::CartPole => 500,
            EnvKind::MountainCar => 1000,
        }
    }

    /// Worst achievable per-episode return; used as the failure penalty.
    pub fn min_episode_return(self) -> f64 {
        match self {
            // an episode lasts at least one step
            EnvKind::CartPole => 1.0,
            EnvKind::MountainCar => -0.9 * self.spec().max_steps as f64,
        }
    }

    pub fn max_episode_return(self) -> f64 {
        match self {
            EnvKind::CartPole => self.spec().max_steps as f64,
            EnvKind::MountainCar => 0.0,
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.spec().name)
    }
}

impl FromStr for EnvKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CartPole-v1" => Ok(EnvKind::CartPole),
            "MountainCar-v0" => Ok(EnvKind::MountainCar),
            other => Err(Error::Config(format!(
                "unknown environment {other:?} (expected CartPole-v1 or MountainCar-v0)"
            ))),
        }
    }
}

impl Serialize for EnvKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EnvKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
