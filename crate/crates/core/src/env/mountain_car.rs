use rand::Rng;

use super::{EnvKind, EnvSpec, Environment, StepResult};
use crate::error::{Error, Result};
use crate::seed;

const MIN_POSITION: f64 = -1.2;
const MAX_POSITION: f64 = 0.6;
const MAX_SPEED: f64 = 0.07;
const GOAL_POSITION: f64 = 0.5;
const FORCE: f64 = 0.001;
const GRAVITY: f64 = 0.0025;

/// Height of the track at `position`.
pub fn height(position: f64) -> f64 {
    (3.0 * position).sin() * 0.45 + 0.55
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MountainCarReward {
    /// `-1 + height(position)` after the step.
    #[default]
    Height,
    /// The stock `-1` per step.
    Standard,
}

#[derive(Debug, Clone)]
pub struct MountainCar {
    position: f64,
    velocity: f64,
    steps: usize,
    done: bool,
    reward: MountainCarReward,
}

impl MountainCar {
    pub fn new(reward: MountainCarReward) -> Self {
        Self {
            position: -0.5,
            velocity: 0.0,
            steps: 0,
            done: true,
            reward,
        }
    }
}

impl Environment for MountainCar {
    fn spec(&self) -> EnvSpec {
        EnvKind::MountainCar.spec()
    }

    fn reset(&mut self, seed: u64) -> Vec<f64> {
        let mut rng = seed::rng(seed);
        self.position = rng.random_range(-0.6..-0.4);
        self.velocity = 0.0;
        self.steps = 0;
        self.done = false;
        self.state()
    }

    fn reset_to(&mut self, state: &[f64]) -> Result<()> {
        let [p, v]: [f64; 2] = state.try_into().map_err(|_| {
            Error::Config(format!(
                "MountainCar state has 2 components, got {}",
                state.len()
            ))
        })?;
        self.position = p;
        self.velocity = v;
        self.steps = 0;
        self.done = false;
        Ok(())
    }

    fn state(&self) -> Vec<f64> {
        vec![self.position, self.velocity]
    }

    fn step(&mut self, action: usize) -> Result<StepResult> {
        if self.done {
            return Err(Error::Usage(
                "step called on a finished MountainCar episode".into(),
            ));
        }
        if action >= 3 {
            return Err(Error::Index(format!(
                "MountainCar action {action} not in 0..3"
            )));
        }
        let push = (action as f64 - 1.0) * FORCE + (3.0 * self.position).cos() * (-GRAVITY);
        self.velocity = (self.velocity + push).clamp(-MAX_SPEED, MAX_SPEED);
        self.position = (self.position + self.velocity).clamp(MIN_POSITION, MAX_POSITION);
        if self.position == MIN_POSITION && self.velocity < 0.0 {
            self.velocity = 0.0;
        }
        self.steps += 1;

        let terminated = self.position >= GOAL_POSITION && self.velocity >= 0.0;
        let truncated = !terminated && self.steps >= self.spec().max_steps;
        self.done = terminated || truncated;
        let reward = match self.reward {
            MountainCarReward::Height => -1.0 + height(self.position),
            MountainCarReward::Standard => -1.0,
        };
        Ok(StepResult {
            next_state: self.state(),
            reward,
            terminated,
            truncated,
        })
    }
}
