use rand::Rng;

use super::{EnvKind, EnvSpec, Environment, StepResult};
use crate::error::{Error, Result};
use crate::seed;

const GRAVITY: f64 = 9.8;
const MASS_CART: f64 = 1.0;
const MASS_POLE: f64 = 0.1;
const TOTAL_MASS: f64 = MASS_CART + MASS_POLE;
const HALF_LENGTH: f64 = 0.5;
const POLE_MASS_LENGTH: f64 = MASS_POLE * HALF_LENGTH;
const FORCE_MAG: f64 = 10.0;
const TAU: f64 = 0.02;
const X_THRESHOLD: f64 = 2.4;
const THETA_THRESHOLD: f64 = 12.0 * 2.0 * std::f64::consts::PI / 360.0;

/// CartPole-v1: explicit Euler, +1 per step including the failing one.
#[derive(Debug, Clone)]
pub struct CartPole {
    state: [f64; 4],
    steps: usize,
    done: bool,
}

impl CartPole {
    pub fn new() -> Self {
        Self {
            state: [0.0; 4],
            steps: 0,
            done: true,
        }
    }
}

impl Default for CartPole {
    fn default() -> Self {
        Self::new()
    }
}

impl Environment for CartPole {
    fn spec(&self) -> EnvSpec {
        EnvKind::CartPole.spec()
    }

    fn reset(&mut self, seed: u64) -> Vec<f64> {
        let mut rng = seed::rng(seed);
        for s in &mut self.state {
            *s = rng.random_range(-0.05..=0.05);
        }
        self.steps = 0;
        self.done = false;
        self.state.to_vec()
    }

    fn reset_to(&mut self, state: &[f64]) -> Result<()> {
        self.state = state.try_into().map_err(|_| {
            Error::Config(format!(
                "CartPole state has 4 components, got {}",
                state.len()
            ))
        })?;
        self.steps = 0;
        self.done = false;
        Ok(())
    }

    fn state(&self) -> Vec<f64> {
        self.state.to_vec()
    }

    fn step(&mut self, action: usize) -> Result<StepResult> {
        if self.done {
            return Err(Error::Usage(
                "step called on a finished CartPole episode".into(),
            ));
        }
        if action >= 2 {
            return Err(Error::Index(format!(
                "CartPole action {action} not in 0..2"
            )));
        }
        let [x, x_dot, theta, theta_dot] = self.state;
        let force = if action == 1 { FORCE_MAG } else { -FORCE_MAG };
        let (sin, cos) = theta.sin_cos();
        let temp = (force + POLE_MASS_LENGTH * theta_dot * theta_dot * sin) / TOTAL_MASS;
        let theta_acc = (GRAVITY * sin - cos * temp)
            / (HALF_LENGTH * (4.0 / 3.0 - MASS_POLE * cos * cos / TOTAL_MASS));
        let x_acc = temp - POLE_MASS_LENGTH * theta_acc * cos / TOTAL_MASS;

        self.state = [
            x + TAU * x_dot,
            x_dot + TAU * x_acc,
            theta + TAU * theta_dot,
            theta_dot + TAU * theta_acc,
        ];
        self.steps += 1;

        let [x, _, theta, _] = self.state;
        let terminated = !(-X_THRESHOLD..=X_THRESHOLD).contains(&x)
            || !(-THETA_THRESHOLD..=THETA_THRESHOLD).contains(&theta);
        let truncated = !terminated && self.steps >= self.spec().max_steps;
        self.done = terminated || truncated;
        Ok(StepResult {
            next_state: self.state.to_vec(),
            reward: 1.0,
            terminated,
            truncated,
        })
    }
}
