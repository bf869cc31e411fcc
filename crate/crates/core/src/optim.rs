//! Per-group parameter updates for policy-gradient ascent.

use serde::{Deserialize, Serialize};

use crate::genome::ParamShape;
use crate::policy::{LogProbGrads, PolicyParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    /// `p ← p + lr · g`
    Sgd,
    /// Adam on the ascent direction, one learning rate per group.
    #[default]
    Adam,
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-7;

#[derive(Debug, Clone)]
struct Moments {
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Moments {
    fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
        }
    }
}

#[derive(Debug, Clone)]
pub struct Optimizer {
    kind: OptimizerKind,
    /// (theta, lambda, weights)
    lrs: [f64; 3],
    moments: [Moments; 3],
    t: i32,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, lrs: [f64; 3], shape: ParamShape) -> Self {
        Self {
            kind,
            lrs,
            moments: [
                Moments::new(shape.n_theta),
                Moments::new(shape.n_lambda),
                Moments::new(shape.n_weights),
            ],
            t: 0,
        }
    }

    /// Ascend along `grad`.
    pub fn step(&mut self, params: &mut PolicyParams, grad: &LogProbGrads) {
        self.t += 1;
        let groups = [
            (&mut params.theta, &grad.theta),
            (&mut params.lambda, &grad.lambda),
            (&mut params.weights, &grad.weights),
        ];
        for (k, (p, g)) in groups.into_iter().enumerate() {
            let lr = self.lrs[k];
            match self.kind {
                OptimizerKind::Sgd => {
                    for (p, g) in p.iter_mut().zip(g) {
                        *p += lr * g;
                    }
                }
                OptimizerKind::Adam => {
                    let mo = &mut self.moments[k];
                    let c1 = 1.0 - BETA1.powi(self.t);
                    let c2 = 1.0 - BETA2.powi(self.t);
                    for i in 0..p.len() {
                        mo.m[i] = BETA1 * mo.m[i] + (1.0 - BETA1) * g[i];
                        mo.v[i] = BETA2 * mo.v[i] + (1.0 - BETA2) * g[i] * g[i];
                        let m_hat = mo.m[i] / c1;
                        let v_hat = mo.v[i] / c2;
                        p[i] += lr * m_hat / (v_hat.sqrt() + EPS);
                    }
                }
            }
        }
    }
}
