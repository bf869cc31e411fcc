//! Softmax policy over weighted Z-string expectations of a decoded circuit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{Architecture, ParamShape};
use crate::quantum::{Circuit, StateVector, ZObservable};

/// How raw environment features are mapped to rotation inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preprocess {
    /// Componentwise arctangent into (−π/2, π/2).
    #[default]
    Arctan,
    Identity,
}

impl Preprocess {
    pub fn apply(self, raw: &[f64]) -> Result<Vec<f64>> {
        if let Some(v) = raw.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite state component {v}")));
        }
        Ok(match self {
            Preprocess::Arctan => raw.iter().map(|v| v.atan()).collect(),
            Preprocess::Identity => raw.to_vec(),
        })
    }
}

pub fn preprocess_state(raw: &[f64]) -> Result<Vec<f64>> {
    Preprocess::Arctan.apply(raw)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    pub theta: Vec<f64>,
    pub lambda: Vec<f64>,
    /// One weight per action.
    pub weights: Vec<f64>,
    pub beta: f64,
}

impl PolicyParams {
    /// θ uniform in [0, 2π), λ and weights all one.
    pub fn init<R: Rng + ?Sized>(shape: ParamShape, beta: f64, rng: &mut R) -> Self {
        Self {
            theta: (0..shape.n_theta)
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect(),
            lambda: vec![1.0; shape.n_lambda],
            weights: vec![1.0; shape.n_weights],
            beta,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.beta.is_finite()
            && self
                .theta
                .iter()
                .chain(&self.lambda)
                .chain(&self.weights)
                .all(|v| v.is_finite())
    }
}

/// Gradients of log π(a|s), one vector per parameter group.
#[derive(Debug, Clone, PartialEq)]
pub struct LogProbGrads {
    pub theta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LogProbGrads {
    pub fn zeros(shape: ParamShape) -> Self {
        Self {
            theta: vec![0.0; shape.n_theta],
            lambda: vec![0.0; shape.n_lambda],
            weights: vec![0.0; shape.n_weights],
        }
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, scale: f64, other: &LogProbGrads) {
        let pairs = [
            (&mut self.theta, &other.theta),
            (&mut self.lambda, &other.lambda),
            (&mut self.weights, &other.weights),
        ];
        for (dst, src) in pairs {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += scale * s;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.theta
            .iter()
            .chain(&self.lambda)
            .chain(&self.weights)
            .all(|v| v.is_finite())
    }
}

/// Forward pass of the policy on one state, kept around for the gradient.
#[derive(Debug, Clone)]
pub struct PolicyEval {
    data: Vec<f64>,
    angles: Vec<f64>,
    final_state: StateVector,
    pub expectations: Vec<f64>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SoftmaxPqcPolicy {
    arch: Architecture,
    circuit: Circuit,
    observables: Vec<ZObservable>,
    masks: Vec<usize>,
    preprocess: Preprocess,
}

impl SoftmaxPqcPolicy {
    /// `observables[a]` is the readout for action `a`.
    pub fn new(
        arch: Architecture,
        n_qubits: usize,
        observables: Vec<ZObservable>,
        preprocess: Preprocess,
    ) -> Result<Self> {
        if observables.is_empty() {
            return Err(Error::Config("policy needs at least one action".into()));
        }
        let circuit = arch.circuit(n_qubits)?;
        let masks = observables
            .iter()
            .map(|o| o.mask(n_qubits))
            .collect::<Result<_>>()?;
        Ok(Self {
            arch,
            circuit,
            observables,
            masks,
            preprocess,
        })
    }

    pub fn architecture(&self) -> &Architecture {
        &self.arch
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn observables(&self) -> &[ZObservable] {
        &self.observables
    }

    pub fn n_actions(&self) -> usize {
        self.observables.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }

    pub fn shape(&self) -> ParamShape {
        self.arch.param_shape(self.n_qubits(), self.n_actions(), 1)
    }

    pub fn init_params<R: Rng + ?Sized>(&self, beta: f64, rng: &mut R) -> PolicyParams {
        PolicyParams::init(self.shape(), beta, rng)
    }

    fn check(&self, params: &PolicyParams, raw_state: &[f64]) -> Result<()> {
        let shape = self.shape();
        if params.theta.len() != shape.n_theta
            || params.lambda.len() != shape.n_lambda
            || params.weights.len() != shape.n_weights
        {
            return Err(Error::Config(format!(
                "parameter shape ({}, {}, {}) does not match architecture ({}, {}, {})",
                params.theta.len(),
                params.lambda.len(),
                params.weights.len(),
                shape.n_theta,
                shape.n_lambda,
                shape.n_weights
            )));
        }
        if raw_state.len() != self.n_qubits() {
            return Err(Error::Config(format!(
                "state has {} components for {} qubits",
                raw_state.len(),
                self.n_qubits()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, params: &PolicyParams, raw_state: &[f64]) -> Result<PolicyEval> {
        self.check(params, raw_state)?;
        let data = self.preprocess.apply(raw_state)?;
        let angles = self
            .circuit
            .resolve_angles(&params.theta, &params.lambda, &data)?;
        let final_state = self.circuit.forward(&angles);
        let expectations: Vec<f64> = self
            .masks
            .iter()
            .map(|&m| final_state.parity_expectation(m))
            .collect();
        let logits: Vec<f64> = expectations
            .iter()
            .zip(&params.weights)
            .map(|(e, w)| params.beta * w * e)
            .collect();
        Ok(PolicyEval {
            data,
            angles,
            final_state,
            expectations,
            probs: softmax(&logits),
        })
    }

    pub fn action_probs(&self, params: &PolicyParams, raw_state: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward(params, raw_state)?.probs)
    }

    /// ∇ log π(action | state) from a completed forward pass.
    pub fn grads_from(
        &self,
        params: &PolicyParams,
        eval: &PolicyEval,
        action: usize,
    ) -> Result<LogProbGrads> {
        let n = self.n_actions();
        if action >= n {
            return Err(Error::Index(format!("action {action} not in 0..{n}")));
        }
        // d log p(a) / d logit_b = δ_ab − p_b
        let dlogit: Vec<f64> = (0..n)
            .map(|b| f64::from(u8::from(b == action)) - eval.probs[b])
            .collect();
        let weights = (0..n)
            .map(|b| dlogit[b] * params.beta * eval.expectations[b])
            .collect();

        let mut cotangent = eval.final_state.zeros_like();
        let mut any = false;
        for ((d, w), &mask) in dlogit.iter().zip(&params.weights).zip(&self.masks) {
            let c = d * params.beta * w;
            if c != 0.0 {
                let mut o_psi = eval.final_state.clone();
                o_psi.apply_parity(mask);
                cotangent.add_scaled(c, &o_psi);
                any = true;
            }
        }
        let shape = self.shape();
        let (theta, lambda) = if any {
            let per_gate = self
                .circuit
                .backward(&eval.angles, eval.final_state.clone(), cotangent);
            self.circuit
                .scatter(&per_gate, &eval.data, shape.n_theta, shape.n_lambda)
        } else {
            (vec![0.0; shape.n_theta], vec![0.0; shape.n_lambda])
        };
        Ok(LogProbGrads {
            theta,
            lambda,
            weights,
        })
    }

    pub fn log_prob_grads(
        &self,
        params: &PolicyParams,
        raw_state: &[f64],
        action: usize,
    ) -> Result<LogProbGrads> {
        let eval = self.forward(params, raw_state)?;
        self.grads_from(params, &eval, action)
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Inverse-CDF draw from `probs` with a uniform `u` in [0, 1).
pub fn sample_action(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}
