use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Axis, StateVector, ZObservable};
use crate::error::{Error, Result};

/// Where a rotation gets its angle from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AngleSource {
    /// `theta[index]`.
    Theta(usize),
    /// `lambda[lambda] * data[data]`.
    ScaledData { lambda: usize, data: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateOp {
    Rotation {
        axis: Axis,
        qubit: usize,
        source: AngleSource,
    },
    Cz {
        a: usize,
        b: usize,
    },
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::Rotation {
                axis,
                qubit,
                source: AngleSource::Theta(i),
            } => write!(f, "R{}(theta[{i}]) q{qubit}", axis),
            GateOp::Rotation {
                axis,
                qubit,
                source: AngleSource::ScaledData { lambda, data },
            } => write!(f, "R{}(lambda[{lambda}]*d[{data}]) q{qubit}", axis),
            GateOp::Cz { a, b } => write!(f, "CZ q{a} q{b}"),
        }
    }
}

/// Per-observable gradients, indexed `[observable][parameter]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub theta: Vec<Vec<f64>>,
    pub lambda: Vec<Vec<f64>>,
}

/// A validated gate sequence on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
    // Minimum parameter-vector lengths the gate indices require.
    theta_len: usize,
    lambda_len: usize,
    data_len: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize, ops: Vec<GateOp>) -> Result<Self> {
        // Borrow the register-size check from the simulator.
        StateVector::zero(n_qubits)?;
        let (mut theta_len, mut lambda_len, mut data_len) = (0, 0, 0);
        let check = |q: usize| {
            if q >= n_qubits {
                Err(Error::Index(format!(
                    "gate qubit {q} out of range for {n_qubits} qubits"
                )))
            } else {
                Ok(())
            }
        };
        for op in &ops {
            match *op {
                GateOp::Rotation { qubit, source, .. } => {
                    check(qubit)?;
                    match source {
                        AngleSource::Theta(i) => theta_len = theta_len.max(i + 1),
                        AngleSource::ScaledData { lambda, data } => {
                            lambda_len = lambda_len.max(lambda + 1);
                            data_len = data_len.max(data + 1);
                        }
                    }
                }
                GateOp::Cz { a, b } => {
                    check(a)?;
                    check(b)?;
                    if a == b {
                        return Err(Error::Index(format!("CZ on a single qubit {a}")));
                    }
                }
            }
        }
        Ok(Self {
            n_qubits,
            ops,
            theta_len,
            lambda_len,
            data_len,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn theta_len(&self) -> usize {
        self.theta_len
    }

    pub fn lambda_len(&self) -> usize {
        self.lambda_len
    }

    pub fn data_len(&self) -> usize {
        self.data_len
    }

    /// Resolve every gate's angle (0 for CZ).
    pub(crate) fn resolve_angles(
        &self,
        theta: &[f64],
        lambda: &[f64],
        data: &[f64],
    ) -> Result<Vec<f64>> {
        if theta.len() < self.theta_len
            || lambda.len() < self.lambda_len
            || data.len() < self.data_len
        {
            return Err(Error::Decode(format!(
                "circuit needs theta[{}], lambda[{}], data[{}]; got {}, {}, {}",
                self.theta_len,
                self.lambda_len,
                self.data_len,
                theta.len(),
                lambda.len(),
                data.len()
            )));
        }
        self.ops
            .iter()
            .map(|op| {
                let angle = match *op {
                    GateOp::Rotation {
                        source: AngleSource::Theta(i),
                        ..
                    } => theta[i],
                    GateOp::Rotation {
                        source: AngleSource::ScaledData { lambda: l, data: d },
                        ..
                    } => lambda[l] * data[d],
                    GateOp::Cz { .. } => 0.0,
                };
                if angle.is_finite() {
                    Ok(angle)
                } else {
                    Err(Error::Numeric(format!("non-finite angle in gate {op}")))
                }
            })
            .collect()
    }

    pub(crate) fn forward(&self, angles: &[f64]) -> StateVector {
        let mut psi = StateVector::zero(self.n_qubits).expect("validated register size");
        for (op, &angle) in self.ops.iter().zip(angles) {
            match *op {
                GateOp::Rotation { axis, qubit, .. } => psi.rotate(axis, qubit, angle),
                GateOp::Cz { a, b } => psi.cz(a, b),
            }
        }
        psi
    }

    /// Reverse sweep. `psi` is the final state and `lam` the cotangent
    /// `Σ c_j O_j |psi⟩`; returns d(Σ c_j ⟨O_j⟩)/d(angle) for every gate.
    pub(crate) fn backward(
        &self,
        angles: &[f64],
        mut psi: StateVector,
        mut lam: StateVector,
    ) -> Vec<f64> {
        let mut out = vec![0.0; self.ops.len()];
        for (k, op) in self.ops.iter().enumerate().rev() {
            match *op {
                GateOp::Rotation { axis, qubit, .. } => {
                    // d/dθ of R(θ)=exp(-iθP/2) gives Im⟨λ|P|ψ⟩ after the gate.
                    out[k] = psi.pauli_element(&lam, axis, qubit).im;
                    psi.rotate(axis, qubit, -angles[k]);
                    lam.rotate(axis, qubit, -angles[k]);
                }
                GateOp::Cz { a, b } => {
                    psi.cz(a, b);
                    lam.cz(a, b);
                }
            }
        }
        out
    }

    /// Fold per-gate angle derivatives into (theta, lambda) gradients.
    pub(crate) fn scatter(
        &self,
        per_gate: &[f64],
        data: &[f64],
        n_theta: usize,
        n_lambda: usize,
    ) -> (Vec<f64>, Vec<f64>) {
        let mut g_theta = vec![0.0; n_theta];
        let mut g_lambda = vec![0.0; n_lambda];
        for (op, &g) in self.ops.iter().zip(per_gate) {
            match *op {
                GateOp::Rotation {
                    source: AngleSource::Theta(i),
                    ..
                } => g_theta[i] += g,
                GateOp::Rotation {
                    source: AngleSource::ScaledData { lambda, data: d },
                    ..
                } => g_lambda[lambda] += g * data[d],
                GateOp::Cz { .. } => {}
            }
        }
        (g_theta, g_lambda)
    }

    pub fn run(&self, theta: &[f64], lambda: &[f64], data: &[f64]) -> Result<StateVector> {
        let angles = self.resolve_angles(theta, lambda, data)?;
        Ok(self.forward(&angles))
    }

    /// Gradient of `Σ coeff · ⟨obs⟩` with respect to theta and lambda.
    pub fn weighted_gradient(
        &self,
        theta: &[f64],
        lambda: &[f64],
        data: &[f64],
        terms: &[(&ZObservable, f64)],
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let angles = self.resolve_angles(theta, lambda, data)?;
        let psi = self.forward(&angles);
        let mut lam = psi.zeros_like();
        for (obs, coeff) in terms {
            let mut o_psi = psi.clone();
            o_psi.apply_parity(obs.mask(self.n_qubits)?);
            lam.add_scaled(*coeff, &o_psi);
        }
        let per_gate = self.backward(&angles, psi, lam);
        Ok(self.scatter(&per_gate, data, theta.len(), lambda.len()))
    }

    /// Exact d⟨O⟩/dθ and d⟨O⟩/dλ for each observable in `observables`.
    pub fn gradients(
        &self,
        theta: &[f64],
        lambda: &[f64],
        data: &[f64],
        observables: &[ZObservable],
    ) -> Result<Gradients> {
        let mut out = Gradients {
            theta: Vec::with_capacity(observables.len()),
            lambda: Vec::with_capacity(observables.len()),
        };
        for obs in observables {
            let (t, l) = self.weighted_gradient(theta, lambda, data, &[(obs, 1.0)])?;
            out.theta.push(t);
            out.lambda.push(l);
        }
        Ok(out)
    }
}

/// Apply `ops` in order to `|0…0⟩`.
pub fn run_circuit(
    ops: &[GateOp],
    theta: &[f64],
    lambda: &[f64],
    data: &[f64],
    n_qubits: usize,
) -> Result<StateVector> {
    Circuit::new(n_qubits, ops.to_vec())?.run(theta, lambda, data)
}
