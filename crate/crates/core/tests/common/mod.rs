//! Independent reference implementations used by the integration and
//! acceptance tests. Nothing here calls into the simulator under test.
#![allow(dead_code)]

use eqas_core::{AngleSource, Axis, GateOp, ZObservable};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli(axis: Axis) -> DMatrix<C> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match axis {
        Axis::X => DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        Axis::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Axis::Z => DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

/// cos(θ/2)·I − i·sin(θ/2)·P
pub fn rotation(axis: Axis, angle: f64) -> DMatrix<C> {
    DMatrix::<C>::identity(2, 2) * c((angle / 2.0).cos(), 0.0)
        - pauli(axis) * c(0.0, (angle / 2.0).sin())
}

/// `m` on qubit `q` of an `n`-qubit register; qubit 0 is the leftmost
/// tensor factor (most significant index bit).
pub fn embed(n: usize, q: usize, m: &DMatrix<C>) -> DMatrix<C> {
    let mut out = DMatrix::<C>::identity(1, 1);
    for k in 0..n {
        let factor = if k == q {
            m.clone()
        } else {
            DMatrix::identity(2, 2)
        };
        out = out.kronecker(&factor);
    }
    out
}

pub fn cz(n: usize, a: usize, b: usize) -> DMatrix<C> {
    let dim = 1 << n;
    let mut m = DMatrix::<C>::identity(dim, dim);
    for idx in 0..dim {
        let bit = |q: usize| (idx >> (n - 1 - q)) & 1;
        if bit(a) == 1 && bit(b) == 1 {
            m[(idx, idx)] = c(-1.0, 0.0);
        }
    }
    m
}

pub fn z_string(n: usize, obs: &ZObservable) -> DMatrix<C> {
    let mut out = DMatrix::<C>::identity(1, 1);
    for k in 0..n {
        let factor = if obs.qubits().contains(&k) {
            pauli(Axis::Z)
        } else {
            DMatrix::identity(2, 2)
        };
        out = out.kronecker(&factor);
    }
    out
}

pub fn angle(source: AngleSource, theta: &[f64], lambda: &[f64], data: &[f64]) -> f64 {
    match source {
        AngleSource::Theta(i) => theta[i],
        AngleSource::ScaledData { lambda: l, data: d } => lambda[l] * data[d],
    }
}

pub fn gate_matrix(
    n: usize,
    op: &GateOp,
    theta: &[f64],
    lambda: &[f64],
    data: &[f64],
) -> DMatrix<C> {
    match *op {
        GateOp::Rotation {
            axis,
            qubit,
            source,
        } => embed(
            n,
            qubit,
            &rotation(axis, angle(source, theta, lambda, data)),
        ),
        GateOp::Cz { a, b } => cz(n, a, b),
    }
}

/// Product of dense gate matrices applied to |0…0⟩.
pub fn state(n: usize, ops: &[GateOp], theta: &[f64], lambda: &[f64], data: &[f64]) -> DVector<C> {
    let mut u = DMatrix::<C>::identity(1 << n, 1 << n);
    for op in ops {
        u = gate_matrix(n, op, theta, lambda, data) * u;
    }
    let mut zero = DVector::<C>::zeros(1 << n);
    zero[0] = c(1.0, 0.0);
    u * zero
}

pub fn expectation(
    n: usize,
    ops: &[GateOp],
    theta: &[f64],
    lambda: &[f64],
    data: &[f64],
    obs: &ZObservable,
) -> f64 {
    let psi = state(n, ops, theta, lambda, data);
    (psi.adjoint() * z_string(n, obs) * &psi)[(0, 0)].re
}

/// Central difference of `f` along every coordinate of `x`.
pub fn central_difference(x: &[f64], h: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let plus = f(&probe);
            probe[i] = x[i] - h;
            let minus = f(&probe);
            probe[i] = x[i];
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

/// Parameter-shift rule, valid when each coordinate drives exactly one
/// Pauli rotation.
pub fn parameter_shift(x: &[f64], mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let s = std::f64::consts::FRAC_PI_2;
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + s;
            let plus = f(&probe);
            probe[i] = x[i] - s;
            let minus = f(&probe);
            probe[i] = x[i];
            (plus - minus) / 2.0
        })
        .collect()
}

pub struct RandomCircuit {
    pub n: usize,
    pub ops: Vec<GateOp>,
    pub theta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub data: Vec<f64>,
    pub observable: ZObservable,
}

/// Up to 3 qubits and 10 gates. Each θ entry feeds exactly one rotation;
/// λ entries may be shared between data rotations.
pub fn random_circuit<R: Rng>(rng: &mut R) -> RandomCircuit {
    let n = rng.random_range(1..=3);
    let n_gates = rng.random_range(0..=10);
    let n_lambda = rng.random_range(1..=2);
    let mut ops = Vec::with_capacity(n_gates);
    let mut n_theta = 0;
    for _ in 0..n_gates {
        let kind = rng.random_range(0..10);
        if kind < 2 && n >= 2 {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            ops.push(GateOp::Cz { a, b });
            continue;
        }
        let axis = [Axis::X, Axis::Y, Axis::Z][rng.random_range(0..3)];
        let qubit = rng.random_range(0..n);
        let source = if kind < 4 {
            AngleSource::ScaledData {
                lambda: rng.random_range(0..n_lambda),
                data: rng.random_range(0..n),
            }
        } else {
            n_theta += 1;
            AngleSource::Theta(n_theta - 1)
        };
        ops.push(GateOp::Rotation {
            axis,
            qubit,
            source,
        });
    }
    let tau = std::f64::consts::TAU;
    let mut qubits: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.6)).collect();
    if qubits.is_empty() {
        qubits.push(rng.random_range(0..n));
    }
    RandomCircuit {
        n,
        ops,
        theta: (0..n_theta).map(|_| rng.random_range(-tau..tau)).collect(),
        lambda: (0..n_lambda).map(|_| rng.random_range(-2.0..2.0)).collect(),
        data: (0..n).map(|_| rng.random_range(-1.5..1.5)).collect(),
        observable: ZObservable::new(qubits).unwrap(),
    }
}

/// Independent hand count of (θ, λ, weights) for an architecture given as
/// block codes (terminal measurement excluded): each variational block and
/// the final measurement layer carry Rx/Ry/Rz on every qubit, each
/// encoding block one Rx per qubit, entanglement nothing.
pub fn hand_count(body: &[u8], n_qubits: usize, n_actions: usize) -> (usize, usize, usize) {
    let v = body.iter().filter(|&&c| c == 1).count();
    let d = body.iter().filter(|&&c| c == 2).count();
    (3 * n_qubits * (v + 1), n_qubits * d, n_actions)
}
