use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ZObservable;
use crate::error::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Rotation `exp(-i θ P / 2)` as a row-major 2×2 matrix.
pub(crate) fn rotation_matrix(axis: Axis, angle: f64) -> [Complex64; 4] {
    let (s, c) = (angle / 2.0).sin_cos();
    match axis {
        Axis::X => [
            Complex64::new(c, 0.0),
            Complex64::new(0.0, -s),
            Complex64::new(0.0, -s),
            Complex64::new(c, 0.0),
        ],
        Axis::Y => [
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ],
        Axis::Z => [Complex64::new(c, -s), ZERO, ZERO, Complex64::new(c, s)],
    }
}

/// Dense n-qubit state, `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Config(format!(
                "n_qubits must be in 1..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Wrap raw amplitudes. The caller is responsible for normalization.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS || amps.len() != 1 << n_qubits {
            return Err(Error::Config(format!(
                "{} amplitudes do not describe {n_qubits} qubits",
                amps.len()
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit mask selecting `qubit` in a basis index.
    pub(crate) fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::Index(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    pub fn apply_rotation(&mut self, axis: Axis, qubit: usize, angle: f64) -> Result<()> {
        if !angle.is_finite() {
            return Err(Error::Numeric(format!("non-finite rotation angle {angle}")));
        }
        self.check_qubit(qubit)?;
        self.rotate(axis, qubit, angle);
        Ok(())
    }

    pub(crate) fn rotate(&mut self, axis: Axis, qubit: usize, angle: f64) {
        let m = rotation_matrix(axis, angle);
        self.apply_single(qubit, &m);
    }

    fn apply_single(&mut self, qubit: usize, m: &[Complex64; 4]) {
        let mask = self.mask(qubit);
        for i0 in 0..self.amps.len() {
            if i0 & mask != 0 {
                continue;
            }
            let i1 = i0 | mask;
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = m[0] * a0 + m[1] * a1;
            self.amps[i1] = m[2] * a0 + m[3] * a1;
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::Index(format!(
                "CZ needs two distinct qubits, got {a} twice"
            )));
        }
        self.cz(a, b);
        Ok(())
    }

    pub(crate) fn cz(&mut self, a: usize, b: usize) {
        let both = self.mask(a) | self.mask(b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & both == both {
                *amp = -*amp;
            }
        }
    }

    /// Exact `⟨ψ|O|ψ⟩` for a Pauli-Z string.
    pub fn expectation(&self, obs: &ZObservable) -> Result<f64> {
        let mask = obs.mask(self.n_qubits)?;
        Ok(self.parity_expectation(mask))
    }

    pub(crate) fn parity_expectation(&self, mask: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let p = a.norm_sqr();
                if (i & mask).count_ones().is_multiple_of(2) {
                    p
                } else {
                    -p
                }
            })
            .sum()
    }

    /// `O|ψ⟩` for a Z-string given by its parity mask.
    pub(crate) fn apply_parity(&mut self, mask: usize) {
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i & mask).count_ones() % 2 == 1 {
                *amp = -*amp;
            }
        }
    }

    /// Accumulate `coeff · other` into `self`.
    pub(crate) fn add_scaled(&mut self, coeff: f64, other: &StateVector) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += b * coeff;
        }
    }

    pub(crate) fn zeros_like(&self) -> StateVector {
        StateVector {
            n_qubits: self.n_qubits,
            amps: vec![ZERO; self.amps.len()],
        }
    }

    /// `⟨bra| P_qubit |self⟩` for a single-qubit Pauli.
    pub(crate) fn pauli_element(&self, bra: &StateVector, axis: Axis, qubit: usize) -> Complex64 {
        let mask = self.mask(qubit);
        let mut acc = ZERO;
        for (i, b) in bra.amps.iter().enumerate() {
            let set = i & mask != 0;
            let v = match axis {
                Axis::X => self.amps[i ^ mask],
                Axis::Y => {
                    if set {
                        Complex64::new(0.0, 1.0) * self.amps[i ^ mask]
                    } else {
                        Complex64::new(0.0, -1.0) * self.amps[i ^ mask]
                    }
                }
                Axis::Z => {
                    if set {
                        -self.amps[i]
                    } else {
                        self.amps[i]
                    }
                }
            };
            acc += b.conj() * v;
        }
        acc
    }
}
