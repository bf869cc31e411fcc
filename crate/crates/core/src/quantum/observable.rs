use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tensor product of Pauli-Z on `qubits`, identity elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZObservable {
    qubits: Vec<usize>,
}

impl ZObservable {
    pub fn new(qubits: Vec<usize>) -> Result<Self> {
        let mut seen = qubits.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != qubits.len() {
            return Err(Error::Index(format!(
                "repeated qubit in observable {qubits:?}"
            )));
        }
        Ok(Self { qubits })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// Parity mask of this string on an `n_qubits` register.
    pub fn mask(&self, n_qubits: usize) -> Result<usize> {
        self.qubits.iter().try_fold(0usize, |m, &q| {
            if q >= n_qubits {
                Err(Error::Index(format!(
                    "observable qubit {q} out of range for {n_qubits} qubits"
                )))
            } else {
                Ok(m | 1 << (n_qubits - 1 - q))
            }
        })
    }
}

impl fmt::Display for ZObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.qubits.is_empty() {
            return f.write_str("I");
        }
        for q in &self.qubits {
            write!(f, "Z{q}")?;
        }
        Ok(())
    }
}

impl FromStr for ZObservable {
    type Err = Error;

    /// Parses `Z0Z1Z2`; `I` is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "I" {
            return Self::new(Vec::new());
        }
        let bad = || Error::Parse(format!("malformed Z-string observable {s:?}"));
        if !s.starts_with('Z') {
            return Err(bad());
        }
        let qubits = s[1..]
            .split('Z')
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(qubits)
    }
}

impl Serialize for ZObservable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ZObservable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
