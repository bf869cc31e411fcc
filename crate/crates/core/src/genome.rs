//! Integer genomes over four opcodes and their decoded circuit architectures.
//!
//! A genome is read left to right until the first measurement code (0);
//! everything after it is inert. A genome that never measures gets an
//! implicit measurement: appended after the last gene when there is room
//! under `max_len`, otherwise occupying the last position.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quantum::{AngleSource, Axis, Circuit, GateOp};

pub const DEFAULT_MAX_LEN: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum OpCode {
    Measurement = 0,
    Variational = 1,
    DataEncoding = 2,
    Entanglement = 3,
}

impl OpCode {
    pub const ALL: [OpCode; 4] = [
        OpCode::Measurement,
        OpCode::Variational,
        OpCode::DataEncoding,
        OpCode::Entanglement,
    ];

    pub fn from_int(v: i64) -> Result<Self> {
        match v {
            0 => Ok(OpCode::Measurement),
            1 => Ok(OpCode::Variational),
            2 => Ok(OpCode::DataEncoding),
            3 => Ok(OpCode::Entanglement),
            _ => Err(Error::Parse(format!("opcode {v} is not in 0..=3"))),
        }
    }

    pub fn as_int(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genome {
    codes: Vec<OpCode>,
    max_len: usize,
}

impl Genome {
    pub fn new(codes: Vec<OpCode>, max_len: usize) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::Decode("empty genome".into()));
        }
        if codes.len() > max_len {
            return Err(Error::Decode(format!(
                "genome of length {} exceeds max length {max_len}",
                codes.len()
            )));
        }
        Ok(Self { codes, max_len })
    }

    pub fn from_ints(values: &[i64], max_len: usize) -> Result<Self> {
        let codes = values
            .iter()
            .map(|&v| OpCode::from_int(v))
            .collect::<Result<_>>()?;
        Self::new(codes, max_len)
    }

    /// Parse `"1-2-3-0"` or `"[1, 2, 3, 0]"` with an explicit max length.
    pub fn parse_with_max_len(s: &str, max_len: usize) -> Result<Self> {
        let s = s.trim();
        let values: Vec<i64> = if s.starts_with('[') {
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad genome {s:?}: {e}")))?
        } else {
            s.split('-')
                .map(|t| {
                    t.trim().parse::<i64>().map_err(|_| {
                        Error::Parse(format!("bad genome {s:?}: {t:?} is not an integer"))
                    })
                })
                .collect::<Result<_>>()?
        };
        Self::from_ints(&values, max_len)
    }

    pub fn codes(&self) -> &[OpCode] {
        &self.codes
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn terminator(&self) -> Option<usize> {
        self.codes.iter().position(|&c| c == OpCode::Measurement)
    }

    /// Truncate after the first measurement code.
    pub fn canonicalize(&self) -> Genome {
        match self.terminator() {
            Some(i) => Genome {
                codes: self.codes[..=i].to_vec(),
                max_len: self.max_len,
            },
            None => self.clone(),
        }
    }

    /// Canonical form with the terminator always explicit. Two genomes
    /// decode to the same architecture iff their normalized forms are equal.
    pub fn normalized(&self) -> Genome {
        self.decode().to_genome(self.max_len)
    }

    pub fn decode(&self) -> Architecture {
        let body = match self.terminator() {
            Some(i) => &self.codes[..i],
            None if self.codes.len() < self.max_len => &self.codes[..],
            None => &self.codes[..self.codes.len() - 1],
        };
        Architecture {
            blocks: body
                .iter()
                .map(|&c| Block::from_code(c).expect("non-terminal code"))
                .collect(),
        }
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.codes.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{}", c.as_int())?;
        }
        Ok(())
    }
}

impl FromStr for Genome {
    type Err = Error;

    /// Max length is the default (30) or the parsed length, whichever is larger.
    fn from_str(s: &str) -> Result<Self> {
        let g = Self::parse_with_max_len(s, usize::MAX)?;
        let max_len = g.len().max(DEFAULT_MAX_LEN);
        Self::new(g.codes, max_len)
    }
}

impl Serialize for Genome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Genome {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// JSON array form, e.g. `[1,2,3,0]`.
pub fn to_json_array(g: &Genome) -> String {
    let ints: Vec<u8> = g.codes.iter().map(|c| c.as_int()).collect();
    serde_json::to_string(&ints).expect("serializing integers")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    Variational,
    DataEncoding,
    Entanglement,
}

impl Block {
    fn from_code(c: OpCode) -> Option<Block> {
        match c {
            OpCode::Measurement => None,
            OpCode::Variational => Some(Block::Variational),
            OpCode::DataEncoding => Some(Block::DataEncoding),
            OpCode::Entanglement => Some(Block::Entanglement),
        }
    }

    pub fn code(self) -> OpCode {
        match self {
            Block::Variational => OpCode::Variational,
            Block::DataEncoding => OpCode::DataEncoding,
            Block::Entanglement => OpCode::Entanglement,
        }
    }
}

/// Ordered blocks followed by the terminal measurement (a variational
/// layer plus readout), which is implicit and always present.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Architecture {
    blocks: Vec<Block>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamShape {
    pub n_theta: usize,
    pub n_lambda: usize,
    pub n_weights: usize,
}

impl Architecture {
    pub fn new(blocks: Vec<Block>) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Operation count including the terminal measurement.
    pub fn len(&self) -> usize {
        self.blocks.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn count(&self, b: Block) -> usize {
        self.blocks.iter().filter(|&&x| x == b).count()
    }

    pub fn to_genome(&self, max_len: usize) -> Genome {
        let mut codes: Vec<OpCode> = self.blocks.iter().map(|b| b.code()).collect();
        codes.push(OpCode::Measurement);
        Genome {
            max_len: max_len.max(codes.len()),
            codes,
        }
    }

    pub fn param_shape(
        &self,
        n_qubits: usize,
        n_actions: usize,
        obs_per_action: usize,
    ) -> ParamShape {
        ParamShape {
            n_theta: 3 * n_qubits * (self.count(Block::Variational) + 1),
            n_lambda: n_qubits * self.count(Block::DataEncoding),
            n_weights: n_actions * obs_per_action,
        }
    }

    /// Expand to gates. Theta and lambda indices are allocated densely in
    /// gate order; encoding rotations read feature `q` on qubit `q`.
    pub fn circuit(&self, n_qubits: usize) -> Result<Circuit> {
        let mut ops = Vec::new();
        let mut next_theta = 0;
        let mut next_lambda = 0;
        let mut variational = |ops: &mut Vec<GateOp>| {
            for qubit in 0..n_qubits {
                for axis in [Axis::X, Axis::Y, Axis::Z] {
                    ops.push(GateOp::Rotation {
                        axis,
                        qubit,
                        source: AngleSource::Theta(next_theta),
                    });
                    next_theta += 1;
                }
            }
        };
        for block in &self.blocks {
            match block {
                Block::Variational => variational(&mut ops),
                Block::DataEncoding => {
                    for qubit in 0..n_qubits {
                        ops.push(GateOp::Rotation {
                            axis: Axis::X,
                            qubit,
                            source: AngleSource::ScaledData {
                                lambda: next_lambda,
                                data: qubit,
                            },
                        });
                        next_lambda += 1;
                    }
                }
                Block::Entanglement => ops.extend(circular_cz(n_qubits)),
            }
        }
        variational(&mut ops);
        Circuit::new(n_qubits, ops)
    }
}

/// CZ ring (0,1),(1,2),…,(n−1,0). Two qubits get a single CZ, one gets none.
fn circular_cz(n_qubits: usize) -> Vec<GateOp> {
    match n_qubits {
        0 | 1 => Vec::new(),
        2 => vec![GateOp::Cz { a: 0, b: 1 }],
        n => (0..n).map(|a| GateOp::Cz { a, b: (a + 1) % n }).collect(),
    }
}

pub fn decode(g: &Genome) -> Architecture {
    g.decode()
}

/// Number of distinct architectures reachable with genomes of length
/// `max_len`: 3^0 + 3^1 + … + 3^(max_len−1).
pub fn search_space_size(max_len: usize) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut term = BigUint::from(1u32);
    for _ in 0..max_len {
        total += &term;
        term *= 3u32;
    }
    total
}

/// Full-length genome with i.i.d. uniform codes (not canonicalized).
pub fn random_raw_genome<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Genome {
    assert!(max_len >= 1, "max_len must be at least 1");
    let codes = (0..max_len)
        .map(|_| OpCode::ALL[rng.random_range(0..4)])
        .collect();
    Genome { codes, max_len }
}

pub fn random_genome<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Genome {
    random_raw_genome(rng, max_len).canonicalize()
}

/// Alternating-layer genome: `depth` repetitions of (variational,
/// entanglement, encoding) and a final measurement.
pub fn alternating_layer_genome(depth: usize) -> Genome {
    let mut codes = Vec::with_capacity(3 * depth + 1);
    for _ in 0..depth {
        codes.extend([
            OpCode::Variational,
            OpCode::Entanglement,
            OpCode::DataEncoding,
        ]);
    }
    codes.push(OpCode::Measurement);
    let max_len = codes.len().max(DEFAULT_MAX_LEN);
    Genome { codes, max_len }
}
