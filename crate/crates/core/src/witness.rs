//! Order classification and witness records.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::ProjectiveMatrix;
use crate::family::{Generators, RepFamily};
use crate::tree::{displacement, PrimeContext};
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderClass {
    Finite(u8),
    Infinite,
}

impl OrderClass {
    pub fn is_finite(self) -> bool {
        matches!(self, OrderClass::Finite(_))
    }
}

impl fmt::Display for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderClass::Finite(n) => write!(f, "{n}"),
            OrderClass::Infinite => f.write_str("infinite"),
        }
    }
}

impl FromStr for OrderClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "infinite" => Ok(OrderClass::Infinite),
            "1" => Ok(OrderClass::Finite(1)),
            "2" => Ok(OrderClass::Finite(2)),
            "3" => Ok(OrderClass::Finite(3)),
            "4" => Ok(OrderClass::Finite(4)),
            "6" => Ok(OrderClass::Finite(6)),
            other => Err(format!("unknown order class {other:?}")),
        }
    }
}

/// Order of `g` in PGL₂(ℚ), read off from `k = trace²/det`.
///
/// Scalar matrices have order 1 and nonscalar trace-zero matrices order 2.
/// Otherwise, with `det > 0`, `k = 1, 2, 3` gives orders 3, 4, 6; anything
/// else (parabolic `k = 4`, hyperbolic, or `det < 0` with nonzero trace) has
/// infinite order.
pub fn classify_order(g: &ProjectiveMatrix) -> OrderClass {
    if g.is_identity() {
        return OrderClass::Finite(1);
    }
    let trace = g.trace();
    if trace.is_zero() {
        return OrderClass::Finite(2);
    }
    let det = g.det();
    if !det.is_positive() {
        return OrderClass::Infinite;
    }
    let square = &trace * &trace;
    if square == det {
        OrderClass::Finite(3)
    } else if square == &det * 2 {
        OrderClass::Finite(4)
    } else if square == &det * 3 {
        OrderClass::Finite(6)
    } else {
        OrderClass::Infinite
    }
}

/// A word together with everything the tree criterion needs to know about its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRecord {
    pub word: Word,
    pub matrix: ProjectiveMatrix,
    pub det: BigInt,
    pub trace: BigInt,
    pub order: OrderClass,
    pub displacement2: u32,
    pub displacement3: u32,
}

impl WitnessRecord {
    pub fn from_parts(word: Word, matrix: ProjectiveMatrix) -> Self {
        Self {
            det: matrix.det(),
            trace: matrix.trace(),
            order: classify_order(&matrix),
            displacement2: displacement(&matrix, PrimeContext::TWO),
            displacement3: displacement(&matrix, PrimeContext::THREE),
            word,
            matrix,
        }
    }

    pub fn evaluate(word: Word, generators: &Generators) -> Self {
        let matrix = generators.evaluate(&word);
        Self::from_parts(word, matrix)
    }

    /// Fixes both base vertices and has infinite order.
    pub fn is_witness(&self) -> bool {
        self.displacement2 == 0 && self.displacement3 == 0 && self.order == OrderClass::Infinite
    }

    pub fn to_line(&self) -> WitnessLine {
        let e = self.matrix.entries();
        WitnessLine {
            word: self.word.to_string(),
            length: self.word.len(),
            matrix: [
                [e[0].to_string(), e[1].to_string()],
                [e[2].to_string(), e[3].to_string()],
            ],
            det: self.det.to_string(),
            trace: self.trace.to_string(),
            order: self.order.to_string(),
            displacement2: self.displacement2,
            displacement3: self.displacement3,
        }
    }

    /// One JSON object, no trailing newline.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_line()).expect("witness line serializes")
    }

    pub fn to_text(&self) -> String {
        let word = if self.word.is_empty() {
            "(empty)".to_string()
        } else {
            self.word.to_string()
        };
        format!(
            "word:          {word}\nlength:        {}\nmatrix:        {}\ndet:           {}\ntrace:         {}\norder:         {}\ndisplacements: ({}, {})",
            self.word.len(),
            self.matrix,
            self.det,
            self.trace,
            self.order,
            self.displacement2,
            self.displacement3
        )
    }
}

/// Record at `t = 9`.
pub fn build_record(word: Word) -> WitnessRecord {
    WitnessRecord::evaluate(word, RepFamily::long_reid().generators())
}

/// Line format of a witness record. Big integers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessLine {
    pub word: String,
    pub length: usize,
    pub matrix: [[String; 2]; 2],
    pub det: String,
    pub trace: String,
    pub order: String,
    pub displacement2: u32,
    pub displacement3: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed witness record: {0}")]
pub struct RecordParseError(pub String);

impl TryFrom<WitnessLine> for WitnessRecord {
    type Error = RecordParseError;

    fn try_from(line: WitnessLine) -> Result<Self, Self::Error> {
        let bad = |what: &str| RecordParseError(what.to_string());
        let word: Word = line.word.parse().map_err(|_| bad("word"))?;
        let [[a, b], [c, d]] = &line.matrix;
        let matrix = ProjectiveMatrix::from_decimal([a, b, c, d]).map_err(|_| bad("matrix"))?;
        let record = WitnessRecord::from_parts(word, matrix);
        // Derived fields must agree exactly, including the canonical matrix form.
        if record.to_line() != line {
            return Err(bad("fields disagree with the word's matrix"));
        }
        Ok(record)
    }
}

impl FromStr for WitnessRecord {
    type Err = RecordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let line: WitnessLine =
            serde_json::from_str(s).map_err(|e| RecordParseError(e.to_string()))?;
        line.try_into()
    }
}
