//! Alphabets, blocks, streams, the canonical block enumeration and the
//! occurrence counters every other module is built on.

mod alphabet;
mod counting;
mod enumeration;
mod stream;

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

pub use alphabet::Alphabet;
pub use counting::{count_in_block, count_in_stream, hamming, running_density};
pub use enumeration::{enumerate_blocks, BlockEnumeration};
pub use stream::{
    parse_digit_tokens, read_stream_text, write_stream_text, DigitStream, FnProducer, Producer,
    VecProducer,
};

/// A finite digit. Alphabets are subsets of the nonnegative integers.
pub type Symbol = u64;

/// A digit of an itinerary: an ordinary symbol, or the sentinel for the
/// complement of the partition intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Digit {
    Int(Symbol),
    Inf,
}

impl Digit {
    pub fn as_symbol(self) -> Option<Symbol> {
        match self {
            Digit::Int(s) => Some(s),
            Digit::Inf => None,
        }
    }
}

impl PartialOrd for Digit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Digit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Digit::Int(a), Digit::Int(b)) => a.cmp(b),
            (Digit::Int(_), Digit::Inf) => Less,
            (Digit::Inf, Digit::Int(_)) => Greater,
            (Digit::Inf, Digit::Inf) => Equal,
        }
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Digit::Int(s) => write!(f, "{s}"),
            Digit::Inf => f.write_str("inf"),
        }
    }
}

impl From<Symbol> for Digit {
    fn from(s: Symbol) -> Self {
        Digit::Int(s)
    }
}

/// A finite word over integer symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Block(pub Vec<Symbol>);

impl Block {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Block(symbols)
    }

    pub fn empty() -> Self {
        Block(Vec::new())
    }

    /// Parses a compact word such as `"0110"`; every character is one digit.
    pub fn from_digits(s: &str) -> Self {
        Block(
            s.chars()
                .map(|c| c.to_digit(10).expect("decimal digit") as Symbol)
                .collect(),
        )
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }
}

impl Deref for Block {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Block {
    fn from(v: Vec<Symbol>) -> Self {
        Block(v)
    }
}

impl From<&[Symbol]> for Block {
    fn from(v: &[Symbol]) -> Self {
        Block(v.to_vec())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            f.write_str(&parts.join("."))
        }
    }
}
