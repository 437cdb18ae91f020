use serde::{Deserialize, Serialize};

use super::Symbol;

/// Digit alphabet: either `{0, …, size-1}` or the countable set
/// `{start, start+1, …}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    Finite { size: u64 },
    Naturals { start: Symbol },
}

impl Alphabet {
    pub fn finite(size: u64) -> Self {
        Alphabet::Finite { size }
    }

    /// ω = {0, 1, 2, …}.
    pub fn naturals() -> Self {
        Alphabet::Naturals { start: 0 }
    }

    /// Continued-fraction digits {1, 2, 3, …}.
    pub fn positive_naturals() -> Self {
        Alphabet::Naturals { start: 1 }
    }

    pub fn contains(&self, s: Symbol) -> bool {
        match *self {
            Alphabet::Finite { size } => s < size,
            Alphabet::Naturals { start } => s >= start,
        }
    }

    pub fn size(&self) -> Option<u64> {
        match *self {
            Alphabet::Finite { size } => Some(size),
            Alphabet::Naturals { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Alphabet::Finite { size: 0 })
    }

    /// The `index`-th symbol of the alphabet in increasing order.
    pub fn symbol(&self, index: u64) -> Symbol {
        match *self {
            Alphabet::Finite { .. } => index,
            Alphabet::Naturals { start } => start + index,
        }
    }

    /// Inverse of [`Alphabet::symbol`].
    pub fn index_of(&self, s: Symbol) -> Option<u64> {
        if !self.contains(s) {
            return None;
        }
        Some(match *self {
            Alphabet::Finite { .. } => s,
            Alphabet::Naturals { start } => s - start,
        })
    }

    /// Symbols `0..limit` of the alphabet (all of it when finite and smaller).
    pub fn truncated(&self, limit: u64) -> Vec<Symbol> {
        let n = match *self {
            Alphabet::Finite { size } => size.min(limit),
            Alphabet::Naturals { .. } => limit,
        };
        (0..n).map(|i| self.symbol(i)).collect()
    }
}
