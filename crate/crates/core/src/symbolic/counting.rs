use num_rational::Ratio;

use super::{DigitStream, Symbol};
use crate::error::{Error, Result};

/// `e'(w, u)`: occurrences of `w` as a subblock of `u`, overlaps included.
pub fn count_in_block(w: &[Symbol], u: &[Symbol]) -> Result<u64> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if w.len() > u.len() {
        return Ok(0);
    }
    Ok(u.windows(w.len()).filter(|win| *win == w).count() as u64)
}

/// `e(w, x, N)`: occurrences of `w` in `x` starting at a position `< n`.
///
/// Reads the prefix `x[0, n + |w| - 1)`, since an occurrence starting before
/// `n` may run past it.
pub fn count_in_stream(w: &[Symbol], x: &mut DigitStream, n: usize) -> Result<u64> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if n == 0 {
        return Err(Error::ZeroCount);
    }
    let prefix = x.prefix(n + w.len() - 1)?;
    count_in_block(w, prefix)
}

/// Normalised Hamming distance of two equal-length blocks.
pub fn hamming(u: &[Symbol], v: &[Symbol]) -> Result<Ratio<u64>> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let diff = u.iter().zip(v).filter(|(a, b)| a != b).count() as u64;
    Ok(Ratio::new(diff, u.len() as u64))
}

/// `|A ∩ [0, n)| / n` for a sorted set of positions.
pub fn running_density(positions: &[u64], n: u64) -> Result<Ratio<u64>> {
    if n == 0 {
        return Err(Error::ZeroCount);
    }
    let inside = positions.partition_point(|&p| p < n) as u64;
    Ok(Ratio::new(inside, n))
}
