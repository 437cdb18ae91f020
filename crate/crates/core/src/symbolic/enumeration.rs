use super::{Alphabet, Block};
use crate::error::{Error, Result};

/// The canonical enumeration `w_1, w_2, …` of all nonempty blocks.
///
/// Finite alphabets are listed length-major, then lexicographically. For a
/// countable alphabet, stage `t` lists (length-lex) every block of length
/// `≤ t` whose digit indices are `≤ t` and that no earlier stage produced.
/// In both orders every proper prefix of a block precedes it.
#[derive(Debug, Clone)]
pub struct BlockEnumeration {
    alphabet: Alphabet,
    state: EnumState,
}

#[derive(Debug, Clone)]
enum EnumState {
    Finite {
        radix: u64,
        digits: Vec<u64>,
    },
    Countable {
        stage: u64,
        len: usize,
        digits: Vec<u64>,
    },
}

impl BlockEnumeration {
    pub fn new(alphabet: Alphabet) -> Result<Self> {
        let state = match alphabet {
            Alphabet::Finite { size: 0 } => return Err(Error::EmptyAlphabet),
            Alphabet::Finite { size } => EnumState::Finite {
                radix: size,
                digits: Vec::new(),
            },
            Alphabet::Naturals { .. } => EnumState::Countable {
                stage: 1,
                len: 1,
                digits: Vec::new(),
            },
        };
        Ok(BlockEnumeration { alphabet, state })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn to_block(&self, indices: &[u64]) -> Block {
        Block(indices.iter().map(|&i| self.alphabet.symbol(i)).collect())
    }
}

/// Advances an odometer over `{0..radix}^len`; returns false on wrap-around.
fn odometer_step(digits: &mut [u64], radix: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

impl Iterator for BlockEnumeration {
    type Item = Block;

    fn next(&mut self) -> Option<Block> {
        match &mut self.state {
            EnumState::Finite { radix, digits } => {
                if digits.is_empty() || !odometer_step(digits, *radix) {
                    let next_len = digits.len() + 1;
                    *digits = vec![0; next_len];
                }
                let out = digits.clone();
                Some(self.to_block(&out))
            }
            EnumState::Countable { stage, len, digits } => loop {
                let radix = *stage + 1;
                let advanced = if digits.is_empty() {
                    *digits = vec![0; *len];
                    true
                } else {
                    odometer_step(digits, radix)
                };
                if !advanced {
                    if (*len as u64) < *stage {
                        *len += 1;
                    } else {
                        *stage += 1;
                        *len = 1;
                    }
                    digits.clear();
                    continue;
                }
                let t = *stage;
                let seen_before =
                    (*len as u64) < t && digits.iter().all(|&d| d < t);
                if !seen_before {
                    let out = digits.clone();
                    return Some(self.to_block(&out));
                }
            },
        }
    }
}

/// The first `count` entries of the canonical enumeration.
pub fn enumerate_blocks(alphabet: Alphabet, count: usize) -> Result<Vec<Block>> {
    if count == 0 {
        return Err(Error::ZeroCount);
    }
    Ok(BlockEnumeration::new(alphabet)?.take(count).collect())
}
