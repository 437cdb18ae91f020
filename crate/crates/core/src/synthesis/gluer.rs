use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::arith::floor;
use crate::error::{Error, Result};
use crate::numeration::{BetaRunner, BetaSystem};
use crate::symbolic::{Alphabet, Symbol};

/// Output of one glue step: `u·s·v′ ∈ 𝒢`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glued {
    /// Connector `s`, `|s| ≤ ε|v|`.
    pub s: Vec<Symbol>,
    /// Corrected copy `v′` of `v`, same length, `hamming(v, v′) < ε`.
    pub v: Vec<Symbol>,
    /// Positions of `v′` that differ from `v`.
    pub corrected: Vec<usize>,
}

/// Right feeble specification: a good set `𝒢` closed under concatenation,
/// a tolerance `N(ε)` and a glue step valid for `|v| ≥ N(ε)`.
pub trait Gluer: Send + Sync {
    fn name(&self) -> String;

    /// `w ∈ 𝒢`.
    fn contains(&self, w: &[Symbol]) -> Result<bool>;

    /// `w ∈ ℒ(X)`.
    fn in_language(&self, w: &[Symbol]) -> Result<bool>;

    /// `N(ε)`.
    fn tolerance(&self, eps: &BigRational) -> usize;

    /// The glue step for `v` appended to an arbitrary member of `𝒢`. The
    /// implemented shifts glue independently of `u` beyond its membership.
    fn glue_onto_good(&self, v: &[Symbol], eps: &BigRational) -> Result<Glued>;

    /// The shortest member of `𝒢` in the canonical enumeration.
    fn seed_word(&self) -> Vec<Symbol>;

    /// The checked glue step: `u ∈ 𝒢`, `v ∈ ℒ(X)`, `|v| ≥ N(ε)`.
    fn glue(&self, u: &[Symbol], v: &[Symbol], eps: &BigRational) -> Result<Glued> {
        if !u.is_empty() && !self.contains(u)? {
            return Err(Error::NotClosed);
        }
        if v.len() < self.tolerance(eps) {
            return Err(Error::GluerFailure(format!(
                "|v| = {} is below N({eps}) = {}",
                v.len(),
                self.tolerance(eps)
            )));
        }
        self.glue_onto_good(v, eps)
    }
}

/// The full shift `𝒟^ℕ`: every word is good and nothing needs repair.
#[derive(Debug, Clone)]
pub struct FullShiftGluer {
    alphabet: Alphabet,
}

impl FullShiftGluer {
    pub fn new(alphabet: Alphabet) -> Self {
        FullShiftGluer { alphabet }
    }
}

impl Gluer for FullShiftGluer {
    fn name(&self) -> String {
        "full".into()
    }

    fn contains(&self, w: &[Symbol]) -> Result<bool> {
        self.in_language(w)
    }

    fn in_language(&self, w: &[Symbol]) -> Result<bool> {
        Ok(w.iter().all(|&a| self.alphabet.contains(a)))
    }

    fn tolerance(&self, _eps: &BigRational) -> usize {
        1
    }

    fn glue_onto_good(&self, v: &[Symbol], _eps: &BigRational) -> Result<Glued> {
        if !self.in_language(v)? {
            return Err(Error::NotAdmissible(format!("symbol outside {:?}", self.alphabet)));
        }
        Ok(Glued {
            s: Vec::new(),
            v: v.to_vec(),
            corrected: Vec::new(),
        })
    }

    fn seed_word(&self) -> Vec<Symbol> {
        vec![self.alphabet.symbol(0)]
    }
}

/// A β-shift: `𝒢` is the set of labels of closed paths at vertex 0 of the
/// Parry graph; gluing zeroes the last nonzero symbol of `v`.
#[derive(Debug, Clone)]
pub struct BetaGluer {
    sys: BetaSystem,
}

impl BetaGluer {
    pub fn new(sys: BetaSystem) -> Self {
        BetaGluer { sys }
    }

    pub fn system(&self) -> &BetaSystem {
        &self.sys
    }

    /// End vertex of the path from 0 labelled `w`, if any.
    pub fn run(&self, w: &[Symbol]) -> Result<Option<usize>> {
        let max = self.sys.max_digit();
        let mut r = BetaRunner::new(&self.sys)?;
        for &a in w {
            if a > max || !r.feed(a)? {
                return Ok(None);
            }
        }
        Ok(Some(r.vertex()))
    }
}

impl Gluer for BetaGluer {
    fn name(&self) -> String {
        format!("beta:{}", self.sys.name())
    }

    fn contains(&self, w: &[Symbol]) -> Result<bool> {
        Ok(self.run(w)? == Some(0))
    }

    fn in_language(&self, w: &[Symbol]) -> Result<bool> {
        Ok(self.run(w)?.is_some())
    }

    /// `⌊1/ε⌋ + 1`: one repaired symbol out of `|v|` is then strictly
    /// below `ε`.
    fn tolerance(&self, eps: &BigRational) -> usize {
        if !eps.is_positive() {
            return usize::MAX;
        }
        let n: num_bigint::BigInt = floor(&eps.recip()) + 1;
        n.to_usize().unwrap_or(usize::MAX)
    }

    fn glue_onto_good(&self, v: &[Symbol], _eps: &BigRational) -> Result<Glued> {
        if !self.in_language(v)? {
            return Err(Error::NotAdmissible(format!("block of length {}", v.len())));
        }
        let mut out = v.to_vec();
        let corrected = match out.iter().rposition(|&d| d != 0) {
            Some(i) => {
                out[i] = 0;
                vec![i]
            }
            None => Vec::new(),
        };
        Ok(Glued {
            s: Vec::new(),
            v: out,
            corrected,
        })
    }

    fn seed_word(&self) -> Vec<Symbol> {
        vec![0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn full_shift() {
        let g = FullShiftGluer::new(Alphabet::finite(2));
        let r = g.glue(&[1, 1], &[0, 1, 1], &rat(1, 100)).unwrap();
        assert!(r.s.is_empty());
        assert_eq!(r.v, vec![0, 1, 1]);
        assert_eq!(g.tolerance(&rat(1, 100)), 1);
        assert!(g.contains(&[0, 1, 0, 1]).unwrap());
    }

    #[test]
    fn golden_gluer() {
        let g = BetaGluer::new(BetaSystem::golden());
        assert!(g.contains(&[0]).unwrap());
        assert!(g.contains(&[1, 0, 0]).unwrap());
        assert!(!g.contains(&[1, 0]).unwrap());
        assert!(!g.contains(&[1]).unwrap());
        assert!(!g.in_language(&[1, 1]).unwrap());
        let r = g.glue(&[0], &[1, 0, 1, 0], &rat(1, 3)).unwrap();
        assert_eq!(r.v, vec![1, 0, 0, 0]);
        assert_eq!(r.corrected, vec![2]);
        let mut uv = vec![0];
        uv.extend(&r.v);
        assert!(g.contains(&uv).unwrap());
        assert_eq!(g.tolerance(&rat(1, 4)), 5);
        assert!(g.glue(&[1], &[0, 0, 0, 0, 0], &rat(1, 4)).is_err());
        assert!(g.glue(&[0], &[1, 1, 0, 0, 0], &rat(1, 4)).is_err());
        assert!(g.glue(&[0], &[1, 0], &rat(1, 4)).is_err());
    }

    #[test]
    fn golden_good_set_closed_under_concatenation() {
        let g = BetaGluer::new(BetaSystem::golden());
        let words: Vec<Vec<Symbol>> = (1..=8usize)
            .flat_map(|len| (0..1u32 << len).map(move |c| (0..len).map(|i| ((c >> i) & 1) as Symbol).collect()))
            .collect();
        let good: Vec<&Vec<Symbol>> = words.iter().filter(|w| g.contains(w).unwrap()).collect();
        for u in &good {
            for v in good.iter().filter(|v| u.len() + v.len() <= 8) {
                let uv: Vec<Symbol> = u.iter().chain(v.iter()).copied().collect();
                assert!(g.contains(&uv).unwrap());
            }
        }
    }
}
