use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::to_f64;
use crate::error::{Error, Result};
use crate::symbolic::{Alphabet, DigitStream, Producer, Symbol};

/// The mass of a cylinder: exact, or a float with an absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Mass {
    Exact(BigRational),
    Approx { value: f64, err: f64 },
}

impl Mass {
    pub fn zero() -> Self {
        Mass::Exact(BigRational::zero())
    }

    pub fn value(&self) -> f64 {
        match self {
            Mass::Exact(q) => to_f64(q),
            Mass::Approx { value, .. } => *value,
        }
    }

    /// Declared absolute error (rounding of an exact value is not counted).
    pub fn err(&self) -> f64 {
        match self {
            Mass::Exact(_) => 0.0,
            Mass::Approx { err, .. } => *err,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Mass::Exact(q) => Some(q),
            Mass::Approx { .. } => None,
        }
    }

    /// `(1−t)·self + t·other`.
    pub fn mix(&self, other: &Mass, t: &BigRational) -> Mass {
        let s = BigRational::one() - t;
        match (self, other) {
            (Mass::Exact(a), Mass::Exact(b)) => Mass::Exact(a * &s + b * t),
            _ => {
                let (sf, tf) = (to_f64(&s), to_f64(t));
                Mass::Approx {
                    value: sf * self.value() + tf * other.value(),
                    err: sf * self.err() + tf * other.err() + 4.0 * f64::EPSILON,
                }
            }
        }
    }
}

impl fmt::Display for Mass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mass::Exact(q) => write!(f, "{q}"),
            Mass::Approx { value, err } => write!(f, "{value:.12} ± {err:.1e}"),
        }
    }
}

/// A shift-invariant probability measure, seen through its cylinder masses.
pub trait MeasureOracle: Send + Sync + fmt::Debug {
    fn alphabet(&self) -> Alphabet;

    fn label(&self) -> String;

    /// `μ([w])`. The empty word has mass 1.
    fn mass(&self, w: &[Symbol]) -> Result<Mass>;

    /// A block of length `len` drawn so that long blocks are typical for
    /// the measure (used by rejection samplers of good blocks).
    fn sample_block(&self, rng: &mut dyn RngCore, len: usize) -> Result<Vec<Symbol>>;
}

pub type Oracle = Arc<dyn MeasureOracle>;

fn check_alphabet(alphabet: Alphabet, w: &[Symbol]) -> Result<()> {
    match w.iter().find(|&&d| !alphabet.contains(d)) {
        Some(&digit) => Err(Error::DigitOutOfRange { digit }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone)]
enum Weights {
    Finite { exact: Vec<BigRational>, cumulative: Vec<f64> },
    /// `P(k) = (1−p)·p^k` on `{0, 1, 2, …}`.
    Geometric { p: BigRational },
}

/// Product (i.i.d.) measure.
#[derive(Debug, Clone)]
pub struct Bernoulli {
    weights: Weights,
}

impl Bernoulli {
    /// Nonnegative weights on `{0, …, len−1}` summing to exactly 1.
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let total: BigRational = weights.iter().sum();
        if weights.iter().any(|w| w.is_negative()) || !total.is_one() {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        let mut acc = BigRational::zero();
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                to_f64(&acc)
            })
            .collect();
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(Bernoulli {
            weights: Weights::Finite { exact: weights, cumulative },
        })
    }

    pub fn uniform(size: u64) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Bernoulli::new(vec![BigRational::new(1.into(), size.into()); size as usize])
    }

    /// Countable alphabet ω with geometric weights `(1−p)·p^k`, `0 < p < 1`.
    pub fn geometric(p: BigRational) -> Result<Self> {
        if !p.is_positive() || p >= BigRational::one() {
            return Err(Error::InvalidWeights(format!("geometric ratio {p} not in (0,1)")));
        }
        Ok(Bernoulli {
            weights: Weights::Geometric { p },
        })
    }

    fn weight(&self, s: Symbol) -> BigRational {
        match &self.weights {
            Weights::Finite { exact, .. } => exact[s as usize].clone(),
            Weights::Geometric { p } => {
                (BigRational::one() - p) * num_traits::pow(p.clone(), s as usize)
            }
        }
    }
}

impl MeasureOracle for Bernoulli {
    fn alphabet(&self) -> Alphabet {
        match &self.weights {
            Weights::Finite { exact, .. } => Alphabet::finite(exact.len() as u64),
            Weights::Geometric { .. } => Alphabet::naturals(),
        }
    }

    fn label(&self) -> String {
        match &self.weights {
            Weights::Finite { exact, .. } => {
                let ws: Vec<String> = exact.iter().map(|w| w.to_string()).collect();
                format!("bernoulli({})", ws.join(", "))
            }
            Weights::Geometric { p } => format!("bernoulli(geometric {p})"),
        }
    }

    fn mass(&self, w: &[Symbol]) -> Result<Mass> {
        check_alphabet(self.alphabet(), w)?;
        Ok(Mass::Exact(w.iter().map(|&s| self.weight(s)).product()))
    }

    fn sample_block(&self, rng: &mut dyn RngCore, len: usize) -> Result<Vec<Symbol>> {
        Ok(match &self.weights {
            Weights::Finite { cumulative, .. } => (0..len)
                .map(|_| {
                    let u: f64 = rng.gen();
                    cumulative.partition_point(|&c| c <= u) as Symbol
                })
                .collect(),
            Weights::Geometric { p } => {
                let lp = to_f64(p).ln();
                (0..len)
                    .map(|_| {
                        let u: f64 = 1.0 - rng.gen::<f64>();
                        (u.ln() / lp).floor().to_u64().unwrap_or(0)
                    })
                    .collect()
            }
        })
    }
}

/// The point mass on `0^∞`.
#[derive(Debug, Clone)]
pub struct DiracZero {
    alphabet: Alphabet,
}

impl DiracZero {
    pub fn new(alphabet: Alphabet) -> Result<Self> {
        if alphabet.is_empty() || !alphabet.contains(0) {
            return Err(Error::AlphabetMismatch("dirac0 needs the symbol 0".into()));
        }
        Ok(DiracZero { alphabet })
    }
}

impl Default for DiracZero {
    fn default() -> Self {
        DiracZero {
            alphabet: Alphabet::finite(2),
        }
    }
}

impl MeasureOracle for DiracZero {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn label(&self) -> String {
        "dirac0".into()
    }

    fn mass(&self, w: &[Symbol]) -> Result<Mass> {
        check_alphabet(self.alphabet, w)?;
        let one = w.iter().all(|&s| s == 0);
        Ok(Mass::Exact(if one { BigRational::one() } else { BigRational::zero() }))
    }

    fn sample_block(&self, _rng: &mut dyn RngCore, len: usize) -> Result<Vec<Symbol>> {
        Ok(vec![0; len])
    }
}

/// `(1−t)·μ + t·ν`.
#[derive(Debug, Clone)]
pub struct Mix {
    mu: Oracle,
    nu: Oracle,
    t: BigRational,
}

impl Mix {
    pub fn new(mu: Oracle, nu: Oracle, t: BigRational) -> Result<Self> {
        if mu.alphabet() != nu.alphabet() {
            return Err(Error::AlphabetMismatch(format!("{} vs {}", mu.label(), nu.label())));
        }
        if t.is_negative() || t > BigRational::one() {
            return Err(Error::InvalidWeights(format!("mixing weight {t} not in [0,1]")));
        }
        Ok(Mix { mu, nu, t })
    }
}

impl MeasureOracle for Mix {
    fn alphabet(&self) -> Alphabet {
        self.mu.alphabet()
    }

    fn label(&self) -> String {
        format!("mix({}; {}, {})", self.t, self.mu.label(), self.nu.label())
    }

    fn mass(&self, w: &[Symbol]) -> Result<Mass> {
        Ok(self.mu.mass(w)?.mix(&self.nu.mass(w)?, &self.t))
    }

    /// The mixture is not ergodic, so no single orbit is typical for it;
    /// the block is a μ-block followed by a ν-block in proportion `1−t : t`.
    fn sample_block(&self, rng: &mut dyn RngCore, len: usize) -> Result<Vec<Symbol>> {
        let nu_len = (to_f64(&self.t) * len as f64).round() as usize;
        let mut out = self.mu.sample_block(rng, len - nu_len)?;
        out.extend(self.nu.sample_block(rng, nu_len)?);
        Ok(out)
    }
}

/// Concatenated independent samples of `oracle`, drawn from a seeded
/// generator in chunks of `chunk` symbols. For product measures the result
/// is an i.i.d. stream and hence almost surely generic; for other measures
/// choose `chunk` at least as long as the prefix that will be read.
pub fn sample_stream(oracle: Oracle, seed: u64, chunk: usize) -> DigitStream {
    DigitStream::new(SampledProducer {
        oracle,
        rng: ChaCha8Rng::seed_from_u64(seed),
        chunk: chunk.max(1),
    })
}

struct SampledProducer {
    oracle: Oracle,
    rng: ChaCha8Rng,
    chunk: usize,
}

impl Producer for SampledProducer {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) -> Result<()> {
        while buf.len() < target {
            buf.extend(self.oracle.sample_block(&mut self.rng, self.chunk)?);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn exact(m: Mass) -> BigRational {
        m.as_exact().unwrap().clone()
    }

    #[test]
    fn bernoulli_products() {
        let u = Bernoulli::uniform(2).unwrap();
        assert_eq!(exact(u.mass(&[0, 1]).unwrap()), rat(1, 4));
        let b = Bernoulli::new(vec![rat(3, 4), rat(1, 4)]).unwrap();
        assert_eq!(exact(b.mass(&[0, 0]).unwrap()), rat(9, 16));
        let d = Bernoulli::new(vec![rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(exact(d.mass(&[0, 0, 0]).unwrap()), rat(1, 1));
        assert_eq!(exact(d.mass(&[0, 1, 0]).unwrap()), rat(0, 1));
        assert!(Bernoulli::new(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(u.mass(&[2]).is_err());
    }

    #[test]
    fn dirac_and_mix() {
        let d = DiracZero::default();
        assert_eq!(exact(d.mass(&[0, 0, 0]).unwrap()), rat(1, 1));
        assert_eq!(exact(d.mass(&[0, 1, 0]).unwrap()), rat(0, 1));
        let u: Oracle = Arc::new(Bernoulli::uniform(2).unwrap());
        let d: Oracle = Arc::new(d);
        let m = Mix::new(u.clone(), d.clone(), rat(1, 2)).unwrap();
        assert_eq!(exact(m.mass(&[0]).unwrap()), rat(3, 4));
        let m0 = Mix::new(u.clone(), d.clone(), rat(0, 1)).unwrap();
        let m1 = Mix::new(u.clone(), d.clone(), rat(1, 1)).unwrap();
        for w in [vec![0], vec![1, 0], vec![0, 0, 1]] {
            assert_eq!(m0.mass(&w).unwrap(), u.mass(&w).unwrap());
            assert_eq!(m1.mass(&w).unwrap(), d.mass(&w).unwrap());
        }
        let three: Oracle = Arc::new(Bernoulli::uniform(3).unwrap());
        assert!(Mix::new(u, three, rat(1, 2)).is_err());
    }

    #[test]
    fn geometric_weights() {
        let g = Bernoulli::geometric(rat(1, 2)).unwrap();
        assert_eq!(exact(g.mass(&[0]).unwrap()), rat(1, 2));
        assert_eq!(exact(g.mass(&[2, 0]).unwrap()), rat(1, 16));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = g.sample_block(&mut rng, 20000).unwrap();
        let zeros = s.iter().filter(|&&d| d == 0).count() as f64 / 20000.0;
        assert!((zeros - 0.5).abs() < 0.02);
    }

    #[test]
    fn bernoulli_sampling_respects_zero_weights() {
        let b = Bernoulli::new(vec![rat(1, 1), rat(0, 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(b.sample_block(&mut rng, 1000).unwrap().iter().all(|&d| d == 0));
    }
}
