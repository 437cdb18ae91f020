use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Mass, MeasureOracle};
use crate::error::{Error, Result};
use crate::numeration::BetaSystem;
use crate::symbolic::{Alphabet, Symbol};

/// The Parry graph with vertex lengths `r_i`, folded onto its cycle when ē
/// is eventually periodic.
#[derive(Debug, Clone)]
struct Chain {
    beta: f64,
    /// `e[i] = e_{i+1}`.
    e: Vec<Symbol>,
    /// `r[i]`: a point reaching vertex `i` after `k` digits lies in an
    /// interval mapped by `T^k` onto `[0, r_i)`.
    r: Vec<f64>,
    cycle: Option<(usize, usize)>,
}

impl Chain {
    fn new(sys: &BetaSystem) -> Result<Self> {
        let beta = sys.beta_f64();
        let cycle = sys.e_period();
        let depth = match cycle {
            Some((s, l)) => s + l + 1,
            None => ((64.0 / beta.log2()).ceil() as usize + 8).clamp(64, 8192),
        };
        Ok(Chain {
            beta,
            e: sys.e_prefix(depth)?,
            r: sys.vertex_lengths(depth)?,
            cycle,
        })
    }

    /// Canonical representative of a vertex. Without a cycle, vertices past
    /// the table are clamped; reaching them has probability below 2^-64.
    fn fold(&self, v: usize) -> usize {
        match self.cycle {
            Some((s, l)) if v >= s + l => s + (v - s) % l,
            Some(_) => v,
            None => v.min(self.e.len() - 1),
        }
    }

    fn step(&self, v: usize, a: Symbol) -> Option<usize> {
        let e = self.e[v];
        match a.cmp(&e) {
            std::cmp::Ordering::Less => Some(0),
            std::cmp::Ordering::Equal => Some(self.fold(v + 1)),
            std::cmp::Ordering::Greater => None,
        }
    }

    fn run(&self, w: &[Symbol]) -> Option<usize> {
        w.iter().try_fold(0, |v, &a| self.step(v, a))
    }

    fn r_at(&self, n: usize) -> f64 {
        self.r[self.fold(n)]
    }

    /// Digit process of a Lebesgue-random point: from vertex `i` each
    /// digit `a < e_{i+1}` has probability `1/(β r_i)`, the spine digit
    /// `r_{i+1}/(β r_i)`.
    fn sample(&self, rng: &mut dyn RngCore, len: usize) -> Vec<Symbol> {
        let mut v = 0;
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let u = rng.gen::<f64>() * self.beta * self.r[v];
            let e = self.e[v];
            if u < e as f64 {
                out.push(u as Symbol);
                v = 0;
            } else {
                out.push(e);
                v = self.fold(v + 1);
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
enum Method {
    Density {
        /// Normalising constant of the density.
        c: f64,
        /// Number of terms kept in the density series.
        terms: usize,
    },
    Birkhoff {
        samples: usize,
        max_len: usize,
        counts: HashMap<(usize, u64), u64>,
        windows: Vec<u64>,
    },
}

/// Parry measure of a β-shift.
#[derive(Debug, Clone)]
pub struct Parry {
    name: String,
    chain: Chain,
    method: Method,
}

const ORBIT_LEN: usize = 4096;
const BURN_IN: usize = 64;

impl Parry {
    /// Cylinder masses from the density `h(x) = c Σ_{n: x < T^n 1} β^{−n}`
    /// (with `T^n 1` read along ē), integrated over each cylinder.
    pub fn density(sys: &BetaSystem) -> Result<Self> {
        let chain = Chain::new(sys)?;
        let terms = ((18.0 * std::f64::consts::LN_10) / chain.beta.ln()).ceil() as usize + 1;
        let norm: f64 = (0..terms).map(|n| chain.beta.powi(-(n as i32)) * chain.r_at(n)).sum();
        Ok(Parry {
            name: sys.name().to_string(),
            chain,
            method: Method::Density { c: 1.0 / norm, terms },
        })
    }

    /// Cylinder masses estimated as visit frequencies along `samples`
    /// symbols of Lebesgue-random orbits, for blocks up to length 6.
    pub fn birkhoff(sys: &BetaSystem, samples: usize, seed: u64) -> Result<Self> {
        if samples < 10_000 {
            return Err(Error::InsufficientSamples(format!("{samples} < 10000")));
        }
        let chain = Chain::new(sys)?;
        let max_len = 6;
        let radix = sys.max_digit() + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = HashMap::new();
        let mut windows = vec![0u64; max_len + 1];
        let mut done = 0;
        while done < samples {
            let n = ORBIT_LEN.min(samples - done);
            let orbit = chain.sample(&mut rng, n + BURN_IN);
            let orbit = &orbit[BURN_IN..];
            for i in 0..orbit.len() {
                let mut key = 0u64;
                for (l, &a) in orbit[i..].iter().take(max_len).enumerate() {
                    key = key * radix + a;
                    *counts.entry((l + 1, key)).or_insert(0) += 1;
                    windows[l + 1] += 1;
                }
            }
            done += n;
        }
        Ok(Parry {
            name: sys.name().to_string(),
            chain,
            method: Method::Birkhoff {
                samples,
                max_len,
                counts,
                windows,
            },
        })
    }

    fn radix(&self) -> u64 {
        self.chain.e[0] + 1
    }
}

impl MeasureOracle for Parry {
    fn alphabet(&self) -> Alphabet {
        Alphabet::finite(self.radix())
    }

    fn label(&self) -> String {
        match &self.method {
            Method::Density { .. } => format!("parry({}, density)", self.name),
            Method::Birkhoff { samples, .. } => format!("parry({}, birkhoff {samples})", self.name),
        }
    }

    fn mass(&self, w: &[Symbol]) -> Result<Mass> {
        if let Some(&digit) = w.iter().find(|&&a| a >= self.radix()) {
            return Err(Error::DigitOutOfRange { digit });
        }
        let Some(end) = self.chain.run(w) else {
            return Ok(Mass::zero());
        };
        match &self.method {
            Method::Density { c, terms } => {
                let beta = self.chain.beta;
                let mut a = 0.0;
                let mut scale = 1.0;
                for &d in w {
                    scale /= beta;
                    a += d as f64 * scale;
                }
                let len = scale * self.chain.r[end];
                let mut acc = 0.0;
                let mut weight = 1.0;
                for n in 0..*terms {
                    let overlap = ((a + len).min(self.chain.r_at(n)) - a).max(0.0);
                    acc += weight * overlap;
                    weight /= beta;
                }
                Ok(Mass::Approx {
                    value: c * acc,
                    err: 1e-12,
                })
            }
            Method::Birkhoff {
                samples,
                max_len,
                counts,
                windows,
            } => {
                if w.is_empty() {
                    return Ok(Mass::Exact(BigRational::one()));
                }
                if w.len() > *max_len {
                    return Err(Error::UnsupportedBlock(format!("sampled masses cover blocks up to length {max_len}")));
                }
                let key = w.iter().fold(0u64, |k, &a| k * self.radix() + a);
                let n = counts.get(&(w.len(), key)).copied().unwrap_or(0);
                Ok(Mass::Approx {
                    value: n as f64 / windows[w.len()] as f64,
                    err: 5.0 / (*samples as f64).sqrt(),
                })
            }
        }
    }

    fn sample_block(&self, rng: &mut dyn RngCore, len: usize) -> Result<Vec<Symbol>> {
        Ok(self.chain.sample(rng, len))
    }
}
