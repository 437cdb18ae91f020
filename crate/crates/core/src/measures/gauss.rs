use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use super::{Mass, MeasureOracle};
use crate::arith::to_f64;
use crate::error::Result;
use crate::numeration::cf_fundamental_interval;
use crate::symbolic::{Alphabet, Symbol};

/// The Gauss measure `dx / ((1+x) ln 2)` on continued-fraction digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gauss;

/// Gauss measure of the interval with endpoints `a < b` in `[0,1]`.
pub fn gauss_interval_mass(a: &BigRational, b: &BigRational) -> f64 {
    // ln((1+b)/(1+a)) = ln_1p((b−a)/(1+a)), with the ratio formed exactly.
    let r = (b - a) / (a + BigRational::one());
    to_f64(&r).ln_1p() / std::f64::consts::LN_2
}

/// Sampling chunk: digits taken from one Lebesgue-random point.
const CHUNK: usize = 256;

impl MeasureOracle for Gauss {
    fn alphabet(&self) -> Alphabet {
        Alphabet::positive_naturals()
    }

    fn label(&self) -> String {
        "gauss".into()
    }

    fn mass(&self, w: &[Symbol]) -> Result<Mass> {
        if w.is_empty() {
            return Ok(Mass::Exact(BigRational::one()));
        }
        let iv = cf_fundamental_interval(w)?;
        let value = gauss_interval_mass(&iv.lo, &iv.hi);
        Ok(Mass::Approx {
            value,
            err: 8.0 * f64::EPSILON * value,
        })
    }

    /// Concatenated digit runs of independent Lebesgue-random points.
    fn sample_block(&self, rng: &mut dyn RngCore, len: usize) -> Result<Vec<Symbol>> {
        let mut out = Vec::with_capacity(len);
        while out.len() < len {
            let n = CHUNK.min(len - out.len());
            out.extend(gauss_random_digits(rng, n));
        }
        Ok(out)
    }
}

fn random_bits(rng: &mut dyn RngCore, bits: usize) -> BigUint {
    let words = bits.div_ceil(32);
    let v: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
    let n = BigUint::from_slice(&v);
    n >> (words * 32 - bits)
}

/// The first `depth` continued-fraction digits of a uniformly random point
/// of `(0,1)`.
///
/// The point is revealed as a dyadic interval `[N/2^b, (N+1)/2^b]`; digits
/// shared by both endpoints are digits of every interior point. More bits
/// are appended until `depth` digits are determined.
pub fn gauss_random_digits(rng: &mut dyn RngCore, depth: usize) -> Vec<Symbol> {
    // Digits cost about π²/(6 ln² 2) ≈ 3.42 bits each.
    let mut bits = (3.6 * depth as f64) as usize + 64;
    let mut n = random_bits(rng, bits);
    loop {
        let d = common_prefix(&n, bits, depth);
        if d.len() >= depth {
            return d;
        }
        let extra = bits;
        n = (n << extra) + random_bits(rng, extra);
        bits += extra;
    }
}

fn common_prefix(n: &BigUint, bits: usize, depth: usize) -> Vec<Symbol> {
    let den = BigUint::from(1u32) << bits;
    // x = p/q: digit ⌊q/p⌋, then (p, q) ← (q mod p, p)
    let (mut p1, mut q1) = (n.clone(), den.clone());
    let (mut p2, mut q2) = (n + 1u32, den);
    let mut out = Vec::new();
    while out.len() < depth && !p1.is_zero() && !p2.is_zero() {
        let (d1, r1) = q1.div_rem(&p1);
        let (d2, r2) = q2.div_rem(&p2);
        if d1 != d2 || d1.is_zero() {
            break;
        }
        match d1.to_u64() {
            Some(d) => out.push(d),
            None => break,
        }
        (p1, q1) = (r1, p1);
        (p2, q2) = (r2, p2);
    }
    out
}

/// Closed-form check value: `Σ_{d ≤ n} μ([d]) = 1 − log₂(1 + 1/(n+1))`.
pub fn gauss_first_digit_partial_sum(n: u64) -> f64 {
    1.0 - (1.0 / (n as f64 + 1.0)).ln_1p() / std::f64::consts::LN_2
}
