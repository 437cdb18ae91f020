use std::collections::HashMap;

use num_rational::{BigRational, Ratio};
use num_traits::Signed;
use serde::Serialize;

use super::{Mass, MeasureOracle};
use crate::arith::to_f64;
use crate::error::{Error, Result};
use crate::symbolic::{count_in_block, count_in_stream, Block, BlockEnumeration, DigitStream, Symbol};

/// Outcome of one certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The mass's error bound straddles the threshold.
    Indeterminate,
}

impl Verdict {
    fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            _ => Pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockVerdict {
    pub block: Block,
    pub count: u64,
    pub frequency: f64,
    pub mass: f64,
    pub mass_err: f64,
    /// `frequency − mass`.
    pub deviation: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoodnessReport {
    pub m: usize,
    pub eps: String,
    pub len: usize,
    pub blocks: Vec<BlockVerdict>,
    pub overall: Verdict,
}

impl GoodnessReport {
    pub fn is_good(&self) -> bool {
        self.overall == Verdict::Pass
    }
}

/// The first `m` blocks of the canonical enumeration over the oracle's
/// alphabet.
pub fn first_blocks(oracle: &dyn MeasureOracle, m: usize) -> Result<Vec<Block>> {
    Ok(BlockEnumeration::new(oracle.alphabet())?.take(m).collect())
}

/// Strict two-sided test `|count/len − mass| < ε`, certified.
pub fn compare(count: u64, len: usize, mass: &Mass, eps: &BigRational) -> Verdict {
    match mass {
        Mass::Exact(q) => {
            let f = BigRational::new(count.into(), len.into());
            if (f - q).abs() < *eps {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        Mass::Approx { value, err } => {
            let f = count as f64 / len as f64;
            let e = to_f64(eps);
            let d = (f - value).abs();
            // slack for the roundings of f, e and d
            let slack = 4.0 * f64::EPSILON * (1.0 + e + d);
            if d + err + slack < e {
                Verdict::Pass
            } else if d - err - slack >= e {
                Verdict::Fail
            } else {
                Verdict::Indeterminate
            }
        }
    }
}

/// `(m, ε)`-goodness of `u`: `μ([w_j]) − ε < e′(w_j, u)/|u| < μ([w_j]) + ε`
/// for the first `m` enumerated blocks.
pub fn is_good(u: &[Symbol], oracle: &dyn MeasureOracle, m: usize, eps: &BigRational) -> Result<GoodnessReport> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !eps.is_positive() || m == 0 {
        return Err(Error::OutOfDomain("goodness needs m ≥ 1 and ε > 0".into()));
    }
    let blocks = first_blocks(oracle, m)?;
    let mut overall = Verdict::Pass;
    let mut out = Vec::with_capacity(m);
    for w in blocks {
        let count = count_in_block(&w, u)?;
        let mass = oracle.mass(&w)?;
        let verdict = compare(count, u.len(), &mass, eps);
        overall = overall.and(verdict);
        let frequency = count as f64 / u.len() as f64;
        out.push(BlockVerdict {
            block: w,
            count,
            frequency,
            mass: mass.value(),
            mass_err: mass.err(),
            deviation: frequency - mass.value(),
            verdict,
        });
    }
    Ok(GoodnessReport {
        m,
        eps: eps.to_string(),
        len: u.len(),
        blocks: out,
        overall,
    })
}

/// `δ = ε / (2·max_{j ≤ m} |w_j|)`: changing fewer than `δ|u|` symbols of
/// an `(m, ε/2)`-good block leaves it `(m, ε)`-good.
pub fn robustness_delta(oracle: &dyn MeasureOracle, m: usize, eps: &BigRational) -> Result<BigRational> {
    let k = first_blocks(oracle, m)?.iter().map(|w| w.len()).max().unwrap_or(1);
    Ok(eps / BigRational::from_integer((2 * k).into()))
}

/// Exact sub-block frequencies `e′(w, u)/(|u| − |w| + 1)` for `|w| ≤ cap`.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    len: usize,
    cap: usize,
    counts: HashMap<Vec<Symbol>, u64>,
}

pub fn empirical(u: &[Symbol], cap: usize) -> Result<EmpiricalMeasure> {
    if cap == 0 || cap > u.len() {
        return Err(Error::DepthTooSmall { depth: u.len(), len: cap });
    }
    let mut counts = HashMap::new();
    for i in 0..u.len() {
        for l in 1..=cap.min(u.len() - i) {
            *counts.entry(u[i..i + l].to_vec()).or_insert(0) += 1;
        }
    }
    Ok(EmpiricalMeasure {
        len: u.len(),
        cap,
        counts,
    })
}

impl EmpiricalMeasure {
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn frequency(&self, w: &[Symbol]) -> Result<Ratio<u64>> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        if w.len() > self.cap {
            return Err(Error::UnsupportedBlock(format!("empirical cap is {}", self.cap)));
        }
        let n = self.counts.get(w).copied().unwrap_or(0);
        Ok(Ratio::new(n, (self.len - w.len() + 1) as u64))
    }

    /// Observed blocks with their frequencies, sorted.
    pub fn observed(&self) -> Vec<(Block, Ratio<u64>)> {
        let mut v: Vec<_> = self
            .counts
            .keys()
            .map(|w| (Block(w.clone()), self.frequency(w).unwrap()))
            .collect();
        v.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckpointReport {
    pub n: usize,
    pub report: GoodnessReport,
}

/// Running range of `e(w, x, N)/N` over the checkpoints.
#[derive(Debug, Clone, Serialize)]
pub struct BlockTrajectory {
    pub block: Block,
    pub frequencies: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticReport {
    pub oracle: String,
    pub checkpoints: Vec<CheckpointReport>,
    pub blocks: Vec<BlockTrajectory>,
}

impl DiagnosticReport {
    pub fn all_good(&self) -> bool {
        self.checkpoints.iter().all(|c| c.report.is_good())
    }

    pub fn max_gap(&self) -> f64 {
        self.blocks.iter().map(|b| b.gap).fold(0.0, f64::max)
    }
}

/// Goodness of `x_{[0,N)}` at each checkpoint `N`, and the oscillation
/// range of every tested block's running frequency.
pub fn convergence_diagnostic(
    x: &mut DigitStream,
    oracle: &dyn MeasureOracle,
    m: usize,
    eps: &BigRational,
    checkpoints: &[usize],
) -> Result<DiagnosticReport> {
    if checkpoints.is_empty() || checkpoints.contains(&0) {
        return Err(Error::ZeroCount);
    }
    let blocks = first_blocks(oracle, m)?;
    let mut reports = Vec::with_capacity(checkpoints.len());
    let mut traj: Vec<Vec<f64>> = vec![Vec::new(); blocks.len()];
    for &n in checkpoints {
        reports.push(CheckpointReport {
            n,
            report: is_good(x.prefix(n)?, oracle, m, eps)?,
        });
        for (w, t) in blocks.iter().zip(traj.iter_mut()) {
            t.push(count_in_stream(w, x, n)? as f64 / n as f64);
        }
    }
    let blocks = blocks
        .into_iter()
        .zip(traj)
        .map(|(block, frequencies)| {
            let min = frequencies.iter().copied().fold(f64::INFINITY, f64::min);
            let max = frequencies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            BlockTrajectory {
                block,
                frequencies,
                min,
                max,
                gap: max - min,
            }
        })
        .collect();
    Ok(DiagnosticReport {
        oracle: oracle.label(),
        checkpoints: reports,
        blocks,
    })
}
