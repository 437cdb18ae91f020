use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{BlockSource, Gluer};
use crate::error::{Error, Result};
use crate::measures::Verdict;
use crate::symbolic::{DigitStream, Producer, Symbol};

/// Parameters `(m_n, ε_n, L_n)` of the concatenation.
///
/// Defaults: `m_n = n`, `ε_n = 2^{−n}`, and a length floor only for the
/// first block; explicit entries override the first few stages.
#[derive(Debug, Clone)]
pub struct Schedule {
    pub first_len: usize,
    pub stages: Vec<(usize, BigRational, usize)>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            first_len: 16,
            stages: Vec::new(),
        }
    }
}

impl Schedule {
    pub fn m(&self, n: usize) -> usize {
        self.stages.get(n - 1).map_or(n, |s| s.0)
    }

    pub fn eps(&self, n: usize) -> BigRational {
        self.stages
            .get(n - 1)
            .map_or_else(|| BigRational::new(BigInt::one(), BigInt::one() << n), |s| s.1.clone())
    }

    pub fn floor(&self, n: usize) -> usize {
        match self.stages.get(n - 1) {
            Some(s) => s.2,
            None if n == 1 => self.first_len,
            None => 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockRecord {
    pub n: usize,
    pub m: usize,
    pub eps: String,
    /// Start of `v_n = s_n u′_n` in the output.
    pub start: usize,
    pub connector: usize,
    pub len: usize,
    pub attempts: usize,
    pub verdict: Verdict,
    /// Absolute output positions changed by gluing.
    pub corrected: Vec<usize>,
    /// `(|u₁| + … + |u_{n−1}|) / |u_n|`.
    pub dominating_ratio: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SynthesisLog {
    pub source: String,
    pub gluer: String,
    pub blocks: Vec<BlockRecord>,
}

impl SynthesisLog {
    pub fn corrections(&self) -> usize {
        self.blocks.iter().map(|b| b.corrected.len() + b.connector).sum()
    }
}

/// Builds `x = v₁v₂…` from good blocks `u_n`, each glued onto the prefix.
pub struct Synthesizer {
    source: Box<dyn BlockSource>,
    gluer: Arc<dyn Gluer>,
    schedule: Schedule,
    n: usize,
    /// `|u₁| + … + |u_n|`.
    total_u: u128,
    last_len: u128,
    emitted: usize,
    log: SynthesisLog,
}

impl Synthesizer {
    pub fn new(source: Box<dyn BlockSource>, gluer: Arc<dyn Gluer>, schedule: Schedule) -> Self {
        let log = SynthesisLog {
            source: source.label(),
            gluer: gluer.name(),
            blocks: Vec::new(),
        };
        Synthesizer {
            source,
            gluer,
            schedule,
            n: 0,
            total_u: 0,
            last_len: 0,
            emitted: 0,
            log,
        }
    }

    pub fn log(&self) -> &SynthesisLog {
        &self.log
    }

    /// Least admissible `|u_{n+1}|`: at least `(n+1)·S_n`, `N(ε_{n+1})` and
    /// the floor, and long enough that `S_n/|u_{n+1}| < S_{n−1}/|u_n|`.
    fn next_len(&self, n: usize, eps: &BigRational) -> usize {
        let s = self.total_u;
        let mut l = (n as u128 * s)
            .max(self.gluer.tolerance(eps) as u128)
            .max(self.schedule.floor(n) as u128)
            .max(1);
        let prev_s = s - self.last_len;
        if n >= 3 && prev_s > 0 {
            l = l.max(s * self.last_len / prev_s + 1);
        }
        l as usize
    }

    /// Produces the next `v_n`.
    pub fn next_block(&mut self) -> Result<Vec<Symbol>> {
        let n = self.n + 1;
        let (m, eps) = (self.schedule.m(n), self.schedule.eps(n));
        let len = self.next_len(n, &eps);
        let sampled = self.source.good_block(m, &eps, len)?;
        let u = sampled.block;
        let glued = self.gluer.glue_onto_good(&u, &eps)?;
        let ratio = if n == 1 { f64::INFINITY } else { self.total_u as f64 / u.len() as f64 };
        if let Some(prev) = self.log.blocks.last() {
            if n > 2 && ratio >= prev.dominating_ratio {
                return Err(Error::ScheduleViolation(format!("dominating ratio did not decrease at block {n}")));
            }
        }
        let offset = self.emitted + glued.s.len();
        self.log.blocks.push(BlockRecord {
            n,
            m,
            eps: eps.to_string(),
            start: self.emitted,
            connector: glued.s.len(),
            len: glued.s.len() + glued.v.len(),
            attempts: sampled.attempts,
            verdict: sampled.report.overall,
            corrected: glued.corrected.iter().map(|&i| offset + i).collect(),
            dominating_ratio: ratio,
        });
        self.n = n;
        self.total_u += u.len() as u128;
        self.last_len = u.len() as u128;
        let mut v = glued.s;
        v.extend(glued.v);
        self.emitted += v.len();
        Ok(v)
    }

    /// At least `len` symbols (whole blocks), with the log.
    pub fn run(&mut self, len: usize) -> Result<Vec<Symbol>> {
        let mut out = Vec::with_capacity(len);
        while out.len() < len {
            out.extend(self.next_block()?);
        }
        Ok(out)
    }

    pub fn into_stream(self) -> DigitStream {
        DigitStream::new(SynthProducer(self))
    }
}

struct SynthProducer(Synthesizer);

impl Producer for SynthProducer {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) -> Result<()> {
        while buf.len() < target {
            buf.extend(self.0.next_block()?);
        }
        Ok(())
    }
}

/// Convenience: the first `len` symbols of the synthesized point and the
/// block log.
pub fn synthesize_generic(
    source: Box<dyn BlockSource>,
    gluer: Arc<dyn Gluer>,
    schedule: Schedule,
    len: usize,
) -> Result<(Vec<Symbol>, SynthesisLog)> {
    let mut s = Synthesizer::new(source, gluer, schedule);
    let mut out = s.run(len)?;
    out.truncate(len);
    Ok((out, s.log))
}
