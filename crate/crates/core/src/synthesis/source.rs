use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measures::{is_good, GoodnessReport, Oracle};
use crate::symbolic::Symbol;

/// Rejections allowed per block request.
pub const RETRY_BUDGET: usize = 1000;

#[derive(Debug, Clone)]
pub struct SampledBlock {
    pub block: Vec<Symbol>,
    pub report: GoodnessReport,
    pub attempts: usize,
}

/// Produces `(m, ε)`-good blocks of at least a requested length.
pub trait BlockSource: Send {
    fn label(&self) -> String;

    fn good_block(&mut self, m: usize, eps: &BigRational, len: usize) -> Result<SampledBlock>;
}

/// Rejection sampler: draws blocks from the oracle's sampler and keeps the
/// first one certified good.
#[derive(Debug)]
pub struct GoodBlockSampler {
    oracle: Oracle,
    rng: ChaCha8Rng,
    budget: usize,
}

impl GoodBlockSampler {
    pub fn new(oracle: Oracle, seed: u64) -> Self {
        GoodBlockSampler {
            oracle,
            rng: ChaCha8Rng::seed_from_u64(seed),
            budget: RETRY_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }
}

impl BlockSource for GoodBlockSampler {
    fn label(&self) -> String {
        format!("sampler({})", self.oracle.label())
    }

    fn good_block(&mut self, m: usize, eps: &BigRational, len: usize) -> Result<SampledBlock> {
        let len = len.max(1);
        for attempt in 1..=self.budget {
            let block = self.oracle.sample_block(&mut self.rng, len)?;
            let report = is_good(&block, self.oracle.as_ref(), m, eps)?;
            if report.is_good() {
                return Ok(SampledBlock {
                    block,
                    report,
                    attempts: attempt,
                });
            }
        }
        Err(Error::RetryBudgetExhausted {
            attempts: self.budget,
            m,
            eps: eps.to_string(),
            len,
        })
    }
}
