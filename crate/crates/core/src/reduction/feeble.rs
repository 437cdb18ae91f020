use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::checker::certify_pair;
use super::{AlphaLabel, BaireInput};
use crate::error::{Error, Result};
use crate::measures::Oracle;
use crate::symbolic::{DigitStream, Symbol};
use crate::synthesis::Gluer;

/// Default ceiling on the certified prefix depth of `x` and `z`.
pub const CERTIFY_BUDGET: usize = 1 << 26;

/// Which growth factor `F_n` drives the schedule inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `F_n = 2^{2n}`, as in the construction.
    Paper,
    /// `F_n = k·2^n`: a slower cascade for demonstration runs (NON-PAPER).
    Scaled { k: u64 },
}

impl Mode {
    /// `F_n`; it replaces `2^{2n}` in every schedule condition and glue budget.
    pub fn factor(&self, n: usize) -> Result<u128> {
        let f = match *self {
            Mode::Paper => 2u32.checked_mul(n as u32).and_then(|e| 1u128.checked_shl(e)),
            Mode::Scaled { k } => (n < 100)
                .then(|| 1u128 << n)
                .and_then(|p| p.checked_mul(k as u128)),
        };
        f.filter(|&f| f > 0)
            .ok_or_else(|| Error::ScheduleInfeasible(format!("growth factor overflows at n = {n}")))
    }

    pub fn is_paper(&self) -> bool {
        matches!(self, Mode::Paper)
    }

    /// Parses `paper`, `scaled` (`K = 1`) or `scaled:K`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "paper" => Ok(Mode::Paper),
            "scaled" => Ok(Mode::Scaled { k: 1 }),
            t => match t.strip_prefix("scaled:").map(str::parse) {
                Some(Ok(k)) if k > 0 => Ok(Mode::Scaled { k }),
                _ => Err(Error::Parse(format!("bad mode {s:?}; expected paper or scaled:K"))),
            },
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Paper => write!(f, "paper"),
            Mode::Scaled { k } => write!(f, "scaled:{k} (NON-PAPER)"),
        }
    }
}

/// Certified `c_n` together with the depth up to which goodness was checked.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certified {
    pub n: usize,
    pub c: u64,
    /// Every `m ∈ [c, horizon]` was checked for both streams.
    pub horizon: u64,
    pub eps: String,
}

/// Aggregated glue events of one stage.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GlueStats {
    pub blocks: u64,
    pub connector_symbols: u64,
    pub corrections: u64,
    /// `max |s_{i+1}| / |u_i|`.
    pub max_connector_ratio: f64,
    /// `max hamming(u_{i+1}, u′_{i+1})`.
    pub max_hamming: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageRecord {
    pub n: usize,
    pub alpha: u64,
    pub alpha_prime: u64,
    /// `F_n`.
    pub factor: u128,
    pub a: u64,
    pub b: u128,
    pub c: u64,
    /// `B_n = 2(b₁ + … + b_n)`.
    pub big_b: u128,
    pub certified_horizon: u64,
    /// Output position where `ū′_n` begins.
    pub start: u64,
    /// End of `U′_n` in the output, when reached.
    pub u1_end: Option<u64>,
    /// End of `U″_n` in the output, when reached.
    pub u2_end: Option<u64>,
    /// `|U″_{n−1}| / |ū′_n ū″_n|` before gluing.
    pub dominating_ratio: f64,
    pub glue: GlueStats,
}

/// Everything needed to audit a run of the feeble-specification reduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub mode: Mode,
    pub alpha: String,
    pub label: Option<AlphaLabel>,
    pub gluer: String,
    pub mu: String,
    pub nu: String,
    /// `v₀`, dropped from the output.
    pub v0: Vec<Symbol>,
    pub requested: u64,
    pub emitted: u64,
    /// The output depends on `α(1), …, α(alpha_depth)` only.
    pub alpha_depth: usize,
    pub stages: Vec<StageRecord>,
    /// Output positions altered by gluing, connectors included.
    pub corrections: Vec<u64>,
    pub complete: bool,
}

impl ReductionTrace {
    /// Positions where `U′_n` and `U″_n` end, in order, as `(n, is_u2, pos)`.
    pub fn boundaries(&self) -> Vec<(usize, bool, u64)> {
        let mut out = Vec::new();
        for s in &self.stages {
            if let Some(p) = s.u1_end {
                out.push((s.n, false, p));
            }
            if let Some(p) = s.u2_end {
                out.push((s.n, true, p));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct Params {
    alpha: u64,
    alpha_prime: u64,
    factor: u128,
    a: u64,
    c: u64,
}

/// The transducer `α ↦ π(α)` for a shift with right feeble specification.
///
/// `x` is generic for `μ` and `z` for `ν`; the certified `c_n` depend only
/// on the streams, so they are cached across inputs `α`.
pub struct FeebleReduction {
    x: DigitStream,
    z: DigitStream,
    mu: Oracle,
    nu: Oracle,
    gluer: Arc<dyn Gluer>,
    mode: Mode,
    budget: usize,
    certified: Vec<Certified>,
}

impl FeebleReduction {
    pub fn new(x: DigitStream, mu: Oracle, z: DigitStream, nu: Oracle, gluer: Arc<dyn Gluer>, mode: Mode) -> Self {
        FeebleReduction {
            x,
            z,
            mu,
            nu,
            gluer,
            mode,
            budget: CERTIFY_BUDGET,
            certified: Vec::new(),
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn eps_glue(&self, n: usize) -> Result<BigRational> {
        Ok(BigRational::new(BigInt::one(), BigInt::from(self.mode.factor(n)?)))
    }

    /// `c_n`: the least value with `c_n > n·F_n`, `c_n > N(1/F_n)` and both
    /// streams `(m, 1/2^{n+1})`-good on `[c_n, n·c_n]`.
    pub fn certified(&mut self, n: usize) -> Result<Certified> {
        while self.certified.len() < n {
            let k = self.certified.len() + 1;
            let f = self.mode.factor(k)?;
            let tol = self.gluer.tolerance(&self.eps_glue(k)?) as u128;
            let c_min = (k as u128)
                .checked_mul(f)
                .map(|v| v.max(tol) + 1)
                .filter(|&v| v <= self.budget as u128)
                .ok_or_else(|| Error::ScheduleInfeasible(format!("c_{k} exceeds the certification budget")))?;
            let eps = BigRational::new(BigInt::one(), BigInt::one() << (k + 1));
            let (c, horizon) = certify_pair(
                &mut self.x,
                self.mu.as_ref(),
                &mut self.z,
                self.nu.as_ref(),
                &eps,
                c_min as usize,
                k,
                self.budget,
            )?;
            self.certified.push(Certified {
                n: k,
                c: c as u64,
                horizon: horizon as u64,
                eps: eps.to_string(),
            });
        }
        Ok(self.certified[n - 1].clone())
    }

    fn params(&mut self, alpha: &BaireInput, n: usize) -> Result<Params> {
        let c = self.certified(n)?.c;
        let alpha_v = alpha.value(n)?;
        let alpha_prime = alpha_v.min(n as u64);
        let a = alpha_prime
            .checked_mul(c)
            .ok_or_else(|| Error::ScheduleInfeasible(format!("a_{n} overflows")))?;
        Ok(Params {
            alpha: alpha_v,
            alpha_prime,
            factor: self.mode.factor(n)?,
            a,
            c,
        })
    }

    /// `(a_n, c_n, α′(n))`, the least `b_n` meeting its three conditions,
    /// and the certificate for `c_n`; all seven conditions are re-checked.
    fn plan_stage(&mut self, alpha: &BaireInput, n: usize, sum_prev: u128) -> Result<(Params, u128, Certified)> {
        let p = self.params(alpha, n)?;
        let q = self.params(alpha, n + 1)?;
        let cert = self.certified(n)?;
        let f = p.factor;
        let overflow = || Error::ScheduleInfeasible(format!("b_{n} overflows"));
        let b = (f + 1)
            .max(f.checked_mul(q.a as u128).ok_or_else(overflow)? / p.a as u128 + 1)
            .max(f.checked_mul(sum_prev).ok_or_else(overflow)? / p.a as u128 + 1);
        (p.a as u128 + p.c as u128).checked_mul(b).ok_or_else(overflow)?;
        check_conditions(
            n,
            &p,
            b,
            q.a,
            sum_prev,
            self.gluer.tolerance(&self.eps_glue(n)?) as u128,
            cert.horizon,
        )?;
        Ok((p, b, cert))
    }

    /// The first `stages` stage records without emitting output; positions
    /// are those of the unglued concatenation `ū′₁ū″₁ū′₂…`.
    pub fn schedule(&mut self, alpha: &BaireInput, stages: usize) -> Result<Vec<StageRecord>> {
        let mut out = Vec::with_capacity(stages);
        let mut sum_prev: u128 = 0;
        let mut big_b: u128 = 0;
        for n in 1..=stages {
            let (p, b, cert) = self.plan_stage(alpha, n, sum_prev)?;
            let stage_len = (p.a as u128 + p.c as u128) * b;
            let overflow = || Error::ScheduleInfeasible(format!("stage {n} overflows"));
            big_b = big_b.checked_add(2 * b).ok_or_else(overflow)?;
            let u1 = sum_prev.checked_add(p.a as u128 * b).ok_or_else(overflow)?;
            let u2 = sum_prev.checked_add(stage_len).ok_or_else(overflow)?;
            out.push(StageRecord {
                n,
                alpha: p.alpha,
                alpha_prime: p.alpha_prime,
                factor: p.factor,
                a: p.a,
                b,
                c: p.c,
                big_b,
                certified_horizon: cert.horizon,
                start: u64::try_from(sum_prev).unwrap_or(u64::MAX),
                u1_end: u64::try_from(u1).ok(),
                u2_end: u64::try_from(u2).ok(),
                dominating_ratio: sum_prev as f64 / stage_len as f64,
                glue: GlueStats::default(),
            });
            sum_prev = u2;
        }
        Ok(out)
    }

    /// First `len` symbols of `π(α)` with the run trace.
    pub fn run(&mut self, alpha: &BaireInput, len: usize) -> Result<(Vec<Symbol>, ReductionTrace)> {
        let v0 = self.gluer.seed_word();
        if !self.gluer.contains(&v0)? {
            return Err(Error::GluerFailure("seed word is not in the good set".into()));
        }
        let mut out: Vec<Symbol> = Vec::with_capacity(len);
        let mut corrections: Vec<u64> = Vec::new();
        let mut stages = Vec::new();
        let mut sum_prev: u128 = 0; // Σ_{i<n} (a_i + c_i) b_i
        let mut big_b: u128 = 0;
        let mut prev_u: Option<usize> = None;
        let mut n = 0;
        while out.len() < len {
            n += 1;
            let (p, b, cert) = self.plan_stage(alpha, n, sum_prev)?;
            let f = p.factor;
            let overflow = || Error::ScheduleInfeasible(format!("B_{n} overflows"));
            let stage_len = (p.a as u128 + p.c as u128) * b;
            big_b = big_b.checked_add(2 * b).ok_or_else(overflow)?;
            let dominating_ratio = sum_prev as f64 / stage_len as f64;
            let start = out.len() as u64;
            let eps = self.eps_glue(n)?;
            let mut glue = GlueStats::default();
            let mut ends = [None, None];
            for (half, blen) in [p.a, p.c].into_iter().enumerate() {
                let blen = blen as usize;
                let block: Vec<Symbol> = if half == 0 {
                    self.x.prefix(blen)?.to_vec()
                } else {
                    self.z.prefix(blen)?.to_vec()
                };
                let mut copies: u128 = 0;
                while copies < b && out.len() < len {
                    let g = self.gluer.glue_onto_good(&block, &eps)?;
                    let budget_base = prev_u.unwrap_or(blen) as u128;
                    if (g.s.len() as u128) * f > budget_base {
                        return Err(Error::GluerFailure(format!(
                            "connector of length {} exceeds |u_i|/F_{n} = {budget_base}/{f}",
                            g.s.len()
                        )));
                    }
                    if g.v.len() != blen || (g.corrected.len() as u128) * f >= blen as u128 {
                        return Err(Error::GluerFailure(format!(
                            "repair of {} symbols out of {blen} is not below 1/F_{n}",
                            g.corrected.len()
                        )));
                    }
                    let mut piece = g.s.clone();
                    piece.extend_from_slice(&g.v);
                    if !self.gluer.contains(&piece)? {
                        return Err(Error::GluerFailure(format!("glued block {} of stage {n} left the good set", glue.blocks + 1)));
                    }
                    let at = out.len() as u64;
                    corrections.extend((0..g.s.len() as u64).map(|i| at + i));
                    corrections.extend(g.corrected.iter().map(|&i| at + (g.s.len() + i) as u64));
                    glue.blocks += 1;
                    glue.connector_symbols += g.s.len() as u64;
                    glue.corrections += (g.s.len() + g.corrected.len()) as u64;
                    glue.max_connector_ratio = glue.max_connector_ratio.max(g.s.len() as f64 / budget_base as f64);
                    glue.max_hamming = glue.max_hamming.max(g.corrected.len() as f64 / blen as f64);
                    out.extend_from_slice(&piece);
                    prev_u = Some(blen);
                    copies += 1;
                }
                if copies == b && out.len() <= len {
                    ends[half] = Some(out.len() as u64);
                }
            }
            sum_prev = sum_prev.checked_add(stage_len).ok_or_else(overflow)?;
            stages.push(StageRecord {
                n,
                alpha: p.alpha,
                alpha_prime: p.alpha_prime,
                factor: f,
                a: p.a,
                b,
                c: p.c,
                big_b,
                certified_horizon: cert.horizon,
                start,
                u1_end: ends[0],
                u2_end: ends[1],
                dominating_ratio,
                glue,
            });
        }
        out.truncate(len);
        corrections.retain(|&p| (p as usize) < len);
        let trace = ReductionTrace {
            mode: self.mode,
            alpha: alpha.to_string(),
            label: alpha.label(),
            gluer: self.gluer.name(),
            mu: self.mu.label(),
            nu: self.nu.label(),
            v0,
            requested: len as u64,
            emitted: out.len() as u64,
            alpha_depth: if n == 0 { 0 } else { n + 1 },
            stages,
            corrections,
            complete: true,
        };
        Ok((out, trace))
    }
}

/// The seven schedule conditions, re-checked on the computed values.
fn check_conditions(n: usize, p: &Params, b: u128, a_next: u64, sum_prev: u128, tol: u128, horizon: u64) -> Result<()> {
    let f = p.factor;
    let a = p.a as u128;
    let c = p.c as u128;
    let fail = |what: &str| Err(Error::ScheduleViolation(format!("stage {n}: {what}")));
    if a != p.alpha_prime as u128 * c {
        return fail("a_n = α′(n)·c_n");
    }
    if c <= (n as u128) * f {
        return fail("c_n/n > F_n");
    }
    if c <= tol {
        return fail("c_n > N(1/F_n)");
    }
    if horizon < p.a || horizon < p.c {
        return fail("prefix goodness not certified up to a_n");
    }
    if b <= f {
        return fail("b_n > F_n");
    }
    let ab = a.checked_mul(b);
    if ab.map_or(false, |ab| Some(ab) <= f.checked_mul(a_next as u128)) {
        return fail("a_n·b_n > F_n·a_{n+1}");
    }
    if ab.map_or(false, |ab| Some(ab) <= f.checked_mul(sum_prev)) {
        return fail("a_n·b_n > F_n·Σ(a_i + c_i)b_i");
    }
    Ok(())
}

/// One-shot form of [`FeebleReduction::run`].
#[allow(clippy::too_many_arguments)]
pub fn pi_feeble(
    alpha: &BaireInput,
    x: DigitStream,
    mu: Oracle,
    z: DigitStream,
    nu: Oracle,
    gluer: Arc<dyn Gluer>,
    mode: Mode,
    len: usize,
) -> Result<(Vec<Symbol>, ReductionTrace)> {
    FeebleReduction::new(x, mu, z, nu, gluer, mode).run(alpha, len)
}
