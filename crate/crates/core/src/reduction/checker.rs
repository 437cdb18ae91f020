use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_rational::BigRational;

use crate::arith::to_f64;
use crate::error::{Error, Result};
use crate::measures::{compare, MeasureOracle, Verdict};
use crate::symbolic::{Alphabet, DigitStream, Symbol};

/// Relative safety margin on float comparisons; anything closer to the
/// threshold is settled exactly.
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
enum MassState {
    Known { v: f64, e: f64 },
    /// `μ([w]) < ε`, certified through a prefix of `w`.
    Small,
}

/// Streaming test of "`x[0, m)` is `(m, ε)`-good" for `m = 1, 2, 3, …`.
///
/// The first `m` enumerated blocks grow with `m`, so each block carries a
/// horizon: its count rises by at most one per step, so it cannot fail for
/// `k` more steps when `(cnt + k)/(m + k) < μ + ε` and `cnt/(m + k) > μ − ε`.
/// Blocks are re-examined only when their horizon expires.
pub(crate) struct PrefixChecker<'a> {
    oracle: &'a dyn MeasureOracle,
    radix: u64,
    eps: BigRational,
    eps_f: f64,
    m: usize,
    /// `counts[ℓ][code]`, occurrences of each length-`ℓ` block in `x[0, m)`.
    counts: Vec<Vec<u32>>,
    /// Code of the last `ℓ` symbols.
    codes: Vec<u64>,
    /// `offsets[ℓ]`: enumeration index of the first block of length `ℓ`.
    offsets: Vec<usize>,
    masses: Vec<MassState>,
    due: BinaryHeap<Reverse<(usize, u32)>>,
    active: bool,
}

impl<'a> PrefixChecker<'a> {
    pub fn new(oracle: &'a dyn MeasureOracle, eps: &BigRational) -> Result<Self> {
        let radix = match oracle.alphabet() {
            Alphabet::Finite { size: 0 } => return Err(Error::EmptyAlphabet),
            Alphabet::Finite { size } => size,
            Alphabet::Naturals { .. } => {
                return Err(Error::UnsupportedBlock(
                    "prefix certification needs a finite alphabet".into(),
                ))
            }
        };
        Ok(PrefixChecker {
            oracle,
            radix,
            eps: eps.clone(),
            eps_f: to_f64(eps),
            m: 0,
            counts: vec![Vec::new()],
            codes: vec![0],
            offsets: vec![0, 0],
            masses: Vec::new(),
            due: BinaryHeap::new(),
            active: false,
        })
    }

    fn max_len(&self) -> usize {
        self.counts.len() - 1
    }

    /// Index of the first block of length `ℓ`.
    fn offset(&mut self, len: usize) -> usize {
        while self.offsets.len() <= len {
            let l = self.offsets.len() - 1;
            let next = self.offsets[l].saturating_add((self.radix as usize).saturating_pow(l as u32));
            self.offsets.push(next);
        }
        self.offsets[len]
    }

    fn locate(&mut self, j: usize) -> (usize, u64) {
        let mut len = 1;
        while self.offset(len + 1) <= j {
            len += 1;
        }
        (len, (j - self.offset(len)) as u64)
    }

    fn decode(&self, len: usize, mut code: u64) -> Vec<Symbol> {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = code % self.radix;
            code /= self.radix;
        }
        w
    }

    /// Starts counting blocks of length `len` over `prefix = x[0, m)`.
    fn open_length(&mut self, prefix: &[Symbol]) {
        let len = self.max_len() + 1;
        let size = (self.radix as usize).pow(len as u32);
        let mut table = vec![0u32; size];
        let mut code = 0u64;
        let modulus = self.radix.pow(len as u32);
        for (i, &s) in prefix[..self.m].iter().enumerate() {
            code = (code * self.radix + s) % modulus;
            if i + 1 >= len {
                table[code as usize] += 1;
            }
        }
        self.counts.push(table);
        self.codes.push(code);
    }

    fn admit_block(&mut self, j: usize) -> Result<()> {
        let (len, code) = self.locate(j);
        let state = if len == 1 {
            self.known(len, code)?
        } else {
            let parent = self.offset(len - 1) + (code / self.radix) as usize;
            match self.masses[parent] {
                MassState::Small => MassState::Small,
                MassState::Known { v, e } if v + e < self.eps_f * (1.0 - TIE) => MassState::Small,
                MassState::Known { .. } => self.known(len, code)?,
            }
        };
        debug_assert_eq!(self.masses.len(), j);
        self.masses.push(state);
        if self.active {
            self.due.push(Reverse((self.m, j as u32)));
        }
        Ok(())
    }

    fn known(&self, len: usize, code: u64) -> Result<MassState> {
        let mass = self.oracle.mass(&self.decode(len, code))?;
        Ok(MassState::Known {
            v: mass.value(),
            e: mass.err(),
        })
    }

    /// Consumes symbols until `m = prefix.len()`.
    pub fn advance(&mut self, prefix: &[Symbol]) -> Result<()> {
        while self.m < prefix.len() {
            let s = prefix[self.m];
            if s >= self.radix {
                return Err(Error::DigitOutOfRange { digit: s });
            }
            self.m += 1;
            for l in (1..=self.max_len()).rev() {
                if self.m >= l {
                    let code = self.codes[l - 1] * self.radix + s;
                    self.codes[l] = code;
                    self.counts[l][code as usize] += 1;
                }
            }
            // block m−1 joins the tested set
            let j = self.m - 1;
            if j >= u32::MAX as usize {
                return Err(Error::ScheduleInfeasible("certification horizon exceeds 2^32".into()));
            }
            if j == self.offset(self.max_len() + 1) {
                self.open_length(prefix);
            }
            self.admit_block(j)?;
        }
        Ok(())
    }

    /// Whether `x[0, m)` is `(m, ε)`-good. Approximate masses that cannot
    /// be separated from the threshold count as failures.
    pub fn check(&mut self) -> Result<bool> {
        if !self.active {
            self.active = true;
            for j in 0..self.m {
                self.due.push(Reverse((self.m, j as u32)));
            }
        }
        let m = self.m;
        let mut good = true;
        let mut retry = Vec::new();
        while let Some(&Reverse((at, j))) = self.due.peek() {
            if at > m {
                break;
            }
            self.due.pop();
            match self.examine(j as usize)? {
                Some(h) => self.due.push(Reverse((m.saturating_add(1).saturating_add(h), j))),
                None => {
                    good = false;
                    retry.push(j);
                }
            }
        }
        for j in retry {
            self.due.push(Reverse((m + 1, j)));
        }
        Ok(good)
    }

    /// `Some(horizon)` when block `j` passes at the current `m`.
    fn examine(&mut self, j: usize) -> Result<Option<usize>> {
        let (len, code) = self.locate(j);
        let cnt = if len <= self.max_len() {
            self.counts[len][code as usize] as f64
        } else {
            0.0
        };
        let m = self.m as f64;
        let eps = self.eps_f;
        if let MassState::Small = self.masses[j] {
            if cnt < eps * m * (1.0 - TIE) {
                return Ok(Some(horizon_upper(eps, m, cnt)));
            }
            self.masses[j] = self.known(len, code)?;
        }
        let MassState::Known { v, e } = self.masses[j] else {
            unreachable!()
        };
        let d = (cnt / m - v).abs();
        let slack = e + TIE;
        if d + slack < eps {
            let up = horizon_upper(v - e + eps, m, cnt);
            let lo = horizon_lower(v + e - eps, m, cnt);
            return Ok(Some(up.min(lo)));
        }
        if d - slack >= eps {
            return Ok(None);
        }
        let mass = self.oracle.mass(&self.decode(len, code))?;
        Ok(match compare(cnt as u64, self.m, &mass, &self.eps) {
            Verdict::Pass => Some(0),
            _ => None,
        })
    }
}

/// Steps `k` for which `(cnt + k)/(m + k) < a` is guaranteed.
fn horizon_upper(a: f64, m: f64, cnt: f64) -> usize {
    if a >= 1.0 {
        return usize::MAX;
    }
    let k = (a * m * (1.0 - TIE) - cnt) / (1.0 - a) - 1.0;
    if k <= 0.0 {
        0
    } else {
        k.min(1e15) as usize
    }
}

/// Steps `k` for which `cnt/(m + k) > b` is guaranteed.
fn horizon_lower(b: f64, m: f64, cnt: f64) -> usize {
    if b <= 0.0 {
        return usize::MAX;
    }
    let k = cnt * (1.0 - TIE) / b - m - 1.0;
    if k <= 0.0 {
        0
    } else {
        k.min(1e15) as usize
    }
}

/// Least `c ≥ c_min` such that `x[0, m)` is `(m, ε)`-good for `μ` and
/// `z[0, m)` is `(m, ε)`-good for `ν` for every `m ∈ [c, span·c]`.
///
/// Returns `(c, span·c)`. Fails once `span·c` would exceed `budget`.
pub(crate) fn certify_pair(
    x: &mut DigitStream,
    mu: &dyn MeasureOracle,
    z: &mut DigitStream,
    nu: &dyn MeasureOracle,
    eps: &BigRational,
    c_min: usize,
    span: usize,
    budget: usize,
) -> Result<(usize, usize)> {
    let c_min = c_min.max(1);
    let mut cx = PrefixChecker::new(mu, eps)?;
    let mut cz = PrefixChecker::new(nu, eps)?;
    let mut c = c_min;
    let mut m = c_min;
    loop {
        let horizon = c.checked_mul(span).filter(|&h| h <= budget).ok_or_else(|| {
            Error::ScheduleInfeasible(format!(
                "prefixes not ({m}, {eps})-good up to the budget {budget} (last failure at {})",
                c - 1
            ))
        })?;
        if m > horizon {
            return Ok((c, horizon));
        }
        let step = (horizon - m + 1).min(1 << 16);
        let xs = x.prefix(m + step - 1)?;
        let zs = z.prefix(m + step - 1)?;
        for mm in m..m + step {
            cx.advance(&xs[..mm])?;
            cz.advance(&zs[..mm])?;
            let gx = cx.check()?;
            let gz = cz.check()?;
            if !(gx && gz) {
                c = mm + 1;
            }
        }
        m += step;
    }
}
