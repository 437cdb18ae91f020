use serde::{Deserialize, Serialize};

use super::{AlphaLabel, BaireInput};
use crate::error::{Error, Result};
use crate::measures::MeasureOracle;
use crate::symbolic::{DigitStream, Symbol};

/// A window may grow to this multiple of its base length while waiting for
/// the frequency of `γ` to settle; past that the schedule has stalled.
pub const STALL_FACTOR: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SafeBranch {
    /// `μ ≠ δ₀`: overwrite `⋃J_n` with the safe symbol.
    Lower,
    /// `μ = δ₀`: keep `x` on `⋃J_n` only.
    KeepOnly,
}

/// One zeroing window `[b_{2n−1}, b_{2n})`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SafeWindow {
    pub n: usize,
    pub lo: u64,
    pub hi: u64,
    pub alpha: u64,
    /// `q_n = |I_n|`, occurrences of `γ` in the window.
    pub q: u64,
    /// `|J_n| = ⌈q_n/α(n)⌉`.
    pub j_len: u64,
    /// `i_{p_n}`: `J_n` is every occurrence of `γ` in `[j_start, hi)`.
    pub j_start: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SafeTrace {
    pub branch: SafeBranch,
    pub gamma: Symbol,
    pub alpha: String,
    pub label: Option<AlphaLabel>,
    /// Measure that `x` is generic for.
    pub reference: String,
    pub reference_mass: f64,
    /// `b_0 = 0, b_1, …`, up to the first value `≥` the output length.
    pub b: Vec<u64>,
    pub windows: Vec<SafeWindow>,
    pub requested: u64,
    pub emitted: u64,
    pub alpha_depth: usize,
}

impl SafeTrace {
    /// Whether position `k` lies in `⋃J_n`.
    pub fn in_j(&self, k: u64, x: &[Symbol]) -> bool {
        self.windows.iter().any(|w| {
            w.j_start
                .map_or(false, |s| k >= s && k < w.hi && x.get(k as usize) == Some(&self.gamma))
        })
    }
}

/// `1 + ⌊k/24⌋`: the base window ratio `b_{k+1}/b_k ≥ 2 + ⌊k/24⌋` tends to
/// infinity, so `b_k/b_{k+1} → 0`.
fn growth(k: usize) -> u64 {
    1 + (k / 24) as u64
}

/// `δ_k = 1/√(k+1)`, the tolerated distance of the window frequency of `γ`
/// from its mass.
fn tolerance(k: usize) -> f64 {
    1.0 / ((k + 1) as f64).sqrt()
}

/// The safe-symbol reduction `α ↦ y` for a subshift where 0 may overwrite
/// any coordinate.
///
/// `mu` is the target measure. When `μ ≠ δ₀`, `x` is generic for `μ`;
/// when `μ = δ₀`, `x` is generic for `nu` (an ergodic measure other than
/// `δ₀`), which must then be given.
pub fn pi_safe_symbol(
    alpha: &BaireInput,
    x: &mut DigitStream,
    gamma: Symbol,
    mu: &dyn MeasureOracle,
    nu: Option<&dyn MeasureOracle>,
    len: usize,
) -> Result<(Vec<Symbol>, SafeTrace)> {
    if gamma == 0 {
        return Err(Error::SafeSymbol("γ must differ from the safe symbol 0".into()));
    }
    let dirac = mu.mass(&[0])?.as_exact().map_or(false, |q| *q == num_traits::One::one());
    let (branch, reference) = if dirac {
        let nu = nu.ok_or_else(|| Error::SafeSymbol("μ = δ₀ needs the reference measure ν of x".into()))?;
        (SafeBranch::KeepOnly, nu)
    } else {
        (SafeBranch::Lower, mu)
    };
    let target = reference.mass(&[gamma])?.value();
    if target <= 0.0 {
        return Err(Error::SafeSymbol(format!("{}([{gamma}]) = 0", reference.label())));
    }

    // b_k for k ≥ 1 until b_k ≥ len, each window's frequency of γ settled.
    let mut b: Vec<u64> = vec![0];
    let mut ones: Vec<u64> = vec![0]; // occurrences of γ in x[0, b_k)
    while *b.last().unwrap() < len as u64 {
        let k = b.len();
        let lo = b[k - 1];
        let base = (lo * (1 + growth(k - 1))).max(lo + 1);
        let cap = lo + (base - lo) * STALL_FACTOR;
        let want = match x.prefix(cap as usize) {
            Ok(_) => cap as usize,
            Err(Error::StreamExhausted { available, .. }) if available as u64 >= base => available,
            Err(e) => return Err(e),
        };
        let xs = x.prefix(want)?;
        let mut cnt = xs[lo as usize..base as usize].iter().filter(|&&s| s == gamma).count() as u64;
        let mut t = base;
        loop {
            let f = cnt as f64 / (t - lo) as f64;
            if (f - target).abs() < tolerance(k) {
                break;
            }
            if t as usize >= xs.len() {
                return Err(Error::SafeSymbol(format!(
                    "window {k} starting at {lo}: frequency of {gamma} did not come within {:.3} of {target:.4} by {t}",
                    tolerance(k)
                )));
            }
            cnt += (xs[t as usize] == gamma) as u64;
            t += 1;
        }
        b.push(t);
        ones.push(ones[k - 1] + cnt);
    }

    let last = *b.last().unwrap() as usize;
    let xs = x.prefix(last)?.to_vec();
    let mut windows = Vec::new();
    let mut y: Vec<Symbol> = match branch {
        SafeBranch::Lower => xs[..len].to_vec(),
        SafeBranch::KeepOnly => vec![0; len],
    };
    let mut n = 1;
    while 2 * n < b.len() && (b[2 * n - 1] as usize) < len {
        let (lo, hi) = (b[2 * n - 1], b[2 * n]);
        let a = alpha.value(n)?;
        let q = ones[2 * n] - ones[2 * n - 1];
        let j_len = q.div_ceil(a);
        let mut j_start = None;
        let mut seen = 0;
        for k in (lo..hi).rev() {
            if seen == j_len {
                break;
            }
            if xs[k as usize] == gamma {
                seen += 1;
                j_start = Some(k);
                if (k as usize) < len {
                    y[k as usize] = match branch {
                        SafeBranch::Lower => 0,
                        SafeBranch::KeepOnly => gamma,
                    };
                }
            }
        }
        windows.push(SafeWindow {
            n,
            lo,
            hi,
            alpha: a,
            q,
            j_len,
            j_start,
        });
        n += 1;
    }
    let trace = SafeTrace {
        branch,
        gamma,
        alpha: alpha.to_string(),
        label: alpha.label(),
        reference: reference.label(),
        reference_mass: target,
        b,
        alpha_depth: windows.len(),
        windows,
        requested: len as u64,
        emitted: y.len() as u64,
    };
    Ok((y, trace))
}

/// Frequencies of `γ` per window `[b_{k−1}, b_k)` of the output.
#[derive(Debug, Clone, Serialize)]
pub struct WindowGaps {
    /// `(k, frequency)` for every window contained in the output.
    pub windows: Vec<(usize, f64)>,
    /// `(n, |freq(window 2n−1) − freq(window 2n)|)`.
    pub gaps: Vec<(usize, f64)>,
    /// Frequency of `γ` in `y[0, b_k)` at every boundary inside the output.
    pub boundary: Vec<(usize, f64)>,
}

impl WindowGaps {
    pub fn last_gap(&self) -> Option<f64> {
        self.gaps.last().map(|g| g.1)
    }
}

pub fn window_gaps(y: &[Symbol], trace: &SafeTrace) -> WindowGaps {
    let g = trace.gamma;
    let mut windows = Vec::new();
    let mut boundary = Vec::new();
    let mut total = 0u64;
    for k in 1..trace.b.len() {
        let (lo, hi) = (trace.b[k - 1] as usize, trace.b[k] as usize);
        if hi > y.len() {
            break;
        }
        let c = y[lo..hi].iter().filter(|&&s| s == g).count() as u64;
        total += c;
        windows.push((k, c as f64 / (hi - lo) as f64));
        boundary.push((k, total as f64 / hi as f64));
    }
    let gaps = windows
        .chunks_exact(2)
        .map(|p| ((p[1].0) / 2, (p[0].1 - p[1].1).abs()))
        .collect();
    WindowGaps {
        windows,
        gaps,
        boundary,
    }
}
