use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{AlphaLabel, ReductionTrace};
use crate::error::{Error, Result};
use crate::measures::{compare, first_blocks, Mass, MeasureOracle, Verdict};
use crate::symbolic::{Block, Symbol};

/// A gap at least this large that no longer shrinks is read as oscillation.
pub const OSCILLATION_GAP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DichotomyVerdict {
    /// The `U′/U″` gaps shrink at every observed stage.
    ConsistentWithGeneric,
    /// The last gap is `≥ 0.05` and within 10% of the one before.
    OscillationDetected,
    Inconclusive,
}

impl DichotomyVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            DichotomyVerdict::ConsistentWithGeneric => "consistent with generic",
            DichotomyVerdict::OscillationDetected => "oscillation detected",
            DichotomyVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub n: usize,
    /// `"U1"` for `U′_n`, `"U2"` for `U″_n`.
    pub kind: &'static str,
    pub pos: u64,
    /// Frequencies `e′(w_j, y[0,pos))/pos` of the tested blocks.
    pub frequencies: Vec<f64>,
    /// `max_j |freq_j − μ(w_j)|`.
    pub deviation_mu: f64,
    pub good_mu: Verdict,
    /// Against `α′/(α′+1)·μ + 1/(α′+1)·ν`; reported at `U″_n` only.
    pub deviation_mix: Option<f64>,
    pub good_mix: Option<Verdict>,
    pub correction_density: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DichotomyReport {
    pub m: usize,
    pub eps: String,
    pub blocks: Vec<Block>,
    pub boundaries: Vec<BoundaryReport>,
    /// `(n, max_j |f′_j − f″_j|)` for stages with both boundaries observed.
    pub gaps: Vec<(usize, f64)>,
    /// `max_j |f″_j − μ(w_j)|` at each observed `U″_n`.
    pub u2_deviation: Vec<(usize, f64)>,
    /// `(n, |U″_{n−1}| / |ū′_n ū″_n|)`.
    pub dominating: Vec<(usize, f64)>,
    pub final_correction_density: f64,
    pub verdict: DichotomyVerdict,
    pub label: Option<AlphaLabel>,
    /// Whether the verdict is the one the label predicts.
    pub label_match: Option<bool>,
}

/// Re-analyses a run of the feeble-specification reduction.
pub fn verify_reduction(
    trace: &ReductionTrace,
    output: &[Symbol],
    mu: &dyn MeasureOracle,
    nu: &dyn MeasureOracle,
    m: usize,
    eps: &BigRational,
) -> Result<DichotomyReport> {
    if !trace.complete || output.len() as u64 != trace.emitted || trace.emitted < trace.requested {
        return Err(Error::TruncatedTrace(format!(
            "trace records {} of {} symbols (complete = {}), output has {}",
            trace.emitted,
            trace.requested,
            trace.complete,
            output.len()
        )));
    }
    let blocks = first_blocks(mu, m)?;
    let mu_mass: Vec<Mass> = blocks.iter().map(|w| mu.mass(w)).collect::<Result<_>>()?;
    let nu_mass: Vec<Mass> = blocks.iter().map(|w| nu.mass(w)).collect::<Result<_>>()?;
    let marks = trace.boundaries();
    let positions: Vec<u64> = marks.iter().map(|m| m.2).collect();
    let counts = counts_at(output, &blocks, &positions);

    let mut reports = Vec::with_capacity(marks.len());
    for ((n, is_u2, pos), cnt) in marks.iter().copied().zip(counts) {
        let len = pos as usize;
        let freqs: Vec<f64> = cnt.iter().map(|&c| c as f64 / len as f64).collect();
        let (deviation_mu, good_mu) = against(&cnt, len, &mu_mass, eps);
        let (deviation_mix, good_mix) = if is_u2 {
            let ap = trace.stages[n - 1].alpha_prime;
            let t = BigRational::new(BigInt::from(1), BigInt::from(ap + 1));
            let mix: Vec<Mass> = mu_mass.iter().zip(&nu_mass).map(|(a, b)| a.mix(b, &t)).collect();
            let (d, v) = against(&cnt, len, &mix, eps);
            (Some(d), Some(v))
        } else {
            (None, None)
        };
        let corrected = trace.corrections.partition_point(|&c| c < pos);
        reports.push(BoundaryReport {
            n,
            kind: if is_u2 { "U2" } else { "U1" },
            pos,
            frequencies: freqs,
            deviation_mu,
            good_mu,
            deviation_mix,
            good_mix,
            correction_density: corrected as f64 / pos.max(1) as f64,
        });
    }

    let mut gaps = Vec::new();
    for s in &trace.stages {
        let f1 = reports.iter().find(|r| r.n == s.n && r.kind == "U1");
        let f2 = reports.iter().find(|r| r.n == s.n && r.kind == "U2");
        if let (Some(f1), Some(f2)) = (f1, f2) {
            let g = f1
                .frequencies
                .iter()
                .zip(&f2.frequencies)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            gaps.push((s.n, g));
        }
    }
    // α′(1) = 1 for every α, so stage 1 carries no information about α.
    let informative: Vec<(usize, f64)> = gaps.iter().copied().filter(|g| g.0 >= 2).collect();
    let verdict = classify(&informative);
    let u2_deviation = reports
        .iter()
        .filter(|r| r.kind == "U2")
        .map(|r| (r.n, r.deviation_mu))
        .collect();
    let label_match = trace.label.map(|l| match l {
        AlphaLabel::InC3 => verdict == DichotomyVerdict::ConsistentWithGeneric,
        AlphaLabel::NotC3 { .. } => verdict == DichotomyVerdict::OscillationDetected,
    });
    Ok(DichotomyReport {
        m,
        eps: eps.to_string(),
        blocks,
        boundaries: reports,
        gaps,
        u2_deviation,
        dominating: trace.stages.iter().map(|s| (s.n, s.dominating_ratio)).collect(),
        final_correction_density: trace.corrections.len() as f64 / output.len().max(1) as f64,
        verdict,
        label: trace.label,
        label_match,
    })
}

/// Classifies a gap trajectory. Oscillation is tested first: a last gap
/// of at least 0.05 that shrank by less than 10%.
pub fn classify(gaps: &[(usize, f64)]) -> DichotomyVerdict {
    if gaps.len() < 2 {
        return DichotomyVerdict::Inconclusive;
    }
    let last = gaps[gaps.len() - 1].1;
    let prev = gaps[gaps.len() - 2].1;
    if last >= OSCILLATION_GAP && last >= 0.9 * prev {
        DichotomyVerdict::OscillationDetected
    } else if gaps.windows(2).all(|w| w[1].1 < w[0].1) {
        DichotomyVerdict::ConsistentWithGeneric
    } else {
        DichotomyVerdict::Inconclusive
    }
}

fn against(cnt: &[u64], len: usize, masses: &[Mass], eps: &BigRational) -> (f64, Verdict) {
    let mut dev: f64 = 0.0;
    let mut verdict = Verdict::Pass;
    for (&c, mass) in cnt.iter().zip(masses) {
        dev = dev.max((c as f64 / len as f64 - mass.value()).abs());
        verdict = match (verdict, compare(c, len, mass, eps)) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Indeterminate, _) | (_, Verdict::Indeterminate) => Verdict::Indeterminate,
            _ => Verdict::Pass,
        };
    }
    (dev, verdict)
}

/// `e′(w, y[0,p))` for every block and every (sorted) position `p`, in one pass.
pub(crate) fn counts_at(y: &[Symbol], blocks: &[Block], positions: &[u64]) -> Vec<Vec<u64>> {
    let mut counts = vec![0u64; blocks.len()];
    let mut out = Vec::with_capacity(positions.len());
    let mut next = 0;
    while next < positions.len() && positions[next] == 0 {
        out.push(counts.clone());
        next += 1;
    }
    for i in 0..y.len() {
        for (w, c) in blocks.iter().zip(counts.iter_mut()) {
            let l = w.len();
            if l <= i + 1 && y[i + 1 - l..=i] == w[..] {
                *c += 1;
            }
        }
        while next < positions.len() && positions[next] == (i + 1) as u64 {
            out.push(counts.clone());
            next += 1;
        }
    }
    out
}
