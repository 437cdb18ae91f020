use std::sync::Arc;

use symdyn_core::arith::rat;
use symdyn_core::measures::{sample_stream, Bernoulli, DiracZero, Oracle, Parry};
use symdyn_core::numeration::BetaSystem;
use symdyn_core::reduction::{
    pi_feeble, pi_safe_symbol, verify_reduction, BaireInput, FeebleReduction, Mode,
};
use symdyn_core::synthesis::{BetaGluer, FullShiftGluer, Gluer};
use symdyn_core::{Alphabet, DigitStream, Error, Symbol};

fn bernoulli(num: i64, den: i64) -> Oracle {
    Arc::new(Bernoulli::new(vec![rat(den - num, den), rat(num, den)]).unwrap())
}

fn full_shift_reduction() -> FeebleReduction {
    let (mu, nu) = (bernoulli(1, 2), bernoulli(1, 4));
    FeebleReduction::new(
        sample_stream(mu.clone(), 1, 4096),
        mu,
        sample_stream(nu.clone(), 2, 4096),
        nu,
        Arc::new(FullShiftGluer::new(Alphabet::finite(2))),
        Mode::Scaled { k: 1 },
    )
}

#[test]
fn output_is_the_positional_concatenation() {
    let mut red = full_shift_reduction();
    let alpha = BaireInput::from_values(vec![3, 1, 2, 5, 1, 1, 1, 1]).unwrap();
    let len = 300_000;
    let (y, trace) = red.run(&alpha, len).unwrap();
    assert!(trace.corrections.is_empty());
    let mut x = sample_stream(bernoulli(1, 2), 1, 4096);
    let mut z = sample_stream(bernoulli(1, 4), 2, 4096);
    let mut expect: Vec<Symbol> = Vec::new();
    for s in &trace.stages {
        assert_eq!(s.start as usize, expect.len());
        for _ in 0..s.b {
            expect.extend_from_slice(x.prefix(s.a as usize).unwrap());
            if expect.len() >= len {
                break;
            }
        }
        if let Some(p) = s.u1_end {
            assert_eq!(p as usize, expect.len());
        }
        for _ in 0..s.b {
            if expect.len() >= len {
                break;
            }
            expect.extend_from_slice(z.prefix(s.c as usize).unwrap());
        }
        if let Some(p) = s.u2_end {
            assert_eq!(p as usize, expect.len());
        }
    }
    assert_eq!(&expect[..len], &y[..]);
}

#[test]
fn schedule_matches_the_run() {
    let mut red = full_shift_reduction();
    let alpha = BaireInput::identity();
    let plan = red.schedule(&alpha, 3).unwrap();
    let (_, trace) = red.run(&alpha, 2_000_000).unwrap();
    for (p, s) in plan.iter().zip(&trace.stages) {
        assert_eq!((p.a, p.b, p.c, p.start), (s.a, s.b, s.c, s.start));
        assert_eq!(p.u2_end, s.u2_end);
    }
}

#[test]
fn golden_shift_with_parry_and_dirac() {
    let golden = BetaSystem::golden();
    let parry: Oracle = Arc::new(Parry::density(&golden).unwrap());
    let dirac: Oracle = Arc::new(DiracZero::new(Alphabet::finite(2)).unwrap());
    let gluer = Arc::new(BetaGluer::new(golden));
    let len = 200_000;
    let (y, trace) = pi_feeble(
        &BaireInput::identity(),
        sample_stream(parry.clone(), 3, 1 << 20),
        parry.clone(),
        DigitStream::periodic(vec![0]),
        dirac.clone(),
        gluer.clone(),
        Mode::Scaled { k: 1 },
        len,
    )
    .unwrap();
    assert_eq!(y.len(), len);
    assert!(gluer.in_language(&y).unwrap());
    assert_eq!(trace.gluer, "beta:golden");
    for s in &trace.stages {
        assert!(s.glue.max_hamming < 1.0 / s.factor as f64);
        assert!(s.glue.max_connector_ratio * (s.factor as f64) <= 1.0);
    }
    // every correction lies in an x-block (z = 0^∞ needs none) and lowers a 1
    let mut x = sample_stream(parry, 3, 1 << 20);
    let xs = x.prefix(len).unwrap().to_vec();
    for &p in &trace.corrections {
        assert_eq!(y[p as usize], 0);
        let st = trace.stages.iter().rev().find(|s| s.start <= p).unwrap();
        let off = (p - st.start) as usize;
        assert!(off < (st.a as u128 * st.b) as usize);
        assert_eq!(xs[off % st.a as usize], 1);
    }
}

#[test]
fn certification_budget_is_reported() {
    let (mu, nu) = (bernoulli(1, 2), bernoulli(1, 4));
    let mut red = FeebleReduction::new(
        DigitStream::periodic(vec![0]),
        mu,
        sample_stream(nu.clone(), 2, 4096),
        nu,
        Arc::new(FullShiftGluer::new(Alphabet::finite(2))),
        Mode::Scaled { k: 1 },
    )
    .with_budget(1 << 14);
    assert!(matches!(red.run(&BaireInput::identity(), 1000), Err(Error::ScheduleInfeasible(_))));
}

#[test]
fn verify_rejects_truncated_traces() {
    let mut red = full_shift_reduction();
    let (y, mut trace) = red.run(&BaireInput::identity(), 50_000).unwrap();
    let (mu, nu) = (bernoulli(1, 2), bernoulli(1, 4));
    assert!(verify_reduction(&trace, &y, mu.as_ref(), nu.as_ref(), 2, &rat(1, 20)).is_ok());
    assert!(matches!(
        verify_reduction(&trace, &y[..40_000], mu.as_ref(), nu.as_ref(), 2, &rat(1, 20)),
        Err(Error::TruncatedTrace(_))
    ));
    trace.complete = false;
    assert!(verify_reduction(&trace, &y, mu.as_ref(), nu.as_ref(), 2, &rat(1, 20)).is_err());
}

#[test]
fn safe_symbol_changes_only_j() {
    let golden = BetaSystem::golden();
    let parry: Oracle = Arc::new(Parry::density(&golden).unwrap());
    let mut x = sample_stream(parry.clone(), 5, 1 << 19);
    let xs = x.prefix(300_000).unwrap().to_vec();
    let alpha = BaireInput::from_fn(|n| 1 + (n as u64 % 3));
    let (y, trace) = pi_safe_symbol(&alpha, &mut x, 1, parry.as_ref(), None, 300_000).unwrap();
    for (k, (&a, &b)) in xs.iter().zip(&y).enumerate() {
        assert_eq!(a != b, trace.in_j(k as u64, &xs), "position {k}");
    }
    for w in &trace.windows {
        assert!(w.j_len * w.alpha >= w.q && (w.j_len - 1) * w.alpha < w.q.max(1));
    }
    assert!(trace.b.windows(2).all(|p| p[0] < p[1]));
}
