use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::{Bernoulli, DiracZero, Gauss, Mix, Oracle, Parry};
use crate::arith::{parse_rational, DEFAULT_PRECISION_BITS};
use crate::error::{Error, Result};
use crate::numeration::{parse_beta, BetaSystem};

/// Parses an oracle spec:
///
/// ```text
/// bernoulli <p0> <p1> …        weights on {0, 1, …}
/// bernoulli:<p>                P(1) = p on {0, 1}
/// bernoulli geometric <p>      (1−p)p^k on ω
/// dirac0
/// gauss
/// parry <β> density
/// parry <β> birkhoff:<samples>:<seed>
/// mix <t> <spec A> <spec B>    (1−t)·A + t·B
/// ```
pub fn parse_oracle(spec: &str) -> Result<Oracle> {
    let toks: Vec<&str> = spec.split_whitespace().collect();
    let mut pos = 0;
    let o = parse_at(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(Error::Parse(format!("trailing tokens in oracle spec: {:?}", &toks[pos..])));
    }
    Ok(o)
}

fn next<'a>(toks: &[&'a str], pos: &mut usize, what: &str) -> Result<&'a str> {
    let t = toks
        .get(*pos)
        .ok_or_else(|| Error::Parse(format!("oracle spec ended, expected {what}")))?;
    *pos += 1;
    Ok(t)
}

fn parse_at(toks: &[&str], pos: &mut usize) -> Result<Oracle> {
    let head = next(toks, pos, "an oracle name")?;
    if let Some(p) = head.strip_prefix("bernoulli:") {
        let p = parse_rational(p)?;
        return Ok(Arc::new(Bernoulli::new(vec![BigRational::one() - &p, p])?));
    }
    match head {
        "bernoulli" => {
            if toks.get(*pos) == Some(&"geometric") {
                *pos += 1;
                let p = parse_rational(next(toks, pos, "a ratio")?)?;
                return Ok(Arc::new(Bernoulli::geometric(p)?));
            }
            let mut w = Vec::new();
            while let Some(q) = toks.get(*pos).and_then(|t| parse_rational(t).ok()) {
                w.push(q);
                *pos += 1;
            }
            Ok(Arc::new(Bernoulli::new(w)?))
        }
        "dirac0" => Ok(Arc::new(DiracZero::default())),
        "gauss" => Ok(Arc::new(Gauss)),
        "parry" => {
            let b = next(toks, pos, "β")?;
            let sys = BetaSystem::new(b, parse_beta(b)?, DEFAULT_PRECISION_BITS)?;
            let method = next(toks, pos, "a Parry method")?;
            if method == "density" {
                return Ok(Arc::new(Parry::density(&sys)?));
            }
            let parts: Vec<&str> = method.split(':').collect();
            match parts.as_slice() {
                ["birkhoff", n, seed] => {
                    let bad = || Error::Parse(format!("bad Parry method {method:?}"));
                    let n = n.parse().map_err(|_| bad())?;
                    let seed = seed.parse().map_err(|_| bad())?;
                    Ok(Arc::new(Parry::birkhoff(&sys, n, seed)?))
                }
                _ => Err(Error::Parse(format!("unknown Parry method {method:?}"))),
            }
        }
        "mix" => {
            let t = parse_rational(next(toks, pos, "a mixing weight")?)?;
            let a = parse_at(toks, pos)?;
            let b = parse_at(toks, pos)?;
            // A bare dirac0 takes the other component's alphabet.
            let a = if a.label() == "dirac0" { Arc::new(DiracZero::new(b.alphabet())?) as Oracle } else { a };
            let b = if b.label() == "dirac0" { Arc::new(DiracZero::new(a.alphabet())?) as Oracle } else { b };
            Ok(Arc::new(Mix::new(a, b, t)?))
        }
        other => Err(Error::Parse(format!("unknown oracle {other:?}"))),
    }
}
