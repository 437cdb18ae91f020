use std::fmt;

use crate::arith::{parse_rational, AlgebraicNumber, RealPoint, DEFAULT_PRECISION_BITS};
use crate::error::{Error, Result};
use crate::symbolic::{Alphabet, Digit};

use super::{cf_expand, BetaSystem, GlsBranch, GlsSystem};

/// Any of the supported numeration systems.
#[derive(Debug, Clone)]
pub enum System {
    Gls(GlsSystem),
    Beta(BetaSystem),
    Cf,
}

/// Expansion digits; `terminated` marks an orbit that hit 0 (continued
/// fractions) before the requested length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub digits: Vec<Digit>,
    pub terminated: bool,
}

/// Parses a real `β > 1`: `golden`, `tribonacci`, or any point syntax
/// accepted by [`RealPoint::parse`].
pub fn parse_beta(s: &str) -> Result<AlgebraicNumber> {
    match s.trim() {
        "golden" | "phi" => Ok(AlgebraicNumber::golden_ratio()),
        "tribonacci" => Ok(AlgebraicNumber::tribonacci()),
        other => Ok(match RealPoint::parse(other)? {
            RealPoint::Exact(q) => AlgebraicNumber::from_rational(q),
            RealPoint::Algebraic(a) => a,
        }),
    }
}

impl System {
    /// Named systems: `tent`, `luroth`, `cf`, `base:<r>`, `beta:<β>`.
    pub fn parse(name: &str, precision_bits: u32) -> Result<System> {
        let name = name.trim();
        match name {
            "tent" => return Ok(System::Gls(GlsSystem::tent())),
            "luroth" => return Ok(System::Gls(GlsSystem::luroth())),
            "cf" => return Ok(System::Cf),
            _ => {}
        }
        if let Some(r) = name.strip_prefix("base:") {
            let r: u64 = r.parse().map_err(|_| Error::Parse(format!("bad base {r:?}")))?;
            return Ok(System::Gls(GlsSystem::base(r)?));
        }
        if let Some(b) = name.strip_prefix("beta:") {
            let beta = parse_beta(b)?;
            return Ok(System::Beta(BetaSystem::new(b, beta, precision_bits)?));
        }
        Err(Error::Parse(format!("unknown system {name:?}")))
    }

    /// System spec file: `interval <digit> <l> <r> <eps>` lines (a GLS),
    /// a single `beta <β> [prec <bits>]` line, or `cf`. `#` starts a comment.
    pub fn from_spec_text(name: &str, text: &str) -> Result<System> {
        let mut branches = Vec::new();
        let mut other = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::Parse(format!("line {}: {m}", lineno + 1));
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "gls" => {}
                "interval" => {
                    if toks.len() != 5 {
                        return Err(bad("expected `interval <digit> <l> <r> <eps>`"));
                    }
                    let digit = toks[1].parse().map_err(|_| bad("bad digit"))?;
                    let lo = parse_rational(toks[2])?;
                    let hi = parse_rational(toks[3])?;
                    let flip = match toks[4] {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad("orientation must be 0 or 1")),
                    };
                    branches.push(GlsBranch::new(digit, lo, hi, flip));
                }
                "beta" => {
                    let prec = match toks.get(2..) {
                        Some(["prec", bits]) => bits.parse().map_err(|_| bad("bad precision"))?,
                        Some([]) => DEFAULT_PRECISION_BITS,
                        _ => return Err(bad("expected `beta <value> [prec <bits>]`")),
                    };
                    let b = toks.get(1).ok_or_else(|| bad("missing β"))?;
                    other = Some(System::Beta(BetaSystem::new(*b, parse_beta(b)?, prec)?));
                }
                "cf" => other = Some(System::Cf),
                "tent" | "luroth" => other = Some(System::parse(toks[0], DEFAULT_PRECISION_BITS)?),
                t => return Err(bad(&format!("unknown directive {t:?}"))),
            }
        }
        match (branches.is_empty(), other) {
            (false, None) => Ok(System::Gls(GlsSystem::new(name, branches)?)),
            (true, Some(s)) => Ok(s),
            (true, None) => Err(Error::Parse("empty system spec".into())),
            (false, Some(_)) => Err(Error::Parse("mixed system directives".into())),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            System::Gls(g) => g.alphabet(),
            System::Beta(b) => b.alphabet(),
            System::Cf => Alphabet::positive_naturals(),
        }
    }

    pub fn expand(&self, x: &RealPoint, k: usize) -> Result<Expansion> {
        match self {
            System::Gls(g) => Ok(Expansion {
                digits: g.itinerary(x, k)?,
                terminated: false,
            }),
            System::Beta(b) => Ok(Expansion {
                digits: b.expand(x, k)?.into_iter().map(Digit::Int).collect(),
                terminated: false,
            }),
            System::Cf => {
                let e = cf_expand(x, k)?;
                Ok(Expansion {
                    digits: e.digits.into_iter().map(Digit::Int).collect(),
                    terminated: e.terminated,
                })
            }
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::Gls(g) => write!(f, "gls:{}", g.name()),
            System::Beta(b) => write!(f, "beta:{}", b.name()),
            System::Cf => f.write_str("cf"),
        }
    }
}
