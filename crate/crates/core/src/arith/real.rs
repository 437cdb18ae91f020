use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::{int, parse_rational, AlgebraicNumber, Poly};
use crate::error::{Error, Result};

/// An input point for the expansion maps: an exact rational, or a real
/// algebraic number whose enclosure is refined on demand.
#[derive(Debug, Clone)]
pub enum RealPoint {
    Exact(BigRational),
    Algebraic(AlgebraicNumber),
}

impl RealPoint {
    pub fn rational(q: BigRational) -> Self {
        RealPoint::Exact(q)
    }

    pub fn algebraic(a: AlgebraicNumber) -> Self {
        match a.as_rational() {
            Some(q) => RealPoint::Exact(q.clone()),
            None => RealPoint::Algebraic(a),
        }
    }

    /// Parses `p/q`, a decimal, `sqrtN`, `sqrtN-K`, `sqrtN+K`, `golden`,
    /// or `poly:c0,c1,…@approx` (the real root of `c0 + c1·x + …` nearest
    /// `approx`).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("poly:") {
            let (coeffs, approx) = rest
                .split_once('@')
                .ok_or_else(|| Error::Parse(format!("poly point needs @approx: {s:?}")))?;
            let c = coeffs
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            let approx: f64 = approx
                .parse()
                .map_err(|_| Error::Parse(format!("bad approximation in {s:?}")))?;
            return Ok(RealPoint::algebraic(AlgebraicNumber::root_near(&Poly::new(c), approx)?));
        }
        if s == "golden" || s == "phi" {
            return Ok(RealPoint::algebraic(AlgebraicNumber::golden_ratio()));
        }
        if let Some(rest) = s.strip_prefix("sqrt") {
            let rest = rest.trim_start_matches('(');
            let split = rest.find(|c: char| !(c.is_ascii_digit() || c == '/' || c == '.'));
            let (radicand, tail) = match split {
                Some(i) => (&rest[..i], rest[i..].trim_start_matches(')')),
                None => (rest, ""),
            };
            let root = AlgebraicNumber::sqrt(&parse_rational(radicand)?)?;
            let shift = if tail.is_empty() {
                BigRational::zero()
            } else if let Some(t) = tail.strip_prefix('+') {
                parse_rational(t)?
            } else if let Some(t) = tail.strip_prefix('-') {
                -parse_rational(t)?
            } else {
                return Err(Error::Parse(format!("bad point {s:?}")));
            };
            return Ok(RealPoint::algebraic(root.affine(&int(1), &shift)?));
        }
        Ok(RealPoint::Exact(parse_rational(s)?))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            RealPoint::Exact(q) => Some(q),
            RealPoint::Algebraic(a) => a.as_rational(),
        }
    }

    /// Exact comparison with a rational (refines the enclosure as needed).
    pub fn cmp_rational(&mut self, c: &BigRational) -> Ordering {
        match self {
            RealPoint::Exact(q) => (*q).cmp(c),
            RealPoint::Algebraic(a) => a.cmp_rational(c),
        }
    }

    pub fn enclosure(&self) -> (BigRational, BigRational) {
        match self {
            RealPoint::Exact(q) => (q.clone(), q.clone()),
            RealPoint::Algebraic(a) => {
                let (l, h) = a.enclosure();
                (l.clone(), h.clone())
            }
        }
    }

    pub fn refine_to_bits(&mut self, bits: u32) {
        if let RealPoint::Algebraic(a) = self {
            a.refine_to_bits(bits);
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealPoint::Exact(q) => super::to_f64(q),
            RealPoint::Algebraic(a) => a.to_f64(),
        }
    }

    /// Checks `lo ≤ x ≤ hi`.
    pub fn in_closed(&mut self, lo: &BigRational, hi: &BigRational) -> bool {
        self.cmp_rational(lo) != Ordering::Less && self.cmp_rational(hi) != Ordering::Greater
    }
}

impl From<BigRational> for RealPoint {
    fn from(q: BigRational) -> Self {
        RealPoint::Exact(q)
    }
}

impl fmt::Display for RealPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealPoint::Exact(q) => write!(f, "{q}"),
            RealPoint::Algebraic(a) => write!(f, "{a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn parsing() {
        assert_eq!(RealPoint::parse("1/3").unwrap().as_rational(), Some(&rat(1, 3)));
        let p = RealPoint::parse("sqrt2-1").unwrap();
        assert!((p.to_f64() - 0.414_213_562_373_095).abs() < 1e-14);
        let p = RealPoint::parse("sqrt(5)+1").unwrap();
        assert!((p.to_f64() - 3.236_067_977_499_79).abs() < 1e-13);
        let p = RealPoint::parse("sqrt9").unwrap();
        assert_eq!(p.as_rational(), Some(&int(3)));
        let p = RealPoint::parse("poly:-1,-1,1@-0.6").unwrap();
        assert!((p.to_f64() + 0.618_033_988_749_895).abs() < 1e-14);
        assert!(RealPoint::parse("sqrt2*1").is_err());
    }

    #[test]
    fn comparisons_are_exact() {
        let mut p = RealPoint::parse("sqrt2-1").unwrap();
        assert_eq!(p.cmp_rational(&rat(41, 100)), Ordering::Greater);
        assert_eq!(p.cmp_rational(&rat(5, 12)), Ordering::Less);
        assert!(p.in_closed(&int(0), &int(1)));
    }
}
