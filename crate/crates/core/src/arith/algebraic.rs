use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{int, to_f64, Poly};
use crate::error::{Error, Result};

/// A real algebraic number: a square-free polynomial with exactly one root
/// in the isolating interval `(lo, hi]`, or an exact rational.
///
/// Comparisons against rationals are always decided exactly: a rational
/// inside the interval either is the root (it annihilates the polynomial)
/// or splits the interval into a half whose Sturm count is one.
#[derive(Debug, Clone)]
pub struct AlgebraicNumber {
    poly: Poly,
    chain: Vec<Poly>,
    lo: BigRational,
    hi: BigRational,
    exact: Option<BigRational>,
}

impl AlgebraicNumber {
    pub fn from_rational(q: BigRational) -> Self {
        AlgebraicNumber {
            poly: Poly::linear_root(&q),
            chain: Vec::new(),
            lo: q.clone(),
            hi: q.clone(),
            exact: Some(q),
        }
    }

    /// The unique root of `poly` in `(lo, hi]`.
    pub fn new(poly: &Poly, lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::OutOfDomain(format!("empty isolating interval ({lo}, {hi}]")));
        }
        let p = poly.square_free();
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::OutOfDomain(format!("polynomial {poly} has no roots")));
        }
        if p.eval(&hi).is_zero() {
            return Ok(AlgebraicNumber::from_rational(hi));
        }
        let chain = p.sturm_chain();
        let n = Poly::count_roots(&chain, &lo, &hi);
        if n != 1 {
            return Err(Error::OutOfDomain(format!(
                "({lo}, {hi}] holds {n} roots of {p}, expected exactly one"
            )));
        }
        if p.degree() == Some(1) {
            let c = &p.coeffs()[0];
            return Ok(AlgebraicNumber::from_rational(-c / &p.coeffs()[1]));
        }
        let mut r = AlgebraicNumber {
            poly: p,
            chain,
            lo,
            hi,
            exact: None,
        };
        r.detect_rational();
        Ok(r)
    }

    /// A rational root `p/q` in lowest terms has `q` dividing the leading
    /// coefficient of the integer-scaled polynomial; once the interval is
    /// narrower than `1/(2·lead)` rounding the midpoint finds it.
    fn detect_rational(&mut self) {
        let denom_lcm = self
            .poly
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lead = (self.poly.coeffs().last().unwrap() * BigRational::from_integer(denom_lcm)).to_integer();
        let Some(lead) = lead.abs().to_u64().filter(|&l| l <= 10_000) else {
            return;
        };
        let target = BigRational::new(BigInt::one(), BigInt::from(2 * lead + 1));
        while self.exact.is_none() && self.width() > target {
            self.bisect();
        }
        if self.exact.is_some() {
            return;
        }
        let mid = self.midpoint();
        for q in (1..=lead).filter(|q| lead % q == 0) {
            let qb = BigRational::from_integer(BigInt::from(q));
            let c = BigRational::new((&mid * &qb).round().to_integer(), BigInt::from(q));
            if c > self.lo && c <= self.hi && self.poly.eval(&c).is_zero() {
                self.set_exact(c);
                return;
            }
        }
    }

    /// The real root of `poly` closest to `approx`.
    pub fn root_near(poly: &Poly, approx: f64) -> Result<Self> {
        let roots = poly.isolate_real_roots();
        let target = BigRational::from_float(approx)
            .ok_or_else(|| Error::OutOfDomain(format!("approximation {approx} is not finite")))?;
        let mut best: Option<(BigRational, AlgebraicNumber)> = None;
        for (lo, hi) in roots {
            let mut r = AlgebraicNumber::new(poly, lo, hi)?;
            r.refine_to_bits(60);
            let d = (r.midpoint() - &target).abs();
            if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                best = Some((d, r));
            }
        }
        best.map(|(_, r)| r)
            .ok_or_else(|| Error::OutOfDomain(format!("{poly} has no real roots")))
    }

    /// Positive square root of a positive rational.
    pub fn sqrt(n: &BigRational) -> Result<Self> {
        if !n.is_positive() {
            return Err(Error::OutOfDomain(format!("sqrt of nonpositive {n}")));
        }
        let p = Poly::new(vec![-n.clone(), BigRational::zero(), BigRational::one()]);
        let hi = if *n > BigRational::one() { n.clone() } else { BigRational::one() };
        AlgebraicNumber::new(&p, BigRational::zero(), hi)
    }

    /// The golden ratio, root of `x² − x − 1`.
    pub fn golden_ratio() -> Self {
        AlgebraicNumber::new(&Poly::from_ints(&[-1, -1, 1]), int(1), int(2)).unwrap()
    }

    /// The tribonacci constant ≈ 1.8393, a cubic Pisot number.
    pub fn tribonacci() -> Self {
        AlgebraicNumber::new(&Poly::from_ints(&[-1, -1, -1, 1]), int(1), int(2)).unwrap()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.exact.is_some()
    }

    /// Current enclosure; the number lies in `(lo, hi]` (or equals both).
    pub fn enclosure(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / int(2)
    }

    fn set_exact(&mut self, q: BigRational) {
        self.lo = q.clone();
        self.hi = q.clone();
        self.exact = Some(q);
    }

    /// Halves the isolating interval.
    pub fn bisect(&mut self) {
        if self.exact.is_some() {
            return;
        }
        let mid = self.midpoint();
        self.split_at(&mid);
    }

    /// Narrows to the half of `(lo, hi]` cut at `c` that holds the root.
    fn split_at(&mut self, c: &BigRational) -> Ordering {
        if self.poly.eval(c).is_zero() {
            self.set_exact(c.clone());
            return Ordering::Equal;
        }
        if Poly::count_roots(&self.chain, &self.lo, c) == 1 {
            self.hi = c.clone();
            Ordering::Less
        } else {
            self.lo = c.clone();
            Ordering::Greater
        }
    }

    pub fn refine_to_bits(&mut self, bits: u32) {
        let target = super::pow2_neg(bits);
        while self.exact.is_none() && self.width() > target {
            self.bisect();
        }
    }

    /// Exact comparison of the number with `c`.
    pub fn cmp_rational(&mut self, c: &BigRational) -> Ordering {
        if let Some(q) = &self.exact {
            return q.cmp(c);
        }
        if *c <= self.lo {
            return Ordering::Greater;
        }
        // The polynomial does not vanish at hi (checked at construction and
        // on every split), so the root is strictly below hi.
        if *c >= self.hi {
            return Ordering::Less;
        }
        self.split_at(c)
    }

    pub fn to_f64(&self) -> f64 {
        match &self.exact {
            Some(q) => to_f64(q),
            None => {
                let mut r = self.clone();
                r.refine_to_bits(64);
                to_f64(&r.midpoint())
            }
        }
    }

    /// `a·self + b` for rational `a ≠ 0`.
    pub fn affine(&self, a: &BigRational, b: &BigRational) -> Result<Self> {
        if a.is_zero() {
            return Ok(AlgebraicNumber::from_rational(b.clone()));
        }
        if let Some(q) = &self.exact {
            return Ok(AlgebraicNumber::from_rational(a * q + b));
        }
        // y = a x + b  ⇔  x = (y − b)/a; substitute into p by Horner.
        let lin = Poly::new(vec![-b / a, a.recip()]);
        let mut q = Poly::zero();
        for c in self.poly.coeffs().iter().rev() {
            q = q.mul(&lin).add(&Poly::new(vec![c.clone()]));
        }
        let (l, h) = if a.is_positive() {
            (a * &self.lo + b, a * &self.hi + b)
        } else {
            (a * &self.hi + b, a * &self.lo + b)
        };
        AlgebraicNumber::new(&q, l, h)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "root of {} in ({}, {}] ≈ {:.12}", self.poly, self.lo, self.hi, self.to_f64()),
        }
    }
}
