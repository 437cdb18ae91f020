use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{floor, AlgebraicNumber, Poly};
use crate::error::{Error, Result};

/// An element `c₀ + c₁β + … + c_{d−1}β^{d−1}` of Q(β), reduced modulo the
/// defining polynomial of β.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem(Poly);

impl FieldElem {
    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn is_zero_repr(&self) -> bool {
        self.0.is_zero()
    }
}

/// Arithmetic in Q(β) with certified signs.
///
/// Zero is detected exactly: `E(β) = 0` iff β is a root of `gcd(P, E)`,
/// and β is the only root of `P` in its isolating interval. Nonzero signs
/// are read off an interval evaluation, refining β as needed up to the
/// precision cap.
#[derive(Debug, Clone)]
pub struct NumberField {
    beta: AlgebraicNumber,
    modulus: Poly,
    max_bits: u32,
}

impl NumberField {
    pub fn new(beta: AlgebraicNumber, max_bits: u32) -> Self {
        let modulus = beta.poly().clone();
        let mut beta = beta;
        beta.refine_to_bits(64);
        NumberField {
            beta,
            modulus,
            max_bits,
        }
    }

    pub fn generator(&self) -> &AlgebraicNumber {
        &self.beta
    }

    fn reduce(&self, p: Poly) -> FieldElem {
        FieldElem(p.rem(&self.modulus))
    }

    pub fn from_rational(&self, q: &BigRational) -> FieldElem {
        self.reduce(Poly::new(vec![q.clone()]))
    }

    /// β itself.
    pub fn beta(&self) -> FieldElem {
        self.reduce(Poly::new(vec![BigRational::zero(), BigRational::one()]))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.add(&b.0))
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.sub(&b.0))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.reduce(a.0.mul(&b.0))
    }

    pub fn scale(&self, a: &FieldElem, k: &BigRational) -> FieldElem {
        FieldElem(a.0.scale(k))
    }

    pub fn mul_beta(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, &self.beta())
    }

    pub fn sub_integer(&self, a: &FieldElem, n: &BigInt) -> FieldElem {
        self.sub(a, &self.from_rational(&BigRational::from_integer(n.clone())))
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        if a.0.is_zero() {
            return true;
        }
        if let Some(q) = self.beta.as_rational() {
            return a.0.eval(q).is_zero();
        }
        let g = Poly::gcd(&self.modulus, &a.0);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        let (lo, hi) = self.beta.enclosure();
        Poly::count_roots(&g.sturm_chain(), lo, hi) == 1
    }

    /// Certified sign of `a` relative to zero; `index` labels the error.
    pub fn sign(&self, a: &FieldElem, index: usize) -> Result<Ordering> {
        if let Some(q) = self.beta.as_rational() {
            return Ok(a.0.eval(q).cmp(&BigRational::zero()));
        }
        if self.is_zero(a) {
            return Ok(Ordering::Equal);
        }
        let mut b = self.beta.clone();
        let cap = super::pow2_neg(self.max_bits);
        loop {
            let (lo, hi) = b.enclosure();
            let (l, h) = a.0.eval_interval(lo, hi);
            if l.is_positive() {
                return Ok(Ordering::Greater);
            }
            if h.is_negative() {
                return Ok(Ordering::Less);
            }
            if b.width() < cap {
                return Err(Error::undecided(
                    index,
                    format!("sign not separated from zero at {} bits", self.max_bits),
                ));
            }
            b.bisect();
        }
    }

    pub fn cmp(&self, a: &FieldElem, b: &FieldElem, index: usize) -> Result<Ordering> {
        self.sign(&self.sub(a, b), index)
    }

    /// `⌊a⌋`, certified.
    pub fn floor(&self, a: &FieldElem, index: usize) -> Result<BigInt> {
        let (lo, _) = self.enclosure(a);
        let mut d = floor(&lo);
        loop {
            let below = self.sign(&self.sub_integer(a, &d), index)?;
            if below == Ordering::Less {
                d -= 1;
                continue;
            }
            let next = &d + 1;
            if self.sign(&self.sub_integer(a, &next), index)? != Ordering::Less {
                d = next;
                continue;
            }
            return Ok(d);
        }
    }

    /// A rational enclosure of `a` from the current β enclosure.
    pub fn enclosure(&self, a: &FieldElem) -> (BigRational, BigRational) {
        let (lo, hi) = self.beta.enclosure();
        a.0.eval_interval(lo, hi)
    }

    pub fn to_f64(&self, a: &FieldElem) -> f64 {
        let mut b = self.beta.clone();
        b.refine_to_bits(80);
        let (lo, hi) = b.enclosure();
        let (l, h) = a.0.eval_interval(lo, hi);
        super::to_f64(&((l + h) / super::int(2)))
    }
}
