use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{floor, Interval, RealPoint};
use crate::error::{Error, Result};
use crate::symbolic::Symbol;

/// Continued-fraction digits of a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    pub digits: Vec<Symbol>,
    /// True when the Gauss map reached 0 (rational input) before `k` digits.
    pub terminated: bool,
}

/// Convergents `p_j/q_j` of `[0; d₁, …, d_k]` with `p_{−1}/q_{−1} = 1/0`.
#[derive(Debug, Clone)]
struct Continuants {
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl Continuants {
    fn new() -> Self {
        // (previous, current) = (p_{-1}, p_0) = (1, 0); (q_{-1}, q_0) = (0, 1)
        Continuants {
            p: (BigInt::one(), BigInt::zero()),
            q: (BigInt::zero(), BigInt::one()),
        }
    }

    fn push(&mut self, d: &BigInt) {
        let p = d * &self.p.1 + &self.p.0;
        let q = d * &self.q.1 + &self.q.0;
        self.p = (std::mem::replace(&mut self.p.1, p), self.p.1.clone());
        self.q = (std::mem::replace(&mut self.q.1, q), self.q.1.clone());
    }

    /// `x = (p_i + p_{i−1}·y)/(q_i + q_{i−1}·y)` where `y = T^i(x)`.
    fn point(&self, y: &BigRational) -> BigRational {
        let num = BigRational::from_integer(self.p.1.clone()) + BigRational::from_integer(self.p.0.clone()) * y;
        let den = BigRational::from_integer(self.q.1.clone()) + BigRational::from_integer(self.q.0.clone()) * y;
        num / den
    }
}

/// First `k` digits `d_i = ⌊1/T^{i−1}(x)⌋` of `x ∈ (0,1)`.
///
/// Rationals are expanded by exact Euclid; algebraic points by comparing
/// `T^i(x)` against `1/n` through the convergent Möbius map, which turns
/// every comparison into an exact comparison of `x` with a rational.
pub fn cf_expand(x: &RealPoint, k: usize) -> Result<CfExpansion> {
    let mut x = x.clone();
    if x.cmp_rational(&BigRational::zero()) != Ordering::Greater
        || x.cmp_rational(&BigRational::one()) != Ordering::Less
    {
        return Err(Error::OutOfDomain(format!("{x} is not in (0,1)")));
    }
    if let Some(q) = x.as_rational() {
        return Ok(expand_rational(q.clone(), k));
    }
    let mut cv = Continuants::new();
    let mut digits = Vec::with_capacity(k);
    for i in 0..k {
        // y = T^i(x); y ↦ x is increasing for even i, decreasing for odd i.
        let sign_flip = i % 2 == 1;
        let mut cmp_y = |t: &BigRational| -> Ordering {
            let o = x.cmp_rational(&cv.point(t));
            if sign_flip {
                o.reverse()
            } else {
                o
            }
        };
        if cmp_y(&BigRational::zero()) == Ordering::Equal {
            return Ok(CfExpansion {
                digits,
                terminated: true,
            });
        }
        let inv = |n: &BigInt| BigRational::new(BigInt::one(), n.clone());
        // n = ⌊1/y⌋ ⇔ 1/(n+1) < y ≤ 1/n.
        let mut hi_n = BigInt::one();
        while cmp_y(&inv(&(&hi_n + 1))) != Ordering::Greater {
            hi_n *= 2;
        }
        let mut lo_n: BigInt = (&hi_n / 2u32).max(BigInt::one());
        while lo_n < hi_n {
            let mid: BigInt = &lo_n + (&hi_n - &lo_n) / 2u32;
            if cmp_y(&inv(&(&mid + 1))) == Ordering::Greater {
                hi_n = mid;
            } else {
                lo_n = mid + 1;
            }
        }
        let d = lo_n
            .to_u64()
            .ok_or_else(|| Error::undecided(i, "continued-fraction digit exceeds 64 bits"))?;
        cv.push(&lo_n);
        digits.push(d);
    }
    Ok(CfExpansion {
        digits,
        terminated: false,
    })
}

fn expand_rational(mut x: BigRational, k: usize) -> CfExpansion {
    let mut digits = Vec::with_capacity(k);
    while digits.len() < k {
        if x.is_zero() {
            return CfExpansion {
                digits,
                terminated: true,
            };
        }
        let inv = x.recip();
        let d = floor(&inv);
        x = inv - BigRational::from_integer(d.clone());
        digits.push(d.to_u64().expect("digit fits in 64 bits"));
    }
    let terminated = x.is_zero();
    CfExpansion { digits, terminated }
}

/// `Δ(d₁…d_k)`: the points of `(0,1)` whose first `k` digits are the word.
///
/// The endpoints are `p_k/q_k` and `(p_k + p_{k−1})/(q_k + q_{k−1})`. The
/// convergent itself belongs to the set exactly when `d_k ≥ 2` (otherwise
/// its greedy expansion is the shorter `[0; d₁, …, d_{k−1}+1]`); the other
/// endpoint never does.
pub fn cf_fundamental_interval(digits: &[Symbol]) -> Result<Interval> {
    if digits.is_empty() {
        return Err(Error::EmptyWord);
    }
    if let Some(&d) = digits.iter().find(|&&d| d == 0) {
        return Err(Error::DigitOutOfRange { digit: d });
    }
    let mut cv = Continuants::new();
    for &d in digits {
        cv.push(&BigInt::from(d));
    }
    let conv = BigRational::new(cv.p.1.clone(), cv.q.1.clone());
    let other = BigRational::new(&cv.p.1 + &cv.p.0, &cv.q.1 + &cv.q.0);
    let conv_in = *digits.last().unwrap() >= 2;
    Ok(if conv < other {
        Interval::new(conv, other, conv_in, false)
    } else {
        Interval::new(other, conv, false, conv_in)
    })
}

/// Convergents `p_j/q_j` for `j = 1..=k`.
pub fn cf_convergents(digits: &[Symbol]) -> Vec<BigRational> {
    let mut cv = Continuants::new();
    digits
        .iter()
        .map(|&d| {
            cv.push(&BigInt::from(d));
            BigRational::new(cv.p.1.clone(), cv.q.1.clone())
        })
        .collect()
}
