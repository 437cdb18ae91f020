use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{Interval, RealPoint};
use crate::error::{Error, Result};
use crate::symbolic::{Alphabet, Digit, Symbol};

/// One partition interval `I_n = [lo, hi)` with its orientation bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlsBranch {
    pub digit: Symbol,
    #[serde(serialize_with = "ser_rat")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub hi: BigRational,
    /// `ε(n)`: false maps `I_n` increasingly onto `[0,1)`, true decreasingly
    /// onto `(0,1]`.
    pub flip: bool,
}

fn ser_rat<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl GlsBranch {
    pub fn new(digit: Symbol, lo: BigRational, hi: BigRational, flip: bool) -> Self {
        GlsBranch { digit, lo, hi, flip }
    }

    /// `s(n) = 1/(r_n − ℓ_n)`.
    pub fn s(&self) -> BigRational {
        (&self.hi - &self.lo).recip()
    }

    /// `h(n) = ℓ_n/(r_n − ℓ_n)`.
    pub fn h(&self) -> BigRational {
        &self.lo / (&self.hi - &self.lo)
    }

    pub fn interval(&self) -> Interval {
        Interval::half_open(self.lo.clone(), self.hi.clone())
    }

    /// Coefficients `(a, b)` of the branch map `T(y) = a·y + b` on `I_n`.
    pub fn forward(&self) -> (BigRational, BigRational) {
        let (s, h) = (self.s(), self.h());
        if self.flip {
            (-s, h + BigRational::one())
        } else {
            (s, -h)
        }
    }

    /// Coefficients of the inverse branch `[0,1] → closure(I_n)`.
    pub fn inverse(&self) -> (BigRational, BigRational) {
        let w = &self.hi - &self.lo;
        if self.flip {
            (-w, self.hi.clone())
        } else {
            (w, self.lo.clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Partition {
    /// Sorted by left endpoint.
    Finite(Vec<GlsBranch>),
    /// `I_n = [1/(n+1), 1/n)` for `n ≥ 1`, all increasing.
    Luroth,
}

/// A generalised Lüroth system `(𝓘, ε)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlsSystem {
    name: String,
    partition: Partition,
}

impl GlsSystem {
    /// Validates a finite partition: nonempty subintervals of `[0,1]`,
    /// pairwise disjoint, distinct digits, total length exactly 1.
    pub fn new(name: impl Into<String>, mut branches: Vec<GlsBranch>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidSystem("no intervals".into()));
        }
        branches.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut total = BigRational::zero();
        for b in &branches {
            if b.lo >= b.hi || b.lo.is_negative() || b.hi > BigRational::one() {
                return Err(Error::InvalidSystem(format!(
                    "interval [{}, {}) for digit {} is not a nonempty subinterval of [0,1]",
                    b.lo, b.hi, b.digit
                )));
            }
            total += &b.hi - &b.lo;
        }
        for w in branches.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(Error::InvalidSystem(format!(
                    "intervals for digits {} and {} overlap",
                    w[0].digit, w[1].digit
                )));
            }
        }
        let mut digits: Vec<Symbol> = branches.iter().map(|b| b.digit).collect();
        digits.sort_unstable();
        digits.dedup();
        if digits.len() != branches.len() {
            return Err(Error::InvalidSystem("repeated digit".into()));
        }
        if total != BigRational::one() {
            return Err(Error::InvalidSystem(format!("interval lengths sum to {total}, not 1")));
        }
        Ok(GlsSystem {
            name: name.into(),
            partition: Partition::Finite(branches),
        })
    }

    pub fn tent() -> Self {
        let half = crate::arith::rat(1, 2);
        GlsSystem::new(
            "tent",
            vec![
                GlsBranch::new(0, BigRational::zero(), half.clone(), false),
                GlsBranch::new(1, half, BigRational::one(), true),
            ],
        )
        .unwrap()
    }

    pub fn base(r: u64) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidSystem(format!("base {r} < 2")));
        }
        let r_i = r as i64;
        let branches = (0..r_i)
            .map(|i| {
                GlsBranch::new(
                    i as Symbol,
                    crate::arith::rat(i, r_i),
                    crate::arith::rat(i + 1, r_i),
                    false,
                )
            })
            .collect();
        GlsSystem::new(format!("base:{r}"), branches)
    }

    pub fn luroth() -> Self {
        GlsSystem {
            name: "luroth".into(),
            partition: Partition::Luroth,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> Alphabet {
        match &self.partition {
            Partition::Finite(bs) => Alphabet::finite(bs.iter().map(|b| b.digit).max().unwrap() + 1),
            Partition::Luroth => Alphabet::positive_naturals(),
        }
    }

    pub fn branches(&self) -> Option<&[GlsBranch]> {
        match &self.partition {
            Partition::Finite(bs) => Some(bs),
            Partition::Luroth => None,
        }
    }

    pub fn branch(&self, digit: Symbol) -> Result<GlsBranch> {
        match &self.partition {
            Partition::Finite(bs) => bs
                .iter()
                .find(|b| b.digit == digit)
                .cloned()
                .ok_or(Error::DigitOutOfRange { digit }),
            Partition::Luroth => {
                if digit == 0 {
                    return Err(Error::DigitOutOfRange { digit });
                }
                let n = BigRational::from_integer(digit.into());
                Ok(GlsBranch::new(
                    digit,
                    (&n + BigRational::one()).recip(),
                    n.recip(),
                    false,
                ))
            }
        }
    }

    /// The address `A_𝓘(y)` of a point `y = a·x + b`, decided exactly.
    fn address(&self, x: &mut RealPoint, a: &BigRational, b: &BigRational) -> Result<Option<GlsBranch>> {
        // Compare y with c.
        let mut cmp = |c: &BigRational| -> Ordering {
            if a.is_zero() {
                return b.cmp(c);
            }
            let t = (c - b) / a;
            let o = x.cmp_rational(&t);
            if a.is_negative() {
                o.reverse()
            } else {
                o
            }
        };
        match &self.partition {
            Partition::Finite(bs) => {
                for br in bs {
                    if cmp(&br.lo) != Ordering::Less && cmp(&br.hi) == Ordering::Less {
                        return Ok(Some(br.clone()));
                    }
                }
                Ok(None)
            }
            Partition::Luroth => {
                if cmp(&BigRational::zero()) != Ordering::Greater || cmp(&BigRational::one()) != Ordering::Less {
                    return Ok(None);
                }
                // Find n with 1/(n+1) ≤ y < 1/n: gallop, then bisect.
                let inv = |n: u64| BigRational::new(1.into(), n.into());
                let mut hi_n: u64 = 1;
                while cmp(&inv(hi_n + 1)) == Ordering::Less {
                    hi_n = hi_n.checked_mul(2).ok_or_else(|| {
                        Error::OutOfDomain("Lüroth digit exceeds 64 bits".into())
                    })?;
                }
                // y ≥ 1/(hi_n+1); y < 1/(lo_n) where lo_n = 1 or hi_n/2.
                let mut lo_n = (hi_n / 2).max(1);
                while lo_n < hi_n {
                    let mid = lo_n + (hi_n - lo_n) / 2;
                    if cmp(&inv(mid + 1)) != Ordering::Less {
                        hi_n = mid;
                    } else {
                        lo_n = mid + 1;
                    }
                }
                Ok(Some(self.branch(lo_n)?))
            }
        }
    }

    /// First `k` digits of the itinerary of `x ∈ [0,1]`. Positions whose
    /// iterate falls outside every `I_n` emit `Digit::Inf`; since `T ≡ 0`
    /// there, later digits follow the orbit of 0.
    pub fn itinerary(&self, x: &RealPoint, k: usize) -> Result<Vec<Digit>> {
        let mut x = x.clone();
        if !x.in_closed(&BigRational::zero(), &BigRational::one()) {
            return Err(Error::OutOfDomain(format!("{x} is not in [0,1]")));
        }
        // T^i(x) = a·x + b
        let mut a = BigRational::one();
        let mut b = BigRational::zero();
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            match self.address(&mut x, &a, &b)? {
                Some(br) => {
                    let (fa, fb) = br.forward();
                    a = &fa * &a;
                    b = &fa * &b + fb;
                    out.push(Digit::Int(br.digit));
                }
                None => {
                    a = BigRational::zero();
                    b = BigRational::zero();
                    out.push(Digit::Inf);
                }
            }
        }
        Ok(out)
    }

    /// The fundamental interval `Δ(a₁…a_k)`: the exact set of points whose
    /// itinerary starts with the word. Its width is `t_k = Π 1/s(a_i)`.
    pub fn evaluate(&self, digits: &[Symbol]) -> Result<Interval> {
        let (last, rest) = digits.split_last().ok_or(Error::EmptyWord)?;
        let mut iv = self.branch(*last)?.interval();
        for &d in rest.iter().rev() {
            let br = self.branch(d)?;
            let (ia, ib) = br.inverse();
            iv = iv.map_affine(&ia, &ib).intersect(&br.interval());
        }
        Ok(iv)
    }

    /// `T` applied to a set inside `I_digit`.
    pub fn forward_image(&self, digit: Symbol, iv: &Interval) -> Result<Interval> {
        let (a, b) = self.branch(digit)?.forward();
        Ok(iv.map_affine(&a, &b))
    }

    /// `t_k` for a digit word.
    pub fn width(&self, digits: &[Symbol]) -> Result<BigRational> {
        digits.iter().try_fold(BigRational::one(), |acc, &d| Ok(acc / self.branch(d)?.s()))
    }

    /// Total length of the first `n` intervals (for countable partitions,
    /// a partial sum of the series that must converge to 1).
    pub fn partial_mass(&self, n: usize) -> BigRational {
        match &self.partition {
            Partition::Finite(bs) => bs.iter().take(n).map(|b| &b.hi - &b.lo).sum(),
            Partition::Luroth => (1..=n as u64)
                .map(|d| {
                    let b = self.branch(d).unwrap();
                    &b.hi - &b.lo
                })
                .sum(),
        }
    }
}

impl Default for GlsSystem {
    fn default() -> Self {
        GlsSystem::tent()
    }
}
