use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{AlgebraicNumber, FieldElem, NumberField, RealPoint, DEFAULT_PRECISION_BITS};
use crate::error::{Error, Result};
use crate::symbolic::{Alphabet, Symbol};

/// Admissibility mode for finite words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    /// Every suffix `≤_lex` the ē prefix of the same length.
    Admissible,
    /// Every suffix `<_lex` the ē prefix of the same length.
    Proper,
}

/// `ē` as a computed prefix plus, when detected, its period.
#[derive(Debug, Clone)]
struct ECache {
    digits: Vec<Symbol>,
    /// `(start, len)`: `e_i = e_{i−len}` for `i ≥ start + len`.
    cycle: Option<(usize, usize)>,
    /// Orbit point `T^{digits.len()}(1)` for extending a non-periodic prefix.
    frontier: Option<FieldElem>,
}

/// A β-numeration system for real `β > 1`.
#[derive(Debug)]
pub struct BetaSystem {
    name: String,
    field: NumberField,
    integer: Option<u64>,
    /// Refinement cap for expansions of points outside `Q(β)`.
    precision_bits: u32,
    e: Mutex<ECache>,
}

const E_INITIAL_DEPTH: usize = 128;

impl BetaSystem {
    pub fn new(name: impl Into<String>, beta: AlgebraicNumber, precision_bits: u32) -> Result<Self> {
        let mut b = beta.clone();
        if b.cmp_rational(&BigRational::one()) != Ordering::Greater {
            return Err(Error::InvalidSystem(format!("β = {beta} is not > 1")));
        }
        let integer = b
            .as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer().to_u64().ok_or_else(|| Error::InvalidSystem("β too large".into())))
            .transpose()?;
        let field = NumberField::new(b, precision_bits);
        let sys = BetaSystem {
            name: name.into(),
            field,
            integer,
            precision_bits,
            e: Mutex::new(ECache {
                digits: Vec::new(),
                cycle: None,
                frontier: None,
            }),
        };
        sys.init_e_sequence()?;
        Ok(sys)
    }

    pub fn golden() -> Self {
        BetaSystem::new("golden", AlgebraicNumber::golden_ratio(), DEFAULT_PRECISION_BITS).unwrap()
    }

    pub fn tribonacci() -> Self {
        BetaSystem::new("tribonacci", AlgebraicNumber::tribonacci(), DEFAULT_PRECISION_BITS).unwrap()
    }

    pub fn integer(b: u64) -> Result<Self> {
        BetaSystem::new(
            format!("{b}"),
            AlgebraicNumber::from_rational(BigRational::from_integer(b.into())),
            DEFAULT_PRECISION_BITS,
        )
    }

    pub fn rational(q: BigRational) -> Result<Self> {
        BetaSystem::new(q.to_string(), AlgebraicNumber::from_rational(q), DEFAULT_PRECISION_BITS)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn beta(&self) -> &AlgebraicNumber {
        self.field.generator()
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta().to_f64()
    }

    /// The largest digit, `e₁` (= ⌊β⌋, or β−1 for integer β).
    pub fn max_digit(&self) -> Symbol {
        self.e_prefix(1).unwrap()[0]
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::finite(self.max_digit() + 1)
    }

    fn init_e_sequence(&self) -> Result<()> {
        let mut cache = self.e.lock().unwrap();
        if let Some(b) = self.integer {
            cache.digits = vec![b - 1];
            cache.cycle = Some((0, 1));
            return Ok(());
        }
        let f = &self.field;
        let mut x = f.from_rational(&BigRational::one());
        let mut seen: HashMap<FieldElem, usize> = HashMap::new();
        let mut digits = Vec::new();
        for i in 0..E_INITIAL_DEPTH {
            seen.insert(x.clone(), i);
            let y = f.mul_beta(&x);
            let d = f.floor(&y, i)?;
            x = f.sub_integer(&y, &d);
            digits.push(d.to_u64().unwrap());
            if f.is_zero(&x) {
                // 1_β = d₁…d_m 0^∞  ⇒  ē = (d₁…d_{m−1}(d_m − 1))^∞
                *digits.last_mut().unwrap() -= 1;
                let m = digits.len();
                cache.digits = digits;
                cache.cycle = Some((0, m));
                return Ok(());
            }
            if let Some(&j) = seen.get(&x) {
                let len = digits.len() - j;
                cache.digits = digits;
                cache.cycle = Some((j, len));
                return Ok(());
            }
        }
        cache.digits = digits;
        cache.frontier = Some(x);
        Ok(())
    }

    /// `e₁…e_k`.
    pub fn e_prefix(&self, k: usize) -> Result<Vec<Symbol>> {
        let mut cache = self.e.lock().unwrap();
        if let Some((start, len)) = cache.cycle {
            let base = &cache.digits;
            return Ok((0..k)
                .map(|i| {
                    if i < base.len() {
                        base[i]
                    } else {
                        base[start + (i - start) % len]
                    }
                })
                .collect());
        }
        let f = &self.field;
        while cache.digits.len() < k {
            let i = cache.digits.len();
            let x = cache.frontier.take().expect("frontier of non-periodic ē");
            let y = f.mul_beta(&x);
            let d = f.floor(&y, i)?;
            let nx = f.sub_integer(&y, &d);
            if f.is_zero(&nx) {
                return Err(Error::undecided(i, "greedy expansion of 1 terminated late"));
            }
            cache.digits.push(d.to_u64().unwrap());
            cache.frontier = Some(nx);
        }
        Ok(cache.digits[..k].to_vec())
    }

    /// Whether ē is known to be eventually periodic, as `(start, len)`.
    pub fn e_period(&self) -> Option<(usize, usize)> {
        self.e.lock().unwrap().cycle
    }

    /// `r_0 = 1, r_{i+1} = β·r_i − e_{i+1}`: the lengths of the images
    /// `T^i(Δ)` attached to the automaton vertices, as floats.
    pub fn vertex_lengths(&self, depth: usize) -> Result<Vec<f64>> {
        let e = self.e_prefix(depth)?;
        let f = &self.field;
        let mut r = f.from_rational(&BigRational::one());
        let mut out = vec![1.0];
        for (i, &ei) in e.iter().enumerate() {
            r = f.sub_integer(&f.mul_beta(&r), &BigInt::from(ei));
            if f.sign(&r, i)? != Ordering::Greater {
                return Err(Error::undecided(i, "vertex length is not positive"));
            }
            out.push(f.to_f64(&r));
        }
        Ok(out)
    }

    /// First `k` greedy digits `d_i = ⌊β T^{i−1}(x)⌋` of `x ∈ [0,1]`.
    pub fn expand(&self, x: &RealPoint, k: usize) -> Result<Vec<Symbol>> {
        let mut xp = x.clone();
        if !xp.in_closed(&BigRational::zero(), &BigRational::one()) {
            return Err(Error::OutOfDomain(format!("{x} is not in [0,1]")));
        }
        match xp.as_rational() {
            Some(q) => self.expand_exact(q, k),
            None => self.expand_enclosed(&xp, k),
        }
    }

    fn expand_exact(&self, q: &BigRational, k: usize) -> Result<Vec<Symbol>> {
        let f = &self.field;
        let mut x = f.from_rational(q);
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let y = f.mul_beta(&x);
            let d = f.floor(&y, i)?;
            x = f.sub_integer(&y, &d);
            out.push(d.to_u64().unwrap());
        }
        Ok(out)
    }

    /// `T^i(x) = β^i·x − c_i` with `c_{i+1} = β·c_i + d_i`; each digit is
    /// read from a joint enclosure of `x` and `β`, refined until certified.
    fn expand_enclosed(&self, x: &RealPoint, k: usize) -> Result<Vec<Symbol>> {
        let f = &self.field;
        let cap = self.precision_bits;
        let mut pow = f.from_rational(&BigRational::one());
        let mut c = f.from_rational(&BigRational::zero());
        let mut x = x.clone();
        let mut out = Vec::with_capacity(k);
        let growth = (self.beta_f64().log2().ceil() as u32).max(1);
        for i in 0..k {
            pow = f.mul_beta(&pow);
            c = f.mul_beta(&c);
            let mut bits = (64 + growth * (i as u32 + 1)).min(cap);
            let d = loop {
                x.refine_to_bits(bits);
                let mut b = f.generator().clone();
                b.refine_to_bits(bits);
                let (bl, bh) = b.enclosure();
                let (pl, ph) = pow.poly().eval_interval(bl, bh);
                let (cl, ch) = c.poly().eval_interval(bl, bh);
                let (xl, xh) = x.enclosure();
                let prods = [&pl * &xl, &pl * &xh, &ph * &xl, &ph * &xh];
                let lo = prods.iter().min().unwrap() - &ch;
                let hi = prods.iter().max().unwrap() - &cl;
                let dl = crate::arith::floor(&lo);
                if dl == crate::arith::floor(&hi) && !dl.is_negative() {
                    break dl;
                }
                if bits >= cap {
                    return Err(Error::undecided(i, format!("digit not certified at {cap} bits")));
                }
                bits = bits.saturating_mul(2).min(cap);
            };
            c = f.add(&c, &f.from_rational(&BigRational::from_integer(d.clone())));
            out.push(d.to_u64().unwrap());
        }
        Ok(out)
    }

    fn check_digits(&self, w: &[Symbol]) -> Result<()> {
        let m = self.max_digit();
        match w.iter().find(|&&d| d > m) {
            Some(&digit) => Err(Error::DigitOutOfRange { digit }),
            None => Ok(()),
        }
    }

    /// Lexicographic admissibility of a finite word.
    pub fn is_admissible(&self, w: &[Symbol], mode: Admissibility) -> Result<bool> {
        self.check_digits(w)?;
        let e = self.e_prefix(w.len())?;
        for i in 0..w.len() {
            let suffix = &w[i..];
            let ord = suffix.cmp(&e[..suffix.len()]);
            let ok = match mode {
                Admissibility::Admissible => ord != Ordering::Greater,
                Admissibility::Proper => ord == Ordering::Less,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn automaton(&self, depth: usize) -> Result<BetaAutomaton> {
        Ok(BetaAutomaton {
            e: self.e_prefix(depth.max(1))?,
        })
    }

    /// Lemma-style repair: with `u` closed at vertex 0 and `v` admissible,
    /// zero the last nonzero symbol of `v` so that `u·v′` is closed at 0.
    pub fn repair(&self, u: &[Symbol], v: &[Symbol]) -> Result<Vec<Symbol>> {
        let depth = u.len().max(v.len()).max(1);
        let g = self.automaton(depth)?;
        if !u.is_empty() && g.run(u)? != Some(0) {
            return Err(Error::NotClosed);
        }
        if g.run(v)?.is_none() {
            return Err(Error::NotAdmissible(format!("{v:?}")));
        }
        let mut out = v.to_vec();
        if let Some(i) = out.iter().rposition(|&d| d != 0) {
            out[i] = 0;
        }
        Ok(out)
    }
}

impl Clone for BetaSystem {
    fn clone(&self) -> Self {
        BetaSystem {
            name: self.name.clone(),
            field: self.field.clone(),
            integer: self.integer,
            precision_bits: self.precision_bits,
            e: Mutex::new(self.e.lock().unwrap().clone()),
        }
    }
}

/// The Parry graph truncated to vertices `0..=depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaAutomaton {
    e: Vec<Symbol>,
}

impl BetaAutomaton {
    pub fn depth(&self) -> usize {
        self.e.len()
    }

    /// One transition: from vertex `i`, `e_{i+1}` continues the spine and
    /// any smaller symbol returns to 0.
    pub fn step(&self, vertex: usize, a: Symbol) -> Result<Option<usize>> {
        let ei = *self.e.get(vertex).ok_or(Error::DepthTooSmall {
            depth: self.e.len(),
            len: vertex + 1,
        })?;
        Ok(match a.cmp(&ei) {
            Ordering::Less => Some(0),
            Ordering::Equal => Some(vertex + 1),
            Ordering::Greater => None,
        })
    }

    /// The end vertex of the path from 0 labelled `w`, or `None`.
    pub fn run(&self, w: &[Symbol]) -> Result<Option<usize>> {
        if w.len() > self.e.len() {
            return Err(Error::DepthTooSmall {
                depth: self.e.len(),
                len: w.len(),
            });
        }
        let mut v = 0;
        for &a in w {
            match self.step(v, a)? {
                Some(n) => v = n,
                None => return Ok(None),
            }
        }
        Ok(Some(v))
    }

    pub fn accepts(&self, w: &[Symbol]) -> Result<bool> {
        Ok(self.run(w)?.is_some())
    }

    /// `w ∈ 𝒢`: a closed path at vertex 0.
    pub fn closed(&self, w: &[Symbol]) -> Result<bool> {
        Ok(self.run(w)? == Some(0))
    }
}

/// Streaming automaton run that never needs a depth bound: the spine
/// position is followed through the (possibly lazily extended) ē.
#[derive(Debug)]
pub struct BetaRunner<'a> {
    sys: &'a BetaSystem,
    e: Vec<Symbol>,
    vertex: usize,
}

impl<'a> BetaRunner<'a> {
    pub fn new(sys: &'a BetaSystem) -> Result<Self> {
        Ok(BetaRunner {
            sys,
            e: sys.e_prefix(64)?,
            vertex: 0,
        })
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    /// Feeds one symbol; false (state unchanged) if the edge does not exist.
    pub fn feed(&mut self, a: Symbol) -> Result<bool> {
        if self.vertex >= self.e.len() {
            self.e = self.sys.e_prefix(2 * self.e.len())?;
        }
        match a.cmp(&self.e[self.vertex]) {
            Ordering::Less => self.vertex = 0,
            Ordering::Equal => self.vertex += 1,
            Ordering::Greater => return Ok(false),
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn words(alphabet: u64, len: usize) -> Vec<Vec<Symbol>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..alphabet).map(move |a| {
                        let mut w2 = w.clone();
                        w2.push(a);
                        w2
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn golden_e_sequence() {
        let g = BetaSystem::golden();
        let e = g.e_prefix(50).unwrap();
        let want: Vec<Symbol> = (0..50).map(|i| if i % 2 == 0 { 1 } else { 0 }).collect();
        assert_eq!(e, want);
        assert_eq!(g.max_digit(), 1);
    }

    #[test]
    fn integer_beta_clamps() {
        let b = BetaSystem::integer(2).unwrap();
        assert_eq!(b.e_prefix(5).unwrap(), vec![1; 5]);
        let g = b.automaton(10).unwrap();
        for w in words(2, 10) {
            assert!(g.accepts(&w).unwrap());
        }
    }

    #[test]
    fn expansions() {
        let b = BetaSystem::integer(2).unwrap();
        assert_eq!(b.expand(&rat(3, 8).into(), 4).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(b.expand(&rat(0, 1).into(), 5).unwrap(), vec![0; 5]);
        let g = BetaSystem::golden();
        assert_eq!(g.expand(&rat(1, 1).into(), 4).unwrap(), vec![1, 1, 0, 0]);
        assert!(g.expand(&rat(2, 1).into(), 1).is_err());
    }

    #[test]
    fn expansion_of_point_outside_field() {
        let g = BetaSystem::golden();
        let x = RealPoint::parse("sqrt2-1").unwrap();
        let d = g.expand(&x, 20).unwrap();
        // ψ of the digits approximates x from below.
        let beta = g.beta_f64();
        let v: f64 = d.iter().enumerate().map(|(i, &a)| a as f64 * beta.powi(-(i as i32) - 1)).sum();
        assert!(v <= x.to_f64() && x.to_f64() - v < beta.powi(-19));
        assert!(g.is_admissible(&d, Admissibility::Admissible).unwrap());
    }

    #[test]
    fn admissibility_examples() {
        let g = BetaSystem::golden();
        assert!(g.is_admissible(&[1, 0, 1, 0, 0, 1], Admissibility::Admissible).unwrap());
        assert!(!g.is_admissible(&[0, 1, 1, 0], Admissibility::Admissible).unwrap());
        assert!(g.is_admissible(&[0; 7], Admissibility::Proper).unwrap());
        assert!(matches!(
            g.is_admissible(&[2], Admissibility::Admissible),
            Err(Error::DigitOutOfRange { digit: 2 })
        ));
    }

    #[test]
    fn automaton_matches_lexicographic_order() {
        for sys in [BetaSystem::golden(), BetaSystem::integer(2).unwrap(), BetaSystem::tribonacci()] {
            let g = sys.automaton(12).unwrap();
            let r = sys.max_digit() + 1;
            for len in 0..=10 {
                for w in words(r, len) {
                    let lex = sys.is_admissible(&w, Admissibility::Admissible).unwrap();
                    assert_eq!(g.accepts(&w).unwrap(), lex, "{} {w:?}", sys.name());
                    let proper = sys.is_admissible(&w, Admissibility::Proper).unwrap();
                    assert_eq!(g.closed(&w).unwrap(), proper, "{} {w:?}", sys.name());
                }
            }
        }
    }

    #[test]
    fn golden_language_is_no_11() {
        let sys = BetaSystem::golden();
        let g = sys.automaton(12).unwrap();
        for w in words(2, 12) {
            let has_11 = w.windows(2).any(|p| p == [1, 1]);
            assert_eq!(g.accepts(&w).unwrap(), !has_11);
        }
        assert!(g.accepts(&[]).unwrap());
        assert!(g.closed(&[]).unwrap());
    }

    #[test]
    fn depth_is_enforced() {
        let g = BetaSystem::golden().automaton(3).unwrap();
        assert!(matches!(g.run(&[0, 0, 0, 0]), Err(Error::DepthTooSmall { .. })));
    }

    #[test]
    fn repair_examples() {
        let sys = BetaSystem::golden();
        let v2 = sys.repair(&[0], &[1, 0, 1, 0, 0, 0]).unwrap();
        assert_eq!(v2, vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(sys.repair(&[0], &[0, 0, 0]).unwrap(), vec![0, 0, 0]);
        let g = sys.automaton(16).unwrap();
        let mut uv = vec![0];
        uv.extend(&v2);
        assert!(g.closed(&uv).unwrap());
        assert!(matches!(sys.repair(&[1], &[0]), Err(Error::NotClosed)));
        assert!(matches!(sys.repair(&[0], &[1, 1]), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn tribonacci_e_sequence_is_periodic() {
        let t = BetaSystem::tribonacci();
        // 1_β = 111 ⇒ ē = (110)^∞
        assert_eq!(t.e_prefix(9).unwrap(), vec![1, 1, 0, 1, 1, 0, 1, 1, 0]);
        assert_eq!(t.e_period(), Some((0, 3)));
    }

    #[test]
    fn rational_beta_has_aperiodic_e() {
        let b = BetaSystem::rational(rat(3, 2)).unwrap();
        let e = b.e_prefix(200).unwrap();
        assert_eq!(e[0], 1);
        // ē is self-admissible: every tail ≤ ē.
        for i in 1..e.len() {
            assert!(e[i..] <= e[..e.len() - i]);
        }
        let r = b.vertex_lengths(20).unwrap();
        assert!(r.iter().all(|&x| x > 0.0 && x <= 1.0));
    }

    #[test]
    fn runner_follows_spine() {
        let sys = BetaSystem::golden();
        let mut r = BetaRunner::new(&sys).unwrap();
        for &a in &[1, 0, 1] {
            assert!(r.feed(a).unwrap());
        }
        assert_eq!(r.vertex(), 3);
        assert!(!r.feed(1).unwrap());
        assert!(r.feed(0).unwrap());
        assert_eq!(r.vertex(), 4);
        for _ in 0..200 {
            r.feed(1).unwrap();
            r.feed(0).unwrap();
        }
        assert_eq!(r.vertex(), 404);
        assert!(r.feed(0).unwrap() && r.feed(0).unwrap());
        assert_eq!(r.vertex(), 0);
    }
}
