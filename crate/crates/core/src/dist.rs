//! Exact finite distributions over bit strings.
//!
//! Weights are stored as non-negative integers over one common denominator,
//! so a distribution sums to exactly 1 by construction and every total
//! variation distance is an exact rational. Entropy and divergence need
//! logarithms and come back as `f64` (bits); compare them with [`TOLERANCE`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget;
use crate::error::{Error, Result};
use crate::gf2::{IndexSet, Word, WordSet};

/// Comparison slack for floating-point entropies, in bits.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dist {
    len: usize,
    denom: BigUint,
    weights: BTreeMap<Word, BigUint>,
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `-Σ (c/total) log2(c/total)` over the given counts.
fn entropy_of_counts<'a>(counts: impl Iterator<Item = &'a BigUint>, total: &BigUint) -> f64 {
    let t = to_f64(total);
    counts
        .map(|c| {
            let p = to_f64(c) / t;
            if p > 0.0 {
                -p * p.log2()
            } else {
                0.0
            }
        })
        .sum::<f64>()
        + 0.0
}

fn check_within(j: &IndexSet, len: usize) -> Result<()> {
    if let Some(bad) = j.iter().find(|&i| i > len) {
        return Err(Error::IndexOutOfRange { index: bad, n: len });
    }
    Ok(())
}

/// Places `inside` on the members of `j` and `outside` on the rest.
fn merge(len: usize, j: &IndexSet, inside: &Word, outside: &Word) -> Word {
    let (mut a, mut b) = (0usize, 0usize);
    let mut value = 0u128;
    for i in 1..=len {
        let bit = if j.contains(i) {
            a += 1;
            inside.bit(a)
        } else {
            b += 1;
            outside.bit(b)
        };
        value = (value << 1) | bit as u128;
    }
    Word::from_value_unchecked(len, value)
}

impl Dist {
    /// Builds a distribution from unnormalized integer weights. Zero weights
    /// are dropped; at least one weight must be positive.
    pub fn from_counts(len: usize, counts: impl IntoIterator<Item = (Word, BigUint)>) -> Result<Self> {
        let mut weights: BTreeMap<Word, BigUint> = BTreeMap::new();
        for (w, c) in counts {
            if w.len() != len {
                return Err(Error::LengthMismatch { expected: len, found: w.len() });
            }
            if !c.is_zero() {
                *weights.entry(w).or_default() += c;
            }
        }
        let denom: BigUint = weights.values().sum();
        if denom.is_zero() {
            return Err(Error::EmptySet);
        }
        let mut d = Dist { len, denom, weights };
        d.reduce();
        Ok(d)
    }

    /// Builds a distribution from rational weights that must be positive and
    /// sum to exactly 1.
    pub fn from_rationals(len: usize, weights: impl IntoIterator<Item = (Word, BigRational)>) -> Result<Self> {
        let weights: Vec<(Word, BigRational)> = weights.into_iter().collect();
        let sum: BigRational = weights.iter().map(|(_, r)| r.clone()).sum();
        if !sum.is_one() || weights.iter().any(|(_, r)| !r.is_positive()) {
            return Err(Error::BadWeights(sum.to_string()));
        }
        let lcm = weights
            .iter()
            .fold(BigInt::one(), |acc, (_, r)| acc.lcm(r.denom()));
        let mut seen = std::collections::BTreeSet::new();
        let mut counts = Vec::with_capacity(weights.len());
        for (w, r) in weights {
            if !seen.insert(w) {
                return Err(Error::DuplicateWord(w.to_string()));
            }
            let c = (r.numer() * (&lcm / r.denom())).to_biguint().expect("positive");
            counts.push((w, c));
        }
        Dist::from_counts(len, counts)
    }

    fn reduce(&mut self) {
        let g = self
            .weights
            .values()
            .fold(self.denom.clone(), |acc, c| acc.gcd(c));
        if !g.is_one() {
            self.denom /= &g;
            for c in self.weights.values_mut() {
                *c /= &g;
            }
        }
    }

    /// Uniform distribution over a non-empty set.
    pub fn uniform_over(s: &WordSet) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Dist {
            len: s.word_len(),
            denom: BigUint::from(s.len()),
            weights: s.iter().map(|w| (*w, BigUint::one())).collect(),
        })
    }

    pub fn point_mass(w: Word) -> Self {
        Dist {
            len: w.len(),
            denom: BigUint::one(),
            weights: [(w, BigUint::one())].into_iter().collect(),
        }
    }

    /// Uniform distribution over {0,1}^m.
    pub fn uniform_cube(m: usize) -> Result<Self> {
        budget::check("uniform cube", m)?;
        Ok(Dist {
            len: m,
            denom: BigUint::one() << m,
            weights: Word::all(m).map(|w| (w, BigUint::one())).collect(),
        })
    }

    /// Bits per outcome.
    pub fn word_len(&self) -> usize {
        self.len
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denom
    }

    /// Outcomes with their integer weights over [`Dist::denominator`].
    pub fn counts(&self) -> impl Iterator<Item = (&Word, &BigUint)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.weights.keys()
    }

    pub fn prob(&self, w: &Word) -> BigRational {
        match self.weights.get(w) {
            Some(c) => BigRational::new(BigInt::from(c.clone()), BigInt::from(self.denom.clone())),
            None => BigRational::zero(),
        }
    }

    /// Exact sum of the weights; always 1.
    pub fn total(&self) -> BigRational {
        let s: BigUint = self.weights.values().sum();
        BigRational::new(s.into(), self.denom.clone().into())
    }

    /// Probability of an event.
    pub fn prob_where(&self, pred: impl Fn(&Word) -> bool) -> BigRational {
        let s: BigUint = self
            .weights
            .iter()
            .filter(|(w, _)| pred(w))
            .map(|(_, c)| c)
            .sum();
        BigRational::new(s.into(), self.denom.clone().into())
    }

    /// Pushforward under `f`, whose outputs all have length `out_len`.
    pub fn map(&self, out_len: usize, f: impl Fn(&Word) -> Word) -> Result<Self> {
        let mut out: BTreeMap<Word, BigUint> = BTreeMap::new();
        for (w, c) in &self.weights {
            let y = f(w);
            if y.len() != out_len {
                return Err(Error::LengthMismatch { expected: out_len, found: y.len() });
            }
            *out.entry(y).or_default() += c;
        }
        let mut d = Dist { len: out_len, denom: self.denom.clone(), weights: out };
        d.reduce();
        Ok(d)
    }

    /// Distribution of `X[J]`.
    pub fn marginal(&self, j: &IndexSet) -> Result<Self> {
        check_within(j, self.len)?;
        self.map(j.len(), |w| w.restrict(j))
    }

    /// Distribution of `X` given `X[J] = y`, still over full-length words.
    pub fn condition_on(&self, j: &IndexSet, y: &Word) -> Result<Self> {
        check_within(j, self.len)?;
        if y.len() != j.len() {
            return Err(Error::LengthMismatch { expected: j.len(), found: y.len() });
        }
        let kept: BTreeMap<Word, BigUint> = self
            .weights
            .iter()
            .filter(|(w, _)| w.restrict(j) == *y)
            .map(|(w, c)| (*w, c.clone()))
            .collect();
        let denom: BigUint = kept.values().sum();
        if denom.is_zero() {
            return Err(Error::ZeroProbability);
        }
        let mut d = Dist { len: self.len, denom, weights: kept };
        d.reduce();
        Ok(d)
    }

    /// `U_J(S)`: draw `x` uniformly from `S`, keep `x[J]`, and replace every
    /// bit outside `J` by an independent fair coin.
    pub fn hybrid_outside(s: &WordSet, j: &IndexSet) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = s.word_len();
        check_within(j, n)?;
        let free = n - j.len();
        budget::check("hybrid distribution", free)?;
        let mut patterns: BTreeMap<Word, u64> = BTreeMap::new();
        for c in s.iter() {
            *patterns.entry(c.restrict(j)).or_default() += 1;
        }
        let mut weights = BTreeMap::new();
        for (z, count) in patterns {
            for f in Word::all(free) {
                weights.insert(merge(n, j, &z, &f), BigUint::from(count));
            }
        }
        let mut d = Dist { len: n, denom: BigUint::from(s.len()) << free, weights };
        d.reduce();
        Ok(d)
    }

    /// `U_J(S)[Q]` computed directly, without materializing `U_J(S)`.
    pub fn hybrid_marginal(s: &WordSet, j: &IndexSet, q: &IndexSet) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        check_within(j, s.word_len())?;
        check_within(q, s.word_len())?;
        let fixed = q.intersection(j);
        let free = q.difference(j);
        budget::check("hybrid marginal", free.len())?;
        // positions of the fixed indices inside Q's ascending order
        let local_fixed = IndexSet::new(q.len(), fixed.iter().map(|i| q.position(i).unwrap() + 1))?;
        let mut patterns: BTreeMap<Word, u64> = BTreeMap::new();
        for c in s.iter() {
            *patterns.entry(c.restrict(&fixed)).or_default() += 1;
        }
        let mut weights = BTreeMap::new();
        for (z, count) in patterns {
            for f in Word::all(free.len()) {
                weights.insert(merge(q.len(), &local_fixed, &z, &f), BigUint::from(count));
            }
        }
        let mut d = Dist { len: q.len(), denom: BigUint::from(s.len()) << free.len(), weights };
        d.reduce();
        Ok(d)
    }

    /// Total variation distance, exact.
    pub fn tv(&self, other: &Dist) -> Result<BigRational> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { expected: self.len, found: other.len });
        }
        let zero = BigUint::zero();
        let mut acc = BigUint::zero();
        let mut visit = |a: &BigUint, b: &BigUint| {
            let x = a * &other.denom;
            let y = b * &self.denom;
            acc += if x >= y { x - y } else { y - x };
        };
        for (w, a) in &self.weights {
            visit(a, other.weights.get(w).unwrap_or(&zero));
        }
        for (w, b) in &other.weights {
            if !self.weights.contains_key(w) {
                visit(&zero, b);
            }
        }
        let den = BigUint::from(2u8) * &self.denom * &other.denom;
        Ok(BigRational::new(acc.into(), den.into()))
    }

    /// Total variation distance from the uniform distribution on
    /// {0,1}^len, without enumerating the cube.
    pub fn tv_to_uniform(&self) -> BigRational {
        // Σ_support |a/d - 2^-m| + (2^m - |support|) 2^-m, halved
        let m = self.len;
        let cube = BigUint::one() << m;
        let mut acc = BigUint::zero();
        for a in self.weights.values() {
            let x = a * &cube;
            acc += if x >= self.denom { x - &self.denom } else { &self.denom - x };
        }
        let missing = &cube - BigUint::from(self.weights.len());
        acc += missing * &self.denom;
        let den = BigUint::from(2u8) * &self.denom * cube;
        BigRational::new(acc.into(), den.into())
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of_counts(self.weights.values(), &self.denom)
    }

    /// `H[X[target] | X[given]]` in bits.
    pub fn conditional_entropy(&self, target: &IndexSet, given: &IndexSet) -> Result<f64> {
        check_within(target, self.len)?;
        check_within(given, self.len)?;
        if !target.is_disjoint(given) {
            return Err(Error::OverlappingSets);
        }
        let mut groups: BTreeMap<Word, BTreeMap<Word, BigUint>> = BTreeMap::new();
        for (w, c) in &self.weights {
            *groups
                .entry(w.restrict(given))
                .or_default()
                .entry(w.restrict(target))
                .or_default() += c;
        }
        let d = to_f64(&self.denom);
        Ok(groups
            .values()
            .map(|g| {
                let total: BigUint = g.values().sum();
                to_f64(&total) / d * entropy_of_counts(g.values(), &total)
            })
            .sum())
    }

    /// `D(p || q)` in bits; `+∞` when `p` has mass where `q` has none.
    pub fn divergence(&self, q: &Dist) -> Result<f64> {
        if self.len != q.len {
            return Err(Error::LengthMismatch { expected: self.len, found: q.len });
        }
        let (dp, dq) = (to_f64(&self.denom), to_f64(&q.denom));
        let mut sum = 0.0;
        for (w, a) in &self.weights {
            let Some(b) = q.weights.get(w) else {
                return Ok(f64::INFINITY);
            };
            let p = to_f64(a) / dp;
            sum += p * (p / (to_f64(b) / dq)).log2();
        }
        Ok(sum.max(0.0))
    }
}

/// `d_TV(p, q)` as a free function.
pub fn tv(p: &Dist, q: &Dist) -> Result<BigRational> {
    p.tv(q)
}
