//! Non-adaptive and adaptive testers: weighted rules that each read `q` bits
//! of the input (a fixed query set, or a depth-`q` reader) and accept or
//! reject by a predicate on the values read.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::budget;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::gf2::{IndexSet, LinearCode, Word, WordSet};
use crate::reader::{reader_discerning_tv, Node, Reader};
use crate::rng::SeededRng;

/// Largest `q` accepted for an explicit truth table.
pub const MAX_TABLE_Q: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Kind {
    NonAdaptive,
    Adaptive,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::NonAdaptive => "nonadaptive",
            Kind::Adaptive => "adaptive",
        }
    }
}

/// Acceptance predicate on the `q` values read. Bit `v` of a table is the
/// outcome for the reading whose MSB-first value is `v`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Predicate {
    Table { q: usize, bits: Vec<u64> },
    /// Accept iff the reading agrees on every listed pair of positions
    /// (1-based positions within the reading).
    EqualPairs(Vec<(usize, usize)>),
}

impl Predicate {
    pub fn table(q: usize, outcomes: impl IntoIterator<Item = bool>) -> Result<Self> {
        if q > MAX_TABLE_Q {
            return Err(Error::InvalidTester(format!("truth table for q = {q} is too large")));
        }
        let size = 1usize << q;
        let mut bits = vec![0u64; size.div_ceil(64)];
        let mut count = 0;
        for (v, b) in outcomes.into_iter().enumerate() {
            if v >= size {
                return Err(Error::InvalidTester(format!("truth table longer than 2^{q}")));
            }
            if b {
                bits[v / 64] |= 1 << (v % 64);
            }
            count += 1;
        }
        if count != size {
            return Err(Error::InvalidTester(format!("truth table has {count} entries, expected {size}")));
        }
        Ok(Predicate::Table { q, bits })
    }

    pub fn constant(q: usize, value: bool) -> Result<Self> {
        Predicate::table(q, std::iter::repeat_n(value, 1 << q.min(MAX_TABLE_Q + 1)))
    }

    /// Accepts exactly one reading.
    pub fn only(target: &Word) -> Result<Self> {
        let v = target.value() as usize;
        Predicate::table(target.len(), (0..1usize << target.len()).map(|u| u == v))
    }

    pub fn eval(&self, reading: &Word) -> bool {
        self.eval_value(reading.len(), reading.value())
    }

    fn eval_value(&self, q: usize, v: u128) -> bool {
        match self {
            Predicate::Table { bits, .. } => {
                let v = v as usize;
                bits[v / 64] >> (v % 64) & 1 == 1
            }
            Predicate::EqualPairs(pairs) => pairs
                .iter()
                .all(|&(a, b)| (v >> (q - a)) & 1 == (v >> (q - b)) & 1),
        }
    }

    fn check(&self, q: usize) -> Result<()> {
        match self {
            Predicate::Table { q: tq, .. } if *tq != q => {
                Err(Error::InvalidTester(format!("truth table over {tq} bits, expected {q}")))
            }
            Predicate::EqualPairs(pairs) => {
                for &(a, b) in pairs {
                    if a == 0 || b == 0 || a > q || b > q || a == b {
                        return Err(Error::InvalidTester(format!("bad pair {a}:{b} for q = {q}")));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Table line (`0`/`1` per outcome) or `pairs a:b ...`.
    pub fn to_line(&self) -> String {
        match self {
            Predicate::Table { q, bits } => (0..1usize << q)
                .map(|v| if bits[v / 64] >> (v % 64) & 1 == 1 { '1' } else { '0' })
                .collect(),
            Predicate::EqualPairs(pairs) => {
                let mut s = String::from("pairs");
                for (a, b) in pairs {
                    s.push_str(&format!(" {a}:{b}"));
                }
                s
            }
        }
    }

    pub fn parse_line(q: usize, line: &str) -> Result<Self> {
        if let Some(rest) = line.strip_prefix("pairs") {
            let mut pairs = Vec::new();
            for tok in rest.split_whitespace() {
                let (a, b) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidTester(format!("bad pair {tok:?}")))?;
                let num = |s: &str| s.parse::<usize>().map_err(|_| Error::InvalidTester(format!("bad pair {tok:?}")));
                pairs.push((num(a)?, num(b)?));
            }
            let p = Predicate::EqualPairs(pairs);
            p.check(q)?;
            return Ok(p);
        }
        let outcomes: Vec<bool> = line
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidTester(format!("bad truth-table character {c:?}"))),
            })
            .collect::<Result<_>>()?;
        Predicate::table(q, outcomes)
    }
}

/// How a rule chooses which bits to read.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Access {
    Query(IndexSet),
    Reader(Reader),
}

impl Access {
    pub fn reading(&self, x: &Word) -> Result<Word> {
        match self {
            Access::Query(q) => Ok(x.restrict(q)),
            Access::Reader(r) => Ok(r.read(x)?.values),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub weight: BigRational,
    pub access: Access,
    pub predicate: Predicate,
}

impl Rule {
    pub fn accepts(&self, x: &Word) -> Result<bool> {
        Ok(self.predicate.eval(&self.access.reading(x)?))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tester {
    kind: Kind,
    n: usize,
    q: usize,
    epsilon: BigRational,
    rules: Vec<Rule>,
}

impl Tester {
    pub fn new(kind: Kind, n: usize, q: usize, epsilon: BigRational, rules: Vec<Rule>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::InvalidTester("no rules".into()));
        }
        if epsilon.is_negative() || epsilon > BigRational::one() {
            return Err(Error::InvalidTester(format!("epsilon {epsilon} outside [0,1]")));
        }
        let mut total = BigRational::zero();
        for (i, rule) in rules.iter().enumerate() {
            if !rule.weight.is_positive() {
                return Err(Error::InvalidTester(format!("rule {} has non-positive weight", i + 1)));
            }
            total += &rule.weight;
            match (&rule.access, kind) {
                (Access::Query(set), Kind::NonAdaptive) => {
                    if set.n() != n || set.len() != q {
                        return Err(Error::InvalidTester(format!(
                            "rule {} queries {} indices of {}, expected {q} of {n}",
                            i + 1,
                            set.len(),
                            set.n()
                        )));
                    }
                }
                (Access::Reader(r), Kind::Adaptive) => {
                    if r.n() != n || !r.is_complete(q) {
                        return Err(Error::InvalidTester(format!(
                            "rule {} reader is not a complete depth-{q} reader over {n} bits",
                            i + 1
                        )));
                    }
                }
                _ => {
                    return Err(Error::InvalidTester(format!(
                        "rule {} does not match tester kind {}",
                        i + 1,
                        kind.name()
                    )))
                }
            }
            rule.predicate.check(q)?;
        }
        if !total.is_one() {
            return Err(Error::InvalidTester(format!("weights sum to {total}, not 1")));
        }
        Ok(Tester { kind, n, q, epsilon, rules })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Merges rules with identical access and predicate, keeping the order
    /// of first appearance.
    pub fn merged(&self) -> Tester {
        let mut out: Vec<Rule> = Vec::new();
        for rule in &self.rules {
            match out
                .iter_mut()
                .find(|r| r.access == rule.access && r.predicate == rule.predicate)
            {
                Some(r) => r.weight += &rule.weight,
                None => out.push(rule.clone()),
            }
        }
        Tester { rules: out, ..self.clone() }
    }

    /// The same tester with every query set replaced by the fixed-order
    /// reader over its indices (ascending).
    pub fn to_adaptive(&self) -> Tester {
        let rules = self
            .rules
            .iter()
            .map(|r| Rule {
                weight: r.weight.clone(),
                access: match &r.access {
                    Access::Query(q) => Access::Reader(
                        Reader::fixed_order(self.n, &q.to_vec()).expect("query set indices are valid"),
                    ),
                    other => other.clone(),
                },
                predicate: r.predicate.clone(),
            })
            .collect();
        Tester { kind: Kind::Adaptive, rules, ..self.clone() }
    }

    /// Rules sorted by descending weight; ties keep their file order.
    pub fn by_weight(&self) -> Vec<&Rule> {
        let mut rules: Vec<&Rule> = self.rules.iter().collect();
        rules.sort_by(|a, b| b.weight.cmp(&a.weight));
        rules
    }

    /// Exact probability that a uniformly chosen rule accepts `x`.
    pub fn accept_word(&self, x: &Word) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for rule in &self.rules {
            if rule.accepts(x)? {
                acc += &rule.weight;
            }
        }
        Ok(acc)
    }

    /// `Pr[accept]` for an input drawn from `p`, exact.
    pub fn accept_probability(&self, p: &Dist) -> Result<BigRational> {
        if p.word_len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: p.word_len() });
        }
        let mut acc = BigRational::zero();
        for rule in &self.rules {
            let mut hits = BigUint::zero();
            for (x, c) in p.counts() {
                if rule.accepts(x)? {
                    hits += c;
                }
            }
            acc += &rule.weight * BigRational::new(hits.into(), p.denominator().clone().into());
        }
        Ok(acc)
    }

    /// Per-index query probability `Pr[i ∈ Q]`, for non-adaptive testers.
    pub fn query_probabilities(&self) -> Result<Vec<BigRational>> {
        if self.kind != Kind::NonAdaptive {
            return Err(Error::WrongTesterKind { expected: "nonadaptive" });
        }
        let mut probs = vec![BigRational::zero(); self.n];
        for rule in &self.rules {
            if let Access::Query(q) = &rule.access {
                for i in q.iter() {
                    probs[i - 1] += &rule.weight;
                }
            }
        }
        Ok(probs)
    }

    /// Total weight of rules whose discerning tv against `cp` is at least
    /// `tau`. Adaptive testers need the conditioning value `y` of `x[J]`.
    pub fn discerning_mass(
        &self,
        j: &IndexSet,
        y: Option<&Word>,
        cp: &WordSet,
        tau: &BigRational,
    ) -> Result<BigRational> {
        let mut mass = BigRational::zero();
        for rule in &self.rules {
            let tv = match (&rule.access, y) {
                (Access::Query(q), _) => queryset_discerning_tv(q, j, cp)?,
                (Access::Reader(r), Some(y)) => reader_discerning_tv(r, j, y, cp)?,
                (Access::Reader(_), None) => return Err(Error::MissingConditioningValue),
            };
            if &tv >= tau {
                mass += &rule.weight;
            }
        }
        Ok(mass)
    }

    pub(crate) fn compile(&self) -> Result<Compiled> {
        let mut denom = BigInt::one();
        for r in &self.rules {
            denom = denom.lcm(r.weight.denom());
        }
        let denom_u = denom
            .to_u128()
            .ok_or_else(|| Error::InvalidTester("weight denominators too large for the fast path".into()))?;
        let mut rules = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            let num = (r.weight.numer() * (&denom / r.weight.denom()))
                .to_u128()
                .ok_or_else(|| Error::InvalidTester("weight too large for the fast path".into()))?;
            let eval = match (&r.access, &r.predicate) {
                (Access::Query(q), Predicate::EqualPairs(pairs)) => {
                    let idx = q.to_vec();
                    Eval::QueryPairs(
                        pairs
                            .iter()
                            .map(|&(a, b)| ((self.n - idx[a - 1]) as u8, (self.n - idx[b - 1]) as u8))
                            .collect(),
                    )
                }
                (Access::Query(q), p) => {
                    Eval::Query(q.iter().map(|i| (self.n - i) as u8).collect(), p.clone())
                }
                (Access::Reader(rd), p) => Eval::Reader(rd.root().clone(), p.clone()),
            };
            rules.push((num, eval));
        }
        Ok(Compiled { n: self.n, q: self.q, denom: denom_u, rules })
    }
}

impl fmt::Display for Tester {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {} {} {}", self.kind.name(), self.n, self.q, self.rules.len(), self.epsilon)?;
        for r in &self.rules {
            writeln!(f, "{}", r.weight)?;
            match &r.access {
                Access::Query(q) => {
                    let idx: Vec<String> = q.iter().map(|i| i.to_string()).collect();
                    writeln!(f, "{}", idx.join(" "))?;
                }
                Access::Reader(rd) => writeln!(f, "{}", rd.to_preorder())?,
            }
            writeln!(f, "{}", r.predicate.to_line())?;
        }
        Ok(())
    }
}

enum Eval {
    QueryPairs(Vec<(u8, u8)>),
    Query(Vec<u8>, Predicate),
    Reader(std::sync::Arc<Node>, Predicate),
}

/// Integer-weight evaluator over raw word values.
pub(crate) struct Compiled {
    n: usize,
    q: usize,
    pub denom: u128,
    rules: Vec<(u128, Eval)>,
}

impl Compiled {
    /// Accepting weight numerator for the word with value `x`.
    pub fn accept_num(&self, x: u128) -> u128 {
        let mut acc = 0u128;
        for (w, eval) in &self.rules {
            let ok = match eval {
                Eval::QueryPairs(pairs) => pairs.iter().all(|&(a, b)| (x >> a ^ x >> b) & 1 == 0),
                Eval::Query(shifts, p) => {
                    let v = shifts.iter().fold(0u128, |v, &s| v << 1 | (x >> s) & 1);
                    p.eval_value(self.q, v)
                }
                Eval::Reader(root, p) => {
                    let mut node = root;
                    let mut v = 0u128;
                    while let Node::Read { index, zero, one } = &**node {
                        let b = (x >> (self.n - index)) & 1;
                        v = v << 1 | b;
                        node = if b == 1 { one } else { zero };
                    }
                    p.eval_value(self.q, v)
                }
            };
            if ok {
                acc += w;
            }
        }
        acc
    }
}

/// `tv(U(Cp)[Q], U_J(Cp)[Q])`, exact.
pub fn queryset_discerning_tv(q: &IndexSet, j: &IndexSet, cp: &WordSet) -> Result<BigRational> {
    if cp.is_empty() {
        return Err(Error::EmptySet);
    }
    let actual = Dist::uniform_over(cp)?.marginal(q)?;
    actual.tv(&Dist::hybrid_marginal(cp, j, q)?)
}

/// A property with a Hamming distance, used to decide which inputs are far.
pub trait Property: Sync {
    fn word_len(&self) -> usize;
    /// Absolute Hamming distance from `x` to the property.
    fn distance(&self, x: &Word) -> Result<u32>;
}

impl Property for LinearCode {
    fn word_len(&self) -> usize {
        self.n()
    }

    fn distance(&self, x: &Word) -> Result<u32> {
        LinearCode::distance(self, x)
    }
}

/// `d(x, P) / n > epsilon`, in integer arithmetic.
pub fn is_far(distance: u32, n: usize, epsilon: &BigRational) -> bool {
    BigInt::from(distance) * epsilon.denom() > epsilon.numer() * BigInt::from(n)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ValidationMode {
    /// Exhaustive when `2^n` fits the enumeration budget, else an error.
    Exhaustive,
    /// Uniform seeded samples for the far side; members are always exact.
    MonteCarlo { samples: u64, seed: u64 },
    /// Exhaustive within budget, otherwise Monte Carlo.
    Auto { samples: u64, seed: u64 },
}

#[derive(Clone, PartialEq, Debug)]
pub struct ValidityReport {
    pub monte_carlo: bool,
    /// Inputs examined on the far side.
    pub checked: u64,
    pub member_min: BigRational,
    pub member_argmin: Word,
    pub far_count: u64,
    pub far_max: Option<BigRational>,
    pub far_argmax: Option<Word>,
    /// Mean acceptance over the far inputs examined.
    pub far_mean: Option<f64>,
    /// Standard error of `far_mean` (Monte Carlo only).
    pub far_se: Option<f64>,
    pub pass: bool,
}

/// Checks the two-sided partial-tester conditions: acceptance at least 2/3
/// on every member of `cp`, at most 1/3 on every input `epsilon`-far from
/// `property`.
pub fn validate_partial_tester(
    t: &Tester,
    property: &dyn Property,
    cp: &WordSet,
    mode: ValidationMode,
) -> Result<ValidityReport> {
    if cp.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = t.n();
    if property.word_len() != n || cp.word_len() != n {
        return Err(Error::LengthMismatch { expected: n, found: cp.word_len() });
    }
    let compiled = t.compile()?;
    let denom = compiled.denom;
    let as_rational = |num: u128| BigRational::new(BigInt::from(num), BigInt::from(denom));

    let (mut min_num, mut argmin) = (u128::MAX, cp.words()[0]);
    for c in cp.iter() {
        let a = compiled.accept_num(c.value());
        if a < min_num {
            min_num = a;
            argmin = *c;
        }
    }

    let exhaustive = match mode {
        ValidationMode::Exhaustive => {
            budget::check("tester validation", n)?;
            true
        }
        ValidationMode::MonteCarlo { .. } => false,
        ValidationMode::Auto { .. } => budget::check("tester validation", n).is_ok(),
    };

    #[derive(Clone, Copy)]
    struct Acc {
        count: u64,
        sum: f64,
        sum_sq: f64,
        max: Option<(u128, u128)>,
    }
    let empty = Acc { count: 0, sum: 0.0, sum_sq: 0.0, max: None };
    // far iff d > min_far - 1, i.e. d >= min_far
    let min_far = (0..=n as u32 + 1)
        .find(|&d| is_far(d, n, t.epsilon()))
        .unwrap_or(u32::MAX);
    let visit = |mut acc: Acc, x: u128| -> Result<Acc> {
        let w = Word::from_value_unchecked(n, x);
        if property.distance(&w)? >= min_far {
            let a = compiled.accept_num(x);
            let f = a as f64 / denom as f64;
            acc.count += 1;
            acc.sum += f;
            acc.sum_sq += f * f;
            // ties keep the smallest word
            acc.max = match acc.max {
                Some((m, mx)) if m > a || (m == a && mx <= x) => Some((m, mx)),
                _ => Some((a, x)),
            };
        }
        Ok(acc)
    };
    let combine = |a: Acc, b: Acc| Acc {
        count: a.count + b.count,
        sum: a.sum + b.sum,
        sum_sq: a.sum_sq + b.sum_sq,
        max: match (a.max, b.max) {
            (Some(p), Some(q)) => Some(if q.0 > p.0 || (q.0 == p.0 && q.1 < p.1) { q } else { p }),
            (p, None) => p,
            (None, q) => q,
        },
    };

    const BLOCK: u128 = 1 << 14;
    let (acc, checked) = if exhaustive {
        let total: u128 = 1u128 << n;
        let blocks = total.div_ceil(BLOCK) as u64;
        let acc = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let lo = b as u128 * BLOCK;
                let hi = (lo + BLOCK).min(total);
                (lo..hi).try_fold(empty, &visit)
            })
            .try_reduce(|| empty, |a, b| Ok(combine(a, b)))?;
        (acc, total as u64)
    } else {
        let (samples, seed) = match mode {
            ValidationMode::MonteCarlo { samples, seed } | ValidationMode::Auto { samples, seed } => (samples, seed),
            ValidationMode::Exhaustive => unreachable!(),
        };
        let mut rng = SeededRng::new(seed);
        let xs: Vec<u128> = (0..samples).map(|_| rng.bits(n)).collect();
        let acc = xs
            .par_chunks(BLOCK as usize)
            .map(|chunk| chunk.iter().try_fold(empty, |acc, &x| visit(acc, x)))
            .try_reduce(|| empty, |a, b| Ok(combine(a, b)))?;
        (acc, samples)
    };

    let far_mean = (acc.count > 0).then(|| acc.sum / acc.count as f64);
    let far_se = match (exhaustive, far_mean) {
        (false, Some(mean)) if acc.count > 1 => {
            let c = acc.count as f64;
            let var = ((acc.sum_sq - c * mean * mean) / (c - 1.0)).max(0.0);
            Some((var / c).sqrt())
        }
        _ => None,
    };
    let member_min = as_rational(min_num);
    let far_max = acc.max.map(|(m, _)| as_rational(m));
    let pass = member_min >= BigRational::new(2.into(), 3.into())
        && far_max.as_ref().is_none_or(|m| m <= &BigRational::new(1.into(), 3.into()));
    Ok(ValidityReport {
        monte_carlo: !exhaustive,
        checked,
        member_min,
        member_argmin: argmin,
        far_count: acc.count,
        far_max,
        far_argmax: acc.max.map(|(_, x)| Word::from_value_unchecked(n, x)),
        far_mean,
        far_se,
        pass,
    })
}

fn random_weights(m: usize, rng: &mut SeededRng) -> Vec<BigRational> {
    let raw: Vec<u64> = (0..m).map(|_| 1 + rng.below(4)).collect();
    let total: u64 = raw.iter().sum();
    raw.into_iter().map(|w| BigRational::new(w.into(), total.into())).collect()
}

/// A complete depth-`q` reader choosing a random unread index at each node.
pub fn random_complete_reader(n: usize, q: usize, rng: &mut SeededRng) -> Result<Reader> {
    if q > n {
        return Err(Error::InsufficientUnread { needed: q - n });
    }
    fn go(n: usize, used: &mut Vec<usize>, left: usize, rng: &mut SeededRng) -> std::sync::Arc<Node> {
        if left == 0 {
            return Node::stop();
        }
        let free: Vec<usize> = (1..=n).filter(|i| !used.contains(i)).collect();
        let i = free[rng.below(free.len() as u64) as usize];
        used.push(i);
        let zero = go(n, used, left - 1, rng);
        let one = go(n, used, left - 1, rng);
        used.pop();
        Node::read(i, zero, one)
    }
    Reader::new(n, go(n, &mut Vec::new(), q, rng))
}

fn random_query_set(n: usize, q: usize, rng: &mut SeededRng) -> Result<IndexSet> {
    IndexSet::new(n, rng.sample_distinct(n, q).into_iter().map(|i| i + 1))
}

/// `m` random rules with random positive weights and random truth tables.
pub fn random_tester(kind: Kind, n: usize, q: usize, m: usize, epsilon: BigRational, seed: u64) -> Result<Tester> {
    let mut rng = SeededRng::new(seed);
    let weights = random_weights(m, &mut rng);
    let mut rules = Vec::with_capacity(m);
    for weight in weights {
        let access = match kind {
            Kind::NonAdaptive => Access::Query(random_query_set(n, q, &mut rng)?),
            Kind::Adaptive => Access::Reader(random_complete_reader(n, q, &mut rng)?),
        };
        let predicate = Predicate::table(q, (0..1usize << q).map(|_| rng.coin()))?;
        rules.push(Rule { weight, access, predicate });
    }
    Tester::new(kind, n, q, epsilon, rules)
}

/// Rules that read `q` random bits and accept iff they agree with `target`:
/// the natural tester for the single-word property `{target}`.
pub fn singleton_tester(kind: Kind, target: &Word, q: usize, m: usize, epsilon: BigRational, seed: u64) -> Result<Tester> {
    let n = target.len();
    let mut rng = SeededRng::new(seed);
    let weights = random_weights(m, &mut rng);
    let mut rules = Vec::with_capacity(m);
    for weight in weights {
        let (access, predicate) = match kind {
            Kind::NonAdaptive => {
                let set = random_query_set(n, q, &mut rng)?;
                let p = Predicate::only(&target.restrict(&set))?;
                (Access::Query(set), p)
            }
            Kind::Adaptive => {
                let r = random_complete_reader(n, q, &mut rng)?;
                // the branch that follows target reads its values in order
                let wanted = r.read(target)?.values;
                (Access::Reader(r), Predicate::only(&wanted)?)
            }
        };
        rules.push(Rule { weight, access, predicate });
    }
    Ok(Tester::new(kind, n, q, epsilon, rules)?.merged())
}

/// Exact rational as an `f64`, for reporting.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
