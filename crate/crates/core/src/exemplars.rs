//! Two properties that split into few easily testable parts: the language
//! of palindrome pairs `{u u^R v v^R}`, sliced by `|u| = i`, and pairs of
//! graphs related by a fixed vertex permutation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::budget;
use crate::error::{Error, Result};
use crate::gf2::{IndexSet, Word, WordSet};
use crate::rng::SeededRng;
use crate::tester::{Access, Kind, Predicate, Property, Rule, Tester};

/// Rules drawn for each exemplar tester before merging duplicates.
pub const DEFAULT_RULES: usize = 64;

/// `ceil(2 / epsilon)`, the number of constraint pairs each rule samples.
pub fn pair_samples(epsilon: &BigRational) -> Result<usize> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let v = (BigInt::from(2) * epsilon.denom()).div_ceil(epsilon.numer());
    v.to_usize().ok_or_else(|| Error::InvalidParameter("epsilon too small".into()))
}

/// Nominal query count `2 ceil(2/epsilon)`, before capping at the number of
/// available pairs.
pub fn palindrome_query_budget(epsilon: &BigRational) -> Result<usize> {
    Ok(2 * pair_samples(epsilon)?)
}

fn check_slice(n: usize, i: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("palindrome words need even length, got {n}")));
    }
    if 2 * i > n {
        return Err(Error::InvalidParameter(format!("slice {i} needs 2i <= {n}")));
    }
    if n > crate::gf2::MAX_LEN {
        return Err(Error::WordTooLong(n));
    }
    Ok(())
}

/// Mirrored pairs of slice `L_i`: `(j, 2i+1-j)` inside `u u^R` and
/// `(2i+j, n+1-j)` inside `v v^R`.
pub fn palindrome_pairs(n: usize, i: usize) -> Result<Vec<(usize, usize)>> {
    check_slice(n, i)?;
    let mut pairs: Vec<(usize, usize)> = (1..=i).map(|j| (j, 2 * i + 1 - j)).collect();
    pairs.extend((1..=(n - 2 * i) / 2).map(|j| (2 * i + j, n + 1 - j)));
    Ok(pairs)
}

fn low_mask(len: usize) -> u128 {
    if len == 0 {
        0
    } else {
        u128::MAX >> (128 - len)
    }
}

/// Violated pairs of `L_i` for the `n`-bit value `v`, given `rev`, the
/// value of the reversed word. The prefix block `u` is mirrored by the low
/// `2i` bits of `rev`, the suffix block by its high `n - 2i` bits.
fn slice_violations_raw(v: u128, rev: u128, n: usize, i: usize) -> u32 {
    let tail = n - 2 * i;
    let head = if tail == 128 { 0 } else { (v >> tail) ^ (rev & low_mask(2 * i)) };
    let foot = (v & low_mask(tail)) ^ if 2 * i == 128 { 0 } else { rev >> (2 * i) };
    if n <= 64 {
        ((head as u64) << tail | foot as u64).count_ones() / 2
    } else {
        (head.count_ones() + foot.count_ones()) / 2
    }
}

fn reversed(v: u128, n: usize) -> u128 {
    if n == 0 {
        0
    } else if n <= 64 {
        ((v as u64).reverse_bits() >> (64 - n)) as u128
    } else {
        v.reverse_bits() >> (128 - n)
    }
}

/// Number of violated pairs of `L_i`, which is also the distance to `L_i`.
pub fn palindrome_slice_violations(x: &Word, i: usize) -> Result<u32> {
    check_slice(x.len(), i)?;
    let v = x.value();
    Ok(slice_violations_raw(v, reversed(v, x.len()), x.len(), i))
}

pub fn in_palindrome_slice(x: &Word, i: usize) -> Result<bool> {
    Ok(palindrome_slice_violations(x, i)? == 0)
}

/// Hamming distance to the whole language: the fewest violated pairs over
/// all slices.
pub fn palindrome_distance(x: &Word) -> Result<u32> {
    let n = x.len();
    check_slice(n, 0)?;
    let v = x.value();
    let rev = reversed(v, n);
    Ok((0..=n / 2).map(|i| slice_violations_raw(v, rev, n, i)).min().unwrap_or(0))
}

pub fn in_palindrome_language(x: &Word) -> Result<bool> {
    Ok(palindrome_distance(x)? == 0)
}

/// All members of `L_i`.
pub fn palindrome_slice_members(n: usize, i: usize) -> Result<WordSet> {
    let pairs = palindrome_pairs(n, i)?;
    budget::check("palindrome slice enumeration", pairs.len())?;
    let mut words = Vec::with_capacity(1 << pairs.len());
    for free in Word::all(pairs.len()) {
        let mut x = Word::zeros(n)?;
        for (p, &(a, b)) in pairs.iter().enumerate() {
            let bit = free.bit(p + 1);
            x = x.with_bit(a, bit).with_bit(b, bit);
        }
        words.push(x);
    }
    WordSet::from_iter_dedup(n, words)
}

/// All members of the language, as the union of its slices.
pub fn palindrome_language_members(n: usize) -> Result<WordSet> {
    let mut words = Vec::new();
    for i in 0..=n / 2 {
        words.extend(palindrome_slice_members(n, i)?.iter().copied());
    }
    WordSet::from_iter_dedup(n, words)
}

/// The palindrome-pair language on words of a fixed even length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PalindromeLanguage {
    pub n: usize,
}

impl Property for PalindromeLanguage {
    fn word_len(&self) -> usize {
        self.n
    }

    fn distance(&self, x: &Word) -> Result<u32> {
        palindrome_distance(x)
    }
}

/// Tester over rules that each pick `min(ceil(2/eps), #pairs)` distinct
/// constraint pairs and accept iff all of them hold. Each rule's query set
/// is the union of its pairs.
fn pair_tester(
    n: usize,
    pairs: &[(usize, usize)],
    epsilon: &BigRational,
    rules: usize,
    seed: u64,
) -> Result<Tester> {
    let m = pair_samples(epsilon)?.min(pairs.len());
    if m == 0 {
        return Err(Error::InvalidParameter("no constraint pairs to sample".into()));
    }
    let mut rng = SeededRng::new(seed);
    let weight = BigRational::new(BigInt::from(1), BigInt::from(rules));
    let mut out = Vec::with_capacity(rules);
    for _ in 0..rules {
        let mut chosen: Vec<(usize, usize)> =
            rng.sample_distinct(pairs.len(), m).into_iter().map(|p| pairs[p]).collect();
        chosen.sort_unstable();
        let q = IndexSet::new(n, chosen.iter().flat_map(|&(a, b)| [a, b]))?;
        let local = |i: usize| q.position(i).expect("member") + 1;
        let predicate = Predicate::EqualPairs(chosen.iter().map(|&(a, b)| (local(a), local(b))).collect());
        out.push(Rule { weight: weight.clone(), access: Access::Query(q), predicate });
    }
    Ok(Tester::new(Kind::NonAdaptive, n, 2 * m, epsilon.clone(), out)?.merged())
}

/// One-sided partial tester for `L_i` inside the palindrome language.
pub fn palindrome_partial_tester(n: usize, i: usize, epsilon: &BigRational, seed: u64) -> Result<Tester> {
    pair_tester(n, &palindrome_pairs(n, i)?, epsilon, DEFAULT_RULES, seed)
}

/// A permutation of `{1..v}`, stored as the list of images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let v = images.len();
        let mut seen = vec![false; v + 1];
        for &p in &images {
            if p == 0 || p > v || seen[p] {
                return Err(Error::InvalidParameter(format!("{images:?} is not a permutation of 1..={v}")));
            }
            seen[p] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(v: usize) -> Self {
        Permutation((1..=v).collect())
    }

    pub fn random(v: usize, seed: u64) -> Self {
        let mut images: Vec<usize> = (1..=v).collect();
        SeededRng::new(seed).shuffle(&mut images);
        Permutation(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, u: usize) -> usize {
        self.0[u - 1]
    }

    /// Every permutation of `{1..v}` in lexicographic order.
    pub fn all(v: usize) -> Vec<Permutation> {
        fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for p in 1..=used.len() {
                if !used[p - 1] {
                    used[p - 1] = true;
                    prefix.push(p);
                    go(prefix, used, out);
                    prefix.pop();
                    used[p - 1] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), &mut vec![false; v], &mut out);
        out
    }
}

/// Position of `G[u,w]` in the pair encoding: `G1` row-major, then `G2`.
pub fn gi_index(v: usize, graph: usize, u: usize, w: usize) -> usize {
    (graph - 1) * v * v + (u - 1) * v + w
}

fn check_gi(x: &Word, pi: &Permutation) -> Result<usize> {
    let v = pi.len();
    if v == 0 || 2 * v * v > crate::gf2::MAX_LEN {
        return Err(Error::InvalidParameter(format!("unsupported vertex count {v}")));
    }
    if x.len() != 2 * v * v {
        return Err(Error::LengthMismatch { expected: 2 * v * v, found: x.len() });
    }
    Ok(v)
}

/// Constraint pairs of `P_pi`: `G1[u,w]` against `G2[pi u, pi w]`, in
/// row-major order of `(u, w)`.
pub fn gi_pairs(pi: &Permutation) -> Vec<(usize, usize)> {
    let v = pi.len();
    let mut pairs = Vec::with_capacity(v * v);
    for u in 1..=v {
        for w in 1..=v {
            pairs.push((gi_index(v, 1, u, w), gi_index(v, 2, pi.apply(u), pi.apply(w))));
        }
    }
    pairs
}

/// Mismatched constraint pairs, which is also the distance to `P_pi`.
pub fn gi_mismatches(x: &Word, pi: &Permutation) -> Result<u32> {
    check_gi(x, pi)?;
    Ok(gi_pairs(pi).iter().filter(|&&(a, b)| x.bit(a) != x.bit(b)).count() as u32)
}

pub fn in_gi_slice(x: &Word, pi: &Permutation) -> Result<bool> {
    Ok(gi_mismatches(x, pi)? == 0)
}

/// Largest vertex count accepted by [`gi_distance`].
pub const GI_DISTANCE_MAX_V: usize = 5;

/// Distance to the isomorphic-pair property: fewest mismatches over all
/// permutations.
pub fn gi_distance(x: &Word, v: usize) -> Result<u32> {
    if v > GI_DISTANCE_MAX_V {
        return Err(Error::InvalidParameter(format!(
            "distance over all permutations supports v <= {GI_DISTANCE_MAX_V}"
        )));
    }
    let mut best = u32::MAX;
    for pi in Permutation::all(v) {
        best = best.min(gi_mismatches(x, &pi)?);
    }
    Ok(best)
}

/// The pair `(G1, pi(G1))` for an adjacency word `g1` of length `v²`.
pub fn gi_pair_from(g1: &Word, pi: &Permutation) -> Result<Word> {
    let v = pi.len();
    if g1.len() != v * v {
        return Err(Error::LengthMismatch { expected: v * v, found: g1.len() });
    }
    let mut x = g1.concat(&Word::zeros(v * v)?)?;
    for (a, b) in gi_pairs(pi) {
        x = x.with_bit(b, g1.bit(a));
    }
    Ok(x)
}

/// All members of `P_pi`.
pub fn gi_slice_members(pi: &Permutation) -> Result<WordSet> {
    let v = pi.len();
    budget::check("graph pair enumeration", v * v)?;
    let words = Word::all(v * v).map(|g| gi_pair_from(&g, pi)).collect::<Result<Vec<_>>>()?;
    WordSet::from_iter_dedup(2 * v * v, words)
}

/// Pairs of directed graphs (loops allowed) on `v` vertices that are
/// isomorphic under some permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphIsomorphism {
    pub v: usize,
}

impl Property for GraphIsomorphism {
    fn word_len(&self) -> usize {
        2 * self.v * self.v
    }

    fn distance(&self, x: &Word) -> Result<u32> {
        gi_distance(x, self.v)
    }
}

/// One-sided partial tester for `P_pi`.
pub fn gi_partial_tester(pi: &Permutation, epsilon: &BigRational, seed: u64) -> Result<Tester> {
    let v = pi.len();
    pair_tester(2 * v * v, &gi_pairs(pi), epsilon, DEFAULT_RULES, seed)
}
