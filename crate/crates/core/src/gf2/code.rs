use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::word::{IndexSet, Word, WordSet};
use crate::budget;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// A binary linear code, stored by its canonical generator: reduced row
/// echelon form with pivots taken leftmost-first. Two codes are equal iff
/// their canonical generators are equal.
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    rows: Vec<Word>,
    pivots: Vec<usize>,
    dual_distance: Arc<OnceLock<usize>>,
    parity_check: Arc<OnceLock<Vec<Word>>>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}

impl Eq for LinearCode {}

/// Reduced row echelon form; returns the nonzero rows and their pivot indices.
fn rref(n: usize, mut rows: Vec<Word>) -> (Vec<Word>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 1..=n {
        let Some(found) = (top..rows.len()).find(|&r| rows[r].bit(col)) else {
            continue;
        };
        rows.swap(top, found);
        let pivot_row = rows[top];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != top && row.bit(col) {
                *row = row.xor(&pivot_row);
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    (rows, pivots)
}

impl LinearCode {
    /// Row space of `rows`. Dependent rows are dropped.
    pub fn from_generator(rows: &[Word]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyRows)?;
        let n = first.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch { expected: n, found: bad.len() });
        }
        Ok(LinearCode::from_rows(n, rows.to_vec()))
    }

    /// The zero code {0^n}.
    pub fn zero(n: usize) -> Result<Self> {
        if n > super::word::MAX_LEN {
            return Err(Error::WordTooLong(n));
        }
        Ok(LinearCode::from_rows(n, Vec::new()))
    }

    /// The whole space {0,1}^n.
    pub fn full(n: usize) -> Result<Self> {
        if n > super::word::MAX_LEN {
            return Err(Error::WordTooLong(n));
        }
        let rows = (1..=n)
            .map(|i| Word::from_value_unchecked(n, 1u128 << (n - i)))
            .collect();
        Ok(LinearCode::from_rows(n, rows))
    }

    fn from_rows(n: usize, rows: Vec<Word>) -> Self {
        let (rows, pivots) = rref(n, rows);
        LinearCode {
            n,
            rows,
            pivots,
            dual_distance: Arc::default(),
            parity_check: Arc::default(),
        }
    }

    /// The [7,4] Hamming code with generator [I4 | A].
    pub fn hamming74() -> Self {
        let rows: Vec<Word> = ["1000110", "0100101", "0010011", "0001111"]
            .iter()
            .map(|s| s.parse().expect("literal"))
            .collect();
        LinearCode::from_generator(&rows).expect("literal")
    }

    /// Random `[n, k]` code: rows are drawn as uniform `n`-bit words from the
    /// seeded generator, and a row that does not increase the rank is
    /// discarded and redrawn.
    pub fn random(n: usize, k: usize, seed: u64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("need 0 < k <= n, got n={n} k={k}")));
        }
        if n > super::word::MAX_LEN {
            return Err(Error::WordTooLong(n));
        }
        let mut rng = SeededRng::new(seed);
        let mut rows: Vec<Word> = Vec::with_capacity(k);
        while rows.len() < k {
            let candidate = Word::from_value_unchecked(n, rng.bits(n));
            let mut trial = rows.clone();
            trial.push(candidate);
            if rref(n, trial).0.len() > rows.len() {
                rows.push(candidate);
            }
        }
        Ok(LinearCode::from_rows(n, rows))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Canonical generator rows.
    pub fn generator(&self) -> &[Word] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Parity-check rows (the generator of the dual code).
    pub fn parity_check(&self) -> &[Word] {
        self.parity_check.get_or_init(|| self.nullspace_basis())
    }

    fn nullspace_basis(&self) -> Vec<Word> {
        let free: Vec<usize> = (1..=self.n).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = Word::from_value_unchecked(self.n, 0).with_bit(f, true);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.bit(f) {
                        v = v.with_bit(p, true);
                    }
                }
                v
            })
            .collect()
    }

    pub fn syndrome(&self, x: &Word) -> Vec<bool> {
        self.parity_check().iter().map(|h| h.dot(x)).collect()
    }

    /// Membership by the parity-check product.
    pub fn contains(&self, x: &Word) -> bool {
        x.len() == self.n && self.parity_check().iter().all(|h| !h.dot(x))
    }

    /// The code of dimension `n - k` whose row space is the nullspace of the
    /// generator.
    pub fn dual(&self) -> LinearCode {
        LinearCode::from_rows(self.n, self.parity_check().to_vec())
    }

    /// All `2^k` codewords, sorted.
    pub fn enumerate(&self) -> Result<WordSet> {
        budget::check("codeword enumeration", self.k())?;
        let mut words = Vec::with_capacity(1 << self.k());
        gray_walk(self.n, &self.rows, |w| words.push(w));
        words.sort_unstable();
        Ok(WordSet::from_sorted_unchecked(self.n, words))
    }

    /// Minimum weight of a nonzero dual codeword; `n + 1` when the dual is
    /// trivial (the code is the whole space).
    pub fn dual_distance(&self) -> Result<usize> {
        if let Some(&d) = self.dual_distance.get() {
            return Ok(d);
        }
        let h = self.parity_check();
        let d = if h.is_empty() {
            self.n + 1
        } else {
            budget::check("dual codeword enumeration", h.len())?;
            let mut best = u32::MAX;
            gray_walk(self.n, h, |w| {
                let wt = w.weight();
                if wt > 0 && wt < best {
                    best = wt;
                }
            });
            best as usize
        };
        Ok(*self.dual_distance.get_or_init(|| d))
    }

    /// Hamming distance from `x` to the nearest codeword.
    pub fn distance(&self, x: &Word) -> Result<u32> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: x.len() });
        }
        budget::check("nearest-codeword search", self.k())?;
        let mut best = u32::MAX;
        gray_walk(self.n, &self.rows, |c| best = best.min(c.hamming(x)));
        Ok(best)
    }

    /// Relative Hamming distance from `x` to the code.
    pub fn relative_distance(&self, x: &Word) -> Result<BigRational> {
        let d = self.distance(x)?;
        Ok(BigRational::new(BigInt::from(d), BigInt::from(self.n.max(1))))
    }

    /// Dimension of the projection `C[J]`, i.e. the rank of the generator's
    /// columns in `J`. Equals `|J|` whenever `|J|` is below the dual distance.
    pub fn rank_on(&self, j: &IndexSet) -> usize {
        let projected: Vec<Word> = self.rows.iter().map(|r| r.restrict(j)).collect();
        rref(j.len(), projected).0.len()
    }

    /// Whether some codeword `c` has `c[J] = y`, i.e. `y ∈ C[J]`.
    pub fn consistent(&self, j: &IndexSet, y: &Word) -> bool {
        let projected: Vec<Word> = self.rows.iter().map(|r| r.restrict(j)).collect();
        let (rows, pivots) = rref(j.len(), projected);
        let mut v = *y;
        for (row, &p) in rows.iter().zip(&pivots) {
            if v.bit(p) {
                v = v.xor(row);
            }
        }
        v.weight() == 0
    }

    /// Whether `|C| <= 2^(n/64)`, the size condition of the lower bound.
    /// Reported only; it is vacuous at desk scale.
    pub fn meets_size_condition(&self) -> bool {
        64 * self.k() <= self.n
    }
}

/// Visits every element of the span of `basis` (Gray-code order, starting at 0).
fn gray_walk(n: usize, basis: &[Word], mut visit: impl FnMut(Word)) {
    let mut cur = Word::from_value_unchecked(n, 0);
    visit(cur);
    let total: u64 = 1u64 << basis.len();
    for step in 1..total {
        let flip = step.trailing_zeros() as usize;
        cur = cur.xor(&basis[flip]);
        visit(cur);
    }
}

/// `x[J]` for every member of `s`, in the set's order. A multiset, so it
/// keeps the weight each pattern carries under the uniform distribution.
pub fn restrict_set(s: &WordSet, j: &IndexSet) -> Result<Vec<Word>> {
    if j.n() > s.word_len() {
        if let Some(bad) = j.iter().find(|&i| i > s.word_len()) {
            return Err(Error::IndexOutOfRange { index: bad, n: s.word_len() });
        }
    }
    Ok(s.iter().map(|w| w.restrict(j)).collect())
}

/// Lower bound on the probability that a `U_J(C)` sample is `eps`-far from a
/// code of `size` words, from the Chernoff and union bounds:
/// `max(0, 1 - size * exp(-n (1/4 - eps)^2))`.
pub fn far_probability_lower_bound(n: usize, size: f64, eps: f64) -> f64 {
    let t = 0.25 - eps;
    (1.0 - size * (-(n as f64) * t * t).exp()).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn code(rows: &[&str]) -> LinearCode {
        LinearCode::from_generator(&rows.iter().map(|r| w(r)).collect::<Vec<_>>()).unwrap()
    }

    fn brute_dual_distance(c: &LinearCode) -> usize {
        let h_words = Word::all(c.n()).filter(|x| c.generator().iter().all(|g| !g.dot(x)));
        h_words
            .filter(|x| x.weight() > 0)
            .map(|x| x.weight() as usize)
            .min()
            .unwrap_or(c.n() + 1)
    }

    #[test]
    fn span_examples() {
        let c = code(&["1010", "0101"]);
        assert_eq!(c.k(), 2);
        let words: Vec<String> = c.enumerate().unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["0000", "0101", "1010", "1111"]);

        let rep = code(&["111"]);
        assert_eq!(rep.enumerate().unwrap().len(), 2);

        assert_eq!(code(&["1010", "1010"]).k(), 1);
    }

    #[test]
    fn generator_errors() {
        assert_eq!(LinearCode::from_generator(&[]), Err(Error::EmptyRows));
        assert!(matches!(
            LinearCode::from_generator(&[w("101"), w("10")]),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn canonical_form_is_rref() {
        let c = code(&["1111", "0110", "1100"]);
        assert_eq!(c.pivots(), &[1, 2, 3]);
        assert_eq!(c, code(&["1001", "0101", "0011"]));
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(LinearCode::hamming74().enumerate().unwrap().len(), 16);
        let z = LinearCode::zero(5).unwrap();
        assert_eq!(z.enumerate().unwrap().words(), &[Word::zeros(5).unwrap()]);
    }

    #[test]
    fn duals() {
        let c = code(&["1010", "0101"]);
        assert_eq!(c.dual(), c);

        let even = code(&["111"]).dual();
        let words: Vec<String> = even.enumerate().unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["000", "011", "101", "110"]);

        let full = code(&["10", "01"]);
        assert_eq!(full.dual().k(), 0);
        assert_eq!(full.dual().enumerate().unwrap().words(), &[w("00")]);
    }

    #[test]
    fn dual_distance_examples() {
        assert_eq!(LinearCode::hamming74().dual_distance().unwrap(), 4);
        assert_eq!(code(&["1010", "0101"]).dual_distance().unwrap(), 2);
        assert_eq!(code(&["111"]).dual_distance().unwrap(), 2);
        assert_eq!(LinearCode::full(6).unwrap().dual_distance().unwrap(), 7);
    }

    #[test]
    fn random_codes_are_deterministic() {
        let a = LinearCode::random(8, 3, 1).unwrap();
        let b = LinearCode::random(8, 3, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.k(), 3);
        let full = LinearCode::random(8, 8, 99).unwrap();
        assert_eq!(full.dual_distance().unwrap(), 9);
        assert!(LinearCode::random(4, 0, 1).is_err());
        assert!(LinearCode::random(4, 5, 1).is_err());
    }

    #[test]
    fn singleton_bound_on_random_codes() {
        let mut total = 0;
        for seed in 0..100 {
            let c = LinearCode::random(14, 7, seed).unwrap();
            let g = c.dual_distance().unwrap();
            assert!(g <= c.k() + 1);
            assert_eq!(g, brute_dual_distance(&c));
            total += g;
        }
        // mean dual distance of random [14,7] codes, reported for reference
        let mean = total as f64 / 100.0;
        assert!(mean > 1.0 && mean <= 8.0);
    }

    #[test]
    fn relative_distance_examples() {
        let c = code(&["1010", "0101"]);
        assert_eq!(c.relative_distance(&w("1111")).unwrap(), BigRational::from_integer(0.into()));
        assert_eq!(
            c.relative_distance(&w("1000")).unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        let h = LinearCode::hamming74();
        assert_eq!(h.distance(&Word::zeros(7).unwrap()).unwrap(), 0);
        assert!(h.distance(&w("101")).is_err());
    }

    #[test]
    fn restrict_set_examples() {
        let s = code(&["111"]).enumerate().unwrap();
        let j = IndexSet::new(3, [1]).unwrap();
        assert_eq!(restrict_set(&s, &j).unwrap(), vec![w("0"), w("1")]);
        assert_eq!(
            restrict_set(&s, &IndexSet::empty(3)).unwrap(),
            vec![Word::empty(), Word::empty()]
        );
        assert!(restrict_set(&s, &IndexSet::new(4, [4]).unwrap()).is_err());

        let h = LinearCode::hamming74().enumerate().unwrap();
        let j = IndexSet::new(7, [2, 5, 7]).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for p in restrict_set(&h, &j).unwrap() {
            *counts.entry(p).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 8);
        assert!(counts.values().all(|&c| c == 2));
    }

    #[test]
    fn membership_matches_distance() {
        let c = LinearCode::random(10, 4, 5).unwrap();
        for x in Word::all(10) {
            assert_eq!(c.contains(&x), c.distance(&x).unwrap() == 0);
        }
    }

    #[test]
    fn rank_on_sets() {
        let h = LinearCode::hamming74();
        assert_eq!(h.rank_on(&IndexSet::new(7, [1, 2, 3, 4]).unwrap()), 4);
        // support of a weight-4 dual codeword
        assert_eq!(h.rank_on(&IndexSet::new(7, [4, 5, 6, 7]).unwrap()), 3);
        assert_eq!(h.rank_on(&IndexSet::empty(7)), 0);
    }

    #[test]
    fn union_bound_is_clamped() {
        assert_eq!(far_probability_lower_bound(14, 8.0, 0.125), 0.0);
        assert!(far_probability_lower_bound(4000, 2.0, 0.125) > 0.99);
    }

    #[test]
    fn consistency_matches_enumeration() {
        for seed in 0..20 {
            let code = LinearCode::random(8, 3, seed).unwrap();
            let words = code.enumerate().unwrap();
            let mut rng = crate::rng::SeededRng::new(seed);
            for _ in 0..20 {
                let members: Vec<usize> = (1..=8).filter(|_| rng.coin()).collect();
                let j = IndexSet::new(8, members).unwrap();
                let y = Word::from_value(j.len(), rng.bits(j.len())).unwrap();
                let brute = words.iter().any(|c| c.restrict(&j) == y);
                assert_eq!(code.consistent(&j, &y), brute);
            }
        }
    }
}
