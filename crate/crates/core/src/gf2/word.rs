use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest word the laboratory represents.
pub const MAX_LEN: usize = 128;

/// A bit string in {0,1}^n, n <= 128.
///
/// Index 1 is the leftmost character of the textual form and the most
/// significant bit of [`Word::value`], so the derived ordering of equal-length
/// words is lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: u8,
    bits: u128,
}

fn mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

impl Word {
    /// Word of length `len` whose binary value is `value` (index 1 = MSB).
    pub fn from_value(len: usize, value: u128) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::WordTooLong(len));
        }
        Ok(Word {
            len: len as u8,
            bits: value & mask(len),
        })
    }

    pub(crate) fn from_value_unchecked(len: usize, value: u128) -> Self {
        debug_assert!(len <= MAX_LEN);
        Word {
            len: len as u8,
            bits: value & mask(len),
        }
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Word::from_value(len, 0)
    }

    pub fn empty() -> Self {
        Word { len: 0, bits: 0 }
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() > MAX_LEN {
            return Err(Error::WordTooLong(bits.len()));
        }
        let value = bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
        Ok(Word::from_value_unchecked(bits.len(), value))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u128 {
        self.bits
    }

    /// Bit at 1-based index `i`. Panics when out of range.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len(), "index {i} out of range 1..={}", self.len);
        (self.bits >> (self.len() - i)) & 1 == 1
    }

    pub fn get(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange { index: i, n: self.len() });
        }
        Ok(self.bit(i))
    }

    pub fn with_bit(&self, i: usize, b: bool) -> Word {
        assert!(i >= 1 && i <= self.len());
        let m = 1u128 << (self.len() - i);
        Word {
            len: self.len,
            bits: if b { self.bits | m } else { self.bits & !m },
        }
    }

    pub fn flip(&self, i: usize) -> Word {
        self.with_bit(i, !self.bit(i))
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn xor(&self, other: &Word) -> Word {
        debug_assert_eq!(self.len, other.len);
        Word {
            len: self.len,
            bits: self.bits ^ other.bits,
        }
    }

    pub fn hamming(&self, other: &Word) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &Word) -> bool {
        (self.bits & other.bits).count_ones() % 2 == 1
    }

    /// `x[J]`: the bits at the members of `J`, in ascending index order.
    pub fn restrict(&self, j: &IndexSet) -> Word {
        debug_assert!(j.n() <= self.len());
        let mut out = 0u128;
        for i in j.iter() {
            out = (out << 1) | ((self.bits >> (self.len() - i)) & 1);
        }
        Word::from_value_unchecked(j.len(), out)
    }

    /// Appends `other` after `self`.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        let len = self.len() + other.len();
        if len > MAX_LEN {
            return Err(Error::WordTooLong(len));
        }
        let hi = if other.len() >= 128 { 0 } else { self.bits << other.len() };
        Ok(Word::from_value_unchecked(len, hi | other.bits))
    }

    pub fn push(&self, b: bool) -> Result<Word> {
        self.concat(&Word::from_value_unchecked(1, b as u128))
    }

    /// First `len` bits.
    pub fn prefix(&self, len: usize) -> Word {
        assert!(len <= self.len());
        let shift = self.len() - len;
        let bits = if shift >= 128 { 0 } else { self.bits >> shift };
        Word::from_value_unchecked(len, bits)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len()).map(move |i| self.bit(i))
    }

    /// Every word of length `len`, in ascending order.
    pub fn all(len: usize) -> impl Iterator<Item = Word> {
        assert!(len < 64, "cube too large to iterate");
        (0..1u128 << len).map(move |v| Word::from_value_unchecked(len, v))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses a string of `0` and `1` characters; anything else is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (pos, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "character {:?} at position {} is not a bit",
                        c,
                        pos + 1
                    )))
                }
            }
        }
        Word::from_bits(&bits)
    }
}

/// A subset of {1..n}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSet {
    n: u8,
    // bit i-1 set for member i
    mask: u128,
}

impl IndexSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n > MAX_LEN {
            return Err(Error::WordTooLong(n));
        }
        let mut mask = 0u128;
        for i in members {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            let b = 1u128 << (i - 1);
            if mask & b != 0 {
                return Err(Error::DuplicateIndex(i));
            }
            mask |= b;
        }
        Ok(IndexSet { n: n as u8, mask })
    }

    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_LEN);
        IndexSet { n: n as u8, mask: 0 }
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_LEN);
        IndexSet { n: n as u8, mask: mask(n) }
    }

    /// `{from..=to}`; empty when `from > to`.
    pub fn range(n: usize, from: usize, to: usize) -> Result<Self> {
        IndexSet::new(n, from..=to)
    }

    pub(crate) fn from_mask(n: usize, m: u128) -> Self {
        debug_assert!(m & !mask(n) == 0);
        IndexSet { n: n as u8, mask: m }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n() && self.mask >> (i - 1) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        self.mask |= 1u128 << (i - 1);
        Ok(())
    }

    /// Ascending members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut m = self.mask;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let t = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(t + 1)
            }
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// 0-based rank of member `i` within the set, if present.
    pub fn position(&self, i: usize) -> Option<usize> {
        if !self.contains(i) {
            return None;
        }
        let below = self.mask & ((1u128 << (i - 1)) - 1);
        Some(below.count_ones() as usize)
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet { n: self.n.max(other.n), mask: self.mask | other.mask }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet { n: self.n.max(other.n), mask: self.mask & other.mask }
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet { n: self.n, mask: self.mask & !other.mask }
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet { n: self.n, mask: !self.mask & mask(self.n()) }
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.mask & other.mask == 0
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Smallest index not in the set, if any.
    pub fn first_missing(&self) -> Option<usize> {
        let free = !self.mask & mask(self.n());
        (free != 0).then(|| free.trailing_zeros() as usize + 1)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Sorted set of distinct words of a common length.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WordSet {
    len: usize,
    words: Vec<Word>,
}

impl WordSet {
    /// Builds a set, rejecting duplicates and mixed lengths.
    pub fn new(len: usize, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut words: Vec<Word> = words.into_iter().collect();
        for w in &words {
            if w.len() != len {
                return Err(Error::LengthMismatch { expected: len, found: w.len() });
            }
        }
        words.sort_unstable();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateWord(pair[0].to_string()));
        }
        Ok(WordSet { len, words })
    }

    /// Builds a set, silently merging duplicates.
    pub fn from_iter_dedup(len: usize, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut words: Vec<Word> = words.into_iter().collect();
        for w in &words {
            if w.len() != len {
                return Err(Error::LengthMismatch { expected: len, found: w.len() });
            }
        }
        words.sort_unstable();
        words.dedup();
        Ok(WordSet { len, words })
    }

    pub(crate) fn from_sorted_unchecked(len: usize, words: Vec<Word>) -> Self {
        debug_assert!(words.windows(2).all(|p| p[0] < p[1]));
        WordSet { len, words }
    }

    /// Every word of length `len`.
    pub fn cube(len: usize) -> Result<Self> {
        crate::budget::check("cube enumeration", len)?;
        Ok(WordSet { len, words: Word::all(len).collect() })
    }

    pub fn singleton(w: Word) -> Self {
        WordSet { len: w.len(), words: vec![w] }
    }

    pub fn word_len(&self) -> usize {
        self.len
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// Members whose restriction to `j` equals `y`.
    pub fn filter_restricted(&self, j: &IndexSet, y: &Word) -> WordSet {
        WordSet {
            len: self.len,
            words: self.words.iter().copied().filter(|c| c.restrict(j) == *y).collect(),
        }
    }

    pub fn is_subset(&self, other: &WordSet) -> bool {
        self.words.iter().all(|w| other.contains(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip_and_order() {
        assert_eq!(w("1010").to_string(), "1010");
        assert!(w("0111") < w("1000"));
        assert_eq!(w("").len(), 0);
        assert!("10a1".parse::<Word>().is_err());
    }

    #[test]
    fn bit_indexing_is_one_based_from_the_left() {
        let x = w("100");
        assert!(x.bit(1));
        assert!(!x.bit(3));
        assert!(x.get(0).is_err());
        assert!(x.get(4).is_err());
    }

    #[test]
    fn restriction_keeps_ascending_index_order() {
        let x = w("011010");
        let j = IndexSet::new(6, [5, 1, 3]).unwrap();
        assert_eq!(x.restrict(&j), w("011"));
        assert_eq!(x.restrict(&IndexSet::empty(6)), Word::empty());
    }

    #[test]
    fn index_set_rejects_bad_members() {
        assert_eq!(IndexSet::new(3, [4]), Err(Error::IndexOutOfRange { index: 4, n: 3 }));
        assert_eq!(IndexSet::new(3, [1, 1]), Err(Error::DuplicateIndex(1)));
        assert_eq!(IndexSet::new(0, []).unwrap().len(), 0);
    }

    #[test]
    fn index_set_algebra() {
        let a = IndexSet::new(6, [1, 2, 5]).unwrap();
        let b = IndexSet::new(6, [2, 6]).unwrap();
        assert_eq!(a.union(&b).to_vec(), vec![1, 2, 5, 6]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 5]);
        assert_eq!(a.complement().to_vec(), vec![3, 4, 6]);
        assert_eq!(a.position(5), Some(2));
        assert_eq!(a.first_missing(), Some(3));
        assert!(!a.is_disjoint(&b));
    }

    #[test]
    fn word_set_rejects_duplicates() {
        assert!(matches!(
            WordSet::new(2, [w("01"), w("01")]),
            Err(Error::DuplicateWord(_))
        ));
        assert!(matches!(
            WordSet::new(2, [w("011")]),
            Err(Error::LengthMismatch { .. })
        ));
        let s = WordSet::new(2, [w("11"), w("00")]).unwrap();
        assert_eq!(s.words(), &[w("00"), w("11")]);
    }

    #[test]
    fn long_words() {
        let x = Word::from_value(128, u128::MAX).unwrap();
        assert_eq!(x.weight(), 128);
        assert!(Word::from_value(129, 0).is_err());
        let y = Word::zeros(64).unwrap().concat(&Word::from_value(64, 1).unwrap()).unwrap();
        assert!(y.bit(128));
        assert_eq!(y.prefix(64), Word::zeros(64).unwrap());
    }
}
