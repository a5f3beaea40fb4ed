//! Generalized readers: decision trees that read input bits without
//! repetition and stop at the terminal mark `*`.
//!
//! A tree node either stops or reads an index and continues in its 0-child or
//! 1-child. Every root-to-node path reads distinct indices; constructors and
//! parsers reject anything else, and the grafting operations preserve it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::budget;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::gf2::{IndexSet, Word, WordSet};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    Stop,
    Read {
        index: usize,
        zero: Arc<Node>,
        one: Arc<Node>,
    },
}

impl Node {
    pub fn stop() -> Arc<Node> {
        Arc::new(Node::Stop)
    }

    pub fn read(index: usize, zero: Arc<Node>, one: Arc<Node>) -> Arc<Node> {
        Arc::new(Node::Read { index, zero, one })
    }

    fn child(&self, b: bool) -> Option<&Arc<Node>> {
        match self {
            Node::Stop => None,
            Node::Read { zero, one, .. } => Some(if b { one } else { zero }),
        }
    }

    fn depth_range(&self) -> (usize, usize) {
        match self {
            Node::Stop => (0, 0),
            Node::Read { zero, one, .. } => {
                let (a0, b0) = zero.depth_range();
                let (a1, b1) = one.depth_range();
                (a0.min(a1) + 1, b0.max(b1) + 1)
            }
        }
    }
}

/// What has been read on the way down a branch: indices and their values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Ctx {
    pub n: usize,
    pub read: u128,
    pub vals: u128,
}

impl Ctx {
    pub fn new(n: usize) -> Self {
        Ctx { n, read: 0, vals: 0 }
    }

    pub fn has(&self, i: usize) -> bool {
        self.read >> (i - 1) & 1 == 1
    }

    pub fn value(&self, i: usize) -> bool {
        self.vals >> (i - 1) & 1 == 1
    }

    pub fn with(&self, i: usize, b: bool) -> Ctx {
        Ctx {
            n: self.n,
            read: self.read | 1 << (i - 1),
            vals: if b { self.vals | 1 << (i - 1) } else { self.vals },
        }
    }

    pub fn read_set(&self) -> IndexSet {
        IndexSet::from_mask(self.n, self.read)
    }

    /// `x[J]` for the read set `J`, as a word in ascending index order.
    pub fn read_values(&self) -> Word {
        let j = self.read_set();
        let x = Word::from_value_unchecked(self.n, reverse_low(self.vals, self.n));
        x.restrict(&j)
    }
}

// maps bit i-1 (LSB-first) to word position i (MSB-first)
fn reverse_low(v: u128, n: usize) -> u128 {
    if n == 0 {
        0
    } else {
        v.reverse_bits() >> (128 - n)
    }
}

/// Grafts `t` at a terminal point whose read history is `ctx`.
pub(crate) fn graft_node(ctx: Ctx, t: &Arc<Node>) -> Arc<Node> {
    match &**t {
        Node::Stop => Node::stop(),
        Node::Read { index, zero, one } => {
            if ctx.has(*index) {
                let next = if ctx.value(*index) { one } else { zero };
                graft_node(ctx, next)
            } else {
                Node::read(
                    *index,
                    graft_node(ctx.with(*index, false), zero),
                    graft_node(ctx.with(*index, true), one),
                )
            }
        }
    }
}

/// Extends every branch of `node` to exactly `need` reads, filling with the
/// smallest unread index.
pub(crate) fn pad_node(ctx: Ctx, node: &Arc<Node>, need: usize) -> Result<Arc<Node>> {
    match &**node {
        Node::Stop if need == 0 => Ok(node.clone()),
        Node::Read { .. } if need == 0 => Err(Error::ReaderTooDeep(0)),
        Node::Read { index, zero, one } => Ok(Node::read(
            *index,
            pad_node(ctx.with(*index, false), zero, need - 1)?,
            pad_node(ctx.with(*index, true), one, need - 1)?,
        )),
        Node::Stop => {
            let k = ctx
                .read_set()
                .first_missing()
                .ok_or(Error::InsufficientUnread { needed: need })?;
            let stop = Node::stop();
            Ok(Node::read(
                k,
                pad_node(ctx.with(k, false), &stop, need - 1)?,
                pad_node(ctx.with(k, true), &stop, need - 1)?,
            ))
        }
    }
}

/// Rebuilds the path to the terminal sequence `y` and replaces the stop
/// found there by `f(ctx)`.
fn splice(
    node: &Arc<Node>,
    y: &Word,
    depth: usize,
    ctx: Ctx,
    f: &dyn Fn(Ctx) -> Result<Arc<Node>>,
) -> Result<Arc<Node>> {
    match &**node {
        Node::Stop if depth == y.len() => f(ctx),
        Node::Stop => Err(Error::NotTerminal(y.to_string())),
        Node::Read { .. } if depth == y.len() => Err(Error::NotTerminal(y.to_string())),
        Node::Read { index, zero, one } => {
            let b = y.bit(depth + 1);
            let ctx = ctx.with(*index, b);
            Ok(if b {
                Node::read(*index, zero.clone(), splice(one, y, depth + 1, ctx, f)?)
            } else {
                Node::read(*index, splice(zero, y, depth + 1, ctx, f)?, one.clone())
            })
        }
    }
}

/// The values read and the indices they came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Reading {
    pub values: Word,
    pub indices: Vec<usize>,
    pub unread: IndexSet,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Reader {
    n: usize,
    root: Arc<Node>,
}

impl Reader {
    /// Wraps a tree after checking index ranges and path distinctness.
    pub fn new(n: usize, root: Arc<Node>) -> Result<Self> {
        if n > crate::gf2::MAX_LEN {
            return Err(Error::WordTooLong(n));
        }
        fn check(node: &Node, n: usize, seen: u128) -> Result<()> {
            if let Node::Read { index, zero, one } = node {
                if *index == 0 || *index > n {
                    return Err(Error::IndexOutOfRange { index: *index, n });
                }
                let bit = 1u128 << (index - 1);
                if seen & bit != 0 {
                    return Err(Error::RepeatedIndex(*index));
                }
                check(zero, n, seen | bit)?;
                check(one, n, seen | bit)?;
            }
            Ok(())
        }
        check(&root, n, 0)?;
        Ok(Reader { n, root })
    }

    pub(crate) fn from_trusted(n: usize, root: Arc<Node>) -> Self {
        Reader { n, root }
    }

    /// The identically-`*` reader.
    pub fn stop(n: usize) -> Self {
        Reader { n, root: Node::stop() }
    }

    /// Reads `order` in sequence regardless of the values seen.
    pub fn fixed_order(n: usize, order: &[usize]) -> Result<Self> {
        let mut node = Node::stop();
        for &i in order.iter().rev() {
            node = Node::read(i, node.clone(), node);
        }
        Reader::new(n, node)
    }

    /// Reads indices `1..=n` in order.
    pub fn identity(n: usize) -> Self {
        Reader::fixed_order(n, &(1..=n).collect::<Vec<_>>()).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> &Arc<Node> {
        &self.root
    }

    /// Shortest and longest branch lengths.
    pub fn depth_range(&self) -> (usize, usize) {
        self.root.depth_range()
    }

    /// Whether every branch reads exactly `q` bits.
    pub fn is_complete(&self, q: usize) -> bool {
        self.depth_range() == (q, q)
    }

    pub fn read(&self, x: &Word) -> Result<Reading> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: x.len() });
        }
        let mut node = &self.root;
        let mut bits = Vec::new();
        let mut indices = Vec::new();
        let mut unread = IndexSet::full(self.n);
        while let Node::Read { index, zero, one } = &**node {
            let b = x.bit(*index);
            bits.push(b);
            indices.push(*index);
            unread = unread.difference(&IndexSet::from_mask(self.n, 1 << (index - 1)));
            node = if b { one } else { zero };
        }
        Ok(Reading { values: Word::from_bits(&bits)?, indices, unread })
    }

    /// The `b`-branch: the subtree below the root's `b`-child.
    pub fn branch(&self, b: bool) -> Result<Reader> {
        let child = self.root.child(b).ok_or(Error::RootIsStop)?;
        Ok(Reader { n: self.n, root: child.clone() })
    }

    /// Node reached by following the bit sequence `y`, with the read history.
    pub(crate) fn walk(&self, y: &Word) -> Option<(&Arc<Node>, Ctx)> {
        let mut node = &self.root;
        let mut ctx = Ctx::new(self.n);
        for b in y.iter() {
            let Node::Read { index, zero, one } = &**node else {
                return None;
            };
            ctx = ctx.with(*index, b);
            node = if b { one } else { zero };
        }
        Some((node, ctx))
    }

    /// Whether `y` ends exactly at a stop.
    pub fn is_terminal(&self, y: &Word) -> bool {
        matches!(self.walk(y), Some((node, _)) if **node == Node::Stop)
    }

    /// Grafting of `t` onto this reader on the branch `y`: at the stop that
    /// `y` reaches, continue with `t`, skipping (and following the recorded
    /// value of) every index already read along `y`.
    pub fn graft(&self, t: &Reader, y: &Word) -> Result<Reader> {
        self.same_n(t)?;
        let root = splice(&self.root, y, 0, Ctx::new(self.n), &|ctx| Ok(graft_node(ctx, &t.root)))?;
        Ok(Reader { n: self.n, root })
    }

    /// Grafting followed by padding, so that every branch below `y` reads
    /// exactly `q` further bits. Padding reads the smallest unread index.
    pub fn padded_graft(&self, t: &Reader, y: &Word, q: usize) -> Result<Reader> {
        self.same_n(t)?;
        let root = splice(&self.root, y, 0, Ctx::new(self.n), &|ctx| {
            pad_node(ctx, &graft_node(ctx, &t.root), q).map_err(|e| match e {
                Error::ReaderTooDeep(_) => Error::ReaderTooDeep(q),
                other => other,
            })
        })?;
        Ok(Reader { n: self.n, root })
    }

    fn same_n(&self, t: &Reader) -> Result<()> {
        if t.n != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: t.n });
        }
        Ok(())
    }

    /// Keeps only the first `depth` reads of every branch.
    pub fn truncate(&self, depth: usize) -> Reader {
        fn go(node: &Arc<Node>, depth: usize) -> Arc<Node> {
            match &**node {
                Node::Read { index, zero, one } if depth > 0 => {
                    Node::read(*index, go(zero, depth - 1), go(one, depth - 1))
                }
                _ => Node::stop(),
            }
        }
        Reader { n: self.n, root: go(&self.root, depth) }
    }

    /// Encodes a reading as a fixed-length outcome. Complete readers use the
    /// values themselves; uneven readers append a `1` and zero padding so
    /// readings of different lengths stay distinct.
    fn outcome_key(&self, shape: (usize, usize), values: Word) -> Word {
        let (lo, hi) = shape;
        if lo == hi {
            return values;
        }
        let tail = Word::from_value_unchecked(hi + 1 - values.len(), 1u128 << (hi - values.len()));
        values.concat(&tail).expect("depth within word limit")
    }

    fn outcome_len(&self, shape: (usize, usize)) -> usize {
        if shape.0 == shape.1 {
            shape.1
        } else {
            shape.1 + 1
        }
    }

    /// Distribution of the reading of a uniform member of `s`.
    pub fn reading_dist(&self, s: &WordSet) -> Result<Dist> {
        if s.word_len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: s.word_len() });
        }
        let shape = self.depth_range();
        let mut counts: BTreeMap<Word, BigUint> = BTreeMap::new();
        for x in s.iter() {
            let r = self.read(x)?;
            *counts.entry(self.outcome_key(shape, r.values)).or_default() += 1u32;
        }
        Dist::from_counts(self.outcome_len(shape), counts)
    }

    /// `S(r, y, J)`: the reading when `x[J] = y` and all other bits are
    /// independent fair coins, computed by walking the tree once: forced
    /// edges carry probability 1, free edges 1/2.
    pub fn j_simulation(&self, y: &Word, j: &IndexSet) -> Result<Dist> {
        if y.len() != j.len() {
            return Err(Error::LengthMismatch { expected: j.len(), found: y.len() });
        }
        if let Some(bad) = j.iter().find(|&i| i > self.n) {
            return Err(Error::IndexOutOfRange { index: bad, n: self.n });
        }
        let shape = self.depth_range();
        let top = shape.1;
        let mut counts: BTreeMap<Word, BigUint> = BTreeMap::new();
        let mut stack: Vec<(&Arc<Node>, Word, usize)> = vec![(&self.root, Word::empty(), 0)];
        while let Some((node, values, free)) = stack.pop() {
            match &**node {
                Node::Stop => {
                    *counts.entry(self.outcome_key(shape, values)).or_default() +=
                        BigUint::from(1u8) << (top - free);
                }
                Node::Read { index, zero, one } => match j.position(*index) {
                    Some(p) => {
                        let b = y.bit(p + 1);
                        let next = if b { one } else { zero };
                        stack.push((next, values.push(b)?, free));
                    }
                    None => {
                        stack.push((zero, values.push(false)?, free + 1));
                        stack.push((one, values.push(true)?, free + 1));
                    }
                },
            }
        }
        Dist::from_counts(self.outcome_len(shape), counts)
    }

    /// Whether, for every input, the reading of `s` (indices and values) is a
    /// prefix of the reading of `self`. Decided by enumerating all 2^n inputs.
    pub fn contains(&self, s: &Reader) -> Result<bool> {
        self.same_n(s)?;
        budget::check("containment check", self.n)?;
        for x in Word::all(self.n) {
            let a = self.read(&x)?;
            let b = s.read(&x)?;
            if b.indices.len() > a.indices.len()
                || a.indices[..b.indices.len()] != b.indices[..]
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `x -> reading(x)` is injective on {0,1}^n. Every branch must
    /// read all `n` bits.
    pub fn is_bijection(&self) -> Result<bool> {
        let (lo, _) = self.depth_range();
        if lo != self.n {
            return Err(Error::IncompleteReader { expected: self.n, found: lo });
        }
        budget::check("bijection check", self.n)?;
        let mut seen = vec![0u64; (1usize << self.n).div_ceil(64)];
        for x in Word::all(self.n) {
            let v = self.read(&x)?.values.value() as usize;
            let (word, bit) = (v / 64, v % 64);
            if seen[word] >> bit & 1 == 1 {
                return Ok(false);
            }
            seen[word] |= 1 << bit;
        }
        Ok(true)
    }

    /// Preorder text: `*` for a stop, otherwise the index followed by the
    /// 0-subtree and the 1-subtree, tokens separated by single spaces.
    pub fn to_preorder(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            if !out.is_empty() {
                out.push(' ');
            }
            match &**node {
                Node::Stop => out.push('*'),
                Node::Read { index, zero, one } => {
                    out.push_str(&index.to_string());
                    stack.push(one);
                    stack.push(zero);
                }
            }
        }
        out
    }

    pub fn parse_preorder(n: usize, text: &str) -> Result<Reader> {
        let bad = |msg: String| Error::InvalidParameter(format!("reader: {msg}"));
        let mut tokens = text.split(' ');
        fn build<'a>(
            tokens: &mut impl Iterator<Item = &'a str>,
            bad: &dyn Fn(String) -> Error,
        ) -> Result<Arc<Node>> {
            let tok = tokens.next().ok_or_else(|| bad("unexpected end of input".into()))?;
            if tok == "*" {
                return Ok(Node::stop());
            }
            if tok.is_empty() || !tok.bytes().all(|c| c.is_ascii_digit()) || tok.starts_with('0') {
                return Err(bad(format!("bad token {tok:?}")));
            }
            let index: usize = tok.parse().map_err(|_| bad(format!("bad token {tok:?}")))?;
            let zero = build(tokens, bad)?;
            let one = build(tokens, bad)?;
            Ok(Node::read(index, zero, one))
        }
        let root = build(&mut tokens, &bad)?;
        if tokens.next().is_some() {
            return Err(bad("trailing tokens".into()));
        }
        Reader::new(n, root)
    }
}

impl fmt::Display for Reader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_preorder())
    }
}

/// Free-function form of [`Reader::read`].
pub fn read(r: &Reader, x: &Word) -> Result<Reading> {
    r.read(x)
}

/// Exact total variation between the reading of a uniform member of
/// `{c in cp : c[J] = y}` and the J-simulation of `r` on `y`. Compare the
/// result against a threshold (1/8 by default) to decide discernment.
pub fn reader_discerning_tv(r: &Reader, j: &IndexSet, y: &Word, cp: &WordSet) -> Result<BigRational> {
    let conditioned = cp.filter_restricted(j, y);
    if conditioned.is_empty() {
        return Err(Error::EmptySet);
    }
    r.reading_dist(&conditioned)?.tv(&r.j_simulation(y, j)?)
}
