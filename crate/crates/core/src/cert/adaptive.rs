//! Certificate for adaptive testers. An n-reader is built layer by layer:
//! on every branch consistent with `C'`, a discerning reader of the tester
//! is grafted and padded to exactly `q` fresh reads. Pushing `U(C')` through
//! the resulting bijection splits `H[X]` into per-chunk conditional
//! entropies plus a tail.
//!
//! The bound is computed per branch: for the read set `S_y` of a branch `y`,
//! `B(y) = min(k - rank(S_y), q - 2 tv_y² + Σ_z Pr[z | y] B(yz))`, with
//! `B = k - rank(S_y)` below the last layer. Both terms bound `H[X | y]`.

use std::sync::Arc;

use num_rational::BigRational;

use super::report::{Report, Step};
use crate::error::{Error, Result};
use crate::gf2::{IndexSet, LinearCode, Word, WordSet};
use crate::reader::{graft_node, pad_node, reader_discerning_tv, Ctx, Node, Reader};
use crate::tester::{to_f64, Access, Kind, Tester};

#[derive(Clone, PartialEq, Debug)]
pub struct Discerning {
    /// 1-based rule number.
    pub rule: usize,
    pub reader: Reader,
    pub tv: BigRational,
    /// `tv >= tau`.
    pub discerning: bool,
}

/// Scans reader rules by descending weight (ties in rule order) and returns
/// the first whose discerning tv for `(J, y)` reaches `tau`; otherwise the
/// rule with the largest tv.
pub fn find_discerning_reader(
    t: &Tester,
    j: &IndexSet,
    y: &Word,
    cp: &WordSet,
    tau: &BigRational,
) -> Result<Discerning> {
    if t.kind() != Kind::Adaptive {
        return Err(Error::WrongTesterKind { expected: "adaptive" });
    }
    if cp.filter_restricted(j, y).is_empty() {
        return Err(Error::EmptySet);
    }
    let mut order: Vec<usize> = (0..t.rules().len()).collect();
    order.sort_by(|&a, &b| t.rules()[b].weight.cmp(&t.rules()[a].weight));
    let mut best: Option<Discerning> = None;
    for i in order {
        let Access::Reader(r) = &t.rules()[i].access else {
            return Err(Error::WrongTesterKind { expected: "adaptive" });
        };
        let tv = reader_discerning_tv(r, j, y, cp)?;
        if &tv >= tau {
            return Ok(Discerning { rule: i + 1, reader: r.clone(), tv, discerning: true });
        }
        if best.as_ref().is_none_or(|b| tv > b.tv) {
            best = Some(Discerning { rule: i + 1, reader: r.clone(), tv, discerning: false });
        }
    }
    best.ok_or_else(|| Error::InvalidTester("no rules".into()))
}

/// One branch of one layer that some member of `C'` follows.
#[derive(Clone, PartialEq, Debug)]
pub struct BranchRecord {
    /// 1-based layer.
    pub layer: usize,
    /// Values read before this chunk.
    pub prefix: Word,
    pub read: IndexSet,
    /// Members of `C'` consistent with the prefix.
    pub count: usize,
    pub rule: usize,
    pub selected_tv: BigRational,
    pub discerning: bool,
    /// tv of the padded chunk reading against uniform on {0,1}^q.
    pub chunk_tv: BigRational,
    /// `B(y)` for this branch.
    pub bound: f64,
}

struct Builder<'a> {
    code: &'a LinearCode,
    cp: &'a WordSet,
    t: &'a Tester,
    tau: &'a BigRational,
    q: usize,
    layers: usize,
    records: Vec<BranchRecord>,
    /// `(probability numerator, k - rank)` per consistent leaf after the
    /// last layer.
    tails: Vec<(usize, usize)>,
}

/// Replaces each stop of `node` by `f(ctx, values)`.
fn expand(
    node: &Arc<Node>,
    ctx: Ctx,
    values: Word,
    f: &mut dyn FnMut(Ctx, Word) -> Result<Arc<Node>>,
) -> Result<Arc<Node>> {
    match &**node {
        Node::Stop => f(ctx, values),
        Node::Read { index, zero, one } => Ok(Node::read(
            *index,
            expand(zero, ctx.with(*index, false), values.push(false)?, f)?,
            expand(one, ctx.with(*index, true), values.push(true)?, f)?,
        )),
    }
}

impl Builder<'_> {
    fn consistent(&self, ctx: &Ctx) -> usize {
        self.cp.filter_restricted(&ctx.read_set(), &ctx.read_values()).len()
    }

    /// Subtree for the branch with history `ctx`, and its bound `B(y)`.
    fn layer(&mut self, ctx: Ctx, prefix: Word, layer: usize) -> Result<(Arc<Node>, f64)> {
        let n = ctx.n;
        let read = ctx.read_set();
        let count = self.consistent(&ctx);
        let rank_cap = (self.code.k() - self.code.rank_on(&read)) as f64;
        if count == 0 {
            return Ok((pad_node(ctx, &Node::stop(), n - read.len())?, rank_cap));
        }
        if layer > self.layers {
            self.tails.push((count, self.code.k() - self.code.rank_on(&read)));
            return Ok((pad_node(ctx, &Node::stop(), n - read.len())?, rank_cap));
        }
        let y = ctx.read_values();
        let found = find_discerning_reader(self.t, &read, &y, self.cp, self.tau)?;
        let chunk = pad_node(ctx, &graft_node(ctx, found.reader.root()), self.q)?;
        let chunk_tv = reader_discerning_tv(&Reader::from_trusted(n, chunk.clone()), &read, &y, self.cp)?;
        let index = self.records.len();
        self.records.push(BranchRecord {
            layer,
            prefix,
            read,
            count,
            rule: found.rule,
            selected_tv: found.tv,
            discerning: found.discerning,
            chunk_tv: chunk_tv.clone(),
            bound: 0.0,
        });
        let mut below = 0.0;
        let node = expand(&chunk, ctx, Word::empty(), &mut |leaf, values| {
            let weight = self.consistent(&leaf);
            let (sub, b) = self.layer(leaf, prefix.concat(&values)?, layer + 1)?;
            below += weight as f64 / count as f64 * b;
            Ok(sub)
        })?;
        let tv = to_f64(&chunk_tv);
        let bound = rank_cap.min(self.q as f64 - 2.0 * tv * tv + below);
        self.records[index].bound = bound;
        Ok((node, bound))
    }
}

/// Number of full chunk layers: `floor(min(Γ, n) / q)`.
pub fn layer_count(gamma: usize, n: usize, q: usize) -> usize {
    gamma.min(n) / q
}

struct Built {
    reader: Reader,
    records: Vec<BranchRecord>,
    tails: Vec<(usize, usize)>,
    bound: f64,
    layers: usize,
}

fn build(code: &LinearCode, cp: &WordSet, t: &Tester, tau: &BigRational) -> Result<Built> {
    super::check_subset(code, cp)?;
    if t.n() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), found: t.n() });
    }
    let t = match t.kind() {
        Kind::Adaptive => t.clone(),
        Kind::NonAdaptive => t.to_adaptive(),
    };
    if t.q() == 0 {
        return Err(Error::InvalidParameter("testers must read at least one bit".into()));
    }
    let gamma = code.dual_distance()?;
    let layers = layer_count(gamma, code.n(), t.q());
    let mut b = Builder {
        code,
        cp,
        t: &t,
        tau,
        q: t.q(),
        layers,
        records: Vec::new(),
        tails: Vec::new(),
    };
    let (root, bound) = b.layer(Ctx::new(code.n()), Word::empty(), 1)?;
    Ok(Built {
        reader: Reader::from_trusted(code.n(), root),
        records: b.records,
        tails: b.tails,
        bound,
        layers,
    })
}

/// The n-reader of the certificate. Non-adaptive testers are embedded as
/// fixed-order readers first.
pub fn build_certifying_reader(code: &LinearCode, cp: &WordSet, t: &Tester, tau: &BigRational) -> Result<Reader> {
    Ok(build(code, cp, t, tau)?.reader)
}

#[derive(Clone, PartialEq, Debug)]
pub struct ChunkSummary {
    /// 1-based layer.
    pub layer: usize,
    /// `H[chunk | prefix]` from the pushed-forward distribution.
    pub exact: f64,
    /// `Σ_y Pr[y] (q - 2 tv_y²)`.
    pub pinsker: f64,
    /// `Σ_y Pr[y] tv_y` over the chunk tvs.
    pub mean_tv: f64,
}

#[derive(Clone, PartialEq, Debug)]
pub struct AdaptiveCertificate {
    pub n: usize,
    pub k: usize,
    pub q: usize,
    pub gamma: usize,
    pub tau: BigRational,
    pub layers: usize,
    pub reader: Reader,
    pub branches: Vec<BranchRecord>,
    pub chunks: Vec<ChunkSummary>,
    /// Entropy of the reading of a uniform member of `C'`.
    pub reading_entropy: f64,
    pub tail_exact: f64,
    /// `Σ_z Pr[z] (k - rank(S_z))` over the branches after the last layer.
    pub tail_rank: f64,
    pub bijection: Option<bool>,
    pub bound: f64,
    pub actual: f64,
    pub digests: Vec<(String, String)>,
}

pub fn certify_adaptive(
    code: &LinearCode,
    cp: &WordSet,
    t: &Tester,
    tau: &BigRational,
) -> Result<AdaptiveCertificate> {
    let built = build(code, cp, t, tau)?;
    let n = code.n();
    let q = t.q();
    let reader = built.reader;
    let reading = reader.reading_dist(cp)?;
    let prefix_entropy = |len: usize| -> Result<f64> {
        Ok(reading.marginal(&IndexSet::new(n, 1..=len)?)?.entropy())
    };
    let mut chunks = Vec::with_capacity(built.layers);
    let total = cp.len() as f64;
    for layer in 1..=built.layers {
        let exact = prefix_entropy(layer * q)? - prefix_entropy((layer - 1) * q)?;
        let mut pinsker = 0.0;
        let mut mean_tv = 0.0;
        for r in built.records.iter().filter(|r| r.layer == layer) {
            let p = r.count as f64 / total;
            let tv = to_f64(&r.chunk_tv);
            pinsker += p * (q as f64 - 2.0 * tv * tv);
            mean_tv += p * tv;
        }
        chunks.push(ChunkSummary { layer, exact, pinsker, mean_tv });
    }
    let reading_entropy = reading.entropy();
    let tail_exact = reading_entropy - prefix_entropy(built.layers * q)?;
    let tail_rank = built
        .tails
        .iter()
        .map(|&(count, cap)| count as f64 / total * cap as f64)
        .sum();
    let bijection = if crate::budget::check("bijection check", n).is_ok() {
        Some(reader.is_bijection()?)
    } else {
        None
    };
    Ok(AdaptiveCertificate {
        n,
        k: code.k(),
        q,
        gamma: code.dual_distance()?,
        tau: tau.clone(),
        layers: built.layers,
        reader,
        branches: built.records,
        chunks,
        reading_entropy,
        tail_exact,
        tail_rank,
        bijection,
        bound: built.bound,
        actual: total.log2(),
        digests: super::digests(code, cp, t),
    })
}

impl AdaptiveCertificate {
    /// Bits covered by the chunk layers.
    pub fn covered(&self) -> usize {
        self.layers * self.q
    }

    pub fn steps(&self) -> Vec<Step> {
        let mut steps = vec![Step::new("eq_bijection", self.reading_entropy, self.actual)];
        let exact_sum: f64 = self.chunks.iter().map(|c| c.exact).sum::<f64>() + self.tail_exact;
        steps.push(Step::new("eq_telescoping", exact_sum, self.actual));
        for c in &self.chunks {
            steps.push(Step::new(format!("chunk{}_pinsker", c.layer), c.exact, c.pinsker));
        }
        steps.push(Step::new("tail_rank", self.tail_exact, self.tail_rank));
        if self.covered() < self.gamma {
            steps.push(Step::new("tail_size", self.tail_exact, self.k as f64 - self.covered() as f64));
        }
        let column: f64 = self.chunks.iter().map(|c| c.pinsker).sum::<f64>() + self.tail_rank;
        steps.push(Step::new("branch_recursion", self.bound, column));
        steps.push(Step::new("soundness", self.actual, self.bound));
        steps
    }

    pub fn pass(&self) -> bool {
        self.bijection != Some(false) && self.to_report().pass()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("adaptive");
        r.digests = self.digests.clone();
        r.param("n", self.n);
        r.param("k", self.k);
        r.param("q", self.q);
        r.param("gamma", self.gamma);
        r.param("size_condition", 64 * self.k <= self.n);
        r.param("gamma_exceeds_half_n", 2 * self.gamma > self.n);
        r.param("tau", &self.tau);
        r.param("layers", self.layers);
        r.param("covered", self.covered());
        r.param(
            "bijection",
            match self.bijection {
                Some(b) => b.to_string(),
                None => "unchecked".into(),
            },
        );
        r.param("ref_loss", (self.gamma as f64 / self.q as f64 / 32.0).floor());
        for c in &self.chunks {
            let p = format!("chunk{}", c.layer);
            r.measure(&format!("{p}.exact"), c.exact);
            r.measure(&format!("{p}.pinsker"), c.pinsker);
            r.measure(&format!("{p}.mean_tv"), c.mean_tv);
        }
        for b in &self.branches {
            let y = if b.prefix.is_empty() { "-".to_string() } else { b.prefix.to_string() };
            let p = format!("layer{}[{y}]", b.layer);
            r.measure(&format!("{p}.count"), b.count);
            r.measure(&format!("{p}.rule"), b.rule);
            r.measure(&format!("{p}.selected_tv"), &b.selected_tv);
            r.measure(&format!("{p}.chunk_tv"), &b.chunk_tv);
            r.measure(&format!("{p}.bound"), b.bound);
        }
        r.measure("tail.exact", self.tail_exact);
        r.measure("tail.rank", self.tail_rank);
        r.steps = self.steps();
        r.bound = self.bound;
        r.actual = self.actual;
        r.reader = Some(self.reader.to_preorder());
        r
    }
}
