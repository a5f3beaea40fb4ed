//! Certificate for non-adaptive testers: heavy indices `B`, a greedy
//! disjoint cover by `B`-discerning query sets, and the three-term entropy
//! decomposition `H[X] = H[X | X[D∪B]] + H[X[D] | X[B]] + H[X[B]]`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::report::{Report, Step};
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::gf2::{IndexSet, LinearCode, WordSet};
use crate::tester::{queryset_discerning_tv, to_f64, Access, Kind, Tester};

#[derive(Clone, PartialEq, Debug)]
pub struct HeavySet {
    pub set: IndexSet,
    pub probabilities: Vec<BigRational>,
    /// `2q / Γ`; membership is `>=`.
    pub threshold: BigRational,
    /// `|B| > Γ/2`.
    pub violation: bool,
}

/// Indices queried with probability at least `2q/Γ`.
pub fn heavy_set(t: &Tester, gamma: usize) -> Result<HeavySet> {
    if t.kind() != Kind::NonAdaptive {
        return Err(Error::WrongTesterKind { expected: "nonadaptive" });
    }
    if gamma == 0 {
        return Err(Error::InvalidParameter("dual distance must be positive".into()));
    }
    let probabilities = t.query_probabilities()?;
    let threshold = BigRational::new(BigInt::from(2 * t.q()), BigInt::from(gamma));
    let set = IndexSet::new(
        t.n(),
        (1..=t.n()).filter(|&i| probabilities[i - 1] >= threshold),
    )?;
    let violation = 2 * set.len() > gamma;
    Ok(HeavySet { set, probabilities, threshold, violation })
}

#[derive(Clone, PartialEq, Debug)]
pub struct CoverEntry {
    /// 1-based rule number in the tester file.
    pub rule: usize,
    pub query: IndexSet,
    pub tv: BigRational,
    /// `H[X[Q ∖ B] | X[B]]`, exact up to floating point.
    pub entropy: f64,
    /// `|Q ∖ B| - 2 tv²`.
    pub pinsker: f64,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Cover {
    pub entries: Vec<CoverEntry>,
    /// Union of `Q ∖ B` over the cover.
    pub d: IndexSet,
    /// Measured tv of every rule, in rule order.
    pub rule_tvs: Vec<BigRational>,
}

impl Cover {
    pub fn sets(&self) -> Vec<IndexSet> {
        self.entries.iter().map(|e| e.query).collect()
    }
}

/// Greedy disjoint cover by `B`-discerning query sets, scanned by weight
/// (descending), then tv (descending), then index list. A candidate is
/// skipped if `Q ∖ B` meets the current `D`; the scan stops once adding a
/// set would push `|D|` past `Γ/2` or `|D ∪ B|` up to `Γ`.
pub fn greedy_cover(t: &Tester, b: &IndexSet, cp: &WordSet, tau: &BigRational, gamma: usize) -> Result<Cover> {
    if t.kind() != Kind::NonAdaptive {
        return Err(Error::WrongTesterKind { expected: "nonadaptive" });
    }
    if cp.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut rule_tvs = Vec::with_capacity(t.rules().len());
    let mut candidates = Vec::new();
    for (i, rule) in t.rules().iter().enumerate() {
        let Access::Query(q) = &rule.access else {
            return Err(Error::WrongTesterKind { expected: "nonadaptive" });
        };
        let tv = queryset_discerning_tv(q, b, cp)?;
        if &tv >= tau {
            candidates.push((i, *q, tv.clone()));
        }
        rule_tvs.push(tv);
    }
    candidates.sort_by(|x, y| {
        let (wx, wy) = (&t.rules()[x.0].weight, &t.rules()[y.0].weight);
        wy.cmp(wx).then_with(|| y.2.cmp(&x.2)).then_with(|| x.1.to_vec().cmp(&y.1.to_vec()))
    });
    let mut d = IndexSet::empty(t.n());
    let mut entries = Vec::new();
    for (i, q, tv) in candidates {
        let fresh = q.difference(b);
        if fresh.is_empty() || !fresh.is_disjoint(&d) {
            continue;
        }
        let next = d.union(&fresh);
        if 2 * next.len() > gamma || next.union(b).len() >= gamma {
            break;
        }
        d = next;
        entries.push(CoverEntry { rule: i + 1, query: q, tv, entropy: 0.0, pinsker: 0.0 });
    }
    Ok(Cover { entries, d, rule_tvs })
}

#[derive(Clone, PartialEq, Debug)]
pub struct NonAdaptiveCertificate {
    pub n: usize,
    pub k: usize,
    pub q: usize,
    pub gamma: usize,
    pub tau: BigRational,
    pub heavy: HeavySet,
    pub cover: Cover,
    pub rank_b: usize,
    /// Rank of `C` on `D ∪ B`.
    pub rank_s: usize,
    pub h_b: f64,
    pub h_d_given_b: f64,
    pub h_rest: f64,
    /// `rank(B) + Σ H[X[Q_i∖B] | X[B]] + (k - rank(D∪B))`.
    pub bound: f64,
    /// Same with each per-set entropy replaced by its Pinsker bound.
    pub pinsker_bound: f64,
    pub actual: f64,
    pub digests: Vec<(String, String)>,
}

pub fn certify_nonadaptive(
    code: &LinearCode,
    cp: &WordSet,
    t: &Tester,
    tau: &BigRational,
) -> Result<NonAdaptiveCertificate> {
    super::check_subset(code, cp)?;
    if t.n() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), found: t.n() });
    }
    let gamma = code.dual_distance()?;
    let heavy = heavy_set(t, gamma)?;
    let b = heavy.set;
    let mut cover = greedy_cover(t, &b, cp, tau, gamma)?;
    let x = Dist::uniform_over(cp)?;
    for e in &mut cover.entries {
        let fresh = e.query.difference(&b);
        e.entropy = x.conditional_entropy(&fresh, &b)?;
        let tv = to_f64(&e.tv);
        e.pinsker = fresh.len() as f64 - 2.0 * tv * tv;
    }
    let s = cover.d.union(&b);
    let k = code.k();
    let rank_b = code.rank_on(&b);
    let rank_s = code.rank_on(&s);
    let h_b = x.marginal(&b)?.entropy();
    let h_d_given_b = x.conditional_entropy(&cover.d, &b)?;
    let h_rest = x.conditional_entropy(&s.complement(), &s)?;
    let residual = (k - rank_s) as f64;
    let sum_exact: f64 = cover.entries.iter().map(|e| e.entropy).sum();
    let sum_pinsker: f64 = cover.entries.iter().map(|e| e.pinsker).sum();
    Ok(NonAdaptiveCertificate {
        n: code.n(),
        k,
        q: t.q(),
        gamma,
        tau: tau.clone(),
        heavy,
        cover,
        rank_b,
        rank_s,
        h_b,
        h_d_given_b,
        h_rest,
        bound: rank_b as f64 + sum_exact + residual,
        pinsker_bound: rank_b as f64 + sum_pinsker + residual,
        actual: (cp.len() as f64).log2(),
        digests: super::digests(code, cp, t),
    })
}

impl NonAdaptiveCertificate {
    pub fn b(&self) -> &IndexSet {
        &self.heavy.set
    }

    pub fn d(&self) -> &IndexSet {
        &self.cover.d
    }

    pub fn steps(&self) -> Vec<Step> {
        let s = self.cover.d.union(&self.heavy.set);
        let mut steps = vec![
            Step::new("eq_chain_rule", self.h_rest + self.h_d_given_b + self.h_b, self.actual),
            Step::new("heavy_trivial", self.h_b, self.heavy.set.len() as f64),
            Step::new("heavy_rank", self.h_b, self.rank_b as f64),
            Step::new(
                "subadditivity",
                self.h_d_given_b,
                self.cover.entries.iter().map(|e| e.entropy).sum(),
            ),
        ];
        for (i, e) in self.cover.entries.iter().enumerate() {
            steps.push(Step::new(format!("cover{}_pinsker", i + 1), e.entropy, e.pinsker));
        }
        steps.push(Step::new("residual_rank", self.h_rest, (self.k - self.rank_s) as f64));
        if s.len() < self.gamma {
            steps.push(Step::new("residual_size", self.h_rest, self.k as f64 - s.len() as f64));
        }
        steps.push(Step::new("pinsker_column", self.bound, self.pinsker_bound));
        steps.push(Step::new("soundness", self.actual, self.bound));
        steps
    }

    pub fn pass(&self) -> bool {
        self.to_report().pass()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("nonadaptive");
        r.digests = self.digests.clone();
        let q3 = (self.q * self.q * self.q) as f64;
        r.param("n", self.n);
        r.param("k", self.k);
        r.param("q", self.q);
        r.param("gamma", self.gamma);
        r.param("size_condition", 64 * self.k <= self.n);
        r.param("tau", &self.tau);
        r.param("heavy_threshold", &self.heavy.threshold);
        r.param("heavy_size", self.heavy.set.len());
        r.param("heavy_violation", self.heavy.violation);
        r.param("cover_size", self.cover.entries.len());
        r.param("d_size", self.cover.d.len());
        r.param("ref_cover_size", self.gamma as f64 / (18.0 * q3));
        r.param("ref_d_size", self.gamma as f64 / (18.0 * (self.q * self.q) as f64));
        r.param("ref_loss", 0.0005 * self.gamma as f64 / (18.0 * q3));
        r.param("pinsker_bound", self.pinsker_bound);
        r.measure("heavy", index_list(&self.heavy.set));
        r.measure("d", index_list(&self.cover.d));
        for (i, tv) in self.cover.rule_tvs.iter().enumerate() {
            r.measure(&format!("rule{}.tv", i + 1), tv);
        }
        for (i, e) in self.cover.entries.iter().enumerate() {
            let p = format!("cover{}", i + 1);
            r.measure(&format!("{p}.rule"), e.rule);
            r.measure(&format!("{p}.tv"), &e.tv);
            r.measure(&format!("{p}.entropy"), e.entropy);
        }
        r.steps = self.steps();
        r.bound = self.bound;
        r.actual = self.actual;
        r
    }
}

/// `1,3,4`, or `-` for the empty set.
pub(crate) fn index_list(s: &IndexSet) -> String {
    if s.is_empty() {
        return "-".into();
    }
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}
