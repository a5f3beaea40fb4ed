//! Acceptance criteria 1 through 11. Prints one line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use ptlab::cert::{build_certifying_reader, certify_adaptive, certify_nonadaptive};
use ptlab::dist::{ratio, Dist, TOLERANCE};
use ptlab::exemplars::{
    gi_distance, gi_pair_from, gi_partial_tester, gi_slice_members, palindrome_language_members,
    palindrome_partial_tester, palindrome_slice_members, GraphIsomorphism, PalindromeLanguage, Permutation,
};
use ptlab::formats::{print_code, print_tester, print_wordset};
use ptlab::gf2::{IndexSet, LinearCode, Word, WordSet};
use ptlab::reader::{reader_discerning_tv, Node, Reader};
use ptlab::rng::SeededRng;
use ptlab::tester::{
    is_far, random_complete_reader, random_tester, singleton_tester, to_f64, validate_partial_tester, Access,
    Kind, Predicate, Rule, Tester, ValidationMode,
};

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

fn word(n: usize, v: u128) -> Word {
    Word::from_value(n, v).expect("word")
}

fn set(n: usize, mask: u128) -> IndexSet {
    IndexSet::new(n, (1..=n).filter(|i| mask >> (n - i) & 1 == 1)).expect("index set")
}

/// Entropy in bits of the empirical distribution of `items`.
fn entropy_of<K: std::hash::Hash + Eq>(items: impl IntoIterator<Item = K>) -> f64 {
    let mut counts: HashMap<K, u64> = HashMap::new();
    let mut total = 0u64;
    for k in items {
        *counts.entry(k).or_default() += 1;
        total += 1;
    }
    let t = total as f64;
    counts.values().map(|&c| -(c as f64 / t) * (c as f64 / t).log2()).sum::<f64>() + 0.0
}

fn random_subset(code: &LinearCode, rng: &mut SeededRng, shape: u64) -> WordSet {
    let all = code.enumerate().expect("enumerate");
    match shape % 5 {
        0 => all,
        1 => WordSet::singleton(all.words()[rng.below(all.len() as u64) as usize]),
        _ => {
            let size = 1 + rng.below(all.len() as u64) as usize;
            let picks = rng.sample_distinct(all.len(), size);
            WordSet::from_iter_dedup(code.n(), picks.into_iter().map(|p| all.words()[p])).expect("subset")
        }
    }
}

/// Dual distance by listing every word orthogonal to all generator rows.
fn brute_dual_distance(code: &LinearCode) -> usize {
    let n = code.n();
    let rows: Vec<u128> = code.generator().iter().map(|r| r.value()).collect();
    (1u128..1 << n)
        .filter(|&x| rows.iter().all(|&r| (x & r).count_ones() % 2 == 0))
        .map(|x| x.count_ones() as usize)
        .min()
        .unwrap_or(n + 1)
}

fn brute_codewords(code: &LinearCode) -> Vec<u128> {
    let rows: Vec<u128> = code.generator().iter().map(|r| r.value()).collect();
    (0u128..1 << rows.len())
        .map(|c| rows.iter().enumerate().filter(|(i, _)| c >> i & 1 == 1).fold(0, |a, (_, &r)| a ^ r))
        .collect()
}

fn criterion_1() -> Outcome {
    let mut cases = Vec::new();
    for s in 0..50u64 {
        let n = 8 + (s % 7) as usize;
        let k = 1 + (s % 7) as usize;
        cases.push(LinearCode::random(n, k.min(n), 1000 + s).map_err(e)?);
    }
    let start = Instant::now();
    let fast: Vec<usize> = cases.iter().map(|c| c.dual_distance()).collect::<Result<_, _>>().map_err(e)?;
    let elapsed = start.elapsed().as_secs_f64();
    let agree = cases.iter().zip(&fast).filter(|(c, &g)| brute_dual_distance(c) == g).count();
    Ok((agree == 50 && elapsed < 10.0, format!("{agree}/50 codes agree, {elapsed:.3}s")))
}

fn criterion_2() -> Outcome {
    let code = LinearCode::hamming74();
    let gamma = brute_dual_distance(&code);
    let words = brute_codewords(&code);
    let u = Dist::uniform_over(&code.enumerate().map_err(e)?).map_err(e)?;
    let mut ok = 0;
    let mut total = 0;
    for mask in 1u128..128 {
        let size = mask.count_ones() as usize;
        if size > 3 {
            continue;
        }
        total += 1;
        let j = set(7, mask);
        let mut counts: BTreeMap<u128, usize> = BTreeMap::new();
        for &x in &words {
            *counts.entry(word(7, x).restrict(&j).value()).or_default() += 1;
        }
        let uniform_counts = counts.len() == 1 << size && counts.values().all(|&c| c == 1 << (4 - size));
        let marginal = u.marginal(&j).map_err(e)? == Dist::uniform_cube(size).map_err(e)?;
        if uniform_counts && marginal {
            ok += 1;
        }
    }
    Ok((gamma == 4 && ok == 63 && total == 63, format!("gamma {gamma}, {ok}/{total} index sets exactly uniform")))
}

fn criterion_3() -> Outcome {
    let mut rng = SeededRng::new(3);
    let mut worst = f64::INFINITY;
    let mut made = 0;
    while made < 1000 {
        let m = 1 + rng.below(4) as usize;
        let counts: Vec<(Word, BigUint)> =
            Word::all(m).map(|w| (w, BigUint::from(rng.below(6)))).collect();
        let Ok(d) = Dist::from_counts(m, counts) else { continue };
        made += 1;
        let tv = to_f64(&d.tv_to_uniform());
        worst = worst.min(m as f64 - 2.0 * tv * tv + TOLERANCE - d.entropy());
    }
    let k = 5;
    let uniform = Dist::uniform_cube(k).map_err(e)?;
    let point = Dist::point_mass(word(3, 0b101));
    let skew = Dist::from_rationals(1, [(word(1, 0), ratio(1, 4)), (word(1, 1), ratio(3, 4))]).map_err(e)?;
    let closed = uniform.entropy() == k as f64
        && point.entropy() == 0.0
        && (skew.entropy() - 0.811_278_124_459_132_8).abs() < 1e-12;
    Ok((
        worst >= 0.0 && closed,
        format!("1000 distributions, min slack {worst:.3e}; closed forms {closed}"),
    ))
}

/// The reading distribution of `r` under `x[J] = y`, other bits free, by
/// listing every completion.
fn brute_j_simulation(r: &Reader, y: &Word, j: &IndexSet) -> Dist {
    let n = r.n();
    let (lo, hi) = r.depth_range();
    let mut counts: BTreeMap<Word, BigUint> = BTreeMap::new();
    for x in Word::all(n).filter(|x| x.restrict(j) == *y) {
        let values = r.read(&x).expect("read").values;
        let key = if lo == hi {
            values
        } else {
            let mut bits: Vec<bool> = values.iter().collect();
            bits.push(true);
            bits.resize(hi + 1, false);
            Word::from_bits(&bits).expect("key")
        };
        *counts.entry(key).or_default() += 1u32;
    }
    let len = if lo == hi { hi } else { hi + 1 };
    Dist::from_counts(len, counts).expect("dist")
}

/// A random reader whose branches stop at uneven depths up to `depth`.
fn random_uneven_reader(n: usize, depth: usize, rng: &mut SeededRng) -> Reader {
    fn go(n: usize, used: &mut Vec<usize>, left: usize, rng: &mut SeededRng) -> Arc<Node> {
        if left == 0 || rng.below(4) == 0 {
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
    Reader::new(n, go(n, &mut Vec::new(), depth, rng)).expect("reader")
}

fn criterion_4() -> Outcome {
    let mut rng = SeededRng::new(4);
    // graft identity: grafting the empty reader anywhere changes nothing
    let mut identity = 0;
    for _ in 0..50 {
        let r = random_uneven_reader(8, 4, &mut rng);
        let x = word(8, rng.bits(8));
        let y = r.read(&x).map_err(e)?.values;
        if r.graft(&Reader::stop(8), &y).map_err(e)? == r {
            identity += 1;
        }
    }
    // containment preserves tv, every J, every y in C'[J]
    let mut pairs = 0;
    let mut comparisons = 0u64;
    let mut violations = 0u64;
    for (n, cases) in [(4usize, 10), (6, 8), (8, 4), (10, 2)] {
        for _ in 0..cases {
            let s = random_complete_reader(n, 2, &mut rng).map_err(e)?;
            let x = word(n, rng.bits(n));
            let y = s.read(&x).map_err(e)?.values;
            let t = random_complete_reader(n, 2, &mut rng).map_err(e)?;
            let r = s.padded_graft(&t, &y, 2).map_err(e)?;
            let small = r.truncate(3);
            let size = 2 + rng.below(7) as usize;
            let cp = WordSet::from_iter_dedup(n, (0..size).map(|_| word(n, rng.bits(n)))).map_err(e)?;
            for (outer, inner) in [(&r, &s), (&r, &small)] {
                if !outer.contains(inner).map_err(e)? {
                    violations += 1;
                    continue;
                }
                pairs += 1;
                for mask in 0u128..1 << n {
                    let j = set(n, mask);
                    let patterns: HashSet<Word> = cp.iter().map(|w| w.restrict(&j)).collect();
                    for y in patterns {
                        comparisons += 1;
                        let big = reader_discerning_tv(outer, &j, &y, &cp).map_err(e)?;
                        let little = reader_discerning_tv(inner, &j, &y, &cp).map_err(e)?;
                        if big < little {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    // j-simulation against brute force
    let mut sims = 0;
    for c in 0..200 {
        let n = 4 + c % 7;
        let r = if c % 2 == 0 {
            random_complete_reader(n, 1 + c % 4, &mut rng).map_err(e)?
        } else {
            random_uneven_reader(n, 4, &mut rng)
        };
        let j = set(n, rng.bits(n));
        let y = word(j.len(), rng.bits(j.len()));
        if r.j_simulation(&y, &j).map_err(e)? == brute_j_simulation(&r, &y, &j) {
            sims += 1;
        }
    }
    Ok((
        identity == 50 && violations == 0 && sims == 200,
        format!(
            "graft identity {identity}/50; {pairs} contained pairs, {comparisons} (J, y) comparisons, {violations} violations; j-simulation {sims}/200"
        ),
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = SeededRng::new(5);
    let mut ok = 0;
    for s in 0..100u64 {
        let n = 6 + (s % 7) as usize;
        let k = 2 + (s % 4) as usize;
        let code = LinearCode::random(n, k, 500 + s).map_err(e)?;
        let cp = random_subset(&code, &mut rng, s);
        let q = 1 + (s % 3) as usize;
        let kind = if s % 2 == 0 { Kind::Adaptive } else { Kind::NonAdaptive };
        let t = singleton_tester(kind, &cp.words()[0], q, 3, ratio(1, 8), s).map_err(e)?;
        let r = build_certifying_reader(&code, &cp, &t, &ratio(1, 8)).map_err(e)?;
        let mut seen = HashSet::new();
        let mut distinct = true;
        for x in Word::all(n) {
            let reading = r.read(&x).map_err(e)?;
            distinct &= reading.indices.len() == n && seen.insert(reading.values);
        }
        if distinct && r.is_bijection().map_err(e)? {
            ok += 1;
        }
    }
    Ok((ok == 100, format!("{ok}/100 readers are bijections")))
}

struct Triple {
    code: LinearCode,
    cp: WordSet,
    tester: Tester,
}

fn triples(kind: Kind, seed: u64) -> Result<Vec<Triple>, String> {
    let mut rng = SeededRng::new(seed);
    let mut out = Vec::new();
    for s in 0..50u64 {
        let n = 6 + (s % 8) as usize;
        let k = 2 + (s % 5) as usize;
        let code = LinearCode::random(n, k, seed * 100 + s).map_err(e)?;
        let cp = random_subset(&code, &mut rng, s);
        let q = 1 + (s % 3) as usize;
        let tester = if s % 3 == 2 {
            random_tester(kind, n, q, 4, ratio(1, 8), s).map_err(e)?
        } else {
            singleton_tester(kind, &cp.words()[0], q, 3, ratio(1, 8), s).map_err(e)?
        };
        out.push(Triple { code, cp, tester });
    }
    Ok(out)
}

fn criterion_6() -> Outcome {
    let mut ok = 0;
    let mut detail = String::new();
    for (i, t) in triples(Kind::Adaptive, 6)?.iter().enumerate() {
        let c = certify_adaptive(&t.code, &t.cp, &t.tester, &ratio(1, 8)).map_err(e)?;
        let actual = (t.cp.len() as f64).log2();
        let readings: Vec<Word> =
            t.cp.iter().map(|x| c.reader.read(x).map(|r| r.values)).collect::<Result<_, _>>().map_err(e)?;
        let prefix_h = |len: usize| entropy_of(readings.iter().map(|r| r.prefix(len)));
        let mut telescoped = 0.0;
        let mut chunks_ok = c.chunks.len() == c.layers;
        for ch in &c.chunks {
            let oracle = prefix_h(ch.layer * c.q) - prefix_h((ch.layer - 1) * c.q);
            chunks_ok &= (oracle - ch.exact).abs() <= TOLERANCE && ch.exact <= ch.pinsker + TOLERANCE;
            telescoped += oracle;
        }
        let tail = prefix_h(c.n) - prefix_h(c.layers * c.q);
        chunks_ok &= (tail - c.tail_exact).abs() <= TOLERANCE && c.tail_exact <= c.tail_rank + TOLERANCE;
        telescoped += tail;
        let sound = c.bound >= actual - TOLERANCE;
        let telescopes = (telescoped - actual).abs() <= TOLERANCE;
        if sound && telescopes && chunks_ok && c.pass() {
            ok += 1;
        } else if detail.is_empty() {
            detail = format!("; first failure at triple {i}: bound {} actual {actual}", c.bound);
        }
    }
    Ok((ok == 50, format!("{ok}/50 triples sound, telescoping, Pinsker-dominated{detail}")))
}

fn criterion_7() -> Outcome {
    let mut codes = vec![LinearCode::hamming74()];
    for s in 0..6u64 {
        codes.push(LinearCode::random(8 + (s % 3) as usize, 3 + (s % 3) as usize, 70 + s).map_err(e)?);
    }
    let mut measured = 0u64;
    let mut boundary = 0u64;
    let mut bad = Vec::new();
    for (ci, code) in codes.iter().enumerate() {
        let all = code.enumerate().map_err(e)?;
        let gamma = code.dual_distance().map_err(e)?;
        let k = code.k() as f64;
        for (ti, q) in [1usize, 2, 3].into_iter().enumerate() {
            let seed = (ci * 10 + ti) as u64;
            let a = random_tester(Kind::Adaptive, code.n(), q, 3, ratio(1, 8), seed).map_err(e)?;
            let ca = certify_adaptive(code, &all, &a, &ratio(1, 8)).map_err(e)?;
            if ca.bound != k {
                bad.push(format!("adaptive bound {} != {k}", ca.bound));
            }
            for b in &ca.branches {
                let end = b.layer * q;
                if end < gamma {
                    measured += 1;
                    if !b.chunk_tv.is_zero() || !b.selected_tv.is_zero() {
                        bad.push(format!("chunk tv {} inside the first {gamma} bits", b.chunk_tv));
                    }
                } else if end == gamma {
                    // the chunk reading is uniform exactly when every path's read set has full rank
                    boundary += 1;
                    let mut full = true;
                    for x in all.iter() {
                        let r = ca.reader.read(x).map_err(e)?;
                        if r.values.prefix(b.prefix.len()) != b.prefix {
                            continue;
                        }
                        let s = IndexSet::new(code.n(), r.indices[..end].iter().copied()).map_err(e)?;
                        full &= code.rank_on(&s) == end;
                    }
                    if full != b.chunk_tv.is_zero() {
                        bad.push(format!("boundary chunk tv {} with full rank {full}", b.chunk_tv));
                    }
                }
            }
            let na = random_tester(Kind::NonAdaptive, code.n(), q, 3, ratio(1, 8), seed).map_err(e)?;
            let cn = certify_nonadaptive(code, &all, &na, &ratio(1, 8)).map_err(e)?;
            if cn.bound != k {
                bad.push(format!("nonadaptive bound {} != {k}", cn.bound));
            }
            for (rule, tv) in na.rules().iter().zip(&cn.cover.rule_tvs) {
                let Access::Query(qs) = &rule.access else { unreachable!() };
                if qs.union(cn.b()).len() < gamma {
                    measured += 1;
                    if !tv.is_zero() {
                        bad.push(format!("query-set tv {tv} inside the first {gamma} bits"));
                    }
                }
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{} codes x 3 query sizes; {measured} tvs inside the first Γ bits, {boundary} boundary chunks{}",
            codes.len(),
            bad.first().map(|b| format!("; {b}")).unwrap_or_default()
        ),
    ))
}

fn criterion_8() -> Outcome {
    let code = LinearCode::hamming74();
    let zero = word(7, 0);
    let reader = Reader::fixed_order(7, &[1, 2]).map_err(e)?;
    let rule = Rule {
        weight: BigRational::one(),
        access: Access::Reader(reader),
        predicate: Predicate::only(&word(2, 0)).map_err(e)?,
    };
    let t = Tester::new(Kind::Adaptive, 7, 2, ratio(1, 8), vec![rule]).map_err(e)?;
    let c = certify_adaptive(&code, &WordSet::singleton(zero), &t, &ratio(1, 8)).map_err(e)?;
    let tvs = c.branches.iter().all(|b| b.chunk_tv == ratio(3, 4));
    let pinsker = c.chunks.len() == 2 && c.chunks.iter().all(|ch| ch.pinsker == 0.875);
    let pass = tvs && pinsker && c.bound == 1.75 && c.actual == 0.0 && c.pass();
    Ok((
        pass,
        format!(
            "chunk tvs {:?}, pinsker {:?}, bound {}, actual {}, {}",
            c.branches.iter().map(|b| b.chunk_tv.to_string()).collect::<Vec<_>>(),
            c.chunks.iter().map(|ch| ch.pinsker).collect::<Vec<_>>(),
            c.bound,
            c.actual,
            if c.pass() { "PASS" } else { "FAIL" }
        ),
    ))
}

fn criterion_9() -> Outcome {
    let mut ok = 0;
    let mut detail = String::new();
    for (i, t) in triples(Kind::NonAdaptive, 9)?.iter().enumerate() {
        let c = certify_nonadaptive(&t.code, &t.cp, &t.tester, &ratio(1, 8)).map_err(e)?;
        let actual = (t.cp.len() as f64).log2();
        let h = |j: &IndexSet| entropy_of(t.cp.iter().map(|x| x.restrict(j)));
        let b = *c.b();
        let s = c.d().union(&b);
        let full = IndexSet::full(c.n);
        let h_b = h(&b);
        let h_d_given_b = h(&s) - h_b;
        let h_rest = h(&full) - h(&s);
        let chain = (h_rest + h_d_given_b + h_b - actual).abs() <= TOLERANCE;
        let parts = (h_b - c.h_b).abs() <= TOLERANCE
            && (h_d_given_b - c.h_d_given_b).abs() <= TOLERANCE
            && (h_rest - c.h_rest).abs() <= TOLERANCE;
        let mut entries = true;
        for en in &c.cover.entries {
            let fresh = en.query.difference(&b);
            let oracle = h(&fresh.union(&b)) - h_b;
            entries &= (oracle - en.entropy).abs() <= TOLERANCE && en.entropy <= en.pinsker + TOLERANCE;
        }
        let sound = c.bound >= actual - TOLERANCE;
        if chain && parts && entries && sound && c.pass() {
            ok += 1;
        } else if detail.is_empty() {
            detail = format!("; first failure at triple {i}: bound {} actual {actual}", c.bound);
        }
    }
    Ok((ok == 50, format!("{ok}/50 triples sound, chain rule exact, Pinsker-dominated{detail}")))
}

fn criterion_10() -> Outcome {
    let eps = ratio(1, 8);
    let mut rng = SeededRng::new(10);

    let (n, i) = (24, 5);
    let pal = palindrome_partial_tester(n, i, &eps, 1).map_err(e)?;
    let slice = palindrome_slice_members(n, i).map_err(e)?;
    let mut members_ok = true;
    for x in slice.iter() {
        members_ok &= pal.accept_word(x).map_err(e)?.is_one();
    }
    let language: Vec<u128> = palindrome_language_members(n).map_err(e)?.iter().map(|w| w.value()).collect();
    let mut far = Vec::new();
    while far.len() < 1000 {
        let x = rng.bits(n);
        let d = language.iter().map(|&m| (m ^ x).count_ones()).min().unwrap_or(u32::MAX);
        if is_far(d, n, &eps) {
            far.push(word(n, x));
        }
    }
    let mut far_ok = true;
    for x in &far {
        far_ok &= pal.accept_word(x).map_err(e)? <= ratio(1, 3);
    }
    let pal_report =
        validate_partial_tester(&pal, &PalindromeLanguage { n }, &slice, ValidationMode::Exhaustive).map_err(e)?;

    let v = 4;
    let pi = Permutation::random(v, 2);
    let gi = gi_partial_tester(&pi, &eps, 1).map_err(e)?;
    let gi_slice = gi_slice_members(&pi).map_err(e)?;
    let mut gi_members_ok = gi_slice.len() == 1 << (v * v);
    for x in gi_slice.iter() {
        gi_members_ok &= gi_pair_from(&x.prefix(v * v), &pi).map_err(e)? == *x && gi.accept_word(x).map_err(e)?.is_one();
    }
    let gn = 2 * v * v;
    let isomorphic: Vec<u128> = {
        let mut all = Vec::new();
        for p in Permutation::all(v) {
            for g in Word::all(v * v) {
                all.push(gi_pair_from(&g, &p).map_err(e)?.value());
            }
        }
        all
    };
    let mut gi_far = 0;
    let mut gi_far_ok = true;
    let mut verified = 0;
    while gi_far < 1000 {
        let x = word(gn, rng.bits(gn));
        let d = gi_distance(&x, v).map_err(e)?;
        if !is_far(d, gn, &eps) {
            continue;
        }
        if verified < 100 {
            let brute = isomorphic.iter().map(|&m| (m ^ x.value()).count_ones()).min().unwrap_or(u32::MAX);
            gi_far_ok &= brute == d;
            verified += 1;
        }
        gi_far += 1;
        gi_far_ok &= gi.accept_word(&x).map_err(e)? <= ratio(1, 3);
    }
    let gi_report = validate_partial_tester(
        &gi,
        &GraphIsomorphism { v },
        &gi_slice,
        ValidationMode::MonteCarlo { samples: 200_000, seed: 10 },
    )
    .map_err(e)?;

    let pass = members_ok && far_ok && pal_report.pass && gi_members_ok && gi_far_ok && gi_report.pass;
    Ok((
        pass,
        format!(
            "palindrome: {} members exact 1 ({members_ok}), 1000 brute-force far words ({far_ok}), exhaustive validation {} far, max accept {}; gi v=4: {} members ({gi_members_ok}), 1000 far words, 100 brute-forced ({gi_far_ok}), Monte Carlo validation {}",
            slice.len(),
            pal_report.far_count,
            pal_report.far_max.as_ref().map(|m| m.to_string()).unwrap_or_default(),
            gi_slice.len(),
            if gi_report.pass { "PASS" } else { "FAIL" }
        ),
    ))
}

fn run_cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ptlab")).args(args).output().map_err(e)?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let code = LinearCode::random(10, 5, 11).map_err(e)?;
    let mut rng = SeededRng::new(11);
    let cp = random_subset(&code, &mut rng, 3);
    let t = singleton_tester(Kind::Adaptive, &cp.words()[0], 2, 4, ratio(1, 8), 11).map_err(e)?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    std::fs::write(path("c.code"), print_code(&code)).map_err(e)?;
    std::fs::write(path("cp.words"), print_wordset(&cp)).map_err(e)?;
    std::fs::write(path("t.tester"), print_tester(&t)).map_err(e)?;
    let (code_path, cp_path, t_path) = (path("c.code"), path("cp.words"), path("t.tester"));
    let certify = ["certify", "adaptive", "--code", &code_path, "--subset", &cp_path, "--tester", &t_path];
    let selftest = ["selftest", "--seed", "7"];
    let mut ok = true;
    let mut sizes = Vec::new();
    for args in [&selftest[..], &certify[..]] {
        let (c1, o1) = run_cli(args)?;
        let (c2, o2) = run_cli(args)?;
        ok &= c1 == 0 && c2 == 0 && o1 == o2 && !o1.is_empty();
        sizes.push(o1.len());
    }
    Ok((ok, format!("selftest {} bytes, certify adaptive {} bytes, identical across runs", sizes[0], sizes[1])))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("dual-distance oracle", criterion_1),
        ("uniform small marginals", criterion_2),
        ("pinsker corollary", criterion_3),
        ("reader algebra", criterion_4),
        ("bijection", criterion_5),
        ("adaptive certificate soundness", criterion_6),
        ("null case", criterion_7),
        ("singleton end-to-end", criterion_8),
        ("non-adaptive certificate soundness", criterion_9),
        ("exemplars", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(r) => r,
            Err(err) => (false, format!("error: {err}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name} ({detail}) [{:.2}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
