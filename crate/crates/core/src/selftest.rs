//! Quick invariant suite behind `ptlab selftest`. Every check is seeded and
//! prints only exact or deterministic values, so the output is identical
//! across runs.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cert::{certify_adaptive, certify_nonadaptive};
use crate::dist::{ratio, Dist, TOLERANCE};
use crate::error::Result;
use crate::exemplars::{palindrome_distance, palindrome_partial_tester, palindrome_slice_members};
use crate::gf2::{IndexSet, LinearCode, Word, WordSet};
use crate::reader::{reader_discerning_tv, Reader};
use crate::rng::SeededRng;
use crate::tester::{random_tester, singleton_tester, to_f64, Access, Kind, Predicate, Rule, Tester};

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((pass, detail)) => Check { name, pass, detail },
        Err(e) => Check { name, pass: false, detail: format!("error: {e}") },
    }
}

fn brute_dual_distance(code: &LinearCode) -> Result<usize> {
    let dual = code.dual();
    if dual.k() == 0 {
        return Ok(code.n() + 1);
    }
    let words = dual.enumerate()?;
    Ok(words.iter().map(|w| w.weight() as usize).filter(|&w| w > 0).min().unwrap_or(code.n() + 1))
}

fn random_subset(code: &LinearCode, rng: &mut SeededRng) -> Result<WordSet> {
    let all = code.enumerate()?;
    let size = 1 + rng.below(all.len() as u64) as usize;
    let picks = rng.sample_distinct(all.len(), size);
    WordSet::from_iter_dedup(code.n(), picks.into_iter().map(|p| all.words()[p]))
}

pub fn run(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();

    out.push(check("dual_distance_oracle", || {
        let mut agree = 0;
        for s in 0..10 {
            let code = LinearCode::random(10, 5, seed.wrapping_add(s))?;
            if code.dual_distance()? == brute_dual_distance(&code)? {
                agree += 1;
            }
        }
        Ok((agree == 10, format!("{agree}/10 codes")))
    }));

    out.push(check("uniform_marginals_hamming", || {
        let code = LinearCode::hamming74();
        let u = Dist::uniform_over(&code.enumerate()?)?;
        let mut ok = 0;
        for mask in 0u128..128 {
            if mask.count_ones() <= 3 {
                let j = IndexSet::new(7, (1..=7).filter(|i| mask >> (i - 1) & 1 == 1))?;
                if u.marginal(&j)? == Dist::uniform_cube(j.len())? {
                    ok += 1;
                }
            }
        }
        Ok((ok == 64, format!("{ok}/64 index sets uniform")))
    }));

    out.push(check("pinsker_corollary", || {
        let mut rng = SeededRng::new(seed);
        let mut worst = f64::INFINITY;
        for _ in 0..200 {
            let m = 1 + rng.below(4) as usize;
            let counts = Word::all(m).map(|w| (w, num_bigint::BigUint::from(rng.below(5)))).collect::<Vec<_>>();
            let Ok(d) = Dist::from_counts(m, counts) else { continue };
            let tv = to_f64(&d.tv_to_uniform());
            worst = worst.min(m as f64 - 2.0 * tv * tv - d.entropy());
        }
        Ok((worst >= -TOLERANCE, "200 random distributions".into()))
    }));

    out.push(check("reader_algebra", || {
        let mut rng = SeededRng::new(seed);
        let mut ok = true;
        for _ in 0..20 {
            let r = crate::tester::random_complete_reader(8, 3, &mut rng)?;
            let x = Word::from_value(8, rng.bits(8))?;
            let y = r.read(&x)?.values;
            ok &= r.graft(&Reader::stop(8), &y)? == r;
            let t = crate::tester::random_complete_reader(8, 2, &mut rng)?;
            let g = r.padded_graft(&t, &y, 2)?;
            ok &= g.contains(&r)?;
            let cp = WordSet::from_iter_dedup(8, (0..5).map(|_| Word::from_value(8, rng.bits(8)).unwrap()))?;
            let j = IndexSet::empty(8);
            ok &= reader_discerning_tv(&g, &j, &Word::empty(), &cp)? >= reader_discerning_tv(&r, &j, &Word::empty(), &cp)?;
        }
        Ok((ok, "20 random graft cases".into()))
    }));

    out.push(check("certificates_sound", || {
        let mut rng = SeededRng::new(seed);
        let mut ok = 0;
        for s in 0..10 {
            let code = LinearCode::random(8, 4, seed.wrapping_add(s))?;
            let cp = random_subset(&code, &mut rng)?;
            let target = cp.words()[0];
            let a = singleton_tester(Kind::Adaptive, &target, 2, 3, ratio(1, 8), s)?;
            let n = singleton_tester(Kind::NonAdaptive, &target, 2, 3, ratio(1, 8), s)?;
            let ca = certify_adaptive(&code, &cp, &a, &ratio(1, 8))?;
            let cn = certify_nonadaptive(&code, &cp, &n, &ratio(1, 8))?;
            if ca.pass() && cn.pass() {
                ok += 1;
            }
        }
        Ok((ok == 10, format!("{ok}/10 triples")))
    }));

    out.push(check("null_case", || {
        let code = LinearCode::hamming74();
        let all = code.enumerate()?;
        let t = random_tester(Kind::Adaptive, 7, 2, 3, ratio(1, 8), seed)?;
        let ca = certify_adaptive(&code, &all, &t, &ratio(1, 8))?;
        let t = random_tester(Kind::NonAdaptive, 7, 2, 3, ratio(1, 8), seed)?;
        let cn = certify_nonadaptive(&code, &all, &t, &ratio(1, 8))?;
        Ok((ca.bound == 4.0 && cn.bound == 4.0, format!("bounds {} {}", ca.bound, cn.bound)))
    }));

    out.push(check("hamming_singleton", || {
        let code = LinearCode::hamming74();
        let zero = Word::zeros(7)?;
        let rule = Rule {
            weight: BigRational::one(),
            access: Access::Reader(Reader::fixed_order(7, &[1, 2])?),
            predicate: Predicate::only(&Word::zeros(2)?)?,
        };
        let t = Tester::new(Kind::Adaptive, 7, 2, ratio(1, 8), vec![rule])?;
        let c = certify_adaptive(&code, &WordSet::singleton(zero), &t, &ratio(1, 8))?;
        let tvs_ok = c.branches.iter().all(|b| b.chunk_tv == ratio(3, 4));
        Ok((tvs_ok && c.bound == 1.75 && c.actual == 0.0, format!("bound {}", c.bound)))
    }));

    out.push(check("palindrome_tester", || {
        let (n, i) = (12, 3);
        let eps = ratio(1, 4);
        let t = palindrome_partial_tester(n, i, &eps, seed)?;
        let members = palindrome_slice_members(n, i)?;
        let mut min_member = BigRational::from_integer(1.into());
        for m in members.iter() {
            min_member = min_member.min(t.accept_word(m)?);
        }
        let mut far_max = BigRational::zero();
        for x in Word::all(n) {
            if crate::tester::is_far(palindrome_distance(&x)?, n, &eps) {
                far_max = far_max.max(t.accept_word(&x)?);
            }
        }
        let pass = min_member == ratio(1, 1) && far_max <= ratio(1, 3);
        Ok((pass, format!("member_min {min_member} far_max {far_max}")))
    }));

    out
}

pub fn render(checks: &[Check]) -> String {
    let mut s = format!("SELFTEST {}\n", crate::cert::VERSION);
    for c in checks {
        s.push_str(&format!("CHECK {} {} {}\n", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail));
    }
    let all = checks.iter().all(|c| c.pass);
    s.push_str(&format!("RESULT {}\n", if all { "PASS" } else { "FAIL" }));
    s
}
