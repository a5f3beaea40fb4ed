//! Text file formats. Parsers are strict: single spaces between fields, no
//! leading or trailing whitespace, `\n` line endings, and an optional final
//! newline. Errors carry 1-based line numbers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use sha2::{Digest, Sha256};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::gf2::{IndexSet, LinearCode, Word, WordSet};
use crate::reader::Reader;
use crate::tester::{Access, Kind, Predicate, Rule, Tester};

fn lines(text: &str) -> Vec<&str> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        Vec::new()
    } else {
        body.split('\n').collect()
    }
}

fn at(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(line, other.to_string()),
    }
}

fn uint(tok: &str, line: usize) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|c| c.is_ascii_digit()) || (tok.len() > 1 && tok.starts_with('0')) {
        return Err(Error::parse(line, format!("expected a non-negative integer, found {tok:?}")));
    }
    tok.parse().map_err(|_| Error::parse(line, format!("integer {tok:?} is too large")))
}

fn fields(text: &str, count: usize, line: usize) -> Result<Vec<&str>> {
    let f: Vec<&str> = text.split(' ').collect();
    if f.len() != count || f.iter().any(|t| t.is_empty()) {
        return Err(Error::parse(line, format!("expected {count} fields separated by single spaces")));
    }
    Ok(f)
}

fn word(tok: &str, line: usize) -> Result<Word> {
    tok.parse().map_err(at(line))
}

/// Parses `p/q` or `p` (non-negative, `q > 0`).
pub fn parse_rational(tok: &str) -> Result<BigRational> {
    let bad = || Error::InvalidParameter(format!("expected a rational p/q, found {tok:?}"));
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
    let (p, q) = tok.split_once('/').unwrap_or((tok, "1"));
    if !digits(p) || !digits(q) {
        return Err(bad());
    }
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// SHA-256 of `text`, lowercase hex.
pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn parse_code(text: &str) -> Result<LinearCode> {
    let ls = lines(text);
    let header = ls.first().ok_or_else(|| Error::parse(1, "missing header `n k`"))?;
    let h = fields(header, 2, 1)?;
    let (n, k) = (uint(h[0], 1)?, uint(h[1], 1)?);
    if k == 0 {
        return Err(Error::parse(1, "k must be positive"));
    }
    if ls.len() != k + 1 {
        return Err(Error::parse(ls.len().min(k + 1) + 1, format!("expected {k} generator rows, found {}", ls.len() - 1)));
    }
    let mut rows = Vec::with_capacity(k);
    for (i, l) in ls[1..].iter().enumerate() {
        let w = word(l, i + 2)?;
        if w.len() != n {
            return Err(Error::parse(i + 2, format!("row has length {}, expected {n}", w.len())));
        }
        rows.push(w);
    }
    let code = LinearCode::from_generator(&rows).map_err(at(2))?;
    if code.k() != k {
        return Err(Error::parse(2, format!("rows are linearly dependent (rank {} < {k})", code.k())));
    }
    Ok(code)
}

/// Canonical form: the reduced row-echelon generator.
pub fn print_code(code: &LinearCode) -> String {
    let mut s = format!("{} {}\n", code.n(), code.k());
    for r in code.generator() {
        s.push_str(&format!("{r}\n"));
    }
    s
}

/// Parses a word list. `n` fixes the length when the file may be empty.
pub fn parse_wordset(text: &str, n: Option<usize>) -> Result<WordSet> {
    let ls = lines(text);
    let mut words = Vec::with_capacity(ls.len());
    let mut len = n;
    for (i, l) in ls.iter().enumerate() {
        let w = word(l, i + 1)?;
        match len {
            Some(m) if m != w.len() => {
                return Err(Error::parse(i + 1, format!("word has length {}, expected {m}", w.len())))
            }
            _ => len = Some(w.len()),
        }
        words.push(w);
    }
    let len = len.ok_or_else(|| Error::parse(1, "empty word list with unknown length"))?;
    let mut seen = std::collections::BTreeSet::new();
    for (i, w) in words.iter().enumerate() {
        if !seen.insert(*w) {
            return Err(Error::parse(i + 1, format!("duplicate word {w}")));
        }
    }
    WordSet::new(len, words)
}

pub fn print_wordset(s: &WordSet) -> String {
    s.iter().map(|w| format!("{w}\n")).collect()
}

pub fn parse_dist(text: &str) -> Result<Dist> {
    let ls = lines(text);
    let header = ls.first().ok_or_else(|| Error::parse(1, "missing header `m s`"))?;
    let h = fields(header, 2, 1)?;
    let (m, s) = (uint(h[0], 1)?, uint(h[1], 1)?);
    if ls.len() != s + 1 {
        return Err(Error::parse(1, format!("header announces {s} entries, found {}", ls.len() - 1)));
    }
    let mut weights = Vec::with_capacity(s);
    let mut seen = BTreeMap::new();
    for (i, l) in ls[1..].iter().enumerate() {
        let line = i + 2;
        let f = fields(l, 2, line)?;
        let w = word(f[0], line)?;
        if w.len() != m {
            return Err(Error::parse(line, format!("word has length {}, expected {m}", w.len())));
        }
        if seen.insert(w, ()).is_some() {
            return Err(Error::parse(line, format!("duplicate word {w}")));
        }
        let p = parse_rational(f[1]).map_err(at(line))?;
        if !p.is_positive() {
            return Err(Error::parse(line, "probabilities must be positive"));
        }
        weights.push((w, p));
    }
    Dist::from_rationals(m, weights).map_err(at(ls.len()))
}

pub fn print_dist(d: &Dist) -> String {
    let mut s = format!("{} {}\n", d.word_len(), d.support_size());
    for w in d.support() {
        s.push_str(&format!("{w} {}\n", d.prob(w)));
    }
    s
}

/// Reader file: line 1 holds `n`, line 2 the preorder tokens.
pub fn parse_reader(text: &str) -> Result<Reader> {
    let ls = lines(text);
    if ls.len() != 2 {
        return Err(Error::parse(ls.len().min(2) + 1, "expected two lines: `n` and the preorder tokens"));
    }
    let n = uint(ls[0], 1)?;
    Reader::parse_preorder(n, ls[1]).map_err(at(2))
}

pub fn print_reader(r: &Reader) -> String {
    format!("{}\n{}\n", r.n(), r.to_preorder())
}

pub fn parse_tester(text: &str) -> Result<Tester> {
    let ls = lines(text);
    let header = ls
        .first()
        .ok_or_else(|| Error::parse(1, "missing header `nonadaptive|adaptive n q m epsilon`"))?;
    let h = fields(header, 5, 1)?;
    let kind = match h[0] {
        "nonadaptive" => Kind::NonAdaptive,
        "adaptive" => Kind::Adaptive,
        other => return Err(Error::parse(1, format!("unknown tester kind {other:?}"))),
    };
    let (n, q, m) = (uint(h[1], 1)?, uint(h[2], 1)?, uint(h[3], 1)?);
    let epsilon = parse_rational(h[4]).map_err(at(1))?;
    if ls.len() != 1 + 3 * m {
        return Err(Error::parse(ls.len() + 1, format!("expected {m} rule blocks of three lines")));
    }
    let mut rules = Vec::with_capacity(m);
    for b in 0..m {
        let base = 2 + 3 * b;
        let weight = parse_rational(ls[base - 1]).map_err(at(base))?;
        let access = match kind {
            Kind::NonAdaptive => {
                let toks = fields(ls[base], q, base + 1)?;
                let idx = toks.iter().map(|t| uint(t, base + 1)).collect::<Result<Vec<_>>>()?;
                Access::Query(IndexSet::new(n, idx).map_err(at(base + 1))?)
            }
            Kind::Adaptive => Access::Reader(Reader::parse_preorder(n, ls[base]).map_err(at(base + 1))?),
        };
        let predicate = Predicate::parse_line(q, ls[base + 1]).map_err(at(base + 2))?;
        rules.push(Rule { weight, access, predicate });
    }
    Tester::new(kind, n, q, epsilon, rules).map_err(at(1))
}

pub fn print_tester(t: &Tester) -> String {
    t.to_string()
}

/// Integer weights normalized to rationals, for building testers by hand.
pub fn normalized(weights: &[u64]) -> Vec<BigRational> {
    let total: u64 = weights.iter().sum();
    weights
        .iter()
        .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ratio;

    #[test]
    fn code_round_trip_and_errors() {
        let text = "7 4\n1000110\n0100101\n0010011\n0001111\n";
        let code = parse_code(text).unwrap();
        assert_eq!(code, LinearCode::hamming74());
        assert_eq!(print_code(&code), text);
        assert_eq!(parse_code("3 1\n1011\n"), Err(Error::parse(2, "row has length 4, expected 3")));
        assert!(matches!(parse_code("3  1\n101\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_code("3 2\n101\n101\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_code("3 1\n1x1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_code("3 1\n101 \n").is_err());
    }

    #[test]
    fn wordset_round_trip() {
        let s = parse_wordset("0110\n0001\n", None).unwrap();
        assert_eq!(print_wordset(&s), "0001\n0110\n");
        assert!(matches!(parse_wordset("01\n011\n", None), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_wordset("01\n01\n", None), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_wordset("", Some(3)).unwrap().len(), 0);
    }

    #[test]
    fn dist_round_trip() {
        let text = "2 2\n00 1/4\n11 3/4\n";
        let d = parse_dist(text).unwrap();
        assert_eq!(d.prob(&"11".parse().unwrap()), ratio(3, 4));
        assert_eq!(print_dist(&d), text);
        assert!(parse_dist("2 2\n00 1/4\n11 1/4\n").is_err());
        assert!(matches!(parse_dist("2 1\n00 0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn reader_round_trip_is_byte_identical() {
        let text = "4\n2 1 * * 3 * 4 * *\n";
        assert_eq!(print_reader(&parse_reader(text).unwrap()), text);
        assert!(matches!(parse_reader("4\n2 2 * * *\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn tester_round_trip() {
        let text = "nonadaptive 4 2 2 1/8\n1/3\n1 2\n1001\n2/3\n3 4\npairs 1:2\n";
        let t = parse_tester(text).unwrap();
        assert_eq!(print_tester(&t), text);
        let text = "adaptive 3 2 1 1/4\n1\n2 1 * * 3 * *\n0001\n";
        let t = parse_tester(text).unwrap();
        assert_eq!(print_tester(&t), text);
        assert!(matches!(
            parse_tester("adaptive 3 2 1 1/4\n1\n2 1 * * *\n0001\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_tester("nonadaptive 3 2 1 1/4\n1\n1 1\n0001\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/8").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("2").unwrap(), ratio(2, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("-1/2").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
