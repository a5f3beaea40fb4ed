use ptlab::cert::{certify_adaptive, certify_nonadaptive, Report};
use ptlab::dist::{ratio, Dist};
use ptlab::exemplars::{gi_partial_tester, palindrome_partial_tester, Permutation};
use ptlab::formats::{
    parse_code, parse_dist, parse_reader, parse_tester, parse_wordset, print_code, print_dist, print_reader,
    print_tester, print_wordset,
};
use ptlab::gf2::{LinearCode, Word, WordSet};
use ptlab::rng::SeededRng;
use ptlab::tester::{random_complete_reader, random_tester, Kind};

#[test]
fn code_round_trip() {
    for seed in 0..20 {
        let code = LinearCode::random(12, 5, seed).unwrap();
        assert_eq!(parse_code(&print_code(&code)).unwrap(), code);
    }
}

#[test]
fn non_canonical_generator_is_canonicalized() {
    let code = parse_code("4 2\n1111\n0101\n").unwrap();
    assert_eq!(print_code(&code), "4 2\n1010\n0101\n");
}

#[test]
fn wordset_round_trip_and_strictness() {
    let s = LinearCode::hamming74().enumerate().unwrap();
    assert_eq!(parse_wordset(&print_wordset(&s), Some(7)).unwrap(), s);
    assert!(parse_wordset("0101\n 0101\n", None).is_err());
    assert!(parse_wordset("0101\n011\n", None).is_err());
    assert!(parse_wordset("0101\n0121\n", None).is_err());
}

#[test]
fn dist_round_trip() {
    let d = Dist::from_rationals(2, [(w("00"), ratio(1, 3)), (w("11"), ratio(2, 3))]).unwrap();
    assert_eq!(parse_dist(&print_dist(&d)).unwrap(), d);
}

#[test]
fn reader_round_trip() {
    let mut rng = SeededRng::new(9);
    for _ in 0..20 {
        let r = random_complete_reader(9, 4, &mut rng).unwrap();
        assert_eq!(parse_reader(&print_reader(&r)).unwrap(), r);
    }
}

#[test]
fn tester_round_trip() {
    for kind in [Kind::Adaptive, Kind::NonAdaptive] {
        let t = random_tester(kind, 8, 3, 5, ratio(1, 8), 4).unwrap();
        assert_eq!(parse_tester(&print_tester(&t)).unwrap(), t);
    }
    let pal = palindrome_partial_tester(24, 5, &ratio(1, 8), 1).unwrap();
    assert_eq!(parse_tester(&print_tester(&pal)).unwrap(), pal);
    let gi = gi_partial_tester(&Permutation::random(4, 3), &ratio(1, 8), 1).unwrap();
    assert_eq!(parse_tester(&print_tester(&gi)).unwrap(), gi);
}

#[test]
fn certificate_reports_round_trip() {
    let code = LinearCode::random(9, 4, 2).unwrap();
    let all = code.enumerate().unwrap();
    let cp = WordSet::new(9, all.words()[..5].iter().copied()).unwrap();
    let tau = ratio(1, 8);
    let a = random_tester(Kind::Adaptive, 9, 2, 3, tau.clone(), 1).unwrap();
    let text = certify_adaptive(&code, &cp, &a, &tau).unwrap().to_report().render();
    assert_eq!(Report::parse(&text).unwrap().render(), text);
    let n = random_tester(Kind::NonAdaptive, 9, 2, 3, tau.clone(), 1).unwrap();
    let text = certify_nonadaptive(&code, &cp, &n, &tau).unwrap().to_report().render();
    assert_eq!(Report::parse(&text).unwrap().render(), text);
}

#[test]
fn tampered_report_is_rejected() {
    let code = LinearCode::hamming74();
    let all = code.enumerate().unwrap();
    let tau = ratio(1, 8);
    let t = random_tester(Kind::Adaptive, 7, 2, 2, tau.clone(), 1).unwrap();
    let text = certify_adaptive(&code, &all, &t, &tau).unwrap().to_report().render();
    let forged = text.replace(" PASS", " FAIL");
    assert!(Report::parse(&forged).is_err());
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}
