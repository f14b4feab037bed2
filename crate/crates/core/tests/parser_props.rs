mod common;

use common::{poly_from, terms, xring};
use proptest::prelude::*;
use slicegb::formats::{read_ideal, write_ideal};
use slicegb::text::{parse_polynomial, print_polynomial, ParseErrorKind};
use slicegb::TermOrder;

fn order(k: usize) -> TermOrder {
    [
        TermOrder::DegRevLex,
        TermOrder::Lex,
        TermOrder::DegLex,
        TermOrder::XiDegRev(1),
    ][k]
        .clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_polynomials_parse_back(t in terms(3, 6, 6), k in 0usize..4) {
        let r = xring(3);
        let f = poly_from(&r, &t);
        let text = print_polynomial(&order(k), &f);
        prop_assert_eq!(parse_polynomial(&r, &text).unwrap(), f);
    }

    #[test]
    fn ideal_files_round_trip(gens in prop::collection::vec(terms(3, 4, 4), 1..=4), k in 0usize..4) {
        let r = xring(3);
        let polys: Vec<_> = gens.iter().map(|t| poly_from(&r, t)).collect();
        let file = read_ideal(&write_ideal(&r, &order(k), &polys)).unwrap();
        prop_assert_eq!(file.order, Some(order(k)));
        prop_assert_eq!(file.generators, polys);
    }

    #[test]
    fn stray_characters_are_located(t in terms(3, 3, 4), at in any::<prop::sample::Index>(), k in 0usize..4) {
        let r = xring(3);
        let text = print_polynomial(&order(k), &poly_from(&r, &t));
        let boundaries: Vec<usize> = (0..=text.len()).filter(|&i| text.is_char_boundary(i)).collect();
        let pos = boundaries[at.index(boundaries.len())];
        let bad = format!("{}@{}", &text[..pos], &text[pos..]);
        let e = parse_polynomial(&r, &bad).unwrap_err();
        prop_assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('@'));
        prop_assert_eq!((e.span.start, e.span.end), (pos, pos + 1));
        // the same error, located inside a file
        let file = format!("QQ[x1,x2,x3]\n\n  {bad}\n");
        let fe = read_ideal(&file).unwrap_err();
        prop_assert_eq!(fe.line, Some(3));
        let span = fe.span.unwrap();
        prop_assert_eq!(&file[span.start..span.end], "@");
    }
}

#[test]
fn grammar_examples() {
    let r = common::ring(&["x", "y", "z"]);
    let p = |s: &str| parse_polynomial(&r, s).unwrap();
    assert_eq!(p("(x - y)^2"), p("x^2 - 2*x*y + y^2"));
    assert_eq!(p("-1/2*x + 3/6*x"), p("0"));
    assert!(matches!(
        parse_polynomial(&r, "2 x").unwrap_err().kind,
        ParseErrorKind::UnexpectedToken { .. }
    ));
    assert!(matches!(
        parse_polynomial(&r, "x/y").unwrap_err().kind,
        ParseErrorKind::DivisionByNonConstant
    ));
    assert!(matches!(
        parse_polynomial(&r, "x/0").unwrap_err().kind,
        ParseErrorKind::DivisionByZero | ParseErrorKind::DivisionByNonConstant
    ));
    assert!(matches!(
        parse_polynomial(&r, "w + 1").unwrap_err().kind,
        ParseErrorKind::UnknownVariable(_)
    ));
    let deep = format!("{}x{}", "(".repeat(1000), ")".repeat(1000));
    assert!(matches!(
        parse_polynomial(&r, &deep).unwrap_err().kind,
        ParseErrorKind::NestingTooDeep
    ));
}
