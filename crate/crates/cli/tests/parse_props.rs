use polyprog::polycore::{rat, UniPoly};
use polyprog::progression::Progression;
use polyprog_cli::parse::{canonical_order, parse_progression, render_canonical};
use proptest::prelude::*;

fn integral_poly() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-4i64..=4, 1..=4)
        .prop_map(|b| UniPoly::from_binomial_basis(&std::iter::once(rat(0)).chain(b.into_iter().map(rat)).collect::<Vec<_>>()))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn canonical_progression() -> impl Strategy<Value = Progression> {
    prop::collection::vec(integral_poly(), 1..=5)
        .prop_filter_map("distinct", |ps| Progression::new(ps).ok())
        .prop_map(|p| canonical_order(&p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn render_then_parse_is_identity(p in canonical_progression()) {
        let text = render_canonical(&p);
        let e = parse_progression(&text).unwrap();
        prop_assert_eq!(&e.progression, &p);
        prop_assert_eq!(e.canonical, text);
    }

    #[test]
    fn whitespace_is_insignificant(p in canonical_progression()) {
        let text = render_canonical(&p);
        let squeezed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(parse_progression(&squeezed).unwrap().progression, p);
    }
}

#[test]
fn binomial_expression_equals_monomial_expression() {
    let a = parse_progression("x, x + 2C(y,2) + y, x + 6C(y,3) + 6C(y,2) + y").unwrap();
    let b = parse_progression("x, x + y^2, x + y^3").unwrap();
    assert_eq!(a.progression, b.progression);
}
