use bgw_core::exactmat::{gram, matches_affine, SignedMatrix};
use bgw_core::groupmat::{group_from_signed, verify_bgw};
use bgw_core::scheme::{class_identities, extract_bw, scheme_from_bw, verify_axioms};
use bgw_core::seeds::{assemble_mathon, seed_matrices, MathonVariant};
use proptest::prelude::*;

fn mathon(which: MathonVariant) -> SignedMatrix {
    assemble_mathon(&seed_matrices(), which).unwrap()
}

fn signed(m: &SignedMatrix, rows: &[bool], cols: &[bool]) -> SignedMatrix {
    let s = |b: bool| if b { -1 } else { 1 };
    SignedMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        s(rows[i]) * s(cols[j]) * m.get(i, j)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn signed_variants_give_schemes(
        rows in prop::collection::vec(any::<bool>(), 19),
        cols in prop::collection::vec(any::<bool>(), 19),
        use_v in any::<bool>(),
    ) {
        let base = mathon(if use_v { MathonVariant::V } else { MathonVariant::U });
        let w = signed(&base, &rows, &cols);
        let s = scheme_from_bw(&w, 19, 9, 4).unwrap();
        prop_assert!(verify_axioms(&s).unwrap().passed());
        prop_assert!(class_identities(&s, 19, 9).unwrap().passed());
        let back = extract_bw(&s).unwrap();
        prop_assert!(verify_bgw(&group_from_signed(&back).unwrap(), 19, 9, 4).unwrap().passed());
    }
}

#[test]
fn level_one_signed_variant() {
    let x = bgw_core::family::build_x(1).unwrap().x;
    let rows: Vec<bool> = (0..181).map(|i| i % 7 == 3).collect();
    let cols: Vec<bool> = (0..181).map(|i| i % 5 == 1).collect();
    let w = signed(&x, &rows, &cols);
    let s = scheme_from_bw(&w, 181, 81, 36).unwrap();
    assert_eq!(s.valencies(), vec![1, 1, 360, 81, 81, 200]);
    assert!(verify_axioms(&s).unwrap().passed());
    assert!(class_identities(&s, 181, 81).unwrap().passed());
}

#[test]
fn both_mathon_variants_differ_but_certify() {
    let (u, v) = (mathon(MathonVariant::U), mathon(MathonVariant::V));
    assert_ne!(u, v);
    for m in [u, v] {
        assert!(matches_affine(&gram(&m).unwrap(), 9, 0));
    }
}
