use bgw_core::dmfile::MatrixFile;
use bgw_core::exactmat::abs_entrywise;
use bgw_core::family::{build_x, parameters, verify_lemma33, verify_theorem};
use bgw_core::groupmat::is_symmetric_design;
use bgw_core::Error;

#[test]
fn level_one_end_to_end() {
    let inst = build_x(1).unwrap();
    let thm = verify_theorem(&inst).unwrap();
    assert_eq!(thm.verdict_line(), "BW(181,81,36): PASS");
    assert!(verify_lemma33(&inst).unwrap().passed());
    assert!(is_symmetric_design(&abs_entrywise(&inst.x).unwrap(), 81, 36).unwrap());

    let file = MatrixFile::from_signed(inst.x.clone());
    let back = MatrixFile::parse(&file.to_text())
        .unwrap()
        .to_signed()
        .unwrap();
    assert_eq!(back, inst.x);
}

#[test]
fn construction_is_deterministic() {
    let a = MatrixFile::from_signed(build_x(1).unwrap().x).to_text();
    let b = MatrixFile::from_signed(build_x(1).unwrap().x).to_text();
    assert_eq!(a, b);
}

#[test]
fn parameters_satisfy_the_design_count() {
    for m in 1..=3 {
        let ((vw, kw, lw), (v, k, l)) = parameters(m);
        assert_eq!(lw * (vw as u64 - 1), kw * (kw - 1));
        assert_eq!(l * (v as u64 - 1), k * (k - 1));
        assert_eq!(v, 1 + 18 * (9usize.pow(m + 1) - 1) / 8);
    }
}

#[test]
fn level_zero_is_rejected() {
    assert!(matches!(build_x(0), Err(Error::InvalidParameter(_))));
}
