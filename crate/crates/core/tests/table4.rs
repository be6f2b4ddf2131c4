use lame_core::atlas::AtlasFamily;
use lame_core::dessin::{passport_for, passport_pattern, Form, TriangleGroup};
use lame_core::golden;
use lame_core::Rational;

#[test]
fn icosahedral_pattern_matches_reference() {
    let reference = golden::table4();
    let derived = passport_pattern(Rational::new(3, 10), AtlasFamily::Icosahedral, Form::Elliptic).unwrap();
    assert_eq!(derived, reference);
    assert_eq!(derived.rows(), ["2^{30k+9}", "3^{20k+6}", "5^{10k+2} (10k+8)"]);
}

#[test]
fn pattern_predicts_later_terms() {
    let reference = golden::table4();
    let group = TriangleGroup::new(5).unwrap();
    for k in 0..6 {
        let computed = passport_for(Rational::new(3, 10) + k as i64, group, Form::Elliptic).unwrap();
        assert_eq!(computed.len(), 1);
        assert_eq!(computed[0].fibers, reference.instantiate(k).unwrap().fibers);
        assert_eq!(computed[0].genus, 1);
    }
}
