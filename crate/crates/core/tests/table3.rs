use lame_core::golden;
use lame_core::monodromy::table3_rows;

#[test]
fn group_table_matches_reference() {
    assert_eq!(table3_rows().unwrap(), golden::table3());
}
