use lame_core::atlas::{atlas_entries, table1_rows, AtlasFamily};
use lame_core::golden;

#[test]
fn enumeration_reproduces_reference_rows() {
    let mut got = table1_rows().unwrap();
    let mut want = golden::table1();
    got.sort();
    want.sort();
    assert_eq!(got.len(), 22);
    assert_eq!(got, want);
}

#[test]
fn dodecahedral_edges_never_have_distance_two() {
    for e in atlas_entries().unwrap().iter().filter(|e| e.family == AtlasFamily::Dodecahedral) {
        assert!(e.distances.unwrap().iter().all(|l| l.distance != 2), "{}", e.distance_string());
    }
}
