//! Reference tables bundled with the crate.

use crate::atlas::Table1Row;
use crate::counting::Table2Row;
use crate::dessin::PassportPattern;
use crate::monodromy::Table3Row;

const TABLE1: &str = include_str!("../data/table1.json");
const TABLE2: &str = include_str!("../data/table2.json");
const TABLE3: &str = include_str!("../data/table3.json");
const TABLE4: &str = include_str!("../data/table4.json");

pub fn table1() -> Vec<Table1Row> {
    serde_json::from_str(TABLE1).expect("bundled table1.json is valid")
}

pub fn table2() -> Vec<Table2Row> {
    serde_json::from_str(TABLE2).expect("bundled table2.json is valid")
}

pub fn table3() -> Vec<Table3Row> {
    serde_json::from_str(TABLE3).expect("bundled table3.json is valid")
}

pub fn table4() -> PassportPattern {
    serde_json::from_str(TABLE4).expect("bundled table4.json is valid")
}
