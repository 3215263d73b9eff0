//! The two five- and four-element tables bundled under `examples/`.

use crate::table::HyperTable;
use crate::tablefile::parse_table_file;

pub const TABLE1_HGT: &str = include_str!("../examples/table1.hgt");
pub const TABLE2_HGT: &str = include_str!("../examples/table2.hgt");

pub fn table1() -> HyperTable {
    parse_table_file(TABLE1_HGT).expect("bundled table1.hgt is valid")
}

pub fn table2() -> HyperTable {
    parse_table_file(TABLE2_HGT).expect("bundled table2.hgt is valid")
}
