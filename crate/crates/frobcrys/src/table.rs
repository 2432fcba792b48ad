//! Dimension tables and their CSV form.

use serde::{Deserialize, Serialize};

pub const CSV_HEADER: [&str; 5] = ["degree", "i", "dim", "map_rank", "nilpotent"];

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
pub struct TableRow {
    pub degree: i64,
    pub i: usize,
    pub dim: usize,
    pub map_rank: Option<usize>,
    pub nilpotent: Option<bool>,
}

impl From<&frobcrys_core::conegr::DimRow> for TableRow {
    fn from(r: &frobcrys_core::conegr::DimRow) -> TableRow {
        TableRow { degree: r.degree, i: r.i, dim: r.dim, map_rank: r.map_rank, nilpotent: r.nilpotent }
    }
}

/// Header line first, then one line per row; absent values are empty fields.
pub fn to_csv(rows: &[TableRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn from_csv(text: &str) -> Result<Vec<TableRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}
