//! Small reference datasets used by tests, examples and documentation.

use crate::data::CategoricalDataset;

/// Ten objects over six categorical attributes (3, 4, 5, 4, 2 and 3 observed
/// categories). The classic worked example for the information-theoretic
/// dissimilarity.
///
/// The published dissimilarity table for this data is reproduced by the
/// formula except for some entries in rows x1 and x6. The formula gives
/// (x1,x2) = 4.4576 where the table prints 4.3518, and (x1,x4) = 1.5334,
/// (x1,x6) = 1.0262 where the table prints 1.4107 for both, although x4 and
/// x6 differ from x1 at different numbers of attributes. Tests assert the
/// formula values and treat those table entries as errata.
pub const WORKED_EXAMPLE_CSV: &str = "\
A1,A2,A3,A4,A5,A6
a1,d2,b3,e4,a5,c6
d1,a2,a3,b4,c5,a6
d1,d2,d3,c4,c5,a6
b1,e2,c3,e4,a5,c6
a1,d2,a3,a4,a5,e6
a1,a2,c3,e4,a5,c6
b1,e2,e3,e4,a5,c6
d1,c2,d3,e4,a5,c6
d1,c2,d3,e4,a5,c6
d1,d2,b3,b4,c5,a6
";

pub fn worked_example() -> CategoricalDataset {
    crate::data::load_csv(WORKED_EXAMPLE_CSV.as_bytes(), true).expect("fixture parses")
}
