//! Bundled string links and reference data.
//!
//! `A` is surgery along the degree 2 linear tree `T(121)` and `B` along the
//! degree 5 tree `T(121221)`; the barred links are their concordance
//! inverses. `ABAB` stands for the product `A B Abar Bbar`.

use crate::error::{Error, Result};
use crate::stringlink::MorseWord;

const A: &str = include_str!("../fixtures/A.morse");
const ABAR: &str = include_str!("../fixtures/Abar.morse");
const B: &str = include_str!("../fixtures/B.morse");
const BBAR: &str = include_str!("../fixtures/Bbar.morse");

/// Degree 8 part of the first longitude of `A B Abar Bbar`, as printed by
/// [`TruncSeries::format`](crate::TruncSeries::format).
pub const ABAB_LONGITUDE1_DEG8: &str = include_str!("../fixtures/ABAB_longitude1_deg8.txt");

pub const NAMES: [&str; 5] = ["A", "Abar", "B", "Bbar", "ABAB"];

pub fn fixture(name: &str) -> Result<MorseWord> {
    let text = match name {
        "A" => A,
        "Abar" => ABAR,
        "B" => B,
        "Bbar" => BBAR,
        "ABAB" => {
            let parts = ["A", "B", "Abar", "Bbar"].map(fixture);
            let mut out = MorseWord::trivial(2);
            for p in parts {
                out = out.stack(&p?)?;
            }
            return Ok(out);
        }
        _ => return Err(Error::Malformed(format!("unknown fixture `{name}`"))),
    };
    MorseWord::parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treegen::{tree_to_morse, OIndex};

    #[test]
    fn fixtures_parse_and_match_their_trees() {
        for name in NAMES {
            fixture(name).unwrap();
        }
        assert_eq!(fixture("A").unwrap(), tree_to_morse(&OIndex::parse(2, "121").unwrap()));
        assert_eq!(fixture("B").unwrap(), tree_to_morse(&OIndex::parse(2, "121221").unwrap()));
        assert_eq!(fixture("Abar").unwrap(), fixture("A").unwrap().concordance_inverse());
        assert_eq!(fixture("Bbar").unwrap(), fixture("B").unwrap().concordance_inverse());
        assert!(fixture("C").is_err());
    }

    #[test]
    fn table_has_72_terms_of_degree_8() {
        let s = crate::Series::parse(2, 8, ABAB_LONGITUDE1_DEG8).unwrap();
        assert_eq!(s.constant(), &num_bigint::BigInt::from(1));
        assert_eq!(s.nonzero_count(), 73);
        assert!(s.terms().all(|(m, _)| m.degree() == 0 || m.degree() == 8));
    }
}
