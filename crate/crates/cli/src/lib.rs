//! Input handling and the reproduction checks behind the `slink` binary.

use std::fs;

use milnor::diagalg::{commutator_check, SpanOptions, Verdict};
use milnor::error::{Error, Result};
use milnor::fixtures::{fixture, ABAB_LONGITUDE1_DEG8};
use milnor::stringlink::{longitude_series, milnor_mu};
use milnor::treegen::{enumerate_generators, milnor_rank, Mode};
use milnor::{Braid, MorseWord, Series};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Generator listings for degrees 1 to 7, one degree per line.
pub const GENS_GOLDEN: &str = include_str!("../golden/gens_concordance.txt");

/// Reads `braid:<word>`, `fixture:<name>`, `morse:<text>` or a path to a
/// Morse file.
pub fn parse_link(spec: &str) -> Result<MorseWord> {
    if let Some(word) = spec.strip_prefix("braid:") {
        return MorseWord::from_braid(&Braid::parse(word, None)?);
    }
    if let Some(name) = spec.strip_prefix("fixture:") {
        return fixture(name);
    }
    if let Some(text) = spec.strip_prefix("morse:") {
        return MorseWord::parse(&text.replace(';', "\n"));
    }
    let text = fs::read_to_string(spec).map_err(|e| Error::Malformed(format!("cannot read `{spec}`: {e}")))?;
    MorseWord::parse(&text)
}

/// `123` or, for more than nine strands, `1,10,3`.
pub fn parse_index(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Token { token: text.to_string() };
    let parts: Vec<usize> = if text.contains(',') {
        text.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    } else {
        text.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_>>()?
    };
    if parts.is_empty() {
        return Err(bad());
    }
    Ok(parts)
}

pub fn format_index(index: &[usize]) -> String {
    if index.iter().all(|&i| i < 10) {
        index.iter().map(|i| i.to_string()).collect()
    } else {
        index.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        format!("{}: {} ({})", self.name, if self.pass { "PASS" } else { "FAIL" }, self.detail)
    }
}

pub const BORROMEAN: &str = "s1 s1 s2 s2 S1 S1 S2 S2";

/// `mu(123) = ±1` with all pairwise linking numbers zero.
pub fn check_borromean() -> Result<Check> {
    let link = MorseWord::from_braid(&Braid::parse(BORROMEAN, None)?)?;
    let triple = milnor_mu(&link, &[1, 2, 3])?;
    let pairs = [[1, 2], [1, 3], [2, 3]]
        .iter()
        .map(|p| milnor_mu(&link, p))
        .collect::<Result<Vec<BigInt>>>()?;
    Ok(Check {
        name: "borromean",
        pass: triple.abs().is_one() && pairs.iter().all(Zero::is_zero),
        detail: format!("mu(123) = {triple}, mu(12) mu(13) mu(23) = {} {} {}", pairs[0], pairs[1], pairs[2]),
    })
}

/// First longitude of `A B Abar Bbar` through degree 8 against the table.
pub fn check_table() -> Result<Check> {
    let link = fixture("ABAB")?;
    let got = longitude_series(&link, 1, 8)?;
    let want = Series::parse(2, 8, ABAB_LONGITUDE1_DEG8)?;
    let listed = want.terms().filter(|(m, _)| m.degree() > 0).count();
    let matched = want.terms().filter(|(m, c)| m.degree() > 0 && got.coeff(m).as_ref() == Ok(*c)).count();
    let unexpected = got.terms().filter(|(m, c)| !c.is_zero() && want.coeff(m).map_or(true, |w| w.is_zero())).count();
    Ok(Check {
        name: "table",
        pass: got == want,
        detail: format!(
            "{matched}/{listed} coefficients matched, {unexpected} unexpected nonzeros through degree 8, constant {}",
            got.constant()
        ),
    })
}

pub fn gens_lines(k: usize) -> Result<String> {
    let set = enumerate_generators(2, k, Mode::Concordance)?;
    Ok(set.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" "))
}

/// Generating sets for degrees 1 to 7 against the golden listing.
pub fn check_gens() -> Result<Check> {
    let mut bad = Vec::new();
    let mut count = 0;
    for line in GENS_GOLDEN.lines().filter(|l| !l.trim().is_empty()) {
        let (k, want) = line.split_once(':').ok_or_else(|| Error::Malformed(format!("golden line `{line}`")))?;
        let k: usize = k.trim().parse().map_err(|_| Error::Token { token: k.to_string() })?;
        count += 1;
        if gens_lines(k)? != want.trim() {
            bad.push(k);
        }
    }
    Ok(Check {
        name: "gens",
        pass: bad.is_empty() && count == 7,
        detail: if bad.is_empty() { format!("{count} degrees byte-exact") } else { format!("mismatch in degrees {bad:?}") },
    })
}

/// Rank of the length-8 Milnor numbers of the degree-7 generators.
pub fn check_rank() -> Result<Check> {
    let gens = enumerate_generators(2, 7, Mode::Concordance)?;
    let rank = milnor_rank(&gens, 8)?;
    Ok(Check { name: "rank", pass: rank == 6, detail: format!("rank = {rank} over Q") })
}

/// `D_H D_S != D_S D_H` in `A_7(2)`.
pub fn check_algebra(opts: &SpanOptions) -> Result<Check> {
    let cert = commutator_check(opts)?;
    Ok(Check {
        name: "algebra",
        pass: cert.verdict == Verdict::NotInSpan,
        detail: cert.to_string().replace('\n', "; "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_forms() {
        assert_eq!(parse_index("123").unwrap(), [1, 2, 3]);
        assert_eq!(parse_index("1,10,3").unwrap(), [1, 10, 3]);
        assert!(parse_index("1a").is_err());
        assert!(parse_index("").is_err());
        assert_eq!(format_index(&[1, 10]), "1,10");
        assert_eq!(format_index(&[2, 1]), "21");
    }

    #[test]
    fn link_forms() {
        assert_eq!(parse_link("braid:s1 s1").unwrap().strands(), 2);
        assert!(matches!(parse_link("braid:s1"), Err(Error::NotPure(_))));
        assert_eq!(parse_link("fixture:A").unwrap(), fixture("A").unwrap());
        assert_eq!(parse_link("morse:strands 2;X1 X1").unwrap().crossing_count(), 2);
        assert!(parse_link("/no/such/file").is_err());
    }

    #[test]
    fn fast_checks_pass() {
        for c in [check_borromean(), check_gens(), check_table()] {
            let c = c.unwrap();
            assert!(c.pass, "{}", c.line());
        }
    }
}
