//! Ordered indices of linear trees, the reductions that cut them down to
//! generating sets of the two-strand concordance quotients, and string links
//! realizing surgery along a linear tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freegroup::BraidLetter;
use crate::linalg::dense_rank;
use crate::stringlink::{chen_milnor_series, Braid, MorseLetter, MorseWord};

/// Largest degree for which the concordance case table has been checked.
pub const MAX_CONCORDANCE_DEGREE: usize = 7;

/// Leaf labels of a linear tree read from one end to the other, stored in the
/// smaller of its two reading directions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OIndex {
    strands: usize,
    seq: Vec<usize>,
}

/// `min(seq, reverse(seq))` in the lexicographic order.
pub fn canonicalize(strands: usize, raw: &[usize]) -> Result<OIndex> {
    if raw.len() < 2 {
        return Err(Error::Malformed(format!("an o-index needs at least two leaves, got {}", raw.len())));
    }
    if let Some(&bad) = raw.iter().find(|&&l| l == 0 || l > strands) {
        return Err(Error::OutOfRange { what: "strand label", value: bad, max: strands });
    }
    Ok(OIndex { strands, seq: canonical_seq(raw) })
}

fn canonical_seq(raw: &[usize]) -> Vec<usize> {
    let rev: Vec<usize> = raw.iter().rev().copied().collect();
    if rev.as_slice() < raw {
        rev
    } else {
        raw.to_vec()
    }
}

impl OIndex {
    /// Reads a digit string such as `12221`.
    pub fn parse(strands: usize, text: &str) -> Result<OIndex> {
        let text = text.trim().trim_start_matches('(').trim_end_matches(')');
        let labels = text
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Token { token: text.to_string() }))
            .collect::<Result<Vec<_>>>()?;
        canonicalize(strands, &labels)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    /// Number of edges of the tree: one less than the number of leaves.
    pub fn degree(&self) -> usize {
        self.seq.len() - 1
    }

    /// Leaf count per strand label.
    pub fn index_class(&self) -> Vec<usize> {
        let mut counts = vec![0; self.strands];
        for &l in &self.seq {
            counts[l - 1] += 1;
        }
        counts
    }

    fn is_local(&self) -> bool {
        self.seq.iter().all(|&l| l == self.seq[0])
    }
}

impl fmt::Display for OIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.strands > 9 { "," } else { "" };
        let parts: Vec<String> = self.seq.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl fmt::Debug for OIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// True when the two leaves at one end lie on the same strand. Such trees
/// are trivial up to higher degree and concordance; the rule only applies
/// from degree 3 on.
pub fn drop_rule(o: &OIndex) -> bool {
    let s = &o.seq;
    let k = s.len() - 1;
    k >= 3 && (s[0] == s[1] || s[k - 1] == s[k])
}

/// Rewrites a leading `(i j j i i)` to `(i j i j i)`, and a trailing
/// `(i i j j i)` to `(i j i j i)`, re-canonicalizing after each step, until
/// nothing changes. Degrees below 5 are returned unchanged.
pub fn annoying_rewrite(o: &OIndex) -> OIndex {
    if o.degree() < 5 {
        return o.clone();
    }
    let mut seq = o.seq.clone();
    let mut seen = BTreeSet::new();
    loop {
        if !seen.insert(seq.clone()) {
            unreachable!("annoying rewrite cycled on {seq:?}");
        }
        let n = seq.len();
        let (i, j) = (seq[0], seq[1]);
        let next = if i != j && seq[..5] == [i, j, j, i, i] {
            let mut t = seq.clone();
            t[..5].copy_from_slice(&[i, j, i, j, i]);
            Some(t)
        } else {
            let (i, j) = (seq[n - 1], seq[n - 3]);
            if i != j && seq[n - 5..] == [i, i, j, j, i] {
                let mut t = seq.clone();
                t[n - 5..].copy_from_slice(&[i, j, i, j, i]);
                Some(t)
            } else {
                None
            }
        };
        match next {
            Some(t) => seq = canonical_seq(&t),
            None => return OIndex { strands: o.strands, seq },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// All canonical o-indices meeting at least two strands.
    Equivalence,
    /// The reduced sets up to concordance, two strands only.
    Concordance,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "equivalence" => Ok(Mode::Equivalence),
            "concordance" => Ok(Mode::Concordance),
            _ => Err(Error::Token { token: s.to_string() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub degree: usize,
    pub mode: Mode,
    pub generators: Vec<OIndex>,
}

enum Rule {
    /// The class has a single survivor.
    Only,
    /// Keep the survivor whose two end leaves lie on this strand.
    Ends(usize),
    /// Representatives fixed by hand; each must be equivalent to a survivor.
    Explicit(&'static [&'static str]),
}

/// Per degree: index classes (number of leaves on strand 1) in output order,
/// with the IHX end normalization applied to each. Classes not listed
/// contribute nothing.
fn case_table(k: usize) -> &'static [(usize, Rule)] {
    use Rule::*;
    match k {
        1 => &[(1, Only)],
        // the class {1, 2, 2} gives a mirror of T(121)
        2 => &[(2, Ends(1))],
        3 => &[(2, Ends(1))],
        4 => &[(2, Ends(1)), (3, Ends(2))],
        5 => &[(2, Ends(1)), (4, Ends(2)), (3, Ends(1))],
        6 => &[(2, Ends(1)), (4, Ends(1)), (3, Ends(2)), (5, Ends(2))],
        7 => &[
            (2, Ends(1)),
            (6, Ends(2)),
            (5, Explicit(&["12111221"])),
            (3, Explicit(&["21122212"])),
            (4, Explicit(&["12211221", "12112221"])),
        ],
        _ => &[],
    }
}

/// Canonical, non-local o-indices of degree `k` left after the drop rule and
/// the annoying rewrite, grouped by the number of leaves on strand 1.
fn survivors(k: usize) -> BTreeMap<usize, BTreeSet<OIndex>> {
    let mut out: BTreeMap<usize, BTreeSet<OIndex>> = BTreeMap::new();
    for bits in 0u32..(1 << (k + 1)) {
        let raw: Vec<usize> = (0..=k).map(|b| 1 + ((bits >> (k - b)) & 1) as usize).collect();
        let o = OIndex { strands: 2, seq: canonical_seq(&raw) };
        if o.is_local() || drop_rule(&o) {
            continue;
        }
        let o = annoying_rewrite(&o);
        out.entry(o.index_class()[0]).or_default().insert(o);
    }
    out
}

/// The generating set of degree `k` for two-strand string links.
pub fn enumerate_generators(strands: usize, k: usize, mode: Mode) -> Result<GeneratorSet> {
    if k == 0 {
        return Err(Error::OutOfRange { what: "degree", value: 0, max: MAX_CONCORDANCE_DEGREE });
    }
    let generators = match mode {
        Mode::Equivalence => {
            if k >= 32 || (strands as f64).powi(k as i32 + 1) > 1e7 {
                return Err(Error::ResourceLimit(format!("{strands}^{} label sequences", k + 1)));
            }
            let mut set = BTreeSet::new();
            let mut raw = vec![1usize; k + 1];
            loop {
                let o = canonicalize(strands, &raw)?;
                if !o.is_local() {
                    set.insert(o);
                }
                let Some(p) = raw.iter().rposition(|&l| l < strands) else { break };
                raw[p] += 1;
                raw[p + 1..].iter_mut().for_each(|l| *l = 1);
            }
            set.into_iter().collect()
        }
        Mode::Concordance => {
            if strands != 2 {
                return Err(Error::Unsupported(format!(
                    "concordance generating sets are only tabulated for 2 strands, not {strands}"
                )));
            }
            if k > MAX_CONCORDANCE_DEGREE {
                return Err(Error::UnvalidatedCaseTable { degree: k, max: MAX_CONCORDANCE_DEGREE });
            }
            let pool = survivors(k);
            let mut gens = Vec::new();
            for (ones, rule) in case_table(k) {
                let class = pool.get(ones).cloned().unwrap_or_default();
                match rule {
                    Rule::Only | Rule::Ends(_) => {
                        let hits: Vec<&OIndex> = class
                            .iter()
                            .filter(|o| match rule {
                                Rule::Ends(e) => o.seq[0] == *e && o.seq[k] == *e,
                                _ => true,
                            })
                            .collect();
                        if hits.len() != 1 {
                            return Err(Error::Unsupported(format!(
                                "case table for degree {k}, class 1^{ones}: {} candidates",
                                hits.len()
                            )));
                        }
                        gens.push(hits[0].clone());
                    }
                    Rule::Explicit(list) => {
                        for text in *list {
                            let o = OIndex::parse(2, text)?;
                            let ok = o.seq() == digits(text).as_slice()
                                && o.degree() == k
                                && o.index_class()[0] == *ones
                                && !drop_rule(&o)
                                && class.contains(&annoying_rewrite(&o));
                            if !ok {
                                return Err(Error::Unsupported(format!(
                                    "case table entry {text} does not reduce to a degree {k} survivor"
                                )));
                            }
                            gens.push(o);
                        }
                    }
                }
            }
            gens
        }
    };
    Ok(GeneratorSet { degree: k, mode, generators })
}

fn digits(text: &str) -> Vec<usize> {
    text.chars().filter_map(|c| c.to_digit(10)).map(|d| d as usize).collect()
}

/// Pure braid generator `A_{pq}` (`p < q`): strand `q` goes once around
/// strand `p`, passing in front of the strands between them.
fn pure_generator(p: usize, q: usize) -> Vec<BraidLetter> {
    let (p, q) = if p < q { (p, q) } else { (q, p) };
    let mut w: Vec<BraidLetter> = (p + 1..q).rev().map(|i| BraidLetter::new(i, false)).collect();
    w.push(BraidLetter::new(p, false));
    w.push(BraidLetter::new(p, false));
    w.extend((p + 1..q).map(|i| BraidLetter::new(i, true)));
    w
}

fn braid_inverse(w: &[BraidLetter]) -> Vec<BraidLetter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

fn braid_commutator(a: &[BraidLetter], b: &[BraidLetter]) -> Vec<BraidLetter> {
    let mut w = a.to_vec();
    w.extend_from_slice(b);
    w.extend(braid_inverse(a));
    w.extend(braid_inverse(b));
    w
}

/// Iterated commutator `[..[[A_{p0 p1}, A_{p1 p2}], A_{p2 p3}] .., A_{p(k-1) pk}]`
/// on distinct positions: surgery along a linear tree whose leaves grab the
/// positions in the given order.
pub fn linear_tree_braid(width: usize, positions: &[usize]) -> Result<Braid> {
    if positions.len() < 2 {
        return Err(Error::Malformed("a tree needs at least two leaves".into()));
    }
    let mut seen = BTreeSet::new();
    if let Some(&p) = positions.iter().find(|&&p| p == 0 || p > width || !seen.insert(p)) {
        return Err(Error::OutOfRange { what: "leaf position", value: p, max: width });
    }
    let mut w = pure_generator(positions[0], positions[1]);
    for pair in positions[1..].windows(2) {
        w = braid_commutator(&w, &pure_generator(pair[0], pair[1]));
    }
    Braid::new(width, w)
}

/// A string link obtained from the trivial one by surgery along a linear tree
/// with the given o-index.
///
/// Strand `s` is laid out as a serpentine with one vertical segment per leaf
/// on `s` (plus one more when that count is even, so that it still ends at
/// the top). The leaves are then realized by the iterated commutator braid on
/// the segments, read in o-index order.
pub fn tree_to_morse(o: &OIndex) -> MorseWord {
    let counts = o.index_class();
    let segs: Vec<usize> = counts.iter().map(|&m| if m % 2 == 1 { m } else { m + 1 }).collect();
    let mut base = Vec::with_capacity(segs.len());
    let mut width = 0;
    for &s in &segs {
        base.push(width + 1);
        width += s;
    }
    let mut next = base.clone();
    let positions: Vec<usize> = o
        .seq
        .iter()
        .map(|&l| {
            let p = next[l - 1];
            next[l - 1] += 1;
            p
        })
        .collect();

    let mut letters = Vec::new();
    for (s, &count) in segs.iter().enumerate() {
        for _ in 0..count / 2 {
            letters.push(MorseLetter::Cup(base[s] + 1));
        }
    }
    let braid = linear_tree_braid(width, &positions).expect("leaf positions are distinct and in range");
    letters.extend(
        braid.letters().iter().map(|l| MorseLetter::Crossing { position: l.position, positive: !l.inverse }),
    );
    for (s, &count) in segs.iter().enumerate() {
        for _ in 0..count / 2 {
            letters.push(MorseLetter::Cap(s + 1));
        }
    }
    MorseWord::new(o.strands, letters).expect("serpentine layout closes up")
}

/// How the Milnor numbers of a tree surgery start.
#[derive(Clone, Debug)]
pub struct TreeContract {
    pub degree: usize,
    /// All Milnor numbers of length at most `degree` vanish.
    pub lower_vanish: bool,
    /// Nonzero Milnor numbers of length `degree + 1`.
    pub leading: Vec<(Vec<usize>, BigInt)>,
}

impl TreeContract {
    /// The vanishing-order property: lower lengths vanish and some leading
    /// number is a unit.
    pub fn holds(&self) -> bool {
        self.lower_vanish && self.leading.iter().any(|(_, v)| v.abs().is_one())
    }
}

pub fn tree_contract(o: &OIndex) -> Result<TreeContract> {
    let k = o.degree();
    let link = tree_to_morse(o);
    let longitudes = chen_milnor_series::<BigInt>(&link, k)?;
    let leading = longitudes
        .all_of_length(k + 1)?
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .collect();
    Ok(TreeContract { degree: k, lower_vanish: longitudes.vanishes_through(k - 1), leading })
}

/// Rank over the rationals of the matrix whose rows are the Milnor numbers
/// of the given length of the tree surgeries on `gens`.
pub fn milnor_rank(gens: &GeneratorSet, length: usize) -> Result<usize> {
    if length < 2 {
        return Err(Error::OutOfRange { what: "length", value: length, max: usize::MAX });
    }
    let rows = gens
        .generators
        .par_iter()
        .map(|o| {
            let link = tree_to_morse(o);
            let l = chen_milnor_series::<BigInt>(&link, length - 1)?;
            Ok(l.all_of_length(length)?
                .into_iter()
                .map(|(_, v)| BigRational::from_integer(v))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(dense_rank(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(text: &str) -> OIndex {
        OIndex::parse(2, text).unwrap()
    }

    fn names(set: &GeneratorSet) -> Vec<String> {
        set.generators.iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(2, &[2, 1, 2, 2, 1]).unwrap().to_string(), "12212");
        assert_eq!(canonicalize(2, &[1, 2, 2, 2, 1]).unwrap().to_string(), "12221");
        assert_eq!(canonicalize(2, &[2, 1, 2, 1, 2, 1, 2]).unwrap().to_string(), "2121212");
        assert!(canonicalize(2, &[1, 3]).is_err());
        assert!(canonicalize(2, &[1]).is_err());
    }

    #[test]
    fn canonical_is_idempotent_and_reversal_invariant() {
        for len in 2..=10 {
            for bits in 0u32..(1 << len) {
                let raw: Vec<usize> = (0..len).map(|b| 1 + ((bits >> b) & 1) as usize).collect();
                let c = canonicalize(2, &raw).unwrap();
                assert_eq!(canonicalize(2, c.seq()).unwrap(), c);
                let rev: Vec<usize> = raw.iter().rev().copied().collect();
                assert_eq!(canonicalize(2, &rev).unwrap(), c);
                assert!(c.seq() <= raw.as_slice());
            }
        }
    }

    #[test]
    fn drop_examples() {
        assert!(drop_rule(&o("112221")));
        assert!(!drop_rule(&o("12221")));
        assert!(drop_rule(&o("122211")));
        // below degree 3 the rule does not apply
        assert!(!drop_rule(&o("112")));
    }

    #[test]
    fn annoying_examples() {
        assert_eq!(annoying_rewrite(&o("2112212")).to_string(), "2121212");
        assert_eq!(annoying_rewrite(&o("1211221")).to_string(), "1212121");
        assert_eq!(annoying_rewrite(&o("12221")).to_string(), "12221");
    }

    #[test]
    fn annoying_terminates_with_unique_fixed_point() {
        for len in 6..=9 {
            for bits in 0u32..(1 << len) {
                let raw: Vec<usize> = (0..len).map(|b| 1 + ((bits >> b) & 1) as usize).collect();
                let c = canonicalize(2, &raw).unwrap();
                let f = annoying_rewrite(&c);
                assert_eq!(annoying_rewrite(&f), f);
                assert_eq!(f.index_class(), c.index_class());
            }
        }
    }

    #[test]
    fn generator_sets() {
        let g = |k| names(&enumerate_generators(2, k, Mode::Concordance).unwrap());
        assert_eq!(g(1), ["12"]);
        assert_eq!(g(2), ["121"]);
        assert_eq!(g(3), ["1221"]);
        assert_eq!(g(4), ["12221", "21112"]);
        assert_eq!(g(5), ["122221", "211112", "121221"]);
        assert_eq!(g(6), ["1222221", "1212121", "2121212", "2111112"]);
        assert_eq!(g(7), ["12222221", "21111112", "12111221", "21122212", "12211221", "12112221"]);
        assert!(matches!(
            enumerate_generators(2, 8, Mode::Concordance),
            Err(Error::UnvalidatedCaseTable { degree: 8, max: 7 })
        ));
    }

    #[test]
    fn equivalence_mode_lists_all_mixed_indices() {
        let g = enumerate_generators(2, 2, Mode::Equivalence).unwrap();
        assert_eq!(names(&g), ["112", "121", "122", "212"]);
    }

    #[test]
    fn pure_generator_is_pure() {
        for (p, q) in [(1, 2), (1, 4), (2, 5)] {
            let b = Braid::new(5, pure_generator(p, q)).unwrap();
            assert_eq!(b.permutation(), vec![1, 2, 3, 4, 5]);
        }
    }

    #[test]
    fn clasp_and_borromean() {
        let l = tree_to_morse(&o("12"));
        let c = tree_contract(&o("12")).unwrap();
        assert!(c.holds(), "{c:?}");
        assert_eq!(l.strands(), 2);
        // distinct strands: the Borromean braid
        let b = linear_tree_braid(3, &[1, 2, 3]).unwrap();
        let m = MorseWord::from_braid(&b).unwrap();
        let mu = crate::stringlink::milnor_mu(&m, &[1, 2, 3]).unwrap();
        assert_eq!(mu.abs(), BigInt::one());
    }

    #[test]
    fn small_trees_vanish_below_their_degree() {
        for text in ["121", "1221", "12221", "21112"] {
            let c = tree_contract(&o(text)).unwrap();
            assert!(c.lower_vanish, "{text}: {c:?}");
        }
    }
}
