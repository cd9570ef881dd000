//! Reduced words in a free group of declared rank, and the Artin action of
//! braid generators on them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A generator or its inverse, stored as a signed 1-based index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        self.0.signum() as i64
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.generator())?;
        if self.is_inverse() {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// A freely reduced word over `x1..x_rank`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, g: usize) -> Result<Self> {
        Self::reduce(rank, [(g, false)])
    }

    /// Freely reduces a raw sequence of `(generator, inverse)` pairs.
    pub fn reduce<I>(rank: usize, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, bool)>,
    {
        let mut letters = Vec::new();
        for (g, inv) in raw {
            if g == 0 || g > rank {
                return Err(Error::OutOfRange { what: "generator", value: g, max: rank });
            }
            letters.push(Letter::new(g, inv));
        }
        Ok(Self::from_letters_unchecked(rank, letters))
    }

    pub fn from_letters(rank: usize, letters: Vec<Letter>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|l| l.generator() == 0 || l.generator() > rank) {
            return Err(Error::OutOfRange { what: "generator", value: bad.generator(), max: rank });
        }
        Ok(Self::from_letters_unchecked(rank, letters))
    }

    pub(crate) fn from_letters_unchecked(rank: usize, letters: Vec<Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        push_reduced(&mut out, letters);
        FreeWord { rank, letters: out }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reinterprets the word in a larger (or equal) ambient rank.
    pub fn with_rank(&self, rank: usize) -> Result<Self> {
        Self::from_letters(rank, self.letters.clone())
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.letters.clone();
        push_reduced(&mut out, other.letters.iter().copied());
        Ok(FreeWord { rank: self.rank, letters: out })
    }

    pub fn invert(&self) -> Self {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.letters.clone();
        push_reduced(&mut out, other.letters.iter().copied());
        push_reduced(&mut out, self.letters.iter().rev().map(|l| l.inverse()));
        push_reduced(&mut out, other.letters.iter().rev().map(|l| l.inverse()));
        Ok(FreeWord { rank: self.rank, letters: out })
    }

    /// `self * w * self^-1`.
    pub fn conjugate(&self, w: &Self) -> Result<Self> {
        self.check_rank(w)?;
        let mut out = self.letters.clone();
        push_reduced(&mut out, w.letters.iter().copied());
        push_reduced(&mut out, self.letters.iter().rev().map(|l| l.inverse()));
        Ok(FreeWord { rank: self.rank, letters: out })
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..e.unsigned_abs() {
            push_reduced(&mut out, base.letters.iter().copied());
        }
        FreeWord { rank: self.rank, letters: out }
    }

    /// Total exponent of generator `g`.
    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.letters.iter().filter(|l| l.generator() == g).map(|l| l.sign()).sum()
    }

    /// Applies the endomorphism sending `x_i` to `images[i-1]`.
    pub fn substitute(&self, images: &[FreeWord]) -> Result<Self> {
        if images.len() < self.rank {
            return Err(Error::Malformed(format!(
                "substitution has {} images for rank {}",
                images.len(),
                self.rank
            )));
        }
        let target = images.first().map(|w| w.rank).unwrap_or(self.rank);
        let inverses: Vec<FreeWord> = images.iter().map(|w| w.invert()).collect();
        let mut out = Vec::new();
        for l in &self.letters {
            let g = l.generator() - 1;
            let img = if l.is_inverse() { &inverses[g] } else { &images[g] };
            if img.rank != target {
                return Err(Error::RankMismatch { left: target, right: img.rank });
            }
            push_reduced(&mut out, img.letters.iter().copied());
        }
        Ok(FreeWord { rank: target, letters: out })
    }

    /// Applies the Artin automorphism of a braid letter (or its inverse).
    ///
    /// `s_i`: `x_i -> x_i x_{i+1} x_i^-1`, `x_{i+1} -> x_i`, others fixed.
    pub fn artin_act(&self, letter: BraidLetter) -> Result<Self> {
        let i = letter.position;
        if i == 0 || i >= self.rank {
            return Err(Error::OutOfRange {
                what: "braid position",
                value: i,
                max: self.rank.saturating_sub(1),
            });
        }
        let xi = Letter::new(i, false);
        let xj = Letter::new(i + 1, false);
        let mut out = Vec::with_capacity(self.letters.len() * 2);
        for &l in &self.letters {
            let image: Vec<Letter> = match (l.generator() == i, l.generator() == i + 1, letter.inverse) {
                // s_i
                (true, _, false) => vec![xi, xj, xi.inverse()],
                (_, true, false) => vec![xi],
                // s_i^-1: x_i -> x_{i+1}, x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}
                (true, _, true) => vec![xj],
                (_, true, true) => vec![xj.inverse(), xi, xj],
                _ => vec![l],
            };
            if l.is_inverse() && (l.generator() == i || l.generator() == i + 1) {
                push_reduced(&mut out, image.iter().rev().map(|x| x.inverse()));
            } else if l.is_inverse() {
                push_reduced(&mut out, [l]);
            } else {
                push_reduced(&mut out, image);
            }
        }
        Ok(FreeWord { rank: self.rank, letters: out })
    }
}

fn push_reduced<I: IntoIterator<Item = Letter>>(out: &mut Vec<Letter>, letters: I) {
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord[{}]({})", self.rank, self)
    }
}

/// Space separated letters, `'` marking inverses; the identity prints as `1`.
impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FreeWord {
    /// Parses `x1 x2' x1`; the rank must be given since the text does not fix it.
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (body, inv) = match tok.strip_suffix('\'') {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let g = body
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| Error::Token { token: tok.to_string() })?;
            raw.push((g, inv));
        }
        Self::reduce(rank, raw)
    }
}

/// `s_i` or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BraidLetter {
    pub position: usize,
    pub inverse: bool,
}

impl BraidLetter {
    pub fn new(position: usize, inverse: bool) -> Self {
        BraidLetter { position, inverse }
    }

    pub fn inverse(self) -> Self {
        BraidLetter { position: self.position, inverse: !self.inverse }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.inverse { 'S' } else { 's' };
        write!(f, "{c}{}", self.position)
    }
}

impl FromStr for BraidLetter {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        let bad = || Error::Token { token: tok.to_string() };
        let mut chars = tok.chars();
        let inverse = match chars.next() {
            Some('s') => false,
            Some('S') => true,
            _ => return Err(bad()),
        };
        let position: usize = chars.as_str().parse().map_err(|_| bad())?;
        if position == 0 {
            return Err(bad());
        }
        Ok(BraidLetter { position, inverse })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(rank: usize, s: &str) -> FreeWord {
        FreeWord::parse(rank, s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(FreeWord::reduce(2, [(1, false), (1, true)]).unwrap().is_empty());
        let r = FreeWord::reduce(2, [(1, false), (2, false), (2, true), (1, false)]).unwrap();
        assert_eq!(r, w(2, "x1 x1"));
        let a = w(3, "x1 x2' x3");
        assert_eq!(FreeWord::from_letters(3, a.letters().to_vec()).unwrap(), a);
    }

    #[test]
    fn reduce_rejects_bad_generators() {
        assert!(matches!(FreeWord::reduce(2, [(0, false)]), Err(Error::OutOfRange { .. })));
        assert!(matches!(FreeWord::reduce(2, [(3, false)]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn products_and_inverses() {
        let x1 = w(2, "x1");
        let x2 = w(2, "x2");
        assert!(x1.multiply(&x1.invert()).unwrap().is_empty());
        assert_eq!(w(2, "x1 x2").invert(), w(2, "x2' x1'"));
        assert_eq!(x1.multiply(&x2).unwrap(), w(2, "x1 x2"));
        assert!(matches!(x1.multiply(&w(3, "x1")), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn commutator_examples() {
        let x1 = w(2, "x1");
        let x2 = w(2, "x2");
        assert!(x1.commutator(&x1).unwrap().is_empty());
        assert_eq!(x1.commutator(&x2).unwrap(), w(2, "x1 x2 x1' x2'"));
        assert!(FreeWord::identity(2).commutator(&w(2, "x2 x1 x2")).unwrap().is_empty());
    }

    #[test]
    fn artin_examples() {
        let s1 = BraidLetter::new(1, false);
        let x1 = w(2, "x1");
        assert_eq!(x1.artin_act(s1).unwrap(), w(2, "x1 x2 x1'"));
        // twice: x1 -> s1(x1 x2 x1') = (x1 x2 x1')(x1)(x1 x2' x1') = (x1 x2) x1 (x1 x2)^-1
        let twice = x1.artin_act(s1).unwrap().artin_act(s1).unwrap();
        let x1x2 = w(2, "x1 x2");
        assert_eq!(twice, x1x2.conjugate(&x1).unwrap());
        assert!(matches!(x1.artin_act(BraidLetter::new(2, false)), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn parse_and_display() {
        let a = w(3, "x1 x2' x1");
        assert_eq!(a.to_string(), "x1 x2' x1");
        assert_eq!(FreeWord::identity(3).to_string(), "1");
        assert!(FreeWord::parse(3, "x1 y2").is_err());
        assert!(FreeWord::parse(3, "x4").is_err());
        assert_eq!("S3".parse::<BraidLetter>().unwrap(), BraidLetter::new(3, true));
        assert!("s0".parse::<BraidLetter>().is_err());
    }

    fn arb_raw(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<(usize, bool)>> {
        prop::collection::vec((1..=rank, any::<bool>()), 0..max_len)
    }

    fn cyclic_core(w: &FreeWord) -> Vec<Letter> {
        let mut l = w.letters().to_vec();
        while l.len() >= 2 && l[0] == l[l.len() - 1].inverse() {
            l.remove(0);
            l.pop();
        }
        l
    }

    fn is_cyclic_conjugate(a: &FreeWord, b: &FreeWord) -> bool {
        let (ca, cb) = (cyclic_core(a), cyclic_core(b));
        if ca.len() != cb.len() {
            return false;
        }
        (0..ca.len().max(1)).any(|r| {
            ca.len() == 0 || (0..ca.len()).all(|k| ca[(k + r) % ca.len()] == cb[k])
        })
    }

    fn naive_reduce(raw: &[(usize, bool)], order_seed: u64) -> Vec<(usize, bool)> {
        // Cancels adjacent pairs at pseudo-random positions until none remain.
        let mut v = raw.to_vec();
        let mut state = order_seed | 1;
        loop {
            let spots: Vec<usize> = (0..v.len().saturating_sub(1))
                .filter(|&i| v[i].0 == v[i + 1].0 && v[i].1 != v[i + 1].1)
                .collect();
            if spots.is_empty() {
                return v;
            }
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let i = spots[(state % spots.len() as u64) as usize];
            v.drain(i..i + 2);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

        #[test]
        fn reduction_is_confluent(raw in arb_raw(3, 40), seed in any::<u64>()) {
            let fast = FreeWord::reduce(3, raw.clone()).unwrap();
            let slow = naive_reduce(&raw, seed);
            let got: Vec<(usize, bool)> =
                fast.letters().iter().map(|l| (l.generator(), l.is_inverse())).collect();
            prop_assert_eq!(got, slow);
            prop_assert_eq!(FreeWord::from_letters(3, fast.letters().to_vec()).unwrap(), fast);
        }

        #[test]
        fn group_laws(a in arb_raw(3, 12), b in arb_raw(3, 12), c in arb_raw(3, 12)) {
            let a = FreeWord::reduce(3, a).unwrap();
            let b = FreeWord::reduce(3, b).unwrap();
            let c = FreeWord::reduce(3, c).unwrap();
            let e = FreeWord::identity(3);
            let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(a.multiply(&e).unwrap(), a.clone());
            prop_assert_eq!(e.multiply(&a).unwrap(), a.clone());
            prop_assert!(a.multiply(&a.invert()).unwrap().is_empty());
            prop_assert_eq!(a.invert().invert(), a);
        }

        #[test]
        fn artin_is_automorphism(
            raw in arb_raw(3, 16),
            other in arb_raw(3, 16),
            braid in prop::collection::vec((1usize..=2, any::<bool>()), 0..8),
        ) {
            let a = FreeWord::reduce(3, raw).unwrap();
            let b = FreeWord::reduce(3, other).unwrap();
            let letters: Vec<BraidLetter> = braid.iter().map(|&(p, i)| BraidLetter::new(p, i)).collect();
            let act = |w: &FreeWord| letters.iter().try_fold(w.clone(), |acc, &l| acc.artin_act(l)).unwrap();
            // inverse letter undoes the letter
            for &l in &letters {
                prop_assert_eq!(a.artin_act(l).unwrap().artin_act(l.inverse()).unwrap(), a.clone());
            }
            // homomorphism
            prop_assert_eq!(act(&a.multiply(&b).unwrap()), act(&a).multiply(&act(&b)).unwrap());
            // x1 x2 x3 goes to a conjugate of itself
            let top = w(3, "x1 x2 x3");
            let img = act(&top);
            let found = is_cyclic_conjugate(&img, &top);
            prop_assert!(found, "image {} not a conjugate of x1 x2 x3", img);
        }
    }
}
