//! String links given as braid words or Morse (tangle) words.
//!
//! A Morse word is read bottom to top. At every height the diagram meets a
//! row of positions `1..=width`; a crossing letter acts on positions `p` and
//! `p + 1`, a cup inserts two new positions at `p`, `p + 1`, and a cap joins
//! positions `p` and `p + 1`. `X<p>` is the crossing whose strand from the
//! lower left passes over to the upper right, `x<p>` its mirror.

mod diagram;
mod longitude;

use std::fmt;

pub use diagram::{Arc, Crossing, StringLinkDiagram, WirtingerPresentation};
pub use longitude::{
    artin_longitudes, chen_milnor, chen_milnor_series, longitude_series, milnor_mu, LongitudeSet, SeriesLongitudes,
    WORD_LENGTH_LIMIT,
};

use crate::error::{Error, Result};
use crate::freegroup::BraidLetter;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MorseLetter {
    /// `positive`: the lower-left strand passes over.
    Crossing { position: usize, positive: bool },
    /// Local maximum joining positions `p`, `p + 1`.
    Cap(usize),
    /// Local minimum creating positions `p`, `p + 1`.
    Cup(usize),
}

impl fmt::Display for MorseLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MorseLetter::Crossing { position, positive: true } => write!(f, "X{position}"),
            MorseLetter::Crossing { position, positive: false } => write!(f, "x{position}"),
            MorseLetter::Cap(p) => write!(f, "A{p}"),
            MorseLetter::Cup(p) => write!(f, "U{p}"),
        }
    }
}

impl std::str::FromStr for MorseLetter {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        let bad = || Error::Token { token: tok.to_string() };
        let mut chars = tok.chars();
        let head = chars.next().ok_or_else(bad)?;
        let p: usize = chars.as_str().parse().map_err(|_| bad())?;
        if p == 0 {
            return Err(bad());
        }
        Ok(match head {
            'X' => MorseLetter::Crossing { position: p, positive: true },
            'x' => MorseLetter::Crossing { position: p, positive: false },
            'A' => MorseLetter::Cap(p),
            'U' => MorseLetter::Cup(p),
            _ => return Err(bad()),
        })
    }
}

/// An `n`-string link diagram as a sequence of elementary Morse letters.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MorseWord {
    strands: usize,
    letters: Vec<MorseLetter>,
}

impl MorseWord {
    /// Validates the width bookkeeping and that strand `i` runs from bottom
    /// endpoint `i` to top endpoint `i` with no closed components.
    pub fn new(strands: usize, letters: Vec<MorseLetter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Malformed("a string link needs at least one strand".into()));
        }
        let word = MorseWord { strands, letters };
        word.check_widths()?;
        StringLinkDiagram::trace(&word)?;
        Ok(word)
    }

    pub fn trivial(strands: usize) -> Self {
        MorseWord { strands, letters: Vec::new() }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[MorseLetter] {
        &self.letters
    }

    pub fn crossing_count(&self) -> usize {
        self.letters.iter().filter(|l| matches!(l, MorseLetter::Crossing { .. })).count()
    }

    fn check_widths(&self) -> Result<()> {
        let mut width = self.strands;
        for (k, letter) in self.letters.iter().enumerate() {
            let fail = |what: &str| {
                Err(Error::Malformed(format!("letter {} (`{letter}`): {what} at width {width}", k + 1)))
            };
            match *letter {
                MorseLetter::Crossing { position, .. } => {
                    if position == 0 || position + 1 > width {
                        return fail("crossing outside the row");
                    }
                }
                MorseLetter::Cap(p) => {
                    if p == 0 || p + 1 > width {
                        return fail("cap outside the row");
                    }
                    width -= 2;
                }
                MorseLetter::Cup(p) => {
                    if p == 0 || p > width + 1 {
                        return fail("cup outside the row");
                    }
                    width += 2;
                }
            }
        }
        if width != self.strands {
            return Err(Error::Malformed(format!(
                "diagram ends with {width} positions, expected {}",
                self.strands
            )));
        }
        Ok(())
    }

    /// `self` below, `other` above.
    pub fn stack(&self, other: &MorseWord) -> Result<MorseWord> {
        if self.strands != other.strands {
            return Err(Error::RankMismatch { left: self.strands, right: other.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(MorseWord { strands: self.strands, letters })
    }

    /// Mirror image in a horizontal plane with all orientations reversed.
    pub fn concordance_inverse(&self) -> MorseWord {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match *l {
                MorseLetter::Crossing { position, positive } => {
                    MorseLetter::Crossing { position, positive: !positive }
                }
                MorseLetter::Cap(p) => MorseLetter::Cup(p),
                MorseLetter::Cup(p) => MorseLetter::Cap(p),
            })
            .collect();
        MorseWord { strands: self.strands, letters }
    }

    /// Reads the `strands <n>` header followed by whitespace separated
    /// letters; `#` starts a comment.
    pub fn parse(text: &str) -> Result<MorseWord> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        match tokens.next() {
            Some("strands") => {}
            Some(t) => return Err(Error::Token { token: t.to_string() }),
            None => return Err(Error::Malformed("empty Morse word".into())),
        }
        let n_tok = tokens.next().ok_or_else(|| Error::Malformed("missing strand count".into()))?;
        let strands: usize = n_tok.parse().map_err(|_| Error::Token { token: n_tok.to_string() })?;
        let letters = tokens.map(str::parse).collect::<Result<Vec<MorseLetter>>>()?;
        MorseWord::new(strands, letters)
    }

    /// Transliterates a pure braid.
    pub fn from_braid(braid: &Braid) -> Result<MorseWord> {
        let perm = braid.permutation();
        if perm.iter().enumerate().any(|(i, &p)| p != i + 1) {
            return Err(Error::NotPure(perm));
        }
        let letters = braid
            .letters
            .iter()
            .map(|l| MorseLetter::Crossing { position: l.position, positive: !l.inverse })
            .collect();
        MorseWord::new(braid.strands, letters)
    }
}

impl fmt::Display for MorseWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "strands {}", self.strands)?;
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, "{}", if k % 24 == 0 { "\n" } else { " " })?;
            }
            write!(f, "{l}")?;
        }
        if !self.letters.is_empty() {
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A braid word on a fixed number of strands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Braid {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl Braid {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Braid> {
        if let Some(l) = letters.iter().find(|l| l.position == 0 || l.position >= strands) {
            return Err(Error::OutOfRange {
                what: "braid position",
                value: l.position,
                max: strands.saturating_sub(1),
            });
        }
        Ok(Braid { strands, letters })
    }

    /// Parses `s1 S2 ...`; the strand count defaults to one more than the
    /// largest generator index.
    pub fn parse(text: &str, strands: Option<usize>) -> Result<Braid> {
        let letters = text.split_whitespace().map(str::parse).collect::<Result<Vec<BraidLetter>>>()?;
        let needed = letters.iter().map(|l| l.position + 1).max().unwrap_or(1);
        Braid::new(strands.unwrap_or(needed), letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    /// Top position reached by the strand starting at bottom position `i`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (1..=self.strands).collect(); // at[pos-1] = strand
        for l in &self.letters {
            at.swap(l.position - 1, l.position);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &s) in at.iter().enumerate() {
            perm[s - 1] = pos + 1;
        }
        perm
    }
}

impl fmt::Display for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn braid(s: &str) -> Braid {
        Braid::parse(s, None).unwrap()
    }

    #[test]
    fn from_braid_examples() {
        let l = MorseWord::from_braid(&braid("s1 s1")).unwrap();
        assert_eq!(l.strands(), 2);
        assert_eq!(
            l.letters(),
            &[MorseLetter::Crossing { position: 1, positive: true }; 2]
        );
        match MorseWord::from_braid(&braid("s1 s2")) {
            Err(Error::NotPure(p)) => assert_eq!(p, vec![3, 1, 2]),
            other => panic!("{other:?}"),
        }
        let e = MorseWord::from_braid(&Braid::parse("", Some(3)).unwrap()).unwrap();
        assert_eq!(e, MorseWord::trivial(3));
    }

    #[test]
    fn stack_and_inverse() {
        let t = MorseWord::trivial(2);
        assert_eq!(t.stack(&t).unwrap(), t);
        let s = MorseWord::from_braid(&braid("s1 s1")).unwrap();
        assert_eq!(s.stack(&t).unwrap(), s);
        assert_eq!(t.concordance_inverse(), t);
        let inv = MorseWord::from_braid(&braid("S1 S1")).unwrap();
        assert_eq!(s.concordance_inverse(), inv);
        assert!(s.stack(&MorseWord::trivial(3)).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let text = "strands 2\nU3 x2 X2 A2 X1 X1 # comment\n";
        let w = MorseWord::parse(text).unwrap();
        assert_eq!(MorseWord::parse(&w.to_string()).unwrap(), w);
        assert!(MorseWord::parse("strands 2\nX1 Q2").is_err());
        assert!(MorseWord::parse("strand 2").is_err());
    }

    #[test]
    fn width_errors() {
        assert!(MorseWord::parse("strands 2\nX2").is_err());
        assert!(MorseWord::parse("strands 2\nU1").is_err());
        assert!(MorseWord::parse("strands 2\nA1").is_err());
    }

    #[test]
    fn closed_components_and_wrong_endpoints_rejected() {
        // a circle floating beside the strands
        assert!(MorseWord::parse("strands 1\nU2 A2").is_err());
        // strand 1 turning back down: cup/cap that swaps endpoints is impossible,
        // but a crossing pair that permutes them is caught
        assert!(MorseWord::parse("strands 2\nX1").is_err());
    }

    #[test]
    fn zigzag_is_allowed() {
        // strand 1 goes up, turns down, turns up again
        let w = MorseWord::parse("strands 1\nU2 A1").unwrap();
        assert_eq!(w.strands(), 1);
    }
}
