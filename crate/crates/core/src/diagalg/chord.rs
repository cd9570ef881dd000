use std::fmt;

use crate::error::{Error, Result};

/// Largest degree whose diagrams fit in a [`ChordDiagram2::key`].
pub const MAX_KEY_DEGREE: usize = 14;

/// A chord diagram on two upward strands.
///
/// Endpoints are numbered bottom to top on strand 1 and then bottom to top on
/// strand 2; `labels[i]` names the chord at endpoint `i`. Labels are
/// canonical: chord `c` is the `c`-th chord met in that order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChordDiagram2 {
    split: usize,
    labels: Vec<u8>,
}

fn relabel(raw: impl Iterator<Item = u8>) -> Vec<u8> {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    raw.map(|l| {
        if map[l as usize] == u8::MAX {
            map[l as usize] = next;
            next += 1;
        }
        map[l as usize]
    })
    .collect()
}

impl ChordDiagram2 {
    /// Builds a diagram from chord names along each strand; every name must
    /// occur exactly twice overall.
    pub fn from_strands(strand1: &[u8], strand2: &[u8]) -> Result<Self> {
        let mut count = [0u8; 256];
        for &l in strand1.iter().chain(strand2) {
            count[l as usize] += 1;
        }
        if let Some(l) = (0..256).find(|&l| count[l] != 0 && count[l] != 2) {
            return Err(Error::Malformed(format!("chord {l} has {} endpoints", count[l])));
        }
        Ok(Self::from_strands_unchecked(strand1, strand2))
    }

    pub(crate) fn from_strands_unchecked(strand1: &[u8], strand2: &[u8]) -> Self {
        ChordDiagram2 { split: strand1.len(), labels: relabel(strand1.iter().chain(strand2).copied()) }
    }

    pub fn empty() -> Self {
        ChordDiagram2 { split: 0, labels: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.labels.len() / 2
    }

    /// Endpoint counts on strands 1 and 2.
    pub fn endpoint_counts(&self) -> (usize, usize) {
        (self.split, self.labels.len() - self.split)
    }

    pub fn strand(&self, s: usize) -> &[u8] {
        if s == 1 {
            &self.labels[..self.split]
        } else {
            &self.labels[self.split..]
        }
    }

    /// The two endpoints (global indices) of each chord.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        let mut ends = vec![(usize::MAX, usize::MAX); self.degree()];
        for (i, &l) in self.labels.iter().enumerate() {
            let e = &mut ends[l as usize];
            if e.0 == usize::MAX {
                e.0 = i;
            } else {
                e.1 = i;
            }
        }
        ends
    }

    pub fn strand_of(&self, endpoint: usize) -> usize {
        if endpoint < self.split {
            1
        } else {
            2
        }
    }

    /// A chord whose endpoints are adjacent on one strand.
    pub fn has_isolated_chord(&self) -> bool {
        let adjacent = |w: &[u8]| w.windows(2).any(|p| p[0] == p[1]);
        adjacent(self.strand(1)) || adjacent(self.strand(2))
    }

    /// Numbers of chords on strand 1 only, strand 2 only, and between them.
    pub fn chord_types(&self) -> (usize, usize, usize) {
        let mut t = (0, 0, 0);
        for (a, b) in self.chords() {
            match (self.strand_of(a), self.strand_of(b)) {
                (1, 1) => t.0 += 1,
                (2, 2) => t.1 += 1,
                _ => t.2 += 1,
            }
        }
        t
    }

    /// Chords with both endpoints on one strand.
    pub fn intra_chords(&self) -> usize {
        let (a, b, _) = self.chord_types();
        a + b
    }

    /// `self` below `other` on both strands.
    pub fn stack(&self, other: &ChordDiagram2) -> ChordDiagram2 {
        let shift = self.degree() as u8;
        let s1: Vec<u8> = self.strand(1).iter().copied().chain(other.strand(1).iter().map(|l| l + shift)).collect();
        let s2: Vec<u8> = self.strand(2).iter().copied().chain(other.strand(2).iter().map(|l| l + shift)).collect();
        Self::from_strands_unchecked(&s1, &s2)
    }

    /// Packs the diagram into 128 bits: 5 bits of split, 5 bits of length,
    /// then 4 bits per endpoint.
    pub fn key(&self) -> u128 {
        debug_assert!(self.degree() <= MAX_KEY_DEGREE);
        let mut k = (self.split as u128) | ((self.labels.len() as u128) << 5);
        for (i, &l) in self.labels.iter().enumerate() {
            k |= (l as u128) << (10 + 4 * i);
        }
        k
    }

    pub fn from_key(k: u128) -> ChordDiagram2 {
        let split = (k & 31) as usize;
        let len = ((k >> 5) & 31) as usize;
        let labels = (0..len).map(|i| ((k >> (10 + 4 * i)) & 15) as u8).collect();
        ChordDiagram2 { split, labels }
    }

    /// Reads `strand1: a  strand2: b  chords: (s1:1,s2:3) ...` with
    /// endpoints numbered from 1 on each strand.
    pub fn parse(text: &str) -> Result<ChordDiagram2> {
        let bad = |t: &str| Error::Token { token: t.to_string() };
        let mut tokens = text.split_whitespace();
        let mut sizes = [0usize; 2];
        for (s, size) in sizes.iter_mut().enumerate() {
            let head = tokens.next().ok_or_else(|| Error::Malformed("missing strand size".into()))?;
            if head != format!("strand{}:", s + 1) {
                return Err(bad(head));
            }
            let n = tokens.next().ok_or_else(|| Error::Malformed("missing strand size".into()))?;
            *size = n.parse().map_err(|_| bad(n))?;
        }
        match tokens.next() {
            Some("chords:") => {}
            Some(t) => return Err(bad(t)),
            None => return Err(Error::Malformed("missing chord list".into())),
        }
        let total = sizes[0] + sizes[1];
        if total % 2 != 0 || total / 2 > MAX_KEY_DEGREE {
            return Err(Error::Malformed(format!("{total} endpoints")));
        }
        let mut labels = vec![u8::MAX; total];
        let rest: String = tokens.collect();
        let mut next = 0u8;
        for chunk in rest.split(')').map(str::trim).filter(|c| !c.is_empty()) {
            let inner = chunk.strip_prefix('(').ok_or_else(|| bad(chunk))?;
            let mut ends = [0usize; 2];
            let mut parts = inner.split(',');
            for end in ends.iter_mut() {
                let part = parts.next().ok_or_else(|| bad(chunk))?.trim();
                let (s, p) = part.split_once(':').ok_or_else(|| bad(part))?;
                let p: usize = p.parse().map_err(|_| bad(part))?;
                let (offset, size) = match s {
                    "s1" => (0, sizes[0]),
                    "s2" => (sizes[0], sizes[1]),
                    _ => return Err(bad(part)),
                };
                if p == 0 || p > size {
                    return Err(Error::OutOfRange { what: "endpoint", value: p, max: size });
                }
                *end = offset + p - 1;
            }
            if parts.next().is_some() {
                return Err(bad(chunk));
            }
            for e in ends {
                if labels[e] != u8::MAX || ends[0] == ends[1] {
                    return Err(Error::Malformed(format!("endpoint used twice in `{chunk}`")));
                }
                labels[e] = next;
            }
            next += 1;
        }
        if labels.contains(&u8::MAX) {
            return Err(Error::Malformed("some endpoints carry no chord".into()));
        }
        Ok(Self::from_strands_unchecked(&labels[..sizes[0]], &labels[sizes[0]..]))
    }
}

impl fmt::Display for ChordDiagram2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.endpoint_counts();
        write!(f, "strand1: {a}  strand2: {b}  chords:")?;
        let name = |e: usize| if e < a { format!("s1:{}", e + 1) } else { format!("s2:{}", e - a + 1) };
        for (x, y) in self.chords() {
            write!(f, " ({},{})", name(x), name(y))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ChordDiagram2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[u8]| w.iter().map(|l| (b'a' + l) as char).collect::<String>();
        write!(f, "[{}|{}]", word(self.strand(1)), word(self.strand(2)))
    }
}

/// Every chord diagram of the given degree, grouped by the number of
/// endpoints on strand 1 and, within a group, in the order the matchings are
/// generated.
pub fn all_diagrams(degree: usize, mut visit: impl FnMut(ChordDiagram2)) {
    let n = 2 * degree;
    let mut labels = vec![u8::MAX; n];
    fn rec(labels: &mut [u8], next: u8, split: usize, visit: &mut dyn FnMut(ChordDiagram2)) {
        let Some(i) = labels.iter().position(|&l| l == u8::MAX) else {
            visit(ChordDiagram2 { split, labels: labels.to_vec() });
            return;
        };
        labels[i] = next;
        for j in i + 1..labels.len() {
            if labels[j] == u8::MAX {
                labels[j] = next;
                rec(labels, next + 1, split, visit);
                labels[j] = u8::MAX;
            }
        }
        labels[i] = u8::MAX;
    }
    for split in 0..=n {
        rec(&mut labels, 0, split, &mut visit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for k in 0..=4 {
            let mut n = 0;
            all_diagrams(k, |_| n += 1);
            let matchings: usize = (1..=k).map(|i| 2 * i - 1).product();
            assert_eq!(n, (2 * k + 1) * matchings);
        }
    }

    #[test]
    fn parse_display_round_trip() {
        let d = ChordDiagram2::parse("strand1: 1  strand2: 3  chords: (s1:1,s2:3) (s2:1,s2:2)").unwrap();
        assert_eq!(d.degree(), 2);
        assert_eq!(d.endpoint_counts(), (1, 3));
        assert_eq!(ChordDiagram2::parse(&d.to_string()).unwrap(), d);
        assert!(d.has_isolated_chord());
        assert_eq!(d.chord_types(), (0, 1, 1));
        assert!(ChordDiagram2::parse("strand1: 1 strand2: 1 chords: (s1:1,s1:1)").is_err());
        assert!(ChordDiagram2::parse("strand1: 2 strand2: 0 chords:").is_err());
    }

    #[test]
    fn keys_round_trip() {
        all_diagrams(3, |d| assert_eq!(ChordDiagram2::from_key(d.key()), d));
    }

    #[test]
    fn stacking() {
        let x = ChordDiagram2::from_strands(&[0], &[0]).unwrap();
        let e = ChordDiagram2::empty();
        assert_eq!(e.stack(&x), x);
        assert_eq!(x.stack(&e), x);
        let xx = x.stack(&x);
        assert_eq!(xx.strand(1), &[0, 1]);
        assert_eq!(xx.strand(2), &[0, 1]);
    }
}
