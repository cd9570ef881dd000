use std::collections::HashMap;

use super::{MorseLetter, MorseWord};
use crate::error::{Error, Result};
use crate::freegroup::{FreeWord, Letter};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Node {
    Bottom(usize),
    Top(usize),
    Crossing(usize),
    Turn(usize),
}

// Crossing slots: 0 lower-left, 1 lower-right, 2 upper-left, 3 upper-right.
// A strand entering at slot s leaves at 3 - s. Turns (cups and caps) have
// slots 0 and 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Port(Node, u8);

/// An arc of the diagram: the part of a strand between two undercrossings.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Arc {
    pub strand: usize,
    /// Index along the strand, starting at 0 at the bottom endpoint.
    pub order: usize,
}

/// A crossing with the arcs meeting it, in the direction of the under strand.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Crossing {
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
    /// Oriented crossing sign, +1 or -1.
    pub sign: i64,
}

/// Combinatorial diagram: arcs, crossings and per-strand arc lists.
#[derive(Clone, Debug)]
pub struct StringLinkDiagram {
    strands: usize,
    arcs: Vec<Arc>,
    crossings: Vec<Crossing>,
    strand_arcs: Vec<Vec<usize>>,
    /// For each strand, the crossings it passes under, bottom to top.
    strand_unders: Vec<Vec<usize>>,
}

impl StringLinkDiagram {
    pub(crate) fn trace(word: &MorseWord) -> Result<StringLinkDiagram> {
        let mut wires: HashMap<Port, Port> = HashMap::new();
        let connect = |a: Port, b: Port, wires: &mut HashMap<Port, Port>| {
            wires.insert(a, b);
            wires.insert(b, a);
        };
        let mut row: Vec<Port> = (1..=word.strands).map(|i| Port(Node::Bottom(i), 0)).collect();
        let mut kinds: Vec<bool> = Vec::new();
        let mut turns = 0usize;
        for letter in &word.letters {
            match *letter {
                MorseLetter::Crossing { position: p, positive } => {
                    let c = Node::Crossing(kinds.len());
                    kinds.push(positive);
                    connect(row[p - 1], Port(c, 0), &mut wires);
                    connect(row[p], Port(c, 1), &mut wires);
                    row[p - 1] = Port(c, 2);
                    row[p] = Port(c, 3);
                }
                MorseLetter::Cup(p) => {
                    let t = Node::Turn(turns);
                    turns += 1;
                    row.insert(p - 1, Port(t, 1));
                    row.insert(p - 1, Port(t, 0));
                }
                MorseLetter::Cap(p) => {
                    let t = Node::Turn(turns);
                    turns += 1;
                    connect(row[p - 1], Port(t, 0), &mut wires);
                    connect(row[p], Port(t, 1), &mut wires);
                    row.drain(p - 1..p + 1);
                }
            }
        }
        for (j, &port) in row.iter().enumerate() {
            connect(port, Port(Node::Top(j + 1), 0), &mut wires);
        }

        // Walk every strand, recording how it meets each crossing.
        struct Pass {
            crossing: usize,
            upward: bool,
            over: bool,
        }
        let mut passes: Vec<Vec<Pass>> = Vec::with_capacity(word.strands);
        let mut visits = vec![0u8; kinds.len()];
        let mut turn_visits = vec![0u8; turns];
        let limit = wires.len() + 2;
        for i in 1..=word.strands {
            let mut cur = Port(Node::Bottom(i), 0);
            let mut list = Vec::new();
            let mut steps = 0;
            loop {
                steps += 1;
                if steps > limit {
                    return Err(Error::Malformed("strand does not terminate".into()));
                }
                let next = *wires
                    .get(&cur)
                    .ok_or_else(|| Error::Malformed("dangling strand end".into()))?;
                match next.0 {
                    Node::Top(j) => {
                        if j != i {
                            return Err(Error::Malformed(format!(
                                "strand starting at bottom {i} ends at top {j}"
                            )));
                        }
                        break;
                    }
                    Node::Bottom(j) => {
                        return Err(Error::Malformed(format!(
                            "strand starting at bottom {i} returns to bottom {j}"
                        )));
                    }
                    Node::Crossing(c) => {
                        let slot = next.1;
                        let positive = kinds[c];
                        // lower-left/upper-right path is over for X, the other for x
                        let on_main_diagonal = slot == 0 || slot == 3;
                        list.push(Pass { crossing: c, upward: slot < 2, over: on_main_diagonal == positive });
                        visits[c] += 1;
                        cur = Port(next.0, 3 - slot);
                    }
                    Node::Turn(t) => {
                        turn_visits[t] += 1;
                        cur = Port(next.0, 1 - next.1);
                    }
                }
            }
            passes.push(list);
        }
        if visits.iter().any(|&v| v != 2) || turn_visits.iter().any(|&v| v != 1) {
            return Err(Error::Malformed("diagram has a closed component".into()));
        }

        // Arcs and crossing data.
        let mut arcs = Vec::new();
        let mut strand_arcs = Vec::with_capacity(word.strands);
        let mut over_arc = vec![usize::MAX; kinds.len()];
        let mut over_dir = vec![0i64; kinds.len()];
        let mut under: Vec<Option<(usize, usize, i64)>> = vec![None; kinds.len()];
        let mut strand_unders = Vec::with_capacity(word.strands);
        for (s, list) in passes.iter().enumerate() {
            let mut current = arcs.len();
            arcs.push(Arc { strand: s + 1, order: 0 });
            let mut ids = vec![current];
            let mut unders = Vec::new();
            for pass in list {
                let dir = if pass.upward { 1 } else { -1 };
                if pass.over {
                    over_arc[pass.crossing] = current;
                    over_dir[pass.crossing] = dir;
                } else {
                    let next = arcs.len();
                    arcs.push(Arc { strand: s + 1, order: ids.len() });
                    ids.push(next);
                    under[pass.crossing] = Some((current, next, dir));
                    unders.push(pass.crossing);
                    current = next;
                }
            }
            strand_arcs.push(ids);
            strand_unders.push(unders);
        }
        let crossings = (0..kinds.len())
            .map(|c| {
                let (under_in, under_out, under_dir) = under[c].expect("every crossing has an under strand");
                let geometric = if kinds[c] { 1 } else { -1 };
                Crossing { over: over_arc[c], under_in, under_out, sign: geometric * over_dir[c] * under_dir }
            })
            .collect();
        Ok(StringLinkDiagram { strands: word.strands, arcs, crossings, strand_arcs, strand_unders })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Arc ids of strand `i` (1-based), bottom to top.
    pub fn strand_arcs(&self, i: usize) -> &[usize] {
        &self.strand_arcs[i - 1]
    }

    /// Crossings that strand `i` passes under, bottom to top.
    pub fn strand_unders(&self, i: usize) -> &[usize] {
        &self.strand_unders[i - 1]
    }

    /// Sum of signs of crossings of strand `i` with itself.
    pub fn self_writhe(&self, i: usize) -> i64 {
        self.crossings
            .iter()
            .filter(|c| self.arcs[c.over].strand == i && self.arcs[c.under_in].strand == i)
            .map(|c| c.sign)
            .sum()
    }

    /// Sum of signs of crossings between strands `i` and `j` (both orders).
    pub fn mixed_crossing_sum(&self, i: usize, j: usize) -> i64 {
        self.crossings
            .iter()
            .filter(|c| {
                let (a, b) = (self.arcs[c.over].strand, self.arcs[c.under_in].strand);
                (a == i && b == j) || (a == j && b == i)
            })
            .map(|c| c.sign)
            .sum()
    }

    pub fn wirtinger(&self) -> WirtingerPresentation {
        let rank = self.arcs.len();
        let relations = self
            .crossings
            .iter()
            .map(|c| {
                // out^-1 over^e in over^-e
                let o = Letter::new(c.over + 1, c.sign < 0);
                let raw = vec![
                    Letter::new(c.under_out + 1, true),
                    o,
                    Letter::new(c.under_in + 1, false),
                    o.inverse(),
                ];
                FreeWord::from_letters_unchecked(rank, raw)
            })
            .collect();
        let meridians = self.strand_arcs.iter().map(|ids| ids[0]).collect();
        WirtingerPresentation { generators: rank, relations, meridians }
    }
}

/// One generator per arc, one relator `out^-1 o^e in o^-e` per crossing.
#[derive(Clone, Debug)]
pub struct WirtingerPresentation {
    pub generators: usize,
    pub relations: Vec<FreeWord>,
    /// Arc id (0-based) of the bottom arc of each strand.
    pub meridians: Vec<usize>,
}

impl MorseWord {
    pub fn diagram(&self) -> Result<StringLinkDiagram> {
        StringLinkDiagram::trace(self)
    }

    pub fn wirtinger(&self) -> Result<(StringLinkDiagram, WirtingerPresentation)> {
        let d = self.diagram()?;
        let p = d.wirtinger();
        Ok((d, p))
    }
}

#[cfg(test)]
mod tests {
    use super::super::Braid;
    use super::*;

    fn braid_link(s: &str) -> MorseWord {
        MorseWord::from_braid(&Braid::parse(s, None).unwrap()).unwrap()
    }

    #[test]
    fn trivial_presentation() {
        let (d, p) = MorseWord::trivial(2).wirtinger().unwrap();
        assert_eq!(d.arcs().len(), 2);
        assert!(p.relations.is_empty());
        assert_eq!(p.meridians, vec![0, 1]);
    }

    #[test]
    fn full_twist_counts() {
        let (d, p) = braid_link("s1 s1").wirtinger().unwrap();
        assert_eq!(d.arcs().len(), 4);
        assert_eq!(p.relations.len(), 2);
        assert_eq!(d.mixed_crossing_sum(1, 2), 2);
        assert_eq!(d.self_writhe(1), 0);
    }

    #[test]
    fn arc_count_is_strands_plus_crossings() {
        for text in [
            "strands 2\nX1 x1 X1 X1",
            "strands 2\nU3 x2 X2 A2 X1 X1",
            "strands 1\nU2 X1 A2",
            "strands 3\nX1 X2 X2 X1 U4 X3 A4",
        ] {
            let w = MorseWord::parse(text).unwrap();
            let (d, p) = w.wirtinger().unwrap();
            assert_eq!(d.arcs().len(), w.strands() + w.crossing_count(), "{text}");
            assert_eq!(p.relations.len(), w.crossing_count());
            for (i, &m) in p.meridians.iter().enumerate() {
                assert_eq!(d.arcs()[m], Arc { strand: i + 1, order: 0 });
            }
        }
    }

    #[test]
    fn kink_sign() {
        // a curl on one strand: the sign depends on the crossing type only
        let pos = MorseWord::parse("strands 1\nU2 X1 A2").unwrap().diagram().unwrap();
        let neg = MorseWord::parse("strands 1\nU2 x1 A2").unwrap().diagram().unwrap();
        assert_eq!(pos.self_writhe(1) + neg.self_writhe(1), 0);
        assert_eq!(pos.self_writhe(1).abs(), 1);
    }
}
