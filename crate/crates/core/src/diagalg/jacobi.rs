use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chord::ChordDiagram2;
use super::DiagramVector;
use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Which trivalent vertex STU eliminates next. The candidates are all
/// (vertex, adjacent leg) pairs in node order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    First,
    Last,
    Seeded(u64),
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Schedule::First),
            "last" => Ok(Schedule::Last),
            _ => match s.strip_prefix("seed:").map(str::parse) {
                Some(Ok(seed)) => Ok(Schedule::Seeded(seed)),
                _ => Err(Error::Token { token: s.to_string() }),
            },
        }
    }
}

const NONE: (u32, u8) = (u32::MAX, 0);

/// A Jacobi diagram on two upward strands.
///
/// Nodes are legs (univalent, on a strand) or trivalent vertices with a
/// cyclic order of their three half-edges. `link[3 * n + s]` is the half-edge
/// at the other end of slot `s` of node `n`; legs only use slot 0.
///
/// Text form, one item per line, `#` starts a comment:
///
/// ```text
/// strand 1: l0 l3        legs bottom to top
/// strand 2: l1 l2
/// vertex a: l0 l1 b      neighbours in cyclic order
/// vertex b: l2 l3 a
/// chord l4 l5            an edge joining two legs
/// ```
#[derive(Clone, PartialEq, Eq)]
pub struct JacobiDiagram2 {
    names: Vec<String>,
    trivalent: Vec<bool>,
    link: Vec<(u32, u8)>,
    strands: [Vec<u32>; 2],
}

impl JacobiDiagram2 {
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut trivalent = Vec::new();
        let mut strands: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
        let mut vertices: Vec<(u32, Vec<String>)> = Vec::new();
        let mut chords: Vec<(String, String)> = Vec::new();
        let mut declare = |name: &str, tri: bool, names: &mut Vec<String>, trivalent: &mut Vec<bool>| {
            if ids.contains_key(name) {
                return Err(Error::Malformed(format!("`{name}` declared twice")));
            }
            let id = names.len() as u32;
            ids.insert(name.to_string(), id);
            names.push(name.to_string());
            trivalent.push(tri);
            Ok(id)
        };
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = match line.split_once(':') {
                Some((h, r)) => (h.trim(), r),
                None => (line, ""),
            };
            let words: Vec<&str> = head.split_whitespace().collect();
            match words.as_slice() {
                ["strand", s] => {
                    let s: usize = s.parse().map_err(|_| Error::Token { token: s.to_string() })?;
                    if s != 1 && s != 2 {
                        return Err(Error::OutOfRange { what: "strand", value: s, max: 2 });
                    }
                    for leg in rest.split_whitespace() {
                        let id = declare(leg, false, &mut names, &mut trivalent)?;
                        strands[s - 1].push(id);
                    }
                }
                ["vertex", v] => {
                    let id = declare(v, true, &mut names, &mut trivalent)?;
                    let nbrs: Vec<String> = rest.split_whitespace().map(String::from).collect();
                    if nbrs.len() != 3 {
                        return Err(Error::Malformed(format!("vertex `{v}` has {} neighbours", nbrs.len())));
                    }
                    vertices.push((id, nbrs));
                }
                ["chord", a, b] if rest.is_empty() => chords.push((a.to_string(), b.to_string())),
                _ => return Err(Error::Token { token: line.to_string() }),
            }
        }
        let lookup = |n: &str| ids.get(n).copied().ok_or_else(|| Error::Malformed(format!("unknown node `{n}`")));
        let mut link = vec![NONE; 3 * names.len()];
        let join = |a: (u32, u8), b: (u32, u8), link: &mut Vec<(u32, u8)>| {
            for h in [a, b] {
                if link[3 * h.0 as usize + h.1 as usize] != NONE {
                    return Err(Error::Malformed(format!("`{}` has too many edges", names[h.0 as usize])));
                }
            }
            link[3 * a.0 as usize + a.1 as usize] = b;
            link[3 * b.0 as usize + b.1 as usize] = a;
            Ok(())
        };
        for (a, b) in &chords {
            let (a, b) = (lookup(a)?, lookup(b)?);
            if trivalent[a as usize] || trivalent[b as usize] || a == b {
                return Err(Error::Malformed("a chord joins two distinct legs".into()));
            }
            join((a, 0), (b, 0), &mut link)?;
        }
        // The i-th mention of w in v's list pairs with the i-th mention of v in
        // w's list; a self-loop pairs consecutive mentions.
        let neighbour_ids: Vec<(u32, Vec<u32>)> = vertices
            .iter()
            .map(|(v, ns)| Ok((*v, ns.iter().map(|n| lookup(n)).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<_>>()?;
        let slots: HashMap<u32, &Vec<u32>> = neighbour_ids.iter().map(|(v, ns)| (*v, ns)).collect();
        for (v, ns) in &neighbour_ids {
            for (i, &w) in ns.iter().enumerate() {
                if link[3 * *v as usize + i] != NONE {
                    continue;
                }
                if !trivalent[w as usize] {
                    join((*v, i as u8), (w, 0), &mut link)?;
                    continue;
                }
                let back = slots[&w];
                let j = (0..3)
                    .find(|&j| back[j] == *v && link[3 * w as usize + j] == NONE && (w != *v || j != i))
                    .ok_or_else(|| Error::Malformed(format!("edge {}-{} is not listed at both ends", names[*v as usize], names[w as usize])))?;
                join((*v, i as u8), (w, j as u8), &mut link)?;
            }
        }
        for (n, &tri) in trivalent.iter().enumerate() {
            let used = if tri { 3 } else { 1 };
            if (0..used).any(|s| link[3 * n + s] == NONE) {
                return Err(Error::Malformed(format!("`{}` has too few edges", names[n])));
            }
        }
        if names.len() % 2 != 0 {
            return Err(Error::Malformed("odd number of vertices".into()));
        }
        Ok(JacobiDiagram2 { names, trivalent, link, strands })
    }

    pub fn degree(&self) -> usize {
        self.names.len() / 2
    }

    pub fn trivalent_count(&self) -> usize {
        self.trivalent.iter().filter(|&&t| t).count()
    }

    /// Reverses the cyclic order at the named trivalent vertex.
    pub fn reverse_vertex(&self, name: &str) -> Result<Self> {
        let v = self
            .names
            .iter()
            .position(|n| n == name)
            .filter(|&v| self.trivalent[v])
            .ok_or_else(|| Error::Malformed(format!("no vertex `{name}`")))?;
        // Swapping slots 1 and 2 reverses a 3-cycle.
        let swap = |h: (u32, u8)| if h.0 as usize == v && h.1 != 0 { (h.0, 3 - h.1) } else { h };
        let mut out = self.clone();
        for (s, old) in [0, 2, 1].into_iter().enumerate() {
            out.link[3 * v + s] = swap(self.link[3 * v + old]);
        }
        for s in 0..3 {
            let h = out.link[3 * v + s];
            if h.0 as usize != v {
                out.link[3 * h.0 as usize + h.1 as usize] = (v as u32, s as u8);
            }
        }
        Ok(out)
    }

    /// Fails on a connected component that touches neither strand.
    fn check_components(&self) -> Result<()> {
        let n = self.names.len();
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = self.strands.iter().flatten().map(|&l| l as usize).collect();
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            let used = if self.trivalent[x] { 3 } else { 1 };
            stack.extend((0..used).map(|s| self.link[3 * x + s].0 as usize));
        }
        match seen.iter().position(|s| !s) {
            Some(x) => Err(Error::Unsupported(format!("component of `{}` does not meet a strand", self.names[x]))),
            None => Ok(()),
        }
    }

    /// Reads off the chord diagram once no trivalent vertex remains.
    fn as_chord_diagram(&self) -> ChordDiagram2 {
        let label = |&l: &u32| l.min(self.link[3 * l as usize].0) as u8;
        let s1: Vec<u8> = self.strands[0].iter().map(label).collect();
        let s2: Vec<u8> = self.strands[1].iter().map(label).collect();
        ChordDiagram2::from_strands_unchecked(&s1, &s2)
    }

    fn candidates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in (0..self.names.len()).filter(|&v| self.trivalent[v]) {
            for s in 0..3 {
                if !self.trivalent[self.link[3 * v + s].0 as usize] {
                    out.push((v, s));
                }
            }
        }
        out
    }

    /// One STU step at vertex `v` through its slot `s`, which holds a leg
    /// `u`. With `(u, x, y)` the cyclic order at `v`, the result is `T - U`
    /// where `T` carries the new leg towards `x` just below the one towards
    /// `y` and `U` the reverse. `None` means a self-loop, which is zero.
    fn stu(&self, v: usize, s: usize) -> Option<(Self, Self)> {
        let u = self.link[3 * v + s].0 as usize;
        let hx = self.link[3 * v + (s + 1) % 3];
        let hy = self.link[3 * v + (s + 2) % 3];
        if hx.0 as usize == v {
            return None;
        }
        let mut base = self.clone();
        // u becomes the leg towards x, v the leg towards y.
        base.trivalent[v] = false;
        base.link[3 * u] = hx;
        base.link[3 * hx.0 as usize + hx.1 as usize] = (u as u32, 0);
        base.link[3 * v] = hy;
        base.link[3 * hy.0 as usize + hy.1 as usize] = (v as u32, 0);
        base.link[3 * v + 1] = NONE;
        base.link[3 * v + 2] = NONE;
        let (strand, pos) = base
            .strands
            .iter()
            .enumerate()
            .find_map(|(i, st)| st.iter().position(|&l| l as usize == u).map(|p| (i, p)))
            .expect("leg lies on a strand");
        let mut t = base.clone();
        t.strands[strand].insert(pos + 1, v as u32);
        let mut w = base;
        w.strands[strand].insert(pos, v as u32);
        Some((t, w))
    }

    /// Expands into chord diagrams by repeated STU.
    pub fn stu_expand<C: Ring>(&self, schedule: Schedule) -> Result<DiagramVector<C>> {
        self.check_components()?;
        let mut rng = match schedule {
            Schedule::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut out = DiagramVector::zero(self.degree());
        let mut work: Vec<(Self, i64)> = vec![(self.clone(), 1)];
        while let Some((j, sign)) = work.pop() {
            let cands = j.candidates();
            let Some(&first) = cands.first() else {
                out.add_term(j.as_chord_diagram(), C::from_i64(sign));
                continue;
            };
            let (v, s) = match (schedule, rng.as_mut()) {
                (Schedule::Last, _) => *cands.last().unwrap(),
                (Schedule::Seeded(_), Some(r)) => cands[r.gen_range(0..cands.len())],
                _ => first,
            };
            if let Some((t, u)) = j.stu(v, s) {
                work.push((t, sign));
                work.push((u, -sign));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for JacobiDiagram2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, st) in self.strands.iter().enumerate() {
            write!(f, "strand {}:", i + 1)?;
            for &l in st {
                write!(f, " {}", self.names[l as usize])?;
            }
            writeln!(f)?;
        }
        for v in (0..self.names.len()).filter(|&v| self.trivalent[v]) {
            write!(f, "vertex {}:", self.names[v])?;
            for s in 0..3 {
                write!(f, " {}", self.names[self.link[3 * v + s].0 as usize])?;
            }
            writeln!(f)?;
        }
        for l in self.strands.iter().flatten() {
            let m = self.link[3 * *l as usize].0;
            if !self.trivalent[m as usize] && *l < m {
                writeln!(f, "chord {} {}", self.names[*l as usize], self.names[m as usize])?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for JacobiDiagram2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn expand(text: &str) -> DiagramVector<BigInt> {
        JacobiDiagram2::parse(text).unwrap().stu_expand(Schedule::First).unwrap()
    }

    #[test]
    fn chord_diagram_expands_to_itself() {
        let v = expand("strand 1: a c\nstrand 2: b d\nchord a d\nchord c b\n");
        let d = ChordDiagram2::from_strands(&[0, 1], &[1, 0]).unwrap();
        assert_eq!(v, DiagramVector::from_diagram(d));
    }

    #[test]
    fn y_diagram_is_a_difference() {
        let v = expand("strand 1: p\nstrand 2: q r\nvertex y: p q r\n");
        assert_eq!(v.len(), 2);
        let t = ChordDiagram2::from_strands(&[0, 1], &[0, 1]).unwrap();
        let u = ChordDiagram2::from_strands(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(v.coefficient(&t), BigInt::from(1));
        assert_eq!(v.coefficient(&u), BigInt::from(-1));
    }

    #[test]
    fn display_round_trips() {
        for text in [super::super::D_H, super::super::D_S, "strand 1: a\nstrand 2: b\nchord a b\n"] {
            let j = JacobiDiagram2::parse(text).unwrap();
            assert_eq!(JacobiDiagram2::parse(&j.to_string()).unwrap().to_string(), j.to_string());
        }
    }

    #[test]
    fn reversing_a_vertex_negates() {
        let j = JacobiDiagram2::parse(super::super::D_H).unwrap();
        let a: DiagramVector<BigInt> = j.stu_expand(Schedule::First).unwrap();
        let b: DiagramVector<BigInt> = j.reverse_vertex("a").unwrap().stu_expand(Schedule::First).unwrap();
        assert_eq!(a.add(&b).unwrap(), DiagramVector::zero(3));
    }

    #[test]
    fn malformed_inputs() {
        assert!(JacobiDiagram2::parse("strand 1: a\nstrand 2: b\n").is_err());
        assert!(JacobiDiagram2::parse("strand 3: a b\nchord a b\n").is_err());
        assert!(JacobiDiagram2::parse("strand 1: a a\n").is_err());
        assert!(JacobiDiagram2::parse("strand 1: a\nvertex v: a b\n").is_err());
        assert!(JacobiDiagram2::parse("strand 1: p\nstrand 2: q\nvertex y: p q z\n").is_err());
        let floating = "strand 1: a\nstrand 2: b\nchord a b\nvertex x: y y y\nvertex y: x x x\n";
        let j = JacobiDiagram2::parse(floating).unwrap();
        assert!(matches!(j.stu_expand::<BigInt>(Schedule::First), Err(Error::Unsupported(_))));
    }
}
