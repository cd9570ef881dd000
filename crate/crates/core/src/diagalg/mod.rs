//! The algebra `A(2)` of chord diagrams on two upward strands modulo the
//! FI and 4T relations, with Jacobi diagrams entering through STU.

mod chord;
mod jacobi;
mod relations;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

pub use chord::{all_diagrams, ChordDiagram2, MAX_KEY_DEGREE};
pub use jacobi::{JacobiDiagram2, Schedule};
pub use relations::{
    commutator_check, dh_ds_commutator, dimension, four_term_relators, in_relation_span, in_relation_span_with,
    FieldRun, RelationSystem, SpanCertificate, SpanOptions, Verdict, EXACT_MAX_DEGREE,
};

use crate::error::{Error, Result};
use crate::scalar::Ring;

/// The Jacobi diagram `D_H` of degree 3.
pub const D_H: &str = include_str!("../../fixtures/D_H.jacobi");
/// The Jacobi diagram `D_S` of degree 4.
pub const D_S: &str = include_str!("../../fixtures/D_S.jacobi");

/// A homogeneous linear combination of chord diagrams.
#[derive(Clone, PartialEq)]
pub struct DiagramVector<C> {
    degree: usize,
    terms: BTreeMap<ChordDiagram2, C>,
}

impl<C: Ring> DiagramVector<C> {
    pub fn zero(degree: usize) -> Self {
        DiagramVector { degree, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: ChordDiagram2) -> Self {
        let mut v = Self::zero(d.degree());
        v.terms.insert(d, C::one());
        v
    }

    /// Collects terms, rejecting mixed degrees.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (ChordDiagram2, C)>) -> Result<Self> {
        let mut v = Self::zero(degree);
        for (d, c) in terms {
            if d.degree() != degree {
                return Err(Error::Inhomogeneous(degree, d.degree()));
            }
            v.add_term(d, c);
        }
        Ok(v)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChordDiagram2, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &ChordDiagram2) -> C {
        self.terms.get(d).cloned().unwrap_or_else(C::zero)
    }

    pub(crate) fn add_term(&mut self, d: ChordDiagram2, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut v = Self::zero(self.degree);
        for (d, x) in &self.terms {
            v.add_term(d.clone(), x.clone() * c.clone());
        }
        v
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.is_zero() && !other.is_zero() && self.degree != other.degree {
            return Err(Error::Inhomogeneous(self.degree, other.degree));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut v = DiagramVector { degree, terms: self.terms.clone() };
        for (d, x) in &other.terms {
            v.add_term(d.clone(), x.clone());
        }
        Ok(v)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-C::one()))
    }

    /// Drops diagrams with an isolated chord, which vanish in `A(2)`.
    pub fn without_isolated_chords(&self) -> Self {
        let terms = self.terms.iter().filter(|(d, _)| !d.has_isolated_chord()).map(|(d, c)| (d.clone(), c.clone()));
        DiagramVector { degree: self.degree, terms: terms.collect() }
    }
}

/// Bilinear extension of stacking: `u` below `v`.
pub fn stack_product<C: Ring>(u: &DiagramVector<C>, v: &DiagramVector<C>) -> DiagramVector<C> {
    let mut out = DiagramVector::zero(u.degree + v.degree);
    for (a, x) in &u.terms {
        for (b, y) in &v.terms {
            out.add_term(a.stack(b), x.clone() * y.clone());
        }
    }
    out
}

/// `u v - v u`.
pub fn stack_commutator<C: Ring>(u: &DiagramVector<C>, v: &DiagramVector<C>) -> DiagramVector<C> {
    let mut out = stack_product(u, v);
    for (d, c) in stack_product(v, u).terms {
        out.add_term(d, -c);
    }
    out
}

impl<C: Ring + fmt::Display> fmt::Display for DiagramVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (d, c) in &self.terms {
            writeln!(f, "{c}  {d}")?;
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for DiagramVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
