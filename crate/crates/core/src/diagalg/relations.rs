use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::chord::{all_diagrams, ChordDiagram2};
use super::jacobi::{JacobiDiagram2, Schedule};
use super::{stack_commutator, DiagramVector, D_H, D_S};
use crate::error::{Error, Result};
use crate::linalg::{dense_rank, SparseEchelon};
use crate::scalar::{Field, Fp, Ring, PRIME_A, PRIME_B, PRIME_C, PRIME_D, PRIME_E};

/// Highest degree decided by exact rational elimination by default.
pub const EXACT_MAX_DEGREE: usize = 5;

const PRIMES: [u64; 5] = [PRIME_A, PRIME_B, PRIME_C, PRIME_D, PRIME_E];

/// The FI and 4T relations in one degree, over the basis of chord diagrams
/// without an isolated chord. FI is built into the basis: a diagram with an
/// isolated chord has no column and drops out of every vector.
///
/// With `max_intra = Some(m)` the basis is further cut down to diagrams with
/// fewer than `m` chords joining a strand to itself, which computes in the
/// quotient of `A_k(2)` by the span of the rest. A vector outside the
/// relation span there is outside it in `A_k(2)` as well.
pub struct RelationSystem {
    degree: usize,
    max_intra: Option<usize>,
    index: HashMap<u128, u32>,
    keys: Vec<u128>,
}

/// The 4T relators attached to `d`: for each endpoint `e` lying directly
/// below the lower endpoint `f` of another chord `F`, with `f'` the upper
/// endpoint of `F`,
///
/// `(e above f) - (e below f) + (e above f') - (e below f') = 0`.
///
/// Running over all diagrams of a degree yields every 4T relation.
pub fn four_term_relators(d: &ChordDiagram2) -> Vec<[(ChordDiagram2, i64); 4]> {
    let (split, _) = d.endpoint_counts();
    let labels: Vec<u8> = d.strand(1).iter().chain(d.strand(2)).copied().collect();
    let chords = d.chords();
    let mut out = Vec::new();
    for e in 0..labels.len().saturating_sub(1) {
        let f = e + 1;
        if f == split || labels[e] == labels[f] {
            continue;
        }
        let (first, other) = chords[labels[f] as usize];
        if first != f {
            continue;
        }
        let mut swapped = labels.clone();
        swapped.swap(e, f);
        let on_first = other < split;
        let shifted = |above: bool| {
            let mut l = labels.clone();
            let x = l.remove(e);
            let split = split - usize::from(e < split) + usize::from(on_first);
            let b = other - usize::from(other > e);
            l.insert(b + usize::from(above), x);
            ChordDiagram2::from_strands_unchecked(&l[..split], &l[split..])
        };
        out.push([
            (ChordDiagram2::from_strands_unchecked(&swapped[..split], &swapped[split..]), 1),
            (d.clone(), -1),
            (shifted(true), 1),
            (shifted(false), -1),
        ]);
    }
    out
}

impl RelationSystem {
    pub fn new(degree: usize, max_intra: Option<usize>) -> Result<Self> {
        if degree > super::MAX_KEY_DEGREE {
            return Err(Error::ResourceLimit(format!("degree {degree} is beyond the diagram encoding")));
        }
        let mut keys = Vec::new();
        all_diagrams(degree, |d| {
            if !d.has_isolated_chord() && max_intra.map_or(true, |m| d.intra_chords() < m) {
                keys.push(d.key());
            }
        });
        // Diagrams with many same-strand chords come first, so elimination
        // pivots on them and leaves the cross-strand ones as the quotient.
        keys.sort_by_key(|&k| (std::cmp::Reverse(ChordDiagram2::from_key(k).intra_chords()), k));
        let index = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        Ok(RelationSystem { degree, max_intra, index, keys })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn max_intra(&self) -> Option<usize> {
        self.max_intra
    }

    pub fn columns(&self) -> usize {
        self.keys.len()
    }

    pub fn column(&self, d: &ChordDiagram2) -> Option<u32> {
        self.index.get(&d.key()).copied()
    }

    pub fn basis(&self) -> impl Iterator<Item = ChordDiagram2> + '_ {
        self.keys.iter().map(|&k| ChordDiagram2::from_key(k))
    }

    /// Restricts a formal sum to the basis, merging repeated columns.
    fn restrict(&self, terms: impl IntoIterator<Item = (ChordDiagram2, i64)>) -> Vec<(u32, i64)> {
        let mut row: Vec<(u32, i64)> = terms.into_iter().filter_map(|(d, c)| self.column(&d).map(|i| (i, c))).collect();
        row.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(u32, i64)> = Vec::with_capacity(row.len());
        for (c, x) in row {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 += x,
                _ => out.push((c, x)),
            }
        }
        out.retain(|e| e.1 != 0);
        out
    }

    /// Calls `visit` on every nonzero restricted 4T relator.
    pub fn for_each_relator(&self, mut visit: impl FnMut(&[(u32, i64)])) {
        let limit = self.max_intra.map_or(usize::MAX, |m| m + 1);
        all_diagrams(self.degree, |d| {
            if d.intra_chords() >= limit {
                return;
            }
            for rel in four_term_relators(&d) {
                let row = self.restrict(rel);
                if !row.is_empty() {
                    visit(&row);
                }
            }
        });
    }

    pub fn relator_count(&self) -> usize {
        let mut n = 0;
        self.for_each_relator(|_| n += 1);
        n
    }

    /// Integer coordinates of `v` in the basis; fails on a non-integral
    /// coefficient or a degree mismatch.
    pub fn coordinates<C: Ring + Into<BigRational>>(&self, v: &DiagramVector<C>) -> Result<Vec<(u32, BigRational)>> {
        if !v.is_zero() && v.degree() != self.degree {
            return Err(Error::Inhomogeneous(v.degree(), self.degree));
        }
        let mut out: Vec<(u32, BigRational)> =
            v.terms().filter_map(|(d, c)| self.column(d).map(|i| (i, c.clone().into()))).collect();
        out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Echelon basis of the relators over `F`.
    pub fn echelon<F: Field>(&self) -> SparseEchelon<F> {
        let mut e = SparseEchelon::new(self.columns());
        let mut row: Vec<(u32, F)> = Vec::new();
        self.for_each_relator(|r| {
            row.clear();
            row.extend(r.iter().map(|&(c, x)| (c, F::from_i64(x))));
            e.insert(&row);
        });
        e
    }

    /// Dense relator matrix, for cross-checking small degrees.
    pub fn dense_rank(&self) -> usize {
        let mut rows = Vec::new();
        self.for_each_relator(|r| {
            let mut row = vec![BigRational::zero(); self.columns()];
            for &(c, x) in r {
                row[c as usize] = BigRational::from_integer(BigInt::from(x));
            }
            rows.push(row);
        });
        dense_rank(rows)
    }
}

/// `dim A_k(2)` from sparse elimination modulo a large prime.
pub fn dimension(degree: usize) -> Result<usize> {
    let sys = RelationSystem::new(degree, None)?;
    Ok(sys.columns() - sys.echelon::<Fp<PRIME_A>>().rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    InSpan,
    NotInSpan,
    /// In the span of the cut-down system, which decides nothing.
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldRun {
    /// `None` for the rationals.
    pub prime: Option<u64>,
    pub rank: usize,
    pub in_span: bool,
    pub seconds: f64,
}

/// How a membership question was decided.
#[derive(Clone, Debug, Serialize)]
pub struct SpanCertificate {
    pub degree: usize,
    pub verdict: Verdict,
    pub columns: usize,
    pub relators: usize,
    pub max_intra: Option<usize>,
    pub support: usize,
    pub runs: Vec<FieldRun>,
    pub caveat: String,
}

impl SpanCertificate {
    pub fn in_span(&self) -> bool {
        self.verdict == Verdict::InSpan
    }
}

impl fmt::Display for SpanCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree {}: {:?}", self.degree, self.verdict)?;
        write!(f, "basis {} diagrams, {} relators, vector support {}", self.columns, self.relators, self.support)?;
        if let Some(m) = self.max_intra {
            write!(f, ", same-strand chords < {m}")?;
        }
        writeln!(f)?;
        for r in &self.runs {
            let field = r.prime.map_or("Q".to_string(), |p| format!("F_{p}"));
            writeln!(f, "  {field}: rank {}, in span {}, {:.1}s", r.rank, r.in_span, r.seconds)?;
        }
        write!(f, "{}", self.caveat)
    }
}

#[derive(Clone, Debug)]
pub struct SpanOptions {
    /// Exact elimination over the rationals.
    pub exact: bool,
    /// Number of primes for modular elimination, at most 5; 0 skips it.
    pub primes: usize,
    pub max_intra: Option<usize>,
}

impl SpanOptions {
    pub fn for_degree(degree: usize) -> Self {
        if degree <= EXACT_MAX_DEGREE {
            SpanOptions { exact: true, primes: 0, max_intra: None }
        } else {
            SpanOptions { exact: false, primes: 3, max_intra: None }
        }
    }
}

fn run<F: Field>(sys: &RelationSystem, target: &[(u32, F)], prime: Option<u64>) -> FieldRun {
    let start = Instant::now();
    let mut e = sys.echelon::<F>();
    let in_span = e.contains(target);
    FieldRun { prime, rank: e.rank(), in_span, seconds: start.elapsed().as_secs_f64() }
}

fn run_prime<const P: u64>(sys: &RelationSystem, target: &[(u32, BigRational)]) -> Result<FieldRun> {
    let row = target
        .iter()
        .map(|(c, q)| Fp::<P>::from_rational(q).map(|x| (*c, x)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Unsupported(format!("a coefficient denominator is divisible by {P}")))?;
    let row: Vec<_> = row.into_iter().filter(|(_, x)| !x.is_zero()).collect();
    Ok(run(sys, &row, Some(P)))
}

/// Decides whether `v` lies in the FI + 4T span with default options.
pub fn in_relation_span<C: Ring + Into<BigRational>>(v: &DiagramVector<C>) -> Result<SpanCertificate> {
    in_relation_span_with(v, &SpanOptions::for_degree(v.degree()))
}

/// A nonzero result modulo a prime not dividing any denominator of `v`
/// shows `v` is not in the rational span (the relators are integral).
/// Agreement on membership modulo primes is strong evidence but not proof.
pub fn in_relation_span_with<C: Ring + Into<BigRational>>(v: &DiagramVector<C>, opts: &SpanOptions) -> Result<SpanCertificate> {
    if opts.primes > PRIMES.len() {
        return Err(Error::OutOfRange { what: "prime count", value: opts.primes, max: PRIMES.len() });
    }
    let sys = RelationSystem::new(v.degree(), opts.max_intra)?;
    let target = sys.coordinates(v)?;
    let mut runs = Vec::new();
    if opts.exact {
        runs.push(run::<BigRational>(&sys, &target, None));
    }
    for &p in &PRIMES[..opts.primes] {
        runs.push(match p {
            PRIME_A => run_prime::<PRIME_A>(&sys, &target)?,
            PRIME_B => run_prime::<PRIME_B>(&sys, &target)?,
            PRIME_C => run_prime::<PRIME_C>(&sys, &target)?,
            PRIME_D => run_prime::<PRIME_D>(&sys, &target)?,
            _ => run_prime::<PRIME_E>(&sys, &target)?,
        });
    }
    if runs.is_empty() {
        return Err(Error::Malformed("no field selected for elimination".into()));
    }
    let refuted = runs.iter().any(|r| !r.in_span);
    let verdict = match (refuted, opts.max_intra) {
        (true, _) => Verdict::NotInSpan,
        (false, None) => Verdict::InSpan,
        (false, Some(_)) => Verdict::Undecided,
    };
    let mut caveat = match (verdict, opts.exact) {
        (Verdict::NotInSpan, _) => "not in span: certified by the field(s) reporting false".to_string(),
        (_, true) => "decided exactly over Q".to_string(),
        _ => "in span modulo every prime tried; over Q this is not a proof".to_string(),
    };
    if opts.max_intra.is_some() {
        caveat.push_str("; computed in a quotient, so only non-membership carries over");
    }
    Ok(SpanCertificate {
        degree: v.degree(),
        verdict,
        columns: sys.columns(),
        relators: sys.relator_count(),
        max_intra: opts.max_intra,
        support: target.len(),
        runs,
        caveat,
    })
}

/// `D_H D_S - D_S D_H` in `A_7(2)` after STU expansion.
pub fn dh_ds_commutator() -> Result<DiagramVector<BigInt>> {
    let h = JacobiDiagram2::parse(D_H)?.stu_expand::<BigInt>(Schedule::First)?;
    let s = JacobiDiagram2::parse(D_S)?.stu_expand::<BigInt>(Schedule::First)?;
    Ok(stack_commutator(&h, &s).without_isolated_chords())
}

/// Certifies that `D_H` and `D_S` do not commute; `verdict` is `NotInSpan`
/// when they do not.
pub fn commutator_check(opts: &SpanOptions) -> Result<SpanCertificate> {
    in_relation_span_with(&dh_ds_commutator()?, opts)
}
