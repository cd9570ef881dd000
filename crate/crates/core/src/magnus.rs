//! Truncated noncommutative power series and the Magnus expansion.
//!
//! A series in `rank` noncommuting variables is stored densely, degree by
//! degree: the block of degree `d` holds `rank^d` coefficients indexed by the
//! monomial read as a base-`rank` numeral. Within a block this index order is
//! the lexicographic order of monomials (`X < Y`), which is also the printing
//! order.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::FreeWord;
use crate::scalar::Ring;

/// Largest dense table we are willing to allocate for one series.
const MAX_DENSE_TERMS: usize = 1 << 24;

/// A word in the variables `X_1..X_n` (1-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(pub Vec<usize>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    /// Parses the letter notation (`XYYX` for rank 2, `X1X3X2` otherwise).
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        let bad = || Error::Token { token: text.to_string() };
        let mut vars = Vec::new();
        if rank <= 2 {
            for c in text.chars() {
                match c {
                    'X' => vars.push(1),
                    'Y' if rank == 2 => vars.push(2),
                    _ => return Err(bad()),
                }
            }
        } else {
            let mut rest = text;
            while !rest.is_empty() {
                rest = rest.strip_prefix('X').ok_or_else(bad)?;
                let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
                let v: usize = rest[..end].parse().map_err(|_| bad())?;
                if v == 0 || v > rank {
                    return Err(bad());
                }
                vars.push(v);
                rest = &rest[end..];
            }
        }
        Ok(Monomial(vars))
    }

    /// Letter notation for the given rank; the unit monomial prints as `1`.
    pub fn display(&self, rank: usize) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        for &v in &self.0 {
            if rank <= 2 {
                s.push(if v == 1 { 'X' } else { 'Y' });
            } else {
                s.push('X');
                s.push_str(&v.to_string());
            }
        }
        s
    }
}

/// Power series in `rank` noncommuting variables, truncated above degree `cap`.
#[derive(Clone, PartialEq)]
pub struct TruncSeries<C> {
    rank: usize,
    cap: usize,
    coeffs: Vec<C>,
}

fn layout(rank: usize, cap: usize) -> Result<Vec<usize>> {
    let mut offsets = Vec::with_capacity(cap + 2);
    let mut total = 0usize;
    let mut block = 1usize;
    for _ in 0..=cap {
        offsets.push(total);
        total = total
            .checked_add(block)
            .filter(|&t| t <= MAX_DENSE_TERMS)
            .ok_or_else(|| {
                Error::ResourceLimit(format!("series with rank {rank} and cap {cap} is too large"))
            })?;
        block = block.saturating_mul(rank.max(1));
    }
    offsets.push(total);
    Ok(offsets)
}

impl<C: Ring> TruncSeries<C> {
    pub fn zero(rank: usize, cap: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Malformed("series rank must be positive".into()));
        }
        let total = *layout(rank, cap)?.last().unwrap();
        Ok(TruncSeries { rank, cap, coeffs: vec![C::zero(); total] })
    }

    pub fn unit(rank: usize, cap: usize) -> Result<Self> {
        let mut s = Self::zero(rank, cap)?;
        s.coeffs[0] = C::one();
        Ok(s)
    }

    /// `1 + X_var`.
    pub fn generator(rank: usize, cap: usize, var: usize) -> Result<Self> {
        let mut s = Self::unit(rank, cap)?;
        s.check_var(var)?;
        if cap >= 1 {
            s.coeffs[1 + var - 1] = C::one();
        }
        Ok(s)
    }

    /// `(1 + X_var)^-1 = 1 - X_var + X_var^2 - ...`.
    pub fn generator_inverse(rank: usize, cap: usize, var: usize) -> Result<Self> {
        let one = Self::unit(rank, cap)?;
        one.check_var(var)?;
        Ok(one.mul_var_series(var, &alternating(cap)))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var == 0 || var > self.rank {
            return Err(Error::OutOfRange { what: "variable", value: var, max: self.rank });
        }
        Ok(())
    }

    fn offset(&self, d: usize) -> usize {
        // sum_{e<d} rank^e
        if self.rank == 1 {
            d
        } else {
            (self.rank.pow(d as u32) - 1) / (self.rank - 1)
        }
    }

    fn block(&self, d: usize) -> usize {
        self.rank.pow(d as u32)
    }

    fn index_of(&self, m: &Monomial) -> usize {
        let mut idx = 0;
        for &v in &m.0 {
            idx = idx * self.rank + (v - 1);
        }
        self.offset(m.degree()) + idx
    }

    fn monomial_at(&self, d: usize, mut idx: usize) -> Monomial {
        let mut vars = vec![0; d];
        for slot in vars.iter_mut().rev() {
            *slot = idx % self.rank + 1;
            idx /= self.rank;
        }
        Monomial(vars)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        if self.cap != other.cap {
            return Err(Error::Malformed(format!(
                "degree caps differ: {} vs {}",
                self.cap, other.cap
            )));
        }
        Ok(())
    }

    pub fn coeff(&self, m: &Monomial) -> Result<C> {
        if m.degree() > self.cap {
            return Err(Error::OutOfRange { what: "monomial degree", value: m.degree(), max: self.cap });
        }
        if let Some(&v) = m.0.iter().find(|&&v| v == 0 || v > self.rank) {
            return Err(Error::OutOfRange { what: "variable", value: v, max: self.rank });
        }
        Ok(self.coeffs[self.index_of(m)].clone())
    }

    pub fn set_coeff(&mut self, m: &Monomial, value: C) -> Result<()> {
        self.coeff(m)?;
        let i = self.index_of(m);
        self.coeffs[i] = value;
        Ok(())
    }

    pub fn constant(&self) -> &C {
        &self.coeffs[0]
    }

    /// Nonzero terms in printing order (degree, then lexicographic).
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &C)> + '_ {
        (0..=self.cap).flat_map(move |d| {
            let off = self.offset(d);
            (0..self.block(d)).filter_map(move |i| {
                let c = &self.coeffs[off + i];
                (!c.is_zero()).then(|| (self.monomial_at(d, i), c))
            })
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Smallest positive degree carrying a nonzero coefficient.
    pub fn lowest_nonconstant_degree(&self) -> Option<usize> {
        (1..=self.cap).find(|&d| {
            let off = self.offset(d);
            self.coeffs[off..off + self.block(d)].iter().any(|c| !c.is_zero())
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(TruncSeries { rank: self.rank, cap: self.cap, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(TruncSeries { rank: self.rank, cap: self.cap, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_upto(other, self.cap))
    }

    /// Product with every degree above `limit` left at zero.
    pub(crate) fn mul_upto(&self, other: &Self, limit: usize) -> Self {
        let limit = limit.min(self.cap);
        let mut out = vec![C::zero(); self.coeffs.len()];
        for d1 in 0..=limit {
            let off1 = self.offset(d1);
            for i1 in 0..self.block(d1) {
                let a = &self.coeffs[off1 + i1];
                if a.is_zero() {
                    continue;
                }
                for d2 in 0..=(limit - d1) {
                    let off2 = other.offset(d2);
                    let width = other.block(d2);
                    let base = self.offset(d1 + d2) + i1 * width;
                    let dst = &mut out[base..base + width];
                    for (slot, b) in dst.iter_mut().zip(&other.coeffs[off2..off2 + width]) {
                        if !b.is_zero() {
                            slot.add_mul(a, b);
                        }
                    }
                }
            }
        }
        TruncSeries { rank: self.rank, cap: self.cap, coeffs: out }
    }

    /// Right multiplication by `sum_k powers[k] X_var^k`, which costs one pass
    /// over the coefficients per power instead of a full product.
    pub(crate) fn mul_var_series(&self, var: usize, powers: &[C]) -> Self {
        let mut out = vec![C::zero(); self.coeffs.len()];
        for d in 0..=self.cap {
            let off = self.offset(d);
            for i in 0..self.block(d) {
                let a = &self.coeffs[off + i];
                if a.is_zero() {
                    continue;
                }
                let mut idx = i;
                for (k, p) in powers.iter().enumerate() {
                    if d + k > self.cap {
                        break;
                    }
                    if k > 0 {
                        idx = idx * self.rank + (var - 1);
                    }
                    if !p.is_zero() {
                        out[self.offset(d + k) + idx].add_mul(a, p);
                    }
                }
            }
        }
        TruncSeries { rank: self.rank, cap: self.cap, coeffs: out }
    }

    /// Drops every term above degree `limit`.
    pub fn truncate(&self, limit: usize) -> Self {
        let mut s = self.clone();
        if limit < self.cap {
            let from = self.offset(limit + 1);
            for c in &mut s.coeffs[from..] {
                *c = C::zero();
            }
        }
        s
    }

    /// Inverse of a series with constant term 1, as `sum_k (1 - s)^k`.
    pub fn inverse_unipotent(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Malformed("series inverse needs constant term 1".into()));
        }
        let one = Self::unit(self.rank, self.cap)?;
        let nil = one.sub(self)?;
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.cap {
            power = power.mul(&nil)?;
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries { rank: self.rank, cap: self.cap, coeffs: self.coeffs.iter().map(f).collect() }
    }
}

fn alternating<C: Ring>(cap: usize) -> Vec<C> {
    (0..=cap).map(|k| if k % 2 == 0 { C::one() } else { -C::one() }).collect()
}

/// Magnus expansion `x_i -> 1 + X_i`, truncated above degree `cap`.
pub fn expand<C: Ring>(w: &FreeWord, rank: usize, cap: usize) -> Result<TruncSeries<C>> {
    if w.rank() > rank {
        return Err(Error::RankMismatch { left: w.rank(), right: rank });
    }
    let plus: Vec<C> = vec![C::one(), C::one()];
    let minus: Vec<C> = alternating(cap);
    let mut s = TruncSeries::unit(rank, cap)?;
    for l in w.letters() {
        let powers = if l.is_inverse() { &minus } else { &plus };
        s = s.mul_var_series(l.generator(), powers);
    }
    Ok(s)
}

impl<C: Ring + fmt::Display> TruncSeries<C> {
    /// Signed terms in graded lexicographic order, coefficient 1 suppressed,
    /// e.g. `1-XXXYXYYY+5XXYXXYYY`.
    pub fn format(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mono = m.display(self.rank);
            if m.degree() == 0 {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                }
                out.push_str(&mono);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Term {
            coeff: String,
            monomial: String,
        }
        let terms: Vec<Term> = self
            .terms()
            .map(|(m, c)| Term { coeff: c.to_string(), monomial: m.display(self.rank) })
            .collect();
        serde_json::to_string_pretty(&terms).expect("plain strings serialize")
    }
}

impl TruncSeries<BigInt> {
    /// Parses the output of [`TruncSeries::format`].
    pub fn parse(rank: usize, cap: usize, text: &str) -> Result<Self> {
        let mut s = Self::zero(rank, cap)?;
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(s);
        }
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let neg = rest.starts_with('-');
            if rest.starts_with('-') || rest.starts_with('+') {
                rest = &rest[1..];
            }
            let end = rest[1..].find(['+', '-']).map(|e| e + 1).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            let split = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
            let (digits, mono) = term.split_at(split);
            let mut c: BigInt = if digits.is_empty() {
                BigInt::one()
            } else {
                digits.parse().map_err(|_| Error::Token { token: term.to_string() })?
            };
            if neg {
                c = -c;
            }
            let m = if mono.is_empty() { Monomial::unit() } else { Monomial::parse(rank, mono)? };
            let old = s.coeff(&m)?;
            s.set_coeff(&m, old + c)?;
        }
        Ok(s)
    }
}

impl<C: Ring + fmt::Display> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl<C: Ring + fmt::Display> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries[n={}, cap={}]({})", self.rank, self.cap, self.format())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Series;
    use proptest::prelude::*;

    fn w(rank: usize, s: &str) -> FreeWord {
        FreeWord::parse(rank, s).unwrap()
    }

    fn m(s: &str) -> Monomial {
        Monomial::parse(2, s).unwrap()
    }

    #[test]
    fn expand_examples() {
        let s: Series = expand(&w(2, "x1"), 2, 3).unwrap();
        assert_eq!(s.format(), "1+X");
        let s: Series = expand(&w(2, "x1'"), 2, 2).unwrap();
        assert_eq!(s.format(), "1-X+XX");
        let c = w(2, "x1").commutator(&w(2, "x2")).unwrap();
        let s: Series = expand(&c, 2, 2).unwrap();
        assert_eq!(s.format(), "1+XY-YX");
    }

    #[test]
    fn mul_examples() {
        let x = Series::generator(2, 3, 1).unwrap();
        let y = Series::generator(2, 3, 2).unwrap();
        let unit = Series::unit(2, 3).unwrap();
        assert_eq!(x.mul(&unit).unwrap(), x);
        assert_eq!(x.mul(&y).unwrap().format(), "1+X+Y+XY");
        let other = Series::unit(2, 4).unwrap();
        assert!(x.mul(&other).is_err());
        assert!(x.mul(&Series::unit(3, 3).unwrap()).is_err());
    }

    #[test]
    fn coeff_and_format() {
        let s: Series = expand(&w(2, "x1 x2"), 2, 3).unwrap();
        assert_eq!(s.coeff(&m("XY")).unwrap(), BigInt::one());
        assert!(matches!(s.coeff(&m("XYXY")), Err(Error::OutOfRange { .. })));
        assert_eq!(Series::unit(2, 8).unwrap().format(), "1");
        let mut t = Series::zero(2, 8).unwrap();
        t.set_coeff(&m("XXXYXYYY"), BigInt::from(-1)).unwrap();
        assert_eq!(t.format(), "-XXXYXYYY");
        assert_eq!(Series::zero(2, 2).unwrap().format(), "0");
    }

    #[test]
    fn parse_round_trip() {
        let s: Series = expand(&w(2, "x1 x2' x1' x2 x2"), 2, 5).unwrap();
        assert_eq!(Series::parse(2, 5, &s.format()).unwrap(), s);
        let t: Series = expand(&w(3, "x3 x1' x2"), 3, 3).unwrap();
        assert_eq!(Series::parse(3, 3, &t.format()).unwrap(), t);
    }

    #[test]
    fn json_export_is_ordered() {
        let s: Series = expand(&w(2, "x1 x2"), 2, 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        let monos: Vec<&str> = v.as_array().unwrap().iter().map(|t| t["monomial"].as_str().unwrap()).collect();
        assert_eq!(monos, ["1", "X", "Y", "XY"]);
        assert_eq!(v[3]["coeff"], "1");
    }

    #[test]
    fn right_var_series_matches_product() {
        let s: Series = expand(&w(3, "x2 x3' x1 x2"), 3, 4).unwrap();
        let g = Series::generator_inverse(3, 4, 2).unwrap();
        let powers: Vec<BigInt> = alternating(4);
        assert_eq!(s.mul_var_series(2, &powers), s.mul(&g).unwrap());
    }

    #[test]
    fn unipotent_inverse() {
        let s: Series = expand(&w(2, "x1 x2 x1' x2 x2"), 2, 6).unwrap();
        let inv = s.inverse_unipotent().unwrap();
        assert_eq!(s.mul(&inv).unwrap(), Series::unit(2, 6).unwrap());
        let direct: Series = expand(&w(2, "x1 x2 x1' x2 x2").invert(), 2, 6).unwrap();
        assert_eq!(inv, direct);
    }

    fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = FreeWord> {
        prop::collection::vec((1..=rank, any::<bool>()), 0..max_len)
            .prop_map(move |raw| FreeWord::reduce(rank, raw).unwrap())
    }

    /// Nested commutator of depth `depth` built from a sequence of words.
    fn nested(words: &[FreeWord]) -> FreeWord {
        let mut acc = words[0].clone();
        for x in &words[1..] {
            acc = acc.commutator(x).unwrap();
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

        #[test]
        fn expansion_is_multiplicative(a in arb_word(2, 10), b in arb_word(2, 10)) {
            let ea: Series = expand(&a, 2, 5).unwrap();
            let eb: Series = expand(&b, 2, 5).unwrap();
            let eab: Series = expand(&a.multiply(&b).unwrap(), 2, 5).unwrap();
            prop_assert_eq!(eab, ea.mul(&eb).unwrap());
            let einv: Series = expand(&a.invert(), 2, 5).unwrap();
            prop_assert_eq!(ea.mul(&einv).unwrap(), Series::unit(2, 5).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

        #[test]
        fn degree_one_is_abelianization(a in arb_word(3, 24)) {
            let e: Series = expand(&a, 3, 3).unwrap();
            prop_assert_eq!(e.constant().clone(), BigInt::one());
            for g in 1..=3 {
                prop_assert_eq!(e.coeff(&Monomial(vec![g])).unwrap(), BigInt::from(a.exponent_sum(g)));
            }
        }

        #[test]
        fn lower_central_terms_vanish(words in prop::collection::vec(arb_word(2, 4), 2..=5)) {
            // depth q commutator lies in the q-th lower central subgroup
            let q = words.len();
            let c = nested(&words);
            let e: Series = expand(&c, 2, 6).unwrap();
            if let Some(d) = e.lowest_nonconstant_degree() {
                prop_assert!(d >= q, "degree {} term in a depth-{} commutator", d, q);
            }
        }
    }
}
