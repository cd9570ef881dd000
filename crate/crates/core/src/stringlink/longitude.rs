//! Longitudes by successive approximation in the nilpotent quotients, and
//! Milnor numbers read off their Magnus expansions.
//!
//! Every arc is a conjugate `w m w^-1` of the meridian `m` of its strand,
//! where `w` is the product of the over-arcs met below it. Starting from the
//! approximation "arc = meridian", each pass recomputes the arcs from the
//! previous ones and gains one step of the lower central series.

use num_bigint::BigInt;

use rayon::prelude::*;

use super::{Braid, MorseWord, StringLinkDiagram};
use crate::error::{Error, Result};
use crate::freegroup::{FreeWord, Letter};
use crate::magnus::{expand, Monomial, TruncSeries};
use crate::scalar::Ring;

/// Total letters allowed across all arc words before the word path gives up.
pub const WORD_LENGTH_LIMIT: usize = 4_000_000;

/// Preferred longitudes as words in the meridians, exact modulo the `class`-th
/// lower central subgroup.
#[derive(Clone, Debug)]
pub struct LongitudeSet {
    class: usize,
    longitudes: Vec<FreeWord>,
    framings: Vec<i64>,
}

impl LongitudeSet {
    pub fn class(&self) -> usize {
        self.class
    }

    /// Longitude of strand `i` (1-based).
    pub fn longitude(&self, i: usize) -> &FreeWord {
        &self.longitudes[i - 1]
    }

    pub fn longitudes(&self) -> &[FreeWord] {
        &self.longitudes
    }

    /// Self-crossing sign sum of strand `i`.
    pub fn framing(&self, i: usize) -> i64 {
        self.framings[i - 1]
    }

    /// `mu(i_1 .. i_k)`; needs `class >= k`.
    pub fn mu(&self, index: &[usize]) -> Result<BigInt> {
        let n = self.longitudes.len();
        check_index(index, n)?;
        if self.class < index.len() {
            return Err(Error::InsufficientClass { need: index.len(), have: self.class });
        }
        let last = *index.last().unwrap();
        let s: TruncSeries<BigInt> = expand(&self.longitudes[last - 1], n, index.len() - 1)?;
        s.coeff(&Monomial(index[..index.len() - 1].to_vec()))
    }
}

fn check_index(index: &[usize], n: usize) -> Result<()> {
    if index.len() < 2 {
        return Err(Error::Malformed("Milnor index needs length at least 2".into()));
    }
    if let Some(&i) = index.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::OutOfRange { what: "strand index", value: i, max: n });
    }
    Ok(())
}

/// Chen-Milnor approximation keeping arcs as reduced words.
///
/// Runs `q` passes in total (the last one produces the longitudes), so the
/// result is exact modulo the `q`-th lower central subgroup.
pub fn chen_milnor(link: &MorseWord, q: usize) -> Result<LongitudeSet> {
    if q == 0 {
        return Err(Error::Malformed("nilpotency class must be at least 1".into()));
    }
    let d = link.diagram()?;
    let n = d.strands();
    let meridian = |s: usize| FreeWord::from_letters_unchecked(n, vec![Letter::new(s, false)]);
    let mut arcs: Vec<FreeWord> = d.arcs().iter().map(|a| meridian(a.strand)).collect();
    let mut tops = vec![FreeWord::identity(n); n];
    for pass in 1..=q {
        let (next, w) = word_pass(&d, &arcs, n)?;
        tops = w;
        if pass < q {
            arcs = next;
            let total: usize = arcs.iter().map(FreeWord::len).sum();
            if total > WORD_LENGTH_LIMIT {
                return Err(Error::ResourceLimit(format!(
                    "arc words reached {total} letters at pass {pass}"
                )));
            }
        }
    }
    let mut longitudes = Vec::with_capacity(n);
    let mut framings = Vec::with_capacity(n);
    for (s, w) in tops.into_iter().enumerate() {
        let e = w.exponent_sum(s + 1);
        framings.push(d.self_writhe(s + 1));
        longitudes.push(w.multiply(&meridian(s + 1).pow(-e))?);
    }
    Ok(LongitudeSet { class: q, longitudes, framings })
}

fn word_pass(d: &StringLinkDiagram, arcs: &[FreeWord], n: usize) -> Result<(Vec<FreeWord>, Vec<FreeWord>)> {
    let mut next = vec![FreeWord::identity(n); arcs.len()];
    let mut tops = Vec::with_capacity(n);
    for s in 1..=d.strands() {
        let m = FreeWord::from_letters_unchecked(n, vec![Letter::new(s, false)]);
        let ids = d.strand_arcs(s);
        let mut w = FreeWord::identity(n);
        next[ids[0]] = m.clone();
        for (k, &c) in d.strand_unders(s).iter().enumerate() {
            let x = &d.crossings()[c];
            let over = &arcs[x.over];
            let factor = if x.sign > 0 { over.clone() } else { over.invert() };
            w = factor.multiply(&w)?;
            next[ids[k + 1]] = w.conjugate(&m)?;
        }
        tops.push(w);
    }
    Ok((next, tops))
}

/// Magnus expansions of the preferred longitudes, exact through degree `cap`.
#[derive(Clone)]
pub struct SeriesLongitudes<C> {
    cap: usize,
    series: Vec<TruncSeries<C>>,
    framings: Vec<i64>,
}

impl<C: Ring> SeriesLongitudes<C> {
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn strands(&self) -> usize {
        self.series.len()
    }

    pub fn series(&self, i: usize) -> &TruncSeries<C> {
        &self.series[i - 1]
    }

    pub fn framing(&self, i: usize) -> i64 {
        self.framings[i - 1]
    }

    /// `mu(i_1 .. i_k)`; needs `cap >= k - 1`.
    pub fn mu(&self, index: &[usize]) -> Result<C> {
        check_index(index, self.series.len())?;
        if self.cap + 1 < index.len() {
            return Err(Error::InsufficientClass { need: index.len(), have: self.cap + 1 });
        }
        let last = *index.last().unwrap();
        self.series[last - 1].coeff(&Monomial(index[..index.len() - 1].to_vec()))
    }
}

struct ArcSeries<C> {
    value: TruncSeries<C>,
    inverse: TruncSeries<C>,
}

/// Chen-Milnor with every arc replaced by its Magnus expansion.
///
/// Pass `p` only needs degrees up to `p`, so products are truncated there.
/// Strands are processed in parallel; each pass reads only the previous one.
pub fn chen_milnor_series<C: Ring>(link: &MorseWord, cap: usize) -> Result<SeriesLongitudes<C>> {
    let d = link.diagram()?;
    let n = d.strands();
    let unit = TruncSeries::<C>::unit(n, cap)?;
    let plus = vec![C::one(), C::one()];
    let minus: Vec<C> = (0..=cap).map(|k| if k % 2 == 0 { C::one() } else { -C::one() }).collect();
    // X_s and sum_{k>=1} (-X_s)^k as right factors
    let just_x = vec![C::zero(), C::one()];
    let tail: Vec<C> = (0..=cap).map(|k| if k == 0 { C::zero() } else { minus[k].clone() }).collect();

    let mut arcs: Vec<ArcSeries<C>> = d
        .arcs()
        .iter()
        .map(|a| ArcSeries {
            value: unit.mul_var_series(a.strand, &plus),
            inverse: unit.mul_var_series(a.strand, &minus),
        })
        .collect();

    let strand_pass = |s: usize, arcs: &[ArcSeries<C>], limit: usize, want_arcs: bool| {
        let ids = d.strand_arcs(s);
        let mut w = unit.clone();
        let mut w_inv = unit.clone();
        let mut out = Vec::new();
        if want_arcs {
            out.push((ids[0], arcs[ids[0]].value.clone(), arcs[ids[0]].inverse.clone()));
        }
        for (k, &c) in d.strand_unders(s).iter().enumerate() {
            let x = &d.crossings()[c];
            let over = &arcs[x.over];
            let (f, f_inv) = if x.sign > 0 { (&over.value, &over.inverse) } else { (&over.inverse, &over.value) };
            w = f.mul_upto(&w, limit);
            w_inv = w_inv.mul_upto(f_inv, limit);
            if want_arcs {
                // w (1 + X) w^-1 and w (1 + sum (-X)^k) w^-1
                let value = unit.add(&w.mul_var_series(s, &just_x).mul_upto(&w_inv, limit)).expect("same shape");
                let inverse = unit.add(&w.mul_var_series(s, &tail).mul_upto(&w_inv, limit)).expect("same shape");
                out.push((ids[k + 1], value, inverse));
            }
        }
        (w, out)
    };

    for pass in 1..=cap {
        let results: Vec<_> = (1..=n)
            .into_par_iter()
            .map(|s| strand_pass(s, &arcs, pass, true).1)
            .collect();
        for list in results {
            for (id, value, inverse) in list {
                arcs[id] = ArcSeries { value, inverse };
            }
        }
    }
    let tops: Vec<TruncSeries<C>> = (1..=n).into_par_iter().map(|s| strand_pass(s, &arcs, cap, false).0).collect();

    let mut series = Vec::with_capacity(n);
    let mut framings = Vec::with_capacity(n);
    for (k, w) in tops.into_iter().enumerate() {
        let s = k + 1;
        let e = w.coeff(&Monomial(vec![s])).ok().filter(|_| cap >= 1);
        let writhe = d.self_writhe(s);
        framings.push(writhe);
        // exponent of m_s in the uncorrected longitude is the self-writhe
        debug_assert!(e.map_or(true, |e| e == C::from_i64(writhe)));
        let factor = if writhe > 0 { &minus } else { &plus };
        let mut corrected = w;
        for _ in 0..writhe.unsigned_abs() {
            corrected = corrected.mul_var_series(s, factor);
        }
        series.push(corrected);
    }
    Ok(SeriesLongitudes { cap, series, framings })
}

/// Magnus expansion of the preferred longitude of strand `i` through degree
/// `cap`. Uses the word path while the words stay short and the series path
/// otherwise; both give identical results.
pub fn longitude_series(link: &MorseWord, i: usize, cap: usize) -> Result<TruncSeries<BigInt>> {
    if i == 0 || i > link.strands() {
        return Err(Error::OutOfRange { what: "strand", value: i, max: link.strands() });
    }
    if link.crossing_count() <= 16 && cap <= 4 {
        match chen_milnor(link, cap + 1) {
            Ok(set) => return expand(set.longitude(i), link.strands(), cap),
            Err(Error::ResourceLimit(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let all = chen_milnor_series::<BigInt>(link, cap)?;
    Ok(all.series[i - 1].clone())
}

/// `mu_L(i_1 .. i_k)`: coefficient of `X_{i_1} .. X_{i_{k-1}}` in the
/// expansion of the `i_k`-th preferred longitude.
pub fn milnor_mu(link: &MorseWord, index: &[usize]) -> Result<BigInt> {
    check_index(index, link.strands())?;
    let cap = index.len() - 1;
    let all = chen_milnor_series::<BigInt>(link, cap)?;
    all.mu(index)
}

/// Longitudes of a pure braid from the Artin action, exact in the free
/// group. Acting by the letters from last to first sends `x_i` to
/// `w x_i w^-1`; the longitude is `w` times the power of `x_i` that zeroes
/// its exponent sum.
pub fn artin_longitudes(braid: &Braid) -> Result<Vec<FreeWord>> {
    let perm = braid.permutation();
    if perm.iter().enumerate().any(|(i, &p)| p != i + 1) {
        return Err(Error::NotPure(perm));
    }
    let n = braid.strands();
    (1..=n)
        .map(|i| {
            let x = FreeWord::generator(n, i)?;
            let image = braid.letters().iter().rev().try_fold(x.clone(), |w, &l| w.artin_act(l))?;
            let letters = image.letters();
            let k = letters.len() / 2;
            debug_assert_eq!(letters[k], Letter::new(i, false));
            let w = FreeWord::from_letters(n, letters[..k].to_vec())?;
            let e = w.exponent_sum(i);
            w.multiply(&x.pow(-e))
        })
        .collect()
}

impl SeriesLongitudes<BigInt> {
    /// True when every coefficient of degree `1..=upto` vanishes in every
    /// longitude, i.e. all Milnor numbers of length `<= upto + 1` are zero.
    pub fn vanishes_through(&self, upto: usize) -> bool {
        self.series.iter().all(|s| s.lowest_nonconstant_degree().map_or(true, |d| d > upto))
    }

    /// All Milnor numbers of the given length, keyed by index.
    pub fn all_of_length(&self, length: usize) -> Result<Vec<(Vec<usize>, BigInt)>> {
        let n = self.series.len();
        let mut out = Vec::new();
        let mut idx = vec![1usize; length];
        loop {
            let v = self.mu(&idx)?;
            out.push((idx.clone(), v));
            // odometer
            let mut k = length;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if idx[k] < n {
                    idx[k] += 1;
                    for slot in &mut idx[k + 1..] {
                        *slot = 1;
                    }
                    break;
                }
            }
        }
    }
}

impl<C: Ring> SeriesLongitudes<C> {
    pub fn is_trivial(&self) -> bool {
        self.series.iter().all(|s| s.lowest_nonconstant_degree().is_none() && s.constant().is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::super::Braid;
    use super::*;
    use crate::Series;
    use num_traits::{One, Zero};

    fn braid_link(s: &str) -> MorseWord {
        MorseWord::from_braid(&Braid::parse(s, None).unwrap()).unwrap()
    }

    #[test]
    fn trivial_link_has_empty_longitudes() {
        for n in 1..=3 {
            let set = chen_milnor(&MorseWord::trivial(n), 4).unwrap();
            assert!(set.longitudes().iter().all(FreeWord::is_empty));
            let s = chen_milnor_series::<BigInt>(&MorseWord::trivial(n), 4).unwrap();
            assert!(s.is_trivial());
        }
        let l = MorseWord::trivial(2);
        assert!(longitude_series(&l, 1, 5).unwrap().format() == "1");
        assert_eq!(milnor_mu(&l, &[1, 2, 2, 1]).unwrap(), BigInt::zero());
    }

    #[test]
    fn full_twist_links_once() {
        let l = braid_link("s1 s1");
        let set = chen_milnor(&l, 2).unwrap();
        assert_eq!(set.mu(&[1, 2]).unwrap(), BigInt::one());
        assert_eq!(set.mu(&[2, 1]).unwrap(), BigInt::one());
        assert_eq!(milnor_mu(&l, &[1, 2]).unwrap(), BigInt::one());
        assert!(matches!(set.mu(&[1, 1, 2]), Err(Error::InsufficientClass { need: 3, have: 2 })));
    }

    #[test]
    fn borromean_braid() {
        let l = braid_link("s1 s1 s2 s2 S1 S1 S2 S2");
        let set = chen_milnor(&l, 3).unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)] {
            assert_eq!(set.mu(&[i, j]).unwrap(), BigInt::zero());
        }
        let mu = set.mu(&[1, 2, 3]).unwrap();
        assert_eq!(mu.clone() * mu.clone(), BigInt::one());
        assert_eq!(milnor_mu(&l, &[1, 2, 3]).unwrap(), mu);
    }

    #[test]
    fn word_and_series_paths_agree() {
        for text in ["s1 s1 s2 S1 S1 s2", "s1 s1 s2 s2 S1 S1 S2 S2", "S2 S2 s1 s2 s2 S1 s2 s2 s1 s1"] {
            let b = Braid::parse(text, Some(3)).unwrap();
            let Ok(l) = MorseWord::from_braid(&b) else { continue };
            let words = chen_milnor(&l, 5).unwrap();
            let series = chen_milnor_series::<BigInt>(&l, 4).unwrap();
            for i in 1..=3 {
                let e: Series = expand(words.longitude(i), 3, 4).unwrap();
                assert_eq!(&e, series.series(i), "{text} strand {i}");
            }
        }
    }

    #[test]
    fn framing_correction_zeroes_own_exponent() {
        let l = MorseWord::parse("strands 2\nU3 X2 A3 X1 X1 U1 x2 A1").unwrap();
        let set = chen_milnor(&l, 3).unwrap();
        for i in 1..=2 {
            assert_eq!(set.longitude(i).exponent_sum(i), 0);
        }
        assert_eq!(set.framing(2).abs(), 1);
    }

    #[test]
    fn artin_longitudes_of_small_braids() {
        let b = Braid::parse("s1 s1", None).unwrap();
        let l = artin_longitudes(&b).unwrap();
        assert_eq!(l[0], FreeWord::parse(2, "x1 x2 x1'").unwrap());
        assert_eq!((l[1].exponent_sum(1), l[1].exponent_sum(2)), (1, 0));
        assert!(matches!(artin_longitudes(&Braid::parse("s1", None).unwrap()), Err(Error::NotPure(_))));
        let link = braid_link("s1 s1 s2 s2 S1 S1 S2 S2");
        let cm = chen_milnor(&link, 4).unwrap();
        let art = artin_longitudes(&Braid::parse("s1 s1 s2 s2 S1 S1 S2 S2", None).unwrap()).unwrap();
        for i in 1..=3 {
            let a: Series = expand(&art[i - 1], 3, 3).unwrap();
            let c: Series = expand(cm.longitude(i), 3, 3).unwrap();
            assert_eq!(a, c);
        }
    }
}
