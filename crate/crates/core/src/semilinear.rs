//! Eventually periodic subsets of the natural numbers.
//!
//! A [`SemilinearSet`] is a finite set together with finitely many arithmetic
//! progressions `{a + d·t : t ≥ 0}`. Internally every set is kept in a unique
//! normal form: a threshold `base`, an explicit membership table below it, and
//! a residue table modulo `period` that decides membership for `n ≥ base`.
//! Both the period and the threshold are minimal, so structural equality is
//! set equality.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemilinearSet {
    base: u64,
    period: u64,
    prefix: Vec<bool>,
    residues: Vec<bool>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl SemilinearSet {
    pub fn empty() -> Self {
        SemilinearSet {
            base: 0,
            period: 1,
            prefix: Vec::new(),
            residues: vec![false],
        }
    }

    /// All of ℕ.
    pub fn naturals() -> Self {
        SemilinearSet {
            base: 0,
            period: 1,
            prefix: Vec::new(),
            residues: vec![true],
        }
    }

    pub fn singleton(n: u64) -> Self {
        Self::from_elements([n])
    }

    pub fn from_elements<I: IntoIterator<Item = u64>>(elements: I) -> Self {
        let elements: Vec<u64> = elements.into_iter().collect();
        let base = elements.iter().map(|&n| n + 1).max().unwrap_or(0);
        let mut prefix = vec![false; base as usize];
        for n in elements {
            prefix[n as usize] = true;
        }
        SemilinearSet {
            base,
            period: 1,
            prefix,
            residues: vec![false],
        }
        .normalized()
    }

    /// `{offset + period·t : t ≥ 0}`.
    pub fn progression(offset: u64, period: u64) -> Self {
        assert!(period >= 1, "progression period must be positive");
        let residues = (0..period).map(|r| r == offset % period).collect();
        SemilinearSet {
            base: offset,
            period,
            prefix: vec![false; offset as usize],
            residues,
        }
        .normalized()
    }

    /// `{n : n ≥ from}`.
    pub fn at_least(from: u64) -> Self {
        Self::progression(from, 1)
    }

    /// `{n : n < below}`.
    pub fn below(below: u64) -> Self {
        Self::from_elements(0..below)
    }

    /// Builds the set from the explicit-plus-progressions presentation.
    pub fn from_parts(explicit: &[u64], progressions: &[(u64, u64)]) -> Self {
        progressions.iter().fold(
            Self::from_elements(explicit.iter().copied()),
            |acc, &(a, d)| acc.union(&Self::progression(a, d)),
        )
    }

    pub fn contains(&self, n: u64) -> bool {
        if n < self.base {
            self.prefix[n as usize]
        } else {
            self.residues[(n % self.period) as usize]
        }
    }

    /// Every membership question is settled by the elements below this bound.
    pub fn normalization_bound(&self) -> u64 {
        self.base + self.period
    }

    pub fn is_finite(&self) -> bool {
        !self.residues.iter().any(|&r| r)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && !self.prefix.iter().any(|&b| b)
    }

    pub fn is_cofinite(&self) -> bool {
        self.residues.iter().all(|&r| r)
    }

    /// Number of elements, or `None` when infinite.
    pub fn len(&self) -> Option<u64> {
        self.is_finite()
            .then(|| self.prefix.iter().filter(|&&b| b).count() as u64)
    }

    pub fn min(&self) -> Option<u64> {
        if let Some(i) = self.prefix.iter().position(|&b| b) {
            return Some(i as u64);
        }
        (self.base..self.base + self.period).find(|&n| self.contains(n))
    }

    /// Members in increasing order. Infinite sets yield an infinite iterator.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let finite_end = if self.is_finite() {
            self.base
        } else {
            u64::MAX
        };
        (0..finite_end).filter(move |&n| self.contains(n))
    }

    /// Members strictly below `n`.
    pub fn elements_below(&self, n: u64) -> Vec<u64> {
        (0..n).filter(|&i| self.contains(i)).collect()
    }

    /// Explicit elements not covered by the progressions of [`Self::progressions`].
    pub fn explicit(&self) -> Vec<u64> {
        (0..self.base)
            .filter(|&n| self.prefix[n as usize])
            .collect()
    }

    /// The periodic part as `(offset, period)` pairs, sorted by offset.
    pub fn progressions(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = (0..self.period)
            .filter(|&r| self.residues[r as usize])
            .map(|r| {
                let shift = (r + self.period - self.base % self.period) % self.period;
                (self.base + shift, self.period)
            })
            .collect();
        out.sort();
        out
    }

    /// Text of the periodic part only; sets that differ by finitely many
    /// elements share this key.
    pub fn tail_key(&self) -> String {
        let items: Vec<String> = (0..self.period)
            .filter(|&r| self.residues[r as usize])
            .map(|r| format!("{}+{}n", r, self.period))
            .collect();
        format!("{{{}}}", items.join(","))
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        SemilinearSet {
            base: self.base,
            period: self.period,
            prefix: self.prefix.iter().map(|b| !b).collect(),
            residues: self.residues.iter().map(|b| !b).collect(),
        }
        .normalized()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.minus(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let base = self.base.max(other.base);
        let period = lcm(self.period, other.period);
        let prefix = (0..base)
            .map(|n| op(self.contains(n), other.contains(n)))
            .collect();
        let residues = (0..period)
            .map(|r| {
                let n = base + (r + period - base % period) % period;
                op(self.contains(n), other.contains(n))
            })
            .collect();
        SemilinearSet {
            base,
            period,
            prefix,
            residues,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        for q in 1..self.period {
            if self.period.is_multiple_of(q)
                && (0..self.period as usize)
                    .all(|r| self.residues[r] == self.residues[r % q as usize])
            {
                self.residues.truncate(q as usize);
                self.period = q;
                break;
            }
        }
        while self.base > 0 {
            let last = self.base - 1;
            if self.prefix[last as usize] != self.residues[(last % self.period) as usize] {
                break;
            }
            self.prefix.pop();
            self.base = last;
        }
        self
    }
}

impl Default for SemilinearSet {
    fn default() -> Self {
        Self::empty()
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.explicit().iter().map(u64::to_string).collect();
        items.extend(self.progressions().iter().map(|(a, d)| format!("{a}+{d}n")));
        write!(f, "{{{}}}", items.join(","))
    }
}

impl fmt::Debug for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `{}`, `{1,4,7}`, `{0+2n}`, `{3..9}` (half-open) and mixtures.
impl FromStr for SemilinearSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Syntax(format!("bad index set `{s}`"));
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(bad)?;
        let mut acc = SemilinearSet::empty();
        for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let part = if let Some(body) = item.strip_suffix('n') {
                let (a, d) = body.split_once('+').ok_or_else(bad)?;
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                SemilinearSet::progression(a, d)
            } else if let Some((lo, hi)) = item.split_once("..") {
                let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
                SemilinearSet::from_elements(lo..hi)
            } else {
                SemilinearSet::singleton(item.parse().map_err(|_| bad())?)
            };
            acc = acc.union(&part);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn evens() -> SemilinearSet {
        SemilinearSet::progression(0, 2)
    }

    fn odds() -> SemilinearSet {
        SemilinearSet::progression(1, 2)
    }

    #[test]
    fn evens_and_odds() {
        let all = evens().union(&odds());
        assert_eq!(all, SemilinearSet::naturals());
        assert!(!all.is_finite());
        let none = evens().intersect(&odds());
        assert!(none.is_empty());
        assert!(none.is_finite());
    }

    #[test]
    fn complement_of_initial_segment() {
        let c = SemilinearSet::below(10).complement();
        assert_eq!(c.progressions(), vec![(10, 1)]);
        assert!(c.explicit().is_empty());
        assert!(!c.is_finite());
        assert_eq!(c.to_string(), "{10+1n}");
    }

    #[test]
    fn normal_form_is_unique() {
        let a = SemilinearSet::from_parts(&[0, 2], &[(4, 2)]);
        assert_eq!(a, evens());
        let b = SemilinearSet::progression(0, 4).union(&SemilinearSet::progression(2, 4));
        assert_eq!(b, evens());
        assert_eq!(b.to_string(), "{0+2n}");
    }

    #[test]
    fn text_round_trip() {
        for text in ["{}", "{1,4,7}", "{0+2n}", "{3,10+1n}", "{1+4n,2+4n,3+4n}"] {
            let s: SemilinearSet = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        let r: SemilinearSet = "{3..6}".parse().unwrap();
        assert_eq!(r.to_string(), "{3,4,5}");
        assert!("{0+0n}".parse::<SemilinearSet>().is_err());
        assert!("0,1".parse::<SemilinearSet>().is_err());
    }

    #[test]
    fn tail_key_ignores_finite_differences() {
        let a = evens().minus(&SemilinearSet::from_elements([0, 2, 8]));
        assert_eq!(a.tail_key(), evens().tail_key());
        assert!(evens().tail_key() < odds().tail_key());
    }

    fn arb_set() -> impl Strategy<Value = SemilinearSet> {
        (
            prop::collection::vec(0u64..40, 0..6),
            prop::collection::vec((0u64..30, 1u64..7), 0..3),
        )
            .prop_map(|(e, p)| SemilinearSet::from_parts(&e, &p))
    }

    proptest! {
        #[test]
        fn boolean_algebra_laws(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(a.union(&a), a.clone());
            prop_assert_eq!(a.complement().complement(), a.clone());
            prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
            prop_assert_eq!(a.intersect(&b).complement(), a.complement().union(&b.complement()));
            for n in 0..1000u64 {
                prop_assert_eq!(a.union(&b).contains(n), a.contains(n) || b.contains(n));
                prop_assert_eq!(a.intersect(&b).contains(n), a.contains(n) && b.contains(n));
                prop_assert_eq!(a.minus(&b).contains(n), a.contains(n) && !b.contains(n));
            }
        }

        #[test]
        fn finiteness_matches_sampling(a in arb_set()) {
            let bound = a.normalization_bound();
            let beyond = (bound..1000).any(|n| a.contains(n));
            prop_assert_eq!(a.is_finite(), !beyond);
            prop_assert_eq!(a.to_string().parse::<SemilinearSet>().unwrap(), a);
        }
    }
}
