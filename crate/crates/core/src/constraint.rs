//! Weight intervals, query constraints and the dominance order on path tuples.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{VertexId, Weight};

/// Closed integer interval of edge weights, or the empty interval of a
/// zero-length path.
///
/// The empty interval is stored as `lo = u32::MAX, hi = 0`. Because that pair
/// is "inverted", `min`/`max` merging treats it as the identity without a
/// branch, and it can never be confused with the legal interval `[0, 0]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightInterval {
    lo: Weight,
    hi: Weight,
}

impl WeightInterval {
    pub const EMPTY: WeightInterval = WeightInterval {
        lo: Weight::MAX,
        hi: 0,
    };

    /// Largest weight representable inside a non-empty interval.
    pub const MAX_WEIGHT: Weight = Weight::MAX - 1;

    /// Creates `[lo, hi]`. Panics if `lo > hi` or `lo` collides with the empty
    /// sentinel.
    pub fn new(lo: Weight, hi: Weight) -> Self {
        assert!(lo <= hi, "interval lower bound {lo} exceeds upper bound {hi}");
        assert!(hi <= Self::MAX_WEIGHT, "weight {hi} exceeds the supported range");
        WeightInterval { lo, hi }
    }

    pub fn point(w: Weight) -> Self {
        Self::new(w, w)
    }

    /// Builds an interval from its raw encoding, accepting the empty sentinel.
    pub(crate) fn from_raw(lo: Weight, hi: Weight) -> Option<Self> {
        if lo == Weight::MAX {
            (hi == 0).then_some(Self::EMPTY)
        } else if lo <= hi && hi <= Self::MAX_WEIGHT {
            Some(WeightInterval { lo, hi })
        } else {
            None
        }
    }

    pub(crate) fn raw(self) -> (Weight, Weight) {
        (self.lo, self.hi)
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.lo > self.hi
    }

    /// `(lo, hi)` for non-empty intervals.
    pub fn bounds(self) -> Option<(Weight, Weight)> {
        (!self.is_empty()).then_some((self.lo, self.hi))
    }

    #[inline]
    pub fn union(self, other: WeightInterval) -> WeightInterval {
        WeightInterval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Unions a single edge weight into the interval.
    #[inline]
    pub fn extend(self, w: Weight) -> WeightInterval {
        debug_assert!(w <= Self::MAX_WEIGHT);
        WeightInterval {
            lo: self.lo.min(w),
            hi: self.hi.max(w),
        }
    }

    /// Subset test. The empty interval is a subset of everything.
    #[inline]
    pub fn is_subset_of(self, other: WeightInterval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    #[inline]
    pub fn satisfies(self, c: WeightConstraint) -> bool {
        if self.is_empty() {
            return true;
        }
        c.lower.is_none_or(|l| l <= self.lo as i64) && c.upper.is_none_or(|u| self.hi as i64 <= u)
    }
}

impl fmt::Debug for WeightInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bounds() {
            Some((lo, hi)) => write!(f, "[{lo},{hi}]"),
            None => f.write_str("EMPTY"),
        }
    }
}

impl fmt::Display for WeightInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A query's weight constraint. `None` on a side means unbounded on that side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeightConstraint {
    lower: Option<i64>,
    upper: Option<i64>,
}

impl WeightConstraint {
    pub const UNBOUNDED: WeightConstraint = WeightConstraint {
        lower: None,
        upper: None,
    };

    pub fn new(lower: Option<i64>, upper: Option<i64>) -> Result<Self> {
        if let (Some(l), Some(u)) = (lower, upper) {
            if l > u {
                return Err(Error::Invalid(format!("constraint lower bound {l} exceeds upper bound {u}")));
            }
        }
        Ok(WeightConstraint { lower, upper })
    }

    pub fn between(lower: i64, upper: i64) -> Result<Self> {
        Self::new(Some(lower), Some(upper))
    }

    pub fn at_most(upper: i64) -> Self {
        WeightConstraint {
            lower: None,
            upper: Some(upper),
        }
    }

    pub fn at_least(lower: i64) -> Self {
        WeightConstraint {
            lower: Some(lower),
            upper: None,
        }
    }

    pub fn lower(&self) -> Option<i64> {
        self.lower
    }

    pub fn upper(&self) -> Option<i64> {
        self.upper
    }

    #[inline]
    pub fn admits(&self, w: Weight) -> bool {
        WeightInterval::point(w).satisfies(*self)
    }

    /// Parses the two-token form `"ws we"`, where either token may be
    /// `-inf` / `+inf`.
    pub fn parse_bounds(lower: &str, upper: &str) -> Result<Self> {
        let lo = parse_bound(lower, "-inf")?;
        let hi = parse_bound(upper, "+inf")?;
        Self::new(lo, hi)
    }

    /// `c' ⊇ c`: every interval satisfying `self` also satisfies `other`.
    pub fn is_within(&self, other: &WeightConstraint) -> bool {
        let lower_ok = match (other.lower, self.lower) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(s)) => o <= s,
        };
        let upper_ok = match (other.upper, self.upper) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(s)) => s <= o,
        };
        lower_ok && upper_ok
    }
}

fn parse_bound(token: &str, infinity: &str) -> Result<Option<i64>> {
    let t = token.trim();
    if t.eq_ignore_ascii_case(infinity) || (infinity == "+inf" && t.eq_ignore_ascii_case("inf")) {
        return Ok(None);
    }
    t.parse::<i64>()
        .map(Some)
        .map_err(|_| Error::Invalid(format!("bad constraint bound `{token}` (expected an integer or {infinity})")))
}

impl fmt::Display for WeightConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lower {
            Some(l) => write!(f, "{l}")?,
            None => f.write_str("-inf")?,
        }
        f.write_str(" ")?;
        match self.upper {
            Some(u) => write!(f, "{u}"),
            None => f.write_str("+inf"),
        }
    }
}

impl FromStr for WeightConstraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split_whitespace();
        match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => Self::parse_bounds(a, b),
            _ => Err(Error::Invalid(format!("constraint `{s}` must have exactly two tokens"))),
        }
    }
}

/// A path from `src` to `dst` summarised by its weight range and hop count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PathTuple {
    pub src: VertexId,
    pub dst: VertexId,
    pub interval: WeightInterval,
    pub dist: u32,
}

impl PathTuple {
    pub fn new(src: VertexId, dst: VertexId, interval: WeightInterval, dist: u32) -> Self {
        debug_assert!(dist > 0 || (src == dst && interval.is_empty()));
        PathTuple { src, dst, interval, dist }
    }

    pub fn empty_path(v: VertexId) -> Self {
        PathTuple::new(v, v, WeightInterval::EMPTY, 0)
    }

    /// Appends one edge of weight `w` ending at `next`.
    pub fn extend(self, next: VertexId, w: Weight) -> Self {
        PathTuple {
            src: self.src,
            dst: next,
            interval: self.interval.extend(w),
            dist: self.dist + 1,
        }
    }

    /// Whether `self` dominates `other`: a narrower-or-equal weight range
    /// reached in no more steps. Both tuples must share their endpoints.
    pub fn dominates(&self, other: &PathTuple) -> Result<bool> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::Invalid(format!(
                "dominance undefined between ({},{}) and ({},{})",
                self.src, self.dst, other.src, other.dst
            )));
        }
        Ok(dominates(self.interval, self.dist, other.interval, other.dist))
    }
}

/// Dominance on the (interval, dist) part of two tuples with equal endpoints.
#[inline]
pub fn dominates(i1: WeightInterval, d1: u32, i2: WeightInterval, d2: u32) -> bool {
    d1 <= d2 && i1.is_subset_of(i2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: u32, hi: u32) -> WeightInterval {
        WeightInterval::new(lo, hi)
    }

    #[test]
    fn union_examples() {
        assert_eq!(iv(4, 5).union(iv(6, 6)), iv(4, 6));
        assert_eq!(WeightInterval::EMPTY.union(iv(3, 8)), iv(3, 8));
        assert_eq!(iv(2, 2).union(iv(3, 3)).union(iv(4, 4)), iv(2, 4));
        assert!(WeightInterval::EMPTY.union(WeightInterval::EMPTY).is_empty());
    }

    #[test]
    fn empty_is_not_zero_interval() {
        assert_ne!(WeightInterval::EMPTY, iv(0, 0));
        assert_eq!(WeightInterval::EMPTY.extend(0), iv(0, 0));
        // [0,0] must fail a constraint that excludes 0; EMPTY must pass it.
        let c = WeightConstraint::between(1, 5).unwrap();
        assert!(!iv(0, 0).satisfies(c));
        assert!(WeightInterval::EMPTY.satisfies(c));
    }

    #[test]
    fn satisfies_examples() {
        assert!(iv(2, 3).satisfies(WeightConstraint::at_most(3)));
        assert!(!iv(4, 8).satisfies(WeightConstraint::between(5, 8).unwrap()));
        assert!(iv(5, 8).satisfies(WeightConstraint::between(5, 8).unwrap()));
        assert!(iv(7, 9).satisfies(WeightConstraint::at_least(7)));
        assert!(!iv(6, 9).satisfies(WeightConstraint::at_least(7)));
        for c in [
            WeightConstraint::UNBOUNDED,
            WeightConstraint::at_most(-1),
            WeightConstraint::between(3, 3).unwrap(),
        ] {
            assert!(WeightInterval::EMPTY.satisfies(c));
        }
    }

    #[test]
    fn dominance_examples() {
        let t = |i, d| PathTuple::new(4, 3, i, d);
        assert!(t(iv(4, 5), 2).dominates(&t(iv(3, 5), 3)).unwrap());
        assert!(t(iv(4, 5), 2).dominates(&t(iv(2, 6), 4)).unwrap());
        assert!(t(iv(4, 5), 2).dominates(&t(iv(4, 5), 2)).unwrap());
        assert!(!t(iv(3, 5), 3).dominates(&t(iv(4, 5), 2)).unwrap());
        let other = PathTuple::new(4, 5, iv(4, 5), 2);
        assert!(t(iv(4, 5), 2).dominates(&other).is_err());
    }

    #[test]
    fn constraint_parsing() {
        let c: WeightConstraint = "-inf 3".parse().unwrap();
        assert_eq!(c, WeightConstraint::at_most(3));
        let c: WeightConstraint = "5 +inf".parse().unwrap();
        assert_eq!(c, WeightConstraint::at_least(5));
        assert_eq!("5 8".parse::<WeightConstraint>().unwrap().to_string(), "5 8");
        assert!("8 5".parse::<WeightConstraint>().is_err());
        assert!("x 5".parse::<WeightConstraint>().is_err());
        assert!("5".parse::<WeightConstraint>().is_err());
    }

    fn interval() -> impl Strategy<Value = WeightInterval> {
        prop_oneof![
            1 => Just(WeightInterval::EMPTY),
            6 => (0u32..6, 0u32..6).prop_map(|(a, b)| iv(a.min(b), a.max(b))),
        ]
    }

    fn constraint() -> impl Strategy<Value = WeightConstraint> {
        (proptest::option::of(-1i64..7), proptest::option::of(-1i64..7)).prop_map(|(l, u)| match (l, u) {
            (Some(l), Some(u)) if l > u => WeightConstraint::new(Some(u), Some(l)).unwrap(),
            (l, u) => WeightConstraint::new(l, u).unwrap(),
        })
    }

    proptest! {
        #[test]
        fn union_is_a_semilattice(a in interval(), b in interval(), c in interval()) {
            prop_assert_eq!(a.union(b), b.union(a));
            prop_assert_eq!(a.union(b).union(c), a.union(b.union(c)));
            prop_assert_eq!(a.union(a), a);
            prop_assert_eq!(a.union(WeightInterval::EMPTY), a);
        }

        #[test]
        fn dominance_is_a_partial_order(
            a in (interval(), 0u32..4), b in (interval(), 0u32..4), c in (interval(), 0u32..4)
        ) {
            prop_assert!(dominates(a.0, a.1, a.0, a.1));
            if dominates(a.0, a.1, b.0, b.1) && dominates(b.0, b.1, c.0, c.1) {
                prop_assert!(dominates(a.0, a.1, c.0, c.1));
            }
            if dominates(a.0, a.1, b.0, b.1) && dominates(b.0, b.1, a.0, a.1) {
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn dominance_is_monotone_for_queries(
            a in (interval(), 0u32..4), b in (interval(), 0u32..4), c in constraint(), k in 0u32..5
        ) {
            if dominates(a.0, a.1, b.0, b.1) && b.0.satisfies(c) && b.1 <= k {
                prop_assert!(a.0.satisfies(c) && a.1 <= k);
            }
        }

        #[test]
        fn dominance_survives_extension(
            a in (interval(), 0u32..4), b in (interval(), 0u32..4), w in 0u32..6
        ) {
            if dominates(a.0, a.1, b.0, b.1) {
                prop_assert!(dominates(a.0.extend(w), a.1 + 1, b.0.extend(w), b.1 + 1));
            }
        }

        #[test]
        fn union_satisfies_iff_both_do(a in interval(), b in interval(), c in constraint()) {
            prop_assert_eq!(a.union(b).satisfies(c), a.satisfies(c) && b.satisfies(c));
        }
    }
}
