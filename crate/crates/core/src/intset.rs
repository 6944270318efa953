//! Finite unions of integer intervals, possibly unbounded.

use std::fmt;

/// `i64::MIN` and `i64::MAX` stand for −∞ and +∞.
pub const NEG_INF: i64 = i64::MIN;
pub const POS_INF: i64 = i64::MAX;

/// A subset of ℤ as sorted, disjoint, non-adjacent closed intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntSet {
    runs: Vec<(i64, i64)>,
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a == NEG_INF || b == NEG_INF {
        NEG_INF
    } else if a == POS_INF || b == POS_INF {
        POS_INF
    } else {
        a.saturating_add(b)
    }
}

fn neg(a: i64) -> i64 {
    match a {
        NEG_INF => POS_INF,
        POS_INF => NEG_INF,
        x => -x,
    }
}

impl IntSet {
    pub fn empty() -> IntSet {
        IntSet::default()
    }

    pub fn all() -> IntSet {
        IntSet { runs: vec![(NEG_INF, POS_INF)] }
    }

    pub fn interval(lo: i64, hi: i64) -> IntSet {
        IntSet::from_runs(vec![(lo, hi)])
    }

    pub fn at_least(k: i64) -> IntSet {
        IntSet::interval(k, POS_INF)
    }

    pub fn at_most(k: i64) -> IntSet {
        IntSet::interval(NEG_INF, k)
    }

    pub fn from_runs(mut runs: Vec<(i64, i64)>) -> IntSet {
        runs.retain(|&(a, b)| a <= b);
        runs.sort_unstable();
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(runs.len());
        for (a, b) in runs {
            if let Some(last) = out.last_mut() {
                if last.1 == POS_INF || a <= last.1 + 1 {
                    last.1 = last.1.max(b);
                    continue;
                }
            }
            out.push((a, b));
        }
        IntSet { runs: out }
    }

    pub fn runs(&self) -> &[(i64, i64)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.runs.iter().any(|&(a, b)| a <= x && x <= b)
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        IntSet::from_runs(self.runs.iter().chain(&other.runs).copied().collect())
    }

    pub fn intersect(&self, other: &IntSet) -> IntSet {
        let mut out = Vec::new();
        for &(a, b) in &self.runs {
            for &(c, d) in &other.runs {
                out.push((a.max(c), b.min(d)));
            }
        }
        IntSet::from_runs(out)
    }

    pub fn complement(&self) -> IntSet {
        let mut out = Vec::new();
        let mut start = NEG_INF;
        let mut open = true;
        for &(a, b) in &self.runs {
            if a != NEG_INF {
                out.push((start, a - 1));
            }
            if b == POS_INF {
                open = false;
                break;
            }
            start = b + 1;
        }
        if open {
            out.push((start, POS_INF));
        }
        IntSet::from_runs(out)
    }

    pub fn difference(&self, other: &IntSet) -> IntSet {
        self.intersect(&other.complement())
    }

    /// `{−x : x ∈ self}`.
    pub fn negate(&self) -> IntSet {
        IntSet::from_runs(self.runs.iter().map(|&(a, b)| (neg(b), neg(a))).collect())
    }

    /// Minkowski sum `{x + y}`.
    pub fn sum(&self, other: &IntSet) -> IntSet {
        let mut out = Vec::new();
        for &(a, b) in &self.runs {
            for &(c, d) in &other.runs {
                out.push((sat_add(a, c), sat_add(b, d)));
            }
        }
        IntSet::from_runs(out)
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.difference(other).is_empty()
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: i64| match x {
            NEG_INF => "-inf".to_string(),
            POS_INF => "inf".to_string(),
            x => x.to_string(),
        };
        let parts: Vec<String> = self.runs.iter().map(|&(a, b)| format!("[{}, {}]", show(a), show(b))).collect();
        write!(f, "{{{}}}", parts.join(" u "))
    }
}
