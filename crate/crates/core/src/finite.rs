//! Weak order joins in the finite Weyl groups of rank ≤ 4, by exhaustive
//! search.
//!
//! Type A_r elements are permutations of `1..=r+1`; types B_n/C_n/D_n are
//! permutations `p` of `1..=2n` with `p(2n+1−i) = 2n+1−p(i)` (D_n: an even
//! number of the first `n` values exceed `n`). Inversions are position
//! pairs `i < j` with `p(i) > p(j)`; in type D the pairs with `i + j = 2n+1`
//! are not counted.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::roots::Family;

pub const MAX_RANK: usize = 4;

/// A finite Weyl group in one-line notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteGroup {
    pub family: Family,
    pub rank: usize,
}

impl FiniteGroup {
    pub fn new(family: Family, rank: usize) -> Result<FiniteGroup> {
        if rank > MAX_RANK {
            return Err(Error::TooLarge(format!("rank {rank} (at most {MAX_RANK})")));
        }
        if rank == 0 || (family == Family::D && rank < 2) {
            return Err(Error::InvalidType(format!("{family}{rank} is not a finite Weyl group here")));
        }
        Ok(FiniteGroup { family, rank })
    }

    /// Length of the one-line notation.
    pub fn degree(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            _ => 2 * self.rank,
        }
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        let m = self.degree();
        let mut sorted = p.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=m).collect::<Vec<_>>() {
            return false;
        }
        if self.family == Family::A {
            return true;
        }
        let n = self.rank;
        if (0..m).any(|i| p[m - 1 - i] != m + 1 - p[i]) {
            return false;
        }
        self.family != Family::D || p[..n].iter().filter(|&&v| v > n).count() % 2 == 0
    }

    pub fn elements(&self) -> Vec<Vec<usize>> {
        let m = self.degree();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(m);
        let mut used = vec![false; m + 1];
        self.extend(&mut cur, &mut used, &mut out);
        out
    }

    fn extend(&self, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let m = self.degree();
        let half = if self.family == Family::A { m } else { self.rank };
        if cur.len() == half {
            let mut p = cur.clone();
            if self.family != Family::A {
                for i in (0..half).rev() {
                    p.push(m + 1 - cur[i]);
                }
            }
            if self.contains(&p) {
                out.push(p);
            }
            return;
        }
        for v in 1..=m {
            let mirror = m + 1 - v;
            if used[v] || (self.family != Family::A && used[mirror]) {
                continue;
            }
            used[v] = true;
            cur.push(v);
            self.extend(cur, used, out);
            cur.pop();
            used[v] = false;
        }
    }

    pub fn inversions(&self, p: &[usize]) -> BTreeSet<(usize, usize)> {
        let m = p.len();
        let mut out = BTreeSet::new();
        for i in 0..m {
            for j in i + 1..m {
                if self.family == Family::D && i + j + 2 == m + 1 {
                    continue;
                }
                if p[i] > p[j] {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    fn check(&self, p: &[usize]) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::InvalidWindow(format!("{} is not in {}{}", format_element(p), self.family, self.rank)))
        }
    }

    /// Least upper bound in the weak order.
    pub fn join(&self, xs: &[Vec<usize>]) -> Result<Vec<usize>> {
        for x in xs {
            self.check(x)?;
        }
        let need: BTreeSet<(usize, usize)> = xs.iter().flat_map(|x| self.inversions(x)).collect();
        self.least(|inv| need.is_subset(inv), false)
    }

    /// Greatest lower bound in the weak order.
    pub fn meet(&self, xs: &[Vec<usize>]) -> Result<Vec<usize>> {
        for x in xs {
            self.check(x)?;
        }
        let invs: Vec<_> = xs.iter().map(|x| self.inversions(x)).collect();
        self.least(|inv| invs.iter().all(|i| inv.is_subset(i)), true)
    }

    fn least(&self, ok: impl Fn(&BTreeSet<(usize, usize)>) -> bool, greatest: bool) -> Result<Vec<usize>> {
        #[allow(clippy::type_complexity)]
        let cands: Vec<(Vec<usize>, BTreeSet<(usize, usize)>)> = self
            .elements()
            .into_iter()
            .map(|p| {
                let inv = self.inversions(&p);
                (p, inv)
            })
            .filter(|(_, inv)| ok(inv))
            .collect();
        let best = if greatest {
            cands.iter().max_by_key(|(_, inv)| inv.len())
        } else {
            cands.iter().min_by_key(|(_, inv)| inv.len())
        };
        let (p, inv) = best.ok_or_else(|| Error::NotAnOrder("no bound exists".into()))?;
        let extremal = cands.iter().all(|(_, o)| if greatest { o.is_subset(inv) } else { inv.is_subset(o) });
        if !extremal {
            return Err(Error::NotAnOrder("bounds have no extremal element".into()));
        }
        Ok(p.clone())
    }
}

/// Parse one-line notation: a digit string (`624351`) or comma-separated.
pub fn parse_element(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let parts: Vec<&str> = if s.contains(',') { s.split(',').collect() } else { s.split("").filter(|x| !x.is_empty()).collect() };
    parts
        .iter()
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad entry {x:?} in {s:?}"))))
        .collect()
}

pub fn format_element(p: &[usize]) -> String {
    if p.iter().all(|&v| v < 10) {
        p.iter().map(|v| v.to_string()).collect()
    } else {
        p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Join of two elements given in one-line notation.
pub fn join_finite(family: Family, rank: usize, u: &str, w: &str) -> Result<String> {
    let g = FiniteGroup::new(family, rank)?;
    Ok(format_element(&g.join(&[parse_element(u)?, parse_element(w)?])?))
}
