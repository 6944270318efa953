//! Explicit finite root sets cut off at a δ-height, and the brute-force
//! closure / biclosedness machinery on them.
//!
//! Everything here works inside `root_window(ty, H)`: a rank-2 subsystem is
//! replaced by its roots of height `≤ H`, in betweenness order. Results are
//! exact for the truncated problem; callers that want statements about the
//! infinite set compare the answers at `H` and `2H`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::roots::{plane_chart, plane_contains, plane_key, root_window, sort_in_plane, AffineType, Root};

/// A set of roots of δ-height at most `h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WindowSet {
    pub ty: AffineType,
    pub h: u32,
    pub members: BTreeSet<Root>,
}

impl WindowSet {
    pub fn new(ty: AffineType, h: u32, roots: impl IntoIterator<Item = Root>) -> Result<WindowSet> {
        let mut members = BTreeSet::new();
        for r in roots {
            if r.ty != ty {
                return Err(Error::TypeMismatch(ty.to_string(), r.ty.to_string()));
            }
            if r.delta_height() > h {
                return Err(Error::InvalidWindow(format!("root {r} lies above height {h}")));
            }
            members.insert(r);
        }
        Ok(WindowSet { ty, h, members })
    }

    pub fn empty(ty: AffineType, h: u32) -> WindowSet {
        WindowSet { ty, h, members: BTreeSet::new() }
    }

    pub fn full(ty: AffineType, h: u32) -> WindowSet {
        WindowSet { ty, h, members: root_window(ty, h).into_iter().collect() }
    }

    /// The window trace of a membership predicate.
    pub fn from_predicate(ty: AffineType, h: u32, mut pred: impl FnMut(&Root) -> bool) -> WindowSet {
        WindowSet { ty, h, members: root_window(ty, h).into_iter().filter(|r| pred(r)).collect() }
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.members.contains(r)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn complement(&self) -> WindowSet {
        WindowSet::from_predicate(self.ty, self.h, |r| !self.members.contains(r))
    }

    /// Restrict to heights `≤ h`.
    pub fn truncate(&self, h: u32) -> WindowSet {
        let members = self.members.iter().copied().filter(|r| r.delta_height() <= h).collect();
        WindowSet { ty: self.ty, h: h.min(self.h), members }
    }

    pub fn union(&self, other: &WindowSet) -> WindowSet {
        WindowSet { ty: self.ty, h: self.h, members: self.members.union(&other.members).copied().collect() }
    }

    pub fn symmetric_difference(&self, other: &WindowSet) -> WindowSet {
        let members = self.members.symmetric_difference(&other.members).copied().collect();
        WindowSet { ty: self.ty, h: self.h, members }
    }

    pub fn is_subset(&self, other: &WindowSet) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Outcome of a biclosedness test.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Certificate {
    Pass,
    /// `α, β ∈ S`, `γ ∉ S`, `γ` strictly between them.
    NotClosed { alpha: Root, beta: Root, gamma: Root },
    /// `α, β ∉ S`, `γ ∈ S`, `γ` strictly between them.
    NotCoclosed { alpha: Root, beta: Root, gamma: Root },
}

impl Certificate {
    pub fn is_pass(&self) -> bool {
        matches!(self, Certificate::Pass)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Pass => f.write_str("pass"),
            Certificate::NotClosed { alpha, beta, gamma } => {
                write!(f, "{alpha} and {beta} are in the set but {gamma}, between them, is not")
            }
            Certificate::NotCoclosed { alpha, beta, gamma } => {
                write!(f, "{gamma} is in the set but {alpha} and {beta}, around it, are not")
            }
        }
    }
}

/// The rank-2 planes of a window with at least three roots, each in
/// betweenness order.
#[derive(Debug)]
pub struct WindowPlanes {
    pub ty: AffineType,
    pub h: u32,
    pub roots: Vec<Root>,
    pub index: HashMap<Root, usize>,
    pub planes: Vec<Vec<usize>>,
    pub planes_of: Vec<Vec<usize>>,
}

impl WindowPlanes {
    pub fn new(ty: AffineType, h: u32) -> WindowPlanes {
        let roots = root_window(ty, h);
        let index: HashMap<Root, usize> = roots.iter().enumerate().map(|(k, r)| (*r, k)).collect();
        let vecs: Vec<Vec<i64>> = roots.iter().map(|r| r.vector()).collect();
        let mut by_key: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                let key = plane_key(&vecs[a], &vecs[b]).expect("distinct positive roots are independent");
                let members = by_key.entry(key).or_default();
                if members.last() != Some(&b) {
                    members.push(a);
                    members.push(b);
                }
            }
        }
        let mut keyed: Vec<(Vec<i64>, Vec<usize>)> = by_key.into_iter().collect();
        keyed.sort();
        let mut planes = Vec::new();
        for (key, mut members) in keyed {
            members.sort_unstable();
            members.dedup();
            if members.len() < 3 {
                continue;
            }
            let mut rs: Vec<Root> = members.iter().map(|&k| roots[k]).collect();
            sort_in_plane(&key, &mut rs);
            planes.push(rs.iter().map(|r| index[r]).collect::<Vec<usize>>());
        }
        let mut planes_of = vec![Vec::new(); roots.len()];
        for (p, plane) in planes.iter().enumerate() {
            for &k in plane {
                planes_of[k].push(p);
            }
        }
        WindowPlanes { ty, h, roots, index, planes, planes_of }
    }

    pub fn mask(&self, s: &WindowSet) -> Vec<bool> {
        let mut m = vec![false; self.roots.len()];
        for r in &s.members {
            m[self.index[r]] = true;
        }
        m
    }

    pub fn unmask(&self, m: &[bool]) -> WindowSet {
        let members = self.roots.iter().zip(m).filter(|(_, &b)| b).map(|(r, _)| *r).collect();
        WindowSet { ty: self.ty, h: self.h, members }
    }

    /// Interval-fill fixpoint.
    pub fn close_mask(&self, m: &mut [bool]) {
        let mut queue: Vec<usize> = (0..self.planes.len()).collect();
        let mut queued = vec![true; self.planes.len()];
        while let Some(p) = queue.pop() {
            queued[p] = false;
            let plane = &self.planes[p];
            let first = plane.iter().position(|&k| m[k]);
            let last = plane.iter().rposition(|&k| m[k]);
            if let (Some(a), Some(b)) = (first, last) {
                for &k in &plane[a..=b] {
                    if !m[k] {
                        m[k] = true;
                        for &q in &self.planes_of[k] {
                            if !queued[q] {
                                queued[q] = true;
                                queue.push(q);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Check one plane: the trace must be a prefix or a suffix.
    pub fn check_plane(&self, m: &[bool], p: usize) -> Certificate {
        let plane = &self.planes[p];
        // a 1-0-1 pattern breaks closedness, 0-1-0 breaks coclosedness
        for want in [true, false] {
            let first = plane.iter().position(|&k| m[k] == want);
            let last = plane.iter().rposition(|&k| m[k] == want);
            if let (Some(a), Some(b)) = (first, last) {
                if let Some(g) = plane[a..=b].iter().find(|&&k| m[k] != want) {
                    let (alpha, beta, gamma) = (self.roots[plane[a]], self.roots[plane[b]], self.roots[*g]);
                    return if want {
                        Certificate::NotClosed { alpha, beta, gamma }
                    } else {
                        Certificate::NotCoclosed { alpha, beta, gamma }
                    };
                }
            }
        }
        Certificate::Pass
    }

    pub fn check_mask(&self, m: &[bool]) -> Certificate {
        for p in 0..self.planes.len() {
            let c = self.check_plane(m, p);
            if !c.is_pass() {
                return c;
            }
        }
        Certificate::Pass
    }

    /// Check only the planes through root `k` (sufficient after toggling `k`
    /// in a set that was already biclosed).
    pub fn check_around(&self, m: &[bool], k: usize) -> Certificate {
        for &p in &self.planes_of[k] {
            let c = self.check_plane(m, p);
            if !c.is_pass() {
                return c;
            }
        }
        Certificate::Pass
    }
}

type PlaneCache = Mutex<HashMap<(AffineType, u32), Arc<WindowPlanes>>>;

/// Shared, lazily built plane tables.
pub fn planes(ty: AffineType, h: u32) -> Arc<WindowPlanes> {
    static CACHE: OnceLock<PlaneCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cache lock").get(&(ty, h)) {
        return p.clone();
    }
    let built = Arc::new(WindowPlanes::new(ty, h));
    cache.lock().expect("cache lock").entry((ty, h)).or_insert(built).clone()
}

/// Smallest window-closed superset.
pub fn close(s: &WindowSet) -> WindowSet {
    let p = planes(s.ty, s.h);
    let mut m = p.mask(s);
    p.close_mask(&mut m);
    p.unmask(&m)
}

/// Largest window-coclosed subset: `window ∖ close(window ∖ S)`.
pub fn interior(s: &WindowSet) -> WindowSet {
    close(&s.complement()).complement()
}

pub fn is_biclosed(s: &WindowSet) -> Certificate {
    let p = planes(s.ty, s.h);
    p.check_mask(&p.mask(s))
}

/// Independent cubic test: no three elements of `D(S) = S ∪ −(window ∖ S)`
/// admit a relation `aα + bβ + cγ = 0` with `a, b, c > 0`.
pub fn doubling_check(s: &WindowSet) -> bool {
    let roots = root_window(s.ty, s.h);
    let signed: Vec<Vec<i64>> = roots
        .iter()
        .map(|r| {
            let v = r.vector();
            if s.contains(r) {
                v
            } else {
                v.into_iter().map(|x| -x).collect()
            }
        })
        .collect();
    let d = s.ty.vector_dim();
    for a in 0..roots.len() {
        for b in a + 1..roots.len() {
            let (u, v) = (&signed[a], &signed[b]);
            let key = plane_key(u, v).expect("distinct roots are independent");
            let chart = plane_chart(&key, d);
            let det = |x: &[i64], y: &[i64]| x[chart.0] * y[chart.1] - x[chart.1] * y[chart.0];
            let base = det(u, v);
            for w in &signed[b + 1..] {
                if !plane_contains(&key, w) {
                    continue;
                }
                // −w = p·u + q·v with p, q > 0
                let neg: Vec<i64> = w.iter().map(|x| -x).collect();
                let p = det(&neg, v);
                let q = det(u, &neg);
                if p * base.signum() > 0 && q * base.signum() > 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// The eventual behaviour of a set along each finite direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BInfinity {
    /// Normalized finite parts `β` with `β + kδ` eventually in the set.
    pub members: BTreeSet<Vec<i64>>,
    pub stable: bool,
}

/// Normalized finite direction of a root (finite part divided by its gcd).
pub fn direction(r: &Root) -> Vec<i64> {
    let mut v = r.finite_part();
    let g = v.iter().fold(0i64, |g, &x| num_gcd(g, x.abs()));
    for x in &mut v {
        *x /= g.max(1);
    }
    v
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Read off `B_∞` from the top `⌈H/2⌉` heights of every direction.
pub fn b_infinity(s: &WindowSet) -> BInfinity {
    let mut rays: HashMap<Vec<i64>, Vec<Root>> = HashMap::new();
    for r in root_window(s.ty, s.h) {
        rays.entry(direction(&r)).or_default().push(r);
    }
    let cut = s.h - s.h.div_ceil(2);
    let mut members = BTreeSet::new();
    let mut stable = true;
    for (dir, ray) in rays {
        let top: Vec<bool> = ray.iter().filter(|r| r.delta_height() > cut || s.h == 0).map(|r| s.contains(r)).collect();
        if let Some(&first) = top.first() {
            if top.iter().any(|&b| b != first) {
                stable = false;
            } else if first {
                members.insert(dir);
            }
        }
    }
    BInfinity { members, stable }
}

/// Whether `S ⊕ T` is finite, judged by `B_∞`.
pub fn commensurable(s: &WindowSet, t: &WindowSet) -> Result<bool> {
    if s.ty != t.ty {
        return Err(Error::TypeMismatch(s.ty.to_string(), t.ty.to_string()));
    }
    let (a, b) = (b_infinity(s), b_infinity(t));
    if !a.stable || !b.stable {
        return Err(Error::UnstableCutoff);
    }
    Ok(a.members == b.members)
}

/// Biclosed window sets reachable from `∅` by adding one root at a time,
/// by size: `layers[k]` holds the sets of size `k ≤ max`.
pub fn enumerate_small_biclosed(ty: AffineType, h: u32, max: usize) -> Vec<Vec<WindowSet>> {
    let p = planes(ty, h);
    let nroots = p.roots.len();
    let mut layer: HashSet<Vec<bool>> = HashSet::from([vec![false; nroots]]);
    let mut out = vec![vec![WindowSet::empty(ty, h)]];
    for _ in 0..max {
        let mut next = HashSet::new();
        for m in &layer {
            for k in (0..nroots).filter(|&k| !m[k]) {
                let mut m2 = m.clone();
                m2[k] = true;
                if !next.contains(&m2) && p.check_around(&m2, k).is_pass() {
                    next.insert(m2);
                }
            }
        }
        let mut sets: Vec<WindowSet> = next.iter().map(|m| p.unmask(m)).collect();
        sets.sort_by(|a, b| a.members.cmp(&b.members));
        out.push(sets);
        layer = next;
    }
    out
}
