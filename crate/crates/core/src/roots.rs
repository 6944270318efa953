//! Classical affine root systems, described combinatorially.
//!
//! A root is a pair `(i, j)` with `i < j`, standing for `ẽ_j − ẽ_i`, where
//! `ẽ_{x+M} = ẽ_x + δ` and, in types B/C/D, `ẽ_{−x} = −ẽ_x`. Every root has a
//! canonical representative; see [`canonical_root`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::InvalidType(format!("unknown family {other:?}"))),
        }
    }

    pub fn is_signed(self) -> bool {
        self != Family::A
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(s)
    }
}

/// One of Ã_{n−1}, B̃_n, C̃_n, D̃_n.
///
/// For family A the parameter `n` is the number of residues, so
/// `AffineType::new(Family::A, 4)` is Ã₃.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineType {
    pub family: Family,
    pub n: usize,
}

impl AffineType {
    pub fn new(family: Family, n: usize) -> Result<AffineType> {
        if n == 0 {
            return Err(Error::InvalidType(format!("{family} needs n >= 1")));
        }
        if n > 64 {
            return Err(Error::TooLarge(format!("n = {n}")));
        }
        Ok(AffineType { family, n })
    }

    pub fn a(n: usize) -> AffineType {
        AffineType::new(Family::A, n).expect("valid rank")
    }

    pub fn b(n: usize) -> AffineType {
        AffineType::new(Family::B, n).expect("valid rank")
    }

    pub fn c(n: usize) -> AffineType {
        AffineType::new(Family::C, n).expect("valid rank")
    }

    pub fn d(n: usize) -> AffineType {
        AffineType::new(Family::D, n).expect("valid rank")
    }

    /// The period `M` of the underlying permutations of ℤ.
    pub fn modulus(&self) -> i64 {
        match self.family {
            Family::A => self.n as i64,
            _ => 2 * self.n as i64 + 1,
        }
    }

    /// Length of the window notation.
    pub fn window_len(&self) -> usize {
        self.n
    }

    /// Dimension of the coordinate vectors used by [`Root::vector`].
    pub fn vector_dim(&self) -> usize {
        self.n + 1
    }

    /// Whether `(i, j)` names a root (in either sign) of this type.
    pub fn admissible(&self, i: i64, j: i64) -> bool {
        let m = self.modulus();
        let (ri, rj) = (i.rem_euclid(m), j.rem_euclid(m));
        if ri == rj {
            return false;
        }
        if self.family == Family::A {
            return true;
        }
        if ri == 0 || rj == 0 {
            return false;
        }
        let opposite = (ri + rj) % m == 0;
        match self.family {
            Family::A | Family::C => true,
            Family::B => !opposite || (i + j).rem_euclid(2 * m) == 0,
            Family::D => !opposite,
        }
    }

    /// Coordinates of `ẽ_x`: `e_{x mod M} + ⌊x/M⌋δ` in type A, and
    /// `sign(r)·e_{|r|} + tδ` for `x = r + tM`, `|r| ≤ n` otherwise.
    /// The last coordinate is the δ-coefficient.
    pub fn e_vector(&self, x: i64) -> Vec<i64> {
        let m = self.modulus();
        let mut v = vec![0; self.vector_dim()];
        match self.family {
            Family::A => {
                v[x.rem_euclid(m) as usize] = 1;
                v[self.n] = x.div_euclid(m);
            }
            _ => {
                let mut r = x.rem_euclid(m);
                if r > self.n as i64 {
                    r -= m;
                }
                v[self.n] = (x - r) / m;
                if r != 0 {
                    v[r.unsigned_abs() as usize - 1] = r.signum();
                }
            }
        }
        v
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A~{}", self.n - 1),
            fam => write!(f, "{fam}~{}", self.n),
        }
    }
}

/// A positive root in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub ty: AffineType,
    pub i: i64,
    pub j: i64,
}

/// The canonical representative of the root `ẽ_j − ẽ_i`.
///
/// Type A translates `i` into `[0, M)`; types B/C/D take the lexicographically
/// smaller of `(i, j)` and `(−j, −i)` after translating the first coordinate
/// into `[1, M]`.
pub fn canonical_root(ty: AffineType, i: i64, j: i64) -> Result<Root> {
    if i >= j || !ty.admissible(i, j) {
        return Err(Error::NotARoot { ty: ty.to_string(), i, j });
    }
    Ok(canonical_unchecked(ty, i, j))
}

pub(crate) fn canonical_unchecked(ty: AffineType, i: i64, j: i64) -> Root {
    let m = ty.modulus();
    match ty.family {
        Family::A => {
            let t = i.div_euclid(m);
            Root { ty, i: i - t * m, j: j - t * m }
        }
        _ => {
            let shift = |a: i64, b: i64| {
                let t = (a - 1).div_euclid(m);
                (a - t * m, b - t * m)
            };
            let p = shift(i, j).min(shift(-j, -i));
            Root { ty, i: p.0, j: p.1 }
        }
    }
}

impl Root {
    pub fn new(ty: AffineType, i: i64, j: i64) -> Result<Root> {
        canonical_root(ty, i, j)
    }

    /// `⌊(j − i)/M⌋`; adding δ raises it by one.
    pub fn delta_height(&self) -> u32 {
        ((self.j - self.i) / self.ty.modulus()) as u32
    }

    /// This root plus `k·δ` (`k` may be negative as long as the result is
    /// still positive).
    pub fn shift(&self, k: i64) -> Option<Root> {
        canonical_root(self.ty, self.i, self.j + k * self.ty.modulus()).ok()
    }

    /// Residues of the two endpoints, `(i mod M, j mod M)`.
    pub fn residues(&self) -> (i64, i64) {
        let m = self.ty.modulus();
        (self.i.rem_euclid(m), self.j.rem_euclid(m))
    }

    /// Integer coordinates of a positive multiple of the root.
    pub fn vector(&self) -> Vec<i64> {
        let a = self.ty.e_vector(self.j);
        let b = self.ty.e_vector(self.i);
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }

    /// Coordinates with the δ part removed.
    pub fn finite_part(&self) -> Vec<i64> {
        let mut v = self.vector();
        v.pop();
        v
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// All canonical roots of δ-height at most `h`, in increasing order.
pub fn root_window(ty: AffineType, h: u32) -> Vec<Root> {
    let m = ty.modulus();
    let top = (h as i64 + 1) * m;
    let lo = if ty.family == Family::A { 0 } else { 1 };
    let mut out = BTreeSet::new();
    for i in lo..lo + m {
        for j in i + 1..i + top {
            if ty.admissible(i, j) {
                out.insert(canonical_unchecked(ty, i, j));
            }
        }
    }
    out.into_iter().collect()
}

/// Index pairs of the simple roots, in generator order `s_0, s_1, …`.
pub fn simple_roots(ty: AffineType) -> Vec<(i64, i64)> {
    let n = ty.n as i64;
    match ty.family {
        Family::A => {
            if n == 1 {
                Vec::new()
            } else {
                (0..n).map(|k| (k, k + 1)).collect()
            }
        }
        Family::C => std::iter::once((-1, 1)).chain((1..=n).map(|k| (k, k + 1))).collect(),
        Family::B => {
            if n == 1 {
                vec![(-1, 1), (1, 5)]
            } else {
                std::iter::once((-1, 1))
                    .chain((1..n).map(|k| (k, k + 1)))
                    .chain(std::iter::once((n - 1, n + 1)))
                    .collect()
            }
        }
        Family::D => match n {
            1 => Vec::new(),
            2 => vec![(-1, 2), (1, 2), (1, 3), (2, 6)],
            _ => std::iter::once((-1, 2))
                .chain((1..n).map(|k| (k, k + 1)))
                .chain(std::iter::once((n - 1, n + 1)))
                .collect(),
        },
    }
}

// ---------------------------------------------------------------------------
// exact plane geometry

/// Plücker coordinates of `a ∧ b`, divided by their gcd and sign-normalized;
/// `None` when the vectors are dependent.
pub(crate) fn plane_key(a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
    let d = a.len();
    let mut key = Vec::with_capacity(d * (d - 1) / 2);
    for p in 0..d {
        for q in p + 1..d {
            key.push(a[p] * b[q] - a[q] * b[p]);
        }
    }
    let g = key.iter().fold(0i64, |g, &x| gcd(g, x.abs()));
    if g == 0 {
        return None;
    }
    let sign = key.iter().find(|&&x| x != 0).map_or(1, |x| x.signum());
    for x in &mut key {
        *x /= g * sign;
    }
    Some(key)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn key_index(d: usize, p: usize, q: usize) -> usize {
    // index of (p, q), p < q, in the row-major upper triangle
    p * (2 * d - p - 1) / 2 + (q - p - 1)
}

/// Whether `x` lies in the plane with Plücker key `key` (`key ∧ x = 0`).
pub(crate) fn plane_contains(key: &[i64], x: &[i64]) -> bool {
    let d = x.len();
    for p in 0..d {
        for q in p + 1..d {
            for r in q + 1..d {
                let v = key[key_index(d, p, q)] * x[r] - key[key_index(d, p, r)] * x[q]
                    + key[key_index(d, q, r)] * x[p];
                if v != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// A coordinate pair on which the plane projects injectively.
pub(crate) fn plane_chart(key: &[i64], d: usize) -> (usize, usize) {
    for p in 0..d {
        for q in p + 1..d {
            if key[key_index(d, p, q)] != 0 {
                return (p, q);
            }
        }
    }
    unreachable!("plane key is nonzero")
}

pub(crate) fn orient(chart: (usize, usize), x: &[i64], y: &[i64]) -> Ordering {
    let (p, q) = chart;
    (x[p] * y[q] - x[q] * y[p]).cmp(&0)
}

fn delta_vector(ty: AffineType) -> Vec<i64> {
    let mut v = vec![0; ty.vector_dim()];
    v[ty.n] = 1;
    v
}

// ---------------------------------------------------------------------------
// rank two subsystems

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RankTwoKind {
    A1xA1,
    A2,
    B2,
    AffineA1,
}

impl fmt::Display for RankTwoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankTwoKind::A1xA1 => "A1xA1",
            RankTwoKind::A2 => "A2",
            RankTwoKind::B2 => "B2",
            RankTwoKind::AffineA1 => "A~1",
        })
    }
}

/// The full rank-2 subsystem of a plane, with its betweenness order.
///
/// For finite kinds `roots` is the whole ordered sequence. For `AffineA1` it
/// holds the two base roots `[α, β]`; the bi-infinite order is
/// `α → α+δ → α+2δ → ⋯ → β+2δ → β+δ → β`, see [`RankTwoSubsystem::ordered_up_to`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTwoSubsystem {
    pub kind: RankTwoKind,
    pub roots: Vec<Root>,
}

impl RankTwoSubsystem {
    /// The roots of height at most `h`, in betweenness order.
    pub fn ordered_up_to(&self, h: u32) -> Vec<Root> {
        match self.kind {
            RankTwoKind::AffineA1 => {
                let up = ray(self.roots[0], h);
                let mut down = ray(self.roots[1], h);
                down.reverse();
                up.into_iter().chain(down).collect()
            }
            _ => self.roots.iter().copied().filter(|r| r.delta_height() <= h).collect(),
        }
    }

    pub fn contains(&self, r: &Root) -> bool {
        match self.kind {
            RankTwoKind::AffineA1 => self.roots.iter().any(|b| same_ray(b, r)),
            _ => self.roots.contains(r),
        }
    }
}

/// `r, r+δ, r+2δ, …` up to height `h`, skipping non-roots (type B).
fn ray(r: Root, h: u32) -> Vec<Root> {
    let m = r.ty.modulus();
    let mut out = Vec::new();
    let mut j = r.j;
    loop {
        if let Ok(x) = canonical_root(r.ty, r.i, j) {
            if x.delta_height() > h {
                break;
            }
            out.push(x);
        } else if (j - r.i) / m > h as i64 {
            break;
        }
        j += m;
    }
    out
}

fn same_ray(base: &Root, r: &Root) -> bool {
    let (a, b) = (base.finite_part(), r.finite_part());
    if plane_key(&a, &b).is_some() {
        return false;
    }
    let dot: i64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    dot > 0 && r.delta_height() >= base.delta_height()
}

/// Lowest root on the ray of `r` (subtract δ while still a positive root).
fn ray_base(r: Root) -> Root {
    let m = r.ty.modulus();
    let mut best = r;
    let mut j = r.j - m;
    while j > r.i {
        if let Ok(x) = canonical_root(r.ty, r.i, j) {
            best = x;
        }
        j -= m;
    }
    best
}

/// Lowest root whose finite part is opposite to that of `r`.
fn opposite_base(r: Root) -> Root {
    let m = r.ty.modulus();
    let base = ray_base(r);
    let mut k = 1;
    loop {
        if let Ok(x) = canonical_root(r.ty, base.j, base.i + k * m) {
            return ray_base(x);
        }
        k += 1;
    }
}

/// The full rank-2 subsystem of the plane spanned by `a` and `b`.
pub fn rank2_subsystem(a: Root, b: Root) -> Result<RankTwoSubsystem> {
    if a.ty != b.ty {
        return Err(Error::TypeMismatch(a.ty.to_string(), b.ty.to_string()));
    }
    let ty = a.ty;
    let (va, vb) = (a.vector(), b.vector());
    let key = plane_key(&va, &vb).ok_or(Error::DependentRoots)?;
    if plane_contains(&key, &delta_vector(ty)) {
        let (x, y) = (ray_base(a), opposite_base(a));
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        return Ok(RankTwoSubsystem { kind: RankTwoKind::AffineA1, roots: vec![x, y] });
    }
    let h = 4 * (a.delta_height() + b.delta_height()) + 4;
    let mut roots: Vec<Root> =
        root_window(ty, h).into_iter().filter(|r| plane_contains(&key, &r.vector())).collect();
    sort_in_plane(&key, &mut roots);
    let kind = match roots.len() {
        2 => RankTwoKind::A1xA1,
        3 => RankTwoKind::A2,
        4 => RankTwoKind::B2,
        k => unreachable!("finite rank-2 subsystem with {k} positive roots"),
    };
    Ok(RankTwoSubsystem { kind, roots })
}

/// Sort coplanar roots by angle; the direction is fixed so that the first
/// root is smaller than the last.
pub(crate) fn sort_in_plane(key: &[i64], roots: &mut [Root]) {
    if roots.is_empty() {
        return;
    }
    let chart = plane_chart(key, roots[0].ty.vector_dim());
    let vecs: Vec<(Root, Vec<i64>)> = roots.iter().map(|r| (*r, r.vector())).collect();
    let mut sorted = vecs;
    sorted.sort_by(|x, y| orient(chart, &y.1, &x.1));
    if sorted.first().map(|x| x.0) > sorted.last().map(|x| x.0) {
        sorted.reverse();
    }
    for (slot, (r, _)) in roots.iter_mut().zip(sorted) {
        *slot = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        let a3 = AffineType::a(4);
        let r = canonical_root(a3, 5, 7).unwrap();
        assert_eq!((r.i, r.j), (1, 3));
        assert!(canonical_root(a3, 1, 5).is_err());
        let c2 = AffineType::c(2);
        let r = canonical_root(c2, -2, 1).unwrap();
        assert_eq!((r.i, r.j), (3, 6));
        assert!(canonical_root(AffineType::d(2), 1, 4).is_err());
    }

    #[test]
    fn heights() {
        let a3 = AffineType::a(4);
        assert_eq!(Root::new(a3, 1, 3).unwrap().delta_height(), 0);
        assert_eq!(Root::new(a3, 1, 11).unwrap().delta_height(), 2);
        assert_eq!(Root::new(AffineType::c(2), 4, 11).unwrap().delta_height(), 1);
    }

    #[test]
    fn negation_identity() {
        for ty in [AffineType::b(2), AffineType::c(3), AffineType::d(3)] {
            for i in -8..8 {
                for j in i + 1..i + 15 {
                    if ty.admissible(i, j) {
                        assert_eq!(canonical_root(ty, i, j), canonical_root(ty, -j, -i));
                    }
                }
            }
        }
    }

    #[test]
    fn a1_window() {
        let w = root_window(AffineType::a(2), 2);
        assert_eq!(w.len(), 6);
    }

    #[test]
    fn affine_a1_plane() {
        let a3 = AffineType::a(4);
        let s = rank2_subsystem(Root::new(a3, 0, 2).unwrap(), Root::new(a3, 2, 4).unwrap()).unwrap();
        assert_eq!(s.kind, RankTwoKind::AffineA1);
        assert_eq!(s.roots, vec![Root::new(a3, 0, 2).unwrap(), Root::new(a3, 2, 4).unwrap()]);
        let o = s.ordered_up_to(1);
        assert_eq!(o.len(), 4);
        assert_eq!(o[1], Root::new(a3, 0, 6).unwrap());
    }
}
