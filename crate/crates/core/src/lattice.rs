//! Joins and meets.
//!
//! Exact joins in types Ã and C̃ go through translation-invariant total
//! orders of ℤ encoded as [`ThresholdRelation`]s: the join is the transitive
//! closure of the union of inversion relations, which stays inside the
//! threshold family. B̃/D̃ only get the windowed, experimental [`try_join`].

use std::collections::BTreeSet;
use std::fmt;

use crate::closure::{close, is_biclosed, Certificate, WindowSet};
use crate::error::{Error, Result};
use crate::fan::{classify_with, BiclosedTriple};
use crate::intset::{IntSet, NEG_INF, POS_INF};
use crate::orders::{order_from_triple, PeriodicOrder};
use crate::roots::{AffineType, Family, Root};

// ---------------------------------------------------------------------------
// finite windows of A_∞

/// A total order of the integer interval `[lo, hi]`, listed from least to
/// greatest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteOrderWindow {
    lo: i64,
    hi: i64,
    ranking: Vec<i64>,
}

impl FiniteOrderWindow {
    pub fn new(lo: i64, hi: i64, ranking: Vec<i64>) -> Result<FiniteOrderWindow> {
        if lo > hi {
            return Err(Error::InvalidWindow(format!("empty ground [{lo}, {hi}]")));
        }
        let mut seen: Vec<i64> = ranking.clone();
        seen.sort_unstable();
        if seen != (lo..=hi).collect::<Vec<_>>() {
            return Err(Error::InvalidWindow(format!("ranking is not a permutation of [{lo}, {hi}]")));
        }
        Ok(FiniteOrderWindow { lo, hi, ranking })
    }

    pub fn identity(lo: i64, hi: i64) -> FiniteOrderWindow {
        FiniteOrderWindow { lo, hi, ranking: (lo..=hi).collect() }
    }

    pub fn ground(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn ranking(&self) -> &[i64] {
        &self.ranking
    }

    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.ranking.len()];
        for (k, &x) in self.ranking.iter().enumerate() {
            pos[(x - self.lo) as usize] = k;
        }
        pos
    }

    /// Pairs `(x, y)` with `x < y` and `x ≻ y`.
    pub fn inversions(&self) -> BTreeSet<(i64, i64)> {
        let pos = self.positions();
        let mut out = BTreeSet::new();
        for x in self.lo..=self.hi {
            for y in x + 1..=self.hi {
                if pos[(x - self.lo) as usize] > pos[(y - self.lo) as usize] {
                    out.insert((x, y));
                }
            }
        }
        out
    }

    /// The order whose inversion set is `inv`.
    pub fn from_inversions(lo: i64, hi: i64, inv: &BTreeSet<(i64, i64)>) -> Result<FiniteOrderWindow> {
        let above = |x: i64, y: i64| if x < y { inv.contains(&(x, y)) } else { !inv.contains(&(y, x)) };
        let mut ranking = vec![0; (hi - lo + 1) as usize];
        let mut used = vec![false; ranking.len()];
        for x in lo..=hi {
            let below = (lo..=hi).filter(|&y| y != x && above(x, y)).count();
            if used[below] {
                return Err(Error::NotAnOrder(format!("inversion relation is not transitive at {x}")));
            }
            used[below] = true;
            ranking[below] = x;
        }
        let out = FiniteOrderWindow { lo, hi, ranking };
        if &out.inversions() != inv {
            return Err(Error::NotAnOrder("inversion relation is not an order".into()));
        }
        Ok(out)
    }
}

fn common_ground(xs: &[FiniteOrderWindow]) -> Result<(i64, i64)> {
    let g = xs.first().ok_or_else(|| Error::InvalidWindow("no inputs".into()))?.ground();
    if xs.iter().any(|x| x.ground() != g) {
        return Err(Error::InvalidWindow("inputs have different ground intervals".into()));
    }
    Ok(g)
}

#[allow(clippy::needless_range_loop)]
fn transitive_closure(lo: i64, hi: i64, rel: &BTreeSet<(i64, i64)>) -> BTreeSet<(i64, i64)> {
    let n = (hi - lo + 1) as usize;
    let mut m = vec![vec![false; n]; n];
    for &(x, y) in rel {
        m[(x - lo) as usize][(y - lo) as usize] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] {
                out.insert((lo + i as i64, lo + j as i64));
            }
        }
    }
    out
}

/// Join in the weak order of a finite window: transitive closure of the
/// union of the inversion relations.
pub fn join_window(xs: &[FiniteOrderWindow]) -> Result<FiniteOrderWindow> {
    let (lo, hi) = common_ground(xs)?;
    let union: BTreeSet<(i64, i64)> = xs.iter().flat_map(|x| x.inversions()).collect();
    FiniteOrderWindow::from_inversions(lo, hi, &transitive_closure(lo, hi, &union))
}

/// Meet by complement duality.
pub fn meet_window(xs: &[FiniteOrderWindow]) -> Result<FiniteOrderWindow> {
    let (lo, hi) = common_ground(xs)?;
    let all: BTreeSet<(i64, i64)> = (lo..=hi).flat_map(|x| (x + 1..=hi).map(move |y| (x, y))).collect();
    let union: BTreeSet<(i64, i64)> =
        xs.iter().flat_map(|x| all.difference(&x.inversions()).copied().collect::<Vec<_>>()).collect();
    let closed = transitive_closure(lo, hi, &union);
    FiniteOrderWindow::from_inversions(lo, hi, &all.difference(&closed).copied().collect())
}

// ---------------------------------------------------------------------------
// threshold relations

/// `{d ∈ ℤ : i ≻ j + dM}` for one residue pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Threshold {
    Empty,
    All,
    AtMost(i64),
    AtLeast(i64),
}

impl Threshold {
    pub fn contains(self, d: i64) -> bool {
        match self {
            Threshold::Empty => false,
            Threshold::All => true,
            Threshold::AtMost(k) => d <= k,
            Threshold::AtLeast(k) => d >= k,
        }
    }

    pub fn to_set(self) -> IntSet {
        match self {
            Threshold::Empty => IntSet::empty(),
            Threshold::All => IntSet::all(),
            Threshold::AtMost(k) => IntSet::at_most(k),
            Threshold::AtLeast(k) => IntSet::at_least(k),
        }
    }

    pub fn from_set(s: &IntSet) -> Option<Threshold> {
        match s.runs() {
            [] => Some(Threshold::Empty),
            [(NEG_INF, POS_INF)] => Some(Threshold::All),
            [(NEG_INF, k)] => Some(Threshold::AtMost(*k)),
            [(k, POS_INF)] => Some(Threshold::AtLeast(*k)),
            _ => None,
        }
    }

    fn shifted(self, s: i64) -> Threshold {
        match self {
            Threshold::AtMost(k) => Threshold::AtMost(k + s),
            Threshold::AtLeast(k) => Threshold::AtLeast(k + s),
            t => t,
        }
    }

    fn bound(self) -> i64 {
        match self {
            Threshold::AtMost(k) | Threshold::AtLeast(k) => k.abs(),
            _ => 0,
        }
    }
}

/// A translation-invariant total order of ℤ with period `M`, stored as one
/// [`Threshold`] per ordered residue pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdRelation {
    m: i64,
    sets: Vec<Threshold>,
}

impl ThresholdRelation {
    pub fn new(m: i64, sets: Vec<Threshold>) -> Result<ThresholdRelation> {
        if m < 1 || sets.len() != (m * m) as usize {
            return Err(Error::NotAnOrder(format!("expected {} threshold sets", m * m)));
        }
        let r = ThresholdRelation { m, sets };
        r.validate()?;
        Ok(r)
    }

    /// Read the relation off a sort key that is affine along each residue
    /// class.
    fn from_key(m: i64, key: impl Fn(i64) -> (i64, i64)) -> ThresholdRelation {
        let mut sets = Vec::with_capacity((m * m) as usize);
        for a in 0..m {
            for b in 0..m {
                let (ka, kb, kb1) = (key(a), key(b), key(b + m));
                let t = if ka.0 != kb.0 {
                    if ka.0 > kb.0 {
                        Threshold::All
                    } else {
                        Threshold::Empty
                    }
                } else {
                    let step = kb1.1 - kb.1;
                    debug_assert!(step != 0 && kb1.0 == kb.0);
                    let diff = ka.1 - kb.1;
                    if step > 0 {
                        Threshold::AtMost((diff - 1).div_euclid(step))
                    } else {
                        Threshold::AtLeast((-diff).div_euclid(-step) + 1)
                    }
                };
                sets.push(t);
            }
        }
        ThresholdRelation { m, sets }
    }

    /// The relation of a type-A order.
    pub fn from_order(o: &PeriodicOrder) -> Result<ThresholdRelation> {
        let ty = o.affine_type();
        if ty.family != Family::A {
            return Err(Error::TypeMismatch(ty.to_string(), "type A".into()));
        }
        Ok(ThresholdRelation::from_key(ty.modulus(), |x| o.key(x)))
    }

    /// The relation on all of ℤ of a B/C/D order, multiples of `M` placed as
    /// the central fixed points.
    pub fn embed_signed(o: &PeriodicOrder) -> ThresholdRelation {
        ThresholdRelation::from_key(o.affine_type().modulus(), |x| o.key(x))
    }

    pub fn modulus(&self) -> i64 {
        self.m
    }

    pub fn get(&self, a: i64, b: i64) -> Threshold {
        self.sets[(a * self.m + b) as usize]
    }

    /// `x ≻ y`.
    pub fn greater(&self, x: i64, y: i64) -> bool {
        if x == y {
            return false;
        }
        let (a, t) = (x.rem_euclid(self.m), x.div_euclid(self.m));
        let y = y - t * self.m;
        let b = y.rem_euclid(self.m);
        self.get(a, b).contains(y.div_euclid(self.m))
    }

    fn validate(&self) -> Result<()> {
        for a in 0..self.m {
            for b in 0..self.m {
                let ab = self.get(a, b).to_set();
                let ba = self.get(b, a).to_set().negate();
                if a == b {
                    if ab.contains(0) {
                        return Err(Error::NotAnOrder(format!("{a} ≻ {a}")));
                    }
                    if ab != ba.complement().difference(&IntSet::interval(0, 0)) {
                        return Err(Error::NotAnOrder(format!("residue {a} is not totally ordered")));
                    }
                } else if !ab.intersect(&ba).is_empty() || ab.union(&ba) != IntSet::all() {
                    return Err(Error::NotAnOrder(format!("residues {a}, {b} are not totally ordered")));
                }
            }
        }
        Ok(())
    }

    /// Largest finite threshold in absolute value.
    pub fn spread(&self) -> i64 {
        self.sets.iter().map(|t| t.bound()).max().unwrap_or(0)
    }

    /// Smallest `d` with `b + dM > a` (residues in `[0, M)`).
    fn lo(a: i64, b: i64) -> i64 {
        if a >= b {
            1
        } else {
            0
        }
    }

    /// `E_ab`: shifts `d` at which `(a, b + dM)` is an inversion.
    fn inversion_sets(&self) -> Vec<IntSet> {
        let m = self.m;
        (0..m * m)
            .map(|k| self.sets[k as usize].to_set().intersect(&IntSet::at_least(Self::lo(k / m, k % m))))
            .collect()
    }

    fn from_inversion_sets(m: i64, e: &[IntSet]) -> Result<ThresholdRelation> {
        let mut sets = Vec::with_capacity(e.len());
        for a in 0..m {
            for b in 0..m {
                let lower = IntSet::at_least(Self::lo(b, a)).difference(&e[(b * m + a) as usize]).negate();
                let d = e[(a * m + b) as usize].union(&lower);
                let t = Threshold::from_set(&d)
                    .ok_or_else(|| Error::NotAnOrder(format!("shifts {d} of ({a}, {b}) are not a threshold set")))?;
                sets.push(t);
            }
        }
        ThresholdRelation::new(m, sets)
    }

    /// Image under `x ≺_σ y ⟺ −y ≺ −x`.
    pub fn sigma(&self) -> ThresholdRelation {
        let m = self.m;
        let mut sets = Vec::with_capacity(self.sets.len());
        for a in 0..m {
            for b in 0..m {
                let (a2, al) = ((-a).rem_euclid(m), (-a).div_euclid(m));
                let (b2, be) = ((-b).rem_euclid(m), (-b).div_euclid(m));
                sets.push(self.get(b2, a2).shifted(be - al));
            }
        }
        ThresholdRelation { m, sets }
    }

    /// Inversion relations contained in each other.
    pub fn is_below(&self, other: &ThresholdRelation) -> bool {
        self.m == other.m
            && self.inversion_sets().iter().zip(other.inversion_sets()).all(|(a, b)| a.is_subset(&b))
    }
}

impl fmt::Display for ThresholdRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.m {
            for b in 0..self.m {
                writeln!(f, "{a} ≻ {b} + d·{}: {}", self.m, self.get(a, b).to_set())?;
            }
        }
        Ok(())
    }
}

/// Result of [`threshold_closure`]: the closed relation and the number of
/// fixpoint passes it took.
#[derive(Debug, Clone)]
pub struct Closed {
    pub relation: ThresholdRelation,
    pub iterations: usize,
}

const MAX_PASSES: usize = 10_000;

/// Transitive closure of the union of the inversion relations of `xs`.
pub fn threshold_closure(xs: &[ThresholdRelation]) -> Result<Closed> {
    let m = xs.first().ok_or_else(|| Error::NotAnOrder("no inputs".into()))?.m;
    if xs.iter().any(|x| x.m != m) {
        return Err(Error::TypeMismatch(format!("period {m}"), "a different period".into()));
    }
    let mu = m as usize;
    let mut e: Vec<IntSet> = vec![IntSet::empty(); mu * mu];
    for x in xs {
        for (k, s) in x.inversion_sets().into_iter().enumerate() {
            e[k] = e[k].union(&s);
        }
    }
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > MAX_PASSES {
            return Err(Error::NotAnOrder("threshold closure did not stabilise".into()));
        }
        let mut changed = false;
        for a in 0..mu {
            // a cycle through a residue class makes it reversed outright
            if !e[a * mu + a].is_empty() && e[a * mu + a] != IntSet::at_least(1) {
                e[a * mu + a] = IntSet::at_least(1);
                changed = true;
            }
        }
        for b in 0..mu {
            for a in 0..mu {
                if e[a * mu + b].is_empty() {
                    continue;
                }
                for c in 0..mu {
                    if e[b * mu + c].is_empty() {
                        continue;
                    }
                    let s = e[a * mu + b].sum(&e[b * mu + c]);
                    if !s.is_subset(&e[a * mu + c]) {
                        e[a * mu + c] = e[a * mu + c].union(&s);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    if let Some(a) = (0..mu).find(|&a| e[a * mu + a].contains(0)) {
        return Err(Error::NotAnOrder(format!("{a} ≻ {a}")));
    }
    Ok(Closed { relation: ThresholdRelation::from_inversion_sets(m, &e)?, iterations })
}

// ---------------------------------------------------------------------------
// π and ι

fn classify_growing(ty: AffineType, h0: u32, pred: &dyn Fn(&Root) -> bool) -> Result<BiclosedTriple> {
    let mut h = h0.max(4);
    for _ in 0..5 {
        match classify_with(ty, h, pred) {
            Err(Error::UnstableWindow(_)) => h *= 2,
            other => return other,
        }
    }
    classify_with(ty, h, pred)
}

fn check_type(ty: AffineType, family: Family) -> Result<()> {
    if ty.family != family {
        return Err(Error::TypeMismatch(ty.to_string(), format!("family {family}")));
    }
    Ok(())
}

/// The biclosed set `{(i, j) : i ≻ j}` of an order, as a triple of `ty`.
///
/// For B/C/D the relation is the embedding on all of ℤ (period `2n+1`).
pub fn pi(ty: AffineType, x: &ThresholdRelation) -> Result<BiclosedTriple> {
    if x.m != ty.modulus() {
        return Err(Error::TypeMismatch(ty.to_string(), format!("period {}", x.m)));
    }
    let h = (4 * x.spread() + 4 * ty.modulus() + 8) as u32;
    classify_growing(ty, h, &|r| x.greater(r.i, r.j))
}

/// The canonical order of a type-A triple.
pub fn iota(t: &BiclosedTriple) -> Result<ThresholdRelation> {
    ThresholdRelation::from_order(&order_from_triple(t)?)
}

/// `p = ι ∘ π`.
pub fn project(ty: AffineType, x: &ThresholdRelation) -> Result<ThresholdRelation> {
    iota(&pi(ty, x)?)
}

/// Roots outside the set.
pub fn complement(t: &BiclosedTriple) -> Result<BiclosedTriple> {
    classify_growing(t.affine_type(), 2 * t.stable_height(), &|r| !t.contains(r))
}

fn same_type(xs: &[BiclosedTriple]) -> Result<AffineType> {
    let ty = xs.first().ok_or_else(|| Error::InvalidWindow("no inputs".into()))?.affine_type();
    if let Some(x) = xs.iter().find(|x| x.affine_type() != ty) {
        return Err(Error::TypeMismatch(ty.to_string(), x.affine_type().to_string()));
    }
    Ok(ty)
}

/// Join in type Ã.
pub fn join_a(xs: &[BiclosedTriple]) -> Result<BiclosedTriple> {
    let ty = same_type(xs)?;
    check_type(ty, Family::A)?;
    let rels = xs.iter().map(iota).collect::<Result<Vec<_>>>()?;
    pi(ty, &threshold_closure(&rels)?.relation)
}

/// Meet in type Ã, by complement duality.
pub fn meet_a(xs: &[BiclosedTriple]) -> Result<BiclosedTriple> {
    let cs = xs.iter().map(complement).collect::<Result<Vec<_>>>()?;
    complement(&join_a(&cs)?)
}

/// `σ(X) = {(i, j) : (−j, −i) ∈ X}` on a type-A triple.
pub fn sigma(t: &BiclosedTriple) -> Result<BiclosedTriple> {
    let ty = t.affine_type();
    check_type(ty, Family::A)?;
    classify_growing(ty, 2 * t.stable_height(), &|r| {
        Root::new(ty, -r.j, -r.i).map(|s| t.contains(&s)).unwrap_or(false)
    })
}

/// The type-Ã_{2n} image of a C̃_n triple.
pub fn embed_c(t: &BiclosedTriple) -> Result<BiclosedTriple> {
    let ty = t.affine_type();
    check_type(ty, Family::C)?;
    let rel = ThresholdRelation::embed_signed(&order_from_triple(t)?);
    pi(AffineType::a(ty.modulus() as usize), &rel)
}

/// Join in type C̃, computed as a σ-fixed join in Ã_{2n}.
pub fn join_c(xs: &[BiclosedTriple]) -> Result<BiclosedTriple> {
    let ty = same_type(xs)?;
    check_type(ty, Family::C)?;
    let rels = xs
        .iter()
        .map(|t| Ok(ThresholdRelation::embed_signed(&order_from_triple(t)?)))
        .collect::<Result<Vec<_>>>()?;
    let closed = threshold_closure(&rels)?.relation;
    let a_ty = AffineType::a(ty.modulus() as usize);
    let joined = pi(a_ty, &closed)?;
    if sigma(&joined)? != joined {
        return Err(Error::SigmaFixednessViolated);
    }
    pi(ty, &closed)
}

/// Meet in type C̃, by complement duality.
pub fn meet_c(xs: &[BiclosedTriple]) -> Result<BiclosedTriple> {
    let cs = xs.iter().map(complement).collect::<Result<Vec<_>>>()?;
    complement(&join_c(&cs)?)
}

/// Join or meet dispatching on the family (Ã or C̃ only).
pub fn join(xs: &[BiclosedTriple]) -> Result<BiclosedTriple> {
    match same_type(xs)?.family {
        Family::A => join_a(xs),
        Family::C => join_c(xs),
        f => Err(Error::TypeMismatch(f.to_string(), "family A or C".into())),
    }
}

pub fn meet(xs: &[BiclosedTriple]) -> Result<BiclosedTriple> {
    match same_type(xs)?.family {
        Family::A => meet_a(xs),
        Family::C => meet_c(xs),
        f => Err(Error::TypeMismatch(f.to_string(), "family A or C".into())),
    }
}

// ---------------------------------------------------------------------------
// windowed joins

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TryJoinOutcome {
    /// The closure of the union is biclosed; it is the join.
    Join(BiclosedTriple),
    /// The closure of the union is not coclosed.
    Witness(Certificate),
}

/// Windowed closure of the union at heights `h` and `2h`, with the smaller
/// window required to be the truncation of the larger.
pub fn windowed_union_closure(xs: &[BiclosedTriple], h: u32) -> Result<(WindowSet, WindowSet)> {
    let ty = same_type(xs)?;
    let at = |h: u32| close(&WindowSet::from_predicate(ty, h, |r| xs.iter().any(|t| t.contains(r))));
    let (small, big) = (at(h), at(2 * h));
    if big.truncate(h) != small {
        return Err(Error::UnstableWindow(h));
    }
    Ok((small, big))
}

/// Experimental join for any family, by windowed closure of the union.
pub fn try_join(xs: &[BiclosedTriple], h: u32) -> Result<TryJoinOutcome> {
    let (small, big) = windowed_union_closure(xs, h)?;
    let cert = is_biclosed(&small);
    if !cert.is_pass() {
        return Ok(TryJoinOutcome::Witness(cert));
    }
    match classify_with(big.ty, big.h, &|r| big.contains(r)) {
        Ok(t) if t.window(h) == small => Ok(TryJoinOutcome::Join(t)),
        Ok(_) => Err(Error::UnstableWindow(h)),
        Err(Error::NotBiclosed(Some(c))) => Ok(TryJoinOutcome::Witness(c)),
        Err(e) => Err(e),
    }
}

/// Reference join by windowed closure of the union: the window grows until
/// the closures at `h` and `2h` agree and the result classifies.
pub fn oracle_join(xs: &[BiclosedTriple]) -> Result<BiclosedTriple> {
    let mut h = xs.iter().map(|t| t.stable_height()).max().unwrap_or(4) + 4;
    loop {
        let attempt = windowed_union_closure(xs, h).and_then(|(_, big)| classify_with(big.ty, big.h, &|r| big.contains(r)));
        match attempt {
            Err(Error::UnstableWindow(_)) if h < 256 => h *= 2,
            other => return other,
        }
    }
}
