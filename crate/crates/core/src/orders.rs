//! Translation- (and negation-) invariant total orders of ℤ, stored
//! symbolically, and their inversion sets.
//!
//! An order is a face (an ordered set partition of residues) plus, for every
//! block, an affine permutation of the block's classes and an orientation.
//! Elements of earlier blocks precede elements of later blocks; inside a
//! block, `x ≺ y` iff `w⁻¹(φ⁻¹x) < w⁻¹(φ⁻¹y)` (reversed when the block is
//! flagged). For B/C/D the block `p_{−a}` is the mirror image of `p_a`, and
//! the central block carries a signed permutation (type C̃ of the block's
//! rank), which is what makes every negation-invariant order expressible.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::fan::{build_biclosed, element_from_inversions, signed_residue, BiclosedTriple, ComponentKind, FanFace};
use crate::perms::AffinePermutation;
use crate::roots::{canonical_root, AffineType, Family};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicOrder {
    face: FanFace,
    reversed: Vec<bool>,
    perms: Vec<AffinePermutation>,
}

/// Rank parameter of the permutation attached to stored block `b`.
pub(crate) fn block_type(face: &FanFace, b: usize) -> AffineType {
    let ty = face.affine_type();
    let block = &face.blocks()[b];
    if ty.family == Family::A || b > 0 {
        return AffineType::a(block.len());
    }
    let m = block.iter().filter(|&&x| x > 0).count();
    if m == 0 {
        AffineType::a(1)
    } else {
        AffineType::c(m)
    }
}

impl PeriodicOrder {
    /// `reversed` and `perms` are indexed like `face.blocks()`. Each
    /// permutation has type Ã_{k−1} for a block of size `k`, except the
    /// central block of types B/C/D, which takes a C̃_m element where
    /// `p_0 = {0?, ±c_1, …, ±c_m}` (Ã₀ when `m = 0`).
    pub fn new(face: FanFace, reversed: Vec<bool>, perms: Vec<AffinePermutation>) -> Result<PeriodicOrder> {
        let k = face.blocks().len();
        if reversed.len() != k || perms.len() != k {
            return Err(Error::InvalidOrder(format!("{k} blocks need {k} orientations and permutations")));
        }
        for (b, p) in perms.iter().enumerate() {
            let want = block_type(&face, b);
            if p.affine_type() != want {
                return Err(Error::InvalidOrder(format!(
                    "block {b} needs a permutation of type {want}, got {}",
                    p.affine_type()
                )));
            }
        }
        Ok(PeriodicOrder { face, reversed, perms })
    }

    /// Blocks in order, every block forward with the identity permutation.
    pub fn plain(face: FanFace) -> PeriodicOrder {
        let k = face.blocks().len();
        let perms = (0..k).map(|b| AffinePermutation::identity(block_type(&face, b))).collect();
        PeriodicOrder { face, reversed: vec![false; k], perms }
    }

    /// The usual order of the integers.
    pub fn standard(ty: AffineType) -> PeriodicOrder {
        PeriodicOrder::plain(FanFace::origin(ty))
    }

    /// `i ≺ j ⇔ w⁻¹(i) < w⁻¹(j)`, whose inversion set is `N(w)`.
    pub fn from_element(w: &AffinePermutation) -> PeriodicOrder {
        order_from_triple(&BiclosedTriple::finite(w)).expect("finite sets come from orders")
    }

    pub fn affine_type(&self) -> AffineType {
        self.face.affine_type()
    }

    pub fn face(&self) -> &FanFace {
        &self.face
    }

    pub fn reversed(&self) -> &[bool] {
        &self.reversed
    }

    pub fn perms(&self) -> &[AffinePermutation] {
        &self.perms
    }

    /// Sort key: (block value, position inside the block).
    pub(crate) fn key(&self, x: i64) -> (i64, i64) {
        let ty = self.affine_type();
        let m = ty.modulus();
        let f = self.face.value(x);
        if ty.family.is_signed() && f < 0 {
            let (g, k) = self.key(-x);
            return (-g, -k);
        }
        let b = f as usize;
        let s = signed_residue(ty, x);
        let t = (x - s) / m;
        let block = &self.face.blocks()[b];
        let y = if ty.family.is_signed() && b == 0 {
            let c: Vec<i64> = block.iter().copied().filter(|&v| v > 0).collect();
            let mm = 2 * c.len() as i64 + 1;
            if s == 0 {
                if c.is_empty() {
                    t
                } else {
                    t * mm
                }
            } else {
                let p = c.iter().position(|&v| v == s.abs()).expect("central residue") as i64 + 1;
                s.signum() * p + t * mm
            }
        } else {
            let p = block.iter().position(|&v| v == s).expect("block residue") as i64;
            p + t * block.len() as i64
        };
        let pos = self.perms[b].eval_inv(y);
        (f, if self.reversed[b] { -pos } else { pos })
    }

    /// Compare two integers; multiples of `M` are outside the domain in
    /// types B/C/D.
    pub fn compare(&self, a: i64, b: i64) -> Result<Ordering> {
        let ty = self.affine_type();
        if ty.family.is_signed() {
            for x in [a, b] {
                if x.rem_euclid(ty.modulus()) == 0 {
                    return Err(Error::OutOfDomain(x));
                }
            }
        }
        Ok(self.compare_full(a, b))
    }

    /// Like [`PeriodicOrder::compare`] but also placing multiples of `M`
    /// (the central fixed points) in types B/C/D.
    pub fn compare_full(&self, a: i64, b: i64) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        self.key(a).cmp(&self.key(b))
    }

    /// The integers in `[lo, hi]` (domain only), listed in order.
    pub fn render(&self, lo: i64, hi: i64) -> Vec<i64> {
        let ty = self.affine_type();
        let mut xs: Vec<i64> =
            (lo..=hi).filter(|x| !ty.family.is_signed() || x.rem_euclid(ty.modulus()) != 0).collect();
        xs.sort_by(|&a, &b| self.compare_full(a, b));
        xs
    }

    /// `{(i, j) admissible : i < j, i ≻ j}` as a triple.
    pub fn inversion_set(&self) -> BiclosedTriple {
        let dec = self.face.parahoric();
        let mut phi = BTreeSet::new();
        let mut ws = Vec::new();
        for c in &dec.components {
            match &c.kind {
                ComponentKind::Linear { .. } if dec.split_center.is_some() && c.id < 2 => {
                    // a factor of the split D̃₂ centre: read it off the central order
                    let (w, rev) = self.central_inversions(c);
                    ws.push(w);
                    if rev {
                        phi.insert(c.id);
                    }
                }
                ComponentKind::Linear { residues } => {
                    let b = self
                        .face
                        .blocks()
                        .iter()
                        .position(|blk| blk == residues)
                        .expect("component block is a face block");
                    ws.push(self.perms[b].clone());
                    if self.reversed[b] {
                        phi.insert(c.id);
                    }
                }
                ComponentKind::Central { .. } => {
                    let (w, rev) = self.central_inversions(c);
                    ws.push(w);
                    if rev {
                        phi.insert(c.id);
                    }
                }
            }
        }
        build_biclosed(self.face.clone(), phi, ws).expect("orders produce consistent triples")
    }

    /// The element of component `c` (of the central block) with the same
    /// inversions as the stored signed permutation.
    fn central_inversions(&self, c: &crate::fan::Component) -> (AffinePermutation, bool) {
        let w = &self.perms[0];
        let cty = w.affine_type();
        let m = cty.modulus();
        // relabel the central block to ±1..±m; the component sees the same roots
        let ctx = AffineType::new(self.affine_type().family, cty.n).expect("rank");
        let mut x = BTreeSet::new();
        for r in w.inversions() {
            let Ok(r2) = canonical_root(ctx, r.i, r.j) else { continue };
            // translate the relabelled root to the ambient type, then into the component
            let lift = |y: i64| {
                let s = signed_residue(cty, y);
                let t = (y - s) / m;
                let cs: Vec<i64> = self.face.blocks()[0].iter().copied().filter(|&v| v > 0).collect();
                let base = if s == 0 { 0 } else { s.signum() * cs[s.unsigned_abs() as usize - 1] };
                base + t * self.affine_type().modulus()
            };
            if let Ok(amb) = canonical_root(self.affine_type(), lift(r2.i), lift(r2.j)) {
                if let Some(local) = c.local_root(&amb) {
                    x.insert(local);
                }
            }
        }
        let el = element_from_inversions(c.ty, x).expect("orders induce inversion sets");
        (el, self.reversed[0])
    }

    /// Canonical representative of the orders with the same inversion set.
    pub fn normalize(&self) -> PeriodicOrder {
        order_from_triple(&self.inversion_set()).expect("inversion sets of orders are representable")
    }
}

impl fmt::Display for PeriodicOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.affine_type().modulus();
        let xs: Vec<String> = self.render(-m, 2 * m).iter().map(|x| x.to_string()).collect();
        write!(f, "⋯ {} ⋯", xs.join(" ≺ "))
    }
}

/// A total order realizing a triple: each block ordered by its component
/// element, reversed for the components in `Φ′`.
pub fn order_from_triple(t: &BiclosedTriple) -> Result<PeriodicOrder> {
    let face = t.face().clone();
    let ty = face.affine_type();
    let dec = t.decomposition();
    let mut order = PeriodicOrder::plain(face.clone());
    if let Some((a, b)) = dec.split_center {
        let (ia, ib) = (t.phi_prime().contains(&a), t.phi_prime().contains(&b));
        if ia != ib {
            return Err(Error::DRepresentationRequired);
        }
        // combine the two Ã₁ factors into one D̃₂ element on ±1, ±2
        let d2 = AffineType::d(2);
        let local = FanFace::origin(d2).parahoric();
        let mut w = AffinePermutation::identity(d2);
        for (k, id) in [a, b].into_iter().enumerate() {
            w = w.multiply(&local.components[k].lift_element(&t.w()[id]))?;
        }
        order.perms[0] = AffinePermutation::from_window(AffineType::c(2), w.window())?;
        order.reversed[0] = ia;
    }
    for c in &dec.components {
        let id = c.id;
        let rev = t.phi_prime().contains(&id);
        match &c.kind {
            ComponentKind::Linear { residues } => {
                if dec.split_center.is_some() && id < 2 {
                    continue;
                }
                let b = face.blocks().iter().position(|blk| blk == residues).expect("block");
                order.perms[b] = t.w()[id].clone();
                order.reversed[b] = rev;
            }
            ComponentKind::Central { residues } => {
                order.perms[0] = AffinePermutation::from_window(AffineType::c(residues.len()), t.w()[id].window())?;
                order.reversed[0] = rev;
            }
        }
    }
    debug_assert_eq!(ty, order.affine_type());
    Ok(order)
}

/// The two Ã₁ root classes of a D̃₂ central block `{±i, ±j}` (with
/// `0 < i < j`): `Same` is `±{i, j}`, `Opposite` is `±{i, −j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwistClass {
    Same(i64, i64),
    Opposite(i64, i64),
}

/// An order together with one D̃₂ root class to flip: the set
/// `I(≺) ⊕ {ẽ_b − ẽ_a : a < b, {a, b} in the class}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DTwist {
    pub base: PeriodicOrder,
    pub class: TwistClass,
}

impl DTwist {
    pub fn new(base: PeriodicOrder, class: TwistClass) -> Result<DTwist> {
        let ty = base.affine_type();
        if ty.family != Family::D {
            return Err(Error::InvalidTwist(format!("twists exist only in type D, not {ty}")));
        }
        let center: Vec<i64> = base.face().blocks()[0].iter().copied().filter(|&x| x > 0).collect();
        let (i, j) = match class {
            TwistClass::Same(i, j) | TwistClass::Opposite(i, j) => (i.min(j), i.max(j)),
        };
        if center != vec![i, j] {
            return Err(Error::InvalidTwist(format!("central block is not {{±{i}, ±{j}}}")));
        }
        let class = match class {
            TwistClass::Same(..) => TwistClass::Same(i, j),
            TwistClass::Opposite(..) => TwistClass::Opposite(i, j),
        };
        Ok(DTwist { base, class })
    }
}

/// The triple of a twisted set.
pub fn d_twist_set(d: &DTwist) -> Result<BiclosedTriple> {
    twist_triple(&d.base.inversion_set(), d.class)
}

/// Flip one D̃₂ root class of a triple (toggle that factor in `Φ′`).
pub fn twist_triple(t: &BiclosedTriple, class: TwistClass) -> Result<BiclosedTriple> {
    let c = t
        .decomposition()
        .components
        .iter()
        .find(|c| c.twist_class() == Some(class))
        .ok_or_else(|| Error::InvalidTwist("no D~2 factor of that class".into()))?;
    let mut phi = t.phi_prime().clone();
    if !phi.remove(&c.id) {
        phi.insert(c.id);
    }
    build_biclosed(t.face().clone(), phi, t.w().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::classify_with;
    use crate::roots::Root;

    fn odds_then_evens(reverse_evens: bool) -> PeriodicOrder {
        let a = AffineType::a(2);
        let face = FanFace::new(a, vec![vec![1], vec![0]]).unwrap();
        let mut o = PeriodicOrder::plain(face);
        o.reversed[1] = reverse_evens;
        o
    }

    #[test]
    fn two_orders_one_set() {
        let (o1, o2) = (odds_then_evens(false), odds_then_evens(true));
        assert_eq!(o1.compare(3, 4).unwrap(), Ordering::Less);
        assert_eq!(o1.compare(2, 4).unwrap(), Ordering::Less);
        assert_eq!(o2.compare(2, 4).unwrap(), Ordering::Greater);
        assert_eq!(o1.inversion_set(), o2.inversion_set());
        let t = o1.inversion_set();
        for r in crate::roots::root_window(AffineType::a(2), 5) {
            assert_eq!(t.contains(&r), r.i % 2 == 0 && r.j % 2 == 1);
        }
        assert_eq!(o2.normalize(), o1);
    }

    #[test]
    fn element_orders() {
        let a3 = AffineType::a(4);
        let w = AffinePermutation::from_word(a3, &[0, 1]).unwrap();
        let o = PeriodicOrder::from_element(&w);
        assert_eq!(o.render(0, 3), vec![1, 2, 0, 3]);
        assert_eq!(o.inversion_set(), BiclosedTriple::finite(&w));
    }

    #[test]
    fn inversion_set_matches_classification() {
        for ty in [AffineType::a(3), AffineType::c(2), AffineType::b(2), AffineType::d(2), AffineType::d(3)] {
            for face in crate::fan::enumerate_faces(ty).unwrap() {
                let k = face.blocks().len();
                for mask in 0u32..(1 << k) {
                    let mut o = PeriodicOrder::plain(face.clone());
                    for b in 0..k {
                        o.reversed[b] = mask >> b & 1 == 1;
                    }
                    let t = o.inversion_set();
                    let pred = |r: &Root| o.compare(r.i, r.j).unwrap() == Ordering::Greater;
                    let got = classify_with(ty, 8, &pred).unwrap();
                    assert_eq!(got, t, "{ty} {face}");
                    assert_eq!(order_from_triple(&t).unwrap().inversion_set(), t);
                }
            }
        }
    }

    #[test]
    fn twist_example() {
        let d2 = AffineType::d(2);
        let base = PeriodicOrder::standard(d2);
        let tw = DTwist::new(base, TwistClass::Same(1, 2)).unwrap();
        let t = d_twist_set(&tw).unwrap();
        for r in crate::roots::root_window(d2, 4) {
            let (a, b) = (signed_residue(d2, r.i), signed_residue(d2, r.j));
            assert_eq!(t.contains(&r), a * b > 0, "{r}");
        }
        assert!(matches!(order_from_triple(&t), Err(Error::DRepresentationRequired)));
        let back = twist_triple(&t, TwistClass::Same(1, 2)).unwrap();
        assert_eq!(back, PeriodicOrder::standard(d2).inversion_set());
        assert!(DTwist::new(PeriodicOrder::standard(AffineType::c(2)), TwistClass::Same(1, 2)).is_err());
    }

    #[test]
    fn signed_central_orders() {
        // central blocks carry arbitrary C̃ elements; B̃/D̃ inversion sets must
        // still agree with the classification oracle
        for ty in [AffineType::b(2), AffineType::d(2), AffineType::d(3), AffineType::b(3)] {
            let face = FanFace::origin(ty);
            for layer in crate::perms::elements_up_to(AffineType::c(ty.n), 3) {
                for w in layer {
                    for rev in [false, true] {
                        let o = PeriodicOrder::new(face.clone(), vec![rev], vec![w.clone()]).unwrap();
                        let pred = |r: &Root| o.compare(r.i, r.j).unwrap() == Ordering::Greater;
                        let got = classify_with(ty, 10, &pred).unwrap();
                        assert_eq!(got, o.inversion_set(), "{ty} {w} {rev}");
                        assert_eq!(o.normalize().inversion_set(), got);
                    }
                }
            }
        }
    }
}
