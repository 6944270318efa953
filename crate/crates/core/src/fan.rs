//! Faces of the finite Coxeter fan, parahoric components, and the
//! `(F, Φ′, w)` description of biclosed sets.
//!
//! A face is stored as an ordered set partition. The functional `f` of a face
//! is never written down in coordinates: it is the block index, so
//! `⟨f, ẽ_j − ẽ_i⟩ = f(j) − f(i)` and a root lies in `B(F, Φ′)` outside `Φ_F`
//! exactly when that number is negative.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::closure::{is_biclosed, WindowSet};
use crate::error::{Error, Result};
use crate::perms::{elements_up_to, AffinePermutation};
use crate::roots::{canonical_root, root_window, simple_roots, AffineType, Family, Root};

/// A face of the finite Coxeter fan.
///
/// Type A: `blocks` is an ordered set partition of the residues `0..M`.
/// Types B/C/D: `blocks[0]` is the central block `p_0` (symmetric, containing
/// 0 in types B and C, possibly empty in type D) and `blocks[1..]` are
/// `p_1, p_2, …` as sets of signed residues in `±1..±n`; `p_{−a} = −p_a` is
/// implied. Type-D faces whose `p_0` would be empty with a singleton `p_1 = {x}`
/// are stored with `p_0 = {±x}` instead (the two describe the same cone).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FanFace {
    ty: AffineType,
    blocks: Vec<Vec<i64>>,
    value: Vec<i64>,
}

/// Signed residue of `x` in `[−n, n]` (types B/C/D) or plain residue (type A).
pub fn signed_residue(ty: AffineType, x: i64) -> i64 {
    let m = ty.modulus();
    let r = x.rem_euclid(m);
    if ty.family.is_signed() && r > ty.n as i64 {
        r - m
    } else {
        r
    }
}

impl FanFace {
    pub fn new(ty: AffineType, blocks: Vec<Vec<i64>>) -> Result<FanFace> {
        let m = ty.modulus();
        let n = ty.n as i64;
        let mut blocks: Vec<Vec<i64>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        let mut value = vec![i64::MIN; m as usize];
        let mut place = |x: i64, v: i64| -> Result<()> {
            let r = x.rem_euclid(m) as usize;
            if value[r] != i64::MIN {
                return Err(Error::InvalidFace(format!("{x} appears twice")));
            }
            value[r] = v;
            Ok(())
        };
        if ty.family == Family::A {
            for (k, b) in blocks.iter().enumerate() {
                if b.is_empty() {
                    return Err(Error::InvalidFace("empty block".into()));
                }
                for &x in b {
                    if !(0..m).contains(&x) {
                        return Err(Error::InvalidFace(format!("{x} is not a residue mod {m}")));
                    }
                    place(x, k as i64)?;
                }
            }
        } else {
            if blocks.is_empty() {
                return Err(Error::InvalidFace("missing central block".into()));
            }
            if ty.family == Family::D {
                blocks[0].retain(|&x| x != 0);
                if blocks[0].is_empty() && blocks.len() > 1 && blocks[1].len() == 1 {
                    let x = blocks[1][0].abs();
                    blocks[0] = vec![-x, x];
                    blocks.remove(1);
                }
            } else if !blocks[0].contains(&0) {
                blocks[0].push(0);
                blocks[0].sort_unstable();
            }
            let center = blocks[0].clone();
            for &x in &center {
                if x.abs() > n || !center.contains(&-x) {
                    return Err(Error::InvalidFace(format!("central block {center:?} is not symmetric")));
                }
                place(x, 0)?;
            }
            for (a, b) in blocks.iter().enumerate().skip(1) {
                if b.is_empty() {
                    return Err(Error::InvalidFace("empty block".into()));
                }
                for &x in b {
                    if x == 0 || x.abs() > n {
                        return Err(Error::InvalidFace(format!("{x} is not a signed residue in ±1..±{n}")));
                    }
                    place(x, a as i64)?;
                    place(-x, -(a as i64))?;
                }
            }
            if ty.family == Family::D {
                value[0] = 0;
            }
        }
        if value.contains(&i64::MIN) {
            return Err(Error::InvalidFace("blocks do not cover the ground set".into()));
        }
        Ok(FanFace { ty, blocks, value })
    }

    /// The face `{0}`: a single block.
    pub fn origin(ty: AffineType) -> FanFace {
        let blocks = if ty.family == Family::A {
            vec![(0..ty.modulus()).collect()]
        } else {
            let n = ty.n as i64;
            let lo = if ty.family == Family::D { 1 } else { 0 };
            vec![(-n..=n).filter(|x| x.abs() >= lo).collect()]
        };
        FanFace::new(ty, blocks).expect("origin is a face")
    }

    /// The dominant chamber. In type A its displayed blocks are
    /// `({1}, {2}, …, {M})`.
    pub fn dominant(ty: AffineType) -> FanFace {
        let n = ty.n as i64;
        let blocks = if ty.family == Family::A {
            (1..=n).map(|x| vec![x % n]).collect()
        } else if ty.family == Family::D && n >= 2 {
            std::iter::once(vec![]).chain((1..=n).map(|x| vec![x])).collect()
        } else {
            std::iter::once(vec![0]).chain((1..=n).map(|x| vec![x])).collect()
        };
        FanFace::new(ty, blocks).expect("dominant chamber is a face")
    }

    pub fn affine_type(&self) -> AffineType {
        self.ty
    }

    /// Stored blocks (see the type documentation for the layout).
    pub fn blocks(&self) -> &[Vec<i64>] {
        &self.blocks
    }

    /// Block index of `x`: position for type A; `±a` for `x ∈ p_{±a}`
    /// otherwise.
    pub fn value(&self, x: i64) -> i64 {
        self.value[x.rem_euclid(self.ty.modulus()) as usize]
    }

    /// `⟨f, ẽ_j − ẽ_i⟩` up to a positive factor.
    pub fn pairing(&self, r: &Root) -> i64 {
        self.value(r.j) - self.value(r.i)
    }

    /// Blocks as displayed: 1-based residues for type A (residue 0 prints as
    /// `M`), the full symmetric list `p_{−r}, …, p_0, …, p_r` otherwise.
    pub fn display_blocks(&self) -> Vec<Vec<i64>> {
        if self.ty.family == Family::A {
            let m = self.ty.modulus();
            return self
                .blocks
                .iter()
                .map(|b| {
                    let mut v: Vec<i64> = b.iter().map(|&x| if x == 0 { m } else { x }).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
        }
        let neg = self.blocks[1..].iter().rev().map(|b| {
            let mut v: Vec<i64> = b.iter().map(|x| -x).collect();
            v.sort_unstable();
            v
        });
        neg.chain(self.blocks.iter().cloned()).collect()
    }

    /// Inverse of [`FanFace::display_blocks`].
    pub fn from_display(ty: AffineType, shown: Vec<Vec<i64>>) -> Result<FanFace> {
        if ty.family == Family::A {
            let m = ty.modulus();
            let blocks = shown
                .into_iter()
                .map(|b| b.into_iter().map(|x| if x == m { 0 } else { x }).collect())
                .collect();
            return FanFace::new(ty, blocks);
        }
        if shown.len().is_multiple_of(2) {
            // an even listing means an empty central block (type D)
            let half = shown.len() / 2;
            let blocks = std::iter::once(vec![]).chain(shown.into_iter().skip(half)).collect();
            return FanFace::new(ty, blocks);
        }
        let half = shown.len() / 2;
        let face = FanFace::new(ty, shown[half..].to_vec())?;
        let mirrored: Vec<Vec<i64>> = face.display_blocks();
        let canon = |v: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            v.iter()
                .map(|b| {
                    let mut b: Vec<i64> = b.iter().copied().filter(|&x| x != 0 || ty.family != Family::D).collect();
                    b.sort_unstable();
                    b
                })
                .collect()
        };
        if ty.family != Family::D && canon(&mirrored) != canon(&shown) {
            return Err(Error::InvalidFace("blocks are not negation-symmetric".into()));
        }
        Ok(face)
    }

    pub fn is_origin(&self) -> bool {
        self.blocks.len() == 1
    }

    /// The parahoric components of `Φ_F`.
    pub fn parahoric(&self) -> ParahoricDecomposition {
        ParahoricDecomposition::new(self)
    }
}

impl fmt::Display for FanFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .display_blocks()
            .iter()
            .map(|b| {
                let xs: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", xs.join(","))
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// All ordered set partitions of `elems`.
fn ordered_partitions(elems: &[i64]) -> Vec<Vec<Vec<i64>>> {
    if elems.is_empty() {
        return vec![vec![]];
    }
    let k = elems.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let first: Vec<i64> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| elems[b]).collect();
        let rest: Vec<i64> = (0..k).filter(|b| mask >> b & 1 == 0).map(|b| elems[b]).collect();
        for tail in ordered_partitions(&rest) {
            let mut p = vec![first.clone()];
            p.extend(tail);
            out.push(p);
        }
    }
    out
}

/// Every face of the fan, each once.
pub fn enumerate_faces(ty: AffineType) -> Result<Vec<FanFace>> {
    if ty.n > 6 {
        return Err(Error::TooLarge(format!("face enumeration for {ty}")));
    }
    let mut out = BTreeSet::new();
    if ty.family == Family::A {
        let elems: Vec<i64> = (0..ty.modulus()).collect();
        for p in ordered_partitions(&elems) {
            out.insert(FanFace::new(ty, p)?);
        }
        return Ok(out.into_iter().collect());
    }
    let n = ty.n;
    for center_mask in 0u32..(1 << n) {
        let center: Vec<i64> = (0..n).filter(|b| center_mask >> b & 1 == 1).map(|b| b as i64 + 1).collect();
        let rest: Vec<i64> = (0..n).filter(|b| center_mask >> b & 1 == 0).map(|b| b as i64 + 1).collect();
        let mut p0: Vec<i64> = center.iter().flat_map(|&x| [x, -x]).collect();
        if ty.family != Family::D {
            p0.push(0);
        }
        for signs in 0u32..(1 << rest.len()) {
            let signed: Vec<i64> =
                rest.iter().enumerate().map(|(b, &x)| if signs >> b & 1 == 1 { -x } else { x }).collect();
            for p in ordered_partitions(&signed) {
                if ty.family == Family::D && center.is_empty() && p.first().is_some_and(|b| b.len() == 1) {
                    continue;
                }
                let mut blocks = vec![p0.clone()];
                blocks.extend(p);
                out.insert(FanFace::new(ty, blocks)?);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The faces of the fan ordered by inclusion of closed cones (`F ≤ G` when
/// every root that `F` pairs nonzero with gets the same sign from `G`), with
/// cover relations as edges `(F, G)`.
#[allow(clippy::type_complexity)]
pub fn face_poset(ty: AffineType) -> Result<(Vec<FanFace>, Vec<(usize, usize)>)> {
    let faces = enumerate_faces(ty)?;
    let roots = root_window(ty, 1);
    let signs: Vec<Vec<i64>> = faces.iter().map(|f| roots.iter().map(|r| f.pairing(r).signum()).collect()).collect();
    let dim: Vec<usize> = signs.iter().map(|s| s.iter().filter(|&&x| x == 0).count()).collect();
    let below = |a: usize, b: usize| signs[a].iter().zip(&signs[b]).all(|(&x, &y)| x == 0 || x == y);
    let mut edges = Vec::new();
    for a in 0..faces.len() {
        for b in 0..faces.len() {
            if a != b && below(a, b) && dim[a] > dim[b] {
                let between = (0..faces.len()).any(|c| c != a && c != b && below(a, c) && below(c, b) && dim[a] > dim[c] && dim[c] > dim[b]);
                if !between {
                    edges.push((a, b));
                }
            }
        }
    }
    Ok((faces, edges))
}

// ---------------------------------------------------------------------------
// parahoric components

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    /// An Ã_{k−1} factor on a block `{r_0 < ⋯ < r_{k−1}}` (signed residues in
    /// types B/C/D, where the block's mirror image is covered too):
    /// `φ(y) = r_{y mod k} + ⌊y/k⌋·M`.
    Linear { residues: Vec<i64> },
    /// The factor on the central block `{0, ±c_1, …, ±c_m}`, of the ambient
    /// family and rank `m`: `φ(r + tM′) = sign(r)·c_{|r|} + tM`.
    Central { residues: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub id: usize,
    pub ty: AffineType,
    pub kind: ComponentKind,
    ambient: AffineType,
}

impl Component {
    fn new(id: usize, ambient: AffineType, kind: ComponentKind) -> Component {
        let ty = match &kind {
            ComponentKind::Linear { residues } => AffineType::a(residues.len()),
            ComponentKind::Central { residues } => AffineType::new(ambient.family, residues.len()).expect("rank"),
        };
        Component { id, ty, kind, ambient }
    }

    /// The relabeling map from the component's integers to the ambient ones.
    pub fn phi(&self, y: i64) -> i64 {
        let m = self.ambient.modulus();
        match &self.kind {
            ComponentKind::Linear { residues } => {
                let k = residues.len() as i64;
                residues[y.rem_euclid(k) as usize] + y.div_euclid(k) * m
            }
            ComponentKind::Central { residues } => {
                let mm = self.ty.modulus();
                let r = signed_residue(self.ty, y);
                let t = (y - r) / mm;
                let base = if r == 0 { 0 } else { r.signum() * residues[r.unsigned_abs() as usize - 1] };
                base + t * m
            }
        }
    }

    /// `φ⁻¹(x)` when the residue of `x` belongs to the component.
    pub fn phi_inv(&self, x: i64) -> Option<i64> {
        let m = self.ambient.modulus();
        let s = signed_residue(self.ambient, x);
        let t = (x - s) / m;
        match &self.kind {
            ComponentKind::Linear { residues } => {
                let k = residues.len() as i64;
                residues.iter().position(|&r| r == s).map(|p| p as i64 + t * k)
            }
            ComponentKind::Central { residues } => {
                let mm = self.ty.modulus();
                if s == 0 {
                    return (self.ambient.family != Family::D).then_some(t * mm);
                }
                residues.iter().position(|&c| c == s.abs()).map(|p| s.signum() * (p as i64 + 1) + t * mm)
            }
        }
    }

    /// The component root corresponding to an ambient root, if it lies in
    /// this component.
    pub fn local_root(&self, r: &Root) -> Option<Root> {
        let try_pair = |i: i64, j: i64| -> Option<Root> {
            let (a, b) = (self.phi_inv(i)?, self.phi_inv(j)?);
            canonical_root(self.ty, a, b).ok()
        };
        try_pair(r.i, r.j).or_else(|| if self.ambient.family.is_signed() { try_pair(-r.j, -r.i) } else { None })
    }

    /// The ambient root of a component root.
    pub fn lift_root(&self, r: &Root) -> Root {
        canonical_root(self.ambient, self.phi(r.i), self.phi(r.j)).expect("components embed roots")
    }

    /// The ambient group element of a component element (via a reduced word
    /// in lifted simple reflections).
    pub fn lift_element(&self, w: &AffinePermutation) -> AffinePermutation {
        let gens: Vec<AffinePermutation> = simple_roots(self.ty)
            .into_iter()
            .map(|(i, j)| {
                let r = canonical_root(self.ty, i, j).expect("simple roots are roots");
                AffinePermutation::root_reflection(&self.lift_root(&r))
            })
            .collect();
        let mut out = AffinePermutation::identity(self.ambient);
        for k in w.reduced_word() {
            out = out.multiply(&gens[k]).expect("same type");
        }
        out
    }

    /// Type-D twist class of a split D̃₂ factor.
    pub fn twist_class(&self) -> Option<crate::orders::TwistClass> {
        match &self.kind {
            ComponentKind::Linear { residues } if self.ambient.family == Family::D && residues.len() == 2 => {
                let (a, b) = (residues[0], residues[1]);
                if a > 0 && b > 0 {
                    Some(crate::orders::TwistClass::Same(a, b))
                } else {
                    Some(crate::orders::TwistClass::Opposite(b, -a))
                }
            }
            _ => None,
        }
    }
}

/// `W_F` as a product of irreducible affine factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParahoricDecomposition {
    pub components: Vec<Component>,
    /// For split D̃₂ factors, the ids of the two Ã₁ components.
    pub split_center: Option<(usize, usize)>,
}

impl ParahoricDecomposition {
    fn new(face: &FanFace) -> ParahoricDecomposition {
        let ty = face.ty;
        let mut kinds = Vec::new();
        let mut split = false;
        if ty.family == Family::A {
            for b in &face.blocks {
                if b.len() > 1 {
                    kinds.push(ComponentKind::Linear { residues: b.clone() });
                }
            }
        } else {
            let c: Vec<i64> = face.blocks[0].iter().copied().filter(|&x| x > 0).collect();
            let m = c.len();
            match ty.family {
                Family::D if m == 2 => {
                    kinds.push(ComponentKind::Linear { residues: vec![c[0], c[1]] });
                    kinds.push(ComponentKind::Linear { residues: vec![-c[1], c[0]] });
                    split = true;
                }
                Family::D if m <= 1 => {}
                _ if m == 0 => {}
                _ => kinds.push(ComponentKind::Central { residues: c }),
            }
            for b in &face.blocks[1..] {
                if b.len() > 1 {
                    kinds.push(ComponentKind::Linear { residues: b.clone() });
                }
            }
        }
        let components = kinds.into_iter().enumerate().map(|(id, k)| Component::new(id, ty, k)).collect();
        ParahoricDecomposition { components, split_center: split.then_some((0, 1)) }
    }

    /// The component containing `r` (which must pair to zero with the face)
    /// and the corresponding component root.
    pub fn locate(&self, r: &Root) -> Option<(usize, Root)> {
        self.components.iter().find_map(|c| c.local_root(r).map(|x| (c.id, x)))
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

// ---------------------------------------------------------------------------
// triples

/// The biclosed set `B(F, Φ′, w)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiclosedTriple {
    face: FanFace,
    phi_prime: BTreeSet<usize>,
    w: Vec<AffinePermutation>,
    decomposition: ParahoricDecomposition,
}

/// Validate `(F, Φ′, w)`; `w` lists one element per component, in component
/// order.
pub fn build_biclosed(
    face: FanFace,
    phi_prime: BTreeSet<usize>,
    w: Vec<AffinePermutation>,
) -> Result<BiclosedTriple> {
    let decomposition = face.parahoric();
    if w.len() != decomposition.len() {
        return Err(Error::ComponentMismatch(format!(
            "{} components but {} group elements",
            decomposition.len(),
            w.len()
        )));
    }
    for (c, x) in decomposition.components.iter().zip(&w) {
        if x.affine_type() != c.ty {
            return Err(Error::ComponentMismatch(format!(
                "component {} has type {} but its element has type {}",
                c.id,
                c.ty,
                x.affine_type()
            )));
        }
    }
    if let Some(&bad) = phi_prime.iter().find(|&&c| c >= decomposition.len()) {
        return Err(Error::ComponentMismatch(format!("no component {bad}")));
    }
    Ok(BiclosedTriple { face, phi_prime, w, decomposition })
}

/// Component ids for a list of blocks (display form). In types B/C a
/// non-central block must be listed together with its negative.
pub fn phi_from_blocks(face: &FanFace, blocks: &[Vec<i64>]) -> Result<BTreeSet<usize>> {
    let dec = face.parahoric();
    let ty = face.ty;
    let mut out = BTreeSet::new();
    let norm = |b: &Vec<i64>| -> Vec<i64> {
        let mut v: Vec<i64> = b
            .iter()
            .map(|&x| if ty.family == Family::A && x == ty.modulus() { 0 } else { x })
            .filter(|&x| x != 0 || ty.family == Family::A)
            .collect();
        v.sort_unstable();
        v
    };
    let listed: Vec<Vec<i64>> = blocks.iter().map(norm).collect();
    for (k, b) in listed.iter().enumerate() {
        let found = dec.components.iter().find(|c| match &c.kind {
            ComponentKind::Linear { residues } => {
                let mut neg: Vec<i64> = residues.iter().map(|x| -x).collect();
                neg.sort_unstable();
                residues == b || (ty.family.is_signed() && &neg == b)
            }
            ComponentKind::Central { residues } => {
                let mut all: Vec<i64> = residues.iter().flat_map(|&x| [x, -x]).collect();
                all.sort_unstable();
                &all == b
            }
        });
        let c = found.ok_or_else(|| Error::ComponentMismatch(format!("{:?} is not a component block", blocks[k])))?;
        if ty.family.is_signed() && matches!(c.kind, ComponentKind::Linear { .. }) && ty.family != Family::D {
            let mut neg: Vec<i64> = b.iter().map(|x| -x).collect();
            neg.sort_unstable();
            if !listed.contains(&neg) {
                return Err(Error::UnpairedPhiPrime(c.id));
            }
        }
        out.insert(c.id);
    }
    Ok(out)
}

impl BiclosedTriple {
    /// `B(F, Φ′, e)`.
    pub fn with_identity(face: FanFace, phi_prime: BTreeSet<usize>) -> Result<BiclosedTriple> {
        let w = face.parahoric().components.iter().map(|c| AffinePermutation::identity(c.ty)).collect();
        build_biclosed(face, phi_prime, w)
    }

    /// `N(w)` as the triple `({0}, ∅, w)`.
    pub fn finite(w: &AffinePermutation) -> BiclosedTriple {
        let ty = w.affine_type();
        let face = FanFace::origin(ty);
        let dec = face.parahoric();
        let ws = match dec.components.as_slice() {
            [] => Vec::new(),
            [c] if c.ty == ty => vec![w.clone()],
            comps => {
                // D̃₂: the origin splits into two Ã₁ factors
                let (u, v) = split_d2(comps, w);
                vec![u, v]
            }
        };
        build_biclosed(face, BTreeSet::new(), ws).expect("origin decomposition matches")
    }

    pub fn face(&self) -> &FanFace {
        &self.face
    }

    pub fn phi_prime(&self) -> &BTreeSet<usize> {
        &self.phi_prime
    }

    pub fn w(&self) -> &[AffinePermutation] {
        &self.w
    }

    pub fn decomposition(&self) -> &ParahoricDecomposition {
        &self.decomposition
    }

    pub fn affine_type(&self) -> AffineType {
        self.face.ty
    }

    /// Exact membership test.
    pub fn contains(&self, r: &Root) -> bool {
        let p = self.face.pairing(r);
        if p != 0 {
            return p < 0;
        }
        match self.decomposition.locate(r) {
            Some((c, local)) => {
                let w = &self.w[c];
                let inverted = w.eval_inv(local.i) > w.eval_inv(local.j);
                self.phi_prime.contains(&c) != inverted
            }
            None => false,
        }
    }

    pub fn membership(&self, r: &Root) -> Result<bool> {
        if r.ty != self.affine_type() {
            return Err(Error::TypeMismatch(self.affine_type().to_string(), r.ty.to_string()));
        }
        Ok(self.contains(r))
    }

    /// The window trace up to height `h`.
    pub fn window(&self, h: u32) -> WindowSet {
        WindowSet::from_predicate(self.affine_type(), h, |r| self.contains(r))
    }

    /// Sum of component lengths.
    pub fn total_length(&self) -> usize {
        self.w.iter().map(|x| x.length()).sum()
    }

    /// The product of the lifted component elements, an element of `W_F`.
    pub fn lifted_w(&self) -> AffinePermutation {
        let mut out = AffinePermutation::identity(self.affine_type());
        for (c, x) in self.decomposition.components.iter().zip(&self.w) {
            out = out.multiply(&c.lift_element(x)).expect("same type");
        }
        out
    }

    /// A window height at which this set is certainly classified exactly.
    pub fn stable_height(&self) -> u32 {
        let spread: i64 = self.lifted_w().max_displacement();
        let m = self.affine_type().modulus();
        (4 * (spread / m + 1) + 2 * self.total_length() as i64 + 4) as u32
    }
}

fn split_d2(comps: &[Component], w: &AffinePermutation) -> (AffinePermutation, AffinePermutation) {
    // reconstruct each factor from the inversions that fall in it
    let inv = w.inversions();
    let mut parts = Vec::new();
    for c in comps {
        let x: BTreeSet<Root> = inv.iter().filter_map(|r| c.local_root(r)).collect();
        parts.push(element_from_inversions(c.ty, x).expect("factors of inversion sets are inversion sets"));
    }
    (parts[0].clone(), parts[1].clone())
}

impl fmt::Display for BiclosedTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phi: Vec<String> = self.phi_prime.iter().map(|c| c.to_string()).collect();
        let ws: Vec<String> = self.w.iter().enumerate().map(|(c, x)| format!("{c}: {x}")).collect();
        write!(f, "F = {}, Φ′ = {{{}}}, w = {{{}}}", self.face, phi.join(", "), ws.join(", "))
    }
}

/// Recover `w` from a finite set `X = N(w)` by peeling left descents:
/// if `α_s ∈ N(w)` then `N(s w) = s(N(w) ∖ {α_s})`.
pub fn element_from_inversions(ty: AffineType, mut x: BTreeSet<Root>) -> Option<AffinePermutation> {
    let simples: Vec<Root> =
        simple_roots(ty).into_iter().map(|(i, j)| canonical_root(ty, i, j).expect("simple")).collect();
    let gens = AffinePermutation::generators(ty);
    let mut word = Vec::new();
    while !x.is_empty() {
        let k = simples.iter().position(|a| x.contains(a))?;
        x.remove(&simples[k]);
        let mut next = BTreeSet::new();
        for r in &x {
            let (y, positive) = gens[k].apply_root(r);
            if !positive {
                return None;
            }
            next.insert(y);
        }
        x = next;
        word.push(k);
    }
    let mut w = AffinePermutation::identity(ty);
    for k in word {
        w = w.multiply(&gens[k]).ok()?;
    }
    Some(w)
}

// ---------------------------------------------------------------------------
// classification

/// Find the triple describing a biclosed set given by a membership predicate,
/// reading the predicate only on roots of height `≤ h`.
///
/// The top half of the window is taken to show the asymptotic behaviour; if
/// it does not, `UnstableWindow` asks for a larger `h`.
#[allow(clippy::needless_range_loop)]
pub fn classify_with(ty: AffineType, h: u32, pred: &dyn Fn(&Root) -> bool) -> Result<BiclosedTriple> {
    let m = ty.modulus();
    let cut = h - h.div_ceil(2);
    let ground: Vec<i64> = if ty.family == Family::A {
        (0..m).collect()
    } else {
        let n = ty.n as i64;
        (-n..=n).filter(|&x| x != 0 || ty.family != Family::D).collect()
    };
    let g = ground.len();
    let pos = |x: i64| ground.iter().position(|&y| y == x).expect("ground element");

    // eventually-in along the direction e_y − e_x
    let eventually = |x: i64, y: i64| -> Result<Option<bool>> {
        if !ty.admissible(x, y) {
            return Ok(None);
        }
        let mut seen = None;
        let mut k = 0;
        loop {
            let j = y + k * m;
            k += 1;
            if j <= x {
                continue;
            }
            let Ok(r) = canonical_root(ty, x, j) else {
                if (j - x) / m > h as i64 {
                    break;
                }
                continue;
            };
            let ht = r.delta_height();
            if ht > h {
                break;
            }
            if ht <= cut && h > 0 {
                continue;
            }
            let v = pred(&r);
            match seen {
                None => seen = Some(v),
                Some(s) if s != v => return Err(Error::UnstableWindow(h)),
                _ => {}
            }
        }
        seen.map(Some).ok_or(Error::UnstableWindow(h))
    };

    let mut less = vec![vec![false; g]; g];
    for &x in &ground {
        for &y in &ground {
            if x == y || (ty.family.is_signed() && (x == 0 || y == 0)) {
                continue;
            }
            let (Some(in_xy), Some(in_yx)) = (eventually(x, y)?, eventually(y, x)?) else {
                continue;
            };
            // a root (x, y) is eventually in exactly when f(y) < f(x)
            if in_xy && !in_yx {
                less[pos(y)][pos(x)] = true;
            }
        }
    }
    if ty.family.is_signed() && ty.family != Family::D {
        let z = pos(0);
        for &y in &ground {
            if y != 0 {
                less[pos(y)][z] = less[pos(y)][pos(-y)];
                less[z][pos(y)] = less[pos(-y)][pos(y)];
            }
        }
    }
    for k in 0..g {
        for a in 0..g {
            if less[a][k] {
                for b in 0..g {
                    if less[k][b] {
                        less[a][b] = true;
                    }
                }
            }
        }
    }
    if (0..g).any(|a| less[a][a]) {
        return Err(not_biclosed(ty, h, pred));
    }
    let rank: Vec<usize> = (0..g).map(|b| (0..g).filter(|&a| less[a][b]).count()).collect();
    let mut by_rank: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for (k, &x) in ground.iter().enumerate() {
        by_rank.entry(rank[k]).or_default().push(x);
    }
    let ordered: Vec<Vec<i64>> = by_rank.into_values().collect();
    let blocks = if ty.family == Family::A {
        ordered
    } else {
        let len = ordered.len();
        for k in 0..len {
            let mut neg: Vec<i64> = ordered[len - 1 - k].iter().map(|x| -x).collect();
            neg.sort_unstable();
            if neg != ordered[k] {
                return Err(not_biclosed(ty, h, pred));
            }
        }
        if len % 2 == 1 {
            ordered[len / 2..].to_vec()
        } else {
            std::iter::once(Vec::new()).chain(ordered[len / 2..].iter().cloned()).collect()
        }
    };
    let face = FanFace::new(ty, blocks).map_err(|_| not_biclosed(ty, h, pred))?;

    let dec = face.parahoric();
    let mut local: Vec<Vec<(Root, u32, bool)>> = vec![Vec::new(); dec.len()];
    for r in root_window(ty, h) {
        if face.pairing(&r) == 0 {
            if let Some((c, x)) = dec.locate(&r) {
                local[c].push((x, r.delta_height(), pred(&r)));
            }
        }
    }
    let mut phi_prime = BTreeSet::new();
    let mut ws = Vec::new();
    for (c, roots) in local.iter().enumerate() {
        let mut top = roots.iter().filter(|(_, ht, _)| *ht > cut || h == 0).map(|x| x.2);
        let first = top.next().ok_or(Error::UnstableWindow(h))?;
        if top.any(|v| v != first) {
            return Err(Error::UnstableWindow(h));
        }
        if first {
            phi_prime.insert(c);
        }
        let x: BTreeSet<Root> = roots.iter().filter(|x| x.2 != first).map(|x| x.0).collect();
        let w = element_from_inversions(dec.components[c].ty, x).ok_or_else(|| not_biclosed(ty, h, pred))?;
        ws.push(w);
    }
    let t = build_biclosed(face, phi_prime, ws)?;
    for r in root_window(ty, h) {
        if t.contains(&r) != pred(&r) {
            return Err(match is_biclosed(&WindowSet::from_predicate(ty, h, pred)) {
                c if !c.is_pass() => Error::NotBiclosed(Some(c)),
                _ => Error::UnstableWindow(h),
            });
        }
    }
    Ok(t)
}

fn not_biclosed(ty: AffineType, h: u32, pred: &dyn Fn(&Root) -> bool) -> Error {
    let c = is_biclosed(&WindowSet::from_predicate(ty, h, pred));
    Error::NotBiclosed((!c.is_pass()).then_some(c))
}

/// Classify an explicit window set.
pub fn classify(s: &WindowSet) -> Result<BiclosedTriple> {
    let c = is_biclosed(s);
    if !c.is_pass() {
        return Err(Error::NotBiclosed(Some(c)));
    }
    classify_with(s.ty, s.h, &|r| s.contains(r))
}

/// `v · B = {|vγ| : γ ∈ B} ⊕ N(v)`: a root `r` is in `v · B` iff `v⁻¹r` is a
/// positive root in `B` or a negative root whose negative is not in `B`.
pub fn act(v: &AffinePermutation, t: &BiclosedTriple) -> Result<BiclosedTriple> {
    let ty = t.affine_type();
    if v.affine_type() != ty {
        return Err(Error::TypeMismatch(ty.to_string(), v.affine_type().to_string()));
    }
    let vi = v.invert();
    let pred = |r: &Root| {
        let (g, positive) = vi.apply_root(r);
        t.contains(&g) == positive
    };
    let m = ty.modulus();
    let h = t.stable_height() + 2 * (4 * (v.max_displacement() / m + 1) as u32 + v.length() as u32);
    classify_with(ty, h, &pred)
}

/// A finite piece of the poset of biclosed sets ordered by containment; edges
/// are covers (the two sets differ by one root), directed upwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetFragment {
    pub nodes: Vec<BiclosedTriple>,
    pub edges: Vec<(usize, usize)>,
}

impl PosetFragment {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n");
        for (k, t) in self.nodes.iter().enumerate() {
            let label: Vec<String> = t.w().iter().map(|x| x.to_string()).collect();
            let label = if label.is_empty() { "e".to_string() } else { label.join(" x ") };
            out.push_str(&format!("  n{k} [label=\"{label}\"];\n"));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  n{a} -> n{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// The sets `B(F, Φ′, w)` with `Σ ℓ(w_c) ≤ bound`, with their cover relations.
pub fn path_component_poset(face: &FanFace, phi_prime: &BTreeSet<usize>, bound: usize) -> Result<PosetFragment> {
    let dec = face.parahoric();
    let layers: Vec<Vec<Vec<AffinePermutation>>> =
        dec.components.iter().map(|c| elements_up_to(c.ty, bound)).collect();
    // all tuples of component elements with total length ≤ bound
    let mut tuples: Vec<(usize, Vec<AffinePermutation>)> = vec![(0, Vec::new())];
    for comp in &layers {
        let mut next = Vec::new();
        for (len, t) in &tuples {
            for (l, layer) in comp.iter().enumerate() {
                if len + l > bound {
                    break;
                }
                for x in layer {
                    let mut t2 = t.clone();
                    t2.push(x.clone());
                    next.push((len + l, t2));
                }
            }
        }
        if next.len() > 20_000 {
            return Err(Error::TooLarge(format!("more than 20000 elements below length {bound}")));
        }
        tuples = next;
    }
    tuples.sort();
    let nodes: Vec<BiclosedTriple> = tuples
        .iter()
        .map(|(_, w)| build_biclosed(face.clone(), phi_prime.clone(), w.clone()))
        .collect::<Result<_>>()?;
    let index: BTreeMap<Vec<AffinePermutation>, usize> =
        tuples.iter().enumerate().map(|(k, (_, w))| (w.clone(), k)).collect();
    let mut edges = Vec::new();
    for (k, (_, w)) in tuples.iter().enumerate() {
        for (c, comp) in dec.components.iter().enumerate() {
            for s in AffinePermutation::generators(comp.ty) {
                let mut w2 = w.clone();
                w2[c] = w[c].multiply(&s)?;
                if w2[c].length() < w[c].length() {
                    continue;
                }
                if let Some(&k2) = index.get(&w2) {
                    edges.push(if phi_prime.contains(&c) { (k2, k) } else { (k, k2) });
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(PosetFragment { nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(ty: AffineType, i: i64, j: i64) -> Root {
        Root::new(ty, i, j).unwrap()
    }

    #[test]
    fn a2_face_poset() {
        let (faces, edges) = face_poset(AffineType::a(3)).unwrap();
        assert_eq!(faces.len(), 13);
        // origin → 6 rays, each ray → 2 chambers
        assert_eq!(edges.len(), 6 + 12);
    }

    #[test]
    fn face_counts() {
        assert_eq!(enumerate_faces(AffineType::a(3)).unwrap().len(), 13);
        assert_eq!(enumerate_faces(AffineType::a(2)).unwrap().len(), 3);
        assert_eq!(enumerate_faces(AffineType::c(1)).unwrap().len(), 3);
        assert_eq!(enumerate_faces(AffineType::c(2)).unwrap().len(), 17);
        assert_eq!(enumerate_faces(AffineType::d(2)).unwrap().len(), 9);
    }

    #[test]
    fn decompositions() {
        let a3 = AffineType::a(4);
        let f = FanFace::from_display(a3, vec![vec![1, 3], vec![2, 4]]).unwrap();
        let d = f.parahoric();
        assert_eq!(d.len(), 2);
        assert!(d.components.iter().all(|c| c.ty == AffineType::a(2)));
        let c2 = AffineType::c(2);
        assert_eq!(FanFace::origin(c2).parahoric().components[0].ty, c2);
        let d2 = FanFace::origin(AffineType::d(2)).parahoric();
        assert_eq!(d2.len(), 2);
        assert!(d2.split_center.is_some());
    }

    #[test]
    fn figure_two() {
        let a1 = AffineType::a(2);
        let t = BiclosedTriple::with_identity(FanFace::dominant(a1), BTreeSet::new()).unwrap();
        for x in root_window(a1, 6) {
            assert_eq!(t.contains(&x), x.i == 0);
        }
        assert_eq!(classify(&t.window(6)).unwrap(), t);
    }

    #[test]
    fn worked_set() {
        let a3 = AffineType::a(4);
        let f = FanFace::from_display(a3, vec![vec![1, 3], vec![2, 4]]).unwrap();
        let phi = phi_from_blocks(&f, &[vec![2, 4]]).unwrap();
        let t = BiclosedTriple::with_identity(f, phi).unwrap();
        assert!(t.contains(&r(a3, 0, 2)) && t.contains(&r(a3, 2, 4)));
        assert!(!t.contains(&r(a3, 1, 3)) && !t.contains(&r(a3, 3, 5)));
        assert_eq!(classify(&t.window(6)).unwrap(), t);
    }

    #[test]
    fn finite_sets_classify_to_origin() {
        for ty in [AffineType::a(3), AffineType::c(2), AffineType::b(2), AffineType::d(2), AffineType::d(3)] {
            for layer in elements_up_to(ty, 3) {
                for w in layer {
                    let s = WindowSet::new(ty, 8, w.inversions()).unwrap();
                    let t = classify(&s).unwrap();
                    assert!(t.face().is_origin() || ty == AffineType::d(2), "{ty} {w}: {t}");
                    assert_eq!(t, BiclosedTriple::finite(&w));
                    assert_eq!(t.lifted_w(), w);
                }
            }
        }
    }

    #[test]
    fn action_on_finite_sets() {
        let ty = AffineType::c(2);
        let els: Vec<AffinePermutation> = elements_up_to(ty, 2).into_iter().flatten().collect();
        for v in &els {
            for w in &els {
                let got = act(v, &BiclosedTriple::finite(w)).unwrap();
                assert_eq!(got, BiclosedTriple::finite(&v.multiply(w).unwrap()));
            }
        }
    }

    #[test]
    fn a2_path_poset() {
        let ty = AffineType::a(3);
        let p = path_component_poset(&FanFace::origin(ty), &BTreeSet::new(), 2).unwrap();
        assert_eq!(p.nodes.len(), 10);
        assert_eq!(p.edges.len(), 9);
    }

    fn all_triples(ty: AffineType, bound: usize) -> Vec<BiclosedTriple> {
        let mut out = Vec::new();
        for face in enumerate_faces(ty).unwrap() {
            let dec = face.parahoric();
            for mask in 0u32..(1 << dec.len()) {
                let phi: BTreeSet<usize> = (0..dec.len()).filter(|c| mask >> c & 1 == 1).collect();
                for node in path_component_poset(&face, &phi, bound).unwrap().nodes {
                    out.push(node);
                }
            }
        }
        out
    }

    #[test]
    fn round_trip_small() {
        for ty in [AffineType::a(3), AffineType::c(2), AffineType::d(2), AffineType::b(2)] {
            for t in all_triples(ty, 2) {
                let h = t.stable_height();
                let got = classify_with(ty, h, &|r| t.contains(r));
                assert_eq!(got.as_ref(), Ok(&t), "{ty} {t}");
                assert!(is_biclosed(&t.window(h)).is_pass(), "{ty} {t}");
            }
        }
    }
}
