//! Random elements and triples for property checks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fan::{build_biclosed, enumerate_faces, BiclosedTriple};
use crate::perms::AffinePermutation;
use crate::roots::AffineType;

/// A random reduced-ish element: a random word of length `≤ max_len`.
pub fn random_element<R: Rng>(rng: &mut R, ty: AffineType, max_len: usize) -> AffinePermutation {
    let gens = AffinePermutation::generators(ty);
    let mut w = AffinePermutation::identity(ty);
    if gens.is_empty() {
        return w;
    }
    for _ in 0..rng.gen_range(0..=max_len) {
        w = w.multiply(gens.choose(rng).expect("generators")).expect("same type");
    }
    w
}

/// A random triple: uniform face, uniform `Φ′`, random component elements
/// of length `≤ max_len`.
pub fn random_triple<R: Rng>(rng: &mut R, ty: AffineType, max_len: usize) -> BiclosedTriple {
    let faces = enumerate_faces(ty).expect("enumerable type");
    let face = faces.choose(rng).expect("faces").clone();
    let dec = face.parahoric();
    let mut phi: BTreeSet<usize> = (0..dec.len()).filter(|_| rng.gen_bool(0.5)).collect();
    if let Some((a, b)) = dec.split_center {
        // keep the split D̃₂ centre representable by an order
        if phi.contains(&a) != phi.contains(&b) {
            phi.insert(a);
            phi.insert(b);
        }
    }
    let w = dec.components.iter().map(|c| random_element(rng, c.ty, max_len)).collect();
    build_biclosed(face, phi, w).expect("consistent triple")
}

/// A random finite biclosed set `N(w)`.
pub fn random_finite<R: Rng>(rng: &mut R, ty: AffineType, max_len: usize) -> BiclosedTriple {
    BiclosedTriple::finite(&random_element(rng, ty, max_len))
}
