//! JSON interchange.
//!
//! Every value carries its type as `"family"` (`"A"`–`"D"`) and `"n"` (the
//! same parameter as [`AffineType::new`]).

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::closure::WindowSet;
use crate::error::{Error, Result};
use crate::fan::{build_biclosed, BiclosedTriple, FanFace};
use crate::orders::{block_type, PeriodicOrder};
use crate::perms::AffinePermutation;
use crate::roots::{canonical_root, AffineType, Family, Root};

/// Conversion to and from the JSON interchange format.
pub trait Json: Sized {
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self>;

    fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

fn decode<T: DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
}

fn encode<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("serializable")
}

fn ty_of(family: &str, n: usize) -> Result<AffineType> {
    AffineType::new(Family::parse(family)?, n)
}

#[derive(Serialize, Deserialize)]
struct RootJson {
    family: String,
    n: usize,
    i: i64,
    j: i64,
}

impl Json for Root {
    fn to_json(&self) -> serde_json::Value {
        encode(&RootJson { family: self.ty.family.to_string(), n: self.ty.n, i: self.i, j: self.j })
    }

    fn from_json(v: &serde_json::Value) -> Result<Root> {
        let r: RootJson = decode(v)?;
        canonical_root(ty_of(&r.family, r.n)?, r.i, r.j)
    }
}

#[derive(Serialize, Deserialize)]
struct PermJson {
    family: String,
    n: usize,
    window: Vec<i64>,
}

impl Json for AffinePermutation {
    fn to_json(&self) -> serde_json::Value {
        let ty = self.affine_type();
        encode(&PermJson { family: ty.family.to_string(), n: ty.n, window: self.window().to_vec() })
    }

    fn from_json(v: &serde_json::Value) -> Result<AffinePermutation> {
        let p: PermJson = decode(v)?;
        AffinePermutation::from_window(ty_of(&p.family, p.n)?, &p.window)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowJson {
    family: String,
    n: usize,
    #[serde(rename = "H")]
    h: u32,
    roots: Vec<(i64, i64)>,
}

impl Json for WindowSet {
    fn to_json(&self) -> serde_json::Value {
        encode(&WindowJson {
            family: self.ty.family.to_string(),
            n: self.ty.n,
            h: self.h,
            roots: self.members.iter().map(|r| (r.i, r.j)).collect(),
        })
    }

    fn from_json(v: &serde_json::Value) -> Result<WindowSet> {
        let w: WindowJson = decode(v)?;
        let ty = ty_of(&w.family, w.n)?;
        let roots = w.roots.iter().map(|&(i, j)| canonical_root(ty, i, j)).collect::<Result<Vec<_>>>()?;
        WindowSet::new(ty, w.h, roots)
    }
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    family: String,
    n: usize,
    face: Vec<Vec<i64>>,
    phi_prime: BTreeSet<usize>,
    /// Component id → window; missing components carry the identity.
    #[serde(default)]
    w: BTreeMap<usize, Vec<i64>>,
}

impl Json for BiclosedTriple {
    fn to_json(&self) -> serde_json::Value {
        let ty = self.affine_type();
        encode(&TripleJson {
            family: ty.family.to_string(),
            n: ty.n,
            face: self.face().display_blocks(),
            phi_prime: self.phi_prime().clone(),
            w: self.w().iter().enumerate().map(|(k, w)| (k, w.window().to_vec())).collect(),
        })
    }

    fn from_json(v: &serde_json::Value) -> Result<BiclosedTriple> {
        let t: TripleJson = decode(v)?;
        let ty = ty_of(&t.family, t.n)?;
        let face = FanFace::from_display(ty, t.face)?;
        let dec = face.parahoric();
        if let Some(bad) = t.w.keys().find(|&&k| k >= dec.len()) {
            return Err(Error::ComponentMismatch(format!("no component {bad}")));
        }
        let w = dec
            .components
            .iter()
            .map(|c| match t.w.get(&c.id) {
                Some(win) => AffinePermutation::from_window(c.ty, win),
                None => Ok(AffinePermutation::identity(c.ty)),
            })
            .collect::<Result<Vec<_>>>()?;
        build_biclosed(face, t.phi_prime, w)
    }
}

#[derive(Serialize, Deserialize)]
struct OrderJson {
    family: String,
    n: usize,
    /// Stored blocks: residues `0..M` in order for type A; `p_0, p_1, …`
    /// for the signed families.
    blocks: Vec<Vec<i64>>,
    /// `"+"` (forward) or `"-"` (reversed) per block.
    orient: Vec<String>,
    /// Block index → window; missing blocks carry the identity.
    #[serde(default)]
    perms: BTreeMap<usize, Vec<i64>>,
}

impl Json for PeriodicOrder {
    fn to_json(&self) -> serde_json::Value {
        let ty = self.affine_type();
        encode(&OrderJson {
            family: ty.family.to_string(),
            n: ty.n,
            blocks: self.face().blocks().to_vec(),
            orient: self.reversed().iter().map(|&r| if r { "-" } else { "+" }.to_string()).collect(),
            perms: self.perms().iter().enumerate().map(|(k, p)| (k, p.window().to_vec())).collect(),
        })
    }

    fn from_json(v: &serde_json::Value) -> Result<PeriodicOrder> {
        let o: OrderJson = decode(v)?;
        let ty = ty_of(&o.family, o.n)?;
        let face = FanFace::new(ty, o.blocks)?;
        let reversed = o
            .orient
            .iter()
            .map(|s| match s.as_str() {
                "+" => Ok(false),
                "-" => Ok(true),
                _ => Err(Error::Parse(format!("orientation {s:?} is not \"+\" or \"-\""))),
            })
            .collect::<Result<Vec<_>>>()?;
        let k = face.blocks().len();
        if let Some(bad) = o.perms.keys().find(|&&b| b >= k) {
            return Err(Error::InvalidOrder(format!("no block {bad}")));
        }
        let perms = (0..k)
            .map(|b| {
                let bt = block_type(&face, b);
                match o.perms.get(&b) {
                    Some(win) => AffinePermutation::from_window(bt, win),
                    None => Ok(AffinePermutation::identity(bt)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        PeriodicOrder::new(face, reversed, perms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::order_from_triple;
    use crate::sample::random_triple;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn round_trips() {
        let mut rng = StdRng::seed_from_u64(7);
        for ty in [AffineType::a(3), AffineType::b(2), AffineType::c(2), AffineType::d(2), AffineType::d(3)] {
            for _ in 0..30 {
                let t = random_triple(&mut rng, ty, 3);
                assert_eq!(BiclosedTriple::from_json_str(&t.to_json_string()).unwrap(), t);
                let w = t.window(5);
                assert_eq!(WindowSet::from_json_str(&w.to_json_string()).unwrap(), w);
                let lw = t.lifted_w();
                assert_eq!(AffinePermutation::from_json_str(&lw.to_json_string()).unwrap(), lw);
                if let Ok(o) = order_from_triple(&t) {
                    assert_eq!(PeriodicOrder::from_json_str(&o.to_json_string()).unwrap(), o);
                }
            }
        }
    }

    #[test]
    fn roots_canonicalise() {
        let v = serde_json::json!({"family": "C", "n": 2, "i": -8, "j": -2});
        let r = Root::from_json(&v).unwrap();
        assert_eq!((r.i, r.j), (2, 8));
        assert_eq!(Root::from_json(&r.to_json()).unwrap(), r);
        assert!(Root::from_json(&serde_json::json!({"family": "A", "n": 3, "i": 0, "j": 3})).is_err());
    }
}
