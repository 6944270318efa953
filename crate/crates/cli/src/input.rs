//! Parsing of command-line values and input files.

use std::collections::BTreeMap;
use std::path::Path;

use afweak_core::closure::WindowSet;
use afweak_core::fan::{build_biclosed, classify, phi_from_blocks};
use afweak_core::json::Json;
use afweak_core::{AffinePermutation, AffineType, BiclosedTriple, Error, FanFace, Family, PeriodicOrder, Result};

pub fn affine_type(family: &str, n: usize) -> Result<AffineType> {
    AffineType::new(Family::parse(family)?, n)
}

fn numbers(s: &str) -> Result<Vec<i64>> {
    s.split([',', ' '])
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<i64>().map_err(|_| Error::Parse(format!("{x:?} is not an integer"))))
        .collect()
}

/// Blocks written `{1,3},{2,4}` or `1,3|2,4`.
pub fn blocks(s: &str) -> Result<Vec<Vec<i64>>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    if !s.contains('{') {
        return s.split('|').map(numbers).collect();
    }
    let mut out = Vec::new();
    for piece in s.split('}') {
        let Some(open) = piece.find('{') else {
            if piece.trim_matches([',', ' ']).is_empty() {
                continue;
            }
            return Err(Error::Parse(format!("stray text {piece:?} in {s:?}")));
        };
        out.push(numbers(&piece[open + 1..])?);
    }
    Ok(out)
}

/// A word `s0 s1 s2` in the simple generators.
pub fn word(ty: AffineType, s: &str) -> Result<AffinePermutation> {
    let letters = s
        .split([' ', ','])
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.strip_prefix('s')
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("{x:?} is not a generator s<k>")))
        })
        .collect::<Result<Vec<_>>>()?;
    AffinePermutation::from_word(ty, &letters)
}

/// `ID=window` or `ID=s0 s1` per component.
pub fn component_elements(face: &FanFace, specs: &[String]) -> Result<Vec<AffinePermutation>> {
    let dec = face.parahoric();
    let mut given = BTreeMap::new();
    for spec in specs {
        let (id, val) = spec.split_once('=').ok_or_else(|| Error::Parse(format!("{spec:?} is not ID=element")))?;
        let id: usize = id.trim().parse().map_err(|_| Error::Parse(format!("bad component id {id:?}")))?;
        let c = dec.components.get(id).ok_or_else(|| Error::ComponentMismatch(format!("no component {id}")))?;
        let el = if val.contains('s') { word(c.ty, val)? } else { AffinePermutation::from_window(c.ty, &numbers(val)?)? };
        given.insert(id, el);
    }
    Ok(dec
        .components
        .iter()
        .map(|c| given.remove(&c.id).unwrap_or_else(|| AffinePermutation::identity(c.ty)))
        .collect())
}

pub fn triple_from_flags(ty: AffineType, face: &str, phi: Option<&str>, w: &[String]) -> Result<BiclosedTriple> {
    let face = FanFace::from_display(ty, blocks(face)?)?;
    let phi = phi_from_blocks(&face, &blocks(phi.unwrap_or(""))?)?;
    let ws = component_elements(&face, w)?;
    build_biclosed(face, phi, ws)
}

pub fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Any JSON value describing a biclosed set: a triple, a window set (which
/// is classified), a permutation (its inversion set) or an order.
pub fn triple(v: &serde_json::Value) -> Result<BiclosedTriple> {
    if v.get("face").is_some() {
        BiclosedTriple::from_json(v)
    } else if v.get("roots").is_some() {
        classify(&WindowSet::from_json(v)?)
    } else if v.get("window").is_some() {
        Ok(BiclosedTriple::finite(&AffinePermutation::from_json(v)?))
    } else if v.get("blocks").is_some() {
        Ok(PeriodicOrder::from_json(v)?.inversion_set())
    } else {
        Err(Error::Parse("unrecognised JSON: expected a triple, window set, permutation or order".into()))
    }
}
