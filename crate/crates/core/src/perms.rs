//! Affine and signed affine permutations in window notation.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::roots::{canonical_root, simple_roots, AffineType, Family, Root};

/// A periodic bijection `f: ℤ → ℤ` with `f(x + M) = f(x) + M` (and
/// `f(−x) = −f(x)` in types B/C/D), stored by its window.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePermutation {
    ty: AffineType,
    window: Vec<i64>,
    inv: Vec<i64>,
}

impl AffinePermutation {
    pub fn identity(ty: AffineType) -> AffinePermutation {
        let window: Vec<i64> = (1..=ty.window_len() as i64).collect();
        AffinePermutation { ty, inv: window.clone(), window }
    }

    /// Validate a window `f(1), …, f(len)`.
    pub fn from_window(ty: AffineType, values: &[i64]) -> Result<AffinePermutation> {
        let len = ty.window_len();
        if values.len() != len {
            return Err(Error::InvalidWindow(format!("expected {len} values, got {}", values.len())));
        }
        let m = ty.modulus();
        let mut seen = vec![false; m as usize];
        let mut mark = |x: i64| -> Result<()> {
            let r = x.rem_euclid(m) as usize;
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidWindow(format!("residue {r} repeated")));
            }
            Ok(())
        };
        if ty.family == Family::A {
            for &v in values {
                mark(v)?;
            }
            let sum: i64 = values.iter().zip(1..).map(|(v, k)| v - k).sum();
            if sum != 0 {
                return Err(Error::InvalidWindow(format!("sum of f(k) - k is {sum}, not 0")));
            }
        } else {
            mark(0)?;
            for &v in values {
                if v.rem_euclid(m) == 0 {
                    return Err(Error::InvalidWindow(format!("{v} is a multiple of {m}")));
                }
                mark(v)?;
                mark(-v)?;
            }
        }
        let mut w = AffinePermutation { ty, window: values.to_vec(), inv: Vec::new() };
        w.inv = (1..=len as i64).map(|x| w.preimage(x)).collect();
        if ty.family == Family::D && ty.n == 1 && !w.is_identity() {
            return Err(Error::InvalidWindow("the group D~1 is trivial".into()));
        }
        w.check_parity()?;
        Ok(w)
    }

    fn check_parity(&self) -> Result<()> {
        let n = self.ty.n as i64;
        let d = self.max_displacement();
        if matches!(self.ty.family, Family::B | Family::D) {
            let crossing = (n + 1..=n + d + self.ty.modulus()).filter(|&x| self.eval(x) <= n).count();
            if crossing % 2 == 1 {
                return Err(Error::ParityViolation("#{x >= n+1 : f(x) <= n}"));
            }
        }
        if self.ty.family == Family::D {
            let negated = (1..=d.max(1)).filter(|&x| self.eval(x) < 0).count();
            if negated % 2 == 1 {
                return Err(Error::ParityViolation("#{x > 0 : f(x) < 0}"));
            }
        }
        Ok(())
    }

    pub fn affine_type(&self) -> AffineType {
        self.ty
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().zip(1..).all(|(&v, k)| v == k)
    }

    /// `f(x)`.
    pub fn eval(&self, x: i64) -> i64 {
        extend(self.ty, &self.window, x)
    }

    /// `f⁻¹(x)`.
    pub fn eval_inv(&self, x: i64) -> i64 {
        extend(self.ty, &self.inv, x)
    }

    fn preimage(&self, x: i64) -> i64 {
        let m = self.ty.modulus();
        if self.ty.family.is_signed() && x.rem_euclid(m) == 0 {
            return x;
        }
        for (k, &v) in (1..).zip(&self.window) {
            if (x - v).rem_euclid(m) == 0 {
                return k + (x - v);
            }
            if self.ty.family.is_signed() && (x + v).rem_euclid(m) == 0 {
                return -k + (x + v);
            }
        }
        unreachable!("window is a bijection on residues")
    }

    /// `max |f(x) − x|`.
    pub fn max_displacement(&self) -> i64 {
        self.window.iter().zip(1..).map(|(v, k)| (v - k).abs()).max().unwrap_or(0)
    }

    /// The reflection `t_ij`: swaps `i + rM ↔ j + rM` (and `−i + rM ↔ −j + rM`
    /// in the signed types).
    pub fn reflection(ty: AffineType, i: i64, j: i64) -> Result<AffinePermutation> {
        let (i, j) = (i.min(j), i.max(j));
        canonical_root(ty, i, j)?;
        let m = ty.modulus();
        let same = |x: i64, y: i64| (x - y).rem_euclid(m) == 0;
        let f = |x: i64| {
            if same(x, i) {
                x + (j - i)
            } else if same(x, j) || (ty.family.is_signed() && same(x, -i)) {
                x - (j - i)
            } else if ty.family.is_signed() && same(x, -j) {
                x + (j - i)
            } else {
                x
            }
        };
        let window: Vec<i64> = (1..=ty.window_len() as i64).map(f).collect();
        AffinePermutation::from_window(ty, &window)
    }

    /// The reflection in the root `r`.
    pub fn root_reflection(r: &Root) -> AffinePermutation {
        AffinePermutation::reflection(r.ty, r.i, r.j).expect("roots are admissible")
    }

    /// Simple generators `s_0, s_1, …` (reflections in the simple roots).
    pub fn generators(ty: AffineType) -> Vec<AffinePermutation> {
        simple_roots(ty)
            .into_iter()
            .map(|(i, j)| AffinePermutation::reflection(ty, i, j).expect("simple roots are admissible"))
            .collect()
    }

    /// The product `s_{k_1} ⋯ s_{k_r}`.
    pub fn from_word(ty: AffineType, word: &[usize]) -> Result<AffinePermutation> {
        let gens = AffinePermutation::generators(ty);
        let mut w = AffinePermutation::identity(ty);
        for &k in word {
            let s = gens
                .get(k)
                .ok_or_else(|| Error::InvalidWindow(format!("no generator s{k} in {ty}")))?;
            w = w.multiply(s)?;
        }
        Ok(w)
    }

    /// `(self · other)(x) = self(other(x))`.
    pub fn multiply(&self, other: &AffinePermutation) -> Result<AffinePermutation> {
        if self.ty != other.ty {
            return Err(Error::TypeMismatch(self.ty.to_string(), other.ty.to_string()));
        }
        let window: Vec<i64> = (1..=self.window.len() as i64).map(|x| self.eval(other.eval(x))).collect();
        let inv: Vec<i64> = (1..=self.window.len() as i64).map(|x| other.eval_inv(self.eval_inv(x))).collect();
        Ok(AffinePermutation { ty: self.ty, window, inv })
    }

    pub fn invert(&self) -> AffinePermutation {
        AffinePermutation { ty: self.ty, window: self.inv.clone(), inv: self.window.clone() }
    }

    /// `N(w)`: the canonical roots `(i, j)` with `w⁻¹(i) > w⁻¹(j)`.
    pub fn inversions(&self) -> BTreeSet<Root> {
        let ty = self.ty;
        let m = ty.modulus();
        let reach = 2 * self.max_displacement() + m;
        let lo = if ty.family == Family::A { 0 } else { 1 };
        let mut out = BTreeSet::new();
        for i in lo..lo + m {
            for j in i + 1..=i + reach {
                if ty.admissible(i, j) && self.eval_inv(i) > self.eval_inv(j) {
                    out.insert(crate::roots::canonical_unchecked(ty, i, j));
                }
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        self.inversions().len()
    }

    /// `w(r)` as a root together with its sign (`true` when positive).
    pub fn apply_root(&self, r: &Root) -> (Root, bool) {
        let (a, b) = (self.eval(r.i), self.eval(r.j));
        if a < b {
            (crate::roots::canonical_unchecked(self.ty, a, b), true)
        } else {
            (crate::roots::canonical_unchecked(self.ty, b, a), false)
        }
    }

    /// Whether `s_k` is a right descent, i.e. `ℓ(w s_k) < ℓ(w)`.
    pub fn has_right_descent(&self, simple: (i64, i64)) -> bool {
        self.eval(simple.0) > self.eval(simple.1)
    }

    /// A reduced word in the simple generators.
    pub fn reduced_word(&self) -> Vec<usize> {
        let simples = simple_roots(self.ty);
        let gens = AffinePermutation::generators(self.ty);
        let mut w = self.clone();
        let mut rev = Vec::new();
        while !w.is_identity() {
            let k = simples
                .iter()
                .position(|&s| w.has_right_descent(s))
                .expect("non-identity elements have a descent");
            rev.push(k);
            w = w.multiply(&gens[k]).expect("same type");
        }
        rev.reverse();
        rev
    }
}

fn extend(ty: AffineType, window: &[i64], x: i64) -> i64 {
    let m = ty.modulus();
    if ty.family == Family::A {
        let r = (x - 1).rem_euclid(m) + 1;
        return window[(r - 1) as usize] + (x - r);
    }
    let n = ty.n as i64;
    let r = x.rem_euclid(m);
    if r == 0 {
        x
    } else if r <= n {
        window[(r - 1) as usize] + (x - r)
    } else {
        let s = m - r;
        -window[(s - 1) as usize] + (x + s)
    }
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.window.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// All elements of length at most `bound`, by breadth-first search over
/// words; returned grouped by length.
pub fn elements_up_to(ty: AffineType, bound: usize) -> Vec<Vec<AffinePermutation>> {
    let gens = AffinePermutation::generators(ty);
    let mut seen = BTreeSet::new();
    let e = AffinePermutation::identity(ty);
    seen.insert(e.clone());
    let mut layers = vec![vec![e]];
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in layers.last().expect("nonempty") {
            for s in &gens {
                let ws = w.multiply(s).expect("same type");
                if seen.insert(ws.clone()) {
                    next.push(ws);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        layers.push(next);
    }
    layers
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(ty: AffineType, i: i64, j: i64) -> Root {
        Root::new(ty, i, j).unwrap()
    }

    #[test]
    fn small_windows() {
        let a2 = AffineType::a(3);
        let s1 = AffinePermutation::from_window(a2, &[2, 1, 3]).unwrap();
        assert_eq!(s1.multiply(&s1).unwrap(), AffinePermutation::identity(a2));
        let s0 = AffinePermutation::from_window(a2, &[0, 2, 4]).unwrap();
        assert_eq!(s0, AffinePermutation::reflection(a2, 0, 1).unwrap());
        assert_eq!(s0.eval(3), 4);
        assert_eq!(s0.eval(-2), -3);
    }

    #[test]
    fn parity_rejects_c_reflection() {
        let c2 = AffineType::c(2);
        let t = AffinePermutation::reflection(c2, 2, 3).unwrap();
        let b2 = AffineType::b(2);
        assert!(matches!(AffinePermutation::from_window(b2, t.window()), Err(Error::ParityViolation(_))));
    }

    #[test]
    fn c_long_reflection() {
        let c2 = AffineType::c(2);
        let t = AffinePermutation::reflection(c2, -1, 1).unwrap();
        for k in -3..3 {
            assert_eq!(t.eval(5 * k), 5 * k);
            assert_eq!(t.eval(5 * k + 1), 5 * k - 1);
        }
    }

    #[test]
    fn worked_inversions() {
        let a3 = AffineType::a(4);
        let w = AffinePermutation::from_word(a3, &[0, 1]).unwrap();
        let expect: BTreeSet<Root> = [root(a3, 0, 1), root(a3, 0, 2)].into();
        // α₀ = ẽ₁ − ẽ₀ and α₀ + α₁ = ẽ₂ − ẽ₀
        assert_eq!(w.inversions(), expect);
        assert_eq!(w.length(), 2);
        let d2 = AffineType::d(2);
        let v = AffinePermutation::reflection(d2, 2, 6).unwrap();
        assert_eq!(v.inversions(), [root(d2, 2, 6)].into());
        let u = AffinePermutation::reflection(d2, 1, 2).unwrap();
        assert_eq!(u.inversions(), [root(d2, 1, 2)].into());
    }

    #[test]
    fn lengths_change_by_one() {
        for ty in [AffineType::a(3), AffineType::b(2), AffineType::c(2), AffineType::d(3), AffineType::d(2)] {
            let gens = AffinePermutation::generators(ty);
            for layer in elements_up_to(ty, 3) {
                for w in layer {
                    let l = w.length() as i64;
                    for s in &gens {
                        assert_eq!((w.multiply(s).unwrap().length() as i64 - l).abs(), 1);
                    }
                    assert_eq!(w.reduced_word().len() as i64, l);
                    assert_eq!(AffinePermutation::from_word(ty, &w.reduced_word()).unwrap(), w);
                }
            }
        }
    }

    #[test]
    fn generator_counts() {
        // number of elements of length 1 is the number of generators
        assert_eq!(elements_up_to(AffineType::a(3), 1)[1].len(), 3);
        assert_eq!(elements_up_to(AffineType::c(2), 1)[1].len(), 3);
        assert_eq!(elements_up_to(AffineType::b(3), 1)[1].len(), 4);
        assert_eq!(elements_up_to(AffineType::d(4), 1)[1].len(), 5);
        assert_eq!(elements_up_to(AffineType::d(2), 1)[1].len(), 4);
    }
}
