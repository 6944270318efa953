//! Named verification suites. Randomised suites are seeded from
//! `AFWEAK_SEED`.

use std::collections::BTreeSet;

use afweak_core::closure::{close, enumerate_small_biclosed, interior, WindowSet};
use afweak_core::fan::{build_biclosed, classify, enumerate_faces, phi_from_blocks};
use afweak_core::finite::join_finite;
use afweak_core::json::Json;
use afweak_core::lattice::{iota, join, join_a, meet, oracle_join, threshold_closure, try_join, TryJoinOutcome};
use afweak_core::orders::order_from_triple;
use afweak_core::perms::elements_up_to;
use afweak_core::roots::root_window;
use afweak_core::sample::random_triple;
use afweak_core::{AffinePermutation, AffineType, BiclosedTriple, FanFace, Family, PeriodicOrder, Root};
use clap::ValueEnum;
use rand::rngs::StdRng;
use rand::SeedableRng;

const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    PaperExamples,
    LatticeAxioms,
    Roundtrip,
    OracleEquivalence,
    FiniteEnumeration,
    All,
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T>(r: afweak_core::Result<T>) -> Result<T, String> {
    r.map_err(|err| format!("{}: {err}", err.name()))
}

fn rng() -> StdRng {
    let seed = std::env::var("AFWEAK_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20241017);
    StdRng::seed_from_u64(seed)
}

fn word(ty: AffineType, w: &[usize]) -> BiclosedTriple {
    BiclosedTriple::finite(&AffinePermutation::from_word(ty, w).expect("valid word"))
}

// ---------------------------------------------------------------------------

fn worked_join() -> Check {
    let ty = AffineType::a(4);
    let j = e(join_a(&[word(ty, &[0, 1]), word(ty, &[2, 3])]))?;
    let face = e(FanFace::from_display(ty, vec![vec![1, 3], vec![2, 4]]))?;
    let phi = e(phi_from_blocks(&face, &[vec![2, 4]]))?;
    ensure(j.face() == &face && j.phi_prime() == &phi && j.w().iter().all(|w| w.is_identity()), || {
        format!("got {j}")
    })?;
    // the residue-0 and residue-2 roots: α₀ + ⋯ and α₂ + ⋯ patterns
    for r in root_window(ty, 6) {
        ensure(j.contains(&r) == (r.i.rem_euclid(2) == 0), || format!("({}, {})", r.i, r.j))?;
    }
    Ok(format!("{j}"))
}

fn dominant_a1() -> Check {
    let ty = AffineType::a(2);
    let t = e(BiclosedTriple::with_identity(FanFace::dominant(ty), BTreeSet::new()))?;
    let w = t.window(6);
    ensure(w.members.iter().all(|r| r.i.rem_euclid(2) == 0) && w.len() == 7, || "not {α₀ + kδ}".into())?;
    ensure(e(classify(&w))? == t, || "classification differs".into())?;
    Ok("{α₀ + kδ : k ≥ 0}".into())
}

fn order_collision() -> Check {
    let ty = AffineType::a(2);
    let face = e(FanFace::new(ty, vec![vec![1], vec![0]]))?;
    let id = AffinePermutation::identity(AffineType::a(1));
    let o1 = e(PeriodicOrder::new(face.clone(), vec![false, false], vec![id.clone(), id.clone()]))?;
    let o2 = e(PeriodicOrder::new(face, vec![false, true], vec![id.clone(), id]))?;
    ensure(o1.inversion_set() == o2.inversion_set(), || "inversion sets differ".into())?;
    ensure(o2.normalize() == o1, || "normalize(≺₂) ≠ ≺₁".into())?;
    Ok("I(≺₁) = I(≺₂), normalize(≺₂) = ≺₁".into())
}

fn finite_joins() -> Check {
    let b = e(join_finite(Family::B, 3, "624351", "365214"))?;
    let d = e(join_finite(Family::D, 3, "624351", "365214"))?;
    ensure(b == "654321" && d == "653421", || format!("B3 {b}, D3 {d}"))?;
    Ok(format!("B3 {b}, D3 {d}"))
}

fn d2_try_join() -> Check {
    let ty = AffineType::d(2);
    let refl = |i, j| BiclosedTriple::finite(&AffinePermutation::root_reflection(&Root::new(ty, i, j).unwrap()));
    let TryJoinOutcome::Join(t) = e(try_join(&[refl(1, 2), refl(2, 6)], 6))? else {
        return Err("closure of the union is not biclosed".into());
    };
    for r in root_window(ty, 6) {
        let (a, b) = r.residues();
        let c: BTreeSet<i64> = [a.rem_euclid(5), b.rem_euclid(5)].into();
        if c == BTreeSet::from([1, 2]) || c == BTreeSet::from([3, 4]) {
            ensure(t.contains(&r), || format!("missing ({}, {})", r.i, r.j))?;
        }
        if c == BTreeSet::from([1, 3]) || c == BTreeSet::from([2, 4]) {
            ensure(!t.contains(&r), || format!("unexpected ({}, {})", r.i, r.j))?;
        }
    }
    Ok(format!("{t}"))
}

fn atoms_join(ty: AffineType) -> Check {
    let j = e(join(&[word(ty, &[0]), word(ty, &[1])]))?;
    ensure(j.window(6) == WindowSet::full(ty, 6), || format!("got {j}"))?;
    Ok("full positive system".into())
}

fn worked_orders() -> Check {
    let ty = AffineType::a(4);
    let rels = [e(iota(&word(ty, &[0, 1])))?, e(iota(&word(ty, &[2, 3])))?];
    let r = e(threshold_closure(&rels))?.relation;
    let chain = |xs: &[i64]| xs.windows(2).all(|p| r.greater(p[1], p[0]));
    ensure(chain(&[1, 3, 5, 7]) && chain(&[8, 6, 4, 2, 0]) && chain(&[7, 8]), || "order differs".into())?;
    Ok("⋯ 1 ≺ 3 ≺ 5 ≺ 7 ≺ ⋯ ≺ 8 ≺ 6 ≺ 4 ≺ 2 ≺ 0 ⋯".into())
}

fn a2_faces() -> Check {
    let n = e(enumerate_faces(AffineType::a(3)))?.len();
    ensure(n == 13, || format!("{n} faces"))?;
    Ok("13 faces".into())
}

fn paper_examples() -> Vec<(String, Check)> {
    vec![
        ("worked Ã3 join".into(), worked_join()),
        ("Ã1 dominant chamber set".into(), dominant_a1()),
        ("order collision".into(), order_collision()),
        ("B3/D3 finite joins".into(), finite_joins()),
        ("D̃2 try_join".into(), d2_try_join()),
        ("Ã1 atoms join".into(), atoms_join(AffineType::a(2))),
        ("C̃1 atoms join".into(), atoms_join(AffineType::c(1))),
        ("worked join as orders".into(), worked_orders()),
        ("Ã2 fan".into(), a2_faces()),
    ]
}

// ---------------------------------------------------------------------------

const INSTANCES: [fn() -> AffineType; 3] = [|| AffineType::a(3), || AffineType::a(4), || AffineType::c(2)];

fn lattice_axioms() -> Vec<(String, Check)> {
    let mut rng = rng();
    let h = 8;
    INSTANCES
        .iter()
        .map(|ty| {
            let ty = ty();
            let check = (|| {
                for _ in 0..50 {
                    let x = random_triple(&mut rng, ty, 4);
                    let y = random_triple(&mut rng, ty, 4);
                    let (xw, yw) = (x.window(h), y.window(h));
                    let jw = e(join(&[x.clone(), y.clone()]))?.window(h);
                    let mw = e(meet(&[x.clone(), y.clone()]))?.window(h);
                    ensure(xw.is_subset(&jw) && yw.is_subset(&jw), || format!("{x} ∨ {y} is not an upper bound"))?;
                    ensure(mw.is_subset(&xw) && mw.is_subset(&yw), || format!("{x} ∧ {y} is not a lower bound"))?;
                    for _ in 0..5 {
                        let zw = random_triple(&mut rng, ty, 4).window(h);
                        ensure(jw.is_subset(&close(&xw.union(&yw).union(&zw))), || "join above an upper bound".into())?;
                        let low = interior(&WindowSet::from_predicate(ty, h, |r| {
                            xw.contains(r) && yw.contains(r) && zw.contains(r)
                        }));
                        ensure(low.is_subset(&mw), || "meet below a lower bound".into())?;
                    }
                }
                Ok("50 pairs".to_string())
            })();
            (format!("{ty}"), check)
        })
        .collect()
}

fn oracle_equivalence() -> Vec<(String, Check)> {
    let mut rng = rng();
    INSTANCES
        .iter()
        .map(|ty| {
            let ty = ty();
            let check = (|| {
                for _ in 0..30 {
                    let xs = [random_triple(&mut rng, ty, 4), random_triple(&mut rng, ty, 4)];
                    let (j, o) = (e(join(&xs))?, e(oracle_join(&xs))?);
                    ensure(j == o, || format!("join {j}, oracle {o}"))?;
                }
                Ok("30 pairs".to_string())
            })();
            (format!("{ty}"), check)
        })
        .collect()
}

fn roundtrip() -> Vec<(String, Check)> {
    let types = [AffineType::a(3), AffineType::c(2), AffineType::d(2), AffineType::b(2)];
    let mut out = Vec::new();
    for ty in types {
        let check = (|| {
            let mut count = 0;
            for face in e(enumerate_faces(ty))? {
                let dec = face.parahoric();
                for mask in 0u32..1 << dec.len() {
                    let phi: BTreeSet<usize> = (0..dec.len()).filter(|k| mask >> k & 1 == 1).collect();
                    // one component at a time takes each element of length ≤ 2
                    for (c, comp) in dec.components.iter().enumerate() {
                        for w in elements_up_to(comp.ty, 2).into_iter().flatten() {
                            let mut ws: Vec<AffinePermutation> =
                                dec.components.iter().map(|k| AffinePermutation::identity(k.ty)).collect();
                            ws[c] = w;
                            let t = e(build_biclosed(face.clone(), phi.clone(), ws))?;
                            let back = e(classify(&t.window(t.stable_height())))?;
                            ensure(back == t, || format!("{t} classified as {back}"))?;
                            let json = e(BiclosedTriple::from_json_str(&t.to_json_string()))?;
                            ensure(json == t, || format!("{t} does not survive JSON"))?;
                            if let Ok(o) = order_from_triple(&t) {
                                ensure(o.inversion_set() == t, || format!("order of {t}"))?;
                            }
                            count += 1;
                        }
                    }
                }
            }
            Ok(format!("{count} triples"))
        })();
        out.push((format!("{ty}"), check));
    }
    out
}

fn finite_enumeration() -> Vec<(String, Check)> {
    let types = [AffineType::a(3), AffineType::c(2), AffineType::b(2), AffineType::d(3)];
    types
        .iter()
        .map(|&ty| {
            let check = (|| {
                let sets = enumerate_small_biclosed(ty, 8, 4);
                let counts: Vec<usize> = sets.iter().map(|l| l.len()).collect();
                let found: BTreeSet<BTreeSet<Root>> = sets.into_iter().flatten().map(|w| w.members).collect();
                let layers = elements_up_to(ty, 4);
                let lengths: Vec<usize> = layers.iter().map(|l| l.len()).collect();
                let want: BTreeSet<BTreeSet<Root>> =
                    layers.iter().flatten().map(|w| w.inversions().into_iter().collect()).collect();
                ensure(found == want && counts == lengths, || format!("{counts:?} vs {lengths:?}"))?;
                Ok(format!("sizes {counts:?}"))
            })();
            (format!("{ty}"), check)
        })
        .collect()
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::PaperExamples => "paper-examples",
        Suite::LatticeAxioms => "lattice-axioms",
        Suite::Roundtrip => "roundtrip",
        Suite::OracleEquivalence => "oracle-equivalence",
        Suite::FiniteEnumeration => "finite-enumeration",
        Suite::All => "all",
    }
}

/// Run and print a suite; true iff every case passed.
pub fn run(suite: Suite) -> bool {
    let suites = match suite {
        Suite::All => vec![
            Suite::PaperExamples,
            Suite::LatticeAxioms,
            Suite::Roundtrip,
            Suite::OracleEquivalence,
            Suite::FiniteEnumeration,
        ],
        s => vec![s],
    };
    let mut ok = true;
    for s in suites {
        println!("suite {} v{VERSION}", suite_name(s));
        let cases = match s {
            Suite::PaperExamples => paper_examples(),
            Suite::LatticeAxioms => lattice_axioms(),
            Suite::Roundtrip => roundtrip(),
            Suite::OracleEquivalence => oracle_equivalence(),
            Suite::FiniteEnumeration => finite_enumeration(),
            Suite::All => unreachable!(),
        };
        for (name, result) in cases {
            match result {
                Ok(detail) => println!("  PASS  {name}: {detail}"),
                Err(detail) => {
                    ok = false;
                    println!("  FAIL  {name}: {detail}");
                }
            }
        }
    }
    ok
}
