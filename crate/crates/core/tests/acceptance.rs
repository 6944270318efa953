//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Seeded from `AFWEAK_SEED` (default 20241017).

use std::collections::BTreeSet;
use std::time::Instant;

use afweak_core::closure::{close, enumerate_small_biclosed, interior};
use afweak_core::fan::{act, build_biclosed, classify, enumerate_faces, phi_from_blocks};
use afweak_core::finite::join_finite;
use afweak_core::lattice::{
    embed_c, iota, join, join_a, meet, oracle_join, pi, project, sigma, threshold_closure, try_join,
    TryJoinOutcome,
};
use afweak_core::perms::elements_up_to;
use afweak_core::roots::root_window;
use afweak_core::sample::random_triple;
use afweak_core::{
    AffinePermutation, AffineType, BiclosedTriple, FanFace, Family, PeriodicOrder, Root, WindowSet,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn seed() -> u64 {
    std::env::var("AFWEAK_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20241017)
}

fn e<T>(r: afweak_core::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn word(ty: AffineType, w: &[usize]) -> BiclosedTriple {
    BiclosedTriple::finite(&AffinePermutation::from_word(ty, w).unwrap())
}

// 1 ----------------------------------------------------------------------

fn worked_join() -> Outcome {
    let ty = AffineType::a(4);
    let j = e(join_a(&[word(ty, &[0, 1]), word(ty, &[2, 3])]))?;
    let face = e(FanFace::from_display(ty, vec![vec![1, 3], vec![2, 4]]))?;
    let phi = e(phi_from_blocks(&face, &[vec![2, 4]]))?;
    ensure(j.face() == &face, || format!("face {}", j.face()))?;
    ensure(j.phi_prime() == &phi, || format!("phi' {:?}", j.phi_prime()))?;
    ensure(j.w().iter().all(|w| w.is_identity()), || "w is not the identity".into())?;
    // α₀, α₀+α₁, α₀+α₁+α₂, α₂, α₂+α₃, α₂+α₃+α₀, each plus kδ (k ≥ 0)
    let listed = [(0, 1), (0, 2), (0, 3), (2, 3), (2, 4), (2, 5)];
    let in_b = |r: &Root| {
        let base = r.i.rem_euclid(4);
        let off = r.j - r.i;
        listed.iter().any(|&(p, q)| base == p && (off - (q - p)).rem_euclid(4) == 0 && off >= q - p)
    };
    let roots = root_window(ty, 6);
    for r in &roots {
        ensure(j.contains(r) == in_b(r), || format!("membership differs at ({}, {})", r.i, r.j))?;
    }
    Ok(format!("face ({{1,3}},{{2,4}}), phi' = {{2,4}}, w = e; {} roots of height <= 6 agree", roots.len()))
}

// 2 ----------------------------------------------------------------------

fn figure_two() -> Outcome {
    let ty = AffineType::a(2);
    let face = FanFace::dominant(ty);
    let e_w = face.parahoric().components.iter().map(|c| AffinePermutation::identity(c.ty)).collect();
    let t = e(build_biclosed(face, BTreeSet::new(), e_w))?;
    let w = t.window(6);
    // α₀ + kδ = (0, 1 + 2k) up to simultaneous shifts by 2
    let expected = WindowSet::from_predicate(ty, 6, |r| r.i.rem_euclid(2) == 0 && (r.j - r.i).rem_euclid(2) == 1);
    ensure(w == expected, || "set differs from {α₀ + kδ}".into())?;
    let back = e(classify(&w))?;
    ensure(back == t, || format!("classified as {back}"))?;
    Ok(format!("{} roots, classify round-trips", w.len()))
}

// 3 ----------------------------------------------------------------------

fn order_collision() -> Outcome {
    let ty = AffineType::a(2);
    let face = e(FanFace::new(ty, vec![vec![1], vec![0]]))?;
    let id = AffinePermutation::identity(AffineType::a(1));
    let o1 = e(PeriodicOrder::new(face.clone(), vec![false, false], vec![id.clone(), id.clone()]))?;
    let o2 = e(PeriodicOrder::new(face, vec![false, true], vec![id.clone(), id]))?;
    for (o, chain) in [(&o1, [-5, -3, -1, 1, 3, 5, -4, -2, 0, 2, 4]), (&o2, [-5, -3, -1, 1, 3, 5, 4, 2, 0, -2, -4])] {
        for p in chain.windows(2) {
            ensure(o.compare_full(p[0], p[1]).is_lt(), || format!("{} vs {} in {o}", p[0], p[1]))?;
        }
    }
    let expected = WindowSet::from_predicate(ty, 8, |r| r.i.rem_euclid(2) == 0 && r.j.rem_euclid(2) == 1);
    ensure(o1.inversion_set().window(8) == expected, || "I(≺₁) differs".into())?;
    ensure(o2.inversion_set().window(8) == expected, || "I(≺₂) differs".into())?;
    ensure(o2.normalize() == o1, || format!("normalize(≺₂) = {}", o2.normalize()))?;
    Ok("I(≺₁) = I(≺₂) = {(i,j): i even, j odd}; normalize(≺₂) = ≺₁".into())
}

// 4 ----------------------------------------------------------------------

fn finite_joins() -> Outcome {
    let b = e(join_finite(Family::B, 3, "624351", "365214"))?;
    let d = e(join_finite(Family::D, 3, "624351", "365214"))?;
    ensure(b == "654321" && d == "653421", || format!("B3 {b}, D3 {d}"))?;
    Ok(format!("B3: {b}, D3: {d}"))
}

// 5 ----------------------------------------------------------------------

fn d2_try_join() -> Outcome {
    let ty = AffineType::d(2);
    let refl = |i, j| BiclosedTriple::finite(&AffinePermutation::root_reflection(&Root::new(ty, i, j).unwrap()));
    let out = e(try_join(&[refl(1, 2), refl(2, 6)], 6))?;
    let TryJoinOutcome::Join(t) = out else { return Err("closure of the union is not biclosed".into()) };
    let w = t.window(6);
    let class = |r: &Root| -> BTreeSet<i64> {
        let (a, b) = r.residues();
        [a.rem_euclid(5), b.rem_euclid(5)].into()
    };
    let (mut with, mut without) = (0, 0);
    for r in root_window(ty, 6) {
        let c = class(&r);
        if c == BTreeSet::from([1, 2]) || c == BTreeSet::from([3, 4]) {
            ensure(w.contains(&r), || format!("missing ({}, {})", r.i, r.j))?;
            with += 1;
        }
        if c == BTreeSet::from([1, 3]) || c == BTreeSet::from([2, 4]) {
            ensure(!w.contains(&r), || format!("unexpected ({}, {})", r.i, r.j))?;
            without += 1;
        }
    }
    Ok(format!("join {t}; {with} ±{{1,2}} roots in, {without} ±{{1,3}} roots out"))
}

// 6 ----------------------------------------------------------------------

fn finite_biclosed(ty: AffineType, max: usize, h: u32) -> std::result::Result<Vec<usize>, String> {
    let sets = enumerate_small_biclosed(ty, h, max);
    let counts: Vec<usize> = sets.iter().map(|l| l.len()).collect();
    let found: BTreeSet<BTreeSet<Root>> = sets.into_iter().flatten().map(|w| w.members).collect();
    let layers = elements_up_to(ty, max);
    let want: BTreeSet<BTreeSet<Root>> =
        layers.iter().flatten().map(|w| w.inversions().into_iter().collect()).collect();
    let lengths: Vec<usize> = layers.iter().map(|l| l.len()).collect();
    ensure(found == want, || format!("{ty}: biclosed window sets differ from inversion sets"))?;
    ensure(counts == lengths, || format!("{ty}: counts {counts:?} vs {lengths:?}"))?;
    Ok(counts)
}

fn finite_biclosed_all() -> Outcome {
    let mut parts = Vec::new();
    for ty in [AffineType::a(3), AffineType::c(2), AffineType::b(2), AffineType::d(3)] {
        let counts = finite_biclosed(ty, 5, 8)?;
        parts.push(format!("{ty} {counts:?}"));
    }
    Ok(parts.join("; "))
}

// 7 ----------------------------------------------------------------------

fn subsets(k: usize) -> Vec<BTreeSet<usize>> {
    (0u32..1 << k).map(|mask| (0..k).filter(|&i| mask >> i & 1 == 1).collect()).collect()
}

fn round_trip() -> Outcome {
    let mut total = 0;
    for ty in [AffineType::a(3), AffineType::c(2), AffineType::d(2)] {
        for face in e(enumerate_faces(ty))? {
            let dec = face.parahoric();
            let per: Vec<Vec<AffinePermutation>> =
                dec.components.iter().map(|c| elements_up_to(c.ty, 3).into_iter().flatten().collect()).collect();
            let mut combos: Vec<Vec<AffinePermutation>> = vec![vec![]];
            for opts in &per {
                combos = combos
                    .into_iter()
                    .flat_map(|pre| {
                        opts.iter().map(move |w| {
                            let mut v = pre.clone();
                            v.push(w.clone());
                            v
                        })
                    })
                    .collect();
            }
            for phi in subsets(dec.len()) {
                for ws in &combos {
                    let t = e(build_biclosed(face.clone(), phi.clone(), ws.clone()))?;
                    let back = e(classify(&t.window(t.stable_height())))?;
                    ensure(back == t, || format!("{t} classified as {back}"))?;
                    total += 1;
                }
            }
        }
    }
    Ok(format!("{total} triples"))
}

// 8 ----------------------------------------------------------------------

fn action_formula(rng: &mut StdRng) -> Outcome {
    let types = [AffineType::a(3), AffineType::a(4), AffineType::c(2), AffineType::b(2), AffineType::d(3)];
    for k in 0..100 {
        let ty = types[k % types.len()];
        let t = random_triple(rng, ty, 4);
        let base = e(BiclosedTriple::with_identity(t.face().clone(), t.phi_prime().clone()))?;
        let w = t.lifted_w();
        let acted = e(act(&w, &base))?;
        ensure(acted == t, || format!("act gave {acted} for {t}"))?;
        let inv: BTreeSet<Root> = w.inversions().into_iter().collect();
        for r in root_window(ty, 6) {
            let formula = base.contains(&r) ^ (inv.contains(&r) && t.face().pairing(&r) == 0);
            ensure(t.contains(&r) == formula, || format!("{t}: ({}, {})", r.i, r.j))?;
        }
    }
    Ok("100 random triples".into())
}

// 9 ----------------------------------------------------------------------

const H: u32 = 8;

fn lattice_suite(rng: &mut StdRng, ty: AffineType) -> std::result::Result<(), String> {
    for _ in 0..200 {
        let x = random_triple(rng, ty, 4);
        let y = random_triple(rng, ty, 4);
        let j = e(join(&[x.clone(), y.clone()]))?;
        let m = e(meet(&[x.clone(), y.clone()]))?;
        let (xw, yw, jw, mw) = (x.window(H), y.window(H), j.window(H), m.window(H));
        ensure(xw.is_subset(&jw) && yw.is_subset(&jw), || format!("{j} is not above {x} and {y}"))?;
        ensure(mw.is_subset(&xw) && mw.is_subset(&yw), || format!("{m} is not below {x} and {y}"))?;
        for _ in 0..20 {
            // closure of a union is the least biclosed set above it (exact on windows)
            let r = random_triple(rng, ty, 4);
            let upper = close(&xw.union(&yw).union(&r.window(H)));
            ensure(jw.is_subset(&upper), || format!("{j} is not below an upper bound"))?;
            let rw = r.window(H);
            let lower = interior(&WindowSet::from_predicate(ty, H, |q| xw.contains(q) && yw.contains(q) && rw.contains(q)));
            ensure(lower.is_subset(&mw), || format!("{m} is not above a lower bound"))?;
        }
        let o = e(oracle_join(&[x.clone(), y.clone()]))?;
        ensure(o == j, || format!("join {j} but oracle {o}"))?;
        if ty.family == Family::A {
            for t in [&x, &y, &j] {
                let back = e(pi(ty, &e(iota(t))?))?;
                ensure(&back == t, || format!("pi(iota({t})) = {back}"))?;
            }
            let (ix, iy) = (e(iota(&x))?, e(iota(&y))?);
            let union = e(threshold_closure(&[ix.clone(), iy]))?;
            ensure(union.iterations <= 4 * (ty.modulus() * ty.modulus()) as usize, || {
                format!("{} closure passes", union.iterations)
            })?;
            let p1 = e(project(ty, &union.relation))?;
            ensure(e(project(ty, &p1))? == p1, || "p is not idempotent".into())?;
            ensure(ix.is_below(&union.relation), || "x is not below the closure".into())?;
            ensure(e(project(ty, &ix))?.is_below(&p1), || "p is not monotone".into())?;
            ensure(e(pi(ty, &union.relation))? == j, || "join is not pi of the closure".into())?;
        } else {
            for t in [&x, &y, &j] {
                let emb = e(embed_c(t))?;
                ensure(e(sigma(&emb))? == emb, || format!("embedding of {t} is not σ-fixed"))?;
            }
        }
    }
    Ok(())
}

fn lattice_all(rng: &mut StdRng) -> Outcome {
    for ty in [AffineType::a(3), AffineType::a(4), AffineType::c(2)] {
        lattice_suite(rng, ty)?;
    }
    Ok("200 pairs each for Ã2, Ã3, C̃2".into())
}

// 10 ---------------------------------------------------------------------

fn sigma_suite(rng: &mut StdRng) -> Outcome {
    let ty = AffineType::a(5);
    for _ in 0..100 {
        let x = random_triple(rng, ty, 4);
        let y = random_triple(rng, ty, 4);
        let (sx, sy) = (e(sigma(&x))?, e(sigma(&y))?);
        ensure(e(sigma(&sx))? == x, || format!("σ² ≠ id on {x}"))?;
        let j = e(join_a(&[x.clone(), y.clone()]))?;
        let sj = e(sigma(&j))?;
        ensure(sx.window(H).is_subset(&sj.window(H)), || "σ is not order-preserving".into())?;
        let js = e(join_a(&[sx, sy]))?;
        ensure(js == sj, || format!("σ(x ∨ y) = {sj} but σx ∨ σy = {js}"))?;
    }
    // finite sets: σ-fixed N(w) in Ã4 against embedded N(v) from C̃2
    let fixed: BTreeSet<BiclosedTriple> = elements_up_to(ty, 8)
        .into_iter()
        .flatten()
        .map(|w| BiclosedTriple::finite(&w))
        .filter(|t| sigma(t).map(|s| &s == t).unwrap_or(false))
        .collect();
    let mut embedded = BTreeSet::new();
    for v in elements_up_to(AffineType::c(2), 8).into_iter().flatten() {
        let t = e(embed_c(&BiclosedTriple::finite(&v)))?;
        if t.lifted_w().length() <= 8 && t.face().is_origin() {
            embedded.insert(t);
        }
    }
    ensure(fixed == embedded, || format!("{} σ-fixed vs {} embedded finite sets", fixed.len(), embedded.len()))?;
    // all faces with identity components
    let mut fixed_faces = BTreeSet::new();
    for face in e(enumerate_faces(ty))? {
        for phi in subsets(face.parahoric().len()) {
            let t = e(BiclosedTriple::with_identity(face.clone(), phi))?;
            if e(sigma(&t))? == t {
                fixed_faces.insert(t);
            }
        }
    }
    let mut embedded_faces = BTreeSet::new();
    for face in e(enumerate_faces(AffineType::c(2)))? {
        for phi in subsets(face.parahoric().len()) {
            let t = e(embed_c(&e(BiclosedTriple::with_identity(face.clone(), phi))?))?;
            ensure(e(sigma(&t))? == t, || format!("{t} is not σ-fixed"))?;
            embedded_faces.insert(t);
        }
    }
    ensure(embedded_faces == fixed_faces, || {
        format!("{} σ-fixed (F, Φ′, e) vs {} embedded", fixed_faces.len(), embedded_faces.len())
    })?;
    Ok(format!(
        "100 pairs; {} σ-fixed finite sets = embedded C̃2 sets; {} σ-fixed (F, Φ′, e) = embedded",
        fixed.len(),
        embedded_faces.len()
    ))
}

fn main() {
    let mut rng = StdRng::seed_from_u64(seed());
    let mut failed = 0;
    let mut run = |id: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {id:>2} {name} ({secs:.2}s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {id:>2} {name} ({secs:.2}s): {msg}");
            }
        }
    };
    run(1, "worked Ã3 join", &mut worked_join);
    run(2, "Ã1 dominant chamber set", &mut figure_two);
    run(3, "order collision", &mut order_collision);
    run(4, "finite B3/D3 joins", &mut finite_joins);
    run(5, "D̃2 try_join", &mut d2_try_join);
    run(6, "finite biclosed = inversion sets", &mut finite_biclosed_all);
    run(7, "classification round-trip", &mut round_trip);
    let mut r8 = rng.clone();
    run(8, "action formula", &mut || action_formula(&mut r8));
    rng = r8;
    let mut r9 = rng.clone();
    run(9, "lattice suites", &mut || lattice_all(&mut r9));
    rng = r9;
    run(10, "σ involution", &mut || sigma_suite(&mut rng));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
