//! Acceptance battery. Prints one PASS/FAIL line per criterion; each
//! criterion runs alone, one after another, against a fixed time budget.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use common::*;
use digitop::circle::{circle8, diamond, lift_path, sphere, winding_index, winding_number, DiamondLoop};
use digitop::cofib::{
    based_path_fibration_lift, borsuk_filler, endpoints_fibration_lift, exhaustive_filler_search, hep_filler,
    path_fibration_lift, pushout_filler, retraction_both_endpoints, retraction_origin_interval, verify_retraction,
    FillerProblem, RetractionWitness,
};
use digitop::funcspace::{curry, path_from_points, uncurry, MapSpace};
use digitop::homotopy::{interval_contraction, is_contractible, prolong, verify_homotopy, Homotopy};
use digitop::lattice::{cube, interval, point_image, product, DigitalImage, Point};
use digitop::lscat::{
    dcat, diamond_lower_bound, is_categorical, is_subdivision_categorical, section_check, section_from_witness,
    section_via_lift, DcatOptions, InnermostLoop,
};
use digitop::maps::{compose, constant_map, DigitalMap};
use digitop::subdivision::{iso_iterated, iso_product_subdivision, projection_map, subdivide_image, subdivide_inclusion};
use digitop::suite::{hep_example, non_push};
use digitop::Refutation;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn p1(v: i64) -> Point {
    Point::from([v])
}

// 1
fn diamond_not_contractible() -> Check {
    let d = diamond();
    let v = ok(is_contractible(&d, None))?;
    let Some(Refutation::ComponentExhausted { explored }) = v.refutation().cloned() else {
        return Err("expected No by exhausting the component of id_D".into());
    };
    let id: Vec<u32> = (0..d.len() as u32).collect();
    let comp = brute_component(&d, &d, &id);
    ensure(comp.len() == explored, format!("search saw {explored} maps, oracle component has {}", comp.len()))?;
    ensure(comp.iter().all(|t| t.windows(2).any(|w| w[0] != w[1])), "oracle component holds a constant")
}

// 2
fn intervals_contractible() -> Check {
    for m in 0..=6u32 {
        let (r, el) = timed(|| -> Check {
            let i = interval(m);
            let v = ok(is_contractible(&i, None))?;
            let w = v.witness().ok_or(format!("I_{m}: expected Yes"))?;
            let c = ok(constant_map(&i, &w.basepoint, &i))?;
            ensure(verify_homotopy(&w.homotopy, &DigitalMap::identity(&i), &c), format!("I_{m}: witness fails"))?;
            // H(s,t) = min(s, M − t), from id to the constant at 0
            let stages = (0..=m as i64)
                .map(|t| DigitalMap::from_fn(&i, &i, |p| p1(p.coords()[0].min(m as i64 - t))))
                .collect::<Result<Vec<_>, _>>();
            let h = ok(Homotopy::new(ok(stages)?))?;
            ensure(h == interval_contraction(m), format!("I_{m}: formula and library contraction differ"))?;
            let zero = ok(constant_map(&i, &p1(0), &i))?;
            ensure(verify_homotopy(&h, &DigitalMap::identity(&i), &zero), format!("I_{m}: formula fails"))
        });
        r?;
        ensure(el < Duration::from_secs(1), format!("I_{m} took {el:?}"))?;
    }
    Ok(())
}

fn small_images() -> Vec<(&'static str, DigitalImage)> {
    let l3 = DigitalImage::new(2, [[0, 0], [1, 0], [1, 1]].map(Point::from)).unwrap();
    vec![
        ("pt", point_image()),
        ("I_1", interval(1)),
        ("I_2", interval(2)),
        ("I_3", interval(3)),
        ("D", diamond()),
        ("L", l3),
    ]
}

// 3
fn exponential_law() -> Check {
    let imgs = small_images();
    for (xn, x) in &imgs {
        for (yn, y) in &imgs {
            for n in 0..=2u32 {
                let i_n = interval(n);
                let dom = product(x, &i_n);
                let tag = format!("{xn}×I_{n} → {yn}");
                let maps: Vec<DigitalMap> = ok(MapSpace::new(&dom, y).enumerate(None).collect())?;
                let space = (y.len() as f64).powi(dom.len() as i32);
                if space <= (1u64 << 20) as f64 {
                    let mut got: Vec<Vec<u32>> = maps.iter().map(|m| m.table().to_vec()).collect();
                    got.sort();
                    let mut want = brute_maps(&dom, y);
                    want.sort();
                    ensure(got == want, format!("{tag}: enumeration differs from the oracle"))?;
                }
                for f in &maps {
                    let g = ok(curry(f, x, &i_n))?;
                    ensure(g.is_continuous(), format!("{tag}: curry of a continuous map is not continuous"))?;
                    ensure(uncurry(&g).table() == f.table(), format!("{tag}: round trip fails"))?;
                }
                if space <= (1u64 << 16) as f64 {
                    let pairs = adjacent_pairs(&dom);
                    let yc = coords(y);
                    for t in all_functions(dom.len(), y.len()) {
                        let c = continuous(&pairs, &yc, &t);
                        let f = ok(DigitalMap::from_table(dom.clone(), y.clone(), t))?;
                        let g = ok(curry(&f, x, &i_n))?;
                        ensure(g.is_continuous() == c, format!("{tag}: curry does not reflect continuity"))?;
                        ensure(uncurry(&g).table() == f.table(), format!("{tag}: round trip fails"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Continuity and the triangle R = ρ_k × ρ_m on S(X,k)×{0} ∪ S(A,k)×S(I_N,lm), from coordinates.
fn retraction_oracle(w: &RetractionWitness) -> Check {
    ensure(grid_continuous(&w.retraction), "oracle: retraction is not continuous")?;
    let d = w.space.dim();
    let (k, m) = (w.k as i64, w.m as i64);
    for (i, p) in w.retraction.domain().points().iter().enumerate() {
        let c = p.coords();
        let x: Vec<i64> = c[..d].iter().map(|v| v.div_euclid(k)).collect();
        let t = c[d];
        if t == 0 || w.subspace.contains(&Point::new(x.clone())) {
            let mut want = x;
            want.push(t.div_euclid(m));
            ensure(w.retraction.value(i).coords() == want.as_slice(), format!("oracle: triangle fails at {p}"))?;
        }
    }
    Ok(())
}

// 4
fn origin_retractions() -> Check {
    for m in 1..=4 {
        for n in 1..=4 {
            let w = ok(retraction_origin_interval(m, n))?;
            ensure(verify_retraction(&w), format!("M={m}, N={n}: verify_retraction fails"))?;
            retraction_oracle(&w).map_err(|e| format!("M={m}, N={n}: {e}"))?;
        }
    }
    Ok(())
}

// 5
fn endpoint_retractions() -> Check {
    for m in 1..=3u32 {
        for n in 1..=3u32 {
            let w = ok(retraction_both_endpoints(m, n))?;
            ensure(verify_retraction(&w), format!("M={m}, N={n}: verify_retraction fails"))?;
            retraction_oracle(&w).map_err(|e| format!("M={m}, N={n}: {e}"))?;
            let want = if m == 1 {
                2
            } else {
                (2..).find(|&p| (m as u64 - 1) << (p - 2) >= 4 * n as u64 + 5).unwrap()
            };
            ensure(w.p == Some(want), format!("M={m}, N={n}: recorded p {:?}, smallest admissible {want}", w.p))?;
            ensure(w.k == 1 << want, format!("M={m}, N={n}: k is not 2^p"))?;
        }
    }
    Ok(())
}

// 6
fn negative_fixtures() -> Check {
    let (w, h, f) = ok(hep_example())?;
    let j = w.inclusion();
    let (nj, nh, nf) = ok(non_push())?;
    let cases = [("hep example", j.clone(), h.clone(), f.clone()), ("non-push", nj, nh, nf)];
    for (name, j, h, f) in &cases {
        let push = FillerProblem::Pushout { j: j.clone(), h: h.clone(), f: f.clone() };
        let ext = FillerProblem::Extension { j: j.clone(), h: h.clone(), f: f.clone() };
        ensure(ok(exhaustive_filler_search(&push, 1, 1, 1 << 20))?.is_no(), format!("{name}: pushout at l=1 not No"))?;
        ensure(ok(exhaustive_filler_search(&ext, 1, 1, 1 << 20))?.is_no(), format!("{name}: extension at k=l=1 not No"))?;
        let v = ok(exhaustive_filler_search(&push, 1, 2, 1 << 20))?;
        ensure(v.witness().is_some_and(|w| w.l == 2), format!("{name}: pushout at l=2 not Yes"))?;
        ensure(ok(pushout_filler(j, h, f, 2))?.is_continuous(), format!("{name}: pushout filler at l=2"))?;

        // oracle: count fillers directly on the unsubdivided and l=2 domains
        let a = j.domain();
        let x = j.codomain();
        let y = f.codomain();
        for (l, expect) in [(1i64, 0usize), (2, 1)] {
            let top = l * 2 - 1;
            let pts = x.points().iter().map(|p| p.concat(&p1(0)));
            let side = a.points().iter().flat_map(|p| (0..=top).map(move |t| p.concat(&p1(t))));
            let dom = ok(DigitalImage::from_union(x.dim() + 1, pts.chain(side)))?;
            let forced = |p: &Point| {
                let (xs, t) = p.split_at(x.dim());
                let t = t.coords()[0];
                if a.contains(&xs) {
                    Some(h.apply(&xs.concat(&p1(t.div_euclid(l)))).unwrap().clone())
                } else {
                    (t == 0).then(|| f.apply(&xs).unwrap().clone())
                }
            };
            let got = brute_filler_count(&dom, y, forced);
            ensure(got == expect, format!("{name}: oracle finds {got} pushout fillers at l={l}"))?;
        }
        let dom = product(x, &interval(1));
        let forced = |p: &Point| {
            let (xs, t) = p.split_at(x.dim());
            if a.contains(&xs) {
                Some(h.apply(p).unwrap().clone())
            } else {
                (t.coords()[0] == 0).then(|| f.apply(&xs).unwrap().clone())
            }
        };
        ensure(brute_filler_count(&dom, y, forced) == 0, format!("{name}: oracle finds an unsubdivided extension"))?;
    }
    let ext = FillerProblem::Extension { j, h: h.clone(), f: f.clone() };
    ensure(ok(exhaustive_filler_search(&ext, 2, 2, 1 << 20))?.is_yes(), "hep example: no extension with k,l ≤ 2")?;
    let fw = ok(hep_filler(&w, &h, &f))?;
    ok(fw.revalidate())?;
    ensure(fw.k == 2 && fw.l == 4, format!("hep example: hep filler at k={}, l={}", fw.k, fw.l))
}

fn maps_into(dom: &DigitalImage, y: &DigitalImage) -> Result<Vec<DigitalMap>, String> {
    ok(MapSpace::new(dom, y).enumerate(None).collect())
}

fn at(f: &DigitalMap, z: &Point, t: i64) -> Point {
    f.apply(&z.concat(&p1(t))).unwrap().clone()
}

/// A deterministic non-constant pick when one exists.
fn pick(mut maps: Vec<DigitalMap>, rng: &mut StdRng) -> Option<DigitalMap> {
    maps.shuffle(rng);
    let i = maps.iter().position(|m| !m.is_constant()).unwrap_or(0);
    (!maps.is_empty()).then(|| maps.swap_remove(i))
}

// 7
fn borsuk_and_lifts() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let mut count = 0;
    for (zn, z) in [("pt", point_image()), ("I_1", interval(1))] {
        for (yn, y) in [("I_2", interval(2)), ("D", diamond())] {
            for n in 1..=3u32 {
                for m in 1..=3u32 {
                    let tag = format!("Z={zn}, Y={yn}, N={n}, M={m}");
                    let zn_dom = product(&z, &interval(n));
                    let zm_dom = product(&z, &interval(m));
                    let fs = maps_into(&zn_dom, &y)?;
                    let hs = maps_into(&zm_dom, &y)?;
                    let starting = |g: &DigitalMap, s: i64| -> Vec<DigitalMap> {
                        hs.iter().filter(|h| z.points().iter().all(|zp| at(h, zp, 0) == at(g, zp, s))).cloned().collect()
                    };
                    let f = pick(fs.clone(), &mut rng).unwrap();
                    let h = pick(starting(&f, 0), &mut rng).unwrap();

                    let lift = ok(path_fibration_lift(&z, &f, &h)).map_err(|e| format!("{tag}: {e}"))?;
                    ok(lift.revalidate()).map_err(|e| format!("{tag}: path lift: {e}"))?;
                    let w0 = ok(retraction_origin_interval(n, m))?;
                    let side = ok(DigitalMap::from_fn(&product(&zm_dom, &w0.subspace), &y, |p| {
                        let (zt, _) = p.split_at(z.dim() + 1);
                        h.apply(&zt).unwrap().clone()
                    }))?;
                    let b = ok(borsuk_filler(&w0, &z, &f, &side)).map_err(|e| format!("{tag}: {e}"))?;
                    ok(b.revalidate()).map_err(|e| format!("{tag}: borsuk (origin): {e}"))?;
                    count += 2;

                    if n < 2 {
                        continue;
                    }
                    let h2 = pick(starting(&f, n as i64), &mut rng).unwrap();
                    let yy = product(&y, &y);
                    let pair = ok(DigitalMap::from_fn(&zm_dom, &yy, |p| h.apply(p).unwrap().concat(h2.apply(p).unwrap())))?;
                    let lift = ok(endpoints_fibration_lift(&z, &f, &pair)).map_err(|e| format!("{tag}: {e}"))?;
                    ok(lift.revalidate()).map_err(|e| format!("{tag}: endpoints lift: {e}"))?;
                    let we = ok(retraction_both_endpoints(n, m))?;
                    let side = ok(DigitalMap::from_fn(&product(&zm_dom, &we.subspace), &y, |p| {
                        let (zt, a) = p.split_at(z.dim() + 1);
                        if a.coords()[0] == 0 { h.apply(&zt) } else { h2.apply(&zt) }.unwrap().clone()
                    }))?;
                    let b = ok(borsuk_filler(&we, &z, &f, &side)).map_err(|e| format!("{tag}: {e}"))?;
                    ok(b.revalidate()).map_err(|e| format!("{tag}: borsuk (endpoints): {e}"))?;

                    let y0 = y.point(0).clone();
                    let based: Vec<DigitalMap> =
                        fs.iter().filter(|g| z.points().iter().all(|zp| at(g, zp, 0) == y0)).cloned().collect();
                    let g = pick(based, &mut rng).unwrap();
                    let hg = pick(starting(&g, n as i64), &mut rng).unwrap();
                    let lift = ok(based_path_fibration_lift(&z, &y0, &g, &hg)).map_err(|e| format!("{tag}: {e}"))?;
                    ok(lift.revalidate()).map_err(|e| format!("{tag}: based lift: {e}"))?;
                    count += 3;
                }
            }
        }
    }
    ensure(count == 2 * 36 + 3 * 24, format!("ran {count} fillers"))
}

// 8
fn path_lift_uniqueness() -> Check {
    for len in 0..=6 {
        for idx in diamond_paths(len) {
            let pts: Vec<Point> = idx.iter().map(|&i| diamond_point(i)).collect();
            let alpha = ok(path_from_points(&diamond(), &pts))?;
            for start in (-8..=8i64).filter(|s| s.rem_euclid(4) as usize == idx[0]) {
                let lifts = brute_lifts(&idx, start);
                ensure(lifts.len() == 1, format!("{idx:?} from {start}: oracle finds {} lifts", lifts.len()))?;
                let got = ok(lift_path(&alpha, start))?;
                ensure(got.path() == lifts[0].as_slice(), format!("{idx:?} from {start}: lift differs"))?;
                ensure(got.verify_path(&alpha), format!("{idx:?} from {start}: certificate fails"))?;
            }
        }
    }
    Ok(())
}

fn diamond_index_adjacent(a: usize, b: usize) -> bool {
    cheb(&DIAMOND_CYCLE[a], &DIAMOND_CYCLE[b])
}

// 9
fn winding_invariance() -> Check {
    for len in 1..=6usize {
        let loops: Vec<Vec<usize>> = diamond_paths(len).into_iter().filter(|p| p[0] == p[len]).collect();
        let mut windings = Vec::with_capacity(loops.len());
        for idx in &loops {
            let pts: Vec<Point> = idx.iter().map(|&i| diamond_point(i)).collect();
            let w = ok(winding_number(&ok(DiamondLoop::from_points(&pts))?))?;
            let lift = &brute_lifts(idx, idx[0] as i64)[0];
            ensure(w == lift[len] - lift[0], format!("{idx:?}: winding {w} disagrees with the oracle lift"))?;
            ensure(w % 4 == 0, format!("{idx:?}: winding {w} is not a multiple of 4"))?;
            windings.push(w);
        }
        let mut pairs = 0usize;
        for a in 0..loops.len() {
            for b in a + 1..loops.len() {
                let (p, q) = (&loops[a], &loops[b]);
                let adj = (0..=len).all(|s| {
                    (s.saturating_sub(1)..=(s + 1).min(len)).all(|t| diamond_index_adjacent(p[s], q[t]))
                });
                if adj {
                    pairs += 1;
                    ensure(windings[a] == windings[b], format!("{p:?} ≈₁ {q:?} but windings differ"))?;
                }
            }
        }
        ensure(pairs > 0, format!("no adjacent loop pairs of length {len}"))?;
    }
    let l = ok(DiamondLoop::from_points(&[0, 1, 2, 3, 0].map(diamond_point)))?;
    ensure(ok(winding_number(&l))? == 4 && ok(winding_index(&l))? == 1, "canonical loop: expected raw 4, index 1")
}

// 10
fn dcat_diamond() -> Check {
    let d = diamond();
    let r = ok(dcat(&d, None, DcatOptions { k_max: 4, ..DcatOptions::default() }))?;
    ensure(r.lower == 1 && r.upper == Some(1), format!("dcat reports ({}, {:?})", r.lower, r.upper))?;
    let cover = r.witness.as_ref().ok_or("no cover witness")?;
    ok(cover.revalidate(&d))?;
    ensure(cover.members.len() == 2, "cover does not have two members")?;
    for p in d.points() {
        let rest = ok(d.filter(|q| q != p))?;
        let single = ok(DigitalImage::new(2, [p.clone()]))?;
        for u in [&rest, &single] {
            let v = ok(is_categorical(u, &d, None))?;
            let w = v.witness().ok_or(format!("{} points around {p}: not categorical", u.len()))?;
            ok(w.revalidate(u, &d))?;
        }
    }
    ensure(ok(is_contractible(&d, None))?.is_no(), "k=1: D is contractible")?;
    for k in 2..=4u32 {
        let b = ok(diamond_lower_bound(k))?;
        let s = ok(subdivide_image(&d, k))?;
        let pts = &b.loop_points;
        ensure(pts.first() == pts.last(), format!("k={k}: loop is not closed"))?;
        ensure(pts.iter().all(|p| s.contains(p)), format!("k={k}: loop leaves S(D,k)"))?;
        ensure(pts.windows(2).all(|w| cheb(w[0].coords(), w[1].coords())), format!("k={k}: loop is not a path"))?;
        let idx: Vec<usize> = pts
            .iter()
            .map(|p| {
                let q: Vec<i64> = p.coords().iter().map(|v| v.div_euclid(k as i64)).collect();
                DIAMOND_CYCLE.iter().position(|c| c[..] == q[..]).unwrap()
            })
            .collect();
        let lift = &brute_lifts(&idx, idx[0] as i64)[0];
        let w = lift[lift.len() - 1] - lift[0];
        ensure(w != 0 && w == b.winding, format!("k={k}: oracle winding {w}, reported {}", b.winding))?;
    }
    Ok(())
}

// 11
fn section_equivalence() -> Check {
    let d = diamond();
    let i3 = interval(3);
    let fixtures = [
        ("singleton in D", ok(DigitalImage::new(2, [Point::from([1, 0])]))?, d.clone()),
        ("D−{p} in D", ok(d.filter(|q| q != &Point::from([0, -1])))?, d.clone()),
        ("edge in I_3", ok(DigitalImage::new(1, [p1(1), p1(2)]))?, i3),
    ];
    for (name, u, x) in &fixtures {
        let v = ok(is_subdivision_categorical(u, x, 2, None, &[]))?;
        let w = v.witness().ok_or(format!("{name}: not subdivision-categorical"))?;
        ok(w.revalidate(u, x)).map_err(|e| format!("{name}: {e}"))?;
        let steps = w.homotopy.len().max(1);
        let mut w1 = w.clone();
        w1.homotopy = ok(prolong(&w.homotopy, steps))?;
        ok(w1.revalidate(u, x)).map_err(|e| format!("{name}: prolonged: {e}"))?;

        let direct = section_from_witness(&w1);
        ok(direct.revalidate(u, x)).map_err(|e| format!("{name}: direct section: {e}"))?;
        let found = ok(section_check(u, x, w1.k, steps as u32, &w1.basepoint))?;
        let s = found.witness().ok_or(format!("{name}: section_check is No at the translated bounds"))?;
        ok(s.revalidate(u, x)).map_err(|e| format!("{name}: {e}"))?;
        ok(ok(s.to_categorical(u))?.revalidate(u, x)).map_err(|e| format!("{name}: back: {e}"))?;

        let lifted = ok(section_via_lift(u, x, &w1)).map_err(|e| format!("{name}: {e}"))?;
        ok(lifted.revalidate(u, x)).map_err(|e| format!("{name}: lifted section: {e}"))?;
        let back = ok(lifted.to_categorical(u))?;
        ok(back.revalidate(u, x)).map_err(|e| format!("{name}: lifted back: {e}"))?;
    }
    // the negative side: D in D has neither
    let ob = InnermostLoop { k_max: 2 };
    ensure(ok(is_subdivision_categorical(&d, &d, 2, None, &[&ob]))?.is_no(), "D in D: expected No")?;
    for k in 1..=2 {
        for n in 1..=3 {
            for x0 in d.points() {
                ensure(ok(section_check(&d, &d, k, n, x0))?.is_no(), format!("D in D: section at k={k}, N={n}"))?;
            }
        }
    }
    Ok(())
}

fn corpus() -> Vec<(&'static str, DigitalImage)> {
    let mut v = small_images();
    v.retain(|(n, _)| *n != "pt");
    v.push(("C", circle8()));
    v.push(("S2", sphere(2).unwrap()));
    v.push(("Q", cube(1, 2).unwrap()));
    v
}

fn floor_point(c: &[i64], k: i64) -> Vec<i64> {
    c.iter().map(|v| v.div_euclid(k)).collect()
}

fn is_bijective_iso(f: &DigitalMap) -> bool {
    let mut t = f.table().to_vec();
    t.sort();
    t.dedup();
    t.len() == f.domain().len() && f.domain().len() == f.codomain().len() && grid_continuous(f) && {
        let mut inv = vec![0u32; t.len()];
        for (i, &v) in f.table().iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        grid_continuous(&DigitalMap::from_table(f.codomain().clone(), f.domain().clone(), inv).unwrap())
    }
}

// 12
fn subdivision_algebra() -> Check {
    for n in 0..=4u32 {
        for k in 2..=4u32 {
            ensure(ok(subdivide_image(&interval(n), k))? == interval(k * n + k - 1), format!("S(I_{n},{k})"))?;
        }
    }
    let imgs = corpus();
    for (name, x) in &imgs {
        for k in 2..=4u32 {
            let s = ok(subdivide_image(x, k))?;
            ensure(s.len() == x.len() * (k as usize).pow(x.dim() as u32), format!("|S({name},{k})|"))?;
            let rho = ok(projection_map(x, k))?;
            for (i, p) in s.points().iter().enumerate() {
                ensure(rho.value(i).coords() == floor_point(p.coords(), k as i64).as_slice(), format!("ρ on {name}"))?;
            }
            // ρ_k ∘ S(j,k) = j ∘ ρ_k for A = X minus its first point
            let a = ok(x.filter(|q| q != x.point(0)))?;
            if a.is_empty() {
                continue;
            }
            let j = ok(DigitalMap::inclusion(&a, x))?;
            let left = ok(compose(&rho, &ok(subdivide_inclusion(&j, k))?))?;
            let right = ok(compose(&j, &ok(projection_map(&a, k))?))?;
            ensure(left.table() == right.table(), format!("{name}, k={k}: naturality of ρ fails"))?;
        }
        for k in 2..=4u32 {
            for l in 2..=4u32 {
                let iso = ok(iso_iterated(x, k, l))?;
                ensure(is_bijective_iso(&iso), format!("{name}: iso_iterated({k},{l}) is not an isomorphism"))?;
                for (i, p) in iso.domain().points().iter().enumerate() {
                    let two = floor_point(&floor_point(p.coords(), l as i64), k as i64);
                    let one = floor_point(iso.value(i).coords(), (k * l) as i64);
                    ensure(two == one, format!("{name}: iso_iterated({k},{l}) does not commute with ρ"))?;
                }
            }
        }
    }
    let factors: Vec<_> = imgs.iter().filter(|(_, x)| x.len() <= 4).collect();
    for (xn, x) in &factors {
        for (yn, y) in &factors {
            for k in 2..=4u32 {
                let iso = ok(iso_product_subdivision(x, y, k))?;
                ensure(is_bijective_iso(&iso), format!("{xn}×{yn}, k={k}: not an isomorphism"))?;
                for (i, p) in iso.domain().points().iter().enumerate() {
                    let q = iso.value(i).coords();
                    ensure(
                        floor_point(p.coords(), k as i64) == floor_point(q, k as i64),
                        format!("{xn}×{yn}, k={k}: projections disagree"),
                    )?;
                }
            }
        }
    }
    Ok(())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget_secs: u64,
    run: fn() -> Check,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "diamond is not contractible", budget_secs: 10, run: diamond_not_contractible },
    Criterion { id: 2, name: "intervals are contractible", budget_secs: 7, run: intervals_contractible },
    Criterion { id: 3, name: "exponential law", budget_secs: 60, run: exponential_law },
    Criterion { id: 4, name: "retraction for {0} in I_M", budget_secs: 10, run: origin_retractions },
    Criterion { id: 5, name: "retraction for {0,M} in I_M", budget_secs: 30, run: endpoint_retractions },
    Criterion { id: 6, name: "negative filler fixtures", budget_secs: 10, run: negative_fixtures },
    Criterion { id: 7, name: "borsuk filler and lifts", budget_secs: 60, run: borsuk_and_lifts },
    Criterion { id: 8, name: "path lifts are unique", budget_secs: 60, run: path_lift_uniqueness },
    Criterion { id: 9, name: "winding is invariant", budget_secs: 60, run: winding_invariance },
    Criterion { id: 10, name: "d-cat(D) = 1", budget_secs: 120, run: dcat_diamond },
    Criterion { id: 11, name: "categorical iff section", budget_secs: 120, run: section_equivalence },
    Criterion { id: 12, name: "subdivision algebra", budget_secs: 30, run: subdivision_algebra },
];

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for c in CRITERIA {
        let (r, el) = timed(|| catch_unwind(AssertUnwindSafe(c.run)));
        let r = match r {
            Ok(r) => r,
            Err(e) => Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let budget = Duration::from_secs(c.budget_secs);
        let r = r.and_then(|_| ensure(el <= budget, format!("over budget: {:.2}s > {}s", el.as_secs_f64(), c.budget_secs)));
        match r {
            Ok(()) => println!("PASS {:>2} {} ({:.2}s, budget {}s)", c.id, c.name, el.as_secs_f64(), c.budget_secs),
            Err(e) => {
                println!("FAIL {:>2} {} ({:.2}s, budget {}s): {e}", c.id, c.name, el.as_secs_f64(), c.budget_secs);
                failed.push(c.id);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
