//! Fillers: the pushout map, homotopy extension through a retraction, the
//! Borsuk filler, and bounded brute-force filler search.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{interval, product, DigitalImage, Point};
use crate::maps::{compose, DigitalMap};
use crate::search::Extensions;
use crate::subdivision::{rho, rho_point, subdivide_image};
use crate::verdict::{Bounds, Refutation, Verdict};

use super::retraction::{product_witness, retraction_target, RetractionWitness};

/// Reads N off a map defined on A × I_N.
pub(crate) fn time_length(domain: &DigitalImage, a: &DigitalImage) -> Result<u32> {
    let n = (domain.len() / a.len()).saturating_sub(1) as u32;
    if domain != &product(a, &interval(n)) {
        return Err(Error::SignatureMismatch("domain is not of the form A × I_N".into()));
    }
    Ok(n)
}

fn inclusion_parts(j: &DigitalMap) -> Result<(DigitalImage, DigitalImage)> {
    if !j.is_inclusion() {
        return Err(Error::NotInclusion("j must be a set inclusion".into()));
    }
    Ok((j.domain().clone(), j.codomain().clone()))
}

/// Checks H(a,0) = f(a) on A, with H on A × I_N and f on X.
fn check_compatible(a: &DigitalImage, h: &DigitalMap, f: &DigitalMap, n: u32) -> Result<()> {
    if h.codomain() != f.codomain() {
        return Err(Error::SignatureMismatch("H and f have different codomains".into()));
    }
    for (i, p) in a.points().iter().enumerate() {
        if h.value(i * (n as usize + 1)) != f.apply(p)? {
            return Err(Error::DiagramMismatch(format!("H({p}, 0) differs from f({p})")));
        }
    }
    Ok(())
}

/// The only candidate φ on X×{0} ∪ A×S(I_N,l): f on the base, H∘(id×ρ_l) on the side.
/// It may fail to be continuous; for l = 1 it usually does.
pub fn pushout_candidate(j: &DigitalMap, h: &DigitalMap, f: &DigitalMap, l: u32) -> Result<DigitalMap> {
    let (a, x) = inclusion_parts(j)?;
    if f.domain() != &x {
        return Err(Error::SignatureMismatch("f must be defined on X".into()));
    }
    if l == 0 {
        return Err(Error::InvalidParameter("l must be positive".into()));
    }
    let n = time_length(h.domain(), &a)?;
    check_compatible(&a, h, f, n)?;
    let tgt = retraction_target(&a, &x, n, l)?;
    let d = x.dim();
    DigitalMap::from_fn(&tgt, f.codomain(), |p| {
        let (xs, t) = p.split_at(d);
        let t = t.coords()[0];
        if t == 0 {
            f.apply(&xs).expect("base point of X").clone()
        } else {
            h.apply(&xs.concat(&Point::from([rho(t, l)]))).expect("side point of A × I_N").clone()
        }
    })
}

/// The pushout filler φ for l ≥ 2, which is always continuous.
pub fn pushout_filler(j: &DigitalMap, h: &DigitalMap, f: &DigitalMap, l: u32) -> Result<DigitalMap> {
    if l < 2 {
        return Err(Error::InvalidParameter("the pushout filler needs l ≥ 2".into()));
    }
    h.require_continuous("H")?;
    f.require_continuous("f")?;
    let phi = pushout_candidate(j, h, f, l)?;
    if !phi.is_continuous() {
        return Err(Error::Internal("pushout filler is not continuous".into()));
    }
    Ok(phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FillerKind {
    Extension,
    Borsuk,
    PathFibration,
    EndpointsFibration,
    BasedPathFibration,
}

/// Inputs of the square a filler must make commute.
#[derive(Clone, Debug)]
pub(crate) enum Diagram {
    /// H̄ on S(X,k) × S(I_N,l), with H: A×I_N → Y and f: X → Y.
    Extension { a: DigitalImage, x: DigitalImage, h: DigitalMap, f: DigitalMap },
    /// H̄ on (S(Z,k) × S(I_M,l)) × S(X,k), with f: Z×X → Y and H: (Z×I_M)×A → Y.
    Borsuk { z: DigitalImage, a: DigitalImage, f: DigitalMap, h: DigitalMap },
    /// Lifts along ev_0, π or ev_N, on (S(Z,k) × S(I_M,l)) × I_{kN+k−1}.
    Path { z: DigitalImage, n: u32, f: DigitalMap, h: DigitalMap, end: PathEnd },
}

#[derive(Clone, Debug)]
pub(crate) enum PathEnd {
    Start,
    Both,
    Based(Point),
}

#[derive(Clone, Debug, Serialize)]
pub struct FillerWitness {
    pub kind: FillerKind,
    /// Subdivision factor on the space.
    pub k: u32,
    /// Total subdivision factor on the homotopy interval.
    pub l: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    /// The filler in adjoint form, as a map on a product.
    pub filler: DigitalMap,
    #[serde(skip)]
    pub(crate) diagram: Diagram,
}

impl FillerWitness {
    /// Rechecks continuity and every commuting condition as table equalities.
    pub fn revalidate(&self) -> std::result::Result<(), String> {
        let fl = &self.filler;
        if !fl.is_continuous() {
            return Err("filler is not continuous".into());
        }
        let (k, l) = (self.k, self.l);
        let at = |m: &DigitalMap, p: Point| -> std::result::Result<Point, String> {
            m.apply(&p).cloned().map_err(|e| e.to_string())
        };
        for (i, p) in fl.domain().points().iter().enumerate() {
            let v = fl.value(i);
            let fail = |what: &str| Err(format!("{what} fails at {p}"));
            match &self.diagram {
                Diagram::Extension { a, x, h, f } => {
                    let (xs, t) = p.split_at(x.dim());
                    let t = t.coords()[0];
                    let xb = rho_point(&xs, k);
                    if a.contains(&xb) && *v != at(h, xb.concat(&Point::from([rho(t, l)])))? {
                        return fail("restriction to S(A,k)");
                    }
                    if t == 0 && *v != at(f, xb)? {
                        return fail("initial condition");
                    }
                }
                Diagram::Borsuk { z, a, f, h, .. } => {
                    let (zs, rest) = p.split_at(z.dim());
                    let (t, xs) = rest.split_at(1);
                    let (zb, xb) = (rho_point(&zs, k), rho_point(&xs, k));
                    let t = t.coords()[0];
                    if a.contains(&xb) && *v != at(h, zb.concat(&Point::from([rho(t, l)])).concat(&xb))? {
                        return fail("restriction to S(A,k)");
                    }
                    if t == 0 && *v != at(f, zb.concat(&xb))? {
                        return fail("initial condition");
                    }
                }
                Diagram::Path { z, n, f, h, end } => {
                    let (zs, rest) = p.split_at(z.dim());
                    let (t, s) = (rest.coords()[0], rest.coords()[1]);
                    let zb = rho_point(&zs, k);
                    let last = (k * (n + 1) - 1) as i64;
                    let hv = || at(h, zb.concat(&Point::from([rho(t, l)])));
                    match end {
                        PathEnd::Start => {
                            if s == 0 && *v != hv()? {
                                return fail("ev_0 condition");
                            }
                        }
                        PathEnd::Both => {
                            let dy = v.dim();
                            if s == 0 && *v != hv()?.split_at(dy).0 {
                                return fail("start of π condition");
                            }
                            if s == last && *v != hv()?.split_at(dy).1 {
                                return fail("end of π condition");
                            }
                        }
                        PathEnd::Based(y0) => {
                            if s == 0 && v != y0 {
                                return fail("basedness");
                            }
                            if s == last && *v != hv()? {
                                return fail("ev_N condition");
                            }
                        }
                    }
                    if t == 0 && *v != at(f, zb.concat(&Point::from([rho(s, k)])))? {
                        return fail("initial condition");
                    }
                }
            }
        }
        Ok(())
    }

    fn checked(self) -> Result<Self> {
        self.revalidate().map_err(Error::Internal)?;
        Ok(self)
    }
}

/// Homotopy extension through a retraction: H̄ = φ ∘ R on S(X,k) × S(I_N,lm),
/// where φ is the pushout filler for H: A×I_N → Y and f: X → Y.
pub fn hep_filler(w: &RetractionWitness, h: &DigitalMap, f: &DigitalMap) -> Result<FillerWitness> {
    hep_unchecked(w, h, f)?.checked()
}

fn hep_unchecked(w: &RetractionWitness, h: &DigitalMap, f: &DigitalMap) -> Result<FillerWitness> {
    let j = w.inclusion();
    let n = time_length(h.domain(), &w.subspace)?;
    if n != w.time || f.domain() != &w.space {
        return Err(Error::DiagramMismatch("the retraction witness does not match the diagram".into()));
    }
    let phi = pushout_filler(&j, h, f, w.l)?;
    let filler = compose(&phi, &w.retraction)?;
    Ok(FillerWitness {
        kind: FillerKind::Extension,
        k: w.k,
        l: w.l * w.m,
        p: w.p,
        filler,
        diagram: Diagram::Extension { a: w.subspace.clone(), x: w.space.clone(), h: h.clone(), f: f.clone() },
    })
}

/// The Borsuk filler, by double adjunction.
///
/// `f` is the starting map Z → map(X,Y) in adjoint form Z×X → Y, and `h`
/// the homotopy Z×I_M → map(A,Y) in adjoint form (Z×I_M)×A → Y, where `w`
/// witnesses A ↪ X with time length M. The homotopy is moved to
/// (Z×A)×I_M, extended over Z×X through the product witness ρ_k × R, and
/// moved back. The filler is returned on (S(Z,k)×S(I_M,lm))×S(X,k).
pub fn borsuk_filler(
    w: &RetractionWitness,
    z: &DigitalImage,
    f: &DigitalMap,
    h: &DigitalMap,
) -> Result<FillerWitness> {
    borsuk_unchecked(w, z, f, h)?.checked()
}

/// The Borsuk filler without the final check, for callers that check what they build from it.
pub(crate) fn borsuk_unchecked(
    w: &RetractionWitness,
    z: &DigitalImage,
    f: &DigitalMap,
    h: &DigitalMap,
) -> Result<FillerWitness> {
    let (a, x, m) = (&w.subspace, &w.space, w.time);
    let zi = product(z, &interval(m));
    if f.domain() != &product(z, x) || h.domain() != &product(&zi, a) {
        return Err(Error::SignatureMismatch("expected f on Z×X and H on (Z×I_M)×A".into()));
    }
    if f.codomain() != h.codomain() {
        return Err(Error::SignatureMismatch("f and H have different codomains".into()));
    }
    f.require_continuous("f")?;
    h.require_continuous("H")?;
    let y = f.codomain();
    let (dz, da) = (z.dim(), a.dim());
    for zp in z.points() {
        for ap in a.points() {
            let fv = f.apply(&zp.concat(ap))?;
            let hv = h.apply(&zp.concat(&Point::from([0])).concat(ap))?;
            if fv != hv {
                return Err(Error::DiagramMismatch(format!("f({zp})({ap}) differs from H({zp}, 0)({ap})")));
            }
        }
    }

    let wz = product_witness(w, z)?;
    let za = product(z, a);
    let h2 = DigitalMap::from_fn(&product(&za, &interval(m)), y, |p| {
        let (zs, rest) = p.split_at(dz);
        let (as_, t) = rest.split_at(da);
        h.apply(&zs.concat(&t).concat(&as_)).expect("point of (Z×I_M)×A").clone()
    })?;
    let ext = hep_unchecked(&wz, &h2, f)?;

    // S(Z×X,k)×S(I_M,lm) and (S(Z,k)×S(I_M,lm))×S(X,k) are products of the
    // same factors in lexicographic order, so regrouping permutes indices.
    let lm = w.l * w.m;
    let (sz, st, sx) = (subdivide_image(z, w.k)?, subdivide_image(&interval(m), lm)?, subdivide_image(x, w.k)?);
    let dom = product(&product(&sz, &st), &sx);
    let (nt, nx) = (st.len(), sx.len());
    let src = ext.filler.table();
    let mut table = Vec::with_capacity(dom.len());
    for iz in 0..sz.len() {
        for it in 0..nt {
            for ix in 0..nx {
                table.push(src[(iz * nx + ix) * nt + it]);
            }
        }
    }
    let filler = DigitalMap::from_table(dom, y.clone(), table)?;
    Ok(FillerWitness {
        kind: FillerKind::Borsuk,
        k: w.k,
        l: lm,
        p: w.p,
        filler,
        diagram: Diagram::Borsuk { z: z.clone(), a: a.clone(), f: f.clone(), h: h.clone() },
    })
}

pub(crate) fn path_witness(
    kind: FillerKind,
    b: FillerWitness,
    z: &DigitalImage,
    n: u32,
    f: &DigitalMap,
    h: &DigitalMap,
    end: PathEnd,
) -> Result<FillerWitness> {
    FillerWitness {
        kind,
        k: b.k,
        l: b.l,
        p: b.p,
        filler: b.filler,
        diagram: Diagram::Path { z: z.clone(), n, f: f.clone(), h: h.clone(), end },
    }
    .checked()
}

/// A filler problem for brute-force search.
#[derive(Clone, Debug)]
pub enum FillerProblem {
    /// φ on X×{0} ∪ A×S(I_N,l) restricting to f and H∘(id×ρ_l). No k involved.
    Pushout { j: DigitalMap, h: DigitalMap, f: DigitalMap },
    /// H̄ on S(X,k) × S(I_N,l) with H̄ = H∘(ρ_k×ρ_l) over S(A,k) and H̄(−,0) = f∘ρ_k.
    Extension { j: DigitalMap, h: DigitalMap, f: DigitalMap },
}

#[derive(Clone, Debug, Serialize)]
pub struct FillerFound {
    pub k: u32,
    pub l: u32,
    pub filler: DigitalMap,
}

/// Every continuous filler at the given factors, up to `cap` of them.
/// Returns `Err(CapExceeded)` if there are more.
pub fn fillers_at(problem: &FillerProblem, k: u32, l: u32, cap: usize) -> Result<Vec<DigitalMap>> {
    collect_fillers(problem, k, l, cap, None)
}

/// Up to `limit` fillers. Without a node budget, finding more is an error;
/// with one, the search stops at `limit` and running out of nodes is the error.
fn collect_fillers(problem: &FillerProblem, k: u32, l: u32, limit: usize, nodes: Option<usize>) -> Result<Vec<DigitalMap>> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("factors must be positive".into()));
    }
    let (j, h, f) = match problem {
        FillerProblem::Pushout { j, h, f } | FillerProblem::Extension { j, h, f } => (j, h, f),
    };
    let (a, x) = inclusion_parts(j)?;
    let n = time_length(h.domain(), &a)?;
    check_compatible(&a, h, f, n)?;
    let y = f.codomain();
    let d = x.dim();
    let (dom, kk) = match problem {
        FillerProblem::Pushout { .. } => (retraction_target(&a, &x, n, l)?, 1),
        FillerProblem::Extension { .. } => (product(&subdivide_image(&x, k)?, &subdivide_image(&interval(n), l)?), k),
    };
    let allowed: Vec<Option<Vec<u32>>> = dom
        .points()
        .iter()
        .map(|p| {
            let (xs, t) = p.split_at(d);
            let t = t.coords()[0];
            let xb = rho_point(&xs, kk);
            let v = if a.contains(&xb) {
                Some(h.apply(&xb.concat(&Point::from([rho(t, l)]))).expect("side point"))
            } else if t == 0 {
                Some(f.apply(&xb).expect("base point"))
            } else {
                None
            };
            v.map(|v| vec![y.index_of(v).expect("value in Y") as u32])
        })
        .collect();
    let mut out = Vec::new();
    let mut search = Extensions::new(&dom, y, allowed, true);
    if let Some(n) = nodes {
        search = search.with_budget(n);
    }
    for t in search.by_ref() {
        if out.len() == limit {
            return Err(Error::CapExceeded { cap: limit });
        }
        out.push(DigitalMap::from_table_unchecked(dom.clone(), y.clone(), t));
        if nodes.is_some() && out.len() == limit {
            return Ok(out);
        }
    }
    if search.truncated {
        return Err(Error::CapExceeded { cap: nodes.unwrap_or(limit) });
    }
    Ok(out)
}

/// Searches the factors k ≤ k_max, l ≤ l_max (k is fixed at 1 for pushout
/// problems) in order of k + l, and returns the first filler found. `cap`
/// bounds the backtracking assignments per pair. No means every pair in
/// range was exhausted.
pub fn exhaustive_filler_search(
    problem: &FillerProblem,
    k_max: u32,
    l_max: u32,
    cap: usize,
) -> Result<Verdict<FillerFound>> {
    if k_max == 0 || l_max == 0 {
        return Err(Error::InvalidParameter("bounds must be at least 1".into()));
    }
    let k_max = if matches!(problem, FillerProblem::Pushout { .. }) { 1 } else { k_max };
    let mut pairs: Vec<(u32, u32)> = (1..=k_max).flat_map(|k| (1..=l_max).map(move |l| (k, l))).collect();
    pairs.sort_by_key(|&(k, l)| (k + l, k));
    let mut bounds = Bounds { k_max: Some(k_max), cap: Some(cap), ..Bounds::default() };
    let mut overflow = false;
    for (k, l) in pairs {
        match collect_fillers(problem, k, l, 1, Some(cap)) {
            Ok(mut found) => {
                bounds.explored += 1;
                if let Some(filler) = found.pop() {
                    return Ok(Verdict::yes(FillerFound { k, l, filler }, bounds));
                }
            }
            Err(Error::CapExceeded { .. }) => overflow = true,
            Err(e) => return Err(e),
        }
    }
    let explored = bounds.explored;
    Ok(if overflow {
        Verdict::unknown("candidate cap exceeded", bounds)
    } else {
        Verdict::no(Refutation::SearchExhausted { explored }, bounds)
    })
}
