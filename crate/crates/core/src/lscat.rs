//! Digital Lusternik–Schnirelmann category.
//!
//! A subset U ⊆ X is subdivision-categorical when, for some k, the map
//! i∘ρ_k: S(U,k) → X is homotopic in X to a constant. d-cat(X) is one less
//! than the fewest such subsets that cover X. Subsets are subdivided in
//! their own embedding.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::circle::{cover_point, diamond, winding_number, DiamondLoop, DiamondWinding};
use crate::cofib::lifting::based_path_fibration_lift;
use crate::error::{Error, Result};
use crate::funcspace::max_maps;
use crate::homotopy::{deform_to_constant, Homotopy};
use crate::lattice::{interval, product, DigitalImage, Point};
use crate::maps::DigitalMap;
use crate::search::Extensions;
use crate::subdivision::{rho_point, subdivide_image};
use crate::verdict::{Bounds, ContractibilityObstruction, Obstruction, Refutation, Verdict};

/// i∘ρ_k: S(U,k) → X.
pub fn projected_inclusion(u: &DigitalImage, x: &DigitalImage, k: u32) -> Result<DigitalMap> {
    if !u.is_subset_of(x) {
        return Err(Error::NotInclusion("U is not a subset of X".into()));
    }
    let s = subdivide_image(u, k)?;
    DigitalMap::from_fn(&s, x, |p| rho_point(p, k))
}

/// A deformation in X from a constant to i∘ρ_k.
#[derive(Clone, Debug, Serialize)]
pub struct CategoricalWitness {
    pub k: u32,
    pub basepoint: Point,
    pub homotopy: Homotopy,
}

impl CategoricalWitness {
    pub fn revalidate(&self, u: &DigitalImage, x: &DigitalImage) -> std::result::Result<(), String> {
        let target = projected_inclusion(u, x, self.k).map_err(|e| e.to_string())?;
        let h = &self.homotopy;
        if !h.start().same_signature(&target) {
            return Err("homotopy has the wrong signature".into());
        }
        if h.start().table().iter().any(|&v| x.point(v as usize) != &self.basepoint) {
            return Err("homotopy does not start at the constant map".into());
        }
        if h.end() != &target {
            return Err(format!("homotopy does not end at the projected inclusion for k = {}", self.k));
        }
        if !h.is_valid() {
            return Err("consecutive stages are not adjacent".into());
        }
        Ok(())
    }
}

fn search_at(u: &DigitalImage, x: &DigitalImage, k: u32, max_steps: Option<usize>) -> Result<(Verdict<CategoricalWitness>, usize)> {
    let i = projected_inclusion(u, x, k)?;
    let (v, explored) = deform_to_constant(&i, max_steps);
    Ok((
        v.map(|h| CategoricalWitness { k, basepoint: h.end().value(0).clone(), homotopy: h.reversed() }),
        explored,
    ))
}

/// Is i: U ↪ X homotopic in X to a constant? The BFS from i covers every basepoint at once.
pub fn is_categorical(u: &DigitalImage, x: &DigitalImage, max_steps: Option<usize>) -> Result<Verdict<CategoricalWitness>> {
    Ok(search_at(u, x, 1, max_steps)?.0)
}

/// Tries k = 1, then 2..=k_max. Exhausting the search at some k says nothing
/// about larger k, so a negative answer is No only when an obstruction applies.
pub fn is_subdivision_categorical(
    u: &DigitalImage,
    x: &DigitalImage,
    k_max: u32,
    max_steps: Option<usize>,
    obstructions: &[&dyn ContractibilityObstruction],
) -> Result<Verdict<CategoricalWitness>> {
    if !u.is_subset_of(x) {
        return Err(Error::NotInclusion("U is not a subset of X".into()));
    }
    let mut bounds = Bounds { max_steps, k_max: Some(k_max), cap: Some(max_maps()), explored: 0 };
    for ob in obstructions {
        if let Some(o) = ob.refute(u, x) {
            return Ok(Verdict::no(Refutation::Obstruction(o), bounds));
        }
    }
    let mut exhausted = Vec::new();
    for k in 1..=k_max.max(1) {
        let (v, explored) = search_at(u, x, k, max_steps)?;
        bounds.explored += explored;
        if v.is_no() {
            exhausted.push(k);
        }
        if let Some(w) = v.into_witness() {
            return Ok(Verdict::yes(w, bounds));
        }
    }
    let note = if exhausted.is_empty() {
        "search bounds reached for every k".to_string()
    } else {
        format!("no constant in the component of i∘ρ_k for k in {exhausted:?}; larger k untested")
    };
    Ok(Verdict::unknown(note, bounds))
}

/// The innermost loop of S(D,k): four runs of k points, one in each block.
pub fn innermost_loop(k: u32) -> Result<Vec<Point>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let k = k as i64;
    let mut pts = Vec::with_capacity(4 * k as usize + 1);
    pts.extend((0..k).map(|t| Point::from([k, t])));
    pts.extend((0..k).map(|s| Point::from([k - 1 - s, k])));
    pts.extend((0..k).map(|t| Point::from([-1, k - 1 - t])));
    pts.extend((0..k).map(|s| Point::from([s, -1])));
    pts.push(pts[0].clone());
    Ok(pts)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiamondLowerBound {
    pub k: u32,
    /// The loop in S(D,k).
    pub loop_points: Vec<Point>,
    /// Raw winding number of its projection to D.
    pub winding: i64,
}

/// A loop in S(D,k) whose projection has nonzero winding. A deformation of
/// ρ_k to a constant would deform the projected loop to a constant loop,
/// whose winding is 0, so no such deformation exists.
pub fn diamond_lower_bound(k: u32) -> Result<DiamondLowerBound> {
    if k < 2 {
        return Err(Error::InvalidParameter("the innermost loop needs k ≥ 2".into()));
    }
    let pts = innermost_loop(k)?;
    let s = subdivide_image(&diamond(), k)?;
    if let Some(p) = pts.iter().find(|p| !s.contains(p)) {
        return Err(Error::Internal(format!("{p} is not in S(D,{k})")));
    }
    let projected: Vec<Point> = pts.iter().map(|p| rho_point(p, k)).collect();
    let winding = winding_number(&DiamondLoop::from_points(&projected)?)?;
    if winding == 0 {
        return Err(Error::Internal(format!("projected innermost loop for k = {k} has winding 0")));
    }
    Ok(DiamondLowerBound { k, loop_points: pts, winding })
}

/// The innermost-loop argument as an obstruction, for D itself. k = 1 uses
/// the loop through the four points of D.
#[derive(Clone, Copy, Debug)]
pub struct InnermostLoop {
    pub k_max: u32,
}

impl ContractibilityObstruction for InnermostLoop {
    fn name(&self) -> &'static str {
        "innermost-loop"
    }

    fn refute(&self, subset: &DigitalImage, space: &DigitalImage) -> Option<Obstruction> {
        if subset != space || space != &diamond() {
            return None;
        }
        let base = DiamondLoop::from_points(&[0, 1, 2, 3, 0].map(cover_point)).ok()?;
        let mut windings = vec![winding_number(&base).ok()?];
        for k in 2..=self.k_max {
            windings.push(diamond_lower_bound(k).ok()?.winding);
        }
        Some(Obstruction {
            name: self.name().into(),
            detail: format!(
                "for k = 1..={} the innermost loop of S(D,k) projects to a loop of nonzero winding",
                self.k_max.max(1)
            ),
            windings,
        })
    }
}

/// σ: S(U,k) → 𝒫_N X with ev_N∘σ = i∘ρ_k, stored in adjoint form on S(U,k) × I_N.
#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub k: u32,
    pub n: u32,
    pub basepoint: Point,
    pub sigma: DigitalMap,
}

impl Section {
    pub fn revalidate(&self, u: &DigitalImage, x: &DigitalImage) -> std::result::Result<(), String> {
        let su = subdivide_image(u, self.k).map_err(|e| e.to_string())?;
        if self.sigma.domain() != &product(&su, &interval(self.n)) || self.sigma.codomain() != x {
            return Err("section has the wrong signature".into());
        }
        if !self.sigma.is_continuous() {
            return Err("section is not continuous".into());
        }
        let d = u.dim();
        let n = self.n as i64;
        for (i, p) in self.sigma.domain().points().iter().enumerate() {
            let (us, t) = p.split_at(d);
            let t = t.coords()[0];
            let v = self.sigma.value(i);
            if t == 0 && v != &self.basepoint {
                return Err(format!("path at {us} does not start at the basepoint"));
            }
            if t == n && v != &rho_point(&us, self.k) {
                return Err(format!("path at {us} does not end at ρ_k of it"));
            }
        }
        Ok(())
    }

    /// The same data read as a deformation from the constant map.
    pub fn to_categorical(&self, u: &DigitalImage) -> Result<CategoricalWitness> {
        let su = subdivide_image(u, self.k)?;
        let homotopy = Homotopy::from_left(&self.sigma, &su, self.n)?;
        Ok(CategoricalWitness { k: self.k, basepoint: self.basepoint.clone(), homotopy })
    }
}

/// Searches for a section at fixed (k, N, x₀) by backtracking over S(U,k) × I_N.
/// No means the finite search space for these parameters holds none.
pub fn section_check(u: &DigitalImage, x: &DigitalImage, k: u32, n: u32, x0: &Point) -> Result<Verdict<Section>> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let target = projected_inclusion(u, x, k)?;
    let base = x.require_index(x0)? as u32;
    let su = target.domain().clone();
    let dom = product(&su, &interval(n));
    let m = n as usize + 1;
    let allowed = (0..dom.len())
        .map(|i| match i % m {
            0 => Some(vec![base]),
            t if t == n as usize => Some(vec![target.table()[i / m]]),
            _ => None,
        })
        .collect();
    let bounds = Bounds { cap: None, ..Bounds::default() };
    let found = Extensions::new(&dom, x, allowed, true).next();
    Ok(match found {
        Some(t) => {
            let sigma = DigitalMap::from_table_unchecked(dom, x.clone(), t);
            Verdict::yes(Section { k, n, basepoint: x0.clone(), sigma }, Bounds { explored: 1, ..bounds })
        }
        None => Verdict::no(Refutation::SearchExhausted { explored: 0 }, bounds),
    })
}

/// The section read off directly from a deformation: σ(u')(t) = H_t(u').
pub fn section_from_witness(w: &CategoricalWitness) -> Section {
    Section { k: w.k, n: w.homotopy.len() as u32, basepoint: w.basepoint.clone(), sigma: w.homotopy.to_left() }
}

/// The section built by lifting the deformation against ev_n on based paths,
/// starting from constant paths at the basepoint. The path length is
/// n = 4M + 6 for a deformation of M steps, the shortest for which the
/// two-endpoint retraction needs only k = 4. The section lives on
/// S(U, LK) with N = (n+1)K − 1, where L is the witness's factor and K the
/// factor of the lift.
pub fn section_via_lift(u: &DigitalImage, x: &DigitalImage, w: &CategoricalWitness) -> Result<Section> {
    let l = w.k;
    let su = subdivide_image(u, l)?;
    let m = w.homotopy.len().max(1) as u32;
    let n = 4 * m + 6;
    let h = crate::homotopy::prolong(&w.homotopy, m as usize)?.to_left();
    let f = DigitalMap::from_fn(&product(&su, &interval(n)), x, |_| w.basepoint.clone())?;
    let lift = based_path_fibration_lift(&su, &w.basepoint, &f, &h)?;
    let kk = lift.k;
    let big_n = (n + 1) * kk - 1;
    let last_t = (lift.l * (m + 1) - 1) as i64;
    let ds = su.dim();
    let dom = product(&subdivide_image(u, l * kk)?, &interval(big_n));
    let sigma = DigitalMap::from_fn(&dom, x, |p| {
        let (us, s) = p.split_at(ds);
        lift.filler
            .apply(&us.concat(&Point::from([last_t])).concat(&s))
            .expect("point of the lift's domain")
            .clone()
    })?;
    let sec = Section { k: l * kk, n: big_n, basepoint: w.basepoint.clone(), sigma };
    sec.revalidate(u, x).map_err(Error::Internal)?;
    Ok(sec)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverMember {
    pub subset: DigitalImage,
    pub witness: CategoricalWitness,
}

#[derive(Clone, Debug, Serialize)]
pub struct CategoricalCover {
    pub members: Vec<CoverMember>,
}

impl CategoricalCover {
    pub fn revalidate(&self, x: &DigitalImage) -> std::result::Result<(), String> {
        for p in x.points() {
            if !self.members.iter().any(|m| m.subset.contains(p)) {
                return Err(format!("{p} is not covered"));
            }
        }
        for m in &self.members {
            m.witness.revalidate(&m.subset, x)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DcatOptions {
    pub k_max: u32,
    pub max_steps: Option<usize>,
    /// Use every non-empty subset as a candidate when |X| is at most this.
    pub exact_cover_limit: usize,
}

impl Default for DcatOptions {
    fn default() -> Self {
        DcatOptions { k_max: 4, max_steps: None, exact_cover_limit: 12 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DcatReport {
    pub lower: usize,
    /// None when no candidate cover was certified.
    pub upper: Option<usize>,
    pub witness: Option<CategoricalCover>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_certificate: Option<Obstruction>,
    pub candidates: usize,
    pub certified: usize,
    pub bounds: Bounds,
}

impl DcatReport {
    pub fn is_exact(&self) -> bool {
        self.upper == Some(self.lower)
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_exact() {
            0
        } else {
            2
        }
    }
}

/// X itself, singletons, complements of singletons, and the two halves of X
/// along each axis; every non-empty subset when |X| ≤ `limit`.
pub fn default_candidates(x: &DigitalImage, limit: usize) -> Vec<Vec<usize>> {
    let n = x.len();
    let mut out: Vec<Vec<usize>> = vec![(0..n).collect()];
    if n <= limit && n < usize::BITS as usize {
        let mut all: Vec<Vec<usize>> =
            (1..(1usize << n) - 1).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect();
        all.sort_by_key(|s: &Vec<usize>| std::cmp::Reverse(s.len()));
        out.extend(all);
        return out;
    }
    out.extend((0..n).map(|i| (0..n).filter(|&j| j != i).collect()));
    for d in 0..x.dim() {
        let lo = x.points().iter().map(|p| p.coords()[d]).min().unwrap_or(0);
        let hi = x.points().iter().map(|p| p.coords()[d]).max().unwrap_or(0);
        if lo < hi {
            let mid = lo + (hi - lo) / 2;
            out.push((0..n).filter(|&i| x.point(i).coords()[d] <= mid).collect());
            out.push((0..n).filter(|&i| x.point(i).coords()[d] > mid).collect());
        }
    }
    out.extend((0..n).map(|i| vec![i]));
    out
}

type Bits = Vec<u64>;

fn bits_of(set: &[usize], n: usize) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for &i in set {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

/// Fewest members covering every point, by depth-first branching on the first uncovered point.
fn min_cover(sets: &[Bits], n: usize) -> Option<Vec<usize>> {
    fn first_uncovered(cov: &Bits, n: usize) -> Option<usize> {
        (0..n).find(|&i| cov[i / 64] >> (i % 64) & 1 == 0)
    }
    fn go(sets: &[Bits], n: usize, cov: &Bits, left: usize, chosen: &mut Vec<usize>) -> bool {
        let Some(p) = first_uncovered(cov, n) else { return true };
        if left == 0 {
            return false;
        }
        for (i, s) in sets.iter().enumerate() {
            if s[p / 64] >> (p % 64) & 1 == 1 {
                let next: Bits = cov.iter().zip(s).map(|(a, b)| a | b).collect();
                chosen.push(i);
                if go(sets, n, &next, left - 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let empty = vec![0u64; n.div_ceil(64)];
    (1..=n).find_map(|size| {
        let mut chosen = Vec::new();
        go(sets, n, &empty, size, &mut chosen).then_some(chosen)
    })
}

/// Bounds d-cat(X). Each candidate subset is certified independently, then
/// the fewest certified subsets covering X give the upper bound. The lower
/// bound is 1 when an obstruction rules out a deformation of X itself.
pub fn dcat(x: &DigitalImage, candidates: Option<&[DigitalImage]>, opts: DcatOptions) -> Result<DcatReport> {
    let n = x.len();
    let family: Vec<Vec<usize>> = match candidates {
        Some(list) => list
            .iter()
            .map(|u| {
                if !u.is_subset_of(x) {
                    return Err(Error::NotInclusion("a candidate is not a subset of X".into()));
                }
                Ok(u.points().iter().map(|p| x.index_of(p).expect("subset")).collect())
            })
            .collect::<Result<_>>()?,
        None => default_candidates(x, opts.exact_cover_limit),
    };
    let mut seen = BTreeSet::new();
    let family: Vec<Vec<usize>> = family.into_iter().filter(|s| !s.is_empty() && seen.insert(s.clone())).collect();

    let winding = DiamondWinding { k_max: opts.k_max };
    let inner = InnermostLoop { k_max: opts.k_max };
    let obstructions: [&dyn ContractibilityObstruction; 2] = [&inner, &winding];
    let lower_certificate = obstructions.iter().find_map(|o| o.refute(x, x));
    let lower = usize::from(lower_certificate.is_some());

    let checked: Vec<(Vec<usize>, DigitalImage, Verdict<CategoricalWitness>)> = family
        .into_par_iter()
        .map(|s| {
            let u = DigitalImage::new(x.dim(), s.iter().map(|&i| x.point(i).clone()))?;
            let v = is_subdivision_categorical(&u, x, opts.k_max, opts.max_steps, &obstructions)?;
            Ok((s, u, v))
        })
        .collect::<Result<_>>()?;
    let candidates_len = checked.len();
    let explored = checked.iter().map(|c| c.2.bounds.explored).sum();
    let members: Vec<(Vec<usize>, DigitalImage, CategoricalWitness)> = checked
        .into_iter()
        .filter_map(|(s, u, v)| v.into_witness().map(|w| (s, u, w)))
        .collect();
    let bits: Vec<Bits> = members.iter().map(|m| bits_of(&m.0, n)).collect();
    let chosen = min_cover(&bits, n);
    let witness = chosen.map(|idx| CategoricalCover {
        members: idx
            .into_iter()
            .map(|i| CoverMember { subset: members[i].1.clone(), witness: members[i].2.clone() })
            .collect(),
    });
    if let Some(c) = &witness {
        c.revalidate(x).map_err(Error::Internal)?;
    }
    Ok(DcatReport {
        lower,
        upper: witness.as_ref().map(|c| c.members.len() - 1),
        witness,
        lower_certificate,
        candidates: candidates_len,
        certified: members.len(),
        bounds: Bounds { max_steps: opts.max_steps, k_max: Some(opts.k_max), cap: Some(max_maps()), explored },
    })
}
