//! Homotopies as paths in mapping spaces, and decision by breadth-first search.
//!
//! An N-stage homotopy from f to g is a sequence f = H_0, H_1, …, H_N = g of
//! continuous maps with H_i ≈₁ H_{i+1}. Two maps are homotopic exactly when
//! they lie in the same component of the mapping-space graph, so BFS decides
//! the question and returns a witness of minimal length.

use indexmap::IndexMap;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::funcspace::{max_maps, tables_adjacent, MapSpace};
use crate::lattice::{interval, product, DigitalImage, Point};
use crate::maps::{compose, find_isomorphism, inverse, DigitalMap};
use crate::search::Extensions;
use crate::subdivision::projection_map;
use crate::verdict::{Bounds, ContractibilityObstruction, Refutation, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    stages: Vec<DigitalMap>,
}

impl Homotopy {
    /// Wraps a stage list. Signatures must agree; adjacency is checked by [`Homotopy::is_valid`].
    pub fn new(stages: Vec<DigitalMap>) -> Result<Self> {
        let first = stages.first().ok_or_else(|| Error::InvalidParameter("a homotopy needs a stage".into()))?;
        if stages.iter().any(|s| !s.same_signature(first)) {
            return Err(Error::SignatureMismatch("stages have different signatures".into()));
        }
        Ok(Homotopy { stages })
    }

    /// The constant homotopy at f with N stages.
    pub fn constant(f: &DigitalMap, n: usize) -> Self {
        Homotopy { stages: vec![f.clone(); n + 1] }
    }

    /// Number of steps N; there are N+1 stages.
    pub fn len(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stages(&self) -> &[DigitalMap] {
        &self.stages
    }

    pub fn start(&self) -> &DigitalMap {
        &self.stages[0]
    }

    pub fn end(&self) -> &DigitalMap {
        self.stages.last().expect("non-empty")
    }

    pub fn reversed(&self) -> Self {
        Homotopy { stages: self.stages.iter().rev().cloned().collect() }
    }

    pub fn is_valid(&self) -> bool {
        self.stages.iter().all(DigitalMap::is_continuous)
            && self.stages.windows(2).all(|w| {
                tables_adjacent(w[0].domain(), w[0].codomain(), w[0].table(), w[1].table())
            })
    }

    /// The left form H: X×I_N → Y, H(x,t) = H_t(x).
    pub fn to_left(&self) -> DigitalMap {
        let x = self.start().domain();
        let n = self.len();
        let dom = product(x, &interval(n as u32));
        let mut table = Vec::with_capacity(dom.len());
        for i in 0..x.len() {
            for s in &self.stages {
                table.push(s.table()[i]);
            }
        }
        DigitalMap::from_table_unchecked(dom, self.start().codomain().clone(), table)
    }

    /// Reads a left homotopy H: X×I_N → Y back into stages.
    pub fn from_left(h: &DigitalMap, x: &DigitalImage, n: u32) -> Result<Self> {
        if h.domain() != &product(x, &interval(n)) {
            return Err(Error::SignatureMismatch("domain is not X × I_N".into()));
        }
        let m = n as usize + 1;
        let stages = (0..m)
            .map(|t| {
                let table = (0..x.len()).map(|i| h.table()[i * m + t]).collect();
                DigitalMap::from_table_unchecked(x.clone(), h.codomain().clone(), table)
            })
            .collect();
        Ok(Homotopy { stages })
    }
}

impl Serialize for Homotopy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            stages: &'a [DigitalMap],
        }
        Out { stages: &self.stages }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Homotopy {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct In {
            stages: Vec<DigitalMap>,
        }
        Homotopy::new(In::deserialize(d)?.stages).map_err(serde::de::Error::custom)
    }
}

/// Checks that H runs from f to g through continuous, pairwise adjacent stages.
pub fn verify_homotopy(h: &Homotopy, f: &DigitalMap, g: &DigitalMap) -> bool {
    h.start() == f && h.end() == g && h.is_valid()
}

/// Runs H1 then H2, sharing the junction stage.
pub fn concat(h1: &Homotopy, h2: &Homotopy) -> Result<Homotopy> {
    if h1.end() != h2.start() {
        return Err(Error::JunctionMismatch("the first homotopy does not end where the second begins".into()));
    }
    let mut stages = h1.stages.clone();
    stages.extend(h2.stages[1..].iter().cloned());
    Ok(Homotopy { stages })
}

/// Pads H to N steps by repeating its last stage.
pub fn prolong(h: &Homotopy, n: usize) -> Result<Homotopy> {
    if n < h.len() {
        return Err(Error::InvalidParameter(format!("cannot shorten a {}-step homotopy to {n}", h.len())));
    }
    let mut stages = h.stages.clone();
    stages.resize(n + 1, h.end().clone());
    Ok(Homotopy { stages })
}

/// For each point y, the values g(y) may take when g ≈₁ f: ∩_{y'∼y} N[f(y')].
fn neighbor_restrictions(domain: &DigitalImage, codomain: &DigitalImage, f: &[u32]) -> Vec<Option<Vec<u32>>> {
    (0..domain.len())
        .map(|y| {
            let mut nb = domain.neighborhood(y).iter();
            let first = *nb.next().expect("closed neighborhoods contain the point");
            let mut acc: Vec<u32> = codomain.neighborhood(f[first as usize] as usize).to_vec();
            for &y2 in nb {
                let v = f[y2 as usize] as usize;
                acc.retain(|&c| codomain.are_adjacent(c as usize, v));
            }
            Some(acc)
        })
        .collect()
}

pub(crate) fn neighbor_tables<'a>(
    domain: &'a DigitalImage,
    codomain: &'a DigitalImage,
    f: &[u32],
) -> Extensions<'a> {
    Extensions::new(domain, codomain, neighbor_restrictions(domain, codomain, f), false)
}

/// All continuous g with g ≈₁ f, f included.
pub fn neighbors_in_mapspace(f: &DigitalMap) -> Result<impl Iterator<Item = DigitalMap> + '_> {
    f.require_continuous("map whose neighbors are requested")?;
    Ok(neighbor_tables(f.domain(), f.codomain(), f.table())
        .map(move |t| DigitalMap::from_table_unchecked(f.domain().clone(), f.codomain().clone(), t)))
}

/// Breadth-first search tree in a mapping-space graph.
pub(crate) struct SearchTree {
    nodes: IndexMap<Box<[u32]>, usize>,
}

pub(crate) enum Stop {
    Found(usize),
    Exhausted,
    Truncated,
}

impl SearchTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn id_of(&self, t: &[u32]) -> Option<usize> {
        self.nodes.get_index_of(t)
    }

    /// Tables from the root to node `id`.
    pub fn path_to(&self, mut id: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        loop {
            let (t, &parent) = self.nodes.get_index(id).expect("valid node");
            out.push(t.to_vec());
            if parent == usize::MAX {
                break;
            }
            id = parent;
        }
        out.reverse();
        out
    }
}

const EXPAND_CHUNK: usize = 1024;

/// BFS from `start` until `goal` holds, the component is exhausted, or a bound is hit.
/// Frontiers are expanded in parallel and merged in canonical order, so the
/// outcome does not depend on the thread count.
pub(crate) fn explore(
    domain: &DigitalImage,
    codomain: &DigitalImage,
    start: Vec<u32>,
    goal: impl Fn(&[u32]) -> bool,
    max_steps: Option<usize>,
    cap: usize,
) -> (SearchTree, Stop) {
    let mut tree = SearchTree { nodes: IndexMap::new() };
    let hit = goal(&start);
    tree.nodes.insert(start.into_boxed_slice(), usize::MAX);
    if hit {
        return (tree, Stop::Found(0));
    }
    let mut frontier = vec![0usize];
    let mut depth = 0usize;
    while !frontier.is_empty() {
        if max_steps.is_some_and(|s| depth >= s) {
            return (tree, Stop::Truncated);
        }
        let mut next = Vec::new();
        // chunked so a wide level never holds all its neighbor lists at once
        for chunk in frontier.chunks(EXPAND_CHUNK) {
            let nodes = &tree.nodes;
            let expanded: Vec<Vec<Vec<u32>>> = chunk
                .par_iter()
                .map(|&id| {
                    let f = nodes.get_index(id).expect("valid node").0;
                    neighbor_tables(domain, codomain, f).filter(|g| !nodes.contains_key(&g[..])).collect()
                })
                .collect();
            for (&parent, list) in chunk.iter().zip(expanded) {
                for g in list {
                    if tree.nodes.contains_key(&g[..]) {
                        continue;
                    }
                    let hit = goal(&g);
                    let (id, _) = tree.nodes.insert_full(g.into_boxed_slice(), parent);
                    if hit {
                        return (tree, Stop::Found(id));
                    }
                    if tree.nodes.len() > cap {
                        return (tree, Stop::Truncated);
                    }
                    next.push(id);
                }
            }
        }
        next.sort_by(|&a, &b| tree.nodes.get_index(a).unwrap().0.cmp(tree.nodes.get_index(b).unwrap().0));
        frontier = next;
        depth += 1;
    }
    (tree, Stop::Exhausted)
}

fn stages_from(domain: &DigitalImage, codomain: &DigitalImage, tables: Vec<Vec<u32>>) -> Homotopy {
    Homotopy {
        stages: tables
            .into_iter()
            .map(|t| DigitalMap::from_table_unchecked(domain.clone(), codomain.clone(), t))
            .collect(),
    }
}

fn is_constant_table(t: &[u32]) -> bool {
    t.windows(2).all(|w| w[0] == w[1])
}

/// Decides f ≃ g by BFS from f. A Yes witness has the fewest possible stages.
pub fn homotopic(f: &DigitalMap, g: &DigitalMap, max_steps: Option<usize>) -> Result<Verdict<Homotopy>> {
    if !f.same_signature(g) {
        return Err(Error::SignatureMismatch("maps have different domain or codomain".into()));
    }
    f.require_continuous("first map")?;
    g.require_continuous("second map")?;
    let cap = max_maps();
    let target = g.table();
    let (tree, stop) = explore(f.domain(), f.codomain(), f.table().to_vec(), |t| t == target, max_steps, cap);
    let bounds = Bounds { max_steps, cap: Some(cap), explored: tree.len(), ..Bounds::default() };
    Ok(match stop {
        Stop::Found(id) => Verdict::yes(stages_from(f.domain(), f.codomain(), tree.path_to(id)), bounds),
        Stop::Exhausted => Verdict::no(Refutation::ComponentExhausted { explored: tree.len() }, bounds),
        Stop::Truncated => Verdict::unknown("search bounds reached before the target", bounds),
    })
}

/// BFS from `start` to any constant map.
pub(crate) fn deform_to_constant(start: &DigitalMap, max_steps: Option<usize>) -> (Verdict<Homotopy>, usize) {
    let cap = max_maps();
    let (tree, stop) =
        explore(start.domain(), start.codomain(), start.table().to_vec(), is_constant_table, max_steps, cap);
    let bounds = Bounds { max_steps, cap: Some(cap), explored: tree.len(), ..Bounds::default() };
    let v = match stop {
        Stop::Found(id) => Verdict::yes(stages_from(start.domain(), start.codomain(), tree.path_to(id)), bounds),
        Stop::Exhausted => Verdict::no(Refutation::ComponentExhausted { explored: tree.len() }, bounds),
        Stop::Truncated => Verdict::unknown("search bounds reached", bounds),
    };
    (v, tree.len())
}

#[derive(Clone, Debug, Serialize)]
pub struct Contraction {
    pub basepoint: Point,
    /// From the identity to the constant map at the basepoint.
    pub homotopy: Homotopy,
}

/// Is X homotopy equivalent to a point, i.e. is id_X homotopic to a constant?
///
/// All constants lie in one search: BFS from id_X stops at the first constant
/// reached, and a No means the whole component of id_X holds none.
pub fn is_contractible(x: &DigitalImage, max_steps: Option<usize>) -> Result<Verdict<Contraction>> {
    let id = DigitalMap::identity(x);
    let (v, _) = deform_to_constant(&id, max_steps);
    Ok(v.map(|h| Contraction { basepoint: h.end().value(0).clone(), homotopy: h }))
}

#[derive(Clone, Debug, Serialize)]
pub struct SubdivisionContraction {
    pub k: u32,
    pub basepoint: Point,
    /// From ρ_k: S(X,k) → X to the constant map at the basepoint.
    pub homotopy: Homotopy,
}

/// Searches for a deformation of ρ_k: S(X,k) → X to a constant, for k = 2..=k_max.
///
/// Exhausting the component for a particular k proves nothing about larger
/// k, so without an applicable obstruction the negative answer is Unknown.
pub fn is_subdivision_contractible(
    x: &DigitalImage,
    k_max: u32,
    max_steps: Option<usize>,
    obstructions: &[&dyn ContractibilityObstruction],
) -> Result<Verdict<SubdivisionContraction>> {
    if k_max < 2 {
        return Err(Error::InvalidParameter("k_max must be at least 2".into()));
    }
    let mut bounds = Bounds { max_steps, k_max: Some(k_max), cap: Some(max_maps()), explored: 0 };
    for ob in obstructions {
        if let Some(o) = ob.refute(x, x) {
            return Ok(Verdict::no(Refutation::Obstruction(o), bounds));
        }
    }
    let mut exhausted = Vec::new();
    for k in 2..=k_max {
        let rho = projection_map(x, k)?;
        let (v, explored) = deform_to_constant(&rho, max_steps);
        bounds.explored += explored;
        if v.is_no() {
            exhausted.push(k);
        }
        if let Some(h) = v.into_witness() {
            let basepoint = h.end().value(0).clone();
            return Ok(Verdict::yes(SubdivisionContraction { k, basepoint, homotopy: h }, bounds));
        }
    }
    let note = if exhausted.is_empty() {
        "search bounds reached for every k".to_string()
    } else {
        format!("no constant in the component of the projection for k in {exhausted:?}; larger k untested")
    };
    Ok(Verdict::unknown(note, bounds))
}

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_maps: usize,
    pub max_steps: Option<usize>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_maps: max_maps(), max_steps: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyEquivalence {
    pub f: DigitalMap,
    pub g: DigitalMap,
    /// From g∘f to id_X.
    pub gf_to_id: Homotopy,
    /// From f∘g to id_Y.
    pub fg_to_id: Homotopy,
}

/// Searches for f: X → Y and g: Y → X with g∘f ≃ id_X and f∘g ≃ id_Y.
///
/// No is returned for a mismatch in the number of components, and also when
/// both map spaces and both identity components were enumerated in full
/// without finding a pair.
pub fn homotopy_equivalent(x: &DigitalImage, y: &DigitalImage, caps: Caps) -> Result<Verdict<HomotopyEquivalence>> {
    let mut bounds = Bounds { max_steps: caps.max_steps, cap: Some(caps.max_maps), ..Bounds::default() };
    if let Some(f) = find_isomorphism(x, y).into_witness() {
        let g = inverse(&f)?;
        let gf = compose(&g, &f)?;
        let fg = compose(&f, &g)?;
        let w = HomotopyEquivalence { gf_to_id: Homotopy::constant(&gf, 0), fg_to_id: Homotopy::constant(&fg, 0), f, g };
        return Ok(Verdict::yes(w, bounds));
    }
    let (cx, cy) = (x.components().len(), y.components().len());
    if cx != cy {
        return Ok(Verdict::no(Refutation::ComponentCountMismatch { left: cx, right: cy }, bounds));
    }

    let id_x = DigitalMap::identity(x);
    let id_y = DigitalMap::identity(y);
    let (tx, sx) = explore(x, x, id_x.table().to_vec(), |_| false, caps.max_steps, caps.max_maps);
    let (ty, sy) = explore(y, y, id_y.table().to_vec(), |_| false, caps.max_steps, caps.max_maps);
    let components_complete = matches!(sx, Stop::Exhausted) && matches!(sy, Stop::Exhausted);

    let collect = |a: &DigitalImage, b: &DigitalImage| -> (Vec<DigitalMap>, bool) {
        let mut out = Vec::new();
        for m in MapSpace::new(a, b).enumerate(Some(caps.max_maps)) {
            match m {
                Ok(m) => out.push(m),
                Err(_) => return (out, false),
            }
        }
        (out, true)
    };
    let (fs, fs_complete) = collect(x, y);
    let (gs, gs_complete) = collect(y, x);
    bounds.explored = tx.len() + ty.len() + fs.len() + gs.len();

    for f in &fs {
        for g in &gs {
            let gf = compose(g, f)?;
            let Some(a) = tx.id_of(gf.table()) else { continue };
            let fg = compose(f, g)?;
            let Some(b) = ty.id_of(fg.table()) else { continue };
            let gf_to_id = stages_from(x, x, tx.path_to(a)).reversed();
            let fg_to_id = stages_from(y, y, ty.path_to(b)).reversed();
            return Ok(Verdict::yes(HomotopyEquivalence { f: f.clone(), g: g.clone(), gf_to_id, fg_to_id }, bounds));
        }
    }
    if components_complete && fs_complete && gs_complete {
        let explored = bounds.explored;
        Ok(Verdict::no(Refutation::SearchExhausted { explored }, bounds))
    } else {
        Ok(Verdict::unknown("caps reached before every candidate pair could be ruled out", bounds))
    }
}

/// The deformation showing ev_0: P_N Y → Y is a homotopy equivalence.
///
/// The section is σ(y) = c_y, and the homotopy runs from id to σ∘ev_0 by
/// H(α,s)(t) = α(min(t, N−s)), retracting each path onto its start.
#[derive(Clone, Debug)]
pub struct PathSpaceDeformation {
    pub target: DigitalImage,
    pub length: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeformationReport {
    pub paths: usize,
    pub adjacent_pairs: usize,
    pub exhaustive: bool,
}

impl PathSpaceDeformation {
    /// σ(y) = c_y.
    pub fn section(&self, y: &Point) -> Result<DigitalMap> {
        crate::maps::constant_map(&interval(self.length), y, &self.target)
    }

    /// H(α, s) = α ∘ (t ↦ min(t, N−s)).
    pub fn stage(&self, alpha: &DigitalMap, s: u32) -> DigitalMap {
        let n = self.length;
        let table = (0..=n).map(|t| alpha.table()[t.min(n - s) as usize]).collect();
        DigitalMap::from_table_unchecked(alpha.domain().clone(), self.target.clone(), table)
    }

    /// Checks the section identity, the end conditions, and that H preserves
    /// adjacency: H(α,s) ≈₁ H(α',s') for α ≈₁ α' and s ∼ s'. With `sample`
    /// = Some((count, seed)) only that many random paths α are used as the
    /// first argument; their neighbors α' are always taken in full.
    pub fn validate(&self, sample: Option<(usize, u64)>) -> Result<DeformationReport> {
        let n = self.length;
        let i_n = interval(n);
        for y in self.target.points() {
            let c = self.section(y)?;
            if c.value(0) != y {
                return Err(Error::Internal("ev_0 ∘ σ differs from the identity".into()));
            }
        }
        let mut paths = MapSpace::new(&i_n, &self.target).enumerate(None).collect::<Result<Vec<_>>>()?;
        let total = paths.len();
        if let Some((count, seed)) = sample {
            if count < total {
                paths.shuffle(&mut StdRng::seed_from_u64(seed));
                paths.truncate(count);
            }
        }
        let mut report = DeformationReport { paths: paths.len(), adjacent_pairs: 0, exhaustive: paths.len() == total };
        for alpha in &paths {
            if &self.stage(alpha, 0) != alpha || self.stage(alpha, n) != self.section(alpha.value(0))? {
                return Err(Error::Internal("deformation has the wrong ends".into()));
            }
            for beta in neighbors_in_mapspace(alpha)? {
                report.adjacent_pairs += 1;
                for s in 0..=n {
                    for s2 in s.saturating_sub(1)..=(s + 1).min(n) {
                        let a = self.stage(alpha, s);
                        let b = self.stage(&beta, s2);
                        if !tables_adjacent(&i_n, &self.target, a.table(), b.table()) {
                            return Err(Error::Internal(format!("deformation breaks adjacency at s={s}, s'={s2}")));
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}

pub fn ev0_homotopy_equivalence_witness(y: &DigitalImage, n: u32) -> Result<PathSpaceDeformation> {
    if n == 0 {
        return Err(Error::InvalidParameter("path length must be at least 1".into()));
    }
    Ok(PathSpaceDeformation { target: y.clone(), length: n })
}

/// The contraction of I_M to 0 given by H(s,t) = s if s ≤ M−t, else M−t.
pub fn interval_contraction(m: u32) -> Homotopy {
    let i = interval(m);
    let stages = (0..=m)
        .map(|t| {
            let table = (0..=m).map(|s| s.min(m - t)).collect();
            DigitalMap::from_table_unchecked(i.clone(), i.clone(), table)
        })
        .collect();
    Homotopy { stages }
}
