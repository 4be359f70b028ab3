//! Mapping spaces map(Y,Z), path spaces P_N Y = map(I_N, Y), based path
//! spaces, evaluation, induced maps and the exponential adjunction.
//!
//! Two maps f, g: Y → Z are adjacent (f ≈₁ g) when f(y) ∼ g(y') for every
//! pair of adjacent points y ∼ y', including y = y'. Mapping spaces are never
//! built eagerly; everything works from this predicate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{interval, product, DigitalImage, Point};
use crate::maps::{compose, DigitalMap};
use crate::search::Extensions;
use crate::subdivision::projection_map;

pub const DEFAULT_MAX_MAPS: usize = 10_000_000;

/// Enumeration cap: `DIGITOP_MAX_MAPS` if set, else ten million.
pub fn max_maps() -> usize {
    std::env::var("DIGITOP_MAX_MAPS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_MAPS)
}

pub(crate) fn tables_adjacent(domain: &DigitalImage, codomain: &DigitalImage, f: &[u32], g: &[u32]) -> bool {
    let nb = domain.neighborhoods();
    (0..domain.len()).all(|i| nb[i].iter().all(|&j| codomain.are_adjacent(f[i] as usize, g[j as usize] as usize)))
}

/// f ≈₁ g.
pub fn maps_adjacent(f: &DigitalMap, g: &DigitalMap) -> Result<bool> {
    if !f.same_signature(g) {
        return Err(Error::SignatureMismatch("maps have different domain or codomain".into()));
    }
    f.require_continuous("first map")?;
    g.require_continuous("second map")?;
    Ok(tables_adjacent(f.domain(), f.codomain(), f.table(), g.table()))
}

/// The space map(Y,Z) of continuous maps.
#[derive(Clone, Debug)]
pub struct MapSpace {
    pub source: DigitalImage,
    pub target: DigitalImage,
}

impl MapSpace {
    pub fn new(source: &DigitalImage, target: &DigitalImage) -> Self {
        MapSpace { source: source.clone(), target: target.clone() }
    }

    pub fn enumerate(&self, cap: Option<usize>) -> MapStream<'_> {
        MapStream {
            inner: Extensions::all(&self.source, &self.target),
            source: &self.source,
            target: &self.target,
            cap: cap.unwrap_or_else(max_maps),
            seen: 0,
            failed: false,
        }
    }

    pub fn contains(&self, f: &DigitalMap) -> bool {
        f.domain() == &self.source && f.codomain() == &self.target && f.is_continuous()
    }

    pub fn adjacent(&self, f: &DigitalMap, g: &DigitalMap) -> Result<bool> {
        maps_adjacent(f, g)
    }
}

/// Lexicographic stream of continuous maps. Yields one `CapExceeded` error
/// and stops if more than `cap` maps exist.
pub struct MapStream<'a> {
    inner: Extensions<'a>,
    source: &'a DigitalImage,
    target: &'a DigitalImage,
    cap: usize,
    seen: usize,
    failed: bool,
}

impl Iterator for MapStream<'_> {
    type Item = Result<DigitalMap>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let t = self.inner.next()?;
        self.seen += 1;
        if self.seen > self.cap {
            self.failed = true;
            return Some(Err(Error::CapExceeded { cap: self.cap }));
        }
        Some(Ok(DigitalMap::from_table_unchecked(self.source.clone(), self.target.clone(), t)))
    }
}

pub fn enumerate_maps(y: &DigitalImage, z: &DigitalImage, cap: Option<usize>) -> Result<Vec<DigitalMap>> {
    MapSpace::new(y, z).enumerate(cap).collect()
}

/// A path of length N, I_N → Y.
pub fn path_from_points(target: &DigitalImage, points: &[Point]) -> Result<DigitalMap> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("a path needs at least one point".into()));
    }
    let dom = interval(points.len() as u32 - 1);
    let table = points.iter().map(|p| target.require_index(p).map(|i| i as u32)).collect::<Result<Vec<_>>>()?;
    DigitalMap::from_table(dom, target.clone(), table)
}

/// Length N of a path, checking that the domain is I_N.
pub fn path_length(alpha: &DigitalMap) -> Result<u32> {
    let n = alpha.domain().len() as u32 - 1;
    if alpha.domain() != &interval(n) {
        return Err(Error::SignatureMismatch("a path must be defined on an interval I_N".into()));
    }
    Ok(n)
}

pub fn path_points(alpha: &DigitalMap) -> Vec<Point> {
    (0..alpha.domain().len()).map(|i| alpha.value(i).clone()).collect()
}

/// ev_t(α) = α(t) for t ∈ {0, N}.
pub fn eval_at(alpha: &DigitalMap, t: u32) -> Result<Point> {
    let n = path_length(alpha)?;
    if t != 0 && t != n {
        return Err(Error::InvalidParameter(format!("evaluation time {t} is not an endpoint of I_{n}")));
    }
    Ok(alpha.value(t as usize).clone())
}

/// π(α) = (α(0), α(N)).
pub fn endpoints(alpha: &DigitalMap) -> Result<(Point, Point)> {
    let n = path_length(alpha)?;
    Ok((alpha.value(0).clone(), alpha.value(n as usize).clone()))
}

/// f*(g) = g ∘ f.
pub fn pullback(f: &DigitalMap, g: &DigitalMap) -> Result<DigitalMap> {
    f.require_continuous("pulled-back map")?;
    compose(g, f)
}

/// f_*(g) = f ∘ g.
pub fn pushforward(f: &DigitalMap, g: &DigitalMap) -> Result<DigitalMap> {
    f.require_continuous("pushed-forward map")?;
    compose(f, g)
}

/// q(t) = min(t, M): I_N → I_M.
pub fn trivial_extension_map(m: u32, n: u32) -> Result<DigitalMap> {
    if n < m {
        return Err(Error::InvalidParameter(format!("cannot extend a path of length {m} to length {n}")));
    }
    DigitalMap::from_fn(&interval(n), &interval(m), |p| Point::new(vec![p.coords()[0].min(m as i64)]))
}

/// q*(α): the path α followed by a pause at its end, of total length N.
pub fn trivial_extension(alpha: &DigitalMap, n: u32) -> Result<DigitalMap> {
    let m = path_length(alpha)?;
    pullback(&trivial_extension_map(m, n)?, alpha)
}

/// (ρ_l)*(α): P_N Y → P_{lN+l−1} Y.
pub fn refine_path(alpha: &DigitalMap, l: u32) -> Result<DigitalMap> {
    let n = path_length(alpha)?;
    pullback(&projection_map(&interval(n), l)?, alpha)
}

/// A function X → map(Y,Z), stored by its values. Values need not be continuous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFamily {
    pub source: DigitalImage,
    pub fiber: DigitalImage,
    pub target: DigitalImage,
    pub values: Vec<Vec<u32>>,
}

impl MapFamily {
    pub fn value(&self, i: usize) -> DigitalMap {
        DigitalMap::from_table_unchecked(self.fiber.clone(), self.target.clone(), self.values[i].clone())
    }

    /// Continuity in the sense of the mapping-space adjacency: G(x) ≈₁ G(x')
    /// whenever x ∼ x'. Taking x = x' forces every value to be continuous.
    pub fn is_continuous(&self) -> bool {
        let nb = self.source.neighborhoods();
        (0..self.source.len()).all(|i| {
            nb[i].iter().filter(|&&j| j as usize >= i).all(|&j| {
                tables_adjacent(&self.fiber, &self.target, &self.values[i], &self.values[j as usize])
            })
        })
    }
}

/// curry(F)(x)(y) = F(x,y) for F on X×Y, given the factors X and Y.
pub fn curry(f: &DigitalMap, x: &DigitalImage, y: &DigitalImage) -> Result<MapFamily> {
    if f.domain() != &product(x, y) {
        return Err(Error::SignatureMismatch("domain is not the product of the given factors".into()));
    }
    let m = y.len();
    let values = f.table().chunks(m).map(|c| c.to_vec()).collect();
    Ok(MapFamily { source: x.clone(), fiber: y.clone(), target: f.codomain().clone(), values })
}

pub fn uncurry(g: &MapFamily) -> DigitalMap {
    let table = g.values.concat();
    DigitalMap::from_table_unchecked(product(&g.source, &g.fiber), g.target.clone(), table)
}

/// The based path space 𝒫_N Y: paths of length N starting at y₀.
#[derive(Clone, Debug)]
pub struct BasedPathSpace {
    pub target: DigitalImage,
    pub basepoint: Point,
    pub length: u32,
}

impl BasedPathSpace {
    pub fn enumerate(&self, cap: Option<usize>) -> Result<Vec<DigitalMap>> {
        let dom = interval(self.length);
        let b = self.target.require_index(&self.basepoint)? as u32;
        let mut allowed = vec![None; dom.len()];
        allowed[0] = Some(vec![b]);
        let cap = cap.unwrap_or_else(max_maps);
        let mut out = Vec::new();
        for t in Extensions::new(&dom, &self.target, allowed, false) {
            if out.len() == cap {
                return Err(Error::CapExceeded { cap });
            }
            out.push(DigitalMap::from_table_unchecked(dom.clone(), self.target.clone(), t));
        }
        Ok(out)
    }

    pub fn contains(&self, gamma: &DigitalMap) -> bool {
        matches!(path_length(gamma), Ok(n) if n == self.length)
            && gamma.codomain() == &self.target
            && gamma.is_continuous()
            && gamma.value(0) == &self.basepoint
    }

    pub fn ev_end(&self, gamma: &DigitalMap) -> Result<Point> {
        eval_at(gamma, self.length)
    }
}

pub fn based_paths(y: &DigitalImage, y0: &Point, n: u32) -> Result<BasedPathSpace> {
    y.require_index(y0)?;
    if n == 0 {
        return Err(Error::InvalidParameter("based paths need length at least 1".into()));
    }
    Ok(BasedPathSpace { target: y.clone(), basepoint: y0.clone(), length: n })
}

/// JSON form of a path: {"length": N, "points": [...]}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFile {
    pub length: u32,
    pub points: Vec<Point>,
}

impl PathFile {
    pub fn from_path(alpha: &DigitalMap) -> Result<Self> {
        Ok(PathFile { length: path_length(alpha)?, points: path_points(alpha) })
    }

    pub fn to_path(&self, target: &DigitalImage) -> Result<DigitalMap> {
        if self.points.len() != self.length as usize + 1 {
            return Err(Error::InvalidParameter(format!(
                "a path of length {} needs {} points, found {}",
                self.length,
                self.length + 1,
                self.points.len()
            )));
        }
        path_from_points(target, &self.points)
    }
}
