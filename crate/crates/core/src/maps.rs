//! Maps between digital images, stored as dense tables over the domain's
//! canonical point order.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{product, DigitalImage, Point};
use crate::verdict::{Bounds, Refutation, Verdict};

/// A total function between digital images. It need not be continuous;
/// operations that need continuity check [`DigitalMap::is_continuous`].
#[derive(Clone)]
pub struct DigitalMap {
    domain: DigitalImage,
    codomain: DigitalImage,
    table: Vec<u32>,
    continuous: OnceLock<bool>,
}

impl DigitalMap {
    pub fn from_table(domain: DigitalImage, codomain: DigitalImage, table: Vec<u32>) -> Result<Self> {
        if table.len() != domain.len() {
            return Err(Error::SignatureMismatch(format!(
                "table has {} entries for a domain of {} points",
                table.len(),
                domain.len()
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v as usize >= codomain.len()) {
            return Err(Error::InvalidParameter(format!("table entry {v} out of range")));
        }
        Ok(Self::from_table_unchecked(domain, codomain, table))
    }

    pub(crate) fn from_table_unchecked(domain: DigitalImage, codomain: DigitalImage, table: Vec<u32>) -> Self {
        DigitalMap { domain, codomain, table, continuous: OnceLock::new() }
    }

    /// Builds a map from a coordinate formula.
    pub fn from_fn(domain: &DigitalImage, codomain: &DigitalImage, f: impl Fn(&Point) -> Point) -> Result<Self> {
        let table = domain
            .points()
            .iter()
            .map(|p| codomain.require_index(&f(p)).map(|i| i as u32))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_table_unchecked(domain.clone(), codomain.clone(), table))
    }

    /// Builds a map from explicit (source, target) pairs covering the domain exactly once.
    pub fn from_assignment(
        domain: &DigitalImage,
        codomain: &DigitalImage,
        pairs: impl IntoIterator<Item = (Point, Point)>,
    ) -> Result<Self> {
        let mut table = vec![u32::MAX; domain.len()];
        for (p, q) in pairs {
            let i = domain.require_index(&p)?;
            if table[i] != u32::MAX {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
            table[i] = codomain.require_index(&q)? as u32;
        }
        if let Some(i) = table.iter().position(|&v| v == u32::MAX) {
            return Err(Error::SignatureMismatch(format!("no value given for {}", domain.point(i))));
        }
        Ok(Self::from_table_unchecked(domain.clone(), codomain.clone(), table))
    }

    pub fn identity(x: &DigitalImage) -> Self {
        Self::from_table_unchecked(x.clone(), x.clone(), (0..x.len() as u32).collect())
    }

    /// The inclusion of `a` into `x`; fails unless every point of `a` lies in `x`.
    pub fn inclusion(a: &DigitalImage, x: &DigitalImage) -> Result<Self> {
        if !a.is_subset_of(x) {
            return Err(Error::NotInclusion("domain is not a subset of the codomain".into()));
        }
        Self::from_fn(a, x, |p| p.clone())
    }

    pub fn domain(&self) -> &DigitalImage {
        &self.domain
    }

    pub fn codomain(&self) -> &DigitalImage {
        &self.codomain
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn into_table(self) -> Vec<u32> {
        self.table
    }

    /// Value at the `i`-th domain point, as a codomain index.
    pub fn index_at(&self, i: usize) -> usize {
        self.table[i] as usize
    }

    /// Value at the `i`-th domain point.
    pub fn value(&self, i: usize) -> &Point {
        self.codomain.point(self.table[i] as usize)
    }

    pub fn apply(&self, p: &Point) -> Result<&Point> {
        let i = self.domain.require_index(p)?;
        Ok(self.value(i))
    }

    pub fn is_continuous(&self) -> bool {
        *self.continuous.get_or_init(|| table_is_continuous(&self.domain, &self.codomain, &self.table))
    }

    pub fn require_continuous(&self, what: &str) -> Result<()> {
        if self.is_continuous() {
            Ok(())
        } else {
            Err(Error::NotContinuous(what.to_string()))
        }
    }

    /// True when every point maps to itself in the ambient lattice.
    pub fn is_inclusion(&self) -> bool {
        self.domain.dim() == self.codomain.dim() && (0..self.table.len()).all(|i| self.value(i) == self.domain.point(i))
    }

    pub fn is_constant(&self) -> bool {
        self.table.windows(2).all(|w| w[0] == w[1])
    }

    pub fn same_signature(&self, other: &DigitalMap) -> bool {
        self.domain == other.domain && self.codomain == other.codomain
    }
}

impl PartialEq for DigitalMap {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.same_signature(other)
    }
}

impl Eq for DigitalMap {}

impl fmt::Debug for DigitalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DigitalMap {")?;
        for i in 0..self.table.len() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {} -> {}", self.domain.point(i), self.value(i))?;
        }
        f.write_str(" }")
    }
}

pub(crate) fn table_is_continuous(domain: &DigitalImage, codomain: &DigitalImage, table: &[u32]) -> bool {
    let nb = domain.neighborhoods();
    (0..domain.len()).all(|i| {
        nb[i]
            .iter()
            .filter(|&&j| (j as usize) > i)
            .all(|&j| codomain.are_adjacent(table[i] as usize, table[j as usize] as usize))
    })
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    domain: DigitalImage,
    codomain: DigitalImage,
    assignment: Vec<(Point, Point)>,
}

impl Serialize for DigitalMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let assignment = (0..self.table.len()).map(|i| (self.domain.point(i).clone(), self.value(i).clone())).collect();
        MapFile { domain: self.domain.clone(), codomain: self.codomain.clone(), assignment }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DigitalMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = MapFile::deserialize(d)?;
        DigitalMap::from_assignment(&f.domain, &f.codomain, f.assignment).map_err(serde::de::Error::custom)
    }
}

/// g ∘ f.
pub fn compose(g: &DigitalMap, f: &DigitalMap) -> Result<DigitalMap> {
    if f.codomain != g.domain {
        return Err(Error::SignatureMismatch("codomain of f differs from domain of g".into()));
    }
    let table = f.table.iter().map(|&v| g.table[v as usize]).collect();
    Ok(DigitalMap::from_table_unchecked(f.domain.clone(), g.codomain.clone(), table))
}

/// f1 × f2 on the product images.
pub fn product_map(f1: &DigitalMap, f2: &DigitalMap) -> DigitalMap {
    let domain = product(&f1.domain, &f2.domain);
    let codomain = product(&f1.codomain, &f2.codomain);
    let m = f2.codomain.len() as u32;
    let mut table = Vec::with_capacity(domain.len());
    for &a in &f1.table {
        for &b in &f2.table {
            table.push(a * m + b);
        }
    }
    DigitalMap::from_table_unchecked(domain, codomain, table)
}

/// Δ(x) = (x, x).
pub fn diagonal(x: &DigitalImage) -> DigitalMap {
    let n = x.len() as u32;
    let table = (0..n).map(|i| i * n + i).collect();
    DigitalMap::from_table_unchecked(x.clone(), product(x, x), table)
}

pub fn constant_map(x: &DigitalImage, y: &Point, target: &DigitalImage) -> Result<DigitalMap> {
    let v = target.require_index(y)? as u32;
    Ok(DigitalMap::from_table_unchecked(x.clone(), target.clone(), vec![v; x.len()]))
}

/// Projection X×Y → X, given the factors.
pub fn projection_first(x: &DigitalImage, y: &DigitalImage) -> DigitalMap {
    let m = y.len() as u32;
    let table = (0..(x.len() as u32 * m)).map(|i| i / m).collect();
    DigitalMap::from_table_unchecked(product(x, y), x.clone(), table)
}

/// Projection X×Y → Y, given the factors.
pub fn projection_second(x: &DigitalImage, y: &DigitalImage) -> DigitalMap {
    let m = y.len() as u32;
    let table = (0..(x.len() as u32 * m)).map(|i| i % m).collect();
    DigitalMap::from_table_unchecked(product(x, y), y.clone(), table)
}

/// Searches for an isomorphism X → Y: a bijection preserving and reflecting adjacency.
/// Candidates are tried in canonical order, so the first witness is the
/// lexicographically least table.
pub fn find_isomorphism(x: &DigitalImage, y: &DigitalImage) -> Verdict<DigitalMap> {
    let mut bounds = Bounds::default();
    if x.len() != y.len() {
        return Verdict::no(Refutation::CardinalityMismatch { left: x.len(), right: y.len() }, bounds);
    }
    let n = x.len();
    let deg = |img: &DigitalImage, i: usize| img.neighborhood(i).len();
    let mut dx: Vec<usize> = (0..n).map(|i| deg(x, i)).collect();
    let mut dy: Vec<usize> = (0..n).map(|i| deg(y, i)).collect();
    let (sx, sy) = (dx.clone(), dy.clone());
    dx.sort_unstable();
    dy.sort_unstable();
    if dx != dy {
        return Verdict::no(Refutation::SearchExhausted { explored: 0 }, bounds);
    }

    let mut table = vec![u32::MAX; n];
    let mut used = vec![false; n];
    let mut explored = 0usize;

    fn go(
        i: usize,
        x: &DigitalImage,
        y: &DigitalImage,
        sx: &[usize],
        sy: &[usize],
        table: &mut Vec<u32>,
        used: &mut Vec<bool>,
        explored: &mut usize,
    ) -> bool {
        if i == table.len() {
            return true;
        }
        for c in 0..y.len() {
            if used[c] || sy[c] != sx[i] {
                continue;
            }
            *explored += 1;
            let ok = (0..i).all(|j| x.are_adjacent(i, j) == y.are_adjacent(c, table[j] as usize));
            if !ok {
                continue;
            }
            table[i] = c as u32;
            used[c] = true;
            if go(i + 1, x, y, sx, sy, table, used, explored) {
                return true;
            }
            used[c] = false;
        }
        table[i] = u32::MAX;
        false
    }

    let found = go(0, x, y, &sx, &sy, &mut table, &mut used, &mut explored);
    bounds.explored = explored;
    if found {
        Verdict::yes(DigitalMap::from_table_unchecked(x.clone(), y.clone(), table), bounds)
    } else {
        Verdict::no(Refutation::SearchExhausted { explored }, bounds)
    }
}

/// The inverse of a bijective map.
pub fn inverse(f: &DigitalMap) -> Result<DigitalMap> {
    let mut inv = vec![u32::MAX; f.codomain.len()];
    if f.domain.len() != f.codomain.len() {
        return Err(Error::InvalidParameter("map is not a bijection".into()));
    }
    for (i, &v) in f.table.iter().enumerate() {
        if inv[v as usize] != u32::MAX {
            return Err(Error::InvalidParameter("map is not a bijection".into()));
        }
        inv[v as usize] = i as u32;
    }
    Ok(DigitalMap::from_table_unchecked(f.codomain.clone(), f.domain.clone(), inv))
}
