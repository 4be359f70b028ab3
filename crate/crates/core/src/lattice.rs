//! Points of ℤⁿ and digital images.
//!
//! Two points are adjacent when every coordinate differs by at most one.
//! The relation is reflexive, so a point is adjacent to itself. Images keep
//! their points in lexicographic order and cache closed neighborhoods, which
//! every search in the crate leans on.

use std::borrow::Borrow;
use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<i64>);

impl Point {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Point(coords.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Coordinate concatenation, the way products embed.
    pub fn concat(&self, other: &Point) -> Point {
        let mut v = Vec::with_capacity(self.dim() + other.dim());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Point(v)
    }

    pub fn split_at(&self, mid: usize) -> (Point, Point) {
        let (a, b) = self.0.split_at(mid);
        (Point(a.to_vec()), Point(b.to_vec()))
    }

    pub fn is_adjacent(&self, other: &Point) -> bool {
        self.dim() == other.dim() && coords_adjacent(&self.0, &other.0)
    }
}

impl Borrow<[i64]> for Point {
    fn borrow(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Point {
    fn from(v: Vec<i64>) -> Self {
        Point(v)
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(v: [i64; N]) -> Self {
        Point(v.to_vec())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn coords_adjacent(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1)
}

/// Adjacency of two lattice points.
pub fn adjacent(x: &Point, y: &Point) -> Result<bool> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    Ok(coords_adjacent(&x.0, &y.0))
}

/// A finite, non-empty subset of ℤⁿ. Cloning is cheap.
#[derive(Clone)]
pub struct DigitalImage(Arc<ImageData>);

/// Closed neighborhoods of all points, stored back to back.
pub(crate) struct Neighborhoods {
    start: Vec<usize>,
    flat: Vec<u32>,
}

impl std::ops::Index<usize> for Neighborhoods {
    type Output = [u32];

    fn index(&self, i: usize) -> &[u32] {
        &self.flat[self.start[i]..self.start[i + 1]]
    }
}

/// Point lookup. Images that fill their bounding box are indexed by
/// arithmetic, since lexicographic order is then mixed-radix order.
enum Index {
    Box { lo: Vec<i64>, extent: Vec<i64> },
    Map(FxHashMap<Point, u32>),
}

impl Index {
    fn build(dim: usize, points: &[Point]) -> Index {
        let mut lo = vec![i64::MAX; dim];
        let mut hi = vec![i64::MIN; dim];
        for p in points {
            for (d, &c) in p.0.iter().enumerate() {
                lo[d] = lo[d].min(c);
                hi[d] = hi[d].max(c);
            }
        }
        let extent: Vec<i64> = lo.iter().zip(&hi).map(|(l, h)| h - l + 1).collect();
        let volume = extent.iter().try_fold(1u128, |acc, &e| acc.checked_mul(e as u128));
        if volume == Some(points.len() as u128) {
            Index::Box { lo, extent }
        } else {
            Index::Map(points.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect())
        }
    }

    fn get(&self, c: &[i64]) -> Option<usize> {
        match self {
            Index::Box { lo, extent } => {
                if c.len() != lo.len() {
                    return None;
                }
                let mut i = 0i64;
                for ((&x, &l), &e) in c.iter().zip(lo).zip(extent) {
                    let off = x - l;
                    if off < 0 || off >= e {
                        return None;
                    }
                    i = i * e + off;
                }
                Some(i as usize)
            }
            Index::Map(m) => m.get(c).map(|&i| i as usize),
        }
    }
}

struct ImageData {
    dim: usize,
    points: Vec<Point>,
    index: Index,
    neighborhoods: OnceLock<Neighborhoods>,
}

impl DigitalImage {
    /// Builds an image, rejecting duplicates. Points are re-sorted.
    pub fn new(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut points: Vec<Point> = points.into_iter().collect();
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].to_string()));
        }
        Self::from_sorted(dim, points)
    }

    /// Builds an image from a point collection that may repeat points.
    pub fn from_union(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut points: Vec<Point> = points.into_iter().collect();
        points.sort_unstable();
        points.dedup();
        Self::from_sorted(dim, points)
    }

    pub(crate) fn from_sorted(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if points.is_empty() {
            return Err(Error::EmptyImage);
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        let index = Index::build(dim, &points);
        Ok(DigitalImage(Arc::new(ImageData { dim, points, index, neighborhoods: OnceLock::new() })))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn len(&self) -> usize {
        self.0.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Point] {
        &self.0.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.0.points[i]
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.index_of_coords(&p.0)
    }

    pub fn index_of_coords(&self, c: &[i64]) -> Option<usize> {
        self.0.index.get(c)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index_of(p).is_some()
    }

    pub(crate) fn require_index(&self, p: &Point) -> Result<usize> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() });
        }
        self.index_of(p).ok_or_else(|| Error::PointNotInImage(p.to_string()))
    }

    /// Closed neighborhood of the `i`-th point, as sorted point indices.
    pub fn neighborhood(&self, i: usize) -> &[u32] {
        &self.neighborhoods()[i]
    }

    pub(crate) fn neighborhoods(&self) -> &Neighborhoods {
        self.0.neighborhoods.get_or_init(|| self.compute_neighborhoods())
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        self.neighborhood(i).binary_search(&(j as u32)).is_ok()
    }

    fn compute_neighborhoods(&self) -> Neighborhoods {
        if let Index::Box { lo, extent } = &self.0.index {
            return self.box_neighborhoods(lo, extent);
        }
        let n = self.len();
        let d = self.dim();
        let offsets = 3usize.checked_pow(d as u32).unwrap_or(usize::MAX);
        let probe = |i: usize| -> Vec<u32> {
            let p = &self.0.points[i].0;
            let mut out = Vec::new();
            if offsets < n {
                let mut q = p.clone();
                let mut digits = vec![0u8; d];
                'outer: loop {
                    for (k, &dg) in digits.iter().enumerate() {
                        q[k] = p[k] + dg as i64 - 1;
                    }
                    if let Some(j) = self.index_of_coords(&q) {
                        out.push(j as u32);
                    }
                    for dg in digits.iter_mut() {
                        if *dg < 2 {
                            *dg += 1;
                            continue 'outer;
                        }
                        *dg = 0;
                    }
                    break;
                }
                out.sort_unstable();
            } else {
                for (j, q) in self.0.points.iter().enumerate() {
                    if coords_adjacent(p, &q.0) {
                        out.push(j as u32);
                    }
                }
            }
            out
        };
        let lists: Vec<Vec<u32>> =
            if n > 4096 { (0..n).into_par_iter().map(probe).collect() } else { (0..n).map(probe).collect() };
        let mut start = Vec::with_capacity(n + 1);
        let mut flat = Vec::new();
        start.push(0);
        for l in lists {
            flat.extend(l);
            start.push(flat.len());
        }
        Neighborhoods { start, flat }
    }

    /// Neighborhoods in a full box. Neighbors are visited in lexicographic
    /// order of their offsets, which is index order, so no sorting is needed.
    fn box_neighborhoods(&self, lo: &[i64], extent: &[i64]) -> Neighborhoods {
        let d = lo.len();
        let n = self.len();
        let mut stride = vec![1i64; d];
        for k in (0..d.saturating_sub(1)).rev() {
            stride[k] = stride[k + 1] * extent[k + 1];
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut flat = Vec::with_capacity(n * 3usize.pow(d as u32).min(64));
        start.push(0);
        let (mut from, mut to, mut e) = (vec![0i64; d], vec![0i64; d], vec![0i64; d]);
        for (i, p) in self.0.points.iter().enumerate() {
            for k in 0..d {
                let off = p.0[k] - lo[k];
                from[k] = if off > 0 { -1 } else { 0 };
                to[k] = if off + 1 < extent[k] { 1 } else { 0 };
            }
            e.copy_from_slice(&from);
            'outer: loop {
                let delta: i64 = e.iter().zip(&stride).map(|(a, b)| a * b).sum();
                flat.push((i as i64 + delta) as u32);
                for k in (0..d).rev() {
                    if e[k] < to[k] {
                        e[k] += 1;
                        continue 'outer;
                    }
                    e[k] = from[k];
                }
                break;
            }
            start.push(flat.len());
        }
        Neighborhoods { start, flat }
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected components as lists of point indices, in order of their least point.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for &j in self.neighborhood(i) {
                    let j = j as usize;
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(j);
                        queue.push_back(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_subset_of(&self, other: &DigitalImage) -> bool {
        self.dim() == other.dim() && self.points().iter().all(|p| other.contains(p))
    }

    /// The sub-image of points satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Point) -> bool) -> Result<DigitalImage> {
        let pts: Vec<Point> = self.points().iter().filter(|p| keep(p)).cloned().collect();
        DigitalImage::from_sorted(self.dim(), pts)
    }

    pub fn ptr_eq(&self, other: &DigitalImage) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl PartialEq for DigitalImage {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || (self.dim() == other.dim() && self.points() == other.points())
    }
}

impl Eq for DigitalImage {}

impl fmt::Debug for DigitalImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitalImage(dim {}, ", self.dim())?;
        f.debug_set().entries(self.points()).finish()?;
        f.write_str(")")
    }
}

#[derive(Serialize, Deserialize)]
struct ImageFile {
    dim: usize,
    points: Vec<Point>,
}

impl Serialize for DigitalImage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ImageFile { dim: self.dim(), points: self.points().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DigitalImage {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = ImageFile::deserialize(d)?;
        DigitalImage::new(file.dim, file.points).map_err(serde::de::Error::custom)
    }
}

/// The digital interval I_N = {0, …, N}.
pub fn interval(n: u32) -> DigitalImage {
    let pts = (0..=n as i64).map(|i| Point(vec![i])).collect();
    DigitalImage::from_sorted(1, pts).expect("interval is well formed")
}

/// A one-point image at the origin of ℤ¹.
pub fn point_image() -> DigitalImage {
    interval(0)
}

/// Product by coordinate concatenation. The point (x_i, y_j) sits at index i·|Y| + j.
pub fn product(x: &DigitalImage, y: &DigitalImage) -> DigitalImage {
    let mut pts = Vec::with_capacity(x.len() * y.len());
    for p in x.points() {
        for q in y.points() {
            pts.push(p.concat(q));
        }
    }
    DigitalImage::from_sorted(x.dim() + y.dim(), pts).expect("product is well formed")
}

/// The d-fold power (I_N)^d.
pub fn cube(n: u32, d: usize) -> Result<DigitalImage> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let i = interval(n);
    let mut out = i.clone();
    for _ in 1..d {
        out = product(&out, &i);
    }
    Ok(out)
}
