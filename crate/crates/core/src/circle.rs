//! Digital circles and spheres, the covering p: ℤ → D, path and homotopy
//! lifting, and winding numbers.
//!
//! The Diamond D = {(1,0), (0,1), (−1,0), (0,−1)} carries the cyclic index
//! 0, 1, 2, 3 in that order and p(n) is the point of index n mod 4. A step
//! between adjacent points of D moves the index by −1, 0 or 1, so a path in
//! D lifts one step at a time.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::path_length;
use crate::lattice::{interval, product, DigitalImage, Point};
use crate::maps::{find_isomorphism, inverse, DigitalMap};
use crate::subdivision::{rho_point, subdivide_image};
use crate::verdict::{ContractibilityObstruction, Obstruction};

const DIAMOND: [[i64; 2]; 4] = [[1, 0], [0, 1], [-1, 0], [0, -1]];

pub fn diamond() -> DigitalImage {
    DigitalImage::new(2, DIAMOND.map(Point::from)).expect("fixed point set")
}

/// The eight-point circle C.
pub fn circle8() -> DigitalImage {
    let pts = [[2, 0], [1, 1], [0, 2], [-1, 1], [-2, 0], [-1, -1], [0, -2], [1, -1]];
    DigitalImage::new(2, pts.map(Point::from)).expect("fixed point set")
}

/// The digital n-sphere: the 2n+2 points ±e_i of ℤ^{n+1}.
pub fn sphere(n: usize) -> Result<DigitalImage> {
    if n == 0 {
        return Err(Error::InvalidParameter("sphere dimension must be at least 1".into()));
    }
    let d = n + 1;
    let mut pts = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1, -1] {
            let mut c = vec![0; d];
            c[i] = s;
            pts.push(Point::new(c));
        }
    }
    DigitalImage::new(d, pts)
}

/// p(n): the point of D with cyclic index n mod 4.
pub fn cover_point(n: i64) -> Point {
    Point::from(DIAMOND[n.rem_euclid(4) as usize])
}

/// Cyclic index of a point of D.
pub fn cyclic_index(p: &Point) -> Option<i64> {
    DIAMOND.iter().position(|q| q[..] == *p.coords()).map(|i| i as i64)
}

fn require_index(p: &Point) -> Result<i64> {
    cyclic_index(p).ok_or_else(|| Error::PointNotInImage(format!("{p} is not a point of the Diamond")))
}

/// The lift step between two adjacent points of D.
fn step(a: i64, b: i64) -> Result<i64> {
    match (b - a).rem_euclid(4) {
        0 => Ok(0),
        1 => Ok(1),
        3 => Ok(-1),
        _ => Err(Error::NotContinuous("path jumps between opposite points of the Diamond".into())),
    }
}

fn diamond_path_indices(alpha: &DigitalMap) -> Result<Vec<i64>> {
    path_length(alpha)?;
    (0..alpha.domain().len()).map(|i| require_index(alpha.value(i))).collect()
}

fn lift_indices(idx: &[i64], start: i64) -> Result<Vec<i64>> {
    if start.rem_euclid(4) != idx[0] {
        return Err(Error::InvalidParameter(format!(
            "start {start} projects to {}, not to the first point of the path",
            cover_point(start)
        )));
    }
    let mut out = Vec::with_capacity(idx.len());
    out.push(start);
    for w in idx.windows(2) {
        let last = *out.last().unwrap();
        out.push(last + step(w[0], w[1])?);
    }
    Ok(out)
}

/// A lift through p, on a window [−L, L] of ℤ. A path lift has one row;
/// a homotopy lift has one row per time value, `rows[t][s]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCertificate {
    pub start: i64,
    pub window: i64,
    pub rows: Vec<Vec<i64>>,
}

impl LiftCertificate {
    /// The lifted path (the first row).
    pub fn path(&self) -> &[i64] {
        &self.rows[0]
    }

    fn in_window(&self) -> bool {
        self.rows.iter().flatten().all(|v| v.abs() <= self.window)
    }

    /// Rechecks a path lift: it starts at `start`, moves by at most one, stays in the window and projects to α.
    pub fn verify_path(&self, alpha: &DigitalMap) -> bool {
        let Ok(idx) = diamond_path_indices(alpha) else { return false };
        let row = self.path();
        self.rows.len() == 1
            && row.len() == idx.len()
            && row[0] == self.start
            && self.in_window()
            && row.windows(2).all(|w| (w[0] - w[1]).abs() <= 1)
            && row.iter().zip(&idx).all(|(v, i)| v.rem_euclid(4) == *i)
    }

    /// Rechecks a homotopy lift against H and the initial lift.
    pub fn verify_homotopy(&self, h: &DigitalMap, initial: &LiftCertificate) -> bool {
        let Ok((n, m)) = grid_shape(h) else { return false };
        if self.rows.len() != m + 1 || self.rows.iter().any(|r| r.len() != n + 1) || self.rows[0] != initial.rows[0] {
            return false;
        }
        let projects = (0..=n).all(|s| {
            (0..=m).all(|t| Some(self.rows[t][s].rem_euclid(4)) == cyclic_index(h.value(s * (m + 1) + t)))
        });
        let continuous = (0..=m).all(|t| {
            (0..=n).all(|s| {
                (t.saturating_sub(1)..=(t + 1).min(m)).all(|t2| {
                    (s.saturating_sub(1)..=(s + 1).min(n)).all(|s2| (self.rows[t][s] - self.rows[t2][s2]).abs() <= 1)
                })
            })
        });
        projects && continuous && self.in_window()
    }
}

/// The unique lift of a path α: I_N → D with ᾱ(0) = start.
pub fn lift_path(alpha: &DigitalMap, start: i64) -> Result<LiftCertificate> {
    let idx = diamond_path_indices(alpha)?;
    let row = lift_indices(&idx, start)?;
    let n = idx.len() as i64 - 1;
    Ok(LiftCertificate { start, window: start.abs() + n, rows: vec![row] })
}

/// A loop in D: a path whose ends agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondLoop {
    path: DigitalMap,
}

impl DiamondLoop {
    pub fn new(path: DigitalMap) -> Result<Self> {
        let idx = diamond_path_indices(&path)?;
        path.require_continuous("loop")?;
        if idx.first() != idx.last() {
            return Err(Error::NotALoop("the path does not end where it starts".into()));
        }
        Ok(DiamondLoop { path })
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        Self::new(crate::funcspace::path_from_points(&diamond(), points)?)
    }

    pub fn path(&self) -> &DigitalMap {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.path.domain().len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// w(α) = ᾱ(N) − ᾱ(0), a multiple of 4 for every loop.
pub fn winding_number(l: &DiamondLoop) -> Result<i64> {
    let idx = diamond_path_indices(&l.path)?;
    let row = lift_indices(&idx, idx[0])?;
    Ok(row[row.len() - 1] - row[0])
}

/// The winding number counted in full turns, w(α)/4.
pub fn winding_index(l: &DiamondLoop) -> Result<i64> {
    Ok(winding_number(l)? / 4)
}

fn grid_shape(h: &DigitalMap) -> Result<(usize, usize)> {
    let dom = h.domain();
    if dom.dim() != 2 {
        return Err(Error::SignatureMismatch("a homotopy of paths lives on I_N × I_M".into()));
    }
    let last = dom.point(dom.len() - 1).coords();
    let (n, m) = (last[0].max(0) as u32, last[1].max(0) as u32);
    if dom != &product(&interval(n), &interval(m)) {
        return Err(Error::SignatureMismatch("a homotopy of paths lives on I_N × I_M".into()));
    }
    Ok((n as usize, m as usize))
}

/// Lifts H: I_N × I_M → D given a lift of H(−,0). The column H(0,−) is lifted
/// first, then each row H(−,t) from its lifted first entry.
pub fn lift_homotopy(h: &DigitalMap, initial: &LiftCertificate) -> Result<LiftCertificate> {
    let (n, m) = grid_shape(h)?;
    h.require_continuous("homotopy to lift")?;
    if initial.rows.len() != 1 || initial.path().len() != n + 1 {
        return Err(Error::InvalidParameter("initial lift must be a path lift of length N".into()));
    }
    let at = |s: usize, t: usize| require_index(h.value(s * (m + 1) + t));
    for s in 0..=n {
        if initial.path()[s].rem_euclid(4) != at(s, 0)? {
            return Err(Error::DiagramMismatch("initial lift does not cover H(−,0)".into()));
        }
    }
    let column: Vec<i64> = (0..=m).map(|t| at(0, t)).collect::<Result<_>>()?;
    let firsts = lift_indices(&column, initial.start)?;
    let mut rows = Vec::with_capacity(m + 1);
    for (t, &f) in firsts.iter().enumerate() {
        let row: Vec<i64> = (0..=n).map(|s| at(s, t)).collect::<Result<_>>()?;
        rows.push(lift_indices(&row, f)?);
    }
    let cert = LiftCertificate { start: initial.start, window: initial.start.abs() + (n + m) as i64, rows };
    if !cert.verify_homotopy(h, initial) {
        return Err(Error::Internal("lifted homotopy failed verification".into()));
    }
    Ok(cert)
}

/// Some(obstruction) when two loops of equal length have different winding numbers.
pub fn winding_obstruction(f: &DiamondLoop, g: &DiamondLoop) -> Result<Option<Obstruction>> {
    if f.len() != g.len() {
        return Err(Error::SignatureMismatch("loops have different lengths".into()));
    }
    let (a, b) = (winding_number(f)?, winding_number(g)?);
    Ok((a != b).then(|| Obstruction {
        name: "winding".into(),
        detail: format!("winding numbers {a} and {b} differ, so the loops are not homotopic"),
        windings: vec![a, b],
    }))
}

/// A loop in S(X,k) whose projection runs once around X, for X isomorphic to D.
/// It passes through the fibers over the four points in cyclic order, taking
/// a shortest route across each pair of neighboring fibers.
pub fn winding_loop_in_subdivision(x: &DigitalImage, k: u32) -> Result<Option<(Vec<Point>, i64)>> {
    let Some(phi) = find_isomorphism(&diamond(), x).into_witness() else { return Ok(None) };
    let psi = inverse(&phi)?;
    let s = subdivide_image(x, k.max(1))?;
    let corner = |i: usize| phi.apply(&cover_point(i as i64)).expect("D point").clone();
    let over = |p: &Point, i: usize| rho_point(p, k.max(1)) == corner(i);
    let start = s.points().iter().position(|p| over(p, 0)).expect("fibers are non-empty");
    let mut route = vec![start];
    // legs 0→1, 1→2, 2→3, 3→0, then back to the starting point inside fiber 0
    for leg in 0..5 {
        let (from, to) = (leg % 4, (leg + 1) % 4);
        let here = *route.last().unwrap();
        let allowed = |p: &Point| if leg == 4 { over(p, 0) } else { over(p, from) || over(p, to) };
        let done = |i: usize| if leg == 4 { i == start } else { over(s.point(i), to) };
        let mut parent = vec![usize::MAX; s.len()];
        parent[here] = here;
        let mut queue = VecDeque::from([here]);
        let mut hit = if done(here) { Some(here) } else { None };
        while hit.is_none() {
            let Some(i) = queue.pop_front() else { break };
            for &j in s.neighborhood(i) {
                let j = j as usize;
                if parent[j] == usize::MAX && allowed(s.point(j)) {
                    parent[j] = i;
                    if done(j) {
                        hit = Some(j);
                        break;
                    }
                    queue.push_back(j);
                }
            }
        }
        let Some(mut j) = hit else { return Err(Error::Internal("subdivided fibers are not linked".into())) };
        let mut leg_pts = Vec::new();
        while j != here {
            leg_pts.push(j);
            j = parent[j];
        }
        route.extend(leg_pts.into_iter().rev());
    }
    let pts: Vec<Point> = route.iter().map(|&i| s.point(i).clone()).collect();
    let projected: Vec<Point> = pts
        .iter()
        .map(|p| psi.apply(&rho_point(p, k.max(1))).cloned())
        .collect::<Result<_>>()?;
    let l = DiamondLoop::from_points(&projected)?;
    Ok(Some((pts, winding_number(&l)?)))
}

/// The winding obstruction for images isomorphic to D: no subdivision of
/// such an image deforms to a point inside it, because a loop in S(X,k)
/// projects to a loop of nonzero winding, and a deformation of the
/// projection would carry that loop to a constant one.
#[derive(Clone, Copy, Debug)]
pub struct DiamondWinding {
    /// Subdivision factors for which the loop is constructed and checked.
    pub k_max: u32,
}

impl ContractibilityObstruction for DiamondWinding {
    fn name(&self) -> &'static str {
        "diamond-winding"
    }

    fn refute(&self, subset: &DigitalImage, space: &DigitalImage) -> Option<Obstruction> {
        if subset != space {
            return None;
        }
        let mut windings = Vec::new();
        for k in 1..=self.k_max.max(1) {
            match winding_loop_in_subdivision(space, k) {
                Ok(Some((_, w))) if w != 0 => windings.push(w),
                _ => return None,
            }
        }
        Some(Obstruction {
            name: self.name().into(),
            detail: format!(
                "for k = 1..={} a loop in S(X,k) projects to a loop of nonzero winding; \
                 a deformation of the projection to a constant would make it null-homotopic",
                self.k_max.max(1)
            ),
            windings,
        })
    }
}
