//! k-fold subdivision S(X,k) and the projection ρ_k.
//!
//! S(X,k) replaces each point x by the cubical block k·x + [0, k−1]ⁿ, and
//! ρ_k is floor division by k in every coordinate. Only inclusions are
//! subdivided as maps; a general map need not induce one.

use crate::error::{Error, Result};
use crate::lattice::{product, DigitalImage, Point};
use crate::maps::DigitalMap;

#[derive(Clone, Debug)]
pub struct Subdivision {
    base: DigitalImage,
    k: u32,
    image: DigitalImage,
    projection: DigitalMap,
}

impl Subdivision {
    pub fn base(&self) -> &DigitalImage {
        &self.base
    }

    pub fn factor(&self) -> u32 {
        self.k
    }

    pub fn image(&self) -> &DigitalImage {
        &self.image
    }

    /// ρ_k: S(X,k) → X.
    pub fn projection(&self) -> &DigitalMap {
        &self.projection
    }

    /// The kⁿ points lying over `x`.
    pub fn fiber(&self, x: &Point) -> Result<Vec<Point>> {
        self.base.require_index(x)?;
        Ok(block(x, self.k).collect())
    }
}

pub fn rho(y: i64, k: u32) -> i64 {
    y.div_euclid(k as i64)
}

pub fn rho_point(p: &Point, k: u32) -> Point {
    Point::new(p.coords().iter().map(|&c| rho(c, k)).collect::<Vec<_>>())
}

/// The block k·x + [0, k−1]ⁿ, in lexicographic order.
fn block(x: &Point, k: u32) -> impl Iterator<Item = Point> + '_ {
    let n = x.dim();
    let k = k as i64;
    let total = (k as usize).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut c = vec![0i64; n];
        for i in (0..n).rev() {
            c[i] = k * x.coords()[i] + (code % k as usize) as i64;
            code /= k as usize;
        }
        Point::new(c)
    })
}

/// S(X,k) as a point set, for any k ≥ 1 (k = 1 returns X itself).
pub fn subdivide_image(x: &DigitalImage, k: u32) -> Result<DigitalImage> {
    if k == 0 {
        return Err(Error::InvalidParameter("subdivision factor must be positive".into()));
    }
    if k == 1 {
        return Ok(x.clone());
    }
    let pts: Vec<Point> = x.points().iter().flat_map(|p| block(p, k)).collect();
    // blocks of lexicographically ordered points need not interleave in order
    DigitalImage::new(x.dim(), pts)
}

/// ρ_k: S(X,k) → X as a map, for any k ≥ 1.
pub fn projection_map(x: &DigitalImage, k: u32) -> Result<DigitalMap> {
    let s = subdivide_image(x, k)?;
    DigitalMap::from_fn(&s, x, |p| rho_point(p, k))
}

pub fn subdivide(x: &DigitalImage, k: u32) -> Result<Subdivision> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("subdivision factor must be at least 2, got {k}")));
    }
    let image = subdivide_image(x, k)?;
    let projection = DigitalMap::from_fn(&image, x, |p| rho_point(p, k))?;
    if !projection.is_continuous() {
        return Err(Error::Internal("projection of a subdivision is not continuous".into()));
    }
    Ok(Subdivision { base: x.clone(), k, image, projection })
}

/// S(j,k): S(A,k) → S(X,k) for an inclusion j, given by k·a + t ↦ k·j(a) + t.
pub fn subdivide_inclusion(j: &DigitalMap, k: u32) -> Result<DigitalMap> {
    if !j.is_inclusion() {
        return Err(Error::NotInclusion("only inclusions can be subdivided".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(format!("subdivision factor must be at least 2, got {k}")));
    }
    let sa = subdivide_image(j.domain(), k)?;
    let sx = subdivide_image(j.codomain(), k)?;
    let kk = k as i64;
    DigitalMap::from_fn(&sa, &sx, |p| {
        let a = rho_point(p, k);
        let ja = j.apply(&a).expect("a lies in the domain");
        Point::new(
            p.coords()
                .iter()
                .zip(ja.coords())
                .map(|(&y, &jy)| kk * jy + (y - kk * rho(y, k)))
                .collect::<Vec<_>>(),
        )
    })
}

/// The canonical isomorphism S(S(X,k),l) → S(X,kl). Both sides are the same
/// point set, and the composite projections agree.
pub fn iso_iterated(x: &DigitalImage, k: u32, l: u32) -> Result<DigitalMap> {
    if k < 2 || l < 2 {
        return Err(Error::InvalidParameter("subdivision factors must be at least 2".into()));
    }
    let skl = subdivide_image(&subdivide_image(x, k)?, l)?;
    let s = subdivide_image(x, k * l)?;
    // l·(k·x + t) + s = kl·x + (l·t + s), so the identification is coordinatewise
    DigitalMap::from_fn(&skl, &s, |p| p.clone())
}

/// The canonical isomorphism S(X×Y,k) → S(X,k)×S(Y,k), which regroups coordinates.
pub fn iso_product_subdivision(x: &DigitalImage, y: &DigitalImage, k: u32) -> Result<DigitalMap> {
    if k < 2 {
        return Err(Error::InvalidParameter("subdivision factor must be at least 2".into()));
    }
    let left = subdivide_image(&product(x, y), k)?;
    let right = product(&subdivide_image(x, k)?, &subdivide_image(y, k)?);
    DigitalMap::from_fn(&left, &right, |p| p.clone())
}
