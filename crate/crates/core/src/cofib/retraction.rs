//! Retractions S(X,k) × S(I_N, lm) → X×{0} ∪ A×S(I_N, l) that make an
//! inclusion A ↪ X a cofibration.
//!
//! The target sits in ℤ^{n+1} with time as the last coordinate, so the
//! junction between X×{0} and A×S(I_N,l) has the adjacencies the ambient
//! lattice gives it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{interval, product, DigitalImage, Point};
use crate::maps::{product_map, DigitalMap};
use crate::subdivision::{projection_map, rho, rho_point, subdivide_image};

#[derive(Clone, Debug, Serialize)]
pub struct RetractionWitness {
    /// A.
    pub subspace: DigitalImage,
    /// X.
    pub space: DigitalImage,
    /// N, the length of the homotopy interval.
    pub time: u32,
    pub k: u32,
    pub l: u32,
    pub m: u32,
    /// The exponent chosen for the two-endpoint construction, if used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub retraction: DigitalMap,
}

/// X×{0} ∪ A×S(I_N, l) ⊂ ℤ^{n+1}.
pub fn retraction_target(a: &DigitalImage, x: &DigitalImage, n: u32, l: u32) -> Result<DigitalImage> {
    if !a.is_subset_of(x) {
        return Err(Error::NotInclusion("A is not a subset of X".into()));
    }
    let top = (l * (n + 1) - 1) as i64;
    let base = x.points().iter().map(|p| p.concat(&Point::from([0])));
    let side = a.points().iter().flat_map(|p| (0..=top).map(move |q| p.concat(&Point::from([q]))));
    DigitalImage::from_union(x.dim() + 1, base.chain(side))
}

/// S(X,k) × S(I_N, lm).
pub fn retraction_domain(x: &DigitalImage, n: u32, k: u32, lm: u32) -> Result<DigitalImage> {
    Ok(product(&subdivide_image(x, k)?, &subdivide_image(&interval(n), lm)?))
}

impl RetractionWitness {
    /// Full check: signature, continuity over every adjacent pair, and
    /// R = ρ_k × ρ_m on S(X,k)×{0} ∪ S(A,k)×S(I_N,lm).
    pub fn check(&self) -> std::result::Result<(), String> {
        let dom = retraction_domain(&self.space, self.time, self.k, self.l * self.m).map_err(|e| e.to_string())?;
        let tgt = retraction_target(&self.subspace, &self.space, self.time, self.l).map_err(|e| e.to_string())?;
        if self.retraction.domain() != &dom || self.retraction.codomain() != &tgt {
            return Err("retraction has the wrong domain or target".into());
        }
        if !self.retraction.is_continuous() {
            let (i, j) = first_break(&self.retraction).expect("a discontinuity exists");
            return Err(format!(
                "not continuous: {} ∼ {} but {} ≁ {}",
                dom.point(i),
                dom.point(j),
                self.retraction.value(i),
                self.retraction.value(j)
            ));
        }
        let n = self.space.dim();
        for (i, p) in dom.points().iter().enumerate() {
            let (xs, t) = p.split_at(n);
            let x = rho_point(&xs, self.k);
            let t = t.coords()[0];
            if t == 0 || self.subspace.contains(&x) {
                let want = x.concat(&Point::from([rho(t, self.m)]));
                if self.retraction.value(i) != &want {
                    return Err(format!("triangle fails at {p}: {} ≠ {want}", self.retraction.value(i)));
                }
            }
        }
        Ok(())
    }

    pub fn inclusion(&self) -> DigitalMap {
        DigitalMap::inclusion(&self.subspace, &self.space).expect("witness holds a subset")
    }
}

fn first_break(f: &DigitalMap) -> Option<(usize, usize)> {
    let d = f.domain();
    (0..d.len()).find_map(|i| {
        d.neighborhood(i)
            .iter()
            .find(|&&j| !f.codomain().are_adjacent(f.index_at(i), f.index_at(j as usize)))
            .map(|&j| (i, j as usize))
    })
}

pub fn verify_retraction(w: &RetractionWitness) -> bool {
    w.check().is_ok()
}

fn finish(w: RetractionWitness) -> Result<RetractionWitness> {
    w.check().map_err(Error::Internal)?;
    Ok(w)
}

/// The retraction for {0} ↪ I_M with k = l = m = 2: R = (ρ₂×ρ₂)∘D where D
/// fixes the two left columns, slides points above the diagonal down to
/// column 1, and drops points below it onto the bottom row.
pub fn retraction_origin_interval(m_len: u32, n: u32) -> Result<RetractionWitness> {
    if m_len == 0 || n == 0 {
        return Err(Error::InvalidParameter("M and N must be at least 1".into()));
    }
    let x = interval(m_len);
    let a = interval(0);
    let dom = retraction_domain(&x, n, 2, 4)?;
    let tgt = retraction_target(&a, &x, n, 2)?;
    let r = DigitalMap::from_fn(&dom, &tgt, |pt| {
        let (p, q) = (pt.coords()[0], pt.coords()[1]);
        let (dp, dq) = if p <= 1 {
            (p, q)
        } else if q >= p - 1 {
            (1, q - p + 1)
        } else {
            (p - q, 0)
        };
        Point::from([rho(dp, 2), rho(dq, 2)])
    })?;
    finish(RetractionWitness { subspace: a, space: x, time: n, k: 2, l: 2, m: 2, p: None, retraction: r })
}

/// Exponent p for the two-endpoint retraction: p = 2 when M = 1, otherwise
/// the smallest p ≥ 2 with (M−1)·2^{p−2} ≥ 4N+5, which keeps the fixed
/// end blocks clear of the triangle T₂ at every height up to 4N+3.
pub fn endpoint_exponent(m_len: u32, n: u32) -> u32 {
    if m_len <= 1 {
        return 2;
    }
    let mut p = 2;
    while (m_len as u64 - 1) * (1u64 << (p - 2)) < 4 * n as u64 + 5 {
        p += 1;
    }
    p
}

/// The left half of the retraction on [0, 2K+1] × [0, 4N+3], in final
/// coordinates. The fiber block over 0 goes to the left edge, points above
/// the shifted diagonal j = i−k+1 slide down onto it, points below drop
/// onto the bottom row, the triangle T₂ goes along the bottom row by
/// i ↦ ρ_h(i−K), and the seam column to ρ_h(K).
fn left_half(i: i64, j: i64, kk: i64, k: u32) -> (i64, i64) {
    let k_ = k as i64;
    let h = k / 2;
    if i < k_ {
        (0, rho(j, 2))
    } else if i == 2 * kk + 1 {
        (rho(kk, h), 0)
    } else if i > 2 * kk - j {
        (rho(i - kk, h), 0)
    } else if j >= i - k_ + 1 {
        (0, rho(j - i + k_ - 1, 2))
    } else {
        (rho(i - j, k), 0)
    }
}

/// The right half is the mirror image: reflect i ↦ 4K+3−i, apply the left
/// half, and reflect the result x ↦ M−x.
fn endpoint_map(i: i64, j: i64, kk: i64, k: u32, m_len: i64) -> (i64, i64) {
    if i <= 2 * kk + 1 {
        left_half(i, j, kk, k)
    } else {
        let (x, b) = left_half(4 * kk + 3 - i, j, kk, k);
        (m_len - x, b)
    }
}

/// The retraction for {0, M} ↪ I_M with factors (2^p, 2, 2).
pub fn retraction_both_endpoints(m_len: u32, n: u32) -> Result<RetractionWitness> {
    if m_len == 0 || n == 0 {
        return Err(Error::InvalidParameter("M and N must be at least 1".into()));
    }
    let p = endpoint_exponent(m_len, n);
    let k = 1u32 << p;
    let kk = (m_len as i64 + 1) * (1i64 << (p - 2)) - 1;
    let x = interval(m_len);
    let a = DigitalImage::new(1, [Point::from([0]), Point::from([m_len as i64])])?;
    let dom = retraction_domain(&x, n, k, 4)?;
    let tgt = retraction_target(&a, &x, n, 2)?;
    debug_assert_eq!(dom.point(dom.len() - 1).coords(), &[4 * kk + 3, 4 * n as i64 + 3]);
    let r = DigitalMap::from_fn(&dom, &tgt, |pt| {
        let (a, b) = endpoint_map(pt.coords()[0], pt.coords()[1], kk, k, m_len as i64);
        Point::from([a, b])
    })?;
    finish(RetractionWitness { subspace: a, space: x, time: n, k, l: 2, m: 2, p: Some(p), retraction: r })
}

/// From a witness for A ↪ X, the witness ρ_k × R for Z×A ↪ Z×X.
pub fn product_with_cofibration(w: &RetractionWitness, z: &DigitalImage) -> Result<RetractionWitness> {
    finish(product_witness(w, z)?)
}

/// ρ_k × R without rechecking it; it is a witness whenever R is.
pub(crate) fn product_witness(w: &RetractionWitness, z: &DigitalImage) -> Result<RetractionWitness> {
    let r = product_map(&projection_map(z, w.k)?, &w.retraction);
    Ok(RetractionWitness {
        subspace: product(z, &w.subspace),
        space: product(z, &w.space),
        time: w.time,
        k: w.k,
        l: w.l,
        m: w.m,
        p: w.p,
        retraction: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_formula_values() {
        let w = retraction_origin_interval(3, 2).unwrap();
        let r = &w.retraction;
        for q in 0..=11 {
            assert_eq!(r.apply(&Point::from([0, q])).unwrap(), &Point::from([0, rho(q, 2)]));
        }
        for p in 1..=7 {
            assert_eq!(r.apply(&Point::from([p, 0])).unwrap(), &Point::from([rho(p, 2), 0]));
        }
    }

    #[test]
    fn exponent_rule() {
        for m in 2..=4u32 {
            for n in 1..=4u32 {
                let p = endpoint_exponent(m, n);
                let room = |p: u32| (m as u64 - 1) * (1u64 << (p - 2));
                assert!(room(p) >= 4 * n as u64 + 5);
                assert!(p == 2 || room(p - 1) < 4 * n as u64 + 5);
            }
        }
        assert_eq!(endpoint_exponent(1, 3), 2);
    }

    #[test]
    fn seam_and_triangle() {
        let (k, kk) = (32u32, 23i64);
        let h = k / 2;
        for j in 0..=7 {
            assert_eq!(endpoint_map(2 * kk + 1, j, kk, k, 2), (rho(kk, h), 0));
            assert_eq!(endpoint_map(2 * kk + 2, j, kk, k, 2), (2 - rho(kk, h), 0));
            for i in (2 * kk - j + 1)..=2 * kk {
                assert_eq!(endpoint_map(i, j, kk, k, 2), (rho(i - kk, h), 0));
            }
        }
    }

    #[test]
    fn small_witnesses_verify() {
        assert!(verify_retraction(&retraction_origin_interval(1, 1).unwrap()));
        assert!(verify_retraction(&retraction_both_endpoints(1, 1).unwrap()));
        assert!(verify_retraction(&retraction_both_endpoints(2, 1).unwrap()));
    }
}
