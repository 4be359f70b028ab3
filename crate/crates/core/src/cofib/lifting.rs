//! Lifts against ev_0, the endpoint map π and ev_N on based paths, each
//! obtained from the Borsuk filler for {0} ↪ I_N or {0,N} ↪ I_N.
//!
//! Maps into path spaces are passed in adjoint form: f: Z → P_N Y is a map
//! Z × I_N → Y, and the lift is returned on (S(Z,k) × S(I_M,l)) × I_{kN+k−1}.

use crate::error::{Error, Result};
use crate::lattice::{interval, product, DigitalImage, Point};
use crate::maps::DigitalMap;

use super::filler::{borsuk_unchecked, path_witness, time_length, FillerKind, FillerWitness, PathEnd};
use super::retraction::{retraction_both_endpoints, retraction_origin_interval};

fn path_length_of(f: &DigitalMap, z: &DigitalImage) -> Result<u32> {
    time_length(f.domain(), z).map_err(|_| Error::SignatureMismatch("f must be a map Z × I_N → Y".into()))
}

fn homotopy_length(h: &DigitalMap, z: &DigitalImage) -> Result<u32> {
    time_length(h.domain(), z).map_err(|_| Error::SignatureMismatch("H must be a map Z × I_M → Y".into()))
}

/// H on (Z × I_M) × A for A ⊂ I_N, with `side(h_value, a)` choosing the value at a.
fn borsuk_side(
    z: &DigitalImage,
    m: u32,
    a: &DigitalImage,
    y: &DigitalImage,
    h: &DigitalMap,
    side: impl Fn(&Point, i64) -> Point,
) -> Result<DigitalMap> {
    let dz = z.dim();
    DigitalMap::from_fn(&product(&product(z, &interval(m)), a), y, |p| {
        let (zt, s) = p.split_at(dz + 1);
        side(h.apply(&zt).expect("point of Z × I_M"), s.coords()[0])
    })
}

/// Lift against ev_0: P_N Y → Y.
pub fn path_fibration_lift(z: &DigitalImage, f: &DigitalMap, h: &DigitalMap) -> Result<FillerWitness> {
    let n = path_length_of(f, z)?;
    let m = homotopy_length(h, z)?;
    let y = f.codomain();
    if h.codomain() != y {
        return Err(Error::SignatureMismatch("f and H have different codomains".into()));
    }
    let w = retraction_origin_interval(n, m)?;
    let side = borsuk_side(z, m, &w.subspace, y, h, |v, _| v.clone())?;
    let b = borsuk_unchecked(&w, z, f, &side)?;
    path_witness(FillerKind::PathFibration, b, z, n, f, h, PathEnd::Start)
}

/// Lift against π = (ev_0, ev_N): P_N Y → Y × Y, with H valued in Y × Y.
pub fn endpoints_fibration_lift(z: &DigitalImage, f: &DigitalMap, h: &DigitalMap) -> Result<FillerWitness> {
    let n = path_length_of(f, z)?;
    if n < 2 {
        return Err(Error::InvalidParameter("the endpoint lift needs N ≥ 2".into()));
    }
    let m = homotopy_length(h, z)?;
    let y = f.codomain();
    if h.codomain() != &product(y, y) {
        return Err(Error::SignatureMismatch("H must take values in Y × Y".into()));
    }
    let w = retraction_both_endpoints(n, m)?;
    let dy = y.dim();
    let side = borsuk_side(z, m, &w.subspace, y, h, |v, s| {
        let (a, b) = v.split_at(dy);
        if s == 0 {
            a
        } else {
            b
        }
    })?;
    let b = borsuk_unchecked(&w, z, f, &side)?;
    path_witness(FillerKind::EndpointsFibration, b, z, n, f, h, PathEnd::Both)
}

/// Lift against ev_N on paths starting at `y0`. Every path of `f` must start at `y0`.
pub fn based_path_fibration_lift(
    z: &DigitalImage,
    y0: &Point,
    f: &DigitalMap,
    h: &DigitalMap,
) -> Result<FillerWitness> {
    let n = path_length_of(f, z)?;
    if n < 2 {
        return Err(Error::InvalidParameter("the based lift needs N ≥ 2".into()));
    }
    let m = homotopy_length(h, z)?;
    let y = f.codomain();
    if h.codomain() != y {
        return Err(Error::SignatureMismatch("f and H have different codomains".into()));
    }
    y.require_index(y0)?;
    for zp in z.points() {
        let start = f.apply(&zp.concat(&Point::from([0])))?;
        if start != y0 {
            return Err(Error::DiagramMismatch(format!("the path at {zp} starts at {start}, not {y0}")));
        }
    }
    let w = retraction_both_endpoints(n, m)?;
    let side = borsuk_side(z, m, &w.subspace, y, h, |v, s| if s == 0 { y0.clone() } else { v.clone() })?;
    let b = borsuk_unchecked(&w, z, f, &side)?;
    path_witness(FillerKind::BasedPathFibration, b, z, n, f, h, PathEnd::Based(y0.clone()))
}
