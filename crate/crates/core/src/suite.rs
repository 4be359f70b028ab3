//! A self-check battery, grouped by module, with a pass/fail line per check.

use std::time::Instant;

use serde::Serialize;

use crate::circle::{cover_point, diamond, lift_homotopy, lift_path, winding_number, DiamondLoop, DiamondWinding};
use crate::cofib::{
    based_path_fibration_lift, exhaustive_filler_search, hep_filler, path_fibration_lift, pushout_filler,
    retraction_both_endpoints, retraction_origin_interval, FillerProblem,
};
use crate::error::{Error, Result};
use crate::funcspace::{enumerate_maps, maps_adjacent};
use crate::homotopy::{is_contractible, is_subdivision_contractible};
use crate::lattice::{interval, point_image, product, DigitalImage, Point};
use crate::lscat::{dcat, diamond_lower_bound, DcatOptions};
use crate::maps::DigitalMap;
use crate::subdivision::{subdivide, subdivide_image};

pub const SCOPES: &[&str] = &["lattice", "maps", "subdivision", "funcspace", "homotopy", "cofib", "circle", "lscat"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub scope: &'static str,
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

type Check = fn() -> Result<bool>;

fn checks(scope: &str) -> Vec<(&'static str, Check)> {
    match scope {
        "lattice" => vec![
            ("interval-adjacency", || {
                let i = interval(3);
                Ok(i.are_adjacent(0, 1) && !i.are_adjacent(0, 2) && i.is_connected())
            }),
            ("product-size", || Ok(product(&diamond(), &interval(2)).len() == 12)),
        ],
        "maps" => vec![
            ("identity-continuous", || Ok(DigitalMap::identity(&diamond()).is_continuous())),
            ("swap-not-continuous", || {
                let i = interval(2);
                let f = DigitalMap::from_table(i.clone(), i, vec![0, 2, 1])?;
                Ok(!f.is_continuous())
            }),
        ],
        "subdivision" => vec![
            ("sizes", || Ok(subdivide_image(&diamond(), 3)?.len() == 36)),
            ("projection-continuous", || Ok(subdivide(&interval(2), 2)?.projection().is_continuous())),
        ],
        "funcspace" => vec![
            ("interval-self-maps", || Ok(enumerate_maps(&interval(1), &interval(1), None)?.len() == 4)),
            ("adjacent-constants", || {
                let i = interval(2);
                let c = |v: i64| crate::maps::constant_map(&i, &Point::from([v]), &i);
                Ok(maps_adjacent(&c(0)?, &c(1)?)? && !maps_adjacent(&c(0)?, &c(2)?)?)
            }),
        ],
        "homotopy" => vec![
            ("interval-contractible", || Ok(is_contractible(&interval(3), None)?.is_yes())),
            ("diamond-not-contractible", || Ok(is_contractible(&diamond(), None)?.is_no())),
            ("diamond-not-subdivision-contractible", || {
                let ob = DiamondWinding { k_max: 3 };
                Ok(is_subdivision_contractible(&diamond(), 3, None, &[&ob])?.is_no())
            }),
        ],
        "cofib" => vec![
            ("origin-retractions", || {
                for m in 1..=4 {
                    for n in 1..=4 {
                        retraction_origin_interval(m, n)?;
                    }
                }
                Ok(true)
            }),
            ("endpoint-retractions", || {
                for m in 1..=4 {
                    for n in 1..=4 {
                        retraction_both_endpoints(m, n)?;
                    }
                }
                Ok(true)
            }),
            ("non-push-needs-subdivision", || {
                let (j, h, f) = non_push()?;
                let p = FillerProblem::Pushout { j: j.clone(), h: h.clone(), f: f.clone() };
                let unsub = exhaustive_filler_search(&p, 1, 1, 1 << 20)?.is_no();
                Ok(unsub && pushout_filler(&j, &h, &f, 2)?.is_continuous())
            }),
            ("hep-example", || {
                let (w, h, f) = hep_example()?;
                hep_filler(&w, &h, &f)?;
                Ok(true)
            }),
            ("lifts", || {
                let z = point_image();
                let y = interval(2);
                let f = DigitalMap::from_fn(&product(&z, &interval(2)), &y, |p| Point::from([p.coords()[1].min(1)]))?;
                let h = DigitalMap::from_fn(&product(&z, &interval(1)), &y, |p| Point::from([p.coords()[1]]))?;
                path_fibration_lift(&z, &f, &h)?;
                let y0 = Point::from([0]);
                let g = DigitalMap::from_fn(&product(&z, &interval(2)), &y, |p| Point::from([p.coords()[1].min(1)]))?;
                let hb = DigitalMap::from_fn(&product(&z, &interval(1)), &y, |p| Point::from([1 + p.coords()[1]]))?;
                based_path_fibration_lift(&z, &y0, &g, &hb)?;
                Ok(true)
            }),
        ],
        "circle" => vec![
            ("loop-winding", || {
                let l = DiamondLoop::from_points(&[0, 1, 2, 3, 0].map(cover_point))?;
                Ok(winding_number(&l)? == 4)
            }),
            ("path-lift", || {
                let l = DiamondLoop::from_points(&[0, 1, 2, 3, 0].map(cover_point))?;
                Ok(lift_path(l.path(), 4)?.path() == [4, 5, 6, 7, 8])
            }),
            ("homotopy-lift", || {
                let dom = product(&interval(8), &interval(1));
                let h = DigitalMap::from_fn(&dom, &diamond(), |p| cover_point((p.coords()[0] + p.coords()[1]) / 2))?;
                let alpha = DigitalMap::from_fn(&interval(8), &diamond(), |p| cover_point(p.coords()[0] / 2))?;
                let c = lift_homotopy(&h, &lift_path(&alpha, 0)?)?;
                Ok(c.rows[1] == [0, 1, 1, 2, 2, 3, 3, 4, 4])
            }),
        ],
        "lscat" => vec![
            ("innermost-loops", || {
                for k in 2..=6 {
                    if diamond_lower_bound(k)?.winding == 0 {
                        return Ok(false);
                    }
                }
                Ok(true)
            }),
            ("dcat-diamond", || {
                let r = dcat(&diamond(), None, DcatOptions::default())?;
                Ok(r.lower == 1 && r.upper == Some(1))
            }),
            ("dcat-interval", || {
                let r = dcat(&interval(3), None, DcatOptions::default())?;
                Ok(r.lower == 0 && r.upper == Some(0))
            }),
        ],
        _ => Vec::new(),
    }
}

/// Two paths α, β: I_1 → D with α(0) = β(0) but opposite endpoints, glued at the base.
pub fn non_push() -> Result<(DigitalMap, DigitalMap, DigitalMap)> {
    let d = diamond();
    let a = DigitalImage::new(1, [Point::from([0])])?;
    let x = interval(1);
    let j = DigitalMap::inclusion(&a, &x)?;
    let f = DigitalMap::from_fn(&x, &d, |p| if p.coords()[0] == 0 { Point::from([1, 0]) } else { Point::from([0, -1]) })?;
    let h = DigitalMap::from_fn(&product(&a, &interval(1)), &d, |p| {
        if p.coords()[1] == 0 {
            Point::from([1, 0])
        } else {
            Point::from([0, 1])
        }
    })?;
    Ok((j, h, f))
}

/// A = {0} ⊂ X = I_2, Y = I_3, f(x) = x + 1, H(0,t) = 1 − t, with the origin retraction.
pub fn hep_example() -> Result<(crate::cofib::RetractionWitness, DigitalMap, DigitalMap)> {
    let w = retraction_origin_interval(2, 1)?;
    let y = interval(3);
    let f = DigitalMap::from_fn(&interval(2), &y, |p| Point::from([p.coords()[0] + 1]))?;
    let h = DigitalMap::from_fn(&product(&w.subspace, &interval(1)), &y, |p| Point::from([1 - p.coords()[1]]))?;
    Ok((w, h, f))
}

/// Runs the checks for one module name, or every module for "all".
pub fn verify_suite(scope: &str) -> Result<SuiteReport> {
    let scopes: Vec<&str> = match scope {
        "all" => SCOPES.to_vec(),
        s if SCOPES.contains(&s) => vec![s],
        s => return Err(Error::InvalidParameter(format!("unknown scope `{s}`"))),
    };
    let mut out = Vec::new();
    for s in scopes {
        let s: &'static str = SCOPES.iter().find(|&&x| x == s).copied().expect("known scope");
        for (name, check) in checks(s) {
            let t = Instant::now();
            let (passed, detail) = match check() {
                Ok(p) => (p, String::new()),
                Err(e) => (false, e.to_string()),
            };
            out.push(CheckResult { scope: s, name, passed, detail, millis: t.elapsed().as_millis() });
        }
    }
    let passed = out.iter().filter(|c| c.passed).count();
    let failed = out.len() - passed;
    Ok(SuiteReport { checks: out, passed, failed })
}
