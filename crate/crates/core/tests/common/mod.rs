//! Brute-force oracles. They work on raw coordinates and never call the
//! library's adjacency, continuity or search code.

#![allow(dead_code)]

use std::time::{Duration, Instant};

use digitop::{DigitalImage, DigitalMap, Point};

pub fn cheb(a: &[i64], b: &[i64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1)
}

pub fn coords(x: &DigitalImage) -> Vec<Vec<i64>> {
    x.points().iter().map(|p| p.coords().to_vec()).collect()
}

/// Every index pair (i, j), i ≤ j, of adjacent points, found by comparing all pairs.
pub fn adjacent_pairs(x: &DigitalImage) -> Vec<(usize, usize)> {
    let c = coords(x);
    let mut out = Vec::new();
    for i in 0..c.len() {
        for j in i..c.len() {
            if cheb(&c[i], &c[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn continuous(pairs: &[(usize, usize)], cod: &[Vec<i64>], table: &[u32]) -> bool {
    pairs.iter().all(|&(i, j)| cheb(&cod[table[i] as usize], &cod[table[j] as usize]))
}

/// Every function dom → cod as an index table, in odometer order.
pub fn all_functions(n_dom: usize, n_cod: usize) -> impl Iterator<Item = Vec<u32>> {
    let mut cur = vec![0u32; n_dom];
    let mut done = n_cod == 0 && n_dom > 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur.clone();
        let mut i = 0;
        loop {
            if i == n_dom {
                done = true;
                break;
            }
            cur[i] += 1;
            if (cur[i] as usize) < n_cod {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
        Some(out)
    })
}

/// Every continuous map dom → cod, by filtering all functions.
pub fn brute_maps(dom: &DigitalImage, cod: &DigitalImage) -> Vec<Vec<u32>> {
    let pairs = adjacent_pairs(dom);
    let c = coords(cod);
    all_functions(dom.len(), cod.len()).filter(|t| continuous(&pairs, &c, t)).collect()
}

/// f ≈₁ g: f(y) ∼ g(y') whenever y ∼ y', over all ordered pairs.
pub fn brute_maps_adjacent(dom: &DigitalImage, cod: &DigitalImage, f: &[u32], g: &[u32]) -> bool {
    let d = coords(dom);
    let c = coords(cod);
    (0..d.len()).all(|i| {
        (0..d.len()).all(|j| !cheb(&d[i], &d[j]) || cheb(&c[f[i] as usize], &c[g[j] as usize]))
    })
}

/// The component of `start` in the graph of all continuous maps with ≈₁ adjacency.
pub fn brute_component(dom: &DigitalImage, cod: &DigitalImage, start: &[u32]) -> Vec<Vec<u32>> {
    let all = brute_maps(dom, cod);
    let mut seen = vec![false; all.len()];
    let s = all.iter().position(|t| t == start).expect("start is continuous");
    seen[s] = true;
    let mut stack = vec![s];
    let mut out = Vec::new();
    while let Some(i) = stack.pop() {
        out.push(all[i].clone());
        for j in 0..all.len() {
            if !seen[j] && brute_maps_adjacent(dom, cod, &all[i], &all[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    out
}

pub const DIAMOND_CYCLE: [[i64; 2]; 4] = [[1, 0], [0, 1], [-1, 0], [0, -1]];

/// Every integer path within `window` of `start` that projects to `indices`
/// (cyclic positions on D) and moves by at most one per step.
pub fn brute_lifts(indices: &[usize], start: i64) -> Vec<Vec<i64>> {
    let n = indices.len() as i64;
    let lo = start - n - 1;
    let hi = start + n + 1;
    let choices: Vec<Vec<i64>> = indices
        .iter()
        .enumerate()
        .map(|(t, &c)| {
            if t == 0 {
                vec![start]
            } else {
                (lo..=hi).filter(|v| v.rem_euclid(4) as usize == c).collect()
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(indices.len());
    fn rec(choices: &[Vec<i64>], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == choices.len() {
            out.push(cur.clone());
            return;
        }
        for &v in &choices[cur.len()] {
            if cur.last().map_or(true, |&u: &i64| (u - v).abs() <= 1) {
                cur.push(v);
                rec(choices, cur, out);
                cur.pop();
            }
        }
    }
    rec(&choices, &mut cur, &mut out);
    out
}

/// Every sequence of D-indices of the given length whose consecutive entries are adjacent in D.
pub fn diamond_paths(len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for t in all_functions(len + 1, 4) {
        let t: Vec<usize> = t.into_iter().map(|v| v as usize).collect();
        if t.windows(2).all(|w| cheb(&DIAMOND_CYCLE[w[0]], &DIAMOND_CYCLE[w[1]])) {
            out.push(t);
        }
    }
    out
}

pub fn diamond_point(i: usize) -> Point {
    Point::from(DIAMOND_CYCLE[i])
}

/// Runs `f` and returns its value with the elapsed time.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

/// Recomputes continuity of a map from coordinates alone.
pub fn map_is_continuous(f: &DigitalMap) -> bool {
    continuous(&adjacent_pairs(f.domain()), &coords(f.codomain()), f.table())
}

/// Continuity for large domains: looks up each of the 3^d offsets of every
/// point in a hash map of coordinates.
pub fn grid_continuous(f: &DigitalMap) -> bool {
    use std::collections::HashMap;
    let dom = coords(f.domain());
    let cod = coords(f.codomain());
    let at: HashMap<&[i64], usize> = dom.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let d = dom.first().map_or(0, Vec::len);
    let offsets: Vec<Vec<i64>> = all_functions(d, 3).map(|o| o.into_iter().map(|v| v as i64 - 1).collect()).collect();
    let t = f.table();
    dom.iter().enumerate().all(|(i, c)| {
        offsets.iter().all(|o| {
            let q: Vec<i64> = c.iter().zip(o).map(|(a, b)| a + b).collect();
            at.get(q.as_slice()).map_or(true, |&j| cheb(&cod[t[i] as usize], &cod[t[j] as usize]))
        })
    })
}

/// Number of functions dom → cod that agree with `forced` where it is
/// defined and are continuous, by trying every value at the free points.
pub fn brute_filler_count(dom: &DigitalImage, cod: &DigitalImage, forced: impl Fn(&Point) -> Option<Point>) -> usize {
    let pairs = adjacent_pairs(dom);
    let c = coords(cod);
    let mut base = vec![0u32; dom.len()];
    let mut free = Vec::new();
    for (i, p) in dom.points().iter().enumerate() {
        match forced(p) {
            Some(v) => base[i] = c.iter().position(|q| q.as_slice() == v.coords()).expect("forced value in codomain") as u32,
            None => free.push(i),
        }
    }
    all_functions(free.len(), cod.len())
        .filter(|vals| {
            let mut t = base.clone();
            for (&i, &v) in free.iter().zip(vals) {
                t[i] = v;
            }
            continuous(&pairs, &c, &t)
        })
        .count()
}
