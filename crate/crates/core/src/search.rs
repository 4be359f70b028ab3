//! Backtracking enumeration of continuous maps, optionally with per-point
//! restrictions on the allowed values.
//!
//! Each point's candidates are narrowed to the closed neighborhoods of the
//! values already given to its adjacent points, so dead branches are cut as
//! soon as a conflict appears.

use crate::lattice::DigitalImage;

pub(crate) struct Extensions<'a> {
    codomain: &'a DigitalImage,
    order: Vec<usize>,
    /// For each position in `order`, the domain points adjacent to it that come earlier.
    earlier: Vec<Vec<usize>>,
    allowed: Vec<Option<Vec<u32>>>,
    table: Vec<u32>,
    stack: Vec<(Vec<u32>, usize)>,
    started: bool,
    done: bool,
    /// Assignments left before the search gives up, if bounded.
    budget: Option<usize>,
    pub truncated: bool,
}

impl<'a> Extensions<'a> {
    /// All continuous maps, in lexicographic order of their tables.
    pub fn all(domain: &'a DigitalImage, codomain: &'a DigitalImage) -> Self {
        Self::new(domain, codomain, vec![None; domain.len()], false)
    }

    /// Continuous maps whose value at each point lies in `allowed` (sorted
    /// lists; `None` means unrestricted). With `fixed_first`, points with a
    /// single allowed value are assigned before the rest, which prunes much
    /// harder but gives up lexicographic output order.
    pub fn new(
        domain: &'a DigitalImage,
        codomain: &'a DigitalImage,
        allowed: Vec<Option<Vec<u32>>>,
        fixed_first: bool,
    ) -> Self {
        let n = domain.len();
        let mut order: Vec<usize> = (0..n).collect();
        if fixed_first {
            order.sort_by_key(|&i| match &allowed[i] {
                Some(v) if v.len() <= 1 => 0,
                _ => 1,
            });
        }
        let mut pos = vec![0usize; n];
        for (k, &i) in order.iter().enumerate() {
            pos[i] = k;
        }
        let earlier = order
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                domain
                    .neighborhood(i)
                    .iter()
                    .map(|&j| j as usize)
                    .filter(|&j| pos[j] < k)
                    .collect()
            })
            .collect();
        Extensions {
            codomain,
            order,
            earlier,
            allowed,
            table: vec![0; n],
            stack: Vec::new(),
            started: false,
            done: false,
            budget: None,
            truncated: false,
        }
    }

    /// Stops after this many value assignments and sets `truncated`.
    pub fn with_budget(mut self, nodes: usize) -> Self {
        self.budget = Some(nodes);
        self
    }

    fn candidates(&self, k: usize) -> Vec<u32> {
        let y = self.order[k];
        let earlier = &self.earlier[k];
        let allowed = self.allowed[y].as_deref();
        let cd = self.codomain;
        let mut base: Option<&[u32]> = allowed;
        for &e in earlier {
            let nb = cd.neighborhood(self.table[e] as usize);
            if base.map_or(true, |b| nb.len() < b.len()) {
                base = Some(nb);
            }
        }
        let ok = |c: u32| {
            earlier.iter().all(|&e| cd.are_adjacent(c as usize, self.table[e] as usize))
                && allowed.map_or(true, |a| a.binary_search(&c).is_ok())
        };
        match base {
            Some(b) => b.iter().copied().filter(|&c| ok(c)).collect(),
            None => (0..cd.len() as u32).collect(),
        }
    }
}

impl Iterator for Extensions<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let n = self.order.len();
        if !self.started {
            self.started = true;
            if n == 0 {
                self.done = true;
                return Some(Vec::new());
            }
            let c = self.candidates(0);
            self.stack.push((c, 0));
        }
        loop {
            let depth = self.stack.len();
            let Some((cands, next)) = self.stack.last_mut() else {
                self.done = true;
                return None;
            };
            if *next >= cands.len() {
                self.stack.pop();
                continue;
            }
            let v = cands[*next];
            *next += 1;
            if let Some(b) = self.budget.as_mut() {
                if *b == 0 {
                    self.truncated = true;
                    self.done = true;
                    return None;
                }
                *b -= 1;
            }
            let k = depth - 1;
            self.table[self.order[k]] = v;
            if k + 1 == n {
                return Some(self.table.clone());
            }
            let c = self.candidates(k + 1);
            self.stack.push((c, 0));
        }
    }
}
