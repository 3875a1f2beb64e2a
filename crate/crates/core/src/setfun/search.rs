use std::ops::ControlFlow;

use super::{NatTrans, SetFunctor};
use crate::error::{Counter, Limits, Result};

const UNSET: usize = usize::MAX;

/// Depth-first search for natural transformations `F ⇒ G`.
///
/// Variables are the elements of `F`, ordered by object then element, and values are
/// tried in increasing order, so solutions come out in lexicographic order of their
/// component families. Assigning `x ∈ F(k)` forces the value at `F(f)(x)` for every
/// `f: k → k'`; forced values are propagated eagerly and conflicts prune the branch.
/// Every value tried ticks the candidate counter.
pub struct NatSearch<'a> {
    f: &'a SetFunctor,
    g: &'a SetFunctor,
    injective: bool,
    fixed: Vec<(usize, usize, usize)>,
}

impl<'a> NatSearch<'a> {
    pub fn new(f: &'a SetFunctor, g: &'a SetFunctor) -> Result<Self> {
        f.require_same_source(g, "natural transformations")?;
        Ok(NatSearch {
            f,
            g,
            injective: false,
            fixed: Vec::new(),
        })
    }

    /// Restrict to componentwise injective transformations; with equal sizes these are
    /// exactly the isomorphisms.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    /// Require the component at `object` to send `x` to `y`.
    pub fn fix(mut self, object: usize, x: usize, y: usize) -> Self {
        self.fixed.push((object, x, y));
        self
    }

    /// Visits every solution in canonical order until `visit` breaks. Returns whether the
    /// search was stopped by the visitor.
    pub fn for_each(
        &self,
        limits: &Limits,
        mut visit: impl FnMut(&NatTrans) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let c = self.f.source();
        let n = c.n_objects();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut total = 0;
        for o in 0..n {
            offsets.push(total);
            total += self.f.size(o);
        }
        offsets.push(total);
        if self.injective && (0..n).any(|o| self.f.size(o) > self.g.size(o)) {
            return Ok(ControlFlow::Continue(()));
        }
        for o in 0..n {
            if self.f.size(o) > 0 && self.g.size(o) == 0 {
                return Ok(ControlFlow::Continue(()));
            }
        }
        let out: Vec<Vec<usize>> = (0..n)
            .map(|o| c.out_of(o).filter(|&m| !c.is_identity(m)).collect())
            .collect();
        let mut st = State {
            f: self.f,
            g: self.g,
            offsets,
            out,
            obj_of: (0..n).flat_map(|o| std::iter::repeat_n(o, self.f.size(o))).collect(),
            vals: vec![UNSET; total],
            used: if self.injective {
                (0..n).map(|o| vec![false; self.g.size(o)]).collect()
            } else {
                Vec::new()
            },
            trail: Vec::new(),
            queue: Vec::new(),
            counter: limits.counter(),
        };
        for &(o, x, y) in &self.fixed {
            if o >= n || x >= self.f.size(o) || y >= self.g.size(o) || !st.assign(o, x, y) {
                return Ok(ControlFlow::Continue(()));
            }
        }
        st.dfs(0, &mut visit)
    }

    pub fn collect(&self, limits: &Limits) -> Result<Vec<NatTrans>> {
        let mut all = Vec::new();
        let _ = self.for_each(limits, |t| {
            all.push(t.clone());
            ControlFlow::Continue(())
        })?;
        Ok(all)
    }

    pub fn first(&self, limits: &Limits) -> Result<Option<NatTrans>> {
        let mut found = None;
        let _ = self.for_each(limits, |t| {
            found = Some(t.clone());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    pub fn count(&self, limits: &Limits) -> Result<u64> {
        let mut k = 0u64;
        let _ = self.for_each(limits, |_| {
            k += 1;
            ControlFlow::Continue(())
        })?;
        Ok(k)
    }
}

/// All natural transformations `F ⇒ G` in canonical order.
pub fn nat_set(f: &SetFunctor, g: &SetFunctor, limits: &Limits) -> Result<Vec<NatTrans>> {
    NatSearch::new(f, g)?.collect(limits)
}

/// An isomorphism `F ≅ G`, if one exists.
pub fn find_iso(f: &SetFunctor, g: &SetFunctor, limits: &Limits) -> Result<Option<NatTrans>> {
    f.require_same_source(g, "isomorphism search")?;
    if f.sizes() != g.sizes() {
        return Ok(None);
    }
    NatSearch::new(f, g)?.injective().first(limits)
}

struct State<'a> {
    f: &'a SetFunctor,
    g: &'a SetFunctor,
    offsets: Vec<usize>,
    out: Vec<Vec<usize>>,
    obj_of: Vec<usize>,
    vals: Vec<usize>,
    used: Vec<Vec<bool>>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    counter: Counter,
}

impl State<'_> {
    fn set(&mut self, o: usize, x: usize, y: usize) -> bool {
        let v = self.offsets[o] + x;
        if self.vals[v] != UNSET {
            return self.vals[v] == y;
        }
        if !self.used.is_empty() {
            if self.used[o][y] {
                return false;
            }
            self.used[o][y] = true;
        }
        self.vals[v] = y;
        self.trail.push(v);
        self.queue.push(v);
        true
    }

    /// Assigns and propagates; on conflict the caller must undo to its trail mark.
    fn assign(&mut self, o: usize, x: usize, y: usize) -> bool {
        self.queue.clear();
        if !self.set(o, x, y) {
            return false;
        }
        while let Some(v) = self.queue.pop() {
            let o = self.obj_of[v];
            let x = v - self.offsets[o];
            let y = self.vals[v];
            for i in 0..self.out[o].len() {
                let m = self.out[o][i];
                let t = self.f.source().tgt(m);
                if !self.set(t, self.f.apply(m, x), self.g.apply(m, y)) {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            if !self.used.is_empty() {
                let o = self.obj_of[v];
                self.used[o][self.vals[v]] = false;
            }
            self.vals[v] = UNSET;
        }
    }

    fn dfs(&mut self, mut v: usize, visit: &mut impl FnMut(&NatTrans) -> ControlFlow<()>) -> Result<ControlFlow<()>> {
        while v < self.vals.len() && self.vals[v] != UNSET {
            v += 1;
        }
        if v == self.vals.len() {
            let n = self.offsets.len() - 1;
            let t = NatTrans::new(
                (0..n)
                    .map(|o| self.vals[self.offsets[o]..self.offsets[o + 1]].to_vec())
                    .collect(),
            );
            return Ok(visit(&t));
        }
        let o = self.obj_of[v];
        let x = v - self.offsets[o];
        for y in 0..self.g.size(o) {
            self.counter.tick()?;
            let mark = self.trail.len();
            if self.assign(o, x, y) && self.dfs(v + 1, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
            self.undo(mark);
        }
        Ok(ControlFlow::Continue(()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::sync::Arc;

    fn brute_force(f: &SetFunctor, g: &SetFunctor) -> Vec<NatTrans> {
        // Every component family in lexicographic order, filtered by naturality.
        let n = f.source().n_objects();
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|o| (0..f.size(o)).map(move |x| (o, x))).collect();
        let mut digits = vec![0usize; slots.len()];
        let mut out = Vec::new();
        if slots.iter().any(|&(o, _)| g.size(o) == 0) {
            return out;
        }
        loop {
            let mut comps: Vec<Vec<usize>> = (0..n).map(|o| vec![0; f.size(o)]).collect();
            for (i, &(o, x)) in slots.iter().enumerate() {
                comps[o][x] = digits[i];
            }
            let t = NatTrans::new(comps);
            if t.is_natural(f, g) {
                out.push(t);
            }
            let mut i = slots.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < g.size(slots[i].0) {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    #[test]
    fn single_object_counts() {
        let one = Arc::new(fixtures::terminal());
        let f = SetFunctor::constant(one.clone(), 2);
        let g = SetFunctor::constant(one, 1);
        assert_eq!(nat_set(&f, &g, &Limits::default()).unwrap().len(), 1);
        assert_eq!(nat_set(&g, &f, &Limits::default()).unwrap().len(), 2);
    }

    #[test]
    fn agrees_with_brute_force_on_parallel_pair() {
        let par = Arc::new(fixtures::parallel_pair());
        let (f_, g_) = (par.morphism("f").unwrap(), par.morphism("g").unwrap());
        let mut maps = vec![vec![]; par.n_morphisms()];
        maps[par.id(0)] = vec![0, 1];
        maps[par.id(1)] = vec![0, 1, 2];
        maps[f_] = vec![0, 1];
        maps[g_] = vec![2, 1];
        let a = SetFunctor::from_sizes(par.clone(), &[2, 3], maps).unwrap();
        let b = SetFunctor::constant(par.clone(), 2);
        for (x, y) in [(&a, &a), (&a, &b), (&b, &a), (&b, &b)] {
            let fast = nat_set(x, y, &Limits::default()).unwrap();
            assert_eq!(fast, brute_force(x, y));
        }
    }

    #[test]
    fn injective_search_finds_isomorphisms() {
        let one = Arc::new(fixtures::terminal());
        let f = SetFunctor::constant(one, 3);
        let n = NatSearch::new(&f, &f)
            .unwrap()
            .injective()
            .count(&Limits::default())
            .unwrap();
        assert_eq!(n, 6);
    }

    #[test]
    fn cap_is_enforced() {
        let one = Arc::new(fixtures::terminal());
        let f = SetFunctor::constant(one, 4);
        let err = nat_set(&f, &f, &Limits::with_max_candidates(10)).unwrap_err();
        assert!(matches!(err, crate::Error::CapExceeded { .. }));
    }
}
