use std::ops::ControlFlow;
use std::sync::Arc;

use super::{functions, SetFunctor};
use crate::cat::FinCat;
use crate::error::{Counter, Limits, Result};
use crate::names;

/// Every size vector with entries `≤ max`, ordered by total then lexicographically.
pub fn size_vectors(n_objects: usize, max: usize) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    for _ in 0..n_objects {
        all = all
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    all.sort_by(|a, b| {
        let (sa, sb): (usize, usize) = (a.iter().sum(), b.iter().sum());
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    all
}

/// Visits every functor `C → FinSet` whose sets have at most `max` elements, in the
/// canonical order: by total element count, then size vector, then the function
/// tables of the non-identity morphisms in index order. Each candidate function tried
/// and each functor visited ticks the counter.
pub fn for_each_set_functor(
    c: &Arc<FinCat>,
    max: usize,
    limits: &Limits,
    mut visit: impl FnMut(&SetFunctor) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    let mut counter = limits.counter();
    let vars: Vec<usize> = (0..c.n_morphisms()).filter(|&m| !c.is_identity(m)).collect();
    let mut rank = vec![usize::MAX; c.n_morphisms()];
    for (i, &m) in vars.iter().enumerate() {
        rank[m] = i;
    }
    // For each variable, the composable triples that become checkable when it is
    // assigned, and the factorisations that force its value.
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); vars.len()];
    let mut forcing: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vars.len()];
    let order = |m: usize| if c.is_identity(m) { None } else { Some(rank[m]) };
    for (g, f, h) in c.composable_pairs() {
        let last = [order(g), order(f), order(h)].into_iter().flatten().max();
        if let Some(last) = last {
            checks[last].push((g, f, h));
        }
        if let Some(rh) = order(h) {
            let before = |m: usize| order(m).is_none_or(|r| r < rh);
            if before(g) && before(f) && !(c.is_identity(g) && c.is_identity(f)) {
                forcing[rh].push((g, f));
            }
        }
    }
    for sizes in size_vectors(c.n_objects(), max) {
        let mut maps: Vec<Vec<usize>> = vec![Vec::new(); c.n_morphisms()];
        for o in 0..c.n_objects() {
            maps[c.id(o)] = (0..sizes[o]).collect();
        }
        let mut st = Enum {
            c,
            sizes: &sizes,
            vars: &vars,
            checks: &checks,
            forcing: &forcing,
            maps,
            counter: &mut counter,
        };
        if st.dfs(0, &mut visit, limits)?.is_break() {
            return Ok(ControlFlow::Break(()));
        }
    }
    Ok(ControlFlow::Continue(()))
}

struct Enum<'a> {
    c: &'a Arc<FinCat>,
    sizes: &'a [usize],
    vars: &'a [usize],
    checks: &'a [Vec<(usize, usize, usize)>],
    forcing: &'a [Vec<(usize, usize)>],
    maps: Vec<Vec<usize>>,
    counter: &'a mut Counter,
}

impl Enum<'_> {
    fn consistent(&self, i: usize) -> bool {
        self.checks[i].iter().all(|&(g, f, h)| {
            let (mg, mf, mh) = (&self.maps[g], &self.maps[f], &self.maps[h]);
            mf.iter().zip(mh).all(|(&y, &z)| mg[y] == z)
        })
    }

    fn dfs(
        &mut self,
        i: usize,
        visit: &mut impl FnMut(&SetFunctor) -> ControlFlow<()>,
        limits: &Limits,
    ) -> Result<ControlFlow<()>> {
        if i == self.vars.len() {
            self.counter.tick()?;
            let f = SetFunctor::assemble(
                self.c.clone(),
                self.sizes.iter().map(|&n| names::numbered(n)).collect(),
                self.maps.clone(),
            );
            return Ok(visit(&f));
        }
        let m = self.vars[i];
        let (s, t) = (self.c.src(m), self.c.tgt(m));
        let candidates = match self.forcing[i].first() {
            Some(&(g, f)) => {
                let forced: Vec<usize> = self.maps[f].iter().map(|&y| self.maps[g][y]).collect();
                vec![forced]
            }
            None => functions(self.sizes[s], self.sizes[t], limits)?,
        };
        for cand in candidates {
            self.counter.tick()?;
            self.maps[m] = cand;
            if self.consistent(i) && self.dfs(i + 1, visit, limits)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        self.maps[m] = Vec::new();
        Ok(ControlFlow::Continue(()))
    }
}
