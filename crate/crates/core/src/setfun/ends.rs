use std::sync::Arc;

use super::SetFunctor;
use crate::cat::{opposite, product, FinCat};
use crate::error::{Counter, Error, Limits, Result};
use crate::names;
use crate::unionfind::UnionFind;

/// An end: a subset of `∏_k H(k,k)`, kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct End {
    pub set: SetFunctor,
    /// `tuples[t][k]` is the `k`-th coordinate of element `t`.
    pub tuples: Vec<Vec<usize>>,
}

/// A coend: a quotient of `⨿_k H(k,k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coend {
    pub set: SetFunctor,
    /// `class_of[k][x]` is the class of `x ∈ H(k,k)`.
    pub class_of: Vec<Vec<usize>>,
    /// Least representative `(k, x)` of each class.
    pub reps: Vec<(usize, usize)>,
}

fn check_twisted(k: &FinCat, h: &SetFunctor) -> Result<()> {
    if h.source().as_ref() != &product(&opposite(k), k) {
        return Err(Error::shape("end/coend integrand must live on op(K) × K"));
    }
    Ok(())
}

#[inline]
fn obj(k: &FinCat, a: usize, b: usize) -> usize {
    a * k.n_objects() + b
}

#[inline]
fn mor(k: &FinCat, u: usize, v: usize) -> usize {
    u * k.n_morphisms() + v
}

/// `∫_k H(k,k)`: families `x_k` with `H(f,1)(x_k') = H(1,f)(x_k)` for all `f: k → k'`.
pub fn end(k: &FinCat, h: &SetFunctor, limits: &Limits) -> Result<End> {
    check_twisted(k, h)?;
    let n = k.n_objects();
    // Constraints that become checkable once both endpoints are assigned.
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
    for f in 0..k.n_morphisms() {
        if !k.is_identity(f) {
            due[k.src(f).max(k.tgt(f))].push(f);
        }
    }
    let mut search = EndSearch {
        k,
        h,
        due,
        cur: vec![0; n],
        out: Vec::new(),
        counter: limits.counter(),
    };
    search.dfs(0)?;
    let tuples = search.out;
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = (0..n).map(|o| h.label(obj(k, o, o), t[o])).collect();
            names::tuple(&parts)
        })
        .collect();
    Ok(End {
        set: SetFunctor::set(labels),
        tuples,
    })
}

struct EndSearch<'a> {
    k: &'a FinCat,
    h: &'a SetFunctor,
    due: Vec<Vec<usize>>,
    cur: Vec<usize>,
    out: Vec<Vec<usize>>,
    counter: Counter,
}

impl EndSearch<'_> {
    fn dfs(&mut self, o: usize) -> Result<()> {
        let k = self.k;
        if o == k.n_objects() {
            self.out.push(self.cur.clone());
            return Ok(());
        }
        for x in 0..self.h.size(obj(k, o, o)) {
            self.counter.tick()?;
            self.cur[o] = x;
            let ok = self.due[o].iter().all(|&f| {
                let (s, t) = (k.src(f), k.tgt(f));
                let left = self.h.apply(mor(k, f, k.id(t)), self.cur[t]);
                let right = self.h.apply(mor(k, k.id(s), f), self.cur[s]);
                left == right
            });
            if ok {
                self.dfs(o + 1)?;
            }
        }
        Ok(())
    }
}

/// `∫^k H(k,k)`: the diagonal modulo `H(f,1)(y) ~ H(1,f)(y)` for `f: k → k'`, `y ∈ H(k',k)`.
pub fn coend(k: &FinCat, h: &SetFunctor) -> Result<Coend> {
    check_twisted(k, h)?;
    let n = k.n_objects();
    let mut offsets = Vec::with_capacity(n);
    let mut owners = Vec::new();
    for o in 0..n {
        offsets.push(owners.len());
        owners.extend((0..h.size(obj(k, o, o))).map(|x| (o, x)));
    }
    let mut uf = UnionFind::new(owners.len());
    for f in 0..k.n_morphisms() {
        if k.is_identity(f) {
            continue;
        }
        let (s, t) = (k.src(f), k.tgt(f));
        for y in 0..h.size(obj(k, t, s)) {
            let l = h.apply(mor(k, f, k.id(s)), y);
            let r = h.apply(mor(k, k.id(t), f), y);
            uf.union(offsets[s] + l, offsets[t] + r);
        }
    }
    let q = uf.classes();
    let reps: Vec<(usize, usize)> = q.reps.iter().map(|&r| owners[r]).collect();
    let labels = reps
        .iter()
        .map(|&(o, x)| names::class(&names::pair(k.object_name(o), h.label(obj(k, o, o), x))))
        .collect();
    let class_of = (0..n)
        .map(|o| (0..h.size(obj(k, o, o))).map(|x| q.class_of[offsets[o] + x]).collect())
        .collect();
    Ok(Coend {
        set: SetFunctor::set(labels),
        class_of,
        reps,
    })
}

/// All functions `X → Y` between sets of the given sizes, in lexicographic order of
/// their value lists, or a cap error when there are too many.
pub fn functions(p: usize, q: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let count = (q as u64).checked_pow(p as u32).unwrap_or(u64::MAX);
    if count > limits.max_candidates {
        return Err(Error::CapExceeded {
            cap: "max_candidates",
            limit: limits.max_candidates,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0usize; p];
    if p > 0 && q == 0 {
        return Ok(out);
    }
    loop {
        out.push(cur.clone());
        let mut i = p;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < q {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Index of a function in the order produced by [`functions`].
pub fn function_index(f: &[usize], q: usize) -> usize {
    f.iter().fold(0, |acc, &y| acc * q + y)
}

/// `H(b,a) = [F b, G a]` on `op(K) × K`, for two functors `F, G` on `K`. Elements are
/// functions in lexicographic order.
pub fn function_sets(f: &SetFunctor, g: &SetFunctor, limits: &Limits) -> Result<SetFunctor> {
    f.require_same_source(g, "function-set functor")?;
    let k = f.source();
    let (n, m) = (k.n_objects(), k.n_morphisms());
    let prod = Arc::new(product(&opposite(k), k));
    let mut funcs = Vec::with_capacity(n * n);
    for b in 0..n {
        for a in 0..n {
            funcs.push(functions(f.size(b), g.size(a), limits)?);
        }
    }
    let sets = (0..n * n)
        .map(|i| {
            let a = i % n;
            funcs[i]
                .iter()
                .map(|h| {
                    let parts: Vec<&str> = h.iter().map(|&y| g.label(a, y)).collect();
                    names::tuple(&parts)
                })
                .collect()
        })
        .collect();
    let mut maps = Vec::with_capacity(m * m);
    for u in 0..m {
        for v in 0..m {
            // (u, v): (tgt u, src v) → (src u, tgt v); h ↦ G(v) ∘ h ∘ F(u).
            let (b, a) = (k.tgt(u), k.src(v));
            let a2 = k.tgt(v);
            let fu = f.map(u);
            maps.push(
                funcs[b * n + a]
                    .iter()
                    .map(|h| {
                        let img: Vec<usize> = fu.iter().map(|&x| g.apply(v, h[x])).collect();
                        function_index(&img, g.size(a2))
                    })
                    .collect(),
            );
        }
    }
    Ok(SetFunctor::assemble(prod, sets, maps))
}
