//! Brute-force oracles shared by the integration suites. None of these call the library's
//! search, limit or coend code; they only read functor tables.

#![allow(dead_code)]

use std::ops::ControlFlow;
use std::sync::Arc;

use kanweigh::cat::FinCat;
use kanweigh::setfun::{for_each_set_functor, SetFunctor};
use kanweigh::Limits;

/// Every choice of one function `f(o) → g(o)` per object, kept when every naturality
/// square commutes. Counts `nat(f, g)`.
pub fn nat_count(f: &SetFunctor, g: &SetFunctor) -> usize {
    let c = f.source();
    let n = c.n_objects();
    // Odometer over all functions, one digit per (object, element).
    let mut digits: Vec<(usize, usize)> = Vec::new();
    let mut off = vec![0usize; n];
    for o in 0..n {
        if f.size(o) > 0 && g.size(o) == 0 {
            return 0;
        }
        off[o] = digits.len();
        for x in 0..f.size(o) {
            digits.push((o, x));
        }
    }
    let mut val = vec![0usize; digits.len()];
    let mut count = 0;
    loop {
        let comp = |o: usize, x: usize| val[off[o] + x];
        let natural = (0..c.n_morphisms()).all(|m| {
            let (s, t) = (c.src(m), c.tgt(m));
            (0..f.size(s)).all(|x| comp(t, f.apply(m, x)) == g.apply(m, comp(s, x)))
        });
        if natural {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return count;
            }
            val[i] += 1;
            if val[i] < g.size(digits[i].0) {
                break;
            }
            val[i] = 0;
            i += 1;
        }
    }
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// `|∫^d φ(d) × s(d)|` for `φ` on `D` and `s` on `op(D)` (same morphism ids), by
/// quotienting the disjoint union of the products.
pub fn coend_size(phi: &SetFunctor, s: &SetFunctor) -> usize {
    let d = phi.source();
    let mut offset = vec![0usize; d.n_objects() + 1];
    for o in 0..d.n_objects() {
        offset[o + 1] = offset[o] + phi.size(o) * s.size(o);
    }
    let at = |o: usize, a: usize, x: usize| offset[o] + a * s.size(o) + x;
    let mut p: Vec<usize> = (0..offset[d.n_objects()]).collect();
    for m in 0..d.n_morphisms() {
        let (u, v) = (d.src(m), d.tgt(m));
        for a in 0..phi.size(u) {
            for y in 0..s.size(v) {
                // (φ(m)a, y) at v  ~  (a, s(m)y) at u
                let l = find(&mut p, at(v, phi.apply(m, a), y));
                let r = find(&mut p, at(u, a, s.apply(m, y)));
                p[l] = r;
            }
        }
    }
    (0..p.len()).filter(|&i| find(&mut p, i) == i).count()
}

/// Every functor `c → FinSet` with at most `total` elements altogether.
pub fn presheaves_up_to(c: &Arc<FinCat>, total: usize) -> Vec<SetFunctor> {
    let mut out = Vec::new();
    let _ = for_each_set_functor(c, total, &Limits::default(), |f| {
        if f.total_size() > total {
            return ControlFlow::Break(());
        }
        out.push(f.clone());
        ControlFlow::Continue(())
    })
    .unwrap();
    out
}

/// Every functor `c → FinSet` with sets of at most `max` elements each.
pub fn functors_bounded(c: &Arc<FinCat>, max: usize) -> Vec<SetFunctor> {
    let mut out = Vec::new();
    let _ = for_each_set_functor(c, max, &Limits::default(), |f| {
        out.push(f.clone());
        ControlFlow::Continue(())
    })
    .unwrap();
    out
}

/// Idempotents of `c`, identities included, by scanning the composition table.
pub fn idempotent_count(c: &FinCat) -> usize {
    (0..c.n_morphisms())
        .filter(|&f| c.src(f) == c.tgt(f) && c.comp(f, f) == f)
        .count()
}

/// Sizes reachable from `{1}` by `k` rounds of `S ↦ S ∪ (S + S)`.
pub fn coproduct_sizes(rounds: usize) -> Vec<usize> {
    let mut s = vec![1usize];
    for _ in 0..rounds {
        let mut next = s.clone();
        for &a in &s {
            for &b in &s {
                next.push(a + b);
            }
        }
        next.sort_unstable();
        next.dedup();
        s = next;
    }
    s
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Every tuple in `∏_o d(o)`, in odometer order.
fn tuples(d: &SetFunctor) -> Vec<Vec<usize>> {
    let n = d.source().n_objects();
    let mut out = Vec::new();
    if (0..n).any(|o| d.size(o) == 0) {
        return out;
    }
    let mut t = vec![0usize; n];
    loop {
        out.push(t.clone());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            t[i] += 1;
            if t[i] < d.size(i) {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// `|lim d|`: tuples with `d(f)(x_src) = x_tgt` for every morphism.
pub fn limit_size(d: &SetFunctor) -> usize {
    let c = d.source();
    tuples(d)
        .into_iter()
        .filter(|t| (0..c.n_morphisms()).all(|m| d.apply(m, t[c.src(m)]) == t[c.tgt(m)]))
        .count()
}

/// `|colim d|`: the disjoint union glued along every `x ~ d(f)(x)`.
pub fn colimit_size(d: &SetFunctor) -> usize {
    let c = d.source();
    let mut offset = vec![0usize; c.n_objects() + 1];
    for o in 0..c.n_objects() {
        offset[o + 1] = offset[o] + d.size(o);
    }
    let mut p: Vec<usize> = (0..offset[c.n_objects()]).collect();
    for m in 0..c.n_morphisms() {
        for x in 0..d.size(c.src(m)) {
            let l = find(&mut p, offset[c.src(m)] + x);
            let r = find(&mut p, offset[c.tgt(m)] + d.apply(m, x));
            p[l] = r;
        }
    }
    (0..p.len()).filter(|&i| find(&mut p, i) == i).count()
}

/// `|∫_k h(k,k)|` for `h` on `op(K) × K`, by filtering diagonal tuples.
pub fn end_size(k: &FinCat, h: &SetFunctor) -> usize {
    let (n, m) = (k.n_objects(), k.n_morphisms());
    let diag: Vec<usize> = (0..n).map(|o| h.size(o * n + o)).collect();
    if diag.contains(&0) {
        return 0;
    }
    let total: usize = diag.iter().product();
    (0..total)
        .filter(|&code| {
            let mut x = vec![0usize; n];
            let mut c = code;
            for o in 0..n {
                x[o] = c % diag[o];
                c /= diag[o];
            }
            // For f: s → t, h(f, id_t) x_t and h(id_s, f) x_s both land in h(s, t).
            (0..m).all(|f| {
                let (s, t) = (k.src(f), k.tgt(f));
                h.apply(f * m + k.id(t), x[t]) == h.apply(k.id(s) * m + f, x[s])
            })
        })
        .count()
}

/// `|∫^k h(k,k)|` for `h` on `op(K) × K`.
pub fn twisted_coend_size(k: &FinCat, h: &SetFunctor) -> usize {
    let (n, m) = (k.n_objects(), k.n_morphisms());
    let mut offset = vec![0usize; n + 1];
    for o in 0..n {
        offset[o + 1] = offset[o] + h.size(o * n + o);
    }
    let mut p: Vec<usize> = (0..offset[n]).collect();
    for f in 0..m {
        let (s, t) = (k.src(f), k.tgt(f));
        // y ∈ h(t, s): h(f, id_s) y ∈ h(s, s) ~ h(id_t, f) y ∈ h(t, t).
        for y in 0..h.size(t * n + s) {
            let l = find(&mut p, offset[s] + h.apply(f * m + k.id(s), y));
            let r = find(&mut p, offset[t] + h.apply(k.id(t) * m + f, y));
            p[l] = r;
        }
    }
    (0..p.len()).filter(|&i| find(&mut p, i) == i).count()
}

/// Every natural transformation `f ⇒ g`, as component tables, by brute force.
pub fn nats(f: &SetFunctor, g: &SetFunctor) -> Vec<Vec<Vec<usize>>> {
    let c = f.source();
    let n = c.n_objects();
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for o in 0..n {
        if f.size(o) > 0 && g.size(o) == 0 {
            return Vec::new();
        }
        for x in 0..f.size(o) {
            slots.push((o, x));
        }
    }
    let mut val = vec![0usize; slots.len()];
    let mut out = Vec::new();
    loop {
        let mut comps: Vec<Vec<usize>> = (0..n).map(|o| vec![0; f.size(o)]).collect();
        for (i, &(o, x)) in slots.iter().enumerate() {
            comps[o][x] = val[i];
        }
        let natural = (0..c.n_morphisms())
            .all(|m| (0..f.size(c.src(m))).all(|x| comps[c.tgt(m)][f.apply(m, x)] == g.apply(m, comps[c.src(m)][x])));
        if natural {
            out.push(comps);
        }
        let mut i = 0;
        loop {
            if i == slots.len() {
                return out;
            }
            val[i] += 1;
            if val[i] < g.size(slots[i].0) {
                break;
            }
            val[i] = 0;
            i += 1;
        }
    }
}

/// Associativity over every composable triple, read straight off the table.
pub fn associative(c: &FinCat) -> bool {
    let m = c.n_morphisms();
    (0..m).all(|h| {
        (0..m).all(|g| {
            (0..m).all(|f| match (c.compose(h, g), c.compose(g, f)) {
                (Some(hg), Some(gf)) => c.compose(hg, f) == c.compose(h, gf),
                _ => true,
            })
        })
    })
}
