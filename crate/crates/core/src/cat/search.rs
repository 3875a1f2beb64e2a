use std::sync::Arc;

use super::{FinCat, Functor};
use crate::error::{Counter, Limits, Result, Violation};

fn signature(c: &FinCat, o: usize) -> (usize, Vec<usize>, Vec<usize>) {
    let n = c.n_objects();
    let mut out: Vec<usize> = (0..n).map(|b| c.hom(o, b).len()).collect();
    let mut inn: Vec<usize> = (0..n).map(|a| c.hom(a, o).len()).collect();
    out.sort_unstable();
    inn.sort_unstable();
    (c.hom(o, o).len(), out, inn)
}

/// Exhaustive search for an isomorphism of categories `c ≅ d`, returned as a functor.
pub fn find_isomorphism(c: &Arc<FinCat>, d: &Arc<FinCat>, limits: &Limits) -> Result<Option<Functor>> {
    if c.n_objects() != d.n_objects() || c.n_morphisms() != d.n_morphisms() {
        return Ok(None);
    }
    let n = c.n_objects();
    let sig_c: Vec<_> = (0..n).map(|o| signature(c, o)).collect();
    let sig_d: Vec<_> = (0..n).map(|o| signature(d, o)).collect();
    let mut triples: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); c.n_morphisms()];
    for (g, f, h) in c.composable_pairs() {
        triples[g].push((g, f, h));
        if f != g {
            triples[f].push((g, f, h));
        }
        if h != g && h != f {
            triples[h].push((g, f, h));
        }
    }
    let mut st = IsoSearch {
        c,
        d,
        obj: vec![usize::MAX; n],
        obj_used: vec![false; n],
        mor: vec![usize::MAX; c.n_morphisms()],
        mor_used: vec![false; d.n_morphisms()],
        triples,
        counter: limits.counter(),
    };
    if st.objects(0, &sig_c, &sig_d)? {
        Ok(Some(Functor::assemble(c.clone(), d.clone(), st.obj, st.mor)))
    } else {
        Ok(None)
    }
}

struct IsoSearch<'a> {
    c: &'a FinCat,
    d: &'a FinCat,
    obj: Vec<usize>,
    obj_used: Vec<bool>,
    mor: Vec<usize>,
    mor_used: Vec<bool>,
    triples: Vec<Vec<(usize, usize, usize)>>,
    counter: Counter,
}

type Sig = (usize, Vec<usize>, Vec<usize>);

impl IsoSearch<'_> {
    fn objects(&mut self, i: usize, sc: &[Sig], sd: &[Sig]) -> Result<bool> {
        let n = self.c.n_objects();
        if i == n {
            return self.morphisms(0);
        }
        for y in 0..n {
            if self.obj_used[y] || sc[i] != sd[y] {
                continue;
            }
            self.counter.tick()?;
            let ok = (0..i).all(|x| {
                self.c.hom(x, i).len() == self.d.hom(self.obj[x], y).len()
                    && self.c.hom(i, x).len() == self.d.hom(y, self.obj[x]).len()
            });
            if !ok {
                continue;
            }
            self.obj[i] = y;
            self.obj_used[y] = true;
            if self.objects(i + 1, sc, sd)? {
                return Ok(true);
            }
            self.obj_used[y] = false;
            self.obj[i] = usize::MAX;
        }
        Ok(false)
    }

    fn consistent(&self, m: usize) -> bool {
        self.triples[m].iter().all(|&(g, f, h)| {
            let (a, b, c) = (self.mor[g], self.mor[f], self.mor[h]);
            a == usize::MAX || b == usize::MAX || c == usize::MAX || self.d.comp(a, b) == c
        })
    }

    fn morphisms(&mut self, f: usize) -> Result<bool> {
        if f == self.c.n_morphisms() {
            return Ok(true);
        }
        let (s, t) = (self.obj[self.c.src(f)], self.obj[self.c.tgt(f)]);
        let candidates: Vec<usize> = if self.c.is_identity(f) {
            vec![self.d.id(s)]
        } else {
            self.d
                .hom(s, t)
                .iter()
                .copied()
                .filter(|&g| !self.d.is_identity(g))
                .collect()
        };
        for g in candidates {
            if self.mor_used[g] {
                continue;
            }
            self.counter.tick()?;
            self.mor[f] = g;
            self.mor_used[g] = true;
            if self.consistent(f) && self.morphisms(f + 1)? {
                return Ok(true);
            }
            self.mor_used[g] = false;
            self.mor[f] = usize::MAX;
        }
        Ok(false)
    }
}

/// `forward: F(source) → target` and `backward: target → F(source)`, mutually inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoPair {
    pub target: usize,
    pub source: usize,
    pub forward: usize,
    pub backward: usize,
}

/// Certificate that a functor is an equivalence: it is fully faithful (checked
/// exhaustively) and every target object is isomorphic to an image object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceCert {
    pub functor: Functor,
    pub witnesses: Vec<IsoPair>,
}

impl EquivalenceCert {
    pub fn verify(&self) -> std::result::Result<(), Violation> {
        let f = &self.functor;
        let v = f.violations();
        if let Some(x) = v.into_iter().next() {
            return Err(x);
        }
        if !f.is_fully_faithful() {
            return Err(Violation::new(
                "equivalence is fully faithful",
                "hom-set map not bijective",
            ));
        }
        let t = f.target();
        let mut covered = vec![false; t.n_objects()];
        for w in &self.witnesses {
            let fx = f.obj(w.source);
            let ok = t.src(w.forward) == fx
                && t.tgt(w.forward) == w.target
                && t.src(w.backward) == w.target
                && t.tgt(w.backward) == fx
                && t.comp(w.backward, w.forward) == t.id(fx)
                && t.comp(w.forward, w.backward) == t.id(w.target);
            if !ok {
                return Err(Violation::new(
                    "essential surjectivity witness is an isomorphism",
                    t.object_name(w.target).to_string(),
                ));
            }
            covered[w.target] = true;
        }
        match covered.iter().position(|c| !c) {
            Some(y) => Err(Violation::new(
                "every target object has an isomorphism witness",
                t.object_name(y).to_string(),
            )),
            None => Ok(()),
        }
    }
}

/// Checks that `f` is an equivalence of categories, returning explicit witnesses or the
/// first failure.
pub fn certify_equivalence(f: &Functor) -> std::result::Result<EquivalenceCert, Violation> {
    let (s, t) = (f.source(), f.target());
    for a in 0..s.n_objects() {
        for b in 0..s.n_objects() {
            let dom = s.hom(a, b);
            let cod = t.hom(f.obj(a), f.obj(b));
            let mut images: Vec<usize> = dom.iter().map(|&m| f.mor(m)).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != dom.len() || dom.len() != cod.len() {
                return Err(Violation::new(
                    "equivalence is fully faithful",
                    format!("{} → {}", s.object_name(a), s.object_name(b)),
                ));
            }
        }
    }
    let mut witnesses = Vec::with_capacity(t.n_objects());
    'targets: for y in 0..t.n_objects() {
        if let Some(x) = (0..s.n_objects()).find(|&x| f.obj(x) == y) {
            witnesses.push(IsoPair {
                target: y,
                source: x,
                forward: t.id(y),
                backward: t.id(y),
            });
            continue;
        }
        for x in 0..s.n_objects() {
            let fx = f.obj(x);
            for &u in t.hom(fx, y) {
                for &v in t.hom(y, fx) {
                    if t.comp(v, u) == t.id(fx) && t.comp(u, v) == t.id(y) {
                        witnesses.push(IsoPair {
                            target: y,
                            source: x,
                            forward: u,
                            backward: v,
                        });
                        continue 'targets;
                    }
                }
            }
        }
        return Err(Violation::new(
            "equivalence is essentially surjective",
            t.object_name(y).to_string(),
        ));
    }
    Ok(EquivalenceCert {
        functor: f.clone(),
        witnesses,
    })
}
