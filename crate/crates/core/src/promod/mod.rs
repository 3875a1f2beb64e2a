//! Modules (profunctors) between finite categories: composition by coends, right
//! liftings and right Kan extensions by ends, the two modules of a functor, and
//! adjointness with unit/counit certificates.

mod adjoint;
mod pasting;

pub use adjoint::{
    check_adjunction, has_right_adjoint, search_adjunction, AdjunctionCertificate, RightAdjointVerdict, TriangleCheck,
};
pub use pasting::{pasting_bijections, PastingReport};

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{opposite, product, FinCat, Functor};
use crate::error::{Counter, Error, Limits, Result};
use crate::names;
use crate::setfun::{find_iso, nat_set, NatTrans, SetFunctor};
use crate::unionfind::UnionFind;

/// A module `A ⇸ B`: a set-valued functor on `op(B) × A`.
///
/// Element `x ∈ M(b, a)` is acted on by `v: b' → b` in `B` and `u: a → a'` in `A`,
/// giving `u · x · v ∈ M(b', a')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    target_op: Arc<FinCat>,
    carrier: SetFunctor,
}

impl Module {
    pub fn new(source: Arc<FinCat>, target: Arc<FinCat>, carrier: SetFunctor) -> Result<Module> {
        let target_op = Arc::new(opposite(&target));
        if carrier.source().as_ref() != &product(&target_op, &source) {
            return Err(Error::shape("module carrier must live on op(target) × source"));
        }
        Ok(Module {
            source,
            target,
            target_op,
            carrier,
        })
    }

    fn assemble(source: Arc<FinCat>, target: Arc<FinCat>, sets: Vec<Vec<String>>, maps: Vec<Vec<usize>>) -> Module {
        let target_op = Arc::new(opposite(&target));
        let prod = Arc::new(product(&target_op, &source));
        Module {
            source,
            target,
            target_op,
            carrier: SetFunctor::assemble(prod, sets, maps),
        }
    }

    /// A module into or out of the terminal category from a presheaf or copresheaf.
    pub fn from_presheaf(phi: &SetFunctor) -> Result<Module> {
        // φ on op(B) is a module I ⇸ B.
        let b = Arc::new(opposite(phi.source()));
        let one = Arc::new(crate::fixtures::terminal());
        Ok(Module::assemble(one, b, phi.sets().to_vec(), phi.maps().to_vec()))
    }

    /// The identity module `A(−, −)`.
    pub fn hom(a: &Arc<FinCat>) -> Module {
        functor_modules(&Functor::identity(a)).0
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn carrier(&self) -> &SetFunctor {
        &self.carrier
    }

    #[inline]
    fn obj(&self, b: usize, a: usize) -> usize {
        b * self.source.n_objects() + a
    }

    #[inline]
    pub fn size(&self, b: usize, a: usize) -> usize {
        self.carrier.size(self.obj(b, a))
    }

    #[inline]
    pub fn label(&self, b: usize, a: usize, x: usize) -> &str {
        self.carrier.label(self.obj(b, a), x)
    }

    /// `u · x · v` for `v: b' → b` in the target and `u: a → a'` in the source.
    #[inline]
    pub fn act(&self, v: usize, u: usize, x: usize) -> usize {
        self.carrier.apply(v * self.source.n_morphisms() + u, x)
    }

    /// `M(b, −)` as a functor on the source.
    pub fn row(&self, b: usize) -> SetFunctor {
        let (na, ma) = (self.source.n_objects(), self.source.n_morphisms());
        let idb = self.target.id(b);
        SetFunctor::assemble(
            self.source.clone(),
            (0..na).map(|a| self.carrier.labels(self.obj(b, a)).to_vec()).collect(),
            (0..ma).map(|u| self.carrier.map(idb * ma + u).to_vec()).collect(),
        )
    }

    /// `M(−, a)` as a presheaf on the target, i.e. a functor on `op(target)`.
    pub fn column(&self, a: usize) -> SetFunctor {
        let (nb, mb) = (self.target.n_objects(), self.target.n_morphisms());
        let ma = self.source.n_morphisms();
        let ida = self.source.id(a);
        SetFunctor::assemble(
            self.target_op.clone(),
            (0..nb).map(|b| self.carrier.labels(self.obj(b, a)).to_vec()).collect(),
            (0..mb).map(|v| self.carrier.map(v * ma + ida).to_vec()).collect(),
        )
    }

    pub fn same_shape(&self, other: &Module) -> bool {
        self.source == other.source && self.target == other.target
    }
}

/// `T_*(b, a) = B(b, Ta)` and `T^*(a, b) = B(Ta, b)`.
pub fn functor_modules(t: &Functor) -> (Module, Module) {
    let (a, b) = (t.source().clone(), t.target().clone());
    let (na, nb) = (a.n_objects(), b.n_objects());
    let (ma, mb) = (a.n_morphisms(), b.n_morphisms());
    let names_of = |hom: &[usize]| hom.iter().map(|&f| b.morphism_name(f).to_string()).collect::<Vec<_>>();
    let pos = |hom: &[usize], f: usize| hom.iter().position(|&g| g == f).expect("composite in hom");

    let mut sets = Vec::with_capacity(nb * na);
    for y in 0..nb {
        for x in 0..na {
            sets.push(names_of(b.hom(y, t.obj(x))));
        }
    }
    let mut maps = Vec::with_capacity(mb * ma);
    for v in 0..mb {
        for u in 0..ma {
            let (b0, a0) = (b.tgt(v), a.src(u));
            let (b1, a1) = (b.src(v), a.tgt(u));
            let dst = b.hom(b1, t.obj(a1));
            maps.push(
                b.hom(b0, t.obj(a0))
                    .iter()
                    .map(|&x| pos(dst, b.comp(t.mor(u), b.comp(x, v))))
                    .collect(),
            );
        }
    }
    let lower = Module::assemble(a.clone(), b.clone(), sets, maps);

    let mut sets = Vec::with_capacity(na * nb);
    for x in 0..na {
        for y in 0..nb {
            sets.push(names_of(b.hom(t.obj(x), y)));
        }
    }
    let mut maps = Vec::with_capacity(ma * mb);
    for u in 0..ma {
        for v in 0..mb {
            let (a0, b0) = (a.tgt(u), b.src(v));
            let (a1, b1) = (a.src(u), b.tgt(v));
            let dst = b.hom(t.obj(a1), b1);
            maps.push(
                b.hom(t.obj(a0), b0)
                    .iter()
                    .map(|&x| pos(dst, b.comp(v, b.comp(x, t.mor(u)))))
                    .collect(),
            );
        }
    }
    let upper = Module::assemble(b, a, sets, maps);
    (lower, upper)
}

/// For `ρ: T ⇒ S` (components are morphisms of the target), the induced module maps
/// `ρ_*: T_* ⇒ S_*` and `ρ^*: S^* ⇒ T^*`.
pub fn induced_morphisms(rho: &[usize], t: &Functor, s: &Functor) -> Result<(NatTrans, NatTrans)> {
    let (a, b) = (t.source(), t.target());
    if s.source() != a || s.target() != b || rho.len() != a.n_objects() {
        return Err(Error::shape("transformation between functors with different shapes"));
    }
    for x in 0..a.n_objects() {
        if b.src(rho[x]) != t.obj(x) || b.tgt(rho[x]) != s.obj(x) {
            return Err(Error::invalid(
                "component has the right type",
                a.object_name(x).to_string(),
            ));
        }
    }
    for u in 0..a.n_morphisms() {
        if b.comp(s.mor(u), rho[a.src(u)]) != b.comp(rho[a.tgt(u)], t.mor(u)) {
            return Err(Error::invalid(
                "naturality square commutes",
                a.morphism_name(u).to_string(),
            ));
        }
    }
    let pos = |hom: &[usize], f: usize| hom.iter().position(|&g| g == f).expect("composite in hom");
    let lower = NatTrans::new(
        (0..b.n_objects())
            .flat_map(|y| (0..a.n_objects()).map(move |x| (y, x)))
            .map(|(y, x)| {
                b.hom(y, t.obj(x))
                    .iter()
                    .map(|&h| pos(b.hom(y, s.obj(x)), b.comp(rho[x], h)))
                    .collect()
            })
            .collect(),
    );
    let upper = NatTrans::new(
        (0..a.n_objects())
            .flat_map(|x| (0..b.n_objects()).map(move |y| (x, y)))
            .map(|(x, y)| {
                b.hom(s.obj(x), y)
                    .iter()
                    .map(|&h| pos(b.hom(t.obj(x), y), b.comp(h, rho[x])))
                    .collect()
            })
            .collect(),
    );
    Ok((lower, upper))
}

/// `g ∘ f` with the coend classes behind each element.
#[derive(Debug, Clone)]
pub struct Composite {
    pub module: Module,
    /// Least representative `(b, y, x)` of each class, per object `(c, a)`.
    pub reps: Vec<Vec<(usize, usize, usize)>>,
    index: HashMap<(usize, usize, usize, usize), usize>,
}

impl Composite {
    /// The class of `(y, x) ∈ g(c, b) × f(b, a)`.
    pub fn class(&self, c: usize, a: usize, b: usize, y: usize, x: usize) -> usize {
        let obj = c * self.module.source.n_objects() + a;
        self.index[&(obj, b, y, x)]
    }
}

/// `(g∘f)(c, a) = ∫^b g(c, b) × f(b, a)`.
pub fn compose_modules(g: &Module, f: &Module, limits: &Limits) -> Result<Composite> {
    if g.source.as_ref() != f.target.as_ref() {
        return Err(Error::shape("module composite: middle categories differ"));
    }
    let (a, b, c) = (&f.source, &f.target, &g.target);
    let (na, nb, nc) = (a.n_objects(), b.n_objects(), c.n_objects());
    let mut counter: Counter = limits.counter();
    let mut reps = Vec::with_capacity(nc * na);
    let mut sets = Vec::with_capacity(nc * na);
    let mut index = HashMap::new();
    for ci in 0..nc {
        for ai in 0..na {
            let obj = ci * na + ai;
            let mut owners = Vec::new();
            let mut offsets = Vec::with_capacity(nb);
            for bi in 0..nb {
                offsets.push(owners.len());
                for y in 0..g.size(ci, bi) {
                    for x in 0..f.size(bi, ai) {
                        counter.tick()?;
                        owners.push((bi, y, x));
                    }
                }
            }
            let flat = |bi: usize, y: usize, x: usize| offsets[bi] + y * f.size(bi, ai) + x;
            let mut uf = UnionFind::new(owners.len());
            for v in 0..b.n_morphisms() {
                if b.is_identity(v) {
                    continue;
                }
                let (b0, b1) = (b.src(v), b.tgt(v));
                // (y·v, x) ~ (y, v·x) for y ∈ g(c, b0), x ∈ f(b1, a).
                for y in 0..g.size(ci, b0) {
                    let yv = g.act(c.id(ci), v, y);
                    for x in 0..f.size(b1, ai) {
                        let vx = f.act(v, a.id(ai), x);
                        uf.union(flat(b0, y, vx), flat(b1, yv, x));
                    }
                }
            }
            let q = uf.classes();
            for (i, &(bi, y, x)) in owners.iter().enumerate() {
                index.insert((obj, bi, y, x), q.class_of[i]);
            }
            let r: Vec<(usize, usize, usize)> = q.reps.iter().map(|&i| owners[i]).collect();
            sets.push(
                r.iter()
                    .map(|&(bi, y, x)| {
                        names::class(&names::triple(
                            b.object_name(bi),
                            g.label(ci, bi, y),
                            f.label(bi, ai, x),
                        ))
                    })
                    .collect(),
            );
            reps.push(r);
        }
    }
    let mut maps = Vec::with_capacity(c.n_morphisms() * a.n_morphisms());
    for w in 0..c.n_morphisms() {
        for u in 0..a.n_morphisms() {
            let (c0, a0) = (c.tgt(w), a.src(u));
            let (c1, a1) = (c.src(w), a.tgt(u));
            let obj1 = c1 * na + a1;
            maps.push(
                reps[c0 * na + a0]
                    .iter()
                    .map(|&(bi, y, x)| {
                        let y2 = g.act(w, b.id(bi), y);
                        let x2 = f.act(b.id(bi), u, x);
                        index[&(obj1, bi, y2, x2)]
                    })
                    .collect(),
            );
        }
    }
    Ok(Composite {
        module: Module::assemble(a.clone(), c.clone(), sets, maps),
        reps,
        index,
    })
}

/// A module whose elements are natural transformations, as produced by liftings and
/// extensions.
#[derive(Debug, Clone)]
pub struct NatModule {
    pub module: Module,
    /// `nats[obj][x]` is the transformation behind element `x` at carrier object `obj`.
    pub nats: Vec<Vec<NatTrans>>,
    index: Vec<HashMap<NatTrans, usize>>,
}

impl NatModule {
    pub fn element(&self, obj: usize, t: &NatTrans) -> Option<usize> {
        self.index[obj].get(t).copied()
    }

    fn build(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        nats: Vec<Vec<NatTrans>>,
        act: impl Fn(usize, usize, &NatTrans) -> NatTrans,
    ) -> Result<NatModule> {
        let (na, ma) = (source.n_objects(), source.n_morphisms());
        let index: Vec<HashMap<NatTrans, usize>> = nats
            .iter()
            .map(|ns| ns.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        let sets = nats.iter().map(|ns| names::numbered(ns.len())).collect();
        let mut maps = Vec::with_capacity(target.n_morphisms() * ma);
        for v in 0..target.n_morphisms() {
            for u in 0..ma {
                let (b0, a0) = (target.tgt(v), source.src(u));
                let (b1, a1) = (target.src(v), source.tgt(u));
                let dst = &index[b1 * na + a1];
                let m = nats[b0 * na + a0]
                    .iter()
                    .map(|t| {
                        dst.get(&act(v, u, t))
                            .copied()
                            .ok_or_else(|| Error::Internal("action leaves the transformation set".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                maps.push(m);
            }
        }
        Ok(NatModule {
            module: Module::assemble(source, target, sets, maps),
            nats,
            index,
        })
    }
}

/// `{|g, h|}(b, a) = ∫_c [g(c, b), h(c, a)]`, the right lifting of `h: A ⇸ C` through
/// `g: B ⇸ C`, as a module `A ⇸ B`.
pub fn rlift(g: &Module, h: &Module, limits: &Limits) -> Result<NatModule> {
    if g.target.as_ref() != h.target.as_ref() {
        return Err(Error::shape("right lifting: modules must share their target"));
    }
    let (a, b, c) = (h.source.clone(), g.source.clone(), g.target.clone());
    let cols_g: Vec<SetFunctor> = (0..b.n_objects()).map(|x| g.column(x)).collect();
    let cols_h: Vec<SetFunctor> = (0..a.n_objects()).map(|x| h.column(x)).collect();
    let mut nats = Vec::with_capacity(b.n_objects() * a.n_objects());
    for gb in &cols_g {
        for ha in &cols_h {
            nats.push(nat_set(gb, ha, limits)?);
        }
    }
    let nc = c.n_objects();
    NatModule::build(a.clone(), b.clone(), nats, |v, u, t| {
        // ψ ↦ h(1,u) ∘ ψ ∘ g(1,v)
        NatTrans::new(
            (0..nc)
                .map(|ci| {
                    (0..g.size(ci, b.src(v)))
                        .map(|y| h.act(c.id(ci), u, t.components[ci][g.act(c.id(ci), v, y)]))
                        .collect()
                })
                .collect(),
        )
    })
}

/// `[[f, h]](c, b) = ∫_a [f(b, a), h(c, a)]`, the right Kan extension of `h: A ⇸ C`
/// along `f: A ⇸ B`, as a module `B ⇸ C`.
pub fn rext(f: &Module, h: &Module, limits: &Limits) -> Result<NatModule> {
    if f.source.as_ref() != h.source.as_ref() {
        return Err(Error::shape("right extension: modules must share their source"));
    }
    let (a, b, c) = (f.source.clone(), f.target.clone(), h.target.clone());
    let rows_f: Vec<SetFunctor> = (0..b.n_objects()).map(|x| f.row(x)).collect();
    let rows_h: Vec<SetFunctor> = (0..c.n_objects()).map(|x| h.row(x)).collect();
    let mut nats = Vec::with_capacity(c.n_objects() * b.n_objects());
    for hc in &rows_h {
        for fb in &rows_f {
            nats.push(nat_set(fb, hc, limits)?);
        }
    }
    let na = a.n_objects();
    NatModule::build(b.clone(), c.clone(), nats, |w, v, t| {
        // φ ↦ h(w,1) ∘ φ ∘ f(v,1)
        let b1 = b.tgt(v);
        NatTrans::new(
            (0..na)
                .map(|ai| {
                    (0..f.size(b1, ai))
                        .map(|x| h.act(w, a.id(ai), t.components[ai][f.act(v, a.id(ai), x)]))
                        .collect()
                })
                .collect(),
        )
    })
}

/// Module morphisms `m ⇒ n`.
pub fn module_morphisms(m: &Module, n: &Module, limits: &Limits) -> Result<Vec<NatTrans>> {
    if !m.same_shape(n) {
        return Err(Error::shape("module morphisms need modules of the same type"));
    }
    nat_set(&m.carrier, &n.carrier, limits)
}

/// An invertible module morphism `m ≅ n`, if any.
pub fn module_iso(m: &Module, n: &Module, limits: &Limits) -> Result<Option<NatTrans>> {
    if !m.same_shape(n) {
        return Ok(None);
    }
    find_iso(&m.carrier, &n.carrier, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set_module(n: usize) -> Module {
        let one = Arc::new(fixtures::terminal());
        let prod = Arc::new(product(&opposite(&one), &one));
        Module::new(one.clone(), one, SetFunctor::constant(prod, n)).unwrap()
    }

    #[test]
    fn modules_over_terminal_are_sets() {
        let (f, g) = (set_module(2), set_module(3));
        let gf = compose_modules(&g, &f, &Limits::default()).unwrap();
        assert_eq!(gf.module.size(0, 0), 6);
        assert_eq!(rext(&f, &g, &Limits::default()).unwrap().module.size(0, 0), 9);
        assert_eq!(rlift(&f, &g, &Limits::default()).unwrap().module.size(0, 0), 9);
    }

    #[test]
    fn functor_modules_are_lawful() {
        for (name, t) in fixtures::functors() {
            let (lo, up) = functor_modules(&t);
            assert!(lo.carrier.violations().is_empty(), "{name}");
            assert!(up.carrier.violations().is_empty(), "{name}");
        }
    }

    #[test]
    fn functor_module_of_point_in_idem() {
        let t = fixtures::functors()
            .into_iter()
            .find(|(n, _)| *n == "I→Idem")
            .unwrap()
            .1;
        let (lo, _) = functor_modules(&t);
        assert_eq!(lo.size(0, 0), 2);
    }

    #[test]
    fn unit_laws_up_to_iso() {
        for (name, t) in fixtures::functors() {
            let (lo, _) = functor_modules(&t);
            let l = Limits::default();
            let left = compose_modules(&Module::hom(t.target()), &lo, &l).unwrap();
            let right = compose_modules(&lo, &Module::hom(t.source()), &l).unwrap();
            assert!(module_iso(&left.module, &lo, &l).unwrap().is_some(), "{name}");
            assert!(module_iso(&right.module, &lo, &l).unwrap().is_some(), "{name}");
            assert!(left.module.carrier.violations().is_empty());
        }
    }

    #[test]
    fn liftings_and_extensions_along_hom() {
        for (name, t) in fixtures::functors() {
            let (lo, up) = functor_modules(&t);
            let l = Limits::default();
            let r = rlift(&Module::hom(t.target()), &lo, &l).unwrap();
            assert!(r.module.carrier.violations().is_empty(), "{name}");
            assert!(module_iso(&r.module, &lo, &l).unwrap().is_some(), "{name}");
            let e = rext(&Module::hom(t.target()), &up, &l).unwrap();
            assert!(e.module.carrier.violations().is_empty(), "{name}");
            assert!(module_iso(&e.module, &up, &l).unwrap().is_some(), "{name}");
        }
    }

    #[test]
    fn transformations_induce_opposite_module_maps() {
        let two = Arc::new(fixtures::arrow());
        let one = Arc::new(fixtures::terminal());
        let at_a = Functor::new(one.clone(), two.clone(), vec![0], vec![two.id(0)]).unwrap();
        let at_b = Functor::new(one, two.clone(), vec![1], vec![two.id(1)]).unwrap();
        let u = two.morphism("u").unwrap();
        let (lo, up) = induced_morphisms(&[u], &at_a, &at_b).unwrap();
        let (ta_lo, ta_up) = functor_modules(&at_a);
        let (tb_lo, tb_up) = functor_modules(&at_b);
        assert!(lo.is_natural(ta_lo.carrier(), tb_lo.carrier()));
        assert!(up.is_natural(tb_up.carrier(), ta_up.carrier()));
    }
}
