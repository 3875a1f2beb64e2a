//! The closure of the representables under a class of colimit weights, computed stage
//! by stage to a bounded depth, with replayable witnesses.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{opposite, FinCat};
use crate::error::{Counter, Error, Limits, Result};
use crate::setfun::{find_iso, nat_set, representable, Diagram, NatTrans, SetFunctor};
use crate::weighted::{preserves_colimit, weighted_colimit, Ambient, Variance, Weight, WeightedColimit};

/// A finite list of colimit weights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightClass {
    weights: Vec<Weight>,
}

impl WeightClass {
    pub fn new(weights: Vec<Weight>) -> Result<WeightClass> {
        for w in &weights {
            if w.variance() != Variance::Colimit {
                return Err(Error::shape("weight classes hold colimit weights"));
            }
            if let Some(v) = w.functor().violations().into_iter().next() {
                return Err(Error::Invalid(vec![v]));
            }
        }
        Ok(WeightClass { weights })
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Representable(usize),
    /// `φ ∗ S` with `S` sending object `j` of the diagram shape to element `values[j]`.
    Colimit {
        weight: usize,
        values: Vec<usize>,
        arrows: Vec<NatTrans>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureElement {
    /// A presheaf on `B`, with positional labels.
    pub presheaf: SetFunctor,
    pub stage: usize,
    pub witness: Witness,
}

#[derive(Debug, Clone)]
pub struct Closure {
    pub category: Arc<FinCat>,
    pub class: WeightClass,
    pub elements: Vec<ClosureElement>,
    /// Deepest stage computed.
    pub depth: usize,
    /// The last computed stage added nothing.
    pub fixpoint: bool,
}

impl Closure {
    /// The diagram recorded by a colimit witness.
    pub fn witness_diagram(&self, values: &[usize], arrows: &[NatTrans], weight: usize) -> Result<Diagram> {
        let shape = Arc::new(opposite(self.class.weights[weight].domain()));
        let fiber = Arc::new(opposite(&self.category));
        let vs: Vec<SetFunctor> = values.iter().map(|&i| self.elements[i].presheaf.clone()).collect();
        Diagram::from_values(shape, fiber, &vs, arrows)
    }

    /// Recomputes the element from its witness and certifies the isomorphism.
    pub fn replay(&self, i: usize, limits: &Limits) -> Result<Option<NatTrans>> {
        let e = &self.elements[i];
        let recomputed = match &e.witness {
            Witness::Representable(b) => representable(&Arc::new(opposite(&self.category)), *b),
            Witness::Colimit { weight, values, arrows } => {
                let d = self.witness_diagram(values, arrows, *weight)?;
                weighted_colimit(&self.class.weights[*weight], &d)?.object().clone()
            }
        };
        find_iso(&recomputed, &e.presheaf, limits)
    }

    /// Indices of the elements an element was built from, transitively, itself last.
    pub fn chain(&self, i: usize) -> Vec<usize> {
        let mut seen = vec![false; self.elements.len()];
        let mut out = Vec::new();
        fn go(c: &Closure, i: usize, seen: &mut Vec<bool>, out: &mut Vec<usize>) {
            if std::mem::replace(&mut seen[i], true) {
                return;
            }
            if let Witness::Colimit { values, .. } = &c.elements[i].witness {
                for &v in values {
                    go(c, v, seen, out);
                }
            }
            out.push(i);
        }
        go(self, i, &mut seen, &mut out);
        out
    }
}

/// Every functor `shape → (full subcategory on elems)`, as value and arrow assignments.
fn diagrams_over(
    shape: &FinCat,
    elems: &[SetFunctor],
    homs: &mut HashMap<(usize, usize), Vec<NatTrans>>,
    counter: &mut Counter,
    limits: &Limits,
    visit: &mut dyn FnMut(&[usize], &[NatTrans]) -> Result<()>,
) -> Result<()> {
    let n = shape.n_objects();
    let m = elems.len();
    if n > 0 && m == 0 {
        return Ok(());
    }
    let moving: Vec<usize> = (0..shape.n_morphisms()).filter(|&f| !shape.is_identity(f)).collect();
    let pairs: Vec<(usize, usize, usize)> = shape.composable_pairs().collect();
    let mut values = vec![0usize; n];
    loop {
        counter.tick()?;
        for &f in &moving {
            let key = (values[shape.src(f)], values[shape.tgt(f)]);
            if let Entry::Vacant(e) = homs.entry(key) {
                e.insert(nat_set(&elems[key.0], &elems[key.1], limits)?);
            }
        }
        let mut arrows: Vec<Option<NatTrans>> = vec![None; shape.n_morphisms()];
        for o in 0..n {
            arrows[shape.id(o)] = Some(NatTrans::identity(&elems[values[o]]));
        }
        assign(shape, &moving, 0, &values, homs, &pairs, &mut arrows, counter, visit)?;
        // Next value tuple, last object fastest.
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            values[k] += 1;
            if values[k] < m {
                break;
            }
            values[k] = 0;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    shape: &FinCat,
    moving: &[usize],
    i: usize,
    values: &[usize],
    homs: &HashMap<(usize, usize), Vec<NatTrans>>,
    pairs: &[(usize, usize, usize)],
    arrows: &mut Vec<Option<NatTrans>>,
    counter: &mut Counter,
    visit: &mut dyn FnMut(&[usize], &[NatTrans]) -> Result<()>,
) -> Result<()> {
    let consistent = |arrows: &[Option<NatTrans>]| {
        pairs
            .iter()
            .all(|&(g, f, h)| match (&arrows[g], &arrows[f], &arrows[h]) {
                (Some(a), Some(b), Some(c)) => a.after(b) == *c,
                _ => true,
            })
    };
    if i == moving.len() {
        let all: Vec<NatTrans> = arrows.iter().map(|a| a.clone().expect("assigned")).collect();
        return visit(values, &all);
    }
    let f = moving[i];
    for t in &homs[&(values[shape.src(f)], values[shape.tgt(f)])] {
        counter.tick()?;
        arrows[f] = Some(t.clone());
        if consistent(arrows) {
            assign(shape, moving, i + 1, values, homs, pairs, arrows, counter, visit)?;
        }
    }
    arrows[f] = None;
    Ok(())
}

/// Stage 0 is the representables up to isomorphism; stage `s + 1` adds every `φ ∗ S` for
/// `φ` in the class and `S` a diagram into the elements built so far, kept when not
/// isomorphic to an earlier element. Stops after `depth` stages or at the first stage adding nothing.
pub fn closure_iterate(class: &WeightClass, b: &Arc<FinCat>, depth: usize, limits: &Limits) -> Result<Closure> {
    let op_b = Arc::new(opposite(b));
    // Isomorphic objects give isomorphic representables; the first one stands for both.
    let mut elements: Vec<ClosureElement> = Vec::with_capacity(b.n_objects());
    for x in 0..b.n_objects() {
        let y = representable(&op_b, x).relabelled();
        let mut seen = false;
        for e in &elements {
            seen |= e.presheaf.sizes() == y.sizes() && find_iso(&e.presheaf, &y, limits)?.is_some();
        }
        if !seen {
            elements.push(ClosureElement {
                presheaf: y,
                stage: 0,
                witness: Witness::Representable(x),
            });
        }
    }
    let mut counter = limits.counter();
    let mut fixpoint = false;
    let mut reached = 0;
    for stage in 1..=depth {
        let built: Vec<SetFunctor> = elements.iter().map(|e| e.presheaf.clone()).collect();
        let mut homs = HashMap::new();
        let mut fresh: Vec<ClosureElement> = Vec::new();
        for (wi, w) in class.weights.iter().enumerate() {
            let shape = Arc::new(opposite(w.domain()));
            let mut visit = |values: &[usize], arrows: &[NatTrans]| -> Result<()> {
                let vs: Vec<SetFunctor> = values.iter().map(|&i| built[i].clone()).collect();
                let d = Diagram::from_values(shape.clone(), op_b.clone(), &vs, arrows)?;
                let obj = weighted_colimit(w, &d)?.object().relabelled();
                for e in built.iter().chain(fresh.iter().map(|e| &e.presheaf)) {
                    if e.sizes() == obj.sizes() && find_iso(e, &obj, limits)?.is_some() {
                        return Ok(());
                    }
                }
                fresh.push(ClosureElement {
                    presheaf: obj,
                    stage,
                    witness: Witness::Colimit {
                        weight: wi,
                        values: values.to_vec(),
                        arrows: arrows.to_vec(),
                    },
                });
                Ok(())
            };
            diagrams_over(&shape, &built, &mut homs, &mut counter, limits, &mut visit)?;
        }
        reached = stage;
        if fresh.is_empty() {
            fixpoint = true;
            break;
        }
        elements.extend(fresh);
    }
    Ok(Closure {
        category: b.clone(),
        class: class.clone(),
        elements,
        depth: reached,
        fixpoint,
    })
}

/// A bounded membership answer. `found` is `None` when nothing isomorphic to `ψ` appeared
/// up to `depth`; that says nothing about deeper stages unless `fixpoint` is set.
#[derive(Debug, Clone)]
pub struct Membership {
    pub found: Option<(usize, NatTrans)>,
    pub closure: Closure,
}

impl Membership {
    pub fn stage(&self) -> Option<usize> {
        self.found.as_ref().map(|(i, _)| self.closure.elements[*i].stage)
    }
}

pub fn saturation_member(
    psi: &SetFunctor,
    class: &WeightClass,
    b: &Arc<FinCat>,
    depth: usize,
    limits: &Limits,
) -> Result<Membership> {
    if psi.source().as_ref() != &opposite(b) {
        return Err(Error::shape("presheaf must live on op(B)"));
    }
    let closure = closure_iterate(class, b, depth, limits)?;
    let mut found = None;
    for (i, e) in closure.elements.iter().enumerate() {
        if e.presheaf.sizes() == psi.sizes() {
            if let Some(iso) = find_iso(&e.presheaf, psi, limits)? {
                found = Some((i, iso));
                break;
            }
        }
    }
    Ok(Membership { found, closure })
}

/// `F ∗ G` for `F` a presheaf on `A` and `G: A → presheaves on C`, the left Kan extension
/// of `G` along the Yoneda embedding evaluated at `F`.
pub fn lan_extend(g: &Diagram, f: &SetFunctor) -> Result<WeightedColimit> {
    weighted_colimit(&Weight::colimit(f.clone()), g)
}

/// The map `F ∗ G → F' ∗ G` induced by `α: F ⇒ F'`.
pub fn lan_map(alpha: &NatTrans, from: &WeightedColimit, to: &WeightedColimit) -> NatTrans {
    let fiber = from.diagram.fiber();
    let mut comps: Vec<Vec<usize>> = (0..fiber.n_objects()).map(|c| vec![0; from.object().size(c)]).collect();
    for (p, &(k, a)) in from.elements.points.iter().enumerate() {
        let q = to.elements.point_of(k, alpha.components[k][a]);
        for (c, comp) in comps.iter_mut().enumerate() {
            for (x, &cls) in from.colimit.cocone[p].components[c].iter().enumerate() {
                comp[cls] = to.colimit.cocone[q].components[c][x];
            }
        }
    }
    NatTrans::new(comps)
}

/// Checks `Lan(φ ∗ S) ≅ φ ∗ (Lan ∘ S)` for a colimit-witnessed closure element, with the
/// comparison computed from the induced maps.
pub fn lan_preserves(closure: &Closure, i: usize, g: &Diagram, limits: &Limits) -> Result<bool> {
    let Witness::Colimit { weight, values, arrows } = &closure.elements[i].witness else {
        return Ok(true);
    };
    let w = &closure.class.weights[*weight];
    let shape = Arc::new(opposite(w.domain()));
    let pieces: Vec<WeightedColimit> = values
        .iter()
        .map(|&v| lan_extend(g, &closure.elements[v].presheaf))
        .collect::<Result<_>>()?;
    let lan_arrows: Vec<NatTrans> = arrows
        .iter()
        .enumerate()
        .map(|(f, a)| lan_map(a, &pieces[shape.src(f)], &pieces[shape.tgt(f)]))
        .collect();
    let vals: Vec<SetFunctor> = pieces.iter().map(|p| p.object().clone()).collect();
    let d = Diagram::from_values(shape, g.fiber().clone(), &vals, &lan_arrows)?;
    let outer = weighted_colimit(w, &d)?;
    let direct = lan_extend(g, &closure.elements[i].presheaf)?;
    Ok(find_iso(outer.object(), direct.object(), limits)?.is_some())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomVerdict {
    pub atom: bool,
    /// Indices of instances whose colimit `nat(a, −)` does not preserve.
    pub failing: Vec<usize>,
}

/// Whether `nat(a, −)` preserves each given colimit.
pub fn atom_check(a: &SetFunctor, instances: &[WeightedColimit], limits: &Limits) -> Result<AtomVerdict> {
    let mut failing = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        if !preserves_colimit(&Ambient::HomFrom(a.clone()), inst, limits)?.preserved {
            failing.push(i);
        }
    }
    Ok(AtomVerdict {
        atom: failing.is_empty(),
        failing,
    })
}

/// A universal arrow `η: F → Yb`: every `F → Yb'` factors as `Y(v) ∘ η` for exactly one
/// `v: b → b'`.
pub fn reflect_into_representables(
    f: &SetFunctor,
    b: &Arc<FinCat>,
    limits: &Limits,
) -> Result<Option<(usize, NatTrans)>> {
    let op_b = Arc::new(opposite(b));
    let reps: Vec<SetFunctor> = (0..b.n_objects()).map(|x| representable(&op_b, x)).collect();
    // Y(v) on components: h ↦ v ∘ h.
    let post = |v: usize, t: &NatTrans, from: usize| -> NatTrans {
        let to = b.tgt(v);
        NatTrans::new(
            (0..b.n_objects())
                .map(|c| {
                    t.components[c]
                        .iter()
                        .map(|&i| {
                            let h = op_b.hom(from, c)[i];
                            let vh = b.comp(v, h);
                            op_b.hom(to, c).iter().position(|&g| g == vh).expect("composite in hom")
                        })
                        .collect()
                })
                .collect(),
        )
    };
    for x in 0..b.n_objects() {
        for eta in nat_set(f, &reps[x], limits)? {
            let universal = (0..b.n_objects()).all(|y| {
                let Ok(all) = nat_set(f, &reps[y], limits) else {
                    return false;
                };
                let mut images: Vec<NatTrans> = b.hom(x, y).iter().map(|&v| post(v, &eta, x)).collect();
                images.sort();
                images.dedup();
                let mut all = all;
                all.sort();
                images.len() == b.hom(x, y).len() && images == all
            });
            if universal {
                return Ok(Some((x, eta)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn coproducts() -> WeightClass {
        WeightClass::new(vec![Weight::conical(
            Arc::new(fixtures::discrete_pair()),
            Variance::Colimit,
        )])
        .unwrap()
    }

    #[test]
    fn binary_coproducts_over_terminal() {
        let one = Arc::new(fixtures::terminal());
        let c = closure_iterate(&coproducts(), &one, 2, &Limits::default()).unwrap();
        let sizes: Vec<usize> = c.elements.iter().map(|e| e.presheaf.size(0)).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4]);
        for i in 0..c.elements.len() {
            assert!(c.replay(i, &Limits::default()).unwrap().is_some());
        }
    }

    #[test]
    fn empty_class_gives_representables() {
        for (name, b) in fixtures::categories() {
            let b = Arc::new(b);
            let c = closure_iterate(&WeightClass::default(), &b, 3, &Limits::default()).unwrap();
            // One element per isomorphism class of objects.
            let iso = |x: usize, y: usize| {
                b.hom(x, y).iter().any(|&f| {
                    b.hom(y, x)
                        .iter()
                        .any(|&g| b.comp(g, f) == b.id(x) && b.comp(f, g) == b.id(y))
                })
            };
            let classes = (0..b.n_objects()).filter(|&y| (0..y).all(|x| !iso(x, y))).count();
            assert_eq!(c.elements.len(), classes, "{name}");
            assert!(c.fixpoint);
        }
    }

    #[test]
    fn empty_category_edge() {
        let empty = Arc::new(fixtures::empty());
        let c = closure_iterate(&coproducts(), &empty, 2, &Limits::default()).unwrap();
        assert!(c.elements.is_empty());
        let initial = WeightClass::new(vec![Weight::conical(empty.clone(), Variance::Colimit)]).unwrap();
        let c = closure_iterate(&initial, &empty, 2, &Limits::default()).unwrap();
        assert_eq!(c.elements.len(), 1);
        assert_eq!(c.elements[0].presheaf.source().n_objects(), 0);
    }

    #[test]
    fn membership_is_depth_stamped() {
        let one = Arc::new(fixtures::terminal());
        let two = SetFunctor::constant(one.clone(), 2);
        let m = saturation_member(&two, &coproducts(), &one, 2, &Limits::default()).unwrap();
        assert_eq!(m.stage(), Some(1));
        let none = SetFunctor::constant(one.clone(), 0);
        let m = saturation_member(&none, &coproducts(), &one, 2, &Limits::default()).unwrap();
        assert!(m.found.is_none());
        assert!(!m.closure.fixpoint);
    }

    #[test]
    fn lan_of_two_points() {
        let one = Arc::new(fixtures::terminal());
        let c = closure_iterate(&coproducts(), &one, 1, &Limits::default()).unwrap();
        let g = Diagram::of_sets(&SetFunctor::constant(one.clone(), 3));
        let out = lan_extend(&g, &c.elements[1].presheaf).unwrap();
        assert_eq!(out.object().size(0), 6);
        assert!(lan_preserves(&c, 1, &g, &Limits::default()).unwrap());
    }

    #[test]
    fn atoms() {
        let one = Arc::new(fixtures::terminal());
        let disc = Arc::new(fixtures::discrete_pair());
        let s = Diagram::of_sets(&SetFunctor::terminal(Arc::new(opposite(&disc))));
        let inst = weighted_colimit(&Weight::conical(disc, Variance::Colimit), &s).unwrap();
        let two = SetFunctor::constant(one.clone(), 2);
        assert!(
            !atom_check(&two, std::slice::from_ref(&inst), &Limits::default())
                .unwrap()
                .atom
        );
        assert!(
            atom_check(&SetFunctor::terminal(one), &[inst], &Limits::default())
                .unwrap()
                .atom
        );
        assert!(atom_check(&two, &[], &Limits::default()).unwrap().atom);
    }

    #[test]
    fn coproducts_reflect_into_posets_with_joins() {
        for b in [fixtures::terminal(), fixtures::arrow(), fixtures::chain3()] {
            let b = Arc::new(b);
            let c = closure_iterate(&coproducts(), &b, 1, &Limits::default()).unwrap();
            for e in &c.elements {
                assert!(reflect_into_representables(&e.presheaf, &b, &Limits::default())
                    .unwrap()
                    .is_some());
            }
        }
    }

    #[test]
    fn splitting_reaches_fixpoint_and_is_stable() {
        let idem = Arc::new(fixtures::idem());
        let split = WeightClass::new(vec![Weight::conical(idem.clone(), Variance::Colimit)]).unwrap();
        let c = closure_iterate(&split, &idem, 4, &Limits::default()).unwrap();
        assert!(c.fixpoint);
        assert_eq!(c.elements.len(), 2);
        let mut more = split.weights().to_vec();
        more.extend(c.elements.iter().map(|e| Weight::colimit(e.presheaf.clone())));
        let again = closure_iterate(&WeightClass::new(more).unwrap(), &idem, 1, &Limits::default()).unwrap();
        assert_eq!(again.elements.len(), 2);
    }
}
