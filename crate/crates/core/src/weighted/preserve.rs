use std::collections::HashMap;
use std::sync::Arc;

use super::{weighted_colimit, weighted_limit, WeightedColimit, WeightedLimit};
use crate::cat::FinCat;
use crate::error::{Error, Limits, Result};
use crate::fixtures;
use crate::names;
use crate::setfun::{nat_set, Diagram, NatTrans, SetFunctor};

/// A functor out of a presheaf category `[C, FinSet]` (finite sets being `C = I`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    Identity,
    /// Evaluation at an object of `C`, landing in finite sets.
    Evaluate(usize),
    /// `nat(a, −)`, landing in finite sets.
    HomFrom(SetFunctor),
}

/// An object together with whatever bookkeeping is needed to apply the functor to maps.
struct Applied {
    value: SetFunctor,
    nats: Option<(Vec<NatTrans>, HashMap<NatTrans, usize>)>,
}

impl Ambient {
    fn target_fiber(&self, fiber: &Arc<FinCat>) -> Arc<FinCat> {
        match self {
            Ambient::Identity => fiber.clone(),
            _ => Arc::new(fixtures::terminal()),
        }
    }

    fn object(&self, x: &SetFunctor, limits: &Limits) -> Result<Applied> {
        Ok(match self {
            Ambient::Identity => Applied {
                value: x.clone(),
                nats: None,
            },
            Ambient::Evaluate(c) => Applied {
                value: SetFunctor::set(x.labels(*c).to_vec()),
                nats: None,
            },
            Ambient::HomFrom(a) => {
                let ns = nat_set(a, x, limits)?;
                let index = ns.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
                Applied {
                    value: SetFunctor::set(names::numbered(ns.len())),
                    nats: Some((ns, index)),
                }
            }
        })
    }

    fn arrow(&self, alpha: &NatTrans, from: &Applied, to: &Applied) -> NatTrans {
        match self {
            Ambient::Identity => alpha.clone(),
            Ambient::Evaluate(c) => NatTrans::new(vec![alpha.components[*c].clone()]),
            Ambient::HomFrom(_) => {
                let (src, _) = from.nats.as_ref().expect("hom data");
                let (_, idx) = to.nats.as_ref().expect("hom data");
                NatTrans::new(vec![src.iter().map(|b| idx[&alpha.after(b)]).collect()])
            }
        }
    }

    fn check_domain(&self, fiber: &FinCat) -> Result<()> {
        match self {
            Ambient::Identity => Ok(()),
            Ambient::Evaluate(c) if *c < fiber.n_objects() => Ok(()),
            Ambient::Evaluate(_) => Err(Error::shape("evaluation object outside the category")),
            Ambient::HomFrom(a) if a.source().as_ref() == fiber => Ok(()),
            Ambient::HomFrom(_) => Err(Error::shape("hom functor object lives on another category")),
        }
    }

    /// `F ∘ D`, with the applied values kept for transporting (co)cones.
    fn diagram(&self, d: &Diagram, limits: &Limits) -> Result<(Diagram, Vec<Applied>)> {
        let shape = d.shape();
        let applied: Vec<Applied> = (0..shape.n_objects())
            .map(|j| self.object(&d.value(j), limits))
            .collect::<Result<_>>()?;
        let arrows: Vec<NatTrans> = (0..shape.n_morphisms())
            .map(|f| self.arrow(&d.arrow(f), &applied[shape.src(f)], &applied[shape.tgt(f)]))
            .collect();
        let values: Vec<SetFunctor> = applied.iter().map(|a| a.value.clone()).collect();
        let fd = Diagram::from_values(shape.clone(), self.target_fiber(d.fiber()), &values, &arrows)?;
        Ok((fd, applied))
    }
}

/// Whether the canonical comparison map between `F` of a (co)limit and the (co)limit of
/// `F` applied to the diagram is invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preservation {
    pub preserved: bool,
    /// Colimits: `φ∗(F∘S) ⇒ F(φ∗S)`. Limits: `F{ψ,T} ⇒ {ψ,F∘T}`.
    pub comparison: NatTrans,
    pub source_sizes: Vec<usize>,
    pub target_sizes: Vec<usize>,
    pub witness: Option<String>,
}

fn bijectivity(comparison: &NatTrans, src: &SetFunctor, tgt: &SetFunctor) -> Option<String> {
    for c in 0..src.source().n_objects() {
        let mut hit = vec![None; tgt.size(c)];
        for (x, &y) in comparison.components[c].iter().enumerate() {
            if let Some(x0) = hit[y] {
                return Some(format!(
                    "not injective at {}: {} and {} both go to {}",
                    src.source().object_name(c),
                    src.label(c, x0),
                    src.label(c, x),
                    tgt.label(c, y)
                ));
            }
            hit[y] = Some(x);
        }
        if let Some(y) = hit.iter().position(Option::is_none) {
            return Some(format!(
                "not surjective at {}: {} is missed",
                src.source().object_name(c),
                tgt.label(c, y)
            ));
        }
    }
    None
}

pub fn preserves_colimit(f: &Ambient, inst: &WeightedColimit, limits: &Limits) -> Result<Preservation> {
    f.check_domain(inst.diagram.fiber())?;
    let (fd, applied) = f.diagram(&inst.diagram, limits)?;
    let q = weighted_colimit(&inst.weight, &fd)?;
    let fc = f.object(inst.object(), limits)?;
    let points = &inst.elements.points;
    let funits: Vec<NatTrans> = points
        .iter()
        .enumerate()
        .map(|(p, &(k, _))| f.arrow(&inst.colimit.cocone[p], &applied[k], &fc))
        .collect();
    let fiber = fd.fiber();
    let mut comps = Vec::with_capacity(fiber.n_objects());
    for c in 0..fiber.n_objects() {
        let mut comp = vec![usize::MAX; q.object().size(c)];
        for (p, unit) in funits.iter().enumerate() {
            for (y, &img) in unit.components[c].iter().enumerate() {
                let cls = q.colimit.cocone[p].components[c][y];
                if comp[cls] == usize::MAX {
                    comp[cls] = img;
                } else if comp[cls] != img {
                    return Err(Error::Internal("comparison map is not well defined".into()));
                }
            }
        }
        comps.push(comp);
    }
    let comparison = NatTrans::new(comps);
    let witness = bijectivity(&comparison, q.object(), &fc.value);
    Ok(Preservation {
        preserved: witness.is_none(),
        comparison,
        source_sizes: q.object().sizes(),
        target_sizes: fc.value.sizes(),
        witness,
    })
}

pub fn preserves_limit(f: &Ambient, inst: &WeightedLimit, limits: &Limits) -> Result<Preservation> {
    f.check_domain(inst.diagram.fiber())?;
    let (fd, applied) = f.diagram(&inst.diagram, limits)?;
    let q = weighted_limit(&inst.weight, &fd, limits)?;
    let fl = f.object(inst.object(), limits)?;
    let points = &inst.elements.points;
    let fcounits: Vec<NatTrans> = points
        .iter()
        .enumerate()
        .map(|(p, &(k, _))| f.arrow(&inst.limit.cone[p], &fl, &applied[k]))
        .collect();
    let fiber = fd.fiber();
    let mut comps = Vec::with_capacity(fiber.n_objects());
    for c in 0..fiber.n_objects() {
        let index: HashMap<&[usize], usize> = q.limit.tuples[c]
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i))
            .collect();
        let comp = (0..fl.value.size(c))
            .map(|x| {
                let tuple: Vec<usize> = fcounits.iter().map(|u| u.components[c][x]).collect();
                index
                    .get(tuple.as_slice())
                    .copied()
                    .ok_or_else(|| Error::Internal("transported counit is not a cone".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        comps.push(comp);
    }
    let comparison = NatTrans::new(comps);
    let witness = bijectivity(&comparison, &fl.value, q.object());
    Ok(Preservation {
        preserved: witness.is_none(),
        comparison,
        source_sizes: fl.value.sizes(),
        target_sizes: q.object().sizes(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighted::{Variance, Weight};

    #[test]
    fn hom_from_two_fails_on_binary_coproduct() {
        let disc = Arc::new(fixtures::discrete_pair());
        let op = Arc::new(crate::cat::opposite(&disc));
        let s = Diagram::of_sets(&SetFunctor::terminal(op));
        let inst = weighted_colimit(&Weight::conical(disc, Variance::Colimit), &s).unwrap();
        let two = SetFunctor::constant(Arc::new(fixtures::terminal()), 2);
        let p = preserves_colimit(&Ambient::HomFrom(two), &inst, &Limits::default()).unwrap();
        assert!(!p.preserved);
        assert_eq!(p.source_sizes, vec![2]);
        assert_eq!(p.target_sizes, vec![4]);
        let id = preserves_colimit(&Ambient::Identity, &inst, &Limits::default()).unwrap();
        assert!(id.preserved);
    }
}
