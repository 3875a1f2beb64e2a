//! Weighted limits and colimits by reduction to conical ones over categories of
//! elements, preservation, the limit/colimit comparison map, and flatness.

mod commute;
mod preserve;
mod verify;

pub use commute::{commutation_search, commutes_at, is_flat_finlim, ComparisonVerdict, FlatVerdict, SearchOutcome};
pub use preserve::{preserves_colimit, preserves_limit, Ambient, Preservation};
pub use verify::{cocones, cones, verify_colimit, verify_limit, UniversalCheck};

use std::sync::Arc;

use crate::cat::{opposite, FinCat};
use crate::error::{Error, Limits, Result};
use crate::setfun::{
    conical_colimit, conical_limit, elements, Colimit, Diagram, Elements, Limit, NatTrans, SetFunctor,
};

pub use crate::setfun::Variance;

/// A set-valued functor on `D` together with the side it weighs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    functor: SetFunctor,
    variance: Variance,
}

impl Weight {
    pub fn new(functor: SetFunctor, variance: Variance) -> Weight {
        Weight { functor, variance }
    }

    pub fn limit(functor: SetFunctor) -> Weight {
        Weight::new(functor, Variance::Limit)
    }

    pub fn colimit(functor: SetFunctor) -> Weight {
        Weight::new(functor, Variance::Colimit)
    }

    /// `Δ1` on `d`.
    pub fn conical(d: Arc<FinCat>, variance: Variance) -> Weight {
        Weight::new(SetFunctor::terminal(d), variance)
    }

    pub fn functor(&self) -> &SetFunctor {
        &self.functor
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn domain(&self) -> &Arc<FinCat> {
        self.functor.source()
    }
}

/// `{ψ, T}` with the category of elements and the conical limit that computed it.
#[derive(Debug, Clone)]
pub struct WeightedLimit {
    pub weight: Weight,
    pub diagram: Diagram,
    pub elements: Elements,
    pub limit: Limit,
}

impl WeightedLimit {
    pub fn object(&self) -> &SetFunctor {
        &self.limit.object
    }

    /// The counit component at `a ∈ ψ(k)`: `{ψ,T} ⇒ T(k)`.
    pub fn counit(&self, k: usize, a: usize) -> &NatTrans {
        &self.limit.cone[self.elements.point_of(k, a)]
    }
}

/// `φ ∗ S` with the category of elements and the conical colimit that computed it.
#[derive(Debug, Clone)]
pub struct WeightedColimit {
    pub weight: Weight,
    pub diagram: Diagram,
    pub elements: Elements,
    pub colimit: Colimit,
}

impl WeightedColimit {
    pub fn object(&self) -> &SetFunctor {
        &self.colimit.object
    }

    /// The unit component at `a ∈ φ(k)`: `S(k) ⇒ φ ∗ S`.
    pub fn unit(&self, k: usize, a: usize) -> &NatTrans {
        &self.colimit.cocone[self.elements.point_of(k, a)]
    }
}

/// `{ψ, T}` for `ψ: D → FinSet` and `T: D → [C, FinSet]`, computed as the limit of
/// `T ∘ d` over `el(ψ)`.
pub fn weighted_limit(psi: &Weight, t: &Diagram, limits: &Limits) -> Result<WeightedLimit> {
    if psi.variance != Variance::Limit {
        return Err(Error::shape("weighted limit needs a limit weight"));
    }
    if t.shape().as_ref() != psi.domain().as_ref() {
        return Err(Error::shape("diagram shape must be the weight's domain"));
    }
    let el = elements(&psi.functor, Variance::Limit);
    let pulled = t.pullback(&el.projection);
    let limit = conical_limit(&pulled, limits)?;
    Ok(WeightedLimit {
        weight: psi.clone(),
        diagram: t.clone(),
        elements: el,
        limit,
    })
}

/// `φ ∗ S` for `φ: D → FinSet` and `S: op(D) → [C, FinSet]`, computed as the colimit of
/// `S ∘ d^op` over `el(φ)^op`.
pub fn weighted_colimit(phi: &Weight, s: &Diagram) -> Result<WeightedColimit> {
    if phi.variance != Variance::Colimit {
        return Err(Error::shape("weighted colimit needs a colimit weight"));
    }
    if s.shape().as_ref() != &opposite(phi.domain()) {
        return Err(Error::shape(
            "diagram shape must be the opposite of the weight's domain",
        ));
    }
    let el = elements(&phi.functor, Variance::Colimit);
    let pulled = s.pullback(&el.projection);
    let colimit = conical_colimit(&pulled);
    Ok(WeightedColimit {
        weight: phi.clone(),
        diagram: s.clone(),
        elements: el,
        colimit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::setfun::{corepresentable, yoneda, NatSearch};

    #[test]
    fn product_and_coproduct_sizes() {
        let disc = Arc::new(fixtures::discrete_pair());
        let mut maps = vec![vec![]; 2];
        maps[disc.id(0)] = vec![0, 1];
        maps[disc.id(1)] = vec![0];
        let t = SetFunctor::from_sizes(disc.clone(), &[2, 1], maps).unwrap();
        let d = Diagram::of_sets(&t);
        let l = weighted_limit(&Weight::conical(disc.clone(), Variance::Limit), &d, &Limits::default()).unwrap();
        assert_eq!(l.object().size(0), 2);
        let c = weighted_colimit(&Weight::conical(disc, Variance::Colimit), &d).unwrap();
        assert_eq!(c.object().size(0), 3);
    }

    #[test]
    fn representable_weight_evaluates() {
        let two = Arc::new(fixtures::arrow());
        let mut maps = vec![vec![]; 3];
        maps[two.id(0)] = vec![0, 1];
        maps[two.id(1)] = vec![0, 1, 2];
        maps[two.morphism("u").unwrap()] = vec![2, 0];
        let t = SetFunctor::from_sizes(two.clone(), &[2, 3], maps).unwrap();
        for k in 0..2 {
            let psi = Weight::limit(corepresentable(&two, k));
            let l = weighted_limit(&psi, &Diagram::of_sets(&t), &Limits::default()).unwrap();
            assert_eq!(l.object().size(0), t.size(k));
        }
    }

    #[test]
    fn yoneda_colimit_recovers_presheaf() {
        let idem = Arc::new(fixtures::idem());
        let y = yoneda(&idem);
        let op = y.opposite.clone();
        let e = op.morphism("e").unwrap();
        let mut maps = vec![vec![]; 2];
        maps[op.id(0)] = vec![0, 1, 2];
        maps[e] = vec![0, 0, 2];
        let phi = SetFunctor::from_sizes(op.clone(), &[3], maps).unwrap();
        let c = weighted_colimit(&Weight::colimit(phi.clone()), &y.diagram()).unwrap();
        let iso = NatSearch::new(c.object(), &phi)
            .unwrap()
            .injective()
            .first(&Limits::default())
            .unwrap();
        assert!(iso.is_some());
    }
}
