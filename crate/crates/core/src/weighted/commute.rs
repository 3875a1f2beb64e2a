use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::{weighted_colimit, weighted_limit, Variance, Weight};
use crate::cat::{opposite, product};
use crate::error::{Error, Limits, Result};
use crate::setfun::{elements, for_each_set_functor, Diagram, SetFunctor};

/// The canonical map `φ ∗ {ψ, S} → {ψ, φ ∗ S}` and whether it is invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonVerdict {
    pub colimit_of_limits: usize,
    pub limit_of_colimits: usize,
    pub map: Vec<usize>,
    pub invertible: bool,
    pub inverse: Option<Vec<usize>>,
    pub witness: Option<String>,
}

fn check_weights(phi: &Weight, psi: &Weight) -> Result<()> {
    if phi.variance() != Variance::Colimit || psi.variance() != Variance::Limit {
        return Err(Error::shape("commutation needs a colimit weight and a limit weight"));
    }
    Ok(())
}

/// Builds both sides for `S: op(K) × L → FinSet` and the comparison induced by the two
/// universal properties.
pub fn commutes_at(phi: &Weight, psi: &Weight, s: &SetFunctor, limits: &Limits) -> Result<ComparisonVerdict> {
    check_weights(phi, psi)?;
    let k_op = Arc::new(opposite(phi.domain()));
    let l = psi.domain().clone();
    if s.source().as_ref() != &product(&k_op, &l) {
        return Err(Error::shape("S must live on op(K) × L"));
    }
    let by_k = Diagram::from_carrier(k_op.clone(), l.clone(), s.clone())?;
    // Left: limits first, pointwise in op(K), then the colimit.
    let inner_lim = weighted_limit(psi, &by_k.transpose(), limits)?;
    let left = weighted_colimit(phi, &Diagram::of_sets(inner_lim.object()))?;
    // Right: colimits first, pointwise in L, then the limit.
    let inner_col = weighted_colimit(phi, &by_k)?;
    let right = weighted_limit(psi, &Diagram::of_sets(inner_col.object()), limits)?;

    let index: HashMap<&[usize], usize> = right.limit.tuples[0]
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let psi_points = &inner_lim.elements.points;
    let mut map = Vec::with_capacity(left.object().size(0));
    for &(p, x) in &left.colimit.reps[0] {
        let (k, _) = left.elements.points[p];
        // x is a compatible family over el(ψ) in S(k, −).
        let fam = &inner_lim.limit.tuples[k][x];
        let image: Vec<usize> = psi_points
            .iter()
            .enumerate()
            .map(|(q, &(lq, _))| inner_col.colimit.cocone[p].components[lq][fam[q]])
            .collect();
        let y = index
            .get(image.as_slice())
            .copied()
            .ok_or_else(|| Error::Internal("comparison image is not a cone".into()))?;
        map.push(y);
    }
    let (a, b) = (left.object().size(0), right.object().size(0));
    let mut inverse = vec![usize::MAX; b];
    let mut witness = None;
    for (x, &y) in map.iter().enumerate() {
        if inverse[y] != usize::MAX && witness.is_none() {
            witness = Some(format!(
                "not injective: {} and {} both go to {}",
                left.object().label(0, inverse[y]),
                left.object().label(0, x),
                right.object().label(0, y)
            ));
        }
        inverse[y] = x;
    }
    if witness.is_none() {
        if let Some(y) = inverse.iter().position(|&x| x == usize::MAX) {
            witness = Some(format!("not surjective: {} is missed", right.object().label(0, y)));
        }
    }
    let invertible = witness.is_none();
    Ok(ComparisonVerdict {
        colimit_of_limits: a,
        limit_of_colimits: b,
        map,
        invertible,
        inverse: invertible.then_some(inverse),
        witness,
    })
}

/// Result of a bounded commutation search. A clean outcome says nothing beyond the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub max_set_size: usize,
    pub checked: u64,
    pub counterexample: Option<(SetFunctor, ComparisonVerdict)>,
}

/// Checks every `S: op(K) × L → FinSet` with sets of at most `max_set_size` elements in
/// canonical order and stops at the first one whose comparison is not invertible.
pub fn commutation_search(phi: &Weight, psi: &Weight, max_set_size: usize, limits: &Limits) -> Result<SearchOutcome> {
    check_weights(phi, psi)?;
    let prod = Arc::new(product(&opposite(phi.domain()), psi.domain()));
    let mut checked = 0u64;
    let mut found = None;
    let mut failure = None;
    let _ = for_each_set_functor(&prod, max_set_size, limits, |s| {
        checked += 1;
        match commutes_at(phi, psi, s, limits) {
            Ok(v) if v.invertible => ControlFlow::Continue(()),
            Ok(v) => {
                found = Some((s.clone(), v));
                ControlFlow::Break(())
            }
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(SearchOutcome {
        max_set_size,
        checked,
        counterexample: found,
    })
}

/// Filteredness of `el(φ)^op`, the category the colimit `φ ∗ −` is taken over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatVerdict {
    pub flat: bool,
    pub witness: Option<String>,
}

pub fn is_flat_finlim(phi: &Weight) -> Result<FlatVerdict> {
    if phi.variance() != Variance::Colimit {
        return Err(Error::shape("flatness is a property of colimit weights"));
    }
    let el = elements(phi.functor(), Variance::Colimit);
    let c = &el.category;
    let fail = |w: String| FlatVerdict {
        flat: false,
        witness: Some(w),
    };
    let n = c.n_objects();
    if n == 0 {
        return Ok(fail("category of elements is empty".into()));
    }
    for x in 0..n {
        for y in x + 1..n {
            let cocone = (0..n).any(|z| !c.hom(x, z).is_empty() && !c.hom(y, z).is_empty());
            if !cocone {
                return Ok(fail(format!(
                    "no cocone on {} and {}",
                    c.object_name(x),
                    c.object_name(y)
                )));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let hom = c.hom(x, y);
            for (i, &u) in hom.iter().enumerate() {
                for &v in &hom[i + 1..] {
                    let coequalized = c.out_of(y).any(|w| c.comp(w, u) == c.comp(w, v));
                    if !coequalized {
                        return Ok(fail(format!(
                            "{} and {} are not coequalized",
                            c.morphism_name(u),
                            c.morphism_name(v)
                        )));
                    }
                }
            }
        }
    }
    Ok(FlatVerdict {
        flat: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::setfun::corepresentable;

    fn conical(c: crate::cat::FinCat, v: Variance) -> Weight {
        Weight::conical(Arc::new(c), v)
    }

    #[test]
    fn coproducts_do_not_commute_with_products() {
        let phi = conical(fixtures::discrete_pair(), Variance::Colimit);
        let psi = conical(fixtures::discrete_pair(), Variance::Limit);
        let prod = Arc::new(product(&opposite(phi.domain()), psi.domain()));
        let v = commutes_at(&phi, &psi, &SetFunctor::terminal(prod), &Limits::default()).unwrap();
        assert_eq!((v.colimit_of_limits, v.limit_of_colimits), (2, 4));
        assert!(!v.invertible);
    }

    #[test]
    fn representable_weight_commutes() {
        let two = Arc::new(fixtures::arrow());
        let phi = Weight::colimit(corepresentable(&two, 0));
        let psi = conical(fixtures::cospan(), Variance::Limit);
        let out = commutation_search(&phi, &psi, 1, &Limits::default()).unwrap();
        assert!(out.counterexample.is_none());
        assert!(out.checked > 1);
    }

    #[test]
    fn terminal_object_shape_commutes_with_products() {
        let phi = conical(fixtures::arrow(), Variance::Colimit);
        let psi = conical(fixtures::discrete_pair(), Variance::Limit);
        let out = commutation_search(&phi, &psi, 2, &Limits::default()).unwrap();
        assert!(out.counterexample.is_none());
    }

    #[test]
    fn flatness_examples() {
        let one = Arc::new(fixtures::terminal());
        let two_points = Weight::colimit(SetFunctor::constant(one, 2));
        assert!(!is_flat_finlim(&two_points).unwrap().flat);
        assert!(
            is_flat_finlim(&conical(fixtures::arrow(), Variance::Colimit))
                .unwrap()
                .flat
        );
        assert!(
            !is_flat_finlim(&conical(fixtures::parallel_pair(), Variance::Colimit))
                .unwrap()
                .flat
        );
        assert!(
            is_flat_finlim(&conical(fixtures::idem(), Variance::Colimit))
                .unwrap()
                .flat
        );
    }
}
