use std::collections::HashSet;

use super::{WeightedColimit, WeightedLimit};
use crate::cat::FinCat;
use crate::error::{Counter, Limits, Result};
use crate::setfun::{nat_set, Diagram, NatTrans, SetFunctor};

/// Outcome of checking a universal property against finitely many competitors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalCheck {
    /// Largest constant competitor tried.
    pub scale: usize,
    pub competitors: usize,
    pub holds: bool,
    pub witness: Option<String>,
}

/// Every cone over `d` with apex `x` (a functor on the fiber), by brute force: all
/// choices of one transformation `x ⇒ d(j)` per object, filtered by compatibility.
pub fn cones(d: &Diagram, x: &SetFunctor, limits: &Limits) -> Result<Vec<Vec<NatTrans>>> {
    let shape = d.shape();
    let legs: Vec<Vec<NatTrans>> = (0..shape.n_objects())
        .map(|j| nat_set(x, &d.value(j), limits))
        .collect::<Result<_>>()?;
    let arrows: Vec<NatTrans> = (0..shape.n_morphisms()).map(|f| d.arrow(f)).collect();
    families(shape, &legs, limits, |f, chosen| {
        let (s, t) = (shape.src(f), shape.tgt(f));
        arrows[f].after(chosen[s]) == *chosen[t]
    })
}

/// Every cocone under `d` with vertex `x`, by brute force.
pub fn cocones(d: &Diagram, x: &SetFunctor, limits: &Limits) -> Result<Vec<Vec<NatTrans>>> {
    let shape = d.shape();
    let legs: Vec<Vec<NatTrans>> = (0..shape.n_objects())
        .map(|j| nat_set(&d.value(j), x, limits))
        .collect::<Result<_>>()?;
    let arrows: Vec<NatTrans> = (0..shape.n_morphisms()).map(|f| d.arrow(f)).collect();
    families(shape, &legs, limits, |f, chosen| {
        let (s, t) = (shape.src(f), shape.tgt(f));
        chosen[t].after(&arrows[f]) == *chosen[s]
    })
}

fn families(
    shape: &FinCat,
    legs: &[Vec<NatTrans>],
    limits: &Limits,
    compatible: impl Fn(usize, &[&NatTrans]) -> bool,
) -> Result<Vec<Vec<NatTrans>>> {
    let n = shape.n_objects();
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
    for f in 0..shape.n_morphisms() {
        if !shape.is_identity(f) {
            due[shape.src(f).max(shape.tgt(f))].push(f);
        }
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; n];
    let mut counter = limits.counter();
    fn go(
        j: usize,
        legs: &[Vec<NatTrans>],
        due: &[Vec<usize>],
        pick: &mut Vec<usize>,
        out: &mut Vec<Vec<NatTrans>>,
        counter: &mut Counter,
        compatible: &impl Fn(usize, &[&NatTrans]) -> bool,
    ) -> Result<()> {
        if j == legs.len() {
            out.push(pick.iter().enumerate().map(|(i, &p)| legs[i][p].clone()).collect());
            return Ok(());
        }
        for p in 0..legs[j].len() {
            counter.tick()?;
            pick[j] = p;
            let chosen: Vec<&NatTrans> = (0..=j).map(|i| &legs[i][pick[i]]).collect();
            if due[j].iter().all(|&f| compatible(f, &chosen)) {
                go(j + 1, legs, due, pick, out, counter, compatible)?;
            }
        }
        Ok(())
    }
    go(0, legs, &due, &mut pick, &mut out, &mut counter, &compatible)?;
    Ok(out)
}

fn competitors(fiber: &std::sync::Arc<FinCat>, scale: usize) -> Vec<SetFunctor> {
    let mut out: Vec<SetFunctor> = (0..=scale).map(|m| SetFunctor::constant(fiber.clone(), m)).collect();
    if fiber.n_objects() != 1 || fiber.n_morphisms() != 1 {
        out.extend((0..fiber.n_objects()).map(|c| crate::setfun::corepresentable(fiber, c)));
    }
    out
}

/// Checks that composing with the counit is a bijection `nat(X, {ψ,T}) → cones(X, T∘d)`
/// for constant competitors `X` up to `scale` elements and, over a non-trivial fiber,
/// the representable ones.
pub fn verify_limit(inst: &WeightedLimit, scale: usize, limits: &Limits) -> Result<UniversalCheck> {
    let pulled = inst.diagram.pullback(&inst.elements.projection);
    let l = inst.object();
    let xs = competitors(l.source(), scale);
    for (i, x) in xs.iter().enumerate() {
        let maps = nat_set(x, l, limits)?;
        let cs = cones(&pulled, x, limits)?;
        let images: HashSet<Vec<NatTrans>> = maps
            .iter()
            .map(|h| inst.limit.cone.iter().map(|leg| leg.after(h)).collect())
            .collect();
        let all_cones = images.iter().all(|im| cs.contains(im));
        if images.len() != maps.len() || maps.len() != cs.len() || !all_cones {
            return Ok(UniversalCheck {
                scale,
                competitors: i + 1,
                holds: false,
                witness: Some(format!(
                    "competitor {i}: {} maps into the limit, {} cones",
                    maps.len(),
                    cs.len()
                )),
            });
        }
    }
    Ok(UniversalCheck {
        scale,
        competitors: xs.len(),
        holds: true,
        witness: None,
    })
}

/// Checks that precomposing with the unit is a bijection `nat(φ∗S, X) → cocones(S∘d^op, X)`.
pub fn verify_colimit(inst: &WeightedColimit, scale: usize, limits: &Limits) -> Result<UniversalCheck> {
    let pulled = inst.diagram.pullback(&inst.elements.projection);
    let c = inst.object();
    let xs = competitors(c.source(), scale);
    for (i, x) in xs.iter().enumerate() {
        let maps = nat_set(c, x, limits)?;
        let cs = cocones(&pulled, x, limits)?;
        let images: HashSet<Vec<NatTrans>> = maps
            .iter()
            .map(|h| inst.colimit.cocone.iter().map(|leg| h.after(leg)).collect())
            .collect();
        let all_cocones = images.iter().all(|im| cs.contains(im));
        if images.len() != maps.len() || maps.len() != cs.len() || !all_cocones {
            return Ok(UniversalCheck {
                scale,
                competitors: i + 1,
                holds: false,
                witness: Some(format!(
                    "competitor {i}: {} maps out of the colimit, {} cocones",
                    maps.len(),
                    cs.len()
                )),
            });
        }
    }
    Ok(UniversalCheck {
        scale,
        competitors: xs.len(),
        holds: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::weighted::{weighted_colimit, weighted_limit, Variance, Weight};
    use std::sync::Arc;

    #[test]
    fn universal_property_of_equalizer_and_coequalizer() {
        let par = Arc::new(fixtures::parallel_pair());
        let mut maps = vec![vec![]; 4];
        maps[par.id(0)] = vec![0, 1];
        maps[par.id(1)] = vec![0, 1];
        maps[par.morphism("f").unwrap()] = vec![0, 1];
        maps[par.morphism("g").unwrap()] = vec![1, 0];
        let t = SetFunctor::from_sizes(par.clone(), &[2, 2], maps).unwrap();
        let d = Diagram::of_sets(&t);
        let l = weighted_limit(&Weight::conical(par.clone(), Variance::Limit), &d, &Limits::default()).unwrap();
        assert!(verify_limit(&l, 2, &Limits::default()).unwrap().holds);
        let op = Arc::new(crate::cat::opposite(&par));
        let s = Diagram::of_sets(&t);
        let c = weighted_colimit(&Weight::conical(op, Variance::Colimit), &s).unwrap();
        assert_eq!(c.object().size(0), 1);
        assert!(verify_colimit(&c, 2, &Limits::default()).unwrap().holds);
    }
}
