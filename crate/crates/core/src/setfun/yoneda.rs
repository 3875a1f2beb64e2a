use std::sync::Arc;

use super::{nat_set, Diagram, NatTrans, SetFunctor};
use crate::cat::{opposite, FinCat};
use crate::error::{Limits, Result, Violation};

/// The covariant hom functor `K(k, −)`, elements labelled by morphism names.
pub fn corepresentable(k: &Arc<FinCat>, o: usize) -> SetFunctor {
    let sets = (0..k.n_objects())
        .map(|c| k.hom(o, c).iter().map(|&f| k.morphism_name(f).to_string()).collect())
        .collect();
    let maps = (0..k.n_morphisms())
        .map(|v| {
            let t = k.tgt(v);
            k.hom(o, k.src(v))
                .iter()
                .map(|&h| position(k.hom(o, t), k.comp(v, h)))
                .collect()
        })
        .collect();
    SetFunctor::assemble(k.clone(), sets, maps)
}

/// The presheaf `B(−, b)`, a functor on `op(B)`; `op_b` must be that opposite.
pub fn representable(op_b: &Arc<FinCat>, b: usize) -> SetFunctor {
    // B(−, b) = op(B)(b, −).
    corepresentable(op_b, b)
}

#[inline]
fn position(list: &[usize], x: usize) -> usize {
    list.iter()
        .position(|&y| y == x)
        .expect("composite lies in the hom-set")
}

/// The Yoneda embedding of `B` into presheaves, as representables plus the
/// postcomposition transformations.
#[derive(Debug, Clone)]
pub struct Yoneda {
    pub category: Arc<FinCat>,
    pub opposite: Arc<FinCat>,
    pub presheaves: Vec<SetFunctor>,
    /// `arrows[g]: Y(src g) ⇒ Y(tgt g)`.
    pub arrows: Vec<NatTrans>,
}

pub fn yoneda(b: &Arc<FinCat>) -> Yoneda {
    let op = Arc::new(opposite(b));
    let presheaves: Vec<SetFunctor> = (0..b.n_objects()).map(|o| representable(&op, o)).collect();
    let arrows = (0..b.n_morphisms())
        .map(|g| {
            let (s, t) = (b.src(g), b.tgt(g));
            NatTrans::new(
                (0..b.n_objects())
                    .map(|c| {
                        b.hom(c, s)
                            .iter()
                            .map(|&h| position(b.hom(c, t), b.comp(g, h)))
                            .collect()
                    })
                    .collect(),
            )
        })
        .collect();
    Yoneda {
        category: b.clone(),
        opposite: op,
        presheaves,
        arrows,
    }
}

impl Yoneda {
    /// `Y` as a diagram `B → [op(B), FinSet]`.
    pub fn diagram(&self) -> Diagram {
        Diagram::from_values(
            self.category.clone(),
            self.opposite.clone(),
            &self.presheaves,
            &self.arrows,
        )
        .expect("Yoneda embedding is functorial")
    }

    /// Checks that `g ↦ Y(g)` is a bijection `B(b, b') → nat(Yb, Yb')` for all pairs.
    pub fn fully_faithful(&self, limits: &Limits) -> Result<std::result::Result<(), Violation>> {
        let b = &self.category;
        for s in 0..b.n_objects() {
            for t in 0..b.n_objects() {
                let nats = nat_set(&self.presheaves[s], &self.presheaves[t], limits)?;
                let hom = b.hom(s, t);
                let mut images: Vec<&NatTrans> = hom.iter().map(|&g| &self.arrows[g]).collect();
                images.sort();
                images.dedup();
                let all_natural = images.iter().all(|a| nats.contains(a));
                if nats.len() != hom.len() || images.len() != hom.len() || !all_natural {
                    return Ok(Err(Violation::new(
                        "Yoneda embedding is fully faithful",
                        format!("{} → {}", b.object_name(s), b.object_name(t)),
                    )));
                }
            }
        }
        Ok(Ok(()))
    }
}
