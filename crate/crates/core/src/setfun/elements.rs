use std::sync::Arc;

use super::SetFunctor;
use crate::cat::{opposite, FinCat, Functor};
use crate::names;

/// Which side of a weighted (co)limit a weight stands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variance {
    /// Weights `ψ: D → FinSet` for limits of diagrams `D → A`.
    Limit,
    /// Weights `φ: D → FinSet` for colimits of diagrams `op(D) → A`.
    Colimit,
}

impl Variance {
    pub fn as_str(self) -> &'static str {
        match self {
            Variance::Limit => "limit",
            Variance::Colimit => "colimit",
        }
    }
}

/// The category of elements together with its projection.
///
/// For [`Variance::Limit`] this is `d: el(φ) → D`; for [`Variance::Colimit`] it is
/// `d^op: el(φ)^op → op(D)`. Objects are the pairs `(k, a)`, ordered by object then
/// element, and morphism `(u, a)` goes from `(k, a)` to `(k', φ(u)(a))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elements {
    pub category: Arc<FinCat>,
    pub projection: Functor,
    pub points: Vec<(usize, usize)>,
}

impl Elements {
    pub fn point_of(&self, k: usize, a: usize) -> usize {
        self.points.binary_search(&(k, a)).expect("element exists")
    }
}

pub fn elements(phi: &SetFunctor, variance: Variance) -> Elements {
    let d = phi.source();
    let points: Vec<(usize, usize)> = (0..d.n_objects())
        .flat_map(|k| (0..phi.size(k)).map(move |a| (k, a)))
        .collect();
    let mut offsets = Vec::with_capacity(d.n_objects());
    let mut total = 0;
    for k in 0..d.n_objects() {
        offsets.push(total);
        total += phi.size(k);
    }
    let objects: Vec<String> = points
        .iter()
        .map(|&(k, a)| names::pair(d.object_name(k), phi.label(k, a)))
        .collect();
    let mut morphisms = Vec::new();
    let mut lifts = Vec::new();
    let mut moffsets = Vec::with_capacity(d.n_morphisms());
    for u in 0..d.n_morphisms() {
        moffsets.push(morphisms.len());
        let (s, t) = (d.src(u), d.tgt(u));
        for a in 0..phi.size(s) {
            let b = phi.apply(u, a);
            morphisms.push(crate::cat::Morphism {
                name: names::pair(d.morphism_name(u), phi.label(s, a)),
                src: offsets[s] + a,
                tgt: offsets[t] + b,
            });
            lifts.push(u);
        }
    }
    let identities: Vec<usize> = points.iter().map(|&(k, a)| moffsets[d.id(k)] + a).collect();
    let m = morphisms.len();
    let mut table = vec![u32::MAX; m * m];
    for (g, f, h) in d.composable_pairs() {
        let s = d.src(f);
        for a in 0..phi.size(s) {
            let fa = moffsets[f] + a;
            let gb = moffsets[g] + phi.apply(f, a);
            table[gb * m + fa] = (moffsets[h] + a) as u32;
        }
    }
    let el = Arc::new(FinCat::assemble(objects, morphisms, identities, table));
    let on_objects: Vec<usize> = points.iter().map(|&(k, _)| k).collect();
    match variance {
        Variance::Limit => Elements {
            projection: Functor::assemble(el.clone(), d.clone(), on_objects, lifts),
            category: el,
            points,
        },
        Variance::Colimit => {
            let el_op = Arc::new(opposite(&el));
            let d_op = Arc::new(opposite(d));
            Elements {
                projection: Functor::assemble(el_op.clone(), d_op, on_objects, lifts),
                category: el_op,
                points,
            }
        }
    }
}
