use std::collections::HashMap;

use super::{Diagram, NatSearch, NatTrans, SetFunctor};
use crate::error::{Limits, Result};
use crate::names;
use crate::unionfind::UnionFind;

/// A pointwise conical limit: the object on the fiber, the compatible tuples behind each
/// element, and the projection cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limit {
    pub object: SetFunctor,
    /// `tuples[c][t][j]` is the `j`-th coordinate of element `t` at fiber object `c`.
    pub tuples: Vec<Vec<Vec<usize>>>,
    /// `cone[j]: object ⇒ value(j)`.
    pub cone: Vec<NatTrans>,
}

/// A pointwise conical colimit with least representatives and the colimiting cocone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colimit {
    pub object: SetFunctor,
    /// `reps[c][k] = (j, x)`, the least element of class `k` at fiber object `c`.
    pub reps: Vec<Vec<(usize, usize)>>,
    /// `cocone[j]: value(j) ⇒ object`.
    pub cocone: Vec<NatTrans>,
}

impl Limit {
    pub fn index(&self, c: usize, tuple: &[usize]) -> Option<usize> {
        self.tuples[c].iter().position(|t| t == tuple)
    }
}

/// Compatible tuples, computed as cones `Δ1 ⇒ D` at each fiber object.
pub fn conical_limit(d: &Diagram, limits: &Limits) -> Result<Limit> {
    let shape = d.shape();
    let fiber = d.fiber();
    let nj = shape.n_objects();
    let one = SetFunctor::terminal(shape.clone());
    let mut tuples = Vec::with_capacity(fiber.n_objects());
    for c in 0..fiber.n_objects() {
        let dc = d.at(c);
        let cones = NatSearch::new(&one, &dc)?.collect(limits)?;
        tuples.push(
            cones
                .into_iter()
                .map(|t| t.components.into_iter().map(|v| v[0]).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        );
    }
    let lookup: Vec<HashMap<&[usize], usize>> = tuples
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect())
        .collect();
    let mut maps = Vec::with_capacity(fiber.n_morphisms());
    for g in 0..fiber.n_morphisms() {
        let (c, c2) = (fiber.src(g), fiber.tgt(g));
        let m = tuples[c]
            .iter()
            .map(|t| {
                let image: Vec<usize> = (0..nj).map(|j| d.apply(shape.id(j), g, t[j])).collect();
                lookup[c2][image.as_slice()]
            })
            .collect();
        maps.push(m);
    }
    let sets = (0..fiber.n_objects())
        .map(|c| {
            tuples[c]
                .iter()
                .map(|t| {
                    let parts: Vec<&str> = (0..nj).map(|j| d.label(j, c, t[j])).collect();
                    names::tuple(&parts)
                })
                .collect()
        })
        .collect();
    let cone = (0..nj)
        .map(|j| NatTrans::new(tuples.iter().map(|ts| ts.iter().map(|t| t[j]).collect()).collect()))
        .collect();
    drop(lookup);
    Ok(Limit {
        object: SetFunctor::assemble(fiber.clone(), sets, maps),
        tuples,
        cone,
    })
}

/// The disjoint union modulo `x ~ D(f)(x)`, classes named after their least member.
pub fn conical_colimit(d: &Diagram) -> Colimit {
    let shape = d.shape();
    let fiber = d.fiber();
    let (nj, nc) = (shape.n_objects(), fiber.n_objects());
    let mut quotients = Vec::with_capacity(nc);
    let mut offsets_all = Vec::with_capacity(nc);
    for c in 0..nc {
        let mut offsets = Vec::with_capacity(nj);
        let mut total = 0;
        for j in 0..nj {
            offsets.push(total);
            total += d.size(j, c);
        }
        let mut uf = UnionFind::new(total);
        let idc = fiber.id(c);
        for f in 0..shape.n_morphisms() {
            if shape.is_identity(f) {
                continue;
            }
            let (s, t) = (shape.src(f), shape.tgt(f));
            for x in 0..d.size(s, c) {
                uf.union(offsets[s] + x, offsets[t] + d.apply(f, idc, x));
            }
        }
        quotients.push(uf.classes());
        offsets_all.push(offsets);
    }
    let reps: Vec<Vec<(usize, usize)>> = (0..nc)
        .map(|c| {
            let owners: Vec<(usize, usize)> = (0..nj).flat_map(|j| (0..d.size(j, c)).map(move |x| (j, x))).collect();
            quotients[c].reps.iter().map(|&r| owners[r]).collect()
        })
        .collect();
    let sets = (0..nc)
        .map(|c| {
            reps[c]
                .iter()
                .map(|&(j, x)| names::class(&names::pair(shape.object_name(j), d.label(j, c, x))))
                .collect()
        })
        .collect();
    let maps = (0..fiber.n_morphisms())
        .map(|g| {
            let (c, c2) = (fiber.src(g), fiber.tgt(g));
            reps[c]
                .iter()
                .map(|&(j, x)| {
                    let y = d.apply(shape.id(j), g, x);
                    quotients[c2].class_of[offsets_all[c2][j] + y]
                })
                .collect()
        })
        .collect();
    let cocone = (0..nj)
        .map(|j| {
            NatTrans::new(
                (0..nc)
                    .map(|c| {
                        (0..d.size(j, c))
                            .map(|x| quotients[c].class_of[offsets_all[c][j] + x])
                            .collect()
                    })
                    .collect(),
            )
        })
        .collect();
    Colimit {
        object: SetFunctor::assemble(fiber.clone(), sets, maps),
        reps,
        cocone,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::sync::Arc;

    fn sets_on(c: &Arc<crate::cat::FinCat>, sizes: &[usize], maps: &[(&str, Vec<usize>)]) -> SetFunctor {
        let mut m = vec![Vec::new(); c.n_morphisms()];
        for o in 0..c.n_objects() {
            m[c.id(o)] = (0..sizes[o]).collect();
        }
        for (name, f) in maps {
            m[c.morphism(name).unwrap()] = f.clone();
        }
        SetFunctor::from_sizes(c.clone(), sizes, m).unwrap()
    }

    #[test]
    fn products_and_coproducts() {
        let disc = Arc::new(fixtures::discrete_pair());
        let s = Diagram::of_sets(&sets_on(&disc, &[2, 3], &[]));
        let l = conical_limit(&s, &Limits::default()).unwrap();
        assert_eq!(l.object.size(0), 6);
        assert_eq!(l.object.label(0, 1), "⟨0,1⟩");
        let c = conical_colimit(&s);
        assert_eq!(c.object.size(0), 5);
        assert_eq!(c.object.label(0, 2), "[⟨b,0⟩]");
    }

    #[test]
    fn equalizer_and_coequalizer_of_swap() {
        let par = Arc::new(fixtures::parallel_pair());
        let s = Diagram::of_sets(&sets_on(&par, &[2, 2], &[("f", vec![0, 1]), ("g", vec![1, 0])]));
        assert_eq!(conical_limit(&s, &Limits::default()).unwrap().object.size(0), 0);
        assert_eq!(conical_colimit(&s).object.size(0), 1);
    }

    #[test]
    fn empty_shape() {
        let e = Arc::new(fixtures::empty());
        let s = Diagram::of_sets(&SetFunctor::terminal(e));
        assert_eq!(conical_limit(&s, &Limits::default()).unwrap().object.size(0), 1);
        assert_eq!(conical_colimit(&s).object.size(0), 0);
    }

    #[test]
    fn colimit_with_empty_blocks() {
        let disc = Arc::new(fixtures::chain3());
        let s = Diagram::of_sets(&sets_on(
            &disc,
            &[0, 2, 1],
            &[("u", vec![]), ("v", vec![0, 0]), ("vu", vec![])],
        ));
        let c = conical_colimit(&s);
        assert_eq!(c.object.size(0), 1);
        assert_eq!(c.reps[0][0], (1, 0));
    }
}
