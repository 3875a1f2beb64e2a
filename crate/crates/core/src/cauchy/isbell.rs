use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;
use std::sync::Arc;

use super::is_small_projective;
use crate::cat::{opposite, FinCat};
use crate::error::{Error, Limits, Result};
use crate::names;
use crate::setfun::{
    corepresentable, find_iso, for_each_set_functor, nat_set, representable, yoneda, Diagram, NatTrans, SetFunctor,
};

/// `O(φ)` or `Spec(ψ)`: the transform together with the transformation behind each
/// element.
#[derive(Debug, Clone)]
pub struct IsbellTransform {
    pub value: SetFunctor,
    pub elements: Vec<Vec<NatTrans>>,
    index: Vec<HashMap<NatTrans, usize>>,
}

impl IsbellTransform {
    fn element(&self, o: usize, t: &NatTrans) -> Option<usize> {
        self.index[o].get(t).copied()
    }
}

/// `j ↦ nat(x, d(j))`, acting by postcomposition.
fn hom_into(x: &SetFunctor, d: &Diagram, limits: &Limits) -> Result<IsbellTransform> {
    let shape = d.shape();
    let values: Vec<SetFunctor> = (0..shape.n_objects()).map(|j| d.value(j)).collect();
    let elements: Vec<Vec<NatTrans>> = values.iter().map(|v| nat_set(x, v, limits)).collect::<Result<_>>()?;
    let index: Vec<HashMap<NatTrans, usize>> = elements
        .iter()
        .map(|ns| ns.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect())
        .collect();
    let maps = (0..shape.n_morphisms())
        .map(|f| {
            let arrow = d.arrow(f);
            elements[shape.src(f)]
                .iter()
                .map(|t| index[shape.tgt(f)][&arrow.after(t)])
                .collect()
        })
        .collect();
    let sets = elements.iter().map(|ns| names::numbered(ns.len())).collect();
    Ok(IsbellTransform {
        value: SetFunctor::assemble(shape.clone(), sets, maps),
        elements,
        index,
    })
}

/// Which side of the Isbell adjunction an input lives on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsbellInput {
    /// A functor on `op(B)`; transformed to the copresheaf `O(φ)`.
    Presheaf(SetFunctor),
    /// A functor on `B`; transformed to the presheaf `Spec(ψ)`.
    Copresheaf(SetFunctor),
}

/// `O(φ)(b) = nat(φ, Yb)` or `Spec(ψ)(b) = nat(ψ, B(b, −))`.
pub fn isbell_transform(b: &Arc<FinCat>, input: &IsbellInput, limits: &Limits) -> Result<IsbellTransform> {
    match input {
        IsbellInput::Presheaf(phi) => {
            if phi.source().as_ref() != &opposite(b) {
                return Err(Error::shape("presheaf must live on op(B)"));
            }
            hom_into(phi, &yoneda(b).diagram(), limits)
        }
        IsbellInput::Copresheaf(psi) => {
            if psi.source() != b {
                return Err(Error::shape("copresheaf must live on B"));
            }
            let op = Arc::new(opposite(b));
            hom_into(psi, &yoneda(&op).diagram(), limits)
        }
    }
}

/// Every representable, then every other functor on `c` with at most `max_total`
/// elements, one per isomorphism class, in canonical order.
fn samples_on(c: &Arc<FinCat>, reps: Vec<SetFunctor>, max_total: usize, limits: &Limits) -> Result<Vec<SetFunctor>> {
    let mut kept = reps;
    let mut failure = None;
    let _ = for_each_set_functor(c, max_total, limits, |s| {
        if s.total_size() > max_total {
            return ControlFlow::Break(());
        }
        for k in &kept {
            match find_iso(k, s, limits) {
                Ok(Some(_)) => return ControlFlow::Continue(()),
                Ok(None) => {}
                Err(e) => {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            }
        }
        kept.push(s.clone());
        ControlFlow::Continue(())
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(kept),
    }
}

/// Representables plus presheaves (and copresheaves) with total element count at most
/// `max_total`, deduplicated up to isomorphism.
pub fn default_samples(
    b: &Arc<FinCat>,
    max_total: usize,
    limits: &Limits,
) -> Result<(Vec<SetFunctor>, Vec<SetFunctor>)> {
    let op = Arc::new(opposite(b));
    let reps = (0..b.n_objects()).map(|x| representable(&op, x)).collect();
    let coreps = (0..b.n_objects()).map(|x| corepresentable(b, x)).collect();
    Ok((
        samples_on(&op, reps, max_total, limits)?,
        samples_on(b, coreps, max_total, limits)?,
    ))
}

/// Outcome of the hom-set bijection for one (presheaf, copresheaf) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleCheck {
    pub presheaf: usize,
    pub copresheaf: usize,
    /// `|nat(φ, Spec ψ)|`.
    pub left: usize,
    /// `|nat(ψ, O φ)|`.
    pub right: usize,
    pub bijective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsbellCheck {
    pub holds: bool,
    pub pairs: Vec<SampleCheck>,
    /// Samples found small projective, with unit (presheaves) or counit (copresheaves)
    /// invertibility.
    pub presheaf_units: Vec<(usize, bool)>,
    pub copresheaf_units: Vec<(usize, bool)>,
    pub witness: Option<String>,
}

/// Index conversions between `op(B)(c, b)` and `B(b, c)`, which hold the same arrows.
struct Homs<'a> {
    b: &'a FinCat,
    op: &'a FinCat,
}

impl Homs<'_> {
    fn to_b(&self, b: usize, c: usize, i: usize) -> usize {
        let f = self.op.hom(c, b)[i];
        self.b.hom(b, c).iter().position(|&g| g == f).expect("same arrows")
    }

    fn to_op(&self, b: usize, c: usize, i: usize) -> usize {
        let f = self.b.hom(b, c)[i];
        self.op.hom(c, b).iter().position(|&g| g == f).expect("same arrows")
    }
}

fn bijective(t: &NatTrans, src: &SetFunctor, tgt: &SetFunctor) -> bool {
    (0..src.source().n_objects()).all(|o| {
        let mut seen = vec![false; tgt.size(o)];
        t.components[o].iter().all(|&y| !std::mem::replace(&mut seen[y], true)) && src.size(o) == tgt.size(o)
    })
}

/// Checks `nat(φ, Spec ψ) ≅ nat(ψ, O φ)` by explicit transposition on every sample pair,
/// its naturality along endomorphisms of the samples, and invertibility of the unit and
/// counit at every small projective sample.
pub fn isbell_adjunction_check(
    b: &Arc<FinCat>,
    presheaves: &[SetFunctor],
    copresheaves: &[SetFunctor],
    limits: &Limits,
) -> Result<IsbellCheck> {
    let op = Arc::new(opposite(b));
    let homs = Homs { b, op: &op };
    let nb = b.n_objects();
    let os: Vec<IsbellTransform> = presheaves
        .iter()
        .map(|p| isbell_transform(b, &IsbellInput::Presheaf(p.clone()), limits))
        .collect::<Result<_>>()?;
    let specs: Vec<IsbellTransform> = copresheaves
        .iter()
        .map(|q| isbell_transform(b, &IsbellInput::Copresheaf(q.clone()), limits))
        .collect::<Result<_>>()?;
    let mut witness = None;
    let mut pairs = Vec::new();

    for (i, phi) in presheaves.iter().enumerate() {
        for (j, psi) in copresheaves.iter().enumerate() {
            let (o, s) = (&os[i], &specs[j]);
            let left = nat_set(phi, &s.value, limits)?;
            let right = nat_set(psi, &o.value, limits)?;
            // β_c(y)_b(x) = α_b(x)_c(y)
            let transpose = |alpha: &NatTrans| -> Option<NatTrans> {
                let comps = (0..nb)
                    .map(|c| {
                        (0..psi.size(c))
                            .map(|y| {
                                let t = NatTrans::new(
                                    (0..nb)
                                        .map(|bo| {
                                            (0..phi.size(bo))
                                                .map(|x| {
                                                    let h = s.elements[bo][alpha.components[bo][x]].components[c][y];
                                                    homs.to_op(bo, c, h)
                                                })
                                                .collect()
                                        })
                                        .collect(),
                                );
                                o.element(c, &t)
                            })
                            .collect::<Option<Vec<usize>>>()
                    })
                    .collect::<Option<Vec<_>>>()?;
                Some(NatTrans::new(comps))
            };
            let images: Option<Vec<NatTrans>> = left.iter().map(transpose).collect();
            let ok = match &images {
                Some(im) => {
                    let mut sorted = im.clone();
                    sorted.sort();
                    sorted.dedup();
                    let mut r = right.clone();
                    r.sort();
                    sorted == r && im.len() == right.len()
                }
                None => false,
            };
            let mut natural = ok;
            if let Some(im) = images.as_ref().filter(|_| ok) {
                // Along γ: φ → φ, transpose(α∘γ) = O(γ)∘transpose(α). Both sides are
                // functorial in γ, so generators of End(φ) suffice. The left side reuses the
                // transposes already computed, looked up by α∘γ.
                let at: HashMap<&NatTrans, usize> = left.iter().enumerate().map(|(i, a)| (a, i)).collect();
                for gamma in generators(nat_set(phi, phi, limits)?) {
                    let o_gamma: Vec<Vec<usize>> = (0..nb)
                        .map(|c| {
                            o.elements[c]
                                .iter()
                                .map(|e| o.element(c, &e.after(&gamma)).expect("precomposite is natural"))
                                .collect()
                        })
                        .collect();
                    for (alpha, beta) in left.iter().zip(im) {
                        let lhs = &im[at[&alpha.after(&gamma)]];
                        natural &= (0..nb).all(|c| {
                            beta.components[c]
                                .iter()
                                .zip(&lhs.components[c])
                                .all(|(&k, &l)| o_gamma[c][k] == l)
                        });
                    }
                }
            }
            if !natural && witness.is_none() {
                witness = Some(format!(
                    "presheaf {i}, copresheaf {j}: transposition is not a natural bijection ({} vs {})",
                    left.len(),
                    right.len()
                ));
            }
            pairs.push(SampleCheck {
                presheaf: i,
                copresheaf: j,
                left: left.len(),
                right: right.len(),
                bijective: natural,
            });
        }
    }

    let mut presheaf_units = Vec::new();
    for (i, phi) in presheaves.iter().enumerate() {
        if !is_small_projective(phi, limits)?.projective {
            continue;
        }
        let inv = unit_with(&homs, phi, &os[i], limits)?.invertible;
        if !inv && witness.is_none() {
            witness = Some(format!("unit not invertible at small projective presheaf {i}"));
        }
        presheaf_units.push((i, inv));
    }
    let mut copresheaf_units = Vec::new();
    for (j, psi) in copresheaves.iter().enumerate() {
        if !is_small_projective(psi, limits)?.projective {
            continue;
        }
        let inv = counit_with(&homs, psi, &specs[j], limits)?.invertible;
        if !inv && witness.is_none() {
            witness = Some(format!("counit not invertible at small projective copresheaf {j}"));
        }
        copresheaf_units.push((j, inv));
    }

    Ok(IsbellCheck {
        holds: witness.is_none(),
        pairs,
        presheaf_units,
        copresheaf_units,
        witness,
    })
}

/// A generating set of a finite monoid of endomorphisms, chosen greedily in the given order.
fn generators(monoid: Vec<NatTrans>) -> Vec<NatTrans> {
    let mut gens: Vec<NatTrans> = Vec::new();
    let mut reached: HashSet<NatTrans> = HashSet::new();
    for m in monoid {
        if reached.contains(&m) {
            continue;
        }
        gens.push(m.clone());
        // Close under composition with the generators found so far.
        let mut todo: Vec<NatTrans> = reached.iter().cloned().chain([m]).collect();
        reached.extend(todo.iter().cloned());
        while let Some(x) = todo.pop() {
            for g in &gens {
                for y in [x.after(g), g.after(&x)] {
                    if reached.insert(y.clone()) {
                        todo.push(y);
                    }
                }
            }
        }
    }
    gens
}

/// The unit `φ ⇒ Spec O φ` or counit `ψ ⇒ O Spec ψ` at one sample.
#[derive(Debug, Clone)]
pub struct IsbellUnit {
    pub map: NatTrans,
    /// `Spec O φ` or `O Spec ψ`.
    pub target: SetFunctor,
    pub invertible: bool,
}

fn unit_with(homs: &Homs, phi: &SetFunctor, o: &IsbellTransform, limits: &Limits) -> Result<IsbellUnit> {
    let nb = homs.b.n_objects();
    let so = isbell_transform(
        &Arc::new(homs.b.clone()),
        &IsbellInput::Copresheaf(o.value.clone()),
        limits,
    )?;
    // η(x) = (β ↦ β_b(x))
    let map = NatTrans::new(
        (0..nb)
            .map(|bo| {
                (0..phi.size(bo))
                    .map(|x| {
                        let t = NatTrans::new(
                            (0..nb)
                                .map(|c| {
                                    o.elements[c]
                                        .iter()
                                        .map(|beta| homs.to_b(bo, c, beta.components[bo][x]))
                                        .collect()
                                })
                                .collect(),
                        );
                        so.element(bo, &t).expect("evaluation is natural")
                    })
                    .collect()
            })
            .collect(),
    );
    let invertible = map.is_natural(phi, &so.value) && bijective(&map, phi, &so.value);
    Ok(IsbellUnit {
        map,
        target: so.value,
        invertible,
    })
}

fn counit_with(homs: &Homs, psi: &SetFunctor, s: &IsbellTransform, limits: &Limits) -> Result<IsbellUnit> {
    let nb = homs.b.n_objects();
    let os = isbell_transform(
        &Arc::new(homs.b.clone()),
        &IsbellInput::Presheaf(s.value.clone()),
        limits,
    )?;
    // ε(y) = (α ↦ α_c(y))
    let map = NatTrans::new(
        (0..nb)
            .map(|c| {
                (0..psi.size(c))
                    .map(|y| {
                        let t = NatTrans::new(
                            (0..nb)
                                .map(|bo| {
                                    s.elements[bo]
                                        .iter()
                                        .map(|alpha| homs.to_op(bo, c, alpha.components[c][y]))
                                        .collect()
                                })
                                .collect(),
                        );
                        os.element(c, &t).expect("evaluation is natural")
                    })
                    .collect()
            })
            .collect(),
    );
    let invertible = map.is_natural(psi, &os.value) && bijective(&map, psi, &os.value);
    Ok(IsbellUnit {
        map,
        target: os.value,
        invertible,
    })
}

/// The unit at a presheaf `φ` on `B` (a functor on `op(B)`), at any sample.
pub fn isbell_unit(b: &Arc<FinCat>, phi: &SetFunctor, limits: &Limits) -> Result<IsbellUnit> {
    let op = Arc::new(opposite(b));
    let o = isbell_transform(b, &IsbellInput::Presheaf(phi.clone()), limits)?;
    unit_with(&Homs { b, op: &op }, phi, &o, limits)
}

/// The counit at a copresheaf `ψ` on `B`.
pub fn isbell_counit(b: &Arc<FinCat>, psi: &SetFunctor, limits: &Limits) -> Result<IsbellUnit> {
    let op = Arc::new(opposite(b));
    let s = isbell_transform(b, &IsbellInput::Copresheaf(psi.clone()), limits)?;
    counit_with(&Homs { b, op: &op }, psi, &s, limits)
}
