//! Small projective presheaves, the Cauchy completion by splitting idempotents, and the
//! Isbell adjunction between presheaves and copresheaves.

mod isbell;

pub use isbell::{
    default_samples, isbell_adjunction_check, isbell_counit, isbell_transform, isbell_unit, IsbellCheck, IsbellInput,
    IsbellTransform, IsbellUnit, SampleCheck,
};

use std::sync::Arc;

use crate::cat::{certify_equivalence, opposite, EquivalenceCert, FinCat, Functor, Morphism};
use crate::error::{Error, Limits, Result};
use crate::names;
use crate::promod::{has_right_adjoint, Module};
use crate::setfun::{nat_set, representable, NatTrans, SetFunctor};
use crate::weighted::Preservation;

/// `φ` as a retract of `Yb`: `r ∘ s = 1_φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetractWitness {
    pub object: usize,
    pub section: NatTrans,
    pub retraction: NatTrans,
}

impl RetractWitness {
    pub fn verify(&self, phi: &SetFunctor) -> bool {
        let op_b = phi.source();
        let y = representable(op_b, self.object);
        self.section.is_natural(phi, &y)
            && self.retraction.is_natural(&y, phi)
            && self.retraction.after(&self.section) == NatTrans::identity(phi)
    }
}

#[derive(Debug, Clone)]
pub struct ProjectivityVerdict {
    pub projective: bool,
    pub retract: Option<RetractWitness>,
    /// `nat(φ, −)` failing to preserve `φ ∗ Y`, when not projective.
    pub refutation: Option<Preservation>,
}

/// Exhaustive search for a retraction of a representable onto `φ` (a functor on `op(B)`).
pub fn retract_search(phi: &SetFunctor, limits: &Limits) -> Result<Option<RetractWitness>> {
    let op_b = phi.source();
    let id = NatTrans::identity(phi);
    for b in 0..op_b.n_objects() {
        let y = representable(op_b, b);
        let sections = nat_set(phi, &y, limits)?;
        if sections.is_empty() {
            continue;
        }
        let retractions = nat_set(&y, phi, limits)?;
        for s in &sections {
            for r in &retractions {
                if r.after(s) == id {
                    return Ok(Some(RetractWitness {
                        object: b,
                        section: s.clone(),
                        retraction: r.clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Decides whether the presheaf `φ` (a functor on `op(B)`) is small projective, by module
/// adjointness of `φ: I ⇸ B` and independently by retract search. The two must agree.
pub fn is_small_projective(phi: &SetFunctor, limits: &Limits) -> Result<ProjectivityVerdict> {
    let module = Module::from_presheaf(phi)?;
    let verdict = has_right_adjoint(&module, limits)?;
    let retract = retract_search(phi, limits)?;
    if verdict.adjoint != retract.is_some() {
        return Err(Error::Internal(format!(
            "small projectivity procedures disagree: module adjoint {}, retract {}",
            verdict.adjoint,
            retract.is_some()
        )));
    }
    Ok(ProjectivityVerdict {
        projective: verdict.adjoint,
        retract,
        refutation: verdict.refutation.map(|(_, _, p)| p),
    })
}

/// `Q(B)` by splitting idempotents, with the embedding `b ↦ 1_b` and a certified
/// equivalence onto the full subcategory of retracts of representables.
#[derive(Debug, Clone)]
pub struct CauchyCompletion {
    pub category: Arc<FinCat>,
    pub embedding: Functor,
    /// The idempotent of `B` behind each object.
    pub idempotents: Vec<usize>,
    /// The retract of a representable behind each object, as a presheaf on `B`.
    pub retracts: Vec<SetFunctor>,
    pub retract_category: Arc<FinCat>,
    pub equivalence: EquivalenceCert,
}

/// `B` with its idempotents split.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub embedding: Functor,
    /// The idempotent of `B` behind each object.
    pub idempotents: Vec<usize>,
    /// The arrow of `B` behind each morphism.
    pub underlying: Vec<usize>,
}

/// Objects are idempotents `p` of `B`; `hom(p, q) = {f : q∘f∘p = f}`.
pub fn split_idempotents(b: &Arc<FinCat>) -> Result<Splitting> {
    let mut idem = b.identities().to_vec();
    idem.extend(b.idempotents().into_iter().filter(|&e| !b.is_identity(e)));
    let n = idem.len();
    let name_of = |p: usize| {
        if b.is_identity(p) {
            b.object_name(b.src(p)).to_string()
        } else {
            names::pair(b.object_name(b.src(p)), b.morphism_name(p))
        }
    };
    let mut objects: Vec<String> = Vec::with_capacity(idem.len());
    for &p in &idem {
        let name = fresh(name_of(p), |n| objects.iter().any(|o| o == n));
        objects.push(name);
    }
    let mut morphisms = Vec::new();
    let mut underlying = Vec::new();
    let mut at = vec![Vec::new(); n * n];
    for (i, &p) in idem.iter().enumerate() {
        for (j, &q) in idem.iter().enumerate() {
            for &f in b.hom(b.src(p), b.src(q)) {
                if b.comp(q, b.comp(f, p)) != f {
                    continue;
                }
                let name = if b.is_identity(p) && b.is_identity(q) {
                    b.morphism_name(f).to_string()
                } else {
                    let base = names::triple(&objects[i], b.morphism_name(f), &objects[j]);
                    fresh(base, |n| {
                        morphisms.iter().any(|m: &Morphism| m.name == n) || b.morphism(n).is_some()
                    })
                };
                at[i * n + j].push((f, morphisms.len()));
                morphisms.push(Morphism { name, src: i, tgt: j });
                underlying.push(f);
            }
        }
    }
    let find = |i: usize, j: usize, f: usize| at[i * n + j].iter().find(|&&(g, _)| g == f).map(|&(_, k)| k);
    let identities: Vec<usize> = (0..n)
        .map(|i| find(i, i, idem[i]).expect("idempotent is its own identity"))
        .collect();
    let mut compose = Vec::new();
    for (f, m) in morphisms.iter().enumerate() {
        for (g, m2) in morphisms.iter().enumerate() {
            if m2.src == m.tgt {
                let h = find(m.src, m2.tgt, b.comp(underlying[g], underlying[f])).expect("composite stays split");
                compose.push((g, f, h));
            }
        }
    }
    let q = Arc::new(FinCat::new(objects, morphisms, identities, &compose)?);
    let embedding = Functor::new(
        b.clone(),
        q,
        (0..b.n_objects()).collect(),
        (0..b.n_morphisms())
            .map(|f| find(b.src(f), b.tgt(f), f).expect("identities are the first objects"))
            .collect(),
    )?;
    Ok(Splitting {
        embedding,
        idempotents: idem,
        underlying,
    })
}

/// `base`, primed until unused.
fn fresh(mut base: String, taken: impl Fn(&str) -> bool) -> String {
    while taken(&base) {
        base.push('′');
    }
    base
}

pub fn cauchy_completion(b: &Arc<FinCat>, limits: &Limits) -> Result<CauchyCompletion> {
    let Splitting {
        embedding,
        idempotents: idem,
        underlying,
    } = split_idempotents(b)?;
    let q = embedding.target().clone();
    let op_b = Arc::new(opposite(b));
    // The retract of Y(src p) cut out by p: c ↦ {f : p∘f = f}.
    let retracts: Vec<SetFunctor> = idem
        .iter()
        .map(|&p| {
            let x = b.src(p);
            let elems: Vec<Vec<usize>> = (0..b.n_objects())
                .map(|c| b.hom(c, x).iter().copied().filter(|&f| b.comp(p, f) == f).collect())
                .collect();
            let sets = elems
                .iter()
                .map(|fs| fs.iter().map(|&f| b.morphism_name(f).to_string()).collect())
                .collect();
            let maps = (0..b.n_morphisms())
                .map(|v| {
                    // v: c → c' in B acts contravariantly: f ↦ f∘v.
                    let (c, c1) = (b.src(v), b.tgt(v));
                    elems[c1]
                        .iter()
                        .map(|&f| {
                            elems[c]
                                .iter()
                                .position(|&g| g == b.comp(f, v))
                                .expect("closed under action")
                        })
                        .collect()
                })
                .collect();
            SetFunctor::new(op_b.clone(), sets, maps)
        })
        .collect::<Result<_>>()?;

    // Full subcategory of presheaves on the retracts, homs computed by search.
    let n = retracts.len();
    let mut morphisms = Vec::new();
    let mut nats: Vec<NatTrans> = Vec::new();
    let mut at = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            for (k, t) in nat_set(&retracts[i], &retracts[j], limits)?.into_iter().enumerate() {
                at[i * n + j].push(morphisms.len());
                morphisms.push(Morphism {
                    name: format!("{}→{}#{}", q.object_name(i), q.object_name(j), k),
                    src: i,
                    tgt: j,
                });
                nats.push(t);
            }
        }
    }
    let find = |i: usize, j: usize, t: &NatTrans| at[i * n + j].iter().copied().find(|&k| nats[k] == *t);
    let identities: Vec<usize> = (0..n)
        .map(|i| find(i, i, &NatTrans::identity(&retracts[i])).expect("identity is natural"))
        .collect();
    let mut compose = Vec::new();
    for f in 0..morphisms.len() {
        for g in 0..morphisms.len() {
            if morphisms[g].src == morphisms[f].tgt {
                let h = find(morphisms[f].src, morphisms[g].tgt, &nats[g].after(&nats[f]))
                    .ok_or_else(|| Error::Internal("composite transformation missing".into()))?;
                compose.push((g, f, h));
            }
        }
    }
    let r = Arc::new(FinCat::new(q.objects().to_vec(), morphisms, identities, &compose)?);

    // f: p → q acts on retracts by postcomposition.
    let mut on_mor = Vec::with_capacity(q.n_morphisms());
    for m in 0..q.n_morphisms() {
        let (i, j) = (q.src(m), q.tgt(m));
        let f = underlying[m];
        let (x, y) = (b.src(idem[i]), b.src(idem[j]));
        let t = NatTrans::new(
            (0..b.n_objects())
                .map(|c| {
                    let src: Vec<usize> = b
                        .hom(c, x)
                        .iter()
                        .copied()
                        .filter(|&g| b.comp(idem[i], g) == g)
                        .collect();
                    let dst: Vec<usize> = b
                        .hom(c, y)
                        .iter()
                        .copied()
                        .filter(|&g| b.comp(idem[j], g) == g)
                        .collect();
                    src.iter()
                        .map(|&g| {
                            dst.iter()
                                .position(|&h| h == b.comp(f, g))
                                .expect("image stays in retract")
                        })
                        .collect()
                })
                .collect(),
        );
        on_mor.push(find(i, j, &t).ok_or_else(|| Error::Internal("postcomposition is not natural".into()))?);
    }
    let to_r = Functor::new(q.clone(), r.clone(), (0..n).collect(), on_mor)?;
    let equivalence = certify_equivalence(&to_r)
        .map_err(|v| Error::Internal(format!("splitting and retracts disagree: {}", v.witness)))?;
    Ok(CauchyCompletion {
        category: q,
        embedding,
        idempotents: idem,
        retracts,
        retract_category: r,
        equivalence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn idem_completion_hom_sizes() {
        let idem = Arc::new(fixtures::idem());
        let q = cauchy_completion(&idem, &Limits::default()).unwrap();
        let c = &q.category;
        assert_eq!(c.n_objects(), 2);
        let sizes: Vec<usize> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(i, j)| c.hom(i, j).len())
            .collect();
        assert_eq!(sizes, vec![2, 1, 1, 1]);
        assert!(q.equivalence.verify().is_ok());
    }

    #[test]
    fn completion_is_idempotent() {
        for (name, b) in fixtures::categories() {
            let b = Arc::new(b);
            let q = cauchy_completion(&b, &Limits::default()).unwrap();
            let qq = cauchy_completion(&q.category, &Limits::default()).unwrap();
            assert!(certify_equivalence(&qq.embedding).is_ok(), "{name}");
            for r in &q.retracts {
                assert!(is_small_projective(r, &Limits::default()).unwrap().projective, "{name}");
            }
        }
    }

    #[test]
    fn split_singleton_on_idem_is_projective() {
        let idem = Arc::new(fixtures::idem());
        let op = Arc::new(opposite(&idem));
        let phi = SetFunctor::terminal(op.clone());
        let v = is_small_projective(&phi, &Limits::default()).unwrap();
        assert!(v.projective);
        let w = v.retract.unwrap();
        assert!(w.verify(&phi));
        assert_eq!(representable(&op, 0).label(0, w.section.components[0][0]), "e");
    }

    #[test]
    fn two_points_are_not_projective() {
        let phi = SetFunctor::constant(Arc::new(fixtures::terminal()), 2);
        let v = is_small_projective(&phi, &Limits::default()).unwrap();
        assert!(!v.projective);
        let p = v.refutation.unwrap();
        assert_eq!((p.source_sizes[0], p.target_sizes[0]), (2, 4));
    }
}
