use std::collections::HashSet;

use super::{compose_modules, module_morphisms, rext, rlift, Module};
use crate::error::{Error, Limits, Result};
use crate::setfun::NatTrans;

/// The three hom-sets of the extension/lifting adjunctions and whether pasting with the
/// two counits maps the latter two bijectively onto the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PastingReport {
    /// `|Mod(g∘f, h)|`.
    pub composite: usize,
    /// `|Mod(g, rext(f, h))|`.
    pub extension: usize,
    /// `|Mod(f, rlift(g, h))|`.
    pub lifting: usize,
    pub extension_bijective: bool,
    pub lifting_bijective: bool,
}

/// For `f: A ⇸ B`, `g: B ⇸ C`, `h: A ⇸ C`, pastes every `σ: g ⇒ rext(f, h)` and every
/// `τ: f ⇒ rlift(g, h)` with the counit and checks the results exhaust `Mod(g∘f, h)`
/// without repetition.
pub fn pasting_bijections(f: &Module, g: &Module, h: &Module, limits: &Limits) -> Result<PastingReport> {
    if g.source() != f.target() || h.source() != f.source() || h.target() != g.target() {
        return Err(Error::shape("pasting needs f: A ⇸ B, g: B ⇸ C, h: A ⇸ C"));
    }
    let (na, nb) = (f.source().n_objects(), f.target().n_objects());
    let gf = compose_modules(g, f, limits)?;
    let direct: HashSet<NatTrans> = module_morphisms(&gf.module, h, limits)?.into_iter().collect();

    // Applies `leg(c, a, b, y, x)` to every member of every class and insists the value
    // only depends on the class.
    let paste = |leg: &dyn Fn(usize, usize, usize, usize, usize) -> usize| -> Option<NatTrans> {
        let nc = g.target().n_objects();
        let mut comps = Vec::with_capacity(nc * na);
        for c in 0..nc {
            for a in 0..na {
                let mut comp = vec![usize::MAX; gf.module.size(c, a)];
                for b in 0..nb {
                    for y in 0..g.size(c, b) {
                        for x in 0..f.size(b, a) {
                            let k = gf.class(c, a, b, y, x);
                            let v = leg(c, a, b, y, x);
                            if comp[k] != usize::MAX && comp[k] != v {
                                return None;
                            }
                            comp[k] = v;
                        }
                    }
                }
                comps.push(comp);
            }
        }
        Some(NatTrans::new(comps))
    };
    let bijective = |images: Vec<Option<NatTrans>>| {
        let n = images.len();
        let set: HashSet<NatTrans> = images.into_iter().flatten().collect();
        set.len() == n && set == direct
    };

    let ext = rext(f, h, limits)?;
    let sigmas = module_morphisms(g, &ext.module, limits)?;
    let extension = sigmas.len();
    let images = sigmas
        .iter()
        .map(|s| {
            paste(&|c, a, b, y, x| {
                let phi = &ext.nats[c * nb + b][s.components[c * nb + b][y]];
                phi.components[a][x]
            })
        })
        .collect();
    let extension_bijective = bijective(images);

    let lift = rlift(g, h, limits)?;
    let taus = module_morphisms(f, &lift.module, limits)?;
    let lifting = taus.len();
    let images = taus
        .iter()
        .map(|t| {
            paste(&|c, a, b, y, x| {
                let psi = &lift.nats[b * na + a][t.components[b * na + a][x]];
                psi.components[c][y]
            })
        })
        .collect();
    let lifting_bijective = bijective(images);

    Ok(PastingReport {
        composite: direct.len(),
        extension,
        lifting,
        extension_bijective,
        lifting_bijective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::promod::functor_modules;
    use std::sync::Arc;

    #[test]
    fn pasting_over_idem() {
        let idem = Arc::new(fixtures::idem());
        let h = Module::hom(&idem);
        let r = pasting_bijections(&h, &h, &h, &Limits::default()).unwrap();
        assert_eq!((r.composite, r.extension, r.lifting), (2, 2, 2));
        assert!(r.extension_bijective && r.lifting_bijective);
    }

    #[test]
    fn pasting_with_functor_modules() {
        for (name, t) in fixtures::functors() {
            let (lo, up) = functor_modules(&t);
            let hb = Module::hom(t.target());
            let r = pasting_bijections(&lo, &up, &Module::hom(t.source()), &Limits::default()).unwrap();
            assert!(r.extension_bijective && r.lifting_bijective, "{name}");
            let r = pasting_bijections(&up, &lo, &hb, &Limits::default()).unwrap();
            assert!(r.extension_bijective && r.lifting_bijective, "{name}");
        }
    }
}
