use std::sync::Arc;

use super::FinCat;
use crate::error::{Error, Result, Violation};

/// A functor between finite categories, stored as index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    on_objects: Vec<usize>,
    on_morphisms: Vec<usize>,
}

impl Functor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        on_objects: Vec<usize>,
        on_morphisms: Vec<usize>,
    ) -> Result<Functor> {
        if on_objects.len() != source.n_objects() || on_morphisms.len() != source.n_morphisms() {
            return Err(Error::Malformed(
                "functor must map every object and every morphism".into(),
            ));
        }
        if on_objects.iter().any(|&o| o >= target.n_objects())
            || on_morphisms.iter().any(|&f| f >= target.n_morphisms())
        {
            return Err(Error::Malformed("functor image outside its target".into()));
        }
        let f = Functor::assemble(source, target, on_objects, on_morphisms);
        let v = f.violations();
        if v.is_empty() {
            Ok(f)
        } else {
            Err(Error::Invalid(v))
        }
    }

    pub(crate) fn assemble(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        on_objects: Vec<usize>,
        on_morphisms: Vec<usize>,
    ) -> Functor {
        Functor {
            source,
            target,
            on_objects,
            on_morphisms,
        }
    }

    pub fn identity(c: &Arc<FinCat>) -> Functor {
        Functor::assemble(
            c.clone(),
            c.clone(),
            (0..c.n_objects()).collect(),
            (0..c.n_morphisms()).collect(),
        )
    }

    /// Exhaustive functor-law check: endpoints, identities, composition.
    pub fn violations(&self) -> Vec<Violation> {
        let (s, t) = (&self.source, &self.target);
        let mut v = Vec::new();
        for f in 0..s.n_morphisms() {
            let g = self.on_morphisms[f];
            if t.src(g) != self.on_objects[s.src(f)] || t.tgt(g) != self.on_objects[s.tgt(f)] {
                v.push(Violation::new(
                    "functor preserves sources and targets",
                    s.morphism_name(f).to_string(),
                ));
            }
        }
        for o in 0..s.n_objects() {
            if self.on_morphisms[s.id(o)] != t.id(self.on_objects[o]) {
                v.push(Violation::new(
                    "functor preserves identities",
                    s.object_name(o).to_string(),
                ));
            }
        }
        if !v.is_empty() {
            return v;
        }
        for (g, f, h) in s.composable_pairs() {
            if t.comp(self.on_morphisms[g], self.on_morphisms[f]) != self.on_morphisms[h] {
                v.push(Violation::new(
                    "functor preserves composition",
                    format!("{}|{}", s.morphism_name(g), s.morphism_name(f)),
                ));
            }
        }
        v
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    #[inline]
    pub fn obj(&self, o: usize) -> usize {
        self.on_objects[o]
    }

    #[inline]
    pub fn mor(&self, f: usize) -> usize {
        self.on_morphisms[f]
    }

    pub fn on_objects(&self) -> &[usize] {
        &self.on_objects
    }

    pub fn on_morphisms(&self) -> &[usize] {
        &self.on_morphisms
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Result<Functor> {
        if first.target.as_ref() != self.source.as_ref() {
            return Err(Error::shape("functor composite: middle categories differ"));
        }
        Ok(Functor::assemble(
            first.source.clone(),
            self.target.clone(),
            first.on_objects.iter().map(|&o| self.on_objects[o]).collect(),
            first.on_morphisms.iter().map(|&f| self.on_morphisms[f]).collect(),
        ))
    }

    /// The same assignment read between opposite categories.
    pub fn opposite(&self) -> Functor {
        Functor::assemble(
            Arc::new(super::opposite(&self.source)),
            Arc::new(super::opposite(&self.target)),
            self.on_objects.clone(),
            self.on_morphisms.clone(),
        )
    }

    /// Whether every hom-set map `C(a,b) → D(Fa,Fb)` is a bijection.
    pub fn is_fully_faithful(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        for a in 0..s.n_objects() {
            for b in 0..s.n_objects() {
                let dom = s.hom(a, b);
                let cod = t.hom(self.obj(a), self.obj(b));
                if dom.len() != cod.len() {
                    return false;
                }
                let mut hit = vec![false; t.n_morphisms()];
                for &f in dom {
                    let g = self.mor(f);
                    if hit[g] {
                        return false;
                    }
                    hit[g] = true;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn constant_functor_to_terminal() {
        let two = Arc::new(fixtures::arrow());
        let one = Arc::new(fixtures::terminal());
        let f = Functor::new(two.clone(), one, vec![0, 0], vec![0; two.n_morphisms()]).unwrap();
        assert!(f.violations().is_empty());
    }

    #[test]
    fn non_functorial_assignment_is_rejected() {
        // Idem → Idem sending e to id breaks nothing; sending id to e breaks identities.
        let idem = Arc::new(fixtures::idem());
        let id = idem.morphism("id").unwrap();
        let e = idem.morphism("e").unwrap();
        let mut m = vec![0; 2];
        m[id] = e;
        m[e] = e;
        let err = Functor::new(idem.clone(), idem.clone(), vec![0], m).unwrap_err();
        assert!(matches!(err, Error::Invalid(ref v) if v[0].law.contains("identities")));
    }

    #[test]
    fn identity_is_fully_faithful() {
        for (_, c) in fixtures::categories() {
            let c = Arc::new(c);
            assert!(Functor::identity(&c).is_fully_faithful());
        }
    }
}
