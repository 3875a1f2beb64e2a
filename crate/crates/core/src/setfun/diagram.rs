use std::sync::Arc;

use super::{NatTrans, SetFunctor};
use crate::cat::{product, FinCat, Functor};
use crate::error::{Error, Result};
use crate::fixtures;

/// A diagram `J → [C, FinSet]`, stored as one set-valued functor on `J × C`.
///
/// Diagrams of plain finite sets use the terminal category for `C`. Presheaves on `B`
/// are functors on `op(B)`, so presheaf-valued diagrams have `C = op(B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    shape: Arc<FinCat>,
    fiber: Arc<FinCat>,
    carrier: SetFunctor,
}

impl Diagram {
    /// A diagram of finite sets.
    pub fn of_sets(s: &SetFunctor) -> Diagram {
        let shape = s.source().clone();
        let fiber = Arc::new(fixtures::terminal());
        let prod = Arc::new(product(&shape, &fiber));
        Diagram {
            carrier: SetFunctor::assemble(prod, s.sets().to_vec(), s.maps().to_vec()),
            shape,
            fiber,
        }
    }

    pub fn from_carrier(shape: Arc<FinCat>, fiber: Arc<FinCat>, carrier: SetFunctor) -> Result<Diagram> {
        if carrier.source().as_ref() != &product(&shape, &fiber) {
            return Err(Error::shape("diagram carrier must live on shape × fiber"));
        }
        Ok(Diagram { shape, fiber, carrier })
    }

    /// Assembles a diagram from its values and the transformations between them,
    /// re-checking functoriality and naturality.
    pub fn from_values(
        shape: Arc<FinCat>,
        fiber: Arc<FinCat>,
        values: &[SetFunctor],
        arrows: &[NatTrans],
    ) -> Result<Diagram> {
        if values.len() != shape.n_objects() || arrows.len() != shape.n_morphisms() {
            return Err(Error::shape(
                "diagram needs a value per object and an arrow per morphism",
            ));
        }
        for v in values {
            if v.source().as_ref() != fiber.as_ref() {
                return Err(Error::shape("diagram values must be functors on the fiber category"));
            }
        }
        for (f, a) in arrows.iter().enumerate() {
            let (s, t) = (&values[shape.src(f)], &values[shape.tgt(f)]);
            if let Some(v) = a.violations(s, t).into_iter().next() {
                return Err(Error::Invalid(vec![v]));
            }
        }
        let prod = Arc::new(product(&shape, &fiber));
        let (nc, mc) = (fiber.n_objects(), fiber.n_morphisms());
        let mut sets = vec![Vec::new(); prod.n_objects()];
        for j in 0..shape.n_objects() {
            for c in 0..nc {
                sets[j * nc + c] = values[j].labels(c).to_vec();
            }
        }
        let mut maps = vec![Vec::new(); prod.n_morphisms()];
        for f in 0..shape.n_morphisms() {
            let t = &values[shape.tgt(f)];
            for g in 0..mc {
                let c = fiber.src(g);
                maps[f * mc + g] = arrows[f].components[c].iter().map(|&x| t.apply(g, x)).collect();
            }
        }
        let carrier = SetFunctor::new(prod, sets, maps)?;
        Ok(Diagram { shape, fiber, carrier })
    }

    pub fn shape(&self) -> &Arc<FinCat> {
        &self.shape
    }

    pub fn fiber(&self) -> &Arc<FinCat> {
        &self.fiber
    }

    pub fn carrier(&self) -> &SetFunctor {
        &self.carrier
    }

    #[inline]
    pub fn size(&self, j: usize, c: usize) -> usize {
        self.carrier.size(j * self.fiber.n_objects() + c)
    }

    #[inline]
    pub fn label(&self, j: usize, c: usize, x: usize) -> &str {
        self.carrier.label(j * self.fiber.n_objects() + c, x)
    }

    /// The action of the pair `(f, g)` of a shape and a fiber morphism.
    #[inline]
    pub fn apply(&self, f: usize, g: usize, x: usize) -> usize {
        self.carrier.apply(f * self.fiber.n_morphisms() + g, x)
    }

    /// The value at a shape object, as a functor on the fiber.
    pub fn value(&self, j: usize) -> SetFunctor {
        let (nc, mc) = (self.fiber.n_objects(), self.fiber.n_morphisms());
        let f = self.shape.id(j);
        SetFunctor::assemble(
            self.fiber.clone(),
            (0..nc).map(|c| self.carrier.labels(j * nc + c).to_vec()).collect(),
            (0..mc).map(|g| self.carrier.map(f * mc + g).to_vec()).collect(),
        )
    }

    /// The transformation `value(src f) ⇒ value(tgt f)`.
    pub fn arrow(&self, f: usize) -> NatTrans {
        let mc = self.fiber.n_morphisms();
        NatTrans::new(
            (0..self.fiber.n_objects())
                .map(|c| self.carrier.map(f * mc + self.fiber.id(c)).to_vec())
                .collect(),
        )
    }

    /// The set-valued diagram obtained by evaluating at a fiber object.
    pub fn at(&self, c: usize) -> SetFunctor {
        let (nc, mc) = (self.fiber.n_objects(), self.fiber.n_morphisms());
        let idc = self.fiber.id(c);
        SetFunctor::assemble(
            self.shape.clone(),
            (0..self.shape.n_objects())
                .map(|j| self.carrier.labels(j * nc + c).to_vec())
                .collect(),
            (0..self.shape.n_morphisms())
                .map(|f| self.carrier.map(f * mc + idc).to_vec())
                .collect(),
        )
    }

    /// `self ∘ g` for a functor into the shape.
    pub fn pullback(&self, g: &Functor) -> Diagram {
        let src = g.source().clone();
        let (nc, mc) = (self.fiber.n_objects(), self.fiber.n_morphisms());
        let prod = Arc::new(product(&src, &self.fiber));
        let mut sets = vec![Vec::new(); prod.n_objects()];
        for j in 0..src.n_objects() {
            for c in 0..nc {
                sets[j * nc + c] = self.carrier.labels(g.obj(j) * nc + c).to_vec();
            }
        }
        let mut maps = vec![Vec::new(); prod.n_morphisms()];
        for f in 0..src.n_morphisms() {
            for h in 0..mc {
                maps[f * mc + h] = self.carrier.map(g.mor(f) * mc + h).to_vec();
            }
        }
        Diagram {
            shape: src,
            fiber: self.fiber.clone(),
            carrier: SetFunctor::assemble(prod, sets, maps),
        }
    }

    /// Reads the carrier on `C × J` instead, i.e. the same data as a diagram `C → [J, FinSet]`.
    pub fn transpose(&self) -> Diagram {
        let (nj, mj) = (self.shape.n_objects(), self.shape.n_morphisms());
        let (nc, mc) = (self.fiber.n_objects(), self.fiber.n_morphisms());
        let prod = Arc::new(product(&self.fiber, &self.shape));
        let mut sets = vec![Vec::new(); nc * nj];
        for c in 0..nc {
            for j in 0..nj {
                sets[c * nj + j] = self.carrier.labels(j * nc + c).to_vec();
            }
        }
        let mut maps = vec![Vec::new(); mc * mj];
        for g in 0..mc {
            for f in 0..mj {
                maps[g * mj + f] = self.carrier.map(f * mc + g).to_vec();
            }
        }
        Diagram {
            shape: self.fiber.clone(),
            fiber: self.shape.clone(),
            carrier: SetFunctor::assemble(prod, sets, maps),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip() {
        let two = Arc::new(fixtures::arrow());
        let idem = Arc::new(fixtures::idem());
        let e = idem.morphism("e").unwrap();
        let mut maps = vec![vec![]; 2];
        maps[idem.id(0)] = vec![0, 1];
        maps[e] = vec![0, 0];
        let p = SetFunctor::from_sizes(idem.clone(), &[2], maps).unwrap();
        let q = SetFunctor::terminal(idem.clone());
        let u = two.morphism("u").unwrap();
        let mut arrows = vec![NatTrans::new(vec![]); 3];
        arrows[two.id(0)] = NatTrans::identity(&p);
        arrows[two.id(1)] = NatTrans::identity(&q);
        arrows[u] = NatTrans::new(vec![vec![0, 0]]);
        let d = Diagram::from_values(two.clone(), idem, &[p.clone(), q], &arrows).unwrap();
        assert_eq!(d.value(0), p);
        assert_eq!(d.arrow(u), arrows[u]);
        assert_eq!(d.transpose().transpose(), d);
    }
}
