//! Finite-set-valued functors, natural transformations, conical (co)limits, ends and
//! coends, the Yoneda embedding and categories of elements.

mod conical;
mod diagram;
mod elements;
mod ends;
mod enumerate;
mod search;
mod yoneda;

pub use conical::{conical_colimit, conical_limit, Colimit, Limit};
pub use diagram::Diagram;
pub use elements::{elements, Elements, Variance};
pub use ends::{coend, end, function_index, function_sets, functions, Coend, End};
pub use enumerate::{for_each_set_functor, size_vectors};
pub use search::{find_iso, nat_set, NatSearch};
pub use yoneda::{corepresentable, representable, yoneda, Yoneda};

use std::sync::Arc;

use crate::cat::{FinCat, Functor};
use crate::error::{Error, Result, Violation};
use crate::names;

/// A functor `C → FinSet`. Elements of each set are indices `0..n`; labels are carried
/// alongside for I/O and canonical naming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunctor {
    source: Arc<FinCat>,
    sets: Vec<Vec<String>>,
    maps: Vec<Vec<usize>>,
}

impl SetFunctor {
    pub fn new(source: Arc<FinCat>, sets: Vec<Vec<String>>, maps: Vec<Vec<usize>>) -> Result<SetFunctor> {
        if sets.len() != source.n_objects() || maps.len() != source.n_morphisms() {
            return Err(Error::Malformed(
                "set functor must give a set per object and a function per morphism".into(),
            ));
        }
        let f = SetFunctor { source, sets, maps };
        let v = f.violations();
        if v.is_empty() {
            Ok(f)
        } else {
            Err(Error::Invalid(v))
        }
    }

    pub(crate) fn assemble(source: Arc<FinCat>, sets: Vec<Vec<String>>, maps: Vec<Vec<usize>>) -> SetFunctor {
        debug_assert_eq!(sets.len(), source.n_objects());
        debug_assert_eq!(maps.len(), source.n_morphisms());
        SetFunctor { source, sets, maps }
    }

    /// Builds a functor from set sizes and functions, labelling elements `0..n`.
    pub fn from_sizes(source: Arc<FinCat>, sizes: &[usize], maps: Vec<Vec<usize>>) -> Result<SetFunctor> {
        SetFunctor::new(source, sizes.iter().map(|&n| names::numbered(n)).collect(), maps)
    }

    /// The constant functor at an `n`-element set.
    pub fn constant(source: Arc<FinCat>, n: usize) -> SetFunctor {
        let sets = vec![names::numbered(n); source.n_objects()];
        let maps = vec![(0..n).collect(); source.n_morphisms()];
        SetFunctor::assemble(source, sets, maps)
    }

    /// `Δ1`, the constant singleton functor.
    pub fn terminal(source: Arc<FinCat>) -> SetFunctor {
        let sets = vec![vec!["∗".to_string()]; source.n_objects()];
        let maps = vec![vec![0]; source.n_morphisms()];
        SetFunctor::assemble(source, sets, maps)
    }

    /// A finite set, as a functor on the terminal category.
    pub fn set(labels: Vec<String>) -> SetFunctor {
        let one = Arc::new(crate::fixtures::terminal());
        let n = labels.len();
        SetFunctor::assemble(one, vec![labels], vec![(0..n).collect()])
    }

    pub fn violations(&self) -> Vec<Violation> {
        let c = &self.source;
        let mut v = Vec::new();
        for f in 0..c.n_morphisms() {
            let (s, t) = (c.src(f), c.tgt(f));
            let m = &self.maps[f];
            if m.len() != self.sets[s].len() || m.iter().any(|&y| y >= self.sets[t].len()) {
                v.push(Violation::new(
                    "morphism maps to a total function between the right sets",
                    c.morphism_name(f).to_string(),
                ));
            }
        }
        if !v.is_empty() {
            return v;
        }
        for o in 0..c.n_objects() {
            if self.maps[c.id(o)].iter().enumerate().any(|(x, &y)| x != y) {
                v.push(Violation::new(
                    "identities map to identity functions",
                    c.object_name(o).to_string(),
                ));
            }
        }
        for (g, f, h) in c.composable_pairs() {
            if (0..self.sets[c.src(f)].len()).any(|x| self.maps[g][self.maps[f][x]] != self.maps[h][x]) {
                v.push(Violation::new(
                    "composition maps to composed functions",
                    format!("{}|{}", c.morphism_name(g), c.morphism_name(f)),
                ));
            }
        }
        v
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    #[inline]
    pub fn size(&self, o: usize) -> usize {
        self.sets[o].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn total_size(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn labels(&self, o: usize) -> &[String] {
        &self.sets[o]
    }

    pub fn sets(&self) -> &[Vec<String>] {
        &self.sets
    }

    #[inline]
    pub fn label(&self, o: usize, x: usize) -> &str {
        &self.sets[o][x]
    }

    pub fn element(&self, o: usize, label: &str) -> Option<usize> {
        self.sets[o].iter().position(|l| l == label)
    }

    #[inline]
    pub fn map(&self, f: usize) -> &[usize] {
        &self.maps[f]
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    #[inline]
    pub fn apply(&self, f: usize, x: usize) -> usize {
        self.maps[f][x]
    }

    /// `self ∘ g` for a functor `g` into this functor's source.
    pub fn pullback(&self, g: &Functor) -> SetFunctor {
        debug_assert!(g.target().as_ref() == self.source.as_ref());
        let src = g.source();
        SetFunctor::assemble(
            src.clone(),
            (0..src.n_objects()).map(|o| self.sets[g.obj(o)].clone()).collect(),
            (0..src.n_morphisms()).map(|f| self.maps[g.mor(f)].clone()).collect(),
        )
    }

    /// The same functor with positional labels.
    pub fn relabelled(&self) -> SetFunctor {
        SetFunctor::assemble(
            self.source.clone(),
            self.sets.iter().map(|s| names::numbered(s.len())).collect(),
            self.maps.clone(),
        )
    }

    /// The same data read as a functor on `other`, which must equal the source structurally.
    pub fn with_source(&self, other: Arc<FinCat>) -> Result<SetFunctor> {
        if other.as_ref() != self.source.as_ref() {
            return Err(Error::shape("set functor source does not match"));
        }
        Ok(SetFunctor::assemble(other, self.sets.clone(), self.maps.clone()))
    }

    pub fn same_shape(&self, other: &SetFunctor) -> bool {
        self.source.as_ref() == other.source.as_ref()
    }

    pub fn require_same_source(&self, other: &SetFunctor, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::shape(format!(
                "{what}: functors have different source categories"
            )))
        }
    }
}

/// A natural transformation, stored as one function per object of the shared source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NatTrans {
    pub components: Vec<Vec<usize>>,
}

impl NatTrans {
    pub fn new(components: Vec<Vec<usize>>) -> NatTrans {
        NatTrans { components }
    }

    pub fn identity(f: &SetFunctor) -> NatTrans {
        NatTrans {
            components: (0..f.source.n_objects()).map(|o| (0..f.size(o)).collect()).collect(),
        }
    }

    #[inline]
    pub fn at(&self, o: usize, x: usize) -> usize {
        self.components[o][x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &NatTrans) -> NatTrans {
        NatTrans {
            components: first
                .components
                .iter()
                .zip(&self.components)
                .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
                .collect(),
        }
    }

    /// Exhaustive naturality and well-typedness check of `self: f ⇒ g`.
    pub fn violations(&self, f: &SetFunctor, g: &SetFunctor) -> Vec<Violation> {
        let c = f.source();
        let mut v = Vec::new();
        if !f.same_shape(g) || self.components.len() != c.n_objects() {
            v.push(Violation::new(
                "transformation shape",
                "source categories or component count differ",
            ));
            return v;
        }
        for o in 0..c.n_objects() {
            let comp = &self.components[o];
            if comp.len() != f.size(o) || comp.iter().any(|&y| y >= g.size(o)) {
                v.push(Violation::new(
                    "component is a total function",
                    c.object_name(o).to_string(),
                ));
            }
        }
        if !v.is_empty() {
            return v;
        }
        for m in 0..c.n_morphisms() {
            let (s, t) = (c.src(m), c.tgt(m));
            for x in 0..f.size(s) {
                if self.components[t][f.apply(m, x)] != g.apply(m, self.components[s][x]) {
                    v.push(Violation::new(
                        "naturality square commutes",
                        format!("{} at {}", c.morphism_name(m), f.label(s, x)),
                    ));
                    break;
                }
            }
        }
        v
    }

    pub fn is_natural(&self, f: &SetFunctor, g: &SetFunctor) -> bool {
        self.violations(f, g).is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.iter().enumerate().all(|(x, &y)| x == y))
    }

    /// Componentwise inverse, if every component is a bijection onto `g`'s sets.
    pub fn inverse(&self, g: &SetFunctor) -> Option<NatTrans> {
        let mut out = Vec::with_capacity(self.components.len());
        for (o, comp) in self.components.iter().enumerate() {
            if comp.len() != g.size(o) {
                return None;
            }
            let mut inv = vec![usize::MAX; comp.len()];
            for (x, &y) in comp.iter().enumerate() {
                if inv[y] != usize::MAX {
                    return None;
                }
                inv[y] = x;
            }
            out.push(inv);
        }
        Some(NatTrans { components: out })
    }
}
