//! Finite categories given by explicit composition tables, and functors between them.

mod functor;
mod search;

pub use functor::Functor;
pub use search::{certify_equivalence, find_isomorphism, EquivalenceCert, IsoPair};

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result, Violation};
use crate::names;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category. Objects and morphisms are indexed densely; names are kept for I/O.
///
/// `compose(g, f)` reads "g after f" and is defined exactly when `tgt(f) == src(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    table: Vec<u32>,
    hom: Vec<Vec<usize>>,
    obj_index: HashMap<String, usize>,
    mor_index: HashMap<String, usize>,
}

impl FinCat {
    /// Builds and fully validates a category. Composites involving an identity may be
    /// omitted from `compose`; they are filled in from the identity laws.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: &[(usize, usize, usize)],
    ) -> Result<FinCat> {
        let mut v = Vec::new();
        let n = objects.len();
        let m = morphisms.len();

        let mut obj_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                v.push(Violation::new("distinct object ids", o.clone()));
            }
        }
        let mut mor_index = HashMap::new();
        for (i, f) in morphisms.iter().enumerate() {
            if mor_index.insert(f.name.clone(), i).is_some() {
                v.push(Violation::new("distinct morphism ids", f.name.clone()));
            }
            if f.src >= n || f.tgt >= n {
                v.push(Violation::new("morphism endpoints exist", f.name.clone()));
            }
        }
        if identities.len() != n {
            v.push(Violation::new(
                "one identity per object",
                format!("{} identities for {} objects", identities.len(), n),
            ));
        }
        if !v.is_empty() {
            return Err(Error::Invalid(v));
        }
        for (o, &i) in identities.iter().enumerate() {
            if i >= m || morphisms[i].src != o || morphisms[i].tgt != o {
                v.push(Violation::new(
                    "identity is an endomorphism of its object",
                    objects[o].clone(),
                ));
            }
        }
        if !v.is_empty() {
            return Err(Error::Invalid(v));
        }

        let mut table = vec![NONE; m * m];
        for &(g, f, h) in compose {
            if g >= m || f >= m || h >= m {
                v.push(Violation::new("compose entries name morphisms", format!("{g}|{f}")));
                continue;
            }
            let (mg, mf, mh) = (&morphisms[g], &morphisms[f], &morphisms[h]);
            if mf.tgt != mg.src {
                v.push(Violation::new(
                    "compose entries are composable",
                    format!("{}|{}", mg.name, mf.name),
                ));
                continue;
            }
            if mh.src != mf.src || mh.tgt != mg.tgt {
                v.push(Violation::new(
                    "composite has correct source and target",
                    format!("{}|{} = {}", mg.name, mf.name, mh.name),
                ));
                continue;
            }
            let slot = &mut table[g * m + f];
            if *slot != NONE && *slot as usize != h {
                v.push(Violation::new(
                    "compose entries agree",
                    format!("{}|{}", mg.name, mf.name),
                ));
            }
            *slot = h as u32;
        }
        for f in 0..m {
            let (s, t) = (morphisms[f].src, morphisms[f].tgt);
            for (g, h, law) in [
                (identities[t], f, "left identity law id∘f = f"),
                (f, identities[s], "right identity law f∘id = f"),
            ] {
                let slot = &mut table[g * m + h];
                if *slot == NONE {
                    *slot = f as u32;
                } else if *slot as usize != f {
                    v.push(Violation::new(
                        law,
                        format!(
                            "{}|{} = {} ≠ {}",
                            morphisms[g].name, morphisms[h].name, morphisms[*slot as usize].name, morphisms[f].name
                        ),
                    ));
                }
            }
        }
        for g in 0..m {
            for f in 0..m {
                if morphisms[f].tgt == morphisms[g].src && table[g * m + f] == NONE {
                    v.push(Violation::new(
                        "compose is total on composable pairs",
                        format!("missing {}|{}", morphisms[g].name, morphisms[f].name),
                    ));
                }
            }
        }
        if !v.is_empty() {
            return Err(Error::Invalid(v));
        }

        let cat = FinCat::assemble(objects, morphisms, identities, table);
        let assoc = cat.associativity_violations();
        if !assoc.is_empty() {
            return Err(Error::Invalid(assoc));
        }
        Ok(cat)
    }

    /// Internal constructor for categories built by this crate; the laws hold by construction.
    pub(crate) fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        table: Vec<u32>,
    ) -> FinCat {
        let n = objects.len();
        let mut hom = vec![Vec::new(); n * n];
        for (i, f) in morphisms.iter().enumerate() {
            hom[f.src * n + f.tgt].push(i);
        }
        let obj_index = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        let mor_index = morphisms.iter().enumerate().map(|(i, f)| (f.name.clone(), i)).collect();
        FinCat {
            objects,
            morphisms,
            identities,
            table,
            hom,
            obj_index,
            mor_index,
        }
    }

    pub fn from_names(
        objects: &[&str],
        morphisms: &[(&str, &str, &str)],
        identities: &[(&str, &str)],
        compose: &[(&str, &str, &str)],
    ) -> Result<FinCat> {
        let objs: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let oi = |name: &str| -> Result<usize> {
            objects
                .iter()
                .position(|o| *o == name)
                .ok_or_else(|| Error::Malformed(format!("dangling object id `{name}`")))
        };
        let mut mors = Vec::new();
        for (id, s, t) in morphisms {
            mors.push(Morphism {
                name: id.to_string(),
                src: oi(s)?,
                tgt: oi(t)?,
            });
        }
        let mi = |name: &str| -> Result<usize> {
            morphisms
                .iter()
                .position(|m| m.0 == name)
                .ok_or_else(|| Error::Malformed(format!("dangling morphism id `{name}`")))
        };
        let mut ids = vec![usize::MAX; objs.len()];
        for (o, m) in identities {
            ids[oi(o)?] = mi(m)?;
        }
        if let Some(o) = ids.iter().position(|&i| i == usize::MAX) {
            return Err(Error::Malformed(format!("no identity for object `{}`", objs[o])));
        }
        let mut comp = Vec::new();
        for (g, f, h) in compose {
            comp.push((mi(g)?, mi(f)?, mi(h)?));
        }
        FinCat::new(objs, mors, ids, &comp)
    }

    fn associativity_violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let m = self.morphisms.len();
        for f in 0..m {
            for g in self.out_of(self.morphisms[f].tgt) {
                let gf = self.comp(g, f);
                for h in self.out_of(self.morphisms[g].tgt) {
                    let hg = self.comp(h, g);
                    let left = self.comp(hg, f);
                    let right = self.comp(h, gf);
                    if left != right {
                        v.push(Violation::new(
                            "associativity (h∘g)∘f = h∘(g∘f)",
                            format!(
                                "h={}, g={}, f={}: {} ≠ {}",
                                self.morphisms[h].name,
                                self.morphisms[g].name,
                                self.morphisms[f].name,
                                self.morphisms[left].name,
                                self.morphisms[right].name
                            ),
                        ));
                    }
                }
            }
        }
        v
    }

    /// Re-runs every category law. Used to double-check generated categories.
    pub fn law_violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let m = self.morphisms.len();
        for g in 0..m {
            for f in 0..m {
                let composable = self.morphisms[f].tgt == self.morphisms[g].src;
                match (composable, self.compose(g, f)) {
                    (true, None) => v.push(Violation::new(
                        "compose is total on composable pairs",
                        format!("{}|{}", self.morphisms[g].name, self.morphisms[f].name),
                    )),
                    (true, Some(h)) => {
                        if self.morphisms[h].src != self.morphisms[f].src
                            || self.morphisms[h].tgt != self.morphisms[g].tgt
                        {
                            v.push(Violation::new(
                                "composite has correct source and target",
                                format!("{}|{}", self.morphisms[g].name, self.morphisms[f].name),
                            ));
                        }
                    }
                    (false, Some(_)) => v.push(Violation::new(
                        "compose entries are composable",
                        format!("{}|{}", self.morphisms[g].name, self.morphisms[f].name),
                    )),
                    (false, None) => {}
                }
            }
        }
        for f in 0..m {
            let (s, t) = (self.morphisms[f].src, self.morphisms[f].tgt);
            if self.compose(self.identities[t], f) != Some(f) || self.compose(f, self.identities[s]) != Some(f) {
                v.push(Violation::new("identity laws", self.morphisms[f].name.clone()));
            }
        }
        if v.is_empty() {
            v.extend(self.associativity_violations());
        }
        v
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn morphism_name(&self, f: usize) -> &str {
        &self.morphisms[f].name
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism(&self, name: &str) -> Option<usize> {
        self.mor_index.get(name).copied()
    }

    #[inline]
    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].src
    }

    #[inline]
    pub fn tgt(&self, f: usize) -> usize {
        self.morphisms[f].tgt
    }

    #[inline]
    pub fn id(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].src] == f
    }

    #[inline]
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let h = self.table[g * self.morphisms.len() + f];
        (h != NONE).then_some(h as usize)
    }

    /// `g ∘ f`; panics when the pair is not composable.
    #[inline]
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose(g, f).unwrap_or_else(|| {
            panic!(
                "{} and {} are not composable",
                self.morphisms[g].name, self.morphisms[f].name
            )
        })
    }

    #[inline]
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn out_of(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).flat_map(move |b| self.hom(a, b).iter().copied())
    }

    pub fn into_of(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).flat_map(move |a| self.hom(a, b).iter().copied())
    }

    /// Composable pairs `(g, f)` as a list, in table order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let m = self.morphisms.len();
        (0..m).flat_map(move |g| (0..m).filter_map(move |f| self.compose(g, f).map(|h| (g, f, h))))
    }

    /// Idempotent morphisms `e` with `e∘e = e`, in index order.
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&e| self.src(e) == self.tgt(e) && self.comp(e, e) == e)
            .collect()
    }
}

/// Morphism directions reversed, composition transposed. Identifiers are kept, so
/// `opposite(&opposite(c)) == c`.
pub fn opposite(c: &FinCat) -> FinCat {
    let m = c.n_morphisms();
    let morphisms = c
        .morphisms
        .iter()
        .map(|f| Morphism {
            name: f.name.clone(),
            src: f.tgt,
            tgt: f.src,
        })
        .collect();
    let mut table = vec![NONE; m * m];
    for g in 0..m {
        for f in 0..m {
            table[g * m + f] = c.table[f * m + g];
        }
    }
    FinCat::assemble(c.objects.clone(), morphisms, c.identities.clone(), table)
}

/// Product with objects `⟨x,y⟩` and morphisms `⟨f,g⟩`, ordered by (left index, right index).
///
/// Object `(i, j)` has index `i * |D| + j`; morphism `(f, g)` has index `f * |mor D| + g`.
pub fn product(c: &FinCat, d: &FinCat) -> FinCat {
    let (nc, nd) = (c.n_objects(), d.n_objects());
    let (mc, md) = (c.n_morphisms(), d.n_morphisms());
    let mut objects = Vec::with_capacity(nc * nd);
    for x in &c.objects {
        for y in &d.objects {
            objects.push(names::pair(x, y));
        }
    }
    let mut morphisms = Vec::with_capacity(mc * md);
    for f in &c.morphisms {
        for g in &d.morphisms {
            morphisms.push(Morphism {
                name: names::pair(&f.name, &g.name),
                src: f.src * nd + g.src,
                tgt: f.tgt * nd + g.tgt,
            });
        }
    }
    let mut identities = Vec::with_capacity(nc * nd);
    for x in 0..nc {
        for y in 0..nd {
            identities.push(c.id(x) * md + d.id(y));
        }
    }
    let m = mc * md;
    let mut table = vec![NONE; m * m];
    for (g1, f1, h1) in c.composable_pairs() {
        for (g2, f2, h2) in d.composable_pairs() {
            table[(g1 * md + g2) * m + (f1 * md + f2)] = (h1 * md + h2) as u32;
        }
    }
    FinCat::assemble(objects, morphisms, identities, table)
}

/// The two projection functors out of `product(c, d)`.
pub fn projections(c: &Arc<FinCat>, d: &Arc<FinCat>, prod: &Arc<FinCat>) -> (Functor, Functor) {
    let nd = d.n_objects();
    let md = d.n_morphisms();
    let left = Functor::assemble(
        prod.clone(),
        c.clone(),
        (0..prod.n_objects()).map(|o| o / nd).collect(),
        (0..prod.n_morphisms()).map(|f| f / md).collect(),
    );
    let right = Functor::assemble(
        prod.clone(),
        d.clone(),
        (0..prod.n_objects()).map(|o| o % nd).collect(),
        (0..prod.n_morphisms()).map(|f| f % md).collect(),
    );
    (left, right)
}
