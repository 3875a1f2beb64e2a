//! JSON documents: loading with relative paths and category expressions, and canonical
//! emission (sorted keys) of everything the library produces.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::cat::{opposite, product, FinCat, Functor};
use crate::error::{Error, Result};
use crate::promod::Module;
use crate::setfun::{Diagram, NatTrans, SetFunctor};
use crate::weighted::{Variance, Weight};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDoc {
    id: String,
    src: String,
    tgt: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryDoc {
    objects: Vec<String>,
    morphisms: Vec<MorphismDoc>,
    identities: BTreeMap<String, String>,
    #[serde(default)]
    compose: BTreeMap<String, String>,
}

/// Reads a file and remembers every file read, with its SHA-256 digest.
#[derive(Debug, Default)]
pub struct Loader {
    pub digests: BTreeMap<String, String>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Loader {
    pub fn new() -> Loader {
        Loader::default()
    }

    pub fn read(&mut self, path: &Path) -> Result<(Value, PathBuf)> {
        let bytes = std::fs::read(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.digests.insert(path.display().to_string(), sha256_hex(&bytes));
        let v: Value = serde_json::from_slice(&bytes)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((v, base))
    }

    /// A category expression: a path, an inline document, `{"opposite": e}` or
    /// `{"product": [e, e]}`.
    pub fn category(&mut self, v: &Value, base: &Path) -> Result<FinCat> {
        match v {
            Value::String(p) => {
                let (doc, nb) = self.read(&base.join(p))?;
                self.category(&doc, &nb)
            }
            Value::Object(m) if m.len() == 1 && m.contains_key("opposite") => {
                Ok(opposite(&self.category(&m["opposite"], base)?))
            }
            Value::Object(m) if m.len() == 1 && m.contains_key("product") => {
                let parts = m["product"]
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| malformed("product takes two categories"))?;
                Ok(product(
                    &self.category(&parts[0], base)?,
                    &self.category(&parts[1], base)?,
                ))
            }
            Value::Object(_) => category_from_doc(v),
            _ => Err(malformed(
                "category must be a path, a document, an opposite or a product",
            )),
        }
    }

    pub fn category_file(&mut self, path: &Path) -> Result<FinCat> {
        let (v, base) = self.read(path)?;
        self.category(&v, &base)
    }

    /// The two factors of a module carrier's source `op(B) × A`, as `(A, B)`.
    fn module_factors(&mut self, v: &Value, base: &Path) -> Result<(FinCat, FinCat)> {
        match v {
            Value::String(p) => {
                let (doc, nb) = self.read(&base.join(p))?;
                self.module_factors(&doc, &nb)
            }
            Value::Object(m) if m.len() == 1 && m.contains_key("product") => {
                let parts = m["product"]
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| malformed("product takes two categories"))?;
                let b = opposite(&self.category(&parts[0], base)?);
                Ok((self.category(&parts[1], base)?, b))
            }
            _ => Err(malformed("module source must be a product category `op(B) × A`")),
        }
    }

    pub fn functor(&mut self, v: &Value, base: &Path) -> Result<Functor> {
        let m = v
            .as_object()
            .ok_or_else(|| malformed("functor document must be an object"))?;
        let field = |k: &str| {
            m.get(k)
                .ok_or_else(|| malformed(format!("functor document lacks `{k}`")))
        };
        let s = Arc::new(self.category(field("source")?, base)?);
        let t = Arc::new(self.category(field("target")?, base)?);
        let objs: BTreeMap<String, String> = serde_json::from_value(field("on_objects")?.clone())?;
        let mors: BTreeMap<String, String> = serde_json::from_value(field("on_morphisms")?.clone())?;
        let mut on_obj = Vec::with_capacity(s.n_objects());
        for o in s.objects() {
            let img = objs
                .get(o)
                .ok_or_else(|| malformed(format!("object `{o}` has no image")))?;
            on_obj.push(
                t.object(img)
                    .ok_or_else(|| malformed(format!("dangling object id `{img}`")))?,
            );
        }
        let mut on_mor = Vec::with_capacity(s.n_morphisms());
        for (f, mo) in s.morphisms().iter().enumerate() {
            let img = match mors.get(&mo.name) {
                Some(img) => t
                    .morphism(img)
                    .ok_or_else(|| malformed(format!("dangling morphism id `{img}`")))?,
                None if s.is_identity(f) => t.id(on_obj[mo.src]),
                None => return Err(malformed(format!("morphism `{}` has no image", mo.name))),
            };
            on_mor.push(img);
        }
        Functor::new(s, t, on_obj, on_mor)
    }

    pub fn set_functor(&mut self, v: &Value, base: &Path) -> Result<SetFunctor> {
        let m = v
            .as_object()
            .ok_or_else(|| malformed("set functor document must be an object"))?;
        let src = m
            .get("source")
            .ok_or_else(|| malformed("set functor document lacks `source`"))?;
        let c = Arc::new(self.category(src, base)?);
        set_functor_on(c, m)
    }

    pub fn set_functor_file(&mut self, path: &Path) -> Result<SetFunctor> {
        let (v, base) = self.read(path)?;
        self.set_functor(&v, &base)
    }

    pub fn weight_file(&mut self, path: &Path) -> Result<Weight> {
        let (v, base) = self.read(path)?;
        let variance = match v.get("variance").and_then(Value::as_str) {
            Some("limit") => Variance::Limit,
            Some("colimit") => Variance::Colimit,
            _ => return Err(malformed("weight document needs \"variance\": \"limit\" | \"colimit\"")),
        };
        Ok(Weight::new(self.set_functor(&v, &base)?, variance))
    }

    /// A diagram: a set functor on the shape, or with `"shape"` and `"fiber"` given, a set
    /// functor on their product.
    pub fn diagram_file(&mut self, path: &Path) -> Result<Diagram> {
        let (v, base) = self.read(path)?;
        let carrier = self.set_functor(&v, &base)?;
        match (v.get("shape"), v.get("fiber")) {
            (Some(s), Some(f)) => {
                let shape = Arc::new(self.category(s, &base)?);
                let fiber = Arc::new(self.category(f, &base)?);
                Diagram::from_carrier(shape, fiber, carrier)
            }
            (None, None) => Ok(Diagram::of_sets(&carrier)),
            _ => Err(malformed("diagram needs both `shape` and `fiber`, or neither")),
        }
    }

    pub fn module_file(&mut self, path: &Path) -> Result<Module> {
        let (v, base) = self.read(path)?;
        let src = v
            .get("source")
            .ok_or_else(|| malformed("module document lacks `source`"))?;
        let (a, b) = self.module_factors(src, &base)?;
        let carrier = self.set_functor(&v, &base)?;
        Module::new(Arc::new(a), Arc::new(b), carrier)
    }
}

pub fn category_from_doc(v: &Value) -> Result<FinCat> {
    let d: CategoryDoc = serde_json::from_value(v.clone())?;
    let objs: Vec<&str> = d.objects.iter().map(String::as_str).collect();
    let mors: Vec<(&str, &str, &str)> = d
        .morphisms
        .iter()
        .map(|m| (m.id.as_str(), m.src.as_str(), m.tgt.as_str()))
        .collect();
    let ids: Vec<(&str, &str)> = d.identities.iter().map(|(o, m)| (o.as_str(), m.as_str())).collect();
    let mut comp = Vec::with_capacity(d.compose.len());
    for (k, h) in &d.compose {
        let (g, f) = k
            .split_once('|')
            .ok_or_else(|| malformed(format!("compose key `{k}` is not `g|f`")))?;
        comp.push((g, f, h.as_str()));
    }
    FinCat::from_names(&objs, &mors, &ids, &comp)
}

fn set_functor_on(c: Arc<FinCat>, m: &Map<String, Value>) -> Result<SetFunctor> {
    let objs: BTreeMap<String, Vec<String>> = serde_json::from_value(
        m.get("on_objects")
            .cloned()
            .ok_or_else(|| malformed("set functor lacks `on_objects`"))?,
    )?;
    let mors: BTreeMap<String, BTreeMap<String, String>> = match m.get("on_morphisms") {
        Some(v) => serde_json::from_value(v.clone())?,
        None => BTreeMap::new(),
    };
    for k in objs.keys() {
        if c.object(k).is_none() {
            return Err(malformed(format!("dangling object id `{k}`")));
        }
    }
    for k in mors.keys() {
        if c.morphism(k).is_none() {
            return Err(malformed(format!("dangling morphism id `{k}`")));
        }
    }
    let sets: Vec<Vec<String>> = c
        .objects()
        .iter()
        .map(|o| objs.get(o).cloned().unwrap_or_default())
        .collect();
    let mut maps = Vec::with_capacity(c.n_morphisms());
    for (f, mo) in c.morphisms().iter().enumerate() {
        let (s, t) = (&sets[mo.src], &sets[mo.tgt]);
        let map = match mors.get(&mo.name) {
            Some(table) => s
                .iter()
                .map(|x| {
                    let y = table
                        .get(x)
                        .ok_or_else(|| malformed(format!("`{}` does not say where `{x}` goes", mo.name)))?;
                    t.iter()
                        .position(|z| z == y)
                        .ok_or_else(|| malformed(format!("`{}` sends `{x}` outside its target", mo.name)))
                })
                .collect::<Result<Vec<_>>>()?,
            None if c.is_identity(f) => (0..s.len()).collect(),
            None if s.is_empty() => Vec::new(),
            None => return Err(malformed(format!("morphism `{}` has no action", mo.name))),
        };
        maps.push(map);
    }
    SetFunctor::new(c, sets, maps)
}

pub fn category_json(c: &FinCat) -> Value {
    let morphisms: Vec<Value> = c
        .morphisms()
        .iter()
        .map(|m| json!({"id": m.name, "src": c.object_name(m.src), "tgt": c.object_name(m.tgt)}))
        .collect();
    let identities: Map<String, Value> = (0..c.n_objects())
        .map(|o| (c.object_name(o).to_string(), Value::from(c.morphism_name(c.id(o)))))
        .collect();
    let compose: Map<String, Value> = c
        .composable_pairs()
        .filter(|&(g, f, _)| !c.is_identity(g) && !c.is_identity(f))
        .map(|(g, f, h)| {
            (
                format!("{}|{}", c.morphism_name(g), c.morphism_name(f)),
                Value::from(c.morphism_name(h)),
            )
        })
        .collect();
    json!({"objects": c.objects(), "morphisms": morphisms, "identities": identities, "compose": compose})
}

pub fn functor_json(f: &Functor) -> Value {
    let (s, t) = (f.source(), f.target());
    let objs: Map<String, Value> = (0..s.n_objects())
        .map(|o| (s.object_name(o).to_string(), Value::from(t.object_name(f.obj(o)))))
        .collect();
    let mors: Map<String, Value> = (0..s.n_morphisms())
        .map(|m| (s.morphism_name(m).to_string(), Value::from(t.morphism_name(f.mor(m)))))
        .collect();
    json!({"source": category_json(s), "target": category_json(t), "on_objects": objs, "on_morphisms": mors})
}

/// The set functor on its source, with the source given by `source`.
pub fn set_functor_json_with(f: &SetFunctor, source: Value) -> Value {
    let c = f.source();
    let objs: Map<String, Value> = (0..c.n_objects())
        .map(|o| (c.object_name(o).to_string(), json!(f.labels(o))))
        .collect();
    let mors: Map<String, Value> = (0..c.n_morphisms())
        .filter(|&m| !c.is_identity(m))
        .map(|m| {
            let (s, t) = (c.src(m), c.tgt(m));
            let table: Map<String, Value> = (0..f.size(s))
                .map(|x| (f.label(s, x).to_string(), Value::from(f.label(t, f.apply(m, x)))))
                .collect();
            (c.morphism_name(m).to_string(), Value::Object(table))
        })
        .collect();
    json!({"source": source, "on_objects": objs, "on_morphisms": mors})
}

pub fn set_functor_json(f: &SetFunctor) -> Value {
    set_functor_json_with(f, category_json(f.source()))
}

pub fn module_json(m: &Module) -> Value {
    let source = json!({"product": [{"opposite": category_json(m.target())}, category_json(m.source())]});
    set_functor_json_with(m.carrier(), source)
}

/// `{object: {element: image}}` for a transformation `f ⇒ g`.
pub fn nat_json(t: &NatTrans, f: &SetFunctor, g: &SetFunctor) -> Value {
    let c = f.source();
    let comps: Map<String, Value> = (0..c.n_objects())
        .map(|o| {
            let table: Map<String, Value> = t.components[o]
                .iter()
                .enumerate()
                .map(|(x, &y)| (f.label(o, x).to_string(), Value::from(g.label(o, y))))
                .collect();
            (c.object_name(o).to_string(), Value::Object(table))
        })
        .collect();
    Value::Object(comps)
}

/// Reads a transformation `f ⇒ g` written by [`nat_json`].
pub fn nat_from_json(v: &Value, f: &SetFunctor, g: &SetFunctor) -> Result<NatTrans> {
    let c = f.source();
    let table: BTreeMap<String, BTreeMap<String, String>> = serde_json::from_value(v.clone())?;
    let mut comps = Vec::with_capacity(c.n_objects());
    for o in 0..c.n_objects() {
        let row = table.get(c.object_name(o));
        let comp = (0..f.size(o))
            .map(|x| {
                let y = row.and_then(|r| r.get(f.label(o, x))).ok_or_else(|| {
                    malformed(format!(
                        "component at `{}` misses `{}`",
                        c.object_name(o),
                        f.label(o, x)
                    ))
                })?;
                g.element(o, y)
                    .ok_or_else(|| malformed(format!("`{y}` is not an element at `{}`", c.object_name(o))))
            })
            .collect::<Result<Vec<_>>>()?;
        comps.push(comp);
    }
    Ok(NatTrans::new(comps))
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn categories_round_trip() {
        for (name, c) in fixtures::categories() {
            let back = category_from_doc(&category_json(&c)).unwrap();
            assert_eq!(back, c, "{name}");
        }
    }

    #[test]
    fn set_functors_round_trip() {
        let idem = Arc::new(fixtures::idem());
        let f = crate::setfun::corepresentable(&idem, 0);
        let v = set_functor_json(&f);
        let back = Loader::new().set_functor(&v, Path::new(".")).unwrap();
        assert_eq!(back, f);
        let id = NatTrans::identity(&f);
        assert_eq!(nat_from_json(&nat_json(&id, &f, &f), &f, &f).unwrap(), id);
    }

    #[test]
    fn modules_round_trip() {
        for (name, t) in fixtures::functors() {
            let (lo, _) = crate::promod::functor_modules(&t);
            let v = module_json(&lo);
            let src = v["source"].clone();
            let (a, b) = Loader::new().module_factors(&src, Path::new(".")).unwrap();
            assert_eq!((&a, &b), (lo.source().as_ref(), lo.target().as_ref()), "{name}");
        }
    }
}
