//! Self-contained certificates. Every structure a certificate talks about is inlined, so
//! `verify` needs nothing but the certificate itself.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::cat::{EquivalenceCert, IsoPair};
use crate::cauchy::RetractWitness;
use crate::doc::{self, Loader};
use crate::error::{Error, Limits, Result, Violation};
use crate::promod::{check_adjunction, compose_modules, AdjunctionCertificate, Module};
use crate::setfun::{representable, NatTrans, SetFunctor};
use crate::weighted::{commutes_at, ComparisonVerdict, Weight};

/// `t: f ⇒ g` between set functors, claimed invertible.
pub fn iso(f: &SetFunctor, g: &SetFunctor, t: &NatTrans) -> Value {
    json!({
        "kind": "iso",
        "source": doc::set_functor_json(f),
        "target": doc::set_functor_json(g),
        "map": doc::nat_json(t, f, g),
    })
}

pub fn equivalence(e: &EquivalenceCert) -> Value {
    let t = e.functor.target();
    let s = e.functor.source();
    let witnesses: Vec<Value> = e
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "target": t.object_name(w.target),
                "source": s.object_name(w.source),
                "forward": t.morphism_name(w.forward),
                "backward": t.morphism_name(w.backward),
            })
        })
        .collect();
    json!({"kind": "equivalence", "functor": doc::functor_json(&e.functor), "witnesses": witnesses})
}

/// `φ` as a retract of the representable at `w.object`.
pub fn retract(phi: &SetFunctor, w: &RetractWitness) -> Value {
    let y = representable(phi.source(), w.object);
    json!({
        "kind": "retract",
        "presheaf": doc::set_functor_json(phi),
        "object": phi.source().object_name(w.object),
        "section": doc::nat_json(&w.section, phi, &y),
        "retraction": doc::nat_json(&w.retraction, &y, phi),
    })
}

/// `f ⊣ g` with unit and counit written against the composites as the library builds
/// them, which `verify` rebuilds.
pub fn adjunction(f: &Module, g: &Module, c: &AdjunctionCertificate, limits: &Limits) -> Result<Value> {
    let gf = compose_modules(g, f, limits)?;
    let fg = compose_modules(f, g, limits)?;
    let hom_a = Module::hom(f.source());
    let hom_b = Module::hom(f.target());
    Ok(json!({
        "kind": "adjunction",
        "left": doc::module_json(f),
        "right": doc::module_json(g),
        "unit": doc::nat_json(&c.unit, hom_a.carrier(), gf.module.carrier()),
        "counit": doc::nat_json(&c.counit, fg.module.carrier(), hom_b.carrier()),
    }))
}

/// The comparison `φ ∗ {ψ, S} → {ψ, φ ∗ S}` at `s`, with the map and verdict.
pub fn comparison(phi: &Weight, psi: &Weight, s: &SetFunctor, v: &ComparisonVerdict) -> Value {
    let weight = |w: &Weight| {
        let mut d = doc::set_functor_json(w.functor());
        d["variance"] = Value::from(w.variance().as_str());
        d
    };
    json!({
        "kind": "comparison",
        "colimit_weight": weight(phi),
        "limit_weight": weight(psi),
        "diagram": doc::set_functor_json(s),
        "map": v.map,
        "invertible": v.invertible,
    })
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k)
        .ok_or_else(|| Error::Malformed(format!("certificate lacks `{k}`")))
}

fn fail(law: &str, witness: impl Into<String>) -> Result<std::result::Result<(), Violation>> {
    Ok(Err(Violation::new(law, witness)))
}

fn inline_weight(loader: &mut Loader, v: &Value) -> Result<Weight> {
    let variance = match v.get("variance").and_then(Value::as_str) {
        Some("limit") => crate::weighted::Variance::Limit,
        Some("colimit") => crate::weighted::Variance::Colimit,
        _ => return Err(Error::Malformed("weight needs a variance".into())),
    };
    Ok(Weight::new(loader.set_functor(v, Path::new("."))?, variance))
}

fn inline_module(loader: &mut Loader, v: &Value) -> Result<Module> {
    let src = field(v, "source")?;
    let parts = src
        .get("product")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Malformed("module source must be a product".into()))?;
    let b = crate::cat::opposite(&loader.category(&parts[0], Path::new("."))?);
    let a = loader.category(&parts[1], Path::new("."))?;
    let carrier = loader.set_functor(v, Path::new("."))?;
    Module::new(Arc::new(a), Arc::new(b), carrier)
}

/// Re-checks a certificate from scratch. The outer error is for documents that cannot be
/// read at all; the inner one names the failed claim.
pub fn verify(cert: &Value, limits: &Limits) -> Result<std::result::Result<(), Violation>> {
    let mut loader = Loader::new();
    let here = Path::new(".");
    let kind = field(cert, "kind")?.as_str().unwrap_or_default();
    match kind {
        "iso" => {
            let f = loader.set_functor(field(cert, "source")?, here)?;
            let g = loader.set_functor(field(cert, "target")?, here)?;
            f.require_same_source(&g, "iso")?;
            let t = doc::nat_from_json(field(cert, "map")?, &f, &g)?;
            if !t.is_natural(&f, &g) {
                return fail("iso is natural", "naturality square fails");
            }
            if t.inverse(&g).is_none() {
                return fail("iso is invertible", "some component is not a bijection");
            }
            Ok(Ok(()))
        }
        "equivalence" => {
            let functor = loader.functor(field(cert, "functor")?, here)?;
            let (s, t) = (functor.source().clone(), functor.target().clone());
            let ws = field(cert, "witnesses")?
                .as_array()
                .ok_or_else(|| Error::Malformed("witnesses must be a list".into()))?;
            let mut witnesses = Vec::with_capacity(ws.len());
            for w in ws {
                let name = |k: &str| field(w, k).map(|x| x.as_str().unwrap_or_default().to_string());
                let unknown = |what: &str, n: &str| Error::Malformed(format!("unknown {what} `{n}`"));
                let (tn, sn, fw, bw) = (name("target")?, name("source")?, name("forward")?, name("backward")?);
                witnesses.push(IsoPair {
                    target: t.object(&tn).ok_or_else(|| unknown("object", &tn))?,
                    source: s.object(&sn).ok_or_else(|| unknown("object", &sn))?,
                    forward: t.morphism(&fw).ok_or_else(|| unknown("morphism", &fw))?,
                    backward: t.morphism(&bw).ok_or_else(|| unknown("morphism", &bw))?,
                });
            }
            Ok(EquivalenceCert { functor, witnesses }.verify())
        }
        "retract" => {
            let phi = loader.set_functor(field(cert, "presheaf")?, here)?;
            let on = field(cert, "object")?.as_str().unwrap_or_default();
            let object = phi
                .source()
                .object(on)
                .ok_or_else(|| Error::Malformed(format!("unknown object `{on}`")))?;
            let y = representable(phi.source(), object);
            let w = RetractWitness {
                object,
                section: doc::nat_from_json(field(cert, "section")?, &phi, &y)?,
                retraction: doc::nat_from_json(field(cert, "retraction")?, &y, &phi)?,
            };
            if w.verify(&phi) {
                Ok(Ok(()))
            } else {
                fail("retraction after section is the identity", on)
            }
        }
        "adjunction" => {
            let f = inline_module(&mut loader, field(cert, "left")?)?;
            let g = inline_module(&mut loader, field(cert, "right")?)?;
            if g.source() != f.target() || g.target() != f.source() {
                return fail("adjoint modules go opposite ways", "source/target mismatch");
            }
            let gf = compose_modules(&g, &f, limits)?;
            let fg = compose_modules(&f, &g, limits)?;
            let hom_a = Module::hom(f.source());
            let hom_b = Module::hom(f.target());
            let unit = doc::nat_from_json(field(cert, "unit")?, hom_a.carrier(), gf.module.carrier())?;
            let counit = doc::nat_from_json(field(cert, "counit")?, fg.module.carrier(), hom_b.carrier())?;
            let c = check_adjunction(&f, &g, &unit, &counit, limits)?;
            if let Some(w) = c.naturality {
                return fail("unit and counit are natural", w);
            }
            if let Some(w) = c.left_triangle.failure {
                return fail("left triangle identity", w);
            }
            if let Some(w) = c.right_triangle.failure {
                return fail("right triangle identity", w);
            }
            Ok(Ok(()))
        }
        "comparison" => {
            let phi = inline_weight(&mut loader, field(cert, "colimit_weight")?)?;
            let psi = inline_weight(&mut loader, field(cert, "limit_weight")?)?;
            let s = loader.set_functor(field(cert, "diagram")?, here)?;
            let map: Vec<usize> = serde_json::from_value(field(cert, "map")?.clone())?;
            let invertible = field(cert, "invertible")?.as_bool().unwrap_or_default();
            let v = commutes_at(&phi, &psi, &s, limits)?;
            if v.map != map {
                return fail("comparison map is the canonical one", "recomputed map differs");
            }
            if v.invertible != invertible {
                return fail(
                    "comparison verdict",
                    v.witness.unwrap_or_else(|| "map is invertible".into()),
                );
            }
            Ok(Ok(()))
        }
        other => Err(Error::Malformed(format!("unknown certificate kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cauchy::{cauchy_completion, retract_search};
    use crate::fixtures;
    use crate::promod::{functor_modules, has_right_adjoint};
    use crate::setfun::find_iso;

    #[test]
    fn certificates_replay() {
        let l = Limits::default();
        let idem = Arc::new(fixtures::idem());
        let q = cauchy_completion(&idem, &l).unwrap();
        assert_eq!(verify(&equivalence(&q.equivalence), &l).unwrap(), Ok(()));

        let r = &q.retracts[1];
        let w = retract_search(r, &l).unwrap().unwrap();
        assert_eq!(verify(&retract(r, &w), &l).unwrap(), Ok(()));

        let t = find_iso(r, r, &l).unwrap().unwrap();
        assert_eq!(verify(&iso(r, r, &t), &l).unwrap(), Ok(()));

        for (name, t) in fixtures::functors() {
            let (lo, _) = functor_modules(&t);
            let v = has_right_adjoint(&lo, &l).unwrap();
            let c = adjunction(&lo, &v.lifting, v.certificate.as_ref().unwrap(), &l).unwrap();
            assert_eq!(verify(&c, &l).unwrap(), Ok(()), "{name}");
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let l = Limits::default();
        let idem = Arc::new(fixtures::idem());
        let r = cauchy_completion(&idem, &l).unwrap().retracts[0].clone();
        let w = retract_search(&r, &l).unwrap().unwrap();
        let mut c = retract(&r, &w);
        // Send everything to the same element.
        let first = r.label(0, 0).to_string();
        for (_, row) in c["retraction"].as_object_mut().unwrap() {
            for (_, y) in row.as_object_mut().unwrap() {
                *y = Value::from(first.clone());
            }
        }
        assert!(verify(&c, &l).map(|r| r.is_err()).unwrap_or(true));
    }
}
