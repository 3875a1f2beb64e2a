use std::ops::ControlFlow;
use std::sync::Arc;

use super::{compose_modules, rlift, Composite, Module};
use crate::cat::FinCat;
use crate::error::{Error, Limits, Result};
use crate::setfun::{nat_set, representable, yoneda, NatSearch, NatTrans, SetFunctor};
use crate::weighted::{preserves_colimit, weighted_colimit, Ambient, Preservation, Weight};

/// One triangle identity, checked element by element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCheck {
    pub holds: bool,
    pub failure: Option<String>,
}

impl TriangleCheck {
    fn from(failure: Option<String>) -> TriangleCheck {
        TriangleCheck {
            holds: failure.is_none(),
            failure,
        }
    }
}

/// Unit `η: 1_A ⇒ g∘f` and counit `ε: f∘g ⇒ 1_B` for `f: A ⇸ B`, `g: B ⇸ A`, with the
/// outcome of checking them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionCertificate {
    pub unit: NatTrans,
    pub counit: NatTrans,
    /// Naturality of both 2-cells; the first failure if any.
    pub naturality: Option<String>,
    /// `(εf)∘(fη) = 1_f`.
    pub left_triangle: TriangleCheck,
    /// `(gε)∘(ηg) = 1_g`.
    pub right_triangle: TriangleCheck,
}

impl AdjunctionCertificate {
    pub fn holds(&self) -> bool {
        self.naturality.is_none() && self.left_triangle.holds && self.right_triangle.holds
    }
}

fn hom_index(c: &FinCat, x: usize, y: usize, m: usize) -> usize {
    c.hom(x, y).iter().position(|&h| h == m).expect("morphism in its hom")
}

struct Triangles<'a> {
    f: &'a Module,
    g: &'a Module,
    gf: Composite,
    fg: Composite,
}

impl Triangles<'_> {
    fn certify(&self, unit: &NatTrans, counit: &NatTrans) -> AdjunctionCertificate {
        let (a, b) = (self.f.source(), self.f.target());
        let hom_a = Module::hom(a);
        let hom_b = Module::hom(b);
        let naturality = unit
            .violations(hom_a.carrier(), self.gf.module.carrier())
            .into_iter()
            .map(|v| format!("unit: {}", v.witness))
            .chain(
                counit
                    .violations(self.fg.module.carrier(), hom_b.carrier())
                    .into_iter()
                    .map(|v| format!("counit: {}", v.witness)),
            )
            .next();
        if naturality.is_some() {
            return AdjunctionCertificate {
                unit: unit.clone(),
                counit: counit.clone(),
                naturality,
                left_triangle: TriangleCheck::from(Some("2-cells are not natural".into())),
                right_triangle: TriangleCheck::from(Some("2-cells are not natural".into())),
            };
        }
        let (na, nb) = (a.n_objects(), b.n_objects());
        // η(1_a) as a class of g∘f at (a, a), and its least representative.
        let unit_at = |ai: usize| {
            let k = unit.components[ai * na + ai][hom_index(a, ai, ai, a.id(ai))];
            self.gf.reps[ai * na + ai][k]
        };
        // ε on the class of (x, y) ∈ f(b', a) × g(a, b), as a morphism b' → b.
        let counit_on = |b1: usize, b2: usize, ai: usize, x: usize, y: usize| {
            let k = self.fg.class(b1, b2, ai, x, y);
            b.hom(b1, b2)[counit.components[b1 * nb + b2][k]]
        };

        let mut left = None;
        'left: for ai in 0..na {
            let (b0, y0, z0) = unit_at(ai);
            for bi in 0..nb {
                for x in 0..self.f.size(bi, ai) {
                    let m = counit_on(bi, b0, ai, x, y0);
                    let back = self.f.act(m, a.id(ai), z0);
                    if back != x {
                        left = Some(format!(
                            "f at ({}, {}): {} goes to {}",
                            b.object_name(bi),
                            a.object_name(ai),
                            self.f.label(bi, ai, x),
                            self.f.label(bi, ai, back)
                        ));
                        break 'left;
                    }
                }
            }
        }
        let mut right = None;
        'right: for ai in 0..na {
            let (b0, y0, z0) = unit_at(ai);
            for bi in 0..nb {
                for y in 0..self.g.size(ai, bi) {
                    let m = counit_on(b0, bi, ai, z0, y);
                    let back = self.g.act(a.id(ai), m, y0);
                    if back != y {
                        right = Some(format!(
                            "g at ({}, {}): {} goes to {}",
                            a.object_name(ai),
                            b.object_name(bi),
                            self.g.label(ai, bi, y),
                            self.g.label(ai, bi, back)
                        ));
                        break 'right;
                    }
                }
            }
        }
        AdjunctionCertificate {
            unit: unit.clone(),
            counit: counit.clone(),
            naturality: None,
            left_triangle: TriangleCheck::from(left),
            right_triangle: TriangleCheck::from(right),
        }
    }
}

fn triangles<'a>(f: &'a Module, g: &'a Module, limits: &Limits) -> Result<Triangles<'a>> {
    if g.source() != f.target() || g.target() != f.source() {
        return Err(Error::shape("adjunction needs f: A ⇸ B and g: B ⇸ A"));
    }
    Ok(Triangles {
        f,
        g,
        gf: compose_modules(g, f, limits)?,
        fg: compose_modules(f, g, limits)?,
    })
}

/// Checks `η: 1_A ⇒ g∘f` and `ε: f∘g ⇒ 1_B` for naturality and both triangle identities.
/// The 2-cells index the composites as [`compose_modules`] builds them.
pub fn check_adjunction(
    f: &Module,
    g: &Module,
    unit: &NatTrans,
    counit: &NatTrans,
    limits: &Limits,
) -> Result<AdjunctionCertificate> {
    let tr = triangles(f, g, limits)?;
    let hom_a = Module::hom(f.source());
    let hom_b = Module::hom(f.target());
    let fits = |t: &NatTrans, s: &SetFunctor, d: &SetFunctor| {
        t.components.len() == s.source().n_objects()
            && t.components
                .iter()
                .enumerate()
                .all(|(o, c)| c.len() == s.size(o) && c.iter().all(|&y| y < d.size(o)))
    };
    if !fits(unit, hom_a.carrier(), tr.gf.module.carrier()) || !fits(counit, tr.fg.module.carrier(), hom_b.carrier()) {
        return Err(Error::shape("unit or counit does not fit the composites"));
    }
    Ok(tr.certify(unit, counit))
}

/// Exhausts every pair of 2-cells `η: 1_A ⇒ g∘f`, `ε: f∘g ⇒ 1_B` and returns the first
/// one satisfying both triangle identities.
pub fn search_adjunction(f: &Module, g: &Module, limits: &Limits) -> Result<Option<AdjunctionCertificate>> {
    let tr = triangles(f, g, limits)?;
    let hom_a = Module::hom(f.source());
    let hom_b = Module::hom(f.target());
    let counits = nat_set(tr.fg.module.carrier(), hom_b.carrier(), limits)?;
    if counits.is_empty() {
        return Ok(None);
    }
    let mut found = None;
    let _ = NatSearch::new(hom_a.carrier(), tr.gf.module.carrier())?.for_each(limits, |unit| {
        for counit in &counits {
            let cert = tr.certify(unit, counit);
            if cert.holds() {
                found = Some(cert);
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(found)
}

/// The outcome of deciding whether `f: A ⇸ B` has a right adjoint.
#[derive(Debug, Clone)]
pub struct RightAdjointVerdict {
    pub adjoint: bool,
    /// `t = rlift(f, 1_B)`, computed in every case.
    pub lifting: Module,
    /// Present when `f` respects `t`.
    pub certificate: Option<AdjunctionCertificate>,
    /// The first component `(a', a)` where `t∘f → rlift(f, f)` fails to be a bijection.
    pub respect_failure: Option<String>,
    /// A colimit `Fc ∗ Y` that `nat(Fa, −)` does not preserve, found when `f` has no
    /// right adjoint.
    pub refutation: Option<(usize, usize, Preservation)>,
    /// `t(a, b)` agrees in size with `nat(Fa, Yb)` computed directly.
    pub formula_check: bool,
}

/// Decides adjointness by computing `t = rlift(f, 1_B)` with its counit and checking that
/// `f` respects it, i.e. that the pasted map `t∘f → rlift(f, f)` is invertible.
pub fn has_right_adjoint(f: &Module, limits: &Limits) -> Result<RightAdjointVerdict> {
    let (a, b) = (f.source().clone(), f.target().clone());
    let (na, nb) = (a.n_objects(), b.n_objects());
    let hom_b = Module::hom(&b);
    let t = rlift(f, &hom_b, limits)?;
    let ff = rlift(f, f, limits)?;
    let tf = compose_modules(&t.module, f, limits)?;

    // κ[(b, φ, x)] = (z ∈ f(c, a') ↦ x · φ_c(z)).
    let mut kappa_inv: Vec<Vec<usize>> = Vec::with_capacity(na * na);
    let mut respect_failure = None;
    'outer: for a1 in 0..na {
        for a2 in 0..na {
            let obj = a1 * na + a2;
            let mut inv = vec![usize::MAX; ff.module.size(a1, a2)];
            for (k, &(bi, p, x)) in tf.reps[obj].iter().enumerate() {
                let phi = &t.nats[a1 * nb + bi][p];
                let image = NatTrans::new(
                    (0..nb)
                        .map(|ci| {
                            (0..f.size(ci, a1))
                                .map(|z| f.act(b.hom(ci, bi)[phi.components[ci][z]], a.id(a2), x))
                                .collect()
                        })
                        .collect(),
                );
                let y = ff
                    .element(obj, &image)
                    .ok_or_else(|| Error::Internal("pasted lifting is not natural".into()))?;
                if inv[y] != usize::MAX {
                    respect_failure = Some(format!(
                        "at ({}, {}): two classes of t∘f map to the same transformation",
                        a.object_name(a1),
                        a.object_name(a2)
                    ));
                    break 'outer;
                }
                inv[y] = k;
            }
            if inv.contains(&usize::MAX) {
                respect_failure = Some(format!(
                    "at ({}, {}): t∘f has {} elements, rlift(f, f) has {}",
                    a.object_name(a1),
                    a.object_name(a2),
                    tf.module.size(a1, a2),
                    ff.module.size(a1, a2)
                ));
                break 'outer;
            }
            kappa_inv.push(inv);
        }
    }

    let op_b = Arc::new(crate::cat::opposite(&b));
    let mut formula_check = true;
    for ai in 0..na {
        let fa = f.column(ai);
        for bi in 0..nb {
            formula_check &= nat_set(&fa, &representable(&op_b, bi), limits)?.len() == t.module.size(ai, bi);
        }
    }

    if respect_failure.is_some() {
        let refutation = refute(f, limits)?;
        if refutation.is_none() {
            return Err(Error::Internal(
                "respect fails but every hom functor preserves every Yoneda colimit".into(),
            ));
        }
        return Ok(RightAdjointVerdict {
            adjoint: false,
            lifting: t.module,
            certificate: None,
            respect_failure,
            refutation,
            formula_check,
        });
    }

    // η(u) = κ⁻¹(f(1, u)).
    let mut unit = Vec::with_capacity(na * na);
    for a1 in 0..na {
        for a2 in 0..na {
            let obj = a1 * na + a2;
            let comp = a
                .hom(a1, a2)
                .iter()
                .map(|&u| {
                    let image = NatTrans::new(
                        (0..nb)
                            .map(|ci| (0..f.size(ci, a1)).map(|z| f.act(b.id(ci), u, z)).collect())
                            .collect(),
                    );
                    let y = ff.element(obj, &image).expect("f(1, u) is natural");
                    kappa_inv[obj][y]
                })
                .collect();
            unit.push(comp);
        }
    }
    // ε[(a, x, φ)] = φ_{b'}(x).
    let ft = compose_modules(f, &t.module, limits)?;
    let mut counit = Vec::with_capacity(nb * nb);
    for b1 in 0..nb {
        for b2 in 0..nb {
            let comp = ft.reps[b1 * nb + b2]
                .iter()
                .map(|&(ai, x, p)| t.nats[ai * nb + b2][p].components[b1][x])
                .collect();
            counit.push(comp);
        }
    }
    let cert = check_adjunction(f, &t.module, &NatTrans::new(unit), &NatTrans::new(counit), limits)?;
    if !cert.holds() {
        return Err(Error::Internal(format!(
            "respected lifting fails its triangle identities: {:?} {:?} {:?}",
            cert.naturality, cert.left_triangle.failure, cert.right_triangle.failure
        )));
    }
    Ok(RightAdjointVerdict {
        adjoint: true,
        lifting: t.module,
        certificate: Some(cert),
        respect_failure: None,
        refutation: None,
        formula_check,
    })
}

/// Looks for `a, c` such that `nat(Fa, −)` does not preserve `Fc ∗ Y`.
fn refute(f: &Module, limits: &Limits) -> Result<Option<(usize, usize, Preservation)>> {
    let y = yoneda(f.target()).diagram();
    let na = f.source().n_objects();
    for ai in 0..na {
        for ci in (ai..na).chain(0..ai) {
            let inst = weighted_colimit(&Weight::colimit(f.column(ci)), &y)?;
            let p = preserves_colimit(&Ambient::HomFrom(f.column(ai)), &inst, limits)?;
            if !p.preserved {
                return Ok(Some((ai, ci, p)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::Functor;
    use crate::fixtures;
    use crate::promod::{functor_modules, module_iso};

    #[test]
    fn functor_modules_are_adjoint() {
        let l = Limits::default();
        for (name, t) in fixtures::functors() {
            let (lo, up) = functor_modules(&t);
            let v = has_right_adjoint(&lo, &l).unwrap();
            assert!(v.adjoint, "{name}");
            assert!(v.formula_check, "{name}");
            assert!(module_iso(&v.lifting, &up, &l).unwrap().is_some(), "{name}");
        }
    }

    #[test]
    fn two_element_set_is_not_a_map() {
        let f = Module::from_presheaf(&SetFunctor::constant(Arc::new(fixtures::terminal()), 2)).unwrap();
        let v = has_right_adjoint(&f, &Limits::default()).unwrap();
        assert!(!v.adjoint);
        let (_, _, p) = v.refutation.unwrap();
        assert_eq!((p.source_sizes[0], p.target_sizes[0]), (2, 4));
    }

    #[test]
    fn identity_two_cells_for_hom() {
        let l = Limits::default();
        let idem = Arc::new(fixtures::idem());
        let h = Module::hom(&idem);
        let v = has_right_adjoint(&h, &l).unwrap();
        assert!(v.adjoint);
        assert!(search_adjunction(&h, &h, &l).unwrap().is_some());
    }

    #[test]
    fn upper_module_of_point_has_no_right_adjoint() {
        let l = Limits::default();
        let two = Arc::new(fixtures::arrow());
        let one = Arc::new(fixtures::terminal());
        let t = Functor::new(one, two.clone(), vec![0], vec![two.id(0)]).unwrap();
        let (lo, up) = functor_modules(&t);
        assert!(search_adjunction(&up, &lo, &l).unwrap().is_none());
        assert!(search_adjunction(&lo, &up, &l).unwrap().is_some());
    }
}
