//! Worked examples checked against brute-force oracles from `common`, and against
//! closed-form counts where the shapes are discrete.

mod common;

use std::sync::Arc;

use kanweigh::cat::{find_isomorphism, opposite, product, projections, FinCat};
use kanweigh::cauchy::{
    cauchy_completion, is_small_projective, isbell_adjunction_check, isbell_transform, isbell_unit, retract_search,
    IsbellInput,
};
use kanweigh::closure::{atom_check, closure_iterate, lan_extend, saturation_member, WeightClass};
use kanweigh::fixtures;
use kanweigh::promod::{compose_modules, functor_modules, has_right_adjoint, rext, rlift, search_adjunction, Module};
use kanweigh::setfun::{
    coend, conical_colimit, conical_limit, end, nat_set, representable, yoneda, Diagram, NatTrans, SetFunctor,
};
use kanweigh::weighted::{
    commutation_search, commutes_at, is_flat_finlim, preserves_colimit, weighted_colimit, weighted_limit, Ambient,
    Variance, Weight,
};
use kanweigh::Limits;

use common::*;

fn arc(c: FinCat) -> Arc<FinCat> {
    Arc::new(c)
}

fn lim() -> Limits {
    Limits::default()
}

/// A plain finite set, as a functor on `I`.
fn set(n: usize) -> SetFunctor {
    SetFunctor::constant(arc(fixtures::terminal()), n)
}

/// A module `I ⇸ I`, which is just a set.
fn set_module(n: usize) -> Module {
    let one = arc(fixtures::terminal());
    let carrier = SetFunctor::constant(arc(product(&opposite(&one), &one)), n);
    Module::new(one.clone(), one, carrier).unwrap()
}

/// Identity at `f`, swap at `g`, on `{0,1}` at both ends of a parallel pair.
fn id_vs_swap(shape: Arc<FinCat>) -> SetFunctor {
    SetFunctor::from_sizes(shape, &[2, 2], vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap()
}

#[test]
fn involution_table_is_lawful() {
    // Declaring e∘e = id gives the group of order two, which is associative.
    let z2 = fixtures::z2();
    assert!(associative(&z2));
    assert!(z2.law_violations().is_empty());
}

#[test]
fn fixture_tables_are_associative() {
    for (name, c) in fixtures::categories() {
        assert!(associative(&c), "{name}");
    }
}

#[test]
fn idem_is_self_dual() {
    let idem = arc(fixtures::idem());
    let op = arc(opposite(&idem));
    // A one-object commutative monoid: the table is literally its own transpose.
    for g in 0..idem.n_morphisms() {
        for f in 0..idem.n_morphisms() {
            assert_eq!(idem.compose(g, f), idem.compose(f, g));
        }
    }
    let iso = find_isomorphism(&op, &idem, &lim()).unwrap().expect("isomorphic");
    assert!(iso.violations().is_empty());
    assert_eq!(iso.on_morphisms(), &[0, 1]);
}

#[test]
fn projections_are_functors() {
    let (two, idem) = (arc(fixtures::arrow()), arc(fixtures::idem()));
    let prod = arc(product(&two, &idem));
    assert!(associative(&prod));
    let (p, q) = projections(&two, &idem, &prod);
    assert!(p.violations().is_empty());
    assert!(q.violations().is_empty());
}

#[test]
fn equalizer_of_identity_and_swap_is_empty() {
    let d = id_vs_swap(arc(fixtures::parallel_pair()));
    assert_eq!(limit_size(&d), 0);
    assert_eq!(conical_limit(&Diagram::of_sets(&d), &lim()).unwrap().object.size(0), 0);
}

#[test]
fn coequalizer_of_identity_and_swap_is_a_point() {
    let d = id_vs_swap(arc(fixtures::parallel_pair()));
    assert_eq!(colimit_size(&d), 1);
    assert_eq!(conical_colimit(&Diagram::of_sets(&d)).object.size(0), 1);
}

#[test]
fn conical_limits_and_colimits_match_oracles() {
    let mut n = 0;
    for (name, c) in fixtures::categories() {
        let c = arc(c);
        for d in functors_bounded(&c, 2) {
            let diag = Diagram::of_sets(&d);
            assert_eq!(
                conical_limit(&diag, &lim()).unwrap().object.size(0),
                limit_size(&d),
                "{name} {:?}",
                d.sizes()
            );
            assert_eq!(
                conical_colimit(&diag).object.size(0),
                colimit_size(&d),
                "{name} {:?}",
                d.sizes()
            );
            n += 1;
        }
    }
    assert!(n > 100);
}

#[test]
fn nat_sets_match_brute_force() {
    for (name, c) in [("parallel-pair", fixtures::parallel_pair()), ("Idem", fixtures::idem())] {
        let c = arc(c);
        let fs = functors_bounded(&c, 2);
        for f in &fs {
            for g in &fs {
                let fast: Vec<Vec<Vec<usize>>> = nat_set(f, g, &lim())
                    .unwrap()
                    .into_iter()
                    .map(|t| t.components)
                    .collect();
                let mut slow = nats(f, g);
                let mut fast_sorted = fast.clone();
                fast_sorted.sort();
                slow.sort();
                assert_eq!(fast_sorted, slow, "{name} {:?} → {:?}", f.sizes(), g.sizes());
            }
        }
    }
    // The representable at `a` on the parallel pair.
    let par = arc(fixtures::parallel_pair());
    let ya = kanweigh::setfun::corepresentable(&par, 0);
    assert_eq!(nat_set(&ya, &ya, &lim()).unwrap().len(), nat_count(&ya, &ya));
}

#[test]
fn end_and_coend_of_hom_on_arrow() {
    let two = arc(fixtures::arrow());
    let hom = Module::hom(&two);
    let h = hom.carrier();
    assert_eq!(end_size(&two, h), 1);
    assert_eq!(end(&two, h, &lim()).unwrap().set.size(0), 1);
    assert_eq!(twisted_coend_size(&two, h), 2);
    assert_eq!(coend(&two, h).unwrap().set.size(0), 2);
}

#[test]
fn ends_and_coends_match_oracles() {
    for (name, k) in [
        ("2", fixtures::arrow()),
        ("Idem", fixtures::idem()),
        ("Z2", fixtures::z2()),
    ] {
        let k = arc(k);
        let tw = arc(product(&opposite(&k), &k));
        for h in functors_bounded(&tw, 2) {
            assert_eq!(
                end(&k, &h, &lim()).unwrap().set.size(0),
                end_size(&k, &h),
                "{name} {:?}",
                h.sizes()
            );
            assert_eq!(
                coend(&k, &h).unwrap().set.size(0),
                twisted_coend_size(&k, &h),
                "{name} {:?}",
                h.sizes()
            );
        }
    }
}

#[test]
fn constant_singleton_coend_over_connected_is_a_point() {
    for k in [
        fixtures::arrow(),
        fixtures::parallel_pair(),
        fixtures::cospan(),
        fixtures::idem(),
    ] {
        let k = arc(k);
        let h = SetFunctor::terminal(arc(product(&opposite(&k), &k)));
        assert_eq!(coend(&k, &h).unwrap().set.size(0), 1);
    }
}

#[test]
fn yoneda_is_fully_faithful_on_idem() {
    let idem = arc(fixtures::idem());
    let op = arc(opposite(&idem));
    let y = representable(&op, 0);
    assert_eq!(nat_count(&y, &y), idem.hom(0, 0).len());
    assert!(yoneda(&idem).fully_faithful(&lim()).unwrap().is_ok());
}

#[test]
fn weighted_conical_agrees_with_plain_on_identity_vs_swap() {
    let par = arc(fixtures::parallel_pair());
    let psi = Weight::conical(par.clone(), Variance::Limit);
    let t = Diagram::of_sets(&id_vs_swap(par.clone()));
    assert_eq!(weighted_limit(&psi, &t, &lim()).unwrap().object().size(0), 0);

    let phi = Weight::conical(par.clone(), Variance::Colimit);
    let s = id_vs_swap(arc(opposite(&par)));
    assert_eq!(colimit_size(&s), 1);
    assert_eq!(
        weighted_colimit(&phi, &Diagram::of_sets(&s)).unwrap().object().size(0),
        1
    );
}

#[test]
fn hom_from_two_misses_the_binary_coproduct() {
    let disc = arc(fixtures::discrete_pair());
    let phi = Weight::conical(disc.clone(), Variance::Colimit);
    let s = SetFunctor::terminal(arc(opposite(&disc)));
    let inst = weighted_colimit(&phi, &Diagram::of_sets(&s)).unwrap();
    let p = preserves_colimit(&Ambient::HomFrom(set(2)), &inst, &lim()).unwrap();
    assert!(!p.preserved);
    // hom(2,1) ⊔ hom(2,1) against hom(2, 1 ⊔ 1).
    assert_eq!(p.source_sizes, vec![nat_count(&set(2), &set(1)) * 2]);
    assert_eq!(p.target_sizes, vec![nat_count(&set(2), &set(2))]);
    assert_eq!((p.source_sizes[0], p.target_sizes[0]), (2, 4));
}

/// Over discrete `K` and `L` the comparison is `Σ_k Π_l S(k,l) → Π_l Σ_k S(k,l)`.
#[test]
fn discrete_comparison_matches_sum_of_products() {
    let disc = arc(fixtures::discrete_pair());
    let phi = Weight::conical(disc.clone(), Variance::Colimit);
    let psi = Weight::conical(disc.clone(), Variance::Limit);
    let prod = arc(product(&opposite(&disc), &disc));
    for s in functors_bounded(&prod, 2) {
        let sz = |k: usize, l: usize| s.size(k * 2 + l);
        let col_lim: usize = (0..2).map(|k| (0..2).map(|l| sz(k, l)).product::<usize>()).sum();
        let lim_col: usize = (0..2).map(|l| (0..2).map(|k| sz(k, l)).sum::<usize>()).product();
        let v = commutes_at(&phi, &psi, &s, &lim()).unwrap();
        assert_eq!(
            (v.colimit_of_limits, v.limit_of_colimits),
            (col_lim, lim_col),
            "{:?}",
            s.sizes()
        );
        assert_eq!(
            v.invertible,
            col_lim == lim_col && v.map.len() == col_lim,
            "{:?}",
            s.sizes()
        );
    }
}

#[test]
fn constant_singletons_give_two_against_four() {
    let disc = arc(fixtures::discrete_pair());
    let phi = Weight::conical(disc.clone(), Variance::Colimit);
    let psi = Weight::conical(disc.clone(), Variance::Limit);
    let s = SetFunctor::terminal(arc(product(&opposite(&disc), &disc)));
    let v = commutes_at(&phi, &psi, &s, &lim()).unwrap();
    assert_eq!((v.colimit_of_limits, v.limit_of_colimits), (1 + 1, 2 * 2));
    assert!(!v.invertible);
}

#[test]
fn first_counterexample_at_bound_one() {
    let disc = arc(fixtures::discrete_pair());
    let phi = Weight::conical(disc.clone(), Variance::Colimit);
    let psi = Weight::conical(disc.clone(), Variance::Limit);
    let out = commutation_search(&phi, &psi, 1, &lim()).unwrap();
    let (s, v) = out.counterexample.expect("counterexample");
    // S(a,b) = S(b,a) = 1, zero on the diagonal: Σ_k Π_l = 0 + 0, Π_l Σ_k = 1 × 1.
    assert_eq!(s.sizes(), vec![0, 1, 1, 0]);
    assert_eq!((v.colimit_of_limits, v.limit_of_colimits), (0, 1));
}

#[test]
fn terminal_object_makes_colimit_evaluation() {
    let two = arc(fixtures::arrow());
    let disc = arc(fixtures::discrete_pair());
    let phi = Weight::conical(two.clone(), Variance::Colimit);
    let psi = Weight::conical(disc.clone(), Variance::Limit);
    let prod = arc(product(&opposite(&two), &disc));
    let mut n = 0;
    for s in functors_bounded(&prod, 2) {
        let v = commutes_at(&phi, &psi, &s, &lim()).unwrap();
        // `a` is terminal in op(2); both sides are S(a,a) × S(a,b).
        let expected = s.size(0) * s.size(1);
        assert!(v.invertible, "{:?}", s.sizes());
        assert_eq!(v.colimit_of_limits, expected);
        n += 1;
    }
    assert!(n > 20);
}

#[test]
fn filtered_colimits_commute_with_pullbacks_at_bound_two() {
    let phi = Weight::conical(arc(fixtures::arrow()), Variance::Colimit);
    let psi = Weight::conical(arc(fixtures::cospan()), Variance::Limit);
    let out = commutation_search(&phi, &psi, 2, &lim()).unwrap();
    assert!(out.counterexample.is_none());
    assert!(out.checked > 100);
}

#[test]
fn flatness_of_sets_over_the_point() {
    // el of an n-element set is discrete on n objects, filtered iff n = 1.
    for n in 0..4 {
        let v = is_flat_finlim(&Weight::colimit(set(n))).unwrap();
        assert_eq!(v.flat, n == 1, "{n}");
    }
    let two = arc(fixtures::arrow());
    assert!(is_flat_finlim(&Weight::conical(two, Variance::Colimit)).unwrap().flat);
}

#[test]
fn modules_over_the_point_are_sets() {
    for (g, f) in [(2, 3), (0, 2), (1, 1)] {
        let c = compose_modules(&set_module(g), &set_module(f), &lim()).unwrap();
        assert_eq!(c.module.carrier().size(0), g * f);
        let lift = rlift(&set_module(f), &set_module(g), &lim()).unwrap();
        assert_eq!(lift.module.carrier().size(0), nat_count(&set(f), &set(g)));
        let ext = rext(&set_module(f), &set_module(g), &lim()).unwrap();
        assert_eq!(ext.module.carrier().size(0), nat_count(&set(f), &set(g)));
    }
    assert_eq!(
        rlift(&set_module(2), &set_module(3), &lim())
            .unwrap()
            .module
            .carrier()
            .size(0),
        9
    );
}

#[test]
fn composition_matches_coend_oracle_on_idem() {
    let idem = arc(fixtures::idem());
    let tw = arc(product(&opposite(&idem), &idem));
    let ms: Vec<Module> = functors_bounded(&tw, 2)
        .into_iter()
        .map(|c| Module::new(idem.clone(), idem.clone(), c).unwrap())
        .collect();
    for g in &ms {
        for f in &ms {
            let gf = compose_modules(g, f, &lim()).unwrap();
            assert_eq!(gf.module.size(0, 0), coend_size(&g.row(0), &f.column(0)));
        }
    }
}

#[test]
fn lower_module_of_a_point_in_idem() {
    let (name, t) = fixtures::functors().into_iter().find(|(n, _)| *n == "I→Idem").unwrap();
    let (lower, _) = functor_modules(&t);
    assert_eq!(lower.carrier().sizes(), vec![t.target().hom(0, 0).len()], "{name}");
    assert_eq!(lower.carrier().size(0), 2);
}

#[test]
fn sets_have_right_adjoints_only_when_singletons() {
    // nat(n, −) preserves the empty and binary coproducts only for n = 1.
    for n in 0..4 {
        let v = has_right_adjoint(&set_module(n), &lim()).unwrap();
        assert_eq!(v.adjoint, n == 1, "{n}");
    }
}

#[test]
fn lower_is_left_adjoint_to_upper() {
    let (_, t) = fixtures::functors().into_iter().find(|(n, _)| *n == "I→2@a").unwrap();
    let (lower, upper) = functor_modules(&t);
    assert!(search_adjunction(&lower, &upper, &lim()).unwrap().is_some());
    assert!(search_adjunction(&upper, &lower, &lim()).unwrap().is_none());
}

#[test]
fn small_projectives_against_retract_oracle() {
    // A two-element set is not a retract of the point.
    assert!(!is_small_projective(&set(2), &lim()).unwrap().projective);

    let idem = arc(fixtures::idem());
    let op = arc(opposite(&idem));
    let y = representable(&op, 0);
    for phi in functors_bounded(&op, 2) {
        let by_brute = nats(&phi, &y).iter().any(|s| {
            nats(&y, &phi)
                .iter()
                .any(|r| (0..phi.size(0)).all(|x| r[0][s[0][x]] == x))
        });
        let found = retract_search(&phi, &lim()).unwrap();
        assert_eq!(found.is_some(), by_brute, "{:?}", phi.maps());
        if let Some(w) = found {
            assert!(w.verify(&phi));
        }
    }
    let split = SetFunctor::from_sizes(op, &[1], vec![vec![0], vec![0]]).unwrap();
    assert!(is_small_projective(&split, &lim()).unwrap().projective);
}

#[test]
fn cauchy_completion_of_idem() {
    let idem = arc(fixtures::idem());
    let q = cauchy_completion(&idem, &lim()).unwrap();
    let n = idempotent_count(&idem);
    assert_eq!(q.category.n_objects(), n);
    // hom(p, q) = {f : q∘f∘p = f}, read off the table.
    let idems: Vec<usize> = (0..idem.n_morphisms()).filter(|&f| idem.comp(f, f) == f).collect();
    for (i, &p) in idems.iter().enumerate() {
        for (j, &r) in idems.iter().enumerate() {
            let expected = (0..idem.n_morphisms())
                .filter(|&f| idem.comp(r, idem.comp(f, p)) == f)
                .count();
            let (pi, qi) = (
                q.idempotents.iter().position(|&e| e == p).unwrap(),
                q.idempotents.iter().position(|&e| e == r).unwrap(),
            );
            assert_eq!(q.category.hom(pi, qi).len(), expected, "{i} {j}");
        }
    }
    let sizes: Vec<usize> = (0..2)
        .flat_map(|a| (0..2).map(move |b| (a, b)))
        .map(|(a, b)| q.category.hom(a, b).len())
        .collect();
    assert_eq!(sizes, vec![2, 1, 1, 1]);
}

#[test]
fn arrow_is_already_complete() {
    let two = arc(fixtures::arrow());
    assert_eq!(idempotent_count(&two), two.n_objects());
    let q = cauchy_completion(&two, &lim()).unwrap();
    assert_eq!(q.category.n_objects(), 2);
}

#[test]
fn isbell_over_the_point() {
    let one = arc(fixtures::terminal());
    let o = isbell_transform(&one, &IsbellInput::Presheaf(set(2)), &lim()).unwrap();
    assert_eq!(o.value.size(0), nat_count(&set(2), &set(1)));
    assert_eq!(o.value.size(0), 1);
    let check = isbell_adjunction_check(&one, &[set(2)], &[set(3)], &lim()).unwrap();
    let pair = &check.pairs[0];
    assert_eq!((pair.left, pair.right), (1, 1));
    assert!(pair.bijective && check.holds);
}

#[test]
fn isbell_unit_on_split_singleton() {
    let idem = arc(fixtures::idem());
    let op = arc(opposite(&idem));
    let split = SetFunctor::from_sizes(op, &[1], vec![vec![0], vec![0]]).unwrap();
    assert!(isbell_unit(&idem, &split, &lim()).unwrap().invertible);
}

fn coproducts() -> WeightClass {
    let disc = arc(fixtures::discrete_pair());
    WeightClass::new(vec![Weight::conical(disc, Variance::Colimit)]).unwrap()
}

#[test]
fn coproduct_closure_over_the_point() {
    let one = arc(fixtures::terminal());
    let c = closure_iterate(&coproducts(), &one, 2, &lim()).unwrap();
    let mut sizes: Vec<usize> = c.elements.iter().map(|e| e.presheaf.size(0)).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, coproduct_sizes(2));
    assert_eq!(sizes, vec![1, 2, 3, 4]);
}

#[test]
fn membership_in_coproduct_closure() {
    let one = arc(fixtures::terminal());
    let m = saturation_member(&set(2), &coproducts(), &one, 2, &lim()).unwrap();
    assert_eq!(m.stage(), Some(1));
    // Coproducts of nonempty sets are nonempty.
    for depth in 0..4 {
        let m = saturation_member(&set(0), &coproducts(), &one, depth, &lim()).unwrap();
        assert!(m.stage().is_none());
        assert!(!coproduct_sizes(depth).contains(&0));
    }
}

#[test]
fn left_extension_from_the_point() {
    let g = Diagram::of_sets(&set(3));
    let out = lan_extend(&g, &set(2)).unwrap();
    assert_eq!(out.object().size(0), 2 * 3);
}

#[test]
fn two_element_set_is_not_an_atom() {
    let disc = arc(fixtures::discrete_pair());
    let phi = Weight::conical(disc.clone(), Variance::Colimit);
    let inst = weighted_colimit(&phi, &Diagram::of_sets(&SetFunctor::terminal(arc(opposite(&disc))))).unwrap();
    assert!(!atom_check(&set(2), std::slice::from_ref(&inst), &lim()).unwrap().atom);
    assert!(atom_check(&set(1), &[inst], &lim()).unwrap().atom);
}

#[test]
fn identity_transformations_are_natural() {
    for (_, c) in fixtures::categories() {
        let c = arc(c);
        for f in functors_bounded(&c, 1) {
            assert!(NatTrans::identity(&f).is_natural(&f, &f));
        }
    }
}
