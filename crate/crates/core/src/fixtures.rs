//! Small named categories and functors used throughout the test suites.

use std::sync::Arc;

use crate::cat::{FinCat, Functor};

fn build(
    objects: &[&str],
    morphisms: &[(&str, &str, &str)],
    identities: &[(&str, &str)],
    compose: &[(&str, &str, &str)],
) -> FinCat {
    FinCat::from_names(objects, morphisms, identities, compose).expect("fixture is lawful")
}

/// The category with no objects.
pub fn empty() -> FinCat {
    build(&[], &[], &[], &[])
}

/// `I`: one object, one identity.
pub fn terminal() -> FinCat {
    build(&["*"], &[("id", "*", "*")], &[("*", "id")], &[])
}

/// `2`: objects `a`, `b` and one arrow `u: a → b`.
pub fn arrow() -> FinCat {
    build(
        &["a", "b"],
        &[("id_a", "a", "a"), ("id_b", "b", "b"), ("u", "a", "b")],
        &[("a", "id_a"), ("b", "id_b")],
        &[],
    )
}

/// The walking idempotent: one object `x`, `e∘e = e`.
pub fn idem() -> FinCat {
    build(
        &["x"],
        &[("id", "x", "x"), ("e", "x", "x")],
        &[("x", "id")],
        &[("e", "e", "e")],
    )
}

pub fn discrete_pair() -> FinCat {
    build(
        &["a", "b"],
        &[("id_a", "a", "a"), ("id_b", "b", "b")],
        &[("a", "id_a"), ("b", "id_b")],
        &[],
    )
}

/// Two parallel arrows `f, g: a → b`.
pub fn parallel_pair() -> FinCat {
    build(
        &["a", "b"],
        &[("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b"), ("g", "a", "b")],
        &[("a", "id_a"), ("b", "id_b")],
        &[],
    )
}

/// The pullback shape `a → c ← b`.
pub fn cospan() -> FinCat {
    build(
        &["a", "b", "c"],
        &[
            ("id_a", "a", "a"),
            ("id_b", "b", "b"),
            ("id_c", "c", "c"),
            ("p", "a", "c"),
            ("q", "b", "c"),
        ],
        &[("a", "id_a"), ("b", "id_b"), ("c", "id_c")],
        &[],
    )
}

/// The pushout shape `a ← c → b`.
pub fn span() -> FinCat {
    build(
        &["a", "b", "c"],
        &[
            ("id_a", "a", "a"),
            ("id_b", "b", "b"),
            ("id_c", "c", "c"),
            ("p", "c", "a"),
            ("q", "c", "b"),
        ],
        &[("a", "id_a"), ("b", "id_b"), ("c", "id_c")],
        &[],
    )
}

/// The cyclic group of order two, `s∘s = id`.
pub fn z2() -> FinCat {
    build(
        &["x"],
        &[("id", "x", "x"), ("s", "x", "x")],
        &[("x", "id")],
        &[("s", "s", "id")],
    )
}

/// Two uniquely isomorphic objects.
pub fn chaotic_pair() -> FinCat {
    build(
        &["a", "b"],
        &[("id_a", "a", "a"), ("id_b", "b", "b"), ("i", "a", "b"), ("j", "b", "a")],
        &[("a", "id_a"), ("b", "id_b")],
        &[("j", "i", "id_a"), ("i", "j", "id_b")],
    )
}

/// The chain `a → b → c` with its composite.
pub fn chain3() -> FinCat {
    build(
        &["a", "b", "c"],
        &[
            ("id_a", "a", "a"),
            ("id_b", "b", "b"),
            ("id_c", "c", "c"),
            ("u", "a", "b"),
            ("v", "b", "c"),
            ("vu", "a", "c"),
        ],
        &[("a", "id_a"), ("b", "id_b"), ("c", "id_c")],
        &[("v", "u", "vu")],
    )
}

/// The fixture categories used by property and acceptance suites.
pub fn categories() -> Vec<(&'static str, FinCat)> {
    vec![
        ("I", terminal()),
        ("2", arrow()),
        ("Idem", idem()),
        ("discrete-pair", discrete_pair()),
        ("parallel-pair", parallel_pair()),
        ("cospan", cospan()),
        ("Z2", z2()),
        ("chaotic-pair", chaotic_pair()),
    ]
}

fn functor(src: &Arc<FinCat>, tgt: &Arc<FinCat>, objects: &[(&str, &str)], morphisms: &[(&str, &str)]) -> Functor {
    let mut on_o = vec![usize::MAX; src.n_objects()];
    for (a, b) in objects {
        on_o[src.object(a).unwrap()] = tgt.object(b).unwrap();
    }
    let mut on_m = vec![usize::MAX; src.n_morphisms()];
    for o in 0..src.n_objects() {
        on_m[src.id(o)] = tgt.id(on_o[o]);
    }
    for (f, g) in morphisms {
        on_m[src.morphism(f).unwrap()] = tgt.morphism(g).unwrap();
    }
    Functor::new(src.clone(), tgt.clone(), on_o, on_m).expect("fixture functor is lawful")
}

/// Functors between fixture categories, including identities.
pub fn functors() -> Vec<(&'static str, Functor)> {
    let one = Arc::new(terminal());
    let two = Arc::new(arrow());
    let idm = Arc::new(idem());
    let disc = Arc::new(discrete_pair());
    let par = Arc::new(parallel_pair());
    let cos = Arc::new(cospan());
    let zz = Arc::new(z2());
    let cha = Arc::new(chaotic_pair());
    vec![
        ("id_I", Functor::identity(&one)),
        ("id_2", Functor::identity(&two)),
        ("id_Idem", Functor::identity(&idm)),
        ("id_parallel", Functor::identity(&par)),
        ("I→2@a", functor(&one, &two, &[("*", "a")], &[])),
        ("I→2@b", functor(&one, &two, &[("*", "b")], &[])),
        ("2→I", functor(&two, &one, &[("a", "*"), ("b", "*")], &[("u", "id")])),
        ("I→Idem", functor(&one, &idm, &[("*", "x")], &[])),
        ("Idem→I", functor(&idm, &one, &[("x", "*")], &[("e", "id")])),
        ("2→Idem", functor(&two, &idm, &[("a", "x"), ("b", "x")], &[("u", "e")])),
        ("discrete→2", functor(&disc, &two, &[("a", "a"), ("b", "b")], &[])),
        (
            "parallel→2",
            functor(&par, &two, &[("a", "a"), ("b", "b")], &[("f", "u"), ("g", "u")]),
        ),
        (
            "cospan→2",
            functor(
                &cos,
                &two,
                &[("a", "a"), ("b", "a"), ("c", "b")],
                &[("p", "u"), ("q", "u")],
            ),
        ),
        ("Z2→I", functor(&zz, &one, &[("x", "*")], &[("s", "id")])),
        ("I→chaotic", functor(&one, &cha, &[("*", "a")], &[])),
    ]
}
