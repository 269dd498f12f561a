use cobar_engine::hopf_comod::{check_comodule_axioms, check_hopf_axioms, primitives_in_degree};
use cobar_engine::presets::{check_loaded, BuildOpts, Library, PresetError};

#[test]
fn hopf_presets_pass_through_60() {
    let lib = Library::builtin();
    for name in ["a-star", "bp"] {
        let h = lib.hopf(name, &BuildOpts::p(5).cap(60)).unwrap();
        let r = check_hopf_axioms(&h.hopf).unwrap();
        assert!(r.passed(), "{name}: {:?}", &r.failures[..r.failures.len().min(3)]);
        assert!(r.checked > 10);
    }
}

#[test]
fn comodule_presets_pass() {
    let lib = Library::builtin();
    for (name, cols) in [("hk", 2), ("v1-hk", 2), ("v1-hk-display", 2), ("bpv1-thh", 3), ("lemma34", 0)] {
        let c = lib.comodule(name, &BuildOpts::p(5).columns(cols)).unwrap();
        let r = check_comodule_axioms(&c.comod).unwrap();
        assert!(r.passed(), "{name}: {:?}", &r.failures[..r.failures.len().min(3)]);
    }
}

#[test]
fn literal_tt2_sign_fails() {
    let lib = Library::builtin();
    let c = lib.comodule("hk", &BuildOpts::p(5).flag("tt2-literal")).unwrap();
    let r = check_comodule_axioms(&c.comod).unwrap();
    assert!(r.failures.iter().any(|f| f.monomial == "tt2"), "{:?}", r.failures);
}

#[test]
fn step5_t2_form_breaks_comodule() {
    let lib = Library::builtin();
    let h = lib.hopf("bp", &BuildOpts::p(5).flag("t2-step5")).unwrap();
    assert!(check_hopf_axioms(&h.hopf).unwrap().passed());
    let c = lib.comodule("bpv1-thh", &BuildOpts::p(5).flag("t2-step5")).unwrap();
    let r = check_comodule_axioms(&c.comod).unwrap();
    assert!(r.failures.iter().any(|f| f.monomial == "t2"));
}

#[test]
fn lemma34_primitives() {
    let lib = Library::builtin();
    let c = lib.comodule("lemma34", &BuildOpts::p(5).flag("hbp-only")).unwrap();
    let prim = primitives_in_degree(&c.comod, 8).unwrap();
    assert_eq!(prim.len(), 1);
    // ξ̄_1 − ξ̂_1 up to a unit
    let f = c.alg().field();
    let u = f.inv(prim[0][0].1).unwrap();
    let names: Vec<_> = prim[0].iter().map(|(m, v)| (c.alg().fmt_monomial(m), f.mul(*v, u))).collect();
    assert_eq!(names, vec![("xb[1]".to_string(), 1), ("xh[1]".to_string(), 4)]);
    let full = lib.comodule("lemma34", &BuildOpts::p(5)).unwrap();
    assert_eq!(primitives_in_degree(&full.comod, 8).unwrap().len(), 3);
}

#[test]
fn may_algebra_loads() {
    let lib = Library::builtin();
    let l = lib.load("may", &BuildOpts::p(5)).unwrap();
    assert!(check_loaded(&l).unwrap().passed());
}

#[test]
fn errors_are_located() {
    let mut lib = Library::builtin();
    lib.add_source("bad", "name bad\nkind hopf\ngen x 2 poly\ndelta x = x|1 + 1|y\n").unwrap();
    match lib.hopf("bad", &BuildOpts::p(5)) {
        Err(PresetError::Parse { line, col, .. }) => assert_eq!((line, col), (4, 19)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(lib.comodule("v1-hk", &BuildOpts::p(3)), Err(PresetError::PrimeTooSmall { .. })));
    assert!(matches!(lib.hopf("bp", &BuildOpts::p(5).cap(300)), Err(PresetError::CapTooLarge { .. })));
    lib.add_source("empty", "name empty\nkind hopf\n").unwrap();
    let h = lib.hopf("empty", &BuildOpts::p(5)).unwrap();
    assert!(check_hopf_axioms(&h.hopf).unwrap().passed());
}
