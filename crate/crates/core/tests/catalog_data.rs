//! Checks of the shipped catalog file: shape, serialization stability,
//! witness verification, and spot checks of computed invariants against
//! the recorded expectations.

use jorn5_core::catalog::union_base_label;
use jorn5_core::{
    invariant_profile, load_catalog, parse_const_expr, AlgebraId, Catalog, CatalogError,
};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

fn data_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/catalog.json")
}

fn shipped() -> Catalog {
    load_catalog(&data_path()).expect("shipped catalog must load")
}

fn id(label: &str, params: &[&str]) -> AlgebraId {
    let params = params
        .iter()
        .map(|s| parse_const_expr(s, &BTreeMap::new()).unwrap())
        .collect();
    AlgebraId::with_params(label, params)
}

#[test]
fn shipped_catalog_has_expected_shape() {
    let cat = shipped();
    assert_eq!(cat.entries().len(), 84);

    let five_dim = cat.five_dim_labels();
    assert_eq!(five_dim.len(), 71);
    let eps = five_dim.iter().filter(|l| l.starts_with("eps_")).count();
    let jay = five_dim.iter().filter(|l| l.starts_with("J_")).count();
    assert_eq!(eps, 25);
    assert_eq!(jay, 46);

    let low_dim = cat.entries().iter().filter(|e| e.dim < 5).count();
    assert_eq!(low_dim, 13);

    for e in cat.entries() {
        if let Some(union) = &e.member_of {
            let base = union_base_label(union).expect("union name must parse");
            assert!(cat.entry(&base).is_ok(), "union base {base} missing");
        }
    }
}

#[test]
fn shipped_catalog_round_trips_byte_exact() {
    let text = std::fs::read_to_string(data_path()).unwrap();
    let cat = Catalog::from_json(&text).unwrap();
    let emitted = cat.to_json_string();
    if emitted != text {
        let out = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../target/catalog.normalized.json");
        std::fs::write(&out, &emitted).unwrap();
        panic!("catalog.json is not in emitter normal form; wrote {}", out.display());
    }
}

#[test]
fn domain_constraints_are_enforced() {
    let cat = shipped();

    let bad = cat.instantiate(&id("J_27", &["1", "1"]));
    assert!(matches!(bad, Err(CatalogError::ConstraintViolated { .. })));
    assert!(cat.instantiate(&id("J_27", &["2", "3"])).is_ok());

    let bad = cat.instantiate(&id("J_24", &["1"]));
    assert!(matches!(bad, Err(CatalogError::ExcludedValue { .. })));
    assert!(cat.instantiate_unchecked(&id("J_24", &["1"])).is_ok());

    let bad = cat.instantiate(&id("J_26", &["0"]));
    assert!(matches!(bad, Err(CatalogError::ExcludedValue { .. })));

    let wrong_arity = cat.instantiate(&id("J_24", &[]));
    assert!(matches!(wrong_arity, Err(CatalogError::ParamCount { .. })));
}

#[test]
fn all_witnesses_verify() {
    let cat = shipped();
    let pairs = cat.verify_all_witnesses().expect("every witness must check out");
    assert_eq!(pairs.len(), 6);

    let expect = [
        (id("J_24", &["1"]), id("eps_4", &[])),
        (id("J_29", &[]), id("J_24_0", &[])),
        (id("J_37", &[]), id("J_27_m1m1", &[])),
        (id("J_41", &["1"]), id("J_26_0", &[])),
        (id("J_41", &["4"]), id("J_27_rec", &["-1/9"])),
        (id("J_41", &["9"]), id("J_27_rec", &["-1/4"])),
    ];
    for pair in &expect {
        assert!(pairs.contains(pair), "missing verified pair {} ~ {}", pair.0, pair.1);
    }
}

#[test]
fn guarded_expectations_resolve_by_parameter() {
    let cat = shipped();

    assert_eq!(cat.expected_invariants(&id("J_23", &["0"])).unwrap().h2_dim, Some(9));
    assert_eq!(cat.expected_invariants(&id("J_23", &["2"])).unwrap().h2_dim, Some(8));

    let at0 = cat.expected_invariants(&id("J_41", &["0"])).unwrap();
    assert_eq!(at0.h2_dim, Some(8));
    assert_eq!(at0.jacobi_dim, Some(3));
    assert_eq!(cat.expected_invariants(&id("J_41", &["1"])).unwrap().h2_dim, Some(10));
    let generic = cat.expected_invariants(&id("J_41", &["4"])).unwrap();
    assert_eq!(generic.h2_dim, Some(7));
    assert_eq!(generic.jacobi_dim, None);

    assert_eq!(cat.expected_invariants(&id("J_27", &["2", "3"])).unwrap().h2_dim, Some(7));
}

#[test]
fn spot_profiles_match_recorded_expectations() {
    let cat = shipped();
    for label in ["eps_13", "J_21", "J_28", "J_41"] {
        for inst in cat.default_ids(label).unwrap() {
            let t = cat.instantiate_unchecked(&inst).unwrap();
            let profile = invariant_profile(&t).unwrap();
            let expected = cat.expected_invariants(&inst).unwrap();
            let bad = expected.mismatches(&profile);
            assert!(bad.is_empty(), "{inst}: {bad:?}");
        }
    }
}
