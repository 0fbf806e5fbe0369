use mckay3d::check::run_checks;
use mckay3d::derived::derived_table;
use mckay3d::fixture::GoldenFixture;
use mckay3d::io;
use mckay3d::{Analysis, GroupSpec};
use proptest::prelude::*;

fn cyclic() -> impl Strategy<Value = GroupSpec> {
    (2u32..20, 0i64..20, 0i64..20).prop_filter_map("faithful SL(3) weights", |(r, a, b)| {
        let (a, b) = (a % r as i64, b % r as i64);
        let c = (2 * r as i64 - a - b) % r as i64;
        let spec = GroupSpec::cyclic(r, a, b, c).ok()?;
        mckay3d::GroupData::new(&spec).ok().filter(|g| g.order() == r as usize).map(|_| spec)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_invariant_group_passes(spec in cyclic()) {
        let a = Analysis::new(&spec, 0).unwrap();
        let report = run_checks(&a);
        for g in &report.groups {
            prop_assert_eq!(g.failed, 0, "{}: {} {:?}", spec, g.name, &g.failures);
        }
    }

    #[test]
    fn spec_strings_round_trip(spec in cyclic()) {
        let again: GroupSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(again, spec);
    }

    #[test]
    fn seed_offsets_give_the_same_triangulation(spec in cyclic(), seed in 1usize..50) {
        let a = Analysis::new(&spec, 0).unwrap();
        let b = Analysis::new(&spec, seed).unwrap();
        let ta = io::to_json_string(&io::triangulation_json(&a.model).unwrap());
        let tb = io::to_json_string(&io::triangulation_json(&b.model).unwrap());
        prop_assert_eq!(ta, tb);
    }
}

#[test]
fn fixture_files_agree_with_the_computation() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for name in ["g15.json", "g3.json"] {
        let f = GoldenFixture::load(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap();
        let a = Analysis::new(&f.group.parse().unwrap(), 0).unwrap();
        let table = derived_table(&a.model, &a.roles).unwrap();
        assert_eq!(f.compare(&a, &table), vec![], "{name}");
        assert_eq!(f.self_consistency(&a.model), vec![], "{name}");
    }
}

#[test]
fn non_cyclic_group_of_order_four() {
    let a = Analysis::new(&"gens=1/2:1,1,0;1/2:1,0,1".parse().unwrap(), 0).unwrap();
    assert_eq!(a.model.group.order(), 4);
    assert!(run_checks(&a).passed());
    let table = derived_table(&a.model, &a.roles).unwrap();
    let nontrivial = table.iter().filter(|r| r.chi != a.model.group.trivial());
    assert!(nontrivial.clone().all(|r| r.descriptors.len() == 1));
    assert_eq!(nontrivial.count(), 3);
}
