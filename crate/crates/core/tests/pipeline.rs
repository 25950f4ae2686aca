use mposr_core::autgroup::are_isomorphic;
use mposr_core::catalog::{self, ClaimStatus, SuiteBudget, Tier, WitnessOrigin};
use mposr_core::io::{export, parse_edgelist, ExportFormat};
use mposr_core::schreier::StabilizerChain;
use mposr_core::search::{exists_mposr_with, Kind, Reduction, SearchOptions, SearchStatus};
use mposr_core::{automorphism_group, build_cayley, is_semiregular_rep, named_group, validate_sets, GroupSpec, GroupTable};
use num_bigint::BigUint;
use proptest::prelude::*;

fn group(token: &str) -> GroupTable {
    named_group(&token.parse::<GroupSpec>().unwrap()).unwrap()
}

#[test]
fn data_files_match_fixed_digraphs() {
    for fixed in catalog::fixed_digraphs() {
        let source = catalog::fixed_digraph_source(fixed.name).unwrap();
        assert_eq!(parse_edgelist(source).unwrap(), fixed.digraph, "{}", fixed.name);
        let exported = export(&fixed.digraph, ExportFormat::EdgeList);
        assert_eq!(parse_edgelist(&exported).unwrap(), fixed.digraph);
    }
}

#[test]
fn solver_order_agrees_with_schreier_sims_on_registry_witnesses() {
    for claim in catalog::registry() {
        let catalog::Expected::ExistsWithWitness(cells) = &claim.expected else {
            continue;
        };
        let Ok(g) = named_group(&claim.group) else { continue };
        if g.order() * claim.m > 200 {
            continue;
        }
        let sets = catalog::sets_from_words(&g, claim.m, cells).unwrap();
        let pd = build_cayley(&g, &sets).unwrap();
        let aut = automorphism_group(&pd.digraph).unwrap();
        let chain = StabilizerChain::from_generators(pd.digraph.n_vertices(), &aut.generators);
        assert_eq!(chain.order(), aut.order, "{}", claim.id);
        assert!(aut.generators.iter().all(|p| pd.digraph.is_automorphism(p)));
    }
}

#[test]
fn resumed_search_matches_single_run() {
    let g = group("quaternion8");
    let full = exists_mposr_with(&g, 2, 3, Kind::Posr, &SearchOptions::default()).unwrap();
    let mut cursor = 0;
    let mut chunks = 0;
    let last = loop {
        let options = SearchOptions {
            start_cursor: cursor,
            max_candidates: Some(700),
            ..SearchOptions::default()
        };
        let out = exists_mposr_with(&g, 2, 3, Kind::Posr, &options).unwrap();
        chunks += 1;
        match out.next_cursor {
            Some(next) if out.status == SearchStatus::Aborted => cursor = next,
            _ => break out,
        }
    };
    assert_eq!(chunks, 5);
    assert_eq!(last.status, full.status);
    assert_eq!(last.candidates_examined, full.candidates_examined);
}

#[test]
fn reduced_and_plain_searches_agree() {
    for (token, kind) in [("dihedral:6", Kind::Posr), ("cyclic:7", Kind::Posr), ("klein4", Kind::Pdr), ("cyclic:5", Kind::Pdr)] {
        let g = group(token);
        let plain = exists_mposr_with(&g, 2, 3, kind, &SearchOptions::default()).unwrap();
        let reduced = exists_mposr_with(
            &g,
            2,
            3,
            kind,
            &SearchOptions {
                reduction: Reduction::Isomorphism,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        assert_eq!(plain.status, reduced.status, "{token}");
        assert!(reduced.total_candidates <= plain.total_candidates);
    }
}

#[test]
fn find_witness_covers_groups_without_listed_sets() {
    for token in ["perm:(0 1 2 3);(4 5 6 7)", "perm:(0 1 2 3);(4 5)", "dihedral:14"] {
        let g = group(token);
        let (sets, origin) = catalog::find_witness(&g, 2, Kind::Posr, &SearchOptions::default())
            .unwrap()
            .unwrap();
        let v = validate_sets(&g, &sets, 3).unwrap();
        assert!(v.oriented && v.partite && v.regular, "{token}");
        let pd = build_cayley(&g, &sets).unwrap();
        assert!(is_semiregular_rep(&pd, &g).unwrap().is_representation, "{token}");
        if token == "dihedral:14" {
            assert!(matches!(origin, WitnessOrigin::Construction(_)));
        }
    }
}

#[test]
fn default_tier_report() {
    let report = catalog::verify_all(&SuiteBudget::default());
    let failed: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
    assert_eq!(failed, ["pdr/cyclic:1/m6", "posr/alternating4/m2", "pdr/dihedral:6/m2"]);
    assert_eq!(report.count(ClaimStatus::Aborted), 0);
    assert_eq!(report.tier, Tier::Default);
    for (claim, entry) in catalog::registry().iter().zip(&report.claims) {
        assert_eq!(claim.id, entry.id);
        assert_eq!(entry.status == ClaimStatus::Skipped, claim.tier == Tier::Extended, "{}", claim.id);
    }
    let json = report.to_json(false);
    assert_eq!(json["claims"].as_array().unwrap().len(), report.claims.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cyclic_constructions_round_trip_through_edgelists(n in 7usize..20, m in 2usize..6) {
        let g = group(&format!("cyclic:{n}"));
        let sets = catalog::cyclic_posr_sets(n, m).unwrap();
        let pd = build_cayley(&g, &sets).unwrap();
        let text = export(&pd.digraph, ExportFormat::EdgeList);
        let parsed = parse_edgelist(&text).unwrap();
        prop_assert_eq!(&parsed, &pd.digraph);
        prop_assert!(are_isomorphic(&parsed, &pd.digraph).unwrap());
        prop_assert_eq!(automorphism_group(&parsed).unwrap().order, BigUint::from(n));
    }
}
