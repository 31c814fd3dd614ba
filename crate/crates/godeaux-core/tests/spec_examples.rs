//! Worked examples asserted module by module: case shapes, candidate
//! transforms, equation dictionary entries, sample-solution generators,
//! containments, and the order-3 variant without the degree-7 relation.

mod common;

use std::collections::BTreeSet;

use godeaux_core::catalog::{coset_subgroup, Catalog};
use godeaux_core::config::CaseConfig;
use godeaux_core::group::{
    ambient_group, centralizer_indices, CosetGroup, Group, GroupElement, TupleGroup,
};
use godeaux_core::psolve::ParamSystem;
use godeaux_core::strat::run_pipeline;

#[test]
fn builtin_case_shapes() {
    let c5 = CaseConfig::builtin(5).unwrap();
    assert_eq!(c5.mod_pars.len(), 8);
    assert_eq!(c5.relations.len(), 1);
    assert_eq!(c5.relations[0].terms.len(), 12);
    assert_eq!(c5.twist_order, 4);

    let c4 = CaseConfig::builtin(4).unwrap();
    assert_eq!(c4.mod_pars.len(), 8);
    assert_eq!(c4.relations.len(), 2);
    assert_eq!(c4.twist_order, 2);

    let c3 = CaseConfig::builtin(3).unwrap();
    assert_eq!(c3.mod_pars.len(), 9);
    assert_eq!(c3.relations.len(), 3);
    assert_eq!(c3.twist_order, 2);

    // weighted homogeneity: degree 5 for the quintic; 4 for both order-4
    // relations; 6, 6, 7 for the order-3 relations
    let degree = |case: &CaseConfig, rel: usize| -> u32 {
        case.relations[rel].terms[0]
            .1
            .iter()
            .zip(case.coords.iter())
            .map(|(&e, c)| e * c.weight)
            .sum()
    };
    assert_eq!(degree(&c5, 0), 5);
    assert_eq!(degree(&c4, 0), 4);
    assert_eq!(degree(&c4, 1), 4);
    assert_eq!(degree(&c3, 0), 6);
    assert_eq!(degree(&c3, 1), 6);
    assert_eq!(degree(&c3, 2), 7);
}

#[test]
fn apply_candidate_examples() {
    let c5 = CaseConfig::builtin(5).unwrap();
    // twist 1: the b1 term keeps its monomial and acquires i2 + 3 i3 + i4
    let h0 = c5.twist_exponent(1).unwrap();
    let rows = c5.apply_candidate(0, h0);
    let b1 = &rows[4];
    assert_eq!(b1.1, vec![0, 1, 3, 1]);
    assert_eq!(b1.2.coeffs, vec![1, 3, 1]);
    // twist 4: the b4 term lands on the b1 slot with exponent 3 i2 + i3
    let h2 = c5.twist_exponent(4).unwrap();
    let rows = c5.apply_candidate(0, h2);
    let b4 = &rows[7];
    assert_eq!(b4.1, vec![0, 1, 3, 1], "x1 x2^3 x3 maps onto x2 x3^3 x4");
    assert_eq!(b4.2.coeffs, vec![3, 1, 0]);
    // the identity candidate leaves every monomial unchanged with zero forms
    for (_, mono, form) in c5.apply_candidate(0, h0) {
        let src = c5.relations[0].terms.iter().find(|(_, m)| *m == mono);
        assert!(src.is_some());
        let _ = form;
    }
}

#[test]
fn compute_equations_dictionary_entries() {
    let c5 = CaseConfig::builtin(5).unwrap();
    let h0 = c5.twist_exponent(1).unwrap();
    let eqs = c5.equations_dictionary(h0).unwrap();
    // twist 1, pair (b1, b1): i2 + 3 i3 + i4 = 0, ratio free
    let e = eqs
        .iter()
        .find(|e| e.provenance.target == Some(0) && e.provenance.source == Some(0))
        .unwrap();
    assert_eq!(e.unknowns, vec![1, 3, 1]);
    assert!(e.ratios.is_empty());

    let h2 = c5.twist_exponent(4).unwrap();
    let eqs = c5.equations_dictionary(h2).unwrap();
    // pair (b4 <- b1): -n14 = i2 + 3 i3 + i4
    let e = eqs
        .iter()
        .find(|e| e.provenance.target == Some(3) && e.provenance.source == Some(0))
        .unwrap();
    assert_eq!(e.display(&c5), "-n_{1,4} == i2 + 3*i3 + i4 (mod 5)");
    // pair (c3 <- c2): m32 = 2 i3 + 2 i4
    let e = eqs
        .iter()
        .find(|e| e.provenance.target == Some(6) && e.provenance.source == Some(5))
        .unwrap();
    assert_eq!(e.display(&c5), "m_{3,2} == 2*i3 + 2*i4 (mod 5)");
}

#[test]
fn gens_sample_solutions_examples() {
    let c5 = CaseConfig::builtin(5).unwrap();
    // twist 1: a single free direction generated by (1, 2, 3)
    let eqs = c5.equations_dictionary(0).unwrap();
    let sol = ParamSystem::from_equations(&c5, &eqs).solve();
    let (offset, gens) = sol.gens_sample_solutions().unwrap();
    assert_eq!(offset, vec![0, 0, 0]);
    assert_eq!(gens, vec![vec![1, 2, 3]]);

    // fully determined system: offset only
    let sys = ParamSystem {
        modulus: 5,
        unknowns: 2,
        params: vec![],
        rows: vec![(vec![1, 0], vec![], 4), (vec![0, 1], vec![], 2)],
    };
    let (offset, gens) = sys.solve().gens_sample_solutions().unwrap();
    assert_eq!(offset, vec![1, 3]);
    assert!(gens.is_empty());

    // two free unknowns: two generators plus the offset, spanning everything
    let free = ParamSystem {
        modulus: 5,
        unknowns: 2,
        params: vec![],
        rows: vec![],
    };
    let (offset, gens) = free.solve().gens_sample_solutions().unwrap();
    assert_eq!(offset, vec![0, 0]);
    assert_eq!(gens.len(), 2);
}

#[test]
fn containment_examples() {
    let catalog = Catalog::build().unwrap();
    let c5 = CaseConfig::builtin(5).unwrap();
    let h = TupleGroup::new(&c5, ambient_group(&c5).unwrap());
    let q = CosetGroup::quotient(&c5, &h).unwrap();
    let pipe = run_pipeline(&c5, &catalog, &q).unwrap();
    let o = pipe.table.find("O").unwrap();
    let h1 = pipe.table.find("H_1").unwrap();
    for s in 0..5 {
        let qs = pipe.table.find(&format!("Q_{}", s)).unwrap();
        assert!(o.stratum.leq(&qs.stratum), "O inside every Q_s");
        assert!(!h1.stratum.leq(&qs.stratum), "H never inside Q");
    }
    // every P sits inside exactly one Q
    for s in 0..5u32 {
        for t in 0..5u32 {
            let p = pipe.table.find(&format!("P_{{{},{}}}", s, t)).unwrap();
            let count = (0..5)
                .filter(|&u| {
                    p.stratum
                        .leq(&pipe.table.find(&format!("Q_{}", u)).unwrap().stratum)
                })
                .count();
            assert_eq!(count, 1);
            let expected = (2 * s + t) % 5;
            assert!(p
                .stratum
                .leq(&pipe.table.find(&format!("Q_{}", expected)).unwrap().stratum));
        }
    }
}

#[test]
fn propagation_example_square_of_the_order_four_twist() {
    // the order-2 element of the Q stabilizer is the square of the order-4
    // element of the P stabilizer
    let c5 = CaseConfig::builtin(5).unwrap();
    let catalog = Catalog::build().unwrap();
    let h = TupleGroup::new(&c5, ambient_group(&c5).unwrap());
    let q = CosetGroup::quotient(&c5, &h).unwrap();
    let pipe = run_pipeline(&c5, &catalog, &q).unwrap();
    let p00 = pipe.table.find("P_{0,0}").unwrap();
    let z4 = GroupElement::new(5, vec![0, 0, 0], 1);
    let z2 = godeaux_core::group::multiply(&c5, &z4, &z4).unwrap();
    assert!(p00.aut_reps.contains(&q.canon(&z4).unwrap()));
    assert!(p00.aut_reps.contains(&q.canon(&z2).unwrap()));
    let q0 = pipe.table.find("Q_0").unwrap();
    assert!(q0.aut_reps.contains(&q.canon(&z2).unwrap()));
    assert!(!q0.aut_reps.contains(&q.canon(&z4).unwrap()));
}

#[test]
fn centralizer_of_identity_is_the_whole_quotient() {
    let c5 = CaseConfig::builtin(5).unwrap();
    let h = TupleGroup::new(&c5, ambient_group(&c5).unwrap());
    let q = CosetGroup::quotient(&c5, &h).unwrap();
    let e = q.identity();
    assert_eq!(centralizer_indices(&q, e).len(), 100);
}

#[test]
fn origin_group_identification() {
    let catalog = Catalog::build().unwrap();
    let c5 = CaseConfig::builtin(5).unwrap();
    let h = TupleGroup::new(&c5, ambient_group(&c5).unwrap());
    let q = CosetGroup::quotient(&c5, &h).unwrap();
    let sub = coset_subgroup(
        &q,
        &[
            GroupElement::new(5, vec![1, 0, 0], 0),
            GroupElement::new(5, vec![0, 1, 0], 0),
            GroupElement::new(5, vec![0, 0, 0], 1),
        ],
    )
    .unwrap();
    assert_eq!(sub.order(), 100);
    assert_eq!(catalog.identify(&sub).unwrap().id_string(), "(100, 10)");
}

#[test]
fn order_five_subcomponent_of_the_q_component() {
    // the origin inside the component of (0,0,0,2) carries the full
    // centralizer, of order 20
    let ctx = godeaux_core::report::Context::build(5).unwrap();
    let sub = ctx
        .inertia
        .subreports
        .iter()
        .find(|s| s.family == "O")
        .unwrap();
    let row = sub
        .rows
        .iter()
        .find(|(_, el, _, _)| el.display() == "(0,0,0,2)")
        .unwrap();
    assert_eq!(row.0, "Q");
    assert_eq!(row.3, 20);
    assert_eq!(row.2.name, "Z_5 : Z_4");
    // abelian component groups coincide with their centralizers inside the
    // stratum group: the P rows carry the full Z_4
    let p_row = sub.rows.iter().find(|(fam, _, _, _)| fam == "P").unwrap();
    assert_eq!(p_row.3, 4);
}

#[test]
fn order_three_variant_without_the_degree_seven_relation() {
    // dropping the degree-7 relation must not change the stratification
    let catalog = Catalog::build().unwrap();
    let with_h = CaseConfig::builtin(3).unwrap();
    let without_h = CaseConfig::builtin_with_options(3, false).unwrap();
    assert_eq!(without_h.relations.len(), 2);
    let summarize = |case: &CaseConfig| -> Vec<(String, usize, usize, String)> {
        let h = TupleGroup::new(case, ambient_group(case).unwrap());
        let q = CosetGroup::quotient(case, &h).unwrap();
        let pipe = run_pipeline(case, &catalog, &q).unwrap();
        pipe.table
            .all_strata()
            .map(|s| (s.name.clone(), s.dim, s.aut_reps.len(), s.label.id_string()))
            .collect()
    };
    assert_eq!(summarize(&with_h), summarize(&without_h));
}

#[test]
fn torsion_satisfies_all_identity_twist_equations() {
    // the torsion generator solves the identity-twist system of every case
    for nu in [3u32, 4, 5] {
        let case = CaseConfig::builtin(nu).unwrap();
        let eqs = case.equations_dictionary(0).unwrap();
        for eq in eqs {
            assert!(eq.ratios.is_empty());
            let mut acc = eq.konst as i64;
            for (c, &g) in eq.unknowns.iter().enumerate() {
                acc += g as i64 * case.torsion_exps[c] as i64;
            }
            assert_eq!(acc.rem_euclid(nu as i64), 0);
        }
    }
}

#[test]
fn generic_pattern_identity_twist_yields_exactly_the_torsion_group() {
    for nu in [3u32, 4, 5] {
        let case = CaseConfig::builtin(nu).unwrap();
        let eqs = case.equations_dictionary(0).unwrap();
        let sol = ParamSystem::from_equations(&case, &eqs).solve();
        let xs: BTreeSet<Vec<u32>> = sol
            .solutions_at(&[])
            .unwrap()
            .enumerate()
            .unwrap()
            .into_iter()
            .collect();
        let torsion: BTreeSet<Vec<u32>> = godeaux_core::group::torsion_subgroup(&case)
            .unwrap()
            .into_iter()
            .map(|g| g.exps)
            .collect();
        assert_eq!(
            xs, torsion,
            "generic stabilizer is the torsion group (nu = {})",
            nu
        );
    }
}
