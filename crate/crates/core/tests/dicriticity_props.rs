mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use saito_core::dicriticity::{
    check_admissibility, check_mixed_inequality, configuration, configuration_by_neighbors, configuration_halves,
    find_mixed_branch, square_indices, theta01, theta02, theta11, theta_reference, white_components,
};
use saito_core::{saito_bruteforce, saito_inductive, Dicriticity, HalfInt, Numbering, ResolutionTree, Step, VertexId};

use common::{random_instance, ref_admissible_set, ref_configuration_twice, ref_multiplicities, Instance};

fn instance(max_vertices: usize) -> impl Strategy<Value = Instance> {
    any::<u64>().prop_map(move |seed| random_instance(&mut ChaCha8Rng::seed_from_u64(seed), max_vertices, 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn inductive_matches_bruteforce(inst in instance(12)) {
        let brute = saito_bruteforce(&inst.tree, &inst.n).unwrap();
        prop_assert_eq!(saito_inductive(&inst.tree, &inst.n).unwrap(), brute.clone());
        let all = ref_admissible_set(&inst, inst.n.as_slice());
        prop_assert_eq!(all, vec![brute.dicriticity.as_slice().to_vec()]);
    }

    #[test]
    fn every_dicriticity_is_integral(inst in instance(9)) {
        let len = inst.len();
        for mask in 0u64..1 << len {
            let delta = Dicriticity::from_mask(len, mask);
            let matrix = configuration(&inst.tree, &inst.n, &delta).unwrap();
            let expanded = configuration_by_neighbors(&inst.tree, &inst.n, &delta).unwrap();
            prop_assert_eq!(&matrix, &expanded);
            let twice: Vec<i64> = matrix.as_slice().iter().map(|e| 2 * e).collect();
            prop_assert_eq!(twice, ref_configuration_twice(&inst, inst.n.as_slice(), delta.as_slice()));
        }
    }

    #[test]
    fn root_identity_for_any_dicriticity(inst in instance(12), mask in any::<u64>()) {
        let delta = Dicriticity::from_mask(inst.len(), mask & ((1 << inst.len()) - 1));
        let rho = ref_multiplicities(&inst);
        let eps = configuration_halves(&inst.tree, &inst.n, &delta);
        let weighted: HalfInt = rho.iter().zip(&eps).map(|(r, e)| *e * *r).sum();
        let nu_root = inst.tree.valuations(&inst.n)[0];
        let root_square = square_indices(&inst.tree, &inst.n, &delta)[0];
        prop_assert_eq!(weighted, HalfInt::half_of(nu_root) - root_square);
    }

    #[test]
    fn admissibility_report_matches_bounds(inst in instance(10), mask in any::<u64>()) {
        let delta = Dicriticity::from_mask(inst.len(), mask & ((1 << inst.len()) - 1));
        let report = check_admissibility(&inst.tree, &inst.n, &delta).unwrap();
        let expected = common::ref_admissible(&inst, inst.n.as_slice(), delta.as_slice()).unwrap();
        prop_assert_eq!(report.is_admissible(), expected);
        for v in &report.violations {
            prop_assert!(v.epsilon < v.required);
            prop_assert_eq!(v.white, delta.is_white(v.vertex));
        }
    }

    #[test]
    fn white_components_have_positive_entry(inst in instance(12)) {
        let sol = saito_inductive(&inst.tree, &inst.n).unwrap();
        let comps = white_components(&inst.tree, &sol.dicriticity);
        let covered: usize = comps.iter().map(Vec::len).sum();
        prop_assert_eq!(covered, sol.dicriticity.as_slice().iter().filter(|d| **d == 1).count());
        for comp in comps {
            prop_assert!(comp.iter().any(|v| sol.configuration.get(*v) > 0), "component {:?}", comp);
        }
    }

    #[test]
    fn theta01_closed_form(inst in instance(12)) {
        let rho = ref_multiplicities(&inst);
        for c in (0..inst.len()).filter(|&c| rho[c] == 1).map(VertexId) {
            let sol = saito_inductive(&inst.tree, &inst.n).unwrap();
            let access = common::ref_access(&inst, c.index()).len() as i64;
            let expected = -HalfInt::from_int(sol.dicriticity.value(c)) - HalfInt::half_of(access);
            prop_assert_eq!(theta_reference(&inst.tree, &inst.n, c).unwrap(), expected);
            prop_assert_eq!(theta01(&inst.tree, &inst.n, c).unwrap(), expected);
        }
    }

    #[test]
    fn theta_pairs_at_root(inst in instance(12)) {
        let rho = ref_multiplicities(&inst);
        let root = VertexId(0);
        let reference = theta_reference(&inst.tree, &inst.n, root).unwrap();
        for c0 in (0..inst.len()).filter(|&c| rho[c] == 1).map(VertexId) {
            for value in [theta02(&inst.tree, &inst.n, c0, root).unwrap(), theta11(&inst.tree, &inst.n, c0, root).unwrap()] {
                let gap = value - reference;
                prop_assert!(gap == HalfInt::HALF || gap == -HalfInt::HALF, "c0 = {}: gap {}", c0, gap);
            }
        }
    }

    #[test]
    fn mixed_branches_satisfy_inequality(inst in instance(12)) {
        let rho = ref_multiplicities(&inst);
        for c in (0..inst.len()).filter(|&c| rho[c] == 1).map(VertexId) {
            if let Some(report) = find_mixed_branch(&inst.tree, &inst.n, c).unwrap() {
                prop_assert!(check_mixed_inequality(&report), "{:?}", report);
            }
        }
    }
}

fn chain(len: usize) -> ResolutionTree {
    let steps: Vec<Step> = (1..len).map(|s| Step::free(s - 1)).collect();
    ResolutionTree::build(&steps).unwrap()
}

#[test]
fn mixed_inequality_on_all_short_chains() {
    let mut mixed = 0;
    for len in 1..=6usize {
        let tree = chain(len);
        for code in 0..5u32.pow(len as u32) {
            let values: Vec<u32> = (0..len).map(|i| code / 5u32.pow(i as u32) % 5).collect();
            let n = Numbering::new(values);
            for c in tree.vertices() {
                if let Some(report) = find_mixed_branch(&tree, &n, c).unwrap() {
                    assert!(check_mixed_inequality(&report), "{report:?}");
                    mixed += 1;
                }
            }
        }
    }
    assert!(mixed > 0);
}

#[test]
fn single_vertex_mixed_table() {
    let single = ResolutionTree::single();
    let root = VertexId(0);
    for nr in 0..=10u32 {
        let report = find_mixed_branch(&single, &Numbering::new(vec![nr]), root).unwrap();
        assert_eq!(report.is_some(), nr == 2, "n_r = {nr}");
    }
    let report = find_mixed_branch(&single, &Numbering::new(vec![2]), root)
        .unwrap()
        .unwrap();
    assert!(report.is_pure);
    assert_eq!(
        (report.colors_n.as_slice(), report.colors_cn.as_slice()),
        (&[1u8][..], &[0u8][..])
    );
    assert!(report.parity_facts.nu_root_n_even);
}
