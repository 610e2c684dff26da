use proptest::prelude::*;

use rctw::compute::{assemble_rank_decomposition, find_rc_torso, nicify, torso_result_for, Limits};
use rctw::decomposition::{validate_rank_decomposition, NiceHTreeDecomposition};
use rctw::hybrid::{solve_chromatic, solve_hamiltonian, solve_maxcut};
use rctw::oracles::{brute_chromatic, brute_hamiltonian, brute_maxcut};
use rctw::{Graph, VertexSet};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, pairs.zip(bits).filter(|&(_, b)| b).map(|(e, _)| e)).unwrap()
        })
    })
}

/// Decompositions of `g` from the torso search and from two fixed modulators.
fn decompositions(g: &Graph) -> Vec<NiceHTreeDecomposition> {
    let mut out = Vec::new();
    for c in [1, 2] {
        let r = find_rc_torso(g, c, None).unwrap().unwrap();
        out.push(nicify(g, &r).unwrap());
    }
    let plain = torso_result_for(g, 0, &VertexSet::default(), &Limits::default()).unwrap();
    out.push(nicify(g, &plain).unwrap());
    let even: VertexSet = g.vertices().filter(|v| v % 2 == 0).collect();
    if let Ok(r) = torso_result_for(g, 2, &even, &Limits::default()) {
        out.push(nicify(g, &r).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn answers_do_not_depend_on_the_decomposition(g in graph(8)) {
        let want = (brute_chromatic(&g).unwrap(), brute_hamiltonian(&g).unwrap(), brute_maxcut(&g).unwrap());
        for d in decompositions(&g) {
            let got = (
                solve_chromatic(&g, &d).unwrap().colors,
                solve_hamiltonian(&g, &d).unwrap().is_some(),
                solve_maxcut(&g, &d).unwrap().value,
            );
            prop_assert_eq!(got, want, "modulator {:?}", d.modulator.to_vec());
        }
    }

    #[test]
    fn assembled_rank_width_is_bounded(g in graph(9)) {
        for d in decompositions(&g) {
            let rd = assemble_rank_decomposition(&g, &d).unwrap();
            let report = validate_rank_decomposition(&g, &rd);
            prop_assert!(report.is_ok(), "{:?}", report.violations);
            prop_assert!(report.width.unwrap_or(0) <= d.c + d.width + 1);
        }
    }
}
