//! Acceptance suite. Each test prints one PASS line on success; a failed
//! assertion marks the criterion as failed.

use num_bigint::BigUint;
use rayon::prelude::*;
use std::collections::BTreeSet;

use jtsmc::graph::count_decomposable;
use jtsmc::graph::decomposable_graphs;
use jtsmc::jtree::{all_junction_trees, junction_trees_of, CanonicalTree, JunctionTree};
use jtsmc::kernels::{collapser_density, expander_density, ExpanderParams};
use jtsmc::rng::substream;

const PARAM_GRID: [f64; 3] = [0.3, 0.5, 0.8];

#[test]
fn criterion_1_exact_enumeration() {
    let expected: [(usize, u64); 5] = [(2, 2), (3, 8), (4, 61), (5, 822), (6, 18154)];
    for (p, count) in expected {
        assert_eq!(count_decomposable(p).unwrap(), count, "count at p = {p}");
    }
    println!("ACCEPTANCE 1 PASS: exact counts 2, 8, 61, 822, 18154 for p = 2..6");
}

#[test]
fn criterion_2_mu_oracle_equivalence() {
    let graphs: Vec<_> = decomposable_graphs(5).unwrap().collect();
    assert_eq!(graphs.len(), 822);
    graphs.par_iter().enumerate().for_each(|(idx, g)| {
        let brute = junction_trees_of(g).unwrap().len();
        let t = JunctionTree::of_graph(g).unwrap();
        assert_eq!(t.mu(), BigUint::from(brute), "mu mismatch for {g:?}");
        let mut rng = substream(2024, 70, idx as u64, 0);
        for _ in 0..5 {
            let alt = t.shuffle_representation(&mut rng);
            assert_eq!(alt.underlying_graph(), *g);
            assert_eq!(alt.mu(), BigUint::from(brute), "mu not representation-invariant for {g:?}");
        }
    });
    println!("ACCEPTANCE 2 PASS: mu equals brute-force junction-tree counts on all 822 graphs at p = 5, invariant across randomized representations");
}

fn level(m: usize) -> Vec<JunctionTree> {
    all_junction_trees(m).unwrap()
}

#[test]
fn criterion_3_kernel_normalization() {
    for m in 1..=4usize {
        let lower = level(m);
        let upper = level(m + 1);
        // Forward kernel rows sum to one for every parameter combination.
        lower.par_iter().for_each(|t| {
            let mut sums = [[0.0f64; 3]; 3];
            for t_plus in &upper {
                if expander_density(t, t_plus, &ExpanderParams::new(0.5, 0.5).unwrap()).unwrap() == 0.0 {
                    continue;
                }
                for (ai, &alpha) in PARAM_GRID.iter().enumerate() {
                    for (bi, &beta) in PARAM_GRID.iter().enumerate() {
                        let params = ExpanderParams::new(alpha, beta).unwrap();
                        sums[ai][bi] += expander_density(t, t_plus, &params).unwrap();
                    }
                }
            }
            for row in &sums {
                for &s in row {
                    assert!((s - 1.0).abs() < 1e-9, "expander row sum {s} at m = {m} for {t:?}");
                }
            }
        });
        // Backward kernel rows sum to one.
        upper.par_iter().for_each(|t_plus| {
            let sum: f64 = lower.iter().map(|t| collapser_density(t_plus, t).unwrap()).sum();
            assert!((sum - 1.0).abs() < 1e-9, "collapser row sum {sum} at m = {m} for {t_plus:?}");
        });
    }
    println!("ACCEPTANCE 3 PASS: expander and collapser rows sum to 1 (within 1e-9) for all trees with m <= 4 and (alpha, beta) on the 0.3/0.5/0.8 grid");
}

#[test]
fn criterion_4_support_theorems() {
    let params = ExpanderParams::new(0.5, 0.5).unwrap();
    // Reachability: iterated expansion from the trivial tree covers T_m.
    let mut reachable: Vec<JunctionTree> = vec![JunctionTree::trivial(1, jtsmc::VertexId::new(1).unwrap())];
    for m in 2..=4usize {
        let next = level(m);
        let keys: BTreeSet<CanonicalTree> = next
            .par_iter()
            .filter(|t_plus| {
                reachable.iter().any(|t| expander_density(t, t_plus, &params).unwrap() > 0.0)
            })
            .map(|t| t.canonical_key())
            .collect();
        let all: BTreeSet<CanonicalTree> = next.iter().map(|t| t.canonical_key()).collect();
        assert_eq!(keys, all, "reachable set at m = {m} differs from the enumerated space");
        reachable = next;
    }
    // Reverse support: every collapse outcome can be expanded back.
    for m in 1..=4usize {
        let lower = level(m);
        let upper = level(m + 1);
        upper.par_iter().for_each(|t_plus| {
            for t in &lower {
                if collapser_density(t_plus, t).unwrap() > 0.0 {
                    assert!(
                        expander_density(t, t_plus, &params).unwrap() > 0.0,
                        "collapse outcome outside the expander support: {t:?} -> {t_plus:?}"
                    );
                }
            }
        });
    }
    println!("ACCEPTANCE 4 PASS: iterated expansion reaches exactly T_m for m <= 4, and every collapse outcome has positive reverse expander density");
}
