mod common;

use std::f64::consts::LN_2;

use proptest::prelude::*;

use plandscape::flatness::{dk_bound, is_flat, CheckMode};
use plandscape::landscape::{binomial_tail_log, exact_overlap_densest, local_search_densest, Method, DEFAULT_BUDGET};
use plandscape::mcmc::{exact_gibbs, few_ratio, rank, reflected_step, unrank, WellPartition, EXACT_BUDGET};
use plandscape::model::{graph_to_string, pairs, read_graph, sample_planted, Graph, ModelParams, VertexSubset};
use plandscape::numerics::{
    classify_empirical, entropy, entropy_inverse, log_binomial, ClassifierConfig, CurveKind, Monotonicity, OverlapCurve,
};
use plandscape::ogp::{auto_certify, certify_ogp, d_curve, LocalOptions};
use plandscape::rng::seeded;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_inverse_roundtrip(y in 0.0..LN_2) {
        let x = entropy_inverse(y).unwrap();
        prop_assert!((0.5..=1.0).contains(&x));
        prop_assert!((entropy(x).unwrap() - y).abs() <= 1e-10);
    }

    #[test]
    fn log_binomial_pascal(n in 2u64..5000, r in 1u64..5000) {
        let r = r % n;
        prop_assume!(r >= 1);
        let lhs = log_binomial(n, r).unwrap();
        let a = log_binomial(n - 1, r - 1).unwrap();
        let b = log_binomial(n - 1, r).unwrap();
        let rhs = a.max(b) + (-(a - b).abs()).exp().ln_1p();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
        prop_assert_eq!(log_binomial(n, r).unwrap(), log_binomial(n, n - r).unwrap());
    }

    #[test]
    fn tail_complement_and_order(n in 1u64..3000, t in 0u64..3000) {
        let t = t % (n + 1);
        let up = binomial_tail_log(n, t);
        if t >= 1 {
            let down = binomial_tail_log(n, n - t + 1);
            prop_assert!((up.exp() + down.exp() - 1.0).abs() < 1e-9);
        }
        if t < n {
            prop_assert!(binomial_tail_log(n, t + 1) <= up);
        }
    }

    #[test]
    fn rank_unrank(mask in any::<u64>(), size in 1u32..12) {
        let mut m = mask;
        while m.count_ones() > size {
            m &= m - 1;
        }
        prop_assume!(m.count_ones() == size);
        prop_assert_eq!(unrank(rank(m), size), m);
    }

    #[test]
    fn graph_file_roundtrip(n in 2usize..130, k in 1usize..8, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let g = sample_planted(n, k, seed).unwrap();
        let back = read_graph(graph_to_string(&g).as_bytes()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn subsets_are_canonical(v in proptest::collection::vec(0usize..40, 0..12)) {
        match VertexSubset::new(v.clone(), 40) {
            Ok(s) => {
                prop_assert!(s.members().windows(2).all(|w| w[0] < w[1]));
                prop_assert_eq!(s.size(), v.len());
            }
            Err(_) => {
                let mut d = v.clone();
                d.sort();
                d.dedup();
                prop_assert!(d.len() < v.len());
            }
        }
    }

    #[test]
    fn exact_dominates_local(seed in 0u64..1000, z in 0usize..5) {
        let g = sample_planted(16, 4, seed).unwrap();
        let e = exact_overlap_densest(&g, 6, z, DEFAULT_BUDGET).unwrap();
        let l = local_search_densest(&g, 6, Some(z), 3, seed).unwrap();
        prop_assert!(l.value <= e.value);
        prop_assert_eq!(common::pair_edges(g.graph(), e.witness.members()), e.value);
        prop_assert_eq!(common::planted_count(&g, e.witness.members()), z);
    }

    #[test]
    fn exact_curve_matches_enumeration(seed in any::<u64>(), n in 7usize..12, k in 2usize..5, extra in 0usize..3) {
        let kbar = k + extra;
        prop_assume!(kbar < n);
        let g = sample_planted(n, k, seed).unwrap();
        let d = d_curve(&g, kbar, Method::Exhaustive, DEFAULT_BUDGET, LocalOptions::default()).unwrap();
        let naive = common::naive_d_curve(&g, kbar);
        for p in d.curve.points() {
            prop_assert_eq!(Some(p.value as u64), naive[p.z as usize]);
        }
    }

    #[test]
    fn reflected_chain_stays_in_band(seed in any::<u64>(), beta in 0.0f64..5.0) {
        let g = sample_planted(16, 5, seed).unwrap();
        let part = WellPartition::explicit(0, 1, 1, 2).unwrap();
        let mut s = VertexSubset::new(g.non_planted()[..5].to_vec(), 16).unwrap();
        let mut rng = seeded(seed);
        for _ in 0..300 {
            s = reflected_step(&g, &s, beta, &part, &mut rng).unwrap();
            prop_assert!(common::planted_count(&g, s.members()) <= 1);
        }
    }

    #[test]
    fn monotone_curves_classify_monotone(start in 0.0f64..100.0, steps in proptest::collection::vec(0.5f64..5.0, 40)) {
        let p = ModelParams::new(1000, 39, 60).unwrap();
        let mut up = vec![start];
        for s in &steps[..39] {
            up.push(up.last().unwrap() + s);
        }
        let down: Vec<f64> = up.iter().rev().copied().collect();
        let cfg = ClassifierConfig::default();
        let inc = classify_empirical(&OverlapCurve::from_values(p, CurveKind::Empirical, 0, &up).unwrap(), &cfg).unwrap();
        let dec = classify_empirical(&OverlapCurve::from_values(p, CurveKind::Empirical, 0, &down).unwrap(), &cfg).unwrap();
        prop_assert_eq!(inc.label, Monotonicity::Increasing);
        prop_assert_eq!(dec.label, Monotonicity::Decreasing);
    }
}

#[test]
fn gibbs_marginal_matches_independent_enumerator() {
    for seed in 0..5 {
        let g = sample_planted(12, 4, seed).unwrap();
        let ex = exact_gibbs(&g, 4, 0.5, EXACT_BUDGET).unwrap();
        let naive = common::naive_gibbs_marginal(&g, 4, 0.5);
        for (a, b) in ex.marginal().iter().zip(&naive) {
            assert!((a - b).abs() < 1e-10, "seed {seed}: {a} vs {b}");
        }
    }
}

#[test]
fn zero_beta_ratio_is_hypergeometric() {
    let g = sample_planted(12, 4, 9).unwrap();
    let part = WellPartition::explicit(0, 1, 1, 2).unwrap();
    let r = few_ratio(&exact_gibbs(&g, 4, 0.0, EXACT_BUDGET).unwrap(), &part);
    // counts C(4,z)·C(8,4−z): 70, 224, 168, 32, 1 out of 495
    let a0 = 70.0f64;
    let a1 = 224.0f64;
    let a2 = 168.0 + 32.0 + 1.0;
    assert!((r.ln_ratio - (a0.min(a2) / a1).ln()).abs() < 1e-12);
}

/// A `K`-vertex graph with about half of its pairs as edges plus a dense
/// block on the first `block` vertices.
fn graph_with_block(k: usize, block: usize, seed: u64) -> Graph {
    let mut g = Graph::erdos_renyi_half(k, seed);
    for u in 0..block {
        for v in 0..u {
            g.add_edge(u, v);
        }
    }
    g
}

#[test]
fn flatness_matches_enumerator_with_violations() {
    let mut with_violations = 0;
    for seed in 0..12 {
        let k = 12;
        let g = graph_with_block(k, 7, seed);
        let gamma = 0.3;
        let delta = 0.05;
        let lim: Vec<f64> = (0..=k)
            .map(|l| (gamma * pairs(l as u64) as f64 - 1e-9).ceil() + dk_bound(k, l, delta, gamma).unwrap())
            .collect();
        let r = is_flat(&g, gamma, delta, CheckMode::Exhaustive).unwrap();
        let (count, worst) = common::naive_flatness(&g, &lim);
        assert_eq!(r.violation_count, count, "seed {seed}");
        assert_eq!(r.violations.len(), worst.iter().flatten().count());
        for v in &r.violations {
            let w = worst[v.ell].as_ref().unwrap();
            assert_eq!(
                (w.0, w.1.as_slice()),
                (v.edges, v.subset.members()),
                "seed {seed} l={}",
                v.ell
            );
        }
        with_violations += (count > 0) as u32;
        assert!(!r.edge_count_ok || !r.is_flat || count == 0);
    }
    assert!(with_violations > 0);
}

#[test]
fn certificates_never_hold_on_monotone_curves() {
    for seed in 0..30 {
        let g = sample_planted(14, 4, seed).unwrap();
        let d = d_curve(&g, 5, Method::Exhaustive, DEFAULT_BUDGET, LocalOptions::default()).unwrap();
        let v: Vec<f64> = d.curve.points().iter().map(|p| p.value).collect();
        let monotone = v.windows(2).all(|w| w[0] <= w[1]) || v.windows(2).all(|w| w[0] >= w[1]);
        let cert = auto_certify(&g, 5, DEFAULT_BUDGET).unwrap();
        if monotone {
            assert!(!cert.holds);
        }
        if cert.holds {
            assert!(certify_ogp(&g, 5, &d, cert.zeta1, cert.zeta2, cert.r_n).unwrap().holds);
        }
    }
}
