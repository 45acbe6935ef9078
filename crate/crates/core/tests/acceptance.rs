//! Acceptance suite: one test per pinned claim about the library, each
//! printing a single `acceptance <name>: PASS|FAIL` line before asserting.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see every
//! line; failures list the sub-checks that broke.

use std::collections::BTreeSet;
use std::time::Instant;

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cayley_ci::autengine::{analyze, automorphism_group, canonical_form};
use cayley_ci::citester::{
    automorphism_perm, is_ci_babai, is_ci_both, is_ci_definitional, m_dci_group_status,
    m_dci_status, right_regular, Budget, Mode, NoStore, Verdict,
};
use cayley_ci::digraph::{cayley, Digraph};
use cayley_ci::group::{ConnectionSet, GroupElement, GroupSpec};
use cayley_ci::perm::Perm;
use cayley_ci::permgroup::{Partition, PermGroup};

fn d(n: u64) -> GroupSpec {
    GroupSpec::dihedral(n).unwrap()
}

fn z(n: u64) -> GroupSpec {
    GroupSpec::cyclic(n).unwrap()
}

fn set(spec: &GroupSpec, text: &str) -> ConnectionSet {
    ConnectionSet::parse(spec, text).unwrap()
}

fn graph(spec: &GroupSpec, text: &str) -> Digraph {
    cayley(spec, &set(spec, text)).unwrap()
}

fn non_identity(spec: &GroupSpec) -> Vec<GroupElement> {
    spec.elements()
        .into_iter()
        .filter(|g| !g.is_identity())
        .collect()
}

/// Collects sub-check failures and reports the criterion as one line.
struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Criterion {
        Criterion {
            name,
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, label: String, ok: bool) {
        if !ok {
            self.failures.push(label);
        }
    }

    fn finish(self) {
        let ok = self.failures.is_empty();
        println!(
            "acceptance {}: {}",
            self.name,
            if ok { "PASS" } else { "FAIL" }
        );
        assert!(ok, "acceptance {} failed: {:?}", self.name, self.failures);
    }
}

fn even_family_text(n: u64) -> String {
    format!("a,a^-1,a*b,a^{}*b", n / 2 + 1)
}

#[test]
fn valency_4_digraph_sweeps() {
    let mut criterion = Criterion::new("valency_4_digraph_sweeps");
    let budget = Budget {
        materialization_cap: 3_000_000,
        ..Budget::default()
    };
    for n in [3u64, 5, 7] {
        let result = m_dci_status(&d(n), 4, Mode::Digraph, false, &budget, &NoStore).unwrap();
        criterion.expect(
            format!("n={n} digraph sweep finds no counterexamples"),
            result.counterexamples.is_empty(),
        );
    }
    for n in [4u64, 6, 8, 9] {
        let spec = d(n);
        let result = m_dci_status(&spec, 4, Mode::Digraph, false, &budget, &NoStore).unwrap();
        criterion.expect(
            format!("n={n} digraph sweep finds a counterexample"),
            !result.counterexamples.is_empty(),
        );
        for example in &result.counterexamples {
            let report = is_ci_both(&spec, &example.set, &budget).unwrap();
            criterion.expect(
                format!("n={n} set {} fails both deciders", example.set),
                report.verdict == Verdict::NotCi,
            );
        }
    }
    criterion.finish();
}

#[test]
fn valency_4_graph_sweeps() {
    let mut criterion = Criterion::new("valency_4_graph_sweeps");
    let budget = Budget::default();
    for n in [3u64, 5, 7, 9] {
        let result = m_dci_status(&d(n), 4, Mode::Graph, false, &budget, &NoStore).unwrap();
        criterion.expect(
            format!("n={n} graph sweep finds no counterexamples"),
            result.counterexamples.is_empty(),
        );
    }
    for n in [4u64, 6, 8] {
        let spec = d(n);
        let result = m_dci_status(&spec, 4, Mode::Graph, false, &budget, &NoStore).unwrap();
        let expected = set(&spec, &even_family_text(n)).normalized(&spec);
        criterion.expect(
            format!("n={n} graph sweep reports the orbit of {expected}"),
            result.counterexamples.iter().any(|e| e.set == expected),
        );
    }
    criterion.finish();
}

#[test]
fn automorphism_order_fixtures() {
    let mut criterion = Criterion::new("automorphism_order_fixtures");
    let cases: &[(u64, &str, u128)] = &[
        (3, "b,a*b,a^2*b", 72),
        (7, "b,a*b,a^3*b", 336),
        (13, "b,a*b,a^4*b", 78),
        (4, "a,a^3,a*b,a^3*b", 1152),
        (3, "a,a^-1,a^2*b,b", 48),
        (5, "a,a^-1,a^2*b,b", 320),
        (7, "a,a^-1,a^2*b,b", 1792),
        (6, "a,a^5,a*b,a^4*b", 48),
    ];
    for &(n, text, expected) in cases {
        let order = analyze(&graph(&d(n), text)).aut_order;
        criterion.expect(
            format!("n={n} set {text} has automorphism group of order {expected}"),
            order == Some(expected),
        );
    }

    let spec = d(6);
    let aut = automorphism_group(&graph(&spec, "a,a^5,a*b,a^4*b"));
    let stabilizer = aut.stabilizer(0).unwrap();
    let observed: Vec<Perm> = stabilizer.elements().unwrap().to_vec();
    let sigma_a = spec.aut(1, 3).unwrap();
    let sigma_b = spec.aut(-1, 2).unwrap();
    let mut expected = vec![
        Perm::identity(spec.order()),
        automorphism_perm(&spec, sigma_a),
        automorphism_perm(&spec, sigma_b),
        automorphism_perm(&spec, spec.compose_auts(sigma_a, sigma_b)),
    ];
    expected.sort_unstable();
    criterion.expect(
        "n=6 identity-vertex stabilizer is the set-fixing group automorphisms".to_string(),
        observed == expected,
    );
    criterion.finish();
}

#[test]
fn even_family_regular_subgroups() {
    let mut criterion = Criterion::new("even_family_regular_subgroups");
    for n in [6u64, 8] {
        let spec = d(n);
        let aut = automorphism_group(&graph(&spec, &even_family_text(n)));
        let translations = right_regular(&spec);
        criterion.expect(
            format!("n={n} right translations are normal"),
            aut.is_normal(&translations).unwrap(),
        );
        let subgroups = aut.regular_dihedral_subgroups(spec.order()).unwrap();
        let rival = subgroups
            .iter()
            .find(|l| !l.same_elements(&translations).unwrap());
        criterion.expect(
            format!("n={n} a second regular dihedral subgroup exists"),
            rival.is_some(),
        );
        if let Some(l) = rival {
            criterion.expect(
                format!("n={n} the second subgroup is not conjugate to the translations"),
                aut.are_conjugate_subgroups(l, &translations)
                    .unwrap()
                    .is_none(),
            );
        }
    }

    let spec = d(4);
    let aut = automorphism_group(&graph(&spec, "a,a^3,a*b,a^3*b"));
    let subgroups = aut.regular_dihedral_subgroups(spec.order()).unwrap();
    let mut class_representatives: Vec<&PermGroup> = Vec::new();
    for subgroup in &subgroups {
        let conjugate_to_known = class_representatives.iter().any(|rep| {
            aut.are_conjugate_subgroups(rep, subgroup)
                .unwrap()
                .is_some()
        });
        if !conjugate_to_known {
            class_representatives.push(subgroup);
        }
    }
    criterion.expect(
        format!(
            "n=4 regular dihedral subgroups split into {} >= 2 conjugacy classes",
            class_representatives.len()
        ),
        class_representatives.len() >= 2,
    );
    criterion.finish();
}

#[test]
fn odd_family_block_structure() {
    let mut criterion = Criterion::new("odd_family_block_structure");
    for n in [3u64, 5, 7, 9] {
        let spec = d(n);
        let s = set(&spec, "a,a^-1,a^2*b,b");
        let g = cayley(&spec, &s).unwrap();
        let aut = automorphism_group(&g);

        let blocks: Vec<Vec<usize>> = (0..n as i64)
            .map(|i| {
                vec![
                    spec.index_of(spec.rotation(i)),
                    spec.index_of(spec.element(1 - i, true).unwrap()),
                ]
            })
            .collect();
        let partition = Partition::new(spec.order(), blocks).unwrap();

        let kernel = aut.kernel_on_partition(&partition).unwrap();
        criterion.expect(
            format!("n={n} kernel on the pair partition has order 2^{n}"),
            kernel.order() == Some(1u128 << n),
        );
        criterion.expect(
            format!("n={n} kernel has exponent 2"),
            kernel
                .elements()
                .unwrap()
                .iter()
                .all(|k| k.then(k).is_identity()),
        );
        let block_action = aut.induced_block_action(&partition).unwrap();
        criterion.expect(
            format!("n={n} block action has order {}", 2 * n),
            block_action.order() == Some(2 * n as u128),
        );

        criterion.expect(
            format!("n={n} quotient by the pair partition is the {n}-cycle"),
            canonical_form(&g.quotient(&partition).unwrap())
                == canonical_form(&Digraph::cycle(n as usize).unwrap()),
        );
        let product = Digraph::cycle(n as usize)
            .unwrap()
            .lex_product(&Digraph::empty_graph(2).unwrap())
            .unwrap();
        criterion.expect(
            format!("n={n} graph equals the cycle blown up by empty pairs"),
            canonical_form(&product) == canonical_form(&g),
        );

        let report = is_ci_both(&spec, &s, &Budget::default()).unwrap();
        criterion.expect(
            format!("n={n} verdict is CI"),
            report.verdict == Verdict::Ci,
        );
        criterion.expect(
            format!("n={n} translations are not normal"),
            !report.is_normal_cayley,
        );
    }
    criterion.finish();
}

#[test]
fn method_agreement() {
    let mut criterion = Criterion::new("method_agreement");
    let budget = Budget::default();

    for n in [3u64, 5] {
        let spec = d(n);
        let elements = non_identity(&spec);
        let mut checked = 0u64;
        let mut disagreements = 0u64;
        for m in 1..=4usize {
            for combo in elements.iter().copied().combinations(m) {
                let s = ConnectionSet::new(&spec, combo).unwrap();
                let definitional = is_ci_definitional(&spec, &s, &budget).unwrap();
                let babai = is_ci_babai(&spec, &s, &budget).unwrap();
                checked += 1;
                if definitional.verdict != babai.verdict {
                    disagreements += 1;
                }
            }
        }
        criterion.expect(
            format!("dihedral n={n} agrees on all {checked} sets of size <= 4"),
            disagreements == 0,
        );
    }

    {
        let spec = d(7);
        let elements = non_identity(&spec);
        let not_ci_by_size: Vec<BTreeSet<ConnectionSet>> = (1..=4usize)
            .map(|m| {
                m_dci_status(&spec, m, Mode::Digraph, false, &budget, &NoStore)
                    .unwrap()
                    .counterexamples
                    .into_iter()
                    .map(|e| e.set)
                    .collect()
            })
            .collect();
        let weights = [13u32, 78, 286, 715];
        let total: u32 = weights.iter().sum();
        let mut rng = ChaCha8Rng::seed_from_u64(2026);
        let mut disagreements = 0u64;
        for _ in 0..500 {
            let mut pick = rng.gen_range(0..total);
            let mut m = weights.len();
            for (i, &w) in weights.iter().enumerate() {
                if pick < w {
                    m = i + 1;
                    break;
                }
                pick -= w;
            }
            let mut indices: Vec<usize> = (0..elements.len()).collect();
            for i in 0..m {
                let j = rng.gen_range(i..indices.len());
                indices.swap(i, j);
            }
            let s = ConnectionSet::new(&spec, indices[..m].iter().map(|&i| elements[i])).unwrap();
            let definitional_not_ci = not_ci_by_size[m - 1].contains(&s.normalized(&spec));
            let babai = is_ci_babai(&spec, &s, &budget).unwrap();
            if definitional_not_ci != (babai.verdict == Verdict::NotCi) {
                disagreements += 1;
            }
        }
        criterion.expect(
            "dihedral n=7 agrees on 500 sampled sets of size <= 4".to_string(),
            disagreements == 0,
        );
    }

    for n in [5u64, 7, 9] {
        let spec = z(n);
        let elements = non_identity(&spec);
        let mut checked = 0u64;
        let mut disagreements = 0u64;
        for combo in elements.iter().copied().combinations(4) {
            let s = ConnectionSet::new(&spec, combo).unwrap();
            let definitional = is_ci_definitional(&spec, &s, &budget).unwrap();
            let babai = is_ci_babai(&spec, &s, &budget).unwrap();
            checked += 1;
            if definitional.verdict != babai.verdict {
                disagreements += 1;
            }
        }
        criterion.expect(
            format!("cyclic n={n} agrees on all {checked} sets of size 4"),
            disagreements == 0,
        );
    }
    criterion.finish();
}

fn next_permutation(items: &mut [usize]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

fn brute_force_aut_order(g: &Digraph) -> u128 {
    let n = g.vertex_count();
    let rows: Vec<u64> = (0..n)
        .map(|v| {
            let mut mask = 0u64;
            for h in 0..n {
                if g.has_arc(v, h) {
                    mask |= 1 << h;
                }
            }
            mask
        })
        .collect();
    let mut images: Vec<usize> = (0..n).collect();
    let mut count = 0u128;
    loop {
        let preserves = (0..n).all(|v| {
            let mut mapped = 0u64;
            for (h, &image) in images.iter().enumerate() {
                if rows[v] >> h & 1 == 1 {
                    mapped |= 1 << image;
                }
            }
            mapped == rows[images[v]]
        });
        if preserves {
            count += 1;
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    count
}

#[test]
fn engine_matches_brute_force() {
    let mut criterion = Criterion::new("engine_matches_brute_force");
    let started = Instant::now();

    let mut cases: Vec<Digraph> = Vec::new();
    let dihedral = d(3);
    let dihedral_elements = non_identity(&dihedral);
    for m in 1..=3usize {
        for combo in dihedral_elements.iter().copied().combinations(m) {
            let s = ConnectionSet::new(&dihedral, combo).unwrap();
            cases.push(cayley(&dihedral, &s).unwrap());
        }
    }
    for n in 2..=8u64 {
        let spec = z(n);
        let elements = non_identity(&spec);
        for m in 1..=3usize.min(elements.len()) {
            for combo in elements.iter().copied().combinations(m) {
                let s = ConnectionSet::new(&spec, combo).unwrap();
                cases.push(cayley(&spec, &s).unwrap());
            }
        }
    }
    let structured = cases.len();

    let mut rng = ChaCha8Rng::seed_from_u64(2027);
    for _ in 0..100 {
        let v = rng.gen_range(2..=8usize);
        let density = rng.gen_range(0.1..0.9);
        let mut g = Digraph::new(v).unwrap();
        for tail in 0..v {
            for head in 0..v {
                if tail != head && rng.gen_bool(density) {
                    g.add_arc(tail, head).unwrap();
                }
            }
        }
        cases.push(g);
    }

    let mismatches = cases
        .iter()
        .filter(|g| analyze(g).aut_order != Some(brute_force_aut_order(g)))
        .count();
    let elapsed = started.elapsed();
    criterion.expect(
        format!(
            "{} Cayley digraphs and 100 random digraphs agree with brute force",
            structured
        ),
        mismatches == 0,
    );
    criterion.expect(
        format!("finished in {:.1}s, within 60s", elapsed.as_secs_f64()),
        elapsed.as_secs() < 60,
    );
    criterion.finish();
}

#[test]
fn group_automorphism_orders() {
    let mut criterion = Criterion::new("group_automorphism_orders");
    for n in 3..=15u64 {
        let spec = d(n);
        let mismatches = spec
            .automorphisms()
            .into_iter()
            .filter(|&aut| automorphism_perm(&spec, aut).order() != spec.aut_order(aut) as u128)
            .count();
        criterion.expect(
            format!("n={n} group automorphism orders match their vertex permutations"),
            mismatches == 0,
        );
    }
    criterion.finish();
}

#[test]
fn small_valency_and_cyclic_sweeps() {
    let mut criterion = Criterion::new("small_valency_and_cyclic_sweeps");
    let budget = Budget::default();
    for n in [3u64, 5, 7, 9] {
        let results =
            m_dci_group_status(&d(n), 3, Mode::Digraph, false, &budget, &NoStore).unwrap();
        criterion.expect(
            format!("dihedral n={n} valencies 1..=3 are all CI"),
            results.iter().all(|r| r.counterexamples.is_empty()),
        );
    }
    for n in [5u64, 7, 11] {
        let result = m_dci_status(&z(n), 4, Mode::Digraph, true, &budget, &NoStore).unwrap();
        criterion.expect(
            format!("connected cyclic n={n} valency 4 is all CI"),
            result.counterexamples.is_empty(),
        );
    }
    criterion.finish();
}
