use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use ropacity::automata::{
    accessible, coaccessible, determinize, disjoint_union, io_product, is_prefix_closed, trim, Nfa,
};
use ropacity::generate::{random_model, random_nfa, rng, ModelParams};
use ropacity::semantics::{io_language_member, words_up_to};
use ropacity::{OpenDes, StateSet};

fn small_model(seed: u64) -> OpenDes {
    let mut r = rng(seed);
    let m = random_model(&mut r, &ModelParams::default());
    let marked: StateSet = (0..m.num_states()).filter(|_| r.gen_bool(0.4)).collect();
    m.with_marked(marked)
}

fn small_nfa(seed: u64, prefix_closed: bool) -> Nfa {
    random_nfa(&mut rng(seed), &["a", "b"], 3, prefix_closed)
}

/// Every `(input, output-or-silence)` step sequence up to length `k`.
fn io_words(m: &OpenDes, k: usize) -> Vec<Vec<(Option<usize>, Option<usize>)>> {
    let a = m.alphabet();
    let steps: Vec<(Option<usize>, Option<usize>)> = (0..a.inputs().len())
        .flat_map(|x| std::iter::once(None).chain((0..a.outputs().len()).map(Some)).map(move |d| (Some(x), d)))
        .collect();
    words_up_to(steps.len(), k)
        .into_iter()
        .map(|w| w.into_iter().map(|i| steps[i]).collect())
        .collect()
}

fn accepted_up_to(nfa: &Nfa, k: usize) -> BTreeSet<Vec<usize>> {
    words_up_to(nfa.events().len(), k).into_iter().filter(|w| nfa.accepts(w)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trim_is_idempotent(seed in any::<u64>()) {
        let m = small_model(seed);
        let t = trim(&m);
        prop_assert_eq!(trim(&t), t.clone());
        let n = small_nfa(seed, false);
        prop_assert_eq!(trim(&trim(&n)), trim(&n));
    }

    #[test]
    fn accessible_and_coaccessible_commute(seed in any::<u64>()) {
        let m = small_model(seed);
        prop_assert_eq!(accessible(&coaccessible(&m)), coaccessible(&accessible(&m)));
        let n = small_nfa(seed, false);
        prop_assert_eq!(accessible(&coaccessible(&n)), coaccessible(&accessible(&n)));
    }

    #[test]
    fn restrictions_preserve_marked_language(seed in any::<u64>()) {
        let n = small_nfa(seed, false);
        let lang = accepted_up_to(&n, 5);
        prop_assert_eq!(accepted_up_to(&accessible(&n), 5), lang.clone());
        prop_assert_eq!(accepted_up_to(&trim(&n), 5), lang);
    }

    #[test]
    fn determinize_keeps_the_language(seed in any::<u64>()) {
        let n = random_nfa(&mut rng(seed), &["a", "b"], 4, false);
        let all: BTreeSet<usize> = (0..n.events().len()).collect();
        let det = determinize(&n, &all);
        prop_assert!(det.dfa.is_deterministic());
        prop_assert_eq!(accepted_up_to(&det.dfa, 5), accepted_up_to(&n, 5));
    }

    #[test]
    fn determinize_projects_hidden_events(seed in any::<u64>()) {
        // Hide `b`. With three states, runs never need more than two `b`s in
        // a row, so words of length 8 cover every `a^n` with n <= 2.
        let n = small_nfa(seed, false);
        let a = n.event_index("a").unwrap();
        let det = determinize(&n, &BTreeSet::from([a]));
        let projected: BTreeSet<usize> = accepted_up_to(&n, 8)
            .into_iter()
            .map(|w| w.into_iter().filter(|&e| e == a).count())
            .collect();
        for len in 0..=2usize {
            prop_assert_eq!(det.dfa.accepts(&vec![0; len]), projected.contains(&len), "a^{}", len);
        }
    }

    #[test]
    fn prefix_closure_agrees_with_enumeration(seed in any::<u64>(), closed in any::<bool>()) {
        let n = small_nfa(seed, closed);
        let lang = accepted_up_to(&n, 8);
        let violated = lang.iter().any(|w| (0..w.len()).any(|i| !lang.contains(&w[..i])));
        if is_prefix_closed(&n) {
            prop_assert!(!violated);
        }
        if violated {
            prop_assert!(!is_prefix_closed(&n));
        }
        if closed {
            prop_assert!(is_prefix_closed(&n));
        }
    }

    #[test]
    fn union_language_is_the_union(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = small_model(s1);
        // Same alphabet, different structure.
        let b = {
            let other = small_model(s2);
            let doc = a.to_doc();
            let mut d2 = other.to_doc();
            d2.inputs = doc.inputs.clone();
            d2.outputs = doc.outputs.clone();
            d2.observable = doc.observable.clone();
            d2.edges.retain(|e| doc.inputs.contains(&e[1]) && (e[2] == "~" || doc.outputs.contains(&e[2])));
            OpenDes::from_doc(&d2).unwrap()
        };
        let (u, prov) = disjoint_union(&a, &b).unwrap();
        prop_assert_eq!(prov.len(), a.num_states() + b.num_states());
        for rho in io_words(&a, 3) {
            let expect = io_language_member(&a, &rho, true).unwrap() || io_language_member(&b, &rho, true).unwrap();
            prop_assert_eq!(io_language_member(&u, &rho, true).unwrap(), expect);
        }
    }

    #[test]
    fn io_product_marks_exactly_the_spec_language(seed in any::<u64>()) {
        let g = small_model(seed).with_marked(StateSet::new());
        let outputs: Vec<String> = g.alphabet().outputs().to_vec();
        let spec = random_nfa(&mut rng(seed ^ 0x5eed), &outputs, 3, false);
        let p = io_product(&g, &spec).unwrap();
        for rho in io_words(&g, 3) {
            let word: Vec<usize> = rho.iter().filter_map(|s| s.1).map(|d| spec.event_index(&outputs[d]).unwrap()).collect();
            let expect = io_language_member(&g, &rho, false).unwrap() && spec.accepts(&word);
            prop_assert_eq!(io_language_member(&p, &rho, true).unwrap(), expect, "{:?}", rho);
        }
    }
}

#[test]
fn d2_star_product_over_example() {
    let g = ropacity::bundled::fig1();
    let spec = Nfa::new(&["p"], &["d2"], &["p"], &["p"], &[("p", "d2", "p")]).unwrap();
    let p = io_product(&g, &spec).unwrap();
    let d2 = g.alphabet().output_index("d2").unwrap();
    for rho in io_words(&g, 2) {
        let only_d2 = rho.iter().all(|s| s.1.is_none_or(|d| d == d2));
        let expect = io_language_member(&g, &rho, false).unwrap() && only_d2;
        assert_eq!(io_language_member(&p, &rho, true).unwrap(), expect, "{rho:?}");
    }
}
