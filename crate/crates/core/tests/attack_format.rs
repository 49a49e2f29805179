use proptest::prelude::*;

use ropacity::attack::{replay, synthesize_attack};
use ropacity::dot::{model_to_dot, observer_to_dot};
use ropacity::format::{load_model, model_to_json, parse_model, save_model};
use ropacity::generate::{random_model, rng, ModelParams};
use ropacity::observer::{all_labels, build_rcso_observer};
use ropacity::semantics::{estimate_observed, words_up_to, Label};
use ropacity::verify::leaks;
use ropacity::OpenDes;

fn model(seed: u64, silent_inputs: bool) -> OpenDes {
    let params = ModelParams {
        silent_inputs,
        ..Default::default()
    };
    random_model(&mut rng(seed), &params)
}

/// Every label word of length at most `k`, shortest first.
fn label_words(m: &OpenDes, k: usize) -> Vec<Vec<Label>> {
    let labels = all_labels(m.alphabet());
    let mut words = words_up_to(labels.len(), k);
    words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    words.into_iter().map(|w| w.into_iter().map(|i| labels[i]).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// A plan is as short as possible: brute force over label words finds
    /// no shorter leak, and the first leak of the plan's length is the plan.
    #[test]
    fn plans_are_shortest(seed in any::<u64>(), silent in any::<bool>()) {
        let m = model(seed, silent);
        let nonsecret = m.nonsecret();
        let plan = synthesize_attack(&m, m.secret()).unwrap();
        let k = plan.as_ref().map_or(2, |p| p.labels.len().min(3));
        let first = label_words(&m, k).into_iter().find(|w| {
            let e = estimate_observed(&m, w).unwrap();
            leaks(&e, m.secret(), &nonsecret)
        });
        match (&plan, first) {
            (Some(p), Some(w)) => prop_assert_eq!(&p.labels, &w),
            (Some(p), None) => prop_assert!(p.labels.len() > k),
            (None, found) => prop_assert!(found.is_none()),
        }
        if let Some(p) = &plan {
            prop_assert!(replay(&m, p).unwrap());
        }
    }

    #[test]
    fn tampered_plans_do_not_replay(seed in any::<u64>()) {
        let m = model(seed, false);
        if let Some(mut p) = synthesize_attack(&m, m.secret()).unwrap() {
            p.inputs.push(0);
            prop_assert!(!replay(&m, &p).unwrap());
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), silent in any::<bool>()) {
        let m = model(seed, silent);
        let text = model_to_json(&m);
        let back = parse_model(&text, "random.odes".as_ref()).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(model_to_json(&back), text);
    }

    #[test]
    fn dot_is_byte_stable(seed in any::<u64>()) {
        let m = model(seed, true);
        prop_assert_eq!(model_to_dot(&m), model_to_dot(&m.clone()));
        let a = observer_to_dot(&build_rcso_observer(&m), Some(m.secret()));
        let b = observer_to_dot(&build_rcso_observer(&m), Some(m.secret()));
        prop_assert_eq!(a, b);
    }
}

#[test]
fn save_and_load_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.odes");
    let m = ropacity::bundled::fig1();
    save_model(&m, &path).unwrap();
    assert_eq!(load_model(&path).unwrap(), m);
}

#[test]
fn example_attack_is_three_steps() {
    let m = ropacity::bundled::fig1();
    let plan = synthesize_attack(&m, &m.state_set(&["3"]).unwrap()).unwrap().unwrap();
    let names: Vec<String> = plan.labels.iter().map(|l| l.display(m.alphabet()).to_string()).collect();
    assert_eq!(names, ["(x1,d1)", "(x1,d2)", "(x2,a)"]);
    assert!(replay(&m, &plan).unwrap());
}

#[test]
fn parse_errors_carry_a_position() {
    let err = parse_model("{\n  \"states\": [\n", "broken.odes".as_ref()).unwrap_err();
    let text = err.to_string();
    assert!(text.contains("broken.odes"), "{text}");
    assert!(matches!(err, ropacity::Error::Parse { line, .. } if line >= 2));
}
