mod common;

use common::*;
use praxis_core::lang::{parse_program, Term};
use praxis_core::practice::{compile_plan_pattern, find_guided_path, LandmarkStatus};
use praxis_core::runtime::{Agent, AgentConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn graph_orders_match_pattern_language(seed in any::<u64>(), n in 1usize..=5) {
        let pp = random_pattern(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let g = compile_plan_pattern(&pp).unwrap();
        prop_assert!(g.validate().is_ok());
        prop_assert_eq!(graph_orders(&g), pattern_orders(&pp), "{:?}", pp);
    }

    #[test]
    fn guided_path_is_first_enumerated(seed in any::<u64>(), depth in 1usize..=4) {
        let src = random_library(&mut ChaCha8Rng::seed_from_u64(seed));
        let prog = parse_program(&src).unwrap();
        let mut a = Agent::new("a", prog.clone(), AgentConfig::default()).unwrap();
        let target = Term::atom("target");
        let got = find_guided_path(&mut a, &Term::atom("g0"), &target, depth)
            .map(|p| p.entries.iter().map(|e| (e.label.clone(), e.step)).collect::<Vec<_>>());
        let want = all_paths(&prog, &Term::atom("g0"), &target, depth, true).into_iter().next();
        prop_assert_eq!(got, want, "{}", src);
    }
}

const ROUTINE: &str = "
ready.
sp(routine, [ready]).
lm(routine, first, [], [(a, ok_one)], one).
lm(routine, second, [first], [(a, ok_two)], two).
!two.
@one +!one <- ok_one; +one.
@two +!two <- ok_two; +two.
";

fn practice_agent(src: &str) -> Agent {
    Agent::new(
        "a",
        parse_program(src).unwrap(),
        AgentConfig {
            meta_period: 1,
            ..AgentConfig::default()
        },
    )
    .unwrap()
}

fn status(a: &Agent, id: &str) -> Option<LandmarkStatus> {
    a.practice.as_ref().unwrap().landmark_status(id)
}

#[test]
fn landmarks_complete_in_order() {
    let mut a = practice_agent(ROUTINE);
    let run = drive(&mut a, 100, ok_outcome);
    let names: Vec<&str> = run.actions.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["ok_one", "ok_two"]);
    assert_eq!(status(&a, "first"), Some(LandmarkStatus::Completed));
    assert_eq!(status(&a, "second"), Some(LandmarkStatus::Completed));
    assert!(a.holds(&Term::compound(
        "practice_completed",
        vec![Term::atom("routine")]
    )));
    let pre_existing = run
        .trace
        .iter()
        .any(|t| t.payload["intention"] == 1 && t.payload["status"] == "suspended");
    assert!(
        pre_existing,
        "the goal adopted before selection was not suspended"
    );
}

#[test]
fn unmet_requirements_leave_agent_alone() {
    let mut a = practice_agent(&ROUTINE.replace("ready.\n", ""));
    let run = drive(&mut a, 30, ok_outcome);
    assert!(a.practice.as_ref().unwrap().selected_practice().is_none());
    let names: Vec<&str> = run.actions.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["ok_two"]);
}

#[test]
fn guards_are_dropped_on_completion() {
    let mut a = practice_agent(ROUTINE);
    drive(&mut a, 100, ok_outcome);
    assert!(a.guard_for(&Term::atom("one")).is_none());
    assert!(a.guard_for(&Term::atom("two")).is_none());
}

#[test]
fn practice_disabled_ignores_declarations() {
    let prog = parse_program(ROUTINE).unwrap();
    let a = Agent::new(
        "a",
        prog,
        AgentConfig {
            practice: false,
            ..AgentConfig::default()
        },
    )
    .unwrap();
    assert!(a.practice.is_none());
}

#[test]
fn morning_graph_from_declarations() {
    let m = care_manifest();
    let a = Agent::new(
        "robot",
        m.program(&m.agents[0]).unwrap(),
        AgentConfig::default(),
    )
    .unwrap();
    let g = &a
        .practice
        .as_ref()
        .unwrap()
        .practice("morning_routine")
        .unwrap()
        .graph;
    let priors: Vec<Vec<String>> = ["l1", "l2", "l3", "l4"]
        .iter()
        .map(|l| g.priors_of(l).into_iter().collect())
        .collect();
    assert_eq!(
        priors,
        vec![
            vec![],
            vec!["l1".to_string()],
            vec!["l1".to_string()],
            vec!["l2".to_string(), "l3".to_string()]
        ]
    );
}
