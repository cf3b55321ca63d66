//! One line per acceptance criterion. Each check reuses the suite code it
//! names; a panic inside a check marks that line as failed.

use std::panic;
use std::process::ExitCode;
use std::time::Instant;

#[allow(dead_code, unused_imports)]
#[path = "coref_suite.rs"]
mod coref_suite;
#[allow(dead_code, unused_imports)]
#[path = "metrics_oracle.rs"]
mod metrics_oracle;

type Check = (&'static str, &'static [fn()]);

const CHECKS: &[Check] = &[
    ("type system golden examples", &[notation_golden::check_universal_dependency_examples]),
    (
        "beta golden sentences",
        &[
            beta_golden::check_single_rule_applications,
            beta_golden::check_deepest_window_wins,
            beta_golden::check_folding_examples,
            beta_golden::check_hand_annotated_examples,
            beta_golden::check_full_pipeline_examples,
        ],
    ),
    ("conjunction decomposition", &[inference_suite::check_conjunction_rules]),
    ("open information extraction", &[inference_suite::check_oie_examples]),
    ("metrics against naive oracle", &[metrics_oracle::check_metrics_match_naive_oracle]),
    (
        "pattern matcher against exhaustive oracle",
        &[matcher_oracle::check_matcher_agrees_with_exhaustive_oracle, matcher_oracle::check_printed_match_examples],
    ),
    (
        "claims and conflicts",
        &[
            inference_suite::check_claims_with_anaphora,
            inference_suite::check_predicates_and_categories,
            inference_suite::check_conflicts,
            inference_suite::check_detection_respects_lemma_sets,
        ],
    ),
    (
        "coreference sets and seed assignment",
        &[
            coref_suite::check_obama_sets,
            coref_suite::check_dominant_set_is_assigned,
            coref_suite::check_twin_sets_stay_ambiguous,
            coref_suite::check_seed_never_alone_stays_unassigned,
            coref_suite::check_raising_thresholds_never_assigns,
        ],
    ),
    (
        "alpha classifier properties",
        &[
            alpha_suite::check_training_is_deterministic,
            alpha_suite::check_conflict_free_training_set_is_learned_exactly,
            alpha_suite::check_held_out_accuracy_when_dep_decides,
        ],
    ),
    ("two-bloc faction detection", &[inference_suite::check_two_blocs_are_recovered]),
    ("pattern mining on the Aragorn fixture", &[learning_suite::check_mining_the_aragorn_fixture]),
];

fn message(e: &(dyn std::any::Any + Send)) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panicked".into())
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, steps) in CHECKS {
        let start = Instant::now();
        let outcome = steps.iter().try_for_each(|f| panic::catch_unwind(f).map_err(|e| message(&*e)));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS  {name} ({secs:.2}s)"),
            Err(m) => {
                failed += 1;
                println!("FAIL  {name}: {}", m.lines().next().unwrap_or(""));
            }
        }
    }
    println!("{} of {} criteria passed", CHECKS.len() - failed, CHECKS.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
