//! A scripted pattern-learning session: assign variables, then review matches.
//!
//! cargo run -p shg --example learning

use std::collections::BTreeMap;

use shg::learning::{Criterion, RefineParams, Session};
use shg::{Hyperedge, Store};

fn h(s: &str) -> Hyperedge {
    s.parse().unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut store = Store::new();
    for e in [
        "(says/P.sr alice/C (are/P.sc dogs/C nice/C))",
        "(said/P.sr bob/C (is/P.sc it/C late/C))",
        "(says/P.sr carol/C (is/P.sc earth/C round/C))",
        "(denies/P.sr dave/C (is/P.sc it/C true/C))",
        "(says/P.sr alice/C (is/P.sc sky/C blue/C))",
        "(lemma/J says/P say/P)",
        "(lemma/J said/P say/P)",
        "(lemma/J denies/P deny/P)",
    ] {
        store.add(h(e));
    }

    let mut s = Session::new("demo", &store, Criterion::PredicateFrequency { rank: 0 })?;
    println!("candidate {}", s.candidate);
    let claim = s.candidate.args()[1].clone();
    let actor = s.candidate.args()[0].clone();
    s.assign(BTreeMap::from([("ACTOR".to_string(), actor), ("CLAIM".to_string(), claim)]))?;
    // widen the predicate so the review sees every sr-relation
    let wide = "(*/P.{sr} ACTOR CLAIM)".parse()?;
    s.pattern = Some(wide);
    println!("pattern {}", s.pattern.as_ref().unwrap());

    let params = RefineParams::default();
    while let Some(e) = s.pending(&store).into_iter().next() {
        let accept = !e.to_string().starts_with("(denies");
        let q = s.feedback(e.clone(), accept, &store, &params)?;
        println!("{} {e}\n  pattern {q}", if accept { "accept" } else { "reject" });
    }
    println!("consistent: {}", s.is_consistent(&store));
    for line in &s.history {
        println!("  {line}");
    }
    Ok(())
}
