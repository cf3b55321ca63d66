//! Match patterns against edges and print the variable bindings.
//!
//! cargo run -p shg --example patterns

use shg::patterns::{match_pattern, Pattern, Query, Value};
use shg::{Hyperedge, Store};

fn show(e: &Hyperedge, p: &Pattern) {
    let bindings = match_pattern(e, p);
    if bindings.is_empty() {
        println!("{p}\n  no match");
    }
    for b in bindings {
        let vars: Vec<String> = b
            .iter()
            .map(|(k, v)| match v {
                Value::One(e) => format!("{k}={e}"),
                Value::Many(v) => format!("{k}=[{}]", v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")),
            })
            .collect();
        println!("{p}\n  {}", vars.join(", "));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e: Hyperedge = "(says/P.sr alice/C (is/P.sc (the/M sky/C) blue/C))".parse()?;
    println!("edge {e}\n");
    for p in [
        "(says/P ACTOR CLAIM)",
        "(*/P.{sr} ACTOR CLAIM/R)",
        "(*/P.{rs} ACTOR CLAIM)",
        "(PRED/P ...)",
        "(says/P ACTOR (is/P.sc X/C *))",
        "(*/P.{s}-x ACTOR ...)",
        "(*/P.so X Y)",
    ] {
        show(&e, &p.parse()?);
    }

    // auxiliary patterns look for lemma edges in a store
    let mut store = Store::new();
    store.add(e.clone());
    store.add("(lemma/J says/P say/P)".parse()?);
    let q: Query = "(PRED/P ACTOR CLAIM) & (lemma/J >PRED/P say/P)".parse()?;
    println!("\n{q}\n  {} binding(s)", q.matches(&e, &store).len());
    Ok(())
}
