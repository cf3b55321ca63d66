//! Claims, conflicts and their attributes.
//!
//! cargo run -p shg --example claims

use shg::inference::{detect_claim, detect_conflict, LemmaSets};
use shg::{Hyperedge, Store};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut store = Store::new();
    for l in ["(lemma/J says/P say/P)", "(lemma/J accuses/P accuse/P)", "(lemma/J said/P say/P)"] {
        store.add(l.parse()?);
    }
    let sets = LemmaSets::default();

    for text in [
        "(says/P.sr russia/C ('s/P.sc it/C ready/C))",
        "(said/P.sr (the/M minister/C) ((not/M was/P.sc) he/C tired/C))",
        "(likes/P.so mary/C books/C)",
    ] {
        let e: Hyperedge = text.parse()?;
        match detect_claim(&e, &store, &sets) {
            Some(c) => println!(
                "{e}\n  actor {}  claim {}  tense {:?}  negated {}  pronoun {:?}",
                c.actor, c.claim, c.tense, c.negated, c.pronoun
            ),
            None => println!("{e}\n  no claim"),
        }
    }

    let e: Hyperedge = "(accuses/P.sox france/C russia/C (over/T syria/C))".parse()?;
    if let Some(c) = detect_conflict(&e, &store, &sets) {
        println!("{e}\n  {} vs {} over {} (trigger {})", c.source, c.target, c.topic_content(), c.trigger);
    }
    Ok(())
}
