//! Rank the most common edge shapes in a small corpus.
//!
//! cargo run -p shg --example mining

use shg::learning::{generalizations, mine_patterns, GeneralizationConfig};
use shg::{Hyperedge, Store};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = GeneralizationConfig::default();
    let aragorn: Hyperedge = "(is/P.sc aragorn/C (of/B.ma king/C gondor/C))".parse()?;
    println!("{aragorn}");
    for p in generalizations(&aragorn, &cfg) {
        println!("  {p}");
    }

    let mut store = Store::new();
    for e in [
        "(is/P.sc aragorn/C (of/B.ma king/C gondor/C))",
        "(is/P.sc frodo/C (of/B.ma friend/C sam/C))",
        "(is/P.sc berlin/C nice/C)",
        "(is/P.sc (+/B.am tennis/C ball/C) round/C)",
        "(says/P.sr alice/C (is/P.sc dogs/C nice/C))",
        "(likes/P.so mary/C (and/J books/C flowers/C))",
    ] {
        store.add(e.parse()?);
    }
    println!();
    for m in mine_patterns(&store, &cfg).iter().take(10) {
        println!("{:>3}  {}", m.count, m.pattern);
    }
    Ok(())
}
