//! Degree, neighbourhood and deep degree in a small store.
//!
//! cargo run -p shg --example metrics

use shg::{Hyperedge, Store};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut store = Store::new();
    for e in [
        "(is/P.sc berlin/C (the/M (of/B.ma capital/C germany/C)))",
        "(is/P.sc berlin/C big/C)",
        "(says/P.sr merkel/C (is/P.sc berlin/C big/C))",
        "(lives/P.sx merkel/C (in/T berlin/C))",
    ] {
        store.add(e.parse()?);
    }
    for e in ["berlin/C", "(is/P.sc berlin/C big/C)", "germany/C", "merkel/C"] {
        let e: Hyperedge = e.parse()?;
        println!("{e}\n  d={}  δ={}  |Δ|={}", store.degree(&e), store.deep_degree(&e), store.neighborhood(&e).len());
    }

    let mut buf = Vec::new();
    store.write_to(&mut buf)?;
    let back = Store::read_from(&buf[..])?;
    println!("\nreloaded {} edges, d(berlin/C)={}", back.len(), back.degree(&"berlin/C".parse()?));
    Ok(())
}
