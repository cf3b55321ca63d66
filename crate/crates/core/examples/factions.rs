//! Split a conflict network into two factions.
//!
//! cargo run -p shg --example factions

use shg::inference::{detect_factions, ConflictNetwork};
use shg::Hyperedge;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let west = ["usa", "uk", "france", "germany"];
    let east = ["russia", "iran", "syria", "belarus"];
    let mut net = ConflictNetwork::new();
    for (i, w) in west.iter().enumerate() {
        for (j, e) in east.iter().enumerate() {
            let (w, e): (Hyperedge, Hyperedge) = (format!("{w}/C").parse()?, format!("{e}/C").parse()?);
            // direction alternates; factions ignore it
            if (i + j) % 2 == 0 {
                net.add(w, e, None);
            } else {
                net.add(e, w, None);
            }
        }
    }
    let f = detect_factions(&net)?;
    let names = |s: &std::collections::BTreeSet<Hyperedge>| s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
    println!("faction a: {}", names(&f.a));
    println!("faction b: {}", names(&f.b));
    println!("unassigned: {}", names(&f.unassigned));
    println!("\n{}", net.to_dot(Some(&f)));
    Ok(())
}
