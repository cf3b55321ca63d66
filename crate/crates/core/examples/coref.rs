//! Coreference sets for a seed concept and the seed's own assignment.
//!
//! cargo run -p shg --example coref

use shg::coref::{resolve, seed_concepts, CorefParams};
use shg::{Hyperedge, Store};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut store = Store::new();
    let mentions = [
        ("(+/B.am barack/C obama/C)", 12),
        ("(+/B.am president/C (+/B.am barack/C obama/C))", 3),
        ("(+/B.am president/C obama/C)", 4),
        ("(+/B.am michelle/C obama/C)", 3),
        ("(+/B.am (first/M lady/C) (+/B.am michelle/C obama/C))", 1),
        ("(+/B.am mr/C obama/C)", 2),
        ("obama/C", 2),
        ("(+/B.am north/C korea/C)", 5),
        ("(+/B.am south/C korea/C)", 5),
    ];
    for (e, n) in mentions {
        for i in 0..n {
            store.add(format!("(said{i}/P {e})").parse()?);
        }
    }

    let params = CorefParams::default();
    for seed in seed_concepts(&store) {
        let r = resolve(&store, &seed, &params)?;
        println!("seed {seed}");
        for (i, s) in r.sets.iter().enumerate() {
            let members: Vec<String> = s.members.iter().map(Hyperedge::to_string).collect();
            println!("  set {i}  p={:.2}  label {}\n    {}", s.p, s.label, members.join("\n    "));
        }
        let a = &r.assignment;
        let ratio = a.ratio().map(|r| format!("{r:.3}")).unwrap_or("undefined".into());
        match a.assigned {
            Some(i) => println!("  seed joins set {i} (d/δ {ratio})"),
            None => println!("  seed stays apart (best p {:.2}, d/δ {ratio})", a.best_p),
        }
    }
    Ok(())
}
