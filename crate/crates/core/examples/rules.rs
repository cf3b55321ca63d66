//! Apply rewrite rules, including the conjunction splitting rules.
//!
//! cargo run -p shg --example rules

use shg::inference::decompose_fully;
use shg::patterns::{apply_rule, parse_rules};
use shg::Hyperedge;

const RULES: &str = "
# active to a flat fact
(is/P.sc X/C Y/C) |- (is/P.sc Y X)
(gave/P.sio GIVER TAKER GIFT) |- (has/P.so TAKER GIFT)
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rules = parse_rules(RULES)?;
    for text in ["(is/P.sc berlin/C nice/C)", "(gave/P.sio john/C mary/C (a/M flower/C))"] {
        let e: Hyperedge = text.parse()?;
        for r in &rules {
            for out in apply_rule(&e, r)? {
                println!("{e}\n  {r}\n  => {out}");
            }
        }
    }

    println!();
    for text in [
        "(likes/P.so mary/C (and/J books/C flowers/C))",
        "(and/J (likes/P.so mary/C astronomy/C) (plays/P.o football/C))",
    ] {
        let e: Hyperedge = text.parse()?;
        println!("{e}");
        for d in decompose_fully(&e) {
            println!("  {d}");
        }
    }
    Ok(())
}
