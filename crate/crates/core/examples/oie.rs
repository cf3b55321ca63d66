//! Open information extraction from printed hyperedges.
//!
//! cargo run -p shg --example oie

use shg::inference::extract_oie;
use shg::Hyperedge;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in [
        "(is/P.scx (of/B.ma (the/M population/C) (the/M (special/M wards/C))) ((over/M (9/M million/M)) people/C) (with/T (exceeding/P.so (of/B.ma (the/M (total/M population/C)) (the/M prefecture/C)) (13/M million/C))))",
        "(+/B.mm (the/M (prolific/M (+/B.am film/C composer/C))) (+/B.am christophe/C beck/C))",
        "(graduated/P.sx gonzales/C (from/T (in/B.ma (+/B.am crescent/C school/C) (,/J toronto/C (,/J ontario/C canada/C)))))",
    ] {
        let e: Hyperedge = text.parse()?;
        println!("{e}");
        for t in extract_oie(&e, None) {
            println!("  {t}");
            println!("  {}", t.to_tsv());
        }
    }
    Ok(())
}
