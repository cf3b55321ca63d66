//! Read hyperedges, infer their types and look at their parts.
//!
//! cargo run -p shg --example notation

use shg::Hyperedge;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in [
        "(is/P.sc berlin/C (the/M (of/B.ma capital/C germany/C)))",
        "(+/B.am tennis/C ball/C)",
        "(in/T 1994/C)",
        "(and/J (is/P a/C b/C) (is/P c/C d/C))",
        "(of/B capital/C)",
    ] {
        let e: Hyperedge = text.parse()?;
        match e.infer_type() {
            Ok(t) => println!("{e}  type {}  depth {}  atoms {}", t.as_char(), e.depth(), e.atoms().len()),
            Err(err) => println!("{e}  ill-typed: {err}"),
        }
        if let Ok(m) = e.main_concept() {
            println!("  main concept {m}");
        }
    }

    // single-element parentheses are the atom itself
    let a: Hyperedge = "(apple/C)".parse()?;
    println!("(apple/C) reads as {a}");

    if let Err(err) = "(is/P berlin/C".parse::<Hyperedge>() {
        println!("unbalanced input: {err}");
    }
    Ok(())
}
