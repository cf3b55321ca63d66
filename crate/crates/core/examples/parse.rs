//! Train the α classifier on the bundled annotations and parse every sentence.
//!
//! cargo run -p shg --example parse

use std::fs::File;
use std::io::BufReader;

use shg::alpha::{labeled, AnnotatedSentence, FeatureSet, Forest, ForestParams};
use shg::beta::{parse_sentence, RoleTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/alpha_train.jsonl");
    let sentences = AnnotatedSentence::read_jsonl(BufReader::new(File::open(path)?))?;
    let data = labeled(&sentences)?;
    let forest = Forest::train(&data, &FeatureSet::f5(), &ForestParams { seed: 1, ..Default::default() })?;
    println!("training accuracy {:.3}", forest.accuracy(&data));

    for s in &sentences {
        let p = parse_sentence(s, &forest, &RoleTable::default())?;
        println!("{}\n  {}", s.text, p.edge);
        for l in &p.lemma_edges {
            println!("\t{l}");
        }
    }
    Ok(())
}
