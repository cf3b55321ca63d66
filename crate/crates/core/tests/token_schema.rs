use std::fs::File;
use std::io::BufReader;

use shg::alpha::{labeled, AnnotatedSentence, FeatureSet, Forest, ForestParams, SentenceError};
use shg::beta::{parse_sentence, RoleTable};
use shg::Hyperedge;

/// What the annotation adapter writes for "Berlin is nice."
const BERLIN: &str = r#"{"text": "Berlin is nice.", "tokens": [
{"text": "Berlin", "lemma": "Berlin", "tag": "NNP", "pos": "PROPN", "dep": "nsubj", "head": 1, "ner": "GPE", "shape": "Xxxxx", "is_punct": false},
{"text": "is", "lemma": "be", "tag": "VBZ", "pos": "AUX", "dep": "ROOT", "head": 1, "ner": "", "shape": "xx", "is_punct": false},
{"text": "nice", "lemma": "nice", "tag": "JJ", "pos": "ADJ", "dep": "acomp", "head": 1, "ner": "", "shape": "xxxx", "is_punct": false},
{"text": ".", "lemma": ".", "tag": ".", "pos": "PUNCT", "dep": "punct", "head": 1, "ner": "", "shape": ".", "is_punct": true}]}"#;

fn one_line(s: &str) -> String {
    s.replace('\n', "")
}

#[test]
fn adapter_output_is_accepted() {
    let line = one_line(BERLIN);
    let all = AnnotatedSentence::read_jsonl(line.as_bytes()).unwrap();
    let s = &all[0];
    assert_eq!(s.tokens.len(), 4);
    assert!(s.tokens[3].is_punct);
    assert_eq!(s.root(), Some(1));
    assert_eq!(s.tokens[1].head, 1);
    assert_eq!(s.labels, None);
    // self-lemma tokens carry their own text as lemma
    assert_eq!(s.tokens[2].lemma, s.tokens[2].text);

    let back = serde_json::to_string(s).unwrap();
    assert!(!back.contains("labels"));
    assert_eq!(AnnotatedSentence::from_json(&back).unwrap(), *s);
}

#[test]
fn adapter_output_parses() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/alpha_train.jsonl");
    let corpus = AnnotatedSentence::read_jsonl(BufReader::new(File::open(path).unwrap())).unwrap();
    let f = Forest::train(&labeled(&corpus).unwrap(), &FeatureSet::f5(), &ForestParams { trees: 20, seed: 1, ..Default::default() }).unwrap();
    let s = AnnotatedSentence::from_json(&one_line(BERLIN)).unwrap();
    let p = parse_sentence(&s, &f, &RoleTable::default()).unwrap();
    assert_eq!(p.edge, "(is/P.sc berlin/C nice/C)".parse::<Hyperedge>().unwrap());
}

#[test]
fn training_lines_roundtrip() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/alpha_train.jsonl");
    let text = std::fs::read_to_string(path).unwrap();
    let corpus = AnnotatedSentence::read_jsonl(text.as_bytes()).unwrap();
    assert_eq!(corpus.len(), text.lines().filter(|l| !l.trim().is_empty()).count());
    for s in &corpus {
        assert_eq!(s.labels.as_ref().map(Vec::len), Some(s.tokens.len()));
        let again = AnnotatedSentence::from_json(&serde_json::to_string(s).unwrap()).unwrap();
        assert_eq!(&again, s);
    }
}

#[test]
fn malformed_lines_are_reported_with_their_number() {
    let good = one_line(BERLIN);
    let cases = [
        good.replace(r#""dep": "nsubj", "head": 1"#, r#""dep": "nsubj", "head": 9"#),
        good.replace(r#""dep": "punct", "head": 1"#, r#""dep": "punct", "head": 3"#),
        good.replace(r#""dep": "nsubj", "head": 1"#, r#""dep": "nsubj", "head": 2"#).replace(r#""dep": "acomp", "head": 1"#, r#""dep": "acomp", "head": 0"#),
        good.replacen("\"tokens\"", "\"labels\": [\"C\"], \"tokens\"", 1),
    ];
    for (k, bad) in cases.iter().enumerate() {
        let input = format!("{good}\n\n{bad}\n");
        match AnnotatedSentence::read_jsonl(input.as_bytes()) {
            Err(SentenceError::Invalid { line, .. }) => assert_eq!(line, 3, "case {k}"),
            other => panic!("case {k}: {other:?}"),
        }
    }
    let input = format!("{good}\n{{\"text\": \"x\"}}\n");
    assert!(matches!(AnnotatedSentence::read_jsonl(input.as_bytes()), Err(SentenceError::Json { line: 2, .. })));
}
