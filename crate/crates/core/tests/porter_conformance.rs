//! Conformance checks for the stemmer against a frozen reference table and,
//! when the environment provides one, a full external vocabulary/output pair
//! (`VERIDICT_PORTER_VOC` / `VERIDICT_PORTER_OUTPUT`, one word per line,
//! aligned by line number).

use std::env;
use std::fs;

use veridict_core::porter_stem;

const FROZEN_PAIRS: &str = include_str!("data/porter_pairs.tsv");

fn frozen_pairs() -> Vec<(&'static str, &'static str)> {
    FROZEN_PAIRS
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| {
            let (word, stem) = l.split_once('\t').expect("word<TAB>stem");
            (word, stem)
        })
        .collect()
}

#[test]
fn frozen_reference_pairs_stem_exactly() {
    let pairs = frozen_pairs();
    assert!(pairs.len() >= 250, "reference table went missing");
    for (word, expected) in pairs {
        assert_eq!(porter_stem(word), expected, "stem of '{word}'");
    }
}

#[test]
fn reference_vocabulary_stems_are_fixed_points() {
    for (word, _) in frozen_pairs() {
        let once = porter_stem(word);
        let twice = porter_stem(&once);
        assert_eq!(twice, once, "'{word}' → '{once}' → '{twice}'");
    }
}

#[test]
fn sample_words() {
    assert_eq!(porter_stem("running"), "run");
    assert_eq!(porter_stem("caresses"), "caress");
    assert_eq!(porter_stem("relational"), "relat");
}

/// Whole-vocabulary agreement against a caller-supplied reference run.
/// Skipped (and passing) when the environment variables are absent.
#[test]
fn external_vocabulary_agreement() {
    let (voc_path, out_path) = match (
        env::var("VERIDICT_PORTER_VOC"),
        env::var("VERIDICT_PORTER_OUTPUT"),
    ) {
        (Ok(v), Ok(o)) => (v, o),
        _ => {
            println!("external vocabulary not provided; skipping");
            return;
        }
    };
    let voc = fs::read_to_string(&voc_path).expect("read vocabulary file");
    let out = fs::read_to_string(&out_path).expect("read expected-output file");
    let words: Vec<&str> = voc.lines().filter(|l| !l.is_empty()).collect();
    let expected: Vec<&str> = out.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(words.len(), expected.len(), "voc/output line counts differ");
    assert!(!words.is_empty());

    let mut mismatches = 0usize;
    for (word, want) in words.iter().zip(&expected) {
        if porter_stem(word) != *want {
            mismatches += 1;
        }
    }
    let agreement = 1.0 - mismatches as f64 / words.len() as f64;
    println!(
        "external agreement: {:.4}% over {} words ({} mismatches)",
        agreement * 100.0,
        words.len(),
        mismatches
    );
    assert!(
        agreement >= 0.999,
        "agreement {agreement:.6} below 0.999 ({mismatches}/{} mismatches)",
        words.len()
    );
}
