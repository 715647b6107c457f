use std::collections::BTreeMap;

use algforge::dsl::{
    parse, Bundle, CometricDecl, ConnectionDecl, Document, EndoDecl, ErrorKind, FormDecl, SectionDecl,
};
use algforge_core::{random, BaseSpace, Poly, Section, VectorField};
use proptest::prelude::*;
use rand::Rng;

fn random_doc(seed: u64, nvars: usize, rank: usize) -> Document {
    let mut r = random::rng(seed);
    let base = BaseSpace::euclidean(nvars);
    let mut doc = Document::empty(base);
    let gens: Vec<String> = (0..rank).map(|i| format!("G{i}")).collect();
    let anchors = (0..rank)
        .map(|_| VectorField::new((0..nvars).map(|_| random::poly(&mut r, nvars, 2, 2)).collect()))
        .collect();
    let mut brackets = BTreeMap::new();
    for i in 0..rank {
        for j in i + 1..rank {
            let s = random::section(&mut r, rank, nvars, 2);
            if !s.is_zero() {
                brackets.insert((i, j), s);
            }
        }
    }
    doc.bundles.push(Bundle { name: "E".into(), gens, anchors, brackets });
    for k in 0..2 {
        let value = random::section(&mut r, rank, nvars, 2);
        doc.sections.push(SectionDecl { name: format!("s{k}"), bundle: "E".into(), value });
    }
    let mut rules = BTreeMap::new();
    for beta in 0..rank {
        for b in 0..rank {
            if r.gen_bool(0.3) {
                let s = random::section(&mut r, rank, nvars, 1);
                if !s.is_zero() {
                    rules.insert((beta, b), s);
                }
            }
        }
    }
    doc.connections.push(ConnectionDecl { name: "c".into(), over: "E".into(), target: "E".into(), rules });
    let images = (0..rank).map(|_| random::section(&mut r, rank, nvars, 1)).collect();
    doc.endos.push(EndoDecl { name: "J".into(), bundle: "E".into(), images });
    let mut matrix = vec![vec![Poly::zero(nvars); rank]; rank];
    for i in 0..rank {
        for j in i..rank {
            let p = random::poly(&mut r, nvars, 1, 2);
            matrix[i][j] = p.clone();
            matrix[j][i] = p;
        }
    }
    doc.cometrics.push(CometricDecl { name: "g".into(), bundle: "E".into(), matrix });
    for k in 0..=rank.min(3) {
        let form = random::form(&mut r, rank, nvars, k, 2);
        doc.forms.push(FormDecl { name: format!("w{k}"), bundle: "E".into(), form });
    }
    doc
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn parse_inverts_serialize(seed in any::<u64>(), nvars in 1usize..4, rank in 1usize..5) {
        let doc = random_doc(seed, nvars, rank);
        let text = doc.to_text();
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn garbage_is_rejected_without_panicking(s in "[a-z0-9 ()\\[\\]{},=+*^/>-]{0,60}") {
        let text = format!("base 1 (x)\nbundle E rank 1 gens (A)\n{s}");
        let _ = parse(&text);
    }

    #[test]
    fn truncated_documents_fail_cleanly(cut in 0usize..400) {
        let text = random_doc(1, 2, 3).to_text();
        let cut = cut.min(text.len());
        if let Err(e) = parse(&text[..cut]) {
            prop_assert!(e.pos.line >= 1 && e.pos.col >= 1);
        }
    }
}

#[test]
fn rank_mismatch_is_semantic() {
    let e = parse("base 1 (x)\nbundle E rank 2 gens (A)\n").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Semantic);
    assert_eq!(e.pos.line, 2);
}

#[test]
fn skewness_is_completed() {
    let d = parse("base 1 (x)\nbundle E rank 2 gens (A, B)\nbracket [B, A] = x*A\n").unwrap();
    let s = &d.bundles[0].brackets[&(0, 1)];
    assert_eq!(*s, Section::new(vec![-&Poly::var(1, 0), Poly::zero(1)]));
}
