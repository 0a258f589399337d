use linguafraud::markers::MARKER_NAMES;
use linguafraud::prelude::*;
use linguafraud::synth::GROUND_TRUTH_FILE;

#[test]
fn injected_markers_are_what_extraction_counts() {
    let lexicon = MarkerLexicon::default_lexicon();
    for seed in [1, 2, 3] {
        let synth = generate(&SynthConfig {
            seed,
            ..SynthConfig::default()
        })
        .unwrap();
        for truth in &synth.ground_truth {
            let t = synth.corpus.get(&truth.id).unwrap();
            assert_eq!(t.label, Some(truth.label));
            assert_eq!(t.customer_response_count(), truth.responses);
            let streams: Vec<TokenStream> = t.customer_responses().map(tokenize).collect();
            let counts = conversation_marker_features(&streams, &lexicon);
            for (cat, &n) in &truth.injected {
                let k = MARKER_NAMES.iter().position(|m| m == cat).unwrap();
                assert_eq!(counts[k], n, "{} {cat}", truth.id);
            }
        }
    }
}

#[test]
fn response_counts_average_about_nineteen() {
    let mut all = Vec::new();
    for seed in 0..20 {
        let synth = generate(&SynthConfig {
            seed,
            ..SynthConfig::default()
        })
        .unwrap();
        all.extend(synth.ground_truth.iter().map(|g| g.responses as f64));
    }
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    assert!((mean - 19.0).abs() <= 3.0, "mean {mean}");
    assert!(all.iter().all(|&r| (4.0..=101.0).contains(&r)));
}

#[test]
fn same_seed_same_corpus() {
    let cfg = SynthConfig {
        seed: 99,
        signal_strength: 0.3,
        ..SynthConfig::default()
    };
    let (a, b) = (generate(&cfg).unwrap(), generate(&cfg).unwrap());
    assert_eq!(a.corpus.transcripts(), b.corpus.transcripts());
    let other = generate(&SynthConfig { seed: 100, ..cfg }).unwrap();
    assert_ne!(a.corpus.transcripts(), other.corpus.transcripts());
}

#[test]
fn written_corpus_loads_back() {
    let synth = generate(&SynthConfig::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    synth.write_dir(dir.path()).unwrap();
    let back = load_corpus(dir.path()).unwrap();
    assert_eq!(back.transcripts(), synth.corpus.transcripts());
    let gt = std::fs::read_to_string(dir.path().join(GROUND_TRUTH_FILE)).unwrap();
    assert_eq!(gt.lines().count(), 57);
    assert!(gt.starts_with("id,label,responses,"));
}
