use linguafraud_wasm::{analyze, evaluate_synthetic, tree_for_synthetic};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn analyze_highlights_markers_in_plain_text() {
    let v = parse(analyze(
        "agent: How can I help?\ncustomer: Um, I don't remember. They took my card.\ncustomer: Thanks, that is great.",
    ));
    assert!(v.get("error").is_none(), "{v}");
    let responses = v["responses"].as_array().unwrap();
    assert_eq!(responses.len(), 2);
    let first = &responses[0];
    let text = first["text"].as_str().unwrap();
    let cats: Vec<(&str, &str)> = first["highlights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| {
            let (s, e) = (h["start"].as_u64().unwrap() as usize, h["end"].as_u64().unwrap() as usize);
            (h["category"].as_str().unwrap(), &text[s..e])
        })
        .collect();
    assert!(cats.contains(&("disfluencies", "Um")), "{cats:?}");
    assert!(cats.contains(&("third_person_plural_pronouns", "They")), "{cats:?}");
    assert!(responses[1]["sentiment"].as_f64().unwrap() > 0.0);
    assert_eq!(v["features"].as_array().unwrap().len(), 27);
}

#[test]
fn analyze_accepts_json_and_reports_errors() {
    let v = parse(analyze(r#"{"id": "x", "turns": [{"speaker": "customer", "text": "fine"}]}"#));
    assert!(v.get("error").is_none(), "{v}");
    assert!(parse(analyze("robot: hello")).get("error").is_some());
    assert!(parse(analyze("agent: hello")).get("error").is_some());
}

#[test]
fn synthetic_runs_are_deterministic() {
    let a = evaluate_synthetic(1.0, 3);
    assert_eq!(a, evaluate_synthetic(1.0, 3));
    let v = parse(a);
    assert!(v["text"].as_str().unwrap().contains("Markers + Sentiment"));

    let t = parse(tree_for_synthetic(1.0, 3));
    assert!(t["dot"].as_str().unwrap().starts_with("digraph"));
}
