use serde_json::Value;
use termweight_wasm::{corpus_weights, scaling_curves, scheme_weights};

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.expect("export succeeds")).unwrap()
}

#[test]
fn curves_start_at_one_and_keep_their_order() {
    let v = parse(scaling_curves(50.0, 64));
    let x = v["x"].as_array().unwrap();
    assert_eq!(x.len(), 64);
    assert_eq!(x[0], 1.0);
    assert_eq!(x[63], 50.0);
    let curve = |id: &str| -> Vec<f64> {
        v["curves"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["id"] == id)
            .unwrap()["y"]
            .as_array()
            .unwrap()
            .iter()
            .map(|y| y.as_f64().unwrap())
            .collect()
    };
    let (f1, f0, f2, f7) = (curve("f1"), curve("f0"), curve("f2"), curve("f7"));
    assert_eq!(f0[0], 1.0);
    assert_eq!(curve("f4")[0], 0.0);
    for i in 0..64 {
        assert!(f1[i] >= f0[i] && f0[i] >= f2[i] && f2[i] >= f7[i]);
    }
    assert!(scaling_curves(1.0, 10).is_err());
    assert!(scaling_curves(10.0, 1).is_err());
}

#[test]
fn calculator_covers_every_scheme() {
    let v = parse(scheme_weights(100, 0, 1000, 1000, 0.5, "f2"));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    let weight = |name: &str| rows.iter().find(|r| r["scheme"] == name).unwrap()["weight"].as_f64();
    assert!((weight("dsidf_legacy").unwrap() - 17.61).abs() < 0.01);
    assert!((weight("dsidf").unwrap() - 201f64.log2()).abs() < 1e-12);
    assert!((weight("re(b0=0.5)").unwrap() - (0.5 + 0.5 * (1.0 - 0.07949044238393413))).abs() < 1e-12);
    assert!(weight("scaled_x(f2)").is_some());
    let didf = rows.iter().find(|r| r["scheme"] == "didf").unwrap();
    assert!(didf["weight"].is_null());
    assert!(didf["error"].as_str().unwrap().contains("singular"));
    assert!((v["x"].as_f64().unwrap() - 101.0).abs() < 1e-12);
}

#[test]
fn calculator_rejects_bad_input() {
    assert!(scheme_weights(11, 0, 10, 10, 0.5, "f0").is_err());
    assert!(scheme_weights(1, 0, 0, 10, 0.5, "f0").is_err());
    assert!(scheme_weights(1, 0, 10, 10, 0.5, "f9").is_err());
    assert!(scheme_weights(1, 0, 10, 10, 1.5, "f0").is_err());
}

const REVIEWS: &str = "pos\tgreat acting and a great plot\n\
pos\ta great film with great music\n\
pos\tgreat fun and a moving plot\n\
neg\ta dull plot and poor acting\n\
neg\tpoor music and a dull film\n\
neg\tdull and poor from start to end\n";

#[test]
fn corpus_terms_are_ranked() {
    let v = parse(corpus_weights(REVIEWS, "re", 0.0, "f0", 2, 5));
    assert_eq!(v["documents"], 6);
    assert_eq!(v["scheme"], "re(b0=0)");
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 5);
    let weights: Vec<f64> = terms.iter().map(|t| t["weight"].as_f64().unwrap()).collect();
    assert!(weights.windows(2).all(|w| w[0] >= w[1]));
    let top: Vec<&str> = terms[..3].iter().map(|t| t["term"].as_str().unwrap()).collect();
    assert_eq!(top, ["dull", "great", "poor"]);
    assert_eq!(terms[0]["c"], 3);
}

#[test]
fn corpus_errors_are_messages() {
    let singular = corpus_weights(REVIEWS, "didf", 0.5, "f0", 2, 10).unwrap_err();
    assert!(singular.contains("didf"), "{singular}");
    assert!(corpus_weights("pos\tonly one class\n", "idf", 0.5, "f0", 1, 10).is_err());
    assert!(corpus_weights("maybe\ttext\n", "idf", 0.5, "f0", 1, 10)
        .unwrap_err()
        .contains("line 1"));
    assert!(corpus_weights(REVIEWS, "bogus", 0.5, "f0", 1, 10).is_err());
}
