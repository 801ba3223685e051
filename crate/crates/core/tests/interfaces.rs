//! The shipped JSON schemas accept what the engine emits and reject
//! malformed documents.

use jsonschema::JSONSchema;

use confray::event::EventState;
use confray::minkowski::FourVector;
use confray::phase::ShiftReport;
use confray::ray::LightRay;
use confray::scalar::Scalar;
use confray::suites::{run_suite, SuiteConfig, SuiteName};
use confray::vecfield::GeneratorKind;

fn schema(name: &str) -> JSONSchema {
    let path = format!("{}/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    JSONSchema::compile(&doc).expect("schemas compile")
}

fn assert_valid(schema: &JSONSchema, doc: &serde_json::Value) {
    if let Err(errors) = schema.validate(doc) {
        let rendered: Vec<String> = errors
            .map(|e| format!("{e} at {}", e.instance_path))
            .collect();
        panic!("schema rejected {doc}: {rendered:?}");
    }
}

fn sample_state() -> EventState {
    let rays = vec![
        LightRay::new(
            FourVector::upper_ints([1, 2, 0, 0]),
            FourVector::upper_ints([5, 3, 4, 0]),
        )
        .unwrap(),
        LightRay::new(
            FourVector::upper_ints([1, 2, 0, 0]),
            FourVector::upper_ints([1, -1, 0, 0]),
        )
        .unwrap(),
    ];
    EventState::from_rays(rays, Scalar::ratio(7, 3)).unwrap()
}

#[test]
fn ray_documents_validate() {
    let schema = schema("ray.schema.json");
    let ray = sample_state().rays()[0].clone();
    assert_valid(&schema, &serde_json::to_value(&ray).unwrap());

    // float-mode rays serialise momenta as numbers; still valid
    assert_valid(&schema, &serde_json::to_value(ray.to_float_mode()).unwrap());

    // missing momentum is rejected
    let bad = serde_json::json!({"origin": ["0","0","0","0"]});
    assert!(schema.validate(&bad).is_err());
    // five components are rejected
    let bad = serde_json::json!({
        "origin": ["0","0","0","0","0"],
        "momentum": ["1","1","0","0"],
    });
    assert!(schema.validate(&bad).is_err());
}

#[test]
fn state_documents_validate() {
    let schema = schema("state.schema.json");
    assert_valid(&schema, &serde_json::to_value(sample_state()).unwrap());

    // one ray is structurally invalid
    let bad = serde_json::json!({
        "alpha": "1",
        "rays": [{"origin": ["0","0","0","0"], "momentum": ["1","1","0","0"]}],
    });
    assert!(schema.validate(&bad).is_err());
}

#[test]
fn suite_results_validate() {
    let schema = schema("suite_result.schema.json");
    let config = SuiteConfig {
        count: 4,
        ..SuiteConfig::default()
    };
    for name in [SuiteName::Killing, SuiteName::Shifts] {
        let result = run_suite(name, &config).unwrap();
        assert_valid(&schema, &serde_json::to_value(&result).unwrap());
    }

    // an unknown suite name violates the enumeration
    let bad = serde_json::json!({
        "suite": "bogus", "mode": "exact", "seed": 0, "cases": 1, "failures": [],
    });
    assert!(schema.validate(&bad).is_err());
}

#[test]
fn shift_reports_validate() {
    let schema = schema("shift_report.schema.json");
    let mut report = ShiftReport::new(GeneratorKind::C0, &Scalar::one()).unwrap();
    report
        .evaluate_at(
            &FourVector::upper_ints([1, 0, 0, 0]),
            &FourVector::lower_ints([2, 0, 0, 0]),
        )
        .unwrap();
    assert_valid(&schema, &serde_json::to_value(&report).unwrap());

    // every generator kind passes, with and without corrections
    for kind in GeneratorKind::ALL {
        let report = ShiftReport::new(kind, &Scalar::ratio(7, 3)).unwrap();
        assert_valid(&schema, &serde_json::to_value(&report).unwrap());
    }
}
