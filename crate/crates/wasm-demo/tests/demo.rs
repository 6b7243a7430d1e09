use hermvol_demo::{conformal_report_json, density_heatmap_json, epsilon_curve_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn report_fails_iii_and_finds_witness() {
    let v = parse(conformal_report_json(0.5).unwrap());
    assert_eq!(v["conditions"]["iii"]["verdict"], "FAILS");
    assert_eq!(v["witness"]["status"], "FOUND");
    assert_eq!(v["consistent"], true);
    assert!(conformal_report_json(1.5).is_err());
}

#[test]
fn curve_matches_quadratic_prediction() {
    let v = parse(epsilon_curve_json(0.5, 11).unwrap());
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 11);
    for p in pts {
        let (vol, pred) = (
            p["volume"].as_f64().unwrap(),
            p["predicted"].as_f64().unwrap(),
        );
        assert!((vol - pred).abs() <= 1e-10 * vol.abs());
    }
    // the curve is not flat: the metric is not volume-invariant
    assert!(v["coefficients"][1].as_f64().unwrap().abs() > 1e-6);
    let flat = parse(epsilon_curve_json(0.0, 3).unwrap());
    assert!(flat["coefficients"][1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn heatmap_shape_and_range() {
    let v = parse(density_heatmap_json(0.5, 0.0, 8).unwrap());
    let vals = v["values"].as_array().unwrap();
    assert_eq!(vals.len(), 64);
    // t = 0: density of g² is 2(1 + a cos 2πx_1)²
    let x0 = vals[0].as_f64().unwrap();
    assert!((x0 - 2.0 * 1.5f64.powi(2)).abs() < 1e-12);
    assert!(v["min"].as_f64().unwrap() >= 0.0);
    assert!(density_heatmap_json(0.5, 2.0, 8).is_err());
    assert!(density_heatmap_json(0.5, 0.5, 0).is_err());
}
