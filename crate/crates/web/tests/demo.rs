use std::time::Instant;

use akns_web::sech_chirp_direct;

#[test]
fn coarse_direct_solve_matches_closed_form() {
    let t = Instant::now();
    let demo = sech_chirp_direct(1.65, 0.1, 80, 81).unwrap();
    let elapsed = t.elapsed();
    assert_eq!(demo.rho.len(), 81);
    assert_eq!(demo.abs_a.len(), 81);
    assert!(demo.max_err_a < 1e-6 && demo.max_err_b < 1e-6, "{} {}", demo.max_err_a, demo.max_err_b);
    assert_eq!(demo.eigenvalues.len(), demo.exact_eigenvalues.len());
    for want in &demo.exact_eigenvalues {
        let near = demo
            .eigenvalues
            .iter()
            .map(|got| (got[0] - want[0]).hypot(got[1] - want[1]))
            .fold(f64::INFINITY, f64::min);
        assert!(near < 1e-6, "{want:?} missed by {near:.2e}");
    }
    eprintln!("demo solve took {elapsed:?}, errors {:.2e} {:.2e}", demo.max_err_a, demo.max_err_b);
}

#[test]
fn json_shape() {
    let demo = sech_chirp_direct(1.65, 0.1, 40, 11).unwrap();
    let v: serde_json::Value = serde_json::to_value(&demo).unwrap();
    for key in ["rho", "abs_a", "abs_b", "max_err_a", "max_err_b", "eigenvalues", "exact_eigenvalues"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}
