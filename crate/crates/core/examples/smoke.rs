use cycleforge_core::scene::{canonical_scene, smoothness_certificate};

fn main() {
    let scene = canonical_scene();
    let t0 = std::time::Instant::now();
    let report = smoothness_certificate(&scene, &[7, 13]).unwrap();
    println!("elapsed: {:?}", t0.elapsed());
    for p in &report.primes {
        println!(
            "q={} b_sing={:?} y_sing={:?} line_on_s={:?} passed={}",
            p.q, p.b_singular_point, p.y_singular_point, p.line_on_s, p.passed
        );
    }
    println!("overall: {}", report.passed);
}
