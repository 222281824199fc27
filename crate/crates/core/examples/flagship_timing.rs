//! Timing probe for the large computations. Run with:
//! `cargo run --release -p symcoh-core --example flagship_timing <probe>`
//! where `<probe>` is one of `quartic`, `quartic2`, `quintic`, `witness`,
//! `family`.

use std::time::Instant;

use symcoh_core::cohomology::{witness, Method, QueryOpts, VerifyLevel};
use symcoh_core::complexes::{spec_complex1, spec_complex2_hyp, streamed_cohomology_observed, Problem};
use symcoh_core::linalg::PrimeField;
use symcoh_core::polyspace::parse_poly;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "quartic".to_string());
    match which.as_str() {
        "quartic" => quartic(),
        "quartic2" => quartic_method2(),
        "quintic" => quintic(),
        "witness" => quartic_witness(),
        "family" => quartic_family_p4(),
        other => eprintln!("unknown probe {other}"),
    }
}

fn observe() -> impl FnMut(&str, &str) {
    let start = Instant::now();
    move |stage: &str, detail: &str| {
        eprintln!("[{:8.1}s] {stage}: {detail}", start.elapsed().as_secs_f64());
    }
}

fn quartic() {
    // h^2(S, S^6 Omega_S(-8)) for the Fermat quartic in P^3, complex1
    let p = parse_poly("X0^4+X1^4+X2^4+X3^4", 3).unwrap();
    let prob = Problem::new(3, vec![p]).unwrap();
    let spec = spec_complex1(&prob, 6, 14).unwrap();
    eprintln!("ambient dims: {:?}", spec.ambient_dims());
    let field = PrimeField::new(1000003).unwrap();
    let t = Instant::now();
    let rep = streamed_cohomology_observed(&spec, field, &mut observe()).unwrap();
    eprintln!("complex1 h = {:?} in {:.1}s", rep.h, t.elapsed().as_secs_f64());
}

fn quartic_method2() {
    let p = parse_poly("X0^4+X1^4+X2^4+X3^4", 3).unwrap();
    let prob = Problem::new(3, vec![p]).unwrap();
    let spec = spec_complex2_hyp(&prob, 6, 14).unwrap();
    eprintln!("ambient dims: {:?}", spec.ambient_dims());
    let field = PrimeField::new(1000003).unwrap();
    let t = Instant::now();
    let rep = streamed_cohomology_observed(&spec, field, &mut observe()).unwrap();
    eprintln!("complex2 h = {:?} in {:.1}s", rep.h, t.elapsed().as_secs_f64());
}

fn quintic() {
    // h^0(S^2 Omega_{X_0}) for the quintic pair in P^4 at t = 0
    let p1 = parse_poly("X0^5+X1^5+X2^5+X3^5+X4^5", 4).unwrap();
    let p2 = parse_poly("-2X0^5-X1^5+X3^5+2X4^5", 4).unwrap();
    let prob = Problem::new(4, vec![p1, p2]).unwrap();
    let spec = spec_complex1(&prob, 2, 2).unwrap();
    eprintln!("ambient dims: {:?}", spec.ambient_dims());
    let field = PrimeField::new(1000003).unwrap();
    let t = Instant::now();
    let rep = streamed_cohomology_observed(&spec, field, &mut observe()).unwrap();
    eprintln!("h = {:?} in {:.1}s", rep.h, t.elapsed().as_secs_f64());
}

fn quartic_family_p4() {
    // h^0(S^6 Omega_{X_0}(3)) for the quartic pair in P^4 at t = 0
    let p1 = parse_poly("X0^4+X1^4+X2^4+X3^4+X4^4", 4).unwrap();
    let p2 = parse_poly("-2X0^4-X1^4+X3^4+2X4^4", 4).unwrap();
    let prob = Problem::new(4, vec![p1, p2]).unwrap();
    let spec = spec_complex1(&prob, 6, 3).unwrap();
    eprintln!("ambient dims: {:?}", spec.ambient_dims());
    let field = PrimeField::new(1000003).unwrap();
    let t = Instant::now();
    let rep = streamed_cohomology_observed(&spec, field, &mut observe()).unwrap();
    eprintln!("h = {:?} in {:.1}s", rep.h, t.elapsed().as_secs_f64());
}

fn quartic_witness() {
    let p = parse_poly("X0^4+X1^4+X2^4+X3^4", 3).unwrap();
    let prob = Problem::new(3, vec![p]).unwrap();
    let t = Instant::now();
    let opts = QueryOpts {
        primes: vec![1000003],
        verify: VerifyLevel::Structural,
        explicit_threshold: 6000,
    };
    let rep = witness(&prob, 6, 14, 0, Method::Complex1, &opts).unwrap();
    eprintln!(
        "witness: kernel dim {} nonzero={} maps_to_zero={} in {:.1}s",
        rep.kernel_dimension,
        rep.nonzero_in_quotient,
        rep.maps_to_zero,
        t.elapsed().as_secs_f64()
    );
}
