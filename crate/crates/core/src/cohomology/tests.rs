use super::*;
use crate::polyspace::parse_poly;

fn opts() -> QueryOpts {
    QueryOpts::default()
}

fn plane_curve(d: u32) -> Problem {
    let text = alloc::format!("X0^{d}+X1^{d}+X2^{d}");
    Problem::new(2, vec![parse_poly(&text, 2).unwrap()]).unwrap()
}

fn quadric_pair_p4() -> Problem {
    // a smooth intersection of two quadrics in P^4
    let p1 = parse_poly("X0^2+X1^2+X2^2+X3^2+X4^2", 4).unwrap();
    let p2 = parse_poly("X0^2+2X1^2+3X2^2+4X3^2+5X4^2", 4).unwrap();
    Problem::new(4, vec![p1, p2]).unwrap()
}

#[test]
fn plane_curve_oracle_rows() {
    // d=4, (1,2): k=0, genus-3 curve: (1, 3)
    assert_eq!(plane_curve_oracle(4, 1, 2), (1, 3));
    // d=3, (1,2): k=-1, degree-(-3) bundle on an elliptic curve: (0, 3)
    assert_eq!(plane_curve_oracle(3, 1, 2), (0, 3));
    // d=3, (1,1): k=0, trivial bundle on an elliptic curve: (1, 1)
    assert_eq!(plane_curve_oracle(3, 1, 1), (1, 1));
    // rational curve cases run through the same formula; a degree-d plane
    // "curve" with d <= 2 is a P^1 carrying O(d*k)
    assert_eq!(plane_curve_oracle(1, 2, 3), (0, 4));
    assert_eq!(plane_curve_oracle(2, 3, 2), (0, 3));
}

#[test]
fn h_i_matches_plane_curve_oracle_smoke() {
    for d in [3i64, 4] {
        let prob = plane_curve(d as u32);
        for m in 1..=2i64 {
            for n in 2..=4i64 {
                let rep = h_all(&prob, m, n, Method::Both, &opts()).unwrap();
                let (h0, h1) = plane_curve_oracle(d, m, n);
                assert_eq!(rep.value(0), h0, "h0 d={d} m={m} n={n}");
                assert_eq!(rep.value(1), h1, "h1 d={d} m={m} n={n}");
            }
        }
    }
}

#[test]
fn h_i_rejects_out_of_range_degree() {
    let prob = plane_curve(3);
    assert!(matches!(
        h_i(&prob, 1, 2, 2, Method::Complex1, &opts()),
        Err(CohomologyError::InvalidQuery(_))
    ));
}

#[test]
fn untwisted_symmetric_square_vanishes_on_quadric_pair() {
    let prob = quadric_pair_p4();
    let rep = h_i(&prob, 2, 2, 0, Method::Both, &opts()).unwrap();
    assert_eq!(rep.value(0), 0);
}

#[test]
fn surface_duality_quadric_pair_small() {
    let prob = quadric_pair_p4();
    // h^0(S^2 Omega_X(2)) = dim C[q1,q2]_1 = 2
    let rep = h0_surface_positive_twist(&prob, 2, 0, Method::Complex1, &opts()).unwrap();
    assert_eq!(rep.n, 3);
    assert_eq!(rep.value(2), 2);
    // odd power: zero
    let rep = h0_surface_positive_twist(&prob, 3, 0, Method::Complex1, &opts()).unwrap();
    assert_eq!(rep.value(2), 0);

    // not a surface
    let prob = plane_curve(4);
    assert!(matches!(
        h0_surface_positive_twist(&prob, 2, 0, Method::Complex1, &opts()),
        Err(CohomologyError::InvalidQuery(_))
    ));
}

#[test]
fn surface_duality_agrees_with_the_direct_route() {
    // for t <= -2 both routes are in range: the dual query (complexes at
    // the dual bidegree, degree 2) and the direct query (degree 0) must
    // give the same h^0; two different complexes at two different
    // bidegrees
    let quartic = Problem::new(3, vec![parse_poly("X0^4+X1^4+X2^4+X3^4", 3).unwrap()]).unwrap();
    for (m, t) in [(2i64, -2i64), (3, -2), (3, -4), (4, -3)] {
        let direct = h_i(&quartic, m, -t, 0, Method::Complex1, &opts()).unwrap();
        let dual = h0_surface_positive_twist(&quartic, m, t, Method::Complex2, &opts()).unwrap();
        assert_eq!(direct.value(0), dual.value(2), "quartic m={m} t={t}");
    }
    let pair = quadric_pair_p4();
    for (m, t) in [(3i64, -2i64), (4, -2), (4, -3)] {
        let direct = h_i(&pair, m, -t, 0, Method::Complex1, &opts()).unwrap();
        let dual = h0_surface_positive_twist(&pair, m, t, Method::Complex1, &opts()).unwrap();
        assert_eq!(direct.value(0), dual.value(2), "pair m={m} t={t}");
    }
}

#[test]
fn quadric_kernel_dimensions() {
    // one quadric in P^5: dim C[q]_{m/2} = 1 for even m, 0 for odd
    let q = parse_poly("X0^2+X1^2+X2^2+X3^2+X4^2+X5^2", 5).unwrap();
    let prob = Problem::new(5, vec![q]).unwrap();
    for (m, expect) in [(2i64, 1u64), (3, 0), (4, 1), (5, 0), (6, 1)] {
        let out = phi_kernel(&prob, m, &opts()).unwrap();
        assert_eq!(out.dimension, expect, "m={m}");
        assert_eq!(out.basis.len() as u64, expect);
    }

    // two quadrics in P^5: dim C[q1,q2]_1 = 2 at m = 2
    let q1 = parse_poly("X0^2+X1^2+X2^2+X3^2+X4^2+X5^2", 5).unwrap();
    let q2 = parse_poly("X0^2+2X1^2+3X2^2+4X3^2+5X4^2+6X5^2", 5).unwrap();
    let prob = Problem::new(5, vec![q1, q2]).unwrap();
    let out = phi_kernel(&prob, 2, &opts()).unwrap();
    assert_eq!(out.dimension, 2);

    // no quadrics: error
    let prob = plane_curve(4);
    assert!(matches!(
        phi_kernel(&prob, 2, &opts()),
        Err(CohomologyError::InvalidQuery(_))
    ));
}

#[test]
fn minimal_degree_kernel_is_nontrivial() {
    // d >= 3: every A in C[Y]_{d-3} is in the kernel
    for d in [3u32, 4] {
        let text = alloc::format!("X0^{d}+X1^{d}+X2^{d}+X3^{d}");
        let prob = Problem::new(3, vec![parse_poly(&text, 3).unwrap()]).unwrap();
        let out = psi_kernel(&prob, &opts()).unwrap();
        let lower = piece_dimension(3, BiDegree::new(d as i64 - 3, 0));
        assert!(
            out.dimension >= lower,
            "d={d}: kernel {} below the certified bound {lower}",
            out.dimension
        );
        assert_eq!(out.m, d as i64 - 1);
    }

    // d = 2: dimension at least the number of quadric generators
    let prob = quadric_pair_p4();
    let out = psi_kernel(&prob, &opts()).unwrap();
    assert!(out.dimension >= 2);
    assert_eq!(out.m, 2);
}

#[test]
fn sharp_twist_nonvanishing_seen_by_the_complexes() {
    // the kernel model certifies h^0(S^{d-1} Omega_X(2d-3)) != 0; on
    // surfaces the same dimension is computable through duality, and the
    // two must corroborate
    for d in [4i64, 5] {
        let text = format!("X0^{d}+X1^{d}+X2^{d}+X3^{d}");
        let prob = Problem::new(3, vec![parse_poly(&text, 3).unwrap()]).unwrap();
        let cert = psi_kernel(&prob, &opts()).unwrap();
        assert!(cert.dimension > 0, "d={d}");
        // h^0(S^{d-1} Omega(2d-3)): m = d-1, t = (2d-3) - (d-1) = d-2
        let rep = h0_surface_positive_twist(&prob, d - 1, d - 2, Method::Complex1, &opts()).unwrap();
        assert!(
            rep.value(2) > 0,
            "d={d}: certified section not seen by the complex (h = {})",
            rep.value(2)
        );
    }
}

#[test]
fn psi_certificate_identity() {
    // delta(B) = (-1)^d (d-1)! A (dP)_X(Y) for random A, d <= 6
    let field = PrimeField::new(1000003).unwrap();
    let ambient = 2;
    for d in 3..=6i64 {
        let p = {
            let mut text = alloc::format!("X0^{d}+X1^{d}+X2^{d}");
            if d > 3 {
                text.push_str(&alloc::format!("+X0*X1^{}", d - 1));
            }
            parse_poly(&text, ambient).unwrap()
        };
        let a_basis = MonomialBasis::new(ambient, BiDegree::new(d - 3, 0));
        let mut a = SparseBiPoly::zero(field, ambient, BiDegree::new(d - 3, 0));
        for j in 0..a_basis.size() {
            a.add_term(a_basis.unrank(j), 1 + (j * j + 3) % 97).unwrap();
        }
        let b = psi_certificate_element(&p, &a).unwrap();
        let lhs = OperatorSpec::DeltaPower(1).apply(&b).unwrap();
        let mut fact = 1u64;
        for v in 2..d as u64 {
            fact = field.mul(fact, v);
        }
        let sign = if d % 2 == 0 { fact } else { field.neg(fact) };
        let rhs = gauss_poly(&p).unwrap().reduce_mod(field).multiply(&a).unwrap().scale(&sign);
        assert_eq!(lhs, rhs, "d={d}");
    }
}

#[test]
fn ample_check_translation_and_errors() {
    let prob = quadric_pair_p4();
    let report = ample_check(&prob, 3, Method::Complex1, &opts()).unwrap();
    // the twist bookkeeping: power - n = -1, -2, -3 in order
    let twists: Vec<i64> =
        report.queries.iter().map(|q| (q.m, q.n)).map(|(m, n)| m - n).collect();
    assert_eq!(twists, alloc::vec![-1, -2, -3]);
    // certification consistent with the three values
    let all_zero = [(3i64, 1i64), (3, 2), (2, 2)]
        .iter()
        .zip(&report.queries)
        .all(|(&(_, i), q)| q.value(i) == 0);
    assert_eq!(report.ample_certified, all_zero);
    assert_eq!(report.ample_certified, report.failing.is_none());

    assert!(matches!(
        ample_check(&prob, 2, Method::Complex1, &opts()),
        Err(CohomologyError::InvalidQuery(_))
    ));
    let curve = plane_curve(4);
    assert!(matches!(
        ample_check(&curve, 3, Method::Complex1, &opts()),
        Err(CohomologyError::InvalidQuery(_))
    ));
}

#[test]
fn witness_on_plane_quartic() {
    // position 0 of the hypersurface Koszul complex at (1,2) has kernel
    // dimension h^1 = 3
    let prob = plane_curve(4);
    let report = witness(&prob, 1, 2, 0, Method::Complex1, &opts()).unwrap();
    assert_eq!(report.kernel_dimension, 3);
    assert!(report.nonzero_in_quotient);
    assert!(report.maps_to_zero);
    assert!(!report.components.is_empty());

    // re-verification from scratch at a second prime
    let report2 = witness(
        &prob,
        1,
        2,
        0,
        Method::Complex1,
        &QueryOpts { primes: alloc::vec![2000003], ..opts() },
    )
    .unwrap();
    assert_eq!(report2.kernel_dimension, 3);
    assert!(report2.nonzero_in_quotient && report2.maps_to_zero);
}

#[test]
fn witness_across_multiple_summands() {
    // position 1 of the codimension-2 Koszul complex has two summands;
    // h^1(S^3 Omega(-1)) != 0 on the quadric pair guarantees a kernel there
    let prob = quadric_pair_p4();
    let report = witness(&prob, 3, 4, 1, Method::Complex1, &opts()).unwrap();
    assert!(report.kernel_dimension >= 1);
    assert!(report.nonzero_in_quotient);
    assert!(report.maps_to_zero);
}

#[test]
fn witness_trivial_kernel_is_an_error() {
    // d=3, (m,n)=(3,2): h^1(O_H(3(d-2)-n)) = h^1(O_H(1)) = 0 on the cubic,
    // so position 0 has trivial kernel
    let prob = plane_curve(3);
    assert_eq!(plane_curve_oracle(3, 3, 2), (3, 0));
    match witness(&prob, 3, 2, 0, Method::Complex1, &opts()) {
        Err(CohomologyError::TrivialKernel) => {}
        other => panic!("expected trivial kernel, got {:?}", other.map(|r| r.kernel_dimension)),
    }
}

#[test]
fn sweep_records_cell_errors() {
    let prob = plane_curve(3);
    let cells = sweep(&prob, &[1, 2], &[1, 2], &[0, 1], Method::Complex1, &opts());
    assert_eq!(cells.len(), 8);
    for cell in &cells {
        if cell.n < 2 {
            assert!(cell.value.is_err(), "n={} should be out of range", cell.n);
        } else {
            let (h0, h1) = plane_curve_oracle(3, cell.m, cell.n);
            let expect = if cell.i == 0 { h0 } else { h1 };
            assert_eq!(*cell.value.as_ref().unwrap(), expect);
        }
    }
}

#[test]
fn multi_prime_disagreement_detection_path() {
    // duplicate primes are rejected up front
    let prob = plane_curve(3);
    let bad = QueryOpts { primes: alloc::vec![1000003, 1000003], ..opts() };
    assert!(matches!(
        h_all(&prob, 1, 2, Method::Complex1, &bad),
        Err(CohomologyError::InvalidQuery(_))
    ));

    // a genuinely bad prime: with the family parameter 7, reducing mod 7
    // computes the degenerate fiber (h^0 = 1) while a large prime sees the
    // generic one (h^0 = 0); the consensus must flag this, never average
    let p1 = parse_poly("X0^5+X1^5+X2^5+X3^5+X4^5", 4).unwrap();
    let p2 = parse_poly("-2X0^5-X1^5+7X0*X1*X2*X3*X4+X3^5+2X4^5", 4).unwrap();
    let family = Problem::new(4, vec![p1, p2]).unwrap();
    let mixed = QueryOpts { primes: alloc::vec![7, 1000003], ..opts() };
    match h_all(&family, 2, 2, Method::Complex1, &mixed) {
        Err(CohomologyError::Disagreement(msg)) => {
            assert!(msg.contains('7'), "message should name the primes: {msg}");
        }
        other => panic!("expected a prime disagreement, got {other:?}"),
    }
}

#[test]
fn delta_model_matches_closed_form_smoke() {
    let field = PrimeField::new(1000003).unwrap();
    for ambient in [2usize, 3] {
        for m in 0..=3i64 {
            for n in -6..=3i64 {
                let model = projective_delta_model(ambient, m, n, field).unwrap();
                let closed = crate::bott::proj_cotangent_cohomology(ambient, m, n);
                let closed: BTreeMap<usize, u64> = closed
                    .into_iter()
                    .map(|(k, v)| (k, u64::try_from(v).unwrap()))
                    .collect();
                assert_eq!(model, closed, "N={ambient} m={m} n={n}");
            }
        }
    }
}

#[test]
fn poly_display_is_reparseable() {
    let field = PrimeField::new(1000003).unwrap();
    let p = parse_poly("3Y0^2*X1 - Y1*Y2*X0 + 7Y2^2*X2", 2).unwrap().reduce_mod(field);
    let text = poly_display(&p);
    let reparsed = parse_poly(&text, 2).unwrap().reduce_mod(field);
    assert_eq!(p, reparsed);
}
