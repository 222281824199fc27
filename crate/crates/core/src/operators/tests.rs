use super::*;
use crate::linalg::{nullspace, rank};
use crate::polyspace::parse_poly;
use crate::quotient::{quotient_piece, IdealSpec};

fn fp() -> PrimeField {
    PrimeField::new(1000003).unwrap()
}

fn parse_field(text: &str, ambient: usize, field: PrimeField) -> SparseBiPoly<PrimeField> {
    parse_poly(text, ambient).unwrap().reduce_mod(field)
}

/// Pseudo-random polynomial of a given bidegree, deterministic from `seed`.
fn sample_poly(
    ambient: usize,
    b: BiDegree,
    field: PrimeField,
    seed: u64,
) -> SparseBiPoly<PrimeField> {
    let basis = MonomialBasis::new(ambient, b);
    let mut out = SparseBiPoly::zero(field, ambient, b);
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    for i in 0..basis.size() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        if state % 3 == 0 {
            let coeff = (state >> 33) % field.modulus();
            if coeff != 0 {
                out.add_term(basis.unrank(i), coeff).unwrap();
            }
        }
    }
    out
}

#[test]
fn delta_kills_the_basic_kernel_element() {
    let f = fp();
    let p = parse_field("Y0*X1 - Y1*X0", 2, f);
    let out = OperatorSpec::DeltaPower(1).apply(&p).unwrap();
    assert!(out.is_zero());
}

#[test]
fn alpha_star_of_pairing_is_the_polynomial() {
    // Euler identity (1/d) sum X_i dP/dX_i = P
    let f = fp();
    let p = parse_poly("X0^4+X1^4+X2^4+X3^4", 3).unwrap();
    let q = SparseBiPoly::pairing(f, 3);
    let out = OperatorSpec::AlphaStar(p.clone()).apply(&q).unwrap();
    assert_eq!(out, p.reduce_mod(f));

    // and for a denser quintic in P^4
    let p = parse_poly("X0^5+3X1^4*X2+X2^5-2X3^2*X4^3", 4).unwrap();
    let q = SparseBiPoly::pairing(f, 4);
    let out = OperatorSpec::AlphaStar(p.clone()).apply(&q).unwrap();
    assert_eq!(out, p.reduce_mod(f));
}

#[test]
fn delta_power_matches_gauss_scaling() {
    // delta^{d-1}(R(Y)) = (d-1)! (dR)_X(Y); spot value for R = X0^2 X1:
    // delta^2(Y0^2 Y1) = 2(X0^2 Y1 + 2 X0 X1 Y0)
    let f = fp();
    let p = parse_field("Y0^2*Y1", 2, f);
    let out = OperatorSpec::DeltaPower(2).apply(&p).unwrap();
    assert_eq!(out, parse_field("2X0^2*Y1 + 4X0*X1*Y0", 2, f));

    // brute-force the identity for degrees up to 6 on pseudo-random R
    for d in 1..=6u32 {
        let ambient = 2;
        let rpoly = sample_poly(ambient, BiDegree::new(0, d as i64), f, d as u64 + 17);
        if rpoly.is_zero() {
            continue;
        }
        // R(Y): swap X-exponents into Y
        let mut ry = SparseBiPoly::zero(f, ambient, BiDegree::new(d as i64, 0));
        for (mono, &c) in rpoly.terms() {
            let swapped = Monomial { y: mono.x.clone(), x: mono.y.clone() };
            ry.add_term(swapped, c).unwrap();
        }
        let lhs = OperatorSpec::DeltaPower(d - 1).apply(&ry).unwrap();
        // (d-1)! (dR)_X(Y), computed over the integers then reduced
        let rint = {
            let mut p = IntPoly::zero(IntegerRing, ambient, BiDegree::new(0, d as i64));
            for (mono, &c) in rpoly.terms() {
                p.add_term(mono.clone(), num_bigint::BigInt::from(c)).unwrap();
            }
            p
        };
        let mut fact = 1u64;
        for v in 2..d as u64 {
            fact = f.mul(fact, v);
        }
        let rhs = gauss_poly(&rint).unwrap().reduce_mod(f).scale(&fact);
        assert_eq!(lhs, rhs, "d={d}");
    }
}

#[test]
fn commutator_of_delta_and_alpha_is_multiplication() {
    // delta . alpha(P) - alpha(P) . delta = mul(P)
    let f = fp();
    for (ambient, ptext, b) in [
        (2usize, "X0^2+X1^2+X2^2", BiDegree::new(2, 1)),
        (3, "X0^4+X1^4+X2^4+X3^4", BiDegree::new(1, 2)),
        (2, "X0^3+2X1^2*X2", BiDegree::new(2, 2)),
    ] {
        let p = parse_poly(ptext, ambient).unwrap();
        let alpha = OperatorSpec::Alpha(p.clone());
        let delta = OperatorSpec::DeltaPower(1);
        let mulp = OperatorSpec::Mul(p);
        for seed in 0..8u64 {
            let probe = sample_poly(ambient, b, f, seed);
            let lhs = delta
                .apply(&alpha.apply(&probe).unwrap())
                .unwrap()
                .sub(&alpha.apply(&delta.apply(&probe).unwrap()).unwrap())
                .unwrap();
            assert_eq!(lhs, mulp.apply(&probe).unwrap(), "{ptext} seed={seed}");
        }
    }
}

#[test]
fn quotient_descent_of_starred_operators() {
    // alpha_star(P)(q A) - P A is in (q), beta_star(P)(q A) is in (q^2)
    let f = fp();
    let ambient = 3;
    let p = parse_poly("X0^4+X1^4+X2^4+X3^4", ambient).unwrap();
    let q = SparseBiPoly::pairing(f, ambient);
    let alpha_star = OperatorSpec::AlphaStar(p.clone());
    let beta_star = OperatorSpec::BetaStar(p.clone());
    let pf = p.reduce_mod(f);
    for seed in 0..5u64 {
        let a = sample_poly(ambient, BiDegree::new(1, 1), f, 100 + seed);
        let qa = q.multiply(&a).unwrap();

        let lhs = alpha_star.apply(&qa).unwrap().sub(&pf.multiply(&a).unwrap()).unwrap();
        let ideal_q = IdealSpec::pairing_power(ambient, 1);
        let piece = quotient_piece(&ideal_q, ambient, lhs.bidegree(), f);
        assert!(piece.reduce_poly(&lhs).unwrap().iter().all(|&v| v == 0));

        let lhs2 = beta_star.apply(&qa).unwrap();
        let ideal_q2 = IdealSpec::pairing_power(ambient, 2);
        let piece2 = quotient_piece(&ideal_q2, ambient, lhs2.bidegree(), f);
        assert!(piece2.reduce_poly(&lhs2).unwrap().iter().all(|&v| v == 0));
    }
}

#[test]
fn delta_rev_after_delta_scales_pure_y() {
    let f = fp();
    for m in 1..=5i64 {
        let p = sample_poly(2, BiDegree::new(m, 0), f, m as u64);
        if p.is_zero() {
            continue;
        }
        let out = OperatorSpec::DeltaRev
            .apply(&OperatorSpec::DeltaPower(1).apply(&p).unwrap())
            .unwrap();
        assert_eq!(out, p.scale(&(m as u64)), "m={m}");
    }
}

#[test]
fn kernel_elements_satisfy_the_shear_equation() {
    // every kernel element K of delta satisfies K(Y + tX, X) = K(Y, X)
    let f = fp();
    let ambient = 2;
    let src = MonomialBasis::new(ambient, BiDegree::new(2, 2));
    let dst = MonomialBasis::new(ambient, BiDegree::new(1, 3));
    let m = operator_matrix(
        &OperatorSpec::DeltaPower(1),
        &Space::Full(&src),
        &Space::Full(&dst),
        f,
    )
    .unwrap();
    let kernel = nullspace(&m, f);
    assert!(!kernel.is_empty());
    for v in kernel.iter().take(4) {
        let mut k = SparseBiPoly::zero(f, ambient, src.bidegree());
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                k.add_term(src.unrank(i as u64), c).unwrap();
            }
        }
        for t in [1u64, 17, 999983] {
            let sheared = k.shear_terms(&t);
            let original: alloc::collections::BTreeMap<_, _> =
                k.terms().map(|(m, &c)| (m.clone(), c)).collect();
            assert_eq!(sheared, original);
        }
    }
}

#[test]
fn delta_matrix_on_small_piece() {
    // delta: S_{1,1} -> S_{0,2} over P^2 is 9 -> 6 of rank 6, kernel dim 3
    let f = fp();
    let src = MonomialBasis::new(2, BiDegree::new(1, 1));
    let dst = MonomialBasis::new(2, BiDegree::new(0, 2));
    let m = operator_matrix(
        &OperatorSpec::DeltaPower(1),
        &Space::Full(&src),
        &Space::Full(&dst),
        f,
    )
    .unwrap();
    assert_eq!((m.nrows(), m.ncols()), (6, 9));
    assert_eq!(rank(&m, f), 6);
    assert_eq!(nullspace(&m, f).len(), 3);
}

#[test]
fn pairing_multiplication_is_injective() {
    let f = fp();
    let q = IntPoly::pairing(IntegerRing, 2);
    let src = MonomialBasis::new(2, BiDegree::new(0, 2));
    let dst = MonomialBasis::new(2, BiDegree::new(1, 3));
    let m = operator_matrix(&OperatorSpec::Mul(q), &Space::Full(&src), &Space::Full(&dst), f)
        .unwrap();
    assert_eq!(rank(&m, f), 6);
}

#[test]
fn wrong_target_bidegree_is_an_error() {
    let f = fp();
    let src = MonomialBasis::new(2, BiDegree::new(1, 1));
    let dst = MonomialBasis::new(2, BiDegree::new(1, 3));
    let out = operator_matrix(
        &OperatorSpec::DeltaPower(1),
        &Space::Full(&src),
        &Space::Full(&dst),
        f,
    );
    assert!(matches!(out, Err(OperatorError::BidegreeMismatch { .. })));
}

#[test]
fn fermat_power_injectivity_bound() {
    let f = fp();
    // N=2, P=(X0^2, X1^2, X2^2): injective iff 2m > n
    let ps: Vec<IntPoly> =
        (0..3).map(|i| parse_poly(&alloc::format!("X{i}^2"), 2).unwrap()).collect();
    assert!(delta_f_injectivity(&ps, 1, 1, f).unwrap());
    assert!(!delta_f_injectivity(&ps, 1, 2, f).unwrap());

    // identity map (d=1): injective iff m > n
    let id: Vec<IntPoly> = (0..3).map(|i| parse_poly(&alloc::format!("X{i}"), 2).unwrap()).collect();
    for m in 0..4i64 {
        for n in 0..4i64 {
            assert_eq!(delta_f_injectivity(&id, m, n, f).unwrap(), m > n, "m={m} n={n}");
        }
    }
}

#[test]
fn renormalization_conjugates_pairing_to_dual_euler() {
    // u_{m,n} . delta_dual = mul(q) . u_{m-1,n-1} where
    // delta_dual = mul(q) + sum_i X_i Y_i^2 d/dY_i
    let f = fp();
    let ambient = 2;
    for (m, n) in [(2i64, 2i64), (3, 1), (1, 3)] {
        let src = MonomialBasis::new(ambient, BiDegree::new(m - 1, n - 1));
        let dst = MonomialBasis::new(ambient, BiDegree::new(m, n));

        // hand-rolled dual Euler map as a matrix
        let mut cols = Vec::new();
        let qf = SparseBiPoly::pairing(f, ambient);
        for j in 0..src.size() {
            let mono = SparseBiPoly::monomial(f, ambient, src.unrank(j), 1);
            let mut image = qf.multiply(&mono).unwrap();
            for (m0, &c) in mono.terms() {
                for i in 0..=ambient {
                    if m0.y[i] == 0 {
                        continue;
                    }
                    let mut mm = m0.clone();
                    mm.y[i] += 1;
                    mm.x[i] += 1;
                    image.add_term(mm, f.mul(c, m0.y[i] as u64)).unwrap();
                }
            }
            cols.push(crate::quotient::poly_to_vec(&image, &dst).unwrap());
        }
        let dual = SparseMatrix::from_columns(dst.size() as usize, cols);

        let u_src = operator_matrix(
            &OperatorSpec::Renormalize,
            &Space::Full(&src),
            &Space::Full(&src),
            f,
        )
        .unwrap();
        let u_dst = operator_matrix(
            &OperatorSpec::Renormalize,
            &Space::Full(&dst),
            &Space::Full(&dst),
            f,
        )
        .unwrap();
        let mulq = operator_matrix(
            &OperatorSpec::Mul(IntPoly::pairing(IntegerRing, ambient)),
            &Space::Full(&src),
            &Space::Full(&dst),
            f,
        )
        .unwrap();

        // invertibility of the renormalization
        assert_eq!(rank(&u_src, f), src.size() as usize);

        let lhs = u_dst.compose(f, &dual).unwrap();
        let rhs = mulq.compose(f, &u_src).unwrap();
        assert_eq!(lhs, rhs, "m={m} n={n}");
    }
}

#[test]
fn well_definedness_accepts_alpha_star_and_rejects_delta() {
    let f = fp();
    let ambient = 2;
    let p = parse_poly("X0^4+X1^4+X2^4", ambient).unwrap();
    let ideal = IdealSpec::with_pairing(ambient, &[p.clone()]).unwrap();
    let src = quotient_piece(&ideal, ambient, BiDegree::new(2, 4), f);
    let dst = quotient_piece(&ideal, ambient, BiDegree::new(1, 7), f);
    well_definedness_check(&OperatorSpec::AlphaStar(p.clone()), &src, &dst).unwrap();

    // plain delta does not descend modulo (P, q)
    let dst_bad = quotient_piece(&ideal, ambient, BiDegree::new(1, 5), f);
    assert!(matches!(
        well_definedness_check(&OperatorSpec::DeltaPower(1), &src, &dst_bad),
        Err(OperatorError::NotWellDefined { .. })
    ));
}

#[test]
fn beta_satisfies_its_defining_relation() {
    // beta(P) = mul(P) - alpha(P) . delta, term by term
    let f = fp();
    let p = parse_poly("X0^3+X1^3+X2^3+2X0*X1*X2", 2).unwrap();
    let beta = OperatorSpec::Beta(p.clone());
    let alpha = OperatorSpec::Alpha(p.clone());
    let mulp = OperatorSpec::Mul(p);
    let delta = OperatorSpec::DeltaPower(1);
    for seed in 0..6u64 {
        let probe = sample_poly(2, BiDegree::new(2, 1), f, 50 + seed);
        let direct = beta.apply(&probe).unwrap();
        let composed = mulp
            .apply(&probe)
            .unwrap()
            .sub(&alpha.apply(&delta.apply(&probe).unwrap()).unwrap())
            .unwrap();
        assert_eq!(direct, composed, "seed={seed}");
    }
}

#[test]
fn scaled_sum_shift_rules() {
    let p = parse_poly("X0^2+X1^2+X2^2", 2).unwrap();
    let sum = OperatorSpec::ScaledSum(vec![
        (Scalar::new(1, 2), OperatorSpec::BetaStar(p.clone())),
        (Scalar::new(1, 1), OperatorSpec::Mul(p.clone())),
    ]);
    assert_eq!(sum.shift().unwrap(), BiDegree::new(0, 2));

    let mixed = OperatorSpec::ScaledSum(vec![
        (Scalar::ONE, OperatorSpec::DeltaPower(1)),
        (Scalar::ONE, OperatorSpec::DeltaRev),
    ]);
    assert!(matches!(mixed.shift(), Err(OperatorError::MixedShifts)));
}
