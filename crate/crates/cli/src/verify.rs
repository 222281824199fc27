//! The `verify` subcommand: a self-contained invariant suite covering the
//! operator identities, structural complex checks, and the oracle grids,
//! with one pass/fail line per check.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use symcoh_core::bott::proj_cotangent_cohomology;
use symcoh_core::cohomology::{
    h_all, plane_curve_oracle, projective_delta_model, Method, QueryOpts,
};
use symcoh_core::complexes::{instantiate, spec_complex1, spec_complex2_ci2, spec_complex2_hyp, Problem};
use symcoh_core::linalg::{rank, PrimeField};
use symcoh_core::operators::{operator_matrix, OperatorSpec, Space};
use symcoh_core::polyspace::{parse_poly, BiDegree, IntPoly, IntegerRing, MonomialBasis, SparseBiPoly};

pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn run_all(extra_problem: Option<&Problem>) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let field = PrimeField::new(1000003).unwrap();

    out.push(check("bott-grid-vs-delta-model", || {
        for ambient in 2..=3usize {
            for m in 0..=3i64 {
                for n in -6..=3i64 {
                    let model = projective_delta_model(ambient, m, n, field)
                        .map_err(|e| e.to_string())?;
                    let closed: BTreeMap<usize, u64> = proj_cotangent_cohomology(ambient, m, n)
                        .into_iter()
                        .map(|(k, v)| (k, u64::try_from(v).unwrap()))
                        .collect();
                    if model != closed {
                        return Err(format!("mismatch at N={ambient} m={m} n={n}"));
                    }
                }
            }
        }
        Ok("grid N<=3, m<=3, -6<=n<=3".to_string())
    }));

    out.push(check("plane-curve-oracle", || {
        let opts = QueryOpts::default();
        for d in [3i64, 4] {
            let prob = curve(d);
            for m in 1..=2i64 {
                for n in 2..=4i64 {
                    let rep =
                        h_all(&prob, m, n, Method::Both, &opts).map_err(|e| e.to_string())?;
                    let (h0, h1) = plane_curve_oracle(d, m, n);
                    if rep.value(0) != h0 || rep.value(1) != h1 {
                        return Err(format!("mismatch at d={d} m={m} n={n}"));
                    }
                }
            }
        }
        Ok("d in {3,4}, m<=2, n<=4, both methods".to_string())
    }));

    out.push(check("operator-identities", || {
        let ambient = 2;
        let p = parse_poly("X0^3+X1^3+X2^3+X0*X1*X2", ambient).unwrap();
        let alpha = OperatorSpec::Alpha(p.clone());
        let delta = OperatorSpec::DeltaPower(1);
        let mulp = OperatorSpec::Mul(p.clone());
        for seed in 0..8u64 {
            let probe = pseudo_poly(ambient, BiDegree::new(2, 2), field, seed);
            let lhs = delta
                .apply(&alpha.apply(&probe).unwrap())
                .unwrap()
                .sub(&alpha.apply(&delta.apply(&probe).unwrap()).unwrap())
                .unwrap();
            if lhs != mulp.apply(&probe).unwrap() {
                return Err(format!("commutator fails at seed {seed}"));
            }
        }
        let q = SparseBiPoly::pairing(field, ambient);
        let astar = OperatorSpec::AlphaStar(p.clone());
        if astar.apply(&q).unwrap() != p.reduce_mod(field) {
            return Err("alpha_star(P)(q) != P".into());
        }
        Ok("commutator and pairing identities".to_string())
    }));

    out.push(check("structural-complex-checks", || {
        let quartic = Problem::new(3, vec![parse_poly("X0^4+X1^4+X2^4+X3^4", 3).unwrap()])
            .map_err(|e| e.to_string())?;
        let spec = spec_complex2_hyp(&quartic, 2, 3).map_err(|e| e.to_string())?;
        let inst = instantiate(&spec, field).map_err(|e| e.to_string())?;
        inst.verify_d_squared().map_err(|e| e.to_string())?;
        inst.verify_well_definedness().map_err(|e| e.to_string())?;

        let pair = Problem::new(
            3,
            vec![
                parse_poly("X0^2+X1^2+X2^2+X3^2", 3).unwrap(),
                parse_poly("X0^3+X1^3+X2^3+X3^3", 3).unwrap(),
            ],
        )
        .map_err(|e| e.to_string())?;
        let spec = spec_complex2_ci2(&pair, 2, 2).map_err(|e| e.to_string())?;
        let inst = instantiate(&spec, field).map_err(|e| e.to_string())?;
        inst.verify_d_squared().map_err(|e| e.to_string())?;
        inst.verify_well_definedness().map_err(|e| e.to_string())?;
        Ok("D^2 = 0 and well-definedness on sample problems".to_string())
    }));

    out.push(check("cross-method-agreement", || {
        let opts = QueryOpts::default();
        let prob = curve(3);
        for m in 1..=2i64 {
            for n in 2..=4i64 {
                // method=both fails on internal disagreement
                h_all(&prob, m, n, Method::Both, &opts).map_err(|e| e.to_string())?;
            }
        }
        Ok("complex1 vs complex2 on the cubic curve grid".to_string())
    }));

    out.push(check("renormalization-conjugacy", || {
        let ambient = 2;
        let (m, n) = (2i64, 2i64);
        let src = MonomialBasis::new(ambient, BiDegree::new(m - 1, n - 1));
        let dst = MonomialBasis::new(ambient, BiDegree::new(m, n));
        let qf = SparseBiPoly::pairing(field, ambient);
        let mut cols = Vec::new();
        for j in 0..src.size() {
            let mono = SparseBiPoly::monomial(field, ambient, src.unrank(j), 1);
            let mut image = qf.multiply(&mono).unwrap();
            for (m0, &c) in mono.terms() {
                for i in 0..=ambient {
                    if m0.y[i] == 0 {
                        continue;
                    }
                    let mut mm = m0.clone();
                    mm.y[i] += 1;
                    mm.x[i] += 1;
                    image.add_term(mm, field.mul(c, m0.y[i] as u64)).unwrap();
                }
            }
            cols.push(symcoh_core::quotient::poly_to_vec(&image, &dst).unwrap());
        }
        let dual = symcoh_core::linalg::SparseMatrix::from_columns(dst.size() as usize, cols);
        let u_src =
            operator_matrix(&OperatorSpec::Renormalize, &Space::Full(&src), &Space::Full(&src), field)
                .unwrap();
        let u_dst =
            operator_matrix(&OperatorSpec::Renormalize, &Space::Full(&dst), &Space::Full(&dst), field)
                .unwrap();
        let mulq = operator_matrix(
            &OperatorSpec::Mul(IntPoly::pairing(IntegerRing, ambient)),
            &Space::Full(&src),
            &Space::Full(&dst),
            field,
        )
        .unwrap();
        if rank(&u_src, field) != src.size() as usize {
            return Err("renormalization is not invertible".into());
        }
        let lhs = u_dst.compose(field, &dual).unwrap();
        let rhs = mulq.compose(field, &u_src).unwrap();
        if lhs != rhs {
            return Err("conjugacy square does not commute".into());
        }
        Ok("u . dual-Euler = mul(q) . u at (2,2)".to_string())
    }));

    if let Some(prob) = extra_problem {
        out.push(check("problem-structural-checks", || {
            let m = prob.codim() as i64;
            let spec = spec_complex1(prob, m.max(2), 2).map_err(|e| e.to_string())?;
            if spec.ambient_dims().iter().any(|&d| d > 20000) {
                return Ok("skipped explicit checks (instance too large)".to_string());
            }
            let inst = instantiate(&spec, field).map_err(|e| e.to_string())?;
            inst.verify_d_squared().map_err(|e| e.to_string())?;
            inst.verify_well_definedness().map_err(|e| e.to_string())?;
            Ok(format!("D^2 = 0 and descent at (m,n)=({},2)", m.max(2)))
        }));
    }

    out
}

fn check(
    name: &'static str,
    body: impl FnOnce() -> Result<String, String>,
) -> CheckOutcome {
    match body() {
        Ok(detail) => CheckOutcome { name, passed: true, detail },
        Err(detail) => CheckOutcome { name, passed: false, detail },
    }
}

fn curve(d: i64) -> Problem {
    let mut text = String::new();
    write!(text, "X0^{d}+X1^{d}+X2^{d}").unwrap();
    Problem::new(2, vec![parse_poly(&text, 2).unwrap()]).unwrap()
}

fn pseudo_poly(
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
        if state.is_multiple_of(3) {
            let coeff = (state >> 33) % field.modulus();
            if coeff != 0 {
                out.add_term(basis.unrank(i), coeff).unwrap();
            }
        }
    }
    out
}
