//! Property tests for the exact layer, plus the residue-limit law that
//! ties the symbolic and numeric views of a pencil together.

use num_complex::Complex64;
use proptest::prelude::*;

use logpencil::algebra::{rat, rat_int, Mat, MultiPoly, ParamLinear, Rat, RatFun, Vars};
use logpencil::families::{build_dunkl, build_exshift, build_verma_kz, GroupName, RepKind};
use logpencil::specfile::{CustomSpec, PencilSpecFile};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

/// A random polynomial in three symbols with small support.
fn small_poly(vars: Vars) -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(
        (
            proptest::collection::vec(0u32..3, vars.len()),
            small_rat(),
        ),
        0..4,
    )
    .prop_map(move |terms| {
        let mut p = MultiPoly::zero(&vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    })
}

fn small_ratfun(vars: Vars) -> impl Strategy<Value = RatFun> {
    (small_poly(vars.clone()), small_poly(vars))
        .prop_filter_map("nonzero denominator", |(n, d)| {
            if d.is_zero() {
                None
            } else {
                RatFun::new(n, d).ok()
            }
        })
}

fn vars3() -> Vars {
    Vars::new(vec!["s1", "x1", "x2"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Field axioms, decided by cross-multiplication equality.
    #[test]
    fn ratfun_field_axioms(
        a in small_ratfun(vars3()),
        b in small_ratfun(vars3()),
        c in small_ratfun(vars3()),
    ) {
        prop_assert!(a.add(&b) == b.add(&a));
        prop_assert!(a.add(&b).add(&c) == a.add(&b.add(&c)));
        prop_assert!(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !b.is_zero() {
            let q = a.div(&b).unwrap();
            prop_assert!(q.mul(&b) == a);
        }
    }

    /// Mixed partials agree exactly.
    #[test]
    fn ratfun_partials_commute(f in small_ratfun(vars3())) {
        let dxy = f.partial("s1").unwrap().partial("x1").unwrap();
        let dyx = f.partial("x1").unwrap().partial("s1").unwrap();
        prop_assert!(dxy == dyx);
    }

    /// Taylor shift by +1 then -1 is the identity.
    #[test]
    fn poly_shift_round_trip(p in small_poly(vars3())) {
        let back = p.shift_var(0, &rat_int(1)).shift_var(0, &rat_int(-1));
        prop_assert_eq!(back, p);
    }

    /// Parameter-affine evaluation: M(a+b) + M(0) = M(a) + M(b), exactly.
    #[test]
    fn param_linear_is_affine(
        entries in proptest::collection::vec(small_rat(), 12),
        a in proptest::collection::vec(small_rat(), 2),
        b in proptest::collection::vec(small_rat(), 2),
    ) {
        let m0 = Mat::from_fn(2, 2, |i, j| entries[2 * i + j].clone());
        let m1 = Mat::from_fn(2, 2, |i, j| entries[4 + 2 * i + j].clone());
        let m2 = Mat::from_fn(2, 2, |i, j| entries[8 + 2 * i + j].clone());
        let m = ParamLinear::new(m0, vec![m1, m2]).unwrap();
        let ab: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let zero = vec![rat_int(0), rat_int(0)];
        let lhs = m.eval(&ab).unwrap().add(&m.eval(&zero).unwrap());
        let rhs = m.eval(&a).unwrap().add(&m.eval(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    /// Custom spec files round-trip through JSON and rebuild identically.
    #[test]
    fn spec_file_round_trip(
        diag in proptest::collection::vec(small_rat(), 2),
        offd in small_rat(),
    ) {
        let h = logpencil::arrangement::Hyperplane::new(
            vec![rat_int(1), rat_int(2)],
            rat_int(1),
            "h",
        ).unwrap();
        let arr = logpencil::arrangement::Arrangement::new(2, vec![h]).unwrap();
        let constant = Mat::from_fn(2, 2, |i, j| {
            if i == j { diag[i].clone() } else { offd.clone() }
        });
        let res = ParamLinear::new(constant, vec![Mat::identity(2)]).unwrap();
        let p = logpencil::pencil::LogPencil::new(
            arr, 2, vec!["s".into()], vec!["x1".into(), "x2".into()], vec![res],
        ).unwrap();
        let spec = PencilSpecFile::Custom { custom: CustomSpec::from_pencil(&p) };
        let text = spec.to_json();
        let reparsed = PencilSpecFile::from_str(&text).unwrap();
        prop_assert_eq!(&spec, &reparsed);
        let rebuilt = reparsed.build().unwrap();
        let again = match &rebuilt {
            logpencil::families::AnyPencil::Exact(q) => CustomSpec::from_pencil(q),
            _ => unreachable!(),
        };
        prop_assert_eq!(CustomSpec::from_pencil(&p), again);
    }
}

/// The residue is the limit of `a_H(x) * B_u(x)` as `x` approaches a
/// generic point of `H` along a direction `u` with `<n_H, u> = 1`,
/// checked numerically at distance 1e-6 within 1e-4 relative error.
#[test]
fn residue_is_limit_of_weighted_component() {
    let checks: Vec<(logpencil::pencil::LogPencil<Rat>, &str, Vec<f64>, Vec<Complex64>)> = vec![
        (
            build_exshift(),
            "x=0",
            vec![1e-6],
            vec![Complex64::new(0.37, 0.11)],
        ),
        (
            build_verma_kz(3).unwrap(),
            "x1=x2",
            // on H: x1 = x2 = 0.5, away from the other mirrors
            vec![0.5 + 1e-6, 0.5, 2.25],
            vec![
                Complex64::new(0.21, 0.0),
                Complex64::new(0.43, 0.05),
                Complex64::new(-0.17, 0.02),
            ],
        ),
    ];
    for (p, label, x, s) in checks {
        let pn = p.numeric();
        let h = p.arrangement().index_of(label).unwrap();
        let x: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let comps = pn.components(&s, &x).unwrap();
        // u = e_i where the normal's i-th entry is 1 (true for both fixtures)
        let i = pn.hyperplanes[h]
            .normal
            .iter()
            .position(|a| (a - Complex64::new(1.0, 0.0)).norm() < 1e-12)
            .unwrap();
        let form = pn.form_at(h, &x);
        let limit = &comps[i] * form;
        let residue = pn.residues[h].eval(&s);
        let scale = residue.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let defect = (&limit - &residue).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        assert!(
            defect / scale < 1e-4,
            "{label}: relative defect {}",
            defect / scale
        );
    }
}

/// Total tensor Casimir commutes with every slot swap, exactly, n <= 4.
#[test]
fn tensor_total_residue_is_symmetric() {
    use logpencil::families::build_tensor_kz;
    for n in 2..=4usize {
        let p = build_tensor_kz(n).unwrap();
        let fiber = p.fiber_dim();
        let one = vec![rat_int(1)];
        let mut total = Mat::<Rat>::zeros(fiber, fiber);
        for res in p.residues() {
            total = total.add(&res.eval(&one).unwrap());
        }
        // global swap of slots a<b acting on bit-indexed basis
        for a in 0..n {
            for b in a + 1..n {
                let swap = Mat::<Rat>::from_fn(fiber, fiber, |i, j| {
                    let ba = (j >> a) & 1;
                    let bb = (j >> b) & 1;
                    let img = if ba == bb { j } else { j ^ (1 << a) ^ (1 << b) };
                    if i == img {
                        rat_int(1)
                    } else {
                        rat_int(0)
                    }
                });
                assert!(swap.commutator(&total).is_zero(), "n={n} swap ({a},{b})");
            }
        }
    }
}

/// Dunkl monodromy at c = 0 is trivial.
#[test]
fn dunkl_zero_coupling_gives_identity_generators() {
    let p = match build_dunkl(GroupName::Symmetric(3), RepKind::Reflection).unwrap() {
        logpencil::families::AnyPencil::Exact(p) => p,
        _ => unreachable!(),
    };
    let pn = p.numeric();
    let slice = logpencil::monodromy::make_slice(&p, 5).unwrap();
    let rep =
        logpencil::monodromy::monodromy_rep(&pn, &[Complex64::new(0.0, 0.0)], &slice, 1e-12)
            .unwrap();
    for m in &rep.generators {
        let id = logpencil::numeric::CMat::identity(2, 2);
        assert!(logpencil::numeric::max_abs_diff(m, &id) < 1e-12);
    }
}

/// verma_kz(2): meridian eigenvalues are {1, e^{-2 pi i (s1+s2)}}.
#[test]
fn verma_two_point_meridian_eigenvalues() {
    let p = build_verma_kz(2).unwrap();
    let pn = p.numeric();
    let slice = logpencil::monodromy::make_slice(&p, 8).unwrap();
    let s = [Complex64::new(0.23, 0.04), Complex64::new(0.31, -0.02)];
    let rep = logpencil::monodromy::monodromy_rep(&pn, &s, &slice, 1e-12).unwrap();
    let evs = logpencil::numeric::eigenvalues(&rep.generators[0]);
    let expect = (Complex64::new(0.0, -2.0 * std::f64::consts::PI) * (s[0] + s[1])).exp();
    assert!(logpencil::numeric::multisets_close(
        &evs,
        &[Complex64::new(1.0, 0.0), expect],
        1e-8
    ));
}

/// Degenerate slice data is rejected with an error (the random
/// constructor redraws instead).
#[test]
fn slice_degeneracy_contract() {
    let p = build_verma_kz(2).unwrap();
    // direction parallel to x1 - x2
    let e = logpencil::monodromy::slice_through(
        &p,
        &[(rat_int(0), rat_int(0)), (rat_int(1), rat_int(0))],
        &[(rat_int(1), rat_int(0)), (rat_int(1), rat_int(0))],
    );
    assert!(e.is_err());
    // random slices always succeed for the built-ins
    for seed in 0..20 {
        assert!(logpencil::monodromy::make_slice(&p, seed).is_ok());
    }
}
