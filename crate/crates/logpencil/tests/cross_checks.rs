//! Cross-module consistency: exact shift operators imply matching
//! monodromy invariants, the two-point tensor family has period two in
//! its parameter, and fitted jump loci coincide with exact residue
//! resonance.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

use logpencil::algebra::{rat, univar, Rat};
use logpencil::families::{
    build_exshift, build_exshift_shift, build_tensor_kz, build_verma_kz, build_verma_kz_shift,
};
use logpencil::monodromy::make_slice;
use logpencil::pencil::LogPencil;
use logpencil::periodicity::{
    resonant_labels, test_periodic_monodromy, test_q_dependence, verify_shift_exact, CompareOpts,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn generic_s(pn: &logpencil::pencil::PencilNumeric, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let s: Vec<Complex64> = (0..pn.n_params())
            .map(|_| c(rng.gen_range(0.05..0.40), rng.gen_range(0.02..0.08)))
            .collect();
        if resonant_labels(pn, &s).is_empty() {
            return s;
        }
    }
}

/// An exact shift operator in direction e_k forces matching monodromy
/// invariants under s -> s + e_k (checked at 5 random generic points).
#[test]
fn exact_shift_implies_periodic_monodromy() {
    let cases: Vec<(&str, LogPencil<Rat>, Vec<usize>)> = vec![
        ("exshift", build_exshift(), vec![1]),
        ("verma_kz(2)", build_verma_kz(2).unwrap(), vec![1, 2]),
        ("verma_kz(3)", build_verma_kz(3).unwrap(), vec![1, 2, 3]),
    ];
    let opts = CompareOpts::default();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for (name, p, shifts) in &cases {
        // the exact identity first
        for &k in shifts {
            let a = if *name == "exshift" {
                build_exshift_shift()
            } else {
                build_verma_kz_shift(p.fiber_dim(), k).unwrap()
            };
            assert!(
                verify_shift_exact(p, &a, k).unwrap().ok,
                "{name}: operator {k} must verify"
            );
        }
        // then the monodromy consequence
        let pn = p.numeric();
        let slice = make_slice(p, 70).unwrap();
        for _ in 0..5 {
            let s = generic_s(&pn, &mut rng);
            for &k in shifts {
                let mut v = vec![0i64; pn.n_params()];
                v[k - 1] = 1;
                let rep = test_periodic_monodromy(&pn, name, &s, &v, &slice, opts).unwrap();
                assert!(
                    rep.pass,
                    "{name}: invariants differ under e_{k} at s={s:?} (distance {:.2e})",
                    rep.signature_distance
                );
            }
        }
    }
}

/// The two-point tensor family depends on e^{pi i hbar}: shifting hbar by
/// one flips eigenvalue signs (signatures differ), shifting by two
/// matches; the reported sublattice is 2Z.
#[test]
fn tensor_two_point_has_period_two() {
    let p = build_tensor_kz(2).unwrap();
    let pn = p.numeric();
    let slice = make_slice(&p, 14).unwrap();
    let opts = CompareOpts::default();
    let s = [c(0.21, 0.04)];
    let r1 = test_periodic_monodromy(&pn, "tensor_kz(2)", &s, &[1], &slice, opts).unwrap();
    assert!(
        !r1.pass && r1.signature_distance > 0.1,
        "shift by one must change the signature, distance {:.2e}",
        r1.signature_distance
    );
    let r2 = test_periodic_monodromy(&pn, "tensor_kz(2)", &s, &[2], &slice, opts).unwrap();
    assert!(
        r2.pass,
        "shift by two must match, distance {:.2e}",
        r2.signature_distance
    );
    // the random-shift table reports the finest matched sublattice
    let q = test_q_dependence(&pn, &s, 12, &slice, opts, 808).unwrap();
    assert_eq!(q.matched_sublattice, vec![vec![2]], "rows: {:?}", q.rows);
}

/// Dunkl monodromy depends only on q = e^{2 pi i c}: integer shifts of c
/// leave the signature unchanged.
#[test]
fn dunkl_signature_is_one_periodic() {
    let p = match logpencil::families::build_dunkl(
        logpencil::families::GroupName::Symmetric(3),
        logpencil::families::RepKind::Reflection,
    )
    .unwrap()
    {
        logpencil::families::AnyPencil::Exact(p) => p,
        _ => unreachable!(),
    };
    let pn = p.numeric();
    let slice = make_slice(&p, 23).unwrap();
    let opts = CompareOpts::default();
    let s = [c(0.23, 0.0)];
    for v in [1i64, -1, 2, -2] {
        let rep = test_periodic_monodromy(&pn, "dunkl(S3)", &s, &[v], &slice, opts).unwrap();
        assert!(
            rep.pass,
            "v={v}: distance {:.2e}, resonant {:?}",
            rep.signature_distance,
            rep.resonant
        );
    }
}

/// Every fitted jump hyperplane agrees with exact residue resonance:
/// crossing it changes the integrality of an eigenvalue gap, decided on
/// the exact characteristic polynomial at rational points.
#[test]
fn fitted_loci_match_exact_resonance() {
    // model family: fitted locus s in Z; the residue [[s,1],[0,0]] has
    // eigenvalues {s, 0}, so integer gaps appear exactly at integer s != 0,
    // and at s = 0 the monodromy is unipotent rather than jumping.
    let p = build_exshift();
    let residue = p.residue_of("x=0").unwrap();
    for on_locus in [-2i64, -1, 1, 2] {
        let cp = residue
            .char_poly_at(&[Rat::from_integer(on_locus.into())])
            .unwrap();
        assert!(
            univar::integer_gap_resonant(&cp),
            "s={on_locus} should be resonant"
        );
    }
    for off_locus in [rat(1, 2), rat(-3, 4), rat(7, 3)] {
        let cp = residue.char_poly_at(&[off_locus.clone()]).unwrap();
        assert!(
            !univar::integer_gap_resonant(&cp),
            "s={off_locus} should not be resonant"
        );
    }
    // two-string family on the fitted locus s1+s2 = 1
    let pv = build_verma_kz(2).unwrap();
    let rv = pv.residue_of("x1=x2").unwrap();
    let cp = rv.char_poly_at(&[rat(1, 3), rat(2, 3)]).unwrap();
    assert!(univar::integer_gap_resonant(&cp));
    let cp = rv.char_poly_at(&[rat(1, 3), rat(1, 3)]).unwrap();
    assert!(!univar::integer_gap_resonant(&cp));
}

/// Scan quantities are conjugation-invariant integers: recomputing the
/// fixed-space and commutant dimensions after conjugating the generator
/// list gives identical values.
#[test]
fn scan_quantities_conjugation_invariant() {
    use logpencil::monodromy::{commutant_dim, conjugate_rep, fixed_space_dim, monodromy_rep, random_conjugator};
    let p = build_verma_kz(2).unwrap();
    let pn = p.numeric();
    let slice = make_slice(&p, 44).unwrap();
    for (i, sv) in [c(0.3, 0.0), c(0.5, 0.0), c(0.7, 0.1)].iter().enumerate() {
        let s = [*sv, c(0.25, 0.0)];
        let rep = monodromy_rep(&pn, &s, &slice, 1e-12).unwrap();
        let g = random_conjugator(2, 3000 + i as u64);
        let conj = conjugate_rep(&rep, &g);
        assert_eq!(
            fixed_space_dim(&rep, 1e-7),
            fixed_space_dim(&conj, 1e-7)
        );
        assert_eq!(commutant_dim(&rep, 1e-7), commutant_dim(&conj, 1e-7));
    }
}
