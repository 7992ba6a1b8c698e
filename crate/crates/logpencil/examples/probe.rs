use logpencil::families::{build_dunkl, GroupName, RepKind, AnyPencil};
use logpencil::monodromy::{make_slice, monodromy_rep, signature, signature_distance};
use num_complex::Complex64;

fn main() {
    let p = match build_dunkl(GroupName::Symmetric(3), RepKind::Reflection).unwrap() {
        AnyPencil::Exact(p) => p, _ => unreachable!(),
    };
    let pn = p.numeric();
    let slice = make_slice(&p, 23).unwrap();
    for (i, pc) in slice.punctures.iter().enumerate() {
        println!("puncture {i}: t = {:.4}{:+.4}i |t| = {:.3} ({})", pc.t.re, pc.t.im, pc.t.norm(), pc.label);
    }
    for rtol in [1e-12f64, 1e-13] {
        for cv in [0.23f64, 1.23, 2.23, -1.77] {
            let s = [Complex64::new(cv, 0.0)];
            let rep = monodromy_rep(&pn, &s, &slice, rtol).unwrap();
            let norm: f64 = rep.generators.iter().map(|m| logpencil::numeric::max_abs(m)).fold(0.0, f64::max);
            println!("rtol {rtol:.0e} c={cv:+.2}: reversal defect {:.2e}, max |M| {:.2e}", rep.achieved_tol, norm);
        }
        let base = monodromy_rep(&pn, &[Complex64::new(0.23, 0.0)], &slice, rtol).unwrap();
        for cv in [1.23f64, 2.23, -0.77, -1.77] {
            let rep = monodromy_rep(&pn, &[Complex64::new(cv, 0.0)], &slice, rtol).unwrap();
            let d = signature_distance(&signature(&base, 2), &signature(&rep, 2)).unwrap();
            println!("rtol {rtol:.0e} distance(0.23 -> {cv:+.2}) = {:.3e}", d);
        }
    }
}
