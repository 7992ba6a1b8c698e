//! Implementations behind the CLI subcommands: load a pencil spec, run
//! the requested checks, emit a deterministic JSON report, and map
//! outcomes to exit codes (0 = pass, 1 = a checked property failed,
//! 2 = usage or input error).

use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use serde::Serialize;

use crate::exprparse;
use crate::families::AnyPencil;
use crate::loci::{self, ScanOpts, ScanQuantity};
use crate::monodromy::{self, LineSlice, MonodromyError};
use crate::numeric;
use crate::pencil::PencilNumeric;
use crate::periodicity::{self, CompareOpts};
use crate::report::{matrix_json, scan_csv, CxJson, Meta, Report};
use crate::specfile::PencilSpecFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default thresholds used when the CLI does not override them.
pub const DEFAULT_RTOL: f64 = 1e-12;
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-7;
pub const DEFAULT_SIG_TOL: f64 = 1e-6;
pub const DET_LAW_TOL: f64 = 1e-8;
pub const EIGEN_LAW_TOL: f64 = 1e-6;

/// What a command hands back to `main`: exit code plus printable summary.
pub struct CmdOutput {
    pub exit: i32,
    pub summary: String,
}

impl CmdOutput {
    fn usage(msg: impl std::fmt::Display) -> CmdOutput {
        CmdOutput {
            exit: EXIT_USAGE,
            summary: format!("error: {msg}"),
        }
    }
}

/// `PENCIL_SEED` overrides the CLI seed, which defaults to 1.
pub fn resolve_seed(cli: Option<u64>) -> u64 {
    if let Ok(env) = std::env::var("PENCIL_SEED") {
        if let Ok(v) = env.parse() {
            return v;
        }
    }
    cli.unwrap_or(1)
}

/// Caps the worker-thread pool; called once at startup.
pub fn set_jobs(jobs: Option<usize>) {
    if let Some(j) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global();
    }
}

fn load_spec(path: &Path) -> Result<(PencilSpecFile, AnyPencil), CmdOutput> {
    let spec = PencilSpecFile::from_path(path).map_err(CmdOutput::usage)?;
    let pencil = spec.build().map_err(CmdOutput::usage)?;
    Ok((spec, pencil))
}

/// Custom pencils entering monodromy-level commands must actually be
/// flat; built-in families are flat by construction.
fn require_flat(spec: &PencilSpecFile, pencil: &AnyPencil, seed: u64) -> Result<(), CmdOutput> {
    if let PencilSpecFile::Custom { .. } = spec {
        if let AnyPencil::Exact(p) = pencil {
            let residue = p.check_flatness_residue();
            let points = p.check_flatness_points(20, seed);
            if !residue.pass || !points {
                return Err(CmdOutput::usage(
                    "custom pencil is not flat (run the flatness command for a witness)",
                ));
            }
        }
    }
    Ok(())
}

fn slice_for(pencil: &AnyPencil, seed: u64) -> Result<LineSlice, MonodromyError> {
    match pencil {
        AnyPencil::Exact(p) => monodromy::make_slice(p, seed),
        AnyPencil::Approx(p) => monodromy::make_slice(p, seed),
    }
}

/// Parses `a`, `a+bi`, `a-bi`, `bi` into a complex number.
pub fn parse_c64(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || format!("cannot parse complex number `{text}`");
    if t.is_empty() {
        return Err(err());
    }
    // split at the sign of the imaginary part (not at position 0)
    let bytes = t.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'e' && bytes[i - 1] != b'E' {
            split = Some(i);
            break;
        }
    }
    let parse_im = |s: &str| -> Result<f64, String> {
        let body = s.strip_suffix('i').ok_or_else(err)?;
        match body {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            b => b.parse().map_err(|_| err()),
        }
    };
    if t.ends_with('i') {
        match split {
            Some(i) => {
                let re: f64 = t[..i].parse().map_err(|_| err())?;
                let im = parse_im(&t[i..])?;
                Ok(Complex64::new(re, im))
            }
            None => Ok(Complex64::new(0.0, parse_im(&t)?)),
        }
    } else {
        let re: f64 = t.parse().map_err(|_| err())?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn parse_c64_list(text: &str, want: usize) -> Result<Vec<Complex64>, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != want {
        return Err(format!(
            "expected {want} comma-separated values, got {}",
            parts.len()
        ));
    }
    parts.into_iter().map(parse_c64).collect()
}

/// `--s` argument: explicit values or `random` (generic, non-resonant).
fn resolve_s(
    arg: &str,
    pn: &PencilNumeric,
    seed: u64,
) -> Result<Vec<Complex64>, String> {
    if arg != "random" {
        return parse_c64_list(arg, pn.n_params());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..100 {
        let s: Vec<Complex64> = (0..pn.n_params())
            .map(|_| Complex64::new(rng.gen_range(0.05..0.45), rng.gen_range(-0.05..0.05)))
            .collect();
        if periodicity::resonant_labels(pn, &s).is_empty() {
            return Ok(s);
        }
    }
    Err("could not draw a non-resonant parameter point".into())
}

// ---------------------------------------------------------------- flatness

#[derive(Serialize)]
struct FlatnessFailureJson {
    flat: String,
    hyperplane: String,
    row: usize,
    col: usize,
    monomial: String,
    value: String,
}

#[derive(Serialize)]
struct FlatnessResults {
    pencil: String,
    /// `null` when the pencil's coefficients are not exact (the residue
    /// criterion needs exact arithmetic).
    residue_criterion: Option<FlatnessResidueJson>,
    point_oracle: FlatnessPointsJson,
    pass: bool,
}

#[derive(Serialize)]
struct FlatnessResidueJson {
    pass: bool,
    flats_checked: usize,
    failures: Vec<FlatnessFailureJson>,
}

#[derive(Serialize)]
struct FlatnessPointsJson {
    pass: bool,
    trials: usize,
    threshold: f64,
}

pub fn cmd_flatness(
    spec_path: &Path,
    trials: usize,
    seed: Option<u64>,
    report_path: Option<&Path>,
) -> CmdOutput {
    let seed = resolve_seed(seed);
    let (spec, pencil) = match load_spec(spec_path) {
        Ok(x) => x,
        Err(e) => return e,
    };
    let (residue, points) = match &pencil {
        AnyPencil::Exact(p) => {
            let r = p.check_flatness_residue();
            let pts = p.check_flatness_points(trials, seed);
            (Some(r), pts)
        }
        AnyPencil::Approx(p) => (None, p.check_flatness_points(trials, seed)),
    };
    let residue_json = residue.as_ref().map(|r| FlatnessResidueJson {
        pass: r.pass,
        flats_checked: r.flats_checked,
        failures: r
            .failures
            .iter()
            .map(|f| FlatnessFailureJson {
                flat: f.flat.clone(),
                hyperplane: f.hyperplane.clone(),
                row: f.row,
                col: f.col,
                monomial: f.monomial.clone(),
                value: f.value.clone(),
            })
            .collect(),
    });
    let pass = residue.as_ref().map_or(true, |r| r.pass) && points;
    let results = FlatnessResults {
        pencil: spec.id(),
        residue_criterion: residue_json,
        point_oracle: FlatnessPointsJson {
            pass: points,
            trials,
            threshold: if matches!(pencil, AnyPencil::Exact(_)) {
                0.0
            } else {
                1e-20
            },
        },
        pass,
    };
    let meta = Meta::new("flatness", seed, DEFAULT_RTOL).with_tol("point_oracle", 1e-20);
    let summary = format!(
        "flatness {}: residue {} / point oracle {} -> {}",
        spec.id(),
        residue
            .as_ref()
            .map_or("skipped (approximate coefficients)".to_string(), |r| {
                if r.pass { "pass".into() } else { "FAIL".into() }
            }),
        if points { "pass" } else { "FAIL" },
        if pass { "pass" } else { "FAIL" }
    );
    if let Err(e) = maybe_write(report_path, &Report { meta, results }) {
        return CmdOutput::usage(e);
    }
    CmdOutput {
        exit: if pass { EXIT_OK } else { EXIT_CHECK_FAILED },
        summary,
    }
}

// --------------------------------------------------------------- monodromy

#[derive(Serialize)]
struct LawCheck {
    hyperplane: String,
    defect: f64,
    tolerance: f64,
    pass: bool,
    /// Integer eigenvalue gaps void the eigenvalue law; the check is
    /// reported but skipped.
    resonant: bool,
}

#[derive(Serialize)]
struct MonodromyResults {
    pencil: String,
    s: Vec<CxJson>,
    punctures: Vec<PunctureJson>,
    generators: Vec<Vec<Vec<CxJson>>>,
    achieved_tol: f64,
    fixed_space_dim: usize,
    rank_threshold: f64,
    signature_word_len: usize,
    signature: Vec<SignatureEntry>,
    det_law: Vec<LawCheck>,
    eigen_law: Vec<LawCheck>,
}

#[derive(Serialize)]
struct PunctureJson {
    t: CxJson,
    label: String,
}

#[derive(Serialize)]
struct SignatureEntry {
    word: Vec<usize>,
    coeffs: Vec<CxJson>,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_monodromy(
    spec_path: &Path,
    s_arg: &str,
    rtol: f64,
    seed: Option<u64>,
    word_len: usize,
    report_path: Option<&Path>,
) -> CmdOutput {
    let seed = resolve_seed(seed);
    let (spec, pencil) = match load_spec(spec_path) {
        Ok(x) => x,
        Err(e) => return e,
    };
    if let Err(e) = require_flat(&spec, &pencil, seed) {
        return e;
    }
    let pn = pencil.numeric();
    let s = match resolve_s(s_arg, &pn, seed) {
        Ok(s) => s,
        Err(e) => return CmdOutput::usage(e),
    };
    let slice = match slice_for(&pencil, seed) {
        Ok(s) => s,
        Err(e) => return CmdOutput::usage(e),
    };
    let rep = match monodromy::monodromy_rep(&pn, &s, &slice, rtol) {
        Ok(r) => r,
        Err(e) => {
            return CmdOutput {
                exit: EXIT_CHECK_FAILED,
                summary: format!("integrator failure: {e}"),
            }
        }
    };
    let sig = monodromy::signature(&rep, word_len);
    let fixed = monodromy::fixed_space_dim(&rep, DEFAULT_RANK_THRESHOLD);

    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut det_law = Vec::new();
    let mut eigen_law = Vec::new();
    let mut laws_pass = true;
    for (k, m) in rep.generators.iter().enumerate() {
        let h = slice.punctures[k].hyperplane;
        let det = m.clone().lu().determinant();
        let expect = (two_pi_i * pn.residues[h].trace(&s)).exp();
        let det_defect = (det - expect).norm();
        det_law.push(LawCheck {
            hyperplane: slice.punctures[k].label.clone(),
            defect: det_defect,
            tolerance: DET_LAW_TOL,
            pass: det_defect <= DET_LAW_TOL,
            resonant: false,
        });
        let resonant = periodicity::residue_resonant_at(&pn, h, &s);
        let res_evs = numeric::eigenvalues(&pn.residues[h].eval(&s));
        let expected_evs: Vec<Complex64> = res_evs.iter().map(|l| (two_pi_i * l).exp()).collect();
        let mon_evs = numeric::eigenvalues(m);
        let defect = multiset_distance(&expected_evs, &mon_evs);
        let pass = resonant || defect <= EIGEN_LAW_TOL;
        eigen_law.push(LawCheck {
            hyperplane: slice.punctures[k].label.clone(),
            defect,
            tolerance: EIGEN_LAW_TOL,
            pass,
            resonant,
        });
        laws_pass &= det_defect <= DET_LAW_TOL && pass;
    }

    let results = MonodromyResults {
        pencil: spec.id(),
        s: s.iter().map(|&z| z.into()).collect(),
        punctures: slice
            .punctures
            .iter()
            .map(|p| PunctureJson {
                t: p.t.into(),
                label: p.label.clone(),
            })
            .collect(),
        generators: rep.generators.iter().map(matrix_json).collect(),
        achieved_tol: rep.achieved_tol,
        fixed_space_dim: fixed,
        rank_threshold: DEFAULT_RANK_THRESHOLD,
        signature_word_len: word_len,
        signature: sig
            .words
            .iter()
            .zip(&sig.coeffs)
            .map(|(w, c)| SignatureEntry {
                word: w.clone(),
                coeffs: c.iter().map(|&z| z.into()).collect(),
            })
            .collect(),
        det_law,
        eigen_law,
    };
    let meta = Meta::new("monodromy", seed, rtol)
        .with_tol("det_law", DET_LAW_TOL)
        .with_tol("eigen_law", EIGEN_LAW_TOL)
        .with_tol("rank_threshold", DEFAULT_RANK_THRESHOLD);
    let summary = format!(
        "monodromy {}: {} generators, fixed space dim {}, laws {}",
        spec.id(),
        rep.generators.len(),
        fixed,
        if laws_pass { "pass" } else { "FAIL" }
    );
    if let Err(e) = maybe_write(report_path, &Report { meta, results }) {
        return CmdOutput::usage(e);
    }
    CmdOutput {
        exit: if laws_pass { EXIT_OK } else { EXIT_CHECK_FAILED },
        summary,
    }
}

/// Greedy max-norm distance between two eigenvalue multisets.
fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let mut best: Option<(usize, f64)> = None;
        for (j, y) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (x - y).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let (j, d) = best.expect("nonempty");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

// ------------------------------------------------------------- periodicity

#[derive(Serialize)]
struct PeriodicityResults {
    pencil: String,
    s: Vec<CxJson>,
    single: Option<periodicity::PeriodicityReport>,
    q_dependence: Option<periodicity::QDependenceReport>,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_periodicity(
    spec_path: &Path,
    s_arg: &str,
    shift: Option<&str>,
    trials: usize,
    tol: f64,
    rtol: f64,
    seed: Option<u64>,
    word_len: usize,
    report_path: Option<&Path>,
) -> CmdOutput {
    let seed = resolve_seed(seed);
    let (spec, pencil) = match load_spec(spec_path) {
        Ok(x) => x,
        Err(e) => return e,
    };
    if let Err(e) = require_flat(&spec, &pencil, seed) {
        return e;
    }
    let pn = pencil.numeric();
    let s = match resolve_s(s_arg, &pn, seed) {
        Ok(s) => s,
        Err(e) => return CmdOutput::usage(e),
    };
    let slice = match slice_for(&pencil, seed) {
        Ok(s) => s,
        Err(e) => return CmdOutput::usage(e),
    };
    let opts = CompareOpts {
        word_len,
        tol,
        rtol,
    };
    let mut exit = EXIT_OK;
    let summary;
    let mut single = None;
    let mut q_dependence = None;
    match shift {
        Some(text) => {
            let v: Result<Vec<i64>, _> = text.split(',').map(|x| x.trim().parse()).collect();
            let v = match v {
                Ok(v) if v.len() == pn.n_params() => v,
                _ => {
                    return CmdOutput::usage(format!(
                        "--shift must be {} comma-separated integers",
                        pn.n_params()
                    ))
                }
            };
            match periodicity::test_periodic_monodromy(&pn, &spec.id(), &s, &v, &slice, opts) {
                Ok(rep) => {
                    let verdict = if !rep.resonant.is_empty() {
                        "skipped (resonant)"
                    } else if rep.pass {
                        "invariants match"
                    } else {
                        exit = EXIT_CHECK_FAILED;
                        "INVARIANTS DIFFER"
                    };
                    summary = format!(
                        "periodicity {}: shift {:?} distance {:.3e} -> {}",
                        spec.id(),
                        rep.shift,
                        rep.signature_distance,
                        verdict
                    );
                    single = Some(rep);
                }
                Err(e) => {
                    return CmdOutput {
                        exit: EXIT_CHECK_FAILED,
                        summary: format!("transport failure: {e}"),
                    }
                }
            }
        }
        None => {
            match periodicity::test_q_dependence(&pn, &s, trials, &slice, opts, seed) {
                Ok(rep) => {
                    let failed = rep
                        .rows
                        .iter()
                        .filter(|r| !r.pass && !r.resonant && r.shift.iter().any(|&x| x != 0))
                        .count();
                    if failed > 0 {
                        exit = EXIT_CHECK_FAILED;
                    }
                    summary = format!(
                        "periodicity {}: {} shifts tested, {} mismatched, sublattice {:?}",
                        spec.id(),
                        rep.rows.len(),
                        failed,
                        rep.matched_sublattice
                    );
                    q_dependence = Some(rep);
                }
                Err(e) => {
                    return CmdOutput {
                        exit: EXIT_CHECK_FAILED,
                        summary: format!("transport failure: {e}"),
                    }
                }
            }
        }
    }
    let results = PeriodicityResults {
        pencil: spec.id(),
        s: s.iter().map(|&z| z.into()).collect(),
        single,
        q_dependence,
    };
    let meta = Meta::new("periodicity", seed, rtol).with_tol("signature", tol);
    if let Err(e) = maybe_write(report_path, &Report { meta, results }) {
        return CmdOutput::usage(e);
    }
    CmdOutput { exit, summary }
}

// ------------------------------------------------------------ shift-verify

#[derive(Serialize)]
struct ShiftVerifyResults {
    pencil: String,
    operator: String,
    checks: Vec<ShiftCheckJson>,
    pass: bool,
}

#[derive(Serialize)]
struct ShiftCheckJson {
    shift_index: usize,
    ok: bool,
    witness: Option<String>,
}

/// JSON shape of an operator file: row-major expression strings in the
/// pencil's symbols (parameters first, then coordinates).
#[derive(serde::Deserialize)]
struct OperatorFile {
    entries: Vec<Vec<String>>,
    #[serde(default)]
    shift_index: Option<usize>,
}

pub fn cmd_shift_verify(
    spec_path: &Path,
    operator: &str,
    report_path: Option<&Path>,
) -> CmdOutput {
    let (spec, pencil) = match load_spec(spec_path) {
        Ok(x) => x,
        Err(e) => return e,
    };
    let AnyPencil::Exact(p) = &pencil else {
        return CmdOutput::usage("shift verification needs an exact pencil");
    };
    let mut checks = Vec::new();
    let operator_desc;
    if operator == "builtin" {
        operator_desc = format!("builtin({})", spec.id());
        match &spec {
            PencilSpecFile::Builtin { family, params } if family == "exshift" => {
                let _ = params;
                let a = crate::families::build_exshift_shift();
                match periodicity::verify_shift_exact(p, &a, 1) {
                    Ok(c) => checks.push((1usize, c)),
                    Err(e) => return CmdOutput::usage(e),
                }
            }
            PencilSpecFile::Builtin { family, params } if family == "verma_kz" => {
                let r = params.r.unwrap_or(0);
                for k in 1..=r {
                    let a = match crate::families::build_verma_kz_shift(r, k) {
                        Ok(a) => a,
                        Err(e) => return CmdOutput::usage(e),
                    };
                    match periodicity::verify_shift_exact(p, &a, k) {
                        Ok(c) => checks.push((k, c)),
                        Err(e) => return CmdOutput::usage(e),
                    }
                }
            }
            _ => {
                return CmdOutput::usage(format!(
                    "no builtin shift operator for `{}`",
                    spec.id()
                ))
            }
        }
    } else {
        let path = operator.strip_prefix("file:").unwrap_or(operator);
        operator_desc = path.to_string();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return CmdOutput::usage(format!("cannot read operator file: {e}")),
        };
        let opfile: OperatorFile = match serde_json::from_str(&text) {
            Ok(o) => o,
            Err(e) => return CmdOutput::usage(format!("malformed operator file: {e}")),
        };
        let names: Vec<String> = p
            .param_names()
            .iter()
            .cloned()
            .chain(p.coord_names().iter().cloned())
            .collect();
        let vars = crate::algebra::Vars::new(names);
        let a = match exprparse::parse_ratfun_matrix(&opfile.entries, &vars) {
            Ok(a) => a,
            Err(e) => return CmdOutput::usage(e),
        };
        let j = opfile.shift_index.unwrap_or(1);
        match periodicity::verify_shift_exact(p, &a, j) {
            Ok(c) => checks.push((j, c)),
            Err(e) => return CmdOutput::usage(e),
        }
    }
    let pass = checks.iter().all(|(_, c)| c.ok);
    let results = ShiftVerifyResults {
        pencil: spec.id(),
        operator: operator_desc,
        checks: checks
            .iter()
            .map(|(j, c)| ShiftCheckJson {
                shift_index: *j,
                ok: c.ok,
                witness: c.witness.as_ref().map(|w| {
                    format!(
                        "d/d{} entry ({},{}) defect {}",
                        w.coord, w.row, w.col, w.defect
                    )
                }),
            })
            .collect(),
        pass,
    };
    let meta = Meta::new("shift-verify", 0, 0.0).with_tol("exact", 0.0);
    let summary = format!(
        "shift-verify {}: {} identities checked -> {}",
        spec.id(),
        checks.len(),
        if pass { "exact" } else { "FAIL" }
    );
    if let Err(e) = maybe_write(report_path, &Report { meta, results }) {
        return CmdOutput::usage(e);
    }
    CmdOutput {
        exit: if pass { EXIT_OK } else { EXIT_CHECK_FAILED },
        summary,
    }
}

// ------------------------------------------------------------------- scan

#[derive(Serialize)]
struct ScanResults {
    pencil: String,
    quantity: ScanQuantity,
    baseline: usize,
    samples: Vec<loci::ScanSample>,
    jumps: Vec<Vec<CxJson>>,
    refined_jumps: Option<Vec<Vec<CxJson>>>,
    skipped: usize,
    fits: Option<Vec<loci::HyperplaneFit>>,
    fit_tolerance: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_scan(
    spec_path: &Path,
    from_arg: &str,
    to_arg: &str,
    samples: usize,
    quantity: ScanQuantity,
    fit: bool,
    fit_amax: i64,
    fit_tol: f64,
    refine: bool,
    rtol: f64,
    seed: Option<u64>,
    report_path: Option<&Path>,
    csv_path: Option<&Path>,
) -> CmdOutput {
    let seed = resolve_seed(seed);
    let (spec, pencil) = match load_spec(spec_path) {
        Ok(x) => x,
        Err(e) => return e,
    };
    if let Err(e) = require_flat(&spec, &pencil, seed) {
        return e;
    }
    let pn = pencil.numeric();
    let from = match parse_c64_list(from_arg, pn.n_params()) {
        Ok(v) => v,
        Err(e) => return CmdOutput::usage(e),
    };
    let to = match parse_c64_list(to_arg, pn.n_params()) {
        Ok(v) => v,
        Err(e) => return CmdOutput::usage(e),
    };
    let slice = match slice_for(&pencil, seed) {
        Ok(s) => s,
        Err(e) => return CmdOutput::usage(e),
    };
    let opts = ScanOpts {
        rtol,
        rank_threshold: DEFAULT_RANK_THRESHOLD,
    };
    let result = match loci::scan_segment(&pn, &slice, &from, &to, samples, quantity, opts) {
        Ok(r) => r,
        Err(e) => return CmdOutput::usage(e),
    };
    if result.skipped == result.samples.len() {
        return CmdOutput {
            exit: EXIT_CHECK_FAILED,
            summary: "every sample failed to transport".into(),
        };
    }
    let refined = refine
        .then(|| loci::refine_jumps(&pn, &slice, &from, &to, samples, &result, opts));
    let fits = fit.then(|| loci::fit_hyperplanes(&result.jumps, fit_amax, fit_tol));
    if let Some(csv) = csv_path {
        if let Err(e) = std::fs::write(csv, scan_csv(&pn.param_names, &result.samples)) {
            return CmdOutput::usage(format!("cannot write CSV: {e}"));
        }
    }
    let summary = format!(
        "scan {}: {} samples, baseline {}, {} jumps{}{}",
        spec.id(),
        result.samples.len(),
        result.baseline,
        result.jumps.len(),
        if result.skipped > 0 {
            format!(", {} skipped", result.skipped)
        } else {
            String::new()
        },
        match &fits {
            Some(f) if !f.is_empty() => format!(
                ", best fit normal {:?} support {}",
                f[0].normal, f[0].support
            ),
            Some(_) => ", no hyperplane fit".to_string(),
            None => String::new(),
        }
    );
    let results = ScanResults {
        pencil: spec.id(),
        quantity,
        baseline: result.baseline,
        jumps: result
            .jumps
            .iter()
            .map(|j| j.iter().map(|&z| CxJson::from(z)).collect())
            .collect(),
        refined_jumps: refined.map(|r| {
            r.iter()
                .map(|j| j.iter().map(|&z| CxJson::from(z)).collect())
                .collect()
        }),
        samples: result.samples,
        skipped: result.skipped,
        fits,
        fit_tolerance: fit.then_some(fit_tol),
    };
    let meta = Meta::new("scan", seed, rtol)
        .with_tol("rank_threshold", DEFAULT_RANK_THRESHOLD)
        .with_tol("fit", fit_tol);
    if let Err(e) = maybe_write(report_path, &Report { meta, results }) {
        return CmdOutput::usage(e);
    }
    CmdOutput {
        exit: EXIT_OK,
        summary,
    }
}

fn maybe_write<T: Serialize>(path: Option<&Path>, report: &Report<T>) -> Result<(), String> {
    if let Some(p) = path {
        report
            .write(p)
            .map_err(|e| format!("cannot write report {}: {e}", p.display()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_argument_parsing() {
        assert_eq!(parse_c64("0.25").unwrap(), Complex64::new(0.25, 0.0));
        assert_eq!(
            parse_c64("0.1+0.05i").unwrap(),
            Complex64::new(0.1, 0.05)
        );
        assert_eq!(parse_c64("-0.3-0.2i").unwrap(), Complex64::new(-0.3, -0.2));
        assert_eq!(parse_c64("1e-2").unwrap(), Complex64::new(0.01, 0.0));
        assert_eq!(parse_c64("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_c64("0.5i").unwrap(), Complex64::new(0.0, 0.5));
        assert!(parse_c64("chaos").is_err());
    }

    #[test]
    fn seed_resolution_env_override() {
        // no env var in tests normally; CLI default
        std::env::remove_var("PENCIL_SEED");
        assert_eq!(resolve_seed(None), 1);
        assert_eq!(resolve_seed(Some(9)), 9);
        std::env::set_var("PENCIL_SEED", "77");
        assert_eq!(resolve_seed(Some(9)), 77);
        std::env::remove_var("PENCIL_SEED");
    }
}
