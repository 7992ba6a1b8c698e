//! Built-in pencil families and their shift operators.
//!
//! * `exshift` — the rank-two model family on the punctured line with
//!   residue `[[s, 1], [0, 0]]` and its explicit shift operator;
//! * `verma_kz` — the r-parameter family on the complement of the
//!   diagonals in C^r, fiber C^r, residue at `x_i = x_j` equal to
//!   `s_i (E_ji - E_jj) + s_j (E_ij - E_ii)`, plus the shift operators
//!   `A_k = sum_{i != k} [(s_k+1)(E_ii - E_ik) + s_i(E_kk - E_ki)] / (x_i - x_k)`;
//! * `tensor_kz` — fiber `(C^2)^{⊗n}`, one parameter, residue at
//!   `x_i = x_j` equal to `hbar * (P_ij - I/2)` with `P_ij` the slot swap;
//! * `dunkl` — reflection arrangements of `S_m` and `I2(m)` with residue
//!   `c_class(w) * (rho(w) - 1)` in the reflection or regular
//!   representation.

pub mod coxeter;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{rat_int, Mat, ParamLinear, Rat, RatFun, RatFunMatrix, Vars};
use crate::arrangement::{Arrangement, Hyperplane};
use crate::coeff::Coeff;
use crate::dd::Dd;
use crate::pencil::{LogPencil, PencilError, PencilNumeric};

#[derive(Debug, Clone, Error)]
pub enum FamilyError {
    #[error("unsupported group `{0}` (supported: S2..S5, I2(2)..I2(12))")]
    UnsupportedGroup(String),
    #[error("bad family parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

/// Fiber choice for the Dunkl family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Reflection,
    Regular,
}

/// Supported reflection groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupName {
    Symmetric(usize),
    Dihedral(usize),
}

impl GroupName {
    pub fn parse(s: &str) -> Result<Self, FamilyError> {
        let bad = || FamilyError::UnsupportedGroup(s.to_string());
        if let Some(m) = s.strip_prefix('S') {
            let m: usize = m.parse().map_err(|_| bad())?;
            if (2..=5).contains(&m) {
                return Ok(GroupName::Symmetric(m));
            }
            return Err(bad());
        }
        if let Some(rest) = s.strip_prefix("I2(") {
            let m: usize = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if (2..=12).contains(&m) {
                return Ok(GroupName::Dihedral(m));
            }
            return Err(bad());
        }
        Err(bad())
    }
}

impl std::fmt::Display for GroupName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupName::Symmetric(m) => write!(f, "S{m}"),
            GroupName::Dihedral(m) => write!(f, "I2({m})"),
        }
    }
}

/// In-memory form of the CLI's pencil-spec file for built-in families.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    ExShift,
    VermaKz { r: usize },
    TensorKz { n: usize },
    Dunkl { group: GroupName, rep: RepKind },
}

/// A built pencil in whichever coefficient ring the family needs.
#[derive(Debug, Clone)]
pub enum AnyPencil {
    Exact(LogPencil<Rat>),
    Approx(LogPencil<Dd>),
}

impl AnyPencil {
    pub fn numeric(&self) -> PencilNumeric {
        match self {
            AnyPencil::Exact(p) => p.numeric(),
            AnyPencil::Approx(p) => p.numeric(),
        }
    }

    pub fn param_count(&self) -> usize {
        match self {
            AnyPencil::Exact(p) => p.param_count(),
            AnyPencil::Approx(p) => p.param_count(),
        }
    }

    pub fn fiber_dim(&self) -> usize {
        match self {
            AnyPencil::Exact(p) => p.fiber_dim(),
            AnyPencil::Approx(p) => p.fiber_dim(),
        }
    }

    pub fn as_exact(&self) -> Option<&LogPencil<Rat>> {
        match self {
            AnyPencil::Exact(p) => Some(p),
            AnyPencil::Approx(_) => None,
        }
    }
}

/// Dispatches a family spec to its builder.
pub fn parse_family(spec: &FamilySpec) -> Result<AnyPencil, FamilyError> {
    match spec {
        FamilySpec::ExShift => Ok(AnyPencil::Exact(build_exshift())),
        FamilySpec::VermaKz { r } => Ok(AnyPencil::Exact(build_verma_kz(*r)?)),
        FamilySpec::TensorKz { n } => Ok(AnyPencil::Exact(build_tensor_kz(*n)?)),
        FamilySpec::Dunkl { group, rep } => build_dunkl(*group, *rep),
    }
}

/// The model family on C^*: fiber C^2, one parameter, residue
/// `[[s, 1], [0, 0]]` at `x = 0`.
pub fn build_exshift() -> LogPencil<Rat> {
    let h = Hyperplane::new(vec![rat_int(1)], rat_int(0), "x=0").unwrap();
    let arr = Arrangement::new(1, vec![h]).unwrap();
    let constant = Mat::from_rows(vec![
        vec![rat_int(0), rat_int(1)],
        vec![rat_int(0), rat_int(0)],
    ]);
    let lin = Mat::from_rows(vec![
        vec![rat_int(1), rat_int(0)],
        vec![rat_int(0), rat_int(0)],
    ]);
    let residue = ParamLinear::new(constant, vec![lin]).unwrap();
    LogPencil::new(arr, 2, vec!["s".into()], vec!["x".into()], vec![residue]).unwrap()
}

/// Shift operator of the model family:
/// `A(s, x) = [[x, x/s - 1/(s+1)], [0, 1]]`.
pub fn build_exshift_shift() -> RatFunMatrix {
    let vars = Vars::new(vec!["s", "x"]);
    let s = RatFun::var(&vars, "s").unwrap();
    let x = RatFun::var(&vars, "x").unwrap();
    let one = RatFun::one(&vars);
    let a12 = x
        .div(&s)
        .unwrap()
        .sub(&one.div(&s.add(&one)).unwrap());
    RatFunMatrix::from_entries(
        &vars,
        2,
        vec![x, a12, RatFun::zero(&vars), one],
    )
    .unwrap()
}

/// The r-string family: base is the complement of the diagonals in C^r,
/// fiber C^r, parameters `s_1..s_r`; the residue at `x_i = x_j` is
/// `C_ij(s) = s_i (E_ji - E_jj) + s_j (E_ij - E_ii)`.
pub fn build_verma_kz(r: usize) -> Result<LogPencil<Rat>, FamilyError> {
    if r < 2 {
        return Err(FamilyError::BadParameter(format!(
            "verma_kz needs r >= 2, got {r}"
        )));
    }
    let param_names: Vec<String> = (1..=r).map(|j| format!("s{j}")).collect();
    let coord_names: Vec<String> = (1..=r).map(|i| format!("x{i}")).collect();
    let mut hyperplanes = Vec::new();
    let mut residues = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let mut normal = vec![rat_int(0); r];
            normal[i] = rat_int(1);
            normal[j] = rat_int(-1);
            hyperplanes.push(
                Hyperplane::new(normal, rat_int(0), format!("x{}=x{}", i + 1, j + 1)).unwrap(),
            );
            let mut res = ParamLinear::<Rat>::zero(r, r);
            // s_i-coefficient: E_ji - E_jj; s_j-coefficient: E_ij - E_ii
            *res.linear_mut(i).at_mut(j, i) = rat_int(1);
            *res.linear_mut(i).at_mut(j, j) = rat_int(-1);
            *res.linear_mut(j).at_mut(i, j) = rat_int(1);
            *res.linear_mut(j).at_mut(i, i) = rat_int(-1);
            residues.push(res);
        }
    }
    let arr = Arrangement::new(r, hyperplanes).map_err(PencilError::from)?;
    Ok(LogPencil::new(arr, r, param_names, coord_names, residues)?)
}

/// Shift operator `A_k` (1-based `k`) of the r-string family:
/// `sum_{i != k} [(s_k+1)(E_ii - E_ik) + s_i (E_kk - E_ki)] / (x_i - x_k)`.
pub fn build_verma_kz_shift(r: usize, k: usize) -> Result<RatFunMatrix, FamilyError> {
    if r < 2 {
        return Err(FamilyError::BadParameter(format!(
            "verma_kz needs r >= 2, got {r}"
        )));
    }
    if !(1..=r).contains(&k) {
        return Err(FamilyError::BadParameter(format!(
            "shift index k = {k} out of range 1..={r}"
        )));
    }
    let names: Vec<String> = (1..=r)
        .map(|j| format!("s{j}"))
        .chain((1..=r).map(|i| format!("x{i}")))
        .collect();
    let vars = Vars::new(names);
    let k0 = k - 1;
    let sk = RatFun::var(&vars, &format!("s{k}")).unwrap();
    let xk = RatFun::var(&vars, &format!("x{k}")).unwrap();
    let one = RatFun::one(&vars);
    let mut a = RatFunMatrix::zero(&vars, r);
    for i0 in 0..r {
        if i0 == k0 {
            continue;
        }
        let i = i0 + 1;
        let si = RatFun::var(&vars, &format!("s{i}")).unwrap();
        let xi = RatFun::var(&vars, &format!("x{i}")).unwrap();
        let denom = xi.sub(&xk);
        let skp1 = sk.add(&one);
        let c1 = skp1.div(&denom).unwrap();
        let c2 = si.div(&denom).unwrap();
        // (s_k+1)(E_ii - E_ik)
        *a.at_mut(i0, i0) = a.at(i0, i0).add(&c1);
        *a.at_mut(i0, k0) = a.at(i0, k0).sub(&c1);
        // s_i (E_kk - E_ki)
        *a.at_mut(k0, k0) = a.at(k0, k0).add(&c2);
        *a.at_mut(k0, i0) = a.at(k0, i0).sub(&c2);
    }
    Ok(a)
}

/// n-point tensor family: fiber `(C^2)^{⊗n}`, one parameter `hbar`,
/// residue at `x_i = x_j` equal to `hbar * (P_ij - I/2)`.
pub fn build_tensor_kz(n: usize) -> Result<LogPencil<Rat>, FamilyError> {
    if !(2..=8).contains(&n) {
        return Err(FamilyError::BadParameter(format!(
            "tensor_kz needs 2 <= n <= 8, got {n}"
        )));
    }
    let fiber = 1usize << n;
    let coord_names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut hyperplanes = Vec::new();
    let mut residues = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut normal = vec![rat_int(0); n];
            normal[i] = rat_int(1);
            normal[j] = rat_int(-1);
            hyperplanes.push(
                Hyperplane::new(normal, rat_int(0), format!("x{}=x{}", i + 1, j + 1)).unwrap(),
            );
            // Omega^{ij} = P_ij - I/2 on the bit-indexed tensor basis.
            let mut omega = Mat::<Rat>::zeros(fiber, fiber);
            for b in 0..fiber {
                let bi = (b >> i) & 1;
                let bj = (b >> j) & 1;
                let swapped = if bi == bj {
                    b
                } else {
                    b ^ (1 << i) ^ (1 << j)
                };
                *omega.at_mut(swapped, b) = rat_int(1);
                let v = omega.at(b, b) - crate::algebra::rat(1, 2);
                *omega.at_mut(b, b) = v;
            }
            let res = ParamLinear::new(Mat::zeros(fiber, fiber), vec![omega]).unwrap();
            residues.push(res);
        }
    }
    let arr = Arrangement::new(n, hyperplanes).map_err(PencilError::from)?;
    Ok(LogPencil::new(
        arr,
        fiber,
        vec!["hbar".into()],
        coord_names,
        residues,
    )?)
}

/// Dunkl family for a reflection group: arrangement of mirrors in the
/// reflection representation, residue `c_class(w) (rho(w) - 1)`.
pub fn build_dunkl(group: GroupName, rep: RepKind) -> Result<AnyPencil, FamilyError> {
    match group {
        GroupName::Symmetric(m) => {
            if !(2..=5).contains(&m) {
                return Err(FamilyError::UnsupportedGroup(group.to_string()));
            }
            let g = coxeter::symmetric_group(m);
            Ok(AnyPencil::Exact(dunkl_from_group(&g, rep)?))
        }
        GroupName::Dihedral(m) => {
            if !(2..=12).contains(&m) {
                return Err(FamilyError::UnsupportedGroup(group.to_string()));
            }
            if matches!(m, 2 | 3 | 4 | 6) {
                let g = coxeter::dihedral_group_exact(m);
                Ok(AnyPencil::Exact(dunkl_from_group(&g, rep)?))
            } else {
                let g = coxeter::dihedral_group_dd(m);
                Ok(AnyPencil::Approx(dunkl_from_group(&g, rep)?))
            }
        }
    }
}

fn dunkl_from_group<K: Coeff>(
    g: &coxeter::ReflectionGroup<K>,
    rep: RepKind,
) -> Result<LogPencil<K>, FamilyError> {
    let nclasses = g.class_count;
    let param_names: Vec<String> = if nclasses == 1 {
        vec!["c".into()]
    } else {
        (1..=nclasses).map(|i| format!("c{i}")).collect()
    };
    let coord_names: Vec<String> = (1..=g.rank).map(|i| format!("y{i}")).collect();
    let fiber = match rep {
        RepKind::Reflection => g.rank,
        RepKind::Regular => g.order,
    };
    let mut hyperplanes = Vec::new();
    let mut residues = Vec::new();
    for refl in &g.reflections {
        let h = Hyperplane::new(refl.normal.clone(), K::zero(), refl.label.clone())
            .map_err(PencilError::from)?;
        hyperplanes.push(h);
        let rho: Mat<K> = match rep {
            RepKind::Reflection => refl.matrix.clone(),
            RepKind::Regular => g.regular_matrix(refl.element),
        };
        let coeff = rho.sub(&Mat::identity(fiber));
        let mut res = ParamLinear::<K>::zero(fiber, nclasses);
        *res.linear_mut(refl.class) = coeff;
        residues.push(res);
    }
    let arr = Arrangement::new(g.rank, hyperplanes).map_err(PencilError::from)?;
    Ok(LogPencil::new(
        arr, fiber, param_names, coord_names, residues,
    )?)
}

/// Returns a copy of the pencil with `delta` added to one constant entry
/// of the labeled residue; the standard negative fixture for flatness.
pub fn perturb_residue(
    p: &LogPencil<Rat>,
    label: &str,
    row: usize,
    col: usize,
    delta: Rat,
) -> Result<LogPencil<Rat>, PencilError> {
    let idx = p.arrangement().index_of(label)?;
    let mut residues = p.residues().to_vec();
    let v = residues[idx].constant().at(row, col) + &delta;
    *residues[idx].constant_mut().at_mut(row, col) = v;
    LogPencil::new(
        p.arrangement().clone(),
        p.fiber_dim(),
        p.param_names().to_vec(),
        p.coord_names().to_vec(),
        residues,
    )
}
