//! Adaptive parallel transport of the fundamental solution along paths in
//! the slice coordinate `t`.
//!
//! The pulled-back system is Fuchsian,
//! `dF/dt = (sum_k R_k / (t - t_k)) F`, integrated with the Dormand–Prince
//! 5(4) embedded pair. Step size is controlled two ways: the embedded
//! error estimate must stay below `rtol` per step (relative to the
//! solution scale), and the step length in `t` is capped at a quarter of
//! the distance to the nearest puncture. Everything is sequential f64
//! arithmetic, so a fixed input produces bit-identical output.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub type CMat = DMatrix<Complex64>;

/// Supported relative tolerance window for transport.
pub const RTOL_MIN: f64 = 1e-14;
pub const RTOL_MAX: f64 = 1e-6;

#[derive(Debug, Clone, Error)]
pub enum TransportError {
    #[error("relative tolerance {0:e} outside supported range [1e-14, 1e-6]")]
    RtolOutOfRange(f64),
    #[error("step size underflow near t = {t} (remaining error {err:e}); path may graze a singularity")]
    StepUnderflow { t: Complex64, err: f64 },
    #[error("empty path")]
    EmptyPath,
}

/// One leg of a piecewise path in the t-plane.
#[derive(Debug, Clone, PartialEq)]
pub enum PathSeg {
    Line {
        from: Complex64,
        to: Complex64,
    },
    /// Circular arc `center + radius * exp(i(theta0 + u*dtheta))`, u in [0,1].
    Arc {
        center: Complex64,
        radius: f64,
        theta0: f64,
        dtheta: f64,
    },
}

impl PathSeg {
    pub fn start(&self) -> Complex64 {
        match self {
            PathSeg::Line { from, .. } => *from,
            PathSeg::Arc {
                center,
                radius,
                theta0,
                ..
            } => center + Complex64::from_polar(*radius, *theta0),
        }
    }

    pub fn end(&self) -> Complex64 {
        match self {
            PathSeg::Line { to, .. } => *to,
            PathSeg::Arc {
                center,
                radius,
                theta0,
                dtheta,
            } => center + Complex64::from_polar(*radius, theta0 + dtheta),
        }
    }

    fn point(&self, u: f64) -> Complex64 {
        match self {
            PathSeg::Line { from, to } => from + (to - from) * u,
            PathSeg::Arc {
                center,
                radius,
                theta0,
                dtheta,
            } => center + Complex64::from_polar(*radius, theta0 + dtheta * u),
        }
    }

    /// d(point)/du.
    fn velocity(&self, u: f64) -> Complex64 {
        match self {
            PathSeg::Line { from, to } => to - from,
            PathSeg::Arc {
                center: _,
                radius,
                theta0,
                dtheta,
            } => {
                let phase = Complex64::from_polar(*radius, theta0 + dtheta * u);
                Complex64::new(0.0, *dtheta) * phase
            }
        }
    }

    /// Reversed leg (same trace, opposite orientation).
    pub fn reversed(&self) -> PathSeg {
        match self {
            PathSeg::Line { from, to } => PathSeg::Line {
                from: *to,
                to: *from,
            },
            PathSeg::Arc {
                center,
                radius,
                theta0,
                dtheta,
            } => PathSeg::Arc {
                center: *center,
                radius: *radius,
                theta0: theta0 + dtheta,
                dtheta: -dtheta,
            },
        }
    }
}

/// Right-hand side of the pulled-back system.
pub struct FuchsianRhs<'a> {
    pub residues: &'a [CMat],
    pub punctures: &'a [Complex64],
    pub dim: usize,
}

impl FuchsianRhs<'_> {
    fn coefficient(&self, t: Complex64) -> CMat {
        let mut a = CMat::zeros(self.dim, self.dim);
        for (r, &tk) in self.residues.iter().zip(self.punctures) {
            a += r * (1.0 / (t - tk));
        }
        a
    }

    fn min_puncture_distance(&self, t: Complex64) -> f64 {
        self.punctures
            .iter()
            .map(|&tk| (t - tk).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Transports `F' = A(t(u)) t'(u) F`, `F(start) = initial`, along a path.
pub fn transport_path(
    rhs: &FuchsianRhs,
    path: &[PathSeg],
    rtol: f64,
    initial: CMat,
) -> Result<CMat, TransportError> {
    if !(RTOL_MIN..=RTOL_MAX).contains(&rtol) {
        return Err(TransportError::RtolOutOfRange(rtol));
    }
    if path.is_empty() {
        return Err(TransportError::EmptyPath);
    }
    let mut f = initial;
    for seg in path {
        f = transport_segment(rhs, seg, rtol, f)?;
    }
    Ok(f)
}

fn transport_segment(
    rhs: &FuchsianRhs,
    seg: &PathSeg,
    rtol: f64,
    f0: CMat,
) -> Result<CMat, TransportError> {
    let deriv = |u: f64, f: &CMat| -> CMat {
        let t = seg.point(u);
        let a = rhs.coefficient(t);
        a * f * seg.velocity(u)
    };

    let mut u = 0.0f64;
    let mut f = f0;
    let mut h = 0.05f64;
    let h_min = 1e-13;
    let mut ks: Vec<CMat> = Vec::with_capacity(7);

    while u < 1.0 {
        // Geometric cap: step length in t at most a quarter of the
        // distance to the nearest puncture.
        let speed = seg.velocity(u).norm();
        if speed > 0.0 {
            let dist = rhs.min_puncture_distance(seg.point(u));
            let cap = 0.25 * dist / speed;
            if h > cap {
                h = cap;
            }
        }
        let mut final_step = false;
        if h >= 1.0 - u {
            h = 1.0 - u;
            final_step = true;
        }
        if !final_step && h < h_min {
            return Err(TransportError::StepUnderflow {
                t: seg.point(u),
                err: f64::NAN,
            });
        }

        ks.clear();
        ks.push(deriv(u, &f));
        for stage in 0..6 {
            let mut y = f.clone();
            for (j, kj) in ks.iter().enumerate() {
                let a = A[stage][j];
                if a != 0.0 {
                    y += kj * Complex64::new(a * h, 0.0);
                }
            }
            ks.push(deriv(u + h * stage_c(stage), &y));
        }
        let mut f5 = f.clone();
        let mut f4 = f.clone();
        for (j, kj) in ks.iter().enumerate() {
            if B5[j] != 0.0 {
                f5 += kj * Complex64::new(B5[j] * h, 0.0);
            }
            if B4[j] != 0.0 {
                f4 += kj * Complex64::new(B4[j] * h, 0.0);
            }
        }
        let scale = 1.0 + crate::numeric::max_abs(&f5);
        let err = crate::numeric::max_abs(&(&f5 - &f4)) / scale;

        if err <= rtol {
            f = f5;
            if final_step {
                u = 1.0;
            } else {
                u += h;
            }
        }
        // Elementary controller with the usual safety clamp.
        let factor = if err > 0.0 {
            (0.9 * (rtol / err).powf(0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h < h_min && u < 1.0 {
            return Err(TransportError::StepUnderflow {
                t: seg.point(u),
                err,
            });
        }
    }
    Ok(f)
}

fn stage_c(stage: usize) -> f64 {
    // c-coefficients of the DP5(4) pair, skipping c_0 = 0.
    const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    C[stage]
}
