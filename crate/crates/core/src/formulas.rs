//! Closed-form expressions: trig kernels, concurrence, normalization
//! constants, cumulative success probabilities for up to three repeated
//! attempts, and the standard-teleportation fidelity bound.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::state::{check_chi, InfoState};

/// `cos^n(chi) sin^n(chi)`.
pub fn kernel_x(n: u32, chi: f64) -> f64 {
    let (s, c) = chi.sin_cos();
    (c * s).powi(n as i32)
}

/// `cos^n(chi) + sin^n(chi)`.
pub fn kernel_y(n: u32, chi: f64) -> f64 {
    let (s, c) = chi.sin_cos();
    c.powi(n as i32) + s.powi(n as i32)
}

/// `|a|^2 cos^n(chi) + |b|^2 sin^n(chi)`.
pub fn kernel_z(n: u32, chi: f64, info: &InfoState) -> f64 {
    let (s, c) = chi.sin_cos();
    info.weight_a() * c.powi(n as i32) + info.weight_b() * s.powi(n as i32)
}

/// `(N1, N2)`, the inverse norms of the two failure residuals of the primary attempt.
pub fn normalization_constants(chi: f64, info: &InfoState) -> (f64, f64) {
    let n1 = kernel_z(4, chi, info).powf(-0.5);
    let n2 = kernel_z(4, std::f64::consts::FRAC_PI_2 - chi, info).powf(-0.5);
    (n1, n2)
}

/// `C = sin(2 chi)` for `chi` in `[0, pi/4]`.
pub fn concurrence(chi: f64) -> Result<f64> {
    check_chi(chi)?;
    Ok((2.0 * chi).sin().min(1.0))
}

/// Inverse of [`concurrence`]: `chi = arcsin(C)/2` in `[0, pi/4]`.
pub fn chi_from_concurrence(c: f64) -> Result<f64> {
    if !(c.is_finite() && (0.0..=1.0).contains(&c)) {
        return Err(Error::Domain(format!("concurrence {c} outside [0, 1]")));
    }
    Ok(c.asin() / 2.0)
}

/// Form of the last denominator of the three-repetition closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ClosedFormVariant {
    /// The bracket exactly as typeset, `4 D1^2 (D1^2 - C^6)^2 - 3 C^18`.
    AsPrinted,
    /// `D3 = 4 D1^2 D2^2 - 3 C^18`: the inner factor `D1^2 - C^6` replaced
    /// by `D2 = 4 D1^2 - 3 C^6`, which is what exact enumeration gives.
    #[default]
    CorrectedNesting,
}

impl FromStr for ClosedFormVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(ClosedFormVariant::AsPrinted),
            "corrected" => Ok(ClosedFormVariant::CorrectedNesting),
            other => Err(Error::Lookup(format!("unknown closed-form variant {other:?}"))),
        }
    }
}

impl fmt::Display for ClosedFormVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosedFormVariant::AsPrinted => "printed",
            ClosedFormVariant::CorrectedNesting => "corrected",
        })
    }
}

/// Cumulative success probability after `m` repeated attempts, `m <= 3`.
pub fn closed_form_success(m: usize, c: f64, variant: ClosedFormVariant) -> Result<f64> {
    if !(c.is_finite() && (0.0..=1.0).contains(&c)) {
        return Err(Error::Domain(format!("concurrence {c} outside [0, 1]")));
    }
    if m > 3 {
        return Err(Error::Domain(format!("closed form only known for m <= 3, got {m}")));
    }
    let p = |k: i32| c.powi(k);
    let d1 = 4.0 - 3.0 * p(2);
    let d2 = 4.0 * d1 * d1 - 3.0 * p(6);

    let mut total = p(2) / 2.0;
    if m >= 1 {
        total += p(4) / 8.0 + p(6) / (8.0 * d1);
    }
    if m >= 2 {
        total += p(6) / 32.0
            + p(8) / (32.0 * d1)
            + p(12) / (32.0 * d1.powi(3))
            + p(18) / (32.0 * d1.powi(3) * d2);
    }
    if m >= 3 {
        let last = match variant {
            ClosedFormVariant::AsPrinted => {
                4.0 * d1 * d1 * (d1 * d1 - p(6)).powi(2) - 3.0 * p(18)
            }
            ClosedFormVariant::CorrectedNesting => 4.0 * d1 * d1 * d2 * d2 - 3.0 * p(18),
        };
        total += p(8) / 128.0
            + p(10) / (128.0 * d1)
            + p(14) / (128.0 * d1.powi(3))
            + p(18) / (128.0 * d1.powi(5))
            + p(20) / (128.0 * d1.powi(3) * d2)
            + p(24) / (128.0 * d1.powi(5) * d2)
            + p(36) / (128.0 * d1.powi(5) * d2.powi(3))
            + p(54) / (128.0 * d1.powi(5) * d2.powi(3) * last);
    }
    Ok(total)
}

/// Maximal average fidelity of standard teleportation over the resource, `(2 + C)/3`.
pub fn maf_sqt(c: f64) -> f64 {
    (2.0 + c) / 3.0
}
