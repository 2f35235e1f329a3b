//! The two-parameter state family and two-qubit state validation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qmath::{re, Mat4};
use crate::scalar::Real;

/// Mixing weight `W ∈ [0, 1]` and angle `θ ∈ [0, π/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateParams<T> {
    pub w: T,
    pub theta: T,
}

impl<T: Real> StateParams<T> {
    pub fn new(w: T, theta: T) -> Result<Self> {
        let p = Self { w, theta };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        let slack = T::lit(T::CHECK_TOL);
        if !(self.w >= T::zero() && self.w <= T::one()) {
            return Err(Error::InvalidParams(format!("W = {} outside [0, 1]", self.w)));
        }
        if !(self.theta >= -slack && self.theta <= T::FRAC_PI_2() + slack) {
            return Err(Error::InvalidParams(format!("theta = {} outside [0, pi/2]", self.theta)));
        }
        Ok(())
    }
}

/// Two-qubit density matrix, Alice on the first qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitState<T> {
    rho: Mat4<T>,
}

impl<T: Real> TwoQubitState<T> {
    /// Wraps `rho` after checking Hermiticity, trace and positivity.
    pub fn new(rho: Mat4<T>) -> Result<Self> {
        let report = validate_matrix(&rho);
        if let Some(msg) = report.failures.first() {
            if report.hermiticity_residual > T::lit(T::CHECK_TOL) {
                return Err(Error::NonHermitian { residual: report.hermiticity_residual.to_f64().unwrap_or(f64::NAN) });
            }
            return Err(Error::InvalidParams(msg.clone()));
        }
        Ok(Self { rho })
    }

    /// Wraps `rho` without checks; `validate` can be run later.
    pub fn new_unchecked(rho: Mat4<T>) -> Self {
        Self { rho }
    }

    pub fn rho(&self) -> &Mat4<T> {
        &self.rho
    }
}

/// `W|ψ⟩⟨ψ| + (1−W)/2 · I ⊗ ρ_B` with `|ψ⟩ = cosθ|HH⟩ + sinθ|VV⟩`.
pub fn state_family<T: Real>(params: StateParams<T>) -> Result<TwoQubitState<T>> {
    params.check()?;
    let StateParams { w, theta } = params;
    let (s, c) = theta.sin_cos();
    let half_noise = (T::one() - w) * T::lit(0.5);
    let mut rho = Mat4::zeros();
    // |ψ⟩⟨ψ| lives on the HH/VV corners
    rho[(0, 0)] = re(w * c * c);
    rho[(3, 3)] = re(w * s * s);
    rho[(0, 3)] = re(w * s * c);
    rho[(3, 0)] = re(w * s * c);
    // I ⊗ diag(cos²θ, sin²θ)
    for a in 0..2 {
        rho[(2 * a, 2 * a)] += re(half_noise * c * c);
        rho[(2 * a + 1, 2 * a + 1)] += re(half_noise * s * s);
    }
    Ok(TwoQubitState::new_unchecked(rho))
}

/// Outcome of the density-matrix checks.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport<T> {
    pub hermiticity_residual: T,
    pub trace_deviation: T,
    pub min_eigenvalue: T,
    pub failures: Vec<String>,
}

impl<T> ValidationReport<T> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate<T: Real>(state: &TwoQubitState<T>) -> ValidationReport<T> {
    validate_matrix(state.rho())
}

pub fn validate_matrix<T: Real>(rho: &Mat4<T>) -> ValidationReport<T> {
    let mut failures = Vec::new();
    if !rho.is_finite() {
        return ValidationReport {
            hermiticity_residual: T::infinity(),
            trace_deviation: T::infinity(),
            min_eigenvalue: T::neg_infinity(),
            failures: vec!["non-finite entries".into()],
        };
    }
    let herm = rho.hermiticity_residual();
    let tr = rho.trace();
    let trace_deviation = (tr - Complex::new(T::one(), T::zero())).norm();
    let min_eigenvalue = match rho.eigenvalues_hermitian() {
        Ok(ev) => ev[0],
        Err(e) => {
            failures.push(format!("eigenvalues: {e}"));
            T::nan()
        }
    };
    if herm > T::lit(T::CHECK_TOL) {
        failures.push(format!("Hermiticity residual {herm:e}"));
    }
    if trace_deviation > T::lit(T::CHECK_TOL) {
        failures.push(format!("trace deviation {trace_deviation}"));
    }
    if min_eigenvalue < -T::lit(T::PSD_TOL) {
        failures.push(format!("minimum eigenvalue {min_eigenvalue:e}"));
    }
    ValidationReport { hermiticity_residual: herm, trace_deviation, min_eigenvalue, failures }
}

/// Uhlmann fidelity `(Tr √(√a b √a))²`, clamped to `[0, 1]`.
pub fn fidelity<T: Real>(a: &TwoQubitState<T>, b: &TwoQubitState<T>) -> Result<T> {
    let sa = a.rho().sqrt_psd()?;
    let inner = sa * *b.rho() * sa;
    let ev = inner.eigenvalues_hermitian()?;
    let root_sum: T = ev.iter().map(|&l| l.max(T::zero()).sqrt()).sum();
    let f = root_sum * root_sum;
    if !f.is_finite() {
        return Err(Error::NumericalFailure("fidelity is not finite".into()));
    }
    Ok(f.min(T::one()).max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn half_mixed_maximally_entangled() {
        let s = state_family(StateParams::new(0.5, FRAC_PI_4).unwrap()).unwrap();
        let r = s.rho();
        for (i, d) in [0.375, 0.125, 0.125, 0.375].iter().enumerate() {
            assert!((r[(i, i)].re - d).abs() < 1e-15);
        }
        assert!((r[(0, 3)].re - 0.25).abs() < 1e-15);
        assert!(validate(&s).passed());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(StateParams::new(1.2, 0.1).is_err());
        assert!(StateParams::new(0.5, 2.0).is_err());
        assert!(state_family(StateParams { w: -0.1, theta: 0.2 }).is_err());
    }

    #[test]
    fn trace_failure_is_reported() {
        let bad = Mat4::<f64>::identity().scale(1.5 / 4.0);
        let rep = validate_matrix(&bad);
        assert!(!rep.passed());
        assert!((rep.trace_deviation - 0.5).abs() < 1e-15);
        assert!(TwoQubitState::new(bad).is_err());
    }
}
