//! Closed-form evaluation of the mixed Neumann-Dirichlet eigenvalue problem
//! `d*phi_xx + a*phi = sigma*phi` on `(0, L)` with `phi_x(0) = phi(L) = 0`.
//! The principal eigenfunction is `cos(pi x / (2L))`, so everything reduces
//! to arithmetic in `(d, a, L)`.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Problem data for the eigenvalue evaluators; all fields strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenProblemSpec {
    /// Diffusivity.
    pub d: f64,
    /// Linear growth rate.
    pub a: f64,
    /// Domain length.
    pub length: f64,
}

impl EigenProblemSpec {
    pub fn new(d: f64, a: f64, length: f64) -> Result<Self> {
        for (name, value) in [("d", d), ("a", a), ("L", length)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::domain(name, format!("must be strictly positive, got {value}")));
            }
        }
        Ok(EigenProblemSpec { d, a, length })
    }
}

/// Principal eigenvalue `sigma_1 = a - d * pi^2 / (4 L^2)`.
pub fn principal_eigenvalue(spec: &EigenProblemSpec) -> f64 {
    spec.a - spec.d * PI * PI / (4.0 * spec.length * spec.length)
}

/// Critical length `L* = (pi/2) sqrt(d/a)`: the domain size at which the
/// principal eigenvalue changes sign.
pub fn critical_length(d: f64, a: f64) -> f64 {
    PI / 2.0 * (d / a).sqrt()
}

/// Critical diffusivity `d* = 4 a L^2 / pi^2`.
pub fn critical_diffusivity(a: f64, length: f64) -> f64 {
    4.0 * a * length * length / (PI * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(d: f64, a: f64, length: f64) -> f64 {
        principal_eigenvalue(&EigenProblemSpec::new(d, a, length).unwrap())
    }

    #[test]
    fn eigenvalue_examples() {
        assert!(sigma(1.0, 1.0, PI / 2.0).abs() < 1e-15);
        assert!((sigma(1.0, 1.0, PI) - 0.75).abs() < 1e-15);
        assert!((sigma(2.0, 1.0, PI / 2.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenfunction_residual_cross_check() {
        // Check sigma against the analytic eigenfunction cos(pi x/(2L)):
        // d*phi'' + a*phi - sigma*phi must vanish pointwise.
        let (d, a, length) = (1.0, 1.0, PI);
        let s = sigma(d, a, length);
        for k in 0..50 {
            let x = length * k as f64 / 50.0;
            let phi = (PI * x / (2.0 * length)).cos();
            let phi_xx = -(PI / (2.0 * length)).powi(2) * phi;
            assert!((d * phi_xx + a * phi - s * phi).abs() < 1e-14);
        }
    }

    #[test]
    fn critical_length_examples() {
        assert!((critical_length(1.0, 1.0) - PI / 2.0).abs() < 1e-15);
        assert!((critical_length(4.0, 1.0) - PI).abs() < 1e-15);
        assert!((critical_length(1.0, 4.0) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn critical_diffusivity_examples() {
        assert!((critical_diffusivity(1.0, PI / 2.0) - 1.0).abs() < 1e-15);
        assert!((critical_diffusivity(2.0, PI) - 8.0).abs() < 1e-15);
        assert!(sigma(critical_diffusivity(1.0, PI / 2.0), 1.0, PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn trichotomy_on_grid() {
        for i in 1..=10 {
            for j in 1..=10 {
                for k in 1..=10 {
                    let (d, a, length) = (0.3 * i as f64, 0.25 * j as f64, 0.4 * k as f64);
                    let s = sigma(d, a, length);
                    let d_star = critical_diffusivity(a, length);
                    let l_star = critical_length(d, a);
                    assert_eq!(s > 1e-14, d_star - d > 1e-14, "d={d} a={a} L={length}");
                    assert_eq!(s < -1e-14, d_star - d < -1e-14);
                    assert_eq!(s > 1e-14, length - l_star > 1e-14);
                    // Zero at the critical length to machine precision.
                    assert!(sigma(d, a, l_star).abs() < 1e-13);
                }
            }
        }
    }
}
