//! Model parameters, nondimensionalization, equilibria and the bookkeeping
//! around initial data: profile construction, the initial-data validator,
//! a priori bounds and the squeeze iteration for the long-time limits.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Dimensional model constants. All strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalParameters {
    /// Prey intrinsic growth rate, 1/time.
    pub r: f64,
    /// Prey carrying capacity, density.
    pub g: f64,
    /// Predator growth rate, 1/time.
    pub a: f64,
    /// Max per-capita reduction rate of the prey, 1/(density * time).
    pub b: f64,
    /// Max per-capita reduction rate of the predator, 1/(density * time).
    pub c: f64,
    /// Environmental protection level for the predator, density.
    pub g1: f64,
    /// Prey diffusivity, length^2/time.
    pub d1: f64,
    /// Predator diffusivity, length^2/time.
    pub d2: f64,
}

impl DimensionalParameters {
    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("r", self.r),
            ("G", self.g),
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("G1", self.g1),
            ("d1", self.d1),
            ("d2", self.d2),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::domain(name, format!("must be strictly positive, got {value}")));
            }
        }
        Ok(())
    }
}

/// Nondimensional model constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    /// Predation pressure.
    pub delta: f64,
    /// Relative refuge level.
    pub alpha: f64,
    /// Relative predator growth rate.
    pub kappa: f64,
    /// Diffusivity ratio (predator over prey).
    pub d_ratio: f64,
    /// Stefan expansion coefficient.
    pub mu: f64,
    /// Predator weight in the Stefan condition.
    pub rho: f64,
}

/// Outcome of the hypothesis check `delta * alpha + delta < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H1Report {
    pub satisfied: bool,
    /// `1 - delta*alpha - delta`; positive iff the hypothesis holds.
    pub margin: f64,
}

impl Parameters {
    pub fn new(delta: f64, alpha: f64, kappa: f64, d_ratio: f64, mu: f64, rho: f64) -> Result<Self> {
        let p = Parameters { delta, alpha, kappa, d_ratio, mu, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("delta", self.delta),
            ("alpha", self.alpha),
            ("kappa", self.kappa),
            ("Dratio", self.d_ratio),
            ("mu", self.mu),
            ("rho", self.rho),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::domain(name, format!("must be strictly positive, got {value}")));
            }
        }
        Ok(())
    }

    /// Hypothesis check with its margin.
    pub fn h1(&self) -> H1Report {
        let margin = 1.0 - self.delta * self.alpha - self.delta;
        H1Report { satisfied: margin > 0.0, margin }
    }

    pub fn h1_satisfied(&self) -> bool {
        self.h1().satisfied
    }
}

/// `validate_h1` in operation form.
pub fn validate_h1(p: &Parameters) -> H1Report {
    p.h1()
}

/// Rescale dimensional constants to the nondimensional set. The Stefan
/// coefficients are not produced by the rescaling and are supplied directly.
pub fn nondimensionalize(p: &DimensionalParameters, mu: f64, rho: f64) -> Result<Parameters> {
    p.validate()?;
    Parameters::new(
        p.a * p.b * p.g / (p.r * p.c),
        p.g1 / p.g,
        p.a / p.r,
        p.d2 / p.d1,
        mu,
        rho,
    )
}

/// Prey kinetics `u(1 - u) - delta*u*v`.
pub fn prey_kinetics(p: &Parameters, u: f64, v: f64) -> f64 {
    u * (1.0 - u) - p.delta * u * v
}

/// Predator kinetics `kappa*v*(1 - v/(u + alpha))`; well defined for `u >= 0`.
pub fn predator_kinetics(p: &Parameters, u: f64, v: f64) -> f64 {
    p.kappa * v * (1.0 - v / (u + p.alpha))
}

/// Steady states of the kinetics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibria {
    pub e1: (f64, f64),
    pub e2: (f64, f64),
    pub e3: (f64, f64),
    /// Interior equilibrium, present iff `delta * alpha < 1`.
    pub e_star: Option<(f64, f64)>,
}

pub fn equilibria(p: &Parameters) -> Equilibria {
    let e_star = if p.delta * p.alpha < 1.0 {
        let u_star = (1.0 - p.delta * p.alpha) / (1.0 + p.delta);
        Some((u_star, p.alpha + u_star))
    } else {
        None
    };
    Equilibria {
        e1: (0.0, 0.0),
        e2: (0.0, p.alpha),
        e3: (1.0, 0.0),
        e_star,
    }
}

/// Monotone upper/lower bound sequences from the squeeze iteration, together
/// with their common limits.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeSequences {
    pub u_upper: Vec<f64>,
    pub u_lower: Vec<f64>,
    pub v_upper: Vec<f64>,
    pub v_lower: Vec<f64>,
    pub limits: (f64, f64),
}

/// Iterate the bound recurrence `n` times. Requires the hypothesis margin to
/// be positive; outside of it the bounds need not stay positive.
pub fn squeeze_limits(p: &Parameters, n: usize) -> Result<SqueezeSequences> {
    if !p.h1_satisfied() {
        return Err(Error::Precondition(
            "squeeze iteration requires delta*alpha + delta < 1".into(),
        ));
    }
    if n < 1 {
        return Err(Error::Precondition("squeeze iteration needs n >= 1".into()));
    }
    let mut u_upper = Vec::with_capacity(n);
    let mut u_lower = Vec::with_capacity(n);
    let mut v_upper = Vec::with_capacity(n);
    let mut v_lower = Vec::with_capacity(n);
    let mut ub = 1.0;
    for _ in 0..n {
        let vb = ub + p.alpha;
        let ul = 1.0 - p.delta * vb;
        let vl = ul + p.alpha;
        u_upper.push(ub);
        v_upper.push(vb);
        u_lower.push(ul);
        v_lower.push(vl);
        ub = 1.0 - p.delta * vl;
    }
    let eq = equilibria(p).e_star.expect("interior equilibrium exists under the hypothesis");
    Ok(SqueezeSequences {
        u_upper,
        u_lower,
        v_upper,
        v_lower,
        limits: eq,
    })
}

/// Built-in analytic initial-profile families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProfileFamily {
    /// `amp * cos(pi*x / (2*h0))`.
    Cosine { amp_u: f64, amp_v: f64 },
}

/// Initial data: sampled profiles on `[0, h0]` plus analytic endpoint
/// metadata so the initial-data conditions are checkable exactly for the
/// built-in families.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialProfile {
    pub h0: f64,
    /// Sample locations, uniform on `[0, h0]`.
    pub xs: Vec<f64>,
    pub u0: Vec<f64>,
    pub v0: Vec<f64>,
    pub family: Option<ProfileFamily>,
    pub u0_sup: f64,
    pub v0_sup: f64,
    /// Sup norm of `u0'` on `[0, h0]`.
    pub u0_deriv_sup: f64,
    pub v0_deriv_sup: f64,
}

/// Build a profile from an analytic family sampled at `n` nodes.
pub fn make_initial_profile(
    family: ProfileFamily,
    h0: f64,
    n: usize,
) -> Result<InitialProfile> {
    let ProfileFamily::Cosine { amp_u, amp_v } = family;
    if !(amp_u > 0.0) {
        return Err(Error::domain("amp_u", format!("must be strictly positive, got {amp_u}")));
    }
    if !(amp_v > 0.0) {
        return Err(Error::domain("amp_v", format!("must be strictly positive, got {amp_v}")));
    }
    if !(h0 > 0.0) {
        return Err(Error::domain("h0", format!("must be strictly positive, got {h0}")));
    }
    if n < 3 {
        return Err(Error::domain("n", format!("profile needs at least 3 nodes, got {n}")));
    }
    let dx = h0 / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|j| j as f64 * dx).collect();
    let shape = |x: f64| (PI * x / (2.0 * h0)).cos();
    let u0: Vec<f64> = xs.iter().map(|&x| amp_u * shape(x)).collect();
    let v0: Vec<f64> = xs.iter().map(|&x| amp_v * shape(x)).collect();
    let profile = InitialProfile {
        h0,
        xs,
        u0,
        v0,
        family: Some(family),
        u0_sup: amp_u,
        v0_sup: amp_v,
        // |d/dx amp*cos(pi x/(2 h0))| peaks at x = h0.
        u0_deriv_sup: amp_u * PI / (2.0 * h0),
        v0_deriv_sup: amp_v * PI / (2.0 * h0),
    };
    profile.validate()?;
    Ok(profile)
}

impl InitialProfile {
    /// Evaluate `(u0, v0)` at `x`; analytic for built-in families, linear
    /// interpolation for tabulated data.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match self.family {
            Some(ProfileFamily::Cosine { amp_u, amp_v }) => {
                let s = (PI * x / (2.0 * self.h0)).cos();
                (amp_u * s, amp_v * s)
            }
            None => {
                let n = self.xs.len();
                if x <= 0.0 {
                    return (self.u0[0], self.v0[0]);
                }
                if x >= self.h0 {
                    return (self.u0[n - 1], self.v0[n - 1]);
                }
                let dx = self.h0 / (n - 1) as f64;
                let j = ((x / dx).floor() as usize).min(n - 2);
                let w = (x - self.xs[j]) / dx;
                (
                    self.u0[j] * (1.0 - w) + self.u0[j + 1] * w,
                    self.v0[j] * (1.0 - w) + self.v0[j + 1] * w,
                )
            }
        }
    }

    /// Check the initial-data conditions: zero slope at the origin, zero value
    /// at the front, strict positivity inside, positive initial front.
    pub fn validate(&self) -> Result<()> {
        if !(self.h0 > 0.0) {
            return Err(Error::domain("h0", "initial front position must be positive"));
        }
        let n = self.xs.len();
        if n < 3 || self.u0.len() != n || self.v0.len() != n {
            return Err(Error::domain("profile", "need at least 3 consistent sample columns"));
        }
        let check = |name: &str, data: &[f64], sup: f64| -> Result<()> {
            if data[n - 1].abs() > 1e-12 * sup.max(1.0) {
                return Err(Error::domain(
                    name,
                    format!("must vanish at the front, got {}", data[n - 1]),
                ));
            }
            for (j, &value) in data.iter().enumerate().take(n - 1) {
                if !(value > 0.0) {
                    return Err(Error::domain(
                        name,
                        format!("must be strictly positive inside, got {value} at node {j}"),
                    ));
                }
            }
            // Zero slope at the origin: exact for analytic families, a
            // one-sided second-order difference for tabulated data.
            let slope = match self.family {
                Some(ProfileFamily::Cosine { .. }) => 0.0,
                None => {
                    let dx = self.h0 / (n - 1) as f64;
                    (-3.0 * data[0] + 4.0 * data[1] - data[2]) / (2.0 * dx)
                }
            };
            if slope.abs() > 1e-6 * sup {
                return Err(Error::domain(
                    name,
                    format!("slope at the origin must vanish, got {slope}"),
                ));
            }
            Ok(())
        };
        check("u0", &self.u0, self.u0_sup)?;
        check("v0", &self.v0, self.v0_sup)?;
        Ok(())
    }

    /// `integral of u0 over [0, h0]` by composite Simpson quadrature.
    pub fn integral_u0(&self) -> f64 {
        simpson(&self.u0, self.h0 / (self.xs.len() - 1) as f64)
    }

    pub fn integral_v0(&self) -> f64 {
        simpson(&self.v0, self.h0 / (self.xs.len() - 1) as f64)
    }
}

/// Composite Simpson rule on a uniform grid; falls back to a 3/8 tail when
/// the interval count is odd.
pub(crate) fn simpson(data: &[f64], dx: f64) -> f64 {
    let n = data.len();
    assert!(n >= 3);
    let intervals = n - 1;
    let (even_end, mut total) = if intervals % 2 == 0 {
        (n - 1, 0.0)
    } else {
        // Simpson 3/8 on the last three intervals.
        let tail = 3.0 * dx / 8.0
            * (data[n - 4] + 3.0 * data[n - 3] + 3.0 * data[n - 2] + data[n - 1]);
        (n - 4, tail)
    };
    let mut acc = data[0] + data[even_end];
    let mut j = 1;
    while j < even_end {
        acc += 4.0 * data[j];
        if j + 1 < even_end {
            acc += 2.0 * data[j + 1];
        }
        j += 2;
    }
    total += acc * dx / 3.0;
    total
}

/// Sup bounds for the densities and the front speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriBounds {
    /// Sup bound for the prey density.
    pub m1: f64,
    /// Sup bound for the predator density.
    pub m2: f64,
    /// Barrier slope constant.
    pub m: f64,
    /// Upper bound on the front speed.
    pub lambda: f64,
}

pub fn apriori_bounds(p: &Parameters, ip: &InitialProfile) -> AprioriBounds {
    let m1 = 1.0_f64.max(ip.u0_sup);
    let m2 = (m1 + p.alpha).max(ip.v0_sup);
    let m = [
        1.0 / ip.h0,
        std::f64::consts::SQRT_2 / 2.0,
        (p.kappa / (2.0 * p.d_ratio)).sqrt(),
        ip.u0_deriv_sup / m1,
        ip.v0_deriv_sup / m2,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);
    let lambda = 2.0 * m * p.mu * (m1 + p.rho * m2);
    AprioriBounds { m1, m2, m, lambda }
}
