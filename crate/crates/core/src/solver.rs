//! Time integration of the free-boundary system on the fixed computational
//! domain `y = x/h(t) in [0,1]`, with the Stefan condition driving the front.
//! Diffusion is implicit (one tridiagonal solve per species per step),
//! advection and reaction are explicit, and the front is advanced with an
//! explicit predictor from the current boundary flux.
//!
//! The local change of variables used by the existence argument (a cutoff
//! map valid only while the front stays within `h0/8` of its start) is also
//! implemented here, as closed-form coefficient evaluators.

use crate::error::{Error, Result};
use crate::model::{
    apriori_bounds, predator_kinetics, prey_kinetics, AprioriBounds, InitialProfile, Parameters,
};

// ---------------------------------------------------------------------------
// Cutoff map and its transformed-system coefficients.
// ---------------------------------------------------------------------------

/// Cutoff function for the local front-straightening map
/// `x = y + zeta(y) * (h - h0)`: equal to 1 for `|y - h0| <= h0/4`, equal to
/// 0 for `|y - h0| > h0/2`, with `|zeta'| <= 6/h0`. The transition uses a
/// trapezoidal slope profile whose ramps are degree-7 smoothsteps, so the
/// slope bound is attained exactly and the function is C^3 at the junctions.
#[derive(Debug, Clone, Copy)]
pub struct Cutoff {
    pub h0: f64,
}

// Degree-7 smoothstep and its integral/derivative.
fn smoothstep3(t: f64) -> f64 {
    let t2 = t * t;
    t2 * t2 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t2 * t)
}

fn smoothstep3_int(t: f64) -> f64 {
    let t2 = t * t;
    let t4 = t2 * t2;
    t4 * t * (7.0 - 14.0 * t + 10.0 * t2 - 2.5 * t2 * t)
}

fn smoothstep3_deriv(t: f64) -> f64 {
    let t2 = t * t;
    140.0 * t2 * t * (1.0 - 3.0 * t + 3.0 * t2 - t2 * t)
}

impl Cutoff {
    pub fn new(h0: f64) -> Result<Self> {
        if !(h0 > 0.0) {
            return Err(Error::domain("h0", "must be strictly positive"));
        }
        Ok(Cutoff { h0 })
    }

    // Transition shape P on [0,1]: ramps of width 1/3 around a plateau of
    // slope 3/2, so that P(0)=0, P(1)=1 and max P' = 3/2.
    fn shape(t: f64) -> (f64, f64, f64) {
        if t <= 1.0 / 3.0 {
            let tau = 3.0 * t;
            (
                0.5 * smoothstep3_int(tau),
                1.5 * smoothstep3(tau),
                4.5 * smoothstep3_deriv(tau),
            )
        } else if t < 2.0 / 3.0 {
            (0.25 + 1.5 * (t - 1.0 / 3.0), 1.5, 0.0)
        } else {
            let tau = 3.0 * (1.0 - t);
            (
                1.0 - 0.5 * smoothstep3_int(tau),
                1.5 * smoothstep3(tau),
                -4.5 * smoothstep3_deriv(tau),
            )
        }
    }

    /// `(zeta, zeta', zeta'')` at `y`.
    pub fn eval(&self, y: f64) -> (f64, f64, f64) {
        let h0 = self.h0;
        let dist = (y - h0).abs();
        if dist <= 0.25 * h0 {
            return (1.0, 0.0, 0.0);
        }
        if dist >= 0.5 * h0 {
            return (0.0, 0.0, 0.0);
        }
        let t = (dist - 0.25 * h0) / (0.25 * h0);
        let (p, dp, ddp) = Self::shape(t);
        let sign = if y >= h0 { 1.0 } else { -1.0 };
        let scale = 4.0 / h0;
        (1.0 - p, -sign * dp * scale, -ddp * scale * scale)
    }
}

/// Coefficients of the locally transformed system at `(h, h', y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformCoefficients {
    pub zeta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Evaluate the straightening-map coefficients. The map is a diffeomorphism
/// only while `|h - h0| <= h0/8`; outside that range the request is rejected.
pub fn transform_coefficients(
    cutoff: &Cutoff,
    h: f64,
    h_prime: f64,
    y: f64,
) -> Result<TransformCoefficients> {
    let h0 = cutoff.h0;
    let excursion = h - h0;
    if excursion.abs() > h0 / 8.0 + 1e-14 * h0 {
        return Err(Error::domain(
            "h",
            format!("map invertible only for |h - h0| <= h0/8; got |{h} - {h0}| = {}", excursion.abs()),
        ));
    }
    let (zeta, dz, ddz) = cutoff.eval(y);
    let denom = 1.0 + dz * excursion;
    Ok(TransformCoefficients {
        zeta,
        a: 1.0 / denom,
        b: -ddz * excursion / (denom * denom * denom),
        c: -h_prime * zeta / denom,
    })
}

// ---------------------------------------------------------------------------
// Front-fixed time integration.
// ---------------------------------------------------------------------------

/// Time-step selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtPolicy {
    /// Constant step.
    Fixed(f64),
    /// `dt = min(dt_max, 0.25 * dy * h / max(1, |h'|))`, adapting as the
    /// domain grows so the advection term stays resolved.
    CflScaled { dt_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Number of spatial intervals; nodes are `y_j = j/N`, `j = 0..=N`.
    pub n: usize,
    pub dt_policy: DtPolicy,
    pub t_max: f64,
    /// Relative positivity tolerance: values in `(-tol*max(M1,M2), 0)` are
    /// clamped to zero, anything lower is an integration fault.
    pub positivity_tol: f64,
    /// Record a trajectory sample every this many accepted steps.
    pub output_every: usize,
    /// Number of evenly spaced profile snapshots; 0 disables them.
    pub snapshots: usize,
    /// Use the first-order boundary-flux stencil (for convergence studies).
    pub first_order_flux: bool,
    /// Stop early once the vanishing pattern is sustained (front speed and
    /// mass both below threshold for `window` consecutive samples).
    pub stop_on_vanish: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: 200,
            dt_policy: DtPolicy::CflScaled { dt_max: 0.05 },
            t_max: 100.0,
            positivity_tol: 1e-12,
            output_every: 20,
            snapshots: 0,
            first_order_flux: false,
            stop_on_vanish: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 16 {
            return Err(Error::domain("N", format!("need at least 16 spatial nodes, got {}", self.n)));
        }
        match self.dt_policy {
            DtPolicy::Fixed(dt) if !(dt > 0.0) => {
                return Err(Error::domain("dt", "fixed time step must be positive"));
            }
            DtPolicy::CflScaled { dt_max } if !(dt_max > 0.0) => {
                return Err(Error::domain("dt_max", "time-step ceiling must be positive"));
            }
            _ => {}
        }
        if !(self.t_max > 0.0) {
            return Err(Error::domain("t_max", "horizon must be positive"));
        }
        if !(self.positivity_tol > 0.0) {
            return Err(Error::domain("positivity_tol", "tolerance must be positive"));
        }
        if self.output_every == 0 {
            return Err(Error::domain("output_every", "cadence must be at least 1"));
        }
        Ok(())
    }
}

/// Solution state on the front-fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MovingDomainState {
    pub t: f64,
    pub h: f64,
    /// Front speed from the latest accepted boundary flux.
    pub h_prime: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// One-sided boundary derivatives at `y = 1` and the induced front speed
/// `h' = -(mu/h) (U_y(1) + rho V_y(1))`.
pub fn boundary_flux(
    state: &MovingDomainState,
    p: &Parameters,
    first_order: bool,
) -> (f64, f64, f64) {
    let n = state.u.len() - 1;
    let dy = 1.0 / n as f64;
    let (uy, vy) = if first_order {
        (-state.u[n - 1] / dy, -state.v[n - 1] / dy)
    } else {
        // Second-order one-sided stencil with the Dirichlet value folded in.
        (
            (state.u[n - 2] - 4.0 * state.u[n - 1]) / (2.0 * dy),
            (state.v[n - 2] - 4.0 * state.v[n - 1]) / (2.0 * dy),
        )
    };
    let h_prime = -(p.mu / state.h) * (uy + p.rho * vy);
    (uy, vy, h_prime)
}

/// Thomas algorithm for a tridiagonal system with constant off-diagonals
/// except the first row (Neumann ghost doubling). Overwrites `rhs` with the
/// solution.
fn solve_tridiagonal(diag: &[f64], lower: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c_star = vec![0.0; n];
    let mut d = diag[0];
    rhs[0] /= d;
    c_star[0] = upper[0] / d;
    for i in 1..n {
        d = diag[i] - lower[i] * c_star[i - 1];
        c_star[i] = if i + 1 < n { upper[i] / d } else { 0.0 };
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c_star[i] * rhs[i + 1];
    }
}

/// Integrator bundling the parameters, config and the a priori bounds that
/// double as runtime invariants.
pub struct FrontTracker<'a> {
    pub p: &'a Parameters,
    pub cfg: &'a SolverConfig,
    pub bounds: AprioriBounds,
}

const BOUND_TOL: f64 = 1e-8;

impl<'a> FrontTracker<'a> {
    pub fn new(p: &'a Parameters, cfg: &'a SolverConfig, bounds: AprioriBounds) -> Result<Self> {
        cfg.validate()?;
        Ok(FrontTracker { p, cfg, bounds })
    }

    fn dt(&self, state: &MovingDomainState, h_prime: f64) -> f64 {
        let dy = 1.0 / self.cfg.n as f64;
        let dt = match self.cfg.dt_policy {
            DtPolicy::Fixed(dt) => dt,
            DtPolicy::CflScaled { dt_max } => {
                dt_max.min(0.25 * dy * state.h / 1.0_f64.max(h_prime.abs()))
            }
        };
        // Do not step past the horizon.
        dt.min((self.cfg.t_max - state.t).max(1e-300))
    }

    /// Advance one IMEX step.
    pub fn step(&self, state: &MovingDomainState) -> Result<MovingDomainState> {
        let p = self.p;
        let n = self.cfg.n;
        let dy = 1.0 / n as f64;
        let (_, _, h_prime) = boundary_flux(state, p, self.cfg.first_order_flux);

        if state.t > 0.0 {
            if h_prime <= 0.0 {
                return Err(Error::IntegrationFault {
                    t: state.t,
                    message: format!("front speed must stay positive, got h' = {h_prime}"),
                });
            }
            if h_prime > self.bounds.lambda + BOUND_TOL {
                return Err(Error::IntegrationFault {
                    t: state.t,
                    message: format!(
                        "front speed {h_prime} exceeds the a priori bound {}",
                        self.bounds.lambda
                    ),
                });
            }
        }

        let dt = self.dt(state, h_prime);
        let h_new = state.h + dt * h_prime;
        if !(h_new > 0.0) || !h_new.is_finite() {
            return Err(Error::Divergence { t: state.t, what: "front position".into() });
        }

        // Explicit advection + reaction.
        let mut rhs_u = vec![0.0; n];
        let mut rhs_v = vec![0.0; n];
        let adv = h_prime / state.h;
        rhs_u[0] = state.u[0] + dt * prey_kinetics(p, state.u[0], state.v[0]);
        rhs_v[0] = state.v[0] + dt * predator_kinetics(p, state.u[0], state.v[0]);
        for j in 1..n {
            let y = j as f64 * dy;
            let du = (state.u[j + 1] - state.u[j - 1]) / (2.0 * dy);
            let dv = (state.v[j + 1] - state.v[j - 1]) / (2.0 * dy);
            rhs_u[j] = state.u[j]
                + dt * (y * adv * du + prey_kinetics(p, state.u[j], state.v[j]));
            rhs_v[j] = state.v[j]
                + dt * (y * adv * dv + predator_kinetics(p, state.u[j], state.v[j]));
        }

        // Implicit diffusion on the updated domain; Neumann at y=0 via a
        // reflected ghost node, Dirichlet at y=1 folded into the last row.
        let r_u = dt / (h_new * h_new * dy * dy);
        let r_v = p.d_ratio * r_u;
        let assemble = |r: f64| {
            let mut diag = vec![1.0 + 2.0 * r; n];
            let mut lower = vec![-r; n];
            let mut upper = vec![-r; n];
            lower[0] = 0.0;
            upper[0] = -2.0 * r;
            diag[0] = 1.0 + 2.0 * r;
            (diag, lower, upper)
        };
        let (diag, lower, upper) = assemble(r_u);
        solve_tridiagonal(&diag, &lower, &upper, &mut rhs_u);
        let (diag, lower, upper) = assemble(r_v);
        solve_tridiagonal(&diag, &lower, &upper, &mut rhs_v);

        let mut u_new = rhs_u;
        let mut v_new = rhs_v;
        u_new.push(0.0);
        v_new.push(0.0);

        let clamp_floor = -self.cfg.positivity_tol * self.bounds.m1.max(self.bounds.m2);
        let t_new = state.t + dt;
        for (name, data, cap) in [
            ("u", &mut u_new, self.bounds.m1),
            ("v", &mut v_new, self.bounds.m2),
        ] {
            for value in data.iter_mut() {
                if !value.is_finite() {
                    return Err(Error::Divergence { t: t_new, what: name.into() });
                }
                if *value < 0.0 {
                    if *value >= clamp_floor {
                        *value = 0.0;
                    } else {
                        return Err(Error::IntegrationFault {
                            t: t_new,
                            message: format!("{name} fell to {value}, below the roundoff floor"),
                        });
                    }
                }
                if *value > cap + BOUND_TOL {
                    return Err(Error::IntegrationFault {
                        t: t_new,
                        message: format!("{name} = {value} exceeds the a priori bound {cap}"),
                    });
                }
            }
        }

        Ok(MovingDomainState { t: t_new, h: h_new, h_prime, u: u_new, v: v_new })
    }
}

/// One row of the recorded time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub h: f64,
    pub h_prime: f64,
    pub u_sup: f64,
    pub v_sup: f64,
    /// Density values at the fixed left boundary.
    pub u_center: f64,
    pub v_center: f64,
}

/// Profile snapshot on the computational grid; the physical coordinate is
/// `x = y * h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub h: f64,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub snapshots: Vec<Snapshot>,
    pub bounds: AprioriBounds,
    /// Set when the run was started outside the interior-equilibrium
    /// hypothesis.
    pub h1_warning: bool,
    /// Running maxima over every accepted step (not only output times).
    pub max_u_seen: f64,
    pub max_v_seen: f64,
    pub max_h_prime_seen: f64,
    pub u0_sup: f64,
    pub v0_sup: f64,
}

fn sup(data: &[f64]) -> f64 {
    data.iter().fold(0.0_f64, |acc, &x| acc.max(x))
}

fn sample_of(state: &MovingDomainState) -> TrajectorySample {
    TrajectorySample {
        t: state.t,
        h: state.h,
        h_prime: state.h_prime,
        u_sup: sup(&state.u),
        v_sup: sup(&state.v),
        u_center: state.u[0],
        v_center: state.v[0],
    }
}

/// Integrate the free-boundary problem from the given initial data.
pub fn run(p: &Parameters, ip: &InitialProfile, cfg: &SolverConfig) -> Result<Trajectory> {
    p.validate()?;
    ip.validate()?;
    cfg.validate()?;
    let bounds = apriori_bounds(p, ip);
    let tracker = FrontTracker::new(p, cfg, bounds)?;
    let n = cfg.n;

    let mut u = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let x = ip.h0 * j as f64 / n as f64;
        let (a, b) = ip.eval(x);
        u.push(a);
        v.push(b);
    }
    u[n] = 0.0;
    v[n] = 0.0;
    let mut state = MovingDomainState { t: 0.0, h: ip.h0, h_prime: 0.0, u, v };
    {
        let (_, _, hp) = boundary_flux(&state, p, cfg.first_order_flux);
        state.h_prime = hp;
    }

    let mut traj = Trajectory {
        samples: vec![sample_of(&state)],
        snapshots: Vec::new(),
        bounds,
        h1_warning: !p.h1_satisfied(),
        max_u_seen: sup(&state.u),
        max_v_seen: sup(&state.v),
        max_h_prime_seen: 0.0,
        u0_sup: ip.u0_sup,
        v0_sup: ip.v0_sup,
    };

    let snap_times: Vec<f64> = (1..=cfg.snapshots)
        .map(|k| cfg.t_max * k as f64 / cfg.snapshots as f64)
        .collect();
    let mut next_snap = 0;
    let mut steps: u64 = 0;
    let mut vanish_streak = 0usize;

    while state.t < cfg.t_max * (1.0 - 1e-12) {
        state = tracker.step(&state)?;
        steps += 1;
        traj.max_u_seen = traj.max_u_seen.max(sup(&state.u));
        traj.max_v_seen = traj.max_v_seen.max(sup(&state.v));
        traj.max_h_prime_seen = traj.max_h_prime_seen.max(state.h_prime);

        let at_end = state.t >= cfg.t_max * (1.0 - 1e-12);
        if steps % cfg.output_every as u64 == 0 || at_end {
            let s = sample_of(&state);
            if cfg.stop_on_vanish {
                if s.h_prime < 1e-6 && s.u_sup + s.v_sup < 1e-3 {
                    vanish_streak += 1;
                } else {
                    vanish_streak = 0;
                }
            }
            traj.samples.push(s);
            if next_snap < snap_times.len() && state.t >= snap_times[next_snap] * (1.0 - 1e-12) {
                traj.snapshots.push(Snapshot {
                    t: state.t,
                    h: state.h,
                    y: (0..=n).map(|j| j as f64 / n as f64).collect(),
                    u: state.u.clone(),
                    v: state.v.clone(),
                });
                next_snap += 1;
            }
            if cfg.stop_on_vanish && vanish_streak >= 10 {
                break;
            }
        }
    }
    Ok(traj)
}

/// Closed-form logistic envelopes dominating the sup norms: the prey bound
/// solves `y' = y(1-y)` from the initial sup norm, the predator bound solves
/// `y' = kappa y (1 - y/(M1+alpha))`.
pub fn ode_envelopes(p: &Parameters, u0_sup: f64, v0_sup: f64, t: f64) -> (f64, f64) {
    fn logistic(y0: f64, carrying: f64, rate: f64, t: f64) -> f64 {
        if y0 == 0.0 {
            return 0.0;
        }
        carrying / (1.0 + (carrying / y0 - 1.0) * (-rate * t).exp())
    }
    let m1 = 1.0_f64.max(u0_sup);
    (
        logistic(u0_sup, 1.0, 1.0, t),
        logistic(v0_sup, m1 + p.alpha, p.kappa, t),
    )
}
