//! Traveling wavefronts of the decoupled whole-line system and the semi-wave
//! problem on the half line, whose origin slope fixes the lower end of the
//! asymptotic speed bracket.

use crate::error::{Error, Result};
use crate::model::Parameters;

/// Minimal speed admitting monotone wavefronts of the decoupled system:
/// `2 * max{1, sqrt(D*kappa)}`.
pub fn minimal_wave_speed(p: &Parameters) -> f64 {
    2.0 * 1.0_f64.max((p.d_ratio * p.kappa).sqrt())
}

/// Default truncation length for the semi-wave: the tail converges like
/// `exp(-x sqrt(kappa/D))`, so 40 characteristic lengths are ample.
pub fn default_l_trunc(d: f64, kappa: f64) -> f64 {
    40.0 * (d / kappa).sqrt()
}

/// Semi-wave profile on a truncated half line.
#[derive(Debug, Clone)]
pub struct SemiWaveSolution {
    /// Speed parameter of the profile.
    pub s: f64,
    pub xs: Vec<f64>,
    pub v: Vec<f64>,
    pub v_prime: Vec<f64>,
    /// Shooting slope at the origin.
    pub slope_at_origin: f64,
    /// Profile value at the truncation point; close to the carrying level.
    pub far_field: f64,
}

fn check_semi_wave_inputs(d: f64, kappa: f64, alpha: f64, s: f64) -> Result<f64> {
    for (name, value) in [("D", d), ("kappa", kappa), ("alpha", alpha)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::domain(name, format!("must be strictly positive, got {value}")));
        }
    }
    let s_max = 2.0 * (d * kappa).sqrt();
    if !(s >= 0.0) {
        return Err(Error::domain("s", format!("must be nonnegative, got {s}")));
    }
    if s >= s_max {
        return Err(Error::domain(
            "s",
            format!("semi-wave requires s < 2*sqrt(D*kappa) = {s_max}, got {s}"),
        ));
    }
    Ok(s_max)
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Shot {
    Overshoot,
    Undershoot,
}

/// One RK4 step of `V' = w`, `D w' = s w - kappa V (1 - V/alpha)`.
#[inline]
fn rk4_step(d: f64, kappa: f64, alpha: f64, s: f64, v: f64, w: f64, h: f64) -> (f64, f64) {
    let f = |v: f64, w: f64| (w, (s * w - kappa * v * (1.0 - v / alpha)) / d);
    let (k1v, k1w) = f(v, w);
    let (k2v, k2w) = f(v + 0.5 * h * k1v, w + 0.5 * h * k1w);
    let (k3v, k3w) = f(v + 0.5 * h * k2v, w + 0.5 * h * k2w);
    let (k4v, k4w) = f(v + h * k3v, w + h * k3w);
    (
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
    )
}

/// Classify a forward shot with initial slope `m`: does it cross the carrying
/// level (slope too steep) or turn around below it (too shallow)?
fn classify_shot(d: f64, kappa: f64, alpha: f64, s: f64, m: f64, l_trunc: f64) -> Shot {
    let h = (d / kappa).sqrt() * 2.5e-3;
    let steps = (l_trunc / h).ceil() as usize;
    let (mut v, mut w) = (0.0_f64, m);
    for _ in 0..steps {
        let (nv, nw) = rk4_step(d, kappa, alpha, s, v, w, h);
        v = nv;
        w = nw;
        if v > alpha * (1.0 + 1e-12) {
            return Shot::Overshoot;
        }
        if w < 0.0 {
            return Shot::Undershoot;
        }
    }
    // No event on the truncated range: the trajectory is still below the
    // carrying level, i.e. the slope is on the shallow side.
    Shot::Undershoot
}

/// Origin slope of the semi-wave at speed `s`, by bisection on the shooting
/// slope within `[0, 2*alpha*sqrt(kappa/D)]`.
pub fn semi_wave_slope(d: f64, kappa: f64, alpha: f64, s: f64) -> Result<f64> {
    semi_wave_slope_with(d, kappa, alpha, s, default_l_trunc(d, kappa))
}

pub fn semi_wave_slope_with(d: f64, kappa: f64, alpha: f64, s: f64, l_trunc: f64) -> Result<f64> {
    check_semi_wave_inputs(d, kappa, alpha, s)?;
    let mut lo = 0.0_f64;
    let mut hi = 2.0 * alpha * (kappa / d).sqrt();
    if classify_shot(d, kappa, alpha, s, hi, l_trunc) != Shot::Overshoot {
        return Err(Error::Truncation(format!(
            "shooting bracket not found at s = {s} with L_trunc = {l_trunc}"
        )));
    }
    // Slope 0 keeps the profile identically zero, an undershoot.
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        match classify_shot(d, kappa, alpha, s, mid, l_trunc) {
            Shot::Overshoot => hi = mid,
            Shot::Undershoot => lo = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solve the semi-wave problem at speed `s` on `[0, l_trunc]` with `n` grid
/// nodes. The origin slope comes from the shooting bisection; the grid
/// profile is assembled by integrating backward from the far-field tail,
/// which is the numerically stable direction, and the two routes must agree.
pub fn solve_semi_wave(
    d: f64,
    kappa: f64,
    alpha: f64,
    s: f64,
    l_trunc: f64,
    n: usize,
) -> Result<SemiWaveSolution> {
    let s_max = check_semi_wave_inputs(d, kappa, alpha, s)?;
    if !(l_trunc > 0.0) {
        return Err(Error::domain("L_trunc", "must be strictly positive"));
    }
    if kappa * l_trunc * l_trunc / d < 100.0 {
        return Err(Error::Truncation(format!(
            "L_trunc = {l_trunc} too small: need kappa*L^2/D well above 100"
        )));
    }
    if n < 16 {
        return Err(Error::domain("n", format!("need at least 16 grid nodes, got {n}")));
    }
    let slope = semi_wave_slope_with(d, kappa, alpha, s, l_trunc)?;

    // Tail anchor: V approaches alpha like exp(lambda_minus * x) with
    // lambda_minus = (s - sqrt(s^2 + 4 D kappa)) / (2D) < 0. The far field is
    // integrated in the deficit variable q = alpha - V, which keeps full
    // relative precision where V sits within a few hundred ulps of the
    // carrying level; once the deficit reaches alpha/2 the representation
    // switches to (V, V').
    let lambda_minus = (s - (s * s + 4.0 * d * kappa).sqrt()) / (2.0 * d);
    let eps_tail = 1e-13 * alpha;

    #[derive(Clone, Copy)]
    struct BackState {
        val: f64,
        w: f64,
        deficit_form: bool,
    }
    let anchor = BackState { val: eps_tail, w: eps_tail * lambda_minus.abs(), deficit_form: true };
    let value = |st: &BackState| if st.deficit_form { alpha - st.val } else { st.val };
    let advance = |st: BackState, h: f64| -> BackState {
        if st.deficit_form {
            // q' = -w, D w' = s w - kappa q (1 - q/alpha)
            let f = |q: f64, w: f64| (-w, (s * w - kappa * q * (1.0 - q / alpha)) / d);
            let (k1q, k1w) = f(st.val, st.w);
            let (k2q, k2w) = f(st.val + 0.5 * h * k1q, st.w + 0.5 * h * k1w);
            let (k3q, k3w) = f(st.val + 0.5 * h * k2q, st.w + 0.5 * h * k2w);
            let (k4q, k4w) = f(st.val + h * k3q, st.w + h * k3w);
            let q = st.val + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
            let w = st.w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
            if q > 0.5 * alpha {
                BackState { val: alpha - q, w, deficit_form: false }
            } else {
                BackState { val: q, w, deficit_form: true }
            }
        } else {
            let (v, w) = rk4_step(d, kappa, alpha, s, st.val, st.w, h);
            BackState { val: v, w, deficit_form: false }
        }
    };

    // Pass 1: march backward until the profile crosses zero; tau measures the
    // distance walked back from the anchor.
    let h = l_trunc / (n - 1) as f64;
    let mut tau = 0.0_f64;
    let max_back = (l_trunc / h).ceil() as usize + 2;
    let mut crossed = false;
    let mut st = anchor;
    let (mut st_prev, mut tau_prev) = (st, tau);
    for _ in 0..max_back {
        st_prev = st;
        tau_prev = tau;
        st = advance(st, -h);
        tau += h;
        if value(&st) <= 0.0 {
            crossed = true;
            break;
        }
    }
    if !crossed {
        return Err(Error::Truncation(format!(
            "semi-wave tail did not reach the origin within L_trunc = {l_trunc}; s = {s} is too \
             close to the admissible bound {s_max}"
        )));
    }
    // Refine the crossing with partial backward steps.
    let mut step_lo = 0.0_f64; // from st_prev: V still positive
    let mut step_hi = h;
    for _ in 0..80 {
        let mid = 0.5 * (step_lo + step_hi);
        let sm = advance(st_prev, -mid);
        let vm = value(&sm);
        if vm > 0.0 {
            step_lo = mid;
        } else {
            step_hi = mid;
        }
        if vm.abs() < 1e-13 * alpha.max(1.0) {
            step_lo = mid;
            step_hi = mid;
            break;
        }
    }
    let step_cross = 0.5 * (step_lo + step_hi);
    let span = tau_prev + step_cross; // intrinsic length from V=0 to the anchor

    // Pass 2: walk backward again, landing exactly on the grid nodes
    // x_j = j*h (so tau_j = span - j*h), and fill the far field with the
    // carrying level, which at this distance is exact to machine precision.
    let mut xs = Vec::with_capacity(n);
    let mut vs = vec![alpha; n];
    let mut ws = vec![0.0; n];
    for j in 0..n {
        xs.push(j as f64 * h);
    }
    let j_max = ((span / h).floor() as usize).min(n - 1);
    let first_leg = span - j_max as f64 * h;
    let mut cur = anchor;
    if first_leg > 0.0 {
        cur = advance(cur, -first_leg);
    }
    vs[j_max] = value(&cur);
    ws[j_max] = cur.w;
    for j in (0..j_max).rev() {
        cur = advance(cur, -h);
        vs[j] = value(&cur);
        ws[j] = cur.w;
    }

    let sol = SemiWaveSolution {
        s,
        xs,
        v: vs,
        v_prime: ws,
        slope_at_origin: slope,
        far_field: alpha,
    };
    Ok(SemiWaveSolution { far_field: sol.v[n - 1], ..sol })
}

impl SemiWaveSolution {
    /// Max-norm residual of the semi-wave ODE over the interior grid, using
    /// fourth-order differences of the stored derivative column.
    pub fn residual(&self, d: f64, kappa: f64, alpha: f64) -> f64 {
        let n = self.v.len();
        let h = self.xs[1] - self.xs[0];
        let mut worst = 0.0_f64;
        for j in 2..n - 2 {
            let wp = (self.v_prime[j - 2] - 8.0 * self.v_prime[j - 1] + 8.0 * self.v_prime[j + 1]
                - self.v_prime[j + 2])
                / (12.0 * h);
            let r = self.s * self.v_prime[j] - d * wp
                - kappa * self.v[j] * (1.0 - self.v[j] / alpha);
            worst = worst.max(r.abs());
        }
        worst
    }

    /// Max deviation between the stored derivative and a fourth-order
    /// difference of the stored values.
    pub fn derivative_consistency(&self) -> f64 {
        let n = self.v.len();
        let h = self.xs[1] - self.xs[0];
        let mut worst = 0.0_f64;
        for j in 2..n - 2 {
            let vp = (self.v[j - 2] - 8.0 * self.v[j - 1] + 8.0 * self.v[j + 1] - self.v[j + 2])
                / (12.0 * h);
            worst = worst.max((vp - self.v_prime[j]).abs());
        }
        worst
    }
}

/// The unique speed with `mu * rho * V_s'(0) = s`, found by bisection on
/// `[0, 2*sqrt(D*kappa))`; the shooting slope is strictly decreasing in `s`,
/// so the gap function has exactly one sign change.
pub fn asymptotic_speed(p: &Parameters) -> Result<f64> {
    let (d, kappa, alpha) = (p.d_ratio, p.kappa, p.alpha);
    let coeff = p.mu * p.rho;
    if !(coeff > 0.0) {
        return Err(Error::domain("mu*rho", "must be strictly positive"));
    }
    let s_max = 2.0 * (d * kappa).sqrt();
    let gap = |s: f64| -> Result<f64> { Ok(coeff * semi_wave_slope(d, kappa, alpha, s)? - s) };
    let mut lo = 0.0_f64;
    let mut hi = s_max * (1.0 - 1e-9);
    if gap(hi)? >= 0.0 {
        return Err(Error::Truncation(format!(
            "no sign change of mu*rho*V_s'(0) - s below s = {hi}"
        )));
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let g = gap(mid)?;
        if hi - lo < 1e-9 && g.abs() < 1e-8 {
            break;
        }
        if g > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// A monotone front of one scalar KPP component, stored on a uniform grid in
/// the moving coordinate.
#[derive(Debug, Clone)]
pub struct FrontProfile {
    pub xi: Vec<f64>,
    pub values: Vec<f64>,
    pub deriv: Vec<f64>,
    /// Limit value at minus infinity (the front connects it to zero).
    pub left_limit: f64,
}

/// Traveling wavefront of the decoupled system at speed `s`.
#[derive(Debug, Clone)]
pub struct WavefrontProfile {
    pub s: f64,
    pub u: FrontProfile,
    pub v: FrontProfile,
}

/// Integrate one monotone KPP front `s W' + d W'' + r W (1 - W/K) = 0` from
/// the linearization at the unstable state, normalized so the profile passes
/// through half the left limit at xi = 0.
fn kpp_front(d: f64, r: f64, carrying: f64, s: f64) -> Result<FrontProfile> {
    let threshold = 2.0 * (d * r).sqrt();
    if s < threshold * (1.0 - 1e-12) {
        return Err(Error::NoMonotoneFront {
            s,
            message: format!("monotone front needs s >= {threshold}"),
        });
    }
    // Work with the normalized profile phi = W / K. Leaving the unstable
    // state phi = 1, the deviation grows like exp(lambda_plus * xi) with the
    // positive root of d*y^2 + s*y - r = 0 (the slower of the two rates).
    let lambda_plus = (-s + (s * s + 4.0 * d * r).sqrt()) / (2.0 * d);
    let eps = 1e-8;
    let h = 5e-3 * (d / r).sqrt();
    let rhs = |phi: f64, q: f64| (q, (-s * q - r * phi * (1.0 - phi)) / d);
    let step = |phi: f64, q: f64| -> (f64, f64) {
        let (k1p, k1q) = rhs(phi, q);
        let (k2p, k2q) = rhs(phi + 0.5 * h * k1p, q + 0.5 * h * k1q);
        let (k3p, k3q) = rhs(phi + 0.5 * h * k2p, q + 0.5 * h * k2q);
        let (k4p, k4q) = rhs(phi + h * k3p, q + h * k3q);
        (
            phi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
            q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
        )
    };

    let mut phi = 1.0 - eps;
    let mut q = -eps * lambda_plus;
    let mut xi = 0.0_f64;
    let mut pts: Vec<(f64, f64, f64)> = vec![(xi, phi, q)];
    let max_steps = 400_000;
    let mut done = false;
    for _ in 0..max_steps {
        let (np, nq) = step(phi, q);
        xi += h;
        if np < -1e-12 {
            return Err(Error::NoMonotoneFront {
                s,
                message: "profile crosses zero: no monotone connection at this speed".into(),
            });
        }
        if nq > 1e-12 {
            return Err(Error::NoMonotoneFront {
                s,
                message: "profile loses monotonicity at this speed".into(),
            });
        }
        phi = np;
        q = nq;
        pts.push((xi, phi, q));
        if phi < 1e-10 {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::Truncation(format!(
            "front did not decay below 1e-10 within {max_steps} steps at s = {s}"
        )));
    }

    // Normalize the translate: phi = 1/2 at xi = 0.
    let k_half = pts.partition_point(|&(_, p, _)| p > 0.5);
    let (x0, p0, _) = pts[k_half - 1];
    let (x1, p1, _) = pts[k_half];
    let xi_half = x0 + (p0 - 0.5) / (p0 - p1) * (x1 - x0);

    // Subsample to keep the stored grid modest while staying uniform.
    let stride = (pts.len() / 4000).max(1);
    let sampled: Vec<&(f64, f64, f64)> = pts.iter().step_by(stride).collect();
    Ok(FrontProfile {
        xi: sampled.iter().map(|t| t.0 - xi_half).collect(),
        values: sampled.iter().map(|t| t.1 * carrying).collect(),
        deriv: sampled.iter().map(|t| t.2 * carrying).collect(),
        left_limit: carrying,
    })
}

impl FrontProfile {
    /// Max-norm ODE residual `s W' + d W'' + r W (1 - W/K)` over the interior
    /// of the stored grid, with the second derivative from fourth-order
    /// differences of the stored first derivative.
    pub fn residual(&self, d: f64, r: f64, s: f64) -> f64 {
        let n = self.values.len();
        let h = self.xi[1] - self.xi[0];
        let mut worst = 0.0_f64;
        for j in 2..n - 2 {
            let qp = (self.deriv[j - 2] - 8.0 * self.deriv[j - 1] + 8.0 * self.deriv[j + 1]
                - self.deriv[j + 2])
                / (12.0 * h);
            let w = self.values[j];
            let res = s * self.deriv[j] + d * qp + r * w * (1.0 - w / self.left_limit);
            worst = worst.max(res.abs());
        }
        worst
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|p| p[1] < p[0])
    }
}

/// Solve the decoupled wavefront system at speed `s`: the prey component
/// needs `s >= 2`, the predator component `s >= 2*sqrt(D*kappa)`.
pub fn solve_wavefront(d: f64, kappa: f64, m1: f64, alpha: f64, s: f64) -> Result<WavefrontProfile> {
    let u = kpp_front(1.0, 1.0, 1.0, s)?;
    let v = kpp_front(d, kappa, m1 + alpha, s)?;
    Ok(WavefrontProfile { s, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d: f64, kappa: f64, mu: f64, rho: f64) -> Parameters {
        Parameters::new(0.5, 1.0, kappa, d, mu, rho).unwrap()
    }

    #[test]
    fn minimal_wave_speed_examples() {
        assert_eq!(minimal_wave_speed(&params(1.0, 1.0, 1.0, 1.0)), 2.0);
        assert_eq!(minimal_wave_speed(&params(4.0, 4.0, 1.0, 1.0)), 8.0);
        assert_eq!(minimal_wave_speed(&params(0.25, 1.0, 1.0, 1.0)), 2.0);
    }

    #[test]
    fn zero_speed_slope_matches_first_integral() {
        // Energy conservation at s = 0 gives V'(0) = alpha * sqrt(kappa/(3D)).
        for (d, kappa, alpha) in [(1.0, 1.0, 1.0), (4.0, 1.0, 2.0), (0.5, 2.0, 0.7)] {
            let m = semi_wave_slope(d, kappa, alpha, 0.0).unwrap();
            let exact = alpha * (kappa / (3.0 * d)).sqrt();
            assert!((m - exact).abs() < 1e-6, "D={d} kappa={kappa} alpha={alpha}: {m} vs {exact}");
        }
    }

    #[test]
    fn semi_wave_rejects_speeds_at_or_above_bound() {
        assert!(semi_wave_slope(1.0, 1.0, 1.0, 2.0).is_err());
        assert!(solve_semi_wave(1.0, 1.0, 1.0, 2.5, 40.0, 1001).is_err());
    }

    #[test]
    fn semi_wave_profile_shape_and_residual() {
        let sol = solve_semi_wave(1.0, 1.0, 1.0, 0.5, 40.0, 20001).unwrap();
        assert!(sol.v[0].abs() < 1e-9, "origin value {}", sol.v[0]);
        assert!((sol.far_field - 1.0).abs() < 1e-9);
        assert!(sol.slope_at_origin > 0.0);
        // The bisection slope and the tail-anchored trajectory slope are two
        // independent routes to the same number.
        assert!(
            (sol.slope_at_origin - sol.v_prime[0]).abs() < 1e-7,
            "slope routes disagree: {} vs {}",
            sol.slope_at_origin,
            sol.v_prime[0]
        );
        assert!(sol.residual(1.0, 1.0, 1.0) < 1e-8);
        assert!(sol.derivative_consistency() < 1e-8);
        // Strictly increasing until the padded far field.
        let rise_end = sol.v.iter().position(|&v| v >= 1.0 - 1e-10).unwrap();
        for j in 0..rise_end {
            assert!(sol.v[j + 1] > sol.v[j]);
        }
    }

    #[test]
    fn first_integral_constant_at_zero_speed() {
        let (d, kappa, alpha) = (1.0, 1.0, 1.0);
        let sol = solve_semi_wave(d, kappa, alpha, 0.0, 40.0, 20001).unwrap();
        let energy = |v: f64, w: f64| {
            0.5 * d * w * w + kappa * (v * v / 2.0 - v * v * v / (3.0 * alpha))
        };
        let e_ref = energy(sol.v[0], sol.v_prime[0]);
        for j in 0..sol.v.len() {
            let e = energy(sol.v[j], sol.v_prime[j]);
            assert!((e - e_ref).abs() < 1e-8, "energy drift {} at node {j}", e - e_ref);
        }
    }

    #[test]
    fn slope_scales_linearly_in_alpha_at_zero_speed() {
        let base = semi_wave_slope(2.0, 1.0, 0.8, 0.0).unwrap();
        for lambda in [0.5, 2.0, 3.0] {
            let scaled = semi_wave_slope(2.0, 1.0, 0.8 * lambda, 0.0).unwrap();
            assert!(
                (scaled - lambda * base).abs() < 1e-6,
                "lambda={lambda}: {scaled} vs {}",
                lambda * base
            );
        }
    }

    #[test]
    fn slope_robust_to_truncation_length() {
        let a = semi_wave_slope_with(1.0, 1.0, 1.0, 0.4, 25.0).unwrap();
        let b = semi_wave_slope_with(1.0, 1.0, 1.0, 0.4, 50.0).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn slope_strictly_decreasing_in_speed() {
        let mut prev = f64::INFINITY;
        for k in 0..8 {
            let s = 0.22 * k as f64;
            let m = semi_wave_slope(1.0, 1.0, 1.0, s).unwrap();
            assert!(m < prev, "slope not decreasing at s={s}");
            prev = m;
        }
    }

    #[test]
    fn asymptotic_speed_small_coefficient_expansion() {
        let p = params(1.0, 1.0, 0.1, 0.1); // mu*rho = 0.01
        let s = asymptotic_speed(&p).unwrap();
        let approx = 0.01 * 1.0 * (1.0 / 3.0_f64).sqrt();
        assert!(
            (s - approx).abs() < 0.05 * approx,
            "s* = {s} vs first-order {approx}"
        );
    }

    #[test]
    fn asymptotic_speed_below_minimal_speed() {
        let p = params(1.0, 1.0, 1.0, 1.0);
        let s = asymptotic_speed(&p).unwrap();
        assert!(s > 0.0 && s < minimal_wave_speed(&p));
        // Root residual of the defining equation.
        let g = p.mu * p.rho * semi_wave_slope(p.d_ratio, p.kappa, p.alpha, s).unwrap() - s;
        assert!(g.abs() < 1e-8, "root residual {g}");
    }

    #[test]
    fn wavefront_at_minimal_speed() {
        let wf = solve_wavefront(1.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert!(wf.u.is_strictly_decreasing());
        assert!(wf.v.is_strictly_decreasing());
        assert_eq!(wf.u.left_limit, 1.0);
        assert_eq!(wf.v.left_limit, 2.0);
        assert!(wf.u.values[0] > 1.0 - 1e-6);
        assert!(*wf.u.values.last().unwrap() < 1e-8);
        assert!(wf.u.residual(1.0, 1.0, 2.0) < 1e-6);
        assert!(wf.v.residual(1.0, 1.0, 2.0) < 1e-6);
        // Normalization: value 1/2 of the left limit at xi = 0.
        let j = wf.u.xi.partition_point(|&x| x < 0.0);
        assert!((wf.u.values[j] - 0.5).abs() < 1e-2);
    }

    #[test]
    fn wavefront_below_threshold_fails() {
        match solve_wavefront(1.0, 1.0, 1.0, 1.0, 1.9) {
            Err(Error::NoMonotoneFront { .. }) => {}
            other => panic!("expected no-monotone-front error, got {other:?}"),
        }
    }

    #[test]
    fn wavefront_residual_translation_invariant() {
        let wf = solve_wavefront(1.0, 1.0, 1.0, 1.0, 2.2).unwrap();
        let base = wf.u.residual(1.0, 1.0, 2.2);
        let mut shifted = wf.u.clone();
        for x in &mut shifted.xi {
            *x += 3.7;
        }
        let moved = shifted.residual(1.0, 1.0, 2.2);
        assert!((base - moved).abs() < 1e-10);
    }
}
