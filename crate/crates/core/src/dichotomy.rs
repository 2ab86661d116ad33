//! Sharp spreading/vanishing criteria, trajectory classification and the
//! asymptotic speed bracket check.

use crate::error::{Error, Result};
use crate::model::{equilibria, InitialProfile, Parameters};
use crate::solver::Trajectory;
use crate::spectral::{critical_diffusivity, critical_length};
use crate::waves::{asymptotic_speed, minimal_wave_speed};
use serde::Serialize;
use std::f64::consts::PI;

/// Barrier constants of the vanishing-sufficient construction; only defined
/// when `h0 < h*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VanishingConstants {
    pub eps: f64,
    pub beta: f64,
    pub m_tilde: f64,
    /// Stefan coefficients at or below this value guarantee vanishing.
    pub mu_lower: f64,
}

/// Every sharp criterion evaluated for one `(Parameters, InitialProfile)`
/// pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdSet {
    /// Critical front position `(pi/2) min{1, sqrt(D/kappa)}`: once `h`
    /// exceeds it, spreading is certain.
    pub h_star: f64,
    /// Critical predator diffusivity `4 kappa h0^2 / pi^2`.
    pub d_star: f64,
    /// Spreading-sufficient Stefan coefficient from the predator barrier.
    pub mu1: f64,
    /// Spreading-sufficient coefficient from the prey barrier; only defined
    /// under its admissibility gate.
    pub mu2: Option<f64>,
    /// `mu1`, improved to `min(mu1, mu2)` when `mu2` is available.
    pub mu_bar: f64,
    /// Free parameter used by the `mu2` gate.
    pub theta_param: Option<f64>,
    pub vanishing: Option<VanishingConstants>,
}

/// Default `theta`: the largest admissible value `(1 - delta)/delta - 1`
/// minus a small guard, when that is positive.
pub fn default_theta(p: &Parameters) -> Option<f64> {
    let t = (1.0 - p.delta) / p.delta - 1.0 - 1e-6;
    (t > 0.0).then_some(t)
}

/// Evaluate the threshold set. `theta` overrides the default gate parameter
/// for `mu2`.
pub fn thresholds(
    p: &Parameters,
    ip: &InitialProfile,
    theta: Option<f64>,
) -> Result<ThresholdSet> {
    p.validate()?;
    ip.validate()?;
    let h_star = PI / 2.0 * 1.0_f64.min((p.d_ratio / p.kappa).sqrt());
    let d_star = 4.0 * p.kappa * ip.h0 * ip.h0 / (PI * PI);

    let l_pred = PI / 2.0 * (p.d_ratio / p.kappa).sqrt();
    let mu1 = ((p.d_ratio / p.rho)
        * 1.0_f64.max(ip.v0_sup / p.alpha)
        * (l_pred - ip.h0)
        / ip.integral_v0())
    .max(0.0);

    let theta_param = theta.or_else(|| default_theta(p));
    let mu2 = theta_param.and_then(|th| {
        let gate = 1.0 - p.delta * (1.0 + th);
        let ok = ip.v0_sup <= 1.0 + th && ip.u0_sup <= 1.0 && gate > 0.0 && ip.h0 < PI / 2.0;
        ok.then(|| 1.0_f64.max(ip.u0_sup / gate) * (PI / 2.0 - ip.h0) / ip.integral_u0())
    });
    let mu_bar = match mu2 {
        Some(m2) => mu1.min(m2),
        None => mu1,
    };

    let vanishing = if ip.h0 < h_star {
        let eps = 0.5 * (h_star / ip.h0 - 1.0);
        let scale = (PI / 2.0 / ((1.0 + eps) * ip.h0)).powi(2);
        let beta = 0.5 * (scale * p.d_ratio - p.kappa).min(scale - 1.0);
        if !(beta > 0.0) {
            return Err(Error::Precondition(format!(
                "barrier rate beta = {beta} must be positive when h0 (1 + eps) < h*"
            )));
        }
        let m_tilde = ip.u0_sup.max(ip.v0_sup) / (PI / (2.0 + eps)).cos();
        let mu_lower =
            eps * ip.h0 * ip.h0 * beta * (2.0 + eps) / (2.0 * (1.0 + p.rho) * PI * m_tilde);
        Some(VanishingConstants { eps, beta, m_tilde, mu_lower })
    } else {
        None
    };

    Ok(ThresholdSet { h_star, d_star, mu1, mu2, mu_bar, theta_param, vanishing })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Spreading,
    Vanishing,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// `h` exceeded `h*`; spreading is certain from that moment on.
    HCrossing,
    /// Front speed and mass norms stayed below tolerance for a full window.
    SustainedDecay,
    /// The horizon was reached with neither rule firing.
    HorizonReached,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evidence {
    pub rule: Rule,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyConfig {
    /// Front-speed tolerance for the vanishing rule.
    pub tol_v: f64,
    /// Mass-norm tolerance (`u_sup + v_sup`) for the vanishing rule.
    pub tol_m: f64,
    /// Consecutive output samples the decay must be sustained for.
    pub window: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { tol_v: 1e-6, tol_m: 1e-3, window: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub evidence: Evidence,
    /// `(|u(T,0) - u*|, |v(T,0) - v*|)`, reported for spreading runs when
    /// the interior equilibrium exists.
    pub equilibrium_error: Option<(f64, f64)>,
    pub final_h: f64,
}

/// Classify a trajectory. The `h > h*` crossing takes precedence: it is a
/// certificate, so once it fires no later behavior can change the verdict.
pub fn classify(
    traj: &Trajectory,
    th: &ThresholdSet,
    p: &Parameters,
    cfg: &ClassifyConfig,
) -> Result<ClassificationReport> {
    let samples = &traj.samples;
    if samples.is_empty() {
        return Err(Error::Precondition("classification needs a non-empty trajectory".into()));
    }
    let last = samples.last().unwrap();

    let mut verdict = Verdict::Undetermined;
    let mut evidence = Evidence { rule: Rule::HorizonReached, t: last.t };
    let mut streak = 0usize;
    for s in samples {
        if s.h > th.h_star {
            verdict = Verdict::Spreading;
            evidence = Evidence { rule: Rule::HCrossing, t: s.t };
            break;
        }
        if s.h_prime < cfg.tol_v && s.u_sup + s.v_sup < cfg.tol_m {
            streak += 1;
            if streak >= cfg.window {
                verdict = Verdict::Vanishing;
                evidence = Evidence { rule: Rule::SustainedDecay, t: s.t };
                break;
            }
        } else {
            streak = 0;
        }
    }

    let equilibrium_error = if verdict == Verdict::Spreading {
        equilibria(p)
            .e_star
            .map(|(u_star, v_star)| {
                ((last.u_center - u_star).abs(), (last.v_center - v_star).abs())
            })
    } else {
        None
    };

    Ok(ClassificationReport { verdict, evidence, equilibrium_error, final_h: last.h })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedEstimate {
    /// Least-squares slope of `h(t)` over the trailing window.
    pub slope: f64,
    /// `h(T) / T`.
    pub endpoint_ratio: f64,
    /// `[s*, s_min]`.
    pub bracket: (f64, f64),
    pub within_bracket: bool,
}

const BRACKET_MARGIN: f64 = 0.05;

/// Fit the front speed over the trailing `window_fraction` of samples and
/// check it against an explicit bracket.
pub fn speed_estimate_with_bracket(
    traj: &Trajectory,
    window_fraction: f64,
    bracket: (f64, f64),
) -> Result<SpeedEstimate> {
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(Error::domain("window_fraction", "must lie in (0, 1]"));
    }
    let samples = &traj.samples;
    let take = ((samples.len() as f64 * window_fraction).ceil() as usize).min(samples.len());
    if take < 10 {
        return Err(Error::Precondition(format!(
            "speed window holds {take} samples; need at least 10"
        )));
    }
    let window = &samples[samples.len() - take..];
    let n = window.len() as f64;
    let (mut st, mut sh, mut stt, mut sth) = (0.0, 0.0, 0.0, 0.0);
    for s in window {
        st += s.t;
        sh += s.h;
        stt += s.t * s.t;
        sth += s.t * s.h;
    }
    let slope = (n * sth - st * sh) / (n * stt - st * st);
    let last = samples.last().unwrap();
    let endpoint_ratio = last.h / last.t;
    let within_bracket = slope >= bracket.0 * (1.0 - BRACKET_MARGIN)
        && slope <= bracket.1 * (1.0 + BRACKET_MARGIN);
    Ok(SpeedEstimate { slope, endpoint_ratio, bracket, within_bracket })
}

/// Fit the front speed of a spreading run and check it against the rigorous
/// bracket `[s*, s_min]`.
pub fn speed_estimate(
    traj: &Trajectory,
    report: &ClassificationReport,
    p: &Parameters,
    window_fraction: f64,
) -> Result<SpeedEstimate> {
    if report.verdict != Verdict::Spreading {
        return Err(Error::Precondition(
            "speed estimation is defined only for spreading trajectories".into(),
        ));
    }
    let bracket = (asymptotic_speed(p)?, minimal_wave_speed(p));
    speed_estimate_with_bracket(traj, window_fraction, bracket)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffusivityRegime {
    /// `D <= D*`: spreading regardless of `mu`.
    SpreadingForced,
    /// `D* < D <= kappa`: the outcome depends on `mu`.
    MuDependent,
    /// `D > kappa`: outside the stated range of the criterion.
    OutsideLemma,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalDReport {
    pub d_star: f64,
    pub regime: DiffusivityRegime,
}

pub fn critical_d_rules(p: &Parameters, h0: f64) -> Result<CriticalDReport> {
    if !(h0 > 0.0) {
        return Err(Error::domain("h0", "must be strictly positive"));
    }
    p.validate()?;
    let d_star = critical_diffusivity(p.kappa, h0);
    let regime = if p.d_ratio <= d_star {
        DiffusivityRegime::SpreadingForced
    } else if p.d_ratio <= p.kappa {
        DiffusivityRegime::MuDependent
    } else {
        DiffusivityRegime::OutsideLemma
    };
    Ok(CriticalDReport { d_star, regime })
}

/// Consistency check used in tests and the threshold report: `h*` is the
/// smaller of the two critical lengths of the decoupled species.
pub fn h_star_from_lengths(p: &Parameters) -> f64 {
    critical_length(1.0, 1.0).min(critical_length(p.d_ratio, p.kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_initial_profile, AprioriBounds, ProfileFamily};
    use crate::solver::TrajectorySample;

    fn params(delta: f64, d_ratio: f64) -> Parameters {
        Parameters::new(delta, 1.0, 1.0, d_ratio, 1.0, 1.0).unwrap()
    }

    fn profile(h0: f64) -> InitialProfile {
        make_initial_profile(ProfileFamily::Cosine { amp_u: 1.0, amp_v: 1.0 }, h0, 2001).unwrap()
    }

    fn synthetic(samples: Vec<TrajectorySample>) -> Trajectory {
        Trajectory {
            samples,
            snapshots: Vec::new(),
            bounds: AprioriBounds { m1: 1.0, m2: 2.0, m: 1.0, lambda: 10.0 },
            h1_warning: false,
            max_u_seen: 1.0,
            max_v_seen: 1.0,
            max_h_prime_seen: 1.0,
            u0_sup: 1.0,
            v0_sup: 1.0,
        }
    }

    fn sample(t: f64, h: f64, h_prime: f64, mass: f64) -> TrajectorySample {
        TrajectorySample {
            t,
            h,
            h_prime,
            u_sup: 0.5 * mass,
            v_sup: 0.5 * mass,
            u_center: 0.5 * mass,
            v_center: 0.5 * mass,
        }
    }

    #[test]
    fn boundary_case_disables_vanishing_constants() {
        let p = params(0.5, 1.0);
        let th = thresholds(&p, &profile(PI / 2.0), None).unwrap();
        assert!((th.h_star - PI / 2.0).abs() < 1e-15);
        assert!((th.d_star - 1.0).abs() < 1e-12);
        assert!(th.vanishing.is_none());
    }

    #[test]
    fn mu1_quadrature_example() {
        let p = params(0.5, 1.0);
        let th = thresholds(&p, &profile(1.0), None).unwrap();
        let exact = (PI / 2.0 - 1.0) * (PI / 2.0);
        assert!((th.mu1 - exact).abs() < 1e-6, "{} vs {exact}", th.mu1);
        assert!((th.mu1 - 0.8966).abs() < 5e-4);
        // delta = 0.5 leaves no admissible theta, so mu2 is skipped.
        assert!(th.theta_param.is_none());
        assert!(th.mu2.is_none());
        assert_eq!(th.mu_bar, th.mu1);
    }

    #[test]
    fn vanishing_constants_closed_forms() {
        let p = params(0.5, 1.0);
        let th = thresholds(&p, &profile(1.0), None).unwrap();
        let c = th.vanishing.unwrap();
        let eps = 0.5 * (PI / 2.0 - 1.0);
        let beta = 0.5 * ((PI / 2.0 / (1.0 + eps)).powi(2) - 1.0);
        let m_tilde = 1.0 / (PI / (2.0 + eps)).cos();
        let mu_lower = eps * beta * (2.0 + eps) / (4.0 * PI * m_tilde);
        assert!((c.eps - eps).abs() < 1e-14);
        assert!((c.beta - beta).abs() < 1e-14);
        assert!((c.m_tilde - m_tilde).abs() < 1e-12);
        assert!((c.mu_lower - mu_lower).abs() < 1e-14);
        // Three-significant-figure spot values.
        assert!((c.eps - 0.2854).abs() < 5e-4);
        assert!((c.beta - 0.2467).abs() < 5e-4);
        assert!((c.m_tilde - 5.131).abs() < 5e-3);
        assert!((c.mu_lower - 2.5e-3).abs() < 5e-5);
    }

    #[test]
    fn mu2_gate_and_formula() {
        let p = params(0.3, 1.0);
        let ip = profile(1.0);
        let th = thresholds(&p, &ip, None).unwrap();
        let theta = th.theta_param.unwrap();
        assert!((theta - ((1.0 - 0.3) / 0.3 - 1.0 - 1e-6)).abs() < 1e-12);
        let gate = 1.0 - 0.3 * (1.0 + theta);
        let expected = (1.0 / gate) * (PI / 2.0 - 1.0) / ip.integral_u0();
        let mu2 = th.mu2.unwrap();
        assert!((mu2 - expected).abs() < 1e-10);
        assert_eq!(th.mu_bar, th.mu1.min(mu2));
        // An explicit theta violating the gate disables mu2.
        let th = thresholds(&p, &ip, Some(5.0)).unwrap();
        assert!(th.mu2.is_none());
    }

    #[test]
    fn h_star_matches_spectral_lengths() {
        for i in 1..=8 {
            for j in 1..=8 {
                let p = params(0.5, 0.3 * i as f64);
                let p = Parameters { kappa: 0.4 * j as f64, ..p };
                let ip = profile(0.7);
                let th = thresholds(&p, &ip, None).unwrap();
                assert_eq!(th.h_star, h_star_from_lengths(&p));
                assert_eq!(th.d_star, critical_diffusivity(p.kappa, ip.h0));
            }
        }
    }

    #[test]
    fn classify_crossing_rule() {
        let p = params(0.5, 1.0);
        let th = thresholds(&p, &profile(1.0), None).unwrap();
        let traj = synthetic(vec![
            sample(0.0, 1.0, 0.1, 1.0),
            sample(1.6, 1.4, 0.1, 1.0),
            sample(3.2, 1.6, 0.1, 1.0),
            sample(4.8, 1.8, 0.1, 1.0),
        ]);
        let report = classify(&traj, &th, &p, &ClassifyConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Spreading);
        assert_eq!(report.evidence.rule, Rule::HCrossing);
        assert_eq!(report.evidence.t, 3.2);
        // Equilibrium errors against (1/3, 4/3) from the final sample, which
        // sits at (0.5, 0.5).
        let (eu, ev) = report.equilibrium_error.unwrap();
        assert!((eu - 1.0 / 6.0).abs() < 1e-12);
        assert!((ev - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn classify_vanishing_rule() {
        let p = params(0.5, 1.0);
        let th = thresholds(&p, &profile(1.0), None).unwrap();
        let mut samples = vec![sample(0.0, 1.0, 0.5, 1.0)];
        for k in 1..=20 {
            samples.push(sample(k as f64, 1.1, 1e-8, 1e-4));
        }
        let traj = synthetic(samples);
        let report = classify(&traj, &th, &p, &ClassifyConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Vanishing);
        assert_eq!(report.evidence.rule, Rule::SustainedDecay);
        assert!(report.equilibrium_error.is_none());
        assert!((report.final_h - 1.1).abs() < 1e-15);
    }

    #[test]
    fn classify_undetermined_and_streak_reset() {
        let p = params(0.5, 1.0);
        let th = thresholds(&p, &profile(1.0), None).unwrap();
        // Decay interrupted before the window completes: no verdict.
        let mut samples = Vec::new();
        for k in 0..=8 {
            samples.push(sample(k as f64 * 0.1, 1.0 + 0.001 * k as f64, 1e-8, 1e-4));
        }
        samples.push(sample(0.9, 1.01, 0.5, 1.0));
        let traj = synthetic(samples);
        let report = classify(&traj, &th, &p, &ClassifyConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Undetermined);
        assert_eq!(report.evidence.rule, Rule::HorizonReached);
    }

    #[test]
    fn classify_spreading_takes_precedence() {
        // Decay-looking tail after a crossing must not override the
        // certificate.
        let p = params(0.5, 1.0);
        let th = thresholds(&p, &profile(1.0), None).unwrap();
        let mut samples = vec![sample(0.0, 1.7, 0.1, 1.0)];
        for k in 1..=20 {
            samples.push(sample(k as f64, 1.7, 1e-8, 1e-4));
        }
        let traj = synthetic(samples);
        let report = classify(&traj, &th, &p, &ClassifyConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Spreading);
    }

    #[test]
    fn speed_fit_is_exact_on_linear_data() {
        let samples: Vec<_> =
            (0..40).map(|k| sample(k as f64 * 0.5, 1.0 + 1.5 * k as f64 * 0.5, 1.5, 1.0)).collect();
        let traj = synthetic(samples);
        let est = speed_estimate_with_bracket(&traj, 0.5, (0.4, 2.0)).unwrap();
        assert!((est.slope - 1.5).abs() < 1e-12);
        assert!(est.within_bracket);
    }

    #[test]
    fn speed_fit_flags_out_of_bracket() {
        let samples: Vec<_> =
            (0..40).map(|k| sample(k as f64 * 0.5, 1.0 + 2.5 * k as f64 * 0.5, 2.5, 1.0)).collect();
        let traj = synthetic(samples);
        let est = speed_estimate_with_bracket(&traj, 0.5, (0.4, 2.0)).unwrap();
        assert!((est.slope - 2.5).abs() < 1e-12);
        assert!(!est.within_bracket);
    }

    #[test]
    fn speed_estimate_requires_spreading_and_samples() {
        let p = params(0.5, 1.0);
        let report = ClassificationReport {
            verdict: Verdict::Vanishing,
            evidence: Evidence { rule: Rule::SustainedDecay, t: 1.0 },
            equilibrium_error: None,
            final_h: 1.0,
        };
        let traj = synthetic(vec![sample(0.0, 1.0, 0.0, 1.0)]);
        assert!(speed_estimate(&traj, &report, &p, 0.5).is_err());
        let traj = synthetic((0..5).map(|k| sample(k as f64, 1.0, 0.0, 1.0)).collect());
        assert!(speed_estimate_with_bracket(&traj, 0.5, (0.0, 2.0)).is_err());
    }

    #[test]
    fn critical_d_regimes() {
        let p = params(0.5, 0.5);
        let r = critical_d_rules(&p, PI / 2.0).unwrap();
        assert!((r.d_star - 1.0).abs() < 1e-12);
        assert_eq!(r.regime, DiffusivityRegime::SpreadingForced);

        // D* = 4/pi^2 ~ 0.40528 for h0 = 1; just above it the outcome turns
        // mu-dependent.
        let p = params(0.5, 0.406);
        let r = critical_d_rules(&p, 1.0).unwrap();
        assert!((r.d_star - 4.0 / (PI * PI)).abs() < 1e-12);
        assert_eq!(r.regime, DiffusivityRegime::MuDependent);
        let p = params(0.5, 0.405);
        assert_eq!(critical_d_rules(&p, 1.0).unwrap().regime, DiffusivityRegime::SpreadingForced);

        let p = params(0.5, 2.0);
        let r = critical_d_rules(&p, 1.0).unwrap();
        assert_eq!(r.regime, DiffusivityRegime::OutsideLemma);
    }
}
