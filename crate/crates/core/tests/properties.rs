//! Randomized invariant checks.

use proptest::prelude::*;
use spreadfront::config::{parse_config, serialize, RunConfig};
use spreadfront::dichotomy::ClassifyConfig;
use spreadfront::model::{squeeze_limits, Parameters, ProfileFamily};
use spreadfront::solver::{transform_coefficients, Cutoff, DtPolicy, SolverConfig};
use spreadfront::spectral::{critical_diffusivity, critical_length, principal_eigenvalue, EigenProblemSpec};

fn arb_params() -> impl Strategy<Value = Parameters> {
    (0.01f64..0.9, 0.05f64..3.0, 0.05f64..4.0, 0.05f64..4.0, 0.01f64..5.0, 0.05f64..3.0)
        .prop_map(|(delta, alpha, kappa, d_ratio, mu, rho)| {
            Parameters::new(delta, alpha, kappa, d_ratio, mu, rho).unwrap()
        })
}

proptest! {
    #[test]
    fn config_serialization_round_trips(
        p in arb_params(),
        h0 in 0.1f64..5.0,
        amp_u in 0.01f64..2.0,
        amp_v in 0.01f64..2.0,
        n in 16usize..512,
        t_max in 0.1f64..200.0,
        fixed in any::<bool>(),
        dt in 1e-6f64..0.1,
    ) {
        let cfg = RunConfig {
            params: p,
            h0,
            family: ProfileFamily::Cosine { amp_u, amp_v },
            profile_nodes: 2001,
            solver: SolverConfig {
                n,
                dt_policy: if fixed { DtPolicy::Fixed(dt) } else { DtPolicy::CflScaled { dt_max: dt } },
                t_max,
                ..Default::default()
            },
            classify: ClassifyConfig::default(),
            theta: None,
        };
        let parsed = parse_config(&serialize(&cfg)).unwrap();
        prop_assert_eq!(parsed, cfg);
    }

    #[test]
    fn eigenvalue_sign_matches_critical_quantities(
        d in 0.01f64..10.0,
        a in 0.01f64..10.0,
        length in 0.01f64..10.0,
    ) {
        let sigma = principal_eigenvalue(&EigenProblemSpec::new(d, a, length).unwrap());
        let l_star = critical_length(d, a);
        let d_star = critical_diffusivity(a, length);
        // Away from the boundary the three signs agree.
        if sigma.abs() > 1e-9 {
            prop_assert_eq!(sigma > 0.0, length > l_star);
            prop_assert_eq!(sigma > 0.0, d < d_star);
        }
    }

    #[test]
    fn squeeze_sequences_bracket_monotonically(p in arb_params()) {
        prop_assume!(p.h1_satisfied());
        let seq = squeeze_limits(&p, 30).unwrap();
        let (u_star, v_star) = seq.limits;
        for i in 0..seq.u_upper.len() {
            prop_assert!(seq.u_lower[i] <= u_star + 1e-12);
            prop_assert!(seq.u_upper[i] >= u_star - 1e-12);
            prop_assert!(seq.v_lower[i] <= v_star + 1e-12);
            prop_assert!(seq.v_upper[i] >= v_star - 1e-12);
            if i > 0 {
                prop_assert!(seq.u_upper[i] <= seq.u_upper[i - 1] + 1e-15);
                prop_assert!(seq.u_lower[i] >= seq.u_lower[i - 1] - 1e-15);
            }
        }
        let last = seq.u_upper.len() - 1;
        prop_assert!(seq.u_upper[last] - seq.u_lower[last] <= seq.u_upper[0] - seq.u_lower[0]);
        prop_assert!(seq.v_upper[last] - seq.v_lower[last] <= seq.v_upper[0] - seq.v_lower[0]);
    }

    #[test]
    fn cutoff_respects_slope_bound_everywhere(
        h0 in 0.05f64..20.0,
        frac in 0.0f64..2.0,
    ) {
        let z = Cutoff::new(h0).unwrap();
        let y = frac * h0;
        let (val, dz, _) = z.eval(y);
        prop_assert!((0.0..=1.0).contains(&val));
        prop_assert!(dz.abs() <= 6.0 / h0 + 1e-12);
        if (y - h0).abs() <= 0.25 * h0 {
            prop_assert_eq!(val, 1.0);
        }
        if (y - h0).abs() >= 0.5 * h0 {
            prop_assert_eq!(val, 0.0);
        }
    }

    #[test]
    fn transform_is_identity_at_rest(
        h0 in 0.1f64..10.0,
        frac in 0.0f64..2.0,
    ) {
        let z = Cutoff::new(h0).unwrap();
        let c = transform_coefficients(&z, h0, 0.0, frac * h0).unwrap();
        prop_assert_eq!(c.a, 1.0);
        prop_assert_eq!(c.b, 0.0);
        prop_assert_eq!(c.c, 0.0);
    }
}
