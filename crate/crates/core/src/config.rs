//! Flat `key = value` run configuration: parsing, validation and a
//! round-trip serializer.

use crate::dichotomy::ClassifyConfig;
use crate::error::{Error, Result};
use crate::model::{make_initial_profile, InitialProfile, Parameters, ProfileFamily};
use crate::solver::{DtPolicy, SolverConfig};
use std::collections::BTreeMap;

/// Everything needed for one run: model parameters, initial profile,
/// solver settings and classification tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: Parameters,
    pub h0: f64,
    pub family: ProfileFamily,
    /// Sample count for the tabulated initial profile.
    pub profile_nodes: usize,
    pub solver: SolverConfig,
    pub classify: ClassifyConfig,
    /// Optional override for the `mu2` gate parameter.
    pub theta: Option<f64>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.h0 > 0.0) {
            return Err(Error::domain("h0", "must be strictly positive"));
        }
        if self.profile_nodes < 3 {
            return Err(Error::domain("profile.nodes", "need at least 3 sample points"));
        }
        self.solver.validate()?;
        if !(self.classify.tol_v > 0.0) || !(self.classify.tol_m > 0.0) {
            return Err(Error::domain("tol_v/tol_m", "tolerances must be positive"));
        }
        if self.classify.window == 0 {
            return Err(Error::domain("window", "must be at least 1"));
        }
        Ok(())
    }

    pub fn initial_profile(&self) -> Result<InitialProfile> {
        make_initial_profile(self.family, self.h0, self.profile_nodes)
    }
}

/// Sweep request: axes over numeric config keys, applied on top of a base
/// run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: RunConfig,
    /// `(key, values)` pairs in file order; the grid is their cartesian
    /// product in row-major order.
    pub axes: Vec<(String, Vec<f64>)>,
    pub max_points: usize,
    pub concurrency: usize,
}

impl SweepSpec {
    pub fn grid_size(&self) -> usize {
        self.axes.iter().map(|(_, v)| v.len()).product()
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.axes.is_empty() {
            return Err(Error::Precondition("sweep needs at least one axis".into()));
        }
        for (key, values) in &self.axes {
            if values.is_empty() {
                return Err(Error::Precondition(format!("sweep axis `{key}` is empty")));
            }
            check_sweepable(key)?;
        }
        if self.grid_size() > self.max_points {
            return Err(Error::Precondition(format!(
                "sweep grid holds {} points, above the limit {}",
                self.grid_size(),
                self.max_points
            )));
        }
        if self.concurrency == 0 {
            return Err(Error::domain("sweep.concurrency", "must be at least 1"));
        }
        Ok(())
    }

    /// Coordinates of grid point `index` in row-major order.
    pub fn coordinates(&self, mut index: usize) -> Vec<f64> {
        let mut coords = vec![0.0; self.axes.len()];
        for (slot, (_, values)) in coords.iter_mut().zip(&self.axes).rev() {
            *slot = values[index % values.len()];
            index /= values.len();
        }
        coords
    }

    /// The base config with axis `key = value` overrides applied.
    pub fn config_at(&self, index: usize) -> Result<RunConfig> {
        let coords = self.coordinates(index);
        let mut cfg = self.base.clone();
        for ((key, _), value) in self.axes.iter().zip(coords) {
            apply_numeric(&mut cfg, key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

const SWEEPABLE: &[&str] = &[
    "delta", "alpha", "kappa", "Dratio", "mu", "rho", "h0", "t_max", "profile.amp_u",
    "profile.amp_v",
];

fn check_sweepable(key: &str) -> Result<()> {
    if SWEEPABLE.contains(&key) {
        Ok(())
    } else {
        Err(Error::domain("sweep axis", format!("key `{key}` cannot be swept")))
    }
}

fn apply_numeric(cfg: &mut RunConfig, key: &str, value: f64) -> Result<()> {
    let ProfileFamily::Cosine { amp_u, amp_v } = &mut cfg.family;
    match key {
        "delta" => cfg.params.delta = value,
        "alpha" => cfg.params.alpha = value,
        "kappa" => cfg.params.kappa = value,
        "Dratio" => cfg.params.d_ratio = value,
        "mu" => cfg.params.mu = value,
        "rho" => cfg.params.rho = value,
        "h0" => cfg.h0 = value,
        "t_max" => cfg.solver.t_max = value,
        "profile.amp_u" => *amp_u = value,
        "profile.amp_v" => *amp_v = value,
        _ => return Err(Error::domain("sweep axis", format!("key `{key}` cannot be swept"))),
    }
    Ok(())
}

struct Raw {
    // key -> (line number, value text)
    entries: BTreeMap<String, (usize, String)>,
}

impl Raw {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("expected `key = value`, got `{content}`"),
                });
            };
            let key = key.trim().to_string();
            if entries.contains_key(&key) {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
            entries.insert(key, (line_no, value.trim().to_string()));
        }
        Ok(Raw { entries })
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn require_f64(&mut self, key: &str) -> Result<f64> {
        let (line, text) = self
            .take(key)
            .ok_or_else(|| Error::Config { line: 0, message: format!("missing required key `{key}`") })?;
        parse_f64(key, line, &text)
    }

    fn optional_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            Some((line, text)) => Ok(Some(parse_f64(key, line, &text)?)),
            None => Ok(None),
        }
    }

    fn optional_usize(&mut self, key: &str) -> Result<Option<usize>> {
        match self.take(key) {
            Some((line, text)) => text.parse::<usize>().map(Some).map_err(|_| Error::Config {
                line,
                message: format!("value for `{key}` is not a nonnegative integer: `{text}`"),
            }),
            None => Ok(None),
        }
    }

    fn optional_bool(&mut self, key: &str) -> Result<Option<bool>> {
        match self.take(key) {
            Some((line, text)) => match text.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(Error::Config {
                    line,
                    message: format!("value for `{key}` must be true or false, got `{text}`"),
                }),
            },
            None => Ok(None),
        }
    }

    fn reject_unknown(&self) -> Result<()> {
        if let Some((key, (line, _))) = self.entries.iter().next() {
            return Err(Error::Config { line: *line, message: format!("unknown key `{key}`") });
        }
        Ok(())
    }
}

fn parse_f64(key: &str, line: usize, text: &str) -> Result<f64> {
    text.parse::<f64>().map_err(|_| Error::Config {
        line,
        message: format!("value for `{key}` is not a number: `{text}`"),
    })
}

fn parse_run_from_raw(raw: &mut Raw) -> Result<RunConfig> {
    let params = Parameters::new(
        raw.require_f64("delta")?,
        raw.require_f64("alpha")?,
        raw.require_f64("kappa")?,
        raw.require_f64("Dratio")?,
        raw.require_f64("mu")?,
        raw.require_f64("rho")?,
    )?;
    let h0 = raw.require_f64("h0")?;

    let (kind_line, kind) = raw
        .take("profile.kind")
        .ok_or_else(|| Error::Config { line: 0, message: "missing required key `profile.kind`".into() })?;
    if kind != "cosine" {
        return Err(Error::Config {
            line: kind_line,
            message: format!("unsupported profile.kind `{kind}`; expected `cosine`"),
        });
    }
    let family = ProfileFamily::Cosine {
        amp_u: raw.optional_f64("profile.amp_u")?.unwrap_or(0.5),
        amp_v: raw.optional_f64("profile.amp_v")?.unwrap_or(0.5),
    };
    let profile_nodes = raw.optional_usize("profile.nodes")?.unwrap_or(2001);

    let n = raw
        .take("N")
        .ok_or_else(|| Error::Config { line: 0, message: "missing required key `N`".into() })
        .and_then(|(line, text)| {
            text.parse::<usize>().map_err(|_| Error::Config {
                line,
                message: format!("value for `N` is not a nonnegative integer: `{text}`"),
            })
        })?;
    let t_max = raw.require_f64("t_max")?;

    let defaults = SolverConfig::default();
    let dt_policy = match raw.take("dt_policy") {
        None => defaults.dt_policy,
        Some((line, text)) => match text.as_str() {
            "cfl" => DtPolicy::CflScaled {
                dt_max: match defaults.dt_policy {
                    DtPolicy::CflScaled { dt_max } => dt_max,
                    DtPolicy::Fixed(_) => 0.05,
                },
            },
            "fixed" => DtPolicy::Fixed(0.0), // dt filled in below
            _ => {
                return Err(Error::Config {
                    line,
                    message: format!("dt_policy must be `cfl` or `fixed`, got `{text}`"),
                })
            }
        },
    };
    let dt_policy = match dt_policy {
        DtPolicy::Fixed(_) => {
            let dt = raw.require_f64("dt")?;
            DtPolicy::Fixed(dt)
        }
        DtPolicy::CflScaled { dt_max } => DtPolicy::CflScaled {
            dt_max: raw.optional_f64("dt_max")?.unwrap_or(dt_max),
        },
    };

    let solver = SolverConfig {
        n,
        dt_policy,
        t_max,
        positivity_tol: raw.optional_f64("positivity_tol")?.unwrap_or(defaults.positivity_tol),
        output_every: raw.optional_usize("output_every")?.unwrap_or(defaults.output_every),
        snapshots: raw.optional_usize("snapshots")?.unwrap_or(0),
        first_order_flux: raw.optional_bool("first_order_flux")?.unwrap_or(false),
        stop_on_vanish: raw.optional_bool("stop_on_vanish")?.unwrap_or(false),
    };

    let class_defaults = ClassifyConfig::default();
    let classify = ClassifyConfig {
        tol_v: raw.optional_f64("tol_v")?.unwrap_or(class_defaults.tol_v),
        tol_m: raw.optional_f64("tol_m")?.unwrap_or(class_defaults.tol_m),
        window: raw.optional_usize("window")?.unwrap_or(class_defaults.window),
    };

    let cfg = RunConfig {
        params,
        h0,
        family,
        profile_nodes,
        solver,
        classify,
        theta: raw.optional_f64("theta")?,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Parse a single-run configuration; unknown keys are rejected by name and
/// line.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut raw = Raw::parse(text)?;
    let cfg = parse_run_from_raw(&mut raw)?;
    raw.reject_unknown()?;
    Ok(cfg)
}

/// Parse a sweep configuration: the run keys plus `sweep.<axis>` value lists,
/// `sweep.max_points` and `sweep.concurrency`.
pub fn parse_sweep(text: &str) -> Result<SweepSpec> {
    let mut raw = Raw::parse(text)?;
    let base = parse_run_from_raw(&mut raw)?;
    let max_points = raw.optional_usize("sweep.max_points")?.unwrap_or(256);
    let concurrency = raw.optional_usize("sweep.concurrency")?.unwrap_or(4);

    let mut axes = Vec::new();
    let axis_keys: Vec<String> = raw
        .entries
        .keys()
        .filter(|k| k.starts_with("sweep."))
        .cloned()
        .collect();
    for full_key in axis_keys {
        let (line, text) = raw.take(&full_key).unwrap();
        let key = full_key.trim_start_matches("sweep.").to_string();
        check_sweepable(&key).map_err(|_| Error::Config {
            line,
            message: format!("unknown key `{full_key}`"),
        })?;
        let mut values = Vec::new();
        for piece in text.split(',') {
            values.push(parse_f64(&full_key, line, piece.trim())?);
        }
        axes.push((key, values));
    }
    raw.reject_unknown()?;
    let spec = SweepSpec { base, axes, max_points, concurrency };
    spec.validate()?;
    Ok(spec)
}

/// Serialize a run configuration so that `parse_config(serialize(cfg))`
/// reproduces it exactly; floats use Rust's shortest round-trip formatting.
pub fn serialize(cfg: &RunConfig) -> String {
    let ProfileFamily::Cosine { amp_u, amp_v } = cfg.family;
    let mut out = String::new();
    let mut push = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    push("delta", cfg.params.delta.to_string());
    push("alpha", cfg.params.alpha.to_string());
    push("kappa", cfg.params.kappa.to_string());
    push("Dratio", cfg.params.d_ratio.to_string());
    push("mu", cfg.params.mu.to_string());
    push("rho", cfg.params.rho.to_string());
    push("h0", cfg.h0.to_string());
    push("profile.kind", "cosine".into());
    push("profile.amp_u", amp_u.to_string());
    push("profile.amp_v", amp_v.to_string());
    push("profile.nodes", cfg.profile_nodes.to_string());
    push("N", cfg.solver.n.to_string());
    push("t_max", cfg.solver.t_max.to_string());
    match cfg.solver.dt_policy {
        DtPolicy::Fixed(dt) => {
            push("dt_policy", "fixed".into());
            push("dt", dt.to_string());
        }
        DtPolicy::CflScaled { dt_max } => {
            push("dt_policy", "cfl".into());
            push("dt_max", dt_max.to_string());
        }
    }
    push("positivity_tol", cfg.solver.positivity_tol.to_string());
    push("output_every", cfg.solver.output_every.to_string());
    push("snapshots", cfg.solver.snapshots.to_string());
    push("first_order_flux", cfg.solver.first_order_flux.to_string());
    push("stop_on_vanish", cfg.solver.stop_on_vanish.to_string());
    push("tol_v", cfg.classify.tol_v.to_string());
    push("tol_m", cfg.classify.tol_m.to_string());
    push("window", cfg.classify.window.to_string());
    if let Some(theta) = cfg.theta {
        push("theta", theta.to_string());
    }
    out
}
