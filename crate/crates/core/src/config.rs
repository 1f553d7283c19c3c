//! TOML run configuration.
//!
//! A config file describes the mixture, the kinetic kernel (explicit series
//! coefficients or a hard-sphere fit request), one angular entry per species
//! pair, and optional solver, sweep, and oracle sections. Angular tables are
//! separate CSV files referenced by a path relative to the config file.

use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::collision::{AnalyticKineticKernel, AngularKernel, AngularKernelSet, PairAngular};
use crate::error::{Error, Result};
use crate::grid::{Boundary, Grid1D};
use crate::mixture::{MixtureSpec, Species};
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mixture: RawMixture,
    kernel: RawKernel,
    angular: Vec<RawAngular>,
    solver: Option<RawSolver>,
    sweep: Option<RawSweep>,
    oracle: Option<RawOracle>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMixture {
    temperature: f64,
    boltzmann_k: Option<f64>,
    total_concentration: Option<f64>,
    species: Vec<RawSpecies>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpecies {
    name: String,
    mass: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    coefficients: Option<Vec<f64>>,
    hard_sphere_fit: Option<RawFit>,
    r_max: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFit {
    r_max: f64,
    degree: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAngular {
    pair: [String; 2],
    constant: Option<f64>,
    table: Option<String>,
    l1_norm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    x_min: f64,
    x_max: f64,
    n_cells: usize,
    boundary: String,
    dt: Option<f64>,
    t_end: f64,
    output_every: Option<usize>,
    profiles: Vec<RawProfile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    species: String,
    terms: Vec<ProfileTerm>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileTerm {
    Constant {
        value: f64,
    },
    /// amplitude * sin(2 pi wavenumber (x - x_min) / L + phase)
    Sine {
        amplitude: f64,
        wavenumber: f64,
        phase: Option<f64>,
    },
    /// height * exp(-((x - center) / width)^2)
    Gaussian {
        center: f64,
        width: f64,
        height: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    epsilons: Vec<f64>,
    refine: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    nodes_per_axis: Option<usize>,
    richardson_eps: Option<[f64; 2]>,
}

fn invalid(path: &str, message: impl Into<String>) -> Error {
    Error::ConfigInvalid {
        path: path.to_string(),
        message: message.into(),
    }
}

impl ProfileTerm {
    fn eval(&self, x: f64, x_min: f64, length: f64) -> f64 {
        match self {
            ProfileTerm::Constant { value } => *value,
            ProfileTerm::Sine {
                amplitude,
                wavenumber,
                phase,
            } => {
                let arg = 2.0 * std::f64::consts::PI * wavenumber * (x - x_min) / length
                    + phase.unwrap_or(0.0);
                amplitude * arg.sin()
            }
            ProfileTerm::Gaussian {
                center,
                width,
                height,
            } => {
                let z = (x - center) / width;
                height * (-z * z).exp()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub grid: Grid1D,
    pub dt: Option<f64>,
    pub t_end: f64,
    pub output_every: usize,
    profiles: Vec<Vec<ProfileTerm>>,
}

impl SolverConfig {
    /// Initial concentration of one species at position x.
    pub fn profile_value(&self, species: usize, x: f64) -> f64 {
        let x_min = self.grid.x_min();
        let length = self.grid.x_max() - x_min;
        self.profiles[species]
            .iter()
            .map(|t| t.eval(x, x_min, length))
            .sum()
    }

    /// Cell-center fields for every species on the configured grid.
    pub fn initial_fields(&self) -> Vec<Vec<f64>> {
        (0..self.profiles.len())
            .map(|s| {
                (0..self.grid.n_cells())
                    .map(|i| self.profile_value(s, self.grid.cell_center(i)))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub epsilons: Vec<f64>,
    pub refine: usize,
}

#[derive(Debug)]
pub struct RunConfig {
    pub spec: MixtureSpec,
    pub kernel: AnalyticKineticKernel,
    /// Max pointwise fit error when the kernel came from a hard-sphere fit.
    pub fit_error: Option<f64>,
    pub angular: AngularKernelSet,
    pub solver: Option<SolverConfig>,
    pub sweep: Option<SweepConfig>,
    pub oracle: QuadratureConfig,
}

impl RunConfig {
    /// The solver section, or a field-path error if it is missing.
    pub fn solver_required(&self) -> Result<&SolverConfig> {
        self.solver
            .as_ref()
            .ok_or_else(|| invalid("solver", "section required for this command"))
    }

    pub fn sweep_required(&self) -> Result<&SweepConfig> {
        self.sweep
            .as_ref()
            .ok_or_else(|| invalid("sweep", "section required for this command"))
    }
}

/// Angular table CSV: optional comment lines, an `eta,b` header, then one
/// `eta,value` row per sample on a uniform symmetric grid.
pub fn read_angular_table(path: &Path) -> Result<AngularKernel> {
    let file = fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let name = path.display().to_string();
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut seen_header = false;
    for line in reader.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !seen_header {
            if trimmed != "eta,b" {
                return Err(Error::CsvFormat {
                    name,
                    message: format!("expected header 'eta,b', got {trimmed:?}"),
                });
            }
            seen_header = true;
            continue;
        }
        let (eta, value) = trimmed.split_once(',').ok_or_else(|| Error::CsvFormat {
            name: name.clone(),
            message: format!("expected two comma-separated fields, got {trimmed:?}"),
        })?;
        let parse = |field: &str| -> Result<f64> {
            field.trim().parse::<f64>().map_err(|_| Error::CsvFormat {
                name: name.clone(),
                message: format!("not a number: {field:?}"),
            })
        };
        points.push((parse(eta)?, parse(value)?));
    }
    if !seen_header {
        return Err(Error::CsvFormat {
            name,
            message: "missing 'eta,b' header".into(),
        });
    }
    let (eta, b): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    AngularKernel::from_points(&eta, &b)
}

fn build_mixture(raw: &RawMixture) -> Result<MixtureSpec> {
    let species: Vec<Species> = raw
        .species
        .iter()
        .map(|s| Species::new(&s.name, s.mass))
        .collect();
    MixtureSpec::new(
        species,
        raw.temperature,
        raw.boltzmann_k.unwrap_or(1.0),
        raw.total_concentration.unwrap_or(1.0),
    )
    .map_err(|e| invalid("mixture", e.to_string()))
}

fn build_kernel(raw: &RawKernel) -> Result<(AnalyticKineticKernel, Option<f64>)> {
    match (&raw.coefficients, &raw.hard_sphere_fit) {
        (Some(_), Some(_)) => Err(invalid(
            "kernel",
            "give either coefficients or hard_sphere_fit, not both",
        )),
        (None, None) => Err(invalid(
            "kernel",
            "one of coefficients or hard_sphere_fit is required",
        )),
        (Some(coefficients), None) => {
            let kernel = match raw.r_max {
                Some(r_max) => AnalyticKineticKernel::with_r_max(coefficients.clone(), r_max),
                None => AnalyticKineticKernel::new(coefficients.clone()),
            }
            .map_err(|e| invalid("kernel.coefficients", e.to_string()))?;
            Ok((kernel, None))
        }
        (None, Some(fit)) => {
            if raw.r_max.is_some() {
                return Err(invalid(
                    "kernel.r_max",
                    "hard_sphere_fit carries its own r_max",
                ));
            }
            let (kernel, err) = AnalyticKineticKernel::hard_sphere_fit(fit.r_max, fit.degree)
                .map_err(|e| invalid("kernel.hard_sphere_fit", e.to_string()))?;
            Ok((kernel, Some(err)))
        }
    }
}

fn build_angular(
    raw: &[RawAngular],
    spec: &MixtureSpec,
    config_dir: &Path,
) -> Result<AngularKernelSet> {
    let order = spec.len();
    let mut entries: Vec<(usize, usize, PairAngular)> = Vec::with_capacity(raw.len());
    let mut seen = vec![false; order * order];
    for (k, entry) in raw.iter().enumerate() {
        let path = format!("angular[{k}]");
        let index = |name: &str| -> Result<usize> {
            spec.index_of(name)
                .ok_or_else(|| invalid(&path, format!("unknown species {name:?}")))
        };
        let i = index(&entry.pair[0])?;
        let j = index(&entry.pair[1])?;
        if i == j {
            return Err(invalid(&path, format!("pair lists {:?} twice", entry.pair[0])));
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if seen[a * order + b] {
            return Err(invalid(
                &path,
                format!("duplicate entry for pair ({}, {})", entry.pair[0], entry.pair[1]),
            ));
        }
        seen[a * order + b] = true;
        let given = [
            entry.constant.is_some(),
            entry.table.is_some(),
            entry.l1_norm.is_some(),
        ]
        .iter()
        .filter(|&&g| g)
        .count();
        if given != 1 {
            return Err(invalid(
                &path,
                "exactly one of constant, table, l1_norm is required",
            ));
        }
        let pair_angular = if let Some(v) = entry.constant {
            PairAngular::Kernel(
                AngularKernel::constant(v).map_err(|e| invalid(&path, e.to_string()))?,
            )
        } else if let Some(table) = &entry.table {
            let table_path: PathBuf = config_dir.join(table);
            PairAngular::Kernel(read_angular_table(&table_path)?)
        } else {
            let norm = entry.l1_norm.unwrap();
            if !(norm >= 0.0) || !norm.is_finite() {
                return Err(invalid(&path, format!("l1_norm {norm} invalid")));
            }
            PairAngular::NormOnly(norm)
        };
        entries.push((i, j, pair_angular));
    }
    AngularKernelSet::from_entries(order, entries).map_err(|e| match e {
        Error::MissingAngularPair { i, j } => invalid(
            "angular",
            format!(
                "no entry for pair ({}, {}) = ({}, {})",
                i,
                j,
                spec.name(i),
                spec.name(j)
            ),
        ),
        other => invalid("angular", other.to_string()),
    })
}

fn build_solver(raw: &RawSolver, spec: &MixtureSpec) -> Result<SolverConfig> {
    let boundary = match raw.boundary.as_str() {
        "periodic" => Boundary::Periodic,
        "no_flux" => Boundary::NoFlux,
        other => {
            return Err(invalid(
                "solver.boundary",
                format!("expected \"periodic\" or \"no_flux\", got {other:?}"),
            ))
        }
    };
    let grid = Grid1D::new(raw.x_min, raw.x_max, raw.n_cells, boundary)
        .map_err(|e| invalid("solver", e.to_string()))?;
    if !(raw.t_end > 0.0) || !raw.t_end.is_finite() {
        return Err(invalid("solver.t_end", format!("must be positive, got {}", raw.t_end)));
    }
    if let Some(dt) = raw.dt {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(invalid("solver.dt", format!("must be positive, got {dt}")));
        }
    }

    let mut profiles: Vec<Option<Vec<ProfileTerm>>> = vec![None; spec.len()];
    for (k, profile) in raw.profiles.iter().enumerate() {
        let path = format!("solver.profiles[{k}]");
        let s = spec
            .index_of(&profile.species)
            .ok_or_else(|| invalid(&path, format!("unknown species {:?}", profile.species)))?;
        if profiles[s].is_some() {
            return Err(invalid(
                &path,
                format!("duplicate profile for species {:?}", profile.species),
            ));
        }
        profiles[s] = Some(profile.terms.clone());
    }
    let mut resolved = Vec::with_capacity(spec.len());
    for (s, p) in profiles.into_iter().enumerate() {
        resolved.push(p.ok_or_else(|| {
            invalid(
                "solver.profiles",
                format!("no profile for species {:?}", spec.name(s)),
            )
        })?);
    }

    let solver = SolverConfig {
        grid,
        dt: raw.dt,
        t_end: raw.t_end,
        output_every: raw.output_every.unwrap_or(0),
        profiles: resolved,
    };

    // The profiles must tile the total concentration and stay nonnegative.
    let c_total = spec.total_concentration();
    let tol = 1e-9 * c_total.max(1.0);
    for i in 0..grid.n_cells() {
        let x = grid.cell_center(i);
        let mut sum = 0.0;
        for s in 0..spec.len() {
            let v = solver.profile_value(s, x);
            if v < 0.0 {
                return Err(invalid(
                    "solver.profiles",
                    format!(
                        "species {:?} is negative ({v}) at x = {x}",
                        spec.name(s)
                    ),
                ));
            }
            sum += v;
        }
        if (sum - c_total).abs() > tol {
            return Err(invalid(
                "solver.profiles",
                format!(
                    "profiles sum to {sum} at x = {x}, expected total concentration {c_total}"
                ),
            ));
        }
    }
    Ok(solver)
}

/// Loads and validates a config file. Paths inside the file are resolved
/// relative to its directory.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)?;
    let raw: RawConfig = toml::from_str(&text).map_err(|e| Error::ConfigParse {
        message: e.to_string(),
    })?;
    let config_dir = path.parent().unwrap_or(Path::new("."));

    let spec = build_mixture(&raw.mixture)?;
    let (kernel, fit_error) = build_kernel(&raw.kernel)?;
    let angular = build_angular(&raw.angular, &spec, config_dir)?;
    let solver = match &raw.solver {
        Some(s) => Some(build_solver(s, &spec)?),
        None => None,
    };
    let sweep = raw.sweep.as_ref().map(|s| SweepConfig {
        epsilons: s.epsilons.clone(),
        refine: s.refine.unwrap_or(4),
    });
    let oracle = match &raw.oracle {
        Some(o) => {
            let eps = o.richardson_eps.unwrap_or([1e-3, 5e-4]);
            QuadratureConfig::new(o.nodes_per_axis.unwrap_or(40), (eps[0], eps[1]))
                .map_err(|e| invalid("oracle", e.to_string()))?
        }
        None => QuadratureConfig::default(),
    };

    Ok(RunConfig {
        spec,
        kernel,
        fit_error,
        angular,
        solver,
        sweep,
        oracle,
    })
}
