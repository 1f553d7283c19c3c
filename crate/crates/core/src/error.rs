//! Error type shared by every module in the crate.
//!
//! Constructors validate their inputs and report the first violated
//! invariant through one of these variants; numerical routines add the
//! runtime failures (stability bounds, singular systems, overflow).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // ---- mixture ----
    #[error("mixture needs at least 2 species, got {count}")]
    TooFewSpecies { count: usize },
    #[error("species {name:?} has nonpositive mass {value}")]
    NonpositiveMass { name: String, value: f64 },
    #[error("duplicate species name {name:?}")]
    DuplicateSpeciesName { name: String },
    #[error("temperature must be positive, got {value}")]
    NonpositiveTemperature { value: f64 },
    #[error("Boltzmann constant must be positive, got {value}")]
    NonpositiveBoltzmann { value: f64 },
    #[error("total concentration must be positive, got {value}")]
    NonpositiveTotalConcentration { value: f64 },
    #[error("concentration of species {index} is negative ({value})")]
    NegativeConcentration { index: usize, value: f64 },
    #[error("species index {index} out of range for {count} species")]
    SpeciesIndexOutOfRange { index: usize, count: usize },

    // ---- collision kernels ----
    #[error("kinetic kernel needs at least one coefficient")]
    EmptyKernel,
    #[error("kinetic kernel coefficient {value} is not finite")]
    NonFiniteKernelCoefficient { value: f64 },
    #[error("kinetic kernel is negative on its validation grid: phi({r}) = {value}")]
    NegativeKernelValue { r: f64, value: f64 },
    #[error("kernel validation radius must be positive, got {value}")]
    NonpositiveRMax { value: f64 },
    #[error("sigma must be a unit vector, |sigma| = {norm}")]
    NonUnitSigma { norm: f64 },
    #[error("cross section undefined for coincident velocities (v = v*)")]
    CoincidentVelocities,
    #[error("angular kernel needs an odd sample count >= 3, got {count}")]
    AngularSampleCount { count: usize },
    #[error("angular kernel sample {index} is negative ({value})")]
    NegativeAngularSample { index: usize, value: f64 },
    #[error("angular kernel is not even: samples {index} and its mirror differ by {diff}")]
    AngularAsymmetry { index: usize, diff: f64 },
    #[error("angular kernel grid invalid: {message}")]
    AngularGrid { message: String },
    #[error("angular kernel set is missing pair ({i}, {j})")]
    MissingAngularPair { i: usize, j: usize },
    #[error("hard-sphere fit request invalid: {message}")]
    FitRequest { message: String },

    // ---- gaussian moments ----
    #[error("exponent {value} must be even for a nonzero Gaussian moment factor")]
    OddExponent { value: u32 },
    #[error("double factorial product overflows the integer range at exponent {value}")]
    DoubleFactorialOverflow { value: u32 },

    // ---- quadrature oracle ----
    #[error("nodes_per_axis must lie in [8, 128], got {nodes}")]
    NodesOutOfRange { nodes: usize },
    #[error("Richardson epsilon pair invalid: ({e1}, {e2}); need 0 < e2 < e1 <= 0.1")]
    RichardsonEps { e1: f64, e2: f64 },
    #[error("total degree {degree} exceeds quadrature exactness bound {max}")]
    DegreeBound { degree: u32, max: u32 },
    #[error(
        "quadrature degree insufficient for kernel truncation order: needs {required} nodes per axis, budget is {budget}"
    )]
    QuadratureDegreeInsufficient { required: usize, budget: usize },
    #[error("scaling parameter eps must lie in (0, 0.1], got {value}")]
    EpsOutOfRange { value: f64 },
    #[error("velocity difference is zero; no component to extract the friction coefficient from")]
    ZeroVelocityDifference,

    // ---- diffusion coefficients ----
    #[error("composition order {n} exceeds the configured maximum {max}")]
    CompositionOrder { n: u32, max: u32 },
    #[error("even splits are defined for even totals only, got {value}")]
    OddSplitTotal { value: u32 },
    #[error("friction coefficient for pair ({i}, {j}) is nonpositive ({value}); no diffusion coefficient")]
    NonpositiveDeltaTilde { i: usize, j: usize, value: f64 },
    #[error("matrix order must be at least 2, got {order}")]
    MatrixOrder { order: usize },

    // ---- grids and solvers ----
    #[error("grid needs at least {min} cells, got {n_cells}")]
    GridTooSmall { n_cells: usize, min: usize },
    #[error("grid bounds invalid: x_min = {x_min}, x_max = {x_max}")]
    GridBounds { x_min: f64, x_max: f64 },
    #[error("time step must be positive and finite, got {value}")]
    InvalidDt { value: f64 },
    #[error("end time must be nonnegative and finite, got {value}")]
    InvalidTEnd { value: f64 },
    #[error("stability bound violated: dt = {dt} exceeds {bound} ({kind})")]
    StabilityBound { dt: f64, bound: f64, kind: &'static str },
    #[error("concentration of species {species} in cell {cell} fell below tolerance ({value})")]
    NegativeCell { species: usize, cell: usize, value: f64 },
    #[error("singular flux system at face {face} (matrix 1-norm {norm:.3e})")]
    SingularFluxSystem { face: usize, norm: f64 },
    #[error("singular momentum relaxation system in cell {cell}")]
    SingularMomentumSystem { cell: usize },
    #[error("state shape mismatch: {message}")]
    ShapeMismatch { message: String },
    #[error("epsilon must lie in (0, 1), got {value}")]
    EpsilonOutOfRange { value: f64 },
    #[error("sweep epsilon list invalid: {message}")]
    SweepEpsilons { message: String },

    // ---- config and output ----
    #[error("config parse error: {message}")]
    ConfigParse { message: String },
    #[error("config invalid at {path}: {message}")]
    ConfigInvalid { path: String, message: String },
    #[error("csv format error in {name}: {message}")]
    CsvFormat { name: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
