use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate tetrahedron {tet}: volume {volume:e} below threshold {threshold:e}")]
    DegenerateTet { tet: usize, volume: f64, threshold: f64 },

    #[error("msh parse error at line {line}: {message}")]
    MshParse { line: usize, message: String },

    #[error("missing section ${0}")]
    MissingSection(&'static str),

    #[error("non-manifold mesh: face {face:?} is shared by {count} tetrahedra")]
    NonManifold { face: [usize; 3], count: usize },

    #[error("unsupported quadrature degree {degree} for {entity} (supported 1..={max})")]
    UnsupportedDegree {
        entity: &'static str,
        degree: usize,
        max: usize,
    },

    #[error("singular DOF matrix: smallest singular value {min_singular:e} vs norm {norm:e}")]
    SingularVandermonde { min_singular: f64, norm: f64 },

    #[error("matrix is not symmetric positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotSpd { min_eigenvalue: f64 },

    #[error("system too large for dense solve: {0} unknowns (limit 2000)")]
    TooLarge(usize),

    #[error("solver breakdown: {0}")]
    Breakdown(String),

    #[error("CG did not converge in {iterations} iterations (relative residual {residual:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        /// Best iterate reached before giving up.
        best: Vec<f64>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
