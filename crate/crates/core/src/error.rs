//! Error type shared by every module of the crate.

/// Failures reported by the kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two operands have incompatible shapes.
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        /// Operation that detected the mismatch.
        context: &'static str,
        /// Expected size.
        expected: usize,
        /// Size actually supplied.
        found: usize,
    },
    /// Conjugating a basis vector by a spin element left the vector span.
    #[error("conjugated basis vector leaves the vector span (residual {residual:e})")]
    ConjugationNotVectorial {
        /// Largest decomposition residual.
        residual: f64,
    },
    /// A raw matrix does not preserve the invariant form.
    #[error("matrix is not a spin element (residual {residual:e})")]
    NotSpinElement {
        /// Largest invariant violation.
        residual: f64,
    },
    /// Commutators of a basis do not close on its span.
    #[error("commutators leave the span of the basis (residual {residual:e})")]
    NotClosed {
        /// Largest decomposition residual.
        residual: f64,
    },
    /// A generator of the internal group is not antihermitian.
    #[error("generator {index} is not antihermitian (residual {residual:e})")]
    NonAntihermitianGenerator {
        /// Zero-based generator index.
        index: usize,
        /// Largest entry of `theta + theta^*`.
        residual: f64,
    },
    /// The tetrad is (numerically) degenerate.
    #[error("degenerate tetrad (det O' = {det:e})")]
    SingularTetrad {
        /// Determinant of the inverse tetrad.
        det: f64,
    },
    /// The tetrad has reversed orientation.
    #[error("tetrad with negative orientation (det O' = {det:e})")]
    NegativeOrientation {
        /// Determinant of the inverse tetrad.
        det: f64,
    },
    /// A moment that must be real carries an imaginary part.
    #[error("moment {name} is not real (imaginary residue {residue:e})")]
    NonRealMoment {
        /// Name of the moment family.
        name: &'static str,
        /// Largest spurious component.
        residue: f64,
    },
    /// A direction vector is not normalised.
    #[error("direction is not a unit vector (norm {norm})")]
    NotUnit {
        /// Euclidean norm of the supplied vector.
        norm: f64,
    },
    /// The gravitational coupling vanishes where it divides.
    #[error("gravitational coupling aG is zero")]
    ZeroCoupling,
    /// The gravitational solve failed its residual check.
    #[error("gravity solution fails its defining equations (residual {residual:e})")]
    SolutionInconsistent {
        /// Largest residual of the 24 equations.
        residual: f64,
    },
    /// A residual evaluator was not given a derivative it needs.
    #[error("missing jet: {name}")]
    MissingJet {
        /// Name of the absent derivative.
        name: &'static str,
    },
    /// The electromagnetic specialisation needs the abelian one-generator group.
    #[error("internal group is not U(1)")]
    NotU1,
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;
