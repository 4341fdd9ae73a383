//! Exact scalars and dense linear algebra. Everything else in the crate
//! reduces to rank, kernel, and solve calls on these types.

mod matrix;
mod scalar;

pub use matrix::{Matrix, Rref};
pub use scalar::{is_prime, FieldSpec, Scalar, MAX_PRIME};

/// Quotient of `k^ambient` by the span of a set of vectors, with a fixed
/// complement basis: the coordinates that are not echelon pivots.
#[derive(Clone, Debug)]
pub struct Quotient {
    ambient: usize,
    /// `dim × ambient`
    proj: Matrix,
    /// `ambient × dim`
    lift: Matrix,
}

impl Quotient {
    /// Quotient by the column span of `span` (an `ambient × m` matrix).
    pub fn by_columns(span: &Matrix) -> Quotient {
        let field = span.field();
        let ambient = span.rows();
        let Rref { matrix: r, pivots } = span.transpose().rref();
        let free: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        let mut proj = Matrix::zeros(field, free.len(), ambient);
        let mut lift = Matrix::zeros(field, ambient, free.len());
        for (k, &f) in free.iter().enumerate() {
            proj[(k, f)] = field.one();
            lift[(f, k)] = field.one();
        }
        for (row, &pc) in pivots.iter().enumerate() {
            for (k, &f) in free.iter().enumerate() {
                proj[(k, pc)] = -&r[(row, f)];
            }
        }
        Quotient {
            ambient,
            proj,
            lift,
        }
    }

    /// The trivial quotient by the zero subspace.
    pub fn trivial(field: FieldSpec, ambient: usize) -> Quotient {
        Quotient::by_columns(&Matrix::zeros(field, ambient, 0))
    }

    pub fn dim(&self) -> usize {
        self.proj.rows()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn proj(&self) -> &Matrix {
        &self.proj
    }

    pub fn lift(&self) -> &Matrix {
        &self.lift
    }
}

/// Normalizes a nonzero vector so its first nonzero entry is 1.
pub fn normalize_projective(v: &[Scalar]) -> Option<Vec<Scalar>> {
    let lead = v.iter().find(|s| !s.is_zero())?;
    let inv = lead.inv();
    Some(v.iter().map(|s| s * &inv).collect())
}
