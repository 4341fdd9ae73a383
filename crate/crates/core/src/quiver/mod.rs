//! Representations of the three-vertex quiver with vertices `-2, -1, 0`,
//! triple arrows `X, Y, Z` between neighbours and the Sklyanin relations
//! on length-two paths, and of its two-vertex subquiver.
//!
//! Matrices act on column vectors; a path "first α, then β" is `β·α`.

mod hom;
mod membership;
mod stability;

pub use hom::{euler_form_quiver, ext_dims, hom_space, is_isomorphic, ExtDims, HomSpace, EULER_MATRIX};
pub use membership::{line_object_rep, membership_check_dn, Certificate, HomFailure, HomVanishing, MembershipMode};
pub use stability::{stability_check, subspace_count, StabilityMode, StabilityReport, Verdict, SUBSPACE_BUDGET};

use crate::algebra::RelationTensor;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Quotient, Scalar};

/// Vertex labels in storage order.
pub const VERTICES: [i64; 3] = [-2, -1, 0];

/// Common view of a quiver representation for the Hom/Ext solvers.
pub trait QuiverRep {
    fn field(&self) -> FieldSpec;
    fn vertex_dims(&self) -> Vec<usize>;
    /// `(source, target, matrix)` for every arrow.
    fn arrows(&self) -> Vec<(usize, usize, &Matrix)>;
}

/// A representation of the full quiver: `lower[g]` maps vertex `-2` to `-1`,
/// `upper[g]` maps `-1` to `0`, for generators `g = x, y, z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaRep {
    field: FieldSpec,
    dims: [usize; 3],
    lower: [Matrix; 3],
    upper: [Matrix; 3],
}

/// A representation of the subquiver on vertices `-2, -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta0Rep {
    field: FieldSpec,
    dims: [usize; 2],
    maps: [Matrix; 3],
}

fn check_shape(m: &Matrix, rows: usize, cols: usize, name: &str) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::ShapeMismatch(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn check_field(field: FieldSpec, ms: &[&Matrix]) -> Result<()> {
    if ms.iter().any(|m| m.field() != field) {
        return Err(Error::ShapeMismatch("matrices over different fields".into()));
    }
    Ok(())
}

impl DeltaRep {
    pub fn new(field: FieldSpec, dims: [usize; 3], lower: [Matrix; 3], upper: [Matrix; 3]) -> Result<Self> {
        for g in 0..3 {
            check_shape(&lower[g], dims[1], dims[0], &format!("lower arrow {g}"))?;
            check_shape(&upper[g], dims[2], dims[1], &format!("upper arrow {g}"))?;
        }
        check_field(field, &[&lower[0], &lower[1], &lower[2], &upper[0], &upper[1], &upper[2]])?;
        Ok(DeltaRep {
            field,
            dims,
            lower,
            upper,
        })
    }

    pub fn zero(field: FieldSpec, dims: [usize; 3]) -> Self {
        let lower = [0, 1, 2].map(|_| Matrix::zeros(field, dims[1], dims[0]));
        let upper = [0, 1, 2].map(|_| Matrix::zeros(field, dims[2], dims[1]));
        DeltaRep {
            field,
            dims,
            lower,
            upper,
        }
    }

    /// The simple representation at storage vertex `v` (0, 1, 2 for -2, -1, 0).
    pub fn simple(field: FieldSpec, v: usize) -> Self {
        let mut dims = [0; 3];
        dims[v] = 1;
        DeltaRep::zero(field, dims)
    }

    /// `k → k → k` with scalar arrows `first` then `second`.
    pub fn from_point_pair(first: &[Scalar; 3], second: &[Scalar; 3]) -> Self {
        let field = first[0].field();
        let one = |s: &Scalar| Matrix::new(field, 1, 1, vec![s.clone()]);
        DeltaRep {
            field,
            dims: [1, 1, 1],
            lower: [0, 1, 2].map(|g| one(&first[g])),
            upper: [0, 1, 2].map(|g| one(&second[g])),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn lower(&self) -> &[Matrix; 3] {
        &self.lower
    }

    pub fn upper(&self) -> &[Matrix; 3] {
        &self.upper
    }
}

impl Delta0Rep {
    pub fn new(field: FieldSpec, dims: [usize; 2], maps: [Matrix; 3]) -> Result<Self> {
        for (g, m) in maps.iter().enumerate() {
            check_shape(m, dims[1], dims[0], &format!("arrow {g}"))?;
        }
        check_field(field, &[&maps[0], &maps[1], &maps[2]])?;
        Ok(Delta0Rep { field, dims, maps })
    }

    /// `k → k` with scalar arrows.
    pub fn from_scalars(s: &[Scalar; 3]) -> Self {
        let field = s[0].field();
        Delta0Rep {
            field,
            dims: [1, 1],
            maps: [0, 1, 2].map(|g| Matrix::new(field, 1, 1, vec![s[g].clone()])),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn maps(&self) -> &[Matrix; 3] {
        &self.maps
    }

    /// `Σ c_g · maps[g]`.
    pub fn pencil(&self, c: &[Scalar; 3]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dims[1], self.dims[0]);
        for g in 0..3 {
            m.add_scaled(&c[g], &self.maps[g]);
        }
        m
    }
}

impl QuiverRep for DeltaRep {
    fn field(&self) -> FieldSpec {
        self.field
    }

    fn vertex_dims(&self) -> Vec<usize> {
        self.dims.to_vec()
    }

    fn arrows(&self) -> Vec<(usize, usize, &Matrix)> {
        let mut a: Vec<_> = self.lower.iter().map(|m| (0, 1, m)).collect();
        a.extend(self.upper.iter().map(|m| (1, 2, m)));
        a
    }
}

impl QuiverRep for Delta0Rep {
    fn field(&self) -> FieldSpec {
        self.field
    }

    fn vertex_dims(&self) -> Vec<usize> {
        self.dims.to_vec()
    }

    fn arrows(&self) -> Vec<(usize, usize, &Matrix)> {
        self.maps.iter().map(|m| (0, 1, m)).collect()
    }
}

/// The three relation residuals `Σ λ^k_ij upper[j]·lower[i]`.
pub fn relation_residuals(rel: &RelationTensor, r: &DeltaRep) -> Result<[Matrix; 3]> {
    if rel.field() != r.field {
        return Err(Error::ShapeMismatch("relations and representation over different fields".into()));
    }
    let f = r.field;
    let products: Vec<Vec<Matrix>> = (0..3)
        .map(|i| (0..3).map(|j| r.upper[j].mul(&r.lower[i])).collect())
        .collect();
    Ok([0, 1, 2].map(|k| {
        let mut m = Matrix::zeros(f, r.dims[2], r.dims[0]);
        for (i, row) in products.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                m.add_scaled(rel.coeff(k, i, j), p);
            }
        }
        m
    }))
}

/// Indices of relations whose residual is nonzero; empty iff the
/// representation satisfies every relation.
pub fn validate_rep(rel: &RelationTensor, r: &DeltaRep) -> Result<Vec<usize>> {
    Ok(relation_residuals(rel, r)?
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(k, _)| k)
        .collect())
}

pub fn res(r: &DeltaRep) -> Delta0Rep {
    Delta0Rep {
        field: r.field,
        dims: [r.dims[0], r.dims[1]],
        maps: r.lower.clone(),
    }
}

/// Substitutes the transposed arrow matrices for the generators in the
/// presentation `f_k = Σ_j m_kj x_j`: block `(k, j)` is `Σ_i λ^k_ij X_iᵀ`.
pub fn big_matrix_m(rel: &RelationTensor, f: &Delta0Rep) -> Matrix {
    let (n0, n1) = (f.dims[0], f.dims[1]);
    let field = f.field;
    let mut m = Matrix::zeros(field, 3 * n0, 3 * n1);
    let transposed = f.maps.clone().map(|x| x.transpose());
    for k in 0..3 {
        for j in 0..3 {
            let mut block = Matrix::zeros(field, n0, n1);
            for (i, t) in transposed.iter().enumerate() {
                block.add_scaled(rel.coeff(k, i, j), t);
            }
            m.set_block(k * n0, j * n1, &block);
        }
    }
    m
}

/// Left adjoint of [`res`]: vertex `0` is the cokernel of the map
/// `F₋₂³ → F₋₁³` sending `v` in slot `k` to `Σ_ij λ^k_ij X_i v` in slot `j`.
pub fn ind(rel: &RelationTensor, f: &Delta0Rep) -> Result<DeltaRep> {
    if rel.field() != f.field {
        return Err(Error::ShapeMismatch("relations and representation over different fields".into()));
    }
    let n1 = f.dims[1];
    let relation_map = big_matrix_m(rel, f).transpose();
    let q = Quotient::by_columns(&relation_map);
    let upper = [0, 1, 2].map(|j| {
        let cols: Vec<usize> = (j * n1..(j + 1) * n1).collect();
        q.proj().select_columns(&cols)
    });
    DeltaRep::new(f.field, [f.dims[0], n1, q.dim()], f.maps.clone(), upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SklyParams;
    use crate::elliptic::{CurvePoint, EllipticData};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn setup(p: u64) -> (RelationTensor, EllipticData) {
        let f = FieldSpec::prime(p).unwrap();
        let rel = RelationTensor::sklyanin(&SklyParams::from_i64(f, 1, 2, 3).unwrap());
        let e = EllipticData::new(&rel).unwrap();
        (rel, e)
    }

    pub(crate) fn random_delta0(f: FieldSpec, dims: [usize; 2], rng: &mut ChaCha8Rng) -> Delta0Rep {
        let maps = [0, 1, 2].map(|_| {
            Matrix::new(f, dims[1], dims[0], (0..dims[0] * dims[1]).map(|_| f.random(rng)).collect())
        });
        Delta0Rep::new(f, dims, maps).unwrap()
    }

    #[test]
    fn big_matrix_layout() {
        let (rel, _) = setup(101);
        let f = rel.field();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = random_delta0(f, [2, 2], &mut rng);
        let m = big_matrix_m(&rel, &r);
        let [x, y, z] = r.maps().clone().map(|m| m.transpose());
        let (a, b, c) = (f.from_i64(1), f.from_i64(2), f.from_i64(3));
        let layout = [
            [x.scale(&c), z.scale(&b), y.scale(&a)],
            [z.scale(&a), y.scale(&c), x.scale(&b)],
            [y.scale(&b), x.scale(&a), z.scale(&c)],
        ];
        for (k, row) in layout.iter().enumerate() {
            for (j, blk) in row.iter().enumerate() {
                assert_eq!(&m.block(2 * k, 2 * j, 2, 2), blk);
            }
        }
    }

    #[test]
    fn point_reps_satisfy_relations_only_on_curve() {
        let (rel, e) = setup(101);
        let f = rel.field();
        for q in e.enumerate_points().unwrap().iter().take(20) {
            let r = e.point_rep(q).unwrap();
            assert!(validate_rep(&rel, &r).unwrap().is_empty());
        }
        let mut off = 0;
        for y in 0..101 {
            let q = CurvePoint::from_i64(f, [1, y, 7]).unwrap();
            if e.contains(q.coords()) {
                continue;
            }
            // the pair (q, q) is on the graph of σ only if q is fixed
            let r = DeltaRep::from_point_pair(q.coords(), q.coords());
            assert!(!validate_rep(&rel, &r).unwrap().is_empty());
            off += 1;
        }
        assert!(off >= 20);
        assert!(validate_rep(&rel, &DeltaRep::zero(f, [2, 3, 1])).unwrap().is_empty());
    }

    #[test]
    fn random_reps_break_relations() {
        let (rel, _) = setup(101);
        let f = rel.field();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let lo = random_delta0(f, [2, 2], &mut rng);
        let up = random_delta0(f, [2, 2], &mut rng);
        let r = DeltaRep::new(f, [2, 2, 2], lo.maps().clone(), up.maps().clone()).unwrap();
        assert!(!validate_rep(&rel, &r).unwrap().is_empty());
    }

    #[test]
    fn shapes_are_checked() {
        let f = FieldSpec::prime(7).unwrap();
        let bad = [0, 1, 2].map(|_| Matrix::zeros(f, 2, 2));
        assert!(matches!(Delta0Rep::new(f, [1, 2], bad), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn ind_of_zero_maps() {
        let (rel, _) = setup(101);
        let f = rel.field();
        let z = Delta0Rep::new(f, [1, 1], [0, 1, 2].map(|_| Matrix::zeros(f, 1, 1))).unwrap();
        assert_eq!(big_matrix_m(&rel, &z).rank(), 0);
        let i = ind(&rel, &z).unwrap();
        assert_eq!(i.dims(), [1, 1, 3]);
        assert!(validate_rep(&rel, &i).unwrap().is_empty());
    }

    #[test]
    fn res_ind_is_identity_and_ind_satisfies_relations() {
        let (rel, _) = setup(101);
        let f = rel.field();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for t in 0..50 {
            let dims = [1 + t % 3, 1 + (t / 3) % 3];
            let r = random_delta0(f, dims, &mut rng);
            let i = ind(&rel, &r).unwrap();
            assert_eq!(res(&i), r);
            assert!(validate_rep(&rel, &i).unwrap().is_empty());
            assert_eq!(i.dims()[2], 3 * dims[1] - big_matrix_m(&rel, &r).rank());
        }
    }

    #[test]
    fn point_reps_are_induced() {
        let (rel, e) = setup(101);
        for q in e.enumerate_points().unwrap().iter().take(20) {
            let r = e.point_rep(q).unwrap();
            let i = ind(&rel, &res(&r)).unwrap();
            assert_eq!(i.dims(), [1, 1, 1]);
            assert!(is_isomorphic(&i, &r));
        }
    }
}
