use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{DeltaRep, QuiverRep};
use crate::algebra::RelationTensor;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix};

/// `χ(S_i, S_j)` with the row indexing the first argument, vertices in
/// storage order `-2, -1, 0`.
pub const EULER_MATRIX: [[i64; 3]; 3] = [[1, -3, 3], [0, 1, -3], [0, 0, 1]];

pub fn euler_form_quiver(d1: [usize; 3], d2: [usize; 3]) -> i64 {
    let mut s = 0;
    for i in 0..3 {
        for j in 0..3 {
            s += d1[i] as i64 * d2[j] as i64 * EULER_MATRIX[i][j];
        }
    }
    s
}

/// Intertwiners `R1 → R2`, each given by one matrix per vertex.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<Vec<Matrix>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub euler: i64,
}

impl ExtDims {
    pub fn as_tuple(&self) -> (usize, usize, usize) {
        (self.h0, self.h1, self.h2)
    }
}

fn offsets(sizes: impl Iterator<Item = usize>) -> (Vec<usize>, usize) {
    let mut out = Vec::new();
    let mut acc = 0;
    for s in sizes {
        out.push(acc);
        acc += s;
    }
    (out, acc)
}

fn check_same_quiver<R: QuiverRep>(r1: &R, r2: &R) -> Result<()> {
    if r1.field() != r2.field() {
        return Err(Error::ShapeMismatch("representations over different fields".into()));
    }
    Ok(())
}

/// `φ ↦ (R2_α φ_s − φ_t R1_α)_α`, with `φ_v` flattened row-major.
fn arrow_commutator<R: QuiverRep>(r1: &R, r2: &R) -> Matrix {
    let field = r1.field();
    let (d1, d2) = (r1.vertex_dims(), r2.vertex_dims());
    let (voff, vtotal) = offsets((0..d1.len()).map(|v| d2[v] * d1[v]));
    let a1 = r1.arrows();
    let a2 = r2.arrows();
    let (aoff, atotal) = offsets(a1.iter().map(|&(s, t, _)| d2[t] * d1[s]));
    let mut m = Matrix::zeros(field, atotal, vtotal);
    for (n, (&(s, t, m1), &(_, _, m2))) in a1.iter().zip(&a2).enumerate() {
        for r in 0..d2[t] {
            for c in 0..d1[s] {
                let row = aoff[n] + r * d1[s] + c;
                for k in 0..d2[s] {
                    let v = &m2[(r, k)];
                    if !v.is_zero() {
                        let col = voff[s] + k * d1[s] + c;
                        m[(row, col)] = &m[(row, col)] + v;
                    }
                }
                for k in 0..d1[t] {
                    let v = &m1[(k, c)];
                    if !v.is_zero() {
                        let col = voff[t] + r * d1[t] + k;
                        m[(row, col)] = &m[(row, col)] - v;
                    }
                }
            }
        }
    }
    m
}

fn unflatten(field: FieldSpec, d1: &[usize], d2: &[usize], v: &[crate::linalg::Scalar]) -> Vec<Matrix> {
    let mut pos = 0;
    (0..d1.len())
        .map(|i| {
            let len = d2[i] * d1[i];
            let m = Matrix::new(field, d2[i], d1[i], v[pos..pos + len].to_vec());
            pos += len;
            m
        })
        .collect()
}

pub fn hom_space<R: QuiverRep>(r1: &R, r2: &R) -> Result<HomSpace> {
    check_same_quiver(r1, r2)?;
    let field = r1.field();
    let (d1, d2) = (r1.vertex_dims(), r2.vertex_dims());
    let k = arrow_commutator(r1, r2).kernel_basis();
    let basis = (0..k.cols())
        .map(|c| unflatten(field, &d1, &d2, &k.column(c)))
        .collect();
    Ok(HomSpace { dim: k.cols(), basis })
}

/// Equal dimension vectors and an invertible intertwiner, found among
/// seeded random combinations of a Hom basis.
pub fn is_isomorphic<R: QuiverRep>(r1: &R, r2: &R) -> bool {
    if r1.vertex_dims() != r2.vertex_dims() {
        return false;
    }
    let Ok(h) = hom_space(r1, r2) else {
        return false;
    };
    if h.dim == 0 {
        return r1.vertex_dims().iter().all(|&d| d == 0);
    }
    let field = r1.field();
    let dims = r1.vertex_dims();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..32 {
        let phi: Vec<Matrix> = (0..dims.len())
            .map(|v| {
                let mut m = Matrix::zeros(field, dims[v], dims[v]);
                for b in &h.basis {
                    m.add_scaled(&field.random(&mut rng), &b[v]);
                }
                m
            })
            .collect();
        if phi.iter().all(|m| m.rank() == m.rows()) {
            return true;
        }
    }
    false
}

/// `ψ ↦ (Σ λ^k_ij (R2_up[j] ψ_low[i] + ψ_up[j] R1_low[i]))_k`.
fn relation_derivative(rel: &RelationTensor, r1: &DeltaRep, r2: &DeltaRep) -> Matrix {
    let field = r1.field();
    let (d1, d2) = (r1.dims(), r2.dims());
    let low = d2[1] * d1[0];
    let up = d2[2] * d1[1];
    let cols = 3 * low + 3 * up;
    let per_rel = d2[2] * d1[0];
    let mut m = Matrix::zeros(field, 3 * per_rel, cols);
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let lam = rel.coeff(k, i, j);
                if lam.is_zero() {
                    continue;
                }
                let r2_up = &r2.upper()[j];
                let r1_low = &r1.lower()[i];
                for r in 0..d2[2] {
                    for c in 0..d1[0] {
                        let row = k * per_rel + r * d1[0] + c;
                        for t in 0..d2[1] {
                            let v = &r2_up[(r, t)];
                            if !v.is_zero() {
                                let col = i * low + t * d1[0] + c;
                                m[(row, col)] = &m[(row, col)] + &(lam * v);
                            }
                        }
                        for t in 0..d1[1] {
                            let v = &r1_low[(t, c)];
                            if !v.is_zero() {
                                let col = 3 * low + j * up + r * d1[1] + t;
                                m[(row, col)] = &m[(row, col)] + &(lam * v);
                            }
                        }
                    }
                }
            }
        }
    }
    m
}

/// Dimensions of `Ext^i(R1, R2)` from the three-term complex over vertices,
/// arrows and relations. The alternating sum must match the Euler form.
pub fn ext_dims(rel: &RelationTensor, r1: &DeltaRep, r2: &DeltaRep) -> Result<ExtDims> {
    check_same_quiver(r1, r2)?;
    if rel.field() != r1.field() {
        return Err(Error::ShapeMismatch("relations and representations over different fields".into()));
    }
    let d0 = arrow_commutator(r1, r2);
    let d1 = relation_derivative(rel, r1, r2);
    if d0.cols() > 0 && d1.rows() > 0 && !d1.mul(&d0).is_zero() {
        return Err(Error::Internal("ext complex: d1 d0 != 0".into()));
    }
    let (c0, c1, c2) = (d0.cols(), d0.rows(), d1.rows());
    let (rk0, rk1) = (d0.rank(), d1.rank());
    let ext = ExtDims {
        h0: c0 - rk0,
        h1: c1 - rk1 - rk0,
        h2: c2 - rk1,
        euler: euler_form_quiver(r1.dims(), r2.dims()),
    };
    let complex = ext.h0 as i64 - ext.h1 as i64 + ext.h2 as i64;
    if complex != ext.euler {
        return Err(Error::EulerMismatch {
            complex,
            form: ext.euler,
        });
    }
    Ok(ext)
}
