//! Degreewise construction of the three-generator Sklyanin algebra, its
//! central cubic, and cyclic quotient modules.
//!
//! `A_d` is built as `(A_{d-1} ⊗ V) / image(A_{d-2} ⊗ R)`, where `V` is
//! spanned by the generators and `R` by the three quadratic relations. A
//! word `w1 w2 ... wk` means "first `w1`, then `w2`": its right
//! multiplication matrix is `RMul(wk) ∘ ... ∘ RMul(w1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{normalize_projective, FieldSpec, Matrix, Quotient, Scalar};

pub const GENERATOR_NAMES: [&str; 3] = ["x", "y", "z"];

/// Default number of cached degrees.
pub const DEFAULT_MAX_DEG: usize = 12;

/// Parameter triple `(a, b, c)` outside the forbidden locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SklyParams {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl SklyParams {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Result<Self> {
        let p = SklyParams { a, b, c };
        if let Some(reason) = p.forbidden_condition() {
            return Err(Error::ParamsInForbiddenLocus(reason.to_string()));
        }
        Ok(p)
    }

    pub fn from_i64(field: FieldSpec, a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(field.from_i64(a), field.from_i64(b), field.from_i64(c))
    }

    pub fn field(&self) -> FieldSpec {
        self.a.field()
    }

    /// The first forbidden-locus condition that holds, if any.
    pub fn forbidden_condition(&self) -> Option<&'static str> {
        let abc = &(&self.a * &self.b) * &self.c;
        if abc.is_zero() {
            return Some("abc = 0");
        }
        let (a3, b3, c3) = (self.a.pow(3), self.b.pow(3), self.c.pow(3));
        if a3 == b3 && b3 == c3 {
            return Some("a^3 = b^3 = c^3");
        }
        let three = self.field().from_i64(3);
        let lhs = (&three * &abc).pow(3);
        let rhs = (&(&a3 + &b3) + &c3).pow(3);
        if lhs == rhs {
            return Some("(3abc)^3 = (a^3 + b^3 + c^3)^3");
        }
        None
    }

    pub fn as_array(&self) -> [Scalar; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }
}

/// Coefficients `λ[k][i][j]` with `f_k = Σ_ij λ[k][i][j] x_i x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTensor {
    field: FieldSpec,
    coeffs: Vec<Scalar>, // k*9 + i*3 + j
}

impl RelationTensor {
    /// `f1 = a yz + b zy + c x²`, `f2 = a zx + b xz + c y²`, `f3 = a xy + b yx + c z²`.
    pub fn sklyanin(params: &SklyParams) -> Self {
        let field = params.field();
        let mut t = RelationTensor {
            field,
            coeffs: vec![field.zero(); 27],
        };
        for k in 0..3 {
            // f_k has the square of generator k and the cyclic pair after it
            let (i1, i2) = ((k + 1) % 3, (k + 2) % 3);
            t.set(k, i1, i2, params.a.clone());
            t.set(k, i2, i1, params.b.clone());
            t.set(k, k, k, params.c.clone());
        }
        t
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeff(&self, k: usize, i: usize, j: usize) -> &Scalar {
        &self.coeffs[k * 9 + i * 3 + j]
    }

    fn set(&mut self, k: usize, i: usize, j: usize, v: Scalar) {
        self.coeffs[k * 9 + i * 3 + j] = v;
    }

    /// Presentation matrix entry `m_kj = Σ_i λ[k][i][j] x_i` as the
    /// coefficient vector of a linear form in `(x, y, z)`, so that
    /// `f_k = Σ_j m_kj x_j`.
    pub fn presentation_entry(&self, k: usize, j: usize) -> [Scalar; 3] {
        [0, 1, 2].map(|i| self.coeff(k, i, j).clone())
    }

    /// Evaluates the bilinear form `f̃_k(p, q) = Σ λ[k][i][j] p_i q_j`.
    pub fn bilinear(&self, k: usize, p: &[Scalar], q: &[Scalar]) -> Scalar {
        let mut s = self.field.zero();
        for i in 0..3 {
            for j in 0..3 {
                let c = self.coeff(k, i, j);
                if !c.is_zero() {
                    s = &s + &(&(c * &p[i]) * &q[j]);
                }
            }
        }
        s
    }
}

/// Homogeneous element of the algebra or of a cyclic module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub degree: usize,
    pub coords: Vec<Scalar>,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// Degree-one element `αx + βy + γz`.
    pub fn linear(coeffs: &[Scalar; 3]) -> Element {
        Element {
            degree: 1,
            coords: coeffs.to_vec(),
        }
    }
}

/// Degreewise bases and generator multiplication matrices of `A`.
#[derive(Clone, Debug)]
pub struct AlgebraTable {
    params: SklyParams,
    relations: RelationTensor,
    max_deg: usize,
    dims: Vec<usize>,
    words: Vec<Vec<Vec<u8>>>,
    parents: Vec<Vec<(usize, u8)>>,
    rmul: [Vec<Matrix>; 3],
    lmul: [Vec<Matrix>; 3],
}

/// Builds `A = Skly₃(a,b,c)` through degree `max_deg`.
pub fn build_algebra(params: &SklyParams, max_deg: usize) -> Result<AlgebraTable> {
    if let Some(reason) = params.forbidden_condition() {
        return Err(Error::ParamsInForbiddenLocus(reason.to_string()));
    }
    if max_deg < 3 {
        return Err(Error::InvalidInput(format!(
            "max_deg must be at least 3, got {max_deg}"
        )));
    }
    let relations = RelationTensor::sklyanin(params);
    let field = params.field();
    let mut t = AlgebraTable {
        params: params.clone(),
        relations,
        max_deg,
        dims: vec![1],
        words: vec![vec![vec![]]],
        parents: vec![vec![]],
        rmul: [vec![], vec![], vec![]],
        lmul: [vec![], vec![], vec![]],
    };
    for d in 1..=max_deg {
        t.extend_degree(field, d)?;
    }
    Ok(t)
}

impl AlgebraTable {
    fn extend_degree(&mut self, field: FieldSpec, d: usize) -> Result<()> {
        let prev = self.dims[d - 1];
        let n = 3 * prev;
        // relation rows live in A_{d-1} ⊗ V, coordinate 3b + j; columns are
        // stored reversed so elimination pivots on the largest word
        let rev = |c: usize| n - 1 - c;
        let mut rel_rows: Vec<Vec<Scalar>> = Vec::new();
        if d >= 2 {
            let pp = self.dims[d - 2];
            for e in 0..pp {
                for k in 0..3 {
                    let mut row = vec![field.zero(); n];
                    for i in 0..3 {
                        let col = self.rmul[i][d - 2].column(e);
                        for j in 0..3 {
                            let lam = self.relations.coeff(k, i, j);
                            if lam.is_zero() {
                                continue;
                            }
                            for (b, v) in col.iter().enumerate() {
                                if !v.is_zero() {
                                    let c = rev(3 * b + j);
                                    row[c] = &row[c] + &(lam * v);
                                }
                            }
                        }
                    }
                    rel_rows.push(row);
                }
            }
        }
        let rel = if rel_rows.is_empty() {
            Matrix::zeros(field, 0, n)
        } else {
            Matrix::from_rows(field, rel_rows)
        };
        let r = rel.rref();
        let pivots: Vec<usize> = r.pivots.iter().map(|&c| rev(c)).collect();
        let basis: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let dim = basis.len();
        let expected = (d + 1) * (d + 2) / 2;
        if dim != expected {
            return Err(Error::DimensionMismatch {
                degree: d,
                expected,
                computed: dim,
            });
        }
        let mut proj = Matrix::zeros(field, dim, n);
        for (k, &c) in basis.iter().enumerate() {
            proj[(k, c)] = field.one();
        }
        for (row, &pc) in pivots.iter().enumerate() {
            for (k, &c) in basis.iter().enumerate() {
                proj[(k, pc)] = -&r.matrix[(row, rev(c))];
            }
        }
        let parents: Vec<(usize, u8)> = basis.iter().map(|&c| (c / 3, (c % 3) as u8)).collect();
        let words: Vec<Vec<u8>> = parents
            .iter()
            .map(|&(b, j)| {
                let mut w = self.words[d - 1][b].clone();
                w.push(j);
                w
            })
            .collect();
        for j in 0..3 {
            let cols: Vec<usize> = (0..prev).map(|b| 3 * b + j).collect();
            self.rmul[j].push(proj.select_columns(&cols));
        }
        for i in 0..3 {
            let lm = if d == 1 {
                self.rmul[i][0].clone()
            } else {
                // x_i · (b x_j) = (x_i · b) x_j
                let mut m = Matrix::zeros(field, dim, prev);
                for (beta, &(b, j)) in self.parents[d - 1].iter().enumerate() {
                    let inner = self.lmul[i][d - 2].column(b);
                    let col = self.rmul[j as usize][d - 1].mul_vec(&inner);
                    for (row, v) in col.into_iter().enumerate() {
                        m[(row, beta)] = v;
                    }
                }
                m
            };
            self.lmul[i].push(lm);
        }
        self.dims.push(dim);
        self.words.push(words);
        self.parents.push(parents);
        Ok(())
    }

    pub fn params(&self) -> &SklyParams {
        &self.params
    }

    pub fn relations(&self) -> &RelationTensor {
        &self.relations
    }

    pub fn field(&self) -> FieldSpec {
        self.relations.field()
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims[d]
    }

    /// Basis words of `A_d` as generator indices.
    pub fn basis_words(&self, d: usize) -> &[Vec<u8>] {
        &self.words[d]
    }

    pub fn word_string(word: &[u8]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        word.iter().map(|&g| GENERATOR_NAMES[g as usize]).collect()
    }

    /// Right multiplication by generator `g`, `A_d → A_{d+1}`.
    pub fn rmul(&self, g: usize, d: usize) -> &Matrix {
        &self.rmul[g][d]
    }

    /// Left multiplication by generator `g`, `A_d → A_{d+1}`.
    pub fn lmul(&self, g: usize, d: usize) -> &Matrix {
        &self.lmul[g][d]
    }

    pub fn one(&self) -> Element {
        Element {
            degree: 0,
            coords: vec![self.field().one()],
        }
    }

    pub fn generator(&self, g: usize) -> Element {
        let mut coords = vec![self.field().zero(); 3];
        coords[g] = self.field().one();
        Element { degree: 1, coords }
    }

    pub fn zero(&self, d: usize) -> Element {
        Element {
            degree: d,
            coords: vec![self.field().zero(); self.dims[d]],
        }
    }

    fn check_range(&self, d: usize, k: usize) -> Result<()> {
        if d + k > self.max_deg {
            return Err(Error::DegreeBudget {
                needed: d + k,
                have: self.max_deg,
            });
        }
        Ok(())
    }

    /// Matrix of `m ↦ m · w` from `A_d` to `A_{d+deg w}`.
    pub fn right_mul_matrix(&self, w: &Element, d: usize) -> Result<Matrix> {
        let k = w.degree;
        self.check_range(d, k)?;
        let f = self.field();
        let mut out = Matrix::zeros(f, self.dims[d + k], self.dims[d]);
        for (coef, word) in w.coords.iter().zip(&self.words[k]) {
            if coef.is_zero() {
                continue;
            }
            let mut m = Matrix::identity(f, self.dims[d]);
            for (step, &g) in word.iter().enumerate() {
                m = self.rmul[g as usize][d + step].mul(&m);
            }
            out.add_scaled(coef, &m);
        }
        Ok(out)
    }

    /// Matrix of `m ↦ w · m` from `A_d` to `A_{d+deg w}`.
    pub fn left_mul_matrix(&self, w: &Element, d: usize) -> Result<Matrix> {
        let k = w.degree;
        self.check_range(d, k)?;
        let f = self.field();
        let mut out = Matrix::zeros(f, self.dims[d + k], self.dims[d]);
        for (coef, word) in w.coords.iter().zip(&self.words[k]) {
            if coef.is_zero() {
                continue;
            }
            let mut m = Matrix::identity(f, self.dims[d]);
            for (step, &g) in word.iter().rev().enumerate() {
                m = self.lmul[g as usize][d + step].mul(&m);
            }
            out.add_scaled(coef, &m);
        }
        Ok(out)
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let m = self.left_mul_matrix(a, b.degree)?;
        Ok(Element {
            degree: a.degree + b.degree,
            coords: m.mul_vec(&b.coords),
        })
    }

    /// Residual maps `Σ λ[k][i][j] RMul(x_j) RMul(x_i) : A_d → A_{d+2}` for
    /// every relation and every cached degree; all must vanish.
    pub fn relation_residuals(&self) -> Vec<(usize, usize, Matrix)> {
        let f = self.field();
        let mut out = Vec::new();
        for d in 0..self.max_deg.saturating_sub(1) {
            for k in 0..3 {
                let mut acc = Matrix::zeros(f, self.dims[d + 2], self.dims[d]);
                for i in 0..3 {
                    for j in 0..3 {
                        let lam = self.relations.coeff(k, i, j);
                        if !lam.is_zero() {
                            acc.add_scaled(lam, &self.rmul[j][d + 1].mul(&self.rmul[i][d]));
                        }
                    }
                }
                out.push((d, k, acc));
            }
        }
        out
    }
}

/// The normalized degree-3 central element together with the dimension
/// of the solution space it was drawn from.
#[derive(Clone, Debug)]
pub struct CentralCubic {
    pub g: Element,
    pub solution_dim: usize,
}

/// Solves `g·x_i = x_i·g` in `A_4` for `g ∈ A_3`.
pub fn find_central_cubic(t: &AlgebraTable) -> Result<CentralCubic> {
    if t.max_deg() < 4 {
        return Err(Error::DegreeBudget {
            needed: 4,
            have: t.max_deg(),
        });
    }
    let f = t.field();
    let blocks: Vec<Matrix> = (0..3).map(|i| t.rmul(i, 3).sub(t.lmul(i, 3))).collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let system = Matrix::vstack(f, t.dim(3), &refs);
    let kernel = system.kernel_basis();
    match kernel.cols() {
        0 => Err(Error::NoCentralCubic),
        1 => {
            let coords = normalize_projective(&kernel.column(0)).ok_or(Error::NoCentralCubic)?;
            Ok(CentralCubic {
                g: Element { degree: 3, coords },
                solution_dim: 1,
            })
        }
        k => Err(Error::CenterTooBig(k)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `A / wA`, a right module.
    Right,
    /// `A / Aw`, a left module.
    Left,
}

/// Cyclic quotient `A/wA` or `A/Aw` with its induced generator action
/// (right multiplication for `A/wA`, left multiplication for `A/Aw`).
#[derive(Clone, Debug)]
pub struct CyclicModuleTable {
    side: Side,
    generator: Element,
    max_deg: usize,
    dims: Vec<usize>,
    quotients: Vec<Quotient>,
    mul: [Vec<Matrix>; 3],
}

pub fn cyclic_quotient(t: &AlgebraTable, w: &Element, side: Side) -> Result<CyclicModuleTable> {
    if w.is_zero() {
        return Err(Error::ZeroElement);
    }
    let k = w.degree;
    if k > t.max_deg() || w.coords.len() != t.dim(k) {
        return Err(Error::ShapeMismatch(format!(
            "element of degree {k} with {} coordinates",
            w.coords.len()
        )));
    }
    let f = t.field();
    let quotients: Vec<Quotient> = (0..=t.max_deg())
        .map(|d| {
            if d < k {
                Ok(Quotient::trivial(f, t.dim(d)))
            } else {
                let span = match side {
                    Side::Right => t.left_mul_matrix(w, d - k)?,
                    Side::Left => t.right_mul_matrix(w, d - k)?,
                };
                Ok(Quotient::by_columns(&span))
            }
        })
        .collect::<Result<_>>()?;
    let mul = [0, 1, 2].map(|g| {
        (0..t.max_deg())
            .map(|d| {
                let amb = match side {
                    Side::Right => t.rmul(g, d),
                    Side::Left => t.lmul(g, d),
                };
                quotients[d + 1].proj().mul(amb).mul(quotients[d].lift())
            })
            .collect()
    });
    Ok(CyclicModuleTable {
        side,
        generator: w.clone(),
        max_deg: t.max_deg(),
        dims: quotients.iter().map(Quotient::dim).collect(),
        quotients,
        mul,
    })
}

impl CyclicModuleTable {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn generator(&self) -> &Element {
        &self.generator
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims[d]
    }

    /// Induced action of generator `g`, `M_d → M_{d+1}`.
    pub fn mul(&self, g: usize, d: usize) -> &Matrix {
        &self.mul[g][d]
    }

    /// Projection `A_d → M_d`.
    pub fn projection(&self, d: usize) -> &Matrix {
        self.quotients[d].proj()
    }

    /// Section `M_d → A_d` of the projection.
    pub fn lift(&self, d: usize) -> &Matrix {
        self.quotients[d].lift()
    }

    /// Matrix of `a ↦ m · a` from `A_k` to `M_{d+k}` for a right module
    /// element `m ∈ M_d`, built word by word along the basis of `A_k`.
    pub fn action_matrix(&self, t: &AlgebraTable, m: &Element, k: usize) -> Result<Matrix> {
        if self.side != Side::Right {
            return Err(Error::InvalidInput(
                "action_matrix needs a right module".into(),
            ));
        }
        if m.degree + k > self.max_deg {
            return Err(Error::DegreeBudget {
                needed: m.degree + k,
                have: self.max_deg,
            });
        }
        let f = t.field();
        // columns of m·(basis of A_j), built up degree by degree
        let mut cols: Vec<Vec<Scalar>> = vec![m.coords.clone()];
        for j in 1..=k {
            let parents = &t.parents[j];
            cols = parents
                .iter()
                .map(|&(b, g)| self.mul[g as usize][m.degree + j - 1].mul_vec(&cols[b]))
                .collect();
        }
        Ok(Matrix::from_columns(f, self.dims[m.degree + k], &cols))
    }
}

/// Anything with a cached Hilbert function.
pub trait Graded {
    fn hilbert_dims(&self) -> &[usize];
}

impl Graded for AlgebraTable {
    fn hilbert_dims(&self) -> &[usize] {
        &self.dims
    }
}

impl Graded for CyclicModuleTable {
    fn hilbert_dims(&self) -> &[usize] {
        &self.dims
    }
}

/// `dim M_0, ..., dim M_through`.
pub fn hilbert_data<G: Graded>(m: &G, through: usize) -> Result<Vec<usize>> {
    let dims = m.hilbert_dims();
    if through >= dims.len() {
        return Err(Error::DegreeBudget {
            needed: through,
            have: dims.len() - 1,
        });
    }
    Ok(dims[..=through].to_vec())
}
