//! Homogeneous polynomials in `x, y, z`.

use std::collections::BTreeMap;

use crate::linalg::{FieldSpec, Scalar};

/// A ternary form of fixed degree. Coefficients follow [`monomials`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryForm {
    field: FieldSpec,
    degree: usize,
    coeffs: Vec<Scalar>,
}

/// Exponent triples `(i, j, k)` with `i + j + k = degree`, `x` power
/// descending, then `y` power descending.
pub fn monomials(degree: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
    for i in (0..=degree).rev() {
        for j in (0..=degree - i).rev() {
            out.push([i, j, degree - i - j]);
        }
    }
    out
}

/// `"x3"`, `"x2y"`, `"xyz"`, ... and `"1"` for the constant monomial.
pub fn monomial_key(e: [usize; 3]) -> String {
    let mut s = String::new();
    for (name, &p) in ["x", "y", "z"].iter().zip(&e) {
        match p {
            0 => {}
            1 => s.push_str(name),
            _ => s.push_str(&format!("{name}{p}")),
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

fn monomial_index(e: [usize; 3]) -> usize {
    // rows of fixed i come in blocks of sizes 1, 2, ..., counted from i = degree
    let d = e[0] + e[1] + e[2];
    let before: usize = (e[0] + 1..=d).map(|i| d - i + 1).sum();
    before + (d - e[0] - e[1])
}

impl TernaryForm {
    pub fn zero(field: FieldSpec, degree: usize) -> Self {
        TernaryForm {
            field,
            degree,
            coeffs: vec![field.zero(); (degree + 1) * (degree + 2) / 2],
        }
    }

    pub fn from_coeffs(field: FieldSpec, degree: usize, coeffs: Vec<Scalar>) -> Self {
        assert_eq!(coeffs.len(), (degree + 1) * (degree + 2) / 2);
        TernaryForm {
            field,
            degree,
            coeffs,
        }
    }

    /// `c0 x + c1 y + c2 z`
    pub fn linear(c: &[Scalar; 3]) -> Self {
        let field = c[0].field();
        let mut f = TernaryForm::zero(field, 1);
        for (g, v) in c.iter().enumerate() {
            let mut e = [0; 3];
            e[g] = 1;
            f.coeffs[monomial_index(e)] = v.clone();
        }
        f
    }

    pub fn constant(v: Scalar) -> Self {
        TernaryForm {
            field: v.field(),
            degree: 0,
            coeffs: vec![v],
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [usize; 3]) -> &Scalar {
        &self.coeffs[monomial_index(e)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn evaluate(&self, p: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (e, c) in monomials(self.degree).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let term = &(&(c * &p[0].pow(e[0] as u32)) * &p[1].pow(e[1] as u32))
                * &p[2].pow(e[2] as u32);
            acc = &acc + &term;
        }
        acc
    }

    pub fn add(&self, other: &TernaryForm) -> TernaryForm {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        TernaryForm {
            field: self.field,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> TernaryForm {
        TernaryForm {
            field: self.field,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &TernaryForm) -> TernaryForm {
        let mut out = TernaryForm::zero(self.field, self.degree + other.degree);
        for (e1, c1) in monomials(self.degree).into_iter().zip(&self.coeffs) {
            if c1.is_zero() {
                continue;
            }
            for (e2, c2) in monomials(other.degree).into_iter().zip(&other.coeffs) {
                if c2.is_zero() {
                    continue;
                }
                let idx = monomial_index([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]]);
                out.coeffs[idx] = &out.coeffs[idx] + &(c1 * c2);
            }
        }
        out
    }

    /// Coefficients keyed by monomial name; zero coefficients included.
    pub fn coeff_map(&self) -> BTreeMap<String, String> {
        monomials(self.degree)
            .into_iter()
            .zip(&self.coeffs)
            .map(|(e, c)| (monomial_key(e), c.to_decimal()))
            .collect()
    }

    /// Proportional to `other` by a nonzero scalar.
    pub fn is_proportional(&self, other: &TernaryForm) -> bool {
        if self.degree != other.degree || self.is_zero() || other.is_zero() {
            return false;
        }
        let i = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if other.coeffs[i].is_zero() {
            return false;
        }
        let ratio = &other.coeffs[i] * &self.coeffs[i].inv();
        self.scale(&ratio) == *other
    }
}

/// Determinant of a square matrix of forms by cofactor expansion.
pub fn form_determinant(entries: &[Vec<TernaryForm>]) -> TernaryForm {
    let n = entries.len();
    assert!(entries.iter().all(|r| r.len() == n));
    if n == 1 {
        return entries[0][0].clone();
    }
    let field = entries[0][0].field();
    let mut acc: Option<TernaryForm> = None;
    for j in 0..n {
        let minor: Vec<Vec<TernaryForm>> = entries[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, f)| f.clone()).collect())
            .collect();
        let mut term = entries[0][j].mul(&form_determinant(&minor));
        if j % 2 == 1 {
            term = term.scale(&field.from_i64(-1));
        }
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc.unwrap()
}
