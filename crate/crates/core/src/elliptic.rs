//! The point scheme `(E, σ)`: multilinearized relations, the cubic curve,
//! σ and σ⁻¹ by kernel extraction, point enumeration, and point modules.

use serde::Serialize;

use crate::algebra::RelationTensor;
use crate::error::{Error, Result};
use crate::form::{form_determinant, monomials, TernaryForm};
use crate::linalg::{normalize_projective, FieldSpec, Matrix, Scalar};
use crate::quiver::DeltaRep;

/// Largest prime for which [`EllipticData::enumerate_points`] runs.
pub const MAX_ENUMERATION_PRIME: u64 = 2003;

/// A point of `P²` normalized so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurvePoint {
    coords: [Scalar; 3],
}

impl CurvePoint {
    pub fn new(v: [Scalar; 3]) -> Result<Self> {
        let n = normalize_projective(&v).ok_or(Error::ZeroElement)?;
        Ok(CurvePoint {
            coords: [n[0].clone(), n[1].clone(), n[2].clone()],
        })
    }

    pub fn from_i64(field: FieldSpec, v: [i64; 3]) -> Result<Self> {
        Self::new(v.map(|x| field.from_i64(x)))
    }

    pub fn coords(&self) -> &[Scalar; 3] {
        &self.coords
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }

    pub fn to_strings(&self) -> [String; 3] {
        [0, 1, 2].map(|i| self.coords[i].to_decimal())
    }
}

impl std::fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}:{}:{})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// `N(p)` with `f̃_k(p, q) = (N(p) q)_k`.
pub fn multilinearized_matrix(rel: &RelationTensor, p: &[Scalar; 3]) -> Result<Matrix> {
    if p.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroElement);
    }
    let f = rel.field();
    let mut n = Matrix::zeros(f, 3, 3);
    for k in 0..3 {
        for j in 0..3 {
            let mut s = f.zero();
            for (i, pi) in p.iter().enumerate() {
                s = &s + &(rel.coeff(k, i, j) * pi);
            }
            n[(k, j)] = s;
        }
    }
    Ok(n)
}

/// `N'(p)` with `f̃_k(q, p) = (N'(p) q)_k`.
pub fn companion_matrix(rel: &RelationTensor, p: &[Scalar; 3]) -> Result<Matrix> {
    if p.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroElement);
    }
    let f = rel.field();
    let mut n = Matrix::zeros(f, 3, 3);
    for k in 0..3 {
        for i in 0..3 {
            let mut s = f.zero();
            for (j, pj) in p.iter().enumerate() {
                s = &s + &(rel.coeff(k, i, j) * pj);
            }
            n[(k, i)] = s;
        }
    }
    Ok(n)
}

/// `det N(p)` as a cubic form in `p`, by symbolic expansion.
pub fn curve_equation(rel: &RelationTensor) -> Result<TernaryForm> {
    let entries: Vec<Vec<TernaryForm>> = (0..3)
        .map(|k| {
            (0..3)
                .map(|j| TernaryForm::linear(&[0, 1, 2].map(|i| rel.coeff(k, i, j).clone())))
                .collect()
        })
        .collect();
    let cubic = form_determinant(&entries);
    if cubic.is_zero() {
        return Err(Error::LinearCase);
    }
    Ok(cubic)
}

/// Relation tensor plus its cubic, the context for every σ computation.
#[derive(Clone, Debug)]
pub struct EllipticData {
    relations: RelationTensor,
    cubic: TernaryForm,
}

/// The σ-orbit window `p^{σ^u}` for `u = start, ..., start + len - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointModuleData {
    pub base: CurvePoint,
    pub start: i64,
    pub points: Vec<CurvePoint>,
}

impl PointModuleData {
    pub fn end(&self) -> i64 {
        self.start + self.points.len() as i64 - 1
    }

    /// Drops the first degree and renumbers from zero: the data of `P(1)_{≥0}`.
    pub fn shifted(&self) -> PointModuleData {
        PointModuleData {
            base: self.points[1].clone(),
            start: 0,
            points: self.points[1..].to_vec(),
        }
    }
}

impl EllipticData {
    pub fn new(relations: &RelationTensor) -> Result<Self> {
        Ok(EllipticData {
            relations: relations.clone(),
            cubic: curve_equation(relations)?,
        })
    }

    pub fn relations(&self) -> &RelationTensor {
        &self.relations
    }

    pub fn cubic(&self) -> &TernaryForm {
        &self.cubic
    }

    pub fn field(&self) -> FieldSpec {
        self.relations.field()
    }

    pub fn contains(&self, p: &[Scalar; 3]) -> bool {
        self.cubic.evaluate(p).is_zero()
    }

    fn on_curve(&self, p: &CurvePoint) -> Result<()> {
        if !self.contains(p.coords()) {
            return Err(Error::NotOnCurve(p.to_string()));
        }
        Ok(())
    }

    fn kernel_point(m: &Matrix, p: &CurvePoint) -> Result<CurvePoint> {
        let k = m.kernel_basis();
        if k.cols() != 1 {
            return Err(Error::DegenerateKernel {
                point: p.to_string(),
                dim: k.cols(),
            });
        }
        let c = k.column(0);
        CurvePoint::new([c[0].clone(), c[1].clone(), c[2].clone()])
    }

    /// The unique `q` with `(p, q) ∈ Γ`.
    pub fn sigma(&self, p: &CurvePoint) -> Result<CurvePoint> {
        self.on_curve(p)?;
        Self::kernel_point(&multilinearized_matrix(&self.relations, p.coords())?, p)
    }

    /// The unique `q` with `(q, p) ∈ Γ`.
    pub fn sigma_inverse(&self, p: &CurvePoint) -> Result<CurvePoint> {
        self.on_curve(p)?;
        Self::kernel_point(&companion_matrix(&self.relations, p.coords())?, p)
    }

    /// `p^{σ^k}` for any integer `k`.
    pub fn sigma_power(&self, p: &CurvePoint, k: i64) -> Result<CurvePoint> {
        let mut q = p.clone();
        for _ in 0..k.unsigned_abs() {
            q = if k > 0 { self.sigma(&q)? } else { self.sigma_inverse(&q)? };
        }
        Ok(q)
    }

    /// Orbit length of `p` under σ, if it returns within `limit` steps.
    /// Diagnostic only: over a finite field every orbit is finite.
    pub fn sigma_orbit_length(&self, p: &CurvePoint, limit: usize) -> Result<Option<usize>> {
        let mut q = self.sigma(p)?;
        for n in 1..=limit {
            if &q == p {
                return Ok(Some(n));
            }
            q = self.sigma(&q)?;
        }
        Ok(None)
    }

    /// All `F_p`-rational points of the cubic, in lexicographic order of
    /// normalized coordinates.
    pub fn enumerate_points(&self) -> Result<Vec<CurvePoint>> {
        let FieldSpec::Prime { p } = self.field() else {
            return Err(Error::FieldNotFinite);
        };
        if p > MAX_ENUMERATION_PRIME {
            return Err(Error::BudgetExceeded(format!(
                "point enumeration over F_{p} (limit F_{MAX_ENUMERATION_PRIME})"
            )));
        }
        let exps = monomials(3);
        let coeffs: Vec<u64> = self.cubic.coeffs().iter().map(|c| c.residue().unwrap()).collect();
        let eval = |v: [u64; 3]| -> u64 {
            let mut acc = 0u64;
            for (e, &c) in exps.iter().zip(&coeffs) {
                if c == 0 {
                    continue;
                }
                let mut t = c;
                for (g, &k) in e.iter().enumerate() {
                    for _ in 0..k {
                        t = t * v[g] % p;
                    }
                }
                acc = (acc + t) % p;
            }
            acc
        };
        let mut reps: Vec<[u64; 3]> = Vec::new();
        for y in 0..p {
            for z in 0..p {
                reps.push([1, y, z]);
            }
        }
        for z in 0..p {
            reps.push([0, 1, z]);
        }
        reps.push([0, 0, 1]);
        let field = self.field();
        Ok(reps
            .into_iter()
            .filter(|&v| eval(v) == 0)
            .map(|v| CurvePoint {
                coords: v.map(|x| Scalar::Fp { v: x, p }),
            })
            .inspect(|q| debug_assert_eq!(q.field(), field))
            .collect())
    }

    /// Point module data over degrees `start..=end`.
    pub fn point_module(&self, p: &CurvePoint, start: i64, end: i64) -> Result<PointModuleData> {
        self.on_curve(p)?;
        if end < start {
            return Err(Error::InvalidInput(format!("empty window [{start}, {end}]")));
        }
        let mut q = self.sigma_power(p, start)?;
        let mut points = vec![q.clone()];
        for _ in start..end {
            q = self.sigma(&q)?;
            points.push(q.clone());
        }
        Ok(PointModuleData {
            base: p.clone(),
            start,
            points,
        })
    }

    /// `f̃_k(λ⁽ᵘ⁾, λ⁽ᵘ⁺¹⁾)` along a point-module window; all zero when valid.
    pub fn point_module_residuals(&self, data: &PointModuleData) -> Vec<Scalar> {
        data.points
            .windows(2)
            .flat_map(|w| {
                (0..3).map(|k| self.relations.bilinear(k, w[0].coords(), w[1].coords()))
            })
            .collect()
    }

    /// The representation `k → k → k` with arrows `p^{σ^{-2}}` then `p^{σ^{-1}}`.
    pub fn point_rep(&self, p: &CurvePoint) -> Result<DeltaRep> {
        self.on_curve(p)?;
        let first = self.sigma_power(p, -2)?;
        let second = self.sigma_inverse(p)?;
        Ok(DeltaRep::from_point_pair(first.coords(), second.coords()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SklyParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn data(p: u64) -> EllipticData {
        let f = FieldSpec::prime(p).unwrap();
        let params = SklyParams::from_i64(f, 1, 2, 3).unwrap();
        EllipticData::new(&RelationTensor::sklyanin(&params)).unwrap()
    }

    #[test]
    fn multilinearized_rows_follow_relations() {
        let f = FieldSpec::prime(101).unwrap();
        let params = SklyParams::from_i64(f, 1, 2, 3).unwrap();
        let rel = RelationTensor::sklyanin(&params);
        let p = [f.from_i64(4), f.from_i64(9), f.from_i64(16)];
        let n = multilinearized_matrix(&rel, &p).unwrap();
        // row 1 = (c p_x, b p_z, a p_y)
        assert_eq!(n.row(0), &[&f.from_i64(3) * &p[0], &f.from_i64(2) * &p[2], p[1].clone()]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let p = [0, 1, 2].map(|_| f.random(&mut rng));
            let q = [0, 1, 2].map(|_| f.random(&mut rng));
            if p.iter().all(Scalar::is_zero) {
                continue;
            }
            let n = multilinearized_matrix(&rel, &p).unwrap();
            let nq = n.mul_vec(&q);
            let c = companion_matrix(&rel, &q).unwrap().mul_vec(&p);
            for k in 0..3 {
                assert_eq!(nq[k], rel.bilinear(k, &p, &q));
                assert_eq!(c[k], rel.bilinear(k, &p, &q));
            }
        }
        assert!(matches!(
            multilinearized_matrix(&rel, &[f.zero(), f.zero(), f.zero()]),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn cubic_scales_with_parameters() {
        let f = FieldSpec::prime(101).unwrap();
        let c1 = curve_equation(&RelationTensor::sklyanin(&SklyParams::from_i64(f, 1, 2, 3).unwrap())).unwrap();
        let c2 = curve_equation(&RelationTensor::sklyanin(&SklyParams::from_i64(f, 5, 10, 15).unwrap())).unwrap();
        assert_eq!(c1.scale(&f.from_i64(125)), c2);
        assert_eq!(c1.degree(), 3);
    }

    #[test]
    fn sigma_round_trip_and_permutation() {
        let e = data(101);
        let pts = e.enumerate_points().unwrap();
        let (p, lo, hi) = (101f64, 0, 0);
        let _ = (lo, hi);
        let bound = 2.0 * p.sqrt();
        assert!((pts.len() as f64 - (p + 1.0)).abs() <= bound, "{} points", pts.len());
        let mut images = Vec::new();
        for q in &pts {
            assert!(e.contains(q.coords()));
            let s = e.sigma(q).unwrap();
            assert!(e.contains(s.coords()));
            assert_eq!(&e.sigma_inverse(&s).unwrap(), q);
            assert_eq!(&e.sigma(&e.sigma_inverse(q).unwrap()).unwrap(), q);
            assert_eq!(multilinearized_matrix(e.relations(), q.coords()).unwrap().rank(), 2);
            images.push(s);
        }
        let mut sorted_pts = pts.iter().map(|q| q.to_strings()).collect::<Vec<_>>();
        let mut sorted_img = images.iter().map(|q| q.to_strings()).collect::<Vec<_>>();
        sorted_pts.sort();
        sorted_img.sort();
        assert_eq!(sorted_pts, sorted_img);
        assert!(pts.iter().any(|q| &e.sigma(q).unwrap() != q));
    }

    #[test]
    fn off_curve_points_are_rejected() {
        let e = data(101);
        let f = e.field();
        let off = (0..101)
            .map(|y| CurvePoint::from_i64(f, [1, y, 1]).unwrap())
            .find(|q| !e.contains(q.coords()))
            .unwrap();
        assert!(matches!(e.sigma(&off), Err(Error::NotOnCurve(_))));
        assert!(matches!(e.point_rep(&off), Err(Error::NotOnCurve(_))));
    }

    #[test]
    fn enumeration_needs_finite_field() {
        let params = SklyParams::from_i64(FieldSpec::Rational, 1, 2, 3).unwrap();
        let e = EllipticData::new(&RelationTensor::sklyanin(&params)).unwrap();
        assert!(matches!(e.enumerate_points(), Err(Error::FieldNotFinite)));
    }

    #[test]
    fn point_modules_shift_along_sigma() {
        let e = data(101);
        for q in e.enumerate_points().unwrap().iter().take(10) {
            let pm = e.point_module(q, 0, 5).unwrap();
            assert!(e.point_module_residuals(&pm).iter().all(Scalar::is_zero));
            let next = e.point_module(&e.sigma(q).unwrap(), 0, 4).unwrap();
            assert_eq!(pm.shifted(), next);
            let single = e.point_module(q, 0, 0).unwrap();
            assert_eq!(single.points, vec![q.clone()]);
            let back = e.point_module(q, -3, 2).unwrap();
            assert!(e.point_module_residuals(&back).iter().all(Scalar::is_zero));
            assert_eq!(back.points[3], *q);
        }
    }

    #[test]
    fn orbit_length_diagnostic() {
        let e = data(101);
        let q = e.enumerate_points().unwrap()[0].clone();
        let len = e.sigma_orbit_length(&q, 1000).unwrap().expect("finite over F_p");
        assert_eq!(e.sigma_power(&q, len as i64).unwrap(), q);
    }
}
