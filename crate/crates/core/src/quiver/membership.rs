//! Certificates for the locus of `(n, n)` representations that have no
//! maps to or from any curve point and whose induced vertex-0 space has
//! dimension `n - 1`.

use serde::{Deserialize, Serialize};

use super::{big_matrix_m, hom_space, res, Delta0Rep, DeltaRep};
use crate::algebra::{cyclic_quotient, AlgebraTable, Element, Side};
use crate::elliptic::{CurvePoint, EllipticData};
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix};
use crate::par_map;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MembershipMode {
    /// Every rational point of the curve was tested.
    Enumerated,
    /// Only a caller-supplied list of points was tested.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomFailure {
    pub point: [String; 3],
    /// `"to_point"` for maps `F → p`, `"from_point"` for `p → F`.
    pub direction: String,
    pub hom_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomVanishing {
    pub checked_points: usize,
    pub failures: Vec<HomFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub dims_ok: bool,
    pub hom_vanishing: HomVanishing,
    #[serde(rename = "rank_M")]
    pub rank_m: usize,
    #[serde(rename = "expected_rank_M")]
    pub expected_rank_m: usize,
    /// `"pass"` or `"fail"`.
    pub verdict: String,
    pub field: FieldSpec,
    pub mode: MembershipMode,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// Runs the three membership checks in order: dimension vector `(n, n)`,
/// Hom vanishing against every point representation, and
/// `rank M(X, Y, Z) = 2n + 1`.
///
/// Without `sample` the field must be finite and every point of the curve
/// is used; as `q` runs over the curve so does `q^{σ^{-2}}`, so the
/// restricted point representations are exactly the scalar ones on the
/// curve.
pub fn membership_check_dn(ell: &EllipticData, f: &Delta0Rep, sample: Option<&[CurvePoint]>) -> Result<Certificate> {
    if ell.field() != f.field() {
        return Err(Error::ShapeMismatch("curve and representation over different fields".into()));
    }
    let [n, m] = f.dims();
    let dims_ok = n == m && n >= 1;
    let (mode, reps): (MembershipMode, Vec<(CurvePoint, Delta0Rep)>) = match sample {
        None => {
            if !f.field().is_finite() {
                return Err(Error::FieldNotFinite);
            }
            let pts = ell.enumerate_points()?;
            let reps = pts
                .into_iter()
                .map(|q| {
                    let r = Delta0Rep::from_scalars(q.coords());
                    (q, r)
                })
                .collect();
            (MembershipMode::Enumerated, reps)
        }
        Some(pts) => {
            let reps = pts
                .iter()
                .map(|q| Ok((q.clone(), res(&ell.point_rep(q)?))))
                .collect::<Result<_>>()?;
            (MembershipMode::Sampled, reps)
        }
    };
    let per_point: Vec<Result<Vec<HomFailure>>> = par_map(&reps, |(q, r)| {
        let mut out = Vec::new();
        let to = hom_space(f, r)?.dim;
        if to != 0 {
            out.push(HomFailure {
                point: q.to_strings(),
                direction: "to_point".into(),
                hom_dim: to,
            });
        }
        let from = hom_space(r, f)?.dim;
        if from != 0 {
            out.push(HomFailure {
                point: q.to_strings(),
                direction: "from_point".into(),
                hom_dim: from,
            });
        }
        Ok(out)
    });
    let mut failures = Vec::new();
    for r in per_point {
        failures.extend(r?);
    }
    let rank_m = big_matrix_m(ell.relations(), f).rank();
    let expected_rank_m = 2 * n + 1;
    let pass = dims_ok && failures.is_empty() && rank_m == expected_rank_m;
    Ok(Certificate {
        n,
        dims_ok,
        hom_vanishing: HomVanishing {
            checked_points: reps.len(),
            failures,
        },
        rank_m,
        expected_rank_m,
        verdict: if pass { "pass" } else { "fail" }.into(),
        field: f.field(),
        mode,
    })
}

/// The `(2, 1, 0)` representation attached to the left line module
/// `A/Au`: vertex `-2` is the dual of its degree-one part, vertex `-1` the
/// dual of its degree-zero part, arrows the duals of left multiplication.
pub fn line_object_rep(t: &AlgebraTable, u: &Element) -> Result<DeltaRep> {
    if u.degree != 1 {
        return Err(Error::InvalidInput(format!("line object needs a degree-1 element, got degree {}", u.degree)));
    }
    let m = cyclic_quotient(t, u, Side::Left)?;
    let field = t.field();
    if m.dim(1) != 2 {
        return Err(Error::Internal(format!("(A/Au)_1 has dimension {}", m.dim(1))));
    }
    let lower = [0, 1, 2].map(|g| m.mul(g, 0).transpose());
    let upper = [0, 1, 2].map(|_| Matrix::zeros(field, 0, 1));
    DeltaRep::new(field, [2, 1, 0], lower, upper)
}

#[cfg(test)]
mod tests {
    use super::super::tests::setup;
    use super::super::validate_rep;
    use super::*;
    use crate::algebra::{build_algebra, SklyParams};

    #[test]
    fn scalar_reps_pass_iff_off_curve() {
        let (_, e) = setup(101);
        let f = e.field();
        let on = e.enumerate_points().unwrap();
        for q in on.iter().take(3) {
            let c = membership_check_dn(&e, &Delta0Rep::from_scalars(q.coords()), None).unwrap();
            assert!(!c.passed());
            assert!(!c.hom_vanishing.failures.is_empty());
        }
        let mut tested = 0;
        for y in 0..20 {
            let q = CurvePoint::from_i64(f, [1, y, 3]).unwrap();
            if e.contains(q.coords()) {
                continue;
            }
            let c = membership_check_dn(&e, &Delta0Rep::from_scalars(q.coords()), None).unwrap();
            assert!(c.passed(), "{c:?}");
            assert_eq!(c.rank_m, 3);
            tested += 1;
        }
        assert!(tested > 3);
        let z = Delta0Rep::from_scalars(&[f.zero(), f.zero(), f.zero()]);
        let c = membership_check_dn(&e, &z, None).unwrap();
        assert!(!c.passed());
        assert_eq!(c.hom_vanishing.checked_points, on.len());
    }

    #[test]
    fn sampled_mode_over_rationals() {
        let q = FieldSpec::Rational;
        let rel = crate::algebra::RelationTensor::sklyanin(&SklyParams::from_i64(q, 1, 2, 3).unwrap());
        let e = EllipticData::new(&rel).unwrap();
        let r = Delta0Rep::from_scalars(&[q.one(), q.from_i64(5), q.from_i64(-2)]);
        assert!(matches!(membership_check_dn(&e, &r, None), Err(Error::FieldNotFinite)));
        let c = membership_check_dn(&e, &r, Some(&[])).unwrap();
        assert_eq!(c.mode, MembershipMode::Sampled);
    }

    #[test]
    fn certificate_json_keys() {
        let (_, e) = setup(101);
        let f = e.field();
        let r = Delta0Rep::from_scalars(&[f.one(), f.zero(), f.zero()]);
        let c = membership_check_dn(&e, &r, None).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        for k in ["n", "dims_ok", "hom_vanishing", "rank_M", "verdict", "field", "mode"] {
            assert!(v.get(k).is_some(), "missing {k}");
        }
        assert_eq!(v["mode"], "enumerated");
        assert!(v["hom_vanishing"].get("checked_points").is_some());
    }

    #[test]
    fn line_objects() {
        let f = FieldSpec::prime(101).unwrap();
        let t = build_algebra(&SklyParams::from_i64(f, 1, 2, 3).unwrap(), 3).unwrap();
        let u = Element::linear(&[f.from_i64(2), f.from_i64(7), f.from_i64(1)]);
        let l = line_object_rep(&t, &u).unwrap();
        assert_eq!(l.dims(), [2, 1, 0]);
        assert!(validate_rep(t.relations(), &l).unwrap().is_empty());
        assert!(matches!(line_object_rep(&t, &t.zero(1)), Err(Error::ZeroElement)));
        // scalar rep (α, β, γ) maps to the line object of u iff αu_x + βu_y + γu_z = 0
        let on = Delta0Rep::from_scalars(&[f.from_i64(1), f.from_i64(0), f.from_i64(-2)]);
        let off = Delta0Rep::from_scalars(&[f.from_i64(1), f.from_i64(1), f.from_i64(1)]);
        assert_ne!(hom_space(&on, &res(&l)).unwrap().dim, 0);
        assert_eq!(hom_space(&off, &res(&l)).unwrap().dim, 0);
    }
}
