//! Explicit line-bundle representations: the kernel of a generic map from
//! the algebra onto a twisted line module, read off degreewise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{cyclic_quotient, AlgebraTable, CyclicModuleTable, Element, Side};
use crate::elliptic::{CurvePoint, EllipticData};
use crate::error::{Error, Result};
use crate::form::{form_determinant, monomials, TernaryForm};
use crate::ktheory::{chi_form, class_from_hilbert, normalize_and_invariant, shift_class, KClass};
use crate::linalg::{FieldSpec, Matrix, Quotient, Scalar};
use crate::par_map;
use crate::quiver::{
    big_matrix_m, ext_dims, hom_space, line_object_rep, membership_check_dn, res, validate_rep, Certificate, Delta0Rep, DeltaRep,
    ExtDims,
};

/// Draws of `s` before giving up on a surjective one.
pub const MAX_DRAWS: usize = 50;

/// Last degree `d` where `dim A_d < dim S_{n+d}`, so that `A_d → S_{n+d}`
/// cannot be onto.
fn last_short_degree(n: usize) -> usize {
    let mut e = 0;
    for d in 0..=n + 2 {
        if (d + 1) * (d + 2) / 2 < n + d + 1 {
            e = d;
        }
    }
    e
}

/// Degree bound the constructor needs for the Hilbert-series route.
pub fn required_max_deg(n: usize) -> usize {
    n + last_short_degree(n) + 5
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyRow {
    pub l: i64,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub chi: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealWitness {
    pub params: [String; 3],
    pub field: FieldSpec,
    pub n: usize,
    pub u: Vec<String>,
    pub s: Vec<String>,
    pub seed: u64,
    pub trial: u64,
    pub draws: usize,
    pub max_deg: usize,
    /// `dim ker(A_d → S_{n+d})` for `d = 0, 1, ...`
    pub kernel_dims: Vec<usize>,
    pub kernel_class: KClass,
    pub ideal_class: KClass,
    pub hilbert_invariant: i64,
    pub rep: DeltaRep,
    pub rank_m: usize,
    pub ext: ExtDims,
    pub euler: i64,
    pub certificate: Certificate,
    pub cohomology: Vec<CohomologyRow>,
    /// Coefficients of `det(xX + yY + zZ)` on the restricted representation.
    pub det_curve: std::collections::BTreeMap<String, String>,
}

/// What to fix and what to draw at random.
#[derive(Clone, Debug, Default)]
pub struct ConstructChoice {
    pub u: Option<Element>,
    pub s: Option<Element>,
    /// Curve points for a sampled certificate; required over `Q`.
    pub sample: Option<Vec<CurvePoint>>,
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_decimal).collect()
}

fn random_vec(field: FieldSpec, len: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..len).map(|_| field.random(rng)).collect()
}

/// Checks that `a ↦ s·a` has maximal rank from `A_d` for `d ≤ through`.
fn max_rank_window(t: &AlgebraTable, m: &CyclicModuleTable, s: &Element, through: usize) -> Result<Vec<Matrix>> {
    let mut maps = Vec::new();
    for d in 0..=through {
        let a = m.action_matrix(t, s, d)?;
        let full = a.rows().min(a.cols());
        if a.rank() != full {
            return Err(Error::NotSurjective(format!(
                "A_{d} -> S_{} has rank {} < {full}",
                s.degree + d,
                a.rank()
            )));
        }
        maps.push(a);
    }
    Ok(maps)
}

fn rep_from_quotient(m: &CyclicModuleTable, s: &Element, s_a1: &Matrix) -> Result<DeltaRep> {
    let n = s.degree;
    let field = s.coords[0].field();
    let q_mid = Quotient::by_columns(&Matrix::column_vector(field, &s.coords));
    let q_top = Quotient::by_columns(s_a1);
    let lower = [0, 1, 2].map(|g| q_mid.proj().mul(m.mul(g, n - 1)));
    // multiplication must carry k·s into s·A_1
    for g in 0..3 {
        let image = m.mul(g, n).mul_vec(&s.coords);
        if !q_top.proj().mul_vec(&image).iter().all(Scalar::is_zero) {
            return Err(Error::Internal("s·x_g is not in s·A_1".into()));
        }
    }
    let upper = [0, 1, 2].map(|g| q_top.proj().mul(m.mul(g, n)).mul(q_mid.lift()));
    DeltaRep::new(field, [m.dim(n - 1), q_mid.dim(), q_top.dim()], lower, upper)
}

/// Builds the representation attached to `ker(A → (A/uA)(n))`, with the
/// map sending `1` to `s ∈ (A/uA)_n`, and certifies it.
pub fn construct_ideal_rep(
    t: &AlgebraTable,
    ell: &EllipticData,
    n: usize,
    choice: &ConstructChoice,
    seed: u64,
    trial: u64,
) -> Result<IdealWitness> {
    if n == 0 {
        return Err(Error::InvariantZero);
    }
    let need = required_max_deg(n);
    if t.max_deg() < need {
        return Err(Error::DegreeBudget {
            needed: need,
            have: t.max_deg(),
        });
    }
    let field = t.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);

    let u = match &choice.u {
        Some(u) => u.clone(),
        None => loop {
            let c = random_vec(field, 3, &mut rng);
            if c.iter().any(|x| !x.is_zero()) {
                break Element::linear(&[c[0].clone(), c[1].clone(), c[2].clone()]);
            }
        },
    };
    if u.degree != 1 || u.coords.len() != 3 {
        return Err(Error::InvalidInput("u must be a degree-1 element".into()));
    }
    let m = cyclic_quotient(t, &u, Side::Right)?;
    let top = t.max_deg() - n;
    let window = last_short_degree(n) + 3;

    let (s, maps, draws) = match &choice.s {
        Some(s) => {
            if s.degree != n || s.coords.len() != m.dim(n) {
                return Err(Error::ShapeMismatch(format!(
                    "s must have {} coordinates in degree {n}",
                    m.dim(n)
                )));
            }
            if s.is_zero() {
                return Err(Error::ZeroElement);
            }
            (s.clone(), max_rank_window(t, &m, s, window)?, 1)
        }
        None => {
            let mut found = None;
            let mut last_err = None;
            for draw in 1..=MAX_DRAWS {
                let s = Element {
                    degree: n,
                    coords: random_vec(field, m.dim(n), &mut rng),
                };
                if s.is_zero() {
                    continue;
                }
                match max_rank_window(t, &m, &s, window) {
                    Ok(maps) => {
                        found = Some((s, maps, draw));
                        break;
                    }
                    Err(e @ Error::NotSurjective(_)) => last_err = Some(e),
                    Err(e) => return Err(e),
                }
            }
            found.ok_or_else(|| {
                last_err.unwrap_or_else(|| Error::NotSurjective(format!("no nonzero s in {MAX_DRAWS} draws")))
            })?
        }
    };

    // kernel dimensions for every degree the table reaches
    let mut kernel_dims: Vec<usize> = maps.iter().map(|a| a.cols() - a.rank()).collect();
    for d in maps.len()..=top {
        let a = m.action_matrix(t, &s, d)?;
        kernel_dims.push(a.cols() - a.rank());
    }
    let kdims: Vec<i64> = kernel_dims.iter().map(|&k| k as i64).collect();
    let kernel_class = class_from_hilbert(&kdims, top - 2)?;
    let ideal_class = shift_class(kernel_class, 1);
    let (shift, invariant) = normalize_and_invariant(ideal_class)?;
    if shift != 0 || invariant != n as i64 {
        return Err(Error::Internal(format!(
            "ideal class {ideal_class} has shift {shift} and invariant {invariant}, expected 0 and {n}"
        )));
    }

    let rep = rep_from_quotient(&m, &s, &maps[1])?;
    if rep.dims() != [n, n, n - 1] {
        return Err(Error::Internal(format!("rep dims {:?}, expected ({n}, {n}, {})", rep.dims(), n - 1)));
    }
    if !validate_rep(t.relations(), &rep)?.is_empty() {
        return Err(Error::Internal("constructed rep violates the relations".into()));
    }
    let ext = ext_dims(t.relations(), &rep, &rep)?;

    let cohomology = cohomology_rows(&m, n, &maps)?;
    let f0 = res(&rep);
    let det = det_curve(&f0)?;
    let certificate = membership_check_dn(ell, &f0, choice.sample.as_deref())?;
    if !certificate.passed() {
        return Err(Error::CertificateFailed(Box::new(certificate)));
    }
    Ok(IdealWitness {
        params: t.params().as_array().map(|x| x.to_decimal()),
        field,
        n,
        u: strings(&u.coords),
        s: strings(&s.coords),
        seed,
        trial,
        draws,
        max_deg: t.max_deg(),
        kernel_dims,
        kernel_class,
        ideal_class,
        hilbert_invariant: invariant,
        rank_m: certificate.rank_m,
        euler: ext.euler,
        ext,
        rep,
        certificate,
        cohomology,
        det_curve: det.coeff_map(),
    })
}

/// `H^i` of the ideal twisted by `l = -3..0`, from
/// `0 → I(l) → O(l+1) → S(n+l+1) → 0`. Global sections of `S(j)` are
/// `S_j` for `j ≥ -2` because `H^1(O(m))` vanishes, so `H^0(I(l))` and
/// `H^1(I(l))` are the kernel and cokernel of `A_{l+1} → S_{n+l+1}`.
/// `H^2(I(l))` sits between `H^1(S(n+l+1)) = 0` and `H^2(O(l+1)) = 0`.
fn cohomology_rows(m: &CyclicModuleTable, n: usize, maps: &[Matrix]) -> Result<Vec<CohomologyRow>> {
    let ideal = KClass::ideal(n as i64);
    let mut rows = Vec::new();
    for l in -3i64..=0 {
        let target = n as i64 + l + 1;
        let (h0, h1) = if target < 0 {
            (0, 0)
        } else if l + 1 < 0 {
            (0, m.dim(target as usize))
        } else {
            let a = &maps[(l + 1) as usize];
            let r = a.rank();
            (a.cols() - r, a.rows() - r)
        };
        let chi = chi_form(KClass::STRUCTURE, shift_class(ideal, l));
        if h0 as i64 - h1 as i64 != chi {
            return Err(Error::Internal(format!(
                "cohomology at l = {l}: h0 - h1 = {} but chi = {chi}",
                h0 as i64 - h1 as i64
            )));
        }
        rows.push(CohomologyRow { l, h0, h1, h2: 0, chi });
    }
    Ok(rows)
}

/// `H^1` dimensions in the order `l = -3, -2, -1, 0`.
pub fn cohomology_table(w: &IdealWitness) -> Vec<usize> {
    w.cohomology.iter().map(|r| r.h1).collect()
}

/// `det(xX + yY + zZ)` as a form of degree `n`.
pub fn det_curve(f: &Delta0Rep) -> Result<TernaryForm> {
    let [n, m] = f.dims();
    if n != m || n == 0 {
        return Err(Error::ShapeMismatch(format!("det curve needs dims (n, n), got ({n}, {m})")));
    }
    let field = f.field();
    let form = if field.characteristic() == 0 || (n as u64) < field.characteristic() {
        interpolate_det(f, n)?
    } else {
        symbolic_det(f)
    };
    if form.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    Ok(form)
}

/// Values at `(1, i, j)` with `i + j ≤ n` determine a degree-`n` form.
fn interpolate_det(f: &Delta0Rep, n: usize) -> Result<TernaryForm> {
    let field = f.field();
    let mons = monomials(n);
    let mut pts = Vec::new();
    for i in 0..=n {
        for j in 0..=n - i {
            pts.push([field.one(), field.from_i64(i as i64), field.from_i64(j as i64)]);
        }
    }
    let mut vand = Matrix::zeros(field, pts.len(), mons.len());
    let mut vals = Vec::new();
    for (r, p) in pts.iter().enumerate() {
        for (c, e) in mons.iter().enumerate() {
            vand[(r, c)] = &(&p[0].pow(e[0] as u32) * &p[1].pow(e[1] as u32)) * &p[2].pow(e[2] as u32);
        }
        vals.push(f.pencil(p).determinant());
    }
    let coeffs = vand
        .solve(&vals)?
        .ok_or_else(|| Error::Internal("interpolation system is singular".into()))?;
    Ok(TernaryForm::from_coeffs(field, n, coeffs))
}

fn symbolic_det(f: &Delta0Rep) -> TernaryForm {
    let [n, _] = f.dims();
    let [x, y, z] = f.maps();
    let entries: Vec<Vec<TernaryForm>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| TernaryForm::linear(&[x[(r, c)].clone(), y[(r, c)].clone(), z[(r, c)].clone()]))
                .collect()
        })
        .collect();
    form_determinant(&entries)
}

/// Every point of `P²` over a finite field, normalized.
pub fn projective_points(field: FieldSpec) -> Result<Vec<CurvePoint>> {
    let FieldSpec::Prime { p } = field else {
        return Err(Error::FieldNotFinite);
    };
    if p > crate::elliptic::MAX_ENUMERATION_PRIME {
        return Err(Error::BudgetExceeded(format!("P^2 over F_{p}")));
    }
    let el = |v: u64| Scalar::Fp { v, p };
    let mut out = Vec::with_capacity((p * p + p + 1) as usize);
    for y in 0..p {
        for z in 0..p {
            out.push(CurvePoint::new([el(1), el(y), el(z)])?);
        }
    }
    for z in 0..p {
        out.push(CurvePoint::new([el(0), el(1), el(z)])?);
    }
    out.push(CurvePoint::new([el(0), el(0), el(1)])?);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct LineObjectCheck {
    pub point: [String; 3],
    pub on_det_curve: bool,
    pub hom_dim: usize,
}

/// For points `(α:β:γ)` on and off the determinant curve, the dimension
/// of `Hom(F, Res L)` for the line object of `u = αx + βy + γz`.
/// `small` is an algebra table of any degree bound ≥ 3 for the same
/// parameters.
pub fn line_object_cross_check(
    small: &AlgebraTable,
    f: &Delta0Rep,
    form: &TernaryForm,
    per_side: usize,
) -> Result<Vec<LineObjectCheck>> {
    let pts = projective_points(f.field())?;
    let on: Vec<&CurvePoint> = pts.iter().filter(|p| form.evaluate(p.coords()).is_zero()).take(per_side).collect();
    let off: Vec<&CurvePoint> = pts.iter().filter(|p| !form.evaluate(p.coords()).is_zero()).take(per_side).collect();
    on.into_iter()
        .map(|p| (p, true))
        .chain(off.into_iter().map(|p| (p, false)))
        .map(|(p, on_det_curve)| {
            let line = line_object_rep(small, &Element::linear(p.coords()))?;
            Ok(LineObjectCheck {
                point: p.to_strings(),
                on_det_curve,
                hom_dim: hom_space(f, &res(&line))?.dim,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RankOneClass {
    pub point: [String; 3],
    pub on_curve: bool,
    pub member: bool,
}

/// Membership of every scalar representation `(α, β, γ)`, one per point
/// of `P²`, next to whether the point lies on the curve.
pub fn classify_rank_one(ell: &EllipticData) -> Result<Vec<RankOneClass>> {
    let pts = projective_points(ell.field())?;
    let curve = ell.enumerate_points()?;
    let curve_reps: Vec<Delta0Rep> = curve.iter().map(|q| Delta0Rep::from_scalars(q.coords())).collect();
    let results = par_map(&pts, |p| -> Result<RankOneClass> {
        let f = Delta0Rep::from_scalars(p.coords());
        let mut member = big_matrix_m(ell.relations(), &f).rank() == 3;
        for r in &curve_reps {
            if !member {
                break;
            }
            member = hom_space(&f, r)?.dim == 0 && hom_space(r, &f)?.dim == 0;
        }
        Ok(RankOneClass {
            point: p.to_strings(),
            on_curve: ell.contains(p.coords()),
            member,
        })
    });
    results.into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleFailure {
    pub trial: u64,
    pub error: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub certified: usize,
    pub total_draws: usize,
    pub failures: Vec<SampleFailure>,
    pub witnesses: Vec<IdealWitness>,
}

/// Up to `trials` certified witnesses; trial `i` uses stream `i` of the
/// seeded generator, so the output is independent of scheduling.
pub fn sample_dn(t: &AlgebraTable, ell: &EllipticData, n: usize, trials: usize, seed: u64) -> Result<SampleReport> {
    if n == 0 {
        return Err(Error::InvariantZero);
    }
    if !t.field().is_finite() {
        return Err(Error::FieldNotFinite);
    }
    let idx: Vec<u64> = (0..trials as u64).collect();
    let results = par_map(&idx, |&trial| construct_ideal_rep(t, ell, n, &ConstructChoice::default(), seed, trial));
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for (trial, r) in idx.iter().zip(results) {
        match r {
            Ok(w) => witnesses.push(w),
            Err(e @ (Error::CertificateFailed(_) | Error::NotSurjective(_))) => failures.push(SampleFailure {
                trial: *trial,
                error: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(SampleReport {
        n,
        seed,
        trials,
        certified: witnesses.len(),
        total_draws: witnesses.iter().map(|w| w.draws).sum(),
        failures,
        witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbResult {
    pub rep: DeltaRep,
    pub solution_dim: usize,
    pub certificate: Certificate,
}

/// Experimental: move the upper arrows in a random direction, re-solve
/// the relations for the lower arrows, and re-certify. No claim that this
/// reaches every point of the locus.
pub fn perturb_witness(ell: &EllipticData, rep: &DeltaRep, seed: u64) -> Result<PerturbResult> {
    let rel = ell.relations();
    let field = rep.field();
    let [d0, d1, d2] = rep.dims();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper = rep.upper().clone().map(|m| {
        let noise = Matrix::new(field, d2, d1, random_vec(field, d2 * d1, &mut rng));
        m.add(&noise)
    });
    // unknowns: lower[i] entries, row-major, i = 0..3
    let per = d1 * d0;
    let mut sys = Matrix::zeros(field, 3 * d2 * d0, 3 * per);
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let lam = rel.coeff(k, i, j);
                if lam.is_zero() {
                    continue;
                }
                for r in 0..d2 {
                    for c in 0..d0 {
                        let row = k * d2 * d0 + r * d0 + c;
                        for t in 0..d1 {
                            let col = i * per + t * d0 + c;
                            sys[(row, col)] = &sys[(row, col)] + &(lam * &upper[j][(r, t)]);
                        }
                    }
                }
            }
        }
    }
    let kernel = sys.kernel_basis();
    let mut x = vec![field.zero(); 3 * per];
    for c in 0..kernel.cols() {
        let w = field.random(&mut rng);
        for (xi, v) in x.iter_mut().zip(kernel.column(c)) {
            *xi = &*xi + &(&w * &v);
        }
    }
    let lower = [0, 1, 2].map(|i| Matrix::new(field, d1, d0, x[i * per..(i + 1) * per].to_vec()));
    let new_rep = DeltaRep::new(field, [d0, d1, d2], lower, upper)?;
    if !validate_rep(rel, &new_rep)?.is_empty() {
        return Err(Error::Internal("perturbed rep violates the relations".into()));
    }
    let sample: Option<&[CurvePoint]> = if field.is_finite() { None } else { Some(&[]) };
    let certificate = membership_check_dn(ell, &res(&new_rep), sample)?;
    Ok(PerturbResult {
        rep: new_rep,
        solution_dim: kernel.cols(),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, SklyParams};
    use crate::quiver::is_isomorphic;

    fn setup(p: u64, n: usize) -> (AlgebraTable, EllipticData) {
        let f = FieldSpec::prime(p).unwrap();
        let t = build_algebra(&SklyParams::from_i64(f, 1, 2, 3).unwrap(), required_max_deg(n)).unwrap();
        let e = EllipticData::new(t.relations()).unwrap();
        (t, e)
    }

    #[test]
    fn degree_budget() {
        assert_eq!([1, 2, 3, 4].map(required_max_deg), [6, 8, 9, 11]);
        let (t, e) = setup(101, 1);
        assert!(matches!(
            construct_ideal_rep(&t, &e, 3, &ConstructChoice::default(), 1, 0),
            Err(Error::DegreeBudget { .. })
        ));
        assert!(matches!(
            construct_ideal_rep(&t, &e, 0, &ConstructChoice::default(), 1, 0),
            Err(Error::InvariantZero)
        ));
    }

    #[test]
    fn small_invariants_end_to_end() {
        for n in 1..=3 {
            let (t, e) = setup(101, n);
            let w = construct_ideal_rep(&t, &e, n, &ConstructChoice::default(), 7, 0).unwrap();
            assert_eq!(w.rep.dims(), [n, n, n - 1]);
            assert_eq!(w.hilbert_invariant, n as i64);
            assert_eq!(w.rank_m, 2 * n + 1);
            assert_eq!(w.ext.as_tuple(), (1, 2 * n, 0));
            assert_eq!(w.euler, 1 - 2 * n as i64);
            assert_eq!(cohomology_table(&w), vec![n - 1, n, n, n - 1]);
            assert!(w.cohomology.iter().all(|r| r.h0 == 0));
            assert!(w.certificate.passed());
        }
    }

    #[test]
    fn rank_one_is_a_scalar_point_off_the_curve() {
        let (t, e) = setup(101, 1);
        let w = construct_ideal_rep(&t, &e, 1, &ConstructChoice::default(), 3, 0).unwrap();
        let f = res(&w.rep);
        let c: [Scalar; 3] = f.maps().clone().map(|m| m[(0, 0)].clone());
        assert!(!e.contains(&c));
        let form = det_curve(&f).unwrap();
        assert_eq!(form.degree(), 1);
        assert!(form.is_proportional(&TernaryForm::linear(&c)));
    }

    #[test]
    fn bad_s_is_rejected() {
        let (t, e) = setup(101, 2);
        let f = t.field();
        let choice = ConstructChoice {
            u: Some(Element::linear(&[f.one(), f.zero(), f.zero()])),
            s: Some(Element {
                degree: 2,
                coords: vec![f.zero(); 3],
            }),
            sample: None,
        };
        assert!(matches!(construct_ideal_rep(&t, &e, 2, &choice, 0, 0), Err(Error::ZeroElement)));
    }

    #[test]
    fn det_curve_interpolation_matches_expansion() {
        let (t, e) = setup(101, 2);
        let w = construct_ideal_rep(&t, &e, 2, &ConstructChoice::default(), 11, 0).unwrap();
        let f = res(&w.rep);
        let form = det_curve(&f).unwrap();
        assert_eq!(form.degree(), 2);
        assert_eq!(form, symbolic_det(&f));
        let zero = Delta0Rep::new(f.field(), [2, 2], [0, 1, 2].map(|_| Matrix::zeros(f.field(), 2, 2))).unwrap();
        assert!(matches!(det_curve(&zero), Err(Error::IdenticallyZero)));
    }

    #[test]
    fn line_objects_detect_the_det_curve() {
        let (t, e) = setup(101, 2);
        let small = build_algebra(t.params(), 3).unwrap();
        let w = construct_ideal_rep(&t, &e, 2, &ConstructChoice::default(), 5, 0).unwrap();
        let f = res(&w.rep);
        let form = det_curve(&f).unwrap();
        let checks = line_object_cross_check(&small, &f, &form, 5).unwrap();
        assert_eq!(checks.len(), 10);
        for c in checks {
            assert_eq!(c.on_det_curve, c.hom_dim != 0, "{c:?}");
        }
    }

    #[test]
    fn sampler_is_deterministic_and_rejects_zero() {
        let (t, e) = setup(101, 1);
        let a = sample_dn(&t, &e, 1, 4, 9).unwrap();
        let b = sample_dn(&t, &e, 1, 4, 9).unwrap();
        assert_eq!(a.certified, 4);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(matches!(sample_dn(&t, &e, 0, 1, 9), Err(Error::InvariantZero)));
    }

    #[test]
    fn different_seeds_give_different_points() {
        let (t, e) = setup(101, 2);
        let w1 = construct_ideal_rep(&t, &e, 2, &ConstructChoice::default(), 1, 0).unwrap();
        let w2 = construct_ideal_rep(&t, &e, 2, &ConstructChoice::default(), 2, 0).unwrap();
        assert!(!is_isomorphic(&res(&w1.rep), &res(&w2.rep)));
    }

    #[test]
    fn classification_over_f5() {
        let f = FieldSpec::prime(5).unwrap();
        let params = SklyParams::from_i64(f, 1, 2, 3);
        let params = match params {
            Ok(p) => p,
            Err(_) => SklyParams::from_i64(f, 1, 1, 2).unwrap(),
        };
        let e = EllipticData::new(&crate::algebra::RelationTensor::sklyanin(&params)).unwrap();
        let grid = classify_rank_one(&e).unwrap();
        assert_eq!(grid.len(), 31);
        assert!(grid.iter().all(|c| c.member == !c.on_curve));
    }

    #[test]
    fn perturbation_keeps_relations() {
        let (t, e) = setup(101, 2);
        let w = construct_ideal_rep(&t, &e, 2, &ConstructChoice::default(), 4, 0).unwrap();
        let p = perturb_witness(&e, &w.rep, 1).unwrap();
        assert!(p.solution_dim >= 6);
        assert!(validate_rep(e.relations(), &p.rep).unwrap().is_empty());
    }
}
