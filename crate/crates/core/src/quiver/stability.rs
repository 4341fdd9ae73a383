//! Slope stability for `(n, n)` representations of the subquiver with
//! weight `θ = (-1, 1)`: a subspace `U` at vertex `-2` destabilizes when
//! `XU + YU + ZU` is too small.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Delta0Rep;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};

/// Refuse exhaustive searches over more subspaces than this.
pub const SUBSPACE_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stable,
    SemistableNotStable,
    Unstable,
    /// Sampled mode only: no destabilizing subspace among the samples.
    NoWitnessFound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub subspaces_checked: u128,
    /// Basis (as rows) of a destabilizing `U` and of its image.
    pub witness_u: Option<Vec<Vec<String>>>,
    pub witness_image: Option<Vec<Vec<String>>>,
}

/// Number of nonzero subspaces of `F_p^n`.
pub fn subspace_count(p: u64, n: usize) -> u128 {
    let p = p as u128;
    let mut total = 0u128;
    for k in 1..=n {
        // Gaussian binomial [n, k]_p
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k {
            num = num.saturating_mul(p.saturating_pow((n - i) as u32).saturating_sub(1));
            den = den.saturating_mul(p.saturating_pow((i + 1) as u32) - 1);
        }
        if num == u128::MAX {
            return u128::MAX;
        }
        total = total.saturating_add(num / den);
    }
    total
}

/// Rows of `u` span `U`; returns `(dim U, dim XU+YU+ZU, image basis)`.
fn image_of(f: &Delta0Rep, u: &Matrix) -> (usize, usize, Matrix) {
    let field = f.field();
    let ut = u.transpose();
    let parts: Vec<Matrix> = f.maps().iter().map(|m| m.mul(&ut)).collect();
    let joint = Matrix::hstack(field, f.dims()[1], &parts.iter().collect::<Vec<_>>());
    let r = joint.transpose().rref();
    let img_rank = r.pivots.len();
    let img = r.matrix.block(0, 0, img_rank, f.dims()[1]);
    (u.rank(), img_rank, img)
}

fn rows_to_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(Scalar::to_decimal).collect())
        .collect()
}

struct Search {
    checked: u128,
    unstable: Option<(Matrix, Matrix)>,
    strictly_semistable: Option<(Matrix, Matrix)>,
}

impl Search {
    fn visit(&mut self, f: &Delta0Rep, u: Matrix) {
        self.checked += 1;
        let n = f.dims()[0];
        let (du, dw, img) = image_of(f, &u);
        if dw < du {
            if self.unstable.is_none() {
                self.unstable = Some((u, img));
            }
        } else if dw == du && du < n && self.strictly_semistable.is_none() {
            self.strictly_semistable = Some((u, img));
        }
    }

    fn report(self, exhaustive: bool) -> StabilityReport {
        let (verdict, w) = match (self.unstable, self.strictly_semistable) {
            (Some(w), _) => (Verdict::Unstable, Some(w)),
            (None, Some(w)) => (Verdict::SemistableNotStable, Some(w)),
            (None, None) if exhaustive => (Verdict::Stable, None),
            (None, None) => (Verdict::NoWitnessFound, None),
        };
        StabilityReport {
            verdict,
            subspaces_checked: self.checked,
            witness_u: w.as_ref().map(|(u, _)| rows_to_strings(u)),
            witness_image: w.as_ref().map(|(_, i)| rows_to_strings(i)),
        }
    }
}

/// Calls `visit` on every reduced row echelon `k × n` matrix over `F_p`.
fn for_each_echelon(field: FieldSpec, p: u64, n: usize, k: usize, visit: &mut dyn FnMut(Matrix)) {
    fn pivot_sets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            pivot_sets(n, k, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut sets = Vec::new();
    pivot_sets(n, k, 0, &mut Vec::new(), &mut sets);
    for pivots in sets {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut digits = vec![0u64; free.len()];
        loop {
            let mut m = Matrix::zeros(field, k, n);
            for (r, &c) in pivots.iter().enumerate() {
                m[(r, c)] = field.one();
            }
            for (&(r, c), &v) in free.iter().zip(&digits) {
                m[(r, c)] = Scalar::Fp { v, p };
            }
            visit(m);
            // odometer
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
}

/// θ-stability of an `(n, n)` representation. Exhaustive mode walks every
/// subspace of `F_p^n`; sampled mode draws random subspaces.
pub fn stability_check(f: &Delta0Rep, mode: StabilityMode) -> Result<StabilityReport> {
    let [n, m] = f.dims();
    if n != m || n == 0 {
        return Err(Error::ShapeMismatch(format!("stability needs dims (n, n) with n > 0, got ({n}, {m})")));
    }
    let field = f.field();
    let mut search = Search {
        checked: 0,
        unstable: None,
        strictly_semistable: None,
    };
    match mode {
        StabilityMode::Exhaustive => {
            let FieldSpec::Prime { p } = field else {
                return Err(Error::FieldNotFinite);
            };
            let count = subspace_count(p, n);
            if count > SUBSPACE_BUDGET {
                return Err(Error::BudgetExceeded(format!(
                    "{count} subspaces of F_{p}^{n} (limit {SUBSPACE_BUDGET})"
                )));
            }
            for k in 1..=n {
                for_each_echelon(field, p, n, k, &mut |u| search.visit(f, u));
            }
            Ok(search.report(true))
        }
        StabilityMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            search.visit(f, Matrix::identity(field, n));
            for _ in 0..samples {
                let k = rng.gen_range(1..=n);
                let u = Matrix::new(field, k, n, (0..k * n).map(|_| field.random(&mut rng)).collect());
                if u.rank() == 0 {
                    continue;
                }
                search.visit(f, u);
            }
            Ok(search.report(false))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts() {
        assert_eq!(subspace_count(7, 1), 1);
        assert_eq!(subspace_count(7, 2), 8 + 1);
        assert_eq!(subspace_count(2, 3), 7 + 7 + 1);
        assert!(subspace_count(101, 4) > SUBSPACE_BUDGET);
    }

    #[test]
    fn enumeration_matches_count() {
        let f = FieldSpec::prime(3).unwrap();
        for n in 1..=3 {
            let mut seen = 0u128;
            for k in 1..=n {
                for_each_echelon(f, 3, n, k, &mut |u| {
                    assert_eq!(u.rank(), k);
                    seen += 1;
                });
            }
            assert_eq!(seen, subspace_count(3, n));
        }
    }

    #[test]
    fn scalar_reps() {
        let f = FieldSpec::prime(7).unwrap();
        let nonzero = Delta0Rep::from_scalars(&[f.from_i64(2), f.zero(), f.from_i64(5)]);
        let r = stability_check(&nonzero, StabilityMode::Exhaustive).unwrap();
        assert_eq!(r.verdict, Verdict::Stable);
        let zero = Delta0Rep::from_scalars(&[f.zero(), f.zero(), f.zero()]);
        let r = stability_check(&zero, StabilityMode::Exhaustive).unwrap();
        assert_eq!(r.verdict, Verdict::Unstable);
        assert_eq!(r.witness_u.unwrap(), vec![vec!["1".to_string()]]);
        assert!(r.witness_image.unwrap().is_empty());
    }

    #[test]
    fn strictly_semistable_direct_sum() {
        let f = FieldSpec::prime(5).unwrap();
        // diagonal maps: each coordinate line maps onto itself
        let d = |a, b| Matrix::from_i64(f, &[&[a, 0], &[0, b]]);
        let r = Delta0Rep::new(f, [2, 2], [d(1, 1), d(2, 3), d(0, 1)]).unwrap();
        let rep = stability_check(&r, StabilityMode::Exhaustive).unwrap();
        assert_eq!(rep.verdict, Verdict::SemistableNotStable);
    }

    #[test]
    fn budget_and_field_guards() {
        let f = FieldSpec::prime(101).unwrap();
        let r = Delta0Rep::new(f, [4, 4], [0, 1, 2].map(|_| Matrix::identity(f, 4))).unwrap();
        assert!(matches!(stability_check(&r, StabilityMode::Exhaustive), Err(Error::BudgetExceeded(_))));
        let s = stability_check(&r, StabilityMode::Sampled { samples: 50, seed: 1 }).unwrap();
        // identity maps: XU = U, semistable but not stable; sampling finds it
        assert_eq!(s.verdict, Verdict::SemistableNotStable);
        let q = Delta0Rep::from_scalars(&[FieldSpec::Rational.one(), FieldSpec::Rational.zero(), FieldSpec::Rational.zero()]);
        assert!(matches!(stability_check(&q, StabilityMode::Exhaustive), Err(Error::FieldNotFinite)));
    }
}
