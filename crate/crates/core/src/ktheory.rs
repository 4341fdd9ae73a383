//! Classes in `K₀` of the quantum plane in the basis `[O], [S], [P]`
//! (structure sheaf, line module, point module).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `r[O] + a[S] + b[P]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KClass {
    pub r: i64,
    pub a: i64,
    pub b: i64,
}

impl KClass {
    pub const STRUCTURE: KClass = KClass { r: 1, a: 0, b: 0 };
    pub const LINE: KClass = KClass { r: 0, a: 1, b: 0 };
    pub const POINT: KClass = KClass { r: 0, a: 0, b: 1 };

    pub fn new(r: i64, a: i64, b: i64) -> Self {
        KClass { r, a, b }
    }

    /// Normalized rank-one class `[O] - n[P]`.
    pub fn ideal(n: i64) -> Self {
        KClass { r: 1, a: 0, b: -n }
    }

    pub fn add(self, o: KClass) -> KClass {
        KClass::new(self.r + o.r, self.a + o.a, self.b + o.b)
    }

    pub fn scale(self, k: i64) -> KClass {
        KClass::new(k * self.r, k * self.a, k * self.b)
    }

    /// Coordinates in the basis `[O], [O(1)], [O(2)]`.
    pub fn twist_coords(self) -> [i64; 3] {
        [
            self.r - 2 * self.a + self.b,
            3 * self.a - 2 * self.b,
            -self.a + self.b,
        ]
    }
}

impl std::fmt::Display for KClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.a, self.b)
    }
}

/// Class of a module from its Hilbert function `dims[0..]`, assuming the
/// characteristic polynomial `h(t)(1-t)^3` has degree at most `qdeg_bound`.
pub fn class_from_hilbert(dims: &[i64], qdeg_bound: usize) -> Result<KClass> {
    let top = qdeg_bound + 2;
    if dims.len() <= top {
        return Err(Error::InvalidInput(format!(
            "need dimensions through degree {top}, got {}",
            dims.len()
        )));
    }
    const BINOM3: [i64; 4] = [1, -3, 3, -1];
    let q: Vec<i64> = (0..=top)
        .map(|k| {
            (0..=3.min(k))
                .map(|m| BINOM3[m] * dims[k - m])
                .sum()
        })
        .collect();
    if q[qdeg_bound + 1..].iter().any(|&c| c != 0) {
        return Err(Error::InsufficientDegrees);
    }
    // t^k ≡ 1 - k(1-t) + C(k,2)(1-t)^2 modulo (1-t)^3
    let mut c = KClass::default();
    for (k, &qk) in q.iter().enumerate() {
        let k = k as i64;
        c.r += qk;
        c.a -= k * qk;
        c.b += k * (k - 1) / 2 * qk;
    }
    Ok(c)
}

/// The class of the twist by `l`.
pub fn shift_class(c: KClass, l: i64) -> KClass {
    KClass {
        r: c.r,
        a: c.a + l * c.r,
        b: l * (l + 1) / 2 * c.r + l * c.a + c.b,
    }
}

/// For a rank-one class: the normalizing shift `-a` and the invariant
/// `n = a(a+1)/2 - b`.
pub fn normalize_and_invariant(c: KClass) -> Result<(i64, i64)> {
    if c.r != 1 {
        return Err(Error::RankNotOne(c.r));
    }
    Ok((-c.a, c.a * (c.a + 1) / 2 - c.b))
}

fn chi_twists(i: i64, j: i64) -> i64 {
    let d = j - i;
    (d + 1) * (d + 2) / 2
}

/// The Euler form, bilinear with `χ(O(i), O(j)) = (j-i+1)(j-i+2)/2`.
pub fn chi_form(c1: KClass, c2: KClass) -> i64 {
    let (u, v) = (c1.twist_coords(), c2.twist_coords());
    let mut s = 0;
    for i in 0..3 {
        for j in 0..3 {
            s += u[i] * v[j] * chi_twists(i as i64, j as i64);
        }
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct SerrePair {
    pub first: KClass,
    pub second: KClass,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SerreReport {
    pub pairs: Vec<SerrePair>,
    pub all_pass: bool,
}

/// `χ(c1, c2) = χ(c2, c1(-3))` on every pair of basis classes.
pub fn serre_pairing_check() -> SerreReport {
    let basis = [KClass::STRUCTURE, KClass::LINE, KClass::POINT];
    let mut pairs = Vec::new();
    for &first in &basis {
        for &second in &basis {
            pairs.push(SerrePair {
                first,
                second,
                lhs: chi_form(first, second),
                rhs: chi_form(second, shift_class(first, -3)),
            });
        }
    }
    let all_pass = pairs.iter().all(|p| p.lhs == p.rhs);
    SerreReport { pairs, all_pass }
}

/// Rank and degree of the restriction to the curve.
pub fn restriction_rank_degree(c: KClass) -> (i64, i64) {
    (c.r, 3 * c.a)
}
