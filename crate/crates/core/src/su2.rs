//! SU(2) Clebsch-Gordan coefficients `⟨j1 m1; j2 m2 | j m⟩` in the
//! Condon–Shortley phase convention, computed exactly from Racah's
//! single-sum factorial formula.
//!
//! With the `std` feature enabled, results are memoised in a process-wide
//! table guarded by a read–write lock, so concurrent readers never block each
//! other and writers only insert values that are deterministic anyway.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::scalar::{factorial, from_biguint, Half, Rational, SurdValue};

/// Errors raised by SU(2) coupling queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Su2Error {
    /// A projection exceeds its angular momentum, an angular momentum is
    /// negative, or `j − m` is not an integer.
    #[error("malformed SU(2) label: {0}")]
    MalformedKey(&'static str),
    /// `j` is not in `{|j1 − j2|, …, j1 + j2}`.
    #[error("triangle rule violated for j1 = {j1}, j2 = {j2}, j = {j}")]
    TriangleViolation {
        /// First angular momentum.
        j1: Half,
        /// Second angular momentum.
        j2: Half,
        /// Coupled angular momentum.
        j: Half,
    },
}

/// Labels of one SU(2) coupling coefficient `⟨j1 m1; j2 m2 | j m⟩`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Su2CgKey {
    /// First angular momentum.
    pub j1: Half,
    /// Its projection.
    pub m1: Half,
    /// Second angular momentum.
    pub j2: Half,
    /// Its projection.
    pub m2: Half,
    /// Coupled angular momentum.
    pub j: Half,
    /// Its projection.
    pub m: Half,
}

impl Su2CgKey {
    /// Assemble a key.
    pub const fn new(j1: Half, m1: Half, j2: Half, m2: Half, j: Half, m: Half) -> Self {
        Self {
            j1,
            m1,
            j2,
            m2,
            j,
            m,
        }
    }

    fn validate(&self) -> Result<(), Su2Error> {
        for (j, m) in [(self.j1, self.m1), (self.j2, self.m2), (self.j, self.m)] {
            if j.0 < 0 {
                return Err(Su2Error::MalformedKey("negative angular momentum"));
            }
            if m.abs() > j {
                return Err(Su2Error::MalformedKey("|m| exceeds j"));
            }
            if (j.0 - m.0) % 2 != 0 {
                return Err(Su2Error::MalformedKey("j - m is not an integer"));
            }
        }
        Ok(())
    }

    fn triangle(&self) -> bool {
        triangle(self.j1, self.j2, self.j)
    }
}

/// `true` when `j ∈ {|j1 − j2|, …, j1 + j2}` (including the integer-step condition).
pub fn triangle(j1: Half, j2: Half, j: Half) -> bool {
    (j1 - j2).abs() <= j && j <= j1 + j2 && (j1.0 + j2.0 - j.0) % 2 == 0
}

fn fact(n2: i32) -> Rational {
    debug_assert!(n2 >= 0 && n2 % 2 == 0);
    from_biguint(factorial((n2 / 2) as u64))
}

/// Exact coefficient by Racah's formula; the key must already be valid,
/// triangular and projection-conserving.
fn racah(k: &Su2CgKey) -> SurdValue {
    let (j1, m1, j2, m2, j, m) = (k.j1.0, k.m1.0, k.j2.0, k.m2.0, k.j.0, k.m.0);
    // All arguments below are doubled; each combination is even.
    let radicand = Rational::from_integer(BigInt::from(j + 1))
        * fact(j + j1 - j2)
        * fact(j - j1 + j2)
        * fact(j1 + j2 - j)
        / fact(j1 + j2 + j + 2)
        * fact(j + m)
        * fact(j - m)
        * fact(j1 - m1)
        * fact(j1 + m1)
        * fact(j2 - m2)
        * fact(j2 + m2);
    let kmin = 0.max(j2 - j - m1).max(j1 - j + m2);
    let kmax = (j1 + j2 - j).min(j1 - m1).min(j2 + m2);
    let mut sum = Rational::zero();
    let mut kk = kmin;
    while kk <= kmax {
        let den = fact(kk)
            * fact(j1 + j2 - j - kk)
            * fact(j1 - m1 - kk)
            * fact(j2 + m2 - kk)
            * fact(j - j2 + m1 + kk)
            * fact(j - j1 - m2 + kk);
        let term = den.recip();
        if (kk / 2) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        kk += 2;
    }
    SurdValue::from_signed_square(if sum.is_negative() {
        -(&sum * &sum * radicand)
    } else {
        &sum * &sum * radicand
    })
}

#[cfg(feature = "std")]
mod memo {
    use super::{Su2CgKey, SurdValue};
    use std::collections::HashMap;
    use std::sync::{OnceLock, RwLock};

    type Table = RwLock<HashMap<Su2CgKey, (SurdValue, f64)>>;

    fn table() -> &'static Table {
        static TABLE: OnceLock<Table> = OnceLock::new();
        TABLE.get_or_init(|| RwLock::new(HashMap::new()))
    }

    pub fn get_or_insert(key: &Su2CgKey, compute: impl FnOnce() -> SurdValue) -> (SurdValue, f64) {
        if let Some(v) = table().read().unwrap_or_else(|e| e.into_inner()).get(key) {
            return v.clone();
        }
        let v = compute();
        let f = v.to_f64();
        let mut w = table().write().unwrap_or_else(|e| e.into_inner());
        w.entry(*key).or_insert((v, f)).clone()
    }
}

fn lookup(key: &Su2CgKey) -> (SurdValue, f64) {
    #[cfg(feature = "std")]
    {
        memo::get_or_insert(key, || racah(key))
    }
    #[cfg(not(feature = "std"))]
    {
        let v = racah(key);
        let f = v.to_f64();
        (v, f)
    }
}

/// Exact Condon–Shortley coefficient `⟨j1 m1; j2 m2 | j m⟩`.
///
/// Returns zero when `m ≠ m1 + m2` or the triangle rule fails; rejects
/// malformed labels.
pub fn su2_cgc(key: &Su2CgKey) -> Result<SurdValue, Su2Error> {
    key.validate()?;
    if key.m != key.m1 + key.m2 || !key.triangle() {
        return Ok(SurdValue::zero());
    }
    Ok(lookup(key).0)
}

/// Floating-point mirror of [`su2_cgc`] for hot loops; invalid or vanishing
/// labels give `0.0`.
pub fn su2_cgc_f64(j1: Half, m1: Half, j2: Half, m2: Half, j: Half, m: Half) -> f64 {
    let key = Su2CgKey::new(j1, m1, j2, m2, j, m);
    if key.validate().is_err() || key.m != key.m1 + key.m2 || !key.triangle() {
        return 0.0;
    }
    lookup(&key).1
}

/// All nonvanishing coefficients `⟨j1 m1; j2 m2 | j m1+m2⟩` for fixed
/// `(j1, j2, j)`, ordered by descending `m1 + m2` then descending `m1`.
pub fn su2_couplings(
    j1: Half,
    j2: Half,
    j: Half,
) -> Result<Vec<(Half, Half, SurdValue)>, Su2Error> {
    if j1.0 < 0 || j2.0 < 0 || j.0 < 0 {
        return Err(Su2Error::MalformedKey("negative angular momentum"));
    }
    if !triangle(j1, j2, j) {
        return Err(Su2Error::TriangleViolation { j1, j2, j });
    }
    let mut out = Vec::new();
    let mut m = j;
    while m >= -j {
        let mut m1 = j1;
        while m1 >= -j1 {
            let m2 = m - m1;
            if m2.abs() <= j2 {
                let v = su2_cgc(&Su2CgKey::new(j1, m1, j2, m2, j, m))?;
                if !v.is_zero() {
                    out.push((m1, m2, v));
                }
            }
            m1 = m1 - Half(2);
        }
        m = m - Half(2);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn h(n: i32) -> Half {
        Half(n)
    }

    fn cg(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> SurdValue {
        su2_cgc(&Su2CgKey::new(h(j1), h(m1), h(j2), h(m2), h(j), h(m))).unwrap()
    }

    #[test]
    fn spin_half_pair() {
        // ⟨½ ½; ½ −½ | 0 0⟩ = +1/√2, ⟨½ −½; ½ ½ | 0 0⟩ = −1/√2.
        assert_eq!(cg(1, 1, 1, -1, 0, 0), SurdValue::new(1, rat(1, 2)).unwrap());
        assert_eq!(cg(1, -1, 1, 1, 0, 0), SurdValue::new(-1, rat(1, 2)).unwrap());
        assert_eq!(cg(1, 1, 1, 1, 2, 2), SurdValue::one());
    }

    #[test]
    fn singlet_formula() {
        // ⟨j m; j −m | 0 0⟩ = (−1)^{j−m}/√(2j+1).
        for j2 in 0..7 {
            let mut m2 = j2;
            while m2 >= -j2 {
                let sign = if ((j2 - m2) / 2) % 2 == 0 { 1 } else { -1 };
                assert_eq!(
                    cg(j2, m2, j2, -m2, 0, 0),
                    SurdValue::new(sign, rat(1, (j2 + 1) as i64)).unwrap()
                );
                m2 -= 2;
            }
        }
    }

    #[test]
    fn spin_one_times_half() {
        // ⟨1 0; ½ ½ | ½ ½⟩ = −√(1/3), ⟨1 1; ½ −½ | ½ ½⟩ = √(2/3).
        assert_eq!(cg(2, 0, 1, 1, 1, 1), SurdValue::new(-1, rat(1, 3)).unwrap());
        assert_eq!(cg(2, 2, 1, -1, 1, 1), SurdValue::new(1, rat(2, 3)).unwrap());
    }

    #[test]
    fn selection_rules_and_errors() {
        assert!(cg(2, 2, 2, 0, 2, 0).is_zero());
        assert!(cg(2, 0, 2, 0, 2, 0).is_zero()); // ⟨1 0;1 0|1 0⟩ = 0
        assert!(su2_cgc(&Su2CgKey::new(h(1), h(3), h(1), h(1), h(2), h(4))).is_err());
        assert!(su2_cgc(&Su2CgKey::new(h(1), h(0), h(1), h(0), h(0), h(0))).is_err());
        assert!(matches!(
            su2_couplings(h(1), h(1), h(4)),
            Err(Su2Error::TriangleViolation { .. })
        ));
    }

    #[test]
    fn couplings_table_size() {
        // ½ ⊗ ½ → 1: one entry at m = ±1, two at m = 0.
        assert_eq!(su2_couplings(h(1), h(1), h(2)).unwrap().len(), 4);
    }

    proptest! {
        #[test]
        fn columns_are_orthonormal(j1 in 0i32..7, j2 in 0i32..7, mm in 0i32..14) {
            // Σ_{m1} ⟨j1 m1; j2 m−m1 | j m⟩⟨j1 m1; j2 m−m1 | j' m⟩ = δ_{jj'}.
            let jmin = (j1 - j2).abs();
            let jmax = j1 + j2;
            let m = jmax - 2 * (mm % (jmax + 1).max(1));
            if m.abs() > jmax { return Ok(()); }
            let mut j = jmin;
            while j <= jmax {
                let mut jp = jmin;
                while jp <= jmax {
                    if m.abs() <= j && m.abs() <= jp {
                        let mut sum = 0.0;
                        let mut m1 = j1;
                        while m1 >= -j1 {
                            let m2 = m - m1;
                            if m2.abs() <= j2 {
                                sum += su2_cgc_f64(h(j1), h(m1), h(j2), h(m2), h(j), h(m))
                                    * su2_cgc_f64(h(j1), h(m1), h(j2), h(m2), h(jp), h(m));
                            }
                            m1 -= 2;
                        }
                        let expect = if j == jp { 1.0 } else { 0.0 };
                        prop_assert!((sum - expect).abs() < 1e-12);
                    }
                    jp += 2;
                }
                j += 2;
            }
        }

        #[test]
        fn exchange_symmetry(j1 in 0i32..6, j2 in 0i32..6, a in 0i32..6, b in 0i32..6) {
            let m1 = j1 - 2 * (a % (j1 + 1));
            let m2 = j2 - 2 * (b % (j2 + 1));
            let mut j = (j1 - j2).abs();
            while j <= j1 + j2 {
                if (m1 + m2).abs() <= j {
                    let x = cg(j1, m1, j2, m2, j, m1 + m2);
                    let y = cg(j2, m2, j1, m1, j, m1 + m2);
                    let phase = if ((j1 + j2 - j) / 2) % 2 == 0 { 1 } else { -1 };
                    prop_assert_eq!(if phase == 1 { x.clone() } else { -x.clone() }, y);
                }
                j += 2;
            }
        }
    }
}
