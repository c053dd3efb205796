//! The defining three-dimensional representation: Gell-Mann matrices, the
//! structure constants `f_abc` and `d_abc`, the Cartan–Weyl generators
//! `A^i_k`, and the conjugate triplet with its canonical phase fix.

use alloc::vec::Vec;

use nalgebra::{Complex, Matrix3};
#[allow(unused_imports)] // float methods come from here when std is absent
use num_traits::Float;

use crate::scalar::{rat, SurdValue};

/// A 3×3 complex matrix of floats.
pub type C3 = Matrix3<Complex<f64>>;

/// One Gell-Mann matrix held exactly: a scale (`1` or `1/√3`) times a matrix
/// of Gaussian integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GellMann {
    /// Common factor of all entries.
    pub scale: SurdValue,
    /// Entries as `(real, imaginary)` integer pairs.
    pub entries: [[(i8, i8); 3]; 3],
}

impl GellMann {
    /// Float copy.
    pub fn to_c3(&self) -> C3 {
        let s = self.scale.to_f64();
        C3::from_fn(|r, c| {
            let (re, im) = self.entries[r][c];
            Complex::new(re as f64 * s, im as f64 * s)
        })
    }
}

/// Fixed data of the defining representation.
#[derive(Clone, Debug)]
pub struct FundamentalData {
    lambdas: [GellMann; 8],
    f: Vec<([u8; 3], SurdValue)>,
    d: Vec<([u8; 3], SurdValue)>,
}

fn diag(a: i8, b: i8, c: i8) -> [[(i8, i8); 3]; 3] {
    let mut e = [[(0, 0); 3]; 3];
    e[0][0] = (a, 0);
    e[1][1] = (b, 0);
    e[2][2] = (c, 0);
    e
}

fn pair(r: usize, c: usize, imaginary: bool) -> [[(i8, i8); 3]; 3] {
    let mut e = [[(0, 0); 3]; 3];
    if imaginary {
        e[r][c] = (0, -1);
        e[c][r] = (0, 1);
    } else {
        e[r][c] = (1, 0);
        e[c][r] = (1, 0);
    }
    e
}

fn surd(sign: i8, n: i64, d: i64) -> SurdValue {
    SurdValue::new(sign, rat(n, d)).expect("non-negative radicand")
}

impl Default for FundamentalData {
    fn default() -> Self {
        Self::new()
    }
}

impl FundamentalData {
    /// Build the tables.
    pub fn new() -> Self {
        let one = SurdValue::one();
        let lambdas = [
            GellMann { scale: one.clone(), entries: pair(0, 1, false) },
            GellMann { scale: one.clone(), entries: pair(0, 1, true) },
            GellMann { scale: one.clone(), entries: diag(1, -1, 0) },
            GellMann { scale: one.clone(), entries: pair(0, 2, false) },
            GellMann { scale: one.clone(), entries: pair(0, 2, true) },
            GellMann { scale: one.clone(), entries: pair(1, 2, false) },
            GellMann { scale: one.clone(), entries: pair(1, 2, true) },
            GellMann { scale: surd(1, 1, 3), entries: diag(1, 1, -2) },
        ];
        let half = surd(1, 1, 4);
        let mhalf = surd(-1, 1, 4);
        let f = alloc::vec![
            ([1, 2, 3], one.clone()),
            ([1, 4, 7], half.clone()),
            ([1, 5, 6], mhalf.clone()),
            ([2, 4, 6], half.clone()),
            ([2, 5, 7], half.clone()),
            ([3, 4, 5], half.clone()),
            ([3, 6, 7], mhalf.clone()),
            ([4, 5, 8], surd(1, 3, 4)),
            ([6, 7, 8], surd(1, 3, 4)),
        ];
        let r3 = surd(1, 1, 3);
        let m2r3 = surd(-1, 1, 12);
        let d = alloc::vec![
            ([1, 1, 8], r3.clone()),
            ([2, 2, 8], r3.clone()),
            ([3, 3, 8], r3.clone()),
            ([8, 8, 8], -r3.clone()),
            ([4, 4, 8], m2r3.clone()),
            ([5, 5, 8], m2r3.clone()),
            ([6, 6, 8], m2r3.clone()),
            ([7, 7, 8], m2r3.clone()),
            ([1, 4, 6], half.clone()),
            ([1, 5, 7], half.clone()),
            ([2, 5, 6], half.clone()),
            ([3, 4, 4], half.clone()),
            ([3, 5, 5], half.clone()),
            ([2, 4, 7], mhalf.clone()),
            ([3, 6, 6], mhalf.clone()),
            ([3, 7, 7], mhalf.clone()),
        ];
        Self { lambdas, f, d }
    }

    /// Gell-Mann matrix `λ_k`, `k ∈ 1..=8`.
    pub fn lambda(&self, k: usize) -> &GellMann {
        &self.lambdas[k - 1]
    }

    /// Totally antisymmetric structure constant `f_abc` (indices `1..=8`).
    pub fn f(&self, a: u8, b: u8, c: u8) -> SurdValue {
        let mut idx = [a, b, c];
        let mut sign = 1i8;
        // Bubble sort, tracking the permutation parity.
        for i in 0..3 {
            for j in 0..2 - i {
                if idx[j] > idx[j + 1] {
                    idx.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        match self.f.iter().find(|(k, _)| *k == idx) {
            Some((_, v)) if sign > 0 => v.clone(),
            Some((_, v)) => -v.clone(),
            None => SurdValue::zero(),
        }
    }

    /// Totally symmetric constant `d_abc` (indices `1..=8`).
    pub fn d(&self, a: u8, b: u8, c: u8) -> SurdValue {
        let mut idx = [a, b, c];
        idx.sort_unstable();
        self.d
            .iter()
            .find(|(k, _)| *k == idx)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    }

    /// Nonzero `f_abc` with `a < b < c`.
    pub fn f_table(&self) -> &[([u8; 3], SurdValue)] {
        &self.f
    }

    /// Nonzero `d_abc` with `a ≤ b ≤ c`.
    pub fn d_table(&self) -> &[([u8; 3], SurdValue)] {
        &self.d
    }

    /// Cartan–Weyl generator `A^i_k` (indices `1..=3`) of the triplet as a
    /// float matrix: `A^i_k = e_ik` off the diagonal and the traceless
    /// combinations `A^1_1 = F8/√3 + F3`, `A^2_2 = F8/√3 − F3`,
    /// `A^3_3 = −2F8/√3` on it.
    pub fn cartan_weyl(&self, i: usize, k: usize) -> C3 {
        let f = |n: usize| self.lambda(n).to_c3() * Complex::new(0.5, 0.0);
        let im = Complex::new(0.0, 1.0);
        let inv_r3 = Complex::new(1.0 / 3f64.sqrt(), 0.0);
        match (i, k) {
            (1, 2) => f(1) + f(2) * im,
            (2, 1) => f(1) - f(2) * im,
            (1, 3) => f(4) + f(5) * im,
            (3, 1) => f(4) - f(5) * im,
            (2, 3) => f(6) + f(7) * im,
            (3, 2) => f(6) - f(7) * im,
            (1, 1) => f(8) * inv_r3 + f(3),
            (2, 2) => f(8) * inv_r3 - f(3),
            (3, 3) => f(8) * inv_r3 * Complex::new(-2.0, 0.0),
            _ => panic!("Cartan-Weyl indices must lie in 1..=3"),
        }
    }

    /// `A^i_k` of the conjugate triplet in its natural basis `y^1, y^2, y^3`:
    /// the negative transpose, `A^i_k|conj = −A^k_i|triplet`.
    pub fn conjugate_cartan_weyl(&self, i: usize, k: usize) -> C3 {
        -self.cartan_weyl(k, i)
    }
}

/// Rewrite a conjugate-triplet matrix from the natural basis `y^1, y^2, y^3`
/// into the canonical `(0,1)` basis.
///
/// The canonical vectors are `η_1 = −y^1`, `η_2 = y^2`, `η_3 = y^3`; in the
/// canonical ordering (descending hypercharge, then isospin projection) they
/// appear as `(η_3, η_2, η_1)`.  The sign on `η_1` is what makes all `I±`,
/// `K±`, `L±` matrix elements agree with the general lattice formulas.
pub fn to_canonical_antitriplet(m: &C3) -> C3 {
    let perm = [2usize, 1, 0];
    let sign = [1.0, 1.0, -1.0];
    C3::from_fn(|r, c| m[(perm[r], perm[c])] * Complex::new(sign[r] * sign[c], 0.0))
}
