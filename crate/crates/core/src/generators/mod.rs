//! Matrix elements of the SU(3) generators in the canonical basis of any
//! irrep `D(P,Q)`.
//!
//! The isospin ladders act as in SU(2).  The `K` and `L` ladders change
//! hypercharge by one unit and isospin by one half; their amplitudes factor
//! into an SU(2) geometric part and two reduced amplitudes `χ_{iy}` (isospin
//! up) and `κ_{iy}` (isospin down):
//!
//! ```text
//! K+|i i3 y⟩ =  √((i+i3+1)/(2i+1)) χ |i+½, i3+½, y+1⟩ + √((i−i3)/(2i)) κ |i−½, i3+½, y+1⟩
//! L+|i i3 y⟩ =  √((i−i3+1)/(2i+1)) χ |i+½, i3−½, y+1⟩ − √((i+i3)/(2i)) κ |i−½, i3−½, y+1⟩
//! ```
//!
//! with `χ² = z²/(2(i+1))`, `κ² = w²/(2i+1)` and
//!
//! ```text
//! z² = ((2P+Q)/3 − i − y/2)((P+2Q)/3 + i + y/2 + 2)((P−Q)/3 + i + y/2 + 1)
//! w² = ((Q−P)/3 + i − y/2)((P+2Q)/3 − i + y/2 + 1)((2P+Q)/3 + i − y/2 + 1).
//! ```
//!
//! The lowering operators are the transposes, so every matrix element is
//! real and the `I±`, `K±` amplitudes `√(…)χ`, `√(…)κ` are non-negative.

pub mod fundamental;

use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
#[allow(unused_imports)] // float methods come from here when std is absent
use num_traits::Float;

use crate::irrep::{basis_index, contains, contains_node, enumerate_basis, CanonicalState, IrrepLabel};
use crate::linalg::SparseColumns;
use crate::scalar::{rat, Half, Rational, SurdValue, Third};

/// Errors raised by generator queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    /// `(i, y)` is not a node of the irrep's weight diagram.
    #[error("(i, y) = ({i}, {y}) lies outside the weight diagram of {irrep}")]
    OutsideDiagram {
        /// Irrep queried.
        irrep: IrrepLabel,
        /// Isospin.
        i: Half,
        /// Hypercharge.
        y: Third,
    },
    /// The state is not in the irrep's canonical basis.
    #[error("{state} is not a basis state of {irrep}")]
    BadState {
        /// Irrep queried.
        irrep: IrrepLabel,
        /// Offending state.
        state: CanonicalState,
    },
}

/// The eight generators in ladder form.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Isospin raising `I+ = F1 + iF2`.
    IPlus,
    /// Isospin lowering `I− = F1 − iF2`.
    IMinus,
    /// `K+ = F4 + iF5`: raises `i3` by ½ and `y` by 1.
    KPlus,
    /// `K− = F4 − iF5`.
    KMinus,
    /// `L+ = F6 + iF7`: lowers `i3` by ½ and raises `y` by 1.
    LPlus,
    /// `L− = F6 − iF7`.
    LMinus,
    /// Isospin projection `I3 = F3`.
    I3,
    /// Hypercharge `Y = (2/√3) F8`.
    Y,
}

impl Generator {
    /// All eight, in a fixed order.
    pub const ALL: [Generator; 8] = [
        Generator::IPlus,
        Generator::IMinus,
        Generator::KPlus,
        Generator::KMinus,
        Generator::LPlus,
        Generator::LMinus,
        Generator::I3,
        Generator::Y,
    ];

    /// Short symbol, e.g. `"K+"`.
    pub fn symbol(self) -> &'static str {
        match self {
            Generator::IPlus => "I+",
            Generator::IMinus => "I-",
            Generator::KPlus => "K+",
            Generator::KMinus => "K-",
            Generator::LPlus => "L+",
            Generator::LMinus => "L-",
            Generator::I3 => "I3",
            Generator::Y => "Y",
        }
    }

    /// Parse a symbol produced by [`Generator::symbol`].
    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.symbol() == s)
    }

    /// The Hermitian adjoint (`I+ ↔ I−` and so on; `I3`, `Y` self-adjoint).
    pub fn adjoint(self) -> Self {
        match self {
            Generator::IPlus => Generator::IMinus,
            Generator::IMinus => Generator::IPlus,
            Generator::KPlus => Generator::KMinus,
            Generator::KMinus => Generator::KPlus,
            Generator::LPlus => Generator::LMinus,
            Generator::LMinus => Generator::LPlus,
            g => g,
        }
    }

    /// Weight shift `(Δi3, Δy)` produced by the generator.
    pub fn shift(self) -> (Half, Third) {
        match self {
            Generator::IPlus => (Half(2), Third(0)),
            Generator::IMinus => (Half(-2), Third(0)),
            Generator::KPlus => (Half(1), Third(3)),
            Generator::KMinus => (Half(-1), Third(-3)),
            Generator::LPlus => (Half(-1), Third(3)),
            Generator::LMinus => (Half(1), Third(-3)),
            Generator::I3 | Generator::Y => (Half(0), Third(0)),
        }
    }

    /// The Cartan–Weyl generator `A^i_k` expressed through ladders.  Diagonal
    /// entries are combinations of `I3` and `Y` and are returned as `None`;
    /// see [`GeneratorMatrixSet::cartan_weyl`].
    pub fn from_cartan_weyl(i: usize, k: usize) -> Option<Self> {
        match (i, k) {
            (1, 2) => Some(Generator::IPlus),
            (2, 1) => Some(Generator::IMinus),
            (1, 3) => Some(Generator::KPlus),
            (3, 1) => Some(Generator::KMinus),
            (2, 3) => Some(Generator::LPlus),
            (3, 2) => Some(Generator::LMinus),
            _ => None,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Isospin lowering amplitude `B_{i,i3} = √(i(i+1) − i3(i3−1))`, so that
/// `I−|i, i3⟩ = B_{i,i3} |i, i3−1⟩`.
pub fn isospin_ladder(i: Half, i3: Half) -> SurdValue {
    let (a, b) = (i.0 as i64, i3.0 as i64);
    SurdValue::sqrt(rat(a * (a + 2) - b * (b - 2), 4)).expect("|i3| ≤ i gives a non-negative radicand")
}

/// The three linear factors of `z²` and of `w²`, each scaled by 6.
fn zw_factors(s: IrrepLabel, i: Half, y: Third) -> ([i64; 3], [i64; 3]) {
    let (p, q) = (s.p as i64, s.q as i64);
    let (i2, y3) = (i.0 as i64, y.0 as i64);
    let z = [
        2 * (2 * p + q) - 3 * i2 - y3,
        2 * (p + 2 * q) + 3 * i2 + y3 + 12,
        2 * (p - q) + 3 * i2 + y3 + 6,
    ];
    let w = [
        2 * (q - p) + 3 * i2 - y3,
        2 * (p + 2 * q) - 3 * i2 + y3 + 6,
        2 * (2 * p + q) + 3 * i2 - y3 + 6,
    ];
    (z, w)
}

/// The squared reduced amplitudes `(z², w²)` at node `(i, y)`.
pub fn zw_squared(s: IrrepLabel, i: Half, y: Third) -> Result<(Rational, Rational), GeneratorError> {
    if !contains_node(s, i, y) {
        return Err(GeneratorError::OutsideDiagram { irrep: s, i, y });
    }
    let (z, w) = zw_factors(s, i, y);
    Ok((rat(z[0] * z[1] * z[2], 216), rat(w[0] * w[1] * w[2], 216)))
}

/// Reduced amplitudes `(χ, κ)` at node `(i, y)`, both taken non-negative:
/// `χ² = z²/(2(i+1))`, `κ² = w²/(2i+1)`.
pub fn chi_kappa(s: IrrepLabel, i: Half, y: Third) -> Result<(SurdValue, SurdValue), GeneratorError> {
    let (z2, w2) = zw_squared(s, i, y)?;
    let i2 = i.0 as i64;
    let chi = SurdValue::sqrt(z2 / rat(i2 + 2, 1)).expect("z² ≥ 0 inside the diagram");
    let kappa = SurdValue::sqrt(w2 / rat(i2 + 1, 1)).expect("w² ≥ 0 inside the diagram");
    Ok((chi, kappa))
}

/// Squared `(χ, κ)` in floating point, from exact integer factors.
fn chi_kappa_sq_f64(s: IrrepLabel, i: Half, y: Third) -> (f64, f64) {
    let (z, w) = zw_factors(s, i, y);
    let i2 = i.0 as f64;
    let z2 = (z[0] * z[1] * z[2]) as f64 / 216.0;
    let w2 = (w[0] * w[1] * w[2]) as f64 / 216.0;
    (z2 / (i2 + 2.0), w2 / (i2 + 1.0))
}

/// Amplitudes of `K+` and `L+` on one canonical state.
///
/// * `a_plus`: `K+` to `|i+½, i3+½, y+1⟩`
/// * `b_plus`: `K+` to `|i−½, i3+½, y+1⟩`
/// * `c_plus`: `L+` to `|i+½, i3−½, y+1⟩`
/// * `d_plus`: `L+` to `|i−½, i3−½, y+1⟩`
///
/// Amplitudes towards states outside the irrep vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderCoefficients {
    /// `K+`, isospin up.
    pub a_plus: SurdValue,
    /// `K+`, isospin down.
    pub b_plus: SurdValue,
    /// `L+`, isospin up.
    pub c_plus: SurdValue,
    /// `L+`, isospin down.
    pub d_plus: SurdValue,
}

/// Amplitudes of `K+` and `L+` on `state`.
pub fn ladder_coefficients(s: IrrepLabel, state: &CanonicalState) -> Result<LadderCoefficients, GeneratorError> {
    if !contains(s, state) {
        return Err(GeneratorError::BadState { irrep: s, state: *state });
    }
    let (chi, kappa) = chi_kappa(s, state.i, state.y)?;
    let (i2, m2) = (state.i.0 as i64, state.i3.0 as i64);
    let geo = |num: i64, den: i64| -> SurdValue {
        if den == 0 || num == 0 {
            SurdValue::zero()
        } else {
            SurdValue::sqrt(rat(num, den)).expect("non-negative geometric factor")
        }
    };
    let coeffs = LadderCoefficients {
        a_plus: &geo(i2 + m2 + 2, 2 * (i2 + 1)) * &chi,
        b_plus: &geo(i2 - m2, 2 * i2) * &kappa,
        c_plus: &geo(i2 - m2 + 2, 2 * (i2 + 1)) * &chi,
        d_plus: -(&geo(i2 + m2, 2 * i2) * &kappa),
    };
    debug_assert!(targets_consistent(s, state, &coeffs));
    Ok(coeffs)
}

fn targets_consistent(s: IrrepLabel, st: &CanonicalState, c: &LadderCoefficients) -> bool {
    let t = |di: i32, dm: i32| CanonicalState::new(st.i + Half(di), st.i3 + Half(dm), st.y + Third::ONE);
    [(&c.a_plus, t(1, 1)), (&c.b_plus, t(-1, 1)), (&c.c_plus, t(1, -1)), (&c.d_plus, t(-1, -1))]
        .iter()
        .all(|(v, target)| v.is_zero() || contains(s, target))
}

/// Nonzero amplitudes `⟨t | g | state⟩`, exactly.  Amplitudes for states
/// outside the irrep are dropped (and vanish identically).
pub fn apply(s: IrrepLabel, g: Generator, state: &CanonicalState) -> Result<Vec<(CanonicalState, SurdValue)>, GeneratorError> {
    if !contains(s, state) {
        return Err(GeneratorError::BadState { irrep: s, state: *state });
    }
    let st = *state;
    let at = |di: i32, dm: i32, dy: i32| CanonicalState::new(st.i + Half(di), st.i3 + Half(dm), st.y + Third(dy));
    let mut out: Vec<(CanonicalState, SurdValue)> = Vec::with_capacity(2);
    match g {
        Generator::I3 => out.push((st, SurdValue::from_rational(&st.i3.to_rational()))),
        Generator::Y => out.push((st, SurdValue::from_rational(&st.y.to_rational()))),
        Generator::IPlus => out.push((at(0, 2, 0), isospin_ladder(st.i, st.i3 + Half(2)))),
        Generator::IMinus => out.push((at(0, -2, 0), isospin_ladder(st.i, st.i3))),
        Generator::KPlus | Generator::LPlus => {
            let c = ladder_coefficients(s, &st)?;
            if g == Generator::KPlus {
                out.push((at(1, 1, 3), c.a_plus));
                out.push((at(-1, 1, 3), c.b_plus));
            } else {
                out.push((at(1, -1, 3), c.c_plus));
                out.push((at(-1, -1, 3), c.d_plus));
            }
        }
        Generator::KMinus => {
            // ⟨t|K−|st⟩ = ⟨st|K+|t⟩ for t = |i∓½, i3−½, y−1⟩.
            let lo = at(-1, -1, -3);
            if contains(s, &lo) {
                out.push((lo, ladder_coefficients(s, &lo)?.a_plus));
            }
            let hi = at(1, -1, -3);
            if contains(s, &hi) {
                out.push((hi, ladder_coefficients(s, &hi)?.b_plus));
            }
        }
        Generator::LMinus => {
            let lo = at(-1, 1, -3);
            if contains(s, &lo) {
                out.push((lo, ladder_coefficients(s, &lo)?.c_plus));
            }
            let hi = at(1, 1, -3);
            if contains(s, &hi) {
                out.push((hi, ladder_coefficients(s, &hi)?.d_plus));
            }
        }
    }
    out.retain(|(t, v)| !v.is_zero() && contains(s, t));
    Ok(out)
}

/// Floating-point amplitudes of `K+`/`L+` on a state (unchecked fast path).
fn ladder_f64(s: IrrepLabel, st: &CanonicalState) -> [f64; 4] {
    let (chi2, kappa2) = chi_kappa_sq_f64(s, st.i, st.y);
    let (i2, m2) = (st.i.0 as f64, st.i3.0 as f64);
    let chi = chi2.max(0.0).sqrt();
    let kappa = kappa2.max(0.0).sqrt();
    let geo = |num: f64, den: f64| if den == 0.0 || num <= 0.0 { 0.0 } else { (num / den).sqrt() };
    [
        geo(i2 + m2 + 2.0, 2.0 * (i2 + 1.0)) * chi,
        geo(i2 - m2, 2.0 * i2) * kappa,
        geo(i2 - m2 + 2.0, 2.0 * (i2 + 1.0)) * chi,
        -geo(i2 + m2, 2.0 * i2) * kappa,
    ]
}

/// Floating-point mirror of [`apply`] for hot loops.  The state must belong
/// to the irrep; out-of-irrep targets are dropped.
pub fn apply_f64(s: IrrepLabel, g: Generator, st: &CanonicalState) -> Vec<(CanonicalState, f64)> {
    let at = |di: i32, dm: i32, dy: i32| CanonicalState::new(st.i + Half(di), st.i3 + Half(dm), st.y + Third(dy));
    let iso = |i: Half, i3: Half| {
        let (a, b) = (i.0 as f64, i3.0 as f64);
        ((a * (a + 2.0) - b * (b - 2.0)) / 4.0).max(0.0).sqrt()
    };
    let mut out: Vec<(CanonicalState, f64)> = Vec::with_capacity(2);
    match g {
        Generator::I3 => out.push((*st, st.i3.to_f64())),
        Generator::Y => out.push((*st, st.y.to_f64())),
        Generator::IPlus => out.push((at(0, 2, 0), iso(st.i, st.i3 + Half(2)))),
        Generator::IMinus => out.push((at(0, -2, 0), iso(st.i, st.i3))),
        Generator::KPlus => {
            let c = ladder_f64(s, st);
            out.push((at(1, 1, 3), c[0]));
            out.push((at(-1, 1, 3), c[1]));
        }
        Generator::LPlus => {
            let c = ladder_f64(s, st);
            out.push((at(1, -1, 3), c[2]));
            out.push((at(-1, -1, 3), c[3]));
        }
        Generator::KMinus => {
            let lo = at(-1, -1, -3);
            if contains(s, &lo) {
                out.push((lo, ladder_f64(s, &lo)[0]));
            }
            let hi = at(1, -1, -3);
            if contains(s, &hi) {
                out.push((hi, ladder_f64(s, &hi)[1]));
            }
        }
        Generator::LMinus => {
            let lo = at(-1, 1, -3);
            if contains(s, &lo) {
                out.push((lo, ladder_f64(s, &lo)[2]));
            }
            let hi = at(1, 1, -3);
            if contains(s, &hi) {
                out.push((hi, ladder_f64(s, &hi)[3]));
            }
        }
    }
    out.retain(|(t, v)| *v != 0.0 && contains(s, t));
    out
}

/// An exact column-sparse matrix: `cols[c]` lists `(row, value)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    /// Number of rows (and columns).
    pub dim: usize,
    /// Nonzero entries of each column.
    pub cols: Vec<Vec<(usize, SurdValue)>>,
}

impl SparseMatrix {
    /// Entry `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> SurdValue {
        self.cols[col]
            .iter()
            .find(|(r, _)| *r == row)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    }

    /// Float mirror.
    pub fn to_f64(&self) -> SparseColumns {
        SparseColumns {
            nrows: self.dim,
            cols: self
                .cols
                .iter()
                .map(|c| c.iter().map(|(r, v)| (*r, v.to_f64())).collect())
                .collect(),
        }
    }

    /// Dense float copy.
    pub fn to_dense(&self) -> DMatrix<f64> {
        self.to_f64().to_dense()
    }
}

/// The eight generator matrices of one irrep in its canonical basis.
#[derive(Clone, Debug)]
pub struct GeneratorMatrixSet {
    /// The irrep.
    pub irrep: IrrepLabel,
    /// Canonical basis, in the fixed order; row/column `n` is `basis[n]`.
    pub basis: Vec<CanonicalState>,
    exact: Vec<SparseMatrix>,
    float: Vec<SparseColumns>,
}

impl GeneratorMatrixSet {
    fn slot(g: Generator) -> usize {
        Generator::ALL.iter().position(|h| *h == g).expect("listed generator")
    }

    /// Exact matrix of `g`.
    pub fn exact(&self, g: Generator) -> &SparseMatrix {
        &self.exact[Self::slot(g)]
    }

    /// Float matrix of `g`.
    pub fn sparse(&self, g: Generator) -> &SparseColumns {
        &self.float[Self::slot(g)]
    }

    /// Dense float matrix of `g`.
    pub fn dense(&self, g: Generator) -> DMatrix<f64> {
        self.float[Self::slot(g)].to_dense()
    }

    /// Dense `A^i_k` (indices `1..=3`), including the diagonal combinations
    /// `A^1_1 = I3 + Y/2`, `A^2_2 = −I3 + Y/2`, `A^3_3 = −Y`.
    pub fn cartan_weyl(&self, i: usize, k: usize) -> DMatrix<f64> {
        if let Some(g) = Generator::from_cartan_weyl(i, k) {
            return self.dense(g);
        }
        let i3 = self.dense(Generator::I3);
        let y = self.dense(Generator::Y);
        match i {
            1 => &i3 + &y * 0.5,
            2 => &y * 0.5 - &i3,
            3 => -y,
            _ => panic!("Cartan-Weyl indices must lie in 1..=3"),
        }
    }

    /// Dimension of the irrep.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Build all eight generator matrices of `s` exactly, with float mirrors.
pub fn build_generator_matrices(s: IrrepLabel) -> GeneratorMatrixSet {
    let basis = enumerate_basis(s);
    let dim = basis.len();
    let mut exact = Vec::with_capacity(8);
    for g in Generator::ALL {
        let mut m = SparseMatrix { dim, cols: alloc::vec![Vec::new(); dim] };
        for (c, st) in basis.iter().enumerate() {
            for (t, v) in apply(s, g, st).expect("basis states are valid") {
                let r = basis_index(&basis, &t).expect("targets lie in the basis");
                m.cols[c].push((r, v));
            }
        }
        exact.push(m);
    }
    let float = exact.iter().map(SparseMatrix::to_f64).collect();
    GeneratorMatrixSet { irrep: s, basis, exact, float }
}

/// How far the generator matrices of one irrep are from an exact
/// representation.
#[derive(Copy, Clone, Debug, PartialEq, Default)]
pub struct AlgebraDefect {
    /// Largest entry of `[A^i_k, A^j_l] − δ_kj A^i_l + δ_il A^j_k`.
    pub commutator: f64,
    /// Largest entry of the quadratic and cubic Casimir matrices minus
    /// `f·1` and `g·1`.
    pub casimir: f64,
}

/// Check the commutation relations and both Casimir eigenvalues of `s` on
/// its float generator matrices.
pub fn algebra_defect(s: IrrepLabel) -> AlgebraDefect {
    use crate::irrep::{casimir_f, casimir_g};
    use crate::linalg::max_abs;
    use crate::scalar::rational_to_f64;

    let m = build_generator_matrices(s);
    let n = m.dim();
    let a: Vec<Vec<DMatrix<f64>>> = (1..=3).map(|i| (1..=3).map(|k| m.cartan_weyl(i, k)).collect()).collect();
    let mut out = AlgebraDefect::default();
    let mut f = DMatrix::zeros(n, n);
    let mut g = DMatrix::zeros(n, n);
    for i in 0..3 {
        for k in 0..3 {
            f += &a[i][k] * &a[k][i] * 0.5;
            for j in 0..3 {
                for l in 0..3 {
                    let mut rhs = &a[i][k] * &a[j][l] - &a[j][l] * &a[i][k];
                    if k == j {
                        rhs -= &a[i][l];
                    }
                    if i == l {
                        rhs += &a[j][k];
                    }
                    out.commutator = out.commutator.max(max_abs(&rhs));
                }
                g += (&a[i][j] * &a[k][i] * &a[j][k] + &a[j][i] * &a[i][k] * &a[k][j]) * 0.5;
            }
        }
    }
    let id = DMatrix::<f64>::identity(n, n);
    out.casimir = max_abs(&(f - &id * rational_to_f64(&casimir_f(s))))
        .max(max_abs(&(g - &id * rational_to_f64(&casimir_g(s)))));
    out
}
