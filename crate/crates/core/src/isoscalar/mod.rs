//! Isoscalar factors of SU(3) ⊃ SU(2) × U(1).
//!
//! A canonical state of `D(s)` inside `D(s1) ⊗ D(s2)` factorises as
//!
//! ```text
//! |s γ; i i3 y⟩ = Σ_{μ j k} α^{s γ}_{i y}(μ, j, k) |(μ, j, k); i, i3⟩,
//! ```
//!
//! where `|(μ, j, k); i, i3⟩` is an isospin-coupled pair of factor states with
//! hypercharges `μ` and `y − μ` (see [`coupled`]).  The numbers `α` — one
//! *row* per lattice node `(i, y)` of `s` and per multiplicity index `γ` —
//! are the isoscalar factors.
//!
//! Two routes compute them:
//!
//! * [`recurrence`]: the top row is the null space of the raising
//!   operators; the remaining rows follow by lowering with `K−`.  Runs in
//!   floating point and applies to every coupling.
//! * [`closed_form`]: exact factorial formulas for `(P,0)⊗(0,Q) → (P,Q)`,
//!   `(P1,0)⊗(P2,0) → (P1+P2,0)`, its conjugate, and the scalar in
//!   `(P,Q)⊗(Q,P)`.

pub mod closed_form;
pub mod coupled;
pub mod recurrence;

use alloc::vec::Vec;
use core::fmt;

use crate::irrep::{contains_node, hypercharges, isospins_at, y_admissible, IrrepLabel};
use crate::scalar::{reconstruct_unit_vector, Half, SurdValue, Third};
use crate::su2::triangle;

pub use closed_form::{
    closed_form_pp, closed_form_pq, closed_form_qq, closed_form_table, conjugate_table,
    conjugation_phase, scalar_factors,
};
pub use recurrence::{casimir_residual, casimir_rho, hw_solve, isoscalar_tables, lower_full_table};

/// Errors raised while computing isoscalar factors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsoscalarError {
    /// `s` does not occur in `s1 ⊗ s2`.
    #[error("{s} does not occur in {s1} ⊗ {s2}")]
    NotInSeries {
        /// First factor.
        s1: IrrepLabel,
        /// Second factor.
        s2: IrrepLabel,
        /// Requested irrep.
        s: IrrepLabel,
    },
    /// The top-row null space has the wrong dimension (an internal
    /// consistency failure).
    #[error("top-row solution space of {s} in {s1} ⊗ {s2} has dimension {found}, expected {expected}")]
    RankMismatch {
        /// First factor.
        s1: IrrepLabel,
        /// Second factor.
        s2: IrrepLabel,
        /// Target irrep.
        s: IrrepLabel,
        /// Series multiplicity.
        expected: u32,
        /// Dimension actually found.
        found: usize,
    },
    /// Both lowering routes into a row have a vanishing leading amplitude.
    #[error("no non-singular lowering step reaches node (i = {i}, y = {y}) of {s}")]
    PropagationSingularity {
        /// Target irrep.
        s: IrrepLabel,
        /// Isospin of the unreachable row.
        i: Half,
        /// Hypercharge of the unreachable row.
        y: Third,
    },
    /// `(i, y)` is not a node of the weight lattice of `s`.
    #[error("(i = {i}, y = {y}) is not a node of {s}")]
    BadState {
        /// Irrep queried.
        s: IrrepLabel,
        /// Isospin.
        i: Half,
        /// Hypercharge.
        y: Third,
    },
    /// `γ` is not below the multiplicity.
    #[error("multiplicity index {gamma} out of range (multiplicity {multiplicity})")]
    BadMultiplicityIndex {
        /// Requested index (zero-based).
        gamma: u32,
        /// Series multiplicity.
        multiplicity: u32,
    },
}

/// Labels `(μ, j, k)` of a coupled pair: the first factor sits at hypercharge
/// `μ` with isospin `j`, the second at `y − μ` with isospin `k`.
///
/// The derived order (ascending `μ`, then `j`, then `k`) is the order of the
/// entries of every row.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CouplingPoint {
    /// Hypercharge of the first factor.
    pub mu: Third,
    /// Isospin of the first factor.
    pub j: Half,
    /// Isospin of the second factor.
    pub k: Half,
}

impl CouplingPoint {
    /// The point `(μ, j, k)`.
    pub const fn new(mu: Third, j: Half, k: Half) -> Self {
        Self { mu, j, k }
    }
}

impl fmt::Display for CouplingPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(μ={}, j={}, k={})", self.mu, self.j, self.k)
    }
}

/// How a table was produced.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Exact factorial formula.
    ClosedForm,
    /// Null space at the top row followed by lowering recurrences.
    Recurrence,
    /// Brute-force reduction of the product space.
    Oracle,
}

impl Provenance {
    /// Lower-case name used in machine-readable output.
    pub fn name(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Recurrence => "recurrence",
            Provenance::Oracle => "oracle",
        }
    }
}

/// The isoscalar factors of one lattice node `(i, y)` of `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoscalarRow {
    /// Total isospin.
    pub i: Half,
    /// Total hypercharge.
    pub y: Third,
    /// Admissible coupling points, ascending.
    pub points: Vec<CouplingPoint>,
    /// Factor at each point.
    pub values: Vec<f64>,
    /// Exact factors, when known or reconstructed and verified.
    pub exact: Option<Vec<SurdValue>>,
}

impl IsoscalarRow {
    /// A row of floats; exact values are reconstructed when every entry is
    /// recognisably a signed square root of a rational and the squares sum
    /// to one exactly.
    pub fn from_floats(i: Half, y: Third, points: Vec<CouplingPoint>, values: Vec<f64>) -> Self {
        let exact = reconstruct_unit_vector(&values);
        Self {
            i,
            y,
            points,
            values,
            exact,
        }
    }

    /// The factor at `p` (zero when `p` is not an admissible point).
    pub fn get(&self, p: &CouplingPoint) -> f64 {
        self.points
            .binary_search(p)
            .map_or(0.0, |idx| self.values[idx])
    }

    /// The exact factor at `p`, when known.
    pub fn get_exact(&self, p: &CouplingPoint) -> Option<SurdValue> {
        let exact = self.exact.as_ref()?;
        Some(
            self.points
                .binary_search(p)
                .map_or_else(|_| SurdValue::zero(), |idx| exact[idx].clone()),
        )
    }

    /// `Σ α²`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// All isoscalar factors of one `(s1, s2, s, γ)`: a row per lattice node of
/// `s`, ordered by descending `y` then descending `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoscalarTable {
    /// First factor.
    pub s1: IrrepLabel,
    /// Second factor.
    pub s2: IrrepLabel,
    /// Coupled irrep.
    pub s: IrrepLabel,
    /// Multiplicity index (zero-based).
    pub gamma: u32,
    /// Rows, one per node of `s`.
    pub rows: Vec<IsoscalarRow>,
    /// How the table was computed.
    pub provenance: Provenance,
    /// Largest `|Σ α² − 1|` over the rows.
    pub max_norm_defect: f64,
}

impl IsoscalarTable {
    /// Assemble a table and record its worst normalisation defect.
    pub fn new(
        s1: IrrepLabel,
        s2: IrrepLabel,
        s: IrrepLabel,
        gamma: u32,
        mut rows: Vec<IsoscalarRow>,
        provenance: Provenance,
    ) -> Self {
        rows.sort_by(|a, b| b.y.cmp(&a.y).then(b.i.cmp(&a.i)));
        let max_norm_defect = rows
            .iter()
            .map(|r| (r.norm_sq() - 1.0).abs())
            .fold(0.0, f64::max);
        Self {
            s1,
            s2,
            s,
            gamma,
            rows,
            provenance,
            max_norm_defect,
        }
    }

    /// The row at node `(i, y)`.
    pub fn row(&self, i: Half, y: Third) -> Option<&IsoscalarRow> {
        self.rows.iter().find(|r| r.i == i && r.y == y)
    }
}

/// All coupling points `(μ, j, k)` that can contribute to total isospin `i`
/// at total hypercharge `y`, ascending.
pub fn row_lattice(s1: IrrepLabel, s2: IrrepLabel, i: Half, y: Third) -> Vec<CouplingPoint> {
    let mut out = Vec::new();
    for mu in hypercharges(s1) {
        let nu = y - mu;
        if !y_admissible(s2, nu) {
            continue;
        }
        for j in isospins_at(s1, mu) {
            for k in isospins_at(s2, nu) {
                if triangle(j, k, i) {
                    out.push(CouplingPoint::new(mu, j, k));
                }
            }
        }
    }
    out.sort();
    out
}

/// Coupling points of the top row `(i, y) = (P/2, (P+2Q)/3)` of `s`.
pub fn hw_lattice(
    s1: IrrepLabel,
    s2: IrrepLabel,
    s: IrrepLabel,
) -> Result<Vec<CouplingPoint>, IsoscalarError> {
    if crate::series::multiplicity(s1, s2, s) == 0 {
        return Err(IsoscalarError::NotInSeries { s1, s2, s });
    }
    let top = crate::irrep::top_state(s);
    Ok(row_lattice(s1, s2, top.i, top.y))
}

/// Check that `(i, y)` is a node of `s`.
pub(crate) fn require_node(s: IrrepLabel, i: Half, y: Third) -> Result<(), IsoscalarError> {
    if contains_node(s, i, y) {
        Ok(())
    } else {
        Err(IsoscalarError::BadState { s, i, y })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn l(p: u32, q: u32) -> IrrepLabel {
        IrrepLabel::new(p, q)
    }

    fn pt(mu3: i32, j2: i32, k2: i32) -> CouplingPoint {
        CouplingPoint::new(Third(mu3), Half(j2), Half(k2))
    }

    #[test]
    fn top_row_lattices() {
        assert_eq!(hw_lattice(l(1, 0), l(0, 1), l(1, 1)).unwrap(), vec![pt(1, 1, 0)]);
        assert_eq!(
            hw_lattice(l(1, 1), l(1, 1), l(3, 0)).unwrap(),
            vec![pt(0, 2, 1), pt(3, 1, 2)]
        );
        assert_eq!(
            hw_lattice(l(1, 1), l(1, 1), l(1, 1)).unwrap(),
            vec![pt(0, 0, 1), pt(0, 2, 1), pt(3, 1, 0), pt(3, 1, 2)]
        );
        assert_eq!(hw_lattice(l(1, 1), l(1, 1), l(2, 2)).unwrap(), vec![pt(3, 1, 1)]);
        assert!(matches!(
            hw_lattice(l(1, 1), l(1, 1), l(2, 0)),
            Err(IsoscalarError::NotInSeries { .. })
        ));
    }

    #[test]
    fn row_lookup() {
        let row = IsoscalarRow::from_floats(
            Half(1),
            Third(0),
            vec![pt(0, 0, 2), pt(3, 1, 1)],
            vec![0.6, -0.8],
        );
        assert_eq!(row.get(&pt(3, 1, 1)), -0.8);
        assert_eq!(row.get(&pt(3, 1, 3)), 0.0);
        assert!(row.exact.is_some());
        assert!((row.norm_sq() - 1.0).abs() < 1e-15);
    }
}
