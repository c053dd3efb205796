//! Irreducible representations `D(P,Q)` of SU(3): dimensions, Casimir
//! invariants, and the weight lattice in isospin–hypercharge coordinates.
//!
//! Each canonical basis state is labelled by total isospin `i`, its third
//! component `i3` and hypercharge `y`.  In the `(i, y)` plane the occupied
//! nodes fill a parallelogram with corners
//!
//! * `A = (Q/2, −(2P+Q)/3)` (bottom),
//! * `B = ((P+Q)/2, (P−Q)/3)` (rightmost),
//! * `C = (P/2, (P+2Q)/3)` (top),
//! * `D = (0, 2(Q−P)/3)` (leftmost, clipped at `i = 0`),
//!
//! and at each node every `i3 ∈ {−i, …, i}` occurs exactly once.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::scalar::{int, rat, Half, Rational, Third};

/// Errors raised by weight-lattice queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    /// The hypercharge lies outside `[−(2P+Q)/3, (P+2Q)/3]` or is not on the
    /// irrep's hypercharge lattice.
    #[error("hypercharge {y} is not on the lattice of {irrep}")]
    YOutOfRange {
        /// The irrep queried.
        irrep: IrrepLabel,
        /// The offending hypercharge.
        y: Third,
    },
}

/// An irrep label `(P, Q)`: `P` upper (quark-like) and `Q` lower
/// (antiquark-like) symmetric indices.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IrrepLabel {
    /// Number of fundamental-triplet indices.
    pub p: u32,
    /// Number of conjugate-triplet indices.
    pub q: u32,
}

impl IrrepLabel {
    /// The irrep `(p, q)`.
    pub const fn new(p: u32, q: u32) -> Self {
        Self { p, q }
    }

    fn pi(self) -> i32 {
        self.p as i32
    }

    fn qi(self) -> i32 {
        self.q as i32
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// A canonical basis state `|i, i3, y⟩` of some irrep.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CanonicalState {
    /// Total isospin.
    pub i: Half,
    /// Third component of isospin.
    pub i3: Half,
    /// Hypercharge.
    pub y: Third,
}

impl CanonicalState {
    /// The state `|i, i3, y⟩`.
    pub const fn new(i: Half, i3: Half, y: Third) -> Self {
        Self { i, i3, y }
    }

    /// `6·(i3 + y/2)`: six times the electric-charge-like combination, an integer.
    pub fn charge6(&self) -> i32 {
        3 * self.i3.0 + self.y.0
    }
}

/// Basis order: descending `y`, then descending `i`, then descending `i3`.
impl Ord for CanonicalState {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .y
            .cmp(&self.y)
            .then(other.i.cmp(&self.i))
            .then(other.i3.cmp(&self.i3))
    }
}

impl PartialOrd for CanonicalState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}, {}, {}⟩", self.i, self.i3, self.y)
    }
}

/// Dimension `(P+1)(Q+1)(P+Q+2)/2`.
pub fn dimension(s: IrrepLabel) -> u64 {
    let (p, q) = (s.p as u64, s.q as u64);
    (p + 1) * (q + 1) * (p + q + 2) / 2
}

/// Quadratic Casimir eigenvalue `f = (P² + PQ + Q²)/3 + P + Q`.
pub fn casimir_f(s: IrrepLabel) -> Rational {
    let (p, q) = (s.p as i64, s.q as i64);
    rat(p * p + p * q + q * q, 3) + int(p + q)
}

/// Cubic Casimir eigenvalue `g = (P−Q)(2P+Q+3)(P+2Q+3)/9`.
pub fn casimir_g(s: IrrepLabel) -> Rational {
    let (p, q) = (s.p as i64, s.q as i64);
    rat((p - q) * (2 * p + q + 3) * (p + 2 * q + 3), 9)
}

/// The highest-weight state annihilated by `K+` and `L−`: the rightmost
/// corner `i = i3 = (P+Q)/2`, `y = (P−Q)/3`.
pub fn highest_weight(s: IrrepLabel) -> CanonicalState {
    let i = Half(s.pi() + s.qi());
    CanonicalState::new(i, i, Third(s.pi() - s.qi()))
}

/// The top state annihilated by all three raising operators `I+`, `K+`, `L+`:
/// `i = i3 = P/2`, `y = (P+2Q)/3`.  Couplings are seeded from this state.
pub fn top_state(s: IrrepLabel) -> CanonicalState {
    let i = Half(s.pi());
    CanonicalState::new(i, i, Third(s.pi() + 2 * s.qi()))
}

/// Closed hypercharge range `(y_min, y_max) = (−(2P+Q)/3, (P+2Q)/3)`.
pub fn y_range(s: IrrepLabel) -> (Third, Third) {
    (Third(-(2 * s.pi() + s.qi())), Third(s.pi() + 2 * s.qi()))
}

/// `true` when `y` is an allowed hypercharge of the irrep.
pub fn y_admissible(s: IrrepLabel, y: Third) -> bool {
    let (lo, hi) = y_range(s);
    lo <= y && y <= hi && (y.0 - hi.0) % 3 == 0
}

/// All hypercharges of the irrep, descending.
pub fn hypercharges(s: IrrepLabel) -> impl Iterator<Item = Third> {
    let (lo, hi) = y_range(s);
    (0..)
        .map(move |n| Third(hi.0 - 3 * n))
        .take_while(move |y| *y >= lo)
}

/// Isospin range `(i_min, i_max)` of the lattice row at hypercharge `y`.
///
/// `i_min = |(P−Q)/3 + y/2|`; `i_max` follows the upper-right edge
/// `i = (2P+Q)/3 − y/2` above `y = (P−Q)/3` and the lower-right edge
/// `i = (P+2Q)/3 + y/2` below it.  Successive isospins differ by one.
pub fn i_range(s: IrrepLabel, y: Third) -> Result<(Half, Half), LatticeError> {
    if !y_admissible(s, y) {
        return Err(LatticeError::YOutOfRange { irrep: s, y });
    }
    let (p, q, y3) = (s.pi(), s.qi(), y.0);
    let min2 = (2 * (p - q) + y3).abs();
    let max2 = if y3 >= p - q {
        2 * (2 * p + q) - y3
    } else {
        2 * (p + 2 * q) + y3
    };
    debug_assert!(min2 % 3 == 0 && max2 % 3 == 0);
    Ok((Half(min2 / 3), Half(max2 / 3)))
}

/// The isospins present at hypercharge `y` (ascending); empty if `y` is not
/// on the lattice.
pub fn isospins_at(s: IrrepLabel, y: Third) -> impl Iterator<Item = Half> {
    let (lo, hi) = i_range(s, y).unwrap_or((Half(1), Half(0)));
    (0..)
        .map(move |n| Half(lo.0 + 2 * n))
        .take_while(move |i| *i <= hi)
}

/// `true` when `(i, y)` is a node of the weight lattice.
pub fn contains_node(s: IrrepLabel, i: Half, y: Third) -> bool {
    match i_range(s, y) {
        Ok((lo, hi)) => lo <= i && i <= hi && (i.0 - lo.0) % 2 == 0,
        Err(_) => false,
    }
}

/// `true` when the state belongs to the irrep's canonical basis.
pub fn contains(s: IrrepLabel, st: &CanonicalState) -> bool {
    contains_node(s, st.i, st.y) && st.i3.abs() <= st.i && (st.i.0 - st.i3.0) % 2 == 0
}

/// All lattice nodes `(i, y)`, ordered by descending `y` then descending `i`.
pub fn nodes(s: IrrepLabel) -> Vec<(Half, Third)> {
    let mut out = Vec::new();
    for y in hypercharges(s) {
        let mut is: Vec<Half> = isospins_at(s, y).collect();
        is.reverse();
        out.extend(is.into_iter().map(|i| (i, y)));
    }
    out
}

/// The full canonical basis in the fixed order (descending `y`, `i`, `i3`).
/// Its length equals [`dimension`].
pub fn enumerate_basis(s: IrrepLabel) -> Vec<CanonicalState> {
    let mut out = Vec::with_capacity(dimension(s) as usize);
    for (i, y) in nodes(s) {
        let mut i3 = i;
        while i3 >= -i {
            out.push(CanonicalState::new(i, i3, y));
            i3 = i3 - Half(2);
        }
    }
    out
}

/// Position of a state in [`enumerate_basis`] order, by binary search.
pub fn basis_index(basis: &[CanonicalState], st: &CanonicalState) -> Option<usize> {
    basis.binary_search(st).ok()
}

/// Number of basis states with weight `(i3, y)`.
pub fn weight_multiplicity(s: IrrepLabel, i3: Half, y: Third) -> u32 {
    isospins_at(s, y)
        .filter(|i| i3.abs() <= *i && (i.0 - i3.0) % 2 == 0)
        .count() as u32
}

/// The conjugate irrep `(Q, P)`.
pub fn conjugate(s: IrrepLabel) -> IrrepLabel {
    IrrepLabel::new(s.q, s.p)
}

/// Triality `(P − Q) mod 3`, represented in `{−1, 0, 1}`.
pub fn triality(s: IrrepLabel) -> i8 {
    match (s.pi() - s.qi()).rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}
