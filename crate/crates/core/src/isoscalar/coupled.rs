//! Vectors in the product space `V(s1) ⊗ V(s2)` and the isospin-coupled
//! states used to define isoscalar factors:
//!
//! ```text
//! |(μ, j, k); i, M⟩ = Σ_m ⟨j m; k M−m | i M⟩ |s1; j m μ⟩ |s2; k M−m y−μ⟩.
//! ```
//!
//! Coupled states with distinct `(μ, j, k)` are orthonormal, so isoscalar
//! factors are read off as overlaps with them.

use alloc::collections::BTreeMap;

#[allow(unused_imports)] // float methods come from here when std is absent
use num_traits::Float;

use crate::generators::{apply_f64, Generator};
use crate::irrep::{CanonicalState, IrrepLabel};
use crate::scalar::{Half, Third};
use crate::su2::su2_cgc_f64;

use super::CouplingPoint;

/// A pair of factor states `(state in s1, state in s2)`.
pub type ProductKey = (CanonicalState, CanonicalState);

/// A sparse real vector over product states.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProductVector {
    /// Nonzero components.
    pub entries: BTreeMap<ProductKey, f64>,
}

impl ProductVector {
    /// Add `value` to the component at `key`.
    pub fn add(&mut self, key: ProductKey, value: f64) {
        if value != 0.0 {
            *self.entries.entry(key).or_insert(0.0) += value;
        }
    }

    /// `self += scale · other`.
    pub fn add_scaled(&mut self, other: &ProductVector, scale: f64) {
        if scale != 0.0 {
            for (k, v) in &other.entries {
                self.add(*k, scale * v);
            }
        }
    }

    /// Euclidean inner product.
    pub fn dot(&self, other: &ProductVector) -> f64 {
        let (small, large) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(k, v)| large.entries.get(k).map(|w| v * w))
            .sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// The coupled state `|(μ, j, k); i, M⟩` at total hypercharge `y`.
pub fn coupled_state(
    s1: IrrepLabel,
    s2: IrrepLabel,
    p: &CouplingPoint,
    i: Half,
    m_total: Half,
    y: Third,
) -> ProductVector {
    let nu = y - p.mu;
    let mut out = ProductVector::default();
    let mut m1 = p.j;
    while m1 >= -p.j {
        let m2 = m_total - m1;
        if m2.abs() <= p.k {
            let c = su2_cgc_f64(p.j, m1, p.k, m2, i, m_total);
            if c != 0.0 {
                let a = CanonicalState::new(p.j, m1, p.mu);
                let b = CanonicalState::new(p.k, m2, nu);
                debug_assert!(crate::irrep::contains(s1, &a) && crate::irrep::contains(s2, &b));
                out.add((a, b), c);
            }
        }
        m1 = m1 - Half(2);
    }
    out
}

/// `Σ_p row_p |p; i, M⟩`: the product-space vector described by one row of
/// isoscalar factors.
pub fn row_state(
    s1: IrrepLabel,
    s2: IrrepLabel,
    points: &[CouplingPoint],
    values: &[f64],
    i: Half,
    m_total: Half,
    y: Third,
) -> ProductVector {
    let mut out = ProductVector::default();
    for (p, &v) in points.iter().zip(values) {
        if v != 0.0 {
            out.add_scaled(&coupled_state(s1, s2, p, i, m_total, y), v);
        }
    }
    out
}

/// A generator acting on the first factor only.
pub fn apply_first(s1: IrrepLabel, g: Generator, v: &ProductVector) -> ProductVector {
    let mut out = ProductVector::default();
    for (&(a, b), &x) in &v.entries {
        for (a2, c) in apply_f64(s1, g, &a) {
            out.add((a2, b), c * x);
        }
    }
    out
}

/// A generator acting on the second factor only.
pub fn apply_second(s2: IrrepLabel, g: Generator, v: &ProductVector) -> ProductVector {
    let mut out = ProductVector::default();
    for (&(a, b), &x) in &v.entries {
        for (b2, c) in apply_f64(s2, g, &b) {
            out.add((a, b2), c * x);
        }
    }
    out
}

/// The total generator `g ⊗ 1 + 1 ⊗ g`.
pub fn apply_total(s1: IrrepLabel, s2: IrrepLabel, g: Generator, v: &ProductVector) -> ProductVector {
    let mut out = apply_first(s1, g, v);
    out.add_scaled(&apply_second(s2, g, v), 1.0);
    out
}

/// The mixed part of the quadratic Casimir carried by the `K` and `L`
/// ladders: `K+⊗K− + K−⊗K+ + L+⊗L− + L−⊗L+`.
pub fn apply_kl_exchange(s1: IrrepLabel, s2: IrrepLabel, v: &ProductVector) -> ProductVector {
    use Generator::*;
    let mut out = ProductVector::default();
    for (g1, g2) in [(KPlus, KMinus), (KMinus, KPlus), (LPlus, LMinus), (LMinus, LPlus)] {
        out.add_scaled(&apply_first(s1, g1, &apply_second(s2, g2, v)), 1.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isoscalar::row_lattice;

    #[test]
    fn coupled_states_are_orthonormal() {
        let (s1, s2) = (IrrepLabel::new(1, 1), IrrepLabel::new(2, 0));
        for y3 in [-4, -1, 2] {
            let y = Third(y3);
            for i2 in 0..5 {
                let i = Half(i2);
                let pts = row_lattice(s1, s2, i, y);
                let m = -i;
                let vs: alloc::vec::Vec<_> =
                    pts.iter().map(|p| coupled_state(s1, s2, p, i, m, y)).collect();
                for (a, va) in vs.iter().enumerate() {
                    for (b, vb) in vs.iter().enumerate() {
                        let expect = if a == b { 1.0 } else { 0.0 };
                        assert!((va.dot(vb) - expect).abs() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn total_isospin_raising_annihilates_stretched_projection() {
        let (s1, s2) = (IrrepLabel::new(1, 1), IrrepLabel::new(1, 1));
        let y = Third(0);
        let i = Half(2);
        for p in row_lattice(s1, s2, i, y) {
            let v = coupled_state(s1, s2, &p, i, i, y);
            assert!(apply_total(s1, s2, Generator::IPlus, &v).norm() < 1e-13);
        }
    }
}
