//! Full SU(3) Clebsch–Gordan coefficients.
//!
//! A coefficient factorises into an isoscalar factor and an SU(2)
//! coefficient:
//!
//! ```text
//! ⟨s1 j m μ; s2 k m' ν | s γ i i3 y⟩ = α^{s γ}_{i y}(μ, j, k) · ⟨j m; k m' | i i3⟩,
//! ```
//!
//! nonzero only when `i3 = m + m'` and `y = μ + ν`.  This module assembles
//! coefficients, whole coupled states, and complete coupled bases from
//! isoscalar tables, and realises the canonical bases of `D(P,0)` and
//! `D(0,Q)` as normalised symmetric monomials.

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::irrep::{contains, enumerate_basis, CanonicalState, IrrepLabel};
use crate::isoscalar::coupled::{row_state, ProductKey, ProductVector};
use crate::isoscalar::{
    closed_form_table, isoscalar_tables, CouplingPoint, IsoscalarError, IsoscalarTable,
};
use crate::scalar::{factorial, from_biguint, parity_sign, surd_mul, Half, SurdValue};
use crate::series::multiplicity;
use crate::su2::{su2_cgc, Su2CgKey};

/// Emitted block entries at or below this magnitude are dropped.
pub const ZERO_SUPPRESSION: f64 = 1e-13;

/// One coefficient request.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CgcQuery {
    /// First factor.
    pub s1: IrrepLabel,
    /// State of the first factor.
    pub state1: CanonicalState,
    /// Second factor.
    pub s2: IrrepLabel,
    /// State of the second factor.
    pub state2: CanonicalState,
    /// Coupled irrep.
    pub s: IrrepLabel,
    /// Multiplicity index (zero-based).
    pub gamma: u32,
    /// Coupled state.
    pub state: CanonicalState,
}

/// A coefficient in factored form.
#[derive(Clone, Debug, PartialEq)]
pub struct CgcValue {
    /// Isoscalar factor.
    pub isoscalar: f64,
    /// Exact isoscalar factor, when known.
    pub isoscalar_exact: Option<SurdValue>,
    /// SU(2) coefficient (always exact).
    pub su2: SurdValue,
    /// The product as a float.
    pub value: f64,
    /// The exact product, when the isoscalar factor is exact.
    pub exact: Option<SurdValue>,
}

impl CgcValue {
    fn zero() -> Self {
        Self {
            isoscalar: 0.0,
            isoscalar_exact: Some(SurdValue::zero()),
            su2: SurdValue::zero(),
            value: 0.0,
            exact: Some(SurdValue::zero()),
        }
    }
}

/// Isoscalar tables of `s` in `s1 ⊗ s2`: the exact closed form when the
/// coupling has one, the recurrence otherwise.
pub fn coupling_tables(
    s1: IrrepLabel,
    s2: IrrepLabel,
    s: IrrepLabel,
) -> Result<Vec<IsoscalarTable>, IsoscalarError> {
    if multiplicity(s1, s2, s) == 0 {
        return Err(IsoscalarError::NotInSeries { s1, s2, s });
    }
    match closed_form_table(s1, s2, s) {
        Some(t) => Ok(alloc::vec![t]),
        None => isoscalar_tables(s1, s2, s),
    }
}

fn check_state(s: IrrepLabel, st: &CanonicalState) -> Result<(), IsoscalarError> {
    if contains(s, st) {
        Ok(())
    } else {
        Err(IsoscalarError::BadState { s, i: st.i, y: st.y })
    }
}

/// A coefficient read from an already computed table.
pub fn cg_from_table(
    table: &IsoscalarTable,
    state1: &CanonicalState,
    state2: &CanonicalState,
    state: &CanonicalState,
) -> Result<CgcValue, IsoscalarError> {
    check_state(table.s1, state1)?;
    check_state(table.s2, state2)?;
    check_state(table.s, state)?;
    if state1.i3 + state2.i3 != state.i3 || state1.y + state2.y != state.y {
        return Ok(CgcValue::zero());
    }
    let row = table
        .row(state.i, state.y)
        .expect("tables cover every node of the coupled irrep");
    let p = CouplingPoint::new(state1.y, state1.i, state2.i);
    let isoscalar = row.get(&p);
    let isoscalar_exact = row.get_exact(&p);
    let su2 = su2_cgc(&Su2CgKey::new(
        state1.i, state1.i3, state2.i, state2.i3, state.i, state.i3,
    ))
    .expect("labels validated above");
    let exact = isoscalar_exact.as_ref().map(|a| surd_mul(a, &su2));
    Ok(CgcValue {
        isoscalar,
        value: isoscalar * su2.to_f64(),
        isoscalar_exact,
        su2,
        exact,
    })
}

/// One coefficient, computing the needed tables.
pub fn cg_coefficient(q: &CgcQuery) -> Result<CgcValue, IsoscalarError> {
    let tables = coupling_tables(q.s1, q.s2, q.s)?;
    let table = tables
        .get(q.gamma as usize)
        .ok_or(IsoscalarError::BadMultiplicityIndex {
            gamma: q.gamma,
            multiplicity: tables.len() as u32,
        })?;
    cg_from_table(table, &q.state1, &q.state2, &q.state)
}

/// The coupled state `|s γ; i i3 y⟩` as a product-space vector.
pub fn coupled_vector(table: &IsoscalarTable, state: &CanonicalState) -> Result<ProductVector, IsoscalarError> {
    check_state(table.s, state)?;
    let row = table
        .row(state.i, state.y)
        .expect("tables cover every node of the coupled irrep");
    Ok(row_state(
        table.s1,
        table.s2,
        &row.points,
        &row.values,
        state.i,
        state.i3,
        state.y,
    ))
}

/// Expansion of every `|s γ; i i3 y⟩` of one node `(i, y)`, for `i3`
/// descending; entries with magnitude at most [`ZERO_SUPPRESSION`] are
/// dropped.
pub fn coupling_block(
    table: &IsoscalarTable,
    i: Half,
    y: crate::scalar::Third,
) -> Result<Vec<(CanonicalState, Vec<(ProductKey, f64)>)>, IsoscalarError> {
    crate::isoscalar::require_node(table.s, i, y)?;
    let mut out = Vec::new();
    let mut i3 = i;
    while i3 >= -i {
        let st = CanonicalState::new(i, i3, y);
        let v = coupled_vector(table, &st)?;
        let entries = v
            .entries
            .into_iter()
            .filter(|(_, x)| x.abs() > ZERO_SUPPRESSION)
            .collect();
        out.push((st, entries));
        i3 = i3 - Half(2);
    }
    Ok(out)
}

/// Every state of `s` (canonical order) with its product-space expansion.
pub fn coupled_basis(table: &IsoscalarTable) -> Vec<(CanonicalState, ProductVector)> {
    enumerate_basis(table.s)
        .into_iter()
        .map(|st| {
            let v = coupled_vector(table, &st).expect("state of the coupled irrep");
            (st, v)
        })
        .collect()
}

/// The canonical basis of `D(P,Q)` inside `D(P,0) ⊗ D(0,Q)`, built from the
/// exact closed-form factors.
pub fn canonical_embedding(p: u32, q: u32) -> Vec<(CanonicalState, ProductVector)> {
    let table = closed_form_table(IrrepLabel::new(p, 0), IrrepLabel::new(0, q), IrrepLabel::new(p, q))
        .expect("(P,0)⊗(0,Q)→(P,Q) has a closed form");
    coupled_basis(&table)
}

/// A canonical basis state of `D(P,0)` or `D(0,Q)` written as a normalised
/// symmetric monomial in the fundamental (resp. conjugate) coordinates.
///
/// For `D(P,0)` the state `|i, i3, y⟩` is `a · x1^{p1} x2^{p2} x3^{p3}`
/// (symmetrised) with `p1 = i+i3`, `p2 = i−i3`, `p3 = P/3 − y` and
/// `a = √(P!/(p1! p2! p3!))`.  For `D(0,Q)` the state is the monomial in the
/// conjugate coordinates with `q1 = k−i3`, `q2 = k+i3`, `q3 = Q/3 + y`; the
/// canonical antitriplet vector `−y¹` contributes the phase `(−1)^{q1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricBasisVector {
    /// Powers of the three coordinates.
    pub exponents: [u32; 3],
    /// Normaliser `√(n!/(e1! e2! e3!))`.
    pub normalizer: SurdValue,
    /// Sign relative to the natural coordinates.
    pub phase: i8,
}

fn multinomial_normalizer(e: [u32; 3]) -> SurdValue {
    let n: u32 = e.iter().sum();
    let den: BigUint = e.iter().map(|&k| factorial(k as u64)).product();
    SurdValue::sqrt(from_biguint(factorial(n as u64)) / from_biguint(den)).expect("positive")
}

/// Monomial form of a state of `D(P,0)`.
pub fn symmetric_vector_p(p: u32, st: &CanonicalState) -> Result<SymmetricBasisVector, IsoscalarError> {
    let s = IrrepLabel::new(p, 0);
    check_state(s, st)?;
    let p1 = ((st.i.0 + st.i3.0) / 2) as u32;
    let p2 = ((st.i.0 - st.i3.0) / 2) as u32;
    let p3 = ((p as i32 - st.y.0) / 3) as u32;
    let exponents = [p1, p2, p3];
    Ok(SymmetricBasisVector {
        exponents,
        normalizer: multinomial_normalizer(exponents),
        phase: 1,
    })
}

/// Monomial form of a state of `D(0,Q)`.
pub fn symmetric_vector_q(q: u32, st: &CanonicalState) -> Result<SymmetricBasisVector, IsoscalarError> {
    let s = IrrepLabel::new(0, q);
    check_state(s, st)?;
    let q1 = (st.i.0 - st.i3.0) / 2;
    let q2 = ((st.i.0 + st.i3.0) / 2) as u32;
    let q3 = ((q as i32 + st.y.0) / 3) as u32;
    let exponents = [q1 as u32, q2, q3];
    Ok(SymmetricBasisVector {
        exponents,
        normalizer: multinomial_normalizer(exponents),
        phase: parity_sign(q1 as i64, 1),
    })
}

/// Orthogonality of the isoscalar factors of a whole product.
#[derive(Copy, Clone, Debug, PartialEq, Default)]
pub struct UnitarityReport {
    /// Largest `|Σ α² − 1|` over every row of every table.
    pub row_norm_defect: f64,
    /// Largest entry of `MᵀM − 1` and `MMᵀ − 1`, where `M` collects, for one
    /// node `(i, y)`, the rows of every `(s, γ)` against every coupling point.
    pub block_defect: f64,
    /// Number of `(i, y)` blocks checked.
    pub blocks: usize,
}

/// Check that the isoscalar factors of `s1 ⊗ s2` form orthogonal matrices
/// node by node (the SU(3) analogue of the unitarity of SU(2)
/// coefficients).
pub fn product_unitarity(s1: IrrepLabel, s2: IrrepLabel) -> Result<UnitarityReport, IsoscalarError> {
    use crate::irrep::nodes;
    use crate::isoscalar::row_lattice;
    use crate::linalg::max_abs;
    use nalgebra::DMatrix;

    let mut tables = Vec::new();
    for term in crate::series::series_general(s1, s2) {
        tables.extend(coupling_tables(s1, s2, term.irrep)?);
    }
    let mut report = UnitarityReport::default();
    for t in &tables {
        report.row_norm_defect = report.row_norm_defect.max(t.max_norm_defect);
    }
    let mut keys: Vec<(Half, crate::scalar::Third)> = tables.iter().flat_map(|t| nodes(t.s)).collect();
    keys.sort();
    keys.dedup();
    for (i, y) in keys {
        let points = row_lattice(s1, s2, i, y);
        let rows: Vec<&crate::isoscalar::IsoscalarRow> = tables.iter().filter_map(|t| t.row(i, y)).collect();
        let m = DMatrix::from_fn(rows.len(), points.len(), |r, c| rows[r].get(&points[c]));
        let id_r = DMatrix::<f64>::identity(rows.len(), rows.len());
        let id_c = DMatrix::<f64>::identity(points.len(), points.len());
        report.block_defect = report
            .block_defect
            .max(max_abs(&(&m * m.transpose() - id_r)))
            .max(max_abs(&(m.transpose() * &m - id_c)));
        report.blocks += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{apply_f64, Generator};
    use crate::irrep::{dimension, nodes};
    use crate::isoscalar::coupled::apply_total;
    use crate::scalar::{rat, Third};
    use crate::series::series_general;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    fn l(p: u32, q: u32) -> IrrepLabel {
        IrrepLabel::new(p, q)
    }

    fn st(i2: i32, m2: i32, y3: i32) -> CanonicalState {
        CanonicalState::new(Half(i2), Half(m2), Third(y3))
    }

    fn surd(sign: i8, n: i64, d: i64) -> SurdValue {
        SurdValue::new(sign, rat(n, d)).unwrap()
    }

    /// All coupled vectors of every `(s, γ)` in `s1 ⊗ s2`.
    fn full_basis(s1: IrrepLabel, s2: IrrepLabel) -> Vec<ProductVector> {
        let mut out = Vec::new();
        for t in series_general(s1, s2) {
            for table in coupling_tables(s1, s2, t.irrep).unwrap() {
                out.extend(coupled_basis(&table).into_iter().map(|(_, v)| v));
            }
        }
        out
    }

    #[test]
    fn isoscalar_blocks_are_orthogonal() {
        for (s1, s2) in [(l(1, 1), l(1, 1)), (l(2, 0), l(1, 2)), (l(0, 3), l(1, 0))] {
            let r = product_unitarity(s1, s2).unwrap();
            assert!(r.blocks > 0);
            assert!(r.row_norm_defect < 1e-12 && r.block_defect < 1e-12, "{s1}⊗{s2}: {r:?}");
        }
    }

    #[test]
    fn stretched_top_is_product_of_tops() {
        let (s1, s2, s) = (l(1, 1), l(1, 1), l(2, 2));
        let q = CgcQuery {
            s1,
            state1: st(1, 1, 3),
            s2,
            state2: st(1, 1, 3),
            s,
            gamma: 0,
            state: st(2, 2, 6),
        };
        assert_eq!(cg_coefficient(&q).unwrap().exact, Some(SurdValue::one()));
        let bad = CgcQuery { state2: st(1, 1, -3), ..q };
        assert_eq!(cg_coefficient(&bad).unwrap().value, 0.0);
        let out_of_range = CgcQuery { gamma: 1, ..q };
        assert!(matches!(
            cg_coefficient(&out_of_range),
            Err(IsoscalarError::BadMultiplicityIndex { .. })
        ));
        let off_lattice = CgcQuery { state: st(4, 4, 6), ..q };
        assert!(matches!(cg_coefficient(&off_lattice), Err(IsoscalarError::BadState { .. })));
    }

    #[test]
    fn triplet_antitriplet_singlet() {
        let (s1, s2, s) = (l(1, 0), l(0, 1), l(0, 0));
        let table = &coupling_tables(s1, s2, s).unwrap()[0];
        let block = coupling_block(table, Half(0), Third(0)).unwrap();
        assert_eq!(block.len(), 1);
        let entries = &block[0].1;
        assert_eq!(entries.len(), 3);
        for (_, x) in entries {
            assert!((x * x - 1.0 / 3.0).abs() < 1e-15);
        }
        let prod_sign: f64 = entries.iter().map(|(_, x)| x.signum()).product();
        assert!(prod_sign > 0.0, "two of the three signs agree");
    }

    #[test]
    fn decuplet_top_expansion() {
        let table = &coupling_tables(l(1, 1), l(1, 1), l(3, 0)).unwrap()[0];
        let v = coupled_vector(table, &st(3, 3, 3)).unwrap();
        // |30, 3/2, 3/2, 1⟩ = (|π+⟩|p⟩ − |p⟩|π+⟩)/√2 in octet notation.
        let a = st(2, 2, 0);
        let b = st(1, 1, 3);
        assert_eq!(v.entries.len(), 2);
        assert!((v.entries[&(a, b)] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((v.entries[&(b, a)] + 0.5f64.sqrt()).abs() < 1e-15);
        let exact = cg_from_table(table, &a, &b, &st(3, 3, 3)).unwrap().exact.unwrap();
        assert_eq!(exact, surd(1, 1, 2));
    }

    #[test]
    fn coupled_bases_are_unitary() {
        for (a, b) in [((1, 0), (0, 1)), ((1, 1), (1, 1)), ((2, 0), (1, 1)), ((2, 1), (0, 2))] {
            let (s1, s2) = (l(a.0, a.1), l(b.0, b.1));
            let basis = full_basis(s1, s2);
            assert_eq!(basis.len() as u64, dimension(s1) * dimension(s2));
            for (n, u) in basis.iter().enumerate() {
                for (m, v) in basis.iter().enumerate().take(n + 1) {
                    let expect = if n == m { 1.0 } else { 0.0 };
                    assert!((u.dot(v) - expect).abs() < 1e-12, "{s1}⊗{s2}");
                }
            }
        }
    }

    #[test]
    fn coupled_states_transform_like_the_irrep() {
        for (a, b) in [((1, 1), (1, 1)), ((2, 0), (0, 2)), ((1, 2), (1, 0))] {
            let (s1, s2) = (l(a.0, a.1), l(b.0, b.1));
            for t in series_general(s1, s2) {
                for table in coupling_tables(s1, s2, t.irrep).unwrap() {
                    let basis: BTreeMap<CanonicalState, ProductVector> =
                        coupled_basis(&table).into_iter().collect();
                    for g in Generator::ALL {
                        for (state, v) in &basis {
                            let lhs = apply_total(s1, s2, g, v);
                            let mut rhs = ProductVector::default();
                            for (target, c) in apply_f64(t.irrep, g, state) {
                                rhs.add_scaled(&basis[&target], c);
                            }
                            let mut diff = lhs.clone();
                            diff.add_scaled(&rhs, -1.0);
                            assert!(diff.norm() < 1e-10, "{g} on {state} in {}", t.irrep);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_embedding_matches_recurrence() {
        for p in 0..4 {
            for q in 0..4 {
                let exact = canonical_embedding(p, q);
                let rec = &isoscalar_tables(l(p, 0), l(0, q), l(p, q)).unwrap()[0];
                for (state, v) in exact {
                    let mut d = coupled_vector(rec, &state).unwrap();
                    d.add_scaled(&v, -1.0);
                    assert!(d.norm() < 1e-12);
                }
            }
        }
        let octet = canonical_embedding(1, 1);
        assert_eq!(octet.len(), nodes(l(1, 1)).iter().map(|(i, _)| (i.0 + 1) as usize).sum());
    }

    /// Word-indexed tensors in `(C^3)^{⊗n}`.
    type Tensor = BTreeMap<Vec<usize>, f64>;

    /// The symmetric tensor described by a monomial, in the basis ordered
    /// like the canonical states of the fundamental irrep.
    fn monomial_tensor(v: &SymmetricBasisVector, slots: [usize; 3]) -> Tensor {
        let mut word = Vec::new();
        for (c, &e) in v.exponents.iter().enumerate() {
            word.extend(core::iter::repeat_n(slots[c], e as usize));
        }
        let n = word.len();
        let mut words = vec![word];
        // All distinct permutations.
        for pos in 0..n {
            let mut next = Vec::new();
            for w in &words {
                for swap in pos..n {
                    let mut w2 = w.clone();
                    w2.swap(pos, swap);
                    next.push(w2);
                }
            }
            next.sort();
            next.dedup();
            words = next;
        }
        // Each distinct word carries √(e1! e2! e3!/n!) = 1/normalizer.
        let amp = v.phase as f64 / v.normalizer.to_f64();
        words.into_iter().map(|w| (w, amp)).collect()
    }

    fn apply_tensor(fund: IrrepLabel, g: Generator, t: &Tensor) -> Tensor {
        let basis = enumerate_basis(fund);
        let mut out: Tensor = BTreeMap::new();
        for (w, x) in t {
            for slot in 0..w.len() {
                for (target, c) in apply_f64(fund, g, &basis[w[slot]]) {
                    let mut w2 = w.clone();
                    w2[slot] = basis.iter().position(|b| *b == target).unwrap();
                    *out.entry(w2).or_insert(0.0) += c * x;
                }
            }
        }
        out.retain(|_, x| x.abs() > 1e-14);
        out
    }

    fn assert_intertwines(s: IrrepLabel, fund: IrrepLabel, make: impl Fn(&CanonicalState) -> Tensor) {
        let states = enumerate_basis(s);
        for g in Generator::ALL {
            for state in &states {
                let lhs = apply_tensor(fund, g, &make(state));
                let mut rhs: Tensor = BTreeMap::new();
                for (target, c) in apply_f64(s, g, state) {
                    for (w, x) in make(&target) {
                        *rhs.entry(w).or_insert(0.0) += c * x;
                    }
                }
                rhs.retain(|_, x| x.abs() > 1e-14);
                let keys: alloc::collections::BTreeSet<_> = lhs.keys().chain(rhs.keys()).collect();
                for k in keys {
                    let d = lhs.get(k).copied().unwrap_or(0.0) - rhs.get(k).copied().unwrap_or(0.0);
                    assert!(d.abs() < 1e-12, "{g} on {state} in {s}");
                }
            }
        }
    }

    #[test]
    fn symmetric_monomials_realise_the_canonical_bases() {
        // Canonical triplet order: x1 (u), x2 (d), x3 (s) are slots 0, 1, 2.
        // Canonical antitriplet order: η3, η2, η1 are slots 0, 1, 2.
        for n in 0..=3 {
            assert_intertwines(l(n, 0), l(1, 0), |s| {
                monomial_tensor(&symmetric_vector_p(n, s).unwrap(), [0, 1, 2])
            });
            // In the η coordinates themselves the monomials carry no phase.
            assert_intertwines(l(0, n), l(0, 1), |s| {
                let v = symmetric_vector_q(n, s).unwrap();
                monomial_tensor(&SymmetricBasisVector { phase: 1, ..v }, [2, 1, 0])
            });
        }
    }

    #[test]
    fn normalizers_and_phases() {
        let v = symmetric_vector_p(3, &st(2, 0, 0)).unwrap();
        assert_eq!(v.exponents, [1, 1, 1]);
        assert_eq!(v.normalizer, surd(1, 6, 1));
        // η^{−m}_Q = (−1)^{i+m} (ξ^m_Q)* for corresponding monomials.
        for q in 0..5 {
            for s in enumerate_basis(l(q, 0)) {
                let xi = symmetric_vector_p(q, &s).unwrap();
                let mirrored = CanonicalState::new(s.i, -s.i3, -s.y);
                let eta = symmetric_vector_q(q, &mirrored).unwrap();
                assert_eq!(eta.exponents, xi.exponents);
                assert_eq!(eta.phase, parity_sign(((s.i.0 + s.i3.0) / 2) as i64, 1));
            }
        }
    }
}
