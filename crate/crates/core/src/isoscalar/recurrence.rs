//! The general engine: top row by null space, the rest by lowering.
//!
//! **Top row.**  The top state `|s; P/2, P/2, (P+2Q)/3⟩` is annihilated by
//! `I+`, `K+` and `L+`.  Coupling with `M = i` takes care of `I+`; requiring
//! the total `K+` and `L+` to annihilate `Σ_p α_p |p; i, i⟩` gives a
//! homogeneous linear system whose solution space has the dimension of the
//! multiplicity of `s`.
//!
//! **Multiplicity basis.**  When the two factors are equal, the factor
//! exchange `(μ, j, k) → (y−μ, k, j)` with phase `(−1)^{j+k−i}` commutes with
//! the system; the basis is split into exchange-antisymmetric vectors first,
//! then symmetric ones.  Within each part (and for unequal factors) vectors
//! are chosen by Gram–Schmidt on unit seeds in descending `(j, k, μ)` order.
//! Each vector's overall sign makes its first non-negligible entry in
//! descending `(j, k, μ)` order positive: the largest-`j` factor, and among
//! those the largest-`k`, is positive.
//!
//! **Lowering.**  Applying the total `K−` to the `M = i` member of row
//! `(i, y)` and projecting on coupled states of `(i', y−1)` with
//! `M' = i − ½` gives row `(i', y−1)` times the single `s`-matrix element
//! `⟨i', i−½, y−1| K− |i, i, y⟩`.  A row is reached from `(i'−½, y+1)` when
//! that element is nonzero, otherwise from `(i'+½, y+1)`.
//!
//! **Casimir check.**  The quadratic Casimir of the product splits into the
//! factor Casimirs, diagonal isospin and hypercharge cross terms, and the
//! `K`/`L` exchange `X = K+⊗K− + K−⊗K+ + L+⊗L− + L−⊗L+`.  Every row therefore
//! satisfies `ρ_p α_p = ⟨p| X |row⟩` with
//! `ρ_p = f_s − f_{s1} − f_{s2} − (3/2) μ (y−μ) − [i(i+1) − j(j+1) − k(k+1)]`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)] // float methods come from here when std is absent
use num_traits::Float;

use crate::generators::{apply_f64, Generator};
use crate::irrep::{casimir_f, contains_node, hypercharges, isospins_at, top_state, CanonicalState, IrrepLabel};
use crate::linalg::{null_space, push_orthonormal, NULL_SPACE_REL_TOL};
use crate::scalar::{parity_sign, rat, rational_to_f64, Half, Rational, Third};
use crate::series::multiplicity;

use super::coupled::{apply_kl_exchange, apply_total, coupled_state, row_state, ProductKey};
use super::{
    hw_lattice, require_node, row_lattice, CouplingPoint, IsoscalarError, IsoscalarRow, IsoscalarTable,
    Provenance,
};

/// Entries at or below this magnitude are skipped when fixing signs.
const SIGN_TOL: f64 = 1e-8;

/// Lowering amplitudes at or below this magnitude count as vanishing.
const SINGULAR_TOL: f64 = 1e-12;

/// Indices of `points` in descending `(j, k, μ)` order.
fn descending_jk_order(points: &[CouplingPoint]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (&points[a], &points[b]);
        q.j.cmp(&p.j).then(q.k.cmp(&p.k)).then(q.mu.cmp(&p.mu))
    });
    idx
}

/// Flip `v` so that its first non-negligible entry in `order` is positive.
fn fix_sign(v: &mut DVector<f64>, order: &[usize]) {
    if let Some(&lead) = order.iter().find(|&&n| v[n].abs() > SIGN_TOL) {
        if v[lead] < 0.0 {
            *v = -v.clone();
        }
    }
}

/// Matrix of the factor exchange on the points of one row (`s1 = s2`).
fn exchange_matrix(points: &[CouplingPoint], i: Half, y: Third) -> DMatrix<f64> {
    let n = points.len();
    let mut e = DMatrix::zeros(n, n);
    for (c, p) in points.iter().enumerate() {
        let image = CouplingPoint::new(y - p.mu, p.k, p.j);
        let r = points
            .binary_search(&image)
            .expect("exchange maps the lattice of a symmetric product onto itself");
        e[(r, c)] = parity_sign((p.j.0 + p.k.0 - i.0) as i64, 2) as f64;
    }
    e
}

/// Orthonormal top rows of `s` in `s1 ⊗ s2`, one per multiplicity index.
pub fn hw_solve(
    s1: IrrepLabel,
    s2: IrrepLabel,
    s: IrrepLabel,
) -> Result<Vec<IsoscalarRow>, IsoscalarError> {
    let points = hw_lattice(s1, s2, s)?;
    let top = top_state(s);
    let (i, y) = (top.i, top.y);
    let expected = multiplicity(s1, s2, s);

    // Images of every coupled state under the total K+ and L+.
    let mut keys: Vec<(Generator, ProductKey)> = Vec::new();
    let mut columns = Vec::with_capacity(points.len());
    for p in &points {
        let v = coupled_state(s1, s2, p, i, i, y);
        let mut col = Vec::new();
        for g in [Generator::KPlus, Generator::LPlus] {
            for (key, x) in apply_total(s1, s2, g, &v).entries {
                if x != 0.0 {
                    col.push(((g, key), x));
                    keys.push((g, key));
                }
            }
        }
        columns.push(col);
    }
    keys.sort();
    keys.dedup();
    let mut w = DMatrix::zeros(keys.len(), points.len());
    for (c, col) in columns.iter().enumerate() {
        for (key, x) in col {
            let r = keys.binary_search(key).expect("key collected above");
            w[(r, c)] += x;
        }
    }
    let space = null_space(&w, NULL_SPACE_REL_TOL);
    if space.ncols() != expected as usize {
        return Err(IsoscalarError::RankMismatch {
            s1,
            s2,
            s,
            expected,
            found: space.ncols(),
        });
    }

    let order = descending_jk_order(&points);
    let project = |v: &DVector<f64>| &space * (space.transpose() * v);
    let seeds: Vec<DVector<f64>> = order
        .iter()
        .map(|&n| project(&DVector::from_fn(points.len(), |r, _| if r == n { 1.0 } else { 0.0 })))
        .collect();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    if s1 == s2 {
        let e = exchange_matrix(&points, i, y);
        for parity in [-1.0, 1.0] {
            for seed in &seeds {
                let v = (seed + &e * seed * parity) * 0.5;
                push_orthonormal(&mut basis, &v, 1e-6);
            }
        }
    } else {
        for seed in &seeds {
            push_orthonormal(&mut basis, seed, 1e-6);
        }
    }
    if basis.len() != expected as usize {
        return Err(IsoscalarError::RankMismatch {
            s1,
            s2,
            s,
            expected,
            found: basis.len(),
        });
    }
    Ok(basis
        .into_iter()
        .map(|mut v| {
            fix_sign(&mut v, &order);
            IsoscalarRow::from_floats(i, y, points.clone(), v.iter().cloned().collect())
        })
        .collect())
}

/// `⟨s; target| K− |s; source⟩` for `source = |i_s, i_s, y+1⟩` and
/// `target = |i', i_s − ½, y⟩`.
fn lowering_amplitude(s: IrrepLabel, source_i: Half, target_i: Half, y: Third) -> f64 {
    let source = CanonicalState::new(source_i, source_i, y + Third::ONE);
    let target = CanonicalState::new(target_i, source_i - Half::HALF, y);
    apply_f64(s, Generator::KPlus, &target)
        .into_iter()
        .find(|(st, _)| *st == source)
        .map_or(0.0, |(_, x)| x)
}

/// Propagate a top row over the whole weight lattice of `s`.
///
/// Rows are produced in lattice order (descending `y`, then `i`).  Each
/// row's normalisation is not imposed; see [`IsoscalarTable::max_norm_defect`].
pub fn lower_full_table(
    s1: IrrepLabel,
    s2: IrrepLabel,
    s: IrrepLabel,
    top: &IsoscalarRow,
) -> Result<Vec<IsoscalarRow>, IsoscalarError> {
    let mut rows: Vec<IsoscalarRow> = alloc::vec![top.clone()];
    for y in hypercharges(s).skip(1) {
        let above = y + Third::ONE;
        let mut is: Vec<Half> = isospins_at(s, y).collect();
        is.reverse();
        for ti in is {
            let routes = [ti - Half::HALF, ti + Half::HALF];
            let route = routes.into_iter().find_map(|si| {
                if si.0 < 0 || !contains_node(s, si, above) {
                    return None;
                }
                let amp = lowering_amplitude(s, si, ti, y);
                (amp.abs() > SINGULAR_TOL).then_some((si, amp))
            });
            let Some((si, amp)) = route else {
                return Err(IsoscalarError::PropagationSingularity { s, i: ti, y });
            };
            let source = rows
                .iter()
                .find(|r| r.i == si && r.y == above)
                .expect("rows above are complete");
            let v = row_state(s1, s2, &source.points, &source.values, si, si, above);
            let lowered = apply_total(s1, s2, Generator::KMinus, &v);
            let m = si - Half::HALF;
            let points = row_lattice(s1, s2, ti, y);
            let values = points
                .iter()
                .map(|p| coupled_state(s1, s2, p, ti, m, y).dot(&lowered) / amp)
                .collect();
            rows.push(IsoscalarRow::from_floats(ti, y, points, values));
        }
    }
    Ok(rows)
}

/// Every isoscalar table of `s` in `s1 ⊗ s2`, one per multiplicity index.
pub fn isoscalar_tables(
    s1: IrrepLabel,
    s2: IrrepLabel,
    s: IrrepLabel,
) -> Result<Vec<IsoscalarTable>, IsoscalarError> {
    hw_solve(s1, s2, s)?
        .iter()
        .enumerate()
        .map(|(gamma, top)| {
            let rows = lower_full_table(s1, s2, s, top)?;
            Ok(IsoscalarTable::new(s1, s2, s, gamma as u32, rows, Provenance::Recurrence))
        })
        .collect()
}

/// Diagonal coefficient `ρ_p` of the Casimir relation at point `p` of row
/// `(i, y)`.
pub fn casimir_rho(
    s1: IrrepLabel,
    s2: IrrepLabel,
    s: IrrepLabel,
    i: Half,
    y: Third,
    p: &CouplingPoint,
) -> Rational {
    let mu = p.mu.to_rational();
    let nu = (y - p.mu).to_rational();
    let iso = |h: Half| {
        let x = h.to_rational();
        &x * (&x + rat(1, 1))
    };
    casimir_f(s) - casimir_f(s1) - casimir_f(s2) - rat(3, 2) * mu * nu - (iso(i) - iso(p.j) - iso(p.k))
}

/// Residuals `ρ_p α_p − ⟨p| X |row⟩` of the Casimir relation for one row of
/// `s`; they vanish for a correct row.
pub fn casimir_residual(
    s1: IrrepLabel,
    s2: IrrepLabel,
    s: IrrepLabel,
    row: &IsoscalarRow,
) -> Result<Vec<f64>, IsoscalarError> {
    require_node(s, row.i, row.y)?;
    let v = row_state(s1, s2, &row.points, &row.values, row.i, row.i, row.y);
    let xv = apply_kl_exchange(s1, s2, &v);
    Ok(row
        .points
        .iter()
        .zip(&row.values)
        .map(|(p, a)| {
            let rho = rational_to_f64(&casimir_rho(s1, s2, s, row.i, row.y, p));
            rho * a - coupled_state(s1, s2, p, row.i, row.i, row.y).dot(&xv)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irrep::nodes;
    use crate::scalar::SurdValue;
    use crate::series::series_general;

    fn l(p: u32, q: u32) -> IrrepLabel {
        IrrepLabel::new(p, q)
    }

    fn pt(mu3: i32, j2: i32, k2: i32) -> CouplingPoint {
        CouplingPoint::new(Third(mu3), Half(j2), Half(k2))
    }

    fn surd(sign: i8, n: i64, d: i64) -> SurdValue {
        SurdValue::new(sign, rat(n, d)).unwrap()
    }

    #[test]
    fn octet_octet_top_rows() {
        let r = hw_solve(l(1, 1), l(1, 1), l(2, 2)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].exact.as_ref().unwrap(), &[SurdValue::one()]);

        let r = hw_solve(l(1, 1), l(1, 1), l(3, 0)).unwrap();
        assert_eq!(r[0].points, [pt(0, 2, 1), pt(3, 1, 2)]);
        assert_eq!(r[0].exact.as_ref().unwrap(), &[surd(1, 1, 2), surd(-1, 1, 2)]);

        let r = hw_solve(l(1, 1), l(1, 1), l(1, 1)).unwrap();
        assert_eq!(r.len(), 2);
        let half = |s| surd(s, 1, 4);
        assert_eq!(r[0].exact.as_ref().unwrap(), &[half(-1), half(1), half(1), half(1)]);
        // The second vector is fixed by orthogonality up to sign.
        assert_eq!(
            r[1].exact.as_ref().unwrap(),
            &[surd(1, 1, 20), surd(1, 9, 20), surd(1, 1, 20), surd(-1, 9, 20)]
        );
    }

    #[test]
    fn rank_matches_multiplicity_and_rows_normalise() {
        for (a, b) in [((1, 1), (1, 1)), ((2, 1), (1, 1)), ((2, 0), (1, 2)), ((2, 2), (1, 1))] {
            let (s1, s2) = (l(a.0, a.1), l(b.0, b.1));
            for t in series_general(s1, s2) {
                let tables = isoscalar_tables(s1, s2, t.irrep).unwrap();
                assert_eq!(tables.len(), t.multiplicity as usize);
                for tab in &tables {
                    assert_eq!(tab.rows.len(), nodes(t.irrep).len());
                    assert!(tab.max_norm_defect < 1e-12, "{s1}⊗{s2}→{}", t.irrep);
                }
                for r in 0..tables[0].rows.len() {
                    for g1 in 0..tables.len() {
                        for g2 in 0..g1 {
                            let d: f64 = tables[g1].rows[r]
                                .values
                                .iter()
                                .zip(&tables[g2].rows[r].values)
                                .map(|(x, y)| x * y)
                                .sum();
                            assert!(d.abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn casimir_relation_holds() {
        for (a, b) in [((1, 1), (1, 1)), ((2, 1), (0, 2)), ((1, 0), (0, 1))] {
            let (s1, s2) = (l(a.0, a.1), l(b.0, b.1));
            for t in series_general(s1, s2) {
                for tab in isoscalar_tables(s1, s2, t.irrep).unwrap() {
                    for row in &tab.rows {
                        for r in casimir_residual(s1, s2, t.irrep, row).unwrap() {
                            assert!(r.abs() < 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn casimir_diagonal_specialisations() {
        // (1,0)⊗(0,1) → (1,1): the single top-row point has ρ = 0.
        let (s1, s2, s) = (l(1, 0), l(0, 1), l(1, 1));
        assert_eq!(casimir_rho(s1, s2, s, Half(1), Third(3), &pt(1, 1, 0)), rat(0, 1));
        // (P1,0)⊗(P2,0) → (P1+P2,0): ρ = (2P1/3+μ)(P2/3−y+μ) + (P1/3−μ)(2P2/3+y−μ).
        for p1 in 0..5i64 {
            for p2 in 0..5i64 {
                let (s1, s2) = (l(p1 as u32, 0), l(p2 as u32, 0));
                let s = l((p1 + p2) as u32, 0);
                for (i, y) in nodes(s) {
                    for p in row_lattice(s1, s2, i, y) {
                        let mu = p.mu.to_rational();
                        let yy = y.to_rational();
                        let expect = (rat(2 * p1, 3) + &mu) * (rat(p2, 3) - &yy + &mu)
                            + (rat(p1, 3) - &mu) * (rat(2 * p2, 3) + &yy - &mu);
                        assert_eq!(casimir_rho(s1, s2, s, i, y, &p), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn triplet_antitriplet_rows() {
        // Top row of the octet is the single point (1/3, ½, 0) with factor 1.
        let t = isoscalar_tables(l(1, 0), l(0, 1), l(1, 1)).unwrap();
        assert_eq!(t[0].rows[0].points, [pt(1, 1, 0)]);
        assert_eq!(t[0].rows[0].values, [1.0]);
        // The singlet: +√(2/3) at μ = 1/3, −√(1/3) at μ = −2/3.
        let t = isoscalar_tables(l(1, 0), l(0, 1), l(0, 0)).unwrap();
        assert_eq!(
            t[0].rows[0].exact.as_ref().unwrap(),
            &[surd(-1, 1, 3), surd(1, 2, 3)]
        );
    }
}
