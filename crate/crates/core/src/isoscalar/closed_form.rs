//! Exact isoscalar factors for the families with a closed form, and the
//! conjugation symmetry.
//!
//! * `(P,0) ⊗ (0,Q) → (P,Q)`: the factor depends on `μ` alone
//!   (`j = P/3 + μ/2`, `k = Q/3 − (y−μ)/2`) and equals
//!
//!   ```text
//!   √[ (A+i+1)! (A−i)! (B−i)! (B+i+1)! / ((P+Q+1)! (C+i+1+μ)! (C−i+μ)! (P/3−μ)! (Q/3+y−μ)!) ]
//!   A = (P+2Q)/3 + y/2,  B = (2P+Q)/3 − y/2,  C = (P+Q)/3 − y/2.
//!   ```
//!
//! * `(P1,0) ⊗ (P2,0) → (P1+P2,0)`, with `i = (P1+P2)/3 + y/2`:
//!
//!   ```text
//!   √[ P1! P2! ((P1+P2)/3 − y)! (2(P1+P2)/3 + y)!
//!      / ((P1+P2)! (P1/3−μ)! (2P2/3+y−μ)! (2P1/3+μ)! (P2/3−y+μ)!) ]
//!   ```
//!
//!   and `(0,Q1) ⊗ (0,Q2) → (0,Q1+Q2)` by the reflection `y → −y`, `μ → −μ`.
//!
//! * The scalar in `(P,Q) ⊗ (Q,P)`: `√((2j+1)/dim(P,Q))` at `(μ, j, j)` with
//!   sign `(−1)^{t/3 + μ/2 + j + (t+2P+Q)/3}`, `t` the triality; the
//!   largest-`j` factor is positive.
//!
//! A factorial whose argument is negative makes the factor vanish; this is
//! exactly the `μ` window of each family.
//!
//! Conjugation maps `|QP; i, −i3, −y⟩` to `(−1)^{t/3 + i3 + y/2} |PQ; i, i3, y⟩*`
//! and so turns any table of `s1 ⊗ s2 → s` into one of the conjugates.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::irrep::{conjugate, contains_node, dimension, isospins_at, nodes, triality, CanonicalState, IrrepLabel};
use crate::scalar::{factorial, from_biguint, parity_sign, rat, Half, SurdValue, Third};

use super::{require_node, row_lattice, CouplingPoint, IsoscalarError, IsoscalarRow, IsoscalarTable, Provenance};

/// `(n/den)!` for an argument known to be integral; `None` when negative.
fn fact_over(n: i64, den: i64) -> Option<BigUint> {
    assert!(n % den == 0, "non-integral factorial argument {n}/{den}");
    (n >= 0).then(|| factorial((n / den) as u64))
}

/// `√(Π num! / Π den!)` with arguments given over a common denominator; zero
/// when any denominator argument is negative.
fn factorial_ratio(num: &[i64], den: &[i64], scale: i64) -> SurdValue {
    let mut top = BigUint::one();
    for &n in num {
        match fact_over(n, scale) {
            Some(f) => top *= f,
            None => return SurdValue::zero(),
        }
    }
    let mut bottom = BigUint::one();
    for &n in den {
        match fact_over(n, scale) {
            Some(f) => bottom *= f,
            None => return SurdValue::zero(),
        }
    }
    SurdValue::sqrt(from_biguint(top) / from_biguint(bottom)).expect("ratio of factorials is positive")
}

/// Factor of `(P,0) ⊗ (0,Q) → (P,Q)` at node `(i, y)` and first-factor
/// hypercharge `μ`; zero outside the `μ` window.
pub fn closed_form_pq(p: u32, q: u32, i: Half, y: Third, mu: Third) -> Result<SurdValue, IsoscalarError> {
    let s = IrrepLabel::new(p, q);
    require_node(s, i, y)?;
    let (p, q) = (p as i64, q as i64);
    let (i2, y3, m3) = (i.0 as i64, y.0 as i64, mu.0 as i64);
    // μ must be a hypercharge of (P,0) and y−μ one of (0,Q).
    if (p - m3).rem_euclid(3) != 0 || m3 < -2 * p || m3 > p || y3 - m3 < -q || y3 - m3 > 2 * q {
        return Ok(SurdValue::zero());
    }
    // Arguments in sixths: 6·i = 3·i2, 6·(y/2) = y3, 6·μ = 2·m3.
    let num = [
        2 * p + 4 * q + 3 * i2 + y3 + 6,
        2 * p + 4 * q - 3 * i2 + y3,
        4 * p + 2 * q - 3 * i2 - y3,
        4 * p + 2 * q + 3 * i2 - y3 + 6,
    ];
    let den = [
        6 * (p + q + 1),
        2 * p + 2 * q + 3 * i2 - y3 + 6 + 2 * m3,
        2 * p + 2 * q - 3 * i2 - y3 + 2 * m3,
        2 * p - 2 * m3,
        2 * q + 2 * y3 - 2 * m3,
    ];
    Ok(factorial_ratio(&num, &den, 6))
}

/// Factor of `(P1,0) ⊗ (P2,0) → (P1+P2,0)` at hypercharge `y` and
/// first-factor hypercharge `μ`; zero outside the `μ` window.
pub fn closed_form_pp(p1: u32, p2: u32, y: Third, mu: Third) -> Result<SurdValue, IsoscalarError> {
    let s = IrrepLabel::new(p1 + p2, 0);
    let i = Half((2 * (p1 + p2) as i32 + y.0) / 3);
    if (2 * (p1 + p2) as i32 + y.0) % 3 != 0 {
        return Err(IsoscalarError::BadState { s, i, y });
    }
    require_node(s, i, y)?;
    let (p1, p2) = (p1 as i64, p2 as i64);
    let (y3, m3) = (y.0 as i64, mu.0 as i64);
    if (p1 - m3).rem_euclid(3) != 0 {
        return Ok(SurdValue::zero());
    }
    let num = [3 * p1, 3 * p2, p1 + p2 - y3, 2 * (p1 + p2) + y3];
    let den = [3 * (p1 + p2), p1 - m3, 2 * p2 + y3 - m3, 2 * p1 + m3, p2 - y3 + m3];
    Ok(factorial_ratio(&num, &den, 3))
}

/// Factor of `(0,Q1) ⊗ (0,Q2) → (0,Q1+Q2)`, by reflection of the
/// `(Q1,0) ⊗ (Q2,0)` factor at `(−y, −μ)`.
pub fn closed_form_qq(q1: u32, q2: u32, y: Third, mu: Third) -> Result<SurdValue, IsoscalarError> {
    closed_form_pp(q1, q2, -y, -mu).map_err(|e| match e {
        IsoscalarError::BadState { i, y, .. } => IsoscalarError::BadState {
            s: IrrepLabel::new(0, q1 + q2),
            i,
            y: -y,
        },
        other => other,
    })
}

/// Factor of the scalar in `(P,Q) ⊗ (Q,P)` at `(μ, j, j)`; zero when `j` is
/// not an isospin of `(P,Q)` at hypercharge `μ`.
pub fn scalar_factors(p: u32, q: u32, mu: Third, j: Half) -> SurdValue {
    let s = IrrepLabel::new(p, q);
    if !contains_node(s, j, mu) {
        return SurdValue::zero();
    }
    let t = triality(s) as i64;
    let (p, q) = (p as i64, q as i64);
    // Exponent in sixths: t/3 + μ/2 + j + (t+2P+Q)/3.
    let sign = parity_sign(2 * t + mu.0 as i64 + 3 * j.0 as i64 + 2 * (t + 2 * p + q), 6);
    SurdValue::new(sign, rat(j.0 as i64 + 1, dimension(s) as i64)).expect("positive radicand")
}

/// `(−1)^{t/3 + i3 + y/2}`: `|QP; i, −i3, −y⟩ = phase · |PQ; i, i3, y⟩*`.
pub fn conjugation_phase(s: IrrepLabel, state: &CanonicalState) -> i8 {
    let t = triality(s) as i64;
    parity_sign(2 * t + 3 * state.i3.0 as i64 + state.y.0 as i64, 6)
}

/// The table of `conj(s1) ⊗ conj(s2) → conj(s)` obtained by conjugating
/// every state of a table of `s1 ⊗ s2 → s`.
///
/// Row `(i, y)` becomes row `(i, −y)`, point `(μ, j, k)` becomes `(−μ, j, k)`,
/// and each factor picks up
/// `(−1)^{j+k−i} · ph_s(i, y) · ph_{s1}(j, μ) · ph_{s2}(i−j, y−μ)` where
/// `ph` is [`conjugation_phase`] evaluated at the `i3` values of the
/// stretched projection `M = i`, `m = j`.
pub fn conjugate_table(table: &IsoscalarTable) -> IsoscalarTable {
    let (s1, s2, s) = (table.s1, table.s2, table.s);
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let (i, y) = (row.i, row.y);
            let ph_s = conjugation_phase(s, &CanonicalState::new(i, i, y));
            let mut entries: Vec<(CouplingPoint, f64, Option<SurdValue>)> = row
                .points
                .iter()
                .enumerate()
                .map(|(n, p)| {
                    let nu = y - p.mu;
                    let ph1 = conjugation_phase(s1, &CanonicalState::new(p.j, p.j, p.mu));
                    let ph2 = conjugation_phase(s2, &CanonicalState::new(p.k, i - p.j, nu));
                    let su2 = parity_sign((p.j.0 + p.k.0 - i.0) as i64, 2);
                    let sign = ph_s * ph1 * ph2 * su2;
                    let exact = row.exact.as_ref().map(|e| {
                        if sign < 0 {
                            -e[n].clone()
                        } else {
                            e[n].clone()
                        }
                    });
                    (CouplingPoint::new(-p.mu, p.j, p.k), sign as f64 * row.values[n], exact)
                })
                .collect();
            entries.sort_by_key(|e| e.0);
            let exact = row
                .exact
                .as_ref()
                .map(|_| entries.iter().map(|e| e.2.clone().expect("present")).collect());
            IsoscalarRow {
                i,
                y: -y,
                points: entries.iter().map(|e| e.0).collect(),
                values: entries.iter().map(|e| e.1).collect(),
                exact,
            }
        })
        .collect();
    IsoscalarTable::new(
        conjugate(s1),
        conjugate(s2),
        conjugate(s),
        table.gamma,
        rows,
        table.provenance,
    )
}

/// The exact table for a coupling covered by a closed form, or `None`.
///
/// Covered: `(P,0) ⊗ (0,Q) → (P,Q)`, `(P1,0) ⊗ (P2,0) → (P1+P2,0)`,
/// `(0,Q1) ⊗ (0,Q2) → (0,Q1+Q2)`, and `(P,Q) ⊗ (Q,P) → (0,0)`.
pub fn closed_form_table(s1: IrrepLabel, s2: IrrepLabel, s: IrrepLabel) -> Option<IsoscalarTable> {
    type Factor = dyn Fn(Half, Third, &CouplingPoint) -> SurdValue;
    let f: alloc::boxed::Box<Factor> = if s1.q == 0 && s2.p == 0 && s == IrrepLabel::new(s1.p, s2.q) {
        let (p, q) = (s1.p, s2.q);
        alloc::boxed::Box::new(move |i, y, pt: &CouplingPoint| {
            closed_form_pq(p, q, i, y, pt.mu).expect("node of the lattice")
        })
    } else if s1.q == 0 && s2.q == 0 && s == IrrepLabel::new(s1.p + s2.p, 0) {
        let (p1, p2) = (s1.p, s2.p);
        alloc::boxed::Box::new(move |_, y, pt: &CouplingPoint| {
            closed_form_pp(p1, p2, y, pt.mu).expect("node of the lattice")
        })
    } else if s1.p == 0 && s2.p == 0 && s == IrrepLabel::new(0, s1.q + s2.q) {
        let (q1, q2) = (s1.q, s2.q);
        alloc::boxed::Box::new(move |_, y, pt: &CouplingPoint| {
            closed_form_qq(q1, q2, y, pt.mu).expect("node of the lattice")
        })
    } else if s2 == conjugate(s1) && s == IrrepLabel::new(0, 0) {
        let (p, q) = (s1.p, s1.q);
        alloc::boxed::Box::new(move |_, _, pt: &CouplingPoint| scalar_factors(p, q, pt.mu, pt.j))
    } else {
        return None;
    };
    let rows = nodes(s)
        .into_iter()
        .map(|(i, y)| {
            let points = row_lattice(s1, s2, i, y);
            let exact: Vec<SurdValue> = points.iter().map(|pt| f(i, y, pt)).collect();
            IsoscalarRow {
                i,
                y,
                values: exact.iter().map(SurdValue::to_f64).collect(),
                points,
                exact: Some(exact),
            }
        })
        .collect();
    Some(IsoscalarTable::new(s1, s2, s, 0, rows, Provenance::ClosedForm))
}

/// Isospins `j` with `(μ, j, j)` admissible for the scalar in `(P,Q) ⊗ (Q,P)`.
pub fn scalar_points(p: u32, q: u32) -> Vec<CouplingPoint> {
    let s = IrrepLabel::new(p, q);
    let mut out: Vec<CouplingPoint> = crate::irrep::hypercharges(s)
        .flat_map(|mu| isospins_at(s, mu).map(move |j| CouplingPoint::new(mu, j, j)))
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isoscalar::isoscalar_tables;
    use crate::scalar::surd_sum;
    use proptest::prelude::*;

    fn l(p: u32, q: u32) -> IrrepLabel {
        IrrepLabel::new(p, q)
    }

    fn surd(sign: i8, n: i64, d: i64) -> SurdValue {
        SurdValue::new(sign, rat(n, d)).unwrap()
    }

    #[test]
    fn pq_examples() {
        assert_eq!(closed_form_pq(1, 1, Half(1), Third(3), Third(1)).unwrap(), SurdValue::one());
        // On the line μ = P/3 through the top, the factor is 1.
        assert_eq!(closed_form_pq(3, 2, Half(3), Third(7), Third(3)).unwrap(), SurdValue::one());
        assert!(closed_form_pq(1, 1, Half(1), Third(3), Third(-2)).unwrap().is_zero());
        assert!(matches!(
            closed_form_pq(1, 1, Half(3), Third(3), Third(1)),
            Err(IsoscalarError::BadState { .. })
        ));
    }

    #[test]
    fn pp_examples() {
        assert_eq!(closed_form_pp(1, 1, Third(2), Third(1)).unwrap(), SurdValue::one());
        // Stretched top of (P1+P2,0): the product of top states.
        assert_eq!(closed_form_pp(3, 2, Third(5), Third(3)).unwrap(), SurdValue::one());
        // (1,0)⊗(1,0) → (2,0) at y = −1/3, i = ½: both entries √½.
        assert_eq!(closed_form_pp(1, 1, Third(-1), Third(1)).unwrap(), surd(1, 1, 2));
        assert_eq!(closed_form_pp(1, 1, Third(-1), Third(-2)).unwrap(), surd(1, 1, 2));
    }

    #[test]
    fn scalar_examples() {
        assert_eq!(scalar_factors(1, 1, Third(0), Half(2)), surd(1, 3, 8));
        assert_eq!(scalar_factors(1, 1, Third(-3), Half(1)), surd(-1, 1, 4));
        assert_eq!(scalar_factors(1, 1, Third(0), Half(0)), surd(-1, 1, 8));
        assert_eq!(scalar_factors(1, 1, Third(3), Half(1)), surd(1, 1, 4));
        assert_eq!(scalar_factors(1, 0, Third(1), Half(1)), surd(1, 2, 3));
        assert_eq!(scalar_factors(1, 0, Third(-2), Half(0)), surd(-1, 1, 3));
        assert_eq!(scalar_factors(0, 0, Third(0), Half(0)), SurdValue::one());
        assert!(scalar_factors(1, 1, Third(3), Half(2)).is_zero());
    }

    #[test]
    fn scalar_rows_are_normalised_exactly() {
        for p in 0..5 {
            for q in 0..5 {
                let squares: Vec<SurdValue> = scalar_points(p, q)
                    .iter()
                    .map(|pt| {
                        let v = scalar_factors(p, q, pt.mu, pt.j);
                        SurdValue::from_rational(v.radicand())
                    })
                    .collect();
                assert_eq!(surd_sum(&squares).unwrap(), SurdValue::one());
            }
        }
    }

    #[test]
    fn conjugation_phase_examples() {
        let octet_top = CanonicalState::new(Half(2), Half(2), Third(0));
        assert_eq!(conjugation_phase(l(1, 1), &octet_top), -1);
        assert_eq!(conjugation_phase(l(0, 0), &CanonicalState::default()), 1);
    }

    #[test]
    fn conjugate_of_decuplet_gives_antidecuplet_sign() {
        let t = &isoscalar_tables(l(1, 1), l(1, 1), l(3, 0)).unwrap()[0];
        let bottom = t.row(Half(0), Third(-6)).unwrap();
        assert_eq!(bottom.values.len(), 1);
        assert!((bottom.values[0] - 1.0).abs() < 1e-12);
        let c = conjugate_table(t);
        assert_eq!(c.s, l(0, 3));
        let top = c.row(Half(0), Third(6)).unwrap();
        assert!((top.values[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn conjugate_tables_agree_with_direct_ones_up_to_sign() {
        for (a, b) in [((1, 0), (1, 0)), ((2, 1), (1, 0)), ((1, 1), (2, 0)), ((2, 0), (0, 1))] {
            let (s1, s2) = (l(a.0, a.1), l(b.0, b.1));
            for term in crate::series::series_general(s1, s2) {
                if term.multiplicity != 1 {
                    continue;
                }
                let t = &isoscalar_tables(s1, s2, term.irrep).unwrap()[0];
                let c = conjugate_table(t);
                let d = &isoscalar_tables(conjugate(s1), conjugate(s2), conjugate(term.irrep)).unwrap()[0];
                let sign = c.rows[0].values.iter().zip(&d.rows[0].values).map(|(x, y)| x * y).sum::<f64>();
                assert!((sign.abs() - 1.0).abs() < 1e-12);
                for (rc, rd) in c.rows.iter().zip(&d.rows) {
                    assert_eq!((rc.i, rc.y, &rc.points), (rd.i, rd.y, &rd.points));
                    for (x, y) in rc.values.iter().zip(&rd.values) {
                        assert!((x - sign * y).abs() < 1e-12);
                    }
                }
            }
        }
    }

    fn assert_tables_match(s1: IrrepLabel, s2: IrrepLabel, s: IrrepLabel) {
        let exact = closed_form_table(s1, s2, s).expect("closed-form family");
        let rec = &isoscalar_tables(s1, s2, s).unwrap()[0];
        assert_eq!(exact.rows.len(), rec.rows.len());
        for (a, b) in exact.rows.iter().zip(&rec.rows) {
            assert_eq!((a.i, a.y, &a.points), (b.i, b.y, &b.points));
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() < 1e-12, "{s1}⊗{s2}→{s} row ({}, {})", a.i, a.y);
            }
        }
    }

    #[test]
    fn closed_forms_agree_with_recurrence() {
        for a in 0..4 {
            for b in 0..4 {
                assert_tables_match(l(a, 0), l(0, b), l(a, b));
                assert_tables_match(l(a, 0), l(b, 0), l(a + b, 0));
                assert_tables_match(l(0, a), l(0, b), l(0, a + b));
            }
        }
        for p in 0..3 {
            for q in 0..3 {
                assert_tables_match(l(p, q), l(q, p), l(0, 0));
            }
        }
    }

    proptest! {
        #[test]
        fn pq_symmetry(p in 0u32..5, q in 0u32..5) {
            for (i, y) in nodes(l(p, q)) {
                for mu3 in -2 * p as i32..=p as i32 {
                    let mu = Third(mu3);
                    let a = closed_form_pq(p, q, i, y, mu).unwrap();
                    let b = closed_form_pq(q, p, i, -y, mu - y).unwrap();
                    prop_assert_eq!(a, b);
                }
            }
        }

        #[test]
        fn pq_rows_are_normalised_exactly(p in 0u32..6, q in 0u32..6) {
            let s = l(p, q);
            for (i, y) in nodes(s) {
                let squares: Vec<SurdValue> = row_lattice(l(p, 0), l(0, q), i, y)
                    .iter()
                    .map(|pt| SurdValue::from_rational(closed_form_pq(p, q, i, y, pt.mu).unwrap().radicand()))
                    .collect();
                prop_assert_eq!(surd_sum(&squares).unwrap(), SurdValue::one());
            }
        }

        #[test]
        fn pp_qq_reflection(p1 in 0u32..5, p2 in 0u32..5) {
            for (_, y) in nodes(l(p1 + p2, 0)) {
                for mu3 in -2 * p1 as i32..=p1 as i32 {
                    let a = closed_form_pp(p1, p2, y, Third(mu3)).unwrap();
                    let b = closed_form_qq(p1, p2, -y, Third(-mu3)).unwrap();
                    prop_assert_eq!(a, b);
                }
            }
        }
    }
}
