//! Clebsch–Gordan series: the decomposition of `D(P1,Q1) ⊗ D(P2,Q2)` into
//! irreps with multiplicities.
//!
//! The general product is reduced in two stages.  Contracting `m` upper
//! indices of the first factor against lower indices of the second (and `n`
//! the other way round) splits the product into traceless blocks
//! `V(r, r'; s, s')` with
//!
//! ```text
//! r = P1 − m,  r' = P2 − n,  s = Q1 − n,  s' = Q2 − m,
//! 0 ≤ m ≤ min(P1, Q2),  0 ≤ n ≤ min(P2, Q1).
//! ```
//!
//! Each block then decomposes as
//!
//! ```text
//! V(r, r'; s, s') = D(r+r', s+s')
//!                 ⊕ Σ_{k=1..min(r,r')} D(r+r'−2k, s+s'+k)
//!                 ⊕ Σ_{k=1..min(s,s')} D(r+r'+k, s+s'−2k).
//! ```

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::irrep::IrrepLabel;

/// One irrep of a decomposition together with its multiplicity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesTerm {
    /// The irrep.
    pub irrep: IrrepLabel,
    /// How many times it occurs (always at least one).
    pub multiplicity: u32,
}

/// Canonical ordering of a series: descending `P+Q`, then descending `P`.
fn finish(counts: BTreeMap<IrrepLabel, u32>) -> Vec<SeriesTerm> {
    let mut out: Vec<SeriesTerm> = counts
        .into_iter()
        .filter(|(_, m)| *m > 0)
        .map(|(irrep, multiplicity)| SeriesTerm {
            irrep,
            multiplicity,
        })
        .collect();
    out.sort_by(|a, b| {
        (b.irrep.p + b.irrep.q)
            .cmp(&(a.irrep.p + a.irrep.q))
            .then(b.irrep.p.cmp(&a.irrep.p))
    });
    out
}

fn single(terms: impl IntoIterator<Item = IrrepLabel>) -> Vec<SeriesTerm> {
    let mut counts = BTreeMap::new();
    for t in terms {
        *counts.entry(t).or_insert(0) += 1;
    }
    finish(counts)
}

/// `D(P1,0) ⊗ D(P2,0) = Σ_{k=0..min(P1,P2)} D(P1+P2−2k, k)`.
pub fn series_pp(p1: u32, p2: u32) -> Vec<SeriesTerm> {
    single((0..=p1.min(p2)).map(|k| IrrepLabel::new(p1 + p2 - 2 * k, k)))
}

/// `D(0,Q1) ⊗ D(0,Q2) = Σ_{k=0..min(Q1,Q2)} D(k, Q1+Q2−2k)`.
pub fn series_qq(q1: u32, q2: u32) -> Vec<SeriesTerm> {
    single((0..=q1.min(q2)).map(|k| IrrepLabel::new(k, q1 + q2 - 2 * k)))
}

/// `D(P,0) ⊗ D(0,Q) = Σ_{k=0..min(P,Q)} D(P−k, Q−k)`.
pub fn series_pq(p: u32, q: u32) -> Vec<SeriesTerm> {
    single((0..=p.min(q)).map(|k| IrrepLabel::new(p - k, q - k)))
}

/// Irreps of one traceless block `V(r, r'; s, s')`.
fn block_terms(r: u32, rp: u32, s: u32, sp: u32, out: &mut BTreeMap<IrrepLabel, u32>) {
    let mut add = |l: IrrepLabel| *out.entry(l).or_insert(0) += 1;
    add(IrrepLabel::new(r + rp, s + sp));
    for k in 1..=r.min(rp) {
        add(IrrepLabel::new(r + rp - 2 * k, s + sp + k));
    }
    for k in 1..=s.min(sp) {
        add(IrrepLabel::new(r + rp + k, s + sp - 2 * k));
    }
}

/// Decomposition of an arbitrary product `D(P1,Q1) ⊗ D(P2,Q2)`, with like
/// terms merged into multiplicities.
pub fn series_general(s1: IrrepLabel, s2: IrrepLabel) -> Vec<SeriesTerm> {
    let mut counts = BTreeMap::new();
    // The bounds m ≤ min(P1,Q2), n ≤ min(P2,Q1) keep every block label
    // non-negative, so no further pruning is needed.
    for m in 0..=s1.p.min(s2.q) {
        for n in 0..=s2.p.min(s1.q) {
            block_terms(s1.p - m, s2.p - n, s1.q - n, s2.q - m, &mut counts);
        }
    }
    finish(counts)
}

/// Multiplicity of `s` in `s1 ⊗ s2` (zero when absent).
pub fn multiplicity(s1: IrrepLabel, s2: IrrepLabel, s: IrrepLabel) -> u32 {
    series_general(s1, s2)
        .iter()
        .find(|t| t.irrep == s)
        .map_or(0, |t| t.multiplicity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irrep::{conjugate, dimension, enumerate_basis};
    use proptest::prelude::*;

    fn l(p: u32, q: u32) -> IrrepLabel {
        IrrepLabel::new(p, q)
    }

    fn terms(v: &[((u32, u32), u32)]) -> Vec<SeriesTerm> {
        v.iter()
            .map(|&((p, q), m)| SeriesTerm {
                irrep: l(p, q),
                multiplicity: m,
            })
            .collect()
    }

    /// Weights of a representation as Dynkin-coordinate pairs
    /// `(i3 + 3y/2, i3 − 3y/2)`, with multiplicity.
    fn weights(s: IrrepLabel) -> BTreeMap<(i32, i32), i64> {
        let mut w = BTreeMap::new();
        for st in enumerate_basis(s) {
            let key = ((st.i3.0 + st.y.0) / 2, (st.i3.0 - st.y.0) / 2);
            *w.entry(key).or_insert(0) += 1;
        }
        w
    }

    /// Decompose a product by repeatedly removing the character of the
    /// irrep whose highest weight has the largest height `a + b`.
    fn peel(s1: IrrepLabel, s2: IrrepLabel) -> BTreeMap<IrrepLabel, u32> {
        let mut prod: BTreeMap<(i32, i32), i64> = BTreeMap::new();
        for (w1, c1) in weights(s1) {
            for (w2, c2) in weights(s2) {
                *prod.entry((w1.0 + w2.0, w1.1 + w2.1)).or_insert(0) += c1 * c2;
            }
        }
        let mut out = BTreeMap::new();
        loop {
            prod.retain(|_, c| *c != 0);
            let Some((&(a, b), &c)) = prod.iter().max_by_key(|((a, b), _)| (a + b, *a)) else {
                break;
            };
            assert!(a >= 0 && b >= 0 && c > 0, "peeling hit a non-dominant weight");
            let s = l(a as u32, b as u32);
            for (w, k) in weights(s) {
                *prod.entry(w).or_insert(0) -= c * k;
            }
            *out.entry(s).or_insert(0) += c as u32;
        }
        out
    }

    #[test]
    fn special_families() {
        assert_eq!(series_pp(1, 1), terms(&[((2, 0), 1), ((0, 1), 1)]));
        assert_eq!(series_pp(2, 1), terms(&[((3, 0), 1), ((1, 1), 1)]));
        assert_eq!(series_pp(4, 0), terms(&[((4, 0), 1)]));
        assert_eq!(series_qq(1, 1), terms(&[((0, 2), 1), ((1, 0), 1)]));
        assert_eq!(series_qq(3, 0), terms(&[((0, 3), 1)]));
        assert_eq!(series_pq(1, 1), terms(&[((1, 1), 1), ((0, 0), 1)]));
        assert_eq!(series_pq(2, 1), terms(&[((2, 1), 1), ((1, 0), 1)]));
        assert_eq!(series_pq(3, 0), terms(&[((3, 0), 1)]));
    }

    #[test]
    fn octet_times_octet() {
        assert_eq!(
            series_general(l(1, 1), l(1, 1)),
            terms(&[((2, 2), 1), ((3, 0), 1), ((0, 3), 1), ((1, 1), 2), ((0, 0), 1)])
        );
        assert_eq!(multiplicity(l(1, 1), l(1, 1), l(1, 1)), 2);
        assert_eq!(multiplicity(l(1, 1), l(1, 1), l(2, 0)), 0);
    }

    #[test]
    fn trivial_factor_and_triplet_antitriplet() {
        for p in 0..4 {
            for q in 0..4 {
                assert_eq!(series_general(l(p, q), l(0, 0)), terms(&[((p, q), 1)]));
                assert_eq!(series_general(l(0, 0), l(p, q)), terms(&[((p, q), 1)]));
            }
        }
        assert_eq!(
            series_general(l(1, 0), l(0, 1)),
            terms(&[((1, 1), 1), ((0, 0), 1)])
        );
    }

    #[test]
    fn general_specialises_to_families() {
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(series_general(l(a, 0), l(b, 0)), series_pp(a, b));
                assert_eq!(series_general(l(0, a), l(0, b)), series_qq(a, b));
                assert_eq!(series_general(l(a, 0), l(0, b)), series_pq(a, b));
            }
        }
    }

    #[test]
    fn dimension_sum_rule_exhaustive() {
        for p1 in 0..=3 {
            for q1 in 0..=3 {
                for p2 in 0..=3 {
                    for q2 in 0..=3 {
                        let (s1, s2) = (l(p1, q1), l(p2, q2));
                        let total: u64 = series_general(s1, s2)
                            .iter()
                            .map(|t| t.multiplicity as u64 * dimension(t.irrep))
                            .sum();
                        assert_eq!(total, dimension(s1) * dimension(s2), "{s1}⊗{s2}");
                    }
                }
            }
        }
    }

    #[test]
    fn self_product_multiplicity() {
        for p in 0..=3 {
            assert_eq!(multiplicity(l(p, p), l(p, p), l(p, p)), 1 + p);
        }
    }

    #[test]
    fn matches_weight_peeling() {
        for p1 in 0..=3 {
            for q1 in 0..=3 {
                for p2 in 0..=2 {
                    for q2 in 0..=2 {
                        let (s1, s2) = (l(p1, q1), l(p2, q2));
                        let peeled = finish(peel(s1, s2));
                        assert_eq!(series_general(s1, s2), peeled, "{s1}⊗{s2}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn conjugation_covariance(p1 in 0u32..5, q1 in 0u32..5, p2 in 0u32..5, q2 in 0u32..5) {
            let s1 = l(p1, q1);
            let s2 = l(p2, q2);
            let direct: BTreeMap<_, _> = series_general(s1, s2)
                .into_iter()
                .map(|t| (conjugate(t.irrep), t.multiplicity))
                .collect();
            let mirrored: BTreeMap<_, _> = series_general(conjugate(s1), conjugate(s2))
                .into_iter()
                .map(|t| (t.irrep, t.multiplicity))
                .collect();
            prop_assert_eq!(direct, mirrored);
        }

        #[test]
        fn product_is_commutative(p1 in 0u32..5, q1 in 0u32..5, p2 in 0u32..5, q2 in 0u32..5) {
            prop_assert_eq!(series_general(l(p1, q1), l(p2, q2)), series_general(l(p2, q2), l(p1, q1)));
        }
    }
}
