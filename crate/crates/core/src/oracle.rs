//! Brute-force reduction of `D(s1) ⊗ D(s2)` by dense linear algebra.
//!
//! Nothing here uses isoscalar factors: the product space carries the
//! coproduct generators `G ⊗ 1 + 1 ⊗ G`, highest-weight vectors are null
//! vectors of the total raising operators, each irreducible subspace is
//! spanned by lowering, its states are labelled by diagonalising `I²` inside
//! each weight space, and their phases are fixed by demanding that the
//! generator matrices of the subspace reproduce those of [`crate::generators`].
//! The result is a table of Clebsch–Gordan coefficients against which the
//! recurrence and the closed forms are checked.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
#[allow(unused_imports)] // float methods come from here when std is absent
use num_traits::Float;

use crate::generators::{apply_f64, build_generator_matrices, Generator, GeneratorMatrixSet};
use crate::irrep::{
    dimension, enumerate_basis, isospins_at, top_state, weight_multiplicity, CanonicalState, IrrepLabel,
};
use crate::isoscalar::coupled::{coupled_state, ProductVector};
use crate::isoscalar::{
    isoscalar_tables, row_lattice, IsoscalarError, IsoscalarRow, IsoscalarTable, Provenance,
};
use crate::linalg::{max_abs, null_space, push_orthonormal, SparseColumns, NULL_SPACE_REL_TOL};
use crate::scalar::{Half, Third};
use crate::series::{multiplicity, series_general};

/// Default bound on `dim(s1)·dim(s2)` accepted by [`build_product`].
pub const DEFAULT_PRODUCT_CAP: usize = 1024;

/// Residual norm below which a lowered vector is considered already spanned.
const SPAN_TOL: f64 = 1e-8;

/// Matrix elements at or below this magnitude cannot fix a relative phase.
const PHASE_TOL: f64 = 1e-8;

/// `I²` eigenvalues closer than this are not separated.
const LABEL_GAP: f64 = 1e-6;

/// `I²` eigenvalues must match `i(i+1)` to this tolerance.
const LABEL_TOL: f64 = 1e-8;

/// Errors of the brute-force reduction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    /// The product space is larger than the configured cap.
    #[error("product dimension {dim} exceeds the cap {cap}")]
    CapExceeded {
        /// `dim(s1)·dim(s2)`.
        dim: usize,
        /// Configured cap.
        cap: usize,
    },
    /// `s` does not occur in the product.
    #[error("{s} does not occur in {s1} ⊗ {s2}")]
    NotInSeries {
        /// First factor.
        s1: IrrepLabel,
        /// Second factor.
        s2: IrrepLabel,
        /// Requested irrep.
        s: IrrepLabel,
    },
    /// A subspace has the wrong dimension.
    #[error("{what} for {s} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        /// Which subspace.
        what: &'static str,
        /// Irrep concerned.
        s: IrrepLabel,
        /// Expected dimension.
        expected: usize,
        /// Dimension found.
        found: usize,
    },
    /// `I²` does not separate the states of one weight, or its eigenvalues
    /// are not the expected `i(i+1)`.
    #[error("isospin labelling of {s} fails at weight (i3 = {i3}, y = {y})")]
    DegenerateLabeling {
        /// Irrep concerned.
        s: IrrepLabel,
        /// Weight component `i3`.
        i3: Half,
        /// Weight component `y`.
        y: Third,
    },
    /// No raising operator links a state to an already phased one.
    #[error("no phase reference for {state} of {s}")]
    PhaseUnresolved {
        /// Irrep concerned.
        s: IrrepLabel,
        /// State whose phase could not be fixed.
        state: CanonicalState,
    },
    /// The recurrence failed while being compared.
    #[error(transparent)]
    Isoscalar(#[from] IsoscalarError),
}

/// `D(s1) ⊗ D(s2)` with dense coproduct generator matrices.
///
/// Basis vector `a·dim(s2) + b` is `|basis1[a]⟩ ⊗ |basis2[b]⟩`.
#[derive(Clone, Debug)]
pub struct ProductSpace {
    /// First factor.
    pub s1: IrrepLabel,
    /// Second factor.
    pub s2: IrrepLabel,
    /// Generator matrices of the first factor.
    pub factor1: GeneratorMatrixSet,
    /// Generator matrices of the second factor.
    pub factor2: GeneratorMatrixSet,
    /// Total generators, in [`Generator::ALL`] order.
    generators: Vec<DMatrix<f64>>,
    /// The same, column-sparse.
    sparse: Vec<SparseColumns>,
}

impl ProductSpace {
    /// Dimension of the product space.
    pub fn dim(&self) -> usize {
        self.factor1.dim() * self.factor2.dim()
    }

    /// Index of the product state `a ⊗ b`.
    pub fn index(&self, a: &CanonicalState, b: &CanonicalState) -> Option<usize> {
        let ia = self.factor1.basis.binary_search(a).ok()?;
        let ib = self.factor2.basis.binary_search(b).ok()?;
        Some(ia * self.factor2.dim() + ib)
    }

    /// The product state at index `n`.
    pub fn state(&self, n: usize) -> (CanonicalState, CanonicalState) {
        let d2 = self.factor2.dim();
        (self.factor1.basis[n / d2], self.factor2.basis[n % d2])
    }

    /// Total generator `g ⊗ 1 + 1 ⊗ g`.
    pub fn generator(&self, g: Generator) -> &DMatrix<f64> {
        &self.generators[slot(g)]
    }

    /// `(g ⊗ 1 + 1 ⊗ g) v`, using the sparse form.
    pub fn apply(&self, g: Generator, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(self.sparse[slot(g)].mul_vec(v.as_slice()))
    }

    /// `I² v = I− I+ v + I3 (I3 v) + I3 v`.
    fn apply_isospin_squared(&self, v: &DVector<f64>) -> DVector<f64> {
        let i3v = self.apply(Generator::I3, v);
        self.apply(Generator::IMinus, &self.apply(Generator::IPlus, v)) + self.apply(Generator::I3, &i3v) + i3v
    }

    /// Total Cartan–Weyl generator `A^i_k` (indices `1..=3`).
    pub fn cartan_weyl(&self, i: usize, k: usize) -> DMatrix<f64> {
        let id1 = DMatrix::identity(self.factor1.dim(), self.factor1.dim());
        let id2 = DMatrix::identity(self.factor2.dim(), self.factor2.dim());
        self.factor1.cartan_weyl(i, k).kronecker(&id2) + id1.kronecker(&self.factor2.cartan_weyl(i, k))
    }

    /// Total isospin `I² = I− I+ + I3² + I3`.
    pub fn isospin_squared(&self) -> DMatrix<f64> {
        let i3 = self.generator(Generator::I3);
        self.generator(Generator::IMinus) * self.generator(Generator::IPlus) + i3 * i3 + i3
    }

    /// Quadratic Casimir `F = ½ Σ A^i_k A^k_i` of the total generators.
    #[allow(clippy::needless_range_loop)]
    pub fn casimir_f(&self) -> DMatrix<f64> {
        let a = self.all_cartan_weyl();
        let n = self.dim();
        let mut f = DMatrix::zeros(n, n);
        for i in 0..3 {
            for k in 0..3 {
                f += &a[i][k] * &a[k][i] * 0.5;
            }
        }
        f
    }

    /// Cubic Casimir `G = ½ Σ (A^i_l A^k_i A^l_k + A^l_i A^i_k A^k_l)` of
    /// the total generators.
    pub fn casimir_g(&self) -> DMatrix<f64> {
        let a = self.all_cartan_weyl();
        let n = self.dim();
        let mut g = DMatrix::zeros(n, n);
        for i in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    g += (&a[i][l] * &a[k][i] * &a[l][k] + &a[l][i] * &a[i][k] * &a[k][l]) * 0.5;
                }
            }
        }
        g
    }

    fn all_cartan_weyl(&self) -> Vec<Vec<DMatrix<f64>>> {
        (1..=3)
            .map(|i| (1..=3).map(|k| self.cartan_weyl(i, k)).collect())
            .collect()
    }

    /// Dense copy of a sparse product-space vector.
    pub fn to_dense(&self, v: &ProductVector) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        for ((a, b), x) in &v.entries {
            let n = self.index(a, b).expect("vector lives in this product space");
            out[n] += x;
        }
        out
    }

    /// Diagonal weight `(i3, y)` of product basis vector `n`.
    fn weight(&self, n: usize) -> (Half, Third) {
        let (a, b) = self.state(n);
        (a.i3 + b.i3, a.y + b.y)
    }
}

fn slot(g: Generator) -> usize {
    Generator::ALL.iter().position(|h| *h == g).expect("listed generator")
}

/// Build the product space, refusing if `dim(s1)·dim(s2) > cap`.
pub fn build_product(s1: IrrepLabel, s2: IrrepLabel, cap: usize) -> Result<ProductSpace, OracleError> {
    let dim = (dimension(s1) * dimension(s2)) as usize;
    if dim > cap {
        return Err(OracleError::CapExceeded { dim, cap });
    }
    let factor1 = build_generator_matrices(s1);
    let factor2 = build_generator_matrices(s2);
    let (d1, d2) = (factor1.dim(), factor2.dim());
    let sparse: Vec<SparseColumns> = Generator::ALL
        .iter()
        .map(|&g| {
            let (g1, g2) = (factor1.sparse(g), factor2.sparse(g));
            let mut m = SparseColumns::zeros(dim, dim);
            for a in 0..d1 {
                for b in 0..d2 {
                    let col = &mut m.cols[a * d2 + b];
                    col.extend(g1.cols[a].iter().map(|&(r, x)| (r * d2 + b, x)));
                    col.extend(g2.cols[b].iter().map(|&(r, x)| (a * d2 + r, x)));
                }
            }
            m
        })
        .collect();
    let generators = sparse.iter().map(SparseColumns::to_dense).collect();
    Ok(ProductSpace { s1, s2, factor1, factor2, generators, sparse })
}

/// Orthonormal basis (as columns) of the highest-weight vectors of `s`: the
/// joint null space of `I+`, `K+`, `L+` inside the weight space of the top
/// state of `s`.  Its dimension is the multiplicity of `s`.
pub fn highest_weight_subspace(ps: &ProductSpace, s: IrrepLabel) -> Result<DMatrix<f64>, OracleError> {
    let expected = multiplicity(ps.s1, ps.s2, s) as usize;
    if expected == 0 {
        return Err(OracleError::NotInSeries { s1: ps.s1, s2: ps.s2, s });
    }
    let top = top_state(s);
    let cols: Vec<usize> = (0..ps.dim()).filter(|&n| ps.weight(n) == (top.i3, top.y)).collect();
    let n = ps.dim();
    let mut stacked = DMatrix::zeros(3 * n, cols.len());
    for (block, g) in [Generator::IPlus, Generator::KPlus, Generator::LPlus].into_iter().enumerate() {
        let m = ps.generator(g);
        for (c, &col) in cols.iter().enumerate() {
            for r in 0..n {
                stacked[(block * n + r, c)] = m[(r, col)];
            }
        }
    }
    let kernel = null_space(&stacked, NULL_SPACE_REL_TOL);
    if kernel.ncols() != expected {
        return Err(OracleError::DimensionMismatch {
            what: "highest-weight subspace",
            s,
            expected,
            found: kernel.ncols(),
        });
    }
    let mut out = DMatrix::zeros(n, expected);
    for c in 0..expected {
        for (r, &row) in cols.iter().enumerate() {
            out[(row, c)] = kernel[(r, c)];
        }
    }
    Ok(out)
}

/// The canonical basis of one irreducible subspace `V^γ(s)`.
#[derive(Clone, Debug)]
pub struct IrrepBasis {
    /// The irrep.
    pub s: IrrepLabel,
    /// Index of the highest-weight vector within the highest-weight subspace.
    pub gamma: u32,
    /// Canonical states of `s`, in the fixed basis order.
    pub states: Vec<CanonicalState>,
    /// Column `n` is the product-space expansion of `states[n]`.
    pub vectors: DMatrix<f64>,
    /// Largest deviation of the generator matrices restricted to this
    /// subspace from the canonical ones.
    pub generator_defect: f64,
}

/// Span the irreducible subspace of a highest-weight vector, label its
/// states by `(i, i3, y)` and fix their phases to the canonical convention.
pub fn generate_irrep(
    ps: &ProductSpace,
    s: IrrepLabel,
    gamma: u32,
    hw: &DVector<f64>,
) -> Result<IrrepBasis, OracleError> {
    let dim = dimension(s) as usize;
    let lowering = [Generator::IMinus, Generator::KMinus, Generator::LMinus];

    // Span by repeated lowering.
    let mut span: Vec<DVector<f64>> = Vec::with_capacity(dim);
    push_orthonormal(&mut span, hw, SPAN_TOL);
    let mut next = 0;
    while next < span.len() {
        let v = span[next].clone();
        for g in lowering {
            let w = ps.apply(g, &v);
            push_orthonormal(&mut span, &w, SPAN_TOL);
        }
        next += 1;
    }
    if span.len() != dim {
        return Err(OracleError::DimensionMismatch {
            what: "lowered span",
            s,
            expected: dim,
            found: span.len(),
        });
    }

    // Group by weight and label by I².
    let mut by_weight: Vec<((Half, Third), Vec<DVector<f64>>)> = Vec::new();
    for v in span {
        let w = (
            Half((2.0 * v.dot(&ps.apply(Generator::I3, &v))).round() as i32),
            Third((3.0 * v.dot(&ps.apply(Generator::Y, &v))).round() as i32),
        );
        match by_weight.iter_mut().find(|(k, _)| *k == w) {
            Some((_, list)) => list.push(v),
            None => by_weight.push((w, vec![v])),
        }
    }
    let states = enumerate_basis(s);
    let mut labelled: Vec<Option<DVector<f64>>> = vec![None; dim];
    for ((i3, y), vs) in by_weight {
        let bad = OracleError::DegenerateLabeling { s, i3, y };
        if vs.len() != weight_multiplicity(s, i3, y) as usize {
            return Err(bad);
        }
        let mut isospins: Vec<Half> = isospins_at(s, y)
            .filter(|i| i3.abs() <= *i && (i.0 - i3.0) % 2 == 0)
            .collect();
        isospins.sort();
        let v = DMatrix::from_columns(&vs);
        let images: Vec<DVector<f64>> = vs.iter().map(|x| ps.apply_isospin_squared(x)).collect();
        let restricted = v.transpose() * DMatrix::from_columns(&images);
        let eig = SymmetricEigen::new((&restricted + restricted.transpose()) * 0.5);
        let mut order: Vec<usize> = (0..vs.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        for w in order.windows(2) {
            if eig.eigenvalues[w[1]] - eig.eigenvalues[w[0]] < LABEL_GAP {
                return Err(bad);
            }
        }
        for (&col, &i) in order.iter().zip(&isospins) {
            let expect = i.to_f64() * (i.to_f64() + 1.0);
            if (eig.eigenvalues[col] - expect).abs() > LABEL_TOL {
                return Err(bad);
            }
            let n = states
                .binary_search(&CanonicalState::new(i, i3, y))
                .expect("labelled state belongs to the irrep");
            labelled[n] = Some(&v * eig.eigenvectors.column(col));
        }
    }
    let mut vectors = DMatrix::zeros(ps.dim(), dim);
    for (n, v) in labelled.into_iter().enumerate() {
        let v = v.ok_or(OracleError::DegenerateLabeling {
            s,
            i3: states[n].i3,
            y: states[n].y,
        })?;
        vectors.set_column(n, &v);
    }

    // Phases: the top state is the given vector; every other state is
    // fixed through a raising operator into an earlier state.
    let top = hw / hw.norm();
    let sign = if vectors.column(0).dot(&top) < 0.0 { -1.0 } else { 1.0 };
    vectors.column_mut(0).scale_mut(sign);
    for t in 1..dim {
        let mut fixed = false;
        'search: for g in [Generator::IPlus, Generator::KPlus, Generator::LPlus] {
            for (u, expect) in apply_f64(s, g, &states[t]) {
                if expect.abs() <= PHASE_TOL {
                    continue;
                }
                let ui = states.binary_search(&u).expect("raised state belongs to the irrep");
                debug_assert!(ui < t);
                let actual = vectors.column(ui).dot(&ps.apply(g, &vectors.column(t).into()));
                if actual.abs() > PHASE_TOL {
                    if actual * expect < 0.0 {
                        vectors.column_mut(t).neg_mut();
                    }
                    fixed = true;
                    break 'search;
                }
            }
        }
        if !fixed {
            return Err(OracleError::PhaseUnresolved { s, state: states[t] });
        }
    }

    // With orthonormal columns V, `G V = V R` holds exactly when the
    // subspace is invariant and its matrices are the canonical `R`.
    let reference = build_generator_matrices(s);
    let mut generator_defect: f64 = 0.0;
    for g in Generator::ALL {
        let r = reference.sparse(g);
        for c in 0..dim {
            let mut d = ps.apply(g, &vectors.column(c).into());
            for &(row, x) in &r.cols[c] {
                d.axpy(-x, &vectors.column(row), 1.0);
            }
            generator_defect = generator_defect.max(d.amax());
        }
    }
    Ok(IrrepBasis { s, gamma, states, vectors, generator_defect })
}

/// Fix the sign of a highest-weight vector: its top-row isoscalar factors,
/// read in descending `(j, k, μ)` order, start with a positive entry.
fn orient_highest_weight(ps: &ProductSpace, s: IrrepLabel, hw: &mut DVector<f64>) {
    let top = top_state(s);
    let mut points = row_lattice(ps.s1, ps.s2, top.i, top.y);
    points.sort_by_key(|p| core::cmp::Reverse((p.j, p.k, p.mu)));
    for p in points {
        let c = ps.to_dense(&coupled_state(ps.s1, ps.s2, &p, top.i, top.i, top.y));
        let x = c.dot(hw);
        if x.abs() > 1e-8 {
            if x < 0.0 {
                hw.neg_mut();
            }
            return;
        }
    }
}

/// Every irreducible subspace of `s` in the product, one per multiplicity
/// index.  Highest-weight vectors are oriented by the sign rule of the
/// recurrence; for multiplicity above one the choice of basis inside the
/// highest-weight subspace is otherwise arbitrary.
pub fn reduce_irrep(ps: &ProductSpace, s: IrrepLabel) -> Result<Vec<IrrepBasis>, OracleError> {
    let hw = highest_weight_subspace(ps, s)?;
    (0..hw.ncols())
        .map(|g| {
            let mut v: DVector<f64> = hw.column(g).into();
            orient_highest_weight(ps, s, &mut v);
            generate_irrep(ps, s, g as u32, &v)
        })
        .collect()
}

/// The full reduction: every irreducible subspace, series order.
pub fn reduce(ps: &ProductSpace) -> Result<Vec<IrrepBasis>, OracleError> {
    let mut out = Vec::new();
    for term in series_general(ps.s1, ps.s2) {
        out.extend(reduce_irrep(ps, term.irrep)?);
    }
    Ok(out)
}

/// Label of one column of an oracle coefficient table.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CoupledLabel {
    /// Coupled irrep.
    pub s: IrrepLabel,
    /// Multiplicity index.
    pub gamma: u32,
    /// Canonical state.
    pub state: CanonicalState,
}

/// Clebsch–Gordan coefficients as a matrix: entry `(n, c)` is
/// `⟨product state n | coupled state c⟩`.
#[derive(Clone, Debug)]
pub struct CgcTable {
    /// Column labels.
    pub columns: Vec<CoupledLabel>,
    /// Coefficients.
    pub matrix: DMatrix<f64>,
}

impl CgcTable {
    /// `max |UᵀU − 1|` (and `max |UUᵀ − 1|` when the table is square).
    pub fn unitarity_defect(&self) -> f64 {
        let m = &self.matrix;
        let mut d = max_abs(&(m.transpose() * m - DMatrix::identity(m.ncols(), m.ncols())));
        if m.nrows() == m.ncols() {
            d = d.max(max_abs(&(m * m.transpose() - DMatrix::identity(m.nrows(), m.nrows()))));
        }
        d
    }
}

/// Collect irreducible bases into one coefficient table.
pub fn extract_cgc(ps: &ProductSpace, bases: &[IrrepBasis]) -> CgcTable {
    let total: usize = bases.iter().map(|b| b.states.len()).sum();
    let mut matrix = DMatrix::zeros(ps.dim(), total);
    let mut columns = Vec::with_capacity(total);
    let mut c = 0;
    for b in bases {
        for (n, st) in b.states.iter().enumerate() {
            matrix.set_column(c, &b.vectors.column(n));
            columns.push(CoupledLabel { s: b.s, gamma: b.gamma, state: *st });
            c += 1;
        }
    }
    CgcTable { columns, matrix }
}

/// Isoscalar factors of one oracle subspace, read off as overlaps of its
/// stretched states `|i, i, y⟩` with isospin-coupled pairs.
pub fn extract_isoscalar(ps: &ProductSpace, basis: &IrrepBasis) -> IsoscalarTable {
    let mut rows = Vec::new();
    for (n, st) in basis.states.iter().enumerate() {
        if st.i3 != st.i {
            continue;
        }
        let points = row_lattice(ps.s1, ps.s2, st.i, st.y);
        let v = basis.vectors.column(n);
        let values = points
            .iter()
            .map(|p| ps.to_dense(&coupled_state(ps.s1, ps.s2, p, st.i, st.i, st.y)).dot(&v))
            .collect();
        rows.push(IsoscalarRow::from_floats(st.i, st.y, points, values));
    }
    IsoscalarTable::new(ps.s1, ps.s2, basis.s, basis.gamma, rows, Provenance::Oracle)
}

/// The cubic operator
/// `X = ½ Σ_{ijk} (A1^i_k A1^j_i A2^k_j + A1^i_k A1^k_j A2^j_i)`
/// built from the generators of the two factors.  It commutes with every
/// total generator and separates repeated irreps.
pub fn moshinsky_x(ps: &ProductSpace) -> DMatrix<f64> {
    let a1: Vec<Vec<DMatrix<f64>>> = (1..=3)
        .map(|i| (1..=3).map(|k| ps.factor1.cartan_weyl(i, k)).collect())
        .collect();
    let a2: Vec<Vec<DMatrix<f64>>> = (1..=3)
        .map(|i| (1..=3).map(|k| ps.factor2.cartan_weyl(i, k)).collect())
        .collect();
    let n = ps.dim();
    let mut x = DMatrix::zeros(n, n);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                x += (&a1[i][k] * &a1[j][i]).kronecker(&a2[k][j]) * 0.5;
                x += (&a1[i][k] * &a1[k][j]).kronecker(&a2[j][i]) * 0.5;
            }
        }
    }
    x
}

/// Agreement of the recurrence with the oracle for one irrep of a product.
#[derive(Clone, Debug, PartialEq)]
pub struct Agreement {
    /// Coupled irrep.
    pub s: IrrepLabel,
    /// Series multiplicity.
    pub multiplicity: u32,
    /// Largest entrywise deviation: of the coupled vectors themselves when
    /// the multiplicity is one, of the projectors onto the isotypic
    /// component otherwise.
    pub max_deviation: f64,
    /// Largest generator-matrix defect of the oracle subspaces.
    pub oracle_generator_defect: f64,
}

/// Agreement of the recurrence with the oracle for a whole product.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductReport {
    /// First factor.
    pub s1: IrrepLabel,
    /// Second factor.
    pub s2: IrrepLabel,
    /// One entry per distinct irrep of the series.
    pub blocks: Vec<Agreement>,
    /// Unitarity defect of the full oracle coefficient table.
    pub unitarity_defect: f64,
}

impl ProductReport {
    /// Largest recurrence-vs-oracle deviation over the blocks.
    pub fn max_deviation(&self) -> f64 {
        self.blocks.iter().map(|b| b.max_deviation).fold(0.0, f64::max)
    }

    /// Largest generator-matrix defect of the oracle subspaces.
    pub fn max_generator_defect(&self) -> f64 {
        self.blocks.iter().map(|b| b.oracle_generator_defect).fold(0.0, f64::max)
    }
}

/// Compare the recurrence tables of every irrep in `s1 ⊗ s2` with the
/// oracle reduction.
pub fn compare_with_recurrence(s1: IrrepLabel, s2: IrrepLabel, cap: usize) -> Result<ProductReport, OracleError> {
    let ps = build_product(s1, s2, cap)?;
    let mut out = Vec::new();
    let mut all = Vec::new();
    for term in series_general(s1, s2) {
        let s = term.irrep;
        let oracle = reduce_irrep(&ps, s)?;
        let tables = isoscalar_tables(s1, s2, s)?;
        let recurrence: Vec<DMatrix<f64>> = tables
            .iter()
            .map(|t| {
                let cols: Vec<DVector<f64>> = crate::cgc::coupled_basis(t)
                    .iter()
                    .map(|(_, v)| ps.to_dense(v))
                    .collect();
                DMatrix::from_columns(&cols)
            })
            .collect();
        let max_deviation = if term.multiplicity == 1 {
            max_abs(&(&recurrence[0] - &oracle[0].vectors))
        } else {
            let proj = |ms: &mut dyn Iterator<Item = &DMatrix<f64>>| {
                let mut p = DMatrix::zeros(ps.dim(), ps.dim());
                for m in ms {
                    p += m * m.transpose();
                }
                p
            };
            let pr = proj(&mut recurrence.iter());
            let po = proj(&mut oracle.iter().map(|b| &b.vectors));
            max_abs(&(pr - po))
        };
        out.push(Agreement {
            s,
            multiplicity: term.multiplicity,
            max_deviation,
            oracle_generator_defect: oracle.iter().map(|b| b.generator_defect).fold(0.0, f64::max),
        });
        all.extend(oracle);
    }
    let unitarity_defect = extract_cgc(&ps, &all).unitarity_defect();
    Ok(ProductReport { s1, s2, blocks: out, unitarity_defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irrep::casimir_f;
    use crate::scalar::rational_to_f64;

    fn l(p: u32, q: u32) -> IrrepLabel {
        IrrepLabel::new(p, q)
    }

    fn comm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        a * b - b * a
    }

    #[test]
    fn triplet_squared_space() {
        let ps = build_product(l(1, 0), l(1, 0), DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(ps.dim(), 9);
        let i3 = ps.generator(Generator::I3);
        let mut spectrum: Vec<i32> = (0..9).map(|n| (2.0 * i3[(n, n)]).round() as i32).collect();
        spectrum.sort();
        assert_eq!(spectrum, vec![-2, -1, -1, 0, 0, 0, 1, 1, 2]);
        assert_eq!(build_product(l(1, 1), l(1, 1), DEFAULT_PRODUCT_CAP).unwrap().dim(), 64);
    }

    #[test]
    fn trivial_factor_reproduces_generators() {
        let ps = build_product(l(0, 0), l(2, 1), DEFAULT_PRODUCT_CAP).unwrap();
        let own = build_generator_matrices(l(2, 1));
        for g in Generator::ALL {
            assert!(max_abs(&(ps.generator(g) - own.dense(g))) < 1e-15);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_product(l(2, 2), l(2, 2), 500),
            Err(OracleError::CapExceeded { dim: 729, cap: 500 })
        ));
    }

    #[test]
    fn coproduct_satisfies_the_algebra() {
        let ps = build_product(l(1, 1), l(1, 0), DEFAULT_PRODUCT_CAP).unwrap();
        let a: Vec<Vec<DMatrix<f64>>> = (1..=3).map(|i| (1..=3).map(|k| ps.cartan_weyl(i, k)).collect()).collect();
        for i in 0..3 {
            for k in 0..3 {
                for j in 0..3 {
                    for m in 0..3 {
                        let mut rhs = DMatrix::zeros(ps.dim(), ps.dim());
                        if k == j {
                            rhs += &a[i][m];
                        }
                        if i == m {
                            rhs -= &a[j][k];
                        }
                        assert!(max_abs(&(comm(&a[i][k], &a[j][m]) - rhs)) < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn highest_weight_dimensions() {
        let ps = build_product(l(1, 1), l(1, 1), DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(highest_weight_subspace(&ps, l(1, 1)).unwrap().ncols(), 2);
        assert_eq!(highest_weight_subspace(&ps, l(0, 0)).unwrap().ncols(), 1);
        assert!(matches!(
            highest_weight_subspace(&ps, l(2, 0)),
            Err(OracleError::NotInSeries { .. })
        ));
        // The stretched irrep's top vector is the product of the factors' tops.
        let hw = highest_weight_subspace(&ps, l(2, 2)).unwrap();
        let t = top_state(l(1, 1));
        let n = ps.index(&t, &t).unwrap();
        assert!((hw[(n, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_combination_in_triplet_squared() {
        let ps = build_product(l(1, 0), l(1, 0), DEFAULT_PRODUCT_CAP).unwrap();
        let hw = highest_weight_subspace(&ps, l(2, 0)).unwrap();
        assert_eq!(hw.ncols(), 1);
        let top = top_state(l(1, 0));
        assert!((hw[(ps.index(&top, &top).unwrap(), 0)].abs() - 1.0).abs() < 1e-12);
        // The antitriplet's top vector is antisymmetric under exchange.
        let anti = highest_weight_subspace(&ps, l(0, 1)).unwrap();
        for n in 0..9 {
            let (a, b) = ps.state(n);
            let swapped = ps.index(&b, &a).unwrap();
            assert!((anti[(n, 0)] + anti[(swapped, 0)]).abs() < 1e-12);
        }
    }

    #[test]
    fn singlet_is_invariant() {
        let ps = build_product(l(1, 0), l(0, 1), DEFAULT_PRODUCT_CAP).unwrap();
        let singlet = reduce_irrep(&ps, l(0, 0)).unwrap();
        let v = singlet[0].vectors.column(0).clone_owned();
        for g in Generator::ALL {
            assert!((ps.generator(g) * &v).norm() < 1e-12);
        }
        for n in 0..ps.dim() {
            let x = v[n].abs();
            assert!(x < 1e-12 || (x * x - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn octet_and_decuplet_are_labelled() {
        let ps = build_product(l(1, 0), l(0, 1), DEFAULT_PRODUCT_CAP).unwrap();
        let octet = reduce_irrep(&ps, l(1, 1)).unwrap();
        assert_eq!(octet[0].states, enumerate_basis(l(1, 1)));
        assert!(octet[0].generator_defect < 1e-10);
        let ps = build_product(l(1, 1), l(1, 1), DEFAULT_PRODUCT_CAP).unwrap();
        let dec = reduce_irrep(&ps, l(3, 0)).unwrap();
        assert_eq!(dec[0].states.len(), 10);
        assert!(dec[0].generator_defect < 1e-10);
    }

    #[test]
    fn full_reduction_is_unitary() {
        for (s1, s2) in [(l(1, 1), l(1, 1)), (l(2, 0), l(1, 1)), (l(1, 0), l(0, 2))] {
            let ps = build_product(s1, s2, DEFAULT_PRODUCT_CAP).unwrap();
            let bases = reduce(&ps).unwrap();
            let table = extract_cgc(&ps, &bases);
            assert_eq!(table.matrix.ncols(), ps.dim());
            assert!(table.unitarity_defect() < 1e-10);
            for b in &bases {
                assert!(b.generator_defect < 1e-10, "{}", b.s);
            }
        }
    }

    #[test]
    fn stretched_coefficient_is_one() {
        let ps = build_product(l(2, 1), l(1, 0), DEFAULT_PRODUCT_CAP).unwrap();
        let b = &reduce_irrep(&ps, l(3, 1)).unwrap()[0];
        let (t1, t2) = (top_state(l(2, 1)), top_state(l(1, 0)));
        assert!((b.vectors[(ps.index(&t1, &t2).unwrap(), 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn casimirs_are_diagonal_on_irreducible_subspaces() {
        let ps = build_product(l(1, 1), l(1, 0), DEFAULT_PRODUCT_CAP).unwrap();
        let f = ps.casimir_f();
        for b in reduce(&ps).unwrap() {
            let r = &f * &b.vectors - &b.vectors * rational_to_f64(&casimir_f(b.s));
            assert!(max_abs(&r) < 1e-10);
        }
    }

    #[test]
    fn octet_isoscalar_factors_from_oracle() {
        // The stretched irrep has a single top-row factor, equal to one.
        let ps = build_product(l(1, 1), l(1, 1), DEFAULT_PRODUCT_CAP).unwrap();
        let dec = &reduce_irrep(&ps, l(2, 2)).unwrap()[0];
        let t = extract_isoscalar(&ps, dec);
        assert_eq!(t.provenance, Provenance::Oracle);
        assert!(t.max_norm_defect < 1e-12);
        let top = &t.rows[0];
        assert_eq!(top.values.len(), 1);
        assert!((top.values[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moshinsky_operator_properties() {
        let ps = build_product(l(1, 1), l(1, 1), DEFAULT_PRODUCT_CAP).unwrap();
        let x = moshinsky_x(&ps);
        assert!(max_abs(&(&x - x.transpose())) <= 1e-12);
        let checks = [ps.casimir_f(), ps.isospin_squared(), ps.generator(Generator::Y).clone()];
        for m in checks.iter().chain(Generator::ALL.iter().map(|&g| ps.generator(g))) {
            assert!(max_abs(&comm(&x, m)) <= 1e-10);
        }
    }

    #[test]
    fn moshinsky_operator_is_scalar_on_multiplicity_free_blocks() {
        let ps = build_product(l(2, 0), l(1, 1), DEFAULT_PRODUCT_CAP).unwrap();
        let x = moshinsky_x(&ps);
        for b in reduce(&ps).unwrap() {
            let v = &b.vectors;
            let r = v.transpose() * &x * v;
            let lambda = r[(0, 0)];
            assert!(max_abs(&(r - DMatrix::identity(v.ncols(), v.ncols()) * lambda)) < 1e-10);
        }
    }

    #[test]
    fn recurrence_matches_oracle_on_small_products() {
        for (s1, s2) in [(l(1, 0), l(0, 1)), (l(1, 1), l(1, 1)), (l(2, 0), l(0, 2)), (l(2, 1), l(1, 0))] {
            let report = compare_with_recurrence(s1, s2, DEFAULT_PRODUCT_CAP).unwrap();
            assert!(report.unitarity_defect <= 1e-10);
            for a in report.blocks {
                assert!(a.max_deviation <= 1e-9, "{s1}⊗{s2}→{}: {}", a.s, a.max_deviation);
                assert!(a.oracle_generator_defect <= 1e-10);
            }
        }
    }
}
