//! Subcommand implementations.  Each returns a [`Record`] for `jsonl`
//! output together with its human-readable rendering.

use serde_json::{json, Value};
use su3cg::cgc::{cg_from_table, coupling_tables};
use su3cg::generators::{build_generator_matrices, Generator};
use su3cg::irrep::{
    casimir_f, casimir_g, contains, dimension, enumerate_basis, nodes, top_state, weight_multiplicity,
    CanonicalState, IrrepLabel,
};
use su3cg::isoscalar::{closed_form_table, isoscalar_tables, IsoscalarTable, Provenance};
use su3cg::oracle::{build_product, extract_isoscalar, reduce_irrep, DEFAULT_PRODUCT_CAP};
use su3cg::scalar::{Half, Third};
use su3cg::series::{multiplicity, series_general};
use su3cg::su2::triangle;

use crate::cache::Cache;
use crate::record::{self, Record};
use crate::verify::{self, Suite};
use crate::CliError;

/// A rendered command result.
pub struct Output {
    /// Machine-readable record.
    pub record: Record,
    /// Human-readable text (ends with a newline).
    pub text: String,
    /// Whether a verification failed (exit status 3).
    pub failed: bool,
}

impl Output {
    fn ok(record: Record, text: String) -> Self {
        Self { record, text, failed: false }
    }
}

/// How isoscalar tables are obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// Closed form when the coupling has one, recurrence otherwise; cached.
    Auto,
    /// Closed form only (an error when none applies).
    ClosedForm,
    /// Null space plus lowering recurrence.
    Recurrence,
    /// Brute-force reduction of the product space.
    Oracle,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::ClosedForm => "closed-form",
            Method::Recurrence => "recurrence",
            Method::Oracle => "oracle",
        }
    }
}

fn inputs_pq(p: u32, q: u32) -> Value {
    json!({ "p": p, "q": q })
}

/// `dim P Q`.
pub fn dim(p: u32, q: u32) -> Output {
    let d = dimension(IrrepLabel::new(p, q));
    Output::ok(
        Record::new("dim", inputs_pq(p, q), json!({ "dimension": d }), Provenance::ClosedForm.name()),
        format!("dim D({p},{q}) = {d}\n"),
    )
}

/// `casimir P Q`.
pub fn casimir(p: u32, q: u32) -> Output {
    let s = IrrepLabel::new(p, q);
    let (f, g) = (casimir_f(s), casimir_g(s));
    Output::ok(
        Record::new(
            "casimir",
            inputs_pq(p, q),
            json!({ "f": record::rational(&f), "g": record::rational(&g) }),
            Provenance::ClosedForm.name(),
        ),
        format!("D({p},{q}): f = {f}, g = {g}\n"),
    )
}

/// `weights P Q`.
pub fn weights(p: u32, q: u32) -> Output {
    let s = IrrepLabel::new(p, q);
    let basis = enumerate_basis(s);
    let mut text = format!("D({p},{q}): dimension {}\n", basis.len());
    let mut lattice = Vec::new();
    for (i, y) in nodes(s) {
        let i3s: Vec<String> = basis
            .iter()
            .filter(|st| st.i == i && st.y == y)
            .map(|st| st.i3.to_string())
            .collect();
        text.push_str(&format!("  y = {y:>5}  i = {i:>4}  i3 ∈ {{{}}}\n", i3s.join(", ")));
        lattice.push(json!({ "i": i.to_string(), "y": y.to_string(), "i3": i3s }));
    }
    let mut weights: Vec<(Third, Half)> = basis.iter().map(|st| (st.y, st.i3)).collect();
    weights.sort_by(|a, b| b.cmp(a));
    weights.dedup();
    let mults: Vec<Value> = weights
        .iter()
        .map(|&(y, i3)| {
            json!({ "i3": i3.to_string(), "y": y.to_string(), "multiplicity": weight_multiplicity(s, i3, y) })
        })
        .collect();
    let states: Vec<Value> = basis.iter().map(record::state).collect();
    Output::ok(
        Record::new(
            "weights",
            inputs_pq(p, q),
            json!({ "dimension": basis.len(), "nodes": lattice, "weights": mults, "states": states }),
            Provenance::ClosedForm.name(),
        ),
        text,
    )
}

/// `series P1 Q1 P2 Q2`.
pub fn series(s1: IrrepLabel, s2: IrrepLabel) -> Output {
    let terms = series_general(s1, s2);
    let list: Vec<Value> = terms
        .iter()
        .map(|t| json!({ "irrep": record::label(t.irrep), "multiplicity": t.multiplicity, "dimension": dimension(t.irrep) }))
        .collect();
    let text_terms: Vec<String> = terms
        .iter()
        .map(|t| {
            if t.multiplicity == 1 {
                format!("{}", t.irrep)
            } else {
                format!("{}·{}", t.multiplicity, t.irrep)
            }
        })
        .collect();
    let total = dimension(s1) * dimension(s2);
    Output::ok(
        Record::new(
            "series",
            json!({ "s1": record::label(s1), "s2": record::label(s2) }),
            json!({ "terms": list, "dimension": total }),
            Provenance::ClosedForm.name(),
        ),
        format!("{s1} ⊗ {s2} = {}  (dimension {total})\n", text_terms.join(" + ")),
    )
}

/// `gen P Q --op G`.
pub fn gen(p: u32, q: u32, op: Generator) -> Output {
    let s = IrrepLabel::new(p, q);
    let m = build_generator_matrices(s);
    let sparse = m.exact(op);
    let mut entries = Vec::new();
    let mut text = format!("{op} on D({p},{q}) ({0}×{0}):\n", m.dim());
    for (col, list) in sparse.cols.iter().enumerate() {
        let mut list = list.clone();
        list.sort_by_key(|(r, _)| *r);
        for (row, v) in list {
            entries.push(json!({
                "row": row,
                "col": col,
                "to": record::state(&m.basis[row]),
                "from": record::state(&m.basis[col]),
                "value": record::surd(&v),
            }));
            text.push_str(&format!(
                "  [{row:>3},{col:>3}]  {} {op} {} = {}\n",
                m.basis[row],
                m.basis[col],
                v.pretty()
            ));
        }
    }
    if entries.is_empty() {
        text.push_str("  (zero matrix)\n");
    }
    let basis: Vec<Value> = m.basis.iter().map(record::state).collect();
    Output::ok(
        Record::new(
            "gen",
            json!({ "p": p, "q": q, "op": op.symbol() }),
            json!({ "dimension": m.dim(), "basis": basis, "entries": entries }),
            Provenance::ClosedForm.name(),
        ),
        text,
    )
}

/// Tables of `s` in `s1 ⊗ s2` by the requested method, with the cache flag.
fn tables_for(
    s1: IrrepLabel,
    s2: IrrepLabel,
    s: IrrepLabel,
    method: Method,
    cache: Option<&Cache>,
) -> Result<(Vec<IsoscalarTable>, bool), CliError> {
    let m = multiplicity(s1, s2, s);
    if m == 0 {
        return Err(CliError::Input(format!("{s} does not occur in {s1} ⊗ {s2}")));
    }
    match method {
        Method::Auto => {
            if let Some(c) = cache {
                let hit: Option<Vec<_>> = (0..m).map(|g| c.load(s1, s2, s, g)).collect();
                if let Some(tables) = hit {
                    return Ok((tables, true));
                }
            }
            let tables = coupling_tables(s1, s2, s).map_err(|e| CliError::Internal(e.to_string()))?;
            if let Some(c) = cache {
                for t in &tables {
                    if let Err(e) = c.store(t) {
                        eprintln!("warning: could not write cache entry: {e}");
                    }
                }
            }
            Ok((tables, false))
        }
        Method::ClosedForm => closed_form_table(s1, s2, s)
            .map(|t| (vec![t], false))
            .ok_or_else(|| CliError::Input(format!("no closed form covers {s1} ⊗ {s2} → {s}"))),
        Method::Recurrence => isoscalar_tables(s1, s2, s)
            .map(|t| (t, false))
            .map_err(|e| CliError::Internal(e.to_string())),
        Method::Oracle => {
            let ps = build_product(s1, s2, DEFAULT_PRODUCT_CAP).map_err(|e| CliError::Input(e.to_string()))?;
            let bases = reduce_irrep(&ps, s).map_err(|e| CliError::Internal(e.to_string()))?;
            Ok((bases.iter().map(|b| extract_isoscalar(&ps, b)).collect(), false))
        }
    }
}

fn select_gamma(tables: Vec<IsoscalarTable>, gamma: Option<u32>) -> Result<Vec<IsoscalarTable>, CliError> {
    match gamma {
        None => Ok(tables),
        Some(g) => {
            let m = tables.len();
            tables
                .into_iter()
                .find(|t| t.gamma == g)
                .map(|t| vec![t])
                .ok_or_else(|| CliError::Input(format!("multiplicity index {g} out of range (multiplicity {m})")))
        }
    }
}

fn provenance_of(tables: &[IsoscalarTable]) -> &'static str {
    tables.first().map_or("recurrence", |t| t.provenance.name())
}

/// Which rows of a table to report.
#[derive(Clone, Copy, Debug)]
pub enum RowSelection {
    /// The top node of the coupled irrep.
    Top,
    /// One node.
    Node(Half, Third),
    /// Every node.
    All,
}

/// `isf P1 Q1 P2 Q2 P Q`.
pub fn isf(
    s1: IrrepLabel,
    s2: IrrepLabel,
    s: IrrepLabel,
    gamma: Option<u32>,
    rows: RowSelection,
    method: Method,
    cache: Option<&Cache>,
) -> Result<Output, CliError> {
    let (tables, cache_hit) = tables_for(s1, s2, s, method, cache)?;
    let tables = select_gamma(tables, gamma)?;
    let top = top_state(s);
    let wanted = |i: Half, y: Third| match rows {
        RowSelection::Top => i == top.i && y == top.y,
        RowSelection::Node(ni, ny) => i == ni && y == ny,
        RowSelection::All => true,
    };
    if let RowSelection::Node(i, y) = rows {
        if !nodes(s).contains(&(i, y)) {
            return Err(CliError::Input(format!("(i = {i}, y = {y}) is not a node of {s}")));
        }
    }
    let mut text = String::new();
    let mut out_tables = Vec::new();
    for t in &tables {
        text.push_str(&format!(
            "{s1} ⊗ {s2} → {s}  γ = {}  [{}]\n",
            t.gamma,
            t.provenance.name()
        ));
        let mut rows_json = Vec::new();
        for r in t.rows.iter().filter(|r| wanted(r.i, r.y)) {
            text.push_str(&format!("  row i = {}, y = {}\n", r.i, r.y));
            for (n, p) in r.points.iter().enumerate() {
                let exact = r.exact.as_ref().map(|e| &e[n]);
                text.push_str(&format!(
                    "    μ = {:>5}  j = {:>4}  k = {:>4}   {}\n",
                    p.mu.to_string(),
                    p.j.to_string(),
                    p.k.to_string(),
                    record::pretty_value(r.values[n], exact)
                ));
            }
            rows_json.push(record::row(r));
        }
        out_tables.push(json!({
            "gamma": t.gamma,
            "max_norm_defect": t.max_norm_defect,
            "rows": rows_json,
        }));
    }
    let row_input = match rows {
        RowSelection::Top => json!("top"),
        RowSelection::Node(i, y) => json!({ "i": i.to_string(), "y": y.to_string() }),
        RowSelection::All => json!("all"),
    };
    let mut record = Record::new(
        "isf",
        json!({
            "s1": record::label(s1), "s2": record::label(s2), "s": record::label(s),
            "gamma": gamma, "rows": row_input, "method": method.name(),
        }),
        json!({ "multiplicity": multiplicity(s1, s2, s), "tables": out_tables }),
        provenance_of(&tables),
    );
    record.cache_hit = cache_hit;
    Ok(Output::ok(record, text))
}

/// A full coefficient query.
pub struct CgcArgs {
    /// First factor.
    pub s1: IrrepLabel,
    /// Second factor.
    pub s2: IrrepLabel,
    /// Coupled irrep.
    pub s: IrrepLabel,
    /// Multiplicity index.
    pub gamma: u32,
    /// State of the first factor.
    pub state1: CanonicalState,
    /// State of the second factor.
    pub state2: CanonicalState,
    /// Coupled state.
    pub state: CanonicalState,
}

/// `cgc ...`.
pub fn cgc(a: &CgcArgs, method: Method, cache: Option<&Cache>) -> Result<Output, CliError> {
    for (lab, st, what) in [(a.s1, &a.state1, "first factor"), (a.s2, &a.state2, "second factor"), (a.s, &a.state, "coupled irrep")] {
        if !contains(lab, st) {
            return Err(CliError::Input(format!("{st} is not a state of the {what} {lab}")));
        }
    }
    let inputs = json!({
        "s1": record::label(a.s1), "s2": record::label(a.s2), "s": record::label(a.s),
        "gamma": a.gamma, "state1": record::state(&a.state1), "state2": record::state(&a.state2),
        "state": record::state(&a.state), "method": method.name(),
    });
    let head = format!("⟨{} {}; {} {} | {} γ={} {}⟩", a.s1, a.state1, a.s2, a.state2, a.s, a.gamma, a.state);
    let reason = if a.state1.i3 + a.state2.i3 != a.state.i3 {
        Some("i3 is not additive")
    } else if a.state1.y + a.state2.y != a.state.y {
        Some("hypercharge is not additive")
    } else if !triangle(a.state1.i, a.state2.i, a.state.i) {
        Some("isospins violate the triangle rule")
    } else {
        None
    };
    if multiplicity(a.s1, a.s2, a.s) == 0 {
        return Err(CliError::Input(format!("{} does not occur in {} ⊗ {}", a.s, a.s1, a.s2)));
    }
    if let Some(reason) = reason {
        let zero = su3cg::scalar::SurdValue::zero();
        return Ok(Output::ok(
            Record::new(
                "cgc",
                inputs,
                json!({ "value": record::surd(&zero), "zero_reason": reason }),
                Provenance::ClosedForm.name(),
            ),
            format!("{head} = 0  ({reason})\n"),
        ));
    }
    let (tables, cache_hit) = tables_for(a.s1, a.s2, a.s, method, cache)?;
    let m = tables.len();
    let table = tables
        .iter()
        .find(|t| t.gamma == a.gamma)
        .ok_or_else(|| CliError::Input(format!("multiplicity index {} out of range (multiplicity {m})", a.gamma)))?;
    let v = cg_from_table(table, &a.state1, &a.state2, &a.state).map_err(|e| CliError::Input(e.to_string()))?;
    let mut record = Record::new(
        "cgc",
        inputs,
        json!({
            "value": record::value(v.value, v.exact.as_ref()),
            "isoscalar": record::value(v.isoscalar, v.isoscalar_exact.as_ref()),
            "su2": record::surd(&v.su2),
        }),
        table.provenance.name(),
    );
    record.cache_hit = cache_hit;
    let text = format!(
        "{head} = {}\n  isoscalar factor {}\n  SU(2) coefficient {}\n",
        record::pretty_value(v.value, v.exact.as_ref()),
        record::pretty_value(v.isoscalar, v.isoscalar_exact.as_ref()),
        v.su2.pretty()
    );
    Ok(Output::ok(record, text))
}

/// `verify --suite S [--max-dim N]`.
pub fn verify(suites: &[Suite], max_dim: Option<u64>) -> Output {
    let reports: Vec<verify::Report> = suites
        .iter()
        .map(|&s| verify::run(s, max_dim.unwrap_or(s.default_max_dim())))
        .collect();
    let passed = reports.iter().all(verify::Report::passed);
    let text: String = reports.iter().map(verify::Report::to_text).collect();
    let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
    let record = Record::new(
        "verify",
        json!({ "suites": names, "max_dim": max_dim }),
        json!({ "passed": passed, "reports": reports.iter().map(verify::Report::to_json).collect::<Vec<_>>() }),
        if suites.contains(&Suite::Oracle) { "oracle" } else { "recurrence" },
    );
    Output { record, text, failed: !passed }
}
