//! Verification suites exposed by `su3cg verify`.

use std::thread;

use serde_json::{json, Value};
use su3cg::cgc::product_unitarity;
use su3cg::generators::algebra_defect;
use su3cg::irrep::{dimension, IrrepLabel};
use su3cg::oracle::compare_with_recurrence;

/// Commutator residual allowed on generator matrices.
pub const COMMUTATOR_TOL: f64 = 1e-12;
/// Casimir-matrix residual allowed (the cubic Casimir of larger irreps
/// accumulates more rounding than the commutators).
pub const CASIMIR_TOL: f64 = 1e-10;
/// Row-norm and block-orthogonality residual allowed on isoscalar tables.
pub const UNITARITY_TOL: f64 = 1e-12;
/// Recurrence-versus-oracle deviation allowed.
pub const ORACLE_TOL: f64 = 1e-9;
/// Oracle self-consistency (table unitarity, generator fidelity) allowed.
pub const ORACLE_SELF_TOL: f64 = 1e-10;

/// A verification suite.
#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Commutation relations and Casimir eigenvalues of every irrep with
    /// dimension at most `--max-dim`.
    Commutators,
    /// Orthogonality of isoscalar tables of every product with dimension at
    /// most `--max-dim`.
    Unitarity,
    /// Recurrence against the brute-force reduction for every product with
    /// dimension at most `--max-dim`.
    Oracle,
}

impl Suite {
    /// Name used in output.
    pub fn name(self) -> &'static str {
        match self {
            Suite::Commutators => "commutators",
            Suite::Unitarity => "unitarity",
            Suite::Oracle => "oracle",
        }
    }

    /// Default `--max-dim`.
    pub fn default_max_dim(self) -> u64 {
        match self {
            Suite::Commutators => 100,
            Suite::Unitarity => 100,
            Suite::Oracle => 400,
        }
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    /// Suite run.
    pub suite: Suite,
    /// Size bound used.
    pub max_dim: u64,
    /// Number of cases checked.
    pub cases: usize,
    /// Named worst residuals with their tolerances.
    pub residuals: Vec<(&'static str, f64, f64)>,
    /// Descriptions of failing cases, in deterministic order.
    pub failures: Vec<String>,
}

impl Report {
    /// Whether every case passed.
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// JSON form.
    pub fn to_json(&self) -> Value {
        let residuals: Vec<Value> = self
            .residuals
            .iter()
            .map(|(name, worst, tol)| json!({ "name": name, "max": worst, "tolerance": tol }))
            .collect();
        json!({
            "suite": self.suite.name(),
            "max_dim": self.max_dim,
            "cases": self.cases,
            "passed": self.passed(),
            "residuals": residuals,
            "failures": self.failures,
        })
    }

    /// Human-readable form.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} ({} cases, max dimension {})\n",
            self.suite.name(),
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.max_dim
        );
        for (name, worst, tol) in &self.residuals {
            out.push_str(&format!("  {name}: max {worst:.3e} (tolerance {tol:.0e})\n"));
        }
        for f in &self.failures {
            out.push_str(&format!("  failed: {f}\n"));
        }
        out
    }
}

/// Every irrep label with dimension at most `max`.
pub fn labels_up_to(max: u64) -> Vec<IrrepLabel> {
    let mut out = Vec::new();
    let mut p = 0;
    while dimension(IrrepLabel::new(p, 0)) <= max {
        let mut q = 0;
        while dimension(IrrepLabel::new(p, q)) <= max {
            out.push(IrrepLabel::new(p, q));
            q += 1;
        }
        p += 1;
    }
    out
}

/// Every ordered pair of labels whose product dimension is at most `max`.
pub fn products_up_to(max: u64) -> Vec<(IrrepLabel, IrrepLabel)> {
    let labels = labels_up_to(max);
    let mut out = Vec::new();
    for &a in &labels {
        for &b in &labels {
            if dimension(a) * dimension(b) <= max {
                out.push((a, b));
            }
        }
    }
    out
}

/// Map `f` over `items` on all available cores, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification worker panicked"))
            .collect()
    })
}

/// Run one suite.
pub fn run(suite: Suite, max_dim: u64) -> Report {
    let mut report = Report { suite, max_dim, cases: 0, residuals: Vec::new(), failures: Vec::new() };
    match suite {
        Suite::Commutators => {
            let labels = labels_up_to(max_dim);
            let results = par_map(&labels, |&s| (s, algebra_defect(s)));
            let (mut comm, mut cas) = (0.0f64, 0.0f64);
            for (s, d) in results {
                comm = comm.max(d.commutator);
                cas = cas.max(d.casimir);
                if d.commutator > COMMUTATOR_TOL || d.casimir > CASIMIR_TOL {
                    report.failures.push(format!("{s}: commutator {:.3e}, Casimir {:.3e}", d.commutator, d.casimir));
                }
            }
            report.cases = labels.len();
            report.residuals = vec![("commutator", comm, COMMUTATOR_TOL), ("casimir", cas, CASIMIR_TOL)];
        }
        Suite::Unitarity => {
            let pairs = products_up_to(max_dim);
            let results = par_map(&pairs, |&(a, b)| (a, b, product_unitarity(a, b)));
            let (mut norm, mut block) = (0.0f64, 0.0f64);
            for (a, b, r) in results {
                match r {
                    Ok(r) => {
                        norm = norm.max(r.row_norm_defect);
                        block = block.max(r.block_defect);
                        if r.row_norm_defect > UNITARITY_TOL || r.block_defect > UNITARITY_TOL {
                            report.failures.push(format!(
                                "{a}⊗{b}: row norm {:.3e}, block {:.3e}",
                                r.row_norm_defect, r.block_defect
                            ));
                        }
                    }
                    Err(e) => report.failures.push(format!("{a}⊗{b}: {e}")),
                }
            }
            report.cases = pairs.len();
            report.residuals = vec![("row_norm", norm, UNITARITY_TOL), ("block_orthogonality", block, UNITARITY_TOL)];
        }
        Suite::Oracle => {
            let pairs = products_up_to(max_dim);
            let cap = max_dim as usize;
            let results = par_map(&pairs, |&(a, b)| (a, b, compare_with_recurrence(a, b, cap)));
            let (mut dev, mut gen, mut unit) = (0.0f64, 0.0f64, 0.0f64);
            for (a, b, r) in results {
                match r {
                    Ok(r) => {
                        dev = dev.max(r.max_deviation());
                        gen = gen.max(r.max_generator_defect());
                        unit = unit.max(r.unitarity_defect);
                        if r.max_deviation() > ORACLE_TOL
                            || r.max_generator_defect() > ORACLE_SELF_TOL
                            || r.unitarity_defect > ORACLE_SELF_TOL
                        {
                            report.failures.push(format!(
                                "{a}⊗{b}: deviation {:.3e}, generator {:.3e}, unitarity {:.3e}",
                                r.max_deviation(),
                                r.max_generator_defect(),
                                r.unitarity_defect
                            ));
                        }
                    }
                    Err(e) => report.failures.push(format!("{a}⊗{b}: {e}")),
                }
            }
            report.cases = pairs.len();
            report.residuals = vec![
                ("recurrence_vs_oracle", dev, ORACLE_TOL),
                ("oracle_generator_fidelity", gen, ORACLE_SELF_TOL),
                ("oracle_unitarity", unit, ORACLE_SELF_TOL),
            ];
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_enumeration() {
        let l = IrrepLabel::new;
        assert_eq!(labels_up_to(3), vec![l(0, 0), l(0, 1), l(1, 0)]);
        let pairs = products_up_to(9);
        assert!(pairs.contains(&(l(1, 0), l(0, 1))));
        assert!(!pairs.contains(&(l(1, 0), l(1, 1))));
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Commutators, Suite::Unitarity, Suite::Oracle] {
            let r = run(suite, 30);
            assert!(r.passed(), "{}", r.to_text());
            assert!(r.cases > 0);
        }
    }
}
