//! On-disk cache of isoscalar tables.
//!
//! Enabled by the `SU3_CACHE_DIR` environment variable.  Each table
//! `(s1, s2, s, γ)` lives in its own line-delimited file: a header line,
//! then one line per row.  Files are written to a temporary name and
//! renamed into place, so concurrent writers never expose partial files.

use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use su3cg::irrep::IrrepLabel;
use su3cg::isoscalar::{CouplingPoint, IsoscalarRow, IsoscalarTable, Provenance};
use su3cg::scalar::{Half, Rational, SurdValue, Third};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SU3_CACHE_DIR";

/// Layout version of cache files; files with another version are ignored.
const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    cache_version: u32,
    s1: [u32; 2],
    s2: [u32; 2],
    s: [u32; 2],
    gamma: u32,
    provenance: String,
    rows: usize,
}

/// An exact value stored as `(sign, radicand numerator, radicand denominator)`.
#[derive(Serialize, Deserialize)]
struct StoredSurd(i8, String, String);

#[derive(Serialize, Deserialize)]
struct StoredRow {
    /// `2i`.
    i2: i32,
    /// `3y`.
    y3: i32,
    /// `(3μ, 2j, 2k)` per point.
    points: Vec<[i32; 3]>,
    values: Vec<f64>,
    exact: Option<Vec<StoredSurd>>,
}

/// A cache rooted at one directory.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// The cache named by [`CACHE_ENV`], if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(|d| Self { dir: PathBuf::from(d) })
    }

    /// A cache rooted at `dir`.
    #[cfg(test)]
    pub fn at(dir: &Path) -> Self {
        Self { dir: dir.to_path_buf() }
    }

    fn path(&self, s1: IrrepLabel, s2: IrrepLabel, s: IrrepLabel, gamma: u32) -> PathBuf {
        self.dir.join(format!(
            "isf-{}-{}-{}-{}-{}-{}-g{}.jsonl",
            s1.p, s1.q, s2.p, s2.q, s.p, s.q, gamma
        ))
    }

    /// The stored table, if present and readable.  Unreadable or stale files
    /// count as misses.
    pub fn load(&self, s1: IrrepLabel, s2: IrrepLabel, s: IrrepLabel, gamma: u32) -> Option<IsoscalarTable> {
        let file = fs::File::open(self.path(s1, s2, s, gamma)).ok()?;
        let mut lines = BufReader::new(file).lines();
        let header: Header = serde_json::from_str(&lines.next()?.ok()?).ok()?;
        let key = |l: IrrepLabel| [l.p, l.q];
        if header.cache_version != CACHE_VERSION
            || header.s1 != key(s1)
            || header.s2 != key(s2)
            || header.s != key(s)
            || header.gamma != gamma
        {
            return None;
        }
        let provenance = match header.provenance.as_str() {
            "closed-form" => Provenance::ClosedForm,
            "recurrence" => Provenance::Recurrence,
            "oracle" => Provenance::Oracle,
            _ => return None,
        };
        let mut rows = Vec::with_capacity(header.rows);
        for line in lines {
            let stored: StoredRow = serde_json::from_str(&line.ok()?).ok()?;
            rows.push(decode_row(stored)?);
        }
        if rows.len() != header.rows {
            return None;
        }
        Some(IsoscalarTable::new(s1, s2, s, gamma, rows, provenance))
    }

    /// Store a table atomically.
    pub fn store(&self, t: &IsoscalarTable) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let header = Header {
            cache_version: CACHE_VERSION,
            s1: [t.s1.p, t.s1.q],
            s2: [t.s2.p, t.s2.q],
            s: [t.s.p, t.s.q],
            gamma: t.gamma,
            provenance: t.provenance.name().to_string(),
            rows: t.rows.len(),
        };
        let mut body = serde_json::to_string(&header).map_err(io::Error::other)?;
        body.push('\n');
        for r in &t.rows {
            body.push_str(&serde_json::to_string(&encode_row(r)).map_err(io::Error::other)?);
            body.push('\n');
        }
        let target = self.path(t.s1, t.s2, t.s, t.gamma);
        let tmp = temp_name(&target);
        let result = (|| {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &target)
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        result
    }
}

/// A sibling temporary file name unique to this process and moment.
fn temp_name(target: &Path) -> PathBuf {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    let name = target.file_name().and_then(|n| n.to_str()).unwrap_or("table");
    target.with_file_name(format!(".{name}.{}.{nanos}.tmp", std::process::id()))
}

fn encode_row(r: &IsoscalarRow) -> StoredRow {
    StoredRow {
        i2: r.i.0,
        y3: r.y.0,
        points: r.points.iter().map(|p| [p.mu.0, p.j.0, p.k.0]).collect(),
        values: r.values.clone(),
        exact: r.exact.as_ref().map(|e| {
            e.iter()
                .map(|v| StoredSurd(v.sign(), v.radicand().numer().to_string(), v.radicand().denom().to_string()))
                .collect()
        }),
    }
}

fn decode_row(r: StoredRow) -> Option<IsoscalarRow> {
    if r.points.len() != r.values.len() {
        return None;
    }
    let exact = match r.exact {
        Some(list) => {
            let mut out = Vec::with_capacity(list.len());
            for StoredSurd(sign, num, den) in list {
                let radicand: Rational = format!("{num}/{den}").parse().ok()?;
                out.push(SurdValue::new(sign, radicand).ok()?);
            }
            if out.len() != r.values.len() {
                return None;
            }
            Some(out)
        }
        None => None,
    };
    Some(IsoscalarRow {
        i: Half(r.i2),
        y: Third(r.y3),
        points: r
            .points
            .iter()
            .map(|&[mu, j, k]| CouplingPoint::new(Third(mu), Half(j), Half(k)))
            .collect(),
        values: r.values,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use su3cg::cgc::coupling_tables;

    fn scratch(name: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("su3cg-cache-test-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn round_trip_preserves_tables() {
        let dir = scratch("roundtrip");
        let cache = Cache::at(&dir);
        let l = IrrepLabel::new;
        for s in [l(1, 1), l(3, 0), l(0, 0)] {
            for t in coupling_tables(l(1, 1), l(1, 1), s).unwrap() {
                assert!(cache.load(t.s1, t.s2, t.s, t.gamma).is_none());
                cache.store(&t).unwrap();
                assert_eq!(cache.load(t.s1, t.s2, t.s, t.gamma).unwrap(), t);
            }
        }
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn corrupt_files_are_misses() {
        let dir = scratch("corrupt");
        let cache = Cache::at(&dir);
        let l = IrrepLabel::new;
        let t = coupling_tables(l(1, 0), l(0, 1), l(1, 1)).unwrap().remove(0);
        cache.store(&t).unwrap();
        let path = cache.path(t.s1, t.s2, t.s, t.gamma);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(cache.load(t.s1, t.s2, t.s, t.gamma).is_none());
        let _ = fs::remove_dir_all(&dir);
    }
}
