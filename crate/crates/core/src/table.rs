//! Exportable tables: structure constants of `t_hat` and `s_hat` on the
//! area basis, per-degree dimensions, and the basis itself.
//!
//! JSON output is bit-stable: keys are sorted, rationals reduced, and the
//! terms of every coefficient ordered by ascending power of `pi`.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::areamod::{area_basis, AreaIndex, AreaKind, AreaModule};
use crate::error::{Error, Result};
use crate::forms::{self, TableEntries};
use crate::scalars::PiScalar;
use crate::valalg;

/// Environment variable naming a directory for cached structure tables.
pub const CACHE_ENV: &str = "UAREA_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    #[serde(rename = "t_hat")]
    THat,
    #[serde(rename = "s_hat")]
    SHat,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::THat => "t_hat",
            Generator::SHat => "s_hat",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Type(format!("unknown format {s:?}; expected json or csv"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureEntry {
    pub coeff: PiScalar,
    pub from: AreaIndex,
    pub to: AreaIndex,
}

/// Nonzero structure constants of one generator, plus the full list of
/// source indices so that sources with zero image are visible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTable {
    pub entries: Vec<StructureEntry>,
    pub generator: Generator,
    pub n: u32,
    pub sources: Vec<AreaIndex>,
}

impl StructureTable {
    pub fn from_entries(n: u32, generator: Generator, map: &TableEntries) -> Self {
        let mut entries = Vec::new();
        for (from, row) in map {
            for (to, coeff) in row {
                if !coeff.is_zero() {
                    entries.push(StructureEntry { coeff: coeff.clone(), from: *from, to: *to });
                }
            }
        }
        entries.sort_by_key(|e| (e.from, e.to));
        Self { entries, generator, n, sources: area_basis(n) }
    }

    /// The table of the module, consulting the cache directory if one is set.
    pub fn compute(n: u32, generator: Generator) -> Result<Self> {
        match cache_path(n, generator) {
            Some(path) => Self::cached(&path, n, generator),
            None => Self::compute_fresh(n, generator),
        }
    }

    fn compute_fresh(n: u32, generator: Generator) -> Result<Self> {
        let m = AreaModule::get(n)?;
        let source = match generator {
            Generator::THat => m.hat_t_table(),
            Generator::SHat => m.hat_s_table(),
        };
        let map: TableEntries = source
            .iter()
            .map(|(from, image)| (*from, image.terms().map(|(i, c)| (i, c.clone())).collect()))
            .collect();
        Ok(Self::from_entries(n, generator, &map))
    }

    fn cached(path: &Path, n: u32, generator: Generator) -> Result<Self> {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(t) = Self::from_json(&text) {
                if t.n == n && t.generator == generator {
                    return Ok(t);
                }
            }
        }
        let t = Self::compute_fresh(n, generator)?;
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        // write then rename so concurrent readers never see a partial file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, t.to_json()?)?;
        std::fs::rename(&tmp, path)?;
        Ok(t)
    }

    /// The `t_hat` table recomputed by the differential-forms oracle.
    pub fn from_oracle(n: u32) -> Result<Self> {
        Ok(Self::from_entries(n, Generator::THat, &forms::derive_t_hat_table(n)?))
    }

    pub fn get(&self, from: AreaIndex, to: AreaIndex) -> PiScalar {
        self.entries.iter().find(|e| e.from == from && e.to == to).map(|e| e.coeff.clone()).unwrap_or_default()
    }

    /// Entries where the two tables differ, as `(from, to, self, other)`.
    pub fn diff(&self, other: &Self) -> Vec<(AreaIndex, AreaIndex, PiScalar, PiScalar)> {
        let mut keys: Vec<(AreaIndex, AreaIndex)> =
            self.entries.iter().chain(&other.entries).map(|e| (e.from, e.to)).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|(f, t)| {
                let (a, b) = (self.get(f, t), other.get(f, t));
                (a != b).then_some((f, t, a, b))
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["from_kind", "from_k", "from_q", "to_kind", "to_k", "to_q", "coeff"])?;
        for e in &self.entries {
            w.write_record([
                e.from.kind.name().to_string(),
                e.from.k.to_string(),
                e.from.q.to_string(),
                e.to.kind.name().to_string(),
                e.to.k.to_string(),
                e.to.q.to_string(),
                e.coeff.to_string(),
            ])?;
        }
        csv_string(w)
    }

    pub fn from_csv(n: u32, generator: Generator, text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut entries = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let field = |i: usize| rec.get(i).unwrap_or("");
            let idx = |k: usize| -> Result<AreaIndex> {
                let kind = match field(k) {
                    "B" => AreaKind::B,
                    "Gamma" => AreaKind::Gamma,
                    other => return Err(Error::Type(format!("unknown measure kind {other:?}"))),
                };
                AreaIndex::new(n, kind, parse_int(field(k + 1))?, parse_int(field(k + 2))?)
            };
            let coeff = crate::expr::parse_scalar(field(6))?;
            entries.push(StructureEntry { coeff, from: idx(0)?, to: idx(3)? });
        }
        entries.sort_by_key(|e| (e.from, e.to));
        Ok(Self { entries, generator, n, sources: area_basis(n) })
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.parse().map_err(|_| Error::Type(format!("expected an integer, found {s:?}")))
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cache_path(n: u32, generator: Generator) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    if dir.is_empty() {
        return None;
    }
    Some(PathBuf::from(dir).join(format!("{}-n{n}.json", generator.name())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsRow {
    /// `None` in the top degree `2n`, which carries no area measures.
    pub dim_area: Option<usize>,
    pub dim_val: usize,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsTable {
    pub n: u32,
    pub rows: Vec<DimsRow>,
}

impl DimsTable {
    pub fn compute(n: u32) -> Result<Self> {
        valalg::ValAlgebra::get(n)?;
        let rows = (0..=2 * n)
            .map(|k| DimsRow {
                dim_area: crate::areamod::dim_area(n, k as i64).ok(),
                dim_val: valalg::dim_val(n, k as i64).expect("k in range"),
                k,
            })
            .collect();
        Ok(Self { n, rows })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "dim_val", "dim_area"])?;
        for r in &self.rows {
            let area = r.dim_area.map(|d| d.to_string()).unwrap_or_default();
            w.write_record([r.k.to_string(), r.dim_val.to_string(), area])?;
        }
        csv_string(w)
    }

    pub fn from_csv(n: u32, text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let get = |i: usize| rec.get(i).unwrap_or("");
            let area = get(2);
            rows.push(DimsRow {
                dim_area: if area.is_empty() { None } else { Some(parse_int(area)? as usize) },
                dim_val: parse_int(get(1))? as usize,
                k: parse_int(get(0))? as u32,
            });
        }
        Ok(Self { n, rows })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisTable {
    pub basis: Vec<AreaIndex>,
    pub n: u32,
}

impl BasisTable {
    pub fn compute(n: u32) -> Result<Self> {
        valalg::ValAlgebra::get(n)?;
        Ok(Self { basis: area_basis(n), n })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kind", "k", "q", "label"])?;
        for i in &self.basis {
            w.write_record([i.kind.name().to_string(), i.k.to_string(), i.q.to_string(), i.to_string()])?;
        }
        csv_string(w)
    }

    pub fn from_csv(n: u32, text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut basis = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let get = |i: usize| rec.get(i).unwrap_or("");
            let kind = match get(0) {
                "B" => AreaKind::B,
                "Gamma" => AreaKind::Gamma,
                other => return Err(Error::Type(format!("unknown measure kind {other:?}"))),
            };
            basis.push(AreaIndex::new(n, kind, parse_int(get(1))?, parse_int(get(2))?)?);
        }
        Ok(Self { basis, n })
    }
}

/// Which table to export.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    TTable,
    STable,
    Dims,
    Basis,
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t-table" => Ok(TableKind::TTable),
            "s-table" => Ok(TableKind::STable),
            "dims" => Ok(TableKind::Dims),
            "basis" => Ok(TableKind::Basis),
            _ => Err(Error::Type(format!("unknown table {s:?}"))),
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableKind::TTable => "t-table",
            TableKind::STable => "s-table",
            TableKind::Dims => "dims",
            TableKind::Basis => "basis",
        })
    }
}

/// Renders a table as text in the requested format.
pub fn render(kind: TableKind, n: u32, format: Format) -> Result<String> {
    match (kind, format) {
        (TableKind::TTable, Format::Json) => StructureTable::compute(n, Generator::THat)?.to_json(),
        (TableKind::TTable, Format::Csv) => StructureTable::compute(n, Generator::THat)?.to_csv(),
        (TableKind::STable, Format::Json) => StructureTable::compute(n, Generator::SHat)?.to_json(),
        (TableKind::STable, Format::Csv) => StructureTable::compute(n, Generator::SHat)?.to_csv(),
        (TableKind::Dims, Format::Json) => DimsTable::compute(n)?.to_json(),
        (TableKind::Dims, Format::Csv) => DimsTable::compute(n)?.to_csv(),
        (TableKind::Basis, Format::Json) => BasisTable::compute(n)?.to_json(),
        (TableKind::Basis, Format::Csv) => BasisTable::compute(n)?.to_csv(),
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn t_table_example() {
        let t = StructureTable::compute(2, Generator::THat).unwrap();
        assert_eq!(t.sources.len(), 6);
        assert_eq!(t.get(AreaIndex::gamma(2, 1), AreaIndex::gamma(1, 0)), PiScalar::monomial(rat(4, 3), -1));
        assert_eq!(t.get(AreaIndex::b(3, 1), AreaIndex::b(2, 0)), PiScalar::one());
        let json = t.to_json().unwrap();
        assert!(json.contains("\"generator\": \"t_hat\""));
        assert!(json.contains("\"pi_power\": -1"));
        assert_eq!(StructureTable::from_json(&json).unwrap(), t);
        assert_eq!(StructureTable::from_oracle(2).unwrap(), t);
    }

    #[test]
    fn round_trips() {
        for n in 1..=4 {
            for g in [Generator::THat, Generator::SHat] {
                let t = StructureTable::compute(n, g).unwrap();
                assert_eq!(StructureTable::from_json(&t.to_json().unwrap()).unwrap(), t);
                assert_eq!(StructureTable::from_csv(n, g, &t.to_csv().unwrap()).unwrap(), t);
            }
            let d = DimsTable::compute(n).unwrap();
            assert_eq!(DimsTable::from_json(&d.to_json().unwrap()).unwrap(), d);
            assert_eq!(DimsTable::from_csv(n, &d.to_csv().unwrap()).unwrap(), d);
            let b = BasisTable::compute(n).unwrap();
            assert_eq!(BasisTable::from_json(&b.to_json().unwrap()).unwrap(), b);
            assert_eq!(BasisTable::from_csv(n, &b.to_csv().unwrap()).unwrap(), b);
        }
    }

    #[test]
    fn dims_csv() {
        let csv = DimsTable::compute(3).unwrap().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,dim_val,dim_area");
        assert_eq!(lines[1], "0,1,1");
        assert_eq!(lines[2], "1,1,2");
        assert_eq!(lines[7], "6,1,");
    }

    #[test]
    fn basis_n1() {
        let b = BasisTable::compute(1).unwrap();
        let labels: Vec<String> = b.basis.iter().map(ToString::to_string).collect();
        assert_eq!(labels, ["Gamma[0,0]", "B[1,0]"]);
    }

    #[test]
    fn deterministic_output() {
        let a = render(TableKind::STable, 3, Format::Json).unwrap();
        let b = render(TableKind::STable, 3, Format::Json).unwrap();
        assert_eq!(a, b);
    }
}
