//! Bundled data and input files.
//!
//! Every parse error carries the file and the 1-based line it refers to.

use std::fs;
use std::path::{Path, PathBuf};

use linecover_core::arrangement::{Arrangement, IncidenceTable};
use linecover_core::cover::{complete_lambda, lambda_from_lines, Group, GroupElement, LabelMap};
use linecover_core::{ProjectiveLine, ProjectivePoint};
use serde::Deserialize;

/// Environment variable naming a directory that replaces the bundled data.
pub const DATA_DIR_ENV: &str = "LINECOVER_DATA_DIR";

pub const TABLE_FILE: &str = "table1.tsv";
pub const AUX_FILE: &str = "aux_lines.tsv";
pub const TRIANGLE_FILE: &str = "triangle.json";

const BUNDLED_TABLE: &str = include_str!("../data/table1.tsv");
const BUNDLED_AUX: &str = include_str!("../data/aux_lines.tsv");
const BUNDLED_TRIANGLE: &str = include_str!("../data/triangle.json");

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}:{line}: {msg}")]
    Malformed { path: String, line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {msg}")]
    Json { path: String, line: usize, column: usize, msg: String },
    #[error("{path}: {msg}")]
    Rejected { path: String, msg: String },
}

fn malformed(path: &str, line: usize, msg: impl Into<String>) -> InputError {
    InputError::Malformed { path: path.to_string(), line, msg: msg.into() }
}

fn json_error(path: &str, e: serde_json::Error) -> InputError {
    InputError::Json { path: path.to_string(), line: e.line(), column: e.column(), msg: e.to_string() }
}

pub fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(k, l)| (k, l.split('\t').map(str::trim).collect()))
}

fn int(path: &str, line: usize, field: &str) -> Result<i64, InputError> {
    field.parse().map_err(|_| malformed(path, line, format!("`{field}` is not an integer")))
}

fn line_from(path: &str, line: usize, v: [i64; 3]) -> Result<ProjectiveLine, InputError> {
    ProjectiveLine::from_i64(v).map_err(|e| malformed(path, line, e.to_string()))
}

fn point_from(path: &str, v: [i64; 3]) -> Result<ProjectivePoint, InputError> {
    ProjectivePoint::from_i64(v).map_err(|e| InputError::Rejected { path: path.to_string(), msg: format!("{v:?}: {e}") })
}

/// One row of the line table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub row: usize,
    pub line: ProjectiveLine,
    pub label: Vec<u32>,
}

/// `row  a  b  c  g1,g2,...`
pub fn parse_table(path: &str, text: &str) -> Result<Vec<TableRow>, InputError> {
    let mut rows = Vec::new();
    for (k, f) in records(text) {
        if f.len() != 5 {
            return Err(malformed(path, k, format!("expected 5 tab-separated fields, found {}", f.len())));
        }
        let row = int(path, k, f[0])?;
        if row != rows.len() as i64 + 1 {
            return Err(malformed(path, k, format!("row number {row}, expected {}", rows.len() + 1)));
        }
        let v = [int(path, k, f[1])?, int(path, k, f[2])?, int(path, k, f[3])?];
        let label = f[4]
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| malformed(path, k, format!("bad label entry `{x}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(TableRow { row: row as usize, line: line_from(path, k, v)?, label });
    }
    if rows.is_empty() {
        return Err(malformed(path, 1, "no rows"));
    }
    Ok(rows)
}

/// `center  a  b  c`, two lines per centre in the order P, Q, R.
pub fn parse_aux(path: &str, text: &str) -> Result<Vec<ProjectiveLine>, InputError> {
    let mut out = Vec::new();
    for (k, f) in records(text) {
        if f.len() != 4 {
            return Err(malformed(path, k, format!("expected 4 tab-separated fields, found {}", f.len())));
        }
        let expected = ["P", "Q", "R"].get(out.len() / 2).copied().unwrap_or("-");
        if f[0] != expected {
            return Err(malformed(path, k, format!("centre `{}`, expected `{expected}`", f[0])));
        }
        out.push(line_from(path, k, [int(path, k, f[1])?, int(path, k, f[2])?, int(path, k, f[3])?])?);
    }
    if out.len() != 6 {
        return Err(malformed(path, text.lines().count(), format!("{} auxiliary lines, expected 6", out.len())));
    }
    Ok(out)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub p: u32,
    pub r: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TriangleFile {
    p: [i64; 3],
    q: [i64; 3],
    r: [i64; 3],
    group: GroupSpec,
}

pub fn parse_triangle(path: &str, text: &str) -> Result<([ProjectivePoint; 3], GroupSpec), InputError> {
    let t: TriangleFile = serde_json::from_str(text).map_err(|e| json_error(path, e))?;
    Ok(([point_from(path, t.p)?, point_from(path, t.q)?, point_from(path, t.r)?], t.group))
}

/// The heart dataset: table, auxiliary lines, triangle triple and group.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub source: String,
    pub rows: Vec<TableRow>,
    pub aux: Vec<ProjectiveLine>,
    pub triangle: [ProjectivePoint; 3],
    pub group: Group,
}

impl Dataset {
    pub fn bundled() -> Self {
        Dataset::parse("<bundled>", BUNDLED_TABLE, BUNDLED_AUX, BUNDLED_TRIANGLE).expect("bundled data parses")
    }

    fn parse(source: &str, table: &str, aux: &str, triangle: &str) -> Result<Self, InputError> {
        let at = |f: &str| format!("{source}/{f}");
        let rows = parse_table(&at(TABLE_FILE), table)?;
        let aux = parse_aux(&at(AUX_FILE), aux)?;
        let (triangle, g) = parse_triangle(&at(TRIANGLE_FILE), triangle)?;
        let group = Group::new(g.p, g.r).map_err(|e| InputError::Rejected { path: at(TRIANGLE_FILE), msg: e.to_string() })?;
        for r in &rows {
            if r.label.len() != g.r || r.label.iter().any(|&x| x >= g.p) {
                return Err(InputError::Rejected {
                    path: at(TABLE_FILE),
                    msg: format!("row {}: label {:?} is not in (Z/{})^{}", r.row, r.label, g.p, g.r),
                });
            }
        }
        Ok(Dataset { source: source.to_string(), rows, aux, triangle, group })
    }

    pub fn from_dir(dir: &Path) -> Result<Self, InputError> {
        let f = |name: &str| read(&dir.join(name));
        Dataset::parse(&dir.display().to_string(), &f(TABLE_FILE)?, &f(AUX_FILE)?, &f(TRIANGLE_FILE)?)
    }

    /// The directory from the environment if set, else the bundled files.
    pub fn load() -> Result<Self, InputError> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(d) => Dataset::from_dir(&PathBuf::from(d)),
            None => Ok(Dataset::bundled()),
        }
    }

    pub fn lines(&self) -> Vec<ProjectiveLine> {
        self.rows.iter().map(|r| r.line.clone()).collect()
    }

    pub fn arrangement(&self) -> Result<Arrangement, InputError> {
        Arrangement::new(self.lines()).map_err(|e| InputError::Rejected { path: self.source.clone(), msg: e.to_string() })
    }

    pub fn labels(&self) -> Vec<GroupElement> {
        self.rows.iter().map(|r| GroupElement(r.label.clone())).collect()
    }

    /// The labels exactly as listed, exceptional labels summed.
    pub fn lambda(&self, table: &IncidenceTable) -> Result<LabelMap, InputError> {
        lambda_from_lines(self.group, &self.labels(), table).map_err(|e| InputError::Rejected { path: self.source.clone(), msg: e.to_string() })
    }

    /// The labels of all rows but the last, completed by divisibility.
    pub fn completed_lambda(&self, table: &IncidenceTable) -> Result<LabelMap, InputError> {
        let l = self.labels();
        complete_lambda(self.group, &l[..l.len() - 1], table).map_err(|e| InputError::Rejected { path: self.source.clone(), msg: e.to_string() })
    }
}

/// An arrangement given as JSON: `{"lines": [[a,b,c],...], "extra_points": [...], "labels": [[...],...], "group": {"p":7,"r":4}}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub lines: Vec<[i64; 3]>,
    #[serde(default)]
    pub extra_points: Option<Vec<[i64; 3]>>,
    #[serde(default)]
    pub labels: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub group: Option<GroupSpec>,
}

#[derive(Clone, Debug)]
pub struct ArrangementInput {
    pub path: String,
    pub arrangement: Arrangement,
    pub extra_points: Option<Vec<ProjectivePoint>>,
    pub labels: Option<(Group, Vec<GroupElement>)>,
}

pub fn parse_arrangement(path: &str, text: &str) -> Result<ArrangementInput, InputError> {
    let f: ArrangementFile = serde_json::from_str(text).map_err(|e| json_error(path, e))?;
    let rejected = |msg: String| InputError::Rejected { path: path.to_string(), msg };
    let lines = f
        .lines
        .iter()
        .enumerate()
        .map(|(k, &v)| ProjectiveLine::from_i64(v).map_err(|e| rejected(format!("lines[{k}] {v:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let arrangement = Arrangement::new(lines).map_err(|e| rejected(e.to_string()))?;
    let extra_points = f
        .extra_points
        .map(|v| v.into_iter().map(|x| point_from(path, x)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let labels = match (f.labels, f.group) {
        (None, None) => None,
        (Some(l), Some(g)) => {
            let group = Group::new(g.p, g.r).map_err(|e| rejected(e.to_string()))?;
            let l = l
                .into_iter()
                .enumerate()
                .map(|(k, v)| group.element(&v).map_err(|e| rejected(format!("labels[{k}]: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            Some((group, l))
        }
        _ => return Err(rejected("`labels` and `group` must be given together".into())),
    };
    Ok(ArrangementInput { path: path.to_string(), arrangement, extra_points, labels })
}

pub fn load_arrangement(path: &Path) -> Result<ArrangementInput, InputError> {
    parse_arrangement(&path.display().to_string(), &read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use linecover_core::data;

    #[test]
    fn bundled_files_match_core_tables() {
        let d = Dataset::bundled();
        assert_eq!(d.rows.len(), data::TABLE.len());
        for (r, (l, lab)) in d.rows.iter().zip(data::TABLE.iter()) {
            assert_eq!(r.line, ProjectiveLine::from_i64(*l).unwrap());
            assert_eq!(r.label, lab.to_vec());
        }
        let aux: Vec<_> = data::AUX_LINES.iter().map(|&v| ProjectiveLine::from_i64(v).unwrap()).collect();
        assert_eq!(d.aux, aux);
        assert_eq!(d.triangle, data::TRIANGLE.map(|v| ProjectivePoint::from_i64(v).unwrap()));
        assert_eq!((d.group.p(), d.group.r()), (data::HEART_P, data::HEART_R));
        assert_eq!(&d.lines()[data::CLOSURE_ROWS..data::TRIANGLE_ROW], &aux[..]);
    }

    #[test]
    fn table_errors_carry_line_numbers() {
        let err = parse_table("t.tsv", "# header\n1\t0\t0\t1\t1,2\n2\t0\tx\t1\t1,2\n").unwrap_err();
        assert_eq!(err.to_string(), "t.tsv:3: `x` is not an integer");
        let err = parse_table("t.tsv", "1\t0\t0\t0\t1\n").unwrap_err();
        assert!(matches!(err, InputError::Malformed { line: 1, .. }));
        let err = parse_table("t.tsv", "2\t0\t0\t1\t1\n").unwrap_err();
        assert!(err.to_string().contains("expected 1"));
    }

    #[test]
    fn json_errors_carry_positions() {
        let err = parse_arrangement("a.json", "{\n  \"lines\": [[1, 0, 0],\n  [0, 1]]\n}").unwrap_err();
        assert!(matches!(err, InputError::Json { line: 3, .. }), "{err}");
        let err = parse_arrangement("a.json", "{\"lines\": [[1,0,0],[2,0,0]]}").unwrap_err();
        assert!(err.to_string().contains("a.json"), "{err}");
        let ok = parse_arrangement("a.json", "{\"lines\": [[1,0,0],[0,1,0]], \"extra_points\": [[1,1,1]]}").unwrap();
        assert_eq!(ok.arrangement.len(), 2);
        assert_eq!(ok.extra_points.unwrap().len(), 1);
    }
}
