//! JSON file formats for groups, group cocycles and representations.
//!
//! Cocycle phases are a nested array with axis order `[g_n][…][g_1]`, so
//! `phases[a][b][c]` holds `ω(a, b, c)`; entries are `"p/q"` strings.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::builtins;
use crate::cochain::{Cochain, Phase};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::Groupoid;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        Self { name: g.label(), order: g.order(), table: g.table().to_vec() }
    }

    pub fn into_group(self) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return Err(Error::InvalidGroup(format!("order {} but table has {} rows", self.order, self.table.len())));
        }
        FiniteGroup::from_table(Some(self.name), self.table)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CocycleFile {
    pub group: String,
    pub degree: usize,
    pub phases: Value,
}

/// A group cochain read from disk, before any cocycle checks.
#[derive(Debug, Clone)]
pub struct LoadedCochain {
    pub group: FiniteGroup,
    pub cochain: Cochain,
}

/// Reads a group from a registry string or a JSON file path.
pub fn resolve_group(spec: &str, relative_to: Option<&Path>) -> Result<FiniteGroup> {
    match builtins::group(spec) {
        Ok(g) => Ok(g),
        Err(builtin_err) => {
            let path = relative_path(spec, relative_to);
            if path.is_file() {
                read_group(&path)
            } else {
                Err(builtin_err)
            }
        }
    }
}

fn relative_path(spec: &str, relative_to: Option<&Path>) -> PathBuf {
    let p = PathBuf::from(spec);
    match relative_to {
        Some(dir) if p.is_relative() && !p.exists() => dir.join(p),
        _ => p,
    }
}

pub fn read_group(path: &Path) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str::<GroupFile>(&text)?.into_group()
}

/// Parses a cocycle file against a group. The `group` field is resolved as
/// a registry string or a path relative to `dir` unless `group` is given.
pub fn parse_cocycle(text: &str, group: Option<&FiniteGroup>, dir: Option<&Path>) -> Result<LoadedCochain> {
    let file: CocycleFile = serde_json::from_str(text)?;
    let g = match group {
        Some(g) => g.clone(),
        None => resolve_group(&file.group, dir)?,
    };
    let n = g.order();
    let mut values = std::collections::HashMap::new();
    collect_phases(&file.phases, file.degree, n, &mut Vec::new(), &mut values)?;
    let base = Arc::new(Groupoid::delooping(&g));
    let cochain = Cochain::from_fn(&base, file.degree, |s| {
        let key: Vec<usize> = if file.degree == 0 { Vec::new() } else { s.to_vec() };
        values[&key]
    });
    Ok(LoadedCochain { group: g, cochain })
}

fn collect_phases(
    v: &Value,
    depth: usize,
    n: usize,
    prefix: &mut Vec<usize>,
    out: &mut std::collections::HashMap<Vec<usize>, Phase>,
) -> Result<()> {
    let at = || format!("phases{}", prefix.iter().map(|i| format!("[{i}]")).collect::<String>());
    if depth == 0 {
        let s = v.as_str().ok_or_else(|| Error::Parse(format!("{}: expected a \"p/q\" string", at())))?;
        let p = s.parse::<Phase>().map_err(|_| Error::Parse(format!("{}: bad phase {s:?}", at())))?;
        out.insert(prefix.clone(), p);
        return Ok(());
    }
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("{}: expected an array", at())))?;
    if arr.len() != n {
        return Err(Error::Parse(format!("{}: expected {n} entries, found {}", at(), arr.len())));
    }
    for (i, item) in arr.iter().enumerate() {
        prefix.push(i);
        collect_phases(item, depth - 1, n, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

pub fn read_cocycle(path: &Path, group: Option<&FiniteGroup>) -> Result<LoadedCochain> {
    let text = std::fs::read_to_string(path)?;
    parse_cocycle(&text, group, path.parent())
}

/// Resolves `cocycle:…` registry strings, otherwise reads a file.
pub fn resolve_cocycle(spec: &str, group: Option<&FiniteGroup>) -> Result<LoadedCochain> {
    if spec.starts_with("cocycle:") {
        let (g, c) = builtins::cocycle(spec, group)?;
        return Ok(LoadedCochain { group: g, cochain: c });
    }
    read_cocycle(Path::new(spec), group)
}

/// The nested-array form of a cochain on a delooping.
pub fn cocycle_to_file(group: &FiniteGroup, c: &Cochain, group_ref: &str) -> CocycleFile {
    fn build(c: &Cochain, n: usize, depth: usize, prefix: &mut Vec<usize>) -> Value {
        if depth == 0 {
            let v = if prefix.is_empty() { c.value(&[0]) } else { c.value(prefix) };
            return Value::String(v.to_string());
        }
        Value::Array(
            (0..n)
                .map(|i| {
                    prefix.push(i);
                    let v = build(c, n, depth - 1, prefix);
                    prefix.pop();
                    v
                })
                .collect(),
        )
    }
    CocycleFile { group: group_ref.to_string(), degree: c.degree(), phases: build(c, group.order(), c.degree(), &mut Vec::new()) }
}

/// Formats a float with fixed precision, never printing `-0`.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn complex_json(z: Complex64) -> Value {
    serde_json::json!([format_float(z.re), format_float(z.im)])
}

fn parse_complex(v: &Value) -> Result<Complex64> {
    let bad = || Error::Parse(format!("expected a [re, im] pair, found {v}"));
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
    let part = |x: &Value| -> Result<f64> {
        match x {
            Value::Number(n) => n.as_f64().ok_or_else(bad),
            Value::String(s) => s.trim().parse().map_err(|_| bad()),
            _ => Err(bad()),
        }
    };
    Ok(Complex64::new(part(&arr[0])?, part(&arr[1])?))
}

pub fn matrix_json(m: &DMatrix<Complex64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect())).collect())
}

/// A representation of a twisted group algebra: one `dim × dim` matrix per
/// group element, in increasing element order.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct GroupRepFile {
    pub dim: usize,
    pub matrices: Vec<Value>,
}

impl GroupRepFile {
    pub fn matrices(&self) -> Result<Vec<DMatrix<Complex64>>> {
        self.matrices
            .iter()
            .map(|m| {
                let rows = m.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
                if rows.len() != self.dim {
                    return Err(Error::Parse(format!("matrix has {} rows, expected {}", rows.len(), self.dim)));
                }
                let mut out = DMatrix::zeros(self.dim, self.dim);
                for (i, row) in rows.iter().enumerate() {
                    let row = row.as_array().filter(|r| r.len() == self.dim).ok_or_else(|| {
                        Error::Parse(format!("row {i} must have {} entries", self.dim))
                    })?;
                    for (j, z) in row.iter().enumerate() {
                        out[(i, j)] = parse_complex(z)?;
                    }
                }
                Ok(out)
            })
            .collect()
    }

    pub fn from_matrices(dim: usize, ms: &[DMatrix<Complex64>]) -> Self {
        Self { dim, matrices: ms.iter().map(matrix_json).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_file_round_trip() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let f = GroupFile::from_group(&g);
        let text = serde_json::to_string(&f).unwrap();
        let back = serde_json::from_str::<GroupFile>(&text).unwrap().into_group().unwrap();
        assert_eq!(back.table(), g.table());
        let bad = GroupFile { name: "x".into(), order: 2, table: vec![vec![0, 1], vec![0, 1]] };
        assert!(bad.into_group().is_err());
    }

    #[test]
    fn cocycle_round_trip() {
        let (g, omega) = builtins::z2cubed_omega();
        let file = cocycle_to_file(&g, &omega, "z2cubed");
        assert_eq!(file.phases[4][2][1], "1/2");
        let text = serde_json::to_string(&file).unwrap();
        let loaded = parse_cocycle(&text, None, None).unwrap();
        assert_eq!(loaded.cochain.value(&[4, 2, 1]), Phase::HALF);
        assert!(loaded.cochain.is_cocycle());
        assert_eq!(loaded.group.table(), g.table());
    }

    #[test]
    fn cocycle_shape_errors_name_the_position() {
        let text = r#"{"group": "cyclic:2", "degree": 2, "phases": [["0/1", "0/1"], ["0/1"]]}"#;
        let err = parse_cocycle(text, None, None).unwrap_err().to_string();
        assert!(err.contains("phases[1]"), "{err}");
        let text = r#"{"group": "cyclic:2", "degree": 1, "phases": ["0/1", "half"]}"#;
        assert!(parse_cocycle(text, None, None).unwrap_err().to_string().contains("phases[1]"));
        let syntax = parse_cocycle("{\"group\": ", None, None).unwrap_err().to_string();
        assert!(syntax.contains("line 1"), "{syntax}");
    }

    #[test]
    fn floats_are_stable() {
        assert_eq!(format_float(-0.0), "0.000000000000");
        assert_eq!(format_float(-1e-15), "0.000000000000");
        assert_eq!(format_float(-0.5), "-0.500000000000");
    }

    #[test]
    fn rep_file_round_trip() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]).map(|x| Complex64::new(x, 0.0));
        let f = GroupRepFile::from_matrices(2, &[m.clone()]);
        let text = serde_json::to_string(&f).unwrap();
        let back: GroupRepFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.matrices().unwrap()[0], m);
    }
}
