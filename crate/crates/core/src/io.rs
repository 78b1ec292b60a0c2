//! File formats: matroid, matrix and projection JSON, graph text, and JSON
//! renderings of measures and certificates.
//!
//! Every reader and writer takes an index `offset`: 0 for 0-based files, 1 for 1-based.

use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use crate::graphic::{Graph, GraphError};
use crate::linalg::{format_rational, parse_rational, QMatrix, Rational};
use crate::matroid::{Certificate, Density, Matroid, MatroidError, Subset, Verdict, Violator};
use crate::measure::BasisMeasure;
use crate::representable::ProjectionMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn field_error(field: &str, message: impl Into<String>) -> FormatError {
    FormatError::Field { field: field.to_string(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
}

fn get<'a>(v: &'a Value, field: &str) -> Result<&'a Value, FormatError> {
    v.get(field).ok_or_else(|| field_error(field, "missing"))
}

fn as_usize(v: &Value, field: &str) -> Result<usize, FormatError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| field_error(field, format!("expected a nonnegative integer, got {v}")))
}

fn as_array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| field_error(field, format!("expected an array, got {v}")))
}

fn as_rational(v: &Value, field: &str) -> Result<Rational, FormatError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(field_error(field, format!("expected a rational string, got {other}"))),
    };
    parse_rational(&text).map_err(|e| field_error(field, e.to_string()))
}

fn index(v: &Value, field: &str, offset: usize) -> Result<usize, FormatError> {
    let i = as_usize(v, field)?;
    i.checked_sub(offset).ok_or_else(|| field_error(field, format!("index {i} below {offset}")))
}

fn index_list(v: &Value, field: &str, offset: usize) -> Result<Vec<usize>, FormatError> {
    as_array(v, field)?.iter().map(|x| index(x, field, offset)).collect()
}

pub fn subset_json(s: Subset, offset: usize) -> Value {
    json!(s.iter().map(|i| i + offset).collect::<Vec<_>>())
}

pub fn parse_subset(v: &Value, field: &str, offset: usize) -> Result<Subset, FormatError> {
    let idx = index_list(v, field, offset)?;
    if idx.iter().any(|&i| i >= 64) {
        return Err(field_error(field, "index beyond 63"));
    }
    Ok(Subset::from_indices(&idx))
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn density_json(d: &Density) -> Value {
    Value::String(d.to_string())
}

fn parse_density(v: &Value, field: &str) -> Result<Density, FormatError> {
    match v.as_str() {
        Some("inf") => Ok(Density::Infinite),
        _ => Ok(Density::Finite(as_rational(v, field)?)),
    }
}

/// `{"n": 4, "rank": 3, "bases": [[0,1,2], ...]}`; `rank` is optional but checked when present.
pub fn parse_matroid(text: &str, offset: usize) -> Result<Matroid, FormatError> {
    let v = parse_json(text)?;
    let n = as_usize(get(&v, "n")?, "n")?;
    let bases: Vec<Vec<usize>> =
        as_array(get(&v, "bases")?, "bases")?.iter().map(|b| index_list(b, "bases", offset)).collect::<Result<_, _>>()?;
    let m = Matroid::new(n, &bases)?;
    if let Some(r) = v.get("rank") {
        let r = as_usize(r, "rank")?;
        if r != m.full_rank() {
            return Err(field_error("rank", format!("declared {r}, bases have size {}", m.full_rank())));
        }
    }
    Ok(m)
}

pub fn matroid_json(m: &Matroid, offset: usize) -> Value {
    json!({
        "n": m.ground_size(),
        "rank": m.full_rank(),
        "bases": m.bases().map(|b| subset_json(b, offset)).collect::<Vec<_>>(),
    })
}

/// First line `n_V m`, then `m` lines `u v`. Blank lines and `#` comments are skipped.
pub fn parse_graph(text: &str, offset: usize) -> Result<Graph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(FormatError::Line { line: 1, message: "empty graph file".into() })?;
    let nums = parse_pair(line, header)?;
    let (n, m) = nums;
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let (u, v) = parse_pair(line, text)?;
        let shift = |x: usize| {
            x.checked_sub(offset).ok_or(FormatError::Line { line, message: format!("vertex {x} below {offset}") })
        };
        let (u, v) = (shift(u)?, shift(v)?);
        if u >= n || v >= n {
            return Err(FormatError::Line { line, message: format!("vertex out of range for {n} vertices") });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(FormatError::Line { line: 1, message: format!("header declares {m} edges, found {}", edges.len()) });
    }
    Graph::new(n, &edges).map_err(FormatError::from)
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), FormatError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let err = || FormatError::Line { line, message: format!("expected two nonnegative integers, got `{text}`") };
    if parts.len() != 2 {
        return Err(err());
    }
    Ok((parts[0].parse().map_err(|_| err())?, parts[1].parse().map_err(|_| err())?))
}

pub fn graph_text(g: &Graph, offset: usize) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + offset, v + offset));
    }
    out
}

fn rational_rows(v: &Value, field: &str) -> Result<Vec<Vec<Rational>>, FormatError> {
    as_array(v, field)?
        .iter()
        .map(|row| as_array(row, field)?.iter().map(|x| as_rational(x, field)).collect())
        .collect()
}

fn rows_json(q: &QMatrix) -> Value {
    json!((0..q.rows()).map(|r| q.row(r).iter().map(rational_json).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// `{"rows": k, "cols": n, "entries": [["p/q", ...], ...]}`.
pub fn parse_matrix(text: &str) -> Result<QMatrix, FormatError> {
    let v = parse_json(text)?;
    let rows = as_usize(get(&v, "rows")?, "rows")?;
    let cols = as_usize(get(&v, "cols")?, "cols")?;
    let entries = rational_rows(get(&v, "entries")?, "entries")?;
    if entries.len() != rows {
        return Err(field_error("entries", format!("{} rows given, {rows} declared", entries.len())));
    }
    if let Some(i) = entries.iter().position(|r| r.len() != cols) {
        return Err(field_error("entries", format!("row {i} has {} entries, {cols} declared", entries[i].len())));
    }
    Ok(QMatrix::new(rows, cols, entries.into_iter().flatten().collect()))
}

pub fn matrix_json(q: &QMatrix) -> Value {
    json!({ "rows": q.rows(), "cols": q.cols(), "entries": rows_json(q) })
}

/// Exact: `{"dim": n, "entries": [["p/q", ...]]}`, optionally with `"weights"`, in
/// which case `entries` is the core `K` of `T_ij = sqrt(w_i w_j) K_ij`.
/// Floating: numeric entries and a `"tol"` field.
pub fn parse_projection(text: &str) -> Result<ProjectionMatrix, FormatError> {
    let v = parse_json(text)?;
    let dim = as_usize(get(&v, "dim")?, "dim")?;
    let entries = as_array(get(&v, "entries")?, "entries")?;
    if entries.len() != dim || entries.iter().any(|r| r.as_array().is_none_or(|r| r.len() != dim)) {
        return Err(field_error("entries", format!("expected a {dim} x {dim} array")));
    }
    if let Some(tol) = v.get("tol") {
        let tol = tol.as_f64().filter(|t| *t > 0.0).ok_or_else(|| field_error("tol", "expected a positive number"))?;
        let mut m = DMatrix::zeros(dim, dim);
        for (i, row) in entries.iter().enumerate() {
            for (j, x) in as_array(row, "entries")?.iter().enumerate() {
                m[(i, j)] = x.as_f64().ok_or_else(|| field_error("entries", format!("expected a number, got {x}")))?;
            }
        }
        return Ok(ProjectionMatrix::approx(m, tol));
    }
    let core = QMatrix::from_rows(rational_rows(get(&v, "entries")?, "entries")?);
    if !core.is_symmetric() {
        return Err(field_error("entries", "matrix is not symmetric"));
    }
    match v.get("weights") {
        None => Ok(ProjectionMatrix::exact(core)),
        Some(w) => {
            let w: Vec<Rational> = as_array(w, "weights")?.iter().map(|x| as_rational(x, "weights")).collect::<Result<_, _>>()?;
            if w.len() != dim || w.iter().any(|x| *x <= Rational::from_integer(0.into())) {
                return Err(field_error("weights", format!("expected {dim} positive weights")));
            }
            Ok(ProjectionMatrix::scaled(core, w))
        }
    }
}

pub fn projection_json(t: &ProjectionMatrix) -> Value {
    let mut out = Map::new();
    out.insert("dim".into(), json!(t.dim()));
    match t {
        ProjectionMatrix::Exact { core, weights } => {
            out.insert("entries".into(), rows_json(core));
            if let Some(w) = weights {
                out.insert("weights".into(), json!(w.iter().map(rational_json).collect::<Vec<_>>()));
                let f = t.to_f64();
                let rows: Vec<Vec<f64>> = (0..t.dim()).map(|i| (0..t.dim()).map(|j| f[(i, j)]).collect()).collect();
                out.insert("float_entries".into(), json!(rows));
            }
            if let Some(d) = t.diagonal_exact() {
                out.insert("diagonal".into(), json!(d.iter().map(rational_json).collect::<Vec<_>>()));
            }
        }
        ProjectionMatrix::Approx { entries, tol } => {
            let rows: Vec<Vec<f64>> = (0..t.dim()).map(|i| (0..t.dim()).map(|j| entries[(i, j)]).collect()).collect();
            out.insert("entries".into(), json!(rows));
            out.insert("tol".into(), json!(tol));
            out.insert("diagonal".into(), json!(t.diagonal_f64()));
        }
    }
    Value::Object(out)
}

/// `{"measure": [{"basis": [...], "weight": "p/q"}, ...], "marginal": "p/q"}`.
/// Lists the support of `mu`; bases of weight zero are omitted.
pub fn measure_json(mu: &BasisMeasure, marginal: Option<&Rational>, offset: usize) -> Value {
    let list: Vec<Value> = mu
        .weights()
        .iter()
        .filter(|(_, w)| !num_traits::Zero::is_zero(w))
        .map(|(b, w)| json!({ "basis": subset_json(*b, offset), "weight": rational_json(w) }))
        .collect();
    let mut out = Map::new();
    out.insert("measure".into(), Value::Array(list));
    if let Some(m) = marginal {
        out.insert("marginal".into(), rational_json(m));
    }
    Value::Object(out)
}

pub fn parse_measure(v: &Value, offset: usize) -> Result<BasisMeasure, FormatError> {
    let list = as_array(get(v, "measure")?, "measure")?;
    let entries = list
        .iter()
        .map(|e| Ok((parse_subset(get(e, "basis")?, "basis", offset)?, as_rational(get(e, "weight")?, "weight")?)))
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(BasisMeasure::new(entries))
}

pub fn violator_json(v: &Violator, offset: usize) -> Value {
    json!({
        "subset": subset_json(v.subset, offset),
        "size": v.size,
        "rank": v.rank,
        "density": density_json(&v.density),
    })
}

fn parse_violator(v: &Value, offset: usize) -> Result<Violator, FormatError> {
    let subset = parse_subset(get(v, "subset")?, "violator.subset", offset)?;
    let rank = as_usize(get(v, "rank")?, "violator.rank")?;
    let violator = Violator::new(subset, rank);
    if let Some(d) = v.get("density") {
        if parse_density(d, "violator.density")? != violator.density {
            return Err(field_error("violator.density", "inconsistent with subset size and rank"));
        }
    }
    Ok(violator)
}

pub fn certificate_json(c: &Certificate, offset: usize) -> Value {
    let mut out = Map::new();
    out.insert("verdict".into(), json!(c.verdict.name()));
    out.insert("density".into(), density_json(&c.density));
    if let Some(v) = &c.violator {
        out.insert("violator".into(), violator_json(v, offset));
    }
    if let Some(w) = &c.witness {
        out.insert("witness".into(), measure_json(w, None, offset));
    }
    Value::Object(out)
}

pub fn parse_certificate(v: &Value, offset: usize) -> Result<Certificate, FormatError> {
    let verdict_text = get(v, "verdict")?.as_str().ok_or_else(|| field_error("verdict", "expected a string"))?;
    let verdict = Verdict::parse(verdict_text).ok_or_else(|| field_error("verdict", format!("unknown verdict `{verdict_text}`")))?;
    let density = parse_density(get(v, "density")?, "density")?;
    let violator = v.get("violator").map(|x| parse_violator(x, offset)).transpose()?;
    let witness = v.get("witness").map(|x| parse_measure(x, offset)).transpose()?;
    Ok(Certificate { verdict, density, violator, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::matroid::{is_uniformly_dense, tadpole};

    #[test]
    fn matroid_roundtrip() {
        let text = r#"{"n": 4, "rank": 3, "bases": [[0,1,2],[0,2,3],[0,1,3]]}"#;
        let m = parse_matroid(text, 0).unwrap();
        assert_eq!(m, tadpole());
        let one = matroid_json(&m, 1).to_string();
        assert_eq!(parse_matroid(&one, 1).unwrap(), m);
        assert!(matches!(parse_matroid(r#"{"n": 4, "rank": 2, "bases": [[0,1,2]]}"#, 0), Err(FormatError::Field { .. })));
        assert!(matches!(parse_matroid(r#"{"bases": []}"#, 0), Err(FormatError::Field { field, .. }) if field == "n"));
    }

    #[test]
    fn graph_roundtrip_and_errors() {
        let g = parse_graph("4 4\n0 3\n0 1\n1 2\n0 2\n", 0).unwrap();
        assert_eq!(parse_graph(&graph_text(&g, 1), 1).unwrap(), g);
        match parse_graph("3 2\n0 1\n1 x\n", 0) {
            Err(FormatError::Line { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_graph("3 1\n0 5\n", 0), Err(FormatError::Line { line: 2, .. })));
        assert!(matches!(parse_graph("3 2\n0 1\n", 0), Err(FormatError::Line { line: 1, .. })));
    }

    #[test]
    fn matrix_and_projection_roundtrip() {
        let q = QMatrix::from_rows(vec![vec![rat(1, 2), int(0)], vec![int(3), rat(-7, 3)]]);
        assert_eq!(parse_matrix(&matrix_json(&q).to_string()).unwrap(), q);
        assert!(matches!(
            parse_matrix(r#"{"rows": 1, "cols": 2, "entries": [["1", "a"]]}"#),
            Err(FormatError::Field { field, .. }) if field == "entries"
        ));
        let t = ProjectionMatrix::scaled(QMatrix::identity(2), vec![int(1), int(1)]);
        assert_eq!(parse_projection(&projection_json(&t).to_string()).unwrap(), t);
        let f = ProjectionMatrix::approx(DMatrix::identity(2, 2), 1e-9);
        assert_eq!(parse_projection(&projection_json(&f).to_string()).unwrap(), f);
    }

    #[test]
    fn certificate_roundtrip() {
        let c = is_uniformly_dense(&tadpole()).unwrap();
        for offset in [0, 1] {
            let v = certificate_json(&c, offset);
            assert_eq!(parse_certificate(&v, offset).unwrap(), c);
        }
        assert_eq!(certificate_json(&c, 0)["violator"]["subset"], json!([1, 2, 3]));
        assert_eq!(certificate_json(&c, 0)["violator"]["density"], json!("3/2"));
    }
}
