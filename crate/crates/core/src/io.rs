//! The POLY text format: a header line `d n`, then `n` lines of `d`
//! rationals written `p` or `p/q`. Lines starting with `#` are comments.

use thiserror::Error;

use crate::exact::{format_rational, parse_rational, RatVector};
use crate::polytope::{Polytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn syntax(line: usize, msg: impl Into<String>) -> PolyError {
    PolyError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Parses a POLY text into its raw points and ambient dimension.
pub fn parse_points(text: &str) -> Result<(usize, Vec<RatVector>), PolyError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [d, n] = head[..] else {
        return Err(syntax(hl, "header must be `d n`"));
    };
    let d: usize = d.parse().map_err(|_| syntax(hl, "bad dimension"))?;
    let n: usize = n.parse().map_err(|_| syntax(hl, "bad point count"))?;
    if d == 0 {
        return Err(syntax(hl, "dimension must be positive"));
    }
    let mut points = Vec::with_capacity(n);
    for (ln, line) in lines {
        if points.len() == n {
            return Err(syntax(ln, format!("more than {n} points")));
        }
        let coords = line
            .split_whitespace()
            .map(|t| parse_rational(t).map_err(|e| syntax(ln, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != d {
            return Err(syntax(
                ln,
                format!("expected {d} coordinates, got {}", coords.len()),
            ));
        }
        points.push(RatVector::new(coords));
    }
    if points.len() != n {
        return Err(syntax(
            hl,
            format!("header promises {n} points, found {}", points.len()),
        ));
    }
    Ok((d, points))
}

/// Parses and hulls. Lower-dimensional point sets (segments, polygons in
/// space) are accepted.
pub fn parse_poly(text: &str) -> Result<Polytope, PolyError> {
    let (d, points) = parse_points(text)?;
    Ok(Polytope::from_points(&points, d)?)
}

/// Writes the vertices in lowest terms.
pub fn write_poly(p: &Polytope) -> String {
    let mut out = format!("{} {}\n", p.dim(), p.vertex_count());
    for v in p.vertices() {
        let coords: Vec<String> = v.iter().map(format_rational).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}
