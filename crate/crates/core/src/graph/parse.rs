use std::str::FromStr;

use num_traits::Zero;

use super::{Graph, GraphFile, Weight};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    Dimacs,
}

impl GraphFormat {
    /// Guesses the format from a file extension; anything but `.col`/`.dimacs`/`.clq` is JSON.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("col" | "dimacs" | "clq" | "dim") => Self::Dimacs,
            _ => Self::Json,
        }
    }
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "dimacs" => Ok(Self::Dimacs),
            other => Err(Error::InvalidParameter(format!(
                "unknown graph format `{other}`"
            ))),
        }
    }
}

pub fn parse_graph(content: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Json => parse_json(content),
        GraphFormat::Dimacs => parse_dimacs(content),
    }
}

fn parse_json(content: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(content)
        .map_err(|e| Error::MalformedGraph(format!("invalid JSON graph: {e}")))?;
    let mut g = Graph::new(file.n, file.edges.iter().map(|&[a, b]| (a, b)))?;
    if let Some(ws) = &file.weights {
        let ws = ws
            .iter()
            .map(|w| w.to_weight())
            .collect::<Result<Vec<_>>>()?;
        g = g.with_weights(ws)?;
    }
    if let Some(labels) = file.labels {
        g = g.with_labels(labels)?;
    }
    Ok(g)
}

/// DIMACS edge format: `c` comments, one `p edge <n> <m>` line, `e <i> <j>`
/// lines with 1-indexed endpoints, and optional `n <v> <w>` vertex weights.
fn parse_dimacs(content: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut weights: Vec<(usize, Weight)> = Vec::new();

    for (lineno, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let bad =
            |msg: &str| Error::MalformedGraph(format!("line {}: {msg}: `{line}`", lineno + 1));
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                if n.is_some() {
                    return Err(bad("duplicate problem line"));
                }
                let kind = tok.next().ok_or_else(|| bad("missing problem kind"))?;
                if kind != "edge" && kind != "col" {
                    return Err(bad("expected `p edge`"));
                }
                let count = tok
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| bad("missing vertex count"))?;
                n = Some(count);
            }
            Some("e") => {
                let n = n.ok_or_else(|| bad("edge before problem line"))?;
                let mut endpoint = || -> Result<usize> {
                    let v = tok
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| bad("expected two vertex indices"))?;
                    if v == 0 || v > n {
                        return Err(bad("vertex index out of range 1..=n"));
                    }
                    Ok(v - 1)
                };
                let a = endpoint()?;
                let b = endpoint()?;
                edges.push((a, b));
            }
            Some("n") => {
                let n = n.ok_or_else(|| bad("weight before problem line"))?;
                let v = tok
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|&v| v >= 1 && v <= n)
                    .ok_or_else(|| bad("vertex index out of range 1..=n"))?;
                let w = parse_weight(tok.next().ok_or_else(|| bad("missing weight"))?)?;
                weights.push((v - 1, w));
            }
            _ => return Err(bad("unrecognised line")),
        }
    }

    let n = n.ok_or_else(|| Error::MalformedGraph("missing `p edge` line".into()))?;
    let mut g = Graph::new(n, edges)?;
    if !weights.is_empty() {
        let mut full = vec![Weight::from(1); n];
        for (v, w) in weights {
            full[v] = w;
        }
        g = g.with_weights(full)?;
    }
    Ok(g)
}

/// Parses a weight list: a JSON array of numbers and `"p/q"` strings, or
/// whitespace- or comma-separated tokens.
pub fn parse_weights(content: &str) -> Result<Vec<Weight>> {
    let trimmed = content.trim();
    if trimmed.starts_with('[') {
        let items: Vec<super::WeightRepr> = serde_json::from_str(trimmed)
            .map_err(|e| Error::MalformedGraph(format!("invalid weight list: {e}")))?;
        return items.iter().map(|w| w.to_weight()).collect();
    }
    trimmed
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(parse_weight)
        .collect()
}

/// Parses an exact weight from `"3"`, `"0.25"`, `"1.5e-1"` or `"2/3"`.
pub fn parse_weight(text: &str) -> Result<Weight> {
    let text = text.trim();
    let bad = || Error::MalformedGraph(format!("cannot parse weight `{text}`"));
    let w = if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Weight::new(p, q)
    } else {
        parse_decimal(text).ok_or_else(bad)?
    };
    if w <= Weight::zero() {
        return Err(Error::MalformedGraph(format!(
            "weight `{text}` is not positive"
        )));
    }
    Ok(w)
}

fn parse_decimal(text: &str) -> Option<Weight> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: i64 = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let pow = 10i64.checked_pow(scale.unsigned_abs())?;
    let mut w = if scale >= 0 {
        Weight::from_integer(digits.checked_mul(pow)?)
    } else {
        Weight::new(digits, pow)
    };
    if neg {
        w = -w;
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_cycle() {
        let g = parse_graph(
            r#"{"n":5,"edges":[[0,1],[1,2],[2,3],[3,4],[4,0]]}"#,
            GraphFormat::Json,
        )
        .unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 5);
        assert!(!g.is_weighted());
    }

    #[test]
    fn json_self_loop_rejected() {
        let err = parse_graph(r#"{"n":2,"edges":[[0,0]]}"#, GraphFormat::Json).unwrap_err();
        assert!(matches!(err, Error::MalformedGraph(_)));
    }

    #[test]
    fn json_out_of_range_and_bad_weight_rejected() {
        assert!(parse_graph(r#"{"n":2,"edges":[[0,2]]}"#, GraphFormat::Json).is_err());
        assert!(parse_graph(r#"{"n":2,"edges":[],"weights":[1,0]}"#, GraphFormat::Json).is_err());
        assert!(parse_graph(r#"{"n":2,"edges":[],"weights":[1,-2]}"#, GraphFormat::Json).is_err());
    }

    #[test]
    fn json_weights_exact() {
        let g = parse_graph(
            r#"{"n":3,"edges":[[0,1]],"weights":[1,0.1,"2/3"]}"#,
            GraphFormat::Json,
        )
        .unwrap();
        assert_eq!(g.weight(1), Weight::new(1, 10));
        assert_eq!(g.weight(2), Weight::new(2, 3));
    }

    #[test]
    fn dimacs_triangle() {
        let text = "c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n";
        let g = parse_graph(text, GraphFormat::Dimacs).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn dimacs_duplicates_and_errors() {
        let g = parse_graph("p edge 2 2\ne 1 2\ne 2 1\n", GraphFormat::Dimacs).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(parse_graph("p edge 2 1\ne 1 1\n", GraphFormat::Dimacs).is_err());
        assert!(parse_graph("p edge 2 1\ne 0 1\n", GraphFormat::Dimacs).is_err());
        assert!(parse_graph("p edge 2 1\ne 1 3\n", GraphFormat::Dimacs).is_err());
        assert!(parse_graph("e 1 2\n", GraphFormat::Dimacs).is_err());
    }

    #[test]
    fn dimacs_vertex_weights() {
        let g = parse_graph("p edge 2 1\ne 1 2\nn 2 3/2\n", GraphFormat::Dimacs).unwrap();
        assert_eq!(g.weight(0), Weight::from(1));
        assert_eq!(g.weight(1), Weight::new(3, 2));
    }

    #[test]
    fn decimal_weights() {
        assert_eq!(parse_weight("2.50").unwrap(), Weight::new(5, 2));
        assert_eq!(parse_weight("1e-2").unwrap(), Weight::new(1, 100));
        assert_eq!(parse_weight(".5").unwrap(), Weight::new(1, 2));
        assert!(parse_weight("abc").is_err());
        assert!(parse_weight("1/0").is_err());
    }

    #[test]
    fn weight_lists() {
        let w = parse_weights("[1, \"1/2\", 0.25]").unwrap();
        assert_eq!(
            w,
            vec![
                Weight::from_integer(1),
                Weight::new(1, 2),
                Weight::new(1, 4)
            ]
        );
        assert_eq!(parse_weights("1 2,\n3").unwrap().len(), 3);
        assert!(parse_weights("1 -2").is_err());
    }
}
