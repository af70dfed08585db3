//! Weighted-graph text format.
//!
//! ```text
//! wg 1
//! <n>
//! x_1 x_2 … x_n
//! a(1,2) a(1,3) … a(1,n)
//! a(2,3) … a(2,n)
//! …
//! a(n−1,n)
//! ```

use std::fmt::Write as _;

use super::{SymmetricWeights, WeightedGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAGIC: &str = "wg 1";

pub fn parse<T: Scalar>(text: &str) -> Result<WeightedGraph<T>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Format("empty input".into()))?;
    if header != MAGIC {
        return Err(Error::Format(format!("expected header `{MAGIC}`, found `{header}`")));
    }
    let n: usize = lines
        .next()
        .and_then(|l| l.parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Format("missing or invalid order".into()))?;

    let x = parse_row::<T>(lines.next().ok_or_else(|| Error::Format("missing vertex weights".into()))?, n, "vertex weights")?;
    let mut a = SymmetricWeights::filled(n, T::zero());
    for i in 0..n.saturating_sub(1) {
        let line = lines
            .next()
            .ok_or_else(|| Error::Format(format!("missing edge row {}", i + 1)))?;
        let row = parse_row::<T>(line, n - 1 - i, &format!("edge row {}", i + 1))?;
        for (k, w) in row.into_iter().enumerate() {
            if w < T::zero() || w > T::one() {
                return Err(Error::Format(format!("edge weight a({}, {}) = {w} is outside [0, 1]", i + 1, i + 2 + k)));
            }
            a.set(i, i + 1 + k, w);
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Format(format!("unexpected trailing line `{extra}`")));
    }
    if x.iter().any(|v| *v < T::zero() || *v > T::one()) {
        return Err(Error::Format("vertex weights must lie in [0, 1]".into()));
    }
    WeightedGraph::new(x, a).map_err(|e| match e {
        Error::Argument(msg) => Error::Format(msg),
        other => other,
    })
}

fn parse_row<T: Scalar>(line: &str, expected: usize, what: &str) -> Result<Vec<T>> {
    let values: Vec<T> = line
        .split_whitespace()
        .map(|tok| T::parse_scalar(tok).ok_or_else(|| Error::Format(format!("invalid number `{tok}` in {what}"))))
        .collect::<Result<_>>()?;
    if values.len() != expected {
        return Err(Error::Format(format!("{what}: expected {expected} values, found {}", values.len())));
    }
    Ok(values)
}

pub fn to_text<T: Scalar>(g: &WeightedGraph<T>) -> String {
    let n = g.order();
    let mut out = format!("{MAGIC}\n{n}\n");
    let row: Vec<String> = g.vertex_weights().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "{}", row.join(" "));
    for i in 0..n.saturating_sub(1) {
        let row: Vec<String> = (i + 1..n).map(|j| g.a(i, j).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn parses_reference_file() {
        let text = "wg 1\n3\n0.5 0.25 0.25\n1 0.5\n0\n";
        let g: WeightedGraph<f64> = parse(text).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(*g.a(0, 2), 0.5);
        assert_eq!(*g.a(2, 1), 0.0);
        assert_eq!(to_text(&g), text);
    }

    #[test]
    fn exact_parsing() {
        let g: WeightedGraph<BigRational> = parse("wg 1\n3\n7/15 7/15 1/15\n1 1\n1\n").unwrap();
        assert_eq!(g.clique_density(2), BigRational::from_ratio(7, 25));
    }

    #[test]
    fn single_vertex() {
        let g: WeightedGraph<f64> = parse("wg 1\n1\n1\n").unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn rejections() {
        let bad = [
            "",
            "wg 2\n1\n1\n",
            "wg 1\n2\n0.5 0.5\n1.5\n",
            "wg 1\n2\n0.5 0.5\n-0.1\n",
            "wg 1\n2\n0.5 0.6\n1\n",
            "wg 1\n2\n0.5\n1\n",
            "wg 1\n2\n0.5 0.5\n1 1\n",
            "wg 1\n2\n0.5 0.5\n1\n1\n",
            "wg 1\n2\n0.5 x\n1\n",
        ];
        for text in bad {
            assert!(matches!(parse::<f64>(text), Err(Error::Format(_))), "accepted {text:?}");
        }
    }
}
