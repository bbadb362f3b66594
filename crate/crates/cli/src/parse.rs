//! Parsers for unitary specs, phase lists and numeric grids.

use std::f64::consts::PI;

use entprobe::discrim::weyl_heisenberg;
use entprobe::linops::paulis;
use entprobe::{ComplexMatrix, C64};

use crate::CliError;

pub const UNITARITY_TOL: f64 = 1e-8;

/// A number, optionally written with `pi`: `1.5`, `pi`, `2pi/3`, `-pi/4`, `0.5*pi`.
pub fn parse_angle(s: &str) -> Result<f64, CliError> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || CliError::Usage(format!("cannot parse angle '{s}'"));
    let Some(at) = t.find("pi") else {
        return t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    };
    let head = t[..at].trim_end_matches('*').trim();
    let tail = t[at + 2..].trim();
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let div = match tail {
        "" => 1.0,
        t => t.strip_prefix('/').and_then(|d| d.trim().parse::<f64>().ok()).ok_or_else(bad)?,
    };
    if div == 0.0 {
        return Err(bad());
    }
    let v = coef * PI / div;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// `a,b,c` or the inclusive linear grid `start:stop:count`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, count] => {
            let a = parse_angle(start)?;
            let b = parse_angle(stop)?;
            let n: usize = count
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("grid count '{count}' is not a positive integer")))?;
            match n {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
            }
        }
        [list] => list.split(',').filter(|p| !p.trim().is_empty()).map(parse_angle).collect::<Result<_, _>>()?,
        _ => return Err(CliError::Usage(format!("grid '{s}' must be a list or start:stop:count"))),
    };
    if grid.is_empty() {
        return Err(CliError::Usage(format!("grid '{s}' is empty")));
    }
    Ok(grid)
}

fn parse_index(s: &str, what: &str) -> Result<usize, CliError> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("{what} '{s}' is not a nonnegative integer")))
}

/// `pauli:x|y|z|i`, `wh:d,m,n`, `diag:t1,t2,...` or `file:PATH`.
pub fn parse_unitary(spec: &str) -> Result<ComplexMatrix, CliError> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("unitary '{spec}' must look like kind:args")))?;
    let m = match kind {
        "pauli" => match body.trim().to_ascii_lowercase().as_str() {
            "i" => paulis::identity(),
            "x" => paulis::x(),
            "y" => paulis::y(),
            "z" => paulis::z(),
            other => return Err(CliError::Usage(format!("unknown Pauli '{other}'"))),
        },
        "wh" => {
            let f: Vec<&str> = body.split(',').collect();
            let [d, m, n] = f.as_slice() else {
                return Err(CliError::Usage(format!("wh spec '{body}' must be d,m,n")));
            };
            weyl_heisenberg(parse_index(d, "d")?, parse_index(m, "m")?, parse_index(n, "n")?)?
        }
        "diag" => {
            let phases: Vec<f64> = body.split(',').map(parse_angle).collect::<Result<_, _>>()?;
            ComplexMatrix::diag_phases(&phases)
        }
        "file" => {
            let text = std::fs::read_to_string(body)
                .map_err(|e| CliError::Usage(format!("cannot read unitary file '{body}': {e}")))?;
            parse_matrix_json(&text)?
        }
        other => return Err(CliError::Usage(format!("unknown unitary kind '{other}'"))),
    };
    if !m.is_unitary(UNITARITY_TOL) {
        return Err(CliError::Usage(format!("'{spec}' is not unitary within {UNITARITY_TOL:e}")));
    }
    Ok(m)
}

/// A JSON 2-D array whose entries are `[re, im]` pairs.
pub fn parse_matrix_json(text: &str) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad matrix JSON: {e}")))?;
    let rows: Vec<Vec<C64>> = rows.into_iter().map(|r| r.into_iter().map(|[a, b]| C64::new(a, b)).collect()).collect();
    Ok(ComplexMatrix::from_rows(&rows)?)
}

/// `max`, `product`, or comma-separated Schmidt weights (normalized).
pub fn parse_schmidt(spec: &str, d: usize) -> Result<Vec<f64>, CliError> {
    let w = match spec.trim() {
        "max" => vec![1.0; d],
        "product" => {
            let mut v = vec![0.0; d];
            v[0] = 1.0;
            v
        }
        list => {
            let mut v: Vec<f64> = list
                .split(',')
                .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad Schmidt weight '{p}'"))))
                .collect::<Result<_, _>>()?;
            if v.len() > d {
                return Err(CliError::Usage(format!("{} Schmidt weights for d = {d}", v.len())));
            }
            v.resize(d, 0.0);
            v
        }
    };
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/3").unwrap(), PI / 3.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("nan").is_err());
        assert!(parse_angle("abc").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0,0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("-0.1:0.1:3").unwrap(), vec![-0.1, 0.0, 0.1]);
        assert_eq!(parse_grid("0.3:0.9:1").unwrap(), vec![0.3]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn unitaries() {
        assert_eq!(parse_unitary("pauli:x").unwrap().data(), paulis::x().data());
        assert_eq!(parse_unitary("wh:3,1,0").unwrap().rows(), 3);
        assert_eq!(parse_unitary("diag:0,pi/3").unwrap().rows(), 2);
        assert!(parse_unitary("pauli:q").is_err());
        assert!(parse_unitary("wh:1,0,0").is_err());
        assert!(parse_unitary("rot:1").is_err());
        assert!(parse_unitary("nope").is_err());
    }

    #[test]
    fn matrix_json() {
        let m = parse_matrix_json("[[[0,0],[1,0]],[[1,0],[0,0]]]").unwrap();
        assert_eq!(m.data(), paulis::x().data());
        assert!(parse_matrix_json("[[1,2]]").is_err());
        assert!(parse_matrix_json("[[[0,0],[1,0]],[[1,0]]]").is_err());
    }

    #[test]
    fn schmidt_specs() {
        assert_eq!(parse_schmidt("max", 3).unwrap(), vec![1.0; 3]);
        assert_eq!(parse_schmidt("product", 2).unwrap(), vec![1.0, 0.0]);
        assert_eq!(parse_schmidt("0.7,0.3", 3).unwrap(), vec![0.7, 0.3, 0.0]);
        assert!(parse_schmidt("1,1,1", 2).is_err());
        assert!(parse_schmidt("a", 2).is_err());
    }
}
