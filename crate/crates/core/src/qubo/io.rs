//! Sparse coordinate text format:
//!
//! ```text
//! c lambda <λ> <regime>
//! p qubo 0 <n> <n_diag> <n_offdiag>
//! <i> <i> <Q_ii>
//! <i> <j> <Q_ij>
//! ```
//!
//! Indices are 0-based; every variable gets a diagonal line and couplings
//! are written with `i < j`. Other `c` lines are ignored on import.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{LambdaRegime, QuboModel};
use crate::error::{Error, Result};
use crate::util::round_sig;

const COEFF_DIGITS: usize = 12;

fn coeff(v: f64) -> String {
    // Adding 0.0 turns -0 into 0.
    format!("{}", round_sig(v, COEFF_DIGITS) + 0.0)
}

pub fn qubo_to_text(model: &QuboModel) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "c lambda {} {}",
        coeff(model.lambda_used()),
        model.lambda_regime()
    );
    let _ = writeln!(
        out,
        "p qubo 0 {} {} {}",
        model.n(),
        model.n(),
        model.quadratic().len()
    );
    for (i, q) in model.linear().iter().enumerate() {
        let _ = writeln!(out, "{i} {i} {}", coeff(*q));
    }
    for (&(i, j), q) in model.quadratic() {
        let _ = writeln!(out, "{i} {j} {}", coeff(*q));
    }
    out
}

struct Header {
    n: usize,
    n_diag: usize,
    n_offdiag: usize,
}

pub fn qubo_from_text(text: &str) -> Result<QuboModel> {
    let mut header: Option<Header> = None;
    let mut lambda = 0.0;
    let mut regime = LambdaRegime::Custom;
    let mut linear: Vec<Option<f64>> = Vec::new();
    let mut quadratic = BTreeMap::new();
    let (mut seen_diag, mut seen_off) = (0usize, 0usize);

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let at = || format!("line {line_no}");
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.as_slice() {
            [] => continue,
            ["c", "lambda", value, name] => {
                lambda = value.parse().map_err(|e| Error::parse(at(), e))?;
                regime = name.parse().map_err(|e| Error::parse(at(), e))?;
            }
            ["c", ..] => continue,
            ["p", "qubo", _topology, n, n_diag, n_offdiag] => {
                if header.is_some() {
                    return Err(Error::parse(at(), "second problem line"));
                }
                let num = |s: &str| s.parse::<usize>().map_err(|e| Error::parse(at(), e));
                let h = Header {
                    n: num(n)?,
                    n_diag: num(n_diag)?,
                    n_offdiag: num(n_offdiag)?,
                };
                linear = vec![None; h.n];
                header = Some(h);
            }
            ["p", ..] => return Err(Error::parse(at(), "expected `p qubo 0 <n> <n_diag> <n_offdiag>`")),
            [i, j, value] => {
                let Some(h) = header.as_ref() else {
                    return Err(Error::parse(at(), "coefficient before the problem line"));
                };
                let i: usize = i.parse().map_err(|e| Error::parse(at(), e))?;
                let j: usize = j.parse().map_err(|e| Error::parse(at(), e))?;
                let value: f64 = value.parse().map_err(|e| Error::parse(at(), e))?;
                if i >= h.n || j >= h.n {
                    return Err(Error::parse(
                        at(),
                        format!("index ({i}, {j}) out of range for n = {}", h.n),
                    ));
                }
                if !value.is_finite() {
                    return Err(Error::parse(at(), "non-finite coefficient"));
                }
                if i == j {
                    if linear[i].replace(value).is_some() {
                        return Err(Error::parse(at(), format!("duplicate diagonal entry {i}")));
                    }
                    seen_diag += 1;
                } else {
                    let key = (i.min(j), i.max(j));
                    if quadratic.insert(key, value).is_some() {
                        return Err(Error::parse(at(), format!("duplicate coupling {key:?}")));
                    }
                    seen_off += 1;
                }
            }
            _ => return Err(Error::parse(at(), format!("unrecognised line {raw:?}"))),
        }
    }

    let h = header.ok_or_else(|| Error::parse("end of file", "missing problem line"))?;
    if seen_diag != h.n_diag || seen_off != h.n_offdiag {
        return Err(Error::parse(
            "end of file",
            format!(
                "header declares {} diagonal / {} coupling lines, found {seen_diag} / {seen_off}",
                h.n_diag, h.n_offdiag
            ),
        ));
    }
    let linear = linear.into_iter().map(|q| q.unwrap_or(0.0)).collect();
    QuboModel::from_parts(linear, quadratic, lambda, regime)
}

pub fn export_qubo(model: &QuboModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, qubo_to_text(model)).map_err(|e| Error::io(path, e))
}

pub fn import_qubo(path: impl AsRef<Path>) -> Result<QuboModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    qubo_from_text(&text)
}
