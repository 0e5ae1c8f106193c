//! File formats: matrix text files, grid CSV files and PPM heat maps.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use subeq_core::dirichlet::{GridDomain, GridField, NodeKind, Shape};
use subeq_core::SymMatrix;

use crate::error::{usage, CliError};

/// Asymmetry above which [`read_matrix`] callers should warn.
pub const ASYMMETRY_WARN: f64 = 1e-8;

/// Reads `n` followed by `n` rows of `n` numbers and symmetrizes. Returns the
/// matrix and the largest `|a_ij − a_ji|`.
pub fn parse_matrix(text: &str) -> Result<(SymMatrix, f64), CliError> {
    let mut tokens = text.split_whitespace();
    let n: usize = tokens
        .next()
        .ok_or_else(|| usage("empty matrix file"))?
        .parse()
        .map_err(|_| usage("first token of a matrix file must be the size n"))?;
    let vals: Vec<f64> = tokens
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| usage(format!("bad matrix entry `{t}`")))
        })
        .collect::<Result<_, _>>()?;
    if vals.len() != n * n {
        return Err(usage(format!(
            "expected {} matrix entries, found {}",
            n * n,
            vals.len()
        )));
    }
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(usage("matrix entries must be finite"));
    }
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            asym = asym.max((vals[i * n + j] - vals[j * n + i]).abs());
        }
    }
    let m = SymMatrix::from_fn(n, |i, j| 0.5 * (vals[i * n + j] + vals[j * n + i]));
    Ok((m, asym))
}

pub fn read_matrix(path: &Path) -> Result<(SymMatrix, f64), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text)
}

pub fn format_matrix(m: &SymMatrix) -> String {
    let mut s = format!("{}\n", m.n());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(s, "{}", cells.join(" "));
    }
    s
}

fn domain_line(d: &GridDomain) -> String {
    match d.shape() {
        Shape::Box { lo, hi } => format!(
            "# domain box n={} lo={lo} hi={hi} cells={}",
            d.n(),
            d.dims()[0] - 1
        ),
        Shape::Ball { center, radius } => {
            let c: Vec<String> = center.iter().map(|x| x.to_string()).collect();
            format!(
                "# domain ball n={} radius={radius} h={} center={}",
                d.n(),
                d.h(),
                c.join(";")
            )
        }
    }
}

fn parse_domain_line(line: &str) -> Result<GridDomain, CliError> {
    let mut words = line.trim_start_matches('#').split_whitespace();
    if words.next() != Some("domain") {
        return Err(usage("grid file lacks a `# domain` line"));
    }
    let shape = words.next().unwrap_or_default().to_string();
    let mut kv = std::collections::HashMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| usage(format!("bad domain field `{w}`")))?;
        kv.insert(k, v);
    }
    let get = |k: &str| {
        kv.get(k)
            .copied()
            .ok_or_else(|| usage(format!("domain line lacks `{k}`")))
    };
    let num = |k: &str| -> Result<f64, CliError> {
        get(k)?
            .parse()
            .map_err(|_| usage(format!("bad `{k}` in domain line")))
    };
    let n = num("n")? as usize;
    let d = match shape.as_str() {
        "box" => GridDomain::cube(n, num("lo")?, num("hi")?, num("cells")? as usize)?,
        "ball" => {
            let center: Vec<f64> = get("center")?
                .split(';')
                .map(|t| t.parse().map_err(|_| usage("bad center in domain line")))
                .collect::<Result<_, _>>()?;
            GridDomain::ball(&center, num("radius")?, num("h")?)?
        }
        other => return Err(usage(format!("unknown domain shape `{other}`"))),
    };
    if d.n() != n {
        return Err(usage("domain dimension disagrees with its center"));
    }
    Ok(d)
}

fn kind_name(k: NodeKind) -> &'static str {
    match k {
        NodeKind::Interior => "interior",
        NodeKind::Boundary => "boundary",
        NodeKind::Exterior => "exterior",
    }
}

/// CSV with `#` header lines (the caller's provenance lines, then the
/// domain), a column header, and one row per node: coordinates, value, kind.
pub fn write_grid(path: &Path, field: &GridField, header: &[String]) -> Result<(), CliError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    for line in header {
        writeln!(file, "# {line}")?;
    }
    let d = field.domain();
    writeln!(file, "{}", domain_line(d))?;
    let mut w = csv::Writer::from_writer(file);
    let mut head: Vec<String> = (0..d.n()).map(|i| format!("x{i}")).collect();
    head.push("value".into());
    head.push("kind".into());
    w.write_record(&head).map_err(csv_err)?;
    for idx in 0..d.len() {
        let kind = d.kind(idx);
        if kind == NodeKind::Exterior {
            continue;
        }
        let mut row: Vec<String> = d.coords(idx).iter().map(|x| x.to_string()).collect();
        row.push(field.value(idx).to_string());
        row.push(kind_name(kind).into());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> CliError {
    usage(format!("grid file: {e}"))
}

/// Reads a grid written by [`write_grid`]; rows are matched to lattice nodes
/// by their coordinates.
pub fn read_grid(path: &Path) -> Result<GridField, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let line = text
        .lines()
        .find(|l| l.trim_start().starts_with("# domain"))
        .ok_or_else(|| usage("grid file lacks a `# domain` line"))?;
    let dom = Arc::new(parse_domain_line(line)?);
    let n = dom.n();
    let mut values = vec![0.0; dom.len()];
    let mut seen = vec![false; dom.len()];
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != n + 2 {
            return Err(usage(format!(
                "grid row has {} fields, expected {}",
                rec.len(),
                n + 2
            )));
        }
        let nums: Vec<f64> = rec
            .iter()
            .take(n + 1)
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| usage(format!("bad number `{t}` in grid file")))
            })
            .collect::<Result<_, _>>()?;
        let idx = dom
            .nearest(&nums[..n])
            .ok_or_else(|| usage("grid row outside the domain"))?;
        if kind_name(dom.kind(idx)) != &rec[n + 1] {
            return Err(usage(format!(
                "grid row kind `{}` disagrees with the domain",
                &rec[n + 1]
            )));
        }
        values[idx] = nums[n];
        seen[idx] = true;
    }
    if let Some(missing) = (0..dom.len()).find(|&i| dom.kind(i) != NodeKind::Exterior && !seen[i]) {
        return Err(usage(format!("grid file misses node {missing}")));
    }
    Ok(GridField::from_values(dom, values)?)
}

/// Binary PPM heat map of a 2-d field, blue (low) to red (high); nodes
/// outside the domain are black.
pub fn ppm_bytes(field: &GridField) -> Result<Vec<u8>, CliError> {
    let d = field.domain();
    if d.n() != 2 {
        return Err(usage("heat maps need a 2-d grid"));
    }
    let (rows, cols) = (d.dims()[0], d.dims()[1]);
    let live: Vec<f64> = (0..d.len())
        .filter(|&i| d.kind(i) != NodeKind::Exterior)
        .map(|i| field.value(i))
        .collect();
    let lo = live.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = live.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = format!("P6\n{cols} {rows}\n255\n").into_bytes();
    // first axis grows upwards in the image
    for r in (0..rows).rev() {
        for c in 0..cols {
            let idx = d.index_of(&[r, c]).expect("in lattice");
            if d.kind(idx) == NodeKind::Exterior {
                out.extend_from_slice(&[0, 0, 0]);
                continue;
            }
            let t = (field.value(idx) - lo) / span;
            let red = (255.0 * t).round() as u8;
            let blue = (255.0 * (1.0 - t)).round() as u8;
            let green = (255.0 * (1.0 - (2.0 * t - 1.0).abs())).round() as u8;
            out.extend_from_slice(&[red, green, blue]);
        }
    }
    Ok(out)
}

pub fn write_ppm(path: &Path, field: &GridField) -> Result<(), CliError> {
    std::fs::write(path, ppm_bytes(field)?)?;
    Ok(())
}
