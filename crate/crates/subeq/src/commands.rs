//! The subcommands. Each writes a provenance record first, then its own
//! records; failed checks are recorded and turn into exit code 1.

use std::sync::Arc;

use serde_json::json;
use subeq_core::classify::{classify_group, EntryReport, CONE_NAMES};
use subeq_core::cones::{
    check_dual_inclusion, check_minimality, is_basic_edge, random_member, support_of, ConeHandle,
    MinimalityReport,
};
use subeq_core::dirichlet::{
    envelope_report, perron_solve, BoundaryFn, GridDomain, GridField, PerronOptions,
    PerronSolution, Scheme,
};
use subeq_core::edgefuncs::violation_witness;
use subeq_core::structures::{GroupKind, GroupTag, Projectors};
use subeq_core::{rng, SymMatrix};

use crate::catalog::{self, builtin_description, cone_spec, ConeSpec};
use crate::config::ExperimentConfig;
use crate::error::{usage, CliError};
use crate::io;
use crate::output::{note, Sink};

type Res = Result<(), CliError>;

fn coords(cfg: &ExperimentConfig, spec: &ConeSpec) -> usize {
    cfg.n.unwrap_or_else(|| spec.default_coords())
}

fn matrix_json(m: &SymMatrix) -> serde_json::Value {
    json!(m.rows())
}

pub fn catalog(cfg: &ExperimentConfig, sink: &mut Sink) -> Res {
    let n = cfg.n;
    for name in CONE_NAMES {
        let spec = ConeSpec::Builtin(name.to_string());
        let k = n.unwrap_or_else(|| spec.default_coords());
        let cone = spec.build(k)?;
        let edge_dim = cone.edge_of()?.dim();
        note(format!(
            "{name:<8} N={:<2} dim E={edge_dim:<3} {}",
            cone.n(),
            builtin_description(name)
        ));
        sink.record(json!({
            "record": "cone", "name": name, "source": "builtin", "coords": k, "ambient": cone.n(),
            "edge_dim": edge_dim, "description": builtin_description(name),
        }))?;
    }
    if let Some(path) = catalog::catalog_path(cfg) {
        let file = catalog::load_catalog(&path)?;
        for c in file.cone {
            let spec = ConeSpec::Sum {
                label: c.name.clone(),
                group: catalog::parse_group(&c.group)?,
                components: catalog::parse_components(&c.components)?,
            };
            let k = n.unwrap_or_else(|| spec.default_coords());
            let cone = spec.build(k)?;
            let edge_dim = cone.edge_of()?.dim();
            note(format!(
                "{:<8} N={:<2} dim E={edge_dim:<3} {}",
                c.name,
                cone.n(),
                c.description
            ));
            sink.record(json!({
                "record": "cone", "name": c.name, "source": path.display().to_string(), "coords": k,
                "ambient": cone.n(), "edge_dim": edge_dim, "group": c.group, "components": c.components,
                "description": c.description,
            }))?;
        }
    }
    Ok(())
}

pub fn decompose(cfg: &ExperimentConfig, sink: &mut Sink) -> Res {
    let path = cfg
        .matrix
        .as_ref()
        .ok_or_else(|| usage("decompose needs --matrix FILE"))?;
    let kind: GroupKind = catalog::parse_group(cfg.group.as_deref().unwrap_or("on"))?;
    let (a, asym) = io::read_matrix(path)?;
    if asym > io::ASYMMETRY_WARN {
        note(format!(
            "warning: matrix asymmetric by {asym:.3e}; using its symmetric part"
        ));
    }
    let tag = GroupTag::new(kind, a.n()).map_err(|e| {
        usage(format!(
            "a {} matrix does not fit group {}: {e}",
            a.n(),
            kind.name()
        ))
    })?;
    if let Some(k) = cfg.n {
        if tag.coords() != k {
            return Err(usage(format!(
                "matrix size {} does not match --n {k} for group {}",
                a.n(),
                kind.name()
            )));
        }
    }
    let p = Projectors::new(tag);
    let mut total = SymMatrix::zeros(a.n());
    for &c in tag.components() {
        let part = p.project(c, &a)?;
        total += &part;
        note(format!("{:<8} norm {:.6e}", c.name(), part.norm()));
        sink.record(json!({"record": "component", "component": c.name(), "norm": part.norm(), "matrix": matrix_json(&part)}))?;
    }
    let residual = (&a - &total).norm();
    sink.record(json!({"record": "decomposition", "group": tag.to_string(), "asymmetry": asym, "residual": residual}))?;
    if residual > 1e-9 * (1.0 + a.norm()) {
        sink.failure(
            "decompose",
            format!("components do not sum to the input (residual {residual:.3e})"),
        )?;
    }
    Ok(())
}

fn minimality_records(rep: &MinimalityReport, sink: &mut Sink) -> Res {
    for (name, c) in [
        ("reduced_constraint", rep.reduced_constraint),
        ("interior_decomposition", rep.interior_decomposition),
        ("polar", rep.polar),
        ("polar_interior", rep.polar_interior),
    ] {
        note(format!(
            "minimality {name:<22} checked {:>5} skipped {:>4} failed {}",
            c.checked, c.skipped, c.failed
        ));
        sink.record(json!({"record": "minimality", "check": name, "checked": c.checked, "skipped": c.skipped, "failed": c.failed}))?;
    }
    for v in &rep.violations {
        sink.failure(v.check, format!("{} at {:?}", v.detail, v.matrix.rows()))?;
    }
    Ok(())
}

pub fn check_cone(cfg: &ExperimentConfig, sink: &mut Sink) -> Res {
    let spec = cone_spec(cfg)?;
    let k = coords(cfg, &spec);
    let cone = spec.build(k)?;
    let samples = cfg.samples.unwrap_or(200);
    let seed = cfg.seed();
    let n = cone.n();
    let edge = cone.edge_of()?;
    let span = cone.span_of()?;
    note(format!(
        "cone {} on R^{n}: dim E = {}, dim S = {}",
        spec.label(),
        edge.dim(),
        span.dim()
    ));

    let basic = is_basic_edge(&edge)?;
    sink.record(json!({
        "record": "edge", "dim": edge.dim(), "basic": basic.basic,
        "edge_side": basic.edge_side, "span_side": basic.span_side,
    }))?;
    if !basic.basic {
        sink.failure("edge", "edge is not basic")?;
    }
    let cross = edge.max_cross_inner(&span);
    sink.record(json!({"record": "span", "dim": span.dim(), "max_cross_inner": cross}))?;
    if edge.dim() + span.dim() != n * (n + 1) / 2 || cross > 1e-10 {
        sink.failure(
            "span",
            format!("span is not the orthogonal complement of the edge ({cross:.3e})"),
        )?;
    }

    // positivity: F + 𝒫 ⊂ F, and ±E ⊂ F
    let mut r = rng::seeded(rng::derive_seed(seed, 0));
    let (mut pos_fail, mut edge_fail) = (0, 0);
    for _ in 0..samples {
        let a = random_member(&mut r, &edge, 1.0);
        let rank = 1 + (rng::uniform(&mut r) * n as f64) as usize % n;
        let p = rng::random_psd(&mut r, n, rank);
        if !cone.contains(&(&a + &p), None)?.verdict.is_member() {
            pos_fail += 1;
        }
        let e = edge.combine(&rng::gaussian_vec(&mut r, edge.dim()));
        if !cone.contains(&e, None)?.verdict.is_member()
            || !cone.contains(&-&e, None)?.verdict.is_member()
        {
            edge_fail += 1;
        }
    }
    note(format!(
        "positivity: {pos_fail}/{samples} failures; edge lines: {edge_fail}/{samples} failures"
    ));
    sink.record(json!({"record": "positivity", "samples": samples, "failed": pos_fail, "edge_line_failed": edge_fail}))?;
    if pos_fail + edge_fail > 0 {
        sink.failure(
            "positivity",
            format!("{pos_fail} positivity and {edge_fail} edge-line failures"),
        )?;
    }

    let support = support_of(&cone)?;
    let (agree, compared) =
        support.check_extension(&cone, samples.min(200), rng::derive_seed(seed, 1))?;
    note(format!(
        "support: dim W = {}, extension agrees on {agree}/{compared}",
        support.support.dim()
    ));
    sink.record(json!({"record": "support", "dim": support.support.dim(), "kernel_dim": support.kernel.dim(), "agree": agree, "compared": compared}))?;
    if agree != compared {
        sink.failure(
            "support",
            format!(
                "trivial extension disagrees on {} samples",
                compared - agree
            ),
        )?;
    }

    let rep = check_minimality(&cone, samples, rng::derive_seed(seed, 2))?;
    minimality_records(&rep, sink)?;
    let sd = &rep.self_duality;
    note(format!(
        "self-duality: {} (worst {:.3e} over {} samples)",
        if sd.self_dual {
            "self dual"
        } else {
            "not self dual"
        },
        sd.worst,
        sd.samples
    ));
    sink.record(json!({
        "record": "self_duality", "self_dual": sd.self_dual, "worst": sd.worst, "samples": sd.samples,
        "counterexample": sd.counterexample,
    }))?;

    let dual = check_dual_inclusion(&cone, samples, rng::derive_seed(seed, 3))?;
    note(format!(
        "dual inclusion: {} violations in {}",
        dual.violations.len(),
        dual.samples
    ));
    sink.record(json!({"record": "dual_inclusion", "samples": dual.samples, "violations": dual.violations.len()}))?;
    for v in &dual.violations {
        sink.failure(
            "dual_inclusion",
            format!("{} at {:?}", v.detail, v.matrix.rows()),
        )?;
    }
    Ok(())
}

fn entry_json(e: &EntryReport) -> serde_json::Value {
    let inv = |r: &subeq_core::classify::InvarianceResult| json!({"group": r.group.label(), "samples": r.samples, "max_residual": r.max_residual, "invariant": r.invariant(), "above": r.above});
    json!({
        "record": "classification", "group": e.group.to_string(), "components": e.label, "dim": e.dim,
        "identification": e.identification, "basic": e.basic, "trace_defect": e.trace_defect,
        "degenerate": e.degenerate, "own": inv(&e.own), "larger": e.larger.as_ref().map(inv),
        "not_sp_sp1": e.not_sp_sp1.as_ref().map(inv),
    })
}

fn default_classify_coords(kind: GroupKind) -> usize {
    match kind {
        GroupKind::On | GroupKind::Un => 3,
        GroupKind::SpnSp1 | GroupKind::SpnS1 => 2,
    }
}

pub fn classify(cfg: &ExperimentConfig, sink: &mut Sink) -> Res {
    let kinds: Vec<GroupKind> = match &cfg.group {
        Some(g) => vec![catalog::parse_group(g)?],
        None => GroupKind::ALL.to_vec(),
    };
    let samples = cfg.samples.unwrap_or(100);
    for (i, kind) in kinds.into_iter().enumerate() {
        let tag =
            GroupTag::with_coords(kind, cfg.n.unwrap_or_else(|| default_classify_coords(kind)))?;
        let entries = classify_group(tag, samples, rng::derive_seed(cfg.seed(), i as u64))?;
        note(format!("{tag}: {} entries", entries.len()));
        note(format!(
            "  {:<20} {:>4}  {:<26} {:<6} {:<28} {}",
            "components", "dim", "identification", "own", "larger", "not Sp(n)Sp(1)"
        ));
        for e in &entries {
            let larger = e
                .larger
                .as_ref()
                .map(|l| {
                    format!(
                        "{} {}",
                        l.group.label(),
                        if l.invariant() { "yes" } else { "NO" }
                    )
                })
                .unwrap_or_else(|| "-".into());
            let excl = e
                .not_sp_sp1
                .as_ref()
                .map(|x| format!("{}/{}", x.above, x.samples))
                .unwrap_or_else(|| "-".into());
            note(format!(
                "  {:<20} {:>4}  {:<26} {:<6} {:<28} {}{}",
                e.label,
                e.dim,
                e.identification,
                if e.own.invariant() { "yes" } else { "NO" },
                larger,
                excl,
                if e.degenerate { "  (degenerate)" } else { "" }
            ));
            sink.record(entry_json(e))?;
            for f in e.failures() {
                sink.failure("classify", f)?;
            }
        }
        if kind == GroupKind::SpnS1 {
            note("  sampled evidence only: other Sp(n)-invariant edges with exact group Sp(n) are not excluded");
        }
    }
    Ok(())
}

/// Boundary data from the built-in catalog.
pub fn boundary_fn(name: &str, params: Option<&[f64]>, n: usize) -> Result<BoundaryFn, CliError> {
    let want = |k: usize| -> Result<Option<&[f64]>, CliError> {
        match params {
            Some(p) if p.len() != k => Err(usage(format!(
                "--phi {name} takes {k} parameters, got {}",
                p.len()
            ))),
            other => Ok(other),
        }
    };
    let f =
        match name {
            "x2-y2" | "saddle" => {
                want(0)?;
                BoundaryFn::saddle(n)?
            }
            "affine" => match want(n + 1)? {
                Some(p) => BoundaryFn::Affine {
                    c: p[0],
                    b: p[1..].to_vec(),
                },
                None => BoundaryFn::Affine {
                    c: 0.5,
                    b: (0..n)
                        .map(|i| 1.0 / (1 << i) as f64 * if i % 2 == 0 { 1.0 } else { -1.0 })
                        .collect(),
                },
            },
            "quadratic" => {
                let diag: Vec<f64> = match want(n)? {
                    Some(p) => p.to_vec(),
                    None => vec![1.0; n],
                };
                BoundaryFn::Quadratic {
                    c: 0.0,
                    b: vec![0.0; n],
                    a: SymMatrix::diag(&diag),
                }
            }
            "max-affine" => match params {
                Some(p) if p.is_empty() || p.len() % (n + 1) != 0 => {
                    return Err(usage(format!(
                        "--phi max-affine takes groups of {} parameters",
                        n + 1
                    )))
                }
                Some(p) => BoundaryFn::MaxAffine(
                    p.chunks(n + 1).map(|c| (c[0], c[1..].to_vec())).collect(),
                ),
                None => {
                    let mut a = vec![0.0; n];
                    a[0] = 1.0;
                    let mut b = vec![0.5; n];
                    b[0] = -1.0;
                    BoundaryFn::MaxAffine(vec![(0.0, a), (0.1, b)])
                }
            },
            "trig" => match params {
                Some(p) if p.len() != n + 2 => {
                    return Err(usage(format!("--phi trig takes {} parameters", n + 2)))
                }
                Some(p) => BoundaryFn::Trig {
                    amplitude: p[0],
                    phase: p[1],
                    k: p[2..].to_vec(),
                },
                None => BoundaryFn::Trig {
                    amplitude: 1.0,
                    phase: 0.3,
                    k: (0..n).map(|i| 1.3 - 0.4 * i as f64).collect(),
                },
            },
            other => return Err(usage(format!(
                "unknown boundary function `{other}` (affine, quadratic, x2-y2, max-affine, trig)"
            ))),
        };
    Ok(f)
}

pub fn domain(cfg: &ExperimentConfig, n: usize) -> Result<GridDomain, CliError> {
    let h = cfg.h.unwrap_or(0.1);
    Ok(match cfg.domain.as_deref().unwrap_or("box") {
        "box" => GridDomain::cube(n, -1.0, 1.0, ((2.0 / h).round() as usize).max(2))?,
        "disk" | "ball" => GridDomain::ball(&vec![0.0; n], 1.0, h)?,
        other => return Err(usage(format!("unknown domain `{other}` (box, disk)"))),
    })
}

fn perron_options(cfg: &ExperimentConfig) -> Result<PerronOptions, CliError> {
    let mut opts = PerronOptions {
        tol: cfg.tol.unwrap_or(1e-9),
        ..Default::default()
    };
    if let Some(m) = cfg.max_sweeps {
        opts.max_sweeps = m;
    }
    opts.scheme = match cfg.scheme.as_deref().unwrap_or("directional") {
        "directional" => Scheme::Directional,
        "cross" => Scheme::Cross,
        other => {
            return Err(usage(format!(
                "unknown scheme `{other}` (directional, cross)"
            )))
        }
    };
    Ok(opts)
}

struct Problem {
    spec: ConeSpec,
    cone: ConeHandle,
    data: BoundaryFn,
    phi: GridField,
}

fn problem(cfg: &ExperimentConfig) -> Result<Problem, CliError> {
    let spec = cone_spec(cfg)?;
    let cone = spec.build(coords(cfg, &spec))?;
    let n = cone.n();
    let dom = Arc::new(domain(cfg, n)?);
    let data = boundary_fn(
        cfg.phi.as_deref().unwrap_or("affine"),
        cfg.phi_params.as_deref(),
        n,
    )?;
    let phi = GridField::with_boundary(dom, &data, 0.0)?;
    Ok(Problem {
        spec,
        cone,
        data,
        phi,
    })
}

fn history_records(sol: &PerronSolution, sink: &mut Sink) -> Res {
    // sweeps 1, 2, 4, 8, ... and the last one
    for &(k, upd) in &sol.history {
        if k.is_power_of_two() || k == sol.sweeps {
            note(format!("sweep {k:>7}  max update {upd:.3e}"));
            sink.record(json!({"record": "sweep", "sweep": k, "max_update": upd}))?;
        }
    }
    Ok(())
}

/// Sup error against the data itself when the data is an edge function
/// (then it is the exact solution).
fn exact_error(p: &Problem, field: &GridField) -> Result<Option<f64>, CliError> {
    let edge = p.cone.edge_of()?;
    let exact = match &p.data {
        BoundaryFn::Affine { .. } => true,
        BoundaryFn::Quadratic { a, .. } => edge.residual(a) <= 1e-9 * (1.0 + a.norm()),
        _ => false,
    };
    if !exact {
        return Ok(None);
    }
    let dom = field.domain();
    Ok(Some(
        dom.interior()
            .iter()
            .map(|&i| (field.value(i) - p.data.eval(&dom.coords(i))).abs())
            .fold(0.0, f64::max),
    ))
}

pub fn solve(cfg: &ExperimentConfig, sink: &mut Sink, header: &[String]) -> Res {
    let p = problem(cfg)?;
    let opts = perron_options(cfg)?;
    let dom = p.phi.domain().clone();
    note(format!(
        "solving {} on {} nodes ({} interior), h = {}",
        p.spec.label(),
        dom.interior().len() + dom.boundary().len(),
        dom.interior().len(),
        dom.h()
    ));
    let sol = perron_solve(&p.cone, &p.phi, &opts)?;
    history_records(&sol, sink)?;
    let out = cfg.grid.clone().unwrap_or_else(|| "solution.csv".into());
    io::write_grid(&out, &sol.field, header)?;
    if let Some(ppm) = &cfg.ppm {
        io::write_ppm(ppm, &sol.field)?;
    }
    let err = exact_error(&p, &sol.field)?;
    match err {
        Some(e) => note(format!("sup error vs exact solution: {e:.3e}")),
        None => note("exact solution unknown for this data"),
    }
    sink.record(json!({
        "record": "solution", "cone": p.spec.label(), "sweeps": sol.sweeps, "converged": sol.converged,
        "interior": dom.interior().len(), "boundary": dom.boundary().len(), "h": dom.h(),
        "grid": out.display().to_string(), "sup_error": err,
    }))?;
    if !sol.converged {
        sink.failure("solve", format!("no convergence in {} sweeps", sol.sweeps))?;
    }
    Ok(())
}

pub fn envelope(cfg: &ExperimentConfig, sink: &mut Sink) -> Res {
    let p = problem(cfg)?;
    let opts = perron_options(cfg)?;
    let h = p.phi.domain().h();
    let nodes = cfg.nodes.unwrap_or(50);
    let rep = envelope_report(&p.cone, &p.phi, nodes, cfg.seed(), &opts)?;
    history_records(&rep.perron, sink)?;
    for s in &rep.samples {
        sink.record(json!({
            "record": "envelope", "node": s.node, "x": p.phi.domain().coords(s.node), "envelope": s.envelope,
            "perron": s.perron, "gap": s.gap(), "stable": s.stable,
        }))?;
    }
    let (gap, excess) = (rep.max_gap(), rep.max_excess());
    note(format!(
        "{} samples: max |H - U_E| = {gap:.3e}, max (U_E - H) = {excess:.3e}",
        rep.samples.len()
    ));
    sink.record(json!({"record": "envelope_summary", "samples": rep.samples.len(), "max_gap": gap, "max_excess": excess, "h": h}))?;
    if let Err(e) = rep.check_ordering(10.0 * opts.tol.max(1e-7)) {
        sink.failure("envelope_ordering", e.to_string())?;
    }
    if matches!(&p.spec, ConeSpec::Builtin(s) if s == "P" || s == "laplace") && gap > 10.0 * h {
        sink.failure(
            "envelope_gap",
            format!("gap {gap:.3e} exceeds 10h = {:.3e}", 10.0 * h),
        )?;
    }
    let unstable = rep.samples.iter().filter(|s| !s.stable).count();
    if unstable > 0 {
        note(format!(
            "warning: {unstable} envelope values changed when the coefficient bound doubled"
        ));
    }
    Ok(())
}

pub fn witness(cfg: &ExperimentConfig, sink: &mut Sink) -> Res {
    let path = cfg
        .grid
        .as_ref()
        .ok_or_else(|| usage("witness needs --grid FILE"))?;
    let u = io::read_grid(path)?;
    let spec = cone_spec(cfg)?;
    let dim = u.domain().n();
    let k = cfg.n.unwrap_or(dim / spec.divisor());
    let cone = spec.build(k)?;
    if cone.n() != dim {
        return Err(usage(format!(
            "cone acts on R^{} but the grid is {dim}-dimensional",
            cone.n()
        )));
    }
    let nodes: Vec<usize> = match cfg.node {
        Some(i) => {
            if i >= u.domain().len() || !u.domain().interior().contains(&i) {
                return Err(usage(format!("node {i} is not an interior node")));
            }
            vec![i]
        }
        None => u
            .domain()
            .interior()
            .iter()
            .copied()
            .filter(|&i| !u.domain().is_cut_node(i))
            .collect(),
    };
    let skipped = if cfg.node.is_some() {
        0
    } else {
        u.domain().interior().len() - nodes.len()
    };
    if skipped > 0 {
        note(format!(
            "skipping {skipped} nodes next to the sphere (cut stencils)"
        ));
    }
    let mut found = 0;
    for node in nodes {
        let w = match violation_witness(&u, &cone, node) {
            Ok(Some(w)) => w,
            Ok(None) => continue,
            Err(e) => {
                sink.failure("witness", format!("node {node}: {e}"))?;
                continue;
            }
        };
        found += 1;
        let check = w.confirm(0.0)?;
        sink.record(json!({
            "record": "witness", "node": node, "x0": w.center, "c": w.quadratic.c, "b": w.quadratic.b,
            "B": matrix_json(&w.quadratic.hess), "r": w.radius, "margin": w.margin,
            "confirmed": check.premise && !check.holds,
        }))?;
        if !(check.premise && !check.holds) {
            sink.failure(
                "witness",
                format!("witness at node {node} does not violate the sub test: {check:?}"),
            )?;
        }
    }
    note(format!("{found} witness(es) found"));
    sink.record(json!({"record": "witness_summary", "found": found, "skipped": skipped}))?;
    Ok(())
}

/// Cheap validation for `--dry-run`: names resolve, numbers are sane and
/// input files exist.
pub fn validate(command: &str, cfg: &ExperimentConfig) -> Res {
    cfg.check_numbers()?;
    match command {
        "catalog" => {
            if let Some(p) = catalog::catalog_path(cfg) {
                catalog::load_catalog(&p)?;
            }
        }
        "decompose" => {
            let p = cfg
                .matrix
                .as_ref()
                .ok_or_else(|| usage("decompose needs --matrix FILE"))?;
            catalog::parse_group(cfg.group.as_deref().unwrap_or("on"))?;
            io::read_matrix(p)?;
        }
        "check-cone" => {
            cone_spec(cfg)?;
        }
        "classify" => {
            if let Some(g) = &cfg.group {
                catalog::parse_group(g)?;
            }
        }
        "solve" | "envelope" => {
            let spec = cone_spec(cfg)?;
            let dim = coords(cfg, &spec) * spec.divisor();
            domain(cfg, dim)?;
            boundary_fn(
                cfg.phi.as_deref().unwrap_or("affine"),
                cfg.phi_params.as_deref(),
                dim,
            )?;
            perron_options(cfg)?;
        }
        "witness" => {
            cone_spec(cfg)?;
            let p = cfg
                .grid
                .as_ref()
                .ok_or_else(|| usage("witness needs --grid FILE"))?;
            if !p.exists() {
                return Err(usage(format!("grid file {} does not exist", p.display())));
            }
        }
        _ => {}
    }
    Ok(())
}
