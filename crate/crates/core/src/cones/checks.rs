//! Sampled verification of the structural properties of minimal cones.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use super::{ConeHandle, ContainsOptions, EdgeCone, Verdict};
use crate::error::{Error, Result};
use crate::rng::{self, Rng};
use crate::symspace::{eigh, min_eig, SymMatrix, SymSubspace};

#[derive(Debug, Clone)]
pub struct Violation {
    pub check: &'static str,
    pub detail: String,
    pub matrix: SymMatrix,
}

/// Counts for one sampled check.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckCount {
    pub checked: usize,
    /// Samples excluded because a margin fell in the dead band.
    pub skipped: usize,
    pub failed: usize,
}

#[derive(Debug, Clone)]
pub struct SelfDualityReport {
    pub samples: usize,
    /// Smallest `λ_min(π_S(P_e))` seen.
    pub worst: f64,
    pub self_dual: bool,
    /// A unit vector `e` with `π_S(P_e)` not PSD, when refuted.
    pub counterexample: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct MinimalityReport {
    pub reduced_constraint: CheckCount,
    pub interior_decomposition: CheckCount,
    pub polar: CheckCount,
    pub polar_interior: CheckCount,
    pub self_duality: SelfDualityReport,
    pub violations: Vec<Violation>,
}

impl MinimalityReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn edge_cone(cone: &ConeHandle) -> Result<&EdgeCone> {
    cone.as_edge().ok_or_else(|| {
        Error::Unsupported(format!(
            "minimality checks need an edge cone, got {}",
            cone.kind_name()
        ))
    })
}

/// Random test matrix `G + s·Id` whose verdicts are mixed between inside and outside.
fn test_matrix(rng: &mut Rng, n: usize) -> SymMatrix {
    let g = rng::gaussian_sym(rng, n);
    let s = (2.0 * rng::uniform(rng) - 1.0) * 2.0 * crate::math::sqrt(n as f64);
    &g + &SymMatrix::identity(n).scaled(s)
}

fn random_edge_element(rng: &mut Rng, e: &SymSubspace, scale: f64) -> SymMatrix {
    let c: Vec<f64> = rng::gaussian_vec(rng, e.dim())
        .into_iter()
        .map(|x| x * scale)
        .collect();
    e.combine(&c)
}

/// A member `e + P` of `E + 𝒫`; `P` has random rank, so boundary members occur.
pub fn random_member(rng: &mut Rng, e: &SymSubspace, scale: f64) -> SymMatrix {
    let n = e.n();
    let rank = 1 + (rng::uniform(rng) * n as f64) as usize % n;
    let p = rng::random_psd(rng, n, rank).scaled(1.0 / n as f64);
    &random_edge_element(rng, e, scale) + &p
}

/// Random point of `S ∩ 𝒫`: a random element of `S` lifted by the positive
/// definite span witness until it is PSD, plus a random extra lift.
fn random_polar_point(rng: &mut Rng, cone: &EdgeCone, extra: f64) -> Result<SymMatrix> {
    let s = cone.span();
    let b = s.project(&rng::gaussian_sym(rng, s.n()));
    let w = cone.span_witness();
    let wmin = min_eig(w)?.0;
    let lmin = min_eig(&b)?.0;
    let t = (-lmin).max(0.0) / wmin + extra;
    Ok(&b + &w.scaled(t))
}

/// Bipolar test for membership in the polar cone: the smallest pairing
/// `⟨A, B⟩/‖B‖` over sampled members `B`, including edge directions and
/// rank-one members along the eigenvectors of `A`.
fn polar_pairing(rng: &mut Rng, cone: &EdgeCone, a: &SymMatrix, budget: usize) -> Result<f64> {
    let e = cone.edge();
    let mut worst = f64::INFINITY;
    let mut consider = |b: &SymMatrix| {
        let nb = b.norm();
        if nb > 0.0 {
            worst = worst.min(a.dot(b) / nb);
        }
    };
    for b in e.basis() {
        consider(b);
        consider(&-b);
    }
    let s = eigh(a)?;
    for k in 0..a.n() {
        consider(&SymMatrix::outer(&s.vector(k)));
    }
    for _ in 0..budget {
        consider(&random_member(rng, e, 1.0));
    }
    Ok(worst)
}

/// Decides polar membership by the bipolar test, doubling the budget until
/// two consecutive decisions agree.
fn polar_decision(
    rng: &mut Rng,
    cone: &EdgeCone,
    a: &SymMatrix,
    budget: usize,
    tol: f64,
) -> Result<(bool, f64)> {
    let mut b = budget.max(8);
    let mut prev = polar_pairing(rng, cone, a, b)?;
    for _ in 0..6 {
        b *= 2;
        let next = polar_pairing(rng, cone, a, b)?.min(prev);
        if (prev >= -tol) == (next >= -tol) {
            return Ok((next >= -tol, next));
        }
        prev = next;
    }
    Ok((prev >= -tol, prev))
}

/// Self-duality: the reduced constraint set `π_S(F) = π_S(𝒫)` equals the polar
/// cone `S ∩ 𝒫` iff `π_S(P_e) ⪰ 0` for every unit `e`.
pub fn polar_self_dual(span: &SymSubspace, samples: usize, seed: u64) -> Result<SelfDualityReport> {
    let n = span.n();
    let mut r = rng::seeded(seed);
    let tol = 1e-9;
    let mut worst = f64::INFINITY;
    let mut counterexample = None;
    let try_vec = |e: Vec<f64>, worst: &mut f64, cx: &mut Option<Vec<f64>>| -> Result<()> {
        let l = min_eig(&span.project(&SymMatrix::outer(&e)))?.0;
        if l < *worst {
            *worst = l;
            if l < -tol {
                *cx = Some(e);
            }
        }
        Ok(())
    };
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        try_vec(e, &mut worst, &mut counterexample)?;
    }
    for _ in 0..samples {
        try_vec(rng::unit_vec(&mut r, n), &mut worst, &mut counterexample)?;
    }
    Ok(SelfDualityReport {
        samples: samples + n,
        worst,
        self_dual: worst >= -tol,
        counterexample,
    })
}

/// Sampled verification of the minimality properties of `E + 𝒫`:
/// (i) membership depends only on the reduced hessian; (ii) interior points
/// decompose as `e + P` with `P ≻ 0` and exterior points carry a polar
/// certificate; (iii) the polar cone is `S ∩ 𝒫`; (iv) relative-interior polar
/// points are positive definite. Self-duality is reported alongside.
pub fn check_minimality(cone: &ConeHandle, samples: usize, seed: u64) -> Result<MinimalityReport> {
    let ec = edge_cone(cone)?;
    let n = cone.n();
    let e = ec.edge();
    let s = ec.span();
    let mut r = rng::seeded(seed);
    let mut violations = Vec::new();
    let vo = ContainsOptions {
        verdict_only: true,
        ..Default::default()
    };

    let mut reduced = CheckCount::default();
    let mut decomposition = CheckCount::default();
    for _ in 0..samples {
        let a = test_matrix(&mut r, n);
        let v1 = cone.contains_with(&a, &vo)?;
        let shifted = &s.project(&a) + &random_edge_element(&mut r, e, 1.0 + a.norm());
        let v2 = cone.contains_with(&shifted, &vo)?;
        if v1.verdict == Verdict::Boundary || v2.verdict == Verdict::Boundary {
            reduced.skipped += 1;
        } else {
            reduced.checked += 1;
            if v1.verdict != v2.verdict {
                reduced.failed += 1;
                violations.push(Violation {
                    check: "reduced-constraint",
                    detail: format!(
                        "verdicts {} vs {} after edge shift",
                        v1.verdict.name(),
                        v2.verdict.name()
                    ),
                    matrix: a.clone(),
                });
            }
        }

        let v = cone.contains(&a, None)?;
        match v.verdict {
            Verdict::Boundary => decomposition.skipped += 1,
            Verdict::Interior => {
                decomposition.checked += 1;
                let ok = match &v.witness {
                    Some(super::Witness::EdgeTranslate(t)) => {
                        e.residual(t) <= 1e-9 * (1.0 + t.norm()) && min_eig(&(&a - t))?.0 > 0.0
                    }
                    _ => false,
                };
                if !ok {
                    decomposition.failed += 1;
                    violations.push(Violation {
                        check: "interior-decomposition",
                        detail: format!("no A = e + P with P ≻ 0 (margin {:.3e})", v.margin),
                        matrix: a.clone(),
                    });
                }
            }
            Verdict::Outside => {
                decomposition.checked += 1;
                let ok = match &v.witness {
                    Some(super::Witness::Polar(z)) => {
                        e.project(z).norm() <= 1e-9 && min_eig(z)?.0 >= -1e-12 && a.dot(z) < 0.0
                    }
                    _ => false,
                };
                if !ok {
                    decomposition.failed += 1;
                    violations.push(Violation {
                        check: "exterior-certificate",
                        detail: format!(
                            "outside verdict without polar certificate (margin {:.3e})",
                            v.margin
                        ),
                        matrix: a.clone(),
                    });
                }
            }
        }
    }

    let mut polar = CheckCount::default();
    let mut polar_interior = CheckCount::default();
    let budget = 64;
    for k in 0..samples {
        let tol = 1e-7;
        // alternate: points of S ∩ 𝒫, points of S outside 𝒫, points off S
        let (a, expected) = match k % 3 {
            0 => {
                let extra = 0.05 * rng::uniform(&mut r);
                (random_polar_point(&mut r, ec, extra)?, true)
            }
            1 => {
                let b = s.project(&rng::gaussian_sym(&mut r, n));
                let lmin = min_eig(&b)?.0;
                if lmin > -1e-3 {
                    polar.skipped += 1;
                    continue;
                }
                (b, false)
            }
            _ => {
                if e.dim() == 0 {
                    polar.skipped += 1;
                    continue;
                }
                let p = random_polar_point(&mut r, ec, 0.1)?;
                (&p + &random_edge_element(&mut r, e, 0.5), false)
            }
        };
        let an = a.scaled(1.0 / a.norm());
        let (member, pairing) = polar_decision(&mut r, ec, &an, budget, tol)?;
        if pairing.abs() <= tol && !expected {
            polar.skipped += 1;
            continue;
        }
        polar.checked += 1;
        if member != expected {
            polar.failed += 1;
            violations.push(Violation {
                check: "polar",
                detail: format!("bipolar decision {member} but S ∩ 𝒫 membership {expected} (pairing {pairing:.3e})"),
                matrix: a.clone(),
            });
        }
    }

    // Averages of boundary points of S ∩ 𝒫 lie in its relative interior
    // unless they share a kernel vector, which random points do not.
    for _ in 0..samples {
        let mut a = SymMatrix::zeros(n);
        for _ in 0..3 {
            let p = random_polar_point(&mut r, ec, 0.0)?;
            if p.norm() > 1e-12 {
                a += &p.scaled(1.0 / p.norm());
            }
        }
        if a.norm() <= 1e-12 {
            // S ∩ 𝒫 is a ray here: its boundary is the origin
            polar_interior.skipped += 1;
            continue;
        }
        polar_interior.checked += 1;
        let lmin = min_eig(&a)?.0;
        if lmin <= 1e-12 * a.norm() {
            polar_interior.failed += 1;
            violations.push(Violation {
                check: "polar-interior",
                detail: format!(
                    "relative-interior polar point is not positive definite (λ_min {lmin:.3e})"
                ),
                matrix: a,
            });
        }
    }

    let self_duality = polar_self_dual(s, samples, seed ^ 0x5e1f)?;
    Ok(MinimalityReport {
        reduced_constraint: reduced,
        interior_decomposition: decomposition,
        polar,
        polar_interior,
        self_duality,
        violations,
    })
}

#[derive(Debug, Clone)]
pub struct DualInclusionReport {
    pub samples: usize,
    pub violations: Vec<Violation>,
}

/// Every member of a minimal cone lies in its dual cone.
pub fn check_dual_inclusion(
    cone: &ConeHandle,
    samples: usize,
    seed: u64,
) -> Result<DualInclusionReport> {
    let e = cone.edge_of()?;
    let mut r = rng::seeded(seed);
    let mut violations = Vec::new();
    let vo = ContainsOptions {
        verdict_only: true,
        ..Default::default()
    };
    for _ in 0..samples {
        let b = random_member(&mut r, &e, 1.0);
        let v = cone.dual_contains_with(&b, &vo)?;
        if v.verdict == Verdict::Outside {
            violations.push(Violation {
                check: "dual-inclusion",
                detail: format!(
                    "member outside the dual cone (dual margin {:.3e})",
                    v.margin
                ),
                matrix: b,
            });
        }
    }
    Ok(DualInclusionReport {
        samples,
        violations,
    })
}

#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub samples: usize,
    pub compared: usize,
    pub agreed: usize,
    /// `(A, margin of first oracle, margin of second)` for each disagreement.
    pub disagreements: Vec<(SymMatrix, f64, f64)>,
}

impl CrossValidation {
    pub fn agreement(&self) -> f64 {
        if self.compared == 0 {
            1.0
        } else {
            self.agreed as f64 / self.compared as f64
        }
    }
}

/// Compares membership under two oracles that should describe the same cone,
/// on random matrices whose margins exceed `threshold` under both.
pub fn cross_validate_equality(
    first: &ConeHandle,
    second: &ConeHandle,
    samples: usize,
    threshold: f64,
    seed: u64,
) -> Result<CrossValidation> {
    let n = first.n();
    let mut r = rng::seeded(seed);
    let (mut compared, mut agreed) = (0, 0);
    let mut disagreements = Vec::new();
    for _ in 0..samples {
        let a = test_matrix(&mut r, n);
        let v1 = first.contains(&a, Some(threshold))?;
        let v2 = second.contains(&a, Some(threshold))?;
        if v1.verdict == Verdict::Boundary || v2.verdict == Verdict::Boundary {
            continue;
        }
        compared += 1;
        if v1.verdict == v2.verdict {
            agreed += 1;
        } else {
            disagreements.push((a, v1.margin, v2.margin));
        }
    }
    Ok(CrossValidation {
        samples,
        compared,
        agreed,
        disagreements,
    })
}

#[derive(Debug, Clone)]
pub struct InclusionReport {
    pub members_tested: usize,
    /// Members of the edge cone rejected by some geometric oracle.
    pub failures: Vec<Violation>,
    pub reverse_tested: usize,
    /// Matrices accepted by all geometric oracles but outside the edge cone.
    pub reverse_candidates: Vec<SymMatrix>,
}

/// Inclusion of an edge cone in the intersection of geometric cones; the
/// reverse direction is searched for counterexamples without a verdict.
pub fn cross_validate_inclusion(
    cone: &ConeHandle,
    geometric: &[ConeHandle],
    samples: usize,
    seed: u64,
) -> Result<InclusionReport> {
    let ec = edge_cone(cone)?;
    let n = cone.n();
    let mut r = rng::seeded(seed);
    let mut failures = Vec::new();
    let mut reverse_candidates = Vec::new();
    let (mut members_tested, mut reverse_tested) = (0, 0);
    for _ in 0..samples {
        let b = random_member(&mut r, ec.edge(), 1.0);
        members_tested += 1;
        for g in geometric {
            let v = g.contains(&b, None)?;
            if v.verdict == Verdict::Outside {
                failures.push(Violation {
                    check: "inclusion",
                    detail: format!(
                        "member rejected by geometric oracle (margin {:.3e})",
                        v.margin
                    ),
                    matrix: b.clone(),
                });
            }
        }
        let a = test_matrix(&mut r, n);
        let mut in_all = true;
        for g in geometric {
            if g.contains(&a, None)?.verdict != Verdict::Interior {
                in_all = false;
                break;
            }
        }
        if in_all {
            reverse_tested += 1;
            if cone.contains(&a, None)?.verdict == Verdict::Outside {
                reverse_candidates.push(a);
            }
        }
    }
    Ok(InclusionReport {
        members_tested,
        failures,
        reverse_tested,
        reverse_candidates,
    })
}
