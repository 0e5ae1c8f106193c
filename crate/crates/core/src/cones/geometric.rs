//! Geometric cones `𝒫(Gl) = {A : tr(A|_W) ≥ 0 for all W ∈ Gl}`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::{self, Rng};
use crate::structures::planes::FamilyStructures;
use crate::structures::PlaneFamilyTag;
use crate::symspace::{eigh, plane_projector, Square, StreamingQr, SymMatrix, SymSubspace};

/// Default number of sampled frames for geometric margins.
pub const DEFAULT_FRAME_BUDGET: usize = 2000;
/// Default number of local descents started from the best samples.
pub const DEFAULT_DESCENTS: usize = 50;
/// Default sample budget for recovering a geometric edge.
pub const DEFAULT_EDGE_BUDGET: usize = 4000;

#[derive(Debug, Clone)]
pub struct GeometricCone {
    family: FamilyStructures,
    seed: u64,
    frames: Vec<Vec<Vec<f64>>>,
    pub descents: usize,
    pub edge_budget: usize,
}

/// Normalized trace `tr(A|_W)/k` for an orthonormal frame.
pub fn restricted_trace(a: &SymMatrix, frame: &[Vec<f64>]) -> f64 {
    frame.iter().map(|w| a.quad(w)).sum::<f64>() / frame.len() as f64
}

impl GeometricCone {
    pub fn new(tag: PlaneFamilyTag, big_n: usize, frame_budget: usize, seed: u64) -> Result<Self> {
        let family = FamilyStructures::new(tag, big_n)?;
        let frames = if closed_form(tag) {
            Vec::new()
        } else {
            let mut r = rng::substream(seed, 1);
            (0..frame_budget.max(1))
                .map(|_| family.sample(&mut r))
                .collect()
        };
        Ok(Self {
            family,
            seed,
            frames,
            descents: DEFAULT_DESCENTS,
            edge_budget: DEFAULT_EDGE_BUDGET,
        })
    }

    pub fn tag(&self) -> PlaneFamilyTag {
        self.family.tag
    }

    pub fn n(&self) -> usize {
        self.family.big_n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn frame_budget(&self) -> usize {
        self.frames.len()
    }

    pub fn sample_frame(&self, rng: &mut Rng) -> Vec<Vec<f64>> {
        self.family.sample(rng)
    }

    /// `min_W tr(A|_W)/k` with a minimizing frame. Closed forms are used for
    /// Grassmannians and complex or quaternionic lines; other families are
    /// searched by sampling and local descent, which yields an upper bound.
    pub fn margin(&self, a: &SymMatrix) -> Result<(f64, Vec<Vec<f64>>)> {
        a.check_dim(self.n())?;
        let fam = &self.family;
        match fam.tag {
            PlaneFamilyTag::Grass(p) => {
                let s = eigh(a)?;
                let frame: Vec<Vec<f64>> = (0..p).map(|k| s.vector(k)).collect();
                Ok((s.eigenvalues[..p].iter().sum::<f64>() / p as f64, frame))
            }
            PlaneFamilyTag::CP | PlaneFamilyTag::QuatCP(_) => {
                let x = fam.x.as_ref().expect("structure");
                let m = (a + &x.congruence(a)).scaled(0.5);
                let s = eigh(&m)?;
                let v = s.vector(0);
                let xv = x.mul_vec(&v);
                Ok((s.min(), alloc::vec![v, xv]))
            }
            PlaneFamilyTag::HP => {
                let q = fam.ijk.as_ref().expect("structure");
                let mut m = a.clone();
                for x in q {
                    m += &x.congruence(a);
                }
                let s = eigh(&m.scaled(0.25))?;
                let v = s.vector(0);
                let frame = alloc::vec![
                    v.clone(),
                    q[0].mul_vec(&v),
                    q[1].mul_vec(&v),
                    q[2].mul_vec(&v)
                ];
                Ok((s.min(), frame))
            }
            _ => self.search(a),
        }
    }

    fn search(&self, a: &SymMatrix) -> Result<(f64, Vec<Vec<f64>>)> {
        let mut scored: Vec<(f64, usize)> = self
            .frames
            .iter()
            .enumerate()
            .map(|(k, f)| (restricted_trace(a, f), k))
            .collect();
        scored.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut best = (scored[0].0, self.frames[scored[0].1].clone());
        for &(_, k) in scored.iter().take(self.descents) {
            let (v, f) = self.descend(a, &self.frames[k])?;
            if v < best.0 {
                best = (v, f);
            }
        }
        Ok(best)
    }

    /// Projection of a skew matrix onto the Lie algebra of the group that
    /// moves planes within the family.
    fn lie_project(&self, w: &Square) -> Square {
        let fam = &self.family;
        match fam.tag {
            PlaneFamilyTag::LAG | PlaneFamilyTag::Lag(_) => {
                let x = fam.x.as_ref().expect("structure");
                w.sub(&x.mul(w).mul(x)).scaled(0.5)
            }
            PlaneFamilyTag::HLAG | PlaneFamilyTag::GlIJK => {
                let q = fam.ijk.as_ref().expect("structure");
                let mut out = w.clone();
                for x in q {
                    out = out.sub(&x.mul(w).mul(x));
                }
                out.scaled(0.25)
            }
            _ => w.clone(),
        }
    }

    /// Riemannian descent of `tr(A|_W)` along the group orbit, with Cayley
    /// retraction and backtracking.
    fn descend(&self, a: &SymMatrix, frame: &[Vec<f64>]) -> Result<(f64, Vec<Vec<f64>>)> {
        let n = self.n();
        let scale = 1.0 + a.norm();
        let mut f = frame.to_vec();
        let mut val = restricted_trace(a, &f);
        let asq = a.to_square();
        let mut step = 1.0 / scale;
        for _ in 0..60 {
            let mut p = SymMatrix::zeros(n);
            for w in &f {
                p.add_outer(1.0, w);
            }
            let ap = asq.mul(&p.to_square());
            let g = self.lie_project(&ap.skew_part());
            let gn = g.norm();
            if gn <= 1e-12 * scale {
                break;
            }
            let mut improved = false;
            for _ in 0..30 {
                let q = g.scaled(-step).cayley()?;
                let cand: Vec<Vec<f64>> = f.iter().map(|w| q.mul_vec(w)).collect();
                let cv = restricted_trace(a, &cand);
                if cv < val - 1e-4 * step * gn * gn / frame.len() as f64 {
                    f = cand;
                    val = cv;
                    improved = true;
                    step *= 2.0;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        Ok((val, f))
    }

    /// Edge recovered as the null space of the sampled generators `P_W`:
    /// the edge is the orthogonal complement of their span. The numerical
    /// rank must agree between `budget` and `2·budget` samples.
    pub fn edge(&self, budget: usize) -> Result<SymSubspace> {
        let n = self.n();
        let d = n * (n + 1) / 2;
        let mut r = rng::substream(self.seed, 2);
        let mut qr = StreamingQr::new(d);
        let push = |qr: &mut StreamingQr, r: &mut Rng, count: usize| -> Result<()> {
            for _ in 0..count {
                let p = plane_projector(n, &self.family.sample(r))?;
                qr.push_row(&p.svec());
            }
            Ok(())
        };
        push(&mut qr, &mut r, budget)?;
        let (rank1, _) = qr.null_space(1e-8)?;
        push(&mut qr, &mut r, budget)?;
        let (rank2, null) = qr.null_space(1e-8)?;
        if rank1 != rank2 {
            return Err(Error::UnstableRank {
                first: rank1,
                second: rank2,
            });
        }
        let basis: Vec<SymMatrix> = null.iter().map(|v| SymMatrix::from_svec(n, v)).collect();
        SymSubspace::orthonormalize(n, &basis)
    }
}

fn closed_form(tag: PlaneFamilyTag) -> bool {
    matches!(
        tag,
        PlaneFamilyTag::Grass(_)
            | PlaneFamilyTag::CP
            | PlaneFamilyTag::QuatCP(_)
            | PlaneFamilyTag::HP
    )
}
