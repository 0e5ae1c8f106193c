use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::quaternion::{complex_structure, quaternion_triple, structured_gram_schmidt, QuatAxis};
use crate::error::{Error, Result};
use crate::rng::{self, Rng};
use crate::symspace::Square;

/// Families of planes `W ⊂ ℝᴺ` defining geometric cones `{A : tr(A|_W) ≥ 0 ∀W}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneFamilyTag {
    /// All real `p`-planes.
    Grass(usize),
    /// Complex lines for the standard structure on `ℝ^{2n}`.
    CP,
    /// Lagrangian `n`-planes in `ℂⁿ`.
    LAG,
    /// Quaternionic lines `{e, Ie, Je, Ke}`.
    HP,
    /// `ℍ`-Lagrangian planes: `W, IW, JW, KW` mutually orthogonal.
    HLAG,
    /// `I`-complex spans `{e_j, I e_j}` of an `ℍ`-orthonormal set.
    GlIJK,
    /// Lagrangian planes for the complex structure given by one quaternionic axis.
    Lag(QuatAxis),
    /// Complex lines `{e, Xe}` for one quaternionic axis `X`.
    QuatCP(QuatAxis),
}

impl PlaneFamilyTag {
    /// Real dimension of the planes in ambient dimension `big_n`.
    pub fn plane_dim(&self, big_n: usize) -> usize {
        match *self {
            PlaneFamilyTag::Grass(p) => p,
            PlaneFamilyTag::CP | PlaneFamilyTag::QuatCP(_) => 2,
            PlaneFamilyTag::LAG | PlaneFamilyTag::Lag(_) => big_n / 2,
            PlaneFamilyTag::HP => 4,
            PlaneFamilyTag::HLAG => big_n / 4,
            PlaneFamilyTag::GlIJK => big_n / 2,
        }
    }

    pub fn check_dim(&self, big_n: usize) -> Result<()> {
        let ok = match *self {
            PlaneFamilyTag::Grass(p) => p >= 1 && p <= big_n,
            PlaneFamilyTag::CP | PlaneFamilyTag::LAG => big_n % 2 == 0,
            _ => big_n % 4 == 0,
        };
        if ok && big_n >= 1 && big_n <= crate::symspace::MAX_DIM {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension(big_n))
        }
    }

    pub fn name(&self) -> alloc::string::String {
        use alloc::format;
        match *self {
            PlaneFamilyTag::Grass(p) => format!("grass{p}"),
            PlaneFamilyTag::CP => "cp".to_string(),
            PlaneFamilyTag::LAG => "lag".to_string(),
            PlaneFamilyTag::HP => "hp".to_string(),
            PlaneFamilyTag::HLAG => "hlag".to_string(),
            PlaneFamilyTag::GlIJK => "gl_ijk".to_string(),
            PlaneFamilyTag::Lag(a) => format!("{}lag", a.name().to_ascii_lowercase()),
            PlaneFamilyTag::QuatCP(a) => format!("cp_{}", a.name().to_ascii_lowercase()),
        }
    }
}

impl fmt::Display for PlaneFamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for PlaneFamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.to_ascii_lowercase().replace('-', "_");
        if let Some(p) = t.strip_prefix("grass") {
            let p = p.trim_start_matches(['(', '_']).trim_end_matches(')');
            return p
                .parse()
                .map(PlaneFamilyTag::Grass)
                .map_err(|_| Error::InvalidInput(s.to_string()));
        }
        Ok(match t.as_str() {
            "cp" => PlaneFamilyTag::CP,
            "lag" => PlaneFamilyTag::LAG,
            "hp" => PlaneFamilyTag::HP,
            "hlag" => PlaneFamilyTag::HLAG,
            "gl_ijk" | "glijk" => PlaneFamilyTag::GlIJK,
            "ilag" => PlaneFamilyTag::Lag(QuatAxis::I),
            "jlag" => PlaneFamilyTag::Lag(QuatAxis::J),
            "klag" => PlaneFamilyTag::Lag(QuatAxis::K),
            "cp_i" => PlaneFamilyTag::QuatCP(QuatAxis::I),
            "cp_j" => PlaneFamilyTag::QuatCP(QuatAxis::J),
            "cp_k" => PlaneFamilyTag::QuatCP(QuatAxis::K),
            _ => {
                return Err(Error::InvalidInput(alloc::format!(
                    "unknown plane family `{s}`"
                )))
            }
        })
    }
}

/// Structures that define a family, kept so repeated sampling does not rebuild them.
#[derive(Debug, Clone)]
pub(crate) struct FamilyStructures {
    pub tag: PlaneFamilyTag,
    pub big_n: usize,
    /// The complex structure for CP/LAG-type families.
    pub x: Option<Square>,
    /// `I, J, K` for quaternionic families.
    pub ijk: Option<[Square; 3]>,
}

impl FamilyStructures {
    pub fn new(tag: PlaneFamilyTag, big_n: usize) -> Result<Self> {
        tag.check_dim(big_n)?;
        let (x, ijk) = match tag {
            PlaneFamilyTag::Grass(_) => (None, None),
            PlaneFamilyTag::CP | PlaneFamilyTag::LAG => (Some(complex_structure(big_n / 2)), None),
            PlaneFamilyTag::Lag(a) | PlaneFamilyTag::QuatCP(a) => {
                let q = quaternion_triple(big_n / 4);
                (Some(q.axis(a).clone()), Some([q.i, q.j, q.k]))
            }
            PlaneFamilyTag::GlIJK => {
                let q = quaternion_triple(big_n / 4);
                (Some(q.i.clone()), Some([q.i, q.j, q.k]))
            }
            PlaneFamilyTag::HP | PlaneFamilyTag::HLAG => {
                let q = quaternion_triple(big_n / 4);
                (None, Some([q.i, q.j, q.k]))
            }
        };
        Ok(Self { tag, big_n, x, ijk })
    }

    fn quat_refs(&self) -> [&Square; 3] {
        let q = self.ijk.as_ref().expect("quaternionic family");
        [&q[0], &q[1], &q[2]]
    }

    /// Frame of a plane in the family generated from the given vectors,
    /// or `None` when they are degenerate.
    pub fn frame_from(&self, gens: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
        let d = self.big_n;
        let frame = match self.tag {
            PlaneFamilyTag::Grass(p) => structured_gram_schmidt(&[], gens, p),
            PlaneFamilyTag::CP | PlaneFamilyTag::QuatCP(_) => {
                let x = self.x.as_ref().expect("structure");
                let e = structured_gram_schmidt(&[], gens, 1);
                e.first()
                    .map(|e| alloc::vec![e.clone(), x.mul_vec(e)])
                    .unwrap_or_default()
            }
            PlaneFamilyTag::LAG | PlaneFamilyTag::Lag(_) => {
                let x = self.x.as_ref().expect("structure");
                structured_gram_schmidt(&[x], gens, d / 2)
            }
            PlaneFamilyTag::HP => {
                let e = structured_gram_schmidt(&[], gens, 1);
                let [i, j, k] = self.quat_refs();
                e.first()
                    .map(|e| alloc::vec![e.clone(), i.mul_vec(e), j.mul_vec(e), k.mul_vec(e)])
                    .unwrap_or_default()
            }
            PlaneFamilyTag::HLAG => structured_gram_schmidt(&self.quat_refs(), gens, d / 4),
            PlaneFamilyTag::GlIJK => {
                let hs = structured_gram_schmidt(&self.quat_refs(), gens, d / 4);
                let i = self.x.as_ref().expect("structure");
                hs.iter().flat_map(|e| [e.clone(), i.mul_vec(e)]).collect()
            }
        };
        (frame.len() == self.tag.plane_dim(d)).then_some(frame)
    }

    /// How many generating vectors a sample needs.
    pub fn generators_needed(&self) -> usize {
        let d = self.big_n;
        match self.tag {
            PlaneFamilyTag::Grass(p) => p,
            PlaneFamilyTag::CP | PlaneFamilyTag::QuatCP(_) | PlaneFamilyTag::HP => 1,
            PlaneFamilyTag::LAG | PlaneFamilyTag::Lag(_) => d / 2,
            PlaneFamilyTag::HLAG | PlaneFamilyTag::GlIJK => d / 4,
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<Vec<f64>> {
        loop {
            let gens: Vec<Vec<f64>> = (0..self.generators_needed())
                .map(|_| rng::gaussian_vec(rng, self.big_n))
                .collect();
            if let Some(f) = self.frame_from(&gens) {
                return f;
            }
        }
    }
}

/// Orthonormal frame of a random plane of the family in `ℝ^{big_n}`.
pub fn sample_plane(tag: PlaneFamilyTag, big_n: usize, rng: &mut Rng) -> Result<Vec<Vec<f64>>> {
    Ok(FamilyStructures::new(tag, big_n)?.sample(rng))
}
