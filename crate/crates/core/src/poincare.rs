//! Orbit classification of dual points under the special orthogonal group of
//! an isotropic quadratic space: massive, massless, and trivial classes with
//! their little groups, dimensional-reduction chains, and the conformal
//! symmetry verdicts they imply.
//!
//! Dual points are written in the coordinates induced by identifying the
//! dual with the space through the form, so the dual norm of a point is just
//! Q evaluated at its coordinates and the group acts by its ordinary matrix
//! action.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::padic::{PAdic, SquareClass};
use crate::quadform::{FormProfile, QuadSpace};

/// The orbit type of a dual point.
#[derive(Clone, Debug, Serialize)]
pub enum ParticleKind {
    Massive { mass: PAdic },
    Massless,
    Trivial,
}

/// The stabilizer of a point in the orbit, reported by its invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LittleGroup {
    /// SO of the orthogonal complement of a massive point.
    SpecialOrthogonal { space: FormProfile },
    /// The affine group of the null-reduced space at a massless point.
    PoincareOf { space: FormProfile },
    /// The whole group (the zero orbit).
    WholeGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParticleClass {
    pub kind: ParticleKind,
    pub little_group: LittleGroup,
}

impl ParticleClass {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ParticleKind::Massive { .. } => "massive",
            ParticleKind::Massless => "massless",
            ParticleKind::Trivial => "trivial",
        }
    }
}

/// Classifies the orbit of a dual point. The ambient form must be isotropic.
pub fn classify_dual(space: &QuadSpace, point: &[PAdic]) -> Result<ParticleClass> {
    if !space.is_isotropic()? {
        return Err(Error::AnisotropicForm);
    }
    if point.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: point.len() });
    }
    if linalg::vec_is_zero(point) {
        return Ok(ParticleClass { kind: ParticleKind::Trivial, little_group: LittleGroup::WholeGroup });
    }
    let mass = space.quad(point)?;
    if !mass.is_zero() {
        let complement = space.orthogonal_complement(point)?;
        return Ok(ParticleClass {
            kind: ParticleKind::Massive { mass },
            little_group: LittleGroup::SpecialOrthogonal { space: complement.profile()? },
        });
    }
    // the norm vanishes to precision: certify liftability before reducing
    let witness = space.certify_null(point)?;
    let reduced = space.null_reduction(&witness)?;
    Ok(ParticleClass {
        kind: ParticleKind::Massless,
        little_group: LittleGroup::PoincareOf { space: reduced.profile()? },
    })
}

/// One row of the orbit census: a mass square class, a witness point
/// realizing it, and the little-group invariants.
#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub mass_class: SquareClass,
    pub witness: Vec<PAdic>,
    pub little_group: FormProfile,
}

/// The orbit census of an isotropic space: one massive row per square class
/// (isotropic forms are universal), one massless orbit, one trivial orbit.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitCensus {
    pub dim: usize,
    pub massive: Vec<CensusRow>,
    pub massless_little_group: FormProfile,
    pub trivial: bool,
}

pub fn orbit_census(space: &QuadSpace) -> Result<OrbitCensus> {
    if !space.is_isotropic()? {
        return Err(Error::AnisotropicForm);
    }
    let prec = space.work_prec();
    let mut rows = Vec::new();
    for cls in SquareClass::all(space.prime()) {
        let m = cls.to_padic(prec);
        let witness = space
            .represent_vector(&m)?
            .ok_or(Error::Internal("isotropic forms represent every class"))?;
        let complement = space.orthogonal_complement(&witness)?;
        rows.push(CensusRow { mass_class: cls, witness, little_group: complement.profile()? });
    }
    let null = space.isotropic_vector()?;
    let reduced = space.null_reduction(&null)?;
    Ok(OrbitCensus {
        dim: space.dim(),
        massive: rows,
        massless_little_group: reduced.profile()?,
        trivial: true,
    })
}

/// The chain of null reductions V = V_0, V_1, ... down to the anisotropic
/// kernel; consecutive dimensions differ by 2 and all members share the Witt
/// kernel.
#[derive(Clone, Debug)]
pub struct ReductionChain {
    pub spaces: Vec<QuadSpace>,
}

impl ReductionChain {
    /// Number of reduction steps available before anisotropy.
    pub fn depth(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn terminal(&self) -> &QuadSpace {
        self.spaces.last().expect("chain never empty")
    }
}

pub fn reduction_chain(space: &QuadSpace) -> Result<ReductionChain> {
    let mut spaces = vec![space.clone()];
    let mut current = space.clone();
    while current.is_isotropic()? {
        let w = current.isotropic_vector()?;
        current = current.null_reduction(&w)?;
        spaces.push(current.clone());
    }
    Ok(ReductionChain { spaces })
}

/// A reduction-step label: the kind of representation chosen on that level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Massive,
    Massless,
}

impl std::str::FromStr for StepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<StepKind> {
        match s {
            "massive" => Ok(StepKind::Massive),
            "massless" => Ok(StepKind::Massless),
            other => Err(Error::Parse(format!("unknown step kind '{other}'"))),
        }
    }
}

/// Conformal-symmetry outcome of a reduction chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// A massive first step: no conformal symmetry.
    NoConformalSymmetryMassive,
    /// A massive step later in the chain: eventually massive, no conformal
    /// symmetry.
    NoConformalSymmetryEventuallyMassive,
    /// Every step massless down to the anisotropic terminal: undecided.
    Unknown,
}

impl Verdict {
    pub fn describe(&self) -> &'static str {
        match self {
            Verdict::NoConformalSymmetryMassive => "no conformal symmetry (massive)",
            Verdict::NoConformalSymmetryEventuallyMassive => {
                "no conformal symmetry (eventually massive)"
            }
            Verdict::Unknown => "unknown (all reductions massless)",
        }
    }
}

/// Combines a reduction chain with the per-level massive/massless choices.
/// A massless step requires the level to be isotropic; a massive step closes
/// the list; an all-massless list must reach the anisotropic terminal.
pub fn conformal_verdict(chain: &ReductionChain, steps: &[StepKind]) -> Result<Verdict> {
    let depth = chain.depth();
    if steps.is_empty() {
        return Err(Error::InconsistentSteps("at least one step kind is required".into()));
    }
    for (i, step) in steps.iter().enumerate() {
        match step {
            StepKind::Massive => {
                if i + 1 != steps.len() {
                    return Err(Error::InconsistentSteps(format!(
                        "massive step at position {i} must terminate the list"
                    )));
                }
                if i > depth {
                    return Err(Error::InconsistentSteps(format!(
                        "step {i} exceeds the chain depth {depth}"
                    )));
                }
                if chain.spaces[i].dim() == 0 {
                    return Err(Error::InconsistentSteps(
                        "a zero-dimensional space carries no massive orbit".into(),
                    ));
                }
                return Ok(if i == 0 {
                    Verdict::NoConformalSymmetryMassive
                } else {
                    Verdict::NoConformalSymmetryEventuallyMassive
                });
            }
            StepKind::Massless => {
                if i >= depth {
                    return Err(Error::InconsistentSteps(format!(
                        "massless step at position {i} needs an isotropic space, but the chain is anisotropic there"
                    )));
                }
            }
        }
    }
    // all steps massless: they must exhaust the chain
    if steps.len() != depth {
        return Err(Error::InconsistentSteps(format!(
            "an all-massless list must have exactly {depth} steps to reach the anisotropic terminal"
        )));
    }
    Ok(Verdict::Unknown)
}
