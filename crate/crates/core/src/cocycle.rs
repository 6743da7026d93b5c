//! 1-cocycles, coboundaries, affine actions, and multipliers for semidirect
//! products A x' G, verified per sample in exact arithmetic.
//!
//! The machinery is generic over a [`DualPairing`], which packages the acting
//! group G, the abelian normal part A, the dual points X it acts on, and the
//! character pairing <a, x>. Phases are additive values in Q/Z, so every
//! identity check below is exact: a sample either passes or fails, there is
//! no tolerance.

use serde::Serialize;

use crate::error::Result;
use crate::padic::Phase;

/// A group G acting on dual points X, together with the abelian part A of a
/// semidirect product H = A x' G and the character pairing against X.
pub trait DualPairing {
    type G: Clone;
    type A: Clone;
    type X: Clone;

    fn identity(&self) -> Self::G;
    fn compose(&self, a: &Self::G, b: &Self::G) -> Result<Self::G>;
    fn invert(&self, g: &Self::G) -> Result<Self::G>;

    /// Linear action of G on dual points.
    fn act(&self, g: &Self::G, x: &Self::X) -> Result<Self::X>;
    /// Action of G on the abelian part.
    fn act_normal(&self, g: &Self::G, a: &Self::A) -> Result<Self::A>;
    fn normal_add(&self, a: &Self::A, b: &Self::A) -> Result<Self::A>;

    fn zero(&self) -> Self::X;
    fn add(&self, a: &Self::X, b: &Self::X) -> Result<Self::X>;
    fn neg(&self, x: &Self::X) -> Self::X;
    fn x_eq(&self, a: &Self::X, b: &Self::X) -> bool;
    /// Confidence floor of a dual point: the valuation below which its
    /// entries are certainly known.
    fn x_val_floor(&self, x: &Self::X) -> i64;

    /// psi(<a, x>), the character applied to the duality pairing.
    fn pair(&self, a: &Self::A, x: &Self::X) -> Result<Phase>;
}

/// A map theta: G -> X from one of the declared parametric families.
pub trait CocycleMap<S: DualPairing> {
    fn eval(&self, sys: &S, g: &S::G) -> Result<S::X>;
    fn family(&self) -> String;
}

/// The zero cocycle.
pub struct ZeroCocycle;

impl<S: DualPairing> CocycleMap<S> for ZeroCocycle {
    fn eval(&self, sys: &S, _g: &S::G) -> Result<S::X> {
        Ok(sys.zero())
    }
    fn family(&self) -> String {
        "zero".into()
    }
}

/// The coboundary g -> g[xi] - xi.
pub struct Coboundary<X> {
    pub base: X,
}

impl<S: DualPairing> CocycleMap<S> for Coboundary<S::X> {
    fn eval(&self, sys: &S, g: &S::G) -> Result<S::X> {
        let moved = sys.act(g, &self.base)?;
        sys.add(&moved, &sys.neg(&self.base))
    }
    fn family(&self) -> String {
        "coboundary".into()
    }
}

/// A cocycle perturbed by a constant offset. Not a cocycle unless the offset
/// is fixed by the action; used as a negative control.
pub struct OffsetCocycle<C, X> {
    pub inner: C,
    pub offset: X,
}

impl<S: DualPairing, C: CocycleMap<S>> CocycleMap<S> for OffsetCocycle<C, S::X> {
    fn eval(&self, sys: &S, g: &S::G) -> Result<S::X> {
        let v = self.inner.eval(sys, g)?;
        sys.add(&v, &self.offset)
    }
    fn family(&self) -> String {
        format!("{}+offset", self.inner.family())
    }
}

/// Pointwise sum of two cocycles.
pub struct SumCocycle<C1, C2> {
    pub first: C1,
    pub second: C2,
}

impl<S: DualPairing, C1: CocycleMap<S>, C2: CocycleMap<S>> CocycleMap<S> for SumCocycle<C1, C2> {
    fn eval(&self, sys: &S, g: &S::G) -> Result<S::X> {
        let a = self.first.eval(sys, g)?;
        let b = self.second.eval(sys, g)?;
        sys.add(&a, &b)
    }
    fn family(&self) -> String {
        format!("{}+{}", self.first.family(), self.second.family())
    }
}

/// Outcome of a per-sample identity verification.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub family: String,
    pub samples: usize,
    /// indices of failing samples
    pub failures: Vec<usize>,
    /// smallest valuation floor observed on the deviations (a confidence
    /// level: every deviation is zero at least to this valuation)
    pub deviation_floor: Option<i64>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks theta(g g') = theta(g) + g[theta(g')] on every pair, plus the
/// normalization theta(1) = 0.
pub fn verify_cocycle<S: DualPairing, C: CocycleMap<S>>(
    sys: &S,
    theta: &C,
    pairs: &[(S::G, S::G)],
) -> Result<IdentityReport> {
    let mut failures = Vec::new();
    let mut floor: Option<i64> = None;
    let at_identity = theta.eval(sys, &sys.identity())?;
    if !sys.x_eq(&at_identity, &sys.zero()) {
        failures.push(usize::MAX); // normalization failure marker
    }
    for (i, (g, h)) in pairs.iter().enumerate() {
        let lhs = theta.eval(sys, &sys.compose(g, h)?)?;
        let rhs = sys.add(&theta.eval(sys, g)?, &sys.act(g, &theta.eval(sys, h)?)?)?;
        let diff = sys.add(&lhs, &sys.neg(&rhs))?;
        let f = sys.x_val_floor(&diff);
        floor = Some(floor.map_or(f, |c: i64| c.min(f)));
        if !sys.x_eq(&lhs, &rhs) {
            failures.push(i);
        }
    }
    Ok(IdentityReport { family: theta.family(), samples: pairs.len(), failures, deviation_floor: floor })
}

/// The affine action g{x} = g[x] + theta(g). This is an action exactly when
/// theta satisfies the cocycle identity.
pub fn affine_act<S: DualPairing, C: CocycleMap<S>>(
    sys: &S,
    theta: &C,
    g: &S::G,
    x: &S::X,
) -> Result<S::X> {
    let moved = sys.act(g, x)?;
    sys.add(&moved, &theta.eval(sys, g)?)
}

/// A multiplier on H = A x' G, evaluated on pairs of H-elements written as
/// (a, g). Values are additive phases.
pub trait MultiplierMap<S: DualPairing> {
    fn eval(&self, sys: &S, h1: &(S::A, S::G), h2: &(S::A, S::G)) -> Result<Phase>;
    fn family(&self) -> String;
}

/// A multiplier on the quotient group G alone.
pub trait GroupMultiplier<S: DualPairing> {
    fn eval(&self, sys: &S, g: &S::G, h: &S::G) -> Result<Phase>;
    fn family(&self) -> String;
}

pub struct ZeroGroupMultiplier {
    pub prime: u64,
}

impl<S: DualPairing> GroupMultiplier<S> for ZeroGroupMultiplier {
    fn eval(&self, _sys: &S, _g: &S::G, _h: &S::G) -> Result<Phase> {
        Ok(Phase::zero(self.prime))
    }
    fn family(&self) -> String {
        "zero".into()
    }
}

pub struct TrivialMultiplier {
    pub prime: u64,
}

impl<S: DualPairing> MultiplierMap<S> for TrivialMultiplier {
    fn eval(&self, _sys: &S, _h1: &(S::A, S::G), _h2: &(S::A, S::G)) -> Result<Phase> {
        Ok(Phase::zero(self.prime))
    }
    fn family(&self) -> String {
        "trivial".into()
    }
}

/// The multiplier assembled from a quotient multiplier n and a 1-cocycle
/// theta: m(a g, a' g') = n(g, g') + <a', theta(g^{-1})>. It restricts
/// trivially to A x A and A x G.
pub struct AssembledMultiplier<N, C> {
    pub n_g: N,
    pub theta: C,
}

impl<S, N, C> MultiplierMap<S> for AssembledMultiplier<N, C>
where
    S: DualPairing,
    N: GroupMultiplier<S>,
    C: CocycleMap<S>,
{
    fn eval(&self, sys: &S, h1: &(S::A, S::G), h2: &(S::A, S::G)) -> Result<Phase> {
        let base = self.n_g.eval(sys, &h1.1, &h2.1)?;
        let theta_inv = self.theta.eval(sys, &sys.invert(&h1.1)?)?;
        let paired = sys.pair(&h2.0, &theta_inv)?;
        base.add(&paired)
    }
    fn family(&self) -> String {
        format!("assembled({}, {})", self.n_g.family(), self.theta.family())
    }
}

/// Product in H = A x' G of elements written as (a, g).
pub fn h_compose<S: DualPairing>(sys: &S, h1: &(S::A, S::G), h2: &(S::A, S::G)) -> Result<(S::A, S::G)> {
    let moved = sys.act_normal(&h1.1, &h2.0)?;
    Ok((sys.normal_add(&h1.0, &moved)?, sys.compose(&h1.1, &h2.1)?))
}

/// Checks the 2-cocycle identity
/// m(h1, h2) + m(h1 h2, h3) = m(h1, h2 h3) + m(h2, h3)
/// on every triple, plus normalization against the identity.
pub fn verify_multiplier<S: DualPairing, M: MultiplierMap<S>>(
    sys: &S,
    m: &M,
    e: &(S::A, S::G),
    triples: &[((S::A, S::G), (S::A, S::G), (S::A, S::G))],
) -> Result<IdentityReport> {
    let mut failures = Vec::new();
    for (i, (h1, h2, h3)) in triples.iter().enumerate() {
        let mut ok = m.eval(sys, e, h1)?.is_zero() && m.eval(sys, h1, e)?.is_zero();
        let h12 = h_compose(sys, h1, h2)?;
        let h23 = h_compose(sys, h2, h3)?;
        let lhs = m.eval(sys, h1, h2)?.add(&m.eval(sys, &h12, h3)?)?;
        let rhs = m.eval(sys, h1, &h23)?.add(&m.eval(sys, h2, h3)?)?;
        ok &= lhs == rhs;
        if !ok {
            failures.push(i);
        }
    }
    Ok(IdentityReport { family: m.family(), samples: triples.len(), failures, deviation_floor: None })
}
