//! The Galilean group over Q_p and its projective-representation data: the
//! boost cocycles theta_tau, the Schroedinger multipliers m_tau, the affine
//! action on the dual, the orbit invariant M, orbit charts, stabilizers, and
//! the phase of spacetime translations on an orbit.
//!
//! Elements are r = ((u, eta), (v, W)): a spacetime translation, a boost and
//! a rotation of the spatial quadratic space V0. Spacetime is V0 + k with
//! the action (x, t) -> (W x + t v + u, t + eta); the dual consists of pairs
//! (xi, t) paired by <(xi, t), (u, eta)> = (xi, u) + t eta.
//!
//! Sign convention: with the dual action (v, W): (xi, t) -> (W xi, t - (W
//! xi, v)), the boost cocycle that produces the affine action
//! (xi, t) -> (W xi + 2 tau v, t - (W xi, v) - tau (v, v)) is
//! theta_tau(v, W) = (2 tau v, -tau (v, v)); the multiplier it induces is
//! psi(-2 tau (v, W u') - tau eta' (v, v)). Both displayed actions and the
//! invariant M are reproduced exactly under this convention.

use crate::cocycle::{CocycleMap, DualPairing, MultiplierMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::orthogrp::{BilinearSpace, OrthMatrix};
use crate::padic::{PAdic, Phase};
use crate::quadform::QuadSpace;

/// The spatial quadratic space V0 together with working precision.
#[derive(Clone, Debug)]
pub struct GalileanSpace {
    v0: QuadSpace,
    bspace: BilinearSpace,
    prec: u32,
}

/// A spacetime translation (u, eta).
#[derive(Clone, Debug)]
pub struct Translation {
    pub u: Vec<PAdic>,
    pub eta: PAdic,
}

/// A homogeneous element (v, W): boost v and rotation W in SO(V0).
#[derive(Clone, Debug)]
pub struct RotBoost {
    pub v: Vec<PAdic>,
    pub w: OrthMatrix,
}

/// A full group element ((u, eta), (v, W)).
#[derive(Clone, Debug)]
pub struct GalileanElement {
    pub trans: Translation,
    pub hom: RotBoost,
}

/// A dual point (xi, t).
#[derive(Clone, Debug)]
pub struct GalDualPoint {
    pub xi: Vec<PAdic>,
    pub t: PAdic,
}

impl GalileanSpace {
    pub fn new(v0: QuadSpace) -> GalileanSpace {
        let prec = v0.work_prec();
        let bspace = BilinearSpace::from_quadspace(&v0);
        GalileanSpace { v0, bspace, prec }
    }

    pub fn prime(&self) -> u64 {
        self.v0.prime()
    }

    pub fn space_dim(&self) -> usize {
        self.v0.dim()
    }

    pub fn v0(&self) -> &QuadSpace {
        &self.v0
    }

    pub fn bspace(&self) -> &BilinearSpace {
        &self.bspace
    }

    fn dot(&self, x: &[PAdic], y: &[PAdic]) -> Result<PAdic> {
        self.v0.bilinear(x, y)
    }

    pub fn identity(&self) -> GalileanElement {
        GalileanElement {
            trans: Translation { u: vec![PAdic::zero(self.prime()); self.space_dim()], eta: PAdic::zero(self.prime()) },
            hom: self.hom_identity(),
        }
    }

    pub fn hom_identity(&self) -> RotBoost {
        RotBoost {
            v: vec![PAdic::zero(self.prime()); self.space_dim()],
            w: OrthMatrix::identity(&self.bspace),
        }
    }

    /// (v, W)(v', W') = (v + W v', W W').
    pub fn hom_compose(&self, a: &RotBoost, b: &RotBoost) -> Result<RotBoost> {
        Ok(RotBoost {
            v: linalg::vec_add(&a.v, &a.w.apply(&b.v)?)?,
            w: a.w.compose(&b.w)?,
        })
    }

    pub fn hom_invert(&self, a: &RotBoost) -> Result<RotBoost> {
        let w_inv = a.w.inverse()?;
        Ok(RotBoost { v: linalg::vec_neg(&w_inv.apply(&a.v)?), w: w_inv })
    }

    /// Action of (v, W) on a translation: (u, eta) -> (W u + eta v, eta).
    pub fn hom_act_translation(&self, a: &RotBoost, t: &Translation) -> Result<Translation> {
        let wu = a.w.apply(&t.u)?;
        Ok(Translation {
            u: linalg::vec_add(&wu, &linalg::vec_scale(&t.eta, &a.v)?)?,
            eta: t.eta.clone(),
        })
    }

    /// Full group law ((u,eta),(v,W)) ((u',eta'),(v',W')).
    pub fn compose(&self, r: &GalileanElement, s: &GalileanElement) -> Result<GalileanElement> {
        let moved = self.hom_act_translation(&r.hom, &s.trans)?;
        Ok(GalileanElement {
            trans: Translation {
                u: linalg::vec_add(&r.trans.u, &moved.u)?,
                eta: r.trans.eta.add(&moved.eta)?,
            },
            hom: self.hom_compose(&r.hom, &s.hom)?,
        })
    }

    pub fn invert(&self, r: &GalileanElement) -> Result<GalileanElement> {
        let hom_inv = self.hom_invert(&r.hom)?;
        let moved = self.hom_act_translation(&hom_inv, &r.trans)?;
        Ok(GalileanElement {
            trans: Translation { u: linalg::vec_neg(&moved.u), eta: moved.eta.neg() },
            hom: hom_inv,
        })
    }

    /// (x, t) -> (W x + t v + u, t + eta).
    pub fn act_spacetime(&self, r: &GalileanElement, x: &[PAdic], t: &PAdic) -> Result<(Vec<PAdic>, PAdic)> {
        let wx = r.hom.w.apply(x)?;
        let moved = linalg::vec_add(&linalg::vec_add(&wx, &linalg::vec_scale(t, &r.hom.v)?)?, &r.trans.u)?;
        Ok((moved, t.add(&r.trans.eta)?))
    }

    /// Dual action (v, W): (xi, t) -> (W xi, t - (W xi, v)).
    pub fn dual_act(&self, a: &RotBoost, x: &GalDualPoint) -> Result<GalDualPoint> {
        let wxi = a.w.apply(&x.xi)?;
        let shift = self.dot(&wxi, &a.v)?;
        Ok(GalDualPoint { xi: wxi, t: x.t.sub(&shift)? })
    }

    pub fn dual_zero(&self) -> GalDualPoint {
        GalDualPoint { xi: vec![PAdic::zero(self.prime()); self.space_dim()], t: PAdic::zero(self.prime()) }
    }

    pub fn dual_add(&self, a: &GalDualPoint, b: &GalDualPoint) -> Result<GalDualPoint> {
        Ok(GalDualPoint { xi: linalg::vec_add(&a.xi, &b.xi)?, t: a.t.add(&b.t)? })
    }

    pub fn dual_neg(&self, a: &GalDualPoint) -> GalDualPoint {
        GalDualPoint { xi: linalg::vec_neg(&a.xi), t: a.t.neg() }
    }

    pub fn dual_eq(&self, a: &GalDualPoint, b: &GalDualPoint) -> bool {
        linalg::vec_eq(&a.xi, &b.xi) && a.t.eq_approx(&b.t)
    }

    /// <(xi, t), (u, eta)> = (xi, u) + t eta.
    pub fn duality(&self, t: &Translation, x: &GalDualPoint) -> Result<PAdic> {
        self.dot(&x.xi, &t.u)?.add(&x.t.mul(&t.eta)?)
    }

    /// theta_tau(v, W) = (2 tau v, -tau (v, v)).
    pub fn theta_tau(&self, tau: &PAdic, a: &RotBoost) -> Result<GalDualPoint> {
        let two = PAdic::from_int(self.prime(), 2, self.prec)?;
        let two_tau = two.mul(tau)?;
        Ok(GalDualPoint {
            xi: linalg::vec_scale(&two_tau, &a.v)?,
            t: tau.mul(&self.dot(&a.v, &a.v)?)?.neg(),
        })
    }

    /// m_tau(r, r') = psi(-2 tau (v, W u') - tau eta' (v, v)).
    pub fn multiplier_m(&self, tau: &PAdic, r: &GalileanElement, s: &GalileanElement) -> Result<Phase> {
        let two = PAdic::from_int(self.prime(), 2, self.prec)?;
        let wu = r.hom.w.apply(&s.trans.u)?;
        let first = two.mul(tau)?.mul(&self.dot(&r.hom.v, &wu)?)?;
        let second = tau.mul(&s.trans.eta)?.mul(&self.dot(&r.hom.v, &r.hom.v)?)?;
        first.add(&second)?.neg().additive_character()
    }

    /// Affine action for theta_tau:
    /// (v, W): (xi, t) -> (W xi + 2 tau v, t - (W xi, v) - tau (v, v)).
    pub fn affine_act(&self, tau: &PAdic, a: &RotBoost, x: &GalDualPoint) -> Result<GalDualPoint> {
        let base = self.dual_act(a, x)?;
        self.dual_add(&base, &self.theta_tau(tau, a)?)
    }

    /// M(xi, t) = (xi, xi) + 4 tau t; constant along affine orbits.
    pub fn invariant_m(&self, tau: &PAdic, x: &GalDualPoint) -> Result<PAdic> {
        let four = PAdic::from_int(self.prime(), 4, self.prec)?;
        self.dot(&x.xi, &x.xi)?.add(&four.mul(tau)?.mul(&x.t)?)
    }

    /// The chart xi -> (xi, (a - (xi, xi)) / (4 tau)) of the orbit M = a.
    pub fn orbit_chart(&self, tau: &PAdic, a: &PAdic, xi: &[PAdic]) -> Result<GalDualPoint> {
        if tau.is_zero() {
            return Err(Error::ZeroTau);
        }
        let four = PAdic::from_int(self.prime(), 4, self.prec)?;
        let t = a.sub(&self.dot(xi, xi)?)?.div(&four.mul(tau)?)?;
        Ok(GalDualPoint { xi: xi.to_vec(), t })
    }

    /// Chart inverse: forgets the t-coordinate.
    pub fn unchart(&self, x: &GalDualPoint) -> Vec<PAdic> {
        x.xi.clone()
    }

    /// The base point (0, a / 4 tau) of the orbit M = a.
    pub fn orbit_base_point(&self, tau: &PAdic, a: &PAdic) -> Result<GalDualPoint> {
        self.orbit_chart(tau, a, &vec![PAdic::zero(self.prime()); self.space_dim()])
    }

    /// True when (v, W) fixes the base point (0, a/4 tau); holds exactly for
    /// v = 0.
    pub fn stabilizer_check(&self, tau: &PAdic, a: &PAdic, rb: &RotBoost) -> Result<bool> {
        let base = self.orbit_base_point(tau, a)?;
        let moved = self.affine_act(tau, rb, &base)?;
        Ok(self.dual_eq(&moved, &base))
    }

    /// Phase by which the translation (u, eta) acts on the orbit M = a at
    /// chart coordinate xi: psi((u, xi) + eta (a - (xi, xi)) / (4 tau)).
    pub fn translation_phase(
        &self,
        tau: &PAdic,
        a: &PAdic,
        t: &Translation,
        xi: &[PAdic],
    ) -> Result<Phase> {
        if tau.is_zero() {
            return Err(Error::ZeroTau);
        }
        let four = PAdic::from_int(self.prime(), 4, self.prec)?;
        let frac = a.sub(&self.dot(xi, xi)?)?.div(&four.mul(tau)?)?;
        let arg = self.dot(&t.u, xi)?.add(&t.eta.mul(&frac)?)?;
        arg.additive_character()
    }
}

impl DualPairing for GalileanSpace {
    type G = RotBoost;
    type A = Translation;
    type X = GalDualPoint;

    fn identity(&self) -> RotBoost {
        self.hom_identity()
    }
    fn compose(&self, a: &RotBoost, b: &RotBoost) -> Result<RotBoost> {
        self.hom_compose(a, b)
    }
    fn invert(&self, g: &RotBoost) -> Result<RotBoost> {
        self.hom_invert(g)
    }
    fn act(&self, g: &RotBoost, x: &GalDualPoint) -> Result<GalDualPoint> {
        self.dual_act(g, x)
    }
    fn act_normal(&self, g: &RotBoost, a: &Translation) -> Result<Translation> {
        self.hom_act_translation(g, a)
    }
    fn normal_add(&self, a: &Translation, b: &Translation) -> Result<Translation> {
        Ok(Translation { u: linalg::vec_add(&a.u, &b.u)?, eta: a.eta.add(&b.eta)? })
    }
    fn zero(&self) -> GalDualPoint {
        self.dual_zero()
    }
    fn add(&self, a: &GalDualPoint, b: &GalDualPoint) -> Result<GalDualPoint> {
        self.dual_add(a, b)
    }
    fn neg(&self, x: &GalDualPoint) -> GalDualPoint {
        self.dual_neg(x)
    }
    fn x_eq(&self, a: &GalDualPoint, b: &GalDualPoint) -> bool {
        self.dual_eq(a, b)
    }
    fn x_val_floor(&self, x: &GalDualPoint) -> i64 {
        x.xi.iter().map(|c| c.val_floor()).chain([x.t.val_floor()]).min().unwrap_or(0)
    }
    fn pair(&self, a: &Translation, x: &GalDualPoint) -> Result<Phase> {
        self.duality(a, x)?.additive_character()
    }
}

/// theta_tau as a member of the declared cocycle families.
pub struct ThetaTau {
    pub tau: PAdic,
}

impl CocycleMap<GalileanSpace> for ThetaTau {
    fn eval(&self, sys: &GalileanSpace, g: &RotBoost) -> Result<GalDualPoint> {
        sys.theta_tau(&self.tau, g)
    }
    fn family(&self) -> String {
        format!("theta_tau(tau={})", self.tau)
    }
}

/// The multiplier of the affine family in closed form.
pub struct SchrodingerMultiplier {
    pub tau: PAdic,
}

impl MultiplierMap<GalileanSpace> for SchrodingerMultiplier {
    fn eval(
        &self,
        sys: &GalileanSpace,
        h1: &(Translation, RotBoost),
        h2: &(Translation, RotBoost),
    ) -> Result<Phase> {
        let r = GalileanElement { trans: h1.0.clone(), hom: h1.1.clone() };
        let s = GalileanElement { trans: h2.0.clone(), hom: h2.1.clone() };
        sys.multiplier_m(&self.tau, &r, &s)
    }
    fn family(&self) -> String {
        format!("m_tau(tau={})", self.tau)
    }
}

/// Negative control: the boost term enters with the opposite sign, which
/// breaks the 2-cocycle identity for tau != 0.
pub struct SignFlippedMultiplier {
    pub tau: PAdic,
}

impl MultiplierMap<GalileanSpace> for SignFlippedMultiplier {
    fn eval(
        &self,
        sys: &GalileanSpace,
        h1: &(Translation, RotBoost),
        h2: &(Translation, RotBoost),
    ) -> Result<Phase> {
        let two = PAdic::from_int(sys.prime(), 2, sys.prec)?;
        let wu = h1.1.w.apply(&h2.0.u)?;
        let first = two.mul(&self.tau)?.mul(&sys.dot(&h1.1.v, &wu)?)?;
        let second = self.tau.mul(&h2.0.eta)?.mul(&sys.dot(&h1.1.v, &h1.1.v)?)?;
        // first term flipped
        first.sub(&second)?.additive_character()
    }
    fn family(&self) -> String {
        "m_tau(sign-flipped)".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{self, AssembledMultiplier, ZeroGroupMultiplier};
    use crate::orthogrp::reflection;

    const PREC: u32 = 24;

    fn sys(p: u64, entries: &[i64]) -> GalileanSpace {
        let rats: Vec<(i64, i64)> = entries.iter().map(|&n| (n, 1)).collect();
        GalileanSpace::new(QuadSpace::from_rationals(p, &rats, PREC).unwrap())
    }

    fn vecp(p: u64, entries: &[i64]) -> Vec<PAdic> {
        entries.iter().map(|&n| PAdic::from_int(p, n, PREC).unwrap()).collect()
    }

    fn rot(sys: &GalileanSpace, v1: &[i64], v2: &[i64]) -> OrthMatrix {
        let p = sys.prime();
        let r1 = reflection(sys.bspace(), &vecp(p, v1)).unwrap();
        let r2 = reflection(sys.bspace(), &vecp(p, v2)).unwrap();
        r1.compose(&r2).unwrap()
    }

    fn ratp(p: u64, n: i64, d: i64) -> PAdic {
        PAdic::from_ratio(p, n, d, PREC).unwrap()
    }

    // entries must carry denominators: the additive character vanishes on
    // p-adic integers, so all-integral samples check nothing
    fn sample_elements(s: &GalileanSpace) -> Vec<GalileanElement> {
        let p = s.prime();
        let pi = p as i64;
        let w1 = rot(s, &[1, 2], &[0, 1]);
        let w2 = rot(s, &[1, 1], &[2, 1]);
        vec![
            s.identity(),
            GalileanElement {
                trans: Translation { u: vec![ratp(p, 1, pi), ratp(p, 2, 1)], eta: ratp(p, 3, pi) },
                hom: RotBoost { v: vec![ratp(p, 2, pi), ratp(p, 1, 1)], w: w1 },
            },
            GalileanElement {
                trans: Translation { u: vec![ratp(p, 0, 1), ratp(p, 4, pi * pi)], eta: ratp(p, -1, 1) },
                hom: RotBoost { v: vec![ratp(p, 1, 1), ratp(p, -3, pi)], w: w2 },
            },
            GalileanElement {
                trans: Translation { u: vec![ratp(p, 5, 1), ratp(p, -2, pi)], eta: ratp(p, 2, pi) },
                hom: RotBoost { v: vec![ratp(p, 0, 1), ratp(p, 2, 1)], w: OrthMatrix::identity(s.bspace()) },
            },
        ]
    }

    #[test]
    fn group_axioms() {
        let s = sys(5, &[1, 3]);
        let els = sample_elements(&s);
        let e = s.identity();
        for r in &els {
            let re = s.compose(r, &e).unwrap();
            assert!(linalg::vec_eq(&re.trans.u, &r.trans.u) && re.trans.eta.eq_approx(&r.trans.eta));
            let inv = s.invert(r).unwrap();
            let prod = s.compose(r, &inv).unwrap();
            assert!(linalg::vec_is_zero(&prod.trans.u));
            assert!(prod.trans.eta.is_zero());
            assert!(linalg::vec_is_zero(&prod.hom.v));
        }
        // associativity
        for a in &els {
            for b in &els {
                for c in &els {
                    let lhs = s.compose(&s.compose(a, b).unwrap(), c).unwrap();
                    let rhs = s.compose(a, &s.compose(b, c).unwrap()).unwrap();
                    assert!(linalg::vec_eq(&lhs.trans.u, &rhs.trans.u));
                    assert!(lhs.trans.eta.eq_approx(&rhs.trans.eta));
                    assert!(lhs.hom.w.matrix().eq_approx(rhs.hom.w.matrix()));
                }
            }
        }
    }

    #[test]
    fn spacetime_action() {
        let s = sys(5, &[1, 3]);
        let p = 5;
        let x = vecp(p, &[1, 1]);
        let t = PAdic::one(p, PREC);
        let (x1, t1) = s.act_spacetime(&s.identity(), &x, &t).unwrap();
        assert!(linalg::vec_eq(&x1, &x) && t1.eq_approx(&t));

        // pure boost at t = 1 translates space by v
        let boost = GalileanElement {
            trans: Translation { u: vecp(p, &[0, 0]), eta: PAdic::zero(p) },
            hom: RotBoost { v: vecp(p, &[2, 5]), w: OrthMatrix::identity(s.bspace()) },
        };
        let (x1, t1) = s.act_spacetime(&boost, &x, &t).unwrap();
        assert!(linalg::vec_eq(&x1, &vecp(p, &[3, 6])));
        assert!(t1.eq_approx(&t));

        // action axiom
        let els = sample_elements(&s);
        for a in &els {
            for b in &els {
                let (xb, tb) = s.act_spacetime(b, &x, &t).unwrap();
                let lhs = s.act_spacetime(a, &xb, &tb).unwrap();
                let rhs = s.act_spacetime(&s.compose(a, b).unwrap(), &x, &t).unwrap();
                assert!(linalg::vec_eq(&lhs.0, &rhs.0) && lhs.1.eq_approx(&rhs.1));
            }
        }
    }

    #[test]
    fn dual_action_is_contragredient() {
        let s = sys(5, &[1, 3]);
        let p = 5;
        let xi = GalDualPoint { xi: vecp(p, &[2, 1]), t: PAdic::from_int(p, 4, PREC).unwrap() };
        let tr = Translation { u: vecp(p, &[1, 3]), eta: PAdic::from_int(p, 2, PREC).unwrap() };
        for r in sample_elements(&s) {
            let lhs = s
                .duality(&s.hom_act_translation(&r.hom, &tr).unwrap(), &s.dual_act(&r.hom, &xi).unwrap())
                .unwrap();
            let rhs = s.duality(&tr, &xi).unwrap();
            assert!(lhs.eq_approx(&rhs));
        }
        // W = I instance: (xi, t - (xi, v))
        let boost = RotBoost { v: vecp(p, &[1, 1]), w: OrthMatrix::identity(s.bspace()) };
        let moved = s.dual_act(&boost, &xi).unwrap();
        assert!(linalg::vec_eq(&moved.xi, &xi.xi));
        let expect = xi.t.sub(&s.dot(&xi.xi, &boost.v).unwrap()).unwrap();
        assert!(moved.t.eq_approx(&expect));
    }

    #[test]
    fn theta_is_a_cocycle_and_additive_in_tau() {
        let s = sys(5, &[1, 3]);
        let p = 5;
        let tau = PAdic::from_int(p, 3, PREC).unwrap();
        let els = sample_elements(&s);
        let pairs: Vec<(RotBoost, RotBoost)> = els
            .iter()
            .flat_map(|a| els.iter().map(move |b| (a.hom.clone(), b.hom.clone())))
            .collect();
        let theta = ThetaTau { tau: tau.clone() };
        let report = cocycle::verify_cocycle(&s, &theta, &pairs).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);

        // zero boost / zero tau vanish
        let z = s.theta_tau(&tau, &s.hom_identity()).unwrap();
        assert!(linalg::vec_is_zero(&z.xi) && z.t.is_zero());
        let z = s.theta_tau(&PAdic::zero(p), &els[1].hom).unwrap();
        assert!(linalg::vec_is_zero(&z.xi) && z.t.is_zero());

        // additivity in tau
        let tau2 = PAdic::from_int(p, 7, PREC).unwrap();
        for r in &els {
            let lhs = s.theta_tau(&tau.add(&tau2).unwrap(), &r.hom).unwrap();
            let rhs = s
                .dual_add(&s.theta_tau(&tau, &r.hom).unwrap(), &s.theta_tau(&tau2, &r.hom).unwrap())
                .unwrap();
            assert!(s.dual_eq(&lhs, &rhs));
        }
    }

    #[test]
    fn perturbed_theta_fails() {
        let s = sys(5, &[1, 3]);
        let tau = PAdic::from_int(5, 3, PREC).unwrap();
        let els = sample_elements(&s);
        let pairs: Vec<(RotBoost, RotBoost)> = els
            .iter()
            .flat_map(|a| els.iter().map(move |b| (a.hom.clone(), b.hom.clone())))
            .collect();
        let bad = cocycle::OffsetCocycle {
            inner: ThetaTau { tau },
            offset: GalDualPoint { xi: vecp(5, &[1, 0]), t: PAdic::zero(5) },
        };
        let report = cocycle::verify_cocycle(&s, &bad, &pairs).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn multiplier_identities() {
        let s = sys(5, &[1, 3]);
        let p = 5;
        let tau = PAdic::from_int(p, 2, PREC).unwrap();
        let els = sample_elements(&s);
        let split: Vec<(Translation, RotBoost)> =
            els.iter().map(|r| (r.trans.clone(), r.hom.clone())).collect();
        let mut triples = Vec::new();
        for a in &split {
            for b in &split {
                for c in &split {
                    triples.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
        let e = (
            Translation { u: vecp(p, &[0, 0]), eta: PAdic::zero(p) },
            s.hom_identity(),
        );
        let m = SchrodingerMultiplier { tau: tau.clone() };
        let report = cocycle::verify_multiplier(&s, &m, &e, &triples).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);

        // tau = 0 is identically zero
        let m0 = SchrodingerMultiplier { tau: PAdic::zero(p) };
        for (a, b) in [(&split[1], &split[2]), (&split[2], &split[3])] {
            assert!(m0.eval(&s, a, b).unwrap().is_zero());
        }

        // the sign-flipped control fails on some triple
        let flipped = SignFlippedMultiplier { tau: tau.clone() };
        let report = cocycle::verify_multiplier(&s, &flipped, &e, &triples).unwrap();
        assert!(!report.passed());

        // m_tau agrees with the multiplier assembled from (0, theta_tau)
        let assembled = AssembledMultiplier {
            n_g: ZeroGroupMultiplier { prime: p },
            theta: ThetaTau { tau: tau.clone() },
        };
        for a in &split {
            for b in &split {
                assert_eq!(m.eval(&s, a, b).unwrap(), assembled.eval(&s, a, b).unwrap());
            }
        }
    }

    #[test]
    fn affine_action_matches_displayed_formula() {
        let s = sys(5, &[1, 3]);
        let p = 5;
        let tau = PAdic::from_int(p, 2, PREC).unwrap();
        let x = GalDualPoint { xi: vecp(p, &[1, 4]), t: PAdic::from_int(p, 7, PREC).unwrap() };
        for r in sample_elements(&s) {
            let lhs = s.affine_act(&tau, &r.hom, &x).unwrap();
            // (W xi + 2 tau v, t - (W xi, v) - tau (v, v))
            let wxi = r.hom.w.apply(&x.xi).unwrap();
            let two_tau = PAdic::from_int(p, 2, PREC).unwrap().mul(&tau).unwrap();
            let exp_xi = linalg::vec_add(&wxi, &linalg::vec_scale(&two_tau, &r.hom.v).unwrap()).unwrap();
            let exp_t = x
                .t
                .sub(&s.dot(&wxi, &r.hom.v).unwrap())
                .unwrap()
                .sub(&tau.mul(&s.dot(&r.hom.v, &r.hom.v).unwrap()).unwrap())
                .unwrap();
            assert!(linalg::vec_eq(&lhs.xi, &exp_xi));
            assert!(lhs.t.eq_approx(&exp_t));
        }
        // generic affine action via the cocycle module agrees
        let theta = ThetaTau { tau: tau.clone() };
        for r in sample_elements(&s) {
            let lhs = s.affine_act(&tau, &r.hom, &x).unwrap();
            let rhs = cocycle::affine_act(&s, &theta, &r.hom, &x).unwrap();
            assert!(s.dual_eq(&lhs, &rhs));
        }
    }

    #[test]
    fn invariant_and_chart() {
        let s = sys(5, &[1, 3]);
        let p = 5;
        let tau = PAdic::from_int(p, 2, PREC).unwrap();
        // M((0, a/4tau)) = a on every square class representative
        for cls in crate::padic::SquareClass::all(p) {
            let a = cls.to_padic(PREC);
            let base = s.orbit_base_point(&tau, &a).unwrap();
            assert!(s.invariant_m(&tau, &base).unwrap().eq_approx(&a));
        }
        // invariance along the affine action
        let a = PAdic::from_int(p, 7, PREC).unwrap();
        let x = s.orbit_chart(&tau, &a, &vecp(p, &[1, 2])).unwrap();
        for r in sample_elements(&s) {
            let moved = s.affine_act(&tau, &r.hom, &x).unwrap();
            assert!(s.invariant_m(&tau, &moved).unwrap().eq_approx(&a));
        }
        // chart is a section and M(chart(xi)) = a
        for xi in [vecp(p, &[0, 0]), vecp(p, &[1, 2]), vecp(p, &[-3, 5])] {
            let pt = s.orbit_chart(&tau, &a, &xi).unwrap();
            assert!(s.invariant_m(&tau, &pt).unwrap().eq_approx(&a));
            assert!(linalg::vec_eq(&s.unchart(&pt), &xi));
        }
        // (xi / 2 tau, I) carries the base point to the chart point
        let xi = vecp(p, &[2, 3]);
        let two_tau = PAdic::from_int(p, 2, PREC).unwrap().mul(&tau).unwrap();
        let mover = RotBoost {
            v: xi.iter().map(|c| c.div(&two_tau).unwrap()).collect(),
            w: OrthMatrix::identity(s.bspace()),
        };
        let base = s.orbit_base_point(&tau, &a).unwrap();
        let moved = s.affine_act(&tau, &mover, &base).unwrap();
        assert!(s.dual_eq(&moved, &s.orbit_chart(&tau, &a, &xi).unwrap()));
        // chart-conjugated action is xi -> W xi + 2 tau v, with a absent
        for r in sample_elements(&s) {
            let conj = s.unchart(&s.affine_act(&tau, &r.hom, &s.orbit_chart(&tau, &a, &xi).unwrap()).unwrap());
            let expect = linalg::vec_add(
                &r.hom.w.apply(&xi).unwrap(),
                &linalg::vec_scale(&two_tau, &r.hom.v).unwrap(),
            )
            .unwrap();
            assert!(linalg::vec_eq(&conj, &expect));
        }
    }

    #[test]
    fn stabilizer_of_base_point() {
        let s = sys(5, &[1, 3]);
        let p = 5;
        let tau = PAdic::from_int(p, 2, PREC).unwrap();
        let a = PAdic::from_int(p, 7, PREC).unwrap();
        let w = rot(&s, &[1, 2], &[0, 1]);
        assert!(s
            .stabilizer_check(&tau, &a, &RotBoost { v: vecp(p, &[0, 0]), w })
            .unwrap());
        assert!(!s
            .stabilizer_check(
                &tau,
                &a,
                &RotBoost { v: vecp(p, &[1, 0]), w: OrthMatrix::identity(s.bspace()) }
            )
            .unwrap());
    }

    #[test]
    fn translation_phase_factorizes() {
        let s = sys(5, &[1, 3]);
        let p = 5;
        let tau = PAdic::from_int(p, 2, PREC).unwrap();
        let a = PAdic::from_ratio(p, 7, 5, PREC).unwrap();
        let four_tau = PAdic::from_int(p, 8, PREC).unwrap();
        let tr = Translation { u: vecp(p, &[1, 2]), eta: PAdic::from_ratio(p, 3, 5, PREC).unwrap() };
        let zero_a = PAdic::zero(p);
        for xi in [vecp(p, &[0, 0]), vecp(p, &[1, 3]), vecp(p, &[2, -1])] {
            let full = s.translation_phase(&tau, &a, &tr, &xi).unwrap();
            let pulled = tr.eta.mul(&a).unwrap().div(&four_tau).unwrap().additive_character().unwrap();
            let rest = s.translation_phase(&tau, &zero_a, &tr, &xi).unwrap();
            assert_eq!(full, pulled.add(&rest).unwrap());
        }
        // u = 0, eta = 0 gives phase zero
        let none = Translation { u: vecp(p, &[0, 0]), eta: PAdic::zero(p) };
        assert!(s.translation_phase(&tau, &a, &none, &vecp(p, &[1, 1])).unwrap().is_zero());
    }

    #[test]
    fn coboundary_equivalence_of_affine_actions() {
        // with theta' = theta + (g -> g[xi0] - xi0):
        // g_{theta'}{x} = g_theta{x + xi0} - xi0
        let s = sys(5, &[1, 3]);
        let p = 5;
        let tau = PAdic::from_int(p, 3, PREC).unwrap();
        let xi0 = GalDualPoint { xi: vecp(p, &[1, 1]), t: PAdic::from_int(p, 2, PREC).unwrap() };
        let theta = ThetaTau { tau };
        let shifted = cocycle::SumCocycle {
            first: ThetaTau { tau: PAdic::from_int(p, 3, PREC).unwrap() },
            second: cocycle::Coboundary { base: xi0.clone() },
        };
        let x = GalDualPoint { xi: vecp(p, &[4, 2]), t: PAdic::from_int(p, -1, PREC).unwrap() };
        for r in sample_elements(&s) {
            let lhs = cocycle::affine_act(&s, &shifted, &r.hom, &x).unwrap();
            let rhs = s
                .dual_add(
                    &cocycle::affine_act(&s, &theta, &r.hom, &s.dual_add(&x, &xi0).unwrap()).unwrap(),
                    &s.dual_neg(&xi0),
                )
                .unwrap();
            assert!(s.dual_eq(&lhs, &rhs));
        }
    }
}
