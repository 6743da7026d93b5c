//! Conformal compactification of p-adic spacetime: the extension of a
//! quadratic space V by a hyperbolic pair (p, q), the projective null cone,
//! the affine chart J, the embeddings of the affine group and its dilation
//! extension, and constructive transitivity on null lines.
//!
//! Coordinates on the extended space are ordered (p, q, V): the quadratic
//! form is Q0(alpha p + beta q + w) = 2 alpha beta + Q(w), from B(p, q) = 1
//! and Q(x) = B(x, x).
//!
//! Sign convention: in the affine embedding the map e(t, R) sends v to
//! -(t, R v) p. The displayed block shape with +(t, R v) does not preserve
//! Q0 under this bilinear convention; the minus sign is forced by M^t A0 M =
//! A0 and makes the chart intertwining act(embed(t, R), J(w)) = J(R w + t)
//! hold exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::orthogrp::{witt_extension, BilinearSpace, OrthMatrix, reflection};
use crate::padic::PAdic;
use crate::quadform::QuadSpace;

/// Human-readable record of the convention resolved above, carried in
/// reports.
pub const RESOLVED_SIGN_CONVENTION: &str = "e(t,R): v -> -(t,Rv) p; chart action w -> Rw + t";

/// V extended by a hyperbolic pair: coordinates (p, q, V).
#[derive(Clone, Debug)]
pub struct ExtendedSpace {
    base: QuadSpace,
    bspace: BilinearSpace,
}

impl ExtendedSpace {
    pub fn new(base: QuadSpace) -> Result<ExtendedSpace> {
        let p = base.prime();
        let n = base.dim();
        let prec = base.work_prec();
        let mut gram = Matrix::zero(p, n + 2, n + 2);
        gram[(0, 1)] = PAdic::one(p, prec);
        gram[(1, 0)] = PAdic::one(p, prec);
        for i in 0..n {
            gram[(i + 2, i + 2)] = base.diag()[i].clone();
        }
        let bspace = BilinearSpace::from_gram(p, gram)?;
        Ok(ExtendedSpace { base, bspace })
    }

    pub fn prime(&self) -> u64 {
        self.base.prime()
    }

    pub fn base(&self) -> &QuadSpace {
        &self.base
    }

    pub fn bspace(&self) -> &BilinearSpace {
        &self.bspace
    }

    pub fn dim(&self) -> usize {
        self.base.dim() + 2
    }

    pub fn work_prec(&self) -> u32 {
        self.base.work_prec()
    }

    /// Q0 on extended coordinates.
    pub fn quad(&self, x: &[PAdic]) -> Result<PAdic> {
        self.bspace.quad(x)
    }

    /// The distinguished null vector p = (1, 0, ..., 0).
    pub fn p_vector(&self) -> Vec<PAdic> {
        let mut v = vec![PAdic::zero(self.prime()); self.dim()];
        v[0] = PAdic::one(self.prime(), self.work_prec());
        v
    }
}

/// A point of the projective null cone, stored by a canonical
/// representative: all coordinates divided by the first one of minimal
/// valuation, so entries are integral and some entry is exactly 1.
#[derive(Clone, Debug, Serialize)]
pub struct ProjPoint {
    coords: Vec<PAdic>,
}

impl ProjPoint {
    /// Builds a projective point from any nonzero representative on the
    /// cone.
    pub fn new(space: &ExtendedSpace, rep: Vec<PAdic>) -> Result<ProjPoint> {
        if rep.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: rep.len() });
        }
        let q = space.quad(&rep)?;
        if !q.is_zero() {
            return Err(Error::NotNull);
        }
        let coords = Self::normalize(rep)?;
        Ok(ProjPoint { coords })
    }

    fn normalize(rep: Vec<PAdic>) -> Result<Vec<PAdic>> {
        let pivot = (0..rep.len())
            .filter(|&i| !rep[i].is_zero())
            .min_by_key(|&i| (rep[i].valuation().expect("nonzero"), i))
            .ok_or(Error::ZeroInput)?;
        let inv = rep[pivot].inv()?;
        linalg::vec_scale(&inv, &rep)
    }

    pub fn coords(&self) -> &[PAdic] {
        &self.coords
    }

    /// Coefficient of q in the representative: the pairing with the
    /// distinguished null vector p.
    pub fn beta(&self) -> &PAdic {
        &self.coords[1]
    }

    pub fn eq_approx(&self, other: &ProjPoint) -> bool {
        linalg::vec_eq(&self.coords, &other.coords)
    }
}

/// The affine chart J: w -> [-(w,w)/2 : 1 : w].
pub fn chart(space: &ExtendedSpace, w: &[PAdic]) -> Result<ProjPoint> {
    if w.len() != space.base().dim() {
        return Err(Error::DimensionMismatch { expected: space.base().dim(), got: w.len() });
    }
    let p = space.prime();
    let prec = space.work_prec();
    let two = PAdic::from_int(p, 2, prec)?;
    let alpha = space.base().quad(w)?.div(&two)?.neg();
    let mut rep = Vec::with_capacity(space.dim());
    rep.push(alpha);
    rep.push(PAdic::one(p, prec));
    rep.extend(w.iter().cloned());
    ProjPoint::new(space, rep)
}

/// Chart inverse on points with nonzero beta.
pub fn unchart(space: &ExtendedSpace, x: &ProjPoint) -> Result<Vec<PAdic>> {
    if x.coords().len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: x.coords().len() });
    }
    if x.beta().is_zero() {
        return Err(Error::DegenerateConfiguration("point lies outside the affine chart"));
    }
    let inv = x.beta().inv()?;
    let w = linalg::vec_scale(&inv, &x.coords()[2..])?;
    Ok(w)
}

/// True when the point lies in the affine chart (its pairing with p is
/// nonzero to precision).
pub fn is_in_chart(x: &ProjPoint) -> bool {
    !x.beta().is_zero()
}

/// The affine-group embedding
/// (t, R) -> [[1, -(t,t)/2, e(t,R)], [0, 1, 0], [0, t, R]]
/// with e(t, R): v -> -(t, R v) p. Stabilizes the vector p.
pub fn embed_affine(space: &ExtendedSpace, t: &[PAdic], r: &OrthMatrix) -> Result<OrthMatrix> {
    let c = PAdic::one(space.prime(), space.work_prec());
    embed_partial(space, &c, t, r)
}

/// The dilation-extended embedding
/// (c, t, R) -> [[c, -c(t,t)/2, c e(t,R)], [0, 1/c, 0], [0, t, R]].
/// Stabilizes the line through p; c acts on the chart as multiplication.
pub fn embed_partial(space: &ExtendedSpace, c: &PAdic, t: &[PAdic], r: &OrthMatrix) -> Result<OrthMatrix> {
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !r.is_special() {
        return Err(Error::NotSpecial);
    }
    let n = space.base().dim();
    if t.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.len() });
    }
    let p = space.prime();
    let prec = space.work_prec();
    let two = PAdic::from_int(p, 2, prec)?;
    let mut mat = Matrix::zero(p, n + 2, n + 2);
    // column of p
    mat[(0, 0)] = c.clone();
    // column of q
    mat[(0, 1)] = c.mul(&space.base().quad(t)?)?.div(&two)?.neg();
    mat[(1, 1)] = c.inv()?;
    for i in 0..n {
        mat[(i + 2, 1)] = t[i].clone();
    }
    // columns of V: v -> -c (t, R v) p + R v
    for j in 0..n {
        let col = r.matrix().col(j);
        let pairing = space.base().bilinear(t, &col)?;
        mat[(0, j + 2)] = c.mul(&pairing)?.neg();
        for i in 0..n {
            mat[(i + 2, j + 2)] = col[i].clone();
        }
    }
    OrthMatrix::certify(space.bspace(), mat)
}

/// Projective action of an orthogonal matrix on the null cone.
pub fn act_projective(space: &ExtendedSpace, m: &OrthMatrix, x: &ProjPoint) -> Result<ProjPoint> {
    ProjPoint::new(space, m.apply(x.coords())?)
}

/// An element with det 1 carrying the chart origin [q] to the point [p] at
/// infinity: swaps p and q and reflects one base coordinate.
pub fn inversion_like(space: &ExtendedSpace) -> Result<OrthMatrix> {
    let p = space.prime();
    let prec = space.work_prec();
    let n = space.base().dim();
    let mut mat = Matrix::zero(p, n + 2, n + 2);
    mat[(0, 1)] = PAdic::one(p, prec);
    mat[(1, 0)] = PAdic::one(p, prec);
    for i in 0..n {
        mat[(i + 2, i + 2)] = if i == n - 1 {
            PAdic::from_int(p, -1, prec)?
        } else {
            PAdic::one(p, prec)
        };
    }
    OrthMatrix::certify(space.bspace(), mat)
}

/// A special orthogonal matrix carrying one null line to another,
/// constructed by extending the partial isometry x -> y and correcting the
/// determinant by a reflection fixing the target line.
pub fn transitivity_witness(space: &ExtendedSpace, x: &ProjPoint, y: &ProjPoint) -> Result<OrthMatrix> {
    let xs = x.coords().to_vec();
    let ys = y.coords().to_vec();
    let m = witt_extension(space.bspace(), &[(xs.clone(), ys.clone())])?;
    let m = if m.is_special() {
        m
    } else {
        let w = space.bspace().anisotropic_in_perp(&ys)?;
        reflection(space.bspace(), &w)?.compose(&m)?
    };
    let moved = act_projective(space, &m, x)?;
    if !moved.eq_approx(y) {
        return Err(Error::DegenerateConfiguration("transitivity witness missed the target line"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PREC: u32 = 24;

    fn ext(p: u64, entries: &[i64]) -> ExtendedSpace {
        let rats: Vec<(i64, i64)> = entries.iter().map(|&n| (n, 1)).collect();
        ExtendedSpace::new(QuadSpace::from_rationals(p, &rats, PREC).unwrap()).unwrap()
    }

    fn vecp(p: u64, entries: &[i64]) -> Vec<PAdic> {
        entries.iter().map(|&n| PAdic::from_int(p, n, PREC).unwrap()).collect()
    }

    fn rot(space: &ExtendedSpace, v1: &[i64], v2: &[i64]) -> OrthMatrix {
        let b = BilinearSpace::from_quadspace(space.base());
        let p = space.prime();
        reflection(&b, &vecp(p, v1))
            .unwrap()
            .compose(&reflection(&b, &vecp(p, v2)).unwrap())
            .unwrap()
    }

    #[test]
    fn extended_space_has_one_more_hyperbolic_plane() {
        let e = ext(5, &[1, 3]);
        assert_eq!(e.dim(), 4);
        let (qs, _) = QuadSpace::from_gram(5, e.bspace().gram()).unwrap();
        let base_witt = e.base().witt_decompose().unwrap().witt_index;
        assert_eq!(qs.witt_decompose().unwrap().witt_index, base_witt + 1);
    }

    #[test]
    fn chart_points_lie_on_cone() {
        let e = ext(5, &[1, 3]);
        let j0 = chart(&e, &vecp(5, &[0, 0])).unwrap();
        // [0 : 1 : 0]
        assert!(j0.coords()[0].is_zero());
        assert!(j0.coords()[1].eq_approx(&PAdic::one(5, PREC)));
        for w in [vecp(5, &[1, 2]), vecp(5, &[-3, 1]), vecp(5, &[7, 5])] {
            let j = chart(&e, &w).unwrap();
            assert!(e.quad(j.coords()).unwrap().is_zero());
            assert!(is_in_chart(&j));
            let back = unchart(&e, &j).unwrap();
            assert!(linalg::vec_eq(&back, &w));
        }
        // the point [p] is not in the chart
        let p_pt = ProjPoint::new(&e, e.p_vector()).unwrap();
        assert!(!is_in_chart(&p_pt));
    }

    #[test]
    fn embedding_preserves_form_and_fixes_p() {
        let e = ext(5, &[1, 3]);
        let r = rot(&e, &[1, 1], &[2, 1]);
        let t = vecp(5, &[1, 4]);
        let m = embed_affine(&e, &t, &r).unwrap();
        assert!(m.is_special());
        // certify() already checked M^t A M = A; check p is fixed
        let p_vec = e.p_vector();
        assert!(linalg::vec_eq(&m.apply(&p_vec).unwrap(), &p_vec));
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let e = ext(5, &[1, 3]);
        let r1 = rot(&e, &[1, 1], &[2, 1]);
        let r2 = rot(&e, &[1, 2], &[0, 1]);
        let t1 = vecp(5, &[1, 4]);
        let t2 = vecp(5, &[2, -1]);
        let lhs = embed_affine(&e, &t1, &r1)
            .unwrap()
            .compose(&embed_affine(&e, &t2, &r2).unwrap())
            .unwrap();
        // embed(t1, R1) embed(t2, R2) = embed(t1 + R1 t2, R1 R2)
        let t = linalg::vec_add(&t1, &r1.apply(&t2).unwrap()).unwrap();
        let rhs = embed_affine(&e, &t, &r1.compose(&r2).unwrap()).unwrap();
        assert!(lhs.matrix().eq_approx(rhs.matrix()));
    }

    #[test]
    fn chart_intertwines_the_affine_action() {
        let e = ext(5, &[1, 3]);
        let r = rot(&e, &[1, 1], &[2, 1]);
        let t = vecp(5, &[1, 4]);
        let m = embed_affine(&e, &t, &r).unwrap();
        for w in [vecp(5, &[0, 0]), vecp(5, &[1, 2]), vecp(5, &[-2, 3])] {
            let lhs = act_projective(&e, &m, &chart(&e, &w).unwrap()).unwrap();
            let rhs = chart(&e, &linalg::vec_add(&r.apply(&w).unwrap(), &t).unwrap()).unwrap();
            assert!(lhs.eq_approx(&rhs));
        }
    }

    #[test]
    fn dilation_and_stabilizer() {
        let e = ext(5, &[1, 3]);
        let id = OrthMatrix::identity(&BilinearSpace::from_quadspace(e.base()));
        let zero_t = vecp(5, &[0, 0]);
        for c in [2i64, 7, -3] {
            let cp = PAdic::from_int(5, c, PREC).unwrap();
            let d = embed_partial(&e, &cp, &zero_t, &id).unwrap();
            for w in [vecp(5, &[1, 2]), vecp(5, &[0, 1])] {
                let lhs = act_projective(&e, &d, &chart(&e, &w).unwrap()).unwrap();
                let rhs = chart(&e, &linalg::vec_scale(&cp, &w).unwrap()).unwrap();
                assert!(lhs.eq_approx(&rhs), "dilation by {c}");
            }
            // the line [p] is stabilized
            let p_pt = ProjPoint::new(&e, e.p_vector()).unwrap();
            assert!(act_projective(&e, &d, &p_pt).unwrap().eq_approx(&p_pt));
        }
        // c = 1 specializes to the affine embedding
        let r = rot(&e, &[1, 1], &[2, 1]);
        let t = vecp(5, &[3, 1]);
        let one = PAdic::one(5, PREC);
        assert!(embed_partial(&e, &one, &t, &r)
            .unwrap()
            .matrix()
            .eq_approx(embed_affine(&e, &t, &r).unwrap().matrix()));
    }

    #[test]
    fn dilation_conjugates_translations() {
        // D_c embed(t, R) D_c^{-1} = embed(c t, R)
        let e = ext(5, &[1, 3]);
        let id = OrthMatrix::identity(&BilinearSpace::from_quadspace(e.base()));
        let zero_t = vecp(5, &[0, 0]);
        let c = PAdic::from_int(5, 3, PREC).unwrap();
        let d = embed_partial(&e, &c, &zero_t, &id).unwrap();
        let r = rot(&e, &[1, 2], &[0, 1]);
        let t = vecp(5, &[1, 4]);
        let m = embed_affine(&e, &t, &r).unwrap();
        let lhs = d.compose(&m).unwrap().compose(&d.inverse().unwrap()).unwrap();
        let rhs = embed_affine(&e, &linalg::vec_scale(&c, &t).unwrap(), &r).unwrap();
        assert!(lhs.matrix().eq_approx(rhs.matrix()));
    }

    #[test]
    fn conformal_elements_leave_the_chart() {
        let e = ext(5, &[1, 3]);
        let inv = inversion_like(&e).unwrap();
        assert!(inv.is_special());
        let origin = chart(&e, &vecp(5, &[0, 0])).unwrap();
        let moved = act_projective(&e, &inv, &origin).unwrap();
        assert!(!is_in_chart(&moved));
        // while affine images of chart points stay inside
        let m = embed_affine(&e, &vecp(5, &[1, 4]), &rot(&e, &[1, 1], &[2, 1])).unwrap();
        for w in [vecp(5, &[0, 0]), vecp(5, &[2, 1])] {
            let img = act_projective(&e, &m, &chart(&e, &w).unwrap()).unwrap();
            assert!(is_in_chart(&img));
        }
    }

    #[test]
    fn transitivity_witnesses() {
        let e = ext(5, &[1, 3]);
        let p_pt = ProjPoint::new(&e, e.p_vector()).unwrap();
        let targets = [
            chart(&e, &vecp(5, &[0, 0])).unwrap(),
            chart(&e, &vecp(5, &[1, 2])).unwrap(),
            chart(&e, &vecp(5, &[-1, 1])).unwrap(),
            p_pt.clone(),
        ];
        for target in &targets {
            let m = transitivity_witness(&e, &p_pt, target).unwrap();
            assert!(m.is_special());
            assert!(act_projective(&e, &m, &p_pt).unwrap().eq_approx(target));
        }
        // and between generic cone points
        let a = chart(&e, &vecp(5, &[2, 1])).unwrap();
        let b = chart(&e, &vecp(5, &[0, 3])).unwrap();
        let m = transitivity_witness(&e, &a, &b).unwrap();
        assert!(act_projective(&e, &m, &a).unwrap().eq_approx(&b));
    }

    use crate::orthogrp::BilinearSpace;
}
