//! Orthogonal groups over Q_p: reflections, Cartan-Dieudonne style
//! decomposition into reflections, the spinor norm, Witt-extension
//! witnesses, and the adjoint covering of SO(3) by SL(2, Q_p).

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::padic::{PAdic, SquareClass};
use crate::quadform::{diagonalize_gram, QuadSpace};

/// A nondegenerate symmetric bilinear space with a cached orthogonal basis.
#[derive(Clone, Debug)]
pub struct BilinearSpace {
    prime: u64,
    gram: Matrix,
    /// columns form an orthogonal basis
    diag_basis: Matrix,
}

impl BilinearSpace {
    pub fn from_gram(prime: u64, gram: Matrix) -> Result<BilinearSpace> {
        let (_, basis) = diagonalize_gram(&gram)?;
        Ok(BilinearSpace { prime, gram, diag_basis: basis })
    }

    pub fn from_quadspace(space: &QuadSpace) -> BilinearSpace {
        BilinearSpace {
            prime: space.prime(),
            gram: space.gram(),
            diag_basis: Matrix::identity(space.prime(), space.dim(), space.work_prec()),
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.gram.n_rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn work_prec(&self) -> u32 {
        self.gram.work_prec()
    }

    pub fn pair(&self, x: &[PAdic], y: &[PAdic]) -> Result<PAdic> {
        linalg::form_pair(&self.gram, x, y)
    }

    pub fn quad(&self, x: &[PAdic]) -> Result<PAdic> {
        self.pair(x, x)
    }

    /// Completes a primitive-or-not null vector to a hyperbolic pair:
    /// returns w with B(r, w) = 1 and Q(w) = 0 to precision.
    pub fn hyperbolic_partner(&self, r: &[PAdic]) -> Result<Vec<PAdic>> {
        let gr = self.gram.mul_vec(r)?; // B(r, e_j) as a vector
        let j = (0..self.dim())
            .filter(|&j| !gr[j].is_zero())
            .min_by_key(|&j| gr[j].valuation().expect("nonzero"))
            .ok_or(Error::ZeroInput)?;
        let mut w0 = vec![PAdic::zero(self.prime); self.dim()];
        w0[j] = gr[j].inv()?;
        let q0 = self.quad(&w0)?;
        let two = PAdic::from_int(self.prime, 2, self.work_prec())?;
        linalg::vec_sub(&w0, &linalg::vec_scale(&q0.div(&two)?, r)?)
    }

    /// An anisotropic vector orthogonal to `y` (dim must be at least 3).
    pub fn anisotropic_in_perp(&self, y: &[PAdic]) -> Result<Vec<PAdic>> {
        let gy = self.gram.mul_vec(y)?;
        let pivot = (0..self.dim())
            .filter(|&j| !gy[j].is_zero())
            .min_by_key(|&j| gy[j].valuation().expect("nonzero"))
            .ok_or(Error::ZeroInput)?;
        let mut basis = Vec::new();
        for i in 0..self.dim() {
            if i == pivot {
                continue;
            }
            let mut v = vec![PAdic::zero(self.prime); self.dim()];
            v[i] = PAdic::one(self.prime, self.work_prec());
            if !gy[i].is_zero() {
                let c = gy[i].div(&gy[pivot])?;
                v[pivot] = c.neg();
            }
            basis.push(v);
        }
        for v in &basis {
            if !self.quad(v)?.is_zero() {
                return Ok(v.clone());
            }
        }
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let s = linalg::vec_add(&basis[i], &basis[j])?;
                if !self.quad(&s)?.is_zero() {
                    return Ok(s);
                }
            }
        }
        Err(Error::DegenerateConfiguration("no anisotropic vector orthogonal to the target"))
    }
}

/// A matrix certified to preserve the bilinear form of its space.
#[derive(Clone, Debug)]
pub struct OrthMatrix {
    mat: Matrix,
    det_sign: i8,
}

impl OrthMatrix {
    pub fn certify(space: &BilinearSpace, mat: Matrix) -> Result<OrthMatrix> {
        let mtam = mat.transpose().mul(space.gram())?.mul(&mat)?;
        if !mtam.eq_approx(space.gram()) {
            return Err(Error::NotOrthogonal);
        }
        let det = mat.det()?;
        if det.is_zero() {
            return Err(Error::InsufficientPrecision {
                op: "determinant of an orthogonal matrix",
                needed: 1,
                available: det.abs_precision(),
            });
        }
        let one = PAdic::one(space.prime(), mat.work_prec());
        let det_sign = if det.eq_approx(&one) {
            1
        } else if det.eq_approx(&one.neg()) {
            -1
        } else {
            return Err(Error::NotOrthogonal);
        };
        Ok(OrthMatrix { mat, det_sign })
    }

    pub fn identity(space: &BilinearSpace) -> OrthMatrix {
        OrthMatrix {
            mat: Matrix::identity(space.prime(), space.dim(), space.work_prec()),
            det_sign: 1,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    pub fn is_special(&self) -> bool {
        self.det_sign == 1
    }

    pub fn apply(&self, v: &[PAdic]) -> Result<Vec<PAdic>> {
        self.mat.mul_vec(v)
    }

    /// self after other (matrix product self * other).
    pub fn compose(&self, other: &OrthMatrix) -> Result<OrthMatrix> {
        Ok(OrthMatrix { mat: self.mat.mul(&other.mat)?, det_sign: self.det_sign * other.det_sign })
    }

    pub fn inverse(&self) -> Result<OrthMatrix> {
        Ok(OrthMatrix { mat: self.mat.inverse()?, det_sign: self.det_sign })
    }
}

/// Reflection in an anisotropic vector: x -> x - (2 B(x,v)/Q(v)) v.
pub fn reflection(space: &BilinearSpace, v: &[PAdic]) -> Result<OrthMatrix> {
    let q = space.quad(v)?;
    if q.is_zero() {
        return Err(Error::NullReflectionVector);
    }
    let n = space.dim();
    let gv = space.gram().mul_vec(v)?; // B(e_j, v) per coordinate
    let two = PAdic::from_int(space.prime(), 2, space.work_prec())?;
    let mut mat = Matrix::identity(space.prime(), n, space.work_prec());
    for j in 0..n {
        if gv[j].is_zero() {
            continue;
        }
        let c = two.mul(&gv[j])?.div(&q)?;
        for i in 0..n {
            let d = c.mul(&v[i])?;
            mat[(i, j)] = mat[(i, j)].sub(&d)?;
        }
    }
    Ok(OrthMatrix { mat, det_sign: -1 })
}

/// Decomposes an orthogonal matrix into reflection vectors whose product (in
/// list order) recomposes it. The greedy basis-fixing pass uses one
/// reflection per orthogonal basis vector in the generic case and two in the
/// degenerate case where the displacement is null.
pub fn cartan_dieudonne(space: &BilinearSpace, m: &OrthMatrix) -> Result<Vec<Vec<PAdic>>> {
    let mut work = m.mat.clone();
    let mut refl: Vec<Vec<PAdic>> = Vec::new();
    for k in 0..space.dim() {
        let b = space.diag_basis.col(k);
        let img = work.mul_vec(&b)?;
        let u = linalg::vec_sub(&img, &b)?;
        if linalg::vec_is_zero(&u) {
            continue;
        }
        let qu = space.quad(&u)?;
        if !qu.is_zero() {
            let r = reflection(space, &u)?;
            work = r.mat.mul(&work)?;
            refl.push(u);
        } else {
            // Q(img - b) + Q(img + b) = 4 Q(b) != 0, so the sum is
            // anisotropic; seeing it as zero can only be precision loss
            let w = linalg::vec_add(&img, &b)?;
            let qw = space.quad(&w)?;
            if qw.is_zero() {
                return Err(Error::InsufficientPrecision {
                    op: "reflection norm in the decomposition",
                    needed: qw.abs_precision() + 1,
                    available: qw.abs_precision(),
                });
            }
            let r1 = reflection(space, &w)?; // sends img to -b
            let r2 = reflection(space, &b)?;
            work = r2.mat.mul(&r1.mat.mul(&work)?)?;
            refl.push(w);
            refl.push(b);
        }
    }
    let id = Matrix::identity(space.prime(), space.dim(), space.work_prec());
    if !work.eq_approx(&id) {
        return Err(Error::DegenerateConfiguration("reflection chain did not reach the identity"));
    }
    Ok(refl)
}

/// The spinor norm: product of the square classes of the norms of any
/// reflection decomposition.
pub fn spinor_norm(space: &BilinearSpace, m: &OrthMatrix) -> Result<SquareClass> {
    if !m.is_special() {
        return Err(Error::NotSpecial);
    }
    let refl = cartan_dieudonne(space, m)?;
    let mut acc = SquareClass::trivial(space.prime());
    for v in &refl {
        acc = acc.mul(&space.quad(v)?.square_class()?)?;
    }
    Ok(acc)
}

/// Kernel-of-spinor-norm test for membership in the image of the spin
/// covering.
pub fn in_spin_image(space: &BilinearSpace, m: &OrthMatrix) -> Result<bool> {
    Ok(spinor_norm(space, m)?.is_trivial())
}

fn proportional(z: &[PAdic], y: &[PAdic]) -> Result<Option<PAdic>> {
    let j = (0..z.len())
        .filter(|&j| !z[j].is_zero())
        .min_by_key(|&j| z[j].valuation().expect("nonzero"));
    let j = match j {
        Some(j) => j,
        None => return Ok(None),
    };
    if y[j].is_zero() {
        return Ok(None);
    }
    let lambda = y[j].div(&z[j])?;
    let diff = linalg::vec_sub(y, &linalg::vec_scale(&lambda, z)?)?;
    Ok(if linalg::vec_is_zero(&diff) { Some(lambda) } else { None })
}

/// The isometry fixing the complement of a hyperbolic pair (x, x*) and
/// scaling x by lambda, x* by 1/lambda.
fn null_scaling(space: &BilinearSpace, x: &[PAdic], x_star: &[PAdic], lambda: &PAdic) -> Result<OrthMatrix> {
    let n = space.dim();
    let one = PAdic::one(space.prime(), space.work_prec());
    let lm1 = lambda.sub(&one)?;
    let lim1 = lambda.inv()?.sub(&one)?;
    let gx = space.gram().mul_vec(x)?;
    let gxs = space.gram().mul_vec(x_star)?;
    let mut mat = Matrix::identity(space.prime(), n, space.work_prec());
    for j in 0..n {
        // column j: e_j + (l-1) B(x*, e_j) x + (1/l - 1) B(x, e_j) x*
        let c1 = lm1.mul(&gxs[j])?;
        let c2 = lim1.mul(&gx[j])?;
        for i in 0..n {
            let t = c1.mul(&x[i])?.add(&c2.mul(&x_star[i])?)?;
            mat[(i, j)] = mat[(i, j)].add(&t)?;
        }
    }
    OrthMatrix::certify(space, mat)
}

/// Extends a partial isometry (x_i -> y_i) to the whole space by chained
/// reflections. Inner products of sources and targets must agree.
pub fn witt_extension(space: &BilinearSpace, pairs: &[(Vec<PAdic>, Vec<PAdic>)]) -> Result<OrthMatrix> {
    for (i, (xi, yi)) in pairs.iter().enumerate() {
        for (xj, yj) in pairs.iter().take(i + 1) {
            let bx = space.pair(xi, xj)?;
            let by = space.pair(yi, yj)?;
            if !bx.eq_approx(&by) {
                return Err(Error::GramMismatch);
            }
        }
    }
    let sources: Vec<Vec<PAdic>> = pairs.iter().map(|(x, _)| x.clone()).collect();
    if linalg::select_independent(&sources, sources.len()).is_err() {
        return Err(Error::DegenerateConfiguration("sources are not linearly independent"));
    }

    let mut m = OrthMatrix::identity(space);
    for (x, y) in pairs {
        let z = m.apply(x)?;
        if linalg::vec_eq(&z, y) {
            continue;
        }
        let u = linalg::vec_sub(&z, y)?;
        let qu = space.quad(&u)?;
        if !qu.is_zero() {
            // the reflection in z - y swaps z and y and fixes earlier targets
            m = reflection(space, &u)?.compose(&m)?;
            continue;
        }
        let qy = space.quad(y)?;
        if !qy.is_zero() {
            let w = linalg::vec_add(&z, y)?;
            let r1 = reflection(space, &w)?; // z -> -y
            let r2 = reflection(space, y)?; // -y -> y
            m = r2.compose(&r1.compose(&m)?)?;
            continue;
        }
        // z and y are null with B(z, y) = 0
        if let Some(lambda) = proportional(&z, y)? {
            let partner = space.hyperbolic_partner(&z)?;
            m = null_scaling(space, &z, &partner, &lambda)?.compose(&m)?;
            continue;
        }
        // orthogonal null lines: route through a null vector pairing with both
        let z_star = space.hyperbolic_partner(&z)?;
        let mid = if !space.pair(y, &z_star)?.is_zero() {
            z_star
        } else {
            // y lies in span(z, z*)-perp; take z* + (a partner of y there)
            let y_star = partner_in_perp(space, &z, &z_star, y)?;
            linalg::vec_add(&z_star, &y_star)?
        };
        let r1 = reflection(space, &linalg::vec_sub(&z, &mid)?)?; // z -> mid
        let r2 = reflection(space, &linalg::vec_sub(&mid, y)?)?; // mid -> y
        m = r2.compose(&r1.compose(&m)?)?;
    }

    for (x, y) in pairs {
        if !linalg::vec_eq(&m.apply(x)?, y) {
            return Err(Error::DegenerateConfiguration("extension broke an earlier pair"));
        }
    }
    OrthMatrix::certify(space, m.mat)
}

/// A hyperbolic partner of the null vector y inside the orthogonal
/// complement of the hyperbolic pair (z, z*).
fn partner_in_perp(
    space: &BilinearSpace,
    z: &[PAdic],
    z_star: &[PAdic],
    y: &[PAdic],
) -> Result<Vec<PAdic>> {
    let n = space.dim();
    let two = PAdic::from_int(space.prime(), 2, space.work_prec())?;
    let mut best: Option<(Vec<PAdic>, i64)> = None;
    for i in 0..n {
        let mut e = vec![PAdic::zero(space.prime()); n];
        e[i] = PAdic::one(space.prime(), space.work_prec());
        // project off the hyperbolic plane: w = e - B(e, z*) z - B(e, z) z*
        let bzs = space.pair(&e, z_star)?;
        let bz = space.pair(&e, z)?;
        let mut w = e;
        w = linalg::vec_sub(&w, &linalg::vec_scale(&bzs, z)?)?;
        w = linalg::vec_sub(&w, &linalg::vec_scale(&bz, z_star)?)?;
        let by = space.pair(y, &w)?;
        if let Some(v) = by.valuation() {
            if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                let scaled = linalg::vec_scale(&by.inv()?, &w)?;
                best = Some((scaled, v));
            }
        }
    }
    let (w, _) = best.ok_or(Error::DegenerateConfiguration("target vector pairs with nothing in the complement"))?;
    // make it null: w - (Q(w)/2) y
    let q = space.quad(&w)?;
    linalg::vec_sub(&w, &linalg::vec_scale(&q.div(&two)?, y)?)
}

/// An element of SL(2, Q_p).
#[derive(Clone, Debug)]
pub struct Sl2 {
    pub a: PAdic,
    pub b: PAdic,
    pub c: PAdic,
    pub d: PAdic,
}

impl Sl2 {
    pub fn new(a: PAdic, b: PAdic, c: PAdic, d: PAdic) -> Result<Sl2> {
        let p = a.prime();
        let det = a.mul(&d)?.sub(&b.mul(&c)?)?;
        if !det.eq_approx(&PAdic::one(p, det.rel_precision().max(1))) {
            return Err(Error::Parse("determinant of an SL(2) element must be 1".into()));
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub fn identity(p: u64, prec: u32) -> Sl2 {
        Sl2 {
            a: PAdic::one(p, prec),
            b: PAdic::zero(p),
            c: PAdic::zero(p),
            d: PAdic::one(p, prec),
        }
    }

    pub fn mul(&self, o: &Sl2) -> Result<Sl2> {
        Ok(Sl2 {
            a: self.a.mul(&o.a)?.add(&self.b.mul(&o.c)?)?,
            b: self.a.mul(&o.b)?.add(&self.b.mul(&o.d)?)?,
            c: self.c.mul(&o.a)?.add(&self.d.mul(&o.c)?)?,
            d: self.c.mul(&o.b)?.add(&self.d.mul(&o.d)?)?,
        })
    }

    pub fn neg(&self) -> Sl2 {
        Sl2 { a: self.a.neg(), b: self.b.neg(), c: self.c.neg(), d: self.d.neg() }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 { a: self.d.clone(), b: self.b.neg(), c: self.c.neg(), d: self.a.clone() }
    }
}

/// The trace-form space of 2x2 traceless matrices in the ordered basis
/// (X, H, Y): K(H, H) = 8, K(X, Y) = K(Y, X) = 4, all other pairings 0.
pub fn killing_space(p: u64, prec: u32) -> Result<BilinearSpace> {
    let z = || PAdic::zero(p);
    let four = PAdic::from_int(p, 4, prec)?;
    let eight = PAdic::from_int(p, 8, prec)?;
    let gram = Matrix::from_rows(vec![
        vec![z(), z(), four.clone()],
        vec![z(), eight, z()],
        vec![four, z(), z()],
    ])?;
    BilinearSpace::from_gram(p, gram)
}

/// The adjoint action of g on traceless 2x2 matrices in the basis (X, H, Y).
/// Lands in the special orthogonal group of the trace form; the kernel is
/// {1, -1}.
pub fn sl2_adjoint(space: &BilinearSpace, g: &Sl2) -> Result<OrthMatrix> {
    let p = g.a.prime();
    let prec = [&g.a, &g.b, &g.c, &g.d]
        .iter()
        .map(|x| x.rel_precision())
        .max()
        .unwrap_or(crate::padic::DEFAULT_PRECISION)
        .max(1);
    let one = PAdic::one(p, prec);
    let zero = PAdic::zero(p);
    // basis matrices as (m00, m01, m10, m11)
    let basis = [
        [zero.clone(), one.clone(), zero.clone(), zero.clone()], // X
        [one.clone(), zero.clone(), zero.clone(), one.neg()],    // H
        [zero.clone(), zero.clone(), one.clone(), zero.clone()], // Y
    ];
    let inv = g.inverse();
    let mut mat = Matrix::zero(p, 3, 3);
    for (col, m) in basis.iter().enumerate() {
        // t = g * m
        let t = [
            g.a.mul(&m[0])?.add(&g.b.mul(&m[2])?)?,
            g.a.mul(&m[1])?.add(&g.b.mul(&m[3])?)?,
            g.c.mul(&m[0])?.add(&g.d.mul(&m[2])?)?,
            g.c.mul(&m[1])?.add(&g.d.mul(&m[3])?)?,
        ];
        // u = t * g^{-1}
        let u = [
            t[0].mul(&inv.a)?.add(&t[1].mul(&inv.c)?)?,
            t[0].mul(&inv.b)?.add(&t[1].mul(&inv.d)?)?,
            t[2].mul(&inv.a)?.add(&t[3].mul(&inv.c)?)?,
            t[2].mul(&inv.b)?.add(&t[3].mul(&inv.d)?)?,
        ];
        // coordinates: X-coefficient u01, H-coefficient u00, Y-coefficient u10
        mat[(0, col)] = u[1].clone();
        mat[(1, col)] = u[0].clone();
        mat[(2, col)] = u[2].clone();
    }
    let m = OrthMatrix::certify(space, mat)?;
    if !m.is_special() {
        return Err(Error::Internal("adjoint image must be special orthogonal"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PREC: u32 = 24;

    fn qs(p: u64, entries: &[i64]) -> BilinearSpace {
        let rats: Vec<(i64, i64)> = entries.iter().map(|&n| (n, 1)).collect();
        BilinearSpace::from_quadspace(&QuadSpace::from_rationals(p, &rats, PREC).unwrap())
    }

    fn vecp(p: u64, entries: &[i64]) -> Vec<PAdic> {
        entries.iter().map(|&n| PAdic::from_int(p, n, PREC).unwrap()).collect()
    }

    #[test]
    fn reflection_examples() {
        let space = qs(5, &[1, 1]);
        let e1 = vecp(5, &[1, 0]);
        let r = reflection(&space, &e1).unwrap();
        let expect = Matrix::diagonal(&vecp(5, &[-1, 1]), 5);
        assert!(r.matrix().eq_approx(&expect));
        assert_eq!(r.det_sign(), -1);

        for v in [vecp(5, &[2, 3]), vecp(5, &[1, 7]), vecp(5, &[4, 1])] {
            let r = reflection(&space, &v).unwrap();
            assert!(linalg::vec_eq(&r.apply(&v).unwrap(), &linalg::vec_neg(&v)));
            let sq = r.compose(&r).unwrap();
            assert!(sq.matrix().eq_approx(&Matrix::identity(5, 2, PREC)));
        }

        let null = vecp(5, &[1, 2]); // 1 + 4 = 5: unit? no, norm 5 is fine
        assert!(reflection(&space, &null).is_ok());
        let really_null = vecp(5, &[0, 0]);
        assert_eq!(reflection(&space, &really_null).unwrap_err(), Error::NullReflectionVector);
    }

    #[test]
    fn cartan_dieudonne_examples() {
        let space = qs(5, &[1, 1, 3]);
        let id = OrthMatrix::identity(&space);
        assert!(cartan_dieudonne(&space, &id).unwrap().is_empty());

        let v = vecp(5, &[1, 2, 1]);
        let r = reflection(&space, &v).unwrap();
        let refl = cartan_dieudonne(&space, &r).unwrap();
        let mut prod = OrthMatrix::identity(&space);
        for u in &refl {
            prod = prod.compose(&reflection(&space, u).unwrap()).unwrap();
        }
        assert!(prod.matrix().eq_approx(r.matrix()));

        // a product of four reflections recomposes
        let vs = [vecp(5, &[1, 1, 0]), vecp(5, &[0, 1, 1]), vecp(5, &[2, 0, 1]), vecp(5, &[1, 3, 2])];
        let mut m = OrthMatrix::identity(&space);
        for v in &vs {
            m = m.compose(&reflection(&space, v).unwrap()).unwrap();
        }
        let refl = cartan_dieudonne(&space, &m).unwrap();
        assert_eq!(refl.len() % 2, 0);
        let mut prod = OrthMatrix::identity(&space);
        for u in &refl {
            prod = prod.compose(&reflection(&space, u).unwrap()).unwrap();
        }
        assert!(prod.matrix().eq_approx(m.matrix()));
    }

    #[test]
    fn spinor_norm_examples() {
        let space = qs(5, &[1, 1, 3]);
        let id = OrthMatrix::identity(&space);
        assert!(spinor_norm(&space, &id).unwrap().is_trivial());

        let v = vecp(5, &[1, 2, 1]);
        let w = vecp(5, &[0, 1, 1]);
        let m = reflection(&space, &v).unwrap().compose(&reflection(&space, &w).unwrap()).unwrap();
        let expected = space
            .quad(&v)
            .unwrap()
            .square_class()
            .unwrap()
            .mul(&space.quad(&w).unwrap().square_class().unwrap())
            .unwrap();
        assert_eq!(spinor_norm(&space, &m).unwrap(), expected);

        assert_eq!(spinor_norm(&space, &reflection(&space, &v).unwrap()).unwrap_err(), Error::NotSpecial);
    }

    #[test]
    fn spinor_norm_on_torus_of_trace_form() {
        // diag(alpha, 1, 1/alpha) on the trace-form space has spinor norm
        // class(alpha) for every square class representative
        for p in [3u64, 5, 7, 2] {
            let space = killing_space(p, PREC).unwrap();
            for cls in SquareClass::all(p) {
                let alpha = cls.to_padic(PREC);
                let mat = Matrix::diagonal(
                    &[alpha.clone(), PAdic::one(p, PREC), alpha.inv().unwrap()],
                    p,
                );
                let m = OrthMatrix::certify(&space, mat).unwrap();
                assert_eq!(spinor_norm(&space, &m).unwrap(), cls, "p={p} alpha={cls}");
                assert_eq!(in_spin_image(&space, &m).unwrap(), cls.is_trivial());
            }
        }
    }

    fn sl2_el(p: u64, a: i64, b: i64, c: i64, d: i64) -> Sl2 {
        Sl2::new(
            PAdic::from_int(p, a, PREC).unwrap(),
            PAdic::from_int(p, b, PREC).unwrap(),
            PAdic::from_int(p, c, PREC).unwrap(),
            PAdic::from_int(p, d, PREC).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn adjoint_examples() {
        let p = 5;
        let space = killing_space(p, PREC).unwrap();
        let id = sl2_adjoint(&space, &Sl2::identity(p, PREC)).unwrap();
        assert!(id.matrix().eq_approx(&Matrix::identity(p, 3, PREC)));

        // diag(a, 1/a) maps to diag(a^2, 1, a^-2)
        let a = PAdic::from_int(p, 2, PREC).unwrap();
        let g = Sl2::new(a.clone(), PAdic::zero(p), PAdic::zero(p), a.inv().unwrap()).unwrap();
        let m = sl2_adjoint(&space, &g).unwrap();
        let a2 = a.mul(&a).unwrap();
        let expect = Matrix::diagonal(&[a2.clone(), PAdic::one(p, PREC), a2.inv().unwrap()], p);
        assert!(m.matrix().eq_approx(&expect));
    }

    #[test]
    fn adjoint_entries_in_closed_form() {
        // image of (a b; c d) in the basis (X, H, Y):
        //   [ a^2   -2ab      -b^2 ]
        //   [ -ac   ad+bc     bd   ]
        //   [ -c^2  2cd       d^2  ]
        let p = 7;
        let space = killing_space(p, PREC).unwrap();
        for (a, b, c) in [(1i64, 2i64, 3i64), (2, 1, 5), (3, -2, 4), (1, 0, 6)] {
            // d = (1 + bc)/a
            let ap = PAdic::from_int(p, a, PREC).unwrap();
            let bp = PAdic::from_int(p, b, PREC).unwrap();
            let cp = PAdic::from_int(p, c, PREC).unwrap();
            let dp = PAdic::one(p, PREC).add(&bp.mul(&cp).unwrap()).unwrap().div(&ap).unwrap();
            let g = Sl2::new(ap.clone(), bp.clone(), cp.clone(), dp.clone()).unwrap();
            let m = sl2_adjoint(&space, &g).unwrap();
            let two = PAdic::from_int(p, 2, PREC).unwrap();
            let checks = [
                (0, 0, ap.mul(&ap).unwrap()),
                (0, 1, two.mul(&ap).unwrap().mul(&bp).unwrap().neg()),
                (0, 2, bp.mul(&bp).unwrap().neg()),
                (1, 0, ap.mul(&cp).unwrap().neg()),
                (1, 1, ap.mul(&dp).unwrap().add(&bp.mul(&cp).unwrap()).unwrap()),
                (1, 2, bp.mul(&dp).unwrap()),
                (2, 0, cp.mul(&cp).unwrap().neg()),
                (2, 1, two.mul(&cp).unwrap().mul(&dp).unwrap()),
                (2, 2, dp.mul(&dp).unwrap()),
            ];
            for (i, j, want) in checks {
                assert!(m.matrix()[(i, j)].eq_approx(&want), "entry ({i},{j}) for g=({a},{b};{c},..)");
            }
        }
    }

    #[test]
    fn adjoint_is_homomorphism_and_even() {
        let p = 5;
        let space = killing_space(p, PREC).unwrap();
        let g = sl2_el(p, 1, 2, 1, 3);
        let h = sl2_el(p, 2, 1, 3, 2);
        let gh = g.mul(&h).unwrap();
        let lhs = sl2_adjoint(&space, &gh).unwrap();
        let rhs = sl2_adjoint(&space, &g).unwrap().compose(&sl2_adjoint(&space, &h).unwrap()).unwrap();
        assert!(lhs.matrix().eq_approx(rhs.matrix()));

        let neg = sl2_adjoint(&space, &g.neg()).unwrap();
        assert!(neg.matrix().eq_approx(sl2_adjoint(&space, &g).unwrap().matrix()));
    }

    #[test]
    fn adjoint_images_pass_spin_test_and_torus_obstruction_holds() {
        for p in [3u64, 5, 7, 2] {
            let space = killing_space(p, PREC).unwrap();
            let g = sl2_el(p, 1, 2, 1, 3);
            assert!(in_spin_image(&space, &sl2_adjoint(&space, &g).unwrap()).unwrap());
            // diag(alpha, 1, 1/alpha) is in the image iff alpha is a square
            for cls in SquareClass::all(p) {
                let alpha = cls.to_padic(PREC);
                let mat = Matrix::diagonal(&[alpha.clone(), PAdic::one(p, PREC), alpha.inv().unwrap()], p);
                let m = OrthMatrix::certify(&space, mat).unwrap();
                assert_eq!(
                    in_spin_image(&space, &m).unwrap(),
                    alpha.is_square().unwrap(),
                    "p={p} alpha={cls}"
                );
            }
        }
    }

    #[test]
    fn killing_gram_matches_ad_trace_oracle() {
        // independent derivation: K(u, v) = trace(ad u ad v) on the basis
        // with ad computed from the commutator table
        // [X,H] = -2X, [X,Y] = H, [H,Y] = -2Y
        let ad_x = [[0i64, -2, 0], [0, 0, 1], [0, 0, 0]];
        let ad_h = [[2, 0, 0], [0, 0, 0], [0, 0, -2]];
        let ad_y = [[0, 0, 0], [-1, 0, 0], [0, 2, 0]];
        let ads = [ad_x, ad_h, ad_y];
        let trace_prod = |m: &[[i64; 3]; 3], n: &[[i64; 3]; 3]| -> i64 {
            let mut t = 0;
            for i in 0..3 {
                for k in 0..3 {
                    t += m[i][k] * n[k][i];
                }
            }
            t
        };
        let space = killing_space(5, PREC).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = PAdic::from_int(5, trace_prod(&ads[i], &ads[j]), PREC).unwrap();
                assert!(space.gram()[(i, j)].eq_approx(&expect), "K entry ({i},{j})");
            }
        }
    }

    #[test]
    fn witt_extension_examples() {
        let space = qs(5, &[1, 1]);
        let x = vecp(5, &[1, 2]);
        let m = witt_extension(&space, &[(x.clone(), x.clone())]).unwrap();
        assert!(linalg::vec_eq(&m.apply(&x).unwrap(), &x));

        let e1 = vecp(5, &[1, 0]);
        let m = witt_extension(&space, &[(e1.clone(), linalg::vec_neg(&e1))]).unwrap();
        assert!(linalg::vec_eq(&m.apply(&e1).unwrap(), &linalg::vec_neg(&e1)));
        assert_eq!(m.det_sign(), -1);

        // null source and target on an isotropic space
        let space = qs(5, &[1, -1, 3]);
        let x = vecp(5, &[1, 1, 0]);
        let y = vecp(5, &[2, 2, 0]);
        let m = witt_extension(&space, &[(x.clone(), y.clone())]).unwrap();
        assert!(linalg::vec_eq(&m.apply(&x).unwrap(), &y));

        // orthogonal null lines
        let space = qs(5, &[1, -1, 1, -1]);
        let x = vecp(5, &[1, 1, 0, 0]);
        let y = vecp(5, &[0, 0, 1, 1]);
        let m = witt_extension(&space, &[(x.clone(), y.clone())]).unwrap();
        assert!(linalg::vec_eq(&m.apply(&x).unwrap(), &y));

        // mismatched inner products rejected
        let bad = witt_extension(&space, &[(x.clone(), vecp(5, &[1, 0, 0, 0]))]);
        assert_eq!(bad.unwrap_err(), Error::GramMismatch);
    }

    #[test]
    fn witt_extension_multi_pair() {
        let space = qs(5, &[1, 1, 3]);
        let x1 = vecp(5, &[1, 0, 0]);
        let x2 = vecp(5, &[0, 1, 0]);
        // rotate inside the first plane: targets with the same Gram matrix
        let y1 = vecp(5, &[0, 1, 0]);
        let y2 = vecp(5, &[-1, 0, 0]);
        let m = witt_extension(&space, &[(x1.clone(), y1.clone()), (x2.clone(), y2.clone())]).unwrap();
        assert!(linalg::vec_eq(&m.apply(&x1).unwrap(), &y1));
        assert!(linalg::vec_eq(&m.apply(&x2).unwrap(), &y2));
    }
}
