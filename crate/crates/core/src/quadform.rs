//! Quadratic spaces over Q_p: invariants, isotropy with constructive
//! witnesses, Witt decomposition, and the complement/reduction constructions.
//!
//! A space is a nondegenerate diagonal form `sum a_i x_i^2`. Isotropy is
//! decided by the closed-form local criteria; witnesses are produced
//! constructively (square roots for binary subforms, residue search plus a
//! one-coordinate Hensel lift otherwise) and certified by the valuation of
//! `Q(x)` against the Hensel threshold `2 min_i v(2 a_i x_i) + 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::padic::{hilbert_symbol, legendre, PAdic, SquareClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadSpace {
    p: u64,
    diag: Vec<PAdic>,
}

/// Congruence invariants of a form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormInvariants {
    pub dim: usize,
    pub disc: SquareClass,
    pub hasse: i32,
}

/// Invariants extended by the Witt index; the tuple reported for little
/// groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormProfile {
    pub dim: usize,
    pub disc: SquareClass,
    pub hasse: i32,
    pub witt_index: usize,
}

/// Result of splitting off hyperbolic planes.
#[derive(Clone, Debug)]
pub struct WittData {
    pub witt_index: usize,
    pub kernel: QuadSpace,
}

impl WittData {
    pub fn kernel_invariants(&self) -> Result<FormInvariants> {
        self.kernel.invariants()
    }
}

/// A certified primitive null vector: `Q(vector)` has valuation at least
/// `valuation_bound`, which exceeds the Hensel threshold.
#[derive(Clone, Debug, Serialize)]
pub struct IsotropyWitness {
    pub vector: Vec<PAdic>,
    pub valuation_bound: i64,
    pub liftable: bool,
}

impl QuadSpace {
    pub fn new(p: u64, diag: Vec<PAdic>) -> Result<QuadSpace> {
        for a in &diag {
            if a.prime() != p {
                return Err(Error::PrimeMismatch(p, a.prime()));
            }
            if a.is_zero() {
                return Err(Error::DegenerateForm);
            }
        }
        Ok(QuadSpace { p, diag })
    }

    pub fn from_rationals(p: u64, entries: &[(i64, i64)], prec: u32) -> Result<QuadSpace> {
        let diag = entries
            .iter()
            .map(|(n, d)| PAdic::from_ratio(p, *n, *d, prec))
            .collect::<Result<Vec<_>>>()?;
        QuadSpace::new(p, diag)
    }

    /// Diagonalizes a symmetric Gram matrix by congruence; returns the space
    /// together with the basis (columns) realizing it.
    pub fn from_gram(p: u64, gram: &Matrix) -> Result<(QuadSpace, Matrix)> {
        let (diag, basis) = diagonalize_gram(gram)?;
        Ok((QuadSpace::new(p, diag)?, basis))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[PAdic] {
        &self.diag
    }

    /// Smallest tracked relative precision among the coefficients.
    pub fn work_prec(&self) -> u32 {
        self.diag.iter().map(|a| a.rel_precision()).min().unwrap_or(crate::padic::DEFAULT_PRECISION).max(1)
    }

    pub fn gram(&self) -> Matrix {
        Matrix::diagonal(&self.diag, self.p)
    }

    /// B(x, y) = sum a_i x_i y_i.
    pub fn bilinear(&self, x: &[PAdic], y: &[PAdic]) -> Result<PAdic> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len().max(y.len()) });
        }
        let mut acc = PAdic::zero(self.p);
        for i in 0..self.dim() {
            acc = acc.add(&self.diag[i].mul(&x[i])?.mul(&y[i])?)?;
        }
        Ok(acc)
    }

    /// Q(x) = B(x, x).
    pub fn quad(&self, x: &[PAdic]) -> Result<PAdic> {
        self.bilinear(x, x)
    }

    pub fn disc(&self) -> Result<SquareClass> {
        let mut acc = SquareClass::trivial(self.p);
        for a in &self.diag {
            acc = acc.mul(&a.square_class()?)?;
        }
        Ok(acc)
    }

    pub fn hasse(&self) -> Result<i32> {
        let mut h = 1;
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                h *= hilbert_symbol(&self.diag[i], &self.diag[j])?;
            }
        }
        Ok(h)
    }

    pub fn invariants(&self) -> Result<FormInvariants> {
        Ok(FormInvariants { dim: self.dim(), disc: self.disc()?, hasse: self.hasse()? })
    }

    pub fn profile(&self) -> Result<FormProfile> {
        let inv = self.invariants()?;
        let witt = self.witt_decompose()?;
        Ok(FormProfile { dim: inv.dim, disc: inv.disc, hasse: inv.hasse, witt_index: witt.witt_index })
    }

    /// Local isotropy criteria by dimension.
    pub fn is_isotropic(&self) -> Result<bool> {
        let prec = self.work_prec();
        match self.dim() {
            0 | 1 => Ok(false),
            2 => {
                let d = self.diag[0].mul(&self.diag[1])?.neg();
                Ok(d.square_class()?.is_trivial())
            }
            3 => {
                let disc = self.disc()?.to_padic(prec);
                let minus_one = PAdic::from_int(self.p, -1, prec)?;
                Ok(self.hasse()? == hilbert_symbol(&minus_one, &disc.neg())?)
            }
            4 => {
                let disc = self.disc()?;
                if !disc.is_trivial() {
                    return Ok(true);
                }
                let minus_one = PAdic::from_int(self.p, -1, prec)?;
                Ok(self.hasse()? == hilbert_symbol(&minus_one, &minus_one)?)
            }
            _ => Ok(true),
        }
    }

    /// A certified primitive null vector of an isotropic space.
    pub fn isotropic_vector(&self) -> Result<IsotropyWitness> {
        if !self.is_isotropic()? {
            return Err(Error::AnisotropicForm);
        }
        let v = self.find_null_vector()?;
        self.certify_null(&v)
    }

    /// Certifies that `x` is a primitive null vector: `Q(x)` must be
    /// indistinguishable from zero beyond the Hensel threshold.
    pub fn certify_null(&self, x: &[PAdic]) -> Result<IsotropyWitness> {
        let v = linalg::vec_primitive(x)?;
        let q = self.quad(&v)?;
        let threshold = self.hensel_threshold(&v)?;
        match q.valuation() {
            Some(_) => Err(Error::NotNull),
            None => {
                let bound = q.abs_precision();
                if bound >= threshold {
                    Ok(IsotropyWitness { vector: v, valuation_bound: bound, liftable: true })
                } else {
                    Err(Error::InsufficientPrecision {
                        op: "null certification",
                        needed: threshold,
                        available: bound,
                    })
                }
            }
        }
    }

    /// Hensel threshold 2 min_i v(2 a_i x_i) + 1 for a vector with at least
    /// one nonzero coordinate.
    fn hensel_threshold(&self, x: &[PAdic]) -> Result<i64> {
        let two = PAdic::from_int(self.p, 2, self.work_prec())?;
        let mut d: Option<i64> = None;
        for i in 0..self.dim() {
            if x[i].is_zero() {
                continue;
            }
            let t = two.mul(&self.diag[i])?.mul(&x[i])?;
            let v = t.valuation().expect("nonzero");
            d = Some(d.map_or(v, |c: i64| c.min(v)));
        }
        let d = d.ok_or(Error::ZeroInput)?;
        Ok(2 * d + 1)
    }

    /// Splits hyperbolic planes until the anisotropic kernel remains.
    pub fn witt_decompose(&self) -> Result<WittData> {
        let mut current = self.clone();
        let mut index = 0usize;
        while current.is_isotropic()? {
            let w = current.isotropic_vector()?;
            current = current.null_reduction(&w)?;
            index += 1;
        }
        Ok(WittData { witt_index: index, kernel: current })
    }

    /// True when the form takes the value `m` on some nonzero vector.
    pub fn represents(&self, m: &PAdic) -> Result<bool> {
        if m.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.dim() == 0 {
            return Ok(false);
        }
        if self.is_isotropic()? {
            return Ok(true);
        }
        let mut diag = self.diag.clone();
        diag.push(m.neg());
        QuadSpace::new(self.p, diag)?.is_isotropic()
    }

    /// A vector of norm `m`, when one exists.
    pub fn represent_vector(&self, m: &PAdic) -> Result<Option<Vec<PAdic>>> {
        if m.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.dim() == 0 {
            return Ok(None);
        }
        let prec = self.work_prec();
        if self.dim() == 1 {
            let r = m.div(&self.diag[0])?;
            if !r.is_square()? {
                return Ok(None);
            }
            return Ok(Some(vec![r.sqrt()?]));
        }
        if self.is_isotropic()? {
            // on a hyperbolic pair (v, w): Q(a v + w) = 2 a B(v, w) = 2a
            let witness = self.isotropic_vector()?;
            let v = witness.vector;
            let w = self.hyperbolic_partner(&v)?;
            let two = PAdic::from_int(self.p, 2, prec)?;
            let half_m = m.div(&two)?;
            let x = linalg::vec_add(&linalg::vec_scale(&half_m, &v)?, &w)?;
            return Ok(Some(x));
        }
        // anisotropic: a null vector of <diag, -m> has nonzero last coordinate
        let mut diag = self.diag.clone();
        diag.push(m.neg());
        let aug = QuadSpace::new(self.p, diag)?;
        if !aug.is_isotropic()? {
            return Ok(None);
        }
        let z = aug.find_null_vector()?;
        let last = z[self.dim()].clone();
        if last.is_zero() {
            return Err(Error::Internal("null vector of augmented form lies in an anisotropic subform"));
        }
        let x = z[..self.dim()]
            .iter()
            .map(|c| c.div(&last))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(x))
    }

    /// The restriction of the form to the orthogonal complement of an
    /// anisotropic vector, as a diagonal space.
    pub fn orthogonal_complement(&self, x: &[PAdic]) -> Result<QuadSpace> {
        let q = self.quad(x)?;
        if q.is_zero() {
            return Err(Error::UnexpectedNull);
        }
        let n = self.dim();
        let mut candidates = Vec::with_capacity(n);
        for i in 0..n {
            let bi = self.diag[i].mul(&x[i])?; // B(e_i, x)
            let coeff = bi.div(&q)?;
            let mut c = vec![PAdic::zero(self.p); n];
            c[i] = PAdic::one(self.p, self.diag[i].rel_precision());
            c = linalg::vec_sub(&c, &linalg::vec_scale(&coeff, x)?)?;
            candidates.push(c);
        }
        let chosen = select_independent(&candidates, n - 1)?;
        self.subspace_from_vectors(&chosen)
    }

    /// The induced form on r-perp modulo the null line through r, realized as
    /// the complement of the hyperbolic plane spanned by r and a partner.
    pub fn null_reduction(&self, witness: &IsotropyWitness) -> Result<QuadSpace> {
        let r = linalg::vec_primitive(&witness.vector)?;
        // re-certify on this space (the witness may come from the caller)
        self.certify_null(&r)?;
        let w = self.hyperbolic_partner(&r)?;
        let n = self.dim();
        let mut candidates = Vec::with_capacity(n);
        for i in 0..n {
            let b_w = self.diag[i].mul(&w[i])?; // B(e_i, w)... for diagonal form
            let b_r = self.diag[i].mul(&r[i])?;
            let mut c = vec![PAdic::zero(self.p); n];
            c[i] = PAdic::one(self.p, self.diag[i].rel_precision());
            c = linalg::vec_sub(&c, &linalg::vec_scale(&b_w, &r)?)?;
            c = linalg::vec_sub(&c, &linalg::vec_scale(&b_r, &w)?)?;
            candidates.push(c);
        }
        let chosen = select_independent(&candidates, n - 2)?;
        self.subspace_from_vectors(&chosen)
    }

    /// Completes a primitive null vector to a hyperbolic pair: returns w with
    /// B(r, w) = 1 and Q(w) = 0 to precision.
    pub fn hyperbolic_partner(&self, r: &[PAdic]) -> Result<Vec<PAdic>> {
        let prec = self.work_prec();
        let mut best: Option<(usize, i64)> = None;
        for i in 0..self.dim() {
            if r[i].is_zero() {
                continue;
            }
            let v = self.diag[i].mul(&r[i])?.valuation().expect("nonzero");
            if best.map_or(true, |(_, bv)| v < bv) {
                best = Some((i, v));
            }
        }
        let (j, _) = best.ok_or(Error::ZeroInput)?;
        let pairing = self.diag[j].mul(&r[j])?; // B(r, e_j)
        let mut w0 = vec![PAdic::zero(self.p); self.dim()];
        w0[j] = pairing.inv()?;
        let q0 = self.quad(&w0)?;
        let two = PAdic::from_int(self.p, 2, prec)?;
        let w = linalg::vec_sub(&w0, &linalg::vec_scale(&q0.div(&two)?, r)?)?;
        Ok(w)
    }

    /// Constructive null vector; assumes the isotropy criteria hold.
    fn find_null_vector(&self) -> Result<Vec<PAdic>> {
        let n = self.dim();
        let prec = self.work_prec();
        if n < 2 {
            return Err(Error::Internal("no null vectors below dimension 2"));
        }
        // fast path: an isotropic coordinate pair solved by a square root
        for i in 0..n {
            for j in (i + 1)..n {
                let ratio = self.diag[j].div(&self.diag[i])?.neg();
                if ratio.is_square()? {
                    let r = ratio.sqrt()?;
                    let mut v = vec![PAdic::zero(self.p); n];
                    v[i] = r;
                    v[j] = PAdic::one(self.p, prec);
                    return Ok(linalg::vec_primitive(&v)?);
                }
            }
        }
        if n == 2 {
            return Err(Error::Internal("binary isotropy criterion disagrees with square detection"));
        }
        if n == 3 {
            return self.search_dim3();
        }
        // n >= 4: split <a_0, a_1> | rest and match a represented value
        let front = QuadSpace::new(self.p, self.diag[..2].to_vec())?;
        let back = QuadSpace::new(self.p, self.diag[2..].to_vec())?;
        if back.is_isotropic()? {
            let tail = back.find_null_vector()?;
            let mut v = vec![PAdic::zero(self.p); 2];
            v.extend(tail);
            return Ok(v);
        }
        for class in SquareClass::all(self.p) {
            let m = class.to_padic(prec);
            if !(front.represents(&m)? && back.represents(&m.neg())?) {
                continue;
            }
            let x = front
                .represent_vector(&m)?
                .ok_or(Error::Internal("representation criterion disagrees with witness search"))?;
            let y = back
                .represent_vector(&m.neg())?
                .ok_or(Error::Internal("representation criterion disagrees with witness search"))?;
            let mut v = x;
            v.extend(y);
            let lifted = self.hensel_polish(v)?;
            return Ok(lifted);
        }
        Err(Error::Internal("isotropy criteria hold but no split value was found"))
    }

    /// Ternary search. With every binary subform anisotropic this is only
    /// reachable for unit coefficients at odd p (any mixed-valuation ternary
    /// form that is isotropic has an isotropic binary subform) and for p = 2,
    /// where the residue space is tiny.
    fn search_dim3(&self) -> Result<Vec<PAdic>> {
        let p = self.p;
        let prec = self.work_prec();
        // strip even p-powers per coefficient, then a global p if all odd
        let mut shifts = [0i64; 3];
        let mut units = Vec::with_capacity(3);
        for (i, a) in self.diag.iter().enumerate() {
            let v = a.valuation().expect("nonzero");
            let k = v.div_euclid(2);
            shifts[i] = k;
            units.push(a.shift(-2 * k));
        }
        if units.iter().all(|a| a.valuation() == Some(1)) {
            for a in units.iter_mut() {
                *a = a.shift(-1);
            }
        }
        let scaled = QuadSpace::new(p, units)?;

        // lift on the scaled form, where the candidate meets the Hensel
        // threshold; unscaling preserves nullity since the norms differ by a
        // power of p
        let build = |coords: [PAdic; 3]| -> Result<Vec<PAdic>> {
            let lifted = scaled.hensel_polish(coords.to_vec())?;
            let mut v = Vec::with_capacity(3);
            for (i, c) in lifted.into_iter().enumerate() {
                v.push(c.shift(-shifts[i]));
            }
            linalg::vec_primitive(&v)
        };

        if p != 2 {
            if scaled.diag.iter().any(|a| a.valuation() != Some(0)) {
                return Err(Error::Internal(
                    "mixed-valuation ternary form without isotropic binary subform cannot be isotropic",
                ));
            }
            // pin one coordinate to 1, sweep one residue, solve for the third
            let u: Vec<u64> = scaled
                .diag
                .iter()
                .map(|a| a.unit_mod(1).map(|r| num_traits::ToPrimitive::to_u64(&r).expect("< p")))
                .collect::<Result<Vec<_>>>()?;
            for pin in 0..3usize {
                let (ia, ib) = match pin {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let inv_b = mod_inv_u64(u[ib], p).expect("unit");
                for x in 0..p {
                    let rhs = (p as u128 * p as u128
                        - (u[ia] as u128 * (x as u128 * x as u128 % p as u128) % p as u128
                            + u[pin] as u128)
                            % p as u128) as u64
                        % p;
                    let t = (rhs as u128 * inv_b as u128 % p as u128) as u64;
                    if let Some(y) = sqrt_mod_p(t, p) {
                        let mut coords = [PAdic::zero(p), PAdic::zero(p), PAdic::zero(p)];
                        coords[pin] = PAdic::one(p, prec);
                        coords[ia] = PAdic::from_int(p, x as i64, prec)?;
                        coords[ib] = PAdic::from_int(p, y as i64, prec)?;
                        if scaled.quad(&coords.to_vec())?.val_floor() >= 1 {
                            return build(coords);
                        }
                    }
                }
            }
            return Err(Error::Internal("ternary residue sweep found no candidate"));
        }

        // p = 2: exhaustive pinned search modulo 2^window
        let window: u32 = if scaled.diag.iter().any(|a| a.valuation() == Some(1)) { 5 } else { 3 };
        let modulus = 1u64 << window;
        for pin in 0..3usize {
            let (ia, ib) = match pin {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            for x in 0..modulus {
                for y in 0..modulus {
                    let mut coords = [PAdic::zero(p), PAdic::zero(p), PAdic::zero(p)];
                    coords[pin] = PAdic::one(p, prec);
                    coords[ia] = PAdic::from_int(p, x as i64, prec)?;
                    coords[ib] = PAdic::from_int(p, y as i64, prec)?;
                    let vec = coords.to_vec();
                    let q = scaled.quad(&vec)?;
                    let threshold = scaled.hensel_threshold(&vec)?;
                    if q.val_floor() >= threshold {
                        return build(coords);
                    }
                }
            }
        }
        Err(Error::Internal("dyadic ternary search found no candidate"))
    }

    /// Newton-lifts an approximate null vector along its best coordinate
    /// until Q(x) is indistinguishable from zero.
    fn hensel_polish(&self, mut x: Vec<PAdic>) -> Result<Vec<PAdic>> {
        let two = PAdic::from_int(self.p, 2, self.work_prec())?;
        for _ in 0..64 {
            let q = self.quad(&x)?;
            if q.is_zero() {
                return linalg::vec_primitive(&x);
            }
            // coordinate with the smallest derivative valuation
            let mut best: Option<(usize, i64)> = None;
            for i in 0..self.dim() {
                if x[i].is_zero() {
                    continue;
                }
                let v = two.mul(&self.diag[i])?.mul(&x[i])?.valuation().expect("nonzero");
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((i, v));
                }
            }
            let (j, dv) = best.ok_or(Error::ZeroInput)?;
            let qv = q.valuation().expect("nonzero");
            if qv <= 2 * dv {
                return Err(Error::NotNull);
            }
            let derivative = two.mul(&self.diag[j])?.mul(&x[j])?;
            x[j] = x[j].sub(&q.div(&derivative)?)?;
        }
        Err(Error::Internal("Hensel iteration did not converge"))
    }

    fn subspace_from_vectors(&self, vectors: &[Vec<PAdic>]) -> Result<QuadSpace> {
        let k = vectors.len();
        let mut gram = Matrix::zero(self.p, k, k);
        for s in 0..k {
            for t in s..k {
                let b = self.bilinear(&vectors[s], &vectors[t])?;
                gram[(s, t)] = b.clone();
                gram[(t, s)] = b;
            }
        }
        let (space, _) = QuadSpace::from_gram(self.p, &gram)?;
        Ok(space)
    }
}

fn mod_inv_u64(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // Fermat
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    Some(acc)
}

fn sqrt_mod_p(t: u64, p: u64) -> Option<u64> {
    if t == 0 {
        return Some(0);
    }
    if legendre(t, p) != 1 {
        return None;
    }
    (1..p).find(|&y| (y as u128 * y as u128) % p as u128 == t as u128)
}

use crate::linalg::select_independent;

/// Symmetric Gaussian congruence reduction: returns the diagonal entries and
/// the basis matrix T with T^t G T diagonal.
pub fn diagonalize_gram(gram: &Matrix) -> Result<(Vec<PAdic>, Matrix)> {
    let n = gram.n_rows();
    if n != gram.n_cols() {
        return Err(Error::DimensionMismatch { expected: n, got: gram.n_cols() });
    }
    if n == 0 {
        return Ok((Vec::new(), Matrix::zero(2, 0, 0)));
    }
    if !gram.is_symmetric() {
        return Err(Error::Parse("Gram matrix must be symmetric".into()));
    }
    let p = gram[(0, 0)].prime();
    let prec = gram.work_prec();
    let mut g = gram.clone();
    let mut basis = Matrix::identity(p, n, prec);

    // column operation col_i += c * col_j applied congruently (rows too)
    fn col_op(g: &mut Matrix, basis: &mut Matrix, n: usize, i: usize, j: usize, c: &PAdic) -> Result<()> {
        for t in 0..n {
            let d = c.mul(&g[(j, t)])?;
            g[(i, t)] = g[(i, t)].add(&d)?;
        }
        for t in 0..n {
            let d = c.mul(&g[(t, j)])?;
            g[(t, i)] = g[(t, i)].add(&d)?;
        }
        for t in 0..n {
            let d = c.mul(&basis[(t, j)])?;
            basis[(t, i)] = basis[(t, i)].add(&d)?;
        }
        Ok(())
    }

    fn swap_cols(g: &mut Matrix, basis: &mut Matrix, n: usize, i: usize, j: usize) {
        if i == j {
            return;
        }
        for t in 0..n {
            let tmp = g[(i, t)].clone();
            g[(i, t)] = g[(j, t)].clone();
            g[(j, t)] = tmp;
        }
        for t in 0..n {
            let tmp = g[(t, i)].clone();
            g[(t, i)] = g[(t, j)].clone();
            g[(t, j)] = tmp;
        }
        for t in 0..n {
            let tmp = basis[(t, i)].clone();
            basis[(t, i)] = basis[(t, j)].clone();
            basis[(t, j)] = tmp;
        }
    }

    let one = PAdic::one(p, prec);
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !g[(i, i)].is_zero())
            .min_by_key(|&i| g[(i, i)].valuation().expect("nonzero"));
        match pivot {
            Some(i) => swap_cols(&mut g, &mut basis, n, k, i),
            None => {
                // all remaining diagonal entries vanish; bring in a cross term
                let mut best: Option<(usize, usize, i64)> = None;
                for i in k..n {
                    for j in (i + 1)..n {
                        if let Some(v) = g[(i, j)].valuation() {
                            if best.map_or(true, |(_, _, bv)| v < bv) {
                                best = Some((i, j, v));
                            }
                        }
                    }
                }
                let (i, j, _) = match best {
                    Some(t) => t,
                    None => {
                        // exact zeros mean a degenerate form; finite fuzz
                        // means the digits ran out
                        let floor = (k..n)
                            .flat_map(|i| (k..n).map(move |j| (i, j)))
                            .map(|(i, j)| g[(i, j)].abs_precision())
                            .min()
                            .unwrap_or(0);
                        if floor < crate::padic::EXACT_ZERO_PREC / 2 {
                            return Err(Error::InsufficientPrecision {
                                op: "congruence pivot",
                                needed: floor + 1,
                                available: floor,
                            });
                        }
                        return Err(Error::DegenerateForm);
                    }
                };
                col_op(&mut g, &mut basis, n, i, j, &one)?; // Q(e_i + e_j) = 2 B(e_i, e_j)
                swap_cols(&mut g, &mut basis, n, k, i);
            }
        }
        let pivot_val = g[(k, k)].clone();
        if pivot_val.is_zero() {
            return Err(Error::DegenerateForm);
        }
        for i in (k + 1)..n {
            if g[(k, i)].is_zero() {
                continue;
            }
            let c = g[(k, i)].div(&pivot_val)?.neg();
            col_op(&mut g, &mut basis, n, i, k, &c)?;
        }
    }
    let diag: Vec<PAdic> = (0..n).map(|k| g[(k, k)].clone()).collect();
    for d in &diag {
        if d.is_zero() {
            if d.abs_precision() < crate::padic::EXACT_ZERO_PREC / 2 {
                return Err(Error::InsufficientPrecision {
                    op: "congruence diagonal entry",
                    needed: d.abs_precision() + 1,
                    available: d.abs_precision(),
                });
            }
            return Err(Error::DegenerateForm);
        }
    }
    Ok((diag, basis))
}
