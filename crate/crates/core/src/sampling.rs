//! Deterministic seeded sampling for the property suites.
//!
//! A small SplitMix64 generator keeps runs bit-reproducible across platforms
//! and toolchains, which the selftest output promises.

use crate::error::Result;
use crate::galilean::{GalDualPoint, GalileanElement, GalileanSpace, RotBoost, Translation};
use crate::linalg;
use crate::orthogrp::{reflection, BilinearSpace, OrthMatrix, Sl2};
use crate::padic::PAdic;
use crate::quadform::QuadSpace;

/// SplitMix64.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    /// Uniform-ish integer in [lo, hi] inclusive.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// Sampling of p-adic data at a fixed prime and precision.
#[derive(Clone, Copy, Debug)]
pub struct Sampler {
    pub prime: u64,
    pub prec: u32,
}

impl Sampler {
    pub fn new(prime: u64, prec: u32) -> Sampler {
        Sampler { prime, prec }
    }

    /// Maximum p-power denominator exponent for sampled rationals. Values
    /// deep below the integers eat absolute precision when multiplied, so
    /// the depth budget scales with the tracked digits.
    fn depth(&self) -> u32 {
        (self.prec.saturating_sub(4) / 8).min(2)
    }

    /// A nonzero rational with occasional p-power denominator, so character
    /// phases are exercised. Numerator valuation is capped at 1 to keep
    /// divisions by sampled values shallow.
    pub fn rational(&self, rng: &mut Rng) -> Result<PAdic> {
        let num = loop {
            let n = rng.int_in(-120, 120);
            if n != 0 && n.unsigned_abs() % (self.prime * self.prime) != 0 {
                break n;
            }
        };
        let exp = rng.below(self.depth() as u64 + 1) as u32;
        let den = (self.prime as i64).pow(exp);
        PAdic::from_ratio(self.prime, num, den, self.prec)
    }

    /// A rational that may be zero.
    pub fn rational_or_zero(&self, rng: &mut Rng) -> Result<PAdic> {
        if rng.chance(1, 8) {
            return Ok(PAdic::zero(self.prime));
        }
        self.rational(rng)
    }

    /// Nonzero integer coprime to p.
    pub fn unit_int(&self, rng: &mut Rng) -> i64 {
        loop {
            let n = rng.int_in(-(3 * self.prime as i64 * self.prime as i64), 3 * self.prime as i64 * self.prime as i64);
            if n != 0 && n.unsigned_abs() % self.prime != 0 {
                return n;
            }
        }
    }

    /// A diagonal form with entry valuations in {0, 1}.
    pub fn diag_form(&self, rng: &mut Rng, dim: usize) -> Result<QuadSpace> {
        let mut entries = Vec::with_capacity(dim);
        for _ in 0..dim {
            let u = self.unit_int(rng);
            let scaled = if rng.chance(1, 3) { u * self.prime as i64 } else { u };
            entries.push((scaled, 1));
        }
        QuadSpace::from_rationals(self.prime, &entries, self.prec)
    }

    /// A diagonal form resampled until isotropic.
    pub fn isotropic_form(&self, rng: &mut Rng, dim: usize) -> Result<QuadSpace> {
        loop {
            let s = self.diag_form(rng, dim)?;
            if s.is_isotropic()? {
                return Ok(s);
            }
        }
    }

    pub fn vector(&self, rng: &mut Rng, dim: usize) -> Result<Vec<PAdic>> {
        (0..dim).map(|_| self.rational_or_zero(rng)).collect()
    }

    pub fn nonzero_vector(&self, rng: &mut Rng, dim: usize) -> Result<Vec<PAdic>> {
        loop {
            let v = self.vector(rng, dim)?;
            if !linalg::vec_is_zero(&v) {
                return Ok(v);
            }
        }
    }

    /// A random anisotropic vector of the space: integral entries with a
    /// norm of small valuation, so reflections keep shallow denominators.
    pub fn anisotropic_vector(&self, rng: &mut Rng, space: &BilinearSpace) -> Result<Vec<PAdic>> {
        let bound = 3 * (self.prime as i64) * (self.prime as i64);
        loop {
            let v: Vec<PAdic> = (0..space.dim())
                .map(|_| PAdic::from_int(self.prime, rng.int_in(-bound, bound), self.prec))
                .collect::<Result<Vec<_>>>()?;
            let q = space.quad(&v)?;
            if q.valuation().is_some_and(|val| val <= 1) {
                return Ok(v);
            }
        }
    }

    /// A rotation: an even product of reflections (possibly the identity).
    pub fn rotation(&self, rng: &mut Rng, space: &BilinearSpace) -> Result<OrthMatrix> {
        let max_pairs = if self.depth() == 0 { 2 } else { 3 };
        let mut m = OrthMatrix::identity(space);
        let pairs = rng.below(max_pairs);
        for _ in 0..pairs {
            let v = self.anisotropic_vector(rng, space)?;
            let w = self.anisotropic_vector(rng, space)?;
            m = m.compose(&reflection(space, &v)?)?.compose(&reflection(space, &w)?)?;
        }
        Ok(m)
    }

    /// An SL(2) element with entry valuations bounded near 0, so adjoint
    /// images keep a comfortable precision margin.
    pub fn sl2(&self, rng: &mut Rng) -> Result<Sl2> {
        let p = self.prime as i64;
        let depth = self.depth();
        let small = |rng: &mut Rng, unit: bool| -> Result<PAdic> {
            let num = loop {
                let n = if unit { self.unit_int(rng) } else { rng.int_in(-3 * p * p, 3 * p * p) };
                if n == 0 || n.unsigned_abs() % (self.prime * self.prime) != 0 {
                    break n;
                }
            };
            let den = if !unit && depth > 0 && rng.chance(1, 4) { p } else { 1 };
            PAdic::from_ratio(self.prime, num, den, self.prec)
        };
        loop {
            let a = small(rng, true)?;
            let b = small(rng, false)?;
            let c = small(rng, false)?;
            let one = PAdic::one(self.prime, self.prec);
            let d = one.add(&b.mul(&c)?)?.div(&a)?;
            if let Ok(g) = Sl2::new(a, b, c, d) {
                return Ok(g);
            }
        }
    }

    pub fn galilean_element(&self, rng: &mut Rng, sys: &GalileanSpace) -> Result<GalileanElement> {
        let dim = sys.space_dim();
        Ok(GalileanElement {
            trans: Translation { u: self.vector(rng, dim)?, eta: self.rational_or_zero(rng)? },
            hom: RotBoost { v: self.vector(rng, dim)?, w: self.rotation(rng, sys.bspace())? },
        })
    }

    pub fn gal_dual_point(&self, rng: &mut Rng, sys: &GalileanSpace) -> Result<GalDualPoint> {
        Ok(GalDualPoint {
            xi: self.vector(rng, sys.space_dim())?,
            t: self.rational_or_zero(rng)?,
        })
    }
}
