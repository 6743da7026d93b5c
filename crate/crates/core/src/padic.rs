//! Capped-relative-precision arithmetic in the field of p-adic numbers.
//!
//! A nonzero element is stored as `unit * p^val` with `unit` an invertible
//! residue modulo `p^prec`; `prec` is the number of tracked relative digits.
//! Zero is a distinguished state "zero to absolute precision m", meaning the
//! valuation is only known to be `>= m`. Multiplication and division keep the
//! minimum relative precision of the operands; addition and subtraction keep
//! the minimum absolute precision, so cancellation reduces the number of
//! known digits instead of inventing them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};

/// Absolute precision assigned to a zero built from the exact rational 0.
/// Large enough that it behaves as "zero to any precision reached in practice".
pub const EXACT_ZERO_PREC: i64 = i64::MAX / 4;

/// Default number of tracked relative digits.
pub const DEFAULT_PRECISION: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// Valuation known only to be `>= abs_prec`.
    Zero { abs_prec: i64 },
    /// `unit * p^val`, `unit` invertible modulo `p^prec`.
    Unit { val: i64, unit: BigUint, prec: u32 },
}

/// An element of Q_p at capped relative precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdic {
    prime: u64,
    repr: Repr,
}

fn pow_p(prime: u64, k: u32) -> BigUint {
    BigUint::from(prime).pow(k)
}

/// Inverse of `a` modulo `m` (extended Euclid); `None` when not coprime.
fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    let mut x = e.x % &m;
    if x.is_negative() {
        x += &m;
    }
    x.to_biguint()
}

/// Splits `n != 0` as `(v, u)` with `n = u * p^v` and `p` not dividing `u`.
fn strip_p(prime: u64, n: &BigInt) -> (i64, BigInt) {
    let p = BigInt::from(prime);
    let mut v = 0i64;
    let mut u = n.clone();
    loop {
        let (q, r) = u.div_rem(&p);
        if r.is_zero() {
            v += 1;
            u = q;
        } else {
            return (v, u);
        }
    }
}

/// Deterministic Miller-Rabin for u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl PAdic {
    /// Builds the canonical form of `num/den` at `prec` relative digits.
    pub fn from_ratio(prime: u64, num: impl Into<BigInt>, den: impl Into<BigInt>, prec: u32) -> Result<PAdic> {
        if prec == 0 {
            return Err(Error::InvalidPrecision(prec));
        }
        if !is_prime_u64(prime) {
            return Err(Error::NotPrime(prime));
        }
        let num: BigInt = num.into();
        let den: BigInt = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(PAdic {
                prime,
                repr: Repr::Zero { abs_prec: EXACT_ZERO_PREC },
            });
        }
        let (vn, un) = strip_p(prime, &num);
        let (vd, ud) = strip_p(prime, &den);
        let modulus = pow_p(prime, prec);
        let reduce = |x: &BigInt| -> BigUint {
            let m = BigInt::from(modulus.clone());
            let mut r = x % &m;
            if r.is_negative() {
                r += &m;
            }
            r.to_biguint().expect("nonnegative")
        };
        let un = reduce(&un);
        let ud = reduce(&ud);
        let inv = mod_inverse(&ud, &modulus).expect("den unit coprime to p");
        let unit = (un * inv) % &modulus;
        Ok(PAdic {
            prime,
            repr: Repr::Unit { val: vn - vd, unit, prec },
        })
    }

    pub fn from_int(prime: u64, n: impl Into<BigInt>, prec: u32) -> Result<PAdic> {
        PAdic::from_ratio(prime, n, 1, prec)
    }

    /// Zero known to absolute precision `abs_prec` (valuation `>= abs_prec`).
    pub fn zero_to(prime: u64, abs_prec: i64) -> PAdic {
        PAdic { prime, repr: Repr::Zero { abs_prec } }
    }

    pub fn zero(prime: u64) -> PAdic {
        PAdic::zero_to(prime, EXACT_ZERO_PREC)
    }

    pub fn one(prime: u64, prec: u32) -> PAdic {
        PAdic {
            prime,
            repr: Repr::Unit { val: 0, unit: BigUint::one(), prec },
        }
    }

    /// Rebuilds an element from raw parts; `unit` is reduced and must stay
    /// coprime to p.
    pub fn from_parts(prime: u64, val: i64, unit: BigUint, prec: u32) -> Result<PAdic> {
        if prec == 0 {
            return Err(Error::InvalidPrecision(prec));
        }
        let modulus = pow_p(prime, prec);
        let unit = unit % &modulus;
        if (&unit % prime).is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(PAdic { prime, repr: Repr::Unit { val, unit, prec } })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// True when the element is indistinguishable from zero.
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// Exact valuation of a nonzero element; `None` for a zero state.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    /// Lower bound on the valuation that is certain at the current precision.
    pub fn val_floor(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs_prec } => *abs_prec,
            Repr::Unit { val, .. } => *val,
        }
    }

    /// Position of the first unknown digit: `val + prec` for a nonzero
    /// element, the stored bound for a zero state.
    pub fn abs_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs_prec } => *abs_prec,
            Repr::Unit { val, prec, .. } => val.saturating_add(*prec as i64),
        }
    }

    /// Tracked relative digits (0 for a zero state).
    pub fn rel_precision(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Unit { prec, .. } => *prec,
        }
    }

    /// Unit part of a nonzero element.
    pub fn unit(&self) -> Result<&BigUint> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroInput),
            Repr::Unit { unit, .. } => Ok(unit),
        }
    }

    /// Unit residue modulo `p^k`; requires `k` tracked digits.
    pub fn unit_mod(&self, k: u32) -> Result<BigUint> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroInput),
            Repr::Unit { unit, prec, .. } => {
                if *prec < k {
                    return Err(Error::InsufficientPrecision {
                        op: "unit residue",
                        needed: k as i64,
                        available: *prec as i64,
                    });
                }
                Ok(unit % pow_p(self.prime, k))
            }
        }
    }

    /// The value as an integer residue modulo `p^k` (valuation must be >= 0).
    pub fn integer_residue(&self, k: u32) -> Result<BigUint> {
        match &self.repr {
            Repr::Zero { abs_prec } => {
                if *abs_prec >= k as i64 {
                    Ok(BigUint::zero())
                } else {
                    Err(Error::InsufficientPrecision {
                        op: "integer residue",
                        needed: k as i64,
                        available: *abs_prec,
                    })
                }
            }
            Repr::Unit { val, unit, prec } => {
                if *val < 0 {
                    return Err(Error::Parse("negative valuation has no integer residue".into()));
                }
                if val + (*prec as i64) < k as i64 {
                    return Err(Error::InsufficientPrecision {
                        op: "integer residue",
                        needed: k as i64,
                        available: val + *prec as i64,
                    });
                }
                let m = pow_p(self.prime, k);
                Ok((unit * pow_p(self.prime, *val as u32)) % m)
            }
        }
    }

    fn check_prime(&self, other: &PAdic) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    /// Multiplies by `p^k` (exact; shifts the valuation).
    pub fn shift(&self, k: i64) -> PAdic {
        let repr = match &self.repr {
            Repr::Zero { abs_prec } => Repr::Zero { abs_prec: abs_prec.saturating_add(k) },
            Repr::Unit { val, unit, prec } => Repr::Unit { val: val + k, unit: unit.clone(), prec: *prec },
        };
        PAdic { prime: self.prime, repr }
    }

    pub fn add(&self, other: &PAdic) -> Result<PAdic> {
        self.check_prime(other)?;
        let prime = self.prime;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Zero { abs_prec: a }, Repr::Zero { abs_prec: b }) => Repr::Zero { abs_prec: *a.min(b) },
            (Repr::Zero { abs_prec }, Repr::Unit { val, unit, prec })
            | (Repr::Unit { val, unit, prec }, Repr::Zero { abs_prec }) => {
                // x + O(p^m): digits of x below m survive.
                let m = *abs_prec;
                if *val >= m {
                    Repr::Zero { abs_prec: m }
                } else {
                    let width = (m - val).min(*prec as i64) as u32;
                    Repr::Unit { val: *val, unit: unit % pow_p(prime, width), prec: width }
                }
            }
            (Repr::Unit { val: va, unit: ua, prec: na }, Repr::Unit { val: vb, unit: ub, prec: nb }) => {
                let vmin = (*va).min(*vb);
                let m = (va + *na as i64).min(vb + *nb as i64);
                if m <= vmin {
                    Repr::Zero { abs_prec: m }
                } else {
                    let width = (m - vmin) as u32;
                    let modulus = pow_p(prime, width);
                    let ta = (ua * pow_p(prime, (va - vmin) as u32)) % &modulus;
                    let tb = (ub * pow_p(prime, (vb - vmin) as u32)) % &modulus;
                    let s = (ta + tb) % &modulus;
                    if s.is_zero() {
                        Repr::Zero { abs_prec: m }
                    } else {
                        let (dv, su) = strip_p(prime, &BigInt::from(s));
                        let val = vmin + dv;
                        let prec = (m - val) as u32;
                        Repr::Unit {
                            val,
                            unit: su.to_biguint().expect("positive") % pow_p(prime, prec),
                            prec,
                        }
                    }
                }
            }
        };
        Ok(PAdic { prime, repr })
    }

    pub fn neg(&self) -> PAdic {
        let repr = match &self.repr {
            Repr::Zero { abs_prec } => Repr::Zero { abs_prec: *abs_prec },
            Repr::Unit { val, unit, prec } => {
                let m = pow_p(self.prime, *prec);
                Repr::Unit { val: *val, unit: (&m - unit) % &m, prec: *prec }
            }
        };
        PAdic { prime: self.prime, repr }
    }

    pub fn sub(&self, other: &PAdic) -> Result<PAdic> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PAdic) -> Result<PAdic> {
        self.check_prime(other)?;
        let prime = self.prime;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Zero { abs_prec: a }, Repr::Zero { abs_prec: b }) => {
                Repr::Zero { abs_prec: a.saturating_add(*b) }
            }
            (Repr::Zero { abs_prec }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Zero { abs_prec }) => {
                Repr::Zero { abs_prec: abs_prec.saturating_add(*val) }
            }
            (Repr::Unit { val: va, unit: ua, prec: na }, Repr::Unit { val: vb, unit: ub, prec: nb }) => {
                let prec = (*na).min(*nb);
                let m = pow_p(prime, prec);
                Repr::Unit { val: va + vb, unit: (ua * ub) % m, prec }
            }
        };
        Ok(PAdic { prime, repr })
    }

    pub fn div(&self, other: &PAdic) -> Result<PAdic> {
        self.check_prime(other)?;
        let prime = self.prime;
        match (&self.repr, &other.repr) {
            (_, Repr::Zero { .. }) => Err(Error::DivisionByZero),
            (Repr::Zero { abs_prec }, Repr::Unit { val, .. }) => {
                Ok(PAdic { prime, repr: Repr::Zero { abs_prec: abs_prec.saturating_sub(*val) } })
            }
            (Repr::Unit { val: va, unit: ua, prec: na }, Repr::Unit { val: vb, unit: ub, prec: nb }) => {
                let prec = (*na).min(*nb);
                let m = pow_p(prime, prec);
                let inv = mod_inverse(&(ub % &m), &m).expect("unit invertible");
                Ok(PAdic {
                    prime,
                    repr: Repr::Unit { val: va - vb, unit: (ua * inv) % m, prec },
                })
            }
        }
    }

    pub fn inv(&self) -> Result<PAdic> {
        PAdic::one(self.prime, self.rel_precision().max(1)).div(self)
    }

    /// Equality to the shared precision: the difference is a zero state.
    pub fn eq_approx(&self, other: &PAdic) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Square predicate. Needs 1 tracked digit for odd p and 3 for p = 2.
    pub fn is_square(&self) -> Result<bool> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroInput),
            Repr::Unit { val, unit, prec } => {
                if val % 2 != 0 {
                    return Ok(false);
                }
                if self.prime == 2 {
                    if *prec < 3 {
                        return Err(Error::InsufficientPrecision { op: "is_square", needed: 3, available: *prec as i64 });
                    }
                    Ok((unit % 8u32) == BigUint::one())
                } else {
                    if *prec < 1 {
                        return Err(Error::InsufficientPrecision { op: "is_square", needed: 1, available: *prec as i64 });
                    }
                    let r = (unit % self.prime).to_u64().expect("< p");
                    Ok(legendre(r, self.prime) == 1)
                }
            }
        }
    }

    /// Square root by Hensel lifting.
    ///
    /// The returned root is the one whose unit has the smaller least
    /// significant digit in [0, p); for p = 2, where both roots share that
    /// digit, the root congruent to 1 mod 4 is chosen.
    pub fn sqrt(&self) -> Result<PAdic> {
        if !self.is_square()? {
            return Err(Error::NotASquare);
        }
        let (val, unit, prec) = match &self.repr {
            Repr::Unit { val, unit, prec } => (*val, unit.clone(), *prec),
            Repr::Zero { .. } => unreachable!("is_square rejects zero"),
        };
        let p = self.prime;
        let root_prec = if p == 2 {
            // x known mod 2^k determines x^2 mod 2^{k+1} only
            if prec < 3 {
                return Err(Error::InsufficientPrecision { op: "sqrt", needed: 3, available: prec as i64 });
            }
            prec - 1
        } else {
            prec
        };
        let modulus = pow_p(p, root_prec);
        let mut x: BigUint;
        if p == 2 {
            // digit-by-digit: keep x^2 = unit mod 2^{k+1}
            x = BigUint::one();
            for k in 3..=root_prec {
                let m = pow_p(2, k + 1);
                if ((&x * &x) % &m) != (&unit % &m) {
                    x += pow_p(2, k - 1);
                }
            }
            x %= &modulus;
        } else {
            let u0 = (&unit % p).to_u64().expect("< p");
            let mut r = tonelli_shanks(u0, p).ok_or(Error::NotASquare)?;
            if r == 0 {
                return Err(Error::Internal("square root of unit cannot be 0"));
            }
            // Newton iteration x <- (x + u/x)/2 in Z/p^root_prec
            let inv2 = mod_inverse(&BigUint::from(2u32), &modulus).expect("p odd");
            let mut x_cur = BigUint::from(r);
            let mut known = 1u32;
            while known < root_prec {
                let inv_x = mod_inverse(&x_cur, &modulus).expect("unit");
                x_cur = ((&x_cur + (&unit * inv_x) % &modulus) * &inv2) % &modulus;
                known = (known * 2).min(root_prec);
            }
            debug_assert_eq!((&x_cur * &x_cur) % &modulus, &unit % &modulus);
            r = (&x_cur % p).to_u64().expect("< p");
            let other = p - r;
            if other < r {
                x_cur = &modulus - &x_cur;
            }
            x = x_cur;
        }
        if p == 2 {
            // pick the root congruent to 1 mod 4
            if root_prec >= 2 && (&x % 4u32) != BigUint::one() {
                x = &modulus - &x;
            }
        }
        debug_assert_eq!((&x * &x) % &modulus, &unit % &modulus);
        Ok(PAdic {
            prime: p,
            repr: Repr::Unit { val: val / 2, unit: x, prec: root_prec },
        })
    }

    /// Canonical square-class representative of a nonzero element.
    pub fn square_class(&self) -> Result<SquareClass> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroInput),
            Repr::Unit { val, unit, prec } => {
                let odd_val = val.rem_euclid(2) == 1;
                if self.prime == 2 {
                    if *prec < 3 {
                        return Err(Error::InsufficientPrecision { op: "square_class", needed: 3, available: *prec as i64 });
                    }
                    let u8r = (unit % 8u32).to_u64().expect("< 8") as u8;
                    Ok(SquareClass { prime: 2, odd_val, unit_key: u8r })
                } else {
                    if *prec < 1 {
                        return Err(Error::InsufficientPrecision { op: "square_class", needed: 1, available: *prec as i64 });
                    }
                    let r = (unit % self.prime).to_u64().expect("< p");
                    let key = if legendre(r, self.prime) == 1 { 0 } else { 1 };
                    Ok(SquareClass { prime: self.prime, odd_val, unit_key: key })
                }
            }
        }
    }

    /// Value of the standard additive character: the p-adic fractional part
    /// of `x` as an exact rational modulo 1. All digits below position 0 must
    /// be tracked.
    pub fn additive_character(&self) -> Result<Phase> {
        match &self.repr {
            Repr::Zero { abs_prec } => {
                if *abs_prec >= 0 {
                    Ok(Phase::zero(self.prime))
                } else {
                    Err(Error::InsufficientPrecision { op: "additive_character", needed: 0, available: *abs_prec })
                }
            }
            Repr::Unit { val, unit, prec } => {
                if *val >= 0 {
                    return Ok(Phase::zero(self.prime));
                }
                if val + (*prec as i64) < 0 {
                    return Err(Error::InsufficientPrecision {
                        op: "additive_character",
                        needed: 0,
                        available: val + *prec as i64,
                    });
                }
                let k = (-val) as u32;
                let den = pow_p(self.prime, k);
                let num = unit % &den;
                Phase::new(self.prime, BigInt::from(num), BigInt::from(den))
            }
        }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { abs_prec } => {
                if *abs_prec >= EXACT_ZERO_PREC {
                    write!(f, "0")
                } else {
                    write!(f, "O({}^{})", self.prime, abs_prec)
                }
            }
            Repr::Unit { val, unit, prec } => {
                write!(f, "{}*{}^{} + O({}^{})", unit, self.prime, val, self.prime, val + *prec as i64)
            }
        }
    }
}

impl Serialize for PAdic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            p: u64,
            val: i64,
            unit: String,
            prec: u32,
            #[serde(skip_serializing_if = "std::ops::Not::not")]
            zero: bool,
            #[serde(borrow, skip)]
            _m: std::marker::PhantomData<&'a ()>,
        }
        let (val, unit, prec, zero) = match &self.repr {
            Repr::Zero { abs_prec } => (*abs_prec, "0".to_string(), 0, true),
            Repr::Unit { val, unit, prec } => (*val, unit.to_string(), *prec, false),
        };
        Wire { p: self.prime, val, unit, prec, zero, _m: std::marker::PhantomData }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            p: u64,
            val: i64,
            unit: String,
            prec: u32,
            #[serde(default)]
            zero: bool,
        }
        let w = Wire::deserialize(d)?;
        if w.zero {
            return Ok(PAdic::zero_to(w.p, w.val));
        }
        let unit: BigUint = w.unit.parse().map_err(|_| D::Error::custom("bad unit"))?;
        PAdic::from_parts(w.p, w.val, unit, w.prec).map_err(D::Error::custom)
    }
}

/// Legendre symbol of a unit residue `a` modulo an odd prime: +1 or -1.
pub fn legendre(a: u64, p: u64) -> i32 {
    debug_assert!(p % 2 == 1 && a % p != 0);
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base);
        }
        base = mulmod(base, base);
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a quadratic residue modulo an odd prime.
fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    if p % 4 == 3 {
        return Some(powmod(a, (p + 1) / 4));
    }
    // write p - 1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q);
    let mut t = powmod(a, q);
    let mut r = powmod(a, (q + 1) / 2);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2);
            i += 1;
        }
        let b = powmod(c, 1u64 << (m - i - 1));
        m = i;
        c = mulmod(b, b);
        t = mulmod(t, c);
        r = mulmod(r, b);
    }
    Some(r)
}

/// Least quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&u| legendre(u, p) == -1).expect("nonresidue exists")
}

/// A coset of the nonzero p-adic numbers modulo squares.
///
/// Odd p has 4 classes with representatives {1, u, p, u*p} (u the least
/// non-residue); p = 2 has 8 with representatives {1, -1, 5, -5, 2, -2, 10, -10}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass {
    prime: u64,
    odd_val: bool,
    /// odd p: 0 residue / 1 non-residue; p = 2: the unit class mod 8.
    unit_key: u8,
}

impl SquareClass {
    pub fn trivial(prime: u64) -> SquareClass {
        SquareClass { prime, odd_val: false, unit_key: if prime == 2 { 1 } else { 0 } }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_trivial(&self) -> bool {
        !self.odd_val && self.unit_key == if self.prime == 2 { 1 } else { 0 }
    }

    /// Canonical small integer representative.
    pub fn representative(&self) -> i64 {
        if self.prime == 2 {
            let unit_rep: i64 = match self.unit_key {
                1 => 1,
                3 => -5,
                5 => 5,
                7 => -1,
                _ => unreachable!("unit class mod 8"),
            };
            if self.odd_val {
                2 * unit_rep
            } else {
                unit_rep
            }
        } else {
            let u = least_nonresidue(self.prime) as i64;
            let unit_rep = if self.unit_key == 0 { 1 } else { u };
            if self.odd_val {
                self.prime as i64 * unit_rep
            } else {
                unit_rep
            }
        }
    }

    /// Group law (exponent 2).
    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        let odd_val = self.odd_val ^ other.odd_val;
        let unit_key = if self.prime == 2 {
            ((self.unit_key as u16 * other.unit_key as u16) % 8) as u8
        } else {
            self.unit_key ^ other.unit_key
        };
        Ok(SquareClass { prime: self.prime, odd_val, unit_key })
    }

    /// All classes in a fixed order (4 for odd p, 8 for p = 2).
    pub fn all(prime: u64) -> Vec<SquareClass> {
        if prime == 2 {
            let mut out = Vec::with_capacity(8);
            for odd_val in [false, true] {
                for unit_key in [1u8, 7, 5, 3] {
                    out.push(SquareClass { prime, odd_val, unit_key });
                }
            }
            out
        } else {
            let mut out = Vec::with_capacity(4);
            for odd_val in [false, true] {
                for unit_key in [0u8, 1] {
                    out.push(SquareClass { prime, odd_val, unit_key });
                }
            }
            out
        }
    }

    /// The representative as a p-adic number at the given precision.
    pub fn to_padic(&self, prec: u32) -> PAdic {
        PAdic::from_int(self.prime, self.representative(), prec).expect("representative is nonzero")
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            p: u64,
            rep: i64,
        }
        Wire { p: self.prime, rep: self.representative() }.serialize(s)
    }
}

/// Hilbert symbol (a, b) over Q_p: +1 exactly when z^2 = a x^2 + b y^2 has a
/// nontrivial solution. Closed-form evaluation from valuations and unit
/// residues; the value depends only on the square classes of the arguments.
pub fn hilbert_symbol(a: &PAdic, b: &PAdic) -> Result<i32> {
    if a.prime() != b.prime() {
        return Err(Error::PrimeMismatch(a.prime(), b.prime()));
    }
    let p = a.prime();
    let (va, vb) = match (a.valuation(), b.valuation()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::ZeroInput),
    };
    let alpha = va.rem_euclid(2) as u32;
    let beta = vb.rem_euclid(2) as u32;
    if p == 2 {
        let ua = a.unit_mod(3)?.to_u64().expect("< 8");
        let ub = b.unit_mod(3)?.to_u64().expect("< 8");
        let eps = |u: u64| ((u - 1) / 2) % 2; // (u-1)/2 mod 2
        let omega = |u: u64| ((u * u - 1) / 8) % 2; // (u^2-1)/8 mod 2
        let e = eps(ua) * eps(ub) + (alpha as u64) * omega(ub) + (beta as u64) * omega(ua);
        Ok(if e % 2 == 0 { 1 } else { -1 })
    } else {
        let ua = (a.unit()? % p).to_u64().expect("< p");
        let ub = (b.unit()? % p).to_u64().expect("< p");
        let mut sign = 1i32;
        if alpha * beta == 1 && (p - 1) / 2 % 2 == 1 {
            sign = -sign;
        }
        if beta == 1 && legendre(ua, p) == -1 {
            sign = -sign;
        }
        if alpha == 1 && legendre(ub, p) == -1 {
            sign = -sign;
        }
        Ok(sign)
    }
}

/// An element of Q/Z with p-power denominator: the value group of the
/// standard additive character. Phases compose additively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase {
    prime: u64,
    /// Reduced fraction in [0, 1) with denominator a power of the prime.
    num: BigUint,
    den: BigUint,
}

impl Phase {
    pub fn zero(prime: u64) -> Phase {
        Phase { prime, num: BigUint::zero(), den: BigUint::one() }
    }

    /// Builds `num/den mod 1`; the denominator must be a p-power times a
    /// divisor of the numerator.
    pub fn new(prime: u64, num: BigInt, den: BigInt) -> Result<Phase> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut num = num;
        let mut den = den;
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        // reduce, then take the representative in [0, 1)
        let g = num.gcd(&den);
        if !g.is_zero() {
            num /= &g;
            den /= &g;
        }
        let r = num.mod_floor(&den);
        let num = r.to_biguint().expect("mod_floor nonnegative");
        let den = den.to_biguint().expect("positive");
        // the reduced denominator must be a p-power
        let mut d = den.clone();
        let p = BigUint::from(prime);
        while (&d % &p).is_zero() {
            d /= &p;
        }
        if !d.is_one() {
            return Err(Error::Parse(format!("denominator {den} is not a power of {prime}")));
        }
        Ok(Phase { prime, num, den })
    }

    pub fn add(&self, other: &Phase) -> Result<Phase> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Phase::new(
            self.prime,
            BigInt::from(&self.num * &other.den + &other.num * &self.den),
            BigInt::from(&self.den * &other.den),
        )
    }

    pub fn neg(&self) -> Phase {
        if self.num.is_zero() {
            return self.clone();
        }
        Phase { prime: self.prime, num: &self.den - &self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &Phase) -> Result<Phase> {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.num, self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    const PREC: u32 = 20;

    fn q(p: u64, n: i64, d: i64) -> PAdic {
        PAdic::from_ratio(p, n, d, PREC).unwrap()
    }

    #[test]
    fn from_ratio_canonical_form() {
        let x = q(5, 75, 1);
        assert_eq!(x.valuation(), Some(2));
        assert_eq!(x.unit().unwrap() % 5u32, BigUint::from(3u32));

        let one = q(5, 1, 1);
        assert_eq!(one.valuation(), Some(0));
        assert!(one.unit().unwrap().is_one());

        let x = q(2, 7, 4);
        assert_eq!(x.valuation(), Some(-2));
        assert_eq!(x.unit().unwrap() % 8u32, BigUint::from(7u32));
    }

    #[test]
    fn from_ratio_rejects_bad_input() {
        assert_eq!(PAdic::from_ratio(5, 1, 0, PREC), Err(Error::ZeroDenominator));
        assert_eq!(PAdic::from_ratio(5, 1, 1, 0), Err(Error::InvalidPrecision(0)));
        assert_eq!(PAdic::from_ratio(6, 1, 1, PREC), Err(Error::NotPrime(6)));
    }

    #[test]
    fn exact_cancellation_gives_zero_state() {
        let a = q(5, 1, 1);
        let s = a.add(&a.neg()).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.abs_precision(), PREC as i64);
    }

    #[test]
    fn mul_adds_valuations() {
        let a = q(5, 5, 1);
        let b = q(5, 75, 1);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.valuation(), Some(3));
        assert_eq!(c.unit().unwrap() % 5u32, BigUint::from(3u32));
    }

    #[test]
    fn division_inverts() {
        let b = q(5, 75, 1);
        let inv = b.inv().unwrap();
        assert_eq!(inv.valuation(), Some(-2));
        let prod = b.mul(&inv).unwrap();
        assert!(prod.sub(&q(5, 1, 1)).unwrap().is_zero());
        assert_eq!(q(5, 1, 1).div(&PAdic::zero(5)), Err(Error::DivisionByZero));
    }

    #[test]
    fn cancellation_loses_digits() {
        // (1 + 5^18) - 1 has valuation 18 but only 2 remaining digits
        let a = q(5, 1 + 5i64.pow(18), 1);
        let d = a.sub(&q(5, 1, 1)).unwrap();
        assert_eq!(d.valuation(), Some(18));
        assert_eq!(d.rel_precision(), 2);
    }

    #[test]
    fn square_detection_matches_examples() {
        assert!(q(5, 6, 1).is_square().unwrap());
        assert!(!q(5, 5, 1).is_square().unwrap());
        assert!(q(2, 17, 1).is_square().unwrap());
        assert!(!q(2, 3, 1).is_square().unwrap());
        assert_eq!(PAdic::zero(5).is_square(), Err(Error::ZeroInput));
        let low = PAdic::from_int(2, 17, 2).unwrap();
        assert!(matches!(low.is_square(), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn square_detection_matches_oracle() {
        for p in [2u64, 3, 5, 7, 13] {
            for cls in SquareClass::all(p) {
                let x = cls.to_padic(PREC);
                assert_eq!(x.is_square().unwrap(), oracle::is_square_bruteforce(&x).unwrap(), "p={p} rep={}", cls);
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let one = q(5, 1, 1);
        assert!(one.sqrt().unwrap().eq_approx(&one));

        let six = PAdic::from_int(5, 6, 10).unwrap();
        let r = six.sqrt().unwrap();
        let back = r.mul(&r).unwrap().sub(&six).unwrap();
        assert!(back.val_floor() >= 10);

        let four = q(3, 4, 1);
        let r = four.sqrt().unwrap();
        // roots are 2 and -2; the canonical one has the smaller least digit,
        // and -2 = 1 + 3 + 2*9 + ... starts with 1
        assert!(r.eq_approx(&q(3, -2, 1)));
        assert_eq!(r.unit().unwrap() % 3u32, BigUint::one());

        let seventeen = q(2, 17, 1);
        let r = seventeen.sqrt().unwrap();
        assert!(r.mul(&r).unwrap().sub(&seventeen).unwrap().val_floor() >= 17);
        assert_eq!(r.unit_mod(2).unwrap(), BigUint::one());

        assert_eq!(q(5, 5, 1).sqrt(), Err(Error::NotASquare));
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(q(5, 9, 1).square_class().unwrap().representative(), 1);
        assert_eq!(q(5, 10, 1).square_class().unwrap().representative(), 10);
        assert_eq!(q(2, -1, 1).square_class().unwrap().representative(), -1);
        // a / rep(a) is a square
        for p in [2u64, 3, 5, 7, 13] {
            for n in [-30i64, -7, -2, -1, 2, 3, 10, 48, 75] {
                let x = q(p, n, 1);
                let rep = x.square_class().unwrap().to_padic(PREC);
                assert!(x.div(&rep).unwrap().is_square().unwrap(), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn square_class_group_law() {
        for p in [2u64, 5] {
            let all = SquareClass::all(p);
            assert_eq!(all.len(), if p == 2 { 8 } else { 4 });
            for a in &all {
                assert!(a.mul(a).unwrap().is_trivial());
                for b in &all {
                    let prod = a.mul(b).unwrap();
                    let x = a.to_padic(PREC).mul(&b.to_padic(PREC)).unwrap();
                    assert_eq!(x.square_class().unwrap(), prod);
                }
            }
        }
    }

    #[test]
    fn hilbert_symbol_examples() {
        let m1 = q(2, -1, 1);
        assert_eq!(hilbert_symbol(&m1, &m1).unwrap(), -1);
        for ua in 1..7u64 {
            for ub in 1..7u64 {
                let a = q(7, ua as i64, 1);
                let b = q(7, ub as i64, 1);
                assert_eq!(hilbert_symbol(&a, &b).unwrap(), 1);
            }
        }
        for p in [2u64, 3, 5, 7] {
            let one = q(p, 1, 1);
            for cls in SquareClass::all(p) {
                assert_eq!(hilbert_symbol(&one, &cls.to_padic(PREC)).unwrap(), 1);
            }
        }
    }

    #[test]
    fn hilbert_symbol_matches_oracle_on_class_reps() {
        for p in [2u64, 3, 5, 7] {
            for a in SquareClass::all(p) {
                for b in SquareClass::all(p) {
                    let x = a.to_padic(PREC);
                    let y = b.to_padic(PREC);
                    assert_eq!(
                        hilbert_symbol(&x, &y).unwrap(),
                        oracle::hilbert_bruteforce(&x, &y).unwrap(),
                        "p={p} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn hilbert_symbol_laws() {
        for p in [2u64, 3, 5] {
            let all = SquareClass::all(p);
            for a in &all {
                let pa = a.to_padic(PREC);
                // (a, -a) = 1
                assert_eq!(hilbert_symbol(&pa, &pa.neg()).unwrap(), 1);
                for b in &all {
                    let pb = b.to_padic(PREC);
                    assert_eq!(hilbert_symbol(&pa, &pb).unwrap(), hilbert_symbol(&pb, &pa).unwrap());
                    for c in &all {
                        let pc = c.to_padic(PREC);
                        let ab = pa.mul(&pb).unwrap();
                        assert_eq!(
                            hilbert_symbol(&ab, &pc).unwrap(),
                            hilbert_symbol(&pa, &pc).unwrap() * hilbert_symbol(&pb, &pc).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn character_examples() {
        let x = q(5, 7, 25);
        let ph = x.additive_character().unwrap();
        assert_eq!(ph, Phase::new(5, 7.into(), 25.into()).unwrap());

        assert!(q(5, 3, 1).additive_character().unwrap().is_zero());

        let h = q(2, 1, 2);
        let s = h.add(&h).unwrap();
        assert!(s.additive_character().unwrap().is_zero());
        // homomorphism on the halves themselves
        let direct = h.additive_character().unwrap().add(&h.additive_character().unwrap()).unwrap();
        assert!(direct.is_zero());
    }

    #[test]
    fn character_is_homomorphism() {
        let xs = [q(5, 7, 25), q(5, 3, 5), q(5, -1, 125), q(5, 4, 1), q(5, 9, 10)];
        for a in &xs {
            for b in &xs {
                let lhs = a.add(b).unwrap().additive_character().unwrap();
                let rhs = a.additive_character().unwrap().add(&b.additive_character().unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        for x in [q(5, 75, 2), q(5, -7, 125), PAdic::zero_to(5, 9)] {
            let s = serde_json::to_string(&x).unwrap();
            let y: PAdic = serde_json::from_str(&s).unwrap();
            assert_eq!(x, y);
        }
    }
}
