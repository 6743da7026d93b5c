//! Brute-force oracles used to cross-check the closed-form predicates.
//!
//! Everything here works on integer residues and exhaustive search, with a
//! Hensel-liftability acceptance test, and shares no code path with the
//! predicates it checks. Null-vector searches run over primitive vectors
//! modulo `p^B` with `B = 2*(v_p(2) + 1) + 1` once the form is scaled so
//! every coefficient has valuation 0 or 1. A primitive candidate always has
//! derivative valuation `d = min_i v(2 a_i x_i) <= v_p(2) + 1`, so `B`
//! determines both `d` and the residue of `Q(x)` modulo `p^{2d+1}`: a
//! candidate passing `v(Q(x)) >= 2d + 1` lifts to an exact null vector, and
//! every exact null vector reduces to an accepted candidate.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::padic::PAdic;

/// Residue-level description of one diagonal coefficient.
struct Coeff {
    /// valuation after scaling by even p-powers (0 or 1)
    val: u32,
    /// unit residue modulo p^digits
    unit: u64,
    /// number of unit digits actually known (capped at the search window)
    digits: u32,
}

fn normalized_coeffs(diag: &[PAdic], window: u32) -> Result<Vec<Coeff>> {
    let mut out = Vec::with_capacity(diag.len());
    for a in diag {
        let v = a.valuation().ok_or(Error::ZeroInput)?;
        let val = v.rem_euclid(2) as u32;
        let digits = a.rel_precision().min(window);
        let unit = a
            .unit_mod(digits)?
            .to_u64()
            .ok_or(Error::Internal("oracle residue overflow"))?;
        out.push(Coeff { val, unit, digits });
    }
    Ok(out)
}

/// True when there is a unit x with x^2 = unit(a) mod p^k (k = 3 for odd p,
/// 5 for p = 2) and the valuation of `a` is even. Such a residue always
/// satisfies the lifting criterion v(x^2 - u) >= k > 2 v(2x).
pub fn is_square_bruteforce(a: &PAdic) -> Result<bool> {
    let p = a.prime();
    let v = a.valuation().ok_or(Error::ZeroInput)?;
    if v.rem_euclid(2) == 1 {
        return Ok(false);
    }
    // the lifting criterion needs k > 2 v_p(2x) = 2 v_p(2), so k = 3 is
    // already sound at p = 2; use the full window when digits allow
    let k: u32 = if p == 2 {
        5u32.min(a.rel_precision()).max(3)
    } else {
        3
    };
    let modulus = p.pow(k);
    let u = a
        .unit_mod(k)?
        .to_u64()
        .ok_or(Error::Internal("oracle modulus overflow"))?;
    for x in 1..modulus {
        if x % p == 0 {
            continue;
        }
        if (x as u128 * x as u128) % modulus as u128 == u as u128 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Key of one achievable partial state: (partial sum mod p^B, min derivative
/// valuation so far, whether some entry is a unit). The value kept for a key
/// is the best (largest) precision floor that achieves it.
type HalfStates = HashMap<(u64, u32, bool), u32>;

/// (term residue, derivative valuation, is-unit flag, precision floor) for
/// one coordinate residue.
fn term_data(prime: u64, c: &Coeff, x: u64, modulus: u64, b: u32, d_cap: u32) -> (u64, u32, bool, u32) {
    let v2: u32 = if prime == 2 { 1 } else { 0 };
    let vx = if x == 0 {
        b
    } else {
        let mut t = x;
        let mut v = 0u32;
        while t % prime == 0 {
            t /= prime;
            v += 1;
        }
        v
    };
    let x2 = (x as u128 * x as u128) % modulus as u128;
    let t = (x2 * c.unit as u128) % modulus as u128;
    let term = ((t * prime.pow(c.val) as u128) % modulus as u128) as u64;
    let floor = (c.val + 2 * vx + c.digits).min(b);
    let d = (v2 + c.val + vx).min(d_cap + 1);
    (term, d, vx == 0, floor)
}

fn enumerate_half(prime: u64, coeffs: &[&Coeff], modulus: u64, b: u32, d_cap: u32) -> HalfStates {
    // flat table: slot = sum * 8 + min(d, 3) * 2 + unit, value = max floor + 1
    let slots = (modulus as usize) * 8;
    let slot = |sum: u64, d: u32, unit: bool| -> usize {
        (sum as usize) * 8 + (d.min(3) as usize) * 2 + unit as usize
    };
    let mut table = vec![0u8; slots];
    let push = |table: &mut Vec<u8>, s: usize, floor: u32| {
        let v = (floor + 1) as u8;
        if v > table[s] {
            table[s] = v;
        }
    };
    match coeffs.len() {
        0 => push(&mut table, slot(0, d_cap + 1, false), b),
        1 => {
            for x in 0..modulus {
                let (t, d, u, f) = term_data(prime, coeffs[0], x, modulus, b, d_cap);
                push(&mut table, slot(t, d, u), f);
            }
        }
        2 => {
            let first: Vec<_> = (0..modulus)
                .map(|x| term_data(prime, coeffs[0], x, modulus, b, d_cap))
                .collect();
            for y in 0..modulus {
                let (t2, d2, u2, f2) = term_data(prime, coeffs[1], y, modulus, b, d_cap);
                for (t1, d1, u1, f1) in &first {
                    push(&mut table, slot((t1 + t2) % modulus, (*d1).min(d2), *u1 | u2), (*f1).min(f2));
                }
            }
        }
        _ => {
            // folds one coordinate at a time; only needed above dimension 4
            let head = enumerate_half(prime, &coeffs[..coeffs.len() - 1], modulus, b, d_cap);
            for x in 0..modulus {
                let (t, d, u, f) = term_data(prime, coeffs[coeffs.len() - 1], x, modulus, b, d_cap);
                for ((sum, min_d, unit), floor) in &head {
                    push(&mut table, slot((sum + t) % modulus, (*min_d).min(d), *unit | u), (*floor).min(f));
                }
            }
        }
    }
    let mut states: HalfStates = HashMap::new();
    for (s, v) in table.into_iter().enumerate() {
        if v > 0 {
            let sum = (s / 8) as u64;
            let d = ((s / 2) % 4) as u32;
            let unit = s % 2 == 1;
            states.insert((sum, d, unit), (v - 1) as u32);
        }
    }
    states
}

/// Exhaustive primitive null-vector search modulo `p^B` with a Hensel
/// acceptance test. `Ok(true)` means a liftable candidate exists.
pub fn isotropic_bruteforce(prime: u64, diag: &[PAdic]) -> Result<bool> {
    let n = diag.len();
    if n <= 1 {
        return Ok(false);
    }
    let v2: u32 = if prime == 2 { 1 } else { 0 };
    let b = 2 * (v2 + 1) + 1;
    let modulus = prime
        .checked_pow(b)
        .ok_or(Error::Internal("oracle modulus overflow"))?;
    let coeffs = normalized_coeffs(diag, b)?;
    let d_cap = v2 + 1;

    let refs: Vec<&Coeff> = coeffs.iter().collect();
    let split = n / 2;
    let left = enumerate_half(prime, &refs[..split], modulus, b, d_cap);
    let right = enumerate_half(prime, &refs[split..], modulus, b, d_cap);

    let val_of = |mut s: u64| -> u32 {
        if s == 0 {
            return b;
        }
        let mut v = 0;
        while s % prime == 0 {
            s /= prime;
            v += 1;
        }
        v
    };

    let full_floors = left.values().chain(right.values()).all(|f| *f == b);
    if modulus <= 4096 || !full_floors {
        // exhaustive matching, with per-candidate precision accounting
        for ((ls, ld, lu), lf) in &left {
            for ((rs, rd, ru), rf) in &right {
                if !(lu | ru) {
                    continue;
                }
                let d = (*ld).min(*rd);
                if d > d_cap {
                    continue;
                }
                let threshold = 2 * d + 1;
                let floor = (*lf).min(*rf);
                if floor < threshold {
                    return Err(Error::InsufficientPrecision {
                        op: "isotropy oracle",
                        needed: threshold as i64,
                        available: floor as i64,
                    });
                }
                if val_of((ls + rs) % modulus) >= threshold {
                    return Ok(true);
                }
            }
        }
        return Ok(false);
    }

    // large residue space: index the right half by residue class at each
    // possible threshold level
    for d in 0..=d_cap {
        let threshold = 2 * d + 1;
        let level = prime.pow(threshold);
        let mut classes: HashMap<(u64, bool), u32> = HashMap::new();
        for ((rs, rd, ru), _) in &right {
            let key = (rs % level, *ru);
            let entry = classes.entry(key).or_insert(u32::MAX);
            *entry = (*entry).min(*rd);
        }
        for ((ls, ld, lu), _) in &left {
            let want = (level - ls % level) % level;
            for ru in [false, true] {
                if !(lu | ru) {
                    continue;
                }
                if let Some(best_rd) = classes.get(&(want, ru)) {
                    if (*ld).min(*best_rd) == d {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Hilbert symbol by exhaustive search: (a, b) = +1 iff z^2 = a x^2 + b y^2
/// has a primitive solution, i.e. the form <a, b, -1> has a null vector.
pub fn hilbert_bruteforce(a: &PAdic, b: &PAdic) -> Result<i32> {
    let p = a.prime();
    let prec = a.rel_precision().min(b.rel_precision()).max(6);
    let minus_one = PAdic::from_int(p, -1, prec).map_err(|_| Error::ZeroInput)?;
    let diag = vec![a.clone(), b.clone(), minus_one];
    Ok(if isotropic_bruteforce(p, &diag)? { 1 } else { -1 })
}
