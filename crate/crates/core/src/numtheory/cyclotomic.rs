//! Exact vanishing test for sums of roots of unity.
//!
//! `Σ ζ_M^{e_j} = 0` holds iff the cyclotomic polynomial `Φ_M` divides
//! `Σ x^{e_j}` in `Z[x]`. The modulus is first reduced to its radical:
//! with `M = s·rad(M)`, `Z[ζ_M]` is free over `Z[ζ_rad]` on `1, ζ_M, …,
//! ζ_M^{s-1}`, so the sum vanishes iff every residue class of exponents
//! modulo `s` vanishes on its own as a sum of `rad(M)`-th roots.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exact division of `num` by the monic polynomial `den` (coefficients low to high).
fn div_monic_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i128>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i128>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Φ_n` for squarefree `n`, coefficients low to high.
pub(crate) fn cyclotomic_squarefree(n: u64) -> Arc<Vec<i128>> {
    if let Some(hit) = cyclotomic_cache().lock().unwrap().get(&n) {
        return hit.clone();
    }
    // Φ_{mp}(x) = Φ_m(x^p) / Φ_m(x) for a prime p not dividing m.
    let mut m = 1u64;
    let mut phi: Vec<i128> = vec![-1, 1];
    for p in prime_factors(n) {
        let mut stretched = vec![0i128; (phi.len() - 1) * p as usize + 1];
        for (i, &c) in phi.iter().enumerate() {
            stretched[i * p as usize] = c;
        }
        phi = div_monic_exact(&stretched, &phi);
        m *= p;
    }
    debug_assert_eq!(m, n);
    let phi = Arc::new(phi);
    cyclotomic_cache().lock().unwrap().insert(n, phi.clone());
    phi
}

/// Remainder of `poly` modulo the monic `modulus` is zero, using checked
/// machine arithmetic with a big-integer fallback on overflow.
fn divisible_by_monic(poly: &[i128], modulus: &[i128]) -> bool {
    match remainder_is_zero_i128(poly, modulus) {
        Some(answer) => answer,
        None => remainder_is_zero_big(poly, modulus),
    }
}

fn remainder_is_zero_i128(poly: &[i128], modulus: &[i128]) -> Option<bool> {
    let dm = modulus.len() - 1;
    let mut rem = poly.to_vec();
    if rem.len() > dm {
        for i in (dm..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            for (j, &mj) in modulus.iter().enumerate() {
                let idx = i - dm + j;
                rem[idx] = rem[idx].checked_sub(c.checked_mul(mj)?)?;
            }
        }
    }
    Some(rem.iter().take(dm).all(|&r| r == 0))
}

fn remainder_is_zero_big(poly: &[i128], modulus: &[i128]) -> bool {
    let dm = modulus.len() - 1;
    let modulus: Vec<BigInt> = modulus.iter().map(|&c| BigInt::from(c)).collect();
    let mut rem: Vec<BigInt> = poly.iter().map(|&c| BigInt::from(c)).collect();
    if rem.len() > dm {
        for i in (dm..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, mj) in modulus.iter().enumerate() {
                rem[i - dm + j] -= &c * mj;
            }
        }
    }
    rem.iter().take(dm).all(Zero::is_zero)
}

/// Decides `Σ_j exp(2πi e_j / modulus) = 0` exactly. An empty sum vanishes.
pub fn roots_of_unity_sum_vanishes(exponents: &[u64], modulus: u64) -> bool {
    assert!(modulus >= 1, "modulus must be positive");
    if exponents.is_empty() {
        return true;
    }
    let reduced: Vec<u64> = exponents.iter().map(|e| e % modulus).collect();
    let g = reduced.iter().fold(modulus, |acc, &e| acc.gcd(&e));
    let m = modulus / g;
    if m == 1 {
        return false;
    }
    let reduced: Vec<u64> = reduced.iter().map(|e| e / g).collect();
    let rad: u64 = prime_factors(m).iter().product();
    let stride = m / rad;
    let phi = cyclotomic_squarefree(rad);

    let mut classes: HashMap<u64, Vec<i128>> = HashMap::new();
    for &e in &reduced {
        let poly = classes
            .entry(e % stride)
            .or_insert_with(|| vec![0i128; rad as usize]);
        poly[(e / stride) as usize] += 1;
    }
    classes.values().all(|poly| divisible_by_monic(poly, &phi))
}
