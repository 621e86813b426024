//! Valuations, primality and factorisation for desk-scale integers.
//!
//! Factorisation is trial division by the primes below [`TRIAL_LIMIT`]
//! followed by a primality test on the cofactor. A composite cofactor with
//! no prime factor below the limit is reported, not factored.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::BoundsError;

pub const TRIAL_LIMIT: u32 = 1_000_000;

/// Miller–Rabin with the first 13 primes as bases is exact below this value.
const MR_DETERMINISTIC_BELOW: u128 = 3_317_044_064_679_887_385_961_981;
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

fn miller_rabin(n: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Exact primality test. Numbers with no factor below [`TRIAL_LIMIT`] and
/// beyond the deterministic Miller–Rabin range are out of reach.
pub fn is_prime(n: &BigUint) -> Result<bool, BoundsError> {
    if n < &BigUint::from(2u32) {
        return Ok(false);
    }
    for &p in small_primes() {
        let p_big = BigUint::from(p);
        if n == &p_big {
            return Ok(true);
        }
        if (n % p).is_zero() {
            return Ok(false);
        }
        if u64::from(p) * u64::from(p) > n.to_u64().unwrap_or(u64::MAX) {
            return Ok(true);
        }
    }
    certify_cofactor(n)
}

/// Decides a cofactor that has no prime factor below the trial limit.
fn certify_cofactor(n: &BigUint) -> Result<bool, BoundsError> {
    let limit = u64::from(TRIAL_LIMIT);
    if n < &BigUint::from(limit * limit) {
        return Ok(true);
    }
    if n < &BigUint::from(MR_DETERMINISTIC_BELOW) {
        return Ok(miller_rabin(n));
    }
    Err(BoundsError::FactorizationLimit(n.to_string()))
}

fn factor_u128(mut n: u128) -> Result<Vec<(BigUint, u32)>, BoundsError> {
    let mut out = Vec::new();
    for &p in small_primes() {
        let p = u128::from(p);
        if p * p > n {
            break;
        }
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((BigUint::from(p), k));
        }
    }
    if n > 1 {
        let rest = BigUint::from(n);
        if !certify_cofactor(&rest)? {
            return Err(BoundsError::FactorizationLimit(rest.to_string()));
        }
        out.push((rest, 1));
    }
    Ok(out)
}

/// Prime factorisation of `m >= 1` as `(prime, exponent)` pairs in
/// increasing prime order.
pub fn factorize(m: &BigUint) -> Result<Vec<(BigUint, u32)>, BoundsError> {
    if m.is_zero() {
        return Err(BoundsError::OutOfDomain("cannot factor 0".into()));
    }
    if let Some(small) = m.to_u128() {
        return factor_u128(small);
    }
    let mut n = m.clone();
    let mut out = Vec::new();
    for &p in small_primes() {
        if n.is_one() {
            break;
        }
        if let Some(n_small) = n.to_u128() {
            let mut rest = factor_u128(n_small)?;
            out.append(&mut rest);
            return Ok(out);
        }
        let mut k = 0;
        loop {
            let (q, r) = n.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            n = q;
            k += 1;
        }
        if k > 0 {
            out.push((BigUint::from(p), k));
        }
    }
    if !n.is_one() {
        if !certify_cofactor(&n)? {
            return Err(BoundsError::FactorizationLimit(n.to_string()));
        }
        out.push((n, 1));
    }
    Ok(out)
}

/// `nu_p(m)`, the exponent of the prime `p` in `m >= 1`.
pub fn p_adic_valuation(p: &BigUint, m: &BigUint) -> Result<u64, BoundsError> {
    if !is_prime(p)? {
        return Err(BoundsError::NotPrime(p.to_string()));
    }
    if m.is_zero() {
        return Err(BoundsError::OutOfDomain("valuation of 0 is infinite".into()));
    }
    let mut n = m.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Ok(k);
        }
        n = q;
        k += 1;
    }
}

/// `h(m)`, the largest prime power dividing `m >= 2`.
pub fn largest_prime_power(m: &BigUint) -> Result<BigUint, BoundsError> {
    if m <= &BigUint::one() {
        return Err(BoundsError::OutOfDomain(format!("h(m) needs m >= 2, got {m}")));
    }
    Ok(factorize(m)?
        .into_iter()
        .map(|(p, k)| p.pow(k))
        .max()
        .expect("m >= 2 has a prime factor"))
}
