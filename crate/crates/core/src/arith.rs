//! Exact integer helpers shared by every counting routine: prime signatures,
//! divisor enumeration, exact integer roots and big binomials.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Counts are unbounded; `BigUint` never wraps.
pub type ExactCount = BigUint;

/// The prime decomposition `p_1^a_1 * ... * p_n^a_n` of a positive integer.
///
/// The empty signature is 1. The represented value may exceed 64 bits when a
/// signature is built directly from exponents (prime-power identities are
/// checked far beyond `u64`), so [`PrimeSignature::value`] is fallible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeSignature {
    factors: Vec<(u64, u32)>,
}

impl PrimeSignature {
    pub fn one() -> Self {
        PrimeSignature {
            factors: Vec::new(),
        }
    }

    /// Builds a signature from `(prime, exponent)` pairs, checking that the
    /// primes are prime and strictly increasing and every exponent is positive.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        for window in factors.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::MalformedSignature);
            }
        }
        for &(p, e) in &factors {
            if e == 0 {
                return Err(Error::MalformedSignature);
            }
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(PrimeSignature { factors })
    }

    /// Caller guarantees the invariants (used by the sieve, whose factors are
    /// prime by construction).
    pub(crate) fn from_factors_unchecked(factors: Vec<(u64, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        PrimeSignature { factors }
    }

    /// `p^e`.
    pub fn prime_power(p: u64, e: u32) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        Self::from_factors(vec![(p, e)])
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(_, e)| e)
    }

    /// Number of distinct primes.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The represented integer, or `Overflow` when it does not fit in 64 bits.
    pub fn value(&self) -> Result<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e)
                .and_then(|pe| acc.checked_mul(pe))
                .ok_or(Error::Overflow)
        })
    }

    pub fn value_big(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e))
    }

    /// Whether the value is a perfect `i`-th power, read off the exponents.
    pub fn is_perfect_power(&self, i: u32) -> bool {
        i >= 1 && self.exponents().all(|e| e % i == 0)
    }

    /// The signature of the exact `i`-th root, if the value is a perfect power.
    pub fn root(&self, i: u32) -> Option<PrimeSignature> {
        if !self.is_perfect_power(i) {
            return None;
        }
        Some(PrimeSignature {
            factors: self.factors.iter().map(|&(p, e)| (p, e / i)).collect(),
        })
    }
}

impl fmt::Display for PrimeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (idx, &(p, e)) in self.factors.iter().enumerate() {
            if idx > 0 {
                f.write_str(" * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho. `n` must be an odd composite.
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

const TRIAL_BOUND: u64 = 1 << 12;

/// Prime signature of `m`. Trial division by 2, 3 and `6k ± 1` handles the
/// small primes; any cofactor left over goes to Miller-Rabin and Pollard rho.
pub fn factorize(m: u64) -> Result<PrimeSignature> {
    if m == 0 {
        return Err(Error::Zero);
    }
    let mut n = m;
    let mut primes = Vec::new();
    for p in [2u64, 3] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    let mut p = 5u64;
    while p <= TRIAL_BOUND && p * p <= n {
        for q in [p, p + 2] {
            while n.is_multiple_of(q) {
                primes.push(q);
                n /= q;
            }
        }
        p += 6;
    }
    if n > 1 {
        if n < TRIAL_BOUND * TRIAL_BOUND {
            // every factor below the bound was removed, so n is prime
            primes.push(n);
        } else {
            split_into(n, &mut primes);
        }
    }
    primes.sort_unstable();

    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(PrimeSignature { factors })
}

/// Number of divisors, `prod (a_j + 1)`.
pub fn tau(sig: &PrimeSignature) -> ExactCount {
    sig.exponents()
        .fold(BigUint::one(), |acc, e| acc * BigUint::from(e + 1))
}

/// `floor(m^(1/i))`, by binary search on exact powers.
pub fn integer_nth_root(m: u64, i: u32) -> u64 {
    assert!(i >= 1, "root index must be positive");
    if i == 1 || m < 2 {
        return m;
    }
    if i >= 64 {
        return 1;
    }
    // 2^(ceil(64 / i)) is strictly above any i-th root of a u64
    let mut lo = 1u64;
    let mut hi = 1u64 << (64u32.div_ceil(i)).min(63);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(i) {
            Some(v) if v <= m => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

/// Whether `m` is a perfect `i`-th power.
pub fn epsilon(m: u64, i: u32) -> bool {
    let r = integer_nth_root(m, i);
    r.checked_pow(i) == Some(m)
}

/// `C(n, k)` exactly; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> ExactCount {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        // acc * (n - j) is divisible by (j + 1) at every step
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// Floor division rounding toward negative infinity.
pub fn floor_div(a: i64, b: i64) -> Result<i64> {
    if b <= 0 {
        return Err(Error::NonPositiveDivisor(b));
    }
    Ok(a.div_euclid(b))
}

/// All divisors in increasing order.
pub fn divisors(sig: &PrimeSignature) -> Result<Vec<u64>> {
    sig.value()?;
    let mut divs = vec![1u64];
    for &(p, e) in sig.factors() {
        let base_len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for idx in 0..base_len {
                divs.push(divs[idx] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

pub fn divisors_of(m: u64) -> Result<Vec<u64>> {
    divisors(&factorize(m)?)
}
