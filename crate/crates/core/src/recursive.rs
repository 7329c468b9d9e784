//! Counting for arbitrary `k` and `ell` via divisor recursions, plus the
//! additive partition function.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{divisors, factorize, integer_nth_root, ExactCount, PrimeSignature};
use crate::error::{Error, Result};

/// One `(m, k, ell)` counting query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CountQuery {
    pub m: u64,
    pub k: u32,
    pub ell: u64,
}

impl CountQuery {
    pub fn new(m: u64, k: u32, ell: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Zero);
        }
        if k == 0 {
            return Err(Error::FactorCount(k, ">= 1"));
        }
        if ell == 0 {
            return Err(Error::LowerBound(ell, ">= 1"));
        }
        Ok(CountQuery { m, k, ell })
    }
}

type Key = (u64, u32, u64);

/// Write-once caches for the recursions. One store per thread.
#[derive(Debug, Default)]
pub struct MemoStore {
    mu: HashMap<Key, ExactCount>,
    nu: HashMap<Key, ExactCount>,
    partitions: HashMap<(u64, u64), ExactCount>,
}

impl MemoStore {
    pub fn len(&self) -> usize {
        self.mu.len() + self.nu.len() + self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&mut self) {
        self.mu.clear();
        self.nu.clear();
        self.partitions.clear();
    }
}

fn put<K: std::hash::Hash + Eq>(map: &mut HashMap<K, ExactCount>, key: K, value: &ExactCount) {
    let stored = map.entry(key).or_insert_with(|| value.clone());
    debug_assert_eq!(stored, value, "memo entry rewritten with a different value");
}

/// Evaluates the recursions, optionally memoizing intermediate results.
#[derive(Debug)]
pub struct Counter {
    memo: MemoStore,
    memoize: bool,
}

impl Default for Counter {
    fn default() -> Self {
        Self::new()
    }
}

impl Counter {
    pub fn new() -> Self {
        Counter {
            memo: MemoStore::default(),
            memoize: true,
        }
    }

    /// Plain recursion with no cache; exponentially slower, used to check
    /// that memoization is transparent.
    pub fn unmemoized() -> Self {
        Counter {
            memo: MemoStore::default(),
            memoize: false,
        }
    }

    pub fn memo(&self) -> &MemoStore {
        &self.memo
    }

    pub fn clear(&mut self) {
        self.memo.clear();
    }

    /// Nondecreasing `k`-tuples of factors `>= ell` with product `m`.
    pub fn mu_rec(&mut self, q: CountQuery) -> Result<ExactCount> {
        let sig = factorize(q.m)?;
        self.mu_for(&sig, q.k, q.ell)
    }

    /// [`Counter::mu_rec`] for an already factorized `m`.
    pub fn mu_for(&mut self, sig: &PrimeSignature, k: u32, ell: u64) -> Result<ExactCount> {
        let q = CountQuery::new(sig.value()?, k, ell)?;
        let divs = divisors(sig)?;
        Ok(self.mu(q.m, q.k, q.ell, &divs))
    }

    // mu_ell(m, k) = sum over divisors d >= ell of mu_d(m / d, k - 1); the
    // smallest factor d satisfies d^k <= m.
    fn mu(&mut self, m: u64, k: u32, ell: u64, divs: &[u64]) -> ExactCount {
        let ell = ell.min(m.saturating_add(1));
        if k == 1 {
            return indicator(m >= ell);
        }
        if m == 1 {
            return indicator(ell == 1);
        }
        let key = (m, k, ell);
        if self.memoize {
            if let Some(v) = self.memo.mu.get(&key) {
                return v.clone();
            }
        }
        let hi = integer_nth_root(m, k);
        let mut total = BigUint::zero();
        for &d in divs {
            if d > hi {
                break;
            }
            if d >= ell && m.is_multiple_of(d) {
                total += self.mu(m / d, k - 1, d, divs);
            }
        }
        if self.memoize {
            put(&mut self.memo.mu, key, &total);
        }
        total
    }

    /// Ordered `k`-tuples of factors `>= ell` with product `m`.
    pub fn nu_rec(&mut self, q: CountQuery) -> Result<ExactCount> {
        let sig = factorize(q.m)?;
        self.nu_for(&sig, q.k, q.ell)
    }

    pub fn nu_for(&mut self, sig: &PrimeSignature, k: u32, ell: u64) -> Result<ExactCount> {
        let q = CountQuery::new(sig.value()?, k, ell)?;
        let divs = divisors(sig)?;
        Ok(self.nu(q.m, q.k, q.ell, &divs))
    }

    fn nu(&mut self, m: u64, k: u32, ell: u64, divs: &[u64]) -> ExactCount {
        let ell = ell.min(m.saturating_add(1));
        if k == 1 {
            return indicator(m >= ell);
        }
        if ell >= 2 && ell.checked_pow(k).is_none_or(|lk| lk > m) {
            return BigUint::zero();
        }
        let key = (m, k, ell);
        if self.memoize {
            if let Some(v) = self.memo.nu.get(&key) {
                return v.clone();
            }
        }
        let mut total = BigUint::zero();
        for &d in divs {
            if d > m {
                break;
            }
            if d >= ell && m.is_multiple_of(d) {
                total += self.nu(m / d, k - 1, ell, divs);
            }
        }
        if self.memoize {
            put(&mut self.memo.nu, key, &total);
        }
        total
    }

    /// `mu_ell(m, k)` split by how many leading factors equal `ell`: with
    /// `ell^s || m`, stripping `i <= min(k, s)` copies of `ell` leaves a
    /// `(k - i)`-tuple of factors `>= ell + 1` with product `m / ell^i`.
    pub fn mu_via_shift(&mut self, q: CountQuery) -> Result<ExactCount> {
        if q.ell < 2 {
            return Err(Error::LowerBound(q.ell, ">= 2"));
        }
        let mut total = BigUint::zero();
        let mut rest = q.m;
        let mut stripped = 0u32;
        loop {
            let remaining = q.k - stripped;
            if remaining == 0 {
                total += indicator(rest == 1);
                break;
            }
            total += self.mu_rec(CountQuery::new(rest, remaining, q.ell + 1)?)?;
            if !rest.is_multiple_of(q.ell) {
                break;
            }
            rest /= q.ell;
            stripped += 1;
        }
        Ok(total)
    }

    /// `mu_1(m, k)` as `sum_{i=1}^{k} mu_2(m, i)`: drop the leading ones.
    pub fn mu_one_from_two(&mut self, m: u64, k: u32) -> Result<ExactCount> {
        above_one(m)?;
        let sig = factorize(m)?;
        let mut total = BigUint::zero();
        for i in 1..=k {
            total += self.mu_for(&sig, i, 2)?;
        }
        Ok(total)
    }

    /// Unordered factorizations of `m` into factors `>= ell`, any length.
    pub fn mu_total(&mut self, m: u64, ell: u64) -> Result<ExactCount> {
        above_one(m)?;
        let sig = factorize(m)?;
        self.mu_total_for(&sig, ell)
    }

    pub fn mu_total_for(&mut self, sig: &PrimeSignature, ell: u64) -> Result<ExactCount> {
        let m = total_domain(sig, ell)?;
        let mut total = BigUint::zero();
        for k in 1..=m.ilog2() {
            total += self.mu_for(sig, k, ell)?;
        }
        Ok(total)
    }

    /// Ordered factorizations of `m` into factors `>= ell`, any length.
    pub fn nu_total(&mut self, m: u64, ell: u64) -> Result<ExactCount> {
        above_one(m)?;
        let sig = factorize(m)?;
        self.nu_total_for(&sig, ell)
    }

    pub fn nu_total_for(&mut self, sig: &PrimeSignature, ell: u64) -> Result<ExactCount> {
        let m = total_domain(sig, ell)?;
        let mut total = BigUint::zero();
        for k in 1..=m.ilog2() {
            total += self.nu_for(sig, k, ell)?;
        }
        Ok(total)
    }

    /// Partitions of `n` into exactly `k` positive parts, via
    /// `P(n, k) = sum_{i=0}^{k} P(n - k, i)`.
    pub fn additive_partition(&mut self, n: u64, k: u64) -> ExactCount {
        if k == 0 {
            return indicator(n == 0);
        }
        if k > n {
            return BigUint::zero();
        }
        if k == n || k == 1 {
            return BigUint::one();
        }
        if self.memoize {
            if let Some(v) = self.memo.partitions.get(&(n, k)) {
                return v.clone();
            }
        }
        let mut total = BigUint::zero();
        for i in 0..=k {
            total += self.additive_partition(n - k, i);
        }
        if self.memoize {
            put(&mut self.memo.partitions, (n, k), &total);
        }
        total
    }
}

fn indicator(flag: bool) -> ExactCount {
    if flag {
        BigUint::one()
    } else {
        BigUint::zero()
    }
}

fn above_one(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::NotAboveOne(m.to_string()));
    }
    Ok(())
}

fn total_domain(sig: &PrimeSignature, ell: u64) -> Result<u64> {
    let m = sig.value()?;
    above_one(m)?;
    if ell < 2 {
        // with factors allowed to be 1 the total over k diverges
        return Err(Error::LowerBound(ell, ">= 2"));
    }
    Ok(m)
}

/// Table of partitions of `n` into exactly `k` parts for all `n, k <= max`,
/// by `p(n, k) = p(n - 1, k - 1) + p(n - k, k)`.
pub fn partition_table(max: usize) -> Vec<Vec<ExactCount>> {
    let mut p = vec![vec![BigUint::zero(); max + 1]; max + 1];
    p[0][0] = BigUint::one();
    for n in 1..=max {
        for k in 1..=n {
            let v = &p[n - 1][k - 1] + &p[n - k][k];
            p[n][k] = v;
        }
    }
    p
}

pub fn mu_rec(q: CountQuery) -> Result<ExactCount> {
    Counter::new().mu_rec(q)
}

pub fn nu_rec(q: CountQuery) -> Result<ExactCount> {
    Counter::new().nu_rec(q)
}

pub fn mu_via_shift(q: CountQuery) -> Result<ExactCount> {
    Counter::new().mu_via_shift(q)
}

pub fn mu_one_from_two(m: u64, k: u32) -> Result<ExactCount> {
    Counter::new().mu_one_from_two(m, k)
}

pub fn mu_total(m: u64, ell: u64) -> Result<ExactCount> {
    Counter::new().mu_total(m, ell)
}

pub fn nu_total(m: u64, ell: u64) -> Result<ExactCount> {
    Counter::new().nu_total(m, ell)
}

pub fn additive_partition(n: u64, k: u64) -> ExactCount {
    Counter::new().additive_partition(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn q(m: u64, k: u32, ell: u64) -> CountQuery {
        CountQuery::new(m, k, ell).unwrap()
    }

    #[test]
    fn mu_rec_examples() {
        assert_eq!(mu_rec(q(12, 3, 1)).unwrap(), n(4));
        assert_eq!(mu_rec(q(8, 2, 2)).unwrap(), n(1));
        assert_eq!(mu_rec(q(100, 3, 5)).unwrap(), n(0));
        assert_eq!(mu_rec(q(1, 4, 1)).unwrap(), n(1));
        assert_eq!(mu_rec(q(1, 4, 2)).unwrap(), n(0));
    }

    #[test]
    fn nu_rec_examples() {
        assert_eq!(nu_rec(q(16, 2, 2)).unwrap(), n(3));
        assert_eq!(nu_rec(q(12, 2, 1)).unwrap(), n(6));
        assert_eq!(nu_rec(q(13, 3, 2)).unwrap(), n(0));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(mu_via_shift(q(8, 2, 2)).unwrap(), n(1));
        assert_eq!(mu_via_shift(q(12, 2, 2)).unwrap(), n(2));
        assert_eq!(mu_via_shift(q(12, 3, 2)).unwrap(), n(1));
        assert_eq!(mu_via_shift(q(8, 3, 2)).unwrap(), n(1));
        // 3 does not divide 40: only the unshifted term survives
        assert_eq!(
            mu_via_shift(q(40, 2, 3)).unwrap(),
            mu_rec(q(40, 2, 4)).unwrap()
        );
        assert!(matches!(mu_via_shift(q(12, 2, 1)), Err(Error::LowerBound(1, _))));
    }

    #[test]
    fn one_from_two_examples() {
        assert_eq!(mu_one_from_two(12, 3).unwrap(), n(4));
        assert_eq!(mu_one_from_two(97, 5).unwrap(), n(1));
        assert_eq!(mu_one_from_two(36, 4).unwrap(), n(9));
        assert!(mu_one_from_two(1, 3).is_err());
    }

    #[test]
    fn total_examples() {
        assert_eq!(mu_total(12, 2).unwrap(), n(4));
        assert_eq!(mu_total(97, 2).unwrap(), n(1));
        assert_eq!(nu_total(97, 2).unwrap(), n(1));
        assert_eq!(nu_total(12, 2).unwrap(), n(8));
        assert_eq!(nu_total(1 << 10, 2).unwrap(), n(512));
        assert!(matches!(mu_total(12, 1), Err(Error::LowerBound(1, _))));
        assert!(matches!(nu_total(12, 1), Err(Error::LowerBound(1, _))));
        assert!(mu_total(1, 2).is_err());
    }

    #[test]
    fn prime_power_totals_are_partition_numbers() {
        let table = partition_table(30);
        for a in 1..=30u32 {
            let p: BigUint = (1..=a as usize).map(|k| table[a as usize][k].clone()).sum();
            assert_eq!(mu_total(1u64 << a, 2).unwrap(), p, "a={a}");
        }
    }

    #[test]
    fn partition_examples() {
        assert_eq!(additive_partition(7, 3), n(4));
        for m in 1..20 {
            assert_eq!(additive_partition(m, 1), n(1));
            assert_eq!(additive_partition(m, m), n(1));
        }
        assert_eq!(additive_partition(5, 7), n(0));
        assert_eq!(additive_partition(0, 0), n(1));
        assert_eq!(additive_partition(4, 0), n(0));
        // p(100) = 190569292
        let p100: BigUint = (1..=100).map(|k| additive_partition(100, k)).sum();
        assert_eq!(p100, n(190_569_292));
    }

    #[test]
    fn partition_recurrence_matches_dp_and_brute_force() {
        fn brute(n: u64, k: u64, min: u64) -> u64 {
            if k == 0 {
                return u64::from(n == 0);
            }
            (min..=n).map(|first| brute(n - first, k - 1, first)).sum()
        }
        let table = partition_table(60);
        let mut c = Counter::new();
        for n in 0..=60u64 {
            for k in 0..=n {
                assert_eq!(c.additive_partition(n, k), table[n as usize][k as usize]);
                if n <= 25 {
                    assert_eq!(c.additive_partition(n, k), BigUint::from(brute(n, k, 1)));
                }
            }
        }
    }

    #[test]
    fn memo_is_transparent() {
        let mut cached = Counter::new();
        let mut plain = Counter::unmemoized();
        for m in 1..=400u64 {
            for k in 1..=5 {
                for ell in 1..=3 {
                    let qq = q(m, k, ell);
                    assert_eq!(cached.mu_rec(qq).unwrap(), plain.mu_rec(qq).unwrap());
                    assert_eq!(cached.nu_rec(qq).unwrap(), plain.nu_rec(qq).unwrap());
                }
            }
        }
        for n in 0..=30 {
            for k in 0..=n {
                assert_eq!(cached.additive_partition(n, k), plain.additive_partition(n, k));
            }
        }
        assert!(!cached.memo().is_empty());
        assert!(plain.memo().is_empty());
        cached.clear();
        assert!(cached.memo().is_empty());
    }

    #[test]
    fn query_validation() {
        assert!(matches!(CountQuery::new(0, 1, 1), Err(Error::Zero)));
        assert!(CountQuery::new(5, 0, 1).is_err());
        assert!(CountQuery::new(5, 1, 0).is_err());
    }

    #[test]
    fn handles_wide_inputs() {
        // 2^63 has 63 as its only exponent: mu_2(2^63, 3) = P(63, 3)
        let m = 1u64 << 63;
        let table = partition_table(63);
        assert_eq!(mu_rec(q(m, 3, 2)).unwrap(), table[63][3]);
        let big_prime = 18446744073709551557u64;
        assert_eq!(mu_rec(q(big_prime, 2, 1)).unwrap(), n(1));
        assert_eq!(mu_rec(q(big_prime, 2, 2)).unwrap(), n(0));
    }
}
