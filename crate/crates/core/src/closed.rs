//! Closed-form counts for small factor counts.
//!
//! Every formula with a fractional coefficient is assembled as a single
//! integer numerator over a fixed denominator and divided exactly; a nonzero
//! remainder is reported as [`Error::Indivisible`].

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::arith::{binomial, floor_div, tau, ExactCount, PrimeSignature};
use crate::error::{Error, Result};

/// Multiset of factor multiplicities `{b_1, ..., b_r}` summing to `k`,
/// stored ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityPattern {
    parts: Vec<u32>,
}

impl MultiplicityPattern {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidPattern(parts));
        }
        parts.sort_unstable();
        Ok(MultiplicityPattern { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of distinct bases.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn k(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Every pattern with parts summing to `k`, i.e. the partitions of `k`.
    pub fn all_of(k: u32) -> Vec<MultiplicityPattern> {
        fn go(rest: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiplicityPattern>) {
            if rest == 0 {
                out.push(MultiplicityPattern { parts: cur.clone() });
                return;
            }
            for p in min..=rest {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if k > 0 {
            go(k, 1, &mut Vec::new(), &mut out);
        }
        out
    }

    /// `k! / (b_1! ... b_r!)`: ordered tuples per unordered tuple with this
    /// multiplicity profile.
    pub fn multinomial(&self) -> BigUint {
        let fact = |n: u32| (1..=n).fold(BigUint::one(), |acc, j| acc * BigUint::from(j));
        self.parts
            .iter()
            .fold(fact(self.k()), |acc, &b| acc / fact(b))
    }
}

fn require_above_one(sig: &PrimeSignature) -> Result<()> {
    if sig.is_one() {
        return Err(Error::NotAboveOne(sig.to_string()));
    }
    Ok(())
}

fn product(sig: &PrimeSignature, term: impl Fn(u32) -> BigUint) -> BigUint {
    sig.exponents().fold(BigUint::one(), |acc, e| acc * term(e))
}

fn indicator(flag: bool) -> BigUint {
    if flag {
        BigUint::one()
    } else {
        BigUint::zero()
    }
}

fn ceil_half(x: BigUint) -> BigUint {
    (x + 1u32) >> 1
}

/// `floor((a + j) / j)`: the number of `j`-th power divisors contributed by
/// a prime with exponent `a`.
fn power_divisor_factor(a: u32, j: u32) -> BigUint {
    BigUint::from((a + j) / j)
}

fn exact_div(numerator: BigInt, denominator: u32, formula: &'static str) -> Result<ExactCount> {
    let den = BigInt::from(denominator);
    if numerator.sign() == Sign::Minus || !(&numerator % &den).is_zero() {
        return Err(Error::Indivisible {
            formula,
            numerator,
            denominator,
        });
    }
    Ok((numerator / den).magnitude().clone())
}

fn to_exact(value: BigInt, formula: &'static str) -> Result<ExactCount> {
    exact_div(value, 1, formula)
}

/// Ordered `k`-tuples of positive integers with product `m`:
/// `prod C(a_j + k - 1, k - 1)`.
pub fn nu1(sig: &PrimeSignature, k: u32) -> Result<ExactCount> {
    require_above_one(sig)?;
    if k == 0 {
        return Err(Error::FactorCount(k, ">= 1"));
    }
    Ok(nu1_unchecked(sig, k))
}

fn nu1_unchecked(sig: &PrimeSignature, k: u32) -> ExactCount {
    let k = u64::from(k);
    product(sig, |a| binomial(u64::from(a) + k - 1, k - 1))
}

/// Ordered `k`-tuples of integers `>= 2` with product `m`, by
/// inclusion-exclusion over the set of cells forced to 1.
pub fn nu2(sig: &PrimeSignature, k: u32) -> Result<ExactCount> {
    require_above_one(sig)?;
    if k == 0 {
        return Err(Error::FactorCount(k, ">= 1"));
    }
    let mut total = BigInt::zero();
    for i in 0..k {
        let term = BigInt::from(binomial(u64::from(k), u64::from(i)) * nu1_unchecked(sig, k - i));
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    to_exact(total, "nu2")
}

/// Numerator of `mu_1(m, 3)` over the denominator 6:
/// `prod C(a+2, 2) + 3 prod floor((a+2)/2) + 2 eps_3(m)`.
pub fn k3_numerator(sig: &PrimeSignature) -> BigInt {
    let choose = product(sig, |a| binomial(u64::from(a) + 2, 2));
    let squares = product(sig, |a| power_divisor_factor(a, 2));
    let cube = indicator(sig.is_perfect_power(3));
    BigInt::from(choose + squares * 3u32 + cube * 2u32)
}

/// `sum_{z^2 | m} tau(m / z^2)` = `prod floor((a+2)/2) (a - floor((a-2)/2))`.
/// `floor((a-2)/2)` is -1 at `a = 1`, which truncating division would get wrong.
fn square_cofactor_tau_sum(sig: &PrimeSignature) -> BigUint {
    product(sig, |a| {
        let a = i64::from(a);
        let lowered = floor_div(a - 2, 2).expect("positive divisor");
        power_divisor_factor(a as u32, 2) * BigUint::from((a - lowered) as u64)
    })
}

fn ceil_half_tau_of_root(sig: &PrimeSignature) -> BigUint {
    match sig.root(2) {
        Some(root) => ceil_half(tau(&root)),
        None => BigUint::zero(),
    }
}

/// Numerator of `mu_1(m, 4)` over the denominator 24.
pub fn k4_numerator(sig: &PrimeSignature) -> BigInt {
    let choose = product(sig, |a| binomial(u64::from(a) + 3, 3));
    let cubes = product(sig, |a| power_divisor_factor(a, 3));
    let square_sum = square_cofactor_tau_sum(sig);
    let mut num = BigInt::from(choose + cubes * 8u32 + square_sum * 6u32);
    if sig.is_perfect_power(2) {
        let squares = product(sig, |a| power_divisor_factor(a, 2));
        num += BigInt::from(squares * 6u32);
        num -= BigInt::from(ceil_half_tau_of_root(sig) * 6u32);
    }
    if sig.is_perfect_power(4) {
        num += 9;
    }
    num
}

/// Nondecreasing `k`-tuples of integers `>= ell` with product `m`, for
/// `k` in `1..=4` and `ell` in `{1, 2}`.
pub fn mu_closed(sig: &PrimeSignature, k: u32, ell: u64) -> Result<ExactCount> {
    require_above_one(sig)?;
    if !(1..=4).contains(&k) {
        return Err(Error::FactorCount(k, "1..=4"));
    }
    if !(1..=2).contains(&ell) {
        return Err(Error::LowerBound(ell, "{1, 2}"));
    }
    let mu1_2 = || ceil_half(tau(sig));
    let mu1_3 = || exact_div(k3_numerator(sig), 6, "mu_1(m, 3)");
    let mu1_4 = || exact_div(k4_numerator(sig), 24, "mu_1(m, 4)");
    // ell = 2 follows from mu_1(m, k) = sum_{i <= k} mu_2(m, i)
    let value = match (k, ell) {
        (1, _) => BigUint::one(),
        (2, 1) => mu1_2(),
        (2, _) => mu1_2() - 1u32,
        (3, 1) => mu1_3()?,
        (3, _) => mu1_3()? - mu1_2(),
        (4, 1) => mu1_4()?,
        _ => mu1_4()? - mu1_3()?,
    };
    Ok(value)
}

/// `mu'_1(m; beta)`: ways to write `m` as a product of distinct bases raised
/// to the multiplicities in `beta`.
///
/// Supported patterns: `{1}`, `{2}`, `{1,1}`, `{1,2}`, `{3}`, `{1,1,2}`,
/// `{1,3}`, `{2,2}`, `{4}`. All-distinct patterns of length three or more
/// have no closed form here and are rejected.
pub fn mu_pattern(sig: &PrimeSignature, pattern: &MultiplicityPattern) -> Result<ExactCount> {
    require_above_one(sig)?;
    let eps = |i: u32| indicator(sig.is_perfect_power(i));
    let value = match pattern.parts() {
        [1] => BigUint::one(),
        [2] => eps(2),
        [1, 1] => ceil_half(tau(sig)) - eps(2),
        [1, 2] => product(sig, |a| power_divisor_factor(a, 2)) - eps(3),
        [3] => eps(3),
        [1, 3] => product(sig, |a| power_divisor_factor(a, 3)) - eps(4),
        [2, 2] => pattern_two_two(sig),
        [4] => eps(4),
        [1, 1, 2] => {
            // m = x y z^2: pick z with z^2 | m, then an unordered {x, y}; drop
            // x = z (pattern {1,3}), x = y (each {2,2} pair seen twice, once
            // per choice of z) and x = y = z.
            let mut twice_s = BigInt::from(square_cofactor_tau_sum(sig));
            if sig.is_perfect_power(2) {
                twice_s += BigInt::from(product(sig, |a| power_divisor_factor(a, 2)));
            }
            let s = exact_div(twice_s, 2, "sum_{z^2 | m} ceil(tau(m / z^2) / 2)")?;
            let one_three = product(sig, |a| power_divisor_factor(a, 3)) - eps(4);
            let value = BigInt::from(s)
                - BigInt::from(one_three)
                - BigInt::from(pattern_two_two(sig) * 2u32)
                - BigInt::from(eps(4));
            to_exact(value, "mu'(m; 1,1,2)")?
        }
        _ => return Err(Error::UnsupportedPattern(pattern.parts().to_vec())),
    };
    Ok(value)
}

fn pattern_two_two(sig: &PrimeSignature) -> BigUint {
    if sig.is_perfect_power(2) {
        ceil_half_tau_of_root(sig) - indicator(sig.is_perfect_power(4))
    } else {
        BigUint::zero()
    }
}

/// `sum_{d | m} tau(d) = prod C(b_j + 2, 2)`.
pub fn sum_tau_over_divisors(sig: &PrimeSignature) -> ExactCount {
    product(sig, |b| binomial(u64::from(b) + 2, 2))
}

/// Number of `ell`-th power divisors, `prod floor((b_j + ell) / ell)`.
pub fn sum_eps_over_divisors(sig: &PrimeSignature, ell: u32) -> Result<ExactCount> {
    if ell < 2 {
        return Err(Error::LowerBound(u64::from(ell), ">= 2"));
    }
    Ok(product(sig, |b| power_divisor_factor(b, ell)))
}
