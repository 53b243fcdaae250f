//! Integer and modular arithmetic: gcd, powers, factoring, residue symbols,
//! CRT and best rational approximation.
//!
//! Everything here works on machine integers. Factoring is plain trial
//! division and is capped at [`FACTOR_BOUND`].

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest integer [`factorize`] accepts.
pub const FACTOR_BOUND: u64 = 1 << 40;

/// Prime factorization `p_1^{e_1} ... p_k^{e_k}` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// `(prime, exponent)` pairs in ascending prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Prime powers `p_i^{e_i}` in the same order as [`Self::factors`].
    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, e)| p.pow(e)).collect()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// The integer this factorization describes.
    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Reduced fraction `numerator / denominator` with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    numerator: u64,
    denominator: u64,
}

impl Fraction {
    /// Builds `numerator / denominator` in lowest terms.
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::domain("fraction with zero denominator"));
        }
        let g = gcd(numerator, denominator);
        Ok(Fraction {
            numerator: numerator / g,
            denominator: denominator / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Returns `(g, u, v)` with `g = gcd(a, b) >= 0` and `u*a + v*b = g`.
pub fn extended_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a == 0 && b == 0 {
        return Err(Error::domain("extended_gcd(0, 0) is undefined"));
    }
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    Ok((old_r as i64, old_s as i64, old_t as i64))
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let (g, u, _) = extended_gcd((a % m) as i64, m as i64).ok()?;
    if g != 1 {
        return None;
    }
    Some(u.rem_euclid(m as i64) as u64)
}

/// Left-to-right square-and-multiply over any monoid given by `mul`.
///
/// Uses `bits(exp) - 1` squarings and `popcount(exp) - 1` extra
/// multiplications, so at most `2 * ceil(log2(exp + 1))` calls to `mul`.
/// `exp == 0` returns `one` without calling `mul`.
pub fn square_and_multiply<T, E>(
    base: &T,
    exp: u64,
    one: impl FnOnce() -> std::result::Result<T, E>,
    mut mul: impl FnMut(&T, &T) -> std::result::Result<T, E>,
) -> std::result::Result<T, E>
where
    T: Clone,
{
    if exp == 0 {
        return one();
    }
    let top = 63 - exp.leading_zeros();
    let mut acc = base.clone();
    for bit in (0..top).rev() {
        acc = mul(&acc, &acc)?;
        if (exp >> bit) & 1 == 1 {
            acc = mul(&acc, base)?;
        }
    }
    Ok(acc)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m`, for `m >= 2`.
pub fn mod_pow(base: u64, exp: u64, m: u64) -> u64 {
    mod_pow_counted(base, exp, m).0
}

/// Like [`mod_pow`] but also reports how many modular multiplications were done.
pub fn mod_pow_counted(base: u64, exp: u64, m: u64) -> (u64, usize) {
    assert!(m >= 2, "mod_pow modulus must be at least 2");
    let mut count = 0usize;
    let value = square_and_multiply::<u64, ()>(
        &(base % m),
        exp,
        || Ok(1 % m),
        |a, b| {
            count += 1;
            Ok(mul_mod(*a, *b, m))
        },
    )
    .expect("infallible");
    (value, count)
}

/// Deterministic Miller–Rabin for all `u64`.
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
        let mut x = mod_pow(a, d, n);
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

/// Factors `2 <= n <= FACTOR_BOUND` by trial division on a mod-30 wheel.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::domain(format!("cannot factor {n}")));
    }
    if n > FACTOR_BOUND {
        return Err(Error::capacity(format!(
            "{n} exceeds the factoring bound 2^40"
        )));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut take = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    for p in [2, 3, 5] {
        take(p, &mut rest);
    }
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut candidate = 7u64;
    let mut i = 0;
    while candidate * candidate <= rest {
        take(candidate, &mut rest);
        candidate += WHEEL[i];
        i = (i + 1) % WHEEL.len();
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

/// Euler's totient. `euler_phi(1) == 1`.
pub fn euler_phi(n: u64) -> Result<u64> {
    match n {
        0 => Err(Error::domain("euler_phi(0) is undefined")),
        1 => Ok(1),
        _ => Ok(phi_of(&factorize(n)?)),
    }
}

pub(crate) fn phi_of(f: &Factorization) -> u64 {
    f.factors()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 1 {
        return Ok(vec![1]);
    }
    let f = factorize(n)?;
    let mut out = vec![1u64];
    for &(p, e) in f.factors() {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Multiplicative order of `a` modulo `m`, given the group order and its factorization.
pub(crate) fn multiplicative_order(a: u64, m: u64, group_order: u64, f: &Factorization) -> u64 {
    let mut order = group_order;
    for p in f.primes() {
        while order.is_multiple_of(p) && mod_pow(a, order / p, m) == 1 {
            order /= p;
        }
    }
    order
}

/// Smallest generator of the cyclic group `(Z/p^e)^*`.
///
/// Defined for odd primes and for `p^e` in {2, 4}; other powers of two have
/// non-cyclic unit groups.
pub fn primitive_root_prime_power(p: u64, e: u32) -> Result<u64> {
    if p == 2 && e >= 3 {
        return Err(Error::domain("(Z/2^e)^* is not cyclic for e >= 3"));
    }
    if !is_prime(p) || e == 0 {
        return Err(Error::domain(format!("{p}^{e} is not a prime power")));
    }
    let m = p.pow(e);
    if m == 2 {
        return Ok(1);
    }
    let order = (p - 1) * p.pow(e - 1);
    let f = factorize(order)?;
    (2..m)
        .filter(|&g| g % p != 0)
        .find(|&g| multiplicative_order(g, m, order, &f) == order)
        .ok_or_else(|| Error::domain(format!("no primitive root modulo {m}")))
}

/// Legendre symbol `(x / p)` for an odd prime `p`.
pub fn legendre_symbol(x: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    jacobi_symbol(x, p)
}

/// Jacobi symbol `(x / n)` for odd `n >= 3`, by quadratic reciprocity.
pub fn jacobi_symbol(x: i64, n: u64) -> Result<i8> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "Jacobi symbol needs an odd modulus >= 3, got {n}"
        )));
    }
    let mut a = (x as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        if twos % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        (a, n) = (n % a, a);
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Residues of `x` modulo each prime power of `f`.
pub fn crt_split(x: u64, f: &Factorization) -> Vec<u64> {
    f.prime_powers().into_iter().map(|m| x % m).collect()
}

/// Inverse of [`crt_split`]: the unique `x` in `[0, n)` with the given residues.
pub fn crt_join(residues: &[u64], f: &Factorization) -> Result<u64> {
    let moduli = f.prime_powers();
    if residues.len() != moduli.len() {
        return Err(Error::domain("residue count does not match factorization"));
    }
    let n = f.value();
    let mut x = 0u64;
    for (&r, &m) in residues.iter().zip(&moduli) {
        let cofactor = n / m;
        let inv = mod_inverse(cofactor % m, m)
            .ok_or_else(|| Error::domain("factorization moduli are not coprime"))?;
        let term = mul_mod(mul_mod(r % m, inv, m), cofactor, n);
        x = (x + term) % n;
    }
    Ok(x)
}

/// Closest fraction to `x/q` with denominator at most `max_den`.
///
/// Walks the continued-fraction convergents of `x/q`; when the next
/// convergent would exceed the bound, the answer is either the last
/// convergent or the largest admissible semiconvergent. Ties go to the
/// smaller denominator.
pub fn cf_best_approx(x: u64, q: u64, max_den: u64) -> Result<Fraction> {
    if q == 0 || x >= q {
        return Err(Error::domain(format!("need 0 <= x < q, got x={x}, q={q}")));
    }
    if max_den == 0 {
        return Err(Error::domain("denominator bound must be positive"));
    }
    // (h_{k-1}, k_{k-1}) and (h_k, k_k)
    let (mut h0, mut k0, mut h1, mut k1) = (0u64, 1u64, 1u64, 0u64);
    let (mut num, mut den) = (x, q);
    loop {
        let a = num / den;
        let k2 = a.saturating_mul(k1).saturating_add(k0);
        if k2 > max_den {
            break;
        }
        let h2 = a * h1 + h0;
        (h0, k0, h1, k1) = (h1, k1, h2, k2);
        (num, den) = (den, num - a * den);
        if den == 0 {
            return Fraction::new(h1, k1);
        }
    }
    // Largest semiconvergent that still fits under the bound.
    let t = (max_den - k0) / k1;
    let semi = (h0 + t * h1, k0 + t * k1);
    let conv = (h1, k1);
    let err = |(a, b): (u64, u64)| -> u128 {
        // |x/q - a/b| * q, scaled by b: compare err/b across candidates
        (x as i128 * b as i128 - a as i128 * q as i128).unsigned_abs()
    };
    let (e_semi, e_conv) = (err(semi), err(conv));
    let lhs = e_semi * conv.1 as u128;
    let rhs = e_conv * semi.1 as u128;
    let pick = match lhs.cmp(&rhs) {
        Ordering::Less => semi,
        Ordering::Greater => conv,
        Ordering::Equal => {
            if semi.1 < conv.1 {
                semi
            } else {
                conv
            }
        }
    };
    Fraction::new(pick.0, pick.1)
}
