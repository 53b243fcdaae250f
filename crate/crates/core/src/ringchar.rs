//! Multiplicative characters of `Z/nZ`, built as CRT products of characters
//! of the prime-power unit groups.
//!
//! Every component unit group must be cyclic, which rules out moduli
//! divisible by 8. Component `i` is indexed by `k_i` against the smallest
//! primitive root `g_i` of `p_i^{m_i}`: `chi_i(g_i^l) = omega^{k_i l}` with
//! `omega` a primitive `phi(p_i^{m_i})`-th root of unity.

use crate::error::{Error, Result};
use crate::numtheory::{divisors, factorize, gcd, mul_mod, phi_of, primitive_root_prime_power, Factorization};
use crate::unity::CharValue;

/// Largest modulus accepted by [`RingChar::new`].
pub const RING_MODULUS_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Component {
    prime: u64,
    exponent: u32,
    modulus: u64,
    order: u64,
    generator: u64,
    index: u64,
    /// residue -> discrete log base `generator`, `u32::MAX` on non-units
    logs: Vec<u32>,
}

impl Component {
    fn new(prime: u64, exponent: u32, index: u64) -> Result<Self> {
        let modulus = prime.pow(exponent);
        let order = (prime - 1) * prime.pow(exponent - 1);
        if index >= order {
            return Err(Error::domain(format!(
                "index {index} out of range [0, {order}) for modulus {modulus}"
            )));
        }
        let generator = primitive_root_prime_power(prime, exponent)?;
        let mut logs = vec![u32::MAX; modulus as usize];
        let mut cur = 1 % modulus;
        for l in 0..order {
            logs[cur as usize] = l as u32;
            cur = mul_mod(cur, generator, modulus);
        }
        if modulus == 1 {
            logs[0] = 0;
        }
        Ok(Component {
            prime,
            exponent,
            modulus,
            order,
            generator,
            index,
            logs,
        })
    }

    fn value(&self, x: u64) -> CharValue {
        match self.logs[(x % self.modulus) as usize] {
            u32::MAX => CharValue::Zero,
            l => CharValue::root(self.index * l as u64 % self.order, self.order),
        }
    }
}

/// A multiplicative character of `Z/nZ`, extended by zero to non-units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingChar {
    n: u64,
    factorization: Factorization,
    components: Vec<Component>,
    period: u64,
}

impl RingChar {
    /// Character with component indices `k_i`, one per prime power of `n`
    /// in ascending prime order.
    pub fn new(n: u64, indices: &[u64]) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("modulus must be at least 3, got {n}")));
        }
        if n.is_multiple_of(8) {
            return Err(Error::domain(format!(
                "modulus {n} is divisible by 8; its unit group is not cyclic"
            )));
        }
        if n > RING_MODULUS_BOUND {
            return Err(Error::capacity(format!("modulus {n} exceeds {RING_MODULUS_BOUND}")));
        }
        let factorization = factorize(n)?;
        if indices.len() != factorization.factors().len() {
            return Err(Error::domain(format!(
                "{} component indices given for {} prime powers",
                indices.len(),
                factorization.factors().len()
            )));
        }
        let components = factorization
            .factors()
            .iter()
            .zip(indices)
            .map(|(&(p, e), &k)| Component::new(p, e, k))
            .collect::<Result<Vec<_>>>()?;
        let mut chi = RingChar {
            n,
            factorization,
            components,
            period: n,
        };
        chi.period = chi.find_period()?;
        Ok(chi)
    }

    /// The character whose components all have order two where possible
    /// (`k_i = phi(p_i^{m_i}) / 2`). For squarefree odd `n` this is the
    /// Jacobi symbol `(x / n)`.
    pub fn quadratic(n: u64) -> Result<Self> {
        let f = factorize(n)?;
        let indices: Vec<u64> = f
            .factors()
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1) / 2)
            .collect();
        Self::new(n, &indices)
    }

    /// The Jacobi symbol as a character of `Z/nZ`, for squarefree odd `n`.
    pub fn jacobi(n: u64) -> Result<Self> {
        if n.is_multiple_of(2) || !factorize(n)?.is_squarefree() {
            return Err(Error::domain(format!(
                "Jacobi character needs a squarefree odd modulus, got {n}"
            )));
        }
        Self::quadratic(n)
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn indices(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.index).collect()
    }

    /// Component generators, in the order of the factorization.
    pub fn generators(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.generator).collect()
    }

    /// Smallest `l > 0` with `chi(x + l) = chi(x)` for all `x`.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn value(&self, x: u64) -> CharValue {
        let x = x % self.n;
        self.components
            .iter()
            .fold(CharValue::ONE, |acc, c| acc * c.value(x))
    }

    pub fn value_signed(&self, x: i64) -> CharValue {
        self.value(x.rem_euclid(self.n as i64) as u64)
    }

    /// Values on `0..n`.
    pub fn values(&self) -> Vec<CharValue> {
        (0..self.n).map(|x| self.value(x)).collect()
    }

    pub fn is_completely_nontrivial(&self) -> bool {
        self.components.iter().all(|c| c.index != 0)
    }

    /// Completely nontrivial and aperiodic on `0..n`.
    pub fn is_primitive(&self) -> bool {
        self.is_completely_nontrivial() && self.period == self.n
    }

    fn find_period(&self) -> Result<u64> {
        let values = self.values();
        let n = self.n as usize;
        for d in divisors(self.n)? {
            let d = d as usize;
            if (0..n).all(|x| values[(x + d) % n] == values[x]) {
                return Ok(d as u64);
            }
        }
        unreachable!("n itself is always a period")
    }

    /// The primitive character on `Z/lZ`, `l` the period, that agrees with
    /// this one on `0..l`.
    pub fn restrict_to_period(&self) -> Result<PrimitiveChar> {
        if !self.is_completely_nontrivial() {
            return Err(Error::domain(
                "only completely nontrivial characters restrict to a primitive character",
            ));
        }
        let l = self.period;
        if l == self.n {
            return Ok(PrimitiveChar(self.clone()));
        }
        let lf = factorize(l)?;
        let mut indices = Vec::with_capacity(lf.factors().len());
        for &(p, c) in lf.factors() {
            let comp = self
                .components
                .iter()
                .find(|comp| comp.prime == p)
                .expect("period divides the modulus");
            // chi_i factors through (Z/p^c)^*; read off its value on the
            // generator of that smaller group
            let small = Component::new(p, c, 0)?;
            let CharValue::Root { num, den } = comp.value(small.generator) else {
                unreachable!("generator is a unit");
            };
            if small.order % den != 0 {
                return Err(Error::domain(format!(
                    "component mod {} does not factor through mod {}",
                    comp.modulus, small.modulus
                )));
            }
            indices.push(num * (small.order / den));
        }
        let restricted = RingChar::new(l, &indices)?;
        debug_assert!((0..l).all(|x| restricted.value(x) == self.value(x)));
        if !restricted.is_primitive() {
            return Err(Error::domain("restriction is not primitive"));
        }
        Ok(PrimitiveChar(restricted))
    }

    /// Whether `x` is a unit modulo `n`.
    pub fn is_unit(&self, x: u64) -> bool {
        gcd(x % self.n, self.n) == 1
    }

    /// `phi(n)`.
    pub fn unit_count(&self) -> u64 {
        phi_of(&self.factorization)
    }
}

/// A [`RingChar`] known to be primitive on its modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveChar(RingChar);

impl PrimitiveChar {
    pub fn new(chi: RingChar) -> Result<Self> {
        if !chi.is_primitive() {
            return Err(Error::domain(format!(
                "character mod {} is not primitive (period {})",
                chi.modulus(),
                chi.period()
            )));
        }
        Ok(PrimitiveChar(chi))
    }

    pub fn as_ring_char(&self) -> &RingChar {
        &self.0
    }

    pub fn into_inner(self) -> RingChar {
        self.0
    }
}

impl std::ops::Deref for PrimitiveChar {
    type Target = RingChar;

    fn deref(&self) -> &RingChar {
        &self.0
    }
}
