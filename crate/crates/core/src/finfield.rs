//! Finite fields `F_{p^r}` in the polynomial basis, with trace, discrete
//! logarithms and both kinds of characters.
//!
//! An element `c_0 + c_1 X + ... + c_{r-1} X^{r-1}` is addressed by its index
//! `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`, which is also its position in a
//! state vector over the additive group.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numtheory::{factorize, is_prime, mod_inverse, square_and_multiply, Factorization};
use crate::unity::CharValue;

/// Largest field order supported for dense simulation.
pub const FIELD_ORDER_BOUND: u64 = 1 << 16;

/// An element of a [`FieldCtx`], stored in index form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_q`, `q = p^r`, with a fixed modulus and generator.
pub struct FieldCtx {
    p: u64,
    r: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: FieldElement,
    order_factors: Option<Factorization>,
    baby_steps: HashMap<u32, u32>,
    baby_len: u64,
    giant_step: FieldElement,
    basis_traces: Vec<u64>,
    trace_dual: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl FieldCtx {
    /// Builds `F_{p^r}`.
    ///
    /// The modulus is the smallest monic irreducible polynomial of degree `r`
    /// when coefficient tuples `(c_0, ..., c_{r-1})` are compared
    /// lexicographically (for `r = 1` it is `X`). The generator is the
    /// nonzero element of smallest index with order `q - 1`.
    pub fn new(p: u64, r: u32) -> Result<Arc<FieldCtx>> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= FIELD_ORDER_BOUND)
            .ok_or_else(|| Error::capacity(format!("{p}^{r} exceeds the field bound 2^16")))?;
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, r as usize)
                .ok_or_else(|| Error::domain(format!("no irreducible of degree {r} over F_{p}")))?
        };
        let mut ctx = FieldCtx {
            p,
            r,
            q,
            modulus,
            generator: FieldElement(1),
            order_factors: if q > 2 { Some(factorize(q - 1)?) } else { None },
            baby_steps: HashMap::new(),
            baby_len: 1,
            giant_step: FieldElement(1),
            basis_traces: Vec::new(),
            trace_dual: Vec::new(),
        };
        ctx.generator = (1..q as u32)
            .map(FieldElement)
            .find(|&a| ctx.multiplicative_order(a) == q - 1)
            .ok_or_else(|| Error::domain("no generator found"))?;

        // baby-step table for discrete logs, built eagerly
        let m = ((q - 1) as f64).sqrt().ceil().max(1.0) as u64;
        let mut cur = ctx.one();
        for j in 0..m {
            ctx.baby_steps.entry(cur.0).or_insert(j as u32);
            cur = ctx.mul(cur, ctx.generator);
        }
        ctx.baby_len = m;
        let g_inv = ctx.inv(ctx.generator)?;
        ctx.giant_step = ctx.pow(g_inv, m);

        ctx.basis_traces = (0..r as usize)
            .map(|j| {
                let mut coeffs = vec![0; r as usize];
                coeffs[j] = 1;
                ctx.trace(ctx.element_from_coeffs(&coeffs))
            })
            .collect();
        ctx.trace_dual = (0..q as u32)
            .map(|y| {
                let y = FieldElement(y);
                let mut idx = 0u64;
                let mut xj = ctx.one();
                let x = ctx.x_element();
                let mut place = 1u64;
                for _ in 0..r {
                    idx += ctx.trace_linear(ctx.mul(xj, y)) * place;
                    place *= p;
                    xj = ctx.mul(xj, x);
                }
                idx as u32
            })
            .collect();
        Ok(Arc::new(ctx))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Field order `q = p^r`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first, length `r + 1`, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    fn x_element(&self) -> FieldElement {
        if self.r == 1 {
            // X reduces to 0 modulo the degree-one modulus X
            self.zero()
        } else {
            FieldElement(self.p as u32)
        }
    }

    /// Element with the given index, if it is below `q`.
    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::domain(format!(
                "index {index} out of range for F_{}",
                self.q
            )));
        }
        Ok(FieldElement(index as u32))
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u32).map(FieldElement)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut v = a.0 as u64;
        (0..self.r)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::domain("coefficients must be r values in [0, p)"));
        }
        Ok(self.element_from_coeffs(coeffs))
    }

    fn element_from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let idx = coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c);
        FieldElement(idx as u32)
    }

    fn digitwise(&self, a: FieldElement, b: FieldElement, op: impl Fn(u64, u64) -> u64) -> FieldElement {
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            out += op(x % self.p, y % self.p) % self.p * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out as u32)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.digitwise(a, b, |x, y| x + y)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        self.digitwise(a, b, |x, y| x + p - y)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(self.zero(), a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (p, r) = (self.p, self.r as usize);
        if r == 1 {
            return FieldElement((a.0 as u64 * b.0 as u64 % p) as u32);
        }
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in ca.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (r..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                for j in 0..r {
                    prod[d - r + j] = (prod[d - r + j] + (p - c) * self.modulus[j]) % p;
                }
                prod[d] = 0;
            }
        }
        self.element_from_coeffs(&prod[..r])
    }

    /// `a^exp` by square-and-multiply.
    pub fn pow(&self, a: FieldElement, exp: u64) -> FieldElement {
        square_and_multiply::<_, ()>(&a, exp, || Ok(self.one()), |x, y| Ok(self.mul(*x, *y)))
            .expect("infallible")
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::domain("inverse of zero"));
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn multiplicative_order(&self, a: FieldElement) -> u64 {
        let mut order = self.q - 1;
        if let Some(f) = &self.order_factors {
            for p in f.primes() {
                while order.is_multiple_of(p) && self.pow(a, order / p) == self.one() {
                    order /= p;
                }
            }
        }
        order
    }

    /// Absolute trace `Tr(a) = a + a^p + ... + a^{p^{r-1}}`, an element of `F_p`.
    pub fn trace(&self, a: FieldElement) -> u64 {
        let mut sum = self.zero();
        let mut frob = a;
        for _ in 0..self.r {
            sum = self.add(sum, frob);
            frob = self.pow(frob, self.p);
        }
        debug_assert!(sum.0 < self.p as u32, "trace left the prime subfield");
        sum.0 as u64
    }

    /// Trace through the precomputed traces of the basis monomials.
    fn trace_linear(&self, a: FieldElement) -> u64 {
        self.coeffs(a)
            .iter()
            .zip(&self.basis_traces)
            .fold(0, |acc, (&c, &t)| (acc + c * t) % self.p)
    }

    /// Index of the vector `(Tr(y), Tr(X y), ..., Tr(X^{r-1} y))` in `Z_p^r`.
    ///
    /// `Tr(xy) = sum_j x_j Tr(X^j y)`, so the field Fourier transform is the
    /// `Z_p^r` transform followed by this relabelling of the output.
    pub fn trace_dual_index(&self, y: FieldElement) -> usize {
        self.trace_dual[y.index()] as usize
    }

    /// Discrete log base the generator, by baby-step/giant-step.
    pub fn discrete_log(&self, a: FieldElement) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::domain("discrete log of zero"));
        }
        let mut gamma = a;
        for i in 0..=self.baby_len {
            if let Some(&j) = self.baby_steps.get(&gamma.0) {
                return Ok((i * self.baby_len + j as u64) % (self.q - 1));
            }
            gamma = self.mul(gamma, self.giant_step);
        }
        unreachable!("generator does not generate the multiplicative group")
    }

    /// Additive character `psi_y(x) = omega_p^{Tr(xy)}`.
    pub fn additive_char_value(&self, y: FieldElement, x: FieldElement) -> CharValue {
        CharValue::root(self.trace(self.mul(x, y)), self.p)
    }
}

/// A multiplicative character of `F_q`: `chi(g^l) = omega_{q-1}^{k l}`, `chi(0) = 0`.
#[derive(Debug, Clone)]
pub struct MultCharFF {
    ctx: Arc<FieldCtx>,
    k: u64,
}

impl MultCharFF {
    pub fn new(ctx: Arc<FieldCtx>, k: u64) -> Result<Self> {
        if k >= ctx.q() - 1 {
            return Err(Error::domain(format!(
                "character index {k} out of range [0, {})",
                ctx.q() - 1
            )));
        }
        Ok(MultCharFF { ctx, k })
    }

    /// The quadratic character (the Legendre symbol on prime fields).
    pub fn quadratic(ctx: Arc<FieldCtx>) -> Result<Self> {
        if ctx.p() == 2 {
            return Err(Error::domain("no quadratic character in characteristic 2"));
        }
        let k = (ctx.q() - 1) / 2;
        Self::new(ctx, k)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn index(&self) -> u64 {
        self.k
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    pub fn value(&self, a: FieldElement) -> CharValue {
        match self.ctx.discrete_log(a) {
            Err(_) => CharValue::Zero,
            Ok(l) => CharValue::root(
                (self.k as u128 * l as u128 % (self.ctx.q() - 1) as u128) as u64,
                self.ctx.q() - 1,
            ),
        }
    }

    /// Values at every element, in index order.
    pub fn values(&self) -> Vec<CharValue> {
        let q = self.ctx.q();
        let mut out = vec![CharValue::Zero; q as usize];
        let mut cur = self.ctx.one();
        for l in 0..q - 1 {
            out[cur.index()] =
                CharValue::root((self.k as u128 * l as u128 % (q - 1) as u128) as u64, q - 1);
            cur = self.ctx.mul(cur, self.ctx.generator());
        }
        out
    }
}

// ---- polynomials over F_p, coefficient vectors with the constant term first ----

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = mod_inverse(m[dm], p).expect("nonzero leading coefficient");
    let mut a = a.to_vec();
    while a.len() > dm {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        if c != 0 {
            for j in 0..=dm {
                a[da - dm + j] = (a[da - dm + j] + (p - c) * m[j]) % p;
            }
        }
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    trim(a)
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `f` of degree `r` is irreducible iff
/// `gcd(X^{p^k} - X, f) = 1` for every `1 <= k <= r/2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = f.len() - 1;
    if f[0] == 0 {
        return false;
    }
    let mut xpk = vec![0, 1];
    for _ in 0..r / 2 {
        // raise to the p-th power
        xpk = square_and_multiply::<_, ()>(&xpk, p, || Ok(vec![1]), |a, b| {
            Ok(poly_mulmod(a, b, f, p))
        })
        .expect("infallible");
        let mut h = xpk.clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(f, &h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, r: usize) -> Option<Vec<u64>> {
    let total = p.checked_pow(r as u32)?;
    (0..total).find_map(|t| {
        // c_0 is the most significant digit of t
        let mut f: Vec<u64> = (0..r).map(|j| (t / p.pow((r - 1 - j) as u32)) % p).collect();
        f.push(1);
        is_irreducible(&f, p).then_some(f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::legendre_symbol;
    use num_complex::Complex64;

    fn small_fields() -> Vec<Arc<FieldCtx>> {
        let mut out = Vec::new();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61] {
            let mut r = 1;
            while p.pow(r) <= 64 {
                out.push(FieldCtx::new(p, r).unwrap());
                r += 1;
            }
        }
        out
    }

    #[test]
    fn construction_examples() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f7.modulus(), &[0, 1]);
        assert_eq!(f7.generator().index(), 3);
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f9.q(), 9);
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert!(matches!(FieldCtx::new(2, 17), Err(Error::Capacity(_))));
        assert!(matches!(FieldCtx::new(9, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn generator_of_f7_by_enumeration() {
        let powers: Vec<u64> = (0..6).scan(1u64, |acc, _| {
            let v = *acc;
            *acc = *acc * 3 % 7;
            Some(v)
        })
        .collect();
        let mut sorted = powers.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3, 4, 5, 6]);
        // 2 only reaches {1, 2, 4}
        assert_eq!(FieldCtx::new(7, 1).unwrap().generator().index(), 3);
    }

    #[test]
    fn moduli_are_irreducible_by_root_and_factor_search() {
        // brute force: no monic factor of degree 1..=r/2 divides the modulus
        for ctx in small_fields().into_iter().filter(|c| c.r() > 1) {
            let (p, r) = (ctx.p(), ctx.r() as usize);
            for d in 1..=r / 2 {
                for t in 0..p.pow(d as u32) {
                    let mut g: Vec<u64> = (0..d).map(|j| (t / p.pow(j as u32)) % p).collect();
                    g.push(1);
                    let rem = poly_rem(ctx.modulus(), &g, p);
                    assert!(rem.iter().any(|&c| c != 0), "{:?} divides {:?}", g, ctx.modulus());
                }
            }
        }
    }

    #[test]
    fn arithmetic_examples() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let w = f4.from_coeffs(&[0, 1]).unwrap();
        let w_plus_1 = f4.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f4.mul(w, w), w_plus_1);
        for a in f4.elements() {
            assert_eq!(f4.add(a, f4.zero()), a);
        }
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f7.inv(f7.element(3).unwrap()).unwrap(), f7.element(5).unwrap());
        assert!(matches!(f7.inv(f7.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn field_axioms_hold() {
        for ctx in small_fields() {
            for a in ctx.elements() {
                assert_eq!(ctx.add(a, ctx.neg(a)), ctx.zero());
                if a != ctx.zero() {
                    assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
                }
                for b in ctx.elements() {
                    assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                    assert_eq!(ctx.sub(ctx.add(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let w = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.trace(w), 1);
        assert_eq!(f4.trace(f4.zero()), 0);
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f9.trace(f9.one()), 2);
    }

    #[test]
    fn trace_is_linear_and_matches_basis_form() {
        for ctx in small_fields() {
            for a in ctx.elements() {
                assert_eq!(ctx.trace(a), ctx.trace_linear(a));
                for b in ctx.elements().step_by(3) {
                    assert_eq!(ctx.trace(ctx.add(a, b)), (ctx.trace(a) + ctx.trace(b)) % ctx.p());
                }
            }
        }
    }

    #[test]
    fn trace_dual_is_a_bijection() {
        for ctx in small_fields() {
            let mut seen = vec![false; ctx.q() as usize];
            for y in ctx.elements() {
                seen[ctx.trace_dual_index(y)] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn discrete_log_examples() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f7.discrete_log(f7.generator()).unwrap(), 1);
        assert_eq!(f7.discrete_log(f7.one()).unwrap(), 0);
        assert_eq!(f7.discrete_log(f7.element(6).unwrap()).unwrap(), 3);
        assert!(f7.discrete_log(f7.zero()).is_err());
    }

    #[test]
    fn discrete_log_round_trip() {
        for (p, r) in [(2, 12), (3, 7), (5, 5), (7, 4), (4093, 1), (61, 2), (13, 3)] {
            let ctx = FieldCtx::new(p, r).unwrap();
            assert!(ctx.q() <= 1 << 12);
            for a in ctx.elements().skip(1) {
                let l = ctx.discrete_log(a).unwrap();
                assert_eq!(ctx.pow(ctx.generator(), l), a);
            }
        }
    }

    #[test]
    fn mult_char_examples() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        let chi = MultCharFF::new(f7.clone(), 3).unwrap();
        assert_eq!(chi.value(f7.element(3).unwrap()).as_sign(), Some(-1));
        assert_eq!(chi.value(f7.one()), CharValue::ONE);
        assert_eq!(chi.value(f7.zero()), CharValue::Zero);
        assert!(MultCharFF::new(f7, 6).is_err());
    }

    #[test]
    fn mult_char_is_multiplicative() {
        for ctx in small_fields() {
            for k in 0..ctx.q() - 1 {
                let chi = MultCharFF::new(ctx.clone(), k).unwrap();
                let vals = chi.values();
                for a in ctx.elements() {
                    assert_eq!(vals[a.index()], chi.value(a));
                    for b in ctx.elements() {
                        assert_eq!(vals[ctx.mul(a, b).index()], vals[a.index()] * vals[b.index()]);
                    }
                }
            }
        }
    }

    #[test]
    fn additive_char_examples() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        for x in f7.elements() {
            assert_eq!(f7.additive_char_value(f7.zero(), x), CharValue::ONE);
        }
        assert_eq!(
            f7.additive_char_value(f7.one(), f7.element(3).unwrap()),
            CharValue::root(3, 7)
        );
        let f4 = FieldCtx::new(2, 2).unwrap();
        let w = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.additive_char_value(w, w).as_sign(), Some(-1));
    }

    #[test]
    fn additive_char_is_additive() {
        for ctx in small_fields() {
            for y in ctx.elements() {
                for a in ctx.elements() {
                    for b in ctx.elements() {
                        assert_eq!(
                            ctx.additive_char_value(y, ctx.add(a, b)),
                            ctx.additive_char_value(y, a) * ctx.additive_char_value(y, b)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for ctx in small_fields() {
            for y in ctx.elements().skip(1) {
                let s: Complex64 = ctx
                    .elements()
                    .map(|x| ctx.additive_char_value(y, x).to_complex())
                    .sum();
                assert!(s.norm() < 1e-9);
            }
            for k in 1..ctx.q() - 1 {
                let chi = MultCharFF::new(ctx.clone(), k).unwrap();
                let s: Complex64 = chi.values().into_iter().map(CharValue::to_complex).sum();
                assert!(s.norm() < 1e-9, "q={} k={k}", ctx.q());
            }
        }
    }

    #[test]
    fn quadratic_character_is_legendre() {
        for p in (3..=97).filter(|&p| is_prime(p)) {
            let ctx = FieldCtx::new(p, 1).unwrap();
            let chi = MultCharFF::quadratic(ctx.clone()).unwrap();
            for a in ctx.elements() {
                assert_eq!(
                    chi.value(a).as_sign().unwrap(),
                    legendre_symbol(a.index() as i64, p).unwrap()
                );
            }
        }
    }
}
