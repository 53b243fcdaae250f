//! A toy algebraically homomorphic cryptosystem and an attack on it.
//!
//! [`HomoOracle`] keeps plaintexts of `F_p` behind opaque [`Handle`]s and
//! exposes only addition, multiplication and a zero test. Every operation
//! mints a fresh random handle, so equal plaintexts built differently carry
//! different handles.
//!
//! The attack turns `E(s)` into an evaluator for `x -> (x + s | p)`:
//! `E(1) = E(s)^{p-1}`, then `E(x)` by double-and-add, `E(x + s)`, its
//! `(p-1)/2`-th power, and zero tests against `E(0)`, `E(1)`, `E(-1)`.
//! Recovering `s` is then a shifted Legendre symbol problem.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finfield::{FieldCtx, MultCharFF};
use crate::numtheory::{is_prime, square_and_multiply};
use crate::rng::Seed;
use crate::shiftalgos::{solve_shift_ff, Mode, ShiftInstanceFF};
use crate::unity::CharValue;

/// Largest prime modulus: the attack simulates a `p`-dimensional state.
pub const PRIME_BOUND: u64 = 1 << 13;

/// Shift-solver runs before the attack gives up.
pub const ATTACK_ATTEMPTS: usize = 25;

static NEXT_INSTANCE: AtomicU64 = AtomicU64::new(1);

/// An opaque ciphertext, valid only with the oracle that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Handle {
    instance: u64,
    id: u64,
}

/// Calls made to each homomorphic operation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub add: u64,
    pub mul: u64,
    pub zero_test: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.add + self.mul + self.zero_test
    }

    fn since(&self, earlier: &OpCounts) -> OpCounts {
        OpCounts {
            add: self.add - earlier.add,
            mul: self.mul - earlier.mul,
            zero_test: self.zero_test - earlier.zero_test,
        }
    }
}

struct Table {
    plaintexts: HashMap<u64, u64>,
    rng: ChaCha8Rng,
    counts: OpCounts,
    backdoor_reads: u64,
}

impl Table {
    fn issue(&mut self, instance: u64, plaintext: u64) -> Handle {
        loop {
            let id = self.rng.next_u64();
            if let std::collections::hash_map::Entry::Vacant(slot) = self.plaintexts.entry(id) {
                slot.insert(plaintext);
                return Handle { instance, id };
            }
        }
    }
}

/// Handle-table cryptosystem over `F_p` exposing `A`, `M` and `Z`.
pub struct HomoOracle {
    p: u64,
    instance: u64,
    table: Mutex<Table>,
}

impl std::fmt::Debug for HomoOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomoOracle")
            .field("p", &self.p)
            .field("counts", &self.counts())
            .finish_non_exhaustive()
    }
}

/// A new oracle holding the secret `s`, and the handle `E(s)`.
pub fn homo_new(p: u64, s: u64, seed: Seed) -> Result<(HomoOracle, Handle)> {
    if !(3..=PRIME_BOUND).contains(&p) || !is_prime(p) {
        return Err(Error::domain(format!("modulus must be an odd prime at most {PRIME_BOUND}, got {p}")));
    }
    if s >= p {
        return Err(Error::domain(format!("secret {s} is not below {p}")));
    }
    let oracle = HomoOracle {
        p,
        instance: NEXT_INSTANCE.fetch_add(1, Ordering::Relaxed),
        table: Mutex::new(Table {
            plaintexts: HashMap::new(),
            rng: seed.rng(),
            counts: OpCounts::default(),
            backdoor_reads: 0,
        }),
    };
    let es = oracle.lock().issue(oracle.instance, s);
    Ok((oracle, es))
}

impl HomoOracle {
    pub fn p(&self) -> u64 {
        self.p
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Table> {
        self.table.lock().expect("oracle table poisoned")
    }

    fn plaintext(&self, table: &Table, h: Handle) -> Result<u64> {
        if h.instance != self.instance {
            return Err(Error::domain("handle was issued by another oracle"));
        }
        table
            .plaintexts
            .get(&h.id)
            .copied()
            .ok_or_else(|| Error::domain("unknown handle"))
    }

    fn binary(&self, a: Handle, b: Handle, op: impl FnOnce(u64, u64) -> u64, count: impl FnOnce(&mut OpCounts)) -> Result<Handle> {
        let mut table = self.lock();
        let (x, y) = (self.plaintext(&table, a)?, self.plaintext(&table, b)?);
        count(&mut table.counts);
        Ok(table.issue(self.instance, op(x, y)))
    }

    /// `A(E(x), E(y)) = E(x + y)`.
    pub fn add(&self, a: Handle, b: Handle) -> Result<Handle> {
        let p = self.p;
        self.binary(a, b, |x, y| (x + y) % p, |c| c.add += 1)
    }

    /// `M(E(x), E(y)) = E(xy)`.
    pub fn mul(&self, a: Handle, b: Handle) -> Result<Handle> {
        let p = self.p;
        self.binary(a, b, |x, y| x * y % p, |c| c.mul += 1)
    }

    /// `Z(E(x))`: true iff `x = 0`.
    pub fn is_zero(&self, h: Handle) -> Result<bool> {
        let mut table = self.lock();
        let x = self.plaintext(&table, h)?;
        table.counts.zero_test += 1;
        Ok(x == 0)
    }

    pub fn counts(&self) -> OpCounts {
        self.lock().counts
    }

    /// Decrypts a handle. Test instrumentation only; every call is counted
    /// in [`HomoOracle::backdoor_reads`].
    #[doc(hidden)]
    pub fn backdoor_plaintext(&self, h: Handle) -> Result<u64> {
        let mut table = self.lock();
        let x = self.plaintext(&table, h)?;
        table.backdoor_reads += 1;
        Ok(x)
    }

    #[doc(hidden)]
    pub fn backdoor_reads(&self) -> u64 {
        self.lock().backdoor_reads
    }
}

/// Evaluates `x -> legendre(x + s, p)` through `A`, `M` and `Z` only.
#[derive(Debug)]
pub struct LegendreQuery<'a> {
    oracle: &'a HomoOracle,
    es: Handle,
    e_zero: Handle,
    e_one: Handle,
    e_minus_one: Handle,
}

/// `E(k)` from `E(1)` by double-and-add (`E(0)` for `k = 0`).
fn encrypt_multiple(oracle: &HomoOracle, e_one: Handle, e_zero: Handle, k: u64) -> Result<Handle> {
    square_and_multiply(&e_one, k, || Ok(e_zero), |a, b| oracle.add(*a, *b))
}

/// Prepares the Legendre evaluator. `E(s)` must encrypt a nonzero value.
pub fn build_legendre_query(oracle: &HomoOracle, es: Handle) -> Result<LegendreQuery<'_>> {
    let p = oracle.p();
    if oracle.is_zero(es)? {
        return Err(Error::domain("E(s) encrypts zero; the secret is 0"));
    }
    // x^{p-1} = 1 for x != 0
    let e_one = square_and_multiply(&es, p - 1, || unreachable!("p - 1 > 0"), |a, b| oracle.mul(*a, *b))?;
    // E(p - 1) by double-and-add from E(1); p - 1 >= 2 so no E(0) is needed
    let e_minus_one = square_and_multiply(&e_one, p - 1, || unreachable!("p - 1 > 0"), |a, b| oracle.add(*a, *b))?;
    let e_zero = oracle.add(e_one, e_minus_one)?;
    Ok(LegendreQuery {
        oracle,
        es,
        e_zero,
        e_one,
        e_minus_one,
    })
}

impl LegendreQuery<'_> {
    /// `(x + s | p)` as a sign in `{-1, 0, 1}`.
    pub fn eval(&self, x: u64) -> Result<i8> {
        let o = self.oracle;
        let p = o.p();
        let ex = encrypt_multiple(o, self.e_one, self.e_zero, x % p)?;
        let shifted = o.add(ex, self.es)?;
        let t = square_and_multiply(&shifted, (p - 1) / 2, || unreachable!("(p - 1) / 2 > 0"), |a, b| o.mul(*a, *b))?;
        if o.is_zero(t)? {
            return Ok(0);
        }
        if o.is_zero(o.add(t, self.e_minus_one)?)? {
            return Ok(1);
        }
        if o.is_zero(o.add(t, self.e_one)?)? {
            return Ok(-1);
        }
        Err(Error::PromiseViolation("(p-1)/2-th power is not in {0, 1, -1}".into()))
    }

    /// `E(-k)` built from the stored `E(-1)`.
    fn encrypt_negative(&self, k: u64) -> Result<Handle> {
        encrypt_multiple(self.oracle, self.e_minus_one, self.e_zero, k % self.oracle.p())
    }
}

/// What the attack recovered and what it cost.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    pub secret: u64,
    /// State preparations performed (shift-solver runs).
    pub preparations: usize,
    /// Logical quantum queries: two per preparation (compute and uncompute).
    pub logical_queries: usize,
    /// Oracle calls spent building `E(0)`, `E(1)`, `E(-1)`.
    pub setup_calls: u64,
    /// Oracle calls spent evaluating the query on every basis point.
    pub evaluation_calls: u64,
    /// Largest number of oracle calls for a single basis point.
    pub max_calls_per_point: u64,
    /// Oracle calls spent on the final zero-test check(s).
    pub verification_calls: u64,
    pub counts: OpCounts,
}

/// Recovers the plaintext of `es` using only `A`, `M` and `Z`.
///
/// The simulator evaluates the query once per basis point to stand in for
/// the superposition query; each solver run reuses that table.
pub fn break_cryptosystem(oracle: &HomoOracle, es: Handle, mode: Mode) -> Result<AttackReport> {
    let start = oracle.counts();
    if oracle.is_zero(es)? {
        return Ok(AttackReport {
            secret: 0,
            preparations: 0,
            logical_queries: 0,
            setup_calls: oracle.counts().since(&start).total(),
            evaluation_calls: 0,
            max_calls_per_point: 0,
            verification_calls: 0,
            counts: oracle.counts().since(&start),
        });
    }
    let p = oracle.p();
    let query = build_legendre_query(oracle, es)?;
    let after_setup = oracle.counts();

    let mut table = Vec::with_capacity(p as usize);
    let mut max_calls_per_point = 0;
    for x in 0..p {
        let before = oracle.counts().total();
        table.push(CharValue::from_sign(query.eval(x)?));
        max_calls_per_point = max_calls_per_point.max(oracle.counts().total() - before);
    }
    let after_eval = oracle.counts();

    let ctx = FieldCtx::new(p, 1)?;
    let table = Arc::new(table);
    let lookup = table.clone();
    let instance = ShiftInstanceFF::from_oracle(MultCharFF::quadratic(ctx)?, Arc::new(move |x| lookup[x as usize]));

    let mut seeds = match mode {
        Mode::Exact => None,
        Mode::Sampled(seed) => Some(seed.rng()),
    };
    let attempts = if seeds.is_some() { ATTACK_ATTEMPTS } else { 1 };
    let mut preparations = 0;
    for _ in 0..attempts {
        preparations += 1;
        let run_mode = match seeds.as_mut() {
            None => Mode::Exact,
            Some(rng) => Mode::Sampled(Seed::new(rng.next_u64())),
        };
        let run = match solve_shift_ff(&instance, run_mode) {
            Ok(run) => run,
            Err(e) if e.is_retryable() => continue,
            Err(e) => return Err(e),
        };
        // r = 1, so the element index is the residue itself
        let candidate = run.solution.representative as u64;
        let difference = oracle.add(es, query.encrypt_negative(candidate)?)?;
        if oracle.is_zero(difference)? {
            let end = oracle.counts();
            return Ok(AttackReport {
                secret: candidate,
                preparations,
                logical_queries: 2 * preparations,
                setup_calls: after_setup.since(&start).total(),
                evaluation_calls: after_eval.since(&after_setup).total(),
                max_calls_per_point,
                verification_calls: end.since(&after_eval).total(),
                counts: end.since(&start),
            });
        }
    }
    Err(Error::Unresolved(format!("no verified secret after {attempts} solver runs")))
}
