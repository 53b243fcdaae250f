//! Hidden shift and hidden coset solvers.
//!
//! Every solver builds its states with [`crate::qsim`] and either reads the
//! answer off the exact output distribution ([`Mode::Exact`]) or measures it
//! with a seeded stream ([`Mode::Sampled`]). Exact mode reports the success
//! probability of a single run; sampled mode also samples the preparation
//! measurement, so a run can fail and surface as a retryable
//! [`Error::Miss`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finfield::{FieldElement, MultCharFF};
use crate::numtheory::{cf_best_approx, gcd, lcm, Fraction};
use crate::qsim::{
    amplitude_encode, amplitude_encode_sampled, dft, dft_inverse, exact_distribution, phase_multiply,
    sample_index, GroupSpec, PrepOutcome, QState, CYCLIC_DIM_BOUND, MAGNITUDE_TOL,
};
use crate::ringchar::{PrimitiveChar, RingChar};
use crate::rng::{below, Seed};
use crate::unity::CharValue;

/// Random points checked when verifying a sampled candidate.
pub const VERIFY_POINTS: usize = 40;

/// Denominators combined per round of period finding.
pub const PERIOD_BATCH: usize = 10;

/// Rounds of period finding before giving up.
pub const PERIOD_MAX_ROUNDS: usize = 20;

/// Attempts at the shift-recovery stage once the period is known.
pub const STAGE_TWO_ATTEMPTS: usize = 25;

/// Relative tolerance when deciding the support of a spectrum.
const SPECTRUM_EPS: f64 = 1e-9;

/// Oracle for a function on `Z` or on a group's index set.
pub type Oracle = Arc<dyn Fn(u64) -> CharValue + Send + Sync>;

/// Complex-valued oracle on a group's index set.
pub type ComplexOracle = Arc<dyn Fn(usize) -> Complex64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Read answers off exact distributions; post-select the preparation.
    Exact,
    /// Sample the preparation and the final measurement from the stream.
    Sampled(Seed),
}

/// The coset `representative + subgroup` of all valid shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSolution {
    pub group: GroupSpec,
    pub representative: usize,
    /// Elements of `H`, sorted.
    pub subgroup: Vec<usize>,
}

impl ShiftSolution {
    pub fn new(group: GroupSpec, representative: usize, mut subgroup: Vec<usize>) -> Self {
        subgroup.sort_unstable();
        ShiftSolution {
            group,
            representative,
            subgroup,
        }
    }

    /// `representative + H`, sorted.
    pub fn solution_set(&self) -> Vec<usize> {
        let mut set: Vec<usize> = self
            .subgroup
            .iter()
            .map(|&h| self.group.add(self.representative, h))
            .collect();
        set.sort_unstable();
        set
    }

    pub fn contains(&self, t: usize) -> bool {
        let d = self.group.sub(t, self.representative);
        self.subgroup.binary_search(&d).is_ok()
    }

    /// Whether the stored `H` is closed under addition and contains 0.
    pub fn subgroup_is_closed(&self) -> bool {
        self.subgroup.binary_search(&0).is_ok()
            && self.subgroup.iter().all(|&a| {
                self.subgroup
                    .iter()
                    .all(|&b| self.subgroup.binary_search(&self.group.add(a, b)).is_ok())
            })
    }
}

fn rng_for(mode: Mode) -> Option<ChaCha8Rng> {
    match mode {
        Mode::Exact => None,
        Mode::Sampled(seed) => Some(seed.rng()),
    }
}

/// Smallest index attaining the maximum.
fn argmax(dist: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p > dist[best] {
            best = i;
        }
    }
    best
}

fn prepare(
    group: GroupSpec,
    f: impl Fn(usize) -> Complex64,
    rng: Option<&mut ChaCha8Rng>,
) -> Result<PrepOutcome> {
    match rng {
        None => amplitude_encode(group, f),
        Some(rng) => amplitude_encode_sampled(group, f, rng)?
            .ok_or_else(|| Error::Miss("preparation measurement found f(x) = 0".into())),
    }
}

fn choose(dist: &[f64], rng: Option<&mut ChaCha8Rng>) -> usize {
    match rng {
        None => argmax(dist),
        Some(rng) => sample_index(dist, rng),
    }
}

/// Checks `pred(x)` on every `x < bound` (exact) or on random points.
fn verify(bound: u64, rng: Option<&mut ChaCha8Rng>, pred: impl Fn(u64) -> bool) -> bool {
    match rng {
        None => (0..bound).all(pred),
        Some(rng) => (0..VERIFY_POINTS).all(|_| pred(below(rng, bound))),
    }
}

/// A shifted multiplicative character of a finite field.
#[derive(Clone)]
pub struct ShiftInstanceFF {
    chi: MultCharFF,
    oracle: Oracle,
    hidden: Option<FieldElement>,
}

impl fmt::Debug for ShiftInstanceFF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShiftInstanceFF")
            .field("chi", &self.chi)
            .field("hidden", &self.hidden)
            .finish_non_exhaustive()
    }
}

impl ShiftInstanceFF {
    /// The instance `f(x) = chi(x + s)`.
    pub fn planted(chi: MultCharFF, s: FieldElement) -> Self {
        let ctx = chi.ctx().clone();
        let values = chi.values();
        let oracle: Oracle = Arc::new(move |x| {
            let x = ctx.element(x).expect("oracle index in range");
            values[ctx.add(x, s).index()]
        });
        ShiftInstanceFF {
            chi,
            oracle,
            hidden: Some(s),
        }
    }

    /// An instance whose oracle is promised to equal `x -> chi(x + s)`.
    pub fn from_oracle(chi: MultCharFF, oracle: Oracle) -> Self {
        ShiftInstanceFF {
            chi,
            oracle,
            hidden: None,
        }
    }

    pub fn chi(&self) -> &MultCharFF {
        &self.chi
    }

    pub fn hidden(&self) -> Option<FieldElement> {
        self.hidden
    }

    /// `f` at the element with index `x`.
    pub fn query(&self, x: u64) -> CharValue {
        (self.oracle)(x)
    }
}

/// Outcome of one run of a shift solver.
#[derive(Debug, Clone)]
pub struct ShiftRun {
    pub solution: ShiftSolution,
    /// Probability that one run (preparation included) produces this answer.
    pub success_probability: f64,
    /// Distribution right before the final measurement.
    pub distribution: Vec<f64>,
    /// The final measurement outcome (the negated shift).
    pub measured: usize,
}

/// Shift finding over `F_q`: prepare `f`, transform, multiply by `chi(y)`
/// away from 0, transform back and measure `-s`.
pub fn solve_shift_ff(instance: &ShiftInstanceFF, mode: Mode) -> Result<ShiftRun> {
    let chi = instance.chi();
    if chi.is_trivial() {
        return Err(Error::domain("the trivial character hides no shift"));
    }
    let ctx = chi.ctx().clone();
    let q = ctx.q();
    let group = GroupSpec::field(ctx.clone());
    let mut rng = rng_for(mode);

    let f: Vec<CharValue> = (0..q).map(|x| instance.query(x)).collect();
    let chi_values = chi.values();
    let zero = ctx.zero().index();

    let prep = prepare(group.clone(), |x| f[x].to_complex(), rng.as_mut())?;
    let spectrum = dft(&prep.state);
    let twisted = phase_multiply(&spectrum, |y| {
        if y == zero {
            Complex64::new(1.0, 0.0)
        } else {
            chi_values[y].to_complex()
        }
    })?;
    let distribution = exact_distribution(&dft_inverse(&twisted));
    let measured = choose(&distribution, rng.as_mut());
    let shift = group.neg(measured);

    let ok = verify(q, rng.as_mut(), |x| {
        instance.query(x) == chi_values[group.add(x as usize, shift)]
    });
    if !ok {
        return Err(miss_or_unresolved(mode, format!("candidate shift {shift} failed verification")));
    }
    Ok(ShiftRun {
        solution: ShiftSolution::new(group, shift, vec![zero]),
        success_probability: prep.success_probability() * distribution[measured],
        distribution,
        measured,
    })
}

fn miss_or_unresolved(mode: Mode, msg: String) -> Error {
    match mode {
        Mode::Exact => Error::Unresolved(msg),
        Mode::Sampled(_) => Error::Miss(msg),
    }
}

/// A shifted multiplicative character of `Z/nZ`.
#[derive(Clone)]
pub struct RingInstance {
    chi: RingChar,
    oracle: Oracle,
    hidden: Option<u64>,
}

impl fmt::Debug for RingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingInstance")
            .field("n", &self.chi.modulus())
            .field("indices", &self.chi.indices())
            .field("hidden", &self.hidden)
            .finish_non_exhaustive()
    }
}

impl RingInstance {
    pub fn planted(chi: RingChar, s: u64) -> Self {
        let n = chi.modulus();
        let s = s % n;
        let c = chi.clone();
        let oracle: Oracle = Arc::new(move |x| c.value(x % n + s));
        RingInstance {
            chi,
            oracle,
            hidden: Some(s),
        }
    }

    pub fn from_oracle(chi: RingChar, oracle: Oracle) -> Self {
        RingInstance {
            chi,
            oracle,
            hidden: None,
        }
    }

    pub fn chi(&self) -> &RingChar {
        &self.chi
    }

    pub fn hidden(&self) -> Option<u64> {
        self.hidden
    }

    pub fn query(&self, x: u64) -> CharValue {
        (self.oracle)(x)
    }
}

/// Outcome of the two-stage ring solver.
#[derive(Debug, Clone)]
pub struct RingRun {
    pub solution: ShiftSolution,
    pub success_probability: f64,
    /// Period recovered in stage one.
    pub period: u64,
    pub stage_one_distribution: Vec<f64>,
    pub stage_one_measured: usize,
    pub stage_two_distribution: Vec<f64>,
    pub stage_two_measured: usize,
}

struct StageTwo {
    shift: u64,
    probability: f64,
    distribution: Vec<f64>,
    measured: usize,
}

/// Shift recovery over `Z_l` for a primitive `chi'`, with `f` of period `l`.
fn stage_two(
    f: &dyn Fn(u64) -> CharValue,
    chi: &PrimitiveChar,
    rng: Option<&mut ChaCha8Rng>,
) -> Result<StageTwo> {
    let l = chi.modulus();
    let mut rng = rng;
    let group = GroupSpec::cyclic(l as usize)?;
    let prep = prepare(group.clone(), |x| f(x as u64).to_complex(), rng.as_deref_mut())?;
    let twisted = phase_multiply(&dft(&prep.state), |y| match chi.value(y as u64) {
        CharValue::Zero => Complex64::new(1.0, 0.0),
        v => v.to_complex(),
    })?;
    let distribution = exact_distribution(&dft_inverse(&twisted));
    let measured = match rng {
        // for even l every unit frequency is odd, so -s and -s + l/2 carry
        // the same mass; take the first tied outcome that is a valid shift
        None => {
            let top = distribution.iter().cloned().fold(0.0, f64::max);
            (0..l as usize)
                .filter(|&y| distribution[y] >= top - 1e-12)
                .find(|&y| {
                    let t = group.neg(y) as u64;
                    (0..l).all(|x| f(x) == chi.value(x + t))
                })
                .ok_or_else(|| Error::Unresolved("no maximal outcome verifies".into()))?
        }
        Some(rng) => sample_index(&distribution, rng),
    };
    Ok(StageTwo {
        shift: group.neg(measured) as u64,
        probability: prep.success_probability() * distribution[measured],
        distribution,
        measured,
    })
}

/// Two-stage shift finding over `Z/nZ` for a completely nontrivial `chi`.
///
/// Stage one Fourier samples `f` over `Z_n`; the outcome is a multiple of
/// `n/l` sharing no further factor with `n`, so `gcd(n, y)` gives `n/l`.
/// Stage two solves the shift over `Z_l` with the primitive character that
/// `chi` induces there. Valid shifts form the coset `s + <l>`.
pub fn solve_shift_ring(instance: &RingInstance, mode: Mode) -> Result<RingRun> {
    let chi = instance.chi();
    if !chi.is_completely_nontrivial() {
        return Err(Error::domain(
            "the character must be nontrivial on every prime-power component",
        ));
    }
    let n = chi.modulus();
    let group = GroupSpec::cyclic(n as usize)?;
    let mut rng = rng_for(mode);

    let f: Vec<CharValue> = (0..n).map(|x| instance.query(x)).collect();
    let prep = prepare(group.clone(), |x| f[x].to_complex(), rng.as_mut())?;
    let stage_one_distribution = exact_distribution(&dft(&prep.state));

    let mut class_mass: BTreeMap<u64, f64> = BTreeMap::new();
    for (y, &p) in stage_one_distribution.iter().enumerate() {
        *class_mass.entry(gcd(n, y as u64)).or_default() += p;
    }
    let stage_one_measured = match rng.as_mut() {
        None => {
            // representative of the heaviest gcd class (smallest class on ties)
            let mut best: Option<(u64, f64)> = None;
            for (&g, &m) in &class_mass {
                if best.is_none_or(|(_, bm)| m > bm) {
                    best = Some((g, m));
                }
            }
            let g = best.expect("nonempty distribution").0;
            (g % n) as usize
        }
        Some(rng) => sample_index(&stage_one_distribution, rng),
    };
    let n_over_l = gcd(n, stage_one_measured as u64);
    let period = n / n_over_l;
    let stage_one_probability = class_mass[&n_over_l];

    let restricted = chi.restrict_to_period()?;
    if restricted.modulus() != period {
        return Err(miss_or_unresolved(
            mode,
            format!("stage one suggested period {period}, character has period {}", restricted.modulus()),
        ));
    }
    let two = stage_two(&|x| f[(x % n) as usize], &restricted, rng.as_mut())?;
    let shift = two.shift;
    let ok = verify(n, rng.as_mut(), |x| {
        instance.query(x) == chi.value((x + shift) % n)
    });
    if !ok {
        return Err(miss_or_unresolved(mode, format!("candidate shift {shift} failed verification")));
    }
    let subgroup = (0..n_over_l).map(|j| (j * period) as usize).collect();
    Ok(RingRun {
        solution: ShiftSolution::new(group, shift as usize, subgroup),
        success_probability: prep.success_probability() * stage_one_probability * two.probability,
        period,
        stage_one_distribution,
        stage_one_measured,
        stage_two_distribution: two.distribution,
        stage_two_measured: two.measured,
    })
}

/// `(m, q_len)` for approximate sampling with period bound `n` and accuracy
/// `eps`: `m = ceil(n^2 / eps^2)` and `q_len` the next power of two at or
/// above `ceil(m / eps)`.
pub fn sampling_parameters(period_bound: u64, eps: f64) -> Result<(usize, usize)> {
    if period_bound == 0 || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!(
            "need a positive period bound and 0 < eps < 1, got {period_bound}, {eps}"
        )));
    }
    // guard against ceil(14400.000000000002) style rounding
    let ceil = |v: f64| (v - 1e-9).ceil() as usize;
    let nn = period_bound as f64;
    let m = ceil(nn * nn / (eps * eps));
    let q_len = ceil(m as f64 / eps).next_power_of_two();
    if q_len > CYCLIC_DIM_BOUND {
        return Err(Error::capacity(format!(
            "sampling register of size {q_len} exceeds {CYCLIC_DIM_BOUND}"
        )));
    }
    Ok((m, q_len))
}

/// Fourier sampling of a periodic function through a zero-padded register.
///
/// The register holds `f(0), ..., f(m-1)` followed by zeros up to `q_len`;
/// after the transform, an outcome `x` is reported as the best fraction
/// approximating `x / q_len` with denominator at most `denom_bound`
/// (read modulo 1, so `1/1` is reported as `0/1`).
#[derive(Debug, Clone)]
pub struct FourierSampler {
    m: usize,
    q_len: usize,
    denom_bound: u64,
    distribution: Vec<f64>,
}

impl FourierSampler {
    pub fn new(f: impl Fn(u64) -> Complex64, m: usize, q_len: usize, denom_bound: u64) -> Result<Self> {
        if m == 0 || m > q_len {
            return Err(Error::domain(format!("need 0 < m <= q_len, got m={m}, q_len={q_len}")));
        }
        let group = GroupSpec::cyclic(q_len)?;
        let zero = Complex64::new(0.0, 0.0);
        let prep = amplitude_encode(group, |x| if x < m { f(x as u64) } else { zero })?;
        Ok(FourierSampler {
            m,
            q_len,
            denom_bound,
            distribution: exact_distribution(&dft(&prep.state)),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q_len(&self) -> usize {
        self.q_len
    }

    fn fraction_of(&self, x: usize) -> Fraction {
        let fr = cf_best_approx(x as u64, self.q_len as u64, self.denom_bound)
            .expect("x is below q_len and the bound is positive");
        if fr.numerator() == fr.denominator() {
            Fraction::new(0, 1).expect("0/1")
        } else {
            fr
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Fraction {
        self.fraction_of(sample_index(&self.distribution, rng))
    }

    /// The exact distribution of [`FourierSampler::sample`].
    pub fn cf_distribution(&self) -> BTreeMap<Fraction, f64> {
        let mut out = BTreeMap::new();
        for (x, &p) in self.distribution.iter().enumerate() {
            if p > 0.0 {
                *out.entry(self.fraction_of(x)).or_default() += p;
            }
        }
        out
    }
}

/// One approximate Fourier sample; see [`FourierSampler`].
pub fn approx_fourier_sample(
    f: impl Fn(u64) -> Complex64,
    m: usize,
    q_len: usize,
    denom_bound: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Fraction> {
    Ok(FourierSampler::new(f, m, q_len, denom_bound)?.sample(rng))
}

/// Distribution of `y / n` in lowest terms when Fourier sampling one period
/// `f(0), ..., f(n-1)` exactly over `Z_n`.
pub fn rf_distribution(f: impl Fn(u64) -> Complex64, n: u64) -> Result<BTreeMap<Fraction, f64>> {
    let prep = amplitude_encode(GroupSpec::cyclic(n as usize)?, |x| f(x as u64))?;
    let mut out = BTreeMap::new();
    for (y, p) in exact_distribution(&dft(&prep.state)).into_iter().enumerate() {
        if p > 0.0 {
            *out.entry(Fraction::new(y as u64, n)?).or_default() += p;
        }
    }
    Ok(out)
}

/// `sum |a(k) - b(k)|` over the union of supports.
pub fn l1_distance(a: &BTreeMap<Fraction, f64>, b: &BTreeMap<Fraction, f64>) -> f64 {
    let mut total = 0.0;
    for (k, &p) in a {
        total += (p - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &p) in b {
        if !a.contains_key(k) {
            total += p;
        }
    }
    total
}

/// Outcome of shift finding with an unknown modulus.
#[derive(Debug, Clone)]
pub struct UnknownNRun {
    pub solution: ShiftSolution,
    pub period: u64,
    pub m: usize,
    pub q_len: usize,
    /// Period-finding rounds used (each draws a batch of fractions).
    pub rounds: usize,
    /// Every denominator drawn, in order.
    pub denominators: Vec<u64>,
    pub stage_two_attempts: usize,
}

/// Shift finding for `f(x) = chi(x + s)` on `Z` when the modulus of `chi` is
/// hidden and only an upper bound on its period is known.
///
/// `family(l)` must return the character the period-`l` function is built
/// from (for instance the Jacobi symbol modulo `l`).
pub fn solve_shift_unknown_n(
    f: &dyn Fn(u64) -> CharValue,
    family: &dyn Fn(u64) -> Result<RingChar>,
    period_bound: u64,
    eps: f64,
    seed: Seed,
) -> Result<UnknownNRun> {
    if period_bound < 2 {
        return Err(Error::domain("period bound must be at least 2"));
    }
    let (m, q_len) = sampling_parameters(period_bound, eps)?;
    let head: Vec<CharValue> = (0..m as u64).map(f).collect();
    if head.iter().all(|v| *v == head[0]) {
        return Err(Error::domain("f has period 1"));
    }
    let sampler = FourierSampler::new(|x| head[x as usize].to_complex(), m, q_len, period_bound)?;
    let mut rng = seed.rng();

    let mut denominators = Vec::new();
    let mut period = None;
    let mut rounds = 0;
    while rounds < PERIOD_MAX_ROUNDS {
        rounds += 1;
        let mut l = 1;
        for _ in 0..PERIOD_BATCH {
            let d = sampler.sample(&mut rng).denominator();
            denominators.push(d);
            l = lcm(l, d);
        }
        if l < 2 || l > period_bound {
            continue;
        }
        let span = (m as u64).max(1 << 20);
        if (0..VERIFY_POINTS).all(|_| {
            let x = below(&mut rng, span);
            f(x) == f(x + l)
        }) {
            period = Some(l);
            break;
        }
    }
    let Some(period) = period else {
        return Err(Error::Unresolved(format!(
            "no verified period after {rounds} rounds; denominators drawn: {denominators:?}"
        )));
    };

    let chi = PrimitiveChar::new(family(period)?).map_err(|e| {
        Error::Unresolved(format!("character family gives no primitive character mod {period}: {e}"))
    })?;
    let mut attempts = 0;
    while attempts < STAGE_TWO_ATTEMPTS {
        attempts += 1;
        let two = match stage_two(f, &chi, Some(&mut rng)) {
            Ok(two) => two,
            Err(e) if e.is_retryable() => continue,
            Err(e) => return Err(e),
        };
        let shift = two.shift;
        let span = period * 1024;
        let ok = (0..VERIFY_POINTS).all(|_| {
            let x = below(&mut rng, span);
            f(x) == chi.value((x + shift) % period)
        });
        if ok {
            return Ok(UnknownNRun {
                solution: ShiftSolution::new(GroupSpec::cyclic(period as usize)?, shift as usize, vec![0]),
                period,
                m,
                q_len,
                rounds,
                denominators,
                stage_two_attempts: attempts,
            });
        }
    }
    Err(Error::Unresolved(format!(
        "period {period} found but no shift verified in {STAGE_TWO_ATTEMPTS} attempts"
    )))
}

/// A hidden coset instance: known `g`, oracle `f(x) = g(x + s)`.
#[derive(Clone)]
pub struct HcpInstance {
    group: GroupSpec,
    g: Vec<Complex64>,
    oracle: ComplexOracle,
    hidden: Option<usize>,
}

impl fmt::Debug for HcpInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HcpInstance")
            .field("group", &self.group)
            .field("hidden", &self.hidden)
            .finish_non_exhaustive()
    }
}

impl HcpInstance {
    pub fn planted(group: GroupSpec, g: Vec<Complex64>, s: usize) -> Result<Self> {
        if g.len() != group.dim() {
            return Err(Error::domain("g must have one value per group element"));
        }
        if s >= group.dim() {
            return Err(Error::domain(format!("shift {s} outside the group")));
        }
        let (grp, table) = (group.clone(), g.clone());
        let oracle: ComplexOracle = Arc::new(move |x| table[grp.add(x, s)]);
        Ok(HcpInstance {
            group,
            g,
            oracle,
            hidden: Some(s),
        })
    }

    pub fn from_oracle(group: GroupSpec, g: Vec<Complex64>, oracle: ComplexOracle) -> Result<Self> {
        if g.len() != group.dim() {
            return Err(Error::domain("g must have one value per group element"));
        }
        Ok(HcpInstance {
            group,
            g,
            oracle,
            hidden: None,
        })
    }

    /// `g = (0, 1, 1, -1, 0, -1, -1, 1)` on `Z_8`: nonzero on 6 of 8 points,
    /// spectrum of constant magnitude on the 4 odd frequencies.
    pub fn z8(s: usize) -> Result<Self> {
        let g = [0.0, 1.0, 1.0, -1.0, 0.0, -1.0, -1.0, 1.0]
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        Self::planted(GroupSpec::Cyclic(8), g, s)
    }

    /// `g(x_0, x_1) = i^{x_0 x_1}` on `Z_4 x Z_4`: full support, flat spectrum.
    pub fn z4_squared(s: usize) -> Result<Self> {
        let group = GroupSpec::product(vec![4, 4])?;
        let g = (0..16)
            .map(|x| {
                let c = group.coords(x);
                CharValue::root((c[0] * c[1]) as u64, 4).to_complex()
            })
            .collect();
        Self::planted(group, g, s)
    }

    /// `g = chi` on the additive group of its field.
    pub fn from_field_char(chi: &MultCharFF, s: usize) -> Result<Self> {
        let g = chi.values().into_iter().map(CharValue::to_complex).collect();
        Self::planted(GroupSpec::field(chi.ctx().clone()), g, s)
    }

    /// `g = chi` on `Z_n`.
    pub fn from_ring_char(chi: &RingChar, s: usize) -> Result<Self> {
        let g = chi.values().into_iter().map(CharValue::to_complex).collect();
        Self::planted(GroupSpec::cyclic(chi.modulus() as usize)?, g, s)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn g(&self) -> &[Complex64] {
        &self.g
    }

    pub fn hidden(&self) -> Option<usize> {
        self.hidden
    }

    pub fn query(&self, x: usize) -> Complex64 {
        (self.oracle)(x)
    }
}

/// Outcome of the hidden coset solver.
#[derive(Debug, Clone)]
pub struct HcpRun {
    pub solution: ShiftSolution,
    /// `alpha * P(measured)`.
    pub success_probability: f64,
    /// Fraction of the group where `f` is nonzero.
    pub alpha: f64,
    /// Fraction of characters where `g_hat` is nonzero.
    pub beta: f64,
    pub distribution: Vec<f64>,
    pub measured: usize,
}

/// Unnormalized spectrum `v_hat(y) = dim^{-1/2} sum_x v(x) psi_y(x)`.
pub fn spectrum(group: &GroupSpec, v: &[Complex64]) -> Result<Vec<Complex64>> {
    let state = QState::from_amplitudes(group.clone(), v.to_vec())?;
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Ok(dft(&state).amplitudes().iter().map(|a| a * norm).collect())
}

/// `chi_hat` for a character table, computed with the engine's transform.
pub fn character_spectrum(group: &GroupSpec, chi: &[CharValue]) -> Result<Vec<Complex64>> {
    let v: Vec<Complex64> = chi.iter().map(|c| c.to_complex()).collect();
    spectrum(group, &v)
}

/// `max_y |chi_hat(y) - conj(chi(y)) chi_hat(one)|` and `|chi_hat(one)|`.
pub fn gauss_identity_residual(chi: &[CharValue], chi_hat: &[Complex64], one: usize) -> (f64, f64) {
    let g1 = chi_hat[one];
    let residual = chi
        .iter()
        .zip(chi_hat)
        .map(|(c, h)| (h - c.conj().to_complex() * g1).norm())
        .fold(0.0, f64::max);
    (residual, g1.norm())
}

/// Indices where `|v|` is within `SPECTRUM_EPS` (relative) of nonzero, and
/// whether `|v|` is constant on them.
fn flat_support(v: &[Complex64]) -> (Vec<usize>, bool) {
    let max = v.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let support: Vec<usize> = (0..v.len()).filter(|&i| v[i].norm() > SPECTRUM_EPS * max).collect();
    let flat = support.iter().all(|&i| (v[i].norm() - max).abs() <= SPECTRUM_EPS * max.max(1.0));
    (support, flat)
}

/// Hidden coset solver: prepare `f`, transform, divide by the phase of
/// `g_hat` where `g_hat` is nonzero, transform back, measure `-s`.
///
/// Returns the coset `s + H` with `H` the joint kernel of the support of
/// `g_hat`, which is exactly the set of `h` with `g(x + h) = g(x)`.
pub fn solve_hidden_coset(instance: &HcpInstance, mode: Mode) -> Result<HcpRun> {
    let group = instance.group().clone();
    let dim = group.dim();
    let mut rng = rng_for(mode);

    let f: Vec<Complex64> = (0..dim).map(|x| instance.query(x)).collect();
    let (f_support, f_flat) = flat_support(&f);
    if f_support.is_empty() {
        return Err(Error::domain("f vanishes everywhere"));
    }
    if !f_flat {
        return Err(Error::PromiseViolation("|f| is not constant on its support".into()));
    }
    let scale = f[f_support[0]].norm();
    let alpha = f_support.len() as f64 / dim as f64;

    if instance.g().iter().all(|a| a.norm() <= MAGNITUDE_TOL) {
        return Err(Error::domain("g_hat has empty support"));
    }
    let g_hat = spectrum(&group, instance.g())?;
    let (g_support, g_flat) = flat_support(&g_hat);
    if !g_flat {
        return Err(Error::PromiseViolation("|g_hat| is not constant on its support".into()));
    }
    let beta = g_support.len() as f64 / dim as f64;
    let mut in_support = vec![false; dim];
    g_support.iter().for_each(|&y| in_support[y] = true);

    let prep = prepare(group.clone(), |x| f[x] / scale, rng.as_mut())?;
    // off the support of g_hat the action is the identity; f_hat vanishes
    // there, so no renormalization is needed
    let twisted = phase_multiply(&dft(&prep.state), |y| {
        if in_support[y] {
            g_hat[y].conj() / g_hat[y].norm()
        } else {
            Complex64::new(1.0, 0.0)
        }
    })?;
    let distribution = exact_distribution(&dft_inverse(&twisted));
    let g = instance.g();
    let matches = |shift: usize, x: u64| {
        let x = x as usize;
        (instance.query(x) - g[group.add(x, shift)]).norm() <= 1e-9 * scale.max(1.0)
    };
    let measured = match rng.as_mut() {
        // the maximum can be shared (the Z_8 instance splits its mass
        // between -s and -s + 4); take the first tied outcome that verifies
        None => {
            let top = distribution.iter().cloned().fold(0.0, f64::max);
            (0..dim)
                .filter(|&y| distribution[y] >= top - 1e-12)
                .find(|&y| verify(dim as u64, None, |x| matches(group.neg(y), x)))
                .ok_or_else(|| Error::Unresolved("no maximal outcome verifies".into()))?
        }
        Some(rng) => {
            let y = sample_index(&distribution, rng);
            if !verify(dim as u64, Some(rng), |x| matches(group.neg(y), x)) {
                return Err(Error::Miss(format!("candidate shift {} failed verification", group.neg(y))));
            }
            y
        }
    };
    let shift = group.neg(measured);
    let subgroup = group.joint_kernel(&g_support);
    Ok(HcpRun {
        solution: ShiftSolution::new(group, shift, subgroup),
        success_probability: alpha * distribution[measured],
        alpha,
        beta,
        distribution,
        measured,
    })
}

/// Subgroup estimate from repeated Fourier sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupEstimate {
    /// Elements of the estimated `H`, sorted.
    pub subgroup: Vec<usize>,
    /// Sampled character indices.
    pub samples: Vec<usize>,
    /// False when the amplitude method's flat-spectrum promise fails.
    pub promise_holds: bool,
}

/// Standard method: collapse onto a random level set of `g`, Fourier sample
/// the resulting coset state, and intersect the kernels of the samples.
pub fn identify_subgroup_standard<T: PartialEq>(
    group: &GroupSpec,
    g: impl Fn(usize) -> T,
    num_samples: usize,
    seed: Seed,
) -> Result<SubgroupEstimate> {
    let dim = group.dim();
    let table: Vec<T> = (0..dim).map(g).collect();
    let mut rng = seed.rng();
    let mut samples = Vec::with_capacity(num_samples);
    for _ in 0..num_samples {
        // the register outcome g(x0) has probability |g^{-1}(g(x0))| / dim
        let x0 = below(&mut rng, dim as u64) as usize;
        let amps = table
            .iter()
            .map(|v| Complex64::new(if *v == table[x0] { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let coset = QState::from_amplitudes(group.clone(), amps)?;
        samples.push(sample_index(&exact_distribution(&dft(&coset)), &mut rng));
    }
    Ok(SubgroupEstimate {
        subgroup: group.joint_kernel(&samples),
        samples,
        promise_holds: true,
    })
}

/// Amplitude method: Fourier sample the state with amplitudes `g` and
/// intersect the kernels of the samples.
pub fn identify_subgroup_amplitude(
    group: &GroupSpec,
    g: impl Fn(usize) -> Complex64,
    num_samples: usize,
    seed: Seed,
) -> Result<SubgroupEstimate> {
    let prep = amplitude_encode(group.clone(), g)?;
    let spec = dft(&prep.state);
    let (_, promise_holds) = flat_support(spec.amplitudes());
    let distribution = exact_distribution(&spec);
    let mut rng = seed.rng();
    let samples: Vec<usize> = (0..num_samples).map(|_| sample_index(&distribution, &mut rng)).collect();
    Ok(SubgroupEstimate {
        subgroup: group.joint_kernel(&samples),
        samples,
        promise_holds,
    })
}
