//! Dense state-vector engine over finite abelian groups.
//!
//! A [`QState`] is a unit-norm complex vector indexed by the elements of a
//! [`GroupSpec`]. Fourier transforms are exact unitary maps built from the
//! group's character pairing:
//!
//! * `Z_n`: `|x> -> n^{-1/2} sum_y omega_n^{xy} |y>`
//! * `F_q` (additive): `|x> -> q^{-1/2} sum_y omega_p^{Tr(xy)} |y>`
//! * `Z_{n_1} x ... x Z_{n_k}`: the tensor product of the cyclic transforms.
//!
//! Preparation of `sum_x f(x)|x>` for a unit-or-zero `f` models the
//! post-selected branch: the state is returned together with the probability
//! that the preparation measurement would have succeeded.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rand::RngCore;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::finfield::FieldCtx;
use crate::numtheory::{lcm, Fraction};
use crate::rng::{below, unit_f64};
use crate::unity::CharValue;

/// Largest dimension for field and product groups.
pub const STATE_DIM_BOUND: usize = 1 << 16;

/// Largest dimension for cyclic groups, which use the FFT path.
pub const CYCLIC_DIM_BOUND: usize = 1 << 20;

/// Amplitudes below this magnitude count as zero when deciding supports.
pub const SUPPORT_EPS: f64 = 1e-10;

/// Tolerance for `|f(x)| in {0, 1}` style promises on input functions.
pub const MAGNITUDE_TOL: f64 = 1e-9;

/// The finite abelian group indexing a state vector.
#[derive(Debug, Clone)]
pub enum GroupSpec {
    Cyclic(usize),
    FieldAdditive(Arc<FieldCtx>),
    /// `Z_{n_0} x Z_{n_1} x ...`; element `(x_0, x_1, ...)` has index
    /// `x_0 + n_0 (x_1 + n_1 (...))`.
    Product(Vec<usize>),
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (GroupSpec::Cyclic(a), GroupSpec::Cyclic(b)) => a == b,
            (GroupSpec::FieldAdditive(a), GroupSpec::FieldAdditive(b)) => a == b,
            (GroupSpec::Product(a), GroupSpec::Product(b)) => a == b,
            _ => false,
        }
    }
}

impl GroupSpec {
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("cyclic group of order zero"));
        }
        if n > CYCLIC_DIM_BOUND {
            return Err(Error::capacity(format!(
                "cyclic dimension {n} exceeds {CYCLIC_DIM_BOUND}"
            )));
        }
        Ok(GroupSpec::Cyclic(n))
    }

    pub fn product(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::domain("product group needs positive orders"));
        }
        let dim = orders
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .filter(|&d| d <= STATE_DIM_BOUND)
            .ok_or_else(|| Error::capacity(format!("product dimension exceeds {STATE_DIM_BOUND}")))?;
        debug_assert!(dim > 0);
        Ok(GroupSpec::Product(orders))
    }

    pub fn field(ctx: Arc<FieldCtx>) -> Self {
        GroupSpec::FieldAdditive(ctx)
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::Cyclic(n) => *n,
            GroupSpec::FieldAdditive(ctx) => ctx.q() as usize,
            GroupSpec::Product(orders) => orders.iter().product(),
        }
    }

    /// Cyclic factor orders: `[n]`, `[p; r]` or the product orders.
    pub fn factor_orders(&self) -> Vec<usize> {
        match self {
            GroupSpec::Cyclic(n) => vec![*n],
            GroupSpec::FieldAdditive(ctx) => vec![ctx.p() as usize; ctx.r() as usize],
            GroupSpec::Product(orders) => orders.clone(),
        }
    }

    /// Coordinates of `x` in the cyclic factors.
    pub fn coords(&self, mut x: usize) -> Vec<usize> {
        self.factor_orders()
            .into_iter()
            .map(|n| {
                let c = x % n;
                x /= n;
                c
            })
            .collect()
    }

    fn index_of_coords(&self, coords: &[usize]) -> usize {
        self.factor_orders()
            .iter()
            .zip(coords)
            .rev()
            .fold(0, |acc, (&n, &c)| acc * n + c)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        if let GroupSpec::Cyclic(n) = self {
            return (a + b) % n;
        }
        let orders = self.factor_orders();
        let sum: Vec<usize> = self
            .coords(a)
            .iter()
            .zip(self.coords(b))
            .zip(&orders)
            .map(|((&x, y), &n)| (x + y) % n)
            .collect();
        self.index_of_coords(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        if let GroupSpec::Cyclic(n) = self {
            return (n - a % n) % n;
        }
        let orders = self.factor_orders();
        let neg: Vec<usize> = self
            .coords(a)
            .iter()
            .zip(&orders)
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        self.index_of_coords(&neg)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// The character value `psi_y(x)`, exactly.
    pub fn pairing(&self, y: usize, x: usize) -> CharValue {
        match self {
            GroupSpec::Cyclic(n) => CharValue::root((x as u128 * y as u128 % *n as u128) as u64, *n as u64),
            GroupSpec::FieldAdditive(ctx) => {
                let (x, y) = (ctx.element(x as u64), ctx.element(y as u64));
                ctx.additive_char_value(y.expect("index in range"), x.expect("index in range"))
            }
            GroupSpec::Product(orders) => {
                let l = orders.iter().fold(1u64, |acc, &n| lcm(acc, n as u64));
                let num = self
                    .coords(x)
                    .iter()
                    .zip(self.coords(y))
                    .zip(orders)
                    .fold(0u128, |acc, ((&a, b), &n)| {
                        (acc + (a * b) as u128 * (l / n as u64) as u128) % l as u128
                    });
                CharValue::root(num as u64, l)
            }
        }
    }

    /// `{x : psi_y(x) = 1 for every y in ys}`, by exhaustive scan.
    pub fn joint_kernel(&self, ys: &[usize]) -> Vec<usize> {
        (0..self.dim())
            .filter(|&x| ys.iter().all(|&y| self.pairing(y, x) == CharValue::ONE))
            .collect()
    }
}

/// A unit-norm state over a [`GroupSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    group: GroupSpec,
    amps: Vec<Complex64>,
}

impl QState {
    /// The basis state `|x>`.
    pub fn basis(group: GroupSpec, x: usize) -> Result<Self> {
        let dim = group.dim();
        if x >= dim {
            return Err(Error::domain(format!("basis index {x} out of range {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[x] = Complex64::new(1.0, 0.0);
        Ok(QState { group, amps })
    }

    /// Normalizes `amps` into a state. Fails on a zero or mis-sized vector.
    pub fn from_amplitudes(group: GroupSpec, mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != group.dim() {
            return Err(Error::domain(format!(
                "{} amplitudes for a group of dimension {}",
                amps.len(),
                group.dim()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("cannot normalize a zero vector"));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(QState { group, amps })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Indices carrying non-negligible amplitude.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&x| self.amps[x].norm() > SUPPORT_EPS).collect()
    }
}

/// A prepared state and the probability that preparing it succeeded.
#[derive(Debug, Clone)]
pub struct PrepOutcome {
    pub state: QState,
    pub support: usize,
    pub dim: usize,
}

impl PrepOutcome {
    /// `|support| / dim`.
    pub fn success_probability(&self) -> f64 {
        self.support as f64 / self.dim as f64
    }

    pub fn success_fraction(&self) -> Fraction {
        Fraction::new(self.support as u64, self.dim as u64).expect("positive dimension")
    }
}

fn check_unit_or_zero(x: usize, v: Complex64) -> Result<bool> {
    let m = v.norm();
    if m <= MAGNITUDE_TOL {
        Ok(false)
    } else if (m - 1.0).abs() <= MAGNITUDE_TOL {
        Ok(true)
    } else {
        Err(Error::domain(format!(
            "|f({x})| = {m} is neither 0 nor 1"
        )))
    }
}

/// The state proportional to `sum_x f(x)|x>`, for `|f(x)|` in `{0, 1}`.
///
/// Returns the success branch of the preparation; its probability is the
/// fraction of `x` with `f(x) != 0`.
pub fn amplitude_encode(group: GroupSpec, f: impl Fn(usize) -> Complex64) -> Result<PrepOutcome> {
    let dim = group.dim();
    let mut amps = Vec::with_capacity(dim);
    let mut support = 0usize;
    for x in 0..dim {
        let v = f(x);
        if check_unit_or_zero(x, v)? {
            support += 1;
            amps.push(v);
        } else {
            amps.push(Complex64::new(0.0, 0.0));
        }
    }
    if support == 0 {
        return Err(Error::domain("function has empty support"));
    }
    let state = QState::from_amplitudes(group, amps)?;
    Ok(PrepOutcome { state, support, dim })
}

/// Runs the preparation measurement for real: draws a uniform `x` and
/// succeeds iff `f(x) != 0`, which happens with probability `|support|/dim`.
/// Returns `None` when the measurement fails.
pub fn amplitude_encode_sampled(
    group: GroupSpec,
    f: impl Fn(usize) -> Complex64,
    rng: &mut impl RngCore,
) -> Result<Option<PrepOutcome>> {
    let x = below(rng, group.dim() as u64) as usize;
    if !check_unit_or_zero(x, f(x))? {
        return Ok(None);
    }
    amplitude_encode(group, f).map(Some)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized 1-D transform of every lane along one axis.
fn fft_axis(buf: &mut [Complex64], len: usize, stride: usize, direction: FftDirection) {
    if len == 1 {
        return;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction));
    if stride == 1 {
        fft.process(buf);
        return;
    }
    let block = len * stride;
    let mut lane = vec![Complex64::new(0.0, 0.0); len];
    for start in (0..buf.len()).step_by(block) {
        for offset in 0..stride {
            for (i, slot) in lane.iter_mut().enumerate() {
                *slot = buf[start + offset + i * stride];
            }
            fft.process(&mut lane);
            for (i, v) in lane.iter().enumerate() {
                buf[start + offset + i * stride] = *v;
            }
        }
    }
}

fn product_transform(buf: &mut [Complex64], orders: &[usize], direction: FftDirection) {
    let mut stride = 1;
    for &n in orders {
        fft_axis(buf, n, stride, direction);
        stride *= n;
    }
    let scale = 1.0 / (buf.len() as f64).sqrt();
    buf.iter_mut().for_each(|a| *a *= scale);
}

/// Fourier transform over the state's group.
pub fn dft(state: &QState) -> QState {
    transform(state, true)
}

/// Inverse of [`dft`].
pub fn dft_inverse(state: &QState) -> QState {
    transform(state, false)
}

fn transform(state: &QState, forward: bool) -> QState {
    // positive exponent on the forward map; rustfft's "Inverse" direction
    let direction = if forward {
        FftDirection::Inverse
    } else {
        FftDirection::Forward
    };
    let group = state.group.clone();
    let orders = group.factor_orders();
    let amps = match &group {
        GroupSpec::Cyclic(_) | GroupSpec::Product(_) => {
            let mut buf = state.amps.clone();
            product_transform(&mut buf, &orders, direction);
            buf
        }
        GroupSpec::FieldAdditive(ctx) => {
            // Tr(xy) = sum_j x_j Tr(X^j y): Z_p^r transform, then relabel y
            if forward {
                let mut buf = state.amps.clone();
                product_transform(&mut buf, &orders, direction);
                ctx.elements().map(|y| buf[ctx.trace_dual_index(y)]).collect()
            } else {
                let mut buf = vec![Complex64::new(0.0, 0.0); state.dim()];
                for y in ctx.elements() {
                    buf[ctx.trace_dual_index(y)] = state.amps[y.index()];
                }
                product_transform(&mut buf, &orders, direction);
                buf
            }
        }
    };
    QState { group, amps }
}

/// Multiplies each supported amplitude by `u(x)`; `|u(x)|` must be 1 there.
/// Amplitudes outside the support are left as they are.
pub fn phase_multiply(state: &QState, u: impl Fn(usize) -> Complex64) -> Result<QState> {
    let mut amps = state.amps.clone();
    for (x, a) in amps.iter_mut().enumerate() {
        if a.norm() > SUPPORT_EPS {
            let phase = u(x);
            if (phase.norm() - 1.0).abs() > MAGNITUDE_TOL {
                return Err(Error::domain(format!(
                    "phase at {x} has magnitude {}",
                    phase.norm()
                )));
            }
            *a *= phase;
        }
    }
    Ok(QState {
        group: state.group.clone(),
        amps,
    })
}

/// `|amplitude_x|^2` for every `x`.
pub fn exact_distribution(state: &QState) -> Vec<f64> {
    state.amps.iter().map(|a| a.norm_sqr()).collect()
}

/// Draws an outcome by inverse CDF over one uniform `[0, 1)` draw.
pub fn measure_sample(state: &QState, rng: &mut impl RngCore) -> usize {
    sample_index(&exact_distribution(state), rng)
}

/// Inverse-CDF sample from a (possibly slightly unnormalized) distribution.
pub fn sample_index(dist: &[f64], rng: &mut impl RngCore) -> usize {
    let total: f64 = dist.iter().sum();
    let target = unit_f64(rng) * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = i;
            acc += p;
            if acc > target {
                return i;
            }
        }
    }
    last_nonzero
}
