//! Deliberately naive classical references.
//!
//! Nothing here shares code with the fast paths it checks: transforms are
//! textbook double sums over the character pairing, shifts and periods are
//! found by exhaustive scan.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::GroupSpec;
use crate::unity::CharValue;

/// Largest vector accepted by [`dft_reference`].
pub const REFERENCE_DFT_BOUND: usize = 4096;

/// Largest domain for exhaustive shift scans.
pub const BRUTE_FORCE_BOUND: usize = 1 << 16;

/// One brute-force-versus-algorithm comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub quantity: String,
    pub brute_force: f64,
    pub algorithm: f64,
    pub difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, brute_force: f64, algorithm: f64, tolerance: f64) -> Self {
        let difference = (brute_force - algorithm).abs();
        OracleReport {
            quantity: quantity.into(),
            brute_force,
            algorithm,
            difference,
            tolerance,
            pass: difference <= tolerance,
        }
    }
}

/// All `t` with `f(x) = g(x + t)` for every `x` of the group.
pub fn brute_force_shift<T: PartialEq>(group: &GroupSpec, f: &[T], g: &[T]) -> Vec<usize> {
    brute_force_shift_by(group, f, g, |a, b| a == b)
}

/// [`brute_force_shift`] for complex-valued functions, equal within `tol`.
pub fn brute_force_shift_approx(group: &GroupSpec, f: &[Complex64], g: &[Complex64], tol: f64) -> Vec<usize> {
    brute_force_shift_by(group, f, g, |a, b| (a - b).norm() <= tol)
}

fn brute_force_shift_by<T>(group: &GroupSpec, f: &[T], g: &[T], eq: impl Fn(&T, &T) -> bool) -> Vec<usize> {
    let dim = group.dim();
    assert!(dim <= BRUTE_FORCE_BOUND, "domain of size {dim} is too large to scan");
    assert!(f.len() == dim && g.len() == dim, "function tables must cover the group");
    (0..dim)
        .filter(|&t| (0..dim).all(|x| eq(&f[x], &g[group.add(x, t)])))
        .collect()
}

/// Smallest `l` in `1..=bound` with `f(x + l) = f(x)` for `x` in `0..bound`.
///
/// Scanning `bound` consecutive points is enough: if the true period is at
/// most `bound`, they cover every residue class.
pub fn brute_force_period<T: PartialEq>(f: impl Fn(u64) -> T, bound: u64) -> Result<u64> {
    let values: Vec<T> = (0..2 * bound).map(&f).collect();
    (1..=bound)
        .find(|&l| (0..bound).all(|x| values[(x + l) as usize] == values[x as usize]))
        .ok_or_else(|| Error::capacity(format!("no period at most {bound}")))
}

/// Textbook unitary DFT `out[y] = n^{-1/2} sum_x v[x] e^{2 pi i xy / n}`.
///
/// # Panics
/// If `v` is longer than [`REFERENCE_DFT_BOUND`].
pub fn dft_reference(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    assert!(n <= REFERENCE_DFT_BOUND, "reference DFT of length {n}");
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|y| {
            let sum: Complex64 = v
                .iter()
                .enumerate()
                .map(|(x, a)| a * Complex64::from_polar(1.0, 2.0 * PI * ((x * y) % n) as f64 / n as f64))
                .sum();
            sum * scale
        })
        .collect()
}

/// Dense transform `out[y] = dim^{-1/2} sum_x v[x] psi_y(x)` over any group,
/// with `psi_y` taken from [`GroupSpec::pairing`] (for fields this goes
/// through the definitional trace).
pub fn dft_reference_group(group: &GroupSpec, v: &[Complex64]) -> Vec<Complex64> {
    let dim = group.dim();
    assert!(dim <= REFERENCE_DFT_BOUND && v.len() == dim);
    let scale = 1.0 / (dim as f64).sqrt();
    (0..dim)
        .map(|y| {
            let sum: Complex64 = v
                .iter()
                .enumerate()
                .map(|(x, a)| a * group.pairing(y, x).to_complex())
                .sum();
            sum * scale
        })
        .collect()
}

/// `chi_hat(y) = dim^{-1/2} sum_x chi(x) psi_y(x)`, one double sum per call.
pub fn character_transform_reference(group: &GroupSpec, chi: &[CharValue], y: usize) -> Complex64 {
    let sum: Complex64 = chi
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(x, c)| (*c * group.pairing(y, x)).to_complex())
        .sum();
    sum / (group.dim() as f64).sqrt()
}

/// Runs the built-in cross-check suite: fast transforms against the naive
/// ones, solver answers against exhaustive scans, and the homomorphic attack
/// against its planted secret.
pub fn run_suite() -> Result<Vec<OracleReport>> {
    use crate::finfield::{FieldCtx, MultCharFF};
    use crate::homocrypt::{break_cryptosystem, homo_new};
    use crate::qsim::{dft, QState};
    use crate::ringchar::RingChar;
    use crate::rng::{unit_f64, Seed};
    use crate::shiftalgos::{solve_shift_ff, solve_shift_ring, Mode, RingInstance, ShiftInstanceFF};

    let mut out = Vec::new();

    let mut rng = Seed::new(0).rng();
    for n in [7usize, 12, 64, 97, 256] {
        let amps = (0..n).map(|_| Complex64::new(unit_f64(&mut rng) - 0.5, unit_f64(&mut rng) - 0.5)).collect();
        let s = QState::from_amplitudes(GroupSpec::Cyclic(n), amps)?;
        let diff = dft(&s)
            .amplitudes()
            .iter()
            .zip(dft_reference(s.amplitudes()))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        out.push(OracleReport::new(format!("dft Z_{n} max deviation"), 0.0, diff, 1e-10));
    }

    for (p, r, k, s) in [(7u64, 1u32, 3u64, 4u64), (3, 2, 1, 5), (5, 2, 7, 11)] {
        let ctx = FieldCtx::new(p, r)?;
        let chi = MultCharFF::new(ctx.clone(), k)?;
        let inst = ShiftInstanceFF::planted(chi.clone(), ctx.element(s)?);
        let run = solve_shift_ff(&inst, Mode::Exact)?;
        let group = GroupSpec::field(ctx.clone());
        let g = chi.values();
        let f: Vec<CharValue> = (0..ctx.q() as usize).map(|x| g[group.add(x, s as usize)]).collect();
        let truth = brute_force_shift(&group, &f, &g);
        out.push(OracleReport::new(
            format!("solve-ff q={} k={k} s={s} shift", ctx.q()),
            truth[0] as f64,
            run.solution.representative as f64,
            0.0,
        ));
    }

    for (chi, s) in [(RingChar::quadratic(9)?, 2u64), (RingChar::jacobi(15)?, 7)] {
        let n = chi.modulus() as usize;
        let inst = RingInstance::planted(chi.clone(), s);
        let run = solve_shift_ring(&inst, Mode::Exact)?;
        let group = GroupSpec::Cyclic(n);
        let g = chi.values();
        let f: Vec<CharValue> = (0..n).map(|x| g[(x + s as usize) % n]).collect();
        let truth = brute_force_shift(&group, &f, &g);
        let found = run.solution.solution_set();
        let mismatches = truth.len().abs_diff(found.len()) + truth.iter().filter(|t| !found.contains(t)).count();
        out.push(OracleReport::new(
            format!("solve-ring n={n} s={s} solution-set mismatches"),
            0.0,
            mismatches as f64,
            0.0,
        ));
        let period = brute_force_period(|x| chi.value(x), n as u64)?;
        out.push(OracleReport::new(format!("solve-ring n={n} period"), period as f64, run.period as f64, 0.0));
    }

    let (oracle, es) = homo_new(31, 17, Seed::new(7))?;
    let attack = break_cryptosystem(&oracle, es, Mode::Sampled(Seed::new(7)))?;
    out.push(OracleReport::new("break-homo p=31 secret", 17.0, attack.secret as f64, 0.0));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::{FieldCtx, MultCharFF};
    use crate::ringchar::RingChar;

    #[test]
    fn shift_examples() {
        let ctx = FieldCtx::new(7, 1).unwrap();
        let g = MultCharFF::quadratic(ctx.clone()).unwrap().values();
        let group = GroupSpec::field(ctx);
        let f: Vec<CharValue> = (0..7).map(|x| g[(x + 4) % 7]).collect();
        assert_eq!(brute_force_shift(&group, &f, &g), vec![4]);
        assert!(brute_force_shift(&group, &g, &g).contains(&0));

        let chi = RingChar::quadratic(9).unwrap();
        let g = chi.values();
        let f: Vec<CharValue> = (0..9).map(|x| g[(x + 2) % 9]).collect();
        assert_eq!(brute_force_shift(&GroupSpec::Cyclic(9), &f, &g), vec![2, 5, 8]);
    }

    #[test]
    fn period_examples() {
        let j = RingChar::jacobi(15).unwrap();
        assert_eq!(brute_force_period(|x| j.value(x), 15).unwrap(), 15);
        assert_eq!(brute_force_period(|_| 3, 10).unwrap(), 1);
        let q = RingChar::quadratic(9).unwrap();
        assert_eq!(brute_force_period(|x| q.value(x), 9).unwrap(), 3);
        assert!(matches!(brute_force_period(|x| j.value(x), 14), Err(Error::Capacity(_))));
    }

    #[test]
    fn reference_dft_examples() {
        let n = 10;
        let mut e0 = vec![Complex64::new(0.0, 0.0); n];
        e0[0] = Complex64::new(1.0, 0.0);
        let u = dft_reference(&e0);
        assert!(u.iter().all(|a| (a - Complex64::new(1.0 / (n as f64).sqrt(), 0.0)).norm() < 1e-15));
        let back = dft_reference(&u);
        assert!((back[0].re - 1.0).abs() < 1e-12);
        assert!(back[1..].iter().all(|a| a.norm() < 1e-12));
    }

    #[test]
    fn suite_passes() {
        let reports = run_suite().unwrap();
        assert!(reports.len() >= 10);
        for r in &reports {
            assert!(r.pass, "{r:?}");
        }
    }
}
