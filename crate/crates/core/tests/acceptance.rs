//! Acceptance checks, one line per criterion.
//!
//! Runs as a plain binary (no libtest harness) so the PASS/FAIL lines are
//! always printed; the process exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use charshift::finfield::{FieldCtx, MultCharFF};
use charshift::homocrypt::{break_cryptosystem, homo_new};
use charshift::numtheory::{euler_phi, factorize, is_prime};
use charshift::oracles::{brute_force_shift, brute_force_shift_approx, dft_reference};
use charshift::qsim::{dft, dft_inverse, phase_multiply, GroupSpec, QState};
use charshift::ringchar::RingChar;
use charshift::rng::{below, unit_f64, Seed};
use charshift::shiftalgos::{
    character_spectrum, gauss_identity_residual, l1_distance, rf_distribution, sampling_parameters,
    solve_hidden_coset, solve_shift_ff, solve_shift_ring, solve_shift_unknown_n, FourierSampler,
    HcpInstance, Mode, RingInstance, ShiftInstanceFF, ShiftSolution,
};
use charshift::{CharValue, Complex64};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn prime_powers_up_to(bound: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for q in 2..=bound {
        let f = factorize(q).unwrap();
        if let [(p, r)] = f.factors() {
            out.push((*p, *r));
        }
    }
    out
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn random_state(group: &GroupSpec, rng: &mut rand_chacha::ChaCha8Rng) -> QState {
    let amps = (0..group.dim())
        .map(|_| Complex64::new(unit_f64(rng) - 0.5, unit_f64(rng) - 0.5))
        .collect();
    QState::from_amplitudes(group.clone(), amps).unwrap()
}

/// Every character of `Z_n` with all component indices nonzero.
fn completely_nontrivial_chars(n: u64) -> Vec<RingChar> {
    let f = factorize(n).unwrap();
    let orders: Vec<u64> = f.prime_powers().iter().map(|&m| euler_phi(m).unwrap()).collect();
    let mut out = Vec::new();
    let mut idx = vec![1u64; orders.len()];
    if orders.iter().any(|&o| o < 2) {
        return out;
    }
    loop {
        out.push(RingChar::new(n, &idx).unwrap());
        let mut i = 0;
        loop {
            if i == idx.len() {
                return out;
            }
            idx[i] += 1;
            if idx[i] < orders[i] {
                break;
            }
            idx[i] = 1;
            i += 1;
        }
    }
}

fn criterion_1() -> Outcome {
    let mut worst_p = 0.0f64;
    let mut worst_succ = 0.0f64;
    let mut wrong = 0;
    let mut runs = 0;
    for (p, r) in [(5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (5, 2), (3, 3), (7, 2)] {
        let ctx = FieldCtx::new(p, r).unwrap();
        let q = ctx.q();
        let group = GroupSpec::field(ctx.clone());
        let qf = q as f64;
        for k in 1..q - 1 {
            let chi = MultCharFF::new(ctx.clone(), k).unwrap();
            for s in 0..q {
                let inst = ShiftInstanceFF::planted(chi.clone(), ctx.element(s).unwrap());
                let run = solve_shift_ff(&inst, Mode::Exact).unwrap();
                let minus_s = group.neg(s as usize);
                worst_p = worst_p.max((run.distribution[minus_s] - (1.0 - 1.0 / qf)).abs());
                worst_succ = worst_succ.max((run.success_probability - (1.0 - 1.0 / qf).powi(2)).abs());
                if run.solution.solution_set() != vec![s as usize] {
                    wrong += 1;
                }
                runs += 1;
            }
        }
    }
    outcome(
        worst_p < 1e-9 && worst_succ < 1e-9 && wrong == 0,
        format!("{runs} runs, max |P(-s) - (1-1/q)| = {worst_p:.2e}, max |success - (1-1/q)^2| = {worst_succ:.2e}, wrong answers {wrong}"),
    )
}

fn criterion_2() -> Outcome {
    let ctx = FieldCtx::new(7, 1).unwrap();
    let inst = ShiftInstanceFF::planted(MultCharFF::new(ctx.clone(), 3).unwrap(), ctx.element(4).unwrap());
    let trials = 2000;
    let hits = (0..trials)
        .filter(|&t| matches!(solve_shift_ff(&inst, Mode::Sampled(Seed::trial(2024, t))), Ok(run) if run.solution.representative == 4))
        .count();
    let p = 36.0 / 49.0;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let rate = hits as f64 / trials as f64;
    outcome(
        (rate - p).abs() <= 3.0 * sigma,
        format!("{hits}/{trials} = {rate:.4}, target {p:.4} +/- {:.4}", 3.0 * sigma),
    )
}

fn criterion_3() -> Outcome {
    let mut worst_res = 0.0f64;
    let mut worst_mag = 0.0f64;
    let mut field_chars = 0;
    for (p, r) in prime_powers_up_to(64) {
        let ctx = FieldCtx::new(p, r).unwrap();
        let group = GroupSpec::field(ctx.clone());
        for k in 1..ctx.q() - 1 {
            let chi = MultCharFF::new(ctx.clone(), k).unwrap().values();
            let hat = character_spectrum(&group, &chi).unwrap();
            let (res, mag) = gauss_identity_residual(&chi, &hat, ctx.one().index());
            worst_res = worst_res.max(res);
            worst_mag = worst_mag.max((mag - 1.0).abs());
            field_chars += 1;
        }
    }
    let mut ring_chars = 0;
    for n in (3..=105u64).step_by(2) {
        for chi in completely_nontrivial_chars(n).into_iter().filter(RingChar::is_primitive) {
            let hat = character_spectrum(&GroupSpec::Cyclic(n as usize), &chi.values()).unwrap();
            let (res, mag) = gauss_identity_residual(&chi.values(), &hat, 1);
            worst_res = worst_res.max(res);
            worst_mag = worst_mag.max((mag - 1.0).abs());
            ring_chars += 1;
        }
    }
    outcome(
        worst_res < 1e-9 && worst_mag < 1e-9 && ring_chars > 0,
        format!("{field_chars} field and {ring_chars} primitive ring characters, max residual {worst_res:.2e}, max ||chi_hat(1)| - 1| {worst_mag:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    for p in [3u64, 7, 11, 19, 23] {
        let ctx = FieldCtx::new(p, 1).unwrap();
        let leg = MultCharFF::quadratic(ctx.clone()).unwrap().values();
        let amps = leg.iter().map(|c| c.to_complex()).collect();
        let s = QState::from_amplitudes(GroupSpec::field(ctx), amps).unwrap();
        let t = dft(&s);
        let phase = s.inner(&t);
        let residual = t
            .amplitudes()
            .iter()
            .zip(s.amplitudes())
            .map(|(a, b)| (a - phase * b).norm())
            .fold((phase.norm() - 1.0).abs(), f64::max);
        worst = worst.max(residual);
    }
    outcome(worst < 1e-9, format!("max residual {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let mut problems = Vec::new();
    let mut worst = 0.0f64;
    let q9 = RingChar::quadratic(9).unwrap();
    for s in 0..9u64 {
        let run = solve_shift_ring(&RingInstance::planted(q9.clone(), s), Mode::Exact).unwrap();
        let mut expected: Vec<usize> = (0..3).map(|j| ((s + 3 * j) % 9) as usize).collect();
        expected.sort();
        if run.solution.solution_set() != expected || run.period != 3 {
            problems.push(format!("n=9 s={s}"));
        }
        worst = worst.max((run.success_probability - 8.0 / 27.0).abs());
    }
    let j15 = RingChar::jacobi(15).unwrap();
    for s in 0..15u64 {
        let run = solve_shift_ring(&RingInstance::planted(j15.clone(), s), Mode::Exact).unwrap();
        if run.solution.solution_set() != vec![s as usize] || run.period != 15 {
            problems.push(format!("n=15 s={s}"));
        }
        worst = worst.max((run.success_probability - 512.0 / 3375.0).abs());
    }
    outcome(
        problems.is_empty() && worst < 1e-9,
        format!("max probability error {worst:.2e}, wrong solutions {problems:?}"),
    )
}

fn criterion_6() -> Outcome {
    let eps = 0.1;
    let mut parts = Vec::new();
    let mut pass = true;
    for chi in [
        RingChar::quadratic(5).unwrap(),
        RingChar::new(9, &[1]).unwrap(),
        RingChar::new(12, &[1, 1]).unwrap(),
    ] {
        let n = chi.modulus();
        let (m, q_len) = sampling_parameters(n, eps).unwrap();
        let phi = |x: u64| chi.value(x).to_complex();
        let cf = FourierSampler::new(phi, m, q_len, n).unwrap().cf_distribution();
        let rf = rf_distribution(phi, n).unwrap();
        let l1 = l1_distance(&rf, &cf);
        pass &= l1 < eps && q_len as f64 >= (m as f64 / eps).ceil() - 1e-9;
        parts.push(format!("n={n} m={m} q_len={q_len} L1={l1:.4}"));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_7() -> Outcome {
    let chi = RingChar::jacobi(15).unwrap();
    let mut good = 0;
    let mut max_rounds = 0;
    for seed in 0..50u64 {
        let s = below(&mut Seed::new(seed).rng(), 15);
        let f = |x: u64| chi.value(x + s);
        if let Ok(run) = solve_shift_unknown_n(&f, &RingChar::quadratic, 16, 0.1, Seed::trial(7, seed)) {
            max_rounds = max_rounds.max(run.rounds);
            if run.period == 15 && run.solution.representative as u64 == s {
                good += 1;
            }
        }
    }
    outcome(good >= 48, format!("{good}/50 recovered period 15 and the shift (most period rounds used: {max_rounds})"))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    let mut params_ok = true;
    for s in 0..8 {
        let run = solve_hidden_coset(&HcpInstance::z8(s).unwrap(), Mode::Exact).unwrap();
        worst = worst.max((run.success_probability - 0.375).abs());
        params_ok &= run.alpha == 0.75 && run.beta == 0.5 && run.solution.solution_set() == vec![s];
    }
    let mut path = 0.0f64;
    let mut compared = 0;
    for (p, r) in prime_powers_up_to(25) {
        let ctx = FieldCtx::new(p, r).unwrap();
        for k in 1..ctx.q() - 1 {
            let chi = MultCharFF::new(ctx.clone(), k).unwrap();
            for s in 0..ctx.q() {
                let a = solve_shift_ff(&ShiftInstanceFF::planted(chi.clone(), ctx.element(s).unwrap()), Mode::Exact).unwrap();
                let b = solve_hidden_coset(&HcpInstance::from_field_char(&chi, s as usize).unwrap(), Mode::Exact).unwrap();
                path = path.max(a.distribution.iter().zip(&b.distribution).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
                compared += 1;
            }
        }
    }
    outcome(
        worst < 1e-9 && params_ok && path < 1e-9,
        format!("Z_8 max |success - 3/8| = {worst:.2e}; {compared} field instances, max distribution difference {path:.2e}"),
    )
}

fn coset_ok(sol: &ShiftSolution, truth: &[usize]) -> bool {
    sol.solution_set() == truth && sol.subgroup_is_closed() && truth.iter().all(|&t| sol.contains(t))
}

fn criterion_9() -> Outcome {
    let mut rng = Seed::new(99).rng();
    let fields: Vec<(u64, u32)> = prime_powers_up_to(49).into_iter().filter(|&(p, r)| p.pow(r) > 2).collect();
    let mut tally = [0usize; 4];
    let mut failures = Vec::new();
    for i in 0..200 {
        let kind = i % 4;
        let ok = match kind {
            0 => {
                let (p, r) = fields[below(&mut rng, fields.len() as u64) as usize];
                let ctx = FieldCtx::new(p, r).unwrap();
                let k = 1 + below(&mut rng, ctx.q() - 2);
                let s = below(&mut rng, ctx.q());
                let chi = MultCharFF::new(ctx.clone(), k).unwrap();
                let group = GroupSpec::field(ctx.clone());
                let g = chi.values();
                let f: Vec<CharValue> = (0..ctx.q() as usize).map(|x| g[group.add(x, s as usize)]).collect();
                let run = solve_shift_ff(&ShiftInstanceFF::planted(chi, ctx.element(s).unwrap()), Mode::Exact).unwrap();
                coset_ok(&run.solution, &brute_force_shift(&group, &f, &g))
            }
            1 => {
                let chis = loop {
                    let n = 3 + 2 * below(&mut rng, 52);
                    let c = completely_nontrivial_chars(n);
                    if !c.is_empty() {
                        break c;
                    }
                };
                let chi = chis[below(&mut rng, chis.len() as u64) as usize].clone();
                let n = chi.modulus() as usize;
                let s = below(&mut rng, n as u64);
                let g = chi.values();
                let f: Vec<CharValue> = (0..n).map(|x| g[(x + s as usize) % n]).collect();
                let run = solve_shift_ring(&RingInstance::planted(chi, s), Mode::Exact).unwrap();
                coset_ok(&run.solution, &brute_force_shift(&GroupSpec::Cyclic(n), &f, &g))
            }
            2 => {
                let inst = match below(&mut rng, 4) {
                    0 => HcpInstance::z8(below(&mut rng, 8) as usize).unwrap(),
                    1 => HcpInstance::z4_squared(below(&mut rng, 16) as usize).unwrap(),
                    2 => {
                        let p = [5u64, 7, 11, 13][below(&mut rng, 4) as usize];
                        let ctx = FieldCtx::new(p, 1).unwrap();
                        let chi = MultCharFF::new(ctx, 1 + below(&mut rng, p - 2)).unwrap();
                        HcpInstance::from_field_char(&chi, below(&mut rng, p) as usize).unwrap()
                    }
                    _ => {
                        // characters of Z_9, Z_25, Z_27: often periodic, so H is nontrivial
                        let n = [9u64, 25, 27][below(&mut rng, 3) as usize];
                        let chis = completely_nontrivial_chars(n);
                        let chi = &chis[below(&mut rng, chis.len() as u64) as usize];
                        HcpInstance::from_ring_char(chi, below(&mut rng, n) as usize).unwrap()
                    }
                };
                let dim = inst.group().dim();
                let f: Vec<Complex64> = (0..dim).map(|x| inst.query(x)).collect();
                let run = solve_hidden_coset(&inst, Mode::Exact).unwrap();
                coset_ok(&run.solution, &brute_force_shift_approx(inst.group(), &f, inst.g(), 1e-9))
            }
            _ => {
                if i % 20 == 3 {
                    // unknown modulus: Jacobi characters of squarefree odd moduli
                    let n = [15u64, 21][below(&mut rng, 2) as usize];
                    let chi = RingChar::jacobi(n).unwrap();
                    let s = below(&mut rng, n);
                    let f = |x: u64| chi.value(x + s);
                    let run = solve_shift_unknown_n(&f, &RingChar::quadratic, 24, 0.1, Seed::trial(5, i as u64)).unwrap();
                    let l = run.period as usize;
                    let fl: Vec<CharValue> = (0..l as u64).map(f).collect();
                    let gl = RingChar::quadratic(l as u64).unwrap().values();
                    coset_ok(&run.solution, &brute_force_shift(&GroupSpec::Cyclic(l), &fl, &gl))
                } else {
                    // sampled field runs: every verified answer must be the full coset
                    let p = [7u64, 11, 13, 17, 19][below(&mut rng, 5) as usize];
                    let ctx = FieldCtx::new(p, 1).unwrap();
                    let chi = MultCharFF::new(ctx.clone(), 1 + below(&mut rng, p - 2)).unwrap();
                    let s = below(&mut rng, p);
                    let group = GroupSpec::field(ctx.clone());
                    let g = chi.values();
                    let f: Vec<CharValue> = (0..p as usize).map(|x| g[group.add(x, s as usize)]).collect();
                    let truth = brute_force_shift(&group, &f, &g);
                    let inst = ShiftInstanceFF::planted(chi, ctx.element(s).unwrap());
                    (0..25)
                        .find_map(|t| solve_shift_ff(&inst, Mode::Sampled(Seed::trial(i as u64, t))).ok())
                        .is_some_and(|run| coset_ok(&run.solution, &truth))
                }
            }
        };
        tally[kind] += 1;
        if !ok {
            failures.push(i);
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "200 instances (field {}, ring {}, coset {}, unknown-modulus/sampled {}), mismatches {:?}",
            tally[0], tally[1], tally[2], tally[3], failures
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for p in [7u64, 31, 101, 1009] {
        assert!(is_prime(p));
        let mut secrets = Seed::new(p).rng();
        let mut recovered = 0;
        let mut worst_ratio = 0.0f64;
        let mut queries_ok = true;
        for t in 0..20 {
            let s = below(&mut secrets, p);
            let (oracle, es) = homo_new(p, s, Seed::trial(p, t)).unwrap();
            if let Ok(r) = break_cryptosystem(&oracle, es, Mode::Sampled(Seed::trial(p + 1, t))) {
                if r.secret == s {
                    recovered += 1;
                }
                worst_ratio = worst_ratio.max(r.max_calls_per_point as f64 / (p as f64).log2());
                queries_ok &= r.logical_queries == 2 * r.preparations && oracle.backdoor_reads() == 0;
            }
        }
        pass &= recovered == 20 && worst_ratio <= 8.0 && queries_ok;
        parts.push(format!("p={p}: {recovered}/20, max calls per point {worst_ratio:.2} log2 p"));
    }
    outcome(pass, parts.join("; ") + "; logical queries = 2 per preparation")
}

fn criterion_11() -> Outcome {
    let mut rng = Seed::new(11).rng();
    let mut unitarity = 0.0f64;
    let mut groups: Vec<GroupSpec> = (1..=256).map(GroupSpec::Cyclic).collect();
    for a in 2..=16usize {
        for b in a..=(256 / a) {
            if a * b <= 256 && (b <= 16 || a == 2) {
                groups.push(GroupSpec::product(vec![a, b]).unwrap());
            }
        }
    }
    for orders in [vec![2, 2, 2], vec![2, 3, 4], vec![3, 3, 3], vec![2, 2, 2, 2, 2, 2, 2, 2], vec![4, 4, 4, 4]] {
        groups.push(GroupSpec::product(orders).unwrap());
    }
    for (p, r) in prime_powers_up_to(256) {
        groups.push(GroupSpec::field(FieldCtx::new(p, r).unwrap()));
    }
    for group in &groups {
        let dim = group.dim();
        let cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|x| dft(&QState::basis(group.clone(), x).unwrap()).amplitudes().to_vec())
            .collect();
        for x in 0..dim {
            for y in x..dim {
                let ip: Complex64 = cols[x].iter().zip(&cols[y]).map(|(a, b)| a.conj() * b).sum();
                let target = if x == y { 1.0 } else { 0.0 };
                unitarity = unitarity.max((ip - target).norm());
            }
        }
    }

    let mut shift_phase = 0.0f64;
    let mut naive = 0.0f64;
    for n in 1..=256usize {
        let group = GroupSpec::Cyclic(n);
        let v = random_state(&group, &mut rng);
        naive = naive.max(max_diff(dft(&v).amplitudes(), &dft_reference(v.amplitudes())));
        let round_trip = max_diff(dft_inverse(&dft(&v)).amplitudes(), v.amplitudes());
        naive = naive.max(round_trip);
        for _ in 0..3 {
            let s = below(&mut rng, n as u64) as usize;
            let shifted = QState::from_amplitudes(group.clone(), (0..n).map(|x| v.amplitudes()[(x + s) % n]).collect()).unwrap();
            let rhs = phase_multiply(&dft(&v), |y| CharValue::root(((n - s) * y % n) as u64, n as u64).to_complex()).unwrap();
            shift_phase = shift_phase.max(max_diff(dft(&shifted).amplitudes(), rhs.amplitudes()));
        }
    }

    // 100 random vectors per group of dimension at most 512 against the
    // dense pairing matrix
    let mut reference_groups: Vec<GroupSpec> = [2usize, 3, 12, 60, 97, 128, 210, 255, 257, 360, 509, 512]
        .iter()
        .map(|&n| GroupSpec::Cyclic(n))
        .collect();
    for orders in [vec![4, 4], vec![2, 3, 5], vec![8, 64], vec![3, 7, 11], vec![2, 2, 2, 2, 2, 2, 2, 2, 2]] {
        reference_groups.push(GroupSpec::product(orders).unwrap());
    }
    for (p, r) in prime_powers_up_to(512) {
        if r > 1 || !(60..=500).contains(&p) {
            reference_groups.push(GroupSpec::field(FieldCtx::new(p, r).unwrap()));
        }
    }
    for group in &reference_groups {
        let dim = group.dim();
        let matrix: Vec<Complex64> = (0..dim * dim).map(|i| group.pairing(i / dim, i % dim).to_complex()).collect();
        let scale = 1.0 / (dim as f64).sqrt();
        for _ in 0..100 {
            let v = random_state(group, &mut rng);
            let fast = dft(&v);
            for y in 0..dim {
                let row = &matrix[y * dim..(y + 1) * dim];
                let slow: Complex64 = row.iter().zip(v.amplitudes()).map(|(w, a)| w * a).sum::<Complex64>() * scale;
                naive = naive.max((fast.amplitudes()[y] - slow).norm());
            }
        }
    }
    outcome(
        unitarity < 1e-10 && shift_phase < 1e-10 && naive < 1e-10,
        format!(
            "{} groups: unitarity {unitarity:.2e}, shift-to-phase {shift_phase:.2e}, fast vs naive {naive:.2e} ({} reference groups)",
            groups.len(),
            reference_groups.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 11] = [
        ("field shift exact distribution", criterion_1, 60),
        ("field shift sampling rate", criterion_2, 10),
        ("character transform identity", criterion_3, 30),
        ("Legendre eigenvector", criterion_4, 60),
        ("ring shift exact", criterion_5, 10),
        ("approximate sampling bound", criterion_6, 120),
        ("unknown modulus end to end", criterion_7, 180),
        ("hidden coset exact", criterion_8, 60),
        ("solution sets are cosets", criterion_9, 120),
        ("homomorphic break", criterion_10, 120),
        ("engine invariants", criterion_11, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {:>2} {name}: {} ({:.2}s, budget {budget}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
