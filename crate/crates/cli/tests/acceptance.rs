//! Acceptance suite. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p fermat-torus-cli --test acceptance -- --nocapture`.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fermat_torus_cli::figures::FIGURE_COMMANDS;
use fermat_torus_core::kinematics::{
    acceleration, finite_diff_oracle, phase_scan, velocity, PhaseClass,
};
use fermat_torus_core::rational::Rational;
use fermat_torus_core::search::{diophantine_triples, rational_points_on_curve};
use fermat_torus_core::torus::{
    density_coverage, integrate_geodesic, integrate_geodesic_with, Christoffels, GeodesicState,
    Torus, WindingLine,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prints the verdict line, then fails the test if any check failed.
fn report(id: u32, title: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {id:>2} PASS  {title}");
    } else {
        println!("criterion {id:>2} FAIL  {title}: {}", failures.join("; "));
        panic!("criterion {id} failed: {failures:?}");
    }
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fermat-torus"))
}

#[test]
fn criterion_01_phase_transition_near_two() {
    let mut f = Vec::new();
    let at_zero = acceleration(0.0, 2.0);
    check(&mut f, at_zero == Ok(-1.0), || {
        format!("acc(0, 2) = {at_zero:?}")
    });

    let below: Vec<(i32, f64)> = (5..=20)
        .map(|k| (k, acceleration(10f64.powi(-k), 1.9).unwrap()))
        .collect();
    check(&mut f, below.windows(2).all(|w| w[1].1 < w[0].1), || {
        "acc(10^-k, 1.9) not strictly decreasing".into()
    });
    for &(k, a) in &below {
        let expect = -0.9 * 10f64.powf(k as f64 / 10.0);
        check(&mut f, ((a - expect) / expect).abs() <= 1e-6, || {
            format!("acc(1e-{k}, 1.9) = {a}, asymptote {expect}")
        });
    }

    let above: Vec<(i32, f64)> = (5..=20)
        .map(|k| (k, acceleration(10f64.powi(-k), 2.1).unwrap()))
        .collect();
    check(
        &mut f,
        above.windows(2).all(|w| w[1].1.abs() < w[0].1.abs()),
        || "|acc(10^-k, 2.1)| not shrinking".into(),
    );
    for &(k, a) in &above {
        let bound = 10f64.powf(-k as f64 / 10.0) * 1.1 * 1.0001;
        check(&mut f, a.abs() < bound, || {
            format!("|acc(1e-{k}, 2.1)| = {} >= {bound}", a.abs())
        });
    }
    report(1, "phase transition near n = 2", f);
}

#[test]
fn criterion_02_no_transition_near_three() {
    let mut f = Vec::new();
    let ns = [2.9, 3.0, 3.1];
    let scan = phase_scan(&ns, &[1e-8, 0.5]).unwrap();
    check(
        &mut f,
        scan.classes.iter().all(|c| c.1 == PhaseClass::LimitZero),
        || format!("classes {:?}", scan.classes),
    );
    for n in ns {
        let a = acceleration(1e-8, n).unwrap();
        check(&mut f, a.abs() < 1e-6, || {
            format!("|acc(1e-8, {n})| = {}", a.abs())
        });
    }
    report(2, "no transition near n = 3", f);
}

fn vel_slope(x: f64, n: f64, h: f64) -> f64 {
    (velocity(x + h, n).unwrap() - velocity(x - h, n).unwrap()) / (2.0 * h)
}

#[test]
fn criterion_03_velocity_slope_at_two() {
    let mut f = Vec::new();
    let s = vel_slope(1e-6, 2.0, 1e-7);
    check(&mut f, (s + 1.0).abs() <= 1e-4, || {
        format!("slope at n = 2 is {s}")
    });

    // Same stencil shape (h = x / 10) with x shrinking.
    let xs = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let slopes = |n: f64| -> Vec<f64> {
        xs.iter()
            .map(|&x| vel_slope(x, n, x / 10.0).abs())
            .collect()
    };
    let below = slopes(1.9);
    check(&mut f, below.windows(2).all(|w| w[1] > w[0]), || {
        format!("n = 1.9 slopes {below:?} not growing")
    });
    let above = slopes(2.1);
    check(&mut f, above.windows(2).all(|w| w[1] < w[0]), || {
        format!("n = 2.1 slopes {above:?} not shrinking")
    });
    check(&mut f, *above.last().unwrap() < 0.3, || {
        format!("n = 2.1 slope at 1e-6 is {}", above.last().unwrap())
    });
    report(3, "velocity slope -1 at n = 2", f);
}

#[test]
fn criterion_04_derivative_oracle_grid() {
    let mut f = Vec::new();
    let (_, took) = timed(|| {
        for n in [1.5, 1.9, 2.0, 2.1, 3.0, 4.0] {
            for i in 1..=19 {
                let x = i as f64 * 0.05;
                let (fd_vel, _) = finite_diff_oracle(x, n, 1e-5).unwrap();
                let (_, fd_acc) = finite_diff_oracle(x, n, 1e-4).unwrap();
                let vel = velocity(x, n).unwrap();
                let acc = acceleration(x, n).unwrap();
                check(
                    &mut f,
                    (vel - fd_vel).abs() <= 1e-6 * vel.abs().max(1.0),
                    || format!("vel n={n} x={x}: {vel} vs {fd_vel}"),
                );
                check(
                    &mut f,
                    (acc - fd_acc).abs() <= 1e-4 * acc.abs().max(1.0),
                    || format!("acc n={n} x={x}: {acc} vs {fd_acc}"),
                );
            }
        }
    });
    check(&mut f, took < Duration::from_secs(1), || {
        format!("took {took:?}")
    });
    report(4, "closed-form derivatives match finite differences", f);
}

/// Interior rational points by a double loop over reduced fractions.
fn pair_oracle(n: u32, d: u64) -> Vec<(u64, u64, u64, u64)> {
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let fracs: Vec<(u64, u64)> = (2..=d)
        .flat_map(|q| (1..q).filter(move |&p| gcd(p, q) == 1).map(move |p| (p, q)))
        .collect();
    let mut out = Vec::new();
    for &(p, q) in &fracs {
        for &(pp, qq) in &fracs {
            let (a, b, c, e) = (p as u128, q as u128, pp as u128, qq as u128);
            if a.pow(n) * e.pow(n) + c.pow(n) * b.pow(n) == b.pow(n) * e.pow(n) {
                out.push((p, q, pp, qq));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn criterion_05_rational_points() {
    let mut f = Vec::new();
    let expect = pair_oracle(2, 25);
    let mut got: Vec<(u64, u64, u64, u64)> = rational_points_on_curve(2, 25)
        .unwrap()
        .iter()
        .map(|s| {
            let (a, b) = s.x.to_i64_pair().unwrap();
            let (c, d) = s.y.to_i64_pair().unwrap();
            (a as u64, b as u64, c as u64, d as u64)
        })
        .collect();
    got.sort();
    check(&mut f, got.len() == 8, || {
        format!("{} points for n = 2", got.len())
    });
    check(&mut f, got == expect, || {
        format!("search {got:?} vs oracle {expect:?}")
    });
    let mut dens: Vec<u64> = got.iter().map(|t| t.1).collect();
    dens.sort();
    dens.dedup();
    check(&mut f, dens == [5, 13, 17, 25], || {
        format!("denominators {dens:?}")
    });

    for (n, d) in [(3, 500), (4, 300)] {
        let (r, took) = timed(|| rational_points_on_curve(n, d).unwrap());
        check(&mut f, r.is_empty(), || {
            format!("n = {n}: {} points", r.len())
        });
        check(&mut f, took < Duration::from_secs(10), || {
            format!("n = {n} took {took:?}")
        });
    }
    report(5, "rational points of the curve", f);
}

fn triple_oracle(n: u32, max_z: u64) -> usize {
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut count = 0;
    for z in 1..=max_z {
        for x in 1..z {
            for y in x..z {
                let (a, b, c) = (x as u128, y as u128, z as u128);
                if a.pow(n) + b.pow(n) == c.pow(n) && gcd(gcd(x, y), z) == 1 {
                    count += 1;
                }
            }
        }
    }
    count
}

#[test]
fn criterion_06_integer_triples() {
    let mut f = Vec::new();
    let oracle = triple_oracle(2, 100);
    let got = diophantine_triples(2, 100).unwrap();
    check(&mut f, got.len() == 16 && oracle == 16, || {
        format!("{} triples, oracle {oracle}", got.len())
    });
    for (n, z) in [(3, 200), (4, 150)] {
        let (r, took) = timed(|| diophantine_triples(n, z).unwrap());
        check(&mut f, r.is_empty(), || {
            format!("n = {n}: {} triples", r.len())
        });
        check(&mut f, took < Duration::from_secs(10), || {
            format!("n = {n} took {took:?}")
        });
    }
    report(6, "primitive integer triples", f);
}

fn random_states(count: usize) -> Vec<GeodesicState> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..count)
        .map(|_| {
            GeodesicState::new(
                rng.gen_range(0.0..TAU),
                rng.gen_range(0.0..TAU),
                rng.gen_range(0.2..1.2),
                rng.gen_range(-1.2..1.2),
            )
        })
        .collect()
}

#[test]
fn criterion_07_geodesic_conservation() {
    let mut f = Vec::new();
    let torus = Torus::new(2.0, 1.0).unwrap();
    let states = random_states(20);
    let (runs, took) = timed(|| {
        states
            .iter()
            .map(|&s| integrate_geodesic(&torus, s, 100.0, 1e-3).unwrap())
            .collect::<Vec<_>>()
    });
    for (s, r) in states.iter().zip(&runs) {
        check(&mut f, r.k_drift < 1e-8 && r.energy_drift < 1e-8, || {
            format!(
                "{s:?}: k drift {:e}, energy drift {:e}",
                r.k_drift, r.energy_drift
            )
        });
    }
    check(&mut f, took < Duration::from_secs(5), || {
        format!("20 states took {took:?}")
    });

    // At h = 1e-3 the drift already sits at the rounding floor (1e-14 to
    // 1e-12), where halving h only reshuffles rounding error. The order is
    // measured at the finest step, doubling from 1e-3, whose drift clears
    // 1e-10 so that truncation dominates.
    let mut worst = f64::INFINITY;
    for s in &states {
        let mut h = 1e-3;
        let mut fine = integrate_geodesic(&torus, *s, 100.0, h).unwrap();
        while fine.k_drift.min(fine.energy_drift) < 1e-10 && h < 0.1 {
            h *= 2.0;
            fine = integrate_geodesic(&torus, *s, 100.0, h).unwrap();
        }
        let coarse = integrate_geodesic(&torus, *s, 100.0, 2.0 * h).unwrap();
        let k_ratio = coarse.k_drift / fine.k_drift;
        let e_ratio = coarse.energy_drift / fine.energy_drift;
        worst = worst.min(k_ratio).min(e_ratio);
        check(&mut f, k_ratio >= 12.0 && e_ratio >= 12.0, || {
            format!(
                "{s:?}: halving {} -> {h}: ratios k {k_ratio:.1}, energy {e_ratio:.1}",
                2.0 * h
            )
        });
    }
    let literal = states
        .iter()
        .zip(&runs)
        .map(|(s, r)| {
            let half = integrate_geodesic(&torus, *s, 100.0, 5e-4).unwrap();
            (r.k_drift / half.k_drift).min(r.energy_drift / half.energy_drift)
        })
        .fold(f64::INFINITY, f64::min);
    let floor = runs
        .iter()
        .map(|r| r.k_drift.max(r.energy_drift))
        .fold(0.0, f64::max);
    println!("  worst drift at h = 1e-3: {floor:e}; smallest ratio 1e-3 -> 5e-4 (rounding floor): {literal:.2}");
    println!("  smallest halving ratio where truncation dominates: {worst:.1}");
    report(7, "geodesic conservation and fourth-order convergence", f);
}

#[test]
fn criterion_08_christoffel_cross_check() {
    let mut f = Vec::new();
    for torus in [Torus::new(2.0, 1.0).unwrap(), Torus::new(3.0, 2.5).unwrap()] {
        for i in 0..1000 {
            let v = TAU * i as f64 / 1000.0;
            let h = 1e-6;
            let e_v = (torus.first_fundamental_form(v + h).e
                - torus.first_fundamental_form(v - h).e)
                / (2.0 * h);
            let ff = torus.first_fundamental_form(v);
            let (u_uv, v_uu) = (0.5 * e_v / ff.e, -0.5 * e_v / ff.g);
            let c = torus.christoffels(v);
            check(
                &mut f,
                (c.u_uv - u_uv).abs() < 1e-8 && (c.v_uu - v_uu).abs() < 1e-8,
                || {
                    format!(
                        "v = {v}: ({}, {}) vs numeric ({u_uv}, {v_uu})",
                        c.u_uv, c.v_uu
                    )
                },
            );
        }
    }

    // Squared denominator in the mixed symbol, as sometimes printed.
    let squared = |t: &Torus, v: f64| Christoffels {
        u_uv: -t.minor() * v.sin() / (t.major() + t.minor() * v.cos()).powi(2),
        v_uu: t.christoffels(v).v_uu,
    };
    let torus = Torus::new(2.0, 1.0).unwrap();
    let s0 = GeodesicState::new(0.0, 0.7, 0.9, 0.3);
    let right = integrate_geodesic(&torus, s0, 100.0, 1e-3).unwrap();
    let wrong = integrate_geodesic_with(&torus, s0, 100.0, 1e-3, squared).unwrap();
    check(&mut f, right.k_drift < 1e-8, || {
        format!("closed form k drift {:e}", right.k_drift)
    });
    check(&mut f, wrong.k_drift > 1e-3, || {
        format!("squared-denominator k drift only {:e}", wrong.k_drift)
    });
    println!(
        "  k drift: closed form {:e}, squared denominator {:e}",
        right.k_drift, wrong.k_drift
    );
    report(
        8,
        "Christoffel symbols and the squared-denominator variant",
        f,
    );
}

fn obj_vertices(path: &Path) -> Vec<[f64; 3]> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let c: Vec<f64> = l.split(' ').map(|t| t.parse().unwrap()).collect();
            [c[0], c[1], c[2]]
        })
        .collect()
}

#[test]
fn criterion_09_winding_closure() {
    let mut f = Vec::new();
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    for (a, b, expect) in [(1, 1, TAU), (1, 3, TAU), (1, 5, TAU), (2, 4, PI)] {
        let line =
            WindingLine::from_rational(Rational::from(a), Rational::from(b), 0.0, 0.0).unwrap();
        let c = line.closure_period().unwrap();
        check(&mut f, (c.period - expect).abs() < 1e-12, || {
            format!("({a},{b}) period {}", c.period)
        });

        let out = dir.path().join(format!("line_{a}_{b}.obj"));
        let status = bin()
            .args([
                "map-line",
                "--a",
                &a.to_string(),
                "--b",
                &b.to_string(),
                "--R",
                "2",
                "--r",
                "1",
            ])
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap()
            .status;
        check(&mut f, status.success(), || {
            format!("map-line ({a},{b}) exited with {status}")
        });
        if status.success() {
            let v = obj_vertices(&out);
            let (p, q) = (v[0], v[v.len() - 1]);
            let gap = (0..3).map(|i| (p[i] - q[i]).abs()).fold(0.0, f64::max);
            check(&mut f, gap < 1e-9, || {
                format!("({a},{b}) polyline gap {gap:e}")
            });
        }
    }
    let open = WindingLine::new(1.0, 2f64.sqrt(), 0.0, 0.0).unwrap();
    let coverage = density_coverage(&open, 1000.0 * TAU, 100).unwrap();
    check(&mut f, coverage >= 0.99, || format!("coverage {coverage}"));
    let took = start.elapsed();
    check(&mut f, took < Duration::from_secs(5), || {
        format!("took {took:?}")
    });
    report(9, "winding-line closure and density", f);
}

/// Figure invocations listed in the README, without the program name.
fn readme_figure_commands() -> Vec<String> {
    let readme = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    fs::read_to_string(readme)
        .unwrap()
        .lines()
        .filter_map(|l| l.trim().strip_prefix("fermat-torus "))
        .filter(|l| l.contains("--out figures/"))
        .map(|l| l.trim().to_string())
        .collect()
}

fn regenerate(commands: &[String], dir: &Path) -> Result<(), String> {
    for c in commands {
        let out = bin()
            .args(c.split_whitespace())
            .current_dir(dir)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("`{c}` exited with {}", out.status));
        }
    }
    Ok(())
}

#[test]
fn criterion_10_figure_regeneration() {
    let mut f = Vec::new();
    let commands = readme_figure_commands();
    let known: Vec<&str> = FIGURE_COMMANDS.iter().map(|c| c.args).collect();
    check(
        &mut f,
        commands.len() == known.len() && known.iter().all(|k| commands.iter().any(|c| c == k)),
        || format!("README lists {commands:?}, expected {known:?}"),
    );
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [a.path(), b.path()] {
        if let Err(e) = regenerate(&commands, dir) {
            f.push(e);
        }
    }
    for c in FIGURE_COMMANDS {
        let (pa, pb) = (a.path().join(c.output()), b.path().join(c.output()));
        match (fs::read(&pa), fs::read(&pb)) {
            (Ok(x), Ok(y)) => check(&mut f, x == y, || {
                format!("figure {} differs between runs", c.figure)
            }),
            _ => f.push(format!("figure {} not written", c.figure)),
        }
    }
    report(10, "figures regenerate byte-identically", f);
}
