//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use berry_core::berry::{berry_factor, overlap_chain, slater_overlap, trace_path, BerryOptions, BerryResult};
use berry_core::lattice::{path_catalog, LatticeGeometry};
use berry_core::meanfield::{ModelParams, SectorState, SlaterState, SpinSector};
use berry_core::numerics::{eig_sym, OrbitalSet, SymmetricMatrix};
use berry_core::twolevel::{
    berry_field_real, gauge_phase, loop_phase_factor, monopole_phase, planar_family, GaugeFunction, PlanarLoop,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot be met as written. Each must stay red.
const KNOWN_RED: &[u32] = &[1];

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn check(id: u32, pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        id,
        pass,
        detail: detail.into(),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let v = f();
    (v, t0.elapsed())
}

fn run(path: &str, u: f64, ns: usize) -> BerryResult {
    let geom = LatticeGeometry::default();
    let p = ModelParams {
        u,
        ..ModelParams::default()
    };
    let spec = path_catalog(&geom, path, ns).unwrap();
    berry_factor(&geom, &p, &spec, &BerryOptions::default())
        .unwrap_or_else(|e| panic!("{path} U={u} N_s={ns}: {e}"))
}

fn c1() -> Outcome {
    let n = 256;
    let (raw, dt) = timed(|| loop_phase_factor(&PlanarLoop::new(1, 1.0, n, 0.0).unwrap()).unwrap());
    let analytic = (PI / n as f64).cos().powi(n as i32);
    let pass = raw < 0.0 && raw.abs() >= 0.99 && dt < Duration::from_secs(1);
    check(
        1,
        pass,
        format!(
            "sign {} |raw| {:.6} (analytic cos(pi/N)^N = {analytic:.6}, bound 0.99 unreachable below N~494) in {dt:.2?}",
            raw.signum(),
            raw.abs()
        ),
    )
}

fn c2() -> Outcome {
    let (factors, dt) = timed(|| {
        (1..=4)
            .map(|k| loop_phase_factor(&PlanarLoop::new(k, 1.0, 256, 0.0).unwrap()).unwrap().signum())
            .collect::<Vec<_>>()
    });
    let pass = factors.iter().zip(1..=4).all(|(f, k)| *f == (-1f64).powi(k)) && dt < Duration::from_secs(5);
    check(2, pass, format!("factors {factors:?} for k=1..4 in {dt:.2?}"))
}

fn c3() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=5 {
        let lp = PlanarLoop::new(1, 1.0, 64, 0.0).unwrap();
        let got = gauge_phase(&GaugeFunction::new(0.5, k).unwrap(), &lp);
        worst = worst.max((got + k as f64 * PI).abs());
    }
    check(3, worst <= 4.0 * f64::EPSILON * 5.0 * PI, format!("max |phase + k pi| = {worst:.1e}"))
}

fn c4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut points = 0;
    while points < 100 {
        let r: [f64; 3] = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        if r[0].hypot(r[2]) < 0.1 {
            continue;
        }
        let b = berry_field_real(planar_family, &r, 0, 1e-4).unwrap();
        worst = b.iter().fold(worst, |m, x| m.max(x.abs()));
        points += 1;
    }
    check(4, worst <= 1e-12, format!("max |B| = {worst:.1e} over 100 points"))
}

fn c5() -> Outcome {
    let (errs, dt) = timed(|| {
        [PI / 4.0, PI / 2.0, 2.0 * PI / 3.0]
            .map(|th| (monopole_phase(th, 2048).unwrap() + PI * (1.0 - th.cos())).abs())
    });
    let worst = errs.iter().fold(0.0f64, |m, x| m.max(*x));
    check(5, worst <= 1e-3 && dt < Duration::from_secs(5), format!("max error {worst:.2e} in {dt:.2?}"))
}

fn c10() -> Outcome {
    fn state(orbitals: &[Vec<f64>]) -> SlaterState {
        SlaterState {
            sectors: vec![SectorState {
                spin: SpinSector::Up,
                orbitals: OrbitalSet::new(orbitals).unwrap(),
                spectrum: vec![0.0; orbitals[0].len()],
            }],
            e_total: 0.0,
        }
    }
    fn orbitals(rng: &mut ChaCha8Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
        let es = eig_sym(&SymmetricMatrix::from_upper(dim, |_, _| rng.gen_range(-1.0..1.0))).unwrap();
        (0..count).map(|k| es.vector(k)).collect()
    }
    // Antisymmetrised amplitude of the product state at position tuple `xs`.
    fn amplitude(orbs: &[Vec<f64>], xs: &[usize], perm: &mut Vec<usize>, depth: usize, sign: f64) -> f64 {
        let n = orbs.len();
        if depth == n {
            return sign * (0..n).map(|i| orbs[perm[i]][xs[i]]).product::<f64>();
        }
        let mut total = 0.0;
        for j in depth..n {
            perm.swap(depth, j);
            let s = if j == depth { sign } else { -sign };
            total += amplitude(orbs, xs, perm, depth + 1, s);
            perm.swap(depth, j);
        }
        total
    }
    fn brute(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
        let n = a.len();
        let dim = a[0].len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0.0;
        for code in 0..dim.pow(n as u32) {
            let xs: Vec<usize> = (0..n).map(|i| code / dim.pow(i as u32) % dim).collect();
            total += amplitude(a, &xs, &mut perm, 0, 1.0) * amplitude(b, &xs, &mut perm, 0, 1.0);
        }
        total / (1..=n).product::<usize>() as f64
    }

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=3 {
        for dim in n..=6 {
            for _ in 0..5 {
                let a = orbitals(&mut rng, n, dim);
                let b = orbitals(&mut rng, n, dim);
                let got = slater_overlap(&state(&a), &state(&b)).unwrap();
                worst = worst.max((got - brute(&a, &b)).abs());
                cases += 1;
            }
        }
    }
    check(10, worst <= 1e-10, format!("max deviation {worst:.1e} over {cases} cases"))
}

fn c11() -> Outcome {
    let geom = LatticeGeometry::default();
    let p = ModelParams::default();
    let spec = path_catalog(&geom, "triangle", 33).unwrap();
    let states = trace_path(&geom, &p, &spec, &BerryOptions::default()).unwrap().states;
    let product = |s: &[SlaterState]| overlap_chain(s).unwrap().iter().product::<f64>();
    let reference = product(&states);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mut flipped = states.clone();
        for _ in 0..rng.gen_range(1..=5) {
            let k = rng.gen_range(0..flipped.len());
            let sec = rng.gen_range(0..flipped[k].sectors.len());
            let orbitals = &mut flipped[k].sectors[sec].orbitals;
            let a = rng.gen_range(0..orbitals.count());
            orbitals.negate_orbital(a);
        }
        worst = worst.max((product(&flipped) - reference).abs());
    }
    check(11, worst <= 1e-12, format!("max change {worst:.1e} over 100 trials"))
}

fn c9() -> Outcome {
    let geom = LatticeGeometry::default();
    let spec = path_catalog(&geom, "triangle", 64).unwrap();
    let samples = trace_path(&geom, &ModelParams::default(), &spec, &BerryOptions::default())
        .unwrap()
        .samples;
    let n = samples.len();
    let gap = |i: usize| samples[i % n].gap;
    let minima: Vec<f64> = (0..n)
        .filter(|&i| gap(i) < gap(i + n - 1) && gap(i) <= gap(i + 1))
        .map(|i| samples[i].arc)
        .collect();
    let maxima: Vec<f64> = (0..n)
        .filter(|&i| gap(i) > gap(i + n - 1) && gap(i) >= gap(i + 1))
        .map(|i| samples[i].arc)
        .collect();
    let cyc = |x: f64, target: f64| {
        let d = (x - target).rem_euclid(3.0);
        d.min(3.0 - d)
    };
    let minima_ok = minima.len() == 3 && minima.iter().all(|&a| cyc(a, a.floor() + 0.5) <= 0.1);
    let maxima_ok = !maxima.is_empty() && maxima.iter().all(|&a| cyc(a, a.round()) <= 0.1);
    check(
        9,
        minima_ok && maxima_ok,
        format!("minima at {minima:.3?}, maxima at {maxima:.3?}"),
    )
}

fn sweep_csv(workers: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_berry"))
        .args(["sweep", "--u-values", "6", "--g-values", "6", "--paths", "triangle,square", "--ns", "33"])
        .env("BERRY_WORKERS", workers)
        .output()
        .expect("run berry");
    assert!(out.status.success(), "sweep failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn main() -> ExitCode {
    let mut outcomes = vec![c1(), c2(), c3(), c4(), c5()];

    let mut six = Vec::new();
    let mut worst_time = Duration::ZERO;
    for path in ["triangle", "square"] {
        let mut row = Vec::new();
        for ns in [17, 33, 65] {
            let (r, dt) = timed(|| run(path, 6.0, ns));
            if ns == 33 {
                worst_time = worst_time.max(dt);
            }
            row.push(r);
        }
        six.push(row);
    }
    let (tri, sq) = (&six[0][1], &six[1][1]);
    outcomes.push(check(
        6,
        tri.factor == -1 && sq.factor == 1 && worst_time < Duration::from_secs(120),
        format!(
            "triangle {:+} ({:.4e}), square {:+} ({:.4e}), slowest {worst_time:.2?}",
            tri.factor, tri.raw_product, sq.factor, sq.raw_product
        ),
    ));

    let weak = run("triangle", 0.5, 33);
    outcomes.push(check(
        7,
        weak.factor == 1,
        format!(
            "triangle {:+} ({:.4e}), count {}, parity {}",
            weak.factor, weak.raw_product, weak.degeneracy_count, weak.parity_consistent
        ),
    ));

    outcomes.push(check(
        8,
        tri.degeneracy_count == 3 && sq.degeneracy_count == 4 && tri.parity_consistent && sq.parity_consistent,
        format!(
            "triangle k={} parity {}, square k={} parity {}",
            tri.degeneracy_count, tri.parity_consistent, sq.degeneracy_count, sq.parity_consistent
        ),
    ));

    outcomes.push(c9());
    outcomes.push(c10());
    outcomes.push(c11());

    let stable = six.iter().all(|row| {
        row.iter().all(|r| r.factor == row[0].factor)
            && row.windows(2).all(|w| w[1].raw_product.abs() >= w[0].raw_product.abs())
    });
    let mags: Vec<Vec<String>> = six
        .iter()
        .map(|row| row.iter().map(|r| format!("{:+.4}", r.raw_product)).collect())
        .collect();
    outcomes.push(check(12, stable, format!("triangle {:?}, square {:?} for N_s 17/33/65", mags[0], mags[1])));

    let healthy: Vec<&BerryResult> = vec![tri, sq, &weak];
    let mut max_iter = 0;
    let mut max_res: f64 = 0.0;
    let mut max_dn: f64 = 0.0;
    for r in &healthy {
        for s in &r.samples {
            max_iter = max_iter.max(s.iterations);
            max_res = max_res.max(s.residual);
            max_dn = max_dn.max((s.electron_count - 15.0).abs());
        }
    }
    outcomes.push(check(
        13,
        max_iter <= 500 && max_res <= 1e-8 && max_dn <= 1e-10,
        format!("max iterations {max_iter}, max residual {max_res:.1e}, max |sum n - 15| {max_dn:.1e}"),
    ));

    let one = sweep_csv("1");
    let eight = sweep_csv("8");
    outcomes.push(check(14, one == eight, format!("{} bytes, identical: {}", one.len(), one == eight)));

    outcomes.sort_by_key(|o| o.id);
    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN_RED.contains(&o.id);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if known { " [known unattainable]" } else { "" };
        println!("{tag} criterion {:>2}: {}{note}", o.id, o.detail);
        if o.pass == known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criterion result(s) differ from expectation");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
