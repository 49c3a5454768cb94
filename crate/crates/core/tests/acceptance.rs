//! Acceptance gate. Every check is exact rational equality; each test prints
//! one PASS/FAIL line. Run with `cargo test -p fibdet --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use fibdet::closedforms::{carlitz_d, generalized_d};
use fibdet::harness::{
    bench_report, run_verification, BenchReport, DesnanotGrid, GridSpec, IntRange, Target,
};
use fibdet::matrices::{
    build_power_matrix, desnanot_jacobi_check, det_bareiss, det_cofactor, det_dodgson,
    dodgson_fallbacks,
};
use fibdet::scalar::{int, sign_power};
use fibdet::sympoly::{verify_corollary4, verify_lemma3, verify_lemma6};
use fibdet::{CatalanFamily, ExactMatrix, PowerMatrixSpec, RecurrenceParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: &str, what: &str, ok: bool, elapsed: Duration, limit: Option<Duration>) {
    let in_time = limit.is_none_or(|l| elapsed < l);
    let status = if ok && in_time { "PASS" } else { "FAIL" };
    let limit = limit.map(|l| format!(" (limit {l:?})")).unwrap_or_default();
    println!("[{status}] {id}: {what} in {elapsed:.2?}{limit}");
    assert!(ok, "{id} failed: {what}");
    assert!(in_time, "{id} exceeded its runtime limit");
}

fn targets(list: &str) -> BTreeSet<Target> {
    Target::parse_list(list).unwrap()
}

#[test]
fn ac01_alfred_problem_all_engines() {
    let start = Instant::now();
    let mut ok = true;
    for n in -5..=10 {
        let m = build_power_matrix(&PowerMatrixSpec {
            params: RecurrenceParams::fibonacci(),
            r: 2,
            s: 0,
            k: 1,
            n,
        });
        let expected = int(2) * sign_power(n + 1);
        ok &= det_cofactor(&m).unwrap() == expected;
        ok &= det_bareiss(&m) == expected;
        ok &= det_dodgson(&m) == expected;
    }
    verdict(
        "AC-01",
        "3x3 F^2 determinant = 2(-1)^(n+1), n in [-5,10], three engines",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn ac02_parker_shape() {
    let start = Instant::now();
    let mut ok = true;
    for n in 0..=5 {
        let m = build_power_matrix(&PowerMatrixSpec {
            params: RecurrenceParams::fibonacci(),
            r: 4,
            s: 0,
            k: 1,
            n,
        });
        let brute = det_bareiss(&m);
        ok &= brute == carlitz_d(4, n).value && brute == int(13824);
    }
    verdict(
        "AC-02",
        "5x5 F^4 determinant = carlitz_D(4,n) = 13824, n in [0,5]",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn ac03_generalized_fibonacci_grid() {
    let start = Instant::now();
    let grid = GridSpec {
        r: IntRange::new(0, 4),
        s: IntRange::new(-2, 3),
        k: IntRange::new(-2, 3),
        n: IntRange::new(-2, 3),
        ..GridSpec::fibonacci_only()
    };
    let report = run_verification(&grid, &targets("eq2")).unwrap();
    let s = report.summary;
    let ok = s.failed == 0 && s.total == 5 * 6 * 6 * 6;
    // spot-check the specialization chain on the same grid
    let chain =
        (0..=4).all(|r| (-2..=3).all(|n| carlitz_d(r, n).value == generalized_d(r, 0, 1, n).value));
    verdict(
        "AC-03",
        &format!(
            "Fibonacci power determinant closed form vs brute force, {}/{} cases",
            s.passed, s.total
        ),
        ok && chain,
        start.elapsed(),
        Some(Duration::from_secs(30)),
    );
}

#[test]
fn ac04_theorem5_default_grid() {
    let start = Instant::now();
    let report = run_verification(&GridSpec::default(), &targets("thm5")).unwrap();
    let s = report.summary;
    verdict(
        "AC-04",
        &format!(
            "power determinant closed form vs brute force on default grid, {}/{} cases",
            s.passed, s.total
        ),
        s.failed == 0 && s.total == 500 * 5 * 216,
        start.elapsed(),
        Some(Duration::from_secs(300)),
    );
}

#[test]
fn ac05_theorem7_sampled() {
    let start = Instant::now();
    let report = run_verification(&GridSpec::default(), &targets("thm7")).unwrap();
    let s = report.summary;
    let max_r = report
        .records
        .iter()
        .filter_map(|r| r.inputs.r)
        .max()
        .unwrap_or(0);
    verdict(
        "AC-05",
        &format!(
            "product determinant closed form vs brute force, {}/{} sampled specs (r <= {max_r})",
            s.passed, s.total
        ),
        s.failed == 0 && s.total == 500 && max_r <= 3,
        start.elapsed(),
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn ac06_corollaries_8_and_9() {
    let start = Instant::now();
    let grid = GridSpec {
        r_product: IntRange::new(0, 3),
        s: IntRange::new(-2, 3),
        k: IntRange::new(-2, 3),
        p: IntRange::new(-2, 3),
        ..GridSpec::default()
    };
    let report = run_verification(&grid, &targets("cor8,cor9")).unwrap();
    let s = report.summary;
    // equal covers closed form = brute determinant = product-theorem instantiation
    let all_three = report
        .records
        .iter()
        .all(|r| r.alternate.as_deref() == Some(r.closed_form.as_str()));
    let cor8 = report.records_for(Target::Cor8).count();
    verdict(
        "AC-06",
        &format!("corollary closed forms vs brute force and theorem instantiation, {}/{} cases ({cor8} basic power)", s.passed, s.total),
        s.failed == 0 && all_three && cor8 == 4 * 36,
        start.elapsed(),
        None,
    );
}

#[test]
fn ac07_generalized_catalan_full_grid() {
    let start = Instant::now();
    let (mut total, mut failed) = (0u64, 0u64);
    for a0 in -3..=3 {
        for a1 in -3..=3 {
            for c1 in -3..=3 {
                for c2 in (-3..=3).filter(|&c| c != 0) {
                    let w = RecurrenceParams::from_ints(a0, a1, c1, c2).unwrap();
                    let y = RecurrenceParams::from_ints(a1, a0, c1, c2).unwrap();
                    let family = CatalanFamily::new(&w, &y).unwrap();
                    for s in -6..=6 {
                        for i in -6..=6 {
                            for j in -6..=6 {
                                total += 1;
                                failed += u64::from(!family.general(s, i, j).holds);
                            }
                        }
                    }
                }
            }
        }
    }
    verdict(
        "AC-07",
        &format!(
            "generalized Catalan identity, {} of {total} instances fail",
            failed
        ),
        failed == 0 && total == 2058 * 13 * 13 * 13,
        start.elapsed(),
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn ac07b_catalan_default_report() {
    let start = Instant::now();
    let report = run_verification(&GridSpec::default(), &targets("catalan")).unwrap();
    let s = report.summary;
    verdict(
        "AC-07b",
        &format!(
            "Catalan target on default grid (W = Y and swapped Y), {}/{} records",
            s.passed, s.total
        ),
        s.failed == 0 && s.total == 500 * 2 * 216,
        start.elapsed(),
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn ac08_symbolic_certificates() {
    let start = Instant::now();
    let l3 = (0..=4).all(|r| verify_lemma3(r).unwrap());
    let c4 = (0..=3).all(|r| verify_corollary4(r).unwrap());
    let l6 = (0..=4).all(|r| verify_lemma6(r).unwrap());
    verdict(
        "AC-08",
        &format!(
            "power lemma r<=4: {l3}, bilinear power corollary r<=3: {c4}, product lemma r<=4: {l6}"
        ),
        l3 && c4 && l6,
        start.elapsed(),
        Some(Duration::from_secs(120)),
    );
}

/// Random integer matrix whose Dodgson interiors include a zero.
fn zero_interior_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ExactMatrix {
    let mut m = ExactMatrix::from_fn(dim, |_, _| int(rng.gen_range(-9..=9)));
    match rng.gen_range(0..2) {
        // a zero 1x1 interior
        0 => {
            let (i, j) = (rng.gen_range(1..dim - 1), rng.gen_range(1..dim - 1));
            m.set(i, j, int(0));
        }
        // a singular 2x2 interior (or a zero entry when dim = 3)
        _ if dim >= 4 => {
            let (i, j) = (rng.gen_range(1..dim - 2), rng.gen_range(1..dim - 2));
            let scale = rng.gen_range(-3..=3);
            for c in 0..2 {
                let v = m.get(i, j + c) * int(scale);
                m.set(i + 1, j + c, v);
            }
        }
        _ => m.set(1, 1, int(0)),
    }
    m
}

#[test]
fn ac09_desnanot_jacobi_and_dodgson() {
    let start = Instant::now();
    let grid = GridSpec {
        desnanot: DesnanotGrid {
            dims: IntRange::new(3, 5),
            per_dim: 200,
            ..DesnanotGrid::default()
        },
        ..GridSpec::default()
    };
    let report = run_verification(&grid, &targets("desnanot")).unwrap();
    let s = report.summary;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0d6_2e80);
    let mut constructed = 0;
    let mut ok = true;
    for idx in 0..30 {
        let dim = 3 + idx % 3;
        let m = zero_interior_matrix(&mut rng, dim);
        if dodgson_fallbacks(&m) == 0 {
            continue;
        }
        constructed += 1;
        ok &= det_dodgson(&m) == det_bareiss(&m);
        ok &= desnanot_jacobi_check(&m).unwrap();
    }
    verdict(
        "AC-09",
        &format!(
            "Desnanot-Jacobi + Dodgson = Bareiss on {}/{} random matrices and {constructed} zero-interior matrices",
            s.passed, s.total
        ),
        s.failed == 0 && s.total == 600 && ok && constructed >= 10,
        start.elapsed(),
        None,
    );
}

#[test]
fn ac10_bench_r12() {
    let start = Instant::now();
    let report = bench_report(12, &RecurrenceParams::fibonacci(), 0, 3, 5);
    let json = serde_json::to_string_pretty(&report).unwrap();
    let parsed: BenchReport = serde_json::from_str(&json).unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    let ok = report.records.len() == 12
        && report.records.iter().all(|r| r.values_equal)
        && parsed == report
        && value["schema_version"] == 1;
    for rec in &report.records {
        println!(
            "    r={:>2} bits={:>5} closed={:>9}ns bareiss={:>9}ns dodgson={:>9}ns",
            rec.r,
            rec.max_entry_bits,
            rec.timings.closed_form_ns,
            rec.timings.bareiss_ns,
            rec.timings.dodgson_ns
        );
    }
    verdict(
        "AC-10",
        "bench r_max=12 values equal at every r, JSON well-formed",
        ok,
        start.elapsed(),
        None,
    );
}
