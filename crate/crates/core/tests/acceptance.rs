//! Acceptance criteria 1 to 10. Each test prints one PASS/FAIL line.

use std::collections::BTreeSet;
use std::f64::consts::LN_2;
use std::path::Path;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use garsia::conjugates::{select_conjugates, ConjugateSystem, Selection};
use garsia::criteria::{dimension_report, threshold_criterion, MethodChoice, ReportOptions, Threshold};
use garsia::depth::{best_bound_at, certify_region, compute_mn, compute_mn_at, parameter_box};
use garsia::geometry::{bounding_region, build_layout, word_box, Generator, TailDepth};
use garsia::harness::drivers::{run_certify, CertifyRequest};
use garsia::harness::fixtures::{load_fixtures, FixtureRow, DEFAULT_FIXTURES};
use garsia::harness::sweep::{run_sweep, write_csv, write_pgm, SweepSpec, CSV_HEADER};
use garsia::oracle::{collision_test, count_collisions, entropy_hn};
use garsia::poly::{IntPolynomial, Transform};
use garsia::roots::{find_roots, DEFAULT_ROOT_TOL};
use garsia::word::{Word, WordTransform};

fn report(id: u32, name: &str, failures: &[String], elapsed: Duration) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {status} {name} ({:.2?})", elapsed);
    for f in failures {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:#?}");
}

fn fixtures() -> Vec<FixtureRow> {
    load_fixtures(Path::new(DEFAULT_FIXTURES)).unwrap()
}

fn poly(text: &str) -> IntPolynomial {
    IntPolynomial::parse(text).unwrap()
}

fn system(p: &IntPolynomial) -> ConjugateSystem {
    let roots = find_roots(p, DEFAULT_ROOT_TOL).unwrap();
    select_conjugates(p, &roots, &Selection::AllOutsideUnitCircle, None).unwrap()
}

fn box_options(n_max: usize) -> ReportOptions {
    ReportOptions {
        n_max,
        method: MethodChoice::Box,
        ..ReportOptions::default()
    }
}

/// Certifies each row at its listed `n` and checks the ratio.
fn table_rows(rows: &[&FixtureRow], failures: &mut Vec<String>) {
    for row in rows {
        let n = row.expected_n.unwrap();
        let expected = row.expected_value.unwrap();
        let req = CertifyRequest {
            polynomial: row.polynomial.clone(),
            selection: Selection::AllOutsideUnitCircle,
            beta1_index: None,
            options: box_options(n),
        };
        let rep = run_certify(&req).unwrap();
        let v = &rep.verdict;
        let ratio = v.ratio_or_bound;
        println!(
            "    {} @{n}: m_n={:?} ratio={ratio:.9} listed={expected:.9} dev={:.2e}",
            row.polynomial,
            v.mn,
            (ratio - expected).abs()
        );
        if !v.certified() || v.n != Some(n) || ratio < 1.0 {
            failures.push(format!(
                "{}: expected certification at n = {n}, got n = {:?}, ratio {ratio:.9}",
                row.polynomial, v.n
            ));
        } else if (ratio - expected).abs() > 5e-3 {
            failures.push(format!(
                "{}: ratio {ratio:.9} differs from listed {expected:.9} by more than 5e-3 (m_{n} = {:?})",
                row.polynomial, v.mn
            ));
        }
    }
}

#[test]
fn criterion_01_threshold_table() {
    let start = Instant::now();
    let rows = fixtures();
    let mut failures = Vec::new();
    for row in rows.iter().filter(|r| r.table == 2) {
        let sys = system(&row.polynomial);
        let opts = ReportOptions {
            threshold: Threshold::Original,
            method: MethodChoice::Threshold,
            ..ReportOptions::default()
        };
        let v = dimension_report(&sys, &opts).unwrap();
        if !v.certified() {
            failures.push(format!("{} not certified: {}", row.polynomial, v.details));
        }
    }
    let golden = threshold_criterion(
        (1.0 + 5f64.sqrt()) / 2.0,
        Complex64::new((1.0 - 5f64.sqrt()) / 2.0, 0.0),
        Threshold::Original,
    )
    .unwrap();
    if golden.certified() || (golden.ratio_or_bound - 1.0).abs() > 1e-9 {
        failures.push(format!("golden ratio: ratio {}", golden.ratio_or_bound));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(1) {
        failures.push(format!("runtime {elapsed:?} exceeds 1 s"));
    }
    report(1, "threshold 0.82 on table 2, golden ratio excluded", &failures, elapsed);
}

#[test]
fn criterion_02_table3_fast_rows() {
    let start = Instant::now();
    let rows = fixtures();
    let fast: Vec<&FixtureRow> = rows
        .iter()
        .filter(|r| r.table == 3 && r.expected_n.unwrap() <= 7)
        .collect();
    assert_eq!(fast.len(), 7);
    let mut failures = Vec::new();
    table_rows(&fast, &mut failures);
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        failures.push(format!("runtime {elapsed:?} exceeds 10 s"));
    }
    report(2, "table 3 rows with k <= 7", &failures, elapsed);
}

#[test]
fn criterion_03_table1_small_k() {
    let start = Instant::now();
    let rows = fixtures();
    let picked: Vec<&FixtureRow> = rows
        .iter()
        .filter(|r| r.table == 1 && matches!(r.expected_n, Some(3) | Some(6)))
        .collect();
    assert_eq!(picked.len(), 2);
    let mut failures = Vec::new();
    for row in &picked {
        let sys = system(&row.polynomial);
        if let Some(c) = sys.conjugates().iter().find(|c| c.value.norm() <= 1.0 + 1e-6) {
            failures.push(format!("{}: modulus-1 root {} kept", row.polynomial, c.value));
        }
    }
    table_rows(&picked, &mut failures);
    report(3, "table 1 rows at n = 3 and n = 6", &failures, start.elapsed());
}

#[test]
fn criterion_04_table4_controls() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for text in ["-1,-1,0,0,0,1", "-1,-1,0,0,-1,1"] {
        let p = poly(text);
        let sys = system(&p);
        let scan = best_bound_at(&sys.generators(), 1, 10, TailDepth::Auto).unwrap();
        println!("    {p}: best ratio {:.6} at n = {}", scan.best.ratio, scan.best.n);
        if scan.history.len() != 10 || scan.history.iter().any(|r| r.ratio >= 1.0) {
            failures.push(format!("{p}: some n <= 10 reaches ratio 1"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("runtime {elapsed:?} exceeds 60 s"));
    }
    report(4, "table 4 controls stay below 1 for n <= 10", &failures, elapsed);
}

#[test]
fn criterion_05_oracle_equivalence() {
    let start = Instant::now();
    let rows = fixtures();
    let polys: BTreeSet<Vec<i64>> = rows
        .iter()
        .filter(|r| r.polynomial.degree() <= 4)
        .map(|r| r.polynomial.coeffs().to_vec())
        .collect();
    assert!(polys.len() >= 4);
    let mut failures = Vec::new();
    for coeffs in polys {
        let p = IntPolynomial::new(coeffs).unwrap();
        let sys = system(&p);
        let mut m = vec![0usize; 11];
        let mut h = vec![0f64; 11];
        for n in 1..=10 {
            let box_bound = compute_mn(&sys, n, TailDepth::Auto).unwrap();
            let exact = entropy_hn(&p, n).unwrap();
            m[n] = box_bound.mn;
            h[n] = exact.hn;
            if box_bound.mn < exact.max_n {
                failures.push(format!("{p} n={n}: m_n {} < max N_n {}", box_bound.mn, exact.max_n));
            }
            if box_bound.ln > exact.hn + 1e-12 {
                failures.push(format!("{p} n={n}: L_n {} > H_n {}", box_bound.ln, exact.hn));
            }
        }
        for a in 1..=5 {
            for b in 1..=5 {
                if m[a + b] > m[a] * m[b] {
                    failures.push(format!("{p}: m_{} > m_{a} m_{b}", a + b));
                }
                if h[a + b] > h[a] + h[b] + 1e-12 {
                    failures.push(format!("{p}: H_{} > H_{a} + H_{b}", a + b));
                }
            }
        }
    }
    report(5, "box bound versus exact oracle", &failures, start.elapsed());
}

#[test]
fn criterion_06_symmetry() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    for text in ["-1,-1,1", "-1,-1,-1,1", "-1,-1,0,0,1"] {
        let p = poly(text);
        let rev = p.transform(Transform::Reverse).unwrap();
        let neg = p.transform(Transform::Negate).unwrap();
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let a = Word::from_index(rng.gen_range(0..1usize << n), n);
            let base = count_collisions(&a, &p).unwrap();
            let r = count_collisions(&a.transform(WordTransform::Rev), &rev).unwrap();
            let s = count_collisions(&a.transform(WordTransform::Neg), &neg).unwrap();
            if base != r || base != s {
                failures.push(format!("{p} a={a}: N={base}, rev {r}, neg {s}"));
            }
        }
    }
    report(6, "rev and neg symmetries", &failures, start.elapsed());
}

#[test]
fn criterion_07_derived_oracle_values() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let golden = poly("-1,-1,1");
    let h3 = entropy_hn(&golden, 3).unwrap().hn;
    if (h3 - 2.75 * LN_2).abs() > 1e-14 {
        failures.push(format!("H_3 = {h3}, expected 2.75 log 2"));
    }
    let n100 = count_collisions(&Word::new(vec![1, 0, 0]).unwrap(), &golden).unwrap();
    if n100 != 2 {
        failures.push(format!("N_3(100) = {n100}"));
    }
    for row in fixtures() {
        for n in 1..=10 {
            let c = count_collisions(&Word::zeros(n), &row.polynomial).unwrap();
            if c != 1 {
                failures.push(format!("{} n={n}: N(0^n) = {c}", row.polynomial));
            }
        }
    }
    report(7, "derived oracle values", &failures, start.elapsed());
}

fn random_system(rng: &mut ChaCha8Rng) -> Vec<Generator> {
    let mut gens = vec![Generator::real(rng.gen_range(1.05..1.95))];
    for _ in 0..rng.gen_range(1..=2) {
        let modulus = rng.gen_range(1.05..1.95);
        gens.push(match rng.gen_range(0..3) {
            0 => Generator::real(modulus),
            1 => Generator::real(-modulus),
            _ => {
                let theta = rng.gen_range(0.1..3.0);
                Generator::complex(modulus * f64::cos(theta), modulus * f64::sin(theta))
            }
        });
    }
    gens
}

#[test]
fn criterion_08_geometry() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let n_max = 12;
    for _ in 0..20 {
        let gens = random_system(&mut rng);
        let (_, env) = build_layout(&gens, TailDepth::Auto, n_max).unwrap();
        let region = bounding_region(&env);
        for _ in 0..500 {
            let n = rng.gen_range(0..n_max);
            let digits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let parent = word_box(&digits, &env).unwrap();
            if !region.contains_box(&parent) {
                failures.push(format!("{gens:?} {digits:?}: outside the bounding region"));
            }
            for s in 0..2 {
                let mut child_digits = digits.clone();
                child_digits.push(s);
                let child = word_box(&child_digits, &env).unwrap();
                if !parent.contains_box(&child) {
                    failures.push(format!("{gens:?} {child_digits:?}: not nested"));
                }
            }
        }
    }
    let mut pairs = 0;
    for text in ["-1,-1,1", "-1,-1,-1,1", "-1,0,-1,0,1", "-1,-1,0,0,1", "-1,0,-1,-1,1,1"] {
        let p = poly(text);
        let sys = system(&p);
        let n = 8;
        let (_, env) = build_layout(&sys.generators(), TailDepth::Auto, n).unwrap();
        let words: Vec<Word> = (0..1usize << n).map(|i| Word::from_index(i, n)).collect();
        let boxes: Vec<_> = words.iter().map(|w| word_box(w.bits(), &env).unwrap()).collect();
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                if collision_test(&words[i].difference(&words[j]).unwrap(), &p).unwrap() {
                    pairs += 1;
                    if !boxes[i].intersects(&boxes[j]) {
                        failures.push(format!("{p}: {} and {} collide, boxes disjoint", words[i], words[j]));
                    }
                }
            }
        }
    }
    println!("    {pairs} colliding pairs checked");
    if pairs == 0 {
        failures.push("no colliding pairs found".into());
    }
    report(8, "nesting, containment and collision overlap", &failures, start.elapsed());
}

#[test]
fn criterion_09_sweep_smoke() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let spec = |n_max| SweepSpec {
        beta1: "1.6:2:20".parse().unwrap(),
        beta2: "1.6:2:20".parse().unwrap(),
        negative: false,
        n_min: 3,
        n_max,
        tail: TailDepth::Auto,
    };
    let grids: Vec<_> = (3..=6).map(|k| run_sweep(&spec(k)).unwrap()).collect();
    let full = &grids[3];

    let mut csv = Vec::new();
    write_csv(full, &mut csv).unwrap();
    let csv = String::from_utf8(csv).unwrap();
    let lines: Vec<&str> = csv.split_terminator('\n').collect();
    if lines[0] != CSV_HEADER.join(",") || csv.contains('\r') {
        failures.push("CSV header or line endings".into());
    }
    if lines.len() != 1 + 380 {
        failures.push(format!("CSV has {} data rows, expected 380", lines.len() - 1));
    }
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        let ok = f.len() == 4
            && f[0].parse::<f64>().is_ok()
            && f[1].parse::<f64>().is_ok()
            && f[3].parse::<f64>().is_ok()
            && matches!(f[2].parse::<usize>(), Ok(0) | Ok(3..=6))
            && f[0] != f[1];
        if !ok {
            failures.push(format!("bad CSV row {line}"));
        }
    }

    let mut pgm = Vec::new();
    write_pgm(full, &mut pgm).unwrap();
    let pgm = String::from_utf8(pgm).unwrap();
    let pl: Vec<&str> = pgm.lines().collect();
    let pixels_ok = pl.len() == 23
        && pl[3..].iter().all(|l| {
            let v: Vec<usize> = l.split(' ').map(|x| x.parse().unwrap()).collect();
            v.len() == 20 && v.iter().all(|&x| x <= 6)
        });
    if pl[..3] != ["P2", "20 20", "6"] || !pixels_ok {
        failures.push("PGM layout".into());
    }

    let proven = |g: &garsia::harness::sweep::SweepGrid| -> BTreeSet<(usize, usize)> {
        g.cells
            .iter()
            .filter(|c| c.first_proving_n > 0)
            .map(|c| (c.column, c.row))
            .collect()
    };
    for w in grids.windows(2) {
        if !proven(&w[0]).is_subset(&proven(&w[1])) {
            failures.push(format!("proven set shrinks from n_max {} to {}", w[0].spec.n_max, w[1].spec.n_max));
        }
    }
    for c in full.cells.iter().filter(|c| c.first_proving_n > 0) {
        let r = compute_mn_at(
            &[Generator::real(c.beta1), Generator::real(c.beta2)],
            c.first_proving_n,
            TailDepth::Auto,
        )
        .unwrap();
        if r.ratio <= 1.0 {
            failures.push(format!("cell ({}, {}) does not revalidate", c.beta1, c.beta2));
        }
    }
    println!("    {} of {} cells proven", proven(full).len(), full.cells.len());
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("runtime {elapsed:?} exceeds 60 s"));
    }
    report(9, "20x20 sweep smoke test", &failures, elapsed);
}

fn random_centers(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(rng.gen_range(1.1..1.9), 0.0)];
    let modulus = rng.gen_range(1.1..1.9);
    c.push(match rng.gen_range(0..3) {
        0 => Complex64::new(modulus, 0.0),
        1 => Complex64::new(-modulus, 0.0),
        _ => Complex64::from_polar(modulus, rng.gen_range(0.2..2.9)),
    });
    c
}

fn generators_at(c: &[Complex64]) -> Vec<Generator> {
    c.iter()
        .map(|z| {
            if z.im == 0.0 {
                Generator::real(z.re)
            } else {
                Generator::complex(z.re, z.im)
            }
        })
        .collect()
}

#[test]
fn criterion_10_region_soundness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut failures = Vec::new();
    let mut certified_rects = 0;
    for _ in 0..100 {
        let centers = random_centers(&mut rng);
        let n = rng.gen_range(3..=6);
        let point = compute_mn_at(&generators_at(&centers), n, TailDepth::Auto).unwrap();
        let zero = certify_region(&parameter_box(&centers, &[0.0]).unwrap(), n, TailDepth::Auto).unwrap();
        if !zero.certified || zero.m_upper != point.mn {
            failures.push(format!(
                "{centers:?} n={n}: zero-width [{}, {}] vs m_n {}",
                zero.m_lower, zero.m_upper, point.mn
            ));
        }

        let h = 10f64.powf(rng.gen_range(-5.0..-2.0));
        let Ok(params) = parameter_box(&centers, &[h]) else {
            continue;
        };
        let rect = certify_region(&params, n, TailDepth::Auto).unwrap();
        if !rect.certified {
            continue;
        }
        certified_rects += 1;
        for _ in 0..10 {
            let sample: Vec<Complex64> = centers
                .iter()
                .map(|z| {
                    let re = z.re + rng.gen_range(-h..h);
                    if z.im == 0.0 {
                        Complex64::new(re, 0.0)
                    } else {
                        Complex64::new(re, z.im + rng.gen_range(-h..h))
                    }
                })
                .collect();
            let m = compute_mn_at(&generators_at(&sample), n, TailDepth::Auto).unwrap().mn;
            if m != rect.m_lower {
                failures.push(format!("{sample:?} n={n}: m_n {m}, certified {}", rect.m_lower));
            }
        }
    }
    println!("    {certified_rects} certified rectangles sampled");
    if certified_rects == 0 {
        failures.push("no rectangle certified".into());
    }
    report(10, "region certification soundness", &failures, start.elapsed());
}
