//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! Run with `cargo test -p trunczeta --test acceptance -- --nocapture` to see
//! the lines.

use std::time::{Duration, Instant};

use trunczeta::budget::Budget;
use trunczeta::closed_forms::{self, FormulaName, Parity};
use trunczeta::dirichlet::{self, IndexFilter, Kind};
use trunczeta::enumerate::{self, valid_cells, Cell};
use trunczeta::exact::{rf_eval_quadratic, QuadraticRational};
use trunczeta::exact::{BigInt, BigRational};
use trunczeta::verify::{self, first_divergence};
use trunczeta::volume;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if took > limit {
        o.passed = false;
    }
    o.detail = format!("{}; {:.2?} (limit {:?})", o.detail, took, limit);
    o
}

fn lemma_equivalence() -> Outcome {
    timed(Duration::from_secs(60), || {
        let mut total = 0;
        let mut bad = 0;
        for p in [2, 3, 5] {
            let t = verify::lemma_sweep(p, 5);
            total += t.matrices;
            bad += t.closure_disagreements;
        }
        outcome(
            bad == 0,
            format!("{total} bases checked, {bad} disagreements"),
        )
    })
}

fn odd_subring_counts() -> Outcome {
    timed(Duration::from_secs(60), || {
        let f = closed_forms::subring_local_factor(Parity::Odd);
        let mut notes = Vec::new();
        for p in [3, 5, 7] {
            let counts = verify::counts(p, 8, false).unwrap();
            if let Some((m, e, s)) = first_divergence(&f, p, &counts) {
                notes.push(format!("p={p} m={m}: enumerated {e}, series {s}"));
            }
        }
        outcome(
            notes.is_empty(),
            if notes.is_empty() {
                "p in {3,5,7}, m <= 8 equal".into()
            } else {
                notes.join("; ")
            },
        )
    })
}

fn two_subring_counts() -> Outcome {
    let counts = verify::counts(2, 10, false).unwrap();
    let t_sum = first_divergence(&closed_forms::subring_two_case_sum(), 2, &counts);
    let display = first_divergence(&closed_forms::subring_local_factor(Parity::Two), 2, &counts);
    let display_note = match display {
        Some((m, e, s)) => {
            format!("display first diverges at x^{m}: enumerated {e}, displayed {s}")
        }
        None => "display agrees through x^10".into(),
    };
    outcome(
        t_sum.is_none(),
        format!(
            "T-sum vs enumeration m <= 10: {:?}; {display_note}",
            t_sum.map(|d| d.0)
        ),
    )
}

fn cocyclic_counts() -> Outcome {
    let thm = closed_forms::entry(FormulaName::CocyclicOddTheorem);
    let mut bad = Vec::new();
    for p in [3, 5] {
        let counts = verify::counts(p, 8, true).unwrap();
        if let Some(d) = first_divergence(thm, p, &counts) {
            bad.push(format!("p={p}: {d:?}"));
        }
    }
    let two = verify::counts(2, 10, true).unwrap();
    let budget = Budget::default();
    for m in 0..=10u32 {
        let oracle = enumerate::count_cocyclic_oracle(2, m, &budget).unwrap();
        if oracle != two[m as usize] {
            bad.push(format!(
                "p=2 m={m}: fast {} vs oracle {oracle}",
                two[m as usize]
            ));
        }
    }
    let display = closed_forms::entry(FormulaName::CocyclicTwoDisplayed);
    let low = first_divergence(display, 2, &two[..4]);
    if let Some(d) = low {
        bad.push(format!("p=2 display within m <= 3: {d:?}"));
    }
    let mut notes = vec![format!("p=2 enumerated {:?}", two)];
    if let Some((m, e, s)) = first_divergence(display, 2, &two) {
        notes.push(format!(
            "display diverges at x^{m}: enumerated {e}, displayed {s}"
        ));
    }
    if let Some((m, e, s)) = first_divergence(&closed_forms::cocyclic_two_case_sum(), 2, &two) {
        notes.push(format!(
            "E-sum diverges at x^{m}: enumerated {e}, E-sum {s}"
        ));
    }
    let ok = bad.is_empty();
    bad.extend(notes);
    outcome(ok, bad.join("; "))
}

fn volume_identity() -> Outcome {
    let mut bad = Vec::new();
    let mut cells = 0;
    for p in [2u64, 3, 5] {
        for k in 0..=4 {
            for l in 0..=4 {
                for r in 0..=4 {
                    let Ok(c) = Cell::new(k, l, r) else { continue };
                    cells += 1;
                    let closed = volume::mu_closed(p, c).unwrap();
                    let oracle = volume::mu_oracle(p, c).unwrap();
                    let count = enumerate::count_cell(p, c).unwrap();
                    let scaled =
                        &closed * BigRational::from_integer(BigInt::from(p).pow(2 * k + l));
                    if closed != oracle || scaled != BigRational::from_integer(count.into()) {
                        bad.push(format!("p={p} {c}"));
                    }
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{cells} (p, cell) pairs; bad: {bad:?}"),
    )
}

fn symbolic_identities() -> Outcome {
    let f_sum = closed_forms::subring_odd_case_sum();
    let z_sum = closed_forms::cocyclic_odd_case_sum();
    let thm = closed_forms::entry(FormulaName::CocyclicOddTheorem);
    let alt = closed_forms::entry(FormulaName::CocyclicOddAlt);
    let a = f_sum.rf_equal(&closed_forms::subring_local_factor(Parity::Odd));
    let b = z_sum.rf_equal(alt);
    let c = thm.rf_equal(alt);
    let fe = closed_forms::functional_equation_monomial(&closed_forms::subring_local_factor(
        Parity::Odd,
    ));
    outcome(
        a && b && c && fe == Some((3, 3, -1)),
        format!("F-sum {a}, Z-sum {b}, THM == ALT {c}, functional equation {fe:?}"),
    )
}

fn two_special_value() -> Outcome {
    let expected = QuadraticRational::from_fractions(758, 336, 277, 336);
    let value = rf_eval_quadratic(&closed_forms::cocyclic_two_case_sum()).unwrap();
    assert_eq!(value, dirichlet::cocyclic_two_value().unwrap());
    let display = closed_forms::entry(FormulaName::CocyclicTwoDisplayed)
        .eval_quadratic()
        .unwrap();
    let x = value.to_f64();
    outcome(
        value == expected && (x - 3.42184).abs() < 1e-5 && (x - 3.422).abs() < 5e-4,
        format!(
            "E-sum value {value} = {x:.6}; displayed factor gives {display} = {:.6}",
            display.to_f64()
        ),
    )
}

fn constants() -> Outcome {
    let c4 = dirichlet::constant_c(10_000).unwrap();
    let c5 = dirichlet::constant_c(100_000).unwrap();
    let d4 = dirichlet::constant_d(10_000).unwrap();
    let d5 = dirichlet::constant_d(100_000).unwrap();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let pi = std::f64::consts::PI;
    let z2 = (dirichlet::riemann_zeta_real(2.0).unwrap() - pi * pi / 6.0).abs();
    let z4 = (dirichlet::riemann_zeta_real(4.0).unwrap() - pi.powi(4) / 90.0).abs();
    let (rc, rd) = (rel(c4.value, c5.value), rel(d4.value, d5.value));
    outcome(
        rc < 1e-4 && rd < 1e-4 && z2 < 1e-10 && z4 < 1e-10,
        format!(
            "C = {:.10} (rel change {rc:.1e}, tail {:.1e}), D = {:.10} (rel change {rd:.1e}, tail {:.1e}); zeta(2) err {z2:.1e}, zeta(4) err {z4:.1e}",
            c5.value, c5.tail_bound, d5.value, d5.tail_bound
        ),
    )
}

fn growth_sanity() -> Outcome {
    timed(Duration::from_secs(300), || {
        let budget = Budget::default();
        let bounds = [10_000, 100_000, 1_000_000];
        let c = dirichlet::constant_c(100_000).unwrap().value;
        let d = dirichlet::constant_d(100_000).unwrap().value;
        let sub = dirichlet::growth_diagnostic(&bounds, Kind::Subring, IndexFilter::All, &budget)
            .unwrap();
        let odd = dirichlet::growth_diagnostic(&bounds, Kind::Cocyclic, IndexFilter::Odd, &budget)
            .unwrap();
        let all = dirichlet::growth_diagnostic(&bounds, Kind::Cocyclic, IndexFilter::All, &budget)
            .unwrap();
        let last = sub.last().unwrap().ratio;
        let ratios = |rows: &[dirichlet::GrowthRow]| {
            rows.iter()
                .map(|r| format!("{:.4}", r.ratio))
                .collect::<Vec<_>>()
                .join("/")
        };
        outcome(
            (0.5 * c..=1.5 * c).contains(&last),
            format!(
                "s(B)/B^1.5 at 1e4/1e5/1e6: {} (C = {c:.4}, ratio/C = {:.3}); cocyclic odd-index {} and all-index {} (D = {d:.4})",
                ratios(&sub),
                last / c,
                ratios(&odd),
                ratios(&all)
            ),
        )
    })
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        (
            "1 closure oracle == valuation conditions",
            lemma_equivalence,
        ),
        ("2 odd-prime subring counts", odd_subring_counts),
        ("3 p=2 subring counts", two_subring_counts),
        ("4 cocyclic counts", cocyclic_counts),
        ("5 volume identity", volume_identity),
        ("6 symbolic identities", symbolic_identities),
        ("7 exact p=2 special value", two_special_value),
        ("8 constants and zeta values", constants),
        ("9 growth sanity", growth_sanity),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let o = run();
        println!(
            "criterion {name}: {} ({})",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.passed {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn cells_cover_every_weight() {
    for m in 0..10 {
        assert!(valid_cells(m)
            .iter()
            .all(|c| c.weight() == m && c.is_valid()));
    }
}
