//! One PASS/FAIL line per acceptance criterion.
//!
//! `cargo test -p tlq-core --test acceptance -- --extended` also runs the
//! master identity up to n = 12.

use std::process::ExitCode;
use std::time::Instant;

use tlq::algebra::{GeneratorWord, TLElement};
use tlq::cell::jw_action_test;
use tlq::dims::g_map;
use tlq::jw::{jw_explicit, jw_wenzl};
use tlq::scalars::RootContext;
use tlq::verify::{run, SuiteReport, VerifyConfig, VerifyReport};

struct Outcome {
    passed: bool,
    note: String,
}

fn from_suites(report: &VerifyReport, names: &[&str]) -> Outcome {
    let suites: Vec<&SuiteReport> = names
        .iter()
        .map(|n| report.suite(n).expect("suite present"))
        .collect();
    let checks: usize = suites.iter().map(|s| s.checks).sum();
    match suites.iter().find(|s| !s.passed) {
        None => Outcome {
            passed: true,
            note: format!("{checks} checks"),
        },
        Some(s) => Outcome {
            passed: false,
            note: format!(
                "{}: {}",
                s.name,
                s.counterexample.clone().unwrap_or_default()
            ),
        },
    }
}

fn word(ctx: &RootContext, n: usize, idx: &[usize]) -> TLElement {
    TLElement::from_word(&GeneratorWord::new(n, idx.to_vec()).unwrap(), ctx)
}

fn golden_jw() -> Outcome {
    let c3 = RootContext::new(3).unwrap();
    let c4 = RootContext::new(4).unwrap();
    let e2 = &TLElement::identity(2, &c3) - &word(&c3, 2, &[1]);
    let e3 = &(&(&TLElement::identity(3, &c4) + &word(&c4, 3, &[1, 2])) + &word(&c4, 3, &[2, 1]))
        - &(&word(&c4, 3, &[1]) + &word(&c4, 3, &[2])).scale(c4.delta());
    if jw_explicit(&c3).unwrap() != e2 {
        return fail("E_2 differs at ell=3");
    }
    if jw_explicit(&c4).unwrap() != e3 {
        return fail("E_3 differs at ell=4");
    }
    for ell in 3..=8u32 {
        let ctx = RootContext::new(ell).unwrap();
        let k = ell as usize - 1;
        let e = jw_explicit(&ctx).unwrap();
        if jw_wenzl(k, &ctx).unwrap() != e {
            return fail(&format!("explicit and recursive E differ at ell={ell}"));
        }
        if &e * &e != e {
            return fail(&format!("E^2 != E at ell={ell}"));
        }
        for i in 1..k {
            let f = TLElement::generator(i, k, &ctx).unwrap();
            if !(&f * &e).is_zero() || !(&e * &f).is_zero() {
                return fail(&format!("f_{i} E != 0 at ell={ell}"));
            }
        }
    }
    Outcome {
        passed: true,
        note: "ell = 3..8".into(),
    }
}

fn fail(note: &str) -> Outcome {
    Outcome {
        passed: false,
        note: note.into(),
    }
}

/// The verdicts as literally stated: `E` kills all of `W_t` for
/// `t ≤ ℓ-3`, kills exactly the radical for `t = ℓ-2`, and acts
/// non-trivially on `L_t` for `t ≥ ℓ-1`.
fn literal_classification() -> (Outcome, Vec<(u32, usize, usize)>) {
    let mut misses = Vec::new();
    let mut other = None;
    for ell in [4u32, 5] {
        let ctx = RootContext::new(ell).unwrap();
        let l = ell as usize;
        for n in l - 1..=9 {
            for t in (0..=n).filter(|t| (n - t) % 2 == 0) {
                let r = jw_action_test(t, n, &ctx).unwrap();
                let ok = if t + 3 <= l {
                    r.kills_cell
                } else if t + 2 == l {
                    r.kills_simple && !r.kills_cell
                } else {
                    !r.kills_simple
                };
                if !ok {
                    if t + 3 <= l {
                        misses.push((ell, t, n));
                    } else if other.is_none() {
                        other = Some(format!("ell={ell} t={t} n={n}: {r:?}"));
                    }
                }
            }
        }
    }
    let outcome = match (&other, misses.first()) {
        (Some(o), _) => fail(o),
        (None, Some(&(ell, t, n))) => fail(&format!(
            "E does not kill W_t for t <= ell-3 at {} cells, first ell={ell} t={t} n={n}; \
             every miss has n >= g(t), where W_t(n) has the factor L_g(t); the simple head is killed at all of them",
            misses.len()
        )),
        (None, None) => Outcome {
            passed: true,
            note: "all verdicts".into(),
        },
    };
    (outcome, misses)
}

fn main() -> ExitCode {
    let extended = std::env::args().any(|a| a == "--extended");
    let start = Instant::now();
    let cfg = VerifyConfig::default();
    let report = run(&cfg).expect("verify runs");
    let galois = run(&VerifyConfig {
        galois_all: true,
        ..cfg.clone()
    })
    .expect("verify runs");

    let mut lines: Vec<(u32, &str, Outcome)> = Vec::new();
    lines.push((1, "golden Jones-Wenzl elements", golden_jw()));
    lines.push((
        2,
        "gram rank = simple_dim = series coefficient",
        from_suites(&report, &["master_identity"]),
    ));
    if extended {
        let ext = run(&VerifyConfig {
            max_n: 12,
            ..cfg.clone()
        })
        .expect("verify runs");
        lines.push((
            2,
            "extended run, n <= 12",
            from_suites(&ext, &["master_identity"]),
        ));
    }
    lines.push((
        3,
        "dimension tables",
        from_suites(&report, &["worked_examples"]),
    ));
    lines.push((
        4,
        "cell dimensions against enumeration",
        from_suites(&report, &["cell_dimensions"]),
    ));
    let mut quotient = from_suites(&report, &["quotient"]);
    let flagged = report
        .flagged
        .iter()
        .any(|f| f.stated == 233 && f.computed == "610");
    if !flagged {
        quotient = fail("the ell=5, n=8 value is not flagged");
    }
    lines.push((5, "quotient dimensions three ways", quotient));
    lines.push((6, "fusion ring", from_suites(&report, &["fusion"])));
    lines.push((7, "Ising representation", from_suites(&report, &["ising"])));
    let (literal, misses) = literal_classification();
    lines.push((8, "classification by action", literal));
    lines.push((
        9,
        "Galois robustness",
        from_suites(&galois, &["galois", "master_identity", "quotient"]),
    ));
    let again = run(&cfg).expect("verify runs");
    let same = report.to_json(false).to_string() == again.to_json(false).to_string();
    lines.push((
        10,
        "deterministic report",
        if same {
            Outcome {
                passed: true,
                note: "two runs byte-identical".into(),
            }
        } else {
            fail("reports differ")
        },
    ));

    for (i, name, o) in &lines {
        println!(
            "{} criterion {i}: {name} ({})",
            if o.passed { "PASS" } else { "FAIL" },
            o.note
        );
    }
    println!("elapsed {:.1}s", start.elapsed().as_secs_f64());

    // Criterion 8 fails at exactly the cells past g(t); anything else is a
    // regression.
    let expected_misses: Vec<(u32, usize, usize)> = [4u32, 5]
        .into_iter()
        .flat_map(|ell| {
            let l = ell as usize;
            (l - 1..=9).flat_map(move |n| {
                (0..=n)
                    .filter(move |t| (n - t) % 2 == 0 && t + 3 <= l && g_map(*t, ell).unwrap() <= n)
                    .map(move |t| (ell, t, n))
            })
        })
        .collect();
    let unexpected = lines.iter().any(|(i, _, o)| !o.passed && *i != 8)
        || misses != expected_misses
        || !report.suite("classification").unwrap().passed;
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
