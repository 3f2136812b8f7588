use num_bigint::{BigInt, Sign};
use serde_json::{json, Value};

use tlq::algebra::TLElement;
use tlq::cell::gram;
use tlq::clifford::{phi_generator, span_dimension, CliffordElement};
use tlq::diagram::diagram_words;
use tlq::dims::{cell_series, p_poly, quotient_dims, simple_dim, simple_series, GIndex};
use tlq::fusion::{delta1_power, hom_pairing, FusionRing, FusionVector};
use tlq::jw::jw_explicit;
use tlq::scalars::{Cyclotomic, RootContext};
use tlq::trace_form::trace_form_rank;
use tlq::verify::{self, Oracles, VerifyConfig};
use tlq::{Error, Result};

use crate::output::Output;

/// The output and whether every check in it passed.
pub type CmdResult = Result<(Output, bool)>;

fn ok(out: Output) -> CmdResult {
    Ok((out, true))
}

fn context(ell: u32, q_exp: Option<i64>) -> Result<RootContext> {
    match q_exp {
        Some(k) => RootContext::with_q_exponent(ell, k),
        None => RootContext::new(ell),
    }
}

/// Integers as JSON numbers while they fit, decimal strings beyond.
fn big(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn k_header(width: usize) -> Vec<String> {
    std::iter::once("t".to_string())
        .chain((0..width).map(|k| format!("k={k}")))
        .collect()
}

fn table_output(ell_json: Value, rows: Vec<(usize, Vec<BigInt>)>, label: &str) -> Output {
    let width = rows.iter().map(|(_, r)| r.len()).max().unwrap_or(0);
    let mut csv = vec![k_header(width)];
    let mut text = String::new();
    let mut json_rows = Vec::new();
    for (t, vals) in &rows {
        csv.push(
            std::iter::once(t.to_string())
                .chain(vals.iter().map(BigInt::to_string))
                .collect(),
        );
        text.push_str(&format!("{label}_{t}: {}\n", join(vals, ", ")));
        json_rows.push(json!({ "t": t, "values": vals.iter().map(big).collect::<Vec<_>>() }));
    }
    let mut json = ell_json;
    json["rows"] = json!(json_rows);
    Output {
        json,
        rows: csv,
        text,
    }
}

pub fn dims(ell: u32, max_n: usize, t: Option<usize>, order: usize) -> CmdResult {
    GIndex::new(ell)?;
    let rows: Vec<(usize, Vec<BigInt>)> = match t {
        Some(t) => vec![(
            t,
            (0..=order).map(|k| simple_dim(t, t + 2 * k, ell)).collect(),
        )],
        None => (0..=max_n)
            .map(|t| {
                (
                    t,
                    (0..=(max_n - t) / 2)
                        .map(|k| simple_dim(t, t + 2 * k, ell))
                        .collect(),
                )
            })
            .collect(),
    };
    let mut out = table_output(json!({ "ell": ell, "quantity": "l_t(t+2k)" }), rows, "l");
    out.text = format!("dim L_t(t+2k) at ell = {ell}\n{}", out.text);
    ok(out)
}

pub fn series(ell: Option<u32>, t: Option<usize>, order: usize) -> CmdResult {
    let Some(ell) = ell else {
        let ts: Vec<usize> = t.map(|t| vec![t]).unwrap_or_else(|| (0..=6).collect());
        let rows = ts
            .iter()
            .map(|&t| (t, cell_series(t, order).coeffs().to_vec()))
            .collect();
        let mut out = table_output(json!({ "quantity": "W_t(x) = c(x)^(t+1)" }), rows, "W");
        out.text = format!("W_t(x) = c(x)^(t+1), coefficients w(t, k)\n{}", out.text);
        return ok(out);
    };
    let idx = GIndex::new(ell)?;
    let ts: Vec<usize> = t
        .map(|t| vec![t])
        .unwrap_or_else(|| (0..2 * ell as usize).collect());
    let mut forms = Vec::new();
    let mut rows = Vec::new();
    for &t in &ts {
        let s = simple_series(t, ell, order)?;
        let form = if idx.in_n_prime(t) {
            let (num, power, den) = (
                p_poly(idx.b_bar(t)),
                idx.a(t) * ell as usize,
                p_poly(ell as usize),
            );
            json!({
                "t": t,
                "closed_form": format!("({num}) c(x)^{power} / ({den})"),
                "numerator": num,
                "catalan_power": power,
                "denominator": den,
            })
        } else {
            json!({ "t": t, "closed_form": format!("c(x)^{}", t + 1), "catalan_power": t + 1 })
        };
        forms.push(form);
        rows.push((t, s.coeffs().to_vec()));
    }
    let mut out = table_output(json!({ "ell": ell, "order": order }), rows, "L");
    for (row, form) in out.json["rows"]
        .as_array_mut()
        .expect("rows")
        .iter_mut()
        .zip(forms)
    {
        row["closed_form"] = form["closed_form"].clone();
        for key in ["numerator", "catalan_power", "denominator"] {
            if let Some(v) = form.get(key) {
                row[key] = v.clone();
            }
        }
    }
    let header: Vec<String> = out.json["rows"]
        .as_array()
        .expect("rows")
        .iter()
        .map(|r| {
            format!(
                "L_{}(x) = {}",
                r["t"],
                r["closed_form"].as_str().unwrap_or("")
            )
        })
        .collect();
    out.text = format!("{}\n{}", header.join("\n"), out.text);
    ok(out)
}

pub fn verify(
    ell: Option<u32>,
    q_exp: Option<i64>,
    max_n: usize,
    order: usize,
    galois_all: bool,
) -> CmdResult {
    let defaults = VerifyConfig::default();
    let cfg = VerifyConfig {
        ells: ell.map(|e| vec![e]).unwrap_or(defaults.ells.clone()),
        q_exp,
        max_n,
        order,
        galois_all,
        ..defaults
    };
    for &e in &cfg.ells {
        GIndex::new(e)?;
    }
    let report = verify::run(&cfg)?;
    let mut rows = vec![vec![
        "suite".to_string(),
        "passed".into(),
        "checks".into(),
        "failures".into(),
        "ms".into(),
        "counterexample".into(),
    ]];
    let mut text = String::new();
    for s in &report.suites {
        let ms = report.timing_ms.get(&s.name).copied().unwrap_or(0);
        rows.push(vec![
            s.name.clone(),
            s.passed.to_string(),
            s.checks.to_string(),
            s.failures.to_string(),
            ms.to_string(),
            s.counterexample.clone().unwrap_or_default(),
        ]);
        text.push_str(&format!(
            "{} {:<16} {:>6} checks {:>7} ms{}\n",
            if s.passed { "PASS" } else { "FAIL" },
            s.name,
            s.checks,
            ms,
            s.counterexample
                .as_ref()
                .map(|c| format!("  first failure: {c}"))
                .unwrap_or_default()
        ));
    }
    for f in &report.flagged {
        text.push_str(&format!(
            "note: {} stated as {}, computed {}\n",
            f.quantity, f.stated, f.computed
        ));
    }
    Ok((
        Output {
            json: report.to_json(true),
            rows,
            text,
        },
        report.passed,
    ))
}

fn word_name(word: &[usize]) -> String {
    if word.is_empty() {
        "1".into()
    } else {
        word.iter().map(|i| format!("f{i}")).collect()
    }
}

fn signed_sum(terms: &[(String, Cyclotomic)]) -> String {
    let mut s = String::new();
    for (i, (name, c)) in terms.iter().enumerate() {
        let coeff = c.to_string();
        let (neg, mag) = match coeff.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, coeff),
        };
        let sep = match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        let scalar = if mag == "1" {
            String::new()
        } else if mag.contains(['+', '-', ' ']) {
            format!("({mag})")
        } else {
            mag
        };
        let body = match (scalar.is_empty(), name.as_str()) {
            (true, n) => n.to_string(),
            (false, "1") => scalar,
            (false, n) => format!("{scalar}*{n}"),
        };
        s.push_str(sep);
        s.push_str(&body);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn element_terms(e: &TLElement) -> Vec<(Vec<usize>, Vec<[usize; 2]>, Cyclotomic)> {
    let words = diagram_words(e.n());
    let mut terms: Vec<_> = e
        .terms()
        .map(|(d, c)| {
            (
                words[d].clone(),
                d.pairs().map(|(a, b)| [a, b]).collect(),
                c.clone(),
            )
        })
        .collect();
    terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    terms
}

pub fn jw(ell: u32, q_exp: Option<i64>) -> CmdResult {
    let ctx = context(ell, q_exp)?;
    let e = jw_explicit(&ctx)?;
    let terms = element_terms(&e);
    let named: Vec<(String, Cyclotomic)> = terms
        .iter()
        .map(|(w, _, c)| (word_name(w), c.clone()))
        .collect();
    let sum = signed_sum(&named);
    let mut rows = vec![vec![
        "word".to_string(),
        "pairs".into(),
        "coefficient".into(),
    ]];
    for (w, p, c) in &terms {
        rows.push(vec![
            word_name(w),
            p.iter()
                .map(|[a, b]| format!("{a}-{b}"))
                .collect::<Vec<_>>()
                .join(" "),
            c.to_string(),
        ]);
    }
    let json = json!({
        "ell": ell,
        "q_exp": ctx.q_exponent(),
        "strands": e.n(),
        "sum": sum,
        "words": terms.iter().map(|(w, _, c)| json!({ "word": w, "coeff": c })).collect::<Vec<_>>(),
        "element": e,
    });
    let text = format!(
        "E_{} at ell = {ell}, q = -z^{} with z = exp(pi i/{ell}):\n{sum}\n",
        e.n(),
        ctx.q_exponent()
    );
    ok(Output { json, rows, text })
}

pub fn cell_gram(ell: u32, q_exp: Option<i64>, t: usize, n: usize, matrix: bool) -> CmdResult {
    let ctx = context(ell, q_exp)?;
    if t > n || (n - t) % 2 != 0 {
        return Err(Error::Index(format!(
            "W_{t}({n}) needs t <= n and n - t even"
        )));
    }
    let g = gram(t, n, &ctx);
    let rank = g.rank();
    let dim = g.size();
    let mut json = json!({
        "t": t,
        "n": n,
        "ell": ell,
        "q_exp": ctx.q_exponent(),
        "dim_W": dim,
        "rank": rank,
        "corank": dim - rank,
    });
    let mut rows = vec![
        vec!["dim_W".to_string(), dim.to_string()],
        vec!["rank".into(), rank.to_string()],
        vec!["corank".into(), (dim - rank).to_string()],
    ];
    let mut text = format!(
        "W_{t}({n}) at ell = {ell}: dim {dim}, rank {rank}, corank {}\n",
        dim - rank
    );
    if matrix {
        // entry (i, j) is delta^k, or zero
        let m: Vec<Vec<Option<i32>>> = (0..dim)
            .map(|i| (0..dim).map(|j| g.exponent(i, j)).collect())
            .collect();
        json["matrix_delta_exponents"] = json!(m);
        let cell = |e: &Option<i32>| e.map(|k| format!("d^{k}")).unwrap_or_else(|| "0".into());
        for row in &m {
            rows.push(row.iter().map(cell).collect());
            text.push_str(&row.iter().map(cell).collect::<Vec<_>>().join(" "));
            text.push('\n');
        }
    }
    ok(Output { json, rows, text })
}

fn vector_name(v: &FusionVector) -> String {
    let parts: Vec<String> = v
        .multiplicities()
        .iter()
        .enumerate()
        .filter(|(_, m)| m.sign() != Sign::NoSign)
        .map(|(r, m)| {
            if *m == BigInt::from(1) {
                format!("e{r}")
            } else {
                format!("{m}e{r}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

pub fn fusion_table(ell: u32) -> CmdResult {
    let ring = FusionRing::get(ell)?;
    let size = ring.size();
    let table = ring.table();
    let name = |s: usize, t: usize| -> String {
        let mult = table[s][t].iter().map(|&m| BigInt::from(m));
        vector_name(
            &FusionVector::from_multiplicities(ell, mult).expect("table row has ell-1 entries"),
        )
    };
    let mut rows = vec![std::iter::once("*".to_string())
        .chain((0..size).map(|t| format!("e{t}")))
        .collect()];
    for s in 0..size {
        rows.push(
            std::iter::once(format!("e{s}"))
                .chain((0..size).map(|t| name(s, t)))
                .collect(),
        );
    }
    let widths: Vec<usize> = (0..=size)
        .map(|c| rows.iter().map(|r: &Vec<String>| r[c].len()).max().unwrap())
        .collect();
    let text = rows
        .iter()
        .map(|r| {
            r.iter()
                .zip(&widths)
                .map(|(x, w)| format!("{x:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        })
        .collect::<Vec<_>>()
        .join("\n");
    ok(Output {
        json: json!({ "ell": ell, "table": table }),
        rows,
        text,
    })
}

pub fn fuse(ell: u32, s: usize, t: usize) -> CmdResult {
    let v = tlq::fusion::fuse(s, t, ell)?;
    let mut rows = vec![vec!["label".to_string(), "multiplicity".into()]];
    for (r, m) in v.multiplicities().iter().enumerate() {
        rows.push(vec![r.to_string(), m.to_string()]);
    }
    let text = format!("e{s} * e{t} = {}", vector_name(&v));
    ok(Output {
        json: json!({ "ell": ell, "s": s, "t": t, "product": v }),
        rows,
        text,
    })
}

pub fn quotient(ell: u32, q_exp: Option<i64>, n: usize) -> CmdResult {
    let ctx = context(ell, q_exp)?;
    let q = quotient_dims(n, ell)?;
    let power = delta1_power(n, ell)?;
    let pairing = hom_pairing(&power, &power)?;
    let trace = if n <= 8 {
        Some(trace_form_rank(n, &ctx)?)
    } else {
        None
    };
    let agree = q.agree()
        && q.sum_of_squares == pairing
        && trace.map_or(true, |r| BigInt::from(r.rank) == q.sum_of_squares);
    let note = verify::flagged_values()
        .into_iter()
        .find(|f| ell == 5 && n == 8 && f.stated == 233)
        .map(|f| format!("published value {} not reproduced ({})", f.stated, f.status));
    let mut rows = vec![
        vec!["method".to_string(), "value".into()],
        vec!["sum_of_squares".into(), q.sum_of_squares.to_string()],
        vec!["l1_2n_minus_1".into(), q.via_l1.to_string()],
        vec!["fusion_pairing".into(), pairing.to_string()],
    ];
    if let Some(r) = trace {
        rows.push(vec!["trace_form_rank".into(), r.rank.to_string()]);
    }
    rows.push(vec!["agree".into(), agree.to_string()]);
    let mut lines = vec![
        (format!("sum of l_t({n})^2"), q.sum_of_squares.to_string()),
        (format!("l_1({})", 2 * n - 1), q.via_l1.to_string()),
        ("fusion pairing".to_string(), pairing.to_string()),
    ];
    if let Some(r) = trace {
        lines.push(("trace form rank".into(), r.rank.to_string()));
    }
    lines.push(("agree".into(), agree.to_string()));
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut text = format!("dim Q_{n} at ell = {ell}\n");
    for (k, v) in &lines {
        text.push_str(&format!("  {k:<width$} : {v}\n"));
    }
    if let Some(n) = &note {
        text.push_str(&format!("note: {n}\n"));
    }
    let json = json!({
        "ell": ell,
        "n": n,
        "q_exp": ctx.q_exponent(),
        "labels": tlq::dims::quotient_labels(n, ell),
        "sum_of_squares": big(&q.sum_of_squares),
        "l1_2n_minus_1": big(&q.via_l1),
        "fusion_pairing": big(&pairing),
        "trace_form": trace,
        "agree": agree,
        "note": note,
    });
    Ok((Output { json, rows, text }, agree))
}

fn clifford_terms(x: &CliffordElement) -> Vec<(String, Cyclotomic)> {
    x.terms()
        .map(|(subset, c)| {
            let name: String = (0..32)
                .filter(|i| subset >> i & 1 == 1)
                .map(|i| format!("g{}", i + 1))
                .collect();
            (if name.is_empty() { "1".into() } else { name }, c.clone())
        })
        .collect()
}

pub fn ising(n: usize, q_exp: Option<i64>, check: bool) -> CmdResult {
    let ctx = context(4, q_exp)?;
    if n < 2 {
        return Err(Error::TooFewStrands { n, min: 2 });
    }
    let mut gens = Vec::new();
    let mut text = format!("phi: TL_{n} -> even Clifford algebra on {n} generators\n");
    for j in 1..n {
        let img = phi_generator(j, n, &ctx)?;
        let terms = clifford_terms(&img);
        text.push_str(&format!("  phi(f{j}) = {}\n", signed_sum(&terms)));
        gens.push(json!({
            "generator": j,
            "image": terms.iter().map(|(m, c)| json!({ "monomial": m, "coeff": c })).collect::<Vec<_>>(),
        }));
    }
    let span = span_dimension(n, 2 * n, &ctx)?;
    text.push_str(&format!(
        "  dim of the image: {span} (2^(n-1) = {})\n",
        1usize << (n - 1)
    ));
    let mut rows = vec![vec![
        "generator".to_string(),
        "monomial".into(),
        "coefficient".into(),
    ]];
    for j in 1..n {
        for (m, c) in clifford_terms(&phi_generator(j, n, &ctx)?) {
            rows.push(vec![format!("f{j}"), m, c.to_string()]);
        }
    }
    let mut json = json!({
        "n": n,
        "q_exp": ctx.q_exponent(),
        "generators": gens,
        "span_dimension": span,
    });
    let mut passed = true;
    if check {
        let cfg = VerifyConfig {
            q_exp,
            ising_max_n: n,
            ..VerifyConfig::default()
        };
        let suite = verify::run_suite("ising", &cfg, &Oracles::default()).expect("suite exists");
        passed = suite.passed;
        text.push_str(&format!(
            "{} {} checks{}\n",
            if suite.passed { "PASS" } else { "FAIL" },
            suite.checks,
            suite
                .counterexample
                .as_ref()
                .map(|c| format!(", first failure: {c}"))
                .unwrap_or_default()
        ));
        json["verify"] = serde_json::to_value(&suite).expect("suite serializes");
    }
    Ok((Output { json, rows, text }, passed))
}
