//! Three operations for the static page in `www/`, each returning JSON.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use tlq::diagram::diagram_words;
use tlq::dims::{quotient_dims, simple_dim, GIndex};
use tlq::fusion::{delta1_power, hom_pairing, FusionRing};
use tlq::jw::jw_explicit;
use tlq::scalars::RootContext;

const MAX_JW_ELL: u32 = 8;
const MAX_TABLE_N: usize = 40;

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// Terms of `E_{ℓ-1}` as generator words with exact and numeric coefficients.
pub fn jones_wenzl_json(ell: u32) -> Result<String, String> {
    if ell > MAX_JW_ELL {
        return Err(format!("ell is capped at {MAX_JW_ELL} in the browser"));
    }
    let ctx = RootContext::new(ell).map_err(err)?;
    let e = jw_explicit(&ctx).map_err(err)?;
    let words = diagram_words(e.n());
    let mut terms: Vec<(Vec<usize>, Value)> = e
        .terms()
        .map(|(d, c)| {
            let (re, im) = c.to_complex();
            (
                words[d].clone(),
                json!({ "word": words[d], "exact": c.to_string(), "re": re, "im": im }),
            )
        })
        .collect();
    terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    let terms: Vec<Value> = terms.into_iter().map(|(_, v)| v).collect();
    Ok(json!({ "ell": ell, "strands": e.n(), "terms": terms }).to_string())
}

/// `l_t(n)` for all `t ≤ n ≤ max_n`, with `null` off the parity diagonal.
pub fn dimension_table_json(ell: u32, max_n: usize) -> Result<String, String> {
    GIndex::new(ell).map_err(err)?;
    if max_n > MAX_TABLE_N {
        return Err(format!("n is capped at {MAX_TABLE_N} in the browser"));
    }
    let rows: Vec<Vec<Value>> = (0..=max_n)
        .map(|n| {
            (0..=max_n)
                .map(|t| {
                    if t <= n && (n - t) % 2 == 0 {
                        json!(simple_dim(t, n, ell).to_string())
                    } else {
                        Value::Null
                    }
                })
                .collect()
        })
        .collect();
    Ok(json!({ "ell": ell, "max_n": max_n, "rows": rows }).to_string())
}

/// The fusion table and `dim Q_n` computed from diagrams' simple modules
/// and from the fusion ring.
pub fn fusion_json(ell: u32, n: usize) -> Result<String, String> {
    if ell > 30 || n > 200 {
        return Err("ell is capped at 30 and n at 200 in the browser".into());
    }
    let ring = FusionRing::get(ell).map_err(err)?;
    let q = quotient_dims(n, ell).map_err(err)?;
    let power = delta1_power(n, ell).map_err(err)?;
    let pairing = hom_pairing(&power, &power).map_err(err)?;
    Ok(json!({
        "ell": ell,
        "n": n,
        "table": ring.table(),
        "delta1_power": power.multiplicities().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "sum_of_squares": q.sum_of_squares.to_string(),
        "l1": q.via_l1.to_string(),
        "pairing": pairing.to_string(),
        "agree": q.agree() && q.sum_of_squares == pairing,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn jones_wenzl(ell: u32) -> Result<String, JsError> {
    jones_wenzl_json(ell).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn dimension_table(ell: u32, max_n: usize) -> Result<String, JsError> {
    dimension_table_json(ell, max_n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fusion(ell: u32, n: usize) -> Result<String, JsError> {
    fusion_json(ell, n).map_err(|e| JsError::new(&e))
}
