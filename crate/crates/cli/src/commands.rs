//! Payload builders (JSON values) and their table renderings.

use std::ops::RangeInclusive;

use connexp::decomp::{connected_counts, derivative_coeffs};
use connexp::diagnostics::{gargantuan_check, Normalization};
use connexp::expansion::{exact_probability, inv_n_series, term_list};
use connexp::models::{default_builtins, ModelSpec, BUILTIN_IDS};
use connexp::verify::{has_oracle, verify_model, VerifyReport};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::render::{decimal_note, plain, rational, table};
use crate::CliError;

fn rat(v: &BigRational) -> Value {
    json!({ "numerator": v.numer().to_string(), "denominator": v.denom().to_string() })
}

fn int(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn models() -> Value {
    let instances: Vec<Value> = default_builtins()
        .iter()
        .map(|m| {
            json!({
                "id": m.id(),
                "period": m.period(),
                "ratio_kind": m.ratio_kind().to_string(),
                "connected_oracle": m.connected_oracle(),
                "derivative_class": m.derivative_class().map(|c| c.name.clone()),
                "description": m.description(),
            })
        })
        .collect();
    json!({ "families": BUILTIN_IDS, "models": instances })
}

pub fn coeffs(model: &ModelSpec, order: usize) -> Result<Value, CliError> {
    let seq = model.counts(order)?;
    let values: Vec<Value> = seq.terms().iter().enumerate().map(|(n, a)| json!({"n": n, "value": int(a)})).collect();
    Ok(json!({ "model": model.id(), "quantity": "total", "period": model.period(), "values": values }))
}

pub fn connected(model: &ModelSpec, order: usize) -> Result<Value, CliError> {
    let seq = connected_counts(model, order)?;
    let values: Vec<Value> = seq.terms().iter().enumerate().map(|(n, c)| json!({"n": n, "value": int(c)})).collect();
    Ok(json!({ "model": model.id(), "quantity": "connected", "period": model.period(), "values": values }))
}

pub fn derivative(model: &ModelSpec, order: usize, no_interpretation: bool) -> Result<Value, CliError> {
    let d = derivative_coeffs(model, order)?;
    let values: Vec<Value> = if no_interpretation {
        d.delta
            .iter()
            .enumerate()
            .map(|(n, x)| json!({"n": n, "value": rat(x)}))
            .collect()
    } else {
        let ints = d.derivative.as_ref().ok_or_else(|| {
            CliError::Domain("derivative numbers are not integral; use --no-interpretation".into())
        })?;
        ints.iter().enumerate().map(|(n, x)| json!({"n": n, "value": int(x)})).collect()
    };
    let class = (!no_interpretation)
        .then(|| d.interpretation.as_ref().map(|c| json!({"name": c.name, "reading": c.reading})))
        .flatten();
    Ok(json!({
        "model": model.id(),
        "quantity": if no_interpretation { "delta" } else { "derivative" },
        "period": model.period(),
        "class": class,
        "values": values,
    }))
}

pub fn expand(model: &ModelSpec, r: usize, sizes: &[usize]) -> Result<Value, CliError> {
    let list = term_list(model, r)?;
    let terms: Vec<Value> = list
        .terms
        .iter()
        .map(|t| {
            json!({
                "k": t.k,
                "size": t.size,
                "coefficient": rat(&t.coefficient()),
                "derivative": t.derivative.as_ref().map(int),
                "factor": t.factor,
                "expression": t.expression,
            })
        })
        .collect();
    let mut evaluations = Vec::new();
    for &n in sizes {
        let v = list.evaluate_at(n)?;
        evaluations.push(json!({"n": n, "value": rat(&v)}));
    }
    Ok(json!({
        "model": model.id(),
        "r": r,
        "period": model.period(),
        "terms": terms,
        "evaluations": evaluations,
    }))
}

pub fn series(model: &ModelSpec, r: usize) -> Result<Value, CliError> {
    Ok(inv_n_series(model, r)?.to_json())
}

pub fn exact(model: &ModelSpec, sizes: &[usize]) -> Result<Value, CliError> {
    let mut values = Vec::new();
    for &n in sizes {
        values.push(json!({"n": n, "value": rat(&exact_probability(model, n)?)}));
    }
    Ok(json!({ "model": model.id(), "period": model.period(), "values": values }))
}

pub fn diagnose(model: &ModelSpec, window: RangeInclusive<usize>, r_max: usize, raw: bool) -> Result<Value, CliError> {
    let counts = model.counts(window.end() * model.period())?;
    let norm = if raw { Normalization::Raw } else { Normalization::Egf };
    let report = gargantuan_check(&counts, window, r_max, norm)?;
    Ok(serde_json::to_value(report).expect("report serializes"))
}

/// Runs the cross-checks; stops after the first model with a mismatch.
pub fn verify(model: Option<&ModelSpec>, max_n: usize) -> Result<(Value, bool), CliError> {
    let models: Vec<ModelSpec> = match model {
        Some(m) => vec![m.clone()],
        None => default_builtins().into_iter().filter(has_oracle).collect(),
    };
    let mut reports: Vec<VerifyReport> = Vec::new();
    for m in &models {
        let rep = verify_model(m, max_n)?;
        let stop = !rep.pass;
        reports.push(rep);
        if stop {
            break;
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    let v = json!({ "max_n": max_n, "pass": pass, "reports": reports });
    Ok((v, pass))
}

fn rows_of(values: &Value, digits: Option<usize>) -> Vec<Vec<String>> {
    values
        .as_array()
        .map(|xs| {
            xs.iter()
                .map(|x| vec![plain(&x["n"]), rational(&x["value"], digits)])
                .collect()
        })
        .unwrap_or_default()
}

/// Human-readable rendering of a payload produced by the command `name`.
pub fn render_table(name: &str, v: &Value, digits: Option<usize>) -> String {
    let note = decimal_note(digits);
    match name {
        "models" => {
            let rows: Vec<Vec<String>> = v["models"]
                .as_array()
                .unwrap()
                .iter()
                .map(|m| {
                    vec![
                        plain(&m["id"]),
                        plain(&m["period"]),
                        plain(&m["ratio_kind"]),
                        plain(&m["derivative_class"]),
                        plain(&m["description"]),
                    ]
                })
                .collect();
            let families: Vec<String> = v["families"].as_array().unwrap().iter().map(plain).collect();
            format!(
                "{}\nfamilies: {}\n",
                table(&["model", "period", "ratio kind", "derivative class", "description"], &rows),
                families.join(", ")
            )
        }
        "coeffs" | "connected" => {
            let head = if name == "coeffs" { "a_n" } else { "c_n" };
            format!("model {}\n{}", plain(&v["model"]), table(&["n", head], &rows_of(&v["values"], None)))
        }
        "derivative" => {
            let head = if v["quantity"] == "delta" { "δ_n = d_n/n!" } else { "d_n" };
            let class = match &v["class"] {
                Value::Null => String::new(),
                c => format!("derivative class: {} (read as {})\n", plain(&c["name"]), plain(&c["reading"])),
            };
            format!(
                "model {}\n{class}{}",
                plain(&v["model"]),
                table(&["n", head], &rows_of(&v["values"], None))
            )
        }
        "expand" => {
            let terms: Vec<Vec<String>> = v["terms"]
                .as_array()
                .unwrap()
                .iter()
                .map(|t| vec![plain(&t["k"]), plain(&t["size"]), rational(&t["coefficient"], None), plain(&t["expression"])])
                .collect();
            let mut out = format!(
                "model {}, r = {}, period {}\n{}",
                plain(&v["model"]),
                plain(&v["r"]),
                plain(&v["period"]),
                table(&["k", "size", "coefficient", "term"], &terms)
            );
            let evals = rows_of(&v["evaluations"], digits);
            if !evals.is_empty() {
                out.push('\n');
                out.push_str(&table(&["n", "1 − Σ_{k≤r} term_k(n)"], &evals));
                out.push_str(&note);
            }
            out
        }
        "series" => {
            let rows: Vec<Vec<String>> = v["coefficients"]
                .as_array()
                .unwrap()
                .iter()
                .map(|c| vec![plain(&c["order"]), rational(c, digits)])
                .collect();
            format!(
                "model {}: P ≈ 1 − Σ e_j x^(−j), {}\n{}{note}",
                plain(&v["model"]),
                plain(&v["convention"]),
                table(&["j", "e_j"], &rows)
            )
        }
        "exact" => format!(
            "model {}\n{}{note}",
            plain(&v["model"]),
            table(&["n", "c_n/a_n"], &rows_of(&v["values"], digits))
        ),
        "diagnose" => {
            let sums = v["sums"].as_array().unwrap();
            let mut headers = vec!["m".to_string(), "a(m−1)/a(m)".to_string(), "m·a(m−1)/a(m)".to_string()];
            headers.extend(sums.iter().map(|s| format!("S_{}(m)", plain(&s["r"]))));
            headers.push("x_k decreasing".into());
            let ratios = v["ratios"].as_array().unwrap();
            let rows: Vec<Vec<String>> = ratios
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let n = &r["n"];
                    let mut row = vec![plain(n), rational(&r["value"], digits), rational(&v["scaled_ratios"][i]["value"], digits)];
                    for s in sums {
                        let cell = s["values"]
                            .as_array()
                            .unwrap()
                            .iter()
                            .find(|x| &x["n"] == n)
                            .map(|x| rational(&x["value"], digits))
                            .unwrap_or_else(|| "-".into());
                        row.push(cell);
                    }
                    row.push(plain(&v["monotone"][i]["decreasing"]));
                    row
                })
                .collect();
            let hs: Vec<&str> = headers.iter().map(String::as_str).collect();
            format!(
                "{} ({} values, lattice period {})\n{}{note}verdict: {}\n",
                plain(&v["label"]),
                plain(&v["normalization"]),
                plain(&v["period"]),
                table(&hs, &rows),
                plain(&v["verdict"])
            )
        }
        "verify" => {
            let mut out = String::new();
            for rep in v["reports"].as_array().unwrap() {
                let rows: Vec<Vec<String>> = rep["rows"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|r| {
                        vec![
                            plain(&r["quantity"]),
                            plain(&r["index"]),
                            rational(&r["computed"], None),
                            rational(&r["reference"], None),
                            if r["matched"] == true { "ok".into() } else { "MISMATCH".into() },
                        ]
                    })
                    .collect();
                out.push_str(&format!("model {}\n", plain(&rep["model"])));
                out.push_str(&table(&["quantity", "index", "series", "reference", "status"], &rows));
                for s in rep["skipped"].as_array().unwrap() {
                    out.push_str(&format!(
                        "skipped {} at {}: {}\n",
                        plain(&s["quantity"]),
                        plain(&s["index"]),
                        plain(&s["reason"])
                    ));
                }
                out.push_str(if rep["pass"] == true { "all matched\n\n" } else { "FAILED\n\n" });
            }
            out
        }
        _ => serde_json::to_string_pretty(v).unwrap(),
    }
}
