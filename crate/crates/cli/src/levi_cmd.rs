//! `greenquad levi`: Levi spectrum report for a named form or a matrix file.

use clap::Args;
use greenquad::quadric::{levi_spectrum, SesquilinearForm};
use greenquad::C64;

use crate::parse_f64_list;

#[derive(Args)]
pub struct LeviArgs {
    /// Canonical form: heisenberg:<n>, hypersurface:<s1,s2,..>, zero-eigen,
    /// m1, m2, m3.
    #[arg(long, conflicts_with = "form_file")]
    pub form: Option<String>,
    /// JSON file {"n":..,"m":..,"matrices":[[[ [re,im], ..], ..], ..]}.
    #[arg(long)]
    pub form_file: Option<String>,
    /// Direction λ as comma-separated reals, e.g. 1,0.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

pub fn parse_form(name: &str) -> Result<SesquilinearForm, String> {
    let lower = name.trim().to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix("heisenberg:") {
        let n: usize = rest
            .parse()
            .map_err(|e| format!("heisenberg:<n> with integer n: {e}"))?;
        return SesquilinearForm::heisenberg(n).map_err(|e| e.to_string());
    }
    if let Some(rest) = lower.strip_prefix("hypersurface:") {
        let sigma = parse_f64_list(rest)?;
        return SesquilinearForm::hypersurface(&sigma).map_err(|e| e.to_string());
    }
    match lower.as_str() {
        "zero-eigen" => Ok(SesquilinearForm::zero_eigen_hypersurface()),
        "m1" => Ok(SesquilinearForm::m1()),
        "m2" => Ok(SesquilinearForm::m2()),
        "m3" => Ok(SesquilinearForm::m3()),
        other => Err(format!(
            "unknown form '{other}' (expected heisenberg:<n>, hypersurface:<σ..>, zero-eigen, m1, m2, m3)"
        )),
    }
}

fn parse_form_file(path: &str) -> Result<SesquilinearForm, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let n = v["n"].as_u64().ok_or("missing integer field 'n'")? as usize;
    let m = v["m"].as_u64().ok_or("missing integer field 'm'")? as usize;
    let mats = v["matrices"].as_array().ok_or("missing 'matrices'")?;
    if mats.len() != m {
        return Err(format!("expected {m} matrices, got {}", mats.len()));
    }
    let mut matrices = Vec::with_capacity(m);
    for mk in mats {
        let rows = mk.as_array().ok_or("matrix must be an array of rows")?;
        if rows.len() != n {
            return Err("matrix row count must equal n".into());
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in rows {
            let cols = row.as_array().ok_or("row must be an array")?;
            if cols.len() != n {
                return Err("matrix column count must equal n".into());
            }
            for e in cols {
                let pair = e.as_array().ok_or("entry must be [re, im]")?;
                if pair.len() != 2 {
                    return Err("entry must be [re, im]".into());
                }
                let re = pair[0].as_f64().ok_or("re must be a number")?;
                let im = pair[1].as_f64().ok_or("im must be a number")?;
                flat.push(C64::new(re, im));
            }
        }
        matrices.push(nalgebra_from_rows(n, &flat));
    }
    SesquilinearForm::new(n, m, matrices).map_err(|e| e.to_string())
}

fn nalgebra_from_rows(n: usize, flat: &[C64]) -> nalgebra::DMatrix<C64> {
    nalgebra::DMatrix::from_fn(n, n, |i, j| flat[i * n + j])
}

pub fn run(args: &LeviArgs) -> i32 {
    let form = match (&args.form, &args.form_file) {
        (Some(name), _) => parse_form(name),
        (None, Some(path)) => parse_form_file(path),
        (None, None) => Err("one of --form or --form-file is required".into()),
    };
    let form = match form {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let lambda = match parse_f64_list(&args.lambda) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match levi_spectrum(&form, &lambda) {
        Ok(spec) => {
            println!(
                "lambda = [{}]",
                lambda
                    .iter()
                    .map(|v| crate::fmt_f64(*v))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            println!(
                "mu = [{}]",
                spec.mu
                    .iter()
                    .map(|v| crate::fmt_f64(*v))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            println!("nu = {}", spec.nu);
            for i in 0..form.n() {
                let row: Vec<String> = (0..form.n())
                    .map(|j| {
                        let v = spec.basis[(i, j)];
                        format!(
                            "{}{}{}i",
                            crate::fmt_f64(v.re),
                            if v.im < 0.0 { "-" } else { "+" },
                            crate::fmt_f64(v.im.abs())
                        )
                    })
                    .collect();
                println!("basis[{i}] = [{}]", row.join(", "));
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
